use std::fmt;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::fem::SpatialFn;
use crate::numerics::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Chi,
    Exp,
    Sin,
    Cos,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Chi => "chi",
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
        }
    }

    fn arity(self) -> usize {
        match self {
            Func::Chi => 2,
            _ => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }

    fn prec(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
        }
    }
}

/// Parse tree of a spatial expression in `x`. Literals keep their source text
/// so that extended precision builds read them exactly.
#[derive(Clone, Debug, PartialEq)]
pub enum ExprAst {
    Num(String),
    X,
    Pi,
    Neg(Box<ExprAst>),
    Bin(BinOp, Box<ExprAst>, Box<ExprAst>),
    Pow(Box<ExprAst>, u32),
    Call(Func, Vec<ExprAst>),
}

impl ExprAst {
    fn prec(&self) -> u8 {
        match self {
            ExprAst::Bin(op, ..) => op.prec(),
            ExprAst::Neg(_) => 3,
            ExprAst::Pow(..) => 4,
            _ => 5,
        }
    }

    /// Endpoints of every `chi(a, b)`, sorted and deduplicated.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = Vec::new();
        self.collect_breakpoints(&mut out);
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out.dedup();
        out
    }

    fn collect_breakpoints(&self, out: &mut Vec<f64>) {
        match self {
            ExprAst::Call(Func::Chi, args) => {
                out.extend(args.iter().filter_map(literal_value));
            }
            ExprAst::Call(_, args) => args.iter().for_each(|a| a.collect_breakpoints(out)),
            ExprAst::Neg(e) | ExprAst::Pow(e, _) => e.collect_breakpoints(out),
            ExprAst::Bin(_, l, r) => {
                l.collect_breakpoints(out);
                r.collect_breakpoints(out);
            }
            _ => {}
        }
    }

    pub fn depends_on_x(&self) -> bool {
        match self {
            ExprAst::X | ExprAst::Call(Func::Chi, _) => true,
            ExprAst::Num(_) | ExprAst::Pi => false,
            ExprAst::Neg(e) | ExprAst::Pow(e, _) => e.depends_on_x(),
            ExprAst::Bin(_, l, r) => l.depends_on_x() || r.depends_on_x(),
            ExprAst::Call(_, args) => args.iter().any(|a| a.depends_on_x()),
        }
    }

    pub fn eval<R: Real>(&self, x: R) -> R {
        match self {
            ExprAst::Num(t) => literal::<R>(t),
            ExprAst::X => x,
            ExprAst::Pi => R::pi(),
            ExprAst::Neg(e) => -e.eval(x),
            ExprAst::Bin(op, l, r) => {
                let (a, b) = (l.eval(x), r.eval(x));
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                }
            }
            ExprAst::Pow(e, n) => e.eval(x).powi(*n as i32),
            ExprAst::Call(f, args) => match f {
                Func::Chi => {
                    let (a, b) = (args[0].eval(x), args[1].eval(x));
                    if x > a && x < b {
                        R::one()
                    } else {
                        R::zero()
                    }
                }
                Func::Exp => args[0].eval(x).exp(),
                Func::Sin => args[0].eval(x).sin_cos().0,
                Func::Cos => args[0].eval(x).sin_cos().1,
            },
        }
    }

    /// Compiles into a spatial function over `R`.
    pub fn compile<R: Real>(&self) -> CompiledExpr<R> {
        let zero = !self.depends_on_x() && self.eval(R::zero()) == R::zero();
        CompiledExpr { ast: self.clone(), breakpoints: self.breakpoints(), zero, _r: std::marker::PhantomData }
    }
}

fn literal<R: Real>(text: &str) -> R {
    R::parse_decimal(text).unwrap_or_else(|| R::from_f64(text.parse::<f64>().unwrap_or(f64::NAN)))
}

fn literal_value(e: &ExprAst) -> Option<f64> {
    match e {
        ExprAst::Num(t) => t.parse().ok(),
        ExprAst::Neg(inner) => literal_value(inner).map(|v| -v),
        _ => None,
    }
}

impl fmt::Display for ExprAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, e: &ExprAst, paren: bool| {
            if paren {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            ExprAst::Num(t) => write!(f, "{t}"),
            ExprAst::X => write!(f, "x"),
            ExprAst::Pi => write!(f, "pi"),
            ExprAst::Neg(e) => {
                write!(f, "-")?;
                wrap(f, e, e.prec() < 3)
            }
            ExprAst::Bin(op, l, r) => {
                wrap(f, l, l.prec() < op.prec())?;
                write!(f, " {} ", op.symbol())?;
                wrap(f, r, r.prec() <= op.prec())
            }
            ExprAst::Pow(e, n) => {
                wrap(f, e, e.prec() < 5)?;
                write!(f, "^{n}")
            }
            ExprAst::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Expression evaluated as a real spatial function.
#[derive(Clone, Debug)]
pub struct CompiledExpr<R: Real> {
    ast: ExprAst,
    breakpoints: Vec<f64>,
    zero: bool,
    _r: std::marker::PhantomData<R>,
}

impl<R: Real> CompiledExpr<R> {
    pub fn ast(&self) -> &ExprAst {
        &self.ast
    }
}

impl<R: Real> SpatialFn<R> for CompiledExpr<R> {
    fn eval(&self, x: R) -> Complex<R> {
        Complex::new(self.ast.eval(x), R::zero())
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.breakpoints.clone()
    }

    fn is_zero(&self) -> bool {
        self.zero
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, offset: usize, message: impl Into<String>) -> Result<T> {
        Err(Error::ExprParse { offset, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(self.pos, format!("expected '{c}'"))
        }
    }

    fn expr(&mut self) -> Result<ExprAst> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some('+') => BinOp::Add,
                Some('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = ExprAst::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<ExprAst> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some('*') => BinOp::Mul,
                Some('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = ExprAst::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<ExprAst> {
        if self.eat('-') {
            return Ok(ExprAst::Neg(Box::new(self.unary()?)));
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<ExprAst> {
        let base = self.atom()?;
        if self.eat('^') {
            self.skip_ws();
            let start = self.pos;
            let digits: String = self.src[start..].chars().take_while(|c| c.is_ascii_digit()).collect();
            if digits.is_empty() {
                return self.err(start, "exponent must be an unsigned integer");
            }
            self.pos += digits.len();
            let n: u32 = match digits.parse() {
                Ok(n) => n,
                Err(_) => return self.err(start, "exponent too large"),
            };
            return Ok(ExprAst::Pow(Box::new(base), n));
        }
        Ok(base)
    }

    fn number(&mut self) -> Result<ExprAst> {
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut i = start;
        while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
            i += 1;
        }
        if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
            let mut j = i + 1;
            if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                j += 1;
            }
            if j < bytes.len() && bytes[j].is_ascii_digit() {
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                i = j;
            }
        }
        let text = &self.src[start..i];
        if text.parse::<f64>().is_err() {
            return self.err(start, format!("malformed number '{text}'"));
        }
        self.pos = i;
        Ok(ExprAst::Num(text.to_string()))
    }

    fn atom(&mut self) -> Result<ExprAst> {
        let start = match self.peek() {
            None => return self.err(self.pos, "unexpected end of input"),
            Some(_) => self.pos,
        };
        let c = self.src[start..].chars().next().unwrap();
        if c.is_ascii_digit() || c == '.' {
            return self.number();
        }
        if c == '(' {
            self.pos += 1;
            let e = self.expr()?;
            self.expect(')')?;
            return Ok(e);
        }
        if c.is_ascii_alphabetic() {
            let ident: String = self.src[start..].chars().take_while(|c| c.is_ascii_alphanumeric()).collect();
            self.pos += ident.len();
            let func = match ident.as_str() {
                "x" => return Ok(ExprAst::X),
                "pi" => return Ok(ExprAst::Pi),
                "chi" => Func::Chi,
                "exp" => Func::Exp,
                "sin" => Func::Sin,
                "cos" => Func::Cos,
                _ => return self.err(start, format!("unknown identifier '{ident}'")),
            };
            self.expect('(')?;
            let mut args = vec![self.expr()?];
            while self.eat(',') {
                args.push(self.expr()?);
            }
            self.expect(')')?;
            if args.len() != func.arity() {
                return self.err(start, format!("{} takes {} argument(s), got {}", func.name(), func.arity(), args.len()));
            }
            if func == Func::Chi {
                let (a, b) = match (literal_value(&args[0]), literal_value(&args[1])) {
                    (Some(a), Some(b)) => (a, b),
                    _ => return self.err(start, "chi bounds must be numeric literals"),
                };
                if !(a < b) {
                    return self.err(start, format!("empty interval chi({a}, {b})"));
                }
            }
            return Ok(ExprAst::Call(func, args));
        }
        self.err(start, format!("unexpected character '{c}'"))
    }
}

/// Parses an expression; the grammar is the usual precedence climb over
/// `+ - * /`, unary minus, `^` with an unsigned integer exponent, the atoms
/// `x`, `pi` and numbers, and the functions `chi(a, b)`, `exp`, `sin`, `cos`.
pub fn parse_expr(text: &str) -> Result<ExprAst> {
    let mut p = Parser { src: text, pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err(p.pos, "trailing input");
    }
    Ok(e)
}
