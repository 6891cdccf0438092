use crate::numerics::dd::{DoubleDouble as DD, DD_PI};

// B_2 .. B_30
const BERNOULLI: [(i64, i64); 15] = [
    (1, 6),
    (-1, 30),
    (1, 42),
    (-1, 30),
    (5, 66),
    (-691, 2730),
    (7, 6),
    (-3617, 510),
    (43867, 798),
    (-174611, 330),
    (854513, 138),
    (-236364091, 2730),
    (8553103, 6),
    (-23749461029, 870),
    (8615841276005, 14322),
];

const STIRLING_MIN: f64 = 30.0;

fn is_nonpositive_integer(x: DD) -> bool {
    x.to_f64() <= 0.0 && x.floor() == x
}

fn stirling(y: DD) -> DD {
    let half_ln_2pi = (DD_PI * DD::from_f64(2.0)).ln() * DD::from_f64(0.5);
    let mut s = (y - DD::from_f64(0.5)) * y.ln() - y + half_ln_2pi;
    let inv = DD::ONE / y;
    let inv2 = inv * inv;
    let mut pow = inv;
    for (n, &(num, den)) in BERNOULLI.iter().enumerate() {
        let two_n = 2 * (n as i64 + 1);
        let b = DD::from_i64(num) / DD::from_i64(den);
        s += b * pow / DD::from_i64(two_n * (two_n - 1));
        pow *= inv2;
    }
    s
}

/// `sin(pi x)` with exact reduction of `x` modulo 2.
pub fn sin_pi(x: DD) -> DD {
    let two = DD::from_f64(2.0);
    let r = x - two * (x / two).floor();
    (r * DD_PI).sin_cos().0
}

/// `(ln |Gamma(x)|, sign Gamma(x))`; `None` at the poles.
pub fn ln_gamma(x: DD) -> Option<(DD, f64)> {
    if is_nonpositive_integer(x) {
        return None;
    }
    if x.to_f64() < 0.5 {
        // Gamma(x) Gamma(1 - x) = pi / sin(pi x)
        let s = sin_pi(x);
        let (lg, sg) = ln_gamma(DD::ONE - x)?;
        let sign = if s.to_f64() < 0.0 { -sg } else { sg };
        return Some((DD_PI.ln() - s.abs().ln() - lg, sign));
    }
    let mut y = x;
    let mut prod = DD::ONE;
    while y.to_f64() < STIRLING_MIN {
        prod *= y;
        y += DD::ONE;
    }
    Some((stirling(y) - prod.ln(), 1.0))
}

/// `1 / Gamma(x)`, zero at the poles.
pub fn rgamma(x: DD) -> DD {
    match ln_gamma(x) {
        None => DD::ZERO,
        Some((lg, sign)) => (-lg).exp() * DD::from_f64(sign),
    }
}
