//! Overflow-safe evaluation of the log/exp expressions that show up in the
//! logit strategies and the fixed-point residual. For small information costs
//! the raw exponents reach several thousand, so everything is kept in log
//! space until the last moment.

/// `ln(1 + e^t)` without overflow for large `|t|`.
pub fn log1pexp(t: f64) -> f64 {
    if t > 0.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}

/// The logistic function `1 / (1 + e^{-t})`, accurate in both tails.
pub fn logistic(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

/// `ln(e^z - 1)` for `z > 0`.
pub fn ln_expm1(z: f64) -> f64 {
    if z > 36.0 {
        // e^{-z} is below 2e-16; ln(1 - e^{-z}) ~ -e^{-z}
        z - (-z).exp()
    } else {
        z.exp_m1().ln()
    }
}

/// Binary entropy in nats, `-p ln p - (1-p) ln(1-p)`, with the convention
/// `0 ln 0 = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    debug_assert!((-1e-12..=1.0 + 1e-12).contains(&p), "p={p}");
    let p = p.clamp(0.0, 1.0);
    xlnx(p) + xlnx(1.0 - p)
}

fn xlnx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.ln()
    }
}

/// Exact `∫_0^1 H(m0 + t (m1 - m0)) dt` where `H` is [`binary_entropy`].
///
/// Used to integrate the entropy of piecewise-linear signal strategies in
/// closed form; the antiderivative of `-m ln m` is `m^2/4 - (m^2/2) ln m`.
pub fn binary_entropy_integral(m0: f64, m1: f64) -> f64 {
    let (m0, m1) = (m0.clamp(0.0, 1.0), m1.clamp(0.0, 1.0));
    if (m1 - m0).abs() < 1e-14 {
        return binary_entropy(0.5 * (m0 + m1));
    }
    // F(m) = antiderivative of H(m) = -m ln m - (1-m) ln(1-m)
    fn f(m: f64) -> f64 {
        fn g(x: f64) -> f64 {
            // antiderivative of -x ln x
            if x <= 0.0 {
                0.0
            } else {
                x * x * (0.25 - 0.5 * x.ln())
            }
        }
        g(m) - g(1.0 - m)
    }
    (f(m1) - f(m0)) / (m1 - m0)
}
