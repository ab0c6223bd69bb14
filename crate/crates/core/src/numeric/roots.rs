//! Bracketing root finders. Bisection is used everywhere a root is solved in
//! this crate: the fixed-point conditions are only guaranteed to be
//! single-crossing, not globally convex, so derivative-based methods have no
//! safety advantage. A short secant polish tightens the residual once the
//! bracket is narrow.

/// A sign-change bracket `[lo, hi]` with `f(lo) * f(hi) <= 0`.
#[derive(Debug, Clone, Copy)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

/// Scan `n` uniformly spaced nodes on `[lo, hi]` and return every bracket where
/// the function changes sign. Nodes evaluating exactly to zero yield a
/// degenerate bracket at that node.
pub fn scan_brackets<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, n: usize) -> Vec<Bracket> {
    assert!(n >= 2 && hi > lo);
    let mut out = Vec::new();
    let step = (hi - lo) / (n - 1) as f64;
    let mut x_prev = lo;
    let mut f_prev = f(lo);
    for i in 1..n {
        let x = if i == n - 1 { hi } else { lo + step * i as f64 };
        let fx = f(x);
        if f_prev == 0.0 {
            out.push(Bracket { lo: x_prev, hi: x_prev });
        } else if fx != 0.0 && f_prev.signum() != fx.signum() {
            out.push(Bracket { lo: x_prev, hi: x });
        }
        x_prev = x;
        f_prev = fx;
    }
    if f_prev == 0.0 {
        out.push(Bracket { lo: x_prev, hi: x_prev });
    }
    out
}

/// Bisect a sign-change bracket down to width `x_tol`, then polish with a few
/// secant steps while they stay inside the bracket. Returns the best abscissa.
pub fn bisect<F: Fn(f64) -> f64>(f: F, bracket: Bracket, x_tol: f64) -> f64 {
    let (mut lo, mut hi) = (bracket.lo, bracket.hi);
    if lo == hi {
        return lo;
    }
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return lo;
    }
    if f_hi == 0.0 {
        return hi;
    }
    assert!(
        f_lo.signum() != f_hi.signum(),
        "bisect requires a sign change: f({lo})={f_lo}, f({hi})={f_hi}"
    );
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= x_tol || mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }

    // Secant polish: drives the residual toward machine level when the
    // function is smooth through the root.
    let mut x0 = lo;
    let mut x1 = hi;
    let mut y0 = f(x0);
    let mut y1 = f(x1);
    let mut best = if y0.abs() <= y1.abs() { x0 } else { x1 };
    let mut best_y = y0.abs().min(y1.abs());
    for _ in 0..8 {
        if y1 == y0 {
            break;
        }
        let x2 = x1 - y1 * (x1 - x0) / (y1 - y0);
        if !x2.is_finite() || x2 < bracket.lo || x2 > bracket.hi {
            break;
        }
        let y2 = f(x2);
        if y2.abs() < best_y {
            best_y = y2.abs();
            best = x2;
        }
        if y2 == 0.0 {
            return x2;
        }
        x0 = x1;
        y0 = y1;
        x1 = x2;
        y1 = y2;
    }
    best
}
