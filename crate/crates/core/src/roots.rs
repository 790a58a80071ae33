//! Bracketed scalar root finding: bisection safeguarding Newton steps.
//!
//! The caller supplies a function returning `(value, slope)`. A Newton step
//! is taken whenever it lands strictly inside the current bracket and the
//! previous step shrank the bracket fast enough; otherwise the bracket is
//! bisected. The bracket therefore shrinks monotonically and the method
//! cannot diverge.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootOptions {
    /// Stop once `|f(x)| <= f_tol`.
    pub f_tol: f64,
    pub max_iter: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub fx: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RootError {
    /// `f(lo)` and `f(hi)` have the same strict sign.
    NotBracketed { f_lo: f64, f_hi: f64 },
    /// Iteration cap hit; carries the best iterate.
    MaxIterations(Root),
}

/// Find a root of `f` in `[lo, hi]`, starting from `guess` when it lies in
/// the bracket. Terminates on the residual tolerance or when the bracket
/// collapses to adjacent floats; in the latter case the endpoint with the
/// smaller residual is returned.
pub fn newton_bisect<F>(mut f: F, lo: f64, hi: f64, guess: Option<f64>, opts: RootOptions) -> Result<Root, RootError>
where
    F: FnMut(f64) -> (f64, f64),
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let (mut fa, _) = f(a);
    let (mut fb, _) = f(b);
    if fa.abs() <= opts.f_tol {
        return Ok(Root { x: a, fx: fa, iterations: 0 });
    }
    if fb.abs() <= opts.f_tol {
        return Ok(Root { x: b, fx: fb, iterations: 0 });
    }
    if fa.signum() == fb.signum() {
        return Err(RootError::NotBracketed { f_lo: fa, f_hi: fb });
    }

    let mut x = match guess {
        Some(g) if g > a && g < b => g,
        _ => 0.5 * (a + b),
    };
    let mut step_before = b - a;
    let mut step = step_before;
    let mut best = Root { x: a, fx: fa, iterations: 0 };

    for it in 1..=opts.max_iter {
        let (fx, dfx) = f(x);
        if fx.abs() < best.fx.abs() {
            best = Root { x, fx, iterations: it };
        }
        if fx.abs() <= opts.f_tol || fx == 0.0 {
            return Ok(Root { x, fx, iterations: it });
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        if next_up(a) >= b {
            let (x, fx) = if fa.abs() <= fb.abs() { (a, fa) } else { (b, fb) };
            return Ok(Root { x, fx, iterations: it });
        }

        // Newton only while it lands inside the bracket and its steps keep
        // halving; otherwise bisect.
        let newton = x - fx / dfx;
        let newton_ok =
            dfx.is_finite() && dfx != 0.0 && newton > a && newton < b && (fx / dfx).abs() * 2.0 <= step_before.abs();
        step_before = step;
        if newton_ok {
            step = fx / dfx;
            x = newton;
        } else {
            step = 0.5 * (b - a);
            x = a + step;
        }
        if x <= a || x >= b {
            x = a + 0.5 * (b - a);
        }
    }
    best.iterations = opts.max_iter;
    Err(RootError::MaxIterations(best))
}

fn next_up(x: f64) -> f64 {
    if x.is_nan() || x == f64::INFINITY {
        return x;
    }
    if x == 0.0 {
        return f64::from_bits(1);
    }
    let bits = x.to_bits();
    if x > 0.0 {
        f64::from_bits(bits + 1)
    } else {
        f64::from_bits(bits - 1)
    }
}

/// Central-difference slope, for functions without an analytic derivative.
pub fn central_slope<F: FnMut(f64) -> f64>(mut f: F, x: f64, lo: f64, hi: f64) -> f64 {
    let h = 1e-7 * x.abs().max(1e-9);
    let (xm, xp) = ((x - h).max(lo), (x + h).min(hi));
    if xp <= xm {
        return f64::NAN;
    }
    (f(xp) - f(xm)) / (xp - xm)
}

#[cfg(test)]
mod tests {
    use super::*;

    const OPTS: RootOptions = RootOptions { f_tol: 1e-14, max_iter: 200 };

    #[test]
    fn finds_sqrt2() {
        let r = newton_bisect(|x| (x * x - 2.0, 2.0 * x), 0.0, 2.0, None, OPTS).unwrap();
        assert!((r.x - 2f64.sqrt()).abs() < 1e-14);
        assert!(r.iterations < 10);
    }

    #[test]
    fn bad_slope_falls_back_to_bisection() {
        // wrong derivative sign: Newton steps leave the bracket and get rejected
        let r = newton_bisect(|x| (x.powi(3) - 0.3, -1.0), 0.0, 1.0, Some(0.9), OPTS).unwrap();
        assert!((r.x - 0.3f64.cbrt()).abs() < 1e-13);
    }

    #[test]
    fn not_bracketed() {
        let e = newton_bisect(|x| (x * x + 1.0, 2.0 * x), -1.0, 1.0, None, OPTS).unwrap_err();
        assert!(matches!(e, RootError::NotBracketed { .. }));
    }

    #[test]
    fn endpoint_root() {
        let r = newton_bisect(|x| (x, 1.0), 0.0, 1.0, None, OPTS).unwrap();
        assert_eq!(r.x, 0.0);
    }

    #[test]
    fn step_function_collapses_bracket() {
        // no exact zero: the bracket collapses onto the jump
        let r = newton_bisect(|x| (if x < 0.3 { -1.0 } else { 1.0 }, 0.0), 0.0, 1.0, None, OPTS).unwrap();
        assert!((r.x - 0.3).abs() < 1e-15);
    }

    #[test]
    fn iteration_cap() {
        let opts = RootOptions { f_tol: 0.0, max_iter: 3 };
        let e = newton_bisect(|x| (if x < 0.3 { -1.0 } else { 1.0 }, 0.0), 0.0, 1.0, None, opts).unwrap_err();
        assert!(matches!(e, RootError::MaxIterations(_)));
    }

    #[test]
    fn slope_estimate() {
        let d = central_slope(|x| x.sin(), 0.5, 0.0, 1.0);
        assert!((d - 0.5f64.cos()).abs() < 1e-7);
    }
}
