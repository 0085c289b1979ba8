//! Derivative-free scalar minimization: golden-section search with
//! parabolic acceleration (Brent), plus three-point parabolic helpers.

use crate::error::{Error, Result};

const CGOLD: f64 = 0.381_966_011_250_105_1;
const EPS_REL: f64 = 4.0 * f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub fx: f64,
    pub evaluations: usize,
}

/// Minimize `f` on `[lo, hi]` to absolute tolerance `tol` in `x`.
///
/// The tolerance floor is a few ulps of `|x|`, so `tol` may be set well below
/// `sqrt(eps)` when the objective is smooth enough to resolve it.
pub fn brent_minimize<F>(mut f: F, lo: f64, hi: f64, tol: f64, max_iter: usize) -> Minimum
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut x = a + CGOLD * (b - a);
    let (mut w, mut v) = (x, x);
    let mut fx = f(x);
    let (mut fw, mut fv) = (fx, fx);
    let mut evaluations = 1;
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;

    for _ in 0..max_iter {
        let xm = 0.5 * (a + b);
        let tol1 = EPS_REL * x.abs() + tol / 3.0;
        let tol2 = 2.0 * tol1;
        if (x - xm).abs() <= tol2 - 0.5 * (b - a) {
            break;
        }

        let mut use_golden = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            } else {
                q = -q;
            }
            let e_prev = e;
            e = d;
            if p.abs() < (0.5 * q * e_prev).abs() && p > q * (a - x) && p < q * (b - x) {
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = tol1.copysign(xm - x);
                }
                use_golden = false;
            }
        }
        if use_golden {
            e = if x >= xm { a - x } else { b - x };
            d = CGOLD * e;
        }

        let u = if d.abs() >= tol1 { x + d } else { x + tol1.copysign(d) };
        let fu = f(u);
        evaluations += 1;

        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }

    Minimum { x, fx, evaluations }
}

/// Coarse grid scan followed by Brent refinement between the neighbours of the
/// best grid point. Fails when the extremum sits on the bracket edge.
pub fn bracketed_minimize<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<Minimum>
where
    F: FnMut(f64) -> f64,
{
    const SCAN_POINTS: usize = 65;
    let step = (hi - lo) / (SCAN_POINTS - 1) as f64;
    let mut best = 0;
    let mut best_f = f64::INFINITY;
    for i in 0..SCAN_POINTS {
        let fx = f(lo + step * i as f64);
        if fx < best_f {
            best_f = fx;
            best = i;
        }
    }
    if best == 0 || best == SCAN_POINTS - 1 {
        return Err(Error::BracketFailure { lo, hi, x: lo + step * best as f64 });
    }
    let a = lo + step * (best - 1) as f64;
    let b = lo + step * (best + 1) as f64;
    let mut min = brent_minimize(&mut f, a, b, tol, 500);
    min.evaluations += SCAN_POINTS;

    let margin = 1e-6 * (hi - lo) + 10.0 * tol;
    if min.x - lo <= margin || hi - min.x <= margin {
        return Err(Error::BracketFailure { lo, hi, x: min.x });
    }
    Ok(min)
}

/// As [`bracketed_minimize`] but for a maximum; `fx` holds the maximum value.
pub fn bracketed_maximize<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<Minimum>
where
    F: FnMut(f64) -> f64,
{
    let mut m = bracketed_minimize(|x| -f(x), lo, hi, tol)?;
    m.fx = -m.fx;
    Ok(m)
}

/// Vertex offset of the parabola through `(−h, y0), (0, y1), (h, y2)`,
/// in units of `h`. Returns 0 for a degenerate (flat or linear) triple.
pub fn parabolic_offset(y0: f64, y1: f64, y2: f64) -> f64 {
    let denom = y0 - 2.0 * y1 + y2;
    if denom == 0.0 || !denom.is_finite() {
        return 0.0;
    }
    let off = 0.5 * (y0 - y2) / denom;
    off.clamp(-1.0, 1.0)
}

/// Vertex `(x, y)` of the parabola through three points on a uniform grid of spacing `h`.
pub fn parabolic_vertex(x1: f64, h: f64, y0: f64, y1: f64, y2: f64) -> (f64, f64) {
    let off = parabolic_offset(y0, y1, y2);
    let y = y1 - 0.25 * (y0 - y2) * off;
    (x1 + off * h, y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_minimum() {
        let m = brent_minimize(|x| (x - 0.3).powi(2), -1.0, 2.0, 1e-12, 200);
        assert!((m.x - 0.3).abs() < 1e-10, "{m:?}");
        // an offset limits the resolvable argmin to about sqrt(eps)
        let m = brent_minimize(|x| (x - 0.3).powi(2) + 1.0, -1.0, 2.0, 1e-12, 200);
        assert!((m.x - 0.3).abs() < 3e-8, "{m:?}");
        assert!((m.fx - 1.0).abs() < 1e-15);
    }

    #[test]
    fn quartic_minimum_is_slow_but_found() {
        let m = brent_minimize(|x| (x - 1.25).powi(4), 0.0, 2.0, 1e-10, 500);
        assert!((m.x - 1.25).abs() < 1e-3, "{m:?}");
    }

    #[test]
    fn nonsmooth_minimum() {
        let m = brent_minimize(|x: f64| (x - 0.7).abs(), 0.0, 1.0, 1e-12, 500);
        assert!((m.x - 0.7).abs() < 1e-10, "{m:?}");
    }

    #[test]
    fn monotone_function_hits_bracket_edge() {
        let err = bracketed_minimize(|x| x, 0.0, 1.0, 1e-10).unwrap_err();
        assert!(matches!(err, Error::BracketFailure { .. }));
        let err = bracketed_maximize(|x| x, 0.0, 1.0, 1e-10).unwrap_err();
        assert!(matches!(err, Error::BracketFailure { .. }));
    }

    #[test]
    fn bracketed_picks_global_basin() {
        // two basins; the deeper one near 0.8
        let f = |x: f64| -(-(x - 0.2).powi(2) / 0.001).exp() - 2.0 * (-(x - 0.8).powi(2) / 0.001).exp();
        let m = bracketed_minimize(f, 0.0, 1.0, 1e-12).unwrap();
        assert!((m.x - 0.8).abs() < 1e-8);
    }

    #[test]
    fn parabolic_vertex_exact_for_parabola() {
        let g = |x: f64| 2.0 - 3.0 * (x - 0.37).powi(2);
        let (x, y) = parabolic_vertex(0.4, 0.1, g(0.3), g(0.4), g(0.5));
        assert!((x - 0.37).abs() < 1e-14);
        assert!((y - 2.0).abs() < 1e-14);
    }
}
