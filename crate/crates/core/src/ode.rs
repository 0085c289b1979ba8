//! Classic fixed-step fourth-order Runge-Kutta for complex amplitude vectors.

use num_complex::Complex64;

/// Integrate `dy/dt = f(t, y)` from `t0` to `t1` in `steps` equal steps.
pub fn rk4<F, const N: usize>(mut f: F, y0: [Complex64; N], t0: f64, t1: f64, steps: usize) -> [Complex64; N]
where
    F: FnMut(f64, &[Complex64; N]) -> [Complex64; N],
{
    let h = (t1 - t0) / steps as f64;
    let mut y = y0;
    let axpy = |y: &[Complex64; N], k: &[Complex64; N], a: f64| -> [Complex64; N] {
        std::array::from_fn(|i| y[i] + k[i] * a)
    };
    for n in 0..steps {
        let t = t0 + h * n as f64;
        let k1 = f(t, &y);
        let k2 = f(t + 0.5 * h, &axpy(&y, &k1, 0.5 * h));
        let k3 = f(t + 0.5 * h, &axpy(&y, &k2, 0.5 * h));
        let k4 = f(t + h, &axpy(&y, &k3, h));
        for i in 0..N {
            y[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0);
        }
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phase_rotation_is_fourth_order() {
        // i dy/dt = w y  =>  y(t) = exp(-i w t)
        let w = 1.3;
        let exact = Complex64::from_polar(1.0, -w * 10.0);
        let err = |steps| {
            let y = rk4(|_, y: &[Complex64; 1]| [Complex64::new(0.0, -w) * y[0]], [Complex64::new(1.0, 0.0)], 0.0, 10.0, steps);
            (y[0] - exact).norm()
        };
        let ratio = err(200) / err(400);
        assert!((ratio - 16.0).abs() < 1.0, "{ratio}");
    }
}
