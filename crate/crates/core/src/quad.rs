//! Adaptive quadrature: Gauss–Legendre panels for complex integrands and
//! Simpson's rule for moments.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::C64;

const GL_N: usize = 20;
pub const PANEL_CAP: usize = 1 << 16;

/// Nodes and weights of the 20-point Gauss–Legendre rule on [-1, 1].
fn gl_rule() -> &'static ([f64; GL_N], [f64; GL_N]) {
    static RULE: OnceLock<([f64; GL_N], [f64; GL_N])> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_N;
        let mut x = [0.0; GL_N];
        let mut w = [0.0; GL_N];
        for i in 0..n {
            let mut t = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre(n, t);
                let dt = p / dp;
                t -= dt;
                if dt.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre(n, t);
            x[i] = t;
            w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
        }
        (x, w)
    })
}

fn legendre(n: usize, t: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = t;
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (t * p1 - p0) / (t * t - 1.0);
    (p1, dp)
}

fn gl_panel<F: Fn(f64) -> C64>(f: &F, a: f64, b: f64) -> C64 {
    let (x, w) = gl_rule();
    let h = 0.5 * (b - a);
    let m = 0.5 * (a + b);
    let mut s = C64::new(0.0, 0.0);
    for i in 0..GL_N {
        s += f(m + h * x[i]) * w[i];
    }
    s * h
}

/// `∫_a^b f(t) dt` to absolute error about `tol`.
///
/// The interval starts as `initial` equal panels; a panel is accepted when
/// the 20-point rule on it agrees with the sum over its halves to within its
/// share of `tol`.
pub fn gauss_legendre<F: Fn(f64) -> C64>(f: F, a: f64, b: f64, tol: f64, initial: usize) -> Result<C64> {
    if a == b {
        return Ok(C64::new(0.0, 0.0));
    }
    let len = (b - a).abs();
    let n0 = initial.max(1);
    let mut stack: Vec<(f64, f64, C64)> = (0..n0)
        .rev()
        .map(|k| {
            let lo = a + (b - a) * k as f64 / n0 as f64;
            let hi = a + (b - a) * (k + 1) as f64 / n0 as f64;
            (lo, hi, gl_panel(&f, lo, hi))
        })
        .collect();
    let mut total = C64::new(0.0, 0.0);
    let mut panels = n0;
    while let Some((lo, hi, whole)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = gl_panel(&f, lo, mid);
        let right = gl_panel(&f, mid, hi);
        let err = (left + right - whole).norm();
        let share = tol * (hi - lo).abs() / len;
        if err <= share || (hi - lo).abs() < 1e-14 * len {
            total += left + right;
            continue;
        }
        panels += 1;
        if panels > PANEL_CAP {
            return Err(Error::TolNotMet { tol, panels: PANEL_CAP });
        }
        stack.push((mid, hi, right));
        stack.push((lo, mid, left));
    }
    if !total.is_finite() {
        return Err(Error::TolNotMet { tol, panels });
    }
    Ok(total)
}

/// Integral of a complex function along the segment from `z0` to `z1`.
pub fn segment<F: Fn(C64) -> C64>(f: F, z0: C64, z1: C64, tol: f64, initial: usize) -> Result<C64> {
    let d = z1 - z0;
    let dn = d.norm();
    if dn == 0.0 {
        return Ok(C64::new(0.0, 0.0));
    }
    // Parametrize by arc length so `tol` keeps its absolute meaning.
    let unit = d / dn;
    let v = gauss_legendre(|s| f(z0 + unit * s), 0.0, dn, tol, initial)?;
    Ok(v * unit)
}

/// Adaptive Simpson integration of a real function.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn rec<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let diff = left + right - whole;
        if depth == 0 || diff.abs() <= 15.0 * tol {
            return left + right + diff / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(&f, a, b, fa, fm, fb, whole, tol, 48)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let v = gl_panel(&|t: f64| C64::new(t.powi(38), 0.0), -1.0, 1.0);
        assert!((v.re - 2.0 / 39.0).abs() < 1e-15);
        let (_, w) = gl_rule();
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn gaussian_integral() {
        let v = gauss_legendre(|t| C64::new((-t * t).exp(), 0.0), -10.0, 10.0, 1e-13, 16).unwrap();
        assert!((v.re - std::f64::consts::PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn segment_of_analytic_function() {
        // ∫ e^z dz from 0 to 1+i is e^{1+i} - 1.
        let v = segment(|z: C64| z.exp(), C64::new(0.0, 0.0), C64::new(1.0, 1.0), 1e-13, 4).unwrap();
        assert!((v - (C64::new(1.0, 1.0).exp() - 1.0)).norm() < 1e-13);
    }

    #[test]
    fn simpson_moments() {
        let v = simpson(|t| t.powi(4) * t.exp(), 0.0, 1.0, 1e-13);
        // ∫ t^4 e^t = e (1 - 4 + 12 - 24 + 24) - 24 = 9e - 24
        assert!((v - (9.0 * std::f64::consts::E - 24.0)).abs() < 1e-12);
    }
}
