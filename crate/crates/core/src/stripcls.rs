//! Membership tests for the strip classes: modulus comparison against
//! `f*(z) = conj(f(conj z))`, μ-Wronskians, Hermite–Biehler pencils,
//! Eneström–Kakeya and the `Im{-f' conj f}` inequality.
//!
//! Every test here samples a universally quantified condition; `Pass` only
//! means no violation was found.

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::roots::{find_roots, DEFAULT_TOL};
use crate::verdict::{SampleGrid, Verdict, Witness};
use crate::C64;

/// Values in `[-GUARD, 0]` of a normalized strict inequality are inconclusive.
pub const GUARD: f64 = 1e-12;
const IDENTICAL: f64 = 1e-10;
const SAMPLED: &str = "sampled test: evidence, not proof";

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `(f(x+iμ) g(x-iμ) - f(x-iμ) g(x+iμ)) / (2μi)` for real `f`, `g`.
pub fn mu_wronskian(f: &Poly, g: &Poly, mu: f64, x: f64) -> Result<f64> {
    if !(mu > 0.0) {
        return Err(Error::Invalid(format!("mu-Wronskian needs mu > 0, got {mu}")));
    }
    let (v, scale) = mu_wronskian_raw(f, g, mu, x);
    if v.im.abs() > 1e-9 * scale + f64::MIN_POSITIVE {
        return Err(Error::NonReal { im: v.im, scale });
    }
    Ok(v.re)
}

/// Complex value and the magnitude scale of its two products.
fn mu_wronskian_raw(f: &Poly, g: &Poly, mu: f64, x: f64) -> (C64, f64) {
    let zp = c(x, mu);
    let zm = c(x, -mu);
    let a = f.eval(zp) * g.eval(zm);
    let b = f.eval(zm) * g.eval(zp);
    let v = (a - b) / c(0.0, 2.0 * mu);
    (v, (a.norm() + b.norm()) / (2.0 * mu))
}

/// `f'(x) g(x) - f(x) g'(x)`.
pub fn classical_wronskian(f: &Poly, g: &Poly, x: f64) -> f64 {
    let z = c(x, 0.0);
    (f.derivative(1).eval(z) * g.eval(z) - f.eval(z) * g.derivative(1).eval(z)).re
}

/// `(|f(z)| - |f*(z)|) / (|f(z)| + |f*(z)|)`, positive where the defining
/// inequality of `D_μ` holds.
pub fn dmu_margin(f: &Poly, z: C64) -> f64 {
    let a = f.eval(z).norm();
    let b = f.eval(z.conj()).norm();
    if a + b == 0.0 {
        0.0
    } else {
        (a - b) / (a + b)
    }
}

/// Splits `f = g + ih` with `g`, `h` real.
pub fn split_real_imag(f: &Poly) -> (Poly, Poly) {
    (f.real_part(), f.imag_part())
}

/// True when `f` is a complex scalar multiple of a real polynomial.
pub fn is_real_multiple(f: &Poly) -> bool {
    if f.is_zero() {
        return true;
    }
    let k = (0..f.coeffs().len()).max_by(|&a, &b| f.coeff(a).norm().partial_cmp(&f.coeff(b).norm()).unwrap()).unwrap();
    let u = f.coeff(k) / f.coeff(k).norm();
    let r = f.scale(u.conj());
    r.imag_ratio() <= 1e-12
}

/// λ samples above `mu` for the Wronskian criterion: `mu + max(mu, 1) 2^{-j}`.
pub fn lambda_samples(mu: f64) -> Vec<f64> {
    (0..=10).map(|j| mu + mu.max(1.0) * 0.5f64.powi(j)).collect()
}

/// Normalized `W_λ[h, g](x)`; the class condition is that this is negative.
fn wronskian_hg_normalized(g: &Poly, h: &Poly, lambda: f64, x: f64) -> f64 {
    let (v, scale) = mu_wronskian_raw(h, g, lambda, x);
    if scale == 0.0 {
        0.0
    } else {
        v.re / scale
    }
}

/// Sampled test of `f ∈ D_μ`: `|f(z)| > |f*(z)|` on `Im z > μ`, and
/// `W_λ[h, g](x) < 0` for `λ > μ` where `f = g + ih`.
pub fn in_dmu_sampled(f: &Poly, mu: f64, grid: &SampleGrid) -> Verdict {
    if is_real_multiple(f) {
        let z = c(0.0, mu + 1.0);
        return Verdict::counterexample(
            Witness::point(z),
            1,
            "complex multiple of a real polynomial: |f| = |f*| everywhere, never in D_mu",
        );
    }
    let mut samples = 0;
    let mut borderline: Option<String> = None;
    for (x, y) in grid.points() {
        let z = c(x, mu + y);
        let m = dmu_margin(f, z);
        samples += 1;
        if m < -GUARD {
            return Verdict::counterexample(
                Witness::point(z),
                samples,
                format!("|f(z)| < |f*(z)|, normalized margin {m:e}"),
            );
        }
        if m <= 0.0 && borderline.is_none() {
            borderline = Some(format!("modulus margin {m:e} at {z}"));
        }
    }
    let (g, h) = split_real_imag(f);
    let xs = grid.xs();
    let mut max_abs_w: f64 = 0.0;
    for lambda in lambda_samples(mu) {
        for &x in &xs {
            let w = wronskian_hg_normalized(&g, &h, lambda, x);
            samples += 1;
            max_abs_w = max_abs_w.max(w.abs());
            if w > GUARD {
                return Verdict::counterexample(
                    Witness::Params { values: vec![lambda, x] },
                    samples,
                    format!("W_lambda[h, g](x) > 0 at lambda = {lambda}, x = {x}"),
                );
            }
            if w >= -GUARD && borderline.is_none() {
                borderline = Some(format!("Wronskian {w:e} at lambda = {lambda}, x = {x}"));
            }
        }
    }
    if max_abs_w < IDENTICAL {
        return Verdict::inconclusive(samples, "INCONCLUSIVE-identical: W_lambda[h, g] vanishes on every sample");
    }
    match borderline {
        Some(b) => Verdict::inconclusive(samples, format!("strict inequality within guard: {b}")),
        None => Verdict::pass(samples, SAMPLED),
    }
}

/// Checks that every member `cos θ g + sin θ h`, `θ = πk/n_angles`, has its
/// zeros in `|Im z| <= mu + tol`.
///
/// The note reports the sign of `W_μ[h, g]` (the classical Wronskian when
/// `mu = 0`): negative somewhere means `g + ih` is on the `D_μ` side of the
/// dichotomy, otherwise `g - ih` is.
pub fn hb_pencil_test(g: &Poly, h: &Poly, mu: f64, n_angles: usize, tol: f64) -> Result<Verdict> {
    if !g.is_real() || !h.is_real() {
        return Err(Error::PreconditionFailed("pencil polynomials must be real".into()));
    }
    if g.is_zero() && h.is_zero() {
        return Err(Error::PreconditionFailed("g and h are both zero".into()));
    }
    let mut n = n_angles.max(1);
    let mut doubled = false;
    let mut samples = 0;
    loop {
        let mut min_slack = f64::INFINITY;
        for k in 0..n {
            let theta = std::f64::consts::PI * k as f64 / n as f64;
            let (s, cs) = theta.sin_cos();
            let member = &g.scale(c(cs, 0.0)) + &h.scale(c(s, 0.0));
            samples += 1;
            let scale = g.max_abs().max(h.max_abs());
            if member.is_zero() || member.max_abs() <= 1e-14 * scale {
                return Err(Error::DegeneratePencil { index: k });
            }
            if member.degree() == Some(0) {
                continue;
            }
            let rs = find_roots(&member, DEFAULT_TOL)?;
            let w = rs.strip_width().unwrap_or(f64::INFINITY);
            let slack = mu + tol - w;
            if slack < 0.0 {
                let r = rs.roots.iter().copied().max_by(|a, b| a.im.abs().partial_cmp(&b.im.abs()).unwrap()).unwrap();
                return Ok(Verdict::counterexample(
                    Witness::Params { values: vec![theta, r.re, r.im] },
                    samples,
                    format!("pencil member at theta = {theta} has a zero at {r}, width {w} > {mu}"),
                ));
            }
            min_slack = min_slack.min(slack);
        }
        if min_slack < 1e-6 && !doubled {
            doubled = true;
            n *= 2;
            continue;
        }
        break;
    }
    let side = wronskian_side(g, h, mu);
    Ok(Verdict::pass(samples, format!("{SAMPLED}; {side}")))
}

fn wronskian_side(g: &Poly, h: &Poly, mu: f64) -> String {
    let xs: Vec<f64> = (0..=80).map(|i| -10.0 + 0.25 * i as f64).collect();
    let mut neg = None;
    let mut pos = None;
    for &x in &xs {
        let w = if mu > 0.0 { mu_wronskian_raw(h, g, mu, x).0.re } else { classical_wronskian(h, g, x) };
        if w < 0.0 && neg.is_none() {
            neg = Some(x);
        }
        if w > 0.0 && pos.is_none() {
            pos = Some(x);
        }
    }
    match (neg, pos) {
        (Some(x), _) => format!("W_mu[h, g] < 0 at x = {x}: g + ih in D_mu"),
        (None, Some(x)) => format!("W_mu[h, g] > 0 at x = {x}: g - ih in D_mu"),
        (None, None) => "W_mu[h, g] vanishes on the samples".to_string(),
    }
}

/// Roots of a polynomial with non-negative non-decreasing coefficients lie in
/// the closed unit disk.
pub fn enestrom_kakeya_check(p: &Poly, slack: f64) -> Result<Verdict> {
    let cs = p.coeffs();
    if cs.iter().any(|a| a.im != 0.0 || a.re < 0.0) {
        return Err(Error::PreconditionFailed("coefficients must be real and non-negative".into()));
    }
    if cs.windows(2).any(|w| w[1].re < w[0].re) {
        return Err(Error::PreconditionFailed("coefficients must be non-decreasing".into()));
    }
    if p.degree().unwrap_or(0) == 0 {
        return Ok(Verdict::pass(0, "no roots"));
    }
    let rs = find_roots(p, DEFAULT_TOL)?;
    if !rs.converged {
        return Err(Error::Unconverged);
    }
    let r = rs.roots.iter().copied().max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap()).unwrap();
    if r.norm() <= 1.0 + slack {
        Ok(Verdict::pass(rs.roots.len(), format!("max root modulus {}", r.norm())))
    } else {
        Ok(Verdict::counterexample(Witness::point(r), rs.roots.len(), format!("root modulus {}", r.norm())))
    }
}

/// `Im{-f'(z) conj f(z)} / (|f'(z)| |f(z)|)`.
pub fn impart_value(f: &Poly, z: C64) -> f64 {
    let a = f.derivative(1).eval(z);
    let b = f.eval(z);
    let s = a.norm() * b.norm();
    if s == 0.0 {
        0.0
    } else {
        (-a * b.conj()).im / s
    }
}

/// Tests the equivalence: the real polynomial `f` has its zeros in
/// `|Im z| <= mu` iff `Im{-f'(z) conj f(z)} > 0` for every `Im z > mu`.
///
/// `Pass` means both sides agree; when both fail, the witness is the point
/// where the inequality breaks. After the grid, points just below each zero
/// above the strip are probed, since the violation region can be thin.
pub fn impart_test(f: &Poly, mu: f64, grid: &SampleGrid) -> Verdict {
    if f.degree().unwrap_or(0) == 0 {
        return Verdict::inconclusive(0, "constant polynomial");
    }
    if !f.is_real() {
        return Verdict::inconclusive(0, "polynomial is not real");
    }
    let rs = match find_roots(f, DEFAULT_TOL) {
        Ok(rs) if rs.converged => rs,
        _ => return Verdict::inconclusive(0, "root finder did not converge"),
    };
    let width = rs.strip_width().unwrap();
    let in_strip = width <= mu + 1e-8;
    let mut samples = 0;
    let mut violation = None;
    let mut borderline = false;
    let mut probes = Vec::new();
    for r in &rs.roots {
        let d = r.im.abs() - mu;
        if d > 1e-8 {
            for eps in [0.5, 0.1, 0.01] {
                probes.push((r.re, d * (1.0 - eps)));
            }
        }
    }
    for (x, y) in grid.points().into_iter().chain(probes) {
        let z = c(x, mu + y);
        samples += 1;
        let v = impart_value(f, z);
        if v < -GUARD {
            violation = Some((z, v));
            break;
        }
        if v <= 0.0 {
            borderline = true;
        }
    }
    match (in_strip, violation) {
        (true, None) if borderline => Verdict::inconclusive(samples, "inequality within guard on some sample"),
        (true, None) => Verdict::pass(samples, format!("zeros in strip (width {width}); inequality holds on samples")),
        (false, Some((z, v))) => Verdict {
            status: crate::verdict::Status::Pass,
            witness: Some(Witness::point(z)),
            samples_used: samples,
            note: format!("zeros leave the strip (width {width}); inequality fails at {z} with value {v:e}"),
        },
        (true, Some((z, v))) => Verdict::counterexample(
            Witness::point(z),
            samples,
            format!("zeros in strip but inequality fails at {z} with value {v:e}"),
        ),
        (false, None) => {
            let r = rs.roots.iter().copied().max_by(|a, b| a.im.abs().partial_cmp(&b.im.abs()).unwrap()).unwrap();
            Verdict::counterexample(
                Witness::point(r),
                samples,
                format!("zero {r} outside the strip but no sample violates the inequality"),
            )
        }
    }
}
