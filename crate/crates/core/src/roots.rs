//! Root finding, strip widths, region membership and zero counting.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::C64;

pub const DEFAULT_TOL: f64 = 1e-12;
const MAX_ITER: usize = 200;

/// Computed roots of a polynomial.
///
/// `residuals[i]` is the backward error `|p(x)| / sum |c_k| |x|^k` at root `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSet {
    pub roots: Vec<C64>,
    pub residuals: Vec<f64>,
    pub converged: bool,
}

#[derive(Serialize, Deserialize)]
struct RootSetJson {
    roots: Vec<[f64; 2]>,
    residuals: Vec<f64>,
    #[serde(default = "yes")]
    converged: bool,
}

fn yes() -> bool {
    true
}

impl Serialize for RootSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RootSetJson {
            roots: self.roots.iter().map(|r| [r.re, r.im]).collect(),
            residuals: self.residuals.clone(),
            converged: self.converged,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RootSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = RootSetJson::deserialize(d)?;
        if j.roots.len() != j.residuals.len() {
            return Err(serde::de::Error::custom("roots and residuals differ in length"));
        }
        Ok(RootSet {
            roots: j.roots.iter().map(|r| C64::new(r[0], r[1])).collect(),
            residuals: j.residuals,
            converged: j.converged,
        })
    }
}

fn backward_error(p: &Poly, x: C64) -> f64 {
    let s = p.eval_abs(x);
    if s == 0.0 {
        0.0
    } else {
        p.eval(x).norm() / s
    }
}

/// All roots of `p` with multiplicity, by Aberth–Ehrlich iteration followed
/// by Newton polishing.
pub fn find_roots(p: &Poly, tol: f64) -> Result<RootSet> {
    let n = match p.degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(0) => return Err(Error::DegreeZero),
        Some(n) => n,
    };
    // Exact zeros at the origin are split off; the backward error at 0 of a
    // polynomial with c_0 = 0 is not a useful convergence measure.
    let c = p.coeffs();
    let nz = c.iter().take_while(|v| **v == C64::new(0.0, 0.0)).count();
    let mut roots = vec![C64::new(0.0, 0.0); nz];
    let mut residuals = vec![0.0; nz];
    let mut converged = true;
    if nz < n {
        let q = Poly::new(c[nz..].to_vec());
        let (r, res, ok) = aberth(&q, tol);
        roots.extend(r);
        residuals.extend(res);
        converged = ok;
    }
    Ok(RootSet { roots, residuals, converged })
}

fn aberth(p: &Poly, tol: f64) -> (Vec<C64>, Vec<f64>, bool) {
    let n = p.degree().unwrap();
    let c = p.coeffs();
    let lead = c[n].norm();
    if n == 1 {
        let r = -c[0] / c[1];
        return (vec![r], vec![backward_error(p, r)], true);
    }
    let cauchy = 1.0 + c[..n].iter().map(|v| v.norm() / lead).fold(0.0, f64::max);
    // Lower bound from the reciprocal polynomial keeps the seeds near the roots
    // when they are all small.
    let c0 = c[0].norm();
    let inner = c0 / (c0 + c[1..].iter().map(|v| v.norm()).fold(0.0, f64::max));
    let radius = (cauchy * inner).sqrt().max(inner).min(cauchy);
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let mut z: Vec<C64> =
        (0..n).map(|k| C64::from_polar(radius, std::f64::consts::TAU * k as f64 / n as f64 + golden + 0.4)).collect();
    let dp = p.derivative(1);
    let mut done = vec![false; n];
    let tol_eff = tol.max(4.0 * f64::EPSILON);
    for _ in 0..MAX_ITER {
        let mut all = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let zi = z[i];
            let pv = p.eval(zi);
            if backward_error(p, zi) <= tol_eff * 0.25 {
                done[i] = true;
                continue;
            }
            all = false;
            let ratio = pv / dp.eval(zi);
            let mut s = C64::new(0.0, 0.0);
            for (j, &zj) in z.iter().enumerate() {
                if j != i {
                    let d = zi - zj;
                    if d.norm() > 0.0 {
                        s += 1.0 / d;
                    }
                }
            }
            let denom = C64::new(1.0, 0.0) - ratio * s;
            let step =
                if denom.norm() == 0.0 || !denom.is_finite() || !ratio.is_finite() { ratio } else { ratio / denom };
            if step.is_finite() {
                z[i] = zi - step;
            } else {
                z[i] = zi + C64::new(1e-8 * (1.0 + zi.norm()), 1e-8);
            }
        }
        if all {
            break;
        }
    }
    // Newton polish, kept only when it lowers the residual.
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let d = dp.eval(*zi);
            if d.norm() == 0.0 {
                break;
            }
            let cand = *zi - p.eval(*zi) / d;
            if cand.is_finite() && backward_error(p, cand) < backward_error(p, *zi) {
                *zi = cand;
            } else {
                break;
            }
        }
    }
    let residuals: Vec<f64> = z.iter().map(|&x| backward_error(p, x)).collect();
    let ok = residuals.iter().all(|&r| r <= tol_eff);
    (z, residuals, ok)
}

impl RootSet {
    /// Largest `|Im r|` over the roots.
    pub fn strip_width(&self) -> Result<f64> {
        if !self.converged {
            return Err(Error::Unconverged);
        }
        Ok(self.roots.iter().map(|r| r.im.abs()).fold(0.0, f64::max))
    }

    pub fn max_modulus(&self) -> Result<f64> {
        if !self.converged {
            return Err(Error::Unconverged);
        }
        Ok(self.roots.iter().map(|r| r.norm()).fold(0.0, f64::max))
    }

    /// True iff every root lies in the closed region inflated by `slack`.
    pub fn in_region(&self, region: Region, slack: f64) -> Result<bool> {
        if !self.converged {
            return Err(Error::Unconverged);
        }
        Ok(self.roots.iter().all(|&r| region.contains(r, slack)))
    }
}

/// Closed regions of the plane used for zero-set membership.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    /// `|Im z| <= mu`
    Strip {
        mu: f64,
    },
    /// `Im z >= mu`
    UpperHalfplane {
        mu: f64,
    },
    /// `Im z <= mu`
    LowerHalfplane {
        mu: f64,
    },
    Disk {
        center: [f64; 2],
        r: f64,
    },
    DiskExterior {
        center: [f64; 2],
        r: f64,
    },
}

impl Region {
    pub fn contains(&self, z: C64, slack: f64) -> bool {
        match *self {
            Region::Strip { mu } => z.im.abs() <= mu + slack,
            Region::UpperHalfplane { mu } => z.im >= mu - slack,
            Region::LowerHalfplane { mu } => z.im <= mu + slack,
            Region::Disk { center, r } => (z - C64::new(center[0], center[1])).norm() <= r + slack,
            Region::DiskExterior { center, r } => (z - C64::new(center[0], center[1])).norm() >= r - slack,
        }
    }
}

/// Axis-aligned rectangle `[x_lo, x_hi] × [y_lo, y_hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
}

impl Rect {
    pub fn new(x_lo: f64, x_hi: f64, y_lo: f64, y_hi: f64) -> Result<Self> {
        if !(x_lo < x_hi && y_lo < y_hi) {
            return Err(Error::InvalidRect(format!("[{x_lo}, {x_hi}] x [{y_lo}, {y_hi}]")));
        }
        Ok(Rect { x_lo, x_hi, y_lo, y_hi })
    }

    pub fn contains(&self, z: C64) -> bool {
        z.re > self.x_lo && z.re < self.x_hi && z.im > self.y_lo && z.im < self.y_hi
    }

    fn corners(&self) -> [C64; 4] {
        [
            C64::new(self.x_lo, self.y_lo),
            C64::new(self.x_hi, self.y_lo),
            C64::new(self.x_hi, self.y_hi),
            C64::new(self.x_lo, self.y_hi),
        ]
    }
}

const PHASE_SAMPLE_CAP: usize = 1 << 20;
const GUARD_REL: f64 = 1e-12;

/// Number of zeros of `f` inside `rect`, by the argument principle.
///
/// Each side starts with `n_per_side` samples; a segment is bisected while the
/// phase step across it exceeds π/2.
pub fn count_zeros_rect<F>(f: F, rect: Rect, n_per_side: usize) -> Result<i64>
where
    F: Fn(C64) -> C64,
{
    let n = n_per_side.max(1);
    let corners = rect.corners();
    let mut pts: Vec<(C64, C64)> = Vec::with_capacity(4 * n + 1);
    for s in 0..4 {
        let a = corners[s];
        let b = corners[(s + 1) % 4];
        for k in 0..n {
            let z = a + (b - a) * (k as f64 / n as f64);
            pts.push((z, f(z)));
        }
    }
    pts.push((corners[0], f(corners[0])));
    let mut max_mod = pts.iter().map(|p| p.1.norm()).fold(0.0, f64::max);
    if !max_mod.is_finite() {
        return Err(Error::Invalid("evaluator returned a non-finite value on the contour".into()));
    }
    let guard = |v: C64, z: C64, m: f64| -> Result<()> {
        if !v.is_finite() {
            return Err(Error::Invalid("evaluator returned a non-finite value on the contour".into()));
        }
        if v.norm() <= GUARD_REL * m {
            return Err(Error::BoundaryZero { re: z.re, im: z.im });
        }
        Ok(())
    };
    for &(z, v) in &pts {
        guard(v, z, max_mod)?;
    }
    let mut total = 0.0;
    let mut samples = pts.len();
    for w in pts.windows(2) {
        let mut stack = vec![(w[0], w[1])];
        while let Some(((za, fa), (zb, fb))) = stack.pop() {
            let step = (fb / fa).arg();
            if step.abs() <= std::f64::consts::FRAC_PI_2 {
                total += step;
                continue;
            }
            samples += 1;
            if samples > PHASE_SAMPLE_CAP || (zb - za).norm() < 1e-15 * (1.0 + za.norm()) {
                return Err(Error::PhaseJump { cap: PHASE_SAMPLE_CAP });
            }
            let zm = (za + zb) * 0.5;
            let fm = f(zm);
            max_mod = max_mod.max(fm.norm());
            guard(fm, zm, max_mod)?;
            // Push the second half first so the first half is handled next.
            stack.push(((zm, fm), (zb, fb)));
            stack.push(((za, fa), (zm, fm)));
        }
    }
    let raw = total / std::f64::consts::TAU;
    let k = raw.round();
    if (raw - k).abs() > 0.25 {
        return Err(Error::PhaseJump { cap: PHASE_SAMPLE_CAP });
    }
    Ok(k as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn sorted_by_im(mut v: Vec<C64>) -> Vec<C64> {
        v.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap().then(a.re.partial_cmp(&b.re).unwrap()));
        v
    }

    #[test]
    fn quadratic_roots() {
        let rs = find_roots(&Poly::from_real(&[1.0, 0.0, 1.0]), DEFAULT_TOL).unwrap();
        assert!(rs.converged);
        let r = sorted_by_im(rs.roots.clone());
        assert!((r[0] - c(0.0, -1.0)).norm() < 1e-14);
        assert!((r[1] - c(0.0, 1.0)).norm() < 1e-14);
        assert_eq!(rs.strip_width().unwrap(), 1.0);

        let rs = find_roots(&Poly::from_real(&[2.0 / 3.0, 0.0, 1.0]), DEFAULT_TOL).unwrap();
        let w = rs.strip_width().unwrap();
        assert!((w - 0.816_496_580_927_726).abs() < 1e-14);
    }

    #[test]
    fn triple_root_cluster() {
        let p = Poly::from_roots(&[c(1.0, 0.0); 3], c(1.0, 0.0));
        let rs = find_roots(&p, DEFAULT_TOL).unwrap();
        assert!(rs.converged);
        for r in &rs.roots {
            assert!((r - c(1.0, 0.0)).norm() < 1e-4);
        }
    }

    #[test]
    fn errors_for_degenerate_input() {
        assert_eq!(find_roots(&Poly::zero(), DEFAULT_TOL), Err(Error::ZeroPolynomial));
        assert_eq!(find_roots(&Poly::from_real(&[3.0]), DEFAULT_TOL), Err(Error::DegreeZero));
        let bad = RootSet { roots: vec![c(0.0, 0.0)], residuals: vec![1.0], converged: false };
        assert_eq!(bad.strip_width(), Err(Error::Unconverged));
        assert_eq!(bad.in_region(Region::Strip { mu: 1.0 }, 0.0), Err(Error::Unconverged));
    }

    #[test]
    fn zero_roots_split_off() {
        let p = Poly::from_real(&[0.0, 0.0, 0.0, 1.0, 1.0]);
        let rs = find_roots(&p, DEFAULT_TOL).unwrap();
        assert!(rs.converged);
        assert_eq!(rs.roots.iter().filter(|r| r.norm() == 0.0).count(), 3);
        assert_eq!(find_roots(&Poly::monomial(2, c(1.0, 0.0)), DEFAULT_TOL).unwrap().strip_width().unwrap(), 0.0);
    }

    #[test]
    fn strip_width_examples() {
        let rs =
            RootSet { roots: vec![c(3.0, 0.0), c(-2.0, 0.0), c(0.5, 0.0)], residuals: vec![0.0; 3], converged: true };
        assert_eq!(rs.strip_width().unwrap(), 0.0);
    }

    #[test]
    fn region_examples() {
        let rs = RootSet { roots: vec![c(0.0, 0.5), c(0.0, -0.5)], residuals: vec![0.0; 2], converged: true };
        assert!(rs.in_region(Region::Strip { mu: 1.0 }, 0.0).unwrap());
        let rs = RootSet { roots: vec![c(0.0, 2.0)], residuals: vec![0.0], converged: true };
        assert!(!rs.in_region(Region::Strip { mu: 1.0 }, 0.0).unwrap());
        assert!(rs.in_region(Region::UpperHalfplane { mu: 1.0 }, 0.0).unwrap());
        assert!(!rs.in_region(Region::LowerHalfplane { mu: 1.0 }, 0.0).unwrap());
        assert!(rs.in_region(Region::DiskExterior { center: [0.0, 0.0], r: 1.0 }, 0.0).unwrap());
        let p = Poly::from_real(&[0.1, 0.4, 0.4, 0.9, 1.0]);
        let rs = find_roots(&p, DEFAULT_TOL).unwrap();
        assert!(rs.in_region(Region::Disk { center: [0.0, 0.0], r: 1.0 }, 1e-8).unwrap());
    }

    #[test]
    fn count_examples() {
        let p = Poly::from_real(&[1.0, 0.0, 1.0]);
        let f = |z| p.eval(z);
        assert_eq!(count_zeros_rect(f, Rect::new(-2.0, 2.0, 0.5, 2.0).unwrap(), 16).unwrap(), 1);
        assert_eq!(count_zeros_rect(f, Rect::new(-2.0, 2.0, 1.5, 3.0).unwrap(), 16).unwrap(), 0);
        assert_eq!(count_zeros_rect(|z: C64| z.exp(), Rect::new(-1.0, 1.0, -1.0, 1.0).unwrap(), 16).unwrap(), 0);
        assert_eq!(count_zeros_rect(f, Rect::new(-2.0, 2.0, -2.0, 2.0).unwrap(), 4).unwrap(), 2);
    }

    #[test]
    fn count_boundary_zero() {
        let p = Poly::from_real(&[1.0, 0.0, 1.0]);
        let r = count_zeros_rect(|z| p.eval(z), Rect::new(-2.0, 2.0, 1.0, 2.0).unwrap(), 8);
        assert!(matches!(r, Err(Error::BoundaryZero { .. })));
        assert!(Rect::new(1.0, 0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn rootset_json() {
        let rs = find_roots(&Poly::from_real(&[1.0, 0.0, 1.0]), DEFAULT_TOL).unwrap();
        let s = serde_json::to_string(&rs).unwrap();
        let back: RootSet = serde_json::from_str(&s).unwrap();
        assert_eq!(back, rs);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert!(v["roots"].is_array() && v["residuals"].is_array());
    }
}
