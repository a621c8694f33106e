//! Linear operators on `C_n[z]` given by their action on monomials, their
//! symbols, and sampled tests of the strip-preserver conditions.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ops::{DiffOp, MultiplierOp};
use crate::poly::Poly;
use crate::random;
use crate::roots::{find_roots, DEFAULT_TOL};
use crate::verdict::{SampleGrid, Verdict, Witness};
use crate::C64;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Truncated bivariate polynomial; `coeffs[j][k]` multiplies `z^j w^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct BivarTrunc {
    coeffs: Vec<Vec<C64>>,
}

impl BivarTrunc {
    /// Zero array of orders `max_z` and `max_w`.
    pub fn zeros(max_z: usize, max_w: usize) -> Self {
        BivarTrunc { coeffs: vec![vec![c(0.0, 0.0); max_w + 1]; max_z + 1] }
    }

    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self> {
        let w = rows.first().map(|r| r.len()).unwrap_or(0);
        if w == 0 || rows.iter().any(|r| r.len() != w) {
            return Err(Error::Invalid("bivariate rows must be non-empty and of equal length".into()));
        }
        Ok(BivarTrunc { coeffs: rows })
    }

    pub fn max_z(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn max_w(&self) -> usize {
        self.coeffs[0].len() - 1
    }

    pub fn get(&self, j: usize, k: usize) -> C64 {
        self.coeffs.get(j).and_then(|r| r.get(k)).copied().unwrap_or_default()
    }

    pub fn set(&mut self, j: usize, k: usize, v: C64) {
        self.coeffs[j][k] = v;
    }

    pub fn rows(&self) -> &[Vec<C64>] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().flatten().all(|v| *v == c(0.0, 0.0))
    }

    /// Nested Horner evaluation.
    pub fn eval(&self, z: C64, w: C64) -> C64 {
        self.coeffs
            .iter()
            .rev()
            .fold(c(0.0, 0.0), |acc, row| acc * z + row.iter().rev().fold(c(0.0, 0.0), |a, v| a * w + v))
    }

    /// `F(·, w)` as a polynomial in `z`.
    pub fn specialize_w(&self, w: C64) -> Poly {
        Poly::new(self.coeffs.iter().map(|row| row.iter().rev().fold(c(0.0, 0.0), |a, v| a * w + v)).collect())
    }

    /// `F(z, ·)` as a polynomial in `w`.
    pub fn specialize_z(&self, z: C64) -> Poly {
        let mw = self.max_w();
        Poly::new((0..=mw).map(|k| self.coeffs.iter().rev().fold(c(0.0, 0.0), |a, row| a * z + row[k])).collect())
    }

    /// `F(z, αw)`.
    pub fn scale_w(&self, alpha: f64) -> BivarTrunc {
        BivarTrunc {
            coeffs: self
                .coeffs
                .iter()
                .map(|row| row.iter().enumerate().map(|(k, v)| v * alpha.powi(k as i32)).collect())
                .collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &BivarTrunc) -> f64 {
        let mz = self.max_z().max(other.max_z());
        let mw = self.max_w().max(other.max_w());
        let mut m: f64 = 0.0;
        for j in 0..=mz {
            for k in 0..=mw {
                m = m.max((self.get(j, k) - other.get(j, k)).norm());
            }
        }
        m
    }
}

/// Linear operator on `C_n[z]` stored as `images[k] = T(z^k)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearOpTable {
    pub images: Vec<Poly>,
}

impl LinearOpTable {
    pub fn new(images: Vec<Poly>) -> Self {
        LinearOpTable { images }
    }

    /// Highest degree covered.
    pub fn degree(&self) -> usize {
        self.images.len().saturating_sub(1)
    }

    fn require(&self, n: usize) -> Result<()> {
        if self.images.len() < n + 1 {
            return Err(Error::TableTooShort { have: self.degree(), need: n });
        }
        Ok(())
    }

    pub fn apply(&self, p: &Poly) -> Result<Poly> {
        let Some(n) = p.degree() else { return Ok(Poly::zero()) };
        self.require(n)?;
        let mut out = Poly::zero();
        for (k, &ck) in p.coeffs().iter().enumerate() {
            if ck != c(0.0, 0.0) {
                out = &out + &self.images[k].scale(ck);
            }
        }
        Ok(out)
    }

    pub fn identity(n: usize) -> Self {
        LinearOpTable { images: (0..=n).map(|k| Poly::monomial(k, c(1.0, 0.0))).collect() }
    }

    pub fn zero(n: usize) -> Self {
        LinearOpTable { images: vec![Poly::zero(); n + 1] }
    }

    /// `T = D`.
    pub fn derivative(n: usize) -> Self {
        LinearOpTable { images: (0..=n).map(|k| Poly::monomial(k, c(1.0, 0.0)).derivative(1)).collect() }
    }

    /// `p(z) ↦ p(az)`.
    pub fn scale(a: f64, n: usize) -> Self {
        LinearOpTable { images: (0..=n).map(|k| Poly::monomial(k, c(a.powi(k as i32), 0.0))).collect() }
    }

    pub fn from_diffop(op: &DiffOp, n: usize) -> Result<Self> {
        let images = (0..=n).map(|k| op.apply(&Poly::monomial(k, c(1.0, 0.0)))).collect::<Result<Vec<_>>>()?;
        Ok(LinearOpTable { images })
    }

    pub fn from_multiplier(m: &MultiplierOp, n: usize) -> Result<Self> {
        let images = (0..=n).map(|k| m.apply(&Poly::monomial(k, c(1.0, 0.0)))).collect::<Result<Vec<_>>>()?;
        Ok(LinearOpTable { images })
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearOpTable) -> Result<Self> {
        let images = other.images.iter().map(|q| self.apply(q)).collect::<Result<Vec<_>>>()?;
        Ok(LinearOpTable { images })
    }

    /// Numerical rank of the coefficient matrix of the images.
    pub fn rank(&self, rel_tol: f64) -> usize {
        let rows = self.images.iter().map(|p| p.coeffs().len()).max().unwrap_or(0);
        let cols = self.images.len();
        let mut a: Vec<Vec<C64>> = (0..rows).map(|i| self.images.iter().map(|p| p.coeff(i)).collect()).collect();
        let scale = a.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return 0;
        }
        let mut rank = 0;
        for col in 0..cols {
            let Some(piv) = (rank..rows).max_by(|&x, &y| a[x][col].norm().partial_cmp(&a[y][col].norm()).unwrap())
            else {
                break;
            };
            if a[piv][col].norm() <= rel_tol * scale {
                continue;
            }
            a.swap(rank, piv);
            let (top, rest) = a.split_at_mut(rank + 1);
            let pivot = &top[rank];
            for row in rest.iter_mut() {
                let f = row[col] / pivot[col];
                for (x, p) in row[col..].iter_mut().zip(&pivot[col..]) {
                    *x -= p * f;
                }
            }
            rank += 1;
        }
        rank
    }
}

/// `G_T(z, w) = T((z + w)^n) = Σ_k C(n, k) w^{n-k} T(z^k)`.
pub fn algebraic_symbol(t: &LinearOpTable, n: usize) -> Result<BivarTrunc> {
    t.require(n)?;
    let mz = t.images[..=n].iter().map(|p| p.coeffs().len() - 1).max().unwrap_or(0);
    let mut out = BivarTrunc::zeros(mz, n);
    let mut binom = 1.0;
    for k in 0..=n {
        if k > 0 {
            binom = binom * (n - k + 1) as f64 / k as f64;
        }
        for (j, v) in t.images[k].coeffs().iter().enumerate() {
            out.coeffs[j][n - k] += v * binom;
        }
    }
    Ok(out)
}

/// `Σ_{k ≤ N} (-1)^k w^k T(z^k) / k!`, the truncation of `T(e^{-zw})`.
pub fn transcendental_symbol(t: &LinearOpTable, n: usize) -> Result<BivarTrunc> {
    t.require(n)?;
    let mz = t.images[..=n].iter().map(|p| p.coeffs().len() - 1).max().unwrap_or(0);
    let mut out = BivarTrunc::zeros(mz, n);
    let mut f = 1.0;
    for k in 0..=n {
        if k > 0 {
            f *= -1.0 / k as f64;
        }
        for (j, v) in t.images[k].coeffs().iter().enumerate() {
            out.coeffs[j][k] += v * f;
        }
    }
    Ok(out)
}

/// `F_T(z, w) = Σ_k Q_k(z) w^k` for `T = Σ_k Q_k(z) D^k`.
pub fn finite_diffop_symbol(q: &[Poly]) -> Result<BivarTrunc> {
    if q.is_empty() {
        return Err(Error::Invalid("empty coefficient list".into()));
    }
    let mz = q.iter().map(|p| p.coeffs().len() - 1).max().unwrap();
    let mut out = BivarTrunc::zeros(mz, q.len() - 1);
    for (k, p) in q.iter().enumerate() {
        for (j, v) in p.coeffs().iter().enumerate() {
            out.coeffs[j][k] = *v;
        }
    }
    Ok(out)
}

/// Open half-plane `Im z > level` (upper) or `Im z < level`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfPlane {
    pub upper: bool,
    pub level: f64,
}

impl HalfPlane {
    pub fn above(level: f64) -> Self {
        HalfPlane { upper: true, level }
    }

    pub fn below(level: f64) -> Self {
        HalfPlane { upper: false, level }
    }

    /// Signed depth inside the half-plane.
    pub fn depth(&self, z: C64) -> f64 {
        if self.upper {
            z.im - self.level
        } else {
            self.level - z.im
        }
    }

    fn at_depth(&self, x: f64, d: f64) -> C64 {
        c(x, if self.upper { self.level + d } else { self.level - d })
    }
}

/// A symbol split as (polynomial part) × (zero-free exponential factor).
#[derive(Clone, Debug, PartialEq)]
pub struct Symbol {
    pub poly: BivarTrunc,
    /// Description of an omitted factor such as `e^{-zw}` or `e^{iμw}`.
    pub exp_factor: Option<String>,
}

impl From<BivarTrunc> for Symbol {
    fn from(poly: BivarTrunc) -> Self {
        Symbol { poly, exp_factor: None }
    }
}

const W_DET_X: usize = 20;
const W_DET_Y: usize = 10;
const W_RANDOM: usize = 300;

/// Sample points of `zone`, denser near its boundary and near `Re w = 0`.
fn zone_samples(zone: &HalfPlane, grid: &SampleGrid) -> Vec<C64> {
    let (x0, x1) = grid.x_range;
    let (_, y1) = grid.y_range;
    let xm = 0.5 * (x0 + x1);
    let xr = 0.5 * (x1 - x0);
    let mut out = Vec::with_capacity(W_DET_X * W_DET_Y + W_RANDOM);
    for j in 0..W_DET_Y {
        let d = y1 * ((j + 1) as f64 / W_DET_Y as f64).powi(2);
        for i in 0..W_DET_X {
            let t = 2.0 * i as f64 / (W_DET_X - 1) as f64 - 1.0;
            out.push(zone.at_depth(xm + xr * t.powi(3), d));
        }
    }
    let mut rng = random::rng(grid.seed ^ 0x5a4b);
    for _ in 0..W_RANDOM {
        let t: f64 = rng.gen_range(-1.0..1.0);
        let u: f64 = rng.gen_range(0.0..1.0);
        out.push(zone.at_depth(xm + xr * t.powi(3), y1 * u.powi(2).max(1e-9)));
    }
    out
}

/// For sampled `w` in `zone_w`, checks that `F(·, w)` has no zero in
/// `zone_z`. A zero-free exponential factor is not root-checked.
pub fn bistability_sample_test(sym: &Symbol, zone_z: HalfPlane, zone_w: HalfPlane, grid: &SampleGrid) -> Verdict {
    let note_exp = sym.exp_factor.as_ref().map(|e| format!("; zero-free factor {e} omitted")).unwrap_or_default();
    if sym.poly.is_zero() {
        return Verdict::counterexample(
            Witness::pair(zone_z.at_depth(0.0, 1.0), zone_w.at_depth(0.0, 1.0)),
            0,
            "symbol is identically zero",
        );
    }
    let ws = zone_samples(&zone_w, grid);
    let mut samples = 0;
    for &w in &ws {
        samples += 1;
        let p = sym.poly.specialize_w(w);
        if p.is_zero() {
            return Verdict::counterexample(
                Witness::pair(zone_z.at_depth(0.0, 1.0), w),
                samples,
                format!("F(., w) vanishes identically at w = {w}"),
            );
        }
        if p.degree() == Some(0) {
            continue;
        }
        let rs = match find_roots(&p, DEFAULT_TOL) {
            Ok(rs) if rs.converged => rs,
            _ => return Verdict::inconclusive(samples, format!("root finder failed at w = {w}")),
        };
        for &z in &rs.roots {
            if zone_z.depth(z) > 1e-9 * (1.0 + z.norm()) {
                return Verdict::counterexample(
                    Witness::pair(z, w),
                    samples,
                    format!("F(z, w) = 0 at z = {z}, w = {w}{note_exp}"),
                );
            }
        }
    }
    let note = if sym.poly.max_z() == 0 && sym.poly.specialize_z(c(0.0, 0.0)).degree() == Some(0) {
        format!("constant polynomial part{note_exp}")
    } else {
        format!("sampled test: evidence, not proof{note_exp}")
    };
    Verdict::pass(samples, note)
}

/// Pushes strip-rooted polynomials of degree `<= n` through `T` and checks
/// that every image stays in `|Im z| <= mu` or is zero.
///
/// Deterministic boundary candidates `z - iμ`, `z + iμ`, `z² + μ²` come first,
/// followed by `grid.extra_random` seeded random complex and real inputs.
pub fn strip_char_falsify(t: &LinearOpTable, mu: f64, n: usize, grid: &SampleGrid) -> Verdict {
    if t.images.len() < n + 1 {
        return Verdict::inconclusive(0, format!("table covers degree {}, {n} required", t.degree()));
    }
    let mut notes = Vec::new();
    let rank = LinearOpTable::new(t.images[..=n].to_vec()).rank(1e-10);
    if rank <= 1 {
        notes.push(format!("rank {rank} operator: rank-one branch, functional not validated"));
    }
    let mut candidates = vec![
        Poly::new(vec![c(0.0, -mu), c(1.0, 0.0)]),
        Poly::new(vec![c(0.0, mu), c(1.0, 0.0)]),
        Poly::from_real(&[mu * mu, 0.0, 1.0]),
    ];
    candidates.retain(|p| p.degree().unwrap() <= n);
    let mut rng = random::rng(grid.seed);
    for i in 0..grid.extra_random.max(1) {
        let deg = rng.gen_range(1..=n.max(1));
        candidates.push(if i % 2 == 0 {
            random::complex_strip_poly(&mut rng, deg, mu)
        } else {
            random::real_strip_poly(&mut rng, deg, mu)
        });
    }
    let mut zeros = 0;
    let mut samples = 0;
    for p in &candidates {
        samples += 1;
        let q = match t.apply(p) {
            Ok(q) => q,
            Err(e) => return Verdict::inconclusive(samples, e.to_string()),
        };
        if q.is_zero() || q.max_abs() <= 1e-14 * p.max_abs() {
            zeros += 1;
            continue;
        }
        if q.degree() == Some(0) {
            continue;
        }
        let rs = match find_roots(&q, DEFAULT_TOL) {
            Ok(rs) => rs,
            Err(e) => return Verdict::inconclusive(samples, e.to_string()),
        };
        if let Some(&r) = rs.roots.iter().find(|r| r.im.abs() > mu + 1e-8 * (1.0 + r.norm())) {
            return Verdict::counterexample(
                Witness::Poly { input: p.clone(), output: q, root: [r.re, r.im] },
                samples,
                format!("image of {p} has zero {r} outside |Im z| <= {mu}"),
            );
        }
    }
    if zeros > 0 {
        notes.push(format!("{zeros} inputs mapped to 0"));
    }
    notes.push("sampled test: evidence, not proof".into());
    Verdict::pass(samples, notes.join("; "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::{op_bessel0, op_debruijn, op_gauss, op_sinc};
    use crate::verdict::Status;
    use proptest::prelude::*;

    fn re(v: f64) -> C64 {
        c(v, 0.0)
    }

    #[test]
    fn algebraic_examples() {
        let g = algebraic_symbol(&LinearOpTable::identity(2), 2).unwrap();
        assert_eq!(g.get(2, 0), re(1.0));
        assert_eq!(g.get(1, 1), re(2.0));
        assert_eq!(g.get(0, 2), re(1.0));
        let g = algebraic_symbol(&LinearOpTable::derivative(2), 2).unwrap();
        let expect = finite_diffop_symbol(&[Poly::from_real(&[0.0, 2.0]), Poly::from_real(&[2.0])]).unwrap();
        assert_eq!(g.max_abs_diff(&expect), 0.0);
        let m = LinearOpTable::from_multiplier(&MultiplierOp::new(vec![1.0, 1.0, 2.0]), 2).unwrap();
        let g = algebraic_symbol(&m, 2).unwrap();
        assert_eq!((g.get(0, 2), g.get(1, 1), g.get(2, 0)), (re(1.0), re(2.0), re(2.0)));
        assert!(matches!(algebraic_symbol(&LinearOpTable::identity(1), 2), Err(Error::TableTooShort { .. })));
    }

    #[test]
    fn transcendental_examples() {
        let s = transcendental_symbol(&LinearOpTable::identity(6), 6).unwrap();
        let mut f = 1.0;
        for k in 0..=6 {
            if k > 0 {
                f *= -1.0 / k as f64;
            }
            assert!((s.get(k, k) - re(f)).norm() < 1e-16);
        }
        let a1 = c(0.3, -0.7);
        let op = DiffOp::custom(vec![re(1.0), a1, re(0.0), re(0.0), re(0.0), re(0.0), re(0.0)]);
        let t = LinearOpTable::from_diffop(&op, 6).unwrap();
        let s = transcendental_symbol(&t, 6).unwrap();
        // (1 - a1 w) e^{-zw}: coefficient of z^j w^k is (-1)^j/j! [k = j] - a1 (-1)^j/j! [k = j + 1].
        let mut expect = BivarTrunc::zeros(6, 6);
        let mut f = 1.0;
        for j in 0..=6 {
            if j > 0 {
                f *= -1.0 / j as f64;
            }
            expect.set(j, j, re(f));
            if j < 6 {
                expect.set(j, j + 1, -a1 * f);
            }
        }
        assert!(s.max_abs_diff(&expect) < 1e-15);
        assert!(transcendental_symbol(&LinearOpTable::zero(4), 4).unwrap().is_zero());
    }

    #[test]
    fn finite_diffop_examples() {
        let s = finite_diffop_symbol(&[Poly::one()]).unwrap();
        assert_eq!((s.max_z(), s.max_w(), s.get(0, 0)), (0, 0, re(1.0)));
        let s = finite_diffop_symbol(&[Poly::one(), Poly::z()]).unwrap();
        assert_eq!(s.get(1, 1), re(1.0));
        let s = finite_diffop_symbol(&[Poly::from_real(&[0.0, 0.0, 1.0]), Poly::zero(), Poly::one()]).unwrap();
        assert_eq!(s.eval(c(1.0, 2.0), c(0.5, 0.0)), c(1.0, 2.0) * c(1.0, 2.0) + 0.25);
        assert!(finite_diffop_symbol(&[]).is_err());
    }

    #[test]
    fn bistability_examples() {
        let grid = SampleGrid::default();
        let f = finite_diffop_symbol(&[Poly::one(), Poly::z()]).unwrap();
        let v = bistability_sample_test(&f.clone().into(), HalfPlane::above(1.0), HalfPlane::above(0.0), &grid);
        assert_eq!(v.status, Status::Counterexample);
        let Some(Witness::Pair { a, b }) = v.witness else { panic!() };
        assert!(f.eval(c(a[0], a[1]), c(b[0], b[1])).norm() < 1e-10);
        assert!(f.eval(c(0.0, 2.0), c(0.0, 0.5)).norm() < 1e-15);

        let sym = Symbol { poly: finite_diffop_symbol(&[Poly::one()]).unwrap(), exp_factor: Some("e^{-zw}".into()) };
        let v = bistability_sample_test(&sym, HalfPlane::above(1.0), HalfPlane::above(0.0), &grid);
        assert_eq!(v.status, Status::Pass);
        assert!(v.note.contains("zero-free factor"));

        let zw = finite_diffop_symbol(&[Poly::z(), Poly::from_real(&[-1.0])]).unwrap();
        let v = bistability_sample_test(&zw.into(), HalfPlane::above(1.0), HalfPlane::below(-1.0), &grid);
        assert_eq!(v.status, Status::Pass);
    }

    fn rz_operator() -> LinearOpTable {
        let t1 = LinearOpTable::from_diffop(&op_gauss(3.0 / 8.0, 8), 8).unwrap();
        LinearOpTable::scale(0.5, 8).compose(&t1).unwrap()
    }

    #[test]
    fn strip_char_examples() {
        let grid = SampleGrid::small(0);
        let g = LinearOpTable::from_diffop(&op_gauss(1.0, 8), 8).unwrap();
        assert_eq!(strip_char_falsify(&g, 1.0, 8, &grid).status, Status::Pass);
        assert_eq!(strip_char_falsify(&LinearOpTable::identity(8), 1.0, 8, &grid).status, Status::Pass);
        let v = strip_char_falsify(&rz_operator(), 1.0, 8, &grid);
        assert_eq!(v.status, Status::Counterexample);
        let Some(Witness::Poly { input, root, .. }) = v.witness else { panic!() };
        assert_eq!(input, Poly::new(vec![c(0.0, -1.0), re(1.0)]));
        assert!((c(root[0], root[1]) - c(0.0, 2.0)).norm() < 1e-9);
    }

    #[test]
    fn rank_detection() {
        assert_eq!(LinearOpTable::identity(5).rank(1e-10), 6);
        assert_eq!(LinearOpTable::zero(5).rank(1e-10), 0);
        let r1 = LinearOpTable::new((0..5).map(|k| Poly::from_real(&[1.0, 2.0]).scale(re(k as f64 + 1.0))).collect());
        assert_eq!(r1.rank(1e-10), 1);
        let v = strip_char_falsify(&r1, 1.0, 4, &SampleGrid::small(0));
        assert!(v.note.contains("rank-one"));
    }

    #[test]
    fn builtin_narrowers_never_fail() {
        let mu = 1.0;
        let ops = [op_gauss(0.4, 8), op_debruijn(re(0.5), 0.7, 8).unwrap(), op_sinc(0.9, 8), op_bessel0(8)];
        for op in &ops {
            let t = LinearOpTable::from_diffop(op, 8).unwrap();
            for seed in 0..10 {
                let grid = SampleGrid { extra_random: 40, seed, ..SampleGrid::default() };
                let v = strip_char_falsify(&t, mu, 8, &grid);
                assert_ne!(v.status, Status::Counterexample, "{:?} seed {seed}: {}", op.family, v.note);
            }
        }
        let m = LinearOpTable::from_multiplier(&MultiplierOp::new((0..=8).map(|k| k as f64).collect()), 8).unwrap();
        assert_eq!(strip_char_falsify(&m, mu, 8, &SampleGrid::small(3)).status, Status::Pass);
    }

    #[test]
    fn degree_restriction_coherence() {
        let grid = SampleGrid::small(2);
        // T = e^{-D²}: H1 = {Im z > 1}, paired zone Im w > -1.
        let t = LinearOpTable::from_diffop(&op_gauss(1.0, 8), 8).unwrap();
        for n in (1..=6).rev() {
            let g = algebraic_symbol(&t, n).unwrap();
            let v = bistability_sample_test(&g.into(), HalfPlane::above(1.0), HalfPlane::above(-1.0), &grid);
            assert_eq!(v.status, Status::Pass, "n = {n}: {}", v.note);
        }
    }

    #[test]
    fn table_json() {
        let t = LinearOpTable::derivative(3);
        let s = serde_json::to_string(&t).unwrap();
        assert!(s.starts_with("{\"images\":["));
        assert_eq!(serde_json::from_str::<LinearOpTable>(&s).unwrap(), t);
    }

    proptest! {
        #[test]
        fn symbol_consistency(a in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..6), n in 4usize..10) {
            let mut series: Vec<C64> = a.iter().map(|&(x, y)| c(x, y)).collect();
            series.resize(n + 1, re(0.0));
            let op = DiffOp::custom(series.clone());
            let t = LinearOpTable::from_diffop(&op, n).unwrap();
            let s = transcendental_symbol(&t, n).unwrap();
            // f(-w) e^{-zw} truncated at w-order n.
            let mut expect = BivarTrunc::zeros(n, n);
            for j in 0..=n {
                let fj = (-1f64).powi(j as i32) / (1..=j).map(|m| m as f64).product::<f64>();
                for (i, ai) in series.iter().enumerate() {
                    if j + i <= n {
                        let v = expect.get(j, j + i) + ai * (-1f64).powi(i as i32) * fj;
                        expect.set(j, j + i, v);
                    }
                }
            }
            prop_assert!(s.max_abs_diff(&expect) <= 1e-12);
        }
    }
}
