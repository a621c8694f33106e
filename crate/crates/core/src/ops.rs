//! Constant-coefficient differential operators `Σ a_k D^k` and diagonal
//! multipliers, with the width each family is known to guarantee.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::quad;
use crate::roots::{find_roots, DEFAULT_TOL};
use crate::sturm;
use crate::C64;

/// Series order stored by the closed-form constructors.
pub const DEFAULT_ORDER: usize = 40;

const ROOT_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Identity,
    /// `e^{iλD}`, translation by `iλ`.
    Shift {
        lambda: f64,
    },
    /// `ξ e^{iλD} + ξ̄ e^{-iλD}`.
    Debruijn {
        xi: C64,
        lambda: f64,
    },
    /// `e^{-λD²}`.
    Gauss {
        lambda: f64,
    },
    /// One half of the pair `h(D) e^{iλD}`, `h*(D) e^{-iλD}`; `conj` marks the
    /// second half.
    Strong {
        h: Poly,
        lambda: f64,
        conj: bool,
    },
    /// `sin(λD)/D`.
    Sinc {
        lambda: f64,
    },
    /// `∫_0^1 cos(λDt) g(t) dt` given the even moments of `g`.
    CosineTransform {
        lambda: f64,
        moments: Vec<f64>,
    },
    /// `J_0(D)`.
    Bessel0,
    Custom,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Identity => "identity",
            Family::Shift { .. } => "shift",
            Family::Debruijn { .. } => "debruijn",
            Family::Gauss { .. } => "gauss",
            Family::Strong { .. } => "strong",
            Family::Sinc { .. } => "sinc",
            Family::CosineTransform { .. } => "cosine_transform",
            Family::Bessel0 => "bessel0",
            Family::Custom => "custom",
        }
    }
}

/// `Σ a_k D^k` with `series[k] = a_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffOp {
    pub series: Vec<C64>,
    pub family: Family,
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// `x^k / k!` for `k = 0..=n`, built by recurrence.
fn exp_series(x: C64, n: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut t = c(1.0);
    for k in 0..=n {
        if k > 0 {
            t = t * x / k as f64;
        }
        out.push(t);
    }
    out
}

fn cauchy(a: &[C64], b: &[C64], n: usize) -> Vec<C64> {
    (0..=n)
        .map(|k| {
            let mut s = c(0.0);
            for j in 0..=k {
                if j < a.len() && k - j < b.len() {
                    s += a[j] * b[k - j];
                }
            }
            s
        })
        .collect()
}

fn series_for(family: &Family, n: usize) -> Result<Vec<C64>> {
    Ok(match family {
        Family::Identity => {
            let mut v = vec![c(0.0); n + 1];
            v[0] = c(1.0);
            v
        }
        Family::Shift { lambda } => exp_series(C64::new(0.0, *lambda), n),
        Family::Debruijn { xi, lambda } => exp_series(C64::new(0.0, *lambda), n)
            .into_iter()
            // ξ a + conj(ξ a) written so the result is exactly real.
            .map(|t| c(2.0 * (xi * t).re))
            .collect(),
        Family::Gauss { lambda } => {
            let mut v = vec![c(0.0); n + 1];
            let mut t = 1.0;
            for k in 0..=n / 2 {
                if k > 0 {
                    t *= -lambda / k as f64;
                }
                v[2 * k] = c(t);
            }
            v
        }
        Family::Strong { h, lambda, conj } => {
            let e = exp_series(C64::new(0.0, *lambda), n);
            let s = cauchy(h.coeffs(), &e, n);
            if *conj {
                s.into_iter().map(|v| v.conj()).collect()
            } else {
                s
            }
        }
        Family::Sinc { lambda } => {
            let mut v = vec![c(0.0); n + 1];
            // λ^{2k+1} / (2k+1)!
            let mut t = *lambda;
            for k in 0..=n / 2 {
                if k > 0 {
                    t *= -lambda * lambda / ((2 * k) as f64 * (2 * k + 1) as f64);
                }
                v[2 * k] = c(t);
            }
            v
        }
        Family::CosineTransform { lambda, moments } => {
            let have = 2 * (moments.len() - 1);
            let n = n.min(have);
            let mut v = vec![c(0.0); n + 1];
            let mut t = 1.0;
            for k in 0..=n / 2 {
                if k > 0 {
                    t *= -lambda * lambda / ((2 * k - 1) as f64 * (2 * k) as f64);
                }
                v[2 * k] = c(t * moments[k]);
            }
            v
        }
        Family::Bessel0 => {
            let mut v = vec![c(0.0); n + 1];
            let mut t = 1.0;
            for k in 0..=n / 2 {
                if k > 0 {
                    t *= -1.0 / (4.0 * (k * k) as f64);
                }
                v[2 * k] = c(t);
            }
            v
        }
        Family::Custom => return Err(Error::Invalid("custom operators have no closed-form series".into())),
    })
}

impl DiffOp {
    pub fn custom(series: Vec<C64>) -> Self {
        DiffOp { series, family: Family::Custom }
    }

    /// Highest power of `D` covered by the stored series.
    pub fn order(&self) -> usize {
        self.series.len().saturating_sub(1)
    }

    /// The same operator with its series regenerated to order `n`.
    pub fn with_order(&self, n: usize) -> Result<DiffOp> {
        match &self.family {
            Family::Custom => {
                if n > self.order() {
                    return Err(Error::TruncationTooShort { have: self.order(), need: n });
                }
                Ok(DiffOp::custom(self.series[..=n].to_vec()))
            }
            Family::CosineTransform { moments, .. } if n > 2 * (moments.len() - 1) => {
                Err(Error::TruncationTooShort { have: 2 * (moments.len() - 1), need: n })
            }
            f => Ok(DiffOp { series: series_for(f, n)?, family: f.clone() }),
        }
    }

    /// `Σ_{k ≤ deg p} a_k p^{(k)}`.
    pub fn apply(&self, p: &Poly) -> Result<Poly> {
        let n = match p.degree() {
            None => return Ok(Poly::zero()),
            Some(n) => n,
        };
        if self.series.len() < n + 1 {
            return Err(Error::TruncationTooShort { have: self.order(), need: n });
        }
        let pc = p.coeffs();
        let mut out = vec![c(0.0); n + 1];
        // Coefficient of z^j in a_k p^{(k)} is a_k c_{j+k} (j+k)!/j!.
        for (k, &a) in self.series[..=n].iter().enumerate() {
            if a == c(0.0) {
                continue;
            }
            for j in 0..=(n - k) {
                let f: f64 = ((j + 1)..=(j + k)).map(|m| m as f64).product();
                out[j] += a * pc[j + k] * f;
            }
        }
        Ok(Poly::new(out))
    }

    /// Cauchy product truncated at order `n`; `op1 ∘ op2`.
    pub fn compose(&self, other: &DiffOp, n: usize) -> Result<DiffOp> {
        for op in [self, other] {
            if op.series.len() < n + 1 {
                return Err(Error::TruncationTooShort { have: op.order(), need: n });
            }
        }
        Ok(DiffOp::custom(cauchy(&self.series[..=n], &other.series[..=n], n)))
    }

    /// `k`-fold composition truncated at order `n`, by repeated squaring.
    pub fn pow(&self, k: u64, n: usize) -> Result<DiffOp> {
        if self.series.len() < n + 1 {
            return Err(Error::TruncationTooShort { have: self.order(), need: n });
        }
        let mut result = op_identity(n);
        let mut base = DiffOp::custom(self.series[..=n].to_vec());
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.compose(&base, n)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.compose(&base, n)?;
            }
        }
        Ok(result)
    }

    /// Width the governing theorem guarantees for the image of a strip-`mu`
    /// polynomial. For the strong family this refers to the sum `T + T*`.
    pub fn predicted_width(&self, mu: f64) -> Result<f64> {
        let d2 = match &self.family {
            Family::Identity => mu * mu,
            Family::Debruijn { lambda, .. } | Family::Strong { lambda, .. } => mu * mu - lambda * lambda,
            Family::Gauss { lambda } => mu * mu - 2.0 * lambda,
            Family::Sinc { lambda } => mu * mu - lambda * lambda / 3.0,
            Family::CosineTransform { lambda, .. } => mu * mu - lambda * lambda / 4.0,
            Family::Bessel0 => mu * mu - 0.25,
            f @ (Family::Shift { .. } | Family::Custom) => return Err(Error::NoClaim(f.name().into())),
        };
        Ok(d2.max(0.0).sqrt())
    }

    /// Whether the family maps real polynomials to real polynomials.
    pub fn preserves_reality(&self) -> bool {
        match &self.family {
            Family::Identity | Family::Debruijn { .. } | Family::Gauss { .. } | Family::Sinc { .. } => true,
            Family::CosineTransform { .. } | Family::Bessel0 => true,
            Family::Shift { lambda } => *lambda == 0.0,
            Family::Strong { .. } => false,
            Family::Custom => self.series.iter().all(|a| a.im == 0.0),
        }
    }

    pub fn to_json(&self) -> OpJson {
        let params = match &self.family {
            Family::Identity | Family::Bessel0 | Family::Custom => json!({}),
            Family::Shift { lambda } | Family::Gauss { lambda } | Family::Sinc { lambda } => {
                json!({ "lambda": lambda })
            }
            Family::Debruijn { xi, lambda } => json!({ "xi": [xi.re, xi.im], "lambda": lambda }),
            Family::Strong { h, lambda, conj } => json!({ "h": h, "lambda": lambda, "conj": conj }),
            Family::CosineTransform { lambda, moments } => json!({ "lambda": lambda, "moments": moments }),
        };
        OpJson {
            family: self.family.name().to_string(),
            params,
            series: Some(self.series.iter().map(|a| [a.re, a.im]).collect()),
        }
    }

    /// Parses the wire format. Closed-form families are rebuilt from their
    /// parameters at order `max(order, DEFAULT_ORDER)`; `custom` requires a
    /// series.
    pub fn from_json(j: &OpJson, order: usize) -> Result<DiffOp> {
        let n = order.max(DEFAULT_ORDER);
        let num = |key: &str| -> Result<f64> {
            j.params
                .get(key)
                .and_then(Value::as_f64)
                .ok_or_else(|| Error::Invalid(format!("operator `{}` needs numeric param `{key}`", j.family)))
        };
        let lambda_or_zero = || j.params.get("lambda").and_then(Value::as_f64).unwrap_or(0.0);
        let op = match j.family.as_str() {
            "identity" => op_identity(n),
            "shift" => op_shift(num("lambda")?, n),
            "debruijn" => {
                let xi = match j.params.get("xi") {
                    Some(v) => serde_json::from_value::<[f64; 2]>(v.clone())
                        .map(|a| C64::new(a[0], a[1]))
                        .or_else(|_| num("xi").map(c))?,
                    None => c(0.5),
                };
                op_debruijn(xi, num("lambda")?, n)?
            }
            "gauss" => op_gauss(num("lambda")?, n),
            "strong" => {
                let h: Poly =
                    serde_json::from_value(j.params.get("h").cloned().unwrap_or(json!({"coeffs": [[1.0, 0.0]]})))
                        .map_err(|e| Error::Invalid(e.to_string()))?;
                let conj = j.params.get("conj").and_then(Value::as_bool).unwrap_or(false);
                let (t, ts) = op_strong(&h, lambda_or_zero(), n)?;
                if conj {
                    ts
                } else {
                    t
                }
            }
            "sinc" => op_sinc(num("lambda")?, n),
            "cosine_transform" => {
                let moments: Vec<f64> = serde_json::from_value(j.params.get("moments").cloned().unwrap_or(Value::Null))
                    .map_err(|e| Error::Invalid(format!("cosine_transform moments: {e}")))?;
                op_cosine_transform(&moments, num("lambda")?, 2 * moments.len().saturating_sub(1))?
            }
            "bessel0" => op_bessel0(n),
            "custom" => {
                let s = j.series.as_ref().ok_or_else(|| Error::Invalid("custom operator needs a series".into()))?;
                if s.is_empty() {
                    return Err(Error::Invalid("custom operator series is empty".into()));
                }
                DiffOp::custom(s.iter().map(|a| C64::new(a[0], a[1])).collect())
            }
            other => return Err(Error::Invalid(format!("unknown operator family `{other}`"))),
        };
        Ok(op)
    }
}

/// Operator wire format `{"family": ..., "params": {...}, "series": [[re, im], ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpJson {
    pub family: String,
    #[serde(default = "empty_object")]
    pub params: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<Vec<[f64; 2]>>,
}

fn empty_object() -> Value {
    json!({})
}

pub fn op_identity(n: usize) -> DiffOp {
    DiffOp { series: series_for(&Family::Identity, n).unwrap(), family: Family::Identity }
}

/// `e^{iλD}`: `p(z) ↦ p(z + iλ)`.
pub fn op_shift(lambda: f64, n: usize) -> DiffOp {
    let f = Family::Shift { lambda };
    DiffOp { series: series_for(&f, n).unwrap(), family: f }
}

pub fn op_debruijn(xi: C64, lambda: f64, n: usize) -> Result<DiffOp> {
    if xi == c(0.0) {
        return Err(Error::ZeroXi);
    }
    let f = Family::Debruijn { xi, lambda };
    Ok(DiffOp { series: series_for(&f, n)?, family: f })
}

pub fn op_gauss(lambda: f64, n: usize) -> DiffOp {
    let f = Family::Gauss { lambda };
    DiffOp { series: series_for(&f, n).unwrap(), family: f }
}

/// `(T, T*)` with `T = h(D) e^{iλD}`; `h` must have all its roots in the
/// closed upper half-plane.
pub fn op_strong(h: &Poly, lambda: f64, n: usize) -> Result<(DiffOp, DiffOp)> {
    if h.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if h.degree().unwrap() > 0 {
        let rs = find_roots(h, DEFAULT_TOL)?;
        if let Some(r) = rs.roots.iter().find(|r| r.im < -ROOT_SLACK) {
            return Err(Error::RootPlacement { re: r.re, im: r.im });
        }
    }
    let ft = Family::Strong { h: h.clone(), lambda, conj: false };
    let fs = Family::Strong { h: h.clone(), lambda, conj: true };
    Ok((DiffOp { series: series_for(&ft, n)?, family: ft }, DiffOp { series: series_for(&fs, n)?, family: fs }))
}

/// `T p + T* p`.
pub fn apply_strong_sum(pair: &(DiffOp, DiffOp), p: &Poly) -> Result<Poly> {
    Ok(&pair.0.apply(p)? + &pair.1.apply(p)?)
}

/// `sin(λD)/D = Σ (-1)^k λ^{2k+1} D^{2k} / (2k+1)!`.
pub fn op_sinc(lambda: f64, n: usize) -> DiffOp {
    let f = Family::Sinc { lambda };
    DiffOp { series: series_for(&f, n).unwrap(), family: f }
}

/// `a_{2k} = (-1)^k λ^{2k} m_k / (2k)!` where `m_k = ∫_0^1 t^{2k} g(t) dt`.
///
/// Requires `moments.len() > ⌈n/2⌉` and strictly decreasing positive moments.
pub fn op_cosine_transform(moments: &[f64], lambda: f64, n: usize) -> Result<DiffOp> {
    let need = n.div_ceil(2);
    if moments.len() <= need {
        return Err(Error::PrefixTooShort { len: moments.len(), need });
    }
    for (k, m) in moments.iter().enumerate() {
        if !(*m > 0.0) || (k > 0 && !(*m < moments[k - 1])) {
            return Err(Error::MomentsMisordered { index: k });
        }
    }
    let f = Family::CosineTransform { lambda, moments: moments.to_vec() };
    Ok(DiffOp { series: series_for(&f, n)?, family: f })
}

/// `m_k = ∫_0^1 t^{2k} g(t) dt` for `k = 0..count`, by adaptive Simpson.
pub fn moments<G: Fn(f64) -> f64>(g: G, count: usize, tol: f64) -> Vec<f64> {
    (0..count).map(|k| quad::simpson(|t| t.powi(2 * k as i32) * g(t), 0.0, 1.0, tol)).collect()
}

/// `J_0(D) = Σ (-1)^k D^{2k} / (4^k (k!)^2)`.
pub fn op_bessel0(n: usize) -> DiffOp {
    DiffOp { series: series_for(&Family::Bessel0, n).unwrap(), family: Family::Bessel0 }
}

/// True when the image has degree at most 0, a legal collapse.
pub fn is_degenerate(out: &Poly) -> bool {
    out.degree().unwrap_or(0) == 0
}

/// `T(z^k) = γ_k z^k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiplierOp {
    pub gamma: Vec<f64>,
}

impl MultiplierOp {
    pub fn new(gamma: Vec<f64>) -> Self {
        MultiplierOp { gamma }
    }

    pub fn apply(&self, p: &Poly) -> Result<Poly> {
        apply_multiplier(self, p)
    }

    /// `mu` when `γ` or `(-1)^k γ` is a multiple of a non-negative,
    /// non-decreasing multiplier sequence on the stored prefix.
    ///
    /// The multiplier-sequence property is checked through its Jensen
    /// polynomials `Σ C(n,k) γ_k z^k`, which must be real-rooted for every `n`
    /// within the prefix.
    pub fn predicted_width(&self, mu: f64) -> Result<f64> {
        let alt: Vec<f64> = self.gamma.iter().enumerate().map(|(k, g)| if k % 2 == 0 { *g } else { -g }).collect();
        for cand in [&self.gamma, &alt] {
            let Some(first) = cand.iter().find(|g| **g != 0.0) else {
                // The zero operator maps everything to 0.
                return Ok(0.0);
            };
            let s = first.signum();
            let seq: Vec<f64> = cand.iter().map(|g| g * s).collect();
            let monotone = seq.iter().all(|g| *g >= 0.0) && seq.windows(2).all(|w| w[0] <= w[1]);
            if monotone && jensen_real_rooted(&seq) {
                return Ok(mu);
            }
        }
        Err(Error::NoClaim("multiplier".into()))
    }
}

fn jensen_real_rooted(seq: &[f64]) -> bool {
    (1..seq.len()).all(|n| {
        let mut binom = 1.0;
        let coeffs: Vec<f64> = (0..=n)
            .map(|k| {
                if k > 0 {
                    binom = binom * (n - k + 1) as f64 / k as f64;
                }
                binom * seq[k]
            })
            .collect();
        sturm::real_rooted(&coeffs)
    })
}

pub fn apply_multiplier(m: &MultiplierOp, p: &Poly) -> Result<Poly> {
    let Some(n) = p.degree() else { return Ok(Poly::zero()) };
    if m.gamma.len() < n + 1 {
        return Err(Error::TruncationTooShort { have: m.gamma.len().saturating_sub(1), need: n });
    }
    Ok(Poly::new(p.coeffs().iter().zip(&m.gamma).map(|(a, g)| a * g).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use proptest::prelude::*;

    fn width(p: &Poly) -> f64 {
        find_roots(p, DEFAULT_TOL).unwrap().strip_width().unwrap()
    }

    #[test]
    fn apply_examples() {
        let p = Poly::from_real(&[1.0, 0.0, 1.0]);
        assert_eq!(op_gauss(0.5, 8).apply(&p).unwrap(), Poly::from_real(&[0.0, 0.0, 1.0]));
        assert_eq!(op_identity(8).apply(&p).unwrap(), p);
        let s = op_sinc(1.0, 8).apply(&p).unwrap();
        assert!(s.max_coeff_diff(&Poly::from_real(&[2.0 / 3.0, 0.0, 1.0])) < 1e-15);
        let short = DiffOp::custom(vec![c(1.0)]);
        assert_eq!(short.apply(&p), Err(Error::TruncationTooShort { have: 0, need: 2 }));
    }

    #[test]
    fn compose_examples() {
        let id = op_shift(0.7, 10).compose(&op_shift(-0.7, 10), 10).unwrap();
        assert!(id.series.iter().enumerate().all(|(k, a)| (a - if k == 0 { c(1.0) } else { c(0.0) }).norm() < 1e-15));
        let d = DiffOp::custom(vec![c(0.0), c(1.0), c(0.0)]);
        assert_eq!(d.compose(&d, 2).unwrap().series, vec![c(0.0), c(0.0), c(1.0)]);
        assert!(d.compose(&d, 3).is_err());
    }

    #[test]
    fn shift_examples() {
        let p = Poly::from_real(&[0.0, 0.0, 1.0]);
        assert_eq!(op_shift(0.0, 6).apply(&p).unwrap(), p);
        assert_eq!(op_shift(1.0, 6).apply(&Poly::z()).unwrap(), Poly::new(vec![C64::new(0.0, 1.0), c(1.0)]));
        assert_eq!(op_shift(1.0, 6).apply(&p).unwrap(), Poly::new(vec![c(-1.0), C64::new(0.0, 2.0), c(1.0)]));
        assert!(matches!(op_shift(1.0, 6).predicted_width(1.0), Err(Error::NoClaim(_))));
    }

    #[test]
    fn debruijn_examples() {
        let p = Poly::from_real(&[1.0, 0.0, 1.0]);
        let q = op_debruijn(c(0.5), 0.6, 8).unwrap().apply(&p).unwrap();
        assert!(q.is_real());
        assert!(q.max_coeff_diff(&Poly::from_real(&[0.64, 0.0, 1.0])) < 1e-15);
        assert!((width(&q) - 0.8).abs() < 1e-12);
        assert_eq!(op_debruijn(c(0.5), 0.0, 8).unwrap().apply(&p).unwrap(), p);
        let r = op_debruijn(C64::new(0.0, 0.5), 1.0, 8).unwrap().apply(&Poly::z()).unwrap();
        assert_eq!(r, Poly::from_real(&[-1.0]));
        assert!(is_degenerate(&r));
        assert_eq!(op_debruijn(c(0.0), 1.0, 8), Err(Error::ZeroXi));
    }

    #[test]
    fn gauss_examples() {
        let g = op_gauss(1.0, 12);
        for k in 0..=6 {
            let expect = (-1f64).powi(k as i32) / (1..=k).map(|m| m as f64).product::<f64>();
            assert!((g.series[2 * k].re - expect).abs() < 1e-16);
            if 2 * k < 12 {
                assert_eq!(g.series[2 * k + 1], c(0.0));
            }
        }
        let p = Poly::from_real(&[1.0, 0.0, 1.0]);
        assert_eq!(op_gauss(0.0, 4).apply(&p).unwrap(), p);
        let q = op_gauss(0.25, 4).apply(&p).unwrap();
        assert_eq!(q, Poly::from_real(&[0.5, 0.0, 1.0]));
        assert!((width(&q) - 0.5f64.sqrt()).abs() < 1e-14);
        let z4 = Poly::monomial(4, c(1.0));
        assert_eq!(op_gauss(1.0, 4).apply(&z4).unwrap(), Poly::from_real(&[12.0, 0.0, -12.0, 0.0, 1.0]));
    }

    #[test]
    fn strong_examples() {
        let p = Poly::from_real(&[1.0, 0.0, 1.0]);
        let pair = op_strong(&Poly::one(), 1.0, 8).unwrap();
        assert_eq!(apply_strong_sum(&pair, &p).unwrap(), Poly::from_real(&[0.0, 0.0, 2.0]));
        let h = Poly::new(vec![C64::new(0.0, -1.0), c(1.0)]);
        let pair = op_strong(&h, 0.0, 8).unwrap();
        assert_eq!(apply_strong_sum(&pair, &p).unwrap(), Poly::from_real(&[0.0, 4.0]));
        // h = w - i, λ = 1/2: brute-force oracle p'(z+iλ) - i p(z+iλ) plus its conjugate twin.
        let pair = op_strong(&h, 0.5, 8).unwrap();
        let s = apply_strong_sum(&pair, &p).unwrap();
        let lam = C64::new(0.0, 0.5);
        let t1 =
            &p.derivative(1).affine_compose(c(1.0), lam) - &p.affine_compose(c(1.0), lam).scale(C64::new(0.0, 1.0));
        let t2 =
            &p.derivative(1).affine_compose(c(1.0), -lam) + &p.affine_compose(c(1.0), -lam).scale(C64::new(0.0, 1.0));
        assert!(s.max_coeff_diff(&(&t1 + &t2)) < 1e-14);
        assert!(s.is_real());
        assert!(width(&s) <= 0.75f64.sqrt() + 1e-8);
        let bad = Poly::new(vec![C64::new(0.0, 1.0), c(1.0)]);
        assert!(matches!(op_strong(&bad, 0.5, 8), Err(Error::RootPlacement { .. })));
    }

    #[test]
    fn cosine_transform_examples() {
        let m1: Vec<f64> = (0..6).map(|k| 1.0 / (2 * k + 1) as f64).collect();
        let op = op_cosine_transform(&m1, 1.3, 10).unwrap();
        let sinc = op_sinc(1.3, 10);
        for k in 0..=10 {
            assert!((op.series[k] * 1.3 - sinc.series[k]).norm() < 1e-15);
        }
        let mt: Vec<f64> = (0..4).map(|k| 1.0 / (2 * k + 2) as f64).collect();
        let op = op_cosine_transform(&mt, 1.0, 6).unwrap();
        let q = op.apply(&Poly::from_real(&[1.0, 0.0, 1.0])).unwrap();
        // m0 (z² + 1) - m1 = z²/2 + 1/4
        assert_eq!(q, Poly::from_real(&[0.25, 0.0, 0.5]));
        assert!(width(&q) <= 0.75f64.sqrt());
        let op0 = op_cosine_transform(&mt, 0.0, 6).unwrap();
        assert_eq!(op0.series[0], c(0.5));
        assert!(op0.series[1..].iter().all(|a| *a == c(0.0)));
        assert_eq!(op_cosine_transform(&[1.0, 2.0], 1.0, 2), Err(Error::MomentsMisordered { index: 1 }));
        assert_eq!(op_cosine_transform(&[1.0, 0.5], 1.0, 6), Err(Error::PrefixTooShort { len: 2, need: 3 }));
    }

    fn cos_power(s: f64, n: u64, order: usize) -> DiffOp {
        let mut series = vec![c(0.0); order + 1];
        let mut t = 1.0;
        for k in 0..=order / 2 {
            if k > 0 {
                t *= -s * s / ((2 * k - 1) * 2 * k) as f64;
            }
            series[2 * k] = c(t);
        }
        DiffOp::custom(series).pow(n, order).unwrap()
    }

    /// `(cos(sqrt(λ/n) D))^n` tends to `e^{-λD²/2}`; matching `e^{-λD²}`
    /// needs `sqrt(2λ/n)`.
    #[test]
    fn cos_power_limit() {
        let gauss = |l: f64| (0..=3).map(move |k| (-l).powi(k) / (1..=k).product::<i32>().max(1) as f64);
        let literal = cos_power(1.0 / 10.0, 100, 6);
        let scaled = cos_power((2.0f64 / 100.0).sqrt(), 100, 6);
        for (k, (half, full)) in gauss(0.5).zip(gauss(1.0)).enumerate() {
            assert!((literal.series[2 * k].re - half).abs() <= 1e-2);
            assert!((scaled.series[2 * k].re - full).abs() <= 1e-2);
        }
        assert!((literal.series[2].re - (-1.0)).abs() >= 0.49);
    }

    #[test]
    fn moments_helper() {
        let m = moments(|_| 1.0, 4, 1e-12);
        for (k, v) in m.iter().enumerate() {
            assert!((v - 1.0 / (2 * k + 1) as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn bessel_examples() {
        let b = op_bessel0(8);
        assert_eq!(b.series[0], c(1.0));
        assert_eq!(b.series[2], c(-0.25));
        assert_eq!(b.series[4], c(1.0 / 64.0));
        assert_eq!(b.apply(&Poly::one()).unwrap(), Poly::one());
        let q = b.apply(&Poly::from_real(&[1.0, 0.0, 1.0])).unwrap();
        assert_eq!(q, Poly::from_real(&[0.5, 0.0, 1.0]));
        assert!(width(&q) <= b.predicted_width(1.0).unwrap());
    }

    #[test]
    fn multiplier_examples() {
        let p = Poly::from_real(&[1.0, 0.0, 1.0]);
        assert_eq!(apply_multiplier(&MultiplierOp::new(vec![1.0; 3]), &p).unwrap(), p);
        let lin = MultiplierOp::new(vec![0.0, 1.0, 2.0]);
        assert_eq!(apply_multiplier(&lin, &p).unwrap(), Poly::from_real(&[0.0, 0.0, 2.0]));
        let alt = MultiplierOp::new(vec![0.0, -1.0, 2.0]);
        assert_eq!(apply_multiplier(&alt, &p).unwrap(), Poly::from_real(&[0.0, 0.0, 2.0]));
        assert_eq!(lin.predicted_width(1.0).unwrap(), 1.0);
        assert_eq!(alt.predicted_width(1.0).unwrap(), 1.0);
        assert!(MultiplierOp::new(vec![1.0, 0.5]).predicted_width(1.0).is_err());
        assert!(apply_multiplier(&MultiplierOp::new(vec![1.0]), &p).is_err());
    }

    #[test]
    fn predicted_width_examples() {
        assert_eq!(op_gauss(0.5, 4).predicted_width(1.0).unwrap(), 0.0);
        assert!((op_debruijn(c(0.5), 0.6, 4).unwrap().predicted_width(1.0).unwrap() - 0.8).abs() < 1e-15);
        assert!((op_sinc(1.0, 4).predicted_width(1.0).unwrap() - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!(matches!(DiffOp::custom(vec![c(1.0)]).predicted_width(1.0), Err(Error::NoClaim(_))));
    }

    #[test]
    fn extending_truncation_keeps_results() {
        let p = Poly::from_real(&[1.0, -2.0, 0.5, 3.0, 1.0]);
        for op in [op_gauss(0.3, 4), op_sinc(0.9, 4), op_bessel0(4)] {
            let a = op.apply(&p).unwrap();
            let b = op.with_order(30).unwrap().apply(&p).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn sharpness_witnesses() {
        for mu in [0.5, 1.0, 2.0] {
            let p = Poly::from_real(&[mu * mu, 0.0, 1.0]);
            for op in [op_debruijn(c(0.5), 0.6 * mu, 4).unwrap(), op_gauss(0.2 * mu * mu, 4), op_sinc(0.8 * mu, 4)] {
                let w = width(&op.apply(&p).unwrap());
                assert!((w - op.predicted_width(mu).unwrap()).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn json_roundtrip() {
        let ops = vec![
            op_gauss(0.25, 40),
            op_debruijn(C64::new(0.3, -0.2), 0.4, 40).unwrap(),
            op_strong(&Poly::new(vec![C64::new(0.0, -1.0), c(1.0)]), 0.5, 40).unwrap().1,
            op_cosine_transform(&[0.5, 0.25, 0.1], 1.0, 4).unwrap(),
            op_bessel0(40),
            DiffOp::custom(vec![c(1.0), C64::new(0.0, 2.0)]),
        ];
        for op in ops {
            let s = serde_json::to_string(&op.to_json()).unwrap();
            let j: OpJson = serde_json::from_str(&s).unwrap();
            let back = DiffOp::from_json(&j, op.order()).unwrap();
            assert_eq!(back.family, op.family);
            let n = op.order().min(back.order());
            for k in 0..=n {
                assert!((back.series[k] - op.series[k]).norm() < 1e-15);
            }
        }
        let bad = OpJson { family: "nope".into(), params: json!({}), series: None };
        assert!(DiffOp::from_json(&bad, 4).is_err());
    }

    fn arb_series(n: usize) -> impl Strategy<Value = DiffOp> {
        prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n + 1)
            .prop_map(|v| DiffOp::custom(v.into_iter().map(|(a, b)| C64::new(a, b)).collect()))
    }

    proptest! {
        #[test]
        fn shift_matches_affine(lambda in -2.0..2.0f64, seed in any::<u64>(), deg in 1usize..=15) {
            let p = random::complex_strip_poly(&mut random::rng(seed), deg, 1.0);
            let a = op_shift(lambda, 15).apply(&p).unwrap();
            let b = p.affine_compose(c(1.0), C64::new(0.0, lambda));
            prop_assert!(a.max_coeff_diff(&b) <= 1e-12 * p.max_abs().max(1.0) * 10f64.powi(deg as i32 / 3));
        }

        #[test]
        fn compose_associative(a in arb_series(8), b in arb_series(8), cc in arb_series(8)) {
            let l = a.compose(&b, 8).unwrap().compose(&cc, 8).unwrap();
            let r = a.compose(&b.compose(&cc, 8).unwrap(), 8).unwrap();
            let err = l.series.iter().zip(&r.series).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
            prop_assert!(err <= 1e-12);
        }

        #[test]
        fn compose_matches_sequential_apply(a in arb_series(6), b in arb_series(6), seed in any::<u64>()) {
            let p = random::complex_strip_poly(&mut random::rng(seed), 6, 1.0);
            let l = a.compose(&b, 6).unwrap().apply(&p).unwrap();
            let r = a.apply(&b.apply(&p).unwrap()).unwrap();
            prop_assert!(l.max_coeff_diff(&r) <= 1e-10 * (1.0 + p.max_abs()));
        }

        #[test]
        fn real_families_stay_real(seed in any::<u64>(), deg in 2usize..=10, lam in 0.0..2.0f64) {
            let p = random::real_strip_poly(&mut random::rng(seed), deg, 1.0);
            let ct = op_cosine_transform(&moments(|t| t, 8, 1e-12), lam, 10).unwrap();
            for op in [op_debruijn(c(0.7), lam, 10).unwrap(), op_gauss(lam, 10), op_sinc(lam, 10), ct, op_bessel0(10)] {
                prop_assert!(op.apply(&p).unwrap().imag_ratio() <= 1e-12);
            }
            let pair = op_strong(&Poly::new(vec![C64::new(0.0, -1.0), c(1.0)]), lam, 10).unwrap();
            prop_assert!(apply_strong_sum(&pair, &p).unwrap().imag_ratio() <= 1e-12);
        }

        #[test]
        fn real_rooted_inputs_stay_real_rooted(seed in any::<u64>(), deg in 2usize..=8, lam in 0.05..1.5f64) {
            let p = random::real_strip_poly(&mut random::rng(seed), deg, 0.0);
            let ct = op_cosine_transform(&moments(|_| 1.0, 6, 1e-12), lam, 10).unwrap();
            for op in [op_debruijn(c(0.5), lam, 10).unwrap(), op_gauss(lam, 10), op_sinc(lam, 10), ct, op_bessel0(10)] {
                let q = op.apply(&p).unwrap();
                if !is_degenerate(&q) {
                    prop_assert!(width(&q) <= 1e-8);
                }
            }
        }
    }
}
