//! Verification suites: each one runs a family of seeded cases against a
//! predicted bound or class property and records one row per case.

use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fock::bound_check;
use crate::fourier::{
    approximant_eval, corner_point, derivative_real_rooted, f0m_closed_form, fourier_cor_check, fourier_eval,
    gamma_from_kernel, jensen_bound_check, real_zero_verdict, KernelPoly,
};
use crate::ops::{
    apply_strong_sum, is_degenerate, moments, op_bessel0, op_cosine_transform, op_debruijn, op_gauss, op_sinc,
    op_strong, DiffOp, MultiplierOp,
};
use crate::poly::Poly;
use crate::random::{self, TestRng};
use crate::roots::{find_roots, DEFAULT_TOL};
use crate::stripcls::{enestrom_kakeya_check, hb_pencil_test, impart_test, in_dmu_sampled, split_real_imag};
use crate::symbol::{strip_char_falsify, LinearOpTable};
use crate::verdict::{SampleGrid, Status, Verdict};
use crate::C64;

pub const SUITES: [&str; 15] = [
    "debruijn",
    "gauss",
    "stab-strip",
    "integral-shrink",
    "sinc",
    "cos-limit",
    "enestrom-kakeya",
    "dmu",
    "hb-pencil",
    "impart",
    "multiplier",
    "symbol",
    "fock-bound",
    "fourier",
    "jensen",
];

/// Slack added to every predicted width.
pub const WIDTH_SLACK: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CaseStatus {
    Pass,
    Counterexample,
    Inconclusive,
    /// The solver could not produce a result (non-convergence, quadrature
    /// failure).
    SolverFailure,
}

impl From<Status> for CaseStatus {
    fn from(s: Status) -> Self {
        match s {
            Status::Pass => CaseStatus::Pass,
            Status::Counterexample => CaseStatus::Counterexample,
            Status::Inconclusive => CaseStatus::Inconclusive,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub case: usize,
    pub inputs: Value,
    pub predicted: Option<f64>,
    pub observed: Option<f64>,
    pub margin: Option<f64>,
    pub status: CaseStatus,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite_id: String,
    pub seed: u64,
    pub n_cases: usize,
    pub elapsed_ms: u64,
    pub cases: Vec<CaseRecord>,
}

impl SuiteReport {
    pub fn count(&self, s: CaseStatus) -> usize {
        self.cases.iter().filter(|c| c.status == s).count()
    }

    pub fn all_pass(&self) -> bool {
        self.cases.iter().all(|c| c.status == CaseStatus::Pass)
    }

    /// Smallest margin across cases that report one.
    pub fn min_margin(&self) -> Option<f64> {
        self.cases.iter().filter_map(|c| c.margin).reduce(f64::min)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub n_cases: Option<usize>,
    /// Optional kernel for the fourier suite, as coefficients of `H`.
    pub kernel: Option<Vec<f64>>,
    pub tol: Option<f64>,
}

impl SuiteConfig {
    pub fn new(seed: u64) -> Self {
        SuiteConfig { seed, n_cases: None, kernel: None, tol: None }
    }

    pub fn with_cases(mut self, n: usize) -> Self {
        self.n_cases = Some(n);
        self
    }
}

/// Default case count per suite.
pub fn default_cases(suite: &str) -> usize {
    match suite {
        "debruijn" | "gauss" | "sinc" => 3600,
        "stab-strip" => 2400,
        "integral-shrink" => 4000,
        "cos-limit" => 2,
        "enestrom-kakeya" => 500,
        "dmu" | "hb-pencil" | "fock-bound" => 100,
        "impart" | "multiplier" => 200,
        "symbol" => 60,
        "fourier" => 4,
        "jensen" => 30,
        _ => 0,
    }
}

fn case_rng(seed: u64, index: u64) -> TestRng {
    random::rng(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(index.wrapping_mul(0xbf58_476d_1ce4_e5b9)))
}

/// Strip width of an operator image; degenerate images have width 0.
pub fn image_width(q: &Poly) -> Result<f64> {
    if is_degenerate(q) {
        return Ok(0.0);
    }
    let rs = find_roots(q, DEFAULT_TOL)?;
    rs.strip_width()
}

fn poly_json(p: &Poly) -> Value {
    serde_json::to_value(p).unwrap_or(Value::Null)
}

fn width_case(case: usize, inputs: Value, predicted: f64, q: Result<Poly>) -> CaseRecord {
    match q.and_then(|q| image_width(&q)) {
        Ok(w) => {
            let margin = predicted + WIDTH_SLACK - w;
            CaseRecord {
                case,
                inputs,
                predicted: Some(predicted),
                observed: Some(w),
                margin: Some(margin),
                status: if margin >= 0.0 { CaseStatus::Pass } else { CaseStatus::Counterexample },
            }
        }
        Err(e) => failure(case, inputs, &e),
    }
}

fn failure(case: usize, mut inputs: Value, e: &Error) -> CaseRecord {
    if let Value::Object(m) = &mut inputs {
        m.insert("error".into(), json!(e.to_string()));
    }
    CaseRecord { case, inputs, predicted: None, observed: None, margin: None, status: CaseStatus::SolverFailure }
}

fn verdict_case(case: usize, mut inputs: Value, v: &Verdict) -> CaseRecord {
    if let Value::Object(m) = &mut inputs {
        m.insert("note".into(), json!(v.note));
        if let Some(w) = &v.witness {
            m.insert("witness".into(), serde_json::to_value(w).unwrap_or(Value::Null));
        }
        m.insert("samples".into(), json!(v.samples_used));
    }
    CaseRecord { case, inputs, predicted: None, observed: None, margin: None, status: v.status.into() }
}

/// Negative controls pass when the test finds the expected counterexample.
fn negative_control(case: usize, inputs: Value, v: &Verdict) -> CaseRecord {
    let mut r = verdict_case(case, inputs, v);
    r.status = if v.status == Status::Counterexample { CaseStatus::Pass } else { CaseStatus::Counterexample };
    if let Value::Object(m) = &mut r.inputs {
        m.insert("negative_control".into(), json!(true));
    }
    r
}

const MUS: [f64; 3] = [0.5, 1.0, 2.0];
const DEBRUIJN_FACTORS: [f64; 4] = [0.25, 0.6, 1.0, 1.5];

/// Random nonzero `ξ`.
fn random_xi(rng: &mut TestRng) -> C64 {
    C64::from_polar(rng.gen_range(0.1..2.0), rng.gen_range(0.0..std::f64::consts::TAU))
}

/// Case `i` uses polynomial `i / 12` with the `(μ, λ)` combination `i % 12`.
fn debruijn_case(seed: u64, i: usize) -> CaseRecord {
    let mut rng = case_rng(seed, (i / 12) as u64);
    let deg = rng.gen_range(2..=10);
    let combo = i % 12;
    let mu = MUS[combo / 4];
    let lambda = DEBRUIJN_FACTORS[combo % 4] * mu;
    let p = random::real_strip_poly(&mut rng, deg, mu);
    let mut xr = case_rng(seed ^ 0x71, i as u64);
    let xi = random_xi(&mut xr);
    let inputs = json!({"deg": deg, "mu": mu, "lambda": lambda, "xi": [xi.re, xi.im], "p": poly_json(&p)});
    let op = match op_debruijn(xi, lambda, deg) {
        Ok(op) => op,
        Err(e) => return failure(i, inputs, &e),
    };
    let predicted = op.predicted_width(mu).unwrap();
    width_case(i, inputs, predicted, op.apply(&p))
}

/// Gauss parameters `λ = λ_d² / 2` for the de Bruijn grid `λ_d`.
pub fn gauss_lambda(mu: f64, combo: usize) -> f64 {
    let ld = DEBRUIJN_FACTORS[combo % 4] * mu;
    ld * ld / 2.0
}

fn gauss_case(seed: u64, i: usize) -> CaseRecord {
    let mut rng = case_rng(seed, (i / 12) as u64);
    let deg = rng.gen_range(2..=10);
    let combo = i % 12;
    let mu = MUS[combo / 4];
    let lambda = gauss_lambda(mu, combo);
    let p = random::real_strip_poly(&mut rng, deg, mu);
    let op = op_gauss(lambda, deg);
    let inputs = json!({"deg": deg, "mu": mu, "lambda": lambda, "p": poly_json(&p)});
    width_case(i, inputs, op.predicted_width(mu).unwrap(), op.apply(&p))
}

/// The four `h` of the strong-operator grid: `1`, `w - i`, `(w - i)(w - 2i)`,
/// and `(w - i)² + 1 = w² - 2iw`, that is `w² + 1` translated up by `i`.
pub fn strong_h(index: usize) -> Poly {
    let i = C64::new(0.0, 1.0);
    let one = C64::new(1.0, 0.0);
    match index % 4 {
        0 => Poly::one(),
        1 => Poly::from_roots(&[i], one),
        2 => Poly::from_roots(&[i, i * 2.0], one),
        _ => Poly::from_roots(&[C64::new(0.0, 0.0), i * 2.0], one),
    }
}

const STRONG_LAMBDAS: [f64; 3] = [0.0, 0.5, 1.0];

fn strong_case(seed: u64, i: usize) -> CaseRecord {
    let mut rng = case_rng(seed, (i / 12) as u64);
    let deg = rng.gen_range(2..=10);
    let combo = i % 12;
    let h = strong_h(combo / 3);
    let lambda = STRONG_LAMBDAS[combo % 3];
    let mu = 1.0;
    let p = random::real_strip_poly(&mut rng, deg, mu);
    let inputs = json!({"deg": deg, "mu": mu, "lambda": lambda, "h": poly_json(&h), "p": poly_json(&p)});
    let pair = match op_strong(&h, lambda, deg) {
        Ok(pair) => pair,
        Err(e) => return failure(i, inputs, &e),
    };
    let predicted = pair.0.predicted_width(mu).unwrap();
    width_case(i, inputs, predicted, apply_strong_sum(&pair, &p))
}

/// Weight functions of the cosine-transform grid, by name.
pub const COSINE_WEIGHTS: [&str; 4] = ["1", "t", "t^2", "e^t-1"];

pub fn cosine_weight(name: &str) -> fn(f64) -> f64 {
    match name {
        "1" => |_| 1.0,
        "t" => |t| t,
        "t^2" => |t| t * t,
        _ => |t: f64| t.exp_m1(),
    }
}

const COSINE_LAMBDAS: [f64; 4] = [0.5, 1.0, 2.0, 3.0];
const BESSEL_MUS: [f64; 4] = [0.25, 0.5, 1.0, 2.0];

/// 20 operator combinations: 4 weights × 4 λ at μ = 1, then `J_0(D)` at 4 μ.
pub fn integral_shrink_op(combo: usize, deg: usize) -> Result<(DiffOp, f64, Value)> {
    if combo < 16 {
        let w = COSINE_WEIGHTS[combo / 4];
        let lambda = COSINE_LAMBDAS[combo % 4];
        let m = moments(cosine_weight(w), deg.div_ceil(2) + 1, 1e-12);
        let op = op_cosine_transform(&m, lambda, deg)?;
        Ok((op, 1.0, json!({"g": w, "lambda": lambda, "mu": 1.0})))
    } else {
        let mu = BESSEL_MUS[combo - 16];
        Ok((op_bessel0(deg), mu, json!({"g": "bessel0", "lambda": 1.0, "mu": mu})))
    }
}

fn integral_shrink_case(seed: u64, i: usize) -> CaseRecord {
    let mut rng = case_rng(seed, (i / 20) as u64);
    let deg = rng.gen_range(2..=10);
    let (op, mu, mut inputs) = match integral_shrink_op(i % 20, deg) {
        Ok(v) => v,
        Err(e) => return failure(i, json!({"deg": deg}), &e),
    };
    let p = random::real_strip_poly(&mut rng, deg, mu);
    inputs["deg"] = json!(deg);
    inputs["p"] = poly_json(&p);
    width_case(i, inputs, op.predicted_width(mu).unwrap(), op.apply(&p))
}

fn sinc_case(seed: u64, i: usize) -> CaseRecord {
    let mut rng = case_rng(seed, (i / 12) as u64);
    let deg = rng.gen_range(2..=10);
    let combo = i % 12;
    let mu = MUS[combo / 4];
    let lambda = DEBRUIJN_FACTORS[combo % 4] * mu;
    let p = random::real_strip_poly(&mut rng, deg, mu);
    let op = op_sinc(lambda, deg);
    let inputs = json!({"deg": deg, "mu": mu, "lambda": lambda, "p": poly_json(&p)});
    width_case(i, inputs, op.predicted_width(mu).unwrap(), op.apply(&p))
}

/// Doubling ladder and final `n` of the cosine-power limit.
pub const COS_LADDER: [u64; 4] = [10, 20, 40, 80];
pub const COS_FINAL: u64 = 10_000;

/// `(cos(sD))^n` truncated at order `order`.
pub fn cos_power(s: f64, n: u64, order: usize) -> Result<DiffOp> {
    let mut series = vec![C64::new(0.0, 0.0); order + 1];
    let mut t = 1.0;
    for k in 0..=order / 2 {
        if k > 0 {
            t *= -s * s / ((2 * k - 1) as f64 * (2 * k) as f64);
        }
        series[2 * k] = C64::new(t, 0.0);
    }
    DiffOp::custom(series).pow(n, order)
}

/// Largest coefficient deviation between `(cos(sqrt(scale λ / n) D))^n p`
/// and `e^{-λD²} p`, relative to the largest coefficient of `e^{-λD²} p`.
/// `scale = 1` is the literal form of the limit, `scale = 2` the one whose
/// `D²` coefficient matches.
pub fn cos_limit_deviation(p: &Poly, lambda: f64, n: u64, scale: f64) -> Result<f64> {
    let order = p.degree().unwrap_or(0);
    let op = cos_power((scale * lambda / n as f64).sqrt(), n, order)?;
    let a = op.apply(p)?;
    let b = op_gauss(lambda, order).apply(p)?;
    Ok(a.max_coeff_diff(&b) / b.max_abs().max(f64::MIN_POSITIVE))
}

/// Case `2j` checks the literal scaling on polynomial `j`, case `2j + 1` the
/// corrected scaling on the same polynomial.
fn cos_limit_case(seed: u64, i: usize) -> CaseRecord {
    let mut rng = case_rng(seed, (i / 2) as u64);
    let p = random::real_strip_poly(&mut rng, 6, 1.0);
    let scale = if i.is_multiple_of(2) { 1.0 } else { 2.0 };
    let lambda = 1.0;
    let mut inputs = json!({
        "lambda": lambda,
        "form": if i.is_multiple_of(2) { "cos(sqrt(lambda/n) D)^n" } else { "cos(sqrt(2 lambda/n) D)^n" },
        "p": poly_json(&p),
    });
    let mut ladder = Vec::new();
    for &n in COS_LADDER.iter().chain(std::iter::once(&COS_FINAL)) {
        match cos_limit_deviation(&p, lambda, n, scale) {
            Ok(d) => ladder.push(d),
            Err(e) => return failure(i, inputs, &e),
        }
    }
    let decreasing = ladder[..4].windows(2).all(|w| w[1] < w[0]);
    let last = ladder[4];
    inputs["deviations"] = json!(COS_LADDER
        .iter()
        .chain(std::iter::once(&COS_FINAL))
        .zip(&ladder)
        .map(|(n, d)| json!([n, d]))
        .collect::<Vec<_>>());
    inputs["decreasing"] = json!(decreasing);
    let margin = 1e-3 - last;
    CaseRecord {
        case: i,
        inputs,
        predicted: Some(1e-3),
        observed: Some(last),
        margin: Some(margin),
        status: if decreasing && margin >= 0.0 { CaseStatus::Pass } else { CaseStatus::Counterexample },
    }
}

fn ek_case(seed: u64, i: usize) -> CaseRecord {
    let mut rng = case_rng(seed, i as u64);
    let deg = rng.gen_range(1..=12);
    let p = random::ek_poly(&mut rng, deg);
    let inputs = json!({"deg": deg, "p": poly_json(&p)});
    match enestrom_kakeya_check(&p, 1e-8) {
        Ok(_) => {
            let r = find_roots(&p, DEFAULT_TOL).and_then(|rs| rs.max_modulus());
            match r {
                Ok(m) => {
                    let margin = 1.0 + 1e-8 - m;
                    CaseRecord {
                        case: i,
                        inputs,
                        predicted: Some(1.0),
                        observed: Some(m),
                        margin: Some(margin),
                        status: if margin >= 0.0 { CaseStatus::Pass } else { CaseStatus::Counterexample },
                    }
                }
                Err(e) => failure(i, inputs, &e),
            }
        }
        Err(e) => failure(i, inputs, &e),
    }
}

/// `p(z + iλ)` for random `p ∈ S_δ(R)`, tested for membership in `D_μ`,
/// `μ = sqrt(max(δ² - λ², 0))`.
fn dmu_case(seed: u64, i: usize) -> CaseRecord {
    let mut rng = case_rng(seed, i as u64);
    let deg = rng.gen_range(2..=8);
    let delta = MUS[i % 3];
    let lambda = rng.gen_range(0.1..1.5) * delta;
    let p = random::real_strip_poly(&mut rng, deg, delta);
    let f = p.affine_compose(C64::new(1.0, 0.0), C64::new(0.0, lambda));
    let mu = (delta * delta - lambda * lambda).max(0.0).sqrt();
    let grid = SampleGrid { nx: 40, ny: 20, extra_random: 200, seed: seed ^ i as u64, ..SampleGrid::default() };
    let v = in_dmu_sampled(&f, mu, &grid);
    verdict_case(i, json!({"deg": deg, "delta": delta, "lambda": lambda, "mu": mu, "p": poly_json(&p)}), &v)
}

/// Case 0 is the `g = z², h = 1` negative control; the rest split random
/// stable polynomials `g + ih` and test the pencil at μ ∈ {0, 0.5, 1}.
fn hb_case(seed: u64, i: usize) -> CaseRecord {
    if i == 0 {
        let g = Poly::from_real(&[0.0, 0.0, 1.0]);
        let h = Poly::one();
        return match hb_pencil_test(&g, &h, 0.0, 64, 1e-8) {
            Ok(v) => negative_control(i, json!({"g": poly_json(&g), "h": poly_json(&h), "mu": 0.0}), &v),
            Err(e) => failure(i, json!({}), &e),
        };
    }
    let mut rng = case_rng(seed, i as u64);
    let deg = rng.gen_range(1..=8);
    let f = random::stable_poly(&mut rng, deg);
    let (g, h) = split_real_imag(&f);
    let mu = [0.0, 0.5, 1.0][i % 3];
    let inputs = json!({"f": poly_json(&f), "mu": mu});
    match hb_pencil_test(&g, &h, mu, 64, 1e-8) {
        Ok(v) => verdict_case(i, inputs, &v),
        Err(e) => failure(i, inputs, &e),
    }
}

fn impart_case(seed: u64, i: usize) -> CaseRecord {
    let mut rng = case_rng(seed, i as u64);
    let deg = rng.gen_range(2..=8);
    let delta = rng.gen_range(0.0..2.0);
    let mu = [0.5, 1.0, 1.5][i % 3];
    let p = random::real_strip_poly(&mut rng, deg, delta);
    let grid = SampleGrid { nx: 40, ny: 20, extra_random: 200, seed: seed ^ i as u64, ..SampleGrid::default() };
    let v = impart_test(&p, mu, &grid);
    verdict_case(i, json!({"deg": deg, "delta": delta, "mu": mu, "p": poly_json(&p)}), &v)
}

/// Multiplier sequences used by the multiplier suite; odd indices are the
/// alternating versions.
pub fn multiplier_gamma(kind: usize, n: usize) -> (String, Vec<f64>) {
    let base: (&str, Box<dyn Fn(usize) -> f64>) = match (kind / 2) % 5 {
        0 => ("1", Box::new(|_| 1.0)),
        1 => ("k", Box::new(|k| k as f64)),
        2 => ("k+2", Box::new(|k| k as f64 + 2.0)),
        3 => ("k(k-1)", Box::new(|k| (k * k.saturating_sub(1)) as f64)),
        _ => ("1.5^k", Box::new(|k| 1.5f64.powi(k as i32))),
    };
    let alt = kind % 2 == 1;
    let g = (0..=n).map(|k| if alt && k % 2 == 1 { -base.1(k) } else { base.1(k) }).collect();
    (if alt { format!("(-1)^k {}", base.0) } else { base.0.to_string() }, g)
}

fn multiplier_case(seed: u64, i: usize) -> CaseRecord {
    let mut rng = case_rng(seed, i as u64);
    let deg = rng.gen_range(2..=10);
    let mu = MUS[i % 3];
    let (name, gamma) = multiplier_gamma(i % 10, deg);
    let p = if (i / 10).is_multiple_of(2) {
        random::complex_strip_poly(&mut rng, deg, mu)
    } else {
        random::real_strip_poly(&mut rng, deg, mu)
    };
    let m = MultiplierOp::new(gamma);
    let inputs = json!({"deg": deg, "mu": mu, "gamma": name, "p": poly_json(&p)});
    match m.predicted_width(mu) {
        Ok(pred) => width_case(i, inputs, pred, m.apply(&p)),
        Err(e) => failure(i, inputs, &e),
    }
}

/// `p ↦ (e^{-3D²/8} p)(z/2)`: maps `S_1(R)` into itself but not `S_1`.
pub fn rz_operator(n: usize) -> LinearOpTable {
    let t1 = LinearOpTable::from_diffop(&op_gauss(3.0 / 8.0, n), n).expect("gauss table");
    LinearOpTable::scale(0.5, n).compose(&t1).expect("scale table")
}

fn symbol_case(seed: u64, i: usize) -> CaseRecord {
    let n = 8;
    let mu = 1.0;
    let grid = SampleGrid { extra_random: 60, seed: seed.wrapping_add(i as u64), ..SampleGrid::default() };
    let (name, table) = match i % 6 {
        0 => ("rz-example", rz_operator(n)),
        1 => ("gauss(1)", LinearOpTable::from_diffop(&op_gauss(1.0, n), n).unwrap()),
        2 => (
            "debruijn(1/2, 0.7)",
            LinearOpTable::from_diffop(&op_debruijn(C64::new(0.5, 0.0), 0.7, n).unwrap(), n).unwrap(),
        ),
        3 => ("sinc(0.9)", LinearOpTable::from_diffop(&op_sinc(0.9, n), n).unwrap()),
        4 => ("bessel0", LinearOpTable::from_diffop(&op_bessel0(n), n).unwrap()),
        _ => {
            ("multiplier k+2", LinearOpTable::from_multiplier(&MultiplierOp::new(multiplier_gamma(4, n).1), n).unwrap())
        }
    };
    let v = strip_char_falsify(&table, mu, n, &grid);
    let inputs = json!({"operator": name, "mu": mu, "n": n});
    if i.is_multiple_of(6) {
        negative_control(i, inputs, &v)
    } else {
        verdict_case(i, inputs, &v)
    }
}

/// Operator tables drawn by the fock-bound suite.
pub fn fock_table(kind: usize, rng: &mut TestRng, n: usize) -> (String, LinearOpTable) {
    match kind % 7 {
        0 => {
            let l = rng.gen_range(0.1..2.0);
            (format!("gauss({l})"), LinearOpTable::from_diffop(&op_gauss(l, n), n).unwrap())
        }
        1 => {
            let l = rng.gen_range(0.1..2.0);
            let xi = random_xi(rng);
            (format!("debruijn({l})"), LinearOpTable::from_diffop(&op_debruijn(xi, l, n).unwrap(), n).unwrap())
        }
        2 => {
            let l = rng.gen_range(0.1..2.0);
            (format!("sinc({l})"), LinearOpTable::from_diffop(&op_sinc(l, n), n).unwrap())
        }
        3 => ("bessel0".into(), LinearOpTable::from_diffop(&op_bessel0(n), n).unwrap()),
        4 => ("derivative".into(), LinearOpTable::derivative(n)),
        5 => (
            "multiplier k".into(),
            LinearOpTable::from_multiplier(&MultiplierOp::new(multiplier_gamma(2, n).1), n).unwrap(),
        ),
        _ => {
            let a = rng.gen_range(0.2..1.5);
            (format!("scale({a})"), LinearOpTable::scale(a, n))
        }
    }
}

/// `α = 1/4` and random `β ∈ [0.5, 2]`.
fn fock_case(seed: u64, i: usize) -> CaseRecord {
    let mut rng = case_rng(seed, i as u64);
    let n = 12;
    let (name, table) = fock_table(i, &mut rng, n);
    let deg = rng.gen_range(1..=8);
    let f = random::complex_strip_poly(&mut rng, deg, 1.0);
    let a = 0.25;
    let b = rng.gen_range(0.5..=2.0);
    let inputs = json!({"operator": name, "alpha": a, "beta": b, "n": n, "f": poly_json(&f)});
    match bound_check(&table, &f, a, b, n) {
        Ok(r) => CaseRecord {
            case: i,
            inputs,
            predicted: Some(r.rhs),
            observed: Some(r.lhs),
            margin: Some(r.margin),
            status: if r.margin >= -1e-9 { CaseStatus::Pass } else { CaseStatus::Counterexample },
        },
        Err(e) => failure(i, inputs, &e),
    }
}

/// Complex corner-point kernel `H = -t⁴ + t³`, so `H(it) = -t⁴ - it³`.
pub const COMPLEX_CORNER_KERNEL: [f64; 5] = [0.0, 0.0, 0.0, 1.0, -1.0];
/// Pólya's kernel `H(it) = -t⁴`.
pub const POLYA_KERNEL: [f64; 5] = [0.0, 0.0, 0.0, 0.0, -1.0];

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

/// Largest `|F(z) - sqrt(π) e^{-z²/4}|` over the 5 × 5 grid `x, y ∈ [-2.1, 2.1]`.
pub fn gaussian_grid_error(tol: f64) -> Result<f64> {
    let k = KernelPoly::from_coeffs(&[0.0, 0.0, 1.0])?;
    let mut worst: f64 = 0.0;
    for &x in &linspace(-2.1, 2.1, 5) {
        for &y in &linspace(-2.1, 2.1, 5) {
            let z = C64::new(x, y);
            let exact = (-z * z / 4.0).exp() * std::f64::consts::PI.sqrt();
            worst = worst.max((fourier_eval(&k, z, tol)? - exact).norm());
        }
    }
    Ok(worst)
}

/// Largest `|F_{0,m}(z) - 2 e^{-a_y z} sin(a_x z)/z|` on sample points.
pub fn f0m_error(kernel: &[f64], m: f64, tol: f64) -> Result<(C64, f64)> {
    let k = KernelPoly::from_coeffs(kernel)?;
    let a = corner_point(&k, m)?;
    let mut worst: f64 = 0.0;
    for z in [C64::new(0.5, 0.0), C64::new(-1.3, 0.6), C64::new(2.0, -0.4), C64::new(0.0, 1.0), C64::new(0.0, 0.0)] {
        worst = worst.max((approximant_eval(&k, 0, m, z, tol)? - f0m_closed_form(a, z)).norm());
    }
    Ok((a, worst))
}

fn kernel_zero_report(kernel: &[f64], tol: f64) -> Result<crate::fourier::ZeroReport> {
    let k = KernelPoly::from_coeffs(kernel)?;
    real_zero_verdict(|z| fourier_eval(&k, z, tol), (-8.0, 8.0), (0.05, 2.0), 321)
}

fn fourier_case(cfg: &SuiteConfig, i: usize) -> CaseRecord {
    let tol = cfg.tol.unwrap_or(1e-12);
    if let Some(h) = &cfg.kernel {
        let inputs = json!({"H": h, "tol": tol, "rect": [-8.0, 8.0, 0.05, 2.0]});
        return match kernel_zero_report(h, tol) {
            Ok(r) => {
                let hp = Poly::from_real(h);
                let k = h.iter().rposition(|v| *v != 0.0).unwrap_or(0) / 2;
                let lp = derivative_real_rooted(&hp).unwrap_or(false);
                let cor = fourier_cor_check(&gamma_from_kernel(&hp), k.max(1), lp).ok();
                let mut inputs = inputs;
                inputs["axis_sign_changes"] = json!(r.axis_sign_changes);
                inputs["cor_check"] = json!(cor.map(|v| v.status));
                CaseRecord {
                    case: i,
                    inputs,
                    predicted: Some(0.0),
                    observed: Some(r.upper_count as f64),
                    margin: Some(0.0 - r.upper_count as f64),
                    status: if r.pass { CaseStatus::Pass } else { CaseStatus::Counterexample },
                }
            }
            Err(e) => failure(i, inputs, &e),
        };
    }
    match i % 4 {
        0 => {
            let inputs = json!({"check": "gaussian transform vs closed form", "grid": "5x5 on [-2.1, 2.1]^2"});
            match gaussian_grid_error(tol) {
                Ok(e) => bounded(i, inputs, 1e-9, e),
                Err(e) => failure(i, inputs, &e),
            }
        }
        1 => {
            let inputs = json!({"check": "F_0,m closed form", "H": COMPLEX_CORNER_KERNEL, "m": 3.0});
            match f0m_error(&COMPLEX_CORNER_KERNEL, 3.0, tol) {
                Ok((_, e)) => bounded(i, inputs, 1e-8, e),
                Err(e) => failure(i, inputs, &e),
            }
        }
        2 => {
            let inputs = json!({"check": "real zeros of the -t^4 transform", "H": POLYA_KERNEL});
            match kernel_zero_report(&POLYA_KERNEL, tol) {
                Ok(r) => {
                    let mut inputs = inputs;
                    inputs["axis_sign_changes"] = json!(r.axis_sign_changes);
                    let ok = r.upper_count == 0 && r.axis_sign_changes >= 2;
                    CaseRecord {
                        case: i,
                        inputs,
                        predicted: Some(0.0),
                        observed: Some(r.upper_count as f64),
                        margin: Some(0.0 - r.upper_count as f64),
                        status: if ok { CaseStatus::Pass } else { CaseStatus::Counterexample },
                    }
                }
                Err(e) => failure(i, inputs, &e),
            }
        }
        _ => {
            let inputs = json!({"check": "F_m,m -> F ladder", "H": [0.0, 0.0, 1.0], "m": [8, 32, 128]});
            match approximant_ladder() {
                Ok(errs) => {
                    let ok = errs.iter().all(|e| e[0] > e[1] && e[1] > e[2]);
                    let mut inputs = inputs;
                    inputs["errors"] = json!(errs);
                    CaseRecord {
                        case: i,
                        inputs,
                        predicted: None,
                        observed: Some(errs.iter().map(|e| e[2]).fold(0.0, f64::max)),
                        margin: None,
                        status: if ok { CaseStatus::Pass } else { CaseStatus::Counterexample },
                    }
                }
                Err(e) => failure(i, inputs, &e),
            }
        }
    }
}

/// `|F_{m,m}(z) - F(z)|` for the Gaussian kernel at `m ∈ {8, 32, 128}` and
/// `z ∈ {0, 1, i/2}`.
pub fn approximant_ladder() -> Result<Vec<[f64; 3]>> {
    let k = KernelPoly::from_coeffs(&[0.0, 0.0, 1.0])?;
    let mut out = Vec::new();
    for z in [C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.5)] {
        let f = fourier_eval(&k, z, 1e-12)?;
        let mut e = [0.0; 3];
        for (j, m) in [8u32, 32, 128].into_iter().enumerate() {
            e[j] = (approximant_eval(&k, m, m as f64, z, 1e-12)? - f).norm();
        }
        out.push(e);
    }
    Ok(out)
}

fn bounded(case: usize, inputs: Value, bound: f64, observed: f64) -> CaseRecord {
    let margin = bound - observed;
    CaseRecord {
        case,
        inputs,
        predicted: Some(bound),
        observed: Some(observed),
        margin: Some(margin),
        status: if margin >= 0.0 { CaseStatus::Pass } else { CaseStatus::Counterexample },
    }
}

/// Each case samples `10^4` wedge points for one `n ∈ {2, 10, 100}`.
fn jensen_case(seed: u64, i: usize) -> CaseRecord {
    let n = [2u32, 10, 100][i % 3];
    let grid = SampleGrid {
        nx: 50,
        ny: 40,
        extra_random: 10_000 - 50 * 40 - 1,
        seed: seed.wrapping_add(i as u64),
        ..SampleGrid::default()
    };
    let v = jensen_bound_check(&[n], &grid);
    verdict_case(i, json!({"n": n, "A": 1.0}), &v)
}

/// Runs one suite. Cases are evaluated in parallel and reported in index order.
pub fn run_suite(suite: &str, cfg: &SuiteConfig) -> Result<SuiteReport> {
    if !SUITES.contains(&suite) {
        return Err(Error::Invalid(format!("unknown suite `{suite}`")));
    }
    let mut n = cfg.n_cases.unwrap_or_else(|| default_cases(suite));
    if suite == "fourier" && cfg.kernel.is_some() {
        n = n.min(1);
    }
    let start = Instant::now();
    let seed = cfg.seed;
    let cases: Vec<CaseRecord> = (0..n)
        .into_par_iter()
        .map(|i| match suite {
            "debruijn" => debruijn_case(seed, i),
            "gauss" => gauss_case(seed, i),
            "stab-strip" => strong_case(seed, i),
            "integral-shrink" => integral_shrink_case(seed, i),
            "sinc" => sinc_case(seed, i),
            "cos-limit" => cos_limit_case(seed, i),
            "enestrom-kakeya" => ek_case(seed, i),
            "dmu" => dmu_case(seed, i),
            "hb-pencil" => hb_case(seed, i),
            "impart" => impart_case(seed, i),
            "multiplier" => multiplier_case(seed, i),
            "symbol" => symbol_case(seed, i),
            "fock-bound" => fock_case(seed, i),
            "fourier" => fourier_case(cfg, i),
            _ => jensen_case(seed, i),
        })
        .collect();
    Ok(SuiteReport {
        suite_id: suite.to_string(),
        seed,
        n_cases: n,
        elapsed_ms: start.elapsed().as_millis() as u64,
        cases,
    })
}
