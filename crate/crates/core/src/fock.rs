//! Weighted Bargmann–Fock norms and the operator bound
//! `‖T f‖_β ≤ ‖Ḡ_T(z, αw)‖_{β⊕α} ‖f‖_α`.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::symbol::{transcendental_symbol, BivarTrunc, LinearOpTable};

fn ln_factorial(k: usize) -> f64 {
    if k < 2 {
        0.0
    } else {
        ln_gamma(k as f64 + 1.0)
    }
}

fn check_beta(beta: &[f64]) -> Result<()> {
    if beta.iter().any(|b| !(*b > 0.0)) {
        return Err(Error::Invalid("Fock weights must be positive".into()));
    }
    Ok(())
}

/// `sqrt(Σ k! |c_k|² / β^k)`.
pub fn fock_norm(p: &Poly, beta: f64) -> Result<f64> {
    check_beta(&[beta])?;
    let lb = beta.ln();
    let s: f64 = p
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, v)| v.norm() > 0.0)
        .map(|(k, v)| (ln_factorial(k) - k as f64 * lb + 2.0 * v.norm().ln()).exp())
        .sum();
    Ok(s.sqrt())
}

/// Bivariate norm over the stored truncation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BivarNorm {
    pub norm: f64,
    /// Squared contribution of the highest stored `w` order.
    pub last_shell: f64,
    pub max_w: usize,
    /// Always true: the stored array may be a truncation of a series, in which
    /// case `norm` is a lower bound.
    pub truncated: bool,
}

/// `sqrt(Σ j! k! |g_jk|² / (β_1^j β_2^k))`.
pub fn fock_norm_bivar(g: &BivarTrunc, beta: (f64, f64)) -> Result<BivarNorm> {
    check_beta(&[beta.0, beta.1])?;
    let (l1, l2) = (beta.0.ln(), beta.1.ln());
    let mut s = 0.0;
    let mut last = 0.0;
    for (j, row) in g.rows().iter().enumerate() {
        for (k, v) in row.iter().enumerate() {
            if v.norm() == 0.0 {
                continue;
            }
            let t = (ln_factorial(j) + ln_factorial(k) - j as f64 * l1 - k as f64 * l2 + 2.0 * v.norm().ln()).exp();
            s += t;
            if k == g.max_w() {
                last += t;
            }
        }
    }
    Ok(BivarNorm { norm: s.sqrt(), last_shell: last, max_w: g.max_w(), truncated: true })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs (1 + 1e-9) - lhs`, relative to `max(rhs, 1e-300)`.
    pub margin: f64,
    pub holds: bool,
    pub symbol_norm: BivarNorm,
    /// True when the operator has images above the truncation order, so the
    /// symbol norm is a truncation.
    pub symbol_truncated: bool,
}

/// `lhs = ‖T f‖_b`, `rhs = ‖Ḡ_T(z, a w)‖_{(b, a)} ‖f‖_a` with the symbol
/// truncated at `w`-order `n`.
///
/// For `n >= deg f` the truncated bound already follows from Cauchy–Schwarz,
/// so a failure is a genuine violation.
pub fn bound_check(t: &LinearOpTable, f: &Poly, a: f64, b: f64, n: usize) -> Result<BoundReport> {
    check_beta(&[a, b])?;
    let deg = f.degree().unwrap_or(0);
    let need = n.max(deg);
    if t.images.len() < need + 1 {
        return Err(Error::TableTooShort { have: t.degree(), need });
    }
    let lhs = fock_norm(&t.apply(f)?, b)?;
    let sym = transcendental_symbol(t, n)?.scale_w(a);
    let sn = fock_norm_bivar(&sym, (b, a))?;
    let rhs = sn.norm * fock_norm(f, a)?;
    let holds = lhs <= rhs * (1.0 + 1e-9);
    let margin = (rhs * (1.0 + 1e-9) - lhs) / rhs.max(1e-300);
    let symbol_truncated = t.images[n + 1..].iter().any(|p| !p.is_zero());
    Ok(BoundReport { lhs, rhs, margin, holds, symbol_norm: sn, symbol_truncated })
}
