//! Dense univariate polynomials with complex coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::C64;

/// Polynomial stored by ascending powers; `coeffs[k]` multiplies `z^k`.
///
/// Trailing coefficients are trimmed after every operation, so the last entry
/// is nonzero unless the polynomial is zero, which is stored as `[0]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    coeffs: Vec<C64>,
}

impl Poly {
    /// Builds a polynomial, removing trailing exact zeros.
    pub fn new(coeffs: Vec<C64>) -> Self {
        let mut p = Poly { coeffs };
        p.trim(0.0);
        p
    }

    /// Builds a polynomial, removing trailing entries with modulus at most
    /// `rel` times the largest coefficient modulus.
    pub fn with_trim(coeffs: Vec<C64>, rel: f64) -> Self {
        let mut p = Poly { coeffs };
        let scale = p.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        p.trim(rel * scale);
        p
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![C64::new(0.0, 0.0)] }
    }

    pub fn constant(c: C64) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(C64::new(1.0, 0.0))
    }

    /// The monomial `z`.
    pub fn z() -> Self {
        Self::from_real(&[0.0, 1.0])
    }

    pub fn monomial(k: usize, c: C64) -> Self {
        let mut v = vec![C64::new(0.0, 0.0); k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// `lead * prod (z - r)`.
    pub fn from_roots(roots: &[C64], lead: C64) -> Self {
        let mut c = vec![lead];
        for &r in roots {
            let mut next = vec![C64::new(0.0, 0.0); c.len() + 1];
            for (k, &a) in c.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= a * r;
            }
            c = next;
        }
        Self::new(c)
    }

    fn trim(&mut self, thresh: f64) {
        while self.coeffs.len() > 1 {
            let last = self.coeffs[self.coeffs.len() - 1];
            if last.norm() <= thresh && (thresh > 0.0 || last == C64::new(0.0, 0.0)) {
                self.coeffs.pop();
            } else {
                break;
            }
        }
        if self.coeffs.is_empty() {
            self.coeffs.push(C64::new(0.0, 0.0));
        }
        if self.coeffs.len() == 1 && self.coeffs[0].norm() <= thresh {
            self.coeffs[0] = C64::new(0.0, 0.0);
        }
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C64> {
        self.coeffs
    }

    /// Coefficient of `z^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> C64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == C64::new(0.0, 0.0)
    }

    pub fn leading(&self) -> C64 {
        self.coeffs[self.coeffs.len() - 1]
    }

    /// True when every imaginary part is exactly zero.
    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0)
    }

    /// Largest `|Im c_k|` relative to the largest `|c_k|`.
    pub fn imag_ratio(&self) -> f64 {
        let scale = self.max_abs();
        if scale == 0.0 {
            return 0.0;
        }
        self.coeffs.iter().map(|c| c.im.abs()).fold(0.0, f64::max) / scale
    }

    /// Drops imaginary parts.
    pub fn real_part(&self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| C64::new(c.re, 0.0)).collect())
    }

    /// Polynomial whose coefficients are the imaginary parts.
    pub fn imag_part(&self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| C64::new(c.im, 0.0)).collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `sum |c_k| |z|^k`, the natural scale of `eval` rounding errors.
    pub fn eval_abs(&self, z: C64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self, k: usize) -> Poly {
        if k >= self.coeffs.len() {
            return Poly::zero();
        }
        let out = (k..self.coeffs.len())
            .map(|j| {
                let f: f64 = ((j - k + 1)..=j).map(|m| m as f64).product();
                self.coeffs[j] * f
            })
            .collect();
        Poly::new(out)
    }

    /// `f*(z) = conj(f(conj z))`: conjugates every coefficient.
    pub fn conj_flip(&self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| c.conj()).collect() }
    }

    pub fn scale(&self, s: C64) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// `p(a z + b)`, via repeated synthetic division for the shift followed
    /// by rescaling of the powers.
    pub fn affine_compose(&self, a: C64, b: C64) -> Poly {
        let mut c = self.coeffs.clone();
        let n = c.len();
        // Taylor shift: coefficients of p(z + b).
        for i in 0..n {
            for k in (i..n - 1).rev() {
                let t = c[k + 1] * b;
                c[k] += t;
            }
        }
        let mut pw = C64::new(1.0, 0.0);
        for ck in c.iter_mut() {
            *ck *= pw;
            pw *= a;
        }
        Poly::new(c)
    }

    /// `(cz+d)^n p(Φ(z))` with `Φ(z) = (az+b)/(cz+d)`.
    pub fn mobius_push(&self, m: &MobiusMap, n: usize) -> Result<Poly> {
        let deg = self.degree().unwrap_or(0);
        if n < deg {
            return Err(Error::DegreeTooSmall { degree: deg, n });
        }
        let num = Poly::new(vec![m.b, m.a]);
        let den = Poly::new(vec![m.d, m.c]);
        let mut num_pows = vec![Poly::one()];
        let mut den_pows = vec![Poly::one()];
        for k in 1..=n {
            num_pows.push(&num_pows[k - 1] * &num);
            den_pows.push(&den_pows[k - 1] * &den);
        }
        let mut out = Poly::zero();
        for (k, &ck) in self.coeffs.iter().enumerate() {
            if ck == C64::new(0.0, 0.0) {
                continue;
            }
            out = &out + &(&num_pows[k] * &den_pows[n - k]).scale(ck);
        }
        Ok(out)
    }

    /// Largest coefficient difference in modulus.
    pub fn max_coeff_diff(&self, other: &Poly) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).map(|k| (self.coeff(k) - other.coeff(k)).norm()).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            coeffs: self.coeffs.iter().map(|c| [c.re, c.im]).collect(),
            real: if self.is_real() { Some(true) } else { None },
        }
    }
}

impl Default for Poly {
    fn default() -> Self {
        Poly::zero()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if *c == C64::new(0.0, 0.0) && !(k == 0 && first) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cs = if c.im == 0.0 { format!("{}", c.re) } else { format!("({}{:+}i)", c.re, c.im) };
            match k {
                0 => write!(f, "{cs}")?,
                1 => write!(f, "{cs}z")?,
                _ => write!(f, "{cs}z^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![C64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// `Φ(z) = (az+b)/(cz+d)` with `ad - bc != 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MobiusMap {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

impl MobiusMap {
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Result<Self> {
        if (a * d - b * c).norm() == 0.0 {
            return Err(Error::SingularMobius);
        }
        Ok(MobiusMap { a, b, c, d })
    }

    pub fn identity() -> Self {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        MobiusMap { a: one, b: zero, c: zero, d: one }
    }

    pub fn det(&self) -> C64 {
        self.a * self.d - self.b * self.c
    }

    /// The inverse map `(dz - b)/(-cz + a)`.
    pub fn inverse(&self) -> Self {
        MobiusMap { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn apply(&self, z: C64) -> C64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }
}

/// Wire format `{"coeffs": [[re, im], ...], "real": true}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub coeffs: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub real: Option<bool>,
}

impl TryFrom<PolyJson> for Poly {
    type Error = Error;
    fn try_from(j: PolyJson) -> Result<Poly> {
        if j.coeffs.is_empty() {
            return Err(Error::Invalid("empty coefficient list".into()));
        }
        if j.coeffs.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Invalid("non-finite coefficient".into()));
        }
        if j.real == Some(true) && j.coeffs.iter().any(|c| c[1] != 0.0) {
            return Err(Error::Invalid("polynomial flagged real has a nonzero imaginary part".into()));
        }
        Ok(Poly::new(j.coeffs.iter().map(|c| Complex::new(c[0], c[1])).collect()))
    }
}

impl Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PolyJson::deserialize(d)?;
        Poly::try_from(j).map_err(serde::de::Error::custom)
    }
}
