//! Exact real-rootedness for real polynomials with `f64` coefficients.
//!
//! Coefficients are converted to rationals without rounding and the count of
//! distinct real roots comes from a Sturm sequence, so repeated roots such as
//! those of `(1 + z)^n` are handled exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, Zero};

type Q = BigRational;

fn trim(mut p: Vec<Q>) -> Vec<Q> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn derivative(p: &[Q]) -> Vec<Q> {
    p.iter().enumerate().skip(1).map(|(k, c)| c * Q::from_integer(BigInt::from(k))).collect()
}

/// Remainder of `a / b`, with `b` non-zero.
fn rem(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = &b[db];
    while r.len() > db {
        let k = r.len() - 1;
        let f = &r[k] / lead;
        let shift = k - db;
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] = &r[shift + j] - &f * bj;
        }
        r.pop();
        r = trim(r);
    }
    r
}

/// Sign at `+∞` (`at_neg = false`) or `-∞`.
fn sign_at_infinity(p: &[Q], at_neg: bool) -> i32 {
    let s = if p[p.len() - 1].is_positive() { 1 } else { -1 };
    if at_neg && (p.len() - 1) % 2 == 1 {
        -s
    } else {
        s
    }
}

fn variations(signs: &[i32]) -> usize {
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// True when every root of `Σ coeffs[k] z^k` is real. Constants and the zero
/// polynomial count as real-rooted; non-finite input does not.
pub fn real_rooted(coeffs: &[f64]) -> bool {
    let mut p = Vec::with_capacity(coeffs.len());
    for c in coeffs {
        match Q::from_f64(*c) {
            Some(q) => p.push(q),
            None => return false,
        }
    }
    let p = trim(p);
    if p.len() <= 2 {
        return true;
    }
    let mut seq = vec![p.clone(), derivative(&p)];
    loop {
        let n = seq.len();
        let r = rem(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    let deg_gcd = seq.last().unwrap().len() - 1;
    let neg: Vec<i32> = seq.iter().map(|q| sign_at_infinity(q, true)).collect();
    let pos: Vec<i32> = seq.iter().map(|q| sign_at_infinity(q, false)).collect();
    let distinct_real = variations(&neg) - variations(&pos);
    distinct_real == p.len() - 1 - deg_gcd
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binomial_row(n: usize) -> Vec<f64> {
        let mut row = vec![1.0];
        for _ in 0..n {
            let mut next = vec![1.0; row.len() + 1];
            for k in 1..row.len() {
                next[k] = row[k - 1] + row[k];
            }
            row = next;
        }
        row
    }

    #[test]
    fn examples() {
        assert!(real_rooted(&[1.0]));
        assert!(real_rooted(&[0.0]));
        assert!(real_rooted(&[2.0, 1.0]));
        assert!(real_rooted(&[-1.0, 0.0, 1.0]));
        assert!(!real_rooted(&[1.0, 0.0, 1.0]));
        assert!(real_rooted(&[0.0, 0.0, 1.0]));
        assert!(!real_rooted(&[f64::NAN, 1.0]));
        // z (z - 1)^2 (z² + 1) has a repeated real root and a complex pair.
        assert!(!real_rooted(&[0.0, 1.0, -2.0, 2.0, -2.0, 1.0]));
    }

    #[test]
    fn repeated_roots() {
        for n in 1..=30 {
            assert!(real_rooted(&binomial_row(n)), "(1 + z)^{n}");
        }
        // (1 + z)^6 + 1e-3 has no real roots.
        let mut p = binomial_row(6);
        p[0] += 1e-3;
        assert!(!real_rooted(&p));
    }
}
