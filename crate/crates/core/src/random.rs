//! Seeded generators of test polynomials.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::poly::Poly;
use crate::C64;

pub use rand::SeedableRng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Roots of a real polynomial of degree `deg` with zeros in `|Im z| <= mu`:
/// real roots uniform in [-3, 3] and conjugate pairs `x ± iy`, `y` uniform in
/// [0, mu].
pub fn real_strip_roots(rng: &mut TestRng, deg: usize, mu: f64) -> Vec<C64> {
    let pairs = rng.gen_range(0..=deg / 2);
    let mut roots = Vec::with_capacity(deg);
    for _ in 0..pairs {
        let x = rng.gen_range(-3.0..=3.0);
        let y = if mu > 0.0 { rng.gen_range(0.0..=mu) } else { 0.0 };
        roots.push(C64::new(x, y));
        roots.push(C64::new(x, -y));
    }
    while roots.len() < deg {
        roots.push(C64::new(rng.gen_range(-3.0..=3.0), 0.0));
    }
    roots
}

/// Monic real polynomial from [`real_strip_roots`], imaginary parts zeroed.
pub fn real_strip_poly(rng: &mut TestRng, deg: usize, mu: f64) -> Poly {
    Poly::from_roots(&real_strip_roots(rng, deg, mu), C64::new(1.0, 0.0)).real_part()
}

/// Complex polynomial with roots `x + iy`, `x` in [-3, 3], `y` in [-mu, mu],
/// and a random unimodular leading coefficient.
pub fn complex_strip_poly(rng: &mut TestRng, deg: usize, mu: f64) -> Poly {
    let roots: Vec<C64> = (0..deg)
        .map(|_| C64::new(rng.gen_range(-3.0..=3.0), if mu > 0.0 { rng.gen_range(-mu..=mu) } else { 0.0 }))
        .collect();
    let lead = C64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
    Poly::from_roots(&roots, lead)
}

/// Polynomial with every root in the open lower half-plane, so it does not
/// vanish on the upper half-plane.
pub fn stable_poly(rng: &mut TestRng, deg: usize) -> Poly {
    let roots: Vec<C64> = (0..deg).map(|_| C64::new(rng.gen_range(-3.0..=3.0), -rng.gen_range(0.05..=2.0))).collect();
    let lead = C64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
    Poly::from_roots(&roots, lead)
}

/// Non-negative, non-decreasing real coefficients of degree `deg`.
pub fn ek_poly(rng: &mut TestRng, deg: usize) -> Poly {
    let mut c: Vec<f64> = (0..=deg).map(|_| rng.gen_range(0.0..1.0)).collect();
    c.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if c[deg] == 0.0 {
        c[deg] = 1.0;
    }
    Poly::from_real(&c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::{find_roots, DEFAULT_TOL};

    #[test]
    fn generators_respect_their_classes() {
        let mut r = rng(3);
        for deg in 2..=10 {
            let p = real_strip_poly(&mut r, deg, 0.7);
            assert!(p.is_real());
            assert_eq!(p.degree(), Some(deg));
            assert!(find_roots(&p, DEFAULT_TOL).unwrap().strip_width().unwrap() <= 0.7 + 1e-6);
            let s = stable_poly(&mut r, deg);
            assert!(find_roots(&s, DEFAULT_TOL).unwrap().roots.iter().all(|z| z.im < 0.0));
            let e = ek_poly(&mut r, deg);
            assert!(e.coeffs().windows(2).all(|w| w[0].re <= w[1].re));
        }
    }

    #[test]
    fn seeded_generators_repeat() {
        let a = real_strip_poly(&mut rng(11), 6, 1.0);
        let b = real_strip_poly(&mut rng(11), 6, 1.0);
        assert_eq!(a, b);
    }
}
