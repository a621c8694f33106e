//! Outcomes of sampled falsification tests and the grids they sample.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::poly::Poly;
use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Counterexample,
    Inconclusive,
}

/// Data that lets a counterexample be re-checked.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Point {
        z: [f64; 2],
    },
    /// A point together with an auxiliary parameter, such as `(lambda, x)` for
    /// Wronskian tests or `(z, w)` for symbol tests.
    Pair {
        a: [f64; 2],
        b: [f64; 2],
    },
    Params {
        values: Vec<f64>,
    },
    /// Input polynomial whose image has the escaped root `root`.
    Poly {
        input: Poly,
        output: Poly,
        root: [f64; 2],
    },
}

impl Witness {
    pub fn point(z: C64) -> Self {
        Witness::Point { z: [z.re, z.im] }
    }

    pub fn pair(a: C64, b: C64) -> Self {
        Witness::Pair { a: [a.re, a.im], b: [b.re, b.im] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub samples_used: usize,
    #[serde(default)]
    pub note: String,
}

impl Verdict {
    pub fn pass(samples_used: usize, note: impl Into<String>) -> Self {
        Verdict { status: Status::Pass, witness: None, samples_used, note: note.into() }
    }

    pub fn counterexample(witness: Witness, samples_used: usize, note: impl Into<String>) -> Self {
        Verdict { status: Status::Counterexample, witness: Some(witness), samples_used, note: note.into() }
    }

    pub fn inconclusive(samples_used: usize, note: impl Into<String>) -> Self {
        Verdict { status: Status::Inconclusive, witness: None, samples_used, note: note.into() }
    }

    pub fn is_pass(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn is_counterexample(&self) -> bool {
        self.status == Status::Counterexample
    }
}

/// Sampling plan for universally quantified conditions.
///
/// `y_range` is measured from the boundary of the region under test: a test
/// on `Im z > mu` samples `Im z = mu + y` for `y` in `y_range`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleGrid {
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub nx: usize,
    pub ny: usize,
    pub extra_random: usize,
    pub seed: u64,
}

impl Default for SampleGrid {
    fn default() -> Self {
        SampleGrid { x_range: (-10.0, 10.0), y_range: (0.0, 5.0), nx: 60, ny: 40, extra_random: 500, seed: 0 }
    }
}

impl SampleGrid {
    pub fn small(seed: u64) -> Self {
        SampleGrid { nx: 24, ny: 12, extra_random: 100, seed, ..Default::default() }
    }

    /// Offsets `(x, y)` with `y > 0` in deterministic order: the regular grid
    /// (excluding `y = y_range.0` when it is 0), then the seeded random points.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let (x0, x1) = self.x_range;
        let (y0, y1) = self.y_range;
        let mut out = Vec::with_capacity(self.nx * self.ny + self.extra_random);
        for j in 0..self.ny {
            // Open at the lower end, closed at the upper end.
            let y = y0 + (y1 - y0) * (j + 1) as f64 / self.ny as f64;
            for i in 0..self.nx {
                let x = if self.nx == 1 { 0.5 * (x0 + x1) } else { x0 + (x1 - x0) * i as f64 / (self.nx - 1) as f64 };
                out.push((x, y));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        for _ in 0..self.extra_random {
            let x = rng.gen_range(x0..=x1);
            // Bias toward the boundary, where violations concentrate.
            let u: f64 = rng.gen_range(0.0..1.0);
            let y = y0 + (y1 - y0) * (1.0 - u).powi(3).max(1e-6);
            out.push((x, y));
        }
        out
    }

    /// Real abscissae only.
    pub fn xs(&self) -> Vec<f64> {
        let (x0, x1) = self.x_range;
        let mut out: Vec<f64> = (0..self.nx)
            .map(|i| if self.nx == 1 { 0.5 * (x0 + x1) } else { x0 + (x1 - x0) * i as f64 / (self.nx - 1) as f64 })
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ 0x5eed);
        out.extend((0..self.extra_random).map(|_| rng.gen_range(x0..=x1)));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_deterministic_and_above_boundary() {
        let g = SampleGrid::default();
        let a = g.points();
        assert_eq!(a, g.points());
        assert_eq!(a.len(), 60 * 40 + 500);
        assert!(a.iter().all(|&(_, y)| y > 0.0 && y <= 5.0));
    }

    #[test]
    fn verdict_json() {
        let v = Verdict::counterexample(Witness::point(C64::new(0.0, 2.0)), 3, "x");
        let s = serde_json::to_string(&v).unwrap();
        assert!(s.contains("\"COUNTEREXAMPLE\""));
        assert_eq!(serde_json::from_str::<Verdict>(&s).unwrap(), v);
    }
}
