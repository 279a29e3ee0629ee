//! Discrete signed measures on the circle and their Herglotz-type transform.
//!
//! An atomic measure with total mass 2 generates an analytic function with
//! `p(0) = 1` through the halved kernel
//! `p(z) = (1/2) sum_j w_j (1 + z e^{-i t_j}) / (1 - z e^{-i t_j})`,
//! so that `p_n = sum_j w_j e^{-i n t_j}` for `n >= 1`. The total variation
//! `V = sum |w_j|` decides which rotation class the transform lands in.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TruncSeries;

use std::f64::consts::TAU;

/// Tolerance on the mass normalization `sum w_j = 2`.
pub const MASS_TOL: f64 = 1e-10;
/// Atoms closer than this (circular distance) are considered coincident.
pub const ANGLE_TOL: f64 = 1e-12;

/// An atomic signed measure on `[0, 2pi)` with total mass 2.
///
/// Atoms are `(angle, weight)` pairs; weights are nonzero reals and angles
/// pairwise distinct. Construction validates, so a held value is always a
/// legal measure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMeasure", into = "RawMeasure")]
pub struct DiscreteMeasure {
    atoms: Vec<(f64, f64)>,
}

#[derive(Serialize, Deserialize)]
struct RawMeasure {
    atoms: Vec<(f64, f64)>,
}

impl From<DiscreteMeasure> for RawMeasure {
    fn from(m: DiscreteMeasure) -> Self {
        RawMeasure { atoms: m.atoms }
    }
}

impl TryFrom<RawMeasure> for DiscreteMeasure {
    type Error = Error;
    fn try_from(raw: RawMeasure) -> Result<Self> {
        DiscreteMeasure::new(raw.atoms)
    }
}

fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).abs() % TAU;
    d.min(TAU - d)
}

impl DiscreteMeasure {
    /// Validates and builds a measure. Angles are reduced into `[0, 2pi)`;
    /// weights must be nonzero and sum to 2 within [`MASS_TOL`].
    pub fn new(atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure("measure needs at least one atom".into()));
        }
        let mut reduced = Vec::with_capacity(atoms.len());
        for &(t, w) in &atoms {
            if !t.is_finite() || !w.is_finite() {
                return Err(Error::InvalidMeasure(format!(
                    "non-finite atom ({t}, {w})"
                )));
            }
            if w == 0.0 {
                return Err(Error::InvalidMeasure(format!(
                    "zero weight at angle {t}"
                )));
            }
            reduced.push((t.rem_euclid(TAU), w));
        }
        for i in 0..reduced.len() {
            for j in (i + 1)..reduced.len() {
                if circular_distance(reduced[i].0, reduced[j].0) <= ANGLE_TOL {
                    return Err(Error::InvalidMeasure(format!(
                        "atoms {i} and {j} share the angle {}",
                        reduced[i].0
                    )));
                }
            }
        }
        let mass: f64 = reduced.iter().map(|a| a.1).sum();
        if (mass - 2.0).abs() > MASS_TOL {
            return Err(Error::InvalidMeasure(format!(
                "total mass is {mass}, expected 2"
            )));
        }
        Ok(DiscreteMeasure { atoms: reduced })
    }

    /// The `(angle, weight)` atoms.
    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    /// Total signed mass `sum w_j` (2 up to [`MASS_TOL`]).
    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.1).sum()
    }

    /// Total variation `V = sum |w_j|`; the measure belongs to the
    /// `k`-admissible family iff `V <= k`.
    pub fn total_variation(&self) -> f64 {
        self.atoms.iter().map(|a| a.1.abs()).sum()
    }

    /// Transform into the series `p` with `p_0 = 1` exactly and
    /// `p_n = sum_j w_j e^{-i n t_j}`.
    pub fn herglotz_series(&self, order: usize) -> TruncSeries {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
        coeffs[0] = Complex64::new(1.0, 0.0);
        for (n, c) in coeffs.iter_mut().enumerate().skip(1) {
            let mut acc = Complex64::new(0.0, 0.0);
            for &(t, w) in &self.atoms {
                acc += Complex64::from_polar(w, -(n as f64) * t);
            }
            *c = acc;
        }
        TruncSeries::new(coeffs).expect("finite atoms give finite coefficients")
    }

    /// Jordan decomposition: splits atoms by sign and renormalizes each part
    /// to mass 2, so both parts generate Caratheodory-normalized transforms.
    ///
    /// `herglotz(mu) = lambda_pos * herglotz(positive) - lambda_neg *
    /// herglotz(negative)` coefficientwise, with `lambda_pos - lambda_neg = 1`.
    /// A measure with no negative atoms gets `lambda_neg = 0` and the inert
    /// placeholder `{(0, 2)}` as its negative part.
    pub fn jordan_decompose(&self) -> Result<JordanDecomposition> {
        let pos: Vec<(f64, f64)> = self.atoms.iter().copied().filter(|a| a.1 > 0.0).collect();
        let neg: Vec<(f64, f64)> = self
            .atoms
            .iter()
            .map(|&(t, w)| (t, -w))
            .filter(|a| a.1 > 0.0)
            .collect();
        if pos.is_empty() {
            return Err(Error::InvalidMeasure(
                "mass-2 measure must carry at least one positive atom".into(),
            ));
        }
        let mass_pos: f64 = pos.iter().map(|a| a.1).sum();
        let mass_neg: f64 = neg.iter().map(|a| a.1).sum();
        let positive = DiscreteMeasure::new(
            pos.iter().map(|&(t, w)| (t, w * 2.0 / mass_pos)).collect(),
        )?;
        let (lambda_neg, negative) = if neg.is_empty() {
            (0.0, DiscreteMeasure::new(vec![(0.0, 2.0)])?)
        } else {
            (
                mass_neg / 2.0,
                DiscreteMeasure::new(
                    neg.iter().map(|&(t, w)| (t, w * 2.0 / mass_neg)).collect(),
                )?,
            )
        };
        Ok(JordanDecomposition {
            lambda_pos: mass_pos / 2.0,
            positive,
            lambda_neg,
            negative,
        })
    }
}

/// Result of [`DiscreteMeasure::jordan_decompose`].
#[derive(Clone, Debug, Serialize)]
pub struct JordanDecomposition {
    pub lambda_pos: f64,
    pub positive: DiscreteMeasure,
    pub lambda_neg: f64,
    pub negative: DiscreteMeasure,
}

/// Draws a random admissible measure with total variation at most `k`.
///
/// The total variation `V` is uniform in `[2, k]`; the positive mass
/// `(V+2)/2` is spread over `1..=max_atoms` atoms and the negative mass
/// `(V-2)/2` over `1..=max_atoms` atoms (none when it vanishes), all at
/// uniform random angles. Deterministic in `seed`.
pub fn sample_measure(k: f64, max_atoms: usize, seed: u64) -> Result<DiscreteMeasure> {
    if !(k >= 2.0) {
        return Err(Error::param("k", format!("need k >= 2, got {k}")));
    }
    if max_atoms < 1 {
        return Err(Error::param("max_atoms", "need at least one atom per sign"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = 2.0 + (k - 2.0) * rng.random::<f64>();
    let mass_pos = (v + 2.0) / 2.0;
    let mass_neg = (v - 2.0) / 2.0;

    let n_pos = rng.random_range(1..=max_atoms);
    let n_neg = if mass_neg > 1e-9 {
        rng.random_range(1..=max_atoms)
    } else {
        0
    };

    let mut atoms: Vec<(f64, f64)> = Vec::with_capacity(n_pos + n_neg);
    let push_atoms = |rng: &mut ChaCha8Rng, count: usize, mass: f64, sign: f64,
                          atoms: &mut Vec<(f64, f64)>| {
        // Fractions bounded away from zero keep every weight nonzero.
        let fractions: Vec<f64> = (0..count).map(|_| rng.random_range(0.1..1.0)).collect();
        let total: f64 = fractions.iter().sum();
        for f in fractions {
            let t = loop {
                let t = rng.random_range(0.0..TAU);
                if atoms
                    .iter()
                    .all(|&(u, _)| circular_distance(t, u) > 10.0 * ANGLE_TOL)
                {
                    break t;
                }
            };
            atoms.push((t, sign * mass * f / total));
        }
    };
    push_atoms(&mut rng, n_pos, mass_pos, 1.0, &mut atoms);
    if n_neg > 0 {
        push_atoms(&mut rng, n_neg, mass_neg, -1.0, &mut atoms);
    }
    DiscreteMeasure::new(atoms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// Oracle: evaluate the halved kernel sum directly, no series involved.
    fn kernel_eval(m: &DiscreteMeasure, z: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        m.atoms()
            .iter()
            .map(|&(t, w)| {
                let e = Complex64::from_polar(1.0, -t);
                0.5 * w * (one + z * e) / (one - z * e)
            })
            .sum()
    }

    #[test]
    fn total_variation_examples() {
        let m = DiscreteMeasure::new(vec![(0.0, 2.0)]).unwrap();
        assert_eq!(m.total_variation(), 2.0);
        let m = DiscreteMeasure::new(vec![(std::f64::consts::PI, 3.0), (0.0, -1.0)]).unwrap();
        assert_eq!(m.total_variation(), 4.0);
        let m = DiscreteMeasure::new(vec![(0.0, 1.0), (std::f64::consts::FRAC_PI_2, 1.0)]).unwrap();
        assert_eq!(m.total_variation(), 2.0);
    }

    #[test]
    fn validation_rejects_bad_measures() {
        assert!(DiscreteMeasure::new(vec![]).is_err());
        assert!(DiscreteMeasure::new(vec![(0.0, 1.0)]).is_err()); // mass 1
        assert!(DiscreteMeasure::new(vec![(0.0, 2.0), (0.0, 0.0)]).is_err()); // zero weight
        assert!(DiscreteMeasure::new(vec![(0.1, 1.0), (0.1, 1.0)]).is_err()); // coincident
        assert!(DiscreteMeasure::new(vec![(f64::NAN, 2.0)]).is_err());
        // wrap-around coincidence
        assert!(DiscreteMeasure::new(vec![(1e-14, 1.0), (TAU - 1e-14, 1.0)]).is_err());
    }

    #[test]
    fn herglotz_single_atom_kernels() {
        let m = DiscreteMeasure::new(vec![(0.0, 2.0)]).unwrap();
        let p = m.herglotz_series(6);
        assert_eq!(p.coeff(0), Complex64::new(1.0, 0.0));
        for n in 1..=6 {
            assert_abs_diff_eq!(p.coeff(n).re, 2.0, epsilon = 1e-14);
            assert_abs_diff_eq!(p.coeff(n).im, 0.0, epsilon = 1e-14);
        }

        let m = DiscreteMeasure::new(vec![(std::f64::consts::PI, 2.0)]).unwrap();
        let p = m.herglotz_series(6);
        for n in 1..=6 {
            assert_abs_diff_eq!(p.coeff(n).re, 2.0 * (-1.0f64).powi(n as i32), epsilon = 1e-12);
        }
    }

    #[test]
    fn herglotz_extremal_k4_measure() {
        // {(pi, 3), (0, -1)}: p_n = 3(-1)^n - 1.
        let m = DiscreteMeasure::new(vec![(std::f64::consts::PI, 3.0), (0.0, -1.0)]).unwrap();
        let p = m.herglotz_series(4);
        let expect = [-4.0, 2.0, -4.0, 2.0];
        for (n, e) in expect.iter().enumerate() {
            assert_abs_diff_eq!(p.coeff(n + 1).re, *e, epsilon = 1e-12);
            assert_abs_diff_eq!(p.coeff(n + 1).im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn jordan_decompose_extremal_measure() {
        let m = DiscreteMeasure::new(vec![(std::f64::consts::PI, 3.0), (0.0, -1.0)]).unwrap();
        let d = m.jordan_decompose().unwrap();
        assert_abs_diff_eq!(d.lambda_pos, 1.5, epsilon = 1e-15);
        assert_abs_diff_eq!(d.lambda_neg, 0.5, epsilon = 1e-15);
        assert_eq!(d.positive.atoms(), &[(std::f64::consts::PI, 2.0)]);
        assert_eq!(d.negative.atoms(), &[(0.0, 2.0)]);
    }

    #[test]
    fn jordan_decompose_nonnegative_measure() {
        let m = DiscreteMeasure::new(vec![(0.0, 2.0)]).unwrap();
        let d = m.jordan_decompose().unwrap();
        assert_eq!(d.lambda_pos, 1.0);
        assert_eq!(d.lambda_neg, 0.0);
        assert_eq!(d.negative.atoms(), &[(0.0, 2.0)]);
    }

    #[test]
    fn jordan_recombination_reproduces_transform() {
        for seed in 0..50u64 {
            let m = sample_measure(5.0, 4, seed).unwrap();
            let d = m.jordan_decompose().unwrap();
            let n = 25;
            let direct = m.herglotz_series(n);
            let rebuilt = &d.positive.herglotz_series(n).scaled_real(d.lambda_pos)
                - &d.negative.herglotz_series(n).scaled_real(d.lambda_neg);
            assert!(direct.coeff_distance(&rebuilt) < 1e-12);
        }
    }

    #[test]
    fn sample_measure_k2_is_positive() {
        for seed in 0..20u64 {
            let m = sample_measure(2.0, 6, seed).unwrap();
            assert!(m.atoms().iter().all(|a| a.1 > 0.0));
            assert_abs_diff_eq!(m.total_mass(), 2.0, epsilon = MASS_TOL);
            assert_abs_diff_eq!(m.total_variation(), 2.0, epsilon = MASS_TOL);
        }
    }

    #[test]
    fn sample_measure_respects_variation_budget() {
        for seed in 0..100u64 {
            let m = sample_measure(4.0, 6, seed).unwrap();
            assert!(m.total_variation() <= 4.0 + MASS_TOL);
            assert_abs_diff_eq!(m.total_mass(), 2.0, epsilon = MASS_TOL);
        }
    }

    #[test]
    fn sample_measure_is_deterministic() {
        let a = sample_measure(3.5, 5, 42).unwrap();
        let b = sample_measure(3.5, 5, 42).unwrap();
        assert_eq!(a, b);
        assert!(sample_measure(1.5, 5, 0).is_err());
        assert!(sample_measure(3.0, 0, 0).is_err());
    }

    #[test]
    fn herglotz_coefficients_bounded_by_variation() {
        for seed in 0..500u64 {
            let m = sample_measure(6.0, 6, seed).unwrap();
            let v = m.total_variation();
            let p = m.herglotz_series(30);
            for n in 1..=30 {
                assert!(p.coeff(n).norm() <= v + 1e-9);
            }
        }
    }

    #[test]
    fn herglotz_is_linear_in_the_measure() {
        // Transform of a union of weighted atoms = sum of the transforms of
        // the single-atom kernels, each scaled by its weight / 2.
        let m = DiscreteMeasure::new(vec![(1.0, 1.5), (2.0, -0.5), (4.0, 1.0)]).unwrap();
        let n = 20;
        let p = m.herglotz_series(n);
        let mut acc = TruncSeries::zero(n);
        for &(t, w) in m.atoms() {
            let single = DiscreteMeasure::new(vec![(t, 2.0)]).unwrap();
            acc = &acc + &single.herglotz_series(n).scaled_real(w / 2.0);
        }
        assert!(p.coeff_distance(&acc) < 1e-12);
    }

    #[test]
    fn herglotz_series_matches_kernel_sum() {
        let order = 140;
        for seed in 0..30u64 {
            let m = sample_measure(5.0, 5, seed).unwrap();
            let p = m.herglotz_series(order);
            for &(r, th) in &[(0.3, 0.7), (0.55, 2.0), (0.7, 4.1), (0.7, 5.9)] {
                let z = Complex64::from_polar(r, th);
                let lhs = p.evaluate(z);
                let rhs = kernel_eval(&m, z);
                assert!((lhs - rhs).norm() < 1e-9, "seed {seed} at r={r}");
            }
        }
    }

    #[test]
    fn json_round_trip_and_validation() {
        let m = DiscreteMeasure::new(vec![(0.5, 3.0), (2.5, -1.0)]).unwrap();
        let js = serde_json::to_string(&m).unwrap();
        let back: DiscreteMeasure = serde_json::from_str(&js).unwrap();
        assert_eq!(back, m);
        // mass-1 measure must be rejected on the way in
        let bad: std::result::Result<DiscreteMeasure, _> =
            serde_json::from_str(r#"{"atoms":[[0.0,1.0]]}"#);
        assert!(bad.is_err());
    }
}
