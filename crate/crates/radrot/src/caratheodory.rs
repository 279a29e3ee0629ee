//! Caratheodory-class functions generated from Schwarz functions.
//!
//! A [`SchwarzFn`] is a finite Blaschke-type product scaled by a constant of
//! modulus at most one, so `phi(0) = 0` and `|phi| < 1` hold structurally on
//! the open disk. The map `p = (1 + phi)/(1 - phi)` then lands in the class
//! of functions with positive real part and `p(0) = 1`.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TruncSeries;

use std::f64::consts::TAU;

/// Open tolerance for the positivity test: boundary-extremal samples touch
/// `Re p = 0` in the limit and truncation noise must not flip the verdict.
pub const POSITIVITY_TOL: f64 = 1e-9;

/// Number of radii sampled by [`is_caratheodory`] between 0 and `r_max`.
const RADIAL_STEPS: usize = 8;

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// An analytic function `phi` with `phi(0) = 0` and `|phi| < 1` on the disk:
/// `phi(z) = c z prod_i (alpha_i - z)/(1 - conj(alpha_i) z)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSchwarz", into = "RawSchwarz")]
pub struct SchwarzFn {
    leading: Complex64,
    zeros: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct RawSchwarz {
    c: [f64; 2],
    zeros: Vec<[f64; 2]>,
}

impl From<SchwarzFn> for RawSchwarz {
    fn from(s: SchwarzFn) -> Self {
        RawSchwarz {
            c: [s.leading.re, s.leading.im],
            zeros: s.zeros.iter().map(|a| [a.re, a.im]).collect(),
        }
    }
}

impl TryFrom<RawSchwarz> for SchwarzFn {
    type Error = Error;
    fn try_from(raw: RawSchwarz) -> Result<Self> {
        SchwarzFn::new(
            c64(raw.c[0], raw.c[1]),
            raw.zeros.iter().map(|a| c64(a[0], a[1])).collect(),
        )
    }
}

impl SchwarzFn {
    /// Builds the product; requires `|c| <= 1` and every `|alpha_i| < 1`.
    pub fn new(leading: Complex64, zeros: Vec<Complex64>) -> Result<Self> {
        if !leading.re.is_finite() || !leading.im.is_finite() || leading.norm() > 1.0 {
            return Err(Error::param(
                "leading",
                format!("need |c| <= 1, got |c| = {}", leading.norm()),
            ));
        }
        for a in &zeros {
            if !a.re.is_finite() || !a.im.is_finite() || a.norm() >= 1.0 {
                return Err(Error::param(
                    "zeros",
                    format!("need |alpha| < 1, got |alpha| = {}", a.norm()),
                ));
            }
        }
        Ok(SchwarzFn { leading, zeros })
    }

    /// The identity Schwarz function `phi(z) = z`.
    pub fn identity() -> Self {
        SchwarzFn {
            leading: c64(1.0, 0.0),
            zeros: Vec::new(),
        }
    }

    pub fn leading(&self) -> Complex64 {
        self.leading
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    /// Direct pointwise evaluation of the defining product.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        let mut v = self.leading * z;
        for a in &self.zeros {
            v *= (a - z) / (c64(1.0, 0.0) - a.conj() * z);
        }
        v
    }

    /// Power-series expansion to the given order; the constant term is 0 by
    /// construction. Each Mobius factor expands geometrically.
    pub fn series(&self, order: usize) -> TruncSeries {
        assert!(order >= 1, "a Schwarz series needs order >= 1");
        let inner = order - 1;
        let mut prod = TruncSeries::constant(self.leading, inner);
        for a in &self.zeros {
            let num = {
                let mut cs = vec![c64(0.0, 0.0); inner + 1];
                cs[0] = *a;
                if inner >= 1 {
                    cs[1] = c64(-1.0, 0.0);
                }
                TruncSeries::new(cs).expect("finite")
            };
            let den = {
                let mut cs = vec![c64(0.0, 0.0); inner + 1];
                cs[0] = c64(1.0, 0.0);
                if inner >= 1 {
                    cs[1] = -a.conj();
                }
                TruncSeries::new(cs).expect("finite")
            };
            prod = &prod * &num.div(&den).expect("denominator has unit constant term");
        }
        prod.shifted_up(1)
    }

    /// The Caratheodory function `p = (1 + phi)/(1 - phi)` as a series;
    /// `p_0 = 1` and `Re p > 0` on the open disk.
    pub fn caratheodory_series(&self, order: usize) -> TruncSeries {
        let phi = self.series(order);
        let one = TruncSeries::one(order);
        (&one + &phi)
            .div(&(&one - &phi))
            .expect("1 - phi has constant term exactly 1")
    }
}

/// Samples a random Schwarz function with up to `max_zeros` Blaschke factors;
/// deterministic in `seed`. Zero moduli stay below 0.95 so series expansions
/// converge comfortably at test radii.
pub fn sample_schwarz(max_zeros: usize, seed: u64) -> SchwarzFn {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = Complex64::from_polar(rng.random::<f64>(), rng.random_range(0.0..TAU));
    let n = rng.random_range(0..=max_zeros);
    let zeros = (0..n)
        .map(|_| Complex64::from_polar(rng.random_range(0.0..0.95), rng.random_range(0.0..TAU)))
        .collect();
    SchwarzFn::new(c, zeros).expect("sampled parameters are in range")
}

/// Grid test for membership in the Caratheodory class: true iff
/// `Re p(r e^{i theta}) > -tol` on radii up to `r_max` and `grid` angles.
/// Series whose constant term is not 1 (within 1e-10) fail outright.
pub fn is_caratheodory(p: &TruncSeries, r_max: f64, grid: usize) -> bool {
    is_caratheodory_with_tol(p, r_max, grid, POSITIVITY_TOL)
}

/// Same as [`is_caratheodory`] with an explicit open tolerance.
pub fn is_caratheodory_with_tol(p: &TruncSeries, r_max: f64, grid: usize, tol: f64) -> bool {
    if (p.coeff(0) - c64(1.0, 0.0)).norm() > 1e-10 {
        return false;
    }
    for i in 1..=RADIAL_STEPS {
        let r = r_max * i as f64 / RADIAL_STEPS as f64;
        for m in 0..grid {
            let z = Complex64::from_polar(r, TAU * m as f64 / grid as f64);
            if p.evaluate(z).re <= -tol {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn identity_schwarz_series_is_z() {
        let phi = SchwarzFn::identity();
        let s = phi.series(5);
        assert_eq!(s, TruncSeries::from_real(&[0.0, 1.0, 0.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn single_zero_at_origin_gives_minus_z_squared() {
        // factor (0 - z)/(1 - 0) = -z, so phi = -z^2.
        let phi = SchwarzFn::new(c64(1.0, 0.0), vec![c64(0.0, 0.0)]).unwrap();
        let s = phi.series(4);
        assert_eq!(s, TruncSeries::from_real(&[0.0, 0.0, -1.0, 0.0, 0.0]));
    }

    #[test]
    fn scaled_identity() {
        let phi = SchwarzFn::new(c64(0.5, 0.0), vec![]).unwrap();
        assert_eq!(phi.series(2), TruncSeries::from_real(&[0.0, 0.5, 0.0]));
    }

    #[test]
    fn construction_rejects_out_of_range() {
        assert!(SchwarzFn::new(c64(1.1, 0.0), vec![]).is_err());
        assert!(SchwarzFn::new(c64(1.0, 0.0), vec![c64(1.0, 0.0)]).is_err());
    }

    #[test]
    fn caratheodory_of_identity_is_half_plane_kernel() {
        let p = SchwarzFn::identity().caratheodory_series(6);
        assert_eq!(p.coeff(0), c64(1.0, 0.0));
        for n in 1..=6 {
            assert_abs_diff_eq!(p.coeff(n).re, 2.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn caratheodory_of_scaled_identity() {
        // (1 + z/2)/(1 - z/2): p_n = 2 (1/2)^n.
        let phi = SchwarzFn::new(c64(0.5, 0.0), vec![]).unwrap();
        let p = phi.caratheodory_series(3);
        assert_abs_diff_eq!(p.coeff(1).re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.coeff(2).re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(p.coeff(3).re, 0.25, epsilon = 1e-15);
    }

    #[test]
    fn caratheodory_of_minus_z_squared() {
        // (1 - z^2)/(1 + z^2) = 1 - 2z^2 + 2z^4 - ...
        let phi = SchwarzFn::new(c64(1.0, 0.0), vec![c64(0.0, 0.0)]).unwrap();
        let p = phi.caratheodory_series(4);
        assert_abs_diff_eq!(p.coeff(1).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.coeff(2).re, -2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.coeff(4).re, 2.0, epsilon = 1e-15);
    }

    #[test]
    fn is_caratheodory_examples() {
        // order 60 keeps the truncation tail of the kernel small at r = 0.9
        let mut kc = vec![2.0; 61];
        kc[0] = 1.0;
        let kernel = TruncSeries::from_real(&kc);
        assert!(is_caratheodory(&kernel, 0.9, 64));
        // 1 + 3z has Re = -0.5 at z = -0.5.
        let bad = TruncSeries::from_real(&[1.0, 3.0]);
        assert!(!is_caratheodory(&bad, 0.5, 64));
        assert!(is_caratheodory(&TruncSeries::one(0), 0.9, 16));
        // wrong normalization
        assert!(!is_caratheodory(&TruncSeries::from_real(&[2.0, 0.0]), 0.5, 16));
    }

    #[test]
    fn random_ensemble_has_caratheodory_coefficients() {
        for seed in 0..200u64 {
            let phi = sample_schwarz(4, seed);
            let p = phi.caratheodory_series(30);
            for n in 1..=30 {
                assert!(
                    p.coeff(n).norm() <= 2.0 + 1e-9,
                    "seed {seed}: |p_{n}| = {}",
                    p.coeff(n).norm()
                );
            }
            assert!(is_caratheodory(&p, 0.9, 256), "seed {seed}");
        }
    }

    #[test]
    fn schwarz_lemma_on_grid() {
        for seed in 0..200u64 {
            let phi = sample_schwarz(4, seed);
            for i in 1..=6 {
                let r = 0.15 * i as f64;
                for m in 0..32 {
                    let z = Complex64::from_polar(r, TAU * m as f64 / 32.0);
                    assert!(phi.evaluate(z).norm() <= z.norm() + 1e-9);
                }
            }
        }
    }

    #[test]
    fn series_matches_pointwise_product() {
        for seed in 0..50u64 {
            let phi = sample_schwarz(4, seed);
            let s = phi.series(130);
            for &(r, th) in &[(0.4, 1.0), (0.6, 3.3), (0.7, 5.0)] {
                let z = Complex64::from_polar(r, th);
                assert!((s.evaluate(z) - phi.evaluate(z)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let phi = SchwarzFn::new(c64(0.3, 0.4), vec![c64(-0.2, 0.1)]).unwrap();
        let js = serde_json::to_string(&phi).unwrap();
        let back: SchwarzFn = serde_json::from_str(&js).unwrap();
        assert_eq!(back, phi);
        let bad: std::result::Result<SchwarzFn, _> =
            serde_json::from_str(r#"{"c":[2.0,0.0],"zeros":[]}"#);
        assert!(bad.is_err());
    }
}
