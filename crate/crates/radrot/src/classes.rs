//! Constructors and converters among the classes `P_k`, `R_k` and `V_k`.
//!
//! `P_k` members come from measures (Herglotz transform), from pairs of
//! Caratheodory functions, or from Schwarz functions. `R_k` members satisfy
//! `z f'/f in P_k` and are built from a `P_k` series by the exact coefficient
//! recursion `a_n = (1/(n-1)) sum_{v=1}^{n-1} p_{n-v} a_v`; `V_k` members
//! satisfy `(z f')'/f' in P_k` and are reached through the Alexander
//! transform `f in V_k <=> z f' in R_k`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::caratheodory::SchwarzFn;
use crate::error::{Error, Result};
use crate::measures::DiscreteMeasure;
use crate::series::TruncSeries;

use std::f64::consts::PI;

/// Which of the three function classes a [`ClassFunction`] claims.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassKind {
    /// Measure-representable `p` with `p(0) = 1`.
    Pk,
    /// Bounded radius rotation: normalized `f` with `z f'/f` in `P_k`.
    Rk,
    /// Bounded boundary rotation: normalized `f` with `(z f')'/f'` in `P_k`.
    Vk,
}

/// How a class member was obtained; membership in `R_k`/`V_k` is not
/// decidable from finitely many coefficients, so the origin carries the
/// certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Provenance {
    FromMeasure { measure: DiscreteMeasure },
    FromPair { p1: TruncSeries, p2: TruncSeries },
    FromSchwarz { schwarz: SchwarzFn },
    Extremal,
    Explicit,
}

/// A member of `P_k`, `R_k` or `V_k`: a truncated series together with the
/// rotation parameter `k` and the provenance that certifies membership.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawClassFunction", into = "RawClassFunction")]
pub struct ClassFunction {
    series: TruncSeries,
    k: f64,
    kind: ClassKind,
    provenance: Provenance,
}

#[derive(Serialize, Deserialize)]
struct RawClassFunction {
    kind: ClassKind,
    k: f64,
    coeffs: TruncSeries,
    provenance: Provenance,
}

impl From<ClassFunction> for RawClassFunction {
    fn from(f: ClassFunction) -> Self {
        RawClassFunction {
            kind: f.kind,
            k: f.k,
            coeffs: f.series,
            provenance: f.provenance,
        }
    }
}

impl TryFrom<RawClassFunction> for ClassFunction {
    type Error = Error;
    fn try_from(raw: RawClassFunction) -> Result<Self> {
        ClassFunction::new(raw.coeffs, raw.k, raw.kind, raw.provenance)
    }
}

const NORMALIZATION_TOL: f64 = 1e-10;

impl ClassFunction {
    /// Validates the normalization for the claimed kind: `p(0) = 1` for
    /// `P_k`; `f(0) = 0`, `f'(0) = 1` for `R_k` and `V_k`; and `k >= 2`.
    pub fn new(series: TruncSeries, k: f64, kind: ClassKind, provenance: Provenance) -> Result<Self> {
        if !(k >= 2.0) {
            return Err(Error::param("k", format!("need k >= 2, got {k}")));
        }
        match kind {
            ClassKind::Pk => {
                let c0 = series.coeff(0);
                if (c0 - Complex64::new(1.0, 0.0)).norm() > NORMALIZATION_TOL {
                    return Err(Error::NotCaratheodory { got: c0 });
                }
            }
            ClassKind::Rk | ClassKind::Vk => {
                if series.order() < 1 {
                    return Err(Error::param("series", "normalized f needs order >= 1"));
                }
                let ok = series.coeff(0).norm() <= NORMALIZATION_TOL
                    && (series.coeff(1) - Complex64::new(1.0, 0.0)).norm() <= NORMALIZATION_TOL;
                if !ok {
                    return Err(Error::param(
                        "series",
                        "normalized f needs f(0) = 0 and f'(0) = 1",
                    ));
                }
            }
        }
        Ok(ClassFunction {
            series,
            k,
            kind,
            provenance,
        })
    }

    pub fn series(&self) -> &TruncSeries {
        &self.series
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn kind(&self) -> ClassKind {
        self.kind
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }
}

/// Direction of the Alexander transform.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AlexanderDirection {
    /// `V_k -> R_k`: `g = z f'`.
    Forward,
    /// `R_k -> V_k`: `g_n = f_n / n`.
    Inverse,
}

/// Combines two Caratheodory-normalized series into a `P_k` member:
/// `p = (k/4 + 1/2) p1 - (k/4 - 1/2) p2`.
pub fn pk_from_pair(p1: &TruncSeries, p2: &TruncSeries, k: f64) -> Result<ClassFunction> {
    if !(k >= 2.0) {
        return Err(Error::param("k", format!("need k >= 2, got {k}")));
    }
    for p in [p1, p2] {
        let c0 = p.coeff(0);
        if (c0 - Complex64::new(1.0, 0.0)).norm() > NORMALIZATION_TOL {
            return Err(Error::NotCaratheodory { got: c0 });
        }
    }
    let series = &p1.scaled_real(k / 4.0 + 0.5) - &p2.scaled_real(k / 4.0 - 0.5);
    ClassFunction::new(
        series,
        k,
        ClassKind::Pk,
        Provenance::FromPair {
            p1: p1.clone(),
            p2: p2.clone(),
        },
    )
}

/// Wraps the Herglotz transform of a measure as a `P_k` member with
/// `k = max(V, 2)`.
pub fn pk_from_measure(measure: &DiscreteMeasure, order: usize) -> ClassFunction {
    let k = measure.total_variation().max(2.0);
    ClassFunction::new(
        measure.herglotz_series(order),
        k,
        ClassKind::Pk,
        Provenance::FromMeasure {
            measure: measure.clone(),
        },
    )
    .expect("herglotz transform is Caratheodory-normalized")
}

/// Wraps a Schwarz-generated Caratheodory function as a `P_2` member.
pub fn pk_from_schwarz(phi: &SchwarzFn, order: usize) -> ClassFunction {
    ClassFunction::new(
        phi.caratheodory_series(order),
        2.0,
        ClassKind::Pk,
        Provenance::FromSchwarz {
            schwarz: phi.clone(),
        },
    )
    .expect("(1 + phi)/(1 - phi) has constant term 1")
}

/// Builds the `R_k` member with `z f'/f = p` by the coefficient recursion;
/// the result order is `min(order, p.order() + 1)`.
pub fn rk_from_pk(p: &ClassFunction, order: usize) -> Result<ClassFunction> {
    if p.kind() != ClassKind::Pk {
        return Err(Error::param("p", "expected a Pk member"));
    }
    if order < 1 {
        return Err(Error::param("order", "need order >= 1 for a normalized f"));
    }
    let pc = p.series().coeffs();
    let n_max = order.min(p.series().order() + 1);
    let mut a = vec![Complex64::new(0.0, 0.0); n_max + 1];
    a[1] = Complex64::new(1.0, 0.0);
    for n in 2..=n_max {
        let mut acc = Complex64::new(0.0, 0.0);
        for v in 1..n {
            acc += pc[n - v] * a[v];
        }
        a[n] = acc / (n - 1) as f64;
    }
    ClassFunction::new(
        TruncSeries::new(a)?,
        p.k(),
        ClassKind::Rk,
        p.provenance().clone(),
    )
}

/// Recovers `p = z f'/f` from an `R_k` member; the leading `z` cancels, so
/// the result has order `f.order() - 1` and constant term exactly 1.
pub fn pk_from_rk(f: &ClassFunction) -> Result<TruncSeries> {
    if f.kind() != ClassKind::Rk {
        return Err(Error::param("f", "expected an Rk member"));
    }
    let num = f.series().z_derivative().shifted_down(1)?;
    let den = f.series().shifted_down(1)?;
    num.div(&den)
}

/// Builds the `V_k` member with `(z f')'/f' = p` by routing through the
/// Alexander transform: `g = rk_from_pk(p)`, then `f_n = g_n / n`.
pub fn vk_from_pk(p: &ClassFunction, order: usize) -> Result<ClassFunction> {
    let g = rk_from_pk(p, order)?;
    alexander(&g, AlexanderDirection::Inverse, order)
}

/// The Alexander transform; kind toggles between `V_k` and `R_k`, the
/// parameter `k` is preserved, and the result is truncated to
/// `min(order, f.order())`.
pub fn alexander(f: &ClassFunction, direction: AlexanderDirection, order: usize) -> Result<ClassFunction> {
    let series = f.series().truncated(order);
    let (expect, target, out) = match direction {
        AlexanderDirection::Forward => (ClassKind::Vk, ClassKind::Rk, series.z_derivative()),
        AlexanderDirection::Inverse => {
            let coeffs = series
                .coeffs()
                .iter()
                .enumerate()
                .map(|(n, c)| if n == 0 { *c } else { c / n as f64 })
                .collect();
            (ClassKind::Rk, ClassKind::Vk, TruncSeries::new(coeffs)?)
        }
    };
    if f.kind() != expect {
        return Err(Error::param(
            "f",
            format!("expected a {expect:?} member for this direction"),
        ));
    }
    ClassFunction::new(out, f.k(), target, f.provenance().clone())
}

/// Builds a class member directly from a measure, with `k` taken as the total
/// variation (floored at 2):
///
/// - `Rk`: `f = z exp(-sum_j w_j log(1 - z e^{-i t_j}))`
/// - `Vk`: `f'` given by the same exponential, integrated termwise
/// - `Pk`: the Herglotz transform itself
pub fn from_measure(measure: &DiscreteMeasure, kind: ClassKind, order: usize) -> Result<ClassFunction> {
    if kind == ClassKind::Pk {
        return Ok(pk_from_measure(measure, order));
    }
    if order < 1 {
        return Err(Error::param("order", "need order >= 1 for a normalized f"));
    }
    let k = measure.total_variation().max(2.0);
    // -sum_j w_j log(1 - z e^{-i t_j}) = sum_{n>=1} (p_n / n) z^n
    let p = measure.herglotz_series(order - 1);
    let exponent = TruncSeries::new(
        p.coeffs()
            .iter()
            .enumerate()
            .map(|(n, c)| {
                if n == 0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    c / n as f64
                }
            })
            .collect(),
    )?;
    let fprime = exponent.exp();
    let series = match kind {
        ClassKind::Rk => fprime.shifted_up(1),
        ClassKind::Vk => fprime.antiderivative(),
        ClassKind::Pk => unreachable!(),
    };
    ClassFunction::new(
        series,
        k,
        kind,
        Provenance::FromMeasure {
            measure: measure.clone(),
        },
    )
}

/// The extremal function `f*(z) = z (1-z)^{k/2-1} / (1+z)^{k/2+1}`, the
/// sharpness witness for the growth, distortion and coefficient bounds.
pub fn extremal_fn(k: f64, order: usize) -> Result<ClassFunction> {
    if !(k >= 2.0) {
        return Err(Error::param("k", format!("need k >= 2, got {k}")));
    }
    if order < 1 {
        return Err(Error::param("order", "need order >= 1 for a normalized f"));
    }
    let inner = order - 1;
    let one_minus = {
        let mut cs = vec![Complex64::new(0.0, 0.0); inner + 1];
        cs[0] = Complex64::new(1.0, 0.0);
        if inner >= 1 {
            cs[1] = Complex64::new(-1.0, 0.0);
        }
        TruncSeries::new(cs)?
    };
    let one_plus = {
        let mut cs = vec![Complex64::new(0.0, 0.0); inner + 1];
        cs[0] = Complex64::new(1.0, 0.0);
        if inner >= 1 {
            cs[1] = Complex64::new(1.0, 0.0);
        }
        TruncSeries::new(cs)?
    };
    let a = one_minus.pow_real(k / 2.0 - 1.0)?;
    let b = one_plus.pow_real(-(k / 2.0 + 1.0))?;
    ClassFunction::new(
        (&a * &b).shifted_up(1),
        k,
        ClassKind::Rk,
        Provenance::Extremal,
    )
}

/// The measure whose Herglotz transform is the extremal `P_k` member:
/// `{(pi, k/2+1), (0, -(k/2-1))}`, with the zero-weight atom dropped at
/// `k = 2`. Its total variation is exactly `k`.
pub fn extremal_measure(k: f64) -> Result<DiscreteMeasure> {
    if !(k >= 2.0) {
        return Err(Error::param("k", format!("need k >= 2, got {k}")));
    }
    let mut atoms = vec![(PI, k / 2.0 + 1.0)];
    if k / 2.0 - 1.0 != 0.0 {
        atoms.push((0.0, -(k / 2.0 - 1.0)));
    }
    DiscreteMeasure::new(atoms)
        .map_err(|e| Error::param("k", format!("extremal measure rejected: {e}")))
}

/// The extremal `P_k` member `(1 - kz + z^2)/(1 - z^2)`, the Herglotz
/// transform of [`extremal_measure`]; its coefficients
/// `p_n = (k/2+1)(-1)^n - (k/2-1)` are built from that closed form, so they
/// are exactly real.
pub fn extremal_pk(k: f64, order: usize) -> Result<ClassFunction> {
    if !(k >= 2.0) {
        return Err(Error::param("k", format!("need k >= 2, got {k}")));
    }
    let coeffs = (0..=order)
        .map(|n| {
            if n == 0 {
                Complex64::new(1.0, 0.0)
            } else {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                Complex64::new((k / 2.0 + 1.0) * sign - (k / 2.0 - 1.0), 0.0)
            }
        })
        .collect();
    ClassFunction::new(
        TruncSeries::new(coeffs)?,
        k,
        ClassKind::Pk,
        Provenance::Extremal,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::sample_measure;
    use approx::assert_abs_diff_eq;

    fn kernel_series(order: usize) -> TruncSeries {
        // (1+z)/(1-z)
        let mut c = vec![2.0; order + 1];
        c[0] = 1.0;
        TruncSeries::from_real(&c)
    }

    fn rotated_kernel_series(order: usize) -> TruncSeries {
        // (1-z)/(1+z)
        let c: Vec<f64> = (0..=order)
            .map(|n| if n == 0 { 1.0 } else { 2.0 * (-1.0f64).powi(n as i32) })
            .collect();
        TruncSeries::from_real(&c)
    }

    #[test]
    fn pk_from_pair_k2_collapses_to_p1() {
        let p1 = kernel_series(8);
        let p2 = rotated_kernel_series(8);
        let p = pk_from_pair(&p1, &p2, 2.0).unwrap();
        assert!(p.series().coeff_distance(&p1) < 1e-14);
    }

    #[test]
    fn pk_from_pair_k4_gives_extremal_p() {
        // 1.5 (1-z)/(1+z) - 0.5 (1+z)/(1-z) = (1 - 4z + z^2)/(1 - z^2)
        let p = pk_from_pair(&rotated_kernel_series(8), &kernel_series(8), 4.0).unwrap();
        let expected = extremal_pk(4.0, 8).unwrap();
        assert!(p.series().coeff_distance(expected.series()) < 1e-12);
        assert_abs_diff_eq!(p.series().coeff(1).re, -4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.series().coeff(2).re, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn pk_from_pair_equal_inputs_sum_to_one() {
        let p1 = kernel_series(6);
        let p = pk_from_pair(&p1, &p1, 3.0).unwrap();
        assert!(p.series().coeff_distance(&p1) < 1e-14);
    }

    #[test]
    fn pk_from_pair_rejects_bad_inputs() {
        let p1 = kernel_series(4);
        assert!(pk_from_pair(&p1, &p1, 1.9).is_err());
        let bad = TruncSeries::from_real(&[1.5, 0.0]);
        assert!(matches!(
            pk_from_pair(&bad, &p1, 3.0),
            Err(Error::NotCaratheodory { .. })
        ));
    }

    #[test]
    fn rk_recursion_koebe() {
        let p = pk_from_measure(&DiscreteMeasure::new(vec![(0.0, 2.0)]).unwrap(), 10);
        let f = rk_from_pk(&p, 10).unwrap();
        for n in 1..=10 {
            assert_abs_diff_eq!(f.series().coeff(n).re, n as f64, epsilon = 1e-12);
            assert_abs_diff_eq!(f.series().coeff(n).im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn rk_of_constant_one_is_z() {
        let p = ClassFunction::new(TruncSeries::one(8), 2.0, ClassKind::Pk, Provenance::Explicit)
            .unwrap();
        let f = rk_from_pk(&p, 8).unwrap();
        assert!(f.series().coeff_distance(&TruncSeries::variable(8)) < 1e-15);
    }

    #[test]
    fn rk_recursion_extremal_k3() {
        let p = extremal_pk(3.0, 10).unwrap();
        let f = rk_from_pk(&p, 10).unwrap();
        assert_abs_diff_eq!(f.series().coeff(2).re, -3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(f.series().coeff(3).re, 5.5, epsilon = 1e-12);
    }

    #[test]
    fn pk_from_rk_starlike_identity() {
        // z/(1-z)^2 has z f'/f = (1+z)/(1-z).
        let koebe: Vec<f64> = (0..=12).map(|n| n as f64).collect();
        let f = ClassFunction::new(
            TruncSeries::from_real(&koebe),
            2.0,
            ClassKind::Rk,
            Provenance::Explicit,
        )
        .unwrap();
        let p = pk_from_rk(&f).unwrap();
        assert!(p.coeff_distance(&kernel_series(11)) < 1e-12);
    }

    #[test]
    fn pk_from_rk_identity_function() {
        let f = ClassFunction::new(
            TruncSeries::variable(6),
            2.0,
            ClassKind::Rk,
            Provenance::Explicit,
        )
        .unwrap();
        let p = pk_from_rk(&f).unwrap();
        assert!(p.coeff_distance(&TruncSeries::one(5)) < 1e-15);
    }

    #[test]
    fn pk_rk_round_trip() {
        for seed in 0..200u64 {
            let m = sample_measure(4.0, 4, seed).unwrap();
            let p = pk_from_measure(&m, 30);
            let f = rk_from_pk(&p, 31).unwrap();
            let back = pk_from_rk(&f).unwrap();
            assert!(
                p.series().coeff_distance(&back) < 1e-10,
                "seed {seed}: distance {}",
                p.series().coeff_distance(&back)
            );
        }
    }

    #[test]
    fn vk_from_half_plane_kernel() {
        let p = pk_from_measure(&DiscreteMeasure::new(vec![(0.0, 2.0)]).unwrap(), 10);
        let f = vk_from_pk(&p, 10).unwrap();
        // z/(1-z): all coefficients 1 from n = 1.
        for n in 1..=10 {
            assert_abs_diff_eq!(f.series().coeff(n).re, 1.0, epsilon = 1e-12);
        }
        assert_eq!(f.kind(), ClassKind::Vk);
    }

    #[test]
    fn vk_of_constant_one_is_z() {
        let p = ClassFunction::new(TruncSeries::one(5), 2.0, ClassKind::Pk, Provenance::Explicit)
            .unwrap();
        let f = vk_from_pk(&p, 5).unwrap();
        assert!(f.series().coeff_distance(&TruncSeries::variable(5)) < 1e-15);
    }

    #[test]
    fn vk_k2_coefficients_bounded_by_one() {
        for seed in 0..100u64 {
            let m = sample_measure(2.0, 4, seed).unwrap();
            let p = pk_from_measure(&m, 20);
            let f = vk_from_pk(&p, 20).unwrap();
            for n in 2..=20 {
                assert!(f.series().coeff(n).norm() <= 1.0 + 1e-9, "seed {seed}");
            }
        }
    }

    #[test]
    fn alexander_forward_and_inverse() {
        // z/(1-z) in V_k maps to z/(1-z)^2 in R_k.
        let conv: Vec<f64> = std::iter::once(0.0).chain(std::iter::repeat(1.0)).take(11).collect();
        let f = ClassFunction::new(
            TruncSeries::from_real(&conv),
            2.0,
            ClassKind::Vk,
            Provenance::Explicit,
        )
        .unwrap();
        let g = alexander(&f, AlexanderDirection::Forward, 10).unwrap();
        for n in 1..=10 {
            assert_abs_diff_eq!(g.series().coeff(n).re, n as f64, epsilon = 1e-15);
        }
        let back = alexander(&g, AlexanderDirection::Inverse, 10).unwrap();
        assert!(back.series().coeff_distance(f.series()) < 1e-12);
        // identity is a fixed point
        let id = ClassFunction::new(
            TruncSeries::variable(5),
            2.0,
            ClassKind::Vk,
            Provenance::Explicit,
        )
        .unwrap();
        let gid = alexander(&id, AlexanderDirection::Forward, 5).unwrap();
        assert!(gid.series().coeff_distance(&TruncSeries::variable(5)) < 1e-15);
        // wrong kind is rejected
        assert!(alexander(&g, AlexanderDirection::Forward, 10).is_err());
    }

    #[test]
    fn from_measure_koebe_pair() {
        let m = DiscreteMeasure::new(vec![(0.0, 2.0)]).unwrap();
        let f = from_measure(&m, ClassKind::Rk, 10).unwrap();
        for n in 1..=10 {
            assert_abs_diff_eq!(f.series().coeff(n).re, n as f64, epsilon = 1e-12);
        }
        let g = from_measure(&m, ClassKind::Vk, 10).unwrap();
        for n in 1..=10 {
            assert_abs_diff_eq!(g.series().coeff(n).re, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn measure_and_recursion_routes_agree() {
        for seed in 0..100u64 {
            let m = sample_measure(5.0, 4, seed).unwrap();
            let direct = from_measure(&m, ClassKind::Rk, 30).unwrap();
            let via_recursion = rk_from_pk(&pk_from_measure(&m, 29), 30).unwrap();
            assert!(
                direct.series().coeff_distance(via_recursion.series()) < 1e-9,
                "seed {seed}"
            );
        }
    }

    #[test]
    fn alexander_commutation() {
        for seed in 0..100u64 {
            let m = sample_measure(4.0, 4, seed).unwrap();
            let p = pk_from_measure(&m, 29);
            let lhs = alexander(&vk_from_pk(&p, 30).unwrap(), AlexanderDirection::Forward, 30)
                .unwrap();
            let rhs = rk_from_pk(&p, 30).unwrap();
            assert!(lhs.series().coeff_distance(rhs.series()) < 1e-10, "seed {seed}");
        }
    }

    #[test]
    fn extremal_fn_small_k_expansions() {
        // k=2: z/(1+z)^2 = z - 2z^2 + 3z^3 - 4z^4
        let f = extremal_fn(2.0, 4).unwrap();
        for n in 1..=4 {
            assert_abs_diff_eq!(
                f.series().coeff(n).re,
                (n as f64) * (-1.0f64).powi(n as i32 + 1),
                epsilon = 1e-12
            );
        }
        // k=3: z - 3z^2 + 5.5z^3 (binomial product oracle)
        let f = extremal_fn(3.0, 3).unwrap();
        assert_abs_diff_eq!(f.series().coeff(2).re, -3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(f.series().coeff(3).re, 5.5, epsilon = 1e-12);
        // k=4: z(1-z)/(1+z)^3 = z - 4z^2 + 9z^3 - 16z^4 (binomial product oracle:
        // the coefficient of z^n is (-1)^(n+1) n^2)
        let f = extremal_fn(4.0, 4).unwrap();
        for n in 1..=4 {
            assert_abs_diff_eq!(
                f.series().coeff(n).re,
                (n as f64).powi(2) * (-1.0f64).powi(n as i32 + 1),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn extremal_second_coefficient_is_k() {
        for &k in &[2.0, 3.0, 4.0, 5.0, 6.0] {
            let f = extremal_fn(k, 2).unwrap();
            assert_abs_diff_eq!(f.series().coeff(2).norm(), k, epsilon = 1e-10);
        }
    }

    #[test]
    fn extremal_pk_closed_form() {
        // k=2: (1-z)/(1+z)
        let p = extremal_pk(2.0, 6).unwrap();
        for n in 1..=6 {
            assert_abs_diff_eq!(p.series().coeff(n).re, 2.0 * (-1.0f64).powi(n as i32), epsilon = 1e-12);
        }
        // general closed form p_n = (k/2+1)(-1)^n - (k/2-1)
        for &k in &[3.0, 4.0, 5.5] {
            let p = extremal_pk(k, 8).unwrap();
            for n in 1..=8 {
                let expect = (k / 2.0 + 1.0) * (-1.0f64).powi(n as i32) - (k / 2.0 - 1.0);
                assert_abs_diff_eq!(p.series().coeff(n).re, expect, epsilon = 1e-12);
                assert_abs_diff_eq!(p.series().coeff(n).im, 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn extremal_pk_matches_its_measure_transform() {
        for &k in &[2.0, 3.0, 4.0, 6.0] {
            let via_measure = extremal_measure(k).unwrap().herglotz_series(20);
            let closed = extremal_pk(k, 20).unwrap();
            assert!(closed.series().coeff_distance(&via_measure) < 1e-12, "k = {k}");
        }
    }

    #[test]
    fn extremal_identity_pk_of_fstar() {
        // z f*'/f* = (1 - kz + z^2)/(1 - z^2) as series, k in {2,...,6}.
        for &k in &[2.0, 3.0, 4.0, 5.0, 6.0] {
            let f = extremal_fn(k, 21).unwrap();
            let lhs = pk_from_rk(&f).unwrap();
            let rhs = extremal_pk(k, 20).unwrap();
            assert!(
                lhs.coeff_distance(rhs.series()) < 1e-10,
                "k = {k}: {}",
                lhs.coeff_distance(rhs.series())
            );
        }
    }

    #[test]
    fn factorial_coefficient_bound_on_samples() {
        use crate::bounds::coeff_bound;
        for seed in 0..200u64 {
            let m = sample_measure(4.0, 4, seed).unwrap();
            let f = rk_from_pk(&pk_from_measure(&m, 14), 15).unwrap();
            for n in 2..=15 {
                let bound = coeff_bound(4.0, n as u32, ClassKind::Rk).unwrap();
                assert!(f.series().coeff(n).norm() <= bound + 1e-9, "seed {seed} n {n}");
            }
        }
    }

    #[test]
    fn class_function_validation() {
        let bad = TruncSeries::from_real(&[0.5, 1.0]);
        assert!(ClassFunction::new(bad, 2.0, ClassKind::Pk, Provenance::Explicit).is_err());
        let not_normalized = TruncSeries::from_real(&[0.0, 2.0]);
        assert!(
            ClassFunction::new(not_normalized, 2.0, ClassKind::Rk, Provenance::Explicit).is_err()
        );
        let ok = TruncSeries::from_real(&[0.0, 1.0, 3.0]);
        assert!(ClassFunction::new(ok.clone(), 2.0, ClassKind::Rk, Provenance::Explicit).is_ok());
        assert!(ClassFunction::new(ok, 1.0, ClassKind::Rk, Provenance::Explicit).is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = extremal_fn(3.0, 6).unwrap();
        let js = serde_json::to_string(&f).unwrap();
        assert!(js.contains("\"kind\":\"Rk\""));
        assert!(js.contains("\"provenance\""));
        let back: ClassFunction = serde_json::from_str(&js).unwrap();
        assert_eq!(back, f);
    }
}
