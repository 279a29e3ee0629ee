//! Closed-form bound evaluators for the rotation classes.
//!
//! Everything here is a direct formula in `k` and `r` (or `n`): the growth
//! and distortion envelopes for `R_k`, the disk containing `P_k` values, the
//! coefficient bounds for all three classes and the radius of starlikeness.

use serde::Serialize;

use crate::classes::ClassKind;
use crate::error::{Error, Result};

/// A two-sided bound together with where it came from.
#[derive(Clone, Debug, Serialize)]
pub struct BoundSet {
    pub lower: f64,
    pub upper: f64,
    pub meta: BoundMeta,
}

/// Identifies a bound: its name, the class parameter and the evaluation
/// point. `clamped` marks a lower bound cut off at zero.
#[derive(Clone, Debug, Serialize)]
pub struct BoundMeta {
    pub name: &'static str,
    pub k: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    pub clamped: bool,
}

/// A disk `|w - center| <= radius` on the real axis of centers.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct DiskBound {
    pub center: f64,
    pub radius: f64,
}

fn check_kr(k: f64, r: f64) -> Result<()> {
    if !(k >= 2.0) {
        return Err(Error::param("k", format!("need k >= 2, got {k}")));
    }
    if !(0.0..1.0).contains(&r) {
        return Err(Error::param("r", format!("need 0 <= r < 1, got {r}")));
    }
    Ok(())
}

/// Two-sided bound for `|f(z)|` on `|z| = r` over `R_k`:
/// `r (1-r)^{(k-2)/2} / (1+r)^{(k+2)/2} <= |f| <= r (1+r)^{(k-2)/2} / (1-r)^{(k+2)/2}`.
pub fn growth_bounds(k: f64, r: f64) -> Result<BoundSet> {
    check_kr(k, r)?;
    let lower = r / ((1.0 - r).powf((2.0 - k) / 2.0) * (1.0 + r).powf((2.0 + k) / 2.0));
    let upper = r / ((1.0 - r).powf((2.0 + k) / 2.0) * (1.0 + r).powf((2.0 - k) / 2.0));
    Ok(BoundSet {
        lower,
        upper,
        meta: BoundMeta {
            name: "growth",
            k,
            r: Some(r),
            n: None,
            clamped: false,
        },
    })
}

/// Two-sided bound for `|f'(z)|` on `|z| = r` over `R_k`. The lower bound's
/// numerator `1 - kr + r^2` can go negative; it is then clamped at zero and
/// flagged, since a negative lower bound for a modulus is vacuous.
pub fn distortion_bounds(k: f64, r: f64) -> Result<BoundSet> {
    check_kr(k, r)?;
    let num_lower = 1.0 - k * r + r * r;
    let num_upper = 1.0 + k * r + r * r;
    let raw_lower = num_lower / ((1.0 - r).powf(2.0 - k / 2.0) * (1.0 + r).powf(2.0 + k / 2.0));
    let upper = num_upper / ((1.0 - r).powf(2.0 + k / 2.0) * (1.0 + r).powf(2.0 - k / 2.0));
    let clamped = num_lower < 0.0;
    Ok(BoundSet {
        lower: if clamped { 0.0 } else { raw_lower },
        upper,
        meta: BoundMeta {
            name: "distortion",
            k,
            r: Some(r),
            n: None,
            clamped,
        },
    })
}

/// Bounds for `Re(z f'/f)` on `|z| = r`:
/// `(1 - kr + r^2)/(1 - r^2) <= Re(z f'/f) <= (1 + kr + r^2)/(1 - r^2)`.
/// The lower bound may be negative and is deliberately not clamped.
pub fn re_bounds(k: f64, r: f64) -> Result<BoundSet> {
    check_kr(k, r)?;
    let denom = 1.0 - r * r;
    Ok(BoundSet {
        lower: (1.0 - k * r + r * r) / denom,
        upper: (1.0 + k * r + r * r) / denom,
        meta: BoundMeta {
            name: "re_zf_over_f",
            k,
            r: Some(r),
            n: None,
            clamped: false,
        },
    })
}

/// The disk containing every `P_k` value on `|z| = r`:
/// `|p(z) - (1+r^2)/(1-r^2)| <= kr/(1-r^2)`.
pub fn pk_disk(k: f64, r: f64) -> Result<DiskBound> {
    check_kr(k, r)?;
    let denom = 1.0 - r * r;
    Ok(DiskBound {
        center: (1.0 + r * r) / denom,
        radius: k * r / denom,
    })
}

/// Robertson's disk for `z f''/f'` over `V_k`:
/// `|z f''/f' - 2r^2/(1-r^2)| <= kr/(1-r^2)`. Shifting the center by `+1`
/// reproduces [`pk_disk`].
pub fn robertson_disk(k: f64, r: f64) -> Result<DiskBound> {
    check_kr(k, r)?;
    let denom = 1.0 - r * r;
    Ok(DiskBound {
        center: 2.0 * r * r / denom,
        radius: k * r / denom,
    })
}

/// Coefficient bound for the `n`-th coefficient:
///
/// - `Pk`: `|p_n| <= k` for `n >= 1`
/// - `Rk`: `|a_n| <= prod_{v=0}^{n-2} (k+v) / (n-1)!` for `n >= 2`
/// - `Vk`: `|a_n| <= prod_{v=0}^{n-2} (k+v) / n!` for `n >= 2`
///
/// The `Vk` product is evaluated with interleaved factors so that `k = 2`
/// yields exactly 1, and the `Rk` bound is defined as the `Vk` bound times
/// `n`, making the Alexander scaling identity exact in floating point.
pub fn coeff_bound(k: f64, n: u32, kind: ClassKind) -> Result<f64> {
    if !(k >= 2.0) {
        return Err(Error::param("k", format!("need k >= 2, got {k}")));
    }
    match kind {
        ClassKind::Pk => {
            if n < 1 {
                return Err(Error::param("n", "need n >= 1 for Pk"));
            }
            Ok(k)
        }
        ClassKind::Rk | ClassKind::Vk => {
            if n < 2 {
                return Err(Error::param("n", "need n >= 2 for Rk/Vk"));
            }
            let mut vk = 1.0;
            for v in 0..=(n - 2) {
                vk *= k + v as f64;
                vk /= (v + 2) as f64;
            }
            Ok(match kind {
                ClassKind::Rk => vk * n as f64,
                _ => vk,
            })
        }
    }
}

/// The radius of starlikeness of `R_k`: `(k - sqrt(k^2 - 4))/2`, the smaller
/// root of `1 - kr + r^2 = 0`.
pub fn radius_starlike(k: f64) -> Result<f64> {
    if !(k >= 2.0) {
        return Err(Error::param("k", format!("need k >= 2, got {k}")));
    }
    Ok((k - (k * k - 4.0).sqrt()) / 2.0)
}
