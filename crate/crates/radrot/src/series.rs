//! Truncated complex power series arithmetic.
//!
//! A [`TruncSeries`] stores the coefficients `c_0..c_N` of an analytic
//! function on the unit disk, with the truncation order `N` carried as
//! explicit state. Mixed-order arithmetic truncates to the shorter operand
//! instead of zero-padding, so the tail-error budget of a result is never
//! silently better than its inputs.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::de::{Error as DeError, SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Default guard for divisions and logarithms of a small constant term.
pub const DEFAULT_DIV_EPS: f64 = 1e-12;

/// A complex power series truncated at a fixed order.
///
/// `coeffs[n]` is the coefficient of `z^n`; the order is `coeffs.len() - 1`.
/// Coefficients are stored exactly as given, never normalized.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries {
    coeffs: Vec<Complex64>,
}

impl TruncSeries {
    /// Builds a series from its coefficients. Fails on an empty list or any
    /// non-finite coefficient.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::param("coeffs", "series needs at least one coefficient"));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::param("coeffs", "series coefficients must be finite"));
        }
        Ok(TruncSeries { coeffs })
    }

    /// Convenience constructor from real coefficients.
    ///
    /// Panics on empty or non-finite input; intended for literals in tests
    /// and closed-form constructions.
    pub fn from_real(coeffs: &[f64]) -> Self {
        let cs = coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        TruncSeries::new(cs).expect("finite real coefficients")
    }

    /// The zero series of the given order.
    pub fn zero(order: usize) -> Self {
        TruncSeries {
            coeffs: vec![Complex64::new(0.0, 0.0); order + 1],
        }
    }

    /// The constant series `c` of the given order.
    pub fn constant(c: Complex64, order: usize) -> Self {
        let mut s = TruncSeries::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The constant series `1` of the given order.
    pub fn one(order: usize) -> Self {
        TruncSeries::constant(Complex64::new(1.0, 0.0), order)
    }

    /// The series `z` of the given order (order must be at least 1).
    pub fn variable(order: usize) -> Self {
        assert!(order >= 1, "the series z needs order >= 1");
        let mut s = TruncSeries::zero(order);
        s.coeffs[1] = Complex64::new(1.0, 0.0);
        s
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// All stored coefficients, index = power.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^n`. Panics if `n` exceeds the truncation order:
    /// coefficients past the order are unknown, not zero.
    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs[n]
    }

    /// A copy truncated to `min(order, self.order())`.
    pub fn truncated(&self, order: usize) -> Self {
        let keep = order.min(self.order()) + 1;
        TruncSeries {
            coeffs: self.coeffs[..keep].to_vec(),
        }
    }

    /// Multiplies every coefficient by a complex scalar.
    pub fn scaled(&self, c: Complex64) -> Self {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiplies every coefficient by a real scalar.
    pub fn scaled_real(&self, x: f64) -> Self {
        self.scaled(Complex64::new(x, 0.0))
    }

    fn binary_order(&self, rhs: &TruncSeries) -> usize {
        self.order().min(rhs.order())
    }

    /// Quotient `self / rhs` to the min of both orders, using the default
    /// constant-term guard.
    pub fn div(&self, rhs: &TruncSeries) -> Result<TruncSeries> {
        self.div_eps(rhs, DEFAULT_DIV_EPS)
    }

    /// Quotient with an explicit guard: requires `|rhs_0| > eps`.
    pub fn div_eps(&self, rhs: &TruncSeries, eps: f64) -> Result<TruncSeries> {
        let b0 = rhs.coeffs[0];
        if b0.norm() <= eps {
            return Err(Error::DivisionBySmallConstant {
                modulus: b0.norm(),
                eps,
            });
        }
        let order = self.binary_order(rhs);
        let mut q = vec![Complex64::new(0.0, 0.0); order + 1];
        for n in 0..=order {
            let mut acc = self.coeffs[n];
            for j in 1..=n {
                acc -= rhs.coeffs[j] * q[n - j];
            }
            q[n] = acc / b0;
        }
        Ok(TruncSeries { coeffs: q })
    }

    /// Derivative `d/dz`: coefficient `n` becomes `(n+1) c_{n+1}`, order drops
    /// by one (a constant series differentiates to the zero constant).
    pub fn derivative(&self) -> TruncSeries {
        if self.order() == 0 {
            return TruncSeries::zero(0);
        }
        let coeffs = (1..=self.order())
            .map(|n| self.coeffs[n] * n as f64)
            .collect();
        TruncSeries { coeffs }
    }

    /// The operator `z d/dz`: coefficient `n` becomes `n c_n`, order kept.
    pub fn z_derivative(&self) -> TruncSeries {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| c * n as f64)
            .collect();
        TruncSeries { coeffs }
    }

    /// Termwise antiderivative with integration constant 0; order grows by one.
    pub fn antiderivative(&self) -> TruncSeries {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Complex64::new(0.0, 0.0));
        for (n, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / (n + 1) as f64);
        }
        TruncSeries { coeffs }
    }

    /// Multiplies by `z^m`. The monomial is exact, so the order grows by `m`.
    pub fn shifted_up(&self, m: usize) -> TruncSeries {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); m];
        coeffs.extend_from_slice(&self.coeffs);
        TruncSeries { coeffs }
    }

    /// Divides by `z^m`; the lowest `m` coefficients must be exactly zero.
    pub fn shifted_down(&self, m: usize) -> Result<TruncSeries> {
        if m > self.order() {
            return Err(Error::param("m", "shift exceeds truncation order"));
        }
        if self.coeffs[..m].iter().any(|c| c.norm() != 0.0) {
            return Err(Error::param(
                "m",
                "series has nonzero coefficients below the requested shift",
            ));
        }
        Ok(TruncSeries {
            coeffs: self.coeffs[m..].to_vec(),
        })
    }

    /// Series exponential via the recurrence `(exp s)' = s' exp s`.
    pub fn exp(&self) -> TruncSeries {
        let order = self.order();
        let mut e = vec![Complex64::new(0.0, 0.0); order + 1];
        e[0] = self.coeffs[0].exp();
        for n in 1..=order {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 1..=n {
                acc += self.coeffs[j] * j as f64 * e[n - j];
            }
            e[n] = acc / n as f64;
        }
        TruncSeries { coeffs: e }
    }

    /// Series logarithm, principal branch anchored at `log c_0`.
    pub fn log(&self) -> Result<TruncSeries> {
        self.log_eps(DEFAULT_DIV_EPS)
    }

    /// Logarithm with an explicit constant-term guard.
    pub fn log_eps(&self, eps: f64) -> Result<TruncSeries> {
        let c0 = self.coeffs[0];
        if c0.norm() <= eps {
            return Err(Error::DivisionBySmallConstant {
                modulus: c0.norm(),
                eps,
            });
        }
        let order = self.order();
        let mut l = vec![Complex64::new(0.0, 0.0); order + 1];
        l[0] = c0.ln();
        for n in 1..=order {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, lj) in l.iter().enumerate().take(n).skip(1) {
                acc += lj * j as f64 * self.coeffs[n - j];
            }
            l[n] = (self.coeffs[n] - acc / n as f64) / c0;
        }
        Ok(TruncSeries { coeffs: l })
    }

    /// Real power `s^alpha = exp(alpha log s)`; equals the binomial series
    /// when `s = 1 ± z`.
    pub fn pow_real(&self, alpha: f64) -> Result<TruncSeries> {
        self.pow_real_eps(alpha, DEFAULT_DIV_EPS)
    }

    /// Real power with an explicit constant-term guard.
    pub fn pow_real_eps(&self, alpha: f64, eps: f64) -> Result<TruncSeries> {
        Ok(self.log_eps(eps)?.scaled_real(alpha).exp())
    }

    /// Horner-style composition `self(inner)`, truncated at the min of both
    /// orders. The inner constant term must be exactly zero.
    pub fn compose(&self, inner: &TruncSeries) -> Result<TruncSeries> {
        let i0 = inner.coeffs[0];
        if i0.norm() != 0.0 {
            return Err(Error::NonzeroInnerConstant { got: i0 });
        }
        let order = self.binary_order(inner);
        let inner_t = inner.truncated(order);
        let mut acc = TruncSeries::constant(self.coeffs[self.order()], order);
        for n in (0..self.order()).rev() {
            acc = &(&acc * &inner_t) + &TruncSeries::constant(self.coeffs[n], order);
        }
        Ok(acc)
    }

    /// Partial sum `sum c_n z^n` by Horner's rule. The caller owns the
    /// truncation-error budget for `|z|` close to 1.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        let mut acc = self.coeffs[self.order()];
        for n in (0..self.order()).rev() {
            acc = acc * z + self.coeffs[n];
        }
        acc
    }

    /// Largest coefficientwise distance over the common order; gauges
    /// agreement of two series built along different routes.
    pub fn coeff_distance(&self, other: &TruncSeries) -> f64 {
        let order = self.binary_order(other);
        (0..=order)
            .map(|n| (self.coeffs[n] - other.coeffs[n]).norm())
            .fold(0.0, f64::max)
    }

    /// Geometric tail heuristic at radius `r`: `|c_N| r^{N+1} / (1-r)`,
    /// treating all unknown coefficients as large as the last stored one.
    pub fn tail_estimate(&self, r: f64) -> f64 {
        debug_assert!((0.0..1.0).contains(&r));
        self.coeffs[self.order()].norm() * r.powi(self.order() as i32 + 1) / (1.0 - r)
    }
}

impl Add for &TruncSeries {
    type Output = TruncSeries;
    fn add(self, rhs: &TruncSeries) -> TruncSeries {
        let order = self.binary_order(rhs);
        let coeffs = (0..=order).map(|n| self.coeffs[n] + rhs.coeffs[n]).collect();
        TruncSeries { coeffs }
    }
}

impl Sub for &TruncSeries {
    type Output = TruncSeries;
    fn sub(self, rhs: &TruncSeries) -> TruncSeries {
        let order = self.binary_order(rhs);
        let coeffs = (0..=order).map(|n| self.coeffs[n] - rhs.coeffs[n]).collect();
        TruncSeries { coeffs }
    }
}

impl Mul for &TruncSeries {
    type Output = TruncSeries;
    /// Cauchy product truncated at the min of both orders.
    fn mul(self, rhs: &TruncSeries) -> TruncSeries {
        let order = self.binary_order(rhs);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
        for (n, c) in coeffs.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..=n {
                acc += self.coeffs[j] * rhs.coeffs[n - j];
            }
            *c = acc;
        }
        TruncSeries { coeffs }
    }
}

impl Neg for &TruncSeries {
    type Output = TruncSeries;
    fn neg(self) -> TruncSeries {
        self.scaled_real(-1.0)
    }
}

// JSON form: an array of [re, im] pairs, index = power.
impl Serialize for TruncSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&[c.re, c.im])?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for TruncSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct SeriesVisitor;

        impl<'de> Visitor<'de> for SeriesVisitor {
            type Value = TruncSeries;

            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("an array of [re, im] coefficient pairs")
            }

            fn visit_seq<A: SeqAccess<'de>>(
                self,
                mut seq: A,
            ) -> std::result::Result<TruncSeries, A::Error> {
                let mut coeffs = Vec::new();
                while let Some([re, im]) = seq.next_element::<[f64; 2]>()? {
                    coeffs.push(Complex64::new(re, im));
                }
                TruncSeries::new(coeffs).map_err(A::Error::custom)
            }
        }

        deserializer.deserialize_seq(SeriesVisitor)
    }
}
