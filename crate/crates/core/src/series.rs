//! Truncated formal power series over exact rationals.
//!
//! A series carries its own truncation order: `coeffs.len()` coefficients are
//! valid, everything beyond is unknown. Binary operations truncate to the
//! minimum of the two input orders, so the validity bound is never silently
//! overstated.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::rational::Rat;

/// Truncated power series; coefficient `k` of the underlying function is
/// `coeffs[k]` for `k < order()`.
#[derive(Clone, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<Rat>,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<Rat>) -> Self {
        PowerSeries { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        PowerSeries {
            coeffs: coeffs.iter().map(|&c| Rat::from_i64(c)).collect(),
        }
    }

    pub fn zero(order: usize) -> Self {
        PowerSeries {
            coeffs: vec![Rat::zero(); order],
        }
    }

    /// The constant series 1.
    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order > 0 {
            s.coeffs[0] = Rat::one();
        }
        s
    }

    /// The identity series x.
    pub fn identity(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order > 1 {
            s.coeffs[1] = Rat::one();
        }
        s
    }

    pub fn constant(c: Rat, order: usize) -> Self {
        let mut s = Self::zero(order);
        if order > 0 {
            s.coeffs[0] = c;
        }
        s
    }

    /// Number of valid coefficients.
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of x^k. Panics if `k` is beyond the truncation order.
    pub fn coeff(&self, k: usize) -> &Rat {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rat> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rat::is_zero)
    }

    pub fn truncated(&self, order: usize) -> Self {
        let order = order.min(self.coeffs.len());
        PowerSeries {
            coeffs: self.coeffs[..order].to_vec(),
        }
    }

    pub fn scalar_mul(&self, s: &Rat) -> Self {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Multiply by x^k. The k extra leading coefficients are exact, so the
    /// truncation order grows by k.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        PowerSeries { coeffs }
    }

    /// Divide by x, requiring a zero constant term.
    pub fn shift_down(&self) -> Result<Self> {
        if self.coeffs.is_empty() || !self.coeffs[0].is_zero() {
            return Err(Error::NotAUnit);
        }
        Ok(PowerSeries {
            coeffs: self.coeffs[1..].to_vec(),
        })
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn invert(&self) -> Result<Self> {
        if self.coeffs.is_empty() || self.coeffs[0].is_zero() {
            return Err(Error::NotAUnit);
        }
        let n = self.order();
        let inv0 = self.coeffs[0].recip()?;
        let mut out = vec![Rat::zero(); n];
        out[0] = inv0.clone();
        for k in 1..n {
            let mut acc = Rat::zero();
            for j in 1..=k {
                acc += &self.coeffs[j] * &out[k - j];
            }
            out[k] = -(acc * &inv0);
        }
        Ok(PowerSeries { coeffs: out })
    }

    /// Termwise x d/dx: coefficient k maps to k * coefficient k.
    pub fn log_derivative(&self) -> Self {
        PowerSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c * &Rat::from_i64(k as i64))
                .collect(),
        }
    }

    /// Ordinary derivative d/dx; loses one coefficient of precision.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return PowerSeries::zero(self.coeffs.len().saturating_sub(1));
        }
        PowerSeries {
            coeffs: self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(j, c)| c * &Rat::from_i64(j as i64 + 1))
                .collect(),
        }
    }

    /// Inverse of the logarithmic derivative on series with zero constant
    /// term: coefficient k maps to (coefficient k)/k, constant term 0.
    pub fn integrate_log(&self) -> Result<Self> {
        if !self.coeffs.is_empty() && !self.coeffs[0].is_zero() {
            return Err(Error::NonIntegrable);
        }
        let mut out = vec![Rat::zero(); self.coeffs.len()];
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            out[k] = c * &Rat::from_frac(1, k as i64);
        }
        Ok(PowerSeries { coeffs: out })
    }

    /// log f for f with f(0) = 1.
    pub fn log(&self) -> Result<Self> {
        if self.coeffs.is_empty() || !self.coeffs[0].is_one() {
            let c = self
                .coeffs
                .first()
                .map(|c| c.to_string())
                .unwrap_or_else(|| "<empty>".into());
            return Err(Error::LogConstantTerm(c));
        }
        // D(log f) = Df / f, then integrate back.
        let df = self.log_derivative();
        let ratio = &df * &self.invert()?;
        ratio.integrate_log()
    }

    /// exp f for f with f(0) = 0.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs.is_empty() && !self.coeffs[0].is_zero() {
            return Err(Error::ExpConstantTerm(self.coeffs[0].to_string()));
        }
        let n = self.order();
        let mut out = vec![Rat::zero(); n];
        if n == 0 {
            return Ok(PowerSeries { coeffs: out });
        }
        out[0] = Rat::one();
        // g' = f' g termwise: n g_n = sum_{k=1..n} k f_k g_{n-k}.
        for m in 1..n {
            let mut acc = Rat::zero();
            for k in 1..=m {
                acc += &(&self.coeffs[k] * &Rat::from_i64(k as i64)) * &out[m - k];
            }
            out[m] = acc * Rat::from_frac(1, m as i64);
        }
        Ok(PowerSeries { coeffs: out })
    }

    /// Compositional inverse by Lagrange inversion; requires f(0) = 0 and
    /// f'(0) != 0.
    pub fn revert(&self) -> Result<Self> {
        if self.order() < 2 || !self.coeffs[0].is_zero() || self.coeffs[1].is_zero() {
            return Err(Error::RevertPrecondition);
        }
        let n = self.order();
        // w = x / f(x), a unit of order n-1.
        let w = self.shift_down()?.invert()?;
        let mut out = vec![Rat::zero(); n];
        // [x^k] f^{-1} = (1/k) [x^{k-1}] w^k
        let mut pow = w.clone();
        out[1] = pow.coeff(0) * &Rat::one();
        for k in 2..n {
            pow = &pow * &w;
            out[k] = pow.coeff(k - 1) * &Rat::from_frac(1, k as i64);
        }
        Ok(PowerSeries { coeffs: out })
    }

    /// Composition f(g) for g with g(0) = 0, by Horner evaluation.
    pub fn compose(&self, g: &PowerSeries) -> Result<Self> {
        if !g.coeffs.is_empty() && !g.coeffs[0].is_zero() {
            return Err(Error::ExpConstantTerm(g.coeffs[0].to_string()));
        }
        let n = self.order().min(g.order());
        let mut acc = PowerSeries::zero(n);
        for k in (0..self.order().min(n)).rev() {
            acc = &acc * g;
            acc = acc.add_truncated(&PowerSeries::constant(self.coeffs[k].clone(), n));
        }
        Ok(acc)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut out = PowerSeries::one(self.order());
        for _ in 0..exp {
            out = &out * self;
        }
        out
    }

    fn add_truncated(&self, other: &PowerSeries) -> PowerSeries {
        let n = self.order().min(other.order());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(&self.coeffs[k] + &other.coeffs[k]);
        }
        PowerSeries { coeffs }
    }

    /// Render with an explicit variable name, e.g. `1 + 5*x + 109*x^2`.
    pub fn display<'a>(&'a self, var: &'a str) -> SeriesDisplay<'a> {
        SeriesDisplay { series: self, var }
    }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;
    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        self.add_truncated(rhs)
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;
    fn sub(self, rhs: &PowerSeries) -> PowerSeries {
        let n = self.order().min(rhs.order());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) - rhs.coeff(k));
        }
        PowerSeries { coeffs }
    }
}

impl Neg for &PowerSeries {
    type Output = PowerSeries;
    fn neg(self) -> PowerSeries {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &PowerSeries {
    type Output = PowerSeries;
    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        let n = self.order().min(rhs.order());
        let mut coeffs = vec![Rat::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(n - i) {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] += a * b;
            }
        }
        PowerSeries { coeffs }
    }
}

pub struct SeriesDisplay<'a> {
    series: &'a PowerSeries,
    var: &'a str,
}

impl fmt::Display for SeriesDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.series.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if !c.is_positive() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_positive() {
                write!(f, " + ")?;
            } else {
                write!(f, " - ")?;
            }
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if mag.is_one() {
                        write!(f, "{}", self.var)?;
                    } else {
                        write!(f, "{mag}*{}", self.var)?;
                    }
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O({}^{})", self.var, self.series.order())
    }
}

impl fmt::Debug for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display("x"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(coeffs: &[i64]) -> PowerSeries {
        PowerSeries::from_i64s(coeffs)
    }

    #[test]
    fn difference_of_squares() {
        let a = s(&[1, 1, 0]);
        let b = s(&[1, -1, 0]);
        assert_eq!(&a * &b, s(&[1, 0, -1]));
    }

    #[test]
    fn period_square_first_terms() {
        // (1 + 5x + 109x^2)^2 = 1 + 10x + 243x^2 + ...
        let f = s(&[1, 5, 109]);
        assert_eq!(&f * &f, s(&[1, 10, 243]));
    }

    #[test]
    fn additive_identity() {
        let f = s(&[3, -2, 7, 1]);
        assert_eq!(&f + &PowerSeries::zero(4), f);
    }

    #[test]
    fn truncation_is_min_of_orders() {
        let a = s(&[1, 2, 3, 4, 5]);
        let b = s(&[1, 1]);
        assert_eq!((&a * &b).order(), 2);
        assert_eq!((&a + &b).order(), 2);
    }

    #[test]
    fn invert_geometric() {
        let f = s(&[1, -1, 0, 0, 0]);
        assert_eq!(f.invert().unwrap(), s(&[1, 1, 1, 1, 1]));
    }

    #[test]
    fn invert_period_head() {
        let f = s(&[1, 5, 109]);
        assert_eq!(f.invert().unwrap(), s(&[1, -5, -84]));
    }

    #[test]
    fn invert_constant() {
        let f = s(&[2, 0, 0]);
        let g = f.invert().unwrap();
        assert_eq!(g.coeff(0), &Rat::from_frac(1, 2));
        assert!(g.coeff(1).is_zero());
    }

    #[test]
    fn invert_needs_unit() {
        assert!(matches!(s(&[0, 1]).invert(), Err(Error::NotAUnit)));
    }

    #[test]
    fn exp_of_mirror_log() {
        // exp(14x + 287x^2) = 1 + 14x + 385x^2 + ...
        let g = s(&[0, 14, 287]);
        assert_eq!(g.exp().unwrap(), s(&[1, 14, 385]));
    }

    #[test]
    fn log_of_one_is_zero() {
        assert_eq!(s(&[1, 0, 0]).log().unwrap(), s(&[0, 0, 0]));
    }

    #[test]
    fn log_exp_roundtrip() {
        let f = s(&[0, 3, -1, 0, 0, 0, 0, 0]);
        assert_eq!(f.exp().unwrap().log().unwrap(), f);
    }

    #[test]
    fn log_requires_unit_one() {
        assert!(s(&[2, 1]).log().is_err());
        assert!(s(&[1, 1]).exp().is_err());
    }

    #[test]
    fn revert_q_series_head() {
        // x + 14x^2 + 385x^3 reverts to x - 14x^2 + 7x^3 (2*14^2 - 385 = 7).
        let q = s(&[0, 1, 14, 385]);
        assert_eq!(q.revert().unwrap(), s(&[0, 1, -14, 7]));
    }

    #[test]
    fn revert_identity() {
        let id = PowerSeries::identity(6);
        assert_eq!(id.revert().unwrap(), id);
    }

    #[test]
    fn revert_is_involution() {
        let f = s(&[0, 1, 1, 0, 0, 0, 0]);
        assert_eq!(f.revert().unwrap().revert().unwrap(), f);
    }

    #[test]
    fn revert_rejects_units() {
        assert!(s(&[1, 1]).revert().is_err());
        assert!(s(&[0, 0, 1]).revert().is_err());
    }

    #[test]
    fn log_derivative_termwise() {
        assert_eq!(s(&[1, 5, 109]).log_derivative(), s(&[0, 5, 218]));
        assert_eq!(s(&[7, 0, 0]).log_derivative(), s(&[0, 0, 0]));
    }

    #[test]
    fn compose_linear() {
        // f = 1 + x^2 composed with g = 2x gives 1 + 4x^2.
        let f = s(&[1, 0, 1]);
        let g = s(&[0, 2, 0]);
        assert_eq!(f.compose(&g).unwrap(), s(&[1, 0, 4]));
    }

    #[test]
    fn compose_with_revert_gives_identity() {
        let q = s(&[0, 1, 14, 385, -7, 2, 0, 0]);
        let inv = q.revert().unwrap();
        assert_eq!(q.compose(&inv).unwrap(), PowerSeries::identity(8));
        assert_eq!(inv.compose(&q).unwrap(), PowerSeries::identity(8));
    }
}
