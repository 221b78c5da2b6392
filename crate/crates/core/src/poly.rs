//! Dense integer-coefficient polynomials and reduced rational functions.
//!
//! Degrees in this crate stay below ~10, so everything is plain dense
//! arithmetic. Polynomials are kept with trailing zeros trimmed; the zero
//! polynomial has an empty coefficient vector.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rat;
use crate::series::PowerSeries;

/// Integer-coefficient polynomial, `coeffs[k]` multiplying x^k.
#[derive(Clone, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        IntPoly {
            coeffs: vec![BigInt::one()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(0)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    /// Lowest-index nonzero coefficient (zero for the zero polynomial).
    pub fn trailing(&self) -> BigInt {
        self.coeffs
            .iter()
            .find(|c| !c.is_zero())
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    /// gcd of all coefficients; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    pub fn neg(&self) -> Self {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &IntPoly) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPoly::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &IntPoly) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &IntPoly) -> Self {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn scalar_mul(&self, s: &BigInt) -> Self {
        IntPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Multiply by x^k.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPoly::new(coeffs)
    }

    /// Coefficient reversal x^n p(1/x) for n = deg p.
    pub fn reversed(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        IntPoly::new(coeffs)
    }

    pub fn eval_rat(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + Rat::from_integer(c.clone());
        }
        acc
    }

    /// Exact polynomial quotient, or None if the division leaves a remainder
    /// or is not integral.
    pub fn div_exact(&self, divisor: &IntPoly) -> Option<IntPoly> {
        if divisor.is_zero() {
            return None;
        }
        let mut rem: Vec<Rat> = self
            .coeffs
            .iter()
            .map(|c| Rat::from_integer(c.clone()))
            .collect();
        let dd = divisor.degree()?;
        let lead = Rat::from_integer(divisor.leading());
        if rem.len() < dd + 1 {
            return self.is_zero().then(IntPoly::zero);
        }
        let qn = rem.len() - dd;
        let mut quo = vec![Rat::zero(); qn];
        for k in (0..qn).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    let t = &c * &Rat::from_integer(d.clone());
                    rem[k + j] = &rem[k + j] - &t;
                }
            }
            quo[k] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        let mut out = Vec::with_capacity(qn);
        for c in quo {
            out.push(c.to_integer()?);
        }
        Some(IntPoly::new(out))
    }

    /// Embed as an exact power series of the given order.
    pub fn to_series(&self, order: usize) -> PowerSeries {
        let mut coeffs = vec![Rat::zero(); order];
        for (k, c) in self.coeffs.iter().enumerate().take(order) {
            coeffs[k] = Rat::from_integer(c.clone());
        }
        PowerSeries::new(coeffs)
    }

    pub fn display<'a>(&'a self, var: &'a str) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, var }
    }
}

/// Primitive part and gcd-reduction helpers over the rationals.
fn rat_poly_gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
    // Euclidean algorithm over Q, returning a primitive integer gcd.
    let mut a: Vec<Rat> = a
        .coeffs()
        .iter()
        .map(|c| Rat::from_integer(c.clone()))
        .collect();
    let mut b: Vec<Rat> = b
        .coeffs()
        .iter()
        .map(|c| Rat::from_integer(c.clone()))
        .collect();
    let trim = |v: &mut Vec<Rat>| {
        while v.last().is_some_and(Rat::is_zero) {
            v.pop();
        }
    };
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        // a mod b
        while a.len() >= b.len() {
            let f = a.last().unwrap() / b.last().unwrap();
            let shift = a.len() - b.len();
            let alen = a.len();
            for (j, c) in b.iter().enumerate() {
                let t = &f * c;
                a[shift + j] = &a[shift + j] - &t;
            }
            a[alen - 1] = Rat::zero();
            trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    if a.is_empty() {
        return IntPoly::zero();
    }
    // Clear denominators, then divide by content.
    let mut lcm = BigInt::one();
    for c in &a {
        lcm = lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = a
        .iter()
        .map(|c| (c * &Rat::from_integer(lcm.clone())).to_integer().unwrap())
        .collect();
    let p = IntPoly::new(ints);
    let content = p.content();
    p.div_exact(&IntPoly::new(vec![content])).unwrap()
}

/// Reduced ratio of two integer polynomials.
///
/// Canonical form: numerator and denominator coprime, jointly content-free
/// (gcd of the two contents is 1), and the denominator has positive constant
/// term (positive leading coefficient if the constant term vanishes).
#[derive(Clone, PartialEq, Eq)]
pub struct RationalFunction {
    num: IntPoly,
    den: IntPoly,
}

impl RationalFunction {
    pub fn new(num: IntPoly, den: IntPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let g = rat_poly_gcd(&num, &den);
        let (mut num, mut den) = if g.degree().unwrap_or(0) > 0 {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        } else {
            (num, den)
        };
        let cn = num.content();
        let cd = den.content();
        let joint = cn.gcd(&cd);
        if joint > BigInt::one() {
            let j = IntPoly::new(vec![joint]);
            num = num.div_exact(&j).unwrap();
            den = den.div_exact(&j).unwrap();
        }
        let anchor = if den.constant_term().is_zero() {
            den.leading()
        } else {
            den.constant_term()
        };
        if anchor.is_negative() {
            num = num.neg();
            den = den.neg();
        }
        Ok(RationalFunction { num, den })
    }

    pub fn numerator(&self) -> &IntPoly {
        &self.num
    }

    pub fn denominator(&self) -> &IntPoly {
        &self.den
    }

    /// Series expansion at 0; requires den(0) != 0.
    pub fn to_series(&self, order: usize) -> Result<PowerSeries> {
        let den = self.den.to_series(order).invert()?;
        Ok(&self.num.to_series(order) * &den)
    }

    /// True if `self = c * other` for some nonzero rational constant c.
    pub fn proportional_to(&self, other: &RationalFunction) -> bool {
        // Cross-multiply: num1*den2 = c * num2*den1.
        let lhs = self.num.mul(&other.den);
        let rhs = other.num.mul(&self.den);
        if lhs.is_zero() || rhs.is_zero() {
            return lhs.is_zero() && rhs.is_zero();
        }
        if lhs.degree() != rhs.degree() {
            return false;
        }
        let a = lhs.leading();
        let b = rhs.leading();
        lhs.scalar_mul(&b) == rhs.scalar_mul(&a)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num.display("x"), self.den.display("x"))
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a IntPoly,
    var: &'a str,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.poly.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
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
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display("x"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trims_trailing_zeros() {
        let p = IntPoly::from_i64s(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert!(IntPoly::from_i64s(&[0, 0]).is_zero());
    }

    #[test]
    fn exact_division() {
        // (1 - 57x - 289x^2 + x^3)(x - 3)^2 expands and divides back.
        let cubic = IntPoly::from_i64s(&[1, -57, -289, 1]);
        let square = IntPoly::from_i64s(&[9, -6, 1]);
        let prod = cubic.mul(&square);
        assert_eq!(prod, IntPoly::from_i64s(&[9, -519, -2258, 1686, -295, 1]));
        assert_eq!(prod.div_exact(&cubic).unwrap(), square);
        assert_eq!(prod.div_exact(&square).unwrap(), cubic);
        assert!(prod.div_exact(&IntPoly::from_i64s(&[1, 1])).is_none());
    }

    #[test]
    fn rational_function_reduces() {
        // (x^2 - 1)/(x - 1) reduces to (x + 1)/1.
        let r = RationalFunction::new(
            IntPoly::from_i64s(&[-1, 0, 1]),
            IntPoly::from_i64s(&[-1, 1]),
        )
        .unwrap();
        assert_eq!(r.numerator(), &IntPoly::from_i64s(&[1, 1]));
        assert_eq!(r.denominator(), &IntPoly::one());
    }

    #[test]
    fn joint_content_normalisation() {
        // (2 - 2x)/(6 + 2x) -> (1 - x)/(3 + x)
        let r =
            RationalFunction::new(IntPoly::from_i64s(&[2, -2]), IntPoly::from_i64s(&[6, 2]))
                .unwrap();
        assert_eq!(r.numerator(), &IntPoly::from_i64s(&[1, -1]));
        assert_eq!(r.denominator(), &IntPoly::from_i64s(&[3, 1]));
        // Mixed contents stay: (3 - x) over 3*(1 - 57x - 289x^2 + x^3).
        let r2 = RationalFunction::new(
            IntPoly::from_i64s(&[3, -1]),
            IntPoly::from_i64s(&[3, -171, -867, 3]),
        )
        .unwrap();
        assert_eq!(r2.numerator(), &IntPoly::from_i64s(&[3, -1]));
        assert_eq!(r2.denominator(), &IntPoly::from_i64s(&[3, -171, -867, 3]));
    }

    #[test]
    fn denominator_sign_is_fixed() {
        let r =
            RationalFunction::new(IntPoly::from_i64s(&[1]), IntPoly::from_i64s(&[-1, -1]))
                .unwrap();
        assert_eq!(r.denominator(), &IntPoly::from_i64s(&[1, 1]));
        assert_eq!(r.numerator(), &IntPoly::from_i64s(&[-1]));
    }

    #[test]
    fn series_expansion() {
        let r =
            RationalFunction::new(IntPoly::one(), IntPoly::from_i64s(&[1, -1])).unwrap();
        assert_eq!(
            r.to_series(4).unwrap(),
            PowerSeries::from_i64s(&[1, 1, 1, 1])
        );
    }

    #[test]
    fn proportionality() {
        let a = RationalFunction::new(
            IntPoly::from_i64s(&[3, -1]),
            IntPoly::from_i64s(&[1, -57, -289, 1]),
        )
        .unwrap();
        let b = RationalFunction::new(
            IntPoly::from_i64s(&[6, -2]),
            IntPoly::from_i64s(&[1, -57, -289, 1]),
        )
        .unwrap();
        assert!(a.proportional_to(&b));
        let c = RationalFunction::new(
            IntPoly::from_i64s(&[3, 1]),
            IntPoly::from_i64s(&[1, -57, -289, 1]),
        )
        .unwrap();
        assert!(!a.proportional_to(&c));
    }
}
