//! Holomorphic period series of the residue-integrand models.
//!
//! Two independent routes compute the same series: a generic enumeration over
//! nonnegative kernel points of the exponent matrix (works for any model, the
//! oracle), and per-family closed-form multinomial sums (fast to any order).

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{enumerate_kernel_points, ydeg_stride};
use crate::model::MonomialModel;
use crate::rational::Rat;
use crate::series::PowerSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PeriodMethod {
    ClosedForm,
    Enumeration,
}

/// A holomorphic period: a power series in the natural parameter with
/// constant term 1 and positive integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodSeries {
    pub series: PowerSeries,
    pub model: String,
    pub method: PeriodMethod,
}

/// Factorials cached up to a bound, with binomial and trinomial helpers.
struct Factorials {
    table: Vec<BigInt>,
}

impl Factorials {
    fn new(max: usize) -> Self {
        let mut table = Vec::with_capacity(max + 1);
        table.push(BigInt::one());
        for k in 1..=max {
            let next = &table[k - 1] * BigInt::from(k);
            table.push(next);
        }
        Factorials { table }
    }

    fn fact(&self, n: usize) -> &BigInt {
        &self.table[n]
    }

    fn binom(&self, n: usize, k: usize) -> BigInt {
        if k > n {
            return BigInt::from(0);
        }
        self.fact(n) / (self.fact(k) * self.fact(n - k))
    }

    /// n! / (a! b! c!) with a + b + c = n.
    fn trinom(&self, n: usize, a: usize, b: usize, c: usize) -> BigInt {
        debug_assert_eq!(a + b + c, n);
        self.fact(n) / (self.fact(a) * self.fact(b) * self.fact(c))
    }
}

/// Brute-force period: coefficient m is the signed multinomial-weighted count
/// of kernel points at y-degree `stride * m`.
pub fn period_enumeration(model: &MonomialModel, order: usize) -> Result<PeriodSeries> {
    let mat = model.exponent_matrix();
    let stride = ydeg_stride(&mat);
    let mut coeffs = vec![Rat::zero(); order];
    if order > 0 {
        coeffs[0] = Rat::one();
    }
    if stride > 0 {
        let max_n = mat
            .ygrades
            .iter()
            .filter(|&&g| g > 0)
            .map(|&g| stride as usize * order.saturating_sub(1) / g as usize)
            .max()
            .unwrap_or(0);
        let facts = Factorials::new(max_n.max(1) * mat.nrows());
        for (m, c) in coeffs.iter_mut().enumerate().skip(1) {
            let mut acc = BigInt::from(0);
            for point in enumerate_kernel_points(&mat, stride * m as u32)? {
                let mut weight = BigInt::one();
                for &(start, end) in &mat.groups {
                    let group = &point[start..end];
                    let total: u32 = group.iter().sum();
                    weight *= facts.fact(total as usize);
                    for &n in group {
                        weight /= facts.fact(n as usize);
                    }
                }
                if mat.sign_of(&point) < 0 {
                    acc -= weight;
                } else {
                    acc += weight;
                }
            }
            *c = Rat::from_integer(acc);
        }
    }
    Ok(PeriodSeries {
        series: PowerSeries::new(coeffs),
        model: model.name.clone(),
        method: PeriodMethod::Enumeration,
    })
}

/// Closed-form period of the pfaffian quotient family: a four-index
/// binomial/multinomial sum per coefficient.
pub fn period_closed_form_pfaffian(order: usize) -> PeriodSeries {
    let facts = Factorials::new(2 * order + 2);
    let mut coeffs = Vec::with_capacity(order);
    for m in 0..order {
        let mut acc = BigInt::from(0);
        for m1 in 0..=m {
            for m6 in 0..=m - m1 {
                for u1 in 0..=m - m1 - m6 {
                    let u2 = m - m1 - m6 - u1;
                    let mut term = self_square(facts.binom(m, u1))
                        * self_square(facts.binom(m, u2))
                        * facts.binom(m + m6, m)
                        * facts.trinom(m + m6, m1, u1 + m6, u2 + m6);
                    if m1 % 2 == 1 {
                        term = -term;
                    }
                    acc += term;
                }
            }
        }
        coeffs.push(Rat::from_integer(acc));
    }
    PeriodSeries {
        series: PowerSeries::new(coeffs),
        model: "pfaffian".into(),
        method: PeriodMethod::ClosedForm,
    }
}

fn self_square(x: BigInt) -> BigInt {
    &x * &x
}

/// Closed-form period of the Grassmannian quotient family: a four-index sum
/// with two large multinomial factors per term.
pub fn period_closed_form_grassmannian(order: usize) -> PeriodSeries {
    let facts = Factorials::new(2 * order + 2);
    let mut coeffs = Vec::with_capacity(order);
    for m in 0..order {
        let mut acc = BigInt::from(0);
        for m1 in 0..=m {
            for m2 in 0..=m - m1 {
                for m3 in 0..=m - m1 - m2 {
                    let m4 = m - m1 - m2 - m3;
                    let mut term = facts.binom(m, m2)
                        * facts.binom(m, m4)
                        * facts.binom(m + m3, m)
                        * facts.trinom(m + m2 + m3, m1, m2 + m3, m2 + m3 + m4)
                        * facts.trinom(m + m3 + m4, m1, m3 + m4, m2 + m3 + m4);
                    if (m2 + m4) % 2 == 1 {
                        term = -term;
                    }
                    acc += term;
                }
            }
        }
        coeffs.push(Rat::from_integer(acc));
    }
    PeriodSeries {
        series: PowerSeries::new(coeffs),
        model: "grassmannian".into(),
        method: PeriodMethod::ClosedForm,
    }
}

/// Dispatch the closed form by preset name.
pub fn period_closed_form(model_name: &str, order: usize) -> Result<PeriodSeries> {
    match model_name {
        "pfaffian" => Ok(period_closed_form_pfaffian(order)),
        "grassmannian" => Ok(period_closed_form_grassmannian(order)),
        other => Err(Error::NoClosedForm(other.to_string())),
    }
}
