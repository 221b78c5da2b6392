//! Pade recognition of truncated series as rational functions, by exact
//! nullspace computation.

use num_bigint::BigInt;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::linalg::rational_nullspace;
use crate::poly::{IntPoly, RationalFunction};
use crate::rational::Rat;
use crate::series::PowerSeries;

/// Recognise `f` as P/Q with deg P <= num_deg, deg Q <= den_deg.
///
/// Every known coefficient of `f` becomes a linear condition on (P, Q), so
/// the series must be at least `num_deg + den_deg + 2` long: one surplus term
/// beyond the classical Pade system. A unique (up to scale) solution that
/// also matches every surplus term is returned in canonical form; no solution
/// means the series is not rational of these degrees, and more than one
/// solution is reported as ambiguity rather than resolved by a convention.
pub fn pade(f: &PowerSeries, num_deg: usize, den_deg: usize) -> Result<RationalFunction> {
    let need = num_deg + den_deg + 2;
    if f.order() < need {
        return Err(Error::InsufficientOrder {
            have: f.order(),
            need,
        });
    }
    let np = num_deg + 1;
    let nq = den_deg + 1;
    let cols = np + nq;
    // Row n: sum_j q_j f_{n-j} - p_n = 0.
    let mut rows = Vec::with_capacity(f.order());
    for n in 0..f.order() {
        let mut row = vec![Rat::zero(); cols];
        if n < np {
            row[n] = -Rat::one();
        }
        for j in 0..nq.min(n + 1) {
            row[np + j] = f.coeff(n - j).clone();
        }
        rows.push(row);
    }
    let basis = rational_nullspace(&rows, cols);
    match basis.len() {
        0 => Err(Error::NotRational),
        1 => {
            let v = &basis[0];
            let mut lcm = BigInt::from(1);
            for x in v {
                lcm = lcm.lcm(x.denom());
            }
            let scale = Rat::from_integer(lcm);
            let ints =
                |range: std::ops::Range<usize>| -> Vec<BigInt> {
                    v[range]
                        .iter()
                        .map(|x| (x * &scale).to_integer().unwrap())
                        .collect()
                };
            let p = IntPoly::new(ints(0..np));
            let q = IntPoly::new(ints(np..cols));
            if q.constant_term() == BigInt::from(0) {
                return Err(Error::NotRational);
            }
            RationalFunction::new(p, q)
        }
        n => Err(Error::PadeAmbiguous(n)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recognises_geometric_series() {
        let f = PowerSeries::from_i64s(&[1, 1, 1, 1, 1]);
        let r = pade(&f, 0, 1).unwrap();
        assert_eq!(r.numerator(), &IntPoly::one());
        assert_eq!(r.denominator(), &IntPoly::from_i64s(&[1, -1]));
    }

    #[test]
    fn recognises_yukawa_shape() {
        let target = RationalFunction::new(
            IntPoly::from_i64s(&[3, -1]),
            IntPoly::from_i64s(&[1, -57, -289, 1]),
        )
        .unwrap();
        let f = target.to_series(12).unwrap();
        assert_eq!(pade(&f, 1, 3).unwrap(), target);
    }

    #[test]
    fn rejects_exponential() {
        let mut coeffs = vec![Rat::one()];
        let mut fact = Rat::one();
        for k in 1..6 {
            fact = fact * Rat::from_frac(1, k);
            coeffs.push(fact.clone());
        }
        let f = PowerSeries::new(coeffs);
        assert!(matches!(pade(&f, 1, 1), Err(Error::NotRational)));
    }

    #[test]
    fn ambiguity_is_an_error() {
        // Constant series at degrees (1,1): (1,1) and (x,x) both match.
        let f = PowerSeries::from_i64s(&[1, 0, 0, 0, 0]);
        assert!(matches!(pade(&f, 1, 1), Err(Error::PadeAmbiguous(2))));
    }

    #[test]
    fn too_short_series_is_rejected() {
        let f = PowerSeries::from_i64s(&[1, 1, 1]);
        assert!(matches!(
            pade(&f, 1, 1),
            Err(Error::InsufficientOrder { have: 3, need: 4 })
        ));
    }
}
