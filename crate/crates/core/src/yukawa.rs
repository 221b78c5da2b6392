//! Mirror map, Yukawa coupling and instanton-number extraction.
//!
//! From a fitted operator and its Frobenius data this module builds the
//! natural coordinate q, transports the Yukawa coupling from the family
//! parameter to q, and inverts the Lambert-type sum
//! `n_0 + sum_d n_d d^3 q^d / (1 - q^d)` to read off the curve counts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::DiffOperator;
use crate::rational::Rat;
use crate::series::PowerSeries;

/// Which boundary point of the one-parameter family a pipeline runs at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecialPoint {
    Zero,
    Infinity,
}

impl SpecialPoint {
    pub fn variable(self) -> &'static str {
        match self {
            SpecialPoint::Zero => "phi",
            SpecialPoint::Infinity => "phi_tilde",
        }
    }
}

/// The coordinate change q = x e^{g(x)} and its inverse data.
#[derive(Clone, Debug)]
pub struct MirrorMap {
    /// q as a series in the family parameter; linear coefficient 1.
    pub q_of_phi: PowerSeries,
    /// The family parameter as a series in q.
    pub phi_of_q: PowerSeries,
    /// d log(phi)/d log(q) = (q / phi(q)) phi'(q), as a series in q.
    pub jacobian: PowerSeries,
}

impl MirrorMap {
    /// Build the map from the log-companion g (with g(0) = 0).
    pub fn from_g(g: &PowerSeries) -> Result<Self> {
        let q_of_phi = g.exp()?.shift_up(1);
        let phi_of_q = q_of_phi.revert()?;
        let ratio = phi_of_q.shift_down()?.invert()?; // q / phi(q)
        let jacobian = &ratio * &phi_of_q.derivative();
        Ok(MirrorMap {
            q_of_phi,
            phi_of_q,
            jacobian,
        })
    }
}

/// Solve `D log K = -A_{r-1} / (2 A_r)` for the series K with K(0) = 1.
///
/// The right-hand side must vanish at 0 (guaranteed at a point of maximally
/// unipotent monodromy); otherwise there is no series solution.
pub fn yukawa_phi(op: &DiffOperator, order: usize) -> Result<PowerSeries> {
    let r = op.order();
    if r != 4 {
        return Err(Error::NonIntegrable);
    }
    let lead = op.coeff(r);
    if lead.constant_term() == num_bigint::BigInt::from(0) {
        return Err(Error::NonIntegrable);
    }
    let sub = op.coeff(r - 1);
    let denom = lead.scalar_mul(&num_bigint::BigInt::from(2));
    let rhs = -&(&sub.to_series(order) * &denom.to_series(order).invert()?);
    if !rhs.coeff(0).is_zero() {
        return Err(Error::NonIntegrable);
    }
    rhs.integrate_log()?.exp()
}

/// Transport the Yukawa coupling to the q coordinate:
/// `jacobian^3 * f0(phi(q))^{-2} * c1 * K(phi(q))`.
pub fn yukawa_q(
    k_phi: &PowerSeries,
    map: &MirrorMap,
    f0: &PowerSeries,
    c1: &Rat,
) -> Result<PowerSeries> {
    let f0_q = f0.compose(&map.phi_of_q)?;
    let k_q = k_phi.compose(&map.phi_of_q)?;
    let jac3 = map.jacobian.pow(3);
    let f0_sq_inv = (&f0_q * &f0_q).invert()?;
    Ok((&(&jac3 * &f0_sq_inv) * &k_q).scalar_mul(c1))
}

/// Curve counts extracted from a Yukawa q-expansion; `nd[d-1]` is the degree-d
/// count. The counts are multiples of the overall normalisation m; `m` records
/// the value used to resolve them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstantonSeries {
    pub n0: Rat,
    pub nd: Vec<Rat>,
    pub m: Rat,
    pub point: SpecialPoint,
}

impl InstantonSeries {
    /// All entries integral and positive, the sanity expected of the
    /// normalised counts.
    pub fn integral_and_positive(&self) -> bool {
        std::iter::once(&self.n0)
            .chain(&self.nd)
            .all(|x| x.is_integer() && x.is_positive())
    }

    pub fn resolved_n0(&self) -> Rat {
        &self.n0 * &self.m
    }

    pub fn resolved_nd(&self) -> Vec<Rat> {
        self.nd.iter().map(|x| x * &self.m).collect()
    }
}

/// Invert the Lambert-type expansion of a Yukawa coupling: the q^d
/// coefficient receives `n_e e^3` from every divisor e of d, so
/// `n_d = (coeff_d - sum_{e|d, e<d} n_e e^3) / d^3`.
pub fn extract_instantons(kappa: &PowerSeries, m: Rat, point: SpecialPoint) -> InstantonSeries {
    let order = kappa.order();
    let n0 = if order > 0 {
        kappa.coeff(0).clone()
    } else {
        Rat::zero()
    };
    let mut nd: Vec<Rat> = Vec::with_capacity(order.saturating_sub(1));
    for d in 1..order {
        let mut acc = kappa.coeff(d).clone();
        for e in 1..d {
            if d % e == 0 {
                let cube = Rat::from_i64((e * e * e) as i64);
                acc = acc - &nd[e - 1] * &cube;
            }
        }
        let d3 = Rat::from_i64((d * d * d) as i64);
        nd.push(acc / d3);
    }
    InstantonSeries { n0, nd, m, point }
}

/// Rebuild the Yukawa q-expansion from curve counts:
/// `n0 + sum_d n_d d^3 q^d / (1 - q^d)` to the given order.
pub fn lambert_roundtrip(inst: &InstantonSeries, order: usize) -> PowerSeries {
    let mut coeffs = vec![Rat::zero(); order];
    if order > 0 {
        coeffs[0] = inst.n0.clone();
    }
    for (i, n) in inst.nd.iter().enumerate() {
        let d = i + 1;
        if n.is_zero() {
            continue;
        }
        let weight = n * &Rat::from_i64((d * d * d) as i64);
        let mut k = d;
        while k < order {
            coeffs[k] += &weight;
            k += d;
        }
    }
    PowerSeries::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::IntPoly;

    #[test]
    fn mirror_map_head_terms() {
        // g = 14x + 287x^2 gives q = x + 14x^2 + 385x^3.
        let g = PowerSeries::from_i64s(&[0, 14, 287]);
        let map = MirrorMap::from_g(&g).unwrap();
        assert_eq!(map.q_of_phi, PowerSeries::from_i64s(&[0, 1, 14, 385]));
        assert_eq!(map.phi_of_q, PowerSeries::from_i64s(&[0, 1, -14, 7]));
        let roundtrip = map.q_of_phi.compose(&map.phi_of_q).unwrap();
        assert_eq!(roundtrip, PowerSeries::identity(4));
    }

    #[test]
    fn trivial_mirror_map() {
        let g = PowerSeries::zero(6);
        let map = MirrorMap::from_g(&g).unwrap();
        assert_eq!(map.q_of_phi, PowerSeries::identity(7));
        assert_eq!(map.jacobian, PowerSeries::one(6));
    }

    #[test]
    fn yukawa_phi_with_zero_subleading() {
        // D^4 alone: the coupling ODE has right-hand side 0, so K = 1.
        let op = DiffOperator::new(
            vec![
                IntPoly::zero(),
                IntPoly::zero(),
                IntPoly::zero(),
                IntPoly::zero(),
                IntPoly::one(),
            ],
            "x",
        )
        .unwrap();
        let k = yukawa_phi(&op, 6).unwrap();
        assert_eq!(k, PowerSeries::one(6));
    }

    #[test]
    fn yukawa_q_trivial() {
        let map = MirrorMap::from_g(&PowerSeries::zero(6)).unwrap();
        let k = PowerSeries::one(6);
        let f0 = PowerSeries::one(6);
        let kappa = yukawa_q(&k, &map, &f0, &Rat::one()).unwrap();
        assert_eq!(kappa, PowerSeries::one(6));
    }

    #[test]
    fn extract_zero_point_counts() {
        // Twice the unit-normalised coupling from the zero point.
        let kappa = PowerSeries::from_i64s(&[6, 28, 1428, 49168, 1812244]);
        let inst = extract_instantons(&kappa, Rat::from_i64(7), SpecialPoint::Zero);
        assert_eq!(inst.n0, Rat::from_i64(6));
        assert_eq!(
            inst.nd,
            vec![
                Rat::from_i64(28),
                Rat::from_i64(175),
                Rat::from_i64(1820),
                Rat::from_i64(28294)
            ]
        );
        assert!(inst.integral_and_positive());
        assert_eq!(inst.resolved_n0(), Rat::from_i64(42));
    }

    #[test]
    fn extract_constant_coupling() {
        let kappa = PowerSeries::from_i64s(&[5, 0, 0, 0]);
        let inst = extract_instantons(&kappa, Rat::one(), SpecialPoint::Zero);
        assert_eq!(inst.n0, Rat::from_i64(5));
        assert!(inst.nd.iter().all(Rat::is_zero));
    }

    #[test]
    fn lambert_rebuild_matches_frozen_values() {
        let inst = InstantonSeries {
            n0: Rat::from_i64(6),
            nd: vec![
                Rat::from_i64(28),
                Rat::from_i64(175),
                Rat::from_i64(1820),
                Rat::from_i64(28294),
            ],
            m: Rat::one(),
            point: SpecialPoint::Zero,
        };
        let kappa = lambert_roundtrip(&inst, 5);
        assert_eq!(
            kappa,
            PowerSeries::from_i64s(&[6, 28, 1428, 49168, 1812244])
        );
    }

    #[test]
    fn extract_and_rebuild_are_inverse() {
        let kappa = PowerSeries::from_i64s(&[2, 84, 13916, 2252208, 378154588]);
        let inst = extract_instantons(&kappa, Rat::from_i64(7), SpecialPoint::Infinity);
        assert_eq!(
            inst.resolved_nd(),
            vec![
                Rat::from_i64(588),
                Rat::from_i64(12103),
                Rat::from_i64(583884),
                Rat::from_i64(41359136)
            ]
        );
        assert_eq!(lambert_roundtrip(&inst, 5), kappa);
    }
}
