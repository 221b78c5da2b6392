//! Ordinary differential operators in the logarithmic derivative.
//!
//! An operator is `sum_i A_i(x) D^i` with integer polynomial coefficients and
//! D = x d/dx. This module fits operators to series by exact linear algebra,
//! applies them, performs the x -> 1/x coordinate change with its twist,
//! reads off indicial roots, and produces Frobenius solutions at a point of
//! maximally unipotent monodromy.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::rational_nullspace;
use crate::poly::IntPoly;
use crate::rational::Rat;
use crate::series::PowerSeries;

/// `sum_i coeffs[i] * D^i`; the leading coefficient is nonzero, the
/// coefficients are jointly content-free, and the lowest-order nonzero
/// coefficient of the leading polynomial is positive.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "OperatorRepr", try_from = "OperatorRepr")]
pub struct DiffOperator {
    coeffs: Vec<IntPoly>,
    variable: String,
}

/// Wire form: {order, variable, coeffs} with coefficients as decimal strings.
#[derive(Serialize, Deserialize)]
struct OperatorRepr {
    order: usize,
    variable: String,
    coeffs: Vec<Vec<String>>,
}

impl From<DiffOperator> for OperatorRepr {
    fn from(op: DiffOperator) -> Self {
        OperatorRepr {
            order: op.order(),
            variable: op.variable.clone(),
            coeffs: op
                .coeffs
                .iter()
                .map(|p| p.coeffs().iter().map(BigInt::to_string).collect())
                .collect(),
        }
    }
}

impl TryFrom<OperatorRepr> for DiffOperator {
    type Error = Error;

    fn try_from(repr: OperatorRepr) -> Result<Self> {
        let mut coeffs = Vec::with_capacity(repr.coeffs.len());
        for poly in repr.coeffs {
            let mut ints = Vec::with_capacity(poly.len());
            for c in poly {
                ints.push(
                    c.parse::<BigInt>()
                        .map_err(|_| Error::Schema(format!("bad coefficient {c:?}")))?,
                );
            }
            coeffs.push(IntPoly::new(ints));
        }
        if coeffs.len() != repr.order + 1 {
            return Err(Error::Schema(format!(
                "operator order {} does not match {} coefficient polynomials",
                repr.order,
                coeffs.len()
            )));
        }
        DiffOperator::new(coeffs, repr.variable)
    }
}

impl DiffOperator {
    /// Build and normalise an operator. Trailing zero coefficient polynomials
    /// are trimmed; an all-zero operator is rejected.
    pub fn new(mut coeffs: Vec<IntPoly>, variable: impl Into<String>) -> Result<Self> {
        while coeffs.last().is_some_and(IntPoly::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::NoOperator);
        }
        let mut op = DiffOperator {
            coeffs,
            variable: variable.into(),
        };
        op.normalise();
        Ok(op)
    }

    fn normalise(&mut self) {
        let mut content = BigInt::zero();
        for p in &self.coeffs {
            content = content.gcd(&p.content());
        }
        if content > BigInt::one() {
            let c = IntPoly::new(vec![content]);
            for p in &mut self.coeffs {
                *p = p.div_exact(&c).unwrap();
            }
        }
        if self.coeffs.last().unwrap().trailing().is_negative() {
            for p in &mut self.coeffs {
                *p = p.neg();
            }
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn variable(&self) -> &str {
        &self.variable
    }

    pub fn coeff(&self, i: usize) -> &IntPoly {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[IntPoly] {
        &self.coeffs
    }

    /// Largest degree among the coefficient polynomials.
    pub fn max_coeff_degree(&self) -> usize {
        self.coeffs
            .iter()
            .filter_map(IntPoly::degree)
            .max()
            .unwrap_or(0)
    }

    /// Maximally unipotent monodromy at 0: all lower coefficients vanish at 0
    /// and the leading one does not.
    pub fn is_mum(&self) -> bool {
        let r = self.order();
        !self.coeffs[r].constant_term().is_zero()
            && self.coeffs[..r]
                .iter()
                .all(|p| p.constant_term().is_zero())
    }

    /// Apply to a series: `sum_i A_i * D^i f`, truncated to
    /// `order(f) - max coefficient degree`.
    pub fn apply(&self, f: &PowerSeries) -> PowerSeries {
        let n = f.order();
        let mut acc = PowerSeries::zero(n);
        let mut df = f.clone();
        for (i, poly) in self.coeffs.iter().enumerate() {
            if i > 0 {
                df = df.log_derivative();
            }
            if !poly.is_zero() {
                acc = &acc + &(&poly.to_series(n) * &df);
            }
        }
        acc.truncated(n.saturating_sub(self.max_coeff_degree()))
    }

    /// The indicial polynomial at 0, `sum_i A_i(0) t^i`.
    pub fn indicial_polynomial(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(IntPoly::constant_term).collect())
    }

    /// Substitute x -> 1/x and D -> -D - twist, clear powers of the new
    /// variable, and renormalise. With twist 1 this moves an operator between
    /// the two boundary points of the family.
    pub fn invert_coordinate(&self, twist: i64, new_variable: impl Into<String>) -> DiffOperator {
        let r = self.order();
        let d = self.max_coeff_degree();
        // A_i(1/x) * x^d as a polynomial: coefficient s goes to slot d - s.
        let rev_pad = |p: &IntPoly| {
            let mut coeffs = vec![BigInt::zero(); d + 1];
            for (s, c) in p.coeffs().iter().enumerate() {
                coeffs[d - s] = c.clone();
            }
            IntPoly::new(coeffs)
        };
        let t = BigInt::from(twist);
        let mut new_coeffs = vec![IntPoly::zero(); r + 1];
        for (i, poly) in self.coeffs.iter().enumerate() {
            let rev = rev_pad(poly);
            // (-D - t)^i = (-1)^i sum_j C(i,j) t^{i-j} D^j
            for j in 0..=i {
                let mut c = binom_big(i, j) * t.pow((i - j) as u32);
                if i % 2 == 1 {
                    c = -c;
                }
                new_coeffs[j] = new_coeffs[j].add(&rev.scalar_mul(&c));
            }
        }
        // Remove any common power of the variable.
        let shift = new_coeffs
            .iter()
            .filter(|p| !p.is_zero())
            .map(|p| p.coeffs().iter().take_while(|c| c.is_zero()).count())
            .min()
            .unwrap_or(0);
        if shift > 0 {
            for p in &mut new_coeffs {
                *p = IntPoly::new(p.coeffs()[shift.min(p.coeffs().len())..].to_vec());
            }
        }
        DiffOperator::new(new_coeffs, new_variable).expect("twisted operator is nonzero")
    }

    /// Rational roots (with multiplicity) of the indicial polynomial at 0.
    /// A quadruple root 0 on an order-4 operator is the maximally unipotent
    /// case. Errors if a non-rational factor remains.
    pub fn indicial_roots(&self) -> Result<Vec<Rat>> {
        let p = self.indicial_polynomial();
        let mut roots = Vec::new();
        // Roots at 0 first.
        let mut coeffs: Vec<Rat> = p
            .coeffs()
            .iter()
            .map(|c| Rat::from_integer(c.clone()))
            .collect();
        while coeffs.first().is_some_and(Rat::is_zero) && coeffs.len() > 1 {
            roots.push(Rat::zero());
            coeffs.remove(0);
        }
        // Deflate rational roots found by the rational root theorem.
        loop {
            if coeffs.len() <= 1 {
                return Ok(roots);
            }
            let prim = primitive_from_rats(&coeffs);
            let Some(root) = find_rational_root(&prim) else {
                return Err(Error::NonRationalIndicialFactor(
                    prim.coeffs().iter().map(BigInt::to_string).collect(),
                ));
            };
            // Synthetic division by (t - root).
            let mut rem = Rat::zero();
            for c in coeffs.iter_mut().rev() {
                let v = c.clone() + &rem * &root;
                rem = v.clone();
                *c = v;
            }
            let low = coeffs.remove(0);
            debug_assert!(low.is_zero(), "deflation left a remainder");
            roots.push(root);
        }
    }

    /// The unique series solution with f(0) = 1, by the coefficient
    /// recurrence. Requires maximally unipotent monodromy at 0.
    pub fn holomorphic_solution(&self, order: usize) -> Result<PowerSeries> {
        if !self.is_mum() {
            return Err(Error::NotMum);
        }
        let d = self.max_coeff_degree();
        let mut coeffs = vec![Rat::zero(); order];
        if order == 0 {
            return Ok(PowerSeries::new(coeffs));
        }
        coeffs[0] = Rat::one();
        for n in 1..order {
            let lead = self.shifted_indicial(0, n as i64);
            if lead.is_zero() {
                return Err(Error::ResonantRecurrence(n));
            }
            let mut acc = Rat::zero();
            for s in 1..=d.min(n) {
                let p = self.shifted_indicial(s, (n - s) as i64);
                if !p.is_zero() {
                    acc += p * &coeffs[n - s];
                }
            }
            coeffs[n] = -(acc / lead);
        }
        Ok(PowerSeries::new(coeffs))
    }

    /// `P_s(k) = sum_i a_{i,s} k^i`, the weight with which coefficient k of a
    /// series feeds coefficient k+s of the operator image.
    fn shifted_indicial(&self, s: usize, k: i64) -> Rat {
        let kk = Rat::from_i64(k);
        let mut acc = Rat::zero();
        let mut pow = Rat::one();
        for poly in &self.coeffs {
            acc += Rat::from_integer(poly.coeff(s)) * &pow;
            pow = pow * &kk;
        }
        acc
    }

    /// Second Frobenius solution at a MUM point: the series g with g(0) = 0
    /// such that f0 * (g + log x) is annihilated, using D(log x) = 1.
    pub fn frobenius_log_solution(&self, f0: &PowerSeries) -> Result<FrobeniusPair> {
        if !self.is_mum() {
            return Err(Error::NotMum);
        }
        if !self.apply(f0).is_zero() {
            return Err(Error::InconsistentFrobenius);
        }
        let n = f0.order();
        let d = self.max_coeff_degree();
        // L(f0 (g + log x)) = L(f0 g) + L'(f0) with L' = sum_i i A_i D^{i-1}.
        let mut rhs = PowerSeries::zero(n);
        let mut df = f0.clone();
        for (i, poly) in self.coeffs.iter().enumerate().skip(1) {
            if i > 1 {
                df = df.log_derivative();
            }
            if !poly.is_zero() {
                let scaled = poly.scalar_mul(&BigInt::from(i));
                rhs = &rhs + &(&scaled.to_series(n) * &df);
            }
        }
        rhs = -&rhs;
        if !rhs.coeff(0).is_zero() {
            return Err(Error::InconsistentFrobenius);
        }
        // Solve L(u) = rhs order by order; u = f0 * g has u(0) = 0.
        let mut u = vec![Rat::zero(); n];
        for k in 1..n {
            let lead = self.shifted_indicial(0, k as i64);
            if lead.is_zero() {
                return Err(Error::ResonantRecurrence(k));
            }
            let mut acc = rhs.coeff(k).clone();
            for s in 1..=d.min(k) {
                let p = self.shifted_indicial(s, (k - s) as i64);
                if !p.is_zero() {
                    acc = acc - p * &u[k - s];
                }
            }
            u[k] = acc / lead;
        }
        let g = &PowerSeries::new(u) * &f0.invert()?;
        Ok(FrobeniusPair {
            f0: f0.clone(),
            g,
        })
    }
}

/// Holomorphic solution together with the single-log companion: the second
/// solution is `f0 * (g + log x)`.
#[derive(Clone, Debug)]
pub struct FrobeniusPair {
    pub f0: PowerSeries,
    pub g: PowerSeries,
}

/// Fit the unique (up to scale) operator of the given order and coefficient
/// degree annihilating `f`, from the exact nullspace of the coefficient
/// equations. Every known coefficient of `f` contributes an equation, so a
/// series longer than the `(order+1)*(max_deg+1)` unknowns cross-checks the
/// fit on its surplus terms.
pub fn fit_operator(
    f: &PowerSeries,
    order: usize,
    max_deg: usize,
    variable: impl Into<String>,
) -> Result<DiffOperator> {
    let unknowns = (order + 1) * (max_deg + 1);
    if f.order() < unknowns {
        return Err(Error::InsufficientOrder {
            have: f.order(),
            need: unknowns,
        });
    }
    let mut rows = Vec::with_capacity(f.order());
    for n in 0..f.order() {
        let mut row = vec![Rat::zero(); unknowns];
        for s in 0..=max_deg.min(n) {
            let k = n - s;
            let fk = f.coeff(k);
            if fk.is_zero() {
                continue;
            }
            let mut pow = Rat::one();
            let kk = Rat::from_i64(k as i64);
            for i in 0..=order {
                row[i * (max_deg + 1) + s] = fk * &pow;
                pow = pow * &kk;
            }
        }
        rows.push(row);
    }
    let basis = rational_nullspace(&rows, unknowns);
    match basis.len() {
        0 => Err(Error::NoOperator),
        1 => {
            let v = &basis[0];
            // Clear denominators across the whole solution vector.
            let mut lcm = BigInt::one();
            for x in v {
                lcm = lcm.lcm(x.denom());
            }
            let scale = Rat::from_integer(lcm);
            let mut coeffs = Vec::with_capacity(order + 1);
            for i in 0..=order {
                let ints: Vec<BigInt> = (0..=max_deg)
                    .map(|s| (&v[i * (max_deg + 1) + s] * &scale).to_integer().unwrap())
                    .collect();
                coeffs.push(IntPoly::new(ints));
            }
            if coeffs[order].is_zero() {
                return Err(Error::NoOperator);
            }
            DiffOperator::new(coeffs, variable)
        }
        _ => Err(Error::Underdetermined),
    }
}

fn binom_big(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

fn primitive_from_rats(coeffs: &[Rat]) -> IntPoly {
    let mut lcm = BigInt::one();
    for c in coeffs {
        lcm = lcm.lcm(c.denom());
    }
    let scale = Rat::from_integer(lcm);
    let p = IntPoly::new(
        coeffs
            .iter()
            .map(|c| (c * &scale).to_integer().unwrap())
            .collect(),
    );
    let content = p.content();
    if content > BigInt::one() {
        p.div_exact(&IntPoly::new(vec![content])).unwrap()
    } else {
        p
    }
}

/// One rational root of a primitive integer polynomial, if any, by the
/// rational root theorem. Divisor enumeration needs the end coefficients to
/// fit in i64; larger ones are treated as having no tractable rational root.
fn find_rational_root(p: &IntPoly) -> Option<Rat> {
    let a0 = p.constant_term();
    if a0.is_zero() {
        return Some(Rat::zero());
    }
    let lead = p.leading();
    let a0 = i64::try_from(a0).ok()?.abs();
    let lead = i64::try_from(lead).ok()?.abs();
    let divisors = |n: i64| {
        let mut out = Vec::new();
        let mut d = 1;
        while d * d <= n {
            if n % d == 0 {
                out.push(d);
                out.push(n / d);
            }
            d += 1;
        }
        out.sort_unstable();
        out.dedup();
        out
    };
    for num in divisors(a0) {
        for den in divisors(lead) {
            for sign in [1i64, -1] {
                let cand = Rat::from_frac(sign * num, den);
                if p.eval_rat(&cand).is_zero() {
                    return Some(cand);
                }
            }
        }
    }
    None
}

impl fmt::Display for DiffOperator {
    /// One D-power per line, highest first, matching how the operator is
    /// usually written out.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (line, i) in (0..=self.order()).rev().enumerate() {
            let lead = if line == 0 { "  " } else { "+ " };
            let poly = &self.coeffs[i];
            if poly.is_zero() {
                continue;
            }
            write!(f, "{lead}({})", poly.display(&self.variable))?;
            match i {
                0 => {}
                1 => write!(f, " D")?,
                _ => write!(f, " D^{i}")?,
            }
            if i > 0 {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// (1 - x) D - x, annihilating the geometric series.
    fn geometric_op() -> DiffOperator {
        DiffOperator::new(
            vec![IntPoly::from_i64s(&[0, -1]), IntPoly::from_i64s(&[1, -1])],
            "x",
        )
        .unwrap()
    }

    #[test]
    fn apply_geometric() {
        let op = geometric_op();
        let f = PowerSeries::from_i64s(&[1; 12]);
        assert!(op.apply(&f).is_zero());
    }

    #[test]
    fn apply_d_to_constant() {
        let d = DiffOperator::new(vec![IntPoly::zero(), IntPoly::one()], "x").unwrap();
        let f = PowerSeries::one(8);
        assert!(d.apply(&f).is_zero());
    }

    #[test]
    fn fit_geometric() {
        let f = PowerSeries::from_i64s(&[1; 12]);
        let op = fit_operator(&f, 1, 1, "x").unwrap();
        assert_eq!(op, geometric_op());
    }

    #[test]
    fn fit_cubic_polynomial() {
        // A squarefree cubic p with p(0) != 0 has the unique (up to scale)
        // order-1 annihilator p D - x p', of coefficient degree 3.
        let f = IntPoly::from_i64s(&[3, -1, 4, 2]).to_series(25);
        let op = fit_operator(&f, 1, 3, "x").unwrap();
        assert!(op.apply(&f).is_zero());
        assert_eq!(op.coeff(1), &IntPoly::from_i64s(&[3, -1, 4, 2]));
        assert_eq!(op.coeff(0), &IntPoly::from_i64s(&[0, 1, -8, -6]));
    }

    #[test]
    fn fit_cubic_with_degree_slack_is_ambiguous() {
        // One more coefficient degree admits x * (minimal solution) too, and
        // ambiguity is an error rather than a choice.
        let f = IntPoly::from_i64s(&[3, -1, 4, 2]).to_series(25);
        assert!(matches!(
            fit_operator(&f, 1, 4, "x"),
            Err(Error::Underdetermined)
        ));
    }

    #[test]
    fn fit_reports_no_operator() {
        // The Fibonacci generating series has no order-1 annihilator with
        // linear coefficients: its term ratio is not a rational function of
        // the index.
        let f = PowerSeries::from_i64s(&[1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144]);
        assert!(matches!(
            fit_operator(&f, 1, 1, "x"),
            Err(Error::NoOperator)
        ));
    }

    #[test]
    fn fit_reports_underdetermined() {
        // The zero right-hand side with too few equations: constant series 1
        // admits many annihilators of shape p(x) * D.
        let f = PowerSeries::one(12);
        assert!(matches!(
            fit_operator(&f, 1, 3, "x"),
            Err(Error::Underdetermined)
        ));
    }

    #[test]
    fn indicial_roots_examples() {
        assert_eq!(geometric_op().indicial_roots().unwrap(), vec![Rat::zero()]);
        // (2D - 1)(D - 3) has roots 1/2 and 3.
        let op = DiffOperator::new(
            vec![
                IntPoly::from_i64s(&[3]),
                IntPoly::from_i64s(&[-7]),
                IntPoly::from_i64s(&[2]),
            ],
            "x",
        )
        .unwrap();
        let mut roots = op.indicial_roots().unwrap();
        roots.sort();
        assert_eq!(roots, vec![Rat::from_frac(1, 2), Rat::from_i64(3)]);
    }

    #[test]
    fn indicial_non_rational_factor() {
        // D^2 - 2 has indicial polynomial t^2 - 2.
        let op = DiffOperator::new(
            vec![
                IntPoly::from_i64s(&[-2]),
                IntPoly::zero(),
                IntPoly::one(),
            ],
            "x",
        )
        .unwrap();
        assert!(matches!(
            op.indicial_roots(),
            Err(Error::NonRationalIndicialFactor(_))
        ));
    }

    #[test]
    fn holomorphic_solution_geometric() {
        let op = geometric_op();
        let f = op.holomorphic_solution(10).unwrap();
        assert_eq!(f, PowerSeries::from_i64s(&[1; 10]));
    }

    #[test]
    fn holomorphic_requires_mum() {
        // D - 1 is not MUM (A_0(0) = -1 != 0).
        let op = DiffOperator::new(
            vec![IntPoly::from_i64s(&[-1]), IntPoly::one()],
            "x",
        )
        .unwrap();
        assert!(matches!(op.holomorphic_solution(5), Err(Error::NotMum)));
    }

    #[test]
    fn frobenius_for_d_squared() {
        // D^2 with f0 = 1: log x alone is the second solution, so g = 0.
        let op = DiffOperator::new(
            vec![IntPoly::zero(), IntPoly::zero(), IntPoly::one()],
            "x",
        )
        .unwrap();
        let pair = op.frobenius_log_solution(&PowerSeries::one(8)).unwrap();
        assert!(pair.g.is_zero());
    }

    #[test]
    fn twist_of_pure_d_is_normalised_back() {
        let d = DiffOperator::new(vec![IntPoly::zero(), IntPoly::one()], "x").unwrap();
        let twisted = d.invert_coordinate(0, "x");
        assert_eq!(twisted, d);
    }

    #[test]
    fn twist_is_an_involution() {
        let op = geometric_op();
        let back = op
            .invert_coordinate(1, "y")
            .invert_coordinate(1, "x");
        assert_eq!(back, op);
    }

    #[test]
    fn operator_json_roundtrip() {
        let op = geometric_op();
        let text = serde_json::to_string(&op).unwrap();
        let back: DiffOperator = serde_json::from_str(&text).unwrap();
        assert_eq!(back, op);
    }
}
