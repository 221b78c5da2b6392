//! Signed-Laurent-monomial models of residue integrands.
//!
//! A model describes an integrand of the shape
//! `prod_i (1 - sum_j v_{i,j})^{-1}` where each `v_{i,j}` is a signed Laurent
//! monomial in the model variables times a power of the deformation
//! parameter y. Two built-in presets (`pfaffian`, `grassmannian`) describe
//! the residue integrands of the two quotient families this crate computes;
//! custom models load from JSON.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One signed Laurent monomial `sign * y^ydeg * prod x_i^{e_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Monomial {
    pub sign: i8,
    pub ydeg: u32,
    /// Exponents of the model variables; absent variables have exponent 0.
    pub exponents: BTreeMap<String, i64>,
}

/// A residue-integrand model: variables plus factor groups of monomials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialModel {
    #[serde(default)]
    pub name: String,
    pub variables: Vec<String>,
    pub factors: Vec<Vec<Monomial>>,
}

/// Flattened exponent data: one row per monomial, one column per variable.
#[derive(Clone, Debug)]
pub struct ExponentMatrix {
    /// `rows[j][i]` is the exponent of variable i in monomial j.
    pub rows: Vec<Vec<i64>>,
    /// Sign of each monomial's coefficient.
    pub signs: Vec<i8>,
    /// Power of y carried by each monomial.
    pub ygrades: Vec<u32>,
    /// Number of variables.
    pub ncols: usize,
    /// Half-open monomial index ranges, one per factor group.
    pub groups: Vec<(usize, usize)>,
}

impl ExponentMatrix {
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    /// Exponent-vector image of a nonnegative monomial-power vector.
    pub fn image(&self, point: &[u32]) -> Vec<BigInt> {
        let mut out = vec![BigInt::from(0); self.ncols];
        for (j, &n) in point.iter().enumerate() {
            if n == 0 {
                continue;
            }
            for (i, &a) in self.rows[j].iter().enumerate() {
                out[i] += BigInt::from(a) * BigInt::from(n);
            }
        }
        out
    }

    /// True if the point lies in the kernel: all variable exponents cancel.
    pub fn annihilates(&self, point: &[u32]) -> bool {
        self.image(point).iter().all(|x| x == &BigInt::from(0))
    }

    /// Product of the monomial signs raised to the point's exponents.
    pub fn sign_of(&self, point: &[u32]) -> i8 {
        let mut neg = 0u32;
        for (j, &n) in point.iter().enumerate() {
            if self.signs[j] < 0 {
                neg += n;
            }
        }
        if neg % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Total y-degree of a point.
    pub fn ydeg_of(&self, point: &[u32]) -> u32 {
        point
            .iter()
            .zip(&self.ygrades)
            .map(|(&n, &g)| n * g)
            .sum()
    }
}

impl MonomialModel {
    /// Look up a built-in preset by name.
    pub fn preset(name: &str) -> Option<MonomialModel> {
        match name {
            "pfaffian" => Some(Self::pfaffian()),
            "grassmannian" => Some(Self::grassmannian()),
            _ => None,
        }
    }

    /// Parse and validate a model from JSON text.
    pub fn from_json(text: &str) -> Result<MonomialModel> {
        let model: MonomialModel = serde_json::from_str(text)
            .map_err(|e| Error::InvalidModel(format!("JSON parse error: {e}")))?;
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        if self.variables.is_empty() {
            return Err(Error::InvalidModel("model has no variables".into()));
        }
        if self.factors.is_empty() {
            return Err(Error::InvalidModel("model has no factors".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for v in &self.variables {
            if !seen.insert(v) {
                return Err(Error::InvalidModel(format!("duplicate variable {v:?}")));
            }
        }
        for (gi, group) in self.factors.iter().enumerate() {
            if group.is_empty() {
                return Err(Error::InvalidModel(format!("factor {gi} is empty")));
            }
            for mono in group {
                if mono.sign != 1 && mono.sign != -1 {
                    return Err(Error::InvalidModel(format!(
                        "factor {gi}: sign must be +1 or -1, found {}",
                        mono.sign
                    )));
                }
                for var in mono.exponents.keys() {
                    if !self.variables.contains(var) {
                        return Err(Error::InvalidModel(format!(
                            "factor {gi}: unknown variable {var:?}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn exponent_matrix(&self) -> ExponentMatrix {
        let index: BTreeMap<&str, usize> = self
            .variables
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        let mut rows = Vec::new();
        let mut signs = Vec::new();
        let mut ygrades = Vec::new();
        let mut groups = Vec::new();
        for group in &self.factors {
            let start = rows.len();
            for mono in group {
                let mut row = vec![0i64; self.variables.len()];
                for (var, &e) in &mono.exponents {
                    row[index[var.as_str()]] = e;
                }
                rows.push(row);
                signs.push(mono.sign);
                ygrades.push(mono.ydeg);
            }
            groups.push((start, rows.len()));
        }
        ExponentMatrix {
            rows,
            signs,
            ygrades,
            ncols: self.variables.len(),
            groups,
        }
    }

    /// The 3x4 monomial table of the pfaffian quotient family in the six
    /// torus coordinates x1..x6.
    pub fn pfaffian() -> MonomialModel {
        let vars = ["x1", "x2", "x3", "x4", "x5", "x6"];
        let mono = |sign: i8, ydeg: u32, exps: &[(usize, i64)]| Monomial {
            sign,
            ydeg,
            exponents: exps
                .iter()
                .map(|&(i, e)| (vars[i - 1].to_string(), e))
                .collect(),
        };
        MonomialModel {
            name: "pfaffian".into(),
            variables: vars.iter().map(|s| s.to_string()).collect(),
            factors: vec![
                vec![
                    mono(1, 1, &[(2, 1), (5, 1), (3, -1), (4, -1)]),
                    mono(1, 2, &[(4, 1), (6, 1), (3, -1)]),
                    mono(1, 2, &[(1, 1), (3, 1), (4, -1)]),
                    mono(-1, 3, &[(1, 1), (6, 1), (3, -1), (4, -1)]),
                ],
                vec![
                    mono(1, 1, &[(1, 1), (4, 1), (2, -1), (3, -1)]),
                    mono(1, 2, &[(2, 1), (3, -1), (6, -1)]),
                    mono(1, 2, &[(3, 1), (5, 1), (2, -1), (6, -1)]),
                    mono(-1, 3, &[(5, 1), (2, -1), (3, -1)]),
                ],
                vec![
                    mono(1, 1, &[(3, 1), (6, 1), (4, -1), (5, -1)]),
                    mono(1, 2, &[(5, 1), (1, -1), (4, -1)]),
                    mono(1, 2, &[(2, 1), (4, 1), (1, -1), (5, -1)]),
                    mono(-1, 3, &[(2, 1), (4, -1), (5, -1)]),
                ],
            ],
        }
    }

    /// The seven-factor monomial table of the Grassmannian quotient family in
    /// the ten affine chart coordinates u_{1,i}, u_{2,i}, i in {1,3,4,5,6}.
    ///
    /// Signs follow the defining equations of the chart
    /// (u_{1,i} u_{2,i+1} - u_{1,i+1} u_{2,i} = y (u_{1,i-2} u_{2,i+3} -
    /// u_{1,i+3} u_{2,i-2}) with u_{1,0} = u_{2,2} = 1, u_{1,2} = u_{2,0} = 0):
    /// each factor is the defining polynomial divided by its distinguished
    /// leading monomial, written as 1 - sum of the remaining terms.
    pub fn grassmannian() -> MonomialModel {
        let mono = |sign: i8, ydeg: u32, exps: &[(&str, i64)]| Monomial {
            sign,
            ydeg,
            exponents: exps.iter().map(|&(v, e)| (v.to_string(), e)).collect(),
        };
        MonomialModel {
            name: "grassmannian".into(),
            variables: [
                "u11", "u13", "u14", "u15", "u16", "u21", "u23", "u24", "u25", "u26",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect(),
            factors: vec![
                // leading monomial u21
                vec![
                    mono(1, 1, &[("u15", 1), ("u23", 1), ("u21", -1)]),
                    mono(-1, 1, &[("u13", 1), ("u25", 1), ("u21", -1)]),
                ],
                // leading monomial u11
                vec![
                    mono(1, 1, &[("u16", 1), ("u24", 1), ("u11", -1)]),
                    mono(-1, 1, &[("u14", 1), ("u26", 1), ("u11", -1)]),
                ],
                // leading monomial u13
                vec![mono(-1, 1, &[("u25", 1), ("u13", -1)])],
                // leading monomial u14*u23
                vec![
                    mono(1, 0, &[("u13", 1), ("u24", 1), ("u14", -1), ("u23", -1)]),
                    mono(-1, 1, &[("u11", 1), ("u26", 1), ("u14", -1), ("u23", -1)]),
                    mono(1, 1, &[("u16", 1), ("u21", 1), ("u14", -1), ("u23", -1)]),
                ],
                // leading monomial u15*u24
                vec![
                    mono(1, 0, &[("u14", 1), ("u25", 1), ("u15", -1), ("u24", -1)]),
                    mono(1, 1, &[("u15", -1), ("u24", -1)]),
                ],
                // leading monomial u16*u25
                vec![
                    mono(1, 0, &[("u15", 1), ("u26", 1), ("u16", -1), ("u25", -1)]),
                    mono(-1, 1, &[("u13", 1), ("u21", 1), ("u16", -1), ("u25", -1)]),
                    mono(1, 1, &[("u11", 1), ("u23", 1), ("u16", -1), ("u25", -1)]),
                ],
                // leading monomial u26
                vec![mono(-1, 1, &[("u14", 1), ("u26", -1)])],
            ],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pfaffian_shape() {
        let m = MonomialModel::pfaffian();
        m.validate().unwrap();
        assert_eq!(m.variables.len(), 6);
        assert_eq!(m.factors.len(), 3);
        assert!(m.factors.iter().all(|g| g.len() == 4));
        let a = m.exponent_matrix();
        assert_eq!(a.nrows(), 12);
        assert_eq!(a.ncols, 6);
        // y-grades follow the 1,2,2,3 column pattern in each factor.
        assert_eq!(
            a.ygrades,
            vec![1, 2, 2, 3, 1, 2, 2, 3, 1, 2, 2, 3]
        );
        // One negative monomial per factor, the y^3 one.
        assert_eq!(
            a.signs,
            vec![1, 1, 1, -1, 1, 1, 1, -1, 1, 1, 1, -1]
        );
    }

    #[test]
    fn grassmannian_shape() {
        let m = MonomialModel::grassmannian();
        m.validate().unwrap();
        assert_eq!(m.variables.len(), 10);
        let sizes: Vec<usize> = m.factors.iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![2, 2, 1, 3, 2, 3, 1]);
        let a = m.exponent_matrix();
        assert_eq!(a.nrows(), 14);
        // Exactly three y-free monomials, the leading ratios of factors 4-6.
        let yfree: Vec<usize> = (0..14).filter(|&j| a.ygrades[j] == 0).collect();
        assert_eq!(yfree, vec![5, 8, 10]);
    }

    #[test]
    fn json_roundtrip() {
        let m = MonomialModel::pfaffian();
        let text = serde_json::to_string(&m).unwrap();
        let back = MonomialModel::from_json(&text).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn rejects_empty_model() {
        let err = MonomialModel::from_json(r#"{"variables": [], "factors": []}"#);
        assert!(matches!(err, Err(Error::InvalidModel(_))));
    }

    #[test]
    fn rejects_unknown_variable() {
        let text = r#"{
            "variables": ["x"],
            "factors": [[{"sign": 1, "ydeg": 1, "exponents": {"z": 1}}]]
        }"#;
        assert!(MonomialModel::from_json(text).is_err());
    }
}
