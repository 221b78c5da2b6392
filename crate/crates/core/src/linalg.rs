//! Exact nullspace computations: reduced row echelon over the rationals and
//! integer kernel lattices via unimodular column reduction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::rational::Rat;

/// Basis of { x : M x = 0 } over the rationals.
///
/// Deterministic: first-nonzero pivoting, free variables set to 1 in
/// ascending column order.
pub fn rational_nullspace(rows: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let nrows = m.len();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][c].recip().expect("pivot is nonzero");
        for j in c..ncols {
            m[r][j] = &m[r][j] * &inv;
        }
        for i in 0..nrows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..ncols {
                    let t = &f * &m[r][j];
                    m[i][j] = &m[i][j] - &t;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == nrows {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); ncols];
        v[free] = Rat::one();
        for (pi, &pc) in pivot_cols.iter().enumerate() {
            if pc < free {
                v[pc] = -&m[pi][free];
            }
        }
        basis.push(v);
    }
    basis
}

/// Rank of a rational matrix.
pub fn rational_rank(rows: &[Vec<Rat>], ncols: usize) -> usize {
    ncols - rational_nullspace(rows, ncols).len()
}

/// Lattice basis of { x in Z^n : M x = 0 } for an integer matrix M given as
/// rows of length n.
///
/// Unimodular column operations bring M to column echelon form while the same
/// operations are applied to an identity matrix; the columns that end up zero
/// in M yield a genuine basis of the kernel lattice (not just a spanning set
/// of the kernel space).
pub fn integer_nullspace(rows: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    let nrows = rows.len();
    // Column-major working copies.
    let mut m: Vec<Vec<BigInt>> = (0..ncols)
        .map(|c| (0..nrows).map(|r| rows[r][c].clone()).collect())
        .collect();
    let mut t: Vec<Vec<BigInt>> = (0..ncols)
        .map(|c| {
            (0..ncols)
                .map(|r| if r == c { BigInt::from(1) } else { BigInt::zero() })
                .collect()
        })
        .collect();

    let mut next = 0; // first column not yet fixed as a pivot
    for row in 0..nrows {
        loop {
            // Column with smallest nonzero |entry| in this row.
            let mut best: Option<usize> = None;
            for c in next..ncols {
                if !m[c][row].is_zero()
                    && best.is_none_or(|b| m[c][row].abs() < m[b][row].abs())
                {
                    best = Some(c);
                }
            }
            let Some(b) = best else {
                break;
            };
            m.swap(next, b);
            t.swap(next, b);
            let mut done = true;
            for c in next + 1..ncols {
                if m[c][row].is_zero() {
                    continue;
                }
                let q = div_round(&m[c][row], &m[next][row]);
                if !q.is_zero() {
                    for r in 0..nrows {
                        let s = &q * &m[next][r];
                        m[c][r] -= s;
                    }
                    for r in 0..ncols {
                        let s = &q * &t[next][r];
                        t[c][r] -= s;
                    }
                }
                if !m[c][row].is_zero() {
                    done = false;
                }
            }
            if done {
                next += 1;
                break;
            }
        }
        if next == ncols {
            break;
        }
    }

    let mut basis = Vec::new();
    for c in next..ncols {
        debug_assert!(m[c].iter().all(Zero::is_zero));
        let mut v = t[c].clone();
        // Fix an overall sign: first nonzero entry positive.
        if v.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_negative) {
            for x in &mut v {
                *x = -&*x;
            }
        }
        basis.push(v);
    }
    basis.sort();
    basis
}

/// Rounded integer division, minimising |remainder|.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    let double_r = &r * 2;
    if double_r.abs() > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat_rows(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| Rat::from_i64(x)).collect())
            .collect()
    }

    fn int_rows(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn rational_nullspace_simple() {
        // x + y + z = 0 has a 2-dimensional kernel.
        let basis = rational_nullspace(&rat_rows(&[&[1, 1, 1]]), 3);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            let s = v.iter().fold(Rat::zero(), |a, b| a + b);
            assert!(s.is_zero());
        }
    }

    #[test]
    fn rational_nullspace_full_rank() {
        let basis = rational_nullspace(&rat_rows(&[&[1, 0], &[1, 1]]), 2);
        assert!(basis.is_empty());
    }

    #[test]
    fn integer_nullspace_saturated() {
        // Kernel of [2 4] is generated by (2, -1) (not (4, -2)).
        let basis = integer_nullspace(&int_rows(&[&[2, 4]]), 2);
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0], vec![BigInt::from(2), BigInt::from(-1)]);
    }

    #[test]
    fn integer_nullspace_identity() {
        let basis = integer_nullspace(&int_rows(&[&[1, 0], &[0, 1]]), 2);
        assert!(basis.is_empty());
    }

    #[test]
    fn integer_nullspace_zero_matrix() {
        let basis = integer_nullspace(&int_rows(&[&[0, 0, 0], &[0, 0, 0]]), 3);
        assert_eq!(basis.len(), 3);
        // Unimodular image of the identity: still a permutation basis.
        let mut sums = vec![0i64; 3];
        for v in &basis {
            for (i, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    sums[i] += 1;
                }
            }
        }
        assert_eq!(sums, vec![1, 1, 1]);
    }

    #[test]
    fn integer_nullspace_members_annihilate() {
        let rows = int_rows(&[&[1, -1, 2, 0], &[3, 1, 0, -2]]);
        let basis = integer_nullspace(&rows, 4);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            for r in &rows {
                let dot: BigInt = r.iter().zip(v).map(|(a, b)| a * b).sum();
                assert!(dot.is_zero());
            }
        }
    }
}
