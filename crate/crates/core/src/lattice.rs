//! Kernel lattices of exponent matrices and their nonnegative generators.
//!
//! A monomial product `prod_j v_j^{b_j}` is independent of the model
//! variables exactly when `b` lies in the kernel of the exponent matrix.
//! This module finds: a lattice basis of all integer kernel vectors, the
//! complete list of nonnegative kernel points at a fixed y-degree, and the
//! minimal generating set (Hilbert basis) of the nonnegative kernel monoid up
//! to a y-degree bound.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{integer_nullspace, rational_nullspace};
use crate::model::ExponentMatrix;
use crate::rational::Rat;

/// An irreducible nonnegative kernel point, with the sign and y-degree of the
/// monomial product it represents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelGenerator {
    pub exponents: Vec<u32>,
    pub sign: i8,
    pub ydegree: u32,
}

/// Lattice basis of all integer vectors b with `sum_j b_j a_{j,i} = 0`.
pub fn integer_kernel_basis(mat: &ExponentMatrix) -> Vec<Vec<BigInt>> {
    let m = mat.nrows();
    // Constraint rows are indexed by variables: row i is (a_{0,i},...,a_{m-1,i}).
    let rows: Vec<Vec<BigInt>> = (0..mat.ncols)
        .map(|i| (0..m).map(|j| BigInt::from(mat.rows[j][i])).collect())
        .collect();
    integer_nullspace(&rows, m)
}

/// gcd of the y-degrees attained on the kernel lattice (0 if the kernel is
/// trivial). Nonnegative kernel points only occur at multiples of this.
pub fn ydeg_stride(mat: &ExponentMatrix) -> u32 {
    let mut g = BigInt::zero();
    for b in integer_kernel_basis(mat) {
        let ydeg: BigInt = b
            .iter()
            .zip(&mat.ygrades)
            .map(|(c, &w)| c * BigInt::from(w))
            .sum();
        g = g.gcd(&ydeg);
    }
    u32::try_from(g).unwrap_or(0)
}

/// Check that the y-free monomials (y-grade 0) have linearly independent
/// exponent vectors. This bounds the nonnegative kernel slice at every
/// y-degree; dependent y-free monomials could make the slice infinite.
fn check_yfree_bounded(mat: &ExponentMatrix, yfree: &[usize]) -> Result<()> {
    if yfree.is_empty() {
        return Ok(());
    }
    let rows: Vec<Vec<Rat>> = (0..mat.ncols)
        .map(|i| yfree.iter().map(|&j| Rat::from_i64(mat.rows[j][i])).collect())
        .collect();
    if !rational_nullspace(&rows, yfree.len()).is_empty() {
        return Err(Error::InvalidModel(
            "y-free monomials are linearly dependent; the kernel slice at a \
             fixed y-degree is unbounded"
                .into(),
        ));
    }
    Ok(())
}

/// Solve `sum_k z_k a_{yfree[k]} = target` for nonnegative integers z.
/// The y-free columns are linearly independent, so the solution is unique if
/// it exists.
fn solve_yfree(mat: &ExponentMatrix, yfree: &[usize], target: &[BigInt]) -> Option<Vec<u32>> {
    let k = yfree.len();
    if k == 0 {
        return target.iter().all(Zero::is_zero).then(Vec::new);
    }
    // Gaussian elimination on the augmented (ncols x k | target) system.
    let mut aug: Vec<Vec<Rat>> = (0..mat.ncols)
        .map(|i| {
            let mut row: Vec<Rat> = yfree
                .iter()
                .map(|&j| Rat::from_i64(mat.rows[j][i]))
                .collect();
            row.push(Rat::from_integer(target[i].clone()));
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(pr) = (r..aug.len()).find(|&i| !aug[i][c].is_zero()) else {
            continue;
        };
        aug.swap(r, pr);
        let inv = aug[r][c].recip().ok()?;
        for j in c..=k {
            aug[r][j] = &aug[r][j] * &inv;
        }
        for i in 0..aug.len() {
            if i != r && !aug[i][c].is_zero() {
                let f = aug[i][c].clone();
                for j in c..=k {
                    let t = &f * &aug[r][j];
                    aug[i][j] = &aug[i][j] - &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if pivots.len() < k {
        return None; // dependent columns; caught earlier, defensive here
    }
    // Inconsistent rows below the pivots mean no solution.
    for row in aug.iter().skip(k) {
        if !row[k].is_zero() {
            return None;
        }
    }
    let mut z = Vec::with_capacity(k);
    for row in aug.iter().take(k) {
        let v = &row[k];
        if !v.is_integer() || v.numer().sign() == num_bigint::Sign::Minus {
            return None;
        }
        z.push(u32::try_from(v.to_integer().unwrap()).ok()?);
    }
    Some(z)
}

/// Enumerate assignments over the given graded monomial indices with total
/// weighted y-degree at most `budget`, carrying the projected exponent image
/// incrementally. Exponent images fit comfortably in i64 at the sizes this
/// crate handles.
fn enumerate_half(
    mat: &ExponentMatrix,
    idxs: &[usize],
    budget: u32,
    proj: &[Vec<i64>],
) -> Vec<(u32, Vec<i64>, Vec<u32>)> {
    // Projected row images of the participating monomials.
    let proj_rows: Vec<Vec<i64>> = idxs
        .iter()
        .map(|&j| {
            proj.iter()
                .map(|c| c.iter().zip(&mat.rows[j]).map(|(ci, ai)| ci * ai).sum())
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut current = vec![0u32; idxs.len()];
    let mut key = vec![0i64; proj.len()];

    #[allow(clippy::too_many_arguments)]
    fn rec(
        grades: &[u32],
        proj_rows: &[Vec<i64>],
        pos: usize,
        left: u32,
        used: u32,
        current: &mut Vec<u32>,
        key: &mut Vec<i64>,
        out: &mut Vec<(u32, Vec<i64>, Vec<u32>)>,
    ) {
        if pos == grades.len() {
            out.push((used, key.clone(), current.clone()));
            return;
        }
        let grade = grades[pos];
        let max = left / grade;
        for n in 0..=max {
            current[pos] = n;
            rec(
                grades,
                proj_rows,
                pos + 1,
                left - n * grade,
                used + n * grade,
                current,
                key,
                out,
            );
            for (k, r) in key.iter_mut().zip(&proj_rows[pos]) {
                *k += r;
            }
        }
        for (k, r) in key.iter_mut().zip(&proj_rows[pos]) {
            *k -= r * (max as i64 + 1);
        }
        current[pos] = 0;
    }

    let grades: Vec<u32> = idxs.iter().map(|&j| mat.ygrades[j]).collect();
    rec(
        &grades, &proj_rows, 0, budget, 0, &mut current, &mut key, &mut out,
    );
    out
}

/// All nonnegative integer kernel points of the exponent matrix with the
/// given total y-degree, in ascending lexicographic order.
///
/// Meet-in-the-middle over the y-graded monomials: the two halves are joined
/// on the exponent image projected to the annihilator of the y-free columns,
/// and the y-free part is then solved exactly.
pub fn enumerate_kernel_points(mat: &ExponentMatrix, ydeg: u32) -> Result<Vec<Vec<u32>>> {
    let m = mat.nrows();
    let graded: Vec<usize> = (0..m).filter(|&j| mat.ygrades[j] > 0).collect();
    let yfree: Vec<usize> = (0..m).filter(|&j| mat.ygrades[j] == 0).collect();
    check_yfree_bounded(mat, &yfree)?;

    // Projection whose kernel is exactly the span of the y-free columns.
    let proj: Vec<Vec<i64>> = if yfree.is_empty() {
        (0..mat.ncols)
            .map(|i| (0..mat.ncols).map(|j| i64::from(i == j)).collect())
            .collect()
    } else {
        let rows: Vec<Vec<BigInt>> = yfree
            .iter()
            .map(|&j| mat.rows[j].iter().map(|&a| BigInt::from(a)).collect())
            .collect();
        integer_nullspace(&rows, mat.ncols)
            .into_iter()
            .map(|v| {
                v.into_iter()
                    .map(|x| i64::try_from(x).expect("projection entries are small"))
                    .collect()
            })
            .collect()
    };

    let (left, right) = graded.split_at(graded.len() / 2);
    let mut buckets: HashMap<(u32, Vec<i64>), Vec<Vec<u32>>> = HashMap::new();
    for (w, key, assign) in enumerate_half(mat, left, ydeg, &proj) {
        buckets.entry((w, key)).or_default().push(assign);
    }

    let mut points = Vec::new();
    for (w, key, assign_r) in enumerate_half(mat, right, ydeg, &proj) {
        let want_w = ydeg - w;
        let neg_key: Vec<i64> = key.iter().map(|x| -x).collect();
        let Some(matches) = buckets.get(&(want_w, neg_key)) else {
            continue;
        };
        for assign_l in matches {
            let mut point = vec![0u32; m];
            for (slot, &j) in left.iter().enumerate() {
                point[j] = assign_l[slot];
            }
            for (slot, &j) in right.iter().enumerate() {
                point[j] = assign_r[slot];
            }
            // Remaining exponent must be cancelled by the y-free monomials.
            let image = mat.image(&point);
            let target: Vec<BigInt> = image.iter().map(|x| -x).collect();
            let Some(z) = solve_yfree(mat, &yfree, &target) else {
                continue;
            };
            for (slot, &j) in yfree.iter().enumerate() {
                point[j] = z[slot];
            }
            debug_assert!(mat.annihilates(&point));
            debug_assert_eq!(mat.ydeg_of(&point), ydeg);
            points.push(point);
        }
    }
    points.sort();
    points.dedup();
    Ok(points)
}

/// Minimal generating set (Hilbert basis) of the nonnegative kernel monoid,
/// restricted to generators of y-degree at most `degree_bound`.
///
/// Completion by levels: a point at y-degree d is irreducible exactly when no
/// generator of smaller y-degree is componentwise below it. Output is in
/// ascending lexicographic order of the exponent vectors.
pub fn nonneg_kernel_generators(
    mat: &ExponentMatrix,
    degree_bound: u32,
) -> Result<Vec<KernelGenerator>> {
    let mut gens: Vec<KernelGenerator> = Vec::new();
    for d in 1..=degree_bound {
        for p in enumerate_kernel_points(mat, d)? {
            let reducible = gens
                .iter()
                .any(|g| g.exponents.iter().zip(&p).all(|(a, b)| a <= b));
            if !reducible {
                gens.push(KernelGenerator {
                    sign: mat.sign_of(&p),
                    ydegree: d,
                    exponents: p,
                });
            }
        }
    }
    gens.sort_by(|a, b| a.exponents.cmp(&b.exponents));
    Ok(gens)
}

/// True if `point` is a nonnegative integer combination of the generators.
pub fn decomposes_over(point: &[u32], gens: &[KernelGenerator]) -> bool {
    if point.iter().all(|&x| x == 0) {
        return true;
    }
    for g in gens {
        if g.exponents.iter().zip(point).all(|(a, b)| a <= b) {
            let rest: Vec<u32> = point
                .iter()
                .zip(&g.exponents)
                .map(|(p, e)| p - e)
                .collect();
            if decomposes_over(&rest, gens) {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ExponentMatrix, MonomialModel};

    fn toy_matrix(rows: Vec<Vec<i64>>, signs: Vec<i8>, ygrades: Vec<u32>) -> ExponentMatrix {
        let ncols = rows.first().map_or(0, Vec::len);
        let n = rows.len();
        ExponentMatrix {
            rows,
            signs,
            ygrades,
            ncols,
            groups: vec![(0, n)],
        }
    }

    #[test]
    fn kernel_basis_of_zero_matrix() {
        let mat = toy_matrix(
            vec![vec![0, 0], vec![0, 0], vec![0, 0]],
            vec![1, 1, 1],
            vec![1, 1, 1],
        );
        let basis = integer_kernel_basis(&mat);
        assert_eq!(basis.len(), 3);
    }

    #[test]
    fn kernel_basis_of_full_rank_matrix() {
        let mat = toy_matrix(
            vec![vec![1, 0], vec![0, 1]],
            vec![1, 1],
            vec![1, 1],
        );
        assert!(integer_kernel_basis(&mat).is_empty());
    }

    #[test]
    fn pfaffian_kernel_rank_six() {
        let mat = MonomialModel::pfaffian().exponent_matrix();
        assert_eq!(integer_kernel_basis(&mat).len(), 6);
        assert_eq!(ydeg_stride(&mat), 7);
    }

    #[test]
    fn grassmannian_kernel_rank_four() {
        let mat = MonomialModel::grassmannian().exponent_matrix();
        assert_eq!(integer_kernel_basis(&mat).len(), 4);
        assert_eq!(ydeg_stride(&mat), 7);
    }

    #[test]
    fn forced_symmetric_generator() {
        // Monomials x and 1/x: the only nonnegative kernel generator is (1,1).
        let mat = toy_matrix(vec![vec![1], vec![-1]], vec![1, 1], vec![1, 1]);
        let gens = nonneg_kernel_generators(&mat, 4).unwrap();
        assert_eq!(gens.len(), 1);
        assert_eq!(gens[0].exponents, vec![1, 1]);
        assert_eq!(gens[0].ydegree, 2);
        assert_eq!(gens[0].sign, 1);
    }

    #[test]
    fn zero_level_is_origin_only() {
        let mat = MonomialModel::pfaffian().exponent_matrix();
        let pts = enumerate_kernel_points(&mat, 0).unwrap();
        assert_eq!(pts, vec![vec![0; 12]]);
    }

    #[test]
    fn level_three_is_empty_for_pfaffian() {
        let mat = MonomialModel::pfaffian().exponent_matrix();
        assert!(enumerate_kernel_points(&mat, 3).unwrap().is_empty());
    }

    #[test]
    fn pfaffian_level_seven_points_are_the_six_generators() {
        let mat = MonomialModel::pfaffian().exponent_matrix();
        let pts = enumerate_kernel_points(&mat, 7).unwrap();
        assert_eq!(pts.len(), 6);
        for p in &pts {
            assert!(mat.annihilates(p));
            assert_eq!(mat.ydeg_of(p), 7);
        }
        let gens = nonneg_kernel_generators(&mat, 7).unwrap();
        let gen_pts: Vec<Vec<u32>> = gens.iter().map(|g| g.exponents.clone()).collect();
        assert_eq!(gen_pts, pts);
    }

    #[test]
    fn generator_signs_and_minimality() {
        let mat = MonomialModel::pfaffian().exponent_matrix();
        let gens = nonneg_kernel_generators(&mat, 14).unwrap();
        assert_eq!(gens.len(), 6, "no extra generators up to y-degree 14");
        let mut signs: Vec<i8> = gens.iter().map(|g| g.sign).collect();
        signs.sort();
        assert_eq!(signs, vec![-1, -1, -1, 1, 1, 1]);
        // Everything two levels up decomposes over the generators.
        for p in enumerate_kernel_points(&mat, 14).unwrap() {
            assert!(decomposes_over(&p, &gens));
        }
    }

    #[test]
    fn grassmannian_generators() {
        let mat = MonomialModel::grassmannian().exponent_matrix();
        let gens = nonneg_kernel_generators(&mat, 7).unwrap();
        assert_eq!(gens.len(), 4);
        assert!(gens.iter().all(|g| g.ydegree == 7));
        let mut signs: Vec<i8> = gens.iter().map(|g| g.sign).collect();
        signs.sort();
        assert_eq!(signs, vec![-1, -1, 1, 1]);
    }
}
