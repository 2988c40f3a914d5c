//! Exact linear algebra over ℚ.
//!
//! Rows are scaled to primitive integer vectors and eliminated by
//! cross-multiplication, so no fractions appear until the final pivot
//! normalization. Pivots are taken in column order with the first eligible
//! row, which makes every result deterministic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::Rational;

/// Reduced row echelon form of a rational matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub rows: Vec<Vec<Rational>>,
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

fn to_primitive_integers(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let mut ints: Vec<BigInt> = row.iter().map(|v| v.numer() * (&lcm / v.denom())).collect();
    make_primitive(&mut ints);
    ints
}

fn make_primitive(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for v in row.iter_mut() {
            *v /= &g;
        }
    }
}

/// Fraction-free Gauss-Jordan elimination. `ncols` is needed for empty input.
pub fn rref(matrix: &[Vec<Rational>], ncols: usize) -> Rref {
    let mut rows: Vec<Vec<BigInt>> = matrix
        .iter()
        .map(|r| {
            assert_eq!(r.len(), ncols, "ragged matrix");
            to_primitive_integers(r)
        })
        .filter(|r| r.iter().any(|v| !v.is_zero()))
        .collect();
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..ncols {
        if next == rows.len() {
            break;
        }
        let Some(found) = (next..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(next, found);
        let (before, rest) = rows.split_at_mut(next);
        let (pivot_row, after) = rest.split_first_mut().expect("pivot row exists");
        if pivot_row[col].is_negative() {
            pivot_row.iter_mut().for_each(|v| *v = -&*v);
        }
        let p = pivot_row[col].clone();
        for row in before.iter_mut().chain(after.iter_mut()) {
            if row[col].is_zero() {
                continue;
            }
            let v = row[col].clone();
            for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                *x = &*x * &p - &v * y;
            }
            make_primitive(row);
        }
        pivots.push(col);
        next += 1;
    }
    rows.truncate(next);
    let rows = rows
        .into_iter()
        .zip(&pivots)
        .map(|(row, &pc)| {
            let p = Rational::from_integer(row[pc].clone());
            row.into_iter().map(|v| Rational::from_integer(v) / &p).collect()
        })
        .collect();
    Rref { rows, pivots, ncols }
}

pub fn rank(matrix: &[Vec<Rational>], ncols: usize) -> usize {
    rref(matrix, ncols).rank()
}

/// Basis of `{x : A x = 0}`, one vector per free column.
pub fn nullspace(matrix: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let r = rref(matrix, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &r.pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (k, &pc) in r.pivots.iter().enumerate() {
                v[pc] = -&r.rows[k][f];
            }
            v
        })
        .collect()
}

/// Solves `A x = b`. Free variables are set to zero, so the solution is
/// supported on pivot columns only. `None` when inconsistent.
pub fn solve(a: &[Vec<Rational>], b: &[Rational], ncols: usize) -> Option<Vec<Rational>> {
    assert_eq!(a.len(), b.len(), "row count mismatch");
    let augmented: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let r = rref(&augmented, ncols + 1);
    if r.pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![Rational::zero(); ncols];
    for (k, &pc) in r.pivots.iter().enumerate() {
        x[pc] = r.rows[k][ncols].clone();
    }
    Some(x)
}

/// A row functional `y` with `yᵀA = 0` and `yᵀb ≠ 0`, certifying that
/// `A x = b` has no solution. `None` when the system is consistent.
pub fn infeasibility_functional(a: &[Vec<Rational>], b: &[Rational], ncols: usize) -> Option<Vec<Rational>> {
    let nrows = a.len();
    let transposed: Vec<Vec<Rational>> = (0..ncols)
        .map(|j| (0..nrows).map(|i| a[i][j].clone()).collect())
        .collect();
    nullspace(&transposed, nrows).into_iter().find(|y| !dot(y, b).is_zero())
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .map(|(x, y)| x * y)
        .fold(Rational::zero(), |acc, t| acc + t)
}

pub fn mat_vec(a: &[Vec<Rational>], x: &[Rational]) -> Vec<Rational> {
    a.iter().map(|row| dot(row, x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    #[test]
    fn rank_and_rref() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let r = rref(&a, 3);
        assert_eq!(r.rank(), 2);
        assert_eq!(r.pivots, vec![0, 1]);
        assert_eq!(r.rows[0], vec![int(1), int(0), int(1)]);
        assert_eq!(r.rows[1], vec![int(0), int(1), int(1)]);
        assert_eq!(rank(&[], 4), 0);
    }

    #[test]
    fn rational_entries() {
        let a = vec![vec![rat(1, 2), rat(1, 3)], vec![rat(1, 4), rat(1, 6)]];
        assert_eq!(rank(&a, 2), 1);
    }

    #[test]
    fn nullspace_is_annihilated() {
        let a = m(&[&[1, 1, 0, 2], &[0, 0, 1, -1]]);
        let ns = nullspace(&a, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(mat_vec(&a, v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn solve_consistent_and_not() {
        let a = m(&[&[1, 1], &[1, -1]]);
        let x = solve(&a, &[int(3), int(1)], 2).unwrap();
        assert_eq!(x, vec![int(2), int(1)]);
        let singular = m(&[&[1, 1], &[2, 2]]);
        assert!(solve(&singular, &[int(1), int(3)], 2).is_none());
        let y = infeasibility_functional(&singular, &[int(1), int(3)], 2).unwrap();
        let t: Vec<Vec<Rational>> = (0..2)
            .map(|j| (0..2).map(|i| singular[i][j].clone()).collect())
            .collect();
        assert!(mat_vec(&t, &y).iter().all(Zero::is_zero));
        assert!(!dot(&y, &[int(1), int(3)]).is_zero());
        assert!(infeasibility_functional(&a, &[int(3), int(1)], 2).is_none());
    }

    #[test]
    fn solve_sets_free_variables_to_zero() {
        let a = m(&[&[1, 1, 1]]);
        assert_eq!(solve(&a, &[int(5)], 3).unwrap(), vec![int(5), int(0), int(0)]);
        // zero columns / zero rows
        assert_eq!(solve(&m(&[&[0, 0]]), &[int(0)], 2).unwrap(), vec![int(0), int(0)]);
        assert!(solve(&m(&[&[0, 0]]), &[int(1)], 2).is_none());
        assert_eq!(solve(&[], &[], 2).unwrap(), vec![int(0), int(0)]);
    }
}
