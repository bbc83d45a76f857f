//! Exact linear algebra over the rationals.
//!
//! Everything downstream (section matrices, fibre ranks, Sylvester
//! determinants, point-condition ranks) reduces to Gaussian elimination on
//! dense matrices of `BigRational`s. Matrices are plain row-major
//! `Vec<Vec<Rat>>`; rows must all have the same length.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Rat = num_rational::BigRational;
pub type Mat = Vec<Vec<Rat>>;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

pub fn cols(m: &Mat) -> usize {
    m.first().map_or(0, |r| r.len())
}

/// Clears denominators and strips the content of one row.
fn integer_row(row: &[Rat]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in row {
        if !x.is_zero() {
            lcm = lcm.lcm(x.denom());
        }
    }
    let mut out: Vec<BigInt> = row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    strip_content(&mut out);
    out
}

fn strip_content(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in row.iter() {
        if !x.is_zero() {
            g = g.gcd(x);
            if g.is_one() {
                return;
            }
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for x in row.iter_mut() {
        *x /= &g;
    }
}

/// Rank by fraction-free integer elimination with content stripping; far
/// cheaper than rational elimination on the large section matrices.
fn integer_rank(mut rows: Vec<Vec<BigInt>>) -> usize {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        // smallest nonzero pivot keeps the cross-multiplied entries modest
        let Some(p) = (r..nrows)
            .filter(|&i| !rows[i][c].is_zero())
            .min_by(|&a, &b| rows[a][c].abs().cmp(&rows[b][c].abs()))
        else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        for i in (r + 1)..nrows {
            if rows[i][c].is_zero() {
                continue;
            }
            let g = pivot.gcd(&rows[i][c]);
            let a = &pivot / &g;
            let b = &rows[i][c] / &g;
            for k in c..ncols {
                let v = &a * &rows[i][k] - &b * &rows[r][k];
                rows[i][k] = v;
            }
            strip_content(&mut rows[i][c..]);
        }
        r += 1;
    }
    r
}

/// Row echelon reduction in place; returns the pivot columns.
fn eliminate(m: &mut Mat) -> Vec<usize> {
    let nrows = m.len();
    let ncols = cols(m);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        // pick the largest pivot to keep entries from exploding
        let Some(p) = (r..nrows)
            .filter(|&i| !m[i][c].is_zero())
            .max_by(|&a, &b| m[a][c].abs().cmp(&m[b][c].abs()))
        else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for i in 0..nrows {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &pivot;
                for k in c..ncols {
                    let delta = &f * &m[r][k];
                    m[i][k] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Mat) -> usize {
    integer_rank(m.iter().map(|row| integer_row(row)).collect())
}

pub fn nullity(m: &Mat) -> usize {
    cols(m) - rank(m)
}

/// Determinant of a square matrix.
pub fn det(m: &Mat) -> Rat {
    let n = m.len();
    assert_eq!(n, cols(m), "determinant needs a square matrix");
    if n == 0 {
        return Rat::one();
    }
    let mut work = m.clone();
    let mut result = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !work[i][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            work.swap(c, p);
            result = -result;
        }
        let pivot = work[c][c].clone();
        result *= &pivot;
        for i in (c + 1)..n {
            if !work[i][c].is_zero() {
                let f = &work[i][c] / &pivot;
                for k in c..n {
                    let delta = &f * &work[c][k];
                    work[i][k] -= delta;
                }
            }
        }
    }
    result
}

/// Basis of the right kernel {x : m x = 0}.
pub fn nullspace(m: &Mat) -> Vec<Vec<Rat>> {
    let ncols = cols(m);
    let mut work = m.clone();
    let pivots = eliminate(&mut work);
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let free: Vec<usize> = (0..ncols).filter(|c| !pivot_set.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &fc in &free {
        let mut v = vec![Rat::zero(); ncols];
        v[fc] = Rat::one();
        // each pivot row reads `pivot * x_p + sum over free columns = 0`
        for (row, &pc) in pivots.iter().enumerate() {
            let coeff = &work[row][fc];
            if !coeff.is_zero() {
                v[pc] = -(coeff / &work[row][pc]);
            }
        }
        basis.push(v);
    }
    basis
}

/// A particular solution of `m x = b`, if one exists.
pub fn solve(m: &Mat, b: &[Rat]) -> Option<Vec<Rat>> {
    let ncols = cols(m);
    assert_eq!(m.len(), b.len(), "right-hand side length mismatch");
    let mut work: Mat = m
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = eliminate(&mut work);
    // inconsistent if the augmented column became a pivot
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![Rat::zero(); ncols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = &work[row][ncols] / &work[row][pc];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Mat {
        rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
    }

    #[test]
    fn rank_and_nullity() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(rank(&a), 2);
        assert_eq!(nullity(&a), 1);
        assert_eq!(rank(&m(&[&[0, 0], &[0, 0]])), 0);
    }

    #[test]
    fn determinant() {
        assert_eq!(det(&m(&[&[2, 0], &[1, 3]])), rat(6));
        assert_eq!(det(&m(&[&[1, 2], &[2, 4]])), rat(0));
        assert_eq!(det(&Vec::new()), rat(1));
    }

    #[test]
    fn nullspace_vectors_annihilate() {
        let a = m(&[&[1, 2, 3], &[4, 5, 6]]);
        let ns = nullspace(&a);
        assert_eq!(ns.len(), 1);
        for row in &a {
            let dot: Rat = row.iter().zip(&ns[0]).map(|(x, y)| x * y).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = m(&[&[1, 1], &[1, -1]]);
        let x = solve(&a, &[rat(3), rat(1)]).unwrap();
        assert_eq!(x, vec![rat(2), rat(1)]);
        let b = m(&[&[1, 1], &[2, 2]]);
        assert!(solve(&b, &[rat(1), rat(3)]).is_none());
        assert!(solve(&b, &[rat(1), rat(2)]).is_some());
    }
}
