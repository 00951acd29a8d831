//! Exact linear solving by fraction-free (Bareiss) elimination.

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("row {row} has {len} entries, expected {expected}")]
    Shape {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("the system is inconsistent")]
    Inconsistent,
    #[error("the system has rank {rank} in {unknowns} unknowns")]
    Underdetermined { rank: usize, unknowns: usize },
}

/// Row echelon form of `[A | b]` computed with Bareiss updates. Returns the
/// matrix and the pivot columns.
fn echelon<S: Scalar>(mut m: Vec<Vec<S>>, cols: usize) -> (Vec<Vec<S>>, Vec<usize>) {
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut prev = S::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..m[i].len() {
                let v = (m[r][c].clone() * m[i][j].clone() - m[i][c].clone() * m[r][j].clone())
                    / prev.clone();
                m[i][j] = v;
            }
            m[i][c] = S::zero();
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

/// Solves `A x = b` exactly. `A` may have more rows than columns; the
/// solution must exist and be unique.
pub fn solve_exact<S: Scalar>(a: &[Vec<S>], b: &[S]) -> Result<Vec<S>, LinalgError> {
    let n = a.first().map_or(0, Vec::len);
    if b.len() != a.len() {
        return Err(LinalgError::Shape {
            row: a.len(),
            len: b.len(),
            expected: a.len(),
        });
    }
    let mut m = Vec::with_capacity(a.len());
    for (i, row) in a.iter().enumerate() {
        if row.len() != n {
            return Err(LinalgError::Shape {
                row: i,
                len: row.len(),
                expected: n,
            });
        }
        let mut r = row.clone();
        r.push(b[i].clone());
        m.push(r);
    }
    let (m, pivots) = echelon(m, n);
    for row in &m[pivots.len()..] {
        if !row[n].is_zero() {
            return Err(LinalgError::Inconsistent);
        }
    }
    if pivots.len() < n {
        return Err(LinalgError::Underdetermined {
            rank: pivots.len(),
            unknowns: n,
        });
    }
    let mut x = vec![S::zero(); n];
    for (r, &c) in pivots.iter().enumerate().rev() {
        let mut acc = m[r][n].clone();
        for j in c + 1..n {
            acc = acc - m[r][j].clone() * x[j].clone();
        }
        x[c] = acc / m[r][c].clone();
    }
    Ok(x)
}

/// Rank of `A`.
pub fn rank<S: Scalar>(a: &[Vec<S>]) -> usize {
    let n = a.first().map_or(0, Vec::len);
    echelon(a.to_vec(), n).1.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    type Q = Ratio<i64>;

    fn q(n: i64) -> Q {
        Q::from_integer(n)
    }

    #[test]
    fn solves_square_system() {
        let a = vec![
            vec![q(2), q(1), q(-1)],
            vec![q(-3), q(-1), q(2)],
            vec![q(-2), q(1), q(2)],
        ];
        let b = vec![q(8), q(-11), q(-3)];
        assert_eq!(solve_exact(&a, &b).unwrap(), vec![q(2), q(3), q(-1)]);
    }

    #[test]
    fn overdetermined_consistent_and_inconsistent() {
        // 3u - 4v = 0, u + v = 1, plus a redundant copy
        let a = vec![vec![q(3), q(-4)], vec![q(6), q(-8)], vec![q(1), q(1)]];
        let x = solve_exact(&a, &[q(0), q(0), q(1)]).unwrap();
        assert_eq!(x, vec![Q::new(4, 7), Q::new(3, 7)]);
        assert_eq!(
            solve_exact(&a, &[q(0), q(1), q(1)]),
            Err(LinalgError::Inconsistent)
        );
    }

    #[test]
    fn reports_rank_deficiency() {
        let a = vec![vec![q(1), q(1)], vec![q(2), q(2)]];
        assert_eq!(
            solve_exact(&a, &[q(1), q(2)]),
            Err(LinalgError::Underdetermined {
                rank: 1,
                unknowns: 2
            })
        );
        assert_eq!(rank(&a), 1);
    }
}
