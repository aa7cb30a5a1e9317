//! Exact rational Gaussian elimination: rank and solvability of dense
//! systems. Sizes here are small (hundreds of rows), so plain fraction
//! arithmetic with row pivoting is enough.

use crate::rat::Q;
use num::Zero;

/// Row-echelon reduction in place; returns the pivot columns.
fn eliminate(rows: &mut Vec<Vec<Q>>) -> Vec<usize> {
    let nrows = rows.len();
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x = x.clone() / inv.clone();
        }
        for i in 0..nrows {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for cc in c..ncols {
                    let sub = f.clone() * rows[r][cc].clone();
                    rows[i][cc] = rows[i][cc].clone() - sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == nrows {
            break;
        }
    }
    pivots
}

/// Rank over the rationals.
pub fn rank(mut rows: Vec<Vec<Q>>) -> usize {
    eliminate(&mut rows).len()
}

/// Solve A x = b exactly. Returns a particular solution if the system is
/// consistent, None otherwise.
pub fn solve(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    assert_eq!(a.len(), b.len());
    let ncols = a.first().map(|r| r.len()).unwrap_or(0);
    let mut aug: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = eliminate(&mut aug);
    if pivots.last().is_some_and(|&c| c == ncols) {
        return None; // pivot in the RHS column: inconsistent
    }
    let mut x = vec![Q::zero(); ncols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][ncols].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{qi, qr};

    #[test]
    fn rank_and_solve() {
        let m = vec![
            vec![qi(1), qi(2), qi(3)],
            vec![qi(2), qi(4), qi(6)],
            vec![qi(0), qi(1), qi(1)],
        ];
        assert_eq!(rank(m.clone()), 2);

        let a = vec![vec![qi(2), qi(0)], vec![qi(0), qi(4)]];
        let x = solve(&a, &[qi(1), qi(2)]).unwrap();
        assert_eq!(x, vec![qr(1, 2), qr(1, 2)]);

        let a = vec![vec![qi(1), qi(1)], vec![qi(1), qi(1)]];
        assert!(solve(&a, &[qi(0), qi(1)]).is_none());
        assert!(solve(&a, &[qi(1), qi(1)]).is_some());
    }

    #[test]
    fn underdetermined_particular_solution() {
        let a = vec![vec![qi(1), qi(1), qi(0)]];
        let x = solve(&a, &[qi(5)]).unwrap();
        assert_eq!(x[0].clone() + x[1].clone(), qi(5));
    }
}
