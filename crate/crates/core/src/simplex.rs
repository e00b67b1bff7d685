//! Exact phase-1 simplex over the rationals.
//!
//! Decides feasibility of `{ x >= 0 : A x = b }` by minimizing the sum of
//! artificial variables. Pivoting uses Bland's rule (smallest eligible index
//! for both entering and leaving variable), which rules out cycling, so the
//! method terminates on every input. All pivots are exact rational
//! operations; the problems this crate solves are tiny, so no effort is
//! spent on sparsity or factorization.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::RationalMatrix;
use crate::rational::Rational;

/// Decide whether `a * x = b` has a solution with all coordinates >= 0.
/// Returns one such solution if it exists.
pub fn nonnegative_solution(
    a: &RationalMatrix,
    b: &[Rational],
) -> Result<Option<Vec<Rational>>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "rhs length {} does not match {} rows",
            b.len(),
            a.rows()
        )));
    }
    let m = a.rows();
    let n = a.cols();

    // Tableau [A | I | b] with rows negated where needed so b >= 0; the
    // artificial variables n..n+m form the initial basis.
    let mut tableau: Vec<Vec<Rational>> = Vec::with_capacity(m);
    for i in 0..m {
        let negate = b[i] < Rational::zero();
        let mut row: Vec<Rational> = Vec::with_capacity(n + m + 1);
        for j in 0..n {
            let v = a.get(i, j).clone();
            row.push(if negate { -v } else { v });
        }
        for k in 0..m {
            row.push(if k == i {
                Rational::from_integer(1.into())
            } else {
                Rational::zero()
            });
        }
        row.push(if negate { -b[i].clone() } else { b[i].clone() });
        tableau.push(row);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    let total = n + m;
    let cost = |var: usize| -> i64 {
        if var >= n {
            1
        } else {
            0
        }
    };

    loop {
        // Reduced costs r_j = c_j - sum_i c_{basis(i)} T[i][j]; recomputed
        // from scratch each iteration, which is fine at these sizes.
        let mut entering = None;
        for j in 0..total {
            if basis.contains(&j) {
                continue;
            }
            let mut r = Rational::from_integer(cost(j).into());
            for (i, &bv) in basis.iter().enumerate() {
                if cost(bv) != 0 {
                    r -= &tableau[i][j];
                }
            }
            if r < Rational::zero() {
                entering = Some(j);
                break; // Bland: smallest improving index
            }
        }
        let Some(enter) = entering else { break };

        // Ratio test; ties broken by smallest basic variable index (Bland).
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            let coeff = &tableau[i][enter];
            if *coeff <= Rational::zero() {
                continue;
            }
            let ratio = &tableau[i][total] / coeff;
            match &leave {
                None => leave = Some((i, ratio)),
                Some((best_i, best)) => {
                    if ratio < *best || (ratio == *best && basis[i] < basis[*best_i]) {
                        leave = Some((i, ratio));
                    }
                }
            }
        }
        // The phase-1 objective is bounded below by 0, so a column with no
        // positive entry cannot occur with negative reduced cost.
        let (row, _) = leave.expect("phase-1 objective is bounded");

        pivot(&mut tableau, row, enter);
        basis[row] = enter;
    }

    // Optimal value of the artificial objective.
    let mut objective = Rational::zero();
    for (i, &bv) in basis.iter().enumerate() {
        if cost(bv) != 0 {
            objective += &tableau[i][total];
        }
    }
    if !objective.is_zero() {
        return Ok(None);
    }

    let mut x = vec![Rational::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = tableau[i][total].clone();
        }
    }
    debug_assert_eq!(a.mul_vec(&x)?, b.to_vec());
    Ok(Some(x))
}

fn pivot(tableau: &mut [Vec<Rational>], row: usize, col: usize) {
    let width = tableau[row].len();
    let pivot = tableau[row][col].clone();
    for j in 0..width {
        tableau[row][j] /= &pivot;
    }
    for i in 0..tableau.len() {
        if i == row || tableau[i][col].is_zero() {
            continue;
        }
        let factor = tableau[i][col].clone();
        for j in 0..width {
            let v = &tableau[i][j] - &factor * &tableau[row][j];
            tableau[i][j] = v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    #[test]
    fn feasible_point_on_segment() {
        // x1 + x2 = 1, x1 - x2 = 0 -> x = (1/2, 1/2)
        let a = RationalMatrix::from_integer_rows(&[vec![1, 1], vec![1, -1]]);
        let x = nonnegative_solution(&a, &[rat_int(1), rat_int(0)])
            .unwrap()
            .unwrap();
        assert_eq!(x, vec![rat(1, 2), rat(1, 2)]);
    }

    #[test]
    fn infeasible_negative_requirement() {
        // x1 + x2 = -1 has no nonnegative solution
        let a = RationalMatrix::from_integer_rows(&[vec![1, 1]]);
        assert!(nonnegative_solution(&a, &[rat_int(-1)]).unwrap().is_none());
    }

    #[test]
    fn infeasible_contradictory_rows() {
        let a = RationalMatrix::from_integer_rows(&[vec![1, 1], vec![1, 1]]);
        assert!(nonnegative_solution(&a, &[rat_int(1), rat_int(2)])
            .unwrap()
            .is_none());
    }

    #[test]
    fn solution_satisfies_system_exactly() {
        let a = RationalMatrix::from_integer_rows(&[vec![2, 1, 0], vec![0, 1, 3]]);
        let b = vec![rat_int(4), rat_int(6)];
        let x = nonnegative_solution(&a, &b).unwrap().unwrap();
        assert_eq!(a.mul_vec(&x).unwrap(), b);
        assert!(x.iter().all(|v| *v >= Rational::zero()));
    }

    #[test]
    fn degenerate_system_terminates() {
        // Redundant constraints with a zero right-hand side exercise the
        // anti-cycling rule.
        let a = RationalMatrix::from_integer_rows(&[
            vec![1, -1, 0],
            vec![1, -1, 0],
            vec![0, 0, 1],
        ]);
        let b = vec![rat_int(0), rat_int(0), rat_int(0)];
        let x = nonnegative_solution(&a, &b).unwrap().unwrap();
        assert_eq!(a.mul_vec(&x).unwrap(), b);
    }
}
