//! Exact phase-1 simplex over big rationals, used to find which variables can
//! be positive in the homogeneous cone `{x ≥ 0 : A x = 0}`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exactgroup::Rat;

fn big(r: &Rat) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// Finds some `x ≥ 0` with `A x = b` (`b ≥ 0` componentwise), or `None`.
/// Bland's rule keeps the method finite.
fn feasible_point(a: &[Vec<BigRational>], b: &[BigRational], n: usize) -> Option<Vec<BigRational>> {
    let m = a.len();
    let width = n + m + 1;
    // Tableau: constraint rows then the phase-1 objective row.
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m + 1);
    for (i, row) in a.iter().enumerate() {
        let mut r = vec![BigRational::zero(); width];
        r[..n].clone_from_slice(&row[..n]);
        r[n + i] = BigRational::one();
        r[width - 1] = b[i].clone();
        t.push(r);
    }
    // objective: minimize Σ artificials  ⇒  reduced costs = −Σ rows
    let mut obj = vec![BigRational::zero(); width];
    for r in &t {
        for j in 0..n {
            obj[j] -= &r[j];
        }
        obj[width - 1] -= &r[width - 1];
    }
    t.push(obj);
    let mut basis: Vec<usize> = (n..n + m).collect();

    loop {
        let Some(enter) = (0..n + m).find(|&j| t[m][j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else {
            // unbounded phase-1 objective cannot happen (it is ≥ 0)
            unreachable!("phase-1 objective is bounded below");
        };
        let pv = t[r][enter].clone();
        for x in t[r].iter_mut() {
            *x /= &pv;
        }
        let pivot_row = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != r && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        basis[r] = enter;
    }
    if !t[m][width - 1].is_zero() {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = t[i][width - 1].clone();
        }
    }
    Some(x)
}

/// `support[i]` is true iff some `x ≥ 0` with `A x = 0` has `x_i > 0`.
///
/// Equal columns share one answer, so the LPs run on distinct columns only.
pub fn cone_support(rows: &[Vec<Rat>], n: usize) -> Vec<bool> {
    let column = |i: usize| -> Vec<Rat> { rows.iter().map(|r| r[i]).collect() };
    let mut distinct: Vec<Vec<Rat>> = Vec::new();
    let mut class = Vec::with_capacity(n);
    for i in 0..n {
        let c = column(i);
        let k = match distinct.iter().position(|d| *d == c) {
            Some(k) => k,
            None => {
                distinct.push(c);
                distinct.len() - 1
            }
        };
        class.push(k);
    }
    let nd = distinct.len();
    let a: Vec<Vec<BigRational>> = (0..rows.len())
        .map(|r| distinct.iter().map(|c| big(&c[r])).collect())
        .collect();
    let mut support = vec![false; nd];
    for i in 0..nd {
        if support[i] {
            continue;
        }
        let mut ai = a.clone();
        let mut unit = vec![BigRational::zero(); nd];
        unit[i] = BigRational::one();
        ai.push(unit);
        let mut b = vec![BigRational::zero(); a.len()];
        b.push(BigRational::one());
        if let Some(x) = feasible_point(&ai, &b, nd) {
            for (j, v) in x.iter().enumerate() {
                if v.is_positive() {
                    support[j] = true;
                }
            }
        }
    }
    class.into_iter().map(|k| support[k]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactgroup::int;

    fn rows(v: &[&[i64]]) -> Vec<Vec<Rat>> {
        v.iter().map(|r| r.iter().map(|x| int(*x)).collect()).collect()
    }

    #[test]
    fn pointed_cone_has_empty_support() {
        // x + y = 0 with x, y ≥ 0
        assert_eq!(cone_support(&rows(&[&[1, 1]]), 2), vec![false, false]);
    }

    #[test]
    fn balanced_pair_is_supported() {
        // x − y = 0, z free of constraints but z = −w forces both 0
        let r = rows(&[&[1, -1, 0, 0], &[0, 0, 1, 1]]);
        assert_eq!(cone_support(&r, 4), vec![true, true, false, false]);
    }

    #[test]
    fn no_rows_means_everything() {
        assert_eq!(cone_support(&[], 3), vec![true; 3]);
    }

    #[test]
    fn mixed_signs() {
        // 2x − y − z = 0, y − 3w = 0
        let r = rows(&[&[2, -1, -1, 0], &[0, 1, 0, -3]]);
        assert_eq!(cone_support(&r, 4), vec![true; 4]);
        // x − 2y = 0, x + z = 0
        let r = rows(&[&[1, -2, 0], &[1, 0, 1]]);
        assert_eq!(cone_support(&r, 3), vec![false; 3]);
    }
}
