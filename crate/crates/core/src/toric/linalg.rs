//! Exact integer determinants.

use num_traits::PrimInt;

use crate::error::{Error, Result};

/// Determinant of a square integer matrix given as rows (fraction-free
/// Bareiss elimination). The empty matrix has determinant 1.
pub fn determinant(rows: &[Vec<i64>]) -> Result<i128> {
    let n = rows.len();
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::VerificationFailure("determinant of a non-square matrix".into()));
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let a = m[i][j].checked_mul(m[k][k]);
                let b = m[i][k].checked_mul(m[k][j]);
                let num = a.zip(b).and_then(|(a, b)| a.checked_sub(b)).ok_or(Error::Overflow("determinant"))?;
                m[i][j] = num / prev;
            }
        }
        prev = m[k][k];
    }
    Ok(if n == 0 { 1 } else { sign * m[n - 1][n - 1] })
}

/// Fraction-free Gauss-Jordan elimination on `[M | I]`, ending with
/// `p·I | p·M⁻¹` where `p = ±det M` is the last pivot. Every intermediate
/// entry is a minor of `[M | I]`. Returns `det M` and, when `p = ±1`,
/// `M⁻¹`; `None` on overflow.
fn gauss_jordan<T: PrimInt>(rows: &[Vec<i64>]) -> Option<(T, Vec<Vec<T>>)> {
    let n = rows.len();
    let mut m: Vec<Vec<T>> = Vec::with_capacity(n);
    for (i, r) in rows.iter().enumerate() {
        let mut row = Vec::with_capacity(2 * n);
        for &x in r {
            row.push(T::from(x)?);
        }
        row.extend((0..n).map(|j| if i == j { T::one() } else { T::zero() }));
        m.push(row);
    }
    let mut prev = T::one();
    let mut negate = false;
    for k in 0..n {
        let Some(pivot) = (k..n).find(|&i| m[i][k] != T::zero()) else {
            return Some((T::zero(), Vec::new()));
        };
        if pivot != k {
            m.swap(pivot, k);
            negate = !negate;
        }
        let (pk, pivot_row) = (m[k][k], m[k].clone());
        for (i, row) in m.iter_mut().enumerate() {
            if i == k {
                continue;
            }
            let f = row[k];
            if f == T::zero() {
                for x in row.iter_mut() {
                    *x = x.checked_mul(&pk)? / prev;
                }
                continue;
            }
            for (x, &p) in row.iter_mut().zip(&pivot_row) {
                *x = x.checked_mul(&pk)?.checked_sub(&f.checked_mul(&p)?)? / prev;
            }
        }
        prev = pk;
    }
    let det = if negate { T::zero() - prev } else { prev };
    if prev != T::one() && prev != T::zero() - T::one() {
        return Some((det, Vec::new()));
    }
    let inverse = m.into_iter().map(|row| row[n..].iter().map(|&x| x * prev).collect()).collect();
    Some((det, inverse))
}

/// Determinant of a square integer matrix and, when it is ±1, the inverse.
pub fn determinant_and_inverse(rows: &[Vec<i64>]) -> Result<(i128, Option<Vec<Vec<i64>>>)> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::VerificationFailure("inverse of a non-square matrix".into()));
    }
    let unit = |det: i128| det == 1 || det == -1;
    if let Some((det, inv)) = gauss_jordan::<i64>(rows) {
        // with p = ±1 the adjugate already is the inverse
        let det = det as i128;
        return Ok((det, unit(det).then_some(inv)));
    }
    let (det, inv) = gauss_jordan::<i128>(rows).ok_or(Error::Overflow("matrix inverse"))?;
    if !unit(det) {
        return Ok((det, None));
    }
    let inv = inv
        .into_iter()
        .map(|row| row.into_iter().map(|x| i64::try_from(x).map_err(|_| Error::Overflow("matrix inverse"))).collect())
        .collect::<Result<_>>()?;
    Ok((det, Some(inv)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_determinants() {
        assert_eq!(determinant(&[]).unwrap(), 1);
        assert_eq!(determinant(&[vec![-3]]).unwrap(), -3);
        assert_eq!(determinant(&[vec![1, 2], vec![3, 4]]).unwrap(), -2);
        assert_eq!(determinant(&[vec![0, 1], vec![1, 0]]).unwrap(), -1);
        assert_eq!(determinant(&[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 2]]).unwrap(), 6);
        assert_eq!(determinant(&[vec![1, 2], vec![2, 4]]).unwrap(), 0);
    }

    #[test]
    fn unimodular_inverses() {
        let m = vec![vec![2, 1, 0], vec![1, 1, 0], vec![3, 0, -1]];
        let (det, inv) = determinant_and_inverse(&m).unwrap();
        assert_eq!(det, -1);
        let inv = inv.unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let x: i64 = (0..3).map(|k| m[i][k] * inv[k][j]).sum();
                assert_eq!(x, i64::from(i == j));
            }
        }
        assert_eq!(determinant_and_inverse(&[vec![2, 0], vec![0, 1]]).unwrap(), (2, None));
        assert_eq!(determinant_and_inverse(&[vec![1, 2], vec![2, 4]]).unwrap(), (0, None));
    }

    #[test]
    fn gauss_jordan_determinant_matches_bareiss() {
        let cases = [
            vec![vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 2]],
            vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]],
            vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]],
            vec![vec![1, 2], vec![2, 4]],
            vec![vec![0, -1, 1, 0], vec![1, 0, 0, 1], vec![1, 1, 0, 0], vec![0, 1, 1, 1]],
        ];
        for m in cases {
            assert_eq!(determinant_and_inverse(&m).unwrap().0, determinant(&m).unwrap(), "{m:?}");
        }
    }
}
