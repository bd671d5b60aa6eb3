//! Exact dense linear algebra over a [`Field`]: reduced row echelon form,
//! rank, and kernel bases. Matrices are small (dimensions bounded by the
//! ambient projective dimension or a truncation order), so classical
//! Gauss-Jordan with exact arithmetic is the right tool.

use crate::field::{Field, FieldElement};
use crate::{Error, Result};

/// Reduces `m` in place to reduced row echelon form and returns the pivot
/// column indices in ascending order. Rows must all have the same length.
pub(crate) fn row_reduce(m: &mut [Vec<FieldElement>]) -> Result<Vec<usize>> {
    let nrows = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    for row in m.iter() {
        if row.len() != ncols {
            return Err(Error::Internal("ragged matrix".into()));
        }
    }
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(pr) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][c].inv()?;
        for j in c..ncols {
            m[r][j] = m[r][j].mul(&inv)?;
        }
        for i in 0..nrows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let factor = m[i][c].clone();
            for j in c..ncols {
                let delta = factor.mul(&m[r][j])?;
                m[i][j] = m[i][j].sub(&delta)?;
            }
        }
        pivots.push(c);
        r += 1;
    }
    Ok(pivots)
}

pub(crate) fn rank(mut m: Vec<Vec<FieldElement>>) -> Result<usize> {
    Ok(row_reduce(&mut m)?.len())
}

/// A basis of the right kernel `{v : M v = 0}`, one vector per free column,
/// in ascending free-column order. Each vector has a 1 in its free column.
pub(crate) fn kernel_basis(
    field: &Field,
    m: &[Vec<FieldElement>],
    ncols: usize,
) -> Result<Vec<Vec<FieldElement>>> {
    let mut work: Vec<Vec<FieldElement>> = m.to_vec();
    let pivots = row_reduce(&mut work)?;
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &fc in &free {
        let mut v = vec![field.zero(); ncols];
        v[fc] = field.one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = work[row][fc].neg();
        }
        basis.push(v);
    }
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64, rows: &[&[i64]]) -> (Field, Vec<Vec<FieldElement>>) {
        let f = Field::prime(p).unwrap();
        let m = rows
            .iter()
            .map(|r| r.iter().map(|&v| f.from_int(v)).collect())
            .collect();
        (f, m)
    }

    #[test]
    fn rank_of_gradient_like_matrix() {
        let (_, m) = fp(13, &[&[1, 2, 3], &[2, 4, 6], &[0, 0, 1]]);
        assert_eq!(rank(m).unwrap(), 2);
    }

    #[test]
    fn pivot_columns_ascend() {
        let (_, mut m) = fp(13, &[&[0, 1, 4, 0], &[0, 2, 1, 1]]);
        let piv = row_reduce(&mut m).unwrap();
        assert_eq!(piv, vec![1, 2]);
        // same rows mod 7: elimination kills column 2 (8 - 1 = 7 = 0)
        let (_, mut m) = fp(7, &[&[0, 1, 4, 0], &[0, 2, 1, 1]]);
        let piv = row_reduce(&mut m).unwrap();
        assert_eq!(piv, vec![1, 3]);
    }

    #[test]
    fn kernel_dimension_and_membership() {
        // x + y + z = 0 and y - z = 0 over GF(13): kernel spanned by (-2, 1, 1)
        let (f, m) = fp(13, &[&[1, 1, 1], &[0, 1, -1]]);
        let basis = kernel_basis(&f, &m, 3).unwrap();
        assert_eq!(basis.len(), 1);
        let v = &basis[0];
        for row in &m {
            let mut acc = f.zero();
            for (a, b) in row.iter().zip(v) {
                acc = acc.add(&a.mul(b).unwrap()).unwrap();
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn full_rank_kernel_is_trivial() {
        let (f, m) = fp(13, &[&[1, 0], &[1, 1]]);
        assert!(kernel_basis(&f, &m, 2).unwrap().is_empty());
    }
}
