//! Dense linear algebra over a finite field.

use crate::gf::{Fe, GaloisField};

pub type Row = Vec<Fe>;

/// Reduced row echelon form. Zero rows are dropped; returns the rows and
/// their pivot columns.
pub fn rref(field: &GaloisField, rows: &[Row], ncols: usize) -> (Vec<Row>, Vec<usize>) {
    let mut m: Vec<Row> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = field.inv(m[r][c]).expect("pivot is nonzero");
        for x in m[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = field.sub(*x, field.mul(f, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(field: &GaloisField, rows: &[Row], ncols: usize) -> usize {
    rref(field, rows, ncols).0.len()
}

/// Basis of `{x : row . x = 0 for every row}`, one vector per free column.
pub fn kernel(field: &GaloisField, rows: &[Row], ncols: usize) -> Vec<Row> {
    let (m, pivots) = rref(field, rows, ncols);
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Fe::ZERO; ncols];
        v[free] = Fe::ONE;
        for (row, &pc) in m.iter().zip(&pivots) {
            v[pc] = field.neg(row[free]);
        }
        out.push(v);
    }
    out
}

pub fn dot(field: &GaloisField, a: &[Fe], b: &[Fe]) -> Fe {
    a.iter()
        .zip(b)
        .fold(Fe::ZERO, |acc, (&x, &y)| field.add(acc, field.mul(x, y)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(f: &GaloisField, v: &[i64]) -> Row {
        v.iter().map(|&x| f.from_int(x)).collect()
    }

    #[test]
    fn rref_and_rank() {
        let f = GaloisField::with_order(3).unwrap();
        let rows = vec![row(&f, &[1, 2, 0]), row(&f, &[2, 1, 0]), row(&f, &[0, 0, 1])];
        let (m, piv) = rref(&f, &rows, 3);
        assert_eq!(piv, vec![0, 2]);
        assert_eq!(m, vec![row(&f, &[1, 2, 0]), row(&f, &[0, 0, 1])]);
        assert_eq!(rank(&f, &rows, 3), 2);
    }

    #[test]
    fn kernel_is_orthogonal() {
        let f = GaloisField::with_order(4).unwrap();
        let a = f.generator().unwrap();
        let rows = vec![vec![Fe::ONE, a, Fe::ZERO, Fe::ONE], vec![Fe::ZERO, Fe::ONE, a, a]];
        let k = kernel(&f, &rows, 4);
        assert_eq!(k.len(), 2);
        for v in &k {
            for r in &rows {
                assert!(dot(&f, r, v).is_zero());
            }
        }
        assert_eq!(rank(&f, &k, 4), 2);
    }
}
