use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// `U·A·V = D` with `U`, `V` unimodular and `D` diagonal, each diagonal entry
/// non-negative and dividing the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// `min(rows, cols)` entries; the first `rank` are positive.
    pub diag: Vec<BigInt>,
    pub rank: usize,
    pub u: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

/// Row `dst -= q·row src`.
fn row_axpy(m: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    let (a, b) = if dst < src {
        let (lo, hi) = m.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in a.iter_mut().zip(b.iter()) {
        *x -= q * y;
    }
}

fn col_axpy(m: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    for row in m.iter_mut() {
        let s = row[src].clone();
        row[dst] -= q * s;
    }
}

fn swap_cols(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// Smith normal form of an integer matrix with `cols` columns.
pub fn smith_normal_form(a: &[Vec<BigInt>], cols: usize) -> SmithForm {
    let rows = a.len();
    let mut d: Vec<Vec<BigInt>> = a.to_vec();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let steps = rows.min(cols);
    let mut rank = steps;
    't: for t in 0..steps {
        loop {
            let pivot = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|(i, j)| !d[*i][*j].is_zero())
                .min_by(|x, y| d[x.0][x.1].abs().cmp(&d[y.0][y.1].abs()));
            let Some((pi, pj)) = pivot else {
                rank = t;
                break 't;
            };
            d.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut d, t, pj);
            swap_cols(&mut v, t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if !d[i][t].is_zero() {
                    let q = &d[i][t] / &d[t][t];
                    row_axpy(&mut d, i, t, &q);
                    row_axpy(&mut u, i, t, &q);
                    clean &= d[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !d[t][j].is_zero() {
                    let q = &d[t][j] / &d[t][t];
                    col_axpy(&mut d, j, t, &q);
                    col_axpy(&mut v, j, t, &q);
                    clean &= d[t][j].is_zero();
                }
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..rows).find(|i| (t + 1..cols).any(|j| !d[*i][j].is_multiple_of(&d[t][t])));
            match offender {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_axpy(&mut d, t, i, &minus_one);
                    row_axpy(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            for x in d[t].iter_mut().chain(u[t].iter_mut()) {
                *x = -x.clone();
            }
        }
    }
    SmithForm {
        diag: (0..steps).map(|i| d[i][i].clone()).collect(),
        rank,
        u,
        v,
    }
}

pub(crate) fn mat_vec(m: &[Vec<BigInt>], x: &[BigInt]) -> Vec<BigInt> {
    m.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn big(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
        m.iter().map(|r| r.iter().map(|x| BigInt::from(*x)).collect()).collect()
    }

    fn mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>], inner: usize, cols: usize) -> Vec<Vec<BigInt>> {
        a.iter()
            .map(|row| (0..cols).map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum()).collect())
            .collect()
    }

    /// Fraction-free elimination.
    fn det(m: &[Vec<BigInt>]) -> BigInt {
        let n = m.len();
        let mut a = m.to_vec();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|i| !a[*i][k].is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * a[n - 1][n - 1].clone()
    }

    pub(crate) fn check(a: &[Vec<i64>], cols: usize) -> SmithForm {
        let s = smith_normal_form(&big(a), cols);
        let rows = a.len();
        let uav = mul(&mul(&s.u, &big(a), rows, cols), &s.v, cols, cols);
        for i in 0..rows {
            for j in 0..cols {
                let expected = if i == j { s.diag[i].clone() } else { BigInt::zero() };
                assert_eq!(uav[i][j], expected, "entry {i},{j}");
            }
        }
        for w in s.diag.windows(2) {
            assert!(!w[0].is_negative());
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        assert_eq!(s.diag.iter().filter(|d| !d.is_zero()).count(), s.rank);
        if rows > 0 {
            assert_eq!(det(&s.u).abs(), BigInt::one());
        }
        if cols > 0 {
            assert_eq!(det(&s.v).abs(), BigInt::one());
        }
        s
    }

    #[test]
    fn small_examples() {
        let s = check(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], 3);
        assert_eq!(s.diag, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
        let s = check(&[vec![6, 4], vec![4, 6]], 2);
        assert_eq!(s.diag, vec![BigInt::from(2), BigInt::from(10)]);
        let s = check(&[vec![0, 0], vec![0, 0], vec![0, 3]], 2);
        assert_eq!((s.rank, s.diag[0].clone()), (1, BigInt::from(3)));
        let s = check(&[vec![3, 0]], 2);
        assert_eq!(s.rank, 1);
        let s = check(&[], 3);
        assert_eq!(s.rank, 0);
        let s = check(&[vec![], vec![]], 0);
        assert!(s.diag.is_empty());
    }

    proptest! {
        #[test]
        fn random_matrices(rows in 0usize..6, cols in 0usize..6, seed in proptest::collection::vec(-9i64..10, 36)) {
            let a: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| seed[i * 6 + j]).collect()).collect();
            check(&a, cols);
        }
    }
}
