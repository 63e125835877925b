//! Smith normal form over the integers.

use super::matrix::IntMatrix;
use crate::scalar::Scalar;

/// `left * input * right == diag`, with `left` and `right` unimodular and
/// the diagonal a non-negative divisibility chain (zeros last).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm<T> {
    pub diag: IntMatrix<T>,
    pub left: IntMatrix<T>,
    pub right: IntMatrix<T>,
}

impl<T: Scalar> SmithForm<T> {
    /// Diagonal entries `d_1 | d_2 | ...` (length `min(rows, cols)`).
    pub fn diagonal_entries(&self) -> Vec<T> {
        let n = self.diag.rows().min(self.diag.cols());
        (0..n).map(|i| self.diag[(i, i)].clone()).collect()
    }
}

pub fn smith_normal_form<T: Scalar>(m: &IntMatrix<T>) -> SmithForm<T> {
    if m.rows() > m.cols() {
        // tall inputs grow large left transforms; the wide transpose does not
        let t = smith_normal_form(&m.transpose());
        return SmithForm { diag: t.diag.transpose(), left: t.right.transpose(), right: t.left.transpose() };
    }
    let mut left = IntMatrix::identity(m.rows());
    let (diag, mut right) = reduce(m.clone(), Some(&mut left));
    shrink(&diag, &mut left, &mut right);
    SmithForm { diag, left, right }
}

/// Diagonal form and right transform only. Skips the left transform,
/// which is large for tall relation matrices and never needed there.
pub fn smith_diagonal_and_right<T: Scalar>(m: &IntMatrix<T>) -> (Vec<T>, IntMatrix<T>) {
    let (diag, right) = reduce(m.clone(), None);
    let n = diag.rows().min(diag.cols());
    ((0..n).map(|i| diag[(i, i)].clone()).collect(), right)
}

/// Alternates row and column Hermite passes until the matrix is diagonal,
/// then repairs the divisibility chain with 2×2 Bezout steps. Reducing
/// off-pivot entries modulo their pivot in every pass keeps the transforms
/// small; plain Euclidean elimination lets them grow past 64 bits on 6×6
/// inputs with single-digit entries.
fn reduce<T: Scalar>(mut a: IntMatrix<T>, mut left: Option<&mut IntMatrix<T>>) -> (IntMatrix<T>, IntMatrix<T>) {
    let mut right = IntMatrix::identity(a.cols());
    loop {
        row_hermite(&mut a, left.as_deref_mut());
        if a.is_diagonal() {
            break;
        }
        let (mut at, mut rt) = (a.transpose(), right.transpose());
        row_hermite(&mut at, Some(&mut rt));
        (a, right) = (at.transpose(), rt.transpose());
        if a.is_diagonal() {
            break;
        }
    }

    let n = a.rows().min(a.cols());
    // nonzero entries first
    let mut filled = 0;
    for i in 0..n {
        if !a[(i, i)].is_zero() {
            if i != filled {
                a.swap_rows(i, filled);
                a.swap_cols(i, filled);
                right.swap_cols(i, filled);
                if let Some(l) = left.as_deref_mut() {
                    l.swap_rows(i, filled);
                }
            }
            filled += 1;
        }
    }
    for i in 0..filled {
        for j in i + 1..filled {
            if !a[(j, j)].is_multiple_of(&a[(i, i)]) {
                bezout_step(&mut a, left.as_deref_mut(), &mut right, i, j);
            }
        }
    }
    (a, right)
}

/// Replaces `diag(x, y)` at positions `i < j` by `diag(gcd, lcm)`.
fn bezout_step<T: Scalar>(a: &mut IntMatrix<T>, left: Option<&mut IntMatrix<T>>, right: &mut IntMatrix<T>, i: usize, j: usize) {
    let (x, y) = (a[(i, i)].clone(), a[(j, j)].clone());
    let e = x.extended_gcd(&y);
    let (g, s, t) = (e.gcd, e.x, e.y);
    let (xg, yg) = (x.clone() / g.clone(), y.clone() / g.clone());
    // [[s, t], [-y/g, x/g]] · diag(x, y) · [[1, -t·y/g], [1, s·x/g]] = diag(g, x·y/g)
    if let Some(l) = left {
        let (ri, rj) = (l.row(i).to_vec(), l.row(j).to_vec());
        for k in 0..l.cols() {
            l[(i, k)] = s.clone() * ri[k].clone() + t.clone() * rj[k].clone();
            l[(j, k)] = xg.clone() * rj[k].clone() - yg.clone() * ri[k].clone();
        }
    }
    for k in 0..right.rows() {
        let (ci, cj) = (right[(k, i)].clone(), right[(k, j)].clone());
        right[(k, i)] = ci.clone() + cj.clone();
        right[(k, j)] = cj * s.clone() * xg.clone() - ci * t.clone() * yg.clone();
    }
    a[(i, i)] = g.clone();
    a[(j, j)] = x * y / g;
}

fn norm2<T: Scalar>(v: impl Iterator<Item = T>) -> f64 {
    v.map(|x| x.to_f64().unwrap_or(f64::MAX).powi(2)).sum()
}

fn dot<T: Scalar>(a: impl Iterator<Item = T>, b: impl Iterator<Item = T>) -> f64 {
    a.zip(b).map(|(x, y)| x.to_f64().unwrap_or(f64::MAX) * y.to_f64().unwrap_or(f64::MAX)).sum()
}

/// Greedy size reduction of `left` and `right` by moves that keep
/// `left · M · right` unchanged:
/// - for `i < j` below the rank, `row_i(L) += k·row_j(L)` together with
///   `col_j(R) -= k·(d_j/d_i)·col_i(R)`
/// - for `j < i` below the rank, `col_j(R) += k·col_i(R)` together with
///   `row_i(L) -= k·(d_i/d_j)·row_j(L)`
/// - multiples of rows of `L` (columns of `R`) past the rank, which span
///   the left (right) kernel, may be added freely.
fn shrink<T: Scalar>(diag: &IntMatrix<T>, left: &mut IntMatrix<T>, right: &mut IntMatrix<T>) {
    let n = diag.rows().min(diag.cols());
    let d: Vec<T> = (0..n).map(|i| diag[(i, i)].clone()).collect();
    let rank = d.iter().take_while(|x| !x.is_zero()).count();
    let (lr, rc) = (left.rows(), right.cols());
    let lrow = |l: &IntMatrix<T>, i: usize| l.row(i).to_vec();
    let rcol = |r: &IntMatrix<T>, j: usize| (0..r.rows()).map(|k| r[(k, j)].clone()).collect::<Vec<T>>();

    for _ in 0..64 {
        let mut improved = false;
        // row moves on L: row_i += k·row_j, compensated in R when j < rank
        for i in 0..lr {
            for j in (0..lr).filter(|&j| j != i && (j >= rank || (i < j && j < rank))) {
                let (ui, uj) = (lrow(left, i), lrow(left, j));
                let ratio = if j < rank { Some(d[j].clone() / d[i].clone()) } else { None };
                let (vi, vj) = match &ratio {
                    Some(_) => (rcol(right, i), rcol(right, j)),
                    None => (Vec::new(), Vec::new()),
                };
                let rf = ratio.as_ref().map_or(0.0, |r| r.to_f64().unwrap_or(f64::MAX));
                // minimize |u_i + k u_j|² + |v_j - k·r·v_i|²
                let num = -dot(ui.iter().cloned(), uj.iter().cloned()) + rf * dot(vj.iter().cloned(), vi.iter().cloned());
                let den = norm2(uj.iter().cloned()) + rf * rf * norm2(vi.iter().cloned());
                if den == 0.0 || !(num / den).is_finite() {
                    continue;
                }
                let k = (num / den).round();
                if k == 0.0 || k.abs() > 1e15 {
                    continue;
                }
                let gain = -(2.0 * k * (dot(ui.iter().cloned(), uj.iter().cloned()) - rf * dot(vj.iter().cloned(), vi.iter().cloned()))
                    + k * k * den);
                if gain <= 0.0 {
                    continue;
                }
                let kt = T::from_f64(k).expect("rounded multiplier fits");
                left.add_row_multiple(i, j, &kt);
                if let Some(r) = ratio {
                    right.add_col_multiple(j, i, &(-(kt * r)));
                }
                improved = true;
            }
        }
        // column moves on R: col_j += k·col_i, compensated in L when i < rank
        for j in 0..rc {
            for i in (0..rc).filter(|&i| i != j && (i >= rank || (j < i && i < rank))) {
                let (vi, vj) = (rcol(right, i), rcol(right, j));
                let ratio = if i < rank { Some(d[i].clone() / d[j].clone()) } else { None };
                let (ui, uj) = match &ratio {
                    Some(_) => (lrow(left, i), lrow(left, j)),
                    None => (Vec::new(), Vec::new()),
                };
                let rf = ratio.as_ref().map_or(0.0, |r| r.to_f64().unwrap_or(f64::MAX));
                // minimize |v_j + k v_i|² + |u_i - k·r·u_j|²
                let num = -dot(vj.iter().cloned(), vi.iter().cloned()) + rf * dot(ui.iter().cloned(), uj.iter().cloned());
                let den = norm2(vi.iter().cloned()) + rf * rf * norm2(uj.iter().cloned());
                if den == 0.0 || !(num / den).is_finite() {
                    continue;
                }
                let k = (num / den).round();
                if k == 0.0 || k.abs() > 1e15 {
                    continue;
                }
                let gain = -(2.0 * k * (dot(vj.iter().cloned(), vi.iter().cloned()) - rf * dot(ui.iter().cloned(), uj.iter().cloned()))
                    + k * k * den);
                if gain <= 0.0 {
                    continue;
                }
                let kt = T::from_f64(k).expect("rounded multiplier fits");
                right.add_col_multiple(j, i, &kt);
                if let Some(r) = ratio {
                    left.add_row_multiple(i, j, &(-(kt * r)));
                }
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
}

/// Row Hermite form in place, recording the row operations in `acc`.
/// Pivots are positive and entries above each pivot lie in `[0, pivot)`.
fn row_hermite<T: Scalar>(a: &mut IntMatrix<T>, mut acc: Option<&mut IntMatrix<T>>) {
    let (rows, cols) = (a.rows(), a.cols());
    macro_rules! row_op {
        (swap $x:expr, $y:expr) => {{
            a.swap_rows($x, $y);
            if let Some(l) = acc.as_deref_mut() {
                l.swap_rows($x, $y);
            }
        }};
        (add $dst:expr, $src:expr, $f:expr) => {{
            a.add_row_multiple($dst, $src, $f);
            if let Some(l) = acc.as_deref_mut() {
                l.add_row_multiple($dst, $src, $f);
            }
        }};
        (neg $x:expr) => {{
            a.negate_row($x);
            if let Some(l) = acc.as_deref_mut() {
                l.negate_row($x);
            }
        }};
    }
    let mut p = 0;
    for c in 0..cols {
        if p == rows {
            break;
        }
        while let Some(pi) = min_abs_row(a, c, p..rows) {
            row_op!(swap p, pi);
            let pivot = a[(p, c)].clone();
            let mut done = true;
            for i in p + 1..rows {
                if !a[(i, c)].is_zero() {
                    let q = -nearest_quotient(&a[(i, c)], &pivot);
                    row_op!(add i, p, &q);
                    done &= a[(i, c)].is_zero();
                }
            }
            if done {
                break;
            }
        }
        if a[(p, c)].is_zero() {
            continue;
        }
        if a[(p, c)].is_negative() {
            row_op!(neg p);
        }
        let pivot = a[(p, c)].clone();
        for i in 0..p {
            let q = -a[(i, c)].div_floor(&pivot);
            if !q.is_zero() {
                row_op!(add i, p, &q);
            }
        }
        p += 1;
    }
}

/// `x / p` rounded to the nearest integer, so the remainder has absolute
/// value at most `|p| / 2`.
fn nearest_quotient<T: Scalar>(x: &T, p: &T) -> T {
    let q = x.div_floor(p);
    let r = x.clone() - q.clone() * p.clone();
    if (r.clone() + r).abs() > p.abs() {
        q + T::one()
    } else {
        q
    }
}

fn min_abs_row<T: Scalar>(a: &IntMatrix<T>, col: usize, rows: std::ops::Range<usize>) -> Option<usize> {
    let mut best: Option<(usize, T)> = None;
    for i in rows {
        let v = a[(i, col)].abs();
        if !v.is_zero() && best.as_ref().is_none_or(|(_, b)| v < *b) {
            best = Some((i, v));
        }
    }
    best.map(|(i, _)| i)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix<i64>) -> SmithForm<i64> {
        let s = smith_normal_form(m);
        assert_eq!(&(&s.left * m) * &s.right, s.diag);
        assert!(s.diag.is_diagonal());
        assert_eq!(s.left.determinant().abs(), 1);
        assert_eq!(s.right.determinant().abs(), 1);
        s
    }

    #[test]
    fn identity_is_fixed() {
        let s = check(&IntMatrix::identity(3));
        assert_eq!(s.diag, IntMatrix::identity(3));
    }

    #[test]
    fn coprime_diagonal_merges() {
        let s = check(&IntMatrix::from_i64_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.diagonal_entries(), vec![1, 6]);
    }

    #[test]
    fn upper_triangular_example() {
        // determinantal divisors: gcd of entries is 2 and |det| is 4, so d = (2, 2)
        let s = check(&IntMatrix::from_i64_rows(&[vec![2, 4], vec![0, 2]]));
        assert_eq!(s.diagonal_entries(), vec![2, 2]);
    }

    #[test]
    fn empty_and_rectangular() {
        let s = smith_normal_form(&IntMatrix::<i64>::zeros(0, 0));
        assert!(s.diagonal_entries().is_empty());
        let s = check(&IntMatrix::from_i64_rows(&[vec![4, 6], vec![6, 9], vec![2, 3]]));
        assert_eq!(s.diagonal_entries(), vec![1, 0]);
        let s = check(&IntMatrix::from_i64_rows(&[vec![0, 0, 0]]));
        assert_eq!(s.diagonal_entries(), vec![0]);
    }
}
