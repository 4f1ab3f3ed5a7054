//! Dense integer matrices, Smith diagonalization and exact integer solves.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = BigInt::from(*v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut s = BigInt::zero();
                for (j, xj) in x.iter().enumerate() {
                    let a = &self.data[i * self.cols + j];
                    if !a.is_zero() && !xj.is_zero() {
                        s += a * xj;
                    }
                }
                s
            })
            .collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] -= q * row[src]
    fn sub_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let s = &self.data[src * self.cols + j];
            if !s.is_zero() {
                let v = s * q;
                self.data[dst * self.cols + j] -= v;
            }
        }
    }

    /// col[dst] -= q * col[src]
    fn sub_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let s = &self.data[i * self.cols + src];
            if !s.is_zero() {
                let v = s * q;
                self.data[i * self.cols + dst] -= v;
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = &mut self.data[r * self.cols + j];
            *v = -std::mem::take(v);
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// `U A V = D` with `U`, `V` unimodular and `D` diagonal with nonnegative
/// entries; `diagonal` holds the nonzero entries, so its length is the rank.
/// Divisibility along the diagonal is not enforced.
#[derive(Clone, Debug)]
pub struct Diagonalization {
    pub u: Option<IntMatrix>,
    pub v: Option<IntMatrix>,
    pub diagonal: Vec<BigInt>,
}

pub fn diagonalize(a: &IntMatrix, track: bool) -> Diagonalization {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = track.then(|| IntMatrix::identity(m));
    let mut v = track.then(|| IntMatrix::identity(n));
    let mut diagonal = Vec::new();
    for t in 0..m.min(n) {
        // smallest nonzero entry in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = &d[(i, j)];
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < d[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap_rows(t, pi);
        if let Some(u) = u.as_mut() {
            u.swap_rows(t, pi);
        }
        d.swap_cols(t, pj);
        if let Some(v) = v.as_mut() {
            v.swap_cols(t, pj);
        }
        loop {
            let mut changed = false;
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = d[(i, t)].div_floor(&d[(t, t)]);
                d.sub_row(i, t, &q);
                if let Some(u) = u.as_mut() {
                    u.sub_row(i, t, &q);
                }
                if !d[(i, t)].is_zero() {
                    d.swap_rows(t, i);
                    if let Some(u) = u.as_mut() {
                        u.swap_rows(t, i);
                    }
                    changed = true;
                }
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = d[(t, j)].div_floor(&d[(t, t)]);
                d.sub_col(j, t, &q);
                if let Some(v) = v.as_mut() {
                    v.sub_col(j, t, &q);
                }
                if !d[(t, j)].is_zero() {
                    d.swap_cols(t, j);
                    if let Some(v) = v.as_mut() {
                        v.swap_cols(t, j);
                    }
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            if let Some(u) = u.as_mut() {
                u.negate_row(t);
            }
        }
        diagonal.push(d[(t, t)].clone());
    }
    Diagonalization { u, v, diagonal }
}

/// Integer solution of `A x = b`, or `None` when none exists.
pub fn solve(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(b.len(), a.rows);
    let dz = diagonalize(a, true);
    let (u, v) = (dz.u.expect("tracked"), dz.v.expect("tracked"));
    let c = u.mul_vec(b);
    let rank = dz.diagonal.len();
    if c[rank..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let mut y = vec![BigInt::zero(); a.cols];
    for (i, di) in dz.diagonal.iter().enumerate() {
        let (q, r) = c[i].div_rem(di);
        if !r.is_zero() {
            return None;
        }
        y[i] = q;
    }
    let x = v.mul_vec(&y);
    debug_assert_eq!(a.mul_vec(&x), b);
    Some(x)
}

/// Invariant factors `d_1 | d_2 | ...` (all positive) of the cokernel-relevant
/// diagonal.
pub fn invariant_factors(a: &IntMatrix) -> Vec<BigInt> {
    let mut d = diagonalize(a, false).diagonal;
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
    d
}

pub fn rank(a: &IntMatrix) -> usize {
    diagonalize(a, false).diagonal.len()
}

/// Sparse row of an integer system: column → nonzero coefficient.
pub type SparseRow = BTreeMap<usize, BigInt>;

/// Integer solution of a sparse system `rows · x = rhs` in `ncols` unknowns.
///
/// Unit pivots are eliminated first (unimodular, so integrality is kept);
/// the remaining block is solved by [`solve`]. Unknowns never used as pivots
/// are set to zero.
pub fn solve_sparse(rows: &[SparseRow], rhs: &[BigInt], ncols: usize) -> Option<Vec<BigInt>> {
    assert_eq!(rows.len(), rhs.len());
    let mut rows: Vec<Option<(SparseRow, BigInt)>> = rows.iter().cloned().zip(rhs.iter().cloned()).map(|(r, b)| Some((r, b))).collect();
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); ncols];
    for (i, r) in rows.iter().enumerate() {
        for &j in r.as_ref().expect("fresh").0.keys() {
            col_rows[j].insert(i);
        }
    }
    // (pivot column, row) in elimination order
    let mut pivots: Vec<(usize, SparseRow, BigInt)> = Vec::new();
    loop {
        let mut best: Option<(usize, usize, usize)> = None; // (cost, row, col)
        for (i, r) in rows.iter().enumerate() {
            let Some((row, _)) = r else { continue };
            for (&j, v) in row {
                if v.abs().is_one() {
                    let cost = (row.len() - 1) * (col_rows[j].len() - 1);
                    if best.is_none_or(|(c, _, _)| cost < c) {
                        best = Some((cost, i, j));
                    }
                }
            }
            if best.is_some_and(|(c, _, _)| c == 0) {
                break;
            }
        }
        let Some((_, pi, pj)) = best else { break };
        let (prow, prhs) = rows[pi].take().expect("live row");
        for &j in prow.keys() {
            col_rows[j].remove(&pi);
        }
        let pv = prow[&pj].clone();
        let others: Vec<usize> = col_rows[pj].iter().copied().collect();
        for i in others {
            let (row, b) = rows[i].as_mut().expect("live row");
            // row -= (row[pj] / pv) * prow, exact since |pv| = 1
            let f = &row[&pj] * &pv;
            for (&j, v) in &prow {
                let e = row.entry(j).or_insert_with(BigInt::zero);
                *e -= &f * v;
                if e.is_zero() {
                    row.remove(&j);
                    col_rows[j].remove(&i);
                } else {
                    col_rows[j].insert(i);
                }
            }
            *b -= &f * &prhs;
        }
        pivots.push((pj, prow, prhs));
    }
    let rest: Vec<(SparseRow, BigInt)> = rows.into_iter().flatten().collect();
    let mut x = vec![BigInt::zero(); ncols];
    let nonempty: Vec<&(SparseRow, BigInt)> = rest.iter().filter(|(r, _)| !r.is_empty()).collect();
    if rest.iter().any(|(r, b)| r.is_empty() && !b.is_zero()) {
        return None;
    }
    if !nonempty.is_empty() {
        let cols: Vec<usize> = nonempty.iter().flat_map(|(r, _)| r.keys().copied()).collect::<BTreeSet<_>>().into_iter().collect();
        let mut a = IntMatrix::zeros(nonempty.len(), cols.len());
        for (i, (r, _)) in nonempty.iter().enumerate() {
            for (j, v) in r {
                let c = cols.binary_search(j).expect("column present");
                a[(i, c)] = v.clone();
            }
        }
        let b: Vec<BigInt> = nonempty.iter().map(|(_, b)| b.clone()).collect();
        let y = solve(&a, &b)?;
        for (c, v) in cols.into_iter().zip(y) {
            x[c] = v;
        }
    }
    for (pj, prow, prhs) in pivots.into_iter().rev() {
        let mut acc = prhs;
        for (&j, v) in &prow {
            if j != pj {
                acc -= v * &x[j];
            }
        }
        // pivot coefficient is ±1
        x[pj] = acc * &prow[&pj];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_is_unimodular_conjugate() {
        let a = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let dz = diagonalize(&a, true);
        let prod = dz.u.as_ref().unwrap().mul(&a).mul(dz.v.as_ref().unwrap());
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert!(prod[(i, j)].is_zero());
                }
            }
        }
        let f: Vec<i64> = invariant_factors(&a).iter().map(|x| x.try_into().unwrap()).collect();
        assert_eq!(f, vec![2, 6, 12]);
    }

    #[test]
    fn solve_exact() {
        let a = IntMatrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 1]]);
        let b = vec![BigInt::from(3), BigInt::from(-2)];
        let x = solve(&a, &b).unwrap();
        assert_eq!(a.mul_vec(&x), b);
        let a = IntMatrix::from_rows(&[vec![2, 0]]);
        assert!(solve(&a, &[BigInt::from(1)]).is_none());
        let a = IntMatrix::from_rows(&[vec![1], vec![1]]);
        assert!(solve(&a, &[BigInt::from(1), BigInt::from(2)]).is_none());
    }

    #[test]
    fn sparse_matches_dense() {
        let dense = [vec![1, 1, 0, 2], vec![0, 1, 1, 0], vec![2, 0, 2, 4], vec![0, 0, 3, 3]];
        let rows: Vec<SparseRow> =
            dense.iter().map(|r| r.iter().enumerate().filter(|(_, v)| **v != 0).map(|(j, v)| (j, BigInt::from(*v))).collect()).collect();
        let a = IntMatrix::from_rows(&dense);
        let x0: Vec<BigInt> = [1, -2, 3, 5].iter().map(|v| BigInt::from(*v)).collect();
        let b = a.mul_vec(&x0);
        let x = solve_sparse(&rows, &b, 4).unwrap();
        assert_eq!(a.mul_vec(&x), b);
        let mut bad = b.clone();
        bad[3] += 1;
        assert_eq!(solve_sparse(&rows, &bad, 4).is_some(), solve(&a, &bad).is_some());
    }
}
