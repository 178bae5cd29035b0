//! Exact integer linear algebra: Smith normal form with transforms, and the
//! lattice operations built on it (membership, kernels, intersections).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Matrix = Vec<Vec<BigInt>>;

pub fn from_i64(rows: &[Vec<i64>]) -> Matrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

pub fn mul(a: &Matrix, b: &Matrix, inner: usize, cols: usize) -> Matrix {
    a.iter()
        .map(|row| (0..cols).map(|j| (0..inner).fold(BigInt::zero(), |acc, k| acc + &row[k] * &b[k][j])).collect())
        .collect()
}

/// Row vector times matrix.
pub fn vec_mul(v: &[BigInt], m: &Matrix, cols: usize) -> Vec<BigInt> {
    (0..cols).map(|j| v.iter().zip(m.iter()).fold(BigInt::zero(), |acc, (x, row)| acc + x * &row[j])).collect()
}

/// `U · M · V = D` with `U`, `V` unimodular and `D` diagonal, each nonzero
/// diagonal entry positive and dividing the next.
#[derive(Debug, Clone)]
pub struct Smith {
    pub rows: usize,
    pub cols: usize,
    pub u: Matrix,
    pub v: Matrix,
    pub d: Matrix,
    /// Nonzero diagonal entries, in order.
    pub diagonal: Vec<BigInt>,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }
}

fn row_axpy(m: &mut Matrix, target: usize, src: usize, q: &BigInt) {
    // row[target] -= q * row[src]
    let src_row = m[src].clone();
    for (t, s) in m[target].iter_mut().zip(src_row.iter()) {
        *t -= q * s;
    }
}

fn col_axpy(m: &mut Matrix, target: usize, src: usize, q: &BigInt) {
    for row in m.iter_mut() {
        let s = row[src].clone();
        row[target] -= q * s;
    }
}

fn swap_cols(m: &mut Matrix, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

pub fn smith(m: &Matrix, cols: usize) -> Smith {
    let rows = m.len();
    let mut d = m.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !d[i][j].is_zero() && best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut d, t, pj);
        swap_cols(&mut v, t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if d[i][t].is_zero() {
                    continue;
                }
                let q = d[i][t].div_floor(&d[t][t]);
                row_axpy(&mut d, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                if !d[i][t].is_zero() {
                    d.swap(t, i);
                    u.swap(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if d[t][j].is_zero() {
                    continue;
                }
                let q = d[t][j].div_floor(&d[t][t]);
                col_axpy(&mut d, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                if !d[t][j].is_zero() {
                    swap_cols(&mut d, t, j);
                    swap_cols(&mut v, t, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // divisibility: fold an offending row into the pivot row
            let mut offender = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(&d[i][j] % &d[t][t]).is_zero() {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
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
            for x in d[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
        t += 1;
    }
    let diagonal = (0..t).map(|i| d[i][i].clone()).collect();
    Smith { rows, cols, u, v, d, diagonal }
}

/// Solves `x · M = target` over the integers, where `M` has the given Smith form.
pub fn solve(s: &Smith, target: &[BigInt]) -> Option<Vec<BigInt>> {
    let f = vec_mul(target, &s.v, s.cols);
    let r = s.rank();
    let mut y = vec![BigInt::zero(); s.rows];
    for i in 0..s.cols {
        if i < r {
            let (q, rem) = f[i].div_rem(&s.diagonal[i]);
            if !rem.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !f[i].is_zero() {
            return None;
        }
    }
    Some(vec_mul(&y, &s.u, s.rows))
}

/// Basis of `{x : x · M = 0}` as rows.
pub fn left_kernel(m: &Matrix, cols: usize) -> Matrix {
    let s = smith(m, cols);
    s.u[s.rank()..].to_vec()
}

/// A sublattice of `Z^n` given by generating rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    pub dim: usize,
    pub gens: Matrix,
}

impl Lattice {
    pub fn new(dim: usize, gens: Matrix) -> Self {
        let gens = gens.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect();
        Lattice { dim, gens }
    }

    pub fn from_i64(dim: usize, gens: &[Vec<i64>]) -> Self {
        Lattice::new(dim, from_i64(gens))
    }

    pub fn rank(&self) -> usize {
        if self.gens.is_empty() {
            0
        } else {
            smith(&self.gens, self.dim).rank()
        }
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Some `x` with `x · gens = v`.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        if v.iter().all(|x| x.is_zero()) {
            return Some(vec![BigInt::zero(); self.gens.len()]);
        }
        if self.gens.is_empty() {
            return None;
        }
        solve(&smith(&self.gens, self.dim), v)
    }

    pub fn intersect(&self, other: &Lattice) -> Lattice {
        if self.gens.is_empty() || other.gens.is_empty() {
            return Lattice::new(self.dim, Vec::new());
        }
        let mut stacked = self.gens.clone();
        stacked.extend(other.gens.iter().map(|r| r.iter().map(|x| -x).collect::<Vec<_>>()));
        let k = left_kernel(&stacked, self.dim);
        let a = self.gens.len();
        let gens = k.iter().map(|x| vec_mul(&x[..a], &self.gens, self.dim)).collect();
        Lattice::new(self.dim, gens).reduced()
    }

    /// Replaces the generators by a basis (nonzero rows of the Hermite-style echelon form).
    pub fn reduced(&self) -> Lattice {
        if self.gens.is_empty() {
            return self.clone();
        }
        let s = smith(&self.gens, self.dim);
        // rows of D·V^{-1} restricted to the rank span the same lattice as U·M = D·V^{-1}
        let um = mul(&s.u, &self.gens, self.gens.len(), self.dim);
        Lattice::new(self.dim, um[..s.rank()].to_vec())
    }

    pub fn gens_i64(&self) -> Option<Vec<Vec<i64>>> {
        self.gens.iter().map(|r| r.iter().map(|x| x.to_i64()).collect()).collect()
    }
}

/// Row-style Hermite normal form: echelon rows with positive pivots and the
/// entries above each pivot reduced into `[0, pivot)`. Zero rows are dropped.
pub fn hnf(rows: &Matrix, cols: usize) -> Matrix {
    let mut m: Matrix = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row == m.len() {
            break;
        }
        loop {
            // bring the smallest nonzero entry of this column to the pivot row
            let mut best: Option<usize> = None;
            for i in pivot_row..m.len() {
                if !m[i][col].is_zero() && best.is_none_or(|b| m[i][col].abs() < m[b][col].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            m.swap(pivot_row, b);
            let mut done = true;
            for i in pivot_row + 1..m.len() {
                if m[i][col].is_zero() {
                    continue;
                }
                let q = m[i][col].div_floor(&m[pivot_row][col]);
                row_axpy(&mut m, i, pivot_row, &q);
                if !m[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if pivot_row < m.len() && !m[pivot_row][col].is_zero() {
            if m[pivot_row][col].is_negative() {
                for x in m[pivot_row].iter_mut() {
                    *x = -x.clone();
                }
            }
            for i in 0..pivot_row {
                let q = m[i][col].div_floor(&m[pivot_row][col]);
                row_axpy(&mut m, i, pivot_row, &q);
            }
            pivot_row += 1;
        }
    }
    m.truncate(pivot_row);
    m
}

/// Canonical representative of `v` modulo the lattice with Hermite basis `h`.
pub fn reduce_mod(h: &Matrix, v: &[BigInt]) -> Vec<BigInt> {
    let mut v = v.to_vec();
    for row in h {
        let Some(p) = row.iter().position(|x| !x.is_zero()) else { continue };
        let q = v[p].div_floor(&row[p]);
        for (x, r) in v.iter_mut().zip(row.iter()) {
            *x -= &q * r;
        }
    }
    v
}
