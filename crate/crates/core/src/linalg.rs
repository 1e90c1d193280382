//! Exact integer linear algebra: dense matrices, Smith normal form with
//! optional transform tracking, sparse row-lattice echelon bases and integer
//! system solving.
//!
//! All arithmetic is checked; an overflow surfaces as [`Error::Overflow`]
//! instead of a silently wrong torsion coefficient.

use crate::arith::{ext_gcd, gcd, inv_mod};
use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;

#[inline]
fn mul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

#[inline]
fn add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow)
}

/// `a - q*b`, checked.
#[inline]
/// Representative of `x mod n` in `(-n/2, n/2]`.
fn sym_mod(x: i64, n: i64) -> i64 {
    let r = x.rem_euclid(n);
    if r > n / 2 {
        r - n
    } else {
        r
    }
}

fn sub_mul(a: i64, q: i64, b: i64) -> Result<i64> {
    a.checked_sub(mul(q, b)?).ok_or(Error::Overflow)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            m.row_mut(i).copy_from_slice(row);
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<i64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        IntMatrix { rows, cols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [i64] {
        let c = self.cols;
        &mut self.data[i * c..(i + 1) * c]
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                let orow = other.row(k);
                let base = i * out.cols;
                for (j, &b) in orow.iter().enumerate() {
                    if b != 0 {
                        out.data[base + j] = add(out.data[base + j], mul(a, b)?)?;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[i64]) -> Result<Vec<i64>> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![0i64; self.rows];
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = 0i64;
            for (a, b) in self.row(i).iter().zip(v) {
                if *a != 0 && *b != 0 {
                    acc = add(acc, mul(*a, *b)?)?;
                }
            }
            *o = acc;
        }
        Ok(out)
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn determinant(&self) -> Result<i64> {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Ok(1);
        }
        let mut a: Vec<Vec<i128>> = (0..n)
            .map(|i| self.row(i).iter().map(|&x| x as i128).collect())
            .collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&i| a[i][k] != 0) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(0),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = a[i][j]
                        .checked_mul(a[k][k])
                        .and_then(|x| x.checked_sub(a[i][k].checked_mul(a[k][j])?))
                        .ok_or(Error::Overflow)?;
                    a[i][j] = v / prev;
                }
            }
            prev = a[k][k];
        }
        let d = sign * a[n - 1][n - 1];
        i64::try_from(d).map_err(|_| Error::Overflow)
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && matches!(self.determinant(), Ok(1) | Ok(-1))
    }

    /// Inverse of a unimodular matrix, computed through its Smith form.
    pub fn unimodular_inverse(&self) -> Result<IntMatrix> {
        if self.rows != self.cols {
            return Err(Error::PreconditionFailed("inverse of non-square matrix".into()));
        }
        let s = smith(self, Track::all())?;
        if s.rank != self.rows || s.diag.iter().any(|&d| d != 1) {
            return Err(Error::PreconditionFailed("matrix is not unimodular".into()));
        }
        // U A V = I  =>  A^{-1} = V U
        s.right.unwrap().mul(&s.left.unwrap())
    }

    pub fn block_diagonal(blocks: &[&IntMatrix]) -> IntMatrix {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = IntMatrix::zeros(r, c);
        let (mut ro, mut co) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out[(ro + i, co + j)] = b[(i, j)];
                }
            }
            ro += b.rows;
            co += b.cols;
        }
        out
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> IntMatrix {
        let mut out = IntMatrix::zeros(rows.len(), cols.len());
        for (oi, i) in rows.clone().enumerate() {
            for (oj, j) in cols.clone().enumerate() {
                out[(oi, oj)] = self[(i, j)];
            }
        }
        out
    }

    fn reduce_row(&mut self, i: usize, n: i64) {
        for x in self.row_mut(i) {
            *x = sym_mod(*x, n);
        }
    }

    fn reduce_col(&mut self, j: usize, n: i64) {
        for i in 0..self.rows {
            let x = &mut self.data[i * self.cols + j];
            *x = sym_mod(*x, n);
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let c = self.cols;
        for j in 0..c {
            self.data.swap(a * c + j, b * c + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            let base = i * self.cols;
            self.data.swap(base + a, base + b);
        }
    }

    /// row[dst] -= q * row[src]
    fn row_sub(&mut self, dst: usize, q: i64, src: usize) -> Result<()> {
        if q == 0 {
            return Ok(());
        }
        let c = self.cols;
        for j in 0..c {
            let s = self.data[src * c + j];
            if s != 0 {
                let d = &mut self.data[dst * c + j];
                *d = sub_mul(*d, q, s)?;
            }
        }
        Ok(())
    }

    /// col[dst] -= q * col[src]
    fn col_sub(&mut self, dst: usize, q: i64, src: usize) -> Result<()> {
        if q == 0 {
            return Ok(());
        }
        let c = self.cols;
        for i in 0..self.rows {
            let s = self.data[i * c + src];
            if s != 0 {
                let d = &mut self.data[i * c + dst];
                *d = sub_mul(*d, q, s)?;
            }
        }
        Ok(())
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.row_mut(i) {
            *x = -*x;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let c = self.cols;
            self.data[i * c + j] = -self.data[i * c + j];
        }
    }

    /// Replace rows (a, b) by `m * (row a; row b)` for a 2x2 matrix m.
    fn mix_rows(&mut self, a: usize, b: usize, m: [[i64; 2]; 2]) -> Result<()> {
        let c = self.cols;
        for j in 0..c {
            let x = self.data[a * c + j];
            let y = self.data[b * c + j];
            self.data[a * c + j] = add(mul(m[0][0], x)?, mul(m[0][1], y)?)?;
            self.data[b * c + j] = add(mul(m[1][0], x)?, mul(m[1][1], y)?)?;
        }
        Ok(())
    }

    /// Replace columns (a, b) by `(col a, col b) * m`.
    fn mix_cols(&mut self, a: usize, b: usize, m: [[i64; 2]; 2]) -> Result<()> {
        let c = self.cols;
        for i in 0..self.rows {
            let x = self.data[i * c + a];
            let y = self.data[i * c + b];
            self.data[i * c + a] = add(mul(x, m[0][0])?, mul(y, m[1][0])?)?;
            self.data[i * c + b] = add(mul(x, m[0][1])?, mul(y, m[1][1])?)?;
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

/// Which transforms `smith` should accumulate.
#[derive(Clone, Copy, Debug, Default)]
pub struct Track {
    pub left: bool,
    pub left_inv: bool,
    pub right: bool,
    pub right_inv: bool,
}

impl Track {
    pub fn none() -> Self {
        Track::default()
    }
    pub fn all() -> Self {
        Track {
            left: true,
            left_inv: true,
            right: true,
            right_inv: true,
        }
    }
    pub fn right_only() -> Self {
        Track {
            right: true,
            right_inv: true,
            ..Track::default()
        }
    }
}

/// `left * A * right = diag(diag[0..rank], 0, ...)` with `diag[i] | diag[i+1]`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diag: Vec<i64>,
    pub rank: usize,
    pub left: Option<IntMatrix>,
    pub left_inv: Option<IntMatrix>,
    pub right: Option<IntMatrix>,
    pub right_inv: Option<IntMatrix>,
}

impl SmithForm {
    /// Invariant factors greater than one: the torsion of the cokernel.
    pub fn torsion(&self) -> Vec<i64> {
        self.diag.iter().copied().filter(|&d| d > 1).collect()
    }
}

struct SmithCalc {
    a: IntMatrix,
    u: Option<IntMatrix>,
    u_inv: Option<IntMatrix>,
    v: Option<IntMatrix>,
    v_inv: Option<IntMatrix>,
    modulus: Option<i64>,
}

impl SmithCalc {
    fn reduce_after_row_op(&mut self, dst: usize, src: usize) {
        let Some(n) = self.modulus else { return };
        self.a.reduce_row(dst, n);
        if let Some(u) = &mut self.u {
            u.reduce_row(dst, n);
        }
        if let Some(ui) = &mut self.u_inv {
            ui.reduce_col(src, n);
        }
    }

    fn reduce_after_col_op(&mut self, dst: usize, src: usize) {
        let Some(n) = self.modulus else { return };
        self.a.reduce_col(dst, n);
        if let Some(v) = &mut self.v {
            v.reduce_col(dst, n);
        }
        if let Some(vi) = &mut self.v_inv {
            vi.reduce_row(src, n);
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        if let Some(u) = &mut self.u {
            u.swap_rows(i, j);
        }
        if let Some(ui) = &mut self.u_inv {
            ui.swap_cols(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        if let Some(v) = &mut self.v {
            v.swap_cols(i, j);
        }
        if let Some(vi) = &mut self.v_inv {
            vi.swap_rows(i, j);
        }
    }

    /// row[dst] -= q row[src]
    fn row_sub(&mut self, dst: usize, q: i64, src: usize) -> Result<()> {
        self.a.row_sub(dst, q, src)?;
        if let Some(u) = &mut self.u {
            u.row_sub(dst, q, src)?;
        }
        if let Some(ui) = &mut self.u_inv {
            // inverse op: col[src] += q col[dst]
            ui.col_sub(src, -q, dst)?;
        }
        self.reduce_after_row_op(dst, src);
        Ok(())
    }

    /// col[dst] -= q col[src]
    fn col_sub(&mut self, dst: usize, q: i64, src: usize) -> Result<()> {
        self.a.col_sub(dst, q, src)?;
        if let Some(v) = &mut self.v {
            v.col_sub(dst, q, src)?;
        }
        if let Some(vi) = &mut self.v_inv {
            // inverse op: row[src] += q row[dst]
            vi.row_sub(src, -q, dst)?;
        }
        self.reduce_after_col_op(dst, src);
        Ok(())
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        if let Some(u) = &mut self.u {
            u.negate_row(i);
        }
        if let Some(ui) = &mut self.u_inv {
            ui.negate_col(i);
        }
    }

    fn find_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, i64)> = None;
        for i in t..self.a.rows {
            let row = self.a.row(i);
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 {
                    let ax = x.abs();
                    if best.is_none_or(|(_, _, b)| ax < b) {
                        best = Some((i, j, ax));
                        if ax == 1 {
                            return Some((i, j));
                        }
                    }
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    fn diagonalize(&mut self) -> Result<usize> {
        let (m, n) = (self.a.rows, self.a.cols);
        let mut t = 0;
        while t < m.min(n) {
            let Some((pi, pj)) = self.find_pivot(t) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let p = self.a[(t, t)];
                let mut residue = false;
                for i in t + 1..m {
                    let x = self.a[(i, t)];
                    if x != 0 {
                        self.row_sub(i, x / p, t)?;
                        if self.a[(i, t)] != 0 {
                            residue = true;
                        }
                    }
                }
                for j in t + 1..n {
                    let x = self.a[(t, j)];
                    if x != 0 {
                        self.col_sub(j, x / p, t)?;
                        if self.a[(t, j)] != 0 {
                            residue = true;
                        }
                    }
                }
                if !residue {
                    break;
                }
                // bring the smallest remainder in row/column t to the pivot
                let mut best = (t, t, self.a[(t, t)].abs());
                for i in t + 1..m {
                    let x = self.a[(i, t)].abs();
                    if x != 0 && x < best.2 {
                        best = (i, t, x);
                    }
                }
                for j in t + 1..n {
                    let x = self.a[(t, j)].abs();
                    if x != 0 && x < best.2 {
                        best = (t, j, x);
                    }
                }
                self.swap_rows(t, best.0);
                self.swap_cols(t, best.1);
            }
            if self.a[(t, t)] < 0 {
                self.negate_row(t);
            }
            t += 1;
        }
        Ok(t)
    }

    /// Turn diag(a, b) at positions (i, i), (j, j) into diag(gcd, lcm).
    fn fix_pair(&mut self, i: usize, j: usize) -> Result<()> {
        let a = self.a[(i, i)];
        let b = self.a[(j, j)];
        if b % a == 0 {
            return Ok(());
        }
        let (g, s, t) = ext_gcd(a, b);
        let u2 = [[s, t], [-b / g, a / g]];
        let u2_inv = [[a / g, -t], [b / g, s]];
        let v2 = [[1, mul(-t, b / g)?], [1, mul(s, a / g)?]];
        let v2_inv = [[mul(s, a / g)?, mul(t, b / g)?], [-1, 1]];
        self.a[(i, i)] = g;
        self.a[(j, j)] = mul(a / g, b)?;
        if let Some(u) = &mut self.u {
            u.mix_rows(i, j, u2)?;
        }
        if let Some(ui) = &mut self.u_inv {
            ui.mix_cols(i, j, u2_inv)?;
        }
        if let Some(v) = &mut self.v {
            v.mix_cols(i, j, v2)?;
        }
        if let Some(vi) = &mut self.v_inv {
            vi.mix_rows(i, j, v2_inv)?;
        }
        if self.modulus.is_some() {
            self.reduce_after_row_op(i, i);
            self.reduce_after_row_op(j, j);
            self.reduce_after_col_op(i, i);
            self.reduce_after_col_op(j, j);
            // the diagonal holds divisors of the modulus; keep them as such
            self.a[(i, i)] = g;
            self.a[(j, j)] = a / g * b;
        }
        Ok(())
    }

    /// Multiply row `t` by the unit `u` modulo the modulus.
    fn scale_row(&mut self, t: usize, u: i64, u_inv: i64) -> Result<()> {
        let n = self.modulus.expect("modular scaling");
        for x in self.a.row_mut(t) {
            *x = sym_mod(mul(*x, u)?, n);
        }
        if let Some(um) = &mut self.u {
            for x in um.row_mut(t) {
                *x = sym_mod(mul(*x, u)?, n);
            }
        }
        if let Some(ui) = &mut self.u_inv {
            for i in 0..ui.rows {
                let x = &mut ui[(i, t)];
                *x = sym_mod(mul(*x, u_inv)?, n);
            }
        }
        Ok(())
    }
}

/// A unit `u` modulo `n` and its inverse with `u * d = gcd(d, n) (mod n)`.
fn unit_normalizer(d: i64, n: i64) -> (i64, i64, i64) {
    let d = d.rem_euclid(n);
    let g = gcd(d, n);
    let (dd, m) = (d / g, n / g);
    // want u ≡ dd^{-1} (mod m) with gcd(u, n) = 1
    let mut u = inv_mod(dd.rem_euclid(m) as u64, m as u64).expect("coprime cofactor") as i64;
    while gcd(u, n) != 1 {
        u += m;
    }
    let ui = inv_mod(u.rem_euclid(n) as u64, n as u64).expect("unit") as i64;
    (g, u, ui)
}

/// Smith normal form with deterministic pivoting (least absolute value,
/// first in row-major order).
pub fn smith(a: &IntMatrix, track: Track) -> Result<SmithForm> {
    let (m, n) = (a.rows, a.cols);
    let mut calc = SmithCalc {
        a: a.clone(),
        u: track.left.then(|| IntMatrix::identity(m)),
        u_inv: track.left_inv.then(|| IntMatrix::identity(m)),
        v: track.right.then(|| IntMatrix::identity(n)),
        v_inv: track.right_inv.then(|| IntMatrix::identity(n)),
        modulus: None,
    };
    let rank = calc.diagonalize()?;
    for i in 0..rank {
        for j in i + 1..rank {
            calc.fix_pair(i, j)?;
        }
    }
    let diag = (0..rank).map(|i| calc.a[(i, i)]).collect();
    Ok(SmithForm {
        diag,
        rank,
        left: calc.u,
        left_inv: calc.u_inv,
        right: calc.v,
        right_inv: calc.v_inv,
    })
}

/// Smith form of the lattice `rowspan(A) + n Z^cols`, computed with all
/// entries (and transforms) reduced modulo `n`.
///
/// The transforms satisfy `left * A * right = diag (mod n)` and are
/// invertible modulo `n`; `diag` is a divisibility chain of divisors of `n`
/// (an entry `n` stands for a free direction), one per pivot. Factors strictly
/// between 1 and `n` form the torsion of `Z^cols / rowspan(A)` whenever that
/// torsion has exponent below `n` and dividing `n`.
pub fn smith_mod(a: &IntMatrix, n: i64, track: Track) -> Result<SmithForm> {
    assert!(n > 1, "modulus must exceed 1");
    let (m, c) = (a.rows, a.cols);
    let mut a = a.clone();
    for i in 0..m {
        a.reduce_row(i, n);
    }
    let mut calc = SmithCalc {
        a,
        u: track.left.then(|| IntMatrix::identity(m)),
        u_inv: track.left_inv.then(|| IntMatrix::identity(m)),
        v: track.right.then(|| IntMatrix::identity(c)),
        v_inv: track.right_inv.then(|| IntMatrix::identity(c)),
        modulus: Some(n),
    };
    let rank = calc.diagonalize()?;
    for t in 0..rank {
        let (g, u, ui) = unit_normalizer(calc.a[(t, t)], n);
        calc.scale_row(t, u, ui)?;
        calc.a[(t, t)] = g;
    }
    for i in 0..rank {
        for j in i + 1..rank {
            calc.fix_pair(i, j)?;
        }
    }
    let diag = (0..rank).map(|i| calc.a[(i, i)]).collect();
    Ok(SmithForm {
        diag,
        rank,
        left: calc.u,
        left_inv: calc.u_inv,
        right: calc.v,
        right_inv: calc.v_inv,
    })
}

pub type SparseRow = Vec<(usize, i64)>;

/// Echelon basis of the Z-span of a stream of sparse integer rows.
///
/// Rows are inserted one at a time; the stored basis stays in echelon form
/// with positive pivots and entries above each pivot reduced modulo it.
#[derive(Clone, Debug)]
pub struct RowLattice {
    ncols: usize,
    pivots: BTreeMap<usize, SparseRow>,
    modulus: Option<i64>,
}

fn axpy_sparse(x: &SparseRow, q: i64, y: &SparseRow) -> Result<SparseRow> {
    // x - q*y
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push(x[i]);
            i += 1;
        } else if take_y {
            let v = mul(-q, y[j].1)?;
            if v != 0 {
                out.push((y[j].0, v));
            }
            j += 1;
        } else {
            let v = sub_mul(x[i].1, q, y[j].1)?;
            if v != 0 {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    Ok(out)
}

/// `a*x + b*y`
fn lin_comb(a: i64, x: &SparseRow, b: i64, y: &SparseRow) -> Result<SparseRow> {
    let scaled: SparseRow = x
        .iter()
        .map(|&(c, v)| Ok((c, mul(a, v)?)))
        .collect::<Result<_>>()?;
    axpy_sparse(&scaled, -b, y)
}

fn entry(row: &SparseRow, col: usize) -> i64 {
    row.binary_search_by_key(&col, |e| e.0)
        .map(|k| row[k].1)
        .unwrap_or(0)
}

impl RowLattice {
    pub fn new(ncols: usize) -> Self {
        RowLattice {
            ncols,
            pivots: BTreeMap::new(),
            modulus: None,
        }
    }

    /// Echelon basis of `span + n Z^ncols`, keeping every entry reduced
    /// modulo `n` (the rows `n e_c` stay implicit).
    pub fn with_modulus(ncols: usize, n: i64) -> Self {
        assert!(n > 1, "modulus must exceed 1");
        RowLattice {
            ncols,
            pivots: BTreeMap::new(),
            modulus: Some(n),
        }
    }

    pub fn modulus(&self) -> Option<i64> {
        self.modulus
    }

    fn modded(&self, mut v: SparseRow) -> SparseRow {
        if let Some(n) = self.modulus {
            for e in v.iter_mut() {
                e.1 = sym_mod(e.1, n);
            }
            v.retain(|e| e.1 != 0);
        }
        v
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    fn reduce_others_at(&mut self, col: usize) -> Result<()> {
        let prow = self.pivots[&col].clone();
        let p = prow[0].1;
        let keys: Vec<usize> = self.pivots.range(..col).map(|(k, _)| *k).collect();
        for k in keys {
            let row = &self.pivots[&k];
            let x = entry(row, col);
            if x != 0 {
                let q = x.div_euclid(p);
                if q != 0 {
                    let r = axpy_sparse(row, q, &prow)?;
                    let r = match self.modulus {
                        Some(_) => self.modded(r),
                        None => r,
                    };
                    *self.pivots.get_mut(&k).unwrap() = r;
                }
            }
        }
        Ok(())
    }

    /// Reduce the entries of `v` after its leading one modulo the pivots
    /// sitting in those columns; keeps stored rows sparse.
    fn reduce_tail(&self, mut v: SparseRow) -> Result<SparseRow> {
        let mut k = 1;
        while k < v.len() {
            let (c, x) = v[k];
            if let Some(b) = self.pivots.get(&c) {
                let q = x.div_euclid(b[0].1);
                if q != 0 {
                    v = self.modded(axpy_sparse(&v, q, b)?);
                    k = v.partition_point(|e| e.0 <= c);
                    continue;
                }
            }
            k += 1;
        }
        Ok(v)
    }

    pub fn insert(&mut self, v: SparseRow) -> Result<()> {
        let mut v = self.modded(v);
        v.retain(|e| e.1 != 0);
        debug_assert!(v.windows(2).all(|w| w[0].0 < w[1].0), "row must be sorted");
        loop {
            let Some(&(c, a)) = v.first() else {
                return Ok(());
            };
            match self.pivots.get(&c) {
                None => {
                    if a < 0 {
                        for e in v.iter_mut() {
                            e.1 = -e.1;
                        }
                    }
                    let v = self.reduce_tail(v)?;
                    self.pivots.insert(c, v);
                    self.reduce_others_at(c)?;
                    return Ok(());
                }
                Some(b) => {
                    let p = b[0].1;
                    if a % p == 0 {
                        v = self.modded(axpy_sparse(&v, a / p, b)?);
                    } else {
                        let b = b.clone();
                        let (g, s, t) = ext_gcd(p, a);
                        let mut nb = self.modded(lin_comb(s, &b, t, &v)?);
                        let nv = self.modded(lin_comb(a / g, &b, -(p / g), &v)?);
                        if nb[0].1 < 0 {
                            for e in nb.iter_mut() {
                                e.1 = -e.1;
                            }
                        }
                        let nb = self.reduce_tail(nb)?;
                        self.pivots.insert(c, nb);
                        self.reduce_others_at(c)?;
                        v = nv;
                    }
                }
            }
        }
    }

    /// The basis as a dense `rank x ncols` matrix, rows ordered by pivot.
    pub fn to_dense(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.pivots.len(), self.ncols);
        for (i, row) in self.pivots.values().enumerate() {
            for &(c, x) in row {
                m[(i, c)] = x;
            }
        }
        m
    }
}

/// Solve `a * x = b` over the integers; `None` if no integral solution exists.
pub fn solve_integer(a: &IntMatrix, b: &[i64]) -> Result<Option<Vec<i64>>> {
    assert_eq!(a.nrows(), b.len());
    let s = smith(
        a,
        Track {
            left: true,
            right: true,
            ..Track::none()
        },
    )?;
    solve_with(&s, b)
}

/// Solve using a precomputed Smith form carrying `left` and `right`.
pub fn solve_with(s: &SmithForm, b: &[i64]) -> Result<Option<Vec<i64>>> {
    let u = s.left.as_ref().expect("left transform required");
    let v = s.right.as_ref().expect("right transform required");
    let ub = u.mul_vec(b)?;
    let mut y = vec![0i64; v.nrows()];
    for (i, &x) in ub.iter().enumerate() {
        if i < s.rank {
            if x % s.diag[i] != 0 {
                return Ok(None);
            }
            y[i] = x / s.diag[i];
        } else if x != 0 {
            return Ok(None);
        }
    }
    Ok(Some(v.mul_vec(&y)?))
}

/// A Z-basis (as columns of the returned matrix) of the kernel of `a`.
pub fn kernel_basis(a: &IntMatrix) -> Result<IntMatrix> {
    let s = smith(
        a,
        Track {
            right: true,
            ..Track::none()
        },
    )?;
    let v = s.right.unwrap();
    Ok(v.submatrix(0..v.nrows(), s.rank..v.ncols()))
}
