//! Dense linear algebra over Q_p: echelon forms with minimal-valuation
//! pivoting, kernels, solving, subspaces, characteristic polynomials.

use std::fmt;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::padic::{BaseField, PadicNumber, PadicPoly};

pub type Vector = Vec<PadicNumber>;

#[derive(Clone)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<PadicNumber>,
    field: BaseField,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).render(true)).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<PadicNumber>, field: &BaseField) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        Matrix { rows, cols, entries, field: field.clone() }
    }

    pub fn zeros(rows: usize, cols: usize, field: &BaseField) -> Self {
        Self::new(rows, cols, vec![field.zero(); rows * cols], field)
    }

    pub fn identity(n: usize, field: &BaseField) -> Self {
        let mut m = Self::zeros(n, n, field);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn scalar(n: usize, c: &PadicNumber) -> Self {
        let field = c.field().clone();
        let mut m = Self::zeros(n, n, &field);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn from_ints(rows: &[Vec<i64>], field: &BaseField) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let entries = rows.iter().flat_map(|row| row.iter().map(|&x| field.int(x))).collect();
        Self::new(r, c, entries, field)
    }

    pub fn from_rationals(rows: usize, cols: usize, data: &[BigRational], field: &BaseField) -> Self {
        Self::new(rows, cols, data.iter().map(|x| PadicNumber::exact(x.clone(), field)).collect(), field)
    }

    pub fn from_fn(rows: usize, cols: usize, field: &BaseField, mut f: impl FnMut(usize, usize) -> PadicNumber) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self::new(rows, cols, entries, field)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(dim: usize, cols: &[Vector], field: &BaseField) -> Self {
        Self::from_fn(dim, cols.len(), field, |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &BaseField {
        &self.field
    }

    pub fn entries(&self) -> &[PadicNumber] {
        &self.entries
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &PadicNumber {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: PadicNumber) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vector {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, &self.field, |i, j| self.get(j, i).clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in add");
        let e = self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect();
        Self::new(self.rows, self.cols, e, &self.field)
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in sub");
        let e = self.entries.iter().zip(&other.entries).map(|(a, b)| a.sub(b)).collect();
        Self::new(self.rows, self.cols, e, &self.field)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.rows, self.cols, self.entries.iter().map(|a| a.neg()).collect(), &self.field)
    }

    pub fn scale(&self, c: &PadicNumber) -> Self {
        Self::new(self.rows, self.cols, self.entries.iter().map(|a| a.mul(c)).collect(), &self.field)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let mut out = Self::zeros(self.rows, other.cols, &self.field);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_exact_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_exact_zero() {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.entries[idx] = out.entries[idx].add(&a.mul(b));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[PadicNumber]) -> Vector {
        assert_eq!(self.cols, v.len(), "shape mismatch in mul_vec");
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_exact_zero() && !x.is_exact_zero() {
                        acc = acc.add(&a.mul(x));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::identity(self.rows, &self.field);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Kronecker product.
    pub fn kron(&self, other: &Self) -> Self {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        Self::from_fn(r, c, &self.field, |i, j| {
            let a = self.get(i / other.rows, j / other.cols);
            if a.is_exact_zero() {
                return self.field.zero();
            }
            a.mul(other.get(i % other.rows, j % other.cols))
        })
    }

    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        Self::from_fn(r1 - r0, c1 - c0, &self.field, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.rows, idx.len(), &self.field, |i, j| self.get(i, idx[j]).clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), self.cols, &self.field, |i, j| self.get(idx[i], j).clone())
    }

    pub fn hstack(blocks: &[&Matrix], rows: usize, field: &BaseField) -> Self {
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols, field);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, rows, "row mismatch in hstack");
            m.place(0, off, b);
            off += b.cols;
        }
        m
    }

    pub fn vstack(blocks: &[&Matrix], cols: usize, field: &BaseField) -> Self {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let mut m = Self::zeros(rows, cols, field);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.cols, cols, "column mismatch in vstack");
            m.place(off, 0, b);
            off += b.rows;
        }
        m
    }

    pub fn block_diag(blocks: &[&Matrix], field: &BaseField) -> Self {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(r, c, field);
        let (mut ro, mut co) = (0, 0);
        for b in blocks {
            m.place(ro, co, b);
            ro += b.rows;
            co += b.cols;
        }
        m
    }

    /// Writes `b` into self with top-left corner at (r, c).
    pub fn place(&mut self, r: usize, c: usize, b: &Matrix) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r + i, c + j, b.get(i, j).clone());
            }
        }
    }

    pub fn is_exact(&self) -> bool {
        self.entries.iter().all(|e| e.is_exact())
    }

    pub fn is_exact_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_exact_zero())
    }

    pub fn is_zero_at_precision(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero_at_precision())
    }

    pub fn eq_at_precision(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.entries.iter().zip(&other.entries).all(|(a, b)| a.eq_at_precision(b))
    }

    /// Every entry of self - other has valuation at least `abs`.
    pub fn agrees_to(&self, other: &Self, abs: i64) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.entries.iter().zip(&other.entries).all(|(a, b)| a.agrees_to(b, abs))
    }

    /// Minimum absolute precision over capped entries (None if all exact).
    pub fn min_abs_precision(&self) -> Option<i64> {
        self.entries.iter().filter_map(|e| e.abs_precision()).min()
    }

    pub fn in_field(&self, field: &BaseField) -> Self {
        Self::new(self.rows, self.cols, self.entries.iter().map(|e| e.in_field(field)).collect(), field)
    }

    pub fn map(&self, f: impl Fn(&PadicNumber) -> PadicNumber) -> Self {
        Self::new(self.rows, self.cols, self.entries.iter().map(f).collect(), &self.field)
    }

    pub fn rank(&self) -> Result<usize> {
        Ok(echelon(self)?.rank)
    }

    pub fn det(&self) -> Result<PadicNumber> {
        determinant(self)
    }

    pub fn inverse(&self) -> Result<Self> {
        inverse(self)
    }
}

/// Result of row reduction: `transform * m = form`, with `form` in reduced
/// row-echelon shape.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rank: usize,
    pub pivots: Vec<usize>,
    pub transform: Matrix,
    pub form: Matrix,
}

/// Picks the row in `from..` with minimal valuation in column `col`.
/// Errors if every candidate is zero at precision but some is not exact zero.
fn pick_pivot(a: &Matrix, col: usize, from: usize) -> Result<Option<usize>> {
    let mut best: Option<(usize, i64)> = None;
    let mut ambiguous: Option<i64> = None;
    for i in from..a.rows {
        let x = a.get(i, col);
        if x.is_exact_zero() {
            continue;
        }
        if x.is_zero_at_precision() {
            ambiguous.get_or_insert(x.valuation().unwrap());
            continue;
        }
        let v = x.valuation().unwrap();
        if best.is_none_or(|(_, bv)| v < bv) {
            best = Some((i, v));
        }
    }
    match (best, ambiguous) {
        (Some((i, _)), _) => Ok(Some(i)),
        (None, Some(abs)) => Err(Error::precision(format!("ambiguous pivot in column {col}"), abs)),
        (None, None) => Ok(None),
    }
}

fn swap_rows(m: &mut Matrix, i: usize, j: usize) {
    if i == j {
        return;
    }
    for c in 0..m.cols {
        m.entries.swap(i * m.cols + c, j * m.cols + c);
    }
}

/// Row ops: row_i -= c * row_j.
fn row_axpy(m: &mut Matrix, i: usize, j: usize, c: &PadicNumber) {
    for k in 0..m.cols {
        let b = m.get(j, k);
        if b.is_exact_zero() {
            continue;
        }
        let v = m.get(i, k).sub(&c.mul(b));
        m.set(i, k, v);
    }
}

fn row_scale(m: &mut Matrix, i: usize, c: &PadicNumber) {
    for k in 0..m.cols {
        let v = m.get(i, k).mul(c);
        m.set(i, k, v);
    }
}

/// Reduced row-echelon form with minimal-valuation pivoting.
pub fn echelon(m: &Matrix) -> Result<Echelon> {
    let field = m.field.clone();
    let mut a = m.clone();
    let mut t = Matrix::identity(m.rows, &field);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(pi) = pick_pivot(&a, col, r)? else { continue };
        swap_rows(&mut a, r, pi);
        swap_rows(&mut t, r, pi);
        let inv = a.get(r, col).inv()?;
        row_scale(&mut a, r, &inv);
        row_scale(&mut t, r, &inv);
        a.set(r, col, field.one());
        for i in 0..m.rows {
            if i == r {
                continue;
            }
            let c = a.get(i, col).clone();
            if c.is_exact_zero() {
                continue;
            }
            row_axpy(&mut a, i, r, &c);
            row_axpy(&mut t, i, r, &c);
            a.set(i, col, field.zero());
        }
        pivots.push(col);
        r += 1;
    }
    Ok(Echelon { rank: r, pivots, transform: t, form: a })
}

/// Independent spanning columns of a subspace of Q_p^ambient.
#[derive(Clone, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
}

impl Subspace {
    /// Span of the given columns, re-echelonized to an independent basis.
    pub fn span(ambient: usize, cols: &[Vector], field: &BaseField) -> Result<Self> {
        let m = Matrix::from_columns(ambient, cols, field);
        Self::column_space(&m)
    }

    pub fn column_space(m: &Matrix) -> Result<Self> {
        let e = echelon(&m.transpose())?;
        let basis = e.form.submatrix(0, e.rank, 0, m.rows).transpose();
        Ok(Subspace { ambient: m.rows, basis })
    }

    /// Trusts that the columns are independent.
    pub fn from_independent(basis: Matrix) -> Self {
        Subspace { ambient: basis.rows(), basis }
    }

    pub fn zero(ambient: usize, field: &BaseField) -> Self {
        Subspace { ambient, basis: Matrix::zeros(ambient, 0, field) }
    }

    pub fn whole(ambient: usize, field: &BaseField) -> Self {
        Subspace { ambient, basis: Matrix::identity(ambient, field) }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn field(&self) -> &BaseField {
        self.basis.field()
    }

    pub fn vectors(&self) -> Vec<Vector> {
        self.basis.columns()
    }

    pub fn contains(&self, v: &[PadicNumber]) -> Result<bool> {
        Ok(solve(&self.basis, v)?.is_some())
    }

    pub fn contains_subspace(&self, other: &Subspace) -> Result<bool> {
        for v in other.vectors() {
            if !self.contains(&v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equals(&self, other: &Subspace) -> Result<bool> {
        Ok(self.dim() == other.dim() && self.contains_subspace(other)?)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        let mut cols = self.vectors();
        cols.extend(other.vectors());
        Subspace::span(self.ambient, &cols, self.field())
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        let field = self.field().clone();
        let (a, b) = (self.dim(), other.dim());
        if a == 0 || b == 0 {
            return Ok(Subspace::zero(self.ambient, &field));
        }
        let m = Matrix::hstack(&[&self.basis, &other.basis.neg()], self.ambient, &field);
        let k = kernel(&m)?;
        let cols: Vec<Vector> = k.vectors().iter().map(|v| self.basis.mul_vec(&v[..a])).collect();
        Subspace::span(self.ambient, &cols, &field)
    }

    /// {w : <w, v> = 0 for all v in self} under the standard dot product.
    pub fn annihilator(&self) -> Result<Subspace> {
        if self.dim() == 0 {
            return Ok(Subspace::whole(self.ambient, self.field()));
        }
        kernel(&self.basis.transpose())
    }

    /// Image under a linear map.
    pub fn image(&self, f: &Matrix) -> Result<Subspace> {
        Subspace::column_space(&f.mul(&self.basis))
    }

    /// Coordinates of a member vector in the stored basis.
    pub fn coordinates(&self, v: &[PadicNumber]) -> Result<Vector> {
        solve(&self.basis, v)?.ok_or_else(|| Error::domain("vector not in subspace"))
    }

    /// A basis of a complement, drawn from standard basis vectors. Full
    /// pivoting on the transposed basis picks the coordinates the basis
    /// covers, so no rank decision is made on entries near zero.
    pub fn complement(&self) -> Result<Matrix> {
        let field = self.field().clone();
        let mut rows: Vec<Vector> = self.vectors();
        let mut used = vec![false; self.ambient];
        let mut active: Vec<usize> = (0..rows.len()).collect();
        while !active.is_empty() {
            let mut best: Option<(usize, usize, i64)> = None;
            for &r in &active {
                for (c, taken) in used.iter().enumerate() {
                    let x = &rows[r][c];
                    if *taken || x.is_zero_at_precision() {
                        continue;
                    }
                    let v = x.valuation().unwrap();
                    if best.is_none_or(|(_, _, bv)| v < bv) {
                        best = Some((r, c, v));
                    }
                }
            }
            let Some((r, c, _)) = best else {
                return Err(Error::precision("subspace basis is degenerate at working precision", field.precision() as i64));
            };
            let pivot = rows[r][c].clone();
            let prow = rows[r].clone();
            for &k in &active {
                if k == r || rows[k][c].is_exact_zero() {
                    continue;
                }
                let f = rows[k][c].div(&pivot)?;
                rows[k] = rows[k].iter().zip(&prow).map(|(a, b)| a.sub(&f.mul(b))).collect();
            }
            used[c] = true;
            active.retain(|&k| k != r);
        }
        let picked: Vec<Vector> = (0..self.ambient)
            .filter(|&i| !used[i])
            .map(|i| {
                let mut e = vec![field.zero(); self.ambient];
                e[i] = field.one();
                e
            })
            .collect();
        Ok(Matrix::from_columns(self.ambient, &picked, &field))
    }
}

/// Null space of m, as a subspace of the column domain.
pub fn kernel(m: &Matrix) -> Result<Subspace> {
    let field = m.field().clone();
    let e = echelon(m)?;
    let free: Vec<usize> = (0..m.cols()).filter(|c| !e.pivots.contains(c)).collect();
    let mut basis = Matrix::zeros(m.cols(), free.len(), &field);
    for (k, &fc) in free.iter().enumerate() {
        basis.set(fc, k, field.one());
        for (r, &pc) in e.pivots.iter().enumerate() {
            basis.set(pc, k, e.form.get(r, fc).neg());
        }
    }
    Ok(Subspace { ambient: m.cols(), basis })
}

/// Some x with m x = rhs, or `None` when rhs is certifiably outside the
/// column space.
pub fn solve(m: &Matrix, rhs: &[PadicNumber]) -> Result<Option<Vector>> {
    assert_eq!(m.rows(), rhs.len(), "shape mismatch in solve");
    let field = m.field().clone();
    let e = echelon(m)?;
    let y = e.transform.mul_vec(rhs);
    for (i, yi) in y.iter().enumerate().skip(e.rank) {
        if yi.is_exact_zero() {
            continue;
        }
        if yi.is_zero_at_precision() {
            return Err(Error::precision(format!("ambiguous consistency in row {i}"), yi.valuation().unwrap()));
        }
        return Ok(None);
    }
    let mut x = vec![field.zero(); m.cols()];
    for (r, &pc) in e.pivots.iter().enumerate() {
        x[pc] = y[r].clone();
    }
    Ok(Some(x))
}

/// Solves m x = rhs for square invertible m (no consistency bookkeeping).
pub fn solve_square(m: &Matrix, rhs: &[PadicNumber]) -> Result<Vector> {
    let e = echelon(m)?;
    if e.rank < m.cols() {
        return Err(Error::domain("singular system"));
    }
    Ok(e.transform.mul_vec(rhs))
}

pub fn inverse(m: &Matrix) -> Result<Matrix> {
    if !m.is_square() {
        return Err(Error::domain("inverse of a non-square matrix"));
    }
    let e = echelon(m)?;
    if e.rank < m.rows() {
        return Err(Error::domain("matrix is singular"));
    }
    Ok(e.transform)
}

/// Determinant by elimination with minimal-valuation pivots.
pub fn determinant(m: &Matrix) -> Result<PadicNumber> {
    if !m.is_square() {
        return Err(Error::domain("determinant of a non-square matrix"));
    }
    let field = m.field().clone();
    let n = m.rows();
    let mut a = m.clone();
    let mut det = field.one();
    for col in 0..n {
        let Some(pi) = pick_pivot(&a, col, col)? else { return Ok(field.zero()) };
        if pi != col {
            swap_rows(&mut a, col, pi);
            det = det.neg();
        }
        let piv = a.get(col, col).clone();
        det = det.mul(&piv);
        let inv = piv.inv()?;
        for i in col + 1..n {
            let c = a.get(i, col).mul(&inv);
            if !c.is_exact_zero() {
                row_axpy(&mut a, i, col, &c);
            }
        }
    }
    Ok(det)
}

/// det(T I - m) via reduction to upper Hessenberg form.
pub fn charpoly(m: &Matrix) -> Result<PadicPoly> {
    if !m.is_square() {
        return Err(Error::domain("charpoly of a non-square matrix"));
    }
    let field = m.field().clone();
    let n = m.rows();
    let mut h = m.clone();
    for k in 1..n.saturating_sub(1) {
        // pivot among rows k..n in column k-1; values at precision zero are
        // treated as zero, which is continuous in the entries
        let mut best: Option<(usize, i64)> = None;
        for i in k..n {
            let x = h.get(i, k - 1);
            if x.is_zero_at_precision() {
                continue;
            }
            let v = x.valuation().unwrap();
            if best.is_none_or(|(_, bv)| v < bv) {
                best = Some((i, v));
            }
        }
        let Some((pi, _)) = best else { continue };
        if pi != k {
            swap_rows(&mut h, pi, k);
            for r in 0..n {
                h.entries.swap(r * n + pi, r * n + k);
            }
        }
        let inv = h.get(k, k - 1).inv()?;
        for i in k + 1..n {
            let u = h.get(i, k - 1).mul(&inv);
            if u.is_exact_zero() {
                continue;
            }
            row_axpy(&mut h, i, k, &u);
            for r in 0..n {
                let v = h.get(r, k).add(&u.mul(h.get(r, i)));
                h.set(r, k, v);
            }
        }
    }
    // p_k = (T - h_kk) p_{k-1} - sum_{i<k} h_ik (prod_{j=i+1..k} h_{j,j-1}) p_{i-1}
    let t = PadicPoly::new(vec![field.zero(), field.one()], &field);
    let mut ps: Vec<PadicPoly> = vec![PadicPoly::one(&field)];
    for k in 0..n {
        let mut pk = t.sub(&PadicPoly::new(vec![h.get(k, k).clone()], &field)).mul(&ps[k]);
        let mut prod = field.one();
        for i in (0..k).rev() {
            prod = prod.mul(h.get(i + 1, i));
            if prod.is_exact_zero() {
                break;
            }
            let c = h.get(i, k).mul(&prod);
            pk = pk.sub(&ps[i].scale(&c));
        }
        ps.push(pk);
    }
    Ok(ps.pop().unwrap())
}

/// P(m) by Horner evaluation.
pub fn apply_poly(p: &PadicPoly, m: &Matrix) -> Matrix {
    let field = m.field().clone();
    let n = m.rows();
    let mut acc = Matrix::zeros(n, n, &field);
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(m).add(&Matrix::scalar(n, c));
    }
    acc
}

pub fn dot(a: &[PadicNumber], b: &[PadicNumber], field: &BaseField) -> PadicNumber {
    let mut acc = field.zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_exact_zero() && !y.is_exact_zero() {
            acc = acc.add(&x.mul(y));
        }
    }
    acc
}

/// u^T G v.
pub fn bilinear(u: &[PadicNumber], g: &Matrix, v: &[PadicNumber]) -> PadicNumber {
    dot(u, &g.mul_vec(v), g.field())
}

pub fn vec_add(a: &[PadicNumber], b: &[PadicNumber]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

pub fn vec_sub(a: &[PadicNumber], b: &[PadicNumber]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

pub fn vec_scale(a: &[PadicNumber], c: &PadicNumber) -> Vector {
    a.iter().map(|x| x.mul(c)).collect()
}

pub fn zero_vec(n: usize, field: &BaseField) -> Vector {
    vec![field.zero(); n]
}

pub fn vec_is_exact_zero(a: &[PadicNumber]) -> bool {
    a.iter().all(|x| x.is_exact_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> BaseField {
        BaseField::new(5, 10).unwrap()
    }

    #[test]
    fn echelon_identity() {
        let f = k();
        let e = echelon(&Matrix::identity(3, &f)).unwrap();
        assert_eq!(e.rank, 3);
        assert!(e.transform.eq_at_precision(&Matrix::identity(3, &f)));
    }

    #[test]
    fn proportional_rows_rank_one() {
        let f = k();
        let m = Matrix::from_ints(&[vec![1, 2], vec![2, 4]], &f);
        assert_eq!(m.rank().unwrap(), 1);
        let kr = kernel(&m).unwrap();
        assert_eq!(kr.dim(), 1);
        let v = kr.vectors()[0].clone();
        assert!(v[0].eq_at_precision(&f.int(-2).mul(&v[1])));
    }

    #[test]
    fn invertible_kernel_zero() {
        let f = k();
        let m = Matrix::from_ints(&[vec![2, 1], vec![1, 3]], &f);
        assert_eq!(kernel(&m).unwrap().dim(), 0);
    }

    #[test]
    fn solve_examples() {
        let f = k();
        let rhs = vec![f.int(3), f.int(-7)];
        let x = solve(&Matrix::identity(2, &f), &rhs).unwrap().unwrap();
        assert!(x[0].eq_at_precision(&rhs[0]) && x[1].eq_at_precision(&rhs[1]));
        let m = Matrix::from_ints(&[vec![1], vec![0]], &f);
        assert!(solve(&m, &[f.zero(), f.one()]).unwrap().is_none());
    }

    #[test]
    fn charpoly_examples() {
        let f = k();
        let m = Matrix::from_ints(&[vec![0, -5], vec![1, 2]], &f);
        assert_eq!(charpoly(&m).unwrap().to_string(), "5 - 2*T + T^2");
        assert_eq!(charpoly(&Matrix::zeros(3, 3, &f)).unwrap().to_string(), "T^3");
    }

    #[test]
    fn apply_poly_examples() {
        let f = k();
        let m = Matrix::from_ints(&[vec![1, 2], vec![3, 4]], &f);
        assert!(apply_poly(&PadicPoly::one(&f), &m).eq_at_precision(&Matrix::identity(2, &f)));
        let p = PadicPoly::from_ints(&[1, -1], &f);
        assert!(apply_poly(&p, &Matrix::identity(3, &f)).is_exact_zero());
    }

    #[test]
    fn ambiguous_pivot_is_reported() {
        let f = k();
        let z = PadicNumber::big_o(3, &f);
        let m = Matrix::new(2, 2, vec![z.clone(), f.zero(), f.zero(), z], &f);
        assert!(matches!(echelon(&m), Err(Error::Precision { .. })));
    }

    #[test]
    fn subspace_ops() {
        let f = k();
        let a = Subspace::span(3, &[vec![f.one(), f.zero(), f.zero()], vec![f.zero(), f.one(), f.zero()]], &f).unwrap();
        let b = Subspace::span(3, &[vec![f.zero(), f.one(), f.zero()], vec![f.zero(), f.zero(), f.one()]], &f).unwrap();
        assert_eq!(a.intersect(&b).unwrap().dim(), 1);
        assert_eq!(a.sum(&b).unwrap().dim(), 3);
        assert_eq!(a.annihilator().unwrap().dim(), 1);
        assert_eq!(a.complement().unwrap().cols(), 1);
    }

    #[test]
    fn capped_determinant_valuation() {
        let f = k();
        let m = Matrix::new(
            2,
            2,
            vec![
                PadicNumber::capped(1, 2.into(), 8, &f),
                f.int(1),
                f.int(3),
                PadicNumber::capped(0, 4.into(), 8, &f),
            ],
            &f,
        );
        let d = m.det().unwrap();
        // 5*2*4 - 3 = 37
        assert!(d.eq_at_precision(&f.int(37)));
    }
}
