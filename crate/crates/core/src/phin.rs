//! Filtered (φ,N)-modules over Q_p: duals, tensor and symmetric powers, Tate
//! twists, the Clebsch–Gordan splitting of Sym ⊗ Sym for a rank-2 module,
//! and weight purity of Frobenius.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{charpoly, Matrix, Subspace, Vector};
use crate::padic::{BaseField, PadicNumber};

/// Decreasing filtration stored by its jumps: `steps` holds `(j, Fil^j)` for
/// every `j` with `Fil^j != Fil^(j+1)`, in increasing `j`. Below the first
/// jump the filtration is the first step, above the last it is zero.
#[derive(Clone, Debug)]
pub struct Filtration {
    dim: usize,
    steps: Vec<(i64, Subspace)>,
}

impl Filtration {
    /// `given` lists `(label, Fil^label)`; labels in between take the value of
    /// the next listed label.
    pub fn new(dim: usize, mut given: Vec<(i64, Subspace)>, field: &BaseField) -> Result<Self> {
        given.sort_by_key(|(l, _)| *l);
        for (l, s) in &given {
            if s.ambient() != dim {
                return Err(Error::domain(format!("filtration step {l} has wrong ambient dimension")));
            }
        }
        let mut steps = Vec::new();
        for k in 0..given.len() {
            let next = if k + 1 < given.len() {
                given[k + 1].1.clone()
            } else {
                Subspace::zero(dim, field)
            };
            if given[k].1.dim() != next.dim() || !given[k].1.equals(&next)? {
                steps.push(given[k].clone());
            }
        }
        Ok(Filtration { dim, steps })
    }

    /// Fil^label = whole space, Fil^(label+1) = 0.
    pub fn concentrated(dim: usize, label: i64, field: &BaseField) -> Self {
        let steps = if dim == 0 { vec![] } else { vec![(label, Subspace::whole(dim, field))] };
        Filtration { dim, steps }
    }

    pub fn at(&self, r: i64, field: &BaseField) -> Subspace {
        for (l, s) in &self.steps {
            if r <= *l {
                return s.clone();
            }
        }
        Subspace::zero(self.dim, field)
    }

    pub fn jumps(&self) -> Vec<i64> {
        self.steps.iter().map(|(l, _)| *l).collect()
    }

    pub fn steps(&self) -> &[(i64, Subspace)] {
        &self.steps
    }

    /// Smallest and largest jump; `(0, -1)` for the zero space.
    pub fn range(&self) -> (i64, i64) {
        match (self.steps.first(), self.steps.last()) {
            (Some(a), Some(b)) => (a.0, b.0),
            _ => (0, -1),
        }
    }

    /// Basis adapted to the filtration, each vector tagged with the largest
    /// `r` such that it lies in Fil^r.
    pub fn adapted_basis(&self, field: &BaseField) -> Result<Vec<(Vector, i64)>> {
        let mut out: Vec<(Vector, i64)> = Vec::new();
        for (l, s) in self.steps.iter().rev() {
            for v in s.vectors() {
                let cur: Vec<Vector> = out.iter().map(|(w, _)| w.clone()).collect();
                let span = Subspace::span(self.dim, &cur, field)?;
                if !span.contains(&v)? {
                    out.push((v, *l));
                }
            }
        }
        Ok(out)
    }

    fn shifted(&self, by: i64) -> Filtration {
        Filtration { dim: self.dim, steps: self.steps.iter().map(|(l, s)| (l + by, s.clone())).collect() }
    }
}

#[derive(Clone, Debug)]
pub struct FilPhiNModule {
    pub phi: Matrix,
    pub nmat: Matrix,
    pub fil: Filtration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PhinViolation {
    Shape(String),
    Relation { row: usize, col: usize },
    PhiNotInvertible,
    Filtration(String),
}

impl std::fmt::Display for PhinViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PhinViolation::Shape(m) => write!(f, "shape: {m}"),
            PhinViolation::Relation { row, col } => write!(f, "p*Phi*N != N*Phi at entry ({row}, {col})"),
            PhinViolation::PhiNotInvertible => write!(f, "Phi is not invertible"),
            PhinViolation::Filtration(m) => write!(f, "filtration: {m}"),
        }
    }
}

impl FilPhiNModule {
    pub fn new(phi: Matrix, nmat: Matrix, fil: Filtration) -> Self {
        FilPhiNModule { phi, nmat, fil }
    }

    /// Zero monodromy, filtration concentrated in one label.
    pub fn simple(phi: Matrix, label: i64) -> Self {
        let n = phi.rows();
        let field = phi.field().clone();
        FilPhiNModule { nmat: Matrix::zeros(n, n, &field), fil: Filtration::concentrated(n, label, &field), phi }
    }

    pub fn dim(&self) -> usize {
        self.phi.rows()
    }

    pub fn field(&self) -> &BaseField {
        self.phi.field()
    }

    pub fn fil_at(&self, r: i64) -> Subspace {
        self.fil.at(r, self.field())
    }
}

pub fn check_phin(m: &FilPhiNModule) -> std::result::Result<(), PhinViolation> {
    let n = m.dim();
    if !m.phi.is_square() || m.nmat.rows() != n || m.nmat.cols() != n {
        return Err(PhinViolation::Shape("Phi and N must be square of equal size".into()));
    }
    let field = m.field();
    let p = field.int(field.p() as i64);
    let lhs = m.phi.mul(&m.nmat).scale(&p);
    let rhs = m.nmat.mul(&m.phi);
    for r in 0..n {
        for c in 0..n {
            if !lhs.get(r, c).sub(rhs.get(r, c)).is_zero_at_precision() {
                return Err(PhinViolation::Relation { row: r, col: c });
            }
        }
    }
    match m.phi.rank() {
        Ok(r) if r == n => {}
        _ => return Err(PhinViolation::PhiNotInvertible),
    }
    let steps = m.fil.steps();
    if let Some((l, s)) = steps.first() {
        if s.dim() != n {
            return Err(PhinViolation::Filtration(format!("Fil^{l} must be the whole space")));
        }
    }
    for w in steps.windows(2) {
        let ((la, a), (lb, b)) = (&w[0], &w[1]);
        let ok = la < lb && b.dim() < a.dim() && a.contains_subspace(b).unwrap_or(false);
        if !ok {
            return Err(PhinViolation::Filtration(format!("Fil^{lb} is not strictly inside Fil^{la}")));
        }
    }
    Ok(())
}

/// Φ^∨ = Φ^(-T), N^∨ = -N^T, Fil^(∨, 1-i) = annihilator of Fil^i.
pub fn dual(m: &FilPhiNModule) -> Result<FilPhiNModule> {
    let field = m.field().clone();
    let phi = m.phi.inverse()?.transpose();
    let nmat = m.nmat.transpose().neg();
    let (lo, hi) = m.fil.range();
    let mut given = Vec::new();
    for i in lo..=hi + 1 {
        given.push((1 - i, m.fil_at(i).annihilator()?));
    }
    let fil = Filtration::new(m.dim(), given, &field)?;
    Ok(FilPhiNModule { phi, nmat, fil })
}

/// Kronecker Frobenius, Leibniz monodromy, convolution filtration.
pub fn tensor(a: &FilPhiNModule, b: &FilPhiNModule) -> Result<FilPhiNModule> {
    let field = a.field().clone();
    let (da, db) = (a.dim(), b.dim());
    let phi = a.phi.kron(&b.phi);
    let nmat = a.nmat.kron(&Matrix::identity(db, &field)).add(&Matrix::identity(da, &field).kron(&b.nmat));
    let ba = a.fil.adapted_basis(&field)?;
    let bb = b.fil.adapted_basis(&field)?;
    let mut tagged = Vec::new();
    for (u, wu) in &ba {
        for (v, wv) in &bb {
            let prod = Matrix::from_columns(da, std::slice::from_ref(u), &field).kron(&Matrix::from_columns(db, std::slice::from_ref(v), &field));
            tagged.push((prod.column(0), wu + wv));
        }
    }
    let fil = filtration_from_tagged(da * db, &tagged, &field)?;
    Ok(FilPhiNModule { phi, nmat, fil })
}

fn filtration_from_tagged(dim: usize, tagged: &[(Vector, i64)], field: &BaseField) -> Result<Filtration> {
    let mut labels: Vec<i64> = tagged.iter().map(|(_, w)| *w).collect();
    labels.sort();
    labels.dedup();
    let mut given = Vec::new();
    for &l in &labels {
        let vs: Vec<Vector> = tagged.iter().filter(|(_, w)| *w >= l).map(|(v, _)| v.clone()).collect();
        given.push((l, Subspace::span(dim, &vs, field)?));
    }
    Filtration::new(dim, given, field)
}

/// Weakly increasing multi-indices of length `k` over `0..m`, in
/// lexicographic order; this is the basis order of Sym^k.
pub fn sym_indices(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(m: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(m, k, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Product of `k` vectors of Q_p^m as an element of Sym^k in the monomial basis.
fn sym_product(vectors: &[Vector], m: usize, field: &BaseField) -> Vector {
    let mut acc: BTreeMap<Vec<usize>, PadicNumber> = BTreeMap::new();
    acc.insert(vec![], field.one());
    for v in vectors {
        let mut next: BTreeMap<Vec<usize>, PadicNumber> = BTreeMap::new();
        for (idx, c) in &acc {
            for (i, vi) in v.iter().enumerate() {
                if vi.is_exact_zero() {
                    continue;
                }
                let mut ni = idx.clone();
                let pos = ni.partition_point(|&x| x <= i);
                ni.insert(pos, i);
                let e = next.entry(ni).or_insert_with(|| field.zero());
                *e = e.add(&c.mul(vi));
            }
        }
        acc = next;
    }
    sym_indices(m, vectors.len()).into_iter().map(|idx| acc.get(&idx).cloned().unwrap_or_else(|| field.zero())).collect()
}

/// Matrix of Sym^k(g) in the monomial basis.
pub fn sym_power_matrix(g: &Matrix, k: usize) -> Matrix {
    let field = g.field().clone();
    let m = g.rows();
    let idx = sym_indices(m, k);
    let cols: Vec<Vector> = idx
        .iter()
        .map(|ix| {
            let vs: Vec<Vector> = ix.iter().map(|&i| g.column(i)).collect();
            sym_product(&vs, m, &field)
        })
        .collect();
    Matrix::from_columns(idx.len(), &cols, &field)
}

/// Derivation extension of an endomorphism to Sym^k.
fn sym_derivation(n: &Matrix, k: usize) -> Matrix {
    let field = n.field().clone();
    let m = n.rows();
    let idx = sym_indices(m, k);
    let dim = idx.len();
    let mut cols = Vec::new();
    for ix in &idx {
        let mut col = vec![field.zero(); dim];
        for t in 0..k {
            let vs: Vec<Vector> = ix
                .iter()
                .enumerate()
                .map(|(s, &i)| {
                    if s == t {
                        n.column(i)
                    } else {
                        let mut e = vec![field.zero(); m];
                        e[i] = field.one();
                        e
                    }
                })
                .collect();
            let term = sym_product(&vs, m, &field);
            col = col.iter().zip(&term).map(|(a, b)| a.add(b)).collect();
        }
        cols.push(col);
    }
    Matrix::from_columns(dim, &cols, &field)
}

pub fn sym(m: &FilPhiNModule, k: usize) -> Result<FilPhiNModule> {
    let field = m.field().clone();
    let d = m.dim();
    let idx = sym_indices(d, k);
    let phi = sym_power_matrix(&m.phi, k);
    let nmat = sym_derivation(&m.nmat, k);
    let basis = m.fil.adapted_basis(&field)?;
    let tagged: Vec<(Vector, i64)> = sym_indices(basis.len(), k)
        .iter()
        .map(|ix| {
            let vs: Vec<Vector> = ix.iter().map(|&s| basis[s].0.clone()).collect();
            (sym_product(&vs, d, &field), ix.iter().map(|&s| basis[s].1).sum())
        })
        .collect();
    let fil = if k == 0 { Filtration::concentrated(1, 0, &field) } else { filtration_from_tagged(idx.len(), &tagged, &field)? };
    Ok(FilPhiNModule { phi, nmat, fil })
}

/// Tate twist m(j): Φ multiplied by p^(-j), Fil^r(m(j)) = Fil^(r+j)(m).
pub fn twist(m: &FilPhiNModule, j: i64) -> FilPhiNModule {
    let field = m.field();
    let c = field.one().shift(-j);
    FilPhiNModule { phi: m.phi.scale(&c), nmat: m.nmat.clone(), fil: m.fil.shifted(-j) }
}

/// One summand of a decomposition, with maps to and from the parent.
#[derive(Clone, Debug)]
pub struct TwistedSummand {
    pub module: FilPhiNModule,
    /// Tate twist label: the summand is Sym^r H (twist).
    pub twist: i64,
    /// parent_dim × summand_dim.
    pub embedding: Matrix,
    /// summand_dim × parent_dim.
    pub projection: Matrix,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn binom(n: usize, k: usize) -> BigRational {
    BigRational::from_integer(binomial(BigInt::from(n), BigInt::from(k)))
}

/// Bihomogeneous polynomial of bidegree (n1, n2) in (X1, Y1), (X2, Y2);
/// entry [a][b] is the coefficient of X1^(n1-a) Y1^a X2^(n2-b) Y2^b.
#[derive(Clone, Debug)]
struct Bihom {
    n1: usize,
    n2: usize,
    c: Vec<Vec<BigRational>>,
}

impl Bihom {
    fn zero(n1: usize, n2: usize) -> Self {
        Bihom { n1, n2, c: vec![vec![BigRational::zero(); n2 + 1]; n1 + 1] }
    }

    fn from_flat(n1: usize, n2: usize, v: &[BigRational]) -> Self {
        let mut b = Bihom::zero(n1, n2);
        for a in 0..=n1 {
            for bb in 0..=n2 {
                b.c[a][bb] = v[a * (n2 + 1) + bb].clone();
            }
        }
        b
    }

    fn flat(&self) -> Vec<BigRational> {
        self.c.iter().flatten().cloned().collect()
    }

    /// Multiplication by X1 Y2 - Y1 X2.
    fn times_delta(&self) -> Bihom {
        let mut out = Bihom::zero(self.n1 + 1, self.n2 + 1);
        for a in 0..=self.n1 {
            for b in 0..=self.n2 {
                let v = &self.c[a][b];
                if v.is_zero() {
                    continue;
                }
                out.c[a][b + 1] += v;
                out.c[a + 1][b] -= v;
            }
        }
        out
    }

    /// The contraction ∂X1 ∂Y2 - ∂Y1 ∂X2.
    fn omega(&self) -> Bihom {
        let (n1, n2) = (self.n1, self.n2);
        if n1 == 0 || n2 == 0 {
            return Bihom::zero(n1.saturating_sub(1), n2.saturating_sub(1));
        }
        let mut out = Bihom::zero(n1 - 1, n2 - 1);
        for a in 0..=n1 {
            for b in 0..=n2 {
                let v = &self.c[a][b];
                if v.is_zero() {
                    continue;
                }
                if a < n1 && b > 0 {
                    out.c[a][b - 1] += v * rat(((n1 - a) * b) as i64);
                }
                if a > 0 && b < n2 {
                    out.c[a - 1][b] -= v * rat((a * (n2 - b)) as i64);
                }
            }
        }
        out
    }

    /// Restriction to X1 = X2, Y1 = Y2.
    fn diagonal(&self) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.n1 + self.n2 + 1];
        for a in 0..=self.n1 {
            for b in 0..=self.n2 {
                out[a + b] += &self.c[a][b];
            }
        }
        out
    }

    /// Polarization of a degree n1+n2 form into bidegree (n1, n2).
    fn polarize(h: &[BigRational], n1: usize, n2: usize) -> Bihom {
        let n = n1 + n2;
        let mut out = Bihom::zero(n1, n2);
        for (c, hc) in h.iter().enumerate() {
            if hc.is_zero() {
                continue;
            }
            for a in 0..=n1.min(c) {
                let b = c - a;
                if b > n2 {
                    continue;
                }
                out.c[a][b] += hc * binom(n1, a) * binom(n2, b) / binom(n, c);
            }
        }
        out
    }
}

fn rational_matrix(rows: usize, cols: Vec<Vec<BigRational>>, field: &BaseField) -> Matrix {
    let vs: Vec<Vector> = cols.into_iter().map(|c| c.into_iter().map(|x| PadicNumber::exact(x, field)).collect()).collect();
    Matrix::from_columns(rows, &vs, field)
}

fn unit_vec(n: usize, i: usize) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); n];
    v[i] = BigRational::one();
    v
}

/// Exact rational maps (π_j, ι_j) for Sym^r2 ⊗ Sym^r3 of a rank-2 space, with
/// π_j ι_j = id; π_j applies the contraction j times and restricts to the
/// diagonal, ι_j multiplies the polarization by the j-th power of the
/// determinant form.
pub fn clebsch_gordan_maps(r2: usize, r3: usize, j: usize, field: &BaseField) -> (Matrix, Matrix) {
    let big = (r2 + 1) * (r3 + 1);
    let small = r2 + r3 - 2 * j + 1;
    let pi_of = |v: &[BigRational]| {
        let mut b = Bihom::from_flat(r2, r3, v);
        for _ in 0..j {
            b = b.omega();
        }
        b.diagonal()
    };
    let iota_raw = |h: &[BigRational]| {
        let mut b = Bihom::polarize(h, r2 - j, r3 - j);
        for _ in 0..j {
            b = b.times_delta();
        }
        b.flat()
    };
    let probe = unit_vec(small, 0);
    let back = pi_of(&iota_raw(&probe));
    let scale = back[0].clone();
    let pi_cols: Vec<Vec<BigRational>> = (0..big).map(|i| pi_of(&unit_vec(big, i))).collect();
    let iota_cols: Vec<Vec<BigRational>> =
        (0..small).map(|i| iota_raw(&unit_vec(small, i)).into_iter().map(|x| x / &scale).collect()).collect();
    (rational_matrix(small, pi_cols, field), rational_matrix(big, iota_cols, field))
}

/// Sym^r2 H ⊗ Sym^r3 H = ⊕_j Sym^(r2+r3-2j) H (-j) for a rank-2 module H
/// with nondegenerate alternating pairing `pairing`; requires det Φ = p so
/// the determinant line is Q_p(-1).
pub fn clebsch_gordan(h: &FilPhiNModule, pairing: &Matrix, r2: usize, r3: usize) -> Result<Vec<TwistedSummand>> {
    let field = h.field().clone();
    if h.dim() != 2 || pairing.rows() != 2 || pairing.cols() != 2 {
        return Err(Error::domain("Clebsch-Gordan needs a rank-2 module and a 2x2 pairing"));
    }
    let anti = pairing.add(&pairing.transpose()).is_zero_at_precision();
    if !anti || pairing.det()?.is_zero_at_precision() {
        return Err(Error::domain("pairing is degenerate or not alternating"));
    }
    let det = h.phi.det()?;
    let p = field.int(field.p() as i64);
    if !det.sub(&p).is_zero_at_precision() {
        return Err(Error::domain(format!("det Phi = {det}, expected p")));
    }
    let (r2, r3) = if r2 <= r3 { (r2, r3) } else { (r3, r2) };
    let mut out = Vec::new();
    for j in 0..=r2 {
        let (proj, emb) = clebsch_gordan_maps(r2, r3, j, &field);
        let module = twist(&sym(h, r2 + r3 - 2 * j)?, -(j as i64));
        out.push(TwistedSummand { module, twist: -(j as i64), embedding: emb, projection: proj });
    }
    Ok(out)
}

/// Projection Sym^r2 ⊗ Sym^r3 → Sym^r1 (-t) with r1 = r2 + r3 - 2t.
pub fn cg_projection(r1: usize, r2: usize, r3: usize, field: &BaseField) -> Result<Matrix> {
    if r1 > r2 + r3 || (r2 + r3 - r1) % 2 == 1 || (r2 + r3 - r1) / 2 > r2.min(r3) {
        return Err(Error::domain(format!("Sym^{r1} is not a summand of Sym^{r2} ⊗ Sym^{r3}")));
    }
    let t = (r2 + r3 - r1) / 2;
    if r2 <= r3 {
        Ok(clebsch_gordan_maps(r2, r3, t, field).0)
    } else {
        let swap = swap_matrix(r3 + 1, r2 + 1, field);
        let (pi, _) = clebsch_gordan_maps(r3, r2, t, field);
        // contraction is antisymmetric under swapping the factors
        let sign = if t % 2 == 0 { field.one() } else { field.int(-1) };
        Ok(pi.mul(&swap).scale(&sign))
    }
}

/// Permutation W ⊗ V → V ⊗ W with dim V = a, dim W = b.
fn swap_matrix(a: usize, b: usize, field: &BaseField) -> Matrix {
    let mut m = Matrix::zeros(a * b, a * b, field);
    for i in 0..a {
        for k in 0..b {
            m.set(i * b + k, k * a + i, field.one());
        }
    }
    m
}

/// The Φ-compatible pairing on Sym^r of a rank-2 space, ⟨f, g⟩ = Ω^r(f ⊗ g);
/// satisfies Sym^r(Φ)^T G Sym^r(Φ) = det(Φ)^r G.
pub fn sym_pairing(r: usize, field: &BaseField) -> Matrix {
    let n = r + 1;
    Matrix::from_fn(n, n, field, |a, b| {
        let mut v = vec![BigRational::zero(); n * n];
        v[a * n + b] = BigRational::one();
        let mut bh = Bihom::from_flat(r, r, &v);
        for _ in 0..r {
            bh = bh.omega();
        }
        PadicNumber::exact(bh.c[0][0].clone(), field)
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Purity {
    Pure(i64),
    NotPure { moduli: Vec<f64> },
}

fn rpoly_trim(mut a: Vec<BigRational>) -> Vec<BigRational> {
    while a.last().is_some_and(|x| x.is_zero()) {
        a.pop();
    }
    a
}

fn rpoly_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = rpoly_trim(a.to_vec());
    let b = rpoly_trim(b.to_vec());
    let lb = b.last().unwrap().clone();
    while r.len() >= b.len() {
        let c = r.last().unwrap() / &lb;
        let shift = r.len() - b.len();
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] -= &c * bi;
        }
        r.pop();
        r = rpoly_trim(r);
    }
    r
}

fn rpoly_gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let (mut x, mut y) = (rpoly_trim(a.to_vec()), rpoly_trim(b.to_vec()));
    while !y.is_empty() {
        let r = rpoly_rem(&x, &y);
        x = y;
        y = r;
    }
    x
}

fn rpoly_div_exact(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = rpoly_trim(a.to_vec());
    let b = rpoly_trim(b.to_vec());
    let lb = b.last().unwrap().clone();
    let mut q = vec![BigRational::zero(); r.len() + 1 - b.len()];
    while r.len() >= b.len() && !r.is_empty() {
        let c = r.last().unwrap() / &lb;
        let shift = r.len() - b.len();
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] -= &c * bi;
        }
        q[shift] = c;
        r.pop();
        r = rpoly_trim(r);
    }
    q
}

/// Squarefree part of a rational polynomial (ascending coefficients).
pub fn squarefree_part(f: &[BigRational]) -> Vec<BigRational> {
    let f = rpoly_trim(f.to_vec());
    if f.len() <= 2 {
        return f;
    }
    let df: Vec<BigRational> = f.iter().enumerate().skip(1).map(|(i, c)| c * rat(i as i64)).collect();
    let g = rpoly_gcd(&f, &df);
    if g.len() <= 1 {
        f
    } else {
        rpoly_div_exact(&f, &g)
    }
}

/// Complex roots of a polynomial (ascending f64 coefficients) by Aberth
/// iteration.
pub fn complex_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let mut c: Vec<f64> = coeffs.to_vec();
    while c.last().is_some_and(|x| *x == 0.0) {
        c.pop();
    }
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return vec![];
    }
    let lead = c[n];
    // z = scale·w puts the geometric mean of the root moduli at 1
    let scale = if c[0] != 0.0 { (c[0] / lead).abs().powf(1.0 / n as f64) } else { 1.0 };
    let a: Vec<Complex64> =
        c.iter().enumerate().map(|(k, x)| Complex64::new(x / lead * scale.powi(k as i32 - n as i32), 0.0)).collect();
    let eval = |z: Complex64| {
        let mut v = Complex64::new(0.0, 0.0);
        let mut dv = Complex64::new(0.0, 0.0);
        for k in (0..=n).rev() {
            dv = dv * z + v;
            v = v * z + a[k];
        }
        (v, dv)
    };
    let radius = 1.0 + a[..n].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> =
        (0..n).map(|k| Complex64::from_polar(radius * 0.5, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64)).collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (v, dv) = eval(z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / dv;
            let s: Complex64 = (0..n).filter(|&k| k != i).map(|k| Complex64::new(1.0, 0.0) / (z[i] - z[k])).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            z[i] -= w;
            moved = moved.max(w.norm() / z[i].norm().max(1.0));
        }
        if moved < 1e-15 {
            break;
        }
    }
    // Newton polish
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (v, dv) = eval(*zi);
            if dv.norm() > 0.0 {
                *zi -= v / dv;
            }
        }
    }
    z.into_iter().map(|w| w * scale).collect()
}

/// Weight w if every root of the exact rational charpoly has modulus
/// q^(w/2) within 1e-8 relative error.
pub fn purity_weights_poly(coeffs: &[BigRational], q: u64) -> Purity {
    let sf = squarefree_part(coeffs);
    let fc: Vec<f64> = sf.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
    let roots = complex_roots(&fc);
    if roots.is_empty() {
        return Purity::Pure(0);
    }
    let moduli: Vec<f64> = roots.iter().map(|z| z.norm()).collect();
    let lq = (q as f64).ln();
    let w = (2.0 * moduli[0].ln() / lq).round() as i64;
    let target = (q as f64).powf(w as f64 / 2.0);
    if moduli.iter().all(|m| (m - target).abs() <= 1e-8 * target) {
        Purity::Pure(w)
    } else {
        Purity::NotPure { moduli }
    }
}

pub fn purity_weights(phi: &Matrix, q: u64) -> Result<Purity> {
    let cp = charpoly(phi)?;
    let coeffs = cp.rational_coeffs().ok_or_else(|| Error::domain("charpoly of Phi is not exact"))?;
    Ok(purity_weights_poly(&coeffs, q))
}

/// |a| ≤ bound exactly, for integer a and bound = 2g sqrt(q): a² ≤ 4g²q.
pub fn weil_bound_holds(a1: &BigInt, genus: u64, q: u64) -> bool {
    let lhs = a1.abs() * a1.abs();
    lhs <= BigInt::from(4 * genus * genus * q)
}
