//! Bounded cochain complexes over Q_p, chain maps, cones, fibers, the
//! square fiber and cohomology with explicit section/lift data.
//!
//! Sign convention: `Cone(f)^i = B^i ⊕ A^(i+1)` with differential
//! `[[d_B, f], [0, -d_A]]`; the fiber `Fib(f)^i = A^i ⊕ B^(i-1)` has
//! differential `(a, b) ↦ (d a, -f a - d b)`, which is `Cone(f)[-1]` with its
//! two blocks swapped.

use crate::error::{Error, Result};
use crate::linalg::{echelon, kernel, Matrix, Subspace, Vector};
use crate::padic::{BaseField, PadicNumber};

#[derive(Clone, Debug)]
pub struct Complex {
    lo: i32,
    dims: Vec<usize>,
    diffs: Vec<Matrix>,
    field: BaseField,
}

impl Complex {
    /// `dims[k]` is the dimension in degree `lo + k`; `diffs[k]` maps degree
    /// `lo + k` to `lo + k + 1`.
    pub fn new(lo: i32, dims: Vec<usize>, diffs: Vec<Matrix>, field: &BaseField) -> Result<Self> {
        if diffs.len() + 1 != dims.len().max(1) {
            return Err(Error::domain("need one differential between consecutive degrees"));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.rows() != dims[k + 1] || d.cols() != dims[k] {
                return Err(Error::domain(format!("differential in degree {} has wrong shape", lo + k as i32)));
            }
        }
        Ok(Complex { lo, dims, diffs, field: field.clone() })
    }

    /// Complex with zero differentials.
    pub fn split(lo: i32, dims: Vec<usize>, field: &BaseField) -> Self {
        let diffs = (0..dims.len().saturating_sub(1)).map(|k| Matrix::zeros(dims[k + 1], dims[k], field)).collect();
        Complex { lo, dims, diffs, field: field.clone() }
    }

    pub fn zero(field: &BaseField) -> Self {
        Complex { lo: 0, dims: vec![0], diffs: vec![], field: field.clone() }
    }

    pub fn field(&self) -> &BaseField {
        &self.field
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.dims.len() as i32 - 1
    }

    pub fn dim(&self, i: i32) -> usize {
        if i < self.lo || i > self.hi() {
            0
        } else {
            self.dims[(i - self.lo) as usize]
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// d_i : C^i → C^(i+1) (a zero matrix outside the stored range).
    pub fn d(&self, i: i32) -> Matrix {
        if i >= self.lo && i < self.hi() {
            self.diffs[(i - self.lo) as usize].clone()
        } else {
            Matrix::zeros(self.dim(i + 1), self.dim(i), &self.field)
        }
    }

    pub fn is_split(&self) -> bool {
        self.diffs.iter().all(|d| d.is_exact_zero())
    }

    /// Builds a complex over `[lo, hi]` from a dimension and a differential
    /// function.
    pub fn from_fn(lo: i32, hi: i32, field: &BaseField, dim: impl Fn(i32) -> usize, d: impl Fn(i32) -> Matrix) -> Result<Self> {
        let dims: Vec<usize> = (lo..=hi).map(&dim).collect();
        let diffs = (lo..hi).map(d).collect();
        Complex::new(lo, dims, diffs, field)
    }

    /// Euler characteristic of the underlying graded space.
    pub fn euler_characteristic(&self) -> i64 {
        (self.lo..=self.hi()).map(|i| if i.rem_euclid(2) == 0 { self.dim(i) as i64 } else { -(self.dim(i) as i64) }).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub degree: i32,
    pub row: usize,
    pub col: usize,
}

/// Checks d_(i+1) d_i = 0; reports the first nonzero entry.
pub fn verify_complex(c: &Complex) -> std::result::Result<(), Violation> {
    for i in c.lo()..c.hi() - 1 {
        let dd = c.d(i + 1).mul(&c.d(i));
        for r in 0..dd.rows() {
            for col in 0..dd.cols() {
                if !dd.get(r, col).is_zero_at_precision() {
                    return Err(Violation { degree: i, row: r, col });
                }
            }
        }
    }
    Ok(())
}

/// Degree-wise components f_i : A^i → B^i.
#[derive(Clone, Debug)]
pub struct ChainMap {
    source: Complex,
    target: Complex,
    lo: i32,
    comps: Vec<Matrix>,
}

impl ChainMap {
    pub fn new(source: &Complex, target: &Complex, f: impl Fn(i32) -> Matrix) -> Result<Self> {
        let lo = source.lo().min(target.lo());
        let hi = source.hi().max(target.hi());
        let mut comps = Vec::new();
        for i in lo..=hi {
            let m = f(i);
            if m.rows() != target.dim(i) || m.cols() != source.dim(i) {
                return Err(Error::domain(format!("chain map component in degree {i} has wrong shape")));
            }
            comps.push(m);
        }
        Ok(ChainMap { source: source.clone(), target: target.clone(), lo, comps })
    }

    pub fn identity(c: &Complex) -> Self {
        ChainMap::new(c, c, |i| Matrix::identity(c.dim(i), c.field())).unwrap()
    }

    pub fn zero(source: &Complex, target: &Complex) -> Self {
        ChainMap::new(source, target, |i| Matrix::zeros(target.dim(i), source.dim(i), source.field())).unwrap()
    }

    pub fn source(&self) -> &Complex {
        &self.source
    }

    pub fn target(&self) -> &Complex {
        &self.target
    }

    pub fn at(&self, i: i32) -> Matrix {
        let k = i - self.lo;
        if k >= 0 && (k as usize) < self.comps.len() {
            self.comps[k as usize].clone()
        } else {
            Matrix::zeros(self.target.dim(i), self.source.dim(i), self.source.field())
        }
    }

    /// self ∘ g.
    pub fn compose(&self, g: &ChainMap) -> Result<ChainMap> {
        ChainMap::new(g.source(), self.target(), |i| self.at(i).mul(&g.at(i)))
    }

    pub fn add(&self, g: &ChainMap) -> Result<ChainMap> {
        ChainMap::new(self.source(), self.target(), |i| self.at(i).add(&g.at(i)))
    }

    pub fn scale(&self, c: &PadicNumber) -> ChainMap {
        ChainMap::new(self.source(), self.target(), |i| self.at(i).scale(c)).unwrap()
    }

    /// f_(i+1) d_i = d'_i f_i for all i.
    pub fn verify(&self) -> Result<()> {
        let lo = self.source.lo().min(self.target.lo()) - 1;
        let hi = self.source.hi().max(self.target.hi());
        for i in lo..=hi {
            let l = self.at(i + 1).mul(&self.source.d(i));
            let r = self.target.d(i).mul(&self.at(i));
            if !l.sub(&r).is_zero_at_precision() {
                return Err(Error::domain(format!("chain map does not commute with d in degree {i}")));
            }
        }
        Ok(())
    }
}

/// Cone(f)^i = B^i ⊕ A^(i+1).
pub fn cone(f: &ChainMap) -> Result<Complex> {
    let (a, b) = (f.source(), f.target());
    let field = a.field().clone();
    let lo = b.lo().min(a.lo() - 1);
    let hi = b.hi().max(a.hi() - 1);
    Complex::from_fn(
        lo,
        hi,
        &field,
        |i| b.dim(i) + a.dim(i + 1),
        |i| {
            let (bi, ai1, bi1, ai2) = (b.dim(i), a.dim(i + 1), b.dim(i + 1), a.dim(i + 2));
            let mut m = Matrix::zeros(bi1 + ai2, bi + ai1, &field);
            m.place(0, 0, &b.d(i));
            m.place(0, bi, &f.at(i + 1));
            m.place(bi1, bi, &a.d(i + 1).neg());
            m
        },
    )
}

/// C[k]^i = C^(i+k), with differential multiplied by (-1)^k.
pub fn shift(c: &Complex, k: i32) -> Complex {
    let sign = if k.rem_euclid(2) == 0 { 1 } else { -1 };
    let field = c.field().clone();
    Complex::from_fn(c.lo() - k, c.hi() - k, &field, |i| c.dim(i + k), |i| c.d(i + k).scale(&field.int(sign))).unwrap()
}

/// Fib(f)^i = A^i ⊕ B^(i-1), d(a, b) = (d a, -f a - d b).
pub fn fiber(f: &ChainMap) -> Result<Complex> {
    let (a, b) = (f.source(), f.target());
    let field = a.field().clone();
    let lo = a.lo().min(b.lo() + 1);
    let hi = a.hi().max(b.hi() + 1);
    Complex::from_fn(
        lo,
        hi,
        &field,
        |i| a.dim(i) + b.dim(i - 1),
        |i| {
            let (ai, bi1, ai1, bi) = (a.dim(i), b.dim(i - 1), a.dim(i + 1), b.dim(i));
            let mut m = Matrix::zeros(ai1 + bi, ai + bi1, &field);
            m.place(0, 0, &a.d(i));
            m.place(ai1, 0, &f.at(i).neg());
            m.place(ai1, ai, &b.d(i - 1).neg());
            m
        },
    )
}

/// Degree-wise direct sum.
pub fn direct_sum(parts: &[&Complex], field: &BaseField) -> Complex {
    if parts.is_empty() {
        return Complex::zero(field);
    }
    let lo = parts.iter().map(|c| c.lo()).min().unwrap();
    let hi = parts.iter().map(|c| c.hi()).max().unwrap();
    Complex::from_fn(lo, hi, field, |i| parts.iter().map(|c| c.dim(i)).sum(), |i| {
        let blocks: Vec<Matrix> = parts.iter().map(|c| c.d(i)).collect();
        let refs: Vec<&Matrix> = blocks.iter().collect();
        Matrix::block_diag(&refs, field)
    })
    .unwrap()
}

/// A --alpha--> B
/// |va          |vb
/// C --gamma--> D
#[derive(Clone, Debug)]
pub struct CommutativeSquare {
    pub alpha: ChainMap,
    pub va: ChainMap,
    pub vb: ChainMap,
    pub gamma: ChainMap,
}

impl CommutativeSquare {
    pub fn new(alpha: ChainMap, va: ChainMap, vb: ChainMap, gamma: ChainMap) -> Result<Self> {
        let s = CommutativeSquare { alpha, va, vb, gamma };
        s.verify()?;
        Ok(s)
    }

    pub fn verify(&self) -> Result<()> {
        let a = self.alpha.source();
        for i in a.lo()..=a.hi() {
            let l = self.vb.at(i).mul(&self.alpha.at(i));
            let r = self.gamma.at(i).mul(&self.va.at(i));
            if !l.sub(&r).is_zero_at_precision() {
                return Err(Error::domain(format!("square does not commute in degree {i}")));
            }
        }
        Ok(())
    }
}

/// Fib(alpha), Fib(gamma) and the induced map h(a, b) = (v_A a, v_B b)
/// between them; `fiber(h)` is the square fiber.
pub fn square_rows(s: &CommutativeSquare) -> Result<(Complex, Complex, ChainMap)> {
    let top = fiber(&s.alpha)?;
    let bottom = fiber(&s.gamma)?;
    let a = s.alpha.source();
    let c = s.gamma.source();
    let field = a.field().clone();
    let h = ChainMap::new(&top, &bottom, |i| {
        let (ai, bi1, ci, di1) = (a.dim(i), s.alpha.target().dim(i - 1), c.dim(i), s.gamma.target().dim(i - 1));
        let mut m = Matrix::zeros(ci + di1, ai + bi1, &field);
        m.place(0, 0, &s.va.at(i));
        m.place(ci, ai, &s.vb.at(i - 1));
        m
    })?;
    Ok((top, bottom, h))
}

/// Fib(Fib(alpha) → Fib(gamma)); degree i is A^i ⊕ B^(i-1) ⊕ C^(i-1) ⊕ D^(i-2)
/// with d(a, b, c, e) = (da, -αa - db, -v_A a - dc, -v_B b + γc + de).
pub fn square_fiber(s: &CommutativeSquare) -> Result<Complex> {
    s.verify()?;
    let a = s.alpha.source();
    let b = s.alpha.target();
    let c = s.gamma.source();
    let dd = s.gamma.target();
    let field = a.field().clone();
    let lo = a.lo().min(b.lo() + 1).min(c.lo() + 1).min(dd.lo() + 2);
    let hi = a.hi().max(b.hi() + 1).max(c.hi() + 1).max(dd.hi() + 2);
    let dims = |i: i32| [a.dim(i), b.dim(i - 1), c.dim(i - 1), dd.dim(i - 2)];
    Complex::from_fn(
        lo,
        hi,
        &field,
        |i| dims(i).iter().sum(),
        |i| {
            let src = dims(i);
            let tgt = dims(i + 1);
            let so = [0, src[0], src[0] + src[1], src[0] + src[1] + src[2]];
            let to = [0, tgt[0], tgt[0] + tgt[1], tgt[0] + tgt[1] + tgt[2]];
            let mut m = Matrix::zeros(tgt.iter().sum(), src.iter().sum(), &field);
            m.place(to[0], so[0], &a.d(i));
            m.place(to[1], so[0], &s.alpha.at(i).neg());
            m.place(to[1], so[1], &b.d(i - 1).neg());
            m.place(to[2], so[0], &s.va.at(i).neg());
            m.place(to[2], so[2], &c.d(i - 1).neg());
            m.place(to[3], so[1], &s.vb.at(i - 1).neg());
            m.place(to[3], so[2], &s.gamma.at(i - 1));
            m.place(to[3], so[3], &dd.d(i - 2));
            m
        },
    )
}

/// H^i with explicit class coordinates.
#[derive(Clone, Debug)]
pub struct CohomologySpace {
    pub degree: i32,
    pub dim: usize,
    pub cocycles: Subspace,
    pub coboundaries: Subspace,
    /// dim × C^i; applied to a cocycle gives its class coordinates.
    pub section: Matrix,
    /// C^i × dim; columns are cocycle representatives of the basis classes.
    pub lift: Matrix,
}

impl CohomologySpace {
    pub fn class_of(&self, v: &[PadicNumber]) -> Vector {
        self.section.mul_vec(v)
    }

    pub fn representative(&self, coords: &[PadicNumber]) -> Vector {
        self.lift.mul_vec(coords)
    }

    pub fn is_cocycle(&self, v: &[PadicNumber]) -> Result<bool> {
        self.cocycles.contains(v)
    }
}

/// H^i = ker d_i / im d_(i-1).
pub fn cohomology(c: &Complex, i: i32) -> Result<CohomologySpace> {
    let field = c.field().clone();
    let n = c.dim(i);
    let z = kernel(&c.d(i))?;
    let bsp = Subspace::column_space(&c.d(i - 1))?;
    let zb = z.basis().clone();
    let zd = z.dim();
    // left inverse of the cocycle basis
    let e = echelon(&zb)?;
    let left = e.transform.submatrix(0, zd, 0, n);
    let bz: Vec<Vector> = bsp.vectors().iter().map(|v| left.mul_vec(v)).collect();
    let bz_space = Subspace::span(zd, &bz, &field)?;
    let comp = bz_space.complement()?;
    let h = comp.cols();
    let full = Matrix::hstack(&[bz_space.basis(), &comp], zd, &field);
    let winv = full.inverse()?;
    let bottom = winv.submatrix(bz_space.dim(), zd, 0, zd);
    let section = bottom.mul(&left);
    let lift = zb.mul(&comp);
    Ok(CohomologySpace { degree: i, dim: h, cocycles: z, coboundaries: bsp, section, lift })
}

/// Matrix of H^i(f) in the stored class coordinates.
pub fn induced_map(f: &ChainMap, i: i32) -> Result<Matrix> {
    let hs = cohomology(f.source(), i)?;
    let ht = cohomology(f.target(), i)?;
    Ok(induced_map_with(f, i, &hs, &ht))
}

pub fn induced_map_with(f: &ChainMap, i: i32, src: &CohomologySpace, tgt: &CohomologySpace) -> Matrix {
    tgt.section.mul(&f.at(i)).mul(&src.lift)
}

/// Quotient of a complex by a subcomplex given degree-wise.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub complex: Complex,
    /// C^i → Q^i.
    pub projection: ChainMap,
    /// Q^i → C^i, a linear (not chain) section of the projection.
    pub sections: Vec<Matrix>,
    lo: i32,
}

impl Quotient {
    pub fn section(&self, i: i32) -> Matrix {
        let k = i - self.lo;
        if k >= 0 && (k as usize) < self.sections.len() {
            self.sections[k as usize].clone()
        } else {
            Matrix::zeros(self.projection.source().dim(i), 0, self.complex.field())
        }
    }
}

/// C / F for a degree-wise subcomplex F (`sub(i)` is F^i in C^i).
pub fn quotient_complex(c: &Complex, sub: impl Fn(i32) -> Subspace) -> Result<Quotient> {
    let field = c.field().clone();
    let (lo, hi) = (c.lo(), c.hi());
    let mut projs = Vec::new();
    let mut secs = Vec::new();
    for i in lo..=hi {
        let f = sub(i);
        if f.ambient() != c.dim(i) {
            return Err(Error::domain(format!("subspace in degree {i} has wrong ambient dimension")));
        }
        let comp = f.complement()?;
        let full = Matrix::hstack(&[f.basis(), &comp], c.dim(i), &field);
        let inv = full.inverse()?;
        projs.push(inv.submatrix(f.dim(), c.dim(i), 0, c.dim(i)));
        secs.push(comp);
    }
    for i in lo..hi {
        let image = sub(i).image(&c.d(i))?;
        if !sub(i + 1).contains_subspace(&image)? {
            return Err(Error::domain(format!("filtration step is not a subcomplex in degree {i}")));
        }
    }
    let qdims: Vec<usize> = projs.iter().map(|p| p.rows()).collect();
    let q = Complex::from_fn(lo, hi, &field, |i| qdims[(i - lo) as usize], |i| {
        let k = (i - lo) as usize;
        projs[k + 1].mul(&c.d(i)).mul(&secs[k])
    })?;
    let projection = ChainMap::new(c, &q, |i| {
        if i < lo || i > hi {
            Matrix::zeros(0, 0, &field)
        } else {
            projs[(i - lo) as usize].clone()
        }
    })?;
    Ok(Quotient { complex: q, projection, sections: secs, lo })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> BaseField {
        BaseField::new(5, 10).unwrap()
    }

    #[test]
    fn acyclic_identity_complex() {
        let f = k();
        let c = Complex::new(0, vec![1, 1], vec![Matrix::identity(1, &f)], &f).unwrap();
        for i in -1..=2 {
            assert_eq!(cohomology(&c, i).unwrap().dim, 0);
        }
    }

    #[test]
    fn split_complex_cohomology() {
        let f = k();
        let c = Complex::split(0, vec![2, 3, 1], &f);
        assert_eq!(cohomology(&c, 0).unwrap().dim, 2);
        assert_eq!(cohomology(&c, 1).unwrap().dim, 3);
        assert_eq!(cohomology(&c, 2).unwrap().dim, 1);
    }

    #[test]
    fn violation_reported() {
        let f = k();
        let c = Complex::new(
            0,
            vec![1, 1, 1],
            vec![Matrix::identity(1, &f), Matrix::identity(1, &f)],
            &f,
        )
        .unwrap();
        assert_eq!(verify_complex(&c), Err(Violation { degree: 0, row: 0, col: 0 }));
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let f = k();
        let c = Complex::new(0, vec![2, 1], vec![Matrix::from_ints(&[vec![1, 1]], &f)], &f).unwrap();
        let cn = cone(&ChainMap::identity(&c)).unwrap();
        assert!(verify_complex(&cn).is_ok());
        for i in cn.lo()..=cn.hi() {
            assert_eq!(cohomology(&cn, i).unwrap().dim, 0);
        }
    }

    #[test]
    fn zero_square_fiber() {
        let f = k();
        let z = Complex::zero(&f);
        let m = ChainMap::zero(&z, &z);
        let s = CommutativeSquare::new(m.clone(), m.clone(), m.clone(), m).unwrap();
        let sf = square_fiber(&s).unwrap();
        assert!(sf.dims().iter().all(|&d| d == 0));
    }

    #[test]
    fn section_kills_coboundaries() {
        let f = k();
        let c = Complex::new(0, vec![1, 2, 1], vec![Matrix::from_ints(&[vec![1], vec![2]], &f), Matrix::from_ints(&[vec![2, -1]], &f)], &f).unwrap();
        assert!(verify_complex(&c).is_ok());
        let h = cohomology(&c, 1).unwrap();
        assert_eq!(h.dim, 0);
        let h2 = cohomology(&c, 2).unwrap();
        assert_eq!(h2.dim, 0);
    }
}
