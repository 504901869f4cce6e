//! Syntomic P-cohomology of a geometry package.
//!
//! A package carries a Hyodo–Kato complex with Frobenius and monodromy, a
//! filtered de Rham complex, the comparison map between them, an optional
//! chain-level trace pairing and a list of points with pullback maps. The
//! semistable complex is the square fiber of
//!
//! ```text
//! HK --(P(Φ), Ψ̄)--> HK ⊕ DR(n)
//!  |N                 |(N, 0)
//! HK ----P(pΦ)-----> HK
//! ```
//!
//! and the good-reduction complex is the fiber of the top row. Cochains are
//! laid out as `(x, y, z, u, v)`; `SynCochain` stores `u` and `v` with the
//! opposite sign to the raw layout so that its five conditions read
//! `Nx - du = 0` and `Ny + P(pΦ)u + dv = 0`.

use crate::error::{Error, Result};
use crate::homological::{
    cohomology, direct_sum, fiber, induced_map, quotient_complex, square_fiber, square_rows, verify_complex, ChainMap,
    CohomologySpace, CommutativeSquare, Complex, Quotient,
};
use crate::linalg::{apply_poly, bilinear, charpoly, kernel, solve, vec_add, Matrix, Subspace, Vector};
use crate::padic::{BaseField, PadicNumber, PadicPoly};
use crate::phin::{FilPhiNModule, Filtration};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Semistable,
    Good,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Support {
    Ordinary,
    Compact,
}

/// Filtered de Rham complex with its comparison map from HK.
#[derive(Clone, Debug)]
pub struct DeRhamData {
    pub dr: Complex,
    pub psi: ChainMap,
    /// Hodge filtration of each cochain space, indexed by `degree - dr.lo()`.
    pub fil: Vec<Filtration>,
}

impl DeRhamData {
    pub fn fil_at(&self, i: i32, n: i64) -> Subspace {
        let field = self.dr.field();
        let k = i - self.dr.lo();
        if k < 0 || k as usize >= self.fil.len() {
            return Subspace::zero(self.dr.dim(i), field);
        }
        self.fil[k as usize].at(n, field)
    }

    fn label_range(&self) -> (i64, i64) {
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for f in &self.fil {
            let (a, b) = f.range();
            if a <= b {
                lo = lo.min(a);
                hi = hi.max(b);
            }
        }
        if lo > hi {
            (0, 0)
        } else {
            (lo, hi)
        }
    }
}

/// Chain-level pairing into the top degree: `G_i` pairs degree `i` with
/// degree `2d - i`, and Frobenius acts on the top by `lambda`.
#[derive(Clone, Debug)]
pub struct PackagePairing {
    /// Index `i` for `0 ≤ i ≤ 2d`.
    pub hk: Vec<Matrix>,
    pub dr: Vec<Matrix>,
    pub lambda: PadicNumber,
}

impl PackagePairing {
    /// Fil label of the top class: v_p(λ), which is d for a geometric package.
    pub fn top_label(&self) -> i64 {
        self.lambda.valuation().unwrap_or(0)
    }

    fn form(forms: &[Matrix], i: i32, rows: usize, cols: usize, field: &BaseField) -> Matrix {
        if i >= 0 && (i as usize) < forms.len() {
            forms[i as usize].clone()
        } else {
            Matrix::zeros(rows, cols, field)
        }
    }
}

#[derive(Clone, Debug)]
pub struct PointPullback {
    pub name: String,
    pub package: GeometryPackage,
    /// Pullback on Hyodo–Kato cochains, package → point.
    pub hk: ChainMap,
    /// Pullback on de Rham cochains.
    pub dr: ChainMap,
    /// Primitive data c_i: package degree i → point degree i - 1, indexed by
    /// `i - hk.lo()`. The syntomic pullback adds P(Φ)c to the y slot; for a
    /// curve c is the Coleman integral from the base point.
    pub primitive: Vec<Matrix>,
}

impl PointPullback {
    pub fn new(name: &str, package: GeometryPackage, hk: ChainMap, dr: ChainMap) -> Self {
        PointPullback { name: name.to_string(), package, hk, dr, primitive: vec![] }
    }

    pub fn with_primitive(mut self, primitive: Vec<Matrix>) -> Self {
        self.primitive = primitive;
        self
    }

    /// c_i, zero when absent.
    pub fn primitive_at(&self, source: &Complex, i: i32) -> Matrix {
        let k = i - source.lo();
        let target = &self.package.hk;
        match (k >= 0).then(|| self.primitive.get(k as usize)).flatten() {
            Some(m) => m.clone(),
            None => Matrix::zeros(target.dim(i - 1), source.dim(i), source.field()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GeometryPackage {
    pub name: String,
    pub field: BaseField,
    pub dimension: i32,
    pub hk: Complex,
    pub phi: ChainMap,
    pub nmon: ChainMap,
    pub de_rham: DeRhamData,
    pub compact: Option<DeRhamData>,
    pub pairing: Option<PackagePairing>,
    /// Exact characteristic polynomials of Φ on each HK cochain space,
    /// indexed by `degree - hk.lo()`; used to certify P(Φ) = 0.
    pub certificates: Vec<Option<PadicPoly>>,
    pub points: Vec<PointPullback>,
}

fn split_degrees(lo: i32, mats: &[Matrix]) -> impl Fn(i32) -> Matrix + '_ {
    move |i| {
        let k = i - lo;
        mats[k as usize].clone()
    }
}

impl GeometryPackage {
    /// Package with zero differentials, HK = dR and Ψ = identity.
    pub fn split(
        name: &str,
        field: &BaseField,
        dimension: i32,
        lo: i32,
        phis: Vec<Matrix>,
        nmats: Option<Vec<Matrix>>,
        fil: Vec<Filtration>,
    ) -> Result<Self> {
        let dims: Vec<usize> = phis.iter().map(|m| m.rows()).collect();
        let hk = Complex::split(lo, dims.clone(), field);
        let nmon = match nmats {
            Some(ns) => Some(ChainMap::new(&hk, &hk, split_degrees(lo, &ns))?),
            None => None,
        };
        GeometryPackage::from_complex(name, dimension, hk, phis, nmon, fil)
    }

    /// Package on a given complex with HK = dR and Ψ = identity.
    pub fn from_complex(
        name: &str,
        dimension: i32,
        hk: Complex,
        phis: Vec<Matrix>,
        nmon: Option<ChainMap>,
        fil: Vec<Filtration>,
    ) -> Result<Self> {
        let field = &hk.field().clone();
        let lo = hk.lo();
        let phi = ChainMap::new(&hk, &hk, split_degrees(lo, &phis))?;
        let nmon = nmon.unwrap_or_else(|| ChainMap::zero(&hk, &hk));
        let psi = ChainMap::identity(&hk);
        let certificates = phis.iter().map(|m| if m.is_exact() { charpoly(m).ok() } else { None }).collect();
        Ok(GeometryPackage {
            name: name.to_string(),
            field: field.clone(),
            dimension,
            de_rham: DeRhamData { dr: hk.clone(), psi, fil },
            hk,
            phi,
            nmon,
            compact: None,
            pairing: None,
            certificates,
            points: vec![],
        })
    }

    /// Spec of the base field: Q_p in degree 0, Φ = 1, Fil^0 = all, Fil^1 = 0.
    pub fn point(field: &BaseField) -> Self {
        let mut g = GeometryPackage::split(
            "point",
            field,
            0,
            0,
            vec![Matrix::identity(1, field)],
            None,
            vec![Filtration::concentrated(1, 0, field)],
        )
        .unwrap();
        g.pairing = Some(PackagePairing {
            hk: vec![Matrix::identity(1, field)],
            dr: vec![Matrix::identity(1, field)],
            lambda: field.one(),
        });
        g
    }

    /// Same pairing on HK and dR cochains.
    pub fn with_pairing(mut self, forms: Vec<Matrix>, lambda: PadicNumber) -> Self {
        self.pairing = Some(PackagePairing { hk: forms.clone(), dr: forms, lambda });
        self
    }

    pub fn de_rham_for(&self, support: Support) -> &DeRhamData {
        match (support, &self.compact) {
            (Support::Compact, Some(c)) => c,
            _ => &self.de_rham,
        }
    }

    pub fn point_named(&self, name: &str) -> Result<&PointPullback> {
        self.points.iter().find(|p| p.name == name).ok_or_else(|| Error::domain(format!("no point named {name}")))
    }

    fn certificate(&self, i: i32) -> Option<&PadicPoly> {
        let k = i - self.hk.lo();
        if k < 0 {
            return None;
        }
        self.certificates.get(k as usize).and_then(|c| c.as_ref())
    }

    /// Q(Φ_i), exactly zero when the certified charpoly of Φ_i divides Q.
    fn poly_at(&self, q: &PadicPoly, i: i32) -> Matrix {
        let phi = self.phi.at(i);
        if let Some(cert) = self.certificate(i) {
            if q.is_exact() && cert.is_exact() && cert.degree().is_some() {
                if let Ok((_, r)) = q.divrem(cert) {
                    if r.is_exact_zero() {
                        return Matrix::zeros(phi.rows(), phi.cols(), &self.field);
                    }
                }
            }
        }
        apply_poly(q, &phi)
    }

    /// P(cΦ) as a chain map on HK (c = 1 when `scale` is `None`).
    pub fn poly_of_phi(&self, poly: &PadicPoly, scale: Option<&PadicNumber>) -> ChainMap {
        let q = match scale {
            Some(c) => poly.rescale(c),
            None => poly.clone(),
        };
        ChainMap::new(&self.hk, &self.hk, |i| self.poly_at(&q, i)).unwrap()
    }

    pub fn p_number(&self) -> PadicNumber {
        self.field.int(self.field.p() as i64)
    }

    pub fn hk_cohomology(&self, i: i32) -> Result<CohomologySpace> {
        cohomology(&self.hk, i)
    }

    pub fn dr_cohomology(&self, support: Support, i: i32) -> Result<CohomologySpace> {
        cohomology(&self.de_rham_for(support).dr, i)
    }

    /// F^n H^j_dR inside H^j_dR class coordinates.
    pub fn hodge_subspace(&self, support: Support, j: i32, n: i64) -> Result<Subspace> {
        let data = self.de_rham_for(support);
        let h = cohomology(&data.dr, j)?;
        let f = data.fil_at(j, n);
        let z = f.intersect(&h.cocycles)?;
        let cols: Vec<Vector> = z.vectors().iter().map(|v| h.class_of(v)).collect();
        Subspace::span(h.dim, &cols, &self.field)
    }

    /// Matrix of Φ on H^j_HK.
    pub fn frobenius_on_cohomology(&self, j: i32) -> Result<Matrix> {
        induced_map(&self.phi, j)
    }

    /// H^j of the package as a filtered (φ,N)-module (HK coordinates, Hodge
    /// filtration transported through Ψ).
    pub fn cohomology_module(&self, j: i32) -> Result<FilPhiNModule> {
        let hk = self.hk_cohomology(j)?;
        let dr = self.dr_cohomology(Support::Ordinary, j)?;
        let phi = crate::homological::induced_map_with(&self.phi, j, &hk, &hk);
        let nmat = crate::homological::induced_map_with(&self.nmon, j, &hk, &hk);
        let psi = crate::homological::induced_map_with(&self.de_rham.psi, j, &hk, &dr);
        let psi_inv = psi.inverse()?;
        let (lo, hi) = self.de_rham.label_range();
        let mut given = Vec::new();
        for r in lo..=hi {
            let s = self.hodge_subspace(Support::Ordinary, j, r)?;
            given.push((r, s.image(&psi_inv)?));
        }
        if hk.dim > 0 {
            given.push((lo - 1, Subspace::whole(hk.dim, &self.field)));
        }
        let fil = Filtration::new(hk.dim, given, &self.field)?;
        Ok(FilPhiNModule::new(phi, nmat, fil))
    }

    /// Checks every structural invariant; violations are validation errors.
    pub fn validate(&self) -> Result<()> {
        let field = &self.field;
        let bad = |m: String| Err(Error::validation(format!("package {}: {m}", self.name)));
        if verify_complex(&self.hk).is_err() {
            return bad("HK differential does not square to zero".into());
        }
        for (tag, m) in [("Frobenius", &self.phi), ("monodromy", &self.nmon)] {
            if m.verify().is_err() {
                return bad(format!("{tag} is not a chain map"));
            }
        }
        let p = self.p_number();
        for i in self.hk.lo()..=self.hk.hi() {
            let lhs = self.phi.at(i).mul(&self.nmon.at(i)).scale(&p);
            let rhs = self.nmon.at(i).mul(&self.phi.at(i));
            if !lhs.sub(&rhs).is_zero_at_precision() {
                return bad(format!("relation p Φ N = N Φ fails in degree {i}"));
            }
            if self.phi.at(i).rank()? != self.hk.dim(i) {
                return bad(format!("Φ is not invertible in degree {i}"));
            }
            if let Some(c) = self.certificate(i) {
                if !charpoly(&self.phi.at(i))?.eq_at_precision(c) {
                    return bad(format!("Frobenius certificate disagrees with Φ in degree {i}"));
                }
            }
        }
        let mut supports = vec![&self.de_rham];
        if let Some(c) = &self.compact {
            supports.push(c);
        }
        for data in supports {
            if verify_complex(&data.dr).is_err() {
                return bad("de Rham differential does not square to zero".into());
            }
            if data.psi.verify().is_err() {
                return bad("Ψ is not a chain map".into());
            }
            let (lo, hi) = data.label_range();
            for i in data.dr.lo()..data.dr.hi() {
                for r in lo..=hi + 1 {
                    let img = data.fil_at(i, r).image(&data.dr.d(i))?;
                    if !data.fil_at(i + 1, r).contains_subspace(&img)? {
                        return bad(format!("F^{r} is not a subcomplex in degree {i}"));
                    }
                }
            }
            for i in self.hk.lo().min(data.dr.lo())..=self.hk.hi().max(data.dr.hi()) {
                let m = induced_map(&data.psi, i)?;
                if m.rows() != m.cols() || m.rank()? != m.rows() {
                    return bad(format!("Ψ is not a quasi-isomorphism in degree {i}"));
                }
            }
        }
        if let Some(pr) = &self.pairing {
            self.validate_pairing(pr)?;
        }
        for pt in &self.points {
            pt.package.validate()?;
            let q = &pt.package;
            if pt.hk.verify().is_err() || pt.dr.verify().is_err() {
                return bad(format!("pullback to {} is not a chain map", pt.name));
            }
            for i in self.hk.lo()..=self.hk.hi() {
                let f = pt.hk.at(i);
                let ok_phi = q.phi.at(i).mul(&f).sub(&f.mul(&self.phi.at(i))).is_zero_at_precision();
                let ok_n = q.nmon.at(i).mul(&f).sub(&f.mul(&self.nmon.at(i))).is_zero_at_precision();
                let ok_psi = q.de_rham.psi.at(i).mul(&f).sub(&pt.dr.at(i).mul(&self.de_rham.psi.at(i))).is_zero_at_precision();
                if !(ok_phi && ok_n && ok_psi) {
                    return bad(format!("pullback to {} does not commute with Φ, N, Ψ in degree {i}", pt.name));
                }
            }
            for i in self.hk.lo()..=self.hk.hi() + 1 {
                let c = pt.primitive_at(&self.hk, i);
                let c_next = pt.primitive_at(&self.hk, i + 1);
                let homotopy = c_next.mul(&self.hk.d(i)).add(&q.hk.d(i - 1).mul(&c));
                let with_n = q.nmon.at(i - 1).mul(&c).sub(&c.mul(&self.nmon.at(i)));
                if !homotopy.is_zero_at_precision() || !with_n.is_zero_at_precision() {
                    return bad(format!("primitive data for {} is not a cocycle commuting with N in degree {i}", pt.name));
                }
            }
            let (lo, hi) = self.de_rham.label_range();
            for i in self.de_rham.dr.lo()..=self.de_rham.dr.hi() {
                for r in lo..=hi + 1 {
                    let img = self.de_rham.fil_at(i, r).image(&pt.dr.at(i))?;
                    if !q.de_rham.fil_at(i, r).contains_subspace(&img)? {
                        return bad(format!("pullback to {} does not respect F^{r} in degree {i}", pt.name));
                    }
                }
            }
        }
        let _ = field;
        Ok(())
    }

    fn validate_pairing(&self, pr: &PackagePairing) -> Result<()> {
        let field = &self.field;
        let top = 2 * self.dimension;
        let bad = |m: String| Err(Error::validation(format!("package {}: pairing {m}", self.name)));
        if pr.hk.len() != (top + 1) as usize || pr.dr.len() != (top + 1) as usize {
            return bad(format!("needs {} forms per side", top + 1));
        }
        let dr = &self.de_rham.dr;
        for i in 0..=top {
            let (a, b) = (self.hk.dim(i), self.hk.dim(top - i));
            if pr.hk[i as usize].rows() != a || pr.hk[i as usize].cols() != b {
                return bad(format!("HK form in degree {i} has wrong shape"));
            }
            if pr.dr[i as usize].rows() != dr.dim(i) || pr.dr[i as usize].cols() != dr.dim(top - i) {
                return bad(format!("de Rham form in degree {i} has wrong shape"));
            }
            let g = &pr.hk[i as usize];
            let lhs = self.phi.at(i).transpose().mul(g).mul(&self.phi.at(top - i));
            if !lhs.sub(&g.scale(&pr.lambda)).is_zero_at_precision() {
                return bad(format!("is not Frobenius compatible in degree {i}"));
            }
            let psi = &self.de_rham.psi;
            let back = psi.at(i).transpose().mul(&pr.dr[i as usize]).mul(&psi.at(top - i));
            if !back.sub(g).is_zero_at_precision() {
                return bad(format!("differs between HK and de Rham in degree {i}"));
            }
        }
        for (forms, cx) in [(&pr.hk, &self.hk), (&pr.dr, dr)] {
            for i in 0..top {
                let gi1 = PackagePairing::form(forms, i + 1, cx.dim(i + 1), cx.dim(top - i - 1), field);
                let gi = PackagePairing::form(forms, i, cx.dim(i), cx.dim(top - i), field);
                let sign = if i % 2 == 0 { field.one() } else { field.int(-1) };
                let l = cx.d(i).transpose().mul(&gi1).add(&gi.mul(&cx.d(top - i - 1)).scale(&sign));
                if !l.is_zero_at_precision() {
                    return bad(format!("violates the Leibniz rule in degree {i}"));
                }
            }
        }
        let (lo, hi) = self.de_rham.label_range();
        let d = pr.top_label();
        for i in 0..=top {
            for a in lo..=hi + 1 {
                let fa = self.de_rham.fil_at(i, a);
                let fb = self.de_rham.fil_at(top - i, d + 1 - a);
                if fa.dim() == 0 || fb.dim() == 0 {
                    continue;
                }
                let m = fa.basis().transpose().mul(&pr.dr[i as usize]).mul(fb.basis());
                if !m.is_zero_at_precision() {
                    return bad(format!("does not kill F^{a} × F^{} in degree {i}", d + 1 - a));
                }
            }
        }
        Ok(())
    }
}

/// A syntomic cochain; `u`, `v` follow the sign convention of the five
/// cocycle conditions, `z` is in DR(n) quotient coordinates.
#[derive(Clone, Debug)]
pub struct SynCochain {
    pub degree: i32,
    pub x: Vector,
    pub y: Vector,
    pub z: Vector,
    pub u: Vector,
    pub v: Vector,
}

/// The syntomic complex together with the pieces needed to read its
/// cochains.
#[derive(Clone, Debug)]
pub struct SynComplex {
    pub variant: Variant,
    pub support: Support,
    pub twist: i64,
    pub poly: PadicPoly,
    pub complex: Complex,
    pub quotient: Quotient,
    pub hk: Complex,
    pub p_phi: ChainMap,
    pub p_pphi: ChainMap,
    pub nmon: ChainMap,
    pub psi_bar: ChainMap,
    pub psi: ChainMap,
    pub dr: Complex,
    pub top: ChainMap,
    pub square: Option<CommutativeSquare>,
}

impl SynComplex {
    pub fn field(&self) -> &BaseField {
        self.complex.field()
    }

    /// Slot sizes (x, y, z, u, v) in degree i.
    pub fn slots(&self, i: i32) -> [usize; 5] {
        let q = &self.quotient.complex;
        match self.variant {
            Variant::Good => [self.hk.dim(i), self.hk.dim(i - 1), q.dim(i - 1), 0, 0],
            Variant::Semistable => [self.hk.dim(i), self.hk.dim(i - 1), q.dim(i - 1), self.hk.dim(i - 1), self.hk.dim(i - 2)],
        }
    }

    pub fn split(&self, i: i32, w: &[PadicNumber]) -> SynCochain {
        let s = self.slots(i);
        let mut o = 0;
        let mut take = |n: usize| {
            let out = w[o..o + n].to_vec();
            o += n;
            out
        };
        let x = take(s[0]);
        let y = take(s[1]);
        let z = take(s[2]);
        let u: Vector = take(s[3]).iter().map(|a| a.neg()).collect();
        let v: Vector = take(s[4]).iter().map(|a| a.neg()).collect();
        SynCochain { degree: i, x, y, z, u, v }
    }

    pub fn join(&self, c: &SynCochain) -> Vector {
        let mut w = c.x.clone();
        w.extend(c.y.iter().cloned());
        w.extend(c.z.iter().cloned());
        w.extend(c.u.iter().map(|a| a.neg()));
        w.extend(c.v.iter().map(|a| a.neg()));
        w
    }

    pub fn zero_cochain(&self, i: i32) -> SynCochain {
        let f = self.field();
        let s = self.slots(i);
        let z = |n: usize| vec![f.zero(); n];
        SynCochain { degree: i, x: z(s[0]), y: z(s[1]), z: z(s[2]), u: z(s[3]), v: z(s[4]) }
    }

    pub fn cohomology(&self, i: i32) -> Result<CohomologySpace> {
        cohomology(&self.complex, i)
    }

    pub fn differential(&self, c: &SynCochain) -> SynCochain {
        let w = self.complex.d(c.degree).mul_vec(&self.join(c));
        self.split(c.degree + 1, &w)
    }

    /// Lift of the z slot to a de Rham cochain.
    pub fn z_lift(&self, c: &SynCochain) -> Vector {
        self.quotient.section(c.degree - 1).mul_vec(&c.z)
    }

    /// The five cocycle conditions, checked at working precision.
    pub fn check_quintuple(&self, c: &SynCochain) -> bool {
        let i = c.degree;
        let zero = |v: &[PadicNumber]| v.iter().all(|a| a.is_zero_at_precision());
        let dx = self.hk.d(i).mul_vec(&c.x);
        let second = vec_add(&self.p_phi.at(i).mul_vec(&c.x), &self.hk.d(i - 1).mul_vec(&c.y));
        let third = vec_add(&self.psi_bar.at(i).mul_vec(&c.x), &self.quotient.complex.d(i - 1).mul_vec(&c.z));
        let mut ok = zero(&dx) && zero(&second) && zero(&third);
        if self.variant == Variant::Semistable {
            let fourth = crate::linalg::vec_sub(&self.nmon.at(i).mul_vec(&c.x), &self.hk.d(i - 1).mul_vec(&c.u));
            let fifth = vec_add(
                &vec_add(&self.nmon.at(i - 1).mul_vec(&c.y), &self.p_pphi.at(i - 1).mul_vec(&c.u)),
                &self.hk.d(i - 2).mul_vec(&c.v),
            );
            ok = ok && zero(&fourth) && zero(&fifth);
        }
        ok
    }
}

/// Syntomic P-complex of twist n.
pub fn build_syntomic(g: &GeometryPackage, poly: &PadicPoly, n: i64, variant: Variant) -> Result<SynComplex> {
    build_syntomic_with(g, poly, n, variant, Support::Ordinary)
}

pub fn build_syntomic_with(g: &GeometryPackage, poly: &PadicPoly, n: i64, variant: Variant, support: Support) -> Result<SynComplex> {
    let field = g.field.clone();
    if !poly.coeff(0).sub(&field.one()).is_zero_at_precision() {
        return Err(Error::domain(format!("polynomial {poly} must have constant term 1")));
    }
    let data = g.de_rham_for(support);
    let quotient = quotient_complex(&data.dr, |i| data.fil_at(i, n))?;
    let psi_bar = quotient.projection.compose(&data.psi)?;
    let p_phi = g.poly_of_phi(poly, None);
    let p = g.p_number();
    let p_pphi = g.poly_of_phi(poly, Some(&p));
    let hk = g.hk.clone();
    let b = direct_sum(&[&hk, &quotient.complex], &field);
    let top = ChainMap::new(&hk, &b, |i| Matrix::vstack(&[&p_phi.at(i), &psi_bar.at(i)], hk.dim(i), &field))?;
    let (complex, square) = match variant {
        Variant::Good => (fiber(&top)?, None),
        Variant::Semistable => {
            let vb = ChainMap::new(&b, &hk, |i| {
                Matrix::hstack(&[&g.nmon.at(i), &Matrix::zeros(hk.dim(i), quotient.complex.dim(i), &field)], hk.dim(i), &field)
            })?;
            let sq = CommutativeSquare::new(top.clone(), g.nmon.clone(), vb, p_pphi.clone())?;
            (square_fiber(&sq)?, Some(sq))
        }
    };
    if verify_complex(&complex).is_err() {
        return Err(Error::domain("syntomic differential does not square to zero"));
    }
    Ok(SynComplex {
        variant,
        support,
        twist: n,
        poly: poly.clone(),
        complex,
        quotient,
        hk,
        p_phi,
        p_pphi,
        nmon: g.nmon.clone(),
        psi_bar,
        psi: data.psi.clone(),
        dr: data.dr.clone(),
        top,
        square,
    })
}

/// Pieces of the exact diagram around H^i_syn for the semistable variant.
#[derive(Clone, Debug)]
pub struct DiagramPieces {
    pub h_syn: CohomologySpace,
    /// ker(α) inside H^i of the top-row fiber.
    pub ker_alpha: Subspace,
    pub coker_alpha_dim: usize,
    /// β: H^(i-1) of the bottom-row fiber → H^i_syn.
    pub beta: Matrix,
    /// γ: H^i_syn → H^i of the top-row fiber.
    pub gamma: Matrix,
    /// Image of α on H^(i-1), inside H^(i-1) of the bottom-row fiber.
    pub alpha_image: Subspace,
    /// B^i ⊂ ker α: classes whose HK component vanishes.
    pub b_space: Subspace,
}

pub fn diagram_pieces(syn: &SynComplex, i: i32) -> Result<DiagramPieces> {
    let sq = syn.square.as_ref().ok_or_else(|| Error::domain("diagram pieces need the semistable variant"))?;
    let field = syn.field().clone();
    let (c, d, h) = square_rows(sq)?;
    let h_syn = syn.cohomology(i)?;
    let hc = cohomology(&c, i)?;
    let hd_prev = cohomology(&d, i - 1)?;
    let hc_prev = cohomology(&c, i - 1)?;
    let hd = cohomology(&d, i)?;
    let alpha_cur = crate::homological::induced_map_with(&h, i, &hc, &hd);
    let alpha_prev = crate::homological::induced_map_with(&h, i - 1, &hc_prev, &hd_prev);
    let ker_alpha = kernel(&alpha_cur)?;
    let alpha_image = Subspace::column_space(&alpha_prev)?;
    let ci = c.dim(i);
    let beta_cols: Vec<Vector> = (0..hd_prev.dim)
        .map(|k| {
            let e = hd_prev.lift.column(k);
            let mut w = vec![field.zero(); ci];
            w.extend(e);
            h_syn.class_of(&w)
        })
        .collect();
    let beta = Matrix::from_columns(h_syn.dim, &beta_cols, &field);
    let gamma_cols: Vec<Vector> = (0..h_syn.dim)
        .map(|k| {
            let w = h_syn.lift.column(k);
            hc.class_of(&w[..ci])
        })
        .collect();
    let gamma = Matrix::from_columns(hc.dim, &gamma_cols, &field);
    let hk_h = cohomology(&syn.hk, i)?;
    let to_hk_cols: Vec<Vector> = (0..hc.dim)
        .map(|k| {
            let w = hc.lift.column(k);
            hk_h.class_of(&w[..syn.hk.dim(i)])
        })
        .collect();
    let to_hk = Matrix::from_columns(hk_h.dim, &to_hk_cols, &field);
    let b_space = ker_alpha.intersect(&kernel(&to_hk)?)?;
    Ok(DiagramPieces {
        coker_alpha_dim: hd_prev.dim - alpha_image.dim(),
        h_syn,
        ker_alpha,
        beta,
        gamma,
        alpha_image,
        b_space,
    })
}

/// F^0 ⊇ F^1 ⊇ F^2 ⊇ F^3 = 0 on H^i_syn (class coordinates).
#[derive(Clone, Debug)]
pub struct ThreeStep {
    pub total: usize,
    pub f1: Subspace,
    pub f2: Subspace,
}

impl ThreeStep {
    pub fn graded_dims(&self) -> [usize; 3] {
        [self.total - self.f1.dim(), self.f1.dim() - self.f2.dim(), self.f2.dim()]
    }
}

pub fn three_step_filtration(syn: &SynComplex, i: i32) -> Result<ThreeStep> {
    let field = syn.field().clone();
    let h = syn.cohomology(i)?;
    let hk_h = cohomology(&syn.hk, i)?;
    let to_hk_cols: Vec<Vector> = (0..h.dim).map(|k| hk_h.class_of(&syn.split(i, &h.lift.column(k)).x)).collect();
    let to_hk = Matrix::from_columns(hk_h.dim, &to_hk_cols, &field);
    let f1 = kernel(&to_hk)?;
    let f2 = if syn.variant == Variant::Semistable {
        let hv = cohomology(&syn.hk, i - 2)?;
        let cols: Vec<Vector> = (0..hv.dim)
            .map(|k| {
                let mut c = syn.zero_cochain(i);
                c.v = hv.lift.column(k);
                h.class_of(&syn.join(&c))
            })
            .collect();
        Subspace::span(h.dim, &cols, &field)?
    } else {
        Subspace::zero(h.dim, &field)
    };
    Ok(ThreeStep { total: h.dim, f1, f2 })
}

/// The maps of 0 → H^(i-1)_dR/F^n → H^i_syn → F^n H^i_dR.
#[derive(Clone, Debug)]
pub struct SesMaps {
    pub h_syn: CohomologySpace,
    /// Columns: basis of a complement of F^n in H^(i-1)_dR (class coordinates).
    pub source_basis: Matrix,
    /// Columns: basis of F^n H^i_dR (class coordinates).
    pub target_basis: Matrix,
    pub i_fp: Matrix,
    pub pr_fp: Matrix,
}

/// i_fp(ξ) = [(0, P(Φ)ξ, 0)], pr_fp[(x, y, z)] = Ψ[x].
pub fn ses_maps(g: &GeometryPackage, syn: &SynComplex, i: i32) -> Result<SesMaps> {
    let field = g.field.clone();
    let h = syn.cohomology(i)?;
    let hk_prev = cohomology(&syn.hk, i - 1)?;
    let dr_prev = cohomology(&syn.dr, i - 1)?;
    let dr_cur = cohomology(&syn.dr, i)?;
    let psi_prev = crate::homological::induced_map_with(&syn.psi, i - 1, &hk_prev, &dr_prev);
    let psi_prev_inv = if dr_prev.dim == 0 { psi_prev.clone() } else { psi_prev.inverse()? };
    let fil_prev = g.hodge_subspace(syn.support, i - 1, syn.twist)?;
    let comp = fil_prev.complement()?;
    let fil_cur = g.hodge_subspace(syn.support, i, syn.twist)?;
    let i_cols: Vec<Vector> = (0..comp.cols())
        .map(|k| {
            let xi = psi_prev_inv.mul_vec(&comp.column(k));
            let y = syn.p_phi.at(i - 1).mul_vec(&hk_prev.representative(&xi));
            let mut c = syn.zero_cochain(i);
            c.y = y;
            h.class_of(&syn.join(&c))
        })
        .collect();
    let i_fp = Matrix::from_columns(h.dim, &i_cols, &field);
    let mut pr_cols = Vec::new();
    for k in 0..h.dim {
        let c = syn.split(i, &h.lift.column(k));
        let cls = dr_cur.class_of(&syn.psi.at(i).mul_vec(&c.x));
        let coords = solve(fil_cur.basis(), &cls)?
            .ok_or_else(|| Error::domain(format!("Ψ[x] is not in F^{} H^{i}_dR", syn.twist)))?;
        pr_cols.push(coords);
    }
    let pr_fp = Matrix::from_columns(fil_cur.dim(), &pr_cols, &field);
    Ok(SesMaps { h_syn: h, source_basis: comp, target_basis: fil_cur.basis().clone(), i_fp, pr_fp })
}

/// syn_P → syn_PQ: identity on x, z, u and Q(Φ), Q(pΦ) on y, v.
pub fn change_poly_map(g: &GeometryPackage, from: &SynComplex, q: &PadicPoly) -> Result<(SynComplex, ChainMap)> {
    let field = g.field.clone();
    let target = build_syntomic_with(g, &from.poly.mul(q), from.twist, from.variant, from.support)?;
    let q_phi = g.poly_of_phi(q, None);
    let p = g.p_number();
    let q_pphi = g.poly_of_phi(q, Some(&p));
    let map = ChainMap::new(&from.complex, &target.complex, |i| {
        let s = from.slots(i);
        let blocks = [
            Matrix::identity(s[0], &field),
            q_phi.at(i - 1),
            Matrix::identity(s[2], &field),
            Matrix::identity(s[3], &field),
            if from.variant == Variant::Semistable { q_pphi.at(i - 2) } else { Matrix::zeros(0, 0, &field) },
        ];
        let refs: Vec<&Matrix> = blocks.iter().collect();
        Matrix::block_diag(&refs, &field)
    })?;
    Ok((target, map))
}

fn companion_of_reversed(p: &PadicPoly) -> Matrix {
    let field = p.field().clone();
    let d = p.degree().unwrap_or(0);
    // reversed polynomial T^d P(1/T) is monic with coefficients p_d, ..., p_0
    let mut m = Matrix::zeros(d, d, &field);
    for i in 0..d {
        if i + 1 < d {
            m.set(i + 1, i, field.one());
        }
        // coefficient of T^i in the reversed polynomial is p_(d-i)
        m.set(i, d - 1, p.coeff(d - i).neg());
    }
    m
}

/// P*Q = ∏ (1 - α_i β_j T) for P = ∏(1 - α_i T), Q = ∏(1 - β_j T).
pub fn star_product(p: &PadicPoly, q: &PadicPoly) -> Result<PadicPoly> {
    let field = p.field().clone();
    let (dp, dq) = (p.degree().unwrap_or(0), q.degree().unwrap_or(0));
    if dp == 0 || dq == 0 {
        return Ok(PadicPoly::one(&field));
    }
    let k = companion_of_reversed(p).kron(&companion_of_reversed(q));
    let chi = charpoly(&k)?;
    Ok(chi.reversed(dp * dq))
}

/// Bivariate polynomial, `c[k][l]` the coefficient of t1^k t2^l.
pub type Bivariate = Vec<Vec<PadicNumber>>;

/// (a, b) with R(t1 t2) = a(t1, t2) P(t1) + b(t1, t2) Q(t2).
pub fn split_star(p: &PadicPoly, q: &PadicPoly, r: &PadicPoly) -> Result<(Bivariate, Bivariate)> {
    let field = p.field().clone();
    let dr = r.degree().unwrap_or(0);
    let dq = q.degree().unwrap_or(0);
    let mut b: Bivariate = vec![vec![]; dr + 1];
    let mut rem_cols: Vec<Vec<PadicNumber>> = vec![vec![field.zero(); dr + 1]; dq.max(1)];
    for k in 0..=dr {
        let mono = PadicPoly::monomial(field.one(), k, &field);
        let (quo, rem) = mono.divrem(q)?;
        let rk = r.coeff(k);
        b[k] = quo.coeffs().iter().map(|c| c.mul(&rk)).collect();
        for l in 0..dq {
            rem_cols[l][k] = rem.coeff(l).mul(&rk);
        }
    }
    let mut a: Bivariate = Vec::new();
    for l in 0..dq {
        let s = PadicPoly::new(rem_cols[l].clone(), &field);
        let (quo, rem) = s.divrem(p)?;
        if !rem.coeffs().iter().all(|c| c.is_zero_at_precision()) {
            return Err(Error::domain("R(t1 t2) is not in the ideal (P(t1), Q(t2))"));
        }
        for (k, c) in quo.coeffs().iter().enumerate() {
            if a.len() <= k {
                a.resize(k + 1, vec![]);
            }
            if a[k].len() <= l {
                a[k].resize(l + 1, field.zero());
            }
            a[k][l] = c.clone();
        }
    }
    Ok((a, b))
}

fn powers(m: &Matrix, n: usize) -> Vec<Matrix> {
    let mut out = vec![Matrix::identity(m.rows(), m.field())];
    for k in 1..n {
        let next = out[k - 1].mul(m);
        out.push(next);
    }
    out
}

/// Σ c_kl ⟨Φ^k u, Φ^l w⟩ for u in degree i, w in degree 2d - i.
fn twisted_form(g: &GeometryPackage, c: &Bivariate, i: i32, u: &[PadicNumber], w: &[PadicNumber]) -> PadicNumber {
    let field = &g.field;
    let pr = g.pairing.as_ref().unwrap();
    let top = 2 * g.dimension;
    let form = PackagePairing::form(&pr.hk, i, g.hk.dim(i), g.hk.dim(top - i), field);
    let kmax = c.len();
    let lmax = c.iter().map(|r| r.len()).max().unwrap_or(0);
    let pu = powers(&g.phi.at(i), kmax.max(1));
    let pw = powers(&g.phi.at(top - i), lmax.max(1));
    let mut acc = field.zero();
    for (k, row) in c.iter().enumerate() {
        let uk = pu[k].mul_vec(u);
        for (l, ckl) in row.iter().enumerate() {
            if ckl.is_exact_zero() {
                continue;
            }
            let wl = pw[l].mul_vec(w);
            acc = acc.add(&ckl.mul(&bilinear(&uk, &form, &wl)));
        }
    }
    acc
}

/// ⟨a, b⟩ for a ∈ syn_P(n) of degree i and b ∈ syn_Q(m) of degree
/// 2d + 1 - i with n + m = t + 1, t the top Fil label (t = d for geometric
/// packages): the cup product lands in top degree of syn_(P*Q)(t+1), which
/// maps to Q_p by (Y, Z) ↦ tr(Y)/R(λ) - tr(Z).
pub fn trace_pairing(g: &GeometryPackage, sp: &SynComplex, a: &SynCochain, sq: &SynComplex, b: &SynCochain) -> Result<PadicNumber> {
    let field = g.field.clone();
    if sp.variant != Variant::Good || sq.variant != Variant::Good {
        return Err(Error::domain("the trace pairing is only available for the good-reduction variant"));
    }
    let pr = g.pairing.as_ref().ok_or_else(|| Error::domain("package has no pairing data"))?;
    let d = g.dimension;
    let i = a.degree;
    if a.degree + b.degree != 2 * d + 1 || sp.twist + sq.twist != pr.top_label() + 1 {
        return Err(Error::domain(format!(
            "degrees ({}, {}) and twists ({}, {}) are not complementary",
            a.degree, b.degree, sp.twist, sq.twist
        )));
    }
    let r = star_product(&sp.poly, &sq.poly)?;
    let r_lambda = r.eval(&pr.lambda);
    if r_lambda.is_zero_at_precision() {
        return Err(Error::domain(format!("P*Q vanishes at the top Frobenius eigenvalue {}", pr.lambda)));
    }
    let (ca, cb) = split_star(&sp.poly, &sq.poly, &r)?;
    let sign = if i % 2 == 0 { field.one() } else { field.int(-1) };
    let tr_y = twisted_form(g, &ca, i - 1, &a.y, &b.x).add(&sign.mul(&twisted_form(g, &cb, i, &a.x, &b.y)));
    let top = 2 * d;
    let dr = &sp.dr;
    let z1 = sp.z_lift(a);
    let z2 = sq.z_lift(b);
    let w2 = vec_add(&sq.psi.at(b.degree).mul_vec(&b.x), &dr.d(b.degree - 1).mul_vec(&z2));
    let g1 = PackagePairing::form(&pr.dr, i - 1, dr.dim(i - 1), dr.dim(top - i + 1), &field);
    let g2 = PackagePairing::form(&pr.dr, i, dr.dim(i), dr.dim(top - i), &field);
    let psi_x1 = sp.psi.at(i).mul_vec(&a.x);
    let tr_z = bilinear(&z1, &g1, &w2).add(&sign.mul(&bilinear(&psi_x1, &g2, &z2)));
    Ok(tr_y.div(&r_lambda)?.sub(&tr_z))
}

/// Gram matrix of the trace pairing on H^i(syn_P) × H^(2d+1-i)(syn_Q).
pub fn pairing_gram(g: &GeometryPackage, sp: &SynComplex, i: i32, sq: &SynComplex) -> Result<Matrix> {
    let ha = sp.cohomology(i)?;
    let j = 2 * g.dimension + 1 - i;
    let hb = sq.cohomology(j)?;
    let mut m = Matrix::zeros(ha.dim, hb.dim, &g.field);
    for r in 0..ha.dim {
        let a = sp.split(i, &ha.lift.column(r));
        for c in 0..hb.dim {
            let b = sq.split(j, &hb.lift.column(c));
            m.set(r, c, trace_pairing(g, sp, &a, sq, &b)?);
        }
    }
    Ok(m)
}

/// ι* of a syntomic cochain on a package to the matching complex of a point:
/// (x, y, z, u, v) ↦ (ιx, ιy + P(Φ)cx, ιz, ιu, ιv + P(pΦ)cu).
pub fn pullback_cochain(pt: &PointPullback, sx: &SynComplex, c: &SynCochain, spt: &SynComplex) -> SynCochain {
    let i = c.degree;
    let z = spt.quotient.projection.at(i - 1).mul_vec(&pt.dr.at(i - 1).mul_vec(&sx.z_lift(c)));
    let kx = spt.p_phi.at(i - 1).mul_vec(&pt.primitive_at(&sx.hk, i).mul_vec(&c.x));
    let mut out = SynCochain {
        degree: i,
        x: pt.hk.at(i).mul_vec(&c.x),
        y: vec_add(&pt.hk.at(i - 1).mul_vec(&c.y), &kx),
        z,
        u: if c.u.is_empty() { vec![] } else { pt.hk.at(i - 1).mul_vec(&c.u) },
        v: if c.v.is_empty() { vec![] } else { pt.hk.at(i - 2).mul_vec(&c.v) },
    };
    if sx.variant == Variant::Semistable && !out.v.is_empty() {
        let ku = spt.p_pphi.at(i - 2).mul_vec(&pt.primitive_at(&sx.hk, i - 1).mul_vec(&c.u));
        out.v = vec_add(&out.v, &ku);
    }
    out
}

/// A morphism of packages: chain maps on HK and de Rham cochains commuting
/// with Φ, N, Ψ and the filtrations.
#[derive(Clone, Debug)]
pub struct PackageMorphism {
    pub hk: ChainMap,
    pub dr: ChainMap,
}

impl PackageMorphism {
    pub fn validate(&self, source: &GeometryPackage, target: &GeometryPackage) -> Result<()> {
        let bad = |m: String| Err(Error::validation(format!("morphism {} → {}: {m}", source.name, target.name)));
        if self.hk.verify().is_err() || self.dr.verify().is_err() {
            return bad("not a chain map".into());
        }
        for i in source.hk.lo()..=source.hk.hi() {
            let f = self.hk.at(i);
            let ok_phi = target.phi.at(i).mul(&f).sub(&f.mul(&source.phi.at(i))).is_zero_at_precision();
            let ok_n = target.nmon.at(i).mul(&f).sub(&f.mul(&source.nmon.at(i))).is_zero_at_precision();
            let ok_psi =
                target.de_rham.psi.at(i).mul(&f).sub(&self.dr.at(i).mul(&source.de_rham.psi.at(i))).is_zero_at_precision();
            if !(ok_phi && ok_n && ok_psi) {
                return bad(format!("does not commute with Φ, N, Ψ in degree {i}"));
            }
        }
        let (lo, hi) = source.de_rham.label_range();
        for i in source.de_rham.dr.lo()..=source.de_rham.dr.hi() {
            for r in lo..=hi + 1 {
                let img = source.de_rham.fil_at(i, r).image(&self.dr.at(i))?;
                if !target.de_rham.fil_at(i, r).contains_subspace(&img)? {
                    return bad(format!("does not respect F^{r} in degree {i}"));
                }
            }
        }
        Ok(())
    }

    /// The induced map of syntomic cochains for the same P and twist.
    pub fn map_cochain(&self, sa: &SynComplex, c: &SynCochain, sb: &SynComplex) -> SynCochain {
        let i = c.degree;
        SynCochain {
            degree: i,
            x: self.hk.at(i).mul_vec(&c.x),
            y: self.hk.at(i - 1).mul_vec(&c.y),
            z: sb.quotient.projection.at(i - 1).mul_vec(&self.dr.at(i - 1).mul_vec(&sa.z_lift(c))),
            u: if c.u.is_empty() { vec![] } else { self.hk.at(i - 1).mul_vec(&c.u) },
            v: if c.v.is_empty() { vec![] } else { self.hk.at(i - 2).mul_vec(&c.v) },
        }
    }
}

/// Pairing of de Rham classes (class coordinates) in degrees i and 2d - i.
pub fn de_rham_gram(g: &GeometryPackage, i: i32) -> Result<Matrix> {
    let pr = g.pairing.as_ref().ok_or_else(|| Error::domain("package has no pairing data"))?;
    let top = 2 * g.dimension;
    let dr = &g.de_rham.dr;
    let ha = cohomology(dr, i)?;
    let hb = cohomology(dr, top - i)?;
    let form = PackagePairing::form(&pr.dr, i, dr.dim(i), dr.dim(top - i), &g.field);
    Ok(ha.lift.transpose().mul(&form).mul(&hb.lift))
}

/// ι_*θ ∈ H^(2d+j)_dR of the package for θ a de Rham cocycle of degree j on
/// the point, defined by ⟨ι_*θ, y⟩ = ⟨θ, ι*y⟩; returned in class coordinates.
pub fn pushforward_point(g: &GeometryPackage, pt: &PointPullback, theta: &[PadicNumber], j: i32) -> Result<Vector> {
    let field = &g.field;
    let top = 2 * g.dimension;
    let t = top + j;
    let gram = de_rham_gram(g, t)?;
    let hb = cohomology(&g.de_rham.dr, -j)?;
    let ppr = pt.package.pairing.as_ref().ok_or_else(|| Error::domain(format!("point {} has no pairing", pt.name)))?;
    let pdr = &pt.package.de_rham.dr;
    let pform = PackagePairing::form(&ppr.dr, j, pdr.dim(j), pdr.dim(-j), field);
    let rhs: Vector = (0..hb.dim)
        .map(|k| {
            let y = pt.dr.at(-j).mul_vec(&hb.lift.column(k));
            bilinear(theta, &pform, &y)
        })
        .collect();
    if gram.rows() != gram.cols() || gram.rank()? != gram.rows() {
        return Err(Error::domain("Gram matrix is singular; pushforward is not defined"));
    }
    solve(&gram.transpose(), &rhs)?.ok_or_else(|| Error::domain("pushforward system is inconsistent"))
}

/// Syntomic dimension for every degree of the complex.
pub fn syn_dims(syn: &SynComplex) -> Result<Vec<(i32, usize)>> {
    (syn.complex.lo()..=syn.complex.hi()).map(|i| Ok((i, syn.cohomology(i)?.dim))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> BaseField {
        BaseField::new(5, 12).unwrap()
    }

    #[test]
    fn point_package_degrees() {
        let f = k();
        let g = GeometryPackage::point(&f);
        g.validate().unwrap();
        let p = PadicPoly::from_ints(&[1, -1], &f);
        for n in [-2, 0] {
            let s = build_syntomic(&g, &p, n, Variant::Good).unwrap();
            assert_eq!(s.cohomology(0).unwrap().dim, 1);
        }
        // P(1) = 0: the class comes from H^0_HK through the y slot
        let s = build_syntomic(&g, &p, 1, Variant::Good).unwrap();
        assert_eq!(s.cohomology(1).unwrap().dim, 1);
        assert_eq!(ses_maps(&g, &s, 1).unwrap().i_fp.rank().unwrap(), 0);
        let q = PadicPoly::from_ints(&[1, -2], &f);
        let s = build_syntomic(&g, &q, 1, Variant::Good).unwrap();
        assert_eq!(s.cohomology(1).unwrap().dim, 1);
        let ses = ses_maps(&g, &s, 1).unwrap();
        assert_eq!(ses.i_fp.rank().unwrap(), 1);
    }

    #[test]
    fn constant_term_enforced() {
        let f = k();
        let g = GeometryPackage::point(&f);
        let bad = PadicPoly::from_ints(&[2, -1], &f);
        assert!(matches!(build_syntomic(&g, &bad, 0, Variant::Good), Err(Error::Domain(_))));
    }

    #[test]
    fn star_product_of_linear_factors() {
        let f = k();
        let p = PadicPoly::from_ints(&[1, -2], &f);
        let q = PadicPoly::from_ints(&[1, -3], &f);
        let r = star_product(&p, &q).unwrap();
        assert!(r.eq_at_precision(&PadicPoly::from_ints(&[1, -6], &f)));
        let (a, b) = split_star(&p, &q, &r).unwrap();
        // evaluate a P(t1) + b Q(t2) at a few points
        for (t1, t2) in [(2, 7), (-1, 3), (4, 4)] {
            let (x, y) = (f.int(t1), f.int(t2));
            let ev = |c: &Bivariate| {
                let mut acc = f.zero();
                for (kk, row) in c.iter().enumerate() {
                    for (l, v) in row.iter().enumerate() {
                        acc = acc.add(&v.mul(&x.pow(kk as u32)).mul(&y.pow(l as u32)));
                    }
                }
                acc
            };
            let lhs = r.eval(&x.mul(&y));
            let rhs = ev(&a).mul(&p.eval(&x)).add(&ev(&b).mul(&q.eval(&y)));
            assert!(lhs.eq_at_precision(&rhs));
        }
    }
}
