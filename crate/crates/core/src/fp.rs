//! Finite-polynomial cohomology, its pairing, the finite-polynomial
//! Abel–Jacobi map and the two synthetic formula evaluators.
//!
//! Polynomials follow the convention that their roots are Frobenius
//! eigenvalues: the cofinal polynomial in degree j is χ(T)/χ(0) with χ the
//! characteristic polynomial of Φ on H^j, so P(Φ) = 0 on H^j. The zeta-style
//! form det(1 - ΦT) is available as [`AdmissiblePolynomial::reciprocal`].

use num_traits::One;
use rand::Rng;

use crate::error::{Error, Result};
use crate::homological::{ChainMap, Complex};
use crate::linalg::{apply_poly, bilinear, charpoly, solve, vec_is_exact_zero, Matrix, Subspace, Vector};
use crate::padic::{BaseField, PadicNumber, PadicPoly};
use crate::phin::{
    cg_projection, purity_weights_poly, sym, sym_pairing, sym_power_matrix, tensor, twist, FilPhiNModule, Filtration,
    Purity,
};
use crate::syntomic::{
    build_syntomic, change_poly_map, pairing_gram, pullback_cochain, pushforward_point, ses_maps, trace_pairing,
    GeometryPackage, PackageMorphism, PointPullback, SesMaps, SynCochain, SynComplex, Variant,
};

/// A polynomial with exact rational coefficients, constant term 1, whose
/// complex roots all have modulus q^(weight/2).
#[derive(Clone, Debug)]
pub struct AdmissiblePolynomial {
    pub poly: PadicPoly,
    pub weight: i64,
    pub certified: bool,
}

impl AdmissiblePolynomial {
    /// Checks the constant term and certifies the weight; a polynomial whose
    /// roots have the wrong moduli is rejected.
    pub fn new(poly: PadicPoly, weight: i64) -> Result<Self> {
        let q = poly.field().q();
        let coeffs = poly.rational_coeffs().ok_or_else(|| Error::domain("admissible polynomials need exact coefficients"))?;
        if coeffs.first().map(|c| c.is_one()) != Some(true) {
            return Err(Error::domain(format!("polynomial {poly} does not have constant term 1")));
        }
        if coeffs.len() > 1 {
            match purity_weights_poly(&coeffs, q) {
                Purity::Pure(w) if w == weight => {}
                Purity::Pure(w) => return Err(Error::domain(format!("polynomial {poly} has weight {w}, not {weight}"))),
                Purity::NotPure { moduli } => {
                    return Err(Error::domain(format!("polynomial {poly} is not pure; root moduli {moduli:?}")));
                }
            }
        }
        Ok(AdmissiblePolynomial { poly, weight, certified: true })
    }

    pub fn one(field: &BaseField, weight: i64) -> Self {
        AdmissiblePolynomial { poly: PadicPoly::one(field), weight, certified: true }
    }

    pub fn field(&self) -> &BaseField {
        self.poly.field()
    }

    pub fn degree(&self) -> usize {
        self.poly.degree().unwrap_or(0)
    }

    /// Product with another polynomial of the same weight.
    pub fn times(&self, other: &AdmissiblePolynomial) -> Result<Self> {
        if other.weight != self.weight && other.degree() > 0 && self.degree() > 0 {
            return Err(Error::domain(format!("weights {} and {} differ", self.weight, other.weight)));
        }
        let weight = if self.degree() > 0 { self.weight } else { other.weight };
        AdmissiblePolynomial::new(self.poly.mul(&other.poly), weight)
    }

    /// T^d P(1/T) normalized to constant term 1: det(1 - ΦT) when P is the
    /// cofinal polynomial of Φ.
    pub fn reciprocal(&self) -> PadicPoly {
        let d = self.degree();
        let rev = self.poly.reversed(d);
        let c = rev.coeff(0);
        rev.scale(&c.inv().expect("nonzero leading coefficient"))
    }
}

/// Exact characteristic polynomial of Φ on H^j, from the certificate when Φ
/// itself is only known to finite precision.
fn exact_charpoly(g: &GeometryPackage, j: i32) -> Result<PadicPoly> {
    let phi = g.frobenius_on_cohomology(j)?;
    if phi.is_exact() {
        return charpoly(&phi);
    }
    let k = j - g.hk.lo();
    let split_here = g.hk.d(j).is_exact_zero() && g.hk.d(j - 1).is_exact_zero();
    if split_here && k >= 0 {
        if let Some(Some(c)) = g.certificates.get(k as usize) {
            if c.is_exact() {
                return Ok(c.clone());
            }
        }
    }
    Err(Error::domain(format!("Frobenius on H^{j} is not exact and no certified characteristic polynomial is attached")))
}

/// Weight of Φ on H^j, `None` for the zero space.
pub fn cohomology_weight(g: &GeometryPackage, j: i32) -> Result<Option<i64>> {
    let chi = exact_charpoly(g, j)?;
    if chi.degree().unwrap_or(0) == 0 {
        return Ok(None);
    }
    let coeffs = chi.rational_coeffs().expect("exact");
    match purity_weights_poly(&coeffs, g.field.q()) {
        Purity::Pure(w) => Ok(Some(w)),
        Purity::NotPure { moduli } => Err(Error::domain(format!("Φ on H^{j} is not pure; root moduli {moduli:?}"))),
    }
}

/// χ(T)/χ(0) for Φ on H^j, certified of the weight of H^j (j for a package
/// with trivial coefficients). The zero space gives P = 1.
pub fn cofinal_poly(g: &GeometryPackage, j: i32) -> Result<AdmissiblePolynomial> {
    let chi = exact_charpoly(g, j)?;
    let weight = match cohomology_weight(g, j)? {
        Some(w) => w,
        None => return Ok(AdmissiblePolynomial::one(&g.field, j as i64)),
    };
    let c0 = chi.coeff(0);
    let poly = chi.scale(&c0.inv()?);
    AdmissiblePolynomial::new(poly, weight)
}

/// Smallest admissible polynomial killing `v` under `phi`: the local minimal
/// polynomial from the Krylov sequence v, Φv, Φ²v, ...
pub fn annihilating_poly(phi: &Matrix, v: &[PadicNumber]) -> Result<AdmissiblePolynomial> {
    let field = phi.field().clone();
    let n = v.len();
    if vec_is_exact_zero(v) || n == 0 {
        return Ok(AdmissiblePolynomial::one(&field, 0));
    }
    let mut krylov = vec![v.to_vec()];
    loop {
        let next = phi.mul_vec(krylov.last().unwrap());
        let m = Matrix::from_columns(n, &krylov, &field);
        if let Some(c) = solve(&m, &next)? {
            // Φ^k v = Σ c_i Φ^i v, so μ(T) = T^k - Σ c_i T^i
            let mut coeffs: Vec<PadicNumber> = c.iter().map(|a| a.neg()).collect();
            coeffs.push(field.one());
            let mu = PadicPoly::new(coeffs, &field);
            let c0 = mu.coeff(0);
            let poly = mu.scale(&c0.inv()?);
            let rat = poly.rational_coeffs().ok_or_else(|| Error::domain("local minimal polynomial is not exact"))?;
            let weight = match purity_weights_poly(&rat, field.q()) {
                Purity::Pure(w) => w,
                Purity::NotPure { moduli } => {
                    return Err(Error::domain(format!("vector is not in a pure part; root moduli {moduli:?}")));
                }
            };
            return AdmissiblePolynomial::new(poly, weight);
        }
        krylov.push(next);
        if krylov.len() > n + 1 {
            return Err(Error::domain("Krylov sequence did not close"));
        }
    }
}

/// H^j_fp(n): the syntomic P-complex for a cofinal P together with the short
/// exact sequence 0 → H^(j-1)_dR/F^n → H^j_fp → F^n H^j_dR → 0.
#[derive(Clone, Debug)]
pub struct FpSpace {
    pub degree: i32,
    pub twist: i64,
    pub poly: AdmissiblePolynomial,
    pub syn: SynComplex,
    pub ses: SesMaps,
}

/// Outcome of checking the short exact sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SesCheck {
    pub source_dim: usize,
    pub target_dim: usize,
    pub dim: usize,
    pub injective: bool,
    pub surjective: bool,
    pub composite_zero: bool,
}

impl SesCheck {
    pub fn holds(&self) -> bool {
        self.injective && self.surjective && self.composite_zero && self.dim == self.source_dim + self.target_dim
    }
}

impl FpSpace {
    pub fn dim(&self) -> usize {
        self.ses.h_syn.dim
    }

    pub fn check(&self) -> Result<SesCheck> {
        let s = self.ses.i_fp.cols();
        let t = self.ses.pr_fp.rows();
        Ok(SesCheck {
            source_dim: s,
            target_dim: t,
            dim: self.dim(),
            injective: self.ses.i_fp.rank()? == s,
            surjective: self.ses.pr_fp.rank()? == t,
            composite_zero: self.ses.pr_fp.mul(&self.ses.i_fp).is_zero_at_precision(),
        })
    }

    /// Class coordinates of a cocycle.
    pub fn class_of(&self, c: &SynCochain) -> Vector {
        self.ses.h_syn.class_of(&self.syn.join(c))
    }

    pub fn representative(&self, coords: &[PadicNumber]) -> SynCochain {
        self.syn.split(self.degree, &self.ses.h_syn.representative(coords))
    }

    /// Ψ[x] in H^j_dR class coordinates.
    pub fn project(&self, g: &GeometryPackage, c: &SynCochain) -> Result<Vector> {
        let h = g.dr_cohomology(self.syn.support, self.degree)?;
        Ok(h.class_of(&self.syn.psi.at(self.degree).mul_vec(&c.x)))
    }

    /// A cocycle whose projection is the given class of F^n H^j_dR.
    pub fn lift(&self, g: &GeometryPackage, class: &[PadicNumber]) -> Result<SynCochain> {
        let coords = solve(&self.ses.target_basis, class)?
            .ok_or_else(|| Error::domain(format!("class is not in F^{} H^{}_dR", self.twist, self.degree)))?;
        let h = solve(&self.ses.pr_fp, &coords)?.ok_or_else(|| Error::domain("pr_fp is not surjective"))?;
        let c = self.representative(&h);
        debug_assert!(self.project(g, &c).is_ok());
        Ok(c)
    }

    /// True when the projection of `c` is `class`.
    pub fn is_lift_of(&self, g: &GeometryPackage, c: &SynCochain, class: &[PadicNumber]) -> Result<bool> {
        if !self.syn.check_quintuple(c) {
            return Ok(false);
        }
        let got = self.project(g, c)?;
        Ok(got.iter().zip(class).all(|(a, b)| a.sub(b).is_zero_at_precision()))
    }
}

fn invertible_on(g: &GeometryPackage, poly: &PadicPoly, j: i32) -> Result<bool> {
    let phi = g.frobenius_on_cohomology(j)?;
    if phi.rows() == 0 {
        return Ok(true);
    }
    Ok(apply_poly(poly, &phi).rank()? == phi.rows())
}

/// H^j_fp(g, n) with the cofinal polynomial of H^j.
pub fn fp_cohomology(g: &GeometryPackage, j: i32, n: i64) -> Result<FpSpace> {
    let poly = cofinal_poly(g, j)?;
    fp_cohomology_with(g, j, n, &poly)
}

/// H^j_fp(g, n) for a given admissible P, which must kill H^j and act
/// invertibly on H^(j-1).
pub fn fp_cohomology_with(g: &GeometryPackage, j: i32, n: i64, poly: &AdmissiblePolynomial) -> Result<FpSpace> {
    if !invertible_on(g, &poly.poly, j - 1)? {
        return Err(Error::domain(format!("P = {} does not act invertibly on H^{}", poly.poly, j - 1)));
    }
    let phi = g.frobenius_on_cohomology(j)?;
    let chi = exact_charpoly(g, j)?;
    let kills = match poly.poly.divrem(&chi) {
        Ok((_, r)) if chi.degree().unwrap_or(0) > 0 => r.is_exact_zero(),
        _ => apply_poly(&poly.poly, &phi).is_zero_at_precision(),
    };
    if !kills {
        return Err(Error::domain(format!("P = {} does not kill H^{j}", poly.poly)));
    }
    let syn = build_syntomic(g, &poly.poly, n, Variant::Good)?;
    let ses = ses_maps(g, &syn, j)?;
    Ok(FpSpace { degree: j, twist: n, poly: poly.clone(), syn, ses })
}

/// The same space for P·Q together with the matrix of the change-of-polynomial
/// map on class coordinates.
pub fn change_fp_poly(g: &GeometryPackage, space: &FpSpace, factor: &AdmissiblePolynomial) -> Result<(FpSpace, Matrix)> {
    let poly = space.poly.times(factor)?;
    let target = fp_cohomology_with(g, space.degree, space.twist, &poly)?;
    let (_, map) = change_poly_map(g, &space.syn, &factor.poly)?;
    let h = &space.ses.h_syn;
    let cols: Vec<Vector> = (0..h.dim)
        .map(|k| target.ses.h_syn.class_of(&map.at(space.degree).mul_vec(&h.lift.column(k))))
        .collect();
    let m = Matrix::from_columns(target.dim(), &cols, &g.field);
    Ok((target, m))
}

/// Gram matrix of the fp pairing with its rank and determinant valuation.
#[derive(Clone, Debug)]
pub struct GramReport {
    pub matrix: Matrix,
    pub rank: usize,
    pub det_valuation: Option<i64>,
}

/// Gram matrix of H^i_fp(n) × H^(2d+1-i)_fp(m) with n + m = t + 1; a
/// degenerate pairing is a domain error carrying the rank.
pub fn fp_gram(g: &GeometryPackage, a: &FpSpace, b: &FpSpace) -> Result<GramReport> {
    let matrix = pairing_gram(g, &a.syn, a.degree, &b.syn)?;
    let rank = matrix.rank()?;
    let square = matrix.rows() == matrix.cols();
    if !square || rank < matrix.rows() {
        return Err(Error::domain(format!(
            "fp pairing is degenerate: Gram matrix {}×{} has rank {rank}",
            matrix.rows(),
            matrix.cols()
        )));
    }
    let det_valuation = if matrix.rows() == 0 { Some(0) } else { matrix.det()?.valuation() };
    Ok(GramReport { matrix, rank, det_valuation })
}

/// ⟨a, b⟩ of two fp classes given by class coordinates.
pub fn fp_pairing(g: &GeometryPackage, a: &FpSpace, x: &[PadicNumber], b: &FpSpace, y: &[PadicNumber]) -> Result<PadicNumber> {
    trace_pairing(g, &a.syn, &a.representative(x), &b.syn, &b.representative(y))
}

/// A zero-cycle with coefficients: for each named point a class θ in H^0 of
/// its fiber, all in syntomic twist `twist`.
#[derive(Clone, Debug)]
pub struct CoefficientCycle {
    pub summands: Vec<(String, Vector)>,
    pub twist: i64,
}

impl CoefficientCycle {
    pub fn new(twist: i64) -> Self {
        CoefficientCycle { summands: vec![], twist }
    }

    pub fn add(mut self, point: &str, theta: Vector) -> Self {
        self.summands.push((point.to_string(), theta));
        self
    }

    /// Trivial-coefficient divisor Σ n_i (P_i).
    pub fn divisor(field: &BaseField, terms: &[(&str, i64)]) -> Self {
        let mut c = CoefficientCycle::new(0);
        for (name, n) in terms {
            c = c.add(name, vec![field.int(*n)]);
        }
        c
    }
}

/// Σ ι_* θ_Z in H^(2d)_dR; the cycle is null-homologous iff this vanishes.
pub fn homology_obstruction(g: &GeometryPackage, cycle: &CoefficientCycle) -> Result<Vector> {
    let top = 2 * g.dimension;
    let h = g.dr_cohomology(crate::syntomic::Support::Ordinary, top)?;
    let mut acc = vec![g.field.zero(); h.dim];
    if h.dim == 0 {
        return Ok(acc);
    }
    for (name, theta) in &cycle.summands {
        let pt = g.point_named(name)?;
        check_theta(pt, theta)?;
        let v = pushforward_point(g, pt, theta, 0)?;
        acc = acc.iter().zip(&v).map(|(a, b)| a.add(b)).collect();
    }
    Ok(acc)
}

/// Exact zero for exact data, zero at precision otherwise.
pub fn is_null_homologous(g: &GeometryPackage, cycle: &CoefficientCycle) -> Result<bool> {
    let obs = homology_obstruction(g, cycle)?;
    Ok(obs.iter().all(|a| if a.is_exact() { a.is_exact_zero() } else { a.is_zero_at_precision() }))
}

fn check_theta(pt: &PointPullback, theta: &[PadicNumber]) -> Result<()> {
    let h = pt.package.hk_cohomology(0)?;
    if theta.len() != h.dim {
        return Err(Error::domain(format!(
            "θ for point {} has {} coordinates, H^0 of the fiber has dimension {}",
            pt.name,
            theta.len(),
            h.dim
        )));
    }
    Ok(())
}

/// The lift ω̃ of a de Rham class: either a syntomic cocycle on a synthetic
/// package or the cocycle (ω, 0, 0) of a curve whose points carry Coleman
/// primitives.
#[derive(Clone, Debug)]
pub enum ColemanLiftHandle {
    Synthetic(SynCochain),
    Curve(crate::coleman::ColemanPrimitive),
}

impl ColemanLiftHandle {
    /// The cocycle in `space`; it must be a lift of its own projection.
    pub fn cochain(&self, space: &FpSpace) -> Result<SynCochain> {
        let c = match self {
            ColemanLiftHandle::Synthetic(c) => c.clone(),
            ColemanLiftHandle::Curve(prim) => {
                let mut c = space.syn.zero_cochain(space.degree);
                if c.x.len() != prim.form.len() {
                    return Err(Error::domain("form does not match the package degree"));
                }
                c.x = prim.form.clone();
                c
            }
        };
        if c.degree != space.degree || !space.syn.check_quintuple(&c) {
            return Err(Error::domain("the lift is not a cocycle of the fp complex"));
        }
        Ok(c)
    }

    /// The package with the curve's points attached, when needed.
    pub fn prepare(&self, g: &GeometryPackage) -> Result<GeometryPackage> {
        match self {
            ColemanLiftHandle::Synthetic(_) => Ok(g.clone()),
            ColemanLiftHandle::Curve(prim) => prim.attach(g),
        }
    }
}

/// The cocycle for θ in syn_Q(fiber, m) with Q the local minimal polynomial.
fn theta_cochain(pt: &PointPullback, theta: &[PadicNumber], m: i64) -> Result<(SynComplex, SynCochain)> {
    let q = &pt.package;
    let h = q.hk_cohomology(0)?;
    let x = h.representative(theta);
    let qpoly = annihilating_poly(&q.phi.at(0), &x)?;
    let sq = build_syntomic(q, &qpoly.poly, m, Variant::Good)?;
    let mut c = sq.zero_cochain(0);
    c.x = x;
    if !sq.check_quintuple(&c) {
        return Err(Error::domain(format!("θ at {} is not in F^{m} of the fiber", pt.name)));
    }
    Ok((sq, c))
}

/// Σ_Z ⟨ι_Z^* ω̃, θ_Z⟩_fp for a null-homologous zero-cycle, with ω̃ a lift in
/// `space` (degree 1).
pub fn aj_fp(g: &GeometryPackage, space: &FpSpace, lift: &ColemanLiftHandle, cycle: &CoefficientCycle) -> Result<PadicNumber> {
    let g = lift.prepare(g)?;
    if space.degree != 1 {
        return Err(Error::domain("zero-cycles pair with H^1_fp"));
    }
    if !is_null_homologous(&g, cycle)? {
        let obs = homology_obstruction(&g, cycle)?;
        let shown: Vec<String> = obs.iter().map(|a| a.render(true)).collect();
        return Err(Error::domain(format!("cycle is not null-homologous; obstruction [{}]", shown.join(", "))));
    }
    let omega = lift.cochain(space)?;
    let mut acc = g.field.zero();
    for (name, theta) in &cycle.summands {
        let pt = g.point_named(name)?;
        check_theta(pt, theta)?;
        let ppr = pt.package.pairing.as_ref().ok_or_else(|| Error::domain(format!("point {name} has no pairing")))?;
        let m = ppr.top_label() + 1 - space.twist;
        if m != cycle.twist {
            return Err(Error::domain(format!("cycle twist {} does not complement the lift twist {}", cycle.twist, space.twist)));
        }
        let spt = build_syntomic(&pt.package, &space.poly.poly, space.twist, Variant::Good)?;
        let pulled = pullback_cochain(pt, &space.syn, &omega, &spt);
        let (sq, th) = theta_cochain(pt, theta, m)?;
        acc = acc.add(&trace_pairing(&pt.package, &spt, &pulled, &sq, &th)?);
    }
    Ok(acc)
}

/// Value of the semistable syntomic Abel–Jacobi pairing with the caveat that
/// it depends on the chosen lift.
#[derive(Clone, Debug)]
pub struct SemistableAj {
    pub value: PadicNumber,
    pub caveat: String,
}

/// Σ_Z ⟨ι_Z^* ω̃, θ_Z⟩ for ω̃ a cocycle of the semistable complex syn_P(g, n)
/// of degree 1; the point cochain is projected to the good complex before
/// pairing with θ.
pub fn aj_syn_semistable(
    g: &GeometryPackage,
    poly: &AdmissiblePolynomial,
    n: i64,
    cycle: &CoefficientCycle,
    omega_tilde: &SynCochain,
) -> Result<SemistableAj> {
    let sx = build_syntomic(g, &poly.poly, n, Variant::Semistable)?;
    if omega_tilde.degree != 1 || !sx.check_quintuple(omega_tilde) {
        return Err(Error::domain("ω̃ is not a degree-1 cocycle of the semistable complex"));
    }
    if !is_null_homologous(g, cycle)? {
        return Err(Error::domain("cycle is not null-homologous"));
    }
    let mut acc = g.field.zero();
    for (name, theta) in &cycle.summands {
        let pt = g.point_named(name)?;
        check_theta(pt, theta)?;
        let ppr = pt.package.pairing.as_ref().ok_or_else(|| Error::domain(format!("point {name} has no pairing")))?;
        let m = ppr.top_label() + 1 - n;
        let spt_ss = build_syntomic(&pt.package, &poly.poly, n, Variant::Semistable)?;
        let pulled = pullback_cochain(pt, &sx, omega_tilde, &spt_ss);
        let spt = build_syntomic(&pt.package, &poly.poly, n, Variant::Good)?;
        let good = SynCochain { degree: 1, x: pulled.x, y: pulled.y, z: pulled.z, u: vec![], v: vec![] };
        let (sq, th) = theta_cochain(pt, theta, m)?;
        acc = acc.add(&trace_pairing(&pt.package, &spt, &good, &sq, &th)?);
    }
    Ok(SemistableAj {
        value: acc,
        caveat: "the semistable value depends on the chosen lift of ω; it does not determine the class".into(),
    })
}

/// Given x in degree i with P(Φ)x exact and Ψ̄x exact, solves for the y and z
/// slots of a good-reduction cocycle (x, y, z).
pub fn complete_cocycle(syn: &SynComplex, i: i32, x: &[PadicNumber]) -> Result<SynCochain> {
    let rhs_y: Vector = syn.p_phi.at(i).mul_vec(x).iter().map(|a| a.neg()).collect();
    let y = solve(&syn.hk.d(i - 1), &rhs_y)?.ok_or_else(|| Error::domain("P(Φ)x is not a coboundary"))?;
    let rhs_z: Vector = syn.psi_bar.at(i).mul_vec(x).iter().map(|a| a.neg()).collect();
    let z = solve(&syn.quotient.complex.d(i - 1), &rhs_z)?.ok_or_else(|| Error::domain("Ψ̄x is not a coboundary"))?;
    let mut c = syn.zero_cochain(i);
    c.x = x.to_vec();
    c.y = y;
    c.z = z;
    Ok(c)
}

// ---------------------------------------------------------------------------
// synthetic instances

/// Rank-2 module of weight w: Φ with charpoly T² - aT + p^w (a random with
/// a² < 4p^w), conjugated by a random unimodular matrix; Fil^0 = all,
/// Fil^w = a random line.
pub fn random_weight_module<R: Rng>(rng: &mut R, field: &BaseField, weight: u32) -> Result<FilPhiNModule> {
    let pw = (field.p() as i64).pow(weight);
    let amax = ((4 * pw - 1) as f64).sqrt().floor() as i64;
    let a = rng.gen_range(-amax..=amax);
    let comp = Matrix::from_ints(&[vec![0, -pw], vec![1, a]], field);
    let (k, l) = (rng.gen_range(-3..=3), rng.gen_range(-3..=3));
    let u = Matrix::from_ints(&[vec![1, k], vec![0, 1]], field).mul(&Matrix::from_ints(&[vec![1, 0], vec![l, 1]], field));
    let phi = u.inverse()?.mul(&comp).mul(&u);
    let line = vec![field.int(rng.gen_range(-4..=4)), field.one()];
    let fil = Filtration::new(
        2,
        vec![(0, Subspace::whole(2, field)), (weight as i64, Subspace::span(2, &[line], field)?)],
        field,
    )?;
    Ok(FilPhiNModule::new(phi, Matrix::zeros(2, 2, field), fil))
}

fn random_int_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, field: &BaseField) -> Matrix {
    Matrix::from_fn(rows, cols, field, |_, _| field.int(rng.gen_range(-5..=5)))
}

fn random_in<R: Rng>(rng: &mut R, s: &Subspace) -> Vector {
    let field = s.field().clone();
    let coeffs: Vec<PadicNumber> = (0..s.dim()).map(|_| field.int(rng.gen_range(-6..=6))).collect();
    s.basis().mul_vec(&coeffs)
}

/// The unit of Sym^r ⊗ Sym^r: the vector 𝟙 with ⟨β⊗γ, 𝟙⟩ = ⟨β, γ⟩.
pub fn unit_class(r: usize, field: &BaseField) -> Result<Vector> {
    let s = sym_pairing(r, field);
    let n = r + 1;
    let big = s.kron(&s);
    let rhs: Vector = (0..n * n).map(|k| s.get(k / n, k % n).clone()).collect();
    if big.rank()? != n * n {
        return Err(Error::domain("pairing on Sym^r ⊗ Sym^r is degenerate; the unit is not unique"));
    }
    solve(&big, &rhs)?.ok_or_else(|| Error::domain("no unit class"))
}

/// Both sides of a formula identity.
#[derive(Clone, Debug)]
pub struct FormulaValues {
    pub lhs: PadicNumber,
    pub rhs: PadicNumber,
}

impl FormulaValues {
    pub fn agree_to(&self, abs: i64) -> bool {
        self.lhs.sub(&self.rhs).is_zero_at_precision() || self.lhs.agrees_to(&self.rhs, abs)
    }
}

/// Synthetic diagonal-cycle data. The triple package has H^2 carrying the
/// product class ω₂⊗ω₃ and H^1 = 0; its degree-1 cochains are
/// Y = L ⊗ Sym^r2 ⊗ Sym^r3 and its degree-2 cochains Y ⊕ H_c with
/// d = (id, 0). The projection ψ = id_L ⊗ pr_r1 maps Y onto the degree-1
/// part L ⊗ Sym^r1(-t) of the target package.
#[derive(Clone, Debug)]
pub struct DiagonalInstance {
    pub r: [usize; 3],
    pub triple: GeometryPackage,
    pub target: GeometryPackage,
    pub projection: PackageMorphism,
    /// Cocycle of degree 2 representing ω₂⊗ω₃, in F^N with N = s + 1 - t.
    pub product: Vector,
    /// Class η in H^1 of the target.
    pub eta: Vector,
    pub poly: AdmissiblePolynomial,
}

impl DiagonalInstance {
    /// Requires r1 ≤ r2 ≤ r3 ≤ 4, r2 + r3 - r1 even and positive, r3 ≤ r1 + r2.
    /// `eigen` makes H_c one-dimensional with eigenvalue ±p^((s+1)/2).
    pub fn random<R: Rng>(rng: &mut R, field: &BaseField, r: [usize; 3], eigen: bool) -> Result<Self> {
        let [r1, r2, r3] = r;
        if !(r1 <= r2 && r2 <= r3 && r3 <= 4 && (r2 + r3 - r1) % 2 == 0 && r2 + r3 > r1 && r3 <= r1 + r2) {
            return Err(Error::domain(format!("weights {r:?} do not satisfy the diagonal inequalities")));
        }
        let p = field.p() as i64;
        let t = ((r2 + r3 - r1) / 2) as i64;
        let s = (r2 + r3 + 1) as i64;
        let l = random_weight_module(rng, field, 1)?;
        let h = random_weight_module(rng, field, 1)?;
        let y = tensor(&l, &tensor(&sym(&h, r2)?, &sym(&h, r3)?)?)?;
        let b1 = twist(&tensor(&l, &sym(&h, r1)?)?, -t);
        let my = y.dim();
        let mb = b1.dim();

        // H_c of weight s + 1, Fil concentrated in s + 1
        let hc_phi = if eigen {
            if (s + 1) % 2 != 0 {
                return Err(Error::domain("an eigen instance needs s + 1 even"));
            }
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            Matrix::from_ints(&[vec![sign * p.pow(((s + 1) / 2) as u32)]], field)
        } else {
            let ps = p.pow((s + 1) as u32);
            let bmax = ((4 * ps - 1) as f64).sqrt().floor() as i64;
            let b = rng.gen_range(-bmax..=bmax);
            Matrix::from_ints(&[vec![0, -ps], vec![1, b]], field)
        };
        let mh = hc_phi.rows();
        let e = random_int_matrix(rng, my, mh, field);
        let mut phi2 = Matrix::zeros(my + mh, my + mh, field);
        phi2.place(0, 0, &y.phi);
        phi2.place(0, my, &e);
        phi2.place(my, my, &hc_phi);
        let delta = Matrix::vstack(&[&Matrix::identity(my, field), &Matrix::zeros(mh, my, field)], my, field);
        let hk = Complex::new(0, vec![0, my, my + mh], vec![Matrix::zeros(my, 0, field), delta.clone()], field)?;
        let mut given = Vec::new();
        for a in 0..=s + 1 {
            let mut cols: Vec<Vector> = y.fil_at(a).vectors().iter().map(|v| delta.mul_vec(v)).collect();
            if a <= s + 1 {
                for k in 0..mh {
                    let mut v = vec![field.zero(); my + mh];
                    v[my + k] = field.one();
                    cols.push(v);
                }
            }
            given.push((a, Subspace::span(my + mh, &cols, field)?));
        }
        let fil2 = Filtration::new(my + mh, given, field)?;
        let mut yfil = Vec::new();
        for a in 0..=s {
            yfil.push((a, y.fil_at(a)));
        }
        let fil1 = Filtration::new(my, yfil, field)?;
        let triple = GeometryPackage::from_complex(
            "triple",
            2,
            hk,
            vec![Matrix::zeros(0, 0, field), y.phi.clone(), phi2],
            None,
            vec![Filtration::concentrated(0, 0, field), fil1, fil2],
        )?;

        let zero0 = Matrix::zeros(0, 0, field);
        let target = GeometryPackage::split(
            "target",
            field,
            1,
            0,
            vec![zero0.clone(), b1.phi.clone(), zero0.clone()],
            None,
            vec![Filtration::concentrated(0, 0, field), b1.fil.clone(), Filtration::concentrated(0, 0, field)],
        )?
        .with_pairing(
            vec![zero0.clone(), sym_pairing(1, field).kron(&sym_pairing(r1, field)), zero0],
            field.int(p).pow(s as u32),
        );

        let psi1 = Matrix::identity(2, field).kron(&cg_projection(r1, r2, r3, field)?);
        let hkmap = ChainMap::new(&triple.hk, &target.hk, |i| {
            if i == 1 {
                psi1.clone()
            } else {
                Matrix::zeros(target.hk.dim(i), triple.hk.dim(i), field)
            }
        })?;
        let projection = PackageMorphism { hk: hkmap.clone(), dr: hkmap };

        let n_top = s + 1 - t;
        let wy = random_in(rng, &y.fil_at(n_top));
        let mut product = delta.mul_vec(&wy);
        for k in 0..mh {
            product[my + k] = field.int(rng.gen_range(1..=6));
        }
        let eta: Vector = (0..mb).map(|_| field.int(rng.gen_range(-6..=6))).collect();
        let poly = cofinal_poly(&triple, 2)?;
        Ok(DiagonalInstance { r, triple, target, projection, product, eta, poly })
    }

    pub fn s(&self) -> i64 {
        (self.r[1] + self.r[2] + 1) as i64
    }

    pub fn t(&self) -> i64 {
        ((self.r[1] + self.r[2] - self.r[0]) / 2) as i64
    }

    pub fn validate(&self) -> Result<()> {
        self.triple.validate()?;
        self.target.validate()?;
        self.projection.validate(&self.triple, &self.target)
    }

    /// Replaces the projection by zero.
    pub fn with_zero_projection(mut self) -> Self {
        self.projection = PackageMorphism {
            hk: ChainMap::zero(&self.triple.hk, &self.target.hk),
            dr: ChainMap::zero(&self.triple.hk, &self.target.hk),
        };
        self
    }
}

/// ρ with dρ = P(Φ)(ω₂⊗ω₃), after checking that P kills the class and acts
/// invertibly on H^1.
fn rho(inst: &DiagonalInstance, poly: &AdmissiblePolynomial) -> Result<Vector> {
    let a = &inst.triple;
    if !invertible_on(a, &poly.poly, 1)? {
        return Err(Error::domain("P does not act invertibly on H^1 of the triple package"));
    }
    let v = apply_poly(&poly.poly, &a.phi.at(2)).mul_vec(&inst.product);
    solve(&a.hk.d(1), &v)?.ok_or_else(|| Error::domain("P does not kill the class of ω₂⊗ω₃ in H^2"))
}

/// ξ = P(Φ)^(-1) ψ ρ in H^1 of the target (class coordinates).
pub fn xi_class(inst: &DiagonalInstance, poly: &AdmissiblePolynomial) -> Result<Vector> {
    let b = &inst.target;
    if !invertible_on(b, &poly.poly, 1)? {
        return Err(Error::domain("P does not act invertibly on H^1 of the target"));
    }
    let r = rho(inst, poly)?;
    let psi_r = inst.projection.hk.at(1).mul_vec(&r);
    let pb = apply_poly(&poly.poly, &b.phi.at(1));
    let xi = solve(&pb, &psi_r)?.ok_or_else(|| Error::domain("P(Φ) is singular on the target"))?;
    Ok(b.hk_cohomology(1)?.class_of(&xi))
}

/// ⟨η̃, ψ_*(ω₂⊗ω₃)~⟩_fp against ⟨η, ξ⟩_dR.
pub fn evaluate_diagonal(inst: &DiagonalInstance) -> Result<FormulaValues> {
    let b = &inst.target;
    let a = &inst.triple;
    let pr = b.pairing.as_ref().ok_or_else(|| Error::domain("target package has no pairing"))?;
    let t = inst.t();
    let n_top = pr.top_label() + 1 - t;

    let p1 = cofinal_poly(b, 1)?;
    let syn1 = build_syntomic(b, &p1.poly, t, Variant::Good)?;
    let mut eta_t = syn1.zero_cochain(1);
    eta_t.x = inst.eta.clone();
    if !syn1.check_quintuple(&eta_t) {
        return Err(Error::domain("η does not lift to the fp complex"));
    }

    let syn_a = build_syntomic(a, &inst.poly.poly, n_top, Variant::Good)?;
    let lift = complete_cocycle(&syn_a, 2, &inst.product)?;
    let syn_b = build_syntomic(b, &inst.poly.poly, n_top, Variant::Good)?;
    let pushed = inst.projection.map_cochain(&syn_a, &lift, &syn_b);
    let lhs = trace_pairing(b, &syn1, &eta_t, &syn_b, &pushed)?;

    let xi = xi_class(inst, &inst.poly)?;
    let h = b.hk_cohomology(1)?;
    let eta_cls = h.class_of(&inst.eta);
    let gram = h.lift.transpose().mul(&pr.hk[1]).mul(&h.lift);
    let rhs = bilinear(&eta_cls, &gram, &xi);
    Ok(FormulaValues { lhs, rhs })
}

/// Synthetic isogeny-cycle data. A rank-2 module H_A of weight 1 and an
/// isogeny φ^* = g: H_A' → H_A; the point fiber is
/// (Sym^r H_A' ⊗ Sym^r H_A)(r) and the ambient package has only degree 1,
/// (W ⊗ Sym^r H_A)(r) with W of weight r + 1. The primitive at the point is
/// c ⊗ id for c: W → Sym^r H_A'.
#[derive(Clone, Debug)]
pub struct IsogenyInstance {
    pub r: usize,
    pub package: GeometryPackage,
    pub cycle: CoefficientCycle,
    pub isogeny: Matrix,
    pub primitive: Matrix,
    pub omega: Vector,
    pub alpha: Vector,
}

impl IsogenyInstance {
    pub fn random<R: Rng>(rng: &mut R, field: &BaseField, r: usize) -> Result<Self> {
        if r > 4 {
            return Err(Error::domain("isogeny instances are generated for r ≤ 4"));
        }
        let ha = random_weight_module(rng, field, 1)?;
        let g = loop {
            let m = random_int_matrix(rng, 2, 2, field);
            if !m.det()?.is_exact_zero() {
                break m;
            }
        };
        let ginv = g.inverse()?;
        let line_a = ha.fil_at(1).basis().column(0);
        let ha2 = FilPhiNModule::new(
            ginv.mul(&ha.phi).mul(&g),
            Matrix::zeros(2, 2, field),
            Filtration::new(
                2,
                vec![(0, Subspace::whole(2, field)), (1, Subspace::span(2, &[ginv.mul_vec(&line_a)], field)?)],
                field,
            )?,
        );
        let sa = sym(&ha, r)?;
        let v = twist(&tensor(&sym(&ha2, r)?, &sa)?, r as i64);
        let spair = sym_pairing(r, field);
        let fiber = GeometryPackage::split("fiber", field, 0, 0, vec![v.phi.clone()], None, vec![v.fil.clone()])?
            .with_pairing(vec![spair.kron(&spair)], field.one());

        let w = random_weight_module(rng, field, (r + 1) as u32)?;
        let x1 = twist(&tensor(&w, &sa)?, r as i64);
        let zero0 = Matrix::zeros(0, 0, field);
        let mut package = GeometryPackage::split(
            "ambient",
            field,
            1,
            0,
            vec![zero0.clone(), x1.phi.clone(), zero0],
            None,
            vec![Filtration::concentrated(0, 0, field), x1.fil.clone(), Filtration::concentrated(0, 0, field)],
        )?;
        let primitive = random_int_matrix(rng, r + 1, 2, field);
        let c1 = primitive.kron(&Matrix::identity(r + 1, field));
        let pb = PointPullback::new("y", fiber.clone(), ChainMap::zero(&package.hk, &fiber.hk), ChainMap::zero(&package.hk, &fiber.hk))
            .with_primitive(vec![Matrix::zeros(0, 0, field), c1]);
        package.points.push(pb);

        // θ = (φ_* ⊗ id) 𝟙_A with φ_* the adjoint of Sym^r g
        let gr = sym_power_matrix(&g, r);
        let push = spair.inverse()?.mul(&gr.transpose()).mul(&spair);
        let theta = push.kron(&Matrix::identity(r + 1, field)).mul_vec(&unit_class(r, field)?);
        let cycle = CoefficientCycle::new(0).add("y", theta);

        let omega = w.fil_at((r + 1) as i64).basis().column(0);
        let alpha: Vector = (0..=r).map(|_| field.int(rng.gen_range(-6..=6))).collect();
        Ok(IsogenyInstance { r, package, cycle, isogeny: g, primitive, omega, alpha })
    }

    /// ω ⊗ α as a degree-1 cochain of the ambient package.
    pub fn form(&self) -> Vector {
        let f = &self.package.field;
        let o = Matrix::from_columns(2, std::slice::from_ref(&self.omega), f);
        let a = Matrix::from_columns(self.r + 1, std::slice::from_ref(&self.alpha), f);
        o.kron(&a).column(0)
    }
}

/// aj_fp of the isogeny cycle against ω ⊗ α, and ⟨φ^*(c(ω)), α⟩.
pub fn evaluate_isogeny(inst: &IsogenyInstance) -> Result<FormulaValues> {
    let field = &inst.package.field;
    let space = fp_cohomology(&inst.package, 1, 1)?;
    let mut c = space.syn.zero_cochain(1);
    c.x = inst.form();
    let lhs = aj_fp(&inst.package, &space, &ColemanLiftHandle::Synthetic(c), &inst.cycle)?;
    let s = sym_pairing(inst.r, field);
    let pulled = sym_power_matrix(&inst.isogeny, inst.r).mul_vec(&inst.primitive.mul_vec(&inst.omega));
    let rhs = bilinear(&pulled, &s, &inst.alpha);
    Ok(FormulaValues { lhs, rhs })
}

/// A formula instance of either kind.
#[derive(Clone, Debug)]
pub enum FormulaInstance {
    Diagonal(DiagonalInstance),
    Isogeny(IsogenyInstance),
}

pub fn evaluate_formula(inst: &FormulaInstance) -> Result<FormulaValues> {
    match inst {
        FormulaInstance::Diagonal(d) => evaluate_diagonal(d),
        FormulaInstance::Isogeny(i) => evaluate_isogeny(i),
    }
}

/// Diagonal weight triples (r1, r2, r3) with r ≤ 4.
pub fn diagonal_weights() -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for r3 in 1..=4usize {
        for r2 in 0..=r3 {
            for r1 in 0..=r2 {
                if (r2 + r3 - r1) % 2 == 0 && r2 + r3 > r1 && r3 <= r1 + r2 {
                    out.push([r1, r2, r3]);
                }
            }
        }
    }
    out
}
