//! Coleman integration on odd hyperelliptic curves over Q_p.
//!
//! Integrals between ordinary points are assembled from tiny integrals to the
//! Teichmüller points of their residue discs and an anchor-to-anchor term
//! obtained from the Frobenius equivariance (I - M^T)·I = g(T_Q) - g(T_P).

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use crate::curves::{poly_eval, FrobeniusData, HyperellipticCurve, OddForm};
use crate::error::{Error, Result};
use crate::fp::{aj_fp, cofinal_poly, fp_cohomology, AdmissiblePolynomial, CoefficientCycle, ColemanLiftHandle};
use crate::homological::ChainMap;
use crate::linalg::{dot, solve, Matrix, Vector};
use crate::padic::{BaseField, PadicNumber, PadicPoly, PowerSeries};
use crate::syntomic::{GeometryPackage, PointPullback};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiscKind {
    Ordinary,
    Weierstrass,
    Infinity,
}

/// A point of y² = f(x) with its residue-disc type.
#[derive(Clone, Debug)]
pub struct CurvePoint {
    pub x: PadicNumber,
    pub y: PadicNumber,
    pub kind: DiscKind,
}

impl CurvePoint {
    /// Checks y² = f(x) to within p^(N-2) and classifies the disc.
    pub fn new(curve: &HyperellipticCurve, x: PadicNumber, y: PadicNumber) -> Result<Self> {
        let field = x.field().clone();
        if x.valuation().is_some_and(|v| v < 0) {
            return Ok(CurvePoint { x, y, kind: DiscKind::Infinity });
        }
        let res = y.mul(&y).sub(&curve.eval_f(&x));
        let tol = field.precision() as i64 - 2;
        let on_curve = res.is_zero_at_precision() || res.valuation().is_some_and(|v| v >= tol);
        if !on_curve {
            return Err(Error::validation(format!("point ({}, {}) is not on the curve", x.render(true), y.render(true))));
        }
        let kind = if y.valuation() == Some(0) { DiscKind::Ordinary } else { DiscKind::Weierstrass };
        Ok(CurvePoint { x, y, kind })
    }

    /// The point with the given x and the square root of f(x) whose residue
    /// is `residue`.
    pub fn from_x(curve: &HyperellipticCurve, x: PadicNumber, residue: u64) -> Result<Self> {
        let y = padic_sqrt(&curve.eval_f(&x), residue)?;
        CurvePoint::new(curve, x, y)
    }

    pub fn in_field(&self, field: &BaseField) -> Self {
        CurvePoint { x: self.x.in_field(field), y: self.y.in_field(field), kind: self.kind }
    }

    fn residues(&self) -> Result<(u64, u64)> {
        Ok((self.x.residue()?, self.y.residue()?))
    }

    pub fn same_disc(&self, other: &CurvePoint) -> Result<bool> {
        Ok(self.kind == DiscKind::Ordinary && other.kind == DiscKind::Ordinary && self.residues()? == other.residues()?)
    }

    fn require_ordinary(&self) -> Result<()> {
        match self.kind {
            DiscKind::Ordinary => Ok(()),
            k => Err(Error::domain(format!("non-ordinary disc ({k:?}) at x = {}", self.x.render(true)))),
        }
    }
}

fn sqrt_mod_p(a: u64, p: u64) -> Vec<u64> {
    (0..p).filter(|r| r * r % p == a % p).collect()
}

/// Square root of a p-adic unit with prescribed residue, by Newton iteration.
pub fn padic_sqrt(a: &PadicNumber, residue: u64) -> Result<PadicNumber> {
    let field = a.field().clone();
    let p = field.p();
    if a.valuation() != Some(0) {
        return Err(Error::domain(format!("{} is not a unit; no square root on an ordinary disc", a.render(true))));
    }
    let ar = a.residue()?;
    if (residue * residue) % p != ar || residue % p == 0 {
        return Err(Error::domain(format!("{residue} is not a square root of {ar} mod {p}")));
    }
    let a = a.to_capped();
    let half = field.rational(1, 2);
    let mut y = field.int(residue as i64).to_capped();
    let steps = (field.precision() as f64).log2().ceil() as usize + 2;
    for _ in 0..steps {
        y = y.add(&a.div(&y)?).mul(&half);
    }
    Ok(y)
}

/// Teichmüller lift of the residue of x: the root of z^p = z near x.
fn teichmuller_x(x: &PadicNumber) -> Result<PadicNumber> {
    let field = x.field().clone();
    let p = field.p();
    let r = x.residue()?;
    if r == 0 {
        return Ok(field.zero());
    }
    let mut z = field.int(r as i64).to_capped();
    let pm = field.int(p as i64);
    let steps = (field.precision() as f64).log2().ceil() as usize + 2;
    for _ in 0..steps {
        let zp1 = z.pow(p as u32 - 1);
        let h = zp1.mul(&z).sub(&z);
        let dh = pm.mul(&zp1).sub(&field.one());
        z = z.sub(&h.div(&dh)?);
    }
    Ok(z)
}

/// The Frobenius-fixed point of the residue disc of an ordinary point.
pub fn teichmuller_disc(curve: &HyperellipticCurve, pt: &CurvePoint) -> Result<CurvePoint> {
    pt.require_ordinary()?;
    let x = teichmuller_x(&pt.x)?;
    CurvePoint::from_x(curve, x, pt.y.residue()?)
}

/// Image under the Frobenius lift x ↦ x^p, y ↦ sqrt(f(x^p)) ≡ y^p.
pub fn frobenius_point(curve: &HyperellipticCurve, pt: &CurvePoint) -> Result<CurvePoint> {
    pt.require_ordinary()?;
    let p = curve.p();
    let x = pt.x.pow(p as u32);
    CurvePoint::from_x(curve, x, pt.y.residue()?)
}

/// Series length M such that t^(k+1)/(k+1) is below the target precision for
/// all k ≥ M when v(t) ≥ v.
fn series_order(p: u64, v: i64, target: i64) -> usize {
    let logp = |n: usize| -> i64 {
        let mut k = 0;
        let mut m = n as u64;
        while m >= p {
            m /= p;
            k += 1;
        }
        k
    };
    let mut m = 1usize;
    while (m as i64 + 1) * v - logp(m + 1) < target {
        m += 1;
    }
    m
}

/// Local expansion of a form in t = x - x(P) on the disc of P, modulo t^order.
pub fn local_expansion(curve: &HyperellipticCurve, form: &OddForm, pt: &CurvePoint, order: usize) -> Result<PowerSeries> {
    let field = pt.x.field().clone();
    let shift = PadicPoly::new(vec![pt.x.clone(), field.one()], &field);
    let fpoly = PadicPoly::new(curve.f_poly(&field), &field).compose(&shift);
    let y2 = pt.y.mul(&pt.y);
    let y2inv = y2.inv()?;
    let mut ucoeffs: Vec<PadicNumber> = fpoly.coeffs().iter().map(|c| c.mul(&y2inv)).collect();
    if !ucoeffs.is_empty() {
        ucoeffs[0] = field.zero();
    }
    let u = PowerSeries::new(ucoeffs, order, &field);
    let yinv = pt.y.inv()?;
    let mut acc = PowerSeries::new(vec![], order, &field);
    for (m, a) in &form.terms {
        if a.iter().all(|c| c.is_exact_zero()) {
            continue;
        }
        let e = 2 * *m as i64 + 1;
        let w = PowerSeries::binomial_power(&u, &BigRational::new((-e).into(), 2.into()));
        let am = PowerSeries::from_poly(&PadicPoly::new(a.clone(), &field).compose(&shift), order);
        acc = acc.add(&am.mul(&w).scale(&yinv.pow(e as u32)));
    }
    Ok(acc)
}

/// ∫_P^Q of an odd form for P, Q in one ordinary residue disc.
pub fn tiny_integral(curve: &HyperellipticCurve, form: &OddForm, p_pt: &CurvePoint, q_pt: &CurvePoint) -> Result<PadicNumber> {
    p_pt.require_ordinary()?;
    q_pt.require_ordinary()?;
    if !p_pt.same_disc(q_pt)? {
        return Err(Error::domain("tiny integrals need both endpoints in one residue disc"));
    }
    let field = p_pt.x.field().clone();
    let t = q_pt.x.sub(&p_pt.x);
    let v = match t.valuation() {
        None => return Ok(field.zero()),
        Some(v) if t.is_zero_at_precision() => v.max(1),
        Some(v) => v,
    };
    if t.is_zero_at_precision() && t.is_exact_zero() {
        return Ok(field.zero());
    }
    let target = field.precision() as i64;
    let order = series_order(field.p(), v.max(1), target);
    if order > 4000 {
        return Err(Error::precision("tiny integral needs too many terms", v));
    }
    let s = local_expansion(curve, form, p_pt, order)?;
    Ok(s.integrate().eval(&t))
}

/// The basis form x^i dx/y.
pub fn basis_form(i: usize, field: &BaseField) -> OddForm {
    let mut a = vec![field.zero(); i + 1];
    a[i] = field.one();
    OddForm::single(0, a)
}

/// Σ c_i x^i dx/y.
pub fn combination_form(c: &[PadicNumber], field: &BaseField) -> OddForm {
    OddForm::single(0, c.to_vec()).in_field(field)
}

trait InField {
    fn in_field(self, field: &BaseField) -> Self;
}

impl InField for OddForm {
    fn in_field(mut self, field: &BaseField) -> Self {
        for a in self.terms.values_mut() {
            for c in a.iter_mut() {
                *c = c.in_field(field);
            }
        }
        self
    }
}

fn working_field(frob: &FrobeniusData) -> BaseField {
    frob.matrix.field().clone()
}

/// Anchor integrals ∫_{T_P}^{T_Q} x^i dx/y between Teichmüller points, with
/// the right-hand side g(T_Q) - g(T_P) of the equivariance system.
pub fn anchor_integrals(frob: &FrobeniusData, tp: &CurvePoint, tq: &CurvePoint) -> Result<(Vector, Vector)> {
    let field = working_field(frob);
    let n = frob.matrix.rows();
    let rhs: Vector = (0..n)
        .map(|i| {
            let g = &frob.exact_parts[i];
            Ok(g.eval(&tq.x, &tq.y, &field)?.sub(&g.eval(&tp.x, &tp.y, &field)?))
        })
        .collect::<Result<_>>()?;
    let sys = Matrix::identity(n, &field).sub(&frob.matrix.transpose());
    if sys.rank()? < n {
        return Err(Error::domain("I - M^T is singular; Frobenius has eigenvalue 1 on H^1"));
    }
    let ints = solve(&sys, &rhs)?.ok_or_else(|| Error::domain("equivariance system has no solution"))?;
    Ok((ints, rhs))
}

/// ∫_P^Q x^i dx/y for i < 2g between ordinary points.
pub fn coleman_primitive(curve: &HyperellipticCurve, frob: &FrobeniusData, p_pt: &CurvePoint, q_pt: &CurvePoint) -> Result<Vector> {
    let field = working_field(frob);
    let (p_pt, q_pt) = (p_pt.in_field(&field), q_pt.in_field(&field));
    p_pt.require_ordinary()?;
    q_pt.require_ordinary()?;
    let curve = curve.with_field(&field);
    let tp = teichmuller_disc(&curve, &p_pt)?;
    let tq = teichmuller_disc(&curve, &q_pt)?;
    let (anchor, _) = anchor_integrals(frob, &tp, &tq)?;
    let n = frob.matrix.rows();
    (0..n)
        .map(|i| {
            let w = basis_form(i, &field);
            Ok(tiny_integral(&curve, &w, &p_pt, &tp)?.add(&anchor[i]).add(&tiny_integral(&curve, &w, &tq, &q_pt)?))
        })
        .collect()
}

/// Kedlaya reduction form = dg + Σ c_i x^i dx/y.
pub fn reduce_form(curve: &HyperellipticCurve, form: &OddForm) -> Result<(crate::curves::ExactPart, Vector)> {
    let field = form.terms.values().flat_map(|a| a.first()).next().map(|c| c.field().clone()).unwrap_or_else(|| curve.field().clone());
    curve.reduce(form, &field)
}

/// ∫_P^Q of an arbitrary odd form between ordinary points.
pub fn integrate_form(
    curve: &HyperellipticCurve,
    frob: &FrobeniusData,
    form: &OddForm,
    p_pt: &CurvePoint,
    q_pt: &CurvePoint,
) -> Result<PadicNumber> {
    let field = working_field(frob);
    let form = form.clone().in_field(&field);
    let curve = curve.with_field(&field);
    let (p_pt, q_pt) = (p_pt.in_field(&field), q_pt.in_field(&field));
    let tp = teichmuller_disc(&curve, &p_pt)?;
    let tq = teichmuller_disc(&curve, &q_pt)?;
    let (g, c) = curve.reduce(&form, &field)?;
    let (anchor, _) = anchor_integrals(frob, &tp, &tq)?;
    let middle = g.eval(&tq.x, &tq.y, &field)?.sub(&g.eval(&tp.x, &tp.y, &field)?).add(&dot(&c, &anchor, &field));
    Ok(tiny_integral(&curve, &form, &p_pt, &tp)?.add(&middle).add(&tiny_integral(&curve, &form, &tq, &q_pt)?))
}

/// Σ n_j ∫_B^(P_j) ω for a degree-zero divisor, ω = Σ c_i x^i dx/y.
pub fn aj_divisor(curve: &HyperellipticCurve, frob: &FrobeniusData, divisor: &[(CurvePoint, i64)], omega: &[PadicNumber]) -> Result<PadicNumber> {
    let Some((base, _)) = divisor.first() else {
        return Ok(working_field(frob).zero());
    };
    aj_divisor_from(curve, frob, divisor, omega, base)
}

/// [`aj_divisor`] with an explicit base point.
pub fn aj_divisor_from(
    curve: &HyperellipticCurve,
    frob: &FrobeniusData,
    divisor: &[(CurvePoint, i64)],
    omega: &[PadicNumber],
    base: &CurvePoint,
) -> Result<PadicNumber> {
    let field = working_field(frob);
    let deg: i64 = divisor.iter().map(|(_, n)| n).sum();
    if deg != 0 {
        return Err(Error::domain(format!("divisor is not null-homologous: degree {deg}")));
    }
    for (pt, _) in divisor {
        pt.require_ordinary()?;
    }
    let omega: Vector = omega.iter().map(|c| c.in_field(&field)).collect();
    let mut acc = field.zero();
    for (pt, n) in divisor {
        if *n == 0 {
            continue;
        }
        let ints = coleman_primitive(curve, frob, base, pt)?;
        acc = acc.add(&dot(&omega, &ints, &field).mul(&field.int(*n)));
    }
    Ok(acc)
}

/// Coleman integrals of every basis form from a base point to named points;
/// as a lift handle it supplies the primitive data of the points.
#[derive(Clone, Debug)]
pub struct ColemanPrimitive {
    pub basepoint: CurvePoint,
    /// Coordinates of ω in the basis x^i dx/y.
    pub form: Vector,
    pub points: Vec<(String, CurvePoint, Vector)>,
}

impl ColemanPrimitive {
    pub fn new(
        curve: &HyperellipticCurve,
        frob: &FrobeniusData,
        form: &[PadicNumber],
        basepoint: &CurvePoint,
        points: &[(&str, CurvePoint)],
    ) -> Result<Self> {
        let pts = points
            .iter()
            .map(|(name, pt)| Ok((name.to_string(), pt.clone(), coleman_primitive(curve, frob, basepoint, pt)?)))
            .collect::<Result<_>>()?;
        Ok(ColemanPrimitive { basepoint: basepoint.clone(), form: form.to_vec(), points: pts })
    }

    /// F_ω at a named point.
    pub fn value(&self, name: &str) -> Result<PadicNumber> {
        let (_, _, v) = self.points.iter().find(|(n, _, _)| n == name).ok_or_else(|| Error::domain(format!("no point named {name}")))?;
        let field = v.first().map(|c| c.field().clone()).ok_or_else(|| Error::domain("empty primitive"))?;
        let form: Vector = self.form.iter().map(|c| c.in_field(&field)).collect();
        Ok(dot(&form, v, &field))
    }

    /// The package with a point pullback per named point; the primitive row
    /// is the vector of basis integrals from the base point.
    pub fn attach(&self, g: &GeometryPackage) -> Result<GeometryPackage> {
        let field = g.field.clone();
        let mut out = g.clone();
        out.points.retain(|pt| !self.points.iter().any(|(n, _, _)| *n == pt.name));
        for (name, _, ints) in &self.points {
            let pt = GeometryPackage::point(&field);
            let hk = ChainMap::new(&g.hk, &pt.hk, |i| {
                if i == 0 {
                    Matrix::identity(1, &field)
                } else {
                    Matrix::zeros(pt.hk.dim(i), g.hk.dim(i), &field)
                }
            })?;
            let row = Matrix::from_fn(1, ints.len(), &field, |_, j| ints[j].in_field(&field));
            let pb = PointPullback::new(name, pt, hk.clone(), hk).with_primitive(vec![Matrix::zeros(0, 1, &field), row]);
            out.points.push(pb);
        }
        Ok(out)
    }
}

/// The pair (f, ω) with df = P(φ*)ω: f = Σ_k p_k g^(k) where
/// (φ*)^k ω = d g^(k) + Σ (M^k) ω.
#[derive(Clone, Debug)]
pub struct PairRepresentation {
    pub curve: HyperellipticCurve,
    pub form: Vector,
    pub poly: AdmissiblePolynomial,
    frob: FrobeniusData,
}

/// Builds the pair for a holomorphic ω and a weight-1 P killing H^1.
pub fn pair_representation(
    curve: &HyperellipticCurve,
    frob: &FrobeniusData,
    form: &[PadicNumber],
    poly: &AdmissiblePolynomial,
) -> Result<PairRepresentation> {
    let g = curve.genus();
    if form.len() != 2 * g || form[g..].iter().any(|c| !c.is_zero_at_precision()) {
        return Err(Error::domain("ω must be a holomorphic form in F^1 H^1"));
    }
    if poly.weight != 1 {
        return Err(Error::domain(format!("P has weight {}, need weight 1", poly.weight)));
    }
    let num = frob.numerator()?;
    let n = num.len() - 1;
    let field = working_field(frob);
    let chi = PadicPoly::new((0..=n).map(|k| PadicNumber::exact_big(num[n - k].clone(), &field)).collect(), &field);
    let (_, rem) = poly.poly.in_field(&field).divrem(&chi)?;
    if !rem.is_exact_zero() {
        return Err(Error::domain("P does not kill H^1"));
    }
    Ok(PairRepresentation {
        curve: curve.with_field(&field),
        form: form.iter().map(|c| c.in_field(&field)).collect(),
        poly: poly.clone(),
        frob: frob.clone(),
    })
}

impl PairRepresentation {
    fn field(&self) -> BaseField {
        working_field(&self.frob)
    }

    /// f(z) = Σ_k p_k Σ_(l<k) Σ_j (M^l ω)_j g_j(φ^(k-1-l) z).
    pub fn f_value(&self, z: &CurvePoint) -> Result<PadicNumber> {
        let field = self.field();
        let z = z.in_field(&field);
        let d = self.poly.degree();
        let mut orbit = vec![z];
        for _ in 1..d.max(1) {
            let next = frobenius_point(&self.curve, orbit.last().unwrap())?;
            orbit.push(next);
        }
        let gvals: Vec<Vector> = orbit
            .iter()
            .map(|pt| self.frob.exact_parts.iter().map(|g| g.eval(&pt.x, &pt.y, &field)).collect::<Result<Vector>>())
            .collect::<Result<_>>()?;
        let mut mw = vec![self.form.clone()];
        for l in 1..d {
            let next = self.frob.matrix.mul_vec(&mw[l - 1]);
            mw.push(next);
        }
        let mut acc = field.zero();
        for k in 1..=d {
            let pk = self.poly.poly.coeff(k).in_field(&field);
            if pk.is_exact_zero() {
                continue;
            }
            let mut gk = field.zero();
            for l in 0..k {
                gk = gk.add(&dot(&mw[l], &gvals[k - 1 - l], &field));
            }
            acc = acc.add(&pk.mul(&gk));
        }
        Ok(acc)
    }

    /// F_ω(z) normalized by F_ω(base) = 0:
    /// (f(T_z) - f(T_base))/P(1) + ∫_(T_z)^z ω - ∫_(T_base)^base ω.
    pub fn primitive(&self, base: &CurvePoint, z: &CurvePoint) -> Result<PadicNumber> {
        let field = self.field();
        let (base, z) = (base.in_field(&field), z.in_field(&field));
        let tz = teichmuller_disc(&self.curve, &z)?;
        let tb = teichmuller_disc(&self.curve, &base)?;
        let p1 = self.poly.poly.eval(&field.one()).in_field(&field);
        let w = combination_form(&self.form, &field);
        let anchor = self.f_value(&tz)?.sub(&self.f_value(&tb)?).div(&p1)?;
        Ok(anchor.add(&tiny_integral(&self.curve, &w, &tz, &z)?).sub(&tiny_integral(&self.curve, &w, &tb, &base)?))
    }

    /// Σ_k p_k ∫_(φ^k P)^(φ^k Q) ω for P, Q in one disc; equals f(Q) - f(P).
    pub fn pushed_tiny(&self, p_pt: &CurvePoint, q_pt: &CurvePoint) -> Result<PadicNumber> {
        let field = self.field();
        let w = combination_form(&self.form, &field);
        let (mut a, mut b) = (p_pt.in_field(&field), q_pt.in_field(&field));
        let mut acc = field.zero();
        for k in 0..=self.poly.degree() {
            let pk = self.poly.poly.coeff(k).in_field(&field);
            if !pk.is_exact_zero() {
                acc = acc.add(&pk.mul(&tiny_integral(&self.curve, &w, &a, &b)?));
            }
            a = frobenius_point(&self.curve, &a)?;
            b = frobenius_point(&self.curve, &b)?;
        }
        Ok(acc)
    }
}

/// A random ordinary point: x a random p-adic integer with f(x) a nonzero
/// square mod p.
pub fn random_ordinary_point<R: Rng>(rng: &mut R, curve: &HyperellipticCurve, field: &BaseField) -> Result<CurvePoint> {
    let p = field.p();
    let modulus = field.pow(field.precision());
    for _ in 0..200 {
        let x = PadicNumber::from_int_mod(&random_below(rng, &modulus), field.precision() as i64, field);
        let fx = curve.eval_f(&x);
        if fx.valuation() != Some(0) {
            continue;
        }
        let roots = sqrt_mod_p(fx.residue()?, p);
        if roots.is_empty() {
            continue;
        }
        let r = roots[rng.gen_range(0..roots.len())];
        return CurvePoint::from_x(curve, x, r);
    }
    Err(Error::domain("no ordinary point found; the reduction may have no affine points with y ≠ 0"))
}

/// A random ordinary point in the residue disc of `pt`.
pub fn random_point_in_disc<R: Rng>(rng: &mut R, curve: &HyperellipticCurve, pt: &CurvePoint) -> Result<CurvePoint> {
    let field = pt.x.field().clone();
    let modulus = field.pow(field.precision() - 1);
    let t = PadicNumber::from_int_mod(&random_below(rng, &modulus), field.precision() as i64 - 1, &field).shift(1);
    CurvePoint::from_x(curve, pt.x.add(&t), pt.y.residue()?)
}

fn random_below<R: Rng>(rng: &mut R, m: &BigInt) -> BigInt {
    let bits = m.bits() + 16;
    let mut acc = BigInt::from(0);
    let mut got = 0;
    while got < bits {
        acc = (acc << 32) + BigInt::from(rng.gen::<u32>());
        got += 32;
    }
    num_integer::Integer::mod_floor(&acc, m)
}

/// Third intersection of the line through P and Q with y² = x³ + a2 x² + a4 x + a6.
pub fn chord_third_point(curve: &HyperellipticCurve, p_pt: &CurvePoint, q_pt: &CurvePoint) -> Result<CurvePoint> {
    if curve.genus() != 1 {
        return Err(Error::domain("chord construction needs an elliptic curve"));
    }
    let field = p_pt.x.field().clone();
    let a2 = PadicNumber::exact_big(curve.coeffs()[2].clone(), &field);
    let lambda = q_pt.y.sub(&p_pt.y).div(&q_pt.x.sub(&p_pt.x))?;
    let x = lambda.mul(&lambda).sub(&a2).sub(&p_pt.x).sub(&q_pt.x);
    let y = lambda.mul(&x.sub(&p_pt.x)).add(&p_pt.y);
    CurvePoint::new(curve, x, y)
}

/// A principal divisor (P) + (Q) - (R) - (S) from two chords through a common
/// third point; all four points ordinary with distinct x residues per chord.
pub fn chord_divisor<R: Rng>(rng: &mut R, curve: &HyperellipticCurve, field: &BaseField) -> Result<Vec<(CurvePoint, i64)>> {
    for _ in 0..100 {
        let p = random_ordinary_point(rng, curve, field)?;
        let q = random_ordinary_point(rng, curve, field)?;
        if p.x.residue()? == q.x.residue()? {
            continue;
        }
        let t = chord_third_point(curve, &p, &q)?;
        if t.kind == DiscKind::Infinity {
            continue;
        }
        let r = random_ordinary_point(rng, curve, field)?;
        if r.x.residue()? == t.x.residue()? {
            continue;
        }
        let s = chord_third_point(curve, &t, &r)?;
        if s.kind != DiscKind::Ordinary {
            continue;
        }
        return Ok(vec![(p, 1), (q, 1), (r, -1), (s, -1)]);
    }
    Err(Error::domain("could not build an ordinary chord divisor"))
}

/// The isogeny formula with r = 0 and φ = identity on a real curve: the
/// cycle y - o with trivial coefficients. Returns (aj_fp, ⟨F_ω(y), 1⟩ via the
/// pair representation, aj_divisor).
pub fn isogeny_on_curve(
    curve: &HyperellipticCurve,
    frob: &FrobeniusData,
    y: &CurvePoint,
    o: &CurvePoint,
    form: &[PadicNumber],
) -> Result<(PadicNumber, PadicNumber, PadicNumber)> {
    let pkg = crate::curves::to_geometry_package(curve, frob)?;
    let field = pkg.field.clone();
    let prim = ColemanPrimitive::new(curve, frob, form, o, &[("y", y.clone()), ("o", o.clone())])?;
    let handle = ColemanLiftHandle::Curve(prim);
    let space = fp_cohomology(&pkg, 1, 1)?;
    let cycle = CoefficientCycle::divisor(&field, &[("y", 1), ("o", -1)]);
    let lhs = aj_fp(&pkg, &space, &handle, &cycle)?;
    let poly = cofinal_poly(&pkg, 1)?;
    let pair = pair_representation(curve, frob, form, &poly)?;
    let rhs = pair.primitive(o, y)?.sub(&pair.primitive(o, o)?);
    let div = aj_divisor_from(curve, frob, &[(y.clone(), 1), (o.clone(), -1)], form, o)?;
    Ok((lhs, rhs, div))
}

/// Evaluates a polynomial in x at a point; used for exact-part checks.
pub fn eval_x_poly(a: &[PadicNumber], x: &PadicNumber) -> PadicNumber {
    poly_eval(a, x, x.field())
}
