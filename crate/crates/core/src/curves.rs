//! Odd-degree hyperelliptic curves y² = f(x) over Q_p with good reduction.
//!
//! Frobenius on H¹ is computed with Kedlaya's algorithm on the basis
//! `x^i dx/y`, `0 ≤ i < 2g`. Every reduction step is recorded so that
//! `φ*(x^i dx/y) = d g_i + Σ_j M[j][i] x^j dx/y` is available with `g_i`
//! explicit, which is what Coleman integration needs.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{charpoly, Matrix};
use crate::padic::{binomial_rational, BaseField, PadicNumber, PadicPoly};
use crate::phin::Filtration;
use crate::syntomic::GeometryPackage;

#[derive(Clone, Debug)]
pub struct HyperellipticCurve {
    coeffs: Vec<BigInt>,
    genus: usize,
    field: BaseField,
}

/// Dense polynomial in x with p-adic coefficients, lowest degree first.
pub(crate) type Poly = Vec<PadicNumber>;

fn cap(x: &PadicNumber) -> PadicNumber {
    if x.is_exact_zero() {
        x.clone()
    } else {
        x.to_capped()
    }
}

pub(crate) fn poly_add_into(a: &mut Poly, b: &[PadicNumber], field: &BaseField) {
    if a.len() < b.len() {
        a.resize(b.len(), field.zero());
    }
    for (i, c) in b.iter().enumerate() {
        if !c.is_exact_zero() {
            a[i] = a[i].add(c);
        }
    }
}

pub(crate) fn poly_scale(a: &[PadicNumber], c: &PadicNumber) -> Poly {
    a.iter().map(|x| x.mul(c)).collect()
}

pub(crate) fn poly_mul(a: &[PadicNumber], b: &[PadicNumber], field: &BaseField) -> Poly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![field.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_exact_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_exact_zero() {
                out[i + j] = out[i + j].add(&x.mul(y));
            }
        }
    }
    out
}

pub(crate) fn poly_derivative(a: &[PadicNumber]) -> Poly {
    a.iter().enumerate().skip(1).map(|(i, c)| c.scale_int(i as i64)).collect()
}

pub(crate) fn poly_eval(a: &[PadicNumber], x: &PadicNumber, field: &BaseField) -> PadicNumber {
    let mut acc = field.zero();
    for c in a.iter().rev() {
        acc = acc.mul(x).add(c);
    }
    acc
}

/// Division by a monic polynomial.
fn monic_divrem(a: &[PadicNumber], m: &[PadicNumber], field: &BaseField) -> (Poly, Poly) {
    let dm = m.len() - 1;
    if a.len() <= dm {
        return (vec![], a.to_vec());
    }
    let mut r = a.to_vec();
    let mut q = vec![field.zero(); a.len() - dm];
    for k in (dm..a.len()).rev() {
        let c = r[k].clone();
        if c.is_exact_zero() {
            continue;
        }
        q[k - dm] = c.clone();
        for (j, mj) in m.iter().enumerate() {
            if !mj.is_exact_zero() {
                r[k - dm + j] = r[k - dm + j].sub(&c.mul(mj));
            }
        }
    }
    r.truncate(dm);
    (q, r)
}

/// `g = Σ_e V_e(x)/y^e + W(x)·y`, the exact part of a reduced form.
#[derive(Clone, Debug, Default)]
pub struct ExactPart {
    pub inverse_powers: BTreeMap<usize, Poly>,
    pub times_y: Poly,
}

impl ExactPart {
    pub fn eval(&self, x: &PadicNumber, y: &PadicNumber, field: &BaseField) -> Result<PadicNumber> {
        let mut acc = poly_eval(&self.times_y, x, field).mul(y);
        let yinv = y.inv()?;
        for (e, v) in &self.inverse_powers {
            acc = acc.add(&poly_eval(v, x, field).mul(&yinv.pow(*e as u32)));
        }
        Ok(acc)
    }

    pub fn is_zero(&self) -> bool {
        self.times_y.iter().all(|c| c.is_zero_at_precision())
            && self.inverse_powers.values().all(|v| v.iter().all(|c| c.is_zero_at_precision()))
    }
}

/// A form `Σ_m A_m(x) dx / y^(2m+1)`.
#[derive(Clone, Debug, Default)]
pub struct OddForm {
    pub terms: BTreeMap<usize, Poly>,
}

impl OddForm {
    pub fn single(m: usize, a: Poly) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(m, a);
        OddForm { terms }
    }
}

impl HyperellipticCurve {
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn field(&self) -> &BaseField {
        &self.field
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn f_poly(&self, field: &BaseField) -> Poly {
        self.coeffs.iter().map(|c| PadicNumber::exact_big(c.clone(), field)).collect()
    }

    pub fn eval_f(&self, x: &PadicNumber) -> PadicNumber {
        poly_eval(&self.f_poly(x.field()), x, x.field())
    }

    pub fn with_field(&self, field: &BaseField) -> Self {
        HyperellipticCurve { coeffs: self.coeffs.clone(), genus: self.genus, field: field.clone() }
    }

    /// Kedlaya reduction of an odd form to `dg + Σ c_i x^i dx/y`.
    pub fn reduce(&self, form: &OddForm, field: &BaseField) -> Result<(ExactPart, Vec<PadicNumber>)> {
        let f = self.f_poly(field);
        let df = poly_derivative(&f);
        let (_, b) = bezout(&self.coeffs, field)?;
        let two = field.int(2);
        let mut terms = form.terms.clone();
        let mut g = ExactPart::default();
        let top = terms.keys().next_back().copied().unwrap_or(0);
        for m in (1..=top).rev() {
            let Some(am) = terms.remove(&m) else { continue };
            if am.iter().all(|c| c.is_exact_zero()) {
                continue;
            }
            // A = U f + V f' with V = A b mod f and U the exact quotient
            let ab = poly_mul(&am, &b, field);
            let (_, v) = monic_divrem(&ab, &f, field);
            let mut rest = am.clone();
            poly_add_into(&mut rest, &poly_scale(&poly_mul(&v, &df, field), &field.int(-1)), field);
            let (mut u, _) = monic_divrem(&rest, &f, field);
            let k = field.int(2 * m as i64 - 1);
            let coef = two.div(&k)?;
            poly_add_into(&mut u, &poly_scale(&poly_derivative(&v), &coef), field);
            let entry = terms.entry(m - 1).or_default();
            poly_add_into(entry, &u, field);
            let mut gv = g.inverse_powers.remove(&(2 * m - 1)).unwrap_or_default();
            poly_add_into(&mut gv, &poly_scale(&v, &coef.neg()), field);
            g.inverse_powers.insert(2 * m - 1, gv);
        }
        let mut a0 = terms.remove(&0).unwrap_or_default();
        let two_g = 2 * self.genus;
        let mut times_y = vec![field.zero(); a0.len().saturating_sub(two_g)];
        for j in (two_g..a0.len()).rev() {
            let c = a0[j].clone();
            if c.is_exact_zero() {
                continue;
            }
            let k = j - two_g;
            // d(x^k y) = (k x^(k-1) f + x^k f'/2) dx/y, leading coefficient (2k+2g+1)/2
            let lc = field.rational(2 * k as i64 + two_g as i64 + 1, 2);
            let s = c.div(&lc)?;
            times_y[k] = times_y[k].add(&s);
            let mut r = vec![field.zero(); k + f.len()];
            for (i, fi) in f.iter().enumerate() {
                if k > 0 {
                    r[i + k - 1] = r[i + k - 1].add(&fi.scale_int(k as i64));
                }
            }
            let half = field.rational(1, 2);
            for (i, di) in df.iter().enumerate() {
                r[i + k] = r[i + k].add(&di.mul(&half));
            }
            poly_add_into(&mut a0, &poly_scale(&r, &s.neg()), field);
            a0[j] = field.zero();
        }
        g.times_y = times_y;
        a0.resize(two_g.max(a0.len()), field.zero());
        a0.truncate(two_g);
        Ok((g, a0))
    }
}

/// a, b with a f + b f' = 1, exact over Q.
fn bezout(coeffs: &[BigInt], field: &BaseField) -> Result<(Poly, Poly)> {
    let f: Vec<BigRational> = coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect();
    let df: Vec<BigRational> = f.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(i.into())).collect();
    let (g, a, b) = rat_ext_gcd(&f, &df);
    if g.len() != 1 {
        return Err(Error::validation("f has a repeated root"));
    }
    let inv = BigRational::one() / g[0].clone();
    let conv = |v: &[BigRational]| -> Poly { v.iter().map(|c| PadicNumber::exact(c * &inv, field)).collect() };
    Ok((conv(&a), conv(&b)))
}

fn rat_trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn rat_sub_mul(a: &[BigRational], q: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = a.to_vec();
    for (i, x) in q.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if out.len() <= i + j {
                out.resize(i + j + 1, BigRational::zero());
            }
            out[i + j] -= x * y;
        }
    }
    rat_trim(out)
}

fn rat_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = rat_trim(a.to_vec());
    let db = b.len() - 1;
    if r.len() <= db {
        return (vec![], r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let c = r.last().unwrap() / b.last().unwrap();
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= &c * bj;
        }
        q[k] = c;
        r.pop();
        r = rat_trim(r);
    }
    (q, r)
}

/// (g, a, b) with a·x + b·y = g.
fn rat_ext_gcd(x: &[BigRational], y: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>, Vec<BigRational>) {
    let (mut r0, mut r1) = (rat_trim(x.to_vec()), rat_trim(y.to_vec()));
    let (mut s0, mut s1) = (vec![BigRational::one()], vec![]);
    let (mut t0, mut t1) = (vec![], vec![BigRational::one()]);
    while !r1.is_empty() {
        let (q, r) = rat_divrem(&r0, &r1);
        let s2 = rat_sub_mul(&s0, &q, &s1);
        let t2 = rat_sub_mul(&t0, &q, &t1);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    (r0, s0, t0)
}

/// Discriminant of a monic polynomial via the Sylvester resultant with f'.
pub fn discriminant(coeffs: &[BigInt]) -> BigInt {
    let n = coeffs.len() - 1;
    let f: Vec<BigRational> = coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect();
    let df: Vec<BigRational> = f.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(i.into())).collect();
    let size = 2 * n - 1;
    let mut m = vec![vec![BigRational::zero(); size]; size];
    for r in 0..n - 1 {
        for (j, c) in f.iter().rev().enumerate() {
            m[r][r + j] = c.clone();
        }
    }
    for r in 0..n {
        for (j, c) in df.iter().rev().enumerate() {
            m[n - 1 + r][r + j] = c.clone();
        }
    }
    let res = rat_det(m);
    let sign = if (n * (n - 1) / 2) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    (res.to_integer()) * sign
}

fn rat_det(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| !m[r][c].is_zero()) else { return BigRational::zero() };
        if piv != c {
            m.swap(piv, c);
            det = -det;
        }
        det *= m[c][c].clone();
        for r in c + 1..n {
            let factor = &m[r][c] / &m[c][c];
            if factor.is_zero() {
                continue;
            }
            for k in c..n {
                let sub = &factor * &m[c][k];
                m[r][k] -= sub;
            }
        }
    }
    det
}

/// Checks that y² = f(x) is an odd-degree monic model with good reduction at p.
pub fn validate_curve(coeffs: &[i64], field: &BaseField) -> Result<HyperellipticCurve> {
    validate_curve_big(&coeffs.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>(), field)
}

pub fn validate_curve_big(coeffs: &[BigInt], field: &BaseField) -> Result<HyperellipticCurve> {
    let p = field.p();
    if p % 2 == 0 {
        return Err(Error::validation(format!("p = {p} is even")));
    }
    let mut c = coeffs.to_vec();
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    if c.len() < 4 || c.len() % 2 != 0 {
        return Err(Error::validation(format!("f must have odd degree at least 3, got degree {}", c.len() as i64 - 1)));
    }
    if !c.last().unwrap().is_one() {
        return Err(Error::validation("f must be monic"));
    }
    let disc = discriminant(&c);
    if disc.is_zero() {
        return Err(Error::validation("discriminant is zero: the curve is singular"));
    }
    if disc.mod_floor(&BigInt::from(p)).is_zero() {
        return Err(Error::validation(format!("discriminant {disc} is divisible by p = {p}: bad reduction")));
    }
    let genus = (c.len() - 2) / 2;
    Ok(HyperellipticCurve { coeffs: c, genus, field: field.clone() })
}

/// Number of points of the smooth projective model over F_(p^k), k ∈ {1, 2}.
pub fn point_count(coeffs: &[i64], p: u64, k: u32) -> Result<u64> {
    let p = p as i64;
    let fmod: Vec<i64> = coeffs.iter().map(|c| c.rem_euclid(p)).collect();
    match k {
        1 => {
            let mut n = 1u64;
            for x in 0..p {
                let v = eval_mod(&fmod, x, p);
                n += match legendre(v, p) {
                    0 => 1,
                    1 => 2,
                    _ => 0,
                };
            }
            Ok(n)
        }
        2 => {
            let nr = (2..p).find(|&a| legendre(a, p) == -1).unwrap();
            let f2 = Fp2 { p, nr };
            let mut n = 1u64;
            let e = ((p * p - 1) / 2) as u64;
            for a in 0..p {
                for b in 0..p {
                    let mut acc = (0, 0);
                    for c in fmod.iter().rev() {
                        acc = f2.add(f2.mul(acc, (a, b)), (*c, 0));
                    }
                    n += if acc == (0, 0) {
                        1
                    } else if f2.pow(acc, e) == (1, 0) {
                        2
                    } else {
                        0
                    };
                }
            }
            Ok(n)
        }
        _ => Err(Error::domain("point counts are only available over F_p and F_(p^2)")),
    }
}

struct Fp2 {
    p: i64,
    nr: i64,
}

impl Fp2 {
    fn add(&self, a: (i64, i64), b: (i64, i64)) -> (i64, i64) {
        ((a.0 + b.0).rem_euclid(self.p), (a.1 + b.1).rem_euclid(self.p))
    }
    fn mul(&self, a: (i64, i64), b: (i64, i64)) -> (i64, i64) {
        let p = self.p;
        ((a.0 * b.0 + self.nr * (a.1 * b.1 % p)).rem_euclid(p), (a.0 * b.1 + a.1 * b.0).rem_euclid(p))
    }
    fn pow(&self, mut a: (i64, i64), mut e: u64) -> (i64, i64) {
        let mut acc = (1, 0);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }
}

fn eval_mod(f: &[i64], x: i64, p: i64) -> i64 {
    f.iter().rev().fold(0, |acc, c| (acc * x + c).rem_euclid(p))
}

fn legendre(a: i64, p: i64) -> i64 {
    let a = a.rem_euclid(p);
    if a == 0 {
        return 0;
    }
    let mut acc = 1i64;
    let mut b = a;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}

/// Zeta numerator 1 + c_1 T + ... + c_2g T^2g from counts over F_p and F_(p²);
/// exact for g ≤ 2.
pub fn numerator_from_counts(coeffs: &[i64], p: u64) -> Result<Vec<BigInt>> {
    let g = (coeffs.len() - 2) / 2;
    if g > 2 {
        return Err(Error::domain("counting oracle only covers genus at most 2"));
    }
    let pi = p as i64;
    let n1 = point_count(coeffs, p, 1)? as i64;
    let s1 = pi + 1 - n1;
    let mut c = vec![BigInt::one(), BigInt::from(-s1)];
    if g == 2 {
        let n2 = point_count(coeffs, p, 2)? as i64;
        let s2 = pi * pi + 1 - n2;
        c.push(BigInt::from((s1 * s1 - s2) / 2));
    }
    // functional equation c_(2g-k) = p^(g-k) c_k
    let mut full = c.clone();
    for k in (0..g).rev() {
        full.push(&c[k] * BigInt::from(pi).pow((g - k) as u32));
    }
    Ok(full)
}

/// Frobenius on H¹ with the exact parts of each reduction.
#[derive(Clone, Debug)]
pub struct FrobeniusData {
    /// Column i holds the coordinates of φ*(x^i dx/y).
    pub matrix: Matrix,
    pub exact_parts: Vec<ExactPart>,
    pub working_precision: u32,
    pub terms: usize,
}

impl FrobeniusData {
    /// Exact numerator det(1 - MT) with integer coefficients.
    pub fn numerator(&self) -> Result<Vec<BigInt>> {
        let m = &self.matrix;
        let n = m.rows();
        let chi = charpoly(m)?;
        let p = m.field().p();
        let mut out = Vec::with_capacity(n + 1);
        for k in 0..=n {
            // coefficient of T^k in det(1 - MT) is the T^(n-k) coefficient of det(T - M)
            let c = chi.coeff(n - k);
            let g = n / 2;
            let bound = binom(n, k) as f64 * (p as f64).powf(k as f64 / 2.0);
            let need = ((2.0 * bound + 1.0).ln() / (p as f64).ln()).ceil() as i64 + 1;
            let have = c.abs_precision_or(i64::MAX);
            if have < need {
                return Err(Error::precision(
                    format!("coefficient of T^{k} known only to p^{have}; need p^{need} (retry with a higher precision, genus {g})"),
                    have,
                ));
            }
            out.push(c.to_symmetric_integer()?);
        }
        Ok(out)
    }
}

fn binom(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

fn log_p_ceil(x: f64, p: u64) -> u32 {
    (x.ln() / (p as f64).ln()).ceil().max(0.0) as u32
}

/// Working precision used for a target of N digits.
pub fn working_precision(curve: &HyperellipticCurve, target: u32) -> u32 {
    let g = curve.genus as f64;
    target + log_p_ceil(2.0 * target as f64 * (2.0 * g + 1.0), curve.p()) + 4
}

/// Kedlaya's algorithm; retries with doubled guard digits on precision failure.
pub fn frobenius_matrix(curve: &HyperellipticCurve, target: u32) -> Result<FrobeniusData> {
    let mut wp = working_precision(curve, target);
    let mut last = None;
    for _ in 0..3 {
        match frobenius_at(curve, wp, wp, target) {
            Ok(d) => return Ok(d),
            Err(e @ Error::Precision { .. }) => {
                last = Some(e);
                wp += wp - target;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap())
}

/// One run of Kedlaya's algorithm: `wp` fixes the series truncation,
/// `rel` the relative precision of the arithmetic.
pub fn frobenius_at(curve: &HyperellipticCurve, wp: u32, rel: u32, target: u32) -> Result<FrobeniusData> {
    let p = curve.p();
    let field = curve.field.with_precision(rel)?;
    let g2 = 2 * curve.genus;
    let deg_f = curve.coeffs.len() - 1;
    // E = f(x^p) - f(x)^p, exactly, then capped
    let fz: Vec<BigInt> = curve.coeffs.clone();
    let mut fxp = vec![BigInt::zero(); deg_f * p as usize + 1];
    for (i, c) in fz.iter().enumerate() {
        fxp[i * p as usize] = c.clone();
    }
    let mut fpow = vec![BigInt::one()];
    for _ in 0..p {
        let mut next = vec![BigInt::zero(); fpow.len() + deg_f];
        for (i, a) in fpow.iter().enumerate() {
            for (j, b) in fz.iter().enumerate() {
                next[i + j] += a * b;
            }
        }
        fpow = next;
    }
    let e: Poly = fxp.iter().zip(fpow.iter()).map(|(a, b)| cap(&PadicNumber::exact_big(a - b, &field))).collect();
    // number of series terms: term k has valuation >= k+1 before reduction losses
    let mut terms = 1usize;
    while (terms as i64 + 1) - log_p_ceil((p * (2 * terms as u64 + 1) * 4) as f64, p) as i64 - 1 < wp as i64 {
        terms += 1;
    }
    let mut epow: Vec<Poly> = vec![vec![field.one()]];
    for k in 1..=terms {
        let next = poly_mul(&epow[k - 1], &e, &field);
        epow.push(next);
    }
    let pnum = field.int(p as i64);
    let mut cols = Vec::with_capacity(g2);
    let mut exact_parts = Vec::with_capacity(g2);
    for i in 0..g2 {
        let mut form = OddForm::default();
        let shift = p as usize * i + p as usize - 1;
        for (k, ek) in epow.iter().enumerate() {
            let c = cap(&PadicNumber::exact(binomial_rational(&BigRational::new((-1).into(), 2.into()), k), &field)).mul(&pnum);
            let mut a = vec![field.zero(); shift];
            a.extend(ek.iter().map(|x| x.mul(&c)));
            let m = (p as usize * (2 * k + 1) - 1) / 2;
            form.terms.insert(m, a);
        }
        let (g, coeffs) = curve.reduce(&form, &field)?;
        cols.push(coeffs);
        exact_parts.push(g);
    }
    // dropped series terms are O(p^wp) after reduction, so no entry is known beyond that
    let matrix = Matrix::from_columns(g2, &cols, &field).map(|x| x.truncate_abs(wp as i64));
    let have = matrix.min_abs_precision().unwrap_or(i64::MAX);
    if have < target as i64 {
        return Err(Error::precision(format!("Frobenius matrix known only to p^{have}"), have));
    }
    Ok(FrobeniusData { matrix, exact_parts, working_precision: wp, terms })
}

/// Zeta numerator det(1 - MT) through Kedlaya's algorithm.
pub fn zeta(curve: &HyperellipticCurve, target: u32) -> Result<Vec<BigInt>> {
    frobenius_matrix(curve, target)?.numerator()
}

/// Renders an integer polynomial as "1 - 2*T + 5*T^2".
pub fn render_integer_poly(c: &[BigInt]) -> String {
    let mut out = String::new();
    for (k, a) in c.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let mag = a.abs();
        let body = match (k, mag.is_one()) {
            (0, _) => mag.to_string(),
            (1, true) => "T".to_string(),
            (1, false) => format!("{mag}*T"),
            (_, true) => format!("T^{k}"),
            (_, false) => format!("{mag}*T^{k}"),
        };
        if out.is_empty() {
            if a.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if a.is_negative() { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

/// Laurent series in the parameter t at infinity, `x = t^(-2)`, with `y`
/// determined by `y = t^(-(2g+1)) (1 + ...)`. Entries: (lowest exponent, coefficients).
struct Laurent {
    lo: i64,
    c: Vec<BigRational>,
}

impl Laurent {
    fn coeff(&self, e: i64) -> BigRational {
        let k = e - self.lo;
        if k < 0 || k as usize >= self.c.len() {
            BigRational::zero()
        } else {
            self.c[k as usize].clone()
        }
    }

    fn mul(&self, o: &Laurent, hi: i64) -> Laurent {
        let lo = self.lo + o.lo;
        let n = (hi - lo + 1).max(0) as usize;
        let mut c = vec![BigRational::zero(); n];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                if i + j < n {
                    c[i + j] += a * b;
                }
            }
        }
        Laurent { lo, c }
    }
}

/// ⟨ω_i, ω_j⟩ = Res_∞(F_(ω_i) ω_j) on the basis x^i dx/y.
pub fn cup_matrix(curve: &HyperellipticCurve) -> Matrix {
    let g = curve.genus as i64;
    let n = 2 * curve.genus;
    let field = &curve.field;
    let d = 2 * g + 1;
    // 1/y = t^d (1 + a_1 t^2 + ... + a_d t^(2d))^(-1/2) with f(t^-2) t^(2d) = Σ f_k t^(2(d-k))
    let depth = (4 * g + 4) as usize;
    let mut u = vec![BigRational::zero(); depth + 1];
    for (k, fk) in curve.coeffs.iter().enumerate() {
        let e = 2 * (d as usize - k);
        if e <= depth && e > 0 {
            u[e] = BigRational::from_integer(fk.clone());
        }
    }
    // (1 + u)^(-1/2) truncated at t^depth
    let half = BigRational::new((-1).into(), 2.into());
    let mut series = vec![BigRational::zero(); depth + 1];
    series[0] = BigRational::one();
    let mut upow = series.clone();
    for k in 1..=depth {
        let mut next = vec![BigRational::zero(); depth + 1];
        for (i, a) in upow.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in u.iter().enumerate() {
                if i + j <= depth {
                    next[i + j] += a * b;
                }
            }
        }
        upow = next;
        let c = binomial_rational(&half, k);
        for i in 0..=depth {
            series[i] += &c * &upow[i];
        }
    }
    let inv_y = Laurent { lo: d, c: series };
    // dx = -2 t^(-3) dt, so ω_i = x^i dx/y = -2 t^(-2i-3) (1/y) dt
    let forms: Vec<Laurent> = (0..n as i64)
        .map(|i| {
            let x_pow = Laurent { lo: -2 * i - 3, c: vec![BigRational::from_integer((-2).into())] };
            x_pow.mul(&inv_y, 2)
        })
        .collect();
    let prims: Vec<Laurent> = forms
        .iter()
        .map(|w| {
            let mut c = Vec::new();
            let lo = w.lo + 1;
            for (k, a) in w.c.iter().enumerate() {
                let e = w.lo + k as i64;
                c.push(if e == -1 {
                    assert!(a.is_zero(), "basis forms have no residue at infinity");
                    BigRational::zero()
                } else {
                    a / BigRational::from_integer((e + 1).into())
                });
            }
            Laurent { lo, c }
        })
        .collect();
    Matrix::from_fn(n, n, field, |i, j| {
        let prod = prims[i].mul(&forms[j], 0);
        PadicNumber::exact(prod.coeff(-1), field)
    })
}

/// The curve as a split geometry package in degrees 0, 1, 2.
pub fn to_geometry_package(curve: &HyperellipticCurve, frob: &FrobeniusData) -> Result<GeometryPackage> {
    let field = curve.field.clone();
    let g = curve.genus;
    let n = 2 * g;
    let m = frob.matrix.in_field(&field);
    let p = field.int(field.p() as i64);
    let hol = crate::linalg::Subspace::from_independent(Matrix::from_fn(n, g, &field, |i, j| {
        if i == j {
            field.one()
        } else {
            field.zero()
        }
    }));
    let fil = vec![
        Filtration::concentrated(1, 0, &field),
        Filtration::new(n, vec![(0, crate::linalg::Subspace::whole(n, &field)), (1, hol)], &field)?,
        Filtration::concentrated(1, 1, &field),
    ];
    let mut pkg = GeometryPackage::split(
        "curve",
        &field,
        1,
        0,
        vec![Matrix::identity(1, &field), m, Matrix::scalar(1, &p)],
        None,
        fil,
    )?;
    let num = frob.numerator()?;
    // det(T - M) = Σ c_k T^(n-k)
    let chi = PadicPoly::new((0..=n).map(|k| PadicNumber::exact_big(num[n - k].clone(), &field)).collect(), &field);
    pkg.certificates[1] = Some(chi);
    let cup = cup_matrix(curve);
    Ok(pkg.with_pairing(vec![Matrix::identity(1, &field), cup, Matrix::identity(1, &field)], p))
}

/// Largest absolute value of an integer vector, as f64; used by Weil checks.
pub fn max_abs(c: &[BigInt]) -> f64 {
    c.iter().map(|x| x.abs().to_f64().unwrap_or(f64::INFINITY)).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(p: u64) -> BaseField {
        BaseField::new(p, 10).unwrap()
    }

    #[test]
    fn validation_examples() {
        assert!(validate_curve(&[0, 1, 0, 1], &field(5)).is_ok());
        assert!(BaseField::new(2, 10).is_err() || validate_curve(&[0, 1, 0, 1], &BaseField::new(2, 10).unwrap()).is_err());
        assert!(matches!(validate_curve(&[2, -3, 0, 1], &field(5)), Err(Error::Validation(_))));
        assert_eq!(discriminant(&[0, 1, 0, 1].map(BigInt::from)), BigInt::from(-4));
    }

    #[test]
    fn counts() {
        assert_eq!(point_count(&[0, 1, 0, 1], 5, 1).unwrap(), 4);
        assert_eq!(point_count(&[0, 1, 0, 1], 7, 1).unwrap(), 8);
    }

    #[test]
    fn reduce_exact_forms() {
        let f = field(5);
        let c = validate_curve(&[1, 2, 0, 1], &f).unwrap();
        // d(x^2 y) = (2x f + x^2 f'/2) dx/y
        let fp = c.f_poly(&f);
        let mut a = poly_mul(&[f.zero(), f.int(2)], &fp, &f);
        poly_add_into(&mut a, &poly_mul(&[f.zero(), f.zero(), f.rational(1, 2)], &poly_derivative(&fp), &f), &f);
        let (g, coeffs) = c.reduce(&OddForm::single(0, a), &f).unwrap();
        assert!(coeffs.iter().all(|x| x.is_exact_zero()));
        assert!(g.times_y[2].eq_at_precision(&f.one()));
        // basis forms reduce to themselves
        let (g, coeffs) = c.reduce(&OddForm::single(0, vec![f.zero(), f.one()]), &f).unwrap();
        assert!(g.is_zero());
        assert!(coeffs[1].eq_at_precision(&f.one()) && coeffs[0].is_exact_zero());
    }

    #[test]
    fn elliptic_cup_matrix() {
        let c = validate_curve(&[0, 1, 0, 1], &field(5)).unwrap();
        let m = cup_matrix(&c);
        assert!(m.get(0, 1).eq_at_precision(&c.field.int(4)));
        assert!(m.get(1, 0).eq_at_precision(&c.field.int(-4)));
        assert!(m.get(0, 0).is_exact_zero());
    }

    #[test]
    fn kedlaya_small_elliptic() {
        let c = validate_curve(&[0, 1, 0, 1], &field(5)).unwrap();
        let z = zeta(&c, 6).unwrap();
        assert_eq!(render_integer_poly(&z), "1 - 2*T + 5*T^2");
    }
}
