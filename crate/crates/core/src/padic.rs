//! Capped-relative-precision arithmetic in Q_p, polynomials over Q_p and
//! truncated power series.
//!
//! A [`PadicNumber`] is either an exact rational or a capped value
//! `p^v * u + O(p^(v+r))`. Exact values stay exact under arithmetic with
//! other exact values; as soon as a capped operand is involved the exact one
//! is read at the field's default relative precision.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

struct FieldInner {
    p: u64,
    precision: u32,
    p_big: BigInt,
    powers: Vec<BigInt>,
}

/// The base field Q_p together with a default precision N.
#[derive(Clone)]
pub struct BaseField {
    inner: Arc<FieldInner>,
}

impl fmt::Debug for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q_{}(N={})", self.p(), self.precision())
    }
}

impl PartialEq for BaseField {
    fn eq(&self, other: &Self) -> bool {
        self.p() == other.p() && self.precision() == other.precision()
    }
}

impl Eq for BaseField {}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl BaseField {
    pub fn new(p: u64, precision: u32) -> Result<Self> {
        if !is_prime(p) || p < 3 {
            return Err(Error::domain(format!("p = {p} must be an odd prime")));
        }
        if precision < 1 {
            return Err(Error::domain(format!("precision {precision} must be positive")));
        }
        let p_big = BigInt::from(p);
        let mut powers = Vec::with_capacity(2 * precision as usize + 2);
        let mut acc = BigInt::one();
        for _ in 0..=(2 * precision + 1) {
            powers.push(acc.clone());
            acc *= &p_big;
        }
        Ok(BaseField { inner: Arc::new(FieldInner { p, precision, p_big, powers }) })
    }

    pub fn p(&self) -> u64 {
        self.inner.p
    }

    /// q = p (unramified degree one base).
    pub fn q(&self) -> u64 {
        self.inner.p
    }

    pub fn p_big(&self) -> &BigInt {
        &self.inner.p_big
    }

    pub fn precision(&self) -> u32 {
        self.inner.precision
    }

    /// Same prime, different default precision.
    pub fn with_precision(&self, precision: u32) -> Result<Self> {
        BaseField::new(self.p(), precision)
    }

    /// p^k as a big integer.
    pub fn pow(&self, k: u32) -> BigInt {
        match self.inner.powers.get(k as usize) {
            Some(v) => v.clone(),
            None => num_traits::pow(self.inner.p_big.clone(), k as usize),
        }
    }

    fn pow_ref(&self, k: u32) -> std::borrow::Cow<'_, BigInt> {
        match self.inner.powers.get(k as usize) {
            Some(v) => std::borrow::Cow::Borrowed(v),
            None => std::borrow::Cow::Owned(num_traits::pow(self.inner.p_big.clone(), k as usize)),
        }
    }

    /// Splits a nonzero integer as p^v * m with p not dividing m.
    pub fn split_int(&self, n: &BigInt) -> (i64, BigInt) {
        debug_assert!(!n.is_zero());
        let mut v = 0i64;
        let mut m = n.clone();
        loop {
            let (q, r) = m.div_rem(&self.inner.p_big);
            if !r.is_zero() {
                break;
            }
            m = q;
            v += 1;
        }
        (v, m)
    }

    pub fn zero(&self) -> PadicNumber {
        PadicNumber::exact_int(0, self)
    }

    pub fn one(&self) -> PadicNumber {
        PadicNumber::exact_int(1, self)
    }

    pub fn int(&self, n: i64) -> PadicNumber {
        PadicNumber::exact_int(n, self)
    }

    pub fn rational(&self, num: i64, den: i64) -> PadicNumber {
        PadicNumber::exact(BigRational::new(num.into(), den.into()), self)
    }
}

#[derive(Clone, Debug)]
enum Repr {
    Exact(BigRational),
    Capped { val: i64, unit: BigInt, rel: u32 },
}

/// An element of Q_p with capped relative precision, or an exact rational.
#[derive(Clone)]
pub struct PadicNumber {
    field: BaseField,
    repr: Repr,
}

fn modinv(a: &BigInt, m: &BigInt) -> BigInt {
    let g = a.extended_gcd(m);
    debug_assert!(g.gcd.is_one());
    g.x.mod_floor(m)
}

impl PadicNumber {
    pub fn exact(value: BigRational, field: &BaseField) -> Self {
        PadicNumber { field: field.clone(), repr: Repr::Exact(value) }
    }

    pub fn exact_int(n: i64, field: &BaseField) -> Self {
        Self::exact(BigRational::from_integer(n.into()), field)
    }

    pub fn exact_big(n: BigInt, field: &BaseField) -> Self {
        Self::exact(BigRational::from_integer(n), field)
    }

    /// `p^val * unit + O(p^(val+rel))`, normalizing the unit and capping `rel`.
    pub fn capped(val: i64, unit: BigInt, rel: u32, field: &BaseField) -> Self {
        let rel = rel.min(field.precision());
        if rel == 0 {
            return Self::big_o(val, field);
        }
        let m = field.pow(rel);
        let u = unit.mod_floor(&m);
        if u.is_zero() {
            return Self::big_o(val + rel as i64, field);
        }
        let (k, w) = field.split_int(&u);
        if k >= rel as i64 {
            return Self::big_o(val + rel as i64, field);
        }
        let rel2 = rel - k as u32;
        let w = w.mod_floor(&field.pow(rel2));
        PadicNumber { field: field.clone(), repr: Repr::Capped { val: val + k, unit: w, rel: rel2 } }
    }

    /// The indistinguishable-from-zero value O(p^abs).
    pub fn big_o(abs: i64, field: &BaseField) -> Self {
        PadicNumber { field: field.clone(), repr: Repr::Capped { val: abs, unit: BigInt::zero(), rel: 0 } }
    }

    /// An integer known modulo p^abs.
    pub fn from_int_mod(n: &BigInt, abs: i64, field: &BaseField) -> Self {
        if abs <= 0 {
            return Self::big_o(abs, field);
        }
        let m = n.mod_floor(&field.pow(abs as u32));
        if m.is_zero() {
            return Self::big_o(abs, field);
        }
        let (v, u) = field.split_int(&m);
        Self::capped(v, u, (abs - v) as u32, field)
    }

    pub fn field(&self) -> &BaseField {
        &self.field
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.repr, Repr::Exact(_))
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(&self.repr, Repr::Exact(r) if r.is_zero())
    }

    /// Exact zero or O(p^k).
    pub fn is_zero_at_precision(&self) -> bool {
        match &self.repr {
            Repr::Exact(r) => r.is_zero(),
            Repr::Capped { rel, .. } => *rel == 0,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.repr {
            Repr::Exact(r) => Some(r),
            _ => None,
        }
    }

    fn exact_parts(&self, r: &BigRational) -> (i64, BigInt, BigInt) {
        let (vn, un) = self.field.split_int(r.numer());
        let (vd, ud) = self.field.split_int(r.denom());
        (vn - vd, un, ud)
    }

    /// Valuation; `None` for the exact zero. For O(p^k) this is k.
    pub fn valuation(&self) -> Option<i64> {
        match &self.repr {
            Repr::Exact(r) if r.is_zero() => None,
            Repr::Exact(r) => Some(self.exact_parts(r).0),
            Repr::Capped { val, .. } => Some(*val),
        }
    }

    /// Relative precision; exact values report the field default.
    pub fn relative_precision(&self) -> u32 {
        match &self.repr {
            Repr::Exact(_) => self.field.precision(),
            Repr::Capped { rel, .. } => *rel,
        }
    }

    /// Absolute precision v + r; `None` for exact values.
    pub fn abs_precision(&self) -> Option<i64> {
        match &self.repr {
            Repr::Exact(_) => None,
            Repr::Capped { val, rel, .. } => Some(val + *rel as i64),
        }
    }

    /// Absolute precision with exact values counted as infinitely precise.
    pub fn abs_precision_or(&self, cap: i64) -> i64 {
        self.abs_precision().unwrap_or(cap)
    }

    /// The unit part, reduced modulo p^r.
    pub fn unit(&self) -> BigInt {
        match &self.repr {
            Repr::Exact(r) if r.is_zero() => BigInt::zero(),
            Repr::Exact(r) => {
                let (_, un, ud) = self.exact_parts(r);
                let m = self.field.pow(self.field.precision());
                (un * modinv(&ud, &m)).mod_floor(&m)
            }
            Repr::Capped { unit, .. } => unit.clone(),
        }
    }

    /// Capped view with the given relative precision (exact zero stays exact).
    fn capped_parts(&self, rel_cap: u32) -> Option<(i64, BigInt, u32)> {
        match &self.repr {
            Repr::Exact(r) if r.is_zero() => None,
            Repr::Exact(r) => {
                let (v, un, ud) = self.exact_parts(r);
                let m = self.field.pow(rel_cap);
                Some((v, (un * modinv(&ud, &m)).mod_floor(&m), rel_cap))
            }
            Repr::Capped { val, unit, rel } => Some((*val, unit.clone(), *rel)),
        }
    }

    /// Forgets exactness, keeping the field's default relative precision.
    pub fn to_capped(&self) -> Self {
        match self.capped_parts(self.field.precision()) {
            None => Self::big_o(self.field.precision() as i64, &self.field),
            Some((v, u, r)) => PadicNumber { field: self.field.clone(), repr: Repr::Capped { val: v, unit: u, rel: r } },
        }
    }

    /// Reinterprets the number in another field with the same prime.
    pub fn in_field(&self, field: &BaseField) -> Self {
        assert_eq!(self.field.p(), field.p(), "prime mismatch");
        match &self.repr {
            Repr::Exact(r) => Self::exact(r.clone(), field),
            Repr::Capped { val, unit, rel } => Self::capped(*val, unit.clone(), *rel, field),
        }
    }

    /// Reduces the absolute precision to at most `abs`.
    pub fn truncate_abs(&self, abs: i64) -> Self {
        match self.capped_parts(self.field.precision()) {
            None => Self::big_o(abs, &self.field),
            Some((v, u, r)) => {
                let cur = v + r as i64;
                if cur <= abs && !self.is_exact() {
                    return self.clone();
                }
                if abs <= v {
                    return Self::big_o(abs, &self.field);
                }
                Self::capped(v, u, (abs - v) as u32, &self.field)
            }
        }
    }

    /// Representative rational p^v * u (exact values returned as is).
    pub fn to_rational(&self) -> BigRational {
        match &self.repr {
            Repr::Exact(r) => r.clone(),
            Repr::Capped { val, unit, .. } => {
                let p = self.field.p_big().clone();
                if *val >= 0 {
                    BigRational::from_integer(unit * num_traits::pow(p, *val as usize))
                } else {
                    BigRational::new(unit.clone(), num_traits::pow(p, (-*val) as usize))
                }
            }
        }
    }

    /// Integer representative in the symmetric range (-p^a/2, p^a/2], where a
    /// is the absolute precision; exact integers returned as is.
    pub fn to_symmetric_integer(&self) -> Result<BigInt> {
        match &self.repr {
            Repr::Exact(r) => {
                if r.is_integer() {
                    Ok(r.to_integer())
                } else {
                    Err(Error::domain(format!("{r} is not an integer")))
                }
            }
            Repr::Capped { val, unit, rel } => {
                let abs = val + *rel as i64;
                if *val < 0 {
                    return Err(Error::precision("negative valuation, not an integer", abs));
                }
                let m = self.field.pow(abs as u32);
                let n = (unit * self.field.pow(*val as u32)).mod_floor(&m);
                let half = &m / 2;
                Ok(if n > half { n - m } else { n })
            }
        }
    }

    /// Residue modulo p of a p-adic integer.
    pub fn residue(&self) -> Result<u64> {
        match self.valuation() {
            None => Ok(0),
            Some(v) if v > 0 => Ok(0),
            Some(v) if v < 0 => Err(Error::domain("negative valuation has no residue")),
            Some(_) => {
                if self.relative_precision() == 0 {
                    return Err(Error::precision("residue undetermined", 0));
                }
                Ok((self.unit() % self.field.p_big()).to_u64().unwrap())
            }
        }
    }

    pub fn neg(&self) -> Self {
        match &self.repr {
            Repr::Exact(r) => Self::exact(-r, &self.field),
            Repr::Capped { val, unit, rel } => {
                if *rel == 0 {
                    return self.clone();
                }
                let m = self.field.pow(*rel);
                PadicNumber {
                    field: self.field.clone(),
                    repr: Repr::Capped { val: *val, unit: (&m - unit).mod_floor(&m), rel: *rel },
                }
            }
        }
    }

    fn cap(&self) -> u32 {
        self.field.precision()
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.field.p(), other.field.p());
        if let (Repr::Exact(a), Repr::Exact(b)) = (&self.repr, &other.repr) {
            return Self::exact(a + b, &self.field);
        }
        if self.is_exact_zero() {
            return other.in_field_if_needed(&self.field);
        }
        if other.is_exact_zero() {
            return self.clone();
        }
        let cap = self.cap();
        let (va, ua, ra) = self.capped_parts(cap).unwrap();
        let (vb, ub, rb) = other.capped_parts(cap).unwrap();
        let abs = (va + ra as i64).min(vb + rb as i64);
        let v = va.min(vb);
        if abs <= v {
            return Self::big_o(abs, &self.field);
        }
        let m = (abs - v) as u32;
        let modulus = self.field.pow_ref(m);
        let mut s = BigInt::zero();
        for (vx, ux) in [(va, &ua), (vb, &ub)] {
            let shift = (vx - v) as u32;
            if shift < m && !ux.is_zero() {
                s += ux * self.field.pow_ref(shift).as_ref();
            }
        }
        let s = s.mod_floor(modulus.as_ref());
        if s.is_zero() {
            return Self::big_o(abs, &self.field);
        }
        let (k, w) = self.field.split_int(&s);
        Self::capped(v + k, w, m - k as u32, &self.field)
    }

    fn in_field_if_needed(&self, field: &BaseField) -> Self {
        if self.field == *field {
            self.clone()
        } else {
            self.in_field(field)
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if let (Repr::Exact(a), Repr::Exact(b)) = (&self.repr, &other.repr) {
            return Self::exact(a * b, &self.field);
        }
        if self.is_exact_zero() || other.is_exact_zero() {
            return self.field.zero();
        }
        let cap = self.cap();
        let (va, ua, ra) = self.capped_parts(cap).unwrap();
        let (vb, ub, rb) = other.capped_parts(cap).unwrap();
        let rel = ra.min(rb);
        if rel == 0 {
            return Self::big_o(va + vb, &self.field);
        }
        let m = self.field.pow_ref(rel);
        let u = (ua * ub).mod_floor(m.as_ref());
        PadicNumber { field: self.field.clone(), repr: Repr::Capped { val: va + vb, unit: u, rel } }
    }

    /// Division; fails when the divisor is zero or indistinguishable from zero.
    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_exact_zero() {
            return Err(Error::precision("division by exact zero", i64::MAX));
        }
        if other.relative_precision() == 0 {
            return Err(Error::precision("division by a value indistinguishable from zero", other.valuation().unwrap()));
        }
        if let (Repr::Exact(a), Repr::Exact(b)) = (&self.repr, &other.repr) {
            return Ok(Self::exact(a / b, &self.field));
        }
        if self.is_exact_zero() {
            return Ok(self.field.zero());
        }
        let cap = self.cap();
        let (va, ua, ra) = self.capped_parts(cap).unwrap();
        let (vb, ub, rb) = other.capped_parts(cap).unwrap();
        let rel = ra.min(rb);
        if rel == 0 {
            return Ok(Self::big_o(va - vb, &self.field));
        }
        let m = self.field.pow(rel);
        let u = (ua * modinv(&ub, &m)).mod_floor(&m);
        Ok(PadicNumber { field: self.field.clone(), repr: Repr::Capped { val: va - vb, unit: u, rel } })
    }

    pub fn inv(&self) -> Result<Self> {
        self.field.one().div(self)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = self.field.one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiplication by p^k (k may be negative); exact on both representations.
    pub fn shift(&self, k: i64) -> Self {
        match &self.repr {
            Repr::Exact(r) => {
                let p = self.field.p_big().clone();
                let f = if k >= 0 {
                    BigRational::from_integer(num_traits::pow(p, k as usize))
                } else {
                    BigRational::new(BigInt::one(), num_traits::pow(p, (-k) as usize))
                };
                Self::exact(r * f, &self.field)
            }
            Repr::Capped { val, unit, rel } => {
                PadicNumber { field: self.field.clone(), repr: Repr::Capped { val: val + k, unit: unit.clone(), rel: *rel } }
            }
        }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.mul(&self.field.int(n))
    }

    /// True when `self - other` is zero at the available precision.
    pub fn eq_at_precision(&self, other: &Self) -> bool {
        self.sub(other).is_zero_at_precision()
    }

    /// True when `self - other` has valuation at least `abs`.
    pub fn agrees_to(&self, other: &Self, abs: i64) -> bool {
        let d = self.sub(other);
        d.valuation().map_or(true, |v| v >= abs)
    }

    /// Text rendering: exact values as `a/b`, capped values as
    /// `p^v * u + O(p^m)`.
    pub fn render(&self, compact: bool) -> String {
        let sep = if compact { ("*", "+") } else { (" * ", " + ") };
        let p = self.field.p();
        match &self.repr {
            Repr::Exact(r) => {
                if r.is_integer() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Repr::Capped { val, unit, rel } => {
                if *rel == 0 {
                    format!("O({p}^{val})")
                } else {
                    format!("{p}^{val}{}{unit}{}O({p}^{})", sep.0, sep.1, val + *rel as i64)
                }
            }
        }
    }

    /// Parses `a`, `a/b`, `O(p^m)` or `p^v*u+O(p^m)` (spaces ignored).
    pub fn parse(text: &str, field: &BaseField) -> Result<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse { path: String::new(), msg: format!("malformed scalar {text:?}") };
        let parse_pow = |t: &str| -> Result<i64> {
            let (base, e) = t.split_once('^').ok_or_else(bad)?;
            if base.parse::<u64>().map_err(|_| bad())? != field.p() {
                return Err(Error::Parse { path: String::new(), msg: format!("prime mismatch in {text:?}") });
            }
            e.trim_start_matches('{').trim_end_matches('}').parse::<i64>().map_err(|_| bad())
        };
        if let Some(rest) = s.strip_prefix("O(") {
            let inner = rest.strip_suffix(')').ok_or_else(bad)?;
            return Ok(Self::big_o(parse_pow(inner)?, field));
        }
        if let Some((head, tail)) = s.split_once("+O(") {
            let m = parse_pow(tail.strip_suffix(')').ok_or_else(bad)?)?;
            let (pv, u) = head.split_once('*').ok_or_else(bad)?;
            let v = parse_pow(pv)?;
            let u: BigInt = u.parse().map_err(|_| bad())?;
            if m < v {
                return Err(bad());
            }
            let x = Self::capped(v, u.clone(), (m - v) as u32, field);
            if u.is_zero() || u.is_negative() || (&u % field.p_big()).is_zero() || (m - v) as u32 > field.precision() {
                return Err(Error::Parse { path: String::new(), msg: format!("non-canonical capped scalar {text:?}") });
            }
            return Ok(x);
        }
        let r = if let Some((a, b)) = s.split_once('/') {
            let a: BigInt = a.parse().map_err(|_| bad())?;
            let b: BigInt = b.parse().map_err(|_| bad())?;
            if b.is_zero() {
                return Err(Error::domain("zero denominator"));
            }
            BigRational::new(a, b)
        } else {
            BigRational::from_integer(s.parse::<BigInt>().map_err(|_| bad())?)
        };
        Ok(Self::exact(r, field))
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(false))
    }
}

impl fmt::Debug for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(false))
    }
}

/// `numerator / denominator` in Q_p, kept exact.
pub fn make_padic(numerator: &BigInt, denominator: &BigInt, field: &BaseField) -> Result<PadicNumber> {
    if denominator.is_zero() {
        return Err(Error::domain("zero denominator"));
    }
    Ok(PadicNumber::exact(BigRational::new(numerator.clone(), denominator.clone()), field))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn arith(a: &PadicNumber, b: &PadicNumber, op: ArithOp) -> Result<PadicNumber> {
    match op {
        ArithOp::Add => Ok(a.add(b)),
        ArithOp::Sub => Ok(a.sub(b)),
        ArithOp::Mul => Ok(a.mul(b)),
        ArithOp::Div => a.div(b),
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl std::ops::$tr<&PadicNumber> for &PadicNumber {
            type Output = PadicNumber;
            fn $m(self, rhs: &PadicNumber) -> PadicNumber {
                PadicNumber::$m(self, rhs)
            }
        }
        impl std::ops::$tr<PadicNumber> for PadicNumber {
            type Output = PadicNumber;
            fn $m(self, rhs: PadicNumber) -> PadicNumber {
                PadicNumber::$m(&self, &rhs)
            }
        }
        impl std::ops::$tr<&PadicNumber> for PadicNumber {
            type Output = PadicNumber;
            fn $m(self, rhs: &PadicNumber) -> PadicNumber {
                PadicNumber::$m(&self, rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl std::ops::Neg for &PadicNumber {
    type Output = PadicNumber;
    fn neg(self) -> PadicNumber {
        PadicNumber::neg(self)
    }
}

impl std::ops::Neg for PadicNumber {
    type Output = PadicNumber;
    fn neg(self) -> PadicNumber {
        PadicNumber::neg(&self)
    }
}

/// Binomial coefficient C(a, k) for rational a.
pub fn binomial_rational(a: &BigRational, k: usize) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..k {
        acc = acc * (a - BigRational::from_integer(BigInt::from(i))) / BigRational::from_integer(BigInt::from(i + 1));
    }
    acc
}

/// Polynomial in T over Q_p, lowest degree first.
#[derive(Clone)]
pub struct PadicPoly {
    coeffs: Vec<PadicNumber>,
    field: BaseField,
}

impl fmt::Debug for PadicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl PadicPoly {
    pub fn new(mut coeffs: Vec<PadicNumber>, field: &BaseField) -> Self {
        while coeffs.last().is_some_and(|c| c.is_exact_zero()) {
            coeffs.pop();
        }
        PadicPoly { coeffs, field: field.clone() }
    }

    pub fn zero(field: &BaseField) -> Self {
        Self::new(Vec::new(), field)
    }

    pub fn one(field: &BaseField) -> Self {
        Self::new(vec![field.one()], field)
    }

    pub fn from_ints(c: &[i64], field: &BaseField) -> Self {
        Self::new(c.iter().map(|&x| field.int(x)).collect(), field)
    }

    pub fn from_rationals(c: &[BigRational], field: &BaseField) -> Self {
        Self::new(c.iter().map(|x| PadicNumber::exact(x.clone(), field)).collect(), field)
    }

    /// Monomial c * T^k.
    pub fn monomial(c: PadicNumber, k: usize, field: &BaseField) -> Self {
        let mut v = vec![field.zero(); k];
        v.push(c);
        Self::new(v, field)
    }

    pub fn field(&self) -> &BaseField {
        &self.field
    }

    pub fn coeffs(&self) -> &[PadicNumber] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> PadicNumber {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_exact())
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect(), &self.field)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i).sub(&other.coeff(i))).collect(), &self.field)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.neg()).collect(), &self.field)
    }

    pub fn scale(&self, c: &PadicNumber) -> Self {
        Self::new(self.coeffs.iter().map(|x| x.mul(c)).collect(), &self.field)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero(&self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_exact_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_exact_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::new(out, &self.field)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.field);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &PadicNumber) -> PadicNumber {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c.scale_int(i as i64)).collect(),
            &self.field,
        )
    }

    /// P(c * T).
    pub fn rescale(&self, c: &PadicNumber) -> Self {
        let mut f = self.field.one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a.mul(&f));
            f = f.mul(c);
        }
        Self::new(out, &self.field)
    }

    /// P(Q(T)).
    pub fn compose(&self, q: &Self) -> Self {
        let mut acc = Self::zero(&self.field);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(q).add(&Self::new(vec![c.clone()], &self.field));
        }
        acc
    }

    /// Euclidean division by a divisor whose leading coefficient is invertible.
    pub fn divrem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or_else(|| Error::domain("polynomial division by zero"))?;
        let lead_inv = d.coeffs[dd].inv()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(&self.field), self.clone()));
        }
        let mut quo = vec![self.field.zero(); rem.len() - dd];
        for k in (0..quo.len()).rev() {
            let c = rem[k + dd].mul(&lead_inv);
            if !c.is_exact_zero() {
                for (j, dj) in d.coeffs.iter().enumerate() {
                    rem[k + j] = rem[k + j].sub(&c.mul(dj));
                }
            }
            rem[k + dd] = self.field.zero();
            quo[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quo, &self.field), Self::new(rem, &self.field)))
    }

    /// T^deg * P(1/T) for the stated degree.
    pub fn reversed(&self, deg: usize) -> Self {
        let mut v = vec![self.field.zero(); deg + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            if i <= deg {
                v[deg - i] = c.clone();
            }
        }
        Self::new(v, &self.field)
    }

    pub fn in_field(&self, field: &BaseField) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.in_field(field)).collect(), field)
    }

    pub fn eq_at_precision(&self, other: &Self) -> bool {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).all(|i| self.coeff(i).eq_at_precision(&other.coeff(i)))
    }

    /// Exact rational coefficients, if all coefficients are exact.
    pub fn rational_coeffs(&self) -> Option<Vec<BigRational>> {
        self.coeffs.iter().map(|c| c.as_rational().cloned()).collect()
    }

    /// Parses "1 - 2*T + 5*T^2" with rational coefficients.
    pub fn parse(text: &str, field: &BaseField) -> Result<Self> {
        let bad = |m: &str| Error::Parse { path: String::new(), msg: format!("{m} in polynomial {text:?}") };
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(bad("empty"));
        }
        let mut terms: Vec<String> = Vec::new();
        let mut cur = String::new();
        for (i, ch) in s.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);
        let mut coeffs: Vec<BigRational> = Vec::new();
        for t in terms {
            let (sign, body) = match t.strip_prefix('-') {
                Some(b) => (-1, b.to_string()),
                None => (1, t.trim_start_matches('+').to_string()),
            };
            let (coef, mono) = if let Some(pos) = body.find('T') {
                let c = body[..pos].trim_end_matches('*');
                let c = if c.is_empty() { "1" } else { c };
                (c.to_string(), body[pos..].to_string())
            } else {
                (body.clone(), String::new())
            };
            let deg = if mono.is_empty() {
                0
            } else if mono == "T" {
                1
            } else {
                mono.strip_prefix("T^").ok_or_else(|| bad("bad monomial"))?.parse::<usize>().map_err(|_| bad("bad exponent"))?
            };
            let c = match coef.split_once('/') {
                Some((a, b)) => {
                    let b: BigInt = b.parse().map_err(|_| bad("bad coefficient"))?;
                    if b.is_zero() {
                        return Err(bad("zero denominator"));
                    }
                    BigRational::new(a.parse().map_err(|_| bad("bad coefficient"))?, b)
                }
                None => BigRational::from_integer(coef.parse().map_err(|_| bad("bad coefficient"))?),
            };
            if coeffs.len() <= deg {
                coeffs.resize(deg + 1, BigRational::zero());
            }
            coeffs[deg] += c * BigRational::from_integer(BigInt::from(sign));
        }
        Ok(Self::from_rationals(&coeffs, field))
    }
}

impl fmt::Display for PadicPoly {
    /// Exact coefficients render as "1 - 2*T + 5*T^2".
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_exact_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "T".to_string(),
                _ => format!("T^{i}"),
            };
            let (neg, body) = match c.as_rational() {
                Some(r) => {
                    let a = r.abs();
                    let s = if a.is_integer() { a.numer().to_string() } else { format!("{}/{}", a.numer(), a.denom()) };
                    (r.is_negative(), s)
                }
                None => (false, format!("({})", c.render(true))),
            };
            let term = if mono.is_empty() {
                body
            } else if body == "1" {
                mono
            } else {
                format!("{body}*{mono}")
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&term);
        }
        if out.is_empty() {
            out.push('0');
        }
        write!(f, "{out}")
    }
}

/// Truncated power series in a local parameter t, known modulo t^order.
#[derive(Clone)]
pub struct PowerSeries {
    coeffs: Vec<PadicNumber>,
    order: usize,
    field: BaseField,
}

impl fmt::Debug for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + O(t^{})", self.coeffs, self.order)
    }
}

impl PowerSeries {
    pub fn new(mut coeffs: Vec<PadicNumber>, order: usize, field: &BaseField) -> Self {
        coeffs.truncate(order);
        PowerSeries { coeffs, order, field: field.clone() }
    }

    pub fn from_poly(p: &PadicPoly, order: usize) -> Self {
        Self::new(p.coeffs().to_vec(), order, p.field())
    }

    pub fn constant(c: PadicNumber, order: usize) -> Self {
        let f = c.field().clone();
        Self::new(vec![c], order, &f)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn field(&self) -> &BaseField {
        &self.field
    }

    pub fn coeffs(&self) -> &[PadicNumber] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> PadicNumber {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        Self::new((0..order).map(|i| self.coeff(i).add(&other.coeff(i))).collect(), order, &self.field)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&self.field.int(-1)))
    }

    pub fn scale(&self, c: &PadicNumber) -> Self {
        Self::new(self.coeffs.iter().map(|x| x.mul(c)).collect(), self.order, &self.field)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let mut out = vec![self.field.zero(); order.min(self.coeffs.len() + other.coeffs.len())];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_exact_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= out.len() {
                    break;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::new(out, order, &self.field)
    }

    /// Multiplicative inverse; the constant term must be invertible.
    pub fn inverse(&self) -> Result<Self> {
        let c0inv = self.coeff(0).inv()?;
        let mut out = vec![c0inv.clone()];
        for n in 1..self.order {
            let mut s = self.field.zero();
            for k in 1..=n {
                s = s.add(&self.coeff(k).mul(&out[n - k]));
            }
            out.push(s.neg().mul(&c0inv));
        }
        Ok(Self::new(out, self.order, &self.field))
    }

    /// (1 + u)^a for a series u with zero constant term and rational a.
    pub fn binomial_power(u: &Self, a: &BigRational) -> Self {
        let field = u.field.clone();
        let mut acc = Self::constant(field.one(), u.order);
        let mut upow = acc.clone();
        for k in 1..u.order {
            upow = upow.mul(u);
            if upow.coeffs.iter().all(|c| c.is_exact_zero()) {
                break;
            }
            let c = PadicNumber::exact(binomial_rational(a, k), &field);
            acc = acc.add(&upow.scale(&c));
        }
        acc
    }

    /// Formal derivative; the truncation order drops by one.
    pub fn derivative(&self) -> Self {
        let order = self.order.saturating_sub(1);
        Self::new(
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c.scale_int(i as i64)).collect(),
            order,
            &self.field,
        )
    }

    /// Antiderivative with zero constant term; the order grows by one and the
    /// t^(k+1) term loses v_p(k+1) digits through the division.
    pub fn integrate(&self) -> Self {
        let mut out = vec![self.field.zero()];
        for (k, c) in self.coeffs.iter().enumerate() {
            out.push(c.div(&self.field.int(k as i64 + 1)).expect("nonzero integer divisor"));
        }
        Self::new(out, self.order + 1, &self.field)
    }

    /// Evaluates at t = x. The tail beyond the truncation order is not
    /// accounted for here; callers bound it separately.
    pub fn eval(&self, x: &PadicNumber) -> PadicNumber {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// self(s(t)) for a series s with zero constant term.
    pub fn compose(&self, s: &Self) -> Self {
        let order = self.order.min(s.order);
        let mut acc = Self::new(Vec::new(), order, &self.field);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(s).add(&Self::constant(c.clone(), order));
        }
        acc
    }
}

/// Integration of a power series, as a free function.
pub fn series_integrate(s: &PowerSeries, _field: &BaseField) -> PowerSeries {
    s.integrate()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64, n: u32) -> BaseField {
        BaseField::new(p, n).unwrap()
    }

    #[test]
    fn make_padic_examples() {
        let k = f(5, 6);
        let x = make_padic(&75.into(), &1.into(), &k).unwrap();
        assert_eq!(x.valuation(), Some(2));
        assert_eq!(x.unit(), BigInt::from(3));
        assert_eq!(x.relative_precision(), 6);

        let k3 = f(5, 3);
        let h = make_padic(&1.into(), &2.into(), &k3).unwrap();
        assert_eq!(h.valuation(), Some(0));
        assert_eq!(h.unit(), BigInt::from(63));
        assert_eq!((BigInt::from(2) * h.unit()) % 125, BigInt::from(1));
        assert_eq!(h.relative_precision(), 3);

        let z = make_padic(&0.into(), &1.into(), &k).unwrap();
        assert!(z.is_exact_zero());
        assert_eq!(z.valuation(), None);
        assert!(make_padic(&1.into(), &0.into(), &k).is_err());
    }

    #[test]
    fn negative_valuation_from_denominator() {
        let k = f(5, 6);
        let x = make_padic(&3.into(), &50.into(), &k).unwrap();
        assert_eq!(x.valuation(), Some(-2));
    }

    #[test]
    fn cancellation_example() {
        let k = f(5, 6);
        let a = PadicNumber::capped(0, 2.into(), 4, &k);
        let b = PadicNumber::capped(0, 3.into(), 4, &k);
        let s = &a + &b;
        assert_eq!(s.valuation(), Some(1));
        assert_eq!(s.relative_precision(), 3);
        assert_eq!(s.unit(), BigInt::from(1));
    }

    #[test]
    fn mul_adds_valuations() {
        let k = f(7, 8);
        let a = PadicNumber::capped(1, 3.into(), 6, &k);
        let b = PadicNumber::capped(2, 5.into(), 4, &k);
        let c = &a * &b;
        assert_eq!(c.valuation(), Some(3));
        assert_eq!(c.relative_precision(), 4);
    }

    #[test]
    fn self_division_is_one() {
        let k = f(5, 8);
        let a = PadicNumber::capped(3, 17.into(), 5, &k);
        let q = a.div(&a).unwrap();
        assert!(q.eq_at_precision(&k.one()));
        assert_eq!(q.relative_precision(), 5);
        assert_eq!(q.valuation(), Some(0));
    }

    #[test]
    fn division_by_apparent_zero_fails() {
        let k = f(5, 8);
        let z = PadicNumber::big_o(4, &k);
        match k.one().div(&z) {
            Err(Error::Precision { abs_precision, .. }) => assert_eq!(abs_precision, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(k.one().div(&k.zero()).is_err());
    }

    #[test]
    fn exact_arithmetic_stays_exact() {
        let k = f(5, 4);
        let x = k.rational(1, 3).add(&k.rational(2, 3));
        assert!(x.is_exact());
        assert_eq!(x.as_rational().unwrap(), &BigRational::one());
    }

    #[test]
    fn render_and_parse_round_trip() {
        let k = f(5, 6);
        let a = PadicNumber::capped(2, 3.into(), 4, &k);
        assert_eq!(a.render(false), "5^2 * 3 + O(5^6)");
        assert_eq!(a.render(true), "5^2*3+O(5^6)");
        let b = PadicNumber::parse(&a.render(true), &k).unwrap();
        assert!(a.eq_at_precision(&b));
        assert_eq!(b.abs_precision(), Some(6));
        let r = PadicNumber::parse("-7/10", &k).unwrap();
        assert_eq!(r.render(true), "-7/10");
        assert!(PadicNumber::parse("O(5^3)", &k).unwrap().is_zero_at_precision());
        assert!(PadicNumber::parse("3^1*2+O(3^4)", &k).is_err());
    }

    #[test]
    fn series_integration_example() {
        let k = f(3, 6);
        let s = PowerSeries::new(vec![k.one().to_capped(), k.one().to_capped(), k.one().to_capped()], 3, &k);
        let i = series_integrate(&s, &k);
        assert_eq!(i.order(), 4);
        assert!(i.coeff(0).is_exact_zero());
        assert!(i.coeff(1).eq_at_precision(&k.one()));
        assert!(i.coeff(2).eq_at_precision(&k.rational(1, 2)));
        assert_eq!(i.coeff(3).valuation(), Some(-1));
        assert_eq!(i.coeff(1).relative_precision() - i.coeff(3).relative_precision(), 0);
        assert_eq!(i.coeff(3).abs_precision().unwrap(), i.coeff(1).abs_precision().unwrap() - 1);
        let z = PowerSeries::new(vec![], 5, &k);
        assert!(series_integrate(&z, &k).coeffs().iter().all(|c| c.is_exact_zero()));
    }

    #[test]
    fn poly_parse_and_display() {
        let k = f(5, 6);
        let p = PadicPoly::parse("1 - 2*T + 5*T^2", &k).unwrap();
        assert_eq!(p.to_string(), "1 - 2*T + 5*T^2");
        let q = PadicPoly::parse("1 - 2/5*T + 1/5*T^2", &k).unwrap();
        assert_eq!(q.to_string(), "1 - 2/5*T + 1/5*T^2");
        assert_eq!(PadicPoly::parse("1+T", &k).unwrap().to_string(), "1 + T");
    }

    #[test]
    fn poly_divrem_exact() {
        let k = f(5, 6);
        let a = PadicPoly::from_ints(&[-1, 0, 0, 1], &k);
        let d = PadicPoly::from_ints(&[-1, 1], &k);
        let (q, r) = a.divrem(&d).unwrap();
        assert_eq!(q.to_string(), "1 + T + T^2");
        assert!(r.is_exact_zero());
    }

    #[test]
    fn series_inverse_and_binomial() {
        let k = f(7, 10);
        let u = PowerSeries::new(vec![k.zero(), k.int(7), k.int(3)], 8, &k);
        let half = BigRational::new(1.into(), 2.into());
        let s = PowerSeries::binomial_power(&u, &half);
        let sq = s.mul(&s);
        let one_u = u.add(&PowerSeries::constant(k.one(), 8));
        for i in 0..8 {
            assert!(sq.coeff(i).eq_at_precision(&one_u.coeff(i)));
        }
        let inv = one_u.inverse().unwrap();
        let prod = inv.mul(&one_u);
        assert!(prod.coeff(0).eq_at_precision(&k.one()));
        for i in 1..8 {
            assert!(prod.coeff(i).is_zero_at_precision());
        }
    }
}
