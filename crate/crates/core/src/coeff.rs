//! Scalars and the deformation parameter.
//!
//! `Q` is an exact rational that stays on machine words while it can and
//! spills to big integers otherwise. `Cq` pairs two of them into an exact
//! complex rational. `Cf` is the floating backend used only by the spectral
//! scans.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational number. Always normalized: the `S` variant is used whenever
/// numerator and denominator fit in an `i64`, so structural equality is value
/// equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Q {
    S(i64, i64),
    B(BigRational),
}

impl Q {
    pub fn zero() -> Q {
        Q::S(0, 1)
    }

    pub fn one() -> Q {
        Q::S(1, 1)
    }

    pub fn int(n: i64) -> Q {
        Q::S(n, 1)
    }

    pub fn new(n: i64, d: i64) -> Q {
        assert!(d != 0, "zero denominator");
        Q::from_i128(n as i128, d as i128)
    }

    fn from_i128(n: i128, d: i128) -> Q {
        let (mut n, mut d) = (n, d);
        if d < 0 {
            n = -n;
            d = -d;
        }
        let g = n.gcd(&d);
        if g > 1 {
            n /= g;
            d /= g;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(a), Ok(b)) => Q::S(a, b),
            _ => Q::B(BigRational::new_raw(BigInt::from(n), BigInt::from(d))),
        }
    }

    fn from_big(r: BigRational) -> Q {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(a), Some(b)) => Q::S(a, b),
            _ => Q::B(r),
        }
    }

    fn big(&self) -> BigRational {
        match self {
            Q::S(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Q::B(r) => r.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Q::S(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Q::S(1, 1))
    }

    pub fn add(&self, o: &Q) -> Q {
        match (self, o) {
            (Q::S(0, _), _) => o.clone(),
            (_, Q::S(0, _)) => self.clone(),
            (Q::S(a, b), Q::S(c, d)) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                if b == d {
                    Q::from_i128(a + c, b)
                } else {
                    Q::from_i128(a * d + c * b, b * d)
                }
            }
            _ => Q::from_big(self.big() + o.big()),
        }
    }

    pub fn neg(&self) -> Q {
        match self {
            Q::S(n, d) if *n != i64::MIN => Q::S(-n, *d),
            _ => Q::from_big(-self.big()),
        }
    }

    pub fn sub(&self, o: &Q) -> Q {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Q) -> Q {
        match (self, o) {
            (Q::S(0, _), _) | (_, Q::S(0, _)) => Q::zero(),
            (Q::S(1, 1), _) => o.clone(),
            (_, Q::S(1, 1)) => self.clone(),
            (Q::S(a, b), Q::S(c, d)) => {
                Q::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Q::from_big(self.big() * o.big()),
        }
    }

    pub fn inv(&self) -> Q {
        assert!(!self.is_zero(), "inverse of zero");
        match self {
            Q::S(n, d) => Q::from_i128(*d as i128, *n as i128),
            Q::B(r) => Q::from_big(r.recip()),
        }
    }

    pub fn div(&self, o: &Q) -> Q {
        self.mul(&o.inv())
    }

    pub fn signum(&self) -> i32 {
        match self {
            Q::S(n, _) => n.signum() as i32,
            Q::B(r) => {
                if r.is_positive() {
                    1
                } else if r.is_negative() {
                    -1
                } else {
                    0
                }
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Q::S(n, d) => *n as f64 / *d as f64,
            Q::B(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn numer_denom(&self) -> (BigInt, BigInt) {
        match self {
            Q::S(n, d) => (BigInt::from(*n), BigInt::from(*d)),
            Q::B(r) => (r.numer().clone(), r.denom().clone()),
        }
    }

    /// The canonical "p/q" text, denominator always written.
    pub fn to_pq(&self) -> String {
        let (n, d) = self.numer_denom();
        format!("{}/{}", n, d)
    }
}

impl PartialOrd for Q {
    fn partial_cmp(&self, o: &Q) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Q {
    fn cmp(&self, o: &Q) -> Ordering {
        match (self, o) {
            (Q::S(a, b), Q::S(c, d)) => (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128)),
            _ => self.big().cmp(&o.big()),
        }
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Q::S(n, 1) => write!(f, "{}", n),
            Q::S(n, d) => write!(f, "{}/{}", n, d),
            Q::B(r) => write!(f, "{}", r),
        }
    }
}

impl FromStr for Q {
    type Err = Error;

    fn from_str(s: &str) -> Result<Q> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational: {:?}", s));
        if let Some((n, d)) = s.split_once('/') {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {:?}", s)));
            }
            return Ok(Q::from_big(BigRational::new(n, d)));
        }
        if let Some((ip, fp)) = s.split_once('.') {
            // finite decimal, kept exact
            let neg = ip.starts_with('-');
            let digits = format!("{}{}", ip.trim_start_matches(['-', '+']), fp);
            let n = BigInt::from_str(&digits).map_err(|_| bad())?;
            let d = num_traits::pow(BigInt::from(10), fp.len());
            let r = BigRational::new(if neg { -n } else { n }, d);
            return Ok(Q::from_big(r));
        }
        let n = BigInt::from_str(s).map_err(|_| bad())?;
        Ok(Q::from_big(BigRational::from_integer(n)))
    }
}

/// Serialized as the string "p/q".
impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_pq())
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// Exact complex rational `re + im·i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cq {
    pub re: Q,
    pub im: Q,
}

impl Cq {
    pub fn new(re: Q, im: Q) -> Cq {
        Cq { re, im }
    }

    pub fn zero() -> Cq {
        Cq::new(Q::zero(), Q::zero())
    }

    pub fn one() -> Cq {
        Cq::new(Q::one(), Q::zero())
    }

    pub fn i() -> Cq {
        Cq::new(Q::zero(), Q::one())
    }

    pub fn int(n: i64) -> Cq {
        Cq::new(Q::int(n), Q::zero())
    }

    pub fn rat(n: i64, d: i64) -> Cq {
        Cq::new(Q::new(n, d), Q::zero())
    }

    pub fn real(re: Q) -> Cq {
        Cq::new(re, Q::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn neg(&self) -> Cq {
        Cq::new(self.re.neg(), self.im.neg())
    }

    pub fn conj(&self) -> Cq {
        Cq::new(self.re.clone(), self.im.neg())
    }

    /// |z|², exact.
    pub fn norm_sqr(&self) -> Q {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn scale(&self, r: &Q) -> Cq {
        Cq::new(self.re.mul(r), self.im.mul(r))
    }

    pub fn inv(&self) -> Cq {
        let n = self.norm_sqr();
        assert!(!n.is_zero(), "inverse of zero");
        let s = n.inv();
        Cq::new(self.re.mul(&s), self.im.neg().mul(&s))
    }

    pub fn pow(&self, n: i64) -> Cq {
        if n < 0 {
            return self.inv().pow(-n);
        }
        let mut base = self.clone();
        let mut acc = Cq::one();
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn to_cf(&self) -> Cf {
        Cf::new(self.re.to_f64(), self.im.to_f64())
    }

    /// A crude size measure used for defect reporting.
    pub fn magnitude(&self) -> f64 {
        self.to_cf().abs()
    }
}

impl fmt::Display for Cq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.signum() < 0 {
            write!(f, "{}-{}i", self.re, self.im.neg())
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

/// Accepts `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i` and `(z)/n`, with rational
/// or decimal parts, e.g. `2/3+0i`, `(1+i)/4`, `i/2`.
impl FromStr for Cq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Cq> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        if let Some(rest) = t.strip_prefix('(') {
            let close = rest
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unbalanced parenthesis in {:?}", s)))?;
            let inner: Cq = rest[..close].parse()?;
            let tail = &rest[close + 1..];
            if tail.is_empty() {
                return Ok(inner);
            }
            let d = tail
                .strip_prefix('/')
                .ok_or_else(|| Error::Parse(format!("expected '/' after ')' in {:?}", s)))?;
            let d: Q = d.parse()?;
            if d.is_zero() {
                return Err(Error::Parse(format!("division by zero in {:?}", s)));
            }
            return Ok(inner.scale(&d.inv()));
        }
        // split at a sign that is not leading
        let bytes = t.as_bytes();
        let mut cut = None;
        for k in (1..bytes.len()).rev() {
            if (bytes[k] == b'+' || bytes[k] == b'-') && bytes[k - 1] != b'e' {
                cut = Some(k);
                break;
            }
        }
        let (a, b) = match cut {
            Some(k) => (&t[..k], &t[k..]),
            None => ("", &t[..]),
        };
        let term = |p: &str| -> Result<(bool, Q)> {
            if let Some(body) = p.strip_suffix('i') {
                let body = body.trim_start_matches('+');
                let v = match body {
                    "" => Q::one(),
                    "-" => Q::int(-1),
                    _ => body.parse()?,
                };
                Ok((true, v))
            } else if let Some((num, den)) = p.split_once("i/") {
                // forms like i/2 or -3i/4
                let num = num.trim_start_matches('+');
                let v = match num {
                    "" => Q::one(),
                    "-" => Q::int(-1),
                    _ => num.parse()?,
                };
                let d: Q = den.parse()?;
                if d.is_zero() {
                    return Err(Error::Parse(format!("division by zero in {:?}", p)));
                }
                Ok((true, v.div(&d)))
            } else {
                Ok((false, p.trim_start_matches('+').parse()?))
            }
        };
        let mut z = Cq::zero();
        for p in [a, b] {
            if p.is_empty() {
                continue;
            }
            let (imag, v) = term(p)?;
            if imag {
                z.im = z.im.add(&v);
            } else {
                z.re = z.re.add(&v);
            }
        }
        Ok(z)
    }
}

impl Serialize for Cq {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Cq", 2)?;
        st.serialize_field("re", &self.re.to_pq())?;
        st.serialize_field("im", &self.im.to_pq())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Cq {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Cq, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Part {
            Text(String),
            Int(i64),
        }
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Obj { re: Part, im: Option<Part> },
            Text(String),
            Int(i64),
        }
        let part = |p: Part| -> std::result::Result<Q, D::Error> {
            match p {
                Part::Text(t) => t.parse().map_err(D::Error::custom),
                Part::Int(n) => Ok(Q::int(n)),
            }
        };
        match Raw::deserialize(d)? {
            Raw::Obj { re, im } => Ok(Cq::new(
                part(re)?,
                match im {
                    Some(p) => part(p)?,
                    None => Q::zero(),
                },
            )),
            Raw::Text(t) => t.parse().map_err(D::Error::custom),
            Raw::Int(n) => Ok(Cq::int(n)),
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a> $tr<&'a Cq> for &'a Cq {
            type Output = Cq;
            fn $m(self, o: &'a Cq) -> Cq {
                let f: fn(&Cq, &Cq) -> Cq = $body;
                f(self, o)
            }
        }
        impl $tr<Cq> for Cq {
            type Output = Cq;
            fn $m(self, o: Cq) -> Cq {
                $tr::$m(&self, &o)
            }
        }
        impl<'a> $tr<&'a Cq> for Cq {
            type Output = Cq;
            fn $m(self, o: &'a Cq) -> Cq {
                $tr::$m(&self, o)
            }
        }
        impl<'a> $tr<Cq> for &'a Cq {
            type Output = Cq;
            fn $m(self, o: Cq) -> Cq {
                $tr::$m(self, &o)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| Cq::new(a.re.add(&b.re), a.im.add(&b.im)));
forward_binop!(Sub, sub, |a, b| Cq::new(a.re.sub(&b.re), a.im.sub(&b.im)));
forward_binop!(Mul, mul, |a, b| {
    if a.im.is_zero() && b.im.is_zero() {
        return Cq::real(a.re.mul(&b.re));
    }
    if b.im.is_zero() {
        return a.scale(&b.re);
    }
    if a.im.is_zero() {
        return b.scale(&a.re);
    }
    Cq::new(
        a.re.mul(&b.re).sub(&a.im.mul(&b.im)),
        a.re.mul(&b.im).add(&a.im.mul(&b.re)),
    )
});
forward_binop!(Div, div, |a, b| a * &b.inv());

impl Neg for Cq {
    type Output = Cq;
    fn neg(self) -> Cq {
        Cq::new(self.re.neg(), self.im.neg())
    }
}

impl<'a> Neg for &'a Cq {
    type Output = Cq;
    fn neg(self) -> Cq {
        Cq::new(self.re.neg(), self.im.neg())
    }
}

impl AddAssign<&Cq> for Cq {
    fn add_assign(&mut self, o: &Cq) {
        self.re = self.re.add(&o.re);
        self.im = self.im.add(&o.im);
    }
}

impl SubAssign<&Cq> for Cq {
    fn sub_assign(&mut self, o: &Cq) {
        self.re = self.re.sub(&o.re);
        self.im = self.im.sub(&o.im);
    }
}

pub const DEFAULT_TOL: f64 = 1e-9;

/// Floating complex number with an attached comparison tolerance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cf {
    pub re: f64,
    pub im: f64,
    pub tol: f64,
}

impl Cf {
    pub fn new(re: f64, im: f64) -> Cf {
        Cf { re, im, tol: DEFAULT_TOL }
    }

    pub fn with_tol(self, tol: f64) -> Cf {
        Cf { tol, ..self }
    }

    pub fn abs(&self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn approx_eq(&self, o: &Cf) -> bool {
        Cf::new(self.re - o.re, self.im - o.im).abs() <= self.tol.max(o.tol)
    }
}

impl Serialize for Cf {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Cf", 2)?;
        st.serialize_field("re", &self.re)?;
        st.serialize_field("im", &self.im)?;
        st.end()
    }
}

/// The arithmetic needed by the linear-algebra kernels, implemented by both
/// backends.
pub trait Field: Clone + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Exact zero test, or |x| ≤ tol for floats.
    fn is_zero(&self) -> bool;
    fn magnitude(&self) -> f64;
    fn from_cq(c: &Cq) -> Self;
}

impl Field for Cq {
    fn zero() -> Cq {
        Cq::zero()
    }
    fn one() -> Cq {
        Cq::one()
    }
    fn add(&self, o: &Cq) -> Cq {
        self + o
    }
    fn sub(&self, o: &Cq) -> Cq {
        self - o
    }
    fn mul(&self, o: &Cq) -> Cq {
        self * o
    }
    fn div(&self, o: &Cq) -> Cq {
        self / o
    }
    fn neg(&self) -> Cq {
        -self
    }
    fn is_zero(&self) -> bool {
        Cq::is_zero(self)
    }
    fn magnitude(&self) -> f64 {
        Cq::magnitude(self)
    }
    fn from_cq(c: &Cq) -> Cq {
        c.clone()
    }
}

impl Field for Cf {
    fn zero() -> Cf {
        Cf::new(0.0, 0.0)
    }
    fn one() -> Cf {
        Cf::new(1.0, 0.0)
    }
    fn add(&self, o: &Cf) -> Cf {
        Cf::new(self.re + o.re, self.im + o.im).with_tol(self.tol.max(o.tol))
    }
    fn sub(&self, o: &Cf) -> Cf {
        Cf::new(self.re - o.re, self.im - o.im).with_tol(self.tol.max(o.tol))
    }
    fn mul(&self, o: &Cf) -> Cf {
        Cf::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
        .with_tol(self.tol.max(o.tol))
    }
    fn div(&self, o: &Cf) -> Cf {
        let n = o.re * o.re + o.im * o.im;
        Cf::new(
            (self.re * o.re + self.im * o.im) / n,
            (self.im * o.re - self.re * o.im) / n,
        )
        .with_tol(self.tol.max(o.tol))
    }
    fn neg(&self) -> Cf {
        Cf::new(-self.re, -self.im).with_tol(self.tol)
    }
    fn is_zero(&self) -> bool {
        self.abs() <= self.tol
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn from_cq(c: &Cq) -> Cf {
        c.to_cf()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModulusClass {
    Contractive,
    Unimodular,
    Expanding,
}

/// The deformation parameter, with exact powers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QParam {
    q: Cq,
    class: ModulusClass,
}

impl QParam {
    pub fn value(&self) -> &Cq {
        &self.q
    }

    pub fn class(&self) -> ModulusClass {
        self.class
    }

    pub fn is_contractive(&self) -> bool {
        self.class == ModulusClass::Contractive
    }

    pub fn require_contractive(&self) -> Result<()> {
        if self.is_contractive() {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "q = {} is {:?}; this operation needs |q| < 1",
                self.q, self.class
            )))
        }
    }

    /// |q|², exact.
    pub fn modulus_sqr(&self) -> Q {
        self.q.norm_sqr()
    }

    pub fn pow(&self, n: i64) -> Cq {
        self.q.pow(n)
    }

    /// q^0, …, q^n.
    pub fn powers(&self, n: usize) -> Vec<Cq> {
        let mut out = Vec::with_capacity(n + 1);
        let mut p = Cq::one();
        for _ in 0..=n {
            out.push(p.clone());
            p = &p * &self.q;
        }
        out
    }
}

impl fmt::Display for QParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.q.fmt(f)
    }
}

impl Serialize for QParam {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.q.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QParam {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<QParam, D::Error> {
        let q = Cq::deserialize(d)?;
        make_q(q).map_err(D::Error::custom)
    }
}

/// Validates q ∉ {0, 1} and classifies |q| exactly through |q|².
pub fn make_q(value: Cq) -> Result<QParam> {
    if value.is_zero() || value.is_one() {
        return Err(Error::Domain(format!("q = {} is excluded (q must avoid 0 and 1)", value)));
    }
    let m = value.norm_sqr();
    let class = match m.cmp(&Q::one()) {
        Ordering::Less => ModulusClass::Contractive,
        Ordering::Equal => ModulusClass::Unimodular,
        Ordering::Greater => ModulusClass::Expanding,
    };
    Ok(QParam { q: value, class })
}

pub fn parse_q(s: &str) -> Result<QParam> {
    make_q(s.parse()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Cq {
        s.parse().unwrap()
    }

    #[test]
    fn small_rationals_stay_small_and_spill() {
        let a = Q::new(6, -4);
        assert_eq!(a, Q::S(-3, 2));
        let big = Q::new(i64::MAX, 1).mul(&Q::new(i64::MAX, 1));
        assert!(matches!(big, Q::B(_)));
        let back = big.div(&Q::new(i64::MAX, 1));
        assert_eq!(back, Q::S(i64::MAX, 1));
    }

    #[test]
    fn parses_the_usual_forms() {
        assert_eq!(c("1/2"), Cq::rat(1, 2));
        assert_eq!(c("2/3+0i"), Cq::rat(2, 3));
        assert_eq!(c("(1+i)/4"), Cq::new(Q::new(1, 4), Q::new(1, 4)));
        assert_eq!(c("i/2"), Cq::new(Q::zero(), Q::new(1, 2)));
        assert_eq!(c("-i"), Cq::new(Q::zero(), Q::int(-1)));
        assert_eq!(c("1/4-3/4i"), Cq::new(Q::new(1, 4), Q::new(-3, 4)));
        assert_eq!(c("0.25"), Cq::rat(1, 4));
        assert!("1/0".parse::<Cq>().is_err());
        assert!("abc".parse::<Cq>().is_err());
    }

    #[test]
    fn modulus_classes() {
        assert_eq!(make_q(Cq::rat(1, 2)).unwrap().class(), ModulusClass::Contractive);
        assert_eq!(make_q(Cq::int(2)).unwrap().class(), ModulusClass::Expanding);
        assert_eq!(make_q(Cq::i()).unwrap().class(), ModulusClass::Unimodular);
        let q = make_q(c("i/2")).unwrap();
        assert_eq!(q.modulus_sqr(), Q::new(1, 4));
        assert_eq!(q.class(), ModulusClass::Contractive);
        assert!(make_q(Cq::zero()).is_err());
        assert!(make_q(Cq::one()).is_err());
    }

    #[test]
    fn ring_laws_and_powers() {
        let xs = [c("1/3+2i"), c("-5/7"), c("3i/11"), c("(2-i)/9")];
        for a in &xs {
            for b in &xs {
                for d in &xs {
                    assert_eq!(&(a + b) + d, a + &(b + d));
                    assert_eq!(a * &(b + d), &(a * b) + &(a * d));
                }
                if !b.is_zero() {
                    assert_eq!(&(a / b) * b, a.clone());
                }
            }
        }
        let q = make_q(c("(1+i)/4")).unwrap();
        for m in 0..=64 {
            for n in [0i64, 1, 7, 64] {
                assert_eq!(&q.pow(m) * &q.pow(n), q.pow(m + n));
            }
        }
        assert_eq!(&q.pow(-3) * &q.pow(3), Cq::one());
        assert_eq!(q.powers(5)[5], q.pow(5));
    }

    #[test]
    fn json_shapes() {
        let z = c("1/2-3i");
        let v = serde_json::to_value(&z).unwrap();
        assert_eq!(v, serde_json::json!({"re": "1/2", "im": "-3/1"}));
        let back: Cq = serde_json::from_value(v).unwrap();
        assert_eq!(back, z);
        let f = serde_json::to_value(Cf::new(0.5, -1.0)).unwrap();
        assert_eq!(f, serde_json::json!({"re": 0.5, "im": -1.0}));
    }

    #[test]
    fn float_tolerance() {
        let a = Cf::new(1.0, 0.0);
        let b = Cf::new(1.0 + 1e-10, 0.0);
        assert!(a.approx_eq(&b));
        assert!(!a.approx_eq(&Cf::new(1.0 + 1e-6, 0.0)));
        assert!(<Cf as Field>::is_zero(&Cf::new(1e-12, 0.0)));
    }
}
