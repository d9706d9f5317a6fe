//! Exact scalar fields: ℚ, the Gaussian rationals ℚ(i) and ℚ(i, √2).
//!
//! `Rational` keeps small values in a machine-word `Ratio<i128>` and switches
//! to `BigRational` when a checked operation overflows, so every result is
//! exact regardless of coefficient growth.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Operations shared by every exact coefficient field used by [`crate::matrix::Matrix`].
pub trait Field: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

/// Complex conjugation, used for conjugate transposes.
pub trait Conj {
    fn conj(&self) -> Self;
}

/// An exact rational number.
#[derive(Clone)]
pub enum Rational {
    Small(Ratio<i128>),
    Big(BigRational),
}

fn small_ok(r: &Ratio<i128>) -> bool {
    *r.numer() != i128::MIN && *r.denom() != i128::MIN
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational::Small(Ratio::new(num as i128, den as i128))
    }

    pub fn from_int(n: i64) -> Self {
        Rational::Small(Ratio::from_integer(n as i128))
    }

    pub fn from_big(b: BigRational) -> Self {
        if b.numer().bits() < 126 && b.denom().bits() < 126 {
            let n = b.numer().to_i128().expect("fits");
            let d = b.denom().to_i128().expect("fits");
            Rational::Small(Ratio::new_raw(n, d))
        } else {
            Rational::Big(b)
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rational::Small(r) => {
                BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
            }
            Rational::Big(b) => b.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Rational::Small(r) => BigInt::from(*r.numer()),
            Rational::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Rational::Small(r) => BigInt::from(*r.denom()),
            Rational::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Rational::Small(r) => r.numer().is_zero(),
            Rational::Big(b) => b.is_zero(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Rational::Small(r) => r.is_negative(),
            Rational::Big(b) => b.is_negative(),
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Rational::Small(r) => r.is_positive(),
            Rational::Big(b) => b.is_positive(),
        }
    }

    pub fn abs(&self) -> Rational {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Rational::Small(r) => *r.numer() as f64 / *r.denom() as f64,
            Rational::Big(b) => b.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn pow(&self, e: u32) -> Rational {
        let mut acc = Rational::from_int(1);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn recip(&self) -> Option<Rational> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Rational::Small(r) if small_ok(r) => Rational::Small(r.recip()),
            _ => Rational::from_big(self.to_big().recip()),
        })
    }

    fn binop(
        &self,
        other: &Rational,
        small: impl Fn(&Ratio<i128>, &Ratio<i128>) -> Option<Ratio<i128>>,
        big: impl Fn(BigRational, BigRational) -> BigRational,
    ) -> Rational {
        if let (Rational::Small(a), Rational::Small(b)) = (self, other) {
            if let Some(r) = small(a, b) {
                if small_ok(&r) {
                    return Rational::Small(r);
                }
            }
        }
        Rational::from_big(big(self.to_big(), other.to_big()))
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::from_int(0)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Rational::Small(a), Rational::Small(b)) => a == b,
            _ => self.to_big() == other.to_big(),
        }
    }
}
impl Eq for Rational {}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Rational::Small(a), Rational::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl std::hash::Hash for Rational {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.numer().hash(state);
        self.denom().hash(state);
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = (self.numer(), self.denom());
        if d.is_one() {
            write!(f, "{n}")
        } else {
            write!(f, "{n}/{d}")
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Parses `p`, `-p`, `p/q` with decimal integers `p`, `q` and `q != 0`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("malformed rational {s:?}"));
        let t = s.trim();
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n, d),
            None => (t, "1"),
        };
        let valid = |x: &str, allow_sign: bool| {
            let digits = if allow_sign {
                x.strip_prefix('-').or_else(|| x.strip_prefix('+')).unwrap_or(x)
            } else {
                x
            };
            !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
        };
        if !valid(num, true) || !valid(den, false) {
            return Err(bad());
        }
        let n: BigInt = num.parse().map_err(|_| bad())?;
        let d: BigInt = den.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Ok(Rational::from_big(BigRational::new(n, d)))
    }
}

impl<'a> Add<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn add(self, o: &Rational) -> Rational {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        self.binop(o, |a, b| a.checked_add(b), |a, b| a + b)
    }
}
impl<'a> Sub<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn sub(self, o: &Rational) -> Rational {
        if o.is_zero() {
            return self.clone();
        }
        self.binop(o, |a, b| a.checked_sub(b), |a, b| a - b)
    }
}
impl<'a> Mul<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn mul(self, o: &Rational) -> Rational {
        if self.is_zero() || o.is_zero() {
            return Rational::from_int(0);
        }
        self.binop(o, |a, b| a.checked_mul(b), |a, b| a * b)
    }
}
impl<'a> Div<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn div(self, o: &Rational) -> Rational {
        let r = o.recip().expect("division by zero rational");
        self * &r
    }
}
impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match self {
            Rational::Small(r) if small_ok(r) => Rational::Small(-r),
            _ => Rational::from_big(-self.to_big()),
        }
    }
}

macro_rules! forward_owned {
    ($t:ty, $($tr:ident $m:ident),*) => {$(
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, o: $t) -> $t { (&self).$m(&o) }
        }
        impl<'a> $tr<&'a $t> for $t {
            type Output = $t;
            fn $m(self, o: &'a $t) -> $t { (&self).$m(o) }
        }
    )*
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t { -(&self) }
        }
    };
}
forward_owned!(Rational, Add add, Sub sub, Mul mul, Div div);

impl Field for Rational {
    fn zero() -> Self {
        Rational::from_int(0)
    }
    fn one() -> Self {
        Rational::from_int(1)
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        self.recip()
    }
}

/// A Gaussian rational `re + im·i`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

pub type GRat = GaussianRational;

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }
    pub fn real(re: Rational) -> Self {
        GaussianRational { re, im: Rational::from_int(0) }
    }
    pub fn from_int(n: i64) -> Self {
        Self::real(Rational::from_int(n))
    }
    pub fn frac(n: i64, d: i64) -> Self {
        Self::real(Rational::new(n, d))
    }
    pub fn i() -> Self {
        GaussianRational { re: Rational::from_int(0), im: Rational::from_int(1) }
    }
    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }
    pub fn norm_sqr(&self) -> Rational {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }
    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
    pub fn scale(&self, r: &Rational) -> Self {
        GaussianRational { re: &self.re * r, im: &self.im * r }
    }
    /// Multiplication by `i`.
    pub fn mul_i(&self) -> Self {
        GaussianRational { re: -&self.im, im: self.re.clone() }
    }
    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::from_int(1);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                if self.im.is_negative() {
                    write!(f, "{}-{}i", self.re, -&self.im)
                } else {
                    write!(f, "{}+{}i", self.re, self.im)
                }
            }
        }
    }
}

impl From<Rational> for GaussianRational {
    fn from(r: Rational) -> Self {
        GaussianRational::real(r)
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}
impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}
impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussianRational::real(&self.re * &o.re);
        }
        GaussianRational {
            re: &(&self.re * &o.re) - &(&self.im * &o.im),
            im: &(&self.re * &o.im) + &(&self.im * &o.re),
        }
    }
}
impl<'a> Div<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn div(self, o: &GaussianRational) -> GaussianRational {
        self * &o.inv().expect("division by zero Gaussian rational")
    }
}
impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -&self.re, im: -&self.im }
    }
}
forward_owned!(GaussianRational, Add add, Sub sub, Mul mul, Div div);

impl Conj for GaussianRational {
    fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: -&self.im }
    }
}

impl Field for GaussianRational {
    fn zero() -> Self {
        Self::from_int(0)
    }
    fn one() -> Self {
        Self::from_int(1)
    }
    fn is_zero(&self) -> bool {
        GaussianRational::is_zero(self)
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr().recip()?;
        Some(GaussianRational { re: &self.re * &n, im: -&(&self.im * &n) })
    }
}

/// An element `a + b·√2` of ℚ(i, √2) with `a, b` Gaussian rationals.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    pub a: GaussianRational,
    pub b: GaussianRational,
}

impl Scalar {
    pub fn new(a: GaussianRational, b: GaussianRational) -> Self {
        Scalar { a, b }
    }
    pub fn from_gauss(a: GaussianRational) -> Self {
        Scalar { a, b: GaussianRational::from_int(0) }
    }
    pub fn from_rational(r: Rational) -> Self {
        Self::from_gauss(GaussianRational::real(r))
    }
    pub fn from_int(n: i64) -> Self {
        Self::from_gauss(GaussianRational::from_int(n))
    }
    pub fn frac(n: i64, d: i64) -> Self {
        Self::from_gauss(GaussianRational::frac(n, d))
    }
    pub fn i() -> Self {
        Self::from_gauss(GaussianRational::i())
    }
    pub fn sqrt2() -> Self {
        Scalar { a: GaussianRational::from_int(0), b: GaussianRational::from_int(1) }
    }
    /// `1/√2 = √2/2`.
    pub fn inv_sqrt2() -> Self {
        Scalar { a: GaussianRational::from_int(0), b: GaussianRational::frac(1, 2) }
    }
    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    /// The Gaussian rational value when the √2 part vanishes.
    pub fn as_gauss(&self) -> Option<&GaussianRational> {
        if self.b.is_zero() {
            Some(&self.a)
        } else {
            None
        }
    }
    pub fn to_c64(&self) -> Complex64 {
        self.a.to_c64() + self.b.to_c64() * std::f64::consts::SQRT_2
    }
    pub fn scale_gauss(&self, g: &GaussianRational) -> Self {
        Scalar { a: &self.a * g, b: &self.b * g }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "({})√2", self.b)
        } else {
            write!(f, "{}+({})√2", self.a, self.b)
        }
    }
}

impl From<GaussianRational> for Scalar {
    fn from(g: GaussianRational) -> Self {
        Scalar::from_gauss(g)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        Scalar { a: &self.a + &o.a, b: &self.b + &o.b }
    }
}
impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        Scalar { a: &self.a - &o.a, b: &self.b - &o.b }
    }
}
impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        if self.b.is_zero() && o.b.is_zero() {
            return Scalar::from_gauss(&self.a * &o.a);
        }
        let two = Rational::from_int(2);
        Scalar {
            a: &(&self.a * &o.a) + &(&self.b * &o.b).scale(&two),
            b: &(&self.a * &o.b) + &(&self.b * &o.a),
        }
    }
}
impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, o: &Scalar) -> Scalar {
        self * &o.inv().expect("division by zero scalar")
    }
}
impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { a: -&self.a, b: -&self.b }
    }
}
forward_owned!(Scalar, Add add, Sub sub, Mul mul, Div div);

impl Conj for Scalar {
    fn conj(&self) -> Self {
        Scalar { a: self.a.conj(), b: self.b.conj() }
    }
}

impl Field for Scalar {
    fn zero() -> Self {
        Scalar::from_int(0)
    }
    fn one() -> Self {
        Scalar::from_int(1)
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.b.is_zero() {
            return Some(Scalar::from_gauss(self.a.inv()?));
        }
        // (a + b√2)(a − b√2) = a² − 2b², nonzero because √2 ∉ ℚ(i).
        let n = &(&self.a * &self.a) - &(&self.b * &self.b).scale(&Rational::from_int(2));
        let ninv = n.inv()?;
        Some(Scalar { a: &self.a * &ninv, b: -&(&self.b * &ninv) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parse_and_print() {
        assert!("6/-4".parse::<Rational>().is_err());
        let r: Rational = "-6/4".parse().unwrap();
        assert_eq!(r.to_string(), "-3/2");
        assert!("1//2".parse::<Rational>().is_err());
        assert!("1/0".parse::<Rational>().is_err());
        assert!("".parse::<Rational>().is_err());
        assert_eq!("7".parse::<Rational>().unwrap(), Rational::from_int(7));
    }

    #[test]
    fn rational_overflow_promotes_to_big() {
        let big = Rational::new(i64::MAX, 3);
        let mut acc = Rational::from_int(1);
        for _ in 0..6 {
            acc = &acc * &big;
        }
        assert!(matches!(acc, Rational::Big(_)));
        let mut back = acc.clone();
        for _ in 0..6 {
            back = &back / &big;
        }
        assert_eq!(back, Rational::from_int(1));
        assert!(matches!(back, Rational::Small(_)));
    }

    #[test]
    fn gaussian_inverse() {
        let z = GaussianRational::new(Rational::new(3, 2), Rational::new(-2, 5));
        assert_eq!(&z * &z.inv().unwrap(), GaussianRational::from_int(1));
        assert_eq!(&GaussianRational::i() * &GaussianRational::i(), GaussianRational::from_int(-1));
    }

    #[test]
    fn sqrt2_field() {
        let s = Scalar::sqrt2();
        assert_eq!(&s * &s, Scalar::from_int(2));
        assert_eq!(&s * &Scalar::inv_sqrt2(), Scalar::from_int(1));
        let x = Scalar::new(GaussianRational::frac(1, 3), GaussianRational::i());
        assert_eq!(&x * &x.inv().unwrap(), Scalar::one());
        assert!((x.to_c64() - Complex64::new(1.0 / 3.0, std::f64::consts::SQRT_2)).norm() < 1e-15);
    }
}
