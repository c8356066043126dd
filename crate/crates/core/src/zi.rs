//! Gaussian integers `a+bi` and Gaussian rationals `ω/γ`, with canonical
//! forms, Euclidean division, gcd, and a literal parser/printer.
//!
//! Canonical associate: the unique associate with `re > 0, im ≥ 0` (zero is
//! its own canonical associate). Gaussian rationals keep a canonical
//! denominator and a numerator coprime to it, so equal values have equal
//! representations and can be hashed.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::scalar::{from_decimal, two, Scalar};

/// The four units of `ℤ[i]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Unit {
    One,
    I,
    MinusOne,
    MinusI,
}

impl Unit {
    fn power_of_i(self) -> u8 {
        match self {
            Unit::One => 0,
            Unit::I => 1,
            Unit::MinusOne => 2,
            Unit::MinusI => 3,
        }
    }

    fn from_power_of_i(k: u8) -> Unit {
        match k % 4 {
            0 => Unit::One,
            1 => Unit::I,
            2 => Unit::MinusOne,
            _ => Unit::MinusI,
        }
    }

    pub fn inverse(self) -> Unit {
        Unit::from_power_of_i((4 - self.power_of_i()) % 4)
    }

    pub fn to_gauss<T: Scalar>(self) -> GaussInt<T> {
        GaussInt::one().mul_unit(self)
    }
}

impl Mul for Unit {
    type Output = Unit;
    fn mul(self, rhs: Unit) -> Unit {
        Unit::from_power_of_i(self.power_of_i() + rhs.power_of_i())
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Unit::One => "1",
            Unit::I => "i",
            Unit::MinusOne => "-1",
            Unit::MinusI => "-i",
        })
    }
}

/// A Gaussian integer `re + im·i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussInt<T> {
    pub re: T,
    pub im: T,
}

impl<T: Scalar> GaussInt<T> {
    pub fn new(re: T, im: T) -> Self {
        GaussInt { re, im }
    }

    pub fn from_int(re: T) -> Self {
        GaussInt { re, im: T::zero() }
    }

    pub fn from_i64(re: i64, im: i64) -> Self {
        GaussInt {
            re: T::from_i64(re).expect("scalar must hold i64"),
            im: T::from_i64(im).expect("scalar must hold i64"),
        }
    }

    pub fn zero() -> Self {
        GaussInt::new(T::zero(), T::zero())
    }

    pub fn one() -> Self {
        GaussInt::new(T::one(), T::zero())
    }

    pub fn i() -> Self {
        GaussInt::new(T::zero(), T::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    /// `true` when the value lies on one of the axes (`ℤ ∪ iℤ`).
    pub fn is_axial(&self) -> bool {
        self.re.is_zero() || self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussInt::new(self.re.clone(), -self.im.clone())
    }

    /// `re² + im²`.
    pub fn norm(&self) -> T {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }

    pub fn scale(&self, k: &T) -> Self {
        GaussInt::new(self.re.clone() * k.clone(), self.im.clone() * k.clone())
    }

    pub fn mul_unit(&self, u: Unit) -> Self {
        match u {
            Unit::One => self.clone(),
            Unit::I => GaussInt::new(-self.im.clone(), self.re.clone()),
            Unit::MinusOne => GaussInt::new(-self.re.clone(), -self.im.clone()),
            Unit::MinusI => GaussInt::new(self.im.clone(), -self.re.clone()),
        }
    }

    /// If `self` is a unit, which one.
    pub fn as_unit(&self) -> Option<Unit> {
        [Unit::One, Unit::I, Unit::MinusOne, Unit::MinusI]
            .into_iter()
            .find(|u| &u.to_gauss::<T>() == self)
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = GaussInt::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Returns `(u, c)` with `c = u·self` the canonical associate
    /// (`re > 0, im ≥ 0`); zero maps to `(1, 0)`.
    pub fn canonical_associate(&self) -> (Unit, Self) {
        let (a, b) = (&self.re, &self.im);
        let zero = T::zero();
        let u = if self.is_zero() || (*a > zero && *b >= zero) {
            Unit::One
        } else if *a <= zero && *b > zero {
            Unit::MinusI
        } else if *a < zero && *b <= zero {
            Unit::MinusOne
        } else {
            Unit::I
        };
        (u, self.mul_unit(u))
    }

    pub fn canonical(&self) -> Self {
        self.canonical_associate().1
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical_associate().0 == Unit::One
    }

    pub fn is_associate(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }

    /// Euclidean division `self = q·b + r` with `N(r) < N(b)`.
    ///
    /// Each component of `self·conj(b)/N(b)` is rounded to the nearest
    /// integer, ties going toward `+∞`.
    pub fn div_rem_euclid(&self, b: &Self) -> Result<(Self, Self)> {
        if b.is_zero() {
            return Err(Error::domain("Euclidean division by zero"));
        }
        let n = b.norm();
        let prod = self * &b.conj();
        let two_n = two::<T>() * n.clone();
        let round = |x: T| (two::<T>() * x + n.clone()).div_floor(&two_n);
        let q = GaussInt::new(round(prod.re), round(prod.im));
        let r = self - &(&q * b);
        Ok((q, r))
    }

    pub fn rem_euclid(&self, b: &Self) -> Result<Self> {
        Ok(self.div_rem_euclid(b)?.1)
    }

    /// `Some(self / d)` when `d` divides `self` exactly.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        let n = d.norm();
        let prod = self * &d.conj();
        let (qr, rr) = prod.re.div_rem(&n);
        let (qi, ri) = prod.im.div_rem(&n);
        (rr.is_zero() && ri.is_zero()).then(|| GaussInt::new(qr, qi))
    }

    /// `true` when `d | self`. Zero divides only zero.
    pub fn is_divisible_by(&self, d: &Self) -> bool {
        if d.is_zero() {
            return self.is_zero();
        }
        self.exact_div(d).is_some()
    }

    /// Canonical greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::domain("gcd(0, 0) is undefined"));
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem_euclid(&b)?;
            a = b;
            b = r;
        }
        Ok(a.canonical())
    }

    /// Canonical least common multiple; `lcm(0, x) = 0`.
    pub fn lcm(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return GaussInt::zero();
        }
        let g = self.gcd(other).expect("operands are nonzero");
        (self * &other.exact_div(&g).expect("gcd divides")).canonical()
    }

    pub fn is_coprime(&self, other: &Self) -> bool {
        self.gcd(other).map(|g| g.is_one()).unwrap_or(false)
    }

    /// Parse a literal such as `3`, `-2+i`, `4i`, `(1-3i)`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut p = Parser::new(text);
        let z = p.term()?;
        p.finish()?;
        Ok(z)
    }
}

impl<T: Scalar> Add for &GaussInt<T> {
    type Output = GaussInt<T>;
    fn add(self, rhs: &GaussInt<T>) -> GaussInt<T> {
        GaussInt::new(
            self.re.clone() + rhs.re.clone(),
            self.im.clone() + rhs.im.clone(),
        )
    }
}

impl<T: Scalar> Sub for &GaussInt<T> {
    type Output = GaussInt<T>;
    fn sub(self, rhs: &GaussInt<T>) -> GaussInt<T> {
        GaussInt::new(
            self.re.clone() - rhs.re.clone(),
            self.im.clone() - rhs.im.clone(),
        )
    }
}

impl<T: Scalar> Mul for &GaussInt<T> {
    type Output = GaussInt<T>;
    fn mul(self, rhs: &GaussInt<T>) -> GaussInt<T> {
        let (a, b, c, d) = (&self.re, &self.im, &rhs.re, &rhs.im);
        GaussInt::new(
            a.clone() * c.clone() - b.clone() * d.clone(),
            a.clone() * d.clone() + b.clone() * c.clone(),
        )
    }
}

impl<T: Scalar> Neg for &GaussInt<T> {
    type Output = GaussInt<T>;
    fn neg(self) -> GaussInt<T> {
        GaussInt::new(-self.re.clone(), -self.im.clone())
    }
}

macro_rules! forward_owned {
    ($ty:ident, $($tr:ident $m:ident),*) => {$(
        impl<T: Scalar> $tr for $ty<T> {
            type Output = $ty<T>;
            fn $m(self, rhs: $ty<T>) -> $ty<T> {
                (&self).$m(&rhs)
            }
        }
        impl<T: Scalar> $tr<&$ty<T>> for $ty<T> {
            type Output = $ty<T>;
            fn $m(self, rhs: &$ty<T>) -> $ty<T> {
                (&self).$m(rhs)
            }
        }
    )*};
}

forward_owned!(GaussInt, Add add, Sub sub, Mul mul);

impl<T: Scalar> Neg for GaussInt<T> {
    type Output = GaussInt<T>;
    fn neg(self) -> GaussInt<T> {
        -&self
    }
}

impl<T: Scalar> fmt::Display for GaussInt<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = (&self.re, &self.im);
        let imag = |f: &mut fmt::Formatter<'_>, v: &T| {
            if v.abs().is_one() {
                write!(f, "i")
            } else {
                write!(f, "{}i", v.abs())
            }
        };
        if im.is_zero() {
            return write!(f, "{re}");
        }
        if !re.is_zero() {
            write!(f, "{re}")?;
            f.write_str(if im.is_negative() { "-" } else { "+" })?;
        } else if im.is_negative() {
            f.write_str("-")?;
        }
        imag(f, im)
    }
}

/// An exact Gaussian rational in canonical form: `den` is a canonical
/// associate and `gcd(num, den)` is a unit. Zero is `0/1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussRat<T> {
    num: GaussInt<T>,
    den: GaussInt<T>,
}

impl<T: Scalar> GaussRat<T> {
    pub fn new(num: GaussInt<T>, den: GaussInt<T>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::domain("zero denominator"));
        }
        if num.is_zero() {
            return Ok(GaussRat::zero());
        }
        let g = num.gcd(&den)?;
        let num = num.exact_div(&g).expect("gcd divides numerator");
        let den = den.exact_div(&g).expect("gcd divides denominator");
        let (u, den) = den.canonical_associate();
        Ok(GaussRat {
            num: num.mul_unit(u),
            den,
        })
    }

    pub fn from_int(z: GaussInt<T>) -> Self {
        GaussRat {
            num: z,
            den: GaussInt::one(),
        }
    }

    pub fn zero() -> Self {
        GaussRat::from_int(GaussInt::zero())
    }

    pub fn one() -> Self {
        GaussRat::from_int(GaussInt::one())
    }

    pub fn num(&self) -> &GaussInt<T> {
        &self.num
    }

    pub fn den(&self) -> &GaussInt<T> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    /// `|z|²` as an exact rational.
    pub fn abs_sq(&self) -> Ratio<T> {
        Ratio::new(self.num.norm(), self.den.norm())
    }

    /// Real and imaginary parts as exact rationals.
    pub fn re_im(&self) -> (Ratio<T>, Ratio<T>) {
        let n = self.den.norm();
        let p = &self.num * &self.den.conj();
        (Ratio::new(p.re, n.clone()), Ratio::new(p.im, n))
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        let (re, im) = self.re_im();
        let f = |r: Ratio<T>| {
            r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
        };
        (f(re), f(im))
    }

    pub fn recip(&self) -> Result<Self> {
        GaussRat::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::domain("division by zero"));
        }
        GaussRat::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    /// Parse `w`, `w/v`, `(w)/(v)` where `w`, `v` are Gaussian literals.
    pub fn parse(text: &str) -> Result<Self> {
        let mut p = Parser::new(text);
        let num = p.term()?;
        let den = if p.eat('/') {
            let at = p.pos;
            let d = p.term()?;
            if d.is_zero() {
                return Err(Error::parse(at, "zero denominator"));
            }
            d
        } else {
            GaussInt::one()
        };
        p.finish()?;
        GaussRat::new(num, den)
    }
}

impl<T: Scalar> From<GaussInt<T>> for GaussRat<T> {
    fn from(z: GaussInt<T>) -> Self {
        GaussRat::from_int(z)
    }
}

impl<T: Scalar> Add for &GaussRat<T> {
    type Output = GaussRat<T>;
    fn add(self, rhs: &GaussRat<T>) -> GaussRat<T> {
        if self.den == rhs.den {
            return GaussRat::new(&self.num + &rhs.num, self.den.clone()).expect("nonzero den");
        }
        GaussRat::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .expect("nonzero den")
    }
}

impl<T: Scalar> Sub for &GaussRat<T> {
    type Output = GaussRat<T>;
    fn sub(self, rhs: &GaussRat<T>) -> GaussRat<T> {
        self + &(-rhs)
    }
}

impl<T: Scalar> Mul for &GaussRat<T> {
    type Output = GaussRat<T>;
    fn mul(self, rhs: &GaussRat<T>) -> GaussRat<T> {
        GaussRat::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero den")
    }
}

impl<T: Scalar> Neg for &GaussRat<T> {
    type Output = GaussRat<T>;
    fn neg(self) -> GaussRat<T> {
        GaussRat {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

forward_owned!(GaussRat, Add add, Sub sub, Mul mul);

impl<T: Scalar> Neg for GaussRat<T> {
    type Output = GaussRat<T>;
    fn neg(self) -> GaussRat<T> {
        -&self
    }
}

impl<T: Scalar> fmt::Display for GaussRat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let compound = |z: &GaussInt<T>| !z.re.is_zero() && !z.im.is_zero();
        if compound(&self.num) {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        if compound(&self.den) {
            write!(f, "/({})", self.den)
        } else {
            write!(f, "/{}", self.den)
        }
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser { text, pos: 0 }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn finish(&mut self) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(Error::parse(self.pos, format!("unexpected character '{c}'"))),
        }
    }

    fn term<T: Scalar>(&mut self) -> Result<GaussInt<T>> {
        if self.eat('(') {
            let z = self.gauss()?;
            if !self.eat(')') {
                return Err(Error::parse(self.pos, "expected ')'"));
            }
            Ok(z)
        } else {
            self.gauss()
        }
    }

    /// `[sign] part [sign part]` where `part = digits | digits 'i' | 'i'`.
    fn gauss<T: Scalar>(&mut self) -> Result<GaussInt<T>> {
        let first_neg = self.sign();
        let (v1, imag1) = self.part::<T>()?;
        let v1 = if first_neg { -v1 } else { v1 };
        self.skip_ws();
        let sign_pos = self.pos;
        let second_neg = match self.peek() {
            Some('+') | Some('-') => self.sign(),
            _ => {
                return Ok(if imag1 {
                    GaussInt::new(T::zero(), v1)
                } else {
                    GaussInt::from_int(v1)
                })
            }
        };
        if imag1 {
            return Err(Error::parse(sign_pos, "real part must come before the imaginary part"));
        }
        let part_pos = self.pos;
        let (v2, imag2) = self.part::<T>()?;
        if !imag2 {
            return Err(Error::parse(part_pos, "second term must be imaginary"));
        }
        Ok(GaussInt::new(v1, if second_neg { -v2 } else { v2 }))
    }

    fn sign(&mut self) -> bool {
        self.skip_ws();
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                true
            }
            Some('+') => {
                self.pos += 1;
                false
            }
            _ => false,
        }
    }

    fn part<T: Scalar>(&mut self) -> Result<(T, bool)> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let digits = &self.text[start..self.pos];
        let imag = self.peek() == Some('i');
        if imag {
            self.pos += 1;
        }
        if digits.is_empty() {
            if imag {
                return Ok((T::one(), true));
            }
            return Err(Error::parse(start, "expected a number or 'i'"));
        }
        let v = from_decimal::<T>(digits).ok_or_else(|| Error::parse(start, "integer out of range"))?;
        Ok((v, imag))
    }
}
