//! Exact complex rationals.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A complex number `re + i·im` with arbitrary-precision rational parts.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    re: BigRational,
    im: BigRational,
}

impl Scalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Self { re, im: BigRational::zero() }
    }

    pub fn int(n: i64) -> Self {
        Self::real(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::real(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn complex(re: (i64, i64), im: (i64, i64)) -> Self {
        Self { re: BigRational::new(re.0.into(), re.1.into()), im: BigRational::new(im.0.into(), im.1.into()) }
    }

    pub fn i() -> Self {
        Self { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -&self.im }
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.im.is_zero() {
            return Some(Self::real(self.re.recip()));
        }
        let norm = &self.re * &self.re + &self.im * &self.im;
        Some(Self { re: &self.re / &norm, im: -(&self.im / &norm) })
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }

    pub fn modulus(&self) -> f64 {
        let (re, im) = self.to_f64_pair();
        re.hypot(im)
    }

    /// Closest exact value to a finite float, used only for reporting.
    pub fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(Self::real)
    }

    pub fn scale_int(&self, n: i64) -> Self {
        let n = BigRational::from_integer(BigInt::from(n));
        Self { re: &self.re * &n, im: &self.im * &n }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Canonical text: `p/q` for reals, `(a+bi)` otherwise.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(f, "({}{}{}i)", self.re, sign, self.im.abs())
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Self::int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Self::real(r)
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        Scalar { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.re += &rhs.re;
        if !rhs.im.is_zero() {
            self.im += &rhs.im;
        }
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        *self += &rhs;
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.re -= &rhs.re;
        if !rhs.im.is_zero() {
            self.im -= &rhs.im;
        }
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self.im.is_zero(), rhs.im.is_zero()) {
            (true, true) => Scalar::real(&self.re * &rhs.re),
            (true, false) => Scalar { re: &self.re * &rhs.re, im: &self.re * &rhs.im },
            (false, true) => Scalar { re: &self.re * &rhs.re, im: &self.im * &rhs.re },
            (false, false) => {
                Scalar { re: &self.re * &rhs.re - &self.im * &rhs.im, im: &self.re * &rhs.im + &self.im * &rhs.re }
            }
        }
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl Div<&Scalar> for &Scalar {
    type Output = Scalar;
    /// Panics on division by zero, like integer division.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.recip().expect("division by zero scalar")
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re, im: -self.im }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -&self.re, im: -&self.im }
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        let mut acc = Scalar::zero();
        for x in iter {
            acc += &x;
        }
        acc
    }
}

/// JSON form of one rational: `["numerator", "denominator"]`.
fn ratio_to_pair(r: &BigRational) -> [String; 2] {
    [r.numer().to_string(), r.denom().to_string()]
}

fn pair_to_ratio(pair: &[String; 2]) -> Result<BigRational, String> {
    let num: BigInt = pair[0].parse().map_err(|e| format!("bad numerator {:?}: {e}", pair[0]))?;
    let den: BigInt = pair[1].parse().map_err(|e| format!("bad denominator {:?}: {e}", pair[1]))?;
    if den.is_zero() {
        return Err("zero denominator".into());
    }
    Ok(BigRational::new(num, den))
}

#[derive(Serialize, Deserialize)]
struct ScalarJson {
    re: [String; 2],
    im: [String; 2],
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ScalarJson { re: ratio_to_pair(&self.re), im: ratio_to_pair(&self.im) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = ScalarJson::deserialize(d)?;
        let re = pair_to_ratio(&raw.re).map_err(serde::de::Error::custom)?;
        let im = pair_to_ratio(&raw.im).map_err(serde::de::Error::custom)?;
        Ok(Scalar { re, im })
    }
}

/// Parses `3`, `-3/4`, `2/3i`, `(1/2-3i)`, `i`, `-i`.
pub fn parse_scalar(text: &str) -> Option<Scalar> {
    let t = text.trim();
    if let Some(inner) = t.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
        let inner = inner.trim();
        // split at the last sign that is not the leading one
        let split = inner.char_indices().skip(1).filter(|&(_, c)| c == '+' || c == '-').map(|(i, _)| i).last();
        return match split {
            Some(i) => {
                let re = parse_scalar(&inner[..i])?;
                let im = parse_scalar(&inner[i..])?;
                (re.is_real() && im.re.is_zero()).then(|| &re + &im)
            }
            None => parse_scalar(inner),
        };
    }
    if let Some(body) = t.strip_suffix('i') {
        let body = body.trim();
        let coeff = match body {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            _ => parse_rational(body)?,
        };
        return Some(Scalar { re: BigRational::zero(), im: coeff });
    }
    parse_rational(t).map(Scalar::real)
}

pub fn parse_rational(text: &str) -> Option<BigRational> {
    let t = text.trim().strip_prefix('+').unwrap_or(text.trim());
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let ok = |s: &str| {
        let digits = s.strip_prefix('-').unwrap_or(s);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !ok(num) || !ok(den) {
        return None;
    }
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num.parse().ok()?, den))
}
