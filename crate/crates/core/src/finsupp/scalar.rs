//! Exact scalars: rationals, Gaussian rationals and prime-field residues.
//!
//! Every value knows which field it lives in. Binary operations coerce along
//! the inclusions Q ⊂ Q(i) and Q → GF(p) (the latter only when the
//! denominator is invertible mod p); any other combination is a programming
//! error and panics. Container types ([`FinSuppVec`](super::FinSuppVec),
//! [`DiffOp`](crate::diffops::DiffOp), ...) validate fields up front and
//! report [`Error::MixedFields`] instead.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A prime modulus, checked at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modulus(u64);

impl Modulus {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Modulus(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

/// Deterministic Miller–Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// The field a scalar (or a container of scalars) lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    /// ℚ
    Rational,
    /// ℚ(i)
    Gaussian,
    /// GF(p)
    Prime(Modulus),
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        Modulus::new(p).map(Field::Prime)
    }

    /// Smallest field containing both, along Q ⊂ Q(i) and Q → GF(p).
    pub fn join(self, other: Field) -> Result<Field> {
        use Field::*;
        match (self, other) {
            (a, b) if a == b => Ok(a),
            (Rational, b) => Ok(b),
            (a, Rational) => Ok(a),
            (a, b) => Err(Error::MixedFields(a.to_string(), b.to_string())),
        }
    }

    pub fn zero(self) -> Scalar {
        self.from_int(0)
    }

    pub fn one(self) -> Scalar {
        self.from_int(1)
    }

    pub fn from_int(self, n: i64) -> Scalar {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(self, n: &BigInt) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(n.clone())),
            Field::Gaussian => Scalar::Gaussian(Gaussian::new(
                BigRational::from_integer(n.clone()),
                BigRational::zero(),
            )),
            Field::Prime(p) => Scalar::Prime(Residue::reduce_bigint(n, p)),
        }
    }

    pub fn from_rational(self, q: &BigRational) -> Result<Scalar> {
        Scalar::Rational(q.clone()).coerce(self)
    }

    /// `i` in ℚ(i); other fields have no square root of −1 by construction.
    pub fn imaginary_unit(self) -> Result<Scalar> {
        match self {
            Field::Gaussian => Ok(Scalar::Gaussian(Gaussian::new(
                BigRational::zero(),
                BigRational::one(),
            ))),
            f => Err(Error::NotRepresentable("i".into(), f.to_string())),
        }
    }

    /// Parses `Q`, `Qi`, `GF(p)` or `GF:p`.
    pub fn parse(text: &str) -> Result<Field> {
        let t = text.trim();
        match t {
            "Q" => Ok(Field::Rational),
            "Qi" | "Q(i)" => Ok(Field::Gaussian),
            _ => {
                let digits = t
                    .strip_prefix("GF(")
                    .and_then(|r| r.strip_suffix(')'))
                    .or_else(|| t.strip_prefix("GF:"))
                    .ok_or_else(|| Error::Invalid(format!("unknown field `{t}`")))?;
                let p: u64 = digits
                    .trim()
                    .parse()
                    .map_err(|_| Error::Invalid(format!("bad modulus in `{t}`")))?;
                Field::prime(p)
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Gaussian => write!(f, "Qi"),
            Field::Prime(p) => write!(f, "GF({})", p.0),
        }
    }
}

impl FromStr for Field {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Field::parse(s)
    }
}

/// `re + im·i` with rational parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gaussian {
    pub re: BigRational,
    pub im: BigRational,
}

impl Gaussian {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Gaussian { re, im }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn add(&self, o: &Gaussian) -> Gaussian {
        Gaussian::new(&self.re + &o.re, &self.im + &o.im)
    }

    fn sub(&self, o: &Gaussian) -> Gaussian {
        Gaussian::new(&self.re - &o.re, &self.im - &o.im)
    }

    fn mul(&self, o: &Gaussian) -> Gaussian {
        Gaussian::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }

    fn inv(&self) -> Option<Gaussian> {
        let norm = &self.re * &self.re + &self.im * &self.im;
        if norm.is_zero() {
            return None;
        }
        Some(Gaussian::new(&self.re / &norm, -&self.im / &norm))
    }
}

/// A residue class mod a checked prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: Modulus,
}

impl Residue {
    pub fn new(value: u64, modulus: Modulus) -> Self {
        Residue { value: value % modulus.0, modulus }
    }

    fn reduce_bigint(n: &BigInt, p: Modulus) -> Self {
        let r = n.mod_floor(&BigInt::from(p.0));
        Residue::new(r.to_u64().expect("residue fits in u64"), p)
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> Modulus {
        self.modulus
    }

    fn add(self, o: Residue) -> Residue {
        let p = self.modulus.0 as u128;
        Residue::new(((self.value as u128 + o.value as u128) % p) as u64, self.modulus)
    }

    fn neg(self) -> Residue {
        Residue::new((self.modulus.0 - self.value) % self.modulus.0, self.modulus)
    }

    fn mul(self, o: Residue) -> Residue {
        Residue::new(mul_mod(self.value, o.value, self.modulus.0), self.modulus)
    }

    fn inv(self) -> Option<Residue> {
        if self.value == 0 {
            None
        } else {
            let p = self.modulus.0;
            Some(Residue::new(pow_mod(self.value, p - 2, p), self.modulus))
        }
    }
}

/// An exact field element.
#[derive(Debug, Clone)]
pub enum Scalar {
    Rational(BigRational),
    Gaussian(Gaussian),
    Prime(Residue),
}

impl Scalar {
    pub fn rational(n: i64, d: i64) -> Scalar {
        Scalar::Rational(BigRational::new(n.into(), d.into()))
    }

    pub fn integer(n: i64) -> Scalar {
        Scalar::Rational(BigRational::from_integer(n.into()))
    }

    pub fn gaussian(re: BigRational, im: BigRational) -> Scalar {
        Scalar::Gaussian(Gaussian::new(re, im))
    }

    pub fn residue(value: u64, p: u64) -> Result<Scalar> {
        Ok(Scalar::Prime(Residue::new(value, Modulus::new(p)?)))
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Gaussian(_) => Field::Gaussian,
            Scalar::Prime(r) => Field::Prime(r.modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Gaussian(g) => g.is_zero(),
            Scalar::Prime(r) => r.value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Gaussian(g) => g.re.is_one() && g.im.is_zero(),
            Scalar::Prime(r) => r.value == 1,
        }
    }

    /// Maps the value into `field`, failing when there is no image
    /// (a non-real Gaussian into ℚ, a denominator divisible by p, ...).
    pub fn coerce(&self, field: Field) -> Result<Scalar> {
        let fail = || Error::NotRepresentable(self.to_string(), field.to_string());
        match (self, field) {
            (Scalar::Rational(_), Field::Rational)
            | (Scalar::Gaussian(_), Field::Gaussian) => Ok(self.clone()),
            (Scalar::Prime(r), Field::Prime(p)) if r.modulus == p => Ok(self.clone()),
            (Scalar::Rational(q), Field::Gaussian) => {
                Ok(Scalar::gaussian(q.clone(), BigRational::zero()))
            }
            (Scalar::Rational(q), Field::Prime(p)) => {
                let num = Residue::reduce_bigint(q.numer(), p);
                let den = Residue::reduce_bigint(q.denom(), p).inv().ok_or_else(fail)?;
                Ok(Scalar::Prime(num.mul(den)))
            }
            (Scalar::Gaussian(g), _) if g.im.is_zero() => {
                Scalar::Rational(g.re.clone()).coerce(field)
            }
            _ => Err(fail()),
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(q) if !q.is_zero() => Some(Scalar::Rational(q.recip())),
            Scalar::Rational(_) => None,
            Scalar::Gaussian(g) => g.inv().map(Scalar::Gaussian),
            Scalar::Prime(r) => r.inv().map(Scalar::Prime),
        }
    }

    /// Complex conjugation on ℚ(i); the identity on ℚ and on GF(p).
    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Gaussian(g) => Scalar::gaussian(g.re.clone(), -&g.im),
            s => s.clone(),
        }
    }

    pub fn pow(&self, exp: u32) -> Scalar {
        let mut acc = self.field().one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// The rational value, if the scalar is (or embeds as) a rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            Scalar::Rational(q) => Some(q.clone()),
            Scalar::Gaussian(g) if g.im.is_zero() => Some(g.re.clone()),
            _ => None,
        }
    }

    /// Parses a scalar string into `field`: `p/q`, `a/b+c/di`, `i`, or an
    /// integer residue for prime fields.
    pub fn parse(text: &str, field: Field) -> Result<Scalar> {
        let s: Scalar = text.parse()?;
        s.coerce(field)
    }

    fn binary(
        &self,
        other: &Scalar,
        rat: impl Fn(&BigRational, &BigRational) -> BigRational,
        gauss: impl Fn(&Gaussian, &Gaussian) -> Gaussian,
        prime: impl Fn(Residue, Residue) -> Residue,
    ) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(rat(a, b)),
            (Scalar::Gaussian(a), Scalar::Gaussian(b)) => Scalar::Gaussian(gauss(a, b)),
            (Scalar::Prime(a), Scalar::Prime(b)) if a.modulus == b.modulus => {
                Scalar::Prime(prime(*a, *b))
            }
            _ => {
                let field = self
                    .field()
                    .join(other.field())
                    .unwrap_or_else(|e| panic!("scalar arithmetic: {e}"));
                let a = self.coerce(field).unwrap_or_else(|e| panic!("{e}"));
                let b = other.coerce(field).unwrap_or_else(|e| panic!("{e}"));
                a.binary(&b, rat, gauss, prime)
            }
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a == b,
            (Scalar::Gaussian(a), Scalar::Gaussian(b)) => a == b,
            (Scalar::Prime(a), Scalar::Prime(b)) => a == b,
            (Scalar::Rational(a), Scalar::Gaussian(g)) | (Scalar::Gaussian(g), Scalar::Rational(a)) => {
                g.im.is_zero() && &g.re == a
            }
            _ => false,
        }
    }
}

impl Eq for Scalar {}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.binary(rhs, |a, b| a + b, Gaussian::add, Residue::add)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.binary(rhs, |a, b| a - b, Gaussian::sub, |a, b| a.add(b.neg()))
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.binary(rhs, |a, b| a * b, Gaussian::mul, Residue::mul)
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    /// Panics on division by zero.
    fn div(self, rhs: &Scalar) -> Scalar {
        let inv = rhs.inv().expect("division by zero scalar");
        self * &inv
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q),
            Scalar::Gaussian(g) => Scalar::gaussian(-&g.re, -&g.im),
            Scalar::Prime(r) => Scalar::Prime(r.neg()),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, q: &BigRational) -> fmt::Result {
    if q.denom().is_one() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Scalar {
    /// `p/q` for rationals, `a/b+c/di` for Gaussian rationals, the residue
    /// for prime-field elements.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write_rational(f, q),
            Scalar::Gaussian(g) => {
                write_rational(f, &g.re)?;
                f.write_str(if g.im.is_negative() { "-" } else { "+" })?;
                write_rational(f, &g.im.abs())?;
                f.write_str("i")
            }
            Scalar::Prime(r) => write!(f, "{}", r.value),
        }
    }
}

fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::Invalid(format!("bad rational `{text}`"));
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n, d),
        None => (t, "1"),
    };
    let n: BigInt = n.trim().trim_start_matches('+').parse().map_err(|_| bad())?;
    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

impl FromStr for Scalar {
    type Err = Error;

    /// Strings ending in `i` are Gaussian, everything else rational.
    fn from_str(text: &str) -> Result<Scalar> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(body) = t.strip_suffix('i') else {
            return parse_rational(&t).map(Scalar::Rational);
        };
        let split = body
            .char_indices()
            .filter(|&(k, c)| k > 0 && (c == '+' || c == '-'))
            .map(|(k, _)| k)
            .last();
        let (re, im) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im = match im {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            s => parse_rational(s)?,
        };
        Ok(Scalar::gaussian(parse_rational(re)?, im))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small_and_large() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime(18_446_744_073_709_551_557)); // largest u64 prime
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2, 3, 5, 7
        assert!(Field::prime(91).is_err());
    }

    #[test]
    fn field_axioms_on_samples() {
        let samples = [
            Scalar::rational(3, 7),
            Scalar::rational(-5, 2),
            "1/2-3/4i".parse().unwrap(),
            Scalar::residue(3, 7).unwrap(),
            Scalar::residue(6, 101).unwrap(),
        ];
        for a in &samples {
            let z = a.field().zero();
            assert_eq!(a + &(-a), z);
            assert_eq!(a * &a.inv().unwrap(), a.field().one());
        }
        assert!(Scalar::integer(0).inv().is_none());
    }

    #[test]
    fn display_and_parse() {
        let g: Scalar = "1/2-3/4i".parse().unwrap();
        assert_eq!(g.to_string(), "1/2-3/4i");
        assert_eq!("i".parse::<Scalar>().unwrap().to_string(), "0+1i");
        assert_eq!("-i".parse::<Scalar>().unwrap().to_string(), "0-1i");
        assert_eq!("-2/4".parse::<Scalar>().unwrap().to_string(), "-1/2");
        assert_eq!(Scalar::parse("-1", Field::prime(5).unwrap()).unwrap().to_string(), "4");
        assert!("1/0".parse::<Scalar>().is_err());
        assert_eq!(Field::parse("GF:7").unwrap().to_string(), "GF(7)");
    }

    #[test]
    fn coercions() {
        let gf5 = Field::prime(5).unwrap();
        assert_eq!(Scalar::rational(1, 2).coerce(gf5).unwrap().to_string(), "3");
        assert!(Scalar::rational(1, 5).coerce(gf5).is_err());
        let i: Scalar = "i".parse().unwrap();
        assert!(i.coerce(Field::Rational).is_err());
        assert_eq!(&i * &i, Scalar::integer(-1));
        assert_eq!(&Scalar::integer(2) + &i, "2+1i".parse().unwrap());
    }

    #[test]
    fn conjugation() {
        let z: Scalar = "2+3i".parse().unwrap();
        assert_eq!(z.conj(), "2-3i".parse().unwrap());
        let r = Scalar::residue(4, 7).unwrap();
        assert_eq!(r.conj(), r);
    }
}
