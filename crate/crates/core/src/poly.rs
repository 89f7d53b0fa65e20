//! Multivariate polynomials as finite-support vectors on the monomial basis.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::finsupp::{Field, FinSuppVec, Index, Scalar};

/// `n (n-1) ... (n-k+1)`.
pub(crate) fn falling(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, j| acc * BigInt::from(n - j))
}

pub(crate) fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    falling(n, k) / falling(k, k)
}

/// A polynomial in `dims` variables over an exact field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    dims: usize,
    coeffs: FinSuppVec,
}

impl Polynomial {
    pub fn zero(dims: usize, field: Field) -> Self {
        Polynomial { dims, coeffs: FinSuppVec::zero(field) }
    }

    pub fn constant(dims: usize, c: Scalar) -> Self {
        Polynomial::monomial(vec![0; dims], c)
    }

    /// `c · x^exps`.
    pub fn monomial(exps: Vec<u32>, c: Scalar) -> Self {
        let dims = exps.len();
        let field = c.field();
        let coeffs = FinSuppVec::from_entries(field, [(Index::Tuple(exps), c)]).expect("own field");
        Polynomial { dims, coeffs }
    }

    /// The coordinate function `x_j` (zero-based `j`).
    pub fn var(dims: usize, j: usize, field: Field) -> Self {
        let mut e = vec![0; dims];
        e[j] = 1;
        Polynomial::monomial(e, field.one())
    }

    /// Wraps a vector whose indices are all exponent tuples of length `dims`.
    pub fn from_vec(dims: usize, coeffs: FinSuppVec) -> Result<Self> {
        for k in coeffs.entries().keys() {
            match k {
                Index::Tuple(t) if t.len() == dims => {}
                Index::Tuple(t) => {
                    return Err(Error::DimensionMismatch { expected: dims, found: t.len() })
                }
                Index::Atom(a) => {
                    return Err(Error::Invalid(format!("`{a}` is not a monomial index")))
                }
            }
        }
        Ok(Polynomial { dims, coeffs })
    }

    pub fn from_terms<I>(dims: usize, field: Field, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Scalar)>,
    {
        let v = FinSuppVec::from_entries(field, terms.into_iter().map(|(e, c)| (Index::Tuple(e), c)))?;
        Polynomial::from_vec(dims, v)
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn field(&self) -> Field {
        self.coeffs.field()
    }

    pub fn as_vec(&self) -> &FinSuppVec {
        &self.coeffs
    }

    pub fn into_vec(self) -> FinSuppVec {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    /// Nonzero terms in graded order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Scalar)> {
        self.coeffs
            .entries()
            .iter()
            .map(|(k, c)| (k.as_tuple().expect("monomial index"), c))
    }

    pub fn coeff(&self, exps: &[u32]) -> Scalar {
        self.coeffs.coeff(&Index::Tuple(exps.to_vec()))
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.max_degree()
    }

    pub fn coerce(&self, field: Field) -> Result<Self> {
        Ok(Polynomial { dims: self.dims, coeffs: self.coeffs.coerce(field)? })
    }

    fn joined(&self, other: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch { expected: self.dims, found: other.dims });
        }
        let field = self.field().join(other.field())?;
        Ok((self.coerce(field)?, other.coerce(field)?))
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        let (a, b) = self.joined(other)?;
        Ok(Polynomial { dims: a.dims, coeffs: &a.coeffs + &b.coeffs })
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        let (a, b) = self.joined(other)?;
        let mut out = FinSuppVec::zero(a.field());
        for (ea, ca) in a.terms() {
            for (eb, cb) in b.terms() {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_at(Index::Tuple(e), &(ca * cb));
            }
        }
        Ok(Polynomial { dims: a.dims, coeffs: out })
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        let field = self.field().join(c.field()).unwrap_or_else(|e| panic!("{e}"));
        let p = self.coerce(field).expect("joined field");
        Polynomial { dims: self.dims, coeffs: p.coeffs.scale(c).expect("joined field") }
    }

    /// `∂^alpha p`.
    pub fn derivative(&self, alpha: &[u32]) -> Polynomial {
        let field = self.field();
        let mut out = FinSuppVec::zero(field);
        for (e, c) in self.terms() {
            if e.iter().zip(alpha).any(|(x, a)| x < a) {
                continue;
            }
            let factor = e
                .iter()
                .zip(alpha)
                .fold(BigInt::one(), |acc, (&x, &a)| acc * falling(x, a));
            let lowered: Vec<u32> = e.iter().zip(alpha).map(|(x, a)| x - a).collect();
            out.add_at(Index::Tuple(lowered), &(c * &field.from_bigint(&factor)));
        }
        Polynomial { dims: self.dims, coeffs: out }
    }

    /// `x^gamma · p`.
    pub fn mul_monomial(&self, gamma: &[u32]) -> Polynomial {
        let entries = self.terms().map(|(e, c)| {
            let raised: Vec<u32> = e.iter().zip(gamma).map(|(x, g)| x + g).collect();
            (Index::Tuple(raised), c.clone())
        });
        let coeffs = FinSuppVec::from_entries(self.field(), entries).expect("own field");
        Polynomial { dims: self.dims, coeffs }
    }

    /// `x ↦ p(x + h)`.
    pub fn translate(&self, h: &[Scalar]) -> Result<Polynomial> {
        if h.len() != self.dims {
            return Err(Error::DimensionMismatch { expected: self.dims, found: h.len() });
        }
        let mut field = self.field();
        for c in h {
            field = field.join(c.field())?;
        }
        let mut out = Polynomial::zero(self.dims, field);
        for (e, c) in self.terms() {
            let mut term = Polynomial::constant(self.dims, c.coerce(field)?);
            for (j, &k) in e.iter().enumerate() {
                // (x_j + h_j)^k by the binomial theorem
                let hj = h[j].coerce(field)?;
                let factor = Polynomial::from_terms(
                    self.dims,
                    field,
                    (0..=k).map(|m| {
                        let mut ex = vec![0; self.dims];
                        ex[j] = m;
                        (ex, &field.from_bigint(&binomial(k, m)) * &hj.pow(k - m))
                    }),
                )?;
                term = term.try_mul(&factor)?;
            }
            out = out.try_add(&term)?;
        }
        Ok(out)
    }

    /// `x ↦ p(−x)`.
    pub fn reflect(&self) -> Polynomial {
        let entries = self.terms().map(|(e, c)| {
            let deg: u32 = e.iter().sum();
            let c = if deg % 2 == 1 { -c } else { c.clone() };
            (Index::Tuple(e.to_vec()), c)
        });
        let coeffs = FinSuppVec::from_entries(self.field(), entries).expect("own field");
        Polynomial { dims: self.dims, coeffs }
    }

    /// Evaluates at a point.
    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        let mut acc = self.field().zero();
        for (e, c) in self.terms() {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                t = &t * &x.pow(k);
            }
            acc = &acc + &t;
        }
        acc
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(&-rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { dims: self.dims, coeffs: -&self.coeffs }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

/// Sign and magnitude text of a coefficient, in a form the operator parser reads back.
fn coefficient_text(c: &Scalar) -> (bool, String) {
    use num_traits::{Signed, Zero};
    fn imaginary(im: &BigRational) -> String {
        if im.abs().is_one() {
            "i".into()
        } else {
            format!("{}*i", im.abs())
        }
    }
    match c {
        Scalar::Rational(q) => (q.is_negative(), q.abs().to_string()),
        Scalar::Gaussian(g) if g.im.is_zero() => (g.re.is_negative(), g.re.abs().to_string()),
        Scalar::Gaussian(g) if g.re.is_zero() => (g.im.is_negative(), imaginary(&g.im)),
        Scalar::Gaussian(g) => {
            let op = if g.im.is_negative() { '-' } else { '+' };
            (false, format!("({}{op}{})", g.re, imaginary(&g.im)))
        }
        Scalar::Prime(r) => (false, r.value().to_string()),
    }
}

/// Writes one signed term `c*f1*f2…`; shared with differential operators.
pub(crate) fn write_term(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    c: &Scalar,
    factors: &[String],
) -> fmt::Result {
    let (neg, mag) = coefficient_text(c);
    match (first, neg) {
        (true, true) => f.write_str("-")?,
        (false, true) => f.write_str(" - ")?,
        (false, false) => f.write_str(" + ")?,
        (true, false) => {}
    }
    if factors.is_empty() {
        return f.write_str(&mag);
    }
    if mag != "1" {
        write!(f, "{mag}*")?;
    }
    f.write_str(&factors.join("*"))
}

pub(crate) fn power_factors(prefix: &str, exps: &[u32]) -> Vec<String> {
    exps.iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(j, &k)| if k == 1 { format!("{prefix}{}", j + 1) } else { format!("{prefix}{}^{k}", j + 1) })
        .collect()
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, (e, c)) in self.terms().enumerate() {
            write_term(f, n == 0, c, &power_factors("x", e))?;
        }
        Ok(())
    }
}
