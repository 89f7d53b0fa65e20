//! Moment functionals of integrable functions and of parametric families.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Functional;
use crate::error::{Error, Result};
use crate::finsupp::{monomials_up_to, Field, Index, Scalar};
use crate::poly::Polynomial;

/// `num(n) / den(n)` with integer coefficients, lowest power first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFunction {
    num: Vec<BigInt>,
    den: Vec<BigInt>,
}

fn trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn horner(coeffs: &[BigInt], n: &BigRational) -> BigRational {
    coeffs
        .iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * n + BigRational::from_integer(c.clone()))
}

impl RationalFunction {
    pub fn new(num: Vec<BigInt>, den: Vec<BigInt>) -> Result<RationalFunction> {
        let den = trim(den);
        if den.is_empty() {
            return Err(Error::Invalid("denominator is identically zero".into()));
        }
        Ok(RationalFunction { num: trim(num), den })
    }

    pub fn constant(q: &BigRational) -> RationalFunction {
        RationalFunction { num: trim(vec![q.numer().clone()]), den: vec![q.denom().clone()] }
    }

    pub fn zero() -> RationalFunction {
        RationalFunction { num: Vec::new(), den: vec![BigInt::one()] }
    }

    pub fn numerator(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &[BigInt] {
        &self.den
    }

    /// Value at `n`; `None` where the denominator vanishes.
    pub fn eval(&self, n: &BigRational) -> Option<BigRational> {
        let d = horner(&self.den, n);
        if d.is_zero() {
            return None;
        }
        Some(horner(&self.num, n) / d)
    }

    /// `lim_{n→∞}`, decided by comparing degrees; `None` if it diverges.
    pub fn limit(&self) -> Option<BigRational> {
        let Some(lead) = self.num.last() else {
            return Some(BigRational::zero());
        };
        let (dn, dd) = (self.num.len(), self.den.len());
        match dn.cmp(&dd) {
            std::cmp::Ordering::Less => Some(BigRational::zero()),
            std::cmp::Ordering::Equal => Some(BigRational::new(lead.clone(), self.den[dd - 1].clone())),
            std::cmp::Ordering::Greater => None,
        }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn poly(f: &mut fmt::Formatter<'_>, c: &[BigInt]) -> fmt::Result {
            if c.is_empty() {
                return f.write_str("0");
            }
            let mut first = true;
            for (k, a) in c.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
                if !first {
                    f.write_str(if a.is_negative() { " - " } else { " + " })?;
                } else if a.is_negative() {
                    f.write_str("-")?;
                }
                first = false;
                let m = a.abs();
                match k {
                    0 => write!(f, "{m}")?,
                    1 if m.is_one() => f.write_str("n")?,
                    1 => write!(f, "{m}n")?,
                    _ if m.is_one() => write!(f, "n^{k}")?,
                    _ => write!(f, "{m}n^{k}")?,
                }
            }
            Ok(())
        }
        f.write_str("(")?;
        poly(f, &self.num)?;
        f.write_str(")/(")?;
        poly(f, &self.den)?;
        f.write_str(")")
    }
}

type MomentRule = dyn Fn(&[u32]) -> RationalFunction + Send + Sync;

/// A sequence of functionals `T_n` whose moments are rational in `n`.
#[derive(Clone)]
pub struct ParametricMomentFamily {
    dims: usize,
    rule: Arc<MomentRule>,
    label: String,
}

impl fmt::Debug for ParametricMomentFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParametricMomentFamily").field("dims", &self.dims).field("label", &self.label).finish()
    }
}

impl ParametricMomentFamily {
    pub fn new<F>(dims: usize, label: impl Into<String>, rule: F) -> ParametricMomentFamily
    where
        F: Fn(&[u32]) -> RationalFunction + Send + Sync + 'static,
    {
        ParametricMomentFamily { dims, rule: Arc::new(rule), label: label.into() }
    }

    /// The boxes `n·1_{[0,1/n]}` with moments `n^{−k}/(k+1)`.
    pub fn box_family() -> ParametricMomentFamily {
        ParametricMomentFamily::new(1, "box n·1[0,1/n]", |beta| {
            let k = beta[0] as usize;
            let mut den = vec![BigInt::zero(); k + 1];
            den[k] = BigInt::from(k + 1);
            RationalFunction::new(vec![BigInt::one()], den).expect("nonzero denominator")
        })
    }

    /// A family given by finitely many entries, zero elsewhere.
    pub fn from_entries(dims: usize, entries: Vec<(Vec<u32>, RationalFunction)>) -> Result<ParametricMomentFamily> {
        if let Some((b, _)) = entries.iter().find(|(b, _)| b.len() != dims) {
            return Err(Error::DimensionMismatch { expected: dims, found: b.len() });
        }
        let table: std::collections::BTreeMap<Index, RationalFunction> =
            entries.into_iter().map(|(b, r)| (Index::Tuple(b), r)).collect();
        Ok(ParametricMomentFamily::new(dims, "table", move |beta| {
            table.get(&Index::Tuple(beta.to_vec())).cloned().unwrap_or_else(RationalFunction::zero)
        }))
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn moment(&self, beta: &[u32]) -> RationalFunction {
        (self.rule)(beta)
    }

    /// The member `T_n`, known up to `horizon`.
    pub fn member(&self, n: &BigRational, horizon: u32) -> Result<Functional> {
        let mut entries = Vec::new();
        for beta in monomials_up_to(self.dims, horizon) {
            let value = self
                .moment(&beta)
                .eval(n)
                .ok_or_else(|| Error::Invalid(format!("moment {beta:?} is undefined at n = {n}")))?;
            entries.push((beta, Scalar::Rational(value)));
        }
        Ok(Functional::from_moments(self.dims, horizon, Field::Rational, entries)?
            .with_provenance(format!("{} at n = {n}", self.label)))
    }
}

/// The weak limit `lim T_n` on every monomial up to `horizon`.
///
/// Fails with [`Error::Divergent`] listing every multi-degree whose moment
/// has no finite limit.
pub fn weak_limit(family: &ParametricMomentFamily, horizon: u32) -> Result<Functional> {
    let mut entries = Vec::new();
    let mut divergent = Vec::new();
    for beta in monomials_up_to(family.dims, horizon) {
        match family.moment(&beta).limit() {
            Some(x) => entries.push((beta, Scalar::Rational(x))),
            None => divergent.push(beta),
        }
    }
    if !divergent.is_empty() {
        return Err(Error::Divergent(divergent));
    }
    Ok(Functional::from_moments(family.dims, horizon, Field::Rational, entries)?
        .with_provenance(format!("weak limit of {}", family.label)))
}

/// A polynomial on the closed interval `[a, b]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub a: BigRational,
    pub b: BigRational,
    pub poly: Polynomial,
}

/// A finite sum of polynomials supported on rational intervals.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PiecewisePolynomial {
    pieces: Vec<Piece>,
}

impl PiecewisePolynomial {
    pub fn new(pieces: Vec<Piece>) -> Result<PiecewisePolynomial> {
        for p in &pieces {
            if p.poly.dims() != 1 {
                return Err(Error::DimensionMismatch { expected: 1, found: p.poly.dims() });
            }
            if p.poly.field() != Field::Rational {
                return Err(Error::Invalid("piece coefficients must be rational".into()));
            }
            if p.a > p.b {
                return Err(Error::Invalid(format!("empty interval [{}, {}]", p.a, p.b)));
            }
        }
        Ok(PiecewisePolynomial { pieces })
    }

    /// `height·1_{[a,b]}`.
    pub fn indicator(a: BigRational, b: BigRational, height: BigRational) -> Result<PiecewisePolynomial> {
        let poly = Polynomial::constant(1, Scalar::Rational(height));
        PiecewisePolynomial::new(vec![Piece { a, b, poly }])
    }

    /// `n·1_{[0,1/n]}`.
    pub fn unit_box(n: u64) -> PiecewisePolynomial {
        let n = BigInt::from(n);
        PiecewisePolynomial::indicator(
            BigRational::zero(),
            BigRational::new(BigInt::one(), n.clone()),
            BigRational::from_integer(n),
        )
        .expect("valid box")
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// `f + g` as the union of pieces.
    pub fn sum(&self, other: &PiecewisePolynomial) -> PiecewisePolynomial {
        PiecewisePolynomial { pieces: self.pieces.iter().chain(&other.pieces).cloned().collect() }
    }

    pub fn scale(&self, c: &BigRational) -> PiecewisePolynomial {
        let c = Scalar::Rational(c.clone());
        let pieces = self.pieces.iter().map(|p| Piece { poly: p.poly.scale(&c), ..p.clone() }).collect();
        PiecewisePolynomial { pieces }
    }
}

/// `m_k = ∫ f(x) x^k dx` exactly, for `k ≤ horizon`.
pub fn schwartz_moments(f: &PiecewisePolynomial, horizon: u32) -> Result<Functional> {
    let mut moments = vec![BigRational::zero(); horizon as usize + 1];
    for piece in &f.pieces {
        for (e, c) in piece.poly.terms() {
            let c = c.as_rational().expect("rational piece");
            for (k, m) in moments.iter_mut().enumerate() {
                let p = e[0] as i32 + k as i32 + 1;
                let integral = (piece.b.pow(p) - piece.a.pow(p))
                    / BigRational::from_integer(BigInt::from(p));
                *m += &c * integral;
            }
        }
    }
    let entries = moments.into_iter().enumerate().map(|(k, m)| (vec![k as u32], Scalar::Rational(m)));
    Ok(Functional::from_moments(1, horizon, Field::Rational, entries)?.with_provenance("integral moments"))
}
