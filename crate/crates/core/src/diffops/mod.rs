//! Linear differential operators with polynomial coefficients.
//!
//! A [`DiffOp`] is kept in normal form `Σ c_{γ,α} x^γ ∂^α` with every `x`
//! to the left of every `∂`. Products are reduced with the Weyl relation
//! `∂_j x_k = x_k ∂_j + δ_jk`, in closed form:
//!
//! ```text
//! (x^γ₁ ∂^α₁)(x^γ₂ ∂^α₂) = Σ_{κ ≤ min(α₁, γ₂)} Π_j C(α₁ⱼ, κⱼ)·γ₂ⱼ!/(γ₂ⱼ − κⱼ)! · x^{γ₁+γ₂−κ} ∂^{α₁−κ+α₂}
//! ```
//!
//! The formal transpose of `P* = Σ c_α(x) ∂^α` is
//! `P φ = Σ (−1)^{|α|} ∂^α (c_α φ)`, and it satisfies
//! `⟨P* T, φ⟩ = ⟨T, P φ⟩` for every functional `T` ([`dual_action`]).

mod parse;
mod point;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::duals::{derivative, poly_multiply, Functional, Horizon};
use crate::error::{Error, Result};
use crate::finsupp::{Field, Index, Scalar};
use crate::operators::{injectivity_probe, solve_dual, ColumnFiniteOperator, InjectivityCertificate};
use crate::poly::{binomial, falling, power_factors, write_term, Polynomial};

pub use point::{convolve, PointDistribution};

/// All `κ` with `0 ≤ κ ≤ bound` componentwise.
pub(crate) fn lattice_box(bound: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::with_capacity(bound.len())];
    for &b in bound {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=b).map(move |k| {
                    let mut p = prefix.clone();
                    p.push(k);
                    p
                })
            })
            .collect();
    }
    out
}

fn tuple(k: &Index) -> &[u32] {
    k.as_tuple().expect("monomial index")
}

/// `Σ c·x^γ ∂^α` in normal form. Terms are keyed by `(α, γ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffOp {
    dims: usize,
    field: Field,
    terms: BTreeMap<(Index, Index), Scalar>,
}

impl DiffOp {
    pub fn zero(dims: usize, field: Field) -> DiffOp {
        DiffOp { dims, field, terms: BTreeMap::new() }
    }

    /// `c·x^γ ∂^α`.
    pub fn term(gamma: Vec<u32>, alpha: Vec<u32>, c: Scalar) -> Result<DiffOp> {
        if gamma.len() != alpha.len() {
            return Err(Error::DimensionMismatch { expected: gamma.len(), found: alpha.len() });
        }
        let mut out = DiffOp::zero(gamma.len(), c.field());
        out.add_term(Index::Tuple(gamma), Index::Tuple(alpha), &c);
        Ok(out)
    }

    /// Builds from `(γ, α, c)` triples; repeated keys add up.
    pub fn from_terms<I>(dims: usize, field: Field, terms: I) -> Result<DiffOp>
    where
        I: IntoIterator<Item = (Vec<u32>, Vec<u32>, Scalar)>,
    {
        let mut out = DiffOp::zero(dims, field);
        for (g, a, c) in terms {
            for t in [&g, &a] {
                if t.len() != dims {
                    return Err(Error::DimensionMismatch { expected: dims, found: t.len() });
                }
            }
            out.add_term(Index::Tuple(g), Index::Tuple(a), &c.coerce(field)?);
        }
        Ok(out)
    }

    pub fn constant(dims: usize, c: Scalar) -> DiffOp {
        DiffOp::term(vec![0; dims], vec![0; dims], c).expect("equal lengths")
    }

    /// Multiplication by `x_j` (zero-based).
    pub fn x(dims: usize, j: usize, field: Field) -> DiffOp {
        let mut g = vec![0; dims];
        g[j] = 1;
        DiffOp::term(g, vec![0; dims], field.one()).expect("equal lengths")
    }

    /// `∂/∂x_j` (zero-based).
    pub fn d(dims: usize, j: usize, field: Field) -> DiffOp {
        let mut a = vec![0; dims];
        a[j] = 1;
        DiffOp::term(vec![0; dims], a, field.one()).expect("equal lengths")
    }

    /// Reads an operator; the number of variables is the largest index used.
    pub fn parse(text: &str) -> Result<DiffOp> {
        parse::parse(text, None, None)
    }

    /// Reads an operator in `dims` variables over `field`.
    pub fn parse_in(text: &str, dims: usize, field: Field) -> Result<DiffOp> {
        parse::parse(text, Some(dims), Some(field))
    }

    /// Reads an operator in `dims` variables, inferring the field.
    pub fn parse_with_dims(text: &str, dims: usize) -> Result<DiffOp> {
        parse::parse(text, Some(dims), None)
    }

    fn add_term(&mut self, gamma: Index, alpha: Index, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let key = (alpha, gamma);
        match self.terms.get_mut(&key) {
            Some(cur) => {
                *cur = &*cur + c;
                if cur.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c.clone());
            }
        }
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Normal-form terms `(γ, α, c)`.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &[u32], &Scalar)> {
        self.terms.iter().map(|((a, g), c)| (tuple(g), tuple(a), c))
    }

    pub fn coeff(&self, gamma: &[u32], alpha: &[u32]) -> Scalar {
        self.terms
            .get(&(Index::Tuple(alpha.to_vec()), Index::Tuple(gamma.to_vec())))
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// `max |α|`; zero for the zero operator.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(|(a, _)| a.degree()).max().unwrap_or(0)
    }

    /// `max |γ|`; zero for the zero operator.
    pub fn coefficient_degree(&self) -> u32 {
        self.terms.keys().map(|(_, g)| g.degree()).max().unwrap_or(0)
    }

    /// The coefficient `c_α(x)` of `∂^α`.
    pub fn symbol(&self, alpha: &[u32]) -> Polynomial {
        let terms = self
            .terms()
            .filter(|(_, a, _)| *a == alpha)
            .map(|(g, _, c)| (g.to_vec(), c.clone()));
        Polynomial::from_terms(self.dims, self.field, terms).expect("own terms")
    }

    pub fn has_constant_coefficients(&self) -> bool {
        self.terms.keys().all(|(_, g)| g.degree() == 0)
    }

    pub fn coerce(&self, field: Field) -> Result<DiffOp> {
        let mut terms = BTreeMap::new();
        for (k, c) in &self.terms {
            terms.insert(k.clone(), c.coerce(field)?);
        }
        Ok(DiffOp { dims: self.dims, field, terms })
    }

    fn joined(&self, other: &DiffOp) -> Result<(DiffOp, DiffOp)> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch { expected: self.dims, found: other.dims });
        }
        let field = self.field.join(other.field)?;
        Ok((self.coerce(field)?, other.coerce(field)?))
    }

    pub fn try_add(&self, other: &DiffOp) -> Result<DiffOp> {
        let (mut a, b) = self.joined(other)?;
        for ((al, g), c) in b.terms {
            a.add_term(g, al, &c);
        }
        Ok(a)
    }

    pub fn try_sub(&self, other: &DiffOp) -> Result<DiffOp> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> DiffOp {
        self.scale(&-self.field.one())
    }

    pub fn scale(&self, c: &Scalar) -> DiffOp {
        let field = self.field.join(c.field()).unwrap_or_else(|e| panic!("{e}"));
        let c = c.coerce(field).expect("joined field");
        let mut out = DiffOp::zero(self.dims, field);
        for ((a, g), x) in &self.terms {
            out.add_term(g.clone(), a.clone(), &(&x.coerce(field).expect("joined field") * &c));
        }
        out
    }

    /// The composition `self ∘ other`, normal-ordered.
    pub fn compose(&self, other: &DiffOp) -> Result<DiffOp> {
        let (a, b) = self.joined(other)?;
        let field = a.field;
        let mut out = DiffOp::zero(a.dims, field);
        for (g1, a1, c1) in a.terms() {
            for (g2, a2, c2) in b.terms() {
                let bound: Vec<u32> = a1.iter().zip(g2).map(|(x, y)| *x.min(y)).collect();
                for kappa in lattice_box(&bound) {
                    let mut coeff = c1 * c2;
                    for j in 0..a.dims {
                        let w = binomial(a1[j], kappa[j]) * falling(g2[j], kappa[j]);
                        coeff = &coeff * &field.from_bigint(&w);
                    }
                    let gamma: Vec<u32> = (0..a.dims).map(|j| g1[j] + g2[j] - kappa[j]).collect();
                    let alpha: Vec<u32> = (0..a.dims).map(|j| a1[j] - kappa[j] + a2[j]).collect();
                    out.add_term(Index::Tuple(gamma), Index::Tuple(alpha), &coeff);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<DiffOp> {
        let mut acc = DiffOp::constant(self.dims, self.field.one());
        for _ in 0..k {
            acc = acc.compose(self)?;
        }
        Ok(acc)
    }
}

/// The formal transpose `φ ↦ Σ (−1)^{|α|} ∂^α (c_α φ)`, normal-ordered.
pub fn transpose(p: &DiffOp) -> DiffOp {
    let mut out = DiffOp::zero(p.dims, p.field);
    for (g, a, c) in p.terms() {
        let sign = if a.iter().sum::<u32>() % 2 == 1 { -c } else { c.clone() };
        let d = DiffOp::term(vec![0; p.dims], a.to_vec(), p.field.one()).expect("equal lengths");
        let m = DiffOp::term(g.to_vec(), vec![0; p.dims], sign).expect("equal lengths");
        out = out.try_add(&d.compose(&m).expect("same field")).expect("same field");
    }
    out
}

/// The classical action `P f = Σ c·x^γ ∂^α f`.
pub fn apply_poly(p: &DiffOp, f: &Polynomial) -> Result<Polynomial> {
    if f.dims() != p.dims {
        return Err(Error::DimensionMismatch { expected: p.dims, found: f.dims() });
    }
    let field = p.field.join(f.field())?;
    let mut out = Polynomial::zero(p.dims, field);
    for (g, a, c) in p.terms() {
        let term = f.derivative(a).mul_monomial(g).scale(c);
        out = out.try_add(&term)?;
    }
    Ok(out)
}

/// `P` acting on the monomial basis: column `β` is `P x^β`, with shift
/// `max (|γ| − |α|)` over the terms.
pub fn as_operator_on_polys(p: &DiffOp) -> ColumnFiniteOperator {
    let shift = p
        .terms
        .keys()
        .map(|(a, g)| g.degree() as i64 - a.degree() as i64)
        .max()
        .unwrap_or(0);
    let op = p.clone();
    ColumnFiniteOperator::from_rule(p.dims, shift, p.field, move |beta| {
        let xb = Polynomial::monomial(beta.to_vec(), op.field.one());
        apply_poly(&op, &xb).expect("same dims").into_vec()
    })
}

/// `P* T = Σ c_α(x) ∂^α T`, built from [`derivative`] and [`poly_multiply`].
///
/// The horizon drops by the largest coefficient degree.
pub fn dual_action(p_star: &DiffOp, t: &Functional) -> Result<Functional> {
    if t.dims() != p_star.dims {
        return Err(Error::DimensionMismatch { expected: p_star.dims, found: t.dims() });
    }
    let deg = p_star.coefficient_degree();
    let horizon = t.horizon().shrink(deg).ok_or(Error::HorizonExceeded {
        needed: deg,
        horizon: t.horizon().finite().unwrap_or(0),
    })?;
    let field = p_star.field.join(t.field())?;
    let one = field.one();
    let mut acc = Functional::zero(t.dims(), horizon, field);
    for (g, a, c) in p_star.terms() {
        let monomial = Polynomial::monomial(g.to_vec(), c.clone());
        let term = poly_multiply(&monomial, &derivative(a, t)?)?;
        acc = Functional::combine(&one, &acc, &one, &term)?;
    }
    Ok(acc.with_provenance(format!("({p_star}) applied to {}", t.provenance())))
}

/// Syntactic classification flags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Flag {
    /// All coefficients constant and the operator nonzero: regular on the
    /// full dual by the integral-domain argument for entire functions.
    ConstantCoefficientsNonzero,
    /// `transpose(P*) = −P*`, the signature of the Lewy operator and of
    /// rotation fields.
    SelfTransposeNegation,
}

/// Two layers: syntactic flags (quoted classification, not verified here)
/// and an exact injectivity probe of the transpose on polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularityReport {
    pub operator: DiffOp,
    pub transpose: DiffOp,
    pub probe: InjectivityCertificate,
    pub probe_degree: u32,
    pub flags: Vec<Flag>,
}

pub fn regularity_report(p_star: &DiffOp, n: u32) -> Result<RegularityReport> {
    let t = transpose(p_star);
    let probe = injectivity_probe(&as_operator_on_polys(&t), n)?;
    let mut flags = Vec::new();
    if p_star.has_constant_coefficients() && !p_star.is_zero() {
        flags.push(Flag::ConstantCoefficientsNonzero);
    }
    if !p_star.is_zero() && t == p_star.neg() {
        flags.push(Flag::SelfTransposeNegation);
    }
    Ok(RegularityReport { operator: p_star.clone(), transpose: t, probe, probe_degree: n, flags })
}

/// A functional `F` with `P* F = δ` on the polynomial model, up to degree `n`.
///
/// Solves `F ∘ P = δ` for the transpose `P`; fails with
/// [`Error::NotInjective`] when `P` has a polynomial kernel of degree `≤ n`
/// (minus its shift).
pub fn fundamental_solution(p_star: &DiffOp, n: u32) -> Result<Functional> {
    let p = transpose(p_star);
    let delta = Functional::delta(p_star.dims, Horizon::Finite(n), p_star.field);
    Ok(solve_dual(&as_operator_on_polys(&p), &delta, n)?
        .with_provenance(format!("fundamental solution of {p_star}")))
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, (g, a, c)) in self.terms().enumerate() {
            let mut factors = power_factors("x", g);
            factors.extend(power_factors("d", a));
            write_term(f, n == 0, c, &factors)?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    x: Vec<u32>,
    d: Vec<u32>,
    c: String,
}

#[derive(Serialize, Deserialize)]
struct DiffOpRepr {
    dims: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    field: Option<String>,
    #[serde(default)]
    terms: Vec<TermRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    text: Option<String>,
}

impl Serialize for DiffOp {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DiffOpRepr {
            dims: self.dims,
            field: Some(self.field.to_string()),
            terms: self
                .terms()
                .map(|(g, a, c)| TermRepr { x: g.to_vec(), d: a.to_vec(), c: c.to_string() })
                .collect(),
            text: Some(self.to_string()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DiffOp {
    /// Reads `terms` when present, otherwise parses `text`.
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<DiffOp, D::Error> {
        use serde::de::Error as _;
        let repr = DiffOpRepr::deserialize(d)?;
        if repr.terms.is_empty() {
            if let Some(text) = &repr.text {
                return match &repr.field {
                    Some(f) => DiffOp::parse_in(text, repr.dims, Field::parse(f).map_err(D::Error::custom)?),
                    None => DiffOp::parse_with_dims(text, repr.dims),
                }
                .map_err(D::Error::custom);
            }
        }
        let strs: Vec<&str> = repr.terms.iter().map(|t| t.c.as_str()).collect();
        let field = crate::finsupp::infer_field(repr.field.as_deref(), &strs).map_err(D::Error::custom)?;
        let mut terms = Vec::with_capacity(repr.terms.len());
        for t in repr.terms {
            terms.push((t.x, t.d, Scalar::parse(&t.c, field).map_err(D::Error::custom)?));
        }
        DiffOp::from_terms(repr.dims, field, terms).map_err(D::Error::custom)
    }
}

impl Serialize for RegularityReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("RegularityReport", 4)?;
        st.serialize_field("operator", &self.operator)?;
        st.serialize_field("transpose", &self.transpose)?;
        let probe = match &self.probe {
            InjectivityCertificate::InjectiveUpTo(n) => serde_json::json!({ "verdict": "injective_up_to", "degree": n }),
            InjectivityCertificate::KernelWitness(v) => serde_json::json!({
                "verdict": "kernel_witness",
                "degree": self.probe_degree,
                "witness": v,
                "polynomial": Polynomial::from_vec(self.operator.dims, v.clone()).map(|p| p.to_string()).unwrap_or_default(),
            }),
        };
        st.serialize_field("probe", &probe)?;
        st.serialize_field("flags", &self.flags)?;
        st.end()
    }
}
