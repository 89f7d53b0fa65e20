//! Functionals on graded spaces, stored as truncated moment tables.
//!
//! A [`Functional`] knows its value on every monomial `x^β` with
//! `|β| ≤ horizon`; values beyond the horizon are unknown and asking for
//! them is an error, never a silent zero. A functional with an
//! [`Horizon::Unbounded`] horizon is one whose table is exact everywhere
//! (finitely many nonzero values, zero beyond), like `δ` or the indicator
//! functionals `Φ_r`.
//!
//! The module operations follow the bracket identities
//!
//! * `⟨f T, φ⟩ = ⟨T, f φ⟩` ([`poly_multiply`]),
//! * `⟨∂^α T, φ⟩ = (−1)^{|α|} ⟨T, ∂^α φ⟩` ([`derivative`]),
//! * `⟨Ť, φ⟩ = ⟨T, φ(−x)⟩` ([`inflect`]),
//! * `⟨τ_h T, φ⟩ = ⟨T, φ(x + h)⟩` ([`translate`]).
//!
//! Translation uses the bracket form verbatim. Writing `τ_h T` as
//! "`T(y − h)`" is the same operation under the substitution `y = x + h`.

mod family;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::basis;
use crate::error::{Error, Result};
use crate::finsupp::{coordinate_iso, infer_field, monomials_up_to, Field, FinSuppVec, Index, Scalar};
use crate::poly::{binomial, falling, Polynomial};

pub use family::{schwartz_moments, weak_limit, ParametricMomentFamily, Piece, PiecewisePolynomial, RationalFunction};

/// The largest total degree at which a functional is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Horizon {
    Finite(u32),
    Unbounded,
}

impl Horizon {
    pub fn admits(self, degree: u32) -> bool {
        match self {
            Horizon::Finite(n) => degree <= n,
            Horizon::Unbounded => true,
        }
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Horizon::Finite(n) => Some(n),
            Horizon::Unbounded => None,
        }
    }

    /// Lowers the horizon by `k`; `None` if that would go below zero.
    pub fn shrink(self, k: u32) -> Option<Horizon> {
        match self {
            Horizon::Finite(n) => n.checked_sub(k).map(Horizon::Finite),
            Horizon::Unbounded => Some(Horizon::Unbounded),
        }
    }

    fn check(self, degree: u32) -> Result<()> {
        match self {
            Horizon::Finite(n) if degree > n => Err(Error::HorizonExceeded { needed: degree, horizon: n }),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Horizon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Horizon::Finite(n) => write!(f, "{n}"),
            Horizon::Unbounded => f.write_str("∞"),
        }
    }
}

/// A linear functional known on all basis indices up to its horizon.
///
/// Monomial indices are exponent tuples of length `dims`. Atom indices are
/// allowed too (they have degree zero), which lets restricted duals of
/// arbitrary index sets live in the same type.
#[derive(Debug, Clone)]
pub struct Functional {
    dims: usize,
    horizon: Horizon,
    field: Field,
    table: BTreeMap<Index, Scalar>,
    provenance: String,
}

impl PartialEq for Functional {
    /// Provenance and the field tag are not part of the value.
    fn eq(&self, other: &Functional) -> bool {
        self.dims == other.dims && self.horizon == other.horizon && self.table == other.table
    }
}

impl Eq for Functional {}

impl Functional {
    pub fn zero(dims: usize, horizon: Horizon, field: Field) -> Functional {
        Functional { dims, horizon, field, table: BTreeMap::new(), provenance: "zero".into() }
    }

    /// Builds a functional from explicit values; unlisted indices are zero.
    pub fn from_table<I>(dims: usize, horizon: Horizon, field: Field, entries: I) -> Result<Functional>
    where
        I: IntoIterator<Item = (Index, Scalar)>,
    {
        let mut out = Functional::zero(dims, horizon, field);
        out.provenance = "table".into();
        for (k, x) in entries {
            out.check_index(&k)?;
            let x = x.coerce(field)?;
            out.accumulate(k, &x);
        }
        Ok(out)
    }

    pub fn from_moments<I>(dims: usize, horizon: u32, field: Field, entries: I) -> Result<Functional>
    where
        I: IntoIterator<Item = (Vec<u32>, Scalar)>,
    {
        Functional::from_table(
            dims,
            Horizon::Finite(horizon),
            field,
            entries.into_iter().map(|(b, x)| (Index::Tuple(b), x)),
        )
    }

    /// One variable: `values[n] = ⟨T, zⁿ⟩`, horizon `values.len() − 1`.
    pub fn from_sequence(values: Vec<Scalar>) -> Result<Functional> {
        let Some(last) = values.len().checked_sub(1) else {
            return Err(Error::Invalid("a moment sequence needs at least one value".into()));
        };
        let mut field = Field::Rational;
        for x in &values {
            field = field.join(x.field())?;
        }
        Functional::from_moments(
            1,
            last as u32,
            field,
            values.into_iter().enumerate().map(|(n, x)| (vec![n as u32], x)),
        )
    }

    /// The point evaluation at the origin: `⟨δ, x^β⟩ = 1` iff `β = 0`.
    pub fn delta(dims: usize, horizon: Horizon, field: Field) -> Functional {
        let mut out = Functional::zero(dims, horizon, field);
        out.table.insert(Index::Tuple(vec![0; dims]), field.one());
        out.provenance = "delta".into();
        out
    }

    /// The coordinate functional `Φ_r` with `Φ_r(e_s) = δ_rs`.
    pub fn indicator(dims: usize, r: Index, field: Field) -> Result<Functional> {
        let mut out = Functional::zero(dims, Horizon::Unbounded, field);
        out.check_index(&r)?;
        out.provenance = format!("indicator {r}");
        out.table.insert(r, field.one());
        Ok(out)
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn horizon(&self) -> Horizon {
        self.horizon
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn with_provenance(mut self, text: impl Into<String>) -> Functional {
        self.provenance = text.into();
        self
    }

    /// Nonzero table entries in index order.
    pub fn entries(&self) -> impl Iterator<Item = (&Index, &Scalar)> {
        self.table.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_empty()
    }

    fn check_index(&self, k: &Index) -> Result<()> {
        if let Index::Tuple(t) = k {
            if t.len() != self.dims {
                return Err(Error::DimensionMismatch { expected: self.dims, found: t.len() });
            }
        }
        self.horizon.check(k.degree())
    }

    fn check_dims(&self, dims: usize) -> Result<()> {
        if dims != self.dims {
            return Err(Error::DimensionMismatch { expected: self.dims, found: dims });
        }
        Ok(())
    }

    fn graded(&self) -> Result<()> {
        match self.table.keys().find(|k| matches!(k, Index::Atom(_))) {
            Some(a) => Err(Error::Invalid(format!("index {a} is not a monomial"))),
            None => Ok(()),
        }
    }

    fn accumulate(&mut self, k: Index, x: &Scalar) {
        if x.is_zero() {
            return;
        }
        match self.table.get_mut(&k) {
            Some(cur) => {
                *cur = &*cur + x;
                if cur.is_zero() {
                    self.table.remove(&k);
                }
            }
            None => {
                self.table.insert(k, x.clone());
            }
        }
    }

    /// `T(s)`.
    pub fn value_at(&self, s: &Index) -> Result<Scalar> {
        self.check_index(s)?;
        Ok(self.table.get(s).cloned().unwrap_or_else(|| self.field.zero()))
    }

    /// `⟨T, x^β⟩`.
    pub fn moment(&self, beta: &[u32]) -> Result<Scalar> {
        self.value_at(&Index::Tuple(beta.to_vec()))
    }

    /// Every moment up to the horizon, in graded order.
    pub fn dense(&self) -> Result<Vec<(Vec<u32>, Scalar)>> {
        let n = self.horizon.finite().ok_or(Error::UnboundedHorizon)?;
        Ok(monomials_up_to(self.dims, n)
            .into_iter()
            .map(|b| {
                let x = self.table.get(&Index::Tuple(b.clone())).cloned().unwrap_or_else(|| self.field.zero());
                (b, x)
            })
            .collect())
    }

    /// One variable: `[m_0, …, m_N]`.
    pub fn sequence(&self) -> Result<Vec<Scalar>> {
        self.check_dims(1)?;
        Ok(self.dense()?.into_iter().map(|(_, x)| x).collect())
    }

    /// Forgets every value above degree `n`.
    pub fn truncate(&self, n: u32) -> Functional {
        let horizon = match self.horizon {
            Horizon::Finite(m) => Horizon::Finite(m.min(n)),
            Horizon::Unbounded => Horizon::Finite(n),
        };
        Functional {
            dims: self.dims,
            horizon,
            field: self.field,
            table: self.table.iter().filter(|(k, _)| k.degree() <= n).map(|(k, x)| (k.clone(), x.clone())).collect(),
            provenance: self.provenance.clone(),
        }
    }

    pub fn coerce(&self, field: Field) -> Result<Functional> {
        let mut table = BTreeMap::new();
        for (k, x) in &self.table {
            table.insert(k.clone(), x.coerce(field)?);
        }
        Ok(Functional { field, table, ..self.clone() })
    }

    /// `a·S + b·T`, known up to the smaller horizon.
    pub fn combine(a: &Scalar, s: &Functional, b: &Scalar, t: &Functional) -> Result<Functional> {
        s.check_dims(t.dims)?;
        let field = s.field.join(t.field)?.join(a.field())?.join(b.field())?;
        let horizon = s.horizon.min(t.horizon);
        let mut out = Functional::zero(s.dims, horizon, field);
        out.provenance = "linear combination".into();
        for (c, f) in [(a, s), (b, t)] {
            let c = c.coerce(field)?;
            for (k, x) in &f.table {
                if horizon.admits(k.degree()) {
                    out.accumulate(k.clone(), &(&c * &x.coerce(field)?));
                }
            }
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Functional) -> Result<Functional> {
        let one = Field::Rational.one();
        Functional::combine(&one, self, &-&one, other)
    }

    /// Agreement at every index of degree `≤ n` (both sides must know them).
    pub fn agrees_up_to(&self, other: &Functional, n: u32) -> Result<bool> {
        self.check_dims(other.dims)?;
        self.horizon.check(n)?;
        other.horizon.check(n)?;
        let a = self.table.iter().filter(|(k, _)| k.degree() <= n);
        let b = other.table.iter().filter(|(k, _)| k.degree() <= n);
        Ok(a.eq(b))
    }
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "functional on {} variable(s), horizon {}: ", self.dims, self.horizon)?;
        if self.table.is_empty() {
            return f.write_str("0");
        }
        for (n, (k, x)) in self.table.iter().enumerate() {
            if n > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k} ↦ {x}")?;
        }
        Ok(())
    }
}

/// `⟨T, v⟩ = Σ v(s)·T(s)`.
pub fn eval_bracket(t: &Functional, v: &FinSuppVec) -> Result<Scalar> {
    let field = t.field.join(v.field())?;
    let mut acc = field.zero();
    let mut worst: Option<u32> = None;
    for (k, c) in v.entries() {
        match t.value_at(k) {
            Ok(x) => acc = &acc + &(&c.coerce(field)? * &x.coerce(field)?),
            Err(Error::HorizonExceeded { needed, .. }) => worst = worst.max(Some(needed)),
            Err(e) => return Err(e),
        }
    }
    match (worst, t.horizon) {
        (Some(needed), Horizon::Finite(horizon)) => Err(Error::HorizonExceeded { needed, horizon }),
        _ => Ok(acc),
    }
}

/// `σ(Σ c_s e_s) = Σ c_s Φ_s`, exact at every degree.
pub fn restricted_dual_embed(v: &FinSuppVec, dims: usize) -> Result<Functional> {
    let out = Functional::from_table(dims, Horizon::Unbounded, v.field(), v.entries().iter().map(|(k, x)| (k.clone(), x.clone())))?;
    Ok(out.with_provenance("restricted dual"))
}

/// The canonical image `ι(v)` of a vector in the double dual.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    v: FinSuppVec,
}

impl Evaluation {
    /// `ι(v)(T) = T(v)`.
    pub fn apply(&self, t: &Functional) -> Result<Scalar> {
        eval_bracket(t, &self.v)
    }

    pub fn vector(&self) -> &FinSuppVec {
        &self.v
    }
}

pub fn double_dual_embed(v: &FinSuppVec) -> Evaluation {
    Evaluation { v: v.clone() }
}

/// Extends `T`, given on labelled coordinates of `U`, to `U ⊕ W` by zero on `W`.
///
/// The result is a table over the ambient indices occurring in the two
/// bases: its value at `s` is `T(u)` where `e_s = u + w`.
pub fn embed_dual_via_complement(
    t_on_u: &Functional,
    u_basis: &[(Index, FinSuppVec)],
    w_basis: &[FinSuppVec],
) -> Result<Functional> {
    let mut labelled: Vec<(Index, FinSuppVec)> = u_basis.to_vec();
    let taken: std::collections::BTreeSet<&Index> = u_basis.iter().map(|(s, _)| s).collect();
    let mut fresh = 0usize;
    for w in w_basis {
        let label = loop {
            let cand = Index::Atom(format!("#w{fresh}"));
            fresh += 1;
            if !taken.contains(&cand) {
                break cand;
            }
        };
        labelled.push((label, w.clone()));
    }
    let field = crate::finsupp::common_field(labelled.iter().map(|(_, v)| v))?;
    let ambient: std::collections::BTreeSet<Index> =
        labelled.iter().flat_map(|(_, v)| v.entries().keys().cloned()).collect();
    let dims = ambient
        .iter()
        .find_map(|k| k.as_tuple().map(<[u32]>::len))
        .unwrap_or(t_on_u.dims);
    let mut out = Functional::zero(dims, Horizon::Unbounded, field.join(t_on_u.field)?);
    for s in ambient {
        let coords = coordinate_iso(&FinSuppVec::basis_vector(s.clone(), field), &labelled)
            .map_err(|_| Error::DecompositionFailed(s.clone()))?;
        let u_part = FinSuppVec::from_entries(
            field,
            coords.entries().iter().filter(|(k, _)| taken.contains(k)).map(|(k, x)| (k.clone(), x.clone())),
        )?;
        let value = eval_bracket(t_on_u, &u_part)?;
        out.check_index(&s)?;
        out.accumulate(s, &value);
    }
    Ok(out.with_provenance("extended by zero on a complement"))
}

/// Same as [`embed_dual_via_complement`] with the complement computed by
/// [`basis::complement`] inside `span(ambient)`.
pub fn embed_dual(t_on_u: &Functional, u_basis: &[(Index, FinSuppVec)], ambient: &[FinSuppVec]) -> Result<Functional> {
    let us: Vec<FinSuppVec> = u_basis.iter().map(|(_, v)| v.clone()).collect();
    let w = basis::complement(&us, ambient)?;
    embed_dual_via_complement(t_on_u, u_basis, &w)
}

fn sign(field: Field, degree: u32) -> Scalar {
    if degree % 2 == 1 {
        -field.one()
    } else {
        field.one()
    }
}

/// `∂^α T`; the horizon is unchanged.
pub fn derivative(alpha: &[u32], t: &Functional) -> Result<Functional> {
    t.check_dims(alpha.len())?;
    t.graded()?;
    let order: u32 = alpha.iter().sum();
    let s = sign(t.field, order);
    let mut out = Functional::zero(t.dims, t.horizon, t.field);
    for (k, c) in &t.table {
        let g = k.as_tuple().expect("graded");
        let beta: Vec<u32> = g.iter().zip(alpha).map(|(x, a)| x + a).collect();
        if !t.horizon.admits(beta.iter().sum()) {
            continue;
        }
        let factor = beta.iter().zip(alpha).fold(num_bigint::BigInt::from(1), |acc, (&b, &a)| acc * falling(b, a));
        out.accumulate(Index::Tuple(beta), &(&(&s * &t.field.from_bigint(&factor)) * c));
    }
    Ok(out.with_provenance(format!("derivative {alpha:?} of {}", t.provenance)))
}

/// `f·T`; the horizon drops by `deg f`.
pub fn poly_multiply(f: &Polynomial, t: &Functional) -> Result<Functional> {
    t.check_dims(f.dims())?;
    t.graded()?;
    let deg = f.degree().unwrap_or(0);
    let horizon = t.horizon.shrink(deg).ok_or(Error::HorizonExceeded {
        needed: deg,
        horizon: t.horizon.finite().unwrap_or(0),
    })?;
    let field = t.field.join(f.field())?;
    let mut out = Functional::zero(t.dims, horizon, field);
    for (k, c) in &t.table {
        let g = k.as_tuple().expect("graded");
        for (gamma, a) in f.terms() {
            if gamma.iter().zip(g).any(|(x, y)| x > y) {
                continue;
            }
            let beta: Vec<u32> = g.iter().zip(gamma).map(|(y, x)| y - x).collect();
            if horizon.admits(beta.iter().sum()) {
                out.accumulate(Index::Tuple(beta), &(&a.coerce(field)? * &c.coerce(field)?));
            }
        }
    }
    Ok(out.with_provenance(format!("({f})·{}", t.provenance)))
}

/// The reflected functional `Ť`.
pub fn inflect(t: &Functional) -> Result<Functional> {
    t.graded()?;
    let mut out = Functional::zero(t.dims, t.horizon, t.field);
    for (k, c) in &t.table {
        out.accumulate(k.clone(), &(&sign(t.field, k.degree()) * c));
    }
    Ok(out.with_provenance(format!("inflection of {}", t.provenance)))
}

/// `τ_h T`, with `(τ_h T)(x^β) = T((x + h)^β)`; the horizon is unchanged.
///
/// Applied one coordinate at a time, each pass a binomial sum along the
/// lines parallel to that axis.
pub fn translate(h: &[Scalar], t: &Functional) -> Result<Functional> {
    t.check_dims(h.len())?;
    t.graded()?;
    if h.iter().all(Scalar::is_zero) {
        return Ok(t.clone());
    }
    let n = t.horizon.finite().ok_or(Error::UnboundedHorizon)?;
    let mut field = t.field;
    for x in h {
        field = field.join(x.field())?;
    }
    let mut table: BTreeMap<Vec<u32>, Scalar> =
        t.dense()?.into_iter().map(|(b, x)| Ok((b, x.coerce(field)?))).collect::<Result<_>>()?;
    for (j, hj) in h.iter().enumerate() {
        if hj.is_zero() {
            continue;
        }
        let hj = hj.coerce(field)?;
        // weights[m][k] = C(m, k)·h^{m−k}
        let powers: Vec<Scalar> = (0..=n).map(|k| hj.pow(k)).collect();
        let weights: Vec<Vec<Scalar>> = (0..=n)
            .map(|m| (0..=m).map(|k| &field.from_bigint(&binomial(m, k)) * &powers[(m - k) as usize]).collect())
            .collect();
        let mut next = BTreeMap::new();
        for beta in table.keys() {
            let top = beta[j] as usize;
            let mut value = field.zero();
            let mut g = beta.clone();
            for k in 0..=top {
                g[j] = k as u32;
                let x = &table[&g];
                if !x.is_zero() {
                    value = &value + &(&weights[top][k] * x);
                }
            }
            next.insert(beta.clone(), value);
        }
        table = next;
    }
    let entries = table.into_iter().map(|(b, x)| (Index::Tuple(b), x));
    Ok(Functional::from_table(t.dims, t.horizon, field, entries)?.with_provenance(format!("translate of {}", t.provenance)))
}

#[derive(Serialize, Deserialize)]
struct FunctionalRepr {
    dims: usize,
    horizon: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    field: Option<String>,
    moments: Vec<(Index, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<String>,
}

impl Serialize for Functional {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FunctionalRepr {
            dims: self.dims,
            horizon: self.horizon.finite(),
            field: Some(self.field.to_string()),
            moments: self.table.iter().map(|(k, x)| (k.clone(), x.to_string())).collect(),
            provenance: None,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Functional {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Functional, D::Error> {
        use serde::de::Error as _;
        let repr = FunctionalRepr::deserialize(d)?;
        let strs: Vec<&str> = repr.moments.iter().map(|(_, s)| s.as_str()).collect();
        let field = infer_field(repr.field.as_deref(), &strs).map_err(D::Error::custom)?;
        let horizon = repr.horizon.map_or(Horizon::Unbounded, Horizon::Finite);
        let mut entries = Vec::with_capacity(repr.moments.len());
        for (k, s) in repr.moments {
            entries.push((k, Scalar::parse(&s, field).map_err(D::Error::custom)?));
        }
        let out = Functional::from_table(repr.dims, horizon, field, entries).map_err(D::Error::custom)?;
        Ok(out.with_provenance(repr.provenance.unwrap_or_else(|| "json".into())))
    }
}
