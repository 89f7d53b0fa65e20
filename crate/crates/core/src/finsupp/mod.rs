//! Exact scalars and finite-support vectors over arbitrary index sets.
//!
//! A [`FinSuppVec`] is a function `S → K` that is nonzero at finitely many
//! indices, i.e. an element of the space usually written `K₀^S`. The
//! standard basis vector `e_s` is [`FinSuppVec::basis_vector`]; its entry at
//! `t` is one when `s = t` and absent otherwise.

mod index;
mod scalar;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use index::{cmp_graded, monomials_of_degree, monomials_up_to, Index};
pub use scalar::{is_prime, Field, Gaussian, Modulus, Residue, Scalar};

use crate::error::{Error, Result};
use crate::linalg::{axpy, Echelon, Insertion};

/// A finitely supported vector in canonical form: no stored zeros, every
/// coefficient lives in `field`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinSuppVec {
    field: Field,
    entries: BTreeMap<Index, Scalar>,
}

impl FinSuppVec {
    pub fn zero(field: Field) -> Self {
        FinSuppVec { field, entries: BTreeMap::new() }
    }

    /// The standard basis vector `e_s`.
    pub fn basis_vector(s: Index, field: Field) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(s, field.one());
        FinSuppVec { field, entries }
    }

    /// Builds a vector from `(index, coefficient)` pairs. Repeated indices are
    /// summed and zeros dropped; coefficients are coerced into `field`.
    pub fn from_entries<I>(field: Field, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Index, Scalar)>,
    {
        let mut v = FinSuppVec::zero(field);
        for (k, x) in entries {
            let x = x.coerce(field)?;
            v.add_at(k, &x);
        }
        Ok(v)
    }

    pub(crate) fn from_sparse(field: Field, entries: BTreeMap<Index, Scalar>) -> Self {
        debug_assert!(entries.values().all(|x| !x.is_zero()));
        FinSuppVec { field, entries }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn entries(&self) -> &BTreeMap<Index, Scalar> {
        &self.entries
    }

    pub fn get(&self, s: &Index) -> Option<&Scalar> {
        self.entries.get(s)
    }

    /// The coefficient at `s`, zero when absent.
    pub fn coeff(&self, s: &Index) -> Scalar {
        self.entries.get(s).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest total degree among the indices (atoms count as zero).
    pub fn max_degree(&self) -> Option<u32> {
        self.entries.keys().map(Index::degree).max()
    }

    /// The indices carrying a nonzero coefficient, in [`Index`] order.
    /// The zero vector has empty spectrum.
    pub fn spectrum(&self) -> Vec<Index> {
        self.entries.keys().cloned().collect()
    }

    pub(crate) fn add_at(&mut self, k: Index, x: &Scalar) {
        if x.is_zero() {
            return;
        }
        match self.entries.get_mut(&k) {
            Some(cur) => {
                *cur = &*cur + x;
                if cur.is_zero() {
                    self.entries.remove(&k);
                }
            }
            None => {
                self.entries.insert(k, x.coerce(self.field).expect("coefficient in field"));
            }
        }
    }

    fn check_field(&self, other: &FinSuppVec) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::MixedFields(self.field.to_string(), other.field.to_string()))
        }
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, factor: &Scalar, other: &FinSuppVec) -> Result<FinSuppVec> {
        self.check_field(other)?;
        let factor = factor.coerce(self.field)?;
        let mut entries = self.entries.clone();
        axpy(&mut entries, &factor, &other.entries);
        Ok(FinSuppVec { field: self.field, entries })
    }

    pub fn scale(&self, factor: &Scalar) -> Result<FinSuppVec> {
        FinSuppVec::zero(self.field).add_scaled(factor, self)
    }

    /// Re-expresses the vector over a larger field.
    pub fn coerce(&self, field: Field) -> Result<FinSuppVec> {
        FinSuppVec::from_entries(field, self.entries.clone())
    }
}

impl Add for &FinSuppVec {
    type Output = FinSuppVec;
    /// Panics if the fields differ; use [`FinSuppVec::add_scaled`] to get an error instead.
    fn add(self, rhs: &FinSuppVec) -> FinSuppVec {
        self.add_scaled(&self.field.one(), rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for &FinSuppVec {
    type Output = FinSuppVec;
    fn sub(self, rhs: &FinSuppVec) -> FinSuppVec {
        self.add_scaled(&(-self.field.one()), rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &FinSuppVec {
    type Output = FinSuppVec;
    fn neg(self) -> FinSuppVec {
        FinSuppVec {
            field: self.field,
            entries: self.entries.iter().map(|(k, x)| (k.clone(), -x)).collect(),
        }
    }
}

impl fmt::Display for FinSuppVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("0");
        }
        for (n, (k, x)) in self.entries.iter().enumerate() {
            match x {
                Scalar::Rational(q) if num_traits::Signed::is_negative(q) => {
                    f.write_str(if n > 0 { " - " } else { "-" })?;
                    write!(f, "{}·e{k}", -x)?;
                }
                _ => {
                    if n > 0 {
                        f.write_str(" + ")?;
                    }
                    write!(f, "{x}·e{k}")?;
                }
            }
        }
        Ok(())
    }
}

/// The common field of a list of vectors; `Q` for an empty list.
pub(crate) fn common_field<'a, I>(vs: I) -> Result<Field>
where
    I: IntoIterator<Item = &'a FinSuppVec>,
{
    let mut it = vs.into_iter();
    let Some(first) = it.next() else { return Ok(Field::Rational) };
    for v in it {
        first.check_field(v)?;
    }
    Ok(first.field)
}

/// Exact linear combination `Σ cᵢ·vᵢ`.
pub fn linear_combine(terms: &[(Scalar, FinSuppVec)]) -> Result<FinSuppVec> {
    let field = common_field(terms.iter().map(|(_, v)| v))?;
    let mut acc = FinSuppVec::zero(field);
    for (c, v) in terms {
        acc = acc.add_scaled(c, v)?;
    }
    Ok(acc)
}

/// The spectrum of `v`: its support in [`Index`] order.
pub fn spectrum(v: &FinSuppVec) -> Vec<Index> {
    v.spectrum()
}

/// Coordinates of `v` relative to a free, labelled family `basis`.
///
/// Returns `f` over the labels with `v = Σ f(s)·v_s`. Fails with
/// [`Error::NotFree`] if the family is dependent and with
/// [`Error::NotInSpan`] (carrying the reduced residual) if `v` is outside
/// its span.
pub fn coordinate_iso(v: &FinSuppVec, basis: &[(Index, FinSuppVec)]) -> Result<FinSuppVec> {
    let field = common_field(std::iter::once(v).chain(basis.iter().map(|(_, b)| b)))?;
    let labels: std::collections::BTreeSet<&Index> = basis.iter().map(|(s, _)| s).collect();
    if labels.len() != basis.len() {
        return Err(Error::Invalid("basis labels must be distinct".into()));
    }
    let mut ech = Echelon::new(field);
    for (_, b) in basis {
        if let Insertion::Dependent(rel) = ech.insert(b.entries.clone()) {
            let mut witness = vec![field.zero(); basis.len()];
            for (i, x) in rel {
                witness[i] = x;
            }
            return Err(Error::NotFree { witness });
        }
    }
    let (residual, coords) = ech.reduce(&v.entries);
    if !residual.is_empty() {
        return Err(Error::NotInSpan { residual: FinSuppVec::from_sparse(field, residual) });
    }
    let mut out = FinSuppVec::zero(field);
    for (i, x) in coords {
        out.add_at(basis[i].0.clone(), &x);
    }
    Ok(out)
}

/// Inverse of [`coordinate_iso`]: `Σ f(s)·v_s`.
pub fn expand(coords: &FinSuppVec, basis: &[(Index, FinSuppVec)]) -> Result<FinSuppVec> {
    let mut acc = FinSuppVec::zero(coords.field);
    for (label, v) in basis {
        if let Some(c) = coords.get(label) {
            acc = acc.add_scaled(c, v)?;
        }
    }
    Ok(acc)
}

/// The Hamel inner product `(v, w) = Σ conj(v_r)·w_r` over the common
/// spectrum, making the standard basis orthonormal. Conjugation is complex
/// conjugation on ℚ(i) and the identity on ℚ and GF(p).
pub fn inner_product(v: &FinSuppVec, w: &FinSuppVec) -> Result<Scalar> {
    v.check_field(w)?;
    let mut acc = v.field.zero();
    let (small, large, small_is_v) = if v.len() <= w.len() { (v, w, true) } else { (w, v, false) };
    for (k, a) in &small.entries {
        if let Some(b) = large.entries.get(k) {
            let term = if small_is_v { &a.conj() * b } else { &b.conj() * a };
            acc = &acc + &term;
        }
    }
    Ok(acc)
}

#[derive(Serialize, Deserialize)]
struct VecRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    field: Option<String>,
    entries: Vec<(Index, String)>,
}

impl Serialize for FinSuppVec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        VecRepr {
            field: Some(self.field.to_string()),
            entries: self.entries.iter().map(|(k, x)| (k.clone(), x.to_string())).collect(),
        }
        .serialize(s)
    }
}

/// Infers a field from scalar strings when none is declared.
pub(crate) fn infer_field(declared: Option<&str>, scalars: &[&str]) -> Result<Field> {
    match declared {
        Some(f) => Field::parse(f),
        None if scalars.iter().any(|s| s.contains('i')) => Ok(Field::Gaussian),
        None => Ok(Field::Rational),
    }
}

impl<'de> Deserialize<'de> for FinSuppVec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<FinSuppVec, D::Error> {
        use serde::de::Error as _;
        let repr = VecRepr::deserialize(d)?;
        let strs: Vec<&str> = repr.entries.iter().map(|(_, s)| s.as_str()).collect();
        let field = infer_field(repr.field.as_deref(), &strs).map_err(D::Error::custom)?;
        let mut entries = Vec::with_capacity(repr.entries.len());
        for (k, s) in repr.entries {
            entries.push((k, Scalar::parse(&s, field).map_err(D::Error::custom)?));
        }
        FinSuppVec::from_entries(field, entries).map_err(D::Error::custom)
    }
}
