//! Free sets, basis extension and algebraic complements at finite scale.
//!
//! Everything here is one pass of exact elimination: candidates are scanned
//! in the order given and kept exactly when they are not in the span of what
//! was kept before (a deterministic Steinitz exchange).
//!
//! Infinite bases are out of reach. A subspace can have the same infinite
//! dimension as the whole space (the shift `eₙ ↦ eₙ₊₁` on `K₀^ℕ` maps onto
//! the proper subspace spanned by `e₁, e₂, …`), so rank comparisons below
//! only make sense for the finite families they are given.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finsupp::{common_field, Field, FinSuppVec, Scalar};
use crate::linalg::{Echelon, Insertion};

/// Outcome of [`is_free`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum FreenessCertificate {
    Free,
    /// `Σ witness[i]·vs[i] = 0` with some `witness[i] ≠ 0`.
    Dependent {
        #[serde(serialize_with = "crate::json::scalars")]
        witness: Vec<Scalar>,
    },
}

impl FreenessCertificate {
    pub fn is_free(&self) -> bool {
        matches!(self, FreenessCertificate::Free)
    }
}

fn witness_vector(field: Field, len: usize, rel: impl IntoIterator<Item = (usize, Scalar)>) -> Vec<Scalar> {
    let mut w = vec![field.zero(); len];
    for (i, x) in rel {
        w[i] = x;
    }
    w
}

/// Decides linear independence; a dependent family comes with a checked
/// vanishing combination.
pub fn is_free(vs: &[FinSuppVec]) -> Result<FreenessCertificate> {
    let field = common_field(vs)?;
    let mut ech = Echelon::new(field);
    for v in vs {
        if let Insertion::Dependent(rel) = ech.insert(v.entries().clone()) {
            let witness = witness_vector(field, vs.len(), rel);
            debug_assert!(combination(vs, &witness).is_zero());
            return Ok(FreenessCertificate::Dependent { witness });
        }
    }
    Ok(FreenessCertificate::Free)
}

fn combination(vs: &[FinSuppVec], coeffs: &[Scalar]) -> FinSuppVec {
    let field = vs.first().map(FinSuppVec::field).unwrap_or(Field::Rational);
    vs.iter()
        .zip(coeffs)
        .fold(FinSuppVec::zero(field), |acc, (v, c)| acc.add_scaled(c, v).expect("common field"))
}

/// Extends the free family `e` to a basis of `span(e) + span(ambient)`.
///
/// The output starts with `e`; each ambient vector is then appended iff it
/// keeps the list free.
pub fn extend_to_basis(e: &[FinSuppVec], ambient: &[FinSuppVec]) -> Result<Vec<FinSuppVec>> {
    let field = common_field(e.iter().chain(ambient))?;
    let mut ech = Echelon::new(field);
    for v in e {
        if let Insertion::Dependent(rel) = ech.insert(v.entries().clone()) {
            return Err(Error::NotFree { witness: witness_vector(field, e.len(), rel) });
        }
    }
    let mut out = e.to_vec();
    for v in ambient {
        let (residual, _) = ech.reduce(v.entries());
        if !residual.is_empty() {
            ech.insert(v.entries().clone());
            out.push(v.clone());
        }
    }
    Ok(out)
}

/// A basis `W` of an algebraic complement: `span(U) ⊕ span(W) = span(V)`.
pub fn complement(u_basis: &[FinSuppVec], v_basis: &[FinSuppVec]) -> Result<Vec<FinSuppVec>> {
    let field = common_field(u_basis.iter().chain(v_basis))?;
    let mut span_v = Echelon::new(field);
    for v in v_basis {
        span_v.insert(v.entries().clone());
    }
    for (position, u) in u_basis.iter().enumerate() {
        if !span_v.reduce(u.entries()).0.is_empty() {
            return Err(Error::NotSubspace { position });
        }
    }
    let full = extend_to_basis(u_basis, v_basis)?;
    Ok(full[u_basis.len()..].to_vec())
}

/// Rank of the family under exact elimination.
pub fn rank(vs: &[FinSuppVec]) -> Result<usize> {
    let field = common_field(vs)?;
    let mut ech = Echelon::new(field);
    for v in vs {
        ech.insert(v.entries().clone());
    }
    Ok(ech.rank())
}

/// Whether `v` lies in the span of `vs`.
pub fn in_span(v: &FinSuppVec, vs: &[FinSuppVec]) -> Result<bool> {
    let field = common_field(std::iter::once(v).chain(vs))?;
    let mut ech = Echelon::new(field);
    for w in vs {
        ech.insert(w.entries().clone());
    }
    Ok(ech.reduce(v.entries()).0.is_empty())
}
