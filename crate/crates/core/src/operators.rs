//! Column-finite operators on polynomial spaces and the dual equation `Λ ∘ O = T`.
//!
//! An operator is given by its columns, the images `O(x^β)` of the monomial
//! basis, together with a degree shift `s` such that `deg O(x^β) ≤ |β| + s`.
//! The shift makes every question about degrees `≤ N` a finite linear
//! algebra problem.
//!
//! [`solve_dual`] is the constructive half of the statement "`O*` is onto
//! iff `O` is one-to-one": with `O` injective on degrees `≤ M`, the
//! equations `Λ(O(x^β)) = T(x^β)` for `|β| ≤ M` prescribe `Λ` on the range
//! of `O`, and `Λ` is extended by zero on the remaining coordinates. When
//! `O` has a kernel vector `v`, any `T` with `T(v) ≠ 0` has no solution,
//! and the error carries such a `T`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::duals::{eval_bracket, Functional, Horizon};
use crate::error::{Error, Result};
use crate::finsupp::{monomials_up_to, Field, FinSuppVec, Index, Scalar};
use crate::linalg::{Echelon, Insertion, Sparse};
use crate::poly::Polynomial;

/// What an unlisted column of a tabulated operator is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DefaultColumn {
    Identity,
    Zero,
}

type ColumnRule = dyn Fn(&[u32]) -> FinSuppVec + Send + Sync;

#[derive(Clone)]
enum Columns {
    Table { map: BTreeMap<Index, FinSuppVec>, default: DefaultColumn },
    Rule(Arc<ColumnRule>),
}

/// A linear map on `K[x₁,…,x_d]` given column by column.
#[derive(Clone)]
pub struct ColumnFiniteOperator {
    dims: usize,
    shift: i64,
    field: Field,
    columns: Columns,
}

impl fmt::Debug for ColumnFiniteOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut d = f.debug_struct("ColumnFiniteOperator");
        d.field("dims", &self.dims).field("shift", &self.shift).field("field", &self.field);
        match &self.columns {
            Columns::Table { map, default } => d.field("columns", map).field("default", default),
            Columns::Rule(_) => d.field("columns", &"<rule>"),
        };
        d.finish()
    }
}

impl ColumnFiniteOperator {
    pub fn identity(dims: usize, field: Field) -> ColumnFiniteOperator {
        ColumnFiniteOperator {
            dims,
            shift: 0,
            field,
            columns: Columns::Table { map: BTreeMap::new(), default: DefaultColumn::Identity },
        }
    }

    /// Listed columns plus a default for the rest. Listed columns are
    /// checked against the shift here; the rest on use.
    pub fn from_table<I>(dims: usize, shift: i64, field: Field, columns: I, default: DefaultColumn) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, FinSuppVec)>,
    {
        if default == DefaultColumn::Identity && shift < 0 {
            return Err(Error::Invalid("an identity default needs a nonnegative shift".into()));
        }
        let mut map = BTreeMap::new();
        for (beta, col) in columns {
            if beta.len() != dims {
                return Err(Error::DimensionMismatch { expected: dims, found: beta.len() });
            }
            let col = col.coerce(field)?;
            let key = Index::Tuple(beta);
            check_column(dims, shift, &key, &col)?;
            map.insert(key, col);
        }
        Ok(ColumnFiniteOperator { dims, shift, field, columns: Columns::Table { map, default } })
    }

    /// Columns computed on demand by `rule`.
    pub fn from_rule<F>(dims: usize, shift: i64, field: Field, rule: F) -> ColumnFiniteOperator
    where
        F: Fn(&[u32]) -> FinSuppVec + Send + Sync + 'static,
    {
        ColumnFiniteOperator { dims, shift, field, columns: Columns::Rule(Arc::new(rule)) }
    }

    /// Multiplication by a fixed polynomial.
    pub fn multiplication(f: &Polynomial) -> ColumnFiniteOperator {
        let f = f.clone();
        let shift = f.degree().unwrap_or(0) as i64;
        ColumnFiniteOperator::from_rule(f.dims(), shift, f.field(), move |beta| f.mul_monomial(beta).into_vec())
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// `O(x^β)`, with the degree bound enforced.
    pub fn column(&self, beta: &[u32]) -> Result<FinSuppVec> {
        if beta.len() != self.dims {
            return Err(Error::DimensionMismatch { expected: self.dims, found: beta.len() });
        }
        let key = Index::Tuple(beta.to_vec());
        let col = match &self.columns {
            Columns::Table { map, default } => match (map.get(&key), default) {
                (Some(c), _) => return Ok(c.clone()),
                (None, DefaultColumn::Identity) => FinSuppVec::basis_vector(key.clone(), self.field),
                (None, DefaultColumn::Zero) => FinSuppVec::zero(self.field),
            },
            Columns::Rule(rule) => rule(beta),
        };
        check_column(self.dims, self.shift, &key, &col)?;
        Ok(col)
    }

    /// Tabulates all columns of degree `≤ max_degree`, default zero beyond.
    pub fn tabulate(&self, max_degree: u32) -> Result<ColumnFiniteOperator> {
        let mut cols = Vec::new();
        for beta in monomials_up_to(self.dims, max_degree) {
            let col = self.column(&beta)?;
            cols.push((beta, col));
        }
        ColumnFiniteOperator::from_table(self.dims, self.shift, self.field, cols, DefaultColumn::Zero)
    }
}

fn check_column(dims: usize, shift: i64, key: &Index, col: &FinSuppVec) -> Result<()> {
    let bound = key.degree() as i64 + shift;
    for k in col.entries().keys() {
        match k {
            Index::Tuple(t) if t.len() != dims => {
                return Err(Error::DimensionMismatch { expected: dims, found: t.len() })
            }
            Index::Tuple(_) => {}
            Index::Atom(a) => return Err(Error::Invalid(format!("column entry {a} is not a monomial"))),
        }
        if k.degree() as i64 > bound {
            return Err(Error::DegreeBoundViolated { column: key.clone(), degree: k.degree(), bound });
        }
    }
    Ok(())
}

fn exponents(k: &Index, dims: usize) -> Result<&[u32]> {
    match k {
        Index::Tuple(t) if t.len() == dims => Ok(t),
        Index::Tuple(t) => Err(Error::DimensionMismatch { expected: dims, found: t.len() }),
        Index::Atom(a) => Err(Error::Invalid(format!("index {a} is not a monomial"))),
    }
}

/// `O(v) = Σ v(β)·O(x^β)`.
pub fn apply(o: &ColumnFiniteOperator, v: &FinSuppVec) -> Result<FinSuppVec> {
    let field = o.field.join(v.field())?;
    let mut acc = FinSuppVec::zero(field);
    for (k, c) in v.entries() {
        let col = o.column(exponents(k, o.dims)?)?.coerce(field)?;
        acc = acc.add_scaled(&c.coerce(field)?, &col)?;
    }
    Ok(acc)
}

fn max_shift(o: &ColumnFiniteOperator) -> u32 {
    o.shift.max(0) as u32
}

/// `O*T = T ∘ O`, known up to `horizon(T) − max(shift, 0)`.
pub fn dual_apply(o: &ColumnFiniteOperator, t: &Functional) -> Result<Functional> {
    if t.dims() != o.dims {
        return Err(Error::DimensionMismatch { expected: o.dims, found: t.dims() });
    }
    let n = t.horizon().finite().ok_or(Error::UnboundedHorizon)?;
    let m = n
        .checked_sub(max_shift(o))
        .ok_or(Error::HorizonExceeded { needed: max_shift(o), horizon: n })?;
    let field = o.field.join(t.field())?;
    let mut entries = Vec::new();
    for beta in monomials_up_to(o.dims, m) {
        let value = eval_bracket(t, &o.column(&beta)?)?;
        entries.push((Index::Tuple(beta), value));
    }
    Ok(Functional::from_table(o.dims, Horizon::Finite(m), field, entries)?
        .with_provenance(format!("dual image of {}", t.provenance())))
}

/// Outcome of [`injectivity_probe`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InjectivityCertificate {
    /// No nonzero polynomial of degree `≤ N` is mapped to zero.
    InjectiveUpTo(u32),
    /// A nonzero `v` with `O(v) = 0`.
    KernelWitness(FinSuppVec),
}

impl InjectivityCertificate {
    pub fn is_injective(&self) -> bool {
        matches!(self, InjectivityCertificate::InjectiveUpTo(_))
    }
}

/// A basis of the kernel of `O` restricted to degrees `≤ n`.
///
/// Columns are eliminated in graded order; each column that depends on the
/// earlier ones contributes one kernel vector whose highest monomial is that
/// column's.
pub fn kernel_basis(o: &ColumnFiniteOperator, n: u32) -> Result<Vec<FinSuppVec>> {
    let betas = monomials_up_to(o.dims, n);
    let mut ech: Echelon<Index> = Echelon::new(o.field);
    let mut kernel = Vec::new();
    for beta in &betas {
        let col = o.column(beta)?;
        if let Insertion::Dependent(rel) = ech.insert(col.entries().clone()) {
            let v = FinSuppVec::from_entries(
                o.field,
                rel.into_iter().map(|(i, x)| (Index::Tuple(betas[i].clone()), x)),
            )?;
            kernel.push(v);
        }
    }
    Ok(kernel)
}

/// Exact kernel computation on degrees `≤ n`.
///
/// The witness reported is the first kernel vector (in graded order of its
/// top monomial) that is not a constant, falling back to the constant one.
pub fn injectivity_probe(o: &ColumnFiniteOperator, n: u32) -> Result<InjectivityCertificate> {
    let kernel = kernel_basis(o, n)?;
    let pick = kernel
        .iter()
        .position(|v| v.max_degree().unwrap_or(0) > 0)
        .or(if kernel.is_empty() { None } else { Some(0) });
    Ok(match pick {
        Some(i) => InjectivityCertificate::KernelWitness(kernel[i].clone()),
        None => InjectivityCertificate::InjectiveUpTo(n),
    })
}

/// Solves `Λ ∘ O = T` on degrees `≤ n − max(shift, 0)`.
///
/// Requires `O` injective on those degrees; otherwise fails with
/// [`Error::NotInjective`], carrying a kernel vector `v` and an indicator
/// functional `Φ_s` with `Φ_s(v) ≠ 0` for which no solution exists.
/// Coordinates of `Λ` not determined by the equations are zero. The result
/// has horizon `n`.
pub fn solve_dual(o: &ColumnFiniteOperator, t: &Functional, n: u32) -> Result<Functional> {
    let m = n
        .checked_sub(max_shift(o))
        .ok_or(Error::HorizonExceeded { needed: max_shift(o), horizon: n })?;
    if let InjectivityCertificate::KernelWitness(v) = injectivity_probe(o, m)? {
        let s = v.spectrum().into_iter().next().expect("nonzero witness");
        let obstruction = Functional::indicator(o.dims, s, o.field)?;
        return Err(Error::NotInjective { witness: v, obstruction: Box::new(obstruction) });
    }
    match solve_range_system(o, t, n) {
        Err(Error::InconsistentSystem(beta)) => {
            panic!("equation {beta} inconsistent although the operator is injective")
        }
        other => other,
    }
}

/// The level-wise linear system of [`solve_dual`] without the injectivity
/// check. Fails with [`Error::InconsistentSystem`] naming the first
/// equation that contradicts the earlier ones.
pub fn solve_range_system(o: &ColumnFiniteOperator, t: &Functional, n: u32) -> Result<Functional> {
    if t.dims() != o.dims {
        return Err(Error::DimensionMismatch { expected: o.dims, found: t.dims() });
    }
    if let Horizon::Finite(h) = t.horizon() {
        if h < n {
            return Err(Error::HorizonExceeded { needed: n, horizon: h });
        }
    }
    let m = n
        .checked_sub(max_shift(o))
        .ok_or(Error::HorizonExceeded { needed: max_shift(o), horizon: n })?;
    let field = o.field.join(t.field())?;
    let betas = monomials_up_to(o.dims, m);
    let rhs: Vec<Scalar> = betas.iter().map(|b| t.moment(b)?.coerce(field)).collect::<Result<_>>()?;
    let mut ech: Echelon<Index> = Echelon::new(field);
    for (i, beta) in betas.iter().enumerate() {
        let col = o.column(beta)?.coerce(field)?;
        if let Insertion::Dependent(rel) = ech.insert(col.entries().clone()) {
            if !combine(&rel, &rhs, field).is_zero() {
                return Err(Error::InconsistentSystem(Index::Tuple(betas[i].clone())));
            }
        }
    }
    let mut lambda: Sparse<Index> = BTreeMap::new();
    for (pivot, row) in ech.rows().rev() {
        let mut value = combine(&row.combo, &rhs, field);
        for (k, x) in row.entries.range(pivot..).skip(1) {
            if let Some(l) = lambda.get(k) {
                value = &value - &(x * l);
            }
        }
        if !value.is_zero() {
            lambda.insert(pivot.clone(), value);
        }
    }
    Ok(Functional::from_table(o.dims, Horizon::Finite(n), field, lambda)?
        .with_provenance(format!("dual solution for {}", t.provenance())))
}

fn combine(coeffs: &Sparse<usize>, rhs: &[Scalar], field: Field) -> Scalar {
    coeffs.iter().fold(field.zero(), |acc, (&i, c)| &acc + &(c * &rhs[i]))
}

#[derive(Serialize, Deserialize)]
struct OperatorRepr {
    dims: usize,
    shift: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    field: Option<String>,
    columns: Vec<(Vec<u32>, FinSuppVec)>,
    #[serde(default = "zero_default")]
    default: DefaultColumn,
}

fn zero_default() -> DefaultColumn {
    DefaultColumn::Zero
}

impl Serialize for ColumnFiniteOperator {
    /// Only tabulated operators serialize; use [`ColumnFiniteOperator::tabulate`] first.
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::Error as _;
        let Columns::Table { map, default } = &self.columns else {
            return Err(S::Error::custom("rule-based operator; tabulate it first"));
        };
        OperatorRepr {
            dims: self.dims,
            shift: self.shift,
            field: Some(self.field.to_string()),
            columns: map.iter().map(|(k, v)| (k.as_tuple().expect("monomial").to_vec(), v.clone())).collect(),
            default: *default,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ColumnFiniteOperator {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<ColumnFiniteOperator, D::Error> {
        use serde::de::Error as _;
        let repr = OperatorRepr::deserialize(d)?;
        let field = match &repr.field {
            Some(f) => Field::parse(f).map_err(D::Error::custom)?,
            None => repr
                .columns
                .iter()
                .try_fold(Field::Rational, |acc, (_, v)| acc.join(v.field()))
                .map_err(D::Error::custom)?,
        };
        ColumnFiniteOperator::from_table(repr.dims, repr.shift, field, repr.columns, repr.default)
            .map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Scalar {
        Scalar::integer(n)
    }

    fn z(n: u32) -> FinSuppVec {
        FinSuppVec::basis_vector(Index::tuple([n]), Field::Rational)
    }

    fn seq(xs: &[i64]) -> Functional {
        Functional::from_sequence(xs.iter().map(|&x| q(x)).collect()).unwrap()
    }

    fn ddz() -> ColumnFiniteOperator {
        ColumnFiniteOperator::from_rule(1, -1, Field::Rational, |b| {
            if b[0] == 0 {
                FinSuppVec::zero(Field::Rational)
            } else {
                z(b[0] - 1).scale(&q(b[0] as i64)).unwrap()
            }
        })
    }

    fn ddz_plus_one() -> ColumnFiniteOperator {
        let d = ddz();
        ColumnFiniteOperator::from_rule(1, 0, Field::Rational, move |b| &d.column(b).unwrap() + &z(b[0]))
    }

    fn times_z() -> ColumnFiniteOperator {
        ColumnFiniteOperator::multiplication(&Polynomial::var(1, 0, Field::Rational))
    }

    #[test]
    fn apply_examples() {
        let v = &z(0) + &z(1);
        assert_eq!(apply(&ColumnFiniteOperator::identity(1, Field::Rational), &v).unwrap(), v);
        assert_eq!(apply(&times_z(), &v).unwrap(), &z(1) + &z(2));
        assert_eq!(apply(&ddz(), &z(3)).unwrap(), z(2).scale(&q(3)).unwrap());
        let bad = ColumnFiniteOperator::from_rule(1, 0, Field::Rational, |b| z(b[0] + 2));
        assert!(matches!(apply(&bad, &z(1)), Err(Error::DegreeBoundViolated { degree: 3, bound: 1, .. })));
    }

    #[test]
    fn dual_apply_examples() {
        let t = seq(&[1, 2, 3, 5, 8]);
        assert_eq!(dual_apply(&times_z(), &t).unwrap(), seq(&[2, 3, 5, 8]));
        assert_eq!(dual_apply(&ColumnFiniteOperator::identity(1, Field::Rational), &t).unwrap(), t);
        assert_eq!(dual_apply(&ddz(), &t).unwrap(), seq(&[0, 1, 4, 9, 20]));
    }

    #[test]
    fn probe_examples() {
        assert_eq!(injectivity_probe(&ddz(), 3).unwrap(), InjectivityCertificate::KernelWitness(z(0)));
        assert_eq!(injectivity_probe(&ddz_plus_one(), 10).unwrap(), InjectivityCertificate::InjectiveUpTo(10));
        assert_eq!(kernel_basis(&times_z(), 6).unwrap(), Vec::<FinSuppVec>::new());
    }

    #[test]
    fn solver_examples() {
        let t = seq(&[3, 1, 4, 1, 5]);
        assert_eq!(solve_dual(&ColumnFiniteOperator::identity(1, Field::Rational), &t, 4).unwrap(), t);
        let delta = Functional::delta(1, Horizon::Finite(5), Field::Rational);
        let lam = solve_dual(&ddz_plus_one(), &delta, 5).unwrap();
        assert_eq!(lam, seq(&[1, -1, 2, -6, 24, -120]));
        let lam = solve_dual(&times_z(), &t, 4).unwrap();
        assert_eq!(lam, seq(&[0, 3, 1, 4, 1]));
        assert_eq!(dual_apply(&times_z(), &lam).unwrap(), t.truncate(3));
    }

    #[test]
    fn converse_direction() {
        let delta = Functional::delta(1, Horizon::Finite(4), Field::Rational);
        match solve_dual(&ddz(), &delta, 4) {
            Err(Error::NotInjective { witness, obstruction }) => {
                assert_eq!(witness, z(0));
                assert!(!eval_bracket(&obstruction, &witness).unwrap().is_zero());
                assert!(matches!(
                    solve_range_system(&ddz(), &obstruction, 4),
                    Err(Error::InconsistentSystem(_))
                ));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn json_round_trip() {
        let op: ColumnFiniteOperator = serde_json::from_str(
            r#"{"dims":1,"shift":1,"columns":[[[0],{"entries":[[[1],"2"]]}]],"default":"identity"}"#,
        )
        .unwrap();
        assert_eq!(apply(&op, &(&z(0) + &z(3))).unwrap(), &z(1).scale(&q(2)).unwrap() + &z(3));
        let text = serde_json::to_string(&op).unwrap();
        assert_eq!(
            text,
            r#"{"dims":1,"shift":1,"field":"Q","columns":[[[0],{"field":"Q","entries":[[[1],"2"]]}]],"default":"identity"}"#
        );
        assert!(serde_json::to_string(&times_z()).is_err());
        assert!(serde_json::to_string(&times_z().tabulate(3).unwrap()).is_ok());
    }
}
