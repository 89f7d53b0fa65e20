//! Point-supported distributions `Σ c ∂^β δ_a` and convolution with them.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::duals::{derivative, translate, Functional};
use crate::error::{Error, Result};
use crate::finsupp::{Field, Index, Scalar};
use crate::poly::Polynomial;

/// A finite sum `Σ c_{a,β} ∂^β δ_a` with rational points `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointDistribution {
    dims: usize,
    field: Field,
    atoms: BTreeMap<(Vec<BigRational>, Index), Scalar>,
}

impl PointDistribution {
    pub fn zero(dims: usize, field: Field) -> PointDistribution {
        PointDistribution { dims, field, atoms: BTreeMap::new() }
    }

    /// `δ` at the origin.
    pub fn delta(dims: usize, field: Field) -> PointDistribution {
        PointDistribution::delta_at(vec![BigRational::zero(); dims], field)
    }

    /// `δ_a`.
    pub fn delta_at(a: Vec<BigRational>, field: Field) -> PointDistribution {
        let dims = a.len();
        let mut out = PointDistribution::zero(dims, field);
        out.add(a, Index::Tuple(vec![0; dims]), &field.one());
        out
    }

    /// `c·∂^β δ_a`.
    pub fn atom(a: Vec<BigRational>, beta: Vec<u32>, c: Scalar) -> Result<PointDistribution> {
        if a.len() != beta.len() {
            return Err(Error::DimensionMismatch { expected: a.len(), found: beta.len() });
        }
        let mut out = PointDistribution::zero(a.len(), c.field());
        out.add(a, Index::Tuple(beta), &c);
        Ok(out)
    }

    fn add(&mut self, a: Vec<BigRational>, beta: Index, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let key = (a, beta);
        match self.atoms.get_mut(&key) {
            Some(cur) => {
                *cur = &*cur + c;
                if cur.is_zero() {
                    self.atoms.remove(&key);
                }
            }
            None => {
                self.atoms.insert(key, c.clone());
            }
        }
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// `(a, β, c)` for every stored atom.
    pub fn atoms(&self) -> impl Iterator<Item = (&[BigRational], &[u32], &Scalar)> {
        self.atoms.iter().map(|((a, b), c)| (a.as_slice(), b.as_tuple().expect("multi-index"), c))
    }

    /// Largest `|β|`.
    pub fn order(&self) -> u32 {
        self.atoms.keys().map(|(_, b)| b.degree()).max().unwrap_or(0)
    }

    pub fn try_add(&self, other: &PointDistribution) -> Result<PointDistribution> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch { expected: self.dims, found: other.dims });
        }
        let field = self.field.join(other.field)?;
        let mut out = PointDistribution::zero(self.dims, field);
        for src in [self, other] {
            for ((a, b), c) in &src.atoms {
                out.add(a.clone(), b.clone(), &c.coerce(field)?);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Result<PointDistribution> {
        let field = self.field.join(c.field())?;
        let c = c.coerce(field)?;
        let mut out = PointDistribution::zero(self.dims, field);
        for ((a, b), x) in &self.atoms {
            out.add(a.clone(), b.clone(), &(&x.coerce(field)? * &c));
        }
        Ok(out)
    }

    /// `∂^α T`.
    pub fn derivative(&self, alpha: &[u32]) -> Result<PointDistribution> {
        if alpha.len() != self.dims {
            return Err(Error::DimensionMismatch { expected: self.dims, found: alpha.len() });
        }
        let mut out = PointDistribution::zero(self.dims, self.field);
        for (a, b, c) in self.atoms() {
            let beta: Vec<u32> = b.iter().zip(alpha).map(|(x, y)| x + y).collect();
            out.add(a.to_vec(), Index::Tuple(beta), c);
        }
        Ok(out)
    }

    /// `Ť`: points reflected, each `∂^β` picking up `(−1)^{|β|}`.
    pub fn reflect(&self) -> PointDistribution {
        let mut out = PointDistribution::zero(self.dims, self.field);
        for (a, b, c) in self.atoms() {
            let a: Vec<BigRational> = a.iter().map(|x| -x).collect();
            let c = if b.iter().sum::<u32>() % 2 == 1 { -c } else { c.clone() };
            out.add(a, Index::Tuple(b.to_vec()), &c);
        }
        out
    }

    /// `⟨T, φ⟩ = Σ c·(−1)^{|β|}·(∂^β φ)(a)`.
    pub fn pair(&self, phi: &Polynomial) -> Result<Scalar> {
        if phi.dims() != self.dims {
            return Err(Error::DimensionMismatch { expected: self.dims, found: phi.dims() });
        }
        let field = self.field.join(phi.field())?;
        let mut acc = field.zero();
        for (a, b, c) in self.atoms() {
            let point: Vec<Scalar> = a.iter().map(|x| field.from_rational(x)).collect::<Result<_>>()?;
            let mut v = &phi.derivative(b).eval(&point).coerce(field)? * &c.coerce(field)?;
            if b.iter().sum::<u32>() % 2 == 1 {
                v = -v;
            }
            acc = &acc + &v;
        }
        Ok(acc)
    }

    /// `(T ⋆ φ)(x) = ⟨T_y, φ(x − y)⟩`, as a polynomial in `x`.
    pub fn convolve_poly(&self, phi: &Polynomial) -> Result<Polynomial> {
        let field = self.field.join(phi.field())?;
        let mut out = Polynomial::zero(self.dims, field);
        for (a, b, c) in self.atoms() {
            // ⟨∂^β δ_a(y), φ(x − y)⟩ = (∂^β φ)(x − a)
            let shift: Vec<Scalar> = a.iter().map(|x| field.from_rational(&-x)).collect::<Result<_>>()?;
            let term = phi.derivative(b).translate(&shift)?.scale(c);
            out = out.try_add(&term)?;
        }
        Ok(out)
    }
}

impl fmt::Display for PointDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.is_empty() {
            return f.write_str("0");
        }
        for (n, (a, b, c)) in self.atoms().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            let point: Vec<String> = a.iter().map(|x| x.to_string()).collect();
            let d = crate::poly::power_factors("d", b);
            if d.is_empty() {
                write!(f, "{c}·δ({})", point.join(","))?;
            } else {
                write!(f, "{c}·{}δ({})", d.join("*"), point.join(","))?;
            }
        }
        Ok(())
    }
}

/// `⟨S ⋆ T, φ⟩ = ⟨S, Ť ⋆ φ⟩` for point-supported `T`; the horizon of `S` is kept.
///
/// Atom by atom, `S ⋆ c ∂^β δ_a = c ∂^β (τ_a S)`.
pub fn convolve(s: &Functional, t: &PointDistribution) -> Result<Functional> {
    if s.dims() != t.dims {
        return Err(Error::DimensionMismatch { expected: s.dims(), found: t.dims });
    }
    s.horizon().finite().ok_or(Error::UnboundedHorizon)?;
    let field = s.field().join(t.field)?;
    let one = field.one();
    let mut acc = Functional::zero(s.dims(), s.horizon(), field);
    for (a, beta, c) in t.atoms() {
        let a: Vec<Scalar> = a.iter().map(|x| field.from_rational(x)).collect::<Result<_>>()?;
        let moved = derivative(beta, &translate(&a, s)?)?;
        acc = Functional::combine(&one, &acc, c, &moved)?;
    }
    Ok(acc.with_provenance(format!("{} convolved with {t}", s.provenance())))
}

#[derive(Serialize, Deserialize)]
struct AtomRepr {
    at: Vec<String>,
    #[serde(default)]
    d: Option<Vec<u32>>,
    #[serde(default)]
    c: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct PointRepr {
    dims: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    field: Option<String>,
    atoms: Vec<AtomRepr>,
}

impl Serialize for PointDistribution {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PointRepr {
            dims: self.dims,
            field: Some(self.field.to_string()),
            atoms: self
                .atoms()
                .map(|(a, b, c)| AtomRepr {
                    at: a.iter().map(|x| x.to_string()).collect(),
                    d: Some(b.to_vec()),
                    c: Some(c.to_string()),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PointDistribution {
    /// `d` defaults to no derivative and `c` to one.
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<PointDistribution, D::Error> {
        use serde::de::Error as _;
        let repr = PointRepr::deserialize(d)?;
        let strs: Vec<&str> = repr.atoms.iter().filter_map(|a| a.c.as_deref()).collect();
        let field = crate::finsupp::infer_field(repr.field.as_deref(), &strs).map_err(D::Error::custom)?;
        let mut out = PointDistribution::zero(repr.dims, field);
        for atom in repr.atoms {
            let a: Vec<BigRational> = atom
                .at
                .iter()
                .map(|x| match Scalar::parse(x, Field::Rational) {
                    Ok(Scalar::Rational(q)) => Ok(q),
                    _ => Err(D::Error::custom(format!("point coordinate {x:?} is not rational"))),
                })
                .collect::<std::result::Result<_, _>>()?;
            let beta = atom.d.unwrap_or_else(|| vec![0; repr.dims]);
            if a.len() != repr.dims || beta.len() != repr.dims {
                return Err(D::Error::custom(format!("atoms must have {} coordinates", repr.dims)));
            }
            let c = match &atom.c {
                Some(c) => Scalar::parse(c, field).map_err(D::Error::custom)?,
                None => field.one(),
            };
            out.add(a, Index::Tuple(beta), &c);
        }
        Ok(out)
    }
}
