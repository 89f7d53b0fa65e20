use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A basis label.
///
/// The order is total and frozen:
///
/// * every `Atom` precedes every `Tuple`;
/// * atoms compare lexicographically by name;
/// * tuples compare by total degree first, then lexicographically with the
///   larger leading exponent first, so in two variables the degree-2 block
///   reads `(2,0) < (1,1) < (0,2)`, i.e. x₁², x₁x₂, x₂².
///
/// Tuples double as multi-degrees of monomials, and the order is the graded
/// filtration the operator solver works level by level with.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Index {
    Atom(String),
    Tuple(Vec<u32>),
}

impl Index {
    pub fn atom(name: impl Into<String>) -> Index {
        Index::Atom(name.into())
    }

    pub fn tuple(exps: impl Into<Vec<u32>>) -> Index {
        Index::Tuple(exps.into())
    }

    /// Total degree of a tuple; atoms have degree zero.
    pub fn degree(&self) -> u32 {
        match self {
            Index::Atom(_) => 0,
            Index::Tuple(t) => t.iter().sum(),
        }
    }

    pub fn as_tuple(&self) -> Option<&[u32]> {
        match self {
            Index::Tuple(t) => Some(t),
            Index::Atom(_) => None,
        }
    }
}

/// The graded order on exponent vectors used by [`Index`].
pub fn cmp_graded(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| b.cmp(a))
}

impl Ord for Index {
    fn cmp(&self, other: &Index) -> Ordering {
        match (self, other) {
            (Index::Atom(a), Index::Atom(b)) => a.cmp(b),
            (Index::Atom(_), Index::Tuple(_)) => Ordering::Less,
            (Index::Tuple(_), Index::Atom(_)) => Ordering::Greater,
            (Index::Tuple(a), Index::Tuple(b)) => cmp_graded(a, b),
        }
    }
}

impl PartialOrd for Index {
    fn partial_cmp(&self, other: &Index) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Atom(a) => f.write_str(a),
            Index::Tuple(t) => {
                f.write_str("(")?;
                for (k, e) in t.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{e}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IndexRepr {
    Atom(String),
    Tuple(Vec<u32>),
}

impl Serialize for Index {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Index::Atom(a) => a.serialize(s),
            Index::Tuple(t) => t.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Index {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Index, D::Error> {
        Ok(match IndexRepr::deserialize(d)? {
            IndexRepr::Atom(a) => Index::Atom(a),
            IndexRepr::Tuple(t) => Index::Tuple(t),
        })
    }
}

/// All exponent vectors of `dims` variables with total degree exactly `degree`,
/// in [`Index`] order.
pub fn monomials_of_degree(dims: usize, degree: u32) -> Vec<Vec<u32>> {
    fn fill(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, left: u32, slots: usize) {
        if slots == 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e);
            fill(out, cur, left - e, slots - 1);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if dims == 0 {
        if degree == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    fill(&mut out, &mut Vec::with_capacity(dims), degree, dims);
    out
}

/// All exponent vectors of total degree `<= max_degree`, in [`Index`] order.
pub fn monomials_up_to(dims: usize, max_degree: u32) -> Vec<Vec<u32>> {
    (0..=max_degree)
        .flat_map(|n| monomials_of_degree(dims, n))
        .collect()
}
