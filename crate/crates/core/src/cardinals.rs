//! Cardinal arithmetic under the generalized continuum hypothesis.
//!
//! With `2^κ = κ₊` for every infinite `κ`, the cardinals that arise as
//! dimensions are the naturals and the alephs `ℵ_k`. Here `Aleph(0) = ℵ₀`,
//! `Aleph(1) = 𝔠` and `Aleph(2) = 𝔠₊`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cardinal {
    Finite(u64),
    Aleph(u32),
}

pub use Cardinal::{Aleph, Finite};

/// `ℵ₀`.
pub const ALEPH_0: Cardinal = Aleph(0);
/// `𝔠`.
pub const CONTINUUM: Cardinal = Aleph(1);

impl Cardinal {
    pub fn is_infinite(self) -> bool {
        matches!(self, Aleph(_))
    }
}

impl Ord for Cardinal {
    fn cmp(&self, other: &Cardinal) -> Ordering {
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (Finite(_), Aleph(_)) => Ordering::Less,
            (Aleph(_), Finite(_)) => Ordering::Greater,
            (Aleph(a), Aleph(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Cardinal {
    fn partial_cmp(&self, other: &Cardinal) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn card_max(a: Cardinal, b: Cardinal) -> Cardinal {
    a.max(b)
}

/// `κ₊`; for finite `n` this is `n + 1`.
pub fn card_succ(a: Cardinal) -> Result<Cardinal> {
    match a {
        Finite(n) => n.checked_add(1).map(Finite).ok_or(Error::CardinalOverflow),
        Aleph(k) => k.checked_add(1).map(Aleph).ok_or(Error::CardinalOverflow),
    }
}

/// `y^x`. For infinite `x` this is `max{y, 2^x} = max{y, x₊}`; an infinite
/// base to a finite nonzero power is unchanged.
pub fn card_pow(y: Cardinal, x: Cardinal) -> Result<Cardinal> {
    match (y, x) {
        (_, Finite(0)) => Ok(Finite(1)),
        (Finite(0), _) => Ok(Finite(0)),
        (Finite(1), _) => Ok(Finite(1)),
        (Finite(a), Finite(b)) => {
            let b = u32::try_from(b).map_err(|_| Error::CardinalOverflow)?;
            a.checked_pow(b).map(Finite).ok_or(Error::CardinalOverflow)
        }
        (Aleph(_), Finite(_)) => Ok(y),
        (_, Aleph(_)) => Ok(card_max(y, card_succ(x)?)),
    }
}

/// `card V = max{dim V, card K}`. Two finite inputs give `k^d`.
pub fn card_of_space(dim: Cardinal, card_k: Cardinal) -> Result<Cardinal> {
    match (dim, card_k) {
        (Finite(_), Finite(_)) => card_pow(card_k, dim),
        _ => Ok(card_max(dim, card_k)),
    }
}

/// `dim V* = max{2^{dim V}, card K} = max{(dim V)₊, card K}` for infinite
/// `dim V`. A finite-dimensional space is isomorphic to its dual, so a
/// finite `dim V` is returned unchanged.
pub fn dim_of_dual(dim: Cardinal, card_k: Cardinal) -> Result<Cardinal> {
    match dim {
        Finite(_) => Ok(dim),
        Aleph(_) => Ok(card_max(card_succ(dim)?, card_k)),
    }
}

/// One row of [`example_table`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpaceRow {
    pub space: String,
    pub dim: Cardinal,
    pub card: Cardinal,
}

/// Dimension and cardinality of the classical spaces, their duals and
/// double duals.
///
/// Only the inputs are stated: the dimension of each base space and the
/// cardinality of its field. Every other entry is computed with
/// [`card_of_space`] and [`dim_of_dual`].
pub fn example_table() -> Result<Vec<SpaceRow>> {
    let q = ALEPH_0;
    let r = CONTINUUM;
    let c = CONTINUUM;
    // (name, dim, card of the field, how many duals to take)
    let bases: [(&str, Cardinal, Cardinal, usize); 7] = [
        ("R|Q", CONTINUUM, q, 1),
        ("R^N", CONTINUUM, r, 1),
        ("C[z]", ALEPH_0, c, 1),
        ("D(Ω)", CONTINUUM, c, 2),
        ("E(Ω)", CONTINUUM, c, 2),
        ("D'(Ω)", CONTINUUM, c, 2),
        ("H", CONTINUUM, c, 2),
    ];
    let mut rows = Vec::new();
    for (name, dim, card_k, duals) in bases {
        let mut dim = dim;
        let mut label = name.to_string();
        rows.push(SpaceRow { space: label.clone(), dim, card: card_of_space(dim, card_k)? });
        for _ in 0..duals {
            dim = dim_of_dual(dim, card_k)?;
            label.push('*');
            rows.push(SpaceRow { space: label.clone(), dim, card: card_of_space(dim, card_k)? });
        }
    }
    Ok(rows)
}

impl fmt::Display for Cardinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Finite(n) => write!(f, "{n}"),
            Aleph(0) => f.write_str("aleph0"),
            Aleph(k) if k <= 3 => write!(f, "c{}", "+".repeat(k as usize - 1)),
            Aleph(k) => write!(f, "aleph({k})"),
        }
    }
}

impl FromStr for Cardinal {
    type Err = Error;

    /// Accepts `7`, `aleph0`, `c`, `c+`, `c++`, … and `aleph(k)`.
    fn from_str(s: &str) -> Result<Cardinal> {
        let s = s.trim();
        let bad = || Error::Invalid(format!("unrecognized cardinal {s:?}"));
        if let Ok(n) = s.parse::<u64>() {
            return Ok(Finite(n));
        }
        if let Some(rest) = s.strip_prefix('c') {
            if rest.chars().all(|ch| ch == '+') {
                return Ok(Aleph(1 + rest.len() as u32));
            }
            return Err(bad());
        }
        if let Some(k) = s.strip_prefix("aleph") {
            let k = k.strip_prefix('(').and_then(|k| k.strip_suffix(')')).unwrap_or(k);
            return k.parse().map(Aleph).map_err(|_| bad());
        }
        Err(bad())
    }
}

impl Serialize for Cardinal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Cardinal {
        s.parse().unwrap()
    }

    #[test]
    fn text_forms() {
        for s in ["7", "aleph0", "c", "c+", "c++", "aleph(9)"] {
            assert_eq!(c(s).to_string(), s);
        }
        assert_eq!(c("aleph(1)"), CONTINUUM);
        assert_eq!(c("aleph2"), Aleph(2));
        assert!("c+-".parse::<Cardinal>().is_err());
        assert!("omega".parse::<Cardinal>().is_err());
    }

    #[test]
    fn order_and_successor() {
        assert_eq!(card_max(ALEPH_0, CONTINUUM), CONTINUUM);
        assert_eq!(card_succ(CONTINUUM).unwrap(), Aleph(2));
        assert_eq!(card_max(Finite(7), ALEPH_0), ALEPH_0);
        assert!(Finite(u64::MAX) < ALEPH_0);
        assert!(matches!(card_succ(Aleph(u32::MAX)), Err(Error::CardinalOverflow)));
    }

    #[test]
    fn powers() {
        assert_eq!(card_pow(CONTINUUM, ALEPH_0).unwrap(), CONTINUUM);
        assert_eq!(card_pow(Finite(2), ALEPH_0).unwrap(), CONTINUUM);
        assert_eq!(card_pow(ALEPH_0, ALEPH_0).unwrap(), CONTINUUM);
        assert_eq!(card_pow(Finite(3), Finite(4)).unwrap(), Finite(81));
        assert_eq!(card_pow(CONTINUUM, Finite(5)).unwrap(), CONTINUUM);
        assert_eq!(card_pow(Finite(1), Aleph(3)).unwrap(), Finite(1));
        assert!(matches!(card_pow(Finite(10), Finite(30)), Err(Error::CardinalOverflow)));
    }

    #[test]
    fn spaces_and_duals() {
        assert_eq!(card_of_space(CONTINUUM, CONTINUUM).unwrap(), CONTINUUM);
        assert_eq!(card_of_space(ALEPH_0, CONTINUUM).unwrap(), CONTINUUM);
        assert_eq!(card_of_space(Finite(3), ALEPH_0).unwrap(), ALEPH_0);
        assert_eq!(card_of_space(Finite(3), Finite(2)).unwrap(), Finite(8));
        assert_eq!(dim_of_dual(CONTINUUM, CONTINUUM).unwrap(), Aleph(2));
        assert_eq!(dim_of_dual(CONTINUUM, ALEPH_0).unwrap(), Aleph(2));
        assert_eq!(dim_of_dual(ALEPH_0, CONTINUUM).unwrap(), CONTINUUM);
        assert_eq!(dim_of_dual(Finite(4), CONTINUUM).unwrap(), Finite(4));
    }

    #[test]
    fn table_rows() {
        let rows = example_table().unwrap();
        let find = |name: &str| rows.iter().find(|r| r.space == name).unwrap().clone();
        assert_eq!((find("D(Ω)*").dim, find("D(Ω)*").card), (Aleph(2), Aleph(2)));
        assert_eq!((find("H**").dim, find("H**").card), (Aleph(3), Aleph(3)));
        assert_eq!((find("R^N*").dim, find("R^N*").card), (Aleph(2), Aleph(2)));
        assert_eq!(find("C[z]").dim, ALEPH_0);
        assert_eq!(find("C[z]*").dim, CONTINUUM);
    }
}
