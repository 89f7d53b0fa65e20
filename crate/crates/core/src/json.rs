//! Serde helpers shared by the JSON forms of the public types.
//!
//! Scalars always travel as strings (`"3/4"`, `"1/2-3i"`, residues as plain
//! integers) so consumers never see a lossy float.

use serde::Serializer;

use crate::finsupp::Scalar;

pub(crate) fn scalars<S: Serializer>(v: &[Scalar], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}
