//! Incremental sparse Gauss–Jordan elimination over exact scalars.
//!
//! Vectors are inserted one at a time and reduced against the rows kept so
//! far. Every row remembers which combination of the inserted inputs it
//! equals, so a vector that reduces to zero yields an explicit dependency,
//! and a vector reduced without insertion yields its coordinates.
//!
//! The pivot of a row is its smallest key, which for [`Index`](crate::finsupp::Index)
//! keys is the first nonzero entry in graded order.

use std::collections::BTreeMap;
use std::ops::Bound;

use crate::finsupp::{Field, Scalar};

pub(crate) type Sparse<K> = BTreeMap<K, Scalar>;

/// `acc += factor * row`, dropping entries that cancel.
pub(crate) fn axpy<K: Ord + Clone>(acc: &mut Sparse<K>, factor: &Scalar, row: &Sparse<K>) {
    if factor.is_zero() {
        return;
    }
    for (k, x) in row {
        let delta = factor * x;
        match acc.get_mut(k) {
            Some(cur) => {
                *cur = &*cur + &delta;
                if cur.is_zero() {
                    acc.remove(k);
                }
            }
            None => {
                if !delta.is_zero() {
                    acc.insert(k.clone(), delta);
                }
            }
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Row<K> {
    /// Normalized so the pivot entry is one.
    pub entries: Sparse<K>,
    /// The row equals `Σ combo[i] · input_i`.
    pub combo: Sparse<usize>,
}

#[derive(Debug, Clone)]
pub(crate) enum Insertion<K> {
    /// The input was independent and now owns this pivot.
    Pivot(K),
    /// `Σ relation[i] · input_i = 0`, with the new input's coefficient equal to one.
    Dependent(Sparse<usize>),
}

#[derive(Debug, Clone)]
pub(crate) struct Echelon<K> {
    field: Field,
    rows: BTreeMap<K, Row<K>>,
    inputs: usize,
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new(field: Field) -> Self {
        Echelon { field, rows: BTreeMap::new(), inputs: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> impl DoubleEndedIterator<Item = (&K, &Row<K>)> {
        self.rows.iter()
    }

    /// Reduces `w` in place against the stored rows; `combo` is updated with
    /// `sign * (multiple of each row's combination)` removed from `w`.
    fn eliminate(&self, w: &mut Sparse<K>, combo: &mut Sparse<usize>, sign: &Scalar) {
        let mut cursor: Option<K> = None;
        loop {
            let next = match &cursor {
                None => w.keys().find(|k| self.rows.contains_key(*k)).cloned(),
                Some(c) => w
                    .range((Bound::Excluded(c.clone()), Bound::Unbounded))
                    .map(|(k, _)| k)
                    .find(|k| self.rows.contains_key(*k))
                    .cloned(),
            };
            let Some(p) = next else { break };
            let row = &self.rows[&p];
            let factor = w[&p].clone();
            axpy(w, &(-&factor), &row.entries);
            axpy(combo, &(sign * &factor), &row.combo);
            cursor = Some(p);
        }
    }

    /// Inserts the next input vector (its input number is the count of
    /// previous insertions).
    pub fn insert(&mut self, v: Sparse<K>) -> Insertion<K> {
        let id = self.inputs;
        self.inputs += 1;
        let mut w = v;
        let mut combo: Sparse<usize> = BTreeMap::new();
        combo.insert(id, self.field.one());
        let minus_one = -self.field.one();
        self.eliminate(&mut w, &mut combo, &minus_one);
        let Some((pivot, lead)) = w.iter().next().map(|(k, x)| (k.clone(), x.clone())) else {
            return Insertion::Dependent(combo);
        };
        let inv = lead.inv().expect("nonzero pivot");
        for x in w.values_mut() {
            *x = &*x * &inv;
        }
        for x in combo.values_mut() {
            *x = &*x * &inv;
        }
        self.rows.insert(pivot.clone(), Row { entries: w, combo });
        Insertion::Pivot(pivot)
    }

    /// Reduces `v` without storing it. Returns `(residual, coords)` with
    /// `v = residual + Σ coords[i] · input_i`.
    pub fn reduce(&self, v: &Sparse<K>) -> (Sparse<K>, Sparse<usize>) {
        let mut w = v.clone();
        let mut coords = BTreeMap::new();
        self.eliminate(&mut w, &mut coords, &self.field.one());
        (w, coords)
    }
}
