//! Random inputs and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use hamel::diffops::{DiffOp, PointDistribution};
use hamel::duals::{Functional, Horizon};
use hamel::finsupp::{monomials_up_to, Field, FinSuppVec, Index, Scalar};
use hamel::operators::{ColumnFiniteOperator, DefaultColumn};
use hamel::Polynomial;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rat(rng: &mut impl Rng) -> BigRational {
    BigRational::new(rng.gen_range(-6i64..=6).into(), rng.gen_range(1i64..=4).into())
}

pub fn nonzero_rat(rng: &mut impl Rng) -> BigRational {
    loop {
        let q = rat(rng);
        if !q.is_zero() {
            return q;
        }
    }
}

pub fn scalar(rng: &mut impl Rng, field: Field) -> Scalar {
    match field {
        Field::Rational => Scalar::Rational(rat(rng)),
        Field::Gaussian => Scalar::gaussian(rat(rng), rat(rng)),
        Field::Prime(p) => Scalar::residue(rng.gen_range(0..p.get()), p.get()).unwrap(),
    }
}

pub fn nonzero_scalar(rng: &mut impl Rng, field: Field) -> Scalar {
    loop {
        let c = scalar(rng, field);
        if !c.is_zero() {
            return c;
        }
    }
}

pub fn field(rng: &mut impl Rng) -> Field {
    match rng.gen_range(0..3) {
        0 => Field::Rational,
        1 => Field::Gaussian,
        _ => Field::prime(*[2u64, 3, 5, 101].choose(rng).unwrap()).unwrap(),
    }
}

pub fn exps(rng: &mut impl Rng, dims: usize, max_degree: u32) -> Vec<u32> {
    let all = monomials_up_to(dims, max_degree);
    all.choose(rng).unwrap().clone()
}

pub fn index(rng: &mut impl Rng) -> Index {
    if rng.gen_bool(0.25) {
        Index::atom(["a", "b", "c", "e"].choose(rng).unwrap().to_string())
    } else {
        Index::tuple(exps(rng, 2, 3))
    }
}

pub fn vector(rng: &mut impl Rng, field: Field, terms: usize) -> FinSuppVec {
    let n = rng.gen_range(0..=terms);
    FinSuppVec::from_entries(field, (0..n).map(|_| (index(rng), scalar(rng, field)))).unwrap()
}

pub fn poly(rng: &mut impl Rng, dims: usize, max_degree: u32, field: Field, terms: usize) -> Polynomial {
    let n = rng.gen_range(0..=terms);
    Polynomial::from_terms(dims, field, (0..n).map(|_| (exps(rng, dims, max_degree), scalar(rng, field)))).unwrap()
}

pub fn diffop(rng: &mut impl Rng, dims: usize, order: u32, coeff_degree: u32, field: Field, terms: usize) -> DiffOp {
    let n = rng.gen_range(1..=terms);
    DiffOp::from_terms(
        dims,
        field,
        (0..n).map(|_| (exps(rng, dims, coeff_degree), exps(rng, dims, order), scalar(rng, field))),
    )
    .unwrap()
}

pub fn constant_diffop(rng: &mut impl Rng, dims: usize, order: u32, field: Field) -> DiffOp {
    diffop(rng, dims, order, 0, field, 6)
}

/// A dense random table of moments up to `horizon`.
pub fn functional(rng: &mut impl Rng, dims: usize, horizon: u32, field: Field) -> Functional {
    let mut entries = Vec::new();
    for b in monomials_up_to(dims, horizon) {
        if rng.gen_bool(0.7) {
            entries.push((Index::Tuple(b), scalar(rng, field)));
        }
    }
    Functional::from_table(dims, Horizon::Finite(horizon), field, entries).unwrap()
}

pub fn point_distribution(rng: &mut impl Rng, dims: usize, field: Field, max_order: u32) -> PointDistribution {
    let mut out = PointDistribution::zero(dims, field);
    for _ in 0..rng.gen_range(1..=3) {
        let at: Vec<BigRational> = (0..dims).map(|_| rat(rng)).collect();
        let beta = exps(rng, dims, max_order);
        let atom = PointDistribution::atom(at, beta, nonzero_scalar(rng, field)).unwrap();
        out = out.try_add(&atom).unwrap();
    }
    out
}

/// A graded operator whose column `β` is `c·e_{β+σ}` plus terms of lower
/// degree, so it is injective on every truncation. Tabulated up to `n`.
pub fn injective_operator(rng: &mut impl Rng, dims: usize, n: u32, field: Field) -> ColumnFiniteOperator {
    let sigma = exps(rng, dims, 2);
    let shift: u32 = sigma.iter().sum();
    let mut columns = Vec::new();
    for beta in monomials_up_to(dims, n) {
        let lead: Vec<u32> = beta.iter().zip(&sigma).map(|(b, s)| b + s).collect();
        let top = beta.iter().sum::<u32>() + shift;
        let mut entries = vec![(Index::Tuple(lead), nonzero_scalar(rng, field))];
        if top > 0 {
            for _ in 0..rng.gen_range(0..=2) {
                entries.push((Index::Tuple(exps(rng, dims, top - 1)), scalar(rng, field)));
            }
        }
        columns.push((beta, FinSuppVec::from_entries(field, entries).unwrap()));
    }
    ColumnFiniteOperator::from_table(dims, shift as i64, field, columns, DefaultColumn::Zero).unwrap()
}

/// `⟨T, φ⟩` summed directly from the moment table.
pub fn bracket(t: &Functional, phi: &Polynomial) -> Scalar {
    let mut acc = t.field().join(phi.field()).unwrap().zero();
    for (beta, c) in phi.terms() {
        acc = &acc + &(c * &t.moment(beta).unwrap());
    }
    acc
}

/// `n!` by the recurrence `Γ(n+1) = n·Γ(n)` for `∫₀^∞ xⁿ e^{−x} dx`.
pub fn factorials(n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    for k in 1..=n {
        let next = &out[k - 1] * BigInt::from(k);
        out.push(next);
    }
    out
}

/// Determinant by cofactor expansion.
pub fn det(m: &[Vec<BigRational>]) -> BigRational {
    match m.len() {
        0 => BigRational::one(),
        1 => m[0][0].clone(),
        n => {
            let mut acc = BigRational::zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<BigRational>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect())
                    .collect();
                let term = &m[0][j] * det(&minor);
                if j % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Rank over ℚ as the size of the largest nonvanishing minor.
pub fn minor_rank(vs: &[FinSuppVec]) -> usize {
    let coords: Vec<Index> = vs
        .iter()
        .flat_map(|v| v.entries().keys().cloned())
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let m: Vec<Vec<BigRational>> =
        vs.iter().map(|v| coords.iter().map(|k| v.coeff(k).as_rational().unwrap()).collect()).collect();
    for k in (1..=vs.len().min(coords.len())).rev() {
        for rows in subsets(vs.len(), k) {
            for cols in subsets(coords.len(), k) {
                let sub: Vec<Vec<BigRational>> =
                    rows.iter().map(|&r| cols.iter().map(|&c| m[r][c].clone()).collect()).collect();
                if !det(&sub).is_zero() {
                    return k;
                }
            }
        }
    }
    0
}

/// Letters of an operator word: `(true, j)` is `∂_j`, `(false, j)` is `x_j`.
pub type Word = Vec<(bool, usize)>;

/// Expands a normal-ordered operator into words.
pub fn words(p: &DiffOp) -> Vec<(Word, Scalar)> {
    p.terms()
        .map(|(g, a, c)| {
            let mut w = Word::new();
            for (j, &e) in g.iter().enumerate() {
                w.extend(std::iter::repeat((false, j)).take(e as usize));
            }
            for (j, &e) in a.iter().enumerate() {
                w.extend(std::iter::repeat((true, j)).take(e as usize));
            }
            (w, c.clone())
        })
        .collect()
}

/// Normal-orders a sum of words by rewriting `∂_j x_k → x_k ∂_j + δ_jk`
/// one adjacent pair at a time.
pub fn normal_order(dims: usize, field: Field, input: Vec<(Word, Scalar)>) -> DiffOp {
    let mut done: BTreeMap<(Vec<u32>, Vec<u32>), Scalar> = BTreeMap::new();
    let mut stack = input;
    while let Some((w, c)) = stack.pop() {
        match w.windows(2).position(|p| p[0].0 && !p[1].0) {
            Some(i) => {
                let (d, x) = (w[i].1, w[i + 1].1);
                let mut swapped = w.clone();
                swapped.swap(i, i + 1);
                stack.push((swapped, c.clone()));
                if d == x {
                    let mut dropped = w.clone();
                    dropped.drain(i..i + 2);
                    stack.push((dropped, c));
                }
            }
            None => {
                let mut g = vec![0; dims];
                let mut a = vec![0; dims];
                for (is_d, j) in w {
                    if is_d {
                        a[j] += 1;
                    } else {
                        g[j] += 1;
                    }
                }
                let slot = done.entry((g, a)).or_insert_with(|| field.zero());
                *slot = &*slot + &c;
            }
        }
    }
    DiffOp::from_terms(dims, field, done.into_iter().map(|((g, a), c)| (g, a, c))).unwrap()
}

/// The product of two operators computed by word rewriting.
pub fn compose_by_rewriting(p: &DiffOp, q: &DiffOp) -> DiffOp {
    let mut prod = Vec::new();
    for (w1, c1) in words(p) {
        for (w2, c2) in words(q) {
            let mut w = w1.clone();
            w.extend(w2.iter().copied());
            prod.push((w, &c1 * &c2));
        }
    }
    normal_order(p.dims(), p.field(), prod)
}

/// `Σ (−1)^{|α|} ∂^α (c x^γ φ)` term by term on a polynomial.
pub fn transpose_applied(p: &DiffOp, phi: &Polynomial) -> Polynomial {
    let mut acc = Polynomial::zero(p.dims(), p.field().join(phi.field()).unwrap());
    for (g, a, c) in p.terms() {
        let mut f = phi.mul_monomial(g).scale(c);
        for (j, &e) in a.iter().enumerate() {
            for _ in 0..e {
                let mut unit = vec![0; p.dims()];
                unit[j] = 1;
                f = f.derivative(&unit).scale(&p.field().from_int(-1));
            }
        }
        acc = &acc + &f;
    }
    acc
}
