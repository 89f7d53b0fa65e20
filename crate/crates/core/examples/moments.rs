//! Functionals as moment tables: weak limits, integral moments, translation.

use hamel::duals::{schwartz_moments, translate, weak_limit, ParametricMomentFamily, PiecewisePolynomial};
use hamel::finsupp::Scalar;
use num_rational::BigRational;

fn main() -> hamel::Result<()> {
    let boxes = ParametricMomentFamily::box_family();
    for n in [1u64, 2, 10] {
        let member = boxes.member(&BigRational::from_integer(n.into()), 4)?;
        let moments: Vec<String> = member.sequence()?.iter().map(|m| m.to_string()).collect();
        println!("n = {n:>2}: moments {}", moments.join(", "));
    }
    let delta = weak_limit(&boxes, 4)?;
    println!("limit: {}", delta);

    let integrals = schwartz_moments(&PiecewisePolynomial::unit_box(3), 4)?;
    println!("integrals of 3·1[0,1/3]: {integrals}");

    let moved = translate(&[Scalar::integer(2)], &delta)?;
    let moments: Vec<String> = moved.sequence()?.iter().map(|m| m.to_string()).collect();
    println!("δ translated by 2: {}", moments.join(", "));
    Ok(())
}
