//! Fundamental solutions on the polynomial model and convolution with
//! point-supported distributions.

use hamel::diffops::{convolve, dual_action, fundamental_solution, DiffOp, PointDistribution};
use hamel::finsupp::{Field, Scalar};
use num_rational::BigRational;

fn main() -> hamel::Result<()> {
    let p = DiffOp::parse("d1 + 1")?;
    let f = fundamental_solution(&p, 10)?;
    let moments: Vec<String> = f.sequence()?.iter().map(|m| m.to_string()).collect();
    println!("F for {p}: {}", moments.join(", "));
    println!("P*F = {}", dual_action(&p, &f)?.truncate(9));

    let shift = PointDistribution::atom(vec![BigRational::from_integer(1.into())], vec![0], Scalar::integer(1))?;
    let g = convolve(&f, &shift)?;
    let moments: Vec<String> = g.sequence()?.iter().map(|m| m.to_string()).collect();
    println!("F ⋆ δ_1: {}", moments.join(", "));

    let e = PointDistribution::delta(1, Field::Rational);
    assert_eq!(convolve(&f, &e)?, f);
    Ok(())
}
