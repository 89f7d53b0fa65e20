//! Solving Λ∘O = T for a column-finite operator, and the kernel obstruction.

use hamel::duals::{Functional, Horizon};
use hamel::finsupp::Field;
use hamel::operators::{injectivity_probe, solve_dual, ColumnFiniteOperator};
use hamel::{Error, Polynomial};

fn main() -> hamel::Result<()> {
    let x = Polynomial::var(1, 0, Field::Rational);
    let f = &(&x * &x) + &Polynomial::constant(1, Field::Rational.one());
    let o = ColumnFiniteOperator::multiplication(&f);
    println!("multiplication by {f}: {:?}", injectivity_probe(&o, 6)?);

    let t = Functional::delta(1, Horizon::Finite(8), Field::Rational);
    let lambda = solve_dual(&o, &t, 8)?;
    let values: Vec<String> = lambda.sequence()?.iter().map(|m| m.to_string()).collect();
    println!("Λ with Λ((1 + x²)·p) = p(0): {}", values.join(", "));

    let d = hamel::diffops::as_operator_on_polys(&hamel::diffops::DiffOp::parse("d1")?);
    match solve_dual(&d, &t, 8) {
        Err(Error::NotInjective { witness, obstruction }) => {
            println!("d/dx kills {witness}; no Λ with Λ∘d/dx = {obstruction}");
        }
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}
