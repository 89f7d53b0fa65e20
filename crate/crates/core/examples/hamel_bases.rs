//! Free sets, basis extension, complements and coordinates.

use hamel::basis::{complement, extend_to_basis, is_free, FreenessCertificate};
use hamel::finsupp::{coordinate_iso, inner_product, Field, FinSuppVec, Index, Scalar};

fn vector(entries: &[(&[u32], i64)]) -> FinSuppVec {
    FinSuppVec::from_entries(
        Field::Rational,
        entries.iter().map(|(e, c)| (Index::tuple(e.to_vec()), Scalar::integer(*c))),
    )
    .unwrap()
}

fn main() -> hamel::Result<()> {
    let u = vector(&[(&[0], 1), (&[1], 1)]);
    let v = vector(&[(&[1], 1), (&[2], -1)]);
    let w = vector(&[(&[0], 1), (&[2], 1)]);

    match is_free(&[u.clone(), v.clone(), w.clone()])? {
        FreenessCertificate::Free => println!("{{u, v, w}} is free"),
        FreenessCertificate::Dependent { witness } => {
            let w: Vec<String> = witness.iter().map(|c| c.to_string()).collect();
            println!("{{u, v, w}} is dependent: coefficients ({})", w.join(", "));
        }
    }

    let ambient: Vec<FinSuppVec> = (0..4).map(|k| FinSuppVec::basis_vector(Index::tuple(vec![k]), Field::Rational)).collect();
    let basis = extend_to_basis(&[u.clone(), v.clone()], &ambient)?;
    println!("extended basis:");
    for b in &basis {
        println!("  {b}");
    }

    let extra = complement(&[u.clone(), v.clone()], &ambient)?;
    println!("complement of span(u, v): {} vectors", extra.len());

    let labelled: Vec<(Index, FinSuppVec)> =
        basis.iter().enumerate().map(|(i, b)| (Index::atom(format!("b{i}")), b.clone())).collect();
    let target = vector(&[(&[0], 3), (&[1], 2), (&[3], 5)]);
    println!("coordinates of {target}: {}", coordinate_iso(&target, &labelled)?);
    println!("(u, v) = {}", inner_product(&u, &v)?);
    Ok(())
}
