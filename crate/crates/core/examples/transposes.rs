//! Formal transposes and regularity reports.

use hamel::diffops::{regularity_report, transpose, DiffOp};
use hamel::operators::InjectivityCertificate;
use hamel::Polynomial;

fn main() -> hamel::Result<()> {
    let lewy = DiffOp::parse("d1 + i*d2 - 2*i*(x1+i*x2)*d3")?;
    println!("L      = {lewy}");
    println!("L^t    = {}", transpose(&lewy));

    let heat = DiffOp::parse("d1 - d2^2")?;
    println!("heat^t = {}", transpose(&heat));

    for text in ["x1*d2 - x2*d1", "d1^2 + d2^2", "x1*d1 + 1"] {
        let p = DiffOp::parse(text)?;
        let report = regularity_report(&p, 4)?;
        let probe = match &report.probe {
            InjectivityCertificate::InjectiveUpTo(n) => format!("transpose injective up to degree {n}"),
            InjectivityCertificate::KernelWitness(v) => {
                format!("transpose kills {}", Polynomial::from_vec(p.dims(), v.clone())?)
            }
        };
        println!("{text:<16} {probe}; flags {:?}", report.flags);
    }
    Ok(())
}
