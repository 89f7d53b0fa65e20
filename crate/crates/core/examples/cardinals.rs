//! Dimensions and cardinalities of classical spaces and their duals.

use hamel::cardinals::{card_pow, dim_of_dual, example_table, Finite, ALEPH_0, CONTINUUM};

fn main() -> hamel::Result<()> {
    println!("2^aleph0 = {}", card_pow(Finite(2), ALEPH_0)?);
    println!("dim of the dual of a c-dimensional space over R: {}", dim_of_dual(CONTINUUM, CONTINUUM)?);
    println!();
    println!("{:<8}  {:<7}  card", "space", "dim");
    for row in example_table()? {
        println!("{:<8}  {:<7}  {}", row.space, row.dim.to_string(), row.card);
    }
    Ok(())
}
