//! The built-in Bell expressions: their terms, how the sign-function
//! generator reproduces them, and their local bounds by exhaustive
//! enumeration of deterministic strategies.

use wbell::inequalities::{
    by_name, enumerate_lhv_bound, mabk_sign_function, zb_expression, SignFunction,
};

fn main() -> wbell::Result<()> {
    for name in ["b3zb", "b3prime", "b4zb"] {
        let e = by_name(name)?;
        println!(
            "{name}: {} terms, stated bound {}, enumerated {}",
            e.terms().len(),
            e.classical_bound(),
            enumerate_lhv_bound(&e)?
        );
        println!("  {e}");
    }

    let generated = zb_expression(&mabk_sign_function(4), 4)?.normalized();
    let same = generated.coefficient_map() == by_name("b4zb")?.normalized().coefficient_map();
    println!("MABK-generated four-mode expression equals the built-in one: {same}");

    // any +-1 table defines an expression
    let table = vec![1.0, 1.0, -1.0, 1.0, 1.0, -1.0, -1.0, 1.0];
    let custom = zb_expression(&SignFunction::from_table(3, table)?, 3)?;
    println!(
        "custom sign table: {} terms, generic bound {}, enumerated LHV bound {}",
        custom.terms().len(),
        custom.classical_bound(),
        enumerate_lhv_bound(&custom)?
    );

    let five = by_name("mabk:5")?;
    println!(
        "mabk:5: {} terms, LHV bound {}",
        five.terms().len(),
        enumerate_lhv_bound(&five)?
    );
    Ok(())
}
