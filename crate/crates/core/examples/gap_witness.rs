//! Counterexample from induced operators on a quotient space, for a
//! characteristic-power m0 with a missing size above it.

use nilspan::witness::{falsify, witness_gap};
use nilspan::{FieldSpec, QSet};

fn main() -> nilspan::Result<()> {
    let w = witness_gap(2, 6, 8, &FieldSpec::prime(3)?)?;
    println!("{w}");

    let q = QSet::parse(7, "2,5")?;
    match falsify(7, 2, &q)? {
        Some(w) => println!(
            "Q = {} in char 2 is refuted by a {} witness, size {}",
            q.braces(),
            w.construction,
            w.violating_size
        ),
        None => println!("Q = {} is closed", q.braces()),
    }
    Ok(())
}
