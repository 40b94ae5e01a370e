//! The block family Z_{a,b} and the counterexample it yields when a
//! nontrivial root of unity exists.

use nilspan::jordan::jordan_partition;
use nilspan::witness::{build_zab, witness_neighbor};
use nilspan::{FieldSpec, QSet};

fn main() -> nilspan::Result<()> {
    let g7 = FieldSpec::prime(7)?;
    println!("Jordan types of Z_(a,b), m = 3, over GF(7):");
    for a in 1..7 {
        let row: Vec<String> = (1..7)
            .map(|b| {
                let z = build_zab(3, &g7.from_int(a), &g7.from_int(b), &g7).expect("scalars in field");
                jordan_partition(&z).expect("nilpotent").to_string()
            })
            .collect();
        println!("  a = {a}: {}", row.join(" "));
    }

    let q = QSet::parse(6, "2,3,5")?;
    let w = witness_neighbor(3, 6, 0)?.against(&q)?;
    println!("\n{w}");
    Ok(())
}
