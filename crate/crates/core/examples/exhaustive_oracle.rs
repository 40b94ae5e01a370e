//! Exhaustive closure search over small fields, with and without the
//! conjugacy reduction, plus a seeded sampled run.

use nilspan::oracle::{exhaustive_check, exhaustive_check_unreduced, sampled_check, DEFAULT_BUDGET};
use nilspan::{FieldSpec, QSet};

fn main() -> nilspan::Result<()> {
    let q = QSet::parse(4, "2")?;
    for field in ["GF(2)", "GF(3)"] {
        let spec: FieldSpec = field.parse()?;
        let r = exhaustive_check(4, &spec, &q, DEFAULT_BUDGET)?;
        println!("{r}");
    }

    let g2 = FieldSpec::prime(2)?;
    for q in QSet::all_subsets(3) {
        let reduced = exhaustive_check(3, &g2, &q, DEFAULT_BUDGET)?.passed();
        let full = exhaustive_check_unreduced(3, &g2, &q, DEFAULT_BUDGET)?.passed();
        println!("n = 3, GF(2), Q = {:<7} reduced {:<5} full {full}", q.braces(), reduced);
    }

    let r = sampled_check(8, &FieldSpec::prime(5)?, &QSet::parse(8, "2,3,4,5")?, 200, 0)?;
    println!("\n{r}");
    Ok(())
}
