//! Criterion verdicts against exhaustive search and witnesses, for every
//! Q at n = 4 over GF(5) (characteristic 5 > n behaves like characteristic 0).

use nilspan::oracle::{cross_validate, DEFAULT_BUDGET};

fn main() -> nilspan::Result<()> {
    let report = cross_validate(4, 5, &[1], None, DEFAULT_BUDGET)?;
    print!("{report}");
    Ok(())
}
