//! Semisimple plus nilpotent splitting of a matrix over ℚ and over GF(2).

use nilspan::jordan::{is_semisimple, jordan_chevalley, jordan_partition};
use nilspan::{ExactMatrix, FieldSpec};

fn show(x: &ExactMatrix) -> nilspan::Result<()> {
    let (s, n) = jordan_chevalley(x)?;
    println!("x over {} =\n{x}", x.spec());
    println!("semisimple part (semisimple: {}) =\n{s}", is_semisimple(&s));
    println!("nilpotent part, Jordan type {} =\n{n}", jordan_partition(&n)?);
    Ok(())
}

fn main() -> nilspan::Result<()> {
    let q = FieldSpec::rationals();
    show(&ExactMatrix::from_ints(&q, &[&[2, 1, 0], &[0, 2, 0], &[0, 0, 3]]))?;
    // Characteristic polynomial (t - 2)^2, not diagonalizable.
    show(&ExactMatrix::from_ints(&q, &[&[3, 1], &[-1, 1]]))?;
    // Companion matrix of (t^2 + t + 1)^2 over GF(2).
    let g2 = FieldSpec::prime(2)?;
    show(&ExactMatrix::from_ints(
        &g2,
        &[&[0, 0, 0, 1], &[1, 0, 0, 0], &[0, 1, 0, 1], &[0, 0, 1, 0]],
    ))
}
