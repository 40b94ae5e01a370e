//! Jordan types of nilpotent matrices from the defects of their powers,
//! compared with the closed form for powers of a single cell.

use nilspan::exactmat::poly_eval;
use nilspan::jordan::{jordan_partition, nilpotency_index, predicted_poly_partition};
use nilspan::{ExactMatrix, FieldSpec, Poly};

fn main() -> nilspan::Result<()> {
    let q = FieldSpec::rationals();
    let cell = ExactMatrix::nilpotent_cell(&q, 7);
    println!("{:>3} {:>3}  {:<16} {:<16}", "m", "k", "computed", "closed form");
    for k in 1..=7 {
        let p = jordan_partition(&cell.power(k as u32))?;
        println!(
            "{:>3} {:>3}  {:<16} {:<16}",
            7,
            k,
            p.to_string(),
            predicted_poly_partition(7, k)?.to_string()
        );
    }

    // f = 2t^2 - t^3 + 5t^4 has lowest term t^2.
    let f = Poly::from_ints(&q, &[0, 0, 2, -1, 5]);
    let v = poly_eval(&f, &ExactMatrix::nilpotent_cell(&q, 9))?;
    println!(
        "f(J_9) with f = {f}: {} (index {})",
        jordan_partition(&v)?,
        nilpotency_index(&v)?
    );

    let g3 = FieldSpec::prime(3)?;
    let n = ExactMatrix::nilpotent_cell(&g3, 2);
    let i = ExactMatrix::identity(&g3, 2);
    let sum = &n.kron(&i) + &i.kron(&n);
    println!("N⊗I + I⊗N over GF(3): {}", jordan_partition(&sum)?);
    Ok(())
}
