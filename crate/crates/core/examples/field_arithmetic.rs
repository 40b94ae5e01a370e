//! Exact arithmetic in ℚ and GF(p^k), roots of unity and geometric sums.

use nilspan::field::{extension_for_roots, FieldSpec};

fn main() -> nilspan::Result<()> {
    let gf9 = FieldSpec::galois(3, 2, None)?;
    println!("field: {gf9} with {} elements", gf9.size().unwrap_or(0));
    let x = gf9.parse("x")?;
    let y = gf9.parse("1+2*x")?;
    println!("x * (1+2x) = {}", gf9.format(&gf9.mul(&x, &y)));
    println!("(1+2x)^-1  = {}", gf9.format(&gf9.inv(&y).expect("nonzero")));

    let fourth: Vec<String> = gf9.roots_of_unity(4).iter().map(|r| gf9.format(r)).collect();
    println!("4th roots of unity in {gf9}: {}", fourth.join(", "));
    println!(
        "cube roots of unity over GF(2) first appear in GF(2^{})",
        extension_for_roots(2, 3)?
    );

    let q = FieldSpec::rationals();
    let (a, b) = (q.parse("3/2")?, q.parse("-1/3")?);
    let s = q.geometric_sum(5, &a, &b)?;
    let lhs = q.mul(&s, &q.sub(&a, &b));
    let rhs = q.sub(&q.pow(&a, 5), &q.pow(&b, 5));
    println!(
        "S_5(3/2, -1/3) = {}; times (a - b) = {} = a^5 - b^5 = {}",
        q.format(&s),
        q.format(&lhs),
        q.format(&rhs)
    );
    Ok(())
}
