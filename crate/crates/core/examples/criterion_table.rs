//! Which cell-size sets Q give closed classes, by characteristic.

use nilspan::criterion::{check_criterion, enumerate_valid_q};
use nilspan::QSet;

fn main() -> nilspan::Result<()> {
    for char in [0, 2, 3] {
        let sets: Vec<String> = enumerate_valid_q(6, char)?.iter().map(QSet::braces).collect();
        println!("n = 6, char {char}: {} accepted", sets.len());
        println!("  {}", sets.join(" "));
    }
    println!();
    let q = QSet::parse(6, "2,3,5")?;
    for char in [3, 0] {
        print!("{}", check_criterion(6, char, &q)?);
    }
    Ok(())
}
