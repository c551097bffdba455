// Graceful permutations with a prescribed first difference, and the
// rotational terraces they fold into.

use distinct_sums::construct::{fgm_terrace, graceful_with_first_diff, sequencing_of, walecki};
use std::collections::BTreeMap;
use std::error::Error;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let (p, branch) = graceful_with_first_diff(4, 9)?;
    println!(
        "d=4 r=9: {p} via {branch}, differences {:?}",
        p.differences()
    );

    let mut branches: BTreeMap<String, usize> = BTreeMap::new();
    let mut impossible = Vec::new();
    for r in 2..=30 {
        for d in 1..r {
            match graceful_with_first_diff(d, r) {
                Ok((_, b)) => *branches.entry(b.to_string()).or_default() += 1,
                Err(_) => impossible.push((d, r)),
            }
        }
    }
    println!("branches for r <= 30: {branches:?}");
    println!("impossible: {impossible:?}");

    let terrace = fgm_terrace(&walecki(5));
    println!("terrace: {terrace}");
    println!("sequencing: {:?}", sequencing_of(&terrace).entries());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
