// Extracts one coefficient two ways: by full expansion and by the pruned
// product walk that never materializes the polynomial.

use distinct_sums::poly::{coefficient_of, expand, pruned_coefficient, FactorList, Family};
use std::error::Error;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for family in Family::ALL {
        let factors = FactorList::build(family, 4)?;
        let poly = expand(&factors)?;
        println!(
            "{family} k=4: {} factors, {} terms",
            factors.factors().len(),
            poly.len()
        );
        for (target, c) in poly.terms().take(3) {
            let pruned = pruned_coefficient(&factors, target)?;
            println!("  {target}: {c}");
            assert_eq!(&pruned, c);
            assert_eq!(&coefficient_of(&poly, target), c);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
