// Prints the coefficient table and a prime certificate for each row.
//
// ```text
// cargo run --release --example coefficient_table
// ```

use distinct_sums::certify::{Certifier, Verdict};
use std::error::Error;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let certifier = Certifier::new();
    for row in certifier.table1(7)? {
        let values: Vec<String> = row.values.iter().map(ToString::to_string).collect();
        let cert = certifier.certify_primes(row.k)?;
        println!("k={:<2} {:<40} {}", row.k, values.join(" "), cert.verdict);
        assert_eq!(cert.verdict, Verdict::Covered);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
