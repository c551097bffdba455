// Certifies every modulus `n > k`, not just primes. A modulus that divides
// every witness coefficient is discharged when its smallest prime factor is
// below `k`.

use distinct_sums::certify::{Certifier, Verdict};
use std::error::Error;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let certifier = Certifier::new();
    let cert = certifier.certify_moduli(8)?;
    println!("{cert}");
    assert_eq!(cert.verdict, Verdict::Covered);
    assert!(cert.undischarged().is_empty());

    // Round trip through JSON, coefficients are kept as decimal strings.
    let json = cert.to_json();
    let back: distinct_sums::certify::Certificate = serde_json::from_str(&json)?;
    assert_eq!(back, cert);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
