// Warm-up monomial and the gap coefficients of the full product.

use distinct_sums::certify::Certifier;
use num_traits::Zero;
use std::error::Error;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let certifier = Certifier::new();
    for k in 2..=7 {
        println!("warm-up k={k}: {}", certifier.warmup_coefficient(k)?);
        assert!(certifier.verify_warmup(k)?);
    }

    let series = certifier.alpha_series(5, 6..=10)?;
    for (k, a) in &series.samples {
        println!("alpha({k}, 5) = {a}");
    }
    let fourth = series.finite_differences(series.degree_bound());
    println!(
        "degree bound {}, differences {:?}",
        series.degree_bound(),
        fourth
    );
    assert!(series.samples.iter().all(|(_, a)| !a.is_zero()));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
