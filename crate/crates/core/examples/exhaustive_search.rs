// Brute-force checks over small cyclic groups.

use distinct_sums::group::Variant;
use distinct_sums::oracle::{find_ordering, max_condition_d_set, verify_conjecture, SearchTask};
use std::error::Error;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for n in 5..=11 {
        let report = verify_conjecture(n, Variant::Alspach)?;
        println!("{report}");
        assert!(report.holds());
    }
    let report = verify_conjecture(10, Variant::Archdeacon)?;
    println!("{report}");

    let task = SearchTask::full(13, &[1, 2, 3, 5, 8], Variant::Alspach)?;
    let seq = find_ordering(&task).ok_or("no ordering")?;
    println!("ordering of {{1,2,3,5,8}} in Z_13: {seq}");

    let set = max_condition_d_set(15);
    println!("largest Condition-D set in Z_15: {set:?}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
