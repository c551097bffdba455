// Drives the command-line front end in-process.

use distinct_sums::cli::run;
use std::error::Error;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let calls: [&[&str]; 5] = [
        &["table1", "--k-max", "6"],
        &["certify", "7"],
        &["graceful", "2", "7"],
        &["--format", "json", "construct", "13", "--remove", "3,5"],
        &["find", "9", "--set", "1,3,4,7"],
    ];
    let mut err = Vec::new();
    for args in calls {
        let mut out = Vec::new();
        let argv = ["distinct-sums", "--no-cache"]
            .into_iter()
            .chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        println!(
            "$ distinct-sums {}\n{}exit {code}\n",
            args.join(" "),
            String::from_utf8(out)?
        );
        assert_eq!(code, 0);
    }
    assert!(err.is_empty());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
