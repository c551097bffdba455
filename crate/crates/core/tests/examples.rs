// Each example is compiled in here so `cargo test` exercises it.

mod coefficient_table {
    include!("../examples/coefficient_table.rs");
}

mod command_line {
    include!("../examples/command_line.rs");
}

mod composite_certificate {
    include!("../examples/composite_certificate.rs");
}

mod exhaustive_search {
    include!("../examples/exhaustive_search.rs");
}

mod gap_coefficients {
    include!("../examples/gap_coefficients.rs");
}

mod graceful_permutations {
    include!("../examples/graceful_permutations.rs");
}

mod large_orderings {
    include!("../examples/large_orderings.rs");
}

mod pruned_coefficients {
    include!("../examples/pruned_coefficients.rs");
}

#[test]
fn coefficient_table_runs() {
    coefficient_table::run_example().unwrap();
}

#[test]
fn command_line_runs() {
    command_line::run_example().unwrap();
}

#[test]
fn composite_certificate_runs() {
    composite_certificate::run_example().unwrap();
}

#[test]
fn exhaustive_search_runs() {
    exhaustive_search::run_example().unwrap();
}

#[test]
fn gap_coefficients_runs() {
    gap_coefficients::run_example().unwrap();
}

#[test]
fn graceful_permutations_runs() {
    graceful_permutations::run_example().unwrap();
}

#[test]
fn large_orderings_runs() {
    large_orderings::run_example().unwrap();
}

#[test]
fn pruned_coefficients_runs() {
    pruned_coefficients::run_example().unwrap();
}
