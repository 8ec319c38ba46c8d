use croftonlab_core::verify::{run_suite, Suite};

fn run(suite: Suite) {
    let rows = run_suite(suite, 0, 1.0);
    for r in &rows {
        println!(
            "{:<10} {:<45} {:>12.3e} {:>10.1e} {}",
            r.suite,
            r.name,
            r.max_deviation,
            r.threshold,
            if r.pass { "PASS" } else { "FAIL" }
        );
    }
    assert!(rows.iter().all(|r| r.pass));
}

#[test]
fn core_suite_passes() {
    run(Suite::Core);
}

#[test]
fn hilbert_suite_passes() {
    run(Suite::Hilbert);
}

#[test]
fn perimeter_suite_passes() {
    run(Suite::Perimeter);
}

#[test]
fn measures_suite_passes() {
    run(Suite::Measures);
}
