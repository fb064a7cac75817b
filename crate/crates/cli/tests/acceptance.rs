//! Acceptance run over criteria 1 to 9 on the built-in kite-rectangle system.
//!
//! Every comparison is exact: integer counts, group invariants and matrices
//! are compared for equality, so the tolerance is zero throughout.
//!
//! Criteria 5 and 8 need the degree-two limit of this crate's own induced
//! map, which the classifier leaves unclassified. They are run and reported
//! as FAIL like any other criterion; the process exits nonzero only when a
//! criterion outside that list fails, or when one on it starts passing
//! without the list being updated.

use std::process::ExitCode;

use tilehull::fixtures::load_fixtures;
use tilehull::pipeline::{Config, Pipeline};
use tilehull::verify::run_all;

const KNOWN_DIVERGENCES: &[u8] = &[5, 8];

fn main() -> ExitCode {
    let fx = load_fixtures().expect("embedded fixtures verify");
    let p = Pipeline::new(Config::builtin("pinwheel").expect("built-in system"));
    let results = run_all(&p, &fx);
    let mut unexpected = Vec::new();
    println!("acceptance: 9 criteria, exact comparison (tolerance 0)");
    for r in &results {
        let known = KNOWN_DIVERGENCES.contains(&r.id);
        let tag = match (r.passed, known) {
            (true, false) => "PASS",
            (false, true) => "FAIL (known divergence)",
            (false, false) => "FAIL",
            (true, true) => "PASS (listed as divergent)",
        };
        println!("criterion {} [{}] {tag}: {}", r.id, r.title, r.detail);
        if r.passed == known {
            unexpected.push(r.id);
        }
    }
    let passed = results.iter().filter(|r| r.passed).count();
    println!("acceptance: {passed}/9 passed; known divergences {KNOWN_DIVERGENCES:?}");
    for (stage, secs) in p.timing() {
        println!("  {stage:<14} {secs:>8.2}s");
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected outcome for criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
