//! One line per acceptance criterion; fails if any criterion fails.

use slotchain_core::suites;

#[test]
fn acceptance() {
    let mut failed = Vec::new();
    for name in suites::names() {
        let outcome = suites::run(name).expect("registered suite");
        println!("{}", outcome.line());
        if !outcome.passed {
            failed.push(outcome.id);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
