use twoseg::acceptance::{CRITERIA, DEFAULT_SEED, run_criterion};

#[test]
fn acceptance_criteria() {
    let mut failed = Vec::new();
    for id in 1..=CRITERIA.len() {
        let r = run_criterion(id, DEFAULT_SEED);
        println!("{r}");
        if !r.passed {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
