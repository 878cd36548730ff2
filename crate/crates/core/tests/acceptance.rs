//! Runs the full acceptance suite and prints one line per criterion.

#[test]
fn acceptance_criteria() {
    let results = maniforge::acceptance::run_all();
    let mut lines = String::new();
    let mut all_passed = true;
    for r in &results {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        let detail = match &r.outcome {
            Ok(()) if !r.within_budget() => format!(
                "exceeded budget of {:.0}s",
                r.limit_seconds.unwrap_or_default()
            ),
            Ok(()) => String::new(),
            Err(e) => e.clone(),
        };
        let line = format!(
            "criterion {:2} {status} ({:8.2}s) {} {}",
            r.id, r.seconds, r.name, detail
        );
        println!("{line}");
        lines.push_str(&line);
        lines.push('\n');
        all_passed &= r.passed();
    }
    assert!(all_passed, "acceptance failures:\n{lines}");
}
