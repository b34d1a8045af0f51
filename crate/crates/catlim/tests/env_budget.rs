//! The CATLIM_MAX_BUDGET environment variable, tested in its own process
//! because it is process-global state.

use std::path::PathBuf;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let full: Vec<String> =
        std::iter::once("catlim".to_string()).chain(args.iter().map(|s| s.to_string())).collect();
    let code = catlim::cli::run(full, &mut out);
    (code, String::from_utf8(out).expect("utf8 output"))
}

#[test]
fn budget_env_var_maps_to_exit_three() {
    // A one-node budget starves every component search.
    let kb = fixture("dp_kb.json");
    std::env::set_var("CATLIM_MAX_BUDGET", "1");
    let (code, out) = run(&["verify", kb.to_str().unwrap(), "dynamic_programming"]);
    std::env::remove_var("CATLIM_MAX_BUDGET");
    assert_eq!(code, 3, "{out}");
    assert!(out.contains("budget"));
}

