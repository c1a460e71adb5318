use std::process::{Command, Output};

fn crjet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crjet")).args(args).env_remove("CRJET_CATALOG").output().expect("runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_flagship_case() {
    let o = crjet(&["verify", "eq2.7", "--points", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("PASS eq2.7") && s.contains("residual=0") && s.contains("lhs="), "{s}");
}

#[test]
fn verify_chain_glob_and_specialization() {
    assert_eq!(crjet(&["verify", "eq2.*", "--no-oracle"]).status.code(), Some(0));
    let o = crjet(&["verify", "eq2.7", "--set", "p=0", "--points", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn corrupted_builder_fails_with_status_one() {
    let o = crjet(&["verify", "eq2.4.*", "--no-oracle", "--flip", "E1:1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL eq2.4.E1"));
}

#[test]
fn usage_errors_have_status_two() {
    assert_eq!(crjet(&["verify", "no-such-case"]).status.code(), Some(2));
    assert_eq!(crjet(&["verify", "--set", "q=1"]).status.code(), Some(2));
    assert_eq!(crjet(&["positivity", "--n-max", "0"]).status.code(), Some(2));
    assert_eq!(crjet(&["yamabe", "--lambda", "i", "--mu", "2"]).status.code(), Some(2));
    assert_eq!(crjet(&["normalize", "f[a"]).status.code(), Some(2));
    assert_eq!(crjet(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn normalize_examples() {
    let run = |args: &[&str]| stdout(&crjet(args)).trim().to_string();
    assert_eq!(run(&["normalize", "f[a',a]", "--no-pde"]), "f[a,a'] - 2*n*I*f[0]");
    assert_eq!(run(&["normalize", "0"]), "0");
    let traced = run(&["normalize", "f[a,a']", "--pde"]);
    assert_eq!(traced, run(&["normalize", "--", "-n*(f[b]*f[b'] + exp((2+p)*f) - I*f[0])"]));
    let e = crjet(&["normalize", "f[a]*f[a]*f[a']"]);
    assert!(String::from_utf8_lossy(&e.stderr).contains("1:"), "position in message");
}

#[test]
fn positivity_and_yamabe() {
    let o = crjet(&["positivity", "--n-max", "4", "--samples", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).trim_end().ends_with("PASS"));
    let o = crjet(&["yamabe", "--n", "1", "--lambda", "i", "--mu", "0", "--points", "50"]);
    assert_eq!(o.status.code(), Some(0));
    let o = crjet(&["yamabe", "--n", "2", "--lambda", "1/2+3i", "--mu", "1-i,1/2i"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn records_are_reproducible() {
    let args = ["verify", "eq2.1*", "--format", "records", "--points", "4", "--seed", "9"];
    let a = stdout(&crjet(&args));
    let b = stdout(&crjet(&args));
    assert_eq!(a, b);
    assert!(!a.contains("wall_ms"));
    for line in a.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["passed"], true);
    }
    let mut timed = args.to_vec();
    timed.push("--timings");
    assert!(stdout(&crjet(&timed)).contains("wall_ms"));
}

#[test]
fn catalog_from_environment() {
    let path = std::env::temp_dir().join(format!("crjet-cli-test-{}.jet", std::process::id()));
    std::fs::write(&path, "@case local.ok\n  f[a',a] == f[a,a'] - 2*I*n*f[0]\n@case local.bad\n  f[a] == f[b\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_crjet")).args(["verify", "local.ok"]).env("CRJET_CATALOG", &path).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("4:"), "{}", String::from_utf8_lossy(&o.stderr));
    std::fs::write(&path, "@case local.ok\n  f[a',a] == f[a,a'] - 2*I*n*f[0]\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_crjet")).args(["verify", "local.*"]).env("CRJET_CATALOG", &path).output().unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}
