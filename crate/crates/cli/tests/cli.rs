use std::process::{Command, Output};

use serde_json::Value;

fn idstat_argv(args: &[&str]) -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_idstat"));
    c.args(args);
    for var in [
        "IDSTAT_OUTPUT",
        "IDSTAT_MODE",
        "IDSTAT_CONFIG",
        "IDSTAT_SEED",
        "IDSTAT_MAX_N",
        "IDSTAT_MAX_LEVELS",
        "IDSTAT_MASS",
    ] {
        c.env_remove(var);
    }
    c
}

/// Arguments split on whitespace.
fn idstat(line: &str) -> Command {
    idstat_argv(&line.split_whitespace().collect::<Vec<_>>())
}

fn run(line: &str) -> Output {
    idstat(line).output().expect("binary runs")
}

fn run_argv(args: &[&str]) -> Output {
    idstat_argv(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|err| {
        panic!("{err}: {}", String::from_utf8_lossy(&out.stdout));
    })
}

#[test]
fn two_particle_symmetric_state() {
    let out = run("symmetrize -n 2 -l a,b -p S");
    assert!(out.status.success());
    let v = json(&out);
    let terms = v["outputs"]["vector"]["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 2);
    assert!(terms.iter().all(|t| t["amp"] == "1/2*sqrt(2)"));
    assert_eq!(v["outputs"]["zero_vector"], false);
}

#[test]
fn pauli_exclusion_is_a_zero_vector_not_an_error() {
    let out = run("symmetrize -n 3 -l a,a,b -p A");
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["outputs"]["zero_vector"], true);
    assert_eq!(v["outputs"]["terms"], 0);
}

#[test]
fn three_fermions_have_six_signed_terms() {
    let v = json(&run("symmetrize -n 3 -l a,b,c -p A"));
    let rows = v["outputs"]["rows"].as_array().unwrap();
    let signs: Vec<bool> = rows
        .iter()
        .map(|r| r["amplitude"].as_str().unwrap().starts_with('-'))
        .collect();
    assert_eq!(signs, [false, true, true, false, false, true]);
}

#[test]
fn mixed_state_energy_for_first_particle() {
    let v = json(&run("expect -l a,b,c --state s1 --energies 1,2,3 -i 1"));
    assert_eq!(v["outputs"]["expectations"][0]["exact"], "7/4");
}

#[test]
fn fermion_pair_on_three_levels() {
    let v = json(&run("partition --stat fd --levels 0,1,2 -N 2 --beta 1"));
    let z = v["outputs"]["z"].as_f64().unwrap();
    let want = (-1f64).exp() + (-2f64).exp() + (-3f64).exp();
    assert!((z - want).abs() < 1e-15 * want);
}

#[test]
fn single_bose_level_grand_sum() {
    let v = json(&run("partition --stat be --levels 0 --mu -0.693 --beta 1"));
    let xi = v["outputs"]["xi"].as_f64().unwrap();
    assert!((xi - 1.0 / (1.0 - (-0.693f64).exp())).abs() < 1e-12);
}

#[test]
fn continuum_gas_free_energy_sign() {
    let v = json(&run("partition --stat mb-nn --continuum --V 1 --N 2 --T 1"));
    let ln_z = v["outputs"]["ln_z"].as_f64().unwrap();
    assert_eq!(v["outputs"]["free_energy"].as_f64().unwrap(), -ln_z);
}

#[test]
fn exit_codes() {
    assert_eq!(run("symmetrize -n 2 -l a,1 -p S").status.code(), Some(2));
    assert_eq!(
        run("partition --stat fd --levels a,b -N 1 --beta 1").status.code(),
        Some(2)
    );
    assert_eq!(
        run("partition --stat be --levels 0,1 --mu 0 --beta 1").status.code(),
        Some(3)
    );
    assert_eq!(run("occupations --n-levels 21 -N 2 --stat be").status.code(), Some(4));
    assert_eq!(run("verify-paper --tamper-mixed-basis").status.code(), Some(1));
    let err = run("partition --stat be --levels 0,1 --mu 0 --beta 1");
    assert!(String::from_utf8_lossy(&err.stderr).contains("diverges"));
}

#[test]
fn identical_invocations_give_identical_bytes() {
    for args in [
        "verify-paper",
        "decompose -l a,b,c --tuple 2,3,1",
        "extensivity --stat mb-fact",
    ] {
        let a = run(args);
        let b = run(args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn flag_beats_environment_beats_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("idstat.cfg");
    std::fs::write(&cfg, "# caps\nmax_n = 3\noutput = csv\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    let from_file = run(&format!("--config {cfg} occupations --n-levels 3 -N 4 --stat be"));
    assert_eq!(from_file.status.code(), Some(4));

    let mut env = idstat(&format!("--config {cfg} occupations --n-levels 3 -N 4 --stat be"));
    env.env("IDSTAT_MAX_N", "5");
    let out = env.output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("index,occupations"));

    let mut flag = idstat(&format!(
        "--config {cfg} --max-n 3 occupations --n-levels 3 -N 4 --stat be"
    ));
    flag.env("IDSTAT_MAX_N", "5");
    assert_eq!(flag.output().unwrap().status.code(), Some(4));

    let mut out_env = idstat(&format!("--config {cfg} mixed-basis -l a,b,c"));
    out_env.env("IDSTAT_OUTPUT", "json");
    assert!(json(&out_env.output().unwrap())["outputs"].is_object());
}

#[test]
fn report_can_go_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ledger.json");
    let out = run_argv(&["verify-paper", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "verify-paper");
}

#[test]
fn csv_and_pretty_formats() {
    let csv = run("--output csv decompose -l a,b,c");
    let text = String::from_utf8(csv.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("vector,coefficient,float"));
    assert_eq!(text.lines().count(), 7);
    assert!(text.contains("s2,0,0.0000000000000000e0"));

    let pretty = run_argv(&[
        "--output",
        "pretty",
        "classify",
        "--terms",
        "ab=1/2*sqrt(2); ba=-1/2*sqrt(2)",
    ]);
    assert!(String::from_utf8(pretty.stdout).unwrap().contains("antisymmetric"));
}

#[test]
fn recursion_handles_many_levels() {
    let v = json(&run(
        "partition --stat fd --spectrum box1d --cutoff 500 -N 20 --beta 0.05 --method recursion",
    ));
    assert!(v["outputs"]["ln_z"].as_f64().unwrap().is_finite());
}
