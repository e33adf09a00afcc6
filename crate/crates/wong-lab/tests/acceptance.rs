//! Acceptance suite: one test per shipped criterion, each printing its
//! pass/fail line (run with `--nocapture` to see lines for passing tests).

use std::process::Command;

use wong_lab::selftest::{
    criterion_contraction, criterion_decomposition, criterion_determinism, criterion_duality,
    criterion_group_law, criterion_kernel_mass, criterion_tradeoff, criterion_witness,
    criterion_wong_and_young, CriterionResult,
};

fn check(result: CriterionResult) {
    println!("{result}");
    assert!(result.passed, "{result}");
}

#[test]
fn acceptance_01_group_law() {
    check(criterion_group_law());
}

#[test]
fn acceptance_02_kernel_unit_mass() {
    check(criterion_kernel_mass());
}

#[test]
fn acceptance_03_contraction() {
    check(criterion_contraction());
}

#[test]
fn acceptance_04_decomposition_identity() {
    check(criterion_decomposition());
}

#[test]
fn acceptance_05_wong_inequality() {
    let (c5, _) = criterion_wong_and_young();
    check(c5);
}

#[test]
fn acceptance_06_partwise_young_bounds() {
    let (_, c6) = criterion_wong_and_young();
    check(c6);
}

#[test]
fn acceptance_07_constant_tradeoff() {
    check(criterion_tradeoff());
}

#[test]
fn acceptance_08_inclusion_witness() {
    check(criterion_witness());
}

#[test]
fn acceptance_09_duality_sampling() {
    check(criterion_duality());
}

#[test]
fn acceptance_10_determinism() {
    // library-level double run
    check(criterion_determinism());

    // and the real binary: two `wong-lab run` invocations with a fixed
    // config and seed must emit byte-identical CSV
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("run.cfg");
    std::fs::write(
        &config_path,
        "N = 1024\nT = 40\nrandom_count = 3\nR = 1, 4\norders = (0.5, 1), (1, 2)\nq = 1, 2, inf\n",
    )
    .unwrap();
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    for out in [&out_a, &out_b] {
        let status = Command::new(env!("CARGO_BIN_EXE_wong-lab"))
            .args(["run", "--config"])
            .arg(&config_path)
            .args(["--seed", "7", "--out"])
            .arg(out)
            .status()
            .expect("binary runs");
        assert!(status.success(), "run exited with {status}");
    }
    for name in ["wong_sweep.csv", "quasinorm.csv", "constants.csv"] {
        let a = std::fs::read(out_a.join(name)).unwrap();
        let b = std::fs::read(out_b.join(name)).unwrap();
        assert!(!a.is_empty());
        assert_eq!(a, b, "{name} differs between identical runs");
    }
}
