mod common;

use std::process::Command;

use common::{fixture, read};
use miqcc_core::pauli::parse_word_list;
use miqcc_core::PauliSum;

fn miqcc() -> Command {
    Command::new(env!("CARGO_BIN_EXE_miqcc"))
}

fn h2_args<'a>(cmd: &'a mut Command, bond: &str) -> &'a mut Command {
    cmd.arg("--fcidump")
        .arg(fixture(&format!("h2/h2_{bond}.fcidump")))
        .args(["--mapping", "parity", "--grouping", "aabb", "--reduce-stationary"])
}

#[test]
fn run_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = h2_args(miqcc().arg("run"), "0.7").arg("--output").arg(dir.path().join("a")).output().unwrap();
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    assert!(String::from_utf8_lossy(&ok.stdout).starts_with("converged"));

    let short = h2_args(miqcc().arg("run"), "0.7")
        .args(["--max-steps", "1"])
        .arg("--output")
        .arg(dir.path().join("b"))
        .output()
        .unwrap();
    assert_eq!(short.status.code(), Some(2));

    let empty = h2_args(miqcc().arg("run"), "0.7")
        .args(["--p-cut", "0.000001"])
        .arg("--output")
        .arg(dir.path().join("c"))
        .output()
        .unwrap();
    assert_eq!(empty.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&empty.stderr).contains("empty screened pool"));

    let missing = miqcc()
        .args(["run", "--fcidump", "no/such/file.fcidump", "--output"])
        .arg(dir.path().join("d"))
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(3));
}

#[test]
fn config_file_and_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("run.toml");
    std::fs::write(
        &cfg_path,
        format!(
            "fcidump = {:?}\nmapping = \"bk\"\ngrouping = \"aabb\"\nreduce_stationary = true\nseed = 3\n",
            fixture("h2/h2_0.7.fcidump")
        ),
    )
    .unwrap();
    let out = miqcc()
        .arg("run")
        .arg("--config")
        .arg(&cfg_path)
        .args(["--seed", "5", "--print-config"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("seed = 5"));
    assert!(text.contains("mapping = \"bravyi_kitaev\""));

    std::fs::write(&cfg_path, "fcidump = \"x\"\nnot_a_key = 1\n").unwrap();
    let bad = miqcc().arg("run").arg("--config").arg(&cfg_path).output().unwrap();
    assert_eq!(bad.status.code(), Some(3));
}

#[test]
fn encode_and_pool_verbs() {
    let dir = tempfile::tempdir().unwrap();
    let h_path = dir.path().join("h.txt");
    let enc = miqcc()
        .arg("encode")
        .arg("--fcidump")
        .arg(fixture("h2o/h2o_1.2.fcidump"))
        .args(["--mapping", "parity", "--grouping", "aabb", "--reduce-stationary", "--output"])
        .arg(&h_path)
        .output()
        .unwrap();
    assert_eq!(enc.status.code(), Some(0), "{}", String::from_utf8_lossy(&enc.stderr));
    let h = PauliSum::from_text(&read(&h_path)).unwrap();
    assert_eq!(h.n_qubits(), 8);

    let pool_path = dir.path().join("pool.txt");
    let gen = miqcc().args(["pool", "generate", "--qubits", "4", "--output"]).arg(&pool_path).output().unwrap();
    assert_eq!(gen.status.code(), Some(0));
    let (n, words) = parse_word_list(&read(&pool_path)).unwrap();
    assert_eq!((n, words.len()), (4, 120));

    let mi_path = dir.path().join("mi.csv");
    std::fs::write(&mi_path, "0,0.5,0,0\n0.5,0,0.1,0\n0,0.1,0,0.2\n0,0,0.2,0\n").unwrap();
    let kept_path = dir.path().join("kept.txt");
    let report_path = dir.path().join("screen.csv");
    let screen = miqcc()
        .args(["pool", "screen", "--p-cut", "0.1", "--pool"])
        .arg(&pool_path)
        .arg("--mi")
        .arg(&mi_path)
        .arg("--output")
        .arg(&kept_path)
        .arg("--report")
        .arg(&report_path)
        .output()
        .unwrap();
    assert_eq!(screen.status.code(), Some(0), "{}", String::from_utf8_lossy(&screen.stderr));
    let (_, kept) = parse_word_list(&read(&kept_path)).unwrap();
    assert!(!kept.is_empty() && kept.len() <= 12);
    let kept_rows = read(&report_path).lines().filter(|l| l.ends_with(",true")).count();
    assert_eq!(kept_rows, kept.len());
}

#[test]
fn sweep_verb_reports_non_convergence() {
    let dir = tempfile::tempdir().unwrap();
    let out = miqcc()
        .arg("sweep")
        .arg("--fcidump")
        .arg(fixture("h2/h2_0.7.fcidump"))
        .arg("--fcidump")
        .arg(dir.path().join("missing.fcidump"))
        .arg("--output")
        .arg(dir.path().join("sw"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let csv = read(&dir.path().join("sw/sweep.csv"));
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.contains("\nh2_0.7,"));
    assert!(csv.contains("\nmissing,,,0,false,"));
}

#[test]
fn mi_report_verb_writes_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = h2_args(miqcc().arg("mi-report"), "0.7")
        .args(["--setting", "exact", "--setting", "2:3", "--output"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("label,chi,sweeps,energy,energy_gap"));
    assert!(dir.path().join("traces.csv").exists());
}
