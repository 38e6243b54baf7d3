//! Exit-code contract and output formats of the binary, plus flag-map file
//! round-trips.

use std::path::Path;
use std::process::{Command, Output};

use crosscap::json::{RecordJson, ReportJson};
use crosscap::mapio;
use crosscap_core::classify::{classify_constructive, ClassifyConfig};

fn crosscap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crosscap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn count_known_values_and_exit_codes() {
    for (n, expected) in [("14", "2"), ("12", "0"), ("2", "1"), ("15", "0")] {
        let out = crosscap(&["count", n]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(stdout_str(&out).trim(), expected);
    }
    assert_eq!(crosscap(&["count", "1"]).status.code(), Some(2));
    assert_eq!(crosscap(&["count", "not-a-number"]).status.code(), Some(2));
}

#[test]
fn count_json_includes_half_factorization() {
    let out = crosscap(&["count", "14", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(stdout_str(&out).trim()).unwrap();
    assert_eq!(v["count"], 2);
    assert_eq!(v["half_factorization"][0]["prime"], 7);
    assert_eq!(v["half_factorization"][0]["residue_mod_8"], 7);

    let out = crosscap(&["count", "15", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(stdout_str(&out).trim()).unwrap();
    assert_eq!(v["count"], 0);
    assert!(v["half_factorization"].is_null());
}

#[test]
fn enumerate_json_records() {
    let out = crosscap(&["enumerate", "14", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let records: Vec<RecordJson> = serde_json::from_str(stdout_str(&out).trim()).unwrap();
    assert_eq!(records.len(), 2);
    assert_eq!(records[0].x, Some(4));
    assert_eq!(records[1].x, Some(10));
    assert!(records.iter().all(|r| r.group_order == 784));
    assert!(records.iter().all(|r| r.invariants.crosscaps == Some(121)));
    assert!(records.iter().all(|r| r.source == "constructive"));

    let out = crosscap(&["enumerate", "15", "--format", "json"]);
    let records: Vec<RecordJson> = serde_json::from_str(stdout_str(&out).trim()).unwrap();
    assert!(records.is_empty());
}

#[test]
fn invariants_command_and_rejections() {
    let out = crosscap(&["invariants", "14", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout_str(&out).trim(),
        "V=28 E=196 F=49 chi=-119 crosscaps=121 valency=14 covalency=8"
    );

    // x² ≡ 2 fails
    let out = crosscap(&["invariants", "14", "6"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("x² ≡ 2"));

    // n ≡ 0 (mod 4) impossible
    assert_eq!(crosscap(&["invariants", "12", "4"]).status.code(), Some(2));
    assert_eq!(crosscap(&["invariants", "13", "4"]).status.code(), Some(2));
}

#[test]
fn verify_without_brute_force() {
    let out = crosscap(&["verify", "2", "100", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let reports: Vec<ReportJson> = stdout_str(&out)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(reports.len(), 99);
    assert!(reports
        .iter()
        .all(|r| r.agreement && r.brute_count.is_none()));
    let n14 = reports.iter().find(|r| r.n == 14).unwrap();
    assert_eq!((n14.predicted, n14.constructive_count), (2, 2));
    // 2·7², both embeddings present
    let n98 = reports.iter().find(|r| r.n == 98).unwrap();
    assert_eq!((n98.predicted, n98.constructive_count), (2, 2));
}

#[test]
fn verify_argument_validation() {
    assert_eq!(crosscap(&["verify", "1", "5"]).status.code(), Some(2));
    assert_eq!(crosscap(&["verify", "5", "3"]).status.code(), Some(2));
    assert_eq!(
        crosscap(&["verify", "2", "20", "--brute", "15"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn export_files_reload_and_revalidate() {
    let dir = tempfile::tempdir().unwrap();
    let out = crosscap(&["enumerate", "14", "--export", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));

    let records = classify_constructive(14, &ClassifyConfig::default());
    for r in &records {
        let path = dir.path().join(mapio::export_file_name(r.n, r.x));
        let reloaded = mapio::read_flagmap(&path).unwrap();
        assert_eq!(reloaded, r.map);
        assert!(!reloaded.is_orientable());
    }

    // a corrupted file must fail revalidation
    let path = dir.path().join(mapio::export_file_name(14, Some(4)));
    let mut file: crosscap::json::FlagMapFile =
        serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    file.lambda[0] = file.lambda[1]; // no longer a bijection
    std::fs::write(&path, serde_json::to_vec(&file).unwrap()).unwrap();
    assert!(mapio::read_flagmap(&path).is_err());
}

#[test]
fn export_subcommand_lists_written_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = crosscap(&["export", "2", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let listing = stdout_str(&out);
    assert!(listing.contains("knn_n2_projective.json"));
    let map = mapio::read_flagmap(&dir.path().join("knn_n2_projective.json")).unwrap();
    assert_eq!(map.flag_count(), 16);
    let inv = map.invariants();
    assert_eq!((inv.vertices, inv.edges, inv.faces), (4, 4, 1));
    assert_eq!(inv.genus_or_crosscaps, 1);
}

#[test]
fn output_flag_writes_file_and_bad_path_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.txt");
    let out = crosscap(&["count", "14", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&path).unwrap().trim(), "2");

    let bad = Path::new("/nonexistent-dir/out.txt");
    let out = crosscap(&["count", "14", "--output", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}
