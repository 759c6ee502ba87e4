mod common;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cheegerlab::cli::{parse_grid, parse_list};
use serde_json::Value;

const SQUARE: &str = r#"{"vertices": [[0,0],[1,0],[1,1],[0,1]]}"#;
const RECTANGLE: &str = r#"{"vertices": [[0,0],[2,0],[2,1],[0,1]]}"#;

fn input(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str], input: &Path, out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cheegerlab"))
        .args(args)
        .arg("--input")
        .arg(input)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn stdout_json(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn stderr_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr).unwrap()
}

/// Checks every filled path of an SVG against the volumes listed in a CSV column.
fn svg_matches_csv(svg: &Path, csv: &Path, column: usize) {
    let svg = fs::read_to_string(svg).unwrap();
    let areas: Vec<f64> = common::svg_set_paths(&svg).iter().map(|(_, d)| common::svg_path_area(d)).collect();
    let volumes: Vec<f64> = fs::read_to_string(csv)
        .unwrap()
        .lines()
        .skip(1)
        .filter_map(|l| l.split(',').nth(column)?.parse().ok())
        .collect();
    assert!(!areas.is_empty());
    for a in &areas {
        assert!(volumes.iter().any(|v| (a - v).abs() <= 1e-6 * v), "svg area {a} not in {volumes:?}");
    }
}

#[test]
fn cheeger_square() {
    let dir = tempfile::tempdir().unwrap();
    let sq = input(dir.path(), "square.json", SQUARE);
    let o = run(&["cheeger", "--json"], &sq, dir.path());
    let v = stdout_json(&o);
    let h = v["h"].as_f64().unwrap();
    assert!((h - 3.7724539).abs() < 1e-7);
    let svg = fs::read_to_string(dir.path().join("cheeger_set.svg")).unwrap();
    let paths = common::svg_set_paths(&svg);
    assert_eq!(paths.len(), 1);
    let area = common::svg_path_area(&paths[0].1);
    let volume = v["volume"].as_f64().unwrap();
    assert!((area - volume).abs() <= 1e-6 * volume);
    assert!(paths[0].1.starts_with('M') && paths[0].1.ends_with('Z'));
}

#[test]
fn vmap_square() {
    let dir = tempfile::tempdir().unwrap();
    let sq = input(dir.path(), "square.json", SQUARE);
    let o = run(&["vmap", "--p-grid", "0.51:0.99:49"], &sq, dir.path());
    assert!(o.status.success());
    let csv = fs::read_to_string(dir.path().join("vmap.csv")).unwrap();
    let vols: Vec<f64> = csv.lines().skip(1).map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
    assert_eq!(vols.len(), 49);
    assert!(vols.windows(2).all(|w| w[1] > w[0]));
    let report: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("vmap.json")).unwrap()).unwrap();
    for key in ["monotonicity", "injectivity", "continuity"] {
        assert_eq!(report[key]["status"], "pass", "{key}");
    }
}

#[test]
fn dumbbell_exits_with_neck_code() {
    let dir = tempfile::tempdir().unwrap();
    let text = serde_json::json!({ "vertices": common::DUMBBELL }).to_string();
    let db = input(dir.path(), "dumbbell.json", &text);
    for cmd in ["inspect", "profile", "cheeger"] {
        let o = run(&[cmd], &db, dir.path());
        assert_eq!(o.status.code(), Some(3), "{cmd}");
        let e = stderr_json(&o);
        assert_eq!(e["kind"], "neck");
        assert_eq!(e["no_neck"]["passes"], false);
    }
    // the oracle makes no assumption and still runs
    let o = run(&["oracle", "--h", "0.015625", "--json"], &db, dir.path());
    let v = stdout_json(&o);
    assert_eq!(v["no_neck"], false);
    assert!(v["max_deviation"].as_f64().unwrap() > 0.05);
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let sq = input(dir.path(), "square.json", SQUARE);
    let bad = input(dir.path(), "bad.json", r#"{"vertices": [[0,0],[1,0]]}"#);
    let cases: Vec<Output> = vec![
        run(&["inspect", "--bogus"], &sq, dir.path()),
        run(&["inspect"], &dir.path().join("missing.json"), dir.path()),
        run(&["inspect"], &bad, dir.path()),
        run(&["vmap", "--p-grid", "0.6:0.5"], &sq, dir.path()),
        run(&["vmap", "--p-grid", "0.7:0.6:3"], &sq, dir.path()),
        run(&["pcheeger", "--p", "0.2"], &sq, dir.path()),
        run(&["oracle", "--stencil", "6"], &sq, dir.path()),
        run(&["render"], &sq, dir.path()),
        run(&["profile", "--n-r", "2"], &sq, dir.path()),
    ];
    for (k, o) in cases.iter().enumerate() {
        assert_eq!(o.status.code(), Some(2), "case {k}: {}", String::from_utf8_lossy(&o.stderr));
        let e = stderr_json(o);
        assert_eq!(e["exit_code"], 2);
        assert!(e["error"].is_string());
    }
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let sq = input(dir.path(), "rect.json", RECTANGLE);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let threads = if out == &a { "1" } else { "4" };
        for args in [&["profile"][..], &["vmap", "--p-grid", "0.55:0.95:9"], &["pcheeger", "--p", "0.6,1,2"]] {
            let o = Command::new(env!("CARGO_BIN_EXE_cheegerlab"))
                .env("CHEEGERLAB_THREADS", threads)
                .args(args)
                .arg("--input")
                .arg(&sq)
                .arg("--out")
                .arg(out)
                .output()
                .unwrap();
            assert!(o.status.success());
        }
    }
    for name in [
        "profile.csv",
        "profile_summary.json",
        "vmap.csv",
        "vmap.json",
        "pcheeger.csv",
        "pcheeger.json",
        "pcheeger_p0.6.svg",
    ] {
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap(), "{name}");
    }
    let leftovers = fs::read_dir(&a)
        .unwrap()
        .filter(|e| e.as_ref().unwrap().file_name().to_string_lossy().ends_with(".tmp"))
        .count();
    assert_eq!(leftovers, 0);
}

#[test]
fn svg_areas_match_csv_volumes() {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in [("square.json", SQUARE), ("rect.json", RECTANGLE)] {
        let d = input(dir.path(), name, text);
        let out = dir.path().join(name.trim_end_matches(".json"));
        assert!(run(&["render", "--kappa", "3,8", "--volume", "0.9", "--p", "0.7,1.5"], &d, &out).status.success());
        svg_matches_csv(&out.join("render.svg"), &out.join("render.csv"), 1);
        assert!(run(&["pcheeger", "--p", "0.6,0.8,1,3"], &d, &out).status.success());
        for p in ["0.6", "0.8", "1", "3"] {
            svg_matches_csv(&out.join(format!("pcheeger_p{p}.svg")), &out.join("pcheeger.csv"), 2);
        }
    }
}

#[test]
fn oracle_writes_sweep_and_masks() {
    let dir = tempfile::tempdir().unwrap();
    let sq = input(dir.path(), "square.json", SQUARE);
    let o =
        run(&["oracle", "--h", "0.03125", "--kappa", "3,10", "--masks", "--stencil", "8", "--json"], &sq, dir.path());
    let v = stdout_json(&o);
    assert_eq!(v["points"].as_array().unwrap().len(), 2);
    let csv = fs::read_to_string(dir.path().join("oracle_sweep.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "kappa,volume,perimeter,value,h,stencil");
    assert!(csv.lines().nth(1).unwrap().ends_with(",0.03125,8"));
    let pbm = fs::read_to_string(dir.path().join("oracle_mask_1.pbm")).unwrap();
    assert!(pbm.starts_with("P1\n32 32\n"));
}

#[test]
fn list_syntax() {
    assert_eq!(parse_grid("0.5:1:3").unwrap().0, vec![0.5, 0.75, 1.0]);
    assert_eq!(parse_grid("2:2:1").unwrap().0, vec![2.0]);
    assert!(parse_grid("1:2").is_err());
    assert!(parse_grid("1:2:0").is_err());
    assert!(parse_grid("a:2:3").is_err());
    assert_eq!(parse_list("1, 2.5,3").unwrap().0, vec![1.0, 2.5, 3.0]);
    assert!(parse_list("1,,2").is_err());
    assert!(parse_list("nan").is_err());
}
