use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn pta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pta")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pta-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Header plus rows, checking every row has the header's width and every
/// cell outside `text_cols` parses as a number.
fn parse_csv(path: &Path, text_cols: &[&str]) -> (Vec<String>, Vec<Vec<String>>) {
    let text = std::fs::read_to_string(path).unwrap();
    assert!(!text.contains('\r'), "{}", path.display());
    let mut lines = text.lines();
    let header: Vec<String> = lines.next().unwrap().split(',').map(String::from).collect();
    let rows: Vec<Vec<String>> = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    for row in &rows {
        assert_eq!(row.len(), header.len(), "{}", path.display());
        for (cell, col) in row.iter().zip(&header) {
            if !text_cols.contains(&col.as_str()) {
                cell.parse::<f64>().unwrap_or_else(|_| panic!("{}: `{cell}` in {col}", path.display()));
            }
        }
    }
    (header, rows)
}

#[test]
fn generate_writes_one_file_per_step_and_the_walk() {
    let out = scratch("generate");
    let run = pta(&["generate", "--out", s(&out)]);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    for k in 0..3 {
        let (header, rows) = parse_csv(&out.join(format!("step_{k:03}.csv")), &["phase"]);
        assert_eq!(rows.len(), 500);
        assert_eq!(&header[..6], ["t", "hip_x", "hip_y", "hip_z", "foot_x", "foot_z"]);
    }
    let (_, walk) = parse_csv(&out.join("walk.csv"), &["phase"]);
    assert_eq!(walk.len(), 3 * 500 + 1);
}

#[test]
fn generate_matches_the_golden_file() {
    let a = scratch("golden-a");
    let b = scratch("golden-b");
    let cfg = golden("small.cfg");
    for dir in [&a, &b] {
        assert_eq!(pta(&["generate", "--config", s(&cfg), "--out", s(dir)]).status.code(), Some(0));
    }
    let first = std::fs::read(a.join("step_000.csv")).unwrap();
    assert_eq!(first, std::fs::read(b.join("step_000.csv")).unwrap());
    assert_eq!(std::fs::read(a.join("walk.csv")).unwrap(), std::fs::read(b.join("walk.csv")).unwrap());
    assert_eq!(first, std::fs::read(golden("step_000.csv")).unwrap());
}

#[test]
fn flags_override_the_config() {
    let out = scratch("flags");
    let cfg = golden("small.cfg");
    let run = pta(&["generate", "--config", s(&cfg), "--steps", "2", "--dt", "0.1", "--generator", "lipm", "--out", s(&out)]);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    let (_, rows) = parse_csv(&out.join("step_001.csv"), &["phase"]);
    assert_eq!(rows.len(), 25);
}

#[test]
fn malformed_config_exits_2_without_output() {
    let out = scratch("malformed");
    let cfg = out.with_extension("cfg");
    std::fs::write(&cfg, "single_support = 2\ndt = soon\n").unwrap();
    let run = pta(&["generate", "--config", s(&cfg), "--out", s(&out)]);
    assert_eq!(run.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&run.stderr).contains("`dt`"));
    assert!(!out.exists());
}

#[test]
fn invalid_gait_and_arguments_exit_2() {
    let out = scratch("invalid");
    assert_eq!(pta(&["generate", "--dt", "0.003", "--out", s(&out)]).status.code(), Some(2));
    assert_eq!(pta(&["generate", "--generator", "ipm", "--out", s(&out)]).status.code(), Some(2));
    assert_eq!(pta(&["experiment", "--which", "3", "--out", s(&out)]).status.code(), Some(2));
    assert_eq!(pta(&["generate", "--config", "/nonexistent/pta.cfg"]).status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn unreachable_walk_exits_3() {
    let out = scratch("unreachable");
    let cfg = out.with_extension("cfg");
    std::fs::write(&cfg, "hip_height = 40\n").unwrap();
    let run = pta(&["generate", "--config", s(&cfg), "--out", s(&out)]);
    assert_eq!(run.status.code(), Some(3), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stderr).contains("unreachable"));
}

#[test]
fn zmp_trace_round_trips() {
    let out = scratch("zmp");
    assert_eq!(pta(&["zmp", "--steps", "2", "--out", s(&out)]).status.code(), Some(0));
    let (header, rows) = parse_csv(&out.join("zmp.csv"), &[]);
    assert_eq!(header, ["t", "x_zmp", "y_zmp", "x_s", "y_s", "in_region"]);
    assert_eq!(rows.len(), 2 * 500 + 1);
    assert!(rows.iter().all(|r| r[5] == "0" || r[5] == "1"));
}

#[test]
fn experiments_and_compare_write_parseable_tables() {
    let out = scratch("experiments");
    assert_eq!(pta(&["experiment", "--which", "1", "--out", s(&out)]).status.code(), Some(0));
    assert_eq!(pta(&["experiment", "--which", "2", "--steps", "3", "--generator", "pta", "--out", s(&out)]).status.code(), Some(0));
    let run = pta(&["compare", "--out", s(&out)]);
    assert_eq!(run.status.code(), Some(0));

    for generator in ["pta", "lipm"] {
        let (_, impacts) = parse_csv(&out.join(format!("experiment1_{generator}_impacts.csv")), &[]);
        assert_eq!(impacts.len(), 1);
        parse_csv(&out.join(format!("experiment1_{generator}_zmp.csv")), &[]);
        parse_csv(&out.join(format!("experiment1_{generator}_walk.csv")), &["phase"]);
    }
    let (_, impacts) = parse_csv(&out.join("experiment2_pta_impacts.csv"), &[]);
    assert_eq!(impacts.len(), 3);
    assert!(!out.join("experiment2_lipm_impacts.csv").exists());
    let summary = std::fs::read_to_string(out.join("experiment2_summary.txt")).unwrap();
    assert!(summary.contains("3/3") && summary.contains("completed"));

    let (header, rows) = parse_csv(&out.join("compare.csv"), &["generator"]);
    assert_eq!(header[0], "generator");
    assert_eq!(rows.iter().map(|r| r[0].as_str()).collect::<Vec<_>>(), ["pta", "lipm"]);
}
