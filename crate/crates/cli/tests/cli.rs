use std::process::{Command, Output};

use latsum_core::asymptotics::ResidualReport;
use latsum_core::sums::fn_direct;
use latsum_core::{LatticeSpec, SumResult};

fn latsum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latsum")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn gn_n2_is_one() {
    let o = latsum(&["eval", "gn", "--form", "1,0,1", "--n", "2", "--method", "direct"]);
    assert_eq!(code(&o), 0);
    let r: SumResult = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.value, 1.0);
}

#[test]
fn square_f1_leading_coefficient() {
    let o = latsum(&["eval", "expansion", "--spec", "square", "--target", "fn_f1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("\"c_n2logn\": 0.6366197723675814"));
}

#[test]
fn fn_matches_library_bit_for_bit() {
    let o = latsum(&["eval", "fn", "--spec", "unionjack", "--n", "64"]);
    assert_eq!(code(&o), 0);
    let r: SumResult = serde_json::from_str(&stdout(&o)).unwrap();
    let lib = fn_direct(&LatticeSpec::union_jack(), 64, None, None).unwrap();
    assert_eq!(r, lib);
}

#[test]
fn csv_sweep_is_ordered_and_round_trips() {
    let o = latsum(&["eval", "fn", "--spec", "triangular", "--n", "40,7,19", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,value,method,err_estimate"));
    let spec = LatticeSpec::triangular();
    for (line, n) in lines.zip([40usize, 7, 19]) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[0].parse::<usize>().unwrap(), n);
        let value: f64 = cols[1].parse().unwrap();
        assert_eq!(value, fn_direct(&spec, n, None, None).unwrap().value);
        assert_eq!(cols[2], "direct");
    }
}

#[test]
fn thread_override_keeps_values() {
    let run = |threads: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_latsum"))
            .env("LATTICE_SUM_THREADS", threads)
            .args(["eval", "fn", "--spec", "square", "--n", "128"])
            .output()
            .unwrap();
        assert_eq!(code(&o), 0);
        stdout(&o)
    };
    assert_eq!(run("1"), run("3"));

    let o = Command::new(env!("CARGO_BIN_EXE_latsum"))
        .env("LATTICE_SUM_THREADS", "many")
        .args(["eval", "hn", "--n", "5"])
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn spec_file_path() {
    let dir = std::env::temp_dir().join(format!("latsum-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("b2.json");
    std::fs::write(&path, LatticeSpec::union_jack().to_json()).unwrap();
    let o = latsum(&["eval", "fn", "--spec", path.to_str().unwrap(), "--n", "64"]);
    let by_name = latsum(&["eval", "fn", "--spec", "unionjack", "--n", "64"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), stdout(&by_name));

    std::fs::write(&path, "{\"vectors\": [[0, 1], [1, 0]]}").unwrap();
    let bad = latsum(&["eval", "fn", "--spec", path.to_str().unwrap(), "--n", "8"]);
    assert_eq!(code(&bad), 2);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn exit_codes() {
    assert_eq!(code(&latsum(&["eval", "nonsense", "--n", "3"])), 2);
    assert_eq!(code(&latsum(&["eval", "gn", "--n", "3"])), 2);
    assert_eq!(code(&latsum(&["eval", "gn", "--form", "1,2", "--n", "3"])), 2);
    assert_eq!(code(&latsum(&["eval", "gn", "--form", "1,3,1", "--n", "3"])), 2);
    assert_eq!(code(&latsum(&["eval", "hn", "--n", "4", "--method", "quadrature"])), 2);
    // computation failures
    let o = latsum(&["eval", "graph", "--spec", "unionjack", "--n", "2"]);
    assert_eq!(code(&o), 3);
    assert!(o.stdout.is_empty());
    assert!(!o.stderr.is_empty());
    assert_eq!(code(&latsum(&["eval", "fn", "--spec", "square", "--n", "8", "--m", "2"])), 3);
}

#[test]
fn graph_report() {
    let o = latsum(&["eval", "graph", "--spec", "square", "--n", "3", "--dense"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let trace = v["trace"].as_f64().unwrap();
    let dense = v["trace_dense"].as_f64().unwrap();
    assert!((trace - dense).abs() < 1e-12);
    assert_eq!(v["vertices"], 9);
    assert_eq!(v["degree"], 4);
}

fn certify(args: &[&str]) -> (i32, ResidualReport) {
    let mut full = vec!["certify"];
    full.extend_from_slice(args);
    let o = latsum(&full);
    (code(&o), serde_json::from_str(&stdout(&o)).unwrap())
}

#[test]
fn certify_gn_order() {
    let (c, r) = certify(&["--claim", "thm3", "--form", "1,0,1", "--nmin", "100", "--nmax", "1600"]);
    assert_eq!(c, 0);
    assert!(r.passed);
    assert_eq!(r.samples.len(), 5);
}

#[test]
fn certify_difference_m2() {
    let (c, r) = certify(&["--claim", "thm2-m2", "--spec", "square", "--nmin", "33", "--nmax", "512"]);
    assert_eq!(c, 0);
    assert!(r.passed);
    assert_eq!(r.samples.iter().map(|s| s.0).collect::<Vec<_>>(), vec![33, 65, 129, 257]);
}

#[test]
fn certify_f1_order() {
    let (c, r) = certify(&["--claim", "thm4", "--spec", "triangular", "--nmin", "101", "--nmax", "801"]);
    assert_eq!(c, 0);
    assert!(r.passed);
}

#[test]
fn certify_exit_status_tracks_report() {
    // the even-parity claim needs an even ladder
    let o = latsum(&["certify", "--claim", "thm5-even", "--spec", "square", "--nmin", "33", "--nmax", "512"]);
    assert_eq!(code(&o), 2);
    let (c, r) = certify(&["--claim", "thm3", "--form", "1,0,1", "--nmin", "4", "--nmax", "40"]);
    assert_eq!(c, if r.passed { 0 } else { 1 });
    // two rungs are too few to fit
    assert_eq!(code(&latsum(&["certify", "--claim", "thm3", "--form", "1,0,1", "--nmin", "100", "--nmax", "300"])), 3);
}
