use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::{Command, Output};

use qg_core::parse_graph;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    p.display().to_string()
}

fn qg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qg")).args(args).output().expect("qg runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Table rows below the header, split into cells.
fn rows(o: &Output) -> Vec<Vec<String>> {
    let text = stdout(o);
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let width = lines.next().expect("header").split('\t').count();
    lines
        .map(|l| {
            let cells: Vec<String> = l.split('\t').map(String::from).collect();
            assert_eq!(cells.len(), width, "ragged row {l:?}");
            cells
        })
        .collect()
}

fn value(o: &Output, name: &str) -> String {
    rows(o)
        .into_iter()
        .find(|r| r[0] == "value" && r[1] == name)
        .unwrap_or_else(|| panic!("no value {name}"))[2]
        .clone()
}

fn all_checks_pass(o: &Output) -> bool {
    rows(o).iter().filter(|r| r[0] == "check").all(|r| r[5] == "PASS" || r[5].starts_with("SKIP"))
}

fn lambdas(o: &Output, method: &str) -> Vec<(f64, String)> {
    rows(o)
        .into_iter()
        .filter(|r| r[2] == method)
        .map(|r| (r[0].parse().unwrap(), r[1].clone()))
        .collect()
}

#[test]
fn equilateral_spectrum_of_triangle() {
    let o = qg(&["spectrum", &data("triangle.graph"), "--lmax", "20", "--method", "equilateral"]);
    assert_eq!(o.status.code(), Some(0));
    let got = lambdas(&o, "equilateral");
    let expect = [(0.0, "1"), ((2.0 * PI / 3.0).powi(2), "2"), ((4.0 * PI / 3.0).powi(2), "2")];
    assert_eq!(got.len(), expect.len());
    for ((v, m), (x, n)) in got.iter().zip(expect) {
        assert!((v - x).abs() < 1e-9, "{v} vs {x}");
        assert_eq!(m, n);
    }
}

#[test]
fn interval_dtn_windows_and_bond_rows() {
    let o = qg(&["spectrum", &data("interval.graph"), "--lmax", "40", "--method", "dtn"]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&o);
    assert_eq!(r[0][0], "0");
    let windows: Vec<f64> = r.iter().filter(|x| x[4] == "unresolved").map(|x| x[0].parse().unwrap()).collect();
    assert_eq!(windows.len(), 2);
    assert!((windows[0] - PI * PI).abs() < 1e-4 && (windows[1] - 4.0 * PI * PI).abs() < 1e-3);

    let o = qg(&["spectrum", &data("interval.graph"), "--lmax", "40", "--method", "bond"]);
    let got = lambdas(&o, "bond");
    assert_eq!(got.len(), 3);
    assert!((got[1].0 - PI * PI).abs() < 1e-8 && (got[2].0 - 4.0 * PI * PI).abs() < 1e-8);
}

#[test]
fn all_methods_agree_on_triangle() {
    let o = qg(&["spectrum", &data("triangle.graph"), "--method", "all"]);
    assert_eq!(o.status.code(), Some(0));
    let statuses: Vec<String> = rows(&o).into_iter().map(|r| r[4].clone()).collect();
    assert!(statuses.iter().all(|s| s != "inconsistent"));
    assert!(statuses.iter().any(|s| s == "unresolved"));
}

#[test]
fn coarse_finite_elements_are_reported_inconsistent() {
    let o = qg(&["spectrum", &data("triangle.graph"), "--method", "all", "--fem-n", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(rows(&o).iter().any(|r| r[2] == "fem" && r[4] == "inconsistent"));
}

#[test]
fn index_reports() {
    for (file, h0, h1, index) in [
        ("triangle.graph", "1", "1", "0"),
        ("theta.graph", "1", "2", "-1"),
        ("triangle_max.graph", "3", "0", "3"),
    ] {
        let o = qg(&["index", &data(file)]);
        assert_eq!(o.status.code(), Some(0), "{file}");
        assert_eq!(value(&o, "discrete.h0"), h0);
        assert_eq!(value(&o, "discrete.h1"), h1);
        assert_eq!(value(&o, "metric.index"), index);
        assert_eq!(value(&o, "dim_minus_edges"), index);
        assert!(all_checks_pass(&o));
    }
}

#[test]
fn trace_reports() {
    let o = qg(&["trace", &data("triangle.graph"), "--t", "0.1", "--mode", "metric", "--cutoff", "12"]);
    assert_eq!(o.status.code(), Some(0));
    let f: f64 = value(&o, "formula").parse().unwrap();
    assert!((f - 2.6762).abs() < 1e-4);
    assert!(all_checks_pass(&o));

    let o = qg(&["trace", &data("triangle.graph"), "--t", "1", "--mode", "discrete", "--terms", "40"]);
    assert_eq!(o.status.code(), Some(0));
    let f: f64 = value(&o, "formula").parse().unwrap();
    assert!((f - (1.0 + 2.0 * (-1.5f64).exp())).abs() < 1e-11);

    let o = qg(&["trace", &data("interval.graph"), "--t", "0.1", "--mode", "metric"]);
    assert_eq!(o.status.code(), Some(0));
    let weyl: f64 = value(&o, "weyl").parse().unwrap();
    assert!((weyl - 1.0 / (2.0 * (0.1 * PI).sqrt())).abs() < 1e-11);
    assert_eq!(value(&o, "constant"), "0.5");
    let exact: f64 = (0..200).map(|k| (-0.1 * (k as f64 * PI).powi(2)).exp()).sum();
    let f: f64 = value(&o, "formula").parse().unwrap();
    assert!((f - exact).abs() < 1e-10);
}

#[test]
fn cheeger_reports() {
    let o = qg(&["cheeger", &data("triangle.graph"), "--carve-depth", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(value(&o, "h_ub"), "4/3");
    assert_eq!(value(&o, "boundary_points"), "2");
    assert!(all_checks_pass(&o));
    let o = qg(&["cheeger", &data("triangle.graph"), "--discrete"]);
    assert_eq!(value(&o, "h"), "1");
    assert!(all_checks_pass(&o));
}

#[test]
fn decompose_splits_and_round_trips() {
    let o = qg(&["decompose", &data("split.graph")]);
    assert_eq!(o.status.code(), Some(0));
    let (g, t) = parse_graph(&stdout(&o)).unwrap();
    assert_eq!(g.vertex_count(), 6);
    let c1 = g.vertex_index("c#1").unwrap();
    let c2 = g.vertex_index("c#2").unwrap();
    let edges = |v: usize| -> Vec<String> { g.slots(v).iter().map(|s| g.edge(s.edge).name.clone()).collect() };
    assert_eq!(edges(c1), ["e1", "e3"]);
    assert_eq!(edges(c2), ["e2", "e4"]);
    assert_eq!(t.dim(), 6);

    let o = qg(&["decompose", &data("magnetic.graph")]);
    let (g, _) = parse_graph(&stdout(&o)).unwrap();
    assert_eq!(g.vertex_count(), 5);
}

#[test]
fn verify_triangle_passes() {
    let o = qg(&["verify", &data("triangle.graph"), "--lmax", "20"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(rows(&o).len() > 20);
    assert!(rows(&o).iter().all(|r| r[5] == "PASS"));
}

#[test]
fn exit_codes() {
    assert_eq!(qg(&["index", &data("bad.graph")]).status.code(), Some(2));
    assert_eq!(qg(&["index", &data("missing.graph")]).status.code(), Some(2));
    let o = qg(&["spectrum", &data("split.graph"), "--method", "equilateral"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("equal edge lengths"));
    assert_eq!(qg(&["cheeger", &data("split.graph")]).status.code(), Some(3));
    assert_eq!(qg(&["trace", &data("triangle.graph"), "--t", "0"]).status.code(), Some(3));
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["spectrum", "--method", "all"],
        vec!["trace", "--t", "0.5"],
        vec!["cheeger"],
    ] {
        let mut a = args.clone();
        let file = data("theta.graph");
        a.insert(1, &file);
        let first = qg(&a);
        let second = qg(&a);
        assert_eq!(first.stdout, second.stdout);
        assert!(stdout(&first).contains("sha256:"));
    }
}
