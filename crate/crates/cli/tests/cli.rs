use hannay_vdp_cli::run;
use hannay_vdp_cli::table::ResultTable;
use std::process::Command;

fn call(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("hannay-vdp").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn no_arguments_prints_usage_and_exits_1() {
    let o = Command::new(env!("CARGO_BIN_EXE_hannay-vdp")).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
}

#[test]
fn freq_prints_series_value() {
    let (code, out, _) = call(&["freq", "--omega", "1", "--eps", "0.3"]);
    assert_eq!(code, 0);
    assert!(out.contains("0.9944198242"), "{out}");
}

#[test]
fn hannay_prints_quadrature_and_delta() {
    let (code, out, _) = call(&["hannay", "--loop", "square", "--omega", "0.6:0.8", "--eps", "0.1:0.3"]);
    assert_eq!(code, 0);
    assert!(out.contains("0.0104166667"), "{out}");
    assert!(out.contains("reference 0.0104"), "{out}");
}

#[test]
fn ellipse_flags_reference_discrepancy() {
    let (code, out, _) = call(&["hannay", "--loop", "ellipse"]);
    assert_eq!(code, 0);
    assert!(out.contains("0.0128787859") && out.contains("warning"), "{out}");
}

#[test]
fn empty_cycle_list_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"cycles": []}"#).unwrap();
    let (code, _, err) = call(&["fig1", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("cycles list is empty"), "{err}");
}

#[test]
fn invalid_parameters_exit_1() {
    assert_eq!(call(&["freq", "--omega", "-1"]).0, 1);
    assert_eq!(call(&["freq", "--order", "5"]).0, 1);
    assert_eq!(call(&["hannay", "--loop", "square", "--omega", "0.8:0.6"]).0, 1);
    assert_eq!(call(&["bogus"]).0, 1);
}

#[test]
fn same_config_gives_identical_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.csv");
    let p = path.to_str().unwrap();
    let args = ["geophase", "--cycles", "100,200", "--nodes", "9", "--n-theta", "64", "--out", p];
    assert_eq!(call(&args).0, 0);
    let first = std::fs::read(&path).unwrap();
    assert_eq!(call(&args).0, 0);
    assert_eq!(first, std::fs::read(&path).unwrap());
    let t = ResultTable::from_csv(&String::from_utf8(first).unwrap()).unwrap();
    assert!(t.header.iter().any(|h| h.contains("\"tol\":1e-11") && h.contains("\"order\":4")));
    assert_eq!(t.column("ok").unwrap(), vec![1.0, 1.0]);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"omega": 1.0, "eps": 0.1}"#).unwrap();
    let c = cfg.to_str().unwrap();
    let (_, from_file, _) = call(&["freq", "--config", c]);
    assert!(from_file.contains("0.9993755534"), "{from_file}");
    let (_, overridden, _) = call(&["freq", "--config", c, "--eps", "0.3"]);
    assert!(overridden.contains("0.9944198242"), "{overridden}");
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"omegaa": 1.0}"#).unwrap();
    assert_eq!(call(&["freq", "--config", cfg.to_str().unwrap()]).0, 1);
}

#[test]
fn csv_round_trips_through_the_reader() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.csv");
    assert_eq!(call(&["hannay", "--out", path.to_str().unwrap()]).0, 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let t = ResultTable::from_csv(&text).unwrap();
    assert_eq!(t.to_csv(), text);
    let q = t.column("line_quadrature").unwrap()[0];
    assert!((q - 0.6 / 57.6).abs() < 1e-12);
}

#[test]
fn failed_sweep_rows_are_marked_and_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("e.csv");
    let svg = dir.path().join("e.svg");
    let args = ["fig1", "--loop", "ellipse", "--cycles", "50,100", "--nodes", "9", "--n-theta", "64"];
    let (code, out, _) = call(&[&args[..], &["--out", path.to_str().unwrap(), "--svg", svg.to_str().unwrap()]].concat());
    assert_eq!(code, 2, "{out}");
    let t = ResultTable::from_csv(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(t.column("ok").unwrap(), vec![0.0, 1.0]);
    assert!(t.column("geometric_phase").unwrap()[0].is_nan());
    assert!(t.header.iter().any(|h| h.contains("failed")));
    assert!(std::fs::read_to_string(&svg).unwrap().contains("phi_H"));
}

#[test]
fn selftest_passes() {
    let (code, out, _) = call(&["selftest"]);
    assert_eq!(code, 0, "{out}");
    assert!(!out.contains("FAIL"));
}

#[test]
fn resonance_reports_deviation() {
    let (code, out, _) = call(&["resonance", "--eps", "0.05"]);
    assert_eq!(code, 0);
    assert!(out.contains("resonant: true"), "{out}");
}
