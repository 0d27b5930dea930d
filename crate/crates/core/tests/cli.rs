use std::path::Path;
use std::process::{Command, Output};

fn nlidm(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nlidm"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

#[test]
fn toy_ccdm_codec() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = nlidm(&["build", "--scheme", "ccdm", "--n", "2", "--k", "1", "--alphabet", "1,3", "--out", "t.scheme"], d);
    assert!(o.status.success());
    let o = nlidm(&["codec", "encode", "t.scheme", "0x0"], d);
    assert_eq!(stdout(&o), "1,3");
    let o = nlidm(&["codec", "decode", "t.scheme", "1,3"], d);
    assert_eq!(stdout(&o), "0x0");
    let o = nlidm(&["codec", "decode", "t.scheme", "3,3"], d);
    assert_eq!(o.status.code(), Some(3));
    let o = nlidm(&["codec", "encode", "t.scheme", "0xg"], d);
    assert_eq!(o.status.code(), Some(2));
    let o = nlidm(&["codec", "decode", "t.scheme", "1,x"], d);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = nlidm(&["build", "--scheme", "ccdm", "--n", "216", "--k", "433", "--out", "x"], d);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("rate infeasible"));
    let o = nlidm(&["build", "--scheme", "nope", "--n", "4", "--k", "2", "--out", "x"], d);
    assert_eq!(o.status.code(), Some(2));
    let o = nlidm(&["build", "--scheme", "ccdm", "--n", "four", "--k", "2", "--out", "x"], d);
    assert_eq!(o.status.code(), Some(2));
    let o = nlidm(&["build", "--scheme", "ccdm", "--n", "4", "--k", "2", "--alphabet", "3,1", "--out", "x"], d);
    assert_eq!(o.status.code(), Some(2));
    let o = nlidm(&["analyze", "missing.scheme", "--out", "p"], d);
    assert_eq!(o.status.code(), Some(3));
    std::fs::write(d.join("bad.cfg"), "gamma=1\n").unwrap();
    let o = nlidm(&["compare", "--n", "8", "--k", "10", "--config", "bad.cfg"], d);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn toy_mpdm_build_and_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = nlidm(&["build", "--scheme", "mpdm", "--n", "4", "--k", "2", "--alphabet", "1,3", "--out", "m.scheme"], d);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = nlidm(&["analyze", "m.scheme", "--out", "m", "--bins", "0.05"], d);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for s in ["scatter", "histogram", "cdf", "aggregates"] {
        let text = std::fs::read_to_string(d.join(format!("m_{s}.csv"))).unwrap();
        assert!(text.lines().count() >= 2);
        assert!(text.ends_with('\n'));
    }
    let scatter = std::fs::read_to_string(d.join("m_scatter.csv")).unwrap();
    let w: f64 = scatter.lines().skip(1).map(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap()).sum();
    assert!((w - 1.0).abs() < 1e-9);
}

#[test]
fn calibration_required_without_mpdm() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    // n=3, k=3 on {1,3} needs all 8 sequences: ESS exists, MPDM does not
    let o = nlidm(&["build", "--scheme", "mpdm", "--n", "3", "--k", "3", "--alphabet", "1,3", "--out", "m.scheme"], d);
    assert_eq!(o.status.code(), Some(1));
    let o = nlidm(&["build", "--scheme", "ess", "--n", "3", "--k", "3", "--alphabet", "1,3", "--out", "e.scheme"], d);
    assert!(o.status.success());
    let o = nlidm(&["analyze", "e.scheme", "--out", "e"], d);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("calibration required"));
    std::fs::write(d.join("phys.cfg"), "eta1=5000\n").unwrap();
    let o = nlidm(&["analyze", "e.scheme", "--out", "e", "--config", "phys.cfg"], d);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn build_is_byte_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for out in ["a.scheme", "b.scheme"] {
        let o = nlidm(&["build", "--scheme", "opt-mpdm", "--n", "24", "--k", "36", "--out", out], d);
        assert!(o.status.success());
    }
    assert_eq!(std::fs::read(d.join("a.scheme")).unwrap(), std::fs::read(d.join("b.scheme")).unwrap());
}

#[test]
fn compare_writes_table() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = nlidm(&["compare", "--n", "24", "--k", "36", "--out", "t.csv"], d);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(d.join("t.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "scheme,n_compositions,rate_loss,max_snr_db,min_snr_db,p2p_db,avg_snr_db");
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("ccdm,1,"));
}
