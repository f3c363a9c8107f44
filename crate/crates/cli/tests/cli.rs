use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use dromion::auxiliary::SeparationPolicy;
use dromion::catalog::build_case;
use dromion::specfile::load_spec;

fn dromion(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dromion")).args(args).output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn specs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("specs")
}

#[test]
fn spec_files_match_catalog() {
    for name in ["dromion", "solitoff", "resonant", "breather", "periodic", "double_instanton"] {
        let doc = load_spec(&specs().join(format!("{name}.toml"))).unwrap();
        let entry = build_case(name).unwrap();
        assert_eq!(doc.spec.coeffs(), entry.spec.coeffs(), "{name}");
        assert_eq!(doc.spec.p().family(), entry.spec.p().family(), "{name}");
        assert_eq!(doc.spec.funcs(), entry.spec.funcs(), "{name}");
        assert_eq!(doc.policy, SeparationPolicy::default());
        for (s, t) in [(-0.7, 0.0), (0.3, 0.4), (1.1, -0.9)] {
            assert_eq!(doc.spec.p().value(s, t).to_bits(), entry.spec.p().value(s, t).to_bits(), "{name}");
            assert_eq!(doc.spec.q().value(s, t).to_bits(), entry.spec.q().value(s, t).to_bits(), "{name}");
        }
    }
}

#[test]
fn catalog_lists_every_case() {
    let o = dromion(&["catalog"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for name in dromion::catalog::CASE_NAMES {
        assert!(text.contains(&format!("name: {name}\n")), "{name}");
    }
    assert!(text.contains("period: π\n"));
}

#[test]
fn render_csv_matches_header_and_size() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("u.csv");
    let o = dromion(&["render", "--case", "dromion", "--t", "0", "--res", "16", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("x,y,U\n"));
    assert_eq!(text.lines().count(), 1 + 16 * 16);
}

#[test]
fn render_pgm_writes_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("u.pgm");
    let o = dromion(&[
        "render", "--case", "solitoff", "--t", "0", "--res", "20", "--format", "pgm16", "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let bytes = std::fs::read(&out).unwrap();
    let header = b"P5\n20 20\n65535\n";
    assert_eq!(&bytes[..header.len()], header);
    assert_eq!(bytes.len(), header.len() + 2 * 20 * 20);
    let side = std::fs::read_to_string(dir.path().join("u.pgm.txt")).unwrap();
    assert!(side.contains("first_row: y_min\n"));
}

#[test]
fn render_phi_and_f() {
    let dir = tempfile::tempdir().unwrap();
    for field in ["phi", "f"] {
        let out = dir.path().join(format!("{field}.csv"));
        let o = dromion(&[
            "render", "--case", "dromion", "--t", "0", "--res", "8", "--field", field, "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{field}: {}", stderr(&o));
        let text = std::fs::read_to_string(&out).unwrap();
        assert!(text.starts_with(&format!("x,y,{field}\n")));
    }
}

#[test]
fn singular_case_exits_3_unless_allowed() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let args = ["render", "--case", "resonant", "--t", "0", "--res", "32", "--out", out.to_str().unwrap()];
    let o = dromion(&args);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).starts_with("singular: "), "{}", stderr(&o));
    assert!(!out.exists());
    let mut allowed = args.to_vec();
    allowed.push("--allow-singular");
    let o = dromion(&allowed);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(out.exists());
}

#[test]
fn degenerate_time_exits_3_with_symbolic_time() {
    let o = dromion(&["verify", "--case", "breather", "--t", "pi/2", "--res", "16", "--checks", "bilinear2"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stderr(&o).trim_end(), "degenerate: U ≡ 0 on the window at t = π/2");
}

#[test]
fn usage_errors_exit_2() {
    let cases: [&[&str]; 5] = [
        &["render", "--case", "dromion", "--t", "0"],
        &["render", "--case", "nope", "--t", "0", "--out", "x"],
        &["render", "--case", "dromion", "--t", "pi/0", "--out", "x"],
        &["render", "--case", "dromion", "--t", "0", "--res", "4", "--out", "x"],
        &["analyze", "--case", "dromion", "--peaks"],
    ];
    for args in cases {
        let o = dromion(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
    let o = dromion(&["render", "--case", "nope", "--t", "0", "--out", "x"]);
    assert!(stderr(&o).starts_with("unknown-case: "));
    assert!(stderr(&o).contains("double_instanton"));
}

#[test]
fn bad_spec_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, "[coeffs]\na0 = 1\n").unwrap();
    let o = dromion(&["verify", "--spec", path.to_str().unwrap(), "--t", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("config: "), "{}", stderr(&o));
}

#[test]
fn verify_writes_bundle() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v.txt");
    let o = dromion(&[
        "verify", "--case", "solitoff", "--t", "0.2", "--res", "12", "--checks", "bilinear2,bilinear1,pde2,consistency",
        "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    for check in ["bilinear2", "bilinear1", "pde2", "consistency"] {
        assert!(text.contains(&format!("{check}.status: pass\n")), "{check}\n{text}");
    }
    assert!(text.ends_with("overall: pass\n"));
    assert!(text.lines().all(|l| l.contains(": ")));
}

#[test]
fn verify_failure_exits_1() {
    let o = dromion(&[
        "verify", "--case", "dromion", "--t", "0", "--res", "12", "--checks", "pde1", "--step", "0.5", "--tol", "1e-12",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("pde1.status: fail\n"));
}

#[test]
fn analyze_period_of_breather() {
    let o = dromion(&["analyze", "--case", "breather", "--period", "0:2pi:64", "--res", "32"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("period_symbolic: π\n"), "{}", stdout(&o));
}

#[test]
fn analyze_peaks_and_decay() {
    let o = dromion(&["analyze", "--case", "double_instanton", "--peaks", "--t", "0", "--res", "128"]);
    assert!(stdout(&o).contains("local_maxima: 2\n"), "{}", stdout(&o));
    let o = dromion(&["analyze", "--case", "double_instanton", "--decay", "0,3,6", "--res", "64"]);
    let values: Vec<f64> = stdout(&o)
        .lines()
        .filter(|l| l.starts_with("decay."))
        .map(|l| l.split_whitespace().last().unwrap().parse().unwrap())
        .collect();
    assert_eq!(values.len(), 3);
    assert!(values[0] > values[1] && values[1] > values[2]);
}
