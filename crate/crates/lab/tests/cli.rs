use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use gausson_lab::emit::config_from_json;
use gausson_lab::presets::preset;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_gausson-lab"));
    c.env_remove("GAUSSON_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

const DIMER: &str = r#"{"system":"dimer","inputs":[{"r":0.5},{"r":0.5}],
    "sweep":{"variable":"kz","start":0,"stop":1.5707963267948966,"steps":3},"outputs":["coeffs","variances"]}"#;

#[test]
fn lists_presets() {
    let o = run(&["presets"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    for name in ["fig2", "fig3", "fig4", "fig5", "fig6", "fig7"] {
        assert!(text.lines().any(|l| l == name), "{name}");
    }
}

#[test]
fn csv_to_stdout() {
    let o = run(&["run", "--preset", "fig2", "--steps", "5"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("kz,Z_a_re,Z_a_im,"));
    assert_eq!(lines.count(), 5);
}

#[test]
fn config_file_with_json_out() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "d.json", DIMER);
    let out = dir.path().join("out.json");
    let o = run(&["run", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(&out).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["records"].as_array().unwrap().len(), 3);
    let echoed = config_from_json(&text).unwrap();
    assert_eq!(echoed, gausson_lab::SweepConfig::from_json(DIMER).unwrap());
}

#[test]
fn format_flag_beats_extension() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.json");
    let o = run(&["run", "--preset", "fig5-dimer", "--steps", "4", "--format", "csv", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(fs::read_to_string(&out).unwrap().starts_with("kz,npt_a"));
}

#[test]
fn config_overrides_preset_and_flags_override_both() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "patch.json", r#"{"inputs":[{"r":0.3},{"r":0.3}],"sweep":{"steps":7}}"#);
    let out = dir.path().join("o.json");
    let o = run(&["run", "--preset", "fig2", "--config", &cfg, "--stop", "1.0", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let got = config_from_json(&fs::read_to_string(&out).unwrap()).unwrap();
    let mut want = preset("fig2").unwrap();
    want.inputs = vec![gausson_lab::config::InputSpec::real(0.3); 2];
    want.sweep.steps = 7;
    want.sweep.stop = 1.0;
    assert_eq!(got, want);
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for (p, threads) in [(&a, "1"), (&b, "3")] {
        let o = bin().env("GAUSSON_THREADS", threads).args(["run", "--preset", "fig7", "--out", p.to_str().unwrap()]).output().unwrap();
        assert!(o.status.success(), "{}", stderr(&o));
    }
    assert_eq!(fs::read(a).unwrap(), fs::read(b).unwrap());
}

#[test]
fn config_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (r#"{"system":"dimer","inputs":[{"r":0.5}],"sweep":{"variable":"kz","start":0,"stop":1,"steps":3},"outputs":["coeffs"]}"#, "inputs"),
        (r#"{"system":"dimer","inputs":[{"r":0.5},{"r":0.5}],"sweep":{"variable":"kz","start":0,"stop":1,"steps":1},"outputs":["coeffs"]}"#, "steps"),
        (r#"{"system":"dimer","inputs":[{"r":0.5},{"r":0.5}],"sweep":{"variable":"kz","start":0,"stop":1,"steps":3},"outputs":["coeffs"],"colour":1}"#, "colour"),
        (r#"{"system":"dimer","inputs":[{"r":0.5},{"r":0.5}],"sweep":{"variable":"kz","start":0,"stop":1,"steps":3},"outputs":["scenario"]}"#, "scenario"),
        ("{not json", "parse"),
    ];
    for (i, (text, needle)) in cases.iter().enumerate() {
        let cfg = write(dir.path(), &format!("bad{i}.json"), text);
        let o = run(&["run", "--config", &cfg]);
        assert_eq!(o.status.code(), Some(1), "{needle}");
        assert!(stderr(&o).contains(needle), "{needle}: {}", stderr(&o));
    }
    for args in [
        &["run", "--preset", "fig99"][..],
        &["run", "--config", "/nonexistent/config.json"],
        &["run"],
        &["run", "--preset", "fig2", "--bogus"],
        &["run", "--preset", "fig3"],
    ] {
        assert_eq!(run(args).status.code(), Some(1), "{args:?}");
    }
    let o = bin().env("GAUSSON_THREADS", "many").args(["run", "--preset", "fig2", "--steps", "2"]).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("GAUSSON_THREADS"));
}

#[test]
fn numerical_failure_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "n.json",
        r#"{"system":"dimer","inputs":[{"r":1.0},{"r":1.0}],"sweep":{"variable":"kz","start":0,"stop":1,"steps":2},
            "outputs":["variances","oracle_check"],"oracle":{"cutoff":5}}"#,
    );
    let o = run(&["run", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("cutoff"));
}

#[test]
fn verify_oracle_adds_passing_checks() {
    let o = run(&["run", "--preset", "fig2", "--steps", "4", "--verify-oracle"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    let ok = headers.iter().position(|h| h == "oracle_ok").unwrap();
    let rows: Vec<_> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| &r[ok] == "true"));
}

#[test]
fn wigner_csv_companions() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f3.csv");
    let o = run(&["run", "--preset", "fig3", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let index = fs::read_to_string(dir.path().join("f3.wigner-index.csv")).unwrap();
    // Four axis pairs at each of the two sweep points.
    assert_eq!(index.lines().count(), 9);
    let matrix = fs::read_to_string(dir.path().join("f3.wigner-0.csv")).unwrap();
    let rows: Vec<&str> = matrix.lines().collect();
    assert_eq!(rows.len(), 201);
    assert_eq!(rows[0].split(',').count(), 201);
    let x = fs::read_to_string(dir.path().join("f3.wigner-0.x.csv")).unwrap();
    assert_eq!(x.lines().next(), Some("X1_a"));
    assert_eq!(x.lines().count(), 202);
}
