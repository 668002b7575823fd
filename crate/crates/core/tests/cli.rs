use std::process::{Command, Output};

fn sonine(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sonine"))
        .args(args)
        .env_remove("SONINE_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn eval_bessel_1d() {
    let o = sonine(&["eval", "bessel-1d", "--alpha", "-1/2", "--z", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], "sonine.report.v1");
    let text = stdout(&o);
    assert!(text.contains("0.5403023058681"), "{text}");
}

#[test]
fn exact_binomial() {
    let o = sonine(&["eval", "binom", "--kappa", "2,1", "--lambda", "1,0", "--alpha", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"3/1\""));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(sonine(&["eval", "bessel-b", "--x", "1,abc", "--y", "0,0"]).status.code(), Some(2));
    assert_eq!(sonine(&["verify", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(sonine(&["eval", "binom", "--kappa", "1,2", "--lambda", "0,0", "--alpha", "1"]).status.code(), Some(2));
}

#[test]
fn wallach_scan_exit_codes() {
    let below = sonine(&["verify", "wallach-scan", "--alpha", "1", "--h", "1/2", "--max-weight", "3"]);
    assert_eq!(below.status.code(), Some(1));
    let at = sonine(&["verify", "wallach-scan", "--alpha", "1", "--max-weight", "4"]);
    assert_eq!(at.status.code(), Some(0));
}

#[test]
fn b_to_a_passes() {
    let o = sonine(&["verify", "b-to-a", "--x", "0.6,0.2", "--y", "0.5,0.1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn replay_reproduces_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.json");
    let second = dir.path().join("second.json");
    let o = sonine(&[
        "verify", "group-integral", "--d", "2", "--x", "1,0.4", "--y", "0.8,0.3", "--mc", "2000", "--seed", "17",
        "--out", first.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r = sonine(&["replay", first.to_str().unwrap(), "--out", second.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0));
    assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap());
}

#[test]
fn sweep_writes_csv() {
    let o = sonine(&["sweep", "laguerre-limit", "--n", "1", "--k1", "1", "--k2", "1", "--x", "1", "--y", "1", "--j", "8..32"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4, "{text}");
    let empty = sonine(&["sweep", "laguerre-limit", "--n", "1", "--k1", "1", "--k2", "1", "--x", "1", "--y", "1", "--j", "32..8"]);
    assert_eq!(stdout(&empty).lines().count(), 1);
}

#[test]
fn cache_directory_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_sonine"))
        .args(["verify", "discrete-sonine", "--x", "1,0.5", "--y", "0.5,0.2", "--k1", "1", "--k2", "1", "--j", "4"])
        .env("SONINE_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    assert!(std::fs::read_dir(dir.path()).unwrap().count() > 0);
}
