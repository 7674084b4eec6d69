use std::process::{Command, Output, Stdio};
use std::time::{Duration, Instant};

use fillcurve::binform::GUARD_OVERRIDE_ENV;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_fillcurve"));
    c.env_remove(GUARD_OVERRIDE_ENV);
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn check_reports_both_verdicts() {
    let smooth = run(&["check", "--q", "3", "--f", "1,0,0,0,1", "--g", "1,0,2,0,1"]);
    assert_eq!(code(&smooth), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&smooth)).unwrap();
    assert_eq!(v["report"]["smooth"], true);
    assert_eq!(v["space_filling"], true);

    let singular = run(&["check", "--q", "3", "--f", "1,0,0,0,1", "--g", "1,0,0,0,1"]);
    assert_eq!(code(&singular), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&singular)).unwrap();
    assert_eq!(v["report"]["smooth"], false);
    assert!(
        v["report"]["witness"]["compositum_degree"]
            .as_u64()
            .unwrap()
            >= 2
    );
}

#[test]
fn exit_codes() {
    assert_eq!(
        code(&run(&[
            "check",
            "--q",
            "3",
            "--f",
            "1,x",
            "--g",
            "1,0,0,0,1"
        ])),
        1
    );
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
    // X1 divides f, so (1:0) is rational
    let o = run(&["check", "--q", "3", "--f", "1,0,0,0,0", "--g", "1,0,0,0,1"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("precondition violated"));
    assert_eq!(
        code(&run(&["construct", "--q", "4", "--f", "1,0,0,0,1,1"])),
        2
    );
    assert_eq!(
        code(&run(&["check", "--q", "6", "--f", "1", "--g", "1"])),
        2
    );
    assert_eq!(
        code(&run(&[
            "check",
            "--q",
            "3",
            "--f",
            "1,0,1",
            "--g",
            "1,0,0,0,1"
        ])),
        2
    );
    assert_eq!(code(&run(&["census", "--q", "7"])), 3);
    assert_eq!(code(&run(&["orbits", "--q", "7"])), 3);
    assert_eq!(code(&run(&["symmetric", "--q", "3", "--format", "csv"])), 1);
}

#[test]
fn symmetric_prints_one_form() {
    let o = run(&["symmetric", "--q", "3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "1,0,0,1,2\n");
    let o = run(&["symmetric", "--q", "3", "--variant", "2"]);
    assert_eq!(stdout(&o), "1,1,0,0,2\n");
    assert_eq!(code(&run(&["symmetric", "--q", "3", "--variant", "9"])), 2);
}

#[test]
fn output_is_reproducible_across_runs_and_workers() {
    for args in [
        vec!["census", "--q", "3"],
        vec!["sample", "--q", "5", "--n", "200", "--seed", "11"],
        vec!["construct", "--q", "7", "--f", "1,0,0,0,0,0,0,1,3"],
    ] {
        let base = stdout(&run(&args));
        assert!(!base.is_empty());
        for jobs in ["1", "2", "3"] {
            let mut a = args.clone();
            a.extend(["--jobs", jobs]);
            assert_eq!(stdout(&run(&a)), base, "{args:?} --jobs {jobs}");
        }
    }
}

#[test]
fn out_writes_a_file() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let json = dir.join("census.json");
    let o = run(&["census", "--q", "3", "--out", json.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["total_smooth_pairs"], 1584);
    assert_eq!(v["orbits"].as_array().unwrap().len(), 7);

    let csv = dir.join("census.csv");
    let o = run(&[
        "census",
        "--q",
        "3",
        "--format",
        "csv",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "f_orbit,g_orbit,f_orbit_size,g_orbit_size,smooth"
    );
    assert_eq!(text.lines().count(), 1 + 49);

    let sample = dir.join("sample.json");
    run(&[
        "sample",
        "--q",
        "3",
        "--n",
        "50",
        "--out",
        sample.to_str().unwrap(),
    ]);
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&sample).unwrap()).unwrap();
    assert_eq!(v["n"], 50);
}

#[test]
fn census_q3_totals() {
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&run(&["census", "--q", "3"]))).unwrap();
    assert_eq!(v["total_smooth_pairs"], 1584);
    assert_eq!(v["total_pairs"], 2304);
    assert_eq!(v["orbits"].as_array().unwrap().len(), 7);
}

/// With the guard lifted, an oversized run starts working instead of exiting
/// with code 3; it is stopped once that is clear.
fn gets_past_guard(cmd: &mut Command) -> bool {
    let mut child = cmd
        .stdout(Stdio::null())
        .stderr(Stdio::null())
        .spawn()
        .unwrap();
    let start = Instant::now();
    while start.elapsed() < Duration::from_secs(2) {
        if let Some(status) = child.try_wait().unwrap() {
            return status.code() != Some(3);
        }
        std::thread::sleep(Duration::from_millis(20));
    }
    child.kill().unwrap();
    child.wait().unwrap();
    true
}

#[test]
fn guard_override() {
    assert!(gets_past_guard(
        bin()
            .args(["orbits", "--q", "7"])
            .env(GUARD_OVERRIDE_ENV, "1")
    ));
    assert!(gets_past_guard(bin().args([
        "orbits",
        "--q",
        "7",
        "--allow-large"
    ])));
    let o = bin()
        .args(["orbits", "--q", "7"])
        .env(GUARD_OVERRIDE_ENV, "0")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
}
