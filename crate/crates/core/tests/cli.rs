use std::io::Write;
use std::process::{Command, Output, Stdio};

use rankp::estimator::SampleSet;
use rankp::simulate::{validate_theorem, DistributionSpec, IncrementLaw, MartingaleSpec};
use rankp::{IncrementSchedule, RankP};
use serde_json::Value;

fn rankp(args: &[&str]) -> Output {
    run_with_stdin(args, None)
}

fn run_with_stdin(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_rankp"))
        .args(args)
        .env_remove("RANKP_SEED")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(text) = stdin {
            pipe.write_all(text.as_bytes()).unwrap();
        }
    }
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn phi_rows() {
    let v = json(&rankp(&["phi", "--p", "3", "--x", "2"]));
    assert!((num(&v["rows"][0]["phi_p"]) - 2.833_333_333_333_333).abs() < 1e-12);
    assert_eq!(num(&v["rows"][0]["inverse_round_trip"]), 2.0);
    let v = json(&rankp(&["phi", "--p", "2", "--x", "1"]));
    assert_eq!(num(&v["rows"][0]["phi_p"]), 0.5);
    assert_eq!(num(&v["rows"][0]["phi_q"]), 0.5);
}

#[test]
fn bad_rank_is_a_usage_error() {
    let out = rankp(&["phi", "--p", "0.9", "--x", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("p must exceed 1"));
}

#[test]
fn bound_examples() {
    let v = json(&rankp(&["bound", "--p", "2", "--schedule", "1,1,1,1", "--d0", "0", "--eps", "4"]));
    assert!((num(&v["rows"][0]["bound_rank_p"]) - 0.270_670_566_473_225_4).abs() < 1e-15);
    assert!(v["epsilon_p"].is_null());
    assert_eq!(v["d0_provenance"], "declared");

    let v = json(&rankp(&["bound", "--p", "1.5", "--schedule", "1", "--d0", "0", "--eps", "0"]));
    assert_eq!(num(&v["rows"][0]["bound_rank_p"]), 2.0);

    let v = json(&rankp(&["bound", "--p", "1.5", "--schedule", "1", "--d0", "0"]));
    assert!((num(&v["epsilon_p"]) - 1.7696).abs() < 5e-3);
    assert_eq!(v["rows"].as_array().unwrap().len(), 12);
    for key in ["p", "q", "r", "schedule", "d0", "gamma_r", "combined_norm", "version", "config", "duration_s"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn crossover_command() {
    let v = json(&rankp(&["crossover", "--p", "1.5", "--c", "1", "--d", "1"]));
    assert!((num(&v["epsilon_p"]) - 1.769_673_739_739_331).abs() < 1e-9);
    let out = rankp(&["crossover", "--p", "2", "--schedule", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_schedule_exits_2() {
    let out = rankp(&["validate", "--schedule", "1,,2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = rankp(&["bound", "--p", "1.5", "--schedule", "1,-2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validate_classic_preset_passes() {
    let out = rankp(&["validate", "--preset", "classic-azuma", "--p", "2"]);
    let v = json(&out);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(num(&v["n_paths"]), 100_000.0);
    assert_eq!(num(&v["delta"]), 1e-3);
    assert_eq!(v["d0_provenance"], "exact");
    assert!(v["rows"].as_array().unwrap().iter().all(|r| r["pass"] == true));
}

#[test]
fn zero_threshold_grid() {
    let out = rankp(&["validate", "--preset", "zero-uniform", "--eps-max", "0", "--paths", "1000"]);
    let v = json(&out);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(num(&rows[0]["empirical"]), 1.0);
    assert_eq!(num(&rows[0]["bound_rank_p"]), 2.0);
}

#[test]
fn violation_exits_1() {
    // one path of four Rademacher steps exceeds 4 with probability 1/8, far
    // above the bound once the slack is small
    let spec = MartingaleSpec::new(
        IncrementSchedule::uniform(4, 1.0).unwrap(),
        IncrementLaw::Rademacher,
        DistributionSpec::PointMass { x: 0.0 },
        RankP::new(2.0).unwrap(),
    )
    .unwrap();
    let seed = (0..200u64)
        .find(|&s| !validate_theorem(&spec, &[4.0], 1, 0.5, s).unwrap().all_pass())
        .expect("some seed puts the lone path at ±4");
    let seed = seed.to_string();
    let out = rankp(&[
        "validate", "--schedule", "1,1,1,1", "--law", "rademacher", "--start", "point:0", "--p", "2", "--eps", "4",
        "--paths", "1", "--delta", "0.5", "--seed", &seed,
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["rows"][0]["pass"], false);
}

#[test]
fn estimate_from_stream() {
    let v = json(&run_with_stdin(&["estimate", "--p", "2"], Some("0 0 0\n0\n")));
    assert_eq!(num(&v["tau_hat"]), 0.0);
    assert!(!v["cgf_curve"].as_array().unwrap().is_empty());

    let out = run_with_stdin(&["estimate", "--p", "2"], Some(""));
    assert_eq!(out.status.code(), Some(2));
    let out = run_with_stdin(&["estimate", "--p", "2"], Some("1 2 x"));
    assert_eq!(out.status.code(), Some(2));

    let v = json(&run_with_stdin(&["estimate", "--p", "2"], Some("-1\n1\n")));
    let tau = num(&v["tau_hat"]);
    assert!((0.99..=1.0).contains(&tau), "{tau}");
}

#[test]
fn estimate_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("samples.txt");
    std::fs::write(&path, "3\n-1\n-1\n-1\n").unwrap();
    let v = json(&rankp(&["estimate", "--p", "1.5", "--input", path.to_str().unwrap()]));
    assert_eq!(num(&v["n"]), 4.0);
    assert_eq!(num(&v["center_shift"]), 0.0);
}

#[test]
fn estimate_self_generated_double_weibull() {
    let out = rankp(&["estimate", "--dist", "double-weibull", "--q", "3", "--n", "100000", "--p", "1.5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let tau = num(&v["tau_hat"]);
    assert!(tau > 0.0);
    let tail = &v["tail_criterion"];
    assert_eq!(tail["pass"], true);
    assert_eq!(num(&tail["c_const"]), 2.0);
    assert!((num(&tail["d_const"]) - 1.1 * tau).abs() <= 1e-15 * tau);
}

#[test]
fn seed_comes_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_rankp"))
        .args(["validate", "--preset", "zero-uniform", "--paths", "100"])
        .env("RANKP_SEED", "99")
        .output()
        .unwrap();
    let v = json(&out);
    assert_eq!(num(&v["seed"]), 99.0);
    assert_eq!(num(&v["config"]["seed"]), 99.0);
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn csv_matches_json() {
    for args in [
        &["bound", "--p", "1.3", "--schedule", "0.5,1,2", "--d0", "0.7"][..],
        &["validate", "--preset", "weibull-uniform", "--p", "1.2", "--paths", "5000"][..],
    ] {
        let v = json(&rankp(args));
        let mut csv_args = args.to_vec();
        csv_args.extend(["--format", "csv"]);
        let out = rankp(&csv_args);
        assert!(out.status.success());
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(text.starts_with("eps,bound_rank_p,bound_classic,ratio,empirical,ci_slack,pass\n"));
        let rows = csv_rows(&text);
        let jrows = v["rows"].as_array().unwrap();
        assert_eq!(rows.len(), jrows.len());
        for (c, j) in rows.iter().zip(jrows) {
            for (i, key) in ["eps", "bound_rank_p", "bound_classic", "ratio", "empirical", "ci_slack"].iter().enumerate() {
                match j[*key].as_f64() {
                    Some(want) => {
                        let got: f64 = c[i].parse().unwrap();
                        assert!((got - want).abs() <= 1e-15 * want.abs(), "{key}: {got} vs {want}");
                    }
                    None => assert!(c[i].is_empty()),
                }
            }
            assert_eq!(c[6], j["pass"].as_bool().map(|b| b.to_string()).unwrap_or_default());
        }
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bound.csv");
    let out = rankp(&["bound", "--p", "2", "--schedule", "1", "--eps", "1,2", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(path).unwrap().lines().count(), 3);
}

#[test]
fn simulate_emits_text() {
    let out = rankp(&["simulate", "--dist", "halfnormal-power", "--q", "2", "--n", "500", "--seed", "3"]);
    assert!(out.status.success());
    let values: Vec<f64> = String::from_utf8(out.stdout).unwrap().lines().map(|l| l.parse().unwrap()).collect();
    assert_eq!(values.len(), 500);
    let again = rankp(&["simulate", "--dist", "halfnormal-power", "--q", "2", "--n", "500", "--seed", "3"]);
    let same: Vec<f64> = String::from_utf8(again.stdout).unwrap().lines().map(|l| l.parse().unwrap()).collect();
    assert_eq!(values, same);
    let set = SampleSet::new(values).unwrap();
    assert!(set.mean().abs() < 0.1);

    let out = rankp(&["simulate", "--preset", "bounded-adaptive", "--n", "50"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 50);
    for line in text.lines() {
        let pair: Vec<f64> = line.split(' ').map(|t| t.parse().unwrap()).collect();
        assert!(pair[0].abs() <= 1.0 && (pair[1] - pair[0]).abs() <= 20.0);
    }

    let out = rankp(&["simulate", "--n", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn uncentered_start_is_rejected() {
    let out = rankp(&["validate", "--schedule", "1", "--start", "uniform:-1,3", "--paths", "10"]);
    assert_eq!(out.status.code(), Some(2));
    let out = rankp(&["validate", "--schedule", "1", "--start", "point:0", "--d0", "-1", "--paths", "10"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(rankp(&["--help"]).status.code(), Some(0));
    let out = rankp(&["--version"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains(env!("CARGO_PKG_VERSION")));
}
