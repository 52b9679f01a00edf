use mapcycles_cli::{num, run, WORKERS_ENV};
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    run(std::iter::once("mapcycles").chain(args.iter().copied()))
}

fn json(out: &str) -> Value {
    serde_json::from_str(out.trim()).unwrap()
}

#[test]
fn numbers_keep_full_precision() {
    assert_eq!(num(0.1).to_string(), "1.0000000000000001e-1");
    assert_eq!(num(f64::NAN), Value::String("NaN".into()));
    let (code, out, _) = call(&["eval", "--fn", "rho", "--x", "2"]);
    assert_eq!(code, 0);
    let v = json(&out);
    let rho2 = v["values"]["value"].as_f64().unwrap();
    assert!((rho2 - (1.0 - std::f64::consts::LN_2)).abs() < 1e-14);
    assert_eq!(v["status"], "ok");
    assert!(v.get("wall_time_s").is_none());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(call(&["eval", "--fn", "rho"]).0, 2);
    assert_eq!(call(&["nonsense"]).0, 2);
    assert_eq!(call(&["eval", "--fn", "g", "--x", "1"]).0, 2);
    assert_eq!(call(&["simulate", "--n", "5", "--trials", "1", "--seed", "1", "--constraint", "components=0"]).0, 2);
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("simulate"));
}

#[test]
fn computation_errors_exit_one_with_reason() {
    let (code, out, _) = call(&["invlaplace", "--transform", "theta", "--theta=-1", "--xi", "1"]);
    assert_eq!(code, 1);
    let v = json(&out);
    assert_eq!(v["status"], "error");
    assert!(v["error"].as_str().unwrap().contains("theta"));
    let (code, out, _) = call(&["enumerate", "--n", "9"]);
    assert_eq!(code, 1);
    assert_eq!(json(&out)["command"], "enumerate");
}

#[test]
fn csv_is_long_form() {
    let (code, out, _) = call(&["--format", "csv", "cdf", "--kind", "mapping-cycle", "--b", "1", "--regime", "connected"]);
    assert_eq!(code, 0);
    let mut rows = csv::Reader::from_reader(out.as_bytes());
    let headers = rows.headers().unwrap().clone();
    assert_eq!(headers.iter().collect::<Vec<_>>(), ["record", "command", "section", "name", "value"]);
    let cdf = rows
        .records()
        .map(|r| r.unwrap())
        .find(|r| &r[2] == "value" && &r[3] == "cdf")
        .unwrap();
    let v: f64 = cdf[4].parse().unwrap();
    assert!((v - 0.682_689_492_137_086).abs() < 1e-14);
}

#[test]
fn quiet_and_timing() {
    let (code, out, _) = call(&["--quiet", "eval", "--fn", "sigma", "--x", "1.5"]);
    assert_eq!((code, out.as_str()), (0, ""));
    let (_, out, _) = call(&["eval", "--fn", "sigma", "--x", "1.5", "--timing"]);
    assert!(json(&out)["wall_time_s"].as_f64().unwrap() >= 0.0);
}

#[test]
fn simulation_records_are_reproducible() {
    std::env::set_var(WORKERS_ENV, "3");
    let args = ["simulate", "--n", "200", "--trials", "300", "--seed", "42"];
    let (code, a, _) = call(&args);
    assert_eq!(code, 0);
    let (_, b, _) = call(&args);
    assert_eq!(a, b);
    let v = json(&a);
    assert_eq!(v["params"]["workers"], 3);
    assert_eq!(v["seed"], 42);
    let (_, c, _) = call(&["simulate", "--n", "200", "--trials", "300", "--seed", "42", "--workers", "1"]);
    assert_eq!(json(&c)["params"]["workers"], 1);

    let (code, out, _) = call(&[
        "simulate", "--n", "400", "--trials", "50", "--seed", "1", "--constraint", "connected", "--max-attempts", "20",
    ]);
    assert_eq!(code, 1);
    let v = json(&out);
    assert_eq!(v["seed"], 1);
    assert!(v["error"].as_str().unwrap().contains("budget"));
}

#[test]
fn enumerate_checks_generating_function() {
    let (code, out, _) = call(&["enumerate", "--n", "4", "--check-egf"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["values"]["match"], true);
    assert_eq!(v["values"]["total"], 256);
}

#[test]
fn divisibility_summary() {
    let (code, out, _) = call(&["divisibility", "--eta-min", "0.05", "--eta-max", "20", "--steps", "50"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["values"]["chain_holds_everywhere"], true);
    assert!(v["values"]["max_approx_rel_error"].as_f64().unwrap() < 0.005);
    assert_eq!(call(&["divisibility", "--eta-min", "0", "--eta-max", "1", "--steps", "3"]).0, 2);
}
