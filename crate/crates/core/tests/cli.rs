//! The command line against fixed inputs.

mod common;

use common::{cli, cli_json};

#[test]
fn reduce_diagonal() {
    let rows = cli_json(&["reduce", "--field", "3", "--basis", "X,0;0,X^-1"]);
    assert_eq!(rows[0]["minima"], serde_json::json!([-1, 1]));
    assert_eq!(rows[0]["det_exp"], 0);
}

#[test]
fn good_quadratic() {
    let rows = cli_json(&["good", "--field", "3", "--f", "x^2", "--C", "1", "--alpha", "1/2"]);
    assert!(rows[..3].iter().all(|r| r["pass"] == true));
    assert_eq!(rows[3]["overall"], true);
}

#[test]
fn field_must_be_a_prime_power() {
    let (code, _, err) = cli(&["traj", "--field", "4", "--x", "1/X", "--T", "3"]);
    assert_eq!(code, 2, "{err}");
    let (code, _, _) = cli(&["field", "--field", "6"]);
    assert_eq!(code, 2);
    let (code, _, _) = cli(&["field", "--field", "2^2:g^2+1"]);
    assert_eq!(code, 2);
}

#[test]
fn bad_arguments_exit_two() {
    assert_eq!(cli(&["traj", "--field", "3", "--x", "1/X"]).0, 2);
    assert_eq!(cli(&["measure", "--field", "3", "--f", "x;x^2", "--t", "1", "--eps", "-1"]).0, 2);
    assert_ne!(cli(&["reduce", "--field", "3", "--basis", "X,1;X,1"]).0, 0);
}

#[test]
fn divergent_trajectory() {
    let rows = cli_json(&["traj", "--field", "3", "--x", "1/X", "--T", "6"]);
    let got: Vec<i64> = rows.iter().map(|r| r["delta_exp"].as_i64().unwrap()).collect();
    assert_eq!(got, vec![0, 0, -1, -2, -3, -4, -5]);
}

#[test]
fn csv_output() {
    let (code, out, _) = cli(&["cf", "--field", "3", "--x", "periodic:[X]", "--terms", "3", "--out", "csv"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "i,a,p,q");
    assert_eq!(lines[2], "1,X,1,X");
}

#[test]
fn measure_and_jobs() {
    let base = ["measure", "--field", "3", "--f", "x;x^2", "--t", "2,1", "--eps", "-1", "--res", "10"];
    let one = cli(&[&base[..], &["--jobs", "1"]].concat());
    let many = cli(&[&base[..], &["--jobs", "8"]].concat());
    assert_eq!(one.0, 0);
    assert_eq!(one.1, many.1);
    let rows = cli_json(&base);
    assert_eq!(rows[0]["count"], 1);
    assert_eq!(rows[0]["res_exp"], 4);
}

#[test]
fn link_on_liouville() {
    let rows = cli_json(&["link", "--field", "3", "--q", "X^3", "--eps", "1", "--x", "liouville:3"]);
    assert_eq!(rows[0]["holds"], true);
    assert_eq!(rows[0]["t"], serde_json::json!([4]));
    assert_eq!(rows[0]["r_exp"], -1);
}
