use std::process::{Command, Output};

fn irrpoly(args: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_irrpoly"))
        .args(args.split_whitespace())
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn gen_coeffs_format() {
    let o = irrpoly("gen --p 2 --w 2 --modulus 1,1,1 --degree 4 --verify");
    assert!(o.status.success());
    assert_eq!(stdout(&o), "1,0;0,1;1,0;0,1;1,0\n");
}

#[test]
fn gen_json_format() {
    let o = irrpoly("gen --p 5 --degree 8 --canonical --format json");
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["p"], "5");
    assert_eq!(v["w"], 1);
    assert_eq!(v["degree"], 8);
    assert_eq!(v["seed"], 0);
    assert_eq!(v["route"][0]["method"], "kummer");
    assert_eq!(v["coefficients"][0][0], "3");
    assert_eq!(v["coefficients"][8][0], "1");
    assert_eq!(v["coefficients"].as_array().unwrap().len(), 9);
}

#[test]
fn gen_degree_one() {
    let o = irrpoly("gen --p 13 --w 3 --degree 1");
    assert_eq!(stdout(&o), "0,0,0;1,0,0\n");
}

#[test]
fn verify_round_trip() {
    let o = irrpoly("gen --p 7 --w 2 --degree 15 --seed 4");
    let poly = stdout(&o);
    let o = irrpoly(&format!("verify --p 7 --w 2 --poly {}", poly.trim()));
    assert!(o.status.success());
    assert_eq!(stdout(&o), "irreducible\n");
    let o = irrpoly("verify --p 5 --poly 1;0;1");
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "reducible\n");
}

#[test]
fn invalid_input_exit_code() {
    for args in [
        "gen --p 4 --degree 3",
        "gen --p 5 --w 2 --modulus 1,0,1 --degree 3",
        "gen --p 5 --w 2 --modulus 2,1 --degree 3",
        "gen --p 5 --degree 0",
        "verify --p 5 --poly 1;7",
        "verify --p 5 --poly 2;2",
        "stats irr-density --p 5 --degree 3 --samples 10",
        "stats torsion-density --p 7 --ell 3 --samples 100",
    ] {
        assert_eq!(irrpoly(args).status.code(), Some(2), "{args}");
    }
}

#[test]
fn big_characteristic() {
    let p = "340282366920938463463374607431768211507";
    let o = irrpoly(&format!("gen --p {p} --degree 6 --verify"));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).trim().split(';').count(), 7);
}

#[test]
fn stats_reports() {
    let o = irrpoly("stats irr-density --p 2 --degree 2 --samples 400 --seed 1");
    assert!(o.status.success());
    assert!(stdout(&o).contains("pass true"));
    let o = irrpoly("stats torsion-density --p 1013 --ell 3 --samples 300 --seed 1");
    assert!(o.status.success());
    assert!(stdout(&o).contains("expected 0.500000"));
}
