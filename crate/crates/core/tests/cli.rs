use std::process::{Command, Output};

fn wellsum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wellsum"))
        .args(args)
        .env_remove("WELLSUM_BITS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_json_report() {
    let o = wellsum(&["--bits", "128", "--terms", "300", "--format", "json", "verify", "odd-sq p=3 e=6"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["exact_text"], "8π⁴/155925");
    assert_eq!(v["verdict"], "Pass");
    assert_eq!(v["bound_kind"], "rigorous");
    assert_eq!(v["terms"], 300);
    assert!(v["numeric"].as_str().unwrap().starts_with("4.9977"));
}

#[test]
fn verify_identity() {
    let o = wellsum(&["--bits", "128", "--terms", "200", "--format", "csv", "verify", "identity24"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let row = out.lines().nth(1).unwrap();
    assert!(row.starts_with("identity24,4/9,4.444"), "{row}");
}

#[test]
fn exit_codes() {
    assert_eq!(wellsum(&["verify", "odd-sq p=one e=2"]).status.code(), Some(64));
    assert_eq!(wellsum(&["table"]).status.code(), Some(64));
    assert_eq!(wellsum(&["--bits", "32", "verify", "odd-sq p=1 e=2"]).status.code(), Some(64));
    assert_eq!(wellsum(&["verify", "odd-sq p=1 e=0"]).status.code(), Some(65));
    assert_eq!(wellsum(&["table", "9"]).status.code(), Some(65));
    assert_eq!(
        wellsum(&["coeffs", "--alpha", "1", "--beta", "1/2", "--n-max", "4", "--route", "bessel"]).status.code(),
        Some(65)
    );
    assert_eq!(wellsum(&["--help"]).status.code(), Some(0));
}

#[test]
fn coefficient_csv() {
    let o = wellsum(&["--bits", "128", "coeffs", "--alpha", "1/2", "--beta", "1/2", "--n-max", "4", "--route", "bessel"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "n,c_n");
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[2], "2,0");
    assert_eq!(lines[4], "4,0");
    assert!(lines[1].starts_with("1,9.8176812093891"), "{}", lines[1]);

    let o = wellsum(&["coeffs", "--alpha", "1", "--beta", "1/2", "--n-max", "0"]);
    assert_eq!(stdout(&o).lines().next(), Some("n,c_n_hyper,c_n_quad"));
}

#[test]
fn cross_route_footer() {
    let o = wellsum(&["coeffs", "--alpha", "1", "--beta", "1/2", "--n-max", "6", "--route", "all"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let footer = out.lines().last().unwrap();
    let value: f64 = footer.rsplit(": ").next().unwrap().parse().unwrap();
    assert!(value <= 1e-60, "{footer}");
}

#[test]
fn sample_points() {
    let o = wellsum(&["--bits", "64", "sample", "--alpha", "1/2", "--beta", "1/2", "--points", "3"]);
    let out = stdout(&o);
    let rows: Vec<Vec<f64>> = out
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0], vec![0.0, 0.0]);
    assert_eq!(rows[2], vec![1.0, 0.0]);
    assert!((rows[1][1] - 6f64.sqrt() / 2.0).abs() < 1e-12);

    let o = wellsum(&["--bits", "64", "sample", "--alpha", "3/2", "--beta", "7/2", "--points", "101"]);
    let psi: Vec<f64> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    let argmax = psi.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
    assert_eq!(argmax, 30);
}

#[test]
fn table_with_emit_and_out() {
    let dir = std::env::temp_dir().join(format!("wellsum-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let emit = dir.join("table5.json");
    let out = dir.join("table5.md");
    let o = wellsum(&[
        "--bits", "128", "--terms", "200", "--out", out.to_str().unwrap(),
        "table", "5", "--emit", emit.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let md = std::fs::read_to_string(&out).unwrap();
    assert!(md.contains("**no**"));
    let rows: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&emit).unwrap()).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 9);
    let mismatched: Vec<&serde_json::Value> = rows.iter().filter(|r| r["match"] == false).collect();
    assert_eq!(mismatched.len(), 1);
    assert_eq!(mismatched[0]["row"], 7);
    for key in ["family", "params", "exact", "paper_printed", "match"] {
        assert!(rows[0].get(key).is_some(), "{key}");
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn precision_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_wellsum"))
        .args(["--terms", "50", "--format", "json", "verify", "odd-sq p=1 e=2"])
        .env("WELLSUM_BITS", "64")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    // 64 bits leave 48 bits for the error target, about 14 digits
    assert_eq!(v["numeric"].as_str().unwrap().len(), "3.3333333333333e-1".len());
}
