use std::process::{Command, Output};

fn sqdist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sqdist")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn table_rows() {
    let o = sqdist(&["mceliece-table"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "parameter_set,n,m,r_star,rate");
    assert_eq!(lines[1], "kem/mceliece348864,3488,12,12,0.95872");
    assert_eq!(lines[3], "kem/mceliece6688128,6688,13,15,0.97084");
    assert_eq!(lines[5], "kem/mceliece8192128,8192,13,19,0.96985");
    let json = stdout(&sqdist(&["mceliece-table", "--format", "json"]));
    assert!(json.lines().next().unwrap().contains("\"r_star\":12"));
}

#[test]
fn grs_family_measures_2k_minus_1() {
    let o = sqdist(&["distinguish", "--family", "grs", "--q", "64", "--m", "1", "--n", "40", "--r", "8", "--trials", "5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().all(|l| l.contains("\"measured_dim\":15")));
}

#[test]
fn domain_errors_exit_2_without_rows() {
    let o = sqdist(&["distinguish", "--family", "goppa", "--q", "2", "--m", "4", "--n", "16", "--r", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("rm < n"));
    let o = sqdist(&["distinguish", "--family", "goppa", "--q", "3", "--m", "4", "--n", "81", "--r", "3", "--trials", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = sqdist(&["verify", "--suite", "nope"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_reports_summary() {
    let o = sqdist(&["sweep", "--family", "goppa", "--q", "2", "--m", "12", "--n", "3488", "--r-min", "2", "--r-max", "20", "--format", "csv"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 20);
    assert!(String::from_utf8_lossy(&o.stderr).contains("r*=12 R=0.95872"));
    let o = sqdist(&["sweep", "--family", "goppa", "--q", "2", "--m", "13", "--n", "6960", "--r-min", "2", "--r-max", "30"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("r*=16 R=0.97011"));
}

#[test]
fn empty_sweep() {
    let o = sqdist(&["sweep", "--family", "goppa", "--q", "2", "--m", "12", "--n", "3488", "--r-min", "5", "--r-max", "4"]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
}

#[test]
fn measured_sweep() {
    let o = sqdist(&["sweep", "--family", "alternant", "--q", "2", "--m", "5", "--n", "32", "--r-min", "2", "--r-max", "4", "--measure", "--trials", "2", "--with-lp"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 6);
    assert!(text.lines().all(|l| l.contains("\"lp_convention\":\"off\"")));
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = sqdist(&[
            "distinguish", "--family", "goppa", "--q", "3", "--m", "4", "--n", "81", "--r", "3", "--trials", "6",
            "--seed", "17", "--with-lp", "--format", "csv", "--out", p.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        assert!(o.stdout.is_empty());
    }
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(x, y);
    let text = String::from_utf8(x).unwrap();
    assert!(text.starts_with("schema,"));
    assert_eq!(text.lines().count(), 7);
}

#[test]
fn more_trials_extend_earlier_ones() {
    let args = |t: &'static str| {
        vec!["distinguish", "--family", "alternant", "--q", "2", "--m", "5", "--n", "32", "--r", "3", "--trials", t, "--seed", "3"]
    };
    let short = stdout(&sqdist(&args("2")));
    let long = stdout(&sqdist(&args("4")));
    assert!(long.starts_with(&short));
}

#[test]
fn verify_suite_prints_counts() {
    let o = sqdist(&["verify", "--suite", "delsarte", "--seed", "4"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("20/20"));
}
