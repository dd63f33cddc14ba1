use std::process::Command;

use num_rational::BigRational;
use wildmckay::cli::{run, JobSpec, RingJson};
use wildmckay::json::*;
use wildmckay_core::motivic::{Exponent, MotPoly, MotValue};

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn wm(args: &[&str]) -> Out {
    let o = Command::new(env!("CARGO_BIN_EXE_wildmckay")).args(args).output().unwrap();
    Out {
        code: o.status.code().unwrap(),
        stdout: String::from_utf8(o.stdout).unwrap(),
        stderr: String::from_utf8(o.stderr).unwrap(),
    }
}

fn l(n: i64) -> MotPoly {
    MotPoly::l_pow(Exponent::from_integer(n))
}

#[test]
fn stringy_symmetric_square() {
    let o = wm(&["stringy", "--action", r#"{"kind":"perm","n":2,"m":2}"#]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let r: ReportJson = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(MotValue::try_from(&r.value).unwrap(), MotValue::Poly(&l(4) + &l(3)));
    assert_eq!(r.converges, Some(true));
    assert_eq!(r.dim, "4");
    assert_eq!(r.realizations["q=2"], "24");
}

#[test]
fn bhargava_example() {
    let o = wm(&["bhargava", "--n", "2", "--q", "5"]);
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout.trim(), r#"{"lhs":"6/5","rhs":"6/5","equal":true}"#);
}

#[test]
fn ring_example() {
    let o = wm(&["ring", "--eval", r#"{"expr":"L^2+L"}"#, "--q", "4"]);
    assert_eq!(o.code, 0);
    let r: RingJson = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(r.point_count.as_deref(), Some("20"));
    let t = wm(&["ring", "--eval", r#"{"expr":"L^2+L"}"#, "--q", "4", "--format", "text"]);
    assert_eq!(t.stdout, "20\n");
}

#[test]
fn wild_mckay_report_round_trips() {
    let o = wm(&["mckay", "--action", r#"{"kind":"modp","p":2,"blocks":[2,2]}"#, "--jump-cap", "9"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let r: ReportJson = serde_json::from_str(&o.stdout).unwrap();
    let value = MotValue::try_from(&r.value).unwrap();
    assert_eq!(value, MotValue::Poly(&l(4) + &l(3)));
    assert_eq!(r.discrepancy.as_deref(), Some("0"));
    // the tail stratum is a genuine series and must survive the trip
    let tail = r.strata.last().unwrap();
    assert!(!tail.contribution.denoms.is_empty());
    for s in &r.strata {
        let c = MotValue::try_from(&s.contribution).unwrap();
        assert_eq!(MotValueJson::from(&c), s.contribution);
    }
    assert_eq!(serde_json::to_string(&r).unwrap() + "\n", o.stdout);
}

#[test]
fn undetermined_tail_exits_three() {
    let o = wm(&["mckay", "--action", r#"{"kind":"modp","p":2,"blocks":[2,2]}"#, "--jump-cap", "3"]);
    assert_eq!(o.code, 3);
    let r: ReportJson = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(r.converges, None);
    assert!(o.stderr.contains("partial sum"));
}

#[test]
fn precision_failure_exits_three() {
    let o = wm(&[
        "vinv",
        "--action",
        r#"{"kind":"modp","p":3,"blocks":[3,3]}"#,
        "--cover",
        r#"{"kind":"as","p":3,"f":{"40":1}}"#,
        "--precision",
        "2",
    ]);
    assert_eq!(o.code, 3, "{}", o.stderr);
}

#[test]
fn validation_errors_exit_two() {
    for args in [
        vec!["stringy", "--action", r#"{"kind":"perm","n":2,"m":2,"extra":0}"#],
        vec!["stringy", "--action", r#"{"kind":"tame","l":2,"exp":[1,0]}"#],
        vec!["stringy", "--action", "not json"],
        vec!["mckay", "--action", r#"{"kind":"tame","l":2,"exp":[1,1]}"#],
        vec!["vinv", "--action", r#"{"kind":"modp","p":2,"blocks":[2,2]}"#],
        vec!["ring", "--eval", r#"{"expr":"1/(L+1)"}"#],
        vec!["bhargava", "--n", "2"],
        vec!["frobnicate"],
    ] {
        let o = wm(&args);
        assert_eq!(o.code, 2, "{args:?}: {}", o.stderr);
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["stringy", "--action", r#"{"kind":"modp","p":3,"blocks":[3,2]}"#, "--jump-cap", "12"];
    let a = wm(&args);
    let b = wm(&args);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    let c = wm(&["covers", "--n", "3", "--q", "3"]);
    assert_eq!(c.stdout, wm(&["covers", "--n", "3", "--q", "3"]).stdout);
}

#[test]
fn vinv_against_as_cover() {
    let o = wm(&["vinv", "--action", r#"{"kind":"modp","p":3,"blocks":[3,3]}"#, "--cover", r#"{"kind":"as","p":3,"f":{"4":1}}"#]);
    let t: TuningJson = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(t.v, "10");
    assert_eq!(t.divisors.iter().sum::<i64>(), 30);
    let tame = wm(&["vinv", "--action", r#"{"kind":"tame","l":3,"exp":[1,1]}"#]);
    let t: TuningJson = serde_json::from_str(&tame.stdout).unwrap();
    assert_eq!(t.v, "2/3");
}

#[test]
fn enumeration_masses_sum_to_lhs() {
    let o = wm(&["covers", "--n", "3", "--q", "9"]);
    let fams: Vec<FamilyJson> = serde_json::from_str(&o.stdout).unwrap();
    let total: BigRational = fams.iter().map(|f| f.mass.parse::<BigRational>().unwrap()).sum();
    let b = wm(&["bhargava", "--n", "3", "--q", "9"]);
    let bj: BhargavaJson = serde_json::from_str(&b.stdout).unwrap();
    assert_eq!(total.to_string(), bj.lhs);
    assert!(bj.equal);
}

#[test]
fn describe_cover() {
    let o = wm(&["covers", "--cover", r#"{"kind":"as","p":2,"q":4,"f":{"5":1,"3":2},"f0":3}"#]);
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout.trim(), r#"{"cover":{"kind":"as","p":2,"q":4,"f":{"3":2,"5":1},"f0":3},"degree":2,"jump":5,"disc":6}"#);
}

#[test]
fn job_spec_with_flag_override() {
    let dir = std::env::temp_dir().join(format!("wildmckay-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let spec = dir.join("job.json");
    let out = dir.join("report.json");
    std::fs::write(&spec, r#"{"command":"mckay","action":{"kind":"modp","p":2,"blocks":[2,2]},"options":{"jump_cap":3}}"#)
        .unwrap();
    let spec_arg = format!("@{}", spec.display());
    let o = wm(&["job", "--spec", &spec_arg, "--jump-cap", "9", "--out", out.to_str().unwrap()]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.is_empty());
    let r: ReportJson = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r.converges, Some(true));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn job_specs_reject_unknown_fields() {
    assert!(serde_json::from_str::<JobSpec>(r#"{"command":"ring","eval":{"expr":"L"},"speed":9}"#).is_err());
    let job: JobSpec = serde_json::from_str(r#"{"command":"ring","eval":{"expr":"L+1"},"options":{"q":3}}"#).unwrap();
    let outcome = run(&job).unwrap();
    let r: RingJson = serde_json::from_str(&outcome.output).unwrap();
    assert_eq!(r.point_count.as_deref(), Some("4"));
}
