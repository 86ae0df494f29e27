use std::path::PathBuf;
use std::process::{Command, Output};

fn bugonomics(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bugonomics"))
        .args(args)
        .output()
        .unwrap()
}

fn scenario(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("scenarios")
        .join(name)
        .display()
        .to_string()
}

fn code(args: &[&str]) -> i32 {
    bugonomics(args).status.code().unwrap()
}

#[test]
fn success_is_zero() {
    for args in [
        &["anchors"][..],
        &["metrics", "fixture:firefox_opus46"],
        &["lint", "fixture:firefox_150"],
        &[
            "compare",
            "fixture:firefox_opus46",
            "fixture:firefox_150",
            "--format",
            "json",
        ],
        &["cost", "fixture:mythos_preview", "--format", "csv"],
        &["--version"],
    ] {
        assert_eq!(code(args), 0, "{args:?}");
    }
    let sens = scenario("firefox_bands.json");
    assert_eq!(
        code(&["sensitivity", &sens, "--samples", "500", "--seed", "9"]),
        0
    );
    assert_eq!(
        code(&["simulate", &scenario("capacity_backlog.json"), "--seed", "3"]),
        0
    );
}

#[test]
fn fatal_findings_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("inverted.json");
    std::fs::write(
        &path,
        r#"{"schema_version":"1","campaign_id":"inv","submitted_reports":5,"accepted_findings":9}"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let out = bugonomics(&["lint", p]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("funnel inversion"));
    assert_eq!(code(&["metrics", p]), 1);
    assert_eq!(code(&["review-lint", &scenario("review_package.json")]), 1);
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"schema_version\": \"1\",\n \"campaign_id\": 7").unwrap();
    let future = dir.path().join("future.json");
    std::fs::write(&future, r#"{"schema_version":"2","campaign_id":"x"}"#).unwrap();

    let out = bugonomics(&["metrics", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: "));
    assert_eq!(code(&["metrics", future.to_str().unwrap()]), 2);
    assert_eq!(code(&["metrics", "/nonexistent/campaign.json"]), 2);
    assert_eq!(code(&["explode"]), 2);
    assert_eq!(code(&["anchors", "--format", "yaml"]), 2);
}

#[test]
fn undefined_unit_cost_exits_three() {
    let out = bugonomics(&["cost", "fixture:firefox_opus46"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unit cost undefined"));
}

#[test]
fn outputs_end_with_newline() {
    for format in ["table", "json", "csv"] {
        let out = bugonomics(&["anchors", "--format", format]);
        assert!(out.stdout.ends_with(b"\n"), "{format}");
        assert!(std::str::from_utf8(&out.stdout).is_ok());
    }
}
