use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperdiv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn csv_g2_weierstrass() {
    let out = run(&[
        "coeffs",
        "--divisor",
        "w",
        "--genus",
        "2",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(
        rows,
        [
            "class,numerator,denominator",
            "psi,3,1",
            "eta_irr,-1,10",
            "delta_1_0,-6,5",
            "delta_1_1,-6,5"
        ]
    );
    // The identified-index note stays off stdout.
    assert!(String::from_utf8_lossy(&out.stderr).contains("delta_1_0=delta_1_1"));
}

#[test]
fn json_g2_g12_has_delta_0_2() {
    let out = run(&[
        "coeffs",
        "--divisor",
        "g12",
        "--genus",
        "2",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let terms = v["terms"].as_array().unwrap();
    assert!(terms.contains(&serde_json::json!({"class": "delta_0_2", "num": -3, "den": 1})));
}

#[test]
fn solver_and_closed_form_sources_agree() {
    for (div, g) in [("w", "9"), ("g12", "8")] {
        for view in ["formal", "canonical"] {
            let a = run(&["coeffs", "--divisor", div, "--genus", g, "--view", view]);
            let b = run(&[
                "coeffs",
                "--divisor",
                div,
                "--genus",
                g,
                "--view",
                view,
                "--source",
                "closed-form",
            ]);
            assert_eq!(stdout(&a), stdout(&b), "{div} g={g} {view}");
        }
    }
}

#[test]
fn csv_and_json_carry_the_same_terms() {
    let csv = stdout(&run(&[
        "coeffs",
        "--divisor",
        "g12",
        "--genus",
        "5",
        "--format",
        "csv",
    ]));
    let json = stdout(&run(&["coeffs", "--divisor", "g12", "--genus", "5"]));
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    let from_json: Vec<String> = v["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| format!("{},{},{}", t["class"].as_str().unwrap(), t["num"], t["den"]))
        .collect();
    let from_csv: Vec<String> = csv.lines().skip(1).map(str::to_string).collect();
    assert_eq!(from_csv, from_json);
}

#[test]
fn latex_is_one_display() {
    let out = run(&[
        "coeffs",
        "--divisor",
        "g12",
        "--genus",
        "2",
        "--format",
        "latex",
    ]);
    let out = stdout(&out);
    let (note, text) = out.split_once('\n').unwrap();
    assert!(note.starts_with("% formal view"));
    assert!(text.starts_with("\\[\n[\\overline{\\mathcal{H}}_{2,g^1_2}] = (\\psi_1 + \\psi_2)"));
    assert_eq!(text.matches("\\[").count(), 1);
}

#[test]
fn relations_g2() {
    let w = stdout(&run(&["relations", "--divisor", "w", "--genus", "2"]));
    assert!(w.lines().any(|l| l == "quadric_pencil: 1·d + 20·c = 1"));
    assert!(w.lines().any(|l| l == "diagonal: 2·d = 6"));
    let t = stdout(&run(&["relations", "--divisor", "g12", "--genus", "2"]));
    assert!(t
        .lines()
        .any(|l| l == "two_point_single: 1·a_{0,2} + 4·d = 1"));
}

#[test]
fn families_listing() {
    let text = stdout(&run(&["families", "--divisor", "w", "--genus", "4"]));
    assert_eq!(text.lines().count(), 2 + 2 * 4);
    assert!(text.lines().any(|l| l == "diagonal: psi=6; target=10"));
    let json = stdout(&run(&[
        "families",
        "--divisor",
        "g12",
        "--genus",
        "3",
        "--format",
        "json",
    ]));
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    let f1 = v
        .as_array()
        .unwrap()
        .iter()
        .find(|f| f["family"] == "f2ip1(i=0)")
        .unwrap();
    assert!(f1["degrees"]
        .as_array()
        .unwrap()
        .iter()
        .any(|d| d["class"] == "eta_0_1" && d["auxiliary"] == true));
}

#[test]
fn verify_exit_codes() {
    let ok = run(&["verify", "--range", "2..2", "--divisor", "w"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("1/1 genera pass"));

    let bad = run(&[
        "verify",
        "--range",
        "2..3",
        "--divisor",
        "g12",
        "--inject-fault",
    ]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("psi1: solver 1 closed form 2"));

    for args in [
        &["verify", "--range", "5..2", "--divisor", "w"][..],
        &["verify", "--range", "1..4", "--divisor", "w"],
        &["verify", "--range", "2..4"],
        &["coeffs", "--genus", "1", "--divisor", "w"],
        &["coeffs", "--genus", "4", "--divisor", "both"],
        &[
            "coeffs",
            "--genus",
            "4",
            "--divisor",
            "w",
            "--format",
            "xml",
        ],
        &["frobnicate"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}
