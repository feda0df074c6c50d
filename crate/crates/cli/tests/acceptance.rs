//! Acceptance criteria, one line each. Every comparison is exact.

use std::process::Command;
use std::time::{Duration, Instant};

use hyperdiv::basis::{
    basis_dimension, canonicalize, enumerate_basis, enumerate_formal, Ambient, BasisElement,
    Marking,
};
use hyperdiv::closedform::{
    closed_form, diff, hg12_closed_form, hgw_closed_form, VerificationReport,
};
use hyperdiv::families::{catalog, DegreeKey, Target, Unknown};
use hyperdiv::output::parse_json;
use hyperdiv::solver::{ruling_determinations, solve_coefficients};
use hyperdiv::surfcalc::{
    blown_up_self_intersection, diagonal_section_square, diagonal_self_intersection,
    horizontal_section_square,
};
use hyperdiv::Rational;

const TIME_LIMIT: Duration = Duration::from_secs(10);

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn q(n: i64, d: i64) -> Rational {
    Rational::frac(n, d)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn oracle_range(target: Target, g_max: u32) -> Outcome {
    let start = Instant::now();
    for g in 2..=g_max {
        let report = solve_coefficients(g, target).map_err(|e| format!("g={g}: {e}"))?;
        let expected = closed_form(target, g);
        let d = diff(&report.solution, &expected);
        ensure(d.is_empty(), || {
            let (e, a, b) = &d[0];
            format!(
                "g={g} {}: solver {a}, closed form {b}",
                e.name(target.marks())
            )
        })?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < TIME_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!("g=2..{g_max}, {elapsed:.2?}"))
}

fn criterion_1() -> Outcome {
    oracle_range(Target::Weierstrass, 50)
}

fn criterion_2() -> Outcome {
    oracle_range(Target::G12, 50)
}

fn criterion_3() -> Outcome {
    let r = solve_coefficients(2, Target::Weierstrass).map_err(|e| e.to_string())?;
    let want = [
        (Unknown::D, q(3, 1)),
        (Unknown::C, q(-1, 10)),
        (Unknown::A(1, 0), q(-6, 5)),
        (Unknown::A(1, 1), q(-6, 5)),
    ];
    for (u, v) in &want {
        ensure(r.value(*u) == Some(v), || {
            format!("{u} = {:?}, want {v}", r.value(*u))
        })?;
    }
    ensure(r.values.len() == want.len(), || {
        format!("extra unknowns {:?}", r.values)
    })?;
    Ok("d=3, c=-1/10, a_{1,0}=a_{1,1}=-6/5".into())
}

fn criterion_4() -> Outcome {
    let r = solve_coefficients(3, Target::G12).map_err(|e| e.to_string())?;
    for u in [Unknown::A(1, 1), Unknown::B(1, 1)] {
        let v = r.value(u).ok_or(format!("{u} missing"))?;
        ensure(*v == q(1, 14), || format!("{u} = {v}"))?;
        ensure(*v != q(1, 16), || format!("{u} matches the 16 variant"))?;
    }
    let e = hg12_closed_form(3);
    ensure(
        e.coefficient(&BasisElement::Delta(1, Marking::OneA)) == q(1, 14),
        || "closed form disagrees".into(),
    )?;
    Ok("a_{1,1}=b_{1,1}=1/14".into())
}

fn criterion_5() -> Outcome {
    let s = horizontal_section_square(2);
    ensure(s.integral && s.value == q(-1, 1), || {
        format!("(1,0) chain gave {s:?}")
    })?;
    for h in 1..=50i64 {
        let t = diagonal_section_square(2 * h as usize + 2);
        ensure(t.integral && t.value == q(-h, 1), || {
            format!("h={h}: {t:?}")
        })?;
    }
    for g in 2..=100u32 {
        let d = diagonal_self_intersection(g);
        ensure(d == 2 - 2 * i64::from(g), || format!("g={g}: {d}"))?;
        ensure(blown_up_self_intersection(d, &[1]) == d - 1, || {
            format!("g={g}: blowup")
        })?;
    }
    Ok("s^2=-1, t^2=-h for h<=50, diagonal 2-2g".into())
}

fn criterion_6() -> Outcome {
    let mut checks = 0;
    for target in [Target::Weierstrass, Target::G12] {
        for g in 2..=20 {
            let r = solve_coefficients(g, target).map_err(|e| format!("{target} g={g}: {e}"))?;
            ensure(r.rank == r.unknown_count, || {
                format!("{target} g={g}: rank {}", r.rank)
            })?;
            if target == Target::G12 {
                for i in 1..=g / 2 {
                    let (low, high) =
                        ruling_determinations(&r, i).ok_or(format!("g={g} i={i}: missing"))?;
                    ensure(low == high, || format!("g={g} i={i}: {low} vs {high}"))?;
                    ensure(r.value(Unknown::A(i, 1)) == Some(&low), || {
                        format!("g={g} i={i}: solved value differs")
                    })?;
                    checks += 1;
                }
            }
        }
    }
    Ok(format!(
        "g=2..20 consistent and unique, {checks} a_(i,1) pairs agree"
    ))
}

fn criterion_7() -> Outcome {
    for g in 2..=100u32 {
        for n in 1..=2u8 {
            let amb = Ambient::new(g, n).map_err(|e| e.to_string())?;
            let labels = enumerate_formal(amb);
            let mut distinct: Vec<_> = labels
                .iter()
                .map(|e| canonicalize(*e, amb).unwrap())
                .collect();
            distinct.sort();
            distinct.dedup();
            let dim = basis_dimension(g, n).map_err(|e| e.to_string())?;
            ensure(
                dim == distinct.len() && dim == enumerate_basis(g, n).unwrap().len(),
                || format!("g={g} n={n}: dimension {dim}"),
            )?;
            for e in &labels {
                let c = canonicalize(*e, amb).unwrap();
                ensure(canonicalize(c, amb).unwrap() == c, || {
                    format!("g={g} {e:?}")
                })?;
            }
        }
        let (w, t) = (hgw_closed_form(g), hg12_closed_form(g));
        let pairs: Vec<(&hyperdiv::DivisorExpression, BasisElement, BasisElement)> = if g % 2 == 0 {
            let h = g / 2;
            vec![
                (
                    &w,
                    BasisElement::Delta(h, Marking::Zero),
                    BasisElement::Delta(h, Marking::One),
                ),
                (
                    &t,
                    BasisElement::Delta(h, Marking::Zero),
                    BasisElement::Delta(h, Marking::Two),
                ),
            ]
        } else {
            let j = (g - 1) / 2;
            vec![
                (
                    &w,
                    BasisElement::Eta(j, Marking::Zero),
                    BasisElement::Eta(j, Marking::One),
                ),
                (
                    &t,
                    BasisElement::Eta(j, Marking::Zero),
                    BasisElement::Eta(j, Marking::Two),
                ),
            ]
        };
        for (expr, a, b) in pairs {
            ensure(expr.coefficient(&a) == expr.coefficient(&b), || {
                format!("g={g}: {a:?} vs {b:?}")
            })?;
        }
        for target in [Target::Weierstrass, Target::G12] {
            for dv in catalog(g, target, true).map_err(|e| e.to_string())? {
                let d = dv.degree(&DegreeKey::Class(BasisElement::EtaIrr));
                ensure((d / q(2, 1)).is_integer(), || {
                    format!("g={g} {}: odd", dv.provenance)
                })?;
            }
        }
    }
    Ok("g=2..100, n=1,2".into())
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hyperdiv"))
}

fn criterion_8() -> Outcome {
    let out = bin()
        .args([
            "verify",
            "--range",
            "2..50",
            "--divisor",
            "both",
            "--format",
            "json",
        ])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.code() == Some(0), || {
        format!("verify exit {:?}", out.status.code())
    })?;
    let text = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    let reports: Vec<VerificationReport> =
        serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let again = serde_json::to_string_pretty(&reports).map_err(|e| e.to_string())?;
    ensure(again.trim_end() == text.trim_end(), || {
        "report JSON does not round-trip".into()
    })?;
    ensure(
        reports.len() == 2 && reports.iter().all(|r| r.genera.len() == 49),
        || "wrong report shape".into(),
    )?;

    for (div, g) in [("w", 2), ("g12", 2), ("w", 17), ("g12", 30)] {
        let out = bin()
            .args([
                "coeffs",
                "--divisor",
                div,
                "--genus",
                &g.to_string(),
                "--format",
                "json",
            ])
            .output()
            .map_err(|e| e.to_string())?;
        let text = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
        let rec = parse_json(&text).map_err(|e| format!("{div} g={g}: {e}"))?;
        ensure(
            hyperdiv::output::render_json(&rec).trim_end() == text.trim_end(),
            || format!("{div} g={g}: record does not round-trip"),
        )?;
    }

    let fault = bin()
        .args([
            "verify",
            "--range",
            "2..4",
            "--divisor",
            "w",
            "--inject-fault",
        ])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(fault.status.code() == Some(1), || {
        format!("fault exit {:?}", fault.status.code())
    })?;
    for args in [
        &["verify", "--range", "5..2", "--divisor", "w"][..],
        &["coeffs", "--genus", "1", "--divisor", "w"],
        &["coeffs", "--genus", "3", "--divisor", "both"],
    ] {
        let usage = bin().args(args).output().map_err(|e| e.to_string())?;
        ensure(usage.status.code() == Some(2), || {
            format!("{args:?} exit {:?}", usage.status.code())
        })?;
    }
    Ok("JSON round-trip; exits 0 / 1 / 2".into())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("oracle equivalence, weierstrass", criterion_1),
        ("oracle equivalence, g12", criterion_2),
        ("pinned g=2 weierstrass table", criterion_3),
        ("pinned g=3 g12 values", criterion_4),
        ("surface calculus", criterion_5),
        ("consistency and redundancy", criterion_6),
        ("structural suite", criterion_7),
        ("cli contract", criterion_8),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("[PASS] {} {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {} {name}: {why}", k + 1);
            }
        }
    }
    println!(
        "{}/{} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
