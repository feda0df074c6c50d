use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use hyperdiv::closedform::{closed_form, verify_range_with, Fault, VerificationReport};
use hyperdiv::families::{catalog, DegreeKey, Target};
use hyperdiv::output::{
    identified_names, render_csv, render_json, render_latex, GenusRange, OutputRecord,
};
use hyperdiv::solver::{assemble_system, solve_coefficients};
use hyperdiv::{DivisorExpression, View};

/// Divisor classes of the hyperelliptic Weierstrass and g¹₂ divisors.
#[derive(Parser)]
#[command(name = "hyperdiv", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the coefficients of a divisor class.
    Coeffs {
        #[arg(long, value_enum)]
        divisor: DivisorArg,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        genus: u32,
        #[arg(long, value_enum, default_value_t = CoeffFormat::Json)]
        format: CoeffFormat,
        #[arg(long, value_enum, default_value_t = ViewArg::Formal)]
        view: ViewArg,
        /// Where the coefficients come from.
        #[arg(long, value_enum, default_value_t = Source::Solver)]
        source: Source,
    },
    /// Solve every genus in a range and compare with the closed formulas.
    Verify {
        #[arg(long)]
        range: GenusRange,
        #[arg(long, value_enum)]
        divisor: DivisorChoice,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
        /// Corrupt the closed form before comparing (tests the failure path).
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Print the assembled relations, one per line.
    Relations {
        #[arg(long, value_enum)]
        divisor: DivisorArg,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        genus: u32,
    },
    /// Print the degree vector of every test family.
    Families {
        #[arg(long, value_enum)]
        divisor: DivisorArg,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        genus: u32,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DivisorArg {
    #[value(alias = "weierstrass")]
    W,
    G12,
}

#[derive(Clone, Copy, ValueEnum)]
enum DivisorChoice {
    #[value(alias = "weierstrass")]
    W,
    G12,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum CoeffFormat {
    Json,
    Csv,
    Latex,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ViewArg {
    Formal,
    Canonical,
}

#[derive(Clone, Copy, ValueEnum)]
enum Source {
    Solver,
    ClosedForm,
}

impl From<DivisorArg> for Target {
    fn from(d: DivisorArg) -> Target {
        match d {
            DivisorArg::W => Target::Weierstrass,
            DivisorArg::G12 => Target::G12,
        }
    }
}

impl DivisorChoice {
    fn targets(self) -> Vec<Target> {
        match self {
            DivisorChoice::W => vec![Target::Weierstrass],
            DivisorChoice::G12 => vec![Target::G12],
            DivisorChoice::Both => vec![Target::Weierstrass, Target::G12],
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Coeffs {
            divisor,
            genus,
            format,
            view,
            source,
        } => {
            let target = Target::from(divisor);
            let formal = match source {
                Source::Solver => {
                    solve_coefficients(genus, target)
                        .map_err(|e| e.to_string())?
                        .solution
                }
                Source::ClosedForm => closed_form(target, genus),
            };
            let expr = match view {
                ViewArg::Formal => formal,
                ViewArg::Canonical => formal.to_canonical(),
            };
            print!("{}", render_coeffs(target, &expr, format));
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            range,
            divisor,
            format,
            inject_fault,
        } => {
            let fault = inject_fault.then_some(Fault::PsiOffset);
            let reports: Vec<VerificationReport> = divisor
                .targets()
                .into_iter()
                .map(|t| verify_range_with(range.start, range.end, t, fault))
                .collect();
            match format {
                ReportFormat::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&reports).map_err(|e| e.to_string())?
                ),
                ReportFormat::Text => print!("{}", render_reports(&reports)),
            }
            Ok(if reports.iter().all(|r| r.pass) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Relations { divisor, genus } => {
            let relations = assemble_system(genus, divisor.into()).map_err(|e| e.to_string())?;
            for r in relations {
                println!("{r}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Families {
            divisor,
            genus,
            format,
        } => {
            let target = Target::from(divisor);
            let families = catalog(genus, target, true).map_err(|e| e.to_string())?;
            let marks = target.marks();
            match format {
                ReportFormat::Text => {
                    for dv in &families {
                        let degrees: Vec<String> = dv
                            .degrees
                            .iter()
                            .map(|(k, v)| format!("{}={v}", k.name(marks)))
                            .collect();
                        println!(
                            "{}: {}; target={}",
                            dv.provenance,
                            degrees.join(", "),
                            dv.target_degree
                        );
                    }
                }
                ReportFormat::Json => {
                    let records: Vec<_> = families
                        .iter()
                        .map(|dv| {
                            let degrees: Vec<_> = dv
                                .degrees
                                .iter()
                                .map(|(k, v)| {
                                    json!({
                                        "class": k.name(marks),
                                        "auxiliary": matches!(k, DegreeKey::Auxiliary(_)),
                                        "degree": v,
                                    })
                                })
                                .collect();
                            json!({
                                "family": dv.provenance.to_string(),
                                "target_degree": dv.target_degree,
                                "degrees": degrees,
                            })
                        })
                        .collect();
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&records).map_err(|e| e.to_string())?
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn render_coeffs(target: Target, expr: &DivisorExpression, format: CoeffFormat) -> String {
    match format {
        CoeffFormat::Json => {
            let mut s = render_json(&OutputRecord::from_expression(target, expr));
            s.push('\n');
            s
        }
        CoeffFormat::Csv => {
            let identified = identified_names(expr.ambient());
            if expr.view() == View::Formal && !identified.is_empty() {
                eprintln!(
                    "note: formal view; identified labels: {}",
                    identified.join(", ")
                );
            }
            render_csv(expr)
        }
        CoeffFormat::Latex => render_latex(target, expr),
    }
}

fn render_reports(reports: &[VerificationReport]) -> String {
    let mut out = String::new();
    for r in reports {
        for g in &r.genera {
            let status = if g.pass { "pass" } else { "FAIL" };
            out.push_str(&format!(
                "{} g={} {status} rank={} relations={} unknowns={} auxiliaries={} redundant={}\n",
                r.target,
                g.genus,
                g.rank,
                g.relations,
                g.unknowns,
                g.auxiliaries.len(),
                g.redundant.len()
            ));
            if let Some(e) = &g.error {
                out.push_str(&format!("  error: {e}\n"));
            }
            for m in &g.mismatches {
                out.push_str(&format!(
                    "  {}: solver {} closed form {}\n",
                    m.class, m.solver, m.closed_form
                ));
            }
        }
        let passed = r.genera.iter().filter(|g| g.pass).count();
        out.push_str(&format!(
            "{}: {passed}/{} genera pass\n",
            r.target,
            r.genera.len()
        ));
    }
    out
}
