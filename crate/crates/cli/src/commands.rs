use std::fmt::Write;
use std::fs;
use std::path::Path;

use admcover_core::constructions::{glue_equal_images, glue_genus_raise, GluingMode, GluingSpec};
use admcover_core::curve_graph::DualGraph;
use admcover_core::dot::{cover_to_dot, graph_to_dot};
use admcover_core::ellipticity::{
    classify_hyperelliptic_one_node, decide, decide_one_node_via, judge_specific,
    verify_certificate, CertificateReport, EllipticityCertificate, IrreducibleCurveData, Verdict,
};
use admcover_core::graph_cover::{
    complete_cover, to_admissible, to_pseudo, validate, CoverError, GraphCover,
};
use admcover_core::smooth_cover::{validate_rh, BranchDatum, HurwitzOracle};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{Command, Format, GlueMode};

pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_BOUNDS: u8 = 3;

#[derive(Debug)]
pub struct Failure {
    pub code: String,
    pub message: String,
    pub exit: u8,
}

impl Failure {
    pub fn input(code: &str, message: impl Into<String>) -> Self {
        Failure {
            code: code.into(),
            message: message.into(),
            exit: EXIT_INPUT,
        }
    }

    /// Exit status follows the error code: bound errors get their own status.
    pub fn coded(code: &str, message: impl ToString) -> Self {
        Failure {
            code: code.into(),
            message: message.to_string(),
            exit: if code == "search_bound_exceeded" {
                EXIT_BOUNDS
            } else {
                EXIT_INPUT
            },
        }
    }
}

/// What a command prints, in each format, and its exit status.
pub struct Outcome {
    pub json: Value,
    pub text: String,
    pub dot: Option<String>,
    pub exit: u8,
}

impl Outcome {
    fn new(value: &impl Serialize, text: String, exit: u8) -> Self {
        Outcome {
            json: serde_json::to_value(value).expect("outputs serialize"),
            text,
            dot: None,
            exit,
        }
    }

    fn with_dot(mut self, dot: String) -> Self {
        self.dot = Some(dot);
        self
    }

    pub fn render(&self, format: Format) -> Result<String, Failure> {
        match format {
            Format::Json => {
                Ok(serde_json::to_string_pretty(&self.json).expect("values print") + "\n")
            }
            Format::Text => Ok(self.text.clone()),
            Format::Dot => self.dot.clone().ok_or_else(|| {
                Failure::input("unsupported_format", "this command has no DOT output")
            }),
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::input("io_error", format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        let code = match e.classify() {
            serde_json::error::Category::Data => "invalid_input",
            _ => "malformed_json",
        };
        Failure::input(
            code,
            format!("{}:{}:{}: {e}", path.display(), e.line(), e.column()),
        )
    })
}

fn cover_failure(e: CoverError) -> Failure {
    Failure::coded(e.code(), e)
}

fn verdict_text(v: &Verdict) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "decision: {}",
        serde_json::to_value(v.decision).unwrap().as_str().unwrap()
    );
    if let Some(c) = &v.certificate {
        let _ = writeln!(out, "h': {}", c.h_prime());
        let _ = writeln!(out, "delta0: {}", c.delta0);
        let groups: Vec<String> = c
            .groups
            .iter()
            .map(|g| {
                g.iter()
                    .map(|n| n.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        let _ = writeln!(out, "groups: [{}]", groups.join("] ["));
    }
    for r in &v.refutations {
        let tag = serde_json::to_value(r.tag).unwrap();
        match r.h_prime {
            Some(hp) => {
                let _ = writeln!(
                    out,
                    "refuted h'={hp} [{}]: {}",
                    tag.as_str().unwrap(),
                    r.detail
                );
            }
            None => {
                let _ = writeln!(out, "refuted [{}]: {}", tag.as_str().unwrap(), r.detail);
            }
        }
    }
    let _ = writeln!(out, "scope: {}", v.scope);
    out
}

fn report_text(r: &CertificateReport) -> String {
    let mut out = format!("valid: {}\n", r.valid);
    for x in &r.refutations {
        let _ = writeln!(
            out,
            "[{}] {}",
            serde_json::to_value(x.tag).unwrap().as_str().unwrap(),
            x.detail
        );
    }
    out
}

fn cover_outcome(c: &GraphCover) -> Outcome {
    let text = format!(
        "degree: {}\nsource genus: {}\ntarget genus: {}\nsource components: {}\ntarget components: {}\n",
        c.degree(),
        c.source().arithmetic_genus(),
        c.target().arithmetic_genus(),
        c.source().vertex_count(),
        c.target().vertex_count()
    );
    Outcome::new(c, text, 0).with_dot(cover_to_dot(c))
}

pub fn run(command: &Command, oracle: &HurwitzOracle) -> Result<Outcome, Failure> {
    match command {
        Command::ValidateCurve { file } => {
            let g: DualGraph = read_json(file)?;
            let value = json!({
                "genus": g.arithmetic_genus(),
                "stable": g.is_stable(),
                "vertices": g.vertex_count(),
                "edges": g.edge_count(),
                "legs": g.leg_count(),
            });
            let text = format!(
                "genus: {}\nstable: {}\n",
                g.arithmetic_genus(),
                g.is_stable()
            );
            Ok(Outcome::new(&value, text, 0).with_dot(graph_to_dot(&g)))
        }
        Command::ValidateCover { file, mode } => {
            let c: GraphCover = read_json(file)?;
            let report = validate(&c, (*mode).into());
            let exit = if report.passed() { 0 } else { EXIT_NEGATIVE };
            Ok(Outcome::new(&report, report.summary() + "\n", exit))
        }
        Command::Complete { file } => {
            let c: GraphCover = read_json(file)?;
            match complete_cover(&c) {
                Ok(done) => Ok(cover_outcome(&done)),
                Err(CoverError::NotCompletable(report)) => {
                    let value = json!({ "completed": false, "report": *report });
                    Ok(Outcome::new(
                        &value,
                        format!("not completable: {}\n", report.summary()),
                        EXIT_NEGATIVE,
                    ))
                }
                Err(e) => Err(cover_failure(e)),
            }
        }
        Command::ToAdmissible { file } => {
            let c: GraphCover = read_json(file)?;
            let out = to_admissible(&c).map_err(cover_failure)?;
            let text = cover_outcome(&out.cover).text;
            Ok(Outcome::new(&out, text, 0).with_dot(cover_to_dot(&out.cover)))
        }
        Command::ToPseudo { file } => {
            let c: GraphCover = read_json(file)?;
            Ok(cover_outcome(&to_pseudo(&c).map_err(cover_failure)?))
        }
        Command::Glue { file, mode } => {
            let spec: GluingSpec = read_json(file)?;
            let matches = matches!(
                (mode, &spec.mode),
                (GlueMode::EqualImages, GluingMode::EqualImages)
                    | (GlueMode::GenusRaise, GluingMode::GenusRaise { .. })
            );
            if !matches {
                return Err(Failure::input(
                    "invalid_spec",
                    "--mode does not match the mode in the gluing spec",
                ));
            }
            let glued = match mode {
                GlueMode::EqualImages => glue_equal_images(&spec),
                GlueMode::GenusRaise => glue_genus_raise(&spec),
            }
            .map_err(|e| Failure::coded(e.code(), &e))?;
            Ok(cover_outcome(&glued))
        }
        Command::Decide {
            file,
            d,
            h,
            map,
            route,
        } => {
            let curve: IrreducibleCurveData = read_json(file)?;
            let verdict = match (map, route) {
                (Some(_), Some(_)) => {
                    return Err(Failure::input(
                        "invalid_arguments",
                        "--map and --route exclude each other",
                    ))
                }
                (Some(path), None) => {
                    let map: BranchDatum = read_json(path)?;
                    judge_specific(&curve, *d, *h, Some(&map), oracle)
                }
                (None, Some(r)) => decide_one_node_via(&curve, *d, *h, (*r).into(), oracle),
                (None, None) => decide(&curve, *d, *h, oracle),
            }
            .map_err(|e| Failure::coded(e.code(), &e))?;
            let exit = if verdict.certificate.is_some() {
                0
            } else {
                EXIT_NEGATIVE
            };
            Ok(Outcome::new(&verdict, verdict_text(&verdict), exit))
        }
        Command::VerifyCert {
            curve,
            certificate,
            d,
            h,
        } => {
            let curve: IrreducibleCurveData = read_json(curve)?;
            let cert: EllipticityCertificate = read_json(certificate)?;
            let report = verify_certificate(&curve, *d, *h, &cert)
                .map_err(|e| Failure::coded(e.code(), &e))?;
            let exit = if report.valid { 0 } else { EXIT_NEGATIVE };
            Ok(Outcome::new(&report, report_text(&report), exit))
        }
        Command::ClassifyHyperelliptic { genus, relation } => {
            let class = classify_hyperelliptic_one_node(*genus, (*relation).into())
                .map_err(|e| Failure::coded(e.code(), &e))?;
            let name = serde_json::to_value(class).unwrap();
            let text = format!("{}\n", name.as_str().unwrap());
            Ok(Outcome::new(&json!({ "class": name }), text, 0))
        }
        Command::HurwitzExists { file } => {
            let datum: BranchDatum = read_json(file)?;
            let witness = oracle
                .is_realizable(&datum)
                .map_err(|e| Failure::coded(e.code(), &e))?;
            let (value, text, exit) = match witness {
                Some(w) => (
                    json!({ "realizable": true, "witness": w }),
                    "realizable\n".to_owned(),
                    0,
                ),
                None => {
                    let rh = validate_rh(&datum);
                    let (reason, detail) = if rh.valid {
                        (
                            "monodromy",
                            "no transitive monodromy with these cycle types".to_owned(),
                        )
                    } else {
                        ("rh", rh.reason.unwrap_or_default())
                    };
                    (
                        json!({ "realizable": false, "reason": reason, "detail": detail }),
                        format!("not realizable ({reason}): {detail}\n"),
                        EXIT_NEGATIVE,
                    )
                }
            };
            Ok(Outcome::new(&value, text, exit))
        }
        Command::ExportDot { file } => {
            let value: Value = read_json(file)?;
            let dot = if value.get("source").is_some() {
                let c: GraphCover = serde_json::from_value(value).map_err(|e| {
                    Failure::input("invalid_input", format!("{}: {e}", file.display()))
                })?;
                cover_to_dot(&c)
            } else {
                let g: DualGraph = serde_json::from_value(value).map_err(|e| {
                    Failure::input("invalid_input", format!("{}: {e}", file.display()))
                })?;
                graph_to_dot(&g)
            };
            Ok(Outcome {
                json: Value::String(dot.clone()),
                text: dot.clone(),
                dot: Some(dot),
                exit: 0,
            })
        }
    }
}
