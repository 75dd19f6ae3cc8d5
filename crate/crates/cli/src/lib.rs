//! Command-line front end: argument definitions, text parsers and the
//! commands themselves. The binary only wires these to stdout and exit codes.

pub mod parse;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use cuspcount::blowup::{perfect_exceptional_report, SurfaceBase};
use cuspcount::cusp::{
    box_diagram, chain_classes, hj_expansions, render_box, weight_sequence, RenderFormat,
};
use cuspcount::f1::enumerate_perf;
use cuspcount::formal_curves::{
    check_assumption_a, check_assumption_b, check_assumption_c, cob_energy, cob_index,
    sufficient_a, sufficient_b, symp_energy, symp_index, CobordismCurve, HomologySurrogate,
    SymplectizationCurve,
};
use cuspcount::hidden_constraint::{degeneration_sum_bound, hidden_constraint_admissible};
use cuspcount::numbers::{rational_to_decimal, rational_to_string};
use cuspcount::obstruction::{embedding_bound, staircase_profile, ProfileInput, Side};
use cuspcount::spectrum::{action, cz_index, delta_path, orbit_at, rank_of, spectrum};
use cuspcount::{EllipsoidShape, PerturbedRational, ReebOrbit};

pub use parse::ParseError;

pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_DOMAIN: u8 = 3;
pub const EXIT_AMBIGUITY: u8 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] cuspcount::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{failed} of {total} acceptance criteria failed")]
    Acceptance { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) | CliError::Usage(_) => EXIT_PARSE,
            CliError::Core(e) if e.is_ambiguity() => EXIT_AMBIGUITY,
            CliError::Core(_) => EXIT_DOMAIN,
            CliError::Io(_) | CliError::Acceptance { .. } => EXIT_FAILURE,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BaseArg {
    Cp2,
    F1,
}

impl From<BaseArg> for SurfaceBase {
    fn from(b: BaseArg) -> Self {
        match b {
            BaseArg::Cp2 => SurfaceBase::Cp2,
            BaseArg::F1 => SurfaceBase::F1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Plus,
    Minus,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::Plus => Side::Plus,
            SideArg::Minus => Side::Minus,
        }
    }
}

/// Exact combinatorics of ellipsoid spectra, cusp resolutions and
/// staircase obstructions.
#[derive(Debug, Parser)]
#[command(name = "cuspcount", version, about)]
pub struct Cli {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Pretty-print JSON output.
    #[arg(long, global = true)]
    pub pretty: bool,

    /// Run the acceptance suite and report one line per criterion.
    #[arg(long)]
    pub repro: bool,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// The first COUNT orbits of the action spectrum.
    Spectrum {
        #[arg(long, allow_hyphen_values = true)]
        shape: String,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// The k-th orbit and its action.
    Orbit {
        #[arg(long, allow_hyphen_values = true)]
        shape: String,
        #[arg(long)]
        k: usize,
    },
    /// The lattice tuple maximizing the minimum action on level k.
    DeltaPath {
        #[arg(long, allow_hyphen_values = true)]
        shape: String,
        #[arg(long)]
        k: usize,
    },
    /// Conley–Zehnder index of an orbit, given as `axis^mult` or by rank.
    Cz {
        #[arg(long, allow_hyphen_values = true)]
        shape: String,
        #[arg(long, conflicts_with = "k", required_unless_present = "k")]
        orbit: Option<String>,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Index and energy of a formal curve. With `--c1` the curve lives in
    /// the cobordism and has negative ends only.
    FormalIndex {
        #[arg(long, allow_hyphen_values = true)]
        shape: String,
        #[arg(long)]
        pos: Option<String>,
        #[arg(long)]
        neg: Option<String>,
        #[arg(long, requires = "area")]
        c1: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        area: Option<String>,
    },
    /// Assumptions A, B and C for a class with the given first Chern number.
    CheckAssumptions {
        #[arg(long, allow_hyphen_values = true)]
        shape: String,
        #[arg(long)]
        c1: i64,
        #[arg(long, default_value_t = 1)]
        divisibility: u64,
    },
    /// Admissibility of a degeneration of the tangency tuple M into PARTS.
    HiddenConstraint {
        /// Tuple such as `3,2`.
        #[arg(long)]
        m: String,
        /// Tuples separated by `;`, such as `2,1;1,1`.
        #[arg(long)]
        parts: String,
    },
    /// The weight sequence of (p, q).
    Weights { p: i64, q: i64 },
    /// The box diagram of (p, q).
    Box {
        p: i64,
        q: i64,
        /// Also write an SVG rendering to this file.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Pixels per unit cell in SVG output.
        #[arg(long, default_value_t = 20)]
        scale: u32,
    },
    /// Resolution chain, self-intersections and continued fractions of (p, q).
    Resolve { p: i64, q: i64 },
    /// Perfect-exceptional certification of a class against a (p, q) cusp.
    Perfect {
        #[arg(long, value_enum, default_value = "f1")]
        base: BaseArg,
        #[arg(long, allow_hyphen_values = true)]
        class: String,
        #[arg(long, num_args = 2, value_names = ["P", "Q"])]
        cusp: Vec<i64>,
    },
    /// Perfect classes dℓ − me on F_1 for coprime p ≥ q with p ≤ MAX_P.
    F1Staircase {
        #[arg(long)]
        max_p: i64,
    },
    /// The embedding bound area / M_{c1 − 1} for one shape.
    Obstruction {
        #[arg(long, allow_hyphen_values = true)]
        area: String,
        #[arg(long)]
        c1: i64,
        #[arg(long, allow_hyphen_values = true)]
        shape: String,
        /// Record that the curve count is known to be nonzero.
        #[arg(long)]
        nonvanishing: bool,
    },
    /// Obstruction profile of E(1, p/q ± δ) from the perfect classes.
    Staircase {
        #[arg(long, value_enum, default_value = "f1")]
        base: BaseArg,
        #[arg(long)]
        max_p: i64,
        #[arg(long, value_enum, default_value = "plus")]
        side: SideArg,
        /// Write the table here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// What a command produced, before formatting.
pub enum Output {
    Json(Value),
    Text(String),
}

impl Output {
    pub fn render(self, pretty: bool) -> String {
        match self {
            Output::Json(v) if pretty => {
                serde_json::to_string_pretty(&v).expect("JSON values serialize")
            }
            Output::Json(v) => v.to_string(),
            Output::Text(s) => s,
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("library types serialize")
}

fn choose(format: Option<Format>, default: Format, allowed: &[Format]) -> CliResult<Format> {
    let f = format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(CliError::Usage(format!(
            "format {f:?} is not available for this command"
        )))
    }
}

fn orbit_json(a: &EllipsoidShape, rank: usize, orbit: ReebOrbit) -> CliResult<Value> {
    Ok(json!({
        "rank": rank,
        "axis": orbit.axis,
        "mult": orbit.mult,
        "action": action(a, orbit)?.to_string(),
    }))
}

fn csv_escape(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let fields: Vec<String> = row.iter().map(|f| csv_escape(f)).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

fn cusp_arg(values: &[i64]) -> CliResult<(i64, i64)> {
    match values {
        [p, q] => Ok((*p, *q)),
        _ => Err(CliError::Usage("--cusp takes two integers P Q".into())),
    }
}

pub fn run(cli: &Cli) -> CliResult<Output> {
    if cli.repro {
        return repro(cli.format);
    }
    let Some(command) = &cli.command else {
        return Err(CliError::Usage("no command given; see --help".into()));
    };
    let format = cli.format;
    match command {
        Command::Spectrum { shape, count } => {
            let a = parse::parse_shape(shape)?;
            let entries = spectrum(&a, *count)?;
            match choose(format, Format::Json, &[Format::Json, Format::Csv])? {
                Format::Csv => {
                    let rows: Vec<Vec<String>> = entries
                        .iter()
                        .enumerate()
                        .map(|(i, e)| {
                            vec![
                                (i + 1).to_string(),
                                e.orbit.axis.to_string(),
                                e.orbit.mult.to_string(),
                                e.action.to_string(),
                            ]
                        })
                        .collect();
                    Ok(Output::Text(csv(
                        &["rank", "axis", "mult", "action"],
                        &rows,
                    )))
                }
                _ => {
                    let rows = entries
                        .iter()
                        .enumerate()
                        .map(|(i, e)| orbit_json(&a, i + 1, e.orbit))
                        .collect::<CliResult<Vec<_>>>()?;
                    Ok(Output::Json(Value::Array(rows)))
                }
            }
        }
        Command::Orbit { shape, k } => {
            choose(format, Format::Json, &[Format::Json])?;
            let a = parse::parse_shape(shape)?;
            let orbit = orbit_at(&a, *k)?;
            Ok(Output::Json(orbit_json(&a, *k, orbit)?))
        }
        Command::DeltaPath { shape, k } => {
            choose(format, Format::Json, &[Format::Json])?;
            let a = parse::parse_shape(shape)?;
            Ok(Output::Json(to_json(&delta_path(&a, *k)?)))
        }
        Command::Cz { shape, orbit, k } => {
            choose(format, Format::Json, &[Format::Json])?;
            let a = parse::parse_shape(shape)?;
            let orbit = match (orbit, k) {
                (Some(text), _) => match parse::parse_orbits(text)?.as_slice() {
                    [o] => *o,
                    _ => return Err(CliError::Usage("--orbit takes a single orbit".into())),
                },
                (None, Some(k)) => orbit_at(&a, *k)?,
                (None, None) => return Err(CliError::Usage("give --orbit or --k".into())),
            };
            let rank = rank_of(&a, orbit)?;
            let mut value = orbit_json(&a, rank, orbit)?;
            value["cz"] = json!(cz_index(&a, orbit)?);
            Ok(Output::Json(value))
        }
        Command::FormalIndex {
            shape,
            pos,
            neg,
            c1,
            area,
        } => {
            choose(format, Format::Json, &[Format::Json])?;
            let a = parse::parse_shape(shape)?;
            let orbits = |text: &Option<String>| -> CliResult<Vec<ReebOrbit>> {
                Ok(match text {
                    Some(t) => parse::parse_orbits(t)?,
                    None => Vec::new(),
                })
            };
            let (positive, negative) = (orbits(pos)?, orbits(neg)?);
            let (index, energy) = match (c1, area) {
                (Some(c1), Some(area)) => {
                    if !positive.is_empty() {
                        return Err(CliError::Usage(
                            "cobordism curves have no positive ends".into(),
                        ));
                    }
                    let klass = HomologySurrogate::new(*c1, parse::parse_perturbed(area)?);
                    let curve = CobordismCurve::new(a, klass, negative)?;
                    (cob_index(&curve)?, cob_energy(&curve))
                }
                _ => {
                    let curve = SymplectizationCurve::new(a, positive, negative)?;
                    (symp_index(&curve)?, symp_energy(&curve))
                }
            };
            Ok(Output::Json(json!({
                "index": index,
                "energy": energy.to_string(),
                "energy_nonnegative": !energy.signum().is_lt(),
            })))
        }
        Command::CheckAssumptions {
            shape,
            c1,
            divisibility,
        } => {
            choose(format, Format::Json, &[Format::Json])?;
            let a = parse::parse_shape(shape)?;
            let check_a = check_assumption_a(&a, *c1)?;
            let check_b = check_assumption_b(&a, *c1)?;
            let orbit = orbit_at(&a, (*c1 - 1) as usize)?;
            let klass = HomologySurrogate::new(*c1, PerturbedRational::zero())
                .with_divisibility(*divisibility)?;
            Ok(Output::Json(json!({
                "c1": c1,
                "orbit": orbit_json(&a, (*c1 - 1) as usize, orbit)?,
                "assumption_a": to_json(&check_a),
                "assumption_b": to_json(&check_b),
                "assumption_c": check_assumption_c(&klass, orbit),
                "sufficient_a": sufficient_a(&a, *c1)?,
                "sufficient_b": sufficient_b(&a, *c1)?,
            })))
        }
        Command::HiddenConstraint { m, parts } => {
            choose(format, Format::Json, &[Format::Json])?;
            let m = parse::parse_tuple(m)?;
            let parts = parse::parse_tuples(parts)?;
            let verdict = hidden_constraint_admissible(&m, &parts)?;
            let mut value = to_json(&verdict);
            value["sum_exceeds_bound"] = json!(degeneration_sum_bound(&m, &parts)?);
            Ok(Output::Json(value))
        }
        Command::Weights { p, q } => {
            choose(format, Format::Json, &[Format::Json])?;
            Ok(Output::Json(to_json(&weight_sequence(*p, *q)?.weights)))
        }
        Command::Box { p, q, svg, scale } => {
            if *scale == 0 {
                return Err(CliError::Usage("--scale must be positive".into()));
            }
            if let Some(path) = svg {
                std::fs::write(
                    path,
                    render_box(*p, *q, RenderFormat::Svg { scale: *scale })?,
                )?;
            }
            match choose(
                format,
                Format::Json,
                &[Format::Json, Format::Svg, Format::Text],
            )? {
                Format::Svg => Ok(Output::Text(render_box(
                    *p,
                    *q,
                    RenderFormat::Svg { scale: *scale },
                )?)),
                Format::Text => Ok(Output::Text(render_box(*p, *q, RenderFormat::Ascii)?)),
                _ => Ok(Output::Json(to_json(&box_diagram(*p, *q)?))),
            }
        }
        Command::Resolve { p, q } => {
            choose(format, Format::Json, &[Format::Json])?;
            let chain = chain_classes(*p, *q)?;
            let mut value = to_json(&chain);
            if p > q {
                value["hj"] = to_json(&hj_expansions(*p, *q)?);
            }
            Ok(Output::Json(value))
        }
        Command::Perfect { base, class, cusp } => {
            choose(format, Format::Json, &[Format::Json])?;
            let (p, q) = cusp_arg(cusp)?;
            let klass = parse::parse_class(class, (*base).into())?;
            let report = perfect_exceptional_report(&klass, p, q)?;
            let mut value = to_json(&report);
            value["cremona_trace"] = json!(report.cremona.as_ref().map(|c| c
                .trace()
                .iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()));
            Ok(Output::Json(value))
        }
        Command::F1Staircase { max_p } => {
            let entries = enumerate_perf(*max_p)?;
            match choose(format, Format::Json, &[Format::Json, Format::Csv])? {
                Format::Csv => {
                    let rows: Vec<Vec<String>> = entries
                        .iter()
                        .map(|e| {
                            let quad = &e.quadruple;
                            vec![
                                quad.p.to_string(),
                                quad.q.to_string(),
                                quad.d.to_string(),
                                quad.m.to_string(),
                                quad.j.map(|j| j.to_string()).unwrap_or_default(),
                                e.in_corollary_branch.to_string(),
                                e.double_points.to_string(),
                            ]
                        })
                        .collect();
                    Ok(Output::Text(csv(
                        &[
                            "p",
                            "q",
                            "d",
                            "m",
                            "j",
                            "in_corollary_branch",
                            "double_points",
                        ],
                        &rows,
                    )))
                }
                _ => Ok(Output::Json(to_json(&entries))),
            }
        }
        Command::Obstruction {
            area,
            c1,
            shape,
            nonvanishing,
        } => {
            choose(format, Format::Json, &[Format::Json])?;
            let a = parse::parse_shape(shape)?;
            let klass = HomologySurrogate::new(*c1, parse::parse_perturbed(area)?);
            let mut record = embedding_bound(&klass, &a)?;
            if *nonvanishing {
                record = record.assert_nonvanishing();
            }
            let mut value = to_json(&record);
            value["bound_text"] = json!(record.bound.to_string());
            Ok(Output::Json(value))
        }
        Command::Staircase {
            base,
            max_p,
            side,
            out,
        } => {
            let format = choose(format, Format::Csv, &[Format::Csv, Format::Json])?;
            let text = staircase(*base, *max_p, (*side).into(), format)?;
            match out {
                Some(path) => {
                    std::fs::write(path, &text)?;
                    Ok(Output::Text(String::new()))
                }
                None => Ok(Output::Text(text)),
            }
        }
    }
}

/// Digits after the point in decimal columns.
const DECIMAL_DIGITS: usize = 12;

fn staircase(base: BaseArg, max_p: i64, side: Side, format: Format) -> CliResult<String> {
    if base != BaseArg::F1 {
        return Err(CliError::Core(cuspcount::Error::Domain(
            "staircase profiles are available for the F1 base only".into(),
        )));
    }
    let inputs: Vec<ProfileInput> = enumerate_perf(max_p)?
        .into_iter()
        .map(|e| {
            let quad = e.quadruple;
            ProfileInput {
                klass: HomologySurrogate::new(
                    quad.p + quad.q,
                    PerturbedRational::from_int(3 * quad.d - quad.m),
                ),
                p: quad.p,
                q: quad.q,
                side,
            }
        })
        .collect();
    let rows = staircase_profile(&inputs)?;
    if format == Format::Json {
        return Ok(to_json(&rows).to_string());
    }
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let ratio = num::rational::BigRational::new(r.p.into(), r.q.into());
            let limit = r.bound.limit_value();
            vec![
                r.ratio.clone(),
                rational_to_decimal(&ratio, DECIMAL_DIGITS),
                limit
                    .as_ref()
                    .map(rational_to_string)
                    .unwrap_or_else(|| "inf".into()),
                limit
                    .as_ref()
                    .map(|l| rational_to_decimal(l, DECIMAL_DIGITS))
                    .unwrap_or_else(|| "inf".into()),
            ]
        })
        .collect();
    Ok(csv(
        &["ratio", "ratio_decimal", "bound", "bound_decimal"],
        &table,
    ))
}

fn repro(format: Option<Format>) -> CliResult<Output> {
    let format = choose(format, Format::Text, &[Format::Text, Format::Json])?;
    let reports = cuspcount::repro::run_all();
    let failed = reports.iter().filter(|r| !r.passed).count();
    let total = reports.len();
    let rendered = match format {
        Format::Json => to_json(&reports).to_string(),
        _ => reports.iter().map(|r| format!("{r}\n")).collect(),
    };
    if failed > 0 {
        // The report still goes to stdout so a failing run can be inspected.
        println!("{rendered}");
        return Err(CliError::Acceptance { failed, total });
    }
    Ok(Output::Text(rendered))
}
