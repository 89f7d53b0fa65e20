//! The `hamel` command line.
//!
//! Every subcommand reads operators in the text grammar of
//! [`DiffOp::parse`] and vectors, functionals and operators in their JSON
//! forms; an argument starting with `@` names a file to read instead.
//! Output is one line of JSON, or aligned text with `--text`.
//!
//! Exit codes: 0 on success, 1 on a domain error (with a JSON error object
//! on standard output), 2 on a usage error.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::basis::{complement, extend_to_basis, is_free, rank, FreenessCertificate};
use crate::cardinals::{self, Cardinal};
use crate::diffops::{self, convolve, DiffOp, PointDistribution};
use crate::duals::{schwartz_moments, weak_limit, Functional, Horizon, ParametricMomentFamily, Piece, PiecewisePolynomial, RationalFunction};
use crate::error::{Error, Result};
use crate::finsupp::{Field, FinSuppVec};
use crate::operators::{solve_dual, ColumnFiniteOperator, InjectivityCertificate};
use crate::poly::Polynomial;

#[derive(Debug, Parser)]
#[command(name = "hamel", version, about = "Exact algebraic duals and formal transposes of differential operators")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
struct Common {
    /// Number of variables (inferred from the input when omitted).
    #[arg(long, global = true)]
    dims: Option<usize>,
    /// Degree bound N.
    #[arg(long = "order", short = 'N', global = true)]
    order: Option<u32>,
    /// Scalar field: Q, Qi or GF:p.
    #[arg(long, global = true, value_parser = parse_field)]
    field: Option<Field>,
    /// Aligned plain text instead of JSON.
    #[arg(long, global = true)]
    text: bool,
    /// Write the result to FILE instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    output: Option<String>,
}

fn parse_field(s: &str) -> std::result::Result<Field, String> {
    Field::parse(s).map_err(|e| e.to_string())
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Formal transpose of an operator.
    Transpose { operator: String },
    /// Apply an operator to a polynomial.
    Apply { operator: String, polynomial: String },
    /// Solve Λ∘O = T up to degree N (O as JSON or operator text).
    SolveDual { operator: String, functional: String },
    /// Fundamental solution of P* on the polynomial model.
    Fundsol { operator: String },
    /// Transpose, injectivity probe and classification flags.
    Regularity { operator: String },
    /// Convolve a functional with a point distribution (JSON or "delta").
    Convolve { functional: String, point: String },
    /// Integral moments of a piecewise polynomial, pieces as a:b:poly.
    Moments {
        #[arg(long = "piece", required = true)]
        pieces: Vec<String>,
    },
    /// Weak limit of a parametric moment family.
    WeakLimit {
        /// The boxes n·1[0,1/n].
        #[arg(long = "box", conflicts_with = "family")]
        boxes: bool,
        family: Option<String>,
    },
    /// Free sets, basis extension and complements (JSON vector lists).
    #[command(subcommand)]
    Basis(BasisCommand),
    /// Cardinal arithmetic under GCH.
    #[command(subcommand)]
    Card(CardCommand),
}

#[derive(Debug, Subcommand)]
enum BasisCommand {
    IsFree { vectors: String },
    Extend { free: String, ambient: String },
    Complement { subspace: String, space: String },
    Rank { vectors: String },
}

#[derive(Debug, Subcommand)]
enum CardCommand {
    Max { a: String, b: String },
    Succ { a: String },
    Pow { base: String, exponent: String },
    OfSpace {
        #[arg(long)]
        dim: String,
        #[arg(long = "field-card")]
        field_card: String,
    },
    DimDual {
        #[arg(long)]
        dim: String,
        #[arg(long = "field-card")]
        field_card: String,
    },
    Table,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the command line on `argv` (including the program name).
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let (code, body) = match execute(&cli) {
        Ok(out) => (0, if cli.common.text { out.text } else { out.json.to_string() }),
        Err(e) => (1, error_json(&e).to_string()),
    };
    let mut body = body;
    if !body.ends_with('\n') {
        body.push('\n');
    }
    if let Some(path) = &cli.common.output {
        if let Err(e) = std::fs::write(path, &body) {
            return Outcome { code: 1, stdout: String::new(), stderr: format!("cannot write {path}: {e}\n") };
        }
        return Outcome { code, stdout: String::new(), stderr: String::new() };
    }
    Outcome { code, stdout: body, stderr: String::new() }
}

struct Rendered {
    json: Value,
    text: String,
}

fn error_json(e: &Error) -> Value {
    let mut v = json!({ "error": e.kind(), "message": e.to_string() });
    match e {
        Error::NotInjective { witness, obstruction } => {
            v["witness"] = json!(witness);
            v["obstruction"] = json!(obstruction);
        }
        Error::NotFree { witness } => {
            v["witness"] = json!(witness.iter().map(|x| x.to_string()).collect::<Vec<_>>());
        }
        Error::NotInSpan { residual } => v["residual"] = json!(residual),
        Error::Divergent(at) => v["degrees"] = json!(at),
        Error::Syntax { position, .. } => v["position"] = json!(position),
        _ => {}
    }
    v
}

fn read_arg(s: &str) -> Result<String> {
    match s.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("cannot read {path}: {e}"))),
        None => Ok(s.to_string()),
    }
}

fn from_json<T: for<'de> Deserialize<'de>>(s: &str) -> Result<T> {
    serde_json::from_str(&read_arg(s)?).map_err(|e| Error::Invalid(e.to_string()))
}

fn require_order(c: &Common) -> Result<u32> {
    c.order.ok_or_else(|| Error::Invalid("this command needs --order N".into()))
}

fn parse_op(text: &str, c: &Common) -> Result<DiffOp> {
    let text = read_arg(text)?;
    match (c.dims, c.field) {
        (Some(d), Some(f)) => DiffOp::parse_in(&text, d, f),
        (Some(d), None) => DiffOp::parse_with_dims(&text, d),
        (None, Some(f)) => {
            let d = DiffOp::parse(&text)?.dims();
            DiffOp::parse_in(&text, d, f)
        }
        (None, None) => DiffOp::parse(&text),
    }
}

fn parse_poly(text: &str, c: &Common) -> Result<Polynomial> {
    let p = parse_op(text, c)?;
    if p.order() > 0 {
        return Err(Error::Invalid(format!("{p} is not a polynomial")));
    }
    Ok(p.symbol(&vec![0; p.dims()]))
}

fn op_json(p: &DiffOp) -> Rendered {
    Rendered { json: json!(p), text: p.to_string() }
}

fn poly_json(p: &Polynomial) -> Rendered {
    Rendered { json: json!({ "dims": p.dims(), "vector": p.as_vec(), "text": p.to_string() }), text: p.to_string() }
}

fn functional_json(f: &Functional) -> Rendered {
    let mut v = json!(f);
    let mut text = String::new();
    match f.dense() {
        Ok(rows) => {
            if f.dims() == 1 {
                v["sequence"] = json!(rows.iter().map(|(_, x)| x.to_string()).collect::<Vec<_>>());
            }
            let labels: Vec<String> = rows.iter().map(|(b, _)| crate::finsupp::Index::Tuple(b.clone()).to_string()).collect();
            let width = labels.iter().map(|l| l.chars().count()).max().unwrap_or(0);
            for (label, (_, x)) in labels.iter().zip(&rows) {
                let _ = writeln!(text, "{label:<width$}  {x}");
            }
        }
        Err(_) => {
            for (k, x) in f.entries() {
                let _ = writeln!(text, "{k}  {x}");
            }
            text.push_str("(zero beyond)\n");
        }
    }
    Rendered { json: v, text }
}

fn vectors_text(vs: &[FinSuppVec]) -> String {
    vs.iter().map(|v| format!("{v}\n")).collect()
}

fn certificate_json(p: &DiffOp, probe: &InjectivityCertificate) -> String {
    match probe {
        InjectivityCertificate::InjectiveUpTo(n) => format!("injective up to degree {n}"),
        InjectivityCertificate::KernelWitness(v) => {
            let poly = Polynomial::from_vec(p.dims(), v.clone()).map(|q| q.to_string()).unwrap_or_else(|_| v.to_string());
            format!("kernel witness {poly}")
        }
    }
}

fn parse_piece(spec: &str, c: &Common) -> Result<Piece> {
    let mut parts = spec.splitn(3, ':');
    let (Some(a), Some(b), Some(poly)) = (parts.next(), parts.next(), parts.next()) else {
        return Err(Error::Invalid(format!("piece {spec:?} is not of the form a:b:poly")));
    };
    let rat = |s: &str| match crate::finsupp::Scalar::parse(s.trim(), Field::Rational)? {
        crate::finsupp::Scalar::Rational(q) => Ok(q),
        _ => Err(Error::Invalid(format!("{s} is not rational"))),
    };
    let common = Common { dims: Some(1), field: Some(Field::Rational), ..c.clone() };
    Ok(Piece { a: rat(a)?, b: rat(b)?, poly: parse_poly(poly, &common)? })
}

#[derive(Deserialize)]
struct RationalRepr {
    num: Vec<String>,
    den: Vec<String>,
}

#[derive(Deserialize)]
struct FamilyRepr {
    dims: usize,
    entries: Vec<(Vec<u32>, RationalRepr)>,
}

fn ints(xs: &[String]) -> Result<Vec<BigInt>> {
    xs.iter().map(|x| x.trim().parse().map_err(|_| Error::Invalid(format!("{x} is not an integer")))).collect()
}

fn parse_family(s: &str) -> Result<ParametricMomentFamily> {
    let repr: FamilyRepr = from_json(s)?;
    let mut entries = Vec::new();
    for (beta, r) in repr.entries {
        entries.push((beta, RationalFunction::new(ints(&r.num)?, ints(&r.den)?)?));
    }
    ParametricMomentFamily::from_entries(repr.dims, entries)
}

fn parse_point(s: &str, dims: usize, field: Field) -> Result<PointDistribution> {
    if s.trim() == "delta" {
        return Ok(PointDistribution::delta(dims, field));
    }
    from_json(s)
}

fn parse_operator(s: &str, c: &Common) -> Result<ColumnFiniteOperator> {
    let body = read_arg(s)?;
    if body.trim_start().starts_with('{') {
        return from_json(&body);
    }
    Ok(diffops::as_operator_on_polys(&parse_op(&body, c)?))
}

fn parse_functional(s: &str, dims: usize, field: Field, c: &Common) -> Result<Functional> {
    if s.trim() == "delta" {
        let n = require_order(c)?;
        return Ok(Functional::delta(dims, Horizon::Finite(n), field));
    }
    from_json(s)
}

fn card(s: &str) -> Result<Cardinal> {
    s.parse()
}

fn card_json(c: Cardinal) -> Rendered {
    Rendered { json: json!(c), text: c.to_string() }
}

fn execute(cli: &Cli) -> Result<Rendered> {
    let c = &cli.common;
    Ok(match &cli.command {
        Command::Transpose { operator } => op_json(&diffops::transpose(&parse_op(operator, c)?)),
        Command::Apply { operator, polynomial } => {
            let p = parse_op(operator, c)?;
            let common = Common { dims: Some(p.dims()), ..c.clone() };
            let f = parse_poly(polynomial, &common)?;
            poly_json(&diffops::apply_poly(&p, &f)?)
        }
        Command::SolveDual { operator, functional } => {
            let o = parse_operator(operator, c)?;
            let t = parse_functional(functional, o.dims(), o.field(), c)?;
            let n = match c.order {
                Some(n) => n,
                None => t.horizon().finite().ok_or(Error::UnboundedHorizon)?,
            };
            functional_json(&solve_dual(&o, &t, n)?)
        }
        Command::Fundsol { operator } => {
            functional_json(&diffops::fundamental_solution(&parse_op(operator, c)?, require_order(c)?)?)
        }
        Command::Regularity { operator } => {
            let p = parse_op(operator, c)?;
            let report = diffops::regularity_report(&p, require_order(c)?)?;
            let flags: Vec<String> = report.flags.iter().map(|f| format!("{f:?}")).collect();
            let text = format!(
                "operator   {}\ntranspose  {}\nprobe      {}\nflags      {}\n",
                report.operator,
                report.transpose,
                certificate_json(&p, &report.probe),
                if flags.is_empty() { "none".into() } else { flags.join(", ") }
            );
            Rendered { json: json!(report), text }
        }
        Command::Convolve { functional, point } => {
            let s: Functional = from_json(functional)?;
            let t = parse_point(point, s.dims(), s.field())?;
            functional_json(&convolve(&s, &t)?)
        }
        Command::Moments { pieces } => {
            let pieces = pieces.iter().map(|p| parse_piece(p, c)).collect::<Result<Vec<_>>>()?;
            functional_json(&schwartz_moments(&PiecewisePolynomial::new(pieces)?, require_order(c)?)?)
        }
        Command::WeakLimit { boxes, family } => {
            let fam = match (boxes, family) {
                (true, _) => ParametricMomentFamily::box_family(),
                (false, Some(f)) => parse_family(f)?,
                (false, None) => return Err(Error::Invalid("give --box or a family".into())),
            };
            functional_json(&weak_limit(&fam, require_order(c)?)?)
        }
        Command::Basis(cmd) => basis(cmd)?,
        Command::Card(cmd) => card_command(cmd)?,
    })
}

fn basis(cmd: &BasisCommand) -> Result<Rendered> {
    Ok(match cmd {
        BasisCommand::IsFree { vectors } => {
            let vs: Vec<FinSuppVec> = from_json(vectors)?;
            let cert = is_free(&vs)?;
            let text = match &cert {
                FreenessCertificate::Free => "free\n".to_string(),
                FreenessCertificate::Dependent { witness } => {
                    let w: Vec<String> = witness.iter().map(|x| x.to_string()).collect();
                    format!("dependent  ({})\n", w.join(", "))
                }
            };
            Rendered { json: json!(cert), text }
        }
        BasisCommand::Extend { free, ambient } => {
            let out = extend_to_basis(&from_json::<Vec<FinSuppVec>>(free)?, &from_json::<Vec<FinSuppVec>>(ambient)?)?;
            Rendered { text: vectors_text(&out), json: json!(out) }
        }
        BasisCommand::Complement { subspace, space } => {
            let out = complement(&from_json::<Vec<FinSuppVec>>(subspace)?, &from_json::<Vec<FinSuppVec>>(space)?)?;
            Rendered { text: vectors_text(&out), json: json!(out) }
        }
        BasisCommand::Rank { vectors } => {
            let r = rank(&from_json::<Vec<FinSuppVec>>(vectors)?)?;
            Rendered { json: json!(r), text: r.to_string() }
        }
    })
}

fn card_command(cmd: &CardCommand) -> Result<Rendered> {
    Ok(match cmd {
        CardCommand::Max { a, b } => card_json(cardinals::card_max(card(a)?, card(b)?)),
        CardCommand::Succ { a } => card_json(cardinals::card_succ(card(a)?)?),
        CardCommand::Pow { base, exponent } => card_json(cardinals::card_pow(card(base)?, card(exponent)?)?),
        CardCommand::OfSpace { dim, field_card } => card_json(cardinals::card_of_space(card(dim)?, card(field_card)?)?),
        CardCommand::DimDual { dim, field_card } => card_json(cardinals::dim_of_dual(card(dim)?, card(field_card)?)?),
        CardCommand::Table => {
            let rows = cardinals::example_table()?;
            let width = rows.iter().map(|r| r.space.chars().count()).max().unwrap_or(0);
            let mut text = format!("{:<width$}  {:<8}  card\n", "space", "dim");
            for r in &rows {
                let _ = writeln!(text, "{:<width$}  {:<8}  {}", r.space, r.dim.to_string(), r.card);
            }
            Rendered { json: json!(rows), text }
        }
    })
}
