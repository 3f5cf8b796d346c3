//! Command line front end. Results go to stdout, diagnostics to stderr.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::chordpoly::{
    self, chord_multi_product, gauss_sum_check, representative_set, ChordIndex, Numbering,
};
use crate::density::{self, SurveyConfig, SurveyKind, SurveySummary};
use crate::error::{Error, Result};
use crate::modstar::{self, canonical_repr};
use crate::poly::IntPolynomial;
use crate::quadratic;
use crate::sequences::{SchickSequence, StartIndex};

/// Version tag carried by every JSON document as `"schema"`.
pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable naming the default checkpoint directory.
pub const CHECKPOINT_DIR_ENV: &str = "MODSTAR_CHECKPOINT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "modstar",
    version,
    about = "Arithmetic mod-star: groups, roots, densities, chord polynomials"
)]
pub struct Cli {
    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Timing and progress lines on stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StartArg {
    Zero,
    One,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LevelArg {
    Auto,
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolyKind {
    #[value(name = "S")]
    S,
    #[value(name = "P")]
    P,
    #[value(name = "psi")]
    Psi,
    #[value(name = "phi")]
    Phi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NumberingArg {
    Odd,
    Even,
    Mixed,
}

impl From<NumberingArg> for Numbering {
    fn from(a: NumberingArg) -> Self {
        match a {
            NumberingArg::Odd => Numbering::Odd,
            NumberingArg::Even => Numbering::Even,
            NumberingArg::Mixed => Numbering::Mixed,
        }
    }
}

#[derive(Debug, Args)]
pub struct SurveyArgs {
    #[arg(long, default_value_t = 2)]
    pub base: u64,
    #[arg(long)]
    pub limit: u64,
    /// Parallel sub-ranges; defaults to the worker thread count.
    #[arg(long)]
    pub partitions: Option<usize>,
    /// Checkpoint CSV; defaults to a file in $MODSTAR_CHECKPOINT_DIR when set.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Continue an existing checkpoint.
    #[arg(long)]
    pub resume: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Structure of the group G*_n.
    Group {
        #[arg(long)]
        n: u64,
    },
    /// Schick sequences and their generalization to other bases.
    Seq {
        #[arg(long)]
        n: u64,
        /// Number of terms; one full period by default.
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, default_value_t = 2)]
        g: u64,
        #[arg(long, value_enum, default_value_t = StartArg::Zero)]
        start: StartArg,
    },
    /// Closed-form square root mod-star.
    Sqrt {
        #[arg(long)]
        n: u64,
        #[arg(long, allow_negative_numbers = true)]
        b: i64,
        #[arg(long, value_enum, default_value_t = LevelArg::Auto)]
        level: LevelArg,
    },
    /// Density of primes for which the base generates G*_p.
    Density(SurveyArgs),
    /// Density over Sophie Germain semiprimes p1 (2 p1 + 1).
    SgDensity {
        #[command(flatten)]
        survey: SurveyArgs,
        /// Also count the pair (3, 7).
        #[arg(long)]
        include_degenerate: bool,
    },
    /// Chord polynomials S_k, P_m, Psi_n and cyclotomic Phi_n.
    Poly {
        #[arg(long, value_enum)]
        kind: PolyKind,
        /// Index for S and P.
        #[arg(long, visible_alias = "k")]
        m: Option<usize>,
        /// Modulus for psi and phi.
        #[arg(long)]
        n: Option<u64>,
    },
    /// Chord values, products and the chord sum for odd n.
    Chords {
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = NumberingArg::Odd)]
        numbering: NumberingArg,
        /// Comma-separated chord indices to multiply.
        #[arg(long, value_delimiter = ',')]
        product: Vec<u64>,
    },
    /// SVG chord diagram.
    Diagram {
        #[arg(long)]
        n: u64,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parses `argv` (including the program name), runs the command and returns
/// the process exit code.
pub fn dispatch<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let start = Instant::now();
    let result = run(&cli, out, err);
    if cli.verbose {
        let _ = writeln!(err, "elapsed: {:.3} s", start.elapsed().as_secs_f64());
    }
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.category().exit_code()
        }
    }
}

fn with_schema(kind: &str, value: impl Serialize) -> Result<Value> {
    let mut v = serde_json::to_value(value)?;
    if let Value::Object(map) = &mut v {
        map.insert(
            "schema".into(),
            json!(format!("modstar.{kind}/{SCHEMA_VERSION}")),
        );
    }
    Ok(v)
}

fn emit_json(out: &mut dyn Write, v: &Value) -> Result<()> {
    serde_json::to_writer(&mut *out, v)?;
    writeln!(out)?;
    Ok(())
}

fn csv_writer(out: &mut dyn Write) -> csv::Writer<&mut dyn Write> {
    csv::Writer::from_writer(out)
}

pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Group { n } => group(*n, cli.format.unwrap_or(Format::Plain), out),
        Command::Seq { n, count, g, start } => {
            let start = match start {
                StartArg::Zero => StartIndex::Zero,
                StartArg::One => StartIndex::One,
            };
            seq(
                *n,
                *count,
                *g,
                start,
                cli.format.unwrap_or(Format::Csv),
                out,
            )
        }
        Command::Sqrt { n, b, level } => {
            let level = match level {
                LevelArg::Auto => None,
                LevelArg::One => Some(1),
                LevelArg::Two => Some(2),
                LevelArg::Three => Some(3),
            };
            sqrt(*n, *b, level, cli.format.unwrap_or(Format::Json), out)
        }
        Command::Density(args) => {
            let config = survey_config(SurveyKind::Prime, args, false)?;
            survey(&config, cli, out, err)
        }
        Command::SgDensity {
            survey: args,
            include_degenerate,
        } => {
            let config = survey_config(SurveyKind::Sg, args, *include_degenerate)?;
            survey(&config, cli, out, err)
        }
        Command::Poly { kind, m, n } => {
            poly(*kind, *m, *n, cli.format.unwrap_or(Format::Json), out)
        }
        Command::Chords {
            n,
            numbering,
            product,
        } => chords(
            *n,
            (*numbering).into(),
            product,
            cli.format.unwrap_or(Format::Plain),
            out,
        ),
        Command::Diagram { n, out: path } => match path {
            Some(p) => chordpoly::emit_chord_diagram(*n, p),
            None => {
                out.write_all(chordpoly::render_chord_diagram(*n)?.as_bytes())?;
                Ok(())
            }
        },
    }
}

fn group(n: u64, format: Format, out: &mut dyn Write) -> Result<()> {
    let summary = modstar::classify(n)?;
    let elements: Vec<u64> = modstar::group_elements(n)?
        .iter()
        .map(|e| e.repr())
        .collect();
    match format {
        Format::Json => {
            let mut v = with_schema("group", &summary)?;
            v["elements"] = json!(elements);
            emit_json(out, &v)
        }
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["element", "order"])?;
            for e in modstar::group_elements(n)? {
                w.write_record([e.repr().to_string(), e.order().to_string()])?;
            }
            w.flush()?;
            Ok(())
        }
        Format::Plain => {
            writeln!(out, "n = {}", summary.n)?;
            writeln!(out, "order = {}", summary.order)?;
            writeln!(out, "lambda = {}", summary.lambda)?;
            writeln!(out, "j = {}", summary.j)?;
            writeln!(out, "cyclic = {}", summary.cyclic)?;
            writeln!(out, "cyclic_semiprime = {}", summary.cyclic_semiprime)?;
            writeln!(
                out,
                "primitive_root_count = {}",
                summary.primitive_root_count
            )?;
            if let Some(g) = summary.smallest_primitive_root {
                writeln!(out, "smallest_primitive_root = {g}")?;
            }
            let list: Vec<String> = elements.iter().map(ToString::to_string).collect();
            writeln!(out, "elements = {{{}}}", list.join(", "))?;
            Ok(())
        }
    }
}

fn seq(
    n: u64,
    count: Option<usize>,
    g: u64,
    start: StartIndex,
    format: Format,
    out: &mut dyn Write,
) -> Result<()> {
    let count = match count {
        Some(c) => c,
        None => canonical_repr(g as i128, n)?.order() as usize,
    };
    let s = SchickSequence::generalized(n, g, count, start)?;
    match format {
        Format::Json => emit_json(out, &with_schema("seq", &s)?),
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["index", "signed", "absolute"])?;
            for (i, a) in s.absolute_terms.iter().enumerate() {
                let signed = s
                    .signed_terms
                    .as_ref()
                    .map_or(String::new(), |t| t[i].to_string());
                w.write_record([
                    (i as u64 + start.exponent()).to_string(),
                    signed,
                    a.to_string(),
                ])?;
            }
            w.flush()?;
            Ok(())
        }
        Format::Plain => {
            let join = |v: Vec<String>| v.join(" ");
            if let Some(t) = &s.signed_terms {
                writeln!(
                    out,
                    "signed: {}",
                    join(t.iter().map(ToString::to_string).collect())
                )?;
            }
            writeln!(
                out,
                "absolute: {}",
                join(s.absolute_terms.iter().map(ToString::to_string).collect())
            )?;
            writeln!(out, "period: {}", s.period)?;
            Ok(())
        }
    }
}

fn sqrt(n: u64, b: i64, level: Option<u8>, format: Format, out: &mut dyn Write) -> Result<()> {
    let b = canonical_repr(b as i128, n)?;
    let r = quadratic::sqrt_star(b, level)?;
    if !r.verified {
        return Err(Error::Consistency(format!(
            "closed-form root {} of {b} fails to square back",
            r.x
        )));
    }
    match format {
        Format::Json => {
            let mut v = with_schema("sqrt", r)?;
            v["n"] = json!(n);
            v["b"] = json!(b.repr());
            emit_json(out, &v)
        }
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["n", "b", "x", "level", "verified"])?;
            w.write_record([
                n.to_string(),
                b.repr().to_string(),
                r.x.to_string(),
                r.level.to_string(),
                r.verified.to_string(),
            ])?;
            w.flush()?;
            Ok(())
        }
        Format::Plain => {
            writeln!(out, "{} (level {})", r.x, r.level)?;
            Ok(())
        }
    }
}

fn survey_config(
    kind: SurveyKind,
    args: &SurveyArgs,
    include_degenerate: bool,
) -> Result<SurveyConfig> {
    let mut config = SurveyConfig::new(kind, args.base, args.limit);
    if let Some(p) = args.partitions {
        config.partitions = p;
    }
    config.resume = args.resume;
    config.include_degenerate = include_degenerate;
    config.checkpoint = match &args.checkpoint {
        Some(p) => Some(p.clone()),
        None => std::env::var_os(CHECKPOINT_DIR_ENV).map(|dir| {
            PathBuf::from(dir).join(format!("{kind}-b{}-x{}.csv", args.base, args.limit))
        }),
    };
    Ok(config)
}

fn survey(
    config: &SurveyConfig,
    cli: &Cli,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<()> {
    if cli.verbose {
        writeln!(
            err,
            "survey kind={} base={} limit={} partitions={}",
            config.kind, config.base, config.limit, config.partitions
        )?;
    }
    let s: SurveySummary = density::run_survey(config)?;
    if cli.verbose {
        if let Some(c) = &s.checkpoint {
            writeln!(
                err,
                "checkpoint {}: {} rows resumed",
                c.path.display(),
                c.resumed_rows
            )?;
        }
        writeln!(err, "survey time: {:.3} s", s.elapsed.as_secs_f64())?;
    }
    match cli.format.unwrap_or(Format::Json) {
        Format::Json => emit_json(out, &with_schema("survey", &s)?),
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["kind", "base", "limit", "subjects", "hits", "density"])?;
            w.write_record([
                s.kind.to_string(),
                s.base.to_string(),
                s.limit.to_string(),
                s.subjects_counted.to_string(),
                s.hits.to_string(),
                s.density.map_or(String::new(), |d| d.to_string()),
            ])?;
            w.flush()?;
            Ok(())
        }
        Format::Plain => {
            writeln!(out, "subjects = {}", s.subjects_counted)?;
            writeln!(out, "hits = {}", s.hits)?;
            match (&s.density_rational, s.density) {
                (Some(r), Some(d)) => writeln!(out, "density = {r} = {d:.6}")?,
                _ => writeln!(out, "density = undefined")?,
            }
            Ok(())
        }
    }
}

fn poly(
    kind: PolyKind,
    m: Option<usize>,
    n: Option<u64>,
    format: Format,
    out: &mut dyn Write,
) -> Result<()> {
    let need_m = || m.ok_or_else(|| Error::OutOfRange(format!("--m is required for {kind:?}")));
    let need_n = || n.ok_or_else(|| Error::OutOfRange(format!("--n is required for {kind:?}")));
    let (p, var): (IntPolynomial, &str) = match kind {
        PolyKind::S => (chordpoly::s_poly(need_m()?), "s"),
        PolyKind::P => (chordpoly::p_poly(need_m()?), "s"),
        PolyKind::Psi => (chordpoly::psi_poly(need_n()?)?, "s"),
        PolyKind::Phi => {
            let n = need_n()?;
            if n == 0 {
                return Err(Error::OutOfRange(
                    "cyclotomic index must be positive".into(),
                ));
            }
            (chordpoly::cyclotomic_poly(n), "x")
        }
    };
    match format {
        Format::Json => writeln!(out, "{}", p.to_json_array())?,
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["degree", "coefficient"])?;
            for (k, c) in p.coeffs().iter().enumerate() {
                w.write_record([k.to_string(), c.to_string()])?;
            }
            w.flush()?;
        }
        Format::Plain => writeln!(out, "{}", p.display_in(var))?,
    }
    Ok(())
}

#[derive(Serialize)]
struct ChordRow {
    j: u64,
    value: f64,
}

fn chords(
    n: u64,
    numbering: Numbering,
    product: &[u64],
    format: Format,
    out: &mut dyn Write,
) -> Result<()> {
    let rows: Vec<ChordRow> = representative_set(n, numbering)?
        .into_iter()
        .map(|c| ChordRow {
            j: c.j(),
            value: c.value(),
        })
        .collect();
    let gauss = gauss_sum_check(n)?;
    let product = if product.is_empty() {
        None
    } else {
        let factors = product
            .iter()
            .map(|&j| ChordIndex::reduce(n, j as i128, numbering))
            .collect::<Result<Vec<_>>>()?;
        let terms = chord_multi_product(&factors)?;
        let lhs: f64 = factors.iter().map(|c| c.value()).product();
        let rhs: f64 = terms.iter().map(|c| c.value()).sum();
        let js = |v: &[ChordIndex]| v.iter().map(|c| c.j()).collect::<Vec<_>>();
        Some((js(&factors), js(&terms), lhs, rhs))
    };
    match format {
        Format::Json => {
            let mut v = json!({
                "n": n,
                "numbering": numbering,
                "chords": rows,
                "gauss_sum": gauss,
            });
            if let Some((factors, terms, lhs, rhs)) = &product {
                v["product"] = json!({
                    "factors": factors,
                    "terms": terms,
                    "product_value": lhs,
                    "sum_value": rhs,
                });
            }
            emit_json(out, &with_schema("chords", v)?)
        }
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["j", "value"])?;
            for r in &rows {
                w.write_record([r.j.to_string(), format!("{:.15}", r.value)])?;
            }
            w.flush()?;
            Ok(())
        }
        Format::Plain => {
            for r in &rows {
                writeln!(out, "sigma_{} = {:.15}", r.j, r.value)?;
            }
            writeln!(out, "sum = {gauss}")?;
            if let Some((_, terms, lhs, rhs)) = &product {
                let t: Vec<String> = terms.iter().map(|j| format!("sigma_{j}")).collect();
                writeln!(out, "product = {}", t.join(" + "))?;
                writeln!(out, "product value = {lhs:.15}, sum of terms = {rhs:.15}")?;
            }
            Ok(())
        }
    }
}
