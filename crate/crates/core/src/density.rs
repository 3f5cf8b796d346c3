//! Primitive-root density surveys mod-star, over primes and over Sophie
//! Germain semiprimes, with an append-only CSV checkpoint.

use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{factorize, is_perfect_square, is_prime, PrimeSieve, DEFAULT_SIEVE_BOUND};
use crate::error::{Error, Result};
use crate::modstar::order_star_with;

/// Largest limit accepted by the Sophie Germain survey.
pub const SG_LIMIT_BOUND: u64 = 10_000_000;

/// Subjects evaluated between two checkpoint flushes.
pub const CHECKPOINT_BATCH: usize = 4096;

const CHECKPOINT_MAGIC: &str = "# modstar survey checkpoint v1";
const CSV_HEADER: &str = "subject,group_order,element_order,is_pr";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SurveyKind {
    Prime,
    Sg,
}

impl fmt::Display for SurveyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SurveyKind::Prime => "prime",
            SurveyKind::Sg => "sg",
        })
    }
}

/// A prime `p`, or a Sophie Germain pair `(p1, 2 p1 + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Subject {
    Prime(u64),
    Pair(u64, u64),
}

impl Subject {
    /// The modulus the base is tested against.
    pub fn modulus(&self) -> u64 {
        match *self {
            Subject::Prime(p) => p,
            Subject::Pair(p1, p2) => p1 * p2,
        }
    }
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subject::Prime(p) => write!(f, "{p}"),
            Subject::Pair(p1, p2) => write!(f, "{p1}:{p2}"),
        }
    }
}

impl std::str::FromStr for Subject {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let num = |t: &str| {
            t.parse::<u64>()
                .map_err(|e| format!("bad subject {s:?}: {e}"))
        };
        match s.split_once(':') {
            Some((a, b)) => Ok(Subject::Pair(num(a)?, num(b)?)),
            None => Ok(Subject::Prime(num(s)?)),
        }
    }
}

impl Serialize for Subject {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SurveyRecord {
    pub subject: Subject,
    pub base: u64,
    pub group_order: u64,
    pub element_order: u64,
    pub is_primitive_root: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckpointInfo {
    pub path: PathBuf,
    /// Rows that were already on disk when the run started.
    #[serde(skip)]
    pub resumed_rows: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurveySummary {
    pub kind: SurveyKind,
    pub base: u64,
    pub limit: u64,
    pub include_degenerate: bool,
    pub subjects_counted: u64,
    pub hits: u64,
    /// `hits/subjects_counted` in lowest terms; `None` with no subjects.
    pub density_rational: Option<String>,
    pub density: Option<f64>,
    pub checkpoint: Option<CheckpointInfo>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl SurveySummary {
    fn new(config: &SurveyConfig, subjects: u64, hits: u64) -> Self {
        let (density_rational, density) = if subjects == 0 {
            (None, None)
        } else {
            let g = hits.gcd(&subjects);
            (
                Some(format!("{}/{}", hits / g, subjects / g)),
                Some(hits as f64 / subjects as f64),
            )
        };
        SurveySummary {
            kind: config.kind,
            base: config.base,
            limit: config.limit,
            include_degenerate: config.include_degenerate,
            subjects_counted: subjects,
            hits,
            density_rational,
            density,
            checkpoint: None,
            elapsed: Duration::ZERO,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurveyConfig {
    pub kind: SurveyKind,
    pub base: u64,
    pub limit: u64,
    /// Number of contiguous sub-ranges evaluated in parallel; at least 1.
    pub partitions: usize,
    pub checkpoint: Option<PathBuf>,
    pub resume: bool,
    /// Keep the pair `(3, 7)` in Sophie Germain surveys.
    pub include_degenerate: bool,
}

impl SurveyConfig {
    pub fn new(kind: SurveyKind, base: u64, limit: u64) -> Self {
        SurveyConfig {
            kind,
            base,
            limit,
            partitions: rayon::current_num_threads().max(1),
            checkpoint: None,
            resume: false,
            include_degenerate: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.partitions == 0 {
            return Err(Error::OutOfRange("partition count must be positive".into()));
        }
        match self.kind {
            SurveyKind::Prime => {
                if self.base < 2 {
                    return Err(Error::InvalidBase(self.base, "base must be at least 2"));
                }
                if is_perfect_square(self.base) {
                    return Err(Error::InvalidBase(self.base, "base is a perfect square"));
                }
                if self.limit > DEFAULT_SIEVE_BOUND {
                    return Err(Error::LimitExceeded {
                        limit: self.limit,
                        bound: DEFAULT_SIEVE_BOUND,
                    });
                }
            }
            SurveyKind::Sg => {
                if !is_prime(self.base) {
                    return Err(Error::InvalidBase(self.base, "base must be prime"));
                }
                if self.limit > SG_LIMIT_BOUND {
                    return Err(Error::LimitExceeded {
                        limit: self.limit,
                        bound: SG_LIMIT_BOUND,
                    });
                }
            }
        }
        Ok(())
    }

    fn header_line(&self) -> String {
        format!(
            "# kind={} base={} limit={} include_degenerate={}",
            self.kind, self.base, self.limit, self.include_degenerate
        )
    }
}

/// Sophie Germain pairs `(p1, 2 p1 + 1)` with `p1 <= x`, found by primality
/// of both members. Without `include_degenerate` only pairs with `p1 >= 5`
/// are produced, which are exactly those of the form `(6k - 1, 12k - 1)`.
pub fn sophie_germain_pairs(x: u64, include_degenerate: bool) -> Result<Vec<(u64, u64)>> {
    if x < 2 {
        return Ok(Vec::new());
    }
    let sieve = PrimeSieve::with_bound(2 * x + 1, 2 * SG_LIMIT_BOUND + 1)?;
    let lo = if include_degenerate { 2 } else { 5 };
    Ok(sieve
        .iter()
        .take_while(|&p| p <= x)
        .filter(|&p| p >= lo && sieve.is_prime(2 * p + 1))
        .map(|p| (p, 2 * p + 1))
        .collect())
}

/// Subjects in survey order. Primes dividing the base, pairs whose product
/// shares a factor with the base, and pairs whose product is not a cyclic
/// semiprime (only `(2, 5)`) are left out.
pub fn survey_subjects(config: &SurveyConfig) -> Result<Vec<Subject>> {
    config.validate()?;
    match config.kind {
        SurveyKind::Prime => {
            if config.limit < 3 {
                return Ok(Vec::new());
            }
            let sieve = PrimeSieve::with_bound(config.limit, DEFAULT_SIEVE_BOUND)?;
            Ok(sieve
                .iter()
                .filter(|&p| p > 2 && config.base % p != 0)
                .map(Subject::Prime)
                .collect())
        }
        SurveyKind::Sg => Ok(
            sophie_germain_pairs(config.limit, config.include_degenerate)?
                .into_iter()
                .filter(|&(p1, p2)| p1 > 2 && config.base != p1 && config.base != p2)
                .map(|(p1, p2)| Subject::Pair(p1, p2))
                .collect(),
        ),
    }
}

/// Order of the base in `G*` of the subject's modulus.
pub fn evaluate(subject: Subject, base: u64) -> SurveyRecord {
    let (group_order, element_order) = match subject {
        Subject::Prime(p) => {
            let m = (p - 1) / 2;
            (m, order_star_with(base % p, p, m, &factorize(m)))
        }
        Subject::Pair(p1, p2) => {
            // cyclic semiprime: exponent lambda = phi / 2 = ((p1 - 1) / 2)(p2 - 1)
            let n = p1 * p2;
            let (h, k) = ((p1 - 1) / 2, p2 - 1);
            let mut pairs = factorize(h).pairs().to_vec();
            pairs.extend_from_slice(factorize(k).pairs());
            let f = crate::arith::Factorization::from_pairs(pairs);
            let m = h * k;
            (m, order_star_with(base % n, n, m, &f))
        }
    };
    SurveyRecord {
        subject,
        base,
        group_order,
        element_order,
        is_primitive_root: element_order == group_order,
    }
}

fn evaluate_parallel(subjects: &[Subject], base: u64, partitions: usize) -> Vec<SurveyRecord> {
    if subjects.is_empty() {
        return Vec::new();
    }
    let chunk = subjects.len().div_ceil(partitions);
    subjects
        .par_chunks(chunk)
        .map(|part| part.iter().map(|&s| evaluate(s, base)).collect::<Vec<_>>())
        .collect::<Vec<_>>()
        .concat()
}

/// Fraction of odd primes `p <= x`, `p` not dividing `a`, for which `a`
/// generates `G*_p`.
pub fn artin_density_star(a: u64, x: u64) -> Result<SurveySummary> {
    run_survey(&SurveyConfig::new(SurveyKind::Prime, a, x))
}

/// Fraction of Sophie Germain pairs `p1 <= x` for which the prime `b` generates
/// `G*` of `p1 p2`.
pub fn sg_density_star(b: u64, x: u64) -> Result<SurveySummary> {
    run_survey(&SurveyConfig::new(SurveyKind::Sg, b, x))
}

fn sg_integrand(u: f64) -> f64 {
    // t = e^u, dt = t du
    let t = u.exp();
    t / (u * (2.0 * t + 1.0).ln())
}

/// Composite Simpson in `u = ln t` with the given even number of panels.
pub fn asymptotic_sg_integral_with_panels(x: f64, panels: usize) -> f64 {
    if x <= 2.0 {
        return 0.0;
    }
    let panels = panels.max(2) + panels % 2;
    let (a, b) = (2f64.ln(), x.ln());
    let h = (b - a) / panels as f64;
    let inner: f64 = (1..panels)
        .map(|i| {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            w * sg_integrand(a + h * i as f64)
        })
        .sum();
    (sg_integrand(a) + sg_integrand(b) + inner) * h / 3.0
}

/// `int_2^x dt / (ln t ln(2t + 1))`, doubling the panel count until successive
/// values agree to `1e-10` relative.
pub fn asymptotic_sg_integral(x: f64) -> f64 {
    if x <= 2.0 {
        return 0.0;
    }
    let mut panels = 64;
    let mut prev = asymptotic_sg_integral_with_panels(x, panels);
    while panels < 1 << 24 {
        panels *= 2;
        let next = asymptotic_sg_integral_with_panels(x, panels);
        if (next - prev).abs() <= 1e-10 * next.abs() {
            return next;
        }
        prev = next;
    }
    prev
}

fn corrupt(path: &Path, row: usize, reason: impl Into<String>) -> Error {
    Error::CheckpointCorrupt {
        path: path.to_path_buf(),
        row,
        reason: reason.into(),
    }
}

/// Reads an existing checkpoint, cutting off a torn final line. Returns the
/// records already written and whether the summary trailer is present.
fn load_checkpoint(
    path: &Path,
    config: &SurveyConfig,
    subjects: &[Subject],
) -> Result<(Vec<SurveyRecord>, bool)> {
    let mut text = String::new();
    File::open(path)?.read_to_string(&mut text)?;
    let complete = text.rfind('\n').map_or(0, |i| i + 1);
    if complete < text.len() {
        OpenOptions::new()
            .write(true)
            .open(path)?
            .set_len(complete as u64)?;
        text.truncate(complete);
    }
    let mut lines = text.lines();
    if lines.next() != Some(CHECKPOINT_MAGIC) {
        return Err(corrupt(path, 0, "missing checkpoint header"));
    }
    if lines.next() != Some(config.header_line().as_str()) {
        return Err(corrupt(
            path,
            0,
            "checkpoint was written for a different survey",
        ));
    }
    if lines.next() != Some(CSV_HEADER) {
        return Err(corrupt(path, 0, "missing column header"));
    }
    let mut records = Vec::new();
    let mut finished = false;
    for (i, line) in lines.enumerate() {
        let row = i + 1;
        if finished {
            return Err(corrupt(path, row, "data after the summary row"));
        }
        if let Some(rest) = line.strip_prefix("# summary ") {
            let want = summary_trailer(subjects.len() as u64, count_hits(&records));
            if line != want {
                return Err(corrupt(path, row, format!("summary mismatch: {rest}")));
            }
            if records.len() != subjects.len() {
                return Err(corrupt(path, row, "summary before all rows"));
            }
            finished = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let [subject, group, order, pr] = fields[..] else {
            return Err(corrupt(
                path,
                row,
                format!("expected 4 fields, got {}", fields.len()),
            ));
        };
        let subject: Subject = subject.parse().map_err(|e: String| corrupt(path, row, e))?;
        let num = |s: &str| {
            s.parse::<u64>()
                .map_err(|e| corrupt(path, row, format!("bad number {s:?}: {e}")))
        };
        let (group_order, element_order) = (num(group)?, num(order)?);
        let is_primitive_root = match pr {
            "1" => true,
            "0" => false,
            _ => return Err(corrupt(path, row, format!("bad is_pr flag {pr:?}"))),
        };
        let expected = subjects.get(records.len()).copied();
        if expected != Some(subject) {
            return Err(corrupt(path, row, format!("unexpected subject {subject}")));
        }
        let m = match subject {
            Subject::Prime(p) => (p - 1) / 2,
            Subject::Pair(p1, p2) => (p1 - 1) / 2 * (p2 - 1),
        };
        if group_order != m
            || element_order == 0
            || group_order % element_order != 0
            || is_primitive_root != (element_order == group_order)
        {
            return Err(corrupt(path, row, "inconsistent orders"));
        }
        records.push(SurveyRecord {
            subject,
            base: config.base,
            group_order,
            element_order,
            is_primitive_root,
        });
    }
    Ok((records, finished))
}

fn count_hits(records: &[SurveyRecord]) -> u64 {
    records.iter().filter(|r| r.is_primitive_root).count() as u64
}

fn summary_trailer(subjects: u64, hits: u64) -> String {
    format!("# summary subjects={subjects} hits={hits}")
}

fn write_rows(w: &mut impl Write, records: &[SurveyRecord]) -> std::io::Result<()> {
    for r in records {
        writeln!(
            w,
            "{},{},{},{}",
            r.subject,
            r.group_order,
            r.element_order,
            u8::from(r.is_primitive_root)
        )?;
    }
    Ok(())
}

/// Runs a survey, optionally persisting every record to a checkpoint file.
///
/// Work is split into `partitions` contiguous sub-ranges evaluated in
/// parallel; records are merged in subject order, so the result does not
/// depend on the partition count. With a checkpoint, rows are appended in
/// batches of [`CHECKPOINT_BATCH`] and synced after each batch. `resume`
/// continues from an existing file, dropping a torn last line.
pub fn run_survey(config: &SurveyConfig) -> Result<SurveySummary> {
    let start = Instant::now();
    let subjects = survey_subjects(config)?;
    let Some(path) = config.checkpoint.as_deref() else {
        let hits = subjects
            .par_chunks(subjects.len().div_ceil(config.partitions).max(1))
            .map(|part| {
                part.iter()
                    .filter(|&&s| evaluate(s, config.base).is_primitive_root)
                    .count() as u64
            })
            .sum();
        let mut summary = SurveySummary::new(config, subjects.len() as u64, hits);
        summary.elapsed = start.elapsed();
        return Ok(summary);
    };

    let exists = path.exists();
    if exists && !config.resume {
        return Err(Error::CheckpointExists(path.to_path_buf()));
    }
    let (mut records, finished) = if exists {
        load_checkpoint(path, config, &subjects)?
    } else {
        (Vec::new(), false)
    };
    let resumed_rows = records.len();

    if !finished {
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        let mut w = BufWriter::new(file);
        if !exists || std::fs::metadata(path)?.len() == 0 {
            writeln!(w, "{CHECKPOINT_MAGIC}")?;
            writeln!(w, "{}", config.header_line())?;
            writeln!(w, "{CSV_HEADER}")?;
        }
        for batch in subjects[records.len()..].chunks(CHECKPOINT_BATCH) {
            let done = evaluate_parallel(batch, config.base, config.partitions);
            write_rows(&mut w, &done)?;
            w.flush()?;
            w.get_ref().sync_data()?;
            records.extend(done);
        }
        writeln!(
            w,
            "{}",
            summary_trailer(records.len() as u64, count_hits(&records))
        )?;
        w.flush()?;
        w.get_ref().sync_data()?;
    }

    let mut summary = SurveySummary::new(config, records.len() as u64, count_hits(&records));
    summary.checkpoint = Some(CheckpointInfo {
        path: path.to_path_buf(),
        resumed_rows,
    });
    summary.elapsed = start.elapsed();
    Ok(summary)
}
