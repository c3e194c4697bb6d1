//! Serialisable reports and their JSON / CSV encodings.
//!
//! Floats are written with 17 significant digits in both encodings so every
//! `f64` survives a round trip unchanged.

use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

/// One threshold of a bound comparison, optionally with a Monte Carlo verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailRow {
    pub eps: f64,
    pub bound_rank_p: f64,
    pub bound_classic: f64,
    pub ratio: f64,
    pub empirical: Option<f64>,
    pub ci_slack: Option<f64>,
    pub pass: Option<bool>,
}

impl TailRow {
    pub fn bounds(eps: f64, bound_rank_p: f64, bound_classic: f64) -> Self {
        Self {
            eps,
            bound_rank_p,
            bound_classic,
            ratio: bound_rank_p / bound_classic,
            empirical: None,
            ci_slack: None,
            pass: None,
        }
    }

    /// Attach an empirical exceedance frequency and its slack; the row passes
    /// when `empirical ≤ bound_rank_p + ci_slack`.
    pub fn with_empirical(mut self, frequency: f64, ci_slack: f64) -> Self {
        self.empirical = Some(frequency);
        self.ci_slack = Some(ci_slack);
        self.pass = Some(frequency <= self.bound_rank_p + ci_slack);
        self
    }
}

/// How the starting-value norm bound `d0` was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum D0Provenance {
    /// Derived in closed form from the start distribution.
    Exact,
    /// Supplied by the caller and at least the closed-form value.
    Declared,
    /// Estimated from a pilot sample, with a safety factor.
    Empirical,
}

/// Bound comparison or validation report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailReport {
    pub version: String,
    pub config: serde_json::Value,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub schedule: Vec<f64>,
    pub d0: f64,
    pub d0_provenance: D0Provenance,
    pub gamma_r: f64,
    pub combined_norm: f64,
    pub epsilon_p: Option<f64>,
    pub rows: Vec<TailRow>,
    pub seed: Option<u64>,
    pub n_paths: Option<usize>,
    pub delta: Option<f64>,
    pub duration_s: f64,
}

impl TailReport {
    /// True when every row that carries a verdict passed.
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass.unwrap_or(true))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("eps,bound_rank_p,bound_classic,ratio,empirical,ci_slack,pass\n");
        for row in &self.rows {
            let fields = [
                fmt_f64(row.eps),
                fmt_f64(row.bound_rank_p),
                fmt_f64(row.bound_classic),
                fmt_f64(row.ratio),
                row.empirical.map(fmt_f64).unwrap_or_default(),
                row.ci_slack.map(fmt_f64).unwrap_or_default(),
                row.pass.map(|p| p.to_string()).unwrap_or_default(),
            ];
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }
}

/// `f64` with 17 significant digits in scientific notation.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        // NaN and infinities are not representable in JSON; CSV mirrors JSON's null
        String::new()
    }
}

/// Pretty JSON with every float at 17 significant digits.
struct Digits17(PrettyFormatter<'static>);

impl Formatter for Digits17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_array(writer)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object(writer)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object_value(writer)
    }
}

/// Serialise `value` as pretty JSON with 17-digit floats and a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Digits17(PrettyFormatter::new()));
    value
        .serialize(&mut ser)
        .expect("report types serialise infallibly");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}
