//! Command-line front end. [`run`] parses arguments, writes data to `out`
//! and diagnostics to `err`, and returns the process exit status.
//!
//! Exit codes: 0 success, 1 usage error, 2 data, parse or integrity error,
//! 3 unknown metric, variant or missing metric parameter.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use calmine::ingest::{generate_synthetic, import_ics, parse_canonical, serialize_canonical, IcsMappingPolicy, SyntheticConfig};
use calmine::metrics::{evaluate, lookup, Bucket, CoreHours, MetricError, Op, ParamKind, Params, Variant};
use calmine::report::{build_report, render_csv, render_json, render_result_table, render_table, OutputFormat, ReportOptions};
use calmine::{load_dataset, validate, Dataset, EmployeeId, Interval, MeetingId, RoomId, StoreSnapshot, Timestamp};
use clap::{Args, Parser, Subcommand, ValueEnum};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_METRIC: i32 = 3;

pub const PRIVACY_NOTICE: &str =
    "notice: this output describes individual employees; use it only with their agreement";

#[derive(Parser, Debug)]
#[command(name = "calmine", version, about = "Meeting metrics over calendar data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a dataset against the integrity rules.
    Validate {
        file: PathBuf,
        #[arg(long, value_enum)]
        input_format: Option<InputFormat>,
        #[arg(long, default_value = "table")]
        format: Format,
    },
    /// Convert a calendar file into the canonical format.
    Ingest {
        #[arg(long, value_enum, default_value = "ics")]
        from: InputFormat,
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Minutes added to UTC times.
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        utc_offset: i32,
        /// Days after the first occurrence beyond which recurrences are dropped.
        #[arg(long, default_value_t = 366)]
        horizon_days: u32,
        #[arg(long, default_value = "table")]
        format: Format,
    },
    /// Write a seeded synthetic dataset.
    Generate(GenerateArgs),
    /// Evaluate one metric.
    Metric {
        id: String,
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        settings: Settings,
        #[arg(long, default_value = "table")]
        format: Format,
    },
    /// Evaluate every metric over an interval.
    Report {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        interval: String,
        #[command(flatten)]
        settings: Settings,
        #[arg(long, default_value_t = 1)]
        lower_limit: u64,
        #[arg(long, default_value_t = 3)]
        upper_limit: u64,
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long, default_value = "json")]
        format: Format,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum InputFormat {
    Calm,
    Ics,
}

#[derive(Clone, Copy, Debug)]
struct Format(OutputFormat);

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.parse().map(Format)
    }
}

#[derive(Args, Debug)]
struct DataArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long, value_enum)]
    input_format: Option<InputFormat>,
}

#[derive(Args, Debug)]
struct Settings {
    /// Literal reading of the three ambiguous query definitions.
    #[arg(long)]
    paper_exact: bool,
    #[arg(long, default_value = "09:00-15:00")]
    core_hours: String,
    #[arg(long, default_value_t = 10)]
    consecutive_threshold: u32,
    #[arg(long, default_value_t = 60)]
    last_minute_threshold: u32,
}

#[derive(Args, Debug, Default)]
struct ParamArgs {
    #[arg(long)]
    variant: Option<String>,
    #[arg(long)]
    meeting: Option<String>,
    #[arg(long)]
    other_meeting: Option<String>,
    #[arg(long)]
    employee: Option<String>,
    /// Comma-separated employee ids.
    #[arg(long, value_delimiter = ',')]
    employees: Option<Vec<String>>,
    #[arg(long)]
    interval: Option<String>,
    #[arg(long)]
    at: Option<String>,
    #[arg(long)]
    room: Option<String>,
    #[arg(long)]
    bucket: Option<String>,
    #[arg(long)]
    lower_limit: Option<u64>,
    #[arg(long)]
    upper_limit: Option<u64>,
    #[arg(long)]
    limit: Option<usize>,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(long)]
    seed: u64,
    /// JSON file with a full generator config; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    employees: Option<usize>,
    #[arg(long)]
    days: Option<u32>,
    #[arg(long)]
    meetings_per_day: Option<f64>,
    #[arg(long)]
    invitees_per_meeting: Option<f64>,
    #[arg(long)]
    optional_ratio: Option<f64>,
    #[arg(long)]
    recurrence_ratio: Option<f64>,
    #[arg(long)]
    delegation_ratio: Option<f64>,
    #[arg(long)]
    rooms: Option<usize>,
    #[arg(long)]
    start_date: Option<chrono::NaiveDate>,
    /// Output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Failure {
    code: i32,
    message: String,
}

fn fail(code: i32, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

fn usage(message: impl Into<String>) -> Failure {
    fail(EXIT_USAGE, message)
}

fn metric_failure(e: MetricError) -> Failure {
    let code = match &e {
        e if e.is_request_error() => EXIT_METRIC,
        MetricError::UnknownMeeting(_) | MetricError::UnknownEmployee(_) | MetricError::UnknownRoom(_) => EXIT_DATA,
        _ => EXIT_USAGE,
    };
    fail(code, e.to_string())
}

/// Parses, executes, and reports. Never panics on bad input.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn write(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes()).map_err(|e| fail(EXIT_DATA, format!("cannot write output: {e}")))
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| fail(EXIT_DATA, format!("cannot read {}: {e}", path.display())))
}

fn input_format(path: &Path, explicit: Option<InputFormat>) -> InputFormat {
    explicit.unwrap_or_else(|| match path.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("ics") => InputFormat::Ics,
        _ => InputFormat::Calm,
    })
}

fn read_dataset(path: &Path, format: Option<InputFormat>, err: &mut dyn Write) -> Result<Dataset, Failure> {
    let text = read(path)?;
    let at = |e: calmine::ingest::ParseError| fail(EXIT_DATA, format!("{}: {e}", path.display()));
    match input_format(path, format) {
        InputFormat::Calm => parse_canonical(&text).map_err(at),
        InputFormat::Ics => {
            let (d, report) = import_ics(&text, &IcsMappingPolicy::default()).map_err(at)?;
            let _ = writeln!(err, "{}", report.summary());
            Ok(d)
        }
    }
}

fn load(args: &DataArgs, err: &mut dyn Write) -> Result<StoreSnapshot, Failure> {
    let d = read_dataset(&args.data, args.input_format, err)?;
    let snap = load_dataset(d).map_err(|e| fail(EXIT_DATA, format!("{}: {e}", args.data.display())))?;
    for w in snap.load_warnings().warnings() {
        let _ = writeln!(err, "warning: {w}");
    }
    Ok(snap)
}

fn id(kind: &str, prefix: &str, s: &str) -> Result<u32, Failure> {
    let digits = s.strip_prefix(prefix).unwrap_or(s);
    digits.parse().map_err(|_| usage(format!("invalid {kind} id {s:?}")))
}

fn parse<T: std::str::FromStr>(what: &str, s: &str) -> Result<T, Failure>
where
    T::Err: std::fmt::Display,
{
    s.parse().map_err(|e| usage(format!("invalid {what}: {e}")))
}

fn interval(s: &str) -> Result<Interval, Failure> {
    let iv: Interval = parse("interval", s)?;
    if !iv.is_valid() {
        return Err(usage(format!("invalid interval {s:?}: start is after end")));
    }
    Ok(iv)
}

fn core_hours(s: &str) -> Result<CoreHours, Failure> {
    let h: CoreHours = parse("core hours", s)?;
    if !h.is_valid() {
        return Err(usage(format!("invalid core hours {s:?}: start must precede finish")));
    }
    Ok(h)
}

fn build_params(p: &ParamArgs, s: &Settings) -> Result<Params, Failure> {
    let mut params = Params::new()
        .paper_exact(s.paper_exact)
        .core_hours(core_hours(&s.core_hours)?)
        .consecutive_threshold(s.consecutive_threshold as i64)
        .last_minute_threshold(s.last_minute_threshold as i64);
    params.variant = p.variant.clone();
    params.meeting = p.meeting.as_deref().map(|m| id("meeting", "M", m).map(MeetingId)).transpose()?;
    params.other_meeting = p.other_meeting.as_deref().map(|m| id("meeting", "M", m).map(MeetingId)).transpose()?;
    params.employee = p.employee.as_deref().map(|e| id("employee", "E", e).map(EmployeeId)).transpose()?;
    params.employees = p
        .employees
        .as_ref()
        .map(|v| v.iter().map(|e| id("employee", "E", e.trim()).map(EmployeeId)).collect::<Result<Vec<_>, _>>())
        .transpose()?;
    params.interval = p.interval.as_deref().map(interval).transpose()?;
    params.at = p.at.as_deref().map(|t| parse::<Timestamp>("timestamp", t)).transpose()?;
    params.room = p.room.as_deref().map(|r| id("room", "R", r.trim_start_matches("Room")).map(RoomId)).transpose()?;
    params.bucket = p.bucket.as_deref().map(|b| parse::<Bucket>("bucket", b)).transpose()?;
    params.lower_limit = p.lower_limit;
    params.upper_limit = p.upper_limit;
    params.limit = p.limit;
    Ok(params)
}

/// Variants whose output identifies or ranks individual employees.
pub fn is_employee_level(v: &Variant) -> bool {
    let names = |k: &ParamKind| matches!(k, ParamKind::Employee | ParamKind::Employees);
    v.required.iter().chain(v.optional).any(names) || matches!(v.op, Op::Leaderboard(_))
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Validate { file, input_format, format } => {
            let d = read_dataset(&file, input_format, err)?;
            let report = validate(&d);
            let text = match format.0 {
                OutputFormat::Json => render_json(&report),
                OutputFormat::Table => format!("{report}\n"),
                OutputFormat::Csv => {
                    let mut w = String::from("severity,table,row,rule,message\n");
                    for i in &report.issues {
                        let cells = [format!("{:?}", i.severity).to_lowercase(), i.table.to_string(), i.row.clone(), format!("{:?}", i.rule), i.message.clone()];
                        w.push_str(&cells.iter().map(|c| csv_cell(c)).collect::<Vec<_>>().join(","));
                        w.push('\n');
                    }
                    w
                }
            };
            write(out, &text)?;
            Ok(if report.is_clean() { EXIT_OK } else { EXIT_DATA })
        }
        Command::Ingest { from, file, out: target, utc_offset, horizon_days, format } => {
            let text = read(&file)?;
            let at = |e: calmine::ingest::ParseError| fail(EXIT_DATA, format!("{}: {e}", file.display()));
            let (d, summary) = match from {
                InputFormat::Calm => {
                    let d = parse_canonical(&text).map_err(at)?;
                    let n = d.meeting.len();
                    (d, serde_json::json!({ "meetings": n }))
                }
                InputFormat::Ics => {
                    let policy = IcsMappingPolicy {
                        utc_offset_minutes: utc_offset,
                        expansion_horizon_days: horizon_days as i64,
                        ..Default::default()
                    };
                    let (d, report) = import_ics(&text, &policy).map_err(at)?;
                    if !matches!(format.0, OutputFormat::Json) {
                        write(out, &format!("{}\n", report.summary()))?;
                        for s in &report.skipped {
                            write(out, &format!("skipped event {} ({}): {}\n", s.index, s.uid.as_deref().unwrap_or("no uid"), s.reason))?;
                        }
                    }
                    (d, serde_json::to_value(&report).expect("report serializes"))
                }
            };
            let snap = load_dataset(d).map_err(|e| fail(EXIT_DATA, format!("converted data is inconsistent: {e}")))?;
            std::fs::write(&target, serialize_canonical(snap.tables()))
                .map_err(|e| fail(EXIT_DATA, format!("cannot write {}: {e}", target.display())))?;
            if matches!(format.0, OutputFormat::Json) {
                write(out, &render_json(&summary))?;
            }
            Ok(EXIT_OK)
        }
        Command::Generate(g) => {
            let mut cfg = match &g.config {
                Some(path) => serde_json::from_str::<SyntheticConfig>(&read(path)?)
                    .map_err(|e| usage(format!("invalid config {}: {e}", path.display())))?,
                None => SyntheticConfig::default(),
            };
            cfg.seed = g.seed;
            macro_rules! set {
                ($($flag:ident => $field:ident),*) => { $(if let Some(v) = g.$flag { cfg.$field = v; })* };
            }
            set!(employees => employee_count, days => day_span, meetings_per_day => meetings_per_day_mean,
                 invitees_per_meeting => invitees_per_meeting_mean, optional_ratio => optional_ratio,
                 recurrence_ratio => recurrence_ratio, delegation_ratio => delegation_ratio,
                 rooms => room_count, start_date => start_date);
            let d = generate_synthetic(&cfg).map_err(|e| usage(e.to_string()))?;
            let text = serialize_canonical(&d);
            match &g.out {
                Some(path) => std::fs::write(path, text).map_err(|e| fail(EXIT_DATA, format!("cannot write {}: {e}", path.display())))?,
                None => write(out, &text)?,
            }
            Ok(EXIT_OK)
        }
        Command::Metric { id, data, params, settings, format } => {
            let params = build_params(&params, &settings)?;
            // Unknown metrics are reported before the data is touched.
            let entry = lookup(&id).ok_or_else(|| metric_failure(MetricError::UnknownMetric(id.clone())))?;
            let snap = load(&data, err)?;
            let result = evaluate(&snap, &id, &params).map_err(metric_failure)?;
            if entry.variants.iter().any(|v| v.name == result.variant && is_employee_level(v)) {
                let _ = writeln!(err, "{PRIVACY_NOTICE}");
            }
            let text = match format.0 {
                OutputFormat::Json => render_json(&result),
                OutputFormat::Csv => render_csv([&result]),
                OutputFormat::Table => render_result_table(&result),
            };
            write(out, &text)?;
            Ok(EXIT_OK)
        }
        Command::Report { data, interval: iv, settings, lower_limit, upper_limit, limit, format } => {
            let mut opts = ReportOptions::new(interval(&iv)?);
            opts.paper_exact = settings.paper_exact;
            opts.core_hours = core_hours(&settings.core_hours)?;
            opts.consecutive_threshold = settings.consecutive_threshold as i64;
            opts.last_minute_threshold = settings.last_minute_threshold as i64;
            opts.lower_limit = lower_limit;
            opts.upper_limit = upper_limit;
            opts.limit = limit;
            let snap = load(&data, err)?;
            let report = build_report(&snap, &opts).map_err(metric_failure)?;
            let _ = writeln!(err, "{PRIVACY_NOTICE}");
            let text = match format.0 {
                OutputFormat::Json => render_json(&report),
                OutputFormat::Csv => render_csv(report.sections.iter().flat_map(|s| &s.results)),
                OutputFormat::Table => render_table(&report),
            };
            write(out, &text)?;
            Ok(EXIT_OK)
        }
    }
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f1_path() -> String {
        format!("{}/../core/fixtures/f1.calm", env!("CARGO_MANIFEST_DIR"))
    }

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("calmine").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn length_of_m1() {
        let f1 = f1_path();
        let (code, out, err) = call(&["metric", "5.10", "--data", &f1, "--meeting", "1"]);
        assert_eq!((code, out.as_str()), (0, "60\n"), "{err}");
        assert!(err.is_empty(), "meeting-level metrics carry no notice");
    }

    #[test]
    fn exit_codes() {
        let f1 = f1_path();
        assert_eq!(call(&["metric", "5.99", "--data", &f1]).0, EXIT_METRIC);
        assert_eq!(call(&["metric", "5.10", "--data", &f1]).0, EXIT_METRIC);
        assert_eq!(call(&["metric", "5.10", "--data", &f1, "--meeting", "99"]).0, EXIT_DATA);
        assert_eq!(call(&["metric", "5.10", "--data", "/nonexistent.calm", "--meeting", "1"]).0, EXIT_DATA);
        assert_eq!(call(&["metric", "5.10", "--data", &f1, "--meeting", "x"]).0, EXIT_USAGE);
        assert_eq!(call(&["bogus"]).0, EXIT_USAGE);
        assert_eq!(call(&["report", "--data", &f1, "--interval", "2015-07-01..2015-06-01"]).0, EXIT_USAGE);
        assert_eq!(call(&["metric", "5.24", "--data", &f1, "--employee", "1", "--interval", "2015-06-01..2015-06-30", "--last-minute-threshold", "-5"]).0, EXIT_USAGE);
    }

    #[test]
    fn privacy_notice_for_employee_metrics() {
        let f1 = f1_path();
        let (code, out, err) = call(&["metric", "5.24", "--data", &f1, "--employee", "E4", "--interval", "2015-06-01..2015-06-30"]);
        assert_eq!(code, 0);
        assert_eq!(out, "1\n");
        assert_eq!(err.trim(), PRIVACY_NOTICE);
    }

    #[test]
    fn help_is_not_an_error() {
        let (code, out, _) = call(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("report"));
    }
}
