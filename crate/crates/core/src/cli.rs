//! The `rzlat` command line: enumeration streams, verification reports and
//! the count census.
//!
//! Exit codes: 0 success, 1 verification failure, 2 precision or resource
//! limit, 3 usage error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::moduli::{self, Model, ModelParams, DEFAULT_CEILING};
use crate::verify::{self, CensusRow, Mutant, Session, SuiteOptions};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "rzlat", version, about = "Enumerate and cross-check lattice models of unitary Rapoport-Zink spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a point set as JSON lines.
    Enumerate {
        kind: EnumKind,
        /// Use the unpruned reference enumerator.
        #[arg(long)]
        naive: bool,
        /// Restrict `dl-heart` to the heart with this index.
        #[arg(long)]
        heart: Option<usize>,
        #[command(flatten)]
        config: RunConfig,
    },
    /// Run a verification suite, or `all`.
    Verify {
        suite: String,
        #[arg(long, env = "RZLAT_SAMPLES", default_value_t = 200)]
        samples: usize,
        /// Include wall-clock seconds in the report.
        #[arg(long)]
        timing: bool,
        #[arg(long, hide = true, value_enum)]
        mutant: Option<MutantArg>,
        /// Field degrees used by the `counts` suite.
        #[arg(long, env = "RZLAT_J_RANGE", default_value = "1,2")]
        j_range: String,
        #[command(flatten)]
        config: RunConfig,
    },
    /// Write the point-count census.
    Table {
        /// Field degrees, as `a-b` or a comma list.
        #[arg(long, env = "RZLAT_J_RANGE", default_value = "1,2")]
        j_range: String,
        #[arg(long, hide = true, value_enum)]
        mutant: Option<MutantArg>,
        #[command(flatten)]
        config: RunConfig,
    },
    /// Re-check a saved counterexample against the library.
    Replay {
        file: PathBuf,
        #[command(flatten)]
        config: RunConfig,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EnumKind {
    Rz,
    Dl,
    Y,
    Hearts,
    DlHeart,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MutantArg {
    SignBug,
    UnscaledBeta,
    CountOffByOne,
}

impl From<MutantArg> for Mutant {
    fn from(m: MutantArg) -> Self {
        match m {
            MutantArg::SignBug => Mutant::SignBug,
            MutantArg::UnscaledBeta => Mutant::UnscaledBeta,
            MutantArg::CountOffByOne => Mutant::CountOffByOne,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    #[arg(long = "p", env = "RZLAT_P", default_value_t = 2)]
    pub p: u32,
    #[arg(long = "m", env = "RZLAT_M", default_value_t = 2)]
    pub m: usize,
    #[arg(long = "N", env = "RZLAT_N", default_value_t = 6)]
    pub prec: u32,
    #[arg(long = "n", env = "RZLAT_NDIM", default_value_t = 2)]
    pub n: usize,
    #[arg(long = "k", env = "RZLAT_K")]
    pub k: Option<usize>,
    #[arg(long = "j", env = "RZLAT_J", default_value_t = 1)]
    pub j: usize,
    #[arg(long, env = "RZLAT_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, env = "RZLAT_CEILING", default_value_t = DEFAULT_CEILING)]
    pub ceiling: u64,
    #[arg(long, env = "RZLAT_FORMAT", value_enum)]
    pub format: Option<Format>,
    #[arg(long = "cache-dir", env = "RZLAT_CACHE_DIR", default_value = ".rzlat-cache")]
    pub cache_dir: PathBuf,
    /// Skip the result cache.
    #[arg(long)]
    pub no_cache: bool,
    /// Output file; standard output if absent.
    #[arg(long, short = 'o')]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    fn params(&self) -> ModelParams {
        ModelParams { p: self.p, m: self.m, prec: self.prec, n: self.n, j: self.j }
    }

    fn model(&self) -> Result<Model> {
        if let Some(k) = self.k {
            if k == 0 || 2 * k > self.n {
                return Err(Error::InvalidParams(format!("k = {k} must lie in 1..={} for n = {}", self.n / 2, self.n)));
            }
        }
        Ok(Model::new(self.params())?.with_ceiling(self.ceiling))
    }

    fn require_k(&self) -> Result<usize> {
        self.k.ok_or_else(|| Error::InvalidParams("this command needs --k".into()))
    }

    fn header(&self, model: &Model, command: &str) -> Value {
        let mut h = model.header();
        let obj = h.as_object_mut().expect("header is an object");
        obj.insert("k".into(), json!(self.k));
        obj.insert("command".into(), json!(command));
        obj.insert("version".into(), json!(VERSION));
        h
    }
}

/// Parses `a-b` or `a,b,c`.
pub fn parse_j_range(s: &str) -> Result<Vec<usize>> {
    let bad = || Error::InvalidParams(format!("malformed j range {s:?}"));
    let v: Vec<usize> = if let Some((a, b)) = s.split_once('-') {
        let (a, b): (usize, usize) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        (a..=b).collect()
    } else {
        s.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?
    };
    if v.is_empty() || v.contains(&0) {
        return Err(bad());
    }
    Ok(v)
}

/// Content hash of a request.
pub fn cache_key(command: &str, payload: &Value) -> String {
    let mut h = Sha256::new();
    h.update(json!({ "command": command, "request": payload, "version": VERSION }).to_string());
    hex::encode(h.finalize())
}

fn io_err(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(io_err)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(bytes).map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

struct Outcome {
    bytes: Vec<u8>,
    passed: bool,
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return 3;
            }
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    let config = match &cli.command {
        Command::Enumerate { config, .. }
        | Command::Verify { config, .. }
        | Command::Table { config, .. }
        | Command::Replay { config, .. } => config.clone(),
    };
    let result = dispatch(&cli.command, &config, err).and_then(|o| {
        match &config.out {
            Some(path) => write_atomic(path, &o.bytes)?,
            None => out.write_all(&o.bytes).map_err(io_err)?,
        }
        Ok(o.passed)
    });
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if let Error::Consistency { counterexample, .. } = &e {
                let _ = writeln!(err, "counterexample: {counterexample}");
            }
            e.exit_code()
        }
    }
}

fn dispatch(cmd: &Command, config: &RunConfig, err: &mut dyn Write) -> Result<Outcome> {
    match cmd {
        Command::Enumerate { kind, naive, heart, .. } => {
            if config.format == Some(Format::Csv) {
                return Err(Error::InvalidParams("enumerate writes JSON lines only".into()));
            }
            let model = config.model()?;
            let name = format!("enumerate {}", kind.to_possible_value().expect("named").get_name());
            let request = json!({ "params": config.params(), "k": config.k, "naive": naive, "heart": heart,
                                  "ceiling": config.ceiling });
            cached(config, &name, &request, err, || {
                let mut lines = vec![config.header(&model, &name)];
                lines.extend(enumerate(&model, config, *kind, *naive, *heart)?);
                Ok(json_lines(&lines))
            })
            .map(|bytes| Outcome { bytes, passed: true })
        }
        Command::Verify { suite, samples, timing, mutant, j_range, .. } => {
            if config.format == Some(Format::Csv) {
                return Err(Error::InvalidParams("verify writes a JSON report only".into()));
            }
            if suite != "all" && !verify::SUITES.contains(&suite.as_str()) {
                return Err(Error::InvalidParams(format!(
                    "unknown suite {suite:?}; expected one of {} or all",
                    verify::SUITES.join(", ")
                )));
            }
            let model = config.model()?;
            let opts = SuiteOptions {
                samples: *samples,
                seed: config.seed,
                k: config.k,
                j_range: parse_j_range(j_range)?,
                mutant: mutant.map(Into::into),
            };
            let header = config.header(&model, &format!("verify {suite}"));
            let reports = Session::new(model.clone(), opts).run(suite)?;
            let passed = reports.iter().all(|r| r.passed());
            let reports: Vec<_> = reports.into_iter().map(|r| if *timing { r } else { r.without_timing() }).collect();
            for r in reports.iter().filter(|r| !r.passed()) {
                let record = json!({ "header": header, "suite": r.suite, "params": r.params,
                                     "counterexample": r.counterexample });
                if !config.no_cache {
                    let path = config
                        .cache_dir
                        .join("counterexamples")
                        .join(format!("{}.json", cache_key("counterexample", &record)));
                    write_atomic(&path, format!("{record}\n").as_bytes())?;
                    let _ = writeln!(err, "{} failed; counterexample saved to {}", r.suite, path.display());
                }
            }
            let doc = json!({ "header": header, "status": if passed { "pass" } else { "fail" }, "reports": reports });
            Ok(Outcome { bytes: format!("{doc}\n").into_bytes(), passed })
        }
        Command::Table { j_range, mutant, .. } => {
            let model = config.model()?;
            let js = parse_j_range(j_range)?;
            let format = config.format.unwrap_or(Format::Csv);
            let opts = SuiteOptions { k: config.k, j_range: js.clone(), mutant: mutant.map(Into::into), ..Default::default() };
            let request = json!({ "params": config.params(), "k": config.k, "j_range": js,
                                  "format": format!("{format:?}"), "mutant": mutant.map(|m| format!("{m:?}")),
                                  "ceiling": config.ceiling });
            let header = config.header(&model, "table");
            let bytes = cached(config, "table", &request, err, || {
                let rows = Session::new(model.clone(), opts).census()?;
                match format {
                    Format::Csv => census_csv(&header, &rows),
                    Format::Json => Ok(format!("{}\n", json!({ "header": header, "rows": rows })).into_bytes()),
                }
            })?;
            let passed = census_matches(&bytes, format);
            Ok(Outcome { bytes, passed })
        }
        Command::Replay { file, .. } => {
            let model = config.model()?;
            let text = fs::read_to_string(file).map_err(io_err)?;
            let record: Value =
                serde_json::from_str(&text).map_err(|e| Error::InvalidParams(format!("bad counterexample file: {e}")))?;
            let ce = record.get("counterexample").unwrap_or(&record);
            let holds = verify::replay(&model, ce)?;
            let doc = json!({ "check": ce.get("check"), "reproduces": !holds });
            Ok(Outcome { bytes: format!("{doc}\n").into_bytes(), passed: holds })
        }
    }
}

fn cached(
    config: &RunConfig,
    command: &str,
    request: &Value,
    err: &mut dyn Write,
    compute: impl FnOnce() -> Result<Vec<u8>>,
) -> Result<Vec<u8>> {
    if config.no_cache {
        return compute();
    }
    let path = config.cache_dir.join(format!("{}.out", cache_key(command, request)));
    if let Ok(bytes) = fs::read(&path) {
        let _ = writeln!(err, "cache hit: {}", path.display());
        return Ok(bytes);
    }
    let bytes = compute()?;
    write_atomic(&path, &bytes)?;
    Ok(bytes)
}

fn json_lines(lines: &[Value]) -> Vec<u8> {
    let mut s = String::new();
    for l in lines {
        s.push_str(&l.to_string());
        s.push('\n');
    }
    s.into_bytes()
}

fn enumerate(model: &Model, config: &RunConfig, kind: EnumKind, naive: bool, heart: Option<usize>) -> Result<Vec<Value>> {
    Ok(match kind {
        EnumKind::Rz => {
            let pts = if naive { moduli::enumerate_rz_naive(model)? } else { moduli::enumerate_rz(model)? };
            let mut out = Vec::new();
            for l in pts {
                let k = moduli::stratum_of(model, &l)?;
                if config.k.map_or(true, |want| want == k) {
                    out.push(json!({ "k": k, "L0": model.lattice_json(&l) }));
                }
            }
            out
        }
        EnumKind::Dl => {
            let k = config.require_k()?;
            let v = if naive { moduli::enumerate_dl_naive(model, k)? } else { moduli::enumerate_dl(model, k)? };
            v.iter().map(|f| f.to_json(model)).collect()
        }
        EnumKind::Y => {
            let k = config.require_k()?;
            let v = if naive { moduli::enumerate_y_naive(model, k)? } else { moduli::enumerate_y(model, k)? };
            v.iter().map(|y| y.to_json(model)).collect()
        }
        EnumKind::Hearts => {
            let v = if naive { moduli::hearts_naive(model)? } else { moduli::hearts(model)? };
            v.iter().map(|h| h.to_json(model)).collect()
        }
        EnumKind::DlHeart => {
            let hs = moduli::hearts(model)?;
            let picked: Vec<usize> = match heart {
                Some(i) if i < hs.len() => vec![i],
                Some(i) => return Err(Error::InvalidParams(format!("heart index {i} out of range 0..{}", hs.len()))),
                None => (0..hs.len()).collect(),
            };
            let mut out = Vec::new();
            for i in picked {
                let h = &hs[i];
                let flags =
                    if naive { moduli::enumerate_dl_heart_naive(model, h)? } else { moduli::enumerate_dl_heart(model, h)? };
                for f in flags {
                    let mut rec = f.to_json(model);
                    rec.as_object_mut().expect("object").insert("heart".into(), json!(i));
                    out.push(rec);
                }
            }
            out
        }
    })
}

/// CSV census: one `#` comment line with the header object, then the fixed
/// columns `p,m,n,k,j,count,oracle_count,match`.
pub fn census_csv(header: &Value, rows: &[CensusRow]) -> Result<Vec<u8>> {
    let mut buf = format!("# {header}\n").into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        for r in rows {
            w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
        }
        w.flush().map_err(io_err)?;
    }
    Ok(buf)
}

/// Parses a census written by [`census_csv`].
pub fn read_census(bytes: &[u8]) -> Result<Vec<CensusRow>> {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(bytes);
    r.deserialize().map(|row| row.map_err(|e| Error::InvalidParams(e.to_string()))).collect()
}

fn census_matches(bytes: &[u8], format: Format) -> bool {
    let rows: Vec<CensusRow> = match format {
        Format::Csv => read_census(bytes).unwrap_or_default(),
        Format::Json => serde_json::from_slice::<Value>(bytes)
            .ok()
            .and_then(|v| v.get("rows").cloned())
            .and_then(|v| serde_json::from_value(v).ok())
            .unwrap_or_default(),
    };
    rows.iter().all(|r| r.matches != Some(false))
}
