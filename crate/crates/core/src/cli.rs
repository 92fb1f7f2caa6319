//! The `thl-recon` command line.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::net::{TcpListener, TcpStream};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounds::{baseline_bits, curve_row, BoundsReport, CSV_HEADER, CURVE_HEADER, ERR_MARKER};
use crate::gf2::BitVector;
use crate::oracle::{gen_instance, oracle_is_thl, oracle_symdiff, IndexSpec};
use crate::params::{ceil_lg, Params, ParamsSpec, Scheme};
use crate::protocol::{
    decode, encode, format_set, parse_digest, parse_set, serialize_digest, session_run, session_run_asymmetric,
    ProtocolError, Role, SessionStats, TcpTransport,
};
use crate::recon1::ReconError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;
pub const EXIT_INCONSISTENT: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "thl-recon", version, about = "Reconcile sets of binary strings whose differences cluster")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a seeded pair of set files and their true difference.
    Gen(GenArgs),
    /// Write the digest of a set file.
    Digest(DigestArgs),
    /// Recover the difference with a peer, printing one hex line per element.
    Reconcile(ReconcileArgs),
    /// Emit bound tables as CSV.
    Bounds(BoundsArgs),
    /// Compare digest size, baseline and decode time over a parameter grid.
    Bench(BenchArgs),
    /// Check a difference file against two set files.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long)]
    pub params: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub common: usize,
    #[arg(long)]
    pub out_a: PathBuf,
    #[arg(long)]
    pub out_b: PathBuf,
    #[arg(long)]
    pub out_delta: PathBuf,
}

#[derive(Args, Debug)]
pub struct DigestArgs {
    #[arg(long)]
    pub params: PathBuf,
    #[arg(long)]
    pub set: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum RoleArg {
    Sender,
    Receiver,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("peer").required(true).args(["peer_digest", "connect", "listen"]))]
pub struct ReconcileArgs {
    #[arg(long)]
    pub params: PathBuf,
    #[arg(long)]
    pub set: PathBuf,
    #[arg(long)]
    pub peer_digest: Option<PathBuf>,
    #[arg(long)]
    pub connect: Option<String>,
    #[arg(long)]
    pub listen: Option<String>,
    /// One-directional session: the sender receives the difference from
    /// the receiver. Symmetric when omitted.
    #[arg(long, value_enum)]
    pub role: Option<RoleArg>,
    /// Print session statistics to stderr.
    #[arg(long)]
    pub stats: bool,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    /// Values as `a`, `a,b,c` or `a..b`.
    #[arg(long, default_value = "31")]
    pub n: String,
    #[arg(long, default_value = "1")]
    pub t: String,
    #[arg(long, default_value = "2")]
    pub h: String,
    #[arg(long, default_value = "1")]
    pub ell: String,
    /// Emit rate curves over λ instead of the grid table.
    #[arg(long)]
    pub curve: bool,
    #[arg(long, default_value = "0,0.05,0.1")]
    pub eta: String,
    /// λ values for `--curve`; defaults to 0.01, 0.02, …, 0.49.
    #[arg(long)]
    pub lambda: Option<String>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, default_value = "63,127")]
    pub n: String,
    #[arg(long, default_value = "1")]
    pub t: String,
    #[arg(long, default_value = "2..4")]
    pub h: String,
    #[arg(long, default_value = "1")]
    pub ell: String,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 20)]
    pub common: usize,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub params: PathBuf,
    #[arg(long)]
    pub set_a: PathBuf,
    #[arg(long)]
    pub set_b: PathBuf,
    #[arg(long)]
    pub delta: PathBuf,
}

/// An error with its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub msg: String,
}

fn fail(code: i32, msg: impl Into<String>) -> CliError {
    CliError { code, msg: msg.into() }
}

impl From<ProtocolError> for CliError {
    fn from(e: ProtocolError) -> Self {
        let code = match &e {
            ProtocolError::ParamMismatch => EXIT_MISMATCH,
            ProtocolError::Recon(ReconError::InconsistentDigests(_)) => EXIT_INCONSISTENT,
            ProtocolError::Recon(_)
            | ProtocolError::BadMagic
            | ProtocolError::BadVersion(_)
            | ProtocolError::UnknownType(_)
            | ProtocolError::Unexpected { .. }
            | ProtocolError::Malformed(_) => EXIT_MISMATCH,
            ProtocolError::Peer(m) if m.contains("fingerprint") => EXIT_MISMATCH,
            ProtocolError::Peer(m) if m.contains("inconsistent") => EXIT_INCONSISTENT,
            _ => EXIT_IO,
        };
        fail(code, e.to_string())
    }
}

impl From<ReconError> for CliError {
    fn from(e: ReconError) -> Self {
        ProtocolError::from(e).into()
    }
}

/// Parses `a`, `a,b,c`, `a..b` (inclusive) or a mix such as `1,4..6`.
pub fn parse_range(s: &str) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let a: usize = a.trim().parse().map_err(|_| format!("bad range start in `{part}`"))?;
            let b: usize = b.trim().parse().map_err(|_| format!("bad range end in `{part}`"))?;
            if a > b {
                return Err(format!("empty range `{part}`"));
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(|_| format!("bad integer `{part}`"))?);
        }
    }
    if out.is_empty() {
        return Err(format!("no values in `{s}`"));
    }
    Ok(out)
}

fn parse_floats(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<f64>().map_err(|_| format!("bad number `{p}`")))
        .collect()
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| fail(EXIT_IO, format!("{}: {e}", path.display())))
}

fn write(path: &Path, data: &[u8]) -> Result<(), CliError> {
    fs::write(path, data).map_err(|e| fail(EXIT_IO, format!("{}: {e}", path.display())))
}

pub fn load_params(path: &Path) -> Result<Params, CliError> {
    let spec: ParamsSpec = read(path)?
        .parse()
        .map_err(|e| fail(EXIT_USAGE, format!("{}: {e}", path.display())))?;
    spec.build().map_err(|e| fail(EXIT_USAGE, format!("{}: {e}", path.display())))
}

fn load_set(params: &Params, path: &Path) -> Result<BTreeSet<BitVector>, CliError> {
    parse_set(params.n(), &read(path)?).map_err(|e| fail(EXIT_USAGE, format!("{}: {e}", path.display())))
}

fn stats_line(s: &SessionStats) -> String {
    format!(
        "stats: bytes_sent={} bytes_received={} frames_sent={} frames_received={} digest_bits={} baseline_bits={} outcome={:?}",
        s.bytes_sent, s.bytes_received, s.frames_sent, s.frames_received, s.digest_bits, s.baseline_bits, s.outcome
    )
}

fn cmd_gen(a: &GenArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let params = load_params(&a.params)?;
    let inst = gen_instance(&params, a.seed, a.common).map_err(|e| fail(EXIT_IO, e.to_string()))?;
    write(&a.out_a, format_set(&inst.a).as_bytes())?;
    write(&a.out_b, format_set(&inst.b).as_bytes())?;
    write(&a.out_delta, format_set(&inst.delta).as_bytes())?;
    writeln!(out, "a={} b={} delta={}", inst.a.len(), inst.b.len(), inst.delta.len()).map_err(io_err)?;
    Ok(())
}

fn cmd_digest(a: &DigestArgs) -> Result<(), CliError> {
    let params = load_params(&a.params)?;
    let set = load_set(&params, &a.set)?;
    let d = encode(&params, &set)?;
    write(&a.out, &serialize_digest(&params, &d)?)
}

fn cmd_reconcile(a: &ReconcileArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let params = load_params(&a.params)?;
    let set = load_set(&params, &a.set)?;
    let delta = if let Some(path) = &a.peer_digest {
        let bytes = fs::read(path).map_err(|e| fail(EXIT_IO, format!("{}: {e}", path.display())))?;
        let theirs = parse_digest(&params, &bytes)?;
        let mine = encode(&params, &set)?;
        decode(&params, &mine, &theirs)?
    } else {
        let stream = if let Some(addr) = &a.connect {
            TcpStream::connect(addr).map_err(|e| fail(EXIT_IO, format!("connect {addr}: {e}")))?
        } else {
            let addr = a.listen.as_deref().expect("clap group");
            let listener = TcpListener::bind(addr).map_err(|e| fail(EXIT_IO, format!("bind {addr}: {e}")))?;
            let local = listener.local_addr().map_err(io_err)?;
            writeln!(err, "listening on {local}").map_err(io_err)?;
            err.flush().map_err(io_err)?;
            listener.accept().map_err(io_err)?.0
        };
        let mut transport = TcpTransport::new(stream);
        let result = match a.role {
            None => session_run(&mut transport, &params, &set),
            Some(RoleArg::Sender) => session_run_asymmetric(&mut transport, &params, &set, Role::Sender),
            Some(RoleArg::Receiver) => session_run_asymmetric(&mut transport, &params, &set, Role::Receiver),
        };
        match result {
            Ok((delta, stats)) => {
                if a.stats {
                    writeln!(err, "{}", stats_line(&stats)).map_err(io_err)?;
                }
                delta
            }
            Err(e) => {
                if a.stats {
                    writeln!(err, "{}", stats_line(&e.stats)).map_err(io_err)?;
                }
                return Err(e.error.into());
            }
        }
    };
    out.write_all(format_set(&delta).as_bytes()).map_err(io_err)
}

fn cmd_bounds(a: &BoundsArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let usage = |e: String| fail(EXIT_USAGE, e);
    if a.curve {
        let etas = parse_floats(&a.eta).map_err(usage)?;
        let lambdas = match &a.lambda {
            Some(s) => parse_floats(s).map_err(usage)?,
            None => (1..50).map(|i| i as f64 / 100.0).collect(),
        };
        writeln!(out, "{CURVE_HEADER}").map_err(io_err)?;
        for &eta in &etas {
            for &lambda in &lambdas {
                writeln!(out, "{}", curve_row(lambda, eta)).map_err(io_err)?;
            }
        }
        return Ok(());
    }
    let (ns, ts, hs, ls) = (
        parse_range(&a.n).map_err(usage)?,
        parse_range(&a.t).map_err(usage)?,
        parse_range(&a.h).map_err(usage)?,
        parse_range(&a.ell).map_err(usage)?,
    );
    writeln!(out, "{CSV_HEADER}").map_err(io_err)?;
    for &n in &ns {
        for &t in &ts {
            for &h in &hs {
                for &ell in &ls {
                    let row = match BoundsReport::compute(n, t, h, ell) {
                        Ok(r) => r.csv_row(),
                        Err(_) => {
                            let e = ERR_MARKER;
                            format!("{n},{t},{h},{ell},{e},{e},{e},{e},{},{e}", baseline_bits(n, t, h))
                        }
                    };
                    writeln!(out, "{row}").map_err(io_err)?;
                }
            }
        }
    }
    Ok(())
}

pub const BENCH_HEADER: &str = "n,t,h,ell,scheme,digest_bits,baseline_bits,trials,exact,wall_ms";

fn bench_row(spec: &ParamsSpec, trials: usize, seed: u64, common: usize) -> String {
    let (n, t, h, ell) = (spec.n, spec.t, spec.h, spec.ell);
    let base = baseline_bits(n, t, h);
    let params = match spec.build() {
        Ok(p) => p,
        Err(e) => {
            let label = if spec.index_set.is_empty() { "single" } else { "general" };
            return format!("{n},{t},{h},{ell},{label},{ERR_MARKER},{base},0,0,0 # {e}");
        }
    };
    let label = match params.scheme() {
        Scheme::Single(_) => "single",
        Scheme::General(_) => "general",
    };
    let start = Instant::now();
    let mut exact = 0;
    for i in 0..trials {
        let Ok(inst) = gen_instance(&params, seed.wrapping_add(i as u64), common) else {
            continue;
        };
        let (Ok(da), Ok(db)) = (encode(&params, &inst.a), encode(&params, &inst.b)) else {
            continue;
        };
        if decode(&params, &da, &db).is_ok_and(|d| d == oracle_symdiff(&inst.a, &inst.b)) {
            exact += 1;
        }
    }
    let ms = start.elapsed().as_millis();
    format!("{n},{t},{h},{ell},{label},{},{base},{trials},{exact},{ms}", params.digest_bits())
}

fn cmd_bench(a: &BenchArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let usage = |e: String| fail(EXIT_USAGE, e);
    let (ns, ts, hs, ls) = (
        parse_range(&a.n).map_err(usage)?,
        parse_range(&a.t).map_err(usage)?,
        parse_range(&a.h).map_err(usage)?,
        parse_range(&a.ell).map_err(usage)?,
    );
    writeln!(out, "{BENCH_HEADER}").map_err(io_err)?;
    if a.trials == 0 {
        return Ok(());
    }
    for &n in &ns {
        for &t in &ts {
            for &h in &hs {
                for &ell in &ls {
                    let mut specs = vec![ParamsSpec::with_default_index(n, t, h, ell)];
                    if t == 1 {
                        specs.push(ParamsSpec::new(n, 1, h, ell, (1..=ceil_lg(n)).collect()));
                    }
                    for spec in &specs {
                        writeln!(out, "{}", bench_row(spec, a.trials, a.seed, a.common)).map_err(io_err)?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let params = load_params(&a.params)?;
    let sa = load_set(&params, &a.set_a)?;
    let sb = load_set(&params, &a.set_b)?;
    let delta = load_set(&params, &a.delta)?;
    if oracle_symdiff(&sa, &sb) != delta {
        return Err(fail(EXIT_INCONSISTENT, "difference file does not match the set files"));
    }
    let witness = oracle_is_thl(&sa, &sb, params.t(), params.h(), params.ell(), IndexSpec::Given(params.index()))
        .map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
    match witness {
        Some(w) => {
            writeln!(out, "ok: {} elements in {} blocks", delta.len(), w.blocks.len()).map_err(io_err)?;
            Ok(())
        }
        None => Err(fail(EXIT_INCONSISTENT, "sets do not satisfy the parameter constraints")),
    }
}

fn io_err(e: std::io::Error) -> CliError {
    fail(EXIT_IO, e.to_string())
}

pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Gen(a) => cmd_gen(a, out),
        Command::Digest(a) => cmd_digest(a),
        Command::Reconcile(a) => cmd_reconcile(a, out, err),
        Command::Bounds(a) => cmd_bounds(a, out),
        Command::Bench(a) => cmd_bench(a, out),
        Command::Verify(a) => cmd_verify(a, out),
    }
}

/// Parses `args` and runs the command against the given streams, returning
/// the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    match execute(&cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.msg);
            e.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("3").unwrap(), vec![3]);
        assert_eq!(parse_range("1,4..6").unwrap(), vec![1, 4, 5, 6]);
        assert!(parse_range("5..2").is_err());
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn bench_zero_trials_is_header_only() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(["thl-recon", "bench", "--trials", "0"], &mut out, &mut err);
        assert_eq!(code, EXIT_OK);
        assert_eq!(String::from_utf8(out).unwrap(), format!("{BENCH_HEADER}\n"));
    }

    #[test]
    fn usage_errors_exit_2() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        assert_eq!(run(["thl-recon", "frobnicate"], &mut out, &mut err), EXIT_USAGE);
        assert_eq!(run(["thl-recon", "bounds", "--n", "x"], &mut out, &mut err), EXIT_USAGE);
    }
}
