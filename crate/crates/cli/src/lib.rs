//! Front end for the `circunit` binary. `run` writes everything it prints to
//! the supplied writer so tests can capture it.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use circunit_core::congruence::{galois_transport_check, q_power_identities, verify_main_theorem, Certificate, VerifyOptions};
use circunit_core::funnel::{build_partition, funnel_indices, GeneratorSystem};
use circunit_core::group_ring::u_chi1;
use circunit_core::tables::{r_table, s_table};
use circunit_core::units::eval_word;
use circunit_core::{special_mod2, Error, Level, UnitWord};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NEGATIVE: i32 = 2;
pub const EXIT_DISAGREEMENT: i32 = 3;

/// Levels with a proof behind the verdict; beyond them `--explore` is required.
const PROVEN_LEVELS: [u32; 4] = [4, 5, 6, 7];

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::Disagreement(_)) | CliError::Core(Error::InternalInconsistency(_)) => EXIT_DISAGREEMENT,
            _ => EXIT_USAGE,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "circunit", version, about = "Circular units of Z[ζ_{2^n}] modulo 2")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether only the trivial product of √F/F generators is ≡ 1 mod 2
    Verify(VerifyArgs),
    /// Print the s- and r-sequences mod 2
    Tables(TablesArgs),
    /// Print the funnel partition, generator systems and lattice indices as JSON
    Funnel(LevelArg),
    /// Build u_χ1(β) for the value β of a unit word
    Unit(UnitArgs),
    /// Check the q-power congruences and the Galois transport of q(1,1)
    Identities(IdentitiesArgs),
}

#[derive(Debug, Args, Default)]
pub struct VerifyArgs {
    /// Level n (repeatable); defaults to 4, 5, 6 and 7
    #[arg(long = "n")]
    pub levels: Vec<u32>,
    /// Certificate destination: a file for one level, otherwise a directory
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Allow n ≥ 8
    #[arg(long)]
    pub explore: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random δ samples when exhaustive search is out of reach
    #[arg(long, default_value_t = 1000)]
    pub spot_checks: usize,
    /// Write elapsed_ms as 0 so certificates are byte-reproducible
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Debug, Args)]
pub struct TablesArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct LevelArg {
    #[arg(long)]
    pub n: u32,
}

#[derive(Debug, Args)]
pub struct UnitArgs {
    #[arg(long)]
    pub n: u32,
    /// e.g. "d1^-8 * d7^8"
    #[arg(long)]
    pub word: String,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct IdentitiesArgs {
    #[arg(long = "n")]
    pub levels: Vec<u32>,
    #[arg(long)]
    pub explore: bool,
    #[arg(long)]
    pub json: bool,
}

/// Parse arguments, run, and return the process exit code. Usage errors
/// (including clap's) map to 1.
pub fn main_with_args<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(config, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(config: RunConfig, out: &mut impl Write) -> Result<i32, CliError> {
    match config.command.unwrap_or(Command::Verify(VerifyArgs::default())) {
        Command::Verify(a) => verify(&a, out),
        Command::Tables(a) => tables(&a, out),
        Command::Funnel(a) => funnel(&a, out),
        Command::Unit(a) => unit(&a, out),
        Command::Identities(a) => identities(&a, out),
    }
}

fn levels(requested: &[u32], explore: bool) -> Result<Vec<Level>, CliError> {
    let ns = if requested.is_empty() { PROVEN_LEVELS.to_vec() } else { requested.to_vec() };
    ns.into_iter()
        .map(|n| {
            let level = Level::new(n)?.require_at_least(4)?;
            if n > 7 && !explore {
                return Err(CliError::Usage(format!("n={n} is beyond the proven range; pass --explore")));
            }
            Ok(level)
        })
        .collect()
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn print_json(out: &mut impl Write, value: &impl Serialize) -> Result<(), CliError> {
    writeln!(out, "{}", serde_json::to_string_pretty(value)?)?;
    Ok(())
}

pub fn certificate_file_name(n: u32) -> String {
    format!("certificate_n{n}.json")
}

fn verify(a: &VerifyArgs, out: &mut impl Write) -> Result<i32, CliError> {
    let levels = levels(&a.levels, a.explore)?;
    let opts = VerifyOptions { seed: a.seed, spot_checks: a.spot_checks };
    let mut certs: Vec<Certificate> = Vec::new();
    for level in levels {
        let mut cert = verify_main_theorem(level, opts)?;
        if a.no_timing {
            cert.elapsed_ms = 0;
        }
        writeln!(
            out,
            "n={} generators={} rank={} nullity={} verdict={}",
            cert.n,
            cert.generators.len(),
            cert.rank,
            cert.nullity,
            cert.verdict
        )?;
        certs.push(cert);
    }
    if let Some(path) = &a.json {
        if certs.len() == 1 && !path.is_dir() {
            write_json(path, &certs[0])?;
        } else {
            fs::create_dir_all(path)?;
            for cert in &certs {
                write_json(&path.join(certificate_file_name(cert.n)), cert)?;
            }
        }
    }
    Ok(if certs.iter().all(|c| c.trivial_only) { EXIT_OK } else { EXIT_NEGATIVE })
}

fn tables(a: &TablesArgs, out: &mut impl Write) -> Result<i32, CliError> {
    let level = Level::new(a.n)?.require_at_least(4)?;
    let s = s_table(level)?;
    let r = r_table(level)?;
    if a.json {
        print_json(out, &[s, r])?;
    } else {
        write!(out, "{s}{r}")?;
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct GenView {
    label: String,
    word: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    coords: Option<String>,
}

#[derive(Serialize)]
struct FunnelView {
    n: u32,
    exploratory: bool,
    a_sets: Vec<Vec<u32>>,
    b_sets: Vec<Vec<u32>>,
    f_generators: Vec<GenView>,
    sqrt_over_f_generators: Vec<GenView>,
    index_d_f: String,
    index_d_dpow: String,
    index_sqrtf_f: String,
}

fn funnel(a: &LevelArg, out: &mut impl Write) -> Result<i32, CliError> {
    let level = Level::new(a.n)?.require_at_least(4)?;
    let p = build_partition(level)?;
    let sys = GeneratorSystem::build(level)?;
    let idx = funnel_indices(level)?;
    let view = |gens: &[circunit_core::funnel::Generator], with_coords: bool| -> Result<Vec<GenView>, CliError> {
        gens.iter()
            .map(|g| {
                let coords = if with_coords { Some(special_mod2(&eval_word(&g.word)?)?.to_string()) } else { None };
                Ok(GenView { label: g.label.to_string(), word: g.word.to_string(), coords })
            })
            .collect()
    };
    let fv = FunnelView {
        n: a.n,
        exploratory: a.n > 7,
        a_sets: p.a_sets,
        b_sets: p.b_sets,
        f_generators: view(&sys.f_gens, false)?,
        sqrt_over_f_generators: view(&sys.sqrt_gens, true)?,
        index_d_f: idx.d_f.to_string(),
        index_d_dpow: idx.d_dpow.to_string(),
        index_sqrtf_f: idx.sqrtf_f.to_string(),
    };
    print_json(out, &fv)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct UnitView {
    n: u32,
    word: String,
    gammas: Vec<String>,
}

fn unit(a: &UnitArgs, out: &mut impl Write) -> Result<i32, CliError> {
    let level = Level::new(a.n)?;
    let word = UnitWord::parse(level, &a.word)?;
    let beta = eval_word(&word)?;
    match u_chi1(&beta) {
        Ok(u) => {
            let gammas: Vec<String> = u.coeffs().iter().map(ToString::to_string).collect();
            if a.json {
                print_json(out, &UnitView { n: a.n, word: word.to_string(), gammas })?;
            } else {
                writeln!(out, "u_chi1({word}) = {u}")?;
            }
            Ok(EXIT_OK)
        }
        Err(Error::NotIntegral { index }) => {
            let reason = if !beta.is_real() { "not real" } else { "not congruent to 1 mod 2" };
            writeln!(out, "u_chi1({word}) is not integral: gamma_{index} is not an integer ({reason})")?;
            Ok(EXIT_NEGATIVE)
        }
        Err(e) => Err(e.into()),
    }
}

#[derive(Serialize)]
struct IdentitiesView {
    identities: circunit_core::congruence::IdentityReport,
    transport: circunit_core::congruence::TransportReport,
}

fn identities(a: &IdentitiesArgs, out: &mut impl Write) -> Result<i32, CliError> {
    let mut all = true;
    let mut views = Vec::new();
    for level in levels(&a.levels, a.explore)? {
        let identities = q_power_identities(level)?;
        let transport = galois_transport_check(level)?;
        all &= identities.all_hold() && transport.all_hold();
        if !a.json {
            writeln!(out, "n={}", level.n())?;
            for c in &identities.checks {
                writeln!(out, "  [{}] {}: {} | {}", if c.holds { "ok" } else { "FAIL" }, c.name, c.lhs, c.rhs)?;
            }
            for e in &transport.entries {
                writeln!(out, "  [{}] q(1,{}) = sigma_{}(q(1,1)): {}", if e.holds { "ok" } else { "FAIL" }, e.j, e.j, e.word_mod2)?;
            }
        }
        views.push(IdentitiesView { identities, transport });
    }
    if a.json {
        print_json(out, &views)?;
    }
    Ok(if all { EXIT_OK } else { EXIT_NEGATIVE })
}
