//! Command-line surface: single queries, table generation, and the
//! verification suites.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use siflag::cache::{cache_dir_from_env, load_partition_cache, save_partition_cache};
use siflag::extweyl::{
    bruhat_leq, element_text, in_wext_plus, length, min_coset_data, omega_elements, parse_element,
    pseudodim_fl, semiinfinite_leq,
};
use siflag::hecke::{
    bernstein, check_bernstein_relation, check_braid_relations, hecke_json, hecke_mul, hecke_text,
    std_inverse, wakimoto, BernsteinCase, HeckeElement,
};
use siflag::kostant::{
    gaitsgory_costalk_poly, gaitsgory_stalk_rank, kostant_partition, kostant_weight_multiplicity,
    m_costalk_poly, m_stalk_rank, stabilization_check,
};
use siflag::rootdatum::{build_root_datum, DatumSpec};
use siflag::suites::run_suites;
use siflag::{Error, Result, RootDatum};

#[derive(Parser)]
#[command(
    name = "siflag",
    version,
    about = "Exact arithmetic for extended affine Weyl groups, Kostant partition numerics, and the affine Hecke algebra"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Length and order queries in the extended affine Weyl group
    Order(OrderArgs),
    /// Partition-function, weight-multiplicity, and stalk/costalk queries
    Kostant(KostantArgs),
    /// Hecke algebra arithmetic and relation checks
    Hecke(HeckeArgs),
    /// Run verification suites; nonzero exit on failure
    Verify(VerifyArgs),
    /// Validate a root datum and print its basic facts
    Datum(DatumArgs),
}

#[derive(Args)]
struct DatumSel {
    /// Built-in datum alias: a1-adj, a1-sc, a2-adj, a2-sc, b2, g2, …
    #[arg(long, default_value = "a1-adj", conflicts_with = "datum_file")]
    datum: String,
    /// JSON file describing a root datum (named type or explicit lattices)
    #[arg(long, value_name = "PATH")]
    datum_file: Option<PathBuf>,
}

impl DatumSel {
    fn resolve(&self) -> Result<RootDatum> {
        match &self.datum_file {
            Some(path) => {
                let text = std::fs::read_to_string(path)?;
                let spec: DatumSpec = serde_json::from_str(&text)?;
                build_root_datum(&spec)
            }
            None => RootDatum::from_alias(&self.datum),
        }
    }
}

#[derive(Args)]
struct OrderArgs {
    #[command(flatten)]
    datum: DatumSel,
    /// Print ℓ(x) for an element in text syntax (e.g. "t[2]*s1")
    #[arg(long, value_name = "X")]
    length: Option<String>,
    /// Print whether x ≤ y in the Bruhat order
    #[arg(long, num_args = 2, value_names = ["X", "Y"])]
    bruhat: Option<Vec<String>>,
    /// Print whether x ≤ y in the semi-infinite order
    #[arg(long = "semiinf", num_args = 2, value_names = ["X", "Y"])]
    semiinf: Option<Vec<String>>,
    /// Print whether x lies in the dominant part of the extended group
    #[arg(long = "in-plus", value_name = "X")]
    in_plus: Option<String>,
    /// Print the finite-side pseudodimension of x
    #[arg(long = "pseudo-dim", value_name = "X")]
    pseudo_dim: Option<String>,
    /// Print the minimal coset representative attached to a coweight
    #[arg(long = "min-coset", value_name = "LAMBDA")]
    min_coset: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct KostantArgs {
    #[command(flatten)]
    datum: DatumSel,
    /// Print the partition polynomial of a coweight (JSON array)
    #[arg(long, value_name = "NU")]
    partition: Option<String>,
    /// Print the weight multiplicity of μ in the highest-weight module of λ
    #[arg(long, num_args = 2, value_names = ["LAMBDA", "MU"])]
    multiplicity: Option<Vec<String>>,
    /// Print the stalk rank of the standard family at offset ν
    #[arg(long, num_args = 2, value_names = ["LAMBDA", "NU"])]
    stalk: Option<Vec<String>>,
    /// Print the graded costalk polynomial at offset ν (λ+ν dominant)
    #[arg(long, num_args = 2, value_names = ["LAMBDA", "NU"])]
    costalk: Option<Vec<String>>,
    /// Print the sheaf stalk rank at ν on the semi-infinite orbit closure
    #[arg(long = "gaitsgory-stalk", value_name = "NU")]
    gaitsgory_stalk: Option<String>,
    /// Print the graded sheaf costalk polynomial at ν
    #[arg(long = "gaitsgory-costalk", value_name = "NU")]
    gaitsgory_costalk: Option<String>,
    /// Emit stalk/costalk/stabilization rows for all ν of height ≤ HEIGHT
    #[arg(long = "gaitsgory-table", value_name = "HEIGHT")]
    gaitsgory_table: Option<i64>,
    /// Dominant search box for the table's stabilization column
    #[arg(long = "stable-box", value_name = "N", default_value_t = 8)]
    stable_box: i64,
    /// Table output format
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    format: TableFormat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum HeckeFormat {
    Text,
    Json,
}

#[derive(Args)]
struct HeckeArgs {
    #[command(flatten)]
    datum: DatumSel,
    /// Print the product H_x · H_y
    #[arg(long, num_args = 2, value_names = ["X", "Y"])]
    mul: Option<Vec<String>>,
    /// Print the inverse of a standard basis element
    #[arg(long, value_name = "X")]
    inverse: Option<String>,
    /// Print the Bernstein element of a coweight (JSON array)
    #[arg(long, value_name = "LAMBDA")]
    bernstein: Option<String>,
    /// Print the Wakimoto element attached to x
    #[arg(long, value_name = "X")]
    wakimoto: Option<String>,
    /// Check the Bernstein commutation relation for (λ, i), i 1-based
    #[arg(long = "bernstein-check", num_args = 2, value_names = ["LAMBDA", "I"])]
    bernstein_check: Option<Vec<String>>,
    /// Verify the braid relations among the affine generators
    #[arg(long)]
    braid: bool,
    /// Element output format
    #[arg(long, value_enum, default_value_t = HeckeFormat::Text)]
    format: HeckeFormat,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    datum: DatumSel,
    /// Suite name (repeatable), or "all"
    #[arg(long = "suite", value_name = "NAME", action = ArgAction::Append, required = true)]
    suites: Vec<String>,
}

#[derive(Args)]
struct DatumArgs {
    #[command(flatten)]
    datum: DatumSel,
}

fn parse_coweight(datum: &RootDatum, text: &str) -> Result<Vec<i64>> {
    let v: Vec<i64> = serde_json::from_str(text)
        .map_err(|_| Error::Parse(format!("expected a JSON integer array, got `{text}`")))?;
    datum.check_rank(&v)?;
    Ok(v)
}

// ---------------------------------------------------------------------------
// Table emission
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
struct GaitsgoryRow {
    nu: String,
    stalk: i64,
    costalk: String,
    stable_from: String,
}

fn write_table<W: Write>(rows: &[GaitsgoryRow], format: TableFormat, out: &mut W) -> Result<()> {
    match format {
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            if rows.is_empty() {
                w.write_record(["nu", "stalk", "costalk", "stable_from"])
                    .map_err(|e| Error::Internal(e.to_string()))?;
            }
            for row in rows {
                w.serialize(row).map_err(|e| Error::Internal(e.to_string()))?;
            }
            w.flush()?;
        }
        TableFormat::Json => {
            let text = serde_json::to_string_pretty(rows)?;
            writeln!(out, "{text}")?;
        }
    }
    Ok(())
}

fn gaitsgory_rows(datum: &RootDatum, height: i64, stable_box: i64) -> Result<Vec<GaitsgoryRow>> {
    let zero = vec![0i64; datum.rank()];
    let mut rows = Vec::new();
    for nu in siflag::stalkcheck::closure_box(datum, &zero, height)? {
        let stable_from = match stabilization_check(datum, &nu, stable_box)? {
            Some(lam) => serde_json::to_string(&lam)?,
            None => "none".to_string(),
        };
        rows.push(GaitsgoryRow {
            nu: serde_json::to_string(&nu)?,
            stalk: gaitsgory_stalk_rank(datum, &nu),
            costalk: gaitsgory_costalk_poly(datum, &nu).to_string(),
            stable_from,
        });
    }
    Ok(rows)
}

// ---------------------------------------------------------------------------
// Subcommand drivers (return the process exit code)
// ---------------------------------------------------------------------------

fn run_order(args: OrderArgs) -> Result<u8> {
    let datum = args.datum.resolve()?;
    let mut answered = false;
    if let Some(text) = &args.length {
        let x = parse_element(&datum, text)?;
        println!("{}", length(&datum, &x));
        answered = true;
    }
    if let Some(pair) = &args.bruhat {
        let x = parse_element(&datum, &pair[0])?;
        let y = parse_element(&datum, &pair[1])?;
        println!("{}", bruhat_leq(&datum, &x, &y)?);
        answered = true;
    }
    if let Some(pair) = &args.semiinf {
        let x = parse_element(&datum, &pair[0])?;
        let y = parse_element(&datum, &pair[1])?;
        println!("{}", semiinfinite_leq(&datum, &x, &y)?);
        answered = true;
    }
    if let Some(text) = &args.in_plus {
        let x = parse_element(&datum, text)?;
        println!("{}", in_wext_plus(&datum, &x));
        answered = true;
    }
    if let Some(text) = &args.pseudo_dim {
        let x = parse_element(&datum, text)?;
        println!("{}", pseudodim_fl(&datum, &x));
        answered = true;
    }
    if let Some(text) = &args.min_coset {
        let lam = parse_coweight(&datum, text)?;
        let (min, _) = min_coset_data(&datum, &lam);
        println!("{}", element_text(&datum, &min));
        answered = true;
    }
    if !answered {
        return Err(Error::Parse("no order query given".to_string()));
    }
    Ok(0)
}

fn run_kostant(args: KostantArgs) -> Result<u8> {
    let datum = args.datum.resolve()?;
    let cache_dir = cache_dir_from_env();
    if let Some(dir) = &cache_dir {
        load_partition_cache(dir, &datum);
    }
    let mut answered = false;
    if let Some(text) = &args.partition {
        let nu = parse_coweight(&datum, text)?;
        println!("{}", kostant_partition(&datum, &nu));
        answered = true;
    }
    if let Some(pair) = &args.multiplicity {
        let lam = parse_coweight(&datum, &pair[0])?;
        let mu = parse_coweight(&datum, &pair[1])?;
        println!("{}", kostant_weight_multiplicity(&datum, &lam, &mu)?);
        answered = true;
    }
    if let Some(pair) = &args.stalk {
        let lam = parse_coweight(&datum, &pair[0])?;
        let nu = parse_coweight(&datum, &pair[1])?;
        println!("{}", m_stalk_rank(&datum, &lam, &nu)?);
        answered = true;
    }
    if let Some(pair) = &args.costalk {
        let lam = parse_coweight(&datum, &pair[0])?;
        let nu = parse_coweight(&datum, &pair[1])?;
        println!("{}", m_costalk_poly(&datum, &lam, &nu)?);
        answered = true;
    }
    if let Some(text) = &args.gaitsgory_stalk {
        let nu = parse_coweight(&datum, text)?;
        println!("{}", gaitsgory_stalk_rank(&datum, &nu));
        answered = true;
    }
    if let Some(text) = &args.gaitsgory_costalk {
        let nu = parse_coweight(&datum, text)?;
        println!("{}", gaitsgory_costalk_poly(&datum, &nu));
        answered = true;
    }
    if let Some(height) = args.gaitsgory_table {
        let rows = gaitsgory_rows(&datum, height, args.stable_box)?;
        let mut stdout = std::io::stdout().lock();
        write_table(&rows, args.format, &mut stdout)?;
        answered = true;
    }
    if let Some(dir) = &cache_dir {
        if let Err(e) = save_partition_cache(dir, &datum) {
            eprintln!("warning: could not write partition cache: {e}");
        }
    }
    if !answered {
        return Err(Error::Parse("no kostant query given".to_string()));
    }
    Ok(0)
}

fn print_hecke(datum: &RootDatum, h: &HeckeElement, format: HeckeFormat) -> Result<()> {
    match format {
        HeckeFormat::Text => println!("{}", hecke_text(datum, h)),
        HeckeFormat::Json => println!("{}", serde_json::to_string(&hecke_json(datum, h))?),
    }
    Ok(())
}

fn run_hecke(args: HeckeArgs) -> Result<u8> {
    let datum = args.datum.resolve()?;
    let mut answered = false;
    let mut failed = false;
    if let Some(pair) = &args.mul {
        let x = parse_element(&datum, &pair[0])?;
        let y = parse_element(&datum, &pair[1])?;
        let prod = hecke_mul(
            &datum,
            &HeckeElement::std_basis(x),
            &HeckeElement::std_basis(y),
        )?;
        print_hecke(&datum, &prod, args.format)?;
        answered = true;
    }
    if let Some(text) = &args.inverse {
        let x = parse_element(&datum, text)?;
        print_hecke(&datum, &std_inverse(&datum, &x)?, args.format)?;
        answered = true;
    }
    if let Some(text) = &args.bernstein {
        let lam = parse_coweight(&datum, text)?;
        print_hecke(&datum, &bernstein(&datum, &lam)?, args.format)?;
        answered = true;
    }
    if let Some(text) = &args.wakimoto {
        let x = parse_element(&datum, text)?;
        print_hecke(&datum, &wakimoto(&datum, &x)?, args.format)?;
        answered = true;
    }
    if let Some(pair) = &args.bernstein_check {
        let lam = parse_coweight(&datum, &pair[0])?;
        let i: usize = pair[1]
            .parse()
            .map_err(|_| Error::Parse(format!("expected a simple index, got `{}`", pair[1])))?;
        if i == 0 || i > datum.num_simple() {
            return Err(Error::Parse(format!(
                "simple index {i} out of range 1..={}",
                datum.num_simple()
            )));
        }
        let (case, ok) = check_bernstein_relation(&datum, &lam, i - 1)?;
        println!("case {case}: {}", if ok { "pass" } else { "fail" });
        if !ok && case != BernsteinCase::NotApplicable {
            failed = true;
        }
        answered = true;
    }
    if args.braid {
        let report = check_braid_relations(&datum)?;
        println!(
            "braid relations: {} checked, {} skipped (infinite order), {} failures",
            report.pairs_checked,
            report.infinite_pairs,
            report.failures.len()
        );
        for f in &report.failures {
            println!("  {f}");
        }
        if !report.failures.is_empty() {
            failed = true;
        }
        answered = true;
    }
    if !answered {
        return Err(Error::Parse("no hecke query given".to_string()));
    }
    Ok(u8::from(failed))
}

fn run_verify(args: VerifyArgs) -> Result<u8> {
    let datum = args.datum.resolve()?;
    let outcomes = run_suites(&datum, &args.suites)?;
    let mut failed = 0usize;
    for outcome in &outcomes {
        if outcome.pass() {
            println!("suite {}: pass ({} checks)", outcome.name, outcome.checked);
        } else {
            failed += 1;
            println!(
                "suite {}: FAIL ({} of {} checks failed)",
                outcome.name,
                outcome.failures.len(),
                outcome.checked
            );
            for f in outcome.failures.iter().take(5) {
                println!("  {f}");
            }
        }
    }
    if failed == 0 {
        println!("verify: all {} suites passed", outcomes.len());
        Ok(0)
    } else {
        println!("verify: {failed} of {} suites failed", outcomes.len());
        Ok(1)
    }
}

fn run_datum(args: DatumArgs) -> Result<u8> {
    let datum = args.datum.resolve()?;
    println!("rank: {}", datum.rank());
    println!("simple roots: {}", datum.num_simple());
    println!("semisimple: {}", datum.is_semisimple());
    println!("positive roots: {}", datum.pos_roots().len());
    println!("cartan: {}", serde_json::to_string(datum.cartan())?);
    println!("two_rho: {}", serde_json::to_string(datum.two_rho())?);
    println!(
        "two_rho_check: {}",
        serde_json::to_string(datum.two_rho_check())?
    );
    match datum.finite_weyl_elements() {
        Ok(elements) => println!("weyl order: {}", elements.len()),
        Err(_) => println!("weyl order: (not enumerated)"),
    }
    if datum.is_semisimple() {
        println!("omega order: {}", omega_elements(&datum)?.len());
    }
    println!("fingerprint: {:032x}", datum.fingerprint());
    Ok(0)
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Parse(_)
        | Error::Json(_)
        | Error::Io(_)
        | Error::InvalidDatum(_)
        | Error::RankMismatch { .. }
        | Error::NotFiniteType(_)
        | Error::EmptyRange(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Order(args) => run_order(args),
        Command::Kostant(args) => run_kostant(args),
        Command::Hecke(args) => run_hecke(args),
        Command::Verify(args) => run_verify(args),
        Command::Datum(args) => run_datum(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_tables_emit_only_the_header() {
        let mut buf = Vec::new();
        write_table(&[], TableFormat::Csv, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "nu,stalk,costalk,stable_from\n"
        );
    }

    #[test]
    fn table_rows_round_trip_through_json() {
        let d = RootDatum::from_alias("a1-adj").unwrap();
        let rows = gaitsgory_rows(&d, 3, 8).unwrap();
        assert_eq!(rows.len(), 4); // ν ∈ {0, −2, −4, −6}
        let mut buf = Vec::new();
        write_table(&rows, TableFormat::Json, &mut buf).unwrap();
        let parsed: Vec<GaitsgoryRow> =
            serde_json::from_str(&String::from_utf8(buf).unwrap()).unwrap();
        assert_eq!(parsed.len(), rows.len());
        assert_eq!(parsed[0].nu, "[0]");
        assert_eq!(parsed[0].stalk, 1);
    }

    #[test]
    fn csv_tables_are_byte_stable() {
        let d = RootDatum::from_alias("a2-adj").unwrap();
        let rows = gaitsgory_rows(&d, 2, 6).unwrap();
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_table(&rows, TableFormat::Csv, &mut a).unwrap();
        let rows_again = gaitsgory_rows(&d, 2, 6).unwrap();
        write_table(&rows_again, TableFormat::Csv, &mut b).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        assert!(text.starts_with("nu,stalk,costalk,stable_from\n"));
    }

    #[test]
    fn coweight_parsing_validates_rank() {
        let d = RootDatum::from_alias("a2-adj").unwrap();
        assert_eq!(parse_coweight(&d, "[-1,-1]").unwrap(), vec![-1, -1]);
        assert!(matches!(
            parse_coweight(&d, "[1]"),
            Err(Error::RankMismatch { .. })
        ));
        assert!(matches!(
            parse_coweight(&d, "nope"),
            Err(Error::Parse(_))
        ));
    }
}
