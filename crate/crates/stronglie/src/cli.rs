//! Command-line surface. The binary delegates to [`run`], which returns
//! the process exit code instead of calling `exit` so integration tests
//! can drive full invocations in-process.
//!
//! Exit codes: 0 when every checked property holds, 2 when a run invoked
//! with `--expect-fail` fails as predicted, 1 otherwise (including usage
//! and computational errors). Sweeps over a `--p` comma list fan out
//! across threads; output is assembled in input order, so repeated runs
//! with the same flags produce identical bytes (timings are left out of
//! JSON unless requested and go on their own text line otherwise).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use crate::asym::{build_sigma_matrix, replay_appendix, sigma_reduce, SigmaOperator};
use crate::conjecture::{check_variant_i, check_variant_ii, ConjectureReport};
use crate::liering::{
    abelian, free_nilpotent_class3, heisenberg, parse_lie_ring, LieRing, PredicateReport,
    Quantification,
};
use crate::nilquot::ideal_basis;
use crate::relations::{
    parse_relation_set, serialize_relation_set, standard_relation_set, RelationChoice, RelationSet,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    Short,
    Long,
    All,
}

impl From<Which> for RelationChoice {
    fn from(w: Which) -> RelationChoice {
        match w {
            Which::Short => RelationChoice::Short,
            Which::Long => RelationChoice::Long,
            Which::All => RelationChoice::All,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Variant {
    #[value(name = "I", alias = "i")]
    I,
    #[value(name = "II", alias = "ii")]
    Ii,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Operator {
    Swap,
    Mirror,
}

#[derive(Debug, Parser)]
#[command(
    name = "stronglie",
    about = "Exact identity checking for k-strong Lie algebras over F_p",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output rendering
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Drop wall-clock timings from all output
    #[arg(long, global = true)]
    no_timings: bool,
    /// Write output to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Emit a canned relation family in the .rel file format
    GenRelations {
        /// Strongness parameter, 2 through 5
        #[arg(long)]
        k: u32,
        /// Field characteristic (a single prime)
        #[arg(long, default_value_t = 3)]
        p: u64,
        /// Which part of the family to emit
        #[arg(long, value_enum, default_value_t = Which::All)]
        which: Which,
    },
    /// Decide ideal membership of the conjectured identities
    Check {
        /// Identity family: the single power identity (I) or the full
        /// orbit sweep (II)
        #[arg(long, value_enum)]
        variant: Variant,
        /// Strongness parameter; taken from the relation file when
        /// --relations is given
        #[arg(long, required_unless_present = "relations")]
        k: Option<u32>,
        /// Characteristic or comma list of characteristics
        #[arg(long, required_unless_present = "relations")]
        p: Option<String>,
        /// Which part of the canned family to use
        #[arg(long, value_enum, default_value_t = Which::All)]
        which: Which,
        /// Attach exact membership certificates to the report
        #[arg(long)]
        certificates: bool,
        /// Load relations from a .rel file instead of the canned family;
        /// bare names resolve against the data directory
        #[arg(long)]
        relations: Option<PathBuf>,
        /// Expect the check to fail; exit 2 when it does
        #[arg(long)]
        expect_fail: bool,
    },
    /// Re-run the recorded derivation chain with verified certificates
    ReplayAppendix {
        /// Characteristic or comma list of characteristics
        #[arg(long)]
        p: String,
    },
    /// Build the one-variable operator presentation and triangularize it
    Sigma {
        /// Strongness parameter, 2 through 5
        #[arg(long)]
        k: u32,
        /// Characteristic or comma list of characteristics
        #[arg(long)]
        p: String,
        /// swap: negated a<->b swap; mirror: word reversal
        #[arg(long, value_enum)]
        operator: Operator,
    },
    /// Run structure-constant Lie ring predicates
    Oracle {
        /// Builtin ring: heisenberg, class3, or abelian (needs --dim)
        #[arg(long, required_unless_present = "file", conflicts_with = "file")]
        ring: Option<String>,
        /// Load the ring from a structure-constant file instead
        #[arg(long)]
        file: Option<PathBuf>,
        /// Characteristic (a single prime); taken from the file when
        /// --file is given
        #[arg(long, required_unless_present = "file")]
        p: Option<u64>,
        /// Strongness parameter to test
        #[arg(long)]
        k: u32,
        /// Dimension for the abelian builtin
        #[arg(long)]
        dim: Option<usize>,
        /// Seed for sampled quantifier runs on large rings
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Tabulate quotient dimensions per multiweight
    QuotientDims {
        /// Strongness parameter, 2 through 5
        #[arg(long)]
        k: u32,
        /// Characteristic or comma list of characteristics
        #[arg(long)]
        p: String,
        /// Largest total degree to tabulate
        #[arg(long)]
        max_degree: u32,
        /// Which part of the canned family to use
        #[arg(long, value_enum, default_value_t = Which::All)]
        which: Which,
    },
}

struct Outcome {
    holds: bool,
    expect_fail: bool,
    output: String,
}

/// Parses argv (program name included) and runs one batch command,
/// returning the exit code.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    let out = cli.out.clone();
    match execute(cli) {
        Ok(outcome) => {
            if let Err(e) = deliver(&out, &outcome.output) {
                eprintln!("error: {e:#}");
                return 1;
            }
            match (outcome.holds, outcome.expect_fail) {
                (true, false) => 0,
                (false, true) => 2,
                _ => 1,
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

fn deliver(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("--out {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// The directory holding the shipped golden relation files; the
/// STRONGLIE_DATA environment variable overrides it.
pub fn data_dir() -> PathBuf {
    std::env::var_os("STRONGLIE_DATA")
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("data"))
}

fn resolve_data_path(arg: &Path) -> Result<PathBuf> {
    if arg.exists() {
        return Ok(arg.to_owned());
    }
    let shipped = data_dir().join(arg);
    if shipped.exists() {
        return Ok(shipped);
    }
    bail!(
        "--relations: '{}' not found (also tried {})",
        arg.display(),
        shipped.display()
    )
}

fn parse_p_list(arg: &str) -> Result<Vec<u64>> {
    let ps: Vec<u64> = arg
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| anyhow!("--p: bad value '{}'", t.trim()))
        })
        .collect::<Result<_>>()?;
    if ps.is_empty() {
        bail!("--p: empty list");
    }
    Ok(ps)
}

/// Runs f once per input on its own thread; results come back in input
/// order and the first error wins.
fn sweep<I, T, F>(inputs: &[I], f: F) -> Result<Vec<T>>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> Result<T> + Sync,
{
    let f = &f;
    let results: Vec<Result<T>> = std::thread::scope(|s| {
        let handles: Vec<_> = inputs.iter().map(|p| s.spawn(move || f(p))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });
    results.into_iter().collect()
}

fn execute(cli: Cli) -> Result<Outcome> {
    let format = cli.format;
    let no_timings = cli.no_timings;
    match cli.command {
        Command::GenRelations { k, p, which } => {
            let rs = standard_relation_set(k, p, which.into())?;
            Ok(Outcome {
                holds: true,
                expect_fail: false,
                output: serialize_relation_set(&rs),
            })
        }
        Command::Check {
            variant,
            k,
            p,
            which,
            certificates,
            relations,
            expect_fail,
        } => {
            let sets = load_relation_sets(k, p.as_deref(), which, relations.as_deref())?;
            let reports = sweep(&sets, |rs| {
                let start = Instant::now();
                let mut report = match variant {
                    Variant::I => check_variant_i(rs, certificates)?,
                    Variant::Ii => check_variant_ii(rs, certificates)?,
                };
                if !no_timings {
                    report = report.with_timings(start.elapsed().as_millis() as u64);
                }
                Ok(report)
            })?;
            let holds = reports.iter().all(|r| r.all_members());
            let output = match format {
                Format::Json => lines(reports.iter().map(|r| r.to_json())),
                Format::Text => reports.iter().map(render_check).collect(),
            };
            Ok(Outcome {
                holds,
                expect_fail,
                output,
            })
        }
        Command::ReplayAppendix { p } => {
            let ps = parse_p_list(&p)?;
            let logs = sweep(&ps, |&p| {
                let start = Instant::now();
                let log = replay_appendix(p)?;
                Ok((log, start.elapsed().as_millis()))
            })?;
            let holds = logs.iter().all(|(l, _)| l.failure_count == 0);
            let output = match format {
                Format::Json => lines(logs.iter().map(|(l, _)| l.to_json())),
                Format::Text => logs
                    .iter()
                    .map(|(l, ms)| render_replay(l, *ms, no_timings))
                    .collect(),
            };
            Ok(Outcome {
                holds,
                expect_fail: false,
                output,
            })
        }
        Command::Sigma { k, p, operator } => {
            let ps = parse_p_list(&p)?;
            let operator = match operator {
                Operator::Swap => SigmaOperator::SwapNegate,
                Operator::Mirror => SigmaOperator::Mirror,
            };
            let mw = vec![k.saturating_sub(1), k.saturating_sub(1)];
            let runs = sweep(&ps, |&p| {
                let rs = standard_relation_set(k, p, RelationChoice::All)?;
                let matrix = build_sigma_matrix(&rs, &mw, operator)?;
                let reduction = sigma_reduce(&matrix);
                let fixed = matrix.fixed().iter().filter(|&&b| b).count();
                Ok((p, matrix.columns().len(), fixed, matrix.rows().len(), reduction))
            })?;
            let holds = runs.iter().all(|(_, _, _, _, r)| r.triangularized);
            let output = match format {
                Format::Json => lines(runs.iter().map(|(p, cols, fixed, rows, r)| {
                    serde_json::json!({
                        "k": k,
                        "p": p,
                        "operator": operator.to_string(),
                        "multiweight": mw,
                        "columns": cols,
                        "fixed": fixed,
                        "rows": rows,
                        "triangularized": r.triangularized,
                        "obstruction": r.obstruction,
                    })
                    .to_string()
                })),
                Format::Text => runs
                    .iter()
                    .map(|(p, cols, fixed, rows, r)| {
                        let verdict = match (&r.obstruction, r.triangularized) {
                            (_, true) => "triangularized".to_string(),
                            (Some(o), false) => format!("obstruction: {o}"),
                            (None, false) => "not triangularized".to_string(),
                        };
                        format!(
                            "sigma k={} p={} {} on ({},{}): {} columns ({} fixed), {} rows, {}\n",
                            k, p, operator, mw[0], mw[1], cols, fixed, rows, verdict
                        )
                    })
                    .collect(),
            };
            Ok(Outcome {
                holds,
                expect_fail: false,
                output,
            })
        }
        Command::Oracle {
            ring,
            file,
            p,
            k,
            dim,
            seed,
        } => {
            let (name, ring) = load_ring(ring.as_deref(), file.as_deref(), p, dim)?;
            let start = Instant::now();
            let strong = match seed {
                Some(s) => ring.is_k_strong_seeded(k, s)?,
                None => ring.is_k_strong(k)?,
            };
            let engel = match seed {
                Some(s) => ring.is_n_engel_seeded(k, s)?,
                None => ring.is_n_engel(k)?,
            };
            let identity = match seed {
                Some(s) => ring.check_identity_i_on_ring_seeded(k, s)?,
                None => ring.check_identity_i_on_ring(k)?,
            };
            let ms = start.elapsed().as_millis();
            let holds = strong.holds && engel.holds && identity.holds;
            let output = match format {
                Format::Json => {
                    let mut v = serde_json::json!({
                        "ring": name,
                        "p": ring.modulus(),
                        "dim": ring.dim(),
                        "k": k,
                        "k_strong": strong,
                        "n_engel": engel,
                        "identity_i": identity,
                    });
                    if !no_timings {
                        v["elapsed_ms"] = serde_json::json!(ms as u64);
                    }
                    format!("{v}\n")
                }
                Format::Text => {
                    let mut s = format!(
                        "oracle {} p={} dim={} k={}\n",
                        name,
                        ring.modulus(),
                        ring.dim(),
                        k
                    );
                    let _ = writeln!(s, "  {}-strong: {}", k, render_predicate(&strong));
                    let _ = writeln!(s, "  {}-Engel: {}", k, render_predicate(&engel));
                    let _ = writeln!(
                        s,
                        "  adjoint identity at k={}: {}",
                        k,
                        render_predicate(&identity)
                    );
                    if !no_timings {
                        let _ = writeln!(s, "  ({ms} ms)");
                    }
                    s
                }
            };
            Ok(Outcome {
                holds,
                expect_fail: false,
                output,
            })
        }
        Command::QuotientDims {
            k,
            p,
            max_degree,
            which,
        } => {
            let ps = parse_p_list(&p)?;
            let tables = sweep(&ps, |&p| {
                let rs = standard_relation_set(k, p, which.into())?;
                let mut rows = Vec::new();
                for i in 0..=max_degree {
                    for j in 0..=(max_degree - i) {
                        let mw = vec![i, j];
                        let words = crate::freealg::words_of_multiweight(&mw).len();
                        let basis = ideal_basis(&rs, &mw)?;
                        rows.push((mw, words, basis.rank()));
                    }
                }
                Ok((rs.name().to_string(), p, rows))
            })?;
            let output = match format {
                Format::Json => lines(tables.iter().map(|(name, p, rows)| {
                    let entries: Vec<serde_json::Value> = rows
                        .iter()
                        .map(|(mw, words, rank)| {
                            serde_json::json!({
                                "multiweight": mw,
                                "monomials": words,
                                "rank": rank,
                                "dim": words - rank,
                            })
                        })
                        .collect();
                    serde_json::json!({
                        "k": k,
                        "p": p,
                        "relations": name,
                        "max_degree": max_degree,
                        "table": entries,
                    })
                    .to_string()
                })),
                Format::Text => tables
                    .iter()
                    .map(|(name, p, rows)| render_dim_grid(k, *p, name, max_degree, rows))
                    .collect(),
            };
            Ok(Outcome {
                holds: true,
                expect_fail: false,
                output,
            })
        }
    }
}

fn lines<I: IntoIterator<Item = String>>(items: I) -> String {
    let mut out = String::new();
    for item in items {
        out.push_str(&item);
        out.push('\n');
    }
    out
}

fn load_relation_sets(
    k: Option<u32>,
    p: Option<&str>,
    which: Which,
    relations: Option<&Path>,
) -> Result<Vec<RelationSet>> {
    if let Some(path) = relations {
        let resolved = resolve_data_path(path)?;
        let text = std::fs::read_to_string(&resolved)
            .with_context(|| format!("--relations {}", resolved.display()))?;
        let name = resolved
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("file")
            .to_string();
        let rs = parse_relation_set(&text, &name)?;
        if let Some(k) = k {
            if k != rs.k() {
                bail!("--k {} conflicts with the relation file (k={})", k, rs.k());
            }
        }
        if let Some(p) = p {
            for q in parse_p_list(p)? {
                if q != rs.modulus() {
                    bail!(
                        "--p {} conflicts with the relation file (p={})",
                        q,
                        rs.modulus()
                    );
                }
            }
        }
        return Ok(vec![rs]);
    }
    let k = k.expect("clap enforces --k without --relations");
    let p = p.expect("clap enforces --p without --relations");
    parse_p_list(p)?
        .into_iter()
        .map(|q| Ok(standard_relation_set(k, q, which.into())?))
        .collect()
}

fn load_ring(
    ring: Option<&str>,
    file: Option<&Path>,
    p: Option<u64>,
    dim: Option<usize>,
) -> Result<(String, LieRing)> {
    if let Some(path) = file {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("--file {}", path.display()))?;
        let ring = parse_lie_ring(&text)?;
        if let Some(p) = p {
            if p != ring.modulus() {
                bail!("--p {} conflicts with the ring file (p={})", p, ring.modulus());
            }
        }
        let name = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("file")
            .to_string();
        return Ok((name, ring));
    }
    let name = ring.expect("clap enforces --ring without --file");
    let p = p.expect("clap enforces --p without --file");
    let ring = match name {
        "heisenberg" => heisenberg(p)?,
        "class3" | "free-nilpotent-class3" => free_nilpotent_class3(p)?,
        "abelian" => {
            let dim = dim.ok_or_else(|| anyhow!("--ring abelian needs --dim"))?;
            abelian(p, dim)?
        }
        other => bail!(
            "--ring '{}': unknown builtin (heisenberg, class3, abelian)",
            other
        ),
    };
    Ok((name.to_string(), ring))
}

fn render_check(report: &ConjectureReport) -> String {
    let members = report.results.iter().filter(|r| r.member).count();
    let mut s = format!(
        "check variant {} k={} p={} [{}]: {}/{} identities in the ideal",
        report.variant,
        report.k,
        report.p,
        report.relations,
        members,
        report.results.len()
    );
    if report.proviso {
        s.push_str(" (small characteristic proviso)");
    }
    if let Some(t) = &report.timings {
        let _ = write!(s, " ({} ms)", t.total_ms);
    }
    s.push('\n');
    for r in &report.results {
        let mark = if r.member { "ok  " } else { "FAIL" };
        let _ = write!(s, "  [{}] {}", mark, r.identity);
        if let Some(z) = r.reduces_to_zero {
            let _ = write!(s, "  (monomial itself: {})", if z { "zero" } else { "nonzero" });
        }
        s.push('\n');
        if let Some(cert) = &r.certificate {
            let _ = writeln!(s, "        certificate: {cert}");
        }
    }
    s
}

fn render_replay(log: &crate::asym::DerivationLog, ms: u128, no_timings: bool) -> String {
    let mut s = format!(
        "replay p={}: {} steps, {} derived equations, {} final facts, {} failures\n",
        log.p,
        log.steps.len(),
        log.derived_equation_count,
        log.final_facts.len(),
        log.failure_count
    );
    let _ = writeln!(s, "  axioms used: {}", log.axioms_used.join(", "));
    for f in &log.final_facts {
        let _ = writeln!(s, "  {}: {} + swap is in the ideal", f.label, f.poly);
    }
    if !no_timings {
        let _ = writeln!(s, "  ({ms} ms)");
    }
    s
}

fn render_predicate(r: &PredicateReport) -> String {
    let verdict = if r.holds { "yes" } else { "NO" };
    match r.quantification {
        Quantification::Exhaustive { count } => {
            format!("{verdict} (exhaustive over {count})")
        }
        Quantification::Sampled { size, seed } => {
            format!("{verdict} (sampled {size} draws, seed {seed})")
        }
    }
}

fn render_dim_grid(
    k: u32,
    p: u64,
    name: &str,
    max_degree: u32,
    rows: &[(Vec<u32>, usize, usize)],
) -> String {
    let mut s = format!(
        "quotient dims k={} p={} [{}]: rows a-degree, cols b-degree, total degree <= {}\n",
        k, p, name, max_degree
    );
    let _ = write!(s, "      ");
    for j in 0..=max_degree {
        let _ = write!(s, "{j:>5}");
    }
    s.push('\n');
    for i in 0..=max_degree {
        let _ = write!(s, "{i:>5} ");
        for j in 0..=(max_degree - i) {
            let dim = rows
                .iter()
                .find(|(mw, _, _)| mw[0] == i && mw[1] == j)
                .map(|(_, words, rank)| words - rank)
                .expect("full grid");
            let _ = write!(s, "{dim:>5}");
        }
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(s: &str) -> Vec<String> {
        std::iter::once("stronglie".to_string())
            .chain(s.split_whitespace().map(str::to_string))
            .collect()
    }

    #[test]
    fn exit_codes_follow_verdicts() {
        assert_eq!(run(args("check --variant I --k 2 --p 3,5 --format json")), 0);
        assert_eq!(
            run(args("check --variant I --k 4 --p 2 --which short --expect-fail")),
            2
        );
        assert_eq!(run(args("check --variant I --k 4 --p 2 --which short")), 1);
        // expected failure that does not happen is itself a failure
        assert_eq!(
            run(args("check --variant I --k 4 --p 3 --which short --expect-fail")),
            1
        );
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run(args("check --variant I --k 2")), 1);
        assert_eq!(run(args("frobnicate")), 1);
        assert_eq!(run(args("--help")), 0);
    }

    #[test]
    fn oracle_and_sigma_codes() {
        assert_eq!(run(args("oracle --ring heisenberg --p 3 --k 2")), 0);
        // the class-3 ring is not 2-strong
        assert_eq!(run(args("oracle --ring class3 --p 3 --k 2")), 1);
        assert_eq!(run(args("sigma --k 4 --p 3,5 --operator swap")), 0);
    }

    #[test]
    fn gen_relations_round_trips() {
        let dir = std::env::temp_dir().join("stronglie_cli_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("k3.rel");
        let argv = args(&format!(
            "gen-relations --k 3 --p 5 --out {}",
            path.display()
        ));
        assert_eq!(run(argv), 0);
        let rs = parse_relation_set(&std::fs::read_to_string(&path).unwrap(), "k3").unwrap();
        assert_eq!(rs.k(), 3);
        assert_eq!(rs.modulus(), 5);
        let code = run(args(&format!(
            "check --variant II --relations {}",
            path.display()
        )));
        assert_eq!(code, 0);
    }

    #[test]
    fn conflicting_file_flags_are_reported() {
        let dir = std::env::temp_dir().join("stronglie_cli_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("k3b.rel");
        assert_eq!(
            run(args(&format!(
                "gen-relations --k 3 --p 5 --out {}",
                path.display()
            ))),
            0
        );
        let code = run(args(&format!(
            "check --variant II --p 7 --relations {}",
            path.display()
        )));
        assert_eq!(code, 1);
    }
}
