//! Command-line front end: argument parsing, dispatch and report assembly.
//!
//! [`run`] is the whole program minus process plumbing. It returns the
//! report text, the diagnostics and the exit status (0 success, 1 a check
//! failed, 2 bad input), which keeps it testable in-process.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};

use crate::algebra::{AlgebraSpec, AlgebraType};
use crate::cochain::Cochain;
use crate::cohomology::{matrix_of_d, Cohomology, GLaw};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::format::{parse_algebra_file, AnyAlgebra};
use crate::identities::{run_identities, Identity};
use crate::operad::{circ, delta_trias, MultContext};
use crate::params::{self, ParameterKind};
use crate::preoperadic::{verify_system, Axiom, StandardSystem};
use crate::report::{OutputFormat, RunReport};

/// Seed used by `identities` when none is given.
pub const DEFAULT_SEED: u64 = 0x5EED_1DE7;

const H1_CONVENTION: &str = "cochains start in degree 1 (there is no C^0), so H^1 = ker d^1";

#[derive(Debug, Parser)]
#[command(name = "loday", version, about = "Cochain operads and cohomology of Loday algebras")]
pub struct Cli {
    /// Worker threads (defaults to one per core).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Human)]
    pub format: OutputFormat,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exhaustively check the pre-operadic axioms of a parameter family.
    VerifySystem {
        /// linear, binary, planar, subsets or signs
        #[arg(long, value_parser = parse_kind)]
        kind: ParameterKind,
        #[arg(long, default_value_t = 5)]
        max_total: usize,
    },
    /// Check the defining axioms of an algebra and that its multiplication squares to zero.
    VerifyAlgebra { file: PathBuf },
    /// Cohomology dimensions and cocycle representatives.
    Cohomology {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
        /// Write each d^n as coordinate triplets into this directory.
        #[arg(long)]
        dump_matrices: Option<PathBuf>,
    },
    /// Compare the operadic differential with the trialgebra coboundary.
    CompareDifferentials {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
    },
    /// Check the G-algebra laws on cohomology.
    Gerstenhaber {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
    },
    /// Run the brace and homotopy-G identity suites on random cochains.
    Identities {
        file: PathBuf,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Bound on the sum of the input degrees of each instance.
        #[arg(long, default_value_t = 4)]
        max_total: usize,
    },
}

fn parse_kind(s: &str) -> std::result::Result<ParameterKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Everything a process needs to finish a run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn input_error(stderr: String) -> Self {
        Self { exit_code: 2, stdout: String::new(), stderr }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome::input_error(text)
            } else {
                Outcome { exit_code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    run_cli(&cli)
}

pub fn run_cli(cli: &Cli) -> Outcome {
    let start = Instant::now();
    let mut warnings = Vec::new();
    let result = match cli.threads {
        Some(0) => Err(Error::InvalidField { field: "--threads".into(), message: "must be >= 1".into() }),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(&cli.command, &mut warnings)),
            Err(e) => Err(Error::InvalidField { field: "--threads".into(), message: e.to_string() }),
        },
        None => execute(&cli.command, &mut warnings),
    };
    let mut stderr: String = warnings.iter().map(|w| format!("warning: {w}\n")).collect();
    match result {
        Ok(report) => {
            let _ = writeln!(stderr, "elapsed: {:.3}s", start.elapsed().as_secs_f64());
            Outcome { exit_code: report.exit_code(), stdout: report.render(cli.format), stderr }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            Outcome::input_error(stderr)
        }
    }
}

fn load(path: &Path, warnings: &mut Vec<String>) -> Result<AnyAlgebra> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidField {
        field: path.display().to_string(),
        message: e.to_string(),
    })?;
    let parsed = parse_algebra_file(&text).map_err(|e| Error::InvalidField {
        field: path.display().to_string(),
        message: e.to_string(),
    })?;
    warnings.extend(parsed.warnings);
    Ok(parsed.algebra)
}

macro_rules! with_algebra {
    ($any:expr, $a:ident => $body:expr) => {
        match $any {
            AnyAlgebra::Rational($a) => $body,
            AnyAlgebra::Modular($a) => $body,
        }
    };
}

fn execute(command: &Command, warnings: &mut Vec<String>) -> Result<RunReport> {
    match command {
        Command::VerifySystem { kind, max_total } => cmd_verify_system(*kind, *max_total),
        Command::VerifyAlgebra { file } => {
            let alg = load(file, warnings)?;
            let mut r = file_report("verify-algebra", file, &[], &alg);
            with_algebra!(alg, a => cmd_verify_algebra(&mut r, a)?);
            Ok(r)
        }
        Command::Cohomology { file, max_degree, dump_matrices } => {
            let alg = load(file, warnings)?;
            let mut extra = vec![format!("--max-degree {max_degree}")];
            if let Some(dir) = dump_matrices {
                extra.push(format!("--dump-matrices {}", dir.display()));
            }
            let mut r = file_report("cohomology", file, &extra, &alg);
            with_algebra!(alg, a => cmd_cohomology(&mut r, a, *max_degree, dump_matrices.as_deref())?);
            Ok(r)
        }
        Command::CompareDifferentials { file, max_degree } => {
            let alg = load(file, warnings)?;
            let mut r = file_report("compare-differentials", file, &[format!("--max-degree {max_degree}")], &alg);
            with_algebra!(alg, a => cmd_compare(&mut r, a, *max_degree)?);
            Ok(r)
        }
        Command::Gerstenhaber { file, max_degree } => {
            let alg = load(file, warnings)?;
            let mut r = file_report("gerstenhaber", file, &[format!("--max-degree {max_degree}")], &alg);
            with_algebra!(alg, a => cmd_gerstenhaber(&mut r, a, *max_degree)?);
            Ok(r)
        }
        Command::Identities { file, samples, seed, max_total } => {
            let alg = load(file, warnings)?;
            let extra = [format!("--samples {samples}"), format!("--seed {seed}"), format!("--max-total {max_total}")];
            let mut r = file_report("identities", file, &extra, &alg);
            with_algebra!(alg, a => cmd_identities(&mut r, a, *samples, *seed, *max_total)?);
            Ok(r)
        }
    }
}

fn file_report(name: &str, file: &Path, extra: &[String], alg: &AnyAlgebra) -> RunReport {
    let mut echo = format!("{name} {}", file.display());
    for e in extra {
        echo.push(' ');
        echo.push_str(e);
    }
    let mut r = RunReport::new(echo);
    r.meta("type", alg.ty());
    r.meta("field", alg.field_descriptor());
    r.meta("dim", alg.dim());
    r.meta("parameters", alg.ty().parameter_kind());
    r
}

fn cmd_verify_system(kind: ParameterKind, max_total: usize) -> Result<RunReport> {
    let mut r = RunReport::new(format!("verify-system --kind {kind} --max-total {max_total}"));
    r.meta("kind", kind);
    r.meta("max-total", max_total);
    let sizes: Vec<String> = (1..=max_total)
        .map(|n| params::cardinality(kind, n).map(|c| c.to_string()))
        .collect::<Result<_>>()?;
    r.meta("cardinalities", sizes.join(","));
    let report = verify_system(&StandardSystem(kind), max_total)?;
    for axiom in Axiom::ALL {
        let failures: Vec<_> = report.counterexamples.iter().filter(|c| c.axiom == axiom).collect();
        let summary = format!("{} instances, {} counterexamples", report.checks(axiom), failures.len());
        let details = failures.iter().take(5).map(|c| c.to_string()).collect();
        r.check(axiom.name(), failures.is_empty(), summary, details);
    }
    Ok(r)
}

fn render_vec<F: Field>(f: &F, v: &[F::Elem]) -> String {
    let parts: Vec<String> = v.iter().map(|x| f.render(x)).collect();
    format!("[{}]", parts.join(","))
}

fn cmd_verify_algebra<F: Field>(r: &mut RunReport, a: AlgebraSpec<F>) -> Result<()> {
    let field = a.field().clone();
    let names = a.basis().to_vec();
    let violations = a.verify_axioms();
    for ax in a.ty().axioms() {
        let mine: Vec<_> = violations.iter().filter(|v| v.axiom == ax.id).collect();
        let summary = if mine.is_empty() {
            format!("{} holds", ax.text())
        } else {
            format!("{} fails on {} basis triples", ax.text(), mine.len())
        };
        let details = mine
            .iter()
            .take(3)
            .map(|v| {
                let (i, j, k) = v.triple;
                format!(
                    "x={} y={} z={}: lhs={} rhs={}",
                    names[i],
                    names[j],
                    names[k],
                    render_vec(&field, &v.left),
                    render_vec(&field, &v.right)
                )
            })
            .collect();
        r.check(format!("axiom-{}", ax.id), mine.is_empty(), summary, details);
    }

    if a.ty().has_star() {
        let ok = a.star_is_associative()?;
        r.check("star-associative", ok, if ok { "x*y summed over all operations is associative" } else { "sum operation is not associative" }, vec![]);
    }

    let kind = a.parameter_kind();
    let pi = a.canonical_multiplication();
    let sq = circ(&pi, &pi)?;
    let mut support: Vec<usize> = sq.support().map(|(u, ..)| u).collect();
    support.dedup();
    let details = support
        .iter()
        .map(|&u| params::decode(kind, 3, u).map(|e| format!("nonzero at {e}")))
        .collect::<Result<_>>()?;
    let summary = if support.is_empty() {
        "pi o pi vanishes".to_string()
    } else {
        format!("pi o pi is nonzero on {} parameter elements", support.len())
    };
    r.check("pi-circ-pi", support.is_empty(), summary, details);
    Ok(())
}

fn context<F: Field>(a: AlgebraSpec<F>) -> Result<MultContext<F>> {
    MultContext::new(a)
}

/// `u:x1,..,xn->o` in basis names, with the parameter element spelled out.
fn describe_entry<F: Field>(c: &Cochain<F>, names: &[String], u: usize, x: usize, o: usize) -> Result<String> {
    let n = c.degree();
    let d = c.dim();
    let e = params::decode(c.kind(), n, u)?;
    let mut inputs = vec![0; n];
    let mut rest = x;
    for slot in inputs.iter_mut().rev() {
        *slot = rest % d;
        rest /= d;
    }
    let ins: Vec<&str> = inputs.iter().map(|&i| names[i].as_str()).collect();
    Ok(format!("{e}:{}->{}", ins.join(","), names[o]))
}

fn cmd_cohomology<F: Field>(r: &mut RunReport, a: AlgebraSpec<F>, max_degree: usize, dump: Option<&Path>) -> Result<()> {
    if max_degree == 0 {
        return Err(Error::InvalidArity(0));
    }
    let names = a.basis().to_vec();
    let ctx = context(a)?;
    let field = ctx.field().clone();
    r.note(H1_CONVENTION);
    let h = Cohomology::compute(&ctx, max_degree)?;

    let mut rows = Vec::new();
    for n in 1..=max_degree {
        let g = h.degree(n)?;
        rows.push(vec![
            n.to_string(),
            g.cochain_dim.to_string(),
            g.rank_out.to_string(),
            g.nullity().to_string(),
            g.rank_in.to_string(),
            g.dim().to_string(),
        ]);
    }
    r.table("cohomology", &["n", "dimC", "rank_d_n", "dimZ", "rank_d_n-1", "dimH"], rows);

    let mut reps = Vec::new();
    for n in 1..=max_degree {
        for (k, class) in h.representatives(n)?.iter().enumerate() {
            for (u, x, o, v) in class.representative().support() {
                reps.push(vec![n.to_string(), k.to_string(), describe_entry(class.representative(), &names, u, x, o)?, field.render(v)]);
            }
        }
    }
    r.table("representatives", &["n", "class", "entry", "coeff"], reps);

    let mut bad = Vec::new();
    for n in 1..max_degree {
        let (dn, dn1) = (h.matrix(n).expect("computed"), h.matrix(n + 1).expect("computed"));
        if !dn1.matrix.mul(&dn.matrix)?.is_zero() {
            bad.push(format!("d^{} d^{} != 0", n + 1, n));
        }
    }
    r.check("d-squared-zero", bad.is_empty(), format!("d^(n+1) d^n = 0 for n < {max_degree}"), bad);

    let mut bad = Vec::new();
    for n in 1..=max_degree {
        let g = h.degree(n)?;
        if g.rank_out != g.rank_out_echelon {
            bad.push(format!("degree {n}: fraction-free rank {} vs echelon rank {}", g.rank_out, g.rank_out_echelon));
        }
    }
    r.check("rank-agreement", bad.is_empty(), "independent eliminations agree on every rank", bad);

    let mut bad = Vec::new();
    for n in 1..=max_degree {
        for (k, class) in h.representatives(n)?.iter().enumerate() {
            if !ctx.diff(class.representative())?.is_zero() || h.is_coboundary(class.representative())? {
                bad.push(format!("H^{n} class {k} is not a nonzero class"));
            }
        }
    }
    r.check("representatives", bad.is_empty(), "every representative is a cocycle and not a coboundary", bad);

    if let Some(dir) = dump {
        std::fs::create_dir_all(dir).map_err(|e| Error::InvalidField { field: dir.display().to_string(), message: e.to_string() })?;
        for n in 1..=max_degree {
            let path = dir.join(format!("d{n}.triplets"));
            let text = h.matrix(n).expect("computed").matrix.to_triplet_text();
            std::fs::write(&path, text)
                .map_err(|e| Error::InvalidField { field: path.display().to_string(), message: e.to_string() })?;
        }
        r.meta("matrices", dir.display());
    }
    Ok(())
}

fn cmd_compare<F: Field>(r: &mut RunReport, a: AlgebraSpec<F>, max_degree: usize) -> Result<()> {
    if a.ty() != AlgebraType::Trias {
        return Err(Error::UnsupportedForType(a.ty().name().into()));
    }
    let ctx = context(a)?;
    let field = ctx.field().clone();
    let (kind, d) = (ctx.kind(), ctx.dim());
    for n in 1..=max_degree {
        let matrix = matrix_of_d(&ctx, n)?.matrix;
        let columns = matrix.columns();
        let sign = if n % 2 == 1 { field.one() } else { field.neg(&field.one()) };
        let len = Cochain::<F>::table_len(kind, d, n);
        let mismatches: Vec<usize> = (0..len)
            .filter(|&j| {
                let e = Cochain::basis(field.clone(), kind, d, n, j);
                let check = || -> Result<bool> {
                    let delta = delta_trias(ctx.algebra(), &e)?.scale(&sign);
                    let from_matrix: Vec<(usize, F::Elem)> = delta
                        .data()
                        .iter()
                        .enumerate()
                        .filter(|(_, v)| !field.is_zero(v))
                        .map(|(i, v)| (i, v.clone()))
                        .collect();
                    Ok(ctx.diff(&e)? == delta && columns[j] == from_matrix)
                };
                !matches!(check(), Ok(true))
            })
            .collect();
        let details = mismatches.iter().take(5).map(|j| format!("basis cochain {j} differs")).collect();
        r.check(
            format!("comparison-{n}"),
            mismatches.is_empty(),
            format!("d^{n} = (-1)^{} delta^{n} on all {len} basis cochains", n + 1),
            details,
        );
    }
    Ok(())
}

fn cmd_gerstenhaber<F: Field>(r: &mut RunReport, a: AlgebraSpec<F>, max_degree: usize) -> Result<()> {
    if max_degree == 0 {
        return Err(Error::InvalidArity(0));
    }
    let ctx = context(a)?;
    r.note(H1_CONVENTION);
    r.note("laws are checked on all representative tuples whose products stay within the computed degrees, up to coboundaries");
    let h = Cohomology::compute(&ctx, max_degree)?;
    let dims: Vec<String> = h.dims().iter().map(|(n, k)| format!("H^{n}={k}")).collect();
    r.meta("dims", dims.join(" "));
    let report = h.check_g_algebra(max_degree)?;
    for law in [GLaw::Commutativity, GLaw::Derivation, GLaw::Jacobi] {
        let (checked, failed) = report.tally(law);
        let details = report
            .checks
            .iter()
            .filter(|c| c.law == law && !c.passed)
            .take(5)
            .map(|c| format!("degrees {:?} classes {:?}", c.degrees, c.indices))
            .collect();
        r.check(law.name(), failed == 0, format!("{checked} instances, {failed} outside im d"), details);
    }
    Ok(())
}

fn cmd_identities<F: Field>(r: &mut RunReport, a: AlgebraSpec<F>, samples: usize, seed: u64, max_total: usize) -> Result<()> {
    if max_total < 3 {
        return Err(Error::InvalidField { field: "--max-total".into(), message: "must be >= 3".into() });
    }
    let ctx = context(a)?;
    let report = run_identities(&ctx, samples, seed, max_total)?;
    for id in Identity::ALL {
        let o = report.outcome(id).expect("every identity is run");
        let details = o
            .first_failure
            .iter()
            .map(|(s, degs)| format!("first failure: sample {s}, degrees {degs:?}"))
            .collect();
        r.check(id.name(), o.failures == 0, format!("{} instances, {} failures", o.instances, o.failures), details);
    }
    Ok(())
}
