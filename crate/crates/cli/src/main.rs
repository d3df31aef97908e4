use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use toroidal_cli::input::{parse_matrix_file, parse_type};
use toroidal_cli::render::{self, Format, TableDoc};
use toroidal_cli::{exit, exit_code};
use toroidal_core::classify::{classify, verify_order};
use toroidal_core::cohomology::{
    equivariant_cohomology, fixed_point_set, quotient_cohomology, render_group, torsion_from_pair, torsion_parts,
};
use toroidal_core::oracle::{
    field_cohomology, fixed_subcomplex, integral_cohomology, parse_complex, product_case, quotient_complex,
    rational_alpha_oracle, regularize, verify_case, Mode, TorusCase, DEFAULT_SIMPLEX_LIMIT,
};
use toroidal_core::{Error, LatticeType, Prime, Result};

/// Environment variable capping the size of complexes handed to the integral solver.
const LIMIT_VAR: &str = "TOROIDAL_MAX_SIMPLICES";

#[derive(Parser)]
#[command(name = "toroidal", version, about = "Cohomology of toroidal orbifolds T^n/(Z/p)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cohomology of the quotient for a lattice type (r,s,t).
    Cohomology {
        #[arg(long)]
        p: u64,
        /// Lattice type as r,s,t.
        #[arg(long = "type", value_parser = parse_type)]
        lattice_type: (usize, usize, usize),
        /// Highest degree to print (default: the torus dimension).
        #[arg(long)]
        max_degree: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
        /// Also print the equivariant cohomology.
        #[arg(long)]
        equivariant: bool,
        /// Print the intermediate torsion series.
        #[arg(long)]
        debug: bool,
    },
    /// Classify an integral matrix of order p and print the quotient's cohomology.
    Classify {
        file: PathBuf,
        /// Overrides a `# p=` line in the file.
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        max_degree: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
        /// Recompute the free ranks from invariants of exterior powers.
        #[arg(long, value_enum)]
        verify: Option<Verify>,
    },
    /// Build a triangulated torus with a Z/p action and compare its quotient with the formula.
    Oracle {
        #[arg(long, value_enum)]
        case: CaseKind,
        /// Number of sign circles.
        #[arg(long, default_value_t = 1)]
        r: usize,
        #[arg(long, default_value_t = 2)]
        p: u64,
        /// Number of cyclic blocks.
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Product factors, e.g. `sign:2,trivial`.
        #[arg(long)]
        factors: Option<String>,
        /// Edges per circle in cyclic factors.
        #[arg(long, alias = "subdivisions", default_value_t = 3)]
        segments: usize,
        /// Side of the hexagonal grid.
        #[arg(long, default_value_t = 3)]
        grid: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Integral)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Cohomology of a complex file, or of its quotient by the listed action.
    Complex {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Integral)]
        mode: ModeArg,
        /// Take the quotient by the action in the file first.
        #[arg(long)]
        quotient: bool,
        /// Field characteristics for field mode (0 means Q).
        #[arg(long, value_delimiter = ',', default_value = "0")]
        primes: Vec<u64>,
    },
    /// Tables for every type with r,s,t <= max over several primes.
    Grid {
        #[arg(long, value_delimiter = ',', default_value = "2,3,5")]
        primes: Vec<u64>,
        #[arg(long, default_value_t = 2)]
        max: usize,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Verify {
    Rational,
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseKind {
    Sign,
    Cyclic,
    Hexagonal,
    Product,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Integral,
    Field,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Integral => Mode::Integral,
            ModeArg::Field => Mode::Field,
        }
    }
}

/// Output plus the exit code it should produce.
struct Outcome {
    text: String,
    code: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, code: exit::SUCCESS }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, Error::SizeGate { .. }) {
                eprintln!("hint: raise {LIMIT_VAR} or rerun with --mode field");
            }
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}

fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Cohomology {
            p,
            lattice_type: (r, s, t),
            max_degree,
            format,
            equivariant,
            debug,
        } => {
            let l = LatticeType::new(p, r, s, t)?;
            cmd_cohomology(&l, max_degree.unwrap_or(l.rank()), format, equivariant, debug)
        }
        Command::Classify {
            file,
            p,
            max_degree,
            format,
            verify,
        } => cmd_classify(&file, p, max_degree, format, verify.is_some()),
        Command::Oracle {
            case,
            r,
            p,
            n,
            factors,
            segments,
            grid,
            mode,
            format,
        } => {
            let case = match case {
                CaseKind::Sign => TorusCase::Sign { r },
                CaseKind::Cyclic => TorusCase::Cyclic {
                    p: Prime::new(p)?,
                    n,
                    segments,
                },
                CaseKind::Hexagonal => TorusCase::Hexagonal { grid },
                CaseKind::Product => {
                    let factors = factors
                        .ok_or_else(|| Error::InvalidArgument("--case product needs --factors".into()))?;
                    product_case(Prime::new(p)?, &factors, segments)?
                }
            };
            cmd_oracle(&case, mode.into(), format)
        }
        Command::Complex {
            file,
            mode,
            quotient,
            primes,
        } => cmd_complex(&file, mode, quotient, &primes),
        Command::Grid { primes, max, format } => cmd_grid(&primes, max, format),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))
}

fn simplex_limit() -> Result<usize> {
    match std::env::var(LIMIT_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("{LIMIT_VAR} must be a nonnegative integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_SIMPLEX_LIMIT),
    }
}

fn render_table(l: &LatticeType, max_degree: usize, format: Format, equivariant: bool) -> Result<String> {
    let table = quotient_cohomology(l, max_degree)?;
    // Both routes to the torsion ranks must agree; a mismatch is an internal failure.
    torsion_from_pair(l, max_degree)?;
    let fixed = fixed_point_set(l);
    let eq = if equivariant {
        Some(equivariant_cohomology(l, max_degree)?)
    } else {
        None
    };
    Ok(match format {
        Format::Plain => render::plain_table(l, &table, &fixed, eq.as_ref()),
        Format::Json => TableDoc::new(l, &table, &fixed, eq.as_ref()).to_json() + "\n",
        Format::Csv => render::csv_table(&table),
    })
}

fn cmd_cohomology(
    l: &LatticeType,
    max_degree: usize,
    format: Format,
    equivariant: bool,
    debug: bool,
) -> Result<Outcome> {
    let text = render_table(l, max_degree, format, equivariant)?;
    if debug {
        let (f, g) = torsion_parts(l, max_degree + 1);
        let join = |v: &[num_bigint::BigInt]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
        eprintln!("torsion series f: {}", join(&f));
        eprintln!("torsion series g: {}", join(&g));
    }
    Ok(Outcome::ok(text))
}

fn cmd_classify(
    file: &Path,
    p: Option<u64>,
    max_degree: Option<usize>,
    format: Format,
    verify: bool,
) -> Result<Outcome> {
    let input = parse_matrix_file(&read(file)?)?;
    let p = p
        .or(input.p)
        .ok_or_else(|| Error::InvalidArgument("no prime given: pass --p or add a `# p=` line".into()))?;
    let p = Prime::new(p)?;
    let a = &input.matrix;
    verify_order(a, p)?;
    let l = classify(a, p)?;
    let max_degree = max_degree.unwrap_or(l.rank());

    let mut text = String::new();
    if format == Format::Plain {
        let _ = writeln!(text, "{}", render::plain_type(&l));
    }
    text += &render_table(&l, max_degree, format, false)?;

    let mut code = exit::SUCCESS;
    if verify {
        let table = quotient_cohomology(&l, max_degree)?;
        for (k, g) in table.entries.iter().enumerate() {
            let rational = rational_alpha_oracle(a, k)?;
            let pass = g.free_rank == rational.into();
            if !pass {
                code = exit::INTERNAL;
            }
            // Keep machine-readable formats clean.
            let line = format!(
                "verify k={k}: rank {} vs invariants {rational}  {}",
                g.free_rank,
                render::verdict(pass)
            );
            if format == Format::Plain {
                let _ = writeln!(text, "{line}");
            } else {
                eprintln!("{line}");
            }
        }
    }
    Ok(Outcome { text, code })
}

fn cmd_oracle(case: &TorusCase, mode: Mode, format: Format) -> Result<Outcome> {
    let report = verify_case(case, mode, simplex_limit()?)?;
    if report.fell_back && format == Format::Json {
        eprintln!("note: quotient too large for integral mode, compared Betti numbers instead");
    }
    let text = match format {
        Format::Json => render::json_oracle(&report) + "\n",
        Format::Plain | Format::Csv => render::plain_oracle(&report),
    };
    let code = if report.passed() { exit::SUCCESS } else { exit::INTERNAL };
    Ok(Outcome { text, code })
}

fn cmd_complex(file: &Path, mode: ModeArg, quotient: bool, primes: &[u64]) -> Result<Outcome> {
    let (complex, action) = parse_complex(&read(file)?)?;
    let mut text = String::new();
    let target = if quotient {
        let action = action.ok_or_else(|| Error::InvalidArgument("--quotient needs an action line".into()))?;
        let reg = regularize(&complex, &action, 2)?;
        let (fixed, _) = fixed_subcomplex(&reg.complex, &reg.action);
        let q = quotient_complex(&reg.complex, &reg.action)?;
        let _ = writeln!(
            text,
            "subdivisions: {}; fixed set: {} component(s); quotient: {} simplices",
            reg.subdivisions,
            fixed.components().len(),
            q.simplex_count()
        );
        q
    } else {
        complex
    };
    let _ = writeln!(
        text,
        "f-vector: {:?}; euler characteristic: {}",
        target.f_vector(),
        target.euler_characteristic()
    );
    match mode {
        ModeArg::Integral => {
            for (k, g) in integral_cohomology(&target, simplex_limit()?)?.iter().enumerate() {
                let _ = writeln!(text, "H^{k} = {g}");
            }
        }
        ModeArg::Field => {
            for &q in primes {
                let dims = field_cohomology(&target, q)?;
                let field = if q == 0 { "Q".to_string() } else { format!("F_{q}") };
                let dims: Vec<String> = dims.iter().map(ToString::to_string).collect();
                let _ = writeln!(text, "dim H^k({field}) = {}", dims.join(" "));
            }
        }
    }
    Ok(Outcome::ok(text))
}

fn cmd_grid(primes: &[u64], max: usize, format: Format) -> Result<Outcome> {
    let mut types = Vec::new();
    for &p in primes {
        for r in 0..=max {
            for s in 0..=max {
                for t in 0..=max {
                    types.push(LatticeType::new(p, r, s, t)?);
                }
            }
        }
    }
    // `collect` on an indexed parallel iterator keeps the input order.
    let tables = types
        .par_iter()
        .map(|l| quotient_cohomology(l, l.rank()).map(|table| (l, table)))
        .collect::<Result<Vec<_>>>()?;

    let mut text = String::new();
    match format {
        Format::Plain => {
            for (l, table) in &tables {
                let groups: Vec<String> = table.entries.iter().map(|g| render_group(g, l.p)).collect();
                let _ = writeln!(text, "p={} {}: {}", l.p, render::plain_type(l), groups.join(", "));
            }
        }
        Format::Csv => {
            text.push_str("p,r,s,t,k,free_rank,p_torsion_rank\n");
            for (l, table) in &tables {
                for (k, g) in table.entries.iter().enumerate() {
                    let _ = writeln!(
                        text,
                        "{},{},{},{},{k},{},{}",
                        l.p, l.r, l.s, l.t, g.free_rank, g.torsion_rank
                    );
                }
            }
        }
        Format::Json => {
            let docs: Vec<TableDoc> = tables
                .iter()
                .map(|(l, table)| TableDoc::new(l, table, &fixed_point_set(l), None))
                .collect();
            text = serde_json::to_string_pretty(&docs).expect("serializable") + "\n";
        }
    }
    Ok(Outcome::ok(text))
}
