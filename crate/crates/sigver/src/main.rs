use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sigver::matgen::{fem_assemble, FemProblem, GenKind, GeneratorSpec};
use sigver::mm::{write_matrix_market, MmFormat, MmMatrix, MmSymmetry};
use sigver::oracle::{oracle_singular_values, oracle_singular_values_complex};
use sigver::report::{load_pencil, run, run_on, Input, RunConfig, RunReport};
use sigver::verify::{DeltaVariant, Method, MethodOptions, DEFAULT_EPSILON};
use sigver::DenseMatrix;

#[derive(Parser)]
#[command(name = "sigver", version, about = "Verified singular value bounds for R^{-H} A R^{-1}, B = R^H R")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a test matrix (or FEM pair) and write it in Matrix Market format.
    Gen(GenArgs),
    /// Verify bounds on one pencil with the selected methods.
    Verify(VerifyArgs),
    /// Sweep condition numbers and report best-of-k timings per method.
    Bench(BenchArgs),
    /// High-precision reference singular values of a pencil.
    Oracle(OracleArgs),
}

#[derive(Args, Clone)]
struct InputArgs {
    /// Matrix Market file for A.
    #[arg(long = "mm-a", requires = "mm_b")]
    mm_a: Option<PathBuf>,
    /// Matrix Market file for B (symmetric or hermitian header).
    #[arg(long = "mm-b", requires = "mm_a")]
    mm_b: Option<PathBuf>,
    /// FEM pair: m,R,c_re,c_im (n = m^2).
    #[arg(long, value_parser = parse_fem, conflicts_with_all = ["mm_a", "mm_b"])]
    fem: Option<FemProblem>,
    /// Generator for A.
    #[arg(long, default_value = "randn")]
    a_kind: GenKind,
    /// Generator for B (must be symmetric).
    #[arg(long, default_value = "shifted_sym")]
    b_kind: GenKind,
    #[arg(long, short, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 1e3)]
    kappa_a: f64,
    #[arg(long, default_value_t = 1e2)]
    kappa_b: f64,
    /// Seed for A; B uses seed + 1.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl InputArgs {
    fn input(&self) -> Input {
        if let (Some(a), Some(b)) = (&self.mm_a, &self.mm_b) {
            Input::Files { a: a.clone(), b: b.clone() }
        } else if let Some(p) = self.fem {
            Input::Fem(p)
        } else {
            Input::Generated {
                a: GeneratorSpec::new(self.a_kind, self.n, self.kappa_a, self.seed),
                b: GeneratorSpec::new(self.b_kind, self.n, self.kappa_b, self.seed.wrapping_add(1)),
            }
        }
    }
}

#[derive(Args, Clone)]
struct MethodArgs {
    /// Comma-separated methods: p, d, s1, s2.
    #[arg(long, value_delimiter = ',', default_value = "p,d,s1,s2")]
    method: Vec<Method>,
    #[arg(long, default_value = "d1")]
    delta_variant: DeltaVariant,
    /// Shrink factor for S1 and S2, in (0, 1).
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    /// Separate shrink factor for S1; defaults to `--epsilon`.
    #[arg(long)]
    epsilon_s1: Option<f64>,
    /// CSV output path.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl MethodArgs {
    fn options(&self) -> MethodOptions {
        MethodOptions { epsilon: self.epsilon, epsilon_s1: self.epsilon_s1, delta_variant: self.delta_variant }
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    methods: MethodArgs,
    /// Runs per method; the fastest is reported.
    #[arg(long, default_value_t = 1)]
    reps: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Vary {
    /// randsvd A with the given condition numbers, shifted symmetric B.
    A,
    /// Gaussian A, SPD randsvd B with the given condition numbers.
    B,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, short, default_value_t = 200)]
    n: usize,
    /// Which matrix gets the prescribed condition numbers.
    #[arg(long, value_enum, default_value = "a")]
    vary: Vary,
    #[arg(long, value_delimiter = ',', default_value = "1e1,1e3,1e6,1e9,1e12")]
    kappas: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    reps: usize,
    #[command(flatten)]
    methods: MethodArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum MmLayout {
    Coordinate,
    Array,
}

#[derive(Args)]
struct GenArgs {
    /// Generator (ignored with --fem).
    #[arg(long, default_value = "randn")]
    kind: GenKind,
    #[arg(long, short, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 1e3)]
    kappa: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// FEM pair m,R,c_re,c_im; writes A to --out and B to --out-b.
    #[arg(long, value_parser = parse_fem, requires = "out_b")]
    fem: Option<FemProblem>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    out_b: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "coordinate")]
    format: MmLayout,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Working precision in bits (checked against twice as many).
    #[arg(long, default_value_t = 128)]
    bits: u32,
}

fn parse_fem(s: &str) -> Result<FemProblem, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err("expected m,R,c_re,c_im".into());
    }
    let m: usize = parts[0].parse().map_err(|_| format!("invalid m '{}'", parts[0]))?;
    if m == 0 {
        return Err("m must be positive".into());
    }
    let f = |t: &str| t.parse::<f64>().map_err(|_| format!("invalid number '{t}'"));
    Ok(FemProblem::new(m, f(parts[1])?, f(parts[2])?, f(parts[3])?))
}

const EXIT_INCONCLUSIVE: u8 = 1;
const EXIT_INPUT: u8 = 2;

fn finish(reports: &[RunReport]) -> ExitCode {
    if reports.iter().all(RunReport::all_ok) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_INCONCLUSIVE)
    }
}

fn input_error(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(EXIT_INPUT)
}

fn cmd_verify(a: VerifyArgs) -> ExitCode {
    let cfg = RunConfig {
        methods: a.methods.method.clone(),
        options: a.methods.options(),
        input: a.input.input(),
        repetitions: a.reps,
        output: a.methods.out.clone(),
    };
    match run(&cfg) {
        Ok(rep) => {
            print!("{}", rep.table());
            finish(&[rep])
        }
        Err(e) => input_error(e),
    }
}

fn cmd_bench(a: BenchArgs) -> ExitCode {
    if a.methods.method.is_empty() || a.reps == 0 {
        return input_error("need at least one method and one repetition");
    }
    let mut reports = Vec::new();
    for (k, &kappa) in a.kappas.iter().enumerate() {
        if !(kappa >= 1.0) {
            return input_error(format!("condition number {kappa} is below 1"));
        }
        let seed = a.seed.wrapping_add(2 * k as u64);
        let (sa, sb) = match a.vary {
            Vary::A => (
                GeneratorSpec::new(GenKind::Randsvd, a.n, kappa, seed),
                GeneratorSpec::new(GenKind::ShiftedSym, a.n, 1.0, seed + 1),
            ),
            Vary::B => (
                GeneratorSpec::new(GenKind::Randn, a.n, 1.0, seed),
                GeneratorSpec::new(GenKind::SpdRandsvd, a.n, kappa, seed + 1),
            ),
        };
        let pencil = match load_pencil(&Input::Generated { a: sa, b: sb }) {
            Ok(p) => p,
            Err(e) => return input_error(e),
        };
        let rep = run_on(&pencil, &a.methods.method, &a.methods.options(), a.reps);
        println!("kappa = {kappa:e}");
        print!("{}", rep.table());
        reports.push(rep);
    }
    if let Some(path) = &a.methods.out {
        let file = match std::fs::File::create(path) {
            Ok(f) => f,
            Err(e) => return input_error(e),
        };
        let mut w = std::io::BufWriter::new(file);
        for (k, rep) in reports.iter().enumerate() {
            let mut buf = Vec::new();
            if let Err(e) = rep.write_csv(&mut buf) {
                return input_error(e);
            }
            let text = String::from_utf8_lossy(&buf);
            // one header for the whole sweep
            let body = if k == 0 { &text[..] } else { text.split_once('\n').map_or("", |x| x.1) };
            if let Err(e) = w.write_all(body.as_bytes()) {
                return input_error(e);
            }
        }
    }
    finish(&reports)
}

fn cmd_gen(a: GenArgs) -> ExitCode {
    let fmt = match a.format {
        MmLayout::Coordinate => MmFormat::Coordinate,
        MmLayout::Array => MmFormat::Array,
    };
    let result = if let Some(p) = a.fem {
        fem_assemble(&p)
            .map_err(|e| e.to_string())
            .and_then(|pair| {
                let re = pair.a.re().mid().clone();
                let a_mm = if pair.is_real() {
                    MmMatrix::real(re, MmSymmetry::General)
                } else {
                    MmMatrix::complex(re, pair.a.im().mid().clone(), MmSymmetry::General)
                };
                let b_mm = MmMatrix::real(pair.b.mid().clone(), MmSymmetry::Symmetric);
                write_matrix_market(&a_mm, &a.out, fmt).map_err(|e| e.to_string())?;
                write_matrix_market(&b_mm, a.out_b.as_ref().expect("checked by clap"), fmt).map_err(|e| e.to_string())
            })
    } else {
        if a.n == 0 || a.kappa < 1.0 {
            return input_error("n must be positive and kappa at least 1");
        }
        let m: DenseMatrix = GeneratorSpec::new(a.kind, a.n, a.kappa, a.seed).generate();
        let sym = if a.kind.is_symmetric() { MmSymmetry::Symmetric } else { MmSymmetry::General };
        write_matrix_market(&MmMatrix::real(m, sym), &a.out, fmt).map_err(|e| e.to_string())
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => input_error(e),
    }
}

fn cmd_oracle(a: OracleArgs) -> ExitCode {
    let pencil = match load_pencil(&a.input.input()) {
        Ok(p) => p,
        Err(e) => return input_error(e),
    };
    let (am, bm) = pencil.real_pair();
    let res = if let sigver::verify::Pencil::Complex { a: ca, b: cb, .. } = &pencil {
        let to = |m: &sigver::ivlinalg::ComplexIntervalMatrix| sigver::matgen::ComplexDense {
            re: m.re().mid().clone(),
            im: m.im().mid().clone(),
        };
        oracle_singular_values_complex(&to(ca), &to(cb), a.bits)
    } else {
        oracle_singular_values(am.mid(), bm.mid(), a.bits)
    };
    match res {
        Ok(v) => {
            println!("# {} singular values, agreement checked at {} bits", v.len(), v.bits);
            for x in v.values.iter() {
                println!("{x:.34e}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => input_error(e),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Oracle(a) => cmd_oracle(a),
    }
}
