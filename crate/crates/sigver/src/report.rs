//! Experiment orchestration: runs methods on one pencil, times them and
//! writes CSV rows and a console table.

use std::fmt;
use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::approx::{approx_svd, sym_eigenvalues};
use crate::interval::rounding::dr;
use crate::ivlinalg::{IntervalMatrix, Structure};
use crate::matgen::{fem_assemble, FemProblem, GeneratorSpec};
use crate::mm::{read_matrix_market, MmError};
use crate::verify::{invert_enclosure, Method, MethodOptions, Pencil, SigmaMinBound, VerifyError};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("relative error needs 0 < lo <= hi, got lo = {lo}, hi = {hi}")]
    NonpositiveBound { lo: f64, hi: f64 },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    MatrixMarket(#[from] MmError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("CSV output: {0}")]
    Csv(#[from] csv::Error),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

/// `(hi - lo) / (hi + lo)` for bounds `0 < lo <= hi` of `sigma_min^{-1}`.
pub fn relative_error(lo: f64, hi: f64) -> Result<f64, ReportError> {
    if !(lo > 0.0) || !(lo <= hi) {
        return Err(ReportError::NonpositiveBound { lo, hi });
    }
    Ok((hi - lo) / (hi + lo))
}

/// Relative error of `sigma_min^{-1}` from bounds on `sigma_min`.
pub fn relative_error_from_sigma(sigma_lo: f64, sigma_hi: f64) -> Option<f64> {
    if !(sigma_lo > 0.0) || !sigma_hi.is_finite() {
        return None;
    }
    relative_error(dr::div_down(1.0, sigma_hi), dr::div_up(1.0, sigma_lo)).ok()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    /// A factorization or proof step failed.
    Failed,
    /// The lower bound of `sigma_min` is not positive.
    Inf,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Ok => "ok",
            Status::Failed => "failed",
            Status::Inf => "inf",
        })
    }
}

/// Where the pencil comes from.
#[derive(Debug, Clone)]
pub enum Input {
    Generated { a: GeneratorSpec, b: GeneratorSpec },
    Files { a: PathBuf, b: PathBuf },
    Fem(FemProblem),
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub methods: Vec<Method>,
    pub options: MethodOptions,
    pub input: Input,
    /// The reported time is the best of this many runs.
    pub repetitions: usize,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ReportError> {
        if self.methods.is_empty() {
            return Err(ReportError::Config("at least one method is required".into()));
        }
        if self.repetitions == 0 {
            return Err(ReportError::Config("repetitions must be at least 1".into()));
        }
        let eps = [Some(self.options.epsilon), self.options.epsilon_s1];
        if eps.into_iter().flatten().any(|e| !(e > 0.0 && e < 1.0)) {
            return Err(ReportError::Config("epsilon must lie in (0, 1)".into()));
        }
        Ok(())
    }
}

/// Result of one method on one pencil.
#[derive(Debug, Clone)]
pub struct MethodRow {
    pub n: usize,
    pub nnz_a: usize,
    pub nnz_b: usize,
    pub method: String,
    pub status: Status,
    pub sigma_min_lo: Option<f64>,
    pub sigma_min_hi: Option<f64>,
    pub inv_sigma_min_hi: Option<f64>,
    pub rel_err: Option<f64>,
    pub time_s: f64,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub delta: Option<f64>,
    pub theta: Option<f64>,
    pub tau: Option<f64>,
    pub message: Option<String>,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub n: usize,
    pub complex: bool,
    pub nnz_a: usize,
    pub nnz_b: usize,
    /// Floating-point estimates of the condition numbers of `A` and `B`.
    pub kappa_a: Option<f64>,
    pub kappa_b: Option<f64>,
    pub rows: Vec<MethodRow>,
}

impl RunReport {
    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(|r| r.status == Status::Ok)
    }

    pub fn row(&self, m: Method) -> Option<&MethodRow> {
        self.rows.iter().find(|r| r.method == m.name())
    }

    pub fn write_csv(&self, w: impl std::io::Write) -> Result<(), ReportError> {
        let mut out = csv::Writer::from_writer(w);
        for r in &self.rows {
            out.serialize(CsvRow::from(r))?;
        }
        out.flush()?;
        Ok(())
    }

    /// Fixed-width console table.
    pub fn table(&self) -> String {
        let mut s = format!(
            "n = {}{}  nnz(A) = {}  nnz(B) = {}",
            self.n,
            if self.complex { " (complex)" } else { "" },
            self.nnz_a,
            self.nnz_b
        );
        if let (Some(ka), Some(kb)) = (self.kappa_a, self.kappa_b) {
            s += &format!("  cond(A) ~ {ka:.2e}  cond(B) ~ {kb:.2e}");
        }
        s += &format!(
            "\n{:<6} {:<7} {:>22} {:>22} {:>14} {:>10} {:>10}\n",
            "method", "status", "sigma_min lower", "sigma_min upper", "1/sigma_min <=", "rel.err", "time [s]"
        );
        let opt = |x: Option<f64>, p: usize| x.map_or("-".to_string(), |v| format!("{v:.p$e}"));
        for r in &self.rows {
            s += &format!(
                "{:<6} {:<7} {:>22} {:>22} {:>14} {:>10} {:>10.4}\n",
                r.method,
                r.status.to_string(),
                opt(r.sigma_min_lo, 15),
                opt(r.sigma_min_hi, 15),
                r.inv_sigma_min_hi.map_or("-".into(), |v| format!("{v:.6}")),
                opt(r.rel_err, 2),
                r.time_s
            );
            if let Some(m) = &r.message {
                s += &format!("       note: {m}\n");
            }
        }
        s
    }
}

/// CSV view with shortest round-trip number formatting.
#[derive(Serialize)]
struct CsvRow<'a> {
    n: usize,
    #[serde(rename = "nnz_A")]
    nnz_a: usize,
    #[serde(rename = "nnz_B")]
    nnz_b: usize,
    method: &'a str,
    status: Status,
    sigma_min_lo: String,
    sigma_min_hi: String,
    inv_sigma_min_hi: String,
    rel_err: String,
    time_s: String,
    alpha: String,
    beta: String,
    delta: String,
    theta: String,
    tau: String,
}

fn num(x: Option<f64>) -> String {
    x.map_or(String::new(), |v| format!("{v:e}"))
}

impl<'a> From<&'a MethodRow> for CsvRow<'a> {
    fn from(r: &'a MethodRow) -> Self {
        Self {
            n: r.n,
            nnz_a: r.nnz_a,
            nnz_b: r.nnz_b,
            method: &r.method,
            status: r.status,
            sigma_min_lo: num(r.sigma_min_lo),
            sigma_min_hi: num(r.sigma_min_hi),
            inv_sigma_min_hi: num(r.inv_sigma_min_hi),
            rel_err: num(r.rel_err),
            time_s: format!("{:e}", r.time_s),
            alpha: num(r.alpha),
            beta: num(r.beta),
            delta: num(r.delta),
            theta: num(r.theta),
            tau: num(r.tau),
        }
    }
}

/// Builds the pencil described by `input`.
pub fn load_pencil(input: &Input) -> Result<Pencil, ReportError> {
    match input {
        Input::Generated { a, b } => {
            if !b.kind.is_symmetric() {
                return Err(ReportError::Config(format!("generator '{}' does not produce a symmetric B", b.kind)));
            }
            if a.n != b.n {
                return Err(ReportError::Config("A and B sizes differ".into()));
            }
            let am = IntervalMatrix::from_point(a.generate());
            let bm = IntervalMatrix::from_point(b.generate())
                .with_structure(Structure::Hermitian)
                .map_err(VerifyError::from)?;
            Ok(Pencil::real(am, bm)?)
        }
        Input::Files { a, b } => {
            let am = read_matrix_market(a)?;
            let bm = read_matrix_market(b)?;
            if !bm.is_hermitian() {
                return Err(ReportError::Config("B must carry a symmetric or hermitian header".into()));
            }
            if am.is_complex() || bm.is_complex() {
                Ok(Pencil::complex(am.to_complex_interval()?, bm.to_complex_interval()?)?)
            } else {
                Ok(Pencil::real(am.to_interval()?, bm.to_interval()?)?)
            }
        }
        Input::Fem(p) => {
            if p.m == 0 {
                return Err(ReportError::Config("FEM grid size must be positive".into()));
            }
            Ok(fem_assemble(p).map_err(VerifyError::from)?.pencil()?)
        }
    }
}

fn status_of_error(e: &VerifyError) -> Status {
    match e {
        VerifyError::NonpositiveLowerBound { .. } => Status::Inf,
        _ => Status::Failed,
    }
}

fn evaluate(pencil: &Pencil, method: Method, opts: &MethodOptions) -> Result<SigmaMinBound, VerifyError> {
    match method {
        Method::D => {
            let enc = pencil.all_singular_values(opts.delta_variant)?;
            // a nonpositive smallest lower bound makes sigma_min^{-1} unbounded
            invert_enclosure(&enc)?;
            let (lo, hi) = enc.sigma_min().unwrap_or((0.0, f64::INFINITY));
            let mut b = SigmaMinBound::empty(Method::D);
            b.status = crate::verify::BoundStatus::Verified;
            b.lower = lo;
            b.upper = Some(hi);
            b.alpha = Some(enc.alpha);
            b.beta = Some(enc.beta);
            b.delta = Some(enc.delta);
            Ok(b)
        }
        m => pencil.sigma_min(m, opts),
    }
}

/// Runs one method `reps` times on `pencil` and reports the fastest run.
pub fn run_method(pencil: &Pencil, method: Method, opts: &MethodOptions, reps: usize) -> MethodRow {
    let (nnz_a, nnz_b) = pencil.nnz();
    let mut best = f64::INFINITY;
    let mut result = None;
    for _ in 0..reps.max(1) {
        let t0 = Instant::now();
        let r = evaluate(pencil, method, opts);
        best = best.min(t0.elapsed().as_secs_f64());
        result = Some(r);
    }
    let mut row = MethodRow {
        n: pencil.dim(),
        nnz_a,
        nnz_b,
        method: method.name().to_string(),
        status: Status::Failed,
        sigma_min_lo: None,
        sigma_min_hi: None,
        inv_sigma_min_hi: None,
        rel_err: None,
        time_s: best,
        alpha: None,
        beta: None,
        delta: None,
        theta: None,
        tau: None,
        message: None,
    };
    match result.expect("at least one repetition") {
        Ok(b) => {
            row.alpha = b.alpha;
            row.beta = b.beta;
            row.delta = b.delta;
            if b.is_verified() {
                row.status = Status::Ok;
                row.sigma_min_lo = Some(b.lower);
                row.sigma_min_hi = b.upper;
                row.inv_sigma_min_hi = b.inv_upper();
                row.rel_err = b.upper.and_then(|hi| relative_error_from_sigma(b.lower, hi));
                row.theta = b.theta;
                row.tau = b.tau;
            } else {
                row.status = if method == Method::D { Status::Inf } else { Status::Failed };
                row.message = Some("verification inconclusive".into());
            }
        }
        Err(e) => {
            row.status = status_of_error(&e);
            row.message = Some(e.to_string());
        }
    }
    row
}

fn condition_estimates(p: &Pencil) -> (Option<f64>, Option<f64>) {
    const LIMIT: usize = 1200;
    let (a, b) = p.real_pair();
    if a.rows() > LIMIT {
        return (None, None);
    }
    let ka = approx_svd(a.mid()).ok().map(|s| s.s[0] / s.s[s.s.len() - 1]);
    let kb = sym_eigenvalues(b.mid()).ok().map(|e| e[e.len() - 1].abs() / e[0].abs());
    (ka, kb)
}

/// Executes every configured method on the configured pencil.
pub fn run(config: &RunConfig) -> Result<RunReport, ReportError> {
    config.validate()?;
    let pencil = load_pencil(&config.input)?;
    let report = run_on(&pencil, &config.methods, &config.options, config.repetitions);
    if let Some(path) = &config.output {
        report.write_csv(std::fs::File::create(path)?)?;
    }
    Ok(report)
}

/// Like [`run`] for an already assembled pencil.
pub fn run_on(pencil: &Pencil, methods: &[Method], opts: &MethodOptions, reps: usize) -> RunReport {
    let (nnz_a, nnz_b) = pencil.nnz();
    let (kappa_a, kappa_b) = condition_estimates(pencil);
    RunReport {
        n: pencil.dim(),
        complex: pencil.is_complex(),
        nnz_a,
        nnz_b,
        kappa_a,
        kappa_b,
        rows: methods.iter().map(|&m| run_method(pencil, m, opts, reps)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgen::GenKind;

    #[test]
    fn relative_error_examples() {
        assert_eq!(relative_error(1.0, 1.0).unwrap(), 0.0);
        assert_eq!(relative_error(1.0, 3.0).unwrap(), 0.5);
        assert!(relative_error(0.0, 1.0).is_err());
        assert!(relative_error(2.0, 1.0).is_err());
    }

    #[test]
    fn identity_run_contains_one() {
        let spec = GeneratorSpec::new(GenKind::Identity, 5, 1.0, 0);
        let cfg = RunConfig {
            methods: Method::ALL.to_vec(),
            options: MethodOptions::default(),
            input: Input::Generated { a: spec, b: spec },
            repetitions: 2,
            output: None,
        };
        let rep = run(&cfg).unwrap();
        assert!(rep.all_ok(), "{}", rep.table());
        for r in &rep.rows {
            assert!(r.sigma_min_lo.unwrap() <= 1.0);
            if let Some(hi) = r.sigma_min_hi {
                assert!(hi >= 1.0);
            }
        }
        let mut buf = Vec::new();
        rep.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("n,nnz_A,nnz_B,method,status,sigma_min_lo,sigma_min_hi,inv_sigma_min_hi,rel_err,time_s,alpha,beta,delta,theta,tau"));
    }

    #[test]
    fn rejects_empty_method_list() {
        let spec = GeneratorSpec::new(GenKind::Identity, 2, 1.0, 0);
        let cfg = RunConfig {
            methods: vec![],
            options: MethodOptions::default(),
            input: Input::Generated { a: spec, b: spec },
            repetitions: 1,
            output: None,
        };
        assert!(matches!(run(&cfg), Err(ReportError::Config(_))));
    }
}
