//! Command-line front end and the JSON file formats it reads and writes.
//!
//! Candidate indices in every file are 0-based, the same as the library.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::comparison::{
    assemble_povm, build_m1, build_m2_pair, build_m2_product, build_maximal, check_conditions,
    reduce_candidates, ConditionReport, MeasurementOperator, OperatorKind, Provenance,
};
use crate::error::Error;
use crate::linalg::{ComplexMatrix, C64};
use crate::oracle::{
    clamp_probability, decide, probability_table, verify_nontrivial, verify_unambiguous,
    NontrivialityCheck, TupleClass, UnambiguityCheck,
};
use crate::states::{builtin, Candidate, CandidateSet, DensityMatrix, BUILTIN_NAMES};
use crate::tolerance::{Config, Tolerances, DEFAULT_CAP};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

/// A failed invocation: exit code plus message.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn internal(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INTERNAL,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CapExceeded { .. } => EXIT_CAP,
            _ => EXIT_INPUT,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

// ---------------------------------------------------------------------------
// File formats

/// A complex number as `[re, im]`.
pub type JsonComplex = [f64; 2];
pub type JsonMatrix = Vec<Vec<JsonComplex>>;

pub fn matrix_to_json(m: &ComplexMatrix) -> JsonMatrix {
    m.to_rows()
        .into_iter()
        .map(|row| row.into_iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

pub fn matrix_from_json(rows: &[Vec<JsonComplex>]) -> crate::Result<ComplexMatrix> {
    let rows: Vec<Vec<C64>> = rows
        .iter()
        .map(|r| r.iter().map(|&[re, im]| C64::new(re, im)).collect())
        .collect();
    ComplexMatrix::from_rows(&rows)
}

fn vector_from_json(v: &[JsonComplex]) -> Vec<C64> {
    v.iter().map(|&[re, im]| C64::new(re, im)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleEntry {
    pub weights: Vec<f64>,
    pub vectors: Vec<Vec<JsonComplex>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateBody {
    Matrix(JsonMatrix),
    Ensemble(EnsembleEntry),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateEntry {
    pub label: String,
    #[serde(flatten)]
    pub body: StateBody,
}

/// On-disk candidate set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateSetFile {
    pub schema_version: u32,
    pub dim: usize,
    pub states: Vec<StateEntry>,
}

impl CandidateSetFile {
    pub fn from_set(set: &CandidateSet) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            dim: set.dim(),
            states: set
                .candidates()
                .iter()
                .map(|c| StateEntry {
                    label: c.label.clone(),
                    body: StateBody::Matrix(matrix_to_json(c.state.matrix())),
                })
                .collect(),
        }
    }

    pub fn to_set(&self, tol: &Tolerances) -> crate::Result<CandidateSet> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::ShapeMismatch(format!(
                "unsupported schema_version {}",
                self.schema_version
            )));
        }
        let mut candidates = Vec::with_capacity(self.states.len());
        for entry in &self.states {
            let wrap = |e: Error| Error::InvalidState {
                label: entry.label.clone(),
                source: Box::new(e),
            };
            let state = match &entry.body {
                StateBody::Matrix(rows) => {
                    let m = matrix_from_json(rows).map_err(wrap)?;
                    DensityMatrix::validate(m, tol).map_err(wrap)?
                }
                StateBody::Ensemble(e) => {
                    let vectors: Vec<Vec<C64>> =
                        e.vectors.iter().map(|v| vector_from_json(v)).collect();
                    DensityMatrix::from_ensemble(&e.weights, &vectors, tol).map_err(wrap)?
                }
            };
            if state.dim() != self.dim {
                return Err(wrap(Error::DimensionMismatch {
                    expected: self.dim,
                    found: state.dim(),
                }));
            }
            candidates.push(Candidate {
                label: entry.label.clone(),
                state,
            });
        }
        CandidateSet::new(candidates, tol)
    }
}

/// On-disk measurement operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorFile {
    pub schema_version: u32,
    pub n: usize,
    pub dim: usize,
    pub provenance: Provenance,
    pub matrix: JsonMatrix,
}

impl OperatorFile {
    pub fn from_operator(m: &MeasurementOperator) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            n: m.n(),
            dim: m.dim(),
            provenance: m.provenance(),
            matrix: matrix_to_json(m.matrix()),
        }
    }

    pub fn to_operator(&self, tol: &Tolerances) -> crate::Result<MeasurementOperator> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::ShapeMismatch(format!(
                "unsupported schema_version {}",
                self.schema_version
            )));
        }
        let m = matrix_from_json(&self.matrix)?;
        MeasurementOperator::new(self.n, self.dim, m, self.provenance, tol)
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

pub fn read_candidate_set(path: &Path, tol: &Tolerances) -> CliResult<CandidateSet> {
    let file: CandidateSetFile = read_json(path)?;
    file.to_set(tol)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn write_output(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
        }
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::internal(e.to_string())),
    }
}

// ---------------------------------------------------------------------------
// Reports

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TupleReport {
    pub indices: Vec<usize>,
    pub labels: Vec<String>,
}

impl TupleReport {
    fn new(t: &TupleClass, set: &CandidateSet) -> Self {
        Self {
            indices: t.indices().to_vec(),
            labels: t
                .indices()
                .iter()
                .map(|&i| set.label(i).to_string())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputEcho {
    pub dim: usize,
    pub k: usize,
    pub n: usize,
    pub labels: Vec<String>,
    pub tolerances: Tolerances,
    pub cap: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionReport {
    /// Indices of the reduced candidates.
    pub survivors: Vec<usize>,
    pub n_at_least_k: bool,
    pub n_at_least_reduced: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExistenceReport {
    pub exists: bool,
    pub maximal_rank: usize,
    pub best_probability: f64,
    pub best_tuple: Option<TupleReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExistenceDecisions {
    pub m1: ExistenceReport,
    pub m2: ExistenceReport,
    /// Both outcomes available at once.
    pub both: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorReport {
    pub provenance: Provenance,
    pub kind: OperatorKind,
    pub rank: usize,
    pub idempotence_residual: f64,
    pub unambiguous: bool,
    pub worst_forbidden_probability: f64,
    pub worst_forbidden_tuple: Option<TupleReport>,
    pub nontrivial: bool,
    pub best_probability: f64,
    pub best_tuple: Option<TupleReport>,
    pub best_pairwise_distinct_probability: Option<f64>,
    pub best_pairwise_distinct_tuple: Option<TupleReport>,
}

impl OperatorReport {
    pub fn new(
        m: &MeasurementOperator,
        kind: OperatorKind,
        unamb: &UnambiguityCheck,
        nontriv: &NontrivialityCheck,
        set: &CandidateSet,
        tol: &Tolerances,
    ) -> Self {
        let tuple = |t: &Option<TupleClass>| t.as_ref().map(|t| TupleReport::new(t, set));
        Self {
            provenance: m.provenance(),
            kind,
            rank: m.rank(tol),
            idempotence_residual: m.idempotence_residual(),
            unambiguous: unamb.unambiguous,
            worst_forbidden_probability: clamp_probability(unamb.worst_residual),
            worst_forbidden_tuple: tuple(&unamb.worst_tuple),
            nontrivial: nontriv.nontrivial,
            best_probability: clamp_probability(nontriv.best_probability),
            best_tuple: tuple(&nontriv.best_tuple),
            best_pairwise_distinct_probability: nontriv
                .best_distinct_probability
                .map(clamp_probability),
            best_pairwise_distinct_tuple: tuple(&nontriv.best_distinct_tuple),
        }
    }

    pub fn passed(&self) -> bool {
        self.unambiguous && self.nontrivial
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedConstruction {
    pub provenance: Provenance,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PovmReport {
    pub m1: Provenance,
    pub m2: Provenance,
    pub alpha: f64,
    pub beta: f64,
    pub inconclusive_min_eigenvalue: f64,
    /// max over tuples of |P(M1') + P(M2') + P(M?) - 1|
    pub probability_sum_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    /// Oracle M1 decision equals the M1 condition.
    pub m1_iff: bool,
    /// An existing M2 implies the necessary condition.
    pub m2_necessity: bool,
    /// Both outcomes exist iff the combined condition holds.
    pub combined: bool,
}

impl ConsistencyReport {
    fn all(&self) -> bool {
        self.m1_iff && self.m2_necessity && self.combined
    }
}

/// Everything `analyze` computes for one candidate set and tuple size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub input: InputEcho,
    pub conditions: ConditionsJson,
    pub reduction: ReductionReport,
    pub existence: ExistenceDecisions,
    pub operators: Vec<OperatorReport>,
    pub skipped: Vec<SkippedConstruction>,
    pub povm: PovmReport,
    pub consistency: ConsistencyReport,
}

/// Serialized form of [`ConditionReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionsJson {
    pub per_candidate: Vec<CandidateConditionsJson>,
    pub m1_condition: bool,
    pub m1_witnesses: Vec<usize>,
    pub m2_necessary: bool,
    pub m2_necessary_violations: Vec<usize>,
    pub m2_structural: bool,
    pub m2_structural_witness: Option<usize>,
    pub combined: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateConditionsJson {
    pub index: usize,
    pub label: String,
    pub support_dim: usize,
    pub others_dim: usize,
    pub not_covered_by_others: bool,
    pub others_not_inside: bool,
    pub covered_residual: f64,
    pub inside_residual: f64,
}

impl From<&ConditionReport> for ConditionsJson {
    fn from(r: &ConditionReport) -> Self {
        Self {
            per_candidate: r
                .per_candidate
                .iter()
                .map(|c| CandidateConditionsJson {
                    index: c.index,
                    label: c.label.clone(),
                    support_dim: c.support_dim,
                    others_dim: c.others_dim,
                    not_covered_by_others: c.not_covered_by_others,
                    others_not_inside: c.others_not_inside,
                    covered_residual: c.covered_residual,
                    inside_residual: c.inside_residual,
                })
                .collect(),
            m1_condition: r.m1_condition.holds,
            m1_witnesses: r.m1_condition.witnesses.clone(),
            m2_necessary: r.m2_necessary.holds,
            m2_necessary_violations: r.m2_necessary.violations.clone(),
            m2_structural: r.m2_structural.holds,
            m2_structural_witness: r.m2_structural.witness,
            combined: r.corollary1,
        }
    }
}

fn verify_operator(
    m: &MeasurementOperator,
    kind: OperatorKind,
    set: &CandidateSet,
    cfg: &Config,
) -> CliResult<OperatorReport> {
    let unamb = verify_unambiguous(m, kind.forbidden(), set, cfg)?;
    let nontriv = verify_nontrivial(m, kind.allowed(), set, cfg)?;
    Ok(OperatorReport::new(
        m, kind, &unamb, &nontriv, set, &cfg.tol,
    ))
}

/// Runs every check, decision and construction for `set` at tuple size `n`.
///
/// Errors with exit code 4 when a constructed operator fails its own
/// oracle verification or the decisions contradict the conditions.
pub fn analyze(set: &CandidateSet, n: usize, cfg: &Config) -> CliResult<AnalysisReport> {
    if n < 2 {
        return Err(Error::TupleSize(n).into());
    }
    cfg.check_cap(set.dim(), n)?;
    let tol = &cfg.tol;
    let conditions = check_conditions(set, tol);
    let survivors = reduce_candidates(set, tol);

    let d1 = decide(set, n, OperatorKind::M1, cfg)?;
    let d2 = decide(set, n, OperatorKind::M2, cfg)?;
    let existence_of = |d: &crate::oracle::Decision| ExistenceReport {
        exists: d.exists,
        maximal_rank: d.operator.rank(tol),
        best_probability: clamp_probability(d.check.best_probability),
        best_tuple: d
            .check
            .best_tuple
            .as_ref()
            .map(|t| TupleReport::new(t, set)),
    };
    let existence = ExistenceDecisions {
        m1: existence_of(&d1),
        m2: existence_of(&d2),
        both: d1.exists && d2.exists,
    };

    let mut operators = Vec::new();
    let mut skipped = Vec::new();
    let attempts: [(Provenance, crate::Result<MeasurementOperator>); 3] = [
        (Provenance::M1Eq13, build_m1(set, n, None, cfg)),
        (Provenance::M2ProductEq27, build_m2_product(set, n, cfg)),
        (Provenance::M2PairEq24, build_m2_pair(set, n, cfg)),
    ];
    for (provenance, built) in attempts {
        match built {
            Ok(m) => {
                let kind = provenance.kind().expect("constructions have a kind");
                operators.push(verify_operator(&m, kind, set, cfg)?);
            }
            Err(e @ (Error::ConditionNotMet(_) | Error::TupleTooShort { .. })) => {
                skipped.push(SkippedConstruction {
                    provenance,
                    reason: e.to_string(),
                })
            }
            Err(e) => return Err(e.into()),
        }
    }
    for d in [&d1, &d2] {
        operators.push(verify_operator(&d.operator, d.which, set, cfg)?);
    }

    let povm = assemble_povm(&d1.operator, &d2.operator, tol)?;
    let elements = [povm.m1.matrix(), povm.m2.matrix(), &povm.inconclusive];
    let tables = elements
        .iter()
        .map(|m| probability_table(m, set, n, cfg))
        .collect::<crate::Result<Vec<_>>>()?;
    let probability_sum_residual = (0..tables[0].len())
        .map(|i| (tables.iter().map(|t| t[i].1).sum::<f64>() - 1.0).abs())
        .fold(0.0, f64::max);
    let povm = PovmReport {
        m1: povm.m1.provenance(),
        m2: povm.m2.provenance(),
        alpha: povm.alpha,
        beta: povm.beta,
        inconclusive_min_eigenvalue: povm.inconclusive_min_eigenvalue,
        probability_sum_residual,
    };

    let consistency = ConsistencyReport {
        m1_iff: d1.exists == conditions.m1_condition.holds,
        m2_necessity: !d2.exists || conditions.m2_necessary.holds,
        combined: (d1.exists && d2.exists) == conditions.corollary1,
    };

    let report = AnalysisReport {
        schema_version: SCHEMA_VERSION,
        input: InputEcho {
            dim: set.dim(),
            k: set.k(),
            n,
            labels: set.candidates().iter().map(|c| c.label.clone()).collect(),
            tolerances: *tol,
            cap: cfg.cap,
        },
        conditions: ConditionsJson::from(&conditions),
        reduction: ReductionReport {
            n_at_least_k: n >= set.k(),
            n_at_least_reduced: n >= survivors.len(),
            survivors,
        },
        existence,
        operators,
        skipped,
        povm,
        consistency,
    };

    let failed: Vec<String> = report
        .operators
        .iter()
        .filter(|o| {
            // a maximal operator may legitimately be zero
            if matches!(o.provenance, Provenance::M1Maximal | Provenance::M2Maximal) {
                !o.unambiguous
            } else {
                !o.passed()
            }
        })
        .map(|o| format!("{:?}", o.provenance))
        .collect();
    if !failed.is_empty() {
        return Err(CliError::internal(format!(
            "constructed operators failed oracle verification: {}",
            failed.join(", ")
        )));
    }
    if !report.consistency.all() || report.povm.inconclusive_min_eigenvalue < -tol.neg {
        return Err(CliError::internal(format!(
            "oracle decisions contradict the conditions: {:?}",
            report.consistency
        )));
    }
    Ok(report)
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Human-readable summary table.
pub fn summary(report: &AnalysisReport) -> String {
    let c = &report.conditions;
    let e = &report.existence;
    let rows = [
        (
            "M1 condition: some support outside span of others",
            yes(c.m1_condition),
            "necessary and sufficient for M1",
        ),
        (
            "M2 necessary: no support contains all others",
            yes(c.m2_necessary),
            "necessary for M2",
        ),
        (
            "M2 structural: necessary + M1 condition",
            yes(c.m2_structural),
            "sufficient for M2, any n >= 2",
        ),
        (
            "n >= k",
            yes(report.reduction.n_at_least_k),
            "with M2 necessary: sufficient for M2",
        ),
        (
            "n >= reduced count",
            yes(report.reduction.n_at_least_reduced),
            "product M2 construction feasible",
        ),
        (
            "combined condition",
            yes(c.combined),
            "necessary and sufficient for M1 and M2 together",
        ),
        (
            "M1 exists (oracle)",
            yes(e.m1.exists),
            "maximal operator decision",
        ),
        (
            "M2 exists (oracle)",
            yes(e.m2.exists),
            "maximal operator decision",
        ),
    ];
    let mut out = format!(
        "d = {}, k = {}, n = {}\n{:<52} {:<8} {}\n",
        report.input.dim, report.input.k, report.input.n, "condition", "verdict", "meaning"
    );
    for (name, verdict, meaning) in rows {
        out.push_str(&format!("{name:<52} {verdict:<8} {meaning}\n"));
    }
    for o in &report.operators {
        out.push_str(&format!(
            "operator {:<16} rank {:<5} unambiguous {:<4} best p = {:.6}\n",
            serde_json::to_value(o.provenance)
                .unwrap()
                .as_str()
                .unwrap_or("?"),
            o.rank,
            yes(o.unambiguous),
            o.best_probability
        ));
    }
    out.push_str(&format!(
        "POVM: alpha = {}, beta = {}, min eig(M?) = {:.3e}\n",
        report.povm.alpha, report.povm.beta, report.povm.inconclusive_min_eigenvalue
    ));
    out
}

// ---------------------------------------------------------------------------
// Command line

#[derive(Debug, Parser)]
#[command(
    name = "mixcomp",
    version,
    about = "Unambiguous comparison of mixed quantum states"
)]
pub struct Cli {
    /// Global numerical tolerance.
    #[arg(long, global = true, env = "MIXCOMP_TOL", default_value_t = crate::tolerance::DEFAULT_TOL)]
    pub tol: f64,

    /// Largest composite dimension d^n handled.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    pub cap: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OperatorArg {
    M1,
    M2,
}

impl From<OperatorArg> for OperatorKind {
    fn from(a: OperatorArg) -> Self {
        match a {
            OperatorArg::M1 => OperatorKind::M1,
            OperatorArg::M2 => OperatorKind::M2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Eq13,
    Eq24,
    Eq27,
    Maximal,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every condition, decide existence and verify all constructions.
    Analyze {
        input: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build one measurement operator and write it as JSON.
    Construct {
        input: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        operator: OperatorArg,
        #[arg(long, value_enum)]
        method: MethodArg,
        /// Witness index (0-based) for the M1 product construction.
        #[arg(long)]
        witness: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check an operator file against a candidate set with the oracle.
    Verify {
        input: PathBuf,
        operator: PathBuf,
        /// Outcome the operator stands for; inferred from its provenance
        /// when omitted.
        #[arg(long, value_enum)]
        kind: Option<OperatorArg>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a seeded random candidate set.
    Gen {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: usize,
        /// Comma-separated ranks, one per state.
        #[arg(long, value_delimiter = ',')]
        ranks: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Analyze a built-in example set at n = 2 and n = 3.
    Demo {
        name: String,
        /// Directory receiving the set file and both reports.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub operator: OperatorReport,
    /// Probability of the operator on every tuple, in enumeration order.
    pub probabilities: Vec<TupleProbability>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TupleProbability {
    pub tuple: Vec<usize>,
    pub probability: f64,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    }
}

pub fn run(cli: &Cli) -> CliResult<()> {
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        return Err(CliError::input(format!(
            "--tol must be positive, got {}",
            cli.tol
        )));
    }
    let cfg = Config {
        tol: Tolerances::uniform(cli.tol),
        cap: cli.cap,
    };
    match &cli.command {
        Command::Analyze { input, n, out } => run_analyze(input, *n, out.as_deref(), &cfg),
        Command::Construct {
            input,
            n,
            operator,
            method,
            witness,
            out,
        } => run_construct(
            input,
            *n,
            (*operator).into(),
            *method,
            *witness,
            out.as_deref(),
            &cfg,
        ),
        Command::Verify {
            input,
            operator,
            kind,
            out,
        } => run_verify(input, operator, kind.map(Into::into), out.as_deref(), &cfg),
        Command::Gen {
            d,
            k,
            ranks,
            seed,
            out,
        } => run_gen(*d, *k, ranks, *seed, out.as_deref(), &cfg),
        Command::Demo { name, out_dir } => run_demo(name, out_dir, &cfg),
    }
}

pub fn run_analyze(input: &Path, n: usize, out: Option<&Path>, cfg: &Config) -> CliResult<()> {
    let set = read_candidate_set(input, &cfg.tol)?;
    let report = analyze(&set, n, cfg)?;
    write_output(out, &to_json(&report))?;
    let table = summary(&report);
    if out.is_some() {
        print!("{table}");
    } else {
        eprint!("{table}");
    }
    Ok(())
}

pub fn construct(
    set: &CandidateSet,
    n: usize,
    which: OperatorKind,
    method: MethodArg,
    witness: Option<usize>,
    cfg: &Config,
) -> CliResult<MeasurementOperator> {
    let m = match (which, method) {
        (OperatorKind::M1, MethodArg::Eq13) => build_m1(set, n, witness, cfg)?,
        (OperatorKind::M2, MethodArg::Eq27) => build_m2_product(set, n, cfg)?,
        (OperatorKind::M2, MethodArg::Eq24) => build_m2_pair(set, n, cfg)?,
        (_, MethodArg::Maximal) => build_maximal(set, n, which, cfg)?,
        (which, method) => {
            return Err(CliError::input(format!(
                "method {method:?} does not build {which:?}"
            )))
        }
    };
    Ok(m)
}

fn run_construct(
    input: &Path,
    n: usize,
    which: OperatorKind,
    method: MethodArg,
    witness: Option<usize>,
    out: Option<&Path>,
    cfg: &Config,
) -> CliResult<()> {
    let set = read_candidate_set(input, &cfg.tol)?;
    let m = construct(&set, n, which, method, witness, cfg)?;
    write_output(out, &to_json(&OperatorFile::from_operator(&m)))
}

fn run_verify(
    input: &Path,
    operator: &Path,
    kind: Option<OperatorKind>,
    out: Option<&Path>,
    cfg: &Config,
) -> CliResult<()> {
    let set = read_candidate_set(input, &cfg.tol)?;
    let file: OperatorFile = read_json(operator)?;
    let m = file
        .to_operator(&cfg.tol)
        .map_err(|e| CliError::input(format!("{}: {e}", operator.display())))?;
    if m.dim() != set.dim() {
        return Err(Error::DimensionMismatch {
            expected: set.dim(),
            found: m.dim(),
        }
        .into());
    }
    let kind = kind
        .or_else(|| m.provenance().kind())
        .ok_or_else(|| CliError::input("operator provenance is external; pass --kind m1|m2"))?;
    let report = verify_operator(&m, kind, &set, cfg)?;
    let probabilities = probability_table(m.matrix(), &set, m.n(), cfg)?
        .into_iter()
        .map(|(t, p)| TupleProbability {
            tuple: t.indices().to_vec(),
            probability: clamp_probability(p),
        })
        .collect();
    eprintln!(
        "{:?}: unambiguous {}, non-trivial {} (best p = {})",
        kind,
        yes(report.unambiguous),
        yes(report.nontrivial),
        report.best_probability
    );
    write_output(
        out,
        &to_json(&VerifyReport {
            schema_version: SCHEMA_VERSION,
            operator: report,
            probabilities,
        }),
    )
}

/// Seeded random candidate set as written by `gen`.
pub fn generate(
    d: usize,
    k: usize,
    ranks: &[usize],
    seed: u64,
    tol: &Tolerances,
) -> CliResult<CandidateSet> {
    if ranks.len() != k {
        return Err(CliError::input(format!(
            "{} ranks given for k = {k}",
            ranks.len()
        )));
    }
    Ok(CandidateSet::random(d, ranks, seed, tol)?)
}

fn run_gen(
    d: usize,
    k: usize,
    ranks: &[usize],
    seed: u64,
    out: Option<&Path>,
    cfg: &Config,
) -> CliResult<()> {
    let set = generate(d, k, ranks, seed, &cfg.tol)?;
    write_output(out, &to_json(&CandidateSetFile::from_set(&set)))
}

pub fn run_demo(name: &str, out_dir: &Path, cfg: &Config) -> CliResult<()> {
    let set = builtin(name).ok_or_else(|| {
        CliError::input(format!(
            "unknown demo '{name}', expected one of {}",
            BUILTIN_NAMES.join(", ")
        ))
    })?;
    fs::create_dir_all(out_dir)
        .map_err(|e| CliError::input(format!("{}: {e}", out_dir.display())))?;
    let set_path = out_dir.join(format!("{name}.json"));
    write_output(Some(&set_path), &to_json(&CandidateSetFile::from_set(&set)))?;
    for n in [2, 3] {
        let report = analyze(&set, n, cfg)?;
        let path = out_dir.join(format!("{name}.n{n}.report.json"));
        write_output(Some(&path), &to_json(&report))?;
        println!("== {name}, n = {n} ({})", path.display());
        print!("{}", summary(&report));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{eq26, nested2, orth2};

    #[test]
    fn set_file_round_trip_is_exact() {
        let tol = Tolerances::default();
        let set = CandidateSet::random(3, &[1, 2, 3], 11, &tol).unwrap();
        let text = to_json(&CandidateSetFile::from_set(&set));
        let back: CandidateSetFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_set(&tol).unwrap(), set);
    }

    #[test]
    fn ensemble_entries_parse() {
        let text = r#"{"schema_version": 1, "dim": 2, "states": [
            {"label": "a", "ensemble": {"weights": [1.0], "vectors": [[[1,0],[0,0]]]}},
            {"label": "b", "matrix": [[[0.5,0],[0,0]],[[0,0],[0.5,0]]]}
        ]}"#;
        let file: CandidateSetFile = serde_json::from_str(text).unwrap();
        let set = file.to_set(&Tolerances::default()).unwrap();
        assert_eq!(set.label(0), "a");
        assert_eq!(set.state(1), nested2().state(1));
    }

    #[test]
    fn rejection_names_label() {
        let text = r#"{"schema_version": 1, "dim": 2, "states": [
            {"label": "ok", "matrix": [[[1,0],[0,0]],[[0,0],[0,0]]]},
            {"label": "broken", "matrix": [[[1,0],[0,0]],[[0,0],[1,0]]]}
        ]}"#;
        let file: CandidateSetFile = serde_json::from_str(text).unwrap();
        let err = file.to_set(&Tolerances::default()).unwrap_err().to_string();
        assert!(err.contains("broken") && err.contains("trace"), "{err}");
    }

    #[test]
    fn analyze_builtins() {
        let cfg = Config::default();
        let r = analyze(&eq26(), 2, &cfg).unwrap();
        assert!(!r.existence.m2.exists && !r.existence.m1.exists);
        let r = analyze(&eq26(), 3, &cfg).unwrap();
        assert!(r.existence.m2.exists);
        let r = analyze(&orth2(), 2, &cfg).unwrap();
        assert!(r.existence.both && r.conditions.combined);
        assert_eq!(r.povm.alpha, 1.0);
        let r = analyze(&nested2(), 2, &cfg).unwrap();
        assert!(r.existence.m1.exists && !r.existence.m2.exists && !r.conditions.combined);
    }

    #[test]
    fn construct_rejects_mismatched_method() {
        let cfg = Config::default();
        let e = construct(&orth2(), 2, OperatorKind::M1, MethodArg::Eq27, None, &cfg).unwrap_err();
        assert_eq!(e.code, EXIT_INPUT);
    }

    #[test]
    fn cap_maps_to_exit_three() {
        let cfg = Config {
            cap: 8,
            ..Config::default()
        };
        assert_eq!(analyze(&eq26(), 2, &cfg).unwrap_err().code, EXIT_CAP);
    }
}
