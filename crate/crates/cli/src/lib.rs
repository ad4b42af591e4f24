//! Command-line front end: JSON matrices and channels in, JSON reports and
//! optional SVG plots out.

pub mod documents;
mod plot;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use qcomp::channel::{make_buc, pauli, KrausChannel};
use qcomp::codesearch::{find_codes_buc4, multi_unitary_common_code, CodeFamily, FindCodesConfig, SearchBudget, SweepSpec};
use qcomp::matcore::{c, identity, is_unitary, trace, Projection};
use qcomp::numrange::{hermitian_range, normal_hull_membership, unitary4_geometry, RangeResult};
use qcomp::qec::{block_e_positivity, build_recovery, kl_verify, lambda_density_check, verify_recovery};
use qcomp::{CMatrix, Error, ToleranceConfig, C64};
use serde::Serialize;
use sha2::{Digest, Sha256};

use documents::*;

/// Largest recovery deviation accepted by `recover`.
pub const RECOVERY_TOLERANCE: f64 = 1e-8;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Negative(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Negative(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Internal(_) => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NumericalFailure(_) => CliError::Internal(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "qcomp", version, about = "Higher-rank numerical ranges and quantum error correcting codes")]
pub struct Cli {
    /// Override the scalar-compression tolerance.
    #[arg(long, global = true)]
    pub tolerance_scalar: Option<f64>,
    /// Override the eigenvalue clustering tolerance.
    #[arg(long, global = true)]
    pub tolerance_degenerate: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RangeKind {
    Hermitian,
    Unitary,
    Normal,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank-k numerical range of a matrix.
    Range {
        /// Matrix document (JSON).
        #[arg(long)]
        input: PathBuf,
        /// Rank of the compression.
        #[arg(long)]
        k: usize,
        /// Operator class, which selects the algorithm.
        #[arg(long, value_enum, default_value = "hermitian")]
        kind: RangeKind,
        /// Candidate value `re` or `re,im` for the normal hull test.
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        /// Write an SVG plot to this path.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Correctable rank-2 codes of a channel.
    FindCodes {
        /// Channel document (JSON).
        #[arg(long)]
        channel: PathBuf,
        /// Compression-values sampled along a segment-valued range.
        #[arg(long, default_value_t = 11)]
        grid: usize,
        /// Sweep points for the generic two-qubit solver.
        #[arg(long, default_value_t = 10_000)]
        sweep: usize,
        /// Stop the sweep after this many distinct codes.
        #[arg(long, default_value_t = 64)]
        max_codes: usize,
        /// Seed for every random draw.
        #[arg(long)]
        seed: u64,
    },
    /// Knill-Laflamme check of a projection against a channel.
    Verify {
        /// Channel document (JSON).
        #[arg(long)]
        channel: PathBuf,
        /// Projection matrix document (JSON).
        #[arg(long)]
        projection: PathBuf,
    },
    /// Build a recovery channel and test it on random code states.
    Recover {
        /// Channel document (JSON).
        #[arg(long)]
        channel: PathBuf,
        /// Projection matrix document (JSON).
        #[arg(long)]
        projection: PathBuf,
        /// Number of random code states.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        /// Seed for every random draw.
        #[arg(long)]
        seed: u64,
    },
}

/// What a command produced: standard output, standard error and exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn run(cli: &Cli) -> Outcome {
    match dispatch(cli) {
        Ok((stdout, code)) => Outcome { stdout, stderr: String::new(), code },
        Err(e) => Outcome { stdout: String::new(), stderr: format!("qcomp: {e}\n"), code: e.exit_code() },
    }
}

fn tolerances(cli: &Cli) -> Result<ToleranceConfig, CliError> {
    let mut tol = ToleranceConfig::default();
    if let Some(s) = cli.tolerance_scalar {
        tol.eps_scalar = s;
    }
    if let Some(d) = cli.tolerance_degenerate {
        tol.eps_degenerate = d;
    }
    tol.validate().map_err(|e| CliError::Precondition(e.to_string()))?;
    Ok(tol)
}

struct Digest256(Sha256);

impl Digest256 {
    fn new(command: &str) -> Self {
        let mut h = Sha256::new();
        h.update(command.as_bytes());
        Self(h)
    }

    fn field(&mut self, name: &str, bytes: &[u8]) {
        self.0.update((name.len() as u64).to_le_bytes());
        self.0.update(name.as_bytes());
        self.0.update((bytes.len() as u64).to_le_bytes());
        self.0.update(bytes);
    }

    fn finish(self) -> String {
        hex::encode(self.0.finalize())
    }
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))
}

fn parse<T: serde::de::DeserializeOwned>(bytes: &[u8], path: &Path) -> Result<T, CliError> {
    serde_json::from_slice(bytes).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn report<R: Serialize>(command: &str, digest: Digest256, result: R, tol: &ToleranceConfig) -> Result<String, CliError> {
    to_json(&ReportDocument { command: command.to_string(), inputs_digest: digest.finish(), result, tolerances: tol.clone() })
}

fn dispatch(cli: &Cli) -> Result<(String, i32), CliError> {
    let tol = tolerances(cli)?;
    let mut digest = Digest256::new(command_name(&cli.command));
    digest.field("tolerances", &serde_json::to_vec(&tol).expect("tolerances serialize"));
    match &cli.command {
        Command::Range { input, k, kind, lambda, plot } => cmd_range(input, *k, *kind, lambda.as_deref(), plot.as_deref(), digest, &tol),
        Command::FindCodes { channel, grid, sweep, max_codes, seed } => {
            let config = FindCodesConfig { segment_grid: *grid, sweep: SweepSpec { points: *sweep, max_codes: *max_codes } };
            cmd_find_codes(channel, &config, *seed, digest, &tol)
        }
        Command::Verify { channel, projection } => cmd_verify(channel, projection, digest, &tol),
        Command::Recover { channel, projection, samples, seed } => cmd_recover(channel, projection, *samples, *seed, digest, &tol),
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Range { .. } => "range",
        Command::FindCodes { .. } => "find-codes",
        Command::Verify { .. } => "verify",
        Command::Recover { .. } => "recover",
    }
}

fn parse_lambda(s: &str) -> Result<C64, CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|_| CliError::Parse(format!("bad --lambda value `{s}`")));
    match parts.as_slice() {
        [re] => Ok(c(num(re)?, 0.0)),
        [re, im] => Ok(c(num(re)?, num(im)?)),
        _ => Err(CliError::Parse(format!("bad --lambda value `{s}`"))),
    }
}

fn cmd_range(
    input: &Path,
    k: usize,
    kind: RangeKind,
    lambda: Option<&str>,
    plot_path: Option<&Path>,
    mut digest: Digest256,
    tol: &ToleranceConfig,
) -> Result<(String, i32), CliError> {
    let bytes = read(input)?;
    let m = parse::<MatrixDocument>(&bytes, input)?.to_square_matrix()?;
    digest.field("input", &bytes);
    digest.field("k", &k.to_le_bytes());
    digest.field("kind", format!("{kind:?}").as_bytes());
    let (payload, svg) = match kind {
        RangeKind::Hermitian => {
            let r = hermitian_range(&m, k, tol)?;
            let eig = qcomp::matcore::hermitian_eigendecomposition(&m, tol)?;
            (RangePayload::Range(r), plot::hermitian(&eig.real_values(), &r))
        }
        RangeKind::Unitary => {
            let n = m.nrows();
            if n != 4 || k != 2 {
                return Err(CliError::Precondition(format!(
                    "the unitary kind supports 4×4 input with k = 2 (got N = {n}, k = {k})"
                )));
            }
            let g = unitary4_geometry(&m, tol)?;
            let svg = plot::unitary(&g);
            (RangePayload::Range(g.range), svg)
        }
        RangeKind::Normal => {
            let lambda = parse_lambda(lambda.ok_or_else(|| CliError::Parse("--lambda is required for --kind normal".into()))?)?;
            digest.field("lambda", format!("{:?}", (lambda.re.to_bits(), lambda.im.to_bits())).as_bytes());
            let member = normal_hull_membership(&m, k, lambda, tol)?;
            let eig = qcomp::matcore::normal_eigendecomposition(&m, tol)?;
            (RangePayload::Hull(HullMembership { k, lambda, member }), plot::normal(eig.values(), lambda, member))
        }
    };
    let out = report("range", digest, payload, tol)?;
    if let Some(path) = plot_path {
        std::fs::write(path, svg).map_err(|e| CliError::Internal(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok((out, 0))
}

/// A channel loaded from a document.
enum LoadedChannel {
    Buc { v: CMatrix, w: CMatrix, p: f64, kraus: KrausChannel },
    Kraus(KrausChannel),
}

impl LoadedChannel {
    fn kraus(&self) -> &KrausChannel {
        match self {
            LoadedChannel::Buc { kraus, .. } | LoadedChannel::Kraus(kraus) => kraus,
        }
    }
}

fn load_channel(path: &Path, digest: &mut Digest256, tol: &ToleranceConfig) -> Result<LoadedChannel, CliError> {
    let bytes = read(path)?;
    let doc: ChannelDocument = parse(&bytes, path)?;
    digest.field("channel", &bytes);
    let dim = doc.dimension();
    let check = |m: &CMatrix| -> Result<(), CliError> {
        if m.nrows() != dim {
            return Err(CliError::Precondition(format!("operator is {}×{}, channel dimension is {dim}", m.nrows(), m.ncols())));
        }
        Ok(())
    };
    match doc {
        ChannelDocument::Kraus { kraus, .. } => {
            let mut ops = Vec::with_capacity(kraus.len());
            for m in &kraus {
                let op = m.to_square_matrix()?;
                check(&op)?;
                ops.push(op);
            }
            Ok(LoadedChannel::Kraus(KrausChannel::new(ops, tol)?))
        }
        ChannelDocument::Buc { v, w, p, .. } => {
            let (v, w) = (v.to_square_matrix()?, w.to_square_matrix()?);
            check(&v)?;
            check(&w)?;
            let kraus = make_buc(v.clone(), w.clone(), p, tol)?.kraus();
            Ok(LoadedChannel::Buc { v, w, p, kraus })
        }
        ChannelDocument::PauliDemo { model, p, .. } => {
            if dim != 4 {
                return Err(CliError::Precondition(format!("the Pauli demo channels act on two qubits, not dimension {dim}")));
            }
            let w = match model {
                PauliModel::ZZ => pauli::zz(),
                PauliModel::Z1 => pauli::z1(2),
            };
            let kraus = make_buc(identity(4), w.clone(), p, tol)?.kraus();
            Ok(LoadedChannel::Buc { v: identity(4), w, p, kraus })
        }
    }
}

fn load_projection(path: &Path, digest: &mut Digest256, tol: &ToleranceConfig) -> Result<Projection, CliError> {
    let bytes = read(path)?;
    let m = parse::<MatrixDocument>(&bytes, path)?.to_square_matrix()?;
    digest.field("projection", &bytes);
    Ok(Projection::new(m, tol)?)
}

/// `E = √w·U` with `U` unitary, returning `U`.
fn as_scaled_unitary(e: &CMatrix, tol: &ToleranceConfig) -> Option<CMatrix> {
    let w = trace(&(e.adjoint() * e)).re / e.nrows() as f64;
    if w <= 0.0 {
        return None;
    }
    let u = e / c(w.sqrt(), 0.0);
    is_unitary(&u, tol).then_some(u)
}

fn family_document(fam: &CodeFamily) -> FamilyDocument {
    FamilyDocument {
        channel_fingerprint: fam.channel_fingerprint.clone(),
        range: Some(fam.range),
        exhaustive: fam.exhaustive,
        notes: fam.notes.clone(),
        codes: fam
            .codes
            .iter()
            .map(|fc| CodeDocument {
                projection: MatrixDocument::from_matrix(fc.code.projection.matrix()),
                rank: fc.code.rank(),
                compression_values: fc
                    .code
                    .compression_values
                    .iter()
                    .map(|(&(a, b), &value)| CompressionValue { a, b, value })
                    .collect(),
                lambda: MatrixDocument::from_matrix(fc.lambda.entries()),
                max_residual: fc.max_residual,
            })
            .collect(),
    }
}

fn cmd_find_codes(
    path: &Path,
    config: &FindCodesConfig,
    seed: u64,
    mut digest: Digest256,
    tol: &ToleranceConfig,
) -> Result<(String, i32), CliError> {
    let loaded = load_channel(path, &mut digest, tol)?;
    digest.field("grid", &config.segment_grid.to_le_bytes());
    digest.field("sweep", &config.sweep.points.to_le_bytes());
    digest.field("max_codes", &config.sweep.max_codes.to_le_bytes());
    digest.field("seed", &seed.to_le_bytes());
    let kraus = loaded.kraus();

    let buc = match &loaded {
        LoadedChannel::Buc { v, w, p, .. } => Some((v.clone(), w.clone(), *p)),
        LoadedChannel::Kraus(ch) if ch.len() == 2 => {
            let units: Option<Vec<CMatrix>> = ch.ops().iter().map(|e| as_scaled_unitary(e, tol)).collect();
            units.map(|u| {
                let p = trace(&(ch.ops()[0].adjoint() * &ch.ops()[0])).re / ch.dim() as f64;
                (u[0].clone(), u[1].clone(), p)
            })
        }
        LoadedChannel::Kraus(_) => None,
    };

    let doc = if let Some((v, w, p)) = buc {
        if v.nrows() != 4 {
            return Err(CliError::Precondition("code search for bi-unitary channels needs dimension 4".into()));
        }
        let fam = find_codes_buc4(&v, &w, p, config, seed, tol)?;
        if fam.codes.is_empty() {
            return Err(CliError::Internal("no codes found although Λ₂ is non-empty".into()));
        }
        family_document(&fam)
    } else {
        let units: Option<Vec<CMatrix>> = kraus.ops().iter().map(|e| as_scaled_unitary(e, tol)).collect();
        let Some(units) = units else {
            return Err(CliError::Precondition("code search needs a bi-unitary or randomized unitary channel".into()));
        };
        let out = multi_unitary_common_code(&units, 2, &SearchBudget::default(), seed, tol)?;
        let mut notes = vec![format!("{} random trials, best residual {:.3e}", out.trials, out.best_residual)];
        let mut codes = Vec::new();
        if let Some(code) = out.code {
            let report = kl_verify(kraus, &code.projection, tol)?;
            let Some(lambda) = report.lambda else {
                return Err(CliError::Internal("search result failed verification".into()));
            };
            let fam = CodeFamily {
                channel_fingerprint: kraus.fingerprint(),
                codes: vec![qcomp::codesearch::FamilyCode {
                    code: qcomp::codesearch::CodeProjection::for_operators(code.projection, kraus.ops())?,
                    lambda,
                    max_residual: report.max_residual,
                }],
                exhaustive: false,
                notes: Vec::new(),
                range: RangeResult::Empty,
            };
            codes = family_document(&fam).codes;
        } else if out.proven_empty {
            notes.push("some Hermitian family member has an empty rank-2 range, so no rank-2 code exists".into());
        } else {
            notes.push(format!(
                "no common rank-2 code found; for {} generic unitaries such codes form a measure-zero set",
                units.len()
            ));
        }
        FamilyDocument { channel_fingerprint: kraus.fingerprint(), range: None, exhaustive: out.proven_empty, notes, codes }
    };
    Ok((report("find-codes", digest, doc, tol)?, 0))
}

fn cmd_verify(channel: &Path, projection: &Path, mut digest: Digest256, tol: &ToleranceConfig) -> Result<(String, i32), CliError> {
    let loaded = load_channel(channel, &mut digest, tol)?;
    let p = load_projection(projection, &mut digest, tol)?;
    let kraus = loaded.kraus();
    if p.dim() != kraus.dim() {
        return Err(CliError::Precondition(format!("projection is {0}×{0}, channel dimension is {1}", p.dim(), kraus.dim())));
    }
    let r = kl_verify(kraus, &p, tol)?;
    let density = lambda_density_check(&r.lambda_estimate, tol);
    let block = block_e_positivity(kraus, &p, tol)?;
    let doc = VerificationDocument {
        correctable: r.correctable,
        lambda: r.lambda.as_ref().map(|l| MatrixDocument::from_matrix(l.entries())),
        lambda_estimate: MatrixDocument::from_matrix(r.lambda_estimate.entries()),
        max_residual: r.max_residual,
        per_pair_residuals: r.per_pair_residuals.clone(),
        lambda_density: DensityDocument {
            is_density: density.is_density,
            hermitian_residual: density.hermitian_residual,
            min_eigenvalue: density.min_eigenvalue,
            trace: density.trace,
        },
        block_positivity: BlockDocument { min_eigenvalue: block.min_eigenvalue, positive: block.positive, residual: block.residual },
    };
    Ok((report("verify", digest, doc, tol)?, if r.correctable { 0 } else { 1 }))
}

fn cmd_recover(
    channel: &Path,
    projection: &Path,
    samples: usize,
    seed: u64,
    mut digest: Digest256,
    tol: &ToleranceConfig,
) -> Result<(String, i32), CliError> {
    let loaded = load_channel(channel, &mut digest, tol)?;
    let p = load_projection(projection, &mut digest, tol)?;
    digest.field("samples", &samples.to_le_bytes());
    digest.field("seed", &seed.to_le_bytes());
    let kraus = loaded.kraus();
    if p.dim() != kraus.dim() {
        return Err(CliError::Precondition(format!("projection is {0}×{0}, channel dimension is {1}", p.dim(), kraus.dim())));
    }
    let r = match build_recovery(kraus, &p, tol) {
        Ok(r) => r,
        Err(Error::NotCorrectable { max_residual }) => {
            return Err(CliError::Negative(format!("code is not correctable (max residual {max_residual:.3e})")))
        }
        Err(e) => return Err(e.into()),
    };
    let deviation = verify_recovery(kraus, &r, &p, samples, seed)?;
    let ok = deviation <= RECOVERY_TOLERANCE;
    let doc = RecoveryDocument {
        kraus: r.channel.ops().iter().map(MatrixDocument::from_matrix).collect(),
        weights: r.weights.clone(),
        samples,
        seed,
        max_deviation: deviation,
        within_tolerance: ok,
    };
    Ok((report("recover", digest, doc, tol)?, if ok { 0 } else { 4 }))
}
