//! Argument parsing: models, grids, output targets.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use zetalab_core::orbit_models::{
    morse_ensemble, synthetic_ensemble, toral_ensemble, MorseModel, OrbitEnsemble, ToralModel,
};

#[derive(Parser)]
#[command(
    name = "zetalab",
    version,
    about = "Dynamical zeta functions of 3-dimensional foliated systems: orbit models, \
             Euler products, regularized determinants, and identity verification"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Construct an orbit ensemble (and, for toral models, the graded ladder
    /// spectrum) and serialize them.
    Model {
        #[command(subcommand)]
        family: ModelFamily,
    },
    /// Evaluate the zeta Euler product (and closed form when available) on an
    /// s-grid.
    Zeta(ZetaArgs),
    /// Evaluate the regularized-determinant side on an s-grid against the
    /// closed form.
    Regdet(RegdetArgs),
    /// Run verification suites; exit 0 iff all selected checks pass.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
pub enum ModelFamily {
    /// Suspension of a hyperbolic toral automorphism (det 1, trace > 2).
    Toral {
        #[command(flatten)]
        model: ToralArgs,
        #[arg(long, default_value_t = 10)]
        max_period: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Morse-gradient suspension over a genus-g surface.
    Morse {
        #[command(flatten)]
        model: MorseArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Explicit records, or a previously serialized ensemble.
    Synthetic {
        /// Comma-separated records length:count:index, e.g. 1.0:3:-1,2.5:1:1
        #[arg(long, value_delimiter = ',')]
        records: Vec<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args, Clone)]
pub struct ToralArgs {
    /// Matrix entries a,b,c,d, row major
    #[arg(long, value_name = "a,b,c,d", allow_hyphen_values = true)]
    pub matrix: Option<String>,
}

#[derive(Args, Clone)]
pub struct MorseArgs {
    #[arg(long)]
    pub genus: Option<u32>,
    /// Critical point counts n0,n1,n2 by Morse index
    #[arg(long, value_name = "n0,n1,n2")]
    pub critical: Option<String>,
}

#[derive(Args, Clone)]
pub struct OutputArgs {
    /// Output path (directory for `model`, file otherwise); stdout if absent
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
pub struct ZetaArgs {
    #[command(flatten)]
    pub toral: ToralArgs,
    #[command(flatten)]
    pub morse: MorseArgs,
    /// Read the ensemble from a serialized JSON file instead of a model
    #[arg(long)]
    pub ensemble: Option<std::path::PathBuf>,
    #[arg(long, default_value_t = 25)]
    pub max_period: u32,
    /// Grid re0:re1:n with optional ,im0:im1:m
    #[arg(long, default_value = "2:4:9")]
    pub s_grid: String,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args)]
pub struct RegdetArgs {
    #[command(flatten)]
    pub toral: ToralArgs,
    #[command(flatten)]
    pub morse: MorseArgs,
    #[arg(long, default_value = "2:4:9")]
    pub s_grid: String,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Suite: lefschetz | detformula | xiorbit | contour | traceformula | all
    pub suite: String,
    #[command(flatten)]
    pub toral: ToralArgs,
    #[command(flatten)]
    pub morse: MorseArgs,
    #[arg(long, default_value_t = 25)]
    pub max_period: u32,
    /// Re(z) of the test-function exponent where a suite needs one
    #[arg(long, default_value_t = 6.0)]
    pub z: f64,
    /// s-grid for suites evaluated at sample points
    #[arg(long, default_value = "3:3:1")]
    pub s_grid: String,
    /// Ladder truncation for spectral sums
    #[arg(long, default_value_t = 200)]
    pub truncation: u32,
    /// Frequency truncation of the mollified Poisson check
    #[arg(long, default_value_t = 2000)]
    pub nu_max: u32,
    /// Override of the per-suite pass tolerance
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

pub fn parse_toral(args: &ToralArgs) -> Result<ToralModel> {
    let spec = args
        .matrix
        .as_deref()
        .context("missing --matrix a,b,c,d")?;
    let parts: Vec<i64> = spec
        .split(',')
        .map(|p| p.trim().parse::<i64>().context("matrix entries must be integers"))
        .collect::<Result<_>>()?;
    if parts.len() != 4 {
        bail!("--matrix needs exactly four entries, got {}", parts.len());
    }
    Ok(ToralModel::new(parts[0], parts[1], parts[2], parts[3])?)
}

pub fn parse_morse(args: &MorseArgs) -> Result<MorseModel> {
    let genus = args.genus.context("missing --genus")?;
    let crit = args.critical.as_deref().context("missing --critical n0,n1,n2")?;
    let parts: Vec<u32> = crit
        .split(',')
        .map(|p| p.trim().parse::<u32>().context("critical counts must be nonnegative integers"))
        .collect::<Result<_>>()?;
    if parts.len() != 3 {
        bail!("--critical needs exactly three counts, got {}", parts.len());
    }
    Ok(MorseModel::new(genus, parts[0], parts[1], parts[2])?)
}

pub fn parse_records(records: &[String]) -> Result<Vec<(f64, u64, i8)>> {
    records
        .iter()
        .map(|r| {
            let parts: Vec<&str> = r.split(':').collect();
            if parts.len() != 3 {
                bail!("record must be length:count:index, got `{r}`");
            }
            Ok((
                parts[0].trim().parse::<f64>()?,
                parts[1].trim().parse::<u64>()?,
                parts[2].trim().parse::<i8>()?,
            ))
        })
        .collect()
}

/// Grid spec `re0:re1:n[,im0:im1:m]` expanded row-major (imaginary outer).
pub fn parse_s_grid(spec: &str) -> Result<Vec<Complex64>> {
    fn axis(part: &str) -> Result<(f64, f64, usize)> {
        let p: Vec<&str> = part.split(':').collect();
        if p.len() != 3 {
            bail!("grid axis must be start:stop:count, got `{part}`");
        }
        let (a, b, n) = (p[0].parse::<f64>()?, p[1].parse::<f64>()?, p[2].parse::<usize>()?);
        if n == 0 {
            bail!("grid axis count must be ≥ 1");
        }
        Ok((a, b, n))
    }
    let mut parts = spec.splitn(2, ',');
    let re = axis(parts.next().unwrap())?;
    let im = match parts.next() {
        Some(p) => axis(p)?,
        None => (0.0, 0.0, 1),
    };
    let lin = |(a, b, n): (f64, f64, usize), i: usize| {
        if n == 1 {
            a
        } else {
            a + (b - a) * i as f64 / (n - 1) as f64
        }
    };
    let mut grid = Vec::with_capacity(re.2 * im.2);
    for j in 0..im.2 {
        for i in 0..re.2 {
            grid.push(Complex64::new(lin(re, i), lin(im, j)));
        }
    }
    Ok(grid)
}

/// The orbit data a command operates on, resolved from the flags.
pub enum Subject {
    Toral(ToralModel, OrbitEnsemble),
    Morse(MorseModel, OrbitEnsemble),
    File(OrbitEnsemble),
}

pub fn resolve_subject(
    toral: &ToralArgs,
    morse: &MorseArgs,
    ensemble_path: Option<&std::path::Path>,
    max_period: u32,
) -> Result<Subject> {
    if let Some(path) = ensemble_path {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading ensemble from {}", path.display()))?;
        return Ok(Subject::File(OrbitEnsemble::from_json(&text)?));
    }
    if toral.matrix.is_some() {
        let model = parse_toral(toral)?;
        let ens = toral_ensemble(&model, max_period)?;
        return Ok(Subject::Toral(model, ens));
    }
    if morse.genus.is_some() || morse.critical.is_some() {
        let model = parse_morse(morse)?;
        let ens = morse_ensemble(&model)?;
        return Ok(Subject::Morse(model, ens));
    }
    bail!("specify a model (--matrix or --genus/--critical) or --ensemble FILE");
}

pub fn build_synthetic(records: &[String]) -> Result<OrbitEnsemble> {
    if records.is_empty() {
        bail!("--records must list at least one length:count:index triple");
    }
    Ok(synthetic_ensemble(&parse_records(records)?)?)
}
