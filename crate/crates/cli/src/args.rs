use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use sumsetlab_core::hypotheses::PartitionStrategy;
use sumsetlab_core::sets::{IntPoly, RealPoly, SetSpec};

use crate::CliError;

pub const MIN_PRECISION: u32 = 128;
pub const MAX_PRECISION: u32 = 8192;

#[derive(Parser, Debug)]
#[command(name = "sumsetlab", version, about = "Subset-sum coverage, residue descent and orbit probes for integer sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerate the set up to the bound.
    Gen(Common),
    /// Subset-sum coverage of the set up to the bound.
    Fs(Common),
    /// Check the completeness hypotheses on a finite prefix.
    Certify {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        extra: CertifyArgs,
    },
    /// Gap statistics of the orbit under rotation by each angle.
    Orbit(Common),
    /// Element and subset-sum counts at a ladder of bounds.
    Density {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        extra: DensityArgs,
    },
    /// Integer combinations of polynomial values or set elements.
    Witness {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        extra: WitnessArgs,
    },
    /// Explicit counterexample constructions.
    Construct {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        extra: ConstructArgs,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Gen(_) => "gen",
            Command::Fs(_) => "fs",
            Command::Certify { .. } => "certify",
            Command::Orbit(_) => "orbit",
            Command::Density { .. } => "density",
            Command::Witness { .. } => "witness",
            Command::Construct { .. } => "construct",
        }
    }

    pub fn common(&self) -> &Common {
        match self {
            Command::Gen(c) | Command::Fs(c) | Command::Orbit(c) => c,
            Command::Certify { common, .. }
            | Command::Density { common, .. }
            | Command::Witness { common, .. }
            | Command::Construct { common, .. } => common,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Bits,
}

/// Flags shared by every command. Every field may also come from `--config`.
#[derive(Args, Debug, Default, Clone, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct Common {
    /// JSON config file; flags override its keys.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Set family: gamma, gamma-single, power-times-finite, poly-power-product,
    /// geometric-union, floor-poly, poly-of-primes, finite-product, explicit.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub a: Option<u64>,
    #[arg(long)]
    pub b: Option<u64>,
    /// Comma-separated bases.
    #[arg(long, value_delimiter = ',')]
    pub bases: Option<Vec<u64>>,
    /// Comma-separated polynomials in x, e.g. `x^2,x^3+x`.
    #[arg(long, value_delimiter = ',')]
    pub polys: Option<Vec<String>>,
    /// Multipliers b_m of power-times-finite.
    #[arg(long, value_delimiter = ',')]
    pub bs: Option<Vec<u64>>,
    /// Real coefficients of floor-poly, constant term first.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub coeffs: Option<Vec<f64>>,
    /// Elements of an explicit set.
    #[arg(long, value_delimiter = ',')]
    pub elements: Option<Vec<u64>>,
    #[arg(long)]
    pub bound: Option<u64>,
    #[arg(long)]
    pub qmax: Option<u64>,
    /// Angle: `sqrt:m`, `rational:p/q`, `cf:[a0;a1,...]` or `golden`. Repeatable.
    #[arg(long = "alpha")]
    #[serde(alias = "alphas")]
    pub alpha: Option<Vec<String>>,
    /// Fixed-point bits, a power of two in 128..=8192.
    #[arg(long)]
    pub precision: Option<u32>,
    /// Memory cap for coverage bitsets, in bytes.
    #[arg(long, env = "SUMSETLAB_MEM_CAP")]
    pub mem_cap: Option<u64>,
    /// Output file; a `.meta.json` sidecar is written next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Worker thread cap.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Full set description as JSON, used instead of the family flags.
    #[arg(skip)]
    pub spec: Option<SetSpec>,
}

#[derive(Args, Debug, Default, Clone, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct CertifyArgs {
    #[arg(long, value_enum)]
    pub strategy: Option<StrategyArg>,
    /// Skip the coverage pass.
    #[arg(long)]
    pub no_coverage: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyArg {
    RoundRobin,
    Modulus,
}

impl From<StrategyArg> for PartitionStrategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::RoundRobin => PartitionStrategy::RoundRobin,
            StrategyArg::Modulus => PartitionStrategy::Modulus,
        }
    }
}

#[derive(Args, Debug, Default, Clone, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct DensityArgs {
    /// Bounds to scan; defaults to powers of ten up to `--bound`.
    #[arg(long, value_delimiter = ',')]
    pub ns: Option<Vec<u64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    /// Vandermonde combination of `P` at `--nodes`.
    Vandermonde,
    /// Small linear combination of set elements at several floors.
    Zannier,
    /// Vandermonde combination of `P` at consecutive primes above `--floor`.
    Prime,
}

#[derive(Args, Debug, Default, Clone, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct WitnessArgs {
    #[arg(long, value_enum)]
    pub kind: Option<WitnessKind>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub nodes: Option<Vec<i64>>,
    /// Number of elements combined.
    #[arg(long)]
    pub k: Option<usize>,
    /// Largest admissible `|Σ z_i x_i|`.
    #[arg(long)]
    pub value_bound: Option<u64>,
    #[arg(long)]
    pub zmax: Option<i64>,
    /// Fixed coefficient vector instead of a search.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub z: Option<Vec<i64>>,
    #[arg(long, value_delimiter = ',')]
    pub floors: Option<Vec<u64>>,
    #[arg(long)]
    pub floor: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstructKind {
    /// Sublacunary set, one element per cube window, with small `Σ ‖n_k α‖`.
    Ncd,
    /// Thick set whose orbit clusters at 0.
    Thick,
    /// Minimizers of `‖nα − β‖` between consecutive `--m` values.
    Observation,
}

#[derive(Args, Debug, Default, Clone, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct ConstructArgs {
    #[arg(long, value_enum)]
    pub kind: Option<ConstructKind>,
    /// First cube window; searched for when absent.
    #[arg(long)]
    pub k0: Option<u64>,
    #[arg(long)]
    pub kmax: Option<u64>,
    #[arg(long)]
    pub depth: Option<u64>,
    #[arg(long)]
    pub search_cap: Option<u64>,
    #[arg(long)]
    pub beta: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub m: Option<Vec<u64>>,
}

macro_rules! overlay {
    ($flags:expr, $file:expr, [$($field:ident),* $(,)?]) => {
        $( if $flags.$field.is_none() { $flags.$field = $file.$field.take(); } )*
    };
}

impl Common {
    pub fn overlay(&mut self, mut file: Common) {
        overlay!(self, file, [
            family, a, b, bases, polys, bs, coeffs, elements, bound, qmax, alpha,
            precision, mem_cap, out, format, jobs, spec,
        ]);
    }
}

impl CertifyArgs {
    pub fn overlay(&mut self, mut file: CertifyArgs) {
        overlay!(self, file, [strategy]);
        self.no_coverage |= file.no_coverage;
    }
}

impl DensityArgs {
    pub fn overlay(&mut self, mut file: DensityArgs) {
        overlay!(self, file, [ns]);
    }
}

impl WitnessArgs {
    pub fn overlay(&mut self, mut file: WitnessArgs) {
        overlay!(self, file, [kind, nodes, k, value_bound, zmax, z, floors, floor]);
    }
}

impl ConstructArgs {
    pub fn overlay(&mut self, mut file: ConstructArgs) {
        overlay!(self, file, [kind, k0, kmax, depth, search_cap, beta, m]);
    }
}

/// Reads `--config` and fills every flag left unset.
pub fn apply_config(cmd: &mut Command) -> Result<(), CliError> {
    let Some(path) = cmd.common().config.clone() else {
        return Ok(());
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
    fn part<T: serde::de::DeserializeOwned>(v: &serde_json::Value) -> Result<T, CliError> {
        serde_json::from_value(v.clone()).map_err(|e| CliError::Usage(format!("config: {e}")))
    }
    match cmd {
        Command::Gen(c) | Command::Fs(c) | Command::Orbit(c) => c.overlay(part(&value)?),
        Command::Certify { common, extra } => {
            common.overlay(part(&value)?);
            extra.overlay(part(&value)?);
        }
        Command::Density { common, extra } => {
            common.overlay(part(&value)?);
            extra.overlay(part(&value)?);
        }
        Command::Witness { common, extra } => {
            common.overlay(part(&value)?);
            extra.overlay(part(&value)?);
        }
        Command::Construct { common, extra } => {
            common.overlay(part(&value)?);
            extra.overlay(part(&value)?);
        }
    }
    Ok(())
}

fn need<T: Clone>(v: &Option<T>, flag: &str, family: &str) -> Result<T, CliError> {
    v.clone()
        .ok_or_else(|| CliError::Usage(format!("family {family} needs --{flag}")))
}

impl Common {
    /// The set description from `spec` in the config, or else from the family flags.
    pub fn set_spec(&self) -> Result<SetSpec, CliError> {
        let explicit_family = self.family.is_some();
        if let (Some(spec), false) = (&self.spec, explicit_family) {
            return Ok(spec.clone());
        }
        let family = self
            .family
            .as_deref()
            .ok_or_else(|| CliError::Usage("missing --family".into()))?;
        let spec = match family {
            "gamma" => SetSpec::GammaAB {
                a: need(&self.a, "a", family)?,
                b: need(&self.b, "b", family)?,
            },
            "gamma-single" => SetSpec::GammaSingle { a: need(&self.a, "a", family)? },
            "power-times-finite" => SetSpec::PowerTimesFinite {
                a: need(&self.a, "a", family)?,
                bs: need(&self.bs, "bs", family)?,
            },
            "poly-power-product" => SetSpec::PolyPowerProduct {
                bases: need(&self.bases, "bases", family)?,
                polys: self.int_polys()?,
            },
            "geometric-union" => SetSpec::GeometricUnion { bases: need(&self.bases, "bases", family)? },
            "floor-poly" => SetSpec::FloorPoly {
                poly: RealPoly::new(need(&self.coeffs, "coeffs", family)?).map_err(CliError::Core)?,
            },
            "poly-of-primes" => {
                let mut polys = self.int_polys()?;
                if polys.len() != 1 {
                    return Err(CliError::Usage("poly-of-primes takes exactly one polynomial".into()));
                }
                SetSpec::PolyOfPrimes { poly: polys.remove(0) }
            }
            "finite-product" => SetSpec::FiniteProduct { bases: need(&self.bases, "bases", family)? },
            "explicit" => SetSpec::Explicit { elements: need(&self.elements, "elements", family)? },
            other => return Err(CliError::Usage(format!("unknown family {other:?}"))),
        };
        Ok(spec)
    }

    pub fn int_polys(&self) -> Result<Vec<IntPoly>, CliError> {
        let texts = self
            .polys
            .as_ref()
            .ok_or_else(|| CliError::Usage("missing --polys".into()))?;
        texts.iter().map(|t| parse_poly(t)).collect()
    }

    pub fn bound(&self) -> Result<u64, CliError> {
        match self.bound {
            Some(0) => Err(CliError::Usage("--bound must be >= 1".into())),
            Some(b) => Ok(b),
            None => Err(CliError::Usage("missing --bound".into())),
        }
    }

    pub fn precision(&self) -> Result<u32, CliError> {
        let p = self.precision.unwrap_or(sumsetlab_core::diophantine::DEFAULT_PRECISION);
        if !p.is_power_of_two() || !(MIN_PRECISION..=MAX_PRECISION).contains(&p) {
            return Err(CliError::Usage(format!(
                "--precision must be a power of two in {MIN_PRECISION}..={MAX_PRECISION}, got {p}"
            )));
        }
        Ok(p)
    }

    pub fn max_bits(&self) -> u64 {
        self.mem_cap
            .map_or(sumsetlab_core::fs::DEFAULT_MAX_BITS, |bytes| bytes.saturating_mul(8))
    }
}

/// Integer polynomial in `x`, e.g. `3x^2 - x + 1` or `2*x^3`.
pub fn parse_poly(text: &str) -> Result<IntPoly, CliError> {
    let bad = |why: &str| CliError::Usage(format!("bad polynomial {text:?}: {why}"));
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(bad("empty"));
    }
    let mut coeffs: Vec<i64> = Vec::new();
    let mut rest = s.as_str();
    while !rest.is_empty() {
        let (sign, body) = match rest.as_bytes()[0] {
            b'-' => (-1i64, &rest[1..]),
            b'+' => (1, &rest[1..]),
            _ if rest.len() == s.len() => (1, rest),
            _ => return Err(bad("expected + or -")),
        };
        let end = body.find(['+', '-']).unwrap_or(body.len());
        let term = &body[..end];
        rest = &body[end..];
        let (coef, degree) = match term.find('x') {
            None => (term.parse::<i64>().map_err(|_| bad("bad constant"))?, 0usize),
            Some(i) => {
                let c = term[..i].trim_end_matches('*');
                let c = if c.is_empty() { 1 } else { c.parse::<i64>().map_err(|_| bad("bad coefficient"))? };
                let e = &term[i + 1..];
                let d = match e.strip_prefix('^') {
                    Some(d) => d.parse::<usize>().map_err(|_| bad("bad exponent"))?,
                    None if e.is_empty() => 1,
                    None => return Err(bad("trailing characters")),
                };
                (c, d)
            }
        };
        if degree > 64 {
            return Err(bad("degree too large"));
        }
        if coeffs.len() <= degree {
            coeffs.resize(degree + 1, 0);
        }
        coeffs[degree] = coeffs[degree]
            .checked_add(sign * coef)
            .ok_or_else(|| bad("coefficient overflow"))?;
    }
    IntPoly::new(coeffs).map_err(CliError::Core)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials() {
        assert_eq!(parse_poly("x^2").unwrap(), IntPoly::monomial(2));
        assert_eq!(parse_poly("3x^2 - x + 1").unwrap().coeffs(), &[1, -1, 3]);
        assert_eq!(parse_poly("2*x^3-x").unwrap().coeffs(), &[0, -1, 0, 2]);
        assert!(parse_poly("-x^2").is_err());
        assert_eq!(parse_poly("x + 7").unwrap().coeffs(), &[7, 1]);
        assert!(parse_poly("x^").is_err());
        assert!(parse_poly("2y").is_err());
        assert!(parse_poly("").is_err());
    }
}
