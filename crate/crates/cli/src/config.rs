use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Symbolic and numerical experiments on relativistic Burgers-Schrodinger and
/// nonlinear Schrodinger hierarchies.
#[derive(Debug, Parser)]
#[command(name = "relnls", version, propagate_version = true)]
pub struct Cli {
    /// Directory for artifacts.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Seed for every random draw (initial-condition noise); given before the subcommand.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Read the run from a JSON object: `command` names the subcommand
    /// (string or array of words), every other key is a flag.
    #[arg(long, global = true)]
    pub json_config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// E-polynomials and the motion of their zeros.
    #[command(subcommand)]
    Epoly(EpolyCmd),
    /// Hierarchy flows, Lax pairs and zero curvature.
    #[command(subcommand)]
    Akns(AknsCmd),
    /// Velocity fields, Bäcklund images and shocks.
    #[command(subcommand)]
    Burgers(BurgersCmd),
    /// Split-step evolution of the (relativistic) NLS.
    Evolve(EvolveArgs),
    /// Acceptance checks, one per target.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DispersionArg {
    Nr,
    Sr,
}

/// Speed of light; `None` is infinite.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct LightSpeed(pub Option<f64>);

/// A positive number or `inf`.
pub fn parse_c(s: &str) -> Result<LightSpeed, String> {
    if s.eq_ignore_ascii_case("inf") {
        return Ok(LightSpeed(None));
    }
    let c: f64 = s.parse().map_err(|_| format!("expected a number or `inf`, got `{s}`"))?;
    if c > 0.0 && c.is_finite() {
        Ok(LightSpeed(Some(c)))
    } else {
        Err(format!("speed of light must be positive, got {c}"))
    }
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "action")]
pub enum EpolyCmd {
    /// Print H_n in canonical text form.
    Gen(EpolyGenArgs),
    /// Track the zeros of H_n and integrate the vortex equations.
    Vortex(VortexArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct EpolyGenArgs {
    #[arg(long, value_enum, default_value = "nr")]
    pub dispersion: DispersionArg,
    #[arg(long, default_value_t = 1)]
    pub eps_order: u32,
    /// Highest power of p kept in the dispersion (default 2 eps-order + 2).
    #[arg(long)]
    pub degree_cap: Option<u32>,
    #[arg(long)]
    pub n: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct VortexArgs {
    #[arg(long, value_enum, default_value = "nr")]
    pub dispersion: DispersionArg,
    #[arg(long, default_value_t = 1)]
    pub eps_order: u32,
    #[arg(long)]
    pub n: u32,
    #[arg(long, default_value_t = 0.1)]
    pub t0: f64,
    #[arg(long, default_value_t = 1.0)]
    pub t1: f64,
    #[arg(long, default_value_t = 91)]
    pub samples: usize,
    #[arg(long, default_value_t = 1.0)]
    pub hbar: f64,
    #[arg(long, default_value_t = 1.0)]
    pub m: f64,
    #[arg(long, default_value = "inf", value_parser = parse_c)]
    pub c: LightSpeed,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "action")]
pub enum AknsCmd {
    /// Print the N-th hierarchy flow.
    Flow(FlowArgs),
    /// Print the Lax pair of a flow or of a dispersion.
    Lax(LaxArgs),
    /// Zero-curvature residual of a Lax pair against its flow.
    VerifyZc(LaxArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct FlowArgs {
    #[arg(long)]
    pub n: u32,
    /// Set kappa^2 = 0 (linear limit).
    #[arg(long)]
    pub kappa0: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct LaxArgs {
    /// Flow number; mutually exclusive with --dispersion.
    #[arg(long, conflicts_with = "dispersion", required_unless_present = "dispersion")]
    pub n: Option<u32>,
    #[arg(long, value_enum)]
    pub dispersion: Option<DispersionArg>,
    #[arg(long, default_value_t = 1)]
    pub eps_order: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ResidualIc {
    Gaussian,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SeedArg {
    Zero,
    Plane,
    Gaussian,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileArg {
    Tanh,
    NegTanh,
    OneMinusTanh,
    Gaussian,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "action")]
pub enum BurgersCmd {
    /// Velocity-equation residual of a log-transformed propagated Gaussian.
    Residual(ResidualArgs),
    /// Bäcklund image of a seed and its residual.
    Backlund(BacklundArgs),
    /// Shock time and pre-shock profiles of the dispersionless equation.
    Shock(ShockArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct ResidualArgs {
    #[arg(long, value_enum, default_value = "gaussian")]
    pub ic: ResidualIc,
    #[arg(long, default_value = "inf", value_parser = parse_c)]
    pub c: LightSpeed,
    #[arg(long, default_value_t = 1)]
    pub eps_order: u32,
    #[arg(long, default_value_t = 2.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0.5)]
    pub k0: f64,
    #[arg(long, default_value_t = 0.5)]
    pub t: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    #[arg(long = "L", default_value_t = 60.0)]
    pub length: f64,
    #[arg(long, default_value_t = 256)]
    pub n: usize,
    #[arg(long, default_value_t = 5.0)]
    pub half_window: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct BacklundArgs {
    /// Known solution the map is applied to.
    #[arg(long, value_enum)]
    pub seed: SeedArg,
    #[arg(long, default_value_t = 0.8)]
    pub p: f64,
    #[arg(long, default_value_t = 3.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0.5)]
    pub t: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    #[arg(long, default_value_t = 8.0)]
    pub half_window: f64,
    /// Radius excluded around each singular locus.
    #[arg(long, default_value_t = 0.5)]
    pub exclusion: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct ShockArgs {
    #[arg(long, value_enum)]
    pub profile: ProfileArg,
    #[arg(long, default_value = "inf", value_parser = parse_c)]
    pub c: LightSpeed,
    #[arg(long, default_value_t = -10.0, allow_negative_numbers = true)]
    pub x_min: f64,
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    pub x_max: f64,
    /// Points per output profile.
    #[arg(long, default_value_t = 401)]
    pub samples: usize,
    /// Output times as fractions of the shock time (absolute times if there is no shock).
    #[arg(long, value_delimiter = ',', default_value = "0,0.5,0.9")]
    pub fractions: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EvolveIc {
    Soliton,
    Gaussian,
    Plane,
}

#[derive(Debug, Args, Serialize)]
pub struct EvolveArgs {
    #[arg(long, value_enum)]
    pub ic: EvolveIc,
    #[arg(long, default_value = "inf", value_parser = parse_c)]
    pub c: LightSpeed,
    #[arg(long, default_value_t = 0)]
    pub eps_order: u32,
    #[arg(long = "L", default_value_t = 64.0)]
    pub length: f64,
    #[arg(long, default_value_t = 512)]
    pub n: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    #[arg(long, default_value_t = 1000)]
    pub steps: usize,
    /// Record observables every this many steps.
    #[arg(long, default_value_t = 10)]
    pub every: usize,
    /// Write a field snapshot every this many steps (0: none).
    #[arg(long, default_value_t = 0)]
    pub snapshot_every: usize,
    #[arg(long, default_value_t = 0.5)]
    pub m: f64,
    #[arg(long, default_value_t = 1.0)]
    pub kappa2: f64,
    #[arg(long, default_value_t = 1.0)]
    pub eta: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub x0: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub k0: f64,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub mode: i64,
    /// Amplitude of seeded uniform complex noise added to the initial field.
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerifyTarget {
    Epoly,
    Hierarchy,
    ZeroCurvature,
    Nonlinearity,
    FirstCorrection,
    Backlund,
    Shock,
    Solver,
    Vortex,
    All,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub target: VerifyTarget,
    /// Symbolic checks only, at reduced order.
    #[arg(long)]
    pub quick: bool,
}

/// Everything that determines the artifacts of a run.
#[derive(Debug, Serialize)]
pub struct RunConfig<'a> {
    pub command: &'a Command,
    pub seed: u64,
}

/// Turns a JSON run description into command-line words.
pub fn json_to_args(text: &str) -> Result<Vec<String>, String> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| format!("config is not valid JSON: {e}"))?;
    let serde_json::Value::Object(map) = value else {
        return Err("config must be a JSON object".into());
    };
    let mut words = match map.get("command") {
        Some(serde_json::Value::String(s)) => s.split_whitespace().map(String::from).collect(),
        Some(serde_json::Value::Array(a)) => a
            .iter()
            .map(|w| w.as_str().map(String::from).ok_or_else(|| "command words must be strings".to_string()))
            .collect::<Result<Vec<_>, _>>()?,
        _ => return Err("config needs a `command` string or array".into()),
    };
    let mut flags = Vec::new();
    let mut leading = Vec::new();
    for (key, v) in map.iter().filter(|(k, _)| k.as_str() != "command") {
        // A numeric `seed` is the top-level random seed; a string one names a Bäcklund seed.
        if let ("seed", serde_json::Value::Number(n)) = (key.as_str(), v) {
            leading.push(format!("--seed={n}"));
            continue;
        }
        let flag = format!("--{key}");
        match v {
            serde_json::Value::Bool(true) => flags.push(flag),
            serde_json::Value::Bool(false) | serde_json::Value::Null => {}
            serde_json::Value::Number(n) => flags.push(format!("{flag}={n}")),
            serde_json::Value::String(s) => flags.push(format!("{flag}={s}")),
            serde_json::Value::Array(items) => {
                let parts = items
                    .iter()
                    .map(|i| match i {
                        serde_json::Value::Number(n) => Ok(n.to_string()),
                        serde_json::Value::String(s) => Ok(s.clone()),
                        _ => Err(format!("unsupported list item for `{key}`")),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                flags.push(format!("{flag}={}", parts.join(",")));
            }
            serde_json::Value::Object(_) => return Err(format!("nested object for `{key}` is not a flag value")),
        }
    }
    // Positional `target` of `verify` is given as a key.
    if let Some(pos) = flags.iter().position(|f| f.starts_with("--target=")) {
        let target = flags.remove(pos)["--target=".len()..].to_string();
        words.push(target);
    }
    words.extend(flags);
    leading.extend(words);
    Ok(leading)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_becomes_flags() {
        let args = json_to_args(r#"{"command": ["akns", "verify-zc"], "n": 2}"#).unwrap();
        assert_eq!(args, ["akns", "verify-zc", "--n=2"]);
        let args = json_to_args(r#"{"command": "verify", "target": "all", "quick": true}"#).unwrap();
        assert_eq!(args, ["verify", "all", "--quick"]);
        let args = json_to_args(r#"{"command": "evolve", "ic": "soliton", "seed": 7}"#).unwrap();
        assert_eq!(args, ["--seed=7", "evolve", "--ic=soliton"]);
    }

    #[test]
    fn c_parser() {
        assert_eq!(parse_c("inf"), Ok(LightSpeed(None)));
        assert_eq!(parse_c("10"), Ok(LightSpeed(Some(10.0))));
        assert!(parse_c("-1").is_err());
        assert!(parse_c("fast").is_err());
    }
}
