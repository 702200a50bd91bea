//! Command-line flags and JSON config files.
//!
//! A config file is a JSON object holding `command` plus any of that
//! command's flags in snake case. Flags given on the command line override
//! the file. After merging, [`Command::resolve`] fills in defaults, and the
//! resolved command is what every output file embeds.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use planar_limits_core::packing::SolverOptions;

use crate::error::{CliError, Result};
use crate::family::Family;

pub const DEFAULT_OUT: &str = "out";
pub const DEFAULT_S: [usize; 4] = [2, 4, 8, 16];

#[derive(Debug, Parser)]
#[command(name = "planar-limits", version, about = "Experiments on bounded-degree planar graphs and their limits")]
pub struct Cli {
    /// JSON file supplying defaults for the subcommand's flags.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Build a graph family and write it as a graph or planar-map file.
    Generate(GenerateArgs),
    /// Solve for a circle packing, lay it out, and report ring-lemma ratios.
    Pack(PackArgs),
    /// Count (δ,s)-supported points and check the tiling flow bound.
    Supported(SupportedArgs),
    /// Non-return probabilities, return probabilities and ball growth.
    Walk(WalkArgs),
    /// Rooted-ball censuses and total-variation diagnostics.
    Census(CensusArgs),
    /// Mass-transport checks for the built-in transport functions.
    Imtp(ImtpArgs),
    /// Generate, pack, take centers, and count supported points.
    Pipeline(PipelineArgs),
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenerateArgs {
    /// Generator, e.g. `grid:16`, `triangulation:500:8`, `star3:6`.
    #[arg(long = "gen", value_name = "SPEC")]
    #[serde(rename = "gen", skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[arg(long, value_name = "DIR")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PackArgs {
    /// Planar-map file (with `rot` lines).
    #[arg(long, value_name = "FILE", conflicts_with = "generator")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph: Option<PathBuf>,
    #[arg(long = "gen", value_name = "SPEC")]
    #[serde(rename = "gen", skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Target angle-sum residual.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    /// Cap on relaxation sweeps before the solver gives up.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_sweeps: Option<usize>,
    /// Tangency tolerance of the layout, in units of the largest radius.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub layout_tol: Option<f64>,
    /// Combinatorial radius for the ring-lemma statistics.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<usize>,
    /// Also write the packing scaled into the unit disk.
    #[arg(long, value_name = "BOOL", num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unit_disk: Option<bool>,
    #[arg(long, value_name = "DIR")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SupportedArgs {
    /// Point-set CSV `x,y`.
    #[arg(long, value_name = "FILE", conflicts_with = "cloud")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<PathBuf>,
    /// Point cloud: `grid:N`, `uniform:N` or `hex:R`.
    #[arg(long, value_name = "SPEC")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cloud: Option<String>,
    /// Seeds the uniform cloud and the tiling.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    /// Support thresholds, comma separated.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub s: Vec<usize>,
    #[arg(long, value_name = "DIR")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// Parallel width over thresholds; 0 uses every core.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WalkArgs {
    #[arg(long, value_name = "FILE", conflicts_with = "generator")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph: Option<PathBuf>,
    #[arg(long = "gen", value_name = "SPEC")]
    #[serde(rename = "gen", skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    /// `exact`, `sampled`, `mc` or `auto`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    /// Walks for `mc`, start vertices for `sampled`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// Vertex for return probabilities and ball growth.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub root: Option<usize>,
    /// Largest ball radius for the growth profile.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<usize>,
    #[arg(long, value_name = "DIR")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CensusArgs {
    /// Graph files, in sequence order.
    #[arg(long, value_name = "FILE", value_delimiter = ',')]
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub graph: Vec<PathBuf>,
    /// Generators, in sequence order; used after any `--graph` files.
    #[arg(long = "gen", value_name = "SPEC", value_delimiter = ',')]
    #[serde(rename = "gen", skip_serializing_if = "Vec::is_empty")]
    pub generator: Vec<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<usize>,
    #[arg(long, value_name = "DIR")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// Parallel width over graphs; 0 uses every core.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ImtpArgs {
    #[arg(long, value_name = "FILE", value_delimiter = ',')]
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub graph: Vec<PathBuf>,
    #[arg(long = "gen", value_name = "SPEC", value_delimiter = ',')]
    #[serde(rename = "gen", skip_serializing_if = "Vec::is_empty")]
    pub generator: Vec<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Root every graph at this vertex instead of uniformly.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub root: Option<usize>,
    #[arg(long, value_name = "DIR")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineArgs {
    #[arg(long = "gen", value_name = "SPEC")]
    #[serde(rename = "gen", skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    /// First seed; run `i` uses `seed + i`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runs: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub s: Vec<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[arg(long, value_name = "DIR")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// Parallel width over runs; 0 uses every core.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
}

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(CliError::Usage(msg.into()))
}

/// Merges the config file (if any) under the command-line flags.
pub fn load(cli: Cli) -> Result<Command> {
    let Some(path) = cli.config else { return Ok(cli.command) };
    let text = fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
    let mut base: Value = serde_json::from_str(&text)?;
    let overlay = serde_json::to_value(&cli.command)?;
    let Some(obj) = base.as_object_mut() else {
        return usage(format!("{}: config must be a JSON object", path.display()));
    };
    match obj.get("command") {
        Some(c) if *c != overlay["command"] => {
            return usage(format!("{}: config is for command {c}, not {}", path.display(), overlay["command"]));
        }
        _ => {}
    }
    for (k, v) in overlay.as_object().expect("commands serialize to objects") {
        obj.insert(k.clone(), v.clone());
    }
    Ok(serde_json::from_value(base)?)
}

fn positive(name: &str, x: Option<f64>) -> Result<()> {
    match x {
        Some(t) if !(t.is_finite() && t > 0.0) => usage(format!("--{name} must be positive, got {t}")),
        _ => Ok(()),
    }
}

fn check_delta(delta: Option<f64>) -> Result<()> {
    match delta {
        Some(d) if !(d > 0.0 && d < 1.0) => usage(format!("--delta must lie in (0, 1), got {d}")),
        _ => Ok(()),
    }
}

fn check_s(s: &[usize]) -> Result<()> {
    match s.iter().find(|&&s| s < 2) {
        Some(s) => usage(format!("--s values must be at least 2, got {s}")),
        None => Ok(()),
    }
}

fn random_spec(spec: Option<&str>) -> bool {
    spec.and_then(|s| s.parse::<Family>().ok()).is_some_and(|f| f.is_random())
}

/// Randomized runs must name their seed; deterministic ones default to 0.
fn seed_for(seed: &mut Option<u64>, random: bool, what: &str) -> Result<()> {
    match (*seed, random) {
        (None, true) => usage(format!("--seed is required for {what}")),
        (None, false) => {
            *seed = Some(0);
            Ok(())
        }
        _ => Ok(()),
    }
}

fn one_source(graph: bool, generator: bool) -> Result<()> {
    match (graph, generator) {
        (true, true) => usage("give either --graph or --gen, not both"),
        (false, false) => usage("one of --graph or --gen is required"),
        _ => Ok(()),
    }
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Generate(_) => "generate",
            Command::Pack(_) => "pack",
            Command::Supported(_) => "supported",
            Command::Walk(_) => "walk",
            Command::Census(_) => "census",
            Command::Imtp(_) => "imtp",
            Command::Pipeline(_) => "pipeline",
        }
    }

    pub fn out_dir(&self) -> PathBuf {
        match self {
            Command::Generate(a) => a.out.clone(),
            Command::Pack(a) => a.out.clone(),
            Command::Supported(a) => a.out.clone(),
            Command::Walk(a) => a.out.clone(),
            Command::Census(a) => a.out.clone(),
            Command::Imtp(a) => a.out.clone(),
            Command::Pipeline(a) => a.out.clone(),
        }
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
    }

    /// Validates the flags and fills in every default.
    pub fn resolve(mut self) -> Result<Self> {
        let out = Some(self.out_dir());
        match &mut self {
            Command::Generate(a) => {
                if a.generator.is_none() {
                    return usage("--gen is required");
                }
                seed_for(&mut a.seed, random_spec(a.generator.as_deref()), "random generators")?;
                a.out = out;
            }
            Command::Pack(a) => {
                one_source(a.graph.is_some(), a.generator.is_some())?;
                positive("tol", a.tol)?;
                positive("layout-tol", a.layout_tol)?;
                seed_for(&mut a.seed, random_spec(a.generator.as_deref()), "random generators")?;
                a.tol.get_or_insert(1e-10);
                a.max_sweeps.get_or_insert(SolverOptions::default().max_sweeps);
                a.layout_tol.get_or_insert(1e-8);
                a.radius.get_or_insert(2);
                a.unit_disk.get_or_insert(false);
                a.out = out;
            }
            Command::Supported(a) => {
                if a.points.is_some() == a.cloud.is_some() {
                    return usage("give exactly one of --points or --cloud");
                }
                check_delta(a.delta)?;
                check_s(&a.s)?;
                seed_for(&mut a.seed, true, "the random tiling")?;
                a.delta.get_or_insert(0.5);
                if a.s.is_empty() {
                    a.s = DEFAULT_S.to_vec();
                }
                a.jobs.get_or_insert(0);
                a.out = out;
            }
            Command::Walk(a) => {
                one_source(a.graph.is_some(), a.generator.is_some())?;
                let mode = a.mode.get_or_insert_with(|| "auto".into());
                if !["exact", "sampled", "mc", "auto"].contains(&mode.as_str()) {
                    return usage(format!("--mode must be exact, sampled, mc or auto, got `{mode}`"));
                }
                if a.horizon == Some(0) {
                    return usage("--horizon must be positive");
                }
                let random = random_spec(a.generator.as_deref()) || mode != "exact";
                seed_for(&mut a.seed, random, "sampled or random runs")?;
                a.horizon.get_or_insert(100);
                a.samples.get_or_insert(if mode == "sampled" { 64 } else { 20_000 });
                a.out = out;
            }
            Command::Census(a) => {
                if a.graph.is_empty() && a.generator.is_empty() {
                    return usage("at least one --graph or --gen is required");
                }
                let random = a.generator.iter().any(|g| random_spec(Some(g)));
                seed_for(&mut a.seed, random, "random generators")?;
                a.radius.get_or_insert(2);
                a.jobs.get_or_insert(0);
                a.out = out;
            }
            Command::Imtp(a) => {
                if a.graph.is_empty() && a.generator.is_empty() {
                    return usage("at least one --graph or --gen is required");
                }
                let random = a.generator.iter().any(|g| random_spec(Some(g)));
                seed_for(&mut a.seed, random, "random generators")?;
                a.out = out;
            }
            Command::Pipeline(a) => {
                check_delta(a.delta)?;
                check_s(&a.s)?;
                positive("tol", a.tol)?;
                if a.runs == Some(0) {
                    return usage("--runs must be positive");
                }
                let spec = a.generator.get_or_insert_with(|| "triangulation:1000:8".into());
                let random = random_spec(Some(spec));
                seed_for(&mut a.seed, random, "random generators")?;
                a.runs.get_or_insert(1);
                a.delta.get_or_insert(0.5);
                if a.s.is_empty() {
                    a.s = DEFAULT_S.to_vec();
                }
                a.tol.get_or_insert(1e-10);
                a.jobs.get_or_insert(0);
                a.out = out;
            }
        }
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("planar-limits").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn defaults_are_filled_in() {
        let cmd = load(parse(&["pack", "--gen", "hex:4"])).unwrap().resolve().unwrap();
        let Command::Pack(a) = cmd else { panic!() };
        assert_eq!((a.tol, a.radius, a.seed), (Some(1e-10), Some(2), Some(0)));
        assert_eq!(a.out, Some(PathBuf::from(DEFAULT_OUT)));
    }

    #[test]
    fn flags_override_the_file() {
        let dir = std::env::temp_dir().join(format!("pl-config-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let file = dir.join("c.json");
        fs::write(&file, r#"{"command":"supported","cloud":"grid:5","delta":0.25,"s":[3]}"#).unwrap();
        let f = file.to_str().unwrap();
        let cmd = load(parse(&["supported", "--config", f, "--delta", "0.5", "--seed", "1"])).unwrap();
        let Command::Supported(a) = cmd else { panic!() };
        assert_eq!((a.delta, a.s, a.cloud.as_deref()), (Some(0.5), vec![3], Some("grid:5")));

        assert!(matches!(load(parse(&["walk", "--config", f])), Err(CliError::Usage(_))));
        fs::write(&file, r#"{"cloud":"grid:5","bogus":1}"#).unwrap();
        assert!(matches!(load(parse(&["supported", "--config", f])), Err(CliError::Config(_))));
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn resolved_commands_round_trip_through_json() {
        let cmd = load(parse(&["pipeline", "--runs", "3", "--s", "2,4", "--seed", "5"])).unwrap().resolve().unwrap();
        let v = serde_json::to_value(&cmd).unwrap();
        assert_eq!(v["command"], "pipeline");
        assert_eq!(serde_json::from_value::<Command>(v).unwrap(), cmd);
    }

    #[test]
    fn invalid_parameters_are_usage_errors() {
        for args in [
            &["supported", "--cloud", "grid:4", "--delta", "1.5"][..],
            &["supported", "--cloud", "grid:4", "--s", "1"],
            &["walk", "--gen", "grid:4", "--mode", "fast"],
            &["pack"],
            &["pipeline"],
            &["generate", "--gen", "triangulation:100:8"],
        ] {
            assert!(matches!(load(parse(args)).unwrap().resolve(), Err(CliError::Usage(_))), "{args:?}");
        }
    }
}
