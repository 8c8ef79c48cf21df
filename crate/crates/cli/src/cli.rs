//! Subcommand runner. Exit codes: 0 success, 1 invalid input or failed check, 2 usage error.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use patternc_core::assembler::{assemble_garment, check_pattern, export_svg, parse_pattern, serialize_pattern, Pattern};
use patternc_core::codec::{decode_merge, encode_vector, make_skeleton, Encoded};
use patternc_core::metrics::{compare_patterns, Alignment, DEFAULT_SAMPLES_PER_EDGE, DEFAULT_TAU_CM};
use patternc_core::sampler::{make_edit_pair, run_pipeline, SamplingWeights};
use patternc_core::schema::{
    canonical_serialize, denormalize_config, normalize_config, parse_config, parse_document, prune_config, validate_config,
    Document, FieldRegistry, GarmentConfig,
};
use patternc_core::simparams::{map_scores, AlphaCoeffs, DescriptorScores, MapMode, MaterialRegistry, Pairing};
use patternc_core::BodyModel;
use serde_json::json;

use crate::service::Service;

#[derive(Parser, Debug)]
#[command(name = "patternc", version, about = "Garment configuration to sewing pattern compiler")]
struct Cli {
    /// Field registry JSON replacing the built-in table.
    #[arg(long, global = true, env = "PATTERNC_REGISTRY")]
    registry: Option<PathBuf>,
    /// Body measurements JSON replacing the default body.
    #[arg(long, global = true)]
    body: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Identity,
    Literal,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PairingArg {
    SmoothBend,
    LightBend,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AlignArg {
    Centroid,
    Principal,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compile a garment or outfit config to pattern JSON and SVG.
    Compile {
        config: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        pattern: Option<PathBuf>,
    },
    /// Validate a normalized config and print the report.
    Validate { config: PathBuf },
    /// Map a raw-unit config into normalized form.
    Normalize { config: PathBuf },
    /// Map a normalized config back to raw units.
    Denormalize { config: PathBuf },
    /// Print the float vector and mask of a config.
    Encode { config: PathBuf },
    /// Merge a vector file into a skeleton config.
    Decode {
        #[arg(long)]
        skeleton: PathBuf,
        #[arg(long)]
        vector: PathBuf,
    },
    /// Print a config with every normalized float zeroed.
    Skeleton { config: PathBuf },
    /// Run the sampling pipeline into a directory.
    Sample {
        #[arg(long, default_value_t = 100)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        weights: Option<PathBuf>,
    },
    /// Describe the edit that turns one config into another.
    Editpair { a: PathBuf, b: PathBuf },
    /// Map descriptor scores to simulator parameters.
    Simparams {
        #[arg(long)]
        material: String,
        #[arg(long)]
        soft: i32,
        #[arg(long)]
        light: i32,
        #[arg(long)]
        smooth: i32,
        #[arg(long)]
        thickness: i32,
        #[arg(long, value_enum, default_value_t = ModeArg::Identity)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = PairingArg::SmoothBend)]
        pairing: PairingArg,
        /// One coefficient for all four parameters.
        #[arg(long, default_value_t = 0.1)]
        alpha: f64,
        #[arg(long)]
        materials: Option<PathBuf>,
    },
    /// Compare two pattern JSON files.
    Diffpattern {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TAU_CM)]
        tau: f64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES_PER_EDGE)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = AlignArg::Centroid)]
        align: AlignArg,
    },
    /// Serve the JSON API (and optionally static editor files).
    Serve {
        #[arg(long, default_value_t = 8080, value_parser = clap::value_parser!(u16).range(1..))]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        #[arg(long = "static")]
        assets: Option<PathBuf>,
    },
}

#[derive(Debug, thiserror::Error)]
enum Failure {
    /// Exit 1: the input is readable but invalid, or a check failed.
    #[error("{0}")]
    Invalid(String),
    /// Exit 2: bad invocation or unreadable files.
    #[error("{0}")]
    Usage(String),
}

type Run = Result<i32, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn invalid(e: impl std::fmt::Display) -> Failure {
    Failure::Invalid(e.to_string())
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializes");
    s.push('\n');
    s
}

struct Env {
    reg: FieldRegistry,
    body: BodyModel,
}

impl Env {
    fn load(cli: &Cli) -> Result<Env, Failure> {
        let reg = match &cli.registry {
            Some(p) => FieldRegistry::from_json_str(&read(p)?).map_err(|e| Failure::Usage(format!("registry: {e}")))?,
            None => FieldRegistry::default(),
        };
        let body = match &cli.body {
            Some(p) => {
                let b: BodyModel = serde_json::from_str(&read(p)?).map_err(|e| Failure::Usage(format!("body: {e}")))?;
                if !b.is_valid() {
                    return Err(Failure::Usage("body: measurements must be positive".into()));
                }
                b
            }
            None => BodyModel::default(),
        };
        Ok(Env { reg, body })
    }

    /// Parses, validates and prunes; prints the report and fails when invalid.
    fn config(&self, path: &Path, out: &mut dyn Write) -> Result<GarmentConfig, Failure> {
        let cfg = parse_config(&read(path)?).map_err(invalid)?;
        self.checked(cfg, out)
    }

    fn checked(&self, cfg: GarmentConfig, out: &mut dyn Write) -> Result<GarmentConfig, Failure> {
        let report = validate_config(&cfg, &self.reg);
        if !report.ok {
            let _ = out.write_all(pretty(&report).as_bytes());
            return Err(Failure::Invalid("config failed validation".into()));
        }
        Ok(prune_config(&cfg, &self.reg))
    }
}

/// `a.pattern.json` with slot `upper` becomes `a.upper.pattern.json`.
fn slotted(path: &Path, slot: &str) -> PathBuf {
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let (stem, rest) = name.split_once('.').unwrap_or((name, ""));
    let file = if rest.is_empty() { format!("{stem}.{slot}") } else { format!("{stem}.{slot}.{rest}") };
    path.with_file_name(file)
}

fn compile(env: &Env, config: &Path, svg: Option<&Path>, pattern: Option<&Path>, out: &mut dyn Write) -> Run {
    let text = read(config)?;
    let garments: Vec<(Option<&str>, GarmentConfig)> = match parse_document(&text).map_err(invalid)? {
        Document::Garment(g) => vec![(None, env.checked(g, out)?)],
        Document::Outfit(o) => {
            let mut v = vec![];
            for (slot, g) in o.garments() {
                v.push((Some(slot.trim_end_matches("_garment")), env.checked(g.clone(), out)?));
            }
            v
        }
    };
    let mut patterns: Vec<(Option<&str>, Pattern)> = vec![];
    for (slot, g) in garments {
        patterns.push((slot, assemble_garment(&g, &env.reg, &env.body).map_err(invalid)?));
    }
    let mut all_ok = true;
    let mut summary = vec![];
    for (slot, p) in &patterns {
        let validity = check_pattern(p);
        all_ok &= validity.ok;
        let target = |base: &Path| slot.map_or(base.to_path_buf(), |s| slotted(base, s));
        if let Some(path) = svg {
            write_file(&target(path), &export_svg(p))?;
        }
        if let Some(path) = pattern {
            write_file(&target(path), &serialize_pattern(p))?;
        }
        summary.push(json!({"slot": slot, "panels": p.panels.len(), "stitches": p.stitches.len(), "source_hash": p.source_hash, "validity": validity}));
    }
    if svg.is_none() && pattern.is_none() && patterns.len() == 1 {
        let _ = out.write_all(serialize_pattern(&patterns[0].1).as_bytes());
    } else {
        let _ = out.write_all(pretty(&summary).as_bytes());
    }
    Ok(if all_ok { 0 } else { 1 })
}

fn execute(cli: Cli, out: &mut dyn Write) -> Run {
    let env = Env::load(&cli)?;
    let reg = &env.reg;
    match cli.command {
        Command::Compile { config, svg, pattern } => compile(&env, &config, svg.as_deref(), pattern.as_deref(), out),
        Command::Validate { config } => {
            let cfg = parse_config(&read(&config)?).map_err(invalid)?;
            let report = validate_config(&cfg, reg);
            let _ = out.write_all(pretty(&report).as_bytes());
            Ok(if report.ok { 0 } else { 1 })
        }
        Command::Normalize { config } => {
            let cfg = parse_config(&read(&config)?).map_err(invalid)?;
            let n = env.checked(normalize_config(&cfg, reg).map_err(invalid)?, out)?;
            let _ = out.write_all(canonical_serialize(&n, reg).as_bytes());
            let _ = out.write_all(b"\n");
            Ok(0)
        }
        Command::Denormalize { config } => {
            let cfg = env.config(&config, out)?;
            let raw = denormalize_config(&cfg, reg).map_err(invalid)?;
            let _ = out.write_all(pretty(&raw.to_json()).as_bytes());
            Ok(0)
        }
        Command::Encode { config } => {
            let cfg = env.config(&config, out)?;
            let _ = out.write_all(pretty(&encode_vector(&cfg, reg)).as_bytes());
            Ok(0)
        }
        Command::Decode { skeleton, vector } => {
            let sk = env.config(&skeleton, out)?;
            let enc: Encoded = serde_json::from_str(&read(&vector)?).map_err(invalid)?;
            let cfg = decode_merge(&sk, &enc, reg).map_err(invalid)?;
            let _ = out.write_all(canonical_serialize(&cfg, reg).as_bytes());
            let _ = out.write_all(b"\n");
            Ok(0)
        }
        Command::Skeleton { config } => {
            let cfg = env.config(&config, out)?;
            let _ = out.write_all(canonical_serialize(&make_skeleton(&cfg, reg), reg).as_bytes());
            let _ = out.write_all(b"\n");
            Ok(0)
        }
        Command::Sample { n, seed, out: dir, weights } => {
            if n == 0 {
                return Err(Failure::Usage("--n must be at least 1".into()));
            }
            let w = match weights {
                Some(p) => SamplingWeights::from_json_str(&read(&p)?).map_err(|e| Failure::Usage(e.to_string()))?,
                None => SamplingWeights::default(),
            };
            std::fs::create_dir_all(&dir).map_err(|e| Failure::Usage(format!("cannot create {}: {e}", dir.display())))?;
            let m = run_pipeline(n, seed, &w, reg, &env.body, &dir).map_err(|e| Failure::Usage(e.to_string()))?;
            let summary = json!({
                "manifest": dir.join("manifest.json").display().to_string(),
                "n_requested": m.n_requested,
                "n_accepted": m.n_accepted,
                "rejections": m.rejections,
                "complete": m.complete,
            });
            let _ = out.write_all(pretty(&summary).as_bytes());
            Ok(0)
        }
        Command::Editpair { a, b } => {
            let (a, b) = (env.config(&a, out)?, env.config(&b, out)?);
            let rec = make_edit_pair(&a, &b, reg).map_err(invalid)?;
            let _ = out.write_all(pretty(&rec).as_bytes());
            Ok(0)
        }
        Command::Simparams { material, soft, light, smooth, thickness, mode, pairing, alpha, materials } => {
            let mats = match materials {
                Some(p) => MaterialRegistry::from_json_str(&read(&p)?).map_err(|e| Failure::Usage(e.to_string()))?,
                None => MaterialRegistry::default(),
            };
            let (base, base_scores) = mats.lookup_base(&material).map_err(invalid)?;
            let target = DescriptorScores { soft, light, smooth, thickness_score: thickness };
            let a = AlphaCoeffs { alpha_m: alpha, alpha_b: alpha, alpha_d: alpha, alpha_t: alpha };
            let mode = match mode {
                ModeArg::Identity => MapMode::IdentityPreserving,
                ModeArg::Literal => MapMode::Literal,
            };
            let pairing = match pairing {
                PairingArg::SmoothBend => Pairing::SmoothBend,
                PairingArg::LightBend => Pairing::LightBend,
            };
            let params = map_scores(&base, &base_scores, &target, &a, mode, pairing).map_err(invalid)?;
            let _ = out.write_all(pretty(&json!({"material": material, "base": base, "params": params})).as_bytes());
            Ok(0)
        }
        Command::Diffpattern { a, b, tau, samples, align } => {
            let pa = parse_pattern(&read(&a)?).map_err(invalid)?;
            let pb = parse_pattern(&read(&b)?).map_err(invalid)?;
            let align = match align {
                AlignArg::Centroid => Alignment::Centroid,
                AlignArg::Principal => Alignment::PrincipalAxes,
            };
            let report = compare_patterns(&pa, &pb, samples.max(2), tau, align).map_err(invalid)?;
            let _ = out.write_all(pretty(&report).as_bytes());
            Ok(0)
        }
        Command::Serve { port, host, assets } => {
            let svc = Arc::new(Service { registry: env.reg, body: env.body, assets, ..Service::default() });
            let rt = tokio::runtime::Builder::new_multi_thread()
                .enable_all()
                .build()
                .map_err(|e| Failure::Usage(e.to_string()))?;
            rt.block_on(async move {
                let listener = tokio::net::TcpListener::bind((host.as_str(), port))
                    .await
                    .map_err(|e| Failure::Usage(format!("cannot bind {host}:{port}: {e}")))?;
                crate::server::serve(listener, svc).await.map_err(|e| Failure::Usage(e.to_string()))
            })?;
            Ok(0)
        }
    }
}

/// Runs one invocation; `args[0]` is the program name.
pub fn run_cli<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(Failure::Invalid(m)) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}\n\nUsage: patternc [--registry FILE] [--body FILE] <COMMAND>");
            2
        }
    }
}
