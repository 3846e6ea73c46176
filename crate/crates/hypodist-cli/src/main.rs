//! Command-line front end: distances between spectrum files, leave-one-out
//! cross-validation over a labeled directory, the synthetic two-class
//! experiment, and a kernel benchmark.
//!
//! Output contract: machine-readable CSV goes to files under `--out`,
//! human-readable tables to standard output. Every run writes a JSON
//! manifest (resolved configuration, seed, input digests, timing) next to
//! its outputs, sufficient to replay it. Exit codes: 0 success, 1 data
//! error, 2 usage error.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use hypodist::classify::{loocv_error_from_matrix, self_distance_matrix};
use hypodist::metric::{hypo_hausdorff, hypo_hausdorff_pruned, oracle_hausdorff};
use hypodist::preprocess::{
    load_spectra, run_pipeline, write_spectrum_csv, PipelineConfig, RawSpectrum,
};
use hypodist::simulate::{run_experiment, ExperimentConfig, SimModel};
use hypodist::stream::substream;
use hypodist::{GridFunction, LabeledSample, MetricKind, Seed};

#[derive(Parser)]
#[command(
    name = "hypodist",
    version,
    about = "Visual distances for spiky functional data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Distance between two spectra stored as t,value CSV files
    Dist {
        /// First spectrum file
        #[arg(long)]
        a: PathBuf,
        /// Second spectrum file (must share the grid of the first)
        #[arg(long)]
        b: PathBuf,
        /// hausdorff, l2 or sup
        #[arg(long)]
        metric: MetricKind,
        /// Use the pruned hypograph-Hausdorff kernel (same value, faster)
        #[arg(long)]
        pruned: bool,
        /// Also report the raster oracle at this resolution and the gap
        #[arg(long, value_name = "RES")]
        oracle: Option<f64>,
        /// Output directory for the run manifest
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Leave-one-out cross-validation over a directory of labeled spectra
    KnnCv {
        /// Directory of t,value CSV files (or a single file)
        #[arg(long)]
        data: PathBuf,
        /// id,label CSV
        #[arg(long)]
        labels: PathBuf,
        /// Comma-separated neighbor counts, e.g. 3,5,7,9
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<usize>,
        /// Comma-separated metrics, e.g. hausdorff,l2,sup
        #[arg(long, value_delimiter = ',', required = true)]
        metric: Vec<MetricKind>,
        /// Seed for randomized vote tie-breaking
        #[arg(long)]
        seed: u64,
        /// key=value preprocessing config (see PipelineConfig)
        #[arg(long, value_name = "CONFIG")]
        pipeline: Option<PathBuf>,
        /// Write the processed spectra as CSV under OUT/processed/
        #[arg(long)]
        dump_processed: bool,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Misclassification experiment on synthetic two-class trajectories
    Simulate {
        /// 1 (touching class supports) or 2 (separated)
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        model: u8,
        /// Number of replications (fresh train and test samples each)
        #[arg(long)]
        reps: usize,
        #[arg(long)]
        seed: u64,
        /// Grid size for the trajectories
        #[arg(long, default_value_t = 100)]
        grid: usize,
        /// Training trajectories per class
        #[arg(long, default_value_t = 50)]
        train: usize,
        /// Test trajectories per class
        #[arg(long, default_value_t = 50)]
        test: usize,
        /// Comma-separated neighbor counts
        #[arg(long, value_delimiter = ',', default_values_t = [3usize, 5, 7, 9])]
        k: Vec<usize>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Time the naive vs pruned kernels on random pairs
    Bench {
        /// Comma-separated grid sizes
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long)]
        seed: u64,
        /// Random pairs per grid size
        #[arg(long, default_value_t = 3)]
        pairs: usize,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

#[derive(Serialize)]
struct InputDigest {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct RunManifest {
    subcommand: String,
    version: String,
    config: serde_json::Value,
    seed: Option<u64>,
    inputs: Vec<InputDigest>,
    timing_seconds: f64,
}

fn digest_file(path: &Path) -> anyhow::Result<InputDigest> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(InputDigest {
        path: path.display().to_string(),
        sha256: hex::encode(Sha256::digest(&bytes)),
    })
}

fn digest_inputs(paths: &[&Path]) -> anyhow::Result<Vec<InputDigest>> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut files: Vec<PathBuf> = fs::read_dir(p)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.is_file())
                .collect();
            files.sort();
            for f in files {
                out.push(digest_file(&f)?);
            }
        } else {
            out.push(digest_file(p)?);
        }
    }
    Ok(out)
}

fn write_manifest(out_dir: &Path, manifest: &RunManifest) -> anyhow::Result<PathBuf> {
    fs::create_dir_all(out_dir)?;
    let path = out_dir.join(format!("{}_manifest.json", manifest.subcommand));
    let json = serde_json::to_string_pretty(manifest)?;
    fs::write(&path, json)?;
    Ok(path)
}

fn load_single_spectrum(path: &Path) -> anyhow::Result<GridFunction> {
    let spectra = load_spectra(path, None)?;
    let s: &RawSpectrum = &spectra[0];
    Ok(GridFunction::new(
        s.abscissae().to_vec(),
        s.intensities().to_vec(),
    )?)
}

fn cmd_dist(
    a: &Path,
    b: &Path,
    metric: MetricKind,
    pruned: bool,
    oracle: Option<f64>,
    out: &Path,
) -> anyhow::Result<()> {
    let t0 = Instant::now();
    let fa = load_single_spectrum(a)?;
    let fb = load_single_spectrum(b)?;
    if pruned && metric != MetricKind::HypoHausdorff {
        eprintln!("note: --pruned only affects the hausdorff metric");
    }
    let value = match (metric, pruned) {
        (MetricKind::HypoHausdorff, false) => hypo_hausdorff(&fa, &fb)?,
        (MetricKind::HypoHausdorff, true) => hypo_hausdorff_pruned(&fa, &fb)?,
        _ => metric.distance(&fa, &fb)?,
    };
    println!("metric,value");
    println!("{metric},{value}");
    if let Some(res) = oracle {
        let reference = oracle_hausdorff(&fa, &fb, res)?;
        println!("oracle,{reference}");
        println!("gap,{}", (value - reference).abs());
    }
    let manifest = RunManifest {
        subcommand: "dist".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: serde_json::json!({
            "a": a.display().to_string(),
            "b": b.display().to_string(),
            "metric": metric.to_string(),
            "pruned": pruned,
            "oracle": oracle,
        }),
        seed: None,
        inputs: digest_inputs(&[a, b])?,
        timing_seconds: t0.elapsed().as_secs_f64(),
    };
    write_manifest(out, &manifest)?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_knn_cv(
    data: &Path,
    labels: &Path,
    ks: &[usize],
    metrics: &[MetricKind],
    seed: u64,
    pipeline: Option<&Path>,
    dump_processed: bool,
    out: &Path,
) -> anyhow::Result<()> {
    let t0 = Instant::now();
    for &k in ks {
        if k % 2 == 0 {
            eprintln!("warning: even k = {k} can produce vote ties, broken by a seeded coin");
        }
    }
    let spectra = load_spectra(data, Some(labels))?;
    fs::create_dir_all(out)?;

    let (sample, ids) = match pipeline {
        Some(config_path) => {
            let text = fs::read_to_string(config_path)
                .with_context(|| format!("reading {}", config_path.display()))?;
            let config = PipelineConfig::parse(&text)?;
            let result = run_pipeline(&spectra, &config)?;
            fs::write(
                out.join("provenance.log"),
                result.provenance.join("\n") + "\n",
            )?;
            if dump_processed {
                let dir = out.join("processed");
                fs::create_dir_all(&dir)?;
                for (id, f) in result.ids.iter().zip(result.sample.functions()) {
                    write_spectrum_csv(&dir.join(format!("{id}.csv")), f)?;
                }
            }
            (result.sample, result.ids)
        }
        None => {
            let mut functions = Vec::new();
            let mut labels_vec = Vec::new();
            let mut ids = Vec::new();
            for s in &spectra {
                let label = s
                    .label
                    .ok_or_else(|| anyhow::anyhow!("spectrum '{}' has no label", s.id))?;
                functions.push(GridFunction::new(
                    s.abscissae().to_vec(),
                    s.intensities().to_vec(),
                )?);
                labels_vec.push(label);
                ids.push(s.id.clone());
            }
            (LabeledSample::new(functions, labels_vec)?, ids)
        }
    };

    let mut csv = String::from("k,metric,error\n");
    let mut table = format!("{:>4}", "k");
    for m in metrics {
        table.push_str(&format!("  {:>9}", m.to_string()));
    }
    table.push('\n');
    let mut errors = vec![vec![0.0; metrics.len()]; ks.len()];
    for (mi, &metric) in metrics.iter().enumerate() {
        let matrix = self_distance_matrix(sample.functions(), metric)?;
        for (ki, &k) in ks.iter().enumerate() {
            let tie_seed = Seed(substream(Seed(seed), &[mi as u64, k as u64]));
            let err = loocv_error_from_matrix(&matrix, sample.labels(), k, tie_seed)?;
            errors[ki][mi] = err;
            csv.push_str(&format!("{k},{metric},{err}\n"));
        }
    }
    for (ki, &k) in ks.iter().enumerate() {
        table.push_str(&format!("{k:>4}"));
        for err in &errors[ki] {
            table.push_str(&format!("  {err:>9.3}"));
        }
        table.push('\n');
    }
    print!("{table}");
    fs::write(out.join("loocv_errors.csv"), &csv)?;

    let manifest = RunManifest {
        subcommand: "knn-cv".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: serde_json::json!({
            "data": data.display().to_string(),
            "labels": labels.display().to_string(),
            "k": ks,
            "metric": metrics.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
            "pipeline": pipeline.map(|p| p.display().to_string()),
            "dump_processed": dump_processed,
            "spectra": ids,
            "tie_stream": "substream(seed, [metric_index, k]) per (metric, k), then per fold",
        }),
        seed: Some(seed),
        inputs: {
            let mut paths: Vec<&Path> = vec![data, labels];
            if let Some(p) = pipeline {
                paths.push(p);
            }
            digest_inputs(&paths)?
        },
        timing_seconds: t0.elapsed().as_secs_f64(),
    };
    write_manifest(out, &manifest)?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    model: u8,
    reps: usize,
    seed: u64,
    grid: usize,
    train: usize,
    test: usize,
    ks: &[usize],
    out: &Path,
) -> anyhow::Result<()> {
    let t0 = Instant::now();
    let mut sim_model = if model == 1 {
        SimModel::model1()
    } else {
        SimModel::model2()
    };
    sim_model.grid_size = grid;
    let config = ExperimentConfig {
        model: sim_model,
        train_per_class: train,
        test_per_class: test,
        ks: ks.to_vec(),
        metrics: MetricKind::ALL.to_vec(),
        replications: reps,
        seed: Seed(seed),
    };
    let table = run_experiment(&config)?;
    print!("{}", table.to_aligned_string());
    fs::create_dir_all(out)?;
    fs::write(out.join("simulate_errors.csv"), table.to_csv_string())?;

    let manifest = RunManifest {
        subcommand: "simulate".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: serde_json::json!({
            "model": model,
            "a1": config.model.a1,
            "a2": config.model.a2,
            "peak_base": config.model.peak_base,
            "peak_height": config.model.peak_height,
            "grid": grid,
            "train_per_class": train,
            "test_per_class": test,
            "k": ks,
            "metrics": config.metrics.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
            "replications": reps,
            "streams": "trajectory [rep, group, index], ties [rep, 2, metric_index, k]",
        }),
        seed: Some(seed),
        inputs: vec![],
        timing_seconds: t0.elapsed().as_secs_f64(),
    };
    write_manifest(out, &manifest)?;
    Ok(())
}

fn cmd_bench(sizes: &[usize], seed: u64, pairs: usize, out: &Path) -> anyhow::Result<()> {
    let t0 = Instant::now();
    let rows = hypodist::bench::bench_kernels(sizes, pairs, Seed(seed))?;
    let mut csv = String::from(hypodist::bench::BenchRow::csv_header());
    csv.push('\n');
    for row in &rows {
        csv.push_str(&row.to_csv_line());
        csv.push('\n');
    }
    print!("{csv}");
    fs::create_dir_all(out)?;
    fs::write(out.join("bench.csv"), &csv)?;
    let manifest = RunManifest {
        subcommand: "bench".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: serde_json::json!({ "sizes": sizes, "pairs": pairs }),
        seed: Some(seed),
        inputs: vec![],
        timing_seconds: t0.elapsed().as_secs_f64(),
    };
    write_manifest(out, &manifest)?;
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Dist {
            a,
            b,
            metric,
            pruned,
            oracle,
            out,
        } => cmd_dist(&a, &b, metric, pruned, oracle, &out),
        Command::KnnCv {
            data,
            labels,
            k,
            metric,
            seed,
            pipeline,
            dump_processed,
            out,
        } => {
            if k.is_empty() || metric.is_empty() {
                bail!("need at least one k and one metric");
            }
            cmd_knn_cv(
                &data,
                &labels,
                &k,
                &metric,
                seed,
                pipeline.as_deref(),
                dump_processed,
                &out,
            )
        }
        Command::Simulate {
            model,
            reps,
            seed,
            grid,
            train,
            test,
            k,
            out,
        } => cmd_simulate(model, reps, seed, grid, train, test, &k, &out),
        Command::Bench {
            sizes,
            seed,
            pairs,
            out,
        } => cmd_bench(&sizes, seed, pairs, &out),
    }
}

fn main() {
    let cli = Cli::parse(); // exits 2 on usage errors
    if let Err(e) = run(cli) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
