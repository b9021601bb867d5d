//! Command implementations behind the `segkappa` binary.
//!
//! Exit codes: 0 on success, 2 when the run completed but some lesion
//! groups were rejected (diagnostics on stderr), and 1 (via `main`) for
//! fatal errors.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use segkappa::conditioning::{apply, ConditioningKind, ConditioningSpec};
use segkappa::mask::{
    ingest_dataset, read_mask, summarize_dataset, write_mask, DatasetSummary, GroupRejection,
    IngestOutcome,
};
use segkappa::plot::{plot_distributions, plot_strips};
use segkappa::report::{write_csv, write_json, AnalysisReport, ReportParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_WARNINGS: i32 = 2;

/// Output formats requested for `analyze`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Formats {
    pub csv: bool,
    pub json: bool,
    pub svg: bool,
}

impl Default for Formats {
    fn default() -> Self {
        Self {
            csv: true,
            json: true,
            svg: true,
        }
    }
}

impl Formats {
    pub fn from_names(names: &[String]) -> anyhow::Result<Self> {
        let mut formats = Self {
            csv: false,
            json: false,
            svg: false,
        };
        for name in names {
            match name.as_str() {
                "csv" => formats.csv = true,
                "json" => formats.json = true,
                "svg" => formats.svg = true,
                other => bail!("unknown format `{other}` (expected csv, json, or svg)"),
            }
        }
        if formats == (Self { csv: false, json: false, svg: false }) {
            bail!("at least one output format is required");
        }
        Ok(formats)
    }
}

/// Full configuration of an `analyze` run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input: PathBuf,
    pub output_dir: PathBuf,
    pub conditionings: Vec<ConditioningKind>,
    pub se_side: usize,
    pub bins: usize,
    pub formats: Formats,
    pub jitter_seed: u64,
    /// Worker threads; `None` lets the runtime decide. Results do not
    /// depend on this.
    pub threads: Option<usize>,
}

fn report_rejections(rejections: &[GroupRejection]) {
    for rejection in rejections {
        eprintln!("warning: rejected {rejection}");
    }
}

fn in_thread_pool<T: Send>(
    threads: Option<usize>,
    job: impl FnOnce() -> anyhow::Result<T> + Send,
) -> anyhow::Result<T> {
    match threads {
        None => job(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .context("failed to build thread pool")?
            .install(job),
    }
}

/// Ingest, analyze, and write every requested artifact.
pub fn cmd_analyze(config: &RunConfig) -> anyhow::Result<i32> {
    let (report, rejections) = in_thread_pool(config.threads, || {
        let IngestOutcome { groups, rejections } = ingest_dataset(&config.input)?;
        report_rejections(&rejections);
        let params = ReportParams {
            conditionings: config.conditionings.clone(),
            se_side: config.se_side,
            bins: config.bins,
            jitter_seed: config.jitter_seed,
        };
        let report = AnalysisReport::compute(&groups, &params)?;
        Ok((report, rejections))
    })?;

    std::fs::create_dir_all(&config.output_dir)
        .with_context(|| format!("cannot create {}", config.output_dir.display()))?;
    if config.formats.csv {
        write_csv(&report, &config.output_dir)?;
    }
    if config.formats.json {
        write_json(&report, &config.output_dir.join("report.json"))?;
    }
    if config.formats.svg {
        plot_distributions(&report, &config.output_dir.join("distributions.svg"))?;
        plot_strips(
            &report,
            config.jitter_seed,
            &config.output_dir.join("strips.svg"),
        )?;
    }

    let eligible = report.per_lesion.len() / report.summaries.len().max(1);
    eprintln!(
        "analyzed {} lesions x {} conditionings -> {}",
        eligible,
        report.summaries.len(),
        config.output_dir.display()
    );
    Ok(if rejections.is_empty() {
        EXIT_OK
    } else {
        EXIT_WARNINGS
    })
}

/// Applies one conditioning to every mask file and writes the results
/// with a `_<kind>` name suffix.
pub fn cmd_condition(
    input: &Path,
    kind: ConditioningKind,
    se_side: usize,
    out: &Path,
) -> anyhow::Result<i32> {
    let spec = ConditioningSpec::with_se_side(kind, se_side)?;
    let mut files: Vec<PathBuf> = if input.is_dir() {
        std::fs::read_dir(input)
            .with_context(|| format!("cannot read {}", input.display()))?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| {
                p.is_file() && p.extension().and_then(|e| e.to_str()) == Some("png")
            })
            .collect()
    } else {
        vec![input.to_path_buf()]
    };
    files.sort();
    if files.is_empty() {
        bail!("no mask files found in {}", input.display());
    }

    std::fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))?;
    for file in &files {
        let mask = read_mask(file)?;
        let conditioned = apply(&spec, &mask);
        let stem = file
            .file_stem()
            .and_then(|s| s.to_str())
            .with_context(|| format!("bad file name {}", file.display()))?;
        write_mask(&out.join(format!("{stem}_{kind}.png")), &conditioned)?;
    }
    eprintln!("conditioned {} masks -> {}", files.len(), out.display());
    Ok(EXIT_OK)
}

/// Prints the kappa between two mask files with six decimals.
pub fn cmd_kappa(path_a: &Path, path_b: &Path) -> anyhow::Result<i32> {
    let a = read_mask(path_a)?;
    let b = read_mask(path_b)?;
    let kappa = segkappa::agreement::cohen_kappa(&a, &b)?;
    println!("{kappa:.6}");
    Ok(EXIT_OK)
}

fn print_summary(summary: &DatasetSummary) {
    println!("{:<12}{:>8}", "annotations", "lesions");
    for (bucket, count) in summary.buckets() {
        println!("{bucket:<12}{count:>8}");
    }
    println!("{:<12}{:>8}", "total", summary.total);
}

/// Prints the annotation-count table for a dataset.
pub fn cmd_summary(input: &Path) -> anyhow::Result<i32> {
    match ingest_dataset(input) {
        Ok(IngestOutcome { groups, rejections }) => {
            report_rejections(&rejections);
            print_summary(&summarize_dataset(&groups));
            Ok(if rejections.is_empty() {
                EXIT_OK
            } else {
                EXIT_WARNINGS
            })
        }
        // a readable but empty source still gets a (zero) table
        Err(segkappa::Error::EmptySource { .. }) => {
            print_summary(&DatasetSummary::default());
            Ok(EXIT_OK)
        }
        Err(e) => Err(e.into()),
    }
}
