//! `roughlogo` command-line tool.
//!
//! Exit codes: 0 success, 1 usage, 2 I/O, 3 data or format error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, warn};
use rand::Rng;

use roughlogo::eval::{self, EvalReport};
use roughlogo::matcher::{Retriever, DEFAULT_K};
use roughlogo::raster::DEFAULT_THRESHOLD;
use roughlogo::report;
use roughlogo::synth;
use roughlogo::{BinaryRaster, DegradeKind, DegradeSpec, Error, Exec, FeatureTable, Grid, MatchWeights};

#[derive(Parser, Debug)]
#[command(
    name = "roughlogo",
    version,
    about = "Binary logo retrieval with rough-set polygon reducts"
)]
struct Cli {
    /// Run on a single thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Extract features of every image in a directory into a CSV table.
    Build {
        corpus_dir: PathBuf,
        out_csv: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Rank the indexed images against one query image.
    Query {
        csv: PathBuf,
        image: PathBuf,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        matching: Matching,
        /// Write an HTML page showing the query beside its results.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Directory holding the indexed images (for --report). Defaults to
        /// the directory of the CSV.
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Write the query's upper-cover polygons as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Write degraded copies of sampled corpus images as queries.
    Degrade {
        corpus_dir: PathBuf,
        out_dir: PathBuf,
        /// Number of corpus images to sample.
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Degradations to apply (default: all five).
        #[arg(long, value_enum, value_delimiter = ',')]
        kinds: Vec<Kind>,
        /// Fixed rotation angle in degrees instead of a seeded pick from
        /// 90, 180, 270 and 5.
        #[arg(long, allow_hyphen_values = true)]
        angle: Option<f64>,
        /// Horizontal shear of the affine degradation.
        #[arg(long, default_value_t = 0.1, allow_hyphen_values = true)]
        shear: f64,
        #[arg(long, default_value_t = 0.01)]
        density: f64,
        /// Erosion and dilation radius.
        #[arg(long, default_value_t = 1)]
        radius: u32,
        #[arg(long, value_enum, default_value_t = Format::Pbm)]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: u8,
    },
    /// Run every query in a directory and report MAP@k and timing.
    Eval {
        csv: PathBuf,
        query_dir: PathBuf,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        matching: Matching,
    },
    /// Generate a synthetic logo corpus.
    Gen {
        out_dir: PathBuf,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        grid: u32,
        #[arg(long, value_enum, default_value_t = Format::Pbm)]
        format: Format,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// Cell side in pixels.
    #[arg(long, default_value_t = 3)]
    grid: u32,
    /// Gray level below which a pixel is black.
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    threshold: u8,
}

#[derive(Args, Debug)]
struct Matching {
    #[arg(long, default_value_t = DEFAULT_K)]
    k: usize,
    /// Weights as `key=value,...` or the path of a file of `key = value`
    /// lines. Keys: en hc pc vdc hdc er poh concavity tau.
    #[arg(long)]
    weights: Option<String>,
    /// Vote threshold; overrides any tau given in --weights.
    #[arg(long)]
    tau: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Rotate,
    Affine,
    SaltPepper,
    Erode,
    Dilate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Pbm,
    Png,
}

impl Format {
    fn ext(self) -> &'static str {
        match self {
            Format::Pbm => "pbm",
            Format::Png => "png",
        }
    }
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Lib(Error::InvalidWeights(_) | Error::InvalidDegrade(_)) => 1,
            Failure::Lib(e) if e.is_io() => 2,
            Failure::Lib(_) => 3,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => f.write_str(m),
            Failure::Lib(e) => write!(f, "{e}"),
        }
    }
}

type CliResult<T = ()> = std::result::Result<T, Failure>;

fn grid(g: u32) -> CliResult<Grid> {
    Grid::new(g).map_err(|_| Failure::Usage("--grid must be at least 1".into()))
}

impl Matching {
    fn weights(&self) -> CliResult<MatchWeights> {
        let mut w = MatchWeights::default();
        if let Some(spec) = &self.weights {
            let text = if spec.contains('=') {
                spec.clone()
            } else {
                fs::read_to_string(spec).map_err(|e| Error::Io {
                    path: spec.into(),
                    source: e,
                })?
            };
            w.apply(&text)?;
        }
        if let Some(tau) = self.tau {
            w.tau = tau;
        }
        w.validate()?;
        if self.k == 0 {
            return Err(Failure::Usage("--k must be at least 1".into()));
        }
        Ok(w)
    }
}

fn ensure_dir(dir: &Path) -> CliResult {
    fs::create_dir_all(dir).map_err(|e| Error::Io {
        path: dir.to_path_buf(),
        source: e,
    })?;
    Ok(())
}

/// Exit code for a batch where every item failed.
fn all_failed(failed: &[eval::Failure]) -> Failure {
    let io = failed.iter().all(|(_, e)| e.is_io());
    let msg = format!("all {} images failed", failed.len());
    if io {
        Failure::Lib(Error::Io {
            path: failed[0].0.clone(),
            source: std::io::Error::other(msg),
        })
    } else {
        Failure::Lib(Error::Eval(msg))
    }
}

fn cmd_build(dir: &Path, out: &Path, common: &Common, exec: Exec) -> CliResult {
    let grid = grid(common.grid)?;
    let (images, mut failed) = eval::load_dir(dir, common.threshold, exec)?;
    let (table, f2) = eval::build_table(&images, grid, exec);
    failed.extend(f2);
    for (p, e) in &failed {
        warn!("skipping {}: {e}", p.display());
    }
    if table.is_empty() && !failed.is_empty() {
        return Err(all_failed(&failed));
    }
    if table.is_empty() {
        warn!("no images found in {}", dir.display());
    }
    table.serialize(out)?;
    let index = roughlogo::KdIndex::build(&table);
    println!("images: {}", table.len());
    println!("distinct (holes, parents) points: {}", index.len());
    if !failed.is_empty() {
        println!("skipped: {}", failed.len());
    }
    Ok(())
}

fn find_image(dir: &Path, id: &str) -> Option<BinaryRaster> {
    eval::IMAGE_EXTENSIONS
        .iter()
        .map(|ext| dir.join(format!("{id}.{ext}")))
        .find(|p| p.is_file())
        .and_then(|p| BinaryRaster::load(p, DEFAULT_THRESHOLD).ok())
}

#[allow(clippy::too_many_arguments)]
fn cmd_query(
    csv: &Path,
    image: &Path,
    common: &Common,
    matching: &Matching,
    report_path: Option<&Path>,
    corpus: Option<&Path>,
    svg: Option<&Path>,
    exec: Exec,
) -> CliResult {
    let w = matching.weights()?;
    let grid = grid(common.grid)?;
    let table = FeatureTable::parse(csv)?;
    let query = BinaryRaster::load(image, common.threshold)?;
    let retriever = Retriever::new(&table, w, grid)?.with_exec(exec);
    let ranked = retriever.query_raster(&query, matching.k)?;
    for (i, r) in ranked.iter().enumerate() {
        println!("{}, {}, {}, {:.4}", i + 1, r.image_id, r.votes, r.tiebreak_distance);
    }
    if let Some(path) = svg {
        let polys = roughlogo::cover::rough_cover(&query, grid)?.upper;
        fs::write(path, report::polygons_svg(&query, &polys)).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
    }
    if let Some(path) = report_path {
        let dir = corpus
            .map(Path::to_path_buf)
            .or_else(|| csv.parent().map(Path::to_path_buf))
            .unwrap_or_default();
        let results: Vec<_> = ranked
            .into_iter()
            .map(|r| {
                let img = find_image(&dir, &r.image_id);
                if img.is_none() {
                    warn!("no image for {} in {}", r.image_id, dir.display());
                }
                (r, img)
            })
            .collect();
        let name = image
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let html = report::html_report(&name, &query, &results)?;
        fs::write(path, html).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        info!("report written to {}", path.display());
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_degrade(
    dir: &Path,
    out: &Path,
    count: usize,
    seed: u64,
    kinds: &[Kind],
    angle: Option<f64>,
    shear: f64,
    density: f64,
    radius: u32,
    format: Format,
    threshold: u8,
    exec: Exec,
) -> CliResult {
    let kinds = if kinds.is_empty() {
        vec![Kind::Rotate, Kind::Affine, Kind::SaltPepper, Kind::Erode, Kind::Dilate]
    } else {
        kinds.to_vec()
    };
    let (corpus, failed) = eval::load_dir(dir, threshold, exec)?;
    for (p, e) in &failed {
        warn!("skipping {}: {e}", p.display());
    }
    let queries = eval::degrade_queries(&corpus, count, seed, |rng| {
        let picked = eval::SUITE_ANGLES[rng.random_range(0..eval::SUITE_ANGLES.len())];
        let noise_seed: u64 = rng.random();
        kinds
            .iter()
            .map(|k| match k {
                Kind::Rotate => DegradeSpec::new(DegradeKind::Rotate {
                    angle: angle.unwrap_or(picked),
                }),
                Kind::Affine => DegradeSpec::new(DegradeKind::Affine {
                    matrix: [1.0, shear, 0.0, 0.0, 1.0, 0.0],
                }),
                Kind::SaltPepper => DegradeSpec::new(DegradeKind::SaltPepper { density }).with_seed(noise_seed),
                Kind::Erode => DegradeSpec::new(DegradeKind::Erode { radius }),
                Kind::Dilate => DegradeSpec::new(DegradeKind::Dilate { radius }),
            })
            .collect()
    })?;
    ensure_dir(out)?;
    for (name, r) in &queries {
        r.save(out.join(format!("{name}.{}", format.ext())))?;
    }
    println!("wrote {} query images to {}", queries.len(), out.display());
    Ok(())
}

fn cmd_eval(csv: &Path, qdir: &Path, common: &Common, matching: &Matching, exec: Exec) -> CliResult {
    let w = matching.weights()?;
    let grid = grid(common.grid)?;
    let table = FeatureTable::parse(csv)?;
    let paths = eval::list_images(qdir)?;
    if paths.is_empty() {
        return Err(Error::Eval(format!("no query images in {}", qdir.display())).into());
    }
    let mut queries = Vec::with_capacity(paths.len());
    for p in &paths {
        eval::ground_truth(p)?;
        queries.push((eval::image_id(p)?, BinaryRaster::load(p, common.threshold)?));
    }
    let retriever = Retriever::new(&table, w, grid)?.with_exec(exec);
    let report: EvalReport = eval::run_eval(&retriever, &queries, matching.k)?;
    print!("{}", report.render_text());
    println!();
    println!("{}", EvalReport::CSV_HEADER);
    println!("{}", report.csv_row());
    Ok(())
}

fn cmd_gen(out: &Path, count: usize, seed: u64, g: u32, format: Format) -> CliResult {
    let corpus = synth::generate_corpus(count, seed, grid(g)?)?;
    ensure_dir(out)?;
    for (id, r) in &corpus {
        r.save(out.join(format!("{id}.{}", format.ext())))?;
    }
    println!("wrote {} logos to {}", corpus.len(), out.display());
    Ok(())
}

fn run(cli: Cli) -> CliResult {
    let exec = if cli.sequential {
        Exec::Sequential
    } else {
        Exec::default()
    };
    match &cli.command {
        Command::Build {
            corpus_dir,
            out_csv,
            common,
        } => cmd_build(corpus_dir, out_csv, common, exec),
        Command::Query {
            csv,
            image,
            common,
            matching,
            report,
            corpus,
            svg,
        } => cmd_query(
            csv,
            image,
            common,
            matching,
            report.as_deref(),
            corpus.as_deref(),
            svg.as_deref(),
            exec,
        ),
        Command::Degrade {
            corpus_dir,
            out_dir,
            count,
            seed,
            kinds,
            angle,
            shear,
            density,
            radius,
            format,
            threshold,
        } => cmd_degrade(
            corpus_dir, out_dir, *count, *seed, kinds, *angle, *shear, *density, *radius, *format, *threshold, exec,
        ),
        Command::Eval {
            csv,
            query_dir,
            common,
            matching,
        } => cmd_eval(csv, query_dir, common, matching, exec),
        Command::Gen {
            out_dir,
            count,
            seed,
            grid,
            format,
        } => cmd_gen(out_dir, *count, *seed, *grid, *format),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
