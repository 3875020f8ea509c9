//! Corpus loading, degraded query generation and MAP@k evaluation.
//!
//! Query files are named `<original_id>__<kind>.<ext>`; the part before the
//! last `__` is the single relevant corpus image. Average precision for one
//! relevant item is the reciprocal rank when it appears within the top `k`
//! and 0 otherwise.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cover::Grid;
use crate::error::{Error, Result};
use crate::featuredb::FeatureTable;
use crate::matcher::{RankedResult, Retriever};
use crate::par::{self, Exec};
use crate::raster::{degrade, BinaryRaster, DegradeKind, DegradeSpec};
use crate::reduct::{extract_features, validate_image_id, ImageFeature};

pub const IMAGE_EXTENSIONS: [&str; 4] = ["pbm", "pgm", "pnm", "png"];
/// Rotation angles the default suite draws from.
pub const SUITE_ANGLES: [f64; 4] = [90.0, 180.0, 270.0, 5.0];

/// Image files of a directory (by extension), sorted by path.
pub fn list_images(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        let ext = path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
        if path.is_file() && ext.is_some_and(|e| IMAGE_EXTENSIONS.contains(&e.as_str())) {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}

/// File stem used as image id.
pub fn image_id(path: &Path) -> Result<String> {
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .ok_or_else(|| Error::InvalidId(path.display().to_string()))?;
    validate_image_id(stem)?;
    Ok(stem.to_string())
}

/// Ground-truth id encoded in a query file name.
pub fn ground_truth(path: &Path) -> Result<String> {
    let id = image_id(path)?;
    match id.rsplit_once("__") {
        Some((orig, kind)) if !orig.is_empty() && !kind.is_empty() => Ok(orig.to_string()),
        _ => Err(Error::Eval(format!(
            "query file {} is not named <original_id>__<kind>.<ext>",
            path.display()
        ))),
    }
}

pub type Failure = (PathBuf, Error);
pub type Loaded = (Vec<(String, BinaryRaster)>, Vec<Failure>);

/// Loads every image in `dir`; unreadable files are returned separately.
pub fn load_dir(dir: &Path, threshold: u8, exec: Exec) -> Result<Loaded> {
    let paths = list_images(dir)?;
    let loaded = par::map(exec, &paths, |p| {
        image_id(p).and_then(|id| Ok((id, BinaryRaster::load(p, threshold)?)))
    });
    let mut ok = Vec::new();
    let mut failed = Vec::new();
    for (p, r) in paths.into_iter().zip(loaded) {
        match r {
            Ok(x) => ok.push(x),
            Err(e) => failed.push((p, e)),
        }
    }
    Ok((ok, failed))
}

/// Extracts features of every image, sorted by id. Failures are returned
/// with the image id in place of a path.
pub fn build_table(images: &[(String, BinaryRaster)], grid: Grid, exec: Exec) -> (FeatureTable, Vec<Failure>) {
    let feats = par::map(exec, images, |(id, r)| extract_features(id, r, grid));
    let mut entries = Vec::new();
    let mut failed = Vec::new();
    for ((id, _), f) in images.iter().zip(feats) {
        match f {
            Ok(f) => entries.push(f),
            Err(e) => failed.push((PathBuf::from(id), e)),
        }
    }
    entries.sort_by(|a, b| a.image_id.cmp(&b.image_id));
    (FeatureTable::new(entries), failed)
}

/// One spec per degradation kind: a rotation drawn from [`SUITE_ANGLES`],
/// a mild shear, salt-and-pepper noise at 0.01, and radius-1 erosion and
/// dilation.
pub fn default_suite(rng: &mut impl Rng) -> Vec<DegradeSpec> {
    let angle = SUITE_ANGLES[rng.random_range(0..SUITE_ANGLES.len())];
    let seed = rng.random();
    vec![
        DegradeSpec::new(DegradeKind::Rotate { angle }),
        DegradeSpec::new(DegradeKind::Affine {
            matrix: [1.0, 0.1, 0.0, 0.0, 1.0, 0.0],
        }),
        DegradeSpec::new(DegradeKind::SaltPepper { density: 0.01 }).with_seed(seed),
        DegradeSpec::new(DegradeKind::Erode { radius: 1 }),
        DegradeSpec::new(DegradeKind::Dilate { radius: 1 }),
    ]
}

/// Samples `count` corpus images and applies every spec of `suite` to each.
/// `suite` receives the sampling RNG so per-image parameters stay seeded.
/// Output names are `<id>__<kind>`; the list is sorted by name.
pub fn degrade_queries<F>(
    corpus: &[(String, BinaryRaster)],
    count: usize,
    seed: u64,
    mut suite: F,
) -> Result<Vec<(String, BinaryRaster)>>
where
    F: FnMut(&mut ChaCha8Rng) -> Vec<DegradeSpec>,
{
    if count > corpus.len() {
        return Err(Error::Eval(format!(
            "requested {count} query images but the corpus holds only {}",
            corpus.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picks = index::sample(&mut rng, corpus.len(), count).into_vec();
    picks.sort_unstable();
    let mut out = Vec::new();
    for i in picks {
        let (id, raster) = &corpus[i];
        for spec in suite(&mut rng) {
            spec.validate()?;
            out.push((format!("{id}__{}", spec.kind.name()), degrade(raster, &spec)?));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// Reciprocal rank truncated at `k`.
pub fn average_precision(rank: Option<usize>, k: usize) -> f64 {
    match rank {
        Some(r) if r >= 1 && r <= k => 1.0 / r as f64,
        _ => 0.0,
    }
}

pub fn mean_average_precision(ranks: &[Option<usize>], k: usize) -> f64 {
    if ranks.is_empty() {
        return 0.0;
    }
    ranks.iter().map(|&r| average_precision(r, k)).sum::<f64>() / ranks.len() as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryOutcome {
    pub query_id: String,
    pub truth: String,
    /// 1-based rank of the ground truth, `None` when outside the top `k`.
    pub rank: Option<usize>,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub k: usize,
    pub map_at_k: f64,
    pub per_query: Vec<QueryOutcome>,
    pub mean_query_seconds: f64,
    pub corpus_size: usize,
}

impl EvalReport {
    pub const CSV_HEADER: &'static str = "queries,corpus_size,k,map_at_k,hits_at_1,misses,mean_query_seconds";

    pub fn hits_at_1(&self) -> usize {
        self.per_query.iter().filter(|q| q.rank == Some(1)).count()
    }

    pub fn misses(&self) -> usize {
        self.per_query.iter().filter(|q| q.rank.is_none()).count()
    }

    /// Machine-readable summary; every field but the last is deterministic.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{:.6},{},{},{:.6}",
            self.per_query.len(),
            self.corpus_size,
            self.k,
            self.map_at_k,
            self.hits_at_1(),
            self.misses(),
            self.mean_query_seconds
        )
    }

    /// Aligned per-query listing followed by the summary.
    pub fn render_text(&self) -> String {
        let w = self
            .per_query
            .iter()
            .map(|q| q.query_id.len())
            .max()
            .unwrap_or(5)
            .max(5);
        let mut s = String::new();
        writeln!(s, "{:<w$}  {:>4}  {:>6}  {:>9}", "query", "rank", "AP", "seconds").unwrap();
        for q in &self.per_query {
            let rank = q.rank.map_or("miss".to_string(), |r| r.to_string());
            writeln!(
                s,
                "{:<w$}  {:>4}  {:>6.3}  {:>9.4}",
                q.query_id,
                rank,
                average_precision(q.rank, self.k),
                q.seconds
            )
            .unwrap();
        }
        writeln!(s).unwrap();
        writeln!(s, "corpus size         {}", self.corpus_size).unwrap();
        writeln!(s, "queries             {}", self.per_query.len()).unwrap();
        writeln!(s, "MAP@{:<15} {:.4}", self.k, self.map_at_k).unwrap();
        writeln!(s, "rank-1 hits         {}", self.hits_at_1()).unwrap();
        writeln!(s, "misses              {}", self.misses()).unwrap();
        writeln!(s, "mean query seconds  {:.4}", self.mean_query_seconds).unwrap();
        s
    }
}

fn rank_of(ranked: &[RankedResult], truth: &str) -> Option<usize> {
    ranked.iter().position(|r| r.image_id == truth).map(|p| p + 1)
}

fn run<T>(
    retriever: &Retriever<'_>,
    queries: &[T],
    k: usize,
    name: impl Fn(&T) -> &str,
    query: impl Fn(&T) -> Result<Vec<RankedResult>>,
) -> Result<EvalReport> {
    if queries.is_empty() {
        return Err(Error::Eval("no query images".into()));
    }
    let mut per_query = Vec::with_capacity(queries.len());
    for q in queries {
        let truth = ground_truth(Path::new(name(q)))?;
        let start = Instant::now();
        let ranked = query(q)?;
        let seconds = start.elapsed().as_secs_f64();
        per_query.push(QueryOutcome {
            query_id: name(q).to_string(),
            rank: rank_of(&ranked, &truth),
            truth,
            seconds,
        });
    }
    let ranks: Vec<_> = per_query.iter().map(|q| q.rank).collect();
    Ok(EvalReport {
        k,
        map_at_k: mean_average_precision(&ranks, k),
        mean_query_seconds: per_query.iter().map(|q| q.seconds).sum::<f64>() / per_query.len() as f64,
        per_query,
        corpus_size: retriever.table().len(),
    })
}

/// Runs every query through `retriever`. Queries are named
/// `<original_id>__<kind>`; timing covers feature extraction, candidate
/// lookup and voting.
pub fn run_eval(retriever: &Retriever<'_>, queries: &[(String, BinaryRaster)], k: usize) -> Result<EvalReport> {
    run(retriever, queries, k, |q| &q.0, |q| retriever.query_raster(&q.1, k))
}

/// Like [`run_eval`] for queries whose features are already extracted;
/// `image_id` carries the `<original_id>__<kind>` name.
pub fn run_eval_features(retriever: &Retriever<'_>, queries: &[ImageFeature], k: usize) -> Result<EvalReport> {
    run(
        retriever,
        queries,
        k,
        |q| &q.image_id,
        |q| retriever.query_features(q, k),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ground_truth_from_names() {
        assert_eq!(ground_truth(Path::new("q/logo_7__rotate.pbm")).unwrap(), "logo_7");
        assert_eq!(ground_truth(Path::new("a__b__salt_pepper.png")).unwrap(), "a__b");
        assert!(ground_truth(Path::new("plain.pbm")).is_err());
        assert!(ground_truth(Path::new("__x.pbm")).is_err());
    }

    #[test]
    fn ap_and_map() {
        assert_eq!(average_precision(Some(1), 5), 1.0);
        assert_eq!(average_precision(Some(4), 5), 0.25);
        assert_eq!(average_precision(Some(6), 5), 0.0);
        assert_eq!(average_precision(None, 5), 0.0);
        assert_eq!(mean_average_precision(&[Some(1), Some(2), None, Some(4)], 5), 0.4375);
        assert_eq!(mean_average_precision(&[], 5), 0.0);
    }

    #[test]
    fn degrade_count_and_names() {
        let corpus: Vec<_> = (0..4)
            .map(|i| {
                let r = BinaryRaster::from_fn(30, 30, |x, y| (x + y + i) % 7 < 3).unwrap();
                (format!("img{i}"), r)
            })
            .collect();
        let q = degrade_queries(&corpus, 3, 9, default_suite).unwrap();
        assert_eq!(q.len(), 15);
        assert!(q.iter().all(|(n, _)| ground_truth(Path::new(n)).is_ok()));
        let again = degrade_queries(&corpus, 3, 9, default_suite).unwrap();
        assert_eq!(q, again);
        let err = degrade_queries(&corpus, 5, 9, default_suite).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains('5') && msg.contains('4'), "{msg}");
    }
}
