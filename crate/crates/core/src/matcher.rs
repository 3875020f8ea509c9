//! Polygon-level voting between a query image and candidate images.
//!
//! Every query polygon is paired with at most one candidate polygon of the
//! same kind (greedily, closest pairs first). A pair whose weighted distance
//! is within `tau` adds one vote to the candidate. Candidates are ranked by
//! votes, then by the summed distance of all their pairs, then by id.

use std::collections::HashMap;
use std::str::FromStr;

use crate::cover::Grid;
use crate::error::{Error, Result};
use crate::featuredb::FeatureTable;
use crate::kdindex::KdIndex;
use crate::par::{self, Exec};
use crate::raster::BinaryRaster;
use crate::reduct::{extract_features, ImageFeature, PolygonAttributes};

/// Default number of results.
pub const DEFAULT_K: usize = 5;
/// Candidate pools are grown until they hold this many times `k` images.
pub const CANDIDATE_FACTOR: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchWeights {
    pub en: f64,
    pub hc: f64,
    pub pc: f64,
    pub vdc: f64,
    pub hdc: f64,
    pub er: f64,
    pub poh: f64,
    pub concavity: f64,
    /// A pair votes when its distance is at most `tau`.
    pub tau: f64,
}

impl Default for MatchWeights {
    fn default() -> Self {
        MatchWeights {
            en: 3.0,
            hc: 3.0,
            pc: 3.0,
            vdc: 2.0,
            hdc: 2.0,
            er: 1.0,
            poh: 1.0,
            concavity: 1.0,
            tau: 4.0,
        }
    }
}

impl MatchWeights {
    fn weights(&self) -> [f64; 8] {
        [
            self.en,
            self.hc,
            self.pc,
            self.vdc,
            self.hdc,
            self.er,
            self.poh,
            self.concavity,
        ]
    }

    pub fn validate(&self) -> Result<()> {
        let w = self.weights();
        if w.iter().chain([&self.tau]).any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidWeights(
                "weights and tau must be finite and non-negative".into(),
            ));
        }
        if w.iter().all(|&v| v == 0.0) {
            return Err(Error::InvalidWeights("at least one weight must be positive".into()));
        }
        Ok(())
    }

    /// Sets one weight by name (`en`, `hc`, `pc`, `vdc`, `hdc`, `er`, `poh`,
    /// `concavity` or `tau`).
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        let slot = match key {
            "en" => &mut self.en,
            "hc" => &mut self.hc,
            "pc" => &mut self.pc,
            "vdc" => &mut self.vdc,
            "hdc" => &mut self.hdc,
            "er" => &mut self.er,
            "poh" => &mut self.poh,
            "concavity" => &mut self.concavity,
            "tau" => &mut self.tau,
            _ => return Err(Error::InvalidWeights(format!("unknown weight {key:?}"))),
        };
        *slot = value;
        Ok(())
    }

    /// Applies `key=value` pairs separated by commas or newlines. Blank
    /// lines and `#` comments are ignored.
    pub fn apply(&mut self, text: &str) -> Result<()> {
        for item in text.split([',', '\n']) {
            let item = item.split('#').next().unwrap().trim();
            if item.is_empty() {
                continue;
            }
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidWeights(format!("expected key = value, got {item:?}")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidWeights(format!("{:?} is not a number", v.trim())))?;
            self.set(k.trim(), v)?;
        }
        self.validate()
    }

    /// Multiplies every weight by `c` and `tau` by `sqrt(c)`, which leaves
    /// rankings unchanged.
    pub fn scaled(&self, c: f64) -> Self {
        MatchWeights {
            en: self.en * c,
            hc: self.hc * c,
            pc: self.pc * c,
            vdc: self.vdc * c,
            hdc: self.hdc * c,
            er: self.er * c,
            poh: self.poh * c,
            concavity: self.concavity * c,
            tau: self.tau * c.sqrt(),
        }
    }
}

impl FromStr for MatchWeights {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut w = MatchWeights::default();
        w.apply(s)?;
        Ok(w)
    }
}

/// Levenshtein distance with unit costs.
pub fn edit_distance(a: &str, b: &str) -> usize {
    let (a, b) = (a.as_bytes(), b.as_bytes());
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, &ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, &cb) in b.iter().enumerate() {
            cur[j + 1] = (prev[j] + usize::from(ca != cb)).min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

#[inline]
fn sq(x: f64) -> f64 {
    x * x
}

/// Weighted Euclidean distance between two polygons of the same kind.
/// Containment is compared by nesting level, since ids are image-local.
pub fn polygon_distance(p: &PolygonAttributes, q: &PolygonAttributes, w: &MatchWeights) -> Result<f64> {
    if p.kind != q.kind {
        return Err(Error::KindMismatch);
    }
    Ok(distance_unchecked(p, q, w))
}

fn distance_unchecked(p: &PolygonAttributes, q: &PolygonAttributes, w: &MatchWeights) -> f64 {
    let delta = |same: bool| if same { 0.0 } else { 1.0 };
    let mut d2 = 0.0;
    if let (Some(a), Some(b)) = (p.en, q.en) {
        d2 += w.en * sq((a - b) as f64);
    }
    let nest = delta(p.nesting == q.nesting);
    d2 += w.hc * nest;
    d2 += w.pc * nest;
    d2 += w.vdc * sq(p.vdc as f64 - q.vdc as f64);
    d2 += w.hdc * sq(p.hdc as f64 - q.hdc as f64);
    d2 += w.er * sq((p.er.log2() - q.er.log2()) as f64);
    d2 += w.poh * delta(p.poh == q.poh);
    d2 += w.concavity * sq(edit_distance(&p.concavity, &q.concavity) as f64);
    d2.sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedResult {
    pub image_id: String,
    pub votes: u32,
    pub tiebreak_distance: f64,
}

impl RankedResult {
    fn order(&self, other: &Self) -> std::cmp::Ordering {
        other
            .votes
            .cmp(&self.votes)
            .then(self.tiebreak_distance.total_cmp(&other.tiebreak_distance))
            .then_with(|| self.image_id.cmp(&other.image_id))
    }
}

/// Votes and summed pair distance of one candidate.
pub fn score(query: &ImageFeature, candidate: &ImageFeature, w: &MatchWeights) -> RankedResult {
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (qi, qp) in query.polys.iter().enumerate() {
        for (ci, cp) in candidate.polys.iter().enumerate() {
            if qp.kind == cp.kind {
                pairs.push((distance_unchecked(qp, cp, w), qi, ci));
            }
        }
    }
    pairs.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut q_used = vec![false; query.polys.len()];
    let mut c_used = vec![false; candidate.polys.len()];
    let mut votes = 0;
    let mut total = 0.0;
    for (d, qi, ci) in pairs {
        if q_used[qi] || c_used[ci] {
            continue;
        }
        q_used[qi] = true;
        c_used[ci] = true;
        total += d;
        if d <= w.tau {
            votes += 1;
        }
    }
    RankedResult {
        image_id: candidate.image_id.clone(),
        votes,
        tiebreak_distance: total,
    }
}

/// Scores every candidate and returns the best `k`.
pub fn vote_and_rank(
    query: &ImageFeature,
    candidates: &[&ImageFeature],
    w: &MatchWeights,
    k: usize,
    exec: Exec,
) -> Vec<RankedResult> {
    let mut results = par::map(exec, candidates, |c| score(query, c, w));
    results.sort_by(RankedResult::order);
    results.truncate(k);
    results
}

/// A feature table with its k-d index, ready for queries.
#[derive(Debug)]
pub struct Retriever<'a> {
    table: &'a FeatureTable,
    index: KdIndex,
    by_id: HashMap<&'a str, &'a ImageFeature>,
    pub weights: MatchWeights,
    pub grid: Grid,
    pub exec: Exec,
}

impl<'a> Retriever<'a> {
    pub fn new(table: &'a FeatureTable, weights: MatchWeights, grid: Grid) -> Result<Self> {
        weights.validate()?;
        Ok(Retriever {
            table,
            index: KdIndex::build(table),
            by_id: table.entries.iter().map(|e| (e.image_id.as_str(), e)).collect(),
            weights,
            grid,
            exec: Exec::default(),
        })
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    pub fn index(&self) -> &KdIndex {
        &self.index
    }

    pub fn table(&self) -> &FeatureTable {
        self.table
    }

    /// Candidates from the query's index point, expanded to the nearest
    /// points until the pool holds at least `CANDIDATE_FACTOR * k` images.
    pub fn candidates(&self, query: &ImageFeature, k: usize) -> Vec<&'a ImageFeature> {
        self.index
            .candidates(query.key(), CANDIDATE_FACTOR * k.max(1))
            .into_iter()
            .map(|id| self.by_id[id])
            .collect()
    }

    pub fn query_features(&self, query: &ImageFeature, k: usize) -> Result<Vec<RankedResult>> {
        if self.table.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let pool = self.candidates(query, k);
        Ok(vote_and_rank(query, &pool, &self.weights, k, self.exec))
    }

    pub fn query_raster(&self, raster: &BinaryRaster, k: usize) -> Result<Vec<RankedResult>> {
        let feature = extract_features("query", raster, self.grid)?;
        self.query_features(&feature, k)
    }
}

/// One-shot retrieval: features, index lookup with expansion, voting.
pub fn retrieve(
    query: &BinaryRaster,
    table: &FeatureTable,
    w: &MatchWeights,
    grid: Grid,
    k: usize,
) -> Result<Vec<RankedResult>> {
    Retriever::new(table, *w, grid)?.query_raster(query, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::PolygonKind;
    use crate::reduct::{BwBin, EdgeRatio};

    fn prim(vdc: u32, hdc: u32, concavity: &str) -> PolygonAttributes {
        PolygonAttributes {
            id: 1,
            kind: PolygonKind::Primary,
            en: Some(1),
            hc: 0,
            pc: 0,
            vdc,
            hdc,
            er: EdgeRatio::One,
            poh: 0,
            concavity: concavity.into(),
            nesting: 0,
        }
    }

    fn image(id: &str, polys: Vec<PolygonAttributes>) -> ImageFeature {
        let polys: Vec<_> = polys
            .into_iter()
            .enumerate()
            .map(|(i, mut p)| {
                p.id = i as u32 + 1;
                p
            })
            .collect();
        ImageFeature {
            image_id: id.into(),
            tp: polys.len() as u32,
            mp: polys.len() as u32,
            holes: 0,
            parents: polys.len() as u32,
            bw: BwBin::One,
            polys,
        }
    }

    #[test]
    fn edit_distance_basics() {
        assert_eq!(edit_distance("", ""), 0);
        assert_eq!(edit_distance("U", "UD"), 1);
        assert_eq!(edit_distance("LRUD", ""), 4);
        assert_eq!(edit_distance("LRUD", "LRUD"), 0);
        assert_eq!(edit_distance("LRUD", "DURL"), 4);
        assert_eq!(edit_distance("UUL", "ULU"), 2);
    }

    #[test]
    fn distance_identity_and_single_term() {
        let w = MatchWeights::default();
        let p = prim(4, 2, "UL");
        assert_eq!(polygon_distance(&p, &p, &w).unwrap(), 0.0);
        let q = prim(6, 2, "UL");
        assert_eq!(polygon_distance(&p, &q, &w).unwrap(), 8f64.sqrt());
    }

    #[test]
    fn kind_mismatch_is_an_error() {
        let p = prim(2, 2, "");
        let mut h = prim(2, 2, "");
        h.kind = PolygonKind::Hole;
        h.en = None;
        assert!(matches!(
            polygon_distance(&p, &h, &MatchWeights::default()),
            Err(Error::KindMismatch)
        ));
    }

    #[test]
    fn holes_skip_euler_term() {
        let mut a = prim(2, 2, "");
        a.kind = PolygonKind::Hole;
        a.en = None;
        a.poh = 2;
        let mut b = a.clone();
        b.poh = -2;
        assert_eq!(polygon_distance(&a, &b, &MatchWeights::default()).unwrap(), 1.0);
    }

    #[test]
    fn self_match_wins() {
        let w = MatchWeights::default();
        let q = image("q", vec![prim(2, 2, ""), prim(6, 4, "UU"), prim(4, 4, "L")]);
        let other = image("other", vec![prim(2, 2, ""), prim(12, 2, "")]);
        let empty = image("empty", vec![]);
        let mut same = q.clone();
        same.image_id = "same".into();
        let ranked = vote_and_rank(&q, &[&other, &empty, &same], &w, 5, Exec::Sequential);
        assert_eq!(ranked[0].image_id, "same");
        assert_eq!(ranked[0].votes, 3);
        assert_eq!(ranked[0].tiebreak_distance, 0.0);
        assert_eq!(ranked.last().unwrap().image_id, "empty");
        assert_eq!(ranked.last().unwrap().votes, 0);
    }

    #[test]
    fn two_of_three_shared_tuples() {
        // distances between the distinct tuples are far above tau
        let w = MatchWeights::default();
        let (t1, t2, t3) = (prim(2, 2, ""), prim(10, 8, "UU"), prim(20, 4, "LRL"));
        let q = image("q", vec![t1.clone(), t2.clone(), t3.clone()]);
        let a = image("a", vec![prim(30, 30, ""), prim(40, 2, "")]);
        let b = image("b", vec![t1, prim(50, 50, "D"), t3]);
        let c = image("c", vec![prim(60, 2, "")]);
        let ranked = vote_and_rank(&q, &[&a, &b, &c], &w, 3, Exec::Sequential);
        assert_eq!(ranked[0].image_id, "b");
        assert_eq!(ranked[0].votes, 2);
        assert!(ranked[1..].iter().all(|r| r.votes == 0));
    }

    #[test]
    fn greedy_assignment_is_one_to_one() {
        let w = MatchWeights::default();
        let q = image("q", vec![prim(2, 2, ""), prim(2, 2, ""), prim(2, 2, "")]);
        let c = image("c", vec![prim(2, 2, "")]);
        let r = score(&q, &c, &w);
        assert_eq!(r.votes, 1);
    }

    #[test]
    fn empty_candidates() {
        let q = image("q", vec![prim(2, 2, "")]);
        assert!(vote_and_rank(&q, &[], &MatchWeights::default(), 5, Exec::default()).is_empty());
    }

    #[test]
    fn weights_config() {
        let w: MatchWeights = "en = 5\n# comment\ntau=2.5, vdc=0".parse().unwrap();
        assert_eq!((w.en, w.tau, w.vdc, w.hc), (5.0, 2.5, 0.0, 3.0));
        assert!("bogus=1".parse::<MatchWeights>().is_err());
        assert!("en=-1".parse::<MatchWeights>().is_err());
        assert!("en=0,hc=0,pc=0,vdc=0,hdc=0,er=0,poh=0,concavity=0"
            .parse::<MatchWeights>()
            .is_err());
        assert!("en".parse::<MatchWeights>().is_err());
    }

    #[test]
    fn empty_corpus_is_an_error() {
        let t = FeatureTable::default();
        let r = BinaryRaster::new(9, 9).unwrap();
        assert!(matches!(
            retrieve(&r, &t, &MatchWeights::default(), Grid::default(), 5),
            Err(Error::EmptyCorpus)
        ));
    }
}
