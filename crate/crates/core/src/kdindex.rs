//! Static 2-D k-d tree over (hole count, parent count) points. Every
//! distinct point owns a bucket of the image ids that share it.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::featuredb::FeatureTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub holes: u32,
    pub parents: u32,
}

impl Point {
    pub const fn new(holes: u32, parents: u32) -> Self {
        Point { holes, parents }
    }

    #[inline]
    fn coord(self, axis: usize) -> i64 {
        if axis == 0 {
            self.holes as i64
        } else {
            self.parents as i64
        }
    }

    /// Order on `axis` first, the other axis second. Distinct points never
    /// compare equal, so exact lookups follow a single root-to-leaf path.
    #[inline]
    fn cmp_on(self, other: Point, axis: usize) -> Ordering {
        (self.coord(axis), self.coord(1 - axis)).cmp(&(other.coord(axis), other.coord(1 - axis)))
    }

    #[inline]
    pub fn dist2(self, other: Point) -> i64 {
        let dh = self.holes as i64 - other.holes as i64;
        let dp = self.parents as i64 - other.parents as i64;
        dh * dh + dp * dp
    }
}

impl std::fmt::Display for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.holes, self.parents)
    }
}

#[derive(Debug, Clone)]
struct Node {
    point: Point,
    axis: usize,
    left: Option<usize>,
    right: Option<usize>,
}

#[derive(Debug, Clone, Default)]
pub struct KdIndex {
    nodes: Vec<Node>,
    root: Option<usize>,
    buckets: BTreeMap<Point, Vec<String>>,
    images: usize,
}

impl KdIndex {
    pub fn build(table: &FeatureTable) -> Self {
        Self::from_entries(table.entries.iter().map(|f| (f.key(), f.image_id.clone())))
    }

    /// Balanced construction: median split on alternating axes.
    pub fn from_entries(entries: impl IntoIterator<Item = (Point, String)>) -> Self {
        let mut buckets: BTreeMap<Point, Vec<String>> = BTreeMap::new();
        let mut images = 0;
        for (p, id) in entries {
            buckets.entry(p).or_default().push(id);
            images += 1;
        }
        let mut points: Vec<Point> = buckets.keys().copied().collect();
        let mut nodes = Vec::with_capacity(points.len());
        let root = Self::build_rec(&mut nodes, &mut points, 0);
        KdIndex {
            nodes,
            root,
            buckets,
            images,
        }
    }

    fn build_rec(nodes: &mut Vec<Node>, pts: &mut [Point], axis: usize) -> Option<usize> {
        if pts.is_empty() {
            return None;
        }
        let mid = pts.len() / 2;
        pts.select_nth_unstable_by(mid, |a, b| a.cmp_on(*b, axis));
        let point = pts[mid];
        let idx = nodes.len();
        nodes.push(Node {
            point,
            axis,
            left: None,
            right: None,
        });
        let (lo, rest) = pts.split_at_mut(mid);
        let left = Self::build_rec(nodes, lo, 1 - axis);
        let right = Self::build_rec(nodes, &mut rest[1..], 1 - axis);
        nodes[idx].left = left;
        nodes[idx].right = right;
        Some(idx)
    }

    /// Number of distinct points (tree nodes).
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Number of indexed images.
    pub fn image_count(&self) -> usize {
        self.images
    }

    pub fn buckets(&self) -> &BTreeMap<Point, Vec<String>> {
        &self.buckets
    }

    pub fn depth(&self) -> usize {
        fn rec(nodes: &[Node], at: Option<usize>) -> usize {
            at.map_or(0, |i| 1 + rec(nodes, nodes[i].left).max(rec(nodes, nodes[i].right)))
        }
        rec(&self.nodes, self.root)
    }

    /// Exact-match bucket, empty when the point is not indexed.
    pub fn lookup(&self, q: Point) -> &[String] {
        let mut at = self.root;
        while let Some(i) = at {
            let node = &self.nodes[i];
            at = match q.cmp_on(node.point, node.axis) {
                Ordering::Equal => return &self.buckets[&node.point],
                Ordering::Less => node.left,
                Ordering::Greater => node.right,
            };
        }
        &[]
    }

    /// The `m` indexed points nearest to `q`, ordered by squared Euclidean
    /// distance and then lexicographically, each with its bucket.
    pub fn nearest(&self, q: Point, m: usize) -> Vec<(Point, &[String])> {
        let mut best: Vec<(i64, Point)> = Vec::with_capacity(m + 1);
        if m > 0 {
            self.nearest_rec(self.root, q, m, &mut best);
        }
        best.into_iter()
            .map(|(_, p)| (p, self.buckets[&p].as_slice()))
            .collect()
    }

    fn nearest_rec(&self, at: Option<usize>, q: Point, m: usize, best: &mut Vec<(i64, Point)>) {
        let Some(i) = at else { return };
        let node = &self.nodes[i];
        let cand = (q.dist2(node.point), node.point);
        if best.len() < m || cand < best[best.len() - 1] {
            let pos = best.partition_point(|b| *b < cand);
            best.insert(pos, cand);
            best.truncate(m);
        }
        let (near, far) = if q.cmp_on(node.point, node.axis) == Ordering::Less {
            (node.left, node.right)
        } else {
            (node.right, node.left)
        };
        self.nearest_rec(near, q, m, best);
        let gap = q.coord(node.axis) - node.point.coord(node.axis);
        if best.len() < m || gap * gap <= best[best.len() - 1].0 {
            self.nearest_rec(far, q, m, best);
        }
    }

    /// Candidate ids for a query point: points are taken in nearest-first
    /// order until their buckets hold at least `min_candidates` ids or the
    /// whole index is used. An exact match always comes first.
    pub fn candidates(&self, q: Point, min_candidates: usize) -> Vec<&str> {
        let mut m = 1;
        loop {
            let near = self.nearest(q, m);
            let total: usize = near.iter().map(|(_, b)| b.len()).sum();
            if total >= min_candidates || m >= self.len() {
                let mut out = Vec::new();
                for (_, bucket) in near {
                    out.extend(bucket.iter().map(String::as_str));
                    if out.len() >= min_candidates {
                        break;
                    }
                }
                return out;
            }
            m = (m * 2).min(self.len());
        }
    }
}
