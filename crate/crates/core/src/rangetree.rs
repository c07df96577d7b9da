//! Range trees answering "first point of a cone" queries in polylogarithmic
//! time.
//!
//! A cone of the grade-2 frame is the intersection of two half-planes, so in
//! the oblique coordinates `u = cross(lower boundary, q)` and
//! `v = -cross(upper boundary, q)` it becomes the quadrant `u ≥ u(p)`,
//! `v > v(p)`. The first level of [`MinAugmentedRangeTree`] is a merge-sort
//! tree over `u`; each node keeps its points sorted by `v` together with a
//! min-heap-ordered segment tree over the sweep key. Positions are cascaded
//! from the root, so a query costs one binary search plus `O(log n)` work per
//! reported point.
//!
//! Oblique coordinates and keys are floats. Queries widen the quadrant by a
//! small slack and re-check every reported point with the exact lattice
//! predicates; the answer always equals an exact linear scan.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::geom::{ConeId, Frame};
use crate::kernel::half_dir_f64;
use crate::pointset::PointSet;
use crate::seg::cones;

struct Level {
    /// Entry ids, blockwise sorted by `(v, id)`.
    idx: Vec<u32>,
    /// `left[off + j]`: entries of the left child among the first `j` of the block.
    left: Vec<u32>,
    /// Per-block segment trees of local positions, ordered by `(key, id)`.
    seg: Vec<u32>,
    /// `sufmin[off + j]`: local position of the smallest key in `[j, len)`.
    sufmin: Vec<u32>,
}

/// Static two-level range tree over entries `(u, v, key)`. Entry ids are
/// their positions in the input slice.
pub struct MinAugmentedRangeTree {
    v: Vec<f64>,
    key: Vec<f64>,
    u_sorted: Vec<f64>,
    root_v: Vec<f64>,
    /// `levels[e]` holds blocks of `2^e` consecutive entries in `u` order.
    levels: Vec<Level>,
}

impl MinAugmentedRangeTree {
    pub fn new(entries: &[(f64, f64, f64)]) -> Self {
        let n = entries.len();
        let v: Vec<f64> = entries.iter().map(|e| e.1).collect();
        let key: Vec<f64> = entries.iter().map(|e| e.2).collect();
        let mut by_u: Vec<u32> = (0..n as u32).collect();
        by_u.sort_by(|&a, &b| {
            entries[a as usize]
                .0
                .total_cmp(&entries[b as usize].0)
                .then(a.cmp(&b))
        });
        let u_sorted = by_u.iter().map(|&i| entries[i as usize].0).collect();
        let mut tree = MinAugmentedRangeTree {
            v,
            key,
            u_sorted,
            root_v: Vec::new(),
            levels: Vec::new(),
        };
        if n == 0 {
            return tree;
        }
        let height = n.next_power_of_two().trailing_zeros() as usize;
        let mut idx = by_u;
        let mut left = vec![0u32; n];
        for e in 0..=height {
            if e > 0 {
                let prev = &tree.levels[e - 1].idx;
                let (next, counts) = tree.merge_level(prev, e);
                idx = next;
                left = counts;
            }
            let (seg, sufmin) = tree.augment(&idx, e);
            tree.levels.push(Level {
                idx: idx.clone(),
                left: std::mem::take(&mut left),
                seg,
                sufmin,
            });
        }
        tree.root_v = tree.levels[height]
            .idx
            .iter()
            .map(|&i| tree.v[i as usize])
            .collect();
        tree
    }

    pub fn len(&self) -> usize {
        self.key.len()
    }

    pub fn is_empty(&self) -> bool {
        self.key.is_empty()
    }

    fn by_v(&self, a: u32, b: u32) -> Ordering {
        self.v[a as usize].total_cmp(&self.v[b as usize]).then(a.cmp(&b))
    }

    fn by_key(&self, a: u32, b: u32) -> Ordering {
        self.key[a as usize]
            .total_cmp(&self.key[b as usize])
            .then(a.cmp(&b))
    }

    fn blocks(&self, e: usize) -> impl Iterator<Item = (usize, usize)> {
        let n = self.len();
        (0..n).step_by(1 << e).map(move |off| (off, (n - off).min(1 << e)))
    }

    fn merge_level(&self, prev: &[u32], e: usize) -> (Vec<u32>, Vec<u32>) {
        let half = 1usize << (e - 1);
        let mut idx = Vec::with_capacity(prev.len());
        let mut left = Vec::with_capacity(prev.len());
        for (off, len) in self.blocks(e) {
            let split = off + half.min(len);
            let (a, b) = (&prev[off..split], &prev[split..off + len]);
            let (mut i, mut j) = (0, 0);
            while i < a.len() || j < b.len() {
                left.push(i as u32);
                let take_left = j == b.len() || (i < a.len() && self.by_v(a[i], b[j]) == Ordering::Less);
                if take_left {
                    idx.push(a[i]);
                    i += 1;
                } else {
                    idx.push(b[j]);
                    j += 1;
                }
            }
        }
        (idx, left)
    }

    fn augment(&self, idx: &[u32], e: usize) -> (Vec<u32>, Vec<u32>) {
        let mut seg = vec![0u32; 2 * idx.len()];
        let mut sufmin = vec![0u32; idx.len()];
        for (off, len) in self.blocks(e) {
            let block = &idx[off..off + len];
            let tree = &mut seg[2 * off..2 * (off + len)];
            for j in 0..len {
                tree[len + j] = j as u32;
            }
            for i in (1..len).rev() {
                let (a, b) = (tree[2 * i], tree[2 * i + 1]);
                tree[i] = if self.by_key(block[a as usize], block[b as usize]) == Ordering::Greater {
                    b
                } else {
                    a
                };
            }
            let mut best = len - 1;
            for j in (0..len).rev() {
                if self.by_key(block[j], block[best]) == Ordering::Less {
                    best = j;
                }
                sufmin[off + j] = best as u32;
            }
        }
        (seg, sufmin)
    }

    /// Local position of the smallest key among block positions `[lo, hi)`.
    fn range_min(&self, e: usize, off: usize, len: usize, lo: usize, hi: usize) -> Option<usize> {
        if lo >= hi {
            return None;
        }
        let level = &self.levels[e];
        if hi == len {
            return Some(level.sufmin[off + lo] as usize);
        }
        let block = &level.idx[off..off + len];
        let tree = &level.seg[2 * off..2 * (off + len)];
        let (mut l, mut r) = (lo + len, hi + len);
        let mut best: Option<usize> = None;
        let mut consider = |j: u32| {
            let j = j as usize;
            best = match best {
                Some(b) if self.by_key(block[b], block[j]) != Ordering::Greater => Some(b),
                _ => Some(j),
            };
        };
        while l < r {
            if l & 1 == 1 {
                consider(tree[l]);
                l += 1;
            }
            if r & 1 == 1 {
                r -= 1;
                consider(tree[r]);
            }
            l >>= 1;
            r >>= 1;
        }
        best
    }

    /// Entries with `u ≥ u0` and `v ≥ v0`, in increasing `(key, id)` order.
    pub fn walk(&self, u0: f64, v0: f64) -> Walk<'_> {
        let mut walk = Walk {
            tree: self,
            heap: BinaryHeap::new(),
        };
        let n = self.len();
        let start = self.u_sorted.partition_point(|&u| u < u0);
        if start == n {
            return walk;
        }
        let (mut e, mut off, mut len) = (self.levels.len() - 1, 0usize, n);
        let mut pos = self.root_v.partition_point(|&v| v < v0);
        loop {
            if start <= off {
                walk.push(e, off, len, pos, len);
                break;
            }
            if e == 0 || start >= off + len {
                break;
            }
            let half = 1usize << (e - 1);
            let len_l = half.min(len);
            let len_r = len - len_l;
            let pos_l = if pos < len {
                self.levels[e].left[off + pos] as usize
            } else {
                len_l
            };
            let pos_r = pos - pos_l;
            e -= 1;
            if start <= off + half {
                walk.push(e, off + half, len_r, pos_r, len_r);
                len = len_l;
                pos = pos_l;
            } else {
                off += half;
                len = len_r;
                pos = pos_r;
            }
        }
        walk
    }

    /// Smallest-key entry with `u ≥ u0` and `v ≥ v0`.
    pub fn min_in(&self, u0: f64, v0: f64) -> Option<usize> {
        self.walk(u0, v0).next().map(|(i, _)| i)
    }

    /// Recomputes every augmentation and cascade pointer from scratch.
    pub fn audit(&self) -> Result<(), String> {
        for (e, level) in self.levels.iter().enumerate() {
            for (off, len) in self.blocks(e) {
                let block = &level.idx[off..off + len];
                if block.windows(2).any(|w| self.by_v(w[0], w[1]) != Ordering::Less) {
                    return Err(format!("level {e} block {off} is not sorted by v"));
                }
                let tree = &level.seg[2 * off..2 * (off + len)];
                if (0..len).any(|j| tree[len + j] as usize != j) {
                    return Err(format!("level {e} block {off} has misplaced leaves"));
                }
                for i in (1..len).rev() {
                    let (a, b) = (tree[2 * i] as usize, tree[2 * i + 1] as usize);
                    let want = if self.by_key(block[a], block[b]) == Ordering::Greater { b } else { a };
                    if tree[i] as usize != want {
                        return Err(format!("level {e} block {off} node {i} has a stale minimum"));
                    }
                }
                for j in 0..len {
                    let best = (j..len)
                        .min_by(|&a, &b| self.by_key(block[a], block[b]))
                        .expect("non-empty");
                    if level.sufmin[off + j] as usize != best {
                        return Err(format!("level {e} block {off} suffix {j} has a stale minimum"));
                    }
                }
                if e > 0 {
                    let half = 1usize << (e - 1);
                    let split = off + half.min(len);
                    let mut seen = 0u32;
                    for j in 0..len {
                        if level.left[off + j] != seen {
                            return Err(format!("level {e} block {off} cascade {j} is wrong"));
                        }
                        let below = &self.levels[e - 1].idx[off..split];
                        if below.contains(&block[j]) {
                            seen += 1;
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy)]
struct Range {
    key: f64,
    id: u32,
    e: u8,
    off: u32,
    len: u32,
    lo: u32,
    hi: u32,
    at: u32,
}

impl PartialEq for Range {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Range {}

impl PartialOrd for Range {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Range {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.total_cmp(&other.key).then(self.id.cmp(&other.id))
    }
}

/// Best-first enumeration of a quadrant; see [`MinAugmentedRangeTree::walk`].
pub struct Walk<'a> {
    tree: &'a MinAugmentedRangeTree,
    heap: BinaryHeap<Reverse<Range>>,
}

impl Walk<'_> {
    fn push(&mut self, e: usize, off: usize, len: usize, lo: usize, hi: usize) {
        if let Some(at) = self.tree.range_min(e, off, len, lo, hi) {
            let id = self.tree.levels[e].idx[off + at];
            self.heap.push(Reverse(Range {
                key: self.tree.key[id as usize],
                id,
                e: e as u8,
                off: off as u32,
                len: len as u32,
                lo: lo as u32,
                hi: hi as u32,
                at: at as u32,
            }));
        }
    }
}

impl Iterator for Walk<'_> {
    /// `(entry id, key)`
    type Item = (usize, f64);

    fn next(&mut self) -> Option<(usize, f64)> {
        let Reverse(r) = self.heap.pop()?;
        let (e, off, len) = (r.e as usize, r.off as usize, r.len as usize);
        self.push(e, off, len, r.lo as usize, r.at as usize);
        self.push(e, off, len, r.at as usize + 1, r.hi as usize);
        Some((r.id as usize, r.key))
    }
}

/// Range tree for one `(frame, cone)` pair of a point set.
pub struct ConeIndex {
    frame: Frame,
    cone: ConeId,
    tree: MinAugmentedRangeTree,
    lower: (f64, f64),
    upper: (f64, f64),
    key_dir: (f64, f64),
    slack: f64,
}

fn fcross(a: (f64, f64), b: (f64, f64)) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

fn fdot(a: (f64, f64), b: (f64, f64)) -> f64 {
    a.0 * b.0 + a.1 * b.1
}

impl ConeIndex {
    fn coords(&self, q: (f64, f64)) -> (f64, f64, f64) {
        (fcross(self.lower, q), -fcross(self.upper, q), fdot(self.key_dir, q))
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn cone(&self) -> ConeId {
        self.cone
    }

    pub fn tree(&self) -> &MinAugmentedRangeTree {
        &self.tree
    }
}

/// Builds the range tree of `cone` in `frame` over all of `points`.
///
/// # Panics
/// If `cone` is one of the two cones hugging the frame's horizontal axis,
/// which no query ever searches.
pub fn build_index(points: &PointSet, frame: Frame, cone: ConeId) -> ConeIndex {
    assert!(cones::searched(cone), "{cone} has no sweep order");
    let lo = cone.lower_half();
    let mut index = ConeIndex {
        frame,
        cone,
        tree: MinAugmentedRangeTree::new(&[]),
        lower: half_dir_f64(frame.half(lo)),
        upper: half_dir_f64(frame.half(lo + 1)),
        key_dir: half_dir_f64(frame.half(cones::key_half(cone))),
        // float coordinates are within a few ulps of |q|·|guideline|
        slack: 1e-10 * (points.magnitude() + 1.0),
    };
    let entries: Vec<(f64, f64, f64)> = points
        .lattice_positions()
        .iter()
        .map(|q| index.coords(q.to_f64()))
        .collect();
    index.tree = MinAugmentedRangeTree::new(&entries);
    index
}

/// The first point of `p`'s cone under the cone's sweep order (as an index
/// into `points`), or `None` when the cone is empty.
pub fn query_first_in_cone(index: &ConeIndex, points: &PointSet, p: usize) -> Option<usize> {
    let origin = points.lpos(p);
    let (u0, v0, _) = index.coords(origin.to_f64());
    let mut best: Option<usize> = None;
    let mut anchor = f64::INFINITY;
    for (q, key) in index.tree.walk(u0 - index.slack, v0 - index.slack) {
        if key > anchor + index.slack {
            break;
        }
        let d = points.lpos(q).sub(origin);
        if !cones::in_cone(d, index.frame, index.cone) {
            continue;
        }
        match best {
            None => {
                best = Some(q);
                anchor = key;
            }
            Some(b) if cones::precedes(points, index.frame, p, (q, index.cone), (b, index.cone)) => {
                best = Some(q)
            }
            Some(_) => {}
        }
    }
    best
}
