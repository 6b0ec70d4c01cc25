use std::collections::HashSet;

use serde::Serialize;

use crate::setcore::{canonical_cmp, ElementSet, Family, GroundSet};
use crate::{Error, Result};

/// Which partitions count as edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeConvention {
    /// `k` nonempty blocks, plus `k - 1` nonempty blocks together with `∅`.
    WithEmptyBlock,
    /// Only partitions into `k` nonempty blocks.
    NonEmptyOnly,
}

/// Largest `n` for which partitions are enumerated.
pub const PARTITION_LIMIT: usize = 10;

/// Hypergraph on `2^[n]` whose edges are the `k`-partitions of `[n]`.
///
/// A family is `k`-partition-free exactly when its complement hits every edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HittingInstance {
    #[serde(serialize_with = "ser_ground")]
    pub ground: GroundSet,
    pub k: usize,
    /// Blocks of each edge in canonical order; edges sorted.
    pub edges: Vec<Vec<ElementSet>>,
}

fn ser_ground<S: serde::Serializer>(g: &GroundSet, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u64(g.n() as u64)
}

fn sort_blocks(blocks: &mut [ElementSet]) {
    blocks.sort_by(|a, b| canonical_cmp(a.mask(), b.mask()));
}

fn edge_cmp(a: &[ElementSet], b: &[ElementSet]) -> std::cmp::Ordering {
    a.iter().map(|s| s.mask()).cmp(b.iter().map(|s| s.mask())).then(a.len().cmp(&b.len()))
}

/// All set partitions of `[n]` into exactly `blocks` nonempty blocks, via
/// restricted growth strings.
pub fn set_partitions(ground: GroundSet, blocks: usize) -> Vec<Vec<ElementSet>> {
    let n = ground.n();
    let mut out = Vec::new();
    if blocks == 0 || blocks > n {
        return out;
    }
    let mut rgs = vec![0usize; n];
    rgs_walk(&mut rgs, 1, 0, blocks, &mut |rgs| {
        let mut masks = vec![0u32; blocks];
        for (e, &b) in rgs.iter().enumerate() {
            masks[b] |= 1 << e;
        }
        let mut sets: Vec<ElementSet> =
            masks.into_iter().map(|m| ground.set_from_mask(m).expect("mask inside ground")).collect();
        sort_blocks(&mut sets);
        out.push(sets);
    });
    out
}

// rgs[0] = 0; rgs[i] <= 1 + max(rgs[..i]); finish with exactly `blocks` values used
fn rgs_walk(rgs: &mut [usize], i: usize, max: usize, blocks: usize, emit: &mut dyn FnMut(&[usize])) {
    let n = rgs.len();
    if i == n {
        if max + 1 == blocks {
            emit(rgs);
        }
        return;
    }
    // not enough positions left to open the remaining blocks
    if blocks - (max + 1) > n - i {
        return;
    }
    for b in 0..=(max + 1).min(blocks - 1) {
        rgs[i] = b;
        rgs_walk(rgs, i + 1, max.max(b), blocks, emit);
    }
}

impl HittingInstance {
    /// Edges of the `k`-partition hypergraph under `convention`.
    pub fn enumerate(n: usize, k: usize, convention: EdgeConvention) -> Result<Self> {
        if n > PARTITION_LIMIT {
            return Err(Error::ExhaustiveTooLarge { n, limit: PARTITION_LIMIT });
        }
        if k < 2 {
            return Err(Error::InvalidParameter(format!("k = {k} < 2")));
        }
        let ground = GroundSet::new(n)?;
        let mut edges = set_partitions(ground, k);
        if convention == EdgeConvention::WithEmptyBlock {
            for mut p in set_partitions(ground, k - 1) {
                p.insert(0, ground.empty());
                edges.push(p);
            }
        }
        edges.sort_by(|a, b| edge_cmp(a, b));
        Ok(HittingInstance { ground, k, edges })
    }

    pub fn n(&self) -> usize {
        self.ground.n()
    }

    /// First edge missed by `hitter`, or `None` when every edge is hit.
    pub fn first_unhit(&self, hitter: &Family) -> Option<&[ElementSet]> {
        self.edges.iter().find(|e| !e.iter().any(|s| hitter.contains(*s))).map(|e| e.as_slice())
    }

    /// `hitter` must live on the same ground.
    pub fn validate_hitter(&self, hitter: &Family) -> Result<bool> {
        if hitter.ground() != self.ground {
            return Err(Error::MismatchedGround { expected: self.n(), found: hitter.ground().n() });
        }
        Ok(self.first_unhit(hitter).is_none())
    }

    /// Plain text: a `n=<n> k=<k>` header, then one edge per line with blocks
    /// separated by `|`, elements by `,`, and `∅` written as `-`.
    pub fn to_text(&self) -> String {
        let mut out = format!("n={} k={}\n", self.n(), self.k);
        for e in &self.edges {
            let blocks: Vec<String> = e
                .iter()
                .map(|s| {
                    if s.is_empty() {
                        "-".to_string()
                    } else {
                        s.elements().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
                    }
                })
                .collect();
            out.push_str(&blocks.join("|"));
            out.push('\n');
        }
        out
    }

    /// Reads [`HittingInstance::to_text`] output; `#` starts a comment line.
    /// Every edge is checked to be a partition of `[n]` into `k` distinct blocks.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let perr = |line: usize, message: String| Error::Parse { record: Some(line), message };
        let (hline, header) = lines.next().ok_or_else(|| Error::Parse { record: None, message: "empty input".into() })?;
        let mut n = None;
        let mut k = None;
        for field in header.split_whitespace() {
            let (key, val) = field.split_once('=').ok_or_else(|| perr(hline, format!("bad header field {field:?}")))?;
            let val: usize = val.parse().map_err(|_| perr(hline, format!("bad number in {field:?}")))?;
            match key {
                "n" => n = Some(val),
                "k" => k = Some(val),
                _ => return Err(perr(hline, format!("unknown header key {key:?}"))),
            }
        }
        let (n, k) = match (n, k) {
            (Some(n), Some(k)) => (n, k),
            _ => return Err(perr(hline, "header needs n=<int> k=<int>".into())),
        };
        let ground = GroundSet::new(n)?;
        let mut edges = Vec::new();
        let mut seen = HashSet::new();
        for (line, l) in lines {
            let mut blocks = Vec::new();
            for b in l.split('|') {
                let b = b.trim();
                let set = if b == "-" {
                    ground.empty()
                } else {
                    let elems = b
                        .split(',')
                        .map(|x| x.trim().parse::<usize>().map_err(|_| perr(line, format!("bad element {x:?}"))))
                        .collect::<Result<Vec<_>>>()?;
                    ground.set_from_elements(elems).map_err(|e| perr(line, e.to_string()))?
                };
                blocks.push(set);
            }
            if blocks.len() != k {
                return Err(perr(line, format!("edge has {} blocks, expected {k}", blocks.len())));
            }
            let mut used = 0u32;
            for s in &blocks {
                if s.mask() & used != 0 || (s.is_empty() && used & 1 << 31 != 0) {
                    return Err(perr(line, "blocks overlap or repeat".into()));
                }
                used |= s.mask() | if s.is_empty() { 1 << 31 } else { 0 };
            }
            if used & ground.full_mask() != ground.full_mask() {
                return Err(perr(line, "blocks do not cover the ground set".into()));
            }
            sort_blocks(&mut blocks);
            let key: Vec<u32> = blocks.iter().map(|s| s.mask()).collect();
            if !seen.insert(key) {
                return Err(perr(line, "duplicate edge".into()));
            }
            edges.push(blocks);
        }
        edges.sort_by(|a, b| edge_cmp(a, b));
        Ok(HittingInstance { ground, k, edges })
    }
}
