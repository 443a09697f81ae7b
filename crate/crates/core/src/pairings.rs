//! Perfect matchings of `{1..n}` and their structure relative to interval
//! partitions: crossings, respectfulness, connectivity, and the bijection
//! between respectful noncrossing pairings and contraction words.
//!
//! Everything here is exact integer combinatorics. Pairings are kept in a
//! canonical form — each pair stored `(min, max)`, pairs sorted by first
//! element — so set comparisons between independently generated collections
//! are plain equality.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Default ground-set cap for full matching enumeration ((n-1)!! growth).
pub const DEFAULT_ALL_PAIRINGS_CAP: usize = 16;
/// Default ground-set cap for noncrossing-only enumeration (Catalan growth).
pub const DEFAULT_NONCROSSING_CAP: usize = 24;

/// A perfect matching of `{1..n}` (1-based, n even) in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pairing {
    pairs: Vec<(usize, usize)>,
}

impl Pairing {
    /// Builds a pairing from arbitrary pair order, canonicalizing and
    /// validating that every index in `{1..n}` appears exactly once.
    pub fn new<I: IntoIterator<Item = (usize, usize)>>(pairs: I) -> Result<Self> {
        let mut pairs: Vec<(usize, usize)> = pairs
            .into_iter()
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        pairs.sort_unstable();
        let n = 2 * pairs.len();
        let mut seen = vec![false; n + 1];
        for &(a, b) in &pairs {
            if a == b {
                return Err(Error::Validation(format!("index {a} paired with itself")));
            }
            for idx in [a, b] {
                if idx == 0 || idx > n {
                    return Err(Error::Validation(format!(
                        "index {idx} outside ground set 1..={n}"
                    )));
                }
                if seen[idx] {
                    return Err(Error::Validation(format!("index {idx} appears twice")));
                }
                seen[idx] = true;
            }
        }
        Ok(Self { pairs })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Size of the ground set `{1..n}`.
    pub fn ground_size(&self) -> usize {
        2 * self.pairs.len()
    }

    /// Partner of index `i` (1-based).
    pub fn partner(&self, i: usize) -> Option<usize> {
        for &(a, b) in &self.pairs {
            if a == i {
                return Some(b);
            }
            if b == i {
                return Some(a);
            }
        }
        None
    }

    /// True iff no two pairs `{x1,y1}`, `{x2,y2}` satisfy `x1 < x2 < y1 < y2`.
    pub fn is_noncrossing(&self) -> bool {
        for (i, &(_x1, y1)) in self.pairs.iter().enumerate() {
            for &(x2, y2) in &self.pairs[i + 1..] {
                // canonical order gives x1 < x2
                if x2 < y1 && y1 < y2 {
                    return false;
                }
            }
        }
        true
    }

    /// Slot -> partner lookup table (index 0 unused).
    fn partner_table(&self) -> Vec<usize> {
        let n = self.ground_size();
        let mut t = vec![0usize; n + 1];
        for &(a, b) in &self.pairs {
            t[a] = b;
            t[b] = a;
        }
        t
    }
}

impl Serialize for Pairing {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let arr: Vec<[usize; 2]> = self.pairs.iter().map(|&(a, b)| [a, b]).collect();
        arr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Pairing {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let arr: Vec<[usize; 2]> = Vec::deserialize(d)?;
        Pairing::new(arr.into_iter().map(|[a, b]| (a, b))).map_err(serde::de::Error::custom)
    }
}

/// Interval partition `n1 (x) n2 (x) ... (x) nr` of `{1..n}` into consecutive
/// blocks `B1 = {1..n1}`, `B2 = {n1+1..n1+n2}`, ...
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntervalPartition {
    block_sizes: Vec<usize>,
}

impl IntervalPartition {
    pub fn new<I: IntoIterator<Item = usize>>(sizes: I) -> Result<Self> {
        let block_sizes: Vec<usize> = sizes.into_iter().collect();
        if block_sizes.is_empty() {
            return Err(Error::Validation("empty interval partition".into()));
        }
        if block_sizes.iter().any(|&s| s == 0) {
            return Err(Error::Validation("block sizes must be >= 1".into()));
        }
        Ok(Self { block_sizes })
    }

    /// The partition of `{1..n}` into singletons.
    pub fn singletons(n: usize) -> Result<Self> {
        Self::new(std::iter::repeat(1).take(n))
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.block_sizes
    }

    pub fn num_blocks(&self) -> usize {
        self.block_sizes.len()
    }

    pub fn total(&self) -> usize {
        self.block_sizes.iter().sum()
    }

    /// 0-based block containing the 1-based index `i`.
    pub fn block_of(&self, i: usize) -> usize {
        debug_assert!(i >= 1 && i <= self.total());
        let mut end = 0;
        for (b, &s) in self.block_sizes.iter().enumerate() {
            end += s;
            if i <= end {
                return b;
            }
        }
        unreachable!("index outside partition")
    }

    /// 1-based indices of block `b` (0-based).
    pub fn block_indices(&self, b: usize) -> std::ops::RangeInclusive<usize> {
        let start: usize = self.block_sizes[..b].iter().sum::<usize>() + 1;
        start..=start + self.block_sizes[b] - 1
    }
}

impl std::fmt::Display for IntervalPartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.block_sizes.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join("(x)"))
    }
}

/// A sequence of partial-contraction depths `p1, ..., p_{r-1}` relative to an
/// interval partition with `r` blocks: depth `p_k` is applied at step `k`
/// (leftmost first), joining the current first two blocks. Zero depths are
/// kept — they carry connectivity information.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ContractionWord {
    depths: Vec<usize>,
}

impl ContractionWord {
    pub fn new<I: IntoIterator<Item = usize>>(depths: I) -> Self {
        Self {
            depths: depths.into_iter().collect(),
        }
    }

    pub fn depths(&self) -> &[usize] {
        &self.depths
    }

    /// Checks the chained feasibility inequalities against `ip`, including the
    /// completeness condition `2 * sum(depths) = total`.
    pub fn validate_for(&self, ip: &IntervalPartition) -> Result<()> {
        let sizes = ip.block_sizes();
        if self.depths.len() + 1 != sizes.len() {
            return Err(Error::Validation(format!(
                "word length {} does not match {} blocks",
                self.depths.len(),
                sizes.len()
            )));
        }
        let mut first = sizes[0];
        for (k, &p) in self.depths.iter().enumerate() {
            let next = sizes[k + 1];
            if p > first.min(next) {
                return Err(Error::Argument(format!(
                    "depth {p} at step {} exceeds min({first}, {next})",
                    k + 1
                )));
            }
            first = first + next - 2 * p;
        }
        if first != 0 {
            return Err(Error::Argument(format!(
                "word leaves {first} indices unpaired"
            )));
        }
        Ok(())
    }
}

impl std::fmt::Display for ContractionWord {
    /// Composition notation, rightmost factor applied first: `t3.t0.t2` means
    /// depth 2, then 0, then 3.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.depths.iter().rev().map(|p| format!("t{p}")).collect();
        write!(f, "{}", parts.join("."))
    }
}

/// Block-link graph of a pairing relative to an interval partition: vertices
/// are blocks, an edge joins two distinct blocks linked by some pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkGraph {
    num_blocks: usize,
    edges: Vec<(usize, usize)>,
}

impl LinkGraph {
    pub fn new(pairing: &Pairing, ip: &IntervalPartition) -> Result<Self> {
        if pairing.ground_size() != ip.total() {
            return Err(Error::Validation(format!(
                "pairing ground set {} does not match partition total {}",
                pairing.ground_size(),
                ip.total()
            )));
        }
        let mut edges: Vec<(usize, usize)> = pairing
            .pairs()
            .iter()
            .map(|&(a, b)| {
                let (ba, bb) = (ip.block_of(a), ip.block_of(b));
                (ba.min(bb), ba.max(bb))
            })
            .filter(|&(ba, bb)| ba != bb)
            .collect();
        edges.sort_unstable();
        edges.dedup();
        Ok(Self {
            num_blocks: ip.num_blocks(),
            edges,
        })
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Connected components as sorted lists of 0-based block indices, ordered
    /// by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.num_blocks).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); self.num_blocks];
        for b in 0..self.num_blocks {
            let r = find(&mut parent, b);
            groups[r].push(b);
        }
        groups.retain(|g| !g.is_empty());
        groups
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }
}

/// True iff no pair of `p` has both endpoints inside a single block of `ip`.
pub fn respects(p: &Pairing, ip: &IntervalPartition) -> Result<bool> {
    if p.ground_size() != ip.total() {
        return Err(Error::Validation(format!(
            "pairing on {} indices vs partition of {}",
            p.ground_size(),
            ip.total()
        )));
    }
    Ok(p.pairs()
        .iter()
        .all(|&(a, b)| ip.block_of(a) != ip.block_of(b)))
}

/// Groups the blocks of `ip` by connected components of the link graph.
///
/// `p` must respect `ip`; `p` is connected iff the result has one component.
pub fn connected_components(p: &Pairing, ip: &IntervalPartition) -> Result<Vec<Vec<usize>>> {
    if !respects(p, ip)? {
        return Err(Error::Precondition(
            "pairing does not respect the interval partition".into(),
        ));
    }
    Ok(LinkGraph::new(p, ip)?.components())
}

/// Visits every perfect matching of `{1..n}` in lexicographic canonical order.
fn for_each_matching(n: usize, f: &mut impl FnMut(&[(usize, usize)])) {
    fn rec(
        free: &mut Vec<usize>,
        current: &mut Vec<(usize, usize)>,
        f: &mut impl FnMut(&[(usize, usize)]),
    ) {
        if free.is_empty() {
            f(current);
            return;
        }
        let i = free[0];
        // partner choices in increasing order keep the output lexicographic
        for idx in 1..free.len() {
            let j = free[idx];
            let mut rest: Vec<usize> = Vec::with_capacity(free.len() - 2);
            rest.extend(free[1..idx].iter().copied());
            rest.extend(free[idx + 1..].iter().copied());
            current.push((i, j));
            rec(&mut rest, current, f);
            current.pop();
        }
    }
    if n == 0 {
        f(&[]);
        return;
    }
    let mut free: Vec<usize> = (1..=n).collect();
    rec(&mut free, &mut Vec::with_capacity(n / 2), f);
}

/// Streaming enumeration of all `(n-1)!!` matchings, for callers that do not
/// need the full list in memory.
pub fn for_each_pairing_with_cap(
    n: usize,
    cap: usize,
    mut f: impl FnMut(&Pairing),
) -> Result<()> {
    if n % 2 != 0 {
        return Err(Error::Argument(format!("ground set size {n} is odd")));
    }
    if n > cap {
        return Err(Error::Resource(format!(
            "matching enumeration for n={n} exceeds cap {cap}"
        )));
    }
    for_each_matching(n, &mut |pairs| {
        f(&Pairing {
            pairs: pairs.to_vec(),
        })
    });
    Ok(())
}

/// All `(n-1)!!` perfect matchings of `{1..n}`, canonical, lexicographic.
pub fn enumerate_all_pairings(n: usize) -> Result<Vec<Pairing>> {
    enumerate_all_pairings_with_cap(n, DEFAULT_ALL_PAIRINGS_CAP)
}

pub fn enumerate_all_pairings_with_cap(n: usize, cap: usize) -> Result<Vec<Pairing>> {
    let mut out = Vec::new();
    for_each_pairing_with_cap(n, cap, |p| out.push(p.clone()))?;
    Ok(out)
}

/// All noncrossing matchings of `{1..n}`; the count is the Catalan number
/// `C_{n/2}`.
pub fn enumerate_nc2(n: usize) -> Result<Vec<Pairing>> {
    enumerate_nc2_with_cap(n, DEFAULT_NONCROSSING_CAP)
}

pub fn enumerate_nc2_with_cap(n: usize, cap: usize) -> Result<Vec<Pairing>> {
    if n % 2 != 0 {
        return Err(Error::Argument(format!("ground set size {n} is odd")));
    }
    if n > cap {
        return Err(Error::Resource(format!(
            "noncrossing enumeration for n={n} exceeds cap {cap}"
        )));
    }
    // Interval recursion: the partner of the least free index splits the rest
    // into an inner and an outer segment matched independently.
    fn rec(free: &[usize]) -> Vec<Vec<(usize, usize)>> {
        if free.is_empty() {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        let i = free[0];
        let mut idx = 1;
        while idx < free.len() {
            let j = free[idx];
            let inner = rec(&free[1..idx]);
            let outer = rec(&free[idx + 1..]);
            for inn in &inner {
                for out_part in &outer {
                    let mut pairs = Vec::with_capacity(free.len() / 2);
                    pairs.push((i, j));
                    pairs.extend_from_slice(inn);
                    pairs.extend_from_slice(out_part);
                    out.push(pairs);
                }
            }
            idx += 2;
        }
        out
    }
    let free: Vec<usize> = (1..=n).collect();
    let mut result: Vec<Pairing> = rec(&free)
        .into_iter()
        .map(|mut pairs| {
            pairs.sort_unstable();
            Pairing { pairs }
        })
        .collect();
    result.sort_unstable();
    Ok(result)
}

/// Enumerates all contraction words feasible for `ip` that pair every index.
pub fn contraction_words(ip: &IntervalPartition) -> Result<Vec<ContractionWord>> {
    let sizes = ip.block_sizes();
    let total = ip.total();
    if total % 2 != 0 {
        return Err(Error::Argument(format!("partition total {total} is odd")));
    }
    let mut out = Vec::new();
    let mut word: Vec<usize> = Vec::with_capacity(sizes.len().saturating_sub(1));
    fn rec(first: usize, rest: &[usize], word: &mut Vec<usize>, out: &mut Vec<ContractionWord>) {
        match rest {
            [] => {
                if first == 0 {
                    out.push(ContractionWord::new(word.iter().copied()));
                }
            }
            [next, tail @ ..] => {
                let later: usize = tail.iter().sum();
                for p in 0..=first.min(*next) {
                    let merged = first + next - 2 * p;
                    // leftover indices of the merged block can only pair into
                    // later blocks
                    if merged > later || (merged + later) % 2 != 0 {
                        continue;
                    }
                    word.push(p);
                    rec(merged, tail, word, out);
                    word.pop();
                }
            }
        }
    }
    rec(sizes[0], &sizes[1..], &mut word, &mut out);
    Ok(out)
}

/// Applies a contraction word to `ip`, producing the respectful noncrossing
/// pairing it encodes. Inverse of [`decompose`].
pub fn compose(word: &ContractionWord, ip: &IntervalPartition) -> Result<Pairing> {
    word.validate_for(ip)?;
    let mut blocks: Vec<Vec<usize>> = (0..ip.num_blocks())
        .map(|b| ip.block_indices(b).collect())
        .collect();
    let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(ip.total() / 2);
    for &p in word.depths() {
        let second = blocks.remove(1);
        let first = &mut blocks[0];
        // nested join: last p of the first block against first p of the
        // second, innermost pair first
        for k in 0..p {
            let a = first[first.len() - 1 - k];
            let b = second[k];
            pairs.push((a.min(b), a.max(b)));
        }
        first.truncate(first.len() - p);
        first.extend_from_slice(&second[p..]);
    }
    debug_assert!(blocks.len() == 1 && blocks[0].is_empty());
    Pairing::new(pairs)
}

/// Decomposes a respectful noncrossing pairing into its unique contraction
/// word: at each step the leftmost linked adjacent blocks are contracted with
/// maximal depth (zero-depth joins recorded explicitly).
pub fn decompose(p: &Pairing, ip: &IntervalPartition) -> Result<ContractionWord> {
    if !respects(p, ip)? {
        return Err(Error::Decomposition(
            "pairing does not respect the interval partition".into(),
        ));
    }
    if !p.is_noncrossing() {
        return Err(Error::Decomposition("pairing has a crossing".into()));
    }
    let partner = p.partner_table();
    let mut blocks: Vec<Vec<usize>> = (0..ip.num_blocks())
        .map(|b| ip.block_indices(b).collect())
        .collect();
    let mut depths = Vec::with_capacity(ip.num_blocks().saturating_sub(1));
    let mut consumed = 0usize;
    while blocks.len() > 1 {
        let second = blocks.remove(1);
        let first = &mut blocks[0];
        // maximal nested run at the junction
        let mut depth = 0;
        while depth < first.len().min(second.len())
            && partner[first[first.len() - 1 - depth]] == second[depth]
        {
            depth += 1;
        }
        for k in 0..depth {
            debug_assert_eq!(partner[second[k]], first[first.len() - 1 - k]);
        }
        first.truncate(first.len() - depth);
        first.extend_from_slice(&second[depth..]);
        depths.push(depth);
        consumed += depth;
    }
    if consumed != p.pairs().len() || !blocks[0].is_empty() {
        return Err(Error::Decomposition(
            "pairing admits no contraction decomposition".into(),
        ));
    }
    Ok(ContractionWord::new(depths))
}

/// All of `NC2(n1 (x) ... (x) nr)`, built by composing every feasible
/// contraction word. Agrees with filtering [`enumerate_nc2`] by [`respects`].
pub fn enumerate_nc2_respecting(ip: &IntervalPartition) -> Result<Vec<Pairing>> {
    enumerate_nc2_respecting_with_cap(ip, DEFAULT_NONCROSSING_CAP)
}

pub fn enumerate_nc2_respecting_with_cap(
    ip: &IntervalPartition,
    cap: usize,
) -> Result<Vec<Pairing>> {
    let total = ip.total();
    if total % 2 != 0 {
        return Err(Error::Argument(format!("partition total {total} is odd")));
    }
    if total > cap {
        return Err(Error::Resource(format!(
            "respectful enumeration for total {total} exceeds cap {cap}"
        )));
    }
    let mut out: Vec<Pairing> = contraction_words(ip)?
        .iter()
        .map(|w| compose(w, ip))
        .collect::<Result<_>>()?;
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Exact Catalan number `C_m = binom(2m, m) / (m + 1)`.
pub fn catalan(m: u32) -> Result<u128> {
    let mut c: u128 = 1;
    for k in 0..m as u128 {
        // C_{k+1} * (k+2) = 2 (2k+1) C_k, division exact
        c = c
            .checked_mul(2 * (2 * k + 1))
            .ok_or_else(|| Error::Overflow(format!("catalan({m}) exceeds u128")))?
            / (k + 2);
    }
    Ok(c)
}
