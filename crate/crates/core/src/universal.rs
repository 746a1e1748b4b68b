//! Binary universal sets at desk scale.
//!
//! An (m, t)-universal set is a family of subsets of [m] that induces all
//! 2^t patterns on every t-element subset of the ground set. The greedy
//! builder below derandomizes the probabilistic existence argument by the
//! method of conditional probabilities: sets are constructed bit by bit,
//! each bit chosen to maximize the expected number of still-uncovered
//! (subset, pattern) requirements the finished set would cover, followed by
//! a reverse-delete pass that drops redundant sets.

use crate::error::{Error, Result};

const MAX_GROUND: usize = 24;
const MAX_STRENGTH: usize = 6;

#[derive(Debug, Clone)]
pub struct BinaryUniversalSet {
    ground_size: usize,
    strength: usize,
    /// Each set as a bitmask over the ground set.
    sets: Vec<u32>,
}

impl BinaryUniversalSet {
    pub fn new(ground_size: usize, strength: usize, sets: Vec<u32>) -> Self {
        BinaryUniversalSet { ground_size, strength, sets }
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn strength(&self) -> usize {
        self.strength
    }

    pub fn sets(&self) -> &[u32] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Exhaustively checks the defining property: every t-subset T of the
    /// ground set sees all 2^t patterns among {T ∩ U}.
    pub fn verify(&self) -> bool {
        let m = self.ground_size;
        let t = self.strength;
        if t > m {
            return false;
        }
        let mut holds = true;
        for_each_subset(m, t, |tmask| {
            let mut seen = 0u64;
            for &u in &self.sets {
                seen |= 1 << compress(u & tmask, tmask);
            }
            if seen.count_ones() as usize != 1 << t {
                holds = false;
            }
        });
        holds
    }
}

/// Packs the bits of `x` that lie inside `mask` into a dense low-bit index.
fn compress(x: u32, mut mask: u32) -> u32 {
    let mut out = 0;
    let mut bit = 0;
    while mask != 0 {
        let i = mask.trailing_zeros();
        if x >> i & 1 == 1 {
            out |= 1 << bit;
        }
        bit += 1;
        mask &= mask - 1;
    }
    out
}

/// Calls `f` on every size-`t` subset mask of `[m]`.
fn for_each_subset(m: usize, t: usize, mut f: impl FnMut(u32)) {
    if t > m {
        return;
    }
    if t == 0 {
        f(0);
        return;
    }
    // Gosper's hack over t-bit masks below 2^m.
    let mut mask: u32 = (1 << t) - 1;
    let limit: u32 = 1 << m;
    while mask < limit {
        f(mask);
        let c = mask & mask.wrapping_neg();
        let r = mask + c;
        mask = (((r ^ mask) >> 2) / c) | r;
    }
}

struct Requirement {
    t_mask: u32,
    pattern: u32,
}

/// Builds a verified (m, t)-universal set greedily.
pub fn greedy_universal_set(m: usize, t: usize) -> Result<BinaryUniversalSet> {
    if m > MAX_GROUND || t > MAX_STRENGTH {
        return Err(Error::ResourceLimit(format!(
            "universal set parameters ({m}, {t}) beyond desk scale ({MAX_GROUND}, {MAX_STRENGTH})"
        )));
    }
    if t > m {
        return Err(Error::Parameter(format!("strength {t} exceeds ground size {m}")));
    }

    let mut open: Vec<Requirement> = Vec::new();
    for_each_subset(m, t, |t_mask| {
        let mut sub = 0u32;
        loop {
            open.push(Requirement { t_mask, pattern: sub });
            if sub == t_mask {
                break;
            }
            sub = (sub.wrapping_sub(t_mask)) & t_mask;
        }
    });

    let mut sets: Vec<u32> = Vec::new();
    while !open.is_empty() {
        // Build one set bit by bit; dead[i] marks requirements already
        // inconsistent with the bits fixed so far.
        let mut dead = vec![false; open.len()];
        let mut chosen: u32 = 0;
        for bit in 0..m {
            let b = 1u32 << bit;
            // A live requirement with bit in T contributes weight 2^(t - free)
            // where free counts its undecided T-bits; picking the matching
            // value doubles the weight, the other kills it. Comparing the two
            // totals over affected requirements decides the bit.
            let mut gain1: u64 = 0;
            let mut gain0: u64 = 0;
            let decided: u32 = (1 << bit) - 1;
            for (req, d) in open.iter().zip(&dead) {
                if *d || req.t_mask & b == 0 {
                    continue;
                }
                let free = (req.t_mask & !decided).count_ones() as usize;
                let w = 1u64 << (t - free);
                if req.pattern & b != 0 {
                    gain1 += w;
                } else {
                    gain0 += w;
                }
            }
            if gain1 > gain0 {
                chosen |= b;
            }
            for (req, d) in open.iter().zip(dead.iter_mut()) {
                if *d || req.t_mask & b == 0 {
                    continue;
                }
                if (req.pattern ^ chosen) & b != 0 {
                    *d = true;
                }
            }
        }
        let before = open.len();
        open.retain(|req| chosen & req.t_mask != req.pattern);
        assert!(open.len() < before, "greedy must cover at least one requirement");
        sets.push(chosen);
    }

    // Reverse-delete: drop any set all of whose requirements are covered at
    // least twice. Tracked with coverage counts so each removal is O(its
    // covered requirements) instead of a full re-verification.
    let mut all_reqs: Vec<Requirement> = Vec::new();
    for_each_subset(m, t, |t_mask| {
        let mut sub = 0u32;
        loop {
            all_reqs.push(Requirement { t_mask, pattern: sub });
            if sub == t_mask {
                break;
            }
            sub = (sub.wrapping_sub(t_mask)) & t_mask;
        }
    });
    let mut cover_count = vec![0u32; all_reqs.len()];
    let mut covered_by: Vec<Vec<u32>> = vec![Vec::new(); sets.len()];
    for (r, req) in all_reqs.iter().enumerate() {
        for (s_idx, &u) in sets.iter().enumerate() {
            if u & req.t_mask == req.pattern {
                cover_count[r] += 1;
                covered_by[s_idx].push(r as u32);
            }
        }
    }
    let mut keep = vec![true; sets.len()];
    for s_idx in (0..sets.len()).rev() {
        if covered_by[s_idx].iter().all(|&r| cover_count[r as usize] >= 2) {
            keep[s_idx] = false;
            for &r in &covered_by[s_idx] {
                cover_count[r as usize] -= 1;
            }
        }
    }
    let sets: Vec<u32> = sets
        .into_iter()
        .zip(&keep)
        .filter_map(|(u, &k)| k.then_some(u))
        .collect();

    let result = BinaryUniversalSet::new(m, t, sets);
    if !result.verify() {
        return Err(Error::Internal("greedy universal set failed verification".into()));
    }
    Ok(result)
}
