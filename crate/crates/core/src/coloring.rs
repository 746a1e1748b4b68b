//! Families of 4-colorings good for all small target partitions.
//!
//! A family covers budget `b` if for every choice of disjoint sets
//! B1..B4 with |B1 ∪ .. ∪ B4| <= b there is a member coloring each Bi
//! monochromatically in color i. Three providers exist: exhaustive
//! enumeration of all 4^n colorings, independent uniform colorings with a
//! per-target failure probability, and a deterministic mapping from a
//! (2n, 2b) binary universal set.

use crate::error::{Error, Result};
use crate::solution::Coloring;
use crate::universal::{greedy_universal_set, BinaryUniversalSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

const MAX_EXHAUSTIVE_BASE: usize = 10;
const MAX_RANDOMIZED_SIZE: u64 = 4_000_000;
const MAX_COVER_CHECKS: u64 = 40_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyMode {
    Exhaustive,
    Randomized,
    UniversalSet,
}

impl std::fmt::Display for FamilyMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FamilyMode::Exhaustive => write!(f, "exhaustive"),
            FamilyMode::Randomized => write!(f, "randomized"),
            FamilyMode::UniversalSet => write!(f, "universal-set"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ColoringFamily {
    colorings: Vec<Coloring>,
    budget: usize,
    mode: FamilyMode,
}

impl ColoringFamily {
    pub fn colorings(&self) -> &[Coloring] {
        &self.colorings
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn mode(&self) -> FamilyMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.colorings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colorings.is_empty()
    }

    /// Fixture form: one array of colors per family member.
    pub fn to_color_arrays(&self) -> Vec<Vec<u8>> {
        self.colorings.iter().map(|c| c.colors().to_vec()).collect()
    }
}

/// Builds a coloring family for base size `n` and budget `b`.
///
/// `delta` is the per-target failure probability of the randomized mode and
/// is ignored by the other modes. The randomized repetition count comes from
/// the exact single-trial success probability 4^-|union Bi| at the worst
/// case |union Bi| = b, giving ceil(4^b ln(1/delta)) trials.
pub fn build_family(
    n: usize,
    b: usize,
    mode: FamilyMode,
    seed: u64,
    delta: f64,
) -> Result<ColoringFamily> {
    let colorings = match mode {
        FamilyMode::Exhaustive => {
            if n > MAX_EXHAUSTIVE_BASE {
                return Err(Error::ResourceLimit(format!(
                    "exhaustive family over {n} elements has 4^{n} members"
                )));
            }
            let total = 4usize.pow(n as u32);
            let mut out = Vec::with_capacity(total);
            for code in 0..total {
                let mut colors = vec![0u8; n];
                let mut c = code;
                for slot in colors.iter_mut() {
                    *slot = (c % 4) as u8 + 1;
                    c /= 4;
                }
                out.push(Coloring::new(colors, 4)?);
            }
            out
        }
        FamilyMode::Randomized => {
            if !(0.0..1.0).contains(&delta) || delta <= 0.0 {
                return Err(Error::Parameter(format!("delta {delta} not in (0,1)")));
            }
            if b > 20 {
                return Err(Error::ResourceLimit(format!("randomized budget {b} too large")));
            }
            let trials = (4f64.powi(b as i32) * (1.0 / delta).ln()).ceil() as u64;
            if trials > MAX_RANDOMIZED_SIZE {
                return Err(Error::ResourceLimit(format!(
                    "randomized family would need {trials} colorings"
                )));
            }
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            (0..trials)
                .map(|_| {
                    let colors: Vec<u8> = (0..n).map(|_| rng.gen_range(1..=4)).collect();
                    Coloring::new(colors, 4)
                })
                .collect::<Result<Vec<_>>>()?
        }
        FamilyMode::UniversalSet => {
            if b > n {
                return Err(Error::Parameter(format!("budget {b} exceeds base size {n}")));
            }
            let universal = greedy_universal_set(2 * n, 2 * b)?;
            colorings_from_universal_set(n, &universal)?
        }
    };
    Ok(ColoringFamily { colorings, budget: b, mode })
}

/// The pairing that turns a (2n, 2b)-universal set into a covering family of
/// 4-colorings: element i is colored by the membership pattern of positions
/// i and i+n in each universal set member.
pub fn colorings_from_universal_set(
    n: usize,
    universal: &BinaryUniversalSet,
) -> Result<Vec<Coloring>> {
    if universal.ground_size() != 2 * n {
        return Err(Error::Parameter(format!(
            "universal set over {} elements cannot color a base of {n}",
            universal.ground_size()
        )));
    }
    universal
        .sets()
        .iter()
        .map(|&u| {
            let colors: Vec<u8> = (0..n)
                .map(|i| {
                    let low = u >> i & 1 == 1;
                    let high = u >> (i + n) & 1 == 1;
                    match (low, high) {
                        (true, true) => 1,
                        (true, false) => 2,
                        (false, true) => 3,
                        (false, false) => 4,
                    }
                })
                .collect();
            Coloring::new(colors, 4)
        })
        .collect()
}

/// Exhaustively decides whether the family covers its budget: every partial
/// assignment of at most `budget` base elements to colors 1..4 must be
/// extended exactly by some member.
pub fn verify_covering(family: &ColoringFamily) -> Result<bool> {
    let n = family
        .colorings
        .first()
        .map(|c| c.base_size())
        .unwrap_or(0);
    let b = family.budget.min(n);
    if family.colorings.is_empty() {
        // With no members, only the empty target (b = 0 over an empty choice)
        // could be covered, and even that needs one coloring.
        return Ok(false);
    }
    let mut checks: u64 = 1;
    for j in 0..b {
        checks = checks.saturating_mul(4 * (n - j) as u64);
        if checks > MAX_COVER_CHECKS {
            return Err(Error::ResourceLimit(
                "covering verification beyond desk scale".into(),
            ));
        }
    }

    // live-set DFS over partial assignments: words[i][c] is the bitset of
    // family members coloring element i with color c+1.
    let words = (family.colorings.len() + 63) / 64;
    let mut masks = vec![vec![vec![0u64; words]; 4]; n];
    for (j, coloring) in family.colorings.iter().enumerate() {
        for (i, &c) in coloring.colors().iter().enumerate() {
            masks[i][(c - 1) as usize][j / 64] |= 1 << (j % 64);
        }
    }
    let full: Vec<u64> = {
        let mut f = vec![u64::MAX; words];
        let spare = words * 64 - family.colorings.len();
        if spare > 0 {
            f[words - 1] >>= spare;
        }
        f
    };

    fn dfs(
        next: usize,
        remaining: usize,
        live: &[u64],
        masks: &[Vec<Vec<u64>>],
        n: usize,
    ) -> bool {
        if live.iter().all(|&w| w == 0) {
            return false;
        }
        if remaining == 0 || next == n {
            return true;
        }
        // leave element `next` unconstrained
        if !dfs(next + 1, remaining, live, masks, n) {
            return false;
        }
        // or pin it to each color
        let mut narrowed = vec![0u64; live.len()];
        for c in 0..4 {
            for (w, (l, m)) in narrowed
                .iter_mut()
                .zip(live.iter().zip(&masks[next][c]))
            {
                *w = l & m;
            }
            if !dfs(next + 1, remaining - 1, &narrowed, masks, n) {
                return false;
            }
        }
        true
    }

    Ok(dfs(0, b, &full, &masks, n))
}
