//! Shared vocabulary: base-set elements, solutions, colorings and count vectors.
//!
//! A problem instance owns a finite *base set* of elements, identified by
//! dense indices `0..n`. A solution is a subset of the base set, kept in
//! canonical sorted order so that equality, hashing and symmetric
//! differences are unambiguous.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Index of an element of an instance's base set.
pub type ElementId = u32;

/// A set of base-set elements in canonical form: sorted, duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Solution {
    elements: Vec<ElementId>,
}

impl Solution {
    pub fn empty() -> Self {
        Solution { elements: Vec::new() }
    }

    /// Builds a solution from arbitrary ids, sorting and deduplicating.
    pub fn from_iter<I: IntoIterator<Item = ElementId>>(iter: I) -> Self {
        let mut elements: Vec<ElementId> = iter.into_iter().collect();
        elements.sort_unstable();
        elements.dedup();
        Solution { elements }
    }

    /// Decodes a bitmask over element ids `0..=63`.
    pub fn from_mask(mut mask: u64) -> Self {
        let mut elements = Vec::with_capacity(mask.count_ones() as usize);
        while mask != 0 {
            let i = mask.trailing_zeros();
            elements.push(i);
            mask &= mask - 1;
        }
        Solution { elements }
    }

    /// Encodes as a bitmask; requires all ids < 64.
    pub fn to_mask(&self) -> u64 {
        let mut mask = 0u64;
        for &e in &self.elements {
            debug_assert!(e < 64);
            mask |= 1 << e;
        }
        mask
    }

    pub fn elements(&self) -> &[ElementId] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, e: ElementId) -> bool {
        self.elements.binary_search(&e).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.elements.iter().copied()
    }

    /// Size of the intersection with another solution.
    pub fn intersection_size(&self, other: &Solution) -> usize {
        let mut it = other.elements.iter().peekable();
        let mut count = 0;
        for &e in &self.elements {
            while let Some(&&f) = it.peek() {
                if f < e {
                    it.next();
                } else {
                    break;
                }
            }
            if it.peek() == Some(&&e) {
                count += 1;
            }
        }
        count
    }

    /// |self Δ other| without materializing the difference.
    pub fn distance(&self, other: &Solution) -> usize {
        self.len() + other.len() - 2 * self.intersection_size(other)
    }
}

/// (a \ b) ∪ (b \ a), in canonical order.
pub fn symmetric_difference(a: &Solution, b: &Solution) -> Solution {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    let (x, y) = (&a.elements, &b.elements);
    while i < x.len() && j < y.len() {
        match x[i].cmp(&y[j]) {
            std::cmp::Ordering::Less => {
                out.push(x[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(y[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&x[i..]);
    out.extend_from_slice(&y[j..]);
    Solution { elements: out }
}

/// A total assignment of colors `1..=s` to the base set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coloring {
    colors: Vec<u8>,
    num_colors: u8,
}

impl Coloring {
    pub fn new(colors: Vec<u8>, num_colors: u8) -> Result<Self> {
        if num_colors == 0 {
            return Err(Error::Parameter("number of colors must be positive".into()));
        }
        if let Some(&c) = colors.iter().find(|&&c| c == 0 || c > num_colors) {
            return Err(Error::Parameter(format!(
                "color {c} out of range 1..={num_colors}"
            )));
        }
        Ok(Coloring { colors, num_colors })
    }

    /// All elements colored 1.
    pub fn monochrome(n: usize, num_colors: u8) -> Self {
        Coloring { colors: vec![1; n], num_colors }
    }

    pub fn color_of(&self, e: ElementId) -> u8 {
        self.colors[e as usize]
    }

    pub fn colors(&self) -> &[u8] {
        &self.colors
    }

    pub fn num_colors(&self) -> u8 {
        self.num_colors
    }

    pub fn base_size(&self) -> usize {
        self.colors.len()
    }

    /// Elements of the given color, as a bitmask (base size ≤ 64).
    pub fn class_mask(&self, color: u8) -> u64 {
        let mut mask = 0u64;
        for (i, &c) in self.colors.iter().enumerate() {
            if c == color {
                mask |= 1 << i;
            }
        }
        mask
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.num_colors as usize];
        for &c in &self.colors {
            sizes[(c - 1) as usize] += 1;
        }
        sizes
    }

    /// Per-color tallies of a solution's elements.
    pub fn profile(&self, s: &Solution) -> CountVector {
        let mut counts = vec![0u32; self.num_colors as usize];
        for e in s.iter() {
            counts[(self.colors[e as usize] - 1) as usize] += 1;
        }
        CountVector::new(counts)
    }
}

/// Required number of solution elements per color, `counts[i]` for color `i+1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CountVector(Vec<u32>);

impl CountVector {
    pub fn new(counts: Vec<u32>) -> Self {
        CountVector(counts)
    }

    pub fn zeros(s: usize) -> Self {
        CountVector(vec![0; s])
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, color: u8) -> u32 {
        self.0[(color - 1) as usize]
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }
}
