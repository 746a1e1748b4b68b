//! The colored-exact-solver contract shared by all stage kinds.
//!
//! A solver answers queries of the form "find a solution containing exactly
//! `counts[i]` elements of color `i+1`". Answers are one-sided: a returned
//! solution is always verified (exact per-color counts plus the stage's own
//! feasibility check) before it is surfaced, so only "no" answers carry the
//! budgeted failure probability.

use crate::budget::ErrorBudget;
use crate::error::{Error, Result};
use crate::solution::{Coloring, CountVector, Solution};
use dashmap::DashMap;

pub trait ColoredExactSolver: Sync {
    /// Size of the instance's base set.
    fn base_size(&self) -> usize;

    /// Whether "no" answers are exact. Deterministic solvers ignore the budget.
    fn is_deterministic(&self) -> bool;

    /// Find any solution with exactly `counts[i]` elements of color `i+1`.
    fn solve(
        &self,
        coloring: &Coloring,
        counts: &CountVector,
        budget: &ErrorBudget,
    ) -> Result<Option<Solution>>;

    /// Deterministic membership check for the instance's solution family.
    fn is_solution(&self, s: &Solution) -> bool;

    /// A value that, together with the coloring and counts, fully determines
    /// this solver's output. Deterministic solvers return 0; randomized ones
    /// fold in whatever they derive from the budget (weight range and seed).
    fn cache_token(&self, _budget: &ErrorBudget) -> u64 {
        0
    }
}

/// Runs a query and enforces the one-sided convention: any returned solution
/// must match the requested counts and pass the feasibility check.
pub fn solve_verified(
    solver: &dyn ColoredExactSolver,
    coloring: &Coloring,
    counts: &CountVector,
    budget: &ErrorBudget,
) -> Result<Option<Solution>> {
    match solver.solve(coloring, counts, budget)? {
        None => Ok(None),
        Some(s) => {
            if coloring.profile(&s) != *counts {
                return Err(Error::InvariantViolation(format!(
                    "solver returned a solution with profile {:?}, wanted {:?}",
                    coloring.profile(&s).counts(),
                    counts.counts()
                )));
            }
            if !solver.is_solution(&s) {
                return Err(Error::InvariantViolation(
                    "solver returned an infeasible solution".into(),
                ));
            }
            Ok(Some(s))
        }
    }
}

#[derive(PartialEq, Eq, Hash)]
struct CacheKey {
    classes: Vec<(u64, u32)>,
    token: u64,
}

/// Memoizing front end for a solver, shared by the representative-family
/// routines which issue millions of near-duplicate queries.
///
/// All solvers in this crate are color-symmetric: permuting color labels
/// jointly in the coloring and the count vector permutes nothing observable,
/// since classes are compared as element sets. Queries are therefore keyed by
/// the sorted list of (class mask, requested count) pairs, which collapses
/// the s! label permutations and any number of empty classes onto one entry.
/// Only usable while the base set fits in a 64-bit mask; larger instances
/// bypass the cache.
pub struct CachedSolver<'a> {
    inner: &'a dyn ColoredExactSolver,
    cache: DashMap<CacheKey, Option<Solution>>,
    maskable: bool,
}

impl<'a> CachedSolver<'a> {
    pub fn new(inner: &'a dyn ColoredExactSolver) -> Self {
        let maskable = inner.base_size() <= 64;
        CachedSolver { inner, cache: DashMap::new(), maskable }
    }

    pub fn inner(&self) -> &'a dyn ColoredExactSolver {
        self.inner
    }

    /// Verified query through the cache.
    pub fn query(
        &self,
        coloring: &Coloring,
        counts: &CountVector,
        budget: &ErrorBudget,
    ) -> Result<Option<Solution>> {
        debug_assert_eq!(coloring.num_colors() as usize, counts.len());
        if !self.maskable {
            return solve_verified(self.inner, coloring, counts, budget);
        }
        let s = coloring.num_colors();
        let mut classes: Vec<(u64, u32)> = Vec::with_capacity(s as usize);
        for color in 1..=s {
            let mask = coloring.class_mask(color);
            let want = counts.get(color);
            if mask == 0 {
                if want > 0 {
                    return Ok(None); // no elements of this color exist
                }
            } else {
                if want as usize > mask.count_ones() as usize {
                    return Ok(None);
                }
                classes.push((mask, want));
            }
        }
        classes.sort_unstable();
        let key = CacheKey { classes, token: self.inner.cache_token(budget) };
        if let Some(hit) = self.cache.get(&key) {
            return Ok(hit.clone());
        }
        // Re-issue the query in canonical color order so permuted duplicates
        // resolve to the same solver run.
        let canon_s = key.classes.len().max(1) as u8;
        let mut colors = vec![1u8; self.inner.base_size()];
        let mut canon_counts = vec![0u32; canon_s as usize];
        for (rank, &(mask, want)) in key.classes.iter().enumerate() {
            let mut m = mask;
            while m != 0 {
                let e = m.trailing_zeros() as usize;
                colors[e] = (rank + 1) as u8;
                m &= m - 1;
            }
            canon_counts[rank] = want;
        }
        let canon_coloring = Coloring::new(colors, canon_s)?;
        let canon_counts = CountVector::new(canon_counts);
        let answer = solve_verified(self.inner, &canon_coloring, &canon_counts, budget)?;
        // Verify against the original query as well; equivalent by symmetry,
        // cheap enough to keep as a hard check.
        if let Some(s) = &answer {
            if coloring.profile(s) != *counts {
                return Err(Error::InvariantViolation(
                    "canonicalized query produced a mismatched profile".into(),
                ));
            }
        }
        self.cache.insert(key, answer.clone());
        Ok(answer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::atomic::{AtomicUsize, Ordering};

    /// Toy solver over base {0,1,2}: R = all subsets. Returns the
    /// lexicographically first subset matching the counts.
    struct AllSubsets {
        calls: AtomicUsize,
    }

    impl ColoredExactSolver for AllSubsets {
        fn base_size(&self) -> usize {
            3
        }
        fn is_deterministic(&self) -> bool {
            true
        }
        fn solve(
            &self,
            coloring: &Coloring,
            counts: &CountVector,
            _budget: &ErrorBudget,
        ) -> Result<Option<Solution>> {
            self.calls.fetch_add(1, Ordering::SeqCst);
            for mask in 0u64..8 {
                let s = Solution::from_mask(mask);
                if coloring.profile(&s) == *counts {
                    return Ok(Some(s));
                }
            }
            Ok(None)
        }
        fn is_solution(&self, _s: &Solution) -> bool {
            true
        }
    }

    #[test]
    fn permuted_queries_share_one_solver_run() {
        let solver = AllSubsets { calls: AtomicUsize::new(0) };
        let cached = CachedSolver::new(&solver);
        let budget = ErrorBudget::from_ratio(1, 4, 0).unwrap();

        let c1 = Coloring::new(vec![1, 2, 2], 4).unwrap();
        let k1 = CountVector::new(vec![1, 1, 0, 0]);
        let a1 = cached.query(&c1, &k1, &budget).unwrap().unwrap();

        // Swap colors 1 and 2, extend to different s: same classes.
        let c2 = Coloring::new(vec![2, 1, 1], 3).unwrap();
        let k2 = CountVector::new(vec![1, 1, 0]);
        let a2 = cached.query(&c2, &k2, &budget).unwrap().unwrap();

        assert_eq!(a1, a2);
        assert_eq!(solver.calls.load(Ordering::SeqCst), 1);
    }

    #[test]
    fn impossible_counts_short_circuit() {
        let solver = AllSubsets { calls: AtomicUsize::new(0) };
        let cached = CachedSolver::new(&solver);
        let budget = ErrorBudget::from_ratio(1, 4, 0).unwrap();
        let c = Coloring::new(vec![1, 1, 1], 4).unwrap();
        // color 2 has no elements
        let k = CountVector::new(vec![1, 1, 0, 0]);
        assert!(cached.query(&c, &k, &budget).unwrap().is_none());
        assert_eq!(solver.calls.load(Ordering::SeqCst), 0);
    }
}
