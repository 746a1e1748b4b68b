//! Exact sparse multivariate polynomial arithmetic over big integers.
//!
//! Polynomials live in Z[y_1..y_s] with a fixed indeterminate count per
//! value. Terms are keyed by exponent vectors in lexicographic order; zero
//! coefficients are never stored. On top of the ring operations sit a
//! fraction-free determinant and a square-root extraction for polynomials
//! that are exact squares.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Exponent vector of a single monomial; length is the ring's `s`.
pub type Monomial = Vec<u16>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePoly {
    s: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl SparsePoly {
    pub fn zero(s: usize) -> Self {
        SparsePoly { s, terms: BTreeMap::new() }
    }

    pub fn constant(s: usize, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0u16; s], c);
        }
        SparsePoly { s, terms }
    }

    pub fn one(s: usize) -> Self {
        Self::constant(s, 1)
    }

    /// The term `c * y_var` (1-based variable index).
    pub fn linear(s: usize, var: usize, c: impl Into<BigInt>) -> Self {
        assert!((1..=s).contains(&var));
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            let mut exp = vec![0u16; s];
            exp[var - 1] = 1;
            terms.insert(exp, c);
        }
        SparsePoly { s, terms }
    }

    pub fn from_terms(s: usize, terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Self {
        let mut map: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(m.len(), s, "exponent vector length must equal s");
            let entry = map.entry(m).or_insert_with(BigInt::zero);
            *entry += c;
        }
        map.retain(|_, c| !c.is_zero());
        SparsePoly { s, terms: map }
    }

    pub fn num_vars(&self) -> usize {
        self.s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &[u16]) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.iter().map(|&e| e as u32).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(|m| m.iter().map(|&e| e as u32).sum::<u32>());
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    /// Lexicographically least monomial, if any.
    pub fn min_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next()
    }

    /// Applies the variable substitution `y_i -> y_{map[i-1]}` into a ring
    /// with `new_s` indeterminates, merging terms that collide.
    pub fn substitute_vars(&self, map: &[usize], new_s: usize) -> SparsePoly {
        assert_eq!(map.len(), self.s);
        let mut out: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut exp = vec![0u16; new_s];
            for (i, &e) in m.iter().enumerate() {
                debug_assert!((1..=new_s).contains(&map[i]));
                exp[map[i] - 1] += e;
            }
            let entry = out.entry(exp).or_insert_with(BigInt::zero);
            *entry += c;
        }
        out.retain(|_, c| !c.is_zero());
        SparsePoly { s: new_s, terms: out }
    }

    fn add_assign_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Exact division; `None` if `self` is not a multiple of `divisor`.
    ///
    /// Ordinary multivariate long division against the lex-leading term of
    /// the divisor. Over an integral domain this succeeds with zero
    /// remainder exactly when the quotient exists in the ring.
    pub fn div_exact(&self, divisor: &SparsePoly) -> Option<SparsePoly> {
        assert_eq!(self.s, divisor.s);
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let (lead_m, lead_c) = divisor.terms.iter().next_back()?;
        let mut rem = self.clone();
        let mut quot = SparsePoly::zero(self.s);
        while !rem.is_zero() {
            let (rm, rc) = rem.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone()))?;
            // leading term of rem must be divisible by leading term of divisor
            let mut qm = vec![0u16; self.s];
            for i in 0..self.s {
                if rm[i] < lead_m[i] {
                    return None;
                }
                qm[i] = rm[i] - lead_m[i];
            }
            let (qc, r) = num_integer::Integer::div_rem(&rc, lead_c);
            if !r.is_zero() {
                return None;
            }
            let mut t = SparsePoly::zero(self.s);
            t.add_assign_term(qm.clone(), qc.clone());
            rem = &rem - &(&t * divisor);
            quot.add_assign_term(qm, qc);
        }
        Some(quot)
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            }
            let abs = c.abs();
            let has_vars = m.iter().any(|&e| e > 0);
            if !abs.is_one() || !has_vars {
                write!(f, "{abs}")?;
            }
            for (i, &e) in m.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "y{}", i + 1)?,
                    _ => write!(f, "y{}^{}", i + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

impl Add for &SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        assert_eq!(self.s, rhs.s);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_assign_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        assert_eq!(self.s, rhs.s);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_assign_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect();
        SparsePoly { s: self.s, terms }
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        assert_eq!(self.s, rhs.s);
        let mut out = SparsePoly::zero(self.s);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(&a, &b)| a + b).collect();
                out.add_assign_term(m, ca * cb);
            }
        }
        out
    }
}

/// Determinant of a square matrix over the polynomial ring by fraction-free
/// (Bareiss) elimination. Every intermediate division is exact in the ring;
/// an inexact division indicates a bug and panics.
pub fn bareiss_determinant(matrix: &[Vec<SparsePoly>]) -> SparsePoly {
    let n = matrix.len();
    assert!(matrix.iter().all(|row| row.len() == n), "matrix must be square");
    if n == 0 {
        return SparsePoly::constant(0, 1);
    }
    let s = matrix[0][0].num_vars();
    let mut a: Vec<Vec<SparsePoly>> = matrix.to_vec();
    let mut sign = false;
    let mut prev_pivot = SparsePoly::one(s);
    for k in 0..n {
        // pivot selection: any row with a nonzero entry in column k
        let pivot_row = (k..n).find(|&r| !a[r][k].is_zero());
        let Some(pr) = pivot_row else {
            return SparsePoly::zero(s);
        };
        if pr != k {
            a.swap(pr, k);
            sign = !sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num
                    .div_exact(&prev_pivot)
                    .expect("Bareiss division must be exact");
            }
            a[i][k] = SparsePoly::zero(s);
        }
        prev_pivot = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign {
        -&det
    } else {
        det
    }
}

/// Square root of a polynomial that is an exact square, or `None`.
///
/// Pivots on the lexicographically least monomial of the root (the constant
/// term of a homogeneous square is zero, so the textbook constant-term
/// recurrence does not apply). Coefficients of the root are recovered in
/// increasing lex order: with pivot monomial mu and known prefix q, the least
/// remaining term of p - q^2 has the form 2*d_mu*d_kappa * y^(mu+kappa),
/// which determines the next coefficient d_kappa. The sign convention makes
/// the pivot coefficient positive.
pub fn homogeneous_sqrt(p: &SparsePoly) -> Option<SparsePoly> {
    if p.is_zero() {
        return Some(SparsePoly::zero(p.num_vars()));
    }
    let s = p.num_vars();
    let min2 = p.min_monomial().expect("nonzero").clone();
    if min2.iter().any(|&e| e % 2 != 0) {
        return None;
    }
    let mu: Monomial = min2.iter().map(|&e| e / 2).collect();
    let c_min = p.coefficient(&min2);
    if c_min.is_negative() {
        return None;
    }
    let d_mu = c_min.sqrt();
    if &d_mu * &d_mu != c_min {
        return None;
    }
    let two_d_mu = BigInt::from(2) * &d_mu;
    let mut q = SparsePoly::zero(s);
    q.add_assign_term(mu.clone(), d_mu.clone());
    // residual = p - q^2, maintained incrementally
    let mut residual = p - &(&q * &q);
    let deg_bound = p.total_degree();
    while !residual.is_zero() {
        let nu = residual.min_monomial().expect("nonzero").clone();
        let c_nu = residual.coefficient(&nu);
        // nu = mu + kappa for the next root monomial kappa
        let mut kappa = vec![0u16; s];
        for i in 0..s {
            if nu[i] < mu[i] {
                return None;
            }
            kappa[i] = nu[i] - mu[i];
        }
        if kappa.iter().map(|&e| e as u32).sum::<u32>() * 2 > deg_bound {
            return None;
        }
        let (d_kappa, rem) = num_integer::Integer::div_rem(&c_nu, &two_d_mu);
        if !rem.is_zero() {
            return None;
        }
        // residual -= 2*d_kappa*y^kappa*q + d_kappa^2*y^(2kappa)
        let mut t = SparsePoly::zero(s);
        t.add_assign_term(kappa.clone(), d_kappa.clone());
        let cross = &(&t * &q) * &SparsePoly::constant(s, 2);
        let square = &t * &t;
        residual = &(&residual - &cross) - &square;
        q.add_assign_term(kappa, d_kappa);
    }
    Some(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn poly(s: usize, terms: &[(&[u16], i64)]) -> SparsePoly {
        SparsePoly::from_terms(
            s,
            terms.iter().map(|(m, c)| (m.to_vec(), BigInt::from(*c))),
        )
    }

    /// Naive cofactor expansion, the determinant oracle.
    fn cofactor_det(m: &[Vec<SparsePoly>]) -> SparsePoly {
        let n = m.len();
        let s = if n == 0 { 0 } else { m[0][0].num_vars() };
        if n == 0 {
            return SparsePoly::constant(0, 1);
        }
        if n == 1 {
            return m[0][0].clone();
        }
        let mut det = SparsePoly::zero(s);
        for j in 0..n {
            if m[0][j].is_zero() {
                continue;
            }
            let minor: Vec<Vec<SparsePoly>> = (1..n)
                .map(|i| (0..n).filter(|&k| k != j).map(|k| m[i][k].clone()).collect())
                .collect();
            let term = &m[0][j] * &cofactor_det(&minor);
            det = if j % 2 == 0 { &det + &term } else { &det - &term };
        }
        det
    }

    fn random_poly(rng: &mut StdRng, s: usize, max_deg: u16, terms: usize) -> SparsePoly {
        SparsePoly::from_terms(
            s,
            (0..terms).map(|_| {
                let m: Monomial = (0..s).map(|_| rng.gen_range(0..=max_deg)).collect();
                (m, BigInt::from(rng.gen_range(-5i64..=5)))
            }),
        )
    }

    fn random_homogeneous(rng: &mut StdRng, s: usize, deg: u16, terms: usize) -> SparsePoly {
        SparsePoly::from_terms(
            s,
            (0..terms).map(|_| {
                // random composition of deg into s parts
                let mut m = vec![0u16; s];
                for _ in 0..deg {
                    m[rng.gen_range(0..s)] += 1;
                }
                let mut c = rng.gen_range(-6i64..=6);
                if c == 0 {
                    c = 1;
                }
                (m, BigInt::from(c))
            }),
        )
    }

    #[test]
    fn identity_determinant_is_one() {
        for n in 1..=5 {
            let id: Vec<Vec<SparsePoly>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| if i == j { SparsePoly::one(2) } else { SparsePoly::zero(2) })
                        .collect()
                })
                .collect();
            assert_eq!(bareiss_determinant(&id), SparsePoly::one(2));
        }
    }

    #[test]
    fn skew_2x2_determinant() {
        // [[0, y1], [-y1, 0]] -> y1^2
        let m = vec![
            vec![SparsePoly::zero(1), SparsePoly::linear(1, 1, 1)],
            vec![SparsePoly::linear(1, 1, -1), SparsePoly::zero(1)],
        ];
        assert_eq!(bareiss_determinant(&m), poly(1, &[(&[2], 1)]));
    }

    #[test]
    fn determinant_matches_cofactor_oracle() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..20 {
            let n = rng.gen_range(1..=4);
            let m: Vec<Vec<SparsePoly>> = (0..n)
                .map(|_| (0..n).map(|_| random_poly(&mut rng, 2, 1, 2)).collect())
                .collect();
            assert_eq!(bareiss_determinant(&m), cofactor_det(&m));
        }
    }

    #[test]
    fn determinant_multiplicative_on_integer_matrices() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..20 {
            let n = rng.gen_range(1..=4);
            let rand_int_matrix = |rng: &mut StdRng| -> Vec<Vec<SparsePoly>> {
                (0..n)
                    .map(|_| {
                        (0..n)
                            .map(|_| SparsePoly::constant(1, rng.gen_range(-4i64..=4)))
                            .collect()
                    })
                    .collect()
            };
            let a = rand_int_matrix(&mut rng);
            let b = rand_int_matrix(&mut rng);
            let ab: Vec<Vec<SparsePoly>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let mut acc = SparsePoly::zero(1);
                            for k in 0..n {
                                acc = &acc + &(&a[i][k] * &b[k][j]);
                            }
                            acc
                        })
                        .collect()
                })
                .collect();
            assert_eq!(
                bareiss_determinant(&ab),
                &bareiss_determinant(&a) * &bareiss_determinant(&b)
            );
        }
    }

    #[test]
    fn ring_axioms_smoke() {
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..30 {
            let a = random_poly(&mut rng, 3, 2, 3);
            let b = random_poly(&mut rng, 3, 2, 3);
            let c = random_poly(&mut rng, 3, 2, 3);
            assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            assert_eq!(&a + &b, &b + &a);
        }
    }

    #[test]
    fn sqrt_of_binomial_square() {
        // (y1+y2)^2 = y1^2 + 2 y1 y2 + y2^2
        let p = poly(2, &[(&[2, 0], 1), (&[1, 1], 2), (&[0, 2], 1)]);
        let q = homogeneous_sqrt(&p).unwrap();
        assert_eq!(q, poly(2, &[(&[1, 0], 1), (&[0, 1], 1)]));
    }

    #[test]
    fn sqrt_of_zero() {
        assert_eq!(homogeneous_sqrt(&SparsePoly::zero(3)), Some(SparsePoly::zero(3)));
    }

    #[test]
    fn sqrt_round_trips_random_squares() {
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..200 {
            let q = random_homogeneous(&mut rng, 3, 4, 5);
            let p = &q * &q;
            let r = homogeneous_sqrt(&p).expect("squares must be recognized");
            assert!(r == q || r == -&q, "recovered {r} from square of {q}");
        }
    }

    #[test]
    fn sqrt_rejects_non_squares() {
        let mut rng = StdRng::seed_from_u64(23);
        let mut rejected = 0;
        for _ in 0..100 {
            let q = random_homogeneous(&mut rng, 3, 4, 4);
            let mut p = &q * &q;
            // corrupt one coefficient
            if let Some(m) = p.min_monomial().cloned() {
                p.add_assign_term(m, BigInt::one());
            }
            match homogeneous_sqrt(&p) {
                None => rejected += 1,
                Some(r) => assert_eq!(&r * &r, p), // corrupted into another square
            }
        }
        assert!(rejected > 80, "only {rejected} corrupted squares rejected");
    }

    #[test]
    fn sqrt_rejects_odd_pivot() {
        assert!(homogeneous_sqrt(&poly(2, &[(&[1, 0], 1)])).is_none());
        assert!(homogeneous_sqrt(&poly(2, &[(&[2, 0], 3)])).is_none());
        assert!(homogeneous_sqrt(&poly(2, &[(&[2, 0], -1)])).is_none());
    }

    #[test]
    fn div_exact_detects_inexact() {
        let a = poly(2, &[(&[1, 1], 6), (&[0, 2], 4)]);
        let b = poly(2, &[(&[0, 1], 2)]);
        assert_eq!(a.div_exact(&b), Some(poly(2, &[(&[1, 0], 3), (&[0, 1], 2)])));
        let c = poly(2, &[(&[1, 1], 7)]);
        assert_eq!(c.div_exact(&b), None);
    }

    #[test]
    fn substitution_merges_terms() {
        // y1*y2 + y3^2 with y1,y2,y3 -> y1,y1,y2 becomes y1^2 + y2^2
        let p = poly(3, &[(&[1, 1, 0], 1), (&[0, 0, 2], 1)]);
        let q = p.substitute_vars(&[1, 1, 2], 2);
        assert_eq!(q, poly(2, &[(&[2, 0], 1), (&[0, 2], 1)]));
    }
}
