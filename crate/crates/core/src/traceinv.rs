//! Trace expressions: rational combinations of products of traces of words
//! in the matrix copies `X_1, X_2, …`.
//!
//! A [`TraceWord`] is stored in its least cyclic rotation, so `tr(X2*X1)` and
//! `tr(X1*X2)` are the same value and expression equality is syntactic.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::combinat::{
    canonical_function, coarsenings, enumerate_permutations, enumerate_set_partitions, stirling2,
    FunctionWord, Permutation, SetPartition,
};
use crate::error::{Error, Result};
use crate::poly::{write_signed_term, Family, Monomial, Polynomial, Rational, Variable};
use crate::rings::{
    generic_matrix, is_multilinear, is_sn_invariant, mat_mul, trace, PolyMatrix, RingConfig,
};

/// `tr(X_{i_1} ⋯ X_{i_h})`, normalized to the least rotation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TraceWord(Vec<u32>);

impl TraceWord {
    pub fn new(letters: Vec<u32>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::EmptyIndexSet);
        }
        if letters.contains(&0) {
            return Err(Error::IndexOutOfRange("matrix copy index 0".into()));
        }
        let h = letters.len();
        let best = (0..h)
            .min_by(|&a, &b| {
                (0..h)
                    .map(|t| letters[(a + t) % h])
                    .cmp((0..h).map(|t| letters[(b + t) % h]))
            })
            .expect("nonempty");
        Ok(TraceWord((0..h).map(|t| letters[(best + t) % h]).collect()))
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for TraceWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "tr({})",
            self.0.iter().map(|i| format!("X{i}")).join("*")
        )
    }
}

/// A product of trace factors, kept sorted.
pub type TraceProduct = Vec<TraceWord>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TraceExpression {
    terms: BTreeMap<TraceProduct, Rational>,
}

impl TraceExpression {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn product(mut factors: Vec<TraceWord>, coeff: Rational) -> Self {
        factors.sort();
        let mut e = Self::zero();
        e.add_term(factors, coeff);
        e
    }

    /// Adds `coeff · Π factors`; `factors` must already be sorted.
    fn add_term(&mut self, factors: TraceProduct, coeff: Rational) {
        debug_assert!(factors.windows(2).all(|w| w[0] <= w[1]));
        match self.terms.get_mut(&factors) {
            Some(c) => {
                *c += coeff;
                if c.is_zero() {
                    self.terms.remove(&factors);
                }
            }
            None => {
                if !coeff.is_zero() {
                    self.terms.insert(factors, coeff);
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TraceProduct, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &TraceExpression) -> TraceExpression {
        let mut out = self.clone();
        for (f, c) in &other.terms {
            out.add_term(f.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &TraceExpression) -> TraceExpression {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> TraceExpression {
        let mut out = Self::zero();
        for (f, d) in &self.terms {
            out.add_term(f.clone(), d * c);
        }
        out
    }

    pub fn mul(&self, other: &TraceExpression) -> TraceExpression {
        let mut out = Self::zero();
        for (fa, ca) in &self.terms {
            for (fb, cb) in &other.terms {
                let mut f: TraceProduct = fa.iter().chain(fb).cloned().collect();
                f.sort();
                out.add_term(f, ca * cb);
            }
        }
        out
    }

    /// Largest matrix copy index used, 0 for constants.
    pub fn max_copy(&self) -> u32 {
        self.terms
            .keys()
            .flatten()
            .flat_map(|w| w.letters().iter().copied())
            .max()
            .unwrap_or(0)
    }

    pub fn max_factor_count(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// No copy index repeats within any single term.
    pub fn has_distinct_indices(&self) -> bool {
        self.terms.keys().all(|f| {
            let mut letters: Vec<u32> =
                f.iter().flat_map(|w| w.letters().iter().copied()).collect();
            let len = letters.len();
            letters.sort_unstable();
            letters.dedup();
            letters.len() == len
        })
    }

    /// Every copy `1..=m` appears exactly once in every term.
    pub fn is_multilinear(&self, m: usize) -> bool {
        self.terms.keys().all(|f| {
            let mut letters: Vec<u32> =
                f.iter().flat_map(|w| w.letters().iter().copied()).collect();
            letters.sort_unstable();
            letters == (1..=m as u32).collect::<Vec<_>>()
        })
    }
}

impl fmt::Display for TraceExpression {
    /// For example `3/2*tr(X1*X2)*tr(X3) - tr(X1*X3*X2)`; the empty sum is `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (factors, c)) in self.terms.iter().enumerate() {
            let body = factors.iter().join("*");
            let body: Option<&dyn fmt::Display> = if factors.is_empty() {
                None
            } else {
                Some(&body)
            };
            write_signed_term(f, idx == 0, c, body)?;
        }
        Ok(())
    }
}

/// `φ_σ`: one trace factor per cycle, cycle `(i_1 … i_h)` giving
/// `tr(X_{i_1} ⋯ X_{i_h})`. Fixed points contribute `tr(X_i)`.
pub fn phi_sigma(sigma: &Permutation) -> TraceExpression {
    let factors = sigma
        .cycles()
        .iter()
        .map(|c| TraceWord::new(c.iter().map(|&i| i as u32 + 1).collect()).expect("nonempty cycle"))
        .collect();
    TraceExpression::product(factors, Rational::one())
}

/// `tr_S`: the trace of the product of `X_i` over `S` in increasing order.
pub fn tr_s(set: &[usize]) -> Result<TraceExpression> {
    let mut letters: Vec<u32> = set.iter().map(|&i| i as u32).collect();
    letters.sort_unstable();
    letters.dedup();
    Ok(TraceExpression::product(
        vec![TraceWord::new(letters)?],
        Rational::one(),
    ))
}

/// `t_Λ = Π_i tr_{S_i}` over the blocks of `Λ`.
pub fn t_lambda(partition: &SetPartition) -> TraceExpression {
    let factors = partition
        .blocks()
        .iter()
        .map(|b| {
            TraceWord::new(b.iter().map(|&i| i as u32).collect()).expect("blocks are nonempty")
        })
        .collect();
    TraceExpression::product(factors, Rational::one())
}

fn check_indices(e: &TraceExpression, cfg: &RingConfig) -> Result<()> {
    let max = e.max_copy() as usize;
    if max > cfg.m() {
        return Err(Error::IndexOutOfRange(format!(
            "matrix copy {max} outside 1..{}",
            cfg.m()
        )));
    }
    Ok(())
}

/// Realizes `e` in the generic-matrix ring: each word becomes the trace of
/// the corresponding product of generic matrices.
pub fn eval_generic(e: &TraceExpression, cfg: &RingConfig) -> Result<Polynomial> {
    check_indices(e, cfg)?;
    let mut matrices: HashMap<u32, PolyMatrix> = HashMap::new();
    let mut traces: HashMap<&TraceWord, Polynomial> = HashMap::new();
    let mut total = Polynomial::zero(Family::Generic);
    for (factors, c) in e.terms() {
        let mut term = Polynomial::constant(Family::Generic, c.clone());
        for w in factors {
            if !traces.contains_key(w) {
                let mut chain: Option<PolyMatrix> = None;
                for &i in w.letters() {
                    let x = match matrices.entry(i) {
                        Entry::Occupied(e) => e.into_mut(),
                        Entry::Vacant(e) => e.insert(generic_matrix(i as usize, cfg)?),
                    };
                    chain = Some(match chain {
                        None => x.clone(),
                        Some(acc) => mat_mul(&acc, x)?,
                    });
                }
                traces.insert(w, trace(&chain.expect("nonempty word")));
            }
            term = &term * &traces[w];
        }
        total.add_scaled(&Rational::one(), &term)?;
    }
    Ok(total)
}

/// The trace of a word on diagonal matrices: `Σ_j Π_t x[i_t, j]`.
fn diagonal_trace(w: &TraceWord, n: usize) -> Polynomial {
    let terms = (1..=n as u32).map(|j| {
        let powers = w
            .letters()
            .iter()
            .map(|&i| (Variable::Diagonal { copy: i, coord: j }, 1));
        (Monomial::from_powers(powers), Rational::one())
    });
    Polynomial::from_terms(Family::Diagonal, terms).expect("diagonal variables only")
}

/// Realizes `e` on diagonal matrices; equal to `restrict(eval_generic(e))`.
pub fn eval_diagonal(e: &TraceExpression, cfg: &RingConfig) -> Result<Polynomial> {
    check_indices(e, cfg)?;
    let mut traces: HashMap<&TraceWord, Polynomial> = HashMap::new();
    let mut total = Polynomial::zero(Family::Diagonal);
    for (factors, c) in e.terms() {
        let mut term = Polynomial::constant(Family::Diagonal, c.clone());
        for w in factors {
            let t = traces
                .entry(w)
                .or_insert_with(|| diagonal_trace(w, cfg.n()));
            term = &term * t;
        }
        total.add_scaled(&Rational::one(), &term)?;
    }
    Ok(total)
}

/// `Σ_{σ ∈ S_{n+1}} ε_σ φ_σ`, which vanishes on `n×n` matrices.
pub fn fundamental_sum(n: usize) -> Result<TraceExpression> {
    if n == 0 {
        return Err(Error::InvalidConfig("n must be >= 1".into()));
    }
    let mut out = TraceExpression::zero();
    for sigma in enumerate_permutations(n + 1)? {
        out = out.add(&phi_sigma(&sigma).scale(&Rational::from_integer(sigma.sign().into())));
    }
    Ok(out)
}

/// Rewrites `e` so every term has at most `n` trace factors.
///
/// A term with more than `n` factors has its first `n + 1` factors
/// `w_1, …, w_{n+1}` replaced by `-Σ_{σ ≠ 1} ε_σ φ_σ(w_1, …, w_{n+1})`, each
/// factor acting as one letter. Every σ ≠ 1 has fewer than `n + 1` cycles,
/// so each rewrite strictly lowers the factor count of the affected terms.
pub fn reduce_traces(e: &TraceExpression, n: usize) -> Result<TraceExpression> {
    if n == 0 {
        return Err(Error::InvalidConfig("n must be >= 1".into()));
    }
    if !e.has_distinct_indices() {
        return Err(Error::NotMultilinear(
            "a copy index repeats within a term".into(),
        ));
    }
    if e.max_factor_count() <= n {
        return Ok(e.clone());
    }
    let rules: Vec<Permutation> = enumerate_permutations(n + 1)?
        .into_iter()
        .filter(|s| !s.is_identity())
        .collect();

    let mut done = TraceExpression::zero();
    let mut pending = TraceExpression::zero();
    for (f, c) in e.terms() {
        if f.len() > n {
            pending.add_term(f.clone(), c.clone());
        } else {
            done.add_term(f.clone(), c.clone());
        }
    }
    while let Some((factors, c)) = pending.terms.pop_first() {
        let (head, rest) = factors.split_at(n + 1);
        for sigma in &rules {
            let coeff = if sigma.sign() == 1 {
                -c.clone()
            } else {
                c.clone()
            };
            let mut product: TraceProduct = sigma
                .cycles()
                .iter()
                .map(|cycle| {
                    let letters = cycle
                        .iter()
                        .flat_map(|&k| head[k].letters().iter().copied())
                        .collect();
                    TraceWord::new(letters).expect("nonempty")
                })
                .chain(rest.iter().cloned())
                .collect();
            product.sort();
            if product.len() > n {
                pending.add_term(product, coeff);
            } else {
                done.add_term(product, coeff);
            }
        }
    }
    Ok(done)
}

/// The monomial `Π_j x[j, f(j)]` of a word `f: [m] -> [n]`.
pub fn word_monomial(f: &FunctionWord) -> Monomial {
    Monomial::from_powers(f.values().iter().enumerate().map(|(j, &v)| {
        (
            Variable::Diagonal {
                copy: j as u32 + 1,
                coord: v as u32,
            },
            1,
        )
    }))
}

/// Reads the word back off a multilinear diagonal monomial in copies `1..=m`.
fn monomial_word(mono: &Monomial, m: usize) -> Vec<usize> {
    let mut word = vec![0; m];
    for (v, _) in mono.powers() {
        if let Variable::Diagonal { copy, coord } = *v {
            word[copy as usize - 1] = coord as usize;
        }
    }
    word
}

/// Coarsenings `Λ'` of `Λ` with `π(t_Λ) = Σ_{Λ'} m_{Λ'}`: those with at
/// most `n` blocks, since coarser orbits with more than `n` blocks are empty.
/// `Λ` comes first and every later entry is strictly coarser.
pub fn coarsening_expansion(
    partition: &SetPartition,
    cfg: &RingConfig,
) -> Result<Vec<SetPartition>> {
    if partition.num_blocks() > cfg.n() {
        return Err(Error::TooManyBlocks {
            blocks: partition.num_blocks(),
            max: cfg.n(),
        });
    }
    Ok(coarsenings(partition)
        .into_iter()
        .filter(|c| c.num_blocks() <= cfg.n())
        .collect())
}

/// Coefficients `c_Λ` with `p = Σ c_Λ · π(t_Λ)`, found by peeling the finest
/// orbit present and subtracting its `t_Λ` image until nothing remains.
pub fn express_in_t_basis(
    p: &Polynomial,
    cfg: &RingConfig,
) -> Result<BTreeMap<SetPartition, Rational>> {
    if p.family() != Family::Diagonal {
        return Err(Error::FamilyMismatch {
            expected: Family::Diagonal,
            found: p.family(),
        });
    }
    cfg.validate_poly(p)?;
    let m = cfg.m();
    if !is_multilinear(p, m) {
        return Err(Error::NotMultilinear(format!(
            "expected degree one in each of copies 1..{m}"
        )));
    }
    if !is_sn_invariant(p, cfg)? {
        return Err(Error::NotInvariant);
    }

    let bound = enumerate_set_partitions(m, cfg.n())?.len();
    let mut coeffs: BTreeMap<SetPartition, Rational> = BTreeMap::new();
    let mut residual = p.clone();
    for _ in 0..bound {
        let Some((lambda, c)) = residual
            .terms()
            .map(|(mono, c)| (SetPartition::from_labels(&monomial_word(mono, m)), c))
            .max_by(|(a, _), (b, _)| a.num_blocks().cmp(&b.num_blocks()).then_with(|| b.cmp(a)))
            .map(|(l, c)| (l, c.clone()))
        else {
            break;
        };
        residual.add_scaled(&-c.clone(), &eval_diagonal(&t_lambda(&lambda), cfg)?)?;
        *coeffs.entry(lambda).or_insert_with(Rational::zero) += c;
    }
    if !residual.is_zero() {
        return Err(Error::NonzeroResidual(residual.to_string()));
    }
    coeffs.retain(|_, c| !c.is_zero());

    let mut rebuilt = Polynomial::zero(Family::Diagonal);
    for (lambda, c) in &coeffs {
        rebuilt.add_scaled(c, &eval_diagonal(&t_lambda(lambda), cfg)?)?;
    }
    if rebuilt != *p {
        return Err(Error::NonzeroResidual(rebuilt.try_sub(p)?.to_string()));
    }
    Ok(coeffs)
}

/// Coefficient of the orbit sum `m_{Λ'}` in an `S_n`-invariant multilinear
/// polynomial: the coefficient of the `f_{Λ'}` monomial.
pub fn orbit_coefficient(p: &Polynomial, orbit: &SetPartition, n: usize) -> Result<Rational> {
    Ok(p.coefficient(&word_monomial(&canonical_function(orbit, n)?)))
}

/// Dimension of the multilinear slice: `Σ_{k ≤ min(n, m)} S(m, k)`.
pub fn multilinear_dim(n: usize, m: usize) -> BigUint {
    (1..=n.min(m)).map(|k| stirling2(m, k)).sum()
}
