//! Exact checks of the structural claims, each returning a serializable
//! report. The CLI `verify` subcommands and the acceptance suite call these.

use itertools::Itertools;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::combinat::{
    enumerate_permutations, enumerate_set_partitions, Permutation, SetPartition,
};
use crate::error::Result;
use crate::maps::{polarize, polarized_d, restitute, sym_tensor_element};
use crate::poly::{rat, Family, Monomial, Polynomial, Rational, Variable};
use crate::rings::{is_sn_invariant, orbit_sum, RingConfig};
use crate::rng::SplitMix64;
use crate::traceinv::{
    coarsening_expansion, eval_diagonal, eval_generic, express_in_t_basis, fundamental_sum,
    multilinear_dim, orbit_coefficient, phi_sigma, reduce_traces, t_lambda, word_monomial,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FundamentalReport {
    pub n: usize,
    /// `(n+1)!`, one per permutation.
    pub terms: usize,
    /// Generic-matrix variables in play: `n²(n+1)`.
    pub variables: usize,
    /// Terms left after expanding; zero means the identity holds.
    pub residual_terms: usize,
    pub zero: bool,
}

/// Expands `Σ_{σ ∈ S_{n+1}} ε_σ φ_σ` on generic `n×n` matrices.
pub fn verify_fundamental(n: usize) -> Result<FundamentalReport> {
    let cfg = RingConfig::new(n, n + 1)?;
    let sum = fundamental_sum(n)?;
    let expanded = eval_generic(&sum, &cfg)?;
    Ok(FundamentalReport {
        n,
        terms: sum.len(),
        variables: n * n * (n + 1),
        residual_terms: expanded.len(),
        zero: expanded.is_zero(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionReport {
    pub n: usize,
    pub m: usize,
    pub input: String,
    pub output_terms: usize,
    pub max_factors: usize,
    /// `eval_generic` of input and output agree exactly.
    pub sound: bool,
}

impl ReductionReport {
    pub fn passed(&self) -> bool {
        self.sound && self.max_factors <= self.n
    }
}

/// Reduces `tr(X_1)⋯tr(X_m)` to at most `n` factors and compares both sides
/// on generic matrices.
pub fn verify_reduction(cfg: &RingConfig) -> Result<ReductionReport> {
    let input = t_lambda(&SetPartition::singletons(cfg.m()));
    let output = reduce_traces(&input, cfg.n())?;
    let sound = eval_generic(&input, cfg)? == eval_generic(&output, cfg)?;
    Ok(ReductionReport {
        n: cfg.n(),
        m: cfg.m(),
        input: input.to_string(),
        output_terms: output.len(),
        max_factors: output.max_factor_count(),
        sound,
    })
}

/// Exact rank over the rationals by Gaussian elimination.
pub fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(pivot) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pivot);
        let lead = rows[r][c].clone();
        let (top, below) = rows.split_at_mut(r + 1);
        for row in below {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] / &lead;
            for (x, y) in row[c..cols].iter_mut().zip(&top[r][c..cols]) {
                *x -= &f * y;
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsomorphismReport {
    pub n: usize,
    pub m: usize,
    /// `Σ_{k ≤ n} S(m, k)`.
    pub dimension: u64,
    /// Rank of `{π(t_Λ)}` over all `n^m` multilinear monomials.
    pub rank: usize,
    /// The orbit-basis matrix of `{π(t_Λ)}` is the refinement incidence
    /// matrix (ones exactly on coarsenings).
    pub unitriangular: bool,
    /// `π(t_Λ) = Σ m_{Λ'}` over the listed coarsening expansion.
    pub expansion_matches: bool,
    pub images_invariant: bool,
    /// Partitions whose orbit sum failed to round-trip through the `t_Λ` basis.
    pub roundtrip_failures: Vec<String>,
}

impl IsomorphismReport {
    pub fn passed(&self) -> bool {
        self.rank as u64 == self.dimension
            && self.unitriangular
            && self.expansion_matches
            && self.images_invariant
            && self.roundtrip_failures.is_empty()
    }
}

/// The multilinear slice of the isomorphism at `(n, m)`.
pub fn verify_isomorphism(cfg: &RingConfig) -> Result<IsomorphismReport> {
    let (n, m) = (cfg.n(), cfg.m());
    let parts = enumerate_set_partitions(m, n)?;
    let words: Vec<Monomial> = (0..m)
        .map(|_| 1..=n)
        .multi_cartesian_product()
        .map(|values| {
            word_monomial(&crate::combinat::FunctionWord::new(values, n).expect("in range"))
        })
        .collect();

    let mut unitriangular = true;
    let mut expansion_matches = true;
    let mut images_invariant = true;
    let mut raw_rows = Vec::with_capacity(parts.len());
    for lambda in &parts {
        let image = eval_diagonal(&t_lambda(lambda), cfg)?;
        images_invariant &= is_sn_invariant(&image, cfg)?;

        let mut expansion = Polynomial::zero(Family::Diagonal);
        for coarse in coarsening_expansion(lambda, cfg)? {
            expansion.add_scaled(&rat(1), &orbit_sum(&coarse, cfg)?)?;
        }
        expansion_matches &= expansion == image;

        for other in &parts {
            let expected = if lambda.refines(other) {
                rat(1)
            } else {
                rat(0)
            };
            unitriangular &= orbit_coefficient(&image, other, n)? == expected;
        }
        raw_rows.push(
            words
                .iter()
                .map(|w| image.coefficient(w))
                .collect::<Vec<_>>(),
        );
    }

    let mut roundtrip_failures = Vec::new();
    for lambda in &parts {
        let target = orbit_sum(lambda, cfg)?;
        let ok = match express_in_t_basis(&target, cfg) {
            Ok(coeffs) => {
                let mut rebuilt = Polynomial::zero(Family::Diagonal);
                for (l, c) in &coeffs {
                    rebuilt.add_scaled(c, &eval_diagonal(&t_lambda(l), cfg)?)?;
                }
                rebuilt == target
            }
            Err(_) => false,
        };
        if !ok {
            roundtrip_failures.push(lambda.to_string());
        }
    }

    Ok(IsomorphismReport {
        n,
        m,
        dimension: multilinear_dim(n, m).to_u64().unwrap_or(u64::MAX),
        rank: rank(raw_rows),
        unitriangular,
        expansion_matches,
        images_invariant,
        roundtrip_failures,
    })
}

/// The partition of `[m]` into the supports of the cycles of `σ`.
pub fn cycle_support_partition(sigma: &Permutation) -> SetPartition {
    let blocks = sigma
        .cycles()
        .iter()
        .map(|c| c.iter().map(|i| i + 1).collect())
        .collect();
    SetPartition::new(sigma.size(), blocks).expect("cycles partition the points")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CollapseReport {
    pub n: usize,
    pub m: usize,
    pub permutations: usize,
    /// Permutations where `π(φ_σ) ≠ π(t_{Λ(σ)})`, in cycle notation.
    pub mismatches: Vec<String>,
}

/// On diagonal matrices the trace of a word depends only on its support.
pub fn verify_collapse(cfg: &RingConfig) -> Result<CollapseReport> {
    let perms = enumerate_permutations(cfg.m())?;
    let mut mismatches = Vec::new();
    for sigma in &perms {
        let lhs = eval_diagonal(&phi_sigma(sigma), cfg)?;
        let rhs = eval_diagonal(&t_lambda(&cycle_support_partition(sigma)), cfg)?;
        if lhs != rhs {
            mismatches.push(sigma.to_string());
        }
    }
    Ok(CollapseReport {
        n: cfg.n(),
        m: cfg.m(),
        permutations: perms.len(),
        mismatches,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RobyReport {
    pub n: usize,
    pub m: usize,
    pub max_degree: u32,
    pub tuples: usize,
    /// Tuples where the polarized `D` and the symmetrized tensor differ.
    pub mismatches: Vec<String>,
}

/// All monomials in `x_1..x_m` of total degree at most `max_degree`.
fn abstract_monomials(m: usize, max_degree: u32) -> Vec<Polynomial> {
    let mut out = Vec::new();
    for d in 0..=max_degree {
        for combo in (1..=m as u32).combinations_with_replacement(d as usize) {
            let mono = Monomial::from_powers(
                combo
                    .into_iter()
                    .map(|copy| (Variable::Abstract { copy }, 1)),
            );
            out.push(Polynomial::monomial(Family::Abstract, mono, rat(1)).expect("abstract"));
        }
    }
    out
}

/// Polarized `D` against the symmetrized tensor on every ordered `n`-tuple of
/// monomials of degree at most `max_degree`.
pub fn verify_roby(cfg: &RingConfig, max_degree: u32) -> Result<RobyReport> {
    let monos = abstract_monomials(cfg.m(), max_degree);
    let mut tuples = 0;
    let mut mismatches = Vec::new();
    for tuple in (0..cfg.n())
        .map(|_| monos.iter().cloned())
        .multi_cartesian_product()
    {
        tuples += 1;
        if polarized_d(&tuple, cfg)? != sym_tensor_element(&tuple, cfg)? {
            mismatches.push(tuple.iter().map(ToString::to_string).join(" ⊗ "));
        }
    }
    Ok(RobyReport {
        n: cfg.n(),
        m: cfg.m(),
        max_degree,
        tuples,
        mismatches,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AronholdCase {
    pub family: String,
    pub degree: usize,
    pub input: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AronholdReport {
    pub n: usize,
    pub seed: u64,
    pub cases: Vec<AronholdCase>,
    pub failed: usize,
}

/// A random polynomial homogeneous of degree `k` in copy 1 of `family`, with
/// an optional factor in copy 2.
fn random_homogeneous(rng: &mut SplitMix64, family: Family, n: usize, k: usize) -> Polynomial {
    let pick = |rng: &mut SplitMix64, copy: u32| -> Variable {
        let a = 1 + rng.below(n as u64) as u32;
        let b = 1 + rng.below(n as u64) as u32;
        match family {
            Family::Generic => Variable::Generic {
                copy,
                row: a,
                col: b,
            },
            Family::Diagonal => Variable::Diagonal { copy, coord: a },
            Family::Abstract => Variable::Abstract { copy },
        }
    };
    let terms = 1 + rng.below(4);
    let mut out = Vec::new();
    for _ in 0..terms {
        let mut powers: Vec<(Variable, u32)> = (0..k).map(|_| (pick(rng, 1), 1)).collect();
        if rng.below(2) == 1 {
            powers.push((pick(rng, 2), 1));
        }
        let mut c = 0;
        while c == 0 {
            c = rng.range_i64(-9, 9);
        }
        out.push((Monomial::from_powers(powers), rat(c)));
    }
    Polynomial::from_terms(family, out).expect("single family")
}

/// `restitute ∘ polarize = k!` on seeded random inputs homogeneous of degree
/// `k ≤ max_degree` in copy 1, in every variable family.
pub fn verify_aronhold(
    n: usize,
    max_degree: usize,
    samples: usize,
    seed: u64,
) -> Result<AronholdReport> {
    let cfg = RingConfig::new(n, max_degree + 3)?;
    let mut rng = SplitMix64::new(seed);
    let mut cases = Vec::new();
    for family in [Family::Generic, Family::Diagonal, Family::Abstract] {
        for k in 1..=max_degree {
            for _ in 0..samples {
                let p = random_homogeneous(&mut rng, family, n, k);
                let targets: Vec<u32> = (3..3 + k as u32).collect();
                let polarized = polarize(&p, 1, &targets, &cfg)?;
                let back = restitute(&polarized, &targets, 1, &cfg)?;
                let factorial: i64 = (1..=k as i64).product();
                let passed = p.is_zero() || back == p.scale(&rat(factorial));
                cases.push(AronholdCase {
                    family: family.to_string(),
                    degree: k,
                    input: p.to_string(),
                    passed,
                });
            }
        }
    }
    let failed = cases.iter().filter(|c| !c.passed).count();
    Ok(AronholdReport {
        n,
        seed,
        cases,
        failed,
    })
}
