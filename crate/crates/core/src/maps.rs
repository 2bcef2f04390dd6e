//! The determinant map `D: F[x_1..x_m] -> B_{n,m}^{S_n}`, its full
//! polarization, and Aronhold polarization / restitution.
//!
//! `D` is computed in the diagonal model: substituting diagonal matrices for
//! the `x_i` gives the diagonal matrix whose `j`-th entry is `a` evaluated at
//! the `j`-th coordinates, so `D(a) = Π_j a(x[1,j], …, x[m,j])`.

use std::collections::HashMap;

use serde::Serialize;

use crate::combinat::enumerate_permutations;
use crate::error::{Error, Result};
use crate::poly::{rat, Family, Monomial, Polynomial, Rational, Variable};
use crate::rings::{is_sn_invariant, RingConfig};
use crate::rng::SplitMix64;

fn require_abstract(a: &Polynomial, cfg: &RingConfig) -> Result<()> {
    if a.family() != Family::Abstract {
        return Err(Error::FamilyMismatch {
            expected: Family::Abstract,
            found: a.family(),
        });
    }
    cfg.validate_poly(a)
}

/// `a(x[1,j], …, x[m,j])`.
fn at_coordinate(a: &Polynomial, j: usize) -> Result<Polynomial> {
    a.map_variables(Family::Diagonal, |v| {
        Ok(Some(Variable::Diagonal {
            copy: v.copy(),
            coord: j as u32,
        }))
    })
}

/// `D(a) = det a(ξ_1, …, ξ_m)`, evaluated on diagonal matrices.
pub fn d_of(a: &Polynomial, cfg: &RingConfig) -> Result<Polynomial> {
    require_abstract(a, cfg)?;
    let mut out = Polynomial::one(Family::Diagonal);
    for j in 1..=cfg.n() {
        out = out.try_mul(&at_coordinate(a, j)?)?;
    }
    Ok(out)
}

/// Sum over injective slot-to-marker assignments: the coefficient of
/// `t_1 ⋯ t_k` in `Π_s (Σ_i t_i · choices[s][i])` with `k = choices.len()`.
/// Partial products are keyed by the set of markers already used, and any
/// product repeating a marker is dropped as it is built.
fn marker_expansion(choices: &[Vec<Polynomial>], family: Family) -> Result<Polynomial> {
    let k = choices.len();
    assert!(k < 32, "marker expansion limited to 31 slots");
    let mut layer: HashMap<u32, Polynomial> = HashMap::from([(0, Polynomial::one(family))]);
    for slot in choices {
        debug_assert_eq!(slot.len(), k);
        let mut next: HashMap<u32, Polynomial> = HashMap::new();
        for (mask, acc) in &layer {
            for (i, factor) in slot.iter().enumerate() {
                let bit = 1u32 << i;
                if mask & bit != 0 || factor.is_zero() {
                    continue;
                }
                let term = acc.try_mul(factor)?;
                match next.get_mut(&(mask | bit)) {
                    Some(p) => p.add_scaled(&Rational::from_integer(1.into()), &term)?,
                    None => {
                        next.insert(mask | bit, term);
                    }
                }
            }
        }
        layer = next;
    }
    let full = if k == 0 { 0 } else { u32::MAX >> (32 - k) };
    Ok(layer
        .remove(&full)
        .unwrap_or_else(|| Polynomial::zero(family)))
}

/// Full polarization of `D` at `(a_1, …, a_n)`: the coefficient of
/// `t_1 ⋯ t_n` in `D(t_1 a_1 + ⋯ + t_n a_n)`.
pub fn polarized_d(args: &[Polynomial], cfg: &RingConfig) -> Result<Polynomial> {
    let n = cfg.n();
    if args.len() != n {
        return Err(Error::ArgumentCount {
            expected: n,
            found: args.len(),
        });
    }
    args.iter().try_for_each(|a| require_abstract(a, cfg))?;
    // slot = coordinate j, marker = argument i
    let choices = (1..=n)
        .map(|j| {
            args.iter()
                .map(|a| at_coordinate(a, j))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    marker_expansion(&choices, Family::Diagonal)
}

/// The symmetrized tensor `Σ_{σ ∈ S_n} Π_j a_{σ(j)}(x[·, j])`, with tensor slot
/// `j` identified with coordinate block `j`.
pub fn sym_tensor_element(args: &[Polynomial], cfg: &RingConfig) -> Result<Polynomial> {
    let n = cfg.n();
    if args.len() != n {
        return Err(Error::ArgumentCount {
            expected: n,
            found: args.len(),
        });
    }
    args.iter().try_for_each(|a| require_abstract(a, cfg))?;
    let placed: Vec<Vec<Polynomial>> = args
        .iter()
        .map(|a| (1..=n).map(|j| at_coordinate(a, j)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let mut total = Polynomial::zero(Family::Diagonal);
    for sigma in enumerate_permutations(n)? {
        let mut term = Polynomial::one(Family::Diagonal);
        for j in 0..n {
            term = term.try_mul(&placed[sigma.apply(j)][j])?;
        }
        total.add_scaled(&rat(1), &term)?;
    }
    Ok(total)
}

/// Full polarization of `p` in copy `source` into the fresh copies `targets`.
///
/// `p` must be homogeneous of degree `targets.len()` in `source`. The result
/// is the coefficient of `t_1 ⋯ t_k` after substituting
/// `t_1·(copy c_1) + ⋯ + t_k·(copy c_k)` for copy `source`.
pub fn polarize(
    p: &Polynomial,
    source: u32,
    targets: &[u32],
    cfg: &RingConfig,
) -> Result<Polynomial> {
    cfg.validate_poly(p)?;
    let k = targets.len();
    let used = p.copies();
    for (idx, &t) in targets.iter().enumerate() {
        if t == source || used.contains(&t) || targets[..idx].contains(&t) {
            return Err(Error::TargetCollision(t));
        }
    }
    if p.terms()
        .any(|(m, _)| m.degree_in_copy(source) as usize != k)
    {
        return Err(Error::NotHomogeneous {
            copy: source,
            expected: k,
        });
    }
    let family = p.family();
    let mut out = Polynomial::zero(family);
    for (mono, c) in p.terms() {
        let mut rest = Vec::new();
        let mut slots: Vec<Vec<Polynomial>> = Vec::with_capacity(k);
        for &(v, e) in mono.powers() {
            if v.copy() == source {
                for _ in 0..e {
                    let row = targets
                        .iter()
                        .map(|&t| {
                            let w = v.with_copy(t);
                            cfg.validate(&w)?;
                            Ok(Polynomial::var(w))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    slots.push(row);
                }
            } else {
                rest.push((v, e));
            }
        }
        let rest = Polynomial::monomial(family, Monomial::from_powers(rest), c.clone())?;
        out.add_scaled(&rat(1), &marker_expansion(&slots, family)?.try_mul(&rest)?)?;
    }
    Ok(out)
}

/// Restitution: every variable of a `sources` copy is renamed into copy
/// `target`. `p` must be of degree exactly one in each source copy.
pub fn restitute(
    p: &Polynomial,
    sources: &[u32],
    target: u32,
    cfg: &RingConfig,
) -> Result<Polynomial> {
    cfg.validate_poly(p)?;
    if let Some(&s) = sources
        .iter()
        .find(|&&s| p.terms().any(|(m, _)| m.degree_in_copy(s) != 1))
    {
        return Err(Error::NotMultilinear(format!(
            "copy {s} does not occur with degree one"
        )));
    }
    p.map_variables(p.family(), |v| {
        let w = if sources.contains(&v.copy()) {
            v.with_copy(target)
        } else {
            *v
        };
        cfg.validate(&w)?;
        Ok(Some(w))
    })
}

/// A random element of `F[x_1..x_m]`: 1 to `max_terms` terms of degree at most
/// `max_degree` with nonzero integer coefficients in `[-max_coeff, max_coeff]`.
pub fn random_abstract_poly(
    rng: &mut SplitMix64,
    cfg: &RingConfig,
    max_degree: u32,
    max_terms: u32,
    max_coeff: i64,
) -> Polynomial {
    let terms = 1 + rng.below(max_terms as u64);
    let mut out = Vec::new();
    for _ in 0..terms {
        let degree = rng.below(max_degree as u64 + 1);
        let powers: Vec<(Variable, u32)> = (0..degree)
            .map(|_| {
                let copy = 1 + rng.below(cfg.m() as u64) as u32;
                (Variable::Abstract { copy }, 1)
            })
            .collect();
        let mut c = 0;
        while c == 0 {
            c = rng.range_i64(-max_coeff, max_coeff);
        }
        out.push((Monomial::from_powers(powers), rat(c)));
    }
    Polynomial::from_terms(Family::Abstract, out).expect("abstract variables only")
}

/// Highest-degree homogeneous part.
fn top_component(a: &Polynomial) -> Polynomial {
    let d = a.total_degree().unwrap_or(0);
    Polynomial::from_terms(
        a.family(),
        a.terms()
            .filter(|(m, _)| m.degree() == d)
            .map(|(m, c)| (m.clone(), c.clone())),
    )
    .expect("same family")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialVerdict {
    pub trial: usize,
    pub a: String,
    pub b: String,
    /// `D(ab) = D(a)·D(b)` exactly.
    pub multiplicative: bool,
    /// `D(a)`, `D(b)` and `D(ab)` are all `S_n`-invariant.
    pub invariant: bool,
    /// `D` of the top homogeneous part of `a` (degree `d`) is homogeneous of
    /// degree `n·d`.
    pub homogeneous: bool,
}

impl TrialVerdict {
    pub fn passed(&self) -> bool {
        self.multiplicative && self.invariant && self.homogeneous
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplicativityReport {
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub passed: usize,
    pub failed: usize,
    pub trials: Vec<TrialVerdict>,
}

/// Checks `D(ab) = D(a)D(b)` on `trials` seeded random pairs (degree ≤ 3,
/// ≤ 5 terms, coefficients in `[-9, 9]`). Failures are reported, not raised.
pub fn check_multiplicative(
    trials: usize,
    seed: u64,
    cfg: &RingConfig,
) -> Result<MultiplicativityReport> {
    let mut rng = SplitMix64::new(seed);
    let mut verdicts = Vec::with_capacity(trials);
    for trial in 0..trials {
        let a = random_abstract_poly(&mut rng, cfg, 3, 5, 9);
        let b = random_abstract_poly(&mut rng, cfg, 3, 5, 9);
        let (da, db) = (d_of(&a, cfg)?, d_of(&b, cfg)?);
        let dab = d_of(&a.try_mul(&b)?, cfg)?;
        let multiplicative = dab == da.try_mul(&db)?;
        let invariant =
            is_sn_invariant(&da, cfg)? && is_sn_invariant(&db, cfg)? && is_sn_invariant(&dab, cfg)?;
        let top = top_component(&a);
        let expected = top.total_degree().unwrap_or(0) * cfg.n() as u32;
        let homogeneous = d_of(&top, cfg)?
            .terms()
            .all(|(m, _)| m.degree() == expected);
        verdicts.push(TrialVerdict {
            trial,
            a: a.to_string(),
            b: b.to_string(),
            multiplicative,
            invariant,
            homogeneous,
        });
    }
    let passed = verdicts.iter().filter(|v| v.passed()).count();
    Ok(MultiplicativityReport {
        n: cfg.n(),
        m: cfg.m(),
        seed,
        passed,
        failed: trials - passed,
        trials: verdicts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;
    use crate::rings::restrict;

    fn cfg(n: usize, m: usize) -> RingConfig {
        RingConfig::new(n, m).unwrap()
    }

    fn x(i: u32) -> Polynomial {
        Polynomial::var(Variable::Abstract { copy: i })
    }

    fn d(copy: u32, coord: u32) -> Polynomial {
        Polynomial::var(Variable::Diagonal { copy, coord })
    }

    fn one(f: Family) -> Polynomial {
        Polynomial::one(f)
    }

    #[test]
    fn d_of_examples() {
        let c = cfg(2, 2);
        assert_eq!(d_of(&x(1), &c).unwrap(), &d(1, 1) * &d(1, 2));
        assert_eq!(
            d_of(&one(Family::Abstract), &c).unwrap(),
            one(Family::Diagonal)
        );
        assert_eq!(
            d_of(&(&x(1) + &x(2)), &c).unwrap(),
            &(&d(1, 1) + &d(2, 1)) * &(&d(1, 2) + &d(2, 2))
        );
        assert!(d_of(&x(3), &c).is_err());
        assert!(d_of(&d(1, 1), &c).is_err());
    }

    #[test]
    fn d_of_multiplicative_examples() {
        let c = cfg(2, 2);
        let lhs = d_of(&(&x(1) * &x(2)), &c).unwrap();
        assert_eq!(lhs, &d_of(&x(1), &c).unwrap() * &d_of(&x(2), &c).unwrap());
        assert_eq!(lhs, &(&(&d(1, 1) * &d(2, 1)) * &d(1, 2)) * &d(2, 2));
        let a = &(&x(1) * &x(1)) - &x(2).scale(&rat(3));
        assert_eq!(
            d_of(&(&a * &one(Family::Abstract)), &c).unwrap(),
            d_of(&a, &c).unwrap()
        );
        assert_eq!(d_of(&(&a * &a), &c).unwrap(), d_of(&a, &c).unwrap().pow(2));
    }

    #[test]
    fn polarized_d_examples() {
        let c1 = cfg(1, 2);
        let a = &x(1) + &(&x(2) * &x(2));
        assert_eq!(
            polarized_d(std::slice::from_ref(&a), &c1).unwrap(),
            d_of(&a, &c1).unwrap()
        );
        let c2 = cfg(2, 2);
        assert_eq!(
            polarized_d(&[a.clone(), a.clone()], &c2).unwrap(),
            d_of(&a, &c2).unwrap().scale(&rat(2))
        );
        let expected = &(&d(1, 1) * &d(2, 2)) + &(&d(2, 1) * &d(1, 2));
        assert_eq!(polarized_d(&[x(1), x(2)], &c2).unwrap(), expected);
        assert_eq!(sym_tensor_element(&[x(1), x(2)], &c2).unwrap(), expected);
        assert!(matches!(
            polarized_d(&[x(1)], &c2),
            Err(Error::ArgumentCount {
                expected: 2,
                found: 1
            })
        ));
        assert!(sym_tensor_element(&[x(1), x(1), x(1)], &c2).is_err());
    }

    #[test]
    fn sym_tensor_of_identical_args() {
        let c = cfg(3, 2);
        let a = &x(1) - &x(2);
        let sym = sym_tensor_element(&[a.clone(), a.clone(), a.clone()], &c).unwrap();
        assert_eq!(sym, d_of(&a, &c).unwrap().scale(&rat(6)));
        assert!(is_sn_invariant(&sym, &c).unwrap());
    }

    #[test]
    fn polarize_examples() {
        let c = cfg(1, 3);
        let sq = &d(1, 1) * &d(1, 1);
        assert_eq!(
            polarize(&sq, 1, &[2, 3], &c).unwrap(),
            (&d(2, 1) * &d(3, 1)).scale(&rat(2))
        );
        let lin = &d(1, 1).scale(&rat(5)) + &Polynomial::zero(Family::Diagonal);
        assert_eq!(polarize(&lin, 1, &[3], &c).unwrap(), d(3, 1).scale(&rat(5)));
        assert_eq!(
            restitute(&(&d(2, 1) * &d(3, 1)).scale(&rat(2)), &[2, 3], 1, &c).unwrap(),
            sq.scale(&rat(2))
        );
    }

    #[test]
    fn polarize_errors() {
        let c = cfg(2, 4);
        let p = &(&d(1, 1) * &d(1, 2)) + &d(1, 1);
        assert!(matches!(
            polarize(&p, 1, &[2, 3], &c),
            Err(Error::NotHomogeneous { .. })
        ));
        let q = &d(1, 1) * &d(2, 2);
        assert_eq!(polarize(&q, 1, &[2], &c), Err(Error::TargetCollision(2)));
        assert_eq!(
            polarize(&(&d(1, 1) * &d(1, 1)), 1, &[3, 3], &c),
            Err(Error::TargetCollision(3))
        );
        assert!(polarize(&q, 1, &[5], &c).is_err());
        assert!(restitute(&(&d(2, 1) * &d(2, 1)), &[2], 1, &c).is_err());
    }

    #[test]
    fn polarize_commutes_with_restrict_on_traces() {
        use crate::traceinv::{eval_generic, TraceExpression, TraceWord};
        // tr(X1 X1) and tr(X1 X1 X2) at n = 2
        let c = cfg(2, 4);
        for letters in [vec![1, 1], vec![1, 1, 2]] {
            let e = TraceExpression::product(vec![TraceWord::new(letters).unwrap()], rat(1));
            let g = eval_generic(&e, &c).unwrap();
            let lhs = restrict(&polarize(&g, 1, &[3, 4], &c).unwrap(), &c).unwrap();
            let rhs = polarize(&restrict(&g, &c).unwrap(), 1, &[3, 4], &c).unwrap();
            assert_eq!(lhs, rhs);
            assert!(!lhs.is_zero());
        }
    }

    #[test]
    fn polarized_square_trace_is_twice_the_mixed_trace() {
        use crate::traceinv::{eval_generic, TraceExpression, TraceWord};
        // P(tr(X1^2)) into copies 2,3 equals 2 tr(X2 X3).
        let c = cfg(3, 3);
        let sq = TraceExpression::product(vec![TraceWord::new(vec![1, 1]).unwrap()], rat(1));
        let mixed = TraceExpression::product(vec![TraceWord::new(vec![2, 3]).unwrap()], rat(2));
        let g = eval_generic(&sq, &c).unwrap();
        assert_eq!(
            polarize(&g, 1, &[2, 3], &c).unwrap(),
            eval_generic(&mixed, &c).unwrap()
        );
    }

    #[test]
    fn check_multiplicative_passes() {
        let report = check_multiplicative(10, 7, &cfg(2, 2)).unwrap();
        assert_eq!(report.passed, 10);
        assert_eq!(report, check_multiplicative(10, 7, &cfg(2, 2)).unwrap());
    }
}
