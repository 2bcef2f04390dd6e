use std::collections::HashMap;

use proptest::prelude::*;

use cominv::combinat::Permutation;
use cominv::maps::{polarize, restitute};
use cominv::parse::{parse_expression, parse_polynomial};
use cominv::poly::{rat, rat_frac, Family, Monomial, Polynomial, Rational, Variable};
use cominv::rings::{is_sn_invariant, restrict, sn_act, RingConfig};
use cominv::traceinv::{eval_diagonal, eval_generic, reduce_traces, TraceExpression, TraceWord};

const N: usize = 2;
const M: usize = 3;

fn cfg() -> RingConfig {
    RingConfig::new(N, M).unwrap()
}

fn diag_var() -> impl Strategy<Value = Variable> {
    (1..=M, 1..=N).prop_map(|(i, j)| cfg().diagonal(i, j).unwrap())
}

fn coeff() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(a, b)| rat_frac(a, b))
}

fn monomial() -> impl Strategy<Value = Monomial> {
    prop::collection::vec((diag_var(), 1u32..=2), 0..=3).prop_map(Monomial::from_powers)
}

fn diag_poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((monomial(), coeff()), 0..=4).prop_map(|terms| {
        let mut p = Polynomial::zero(Family::Diagonal);
        for (m, c) in terms {
            p.add_scaled(
                &rat(1),
                &Polynomial::monomial(Family::Diagonal, m, c).unwrap(),
            )
            .unwrap();
        }
        p
    })
}

fn word() -> impl Strategy<Value = TraceWord> {
    prop::collection::vec(1u32..=M as u32, 1..=3).prop_map(|l| TraceWord::new(l).unwrap())
}

fn expression() -> impl Strategy<Value = TraceExpression> {
    prop::collection::vec((prop::collection::vec(word(), 1..=3), coeff()), 1..=3).prop_map(
        |terms| {
            terms
                .into_iter()
                .fold(TraceExpression::zero(), |acc, (ws, c)| {
                    acc.add(&TraceExpression::product(ws, c))
                })
        },
    )
}

/// Products in which no matrix index repeats, as the reduction requires.
fn distinct_product() -> impl Strategy<Value = Vec<TraceWord>> {
    let letters = prop::sample::subsequence((1..=4u32).collect::<Vec<_>>(), 1..=4).prop_shuffle();
    (letters, any::<u64>()).prop_map(|(letters, cuts)| {
        let mut words = vec![vec![letters[0]]];
        for (i, &l) in letters.iter().enumerate().skip(1) {
            if cuts >> i & 1 == 1 {
                words.push(vec![l]);
            } else {
                words.last_mut().unwrap().push(l);
            }
        }
        words
            .into_iter()
            .map(|w| TraceWord::new(w).unwrap())
            .collect()
    })
}

fn point() -> impl Strategy<Value = HashMap<Variable, Rational>> {
    prop::collection::vec(coeff(), M * N).prop_map(|vals| {
        let mut at = HashMap::new();
        for i in 1..=M {
            for j in 1..=N {
                at.insert(
                    cfg().diagonal(i, j).unwrap(),
                    vals[(i - 1) * N + j - 1].clone(),
                );
            }
        }
        at
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in diag_poly(), b in diag_poly(), c in diag_poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Polynomial::one(Family::Diagonal), a.clone());
    }

    #[test]
    fn eval_is_a_homomorphism(a in diag_poly(), b in diag_poly(), at in point()) {
        let ea = a.eval(&at).unwrap();
        let eb = b.eval(&at).unwrap();
        prop_assert_eq!((&a + &b).eval(&at).unwrap(), &ea + &eb);
        prop_assert_eq!((&a * &b).eval(&at).unwrap(), ea * eb);
    }

    #[test]
    fn monomial_order_is_multiplicative(a in monomial(), b in monomial(), c in monomial()) {
        prop_assert!(Monomial::one() <= a);
        prop_assert_eq!(a.cmp(&b), a.mul(&c).cmp(&b.mul(&c)));
    }

    #[test]
    fn polynomial_text_roundtrip(p in diag_poly()) {
        prop_assert_eq!(parse_polynomial(&p.to_string(), Family::Diagonal).unwrap(), p);
    }

    #[test]
    fn expression_text_roundtrip(e in expression()) {
        prop_assert_eq!(parse_expression(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn restriction_commutes_with_evaluation(e in expression()) {
        let generic = eval_generic(&e, &cfg()).unwrap();
        prop_assert_eq!(restrict(&generic, &cfg()).unwrap(), eval_diagonal(&e, &cfg()).unwrap());
    }

    #[test]
    fn diagonal_traces_are_symmetric(e in expression()) {
        prop_assert!(is_sn_invariant(&eval_diagonal(&e, &cfg()).unwrap(), &cfg()).unwrap());
    }

    #[test]
    fn restriction_is_a_homomorphism(a in expression(), b in expression()) {
        let c = cfg();
        let (pa, pb) = (eval_generic(&a, &c).unwrap(), eval_generic(&b, &c).unwrap());
        let (ra, rb) = (restrict(&pa, &c).unwrap(), restrict(&pb, &c).unwrap());
        prop_assert_eq!(restrict(&(&pa * &pb), &c).unwrap(), &ra * &rb);
        prop_assert_eq!(restrict(&(&pa + &pb), &c).unwrap(), &ra + &rb);
    }

    #[test]
    fn permutation_action_is_a_group_action(p in diag_poly(), swap in any::<bool>()) {
        let s = if swap { Permutation::from_images(vec![1, 0]).unwrap() } else { Permutation::identity(2) };
        let back = sn_act(&s.inverse(), &sn_act(&s, &p).unwrap()).unwrap();
        prop_assert_eq!(back, p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reduction_preserves_value_on_small_matrices(
        terms in prop::collection::vec((distinct_product(), coeff()), 1..=3),
    ) {
        let e = terms.into_iter().fold(TraceExpression::zero(), |acc, (ws, c)| {
            acc.add(&TraceExpression::product(ws, c))
        });
        let four = RingConfig::new(N, 4).unwrap();
        let r = reduce_traces(&e, N).unwrap();
        prop_assert!(r.max_factor_count() <= N);
        prop_assert_eq!(eval_generic(&r, &four).unwrap(), eval_generic(&e, &four).unwrap());
    }

    #[test]
    fn restitution_undoes_polarization(
        split in 0u32..=3,
        c in coeff(),
        k in 1u32..=3,
    ) {
        // x[1,1]^a * x[1,2]^b with a + b = k
        let c1 = RingConfig::new(N, 1 + k as usize).unwrap();
        let a = split.min(k);
        let powers = [(c1.diagonal(1, 1).unwrap(), a), (c1.diagonal(1, 2).unwrap(), k - a)];
        let mono = Monomial::from_powers(powers.into_iter().filter(|&(_, e)| e > 0));
        let p = Polynomial::monomial(Family::Diagonal, mono, c).unwrap();

        let targets: Vec<u32> = (2..=1 + k).collect();
        let polar = polarize(&p, 1, &targets, &c1).unwrap();
        let back = restitute(&polar, &targets, 1, &c1).unwrap();
        let factorial: i64 = (1..=k as i64).product();
        prop_assert_eq!(back, p.scale(&rat(factorial)));
    }
}
