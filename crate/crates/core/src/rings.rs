//! The generic-matrix ring `R_{n,m}`, the diagonal ring `B_{n,m}`, and the
//! maps between them.

use itertools::Itertools;
use num_traits::One;

use crate::combinat::{enumerate_permutations, Permutation, SetPartition};
use crate::error::{Error, Result};
use crate::poly::{Family, Monomial, Polynomial, Rational, Variable};

/// Ambient sizes: `n×n` matrices, `m` copies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RingConfig {
    n: usize,
    m: usize,
}

impl RingConfig {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidConfig(format!(
                "n and m must be positive (got n={n}, m={m})"
            )));
        }
        Ok(RingConfig { n, m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    fn check_copy(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.m {
            return Err(Error::IndexOutOfRange(format!(
                "copy {i} outside 1..{}",
                self.m
            )));
        }
        Ok(())
    }

    fn check_coord(&self, j: usize) -> Result<()> {
        if j == 0 || j > self.n {
            return Err(Error::IndexOutOfRange(format!(
                "coordinate {j} outside 1..{}",
                self.n
            )));
        }
        Ok(())
    }

    /// Checks the indices of `v` against this configuration.
    pub fn validate(&self, v: &Variable) -> Result<()> {
        match *v {
            Variable::Generic { copy, row, col } => {
                self.check_copy(copy as usize)?;
                self.check_coord(row as usize)?;
                self.check_coord(col as usize)
            }
            Variable::Diagonal { copy, coord } => {
                self.check_copy(copy as usize)?;
                self.check_coord(coord as usize)
            }
            Variable::Abstract { copy } => self.check_copy(copy as usize),
        }
    }

    pub fn validate_poly(&self, p: &Polynomial) -> Result<()> {
        p.variables().iter().try_for_each(|v| self.validate(v))
    }

    pub fn generic(&self, copy: usize, row: usize, col: usize) -> Result<Variable> {
        let v = Variable::Generic {
            copy: copy as u32,
            row: row as u32,
            col: col as u32,
        };
        self.validate(&v)?;
        Ok(v)
    }

    pub fn diagonal(&self, copy: usize, coord: usize) -> Result<Variable> {
        let v = Variable::Diagonal {
            copy: copy as u32,
            coord: coord as u32,
        };
        self.validate(&v)?;
        Ok(v)
    }

    pub fn abstract_var(&self, copy: usize) -> Result<Variable> {
        let v = Variable::Abstract { copy: copy as u32 };
        self.validate(&v)?;
        Ok(v)
    }
}

/// A square matrix with polynomial entries, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    size: usize,
    family: Family,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    /// Entries must be square in count and share one family. Matrices over the
    /// diagonal family must have zero off-diagonal entries.
    pub fn from_entries(size: usize, family: Family, entries: Vec<Polynomial>) -> Result<Self> {
        if entries.len() != size * size {
            return Err(Error::SizeMismatch(format!(
                "{} entries for a {size}x{size} matrix",
                entries.len()
            )));
        }
        if let Some(e) = entries.iter().find(|e| e.family() != family) {
            return Err(Error::FamilyMismatch {
                expected: family,
                found: e.family(),
            });
        }
        if family == Family::Diagonal {
            for (idx, e) in entries.iter().enumerate() {
                if idx / size != idx % size && !e.is_zero() {
                    return Err(Error::InvalidConfig(
                        "diagonal-model matrix with a nonzero off-diagonal entry".into(),
                    ));
                }
            }
        }
        Ok(PolyMatrix {
            size,
            family,
            entries,
        })
    }

    pub fn identity(size: usize, family: Family) -> Self {
        let entries = (0..size * size)
            .map(|idx| {
                if idx / size == idx % size {
                    Polynomial::one(family)
                } else {
                    Polynomial::zero(family)
                }
            })
            .collect();
        PolyMatrix {
            size,
            family,
            entries,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Entry at 1-based `(row, col)`.
    pub fn entry(&self, row: usize, col: usize) -> &Polynomial {
        &self.entries[(row - 1) * self.size + (col - 1)]
    }

    fn at(&self, r: usize, c: usize) -> &Polynomial {
        &self.entries[r * self.size + c]
    }

    fn check_compatible(&self, other: &PolyMatrix) -> Result<()> {
        if self.size != other.size {
            return Err(Error::SizeMismatch(format!(
                "{}x{0} against {}x{1}",
                self.size, other.size
            )));
        }
        if self.family != other.family {
            return Err(Error::FamilyMismatch {
                expected: self.family,
                found: other.family,
            });
        }
        Ok(())
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.size)
            .cartesian_product(0..self.size)
            .all(|(r, c)| r == c || self.at(r, c).is_zero())
    }
}

/// `X_i`: entry `(h, k)` is the variable `x[i;h,k]`.
pub fn generic_matrix(i: usize, cfg: &RingConfig) -> Result<PolyMatrix> {
    let n = cfg.n();
    let mut entries = Vec::with_capacity(n * n);
    for h in 1..=n {
        for k in 1..=n {
            entries.push(Polynomial::var(cfg.generic(i, h, k)?));
        }
    }
    PolyMatrix::from_entries(n, Family::Generic, entries)
}

/// `diag(x[i,1], …, x[i,n])`.
pub fn diagonal_matrix(i: usize, cfg: &RingConfig) -> Result<PolyMatrix> {
    let n = cfg.n();
    let mut entries = Vec::with_capacity(n * n);
    for h in 1..=n {
        for k in 1..=n {
            entries.push(if h == k {
                Polynomial::var(cfg.diagonal(i, h)?)
            } else {
                Polynomial::zero(Family::Diagonal)
            });
        }
    }
    PolyMatrix::from_entries(n, Family::Diagonal, entries)
}

pub fn mat_mul(a: &PolyMatrix, b: &PolyMatrix) -> Result<PolyMatrix> {
    a.check_compatible(b)?;
    let n = a.size;
    let mut entries = Vec::with_capacity(n * n);
    for r in 0..n {
        for c in 0..n {
            let mut acc = Polynomial::zero(a.family);
            for t in 0..n {
                acc.add_product(a.at(r, t), b.at(t, c))?;
            }
            entries.push(acc);
        }
    }
    PolyMatrix::from_entries(n, a.family, entries)
}

pub fn trace(a: &PolyMatrix) -> Polynomial {
    (0..a.size).fold(Polynomial::zero(a.family), |acc, i| &acc + a.at(i, i))
}

/// Leibniz expansion `Σ_σ ε_σ Π_i a_{i,σ(i)}`.
pub fn det(a: &PolyMatrix) -> Result<Polynomial> {
    let n = a.size;
    if n == 0 {
        return Ok(Polynomial::one(a.family));
    }
    let mut acc = Polynomial::zero(a.family);
    for sigma in enumerate_permutations(n)? {
        let mut term = Polynomial::constant(a.family, Rational::from_integer(sigma.sign().into()));
        for i in 0..n {
            let e = a.at(i, sigma.apply(i));
            if e.is_zero() {
                term = Polynomial::zero(a.family);
                break;
            }
            term = &term * e;
        }
        acc = &acc + &term;
    }
    Ok(acc)
}

/// `π`: evaluation at diagonal matrices, `x[i;h,h] ↦ x[i,h]` and
/// off-diagonal entries to zero.
pub fn restrict(p: &Polynomial, cfg: &RingConfig) -> Result<Polynomial> {
    if p.family() != Family::Generic {
        return Err(Error::FamilyMismatch {
            expected: Family::Generic,
            found: p.family(),
        });
    }
    p.map_variables(Family::Diagonal, |v| {
        cfg.validate(v)?;
        match *v {
            Variable::Generic { copy, row, col } if row == col => {
                Ok(Some(Variable::Diagonal { copy, coord: row }))
            }
            _ => Ok(None),
        }
    })
}

/// The `S_n` action on `B_{n,m}`: coordinate `j` of every `x[i,j]` becomes
/// `w(j)`.
pub fn sn_act(w: &Permutation, p: &Polynomial) -> Result<Polynomial> {
    if p.family() != Family::Diagonal {
        return Err(Error::FamilyMismatch {
            expected: Family::Diagonal,
            found: p.family(),
        });
    }
    p.map_variables(Family::Diagonal, |v| match *v {
        Variable::Diagonal { copy, coord } => {
            let j = coord as usize;
            if j == 0 || j > w.size() {
                return Err(Error::IndexOutOfRange(format!(
                    "coordinate {j} outside the {}-point permutation",
                    w.size()
                )));
            }
            Ok(Some(Variable::Diagonal {
                copy,
                coord: (w.apply(j - 1) + 1) as u32,
            }))
        }
        _ => unreachable!("family checked above"),
    })
}

/// Whether `p` is fixed by all of `S_n`. Invariance under the transposition
/// `(1 2)` and the long cycle `(1 2 … n)` suffices since they generate.
pub fn is_sn_invariant(p: &Polynomial, cfg: &RingConfig) -> Result<bool> {
    if p.family() != Family::Diagonal {
        return Err(Error::FamilyMismatch {
            expected: Family::Diagonal,
            found: p.family(),
        });
    }
    cfg.validate_poly(p)?;
    let n = cfg.n();
    if n == 1 {
        return Ok(true);
    }
    let swap = Permutation::from_cycles(n, &[&[0, 1]])?;
    let cycle: Vec<usize> = (0..n).collect();
    let long = Permutation::from_cycles(n, &[&cycle])?;
    Ok(sn_act(&swap, p)? == *p && sn_act(&long, p)? == *p)
}

/// The multisymmetric orbit sum `m_Λ`: the sum of `Π_j x[j, g(j)]` over
/// all words `g: [m] -> [n]` whose fiber partition is exactly `Λ`.
pub fn orbit_sum(partition: &SetPartition, cfg: &RingConfig) -> Result<Polynomial> {
    let k = partition.num_blocks();
    if k > cfg.n() {
        return Err(Error::TooManyBlocks {
            blocks: k,
            max: cfg.n(),
        });
    }
    if partition.m() > cfg.m() {
        return Err(Error::IndexOutOfRange(format!(
            "partition of [{}] in a ring with {} copies",
            partition.m(),
            cfg.m()
        )));
    }
    // Words with fiber partition Λ are injective assignments blocks -> [n].
    let mut terms = Vec::new();
    for coords in (1..=cfg.n()).permutations(k) {
        let powers = partition
            .blocks()
            .iter()
            .zip(&coords)
            .flat_map(|(block, &c)| {
                block.iter().map(move |&j| {
                    (
                        Variable::Diagonal {
                            copy: j as u32,
                            coord: c as u32,
                        },
                        1,
                    )
                })
            });
        terms.push((Monomial::from_powers(powers), Rational::one()));
    }
    Polynomial::from_terms(Family::Diagonal, terms)
}

/// True when every term has degree exactly one in each copy `1..=m` and no
/// other copies occur.
pub fn is_multilinear(p: &Polynomial, m: usize) -> bool {
    p.terms().all(|(mono, _)| {
        mono.powers()
            .iter()
            .all(|&(v, e)| e == 1 && (1..=m as u32).contains(&v.copy()))
            && (1..=m as u32).all(|c| mono.degree_in_copy(c) == 1)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::enumerate_set_partitions;
    use crate::poly::rat;

    fn cfg(n: usize, m: usize) -> RingConfig {
        RingConfig::new(n, m).unwrap()
    }

    fn d(copy: u32, coord: u32) -> Polynomial {
        Polynomial::var(Variable::Diagonal { copy, coord })
    }

    fn g(copy: u32, row: u32, col: u32) -> Polynomial {
        Polynomial::var(Variable::Generic { copy, row, col })
    }

    #[test]
    fn config_validation() {
        assert!(RingConfig::new(0, 1).is_err());
        assert!(RingConfig::new(1, 0).is_err());
        let c = cfg(2, 2);
        assert!(c.generic(3, 1, 1).is_err());
        assert!(c.diagonal(1, 3).is_err());
        assert!(c.abstract_var(0).is_err());
    }

    #[test]
    fn generic_matrix_entries() {
        let x = generic_matrix(1, &cfg(2, 1)).unwrap();
        assert_eq!(x.entry(1, 2), &g(1, 1, 2));
        assert_eq!(x.entry(2, 1), &g(1, 2, 1));
        let one = generic_matrix(1, &cfg(1, 1)).unwrap();
        assert_eq!(one.entry(1, 1), &g(1, 1, 1));
        assert_eq!(x, generic_matrix(1, &cfg(2, 1)).unwrap());
        assert!(generic_matrix(2, &cfg(2, 1)).is_err());
    }

    #[test]
    fn diagonal_matrices_commute_and_close() {
        let c = cfg(2, 2);
        let d1 = diagonal_matrix(1, &c).unwrap();
        let d2 = diagonal_matrix(2, &c).unwrap();
        assert_eq!(d2.entry(2, 2), &d(2, 2));
        let p = mat_mul(&d1, &d2).unwrap();
        assert!(p.is_diagonal());
        assert_eq!(p, mat_mul(&d2, &d1).unwrap());
    }

    #[test]
    fn trace_and_det_examples() {
        let c = cfg(2, 2);
        let x1 = generic_matrix(1, &c).unwrap();
        assert_eq!(trace(&x1), &g(1, 1, 1) + &g(1, 2, 2));
        let d1 = diagonal_matrix(1, &c).unwrap();
        assert_eq!(det(&d1).unwrap(), &d(1, 1) * &d(1, 2));
        let x2 = generic_matrix(2, &c).unwrap();
        let ab = trace(&mat_mul(&x1, &x2).unwrap());
        let ba = trace(&mat_mul(&x2, &x1).unwrap());
        assert_eq!(ab, ba);
        // det of generic 2x2
        assert_eq!(
            det(&x1).unwrap(),
            &(&g(1, 1, 1) * &g(1, 2, 2)) - &(&g(1, 1, 2) * &g(1, 2, 1))
        );
        assert!(mat_mul(&x1, &d1).is_err());
        assert!(mat_mul(&x1, &generic_matrix(1, &cfg(3, 1)).unwrap()).is_err());
    }

    #[test]
    fn det_is_multiplicative_on_generic_2x2() {
        let c = cfg(2, 2);
        let x1 = generic_matrix(1, &c).unwrap();
        let x2 = generic_matrix(2, &c).unwrap();
        let lhs = det(&mat_mul(&x1, &x2).unwrap()).unwrap();
        assert_eq!(lhs, &det(&x1).unwrap() * &det(&x2).unwrap());
    }

    #[test]
    fn restrict_examples() {
        let c = cfg(2, 2);
        assert!(restrict(&g(1, 1, 2), &c).unwrap().is_zero());
        assert_eq!(restrict(&g(1, 1, 1), &c).unwrap(), d(1, 1));
        let x1 = generic_matrix(1, &c).unwrap();
        let x2 = generic_matrix(2, &c).unwrap();
        let t = trace(&mat_mul(&x1, &x2).unwrap());
        let r = restrict(&t, &c).unwrap();
        assert_eq!(r, &(&d(1, 1) * &d(2, 1)) + &(&d(1, 2) * &d(2, 2)));
        assert!(is_sn_invariant(&r, &c).unwrap());
        assert!(restrict(&d(1, 1), &c).is_err());
        assert!(restrict(&g(3, 1, 1), &c).is_err());
    }

    #[test]
    fn sn_action_examples() {
        let swap = Permutation::from_cycles(2, &[&[0, 1]]).unwrap();
        assert_eq!(sn_act(&swap, &d(1, 1)).unwrap(), d(1, 2));
        let p = &(&d(1, 1) * &d(2, 2)) + &d(2, 1);
        assert_eq!(sn_act(&Permutation::identity(2), &p).unwrap(), p);
        let sym = &d(1, 1) * &d(1, 2);
        for w in enumerate_permutations(2).unwrap() {
            assert_eq!(sn_act(&w, &sym).unwrap(), sym);
        }
        assert!(sn_act(&swap, &g(1, 1, 1)).is_err());
    }

    #[test]
    fn invariance_examples() {
        let c = cfg(2, 1);
        assert!(is_sn_invariant(&(&d(1, 1) + &d(1, 2)), &c).unwrap());
        assert!(!is_sn_invariant(&d(1, 1), &c).unwrap());
    }

    #[test]
    fn generator_check_matches_full_group() {
        // x[1,1]*x[2,2] + x[1,2]*x[2,3] + x[1,3]*x[2,1] is fixed by the 3-cycle but not by (1 2).
        let c = cfg(3, 2);
        let p = [(1, 2), (2, 3), (3, 1)]
            .iter()
            .fold(Polynomial::zero(Family::Diagonal), |acc, &(a, b)| {
                &acc + &(&d(1, a) * &d(2, b))
            });
        let full = enumerate_permutations(3)
            .unwrap()
            .iter()
            .all(|w| sn_act(w, &p).unwrap() == p);
        assert_eq!(is_sn_invariant(&p, &c).unwrap(), full);
        assert!(!full);
    }

    #[test]
    fn orbit_sum_examples() {
        let c = cfg(2, 2);
        let single: SetPartition = "{1,2}".parse().unwrap();
        assert_eq!(
            orbit_sum(&single, &c).unwrap(),
            &(&d(1, 1) * &d(2, 1)) + &(&d(1, 2) * &d(2, 2))
        );
        let split: SetPartition = "{1|2}".parse().unwrap();
        assert_eq!(
            orbit_sum(&split, &c).unwrap(),
            &(&d(1, 1) * &d(2, 2)) + &(&d(1, 2) * &d(2, 1))
        );
        let one = SetPartition::single_block(1);
        let c3 = cfg(3, 1);
        assert_eq!(
            orbit_sum(&one, &c3).unwrap(),
            &(&d(1, 1) + &d(1, 2)) + &d(1, 3)
        );
        assert!(orbit_sum(&SetPartition::singletons(3), &c).is_err());
    }

    #[test]
    fn orbit_sums_tile_the_multilinear_slice() {
        for m in 1..=5 {
            for n in 1..=4 {
                let c = cfg(n, m);
                let mut seen = std::collections::HashSet::new();
                for lambda in enumerate_set_partitions(m, n).unwrap() {
                    let s = orbit_sum(&lambda, &c).unwrap();
                    assert!(is_sn_invariant(&s, &c).unwrap());
                    assert!(is_multilinear(&s, m));
                    for (mono, coeff) in s.terms() {
                        assert_eq!(coeff, &rat(1));
                        assert!(seen.insert(mono.clone()), "orbit supports overlap");
                    }
                }
                assert_eq!(seen.len(), n.pow(m as u32));
            }
        }
    }

    #[test]
    fn from_entries_rejects_bad_diagonal() {
        let entries = vec![
            d(1, 1),
            d(1, 1),
            Polynomial::zero(Family::Diagonal),
            d(1, 2),
        ];
        assert!(PolyMatrix::from_entries(2, Family::Diagonal, entries).is_err());
        assert!(PolyMatrix::from_entries(2, Family::Diagonal, vec![d(1, 1)]).is_err());
    }
}
