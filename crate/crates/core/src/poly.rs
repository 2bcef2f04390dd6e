//! Exact sparse multivariate polynomials over the rationals.
//!
//! Variables come in three disjoint families: entries `x[i;h,k]` of generic
//! matrices, coordinates `x[i,j]` of diagonal matrices, and abstract commuting
//! variables `x[i]`. A polynomial lives in exactly one family; ring maps
//! between families are explicit (see [`crate::rings`]).
//!
//! Monomials are ordered graded-lexicographically: higher total degree is
//! larger, and ties are broken by the exponent of the smallest variable first
//! (variables ordered by family, then copy index, then remaining indices).

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Generic,
    Diagonal,
    Abstract,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Generic => "generic",
            Family::Diagonal => "diagonal",
            Family::Abstract => "abstract",
        })
    }
}

/// A single indeterminate. All indices are 1-based.
///
/// The derived order is the variable order used by the monomial order:
/// family first, then copy index, then the remaining indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Variable {
    /// Entry `(row, col)` of the generic matrix `X_copy`.
    Generic { copy: u32, row: u32, col: u32 },
    /// Coordinate `coord` of the vector variable `x_copy`.
    Diagonal { copy: u32, coord: u32 },
    /// The abstract commuting variable `x_copy`.
    Abstract { copy: u32 },
}

impl Variable {
    pub fn family(&self) -> Family {
        match self {
            Variable::Generic { .. } => Family::Generic,
            Variable::Diagonal { .. } => Family::Diagonal,
            Variable::Abstract { .. } => Family::Abstract,
        }
    }

    pub fn copy(&self) -> u32 {
        match *self {
            Variable::Generic { copy, .. }
            | Variable::Diagonal { copy, .. }
            | Variable::Abstract { copy } => copy,
        }
    }

    /// The same variable with its copy index replaced.
    pub fn with_copy(&self, copy: u32) -> Variable {
        match *self {
            Variable::Generic { row, col, .. } => Variable::Generic { copy, row, col },
            Variable::Diagonal { coord, .. } => Variable::Diagonal { copy, coord },
            Variable::Abstract { .. } => Variable::Abstract { copy },
        }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variable::Generic { copy, row, col } => write!(f, "x[{copy};{row},{col}]"),
            Variable::Diagonal { copy, coord } => write!(f, "x[{copy},{coord}]"),
            Variable::Abstract { copy } => write!(f, "x[{copy}]"),
        }
    }
}

/// A power product, stored as `(variable, exponent)` pairs sorted by variable
/// with no zero exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial {
    degree: u32,
    powers: Vec<(Variable, u32)>,
}

impl Monomial {
    fn from_sorted(powers: Vec<(Variable, u32)>) -> Self {
        Monomial {
            degree: powers.iter().map(|&(_, e)| e).sum(),
            powers,
        }
    }

    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: Variable) -> Self {
        Monomial {
            degree: 1,
            powers: vec![(v, 1)],
        }
    }

    /// Builds a monomial from arbitrary `(variable, exponent)` pairs, merging
    /// repeats and dropping zero exponents.
    pub fn from_powers<I: IntoIterator<Item = (Variable, u32)>>(powers: I) -> Self {
        let mut map: BTreeMap<Variable, u32> = BTreeMap::new();
        for (v, e) in powers {
            *map.entry(v).or_insert(0) += e;
        }
        Monomial::from_sorted(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.powers.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn degree_in_copy(&self, copy: u32) -> u32 {
        self.powers
            .iter()
            .filter(|(v, _)| v.copy() == copy)
            .map(|&(_, e)| e)
            .sum()
    }

    pub fn exponent(&self, v: &Variable) -> u32 {
        self.powers
            .binary_search_by(|(w, _)| w.cmp(v))
            .map(|i| self.powers[i].1)
            .unwrap_or(0)
    }

    pub fn powers(&self) -> &[(Variable, u32)] {
        &self.powers
    }

    pub fn variables(&self) -> impl Iterator<Item = &Variable> {
        self.powers.iter().map(|(v, _)| v)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.powers, &other.powers);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial {
            degree: self.degree + other.degree,
            powers: out,
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        // Lex: the first variable (in variable order) whose exponents differ
        // decides, larger exponent wins.
        let (a, b) = (&self.powers, &other.powers);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => match a[i].1.cmp(&b[j].1) {
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                    }
                    ord => return ord,
                },
            }
        }
        (a.len() - i).cmp(&(b.len() - j))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.powers.is_empty() {
            return f.write_str("1");
        }
        for (idx, (v, e)) in self.powers.iter().enumerate() {
            if idx > 0 {
                f.write_str("*")?;
            }
            write!(f, "{v}")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// A sparse polynomial in a single variable family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    family: Family,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(family: Family) -> Self {
        Polynomial {
            family,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(family: Family) -> Self {
        Self::constant(family, Rational::one())
    }

    pub fn constant(family: Family, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Polynomial { family, terms }
    }

    pub fn var(v: Variable) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(v), Rational::one());
        Polynomial {
            family: v.family(),
            terms,
        }
    }

    pub fn monomial(family: Family, m: Monomial, c: Rational) -> Result<Self> {
        Self::from_terms(family, std::iter::once((m, c)))
    }

    /// Collects terms, summing repeated monomials and dropping zeros. Every
    /// variable must belong to `family`.
    pub fn from_terms<I>(family: Family, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in terms {
            if let Some(v) = m.variables().find(|v| v.family() != family) {
                return Err(Error::FamilyMismatch {
                    expected: family,
                    found: v.family(),
                });
            }
            accumulate(&mut acc, m, c);
        }
        Ok(Self::from_accumulator(family, acc))
    }

    fn from_accumulator(family: Family, acc: HashMap<Monomial, Rational>) -> Self {
        Polynomial {
            family,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Distinct variables occurring in the polynomial, sorted.
    pub fn variables(&self) -> Vec<Variable> {
        let mut vars: Vec<Variable> = self
            .terms
            .keys()
            .flat_map(|m| m.variables().copied())
            .collect();
        vars.sort();
        vars.dedup();
        vars
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn leading_monomial(&self) -> Result<&Monomial> {
        self.terms.keys().next_back().ok_or(Error::ZeroPolynomial)
    }

    pub fn leading_term(&self) -> Result<(&Monomial, &Rational)> {
        self.terms.iter().next_back().ok_or(Error::ZeroPolynomial)
    }

    fn check_family(&self, other: &Polynomial) -> Result<()> {
        if self.family != other.family {
            return Err(Error::FamilyMismatch {
                expected: self.family,
                found: other.family,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_family(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_into(&mut terms, m, c);
        }
        Ok(Polynomial {
            family: self.family,
            terms,
        })
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_family(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial::zero(self.family));
        }
        let mut acc: HashMap<Monomial, Rational> = HashMap::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                accumulate(&mut acc, ma.mul(mb), ca * cb);
            }
        }
        Ok(Self::from_accumulator(self.family, acc))
    }

    /// In-place `self += c * other`, the inner step of elimination loops.
    pub fn add_scaled(&mut self, c: &Rational, other: &Polynomial) -> Result<()> {
        self.check_family(other)?;
        if c.is_zero() {
            return Ok(());
        }
        for (m, d) in &other.terms {
            add_into(&mut self.terms, m, &(c * d));
        }
        Ok(())
    }

    /// In-place `self += a * b`.
    pub fn add_product(&mut self, a: &Polynomial, b: &Polynomial) -> Result<()> {
        self.check_family(a)?;
        self.check_family(b)?;
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                add_into(&mut self.terms, &ma.mul(mb), &(ca * cb));
            }
        }
        Ok(())
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.family);
        }
        Polynomial {
            family: self.family,
            terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect(),
        }
    }

    fn neg_ref(&self) -> Polynomial {
        Polynomial {
            family: self.family,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.family);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact evaluation; every variable of `self` must be assigned.
    pub fn eval(&self, assignment: &HashMap<Variable, Rational>) -> Result<Rational> {
        self.eval_with(|v| assignment.get(v).cloned())
    }

    pub fn eval_with<F>(&self, mut value: F) -> Result<Rational>
    where
        F: FnMut(&Variable) -> Option<Rational>,
    {
        let mut cache: HashMap<Variable, Rational> = HashMap::new();
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (v, e) in m.powers() {
                let x = match cache.get(v) {
                    Some(x) => x.clone(),
                    None => {
                        let x = value(v).ok_or(Error::Unassigned(*v))?;
                        cache.insert(*v, x.clone());
                        x
                    }
                };
                term *= num_traits::pow(x, *e as usize);
            }
            total += term;
        }
        Ok(total)
    }

    /// Applies a variable substitution `v -> f(v)` into `target`. A `None`
    /// image sends the variable to zero, killing every monomial containing it.
    pub fn map_variables<F>(&self, target: Family, mut f: F) -> Result<Polynomial>
    where
        F: FnMut(&Variable) -> Result<Option<Variable>>,
    {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        'terms: for (m, c) in &self.terms {
            let mut powers = Vec::with_capacity(m.powers().len());
            for (v, e) in m.powers() {
                match f(v)? {
                    Some(w) => {
                        if w.family() != target {
                            return Err(Error::FamilyMismatch {
                                expected: target,
                                found: w.family(),
                            });
                        }
                        powers.push((w, *e));
                    }
                    None => continue 'terms,
                }
            }
            accumulate(&mut acc, Monomial::from_powers(powers), c.clone());
        }
        Ok(Self::from_accumulator(target, acc))
    }

    /// Copy indices occurring in the polynomial, sorted.
    pub fn copies(&self) -> Vec<u32> {
        let mut copies: Vec<u32> = self.variables().iter().map(Variable::copy).collect();
        copies.dedup();
        copies.sort_unstable();
        copies.dedup();
        copies
    }
}

fn accumulate(acc: &mut HashMap<Monomial, Rational>, m: Monomial, c: Rational) {
    match acc.get_mut(&m) {
        Some(d) => *d += c,
        None => {
            acc.insert(m, c);
        }
    }
}

fn add_into(terms: &mut BTreeMap<Monomial, Rational>, m: &Monomial, c: &Rational) {
    match terms.get_mut(m) {
        Some(d) => {
            *d += c;
            if d.is_zero() {
                terms.remove(m);
            }
        }
        None => {
            if !c.is_zero() {
                terms.insert(m.clone(), c.clone());
            }
        }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    /// Panics on a family mismatch; use [`Polynomial::try_add`] to recover.
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs)
            .expect("polynomial addition across families")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs)
            .expect("polynomial subtraction across families")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs)
            .expect("polynomial multiplication across families")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        self.neg_ref()
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        self.neg_ref()
    }
}

/// Writes a signed coefficient times a "body" using the shared text
/// conventions: unit coefficients are omitted, the first term carries a bare
/// leading minus, later terms are joined with ` + ` / ` - `.
pub(crate) fn write_signed_term(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    c: &Rational,
    body: Option<&dyn fmt::Display>,
) -> fmt::Result {
    let negative = c.is_negative();
    match (first, negative) {
        (true, true) => f.write_str("-")?,
        (true, false) => {}
        (false, true) => f.write_str(" - ")?,
        (false, false) => f.write_str(" + ")?,
    }
    let abs = c.abs();
    match body {
        None => write!(f, "{abs}"),
        Some(b) if abs.is_one() => write!(f, "{b}"),
        Some(b) => write!(f, "{abs}*{b}"),
    }
}

impl fmt::Display for Polynomial {
    /// Terms from the leading monomial down, e.g. `2*x[1,1]*x[2,2] - 1/3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let body: Option<&dyn fmt::Display> = if m.is_one() { None } else { Some(m) };
            write_signed_term(f, idx == 0, c, body)?;
        }
        Ok(())
    }
}
