//! Sparse multivariate polynomials with arbitrary-precision integer
//! coefficients.
//!
//! Variables are indexed from 1. The `y_{ij}` (`i <= j`) indeterminates of
//! the upper-triangular matrix share the same index space through
//! [`y_index`]; a polynomial does not know which family it lives in, only the
//! printers and the JSON header do.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of `y_{ij}` for `1 <= i <= j`: `j (j - 1) / 2 + i`. Independent of
/// the matrix size, so products of different-size minors agree.
pub fn y_index(i: u32, j: u32) -> u32 {
    debug_assert!(1 <= i && i <= j);
    j * (j - 1) / 2 + i
}

/// Inverse of [`y_index`].
pub fn y_pair(index: u32) -> (u32, u32) {
    let mut j = 1;
    while j * (j + 1) / 2 < index {
        j += 1;
    }
    (index - j * (j - 1) / 2, j)
}

pub const Y_PAIRING: &str = "y(i,j) = j(j-1)/2 + i";

/// Product of variables; stored as `(variable, exponent)` pairs sorted by
/// variable, exponents always positive.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(u32, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(i: u32) -> Self {
        assert!(i >= 1, "variables are 1-indexed");
        Monomial(vec![(i, 1)])
    }

    /// From a dense exponent vector, entry `0` being the exponent of `x_1`.
    pub fn from_exponents(exps: &[u32]) -> Self {
        Monomial(
            exps.iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| (i as u32 + 1, e))
                .collect(),
        )
    }

    pub fn from_pairs<I: IntoIterator<Item = (u32, u32)>>(pairs: I) -> Self {
        let mut map = BTreeMap::new();
        for (v, e) in pairs {
            assert!(v >= 1, "variables are 1-indexed");
            *map.entry(v).or_insert(0) += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, i: u32) -> u32 {
        self.0
            .binary_search_by_key(&i, |&(v, _)| v)
            .map_or(0, |p| self.0[p].1)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_var(&self) -> u32 {
        self.0.last().map_or(0, |&(v, _)| v)
    }

    /// Dense exponent vector of length `vars` (must cover every variable).
    pub fn to_exponents(&self, vars: usize) -> Vec<u32> {
        let mut out = vec![0; vars];
        for &(v, e) in &self.0 {
            out[v as usize - 1] = e;
        }
        out
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut p, mut q) = (0, 0);
        while p < a.len() || q < b.len() {
            match (a.get(p), b.get(q)) {
                (Some(&x), Some(&y)) if x.0 == y.0 => {
                    out.push((x.0, x.1 + y.1));
                    p += 1;
                    q += 1;
                }
                (Some(&x), Some(&y)) if x.0 < y.0 => {
                    out.push(x);
                    p += 1;
                }
                (Some(&x), None) => {
                    out.push(x);
                    p += 1;
                }
                (_, Some(&y)) => {
                    out.push(y);
                    q += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Monomial(out)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().all(|&(v, e)| other.exponent(v) >= e)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        self.divides(other).then(|| {
            Monomial(
                other
                    .0
                    .iter()
                    .map(|&(v, e)| (v, e - self.exponent(v)))
                    .filter(|&(_, e)| e > 0)
                    .collect(),
            )
        })
    }

    fn relabel(&self, f: impl Fn(u32) -> u32) -> Monomial {
        Monomial::from_pairs(self.0.iter().map(|&(v, e)| (f(v), e)))
    }

    fn without_vars(&self, i: u32, j: u32) -> Monomial {
        Monomial(
            self.0
                .iter()
                .copied()
                .filter(|&(v, _)| v != i && v != j)
                .collect(),
        )
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>, y: bool) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for &(v, e) in &self.0 {
            if y {
                let (i, j) = y_pair(v);
                write!(f, "y_{{{i},{j}}}")?;
            } else {
                write!(f, "x_{v}")?;
            }
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Graded lexicographic: total degree first, then the larger exponent on the
/// lowest-indexed variable wins.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let (a, b) = (&self.0, &other.0);
            let (mut p, mut q) = (0, 0);
            loop {
                match (a.get(p), b.get(q)) {
                    (None, None) => return Ordering::Equal,
                    (Some(_), None) => return Ordering::Greater,
                    (None, Some(_)) => return Ordering::Less,
                    (Some(&(va, ea)), Some(&(vb, eb))) => {
                        if va != vb {
                            return vb.cmp(&va);
                        }
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                        p += 1;
                        q += 1;
                    }
                }
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, false)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, false)
    }
}

/// Polynomial with nonzero integer coefficients. Iteration is in canonical
/// order: graded lexicographic, leading term first.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, BigInt>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::monomial(Monomial::one(), BigInt::one())
    }

    pub fn var(i: u32) -> Self {
        Polynomial::monomial(Monomial::var(i), BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Polynomial::monomial(Monomial::one(), c.into())
    }

    pub fn monomial(m: Monomial, c: impl Into<BigInt>) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(m, c.into());
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigInt)>>(terms: I) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms, leading monomial first.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> + '_ {
        self.terms.iter().rev()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> + '_ {
        self.terms.keys().rev()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn max_var(&self) -> u32 {
        self.terms.keys().map(Monomial::max_var).max().unwrap_or(0)
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(t, c)| (t.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(t, d)| (t.clone(), d * c)).collect(),
        }
    }

    /// Sets `x_k = 0`.
    pub fn substitute_zero(&self, k: u32) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exponent(k) == 0)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Renames `x_i` to `x_{sigma(i)}`; `sigma` must be injective and defined
    /// on every variable that occurs.
    pub fn substitute_variables(&self, sigma: &BTreeMap<u32, u32>) -> Result<Polynomial> {
        let mut images: Vec<u32> = sigma.values().copied().collect();
        images.sort_unstable();
        if images.windows(2).any(|p| p[0] == p[1]) || images.first() == Some(&0) {
            return Err(Error::Invalid(
                "substitution must be injective into 1..".into(),
            ));
        }
        for m in self.terms.keys() {
            if let Some(&(v, _)) = m.0.iter().find(|(v, _)| !sigma.contains_key(v)) {
                return Err(Error::UnmappedVariable(v));
            }
        }
        Ok(self.relabel(|v| sigma[&v]))
    }

    /// Applies an injective relabeling (caller guarantees injectivity).
    pub fn relabel(&self, f: impl Fn(u32) -> u32) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.relabel(&f), c.clone()))
                .collect(),
        }
    }

    /// Exchanges `x_i` and `x_j`.
    pub fn swap_variables(&self, i: u32, j: u32) -> Polynomial {
        self.relabel(|v| {
            if v == i {
                j
            } else if v == j {
                i
            } else {
                v
            }
        })
    }

    /// Exact quotient by `x_i - x_j` (`i != j`), computed by pairing terms
    /// that agree outside `x_i, x_j`. Fails on a nonzero remainder.
    pub fn divide_by_difference(&self, i: u32, j: u32) -> Result<Polynomial> {
        assert_ne!(i, j);
        // (rest, e_i + e_j) -> coefficients indexed by e_i
        let mut groups: HashMap<(Monomial, u32), BTreeMap<u32, BigInt>> = HashMap::new();
        for (m, c) in &self.terms {
            let (a, b) = (m.exponent(i), m.exponent(j));
            groups
                .entry((m.without_vars(i, j), a + b))
                .or_default()
                .insert(a, c.clone());
        }
        let mut quotient = Polynomial::zero();
        for ((rest, s), coeffs) in groups {
            if s == 0 {
                return Err(Error::InexactDivision);
            }
            // c_a = q_{a-1} - q_a, so q_{a-1} = c_a + q_a from the top down
            let mut q = BigInt::zero();
            for a in (1..=s).rev() {
                q += coeffs.get(&a).cloned().unwrap_or_default();
                let m = rest.mul(&Monomial::from_pairs([(i, a - 1), (j, s - a)]));
                quotient.add_term(m, q.clone());
            }
            if !(q + coeffs.get(&0).cloned().unwrap_or_default()).is_zero() {
                return Err(Error::InexactDivision);
            }
        }
        Ok(quotient)
    }

    /// Value at `x_1 = x_2 = ... = 1`.
    pub fn evaluate_all_ones(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.negative_witness().is_none()
    }

    /// Some term with a negative coefficient, leading terms first.
    pub fn negative_witness(&self) -> Option<(Monomial, BigInt)> {
        self.terms()
            .find(|(_, c)| c.is_negative())
            .map(|(m, c)| (m.clone(), c.clone()))
    }

    pub fn to_json(&self) -> serde_json::Value {
        self.to_json_vars(self.max_var() as usize)
    }

    /// JSON with dense exponent vectors of length `vars` (raised to cover
    /// every occurring variable).
    pub fn to_json_vars(&self, vars: usize) -> serde_json::Value {
        let vars = vars.max(self.max_var() as usize);
        let raw = PolynomialJson {
            vars,
            pairing: None,
            terms: self
                .terms()
                .map(|(m, c)| TermJson {
                    exp: m.to_exponents(vars),
                    coef: c.to_string(),
                })
                .collect(),
        };
        serde_json::to_value(raw).expect("polynomial serializes")
    }

    /// JSON for a polynomial in the `y` family, recording the pairing.
    pub fn to_json_y(&self) -> serde_json::Value {
        let mut v = self.to_json();
        v["pairing"] = Y_PAIRING.into();
        v
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Polynomial> {
        let err = |reason: String| Error::Parse {
            what: "polynomial",
            input: value.to_string(),
            reason,
        };
        let raw: PolynomialJson =
            serde_json::from_value(value.clone()).map_err(|e| err(e.to_string()))?;
        let mut p = Polynomial::zero();
        for t in raw.terms {
            if t.exp.len() != raw.vars {
                return Err(err("exponent vector length differs from vars".into()));
            }
            let c: BigInt = t
                .coef
                .parse()
                .map_err(|_| err(format!("bad coefficient {}", t.coef)))?;
            p.add_term(Monomial::from_exponents(&t.exp), c);
        }
        Ok(p)
    }

    /// Text with `y_{i,j}` names for the y-variable family.
    pub fn display_y(&self) -> String {
        struct Y<'a>(&'a Polynomial);
        impl fmt::Display for Y<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.fmt_with(f, true)
            }
        }
        Y(self).to_string()
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>, y: bool) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms().enumerate() {
            let mag = c.abs();
            match (idx, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}")?;
                }
                m.fmt_with(f, y)?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PolynomialJson {
    vars: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pairing: Option<String>,
    terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: Vec<u32>,
    coef: String,
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, false)
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, false)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut acc: HashMap<Monomial, BigInt> = HashMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                *acc.entry(a.mul(b)).or_default() += x * y;
            }
        }
        Polynomial {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl std::iter::Sum for Polynomial {
    fn sum<I: Iterator<Item = Polynomial>>(iter: I) -> Polynomial {
        iter.fold(Polynomial::zero(), |a, b| &a + &b)
    }
}
