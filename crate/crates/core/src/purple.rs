//! Purple boxes and the family of factor diagrams under a removed row and
//! column.

use std::collections::BTreeSet;

use serde_json::json;

use crate::diagram::{
    column_dominates, dominated_column_sets, enumerate_dominated, restrict_remove, rothe,
    row_monomial, Diagram,
};
use crate::error::{Error, Result};
use crate::perm::{flatten, Permutation};
use crate::poly::{Monomial, Polynomial};
use crate::schubert::schubert_shared;
use crate::weyl::{chi, ChiOptions};

/// Boxes reachable by some `C <= D` but by no `C^ <= D^` (hats remove row
/// `k` and column `l`). Decided one column at a time.
pub fn purple_boxes(d: &Diagram, k: u32, l: u32) -> Diagram {
    let n = d.n();
    let mut out = Diagram::empty(n);
    for (j, &col) in d.columns().iter().enumerate() {
        let j = j as u32 + 1;
        let Some(top) = col.max() else { continue };
        // every i <= max D_j lies in some S <= D_j
        for i in 1..=top {
            let purple = if j == l || i == k {
                true
            } else {
                let hat = col.without(k);
                !dominated_column_sets(col).into_iter().any(|s| {
                    s.contains(i)
                        && s.contains(k) == col.contains(k)
                        && column_dominates(s.without(k), hat)
                })
            };
            if purple {
                out.insert(i, j);
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct PurpleFamily {
    pub d: Diagram,
    pub k: u32,
    pub l: u32,
    pub boxes: Diagram,
    /// Seed first, then the rest in enumeration order.
    pub members: Vec<Diagram>,
    pub monomials: BTreeSet<Monomial>,
}

impl PurpleFamily {
    pub fn seed(&self) -> &Diagram {
        &self.members[0]
    }

    pub fn contains(&self, k: &Diagram) -> bool {
        self.members.contains(k)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let n = self.d.n();
        json!({
            "D": self.d.to_json(),
            "k": self.k,
            "l": self.l,
            "purple_boxes": self.boxes.boxes(),
            "members": self.members.iter().map(Diagram::to_json).collect::<Vec<_>>(),
            "monomials": self.monomials.iter().rev().map(|m| m.to_exponents(n)).collect::<Vec<_>>(),
        })
    }
}

/// The least family containing the seed `D \ D^` and closed under passing
/// to dominated diagrams made of purple boxes.
pub fn purple_family(d: &Diagram, k: u32, l: u32) -> PurpleFamily {
    let boxes = purple_boxes(d, k, l);
    let seed = d.difference(&restrict_remove(d, k, l));
    // dominance is transitive, so one step below the seed is already closed
    let mut members = vec![seed.clone()];
    members.extend(enumerate_dominated(&seed).filter(|c| *c != seed && c.is_subset(&boxes)));
    let monomials = members.iter().map(row_monomial).collect();
    PurpleFamily {
        d: d.clone(),
        k,
        l,
        boxes,
        members,
        monomials,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenCheck {
    pub member: Diagram,
    pub difference: Polynomial,
}

impl GenCheck {
    pub fn holds(&self) -> bool {
        self.difference.is_nonnegative()
    }
}

/// `chi_D - x^K chi_{D^}(x_k = 0)` for one member `K`.
pub fn verify_theorem_gen(
    d: &Diagram,
    k: u32,
    l: u32,
    member: &Diagram,
    options: &ChiOptions,
) -> Result<GenCheck> {
    if !purple_family(d, k, l).contains(member) {
        return Err(Error::NotInFamily);
    }
    let (full, reduced) = characters(d, k, l, options)?;
    Ok(gen_check(&full, &reduced, member))
}

/// [`verify_theorem_gen`] for every member, sharing the two characters.
pub fn verify_theorem_gen_family(
    d: &Diagram,
    k: u32,
    l: u32,
    options: &ChiOptions,
) -> Result<Vec<GenCheck>> {
    family_checks(&chi(d, options)?, d, k, l, options)
}

/// As [`verify_theorem_gen_family`] with `chi_D` already known.
pub fn family_checks(
    full: &Polynomial,
    d: &Diagram,
    k: u32,
    l: u32,
    options: &ChiOptions,
) -> Result<Vec<GenCheck>> {
    let family = purple_family(d, k, l);
    let reduced = chi(&restrict_remove(d, k, l), options)?.substitute_zero(k);
    Ok(family
        .members
        .iter()
        .map(|m| gen_check(full, &reduced, m))
        .collect())
}

fn characters(
    d: &Diagram,
    k: u32,
    l: u32,
    options: &ChiOptions,
) -> Result<(Polynomial, Polynomial)> {
    let full = chi(d, options)?;
    let reduced = chi(&restrict_remove(d, k, l), options)?.substitute_zero(k);
    Ok((full, reduced))
}

fn gen_check(full: &Polynomial, reduced: &Polynomial, member: &Diagram) -> GenCheck {
    GenCheck {
        member: member.clone(),
        difference: full - &reduced.mul_monomial(&row_monomial(member)),
    }
}

/// The monomials `M` with `S_sigma - M S_pi(x_1, ..., x^_k, ..., x_n) >= 0`,
/// split by whether the purple family produces them.
#[derive(Clone, Debug, PartialEq)]
pub struct Characterization {
    pub sigma: Permutation,
    pub k: u32,
    pub pattern: Permutation,
    pub working: BTreeSet<Monomial>,
    pub from_purple: BTreeSet<Monomial>,
    pub extra: BTreeSet<Monomial>,
    /// Purple monomials that fail; empty whenever the generalized single-step
    /// theorem holds.
    pub purple_failing: BTreeSet<Monomial>,
}

impl Characterization {
    pub fn to_json(&self) -> serde_json::Value {
        let n = self.sigma.len();
        let list = |s: &BTreeSet<Monomial>| {
            s.iter()
                .rev()
                .map(|m| m.to_exponents(n))
                .collect::<Vec<_>>()
        };
        json!({
            "sigma": self.sigma.to_string(),
            "k": self.k,
            "pattern": self.pattern.to_string(),
            "working": list(&self.working),
            "from_purple": list(&self.from_purple),
            "extra": list(&self.extra),
            "purple_failing": list(&self.purple_failing),
        })
    }
}

/// `S_pi(x_1, ..., x^_k, ..., x_n)` for the pattern `pi` left after removing
/// row `k` and column `sigma_k`.
pub fn lifted_pattern(sigma: &Permutation, k: u32) -> Result<(Permutation, Polynomial)> {
    if k == 0 || k as usize > sigma.len() {
        return Err(Error::Invalid(format!(
            "row {k} outside 1..={}",
            sigma.len()
        )));
    }
    let pattern = flatten(&sigma.word().without(sigma.at(k as usize)));
    let lifted = schubert_shared(&pattern)?.relabel(|i| if i >= k { i + 1 } else { i });
    Ok((pattern, lifted))
}

pub fn is_working(s_sigma: &Polynomial, lifted: &Polynomial, m: &Monomial) -> bool {
    (s_sigma - &lifted.mul_monomial(m)).is_nonnegative()
}

/// Every working `M` divides `m / m_0` for a fixed monomial `m_0` of the
/// lifted pattern polynomial and some monomial `m` of `S_sigma`, so only
/// those quotients are tried.
pub fn characterize_monomials(sigma: &Permutation, k: u32) -> Result<Characterization> {
    let (pattern, lifted) = lifted_pattern(sigma, k)?;
    let s_sigma = schubert_shared(sigma)?;
    let anchor = lifted
        .monomials()
        .next()
        .expect("Schubert polynomials are nonzero")
        .clone();
    let working: BTreeSet<Monomial> = s_sigma
        .monomials()
        .filter_map(|m| anchor.quotient_of(m))
        .filter(|m| is_working(&s_sigma, &lifted, m))
        .collect();
    let family = purple_family(&rothe(sigma), k, sigma.at(k as usize));
    let from_purple = working.intersection(&family.monomials).cloned().collect();
    let extra = working.difference(&family.monomials).cloned().collect();
    let purple_failing = family.monomials.difference(&working).cloned().collect();
    Ok(Characterization {
        sigma: sigma.clone(),
        k,
        pattern,
        working,
        from_purple,
        extra,
        purple_failing,
    })
}
