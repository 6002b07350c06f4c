use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::{Claim, RunConfig, Verdict, VerificationReport};
use crate::diagram::{has_northwest_property, rothe, Diagram};
use crate::error::{Error, Result};
use crate::incexc::{
    alternating_sum_with, cw_augmentation, cw_inclusion_exclusion, cw_recursive,
    specialized_alternating_sums, verify_single_step,
};
use crate::perm::{flatten, permutations, subword_from_mask, Permutation, Word};
use crate::poly::{Monomial, Polynomial};
use crate::purple::{characterize_monomials, family_checks};
use crate::schubert::{
    diagram_sum, macdonald_oracle_with_guard, principal_specialization, schubert_shared,
};
use crate::weyl::{chi, ChiOptions};

pub(super) enum Input {
    Perm {
        w: Permutation,
        sampled: bool,
    },
    Row {
        w: Permutation,
        k: u32,
    },
    Sub {
        w: Permutation,
        u: Word,
        sampled: bool,
    },
    Grid {
        d: Diagram,
        k: u32,
        l: u32,
    },
}

impl Input {
    fn describe(&self) -> Value {
        let mut v = match self {
            Input::Perm { w, .. } => json!({ "w": w.to_string() }),
            Input::Row { w, k } => json!({ "w": w.to_string(), "k": k }),
            Input::Sub { w, u, .. } => json!({ "w": w.to_string(), "u": u.to_string() }),
            Input::Grid { d, k, l } => {
                json!({ "D": d.to_string(), "k": k, "l": l, "sampled": true })
            }
        };
        if let Input::Perm { sampled: true, .. } | Input::Sub { sampled: true, .. } = self {
            v["sampled"] = json!(true);
        }
        v
    }
}

fn all_perms(max_n: usize) -> impl Iterator<Item = Permutation> {
    (1..=max_n).flat_map(permutations)
}

pub(super) fn inputs(claim: Claim, config: &RunConfig) -> Vec<Input> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let perms = || all_perms(config.max_n);
    let rows =
        || perms().flat_map(|w| (1..=w.len() as u32).map(move |k| Input::Row { w: w.clone(), k }));
    let mut out: Vec<Input> = match claim {
        Claim::Thm1_0 | Claim::Conj5_3 => rows().collect(),
        Claim::Thm1_1 => perms()
            .flat_map(|w| {
                (0..1u64 << w.len()).map(move |mask| Input::Sub {
                    u: subword_from_mask(&w, mask),
                    w: w.clone(),
                    sampled: false,
                })
            })
            .collect(),
        _ => perms().map(|w| Input::Perm { w, sampled: false }).collect(),
    };
    if config.samples > 0 && claim.samples() {
        let n = config.sample_n;
        match claim {
            Claim::Thm1_1 => {
                let pairs: Vec<(Permutation, u64)> = permutations(n)
                    .filter(|w| w.avoids_1432_1423())
                    .flat_map(|w| (0..1u64 << n).map(move |m| (w.clone(), m)))
                    .collect();
                out.extend(
                    pairs
                        .choose_multiple(&mut rng, config.samples)
                        .map(|(w, m)| Input::Sub {
                            u: subword_from_mask(w, *m),
                            w: w.clone(),
                            sampled: true,
                        }),
                );
            }
            Claim::Thm2_4 => {
                let all: Vec<Permutation> = permutations(n).collect();
                out.extend(
                    all.choose_multiple(&mut rng, config.samples)
                        .map(|w| Input::Perm {
                            w: w.clone(),
                            sampled: true,
                        }),
                );
            }
            Claim::Thm4_1 => out.extend(northwest_samples(&mut rng, n, config.samples)),
            _ => unreachable!("claim does not sample"),
        }
    }
    out
}

/// Distinct northwest diagrams in `[n] x [n]` that are not Rothe diagrams,
/// each with a random row and column to remove.
fn northwest_samples(rng: &mut ChaCha8Rng, n: usize, count: usize) -> Vec<Input> {
    let rothes: std::collections::HashSet<Diagram> = permutations(n).map(|w| rothe(&w)).collect();
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count && attempts < 1000 * count.max(1) {
        attempts += 1;
        let mut d = Diagram::empty(n);
        for i in 1..=n as u32 {
            for j in 1..=n as u32 {
                if rng.gen_bool(0.4) {
                    d.insert(i, j);
                }
            }
        }
        if !has_northwest_property(&d) || rothes.contains(&d) || !seen.insert(d.clone()) {
            continue;
        }
        let (k, l) = (rng.gen_range(1..=n as u32), rng.gen_range(1..=n as u32));
        out.push(Input::Grid { d, k, l });
    }
    out
}

fn mono_json(m: &Monomial, n: usize) -> Value {
    json!(m.to_exponents(n))
}

fn negative_json(p: &Polynomial, n: usize) -> Option<Value> {
    p.negative_witness()
        .map(|(m, c)| json!({ "monomial": mono_json(&m, n), "coefficient": c.to_string() }))
}

fn mismatch_json(a: &Polynomial, b: &Polynomial, n: usize) -> Option<Value> {
    let diff = a - b;
    let first = diff.monomials().next().cloned();
    first.map(|m| {
        json!({
            "monomial": mono_json(&m, n),
            "left": a.coefficient(&m).to_string(),
            "right": b.coefficient(&m).to_string(),
        })
    })
}

fn verdict_of(witness: Option<Value>) -> (Verdict, Option<Value>) {
    match witness {
        None => (Verdict::Holds, None),
        Some(w) => (Verdict::Fails, Some(w)),
    }
}

fn budget(e: &Error) -> Option<Value> {
    match e {
        Error::BudgetExceeded { count, budget } => {
            Some(json!({ "count": count, "budget": budget }))
        }
        Error::LengthGuardExceeded { length, guard } => {
            Some(json!({ "length": length, "guard": guard }))
        }
        _ => None,
    }
}

pub(super) fn check(claim: Claim, input: &Input, config: &RunConfig) -> Result<VerificationReport> {
    let (verdict, witness) = match evaluate(claim, input, config) {
        Ok(out) => out,
        Err(e) => match budget(&e) {
            Some(w) => (Verdict::BudgetExceeded, Some(w)),
            None => return Err(e),
        },
    };
    Ok(VerificationReport::new(
        claim,
        input.describe(),
        verdict,
        witness,
    ))
}

fn evaluate(claim: Claim, input: &Input, config: &RunConfig) -> Result<(Verdict, Option<Value>)> {
    let chi_opts = ChiOptions {
        budget: config.budget_dominated,
        modular_prepass: false,
    };
    Ok(match (claim, input) {
        (Claim::Thm1_0, Input::Row { w, k }) => {
            let step = verify_single_step(w, *k)?;
            verdict_of(negative_json(&step.difference, w.len()))
        }
        (Claim::Thm1_1, Input::Sub { w, u, .. }) => {
            let sum = alternating_sum_with(w, u, false)?.sum;
            let negative = negative_json(&sum, w.len());
            if w.avoids_1432_1423() {
                verdict_of(negative)
            } else {
                (Verdict::OutsideScope, negative)
            }
        }
        (Claim::Thm1_2, Input::Perm { w, .. }) => {
            if !w.avoids_1432_1423() {
                (Verdict::OutsideScope, None)
            } else {
                let aug = BigInt::from(cw_augmentation(w)?);
                let ie = cw_inclusion_exclusion(w);
                verdict_of((aug != ie).then(|| {
                    json!({ "augmentation": aug.to_string(), "inclusion_exclusion": ie.to_string() })
                }))
            }
        }
        (Claim::Thm2_4, Input::Perm { w, .. }) => {
            let c = chi(&rothe(w), &chi_opts)?;
            verdict_of(mismatch_json(&c, &*schubert_shared(w)?, w.len()))
        }
        (Claim::Thm2_7, Input::Perm { w, .. }) => {
            let s = schubert_shared(w)?;
            let counted = diagram_sum(w);
            let mismatch = mismatch_json(&counted, &s, w.len());
            match (w.avoids_1432_1423(), mismatch) {
                (true, m) => verdict_of(m),
                (false, Some(_)) => (Verdict::Holds, None),
                (false, None) => (
                    Verdict::Fails,
                    Some(
                        json!({ "reason": "diagram sum equals the Schubert polynomial for a pattern-containing permutation" }),
                    ),
                ),
            }
        }
        (Claim::Thm4_1, Input::Perm { w, .. }) => {
            let d = rothe(w);
            let full = chi(&d, &chi_opts)?;
            let mut bad = None;
            'rows: for k in 1..=w.len() as u32 {
                for c in family_checks(&full, &d, k, w.at(k as usize), &chi_opts)? {
                    if let Some(neg) = negative_json(&c.difference, w.len()) {
                        bad = Some(
                            json!({ "k": k, "member": c.member.to_string(), "negative": neg }),
                        );
                        break 'rows;
                    }
                }
            }
            verdict_of(bad)
        }
        (Claim::Thm4_1, Input::Grid { d, k, l }) => {
            let full = chi(d, &chi_opts)?;
            let bad = family_checks(&full, d, *k, *l, &chi_opts)?
                .into_iter()
                .find_map(|c| {
                    negative_json(&c.difference, d.n())
                        .map(|neg| json!({ "member": c.member.to_string(), "negative": neg }))
                });
            verdict_of(bad)
        }
        (Claim::Conj5_1, Input::Perm { w, .. }) => {
            let sums = specialized_alternating_sums(w);
            let bad = sums.iter().enumerate().find(|(_, v)| v.is_negative()).map(|(mask, v)| {
                json!({ "u": subword_from_mask(w, mask as u64).to_string(), "value": v.to_string() })
            });
            verdict_of(bad)
        }
        (Claim::Conj5_3, Input::Row { w, k }) => {
            let c = characterize_monomials(w, *k)?;
            let n = w.len();
            let list = |s: &std::collections::BTreeSet<Monomial>| {
                s.iter().rev().map(|m| mono_json(m, n)).collect::<Vec<_>>()
            };
            let differs = !c.extra.is_empty() || !c.purple_failing.is_empty();
            let witness = differs.then(
                || json!({ "extra": list(&c.extra), "purple_failing": list(&c.purple_failing) }),
            );
            if w.avoids_1432_1423() {
                verdict_of(witness)
            } else {
                (Verdict::OutsideScope, witness)
            }
        }
        (Claim::Macdonald, Input::Perm { w, .. }) => {
            let oracle = macdonald_oracle_with_guard(w, config.reduced_word_cap)?;
            let ps = principal_specialization(w);
            verdict_of((oracle != ps).then(|| {
                json!({ "reduced_words": oracle.to_string(), "divided_differences": ps.to_string() })
            }))
        }
        (Claim::CwIdentity, Input::Perm { w, .. }) => {
            let n = w.len();
            let total: BigInt = (0..1u64 << n)
                .map(|mask| cw_inclusion_exclusion(&flatten(&subword_from_mask(w, mask))))
                .sum();
            let ps = principal_specialization(w);
            let ie = cw_inclusion_exclusion(w);
            let rec = cw_recursive(w);
            let witness = if total != ps {
                Some(json!({ "sum_of_c": total.to_string(), "specialization": ps.to_string() }))
            } else if n > 0 && w.at(n) == n as u32 && !ie.is_zero() {
                Some(json!({ "fixed_last_letter_c": ie.to_string() }))
            } else if ie != rec {
                Some(json!({ "inclusion_exclusion": ie.to_string(), "recursive": rec.to_string() }))
            } else {
                None
            };
            verdict_of(witness)
        }
        _ => unreachable!("inputs are generated per claim"),
    })
}

/// One row of the `c_w` table.
#[derive(Clone, Debug, PartialEq)]
pub struct CwRow {
    pub w: Permutation,
    pub length: usize,
    pub cw: BigInt,
    pub recursive: BigInt,
    /// Present for avoiders only.
    pub augmentation: Option<BigInt>,
}

impl CwRow {
    pub fn methods_agree(&self) -> bool {
        self.cw == self.recursive && self.augmentation.as_ref().is_none_or(|a| *a == self.cw)
    }
}

/// `c_w` for every `w` in `S_1, ..., S_max_n`, in enumeration order.
pub fn cw_table(max_n: usize, jobs: usize) -> Result<Vec<CwRow>> {
    let perms: Vec<Permutation> = all_perms(max_n).collect();
    super::with_pool(jobs, || {
        perms
            .par_iter()
            .map(|w| {
                let augmentation = w
                    .avoids_1432_1423()
                    .then(|| cw_augmentation(w).map(BigInt::from))
                    .transpose()?;
                Ok(CwRow {
                    w: w.clone(),
                    length: w.inversions(),
                    cw: cw_inclusion_exclusion(w),
                    recursive: cw_recursive(w),
                    augmentation,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?
}
