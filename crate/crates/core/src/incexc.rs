//! Alternating sums over the subword interval `[u, w]`, and the numbers
//! `c_w` computed three ways.

use std::collections::{BTreeMap, HashMap};
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::json;

use crate::diagram::{
    dominates, enumerate_dominated, hat_v, restrict_remove, rothe, row_monomial, Diagram,
};
use crate::error::{Error, Result};
use crate::perm::{
    flatten, not_subword, position_mask, substitution_indices, subword_from_mask, Permutation, Word,
};
use crate::poly::{Monomial, Polynomial};
use crate::schubert::{principal_specialization, schubert_shared};

fn require_avoider(w: &Permutation) -> Result<()> {
    if w.avoids_1432_1423() {
        Ok(())
    } else {
        Err(Error::PatternViolation(w.to_string()))
    }
}

fn sign(w: &Permutation, v: &Word) -> i32 {
    if (w.len() - v.len()).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `M_{w,v}`: one `x_i` per box of `D(w)` outside `D(w)^_v`.
pub fn m_monomial(w: &Permutation, v: &Word) -> Result<Monomial> {
    let d = rothe(w);
    let kept = hat_v(&d, w, v)?;
    Ok(row_monomial(&d.difference(&kept)))
}

/// `S_{perm(v)}` evaluated at `(x_{w^{-1}(v(1))}, ..., x_{w^{-1}(v(|v|))})`.
pub fn substituted_schubert(w: &Permutation, v: &Word) -> Result<Polynomial> {
    let rows = substitution_indices(w, v)?;
    let sigma: BTreeMap<u32, u32> = rows
        .iter()
        .enumerate()
        .map(|(i, &r)| (i as u32 + 1, r))
        .collect();
    schubert_shared(&flatten(v))?.substitute_variables(&sigma)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub v: Word,
    pub sign: i32,
    pub m: Monomial,
    pub schubert: Polynomial,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlternatingSumResult {
    pub w: Permutation,
    pub u: Word,
    pub sum: Polynomial,
    /// Empty in sum-only mode.
    pub terms: Vec<Term>,
}

impl AlternatingSumResult {
    pub fn to_json(&self) -> serde_json::Value {
        let n = self.w.len();
        let mut out = json!({
            "w": self.w.to_string(),
            "u": self.u.to_string(),
            "sum": self.sum.to_json_vars(n),
        });
        if !self.terms.is_empty() {
            out["terms"] = self
                .terms
                .iter()
                .map(|t| {
                    json!({
                        "v": t.v.to_string(),
                        "sign": t.sign,
                        "M": t.m.to_exponents(n),
                        "schubert": t.schubert.to_json_vars(n),
                    })
                })
                .collect();
        }
        out
    }
}

/// `sum_{u <= v <= w} (-1)^{|w|-|v|} M_{w,v} S_{perm(v)}(x_{w^{-1}(v)})`.
pub fn alternating_sum(w: &Permutation, u: &Word) -> Result<AlternatingSumResult> {
    alternating_sum_with(w, u, true)
}

/// As [`alternating_sum`]; with `keep_terms` false only the total is kept.
pub fn alternating_sum_with(
    w: &Permutation,
    u: &Word,
    keep_terms: bool,
) -> Result<AlternatingSumResult> {
    let base = position_mask(u, w).ok_or_else(|| not_subword(u, w))?;
    let d = rothe(w);
    let mut sum = Polynomial::zero();
    let mut terms = Vec::new();
    for mask in crate::perm::supersets(base, w.len()) {
        let v = subword_from_mask(w, mask);
        let m = row_monomial(&d.difference(&hat_v(&d, w, &v)?));
        let schubert = substituted_schubert(w, &v)?;
        let s = sign(w, &v);
        let term = schubert.mul_monomial(&m);
        sum = if s > 0 { &sum + &term } else { &sum - &term };
        if keep_terms {
            terms.push(Term {
                v,
                sign: s,
                m,
                schubert,
            });
        }
    }
    Ok(AlternatingSumResult {
        w: w.clone(),
        u: u.clone(),
        sum,
        terms,
    })
}

/// `#{C <= D(w)^_v : x^C = m, every box of C in a row of K}`, with
/// `K = w^{-1}(v)`.
pub fn restricted_diagram_count(w: &Permutation, v: &Word, m: &Monomial) -> Result<u64> {
    require_avoider(w)?;
    let rows: crate::diagram::RowSet = substitution_indices(w, v)?.into_iter().collect();
    let dv = hat_v(&rothe(w), w, v)?;
    Ok(enumerate_dominated(&dv)
        .filter(|c| c.rows().is_subset(rows) && row_monomial(c) == *m)
        .count() as u64)
}

/// `|B_w \ U_{v in I} B_v|` for the codimension-one words `v` of `[u, w]`,
/// where `B_v = {C <= D(w) : x^C = m, C \ C^_v = D(w) \ D(w)^_v}`.
pub fn bv_count(w: &Permutation, u: &Word, m: &Monomial) -> Result<u64> {
    require_avoider(w)?;
    let base = position_mask(u, w).ok_or_else(|| not_subword(u, w))?;
    let n = w.len();
    let full = (1u64 << n) - 1;
    let d = rothe(w);
    let mut faces = Vec::new();
    for p in 0..n {
        if base >> p & 1 == 0 {
            let v = subword_from_mask(w, full & !(1 << p));
            let outside = d.difference(&hat_v(&d, w, &v)?);
            faces.push((v, outside));
        }
    }
    let mut count = 0;
    for c in enumerate_dominated(&d).filter(|c| row_monomial(c) == *m) {
        let mut covered = false;
        for (v, outside) in &faces {
            if c.difference(&hat_v(&c, w, v)?) == *outside {
                covered = true;
                break;
            }
        }
        if !covered {
            count += 1;
        }
    }
    Ok(count)
}

/// `sum_{u <= v <= w} (-1)^{|w|-|v|} S_{perm(v)}(1)`.
pub fn specialized_alternating_sum(w: &Permutation, u: &Word) -> Result<BigInt> {
    let base = position_mask(u, w).ok_or_else(|| not_subword(u, w))?;
    let mut total = BigInt::zero();
    for mask in crate::perm::supersets(base, w.len()) {
        let v = subword_from_mask(w, mask);
        let ps = principal_specialization(&flatten(&v));
        if sign(w, &v) > 0 {
            total += ps;
        } else {
            total -= ps;
        }
    }
    Ok(total)
}

/// [`specialized_alternating_sum`] for every `u <= w` at once, indexed by
/// the position mask of `u`.
pub fn specialized_alternating_sums(w: &Permutation) -> Vec<BigInt> {
    let n = w.len();
    let mut f: Vec<BigInt> = (0..1u64 << n)
        .map(|mask| {
            let v = subword_from_mask(w, mask);
            let ps = principal_specialization(&flatten(&v));
            if (n - v.len()).is_multiple_of(2) {
                ps
            } else {
                -ps
            }
        })
        .collect();
    // superset-sum transform
    for p in 0..n {
        for mask in 0..f.len() {
            if mask >> p & 1 == 0 {
                let above = f[mask | 1 << p].clone();
                f[mask] += above;
            }
        }
    }
    f
}

/// `c_w = sum_{v <= w} (-1)^{|w|-|v|} S_{perm(v)}(1)`.
pub fn cw_inclusion_exclusion(w: &Permutation) -> BigInt {
    specialized_alternating_sum(w, &Word::empty()).expect("() is a subword of every word")
}

fn cw_memo() -> &'static RwLock<HashMap<Permutation, BigInt>> {
    static MEMO: OnceLock<RwLock<HashMap<Permutation, BigInt>>> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// `c_w = S_w(1) - sum_{|u| < |w|} c_u p_u(w)` with `c_() = 1`.
///
/// Memoized on the exact permutation: `c` is not stable under appending
/// fixed points (`c_() = 1` but `c_1 = 0`).
pub fn cw_recursive(w: &Permutation) -> BigInt {
    if w.is_empty() {
        return BigInt::one();
    }
    if let Some(c) = cw_memo().read().unwrap().get(w) {
        return c.clone();
    }
    let n = w.len();
    let mut patterns: HashMap<Permutation, u64> = HashMap::new();
    for mask in 0..(1u64 << n) - 1 {
        *patterns
            .entry(flatten(&subword_from_mask(w, mask)))
            .or_default() += 1;
    }
    let mut value = principal_specialization(w);
    for (u, count) in patterns {
        value -= cw_recursive(&u) * count;
    }
    cw_memo()
        .write()
        .unwrap()
        .entry(w.clone())
        .or_insert(value)
        .clone()
}

/// Seeds the `c_w` memo. Existing entries win.
pub fn preload_cw<I: IntoIterator<Item = (Permutation, BigInt)>>(items: I) {
    let mut memo = cw_memo().write().unwrap();
    for (w, c) in items {
        memo.entry(w).or_insert(c);
    }
}

/// Current contents of the `c_w` memo, sorted by permutation.
pub fn cw_snapshot() -> Vec<(Permutation, BigInt)> {
    let mut out: Vec<_> = cw_memo()
        .read()
        .unwrap()
        .iter()
        .map(|(w, c)| (w.clone(), c.clone()))
        .collect();
    out.sort();
    out
}

/// Each `C <= D(w)` with the rows `k` at which `C` is an augmentation, i.e.
/// `C = C^ u (boxes of D(w) in row k or column w_k)` for some
/// `C^ <= D(w)^` avoiding that row and column.
pub fn augmentation_witnesses(w: &Permutation) -> Vec<(Diagram, Vec<u32>)> {
    let d = rothe(w);
    let n = w.len() as u32;
    let removed: Vec<(u32, Diagram, Diagram)> = (1..=n)
        .map(|k| {
            let l = w.at(k as usize);
            (k, d.row_column_boxes(k, l), restrict_remove(&d, k, l))
        })
        .collect();
    enumerate_dominated(&d)
        .map(|c| {
            let ks = removed
                .iter()
                .filter(|(k, boxes, dhat)| {
                    let l = w.at(*k as usize);
                    c.row_column_boxes(*k, l) == *boxes
                        && dominates(&restrict_remove(&c, *k, l), dhat)
                })
                .map(|(k, _, _)| *k)
                .collect();
            (c, ks)
        })
        .collect()
}

/// Number of `C <= D(w)` that are not augmentations for any `k`.
pub fn cw_augmentation(w: &Permutation) -> Result<u64> {
    require_avoider(w)?;
    Ok(augmentation_witnesses(w)
        .iter()
        .filter(|(_, ks)| ks.is_empty())
        .count() as u64)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SingleStep {
    pub pattern: Permutation,
    pub m: Monomial,
    pub difference: Polynomial,
}

impl SingleStep {
    pub fn holds(&self) -> bool {
        self.difference.is_nonnegative()
    }
}

/// `S_sigma - M_{sigma,pi} S_pi(x_1, ..., x^_k, ..., x_n)`, where `pi`
/// removes row `k` and column `sigma_k`.
pub fn verify_single_step(sigma: &Permutation, k: u32) -> Result<SingleStep> {
    if k == 0 || k as usize > sigma.len() {
        return Err(Error::Invalid(format!(
            "row {k} outside 1..={}",
            sigma.len()
        )));
    }
    let l = sigma.at(k as usize);
    let m = row_monomial(&rothe(sigma).row_column_boxes(k, l));
    let pattern = flatten(&sigma.word().without(l));
    let lifted = schubert_shared(&pattern)?.relabel(|i| if i >= k { i + 1 } else { i });
    let difference = &*schubert_shared(sigma)? - &lifted.mul_monomial(&m);
    Ok(SingleStep {
        pattern,
        m,
        difference,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{pattern_count, permutations, subwords_between};
    use crate::schubert::schubert_divdiff;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn word(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn x(i: u32) -> Polynomial {
        Polynomial::var(i)
    }

    fn mono(exps: &[u32]) -> Monomial {
        Monomial::from_exponents(exps)
    }

    #[test]
    fn m_monomial_examples() {
        assert_eq!(
            m_monomial(&p("2143"), &word("143")).unwrap(),
            Monomial::var(1)
        );
        assert_eq!(
            m_monomial(&p("1342"), &word("142")).unwrap(),
            Monomial::var(2)
        );
        let w = p("15243");
        assert_eq!(m_monomial(&w, &w.word()).unwrap(), Monomial::one());
        assert!(m_monomial(&p("1342"), &word("24")).is_err());
    }

    #[test]
    fn substituted_schubert_examples() {
        assert_eq!(substituted_schubert(&p("1342"), &word("42")).unwrap(), x(3));
        assert_eq!(
            substituted_schubert(&p("1342"), &Word::empty()).unwrap(),
            Polynomial::one()
        );
        assert_eq!(
            substituted_schubert(&p("2143"), &word("243")).unwrap(),
            &x(1) + &x(3)
        );
    }

    #[test]
    fn alternating_sum_examples() {
        let r = alternating_sum(&p("2143"), &word("43")).unwrap();
        assert!(r.sum.is_zero());
        assert_eq!(r.terms.len(), 4);
        let r = alternating_sum(&p("1342"), &word("42")).unwrap();
        assert_eq!(r.sum, &x(1) * &x(3));
        let w = p("1342");
        let r = alternating_sum(&w, &w.word()).unwrap();
        assert_eq!(r.sum, schubert_divdiff(&w).unwrap());
        assert_eq!(r.terms[0].sign, 1);
        assert!(alternating_sum_with(&p("2143"), &word("43"), false)
            .unwrap()
            .terms
            .is_empty());
        assert!(alternating_sum(&p("1342"), &word("24")).is_err());
    }

    #[test]
    fn alternating_sum_json() {
        let r = alternating_sum(&p("1342"), &word("342")).unwrap();
        let j = r.to_json();
        assert_eq!(j["w"], "1342");
        assert_eq!(j["u"], "342");
        assert_eq!(j["terms"][0]["v"], "342");
        assert_eq!(j["terms"][0]["sign"], -1);
        assert_eq!(Polynomial::from_json(&j["sum"]).unwrap(), r.sum);
    }

    #[test]
    fn restricted_count_examples() {
        assert_eq!(
            restricted_diagram_count(&p("2143"), &word("243"), &Monomial::var(1)).unwrap(),
            1
        );
        assert_eq!(
            restricted_diagram_count(&p("2143"), &word("243"), &Monomial::var(2)).unwrap(),
            0
        );
        let w = p("1342");
        assert_eq!(
            restricted_diagram_count(&w, &w.word(), &mono(&[0, 1, 1])).unwrap(),
            1
        );
        assert!(restricted_diagram_count(&p("1432"), &word("1"), &Monomial::one()).is_err());
    }

    #[test]
    fn bv_count_examples() {
        assert_eq!(
            bv_count(&p("1342"), &word("42"), &mono(&[1, 0, 1])).unwrap(),
            1
        );
        for m in [mono(&[2, 0, 0]), mono(&[1, 1]), mono(&[1, 0, 1])] {
            assert_eq!(bv_count(&p("2143"), &word("43"), &m).unwrap(), 0);
        }
        let w = p("1342");
        assert_eq!(bv_count(&w, &w.word(), &mono(&[1, 1])).unwrap(), 1);
    }

    #[test]
    fn cw_examples() {
        for (w, c) in [
            ("1342", 0),
            ("12453", 1),
            ("132", 1),
            ("21", 0),
            ("1234", 0),
        ] {
            let w = p(w);
            assert_eq!(cw_inclusion_exclusion(&w), c.into(), "{w}");
            assert_eq!(cw_recursive(&w), c.into(), "{w}");
        }
        assert_eq!(cw_augmentation(&p("1342")).unwrap(), 0);
        assert_eq!(cw_augmentation(&p("12453")).unwrap(), 1);
        assert_eq!(cw_augmentation(&p("1234")).unwrap(), 0);
        assert!(cw_augmentation(&p("1432")).is_err());
        assert_eq!(cw_recursive(&Permutation::identity(0)), BigInt::one());
        assert_eq!(
            cw_inclusion_exclusion(&Permutation::identity(0)),
            BigInt::one()
        );
    }

    #[test]
    fn augmentation_witnesses_for_1342() {
        // C1 = {(2,2),(3,2)} at k = 3; the other two at some k as well
        let got = augmentation_witnesses(&p("1342"));
        assert_eq!(got.len(), 3);
        let c1 = Diagram::from_boxes(4, [(2, 2), (3, 2)]).unwrap();
        let (_, ks) = got.iter().find(|(c, _)| *c == c1).unwrap();
        assert!(ks.contains(&3));
        assert!(got.iter().all(|(_, ks)| !ks.is_empty()));
    }

    #[test]
    fn single_step_examples() {
        assert!(verify_single_step(&p("2143"), 1).unwrap().holds());
        for k in 1..=4 {
            let s = verify_single_step(&Permutation::identity(4), k).unwrap();
            assert!(s.difference.is_zero());
        }
        let s = verify_single_step(&p("1432"), 3).unwrap();
        assert!(s.holds());
        assert_eq!(s.pattern, p("132"));
        assert!(verify_single_step(&p("21"), 3).is_err());
    }

    #[test]
    fn single_step_through_s5() {
        for n in 1..=5 {
            for w in permutations(n) {
                for k in 1..=n as u32 {
                    let s = verify_single_step(&w, k).unwrap();
                    assert!(
                        s.holds(),
                        "{w} k={k}: {:?}",
                        s.difference.negative_witness()
                    );
                }
            }
        }
    }

    #[test]
    fn nonnegative_and_homogeneous_for_avoiders_in_s5() {
        for n in 1..=5 {
            for w in permutations(n).filter(|w| w.avoids_1432_1423()) {
                let len = w.inversions() as u32;
                for u in subwords_between(&Word::empty(), &w).unwrap() {
                    let r = alternating_sum(&w, &u).unwrap();
                    assert!(r.sum.is_nonnegative(), "{w} {u}: {}", r.sum);
                    for t in &r.terms {
                        let term = t.schubert.mul_monomial(&t.m);
                        assert!(term.is_homogeneous());
                        assert_eq!(term.degree(), Some(len), "{w} {}", t.v);
                        let kept = hat_v(&rothe(&w), &w, &t.v).unwrap().len() as u32;
                        assert_eq!(t.m.degree(), len - kept);
                    }
                    let total: Polynomial = r
                        .terms
                        .iter()
                        .map(|t| t.schubert.mul_monomial(&t.m).scale(&t.sign.into()))
                        .sum();
                    assert_eq!(total, r.sum);
                }
            }
        }
    }

    #[test]
    fn nonnegative_on_sampled_avoiders_in_s6() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let avoiders: Vec<Permutation> = permutations(6).filter(|w| w.avoids_1432_1423()).collect();
        for _ in 0..40 {
            let w = avoiders.choose(&mut rng).unwrap();
            let us = subwords_between(&Word::empty(), w).unwrap();
            let u = us.choose(&mut rng).unwrap();
            let r = alternating_sum_with(w, u, false).unwrap();
            assert!(r.sum.is_nonnegative(), "{w} {u}");
        }
    }

    #[test]
    fn fails_outside_scope_for_1432() {
        let w = p("1432");
        let bad = subwords_between(&Word::empty(), &w)
            .unwrap()
            .into_iter()
            .any(|u| !alternating_sum(&w, &u).unwrap().sum.is_nonnegative());
        assert!(bad);
    }

    #[test]
    fn three_routes_to_cw_agree_through_s6() {
        for n in 0..=6 {
            for w in permutations(n) {
                let ie = cw_inclusion_exclusion(&w);
                assert_eq!(cw_recursive(&w), ie, "{w}");
                if n > 0 && w.at(n) == n as u32 {
                    assert!(ie.is_zero(), "{w}");
                }
                if w.avoids_1432_1423() {
                    assert_eq!(BigInt::from(cw_augmentation(&w).unwrap()), ie, "{w}");
                }
                // sum_{v <= w} c_{perm(v)} = S_w(1)
                let total: BigInt = subwords_between(&Word::empty(), &w)
                    .unwrap()
                    .iter()
                    .map(|v| cw_recursive(&flatten(v)))
                    .sum();
                assert_eq!(total, principal_specialization(&w));
            }
        }
    }

    #[test]
    fn recursion_matches_pattern_counts() {
        for w in permutations(5) {
            let mut rhs = BigInt::zero();
            for k in 0..5 {
                for u in permutations(k) {
                    rhs += cw_recursive(&u) * pattern_count(&u, &w);
                }
            }
            assert_eq!(cw_recursive(&w), principal_specialization(&w) - rhs);
        }
    }

    #[test]
    fn batch_sums_match_single_sums() {
        for w in permutations(4) {
            let all = specialized_alternating_sums(&w);
            for (mask, value) in all.iter().enumerate() {
                let u = subword_from_mask(&w, mask as u64);
                assert_eq!(
                    *value,
                    specialized_alternating_sum(&w, &u).unwrap(),
                    "{w} {u}"
                );
            }
        }
    }

    #[test]
    fn bv_count_matches_sum_in_s5() {
        for n in 1..=5 {
            for w in permutations(n).filter(|w| w.avoids_1432_1423()) {
                let support: Vec<Monomial> =
                    schubert_divdiff(&w).unwrap().monomials().cloned().collect();
                for u in subwords_between(&Word::empty(), &w).unwrap() {
                    let sum = alternating_sum_with(&w, &u, false).unwrap().sum;
                    let mut ms = support.clone();
                    ms.extend(sum.monomials().cloned());
                    ms.sort();
                    ms.dedup();
                    for m in &ms {
                        let count = bv_count(&w, &u, m).unwrap();
                        assert_eq!(BigInt::from(count), sum.coefficient(m), "{w} {u} {m}");
                    }
                }
            }
        }
    }

    #[test]
    fn restricted_count_matches_substitution_in_s5() {
        for n in 1..=5 {
            for w in permutations(n).filter(|w| w.avoids_1432_1423()) {
                let d = rothe(&w);
                for v in subwords_between(&Word::empty(), &w).unwrap() {
                    let s = substituted_schubert(&w, &v).unwrap();
                    let mut ms: Vec<Monomial> = s.monomials().cloned().collect();
                    let dv = hat_v(&d, &w, &v).unwrap();
                    ms.extend(enumerate_dominated(&dv).map(|c| row_monomial(&c)));
                    ms.sort();
                    ms.dedup();
                    for m in &ms {
                        let count = restricted_diagram_count(&w, &v, m).unwrap();
                        assert_eq!(BigInt::from(count), s.coefficient(m), "{w} {v} {m}");
                    }
                }
            }
        }
    }
}
