//! Schubert polynomials.
//!
//! Two constructions live here: divided differences applied to the
//! staircase monomial (valid for every permutation) and the sum of `x^C`
//! over diagrams dominated by the Rothe diagram (valid exactly for
//! 1432/1423-avoiders). Principal specializations are memoized, and the
//! reduced-word identity of Macdonald serves as an independent check on them.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::diagram::{enumerate_dominated, rothe, row_monomial};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::poly::{Monomial, Polynomial};

/// Default cap on `l(w)` for reduced-word enumeration.
pub const REDUCED_WORD_GUARD: usize = 12;

/// `∂_i f = (f - s_i f) / (x_i - x_{i+1})`.
pub fn divided_difference(f: &Polynomial, i: u32) -> Result<Polynomial> {
    (f - &f.swap_variables(i, i + 1)).divide_by_difference(i, i + 1)
}

/// `x_1^{n-1} x_2^{n-2} ... x_{n-1}`, the Schubert polynomial of the longest
/// element of `S_n`.
pub fn staircase(n: usize) -> Polynomial {
    let exps: Vec<u32> = (0..n).map(|i| (n - 1 - i) as u32).collect();
    Polynomial::monomial(Monomial::from_exponents(&exps), 1)
}

/// How to pick the next simple transposition when walking up to `w_0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReducedWordStrategy {
    FirstAscent,
    LastAscent,
}

/// Positions `i_1, ..., i_m` with `w s_{i_1} ... s_{i_m} = w_0`, each step
/// increasing length; `i_1 ... i_m` is a reduced word of `w^{-1} w_0`.
pub fn path_to_longest(w: &Permutation, strategy: ReducedWordStrategy) -> Vec<u32> {
    let mut current = w.clone();
    let mut path = Vec::new();
    loop {
        let next = match strategy {
            ReducedWordStrategy::FirstAscent => current.ascents().next(),
            ReducedWordStrategy::LastAscent => current.ascents().last(),
        };
        let Some(i) = next else { break };
        path.push(i as u32);
        current = current.swap_positions(i);
    }
    path
}

/// Divided differences along the path chosen by `strategy`, without any
/// caching.
pub fn schubert_divdiff_along(
    w: &Permutation,
    strategy: ReducedWordStrategy,
) -> Result<Polynomial> {
    let w = w.normalized();
    let path = path_to_longest(&w, strategy);
    let mut p = staircase(w.len());
    for &i in path.iter().rev() {
        p = divided_difference(&p, i)?;
    }
    Ok(p)
}

type Memo<V> = RwLock<HashMap<Permutation, V>>;

fn polynomial_memo() -> &'static Memo<Arc<Polynomial>> {
    static MEMO: OnceLock<Memo<Arc<Polynomial>>> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

fn specialization_memo() -> &'static Memo<BigInt> {
    static MEMO: OnceLock<Memo<BigInt>> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// The Schubert polynomial by divided differences, using the first-ascent
/// path and a process-wide cache keyed by the normalized permutation.
pub fn schubert_divdiff(w: &Permutation) -> Result<Polynomial> {
    schubert_shared(w).map(|p| (*p).clone())
}

/// As [`schubert_divdiff`], sharing the cached value.
pub fn schubert_shared(w: &Permutation) -> Result<Arc<Polynomial>> {
    let w = w.normalized();
    if let Some(p) = polynomial_memo().read().unwrap().get(&w) {
        return Ok(p.clone());
    }
    // climb towards w_0 until a cached ancestor (or w_0 itself) is reached;
    // chain[t] becomes chain[t + 1] by swapping positions steps[t]
    let mut chain = vec![w];
    let mut steps = Vec::new();
    let mut memo = polynomial_memo().write().unwrap();
    let mut top = loop {
        let current = chain.last().unwrap();
        let Some(i) = current.ascents().next() else {
            let longest = chain.pop().unwrap();
            let p = Arc::new(staircase(longest.len()));
            break memo.entry(longest).or_insert(p).clone();
        };
        let parent = current.swap_positions(i);
        steps.push(i as u32);
        if let Some(p) = memo.get(&parent) {
            break p.clone();
        }
        chain.push(parent);
    };
    while let Some(perm) = chain.pop() {
        let p = Arc::new(divided_difference(&top, steps[chain.len()])?);
        top = memo.entry(perm).or_insert(p).clone();
    }
    Ok(top)
}

/// `sum_{C <= D(w)} x^C`, with no avoidance check.
pub fn diagram_sum(w: &Permutation) -> Polynomial {
    let mut p = Polynomial::zero();
    for c in enumerate_dominated(&rothe(w)) {
        p.add_term(row_monomial(&c), 1.into());
    }
    p
}

fn require_avoider(w: &Permutation) -> Result<()> {
    if w.avoids_1432_1423() {
        Ok(())
    } else {
        Err(Error::PatternViolation(w.to_string()))
    }
}

/// The diagram-sum formula, defined for 1432/1423-avoiding `w`.
pub fn schubert_diagram(w: &Permutation) -> Result<Polynomial> {
    require_avoider(w)?;
    Ok(diagram_sum(w))
}

/// `#{C <= D(w) : x^C = m}` for an avoiding `w`.
pub fn coefficient_by_counting(w: &Permutation, m: &Monomial) -> Result<u64> {
    require_avoider(w)?;
    Ok(enumerate_dominated(&rothe(w))
        .filter(|c| row_monomial(c) == *m)
        .count() as u64)
}

/// `S_w(1)`, memoized by normalized permutation.
pub fn principal_specialization(w: &Permutation) -> BigInt {
    let w = w.normalized();
    if let Some(v) = specialization_memo().read().unwrap().get(&w) {
        return v.clone();
    }
    let value = schubert_shared(&w)
        .expect("divided differences divide exactly")
        .evaluate_all_ones();
    specialization_memo()
        .write()
        .unwrap()
        .entry(w)
        .or_insert(value)
        .clone()
}

/// Seeds the specialization memo (e.g. from a persisted cache). Existing
/// entries win.
pub fn preload_principal_specializations<I: IntoIterator<Item = (Permutation, BigInt)>>(items: I) {
    let mut memo = specialization_memo().write().unwrap();
    for (w, v) in items {
        memo.entry(w.normalized()).or_insert(v);
    }
}

/// Current contents of the specialization memo, sorted by permutation.
pub fn principal_specialization_snapshot() -> Vec<(Permutation, BigInt)> {
    let mut out: Vec<_> = specialization_memo()
        .read()
        .unwrap()
        .iter()
        .map(|(w, v)| (w.clone(), v.clone()))
        .collect();
    out.sort();
    out
}

/// All reduced words of `w`, as sequences of simple-transposition indices.
pub fn reduced_words(w: &Permutation, guard: usize) -> Result<Vec<Vec<u32>>> {
    fn go(w: &Permutation, suffix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let descents: Vec<usize> = w.descents().collect();
        if descents.is_empty() {
            out.push(suffix.iter().rev().copied().collect());
            return;
        }
        for i in descents {
            suffix.push(i as u32);
            go(&w.swap_positions(i), suffix, out);
            suffix.pop();
        }
    }
    let length = w.inversions();
    if length > guard {
        return Err(Error::LengthGuardExceeded { length, guard });
    }
    let mut out = Vec::new();
    go(w, &mut Vec::with_capacity(length), &mut out);
    Ok(out)
}

/// `S_w(1) = (1 / l!) sum_{a reduced word} a_1 ... a_l`.
pub fn macdonald_oracle(w: &Permutation) -> Result<BigInt> {
    macdonald_oracle_with_guard(w, REDUCED_WORD_GUARD)
}

pub fn macdonald_oracle_with_guard(w: &Permutation, guard: usize) -> Result<BigInt> {
    let words = reduced_words(w, guard)?;
    let total: BigInt = words
        .iter()
        .map(|a| a.iter().map(|&x| BigInt::from(x)).product::<BigInt>())
        .sum();
    let factorial: BigInt = (1..=w.inversions()).map(BigInt::from).product();
    debug_assert!((&total % &factorial).is_zero());
    Ok(total / factorial)
}

/// Convenience for callers that know the value is small.
pub fn principal_specialization_u64(w: &Permutation) -> u64 {
    principal_specialization(w)
        .to_u64()
        .expect("principal specialization fits in u64")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{pattern_count, permutations};

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn x(i: u32) -> Polynomial {
        Polynomial::var(i)
    }

    fn s1342() -> Polynomial {
        [&x(1) * &x(2), &x(1) * &x(3), &x(2) * &x(3)]
            .into_iter()
            .sum()
    }

    #[test]
    fn divdiff_examples() {
        let s2143: Polynomial = [&x(1) * &x(1), &x(1) * &x(2), &x(1) * &x(3)]
            .into_iter()
            .sum();
        assert_eq!(schubert_divdiff(&p("2143")).unwrap(), s2143);
        assert_eq!(schubert_divdiff(&p("1234")).unwrap(), Polynomial::one());
        assert_eq!(
            schubert_divdiff(&Permutation::identity(0)).unwrap(),
            Polynomial::one()
        );
        assert_eq!(schubert_divdiff(&p("1342")).unwrap(), s1342());
        assert_eq!(
            schubert_divdiff(&p("321")).unwrap(),
            &(&x(1) * &x(1)) * &x(2)
        );
        assert_eq!(schubert_divdiff(&p("21")).unwrap(), x(1));
        // stability under trailing fixed points
        assert_eq!(schubert_divdiff(&p("13425")).unwrap(), s1342());
    }

    #[test]
    fn diagram_examples() {
        assert_eq!(schubert_diagram(&p("1342")).unwrap(), s1342());
        let s = schubert_diagram(&p("12453")).unwrap();
        assert_eq!(s.len(), 6);
        assert_eq!(s.evaluate_all_ones(), 6.into());
        assert_eq!(schubert_diagram(&p("123")).unwrap(), Polynomial::one());
        assert_eq!(
            schubert_diagram(&p("1432")),
            Err(Error::PatternViolation("1432".into()))
        );
    }

    #[test]
    fn counting_examples() {
        let m13 = Monomial::from_exponents(&[1, 0, 1]);
        assert_eq!(coefficient_by_counting(&p("1342"), &m13).unwrap(), 1);
        assert_eq!(coefficient_by_counting(&p("2143"), &m13).unwrap(), 1);
        assert_eq!(
            coefficient_by_counting(&p("1342"), &Monomial::var(1)).unwrap(),
            0
        );
        assert!(coefficient_by_counting(&p("1423"), &m13).is_err());
    }

    #[test]
    fn specialization_examples() {
        assert_eq!(principal_specialization(&p("2143")), 3.into());
        assert_eq!(principal_specialization(&p("1")), 1.into());
        assert_eq!(principal_specialization(&p("321")), 1.into());
        assert_eq!(macdonald_oracle(&p("321")).unwrap(), 1.into());
        assert_eq!(macdonald_oracle(&p("21")).unwrap(), 1.into());
        assert_eq!(macdonald_oracle(&p("2143")).unwrap(), 3.into());
        let mut words = reduced_words(&p("321"), 12).unwrap();
        words.sort();
        assert_eq!(words, [vec![1, 2, 1], vec![2, 1, 2]]);
        let mut words = reduced_words(&p("2143"), 12).unwrap();
        words.sort();
        assert_eq!(words, [vec![1, 3], vec![3, 1]]);
        assert!(matches!(
            macdonald_oracle_with_guard(&p("4321"), 5),
            Err(Error::LengthGuardExceeded {
                length: 6,
                guard: 5
            })
        ));
    }

    #[test]
    fn reduced_word_strategies_agree_on_s5() {
        for w in permutations(5) {
            let a = schubert_divdiff_along(&w, ReducedWordStrategy::FirstAscent).unwrap();
            let b = schubert_divdiff_along(&w, ReducedWordStrategy::LastAscent).unwrap();
            assert_eq!(a, b, "{w}");
            assert_eq!(schubert_divdiff(&w).unwrap(), a, "{w}");
        }
    }

    #[test]
    fn positivity_degree_and_bounds_on_s6() {
        for n in 1..=6 {
            for w in permutations(n) {
                let s = schubert_divdiff(&w).unwrap();
                assert!(s.is_nonnegative(), "{w}");
                assert!(s.is_homogeneous());
                assert_eq!(s.degree(), Some(rothe(&w).len() as u32));
                let lower = 1 + pattern_count(&p("132"), &w) + pattern_count(&p("1432"), &w);
                assert!(principal_specialization(&w) >= lower.into(), "{w}");
            }
        }
    }

    #[test]
    fn diagram_formula_holds_iff_avoiding_through_s6() {
        for n in 1..=6 {
            for w in permutations(n) {
                let equal = diagram_sum(&w) == schubert_divdiff(&w).unwrap();
                assert_eq!(equal, w.avoids_1432_1423(), "{w}");
            }
        }
    }

    #[test]
    fn macdonald_matches_on_s5() {
        for w in permutations(5) {
            assert_eq!(
                macdonald_oracle(&w).unwrap(),
                principal_specialization(&w),
                "{w}"
            );
        }
    }

    #[test]
    fn concurrent_cache_is_consistent() {
        use rayon::prelude::*;
        let all: Vec<Permutation> = permutations(6).collect();
        let par: Vec<Polynomial> = all
            .par_iter()
            .map(|w| schubert_divdiff(w).unwrap())
            .collect();
        for (w, s) in all.iter().zip(&par) {
            assert_eq!(
                *s,
                schubert_divdiff_along(w, ReducedWordStrategy::LastAscent).unwrap()
            );
        }
    }
}
