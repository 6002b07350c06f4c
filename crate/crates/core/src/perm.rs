//! Permutations, words and the subword order.
//!
//! Everything here is 1-indexed: a permutation of size `n` is stored in
//! one-line notation as the values `w(1), ..., w(n)`, and positions passed
//! to or returned from these functions count from 1.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub type Letter = u32;

/// Finite sequence of pairwise distinct positive integers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        if letters.contains(&0) {
            return Err(parse_error("word", &letters, "letters must be positive"));
        }
        let mut sorted = letters.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|p| p[0] == p[1]) {
            return Err(parse_error("word", &letters, "letters must be distinct"));
        }
        Ok(Word { letters })
    }

    pub fn empty() -> Self {
        Word::default()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The `i`-th letter, 1-indexed.
    pub fn at(&self, i: usize) -> Letter {
        self.letters[i - 1]
    }

    pub fn contains(&self, letter: Letter) -> bool {
        self.letters.contains(&letter)
    }

    /// The word with `letter` deleted (unchanged if absent).
    pub fn without(&self, letter: Letter) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .copied()
                .filter(|&a| a != letter)
                .collect(),
        }
    }
}

/// Bijection on `[n]` in one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Permutation {
    values: Vec<Letter>,
}

impl Permutation {
    pub fn new(values: Vec<Letter>) -> Result<Self> {
        let n = values.len();
        let mut seen = vec![false; n + 1];
        for &v in &values {
            let v = v as usize;
            if v == 0 || v > n || seen[v] {
                return Err(parse_error(
                    "permutation",
                    &values,
                    "values must be a bijection on 1..=n",
                ));
            }
            seen[v] = true;
        }
        Ok(Permutation { values })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            values: (1..=n as Letter).collect(),
        }
    }

    /// The longest element `n (n-1) ... 1`.
    pub fn longest(n: usize) -> Self {
        Permutation {
            values: (1..=n as Letter).rev().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Letter] {
        &self.values
    }

    /// `w(i)` for 1-indexed `i`.
    pub fn at(&self, i: usize) -> Letter {
        self.values[i - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.values
            .iter()
            .enumerate()
            .all(|(p, &v)| v as usize == p + 1)
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (p, &v) in self.values.iter().enumerate() {
            inv[v as usize - 1] = p as Letter + 1;
        }
        Permutation { values: inv }
    }

    /// One-based position of the value `letter`, if it occurs.
    pub fn position_of(&self, letter: Letter) -> Option<usize> {
        self.values.iter().position(|&v| v == letter).map(|p| p + 1)
    }

    pub fn word(&self) -> Word {
        Word {
            letters: self.values.clone(),
        }
    }

    pub fn inversions(&self) -> usize {
        let v = &self.values;
        (0..v.len())
            .map(|i| v[i + 1..].iter().filter(|&&b| b < v[i]).count())
            .sum()
    }

    /// Strips trailing fixed points, giving the representative in the
    /// smallest `S_m` that contains every non-fixed point.
    pub fn normalized(&self) -> Permutation {
        let mut values = self.values.clone();
        while values.last().is_some_and(|&v| v as usize == values.len()) {
            values.pop();
        }
        Permutation { values }
    }

    /// Pads with fixed points up to size `m` (no-op if already that large).
    pub fn embedded(&self, m: usize) -> Permutation {
        let mut values = self.values.clone();
        while values.len() < m {
            values.push(values.len() as Letter + 1);
        }
        Permutation { values }
    }

    /// `w s_i`: swaps the entries in positions `i` and `i + 1`.
    pub fn swap_positions(&self, i: usize) -> Permutation {
        let mut values = self.values.clone();
        values.swap(i - 1, i);
        Permutation { values }
    }

    /// Positions `i` with `w(i) > w(i+1)`.
    pub fn descents(&self) -> impl Iterator<Item = usize> + '_ {
        self.values
            .windows(2)
            .enumerate()
            .filter(|(_, p)| p[0] > p[1])
            .map(|(i, _)| i + 1)
    }

    pub fn ascents(&self) -> impl Iterator<Item = usize> + '_ {
        self.values
            .windows(2)
            .enumerate()
            .filter(|(_, p)| p[0] < p[1])
            .map(|(i, _)| i + 1)
    }

    /// True for permutations avoiding both 1432 and 1423.
    pub fn avoids_1432_1423(&self) -> bool {
        avoids(self, &forbidden_patterns())
    }
}

/// The two patterns excluded from the diagram-sum formula.
pub fn forbidden_patterns() -> [Permutation; 2] {
    [
        Permutation {
            values: vec![1, 4, 3, 2],
        },
        Permutation {
            values: vec![1, 4, 2, 3],
        },
    ]
}

pub fn inverse(w: &Permutation) -> Permutation {
    w.inverse()
}

/// Whether `u` occurs as a (not necessarily contiguous) subsequence of `v`.
pub fn is_subword(u: &Word, v: &Word) -> bool {
    let mut rest = v.letters.iter();
    u.letters.iter().all(|a| rest.any(|b| b == a))
}

/// The permutation order-isomorphic to `v`.
pub fn flatten(v: &Word) -> Permutation {
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by_key(|&p| v.letters[p]);
    let mut values = vec![0; v.len()];
    for (rank, p) in order.into_iter().enumerate() {
        values[p] = rank as Letter + 1;
    }
    Permutation { values }
}

/// Number of occurrences of `u` as a pattern in `w`.
pub fn pattern_count(u: &Permutation, w: &Permutation) -> u64 {
    fn extend(u: &[Letter], w: &[Letter], chosen: &mut Vec<Letter>, start: usize) -> u64 {
        let t = chosen.len();
        if t == u.len() {
            return 1;
        }
        let mut total = 0;
        // leave room for the remaining pattern letters
        for p in start..=w.len() - (u.len() - t) {
            let x = w[p];
            let consistent = chosen.iter().zip(u).all(|(&y, &uy)| (y < x) == (uy < u[t]));
            if consistent {
                chosen.push(x);
                total += extend(u, w, chosen, p + 1);
                chosen.pop();
            }
        }
        total
    }
    if u.len() > w.len() {
        return 0;
    }
    extend(&u.values, &w.values, &mut Vec::with_capacity(u.len()), 0)
}

pub fn avoids(w: &Permutation, patterns: &[Permutation]) -> bool {
    patterns.iter().all(|p| pattern_count(p, w) == 0)
}

/// Bitmask over positions of `w` (bit `p - 1` for position `p`) selecting the
/// letters of `u`, or `None` when `u` is not a subword of `w`.
pub fn position_mask(u: &Word, w: &Permutation) -> Option<u64> {
    let mut mask = 0u64;
    let mut next = 0;
    for &a in &u.letters {
        let p = w.values[next..].iter().position(|&b| b == a)? + next;
        mask |= 1 << p;
        next = p + 1;
    }
    Some(mask)
}

/// Restriction of `w` to the positions selected by `mask`.
pub fn subword_from_mask(w: &Permutation, mask: u64) -> Word {
    Word {
        letters: w
            .values
            .iter()
            .enumerate()
            .filter(|(p, _)| mask >> p & 1 == 1)
            .map(|(_, &v)| v)
            .collect(),
    }
}

/// All words `v` with `u <= v <= w`, ordered by position mask ascending.
pub fn subwords_between(u: &Word, w: &Permutation) -> Result<Vec<Word>> {
    let base = position_mask(u, w).ok_or_else(|| not_subword(u, w))?;
    Ok(supersets(base, w.len())
        .map(|mask| subword_from_mask(w, mask))
        .collect())
}

/// Masks over `n` positions containing `base`, ascending.
pub fn supersets(base: u64, n: usize) -> impl Iterator<Item = u64> {
    assert!(n < 64, "at most 63 positions");
    (0..1u64 << n).filter(move |m| m & base == base)
}

/// `(w^{-1}(v(1)), ..., w^{-1}(v(|v|)))`, strictly increasing for `v <= w`.
pub fn substitution_indices(w: &Permutation, v: &Word) -> Result<Vec<u32>> {
    let inv = w.inverse();
    let mut out = Vec::with_capacity(v.len());
    for &a in &v.letters {
        if a == 0 || a as usize > w.len() {
            return Err(Error::LetterNotInPermutation {
                letter: a,
                perm: w.to_string(),
            });
        }
        out.push(inv.at(a as usize));
    }
    if out.windows(2).any(|p| p[0] >= p[1]) {
        return Err(not_subword(v, w));
    }
    Ok(out)
}

/// All permutations of `[n]` in lexicographic order.
pub fn permutations(n: usize) -> Permutations {
    Permutations {
        next: Some((1..=n as Letter).collect()),
    }
}

pub struct Permutations {
    next: Option<Vec<Letter>>,
}

impl Iterator for Permutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if next_permutation(&mut succ) {
            self.next = Some(succ);
        }
        Some(Permutation { values: current })
    }
}

fn next_permutation(v: &mut [Letter]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let Some(i) = (0..v.len() - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..v.len()).rev().find(|&j| v[j] > v[i]).unwrap();
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

pub(crate) fn not_subword(u: &impl fmt::Display, w: &impl fmt::Display) -> Error {
    Error::NotASubword(u.to_string(), w.to_string())
}

fn parse_error(what: &'static str, letters: &[Letter], reason: &str) -> Error {
    Error::Parse {
        what,
        input: format_letters(letters),
        reason: reason.to_string(),
    }
}

/// Compact digits when every letter is a single digit, commas otherwise.
pub fn format_letters(letters: &[Letter]) -> String {
    if letters.is_empty() {
        "()".to_string()
    } else if letters.iter().all(|&a| a <= 9) {
        letters.iter().map(|a| a.to_string()).collect()
    } else {
        letters
            .iter()
            .map(|a| a.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

pub fn parse_letters(s: &str) -> Result<Vec<Letter>> {
    let s = s.trim();
    let err = |reason: &str| Error::Parse {
        what: "letters",
        input: s.to_string(),
        reason: reason.to_string(),
    };
    if s.is_empty() || s == "()" {
        return Ok(Vec::new());
    }
    if s.contains(',') {
        s.split(',')
            .map(|part| {
                part.trim()
                    .parse::<Letter>()
                    .map_err(|e| err(&e.to_string()))
            })
            .collect()
    } else {
        s.chars()
            .map(|c| c.to_digit(10).ok_or_else(|| err("expected digits")))
            .collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_letters(&self.letters))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_letters(&self.values))
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Word::new(parse_letters(s)?)
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Permutation::new(parse_letters(s)?).map_err(|e| match e {
            Error::Parse { what, reason, .. } => Error::Parse {
                what,
                input: s.to_string(),
                reason,
            },
            other => other,
        })
    }
}

impl From<&Permutation> for Word {
    fn from(w: &Permutation) -> Word {
        w.word()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn word(s: &str) -> Word {
        s.parse().unwrap()
    }

    /// Brute force over all index subsets.
    fn count_by_subsets(u: &Permutation, w: &Permutation) -> u64 {
        (0..1u64 << w.len())
            .filter(|m| m.count_ones() as usize == u.len())
            .filter(|&m| flatten(&subword_from_mask(w, m)) == *u)
            .count() as u64
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(p("15243").inverse(), p("13542"));
        assert_eq!(p("1234").inverse(), p("1234"));
        assert_eq!(p("2143").inverse(), p("2143"));
    }

    #[test]
    fn subword_examples() {
        assert!(is_subword(&word("792"), &word("37952")));
        assert!(is_subword(&Word::empty(), &word("37952")));
        assert!(is_subword(&Word::empty(), &Word::empty()));
        assert!(!is_subword(&word("43"), &word("1342")));
        assert!(is_subword(&word("42"), &word("1342")));
    }

    #[test]
    fn flatten_examples() {
        assert_eq!(flatten(&word("37952")), p("24531"));
        assert_eq!(flatten(&Word::empty()), Permutation::identity(0));
        assert_eq!(flatten(&word("3265")), p("2143"));
    }

    #[test]
    fn pattern_count_examples() {
        assert_eq!(count_by_subsets(&p("132"), &p("1432")), 3);
        assert_eq!(pattern_count(&p("132"), &p("1432")), 3);
        assert_eq!(pattern_count(&p("2413"), &p("2413")), 1);
        assert_eq!(pattern_count(&p("12"), &p("321")), 0);
        assert_eq!(pattern_count(&p("1234"), &p("321")), 0);
    }

    #[test]
    fn avoidance_examples() {
        let pats = forbidden_patterns();
        assert!(avoids(&p("2143"), &pats));
        assert!(!avoids(&p("1432"), &pats));
        assert!(!avoids(&p("15243"), &pats));
    }

    #[test]
    fn subwords_between_examples() {
        let got = subwords_between(&word("42"), &p("1342")).unwrap();
        let names: Vec<String> = got.iter().map(|v| v.to_string()).collect();
        assert_eq!(names, ["42", "142", "342", "1342"]);
        let got = subwords_between(&word("43"), &p("2143")).unwrap();
        let names: Vec<String> = got.iter().map(|v| v.to_string()).collect();
        assert_eq!(names, ["43", "243", "143", "2143"]);
        let got = subwords_between(&Word::empty(), &p("21")).unwrap();
        let names: Vec<String> = got.iter().map(|v| v.to_string()).collect();
        assert_eq!(names, ["()", "2", "1", "21"]);
        assert!(matches!(
            subwords_between(&word("43"), &p("1342")),
            Err(Error::NotASubword(..))
        ));
    }

    #[test]
    fn substitution_indices_examples() {
        assert_eq!(
            substitution_indices(&p("134265"), &word("3265")).unwrap(),
            [2, 4, 5, 6]
        );
        assert_eq!(
            substitution_indices(&p("2143"), &word("143")).unwrap(),
            [2, 3, 4]
        );
        assert_eq!(
            substitution_indices(&p("2143"), &word("2143")).unwrap(),
            [1, 2, 3, 4]
        );
        assert!(matches!(
            substitution_indices(&p("2143"), &word("15")),
            Err(Error::LetterNotInPermutation { letter: 5, .. })
        ));
    }

    #[test]
    fn text_format() {
        assert_eq!(
            p("2,10,3,4,5,6,7,8,9,1").to_string(),
            "2,10,3,4,5,6,7,8,9,1"
        );
        assert_eq!(Word::empty().to_string(), "()");
        assert_eq!("()".parse::<Word>().unwrap(), Word::empty());
        assert!("1224".parse::<Permutation>().is_err());
        assert!("134".parse::<Permutation>().is_err());
        assert!("103".parse::<Word>().is_err());
    }

    #[test]
    fn enumeration_and_normalization() {
        assert_eq!(permutations(5).count(), 120);
        assert_eq!(permutations(0).count(), 1);
        let all: Vec<_> = permutations(3).map(|w| w.to_string()).collect();
        assert_eq!(all, ["123", "132", "213", "231", "312", "321"]);
        assert_eq!(p("21345").normalized(), p("21"));
        assert_eq!(p("123").normalized(), Permutation::identity(0));
        assert_eq!(p("21").embedded(4), p("2134"));
    }

    #[test]
    fn exhaustive_small_invariants() {
        for n in 0..=7 {
            for w in permutations(n) {
                assert_eq!(flatten(&w.word()), w);
                assert_eq!(w.inverse().inverse(), w);
                for mask in 0..1u64 << n {
                    let v = subword_from_mask(&w, mask);
                    let idx = substitution_indices(&w, &v).unwrap();
                    assert!(idx.windows(2).all(|q| q[0] < q[1]));
                }
            }
        }
    }

    #[test]
    fn pattern_count_matches_brute_force() {
        for n in 0..=6 {
            for w in permutations(n) {
                for m in 0..=3.min(n) {
                    for u in permutations(m) {
                        assert_eq!(pattern_count(&u, &w), count_by_subsets(&u, &w));
                    }
                }
            }
        }
        let w = p("3172654");
        for u in permutations(4) {
            assert_eq!(pattern_count(&u, &w), count_by_subsets(&u, &w));
        }
    }
}
