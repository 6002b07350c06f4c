//! Dual characters of flagged Weyl modules.
//!
//! For a diagram `D`, the module is spanned by the products
//! `prod_j det(Y^{C_j}_{D_j})` over `C <= D`, where `Y` is the
//! upper-triangular matrix of indeterminates `y_{ij}`. The coefficient of a
//! monomial `m` in the dual character is the dimension of the span of the
//! products with `x^C = m`; it is computed here as an exact matrix rank.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::diagram::{
    column_dominates, count_dominated, enumerate_dominated, row_monomial, Diagram, RowSet,
};
use crate::error::{Error, Result};
use crate::linalg::{rank_bareiss, rank_mod_p};
use crate::poly::{y_index, Monomial, Polynomial};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

const PREPASS_PRIME: u64 = 2_305_843_009_213_693_951; // 2^61 - 1

#[derive(Clone, Copy, Debug)]
pub struct ChiOptions {
    /// Largest number of dominated diagrams `chi` will enumerate.
    pub budget: u64,
    /// Try a rank computation modulo a prime first; a full-rank answer there
    /// is already exact.
    pub modular_prepass: bool,
}

impl Default for ChiOptions {
    fn default() -> Self {
        ChiOptions {
            budget: DEFAULT_BUDGET,
            modular_prepass: false,
        }
    }
}

/// Determinant of the submatrix of `Y` on `rows` x `cols`, in y-variables.
/// Zero exactly when `rows <= cols` fails.
pub fn y_determinant(rows: RowSet, cols: RowSet) -> Result<Polynomial> {
    if rows.len() != cols.len() {
        return Err(Error::SizeMismatch(format!(
            "{} rows against {} columns",
            rows.len(),
            cols.len()
        )));
    }
    Ok(DeterminantCache::default().get(rows, cols).clone())
}

/// Minors of `Y` by cofactor expansion along the first row, memoized on
/// `(rows, cols)`.
#[derive(Default)]
pub struct DeterminantCache {
    memo: HashMap<(RowSet, RowSet), Polynomial>,
}

impl DeterminantCache {
    pub fn get(&mut self, rows: RowSet, cols: RowSet) -> &Polynomial {
        if !self.memo.contains_key(&(rows, cols)) {
            let value = self.expand(rows, cols);
            self.memo.insert((rows, cols), value);
        }
        &self.memo[&(rows, cols)]
    }

    fn expand(&mut self, rows: RowSet, cols: RowSet) -> Polynomial {
        let Some(first) = rows.iter().next() else {
            return Polynomial::one();
        };
        if !column_dominates(rows, cols) {
            return Polynomial::zero();
        }
        let rest = rows.without(first);
        let mut total = Polynomial::zero();
        for (t, c) in cols.iter().enumerate() {
            if first > c {
                continue;
            }
            let minor = self.get(rest, cols.without(c)).clone();
            if minor.is_zero() {
                continue;
            }
            let entry = Monomial::var(y_index(first, c));
            let term = minor.mul_monomial(&entry);
            total = if t % 2 == 0 {
                &total + &term
            } else {
                &total - &term
            };
        }
        total
    }
}

/// `prod_j det(Y^{C_j}_{D_j})` together with its factors.
#[derive(Clone, Debug)]
pub struct DeterminantProduct {
    pub factors: Vec<(RowSet, RowSet)>,
    pub expanded: Polynomial,
}

impl DeterminantProduct {
    pub fn new(c: &Diagram, d: &Diagram, cache: &mut DeterminantCache) -> Result<Self> {
        if c.n() != d.n() {
            return Err(Error::SizeMismatch("diagrams on different grids".into()));
        }
        let factors: Vec<(RowSet, RowSet)> = c
            .columns()
            .iter()
            .zip(d.columns())
            .map(|(&r, &s)| (r, s))
            .collect();
        if let Some(&(r, s)) = factors.iter().find(|(r, s)| r.len() != s.len()) {
            return Err(Error::SizeMismatch(format!("column {r:?} against {s:?}")));
        }
        let mut expanded = Polynomial::one();
        for &(r, s) in &factors {
            if s.is_empty() {
                continue;
            }
            expanded = &expanded * cache.get(r, s);
            if expanded.is_zero() {
                break;
            }
        }
        Ok(DeterminantProduct { factors, expanded })
    }
}

/// Rank over the rationals of the coefficient vectors of `products`, with
/// y-monomials interned per call.
pub fn span_dimension(products: &[Polynomial], prepass: bool) -> usize {
    let mut columns: HashMap<&Monomial, usize> = HashMap::new();
    for p in products {
        for m in p.monomials() {
            let next = columns.len();
            columns.entry(m).or_insert(next);
        }
    }
    let rows: Vec<Vec<BigInt>> = products
        .iter()
        .map(|p| {
            let mut row = vec![BigInt::zero(); columns.len()];
            for (m, c) in p.terms() {
                row[columns[m]] = c.clone();
            }
            row
        })
        .collect();
    if prepass && rank_mod_p(&rows, PREPASS_PRIME) == rows.len() {
        return rows.len();
    }
    rank_bareiss(rows)
}

/// `[m] chi_D`: dimension of the span of the products for `C <= D` with
/// `x^C = m`.
pub fn chi_coefficient(d: &Diagram, m: &Monomial) -> usize {
    let mut cache = DeterminantCache::default();
    let products: Vec<Polynomial> = enumerate_dominated(d)
        .filter(|c| row_monomial(c) == *m)
        .map(|c| {
            DeterminantProduct::new(&c, d, &mut cache)
                .expect("dominated diagrams match column sizes")
                .expanded
        })
        .collect();
    span_dimension(&products, false)
}

/// The dual character `chi_D`.
pub fn chi(d: &Diagram, options: &ChiOptions) -> Result<Polynomial> {
    let count = count_dominated(d);
    if count > BigUint::from(options.budget) {
        return Err(Error::BudgetExceeded {
            count: count.to_string(),
            budget: options.budget,
        });
    }
    let mut groups: BTreeMap<Monomial, Vec<Diagram>> = BTreeMap::new();
    for c in enumerate_dominated(d) {
        groups.entry(row_monomial(&c)).or_default().push(c);
    }
    let mut cache = DeterminantCache::default();
    let mut out = Polynomial::zero();
    for (m, members) in groups {
        let products: Vec<Polynomial> = members
            .iter()
            .map(|c| {
                DeterminantProduct::new(c, d, &mut cache)
                    .expect("dominated diagrams match column sizes")
                    .expanded
            })
            .collect();
        let dim = span_dimension(&products, options.modular_prepass);
        out.add_term(m, BigInt::from(dim));
    }
    Ok(out)
}

/// Deletes the (empty) row `k` and column `l`, shifting later rows and
/// columns down by one.
pub fn compress(d: &Diagram, k: u32, l: u32) -> Result<Diagram> {
    let n = d.n();
    if n == 0 || k == 0 || l == 0 || k as usize > n || l as usize > n {
        return Err(Error::Invalid(format!(
            "row {k} / column {l} outside the grid"
        )));
    }
    if !d.row_column_boxes(k, l).is_empty() {
        return Err(Error::NonEmptyRowOrColumn { row: k, column: l });
    }
    let shift = |x: u32, gap: u32| if x > gap { x - 1 } else { x };
    Diagram::from_boxes(
        n - 1,
        d.boxes()
            .into_iter()
            .map(|(i, j)| (shift(i, k), shift(j, l))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{restrict_remove, rothe};
    use crate::perm::{flatten, permutations, Permutation};
    use crate::schubert::{diagram_sum, schubert_divdiff};

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn set(rows: &[u32]) -> RowSet {
        rows.iter().copied().collect()
    }

    fn y(i: u32, j: u32) -> Polynomial {
        Polynomial::var(y_index(i, j))
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(y_determinant(set(&[1]), set(&[3])).unwrap(), y(1, 3));
        assert!(y_determinant(set(&[2]), set(&[1])).unwrap().is_zero());
        let expect = &(&y(1, 2) * &y(2, 3)) - &(&y(1, 3) * &y(2, 2));
        assert_eq!(y_determinant(set(&[1, 2]), set(&[2, 3])).unwrap(), expect);
        assert_eq!(
            y_determinant(RowSet::EMPTY, RowSet::EMPTY).unwrap(),
            Polynomial::one()
        );
        assert!(matches!(
            y_determinant(set(&[1]), set(&[1, 2])),
            Err(Error::SizeMismatch(_))
        ));
    }

    #[test]
    fn determinant_vanishes_iff_not_dominated() {
        for rb in 0..1u32 << 5 {
            for cb in 0..1u32 << 5 {
                let (r, c) = (RowSet::from_bits(rb), RowSet::from_bits(cb));
                if r.len() != c.len() {
                    continue;
                }
                let det = y_determinant(r, c).unwrap();
                assert_eq!(det.is_zero(), !column_dominates(r, c), "{r:?} {c:?}");
            }
        }
    }

    #[test]
    fn chi_examples() {
        let opts = ChiOptions::default();
        assert_eq!(chi(&Diagram::empty(3), &opts).unwrap(), Polynomial::one());
        let d = rothe(&p("1342"));
        assert_eq!(chi_coefficient(&d, &Monomial::from_exponents(&[1, 1])), 1);
        assert_eq!(chi_coefficient(&d, &Monomial::var(4)), 0);
        let s2143 = schubert_divdiff(&p("2143")).unwrap();
        assert_eq!(chi(&rothe(&p("2143")), &opts).unwrap(), s2143);
    }

    #[test]
    fn rank_drops_below_count_for_1432() {
        let w = p("1432");
        let d = rothe(&w);
        let s = schubert_divdiff(&w).unwrap();
        let counted = diagram_sum(&w);
        let m = Monomial::from_exponents(&[1, 1, 1]);
        assert_eq!(counted.coefficient(&m), 2.into());
        assert_eq!(chi_coefficient(&d, &m), 1);
        assert_eq!(s.coefficient(&m), 1.into());
    }

    #[test]
    fn budget_guard() {
        let opts = ChiOptions {
            budget: 2,
            modular_prepass: false,
        };
        assert!(matches!(
            chi(&rothe(&p("12453")), &opts),
            Err(Error::BudgetExceeded { budget: 2, .. })
        ));
    }

    #[test]
    fn chi_equals_schubert_through_s4() {
        let opts = ChiOptions::default();
        let fast = ChiOptions {
            modular_prepass: true,
            ..opts
        };
        for n in 1..=4 {
            for w in permutations(n) {
                let d = rothe(&w);
                let c = chi(&d, &opts).unwrap();
                assert_eq!(c, schubert_divdiff(&w).unwrap(), "{w}");
                assert_eq!(chi(&d, &fast).unwrap(), c);
                // support is exactly the set of x^C, and coefficients are bounded
                let counted = diagram_sum(&w);
                assert_eq!(
                    c.monomials().collect::<Vec<_>>(),
                    counted.monomials().collect::<Vec<_>>()
                );
                for (m, k) in counted.terms() {
                    assert!(c.coefficient(m) <= *k);
                }
            }
        }
    }

    #[test]
    fn counting_is_exact_for_avoiders_in_s5() {
        for w in permutations(5).filter(|w| w.avoids_1432_1423()) {
            let d = rothe(&w);
            for (m, k) in diagram_sum(&w).terms() {
                assert_eq!(BigInt::from(chi_coefficient(&d, m)), *k, "{w} {m}");
            }
        }
    }

    #[test]
    fn compress_examples() {
        assert_eq!(
            compress(&Diagram::empty(3), 2, 2).unwrap(),
            Diagram::empty(2)
        );
        let w = p("2143");
        let c = compress(&restrict_remove(&rothe(&w), 1, 2), 1, 2).unwrap();
        assert_eq!(c, rothe(&p("132")));
        let w = p("15243");
        let c = compress(&restrict_remove(&rothe(&w), 5, 3), 5, 3).unwrap();
        assert_eq!(c, rothe(&flatten(&"1524".parse().unwrap())));
        assert!(matches!(
            compress(&rothe(&w), 2, 3),
            Err(Error::NonEmptyRowOrColumn { row: 2, column: 3 })
        ));
    }

    #[test]
    fn removal_then_zero_matches_compressed_character() {
        let opts = ChiOptions::default();
        for n in 1..=4 {
            for w in permutations(n) {
                let d = rothe(&w);
                for k in 1..=n as u32 {
                    let l = w.at(k as usize);
                    let dhat = restrict_remove(&d, k, l);
                    let lhs = chi(&dhat, &opts).unwrap().substitute_zero(k);
                    let small = compress(&dhat, k, l).unwrap();
                    let rhs = chi(&small, &opts)
                        .unwrap()
                        .relabel(|i| if i >= k { i + 1 } else { i });
                    assert_eq!(lhs, rhs, "{w} k={k}");
                    assert_eq!(small, rothe(&flatten(&w.word().without(l))));
                }
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn rank_ignores_product_order(
                idx in 0usize..120,
                seed in proptest::collection::vec(any::<u32>(), 16)
            ) {
                let w = permutations(5).nth(idx).unwrap();
                let d = rothe(&w);
                let mut cache = DeterminantCache::default();
                let mut groups: BTreeMap<Monomial, Vec<Polynomial>> = BTreeMap::new();
                for c in enumerate_dominated(&d) {
                    let prod = DeterminantProduct::new(&c, &d, &mut cache).unwrap().expanded;
                    groups.entry(row_monomial(&c)).or_default().push(prod);
                }
                for products in groups.values() {
                    let base = span_dimension(products, false);
                    let mut shuffled = products.clone();
                    for (t, s) in seed.iter().enumerate() {
                        let len = shuffled.len();
                        shuffled.swap(t % len, *s as usize % len);
                    }
                    prop_assert_eq!(span_dimension(&shuffled, false), base);
                    prop_assert_eq!(span_dimension(&shuffled, true), base);
                }
            }
        }
    }
}
