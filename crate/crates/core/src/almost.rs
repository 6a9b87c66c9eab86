//! Almost symmetric Schur functions: the stable basis indexed by pairs
//! (mu|lambda), expanded as head monomials in the first few variables times
//! symmetric functions in the remaining ones.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::cache::KeyCache;
use crate::combinatorics::{
    concat, is_weakly_decreasing, kostka_tables, render_composition, reverse_composition, size,
    trim, Partition, SigmaPair,
};
use crate::filling::{compute_e, enumerate_star_labellings, star_labellings_with_content};
use crate::operators::{
    apply_epsilon_with_limit, apply_w, apply_xi, OperatorError, WMethod, DEFAULT_BLOCK_LIMIT,
};
use crate::poly::{monomial_cmp, render_monomial, QPolynomial, QtPolynomial, RenderCoefficient};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TailBasis {
    Monomial,
    Schur,
}

#[derive(Error, Clone, PartialEq, Eq, Debug)]
pub enum AlmostError {
    #[error("polynomial is not symmetric under swapping x{variable} and x{}", .variable + 1)]
    NotSymmetric { variable: usize },
    #[error("need at least {needed} variables, given {given}")]
    InsufficientVariables { needed: usize, given: usize },
    #[error("expansions at {smaller} and {larger} variables disagree for {pair}")]
    StabilizationFailure {
        pair: String,
        smaller: usize,
        larger: usize,
    },
}

/// Linear combination of head * tail products: x^head, a monomial in the
/// first `threshold` variables, times a symmetric function of the remaining
/// variables labelled by the tail partition in the chosen basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlmostSymFunction {
    threshold: usize,
    basis: TailBasis,
    terms: BTreeMap<(Vec<u32>, Partition), BigRational>,
}

impl AlmostSymFunction {
    pub fn new(threshold: usize, basis: TailBasis) -> Self {
        AlmostSymFunction { threshold, basis, terms: BTreeMap::new() }
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }

    pub fn basis(&self) -> TailBasis {
        self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Vec<u32>, Partition), &BigRational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, head: &[u32], tail: Partition, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let key = (trim(head), tail);
        debug_assert!(key.0.len() <= self.threshold, "head exceeds the threshold");
        match self.terms.entry(key) {
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn coefficient(&self, head: &[u32], tail: &Partition) -> BigRational {
        self.terms
            .get(&(trim(head), tail.clone()))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|(h, t)| size(h) + t.size())
            .max()
            .unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(|(h, t)| size(h) + t.size());
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    /// Terms in display order: heads by total degree descending then
    /// lexicographically, tails descending within a head.
    pub fn sorted_terms(&self) -> Vec<((Vec<u32>, Partition), BigRational)> {
        let mut v: Vec<_> = self
            .terms
            .iter()
            .map(|(k, c)| (k.clone(), c.clone()))
            .collect();
        v.sort_by(|((h1, t1), _), ((h2, t2), _)| monomial_cmp(h2, h1).then_with(|| t2.cmp(t1)));
        v
    }

    /// Change the tail basis. Schur tails expand through the Kostka matrix,
    /// monomial tails contract through its inverse; heads are untouched.
    pub fn convert(&self, basis: TailBasis) -> AlmostSymFunction {
        if basis == self.basis {
            return self.clone();
        }
        let mut out = AlmostSymFunction::new(self.threshold, basis);
        for ((head, tail), c) in &self.terms {
            if tail.is_empty() {
                out.add_term(head, tail.clone(), c.clone());
                continue;
            }
            let tables = kostka_tables(tail.size());
            let ti = tables.position(tail).expect("partition of its own size");
            let matrix = match basis {
                TailBasis::Monomial => &tables.kostka,
                TailBasis::Schur => &tables.inverse,
            };
            for (j, target) in tables.index.iter().enumerate() {
                let entry = matrix[ti][j];
                if entry != 0 {
                    out.add_term(
                        head,
                        target.clone(),
                        c * BigRational::from_integer(BigInt::from(entry)),
                    );
                }
            }
        }
        out
    }

    /// JSON form matching the CLI output schema.
    pub fn to_json(&self, pair: Option<&SigmaPair>) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .sorted_terms()
            .into_iter()
            .map(|((head, tail), c)| {
                serde_json::json!({
                    "head": head,
                    "tail": tail.parts(),
                    "coeff": c.to_string(),
                })
            })
            .collect();
        serde_json::json!({
            "pair": pair.map(|p| p.render()),
            "basis": match self.basis {
                TailBasis::Monomial => "monomial",
                TailBasis::Schur => "schur",
            },
            "threshold": self.threshold,
            "terms": terms,
        })
    }
}

impl fmt::Display for AlmostSymFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let letter = match self.basis {
            TailBasis::Monomial => "m",
            TailBasis::Schur => "s",
        };
        let mut pieces = Vec::new();
        for ((head, tail), c) in self.sorted_terms() {
            let mut factors = Vec::new();
            let mono = render_monomial(&head);
            if !mono.is_empty() {
                factors.push(mono);
            }
            if !tail.is_empty() {
                factors.push(format!("{letter}_({})", render_composition(tail.parts())));
            }
            let piece = if factors.is_empty() {
                c.render_plain()
            } else if c.is_one() {
                factors.join("*")
            } else {
                format!("{}*{}", c.render_as_coefficient(), factors.join("*"))
            };
            pieces.push(piece);
        }
        write!(f, "{}", pieces.join(" + "))
    }
}

/// The key polynomial of a composition, by isobaric divided differences
/// along the bubble-sort path down to the dominant rearrangement.
pub fn key_polynomial(alpha: &[u32]) -> QPolynomial {
    KeyCache::global().get_or_compute(alpha, || {
        let mut gamma = alpha.to_vec();
        let mut path = Vec::new();
        while let Some(i) =
            (0..gamma.len().saturating_sub(1)).find(|&i| gamma[i] < gamma[i + 1])
        {
            path.push(i + 1);
            gamma.swap(i, i + 1);
        }
        let mut poly = QPolynomial::x_power(&gamma);
        for &i in path.iter().rev() {
            poly = apply_xi(i, &poly);
        }
        poly
    })
}

/// Read an almost symmetric polynomial off its monomials: every term whose
/// tail exponents (beyond the first k variables) are weakly decreasing is the
/// leading representative of one head * monomial-tail product.
pub fn from_finite_polynomial(
    p: &QPolynomial,
    n: usize,
    k: usize,
) -> Result<AlmostSymFunction, AlmostError> {
    assert!(k <= n, "threshold exceeds the variable count");
    if p.num_variables() > n {
        return Err(AlmostError::InsufficientVariables { needed: p.num_variables(), given: n });
    }
    for i in (k + 1)..n {
        if !p.is_symmetric_in_adjacent(i) {
            return Err(AlmostError::NotSymmetric { variable: i });
        }
    }
    // Every tail shape of total degree d needs d slots to appear sorted.
    let tail_degree = p
        .terms()
        .map(|(e, _)| e.iter().skip(k).sum::<u32>())
        .max()
        .unwrap_or(0) as usize;
    if n < k + tail_degree {
        return Err(AlmostError::InsufficientVariables { needed: k + tail_degree, given: n });
    }
    let mut out = AlmostSymFunction::new(k, TailBasis::Monomial);
    for (e, c) in p.terms() {
        let mut padded = e.clone();
        padded.resize(padded.len().max(k), 0);
        let (head, tail) = padded.split_at(k);
        if !is_weakly_decreasing(tail) {
            continue;
        }
        let tail = Partition::new(trim(tail)).expect("weakly decreasing after trim");
        out.add_term(head, tail, c.clone());
    }
    Ok(out)
}

/// Evaluate in n variables: tails become monomial symmetric functions of
/// x_{k+1..n}, so tail shapes longer than n-k vanish.
pub fn to_finite_polynomial(f: &AlmostSymFunction, n: usize) -> QPolynomial {
    let k = f.threshold();
    assert!(n >= k, "fewer variables than the threshold");
    let monomial_form = f.convert(TailBasis::Monomial);
    let mut out = QPolynomial::zero();
    for ((head, tail), c) in &monomial_form.terms {
        for arrangement in arrangements(tail.parts(), n - k) {
            let mut exps = head.clone();
            exps.resize(k, 0);
            exps.extend_from_slice(&arrangement);
            out = out.add(&QPolynomial::monomial(&exps, c.clone()));
        }
    }
    out
}

/// Distinct rearrangements of the parts, zero-padded to the slot count.
fn arrangements(parts: &[u32], slots: usize) -> Vec<Vec<u32>> {
    if parts.len() > slots {
        return Vec::new();
    }
    let mut pool: Vec<(u32, usize)> = Vec::new();
    for &p in parts {
        match pool.iter_mut().find(|(v, _)| *v == p) {
            Some((_, count)) => *count += 1,
            None => pool.push((p, 1)),
        }
    }
    pool.push((0, slots - parts.len()));
    let mut out = Vec::new();
    place(&mut pool, slots, &mut Vec::with_capacity(slots), &mut out);
    out
}

fn place(pool: &mut Vec<(u32, usize)>, left: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if left == 0 {
        out.push(cur.clone());
        return;
    }
    for idx in 0..pool.len() {
        if pool[idx].1 == 0 {
            continue;
        }
        pool[idx].1 -= 1;
        cur.push(pool[idx].0);
        place(pool, left - 1, cur, out);
        cur.pop();
        pool[idx].1 += 1;
    }
}

/// Expansion of s_(mu|lambda) by stabilized key polynomials.
///
/// The key polynomial of mu * 0^(n-r) * rev(lambda) is read off at n* and
/// n*-1 variables, where r = l(mu)+l(lambda) and n* = r + |mu| + |lambda|;
/// agreement of the two readings certifies the stable range. The result is
/// cross-checked against the Weyl symmetrization of the key polynomial of
/// mu * lambda before converting to Schur tails.
pub fn almost_schur_by_recursion(pair: &SigmaPair) -> Result<AlmostSymFunction, AlmostError> {
    let k = pair.mu().len();
    if pair.degree() == 0 {
        let mut one = AlmostSymFunction::new(k, TailBasis::Schur);
        one.add_term(&[], Partition::empty(), BigRational::one());
        return Ok(one);
    }
    let r = k + pair.lambda().len();
    let n_star = r + pair.degree() as usize;
    let larger = expand_at(pair, n_star)?;
    let smaller = expand_at(pair, n_star - 1)?;
    if larger != smaller {
        return Err(AlmostError::StabilizationFailure {
            pair: pair.render(),
            smaller: n_star - 1,
            larger: n_star,
        });
    }
    let mut g = key_polynomial(&concat(pair.mu(), pair.lambda().parts()));
    for j in (k..r).rev() {
        g = apply_w(j, n_star, &g, WMethod::XiTower);
    }
    let symmetrized = from_finite_polynomial(&g, n_star, k)?;
    assert_eq!(
        symmetrized,
        larger,
        "symmetrization and key readings disagree for {}",
        pair.render()
    );
    Ok(larger.convert(TailBasis::Schur))
}

fn expand_at(pair: &SigmaPair, n: usize) -> Result<AlmostSymFunction, AlmostError> {
    let lambda = pair.lambda().parts();
    debug_assert!(n >= pair.mu().len() + lambda.len());
    let mut alpha = pair.mu().to_vec();
    alpha.resize(n - lambda.len(), 0);
    alpha.extend(reverse_composition(lambda));
    from_finite_polynomial(&key_polynomial(&alpha), n, pair.mu().len())
}

/// Expansion of s_(mu|lambda) by star labellings: each labelling whose tail
/// label multiplicities are weakly decreasing contributes 1 to the
/// coefficient of its head monomial times the tail monomial symmetric
/// function.
pub fn almost_schur_by_combinatorics(pair: &SigmaPair) -> AlmostSymFunction {
    let k = pair.mu().len();
    let max_label = k as u32 + pair.degree();
    let mut out = AlmostSymFunction::new(k, TailBasis::Monomial);
    for labelling in enumerate_star_labellings(pair, max_label) {
        let mut content = labelling.x_weight();
        content.resize(content.len().max(k), 0);
        let tail = &content[k..];
        if !is_weakly_decreasing(tail) {
            continue;
        }
        let tail = Partition::new(trim(tail)).expect("weakly decreasing after trim");
        out.add_term(&content[..k], tail, BigRational::one());
    }
    out
}

/// Number of star labellings of the pair with head content alpha and tail
/// content nu: the monomial-basis coefficient of s_(mu|lambda).
pub fn kostka_almost(pair: &SigmaPair, alpha: &[u32], nu: &Partition) -> u64 {
    let head = trim(alpha);
    if head.len() > pair.mu().len() {
        return 0;
    }
    if size(alpha) + nu.size() != pair.degree() {
        return 0;
    }
    let mut content = head;
    content.resize(pair.mu().len(), 0);
    content.extend_from_slice(nu.parts());
    star_labellings_with_content(pair, &content).len() as u64
}

/// Partial Hecke symmetrization of the Macdonald polynomial indexed by
/// mu * lambda * 0^(n-r): the n-variable truncation of the stable limit.
pub fn stable_macdonald_truncation(
    pair: &SigmaPair,
    n: usize,
) -> Result<QtPolynomial, OperatorError> {
    stable_macdonald_truncation_with_limit(pair, n, DEFAULT_BLOCK_LIMIT)
}

pub fn stable_macdonald_truncation_with_limit(
    pair: &SigmaPair,
    n: usize,
    limit: usize,
) -> Result<QtPolynomial, OperatorError> {
    let k = pair.mu().len();
    let r = k + pair.lambda().len();
    assert!(n >= r, "need at least l(mu) + l(lambda) variables");
    let mut shape = concat(pair.mu(), pair.lambda().parts());
    shape.resize(n, 0);
    apply_epsilon_with_limit(k, n, &compute_e(&shape), limit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{enumerate_sigma_pairs, kostka, partitions_of};
    use crate::filling::enumerate_key_fillings;
    use crate::operators::upsilon;

    fn rat(c: i64) -> BigRational {
        BigRational::from_integer(c.into())
    }

    fn part(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn pair(s: &str) -> SigmaPair {
        SigmaPair::parse(s).unwrap()
    }

    fn build(
        threshold: usize,
        basis: TailBasis,
        entries: &[(&[u32], &[u32], i64)],
    ) -> AlmostSymFunction {
        let mut f = AlmostSymFunction::new(threshold, basis);
        for &(head, tail, c) in entries {
            f.add_term(head, part(tail), rat(c));
        }
        f
    }

    #[test]
    fn key_polynomial_of_dominant_weight_is_a_monomial() {
        assert_eq!(key_polynomial(&[3, 2, 1]), QPolynomial::x_power(&[3, 2, 1]));
        assert_eq!(key_polynomial(&[]), QPolynomial::one());
    }

    #[test]
    fn key_polynomial_of_antidominant_weight_is_schur() {
        let schur = to_finite_polynomial(&build(0, TailBasis::Schur, &[(&[], &[2, 1], 1)]), 3);
        assert_eq!(schur.num_terms(), 7);
        assert_eq!(key_polynomial(&[0, 1, 2]), schur);
    }

    #[test]
    fn key_polynomial_single_ascent_and_trailing_zeros() {
        let dominant = QPolynomial::x_power(&[3, 2, 1]);
        assert_eq!(key_polynomial(&[2, 3, 1]), apply_xi(1, &dominant));
        assert_eq!(key_polynomial(&[0, 1, 2, 0, 0]), key_polynomial(&[0, 1, 2]));
    }

    #[test]
    fn key_polynomial_matches_filling_enumeration() {
        for alpha in [vec![1, 0, 2], vec![2, 0, 1], vec![0, 2, 1], vec![1, 3]] {
            let mut from_fillings = QPolynomial::zero();
            for f in enumerate_key_fillings(&alpha) {
                from_fillings = from_fillings.add(&QPolynomial::x_power(&f.x_weight()));
            }
            assert_eq!(from_fillings, key_polynomial(&alpha), "alpha={alpha:?}");
        }
    }

    #[test]
    fn key_with_reversed_partition_tail_is_symmetric_beyond_the_head() {
        let p = key_polynomial(&[2, 0, 0, 0, 1, 3]);
        assert!(p.is_symmetric_in_range(2, 6));
        assert!(!p.is_symmetric_in_range(1, 6));
    }

    #[test]
    fn from_finite_polynomial_reads_monomial_tails() {
        let p = QPolynomial::x_power(&[2, 1])
            .add(&QPolynomial::x_power(&[2, 0, 1]))
            .add(&QPolynomial::x_power(&[2, 0, 0, 1]));
        let f = from_finite_polynomial(&p, 4, 1).unwrap();
        assert_eq!(f, build(1, TailBasis::Monomial, &[(&[2], &[1], 1)]));
    }

    #[test]
    fn from_finite_polynomial_rejects_asymmetric_input() {
        let p = QPolynomial::x_power(&[0, 1]);
        assert_eq!(
            from_finite_polynomial(&p, 3, 1),
            Err(AlmostError::NotSymmetric { variable: 2 })
        );
    }

    #[test]
    fn from_finite_polynomial_needs_room_for_every_tail_shape() {
        // x2^2 in two variables could shadow either m_(2) or m_(1,1).
        let p = QPolynomial::x_power(&[0, 2]);
        assert_eq!(
            from_finite_polynomial(&p, 2, 1),
            Err(AlmostError::InsufficientVariables { needed: 3, given: 2 })
        );
    }

    #[test]
    fn from_finite_polynomial_recovers_schur_coefficients() {
        let schur = to_finite_polynomial(&build(0, TailBasis::Schur, &[(&[], &[2, 1], 1)]), 4);
        let f = from_finite_polynomial(&schur, 4, 0).unwrap();
        assert_eq!(
            f,
            build(0, TailBasis::Monomial, &[(&[], &[2, 1], 1), (&[], &[1, 1, 1], 2)])
        );
        assert_eq!(
            f.convert(TailBasis::Schur),
            build(0, TailBasis::Schur, &[(&[], &[2, 1], 1)])
        );
    }

    #[test]
    fn finite_roundtrip_and_basis_conversion_are_inverse() {
        let seeds = [
            QPolynomial::x_power(&[3]),
            QPolynomial::x_power(&[1, 2]).scale(&rat(2)),
            QPolynomial::x_power(&[0, 1, 1]).add(&QPolynomial::x_power(&[2, 2])),
        ];
        for seed in seeds {
            let g = apply_w(1, 4, &seed, WMethod::XiTower);
            let f = from_finite_polynomial(&g, 4, 1).unwrap();
            assert_eq!(to_finite_polynomial(&f, 4), g);
            assert_eq!(f.convert(TailBasis::Schur).convert(TailBasis::Monomial), f);
        }
    }

    #[test]
    fn pinned_schur_expansions() {
        let cases = [
            (
                "mu=0,1;lambda=2",
                build(
                    2,
                    TailBasis::Schur,
                    &[
                        (&[2, 1][..], &[][..], 1),
                        (&[2], &[1], 1),
                        (&[1, 2], &[], 1),
                        (&[0, 2], &[1], 1),
                        (&[1], &[2], 1),
                        (&[0, 1], &[2], 1),
                        (&[1, 1], &[1], 2),
                    ],
                ),
            ),
            (
                "mu=2;lambda=3,1",
                build(
                    1,
                    TailBasis::Schur,
                    &[(&[3][..], &[2, 1][..], 1), (&[2], &[3, 1], 1)],
                ),
            ),
            (
                "mu=2,1;lambda=1",
                build(2, TailBasis::Schur, &[(&[2, 1][..], &[1][..], 1)]),
            ),
            (
                "mu=1,2;lambda=1",
                build(
                    2,
                    TailBasis::Schur,
                    &[(&[2, 1][..], &[1][..], 1), (&[1, 2], &[1], 1)],
                ),
            ),
            (
                "mu=1;lambda=2,1",
                build(
                    1,
                    TailBasis::Schur,
                    &[(&[2][..], &[1, 1][..], 1), (&[1], &[2, 1], 1)],
                ),
            ),
        ];
        for (s, expected) in cases {
            assert_eq!(almost_schur_by_recursion(&pair(s)).unwrap(), expected, "pair {s}");
        }
    }

    #[test]
    fn pinned_monomial_expansion_of_the_running_pair() {
        let got = almost_schur_by_recursion(&pair("mu=2;lambda=3,1"))
            .unwrap()
            .convert(TailBasis::Monomial);
        let expected = build(
            1,
            TailBasis::Monomial,
            &[
                (&[3][..], &[2, 1][..], 1),
                (&[3], &[1, 1, 1], 2),
                (&[2], &[3, 1], 1),
                (&[2], &[2, 2], 1),
                (&[2], &[2, 1, 1], 2),
                (&[2], &[1, 1, 1, 1], 3),
            ],
        );
        assert_eq!(got, expected);
    }

    #[test]
    fn empty_pair_is_the_constant_one() {
        let expected = build(0, TailBasis::Schur, &[(&[][..], &[][..], 1)]);
        assert_eq!(almost_schur_by_recursion(&pair("mu=;lambda=")).unwrap(), expected);
        assert_eq!(
            almost_schur_by_combinatorics(&pair("mu=;lambda=")),
            expected.convert(TailBasis::Monomial)
        );
    }

    #[test]
    fn empty_head_gives_an_ordinary_schur_function() {
        let got = almost_schur_by_recursion(&pair("mu=;lambda=2,1")).unwrap();
        assert_eq!(got, build(0, TailBasis::Schur, &[(&[][..], &[2, 1][..], 1)]));
    }

    #[test]
    fn empty_tail_gives_the_key_polynomial() {
        let got = almost_schur_by_recursion(&pair("mu=0,1,2;lambda=")).unwrap();
        let key = key_polynomial(&[0, 1, 2]);
        let mut expected = AlmostSymFunction::new(3, TailBasis::Schur);
        for (e, c) in key.terms() {
            expected.add_term(e, Partition::empty(), c.clone());
        }
        assert_eq!(got, expected);
    }

    #[test]
    fn combinatorial_rule_matches_the_recursion_on_small_pairs() {
        for d in 0..=4 {
            for p in enumerate_sigma_pairs(d, 2) {
                let rec = almost_schur_by_recursion(&p).unwrap();
                let comb = almost_schur_by_combinatorics(&p);
                assert_eq!(comb, rec.convert(TailBasis::Monomial), "pair {p}");
                assert_eq!(comb.convert(TailBasis::Schur), rec, "pair {p}");
            }
        }
    }

    #[test]
    fn kostka_counts_for_the_running_pair() {
        let p = pair("mu=2;lambda=3,1");
        assert_eq!(kostka_almost(&p, &[2], &part(&[1, 1, 1, 1])), 3);
        assert_eq!(kostka_almost(&p, &[3], &part(&[1, 1, 1])), 2);
        // degree mismatch
        assert_eq!(kostka_almost(&p, &[3], &part(&[1, 1, 1, 1])), 0);
        // head longer than mu
        assert_eq!(kostka_almost(&p, &[1, 1], &part(&[1, 1, 1, 1])), 0);
        // trailing zeros in the head are immaterial
        assert_eq!(kostka_almost(&p, &[2, 0], &part(&[1, 1, 1, 1])), 3);
    }

    #[test]
    fn kostka_counts_are_the_monomial_coefficients() {
        let p = pair("mu=2;lambda=3,1");
        let comb = almost_schur_by_combinatorics(&p);
        for ((head, tail), c) in comb.terms() {
            assert_eq!(rat(kostka_almost(&p, head, tail) as i64), *c);
        }
        assert_eq!(kostka_almost(&p, &[1], &part(&[3, 2])), 0);
    }

    #[test]
    fn empty_head_kostka_reduces_to_the_classical_count() {
        let p = pair("mu=;lambda=2,1");
        for nu in partitions_of(3) {
            assert_eq!(
                kostka_almost(&p, &[], &nu),
                kostka(&part(&[2, 1]), nu.parts()),
                "nu={nu}"
            );
        }
        assert_eq!(kostka_almost(&p, &[1], &part(&[1, 1])), 0);
    }

    #[test]
    fn truncation_with_no_tail_is_the_macdonald_polynomial() {
        let p = pair("mu=2,0,1;lambda=");
        assert_eq!(
            stable_macdonald_truncation(&p, 3).unwrap(),
            compute_e(&[2, 0, 1])
        );
    }

    #[test]
    fn truncation_specializes_to_the_symmetrized_key() {
        for (s, n) in [("mu=1;lambda=2", 4), ("mu=0,2;lambda=1", 4), ("mu=;lambda=2,1", 3)] {
            let p = pair(s);
            let k = p.mu().len();
            let truncated = stable_macdonald_truncation(&p, n).unwrap();
            let classical = upsilon(&truncated).unwrap();
            let key = key_polynomial(&concat(p.mu(), p.lambda().parts()));
            assert_eq!(classical, apply_w(k, n, &key, WMethod::XiTower), "pair {s}");
        }
    }

    #[test]
    fn truncation_stabilizes_to_the_almost_schur_expansion() {
        for (s, n) in [("mu=1;lambda=2", 4), ("mu=2;lambda=1", 4), ("mu=;lambda=2", 2)] {
            let p = pair(s);
            let truncated = stable_macdonald_truncation(&p, n).unwrap();
            let classical = upsilon(&truncated).unwrap();
            let read = from_finite_polynomial(&classical, n, p.mu().len()).unwrap();
            let expected = almost_schur_by_recursion(&p).unwrap().convert(TailBasis::Monomial);
            assert_eq!(read, expected, "pair {s}");
        }
    }

    #[test]
    fn display_is_pinned_for_the_running_pair() {
        let f = almost_schur_by_recursion(&pair("mu=2;lambda=3,1")).unwrap();
        assert_eq!(f.to_string(), "x1^3*s_(2,1) + x1^2*s_(3,1)");
        let one = almost_schur_by_recursion(&pair("mu=;lambda=")).unwrap();
        assert_eq!(one.to_string(), "1");
    }

    #[test]
    fn json_lists_terms_with_string_coefficients() {
        let p = pair("mu=2;lambda=3,1");
        let f = almost_schur_by_recursion(&p).unwrap();
        let v = f.to_json(Some(&p));
        assert_eq!(v["pair"], "mu=2;lambda=3,1");
        assert_eq!(v["basis"], "schur");
        assert_eq!(v["threshold"], 1);
        assert_eq!(v["terms"][0]["head"], serde_json::json!([3]));
        assert_eq!(v["terms"][0]["tail"], serde_json::json!([2, 1]));
        assert_eq!(v["terms"][0]["coeff"], "1");
        assert_eq!(v["terms"].as_array().unwrap().len(), 2);
    }
}
