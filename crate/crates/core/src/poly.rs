//! Sparse multivariate polynomials over an exact coefficient ring.
//!
//! Exponent keys are trimmed of trailing zeros, so the same element compares
//! equal regardless of how many ambient variables it was built with.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Div, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::qt::QtRational;

pub trait Coefficient:
    Clone + PartialEq + fmt::Debug + Zero + One + Neg<Output = Self> + Sub<Output = Self>
{
}

impl<T> Coefficient for T where
    T: Clone + PartialEq + fmt::Debug + Zero + One + Neg<Output = T> + Sub<Output = T>
{
}

/// Rendering hooks for text output of polynomial terms.
pub trait RenderCoefficient {
    /// Form safe to prefix to "*x1^2...": parenthesized when composite.
    fn render_as_coefficient(&self) -> String;
    fn render_plain(&self) -> String;
}

impl RenderCoefficient for QtRational {
    fn render_as_coefficient(&self) -> String {
        QtRational::render_as_coefficient(self)
    }
    fn render_plain(&self) -> String {
        format!("{self}")
    }
}

impl RenderCoefficient for BigRational {
    fn render_as_coefficient(&self) -> String {
        if self.denom().is_one() && !self.numer().is_negative() {
            self.numer().to_string()
        } else {
            format!("({self})")
        }
    }
    fn render_plain(&self) -> String {
        format!("{self}")
    }
}

fn trim(mut e: Vec<u32>) -> Vec<u32> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

/// Graded lexicographic order: total degree first, then lex on the padded
/// exponent vectors. Total and multiplicative, so leading terms multiply.
pub fn monomial_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&x| x as u64).sum();
    let db: u64 = b.iter().map(|&x| x as u64).sum();
    da.cmp(&db).then_with(|| {
        let n = a.len().max(b.len());
        for i in 0..n {
            let xa = a.get(i).copied().unwrap_or(0);
            let xb = b.get(i).copied().unwrap_or(0);
            match xa.cmp(&xb) {
                Ordering::Equal => continue,
                other => return other,
            }
        }
        Ordering::Equal
    })
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SparsePolynomial<C: Coefficient> {
    terms: BTreeMap<Vec<u32>, C>,
}

impl<C: Coefficient> Default for SparsePolynomial<C> {
    fn default() -> Self {
        SparsePolynomial { terms: BTreeMap::new() }
    }
}

impl<C: Coefficient> SparsePolynomial<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(&[], C::one())
    }

    pub fn monomial(exponents: &[u32], c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(trim(exponents.to_vec()), c);
        }
        SparsePolynomial { terms }
    }

    /// x^gamma with unit coefficient.
    pub fn x_power(gamma: &[u32]) -> Self {
        Self::monomial(gamma, C::one())
    }

    /// The single variable x_i, 1-based.
    pub fn variable(i: usize) -> Self {
        assert!(i >= 1);
        let mut e = vec![0; i];
        e[i - 1] = 1;
        Self::monomial(&e, C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(&[], c)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// 1-based index of the last variable actually appearing; 0 for constants.
    pub fn num_variables(&self) -> usize {
        self.terms.keys().map(|e| e.len()).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &C)> {
        self.terms.iter()
    }

    pub fn coefficient_of(&self, exponents: &[u32]) -> C {
        self.terms
            .get(&trim(exponents.to_vec()))
            .cloned()
            .unwrap_or_else(C::zero)
    }

    fn insert_add(&mut self, key: Vec<u32>, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get().clone() + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert_add(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert_add(k.clone(), C::zero() - c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        SparsePolynomial {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), C::zero() - c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let mut k = vec![0u32; ka.len().max(kb.len())];
                for (i, x) in ka.iter().enumerate() {
                    k[i] += x;
                }
                for (i, x) in kb.iter().enumerate() {
                    k[i] += x;
                }
                out.insert_add(trim(k), ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut out = Self::zero();
        for (k, v) in &self.terms {
            out.insert_add(k.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|x| x == d),
        }
    }

    /// Image under the variable permutation perm (0-based): x_k -> x_{perm[k]}.
    pub fn apply_permutation(&self, perm: &[usize]) -> Self {
        assert!(self.num_variables() <= perm.len(), "permutation too short");
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            let mut e = vec![0u32; perm.len()];
            for (i, &x) in k.iter().enumerate() {
                e[perm[i]] += x;
            }
            out.insert_add(trim(e), c.clone());
        }
        out
    }

    /// The simple transposition s_i swapping x_i and x_{i+1}, 1-based.
    pub fn apply_transposition(&self, i: usize) -> Self {
        assert!(i >= 1);
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            let mut e = k.clone();
            if e.len() < i + 1 {
                e.resize(i + 1, 0);
            }
            e.swap(i - 1, i);
            out.insert_add(trim(e), c.clone());
        }
        out
    }

    /// Substitute x_j = 0 for all j > k (1-based count of surviving variables).
    pub fn truncate_variables(&self, k: usize) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            if e.len() <= k {
                out.insert_add(e.clone(), c.clone());
            }
        }
        out
    }

    pub fn is_symmetric_in_adjacent(&self, i: usize) -> bool {
        self.apply_transposition(i) == *self
    }

    /// Symmetric under every s_i with a <= i < b (1-based variables a..=b).
    pub fn is_symmetric_in_range(&self, a: usize, b: usize) -> bool {
        (a..b).all(|i| self.is_symmetric_in_adjacent(i))
    }

    pub fn map_coefficients<D: Coefficient>(
        &self,
        mut f: impl FnMut(&C) -> D,
    ) -> SparsePolynomial<D> {
        let mut out = SparsePolynomial::zero();
        for (k, c) in &self.terms {
            out.insert_add(k.clone(), f(c));
        }
        out
    }

    pub fn try_map_coefficients<D: Coefficient, E>(
        &self,
        mut f: impl FnMut(&C) -> Result<D, E>,
    ) -> Result<SparsePolynomial<D>, E> {
        let mut out = SparsePolynomial::zero();
        for (k, c) in &self.terms {
            out.insert_add(k.clone(), f(c)?);
        }
        Ok(out)
    }

    /// Largest exponent on any variable x_j with j > k (1-based cutoff).
    pub fn max_exponent_beyond(&self, k: usize) -> u32 {
        self.terms
            .keys()
            .flat_map(|e| e.iter().skip(k))
            .copied()
            .max()
            .unwrap_or(0)
    }

    fn leading(&self) -> Option<(&Vec<u32>, &C)> {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| monomial_cmp(a, b))
    }

    /// Terms in display order: total degree descending, then exponent
    /// vectors lexicographically ascending.
    pub fn sorted_terms(&self) -> Vec<(Vec<u32>, C)> {
        let mut v: Vec<(Vec<u32>, C)> =
            self.terms.iter().map(|(k, c)| (k.clone(), c.clone())).collect();
        v.sort_by(|(a, _), (b, _)| {
            let da: u64 = a.iter().map(|&x| x as u64).sum();
            let db: u64 = b.iter().map(|&x| x as u64).sum();
            db.cmp(&da).then_with(|| {
                let n = a.len().max(b.len());
                for i in 0..n {
                    let xa = a.get(i).copied().unwrap_or(0);
                    let xb = b.get(i).copied().unwrap_or(0);
                    match xa.cmp(&xb) {
                        Ordering::Equal => continue,
                        other => return other,
                    }
                }
                Ordering::Equal
            })
        });
        v
    }
}

impl<C: Coefficient> SparsePolynomial<C> {
    /// Exact quotient by x_i - x_{i+1} in a single pass. Terms sharing the
    /// exponents away from positions i, i+1 and the total degree m on them
    /// form one group; the quotient coefficients are the negated prefix sums
    /// of the group read by ascending x_i exponent, and divisibility is each
    /// group's full sum vanishing.
    pub fn exact_div_adjacent_diff(&self, i: usize) -> Option<Self> {
        assert!(i >= 1, "variable index is 1-based");
        let mut groups: BTreeMap<Vec<u32>, BTreeMap<u32, C>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let a = e.get(i - 1).copied().unwrap_or(0);
            let b = e.get(i).copied().unwrap_or(0);
            if a + b == 0 {
                // x_i-free and x_{i+1}-free terms are never exact multiples.
                return None;
            }
            let mut profile = e.clone();
            profile.resize(profile.len().max(i + 1), 0);
            profile[i - 1] = 0;
            profile[i] = a + b;
            groups.entry(profile).or_default().insert(a, c.clone());
        }
        let mut out = Self::zero();
        for (profile, row) in groups {
            let m = profile[i];
            let mut acc = C::zero();
            for a in 0..m {
                acc = acc + row.get(&a).cloned().unwrap_or_else(C::zero);
                let d = C::zero() - acc.clone();
                if !d.is_zero() {
                    let mut e = profile.clone();
                    e[i - 1] = a;
                    e[i] = m - 1 - a;
                    out.insert_add(trim(e), d);
                }
            }
            let last = row.get(&m).cloned().unwrap_or_else(C::zero);
            if !(acc + last).is_zero() {
                return None;
            }
        }
        Some(out)
    }
}

impl<C: Coefficient + Div<Output = C>> SparsePolynomial<C> {
    /// Exact division over a coefficient field; None when not an exact
    /// multiple. Leading-term elimination in the graded lex order: for exact
    /// multiples the leading monomials divide at every step.
    pub fn exact_div(&self, g: &Self) -> Option<Self> {
        assert!(!g.is_zero(), "division by zero polynomial");
        let (glead, gc) = {
            let (k, c) = g.leading().unwrap();
            (k.clone(), c.clone())
        };
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while !rem.is_zero() {
            let (rlead, rc) = {
                let (k, c) = rem.leading().unwrap();
                (k.clone(), c.clone())
            };
            if rlead.len() < glead.len() {
                return None;
            }
            let mut d = rlead.clone();
            for (i, &x) in glead.iter().enumerate() {
                d[i] = d[i].checked_sub(x)?;
            }
            let dc = rc / gc.clone();
            let piece = Self::monomial(&trim(d), dc);
            quot = quot.add(&piece);
            rem = rem.sub(&g.mul(&piece));
        }
        Some(quot)
    }
}

pub fn render_monomial(exponents: &[u32]) -> String {
    let parts: Vec<String> = exponents
        .iter()
        .enumerate()
        .filter(|&(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                format!("x{}", i + 1)
            } else {
                format!("x{}^{}", i + 1, e)
            }
        })
        .collect();
    parts.join("*")
}

impl<C: Coefficient + RenderCoefficient> fmt::Display for SparsePolynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut pieces = Vec::new();
        for (e, c) in self.sorted_terms() {
            let mono = render_monomial(&e);
            if mono.is_empty() {
                pieces.push(c.render_plain());
            } else if c.is_one() {
                pieces.push(mono);
            } else {
                pieces.push(format!("{}*{}", c.render_as_coefficient(), mono));
            }
        }
        write!(f, "{}", pieces.join(" + "))
    }
}

impl<C: Coefficient + RenderCoefficient> SparsePolynomial<C> {
    /// JSON form: list of {"exponents": {"i": e, ...}, "coeff": "..."} with
    /// 1-based variable indices, terms in display order.
    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .sorted_terms()
            .into_iter()
            .map(|(e, c)| {
                let mut exps = serde_json::Map::new();
                for (i, &x) in e.iter().enumerate() {
                    if x > 0 {
                        exps.insert((i + 1).to_string(), serde_json::json!(x));
                    }
                }
                serde_json::json!({
                    "exponents": serde_json::Value::Object(exps),
                    "coeff": c.render_plain(),
                })
            })
            .collect();
        serde_json::Value::Array(terms)
    }
}

impl SparsePolynomial<BigRational> {
    pub fn from_json(v: &serde_json::Value) -> Result<Self, String> {
        let arr = v.as_array().ok_or("polynomial JSON must be an array")?;
        let mut out = Self::zero();
        for item in arr {
            let obj = item.as_object().ok_or("term must be an object")?;
            let exps = obj
                .get("exponents")
                .and_then(|e| e.as_object())
                .ok_or("term missing exponents object")?;
            let mut e: Vec<u32> = Vec::new();
            for (k, val) in exps {
                let idx: usize = k.parse().map_err(|_| format!("bad variable index {k}"))?;
                if idx == 0 {
                    return Err("variable indices are 1-based".into());
                }
                let power = val
                    .as_u64()
                    .ok_or_else(|| format!("bad exponent for x{idx}"))?;
                if e.len() < idx {
                    e.resize(idx, 0);
                }
                e[idx - 1] = power as u32;
            }
            let coeff_str = obj
                .get("coeff")
                .and_then(|c| c.as_str())
                .ok_or("term missing coeff string")?;
            let c: BigRational = coeff_str
                .parse()
                .map_err(|_| format!("bad coefficient {coeff_str}"))?;
            out.insert_add(trim(e), c);
        }
        Ok(out)
    }
}

/// Integer-coefficient view: convert when every coefficient is integral.
pub fn to_integer_coefficients(
    p: &SparsePolynomial<BigRational>,
) -> Option<Vec<(Vec<u32>, BigInt)>> {
    let mut out = Vec::new();
    for (e, c) in p.sorted_terms() {
        if !c.denom().is_one() {
            return None;
        }
        out.push((e, c.numer().clone()));
    }
    Some(out)
}

pub type QPolynomial = SparsePolynomial<BigRational>;
pub type QtPolynomial = SparsePolynomial<QtRational>;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qt::hhl_factor;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn br(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn random_poly(rng: &mut StdRng, vars: usize, max_deg: u32) -> QPolynomial {
        let mut p = QPolynomial::zero();
        for _ in 0..rng.gen_range(0..=6) {
            let e: Vec<u32> = (0..vars).map(|_| rng.gen_range(0..=max_deg)).collect();
            p = p.add(&QPolynomial::monomial(&e, br(rng.gen_range(-4i64..=4))));
        }
        p
    }

    // Dense convolution oracle for products in <=3 variables.
    fn dense_mul(a: &QPolynomial, b: &QPolynomial) -> QPolynomial {
        let n = 3;
        let bound = 32usize;
        let idx = |e: &[u32]| -> usize {
            (0..n).fold(0usize, |acc, i| {
                acc * bound + e.get(i).copied().unwrap_or(0) as usize
            })
        };
        let mut dense = vec![BigRational::zero(); bound * bound * bound];
        for (ea, ca) in a.terms() {
            for (eb, cb) in b.terms() {
                let e: Vec<u32> = (0..n)
                    .map(|i| {
                        ea.get(i).copied().unwrap_or(0) + eb.get(i).copied().unwrap_or(0)
                    })
                    .collect();
                dense[idx(&e)] += ca.clone() * cb.clone();
            }
        }
        let mut out = QPolynomial::zero();
        for (i, c) in dense.iter().enumerate() {
            if !c.is_zero() {
                let e = vec![
                    (i / (bound * bound)) as u32,
                    ((i / bound) % bound) as u32,
                    (i % bound) as u32,
                ];
                out = out.add(&QPolynomial::monomial(&e, c.clone()));
            }
        }
        out
    }

    #[test]
    fn mul_matches_dense_convolution() {
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..40 {
            let a = random_poly(&mut rng, 3, 4);
            let b = random_poly(&mut rng, 3, 4);
            assert_eq!(a.mul(&b), dense_mul(&a, &b));
        }
    }

    #[test]
    fn ring_laws() {
        let mut rng = StdRng::seed_from_u64(9);
        for _ in 0..25 {
            let a = random_poly(&mut rng, 3, 3);
            let b = random_poly(&mut rng, 3, 3);
            let c = random_poly(&mut rng, 3, 3);
            assert_eq!(a.add(&b), b.add(&a));
            assert_eq!(a.mul(&b), b.mul(&a));
            assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            assert!(a.sub(&a).is_zero());
            assert_eq!(a.mul(&QPolynomial::one()), a);
        }
    }

    #[test]
    fn transpositions_are_ring_involutions() {
        let mut rng = StdRng::seed_from_u64(21);
        for _ in 0..20 {
            let a = random_poly(&mut rng, 3, 3);
            let b = random_poly(&mut rng, 3, 3);
            for i in 1..=2 {
                assert_eq!(a.apply_transposition(i).apply_transposition(i), a);
                assert_eq!(
                    a.mul(&b).apply_transposition(i),
                    a.apply_transposition(i).mul(&b.apply_transposition(i))
                );
            }
            // Braid relation s1 s2 s1 = s2 s1 s2.
            let lhs = a
                .apply_transposition(1)
                .apply_transposition(2)
                .apply_transposition(1);
            let rhs = a
                .apply_transposition(2)
                .apply_transposition(1)
                .apply_transposition(2);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn permutation_matches_composed_transpositions() {
        let p = QPolynomial::monomial(&[3, 1, 2], br(1));
        // Cycle x1->x2->x3->x1 is s1*s2; substitution composes right to left,
        // so the s2 swap goes on first.
        let perm = vec![1usize, 2, 0];
        let via_perm = p.apply_permutation(&perm);
        let via_swaps = p.apply_transposition(2).apply_transposition(1);
        assert_eq!(via_perm, via_swaps);
    }

    #[test]
    fn exact_division_roundtrip() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..30 {
            let a = random_poly(&mut rng, 3, 3);
            let mut b = random_poly(&mut rng, 3, 3);
            if b.is_zero() {
                b = QPolynomial::one();
            }
            let prod = a.mul(&b);
            assert_eq!(prod.exact_div(&b), Some(a.clone()));
        }
        // Non-multiple detected.
        let x1 = QPolynomial::variable(1);
        let x2 = QPolynomial::variable(2);
        assert_eq!(x1.add(&QPolynomial::one()).exact_div(&x2), None);
    }

    #[test]
    fn antisymmetric_part_divisible_by_root_difference() {
        let mut rng = StdRng::seed_from_u64(13);
        let x1 = QPolynomial::variable(1);
        let x2 = QPolynomial::variable(2);
        let diff = x1.sub(&x2);
        for _ in 0..20 {
            let f = random_poly(&mut rng, 3, 3);
            let anti = f.sub(&f.apply_transposition(1));
            let q = anti.exact_div(&diff).expect("divisible");
            assert_eq!(q.mul(&diff), anti);
        }
    }

    #[test]
    fn truncation_is_a_ring_map() {
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..20 {
            let a = random_poly(&mut rng, 3, 2);
            let b = random_poly(&mut rng, 3, 2);
            for k in 0..=3 {
                assert_eq!(
                    a.mul(&b).truncate_variables(k),
                    a.truncate_variables(k).mul(&b.truncate_variables(k))
                );
            }
        }
    }

    #[test]
    fn display_order_and_forms() {
        let p = QPolynomial::monomial(&[3, 2, 1], br(1));
        assert_eq!(format!("{p}"), "x1^3*x2^2*x3");

        let e01: QtPolynomial = SparsePolynomial::monomial(&[0, 1], QtRational::from_int(1))
            .add(&SparsePolynomial::monomial(&[1], hhl_factor(1, 1)));
        assert_eq!(format!("{e01}"), "x2 + ((1 - t)/(1 - q*t))*x1");

        let one = QPolynomial::one();
        assert_eq!(format!("{one}"), "1");
        assert_eq!(format!("{}", QPolynomial::zero()), "0");

        let mixed = QPolynomial::monomial(&[2], br(2)).add(&QPolynomial::monomial(&[0, 0, 2], br(1)));
        // Same degree: lex ascending puts x3^2 first.
        assert_eq!(format!("{mixed}"), "x3^2 + 2*x1^2");
    }

    #[test]
    fn symmetry_detection() {
        let x1 = QPolynomial::variable(1);
        let x2 = QPolynomial::variable(2);
        let x3 = QPolynomial::variable(3);
        let sym = x1.mul(&x2).add(&x1.mul(&x3)).add(&x2.mul(&x3));
        assert!(sym.is_symmetric_in_range(1, 3));
        let partial = x1.add(&x2);
        assert!(partial.is_symmetric_in_range(1, 2));
        assert!(!partial.is_symmetric_in_range(1, 3));
    }

    #[test]
    fn json_roundtrip() {
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..15 {
            let p = random_poly(&mut rng, 3, 3);
            let v = p.to_json();
            let back = SparsePolynomial::from_json(&v).unwrap();
            assert_eq!(p, back);
        }
    }

    #[test]
    fn max_exponent_beyond_cutoff() {
        let p = QPolynomial::monomial(&[5, 0, 3, 2], br(1))
            .add(&QPolynomial::monomial(&[0, 7], br(1)));
        assert_eq!(p.max_exponent_beyond(0), 7);
        assert_eq!(p.max_exponent_beyond(1), 7);
        assert_eq!(p.max_exponent_beyond(2), 3);
        assert_eq!(p.max_exponent_beyond(4), 0);
    }
}
