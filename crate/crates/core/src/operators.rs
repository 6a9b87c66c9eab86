//! The operator toolkit: Hecke operators T_i, partial Hecke symmetrizers,
//! isobaric divided differences, partial Weyl symmetrizers, and the
//! coefficientwise q=t=0 specialization.

use std::ops::{Add, Div, Mul, Neg, Sub};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::poly::{render_monomial, Coefficient, QPolynomial, QtPolynomial, SparsePolynomial};
use crate::qt::{qt_gcd, QtPoly, QtRational};

/// Largest symmetrization block (n-k) accepted without an explicit override.
pub const DEFAULT_BLOCK_LIMIT: usize = 7;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OperatorError {
    #[error("symmetrization block of size {block} exceeds the cost limit {limit}")]
    BlockTooLarge { block: usize, limit: usize },
    #[error("invalid symmetrization range k={k}, n={n} for a polynomial in {vars} variables")]
    InvalidRange { k: usize, n: usize, vars: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UpsilonError {
    #[error("pole at t=0 in the coefficient of {monomial}")]
    PoleAtT0 { monomial: String },
    #[error("pole at q=0 in the coefficient of {monomial}")]
    PoleAtQ0 { monomial: String },
}

/// T_i(f) = s_i(f) + (1-t) x_i (f - s_i(f))/(x_i - x_{i+1}).
pub fn apply_ti(i: usize, p: &QtPolynomial) -> QtPolynomial {
    ti_generic(i, p, &QtRational::one_minus_t())
}

/// Same rule over any coefficient ring containing 1-t. The divided difference
/// never divides coefficients, so Z[q,t] itself qualifies.
fn ti_generic<C>(i: usize, p: &SparsePolynomial<C>, one_minus_t: &C) -> SparsePolynomial<C>
where
    C: Coefficient,
{
    assert!(i >= 1, "generator index is 1-based");
    let swapped = p.apply_transposition(i);
    let diff = p.sub(&swapped);
    if diff.is_zero() {
        return swapped;
    }
    let quotient = diff
        .exact_div_adjacent_diff(i)
        .expect("f - s_i(f) is divisible by x_i - x_{i+1}");
    let correction = SparsePolynomial::variable(i)
        .mul(&quotient)
        .scale(one_minus_t);
    swapped.add(&correction)
}

/// xi_i(f) = (x_i f - x_{i+1} s_i(f))/(x_i - x_{i+1}). Idempotent and
/// satisfies the 0-Hecke braid relations; works over any coefficient ring.
pub fn apply_xi<C>(i: usize, p: &SparsePolynomial<C>) -> SparsePolynomial<C>
where
    C: Coefficient,
{
    assert!(i >= 1, "generator index is 1-based");
    let numerator = SparsePolynomial::variable(i)
        .mul(p)
        .sub(&SparsePolynomial::variable(i + 1).mul(&p.apply_transposition(i)));
    if numerator.is_zero() {
        return SparsePolynomial::zero();
    }
    numerator
        .exact_div_adjacent_diff(i)
        .expect("x_i f - x_{i+1} s_i(f) is divisible by x_i - x_{i+1}")
}

/// Z[q,t] viewed as a coefficient ring for the cleared ladder; division is
/// exact division and panics otherwise.
#[derive(Clone, PartialEq, Debug)]
struct IntCoeff(QtPoly);

impl Zero for IntCoeff {
    fn zero() -> Self {
        IntCoeff(QtPoly::zero())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for IntCoeff {
    fn one() -> Self {
        IntCoeff(QtPoly::one())
    }
}

impl Add for IntCoeff {
    type Output = IntCoeff;
    fn add(self, rhs: Self) -> Self {
        IntCoeff(self.0.add(&rhs.0))
    }
}

impl Sub for IntCoeff {
    type Output = IntCoeff;
    fn sub(self, rhs: Self) -> Self {
        IntCoeff(self.0.sub(&rhs.0))
    }
}

impl Mul for IntCoeff {
    type Output = IntCoeff;
    fn mul(self, rhs: Self) -> Self {
        IntCoeff(self.0.mul(&rhs.0))
    }
}

impl Div for IntCoeff {
    type Output = IntCoeff;
    fn div(self, rhs: Self) -> Self {
        IntCoeff(self.0.exact_div(&rhs.0).expect("inexact polynomial division"))
    }
}

impl Neg for IntCoeff {
    type Output = IntCoeff;
    fn neg(self) -> Self {
        IntCoeff(self.0.neg())
    }
}

fn t_power(e: usize) -> IntCoeff {
    IntCoeff(QtPoly::monomial(0, e as u32, BigInt::one()))
}

/// Shared denominator D and integer-coefficient N with p = N/D. D is the
/// least common multiple of the coefficient denominators; anything larger
/// inflates every ladder multiplication. One cofactor per distinct
/// denominator, computed once.
fn clear_denominators(p: &QtPolynomial) -> (SparsePolynomial<IntCoeff>, QtPoly) {
    let mut distinct: Vec<QtPoly> = Vec::new();
    for (_, c) in p.terms() {
        if !distinct.contains(c.denominator()) {
            distinct.push(c.denominator().clone());
        }
    }
    let mut lcm = QtPoly::one();
    for d in &distinct {
        let g = qt_gcd(&lcm, d);
        lcm = lcm.mul(&d.exact_div(&g).expect("gcd divides"));
    }
    let cofactors: Vec<QtPoly> = distinct
        .iter()
        .map(|d| lcm.exact_div(d).expect("lcm is a common multiple"))
        .collect();
    let cleared = p.map_coefficients(|c| {
        let i = distinct.iter().position(|d| d == c.denominator()).unwrap();
        IntCoeff(c.numerator().mul(&cofactors[i]))
    });
    (cleared, lcm)
}

/// The normalized Hecke symmetrizer over x_{k+1},...,x_n:
///
///   (1/[m]_t!) sum over the block subgroup of t^(C(m,2) - l(sigma)) T_sigma,
///   m = n - k.
///
/// Evaluated through the coset ladder: growing the block one generator at a
/// time, each step applies D_b(f) = sum_{j=k+1}^{b+1} t^(j-k-1) T_j...T_b(f),
/// whose terms share the suffix chain w_j = T_j(w_{j+1}). Total cost is
/// C(m,2) applications of T rather than m! of them. The ladder itself never
/// introduces denominators, so it runs over cleared integer coefficients and
/// each output term is reduced exactly once.
pub fn apply_epsilon(k: usize, n: usize, p: &QtPolynomial) -> Result<QtPolynomial, OperatorError> {
    apply_epsilon_with_limit(k, n, p, DEFAULT_BLOCK_LIMIT)
}

pub fn apply_epsilon_with_limit(
    k: usize,
    n: usize,
    p: &QtPolynomial,
    limit: usize,
) -> Result<QtPolynomial, OperatorError> {
    if k > n || p.num_variables() > n {
        return Err(OperatorError::InvalidRange { k, n, vars: p.num_variables() });
    }
    let m = n - k;
    if m > limit {
        return Err(OperatorError::BlockTooLarge { block: m, limit });
    }
    let (mut sym, shared_den) = clear_denominators(p);
    let one_minus_t = IntCoeff(QtPoly::one().sub(&QtPoly::t()));
    for b in (k + 1)..n {
        let mut chain = sym.clone();
        let mut acc = chain.scale(&t_power(b - k));
        for j in ((k + 1)..=b).rev() {
            chain = ti_generic(j, &chain, &one_minus_t);
            acc = acc.add(&chain.scale(&t_power(j - k - 1)));
        }
        sym = acc;
    }
    let den = shared_den.mul(&QtPoly::t_factorial(m as u32));
    Ok(sym.map_coefficients(|c| QtRational::new(c.0.clone(), den.clone())))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum WMethod {
    SumFormula,
    XiTower,
}

fn block_permutations(k: usize, n: usize) -> Vec<Vec<usize>> {
    // Full 0-based image vectors, identity below position k.
    (k..n)
        .permutations(n - k)
        .map(|block| {
            let mut perm: Vec<usize> = (0..k).collect();
            perm.extend(block);
            perm
        })
        .collect()
}

fn inversions(images: &[usize]) -> usize {
    let mut count = 0;
    for a in 0..images.len() {
        for b in (a + 1)..images.len() {
            if images[a] > images[b] {
                count += 1;
            }
        }
    }
    count
}

/// Weyl symmetrization over x_{k+1},...,x_n. SumFormula computes the
/// alternant sum of sigma(x^delta f) divided by the block Vandermonde;
/// XiTower unfolds the recursion W_k = xi_{n-1}...xi_{k+1} W_{k+1}.
pub fn apply_w<C>(
    k: usize,
    n: usize,
    p: &SparsePolynomial<C>,
    method: WMethod,
) -> SparsePolynomial<C>
where
    C: Coefficient + Div<Output = C>,
{
    assert!(k <= n, "need k <= n");
    assert!(p.num_variables() <= n, "polynomial uses variables beyond x_n");
    match method {
        WMethod::XiTower => {
            let mut g = p.clone();
            for kk in (k..n).rev() {
                for i in (kk + 1)..n {
                    g = apply_xi(i, &g);
                }
            }
            g
        }
        WMethod::SumFormula => {
            let delta: Vec<u32> = (0..n)
                .map(|j| if j < k { 0 } else { (n - 1 - j) as u32 })
                .collect();
            let shifted = p.mul(&SparsePolynomial::x_power(&delta));
            let mut numerator = SparsePolynomial::zero();
            for perm in block_permutations(k, n) {
                let term = shifted.apply_permutation(&perm);
                if inversions(&perm[k..]).is_multiple_of(2) {
                    numerator = numerator.add(&term);
                } else {
                    numerator = numerator.sub(&term);
                }
            }
            if numerator.is_zero() {
                return SparsePolynomial::zero();
            }
            let mut vandermonde = SparsePolynomial::one();
            for i in (k + 1)..=n {
                for j in (i + 1)..=n {
                    let factor =
                        SparsePolynomial::variable(i).sub(&SparsePolynomial::variable(j));
                    vandermonde = vandermonde.mul(&factor);
                }
            }
            numerator
                .exact_div(&vandermonde)
                .expect("alternant is divisible by the block Vandermonde")
        }
    }
}

/// Coefficientwise limit t->0 followed by q->0, dropping vanishing terms.
pub fn upsilon(p: &QtPolynomial) -> Result<QPolynomial, UpsilonError> {
    let mut out = QPolynomial::zero();
    for (exps, c) in p.terms() {
        let name = || {
            if exps.is_empty() {
                "the constant term".to_string()
            } else {
                render_monomial(exps)
            }
        };
        let at_t0 = c
            .limit_t0()
            .map_err(|_| UpsilonError::PoleAtT0 { monomial: name() })?;
        let value = at_t0
            .limit_q0()
            .map_err(|_| UpsilonError::PoleAtQ0 { monomial: name() })?;
        if value.is_zero() {
            continue;
        }
        let rational = value.as_rational().expect("both parameters specialized");
        out = out.add(&QPolynomial::monomial(exps, rational));
    }
    Ok(out)
}
