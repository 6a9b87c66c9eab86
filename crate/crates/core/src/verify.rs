//! Property suites behind the verify command. Each suite is a list of named
//! checks; a check sweeps its whole input range and reports the first
//! failure it finds.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::almost::{
    almost_schur_by_combinatorics, almost_schur_by_recursion, from_finite_polynomial,
    key_polynomial, stable_macdonald_truncation_with_limit, AlmostSymFunction, TailBasis,
};
use crate::combinatorics::{enumerate_sigma_pairs, kostka, partitions_of, size};
use crate::filling::{compute_e, enumerate_key_fillings, enumerate_non_attacking_fillings};
use crate::operators::{
    apply_epsilon, apply_ti, apply_w, apply_xi, upsilon, OperatorError, WMethod,
    DEFAULT_BLOCK_LIMIT,
};
use crate::poly::{QPolynomial, QtPolynomial};
use crate::qt::{QtPoly, QtRational};

pub struct CheckResult {
    pub name: String,
    pub outcome: Result<(), String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.outcome.is_ok()
    }
}

pub type Check = (String, Box<dyn Fn() -> Result<(), String> + Send + Sync>);

pub fn run_checks(checks: Vec<Check>) -> Vec<CheckResult> {
    checks
        .into_iter()
        .map(|(name, run)| CheckResult { name, outcome: run() })
        .collect()
}

/// Look up a suite by its command-line name. `degree` falls back to the
/// suite's full acceptance range when absent.
pub fn suite(name: &str, degree: Option<u32>, seed: u64) -> Option<Vec<Check>> {
    suite_with_limit(name, degree, seed, DEFAULT_BLOCK_LIMIT)
}

/// As `suite`, with an explicit symmetrization block limit for the checks
/// that truncate through the partial Hecke symmetrizers.
pub fn suite_with_limit(
    name: &str,
    degree: Option<u32>,
    seed: u64,
    limit: usize,
) -> Option<Vec<Check>> {
    match name {
        "relations" => Some(relations_suite(degree.unwrap_or(4), seed)),
        "specialization" => Some(specialization_suite(degree.unwrap_or(5))),
        "positivity" => Some(positivity_suite(degree.unwrap_or(6))),
        "stability" => Some(stability_suite_with_limit(degree.unwrap_or(6), limit)),
        _ => None,
    }
}

fn check<F>(name: &str, f: F) -> Check
where
    F: Fn() -> Result<(), String> + Send + Sync + 'static,
{
    (name.to_string(), Box::new(f))
}

const INSTANCES: usize = 100;

fn rng_for(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(salt.wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

fn random_exponents(rng: &mut ChaCha8Rng, vars: usize, degree: u32) -> Vec<u32> {
    let mut left = degree;
    let mut exps = vec![0u32; vars];
    for e in exps.iter_mut() {
        *e = rng.gen_range(0..=left.min(2));
        left -= *e;
    }
    exps
}

fn random_qt_poly(rng: &mut ChaCha8Rng, vars: usize, degree: u32) -> QtPolynomial {
    let mut p = QtPolynomial::zero();
    for _ in 0..5 {
        let exps = random_exponents(rng, vars, degree);
        let c: i64 = rng.gen_range(-3..=3);
        if c == 0 {
            continue;
        }
        let qe = rng.gen_range(0..=1u32);
        let te = rng.gen_range(0..=1u32);
        let coeff = QtRational::from_poly(QtPoly::monomial(qe, te, c.into()));
        p = p.add(&QtPolynomial::monomial(&exps, coeff));
    }
    p
}

fn random_q_poly(rng: &mut ChaCha8Rng, vars: usize, degree: u32) -> QPolynomial {
    let mut p = QPolynomial::zero();
    for _ in 0..5 {
        let exps = random_exponents(rng, vars, degree);
        let c: i64 = rng.gen_range(-3..=3);
        if c == 0 {
            continue;
        }
        p = p.add(&QPolynomial::monomial(&exps, BigRational::from_integer(c.into())));
    }
    p
}

/// Exponent vectors of length up to max_length (trailing zeros distinct)
/// with total at most degree.
fn all_shapes(degree: u32, max_length: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_length {
        let mut next = Vec::new();
        for c in &frontier {
            let used: u32 = c.iter().sum();
            for p in 0..=(degree - used) {
                let mut e = c.clone();
                e.push(p);
                next.push(e);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn sweep_pairs(degree: u32, max_mu_length: usize) -> Vec<crate::combinatorics::SigmaPair> {
    (0..=degree)
        .flat_map(|d| enumerate_sigma_pairs(d, max_mu_length))
        .collect()
}

// ---------------------------------------------------------------------------
// relations: randomized operator identities.
// ---------------------------------------------------------------------------

pub fn relations_suite(degree: u32, seed: u64) -> Vec<Check> {
    let d = degree;
    vec![
        check("hecke-quadratic", move || {
            let mut rng = rng_for(seed, 1);
            for inst in 0..INSTANCES {
                let n = rng.gen_range(2..=4);
                let f = random_qt_poly(&mut rng, n, d);
                let i = rng.gen_range(1..n);
                let tf = apply_ti(i, &f);
                let lhs = apply_ti(i, &tf);
                let rhs = tf
                    .scale(&QtRational::one_minus_t())
                    .add(&f.scale(&QtRational::t()));
                if lhs != rhs {
                    return Err(format!("instance {inst}: T{i}^2 != (1-t)T{i} + t"));
                }
            }
            Ok(())
        }),
        check("hecke-braid", move || {
            let mut rng = rng_for(seed, 2);
            for inst in 0..INSTANCES {
                let n = rng.gen_range(3..=4);
                let f = random_qt_poly(&mut rng, n, d);
                let i = rng.gen_range(1..n - 1);
                let lhs = apply_ti(i, &apply_ti(i + 1, &apply_ti(i, &f)));
                let rhs = apply_ti(i + 1, &apply_ti(i, &apply_ti(i + 1, &f)));
                if lhs != rhs {
                    return Err(format!("instance {inst}: braid fails at i={i}"));
                }
            }
            Ok(())
        }),
        check("hecke-commutation", move || {
            let mut rng = rng_for(seed, 3);
            for inst in 0..INSTANCES {
                let f = random_qt_poly(&mut rng, 4, d);
                let lhs = apply_ti(1, &apply_ti(3, &f));
                let rhs = apply_ti(3, &apply_ti(1, &f));
                if lhs != rhs {
                    return Err(format!("instance {inst}: T1 T3 != T3 T1"));
                }
            }
            Ok(())
        }),
        check("zero-hecke-idempotent", move || {
            let mut rng = rng_for(seed, 4);
            for inst in 0..INSTANCES {
                let n = rng.gen_range(2..=4);
                let f = random_q_poly(&mut rng, n, d);
                let i = rng.gen_range(1..n);
                let xf = apply_xi(i, &f);
                if apply_xi(i, &xf) != xf {
                    return Err(format!("instance {inst}: xi{i}^2 != xi{i}"));
                }
            }
            Ok(())
        }),
        check("zero-hecke-braid", move || {
            let mut rng = rng_for(seed, 5);
            for inst in 0..INSTANCES {
                let n = rng.gen_range(3..=4);
                let f = random_q_poly(&mut rng, n, d);
                let i = rng.gen_range(1..n - 1);
                let lhs = apply_xi(i, &apply_xi(i + 1, &apply_xi(i, &f)));
                let rhs = apply_xi(i + 1, &apply_xi(i, &apply_xi(i + 1, &f)));
                if lhs != rhs {
                    return Err(format!("instance {inst}: braid fails at i={i}"));
                }
                if n == 4 {
                    let lhs = apply_xi(1, &apply_xi(3, &f));
                    let rhs = apply_xi(3, &apply_xi(1, &f));
                    if lhs != rhs {
                        return Err(format!("instance {inst}: xi1 xi3 != xi3 xi1"));
                    }
                }
            }
            Ok(())
        }),
        check("epsilon-idempotent", move || {
            let mut rng = rng_for(seed, 6);
            for inst in 0..INSTANCES {
                let n = rng.gen_range(2..=4);
                let k = rng.gen_range(0..=n - 2);
                let f = random_qt_poly(&mut rng, n, d);
                let e = apply_epsilon(k, n, &f).map_err(|e| e.to_string())?;
                let ee = apply_epsilon(k, n, &e).map_err(|e| e.to_string())?;
                if ee != e {
                    return Err(format!("instance {inst}: epsilon_{k} not idempotent at n={n}"));
                }
            }
            Ok(())
        }),
        check("epsilon-absorption", move || {
            let mut rng = rng_for(seed, 7);
            for inst in 0..INSTANCES {
                let n = rng.gen_range(2..=4);
                let k = rng.gen_range(0..=n - 2);
                let i = rng.gen_range(k + 1..n);
                let f = random_qt_poly(&mut rng, n, d);
                let e = apply_epsilon(k, n, &f).map_err(|e| e.to_string())?;
                if apply_ti(i, &e) != e {
                    return Err(format!("instance {inst}: T{i} does not fix the image"));
                }
                let ef = apply_epsilon(k, n, &apply_ti(i, &f)).map_err(|e| e.to_string())?;
                if ef != e {
                    return Err(format!("instance {inst}: epsilon_{k} T{i} != epsilon_{k}"));
                }
            }
            Ok(())
        }),
        check("w-idempotent", move || {
            let mut rng = rng_for(seed, 8);
            for inst in 0..INSTANCES {
                let n = rng.gen_range(2..=4);
                let k = rng.gen_range(0..=n - 2);
                let f = random_q_poly(&mut rng, n, d);
                let w = apply_w(k, n, &f, WMethod::XiTower);
                if apply_w(k, n, &w, WMethod::XiTower) != w {
                    return Err(format!("instance {inst}: W_{k} not idempotent at n={n}"));
                }
            }
            Ok(())
        }),
        check("w-absorption", move || {
            let mut rng = rng_for(seed, 9);
            for inst in 0..INSTANCES {
                let n = rng.gen_range(2..=4);
                let k = rng.gen_range(0..=n - 2);
                let i = rng.gen_range(k + 1..n);
                let f = random_q_poly(&mut rng, n, d);
                let w = apply_w(k, n, &f, WMethod::XiTower);
                if apply_xi(i, &w) != w {
                    return Err(format!("instance {inst}: xi{i} does not fix the image"));
                }
                if apply_w(k, n, &apply_xi(i, &f), WMethod::XiTower) != w {
                    return Err(format!("instance {inst}: W_{k} xi{i} != W_{k}"));
                }
            }
            Ok(())
        }),
        check("w-methods-agree", move || {
            let mut rng = rng_for(seed, 10);
            for inst in 0..INSTANCES {
                let n = rng.gen_range(2..=4);
                let k = rng.gen_range(0..=n - 1);
                let f = random_qt_poly(&mut rng, n, d);
                let tower = apply_w(k, n, &f, WMethod::XiTower);
                let sum = apply_w(k, n, &f, WMethod::SumFormula);
                if tower != sum {
                    return Err(format!("instance {inst}: methods differ at k={k}, n={n}"));
                }
            }
            Ok(())
        }),
        check("upsilon-hecke-intertwine", move || {
            let mut rng = rng_for(seed, 11);
            for inst in 0..INSTANCES {
                let n = rng.gen_range(2..=4);
                let i = rng.gen_range(1..n);
                let f = random_qt_poly(&mut rng, n, d);
                let lhs = upsilon(&apply_ti(i, &f)).map_err(|e| e.to_string())?;
                let rhs = apply_xi(i, &upsilon(&f).map_err(|e| e.to_string())?);
                if lhs != rhs {
                    return Err(format!("instance {inst}: limit of T{i} is not xi{i}"));
                }
            }
            Ok(())
        }),
        check("upsilon-epsilon-intertwine", move || {
            let mut rng = rng_for(seed, 12);
            for inst in 0..INSTANCES {
                let n = rng.gen_range(2..=4);
                let k = rng.gen_range(0..=n - 1);
                let f = random_qt_poly(&mut rng, n, d);
                let sym = apply_epsilon(k, n, &f).map_err(|e| e.to_string())?;
                let lhs = upsilon(&sym).map_err(|e| e.to_string())?;
                let rhs = apply_w(k, n, &upsilon(&f).map_err(|e| e.to_string())?, WMethod::XiTower);
                if lhs != rhs {
                    return Err(format!("instance {inst}: limit of epsilon_{k} is not W_{k}"));
                }
            }
            Ok(())
        }),
    ]
}

// ---------------------------------------------------------------------------
// specialization: the q=t=0 face of the Macdonald layer.
// ---------------------------------------------------------------------------

pub fn specialization_suite(degree: u32) -> Vec<Check> {
    vec![
        check("macdonald-specializes-to-keys", move || {
            for alpha in all_shapes(degree, 4) {
                let classical =
                    upsilon(&compute_e(&alpha)).map_err(|e| format!("alpha={alpha:?}: {e}"))?;
                if classical != key_polynomial(&alpha) {
                    return Err(format!("alpha={alpha:?}: limit differs from the key"));
                }
            }
            Ok(())
        }),
        check("key-fillings-assemble-keys", move || {
            for alpha in all_shapes(degree, 4) {
                let mut total = QPolynomial::zero();
                for f in enumerate_key_fillings(&alpha) {
                    total = total.add(&QPolynomial::x_power(&f.x_weight()));
                }
                if total != key_polynomial(&alpha) {
                    return Err(format!("alpha={alpha:?}: filling sum differs from the key"));
                }
            }
            Ok(())
        }),
    ]
}

// ---------------------------------------------------------------------------
// positivity: coefficient arithmetic over the (mu|lambda) sweep.
// ---------------------------------------------------------------------------

fn assert_nonnegative_integers(f: &AlmostSymFunction, label: &str) -> Result<(), String> {
    for ((head, tail), c) in f.terms() {
        if !c.is_integer() || c.is_negative() {
            return Err(format!("{label}: coefficient {c} at head={head:?} tail={tail} "));
        }
    }
    Ok(())
}

pub fn positivity_suite(degree: u32) -> Vec<Check> {
    vec![
        check("monomial-coefficients-nonnegative-integers", move || {
            for pair in sweep_pairs(degree, 3) {
                let comb = almost_schur_by_combinatorics(&pair);
                if comb.is_zero() {
                    return Err(format!("{pair}: expansion vanished"));
                }
                assert_nonnegative_integers(&comb, &pair.render())?;
            }
            Ok(())
        }),
        check("schur-coefficients-nonnegative-integers", move || {
            for pair in sweep_pairs(degree, 3) {
                let schur = almost_schur_by_combinatorics(&pair).convert(TailBasis::Schur);
                assert_nonnegative_integers(&schur, &pair.render())?;
            }
            Ok(())
        }),
        check("kostka-identity", move || {
            // K_(alpha|nu) = sum over gamma of K_{gamma,nu} M_(alpha|gamma),
            // with the classical Kostka numbers recounted directly.
            for pair in sweep_pairs(degree, 3) {
                let comb = almost_schur_by_combinatorics(&pair);
                let schur = comb.convert(TailBasis::Schur);
                let heads: std::collections::BTreeSet<Vec<u32>> =
                    comb.terms().map(|((h, _), _)| h.clone()).collect();
                for head in heads {
                    let rest = pair.degree() - size(&head);
                    for nu in partitions_of(rest) {
                        let lhs = comb.coefficient(&head, &nu);
                        let mut rhs = BigRational::zero();
                        for gamma in partitions_of(rest) {
                            let classical =
                                BigRational::from_integer(kostka(&gamma, nu.parts()).into());
                            rhs += classical * schur.coefficient(&head, &gamma);
                        }
                        if lhs != rhs {
                            return Err(format!(
                                "{pair}: head={head:?} nu={nu}: {lhs} != {rhs}"
                            ));
                        }
                    }
                }
            }
            Ok(())
        }),
        check("homogeneity", move || {
            for pair in sweep_pairs(degree, 3) {
                let comb = almost_schur_by_combinatorics(&pair);
                if !comb.is_homogeneous() || comb.total_degree() != pair.degree() {
                    return Err(format!("{pair}: expansion is not homogeneous of its degree"));
                }
            }
            Ok(())
        }),
        check("linear-independence", move || {
            for d in 0..=degree.min(5) {
                let pairs = enumerate_sigma_pairs(d, 2);
                let expansions: Vec<AlmostSymFunction> =
                    pairs.iter().map(almost_schur_by_combinatorics).collect();
                let columns: Vec<_> = {
                    let mut keys: std::collections::BTreeSet<_> = std::collections::BTreeSet::new();
                    for f in &expansions {
                        keys.extend(f.terms().map(|(k, _)| k.clone()));
                    }
                    keys.into_iter().collect()
                };
                let rows: Vec<Vec<BigRational>> = expansions
                    .iter()
                    .map(|f| {
                        columns
                            .iter()
                            .map(|(h, t)| f.coefficient(h, t))
                            .collect()
                    })
                    .collect();
                let r = rank(rows);
                if r != pairs.len() {
                    return Err(format!("degree {d}: rank {r} of {} expansions", pairs.len()));
                }
            }
            Ok(())
        }),
    ]
}

fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        match (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) {
            None => continue,
            Some(p) => {
                rows.swap(rank, p);
                let pivot_row = rows[rank].clone();
                let pivot = &pivot_row[col];
                for r in rank + 1..rows.len() {
                    if !rows[r][col].is_zero() {
                        let factor = &rows[r][col] / pivot;
                        for (c, pc) in pivot_row.iter().enumerate().skip(col) {
                            let sub = pc * &factor;
                            rows[r][c] = &rows[r][c] - &sub;
                        }
                    }
                }
                rank += 1;
                if rank == rows.len() {
                    break;
                }
            }
        }
    }
    rank
}

// ---------------------------------------------------------------------------
// stability: the two constructions and the finite-n windows.
// ---------------------------------------------------------------------------

pub fn stability_suite(degree: u32) -> Vec<Check> {
    stability_suite_with_limit(degree, DEFAULT_BLOCK_LIMIT)
}

pub fn stability_suite_with_limit(degree: u32, limit: usize) -> Vec<Check> {
    vec![
        check("algorithms-agree-with-certificate", move || {
            for pair in sweep_pairs(degree, 3) {
                let rec = almost_schur_by_recursion(&pair).map_err(|e| format!("{pair}: {e}"))?;
                let comb = almost_schur_by_combinatorics(&pair);
                if comb != rec.convert(TailBasis::Monomial) {
                    return Err(format!("{pair}: combinatorial and recursive expansions differ"));
                }
            }
            Ok(())
        }),
        check("truncation-stabilizes", move || {
            for pair in sweep_pairs(degree.min(4), 2) {
                let k = pair.mu().len();
                let d = pair.degree() as usize;
                let expected = almost_schur_by_recursion(&pair)
                    .map_err(|e| format!("{pair}: {e}"))?
                    .convert(TailBasis::Monomial);
                for n in [k + d, k + d + 1] {
                    let truncated = stable_macdonald_truncation_with_limit(&pair, n, limit)
                        .map_err(|e| match e {
                            OperatorError::BlockTooLarge { .. } => {
                                format!("resource guard: {pair}: {e}")
                            }
                            _ => format!("{pair}: {e}"),
                        })?;
                    let classical =
                        upsilon(&truncated).map_err(|e| format!("{pair}: {e}"))?;
                    let read = from_finite_polynomial(&classical, n, k)
                        .map_err(|e| format!("{pair}: {e}"))?;
                    if read != expected {
                        return Err(format!("{pair}: reading at n={n} is not stable"));
                    }
                }
            }
            Ok(())
        }),
        check("gamma-weight-assembles-keys", move || {
            for alpha in all_shapes(degree.min(4), 3) {
                let mut total = QPolynomial::zero();
                for f in enumerate_non_attacking_fillings(&alpha, alpha.len()) {
                    let at_zero = f
                        .stable_gamma_weight()
                        .specialize_zero()
                        .map_err(|e| format!("alpha={alpha:?}: {e}"))?;
                    if !at_zero.is_zero() {
                        total = total.add(&QPolynomial::monomial(&f.x_weight(), at_zero));
                    }
                }
                if total != key_polynomial(&alpha) {
                    return Err(format!("alpha={alpha:?}: weighted sum differs from the key"));
                }
            }
            Ok(())
        }),
    ]
}
