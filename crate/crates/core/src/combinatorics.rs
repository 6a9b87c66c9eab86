//! Compositions, partitions, the index set of pairs (mu|lambda), Bruhat order
//! on weights, SSYT enumeration, Kostka numbers and their inverse matrix.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Mutex;

use once_cell::sync::Lazy;

/// Weak composition: finite tuple of non-negative integers.
pub type Composition = Vec<u32>;

/// Point of Z_{>=0}^n with n fixed by context.
pub type Weight = Vec<u32>;

pub fn size(c: &[u32]) -> u32 {
    c.iter().sum()
}

/// True iff empty or last part nonzero.
pub fn is_reduced(c: &[u32]) -> bool {
    c.last().is_none_or(|&p| p > 0)
}

pub fn reverse_composition(c: &[u32]) -> Composition {
    c.iter().rev().copied().collect()
}

pub fn concat(a: &[u32], b: &[u32]) -> Composition {
    a.iter().chain(b.iter()).copied().collect()
}

/// Drop trailing zeros.
pub fn trim(c: &[u32]) -> Composition {
    let mut v = c.to_vec();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

pub fn is_weakly_decreasing(c: &[u32]) -> bool {
    c.windows(2).all(|w| w[0] >= w[1])
}

/// Weakly decreasing tuple of positive integers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(parts: Vec<u32>) -> Option<Self> {
        if parts.iter().all(|&p| p > 0) && is_weakly_decreasing(&parts) {
            Some(Partition(parts))
        } else {
            None
        }
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> u32 {
        size(&self.0)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_composition(&self.0))
    }
}

/// Nonzero parts of `c` sorted descending.
pub fn sort_to_partition(c: &[u32]) -> Partition {
    let mut parts: Vec<u32> = c.iter().copied().filter(|&p| p > 0).collect();
    parts.sort_unstable_by(|a, b| b.cmp(a));
    Partition(parts)
}

/// Pair (mu|lambda): reduced composition head, partition tail.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SigmaPair {
    mu: Composition,
    lambda: Partition,
}

impl SigmaPair {
    pub fn new(mu: Composition, lambda: Partition) -> Option<Self> {
        if is_reduced(&mu) {
            Some(SigmaPair { mu, lambda })
        } else {
            None
        }
    }

    pub fn mu(&self) -> &[u32] {
        &self.mu
    }

    pub fn lambda(&self) -> &Partition {
        &self.lambda
    }

    pub fn degree(&self) -> u32 {
        size(&self.mu) + self.lambda.size()
    }

    /// mu * rev(lambda): the diagram shape underlying star labellings.
    pub fn star_shape(&self) -> Composition {
        concat(&self.mu, &reverse_composition(self.lambda.parts()))
    }

    /// Canonical text form, e.g. "mu=2,0,1;lambda=3,1".
    pub fn render(&self) -> String {
        format!(
            "mu={};lambda={}",
            render_composition(&self.mu),
            render_composition(self.lambda.parts())
        )
    }

    pub fn parse(s: &str) -> Result<Self, String> {
        let (mu_part, lambda_part) = s
            .split_once(';')
            .ok_or_else(|| format!("expected \"mu=...;lambda=...\", got {s:?}"))?;
        let mu_str = mu_part
            .strip_prefix("mu=")
            .ok_or_else(|| format!("missing \"mu=\" in {s:?}"))?;
        let lambda_str = lambda_part
            .strip_prefix("lambda=")
            .ok_or_else(|| format!("missing \"lambda=\" in {s:?}"))?;
        let mu = parse_composition(mu_str)?;
        if !is_reduced(&mu) {
            return Err(format!("mu={mu_str} is not reduced (trailing zero)"));
        }
        let lam = parse_composition(lambda_str)?;
        let lambda = Partition::new(lam)
            .ok_or_else(|| format!("lambda={lambda_str} is not a partition"))?;
        Ok(SigmaPair { mu, lambda })
    }
}

impl fmt::Display for SigmaPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

pub fn render_composition(c: &[u32]) -> String {
    c.iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Comma-separated non-negative integers; empty string for the empty tuple.
pub fn parse_composition(s: &str) -> Result<Composition, String> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<u32>()
                .map_err(|e| format!("bad part {p:?}: {e}"))
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Bruhat order on fixed-sum weight slices.
//
// Cover moves downward from b: for i<j with b_i > b_j, either swap the two
// entries, or when b_i - b_j > 1 replace them by (b_j + 1, b_i - 1).
// The order is the transitive closure; bruhat_leq(a, b) tests membership of a
// in the memoized down-set of b.
// ---------------------------------------------------------------------------

type DownSet = std::sync::Arc<HashSet<Vec<u32>>>;

static DOWNSETS: Lazy<Mutex<HashMap<Vec<u32>, DownSet>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

fn cover_moves_down(b: &[u32]) -> Vec<Vec<u32>> {
    // Swapping an increasing pair moves down; a decreasing pair with gap
    // above one drops to the pair pushed one step closer together.
    let mut out = Vec::new();
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            if b[i] < b[j] {
                let mut s = b.to_vec();
                s.swap(i, j);
                out.push(s);
            } else if b[i] > b[j] + 1 {
                let mut p = b.to_vec();
                p[i] = b[j] + 1;
                p[j] = b[i] - 1;
                out.push(p);
            }
        }
    }
    out
}

pub fn bruhat_downset(b: &[u32]) -> DownSet {
    if let Some(hit) = DOWNSETS.lock().unwrap().get(b) {
        return hit.clone();
    }
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut queue: VecDeque<Vec<u32>> = VecDeque::new();
    seen.insert(b.to_vec());
    queue.push_back(b.to_vec());
    while let Some(cur) = queue.pop_front() {
        for next in cover_moves_down(&cur) {
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    let arc = std::sync::Arc::new(seen);
    DOWNSETS.lock().unwrap().insert(b.to_vec(), arc.clone());
    arc
}

/// a <= b in Bruhat order. Lengths must match; different coordinate sums
/// are incomparable.
pub fn bruhat_leq(a: &[u32], b: &[u32]) -> bool {
    assert_eq!(a.len(), b.len(), "bruhat_leq: length mismatch");
    if size(a) != size(b) {
        return false;
    }
    bruhat_downset(b).contains(a)
}

// ---------------------------------------------------------------------------
// Semistandard Young tableaux, Kostka numbers, inverse Kostka matrix.
// ---------------------------------------------------------------------------

/// Rows of a tableau; rows weakly increase, columns strictly increase.
pub type Tableau = Vec<Vec<u32>>;

/// All SSYT of the given shape and content. Empty on size mismatch.
pub fn enumerate_ssyt(shape: &Partition, content: &[u32]) -> Vec<Tableau> {
    if shape.size() != size(content) {
        return Vec::new();
    }
    let rows = shape.parts();
    let mut remaining: Vec<u32> = content.to_vec();
    let mut tableau: Tableau = rows.iter().map(|&r| Vec::with_capacity(r as usize)).collect();
    let mut out = Vec::new();
    fill_ssyt(rows, content.len() as u32, &mut remaining, &mut tableau, 0, 0, &mut out);
    out
}

fn fill_ssyt(
    rows: &[u32],
    max_entry: u32,
    remaining: &mut [u32],
    tableau: &mut Tableau,
    row: usize,
    col: usize,
    out: &mut Vec<Tableau>,
) {
    if row == rows.len() {
        out.push(tableau.clone());
        return;
    }
    if col == rows[row] as usize {
        fill_ssyt(rows, max_entry, remaining, tableau, row + 1, 0, out);
        return;
    }
    let row_min = if col > 0 { tableau[row][col - 1] } else { 1 };
    let col_min = if row > 0 && (tableau[row - 1].len() > col) {
        tableau[row - 1][col] + 1
    } else {
        1
    };
    let lo = row_min.max(col_min);
    for v in lo..=max_entry {
        if remaining[(v - 1) as usize] == 0 {
            continue;
        }
        remaining[(v - 1) as usize] -= 1;
        tableau[row].push(v);
        fill_ssyt(rows, max_entry, remaining, tableau, row, col + 1, out);
        tableau[row].pop();
        remaining[(v - 1) as usize] += 1;
    }
}

/// K_{lambda,nu} = |SSYT(lambda, nu)|; 0 on size mismatch.
pub fn kostka(lambda: &Partition, nu: &[u32]) -> u64 {
    count_ssyt(lambda, nu)
}

fn count_ssyt(shape: &Partition, content: &[u32]) -> u64 {
    enumerate_ssyt(shape, content).len() as u64
}

/// Partitions of d, lexicographically ascending. This is a linear extension
/// of dominance, so the Kostka matrix in this order is lower-unitriangular.
pub fn partitions_of(d: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    gen_partitions(d, d, &mut cur, &mut out);
    out.sort_unstable();
    out
}

fn gen_partitions(left: u32, max_part: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if left == 0 {
        out.push(Partition(cur.clone()));
        return;
    }
    for p in (1..=left.min(max_part)).rev() {
        cur.push(p);
        gen_partitions(left - p, p, cur, out);
        cur.pop();
    }
}

/// Kostka matrix on partitions of d (lex-ascending index order) and its
/// integer inverse, computed by back-substitution on the unitriangular system.
pub struct KostkaTables {
    pub index: Vec<Partition>,
    pub kostka: Vec<Vec<i64>>,
    pub inverse: Vec<Vec<i64>>,
}

static KOSTKA_TABLES: Lazy<Mutex<HashMap<u32, std::sync::Arc<KostkaTables>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

pub fn kostka_tables(d: u32) -> std::sync::Arc<KostkaTables> {
    if let Some(hit) = KOSTKA_TABLES.lock().unwrap().get(&d) {
        return hit.clone();
    }
    let tables = std::sync::Arc::new(crate::cache::load_or_build_kostka(d, build_kostka_tables));
    KOSTKA_TABLES.lock().unwrap().insert(d, tables.clone());
    tables
}

pub(crate) fn build_kostka_tables(d: u32) -> KostkaTables {
    let index = partitions_of(d);
    let n = index.len();
    let mut k = vec![vec![0i64; n]; n];
    for (i, lam) in index.iter().enumerate() {
        for (j, nu) in index.iter().enumerate() {
            k[i][j] = count_ssyt(lam, nu.parts()) as i64;
        }
    }
    // Lower-unitriangular inverse, row by row.
    let mut inv = vec![vec![0i64; n]; n];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = 1;
        for j in (0..i).rev() {
            let mut acc = 0i64;
            for m in j + 1..=i {
                acc += row[m] * k[m][j];
            }
            row[j] = -acc;
        }
    }
    KostkaTables { index, kostka: k, inverse: inv }
}

impl KostkaTables {
    pub fn position(&self, p: &Partition) -> Option<usize> {
        self.index.binary_search(p).ok()
    }
}

/// Entry of the inverse Kostka matrix; 0 on size mismatch.
pub fn inverse_kostka(gamma: &Partition, lambda: &Partition) -> i64 {
    if gamma.size() != lambda.size() {
        return 0;
    }
    let tables = kostka_tables(gamma.size());
    let i = tables.position(gamma).expect("partition in its own slice");
    let j = tables.position(lambda).expect("partition in its own slice");
    tables.inverse[i][j]
}

// ---------------------------------------------------------------------------
// Enumeration of the index set.
// ---------------------------------------------------------------------------

/// All (mu|lambda) with |mu|+|lambda| = degree and l(mu) <= max_mu_length,
/// ordered by |mu| descending, then mu lexicographically, then lambda.
pub fn enumerate_sigma_pairs(degree: u32, max_mu_length: usize) -> Vec<SigmaPair> {
    let mut out = Vec::new();
    for mu_size in (0..=degree).rev() {
        let mut mus = reduced_compositions(mu_size, max_mu_length);
        mus.sort_unstable();
        let lambdas = partitions_of(degree - mu_size);
        for mu in &mus {
            for lam in &lambdas {
                out.push(SigmaPair { mu: mu.clone(), lambda: lam.clone() });
            }
        }
    }
    out
}

/// Reduced compositions of s with length <= max_len.
fn reduced_compositions(s: u32, max_len: usize) -> Vec<Composition> {
    let mut out = Vec::new();
    if s == 0 {
        out.push(Vec::new());
        return out;
    }
    let mut cur = Vec::new();
    gen_compositions(s, max_len, &mut cur, &mut out);
    out
}

fn gen_compositions(left: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Composition>) {
    if slots == 0 {
        return;
    }
    // Last part must be nonzero: close out now with the whole remainder.
    cur.push(left);
    out.push(cur.clone());
    cur.pop();
    if slots > 1 {
        for head in 0..left {
            cur.push(head);
            gen_compositions(left - head, slots - 1, cur, out);
            cur.pop();
        }
    }
}
