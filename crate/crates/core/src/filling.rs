//! Fillings of column diagrams: the statistics maj, inv, coinv, the attack
//! relation, co-inversion triples, weight formulas, and backtracking
//! enumeration of non-attacking fillings and star labellings.

use crate::combinatorics::SigmaPair;
use crate::diagram::{BoxPos, Diagram};
use crate::poly::QtPolynomial;
use crate::qt::{hhl_factor, QtPoly, QtRational};
use num_bigint::BigInt;
use num_traits::One;
use std::collections::BTreeMap;

/// Label alphabet: finite labels 1, 2, ... followed by w+0 < w+1 < ...
/// Every finite label is smaller than every w+k.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum StarLabel {
    Finite(u32),
    OmegaPlus(u32),
}

impl StarLabel {
    pub fn is_finite(self) -> bool {
        matches!(self, StarLabel::Finite(_))
    }

    pub fn render(self) -> String {
        match self {
            StarLabel::Finite(v) => v.to_string(),
            StarLabel::OmegaPlus(k) => format!("w+{k}"),
        }
    }
}

/// Basement conventions. Standard: column i carries label i. Star: the first
/// head_columns columns carry 1..head_columns, the rest w+0, w+1, ...
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Basement {
    Standard,
    Star { head_columns: usize },
}

impl Basement {
    pub fn label(self, col: usize) -> StarLabel {
        match self {
            Basement::Standard => StarLabel::Finite(col as u32),
            Basement::Star { head_columns } => {
                if col <= head_columns {
                    StarLabel::Finite(col as u32)
                } else {
                    StarLabel::OmegaPlus((col - head_columns - 1) as u32)
                }
            }
        }
    }
}

/// Strict cyclic ascent: u < v < w or v < w < u or w < u < v.
pub fn cyclic_strict(u: StarLabel, v: StarLabel, w: StarLabel) -> bool {
    (u < v && v < w) || (v < w && w < u) || (w < u && u < v)
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Filling {
    diagram: Diagram,
    basement: Basement,
    /// labels[col-1][row-1], finite interior labels only.
    labels: Vec<Vec<u32>>,
}

#[derive(Clone, Debug)]
pub struct InvStatistics {
    /// Attacking pairs (u, v) with u before v in the augmented reading order
    /// and label(u) > label(v).
    pub inv_set: Vec<(BoxPos, BoxPos)>,
    pub inv: u32,
    pub coinv: u32,
}

impl Filling {
    pub fn new(shape: Vec<u32>, basement: Basement, labels: Vec<Vec<u32>>) -> Result<Self, String> {
        let diagram = Diagram::new(shape);
        if labels.len() != diagram.width() {
            return Err(format!(
                "expected {} label columns, got {}",
                diagram.width(),
                labels.len()
            ));
        }
        for (c, col) in labels.iter().enumerate() {
            if col.len() != diagram.column_height(c + 1) as usize {
                return Err(format!(
                    "column {} needs {} labels, got {}",
                    c + 1,
                    diagram.column_height(c + 1),
                    col.len()
                ));
            }
            if col.contains(&0) {
                return Err(format!("column {} has a zero label", c + 1));
            }
        }
        Ok(Filling { diagram, basement, labels })
    }

    pub fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    pub fn basement(&self) -> Basement {
        self.basement
    }

    /// Label of any augmented box; basement squares use the basement rule.
    pub fn label(&self, b: BoxPos) -> StarLabel {
        if b.row == 0 {
            self.basement.label(b.col)
        } else {
            StarLabel::Finite(self.labels[b.col - 1][b.row as usize - 1])
        }
    }

    pub fn interior_label(&self, b: BoxPos) -> u32 {
        self.labels[b.col - 1][b.row as usize - 1]
    }

    /// Multiplicity vector of the interior labels: entry a-1 counts label a.
    pub fn x_weight(&self) -> Vec<u32> {
        let max = self.labels.iter().flatten().copied().max().unwrap_or(0);
        let mut counts = vec![0u32; max as usize];
        for &l in self.labels.iter().flatten() {
            counts[l as usize - 1] += 1;
        }
        counts
    }

    pub fn is_non_attacking(&self) -> bool {
        self.diagram
            .attack_pairs_augmented()
            .iter()
            .all(|&(u, v)| self.label(u) != self.label(v))
    }

    /// Boxes u with label(u) > label(down(u)).
    pub fn descents(&self) -> Vec<BoxPos> {
        self.diagram
            .boxes()
            .into_iter()
            .filter(|&b| self.label(b) > self.label(b.down()))
            .collect()
    }

    /// maj = sum of leg(u) + 1 over descent boxes.
    pub fn maj(&self) -> u32 {
        self.descents()
            .iter()
            .map(|&b| self.diagram.leg(b) + 1)
            .sum()
    }

    /// inv = |Inv| - #{i < j : mu_i <= mu_j} - sum of arms over descents,
    /// where Inv ranges over attacking pairs of the augmented diagram in
    /// reading order; coinv is the complementary statistic to the arm sum.
    pub fn inv_statistics(&self) -> InvStatistics {
        let inv_set: Vec<(BoxPos, BoxPos)> = self
            .diagram
            .attack_pairs_augmented()
            .into_iter()
            .filter(|&(u, v)| self.label(u) > self.label(v))
            .collect();
        let shape = self.diagram.shape();
        let mut shape_stat = 0i64;
        for i in 0..shape.len() {
            for j in i + 1..shape.len() {
                if shape[i] <= shape[j] {
                    shape_stat += 1;
                }
            }
        }
        let descent_arms: i64 = self
            .descents()
            .iter()
            .map(|&b| self.diagram.arm(b) as i64)
            .sum();
        let inv = inv_set.len() as i64 - shape_stat - descent_arms;
        assert!(inv >= 0, "negative inv statistic");
        let coinv = self.diagram.arm_sum() as i64 - inv;
        assert!(coinv >= 0, "negative coinv statistic");
        InvStatistics { inv_set, inv: inv as u32, coinv: coinv as u32 }
    }

    /// Number of co-inversion triples of either type.
    pub fn count_coinversion_triples(&self) -> u32 {
        let mut count = 0;
        for (u, v, w) in self
            .diagram
            .type1_triples()
            .into_iter()
            .chain(self.diagram.type2_triples())
        {
            if cyclic_strict(self.label(u), self.label(v), self.label(w)) {
                count += 1;
            }
        }
        count
    }

    /// q^maj t^coinv times (1-t)/(1-q^{leg+1} t^{arm+1}) over the boxes whose
    /// label differs from the one below. Defined for non-attacking fillings.
    pub fn hhl_weight(&self) -> QtRational {
        assert!(self.is_non_attacking(), "weight of an attacking filling");
        let stats = self.inv_statistics();
        let mut w = QtRational::monomial(self.maj(), stats.coinv);
        for b in self.diagram.boxes() {
            if self.label(b) != self.label(b.down()) {
                w = w.mul_ref(&hhl_factor(self.diagram.leg(b) + 1, self.diagram.arm(b) + 1));
            }
        }
        w
    }

    /// Stable-limit weight: boxes in row 1 whose label differs from the
    /// basement contribute a bare 1-t; higher rows keep the usual factor.
    pub fn stable_gamma_weight(&self) -> QtRational {
        assert!(self.is_non_attacking(), "weight of an attacking filling");
        let stats = self.inv_statistics();
        let mut w = QtRational::monomial(self.maj(), stats.coinv);
        for b in self.diagram.boxes() {
            if self.label(b) != self.label(b.down()) {
                let factor = if b.row == 1 {
                    QtRational::one_minus_t()
                } else {
                    hhl_factor(self.diagram.leg(b) + 1, self.diagram.arm(b) + 1)
                };
                w = w.mul_ref(&factor);
            }
        }
        w
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut labels = Vec::new();
        for col in 1..=self.diagram.width() {
            for row in 0..=self.diagram.column_height(col) {
                let label = match self.label(BoxPos::new(col, row)) {
                    StarLabel::Finite(v) => serde_json::json!(v),
                    StarLabel::OmegaPlus(k) => serde_json::json!(format!("w+{k}")),
                };
                labels.push(serde_json::json!([col, row, label]));
            }
        }
        serde_json::json!({
            "shape": self.diagram.shape(),
            "labels": labels,
        })
    }
}

// ---------------------------------------------------------------------------
// Backtracking searches.
// ---------------------------------------------------------------------------

struct Search<'a> {
    diagram: &'a Diagram,
    basement: Basement,
    max_label: u32,
    no_descent: bool,
    zero_triples: bool,
    content: Option<Vec<u32>>,
    boxes: Vec<BoxPos>,
    labels: Vec<Vec<u32>>,
    out: Vec<Filling>,
}

impl<'a> Search<'a> {
    fn run(mut self) -> Vec<Filling> {
        self.descend(0);
        self.out
    }

    fn label_at(&self, b: BoxPos) -> StarLabel {
        if b.row == 0 {
            self.basement.label(b.col)
        } else {
            StarLabel::Finite(self.labels[b.col - 1][b.row as usize - 1])
        }
    }

    fn descend(&mut self, idx: usize) {
        if idx == self.boxes.len() {
            if let Some(content) = &self.content {
                if content.iter().any(|&c| c != 0) {
                    return;
                }
            }
            self.out.push(Filling {
                diagram: self.diagram.clone(),
                basement: self.basement,
                labels: self.labels.clone(),
            });
            return;
        }
        let b = self.boxes[idx];
        let below = self.label_at(b.down());
        for cand in 1..=self.max_label {
            if let Some(content) = &self.content {
                if content[cand as usize - 1] == 0 {
                    continue;
                }
            }
            let label = StarLabel::Finite(cand);
            if self.no_descent && label > below {
                // Candidates only grow, so no later one can work either.
                break;
            }
            if self.conflicts(b, label, below) {
                continue;
            }
            if let Some(content) = &mut self.content {
                content[cand as usize - 1] -= 1;
            }
            self.labels[b.col - 1][b.row as usize - 1] = cand;
            self.descend(idx + 1);
            self.labels[b.col - 1][b.row as usize - 1] = 0;
            if let Some(content) = &mut self.content {
                content[cand as usize - 1] += 1;
            }
        }
    }

    /// All constraint checks that involve only already-placed boxes. In
    /// column-major placement order every attacking pair and every triple is
    /// fully known exactly when its last box is placed.
    fn conflicts(&self, b: BoxPos, label: StarLabel, below: StarLabel) -> bool {
        let c = b.col;
        let r = b.row;
        let h = self.diagram.column_height(c);
        // Attacks against earlier columns: same row, and the row above.
        for cp in 1..c {
            let hp = self.diagram.column_height(cp);
            if hp >= r && self.label_at(BoxPos::new(cp, r)) == label {
                return true;
            }
            if hp > r && self.label_at(BoxPos::new(cp, r + 1)) == label {
                return true;
            }
        }
        // Attacks against the basement row to the right.
        if r == 1 {
            for cp in c + 1..=self.diagram.width() {
                if self.basement.label(cp) == label {
                    return true;
                }
            }
        }
        if self.zero_triples {
            // Triples whose last box in placement order is b.
            // (u, v, w) with u = b in the same row as an earlier column.
            for cp in 1..c {
                let hp = self.diagram.column_height(cp);
                if r <= hp && hp <= h {
                    let v = self.label_at(BoxPos::new(cp, r));
                    if cyclic_strict(label, v, below) {
                        return true;
                    }
                }
            }
            // (u, v, w) with v = b under a taller earlier column.
            for cp in 1..c {
                let hp = self.diagram.column_height(cp);
                if hp > h && hp > r {
                    let u = self.label_at(BoxPos::new(cp, r + 1));
                    let w = self.label_at(BoxPos::new(cp, r));
                    if cyclic_strict(u, label, w) {
                        return true;
                    }
                }
            }
            // (u, v, w) with u = b in row 1 over a basement pair.
            if r == 1 {
                for cp in c + 1..=self.diagram.width() {
                    if self.diagram.column_height(cp) < h {
                        let v = self.basement.label(cp);
                        if cyclic_strict(label, v, below) {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }
}

fn search(
    diagram: &Diagram,
    basement: Basement,
    max_label: u32,
    no_descent: bool,
    zero_triples: bool,
    content: Option<Vec<u32>>,
) -> Vec<Filling> {
    if let Some(c) = &content {
        assert!(c.len() as u32 >= max_label, "content vector shorter than label range");
    }
    Search {
        diagram,
        basement,
        max_label,
        no_descent,
        zero_triples,
        content,
        boxes: diagram.boxes(),
        labels: diagram
            .shape()
            .iter()
            .map(|&h| vec![0u32; h as usize])
            .collect(),
        out: Vec::new(),
    }
    .run()
}

/// All non-attacking fillings of the diagram of mu, padded to n columns,
/// with labels in 1..=n over the standard basement. Requires n >= l(mu).
pub fn enumerate_non_attacking_fillings(mu: &[u32], n: usize) -> Vec<Filling> {
    assert!(n >= mu.len(), "need at least l(mu) variables");
    let mut shape = mu.to_vec();
    shape.resize(n, 0);
    let diagram = Diagram::new(shape);
    search(&diagram, Basement::Standard, n as u32, false, false, None)
}

/// The nonsymmetric Macdonald polynomial E_mu in n = l(mu) variables, by the
/// weighted sum over non-attacking fillings. Weights share the product of all
/// box factors as a common denominator, so each coefficient reduces once
/// instead of once per filling.
pub fn compute_e(mu: &[u32]) -> QtPolynomial {
    let n = mu.len();
    let diagram = Diagram::new(mu.to_vec());
    let boxes = diagram.boxes();
    let one_minus = |qe, te| QtPoly::one().sub(&QtPoly::monomial(qe, te, BigInt::one()));
    let factors: Vec<QtPoly> = boxes
        .iter()
        .map(|&b| one_minus(diagram.leg(b) + 1, diagram.arm(b) + 1))
        .collect();
    let mut den = QtPoly::one();
    for g in &factors {
        den = den.mul(g);
    }
    let one_minus_t = one_minus(0, 1);
    let mut numerators: BTreeMap<Vec<u32>, QtPoly> = BTreeMap::new();
    for f in enumerate_non_attacking_fillings(mu, n) {
        let mut num = QtPoly::monomial(f.maj(), f.inv_statistics().coinv, BigInt::one());
        for (i, &b) in boxes.iter().enumerate() {
            let g = if f.label(b) != f.label(b.down()) { &one_minus_t } else { &factors[i] };
            num = num.mul(g);
        }
        let slot = numerators.entry(f.x_weight()).or_insert_with(QtPoly::zero);
        *slot = slot.add(&num);
    }
    let mut e = QtPolynomial::zero();
    for (exps, num) in numerators {
        e = e.add(&QtPolynomial::monomial(&exps, QtRational::new(num, den.clone())));
    }
    e
}

/// The q=t=0 filling set of alpha: non-attacking fillings over the standard
/// basement with labels in 1..=l(alpha), no descents, and no co-inversion
/// triples. Summing x^sigma over this set gives the key polynomial.
pub fn enumerate_key_fillings(alpha: &[u32]) -> Vec<Filling> {
    let diagram = Diagram::new(alpha.to_vec());
    search(&diagram, Basement::Standard, alpha.len() as u32, true, true, None)
}

/// Star labellings of the pair: fillings of the diagram of mu * rev(lambda)
/// over the star basement that are non-attacking, descent-free, and have no
/// co-inversion triples. Finite labels up to max_label.
pub fn enumerate_star_labellings(pair: &SigmaPair, max_label: u32) -> Vec<Filling> {
    let diagram = Diagram::new(pair.star_shape());
    let basement = Basement::Star { head_columns: pair.mu().len() };
    search(&diagram, basement, max_label, true, true, None)
}

/// Star labellings with prescribed label multiplicities: content[a-1] copies
/// of the label a.
pub fn star_labellings_with_content(pair: &SigmaPair, content: &[u32]) -> Vec<Filling> {
    let diagram = Diagram::new(pair.star_shape());
    let basement = Basement::Star { head_columns: pair.mu().len() };
    if content.iter().map(|&c| c as u64).sum::<u64>() != diagram.size() as u64 {
        return Vec::new();
    }
    search(
        &diagram,
        basement,
        content.len() as u32,
        true,
        true,
        Some(content.to_vec()),
    )
}
