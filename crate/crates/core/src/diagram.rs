//! Column diagrams of weak compositions, with the arm, leg, attack and
//! triple geometry used by the combinatorial weight formulas.
//!
//! The diagram of mu has a column of mu_i boxes above each index i; box
//! (col, row) has col 1-based and row counted from 1 upward. Row 0 is the
//! basement. Zero columns carry no boxes but still own a basement square.

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct BoxPos {
    pub col: usize,
    pub row: u32,
}

impl BoxPos {
    pub fn new(col: usize, row: u32) -> Self {
        BoxPos { col, row }
    }

    /// The box directly below (the basement square when row == 1).
    pub fn down(self) -> Self {
        BoxPos { col: self.col, row: self.row.checked_sub(1).expect("basement has no down") }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Diagram {
    shape: Vec<u32>,
}

impl Diagram {
    pub fn new(shape: Vec<u32>) -> Self {
        Diagram { shape }
    }

    pub fn shape(&self) -> &[u32] {
        &self.shape
    }

    /// Number of columns including zero columns; also the basement width.
    pub fn width(&self) -> usize {
        self.shape.len()
    }

    /// Height of the 1-based column.
    pub fn column_height(&self, col: usize) -> u32 {
        self.shape[col - 1]
    }

    pub fn size(&self) -> u32 {
        self.shape.iter().sum()
    }

    pub fn max_height(&self) -> u32 {
        self.shape.iter().copied().max().unwrap_or(0)
    }

    pub fn contains(&self, b: BoxPos) -> bool {
        b.col >= 1 && b.col <= self.width() && b.row >= 1 && b.row <= self.column_height(b.col)
    }

    /// True for interior boxes and basement squares alike.
    pub fn contains_augmented(&self, b: BoxPos) -> bool {
        b.col >= 1 && b.col <= self.width() && (b.row == 0 || b.row <= self.column_height(b.col))
    }

    /// Interior boxes, column-major: columns left to right, bottom to top.
    pub fn boxes(&self) -> Vec<BoxPos> {
        let mut out = Vec::new();
        for col in 1..=self.width() {
            for row in 1..=self.column_height(col) {
                out.push(BoxPos::new(col, row));
            }
        }
        out
    }

    /// Rows top to bottom, right to left within a row; interior boxes only.
    pub fn reading_order(&self) -> Vec<BoxPos> {
        let mut out = Vec::new();
        for row in (1..=self.max_height()).rev() {
            for col in (1..=self.width()).rev() {
                if self.column_height(col) >= row {
                    out.push(BoxPos::new(col, row));
                }
            }
        }
        out
    }

    /// Reading order extended by the basement row, still right to left.
    pub fn reading_order_augmented(&self) -> Vec<BoxPos> {
        let mut out = self.reading_order();
        for col in (1..=self.width()).rev() {
            out.push(BoxPos::new(col, 0));
        }
        out
    }

    /// leg(u): boxes strictly above u in its own column.
    pub fn leg(&self, b: BoxPos) -> u32 {
        debug_assert!(self.contains(b));
        self.column_height(b.col) - b.row
    }

    /// arm(u) for u = (i, j): columns i' < i with j <= mu_{i'} <= mu_i, plus
    /// columns i' > i with mu_{i'} < mu_i and mu_{i'} >= j - 1.
    pub fn arm(&self, b: BoxPos) -> u32 {
        debug_assert!(self.contains(b));
        let h = self.column_height(b.col);
        let mut arm = 0;
        for other in 1..=self.width() {
            let oh = self.column_height(other);
            if other < b.col && b.row <= oh && oh <= h {
                arm += 1;
            }
            if other > b.col && oh < h && oh + 1 >= b.row {
                arm += 1;
            }
        }
        arm
    }

    pub fn arm_sum(&self) -> u32 {
        self.boxes().iter().map(|&b| self.arm(b)).sum()
    }

    /// Attack relation on the augmented diagram: same row, or consecutive
    /// rows with the lower box strictly to the right of the upper one.
    pub fn attack(&self, u: BoxPos, v: BoxPos) -> bool {
        if u == v || !self.contains_augmented(u) || !self.contains_augmented(v) {
            return false;
        }
        if u.row == v.row {
            return true;
        }
        let (upper, lower) = if u.row > v.row { (u, v) } else { (v, u) };
        upper.row == lower.row + 1 && lower.col > upper.col
    }

    /// All attacking pairs ordered by augmented reading order.
    pub fn attack_pairs_augmented(&self) -> Vec<(BoxPos, BoxPos)> {
        let order = self.reading_order_augmented();
        let mut out = Vec::new();
        for i in 0..order.len() {
            for j in i + 1..order.len() {
                if self.attack(order[i], order[j]) {
                    out.push((order[i], order[j]));
                }
            }
        }
        out
    }

    /// Triples (u, v, w) with u = (i, j), w = (i, j-1) directly below, and
    /// v = (i', j-1) in a strictly shorter column to the right; w and v may
    /// be basement squares.
    pub fn type1_triples(&self) -> Vec<(BoxPos, BoxPos, BoxPos)> {
        let mut out = Vec::new();
        for i in 1..=self.width() {
            let hi = self.column_height(i);
            for j in 1..=hi {
                for ip in i + 1..=self.width() {
                    let hp = self.column_height(ip);
                    if hp < hi && hp + 1 >= j {
                        out.push((
                            BoxPos::new(i, j),
                            BoxPos::new(ip, j - 1),
                            BoxPos::new(i, j - 1),
                        ));
                    }
                }
            }
        }
        out
    }

    /// Triples (u, v, w) with v = (i', j) and u = (i, j) in the same row,
    /// i' < i, column i' weakly shorter, and w = (i, j-1) below u.
    pub fn type2_triples(&self) -> Vec<(BoxPos, BoxPos, BoxPos)> {
        let mut out = Vec::new();
        for i in 1..=self.width() {
            let hi = self.column_height(i);
            for j in 1..=hi {
                for ip in 1..i {
                    let hp = self.column_height(ip);
                    if j <= hp && hp <= hi {
                        out.push((
                            BoxPos::new(i, j),
                            BoxPos::new(ip, j),
                            BoxPos::new(i, j - 1),
                        ));
                    }
                }
            }
        }
        out
    }
}
