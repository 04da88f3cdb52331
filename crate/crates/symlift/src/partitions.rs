//! Integer-partition calculus behind the piece decomposition: partitions of
//! m as multiplicity vectors, the bijection with coincidence signatures,
//! the part-count equivalence, and exact enumeration and counting of
//! coincidence patterns.

use crate::error::{Error, Result};
use crate::pieces::PieceId;

pub const MAX_PARTITION_M: usize = 30;
pub const MAX_PIECE_M: usize = 10;

/// Bound on how many class selections `enumerate_selections` will yield.
pub const MAX_SELECTIONS: u128 = 1_000_000;

/// A partition of m in multiplicity form: alpha[i] parts of size i+1,
/// with sum (i+1) * alpha[i] = m and alpha of length m.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    alpha: Vec<usize>,
}

impl Partition {
    pub fn new(alpha: Vec<usize>) -> Result<Partition> {
        let m = alpha.len();
        if m == 0 {
            return Err(Error::InvalidInput("empty multiplicity vector".into()));
        }
        let total: usize = alpha.iter().enumerate().map(|(i, &a)| (i + 1) * a).sum();
        if total != m {
            return Err(Error::InvalidInput(format!(
                "multiplicities sum to {total}, expected {m}"
            )));
        }
        Ok(Partition { alpha })
    }

    /// Builds the multiplicity vector from an explicit list of parts.
    pub fn from_parts(m: usize, parts: &[usize]) -> Result<Partition> {
        let mut alpha = vec![0usize; m];
        for &p in parts {
            if p < 1 || p > m {
                return Err(Error::InvalidInput(format!("part {p} out of range for m={m}")));
            }
            alpha[p - 1] += 1;
        }
        Partition::new(alpha)
    }

    pub fn m(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self) -> &[usize] {
        &self.alpha
    }

    /// Number of parts, counted with multiplicity.
    pub fn num_parts(&self) -> usize {
        self.alpha.iter().sum()
    }

    /// The parts in non-decreasing order, e.g. [1,1,2] for m=4.
    pub fn parts(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.num_parts());
        for (i, &a) in self.alpha.iter().enumerate() {
            for _ in 0..a {
                out.push(i + 1);
            }
        }
        out
    }

    /// Same part-count class: both partition the same m into equally many
    /// parts.
    pub fn sim(&self, other: &Partition) -> bool {
        self.m() == other.m() && self.num_parts() == other.num_parts()
    }

    pub fn render(&self) -> String {
        let pieces: Vec<String> = self
            .alpha
            .iter()
            .enumerate()
            .filter(|(_, &a)| a > 0)
            .map(|(i, &a)| {
                if a == 1 {
                    format!("{}", i + 1)
                } else {
                    format!("{}^{}", i + 1, a)
                }
            })
            .collect();
        pieces.join(" ")
    }
}

/// The coincidence signature of a partition: j0 positions free of
/// repetition plus the non-trivial repetition sizes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JVector {
    j0: usize,
    parts: Vec<usize>,
}

impl JVector {
    pub fn new(j0: usize, parts: Vec<usize>) -> Result<JVector> {
        for w in parts.windows(2) {
            if w[0] > w[1] {
                return Err(Error::InvalidInput("parts must be non-decreasing".into()));
            }
        }
        if parts.iter().any(|&p| p < 2) {
            return Err(Error::InvalidInput("every repetition size must be >= 2".into()));
        }
        Ok(JVector { j0, parts })
    }

    pub fn j0(&self) -> usize {
        self.j0
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn m(&self) -> usize {
        self.j0 + self.parts.iter().sum::<usize>()
    }
}

/// j0 is the multiplicity of part 1; the remaining parts pass through.
pub fn jvector_of(tau: &Partition) -> JVector {
    let mut parts = Vec::new();
    for (i, &a) in tau.alpha().iter().enumerate().skip(1) {
        for _ in 0..a {
            parts.push(i + 1);
        }
    }
    JVector {
        j0: tau.alpha()[0],
        parts,
    }
}

pub fn partition_of(j: &JVector) -> Result<Partition> {
    let m = j.m();
    if m == 0 {
        return Err(Error::InvalidInput("signature describes m = 0".into()));
    }
    let mut alpha = vec![0usize; m];
    alpha[0] = j.j0;
    for &p in &j.parts {
        alpha[p - 1] += 1;
    }
    Partition::new(alpha)
}

/// All partitions of m, ordered lexicographically on the multiplicity
/// vector (so [m] first, [1^m] last).
pub fn enumerate_partitions(m: usize) -> Result<Vec<Partition>> {
    if !(1..=MAX_PARTITION_M).contains(&m) {
        return Err(Error::InvalidInput(format!(
            "m must satisfy 1 <= m <= {MAX_PARTITION_M}, got {m}"
        )));
    }
    let mut out = Vec::new();
    let mut alpha = vec![0usize; m];
    fn rec(size: usize, remaining: usize, m: usize, alpha: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if size > m {
            if remaining == 0 {
                out.push(Partition {
                    alpha: alpha.clone(),
                });
            }
            return;
        }
        for a in 0..=remaining / size {
            alpha[size - 1] = a;
            rec(size + 1, remaining - a * size, m, alpha, out);
        }
        alpha[size - 1] = 0;
    }
    rec(1, m, m, &mut alpha, &mut out);
    Ok(out)
}

/// Partitions of m grouped by part count. Classes are ordered by part
/// count descending, members in enumeration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionClassTable {
    pub m: usize,
    pub classes: Vec<Vec<Partition>>,
}

impl PartitionClassTable {
    /// Number of classes.
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Size of each class, in class order.
    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.len()).collect()
    }
}

pub fn sim_classes(m: usize) -> Result<PartitionClassTable> {
    let all = enumerate_partitions(m)?;
    // part counts range over 1..=m and every count occurs
    let mut by_count: Vec<Vec<Partition>> = vec![Vec::new(); m + 1];
    for p in all {
        let c = p.num_parts();
        by_count[c].push(p);
    }
    let classes: Vec<Vec<Partition>> = by_count
        .into_iter()
        .rev()
        .filter(|c| !c.is_empty())
        .collect();
    Ok(PartitionClassTable { m, classes })
}

/// Number of ways to choose one representative per class.
pub fn count_selections(m: usize) -> Result<u128> {
    let table = sim_classes(m)?;
    let mut n: u128 = 1;
    for c in &table.classes {
        n = n
            .checked_mul(c.len() as u128)
            .ok_or_else(|| Error::InvalidInput("selection count overflows".into()))?;
    }
    Ok(n)
}

/// All choices of one partition per part-count class, as mixed-radix
/// counters ascending over class order.
pub fn enumerate_selections(m: usize) -> Result<Vec<Vec<Partition>>> {
    let n = count_selections(m)?;
    if n > MAX_SELECTIONS {
        return Err(Error::InvalidInput(format!(
            "{n} selections exceed the enumeration bound {MAX_SELECTIONS}"
        )));
    }
    let table = sim_classes(m)?;
    let mut out: Vec<Vec<Partition>> = Vec::with_capacity(n as usize);
    let mut idx = vec![0usize; table.classes.len()];
    loop {
        out.push(
            idx.iter()
                .zip(table.classes.iter())
                .map(|(&i, c)| c[i].clone())
                .collect(),
        );
        // increment from the last class so earlier classes vary slowest
        let mut place = table.classes.len();
        loop {
            if place == 0 {
                return Ok(out);
            }
            place -= 1;
            idx[place] += 1;
            if idx[place] < table.classes[place].len() {
                break;
            }
            idx[place] = 0;
        }
    }
}

/// Which coincidence patterns to enumerate: every one, or only those whose
/// block-size multiset matches one of the given shapes.
#[derive(Clone, Debug)]
pub enum PieceScope {
    Big,
    Small(Vec<Partition>),
}

/// The shape of a pattern: one part per block, sized by the block.
pub fn partition_of_piece(p: &PieceId) -> Partition {
    let sizes: Vec<usize> = p.blocks().iter().map(|b| b.len()).collect();
    Partition::from_parts(p.m(), &sizes).expect("block sizes partition m")
}

/// Enumerates coincidence patterns of m positions in restricted-growth
/// order. Distinct position permutations inducing the same pattern appear
/// once.
pub fn enumerate_pieces(m: usize, scope: &PieceScope) -> Result<Vec<PieceId>> {
    if !(1..=MAX_PIECE_M).contains(&m) {
        return Err(Error::InvalidInput(format!(
            "m must satisfy 1 <= m <= {MAX_PIECE_M}, got {m}"
        )));
    }
    if let PieceScope::Small(taus) = scope {
        for tau in taus {
            if tau.m() != m {
                return Err(Error::InvalidInput(format!(
                    "shape partitions {} but patterns have {} positions",
                    tau.m(),
                    m
                )));
            }
        }
    }
    let mut out = Vec::new();
    // restricted growth strings: a[0] = 0, a[i] <= 1 + max(a[..i])
    let mut a = vec![0usize; m];
    loop {
        let blocks = {
            let nb = a.iter().copied().max().unwrap() + 1;
            let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); nb];
            for (i, &bi) in a.iter().enumerate() {
                blocks[bi].push(i);
            }
            blocks
        };
        let piece = PieceId::new(m, blocks)?;
        let keep = match scope {
            PieceScope::Big => true,
            PieceScope::Small(taus) => {
                let shape = partition_of_piece(&piece);
                taus.contains(&shape)
            }
        };
        if keep {
            out.push(piece);
        }
        // successor in lex order
        let mut i = m;
        let advanced = loop {
            if i <= 1 {
                break false;
            }
            i -= 1;
            let cap = 1 + a[..i].iter().copied().max().unwrap();
            if a[i] < cap {
                a[i] += 1;
                for x in a[i + 1..].iter_mut() {
                    *x = 0;
                }
                break true;
            }
        };
        if !advanced {
            return Ok(out);
        }
    }
}

/// How many points of a q-element base a pattern classifies: the blocks
/// take pairwise distinct values, so the count is the falling factorial
/// q (q-1) ... (q-r+1) with r blocks.
pub fn count_piece_points(q: usize, piece: &PieceId) -> Result<u128> {
    if q < 1 {
        return Err(Error::InvalidInput("base size must be >= 1".into()));
    }
    let r = piece.num_blocks();
    let mut n: u128 = 1;
    for k in 0..r {
        if k >= q {
            return Ok(0);
        }
        n = n
            .checked_mul((q - k) as u128)
            .ok_or_else(|| Error::InvalidInput("point count overflows".into()))?;
    }
    Ok(n)
}

/// Pieces land in the same part-count stratum exactly when their block
/// counts agree.
pub fn pieces_related(a: &PieceId, b: &PieceId) -> bool {
    a.m() == b.m() && a.num_blocks() == b.num_blocks()
}
