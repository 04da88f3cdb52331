//! Coincidence patterns of m-tuples and their canonical arrangements.
//!
//! A piece identifier is a set partition of tuple positions: positions in
//! one block carry coinciding (or eps-clustered) values. The canonical
//! arrangement places blocks first, then the loose singletons; it is the
//! deterministic sheet representative used to seed lifts.

use std::collections::BTreeSet;

use crate::domain::{distance, is_permutation, MTuple, Point};
use crate::error::{Error, Result};

/// Default bound on the size of a generated permutation group closure (8!).
pub const DEFAULT_GROUP_BOUND: usize = 40_320;

/// A set partition of positions 0..m. Blocks are stored with ascending
/// members and ordered by their smallest member, so equal patterns compare
/// equal structurally.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PieceId {
    m: usize,
    blocks: Vec<Vec<usize>>,
}

impl PieceId {
    pub fn new(m: usize, blocks: Vec<Vec<usize>>) -> Result<PieceId> {
        let mut seen = vec![false; m];
        let mut canon: Vec<Vec<usize>> = Vec::with_capacity(blocks.len());
        for b in blocks {
            if b.is_empty() {
                return Err(Error::InvalidInput("empty block".into()));
            }
            let mut b = b;
            b.sort_unstable();
            for &i in &b {
                if i >= m || seen[i] {
                    return Err(Error::InvalidInput(format!(
                        "blocks do not partition 0..{m}"
                    )));
                }
                seen[i] = true;
            }
            canon.push(b);
        }
        if !seen.iter().all(|&s| s) {
            return Err(Error::InvalidInput(format!(
                "blocks do not partition 0..{m}"
            )));
        }
        canon.sort_by_key(|b| b[0]);
        Ok(PieceId { m, blocks: canon })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// All positions coincide with nothing: every block is a singleton.
    pub fn is_principal(&self) -> bool {
        self.blocks.len() == self.m
    }

    /// The multiplicity signature: count of singletons (j0) and the sorted
    /// list of block sizes >= 2.
    pub fn jvector(&self) -> (usize, Vec<usize>) {
        let mut j0 = 0usize;
        let mut parts: Vec<usize> = Vec::new();
        for b in &self.blocks {
            if b.len() == 1 {
                j0 += 1;
            } else {
                parts.push(b.len());
            }
        }
        parts.sort_unstable();
        (j0, parts)
    }

    /// Block index of each position.
    pub fn block_of(&self) -> Vec<usize> {
        let mut of = vec![0usize; self.m];
        for (bi, b) in self.blocks.iter().enumerate() {
            for &i in b {
                of[i] = bi;
            }
        }
        of
    }

    /// True iff every block of `self` is contained in a block of `other`
    /// (self refines other). Equal patterns refine each other.
    pub fn refines(&self, other: &PieceId) -> bool {
        if self.m != other.m {
            return false;
        }
        let of = other.block_of();
        self.blocks.iter().all(|b| {
            let target = of[b[0]];
            b.iter().all(|&i| of[i] == target)
        })
    }

    /// Strictly coarser: refined by the other pattern and not equal to it.
    pub fn strictly_coarser_than(&self, other: &PieceId) -> bool {
        self != other && other.refines(self)
    }

    pub fn render(&self) -> String {
        let inner: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                let xs: Vec<String> = b.iter().map(|i| i.to_string()).collect();
                format!("[{}]", xs.join(","))
            })
            .collect();
        format!("[{}]", inner.join(","))
    }
}

/// Single-linkage clusters at threshold eps over the tuple entries.
/// Exact mode (labels, or eps = 0) clusters by equality.
fn linkage_clusters(t: &MTuple, eps: f64) -> Vec<Vec<usize>> {
    let m = t.m();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..m {
        for j in (i + 1)..m {
            if distance(t.get(i), t.get(j)) <= eps {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut root_block: Vec<Option<usize>> = vec![None; m];
    for i in 0..m {
        let r = find(&mut parent, i);
        match root_block[r] {
            Some(bi) => blocks[bi].push(i),
            None => {
                root_block[r] = Some(blocks.len());
                blocks.push(vec![i]);
            }
        }
    }
    blocks
}

/// Classifies an m-tuple into its coincidence pattern.
///
/// With eps = 0 (mandatory for label domains) positions share a block iff
/// their points are equal. With eps > 0 the blocks are the single-linkage
/// clusters at threshold eps; the classification is trusted only when every
/// cluster has internal diameter <= eps, otherwise the sample sits too close
/// to a piece boundary and `AmbiguousCoincidence` is returned. Inter-cluster
/// gaps exceed eps by construction.
pub fn classify(t: &MTuple, eps: f64) -> Result<PieceId> {
    if !eps.is_finite() || eps < 0.0 {
        return Err(Error::InvalidInput(format!("eps must be finite >= 0, got {eps}")));
    }
    if t.is_labels() && eps != 0.0 {
        return Err(Error::InvalidInput(
            "label domains are exact: eps must be 0".into(),
        ));
    }
    let blocks = linkage_clusters(t, eps);
    for b in &blocks {
        let mut diameter = 0.0f64;
        for (ai, &i) in b.iter().enumerate() {
            for &j in &b[ai + 1..] {
                diameter = diameter.max(distance(t.get(i), t.get(j)));
            }
        }
        if diameter > eps {
            return Err(Error::AmbiguousCoincidence {
                indices: b.clone(),
                diameter,
                eps,
            });
        }
    }
    PieceId::new(t.m(), blocks)
}

/// Computes the canonical arrangement order of a classified tuple:
/// blocks first, sorted by (size descending, representative value
/// ascending), members inside a block ascending; then singletons ascending.
/// Returns the position map sigma with out[i] = t[sigma[i]].
fn arrangement_sigma(t: &MTuple, piece: &PieceId) -> Vec<usize> {
    let mut multi: Vec<&Vec<usize>> = Vec::new();
    let mut single: Vec<usize> = Vec::new();
    for b in piece.blocks() {
        if b.len() >= 2 {
            multi.push(b);
        } else {
            single.push(b[0]);
        }
    }
    // Representative value = smallest member value. Distinct blocks have a
    // positive gap, so representatives differ; the index tiebreak is for
    // byte-level determinism only.
    let mut keyed: Vec<(usize, &Point, usize, &Vec<usize>)> = multi
        .into_iter()
        .map(|b| {
            let (min_idx, min_pt) = b
                .iter()
                .map(|&i| (i, t.get(i)))
                .min_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(&b.0)))
                .expect("non-empty block");
            (b.len(), min_pt, min_idx, b)
        })
        .collect();
    keyed.sort_by(|a, b| {
        b.0.cmp(&a.0)
            .then_with(|| a.1.cmp(b.1))
            .then_with(|| a.2.cmp(&b.2))
    });
    let mut sigma: Vec<usize> = Vec::with_capacity(t.m());
    for (_, _, _, b) in keyed {
        let mut members: Vec<usize> = b.clone();
        members.sort_by(|&i, &j| t.get(i).cmp(t.get(j)).then(i.cmp(&j)));
        sigma.extend(members);
    }
    single.sort_by(|&i, &j| t.get(i).cmp(t.get(j)).then(i.cmp(&j)));
    sigma.extend(single);
    sigma
}

/// The canonical member of the sheet orbit of `t`: the arrangement with
/// blocks contiguous at the front (size descending, value ascending) and the
/// singleton tail ascending. Depends only on the value multiset of `t`, is
/// idempotent, and is the order-minimum over the allowed (piece-preserving)
/// permutations of any block-fronted arrangement.
pub fn theta_canonical(t: &MTuple, eps: f64) -> Result<MTuple> {
    let piece = classify(t, eps)?;
    let sigma = arrangement_sigma(t, &piece);
    t.permute(&sigma)
}

/// Canonical arrangement together with the position map that produced it:
/// returns (t_sigma, sigma) where t_sigma[i] = t[sigma[i]] is of primitive
/// type (blocks contiguous at the front). Applying the inverse map recovers
/// the input exactly.
pub fn primitive_rep(t: &MTuple, eps: f64) -> Result<(MTuple, Vec<usize>)> {
    let piece = classify(t, eps)?;
    let sigma = arrangement_sigma(t, &piece);
    Ok((t.permute(&sigma)?, sigma))
}

/// Projects out duplicate coordinates: keeps the first position of every
/// block plus all singletons, in position order. The result has length
/// m - sum(j_i) + k and classifies as the principal piece.
pub fn project_piece(t: &MTuple, eps: f64) -> Result<MTuple> {
    let piece = classify(t, eps)?;
    let mut first = vec![false; t.m()];
    for b in piece.blocks() {
        first[b[0]] = true;
    }
    let reduced: Vec<Point> = (0..t.m())
        .filter(|&i| first[i])
        .map(|i| t.get(i).clone())
        .collect();
    MTuple::new(reduced)
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    // (a . b)[i] = a[b[i]]: apply b, then a, as position maps.
    b.iter().map(|&i| a[i]).collect()
}

/// Expands generators to the full group closure, bounded.
pub fn group_closure(generators: &[Vec<usize>], m: usize, bound: usize) -> Result<Vec<Vec<usize>>> {
    for g in generators {
        if !is_permutation(g, m) {
            return Err(Error::InvalidInput(format!(
                "generator {g:?} is not a permutation of 0..{m}"
            )));
        }
    }
    let identity: Vec<usize> = (0..m).collect();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    seen.insert(identity.clone());
    let mut frontier = vec![identity];
    while let Some(p) = frontier.pop() {
        for g in generators {
            let q = compose(g, &p);
            if seen.insert(q.clone()) {
                if seen.len() > bound {
                    return Err(Error::GroupTooLarge {
                        reached: seen.len(),
                        bound,
                    });
                }
                frontier.push(q);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// The order-minimum of the orbit of `t` under the group generated by the
/// given position maps. m <= 8; the closure is bounded by
/// `DEFAULT_GROUP_BOUND` elements.
pub fn orbit_canonical(t: &MTuple, generators: &[Vec<usize>]) -> Result<MTuple> {
    orbit_canonical_bounded(t, generators, DEFAULT_GROUP_BOUND)
}

pub fn orbit_canonical_bounded(
    t: &MTuple,
    generators: &[Vec<usize>],
    bound: usize,
) -> Result<MTuple> {
    if t.m() > 8 {
        return Err(Error::InvalidInput(format!(
            "orbit canonicalization supports m <= 8, got {}",
            t.m()
        )));
    }
    let group = group_closure(generators, t.m(), bound)?;
    let mut best: Option<MTuple> = None;
    for sigma in &group {
        let cand = t.permute(sigma)?;
        best = Some(match best {
            None => cand,
            Some(cur) => {
                if cand.points() < cur.points() {
                    cand
                } else {
                    cur
                }
            }
        });
    }
    Ok(best.expect("group contains identity"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{f_canonical, invert_permutation, sp_canonical};
    use itertools::Itertools;

    fn labels(names: &[&str]) -> MTuple {
        MTuple::new(names.iter().map(|s| Point::label(*s)).collect()).unwrap()
    }

    fn scalars(xs: &[f64]) -> MTuple {
        MTuple::new(xs.iter().map(|&x| Point::scalar(x)).collect()).unwrap()
    }

    // Independent clustering oracle: transitive closure over the boolean
    // "within eps" relation, then an explicit diameter scan.
    fn oracle_clusters(t: &MTuple, eps: f64) -> (Vec<Vec<usize>>, bool) {
        let m = t.m();
        let mut reach = vec![vec![false; m]; m];
        for (i, row) in reach.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = i == j || distance(t.get(i), t.get(j)) <= eps;
            }
        }
        for k in 0..m {
            for i in 0..m {
                for j in 0..m {
                    if reach[i][k] && reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
        let mut assigned = vec![usize::MAX; m];
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for i in 0..m {
            if assigned[i] == usize::MAX {
                let bi = blocks.len();
                blocks.push(Vec::new());
                for j in i..m {
                    if reach[i][j] {
                        assigned[j] = bi;
                        blocks[bi].push(j);
                    }
                }
            }
        }
        let mut separated = true;
        for b in &blocks {
            for &i in b {
                for &j in b {
                    if distance(t.get(i), t.get(j)) > eps {
                        separated = false;
                    }
                }
            }
        }
        (blocks, separated)
    }

    #[test]
    fn classify_exact_labels() {
        let t = labels(&["a", "b", "a"]);
        let p = classify(&t, 0.0).unwrap();
        assert_eq!(p.blocks(), &[vec![0, 2], vec![1]]);
        assert_eq!(p.jvector(), (1, vec![2]));
        assert!(classify(&t, 0.1).is_err());
    }

    #[test]
    fn classify_eps_clusters() {
        // d=1, eps=0.01: first two points cluster, third stays loose.
        let t = scalars(&[0.000, 0.005, 1.000]);
        let p = classify(&t, 0.01).unwrap();
        assert_eq!(p.blocks(), &[vec![0, 1], vec![2]]);
    }

    #[test]
    fn classify_chain_is_ambiguous() {
        // 0.000 - 0.008 - 0.016 chains at eps = 0.01 with diameter 0.016.
        let t = scalars(&[0.000, 0.008, 0.016]);
        match classify(&t, 0.01) {
            Err(Error::AmbiguousCoincidence {
                indices, diameter, ..
            }) => {
                assert_eq!(indices, vec![0, 1, 2]);
                assert!(diameter > 0.01);
            }
            other => panic!("expected ambiguity, got {other:?}"),
        }
    }

    #[test]
    fn classify_matches_clustering_oracle() {
        // Sweep small scalar tuples against the independent oracle.
        let grid = [-0.02, 0.0, 0.004, 0.011, 0.5, 0.506, 1.0];
        let eps = 0.01;
        for m in 1..=3usize {
            for combo in (0..grid.len()).combinations_with_replacement(m) {
                for perm in combo.iter().permutations(m) {
                    let xs: Vec<f64> = perm.iter().map(|&&gi| grid[gi]).collect();
                    let t = scalars(&xs);
                    let (oracle_blocks, separated) = oracle_clusters(&t, eps);
                    match classify(&t, eps) {
                        Ok(p) => {
                            assert!(separated, "oracle says ambiguous for {xs:?}");
                            let expect = PieceId::new(m, oracle_blocks).unwrap();
                            assert_eq!(p, expect, "pattern mismatch for {xs:?}");
                        }
                        Err(Error::AmbiguousCoincidence { .. }) => {
                            assert!(!separated, "oracle says separated for {xs:?}");
                        }
                        Err(e) => panic!("unexpected error {e:?}"),
                    }
                }
            }
        }
    }

    #[test]
    fn eps_zero_never_ambiguous() {
        let t = scalars(&[0.0, 1e-300, 0.0]);
        let p = classify(&t, 0.0).unwrap();
        assert_eq!(p.blocks(), &[vec![0, 2], vec![1]]);
    }

    #[test]
    fn theta_canonical_examples() {
        // Singleton moves behind the block.
        let t = labels(&["b", "a", "a"]);
        assert_eq!(theta_canonical(&t, 0.0).unwrap(), labels(&["a", "a", "b"]));
        // Blocks first, then singletons ascending.
        let t = labels(&["d", "c", "c", "a"]);
        assert_eq!(
            theta_canonical(&t, 0.0).unwrap(),
            labels(&["c", "c", "a", "d"])
        );
    }

    // Oracle: the order-minimum over all block-fronted arrangements of t
    // whose block order obeys (size desc, value asc).
    fn theta_oracle(t: &MTuple) -> MTuple {
        let m = t.m();
        let mut best: Option<MTuple> = None;
        for sigma in (0..m).permutations(m) {
            let cand = t.permute(&sigma).unwrap();
            let piece = classify(&cand, 0.0).unwrap();
            // blocks must be contiguous from the front, sizes descending,
            // then singletons; block values ascending among equal sizes.
            let mut pos = 0usize;
            let mut ok = true;
            let mut sized: Vec<(usize, &Point)> = Vec::new();
            let mut in_blocks = true;
            while pos < m && ok {
                let b = piece
                    .blocks()
                    .iter()
                    .find(|b| b.contains(&pos))
                    .unwrap();
                let contiguous = b.iter().enumerate().all(|(k, &i)| i == pos + k);
                if !contiguous {
                    ok = false;
                    break;
                }
                if b.len() >= 2 {
                    if !in_blocks {
                        ok = false;
                        break;
                    }
                    sized.push((b.len(), cand.get(pos)));
                } else {
                    in_blocks = false;
                }
                pos += b.len();
            }
            if ok {
                for w in sized.windows(2) {
                    let (s1, v1) = w[0];
                    let (s2, v2) = w[1];
                    if s1 < s2 || (s1 == s2 && v1 > v2) {
                        ok = false;
                    }
                }
            }
            if ok {
                best = Some(match best {
                    None => cand,
                    Some(cur) => {
                        if cand.points() < cur.points() {
                            cand
                        } else {
                            cur
                        }
                    }
                });
            }
        }
        best.unwrap()
    }

    #[test]
    fn theta_canonical_matches_orbit_minimum_oracle() {
        let alphabet = ["a", "b", "c", "d"];
        for m in 1..=4usize {
            for combo in (0..alphabet.len()).combinations_with_replacement(m) {
                for perm in combo.iter().permutations(m) {
                    let names: Vec<&str> = perm.iter().map(|&&i| alphabet[i]).collect();
                    let t = labels(&names);
                    let got = theta_canonical(&t, 0.0).unwrap();
                    assert_eq!(got, theta_oracle(&t), "input {names:?}");
                }
            }
        }
    }

    #[test]
    fn theta_canonical_idempotent_and_multiset_invariant() {
        let t = labels(&["d", "c", "c", "a", "c"]);
        let once = theta_canonical(&t, 0.0).unwrap();
        assert_eq!(theta_canonical(&once, 0.0).unwrap(), once);
        for sigma in (0..5usize).permutations(5) {
            let u = t.permute(&sigma).unwrap();
            assert_eq!(theta_canonical(&u, 0.0).unwrap(), once);
            assert_eq!(sp_canonical(&u), sp_canonical(&t));
        }
    }

    #[test]
    fn primitive_rep_round_trips() {
        let t = labels(&["b", "a", "a", "c"]);
        let (arr, sigma) = primitive_rep(&t, 0.0).unwrap();
        assert_eq!(arr, labels(&["a", "a", "b", "c"]));
        assert_eq!(sigma, vec![1, 2, 0, 3]);
        assert_eq!(arr.permute(&invert_permutation(&sigma)).unwrap(), t);

        let t = labels(&["c", "b", "c"]);
        let (arr, sigma) = primitive_rep(&t, 0.0).unwrap();
        assert_eq!(arr, labels(&["c", "c", "b"]));
        assert_eq!(sigma, vec![0, 2, 1]);
        assert_eq!(arr.permute(&invert_permutation(&sigma)).unwrap(), t);
    }

    #[test]
    fn project_piece_keeps_one_per_block() {
        let t = labels(&["a", "a", "b", "c"]);
        let r = project_piece(&t, 0.0).unwrap();
        assert_eq!(r, labels(&["a", "b", "c"]));
        assert!(classify(&r, 0.0).unwrap().is_principal());
        assert_eq!(f_canonical(&r), f_canonical(&t));
    }

    #[test]
    fn project_piece_fixed_pattern_bijection() {
        // For one fixed pattern over a small alphabet, projection is a
        // bijection onto distinct reduced tuples, inverted by re-expansion.
        let alphabet = ["a", "b", "c", "d"];
        let pattern = PieceId::new(4, vec![vec![1, 2], vec![0], vec![3]]).unwrap();
        let mut seen = BTreeSet::new();
        let mut count = 0usize;
        for combo in (0..alphabet.len()).permutations(3) {
            // values: position 0, block {1,2}, position 3 pairwise distinct
            let (v0, vb, v3) = (alphabet[combo[0]], alphabet[combo[1]], alphabet[combo[2]]);
            let t = labels(&[v0, vb, vb, v3]);
            assert_eq!(classify(&t, 0.0).unwrap(), pattern);
            let r = project_piece(&t, 0.0).unwrap();
            assert_eq!(r, labels(&[v0, vb, v3]));
            // explicit inverse: re-expand by the pattern's block of each position
            let expand = MTuple::new(
                pattern
                    .block_of()
                    .iter()
                    .map(|&bi| {
                        // block order by smallest member: {0} -> r[0], {1,2} -> r[1], {3} -> r[2]
                        r.get(bi).clone()
                    })
                    .collect(),
            )
            .unwrap();
            assert_eq!(expand, t);
            assert!(seen.insert(r.points().to_vec()));
            count += 1;
        }
        assert_eq!(count, 4 * 3 * 2);
        assert_eq!(seen.len(), count);
    }

    #[test]
    fn orbit_canonical_full_group_is_sp_canonical() {
        let t = labels(&["c", "a", "b"]);
        // adjacent transpositions generate the full symmetric group
        let gens = vec![vec![1, 0, 2], vec![0, 2, 1]];
        let c = orbit_canonical(&t, &gens).unwrap();
        assert_eq!(c.points(), sp_canonical(&t).points());
    }

    #[test]
    fn orbit_canonical_cyclic_subgroup() {
        let t = labels(&["b", "a", "c"]);
        // cyclic rotation only: orbit {bac, acb, cba}; minimum is acb.
        let gens = vec![vec![1, 2, 0]];
        let c = orbit_canonical(&t, &gens).unwrap();
        assert_eq!(c, labels(&["a", "c", "b"]));
    }

    #[test]
    fn orbit_canonical_respects_bound() {
        let t = labels(&["a", "b", "c", "d", "e"]);
        let gens = vec![vec![1, 0, 2, 3, 4], vec![1, 2, 3, 4, 0]];
        // S5 has 120 elements; bound of 50 must trip.
        match orbit_canonical_bounded(&t, &gens, 50) {
            Err(Error::GroupTooLarge { reached, bound }) => {
                assert!(reached > 50 && bound == 50);
            }
            other => panic!("expected GroupTooLarge, got {other:?}"),
        }
        assert!(orbit_canonical_bounded(&t, &gens, 120).is_ok());
    }

    #[test]
    fn orbit_canonical_rejects_large_m() {
        let t = labels(&["a", "b", "c", "d", "e", "f", "g", "h", "i"]);
        assert!(orbit_canonical(&t, &[]).is_err());
    }

    #[test]
    fn group_closure_sizes() {
        // S3 from adjacent transpositions.
        let g = group_closure(&[vec![1, 0, 2], vec![0, 2, 1]], 3, 100).unwrap();
        assert_eq!(g.len(), 6);
        // trivial group
        let g = group_closure(&[], 3, 100).unwrap();
        assert_eq!(g.len(), 1);
    }

    #[test]
    fn refinement_order() {
        let fine = PieceId::new(3, vec![vec![0], vec![1], vec![2]]).unwrap();
        let mid = PieceId::new(3, vec![vec![0, 1], vec![2]]).unwrap();
        let coarse = PieceId::new(3, vec![vec![0, 1, 2]]).unwrap();
        assert!(fine.refines(&mid) && mid.refines(&coarse));
        assert!(mid.strictly_coarser_than(&fine));
        assert!(coarse.strictly_coarser_than(&mid));
        assert!(!fine.strictly_coarser_than(&mid));
        let other = PieceId::new(3, vec![vec![0, 2], vec![1]]).unwrap();
        assert!(!other.refines(&mid) && !mid.refines(&other));
    }

    #[test]
    fn pieceid_validation() {
        assert!(PieceId::new(3, vec![vec![0, 1]]).is_err());
        assert!(PieceId::new(3, vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(PieceId::new(3, vec![vec![0, 1], vec![2], vec![]]).is_err());
        let p = PieceId::new(3, vec![vec![2], vec![1, 0]]).unwrap();
        assert_eq!(p.blocks(), &[vec![0, 1], vec![2]]);
    }
}
