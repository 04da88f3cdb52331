//! Exact quotients of a finite product space: the multiset quotient (by
//! coordinate permutation) and the support quotient (by equal value sets),
//! each with its quotient topology, plus openness and saturation checks for
//! the two projection maps.

use std::collections::BTreeMap;

use serde::Serialize;

use super::FiniteTopology;
use crate::error::{Error, Result};
use crate::partitions::{enumerate_pieces, PieceScope};

pub const MAX_PRODUCT: u64 = 1_000_000;
/// Arrangement sweeps grow with m!, so saturation is limited to small m.
pub const MAX_ARRANGE_M: usize = 8;
/// Quotient topologies are materialized only below this class count.
pub const MATERIALIZE_CLASS_BOUND: usize = 16;

#[derive(Clone, Debug, Serialize)]
pub struct QuotientSpaces {
    pub m: usize,
    pub base: FiniteTopology,
    /// Multiset classes as sorted point lists.
    pub sp_elements: Vec<Vec<usize>>,
    /// Support classes as sorted distinct point lists.
    pub f_elements: Vec<Vec<usize>>,
    /// Quotient opens as class bitmasks, when few enough classes exist.
    pub sp_opens: Option<Vec<u64>>,
    pub f_opens: Option<Vec<u64>>,
    /// Image of every basis box is open in the quotient.
    pub sp_map_open: bool,
    pub f_map_open: bool,
    /// Preimage of the multiset of a basis box equals the union of its
    /// coordinate rearrangements.
    pub sp_saturation_ok: bool,
    /// Preimage of the support of a basis box equals the union of pattern
    /// transports of its rearrangements.
    pub f_saturation_ok: bool,
    pub boxes_checked: u64,
}

struct Product {
    n: usize,
    m: usize,
    size: usize,
    min_nbhds: Vec<u32>,
}

impl Product {
    fn new(t: &FiniteTopology, m: usize) -> Result<Product> {
        let n = t.n();
        let size = (n as u64).checked_pow(m as u32).filter(|&s| s <= MAX_PRODUCT);
        let Some(size) = size else {
            return Err(Error::InvalidInput(format!(
                "product size {n}^{m} exceeds {MAX_PRODUCT}"
            )));
        };
        Ok(Product {
            n,
            m,
            size: size as usize,
            min_nbhds: (0..n).map(|x| t.min_nbhd(x)).collect(),
        })
    }

    fn decode(&self, mut code: usize) -> Vec<usize> {
        let mut tuple = vec![0usize; self.m];
        for slot in tuple.iter_mut() {
            *slot = code % self.n;
            code /= self.n;
        }
        tuple
    }

    fn encode(&self, tuple: &[usize]) -> usize {
        tuple.iter().rev().fold(0usize, |acc, &x| acc * self.n + x)
    }

    /// Membership of every tuple whose coordinates lie in the given masks.
    fn fill_box(&self, factors: &[u32], out: &mut [bool]) {
        fn rec(p: &Product, factors: &[u32], i: usize, code: usize, stride: usize, out: &mut [bool]) {
            if i == p.m {
                out[code] = true;
                return;
            }
            let mut rest = factors[i];
            while rest != 0 {
                let x = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                rec(p, factors, i + 1, code + x * stride, stride * p.n, out);
            }
        }
        rec(self, factors, 0, 0, 1, out);
    }

    /// A set is open in the product iff it contains the minimal box around
    /// each of its members.
    fn is_open(&self, set: &[bool]) -> bool {
        let mut boxbuf = vec![false; self.size];
        for code in 0..self.size {
            if !set[code] {
                continue;
            }
            let tuple = self.decode(code);
            let factors: Vec<u32> = tuple.iter().map(|&x| self.min_nbhds[x]).collect();
            boxbuf.iter_mut().for_each(|b| *b = false);
            self.fill_box(&factors, &mut boxbuf);
            for inner in 0..self.size {
                if boxbuf[inner] && !set[inner] {
                    return false;
                }
            }
        }
        true
    }
}

fn sp_of(tuple: &[usize]) -> Vec<usize> {
    let mut v = tuple.to_vec();
    v.sort_unstable();
    v
}

fn f_of(tuple: &[usize]) -> Vec<usize> {
    let mut v = tuple.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// Calls `f` once per distinct rearrangement of `items`.
fn for_each_arrangement(items: &[usize], f: &mut impl FnMut(&[usize])) {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &x in items {
        *counts.entry(x).or_insert(0) += 1;
    }
    let mut cur = Vec::with_capacity(items.len());
    fn rec(
        counts: &mut BTreeMap<usize, usize>,
        cur: &mut Vec<usize>,
        m: usize,
        f: &mut impl FnMut(&[usize]),
    ) {
        if cur.len() == m {
            f(cur);
            return;
        }
        let keys: Vec<usize> = counts.keys().copied().collect();
        for k in keys {
            let c = counts[&k];
            if c == 0 {
                continue;
            }
            counts.insert(k, c - 1);
            cur.push(k);
            rec(counts, cur, m, f);
            cur.pop();
            counts.insert(k, c);
        }
    }
    let m = items.len();
    rec(&mut counts, &mut cur, m, f);
}

pub fn build_quotients(t: &FiniteTopology, m: usize) -> Result<QuotientSpaces> {
    if m < 1 {
        return Err(Error::InvalidInput("m must be >= 1".into()));
    }
    let product = Product::new(t, m)?;

    // classes in lexicographic order of their canonical form
    let mut sp_index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut f_index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for code in 0..product.size {
        let tuple = product.decode(code);
        let next = sp_index.len();
        sp_index.entry(sp_of(&tuple)).or_insert(next);
        let next = f_index.len();
        f_index.entry(f_of(&tuple)).or_insert(next);
    }
    // reindex so class ids follow the sorted element order
    let sp_elements: Vec<Vec<usize>> = sp_index.keys().cloned().collect();
    let f_elements: Vec<Vec<usize>> = f_index.keys().cloned().collect();
    for (i, e) in sp_elements.iter().enumerate() {
        sp_index.insert(e.clone(), i);
    }
    for (i, e) in f_elements.iter().enumerate() {
        f_index.insert(e.clone(), i);
    }
    let sp_class: Vec<usize> = (0..product.size)
        .map(|c| sp_index[&sp_of(&product.decode(c))])
        .collect();
    let f_class: Vec<usize> = (0..product.size)
        .map(|c| f_index[&f_of(&product.decode(c))])
        .collect();

    let preimage_open = |classes: &[bool], class_of: &[usize]| -> bool {
        let set: Vec<bool> = (0..product.size).map(|c| classes[class_of[c]]).collect();
        product.is_open(&set)
    };

    let materialize = |count: usize, class_of: &[usize]| -> Option<Vec<u64>> {
        if count > MATERIALIZE_CLASS_BOUND {
            return None;
        }
        let mut opens = Vec::new();
        for mask in 0..(1u64 << count) {
            let classes: Vec<bool> = (0..count).map(|i| mask & (1 << i) != 0).collect();
            if preimage_open(&classes, class_of) {
                opens.push(mask);
            }
        }
        Some(opens)
    };
    let sp_opens = materialize(sp_elements.len(), &sp_class);
    let f_opens = materialize(f_elements.len(), &f_class);

    // sweep every basis box: products of opens per coordinate
    let box_count = (t.opens().len() as u64).checked_pow(m as u32);
    if box_count.is_none_or(|c| c > MAX_PRODUCT) {
        return Err(Error::InvalidInput(format!(
            "basis sweep of {}^{m} boxes exceeds {MAX_PRODUCT}",
            t.opens().len()
        )));
    }
    let patterns = if m <= MAX_ARRANGE_M {
        Some(enumerate_pieces(m, &PieceScope::Big)?)
    } else {
        None
    };

    let mut sp_map_open = true;
    let mut f_map_open = true;
    let mut sp_saturation_ok = true;
    let mut f_saturation_ok = true;
    let mut boxes_checked = 0u64;

    let mut factors = vec![0u32; m];
    let mut box_members = vec![false; product.size];
    let nopens = t.opens().len();
    for combo in 0..nopens.pow(m as u32) {
        let mut c = combo;
        for f in factors.iter_mut() {
            *f = t.opens()[c % nopens];
            c /= nopens;
        }
        boxes_checked += 1;
        box_members.iter_mut().for_each(|b| *b = false);
        product.fill_box(&factors, &mut box_members);

        // image classes, then their full preimages must be product-open
        let mut sp_image = vec![false; sp_elements.len()];
        let mut f_image = vec![false; f_elements.len()];
        for code in 0..product.size {
            if box_members[code] {
                sp_image[sp_class[code]] = true;
                f_image[f_class[code]] = true;
            }
        }
        if !preimage_open(&sp_image, &sp_class) {
            sp_map_open = false;
        }
        if !preimage_open(&f_image, &f_class) {
            f_map_open = false;
        }

        if let Some(patterns) = &patterns {
            // direct preimages of the image class sets
            let sp_direct: Vec<bool> = (0..product.size)
                .map(|c| sp_image[sp_class[c]])
                .collect();
            let f_direct: Vec<bool> = (0..product.size).map(|c| f_image[f_class[c]]).collect();

            // rearrangement route: union of coordinate shuffles of members
            let mut sp_union = vec![false; product.size];
            let mut f_union = vec![false; product.size];
            for (code, member) in box_members.iter().enumerate() {
                if !member {
                    continue;
                }
                let tuple = product.decode(code);
                for_each_arrangement(&tuple, &mut |arr| {
                    sp_union[product.encode(arr)] = true;
                    // transport the arrangement onto every pattern with as
                    // many blocks as it has distinct values
                    let mut reduced: Vec<usize> = Vec::new();
                    for &x in arr {
                        if !reduced.contains(&x) {
                            reduced.push(x);
                        }
                    }
                    for q in patterns {
                        if q.num_blocks() != reduced.len() {
                            continue;
                        }
                        let of = q.block_of();
                        let u: Vec<usize> = (0..m).map(|i| reduced[of[i]]).collect();
                        f_union[product.encode(&u)] = true;
                    }
                });
            }
            if sp_direct != sp_union {
                sp_saturation_ok = false;
            }
            if f_direct != f_union {
                f_saturation_ok = false;
            }
        }
    }

    Ok(QuotientSpaces {
        m,
        base: t.clone(),
        sp_elements,
        f_elements,
        sp_opens,
        f_opens,
        sp_map_open,
        f_map_open,
        sp_saturation_ok,
        f_saturation_ok,
        boxes_checked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finitetop::enumerate_topologies;
    use std::collections::BTreeSet;

    fn binomial(n: u64, k: u64) -> u64 {
        if k > n {
            return 0;
        }
        let mut r = 1u64;
        for i in 0..k {
            r = r * (n - i) / (i + 1);
        }
        r
    }

    // Independent quotient oracle over a discrete base: group raw tuples.
    fn brute_counts(q: usize, m: usize) -> (usize, usize) {
        let size = q.pow(m as u32);
        let mut sps = BTreeSet::new();
        let mut fs = BTreeSet::new();
        for mut code in 0..size {
            let mut t = Vec::with_capacity(m);
            for _ in 0..m {
                t.push(code % q);
                code /= q;
            }
            sps.insert(sp_of(&t));
            fs.insert(f_of(&t));
        }
        (sps.len(), fs.len())
    }

    #[test]
    fn discrete_counts_match_binomial_formulas() {
        for q in 1..=4usize {
            let t = FiniteTopology::discrete(q);
            for m in 1..=3usize {
                let qr = build_quotients(&t, m).unwrap();
                let (sp_brute, f_brute) = brute_counts(q, m);
                assert_eq!(qr.sp_elements.len(), sp_brute);
                assert_eq!(qr.f_elements.len(), f_brute);
                assert_eq!(
                    qr.sp_elements.len() as u64,
                    binomial((q + m - 1) as u64, m as u64)
                );
                let f_formula: u64 = (1..=m as u64).map(|k| binomial(q as u64, k)).sum();
                assert_eq!(qr.f_elements.len() as u64, f_formula);
            }
        }
        // the two quotients coincide in size at m=2
        for q in 1..=4usize {
            let t = FiniteTopology::discrete(q);
            let qr = build_quotients(&t, 2).unwrap();
            assert_eq!(qr.sp_elements.len(), qr.f_elements.len());
        }
        let t = FiniteTopology::discrete(3);
        let qr = build_quotients(&t, 3).unwrap();
        assert_eq!(qr.sp_elements.len(), 10);
        assert_eq!(qr.f_elements.len(), 7);
    }

    #[test]
    fn m1_quotients_mirror_the_base() {
        for n in 1..=3usize {
            for t in enumerate_topologies(n).unwrap() {
                let qr = build_quotients(&t, 1).unwrap();
                assert_eq!(qr.sp_elements.len(), n);
                assert_eq!(qr.f_elements.len(), n);
                // element i is the singleton {i}, so class masks equal
                // point masks and the quotient topology is the base one
                let opens: Vec<u64> = t.opens().iter().map(|&o| o as u64).collect();
                assert_eq!(qr.sp_opens.as_ref().unwrap(), &opens);
                assert_eq!(qr.f_opens.as_ref().unwrap(), &opens);
                assert!(qr.sp_map_open && qr.f_map_open);
                assert!(qr.sp_saturation_ok && qr.f_saturation_ok);
            }
        }
    }

    // Independent product-open oracle: materialize the whole product
    // topology as the union closure of all basis boxes.
    fn product_opens_brute(t: &FiniteTopology, m: usize) -> BTreeSet<Vec<bool>> {
        let product = Product::new(t, m).unwrap();
        let nopens = t.opens().len();
        let mut basis: Vec<Vec<bool>> = Vec::new();
        for combo in 0..nopens.pow(m as u32) {
            let mut c = combo;
            let mut factors = vec![0u32; m];
            for f in factors.iter_mut() {
                *f = t.opens()[c % nopens];
                c /= nopens;
            }
            let mut members = vec![false; product.size];
            product.fill_box(&factors, &mut members);
            basis.push(members);
        }
        // close under unions: iterate to fixpoint
        let mut family: BTreeSet<Vec<bool>> = basis.iter().cloned().collect();
        loop {
            let mut grew = false;
            let snapshot: Vec<Vec<bool>> = family.iter().cloned().collect();
            for a in &snapshot {
                for b in &snapshot {
                    let u: Vec<bool> = a.iter().zip(b).map(|(&x, &y)| x || y).collect();
                    if family.insert(u) {
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        family
    }

    #[test]
    fn min_box_openness_matches_union_closure_oracle() {
        for n in 1..=2usize {
            for t in enumerate_topologies(n).unwrap() {
                for m in 1..=2usize {
                    let product = Product::new(&t, m).unwrap();
                    let family = product_opens_brute(&t, m);
                    for code in 0..(1usize << product.size) {
                        let set: Vec<bool> =
                            (0..product.size).map(|i| code & (1 << i) != 0).collect();
                        assert_eq!(
                            product.is_open(&set),
                            family.contains(&set),
                            "n={n} m={m} code={code:b}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn quotient_opens_against_brute_force() {
        // Sierpinski base, m=2: the multiset quotient opens form a chain.
        let t = FiniteTopology::new(2, vec![0b00, 0b10, 0b11]).unwrap();
        let qr = build_quotients(&t, 2).unwrap();
        assert_eq!(qr.sp_elements, vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
        // classes: 0 = {0,0}, 1 = {0,1}, 2 = {1,1}; chain 0 < {2} < {1,2} < all
        assert_eq!(qr.sp_opens.as_ref().unwrap(), &vec![0b000, 0b100, 0b110, 0b111]);
        assert!(qr.sp_map_open && qr.f_map_open);
        assert!(qr.sp_saturation_ok && qr.f_saturation_ok);
    }

    #[test]
    fn openness_and_saturation_across_all_small_bases() {
        for n in 1..=3usize {
            for t in enumerate_topologies(n).unwrap() {
                for m in 1..=2usize {
                    let qr = build_quotients(&t, m).unwrap();
                    assert!(qr.sp_map_open, "sp not open: n={n} code={}", t.code());
                    assert!(qr.f_map_open, "f not open: n={n} code={}", t.code());
                    assert!(qr.sp_saturation_ok, "sp saturation: n={n} code={}", t.code());
                    assert!(qr.f_saturation_ok, "f saturation: n={n} code={}", t.code());
                }
            }
        }
    }

    #[test]
    fn size_bounds_are_enforced() {
        let t = FiniteTopology::discrete(4);
        assert!(build_quotients(&t, 10).is_err()); // 4^10 > 10^6
        assert!(build_quotients(&t, 0).is_err());
    }

    #[test]
    fn arrangements_cover_distinct_orderings_exactly() {
        let mut seen = Vec::new();
        for_each_arrangement(&[1, 0, 1], &mut |a| seen.push(a.to_vec()));
        assert_eq!(
            seen,
            vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]
        );
        let mut count = 0usize;
        for_each_arrangement(&[0, 1, 2, 3], &mut |_| count += 1);
        assert_eq!(count, 24);
    }
}
