//! Exact topology on small finite ground sets.
//!
//! Subsets are bitmasks over at most 4 points, so every operator is a few
//! word operations and every claim about opens can be settled by exhaustive
//! sweep. The two boundary refinements split the boundary of A by whether
//! some neighborhood of the point loses all its interior when A is removed.

pub mod audit;
pub mod quotient;

use crate::error::{Error, Result};

pub const MAX_GROUND: usize = 4;

/// The number of distinct topologies on 1..=4 labeled points.
pub const TOPOLOGY_COUNTS: [usize; 4] = [1, 4, 29, 355];

#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub struct FiniteTopology {
    n: usize,
    opens: Vec<u32>,
}

/// The five operator results for one subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryReport {
    pub interior: u32,
    pub closure: u32,
    pub boundary: u32,
    pub boundary_interior: u32,
    pub boundary_exterior: u32,
}

impl FiniteTopology {
    pub fn new(n: usize, mut opens: Vec<u32>) -> Result<FiniteTopology> {
        if !(1..=MAX_GROUND).contains(&n) {
            return Err(Error::InvalidInput(format!(
                "ground set must have 1..={MAX_GROUND} points, got {n}"
            )));
        }
        let full = (1u32 << n) - 1;
        opens.sort_unstable();
        opens.dedup();
        if opens.iter().any(|&s| s > full) {
            return Err(Error::InvalidInput("open set outside the ground set".into()));
        }
        let t = FiniteTopology { n, opens };
        if !t.is_open(0) || !t.is_open(full) {
            return Err(Error::InvalidInput(
                "the empty set and the full set must be open".into(),
            ));
        }
        for &a in &t.opens {
            for &b in &t.opens {
                if !t.is_open(a | b) || !t.is_open(a & b) {
                    return Err(Error::InvalidInput(
                        "opens must be closed under union and intersection".into(),
                    ));
                }
            }
        }
        Ok(t)
    }

    pub fn indiscrete(n: usize) -> FiniteTopology {
        let full = (1u32 << n) - 1;
        FiniteTopology {
            n,
            opens: if full == 0 { vec![0] } else { vec![0, full] },
        }
    }

    pub fn discrete(n: usize) -> FiniteTopology {
        FiniteTopology {
            n,
            opens: (0..=(1u32 << n) - 1).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn full_mask(&self) -> u32 {
        (1u32 << self.n) - 1
    }

    pub fn opens(&self) -> &[u32] {
        &self.opens
    }

    pub fn is_open(&self, s: u32) -> bool {
        self.opens.binary_search(&s).is_ok()
    }

    pub fn is_closed(&self, s: u32) -> bool {
        self.is_open(self.full_mask() & !s)
    }

    /// Union of all opens inside s.
    pub fn interior(&self, s: u32) -> u32 {
        let mut out = 0u32;
        for &o in &self.opens {
            if o & !s == 0 {
                out |= o;
            }
        }
        out
    }

    /// Complement of the interior of the complement.
    pub fn closure(&self, s: u32) -> u32 {
        self.full_mask() & !self.interior(self.full_mask() & !s)
    }

    pub fn boundary(&self, s: u32) -> u32 {
        self.closure(s) & !self.interior(s)
    }

    /// Intersection of all opens containing x: the smallest neighborhood,
    /// which exists because the ground set is finite.
    pub fn min_nbhd(&self, x: usize) -> u32 {
        let bit = 1u32 << x;
        let mut out = self.full_mask();
        for &o in &self.opens {
            if o & bit != 0 {
                out &= o;
            }
        }
        out
    }

    /// Boundary points x admitting an open neighborhood U with
    /// int(U \ A) empty. Shrinking U only shrinks int(U \ A), so testing
    /// the minimal neighborhood settles the existential.
    pub fn boundary_interior(&self, a: u32) -> u32 {
        let mut out = 0u32;
        let mut rest = self.boundary(a);
        while rest != 0 {
            let x = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if self.interior(self.min_nbhd(x) & !a) == 0 {
                out |= 1 << x;
            }
        }
        out
    }

    /// Boundary points where every neighborhood keeps interior after A is
    /// removed: the complement of `boundary_interior` inside the boundary.
    pub fn boundary_exterior(&self, a: u32) -> u32 {
        self.boundary(a) & !self.boundary_interior(a)
    }

    pub fn boundary_report(&self, a: u32) -> BoundaryReport {
        BoundaryReport {
            interior: self.interior(a),
            closure: self.closure(a),
            boundary: self.boundary(a),
            boundary_interior: self.boundary_interior(a),
            boundary_exterior: self.boundary_exterior(a),
        }
    }

    /// No clopen subset strictly between empty and full.
    pub fn is_connected(&self) -> bool {
        let full = self.full_mask();
        self.opens
            .iter()
            .all(|&o| o == 0 || o == full || !self.is_closed(o))
    }

    /// Stable identity: one bit per open subset mask.
    pub fn code(&self) -> u64 {
        self.opens.iter().fold(0u64, |acc, &o| acc | (1u64 << o))
    }

    /// Opens rendered as point lists, e.g. "{}, {0}, {0,1}".
    pub fn render(&self) -> String {
        let sets: Vec<String> = self.opens.iter().map(|&o| render_mask(o)).collect();
        sets.join(", ")
    }
}

pub fn render_mask(mask: u32) -> String {
    let mut xs = Vec::new();
    let mut rest = mask;
    while rest != 0 {
        let x = rest.trailing_zeros();
        rest &= rest - 1;
        xs.push(x.to_string());
    }
    format!("{{{}}}", xs.join(","))
}

/// Every topology on n labeled points, ascending by `code`. The indiscrete
/// topology is always first and the discrete one last.
pub fn enumerate_topologies(n: usize) -> Result<Vec<FiniteTopology>> {
    if !(1..=MAX_GROUND).contains(&n) {
        return Err(Error::InvalidInput(format!(
            "ground set must have 1..={MAX_GROUND} points, got {n}"
        )));
    }
    let full = (1u32 << n) - 1;
    let subsets = 1u64 << (full as u64 + 1);
    let mut out = Vec::new();
    // family codes with the mandatory members pre-set
    let mandatory = 1u64 | (1u64 << full);
    for code in 0..subsets {
        if code & mandatory != mandatory {
            continue;
        }
        let opens: Vec<u32> = (0..=full).filter(|&m| code & (1u64 << m) != 0).collect();
        let mut ok = true;
        'axiom: for &a in &opens {
            for &b in &opens {
                if code & (1u64 << (a | b)) == 0 || code & (1u64 << (a & b)) == 0 {
                    ok = false;
                    break 'axiom;
                }
            }
        }
        if ok {
            out.push(FiniteTopology { n, opens });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sierpinski() -> FiniteTopology {
        // points a=0, b=1; opens {}, {b}, {a,b}
        FiniteTopology::new(2, vec![0b00, 0b10, 0b11]).unwrap()
    }

    #[test]
    fn topology_counts() {
        for n in 1..=4usize {
            let ts = enumerate_topologies(n).unwrap();
            assert_eq!(ts.len(), TOPOLOGY_COUNTS[n - 1], "n={n}");
            // codes strictly ascending, indiscrete first, discrete last
            for w in ts.windows(2) {
                assert!(w[0].code() < w[1].code());
            }
            assert_eq!(ts[0], FiniteTopology::indiscrete(n));
            assert_eq!(ts[ts.len() - 1], FiniteTopology::discrete(n));
        }
        assert!(enumerate_topologies(0).is_err());
        assert!(enumerate_topologies(5).is_err());
    }

    #[test]
    fn axioms_are_enforced() {
        assert!(FiniteTopology::new(2, vec![0b00, 0b01]).is_err()); // missing full
        assert!(FiniteTopology::new(2, vec![0b11]).is_err()); // missing empty
        assert!(FiniteTopology::new(2, vec![0b00, 0b01, 0b10, 0b11]).is_ok());
        assert!(FiniteTopology::new(2, vec![0b00, 0b01, 0b10]).is_err()); // union missing
        assert!(FiniteTopology::new(1, vec![0b0, 0b1, 0b10]).is_err()); // outside ground
    }

    #[test]
    fn sierpinski_boundaries() {
        let t = sierpinski();
        let a = 0b10; // {b}
        let r = t.boundary_report(a);
        assert_eq!(r.interior, 0b10);
        assert_eq!(r.closure, 0b11);
        assert_eq!(r.boundary, 0b01); // {a}
        assert_eq!(r.boundary_interior, 0b01);
        assert_eq!(r.boundary_exterior, 0b00);
        // int cl A = int A union boundary_interior A here
        assert_eq!(t.interior(r.closure), r.interior | r.boundary_interior);
    }

    #[test]
    fn indiscrete_boundaries() {
        let t = FiniteTopology::indiscrete(2);
        let a = 0b01; // {a}
        let r = t.boundary_report(a);
        assert_eq!(r.boundary, 0b11);
        assert_eq!(r.boundary_interior, 0b11);
        assert_eq!(r.boundary_exterior, 0b00);
    }

    #[test]
    fn empty_set_trivial() {
        for n in 1..=3usize {
            for t in enumerate_topologies(n).unwrap() {
                let r = t.boundary_report(0);
                assert_eq!(
                    r,
                    BoundaryReport {
                        interior: 0,
                        closure: 0,
                        boundary: 0,
                        boundary_interior: 0,
                        boundary_exterior: 0
                    }
                );
            }
        }
    }

    // Literal reading of the two boundary refinements: sweep every open
    // neighborhood instead of using the minimal one.
    fn boundary_interior_literal(t: &FiniteTopology, a: u32) -> u32 {
        let mut out = 0u32;
        let mut rest = t.boundary(a);
        while rest != 0 {
            let x = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let witness = t
                .opens()
                .iter()
                .any(|&u| u & (1 << x) != 0 && t.interior(u & !a) == 0);
            if witness {
                out |= 1 << x;
            }
        }
        out
    }

    #[test]
    fn minimal_neighborhood_matches_literal_definition() {
        for n in 1..=3usize {
            for t in enumerate_topologies(n).unwrap() {
                for a in 0..=t.full_mask() {
                    assert_eq!(
                        t.boundary_interior(a),
                        boundary_interior_literal(&t, a),
                        "n={n} code={} a={a:b}",
                        t.code()
                    );
                }
            }
        }
    }

    #[test]
    fn operator_laws() {
        for n in 1..=3usize {
            for t in enumerate_topologies(n).unwrap() {
                let full = t.full_mask();
                for a in 0..=full {
                    let int = t.interior(a);
                    let cl = t.closure(a);
                    // duality
                    assert_eq!(int, full & !t.closure(full & !a));
                    // idempotence and monotonicity
                    assert_eq!(t.interior(int), int);
                    assert_eq!(t.closure(cl), cl);
                    assert_eq!(int & !a, 0);
                    assert_eq!(a & !cl, 0);
                    assert!(t.is_open(int));
                    assert!(t.is_closed(cl));
                    // boundary splits into the two refinements
                    let r = t.boundary_report(a);
                    assert_eq!(r.boundary_interior | r.boundary_exterior, r.boundary);
                    assert_eq!(r.boundary_interior & r.boundary_exterior, 0);
                }
            }
        }
    }

    #[test]
    fn min_nbhd_is_smallest_open_neighborhood() {
        for n in 1..=3usize {
            for t in enumerate_topologies(n).unwrap() {
                for x in 0..n {
                    let u = t.min_nbhd(x);
                    assert!(t.is_open(u), "intersection of opens is open here");
                    assert!(u & (1 << x) != 0);
                    for &o in t.opens() {
                        if o & (1 << x) != 0 {
                            assert_eq!(u & !o, 0);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn connectivity() {
        assert!(FiniteTopology::indiscrete(3).is_connected());
        assert!(!FiniteTopology::discrete(2).is_connected());
        assert!(sierpinski().is_connected());
        assert!(FiniteTopology::discrete(1).is_connected());
    }
}
