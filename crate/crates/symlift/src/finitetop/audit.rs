//! Adversarial audit of boundary-operator claims on finite spaces.
//!
//! Every lemma in the registry is swept exhaustively over small ground
//! sets. Verdicts are computed, never assumed: several published-looking
//! claims break on degenerate spaces, and the registry records the honest
//! expectation either way. A failing verdict always carries a certificate
//! that `replay` can recheck from scratch.

use serde::Serialize;

use super::{enumerate_topologies, render_mask, FiniteTopology};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
}

/// A replayable counterexample: the space(s), the subsets in the lemma's
/// role order, the map when one is quantified, and the two sides of the
/// equation that broke.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub space: FiniteTopology,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub codomain: Option<FiniteTopology>,
    pub sets: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub map: Option<Vec<usize>>,
    pub lhs: u32,
    pub rhs: u32,
    pub note: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub lemma: String,
    pub statement: String,
    pub universe: String,
    pub checked: u64,
    pub verdict: Verdict,
    pub expected: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

/// One registry row: the audited statement and the honest expectation the
/// sweeps have to reproduce.
#[derive(Clone, Copy, Debug)]
pub struct LemmaInfo {
    pub id: &'static str,
    pub statement: &'static str,
    pub expected: Verdict,
    pub quantifies_maps: bool,
}

pub const REGISTRY: [LemmaInfo; 11] = [
    LemmaInfo {
        id: "exterior-boundary-eq-closure-boundary",
        statement: "boundary(closure A) = exterior-boundary(A)",
        expected: Verdict::Holds,
        quantifies_maps: false,
    },
    LemmaInfo {
        id: "int-closure-decomposition",
        statement: "int(closure A) = int(A) union interior-boundary(A)",
        expected: Verdict::Holds,
        quantifies_maps: false,
    },
    LemmaInfo {
        id: "interior-boundary-intersection",
        statement: "interior-boundary(A int B) = interior-boundary(A) int interior-boundary(B), and the same for exterior boundaries",
        expected: Verdict::Fails,
        quantifies_maps: false,
    },
    LemmaInfo {
        id: "int-closure-intersection",
        statement: "int(closure(A int B)) = int(closure A) int int(closure B)",
        expected: Verdict::Fails,
        quantifies_maps: false,
    },
    LemmaInfo {
        id: "int-closure-complement-full",
        statement: "int(B) empty implies int(closure(X minus B)) = X",
        expected: Verdict::Holds,
        quantifies_maps: false,
    },
    LemmaInfo {
        id: "boundary-union-empty-interior",
        statement: "A, B disjoint implies int(boundary A union boundary B) empty",
        expected: Verdict::Fails,
        quantifies_maps: false,
    },
    LemmaInfo {
        id: "boundary-family-union-empty-interior",
        statement: "pairwise disjoint family implies int(union of boundaries) empty",
        expected: Verdict::Fails,
        quantifies_maps: false,
    },
    LemmaInfo {
        id: "closed-empty-interior-union",
        statement: "A, B disjoint closed with empty interiors implies int(A union B) empty",
        expected: Verdict::Holds,
        quantifies_maps: false,
    },
    LemmaInfo {
        id: "closed-empty-interior-family-union",
        statement: "pairwise disjoint closed family with empty interiors implies int(union) empty",
        expected: Verdict::Holds,
        quantifies_maps: false,
    },
    LemmaInfo {
        id: "preimage-empty-interior",
        statement: "Y connected, g continuous, int(B) empty implies int(preimage of B) empty",
        expected: Verdict::Fails,
        quantifies_maps: true,
    },
    LemmaInfo {
        id: "preimage-empty-interior-proper",
        statement: "Y connected, g continuous, int(B) empty, image of g not inside B implies int(preimage of B) empty",
        expected: Verdict::Fails,
        quantifies_maps: true,
    },
];

pub fn registry() -> &'static [LemmaInfo] {
    &REGISTRY
}

fn info(id: &str) -> Result<&'static LemmaInfo> {
    REGISTRY
        .iter()
        .find(|l| l.id == id)
        .ok_or_else(|| Error::UnknownLemma(id.to_string()))
}

/// A violation of one instance: the two sides that should have agreed plus
/// a note naming the equation.
type Violation = Option<(u32, u32, String)>;

fn eq_violation(lhs: u32, rhs: u32, note: &str) -> Violation {
    if lhs == rhs {
        None
    } else {
        Some((
            lhs,
            rhs,
            format!("{note}: {} != {}", render_mask(lhs), render_mask(rhs)),
        ))
    }
}

fn check_exterior_boundary_eq(t: &FiniteTopology, a: u32) -> Violation {
    let lhs = t.boundary(t.closure(a));
    let rhs = t.boundary_exterior(a);
    eq_violation(lhs, rhs, "boundary of closure vs exterior boundary")
}

fn check_int_closure_decomposition(t: &FiniteTopology, a: u32) -> Violation {
    let lhs = t.interior(t.closure(a));
    let rhs = t.interior(a) | t.boundary_interior(a);
    eq_violation(lhs, rhs, "int of closure vs int plus interior boundary")
}

fn check_interior_boundary_intersection(t: &FiniteTopology, a: u32, b: u32) -> Violation {
    let lhs = t.boundary_interior(a & b);
    let rhs = t.boundary_interior(a) & t.boundary_interior(b);
    if let Some(v) = eq_violation(lhs, rhs, "interior boundaries") {
        return Some(v);
    }
    let lhs = t.boundary_exterior(a & b);
    let rhs = t.boundary_exterior(a) & t.boundary_exterior(b);
    eq_violation(lhs, rhs, "exterior boundaries")
}

fn check_int_closure_intersection(t: &FiniteTopology, a: u32, b: u32) -> Violation {
    let lhs = t.interior(t.closure(a & b));
    let rhs = t.interior(t.closure(a)) & t.interior(t.closure(b));
    eq_violation(lhs, rhs, "int closure of intersection")
}

fn check_int_closure_complement_full(t: &FiniteTopology, b: u32) -> Violation {
    let lhs = t.interior(t.closure(t.full_mask() & !b));
    eq_violation(lhs, t.full_mask(), "int closure of complement vs full set")
}

fn check_boundary_union(t: &FiniteTopology, a: u32, b: u32) -> Violation {
    let lhs = t.interior(t.boundary(a) | t.boundary(b));
    eq_violation(lhs, 0, "interior of boundary union vs empty")
}

fn check_boundary_family(t: &FiniteTopology, sets: &[u32]) -> Violation {
    let union = sets.iter().fold(0u32, |acc, &s| acc | t.boundary(s));
    eq_violation(t.interior(union), 0, "interior of boundary union vs empty")
}

fn check_closed_union(t: &FiniteTopology, a: u32, b: u32) -> Violation {
    eq_violation(t.interior(a | b), 0, "interior of union vs empty")
}

fn check_closed_family(t: &FiniteTopology, sets: &[u32]) -> Violation {
    let union = sets.iter().fold(0u32, |acc, &s| acc | s);
    eq_violation(t.interior(union), 0, "interior of union vs empty")
}

fn preimage(gamma: &[usize], mask: u32) -> u32 {
    gamma
        .iter()
        .enumerate()
        .fold(0u32, |acc, (y, &z)| acc | (((mask >> z) & 1) << y))
}

fn is_continuous(y: &FiniteTopology, z: &FiniteTopology, gamma: &[usize]) -> bool {
    z.opens().iter().all(|&o| y.is_open(preimage(gamma, o)))
}

fn image(gamma: &[usize]) -> u32 {
    gamma.iter().fold(0u32, |acc, &z| acc | (1 << z))
}

fn check_preimage_empty_interior(y: &FiniteTopology, gamma: &[usize], b: u32) -> Violation {
    eq_violation(
        y.interior(preimage(gamma, b)),
        0,
        "interior of preimage vs empty",
    )
}

/// Hypotheses of each lemma, used both to filter the sweep and to validate
/// certificates on replay.
fn hypotheses_hold(id: &str, cert: &Certificate) -> bool {
    let t = &cert.space;
    match id {
        "exterior-boundary-eq-closure-boundary" | "int-closure-decomposition" => {
            cert.sets.len() == 1
        }
        "interior-boundary-intersection" | "int-closure-intersection" => cert.sets.len() == 2,
        "int-closure-complement-full" => cert.sets.len() == 1 && t.interior(cert.sets[0]) == 0,
        "boundary-union-empty-interior" => {
            cert.sets.len() == 2 && cert.sets[0] & cert.sets[1] == 0
        }
        "boundary-family-union-empty-interior" => pairwise_disjoint(&cert.sets),
        "closed-empty-interior-union" => {
            cert.sets.len() == 2
                && cert.sets[0] & cert.sets[1] == 0
                && cert.sets.iter().all(|&s| t.is_closed(s) && t.interior(s) == 0)
        }
        "closed-empty-interior-family-union" => {
            pairwise_disjoint(&cert.sets)
                && cert.sets.iter().all(|&s| t.is_closed(s) && t.interior(s) == 0)
        }
        "preimage-empty-interior" | "preimage-empty-interior-proper" => {
            let (Some(z), Some(gamma)) = (&cert.codomain, &cert.map) else {
                return false;
            };
            if cert.sets.len() != 1 || gamma.len() != t.n() {
                return false;
            }
            let b = cert.sets[0];
            let base = t.is_connected()
                && gamma.iter().all(|&p| p < z.n())
                && is_continuous(t, z, gamma)
                && z.interior(b) == 0;
            if id == "preimage-empty-interior-proper" {
                base && image(gamma) & !b != 0
            } else {
                base
            }
        }
        _ => false,
    }
}

fn pairwise_disjoint(sets: &[u32]) -> bool {
    for (i, &a) in sets.iter().enumerate() {
        for &b in &sets[i + 1..] {
            if a & b != 0 {
                return false;
            }
        }
    }
    true
}

fn check_certificate(id: &str, cert: &Certificate) -> Violation {
    let t = &cert.space;
    match id {
        "exterior-boundary-eq-closure-boundary" => check_exterior_boundary_eq(t, cert.sets[0]),
        "int-closure-decomposition" => check_int_closure_decomposition(t, cert.sets[0]),
        "interior-boundary-intersection" => {
            check_interior_boundary_intersection(t, cert.sets[0], cert.sets[1])
        }
        "int-closure-intersection" => check_int_closure_intersection(t, cert.sets[0], cert.sets[1]),
        "int-closure-complement-full" => check_int_closure_complement_full(t, cert.sets[0]),
        "boundary-union-empty-interior" => check_boundary_union(t, cert.sets[0], cert.sets[1]),
        "boundary-family-union-empty-interior" => check_boundary_family(t, &cert.sets),
        "closed-empty-interior-union" => check_closed_union(t, cert.sets[0], cert.sets[1]),
        "closed-empty-interior-family-union" => check_closed_family(t, &cert.sets),
        "preimage-empty-interior" | "preimage-empty-interior-proper" => {
            check_preimage_empty_interior(t, cert.map.as_ref().unwrap(), cert.sets[0])
        }
        _ => None,
    }
}

/// Rechecks a failing report's certificate from scratch: hypotheses must
/// hold and the claimed violation must reproduce with the same sides.
pub fn replay(report: &AuditReport) -> Result<bool> {
    info(&report.lemma)?;
    match (&report.verdict, &report.certificate) {
        (Verdict::Holds, None) => Ok(true),
        (Verdict::Holds, Some(_)) => Ok(false),
        (Verdict::Fails, None) => Ok(false),
        (Verdict::Fails, Some(cert)) => {
            if !hypotheses_hold(&report.lemma, cert) {
                return Ok(false);
            }
            match check_certificate(&report.lemma, cert) {
                Some((lhs, rhs, _)) => Ok(lhs == cert.lhs && rhs == cert.rhs),
                None => Ok(false),
            }
        }
    }
}

struct Sweep {
    checked: u64,
    found: Option<Certificate>,
}

impl Sweep {
    fn new() -> Sweep {
        Sweep {
            checked: 0,
            found: None,
        }
    }

    fn record(&mut self, violation: Violation, make: impl FnOnce(u32, u32, String) -> Certificate) {
        self.checked += 1;
        if self.found.is_none() {
            if let Some((lhs, rhs, note)) = violation {
                self.found = Some(make(lhs, rhs, note));
            }
        }
    }
}

fn one_set_cert(t: &FiniteTopology, a: u32) -> impl FnOnce(u32, u32, String) -> Certificate + '_ {
    move |lhs, rhs, note| Certificate {
        space: t.clone(),
        codomain: None,
        sets: vec![a],
        map: None,
        lhs,
        rhs,
        note,
    }
}

fn sets_cert(t: &FiniteTopology, sets: Vec<u32>) -> impl FnOnce(u32, u32, String) -> Certificate + '_ {
    move |lhs, rhs, note| Certificate {
        space: t.clone(),
        codomain: None,
        sets,
        map: None,
        lhs,
        rhs,
        note,
    }
}

/// Runs one lemma's exhaustive sweep over ground sets of size 1..=n_max.
/// Sweep order is fixed: topologies ascending by code, subsets ascending by
/// mask, families ascending by size then lexicographically, maps ascending
/// by point images; the first counterexample becomes the certificate.
pub fn audit(id: &str, n_max: usize) -> Result<AuditReport> {
    let lemma = info(id)?;
    let set_bound = if lemma.quantifies_maps { 3 } else { 4 };
    if n_max < 1 || n_max > set_bound {
        return Err(Error::InvalidInput(format!(
            "sweep bound for {id} must be 1..={set_bound}, got {n_max}"
        )));
    }
    let mut sweep = Sweep::new();
    let universe;
    match id {
        "exterior-boundary-eq-closure-boundary" | "int-closure-decomposition" => {
            universe = format!("all topologies on 1..={n_max} points, all subsets A");
            for n in 1..=n_max {
                for t in enumerate_topologies(n)? {
                    for a in 0..=t.full_mask() {
                        let v = if id == "int-closure-decomposition" {
                            check_int_closure_decomposition(&t, a)
                        } else {
                            check_exterior_boundary_eq(&t, a)
                        };
                        sweep.record(v, one_set_cert(&t, a));
                    }
                }
            }
        }
        "interior-boundary-intersection" | "int-closure-intersection" => {
            universe = format!("all topologies on 1..={n_max} points, all subset pairs (A,B)");
            for n in 1..=n_max {
                for t in enumerate_topologies(n)? {
                    for a in 0..=t.full_mask() {
                        for b in 0..=t.full_mask() {
                            let v = if id == "interior-boundary-intersection" {
                                check_interior_boundary_intersection(&t, a, b)
                            } else {
                                check_int_closure_intersection(&t, a, b)
                            };
                            sweep.record(v, sets_cert(&t, vec![a, b]));
                        }
                    }
                }
            }
        }
        "int-closure-complement-full" => {
            universe = format!("all topologies on 1..={n_max} points, all B with empty interior");
            for n in 1..=n_max {
                for t in enumerate_topologies(n)? {
                    for b in 0..=t.full_mask() {
                        if t.interior(b) != 0 {
                            continue;
                        }
                        sweep.record(
                            check_int_closure_complement_full(&t, b),
                            one_set_cert(&t, b),
                        );
                    }
                }
            }
        }
        "boundary-union-empty-interior" => {
            universe = format!("all topologies on 1..={n_max} points, all disjoint pairs (A,B)");
            for n in 1..=n_max {
                for t in enumerate_topologies(n)? {
                    for a in 0..=t.full_mask() {
                        for b in 0..=t.full_mask() {
                            if a & b != 0 {
                                continue;
                            }
                            sweep.record(check_boundary_union(&t, a, b), sets_cert(&t, vec![a, b]));
                        }
                    }
                }
            }
        }
        "closed-empty-interior-union" => {
            universe = format!(
                "all topologies on 1..={n_max} points, disjoint closed pairs with empty interiors"
            );
            for n in 1..=n_max {
                for t in enumerate_topologies(n)? {
                    for a in 0..=t.full_mask() {
                        if !t.is_closed(a) || t.interior(a) != 0 {
                            continue;
                        }
                        for b in 0..=t.full_mask() {
                            if a & b != 0 || !t.is_closed(b) || t.interior(b) != 0 {
                                continue;
                            }
                            sweep.record(check_closed_union(&t, a, b), sets_cert(&t, vec![a, b]));
                        }
                    }
                }
            }
        }
        "boundary-family-union-empty-interior" | "closed-empty-interior-family-union" => {
            let closed_variant = id == "closed-empty-interior-family-union";
            universe = format!(
                "all topologies on 1..={n_max} points, {} families of 1..=3 subsets",
                if closed_variant {
                    "pairwise disjoint closed empty-interior"
                } else {
                    "pairwise disjoint"
                }
            );
            for n in 1..=n_max {
                for t in enumerate_topologies(n)? {
                    let eligible: Vec<u32> = (0..=t.full_mask())
                        .filter(|&s| !closed_variant || (t.is_closed(s) && t.interior(s) == 0))
                        .collect();
                    for size in 1..=3usize {
                        for family in families(&eligible, size) {
                            if !pairwise_disjoint(&family) {
                                continue;
                            }
                            let v = if closed_variant {
                                check_closed_family(&t, &family)
                            } else {
                                check_boundary_family(&t, &family)
                            };
                            sweep.record(v, sets_cert(&t, family.clone()));
                        }
                    }
                }
            }
        }
        "preimage-empty-interior" | "preimage-empty-interior-proper" => {
            let proper = id == "preimage-empty-interior-proper";
            universe = format!(
                "continuous maps between topologies on 1..={n_max} points, connected source, empty-interior B{}",
                if proper { ", image not inside B" } else { "" }
            );
            for ny in 1..=n_max {
                for y in enumerate_topologies(ny)? {
                    if !y.is_connected() {
                        continue;
                    }
                    for nz in 1..=n_max {
                        for z in enumerate_topologies(nz)? {
                            for code in 0..(nz as u64).pow(ny as u32) {
                                let gamma: Vec<usize> = (0..ny)
                                    .map(|p| {
                                        (code / (nz as u64).pow(p as u32) % nz as u64) as usize
                                    })
                                    .collect();
                                if !is_continuous(&y, &z, &gamma) {
                                    continue;
                                }
                                for b in 0..=z.full_mask() {
                                    if z.interior(b) != 0 {
                                        continue;
                                    }
                                    if proper && image(&gamma) & !b == 0 {
                                        continue;
                                    }
                                    let v = check_preimage_empty_interior(&y, &gamma, b);
                                    sweep.record(v, |lhs, rhs, note| Certificate {
                                        space: y.clone(),
                                        codomain: Some(z.clone()),
                                        sets: vec![b],
                                        map: Some(gamma.clone()),
                                        lhs,
                                        rhs,
                                        note,
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        _ => return Err(Error::UnknownLemma(id.to_string())),
    }
    let verdict = if sweep.found.is_some() {
        Verdict::Fails
    } else {
        Verdict::Holds
    };
    Ok(AuditReport {
        lemma: lemma.id.to_string(),
        statement: lemma.statement.to_string(),
        universe,
        checked: sweep.checked,
        verdict,
        expected: lemma.expected,
        certificate: sweep.found,
    })
}

/// Strictly increasing tuples of the given size over the eligible masks.
fn families(eligible: &[u32], size: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(size);
    fn rec(eligible: &[u32], start: usize, size: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..eligible.len() {
            cur.push(eligible[i]);
            rec(eligible, i + 1, size, cur, out);
            cur.pop();
        }
    }
    rec(eligible, 0, size, &mut cur, &mut out);
    out
}

pub fn audit_all(n_max_sets: usize, n_max_maps: usize) -> Result<Vec<AuditReport>> {
    REGISTRY
        .iter()
        .map(|l| {
            audit(
                l.id,
                if l.quantifies_maps {
                    n_max_maps
                } else {
                    n_max_sets
                },
            )
        })
        .collect()
}
