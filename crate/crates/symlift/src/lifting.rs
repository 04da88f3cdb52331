//! Lifts a sampled region over a symmetric quotient to a grid of ordered
//! tuples. Each constant-pattern segment is lifted by breadth-first
//! minimum-displacement matching from a seed, segments are glued across
//! passing events, and every loop is checked for a single-valued result.
//! Ambiguity that survives those checks is an error, never a guess.

use rayon::prelude::*;

use crate::domain::{distance, f_canonical, sp_canonical, sp_class, FClass, MTuple, Point, SPClass};
use crate::error::{Error, Result};
use crate::matching::lex_min_assignment_counting_ties;
use crate::pieces::theta_canonical;
use crate::regions::{segment, Grid, RegionMode, SampledRegion, Segmentation};
use crate::unionfind::UnionFind;

/// How the next sample was arranged against the previous tuple.
#[derive(Clone, Debug, PartialEq)]
pub struct MatchPlan {
    /// Position i of the result takes point `permutation[i]` of the sample.
    pub permutation: Vec<usize>,
    /// Total displacement under that arrangement.
    pub cost: f64,
    /// Rows of the assignment whose optimal choice was not unique.
    pub ties: u64,
}

fn same_kind(a: &Point, b: &Point) -> bool {
    match (a, b) {
        (Point::Label(_), Point::Label(_)) => true,
        (Point::Coords(x), Point::Coords(y)) => x.len() == y.len(),
        _ => false,
    }
}

/// Arranges `next` to stay as close to `prev` as possible: minimum-cost
/// perfect matching over all m! assignments, ties to the lexicographically
/// smallest permutation.
pub fn match_step(prev: &MTuple, next: &SPClass) -> Result<(MTuple, MatchPlan)> {
    let m = prev.m();
    if next.m() != m {
        return Err(Error::InputMismatch(format!(
            "matching a {}-point sample against an m = {m} tuple",
            next.m()
        )));
    }
    let pts = next.points();
    if !same_kind(prev.get(0), &pts[0]) {
        return Err(Error::InputMismatch(
            "sample and tuple have different point kinds".into(),
        ));
    }
    let cost: Vec<Vec<f64>> = (0..m)
        .map(|i| pts.iter().map(|p| distance(prev.get(i), p)).collect())
        .collect();
    let (a, ties) = lex_min_assignment_counting_ties(&cost)?;
    let tuple = MTuple::new(a.assignment.iter().map(|&j| pts[j].clone()).collect())?;
    Ok((
        tuple,
        MatchPlan {
            permutation: a.assignment,
            cost: a.total,
            ties,
        },
    ))
}

/// Chooses multiplicities for a support so the previous tuple can continue
/// onto it: every previous coordinate votes for its nearest support point,
/// then votes move at minimal added cost until no support point is starved.
pub fn expand_support(prev: &MTuple, next: &FClass) -> Result<SPClass> {
    let m = prev.m();
    let k = next.support_size();
    if k > m {
        return Err(Error::InputMismatch(format!(
            "support of {k} points cannot fill an m = {m} tuple"
        )));
    }
    let sup = next.points();
    if !same_kind(prev.get(0), &sup[0]) {
        return Err(Error::InputMismatch(
            "support and tuple have different point kinds".into(),
        ));
    }
    // nearest support point per coordinate, ties to the lowest index
    let mut vote: Vec<usize> = (0..m)
        .map(|i| {
            let mut best = 0usize;
            for b in 1..k {
                if distance(prev.get(i), &sup[b]) < distance(prev.get(i), &sup[best]) {
                    best = b;
                }
            }
            best
        })
        .collect();
    let mut mult = vec![0usize; k];
    for &b in &vote {
        mult[b] += 1;
    }
    // fill starved points one at a time, cheapest (delta, point, voter) first
    while let Some(starved) = (0..k).find(|&b| mult[b] == 0) {
        let _ = starved;
        let mut best: Option<(f64, usize, usize)> = None;
        for b in (0..k).filter(|&b| mult[b] == 0) {
            for i in 0..m {
                if mult[vote[i]] < 2 {
                    continue;
                }
                let delta = distance(prev.get(i), &sup[b]) - distance(prev.get(i), &sup[vote[i]]);
                let better = match best {
                    None => true,
                    Some((d0, b0, i0)) => {
                        (delta.total_cmp(&d0)).then(b.cmp(&b0)).then(i.cmp(&i0))
                            == std::cmp::Ordering::Less
                    }
                };
                if better {
                    best = Some((delta, b, i));
                }
            }
        }
        let (_, b, i) = best.expect("m >= support size leaves a movable vote");
        mult[vote[i]] -= 1;
        vote[i] = b;
        mult[b] += 1;
    }
    let mut points = Vec::with_capacity(m);
    for (b, &c) in mult.iter().enumerate() {
        for _ in 0..c {
            points.push(sup[b].clone());
        }
    }
    sp_class(points)
}

/// Multiplicities as even as possible, the remainder on the lowest support
/// points: the seed expansion when there is no previous tuple to continue.
pub fn uniform_support_class(next: &FClass, m: usize) -> Result<SPClass> {
    let k = next.support_size();
    if k > m {
        return Err(Error::InputMismatch(format!(
            "support of {k} points cannot fill an m = {m} tuple"
        )));
    }
    let mut points = Vec::with_capacity(m);
    for (b, p) in next.points().iter().enumerate() {
        let c = m / k + usize::from(b < m % k);
        for _ in 0..c {
            points.push(p.clone());
        }
    }
    sp_class(points)
}

/// One lift step onto the sample at `node`.
fn step_onto(region: &SampledRegion, prev: &MTuple, node: usize) -> Result<(MTuple, MatchPlan)> {
    match region.mode() {
        RegionMode::Sp => match_step(prev, &region.sp_samples().expect("sp mode")[node]),
        RegionMode::F => {
            let expanded = expand_support(prev, &region.f_samples().expect("f mode")[node])?;
            match_step(prev, &expanded)
        }
    }
}

fn canonical_seed(region: &SampledRegion, node: usize) -> Result<MTuple> {
    let class = match region.samples() {
        crate::regions::Samples::Sp(v) => v[node].clone(),
        crate::regions::Samples::F(v) => uniform_support_class(&v[node], region.m())?,
    };
    theta_canonical(&class.as_tuple(), region.eps())
}

/// Reference tuple for stepping across a passing event from `u` to `v`:
/// the first-order continuation 2 x(u) - x(w), where w mirrors v across u.
/// Falls back to x(u) at grid borders, for labels, and when w is unlifted;
/// the continuation removes the tie that the coarser sample sits on.
fn crossing_reference(grid: &Grid, lift: &[Option<MTuple>], u: usize, v: usize) -> MTuple {
    let xu = lift[u].as_ref().expect("crossing from a lifted node").clone();
    if xu.is_labels() {
        return xu;
    }
    let mu = grid.decode(u);
    let mv = grid.decode(v);
    let axis = (0..grid.n()).find(|&a| mu[a] != mv[a]).expect("distinct nodes");
    let mut mw = mu.clone();
    if mv[axis] > mu[axis] {
        if mu[axis] == 0 {
            return xu;
        }
        mw[axis] = mu[axis] - 1;
    } else {
        if mu[axis] + 1 >= grid.shape()[axis] {
            return xu;
        }
        mw[axis] = mu[axis] + 1;
    }
    let Some(xw) = lift[grid.encode(&mw)].as_ref() else {
        return xu;
    };
    let points: Option<Vec<Point>> = xu
        .points()
        .iter()
        .zip(xw.points())
        .map(|(pu, pw)| {
            let (cu, cw) = (pu.as_coords()?, pw.as_coords()?);
            let ext: Vec<f64> = cu.iter().zip(cw).map(|(a, b)| 2.0 * a - b).collect();
            Point::coords(ext).ok()
        })
        .collect();
    match points.map(MTuple::new) {
        Some(Ok(t)) => t,
        _ => xu,
    }
}

fn step_across(
    region: &SampledRegion,
    grid: &Grid,
    lift: &[Option<MTuple>],
    u: usize,
    v: usize,
) -> Result<(MTuple, MatchPlan)> {
    let reference = crossing_reference(grid, lift, u, v);
    step_onto(region, &reference, v)
}

fn render(t: &MTuple) -> String {
    format!("{t}")
}

fn seed_round_trips(region: &SampledRegion, node: usize, seed: &MTuple) -> bool {
    match region.samples() {
        crate::regions::Samples::Sp(v) => sp_canonical(seed) == v[node],
        crate::regions::Samples::F(v) => f_canonical(seed) == v[node],
    }
}

/// Lifts one segment from a seed by breadth-first matching, then checks
/// every in-segment edge in both directions: re-walking an edge must
/// reproduce the assigned tuple. Edge coherence makes both paths around
/// every unit square agree, so no loop can be multi-valued.
fn lift_segment_into(
    region: &SampledRegion,
    seg: &Segmentation,
    sid: usize,
    seed_node: usize,
    seed: MTuple,
    lift: &mut [Option<MTuple>],
    ties: &mut u64,
) -> Result<()> {
    if seg.segment_of[seed_node] != sid {
        return Err(Error::InvalidInput(format!(
            "seed node {seed_node} is not in segment {sid}"
        )));
    }
    if seed.m() != region.m() || !seed_round_trips(region, seed_node, &seed) {
        return Err(Error::InputMismatch(format!(
            "seed tuple at node {seed_node} does not project to its sample"
        )));
    }
    lift[seed_node] = Some(seed);
    let mut queue = std::collections::VecDeque::from([seed_node]);
    while let Some(u) = queue.pop_front() {
        for v in seg.grid.neighbors(u) {
            if seg.segment_of[v] != sid || lift[v].is_some() {
                continue;
            }
            let prev = lift[u].as_ref().expect("u assigned before v");
            let (t, plan) = step_onto(region, prev, v)?;
            *ties += plan.ties;
            lift[v] = Some(t);
            queue.push_back(v);
        }
    }
    for &u in &seg.segments[sid].nodes {
        for v in seg.grid.forward_neighbors(u) {
            if seg.segment_of[v] != sid {
                continue;
            }
            for (a, b) in [(u, v), (v, u)] {
                let (t, _) = step_onto(region, lift[a].as_ref().expect("assigned"), b)?;
                let assigned = lift[b].as_ref().expect("assigned");
                if &t != assigned {
                    return Err(Error::Holonomy {
                        u: a,
                        v: b,
                        expected: render(assigned),
                        got: render(&t),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Lifts a single segment from an explicit seed; the deck freedom of the
/// covering step lives here (any seed arrangement of the sample works and
/// permutes the whole partial lift with it). Returns (node, tuple) pairs.
pub fn lift_segment(
    region: &SampledRegion,
    seg: &Segmentation,
    sid: usize,
    seed_node: usize,
    seed: MTuple,
) -> Result<Vec<(usize, MTuple)>> {
    if sid >= seg.segments.len() {
        return Err(Error::InvalidInput(format!("no segment {sid}")));
    }
    let mut lift: Vec<Option<MTuple>> = vec![None; seg.grid.len()];
    let mut ties = 0u64;
    lift_segment_into(region, seg, sid, seed_node, seed, &mut lift, &mut ties)?;
    Ok(seg.segments[sid]
        .nodes
        .iter()
        .map(|&u| (u, lift[u].clone().expect("segment node assigned")))
        .collect())
}

/// The gluing record: how each segment got its sheet.
#[derive(Clone, Debug, PartialEq)]
pub struct ShireRecord {
    /// Event through which each segment was seeded; None for the root.
    pub seeded_by: Vec<Option<usize>>,
    /// Glued-group representative per segment; one group when complete.
    pub group_of: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Diagnostics {
    /// Largest per-edge total displacement of the lift.
    pub max_step_displacement: f64,
    /// Largest node-wise deviation between the projected lift and the
    /// input; exact lifts have 0.0.
    pub round_trip_residual: f64,
    /// Matching decisions that were settled by the lexicographic rule.
    pub tie_breaks: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LiftResult {
    pub tuples: Vec<MTuple>,
    pub segmentation: Segmentation,
    pub shire: ShireRecord,
    pub diagnostics: Diagnostics,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SeedPolicy {
    #[default]
    Canonical,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TieRule {
    #[default]
    Lex,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LiftOptions {
    pub seed_policy: SeedPolicy,
    pub tie_rule: TieRule,
}

/// Lifts the whole region: seeds the segment of node 0 canonically, lifts
/// it, then repeatedly steps across passing events into unlifted segments
/// (gluing with a union-find) until every segment carries a sheet. Every
/// event is then re-walked in both directions; a mismatch means two gluing
/// chains disagree and is reported, never resolved silently.
pub fn lift_region(region: &SampledRegion, opts: &LiftOptions) -> Result<LiftResult> {
    let LiftOptions {
        seed_policy: SeedPolicy::Canonical,
        tie_rule: TieRule::Lex,
    } = *opts;
    let seg = segment(region)?;
    let nseg = seg.segments.len();
    let grid = seg.grid.clone();
    let mut lift: Vec<Option<MTuple>> = vec![None; grid.len()];
    let mut tie_breaks = 0u64;
    let mut seeded_by: Vec<Option<usize>> = vec![None; nseg];
    let mut lifted = vec![false; nseg];
    let mut uf = UnionFind::new(nseg);

    let root = seg.segment_of[0];
    let seed = canonical_seed(region, 0)?;
    lift_segment_into(region, &seg, root, 0, seed, &mut lift, &mut tie_breaks)?;
    lifted[root] = true;

    loop {
        let mut progressed = false;
        for e in &seg.events {
            let (u, v) = e.edge;
            let (su, sv) = (seg.segment_of[u], seg.segment_of[v]);
            let (from, to) = match (lifted[su], lifted[sv]) {
                (true, false) => (u, v),
                (false, true) => (v, u),
                (true, true) => {
                    uf.union(su, sv);
                    continue;
                }
                (false, false) => continue,
            };
            let (t, plan) = step_across(region, &grid, &lift, from, to)?;
            tie_breaks += plan.ties;
            let sid = seg.segment_of[to];
            lift_segment_into(region, &seg, sid, to, t, &mut lift, &mut tie_breaks)?;
            lifted[sid] = true;
            seeded_by[sid] = Some(e.id);
            uf.union(seg.segment_of[from], sid);
            progressed = true;
        }
        if !progressed {
            break;
        }
    }
    assert!(
        lifted.iter().all(|&b| b),
        "grid connectivity reaches every segment through events"
    );

    // univalence: both crossings of every event must reproduce the sheets
    for e in &seg.events {
        for (a, b) in [(e.edge.0, e.edge.1), (e.edge.1, e.edge.0)] {
            let (t, _) = step_across(region, &grid, &lift, a, b)?;
            let assigned = lift[b].as_ref().expect("all nodes lifted");
            if &t != assigned {
                return Err(Error::ConflictingSheet {
                    event: e.id,
                    u: a,
                    v: b,
                    expected: render(assigned),
                    got: render(&t),
                });
            }
        }
    }

    let tuples: Vec<MTuple> = lift.into_iter().map(|t| t.expect("lifted")).collect();

    let mut max_step = 0.0f64;
    for u in 0..grid.len() {
        for v in grid.forward_neighbors(u) {
            let d = (0..region.m()).fold(0.0f64, |acc, i| {
                acc + distance(tuples[u].get(i), tuples[v].get(i))
            });
            max_step = max_step.max(d);
        }
    }
    let residual = round_trip_residual(region, &tuples);
    assert_eq!(residual, 0.0, "lift tuples are arrangements of their samples");

    let group_of: Vec<usize> = (0..nseg).map(|s| uf.find(s)).collect();
    Ok(LiftResult {
        tuples,
        segmentation: seg,
        shire: ShireRecord { seeded_by, group_of },
        diagnostics: Diagnostics {
            max_step_displacement: max_step,
            round_trip_residual: residual,
            tie_breaks,
        },
    })
}

/// Largest node-wise distance between the projected lift and the samples;
/// infinite when a node's support does not even match in size.
fn round_trip_residual(region: &SampledRegion, tuples: &[MTuple]) -> f64 {
    let per_node = |t: &MTuple, node: usize| -> f64 {
        let (a, b): (Vec<Point>, Vec<Point>) = match region.samples() {
            crate::regions::Samples::Sp(v) => {
                (sp_canonical(t).points().to_vec(), v[node].points().to_vec())
            }
            crate::regions::Samples::F(v) => {
                (f_canonical(t).points().to_vec(), v[node].points().to_vec())
            }
        };
        if a.len() != b.len() {
            return f64::INFINITY;
        }
        a.iter()
            .zip(&b)
            .fold(0.0f64, |acc, (x, y)| acc.max(distance(x, y)))
    };
    crate::parallel::install(|| {
        tuples
            .par_iter()
            .enumerate()
            .map(|(node, t)| per_node(t, node))
            .collect::<Vec<f64>>()
    })
    .into_iter()
    .fold(0.0, f64::max)
}

/// Directed-max metric between point sets: every point of each side must
/// be near some point of the other.
fn hausdorff(a: &[Point], b: &[Point]) -> f64 {
    let directed = |xs: &[Point], ys: &[Point]| {
        xs.iter().fold(0.0f64, |acc, x| {
            let near = ys
                .iter()
                .map(|y| distance(x, y))
                .fold(f64::INFINITY, f64::min);
            acc.max(near)
        })
    };
    directed(a, b).max(directed(b, a))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub pass: bool,
    pub checks: Vec<CheckOutcome>,
}

/// Independent verification of a lift: exact projection at every node, and
/// the lift moving no faster than the input plus the classification slack.
/// Mismatched shapes are a precondition failure, not a report.
pub fn verify(region: &SampledRegion, tuples: &[MTuple]) -> Result<VerifyReport> {
    let grid = region.grid();
    if tuples.len() != grid.len() {
        return Err(Error::InputMismatch(format!(
            "{} lifted tuples for {} grid nodes",
            tuples.len(),
            grid.len()
        )));
    }
    for (i, t) in tuples.iter().enumerate() {
        if t.m() != region.m() {
            return Err(Error::InputMismatch(format!(
                "node {i}: tuple of {} points, region m = {}",
                t.m(),
                region.m()
            )));
        }
        if let Some(p) = t.points().iter().find(|p| !region.domain().admits(p)) {
            return Err(Error::InputMismatch(format!(
                "node {i}: point {p} outside the region domain"
            )));
        }
    }

    let mismatches: Vec<usize> = crate::parallel::install(|| {
        (0..grid.len())
            .into_par_iter()
            .filter(|&node| {
                let ok = match region.samples() {
                    crate::regions::Samples::Sp(v) => sp_canonical(&tuples[node]) == v[node],
                    crate::regions::Samples::F(v) => f_canonical(&tuples[node]) == v[node],
                };
                !ok
            })
            .collect()
    });
    let round_trip = CheckOutcome {
        name: "round-trip".into(),
        pass: mismatches.is_empty(),
        detail: if mismatches.is_empty() {
            "projection matches the sample at every node".into()
        } else {
            format!(
                "{} nodes do not project to their sample, first at node {}",
                mismatches.len(),
                mismatches[0]
            )
        },
    };

    // largest per-position step of the lift vs largest sample step
    let mut lift_step = 0.0f64;
    let mut input_step = 0.0f64;
    for u in 0..grid.len() {
        for v in grid.forward_neighbors(u) {
            let per_pos = (0..region.m()).fold(0.0f64, |acc, i| {
                acc.max(distance(tuples[u].get(i), tuples[v].get(i)))
            });
            lift_step = lift_step.max(per_pos);
            let h = match region.samples() {
                crate::regions::Samples::Sp(s) => hausdorff(s[u].points(), s[v].points()),
                crate::regions::Samples::F(s) => hausdorff(s[u].points(), s[v].points()),
            };
            input_step = input_step.max(h);
        }
    }
    let bound = input_step + 2.0 * region.eps();
    let continuity = CheckOutcome {
        name: "continuity".into(),
        pass: lift_step <= bound,
        detail: format!(
            "max lift step {lift_step} vs input step {input_step} + 2 eps = {bound}"
        ),
    };

    let pass = round_trip.pass && continuity.pass;
    Ok(VerifyReport {
        pass,
        checks: vec![round_trip, continuity],
    })
}
