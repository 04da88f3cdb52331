//! Sampled regions over a symmetric quotient: a grid of multiset (or
//! support) samples, segmentation into constant-pattern components, and the
//! discrete structure checks on the passing set.

use rayon::prelude::*;

use crate::domain::{FClass, PointDomain, SPClass};
use crate::error::{Error, Result};
use crate::pieces::{classify, PieceId};

/// Row-major-by-first-axis grid addressing: axis 0 varies fastest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    shape: Vec<usize>,
    strides: Vec<usize>,
    len: usize,
}

impl Grid {
    pub fn new(shape: &[usize]) -> Result<Grid> {
        if shape.is_empty() {
            return Err(Error::InputMismatch("grid needs at least one axis".into()));
        }
        let mut len = 1usize;
        let mut strides = Vec::with_capacity(shape.len());
        for &s in shape {
            if s == 0 {
                return Err(Error::InputMismatch("zero extent axis".into()));
            }
            strides.push(len);
            len = len
                .checked_mul(s)
                .ok_or_else(|| Error::InputMismatch("grid size overflows".into()))?;
        }
        Ok(Grid {
            shape: shape.to_vec(),
            strides,
            len,
        })
    }

    pub fn n(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    /// Position of a node along one axis.
    pub fn coord(&self, idx: usize, axis: usize) -> usize {
        (idx / self.strides[axis]) % self.shape[axis]
    }

    pub fn decode(&self, idx: usize) -> Vec<usize> {
        (0..self.n()).map(|a| self.coord(idx, a)).collect()
    }

    pub fn encode(&self, multi: &[usize]) -> usize {
        multi
            .iter()
            .zip(&self.strides)
            .map(|(&c, &s)| c * s)
            .sum()
    }

    /// All axis neighbors, in (axis, -1/+1) order.
    pub fn neighbors(&self, idx: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(2 * self.n());
        for a in 0..self.n() {
            let c = self.coord(idx, a);
            if c > 0 {
                out.push(idx - self.strides[a]);
            }
            if c + 1 < self.shape[a] {
                out.push(idx + self.strides[a]);
            }
        }
        out
    }

    /// Neighbors in the +1 direction only; every undirected edge appears
    /// exactly once as (idx, forward neighbor).
    pub fn forward_neighbors(&self, idx: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.n());
        for a in 0..self.n() {
            if self.coord(idx, a) + 1 < self.shape[a] {
                out.push(idx + self.strides[a]);
            }
        }
        out
    }

    /// True when the node has neighbors on both sides of every axis.
    pub fn is_interior(&self, idx: usize) -> bool {
        (0..self.n()).all(|a| {
            let c = self.coord(idx, a);
            c > 0 && c + 1 < self.shape[a]
        })
    }

    /// Corners of every unit square, as [u, u+ea, u+eb, u+ea+eb] with a < b.
    pub fn unit_squares(&self) -> Vec<[usize; 4]> {
        let mut out = Vec::new();
        for u in 0..self.len {
            for a in 0..self.n() {
                if self.coord(u, a) + 1 >= self.shape[a] {
                    continue;
                }
                for b in (a + 1)..self.n() {
                    if self.coord(u, b) + 1 >= self.shape[b] {
                        continue;
                    }
                    let sa = self.strides[a];
                    let sb = self.strides[b];
                    out.push([u, u + sa, u + sb, u + sa + sb]);
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegionMode {
    Sp,
    F,
}

#[derive(Clone, Debug)]
pub enum Samples {
    Sp(Vec<SPClass>),
    F(Vec<FClass>),
}

impl Samples {
    pub fn len(&self) -> usize {
        match self {
            Samples::Sp(v) => v.len(),
            Samples::F(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A grid of quotient samples. Node order follows `Grid` addressing; every
/// sample is validated against the declared mode, m, and point domain.
#[derive(Clone, Debug)]
pub struct SampledRegion {
    mode: RegionMode,
    m: usize,
    grid: Grid,
    eps: f64,
    domain: PointDomain,
    samples: Samples,
    axes: Vec<Vec<f64>>,
}

impl SampledRegion {
    pub fn new(
        mode: RegionMode,
        m: usize,
        shape: &[usize],
        eps: f64,
        domain: PointDomain,
        samples: Samples,
        axes: Option<Vec<Vec<f64>>>,
    ) -> Result<SampledRegion> {
        if m == 0 {
            return Err(Error::InputMismatch("m must be >= 1".into()));
        }
        if !eps.is_finite() || eps < 0.0 {
            return Err(Error::InputMismatch(format!("eps {eps} must be finite and >= 0")));
        }
        let grid = Grid::new(shape)?;
        if samples.len() != grid.len() {
            return Err(Error::InputMismatch(format!(
                "{} samples for a grid of {} nodes",
                samples.len(),
                grid.len()
            )));
        }
        match (&mode, &samples) {
            (RegionMode::Sp, Samples::Sp(v)) => {
                for (i, c) in v.iter().enumerate() {
                    if c.m() != m {
                        return Err(Error::InputMismatch(format!(
                            "node {i}: sample has {} points, declared m = {m}",
                            c.m()
                        )));
                    }
                    if let Some(p) = c.points().iter().find(|p| !domain.admits(p)) {
                        return Err(Error::InputMismatch(format!(
                            "node {i}: point {p} outside the declared domain"
                        )));
                    }
                }
            }
            (RegionMode::F, Samples::F(v)) => {
                for (i, c) in v.iter().enumerate() {
                    if c.support_size() > m {
                        return Err(Error::InputMismatch(format!(
                            "node {i}: support of {} exceeds m = {m}",
                            c.support_size()
                        )));
                    }
                    if let Some(p) = c.points().iter().find(|p| !domain.admits(p)) {
                        return Err(Error::InputMismatch(format!(
                            "node {i}: point {p} outside the declared domain"
                        )));
                    }
                }
            }
            _ => {
                return Err(Error::InputMismatch(
                    "sample kind does not match the declared mode".into(),
                ));
            }
        }
        let axes = match axes {
            Some(axes) => {
                if axes.len() != grid.n() {
                    return Err(Error::InputMismatch(format!(
                        "{} axis arrays for {} axes",
                        axes.len(),
                        grid.n()
                    )));
                }
                for (a, xs) in axes.iter().enumerate() {
                    if xs.len() != grid.shape()[a] {
                        return Err(Error::InputMismatch(format!(
                            "axis {a}: {} coordinates for extent {}",
                            xs.len(),
                            grid.shape()[a]
                        )));
                    }
                    if xs.iter().any(|x| !x.is_finite()) {
                        return Err(Error::InputMismatch(format!(
                            "axis {a}: non-finite coordinate"
                        )));
                    }
                }
                axes
            }
            None => grid
                .shape()
                .iter()
                .map(|&s| {
                    (0..s)
                        .map(|i| if s == 1 { 0.0 } else { i as f64 / (s - 1) as f64 })
                        .collect()
                })
                .collect(),
        };
        Ok(SampledRegion {
            mode,
            m,
            grid,
            eps,
            domain,
            samples,
            axes,
        })
    }

    pub fn mode(&self) -> RegionMode {
        self.mode
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn domain(&self) -> PointDomain {
        self.domain
    }

    pub fn samples(&self) -> &Samples {
        &self.samples
    }

    pub fn sp_samples(&self) -> Option<&[SPClass]> {
        match &self.samples {
            Samples::Sp(v) => Some(v),
            Samples::F(_) => None,
        }
    }

    pub fn f_samples(&self) -> Option<&[FClass]> {
        match &self.samples {
            Samples::F(v) => Some(v),
            Samples::Sp(_) => None,
        }
    }

    pub fn axes(&self) -> &[Vec<f64>] {
        &self.axes
    }
}

/// What a node looks like up to the quotient: the coincidence pattern of the
/// canonical tuple (multiset mode) or the support cardinality (support mode).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodePattern {
    Piece(PieceId),
    Support(usize),
}

impl NodePattern {
    /// Coarser means closer to the thick diagonal: a merged coincidence
    /// pattern, or a smaller support.
    pub fn strictly_coarser_than(&self, other: &NodePattern) -> bool {
        match (self, other) {
            (NodePattern::Piece(a), NodePattern::Piece(b)) => a.strictly_coarser_than(b),
            (NodePattern::Support(a), NodePattern::Support(b)) => a < b,
            _ => false,
        }
    }

    pub fn render(&self) -> String {
        match self {
            NodePattern::Piece(p) => p.render(),
            NodePattern::Support(k) => format!("support:{k}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub id: usize,
    pub pattern: NodePattern,
    /// Sorted node indices; axis-connected by construction.
    pub nodes: Vec<usize>,
    /// Ids of the events on this segment's frontier, ascending.
    pub boundary_events: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PassingEvent {
    pub id: usize,
    /// (lower node, higher node) of the pattern-changing edge.
    pub edge: (usize, usize),
    pub from_pattern: NodePattern,
    pub to_pattern: NodePattern,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Segmentation {
    pub grid: Grid,
    pub patterns: Vec<NodePattern>,
    /// Node index -> segment id.
    pub segment_of: Vec<usize>,
    pub segments: Vec<Segment>,
    pub events: Vec<PassingEvent>,
}

/// Splits a region into connected constant-pattern components and records
/// every pattern-changing edge as a passing event. Classification runs per
/// node in parallel; component ids follow the lowest node of each component.
pub fn segment(region: &SampledRegion) -> Result<Segmentation> {
    let eps = region.eps();
    let raw: Vec<Result<NodePattern>> = crate::parallel::install(|| match region.samples() {
        Samples::Sp(v) => v
            .par_iter()
            .map(|c| classify(&c.as_tuple(), eps).map(NodePattern::Piece))
            .collect(),
        Samples::F(v) => v
            .par_iter()
            .map(|c| Ok(NodePattern::Support(c.support_size())))
            .collect(),
    });
    let mut patterns = Vec::with_capacity(raw.len());
    for (node, r) in raw.into_iter().enumerate() {
        match r {
            Ok(p) => patterns.push(p),
            Err(Error::AmbiguousCoincidence {
                indices,
                diameter,
                eps,
            }) => {
                return Err(Error::ClassificationAmbiguity {
                    node,
                    indices,
                    diameter,
                    eps,
                })
            }
            Err(e) => return Err(e),
        }
    }

    let grid = region.grid().clone();
    let mut events = Vec::new();
    for u in 0..grid.len() {
        for v in grid.forward_neighbors(u) {
            if patterns[u] != patterns[v] {
                events.push(PassingEvent {
                    id: events.len(),
                    edge: (u, v),
                    from_pattern: patterns[u].clone(),
                    to_pattern: patterns[v].clone(),
                });
            }
        }
    }

    let mut segment_of = vec![usize::MAX; grid.len()];
    let mut segments: Vec<Segment> = Vec::new();
    for start in 0..grid.len() {
        if segment_of[start] != usize::MAX {
            continue;
        }
        let id = segments.len();
        let mut nodes = vec![start];
        segment_of[start] = id;
        let mut head = 0;
        while head < nodes.len() {
            let u = nodes[head];
            head += 1;
            for v in grid.neighbors(u) {
                if segment_of[v] == usize::MAX && patterns[v] == patterns[u] {
                    segment_of[v] = id;
                    nodes.push(v);
                }
            }
        }
        nodes.sort_unstable();
        segments.push(Segment {
            id,
            pattern: patterns[start].clone(),
            nodes,
            boundary_events: Vec::new(),
        });
    }
    for e in &events {
        segments[segment_of[e.edge.0]].boundary_events.push(e.id);
        segments[segment_of[e.edge.1]].boundary_events.push(e.id);
    }

    Ok(Segmentation {
        grid,
        patterns,
        segment_of,
        segments,
        events,
    })
}

/// Nodes carrying a passing event. Each event marks its strictly coarser
/// endpoint (the side inside the other side's closure); when neither side is
/// comparable the crossing sits between the samples and both ends are marked.
pub fn passing_nodes(seg: &Segmentation) -> Vec<usize> {
    let mut passing = vec![false; seg.grid.len()];
    for e in &seg.events {
        let (u, v) = e.edge;
        if seg.patterns[u].strictly_coarser_than(&seg.patterns[v]) {
            passing[u] = true;
        } else if seg.patterns[v].strictly_coarser_than(&seg.patterns[u]) {
            passing[v] = true;
        } else {
            passing[u] = true;
            passing[v] = true;
        }
    }
    (0..seg.grid.len()).filter(|&u| passing[u]).collect()
}

#[derive(Clone, Debug)]
pub struct InteriorVerdict {
    pub holds: bool,
    pub passing_nodes: Vec<usize>,
    /// Center and full node ball witnessing a failure.
    pub offending_ball: Option<(usize, Vec<usize>)>,
}

/// Discrete empty-interior check on the passing set: no grid-interior node
/// may be passing together with all 2n of its axis neighbors.
pub fn check_empty_interior(seg: &Segmentation) -> InteriorVerdict {
    let passing = passing_nodes(seg);
    let mut is_passing = vec![false; seg.grid.len()];
    for &u in &passing {
        is_passing[u] = true;
    }
    for u in 0..seg.grid.len() {
        if !is_passing[u] || !seg.grid.is_interior(u) {
            continue;
        }
        let mut ball = seg.grid.neighbors(u);
        if ball.iter().all(|&v| is_passing[v]) {
            ball.push(u);
            ball.sort_unstable();
            return InteriorVerdict {
                holds: false,
                passing_nodes: passing,
                offending_ball: Some((u, ball)),
            };
        }
    }
    InteriorVerdict {
        holds: true,
        passing_nodes: passing,
        offending_ball: None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SinglePieceVerdict {
    Single(NodePattern),
    /// Distinct patterns in first-appearance order over nodes.
    Multiple(Vec<NodePattern>),
}

/// No events means one pattern everywhere (the grid graph is connected);
/// both directions are recomputed from the raw patterns, not trusted.
pub fn check_single_piece(seg: &Segmentation) -> SinglePieceVerdict {
    let mut distinct: Vec<NodePattern> = Vec::new();
    for p in &seg.patterns {
        if !distinct.contains(p) {
            distinct.push(p.clone());
        }
    }
    assert_eq!(
        distinct.len() == 1,
        seg.events.is_empty(),
        "event list inconsistent with node patterns"
    );
    if distinct.len() == 1 {
        SinglePieceVerdict::Single(distinct.pop().expect("one pattern"))
    } else {
        SinglePieceVerdict::Multiple(distinct)
    }
}
