//! Versioned JSON formats for regions, lifts, and audit reports.
//!
//! Formats are strict: unknown fields are rejected, every grid index must
//! appear exactly once, and serialization is deterministic (struct field
//! order, shortest round-trip floats) so equal inputs produce byte-equal
//! files.

use serde::{Deserialize, Serialize};

use crate::domain::{f_class, sp_class, MTuple, Point, PointDomain};
use crate::error::{Error, Result};
use crate::finitetop::audit::AuditReport;
use crate::lifting::{LiftResult, VerifyReport};
use crate::regions::{passing_nodes, RegionMode, SampledRegion, Samples};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeRepr {
    Sp,
    F,
}

impl From<ModeRepr> for RegionMode {
    fn from(m: ModeRepr) -> RegionMode {
        match m {
            ModeRepr::Sp => RegionMode::Sp,
            ModeRepr::F => RegionMode::F,
        }
    }
}

impl From<RegionMode> for ModeRepr {
    fn from(m: RegionMode) -> ModeRepr {
        match m {
            RegionMode::Sp => ModeRepr::Sp,
            RegionMode::F => ModeRepr::F,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum DomainRepr {
    Euclidean { dim: usize },
    Labels,
}

impl From<DomainRepr> for PointDomain {
    fn from(d: DomainRepr) -> PointDomain {
        match d {
            DomainRepr::Euclidean { dim } => PointDomain::Euclidean { dim },
            DomainRepr::Labels => PointDomain::Labels,
        }
    }
}

impl From<PointDomain> for DomainRepr {
    fn from(d: PointDomain) -> DomainRepr {
        match d {
            PointDomain::Euclidean { dim } => DomainRepr::Euclidean { dim },
            PointDomain::Labels => DomainRepr::Labels,
        }
    }
}

/// A point is a coordinate array or a label string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointRepr {
    Label(String),
    Coords(Vec<f64>),
}

impl PointRepr {
    pub fn to_point(&self) -> Result<Point> {
        match self {
            PointRepr::Label(s) => Ok(Point::label(s.clone())),
            PointRepr::Coords(c) => Point::coords(c.clone()),
        }
    }

    pub fn of_point(p: &Point) -> PointRepr {
        match p {
            Point::Label(s) => PointRepr::Label(s.clone()),
            Point::Coords(c) => PointRepr::Coords(c.clone()),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleRepr {
    /// Multi-index of the grid node this sample belongs to.
    pub index: Vec<usize>,
    pub points: Vec<PointRepr>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionFile {
    pub version: u32,
    pub mode: ModeRepr,
    pub m: usize,
    /// Number of grid axes; must equal shape.len().
    pub n: usize,
    pub shape: Vec<usize>,
    pub eps: f64,
    pub domain: DomainRepr,
    pub samples: Vec<SampleRepr>,
}

pub fn parse_region_file(text: &str) -> Result<RegionFile> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("region file: {e}")))
}

/// Validates a parsed region file and assembles the in-memory region.
/// `eps_override` replaces the file's tolerance when given.
pub fn build_region(file: &RegionFile, eps_override: Option<f64>) -> Result<SampledRegion> {
    if file.version != FORMAT_VERSION {
        return Err(Error::InvalidInput(format!(
            "unsupported region file version {}",
            file.version
        )));
    }
    if file.n != file.shape.len() {
        return Err(Error::InvalidInput(format!(
            "n = {} does not match a shape with {} axes",
            file.n,
            file.shape.len()
        )));
    }
    let grid = crate::regions::Grid::new(&file.shape)?;
    if file.samples.len() != grid.len() {
        return Err(Error::InvalidInput(format!(
            "{} samples for a grid of {} nodes",
            file.samples.len(),
            grid.len()
        )));
    }
    let mut slots: Vec<Option<Vec<Point>>> = vec![None; grid.len()];
    for s in &file.samples {
        if s.index.len() != file.n {
            return Err(Error::InvalidInput(format!(
                "index {:?} has {} coordinates, grid has {} axes",
                s.index,
                s.index.len(),
                file.n
            )));
        }
        for (a, (&c, &extent)) in s.index.iter().zip(&file.shape).enumerate() {
            if c >= extent {
                return Err(Error::InvalidInput(format!(
                    "index {:?} out of range on axis {a} (extent {extent})",
                    s.index
                )));
            }
        }
        let node = grid.encode(&s.index);
        if slots[node].is_some() {
            return Err(Error::InvalidInput(format!(
                "grid index {:?} appears more than once",
                s.index
            )));
        }
        let points: Result<Vec<Point>> = s.points.iter().map(PointRepr::to_point).collect();
        slots[node] = Some(points?);
    }
    let samples = match file.mode {
        ModeRepr::Sp => Samples::Sp(
            slots
                .into_iter()
                .map(|p| sp_class(p.expect("every index present")))
                .collect::<Result<Vec<_>>>()?,
        ),
        ModeRepr::F => Samples::F(
            slots
                .into_iter()
                .map(|p| f_class(p.expect("every index present")))
                .collect::<Result<Vec<_>>>()?,
        ),
    };
    SampledRegion::new(
        file.mode.into(),
        file.m,
        &file.shape,
        eps_override.unwrap_or(file.eps),
        file.domain.into(),
        samples,
        None,
    )
}

/// Renders a region back to its file form, samples in node order.
pub fn region_file_of(region: &SampledRegion) -> RegionFile {
    let grid = region.grid();
    let samples: Vec<SampleRepr> = (0..grid.len())
        .map(|node| {
            let points = match region.samples() {
                Samples::Sp(v) => v[node].points().iter().map(PointRepr::of_point).collect(),
                Samples::F(v) => v[node].points().iter().map(PointRepr::of_point).collect(),
            };
            SampleRepr {
                index: grid.decode(node),
                points,
            }
        })
        .collect();
    RegionFile {
        version: FORMAT_VERSION,
        mode: region.mode().into(),
        m: region.m(),
        n: grid.n(),
        shape: grid.shape().to_vec(),
        eps: region.eps(),
        domain: region.domain().into(),
        samples,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckRepr {
    pub name: String,
    /// "pass" or "fail".
    pub verdict: String,
    pub detail: String,
}

impl CheckRepr {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> CheckRepr {
        CheckRepr {
            name: name.into(),
            verdict: if pass { "pass" } else { "fail" }.into(),
            detail: detail.into(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }
}

pub fn checks_of_report(report: &VerifyReport) -> Vec<CheckRepr> {
    report
        .checks
        .iter()
        .map(|c| CheckRepr::new(c.name.clone(), c.pass, c.detail.clone()))
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentRepr {
    pub id: usize,
    pub pattern: String,
    pub nodes: Vec<usize>,
    pub boundary_events: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventRepr {
    pub id: usize,
    pub edge: (usize, usize),
    pub from_pattern: String,
    pub to_pattern: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShireRepr {
    /// Event through which each segment was seeded; null for the root.
    pub seeded_by: Vec<Option<usize>>,
    /// Number of glued groups; 1 when the lift is complete.
    pub groups: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsRepr {
    pub max_step_displacement: f64,
    pub round_trip_residual: f64,
    pub tie_breaks: u64,
}

/// Lift output and obstruction reports share one document shape. A
/// successful lift has status "ok" and carries the tuples; an obstructed
/// one has status "obstructed" and only the failing check.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiftFile {
    pub version: u32,
    pub kind: String,
    pub status: String,
    pub mode: ModeRepr,
    pub m: usize,
    pub shape: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tuples: Option<Vec<Vec<PointRepr>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub segments: Option<Vec<SegmentRepr>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub events: Option<Vec<EventRepr>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub passing_nodes: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shire: Option<ShireRepr>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<DiagnosticsRepr>,
    pub checks: Vec<CheckRepr>,
}

pub fn parse_lift_file(text: &str) -> Result<LiftFile> {
    let file: LiftFile =
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("lift file: {e}")))?;
    if file.version != FORMAT_VERSION {
        return Err(Error::InvalidInput(format!(
            "unsupported lift file version {}",
            file.version
        )));
    }
    if file.kind != "lift" {
        return Err(Error::InvalidInput(format!(
            "expected a lift document, found kind {:?}",
            file.kind
        )));
    }
    Ok(file)
}

pub fn lift_file_of(region: &SampledRegion, lift: &LiftResult, checks: Vec<CheckRepr>) -> LiftFile {
    let seg = &lift.segmentation;
    let tuples: Vec<Vec<PointRepr>> = lift
        .tuples
        .iter()
        .map(|t| t.points().iter().map(PointRepr::of_point).collect())
        .collect();
    let segments: Vec<SegmentRepr> = seg
        .segments
        .iter()
        .map(|s| SegmentRepr {
            id: s.id,
            pattern: s.pattern.render(),
            nodes: s.nodes.clone(),
            boundary_events: s.boundary_events.clone(),
        })
        .collect();
    let events: Vec<EventRepr> = seg
        .events
        .iter()
        .map(|e| EventRepr {
            id: e.id,
            edge: e.edge,
            from_pattern: e.from_pattern.render(),
            to_pattern: e.to_pattern.render(),
        })
        .collect();
    let groups = {
        let mut roots: Vec<usize> = lift.shire.group_of.clone();
        roots.sort_unstable();
        roots.dedup();
        roots.len()
    };
    LiftFile {
        version: FORMAT_VERSION,
        kind: "lift".into(),
        status: "ok".into(),
        mode: region.mode().into(),
        m: region.m(),
        shape: region.grid().shape().to_vec(),
        tuples: Some(tuples),
        segments: Some(segments),
        events: Some(events),
        passing_nodes: Some(passing_nodes(seg)),
        shire: Some(ShireRepr {
            seeded_by: lift.shire.seeded_by.clone(),
            groups,
        }),
        diagnostics: Some(DiagnosticsRepr {
            max_step_displacement: lift.diagnostics.max_step_displacement,
            round_trip_residual: lift.diagnostics.round_trip_residual,
            tie_breaks: lift.diagnostics.tie_breaks,
        }),
        checks,
    }
}

/// The report written when the lift is obstructed: no tuples, one failing
/// check carrying the diagnostic.
pub fn obstruction_file_of(region: &SampledRegion, err: &Error) -> LiftFile {
    LiftFile {
        version: FORMAT_VERSION,
        kind: "lift".into(),
        status: "obstructed".into(),
        mode: region.mode().into(),
        m: region.m(),
        shape: region.grid().shape().to_vec(),
        tuples: None,
        segments: None,
        events: None,
        passing_nodes: None,
        shire: None,
        diagnostics: None,
        checks: vec![CheckRepr::new("lift", false, err.to_string())],
    }
}

/// Recovers the lifted tuples, insisting the lift file describes the given
/// region and actually contains a lift.
pub fn build_tuples(file: &LiftFile, region: &SampledRegion) -> Result<Vec<MTuple>> {
    if RegionMode::from(file.mode) != region.mode() {
        return Err(Error::InputMismatch(
            "lift and region disagree on the quotient mode".into(),
        ));
    }
    if file.m != region.m() {
        return Err(Error::InputMismatch(format!(
            "lift has m = {}, region has m = {}",
            file.m,
            region.m()
        )));
    }
    if file.shape != region.grid().shape() {
        return Err(Error::InputMismatch(format!(
            "lift shape {:?} does not match region shape {:?}",
            file.shape,
            region.grid().shape()
        )));
    }
    let Some(tuples) = &file.tuples else {
        return Err(Error::InputMismatch(
            "lift document carries no tuples (obstructed run?)".into(),
        ));
    };
    if tuples.len() != region.grid().len() {
        return Err(Error::InputMismatch(format!(
            "{} tuples for {} grid nodes",
            tuples.len(),
            region.grid().len()
        )));
    }
    tuples
        .iter()
        .map(|points| {
            let ps: Result<Vec<Point>> = points.iter().map(PointRepr::to_point).collect();
            MTuple::new(ps?)
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditFile {
    pub version: u32,
    pub kind: String,
    pub sweep_bound: usize,
    pub reports: Vec<AuditReport>,
    pub checks: Vec<CheckRepr>,
}

pub fn audit_file_of(sweep_bound: usize, reports: Vec<AuditReport>) -> AuditFile {
    let checks = reports
        .iter()
        .map(|r| {
            CheckRepr::new(
                r.lemma.clone(),
                r.verdict == r.expected,
                format!(
                    "verdict {:?}, expected {:?}, {} cases over {}",
                    r.verdict, r.expected, r.checked, r.universe
                ),
            )
        })
        .collect();
    AuditFile {
        version: FORMAT_VERSION,
        kind: "audit".into(),
        sweep_bound,
        reports,
        checks,
    }
}

#[derive(Serialize)]
pub struct PartitionClassRepr {
    pub id: usize,
    pub num_parts: usize,
    pub size: usize,
    pub members: Vec<Vec<usize>>,
}

#[derive(Serialize)]
pub struct PartitionsFile {
    pub version: u32,
    pub kind: String,
    pub m: usize,
    pub p: usize,
    pub class_count: usize,
    pub classes: Vec<PartitionClassRepr>,
}

pub fn partitions_file(m: usize) -> Result<PartitionsFile> {
    use crate::partitions::{enumerate_partitions, sim_classes};
    if m == 0 || m > 30 {
        return Err(Error::InvalidInput(format!("m must be in 1..=30, got {m}")));
    }
    let all = enumerate_partitions(m)?;
    let table = sim_classes(m)?;
    let classes = table
        .classes
        .iter()
        .enumerate()
        .map(|(id, members)| PartitionClassRepr {
            id,
            num_parts: members[0].num_parts(),
            size: members.len(),
            members: members.iter().map(|p| p.parts()).collect(),
        })
        .collect();
    Ok(PartitionsFile {
        version: FORMAT_VERSION,
        kind: "partitions".into(),
        m,
        p: all.len(),
        class_count: table.class_count(),
        classes,
    })
}

#[derive(Serialize)]
pub struct PieceCountRepr {
    pub piece: String,
    pub count: u128,
}

#[derive(Serialize)]
pub struct CountFile {
    pub version: u32,
    pub kind: String,
    pub q: usize,
    pub m: usize,
    pub product_size: u128,
    pub pieces: Vec<PieceCountRepr>,
    pub sp_formula: u128,
    pub sp_oracle: usize,
    pub f_formula: u128,
    pub f_oracle: usize,
    pub checks: Vec<CheckRepr>,
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Cardinalities of both quotients of a discrete q-point base, counted two
/// ways: closed formulas against element enumeration, and piece counts
/// against the full product.
pub fn count_file(q: usize, m: usize) -> Result<CountFile> {
    use crate::finitetop::quotient::build_quotients;
    use crate::finitetop::FiniteTopology;
    use crate::partitions::{count_piece_points, enumerate_pieces, PieceScope};
    if q == 0 {
        return Err(Error::InvalidInput("q must be >= 1".into()));
    }
    if m == 0 || m > 8 {
        return Err(Error::InvalidInput(format!("m must be in 1..=8, got {m}")));
    }
    let quotients = build_quotients(&FiniteTopology::discrete(q), m)?;
    let product_size = (q as u128).pow(m as u32);

    let pieces = enumerate_pieces(m, &PieceScope::Big)?;
    let counts: Vec<PieceCountRepr> = pieces
        .iter()
        .map(|p| {
            Ok(PieceCountRepr {
                piece: p.render(),
                count: count_piece_points(q, p)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let piece_total: u128 = counts.iter().map(|c| c.count).sum();

    let sp_formula = binomial(q + m - 1, m);
    let f_formula: u128 = (1..=m.min(q)).map(|k| binomial(q, k)).sum();
    let sp_oracle = quotients.sp_elements.len();
    let f_oracle = quotients.f_elements.len();

    let checks = vec![
        CheckRepr::new(
            "piece-total",
            piece_total == product_size,
            format!("piece counts sum to {piece_total}, product has {product_size}"),
        ),
        CheckRepr::new(
            "sp-cardinality",
            sp_formula == sp_oracle as u128,
            format!("formula {sp_formula}, enumeration {sp_oracle}"),
        ),
        CheckRepr::new(
            "f-cardinality",
            f_formula == f_oracle as u128,
            format!("formula {f_formula}, enumeration {f_oracle}"),
        ),
    ];
    Ok(CountFile {
        version: FORMAT_VERSION,
        kind: "count".into(),
        q,
        m,
        product_size,
        pieces: counts,
        sp_formula,
        sp_oracle,
        f_formula,
        f_oracle,
        checks,
    })
}

/// Compact single-line JSON with a trailing newline; field order is the
/// struct declaration order, so equal values give equal bytes.
pub fn to_json(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string(value).expect("serializable report");
    s.push('\n');
    s
}

/// Reads a source argument; "-" means standard input.
pub fn read_source(path: &str) -> Result<String> {
    use std::io::Read;
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::InvalidInput(format!("stdin: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{path}: {e}")))
    }
}
