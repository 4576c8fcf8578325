use capset_core::{fmt_rational, IncrementCertificate, IterationTrace, Point, Rational, Space};
use serde::Serialize;

pub const SCHEMA: &str = "capset-increment/1";

#[derive(Serialize)]
pub struct FieldParams {
    pub p: u32,
    pub m: u32,
    pub q: u32,
    pub r: usize,
}

impl FieldParams {
    pub fn of(space: &Space) -> Self {
        let f = space.field();
        FieldParams {
            p: f.characteristic(),
            m: f.degree(),
            q: f.order(),
            r: space.rank(),
        }
    }
}

/// Common envelope of every JSON report. Numbers are integers or exact
/// `num/den` strings, never floats.
#[derive(Serialize)]
pub struct Report<T: Serialize> {
    pub schema: &'static str,
    pub command: String,
    pub field: FieldParams,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(flatten)]
    pub body: T,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u128>,
}

#[derive(Serialize)]
pub struct CheckRecord {
    pub check: &'static str,
    pub trial: usize,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

#[derive(Serialize)]
pub struct VerifyBody {
    pub equation: Vec<i64>,
    pub trials: usize,
    pub checks_run: usize,
    pub checks_failed: usize,
    pub checks: Vec<CheckRecord>,
}

pub fn coords(space: &Space, p: Point) -> Vec<u32> {
    space.coords(p).iter().map(|c| c.index()).collect()
}

pub fn rat(r: &Rational) -> String {
    fmt_rational(r)
}

#[derive(Serialize)]
pub struct CertificateRecord {
    pub rank: usize,
    pub normal: Vec<u32>,
    pub level: u32,
    pub representative: Vec<u32>,
    pub alpha: String,
    pub alpha0: String,
    pub bound: String,
    pub holds: bool,
    pub projected: Vec<Vec<u32>>,
}

impl CertificateRecord {
    pub fn new(space: &Space, cert: &IncrementCertificate) -> Self {
        // `projected` lives one rank down.
        let lower = space.with_rank(cert.rank - 1).expect("rank >= 1");
        CertificateRecord {
            rank: cert.rank,
            normal: coords(space, cert.normal().normal()),
            level: cert.level().index(),
            representative: coords(space, cert.representative),
            alpha: rat(&cert.alpha),
            alpha0: rat(&cert.alpha0),
            bound: rat(&cert.bound),
            holds: cert.holds(),
            projected: cert.projected.iter().map(|&p| coords(&lower, p)).collect(),
        }
    }
}

#[derive(Serialize)]
pub struct AnalyzeBody {
    pub set_size: usize,
    pub progression_free: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violating_triple: Option<[Vec<u32>; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_ap: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateRecord>,
}

#[derive(Serialize)]
pub struct StepRecord {
    pub rank: usize,
    pub alpha: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateRecord>,
}

#[derive(Serialize)]
pub struct IterateBody {
    pub source: String,
    pub set_size: usize,
    pub sound: bool,
    pub steps: Vec<StepRecord>,
}

impl IterateBody {
    pub fn new(space: &Space, source: String, set_size: usize, trace: &IterationTrace) -> Self {
        let steps = trace
            .steps
            .iter()
            .map(|s| {
                let at_rank = space.with_rank(s.rank).expect("trace ranks descend");
                StepRecord {
                    rank: s.rank,
                    alpha: rat(&s.alpha),
                    certificate: s
                        .certificate
                        .as_ref()
                        .map(|c| CertificateRecord::new(&at_rank, c)),
                }
            })
            .collect();
        IterateBody {
            source,
            set_size,
            sound: trace.is_sound(),
            steps,
        }
    }
}

/// One CSV row per trace step; bound and slice columns are empty on the
/// terminal step.
#[derive(Serialize)]
pub struct TraceRow {
    pub rank: usize,
    pub numerator: String,
    pub denominator: String,
    pub bound_num: String,
    pub bound_den: String,
    pub normal: String,
    pub level: String,
}

pub fn trace_rows(space: &Space, trace: &IterationTrace) -> Vec<TraceRow> {
    trace
        .steps
        .iter()
        .map(|s| {
            let at_rank = space.with_rank(s.rank).expect("trace ranks descend");
            let (bound_num, bound_den, normal, level) = match &s.certificate {
                Some(c) => {
                    let n: Vec<String> = coords(&at_rank, c.normal().normal())
                        .iter()
                        .map(|x| x.to_string())
                        .collect();
                    (
                        c.bound.numer().to_string(),
                        c.bound.denom().to_string(),
                        format!("({})", n.join(",")),
                        c.level().index().to_string(),
                    )
                }
                None => Default::default(),
            };
            TraceRow {
                rank: s.rank,
                numerator: s.alpha.numer().to_string(),
                denominator: s.alpha.denom().to_string(),
                bound_num,
                bound_den,
                normal,
                level,
            }
        })
        .collect()
}

#[derive(Serialize)]
pub struct BoundRow {
    pub r: usize,
    pub t: String,
}
