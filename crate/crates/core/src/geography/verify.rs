//! Comparison of engine output with the closed-form classifications of
//! `T(2,n)` and `T(3,n)`.
//!
//! The stated realizable and unknown sets are generated from their
//! parameter ranges and intersected with a query box. For `T(2,n)` the
//! stated unknown range ends at `(2,n)`, which is also in the stated
//! realizable set; the primary comparison lets the realizable set win there
//! and the literal reading (unknown wins) is reported separately.

use std::fmt;

use crate::error::{Error, Result};
use crate::expr::KnotExpr;
use crate::invariants::{Calculator, Options};
use crate::registry::Registry;

use super::{default_box, symbolic_summary, Arm, Engine, LatticePoint, QueryBox, Ray};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TorusFamily {
    Two,
    Three,
}

impl TorusFamily {
    pub fn from_p(p: u64) -> Option<Self> {
        match p {
            2 => Some(TorusFamily::Two),
            3 => Some(TorusFamily::Three),
            _ => None,
        }
    }

    pub fn p(self) -> u64 {
        match self {
            TorusFamily::Two => 2,
            TorusFamily::Three => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointDiff {
    pub point: LatticePoint,
    pub expected: &'static str,
    pub engine: &'static str,
}

impl fmt::Display for PointDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: expected {}, engine {}", self.point, self.expected, self.engine)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremComparison {
    pub family: TorusFamily,
    pub n: u64,
    pub qbox: QueryBox,
    /// Realizable set wins where the stated sets overlap.
    pub diff: Vec<PointDiff>,
    /// Unknown set wins where the stated sets overlap.
    pub literal_diff: Vec<PointDiff>,
    /// Points the statement lists as both realizable and unknown.
    pub endpoint_conflicts: Vec<LatticePoint>,
    /// Unknown points reported by the engine's symbolic summary (finite part).
    pub unknown_count: usize,
    pub unknown_rays: Vec<Ray>,
    /// Size of the stated unknown range (finite cases).
    pub literal_unknown_count: Option<usize>,
    /// `4k` for `T(2,n)`; 0 or `None` (one ray) for `T(3,n)`.
    pub expected_unknown_count: Option<usize>,
    pub expected_ray: Option<Ray>,
}

impl TheoremComparison {
    pub fn count_ok(&self) -> bool {
        match self.expected_unknown_count {
            Some(c) => self.unknown_rays.is_empty() && self.unknown_count == c,
            None => self.unknown_count == 0 && self.unknown_rays == self.expected_ray.into_iter().collect::<Vec<_>>(),
        }
    }

    pub fn is_verified(&self) -> bool {
        self.diff.is_empty() && self.count_ok()
    }
}

/// `(c ± 2m, b + m + 2l)` for `m, l >= 0`, i.e. the lattice points of the
/// wedge with apex `(c, b)`.
fn in_crosscap_family(p: LatticePoint, c: i64, b: i64) -> bool {
    let de = p.e - c;
    if de % 2 != 0 {
        return false;
    }
    let rest = p.h - b - de.abs() / 2;
    rest >= 0 && rest % 2 == 0
}

/// `(start + 2m, h0 + m)` for `m` in `range`.
fn on_line(p: LatticePoint, start: i64, h0: i64, m_max: Option<i64>) -> bool {
    let m = p.h - h0;
    m >= 0 && m_max.is_none_or(|x| m <= x) && p.e == start + 2 * m
}

struct Statement {
    realizable: Box<dyn Fn(LatticePoint) -> bool>,
    unknown: Box<dyn Fn(LatticePoint) -> bool>,
    literal_unknown_count: Option<usize>,
    expected_unknown_count: Option<usize>,
    expected_ray: Option<Ray>,
}

fn statement(family: TorusFamily, n: u64) -> Statement {
    let n = n as i64;
    match family {
        TorusFamily::Two => {
            let realizable = move |p: LatticePoint| {
                in_crosscap_family(p, -2 * n, 1) || (p.e >= 2 && p.e % 2 == 0 && p.h == n + (p.e - 2) / 2)
            };
            let (start, h0, m_max) = if n % 4 == 1 { (4 - 2 * n, 1, n - 1) } else { (8 - 2 * n, 3, n - 3) };
            Statement {
                realizable: Box::new(realizable),
                unknown: Box::new(move |p| on_line(p, start, h0, Some(m_max))),
                literal_unknown_count: Some((m_max + 1) as usize),
                expected_unknown_count: Some((4 * ((n - 1) / 4)) as usize),
                expected_ray: None,
            }
        }
        TorusFamily::Three => {
            let k = n / 3;
            let apex = -4 * n + 2 + 4 * k;
            let line = match n % 6 {
                1 => Some((8 * (1 - n) / 3 + 2, 1)),
                2 => Some((8 * (2 - n) / 3 + 2, 3)),
                _ => None,
            };
            Statement {
                realizable: Box::new(move |p| in_crosscap_family(p, apex, 1)),
                unknown: Box::new(move |p| line.is_some_and(|(start, h0)| on_line(p, start, h0, None))),
                literal_unknown_count: if line.is_some() { None } else { Some(0) },
                expected_unknown_count: if line.is_some() { None } else { Some(0) },
                expected_ray: line.map(|(e, h)| Ray { start: LatticePoint::new(e, h), arm: Arm::Right }),
            }
        }
    }
}

/// Classifies `T(p,n)` over `qbox` (default window when `None`) and diffs
/// the result against the closed-form statement.
pub fn verify_torus_theorem(
    family: TorusFamily,
    n: u64,
    qbox: Option<QueryBox>,
    registry: &Registry,
    options: Options,
) -> Result<TheoremComparison> {
    let p = family.p();
    let min_n = match family {
        TorusFamily::Two => 3,
        TorusFamily::Three => 4,
    };
    if n < min_n || num_integer::gcd(n, p) != 1 {
        return Err(Error::OutOfScope(format!("T({p},{n}) needs n >= {min_n} coprime to {p}")));
    }
    let knot = KnotExpr::torus(1, p, n)?;
    let bundle = Calculator::new(registry, options).bundle(&knot)?;
    let qbox = qbox.unwrap_or_else(|| default_box(&bundle));
    let engine = Engine::new(&bundle)?;
    let summary = symbolic_summary(&bundle)?;
    let st = statement(family, n);

    let mut diff = Vec::new();
    let mut literal_diff = Vec::new();
    let mut endpoint_conflicts = Vec::new();
    for (point, status) in engine.classify_box(&qbox)? {
        let (r, u) = ((st.realizable)(point), (st.unknown)(point));
        if r && u {
            endpoint_conflicts.push(point);
        }
        let primary = if r { "realizable" } else if u { "unknown" } else { "not_realizable" };
        let literal = if u { "unknown" } else { primary };
        let engine_status = status.as_str();
        if primary != engine_status {
            diff.push(PointDiff { point, expected: primary, engine: engine_status });
        }
        if literal != engine_status {
            literal_diff.push(PointDiff { point, expected: literal, engine: engine_status });
        }
    }
    Ok(TheoremComparison {
        family,
        n,
        qbox,
        diff,
        literal_diff,
        endpoint_conflicts,
        unknown_count: summary.unknown.points.len(),
        unknown_rays: summary.unknown.rays.clone(),
        literal_unknown_count: st.literal_unknown_count,
        expected_unknown_count: st.expected_unknown_count,
        expected_ray: st.expected_ray,
    })
}
