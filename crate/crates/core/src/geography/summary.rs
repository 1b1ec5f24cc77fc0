//! Exact description of the unknown set and the resulting bounds on the
//! nonorientable 4-genus.
//!
//! Let `L` be the largest even `t` and `H` the smallest even `s` in
//! `R1 ∩ R2`, and let the apexes have `t_i, s_i`. Uncovered points fall into
//! three pieces:
//!
//! * right strip `max t_i < t <= L`: one upward ray per `t`, direction `(+2,+1)`;
//! * left strip `H <= s < min s_i`: one upward ray per `s`, direction `(-2,+1)`;
//! * a bounded staircase below the apex wedges, enumerated point by point.
//!
//! Above the highest point or level obstruction every ray has constant
//! status, apart from its lowest point which may sit on the delta line.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::expr::KnotExpr;
use crate::invariants::InvariantBundle;
use crate::rational::{self, Rational};

use super::{Apex, Arm, Certificate, DeltaLine, Engine, LatticePoint, Status, Wedge};

/// Most staircase points enumerated before the summary is flagged
/// unstructured.
pub const SUMMARY_POINT_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ray {
    pub start: LatticePoint,
    /// Which way `e` moves per step; `h` always grows by one.
    pub arm: Arm,
}

impl Ray {
    pub fn direction(&self) -> (i64, i64) {
        match self.arm {
            Arm::Right => (2, 1),
            Arm::Left => (-2, 1),
        }
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        let k = p.h - self.start.h;
        k >= 0 && p.e == self.start.e + self.direction().0 * k
    }

    pub fn point(&self, k: i64) -> LatticePoint {
        let (de, dh) = self.direction();
        LatticePoint::new(self.start.e + de * k, self.start.h + dh * k)
    }

    pub fn reflect(&self) -> Ray {
        Ray { start: self.start.reflect(), arm: self.arm.reflect() }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UnknownSet {
    /// Unknown points not on any ray, sorted by `(h, e)`.
    pub points: Vec<LatticePoint>,
    pub rays: Vec<Ray>,
    /// Set when the staircase was too large to enumerate; the points list
    /// is then complete only up to this height.
    pub unstructured: Option<i64>,
}

impl UnknownSet {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.rays.is_empty() && self.unstructured.is_none()
    }

    pub fn is_finite(&self) -> bool {
        self.rays.is_empty() && self.unstructured.is_none()
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        self.points.binary_search_by_key(&(p.h, p.e), |q| (q.h, q.e)).is_ok()
            || self.rays.iter().any(|r| r.contains(p))
    }

    fn canonicalize(&mut self) {
        self.points.sort_by_key(|p| (p.h, p.e));
        self.points.dedup();
        self.rays.sort_by_key(|r| (r.start.h, r.start.e, r.arm));
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Obstruction {
    Line { line: DeltaLine },
    Point { point: LatticePoint, certificate: Certificate },
    Level { h: i64, provenance: String },
}

impl Obstruction {
    fn reflect(&self) -> Obstruction {
        match self {
            Obstruction::Line { line } => Obstruction::Line { line: line.reflect() },
            Obstruction::Point { point, certificate } => {
                Obstruction::Point { point: point.reflect(), certificate: certificate.reflect() }
            }
            Obstruction::Level { .. } => self.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gamma4Bounds {
    pub lower: i64,
    pub lower_certificate: String,
    pub upper: i64,
    pub upper_certificate: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeographyReport {
    pub knot: KnotExpr,
    /// Non-dominated apexes; each generates the wedge above it.
    pub realizable_wedges: Vec<Apex>,
    pub r1: Wedge,
    pub r2: Wedge,
    pub extra_obstructions: Vec<Obstruction>,
    pub unknown: UnknownSet,
    pub gamma4: Gamma4Bounds,
    /// `e - 2h (mod 4)` of every candidate point.
    pub parity_class: i64,
}

impl GeographyReport {
    pub fn delta_line(&self) -> Option<DeltaLine> {
        self.extra_obstructions.iter().find_map(|o| match o {
            Obstruction::Line { line } => Some(*line),
            _ => None,
        })
    }
}

pub fn symbolic_summary(bundle: &InvariantBundle) -> Result<GeographyReport> {
    let engine = Engine::new(bundle)?;
    let (r1, r2) = engine.regions();
    let mut extra: Vec<Obstruction> = Vec::new();
    if let Some(line) = engine.delta_line() {
        extra.push(Obstruction::Line { line });
    }
    for (point, certificate) in engine.point_sources() {
        extra.push(Obstruction::Point { point: *point, certificate: certificate.clone() });
    }
    for (h, provenance) in engine.forbidden_levels() {
        extra.push(Obstruction::Level { h: *h, provenance: provenance.clone() });
    }
    extra.sort();
    let gamma4 = bounds(bundle, engine.delta_line())?;
    Ok(GeographyReport {
        knot: bundle.knot.clone(),
        realizable_wedges: engine.apexes().to_vec(),
        r1,
        r2,
        extra_obstructions: extra,
        unknown: unknown_set(&engine),
        gamma4,
        parity_class: 0,
    })
}

fn unknown_set(engine: &Engine<'_>) -> UnknownSet {
    let apexes = engine.apexes();
    let l = rational::floor_even(&engine.lo());
    let h = rational::ceil_even(&engine.hi());
    let mut out = UnknownSet::default();
    let mut points = BTreeSet::new();
    let Some(max_t) = apexes.iter().map(|a| a.point.t()).max() else {
        // Nothing is constructed: every allowed point is uncovered.
        out.unstructured = Some(0);
        return out;
    };
    let min_s = apexes.iter().map(|a| a.point.s()).min().unwrap_or(h);
    let top = engine.obstruction_height() + 1;

    let mut walk = |start: LatticePoint, arm: Arm| {
        let ray = Ray { start, arm };
        let steps = (top - start.h).max(1);
        let statuses: Vec<Status> = (0..=steps).map(|k| engine.classify_point(ray.point(k))).collect();
        let tail_unknown = statuses[steps as usize].is_unknown();
        let mut first = steps as usize + 1;
        if tail_unknown {
            while first > 0 && statuses[first - 1].is_unknown() {
                first -= 1;
            }
            out.rays.push(Ray { start: ray.point(first as i64), arm });
        }
        for (k, s) in statuses.iter().enumerate().take(first) {
            if s.is_unknown() {
                points.insert(ray.point(k as i64));
            }
        }
    };

    for t in (max_t + 2..=l).step_by(2) {
        walk(LatticePoint::from_st(h.max(t + 2), t), Arm::Right);
    }
    for s in (h..min_s).step_by(2) {
        walk(LatticePoint::from_st(s, l.min(s - 2)), Arm::Left);
    }

    // Staircase columns: for each t, uncovered s in [a, b).
    let t_star = apexes.iter().filter(|a| a.point.s() == min_s).map(|a| a.point.t()).max().unwrap_or(max_t);
    let columns: Vec<(i64, i64, i64)> = (t_star + 2..=max_t)
        .step_by(2)
        .filter_map(|t| {
            let b = apexes.iter().filter(|a| a.point.t() >= t).map(|a| a.point.s()).min()?;
            let a = min_s.max(h).max(t + 2);
            (a < b).then_some((t, a, b))
        })
        .collect();
    let count_upto = |height: i64| -> u64 {
        columns
            .iter()
            .map(|&(t, a, b)| ((b.min(t + 2 * height + 2) - a).max(0) / 2) as u64)
            .sum()
    };
    let max_height = columns.iter().map(|&(t, _, b)| (b - 2 - t) / 2).max().unwrap_or(0);
    let mut sweep = max_height;
    if count_upto(max_height) > SUMMARY_POINT_CAP {
        let (mut lo, mut hi) = (0, max_height);
        while lo < hi {
            let mid = lo + (hi - lo + 1) / 2;
            if count_upto(mid) <= SUMMARY_POINT_CAP {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        sweep = lo;
        out.unstructured = Some(sweep);
    }
    for &(t, a, b) in &columns {
        for s in (a..b.min(t + 2 * sweep + 2)).step_by(2) {
            let p = LatticePoint::from_st(s, t);
            if engine.classify_point(p).is_unknown() {
                points.insert(p);
            }
        }
    }

    out.points = points.into_iter().filter(|p| !out.rays.iter().any(|r| r.contains(*p))).collect();
    out.canonicalize();
    out
}

fn bounds(bundle: &InvariantBundle, line: Option<DeltaLine>) -> Result<Gamma4Bounds> {
    let gap: Rational = bundle.oss_gap();
    let mut lower = (1, "every nonorientable surface has h >= 1".to_string());
    let oss = rational::ceil(&gap);
    if oss > lower.0 {
        lower = (oss, format!("|Upsilon(1) - sigma/2| = {}", rational::to_text(&gap)));
    }
    if line.is_some() {
        let v = rational::ceil(&(gap + 1));
        if v > lower.0 {
            lower = (v, format!("delta obstruction: |Upsilon(1) - sigma/2| + 1 = {}", rational::to_text(&(gap + 1))));
        }
    }
    if let Some(g) = bundle.gamma4_exact {
        if g > lower.0 {
            lower = (g, "registry exact value".into());
        }
    }
    if lower.0 > bundle.gamma4_upper {
        return Err(Error::Inconsistent(format!(
            "gamma4 lower bound {} ({}) exceeds upper bound {} ({})",
            lower.0, lower.1, bundle.gamma4_upper, bundle.gamma4_upper_reason
        )));
    }
    Ok(Gamma4Bounds {
        lower: lower.0,
        lower_certificate: lower.1,
        upper: bundle.gamma4_upper,
        upper_certificate: bundle.gamma4_upper_reason.clone(),
    })
}

/// Lower and upper bounds on `gamma_4`, using the delta line recorded in
/// `report`.
pub fn gamma4_bounds(bundle: &InvariantBundle, report: &GeographyReport) -> Result<Gamma4Bounds> {
    bounds(bundle, report.delta_line())
}

/// The report of the mirror knot, obtained by reflecting across `e = 0`.
pub fn mirror_report(report: &GeographyReport) -> GeographyReport {
    let mut wedges: Vec<Apex> = report.realizable_wedges.iter().map(Apex::reflect).collect();
    wedges.sort_by_key(|a| (a.point.h, a.point.e));
    let mut extra: Vec<Obstruction> = report.extra_obstructions.iter().map(Obstruction::reflect).collect();
    extra.sort();
    let mut unknown = UnknownSet {
        points: report.unknown.points.iter().map(LatticePoint::reflect).collect(),
        rays: report.unknown.rays.iter().map(Ray::reflect).collect(),
        unstructured: report.unknown.unstructured,
    };
    unknown.canonicalize();
    GeographyReport {
        knot: report.knot.mirror().normalize(),
        realizable_wedges: wedges,
        r1: report.r1.reflect(),
        r2: report.r2.reflect(),
        extra_obstructions: extra,
        unknown,
        gamma4: report.gamma4.clone(),
        parity_class: report.parity_class,
    }
}
