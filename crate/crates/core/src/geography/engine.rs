//! Point classification: constructions first, then the signature and
//! Upsilon wedges, the delta line, registry facts, the Klein-bottle
//! congruence, and finally propagation of special obstructions downward.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::invariants::InvariantBundle;
use crate::rational::{self, Rational};
use crate::registry::ForbiddenKind;

use super::{Apex, Arm, Certificate, Definiteness, DefinitenessInfo, DeltaLine, LatticePoint, Status, Wedge};

/// Largest number of cells `classify_box` accepts.
pub const BOX_POINT_CAP: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QueryBox {
    pub e_min: i64,
    pub e_max: i64,
    pub h_max: i64,
}

impl QueryBox {
    pub fn new(e_min: i64, e_max: i64, h_max: i64) -> Result<Self> {
        if e_min > e_max {
            return Err(Error::InvalidBox(format!("e_min {e_min} exceeds e_max {e_max}")));
        }
        if h_max < 1 {
            return Err(Error::InvalidBox(format!("h_max {h_max} is below 1")));
        }
        Ok(QueryBox { e_min, e_max, h_max })
    }

    pub fn cells(&self) -> u128 {
        (self.e_max as i128 - self.e_min as i128 + 1) as u128 * self.h_max as u128
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        (self.e_min..=self.e_max).contains(&p.e) && (1..=self.h_max).contains(&p.h)
    }

    /// Parity-valid points, ordered by `h` then `e`.
    pub fn points(&self) -> impl Iterator<Item = LatticePoint> + '_ {
        (1..=self.h_max).flat_map(move |h| {
            let first = self.e_min + (2 * h - self.e_min).rem_euclid(4);
            (first..=self.e_max).step_by(4).map(move |e| LatticePoint::new(e, h))
        })
    }

    pub fn point_count(&self) -> u128 {
        (1..=self.h_max)
            .map(|h| {
                let first = self.e_min + (2 * h - self.e_min).rem_euclid(4);
                if first > self.e_max {
                    0
                } else {
                    ((self.e_max - first) / 4 + 1) as u128
                }
            })
            .sum()
    }

    pub fn reflect(&self) -> Self {
        QueryBox { e_min: -self.e_max, e_max: -self.e_min, h_max: self.h_max }
    }
}

/// `R1 = Wedge(2 sigma, 0)` and `R2 = Wedge(4 Upsilon(1), 0)`.
pub fn allowed_region(b: &InvariantBundle) -> (Wedge, Wedge) {
    let zero = rational::int(0);
    (Wedge::new(rational::int(2 * b.sigma), zero), Wedge::new(b.upsilon1 * 4, zero))
}

/// Default query window: the apexes and both wedge centers with a margin of
/// 8 in `e`, and `h` up to `max(8, 2 g4 + 3)`.
pub fn default_box(b: &InvariantBundle) -> QueryBox {
    let r2 = b.upsilon1 * 4;
    let mut es = vec![2 * b.sigma, rational::floor(&r2), rational::ceil(&r2)];
    es.extend(b.apexes.iter().map(|a| a.point.e));
    let e_min = es.iter().copied().min().unwrap_or(0) - 8;
    let e_max = es.iter().copied().max().unwrap_or(0) + 8;
    QueryBox { e_min, e_max, h_max: (2 * b.g4_upper + 3).max(8) }
}

pub fn definiteness_at(b: &InvariantBundle, p: LatticePoint) -> DefinitenessInfo {
    assert!(p.e % 2 == 0, "sigma - e/2 must be an integer");
    let cover_signature = b.sigma - p.e.div_euclid(2);
    let class = if cover_signature == -p.h {
        Definiteness::NegativeDefinite
    } else if cover_signature == p.h {
        Definiteness::PositiveDefinite
    } else {
        Definiteness::Indefinite
    };
    DefinitenessInfo { cover_signature, cover_b2: p.h, class }
}

/// A definite punctured Klein bottle needs `sigma + 4 Arf` in `{0,4,6}`
/// (negative-definite) or `{0,2,4}` (positive-definite) mod 8.
pub fn klein_obstruction(b: &InvariantBundle, p: LatticePoint) -> Option<Certificate> {
    if p.h != 2 || !p.parity_ok() {
        return None;
    }
    let class = definiteness_at(b, p).class;
    let r = (b.sigma + 4 * b.arf as i64).rem_euclid(8);
    match class {
        Definiteness::NegativeDefinite if r == 2 => Some(Certificate::KleinArf { class }),
        Definiteness::PositiveDefinite if r == 6 => Some(Certificate::KleinArf { class }),
        _ => None,
    }
}

/// With `det = 1`: `sigma <= 2 Upsilon(1)` and `delta < 0` rule out the
/// negative-definite arm; the mirrored hypotheses rule out the positive one.
pub fn delta_line_obstruction(b: &InvariantBundle) -> Option<DeltaLine> {
    let delta = b.delta?;
    if !b.homology_sphere() {
        return None;
    }
    let sigma = rational::int(b.sigma);
    let two_upsilon = b.upsilon1 * 2;
    let zero = rational::int(0);
    if sigma <= two_upsilon && delta < zero {
        Some(DeltaLine { arm: Arm::Right, offset: b.sigma })
    } else if b.options.mirror_delta && sigma >= two_upsilon && delta > zero {
        Some(DeltaLine { arm: Arm::Left, offset: b.sigma })
    } else {
        None
    }
}

#[derive(Debug, Clone)]
pub struct Engine<'b> {
    bundle: &'b InvariantBundle,
    r1: Wedge,
    r2: Wedge,
    apexes: Vec<Apex>,
    delta_line: Option<DeltaLine>,
    lo: Rational,
    hi: Rational,
    point_sources: Vec<(LatticePoint, Certificate)>,
    levels: Vec<(i64, String)>,
}

impl<'b> Engine<'b> {
    pub fn new(bundle: &'b InvariantBundle) -> Result<Self> {
        let (r1, r2) = allowed_region(bundle);
        let sigma = rational::int(bundle.sigma);
        let two_upsilon = bundle.upsilon1 * 2;
        let mut engine = Engine {
            bundle,
            r1,
            r2,
            apexes: super::prune_dominated(bundle.apexes.clone()),
            delta_line: delta_line_obstruction(bundle),
            lo: sigma.min(two_upsilon),
            hi: sigma.max(two_upsilon),
            point_sources: Vec::new(),
            levels: Vec::new(),
        };
        for f in &bundle.forbidden_facts {
            match &f.kind {
                ForbiddenKind::HLevel { h } => engine.levels.push((*h, f.provenance.clone())),
                ForbiddenKind::Point(_) => {}
            }
        }
        engine.levels.sort();
        engine.check_consistency()?;

        let mut sources = Vec::new();
        let klein = [2 * bundle.sigma + 4, 2 * bundle.sigma - 4].map(|e| LatticePoint::new(e, 2));
        let registry_points = bundle.forbidden_facts.iter().filter_map(|f| match f.kind {
            ForbiddenKind::Point(p) => Some(p),
            ForbiddenKind::HLevel { .. } => None,
        });
        for p in klein.into_iter().chain(registry_points) {
            if let Status::NotRealizable(c) = engine.base_status(p) {
                if c.is_special_obstruction() {
                    sources.push((p, c));
                }
            }
        }
        sources.sort();
        sources.dedup_by_key(|s| s.0);
        engine.point_sources = sources;
        Ok(engine)
    }

    fn check_consistency(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Inconsistent(msg));
        for a in &self.apexes {
            let (s, t) = (a.point.s(), a.point.t());
            if let Some(line) = self.delta_line {
                let hit = match line.arm {
                    Arm::Right => t >= line.offset,
                    Arm::Left => s <= line.offset,
                };
                if hit {
                    return bad(format!("apex {} reaches the delta line {line}", a.point));
                }
            }
            for f in &self.bundle.forbidden_facts {
                let hit = match f.kind {
                    ForbiddenKind::HLevel { h } => a.point.h <= h,
                    ForbiddenKind::Point(p) => a.wedge().contains(p),
                };
                if hit {
                    return bad(format!("apex {} contradicts registry fact: {}", a.point, f.provenance));
                }
            }
            for e in [2 * self.bundle.sigma + 4, 2 * self.bundle.sigma - 4] {
                let p = LatticePoint::new(e, 2);
                if klein_obstruction(self.bundle, p).is_some() && a.wedge().contains(p) {
                    return bad(format!("apex {} reaches Klein-obstructed {p}", a.point));
                }
            }
        }
        Ok(())
    }

    pub fn bundle(&self) -> &'b InvariantBundle {
        self.bundle
    }

    pub fn regions(&self) -> (Wedge, Wedge) {
        (self.r1, self.r2)
    }

    /// Non-dominated construction apexes, sorted by `(h, e)`.
    pub fn apexes(&self) -> &[Apex] {
        &self.apexes
    }

    pub fn delta_line(&self) -> Option<DeltaLine> {
        self.delta_line
    }

    /// `min(sigma, 2 Upsilon(1))`: the largest `t` inside `R1 ∩ R2`.
    pub fn lo(&self) -> Rational {
        self.lo
    }

    /// `max(sigma, 2 Upsilon(1))`: the smallest `s` inside `R1 ∩ R2`.
    pub fn hi(&self) -> Rational {
        self.hi
    }

    /// Klein and registry points that are obstructed on their own.
    pub fn point_sources(&self) -> &[(LatticePoint, Certificate)] {
        &self.point_sources
    }

    pub fn forbidden_levels(&self) -> &[(i64, String)] {
        &self.levels
    }

    /// Largest height at which a point or level obstruction acts.
    pub fn obstruction_height(&self) -> i64 {
        let levels = self.levels.iter().map(|l| l.0);
        let points = self.point_sources.iter().map(|p| p.0.h);
        levels.chain(points).max().unwrap_or(0).max(2)
    }

    /// The containing apex closest to `p`. Ties go to the apex nearer `e = 0`,
    /// then to the side of `p` (or, on `e = 0`, the side given by the sign of
    /// the first coefficient), so that the choice commutes with mirroring.
    pub fn realizing_apex(&self, p: LatticePoint) -> Option<&Apex> {
        let side = match p.e.signum() {
            0 => self.bundle.knot.terms().first().map_or(1, |t| t.coeff.signum()),
            s => s,
        };
        self.apexes
            .iter()
            .filter(|a| a.wedge().contains(p))
            .min_by_key(|a| (-a.point.h, (a.point.e - p.e).abs(), a.point.e.abs(), -a.point.e * side))
    }

    fn realizable(&self, p: LatticePoint) -> Option<Certificate> {
        self.realizing_apex(p).map(|a| {
            if a.point == p {
                a.certificate.clone()
            } else {
                Certificate::CrosscapSum { apex: a.point, root: Box::new(a.certificate.clone()) }
            }
        })
    }

    /// Every rule except downward propagation.
    pub fn base_status(&self, p: LatticePoint) -> Status {
        assert!(p.h >= 1, "h must be positive");
        if !p.parity_ok() {
            return Status::NotRealizable(Certificate::ParityViolation);
        }
        if let Some(c) = self.realizable(p) {
            return Status::Realizable(c);
        }
        if !self.r1.contains(p) {
            return Status::NotRealizable(Certificate::SignatureWedge);
        }
        if !self.r2.contains(p) {
            return Status::NotRealizable(Certificate::UpsilonWedge);
        }
        if let Some(line) = self.delta_line {
            if line.contains(p) {
                return Status::NotRealizable(Certificate::DeltaLine { line });
            }
        }
        for f in &self.bundle.forbidden_facts {
            let hit = match f.kind {
                ForbiddenKind::HLevel { h } => p.h == h,
                ForbiddenKind::Point(q) => p == q,
            };
            if hit {
                return Status::NotRealizable(Certificate::RegistryForbidden { provenance: f.provenance.clone() });
            }
        }
        if let Some(c) = klein_obstruction(self.bundle, p) {
            return Status::NotRealizable(c);
        }
        Status::Unknown
    }

    fn special_source(&self, p: LatticePoint) -> Option<Certificate> {
        match self.base_status(p) {
            Status::NotRealizable(c) if c.is_special_obstruction() => Some(c),
            _ => None,
        }
    }

    /// An obstructed point that crosscap sums from `p` would reach.
    fn propagation(&self, p: LatticePoint) -> Option<(LatticePoint, Certificate)> {
        let wedge = Wedge::at(p);
        if let Some((q, c)) = self.point_sources.iter().find(|(q, _)| *q != p && wedge.contains(*q)) {
            return Some((*q, c.clone()));
        }
        for (level, _) in &self.levels {
            if *level <= p.h {
                continue;
            }
            let reach = 2 * (level - p.h);
            for e in (p.e - reach..=p.e + reach).step_by(4) {
                let q = LatticePoint::new(e, *level);
                if let Some(c) = self.special_source(q) {
                    return Some((q, c));
                }
            }
        }
        let line = self.delta_line?;
        let q = match line.arm {
            Arm::Right if p.t() >= line.offset => {
                let mut s = p.s().max(line.offset + 2).max(rational::ceil_even(&self.hi));
                if s == p.s() && line.offset == p.t() {
                    s += 2;
                }
                LatticePoint::from_st(s, line.offset)
            }
            Arm::Left if p.s() <= line.offset => {
                let mut t = p.t().min(line.offset - 2).min(rational::floor_even(&self.lo));
                if t == p.t() && line.offset == p.s() {
                    t -= 2;
                }
                LatticePoint::from_st(line.offset, t)
            }
            _ => return None,
        };
        debug_assert!(wedge.contains(q));
        self.special_source(q).map(|c| (q, c))
    }

    pub fn classify_point(&self, p: LatticePoint) -> Status {
        match self.base_status(p) {
            Status::Unknown => match self.propagation(p) {
                Some((from, root)) => {
                    Status::NotRealizable(Certificate::DownwardPropagation { from, root: Box::new(root) })
                }
                None => Status::Unknown,
            },
            s => s,
        }
    }

    /// Status of every parity-valid point of the box.
    pub fn classify_box(&self, qb: &QueryBox) -> Result<BTreeMap<LatticePoint, Status>> {
        if qb.cells() > BOX_POINT_CAP {
            return Err(Error::BoxTooLarge { points: qb.cells(), cap: BOX_POINT_CAP });
        }
        Ok(qb.points().map(|p| (p, self.classify_point(p))).collect())
    }

    /// Re-derives a verdict from the bundle alone.
    pub fn verify_certificate(&self, p: LatticePoint, status: &Status) -> bool {
        let b = self.bundle;
        let is_apex = |c: &Certificate| b.apexes.iter().any(|a| a.point == p && a.certificate == *c);
        match status {
            Status::Unknown => self.classify_point(p) == Status::Unknown,
            Status::Realizable(c) => match c {
                Certificate::CrosscapSum { apex, root } => {
                    b.apexes.iter().any(|a| a.point == *apex && a.certificate == **root)
                        && Wedge::at(*apex).contains(p)
                }
                other => is_apex(other),
            },
            Status::NotRealizable(c) => match c {
                Certificate::ParityViolation => !p.parity_ok(),
                Certificate::SignatureWedge => !self.r1.contains(p),
                Certificate::UpsilonWedge => !self.r2.contains(p),
                Certificate::DeltaLine { line } => {
                    delta_line_obstruction(b) == Some(*line) && line.contains(p)
                }
                Certificate::RegistryForbidden { provenance } => b.forbidden_facts.iter().any(|f| {
                    f.provenance == *provenance
                        && match f.kind {
                            ForbiddenKind::HLevel { h } => h == p.h,
                            ForbiddenKind::Point(q) => q == p,
                        }
                }),
                Certificate::KleinArf { .. } => klein_obstruction(b, p).as_ref() == Some(c),
                Certificate::DownwardPropagation { from, root } => {
                    *from != p
                        && Wedge::at(p).contains(*from)
                        && !matches!(**root, Certificate::DownwardPropagation { .. })
                        && self.verify_certificate(*from, &Status::NotRealizable((**root).clone()))
                }
                _ => false,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::KnotExpr;
    use crate::invariants::{Calculator, Options};
    use crate::registry::Registry;

    fn bundle(k: &str) -> InvariantBundle {
        let reg = Registry::builtin();
        let k: KnotExpr = reg.parse(k).unwrap();
        Calculator::new(&reg, Options::default()).bundle(&k).unwrap()
    }

    fn pt(e: i64, h: i64) -> LatticePoint {
        LatticePoint::new(e, h)
    }

    #[test]
    fn regions() {
        let (r1, r2) = allowed_region(&bundle("T(2,3)"));
        assert_eq!((r1.center, r2.center), (rational::int(-4), rational::int(-4)));
        let (r1, r2) = allowed_region(&bundle("T(3,7)"));
        assert_eq!((r1.center, r2.center), (rational::int(-16), rational::int(-16)));
        let (r1, r2) = allowed_region(&bundle("T(3,5)"));
        assert_eq!((r1.center, r2.center), (rational::int(-16), rational::int(-12)));
    }

    #[test]
    fn definiteness() {
        let d = definiteness_at(&bundle("T(2,3)"), pt(0, 2));
        assert_eq!((d.cover_signature, d.cover_b2, d.class), (-2, 2, Definiteness::NegativeDefinite));
        let d = definiteness_at(&bundle("4_1"), pt(0, 2));
        assert_eq!((d.cover_signature, d.class), (0, Definiteness::Indefinite));
        let d = definiteness_at(&bundle("T(2,5)"), pt(-16, 3));
        assert_eq!((d.cover_signature, d.cover_b2, d.class), (4, 3, Definiteness::Indefinite));
    }

    #[test]
    fn klein() {
        assert!(klein_obstruction(&bundle("T(2,7)"), pt(-8, 2)).is_some());
        assert!(klein_obstruction(&bundle("T(2,5)"), pt(-4, 2)).is_none());
        assert!(klein_obstruction(&bundle("T(3,8)"), pt(-16, 2)).is_some());
        assert!(klein_obstruction(&bundle("T(2,7)"), pt(-6, 1)).is_none());
    }

    #[test]
    fn delta_lines() {
        let line = delta_line_obstruction(&bundle("2*T(5,9) # -3*T(5,13)")).unwrap();
        assert_eq!(line, DeltaLine { arm: Arm::Right, offset: 48 });
        let line = delta_line_obstruction(&bundle("T(5,9) # -2*T(5,13)")).unwrap();
        assert_eq!(line, DeltaLine { arm: Arm::Right, offset: 40 });
        assert_eq!(delta_line_obstruction(&bundle("T(2,3)")), None);
        let mirrored = delta_line_obstruction(&bundle("-2*T(5,9) # 3*T(5,13)")).unwrap();
        assert_eq!(mirrored, DeltaLine { arm: Arm::Left, offset: -48 });
    }

    #[test]
    fn trefoil_points() {
        let b = bundle("T(2,3)");
        let e = Engine::new(&b).unwrap();
        assert_eq!(e.classify_point(pt(-6, 1)), Status::Realizable(Certificate::MoebiusConstruction { e0: -6 }));
        let klein = Certificate::KleinArf { class: Definiteness::NegativeDefinite };
        assert_eq!(e.classify_point(pt(0, 2)), Status::NotRealizable(klein.clone()));
        assert_eq!(
            e.classify_point(pt(-2, 1)),
            Status::NotRealizable(Certificate::DownwardPropagation { from: pt(0, 2), root: Box::new(klein) })
        );
        assert_eq!(e.classify_point(pt(2, 1)), Status::NotRealizable(Certificate::SignatureWedge));
        assert_eq!(e.classify_point(pt(-4, 1)), Status::NotRealizable(Certificate::ParityViolation));
    }

    #[test]
    fn other_points() {
        let b = bundle("T(2,5)");
        assert_eq!(Engine::new(&b).unwrap().classify_point(pt(-6, 1)), Status::Unknown);
        let b = bundle("4_1");
        let e = Engine::new(&b).unwrap();
        assert_eq!(e.classify_point(pt(0, 2)), Status::Unknown);
        assert!(matches!(e.classify_point(pt(2, 1)), Status::NotRealizable(Certificate::RegistryForbidden { .. })));
    }

    #[test]
    fn boxes() {
        let b = bundle("T(2,3)");
        let m = Engine::new(&b).unwrap().classify_box(&QueryBox::new(-12, 6, 4).unwrap()).unwrap();
        assert!(!m.is_empty());
        assert!(m.values().all(|s| !s.is_unknown()));

        let b = bundle("T(2,9)");
        let qb = QueryBox::new(-30, 10, 9).unwrap();
        let m = Engine::new(&b).unwrap().classify_box(&qb).unwrap();
        assert_eq!(m.values().filter(|s| s.is_unknown()).count(), 8);

        let b = bundle("U");
        let m = Engine::new(&b).unwrap().classify_box(&QueryBox::new(-8, 8, 4).unwrap()).unwrap();
        for (p, s) in &m {
            assert_eq!(s.is_realizable(), p.e.abs() / 2 <= p.h, "{p}");
            assert!(!s.is_unknown());
        }
    }

    #[test]
    fn box_points_are_parity_valid_and_counted() {
        let qb = QueryBox::new(-7, 9, 5).unwrap();
        let pts: Vec<_> = qb.points().collect();
        assert!(pts.iter().all(|p| p.parity_ok() && qb.contains(*p)));
        let brute = (-7..=9).flat_map(|e| (1..=5).map(move |h| pt(e, h))).filter(|p| p.parity_ok()).count();
        assert_eq!(pts.len(), brute);
        assert_eq!(qb.point_count(), brute as u128);
        assert!(QueryBox::new(1, 0, 3).is_err());
        assert!(QueryBox::new(0, 1, 0).is_err());
    }

    #[test]
    fn box_cap() {
        let b = bundle("T(2,3)");
        let qb = QueryBox::new(-10_000_000, 10_000_000, 2).unwrap();
        assert!(matches!(Engine::new(&b).unwrap().classify_box(&qb), Err(Error::BoxTooLarge { .. })));
    }

    #[test]
    fn certificates_recheck() {
        for k in ["T(2,3)", "T(2,7)", "T(3,8)", "4_1", "2*T(5,9) # -3*T(5,13)", "-T(3,7) # T(2,5)"] {
            let b = bundle(k);
            let e = Engine::new(&b).unwrap();
            for (p, s) in e.classify_box(&default_box(&b)).unwrap() {
                assert!(e.verify_certificate(p, &s), "{k} {p} {s:?}");
            }
        }
    }

    #[test]
    fn forged_certificates_fail() {
        let b = bundle("T(2,3)");
        let e = Engine::new(&b).unwrap();
        assert!(!e.verify_certificate(pt(-2, 1), &Status::NotRealizable(Certificate::SignatureWedge)));
        assert!(!e.verify_certificate(pt(-2, 3), &Status::Realizable(Certificate::GenusConstruction { g4: 5 })));
        assert!(!e.verify_certificate(pt(-6, 1), &Status::Unknown));
    }
}
