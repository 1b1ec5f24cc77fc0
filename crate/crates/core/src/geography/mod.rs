//! `(e,h)`-geography: which pairs of normal Euler number and first Betti
//! number are realized by nonorientable surfaces in `B^4` bounding a knot.
//!
//! Points are handled in the rotated coordinates `s = e/2 + h` and
//! `t = e/2 - h`. A wedge with apex `(c, b)` is then the quadrant
//! `t <= c/2 - b, s >= c/2 + b`, which turns coverage and propagation
//! questions into staircase computations.

mod construction;
mod engine;
mod summary;
mod verify;

use std::fmt;

use crate::rational::{self, Rational};

pub use construction::{construction_apexes, prune_dominated, MAX_COMBINED_SUMMANDS};
pub use engine::{
    allowed_region, default_box, definiteness_at, delta_line_obstruction, klein_obstruction, Engine,
    QueryBox, BOX_POINT_CAP,
};
pub use summary::{
    gamma4_bounds, mirror_report, symbolic_summary, Gamma4Bounds, GeographyReport, Obstruction, Ray,
    UnknownSet, SUMMARY_POINT_CAP,
};
pub use verify::{verify_torus_theorem, PointDiff, TheoremComparison, TorusFamily};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticePoint {
    pub e: i64,
    pub h: i64,
}

impl LatticePoint {
    pub const fn new(e: i64, h: i64) -> Self {
        LatticePoint { e, h }
    }

    /// `e = 2h (mod 4)`.
    pub fn parity_ok(&self) -> bool {
        (self.e - 2 * self.h).rem_euclid(4) == 0
    }

    pub fn reflect(&self) -> Self {
        LatticePoint::new(-self.e, self.h)
    }

    /// `e/2 + h`; exact for parity-valid points.
    pub fn s(&self) -> i64 {
        self.e.div_euclid(2) + self.h
    }

    /// `e/2 - h`; exact for parity-valid points.
    pub fn t(&self) -> i64 {
        self.e.div_euclid(2) - self.h
    }

    /// Inverse of `(s, t)`; both must be even with `s > t`.
    pub fn from_st(s: i64, t: i64) -> Self {
        debug_assert!(s % 2 == 0 && t % 2 == 0 && s > t);
        LatticePoint::new(s + t, (s - t) / 2)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.e, self.h)
    }
}

/// `{(e,h) : |center - e|/2 + base <= h}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Wedge {
    pub center: Rational,
    pub base: Rational,
}

impl Wedge {
    pub fn new(center: Rational, base: Rational) -> Self {
        Wedge { center, base }
    }

    pub fn at(p: LatticePoint) -> Self {
        Wedge::new(rational::int(p.e), rational::int(p.h))
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        rational::abs(&(self.center - rational::int(p.e))) / 2 + self.base <= rational::int(p.h)
    }

    /// Largest `t = e/2 - h` inside the wedge.
    pub fn t_max(&self) -> Rational {
        self.center / 2 - self.base
    }

    /// Smallest `s = e/2 + h` inside the wedge.
    pub fn s_min(&self) -> Rational {
        self.center / 2 + self.base
    }

    pub fn reflect(&self) -> Self {
        Wedge::new(-self.center, self.base)
    }
}

impl fmt::Display for Wedge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "wedge({}, {})", rational::to_text(&self.center), rational::to_text(&self.base))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Definiteness {
    NegativeDefinite,
    PositiveDefinite,
    Indefinite,
}

impl Definiteness {
    pub fn reflect(self) -> Self {
        match self {
            Definiteness::NegativeDefinite => Definiteness::PositiveDefinite,
            Definiteness::PositiveDefinite => Definiteness::NegativeDefinite,
            Definiteness::Indefinite => Definiteness::Indefinite,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Definiteness::NegativeDefinite => "negative-definite",
            Definiteness::PositiveDefinite => "positive-definite",
            Definiteness::Indefinite => "indefinite",
        }
    }
}

/// Signature and second Betti number of the double branched cover of `B^4`
/// over a surface with the given `(e,h)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DefinitenessInfo {
    pub cover_signature: i64,
    pub cover_b2: i64,
    pub class: Definiteness,
}

/// Which boundary arm of the signature wedge a line runs along.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Arm {
    /// `h = e/2 - offset`, i.e. `t = offset`.
    Right,
    /// `h = offset - e/2`, i.e. `s = offset`.
    Left,
}

impl Arm {
    pub fn reflect(self) -> Self {
        match self {
            Arm::Right => Arm::Left,
            Arm::Left => Arm::Right,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Arm::Right => "right",
            Arm::Left => "left",
        }
    }
}

/// The line on which the delta obstruction rules out every point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DeltaLine {
    pub arm: Arm,
    pub offset: i64,
}

impl DeltaLine {
    pub fn contains(&self, p: LatticePoint) -> bool {
        p.parity_ok()
            && match self.arm {
                Arm::Right => p.t() == self.offset,
                Arm::Left => p.s() == self.offset,
            }
    }

    pub fn reflect(&self) -> Self {
        DeltaLine { arm: self.arm.reflect(), offset: -self.offset }
    }
}

impl fmt::Display for DeltaLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.arm {
            Arm::Right => write!(f, "h = e/2 - ({})", self.offset),
            Arm::Left => write!(f, "h = {} - e/2", self.offset),
        }
    }
}

/// Reason attached to every verdict.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Certificate {
    MoebiusConstruction { e0: i64 },
    GenusConstruction { g4: i64 },
    CrosscapSum { apex: LatticePoint, root: Box<Certificate> },
    /// One group of apexes per summand term, each group sorted.
    SummandCombination { parents: Vec<Vec<LatticePoint>> },
    RegistryApex { provenance: String },
    ParityViolation,
    SignatureWedge,
    UpsilonWedge,
    KleinArf { class: Definiteness },
    DeltaLine { line: DeltaLine },
    DownwardPropagation { from: LatticePoint, root: Box<Certificate> },
    RegistryForbidden { provenance: String },
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::MoebiusConstruction { .. } => "moebius_construction",
            Certificate::GenusConstruction { .. } => "genus_construction",
            Certificate::CrosscapSum { .. } => "crosscap_sum",
            Certificate::SummandCombination { .. } => "summand_combination",
            Certificate::RegistryApex { .. } => "registry_apex",
            Certificate::ParityViolation => "parity_violation",
            Certificate::SignatureWedge => "signature_wedge",
            Certificate::UpsilonWedge => "upsilon_wedge",
            Certificate::KleinArf { .. } => "klein_arf",
            Certificate::DeltaLine { .. } => "delta_line",
            Certificate::DownwardPropagation { .. } => "downward_propagation",
            Certificate::RegistryForbidden { .. } => "registry_forbidden",
        }
    }

    /// Obstructions beyond the two wedges and parity.
    pub fn is_special_obstruction(&self) -> bool {
        matches!(
            self,
            Certificate::KleinArf { .. }
                | Certificate::DeltaLine { .. }
                | Certificate::DownwardPropagation { .. }
                | Certificate::RegistryForbidden { .. }
        )
    }

    pub fn reflect(&self) -> Certificate {
        match self {
            Certificate::MoebiusConstruction { e0 } => Certificate::MoebiusConstruction { e0: -e0 },
            Certificate::CrosscapSum { apex, root } => {
                Certificate::CrosscapSum { apex: apex.reflect(), root: Box::new(root.reflect()) }
            }
            Certificate::SummandCombination { parents } => {
                let parents = parents
                    .iter()
                    .map(|g| {
                        let mut g: Vec<_> = g.iter().map(LatticePoint::reflect).collect();
                        g.sort();
                        g
                    })
                    .collect();
                Certificate::SummandCombination { parents }
            }
            Certificate::KleinArf { class } => Certificate::KleinArf { class: class.reflect() },
            Certificate::DeltaLine { line } => Certificate::DeltaLine { line: line.reflect() },
            Certificate::DownwardPropagation { from, root } => {
                Certificate::DownwardPropagation { from: from.reflect(), root: Box::new(root.reflect()) }
            }
            other => other.clone(),
        }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::MoebiusConstruction { e0 } => write!(f, "moebius band with e = {e0}"),
            Certificate::GenusConstruction { g4 } => write!(f, "orientable genus {g4} surface plus a crosscap"),
            Certificate::CrosscapSum { apex, root } => write!(f, "crosscap sums from {apex} [{root}]"),
            Certificate::SummandCombination { parents } => {
                let list: Vec<String> = parents.iter().flatten().map(|p| p.to_string()).collect();
                write!(f, "boundary connected sum of {}", list.join(" + "))
            }
            Certificate::RegistryApex { provenance } => write!(f, "registry construction: {provenance}"),
            Certificate::ParityViolation => f.write_str("e != 2h (mod 4)"),
            Certificate::SignatureWedge => f.write_str("|sigma - e/2| > h"),
            Certificate::UpsilonWedge => f.write_str("|-2 Upsilon(1) + e/2| > h"),
            Certificate::KleinArf { class } => {
                write!(f, "{} punctured Klein bottle excluded by sigma + 4 Arf (mod 8)", class.as_str())
            }
            Certificate::DeltaLine { line } => write!(f, "delta obstruction on {line}"),
            Certificate::DownwardPropagation { from, root } => {
                write!(f, "crosscap sums would reach {from} [{root}]")
            }
            Certificate::RegistryForbidden { provenance } => write!(f, "registry: {provenance}"),
        }
    }
}

/// A constructed realizable point.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Apex {
    pub point: LatticePoint,
    pub certificate: Certificate,
}

impl Apex {
    pub fn new(point: LatticePoint, certificate: Certificate) -> Self {
        Apex { point, certificate }
    }

    pub fn wedge(&self) -> Wedge {
        Wedge::at(self.point)
    }

    pub fn reflect(&self) -> Apex {
        Apex::new(self.point.reflect(), self.certificate.reflect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Realizable(Certificate),
    NotRealizable(Certificate),
    Unknown,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Realizable(_) => "realizable",
            Status::NotRealizable(_) => "not_realizable",
            Status::Unknown => "unknown",
        }
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Status::Realizable(c) | Status::NotRealizable(c) => Some(c),
            Status::Unknown => None,
        }
    }

    pub fn is_realizable(&self) -> bool {
        matches!(self, Status::Realizable(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Status::Unknown)
    }

    pub fn is_not_realizable(&self) -> bool {
        matches!(self, Status::NotRealizable(_))
    }

    pub fn reflect(&self) -> Status {
        match self {
            Status::Realizable(c) => Status::Realizable(c.reflect()),
            Status::NotRealizable(c) => Status::NotRealizable(c.reflect()),
            Status::Unknown => Status::Unknown,
        }
    }
}
