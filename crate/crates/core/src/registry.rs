//! Known-facts registry: delta values and nonorientable-genus upper bounds
//! for torus knots, and full invariant records for named knots.
//!
//! The registry is the only source of data the engine cannot compute
//! itself. Missing entries are never guessed.

use std::collections::BTreeMap;
use std::path::Path;

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::error::{ParseError, RegistryError};
use crate::expr::{self, KnotExpr, TorusKnot, UNKNOT_NAME};
use crate::geography::LatticePoint;
use crate::rational::{self, Rational};

/// Registry shipped with the engine.
pub const BUILTIN_JSON: &str = include_str!("../data/registry.json");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaEntry {
    pub delta: Rational,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gamma4Entry {
    pub upper: i64,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ForbiddenKind {
    /// Every point at this height is not realizable.
    HLevel { h: i64 },
    Point(LatticePoint),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ForbiddenFact {
    pub kind: ForbiddenKind,
    pub provenance: String,
}

impl ForbiddenFact {
    pub fn reflect(&self) -> ForbiddenFact {
        let kind = match &self.kind {
            ForbiddenKind::HLevel { h } => ForbiddenKind::HLevel { h: *h },
            ForbiddenKind::Point(p) => ForbiddenKind::Point(p.reflect()),
        };
        ForbiddenFact { kind, provenance: self.provenance.clone() }
    }

    /// Maximal height touched by the fact.
    pub fn height(&self) -> i64 {
        match &self.kind {
            ForbiddenKind::HLevel { h } => *h,
            ForbiddenKind::Point(p) => p.h,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegistryApex {
    pub point: LatticePoint,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnownFacts {
    pub sigma: i64,
    pub upsilon1: Rational,
    pub arf: u8,
    pub det: u64,
    pub delta: Option<Rational>,
    pub g4_upper: i64,
    pub gamma4_exact: Option<i64>,
    pub apexes: Vec<RegistryApex>,
    pub forbidden: Vec<ForbiddenFact>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Registry {
    delta: BTreeMap<TorusKnot, DeltaEntry>,
    gamma4: BTreeMap<TorusKnot, Gamma4Entry>,
    named: BTreeMap<String, KnownFacts>,
}

impl Registry {
    pub fn empty() -> Self {
        Registry::default()
    }

    pub fn builtin() -> Self {
        Registry::from_json(BUILTIN_JSON).expect("builtin registry is valid")
    }

    pub fn from_json(text: &str) -> Result<Self, RegistryError> {
        let file: RegistryFile = serde_json::from_str(text)?;
        file.into_registry()
    }

    pub fn load(path: &Path) -> Result<Self, RegistryError> {
        let text = std::fs::read_to_string(path).map_err(|source| RegistryError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Registry::from_json(&text)
    }

    /// Merges `other` into `self`; entries of `other` win. Returns one
    /// warning per overridden entry.
    pub fn merge(&mut self, other: Registry) -> Vec<String> {
        let mut warnings = Vec::new();
        for (k, v) in other.delta {
            if let Some(old) = self.delta.get(&k) {
                if *old != v {
                    warnings.push(format!("registry: delta for {k} overridden"));
                }
            }
            self.delta.insert(k, v);
        }
        for (k, v) in other.gamma4 {
            if let Some(old) = self.gamma4.get(&k) {
                if *old != v {
                    warnings.push(format!("registry: gamma4 upper bound for {k} overridden"));
                }
            }
            self.gamma4.insert(k, v);
        }
        for (k, v) in other.named {
            if let Some(old) = self.named.get(&k) {
                if *old != v {
                    warnings.push(format!("registry: named knot {k} overridden"));
                }
            }
            self.named.insert(k, v);
        }
        warnings
    }

    pub fn delta(&self, knot: TorusKnot) -> Option<&DeltaEntry> {
        self.delta.get(&knot.normalized())
    }

    pub fn gamma4_upper(&self, knot: TorusKnot) -> Option<&Gamma4Entry> {
        self.gamma4.get(&knot.normalized())
    }

    pub fn named(&self, name: &str) -> Option<&KnownFacts> {
        self.named.get(name)
    }

    pub fn is_known(&self, name: &str) -> bool {
        name == UNKNOT_NAME || self.named.contains_key(name)
    }

    /// Parses an expression, resolving names against this registry.
    pub fn parse(&self, text: &str) -> Result<KnotExpr, ParseError> {
        expr::parse(text, &|n| self.is_known(n))
    }

    /// Canonical JSON (sorted keys and entries).
    pub fn to_json(&self) -> String {
        let file = RegistryFile::from_registry(self);
        let value = serde_json::to_value(&file).expect("registry serializes");
        serde_json::to_string_pretty(&value).expect("registry serializes")
    }

    /// Hex SHA-256 of the canonical JSON.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_json().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn de_rational<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Int(i64),
        Text(String),
    }
    match Raw::deserialize(d)? {
        Raw::Int(n) => Ok(rational::int(n)),
        Raw::Text(s) => rational::parse(&s)
            .ok_or_else(|| serde::de::Error::custom(format!("invalid rational `{s}`"))),
    }
}

fn de_opt_rational<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
    #[derive(Deserialize)]
    struct Wrap(#[serde(deserialize_with = "de_rational")] Rational);
    Option::<Wrap>::deserialize(d).map(|o| o.map(|w| w.0))
}

fn ser_rational<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&rational::to_text(r))
}

fn ser_opt_rational<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&rational::to_text(r)),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct RegistryFile {
    #[serde(default)]
    delta: Vec<DeltaRecord>,
    #[serde(default)]
    gamma4_upper: Vec<Gamma4Record>,
    #[serde(default)]
    named: Vec<NamedRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
struct DeltaRecord {
    p: u64,
    q: u64,
    #[serde(deserialize_with = "de_rational", serialize_with = "ser_rational")]
    delta: Rational,
    provenance: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct Gamma4Record {
    p: u64,
    q: u64,
    gamma4_upper: i64,
    provenance: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct ApexRecord {
    e: i64,
    h: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum ForbiddenRecord {
    HLevel { h: i64, provenance: String },
    Point { e: i64, h: i64, provenance: String },
}

#[derive(Debug, Serialize, Deserialize)]
struct NamedRecord {
    name: String,
    sigma: i64,
    #[serde(deserialize_with = "de_rational", serialize_with = "ser_rational")]
    upsilon1: Rational,
    arf: u8,
    det: u64,
    #[serde(default, deserialize_with = "de_opt_rational", serialize_with = "ser_opt_rational")]
    delta: Option<Rational>,
    g4_upper: i64,
    #[serde(default)]
    gamma4_exact: Option<i64>,
    #[serde(default)]
    apexes: Vec<ApexRecord>,
    #[serde(default)]
    forbidden: Vec<ForbiddenRecord>,
}

fn torus(p: u64, q: u64) -> Result<TorusKnot, RegistryError> {
    TorusKnot::new(p, q)
        .map(TorusKnot::normalized)
        .map_err(|e| RegistryError::Invalid(e.to_string()))
}

fn arf_of_det(det: u64) -> u8 {
    match det % 8 {
        1 | 7 => 0,
        _ => 1,
    }
}

impl NamedRecord {
    fn validate(&self) -> Result<KnownFacts, RegistryError> {
        let bad = |msg: String| Err(RegistryError::Invalid(format!("{}: {msg}", self.name)));
        if self.name == UNKNOT_NAME || self.name.is_empty() {
            return bad("reserved or empty name".into());
        }
        if !self.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return bad("names use letters, digits and `_` only".into());
        }
        if self.sigma % 2 != 0 {
            return bad(format!("signature {} is odd", self.sigma));
        }
        if self.det.is_multiple_of(2) {
            return bad(format!("determinant {} is not odd", self.det));
        }
        if self.arf > 1 || self.arf != arf_of_det(self.det) {
            return bad(format!("Arf {} disagrees with determinant {}", self.arf, self.det));
        }
        if self.g4_upper < 0 {
            return bad("negative 4-genus bound".into());
        }
        if let Some(g) = self.gamma4_exact {
            if g < 1 {
                return bad("nonorientable genus must be positive".into());
            }
        }
        let mut apexes = Vec::new();
        for a in &self.apexes {
            let point = LatticePoint::new(a.e, a.h);
            if a.h < 1 || !point.parity_ok() {
                return bad(format!("apex {point} violates e = 2h (mod 4) or h >= 1"));
            }
            let provenance = a.provenance.clone().unwrap_or_else(|| format!("registry:{}", self.name));
            apexes.push(RegistryApex { point, provenance });
        }
        let forbidden = self
            .forbidden
            .iter()
            .map(|f| match f {
                ForbiddenRecord::HLevel { h, provenance } => ForbiddenFact {
                    kind: ForbiddenKind::HLevel { h: *h },
                    provenance: provenance.clone(),
                },
                ForbiddenRecord::Point { e, h, provenance } => ForbiddenFact {
                    kind: ForbiddenKind::Point(LatticePoint::new(*e, *h)),
                    provenance: provenance.clone(),
                },
            })
            .collect();
        Ok(KnownFacts {
            sigma: self.sigma,
            upsilon1: self.upsilon1,
            arf: self.arf,
            det: self.det,
            delta: self.delta,
            g4_upper: self.g4_upper,
            gamma4_exact: self.gamma4_exact,
            apexes,
            forbidden,
        })
    }
}

impl RegistryFile {
    fn into_registry(self) -> Result<Registry, RegistryError> {
        let mut reg = Registry::empty();
        for d in self.delta {
            let k = torus(d.p, d.q)?;
            if k.is_unknot() && !d.delta.is_zero() {
                return Err(RegistryError::Invalid(format!("delta of the unknot {k} must be 0")));
            }
            reg.delta.insert(k, DeltaEntry { delta: d.delta, provenance: d.provenance });
        }
        for g in self.gamma4_upper {
            let k = torus(g.p, g.q)?;
            if g.gamma4_upper < 1 {
                return Err(RegistryError::Invalid(format!("gamma4 upper bound for {k} must be positive")));
            }
            reg.gamma4.insert(k, Gamma4Entry { upper: g.gamma4_upper, provenance: g.provenance });
        }
        for n in self.named {
            let facts = n.validate()?;
            if reg.named.insert(n.name.clone(), facts).is_some() {
                return Err(RegistryError::Invalid(format!("duplicate named knot {}", n.name)));
            }
        }
        Ok(reg)
    }

    fn from_registry(reg: &Registry) -> Self {
        RegistryFile {
            delta: reg
                .delta
                .iter()
                .map(|(k, v)| DeltaRecord { p: k.p(), q: k.q(), delta: v.delta, provenance: v.provenance.clone() })
                .collect(),
            gamma4_upper: reg
                .gamma4
                .iter()
                .map(|(k, v)| Gamma4Record {
                    p: k.p(),
                    q: k.q(),
                    gamma4_upper: v.upper,
                    provenance: v.provenance.clone(),
                })
                .collect(),
            named: reg
                .named
                .iter()
                .map(|(name, f)| NamedRecord {
                    name: name.clone(),
                    sigma: f.sigma,
                    upsilon1: f.upsilon1,
                    arf: f.arf,
                    det: f.det,
                    delta: f.delta,
                    g4_upper: f.g4_upper,
                    gamma4_exact: f.gamma4_exact,
                    apexes: f
                        .apexes
                        .iter()
                        .map(|a| ApexRecord { e: a.point.e, h: a.point.h, provenance: Some(a.provenance.clone()) })
                        .collect(),
                    forbidden: f
                        .forbidden
                        .iter()
                        .map(|x| match &x.kind {
                            ForbiddenKind::HLevel { h } => {
                                ForbiddenRecord::HLevel { h: *h, provenance: x.provenance.clone() }
                            }
                            ForbiddenKind::Point(p) => {
                                ForbiddenRecord::Point { e: p.e, h: p.h, provenance: x.provenance.clone() }
                            }
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_contents() {
        let reg = Registry::builtin();
        let t59 = TorusKnot::new(9, 5).unwrap();
        assert_eq!(reg.delta(t59).unwrap().delta, rational::int(4));
        assert_eq!(reg.delta(TorusKnot::new(5, 13).unwrap()).unwrap().delta, rational::int(4));
        assert!(reg.delta(TorusKnot::new(2, 3).unwrap()).is_none());
        assert_eq!(reg.gamma4_upper(t59).unwrap().upper, 2);
        let f = reg.named("4_1").unwrap();
        assert_eq!((f.sigma, f.arf, f.det, f.g4_upper, f.gamma4_exact), (0, 1, 5, 1, Some(2)));
        assert_eq!(f.apexes.len(), 2);
        assert_eq!(f.forbidden[0].kind, ForbiddenKind::HLevel { h: 1 });
        assert!(reg.is_known("U") && reg.is_known("4_1") && !reg.is_known("5_2"));
    }

    #[test]
    fn canonical_json_round_trip() {
        let reg = Registry::builtin();
        let text = reg.to_json();
        let back = Registry::from_json(&text).unwrap();
        assert_eq!(back, reg);
        assert_eq!(back.to_json(), text);
        assert_eq!(reg.hash().len(), 64);
    }

    #[test]
    fn merge_user_wins_with_warning() {
        let mut reg = Registry::builtin();
        let user = Registry::from_json(
            r#"{"delta":[{"p":9,"q":5,"delta":"2","provenance":"test"},{"p":3,"q":7,"delta":-2,"provenance":"test"}]}"#,
        )
        .unwrap();
        let warnings = reg.merge(user);
        assert_eq!(warnings.len(), 1);
        assert_eq!(reg.delta(TorusKnot::new(5, 9).unwrap()).unwrap().delta, rational::int(2));
        assert_eq!(reg.delta(TorusKnot::new(3, 7).unwrap()).unwrap().delta, rational::int(-2));
    }

    #[test]
    fn rejects_inconsistent_named_entries() {
        let base = |arf: u8, det: u64, sigma: i64, apex_e: i64| {
            format!(
                r#"{{"named":[{{"name":"k","sigma":{sigma},"upsilon1":"1/2","arf":{arf},"det":{det},"g4_upper":1,"apexes":[{{"e":{apex_e},"h":2}}]}}]}}"#
            )
        };
        assert!(Registry::from_json(&base(1, 5, 0, 4)).is_ok());
        assert!(Registry::from_json(&base(0, 5, 0, 4)).is_err());
        assert!(Registry::from_json(&base(1, 4, 0, 4)).is_err());
        assert!(Registry::from_json(&base(1, 5, 1, 4)).is_err());
        assert!(Registry::from_json(&base(1, 5, 0, 2)).is_err());
        assert!(Registry::from_json(r#"{"delta":[{"p":2,"q":4,"delta":"1","provenance":"x"}]}"#).is_err());
        assert!(Registry::from_json("{not json").is_err());
    }

    #[test]
    fn parse_resolves_names() {
        let reg = Registry::builtin();
        assert!(reg.parse("4_1 # T(2,3)").is_ok());
        assert_eq!(reg.parse("6_1"), Err(ParseError::UnknownName("6_1".into())));
    }
}
