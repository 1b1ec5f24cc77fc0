//! Realizable apexes from explicit constructions: Moebius bands from one
//! band move, stabilized orientable surfaces, registry constructions, and
//! boundary connected sums of these.

use crate::error::{Error, Result};
use crate::expr::{Base, KnotExpr, TorusKnot};
use crate::invariants::genus4_torus;
use crate::registry::Registry;

use super::{Apex, Certificate, LatticePoint};

/// Connected sums with more summands (counted with multiplicity) only get
/// the whole-expression genus apex.
pub const MAX_COMBINED_SUMMANDS: u64 = 256;

fn genus_apexes(g4: i64) -> Vec<Apex> {
    let h = 2 * g4 + 1;
    [-2, 2]
        .into_iter()
        .map(|e| Apex::new(LatticePoint::new(e, h), Certificate::GenusConstruction { g4 }))
        .collect()
}

/// Moebius band bounded by a positive `T(2,n)` or `T(3,n)`.
fn moebius_apex(k: TorusKnot) -> Option<LatticePoint> {
    let n = k.q() as i64;
    match k.p() {
        2 => Some(LatticePoint::new(-2 * n, 1)),
        3 if n % 3 == 1 => Some(LatticePoint::new((-8 * n + 2) / 3, 1)),
        3 => Some(LatticePoint::new((-8 * n - 2) / 3, 1)),
        _ => None,
    }
}

fn base_apexes(base: &Base, registry: &Registry) -> Result<Vec<Apex>> {
    let mut out = Vec::new();
    match base {
        Base::Torus(k) => {
            let k = k.normalized();
            if let Some(p) = moebius_apex(k) {
                out.push(Apex::new(p, Certificate::MoebiusConstruction { e0: p.e }));
            }
            out.extend(genus_apexes(genus4_torus(k)));
        }
        Base::Named(n) => {
            let facts = registry.named(n.name()).ok_or_else(|| Error::Unresolved(n.name().to_string()))?;
            for a in &facts.apexes {
                out.push(Apex::new(a.point, Certificate::RegistryApex { provenance: a.provenance.clone() }));
            }
            out.extend(genus_apexes(facts.g4_upper));
        }
    }
    Ok(out)
}

fn signed_apexes(base: &Base, coeff: i64, registry: &Registry) -> Result<Vec<Apex>> {
    let apexes = base_apexes(base, registry)?;
    Ok(if coeff < 0 { apexes.iter().map(Apex::reflect).collect() } else { apexes })
}

fn sort_by_height(apexes: &mut [Apex]) {
    apexes.sort_by_key(|a| (a.point.h, a.point.e));
}

/// Drops repeated points (keeping the first occurrence) and points lying in
/// another apex's wedge. The result is sorted by `(h, e)`.
pub fn prune_dominated(apexes: Vec<Apex>) -> Vec<Apex> {
    let mut order: Vec<usize> = (0..apexes.len()).collect();
    order.sort_by_key(|&i| (-apexes[i].point.t(), apexes[i].point.s(), i));
    let mut keep = vec![false; apexes.len()];
    let mut best_s = i64::MAX;
    for i in order {
        let s = apexes[i].point.s();
        if s < best_s {
            keep[i] = true;
            best_s = s;
        }
    }
    let mut out: Vec<Apex> = apexes.into_iter().zip(keep).filter(|(_, k)| *k).map(|(a, _)| a).collect();
    sort_by_height(&mut out);
    out
}

fn dedup_points(apexes: Vec<Apex>) -> Vec<Apex> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out: Vec<Apex> = apexes.into_iter().filter(|a| seen.insert(a.point)).collect();
    sort_by_height(&mut out);
    out
}

/// Orders parent lists so that the preferred witness for a repeated point
/// comes first. Coordinates are oriented by the sign of the point's `e`
/// (falling back to the sign of the first coefficient), which makes the choice commute with mirroring.
fn witness_key(point: LatticePoint, parents: &[Vec<LatticePoint>], fallback: i64) -> Vec<Vec<(i64, i64)>> {
    let sign = match point.e.signum() {
        0 => fallback,
        s => s,
    };
    parents
        .iter()
        .map(|g| {
            let mut g: Vec<_> = g.iter().map(|p| (p.h, p.e * sign)).collect();
            g.sort();
            g
        })
        .collect()
}

/// Minkowski sum of per-summand apex sets, pruned after every step.
fn combined(k: &KnotExpr, registry: &Registry) -> Result<Vec<Apex>> {
    let summands = k
        .terms()
        .iter()
        .map(|t| Ok((t.coeff.unsigned_abs(), prune_dominated(signed_apexes(&t.base, t.coeff, registry)?))))
        .collect::<Result<Vec<_>>>()?;
    let fallback = k.terms().first().map_or(1, |t| t.coeff.signum());
    let mut current: Vec<(LatticePoint, Vec<Vec<LatticePoint>>)> = vec![(LatticePoint::new(0, 0), Vec::new())];
    for (copies, summand) in &summands {
        for (_, parents) in &mut current {
            parents.push(Vec::new());
        }
        for _ in 0..*copies {
            let mut next = Vec::with_capacity(current.len() * summand.len());
            for (p, parents) in &current {
                for a in summand {
                    let mut parents = parents.clone();
                    let group = parents.last_mut().expect("group per term");
                    group.push(a.point);
                    group.sort();
                    let point = LatticePoint::new(p.e + a.point.e, p.h + a.point.h);
                    next.push((point, parents));
                }
            }
            next.sort_by_cached_key(|(point, parents)| (*point, witness_key(*point, parents, fallback)));
            let next = next
                .into_iter()
                .map(|(point, parents)| Apex::new(point, Certificate::SummandCombination { parents }))
                .collect();
            current = prune_dominated(next)
                .into_iter()
                .map(|a| match a.certificate {
                    Certificate::SummandCombination { parents } => (a.point, parents),
                    _ => unreachable!(),
                })
                .collect();
        }
    }
    Ok(current
        .into_iter()
        .map(|(point, parents)| Apex::new(point, Certificate::SummandCombination { parents }))
        .collect())
}

/// Constructed apexes for `k`, given the 4-genus bound `g4_upper` of the
/// whole expression.
///
/// A single summand keeps all of its construction points (only exact
/// duplicates are merged); connected sums are reduced to the non-dominated
/// apexes.
pub fn construction_apexes(k: &KnotExpr, g4_upper: i64, registry: &Registry) -> Result<Vec<Apex>> {
    let k = k.normalize();
    match k.terms() {
        [] => Ok(genus_apexes(0)),
        [t] if t.coeff.abs() == 1 => {
            let mut all = signed_apexes(&t.base, t.coeff, registry)?;
            all.extend(genus_apexes(g4_upper));
            Ok(dedup_points(all))
        }
        terms => {
            let copies: u64 = terms.iter().map(|t| t.coeff.unsigned_abs()).sum();
            let mut all = genus_apexes(g4_upper);
            if copies <= MAX_COMBINED_SUMMANDS {
                all.extend(combined(&k, registry)?);
            }
            Ok(prune_dominated(all))
        }
    }
}
