//! Concordance invariants of knot expressions and the [`InvariantBundle`]
//! consumed by the geography engine.
//!
//! Torus-knot values are computed; named-knot values come from the
//! [`Registry`]. Every invariant here is additive (or multiplicative, for
//! the determinant) over connected sums, so expressions are evaluated term
//! by term on their normalized form.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::expr::{Base, KnotExpr, TorusKnot};
use crate::geography::{self, Apex};
use crate::poly::alexander_torus_at_minus_one;
use crate::rational::{self, Rational};
use crate::registry::{ForbiddenFact, KnownFacts, Registry};

/// Behaviour switches shared by the invariant calculator and the engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    /// Accept `Upsilon_{T(a,a+1)}(1) = -floor(a^2/4)` for `a >= 6`.
    pub allow_extrapolated_upsilon: bool,
    /// Derive the delta-line obstruction for mirrored hypotheses too.
    pub mirror_delta: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { allow_extrapolated_upsilon: false, mirror_delta: true }
    }
}

/// Signature of `T(p,q)` by counting lattice points: each `(i,j)` with
/// `1 <= i < p`, `1 <= j < q` contributes `-1` when `i/p + j/q` lies in
/// `(1/2, 3/2)` and `+1` otherwise.
///
/// Rows are counted in closed form, so the cost is `O(min(p,q))`.
pub fn signature_torus(p: u64, q: u64) -> Result<i64> {
    let k = TorusKnot::new(p, q)?.normalized();
    let (p, q) = (k.p() as i128, k.q() as i128);
    if p == 1 {
        return Ok(0);
    }
    let pq = p * q;
    let mut negative: i128 = 0;
    for i in 1..p {
        // pq < 2(iq + jp) < 3pq  <=>  lo < 2pj < hi
        let lo = pq - 2 * i * q;
        let hi = 3 * pq - 2 * i * q;
        let two_p = 2 * p;
        for edge in [lo, 2 * pq - 2 * i * q, hi] {
            if edge % two_p == 0 && (1..q).contains(&(edge / two_p)) {
                return Err(Error::Inconsistent(format!(
                    "lattice point on a boundary of the signature count for T({p},{q})"
                )));
            }
        }
        let j_min = (lo.div_euclid(two_p) + 1).max(1);
        let j_max = ((hi + two_p - 1).div_euclid(two_p) - 1).min(q - 1);
        if j_max >= j_min {
            negative += j_max - j_min + 1;
        }
    }
    let total = (p - 1) * (q - 1);
    i64::try_from(total - 2 * negative).map_err(|_| Error::Overflow("signature"))
}

/// Closed forms for `p in {2, 3}`: `sigma(T(2,n)) = -(n-1)` and
/// `sigma(T(3,6k+d)) = sigma(T(3,d)) - 8k`. `None` for other `p`.
pub fn signature_torus_oracle(p: u64, q: u64) -> Option<i64> {
    if num_integer::gcd(p, q) != 1 || q == 0 {
        return None;
    }
    match p {
        2 => Some(-(q as i64 - 1)),
        3 => {
            let (k, d) = ((q / 6) as i64, q % 6);
            let base = match d {
                1 => 0,
                2 => -2,
                4 => -6,
                5 => -8,
                _ => return None,
            };
            Some(base - 8 * k)
        }
        _ => None,
    }
}

/// `Upsilon_{T(a,a+1)}(1)`.
pub fn upsilon_base(a: u64) -> i64 {
    -((a * a / 4) as i64)
}

/// Largest `a` whose base value is anchored by known data.
pub const UPSILON_BASE_ANCHORED: u64 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UpsilonValue {
    pub value: i64,
    /// Some base value with `a > 5` was used.
    pub extrapolated: bool,
    /// Largest `a` whose base value was used (0 for the unknot).
    pub max_base: u64,
}

/// `Upsilon_{T(p,q)}(1)` from `Upsilon_{T(a,b)} = Upsilon_{T(a,b-a)} + Upsilon_{T(a,a+1)}`,
/// with the repeated subtractions collapsed into Euclidean division.
pub fn upsilon1_torus(p: u64, q: u64) -> Result<UpsilonValue> {
    let k = TorusKnot::new(p, q)?.normalized();
    let (mut a, mut b) = (k.p(), k.q());
    let mut value: i64 = 0;
    let mut max_base = 0;
    while a > 1 {
        let (steps, rest) = (b / a, b % a);
        value = upsilon_base(a)
            .checked_mul(steps as i64)
            .and_then(|v| v.checked_add(value))
            .ok_or(Error::Overflow("Upsilon"))?;
        max_base = max_base.max(a);
        (a, b) = (rest, a);
    }
    Ok(UpsilonValue { value, extrapolated: max_base > UPSILON_BASE_ANCHORED, max_base })
}

/// `g_4(T(p,q)) = (p-1)(q-1)/2`.
pub fn genus4_torus(k: TorusKnot) -> i64 {
    ((k.p() - 1) * (k.q() - 1) / 2) as i64
}

/// Upper bound on the nonorientable 4-genus of a single torus knot, with
/// the reason.
pub fn gamma4_upper_torus(k: TorusKnot, registry: &Registry) -> (i64, String) {
    let k = k.normalized();
    if k.is_unknot() {
        return (1, "unknot".into());
    }
    if let Some(entry) = registry.gamma4_upper(k) {
        return (entry.upper, entry.provenance.clone());
    }
    match k.p() {
        2 | 3 => (1, "Moebius band from one band move".into()),
        _ => (2 * genus4_torus(k) + 1, "2*g4+1".into()),
    }
}

/// All invariants of one expression, plus the construction apexes and
/// registry facts the geography engine needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantBundle {
    pub knot: KnotExpr,
    pub sigma: i64,
    pub upsilon1: Rational,
    pub arf: u8,
    pub det: BigUint,
    pub delta: Option<Rational>,
    pub g4_upper: i64,
    pub gamma4_upper: i64,
    pub gamma4_upper_reason: String,
    pub gamma4_exact: Option<i64>,
    pub apexes: Vec<Apex>,
    pub forbidden_facts: Vec<ForbiddenFact>,
    pub upsilon_extrapolated: bool,
    pub options: Options,
}

impl InvariantBundle {
    /// `Sigma(K)` is an integer homology sphere exactly when `det = 1`.
    pub fn homology_sphere(&self) -> bool {
        self.det.is_one()
    }

    /// `|Upsilon(1) - sigma/2|`.
    pub fn oss_gap(&self) -> Rational {
        rational::abs(&(self.upsilon1 - Rational::new(self.sigma, 2)))
    }
}

/// Evaluates invariants against one registry with fixed options.
#[derive(Debug, Clone, Copy)]
pub struct Calculator<'r> {
    pub registry: &'r Registry,
    pub options: Options,
}

impl<'r> Calculator<'r> {
    pub fn new(registry: &'r Registry, options: Options) -> Self {
        Calculator { registry, options }
    }

    fn facts(&self, name: &str) -> Result<&'r KnownFacts> {
        self.registry.named(name).ok_or_else(|| Error::Unresolved(name.to_string()))
    }

    fn terms(k: &KnotExpr) -> KnotExpr {
        k.normalize()
    }

    pub fn signature(&self, k: &KnotExpr) -> Result<i64> {
        let mut total: i64 = 0;
        for t in Self::terms(k).terms() {
            let s = match &t.base {
                Base::Torus(tk) => signature_torus(tk.p(), tk.q())?,
                Base::Named(n) => self.facts(n.name())?.sigma,
            };
            total = s
                .checked_mul(t.coeff)
                .and_then(|v| v.checked_add(total))
                .ok_or(Error::Overflow("signature"))?;
        }
        Ok(total)
    }

    /// Weighted sum of `Upsilon(1)`, plus whether an extrapolated base value
    /// was involved.
    pub fn upsilon1_flagged(&self, k: &KnotExpr) -> Result<(Rational, bool)> {
        let mut total = rational::int(0);
        let mut extrapolated = false;
        for t in Self::terms(k).terms() {
            let u = match &t.base {
                Base::Torus(tk) => {
                    let v = upsilon1_torus(tk.p(), tk.q())?;
                    if v.extrapolated {
                        if !self.options.allow_extrapolated_upsilon {
                            return Err(Error::ExtrapolatedUpsilon { p: tk.p(), q: tk.q(), a: v.max_base });
                        }
                        extrapolated = true;
                    }
                    rational::int(v.value)
                }
                Base::Named(n) => self.facts(n.name())?.upsilon1,
            };
            let scaled = rational::checked_scale(&u, t.coeff, "Upsilon")?;
            total = rational::checked_add(&total, &scaled, "Upsilon")?;
        }
        Ok((total, extrapolated))
    }

    pub fn upsilon1(&self, k: &KnotExpr) -> Result<Rational> {
        self.upsilon1_flagged(k).map(|(u, _)| u)
    }

    /// `|Delta_K(-1)|`, multiplicative over terms and blind to mirroring.
    pub fn determinant(&self, k: &KnotExpr) -> Result<BigUint> {
        let mut det = BigUint::one();
        for t in Self::terms(k).terms() {
            let d = self.base_alexander_at_minus_one(&t.base)?.unsigned_abs();
            det *= BigUint::from(d).pow(t.coeff.unsigned_abs() as u32);
        }
        Ok(det)
    }

    fn base_alexander_at_minus_one(&self, base: &Base) -> Result<i64> {
        match base {
            Base::Torus(tk) => Ok(alexander_torus_at_minus_one(*tk)),
            // Only the class of the value up to sign matters downstream.
            Base::Named(n) => Ok(self.facts(n.name())?.det as i64),
        }
    }

    /// Arf invariant from `Delta_K(-1) mod 8` of the whole expression.
    pub fn arf(&self, k: &KnotExpr) -> Result<u8> {
        let mut residue: i64 = 1;
        for t in Self::terms(k).terms() {
            let v = self.base_alexander_at_minus_one(&t.base)?.rem_euclid(8);
            let mut pow = 1i64;
            // Units mod 8 square to 1, so only the parity of the exponent matters.
            if t.coeff.unsigned_abs() % 2 == 1 {
                pow = v;
            }
            residue = (residue * pow).rem_euclid(8);
        }
        Ok(arf_from_residue(residue))
    }

    pub fn genus4_upper(&self, k: &KnotExpr) -> Result<i64> {
        let mut total: i64 = 0;
        for t in Self::terms(k).terms() {
            let g = match &t.base {
                Base::Torus(tk) => genus4_torus(*tk),
                Base::Named(n) => self.facts(n.name())?.g4_upper,
            };
            total = g
                .checked_mul(t.coeff.abs())
                .and_then(|v| v.checked_add(total))
                .ok_or(Error::Overflow("4-genus bound"))?;
        }
        Ok(total)
    }

    /// `delta(K)` when every term resolves; `None` otherwise.
    pub fn delta_lookup(&self, k: &KnotExpr) -> Option<Rational> {
        let mut total = rational::int(0);
        for t in Self::terms(k).terms() {
            let d = match &t.base {
                Base::Torus(tk) => self.registry.delta(*tk)?.delta,
                Base::Named(n) => self.registry.named(n.name())?.delta?,
            };
            total = rational::checked_add(&total, &rational::checked_scale(&d, t.coeff, "delta").ok()?, "delta").ok()?;
        }
        Some(total)
    }

    /// Per-term subadditive bound `sum |c_i| * gamma4(base_i)`.
    fn gamma4_subadditive(&self, k: &KnotExpr) -> Result<Option<i64>> {
        let terms = Self::terms(k);
        if terms.is_empty() {
            return Ok(None);
        }
        let mut total: i64 = 0;
        for t in terms.terms() {
            let g = match &t.base {
                Base::Torus(tk) => gamma4_upper_torus(*tk, self.registry).0,
                Base::Named(n) => {
                    let f = self.facts(n.name())?;
                    let apex_min = f.apexes.iter().map(|a| a.point.h).min();
                    f.gamma4_exact
                        .unwrap_or_else(|| apex_min.unwrap_or(i64::MAX).min(2 * f.g4_upper + 1))
                }
            };
            total = g
                .checked_mul(t.coeff.abs())
                .and_then(|v| v.checked_add(total))
                .ok_or(Error::Overflow("gamma4 bound"))?;
        }
        Ok(Some(total))
    }

    /// `min(2 g4 + 1, sum |c_i| gamma4_i, min apex h)` with the reason for
    /// the winning candidate.
    pub fn gamma4_upper(&self, k: &KnotExpr, apexes: &[Apex]) -> Result<(i64, String)> {
        let g4 = self.genus4_upper(k)?;
        let mut best = (
            g4.checked_mul(2).and_then(|v| v.checked_add(1)).ok_or(Error::Overflow("gamma4 bound"))?,
            format!("stabilized orientable surface: 2*g4+1 with g4 <= {g4}"),
        );
        if let Some(s) = self.gamma4_subadditive(k)? {
            if s < best.0 {
                best = (s, "boundary connected sum of per-summand surfaces".into());
            }
        }
        if let Some(a) = apexes.iter().min_by_key(|a| (a.point.h, a.point.e)) {
            if a.point.h < best.0 {
                best = (a.point.h, format!("constructed surface with h = {}", a.point.h));
            }
        }
        Ok(best)
    }

    /// Assembles every invariant and checks the bundle's consistency
    /// conditions.
    pub fn bundle(&self, k: &KnotExpr) -> Result<InvariantBundle> {
        let knot = k.normalize();
        for n in knot.named_bases() {
            self.facts(n.name())?;
        }
        let sigma = self.signature(&knot)?;
        let (upsilon1, upsilon_extrapolated) = self.upsilon1_flagged(&knot)?;
        let arf = self.arf(&knot)?;
        let det = self.determinant(&knot)?;
        let delta = self.delta_lookup(&knot);
        let g4_upper = self.genus4_upper(&knot)?;
        let apexes = geography::construction_apexes(&knot, g4_upper, self.registry)?;
        let (gamma4_upper, gamma4_upper_reason) = self.gamma4_upper(&knot, &apexes)?;

        let (gamma4_exact, forbidden_facts) = match knot.terms() {
            [t] if t.coeff.abs() == 1 => match &t.base {
                Base::Named(n) => {
                    let f = self.facts(n.name())?;
                    let facts = if t.coeff > 0 {
                        f.forbidden.clone()
                    } else {
                        f.forbidden.iter().map(ForbiddenFact::reflect).collect()
                    };
                    (f.gamma4_exact, facts)
                }
                Base::Torus(_) => (None, Vec::new()),
            },
            _ => (None, Vec::new()),
        };

        let bundle = InvariantBundle {
            knot,
            sigma,
            upsilon1,
            arf,
            det,
            delta,
            g4_upper,
            gamma4_upper: gamma4_exact.map_or(gamma4_upper, |g| g.min(gamma4_upper)),
            gamma4_upper_reason: match gamma4_exact {
                Some(g) if g < gamma4_upper => "registry exact value".into(),
                _ => gamma4_upper_reason,
            },
            gamma4_exact,
            apexes,
            forbidden_facts,
            upsilon_extrapolated,
            options: self.options,
        };
        check_bundle(&bundle)?;
        Ok(bundle)
    }
}

fn arf_from_residue(r: i64) -> u8 {
    match r.rem_euclid(8) {
        1 | 7 => 0,
        3 | 5 => 1,
        other => unreachable!("Delta(-1) is odd, got residue {other}"),
    }
}

/// Consistency conditions every bundle must satisfy; a failure means a
/// registry entry or a construction rule is wrong.
pub fn check_bundle(b: &InvariantBundle) -> Result<()> {
    if b.sigma % 2 != 0 {
        return Err(Error::Inconsistent(format!("signature {} is odd", b.sigma)));
    }
    let (r1, r2) = geography::allowed_region(b);
    for a in &b.apexes {
        if !a.point.parity_ok() {
            return Err(Error::Inconsistent(format!("apex {} violates e = 2h (mod 4)", a.point)));
        }
        if !r1.contains(a.point) || !r2.contains(a.point) {
            return Err(Error::Inconsistent(format!(
                "apex {} ({}) lies outside the signature/Upsilon wedges",
                a.point, a.certificate
            )));
        }
    }
    if b.oss_gap() > rational::int(b.gamma4_upper) {
        return Err(Error::Inconsistent(format!(
            "|Upsilon(1) - sigma/2| = {} exceeds the gamma4 upper bound {}",
            rational::to_text(&b.oss_gap()),
            b.gamma4_upper
        )));
    }
    if let Some(g) = b.gamma4_exact {
        if rational::int(g) < b.oss_gap() {
            return Err(Error::Inconsistent(format!("registry gamma4 = {g} is below the Upsilon bound")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geography::LatticePoint;

    fn calc(reg: &Registry) -> Calculator<'_> {
        Calculator::new(reg, Options::default())
    }

    fn k(s: &str) -> KnotExpr {
        s.parse().unwrap()
    }

    /// Direct double loop with exact rational comparisons.
    fn signature_brute(p: u64, q: u64) -> i64 {
        let mut s = 0;
        for i in 1..p {
            for j in 1..q {
                let x = Rational::new(i as i64, p as i64) + Rational::new(j as i64, q as i64);
                assert!(x != Rational::new(1, 2) && x != rational::int(1) && x != Rational::new(3, 2));
                if x > Rational::new(1, 2) && x < Rational::new(3, 2) {
                    s -= 1;
                } else {
                    s += 1;
                }
            }
        }
        s
    }

    /// Single-step recursion exactly as stated, without Euclidean shortcuts.
    fn upsilon_literal(p: u64, q: u64) -> i64 {
        let (a, b) = (p.min(q), p.max(q));
        if a == 1 {
            0
        } else if b == a + 1 {
            upsilon_base(a)
        } else {
            upsilon_literal(a, b - a) + upsilon_base(a)
        }
    }

    #[test]
    fn signature_examples() {
        assert_eq!(signature_torus(2, 3).unwrap(), -2);
        assert_eq!(signature_torus(3, 7).unwrap(), -8);
        assert_eq!(signature_torus(5, 9).unwrap(), -24);
        assert_eq!(signature_torus(13, 5).unwrap(), -32);
        assert_eq!(signature_torus(1, 9).unwrap(), 0);
    }

    #[test]
    fn signature_rows_match_brute_force() {
        for p in 2..14u64 {
            for q in p + 1..40 {
                if num_integer::gcd(p, q) == 1 {
                    assert_eq!(signature_torus(p, q).unwrap(), signature_brute(p, q), "T({p},{q})");
                }
            }
        }
    }

    #[test]
    fn signature_oracle_examples() {
        assert_eq!(signature_torus_oracle(2, 9), Some(-8));
        assert_eq!(signature_torus_oracle(3, 8), Some(-10));
        assert_eq!(signature_torus_oracle(3, 8), Some((-4 * 8 + 2) / 3));
        assert_eq!(signature_torus_oracle(3, 5), Some(-8));
        assert_eq!(signature_torus_oracle(5, 9), None);
        assert_eq!(signature_torus_oracle(3, 9), None);
    }

    #[test]
    fn signature_large_indices_are_fast() {
        let s = signature_torus(999_983, 1_000_000).unwrap();
        assert_eq!(s % 2, 0);
        assert!(s < 0);
    }

    #[test]
    fn upsilon_examples() {
        assert_eq!(upsilon1_torus(3, 4).unwrap().value, -2);
        assert_eq!(upsilon1_torus(5, 13).unwrap().value, -15);
        assert_eq!(upsilon1_torus(5, 9).unwrap().value, -10);
        assert_eq!(upsilon1_torus(2, 7).unwrap().value, -3);
        assert_eq!(upsilon1_torus(1, 9).unwrap().value, 0);
        assert!(!upsilon1_torus(5, 13).unwrap().extrapolated);
        assert!(upsilon1_torus(6, 7).unwrap().extrapolated);
        assert!(upsilon1_torus(4, 6).is_err());
    }

    #[test]
    fn upsilon_matches_literal_recursion() {
        for p in 1..12u64 {
            for q in 1..60u64 {
                if num_integer::gcd(p, q) == 1 {
                    assert_eq!(upsilon1_torus(p, q).unwrap().value, upsilon_literal(p, q), "T({p},{q})");
                }
            }
        }
    }

    #[test]
    fn extrapolated_base_is_gated() {
        let reg = Registry::empty();
        let err = calc(&reg).upsilon1(&k("T(6,7)")).unwrap_err();
        assert!(matches!(err, Error::ExtrapolatedUpsilon { a: 6, .. }));
        let allow = Calculator::new(&reg, Options { allow_extrapolated_upsilon: true, ..Options::default() });
        assert_eq!(allow.upsilon1_flagged(&k("T(6,7)")).unwrap(), (rational::int(-9), true));
    }

    #[test]
    fn expression_invariants() {
        let reg = Registry::builtin();
        let c = calc(&reg);
        assert_eq!(c.signature(&k("-T(2,3)")).unwrap(), 2);
        assert_eq!(c.signature(&k("2*T(5,9) # -3*T(5,13)")).unwrap(), 48);
        assert_eq!(c.signature(&KnotExpr::unknot()).unwrap(), 0);
        assert_eq!(c.upsilon1(&k("T(5,9) # -2*T(5,13)")).unwrap(), rational::int(20));
        assert_eq!(c.upsilon1(&k("4_1")).unwrap(), rational::int(0));
        assert_eq!(c.upsilon1(&KnotExpr::unknot()).unwrap(), rational::int(0));
    }

    #[test]
    fn determinant_and_arf() {
        let reg = Registry::builtin();
        let c = calc(&reg);
        assert_eq!(c.determinant(&k("T(2,3)")).unwrap(), BigUint::from(3u32));
        assert_eq!(c.determinant(&k("T(5,9)")).unwrap(), BigUint::from(1u32));
        assert_eq!(c.determinant(&KnotExpr::unknot()).unwrap(), BigUint::from(1u32));
        assert_eq!(c.determinant(&k("-2*T(2,3) # 4_1")).unwrap(), BigUint::from(45u32));
        assert_eq!(c.arf(&k("T(2,3)")).unwrap(), 1);
        assert_eq!(c.arf(&k("T(2,7)")).unwrap(), 0);
        assert_eq!(c.arf(&KnotExpr::unknot()).unwrap(), 0);
        assert_eq!(c.arf(&k("T(2,3) # T(2,5)")).unwrap(), 0);
        assert_eq!(c.arf(&k("4_1")).unwrap(), 1);
    }

    #[test]
    fn genus_bounds() {
        let reg = Registry::builtin();
        let c = calc(&reg);
        assert_eq!(c.genus4_upper(&k("T(2,7)")).unwrap(), 3);
        assert_eq!(c.genus4_upper(&k("T(3,5)")).unwrap(), 4);
        assert_eq!(c.genus4_upper(&k("T(5,9)")).unwrap(), 16);
        assert_eq!(c.bundle(&k("2*T(5,9) # -3*T(5,13)")).unwrap().gamma4_upper, 7);
        assert_eq!(c.bundle(&k("T(3,11)")).unwrap().gamma4_upper, 1);
        assert_eq!(c.bundle(&KnotExpr::unknot()).unwrap().gamma4_upper, 1);
    }

    #[test]
    fn delta_examples() {
        let reg = Registry::builtin();
        let c = calc(&reg);
        assert_eq!(c.delta_lookup(&k("T(5,9)")), Some(rational::int(4)));
        assert_eq!(c.delta_lookup(&k("2*T(5,9) # -3*T(5,13)")), Some(rational::int(-4)));
        assert_eq!(c.delta_lookup(&k("T(2,3)")), None);
        assert_eq!(c.delta_lookup(&k("T(5,9) # T(2,3)")), None);
    }

    #[test]
    fn bundle_trefoil() {
        let reg = Registry::builtin();
        let b = calc(&reg).bundle(&k("T(2,3)")).unwrap();
        assert_eq!((b.sigma, b.upsilon1, b.arf), (-2, rational::int(-1), 1));
        assert_eq!(b.det, BigUint::from(3u32));
        assert_eq!((b.delta, b.g4_upper, b.gamma4_upper), (None, 1, 1));
        let pts: Vec<_> = b.apexes.iter().map(|a| a.point).collect();
        for p in [LatticePoint::new(-6, 1), LatticePoint::new(2, 3), LatticePoint::new(-2, 3)] {
            assert!(pts.contains(&p), "{p}");
        }
    }

    #[test]
    fn bundle_figure_eight_and_unknot() {
        let reg = Registry::builtin();
        let b = calc(&reg).bundle(&k("4_1")).unwrap();
        let pts: Vec<_> = b.apexes.iter().map(|a| a.point).collect();
        assert!(pts.contains(&LatticePoint::new(4, 2)) && pts.contains(&LatticePoint::new(-4, 2)));
        assert_eq!(b.forbidden_facts.len(), 1);
        assert_eq!(b.gamma4_exact, Some(2));

        let u = calc(&reg).bundle(&KnotExpr::unknot()).unwrap();
        assert_eq!((u.sigma, u.upsilon1, u.arf), (0, rational::int(0), 0));
        assert_eq!(u.det, BigUint::from(1u32));
        let pts: Vec<_> = u.apexes.iter().map(|a| a.point).collect();
        assert_eq!(pts, vec![LatticePoint::new(-2, 1), LatticePoint::new(2, 1)]);
    }

    #[test]
    fn unresolved_names_error() {
        let reg = Registry::empty();
        assert_eq!(calc(&reg).bundle(&k("4_1")), Err(Error::Unresolved("4_1".into())));
        assert_eq!(calc(&reg).signature(&k("T(2,3) # 5_2")), Err(Error::Unresolved("5_2".into())));
    }

    #[test]
    fn inconsistent_registry_is_caught() {
        // Apex far below the signature wedge.
        let reg = Registry::from_json(
            r#"{"named":[{"name":"bad","sigma":-10,"upsilon1":"-5","arf":0,"det":1,"g4_upper":5,"apexes":[{"e":10,"h":1}]}]}"#,
        )
        .unwrap();
        assert!(matches!(calc(&reg).bundle(&k("bad")), Err(Error::Inconsistent(_))));
    }
}
