//! Coevents: truth valuations `EA → Z2`, stored by their support.
//!
//! Truth values are plain `bool`s (`true` is `1 ∈ Z2`). A coevent is
//! multiplicative when `φ(A ∩ B) = φ(A)·φ(B)`; a nonzero multiplicative
//! coevent is exactly `A*` for its principal event `A`, the coevent true on
//! every superset of `A`.

use std::cmp::Ordering;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::eventalg::{filter_principal, submasks, Event, EventAlgebra, EventFamily};
use crate::measure::{null_sets, Measure};

/// Default and maximum sample-space sizes for brute-force enumeration of
/// every map `EA → Z2`.
pub const BRUTE_FORCE_DEFAULT_CAP: usize = 3;
pub const BRUTE_FORCE_MAX_CAP: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoeventOptions {
    /// Admit `∅*` (the constant-true map) among the multiplicative coevents.
    pub include_empty_dual: bool,
    /// Largest `n` for which all `2^(2^n)` coevents may be enumerated.
    pub brute_force_cap: usize,
}

impl Default for CoeventOptions {
    fn default() -> Self {
        Self {
            include_empty_dual: false,
            brute_force_cap: BRUTE_FORCE_DEFAULT_CAP,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Coevent {
    algebra: EventAlgebra,
    support: EventFamily,
    table: FixedBitSet,
}

impl PartialEq for Coevent {
    fn eq(&self, other: &Self) -> bool {
        self.support == other.support
    }
}

impl Eq for Coevent {}

impl PartialOrd for Coevent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: lexicographic on the ascending list of support masks.
impl Ord for Coevent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.support
            .space()
            .cmp(&other.support.space())
            .then_with(|| self.support.masks().cmp(other.support.masks()))
    }
}

impl std::hash::Hash for Coevent {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.support.hash(state);
    }
}

impl Coevent {
    pub fn from_support(algebra: &EventAlgebra, support: EventFamily) -> Result<Self> {
        if support.space() != algebra.key() {
            return Err(Error::MismatchedSpace);
        }
        let mut table = FixedBitSet::with_capacity(algebra.size());
        for &m in support.masks() {
            table.insert(m as usize);
        }
        Ok(Self {
            algebra: algebra.clone(),
            support,
            table,
        })
    }

    pub fn from_predicate(algebra: &EventAlgebra, holds: impl Fn(Event) -> bool) -> Self {
        let mut table = FixedBitSet::with_capacity(algebra.size());
        let mut members = Vec::new();
        for e in algebra.events() {
            if holds(e) {
                table.insert(e.bits() as usize);
                members.push(e.bits());
            }
        }
        Self {
            algebra: algebra.clone(),
            support: EventFamily::from_sorted(algebra, members),
            table,
        }
    }

    fn from_masks(algebra: &EventAlgebra, members: Vec<u32>) -> Self {
        let mut table = FixedBitSet::with_capacity(algebra.size());
        for &m in &members {
            table.insert(m as usize);
        }
        Self {
            algebra: algebra.clone(),
            support: EventFamily::from_sorted(algebra, members),
            table,
        }
    }

    /// The map sending every event to 0.
    pub fn zero(algebra: &EventAlgebra) -> Self {
        Self::from_masks(algebra, Vec::new())
    }

    /// `γ*`: true exactly on the events containing `γ`.
    pub fn classical_from_history(algebra: &EventAlgebra, label: &str) -> Result<Self> {
        let h = algebra.singleton(label)?;
        Ok(Self::principal(algebra, h.bits()))
    }

    pub(crate) fn principal(algebra: &EventAlgebra, principal: u32) -> Self {
        let rest = algebra.full_mask() & !principal;
        let mut members: Vec<u32> = submasks(rest).map(|s| s | principal).collect();
        members.sort_unstable();
        Self::from_masks(algebra, members)
    }

    /// `A*`, true exactly on the supersets of `A`.
    pub fn dual_of_event(algebra: &EventAlgebra, a: Event, options: &CoeventOptions) -> Result<Self> {
        algebra.check(a)?;
        if a.is_empty() && !options.include_empty_dual {
            return Err(Error::EmptyEventDual);
        }
        Ok(Self::principal(algebra, a.bits()))
    }

    /// `φ*`, the principal event of a nonzero multiplicative coevent.
    pub fn dual(&self) -> Result<Event> {
        if self.support.is_empty() {
            return Err(Error::ZeroCoevent);
        }
        filter_principal(self.algebra.n(), self.support.masks())
            .map(|b| self.algebra.event_unchecked(b))
            .ok_or(Error::NotMultiplicative)
    }

    pub fn algebra(&self) -> &EventAlgebra {
        &self.algebra
    }

    pub fn support(&self) -> &EventFamily {
        &self.support
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn evaluate(&self, a: Event) -> Result<bool> {
        self.algebra.check(a)?;
        Ok(self.holds(a.bits()))
    }

    pub(crate) fn holds(&self, bits: u32) -> bool {
        self.table.contains(bits as usize)
    }

    /// Homomorphism into Z2: preserves meets, joins, complements and the top.
    /// Decided by direct checks over all pairs.
    pub fn is_classical(&self) -> bool {
        let full = self.algebra.full_mask();
        if !self.holds(full) || self.holds(0) {
            return false;
        }
        for a in 0..=full {
            let fa = self.holds(a);
            if self.holds(full & !a) == fa {
                return false;
            }
            for b in a..=full {
                let fb = self.holds(b);
                if self.holds(a & b) != (fa && fb) || self.holds(a | b) != (fa || fb) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_multiplicative(&self) -> bool {
        let full = self.algebra.full_mask();
        (0..=full).all(|a| {
            let fa = self.holds(a);
            (a..=full).all(|b| self.holds(a & b) == (fa && self.holds(b)))
        })
    }

    /// True iff the coevent sends every null event of `m` to 0.
    pub fn is_preclusive(&self, m: &Measure) -> Result<bool> {
        if m.algebra().key() != self.algebra.key() {
            return Err(Error::MismatchedSpace);
        }
        Ok(null_sets(m).masks().iter().all(|&b| !self.holds(b)))
    }

    /// Modus ponens: `A ⊆ B` and `φ(A) = 1` imply `φ(B) = 1`.
    pub fn check_modus_ponens(&self) -> bool {
        let full = self.algebra.full_mask();
        self.support
            .masks()
            .iter()
            .all(|&a| submasks(full & !a).all(|extra| self.holds(a | extra)))
    }

    /// `A*` rendering for nonzero multiplicative coevents, the support list
    /// otherwise.
    pub fn render(&self) -> String {
        match self.dual() {
            Ok(a) => format!("{}*", self.algebra.render(a)),
            Err(_) => self.algebra.render_family(&self.support),
        }
    }
}

impl fmt::Display for Coevent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    All,
    Classical,
    ClassicalPreclusive,
    Multiplicative,
    Scheme,
    UserSupplied,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::All => "all",
            Provenance::Classical => "classical",
            Provenance::ClassicalPreclusive => "classical-preclusive",
            Provenance::Multiplicative => "multiplicative",
            Provenance::Scheme => "scheme",
            Provenance::UserSupplied => "user-supplied",
        }
    }
}

/// A deduplicated, canonically ordered set of coevents over one algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeventSpace {
    algebra: EventAlgebra,
    provenance: Provenance,
    members: Vec<Coevent>,
}

impl CoeventSpace {
    pub fn new(algebra: &EventAlgebra, provenance: Provenance, members: Vec<Coevent>) -> Result<Self> {
        if members.iter().any(|c| c.algebra.key() != algebra.key()) {
            return Err(Error::MismatchedSpace);
        }
        let mut members = members;
        members.sort();
        members.dedup();
        Ok(Self {
            algebra: algebra.clone(),
            provenance,
            members,
        })
    }

    pub fn user_supplied(algebra: &EventAlgebra, members: Vec<Coevent>) -> Result<Self> {
        Self::new(algebra, Provenance::UserSupplied, members)
    }

    /// Every map `EA → Z2`, by brute force.
    pub fn all_maps(algebra: &EventAlgebra, options: &CoeventOptions) -> Result<Self> {
        let cap = options.brute_force_cap.min(BRUTE_FORCE_MAX_CAP);
        if algebra.n() > cap {
            return Err(Error::CapExceeded {
                what: "brute-force coevent enumeration (histories)",
                size: algebra.n(),
                cap,
                flag: "--cap",
            });
        }
        let size = algebra.size();
        let members = (0u64..1 << size)
            .map(|code| {
                let support = (0..size as u32).filter(|b| code & (1 << b) != 0).collect();
                Coevent::from_masks(algebra, support)
            })
            .collect();
        Self::new(algebra, Provenance::All, members)
    }

    /// `{γ* | γ ∈ Ω}`.
    pub fn classical(algebra: &EventAlgebra) -> Self {
        let members = (0..algebra.n())
            .map(|i| Coevent::principal(algebra, 1 << i))
            .collect();
        Self::new(algebra, Provenance::Classical, members).expect("same algebra")
    }

    /// The classical coevents that are preclusive for `m`.
    pub fn classical_preclusive(m: &Measure) -> Self {
        let algebra = m.algebra();
        let nulls = null_sets(m).union_of_members();
        let members = (0..algebra.n())
            .filter(|i| nulls & (1 << i) == 0)
            .map(|i| Coevent::principal(algebra, 1 << i))
            .collect();
        Self::new(algebra, Provenance::ClassicalPreclusive, members).expect("same algebra")
    }

    /// `{A* | A ≠ ∅}`, plus `∅*` under `include_empty_dual`.
    pub fn multiplicative(algebra: &EventAlgebra, options: &CoeventOptions) -> Self {
        let start = if options.include_empty_dual { 0 } else { 1 };
        let members = (start..=algebra.full_mask())
            .map(|a| Coevent::principal(algebra, a))
            .collect();
        Self::new(algebra, Provenance::Multiplicative, members).expect("same algebra")
    }

    /// The multiplicative scheme: primitive preclusive multiplicative
    /// coevents. `A*` is preclusive iff no null event contains `A`, and
    /// primitive iff no nonempty proper subset of `A` is preclusive.
    pub fn scheme(m: &Measure) -> Self {
        let algebra = m.algebra();
        let nulls = null_sets(m);
        let preclusive = |a: u32| nulls.masks().iter().all(|&n| a & !n != 0);
        let members = (1..=algebra.full_mask())
            .filter(|&a| preclusive(a))
            .filter(|&a| submasks(a).all(|b| b == a || b == 0 || !preclusive(b)))
            .map(|a| Coevent::principal(algebra, a))
            .collect();
        Self::new(algebra, Provenance::Scheme, members).expect("same algebra")
    }

    pub fn algebra(&self) -> &EventAlgebra {
        &self.algebra
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Coevent] {
        &self.members
    }

    pub fn get(&self, index: usize) -> Option<&Coevent> {
        self.members.get(index)
    }

    pub fn index_of(&self, coevent: &Coevent) -> Option<usize> {
        self.members.binary_search(coevent).ok()
    }

    /// Principal events of the members, when every member is a nonzero
    /// multiplicative coevent (so the dual order `A* ≤ B* ⇔ A ⊇ B` exists).
    pub fn principal_events(&self) -> Result<Vec<Event>> {
        self.members
            .iter()
            .map(|c| c.dual().map_err(|_| Error::NoDualOrder))
            .collect()
    }

    /// Whether no member's principal event strictly contains another's.
    pub fn is_antichain(&self) -> Result<bool> {
        let duals = self.principal_events()?;
        Ok(duals.iter().all(|a| {
            duals
                .iter()
                .all(|b| a == b || a.bits() & b.bits() != b.bits())
        }))
    }

    pub fn render(&self) -> String {
        let parts: Vec<String> = self.members.iter().map(Coevent::render).collect();
        format!("[{}]", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{DecoherenceSpec, GaussianRational, Rational};

    fn coin_algebra() -> EventAlgebra {
        EventAlgebra::from_labels(["h", "t"]).unwrap()
    }

    fn coin() -> Measure {
        let half: Rational = "1/2".parse().unwrap();
        Measure::from_atom_weights(coin_algebra(), &[half.clone(), half]).unwrap()
    }

    fn t2() -> Measure {
        let ea = EventAlgebra::from_labels(["1", "2", "3"]).unwrap();
        let amps: Vec<GaussianRational> = [1, 1, -1]
            .iter()
            .map(|&a| GaussianRational::real(Rational::from_integer(a)))
            .collect();
        let d = DecoherenceSpec::from_amplitudes(ea, &amps).unwrap();
        crate::measure::measure_from_decoherence(&d).unwrap().0
    }

    fn opts() -> CoeventOptions {
        CoeventOptions::default()
    }

    #[test]
    fn evaluation() {
        let ea = coin_algebra();
        let h = ea.parse_event("h").unwrap();
        let star = Coevent::dual_of_event(&ea, h, &opts()).unwrap();
        assert!(star.evaluate(ea.full()).unwrap());
        assert!(!star.evaluate(ea.parse_event("t").unwrap()).unwrap());
        let zero = Coevent::zero(&ea);
        assert!(ea.events().all(|e| !zero.evaluate(e).unwrap()));
        let other = EventAlgebra::from_labels(["x"]).unwrap();
        assert_eq!(star.evaluate(other.full()), Err(Error::MismatchedSpace));
    }

    #[test]
    fn classical_coevents() {
        let ea = coin_algebra();
        let h = Coevent::classical_from_history(&ea, "h").unwrap();
        assert_eq!(ea.render_family(h.support()), "[{h}, {h,t}]");
        assert!(h.is_classical());

        let abc = EventAlgebra::from_labels(["a", "b", "c"]).unwrap();
        let a = Coevent::classical_from_history(&abc, "a").unwrap();
        assert!(!a.evaluate(abc.parse_event("b,c").unwrap()).unwrap());
        for label in ["a", "b", "c"] {
            let c = Coevent::classical_from_history(&abc, label).unwrap();
            assert_eq!(c.support().len(), 4);
        }
        assert!(matches!(
            Coevent::classical_from_history(&abc, "d"),
            Err(Error::UnknownHistory(_))
        ));
    }

    #[test]
    fn non_classical_coevents() {
        let ea = coin_algebra();
        let top = Coevent::dual_of_event(&ea, ea.full(), &opts()).unwrap();
        // Ω*({h}) ∨ Ω*({t}) = 0 but Ω*({h} ∪ {t}) = 1.
        let h = ea.parse_event("h").unwrap();
        let t = ea.parse_event("t").unwrap();
        assert!(!top.evaluate(h).unwrap() && !top.evaluate(t).unwrap());
        assert!(top.evaluate(h.join(t).unwrap()).unwrap());
        assert!(!top.is_classical());
        assert!(!Coevent::zero(&ea).is_classical());
    }

    #[test]
    fn preclusion() {
        let coin = coin();
        let ea = coin.algebra().clone();
        assert!(Coevent::classical_from_history(&ea, "h")
            .unwrap()
            .is_preclusive(&coin)
            .unwrap());

        let m = t2();
        let ea = m.algebra().clone();
        let one = Coevent::classical_from_history(&ea, "1").unwrap();
        assert!(!one.is_preclusive(&m).unwrap());
        let twelve = Coevent::dual_of_event(&ea, ea.parse_event("1,2").unwrap(), &opts()).unwrap();
        assert!(twelve.is_preclusive(&m).unwrap());
        assert!(one.is_preclusive(&coin).is_err());
    }

    #[test]
    fn classical_preclusive_sets() {
        assert_eq!(CoeventSpace::classical_preclusive(&coin()).render(), "[{h}*, {t}*]");
        assert!(CoeventSpace::classical_preclusive(&t2()).is_empty());
        let abc = EventAlgebra::from_labels(["a", "b", "c"]).unwrap();
        let dirac = Measure::dirac(abc, 1).unwrap();
        assert_eq!(CoeventSpace::classical_preclusive(&dirac).render(), "[{b}*]");
    }

    #[test]
    fn multiplicativity() {
        let ea = coin_algebra();
        for a in ea.events().skip(1) {
            assert!(Coevent::dual_of_event(&ea, a, &opts()).unwrap().is_multiplicative());
        }
        let h = ea.parse_event("h").unwrap();
        let t = ea.parse_event("t").unwrap();
        let bad = Coevent::from_support(&ea, EventFamily::new(&ea, [h, t, ea.full()]).unwrap())
            .unwrap();
        assert!(!bad.is_multiplicative());
        assert_eq!(bad.dual(), Err(Error::NotMultiplicative));
        assert!(Coevent::classical_from_history(&ea, "t")
            .unwrap()
            .is_multiplicative());
    }

    #[test]
    fn duality() {
        let abc = EventAlgebra::from_labels(["a", "b", "c"]).unwrap();
        let ab = abc.parse_event("a,b").unwrap();
        let star = Coevent::dual_of_event(&abc, ab, &opts()).unwrap();
        assert!(star.evaluate(abc.full()).unwrap());
        assert!(!star.evaluate(abc.parse_event("a").unwrap()).unwrap());
        assert_eq!(star.dual().unwrap(), ab);
        assert_eq!(star.render(), "{a,b}*");

        let ea = coin_algebra();
        let top = Coevent::dual_of_event(&ea, ea.full(), &opts()).unwrap();
        assert_eq!(ea.render_family(top.support()), "[{h,t}]");

        assert_eq!(
            Coevent::dual_of_event(&ea, ea.empty(), &opts()),
            Err(Error::EmptyEventDual)
        );
        let with_empty = CoeventOptions {
            include_empty_dual: true,
            ..opts()
        };
        let empty_star = Coevent::dual_of_event(&ea, ea.empty(), &with_empty).unwrap();
        assert_eq!(empty_star.support().len(), 4);
        assert_eq!(empty_star.dual().unwrap(), ea.empty());
        assert_eq!(empty_star.render(), "{}*");
        assert_eq!(Coevent::zero(&ea).dual(), Err(Error::ZeroCoevent));
        assert_eq!(Coevent::zero(&ea).render(), "[]");
    }

    #[test]
    fn multiplicative_enumeration() {
        let ea = coin_algebra();
        let mce = CoeventSpace::multiplicative(&ea, &opts());
        assert_eq!(mce.render(), "[{h}*, {t}*, {h,t}*]");
        let abc = EventAlgebra::from_labels(["a", "b", "c"]).unwrap();
        assert_eq!(CoeventSpace::multiplicative(&abc, &opts()).len(), 7);
        let with_empty = CoeventOptions {
            include_empty_dual: true,
            ..opts()
        };
        assert_eq!(CoeventSpace::multiplicative(&abc, &with_empty).len(), 8);
    }

    #[test]
    fn brute_force_multiplicative_census() {
        for labels in [vec!["a"], vec!["a", "b"], vec!["a", "b", "c"]] {
            let ea = EventAlgebra::from_labels(labels).unwrap();
            let all = CoeventSpace::all_maps(&ea, &opts()).unwrap();
            let found: Vec<&Coevent> = all.members().iter().filter(|c| c.is_multiplicative()).collect();
            let with_empty = CoeventOptions {
                include_empty_dual: true,
                ..opts()
            };
            let mut expected = CoeventSpace::multiplicative(&ea, &with_empty).members().to_vec();
            expected.push(Coevent::zero(&ea));
            expected.sort();
            assert_eq!(found.into_iter().cloned().collect::<Vec<_>>(), expected);
        }
    }

    #[test]
    fn brute_force_cap() {
        let ea = EventAlgebra::from_labels(["a", "b", "c", "d"]).unwrap();
        assert!(matches!(
            CoeventSpace::all_maps(&ea, &opts()),
            Err(Error::CapExceeded { flag: "--cap", .. })
        ));
        let five = EventAlgebra::from_labels(["a", "b", "c", "d", "e"]).unwrap();
        let raised = CoeventOptions {
            brute_force_cap: 9,
            ..opts()
        };
        assert!(CoeventSpace::all_maps(&five, &raised).is_err());
    }

    #[test]
    fn multiplicative_scheme() {
        assert_eq!(CoeventSpace::scheme(&coin()).render(), "[{h}*, {t}*]");
        let m = t2();
        let scheme = CoeventSpace::scheme(&m);
        assert_eq!(scheme.render(), "[{1,2}*]");
        assert!(scheme.is_antichain().unwrap());
        let abc = EventAlgebra::from_labels(["a", "b", "c"]).unwrap();
        let dirac = Measure::dirac(abc, 2).unwrap();
        assert_eq!(CoeventSpace::scheme(&dirac).render(), "[{c}*]");
    }

    #[test]
    fn modus_ponens() {
        let ea = coin_algebra();
        for c in CoeventSpace::multiplicative(&ea, &opts()).members() {
            assert!(c.check_modus_ponens());
        }
        let h = ea.parse_event("h").unwrap();
        let only_h = Coevent::from_support(&ea, EventFamily::new(&ea, [h]).unwrap()).unwrap();
        assert!(!only_h.check_modus_ponens());
        assert!(Coevent::zero(&ea).check_modus_ponens());
    }

    #[test]
    fn canonical_order_is_by_support_list() {
        let ea = EventAlgebra::from_labels(["1", "2", "3"]).unwrap();
        let v = CoeventSpace::new(
            &ea,
            Provenance::UserSupplied,
            vec![
                Coevent::principal(&ea, 0b111),
                Coevent::principal(&ea, 0b011),
                Coevent::principal(&ea, 0b011),
            ],
        )
        .unwrap();
        assert_eq!(v.render(), "[{1,2}*, {1,2,3}*]");
    }
}
