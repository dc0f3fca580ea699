//! Coevents as beables: the valuation event algebra `EV = 2^V` over a
//! coevent space `V`, the embedding `τ(A) = {φ ∈ V | φ(A) = 1}`, and a
//! comparison of the lattice structure pushed forward from `EA` with the one
//! inherited from `EV`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};

use fixedbitset::FixedBitSet;

use crate::coevent::{Coevent, CoeventSpace};
use crate::error::{Error, Result};
use crate::eventalg::Event;

/// Largest sample space for which [`order_report`] scans all pairs of events.
pub const ORDER_REPORT_CAP: usize = 8;
/// Largest coevent space for which completions are computed.
pub const COMPLETION_CAP: usize = 20;

/// A subset of a coevent space, indexed by canonical member position.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ValuationEvent {
    members: FixedBitSet,
}

impl ValuationEvent {
    pub fn empty(universe: usize) -> Self {
        Self {
            members: FixedBitSet::with_capacity(universe),
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut members = FixedBitSet::with_capacity(universe);
        members.insert_range(..);
        Self { members }
    }

    pub fn from_indices(universe: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut members = FixedBitSet::with_capacity(universe);
        for i in indices {
            members.insert(i);
        }
        Self { members }
    }

    pub fn universe(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.members.contains(index)
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_clear()
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.ones()
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut members = self.members.clone();
        members.union_with(&other.members);
        Self { members }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut members = self.members.clone();
        members.intersect_with(&other.members);
        Self { members }
    }

    /// Complement relative to the whole coevent space.
    pub fn complement(&self) -> Self {
        let mut members = self.members.clone();
        members.toggle_range(..);
        Self { members }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.members.is_subset(&other.members)
    }
}

impl PartialOrd for ValuationEvent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on ascending member indices.
impl Ord for ValuationEvent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.members.ones().cmp(other.members.ones())
    }
}

/// Renders as the sorted list of member coevents, e.g. `[{1,2}*, {1,2,3}*]`.
pub fn render_valuation(space: &CoeventSpace, alpha: &ValuationEvent) -> String {
    let parts: Vec<String> = alpha
        .indices()
        .filter_map(|i| space.get(i).map(Coevent::render))
        .collect();
    format!("[{}]", parts.join(", "))
}

/// `τ(A)`: the members of `V` that send `A` to 1.
pub fn tau(space: &CoeventSpace, a: Event) -> Result<ValuationEvent> {
    space.algebra().check(a)?;
    Ok(tau_bits(space, a.bits()))
}

fn tau_bits(space: &CoeventSpace, bits: u32) -> ValuationEvent {
    ValuationEvent::from_indices(
        space.len(),
        space
            .members()
            .iter()
            .enumerate()
            .filter(|(_, c)| c.holds(bits))
            .map(|(i, _)| i),
    )
}

/// `f_φ`, evaluation of valuation events at a fixed coevent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruthFunction {
    pivot: usize,
}

impl TruthFunction {
    pub fn new(space: &CoeventSpace, pivot: &Coevent) -> Result<Self> {
        space
            .index_of(pivot)
            .map(|pivot| Self { pivot })
            .ok_or(Error::NotInSpace)
    }

    pub fn pivot(&self) -> usize {
        self.pivot
    }

    pub fn evaluate(&self, alpha: &ValuationEvent) -> bool {
        alpha.contains(self.pivot)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OrderWitnesses {
    /// `A < B` (by mask) with `τ(A) = τ(B)`.
    pub injectivity: Vec<(Event, Event)>,
    /// Representatives of two distinct images related both ways by the
    /// pushed-forward order.
    pub pushforward: Vec<(Event, Event)>,
    /// Representatives where `τ(A) ≤τ τ(B)` and `τ(A) ⊆ τ(B)` disagree.
    pub orders: Vec<(Event, Event)>,
    /// `τ(A ∩ B) ≠ τ(A) ∩ τ(B)`.
    pub meet: Vec<(Event, Event)>,
    /// `τ(A ∪ B) ≠ τ(A) ∪ τ(B)`.
    pub join: Vec<(Event, Event)>,
    /// `τ(A) ∪ τ(B)` lies outside `τ(EA)`.
    pub join_escapes_image: Vec<(Event, Event)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderReport {
    pub tau_injective: bool,
    pub pushforward_well_defined: bool,
    /// `None` when the pushed-forward order is not well defined.
    pub orders_agree: Option<bool>,
    pub meet_agree: bool,
    pub join_agree: bool,
    pub join_closed: bool,
    pub witnesses: OrderWitnesses,
    pub notes: Vec<String>,
}

/// Compares the orders and lattice operations of `EA` and `τ(EA) ⊆ EV`.
///
/// The pushed-forward relation on the image is `τ(A) R τ(B)` whenever
/// `A ⊆ B`; `≤τ` is its transitive closure, and it is well defined when that
/// closure is antisymmetric. For injective `τ` this is the order of `EA`
/// carried over verbatim.
pub fn order_report(space: &CoeventSpace) -> Result<OrderReport> {
    let algebra = space.algebra();
    let n = algebra.n();
    if n > ORDER_REPORT_CAP {
        return Err(Error::CapExceeded {
            what: "order report (histories)",
            size: n,
            cap: ORDER_REPORT_CAP,
            flag: "(none: hard limit)",
        });
    }
    let full = algebra.full_mask();
    let ev = |b: u32| algebra.event_unchecked(b);
    let images: Vec<ValuationEvent> = (0..=full).map(|b| tau_bits(space, b)).collect();

    // Image classes, keyed by first appearance (smallest mask).
    let mut class_of = vec![0usize; images.len()];
    let mut reps: Vec<u32> = Vec::new();
    let mut index: BTreeMap<&ValuationEvent, usize> = BTreeMap::new();
    for (b, img) in images.iter().enumerate() {
        let k = *index.entry(img).or_insert_with(|| {
            reps.push(b as u32);
            reps.len() - 1
        });
        class_of[b] = k;
    }
    let k = reps.len();

    let mut w = OrderWitnesses::default();
    for a in 0..=full {
        for b in a + 1..=full {
            if class_of[a as usize] == class_of[b as usize] {
                w.injectivity.push((ev(a), ev(b)));
            }
        }
    }
    let tau_injective = w.injectivity.is_empty();

    let mut rel = vec![false; k * k];
    for a in 0..=full {
        for extra in crate::eventalg::submasks(full & !a) {
            let b = a | extra;
            rel[class_of[a as usize] * k + class_of[b as usize]] = true;
        }
    }
    for m in 0..k {
        for i in 0..k {
            if rel[i * k + m] {
                for j in 0..k {
                    if rel[m * k + j] {
                        rel[i * k + j] = true;
                    }
                }
            }
        }
    }
    for i in 0..k {
        for j in i + 1..k {
            if rel[i * k + j] && rel[j * k + i] {
                w.pushforward.push((ev(reps[i]), ev(reps[j])));
            }
        }
    }
    let pushforward_well_defined = w.pushforward.is_empty();

    let mut notes = Vec::new();
    let orders_agree = if pushforward_well_defined {
        for i in 0..k {
            for j in 0..k {
                let inherited = images[reps[i] as usize].is_subset(&images[reps[j] as usize]);
                if rel[i * k + j] != inherited {
                    w.orders.push((ev(reps[i]), ev(reps[j])));
                }
            }
        }
        Some(w.orders.is_empty())
    } else {
        notes.push(
            "pushed-forward order is not well defined; order comparison withheld".to_string(),
        );
        None
    };

    let image_set: HashSet<&ValuationEvent> = images.iter().collect();
    for a in 0..=full {
        for b in a + 1..=full {
            let (ta, tb) = (&images[a as usize], &images[b as usize]);
            if images[(a & b) as usize] != ta.intersection(tb) {
                w.meet.push((ev(a), ev(b)));
            }
            let joined = ta.union(tb);
            if images[(a | b) as usize] != joined {
                w.join.push((ev(a), ev(b)));
            }
            if !image_set.contains(&joined) {
                w.join_escapes_image.push((ev(a), ev(b)));
            }
        }
    }
    if !tau_injective {
        notes.push(format!(
            "tau is not injective: {} distinct images for {} events",
            k,
            images.len()
        ));
    }

    Ok(OrderReport {
        tau_injective,
        pushforward_well_defined,
        orders_agree,
        meet_agree: w.meet.is_empty(),
        join_agree: w.join.is_empty(),
        join_closed: w.join_escapes_image.is_empty(),
        witnesses: w,
        notes,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CompletionMode {
    /// Closure under union and intersection.
    Upper,
    /// Closure under union, intersection and complement.
    Boolean,
}

impl CompletionMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CompletionMode::Upper => "upper",
            CompletionMode::Boolean => "boolean",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Completion {
    mode: CompletionMode,
    universe: usize,
    members: Vec<ValuationEvent>,
    /// For spaces with a dual order: whether every member is an up-set.
    upper_closed: Option<bool>,
    /// Principal-event masks of the space, when it has a dual order.
    principals: Option<Vec<u32>>,
}

impl Completion {
    pub fn mode(&self) -> CompletionMode {
        self.mode
    }

    pub fn members(&self) -> &[ValuationEvent] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, alpha: &ValuationEvent) -> bool {
        self.members.binary_search(alpha).is_ok()
    }

    pub fn upper_closed(&self) -> Option<bool> {
        self.upper_closed
    }

    pub fn universe(&self) -> usize {
        self.universe
    }
}

/// Closes `{τ(A) | A ∈ EA}` under the operations of `mode`.
pub fn complete(space: &CoeventSpace, mode: CompletionMode) -> Result<Completion> {
    if space.len() > COMPLETION_CAP {
        return Err(Error::CapExceeded {
            what: "completion (coevent space size)",
            size: space.len(),
            cap: COMPLETION_CAP,
            flag: "(none: hard limit)",
        });
    }
    let mut generators: Vec<ValuationEvent> = space
        .algebra()
        .events()
        .map(|e| tau_bits(space, e.bits()))
        .collect();
    generators.sort();
    generators.dedup();

    let mut members = match mode {
        CompletionMode::Upper => {
            let meets = close_under(generators, |x, y| x.intersection(y));
            close_under(meets, |x, y| x.union(y))
        }
        CompletionMode::Boolean => boolean_closure(space.len(), &generators),
    };
    members.sort();

    let principals = space
        .principal_events()
        .ok()
        .map(|es| es.into_iter().map(Event::bits).collect::<Vec<_>>());
    let upper_closed = principals
        .as_ref()
        .map(|p| members.iter().all(|m| is_up_set(p, m)));
    Ok(Completion {
        mode,
        universe: space.len(),
        members,
        upper_closed,
        principals,
    })
}

fn close_under(
    start: Vec<ValuationEvent>,
    op: impl Fn(&ValuationEvent, &ValuationEvent) -> ValuationEvent,
) -> Vec<ValuationEvent> {
    let mut seen: HashSet<ValuationEvent> = start.iter().cloned().collect();
    let mut list = start;
    let mut i = 0;
    while i < list.len() {
        for j in 0..i {
            let c = op(&list[i], &list[j]);
            if seen.insert(c.clone()) {
                list.push(c);
            }
        }
        i += 1;
    }
    list
}

/// The Boolean algebra generated by `generators` is the set of unions of
/// its atoms: the classes of coevents no generator separates.
fn boolean_closure(universe: usize, generators: &[ValuationEvent]) -> Vec<ValuationEvent> {
    let mut atoms: BTreeMap<Vec<bool>, Vec<usize>> = BTreeMap::new();
    for v in 0..universe {
        let signature = generators.iter().map(|g| g.contains(v)).collect();
        atoms.entry(signature).or_default().push(v);
    }
    let atoms: Vec<Vec<usize>> = atoms.into_values().collect();
    (0u64..1 << atoms.len())
        .map(|pick| {
            ValuationEvent::from_indices(
                universe,
                atoms
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| pick & (1 << i) != 0)
                    .flat_map(|(_, a)| a.iter().copied()),
            )
        })
        .collect()
}

/// `ψ ≥ φ` in the dual order iff `ψ* ⊆ φ*`.
fn dual_geq(principals: &[u32], psi: usize, phi: usize) -> bool {
    principals[psi] & !principals[phi] == 0
}

fn is_up_set(principals: &[u32], alpha: &ValuationEvent) -> bool {
    alpha.indices().all(|phi| {
        (0..principals.len())
            .filter(|&psi| dual_geq(principals, psi, phi))
            .all(|psi| alpha.contains(psi))
    })
}

/// `α → β` in the upper completion: the coevents all of whose successors
/// in the dual order lie in `β` whenever they lie in `α`.
pub fn heyting_implication(
    completion: &Completion,
    alpha: &ValuationEvent,
    beta: &ValuationEvent,
) -> Result<ValuationEvent> {
    if completion.mode != CompletionMode::Upper {
        return Err(Error::NotUpperMode);
    }
    let principals = completion.principals.as_ref().ok_or(Error::NoDualOrder)?;
    if !completion.contains(alpha) || !completion.contains(beta) {
        return Err(Error::NotInCompletion);
    }
    let result = ValuationEvent::from_indices(
        completion.universe,
        (0..completion.universe).filter(|&phi| {
            (0..completion.universe)
                .filter(|&psi| dual_geq(principals, psi, phi))
                .all(|psi| !alpha.contains(psi) || beta.contains(psi))
        }),
    );
    if !completion.contains(&result) {
        return Err(Error::Inconsistent(
            "heyting implication fell outside the completion".into(),
        ));
    }
    Ok(result)
}

/// `α → β` by definition: the largest member `γ` of the completion with
/// `γ ∩ α ⊆ β`, found by scanning every member.
pub fn heyting_implication_by_scan(
    completion: &Completion,
    alpha: &ValuationEvent,
    beta: &ValuationEvent,
) -> Result<ValuationEvent> {
    if completion.mode != CompletionMode::Upper {
        return Err(Error::NotUpperMode);
    }
    let candidates: Vec<&ValuationEvent> = completion
        .members
        .iter()
        .filter(|g| g.intersection(alpha).is_subset(beta))
        .collect();
    let largest = candidates
        .iter()
        .find(|g| candidates.iter().all(|h| h.is_subset(g)))
        .ok_or_else(|| Error::Inconsistent("no largest residual in the completion".into()))?;
    Ok((*largest).clone())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeytingAudit {
    /// Human-readable descriptions of failed laws, empty when all hold.
    pub failures: Vec<String>,
    /// Members without a complement inside the completion.
    pub uncomplemented: Vec<ValuationEvent>,
}

impl HeytingAudit {
    pub fn laws_hold(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn is_boolean(&self) -> bool {
        self.uncomplemented.is_empty()
    }
}

/// Checks residuation (`γ ⊆ α → β ⇔ γ ∩ α ⊆ β`) and distributivity over
/// every triple of members of an upper completion, and lists members that
/// lack a complement.
pub fn audit_heyting(completion: &Completion) -> Result<HeytingAudit> {
    let members = completion.members();
    let mut implications = Vec::with_capacity(members.len() * members.len());
    for a in members {
        for b in members {
            let fast = heyting_implication(completion, a, b)?;
            implications.push(fast);
        }
    }
    let imp = |i: usize, j: usize| &implications[i * members.len() + j];
    let mut failures = Vec::new();
    'outer: for (i, a) in members.iter().enumerate() {
        for (j, b) in members.iter().enumerate() {
            for c in members {
                if c.is_subset(imp(i, j)) != c.intersection(a).is_subset(b) {
                    failures.push(format!("residuation fails at members #{i}, #{j}"));
                    continue 'outer;
                }
                if a.intersection(&b.union(c)) != a.intersection(b).union(&a.intersection(c)) {
                    failures.push(format!("distributivity fails at members #{i}, #{j}"));
                    continue 'outer;
                }
            }
        }
    }
    let top = ValuationEvent::full(completion.universe);
    let bottom = ValuationEvent::empty(completion.universe);
    let uncomplemented = members
        .iter()
        .filter(|a| {
            !members
                .iter()
                .any(|b| a.intersection(b) == bottom && a.union(b) == top)
        })
        .cloned()
        .collect();
    Ok(HeytingAudit {
        failures,
        uncomplemented,
    })
}

/// The six truth values compared by [`and_or_audit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AuditRecord {
    pub phi_a: bool,
    pub phi_b: bool,
    pub phi_meet: bool,
    pub phi_join: bool,
    /// `f_φ(τ(A) ∩ τ(B))`.
    pub f_meet: bool,
    /// `f_φ(τ(A) ∪ τ(B))`.
    pub f_join: bool,
}

impl AuditRecord {
    /// `φ(A) ∧ φ(B) = f_φ(τ(A) ∩ τ(B)) = φ(A ∩ B)`.
    pub fn and_identity(&self) -> bool {
        (self.phi_a && self.phi_b) == self.f_meet && self.f_meet == self.phi_meet
    }

    /// `φ(A) ∨ φ(B) = f_φ(τ(A) ∪ τ(B))` differs from `φ(A ∪ B)`.
    pub fn or_discrepancy(&self) -> bool {
        self.f_join != self.phi_join
    }
}

pub fn and_or_audit(space: &CoeventSpace, phi: &Coevent, a: Event, b: Event) -> Result<AuditRecord> {
    let f = TruthFunction::new(space, phi)?;
    let ta = tau(space, a)?;
    let tb = tau(space, b)?;
    Ok(AuditRecord {
        phi_a: phi.evaluate(a)?,
        phi_b: phi.evaluate(b)?,
        phi_meet: phi.evaluate(a.meet(b)?)?,
        phi_join: phi.evaluate(a.join(b)?)?,
        f_meet: f.evaluate(&ta.intersection(&tb)),
        f_join: f.evaluate(&ta.union(&tb)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coevent::{CoeventOptions, Provenance};
    use crate::eventalg::EventAlgebra;

    fn mce(labels: &[&str]) -> CoeventSpace {
        let ea = EventAlgebra::from_labels(labels.iter().copied()).unwrap();
        CoeventSpace::multiplicative(&ea, &CoeventOptions::default())
    }

    #[test]
    fn tau_over_mce() {
        let v = mce(&["h", "t"]);
        let ea = v.algebra().clone();
        let h = ea.parse_event("h").unwrap();
        assert_eq!(render_valuation(&v, &tau(&v, h).unwrap()), "[{h}*]");
        assert_eq!(tau(&v, ea.full()).unwrap().len(), 3);
        assert!(tau(&v, ea.empty()).unwrap().is_empty());
        let other = EventAlgebra::from_labels(["x"]).unwrap();
        assert_eq!(tau(&v, other.full()), Err(Error::MismatchedSpace));
    }

    #[test]
    fn order_report_for_mce_pair() {
        let v = mce(&["h", "t"]);
        let r = order_report(&v).unwrap();
        assert!(r.tau_injective);
        assert!(r.pushforward_well_defined);
        assert_eq!(r.orders_agree, Some(true));
        assert!(r.meet_agree);
        assert!(!r.join_agree);
        let ea = v.algebra();
        let (a, b) = r.witnesses.join[0];
        assert_eq!((ea.render(a), ea.render(b)), ("{h}".into(), "{t}".into()));
        assert!(!r.join_closed);
    }

    #[test]
    fn order_report_for_zero_coevent() {
        let ea = EventAlgebra::from_labels(["h", "t"]).unwrap();
        let v = CoeventSpace::user_supplied(&ea, vec![Coevent::zero(&ea)]).unwrap();
        let r = order_report(&v).unwrap();
        assert!(!r.tau_injective);
        assert_eq!(r.witnesses.injectivity.len(), 6);
        // A single image point: the pushed-forward relation is trivially a
        // partial order.
        assert!(r.pushforward_well_defined);
        assert_eq!(r.orders_agree, Some(true));
    }

    #[test]
    fn ill_defined_pushforward_is_detected() {
        // φ true only on {h}: τ({h}) = {φ}, every other image is ∅. Then
        // ∅ ⊆ {h} relates ∅ to {φ} and {h} ⊆ Ω relates {φ} back to ∅.
        let ea = EventAlgebra::from_labels(["h", "t"]).unwrap();
        let phi = Coevent::from_predicate(&ea, |e| e.bits() == 0b01);
        let v = CoeventSpace::new(&ea, Provenance::UserSupplied, vec![phi]).unwrap();
        let r = order_report(&v).unwrap();
        assert!(!r.pushforward_well_defined);
        assert!(!r.witnesses.pushforward.is_empty());
        assert_eq!(r.orders_agree, None);
        assert!(!r.notes.is_empty());
    }

    #[test]
    fn completions_for_mce_pair() {
        let v = mce(&["h", "t"]);
        let ea = v.algebra().clone();
        let u = complete(&v, CompletionMode::Upper).unwrap();
        let th = tau(&v, ea.parse_event("h").unwrap()).unwrap();
        let tt = tau(&v, ea.parse_event("t").unwrap()).unwrap();
        let joined = th.union(&tt);
        assert!(u.contains(&joined));
        let image: Vec<ValuationEvent> = ea.events().map(|e| tau(&v, e).unwrap()).collect();
        assert!(!image.contains(&joined));
        assert_eq!(u.upper_closed(), Some(true));

        let c = complete(&v, CompletionMode::Boolean).unwrap();
        assert!(u.members().iter().all(|m| c.contains(m)));
        assert_eq!(c.len(), 8);
    }

    #[test]
    fn degenerate_completion() {
        let v = mce(&["x"]);
        let u = complete(&v, CompletionMode::Upper).unwrap();
        let c = complete(&v, CompletionMode::Boolean).unwrap();
        assert_eq!(u.len(), 2);
        assert_eq!(u.members(), c.members());
    }

    #[test]
    fn heyting_implication_examples() {
        let v = mce(&["h", "t"]);
        let ea = v.algebra().clone();
        let u = complete(&v, CompletionMode::Upper).unwrap();
        let th = tau(&v, ea.parse_event("h").unwrap()).unwrap();
        let top = tau(&v, ea.full()).unwrap();
        let empty = ValuationEvent::empty(v.len());
        assert_eq!(heyting_implication(&u, &th, &top).unwrap(), top);
        let self_imp = heyting_implication(&u, &th, &th).unwrap();
        assert!(th.is_subset(&self_imp));

        // Largest up-set disjoint from {h}*: only {t}* qualifies, since any
        // up-set containing Ω* contains everything.
        let neg = heyting_implication(&u, &th, &empty).unwrap();
        assert_eq!(render_valuation(&v, &neg), "[{t}*]");
        assert_eq!(heyting_implication_by_scan(&u, &th, &empty).unwrap(), neg);

        let c = complete(&v, CompletionMode::Boolean).unwrap();
        assert_eq!(heyting_implication(&c, &th, &empty), Err(Error::NotUpperMode));
        let stray = ValuationEvent::from_indices(v.len(), [2]);
        assert_eq!(
            heyting_implication(&u, &stray, &empty),
            Err(Error::NotInCompletion)
        );
    }

    #[test]
    fn heyting_audit_pair() {
        let v = mce(&["h", "t"]);
        let u = complete(&v, CompletionMode::Upper).unwrap();
        let audit = audit_heyting(&u).unwrap();
        assert!(audit.laws_hold());
        assert!(!audit.is_boolean());
    }

    #[test]
    fn audits() {
        let v = mce(&["h", "t"]);
        let ea = v.algebra().clone();
        let opts = CoeventOptions::default();
        let h = ea.parse_event("h").unwrap();
        let t = ea.parse_event("t").unwrap();
        let top = Coevent::dual_of_event(&ea, ea.full(), &opts).unwrap();
        let rec = and_or_audit(&v, &top, h, t).unwrap();
        assert!(rec.and_identity());
        assert!(!rec.f_join && rec.phi_join);
        assert!(rec.or_discrepancy());

        let hstar = Coevent::dual_of_event(&ea, h, &opts).unwrap();
        let rec = and_or_audit(&v, &hstar, h, ea.full()).unwrap();
        assert!(rec.phi_a && rec.phi_b && rec.phi_meet);
        assert!(rec.and_identity());

        let zero = Coevent::zero(&ea);
        assert_eq!(and_or_audit(&v, &zero, h, t), Err(Error::NotInSpace));
    }

    #[test]
    fn truth_function_is_membership() {
        let v = mce(&["h", "t"]);
        let f = TruthFunction::new(&v, &v.members()[1]).unwrap();
        assert!(f.evaluate(&ValuationEvent::from_indices(3, [1])));
        assert!(!f.evaluate(&ValuationEvent::from_indices(3, [0, 2])));
    }
}
