//! Varying sets over a finite poset (presheaves on `P`), sieves, the
//! subobject classifier, characteristic maps, and their instance over the
//! multiplicative coevents ordered by `A* ≤ B* ⇔ A ⊇ B`.
//!
//! Poset elements are indices; sets of elements are `u64` masks, so a poset
//! has at most 64 elements.

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;

use crate::beables::tau;
use crate::coevent::{Coevent, CoeventOptions, CoeventSpace};
use crate::error::{Error, Result};
use crate::eventalg::{Event, EventAlgebra};
use crate::measure::Measure;

pub const POSET_CAP: usize = 64;
/// Largest poset for which sieve sets are enumerated.
pub const SIEVE_CAP: usize = 16;
/// Largest sample space for the multiplicative-coevent instance.
pub const MCE_INSTANCE_CAP: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePoset {
    labels: Vec<String>,
    leq: Vec<bool>,
    up: Vec<u64>,
}

impl FinitePoset {
    /// Builds a poset from `leq(p, q)`, checking reflexivity, antisymmetry
    /// and transitivity.
    pub fn from_fn(labels: Vec<String>, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let n = labels.len();
        if n > POSET_CAP {
            return Err(Error::CapExceeded {
                what: "poset size",
                size: n,
                cap: POSET_CAP,
                flag: "(none: hard limit)",
            });
        }
        let table: Vec<bool> = (0..n * n).map(|i| leq(i / n, i % n)).collect();
        let at = |p: usize, q: usize| table[p * n + q];
        for p in 0..n {
            if !at(p, p) {
                return Err(Error::NotAPartialOrder(format!("{} ≰ itself", labels[p])));
            }
            for q in 0..n {
                if p != q && at(p, q) && at(q, p) {
                    return Err(Error::NotAPartialOrder(format!(
                        "{} and {} are mutually below each other",
                        labels[p], labels[q]
                    )));
                }
                for r in 0..n {
                    if at(p, q) && at(q, r) && !at(p, r) {
                        return Err(Error::NotAPartialOrder(format!(
                            "{} ≤ {} ≤ {} but {} ≰ {}",
                            labels[p], labels[q], labels[r], labels[p], labels[r]
                        )));
                    }
                }
            }
        }
        let up = (0..n)
            .map(|p| (0..n).filter(|&q| at(p, q)).fold(0u64, |m, q| m | 1 << q))
            .collect();
        Ok(Self {
            labels,
            leq: table,
            up,
        })
    }

    pub fn new(labels: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self> {
        let n = labels.len();
        if leq.len() != n || leq.iter().any(|row| row.len() != n) {
            return Err(Error::NotAPartialOrder(format!("relation must be {n}×{n}")));
        }
        Self::from_fn(labels, |p, q| leq[p][q])
    }

    pub fn one_point(label: &str) -> Self {
        Self::from_fn(vec![label.to_string()], |_, _| true).expect("trivial order")
    }

    /// `labels[0] < labels[1] < …`.
    pub fn chain<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        Self::from_fn(labels.into_iter().map(Into::into).collect(), |p, q| p <= q)
    }

    pub fn antichain<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        Self::from_fn(labels.into_iter().map(Into::into).collect(), |p, q| p == q)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn leq(&self, p: usize, q: usize) -> bool {
        self.leq[p * self.len() + q]
    }

    /// `↑(p)` as a mask.
    pub fn up_set(&self, p: usize) -> u64 {
        self.up[p]
    }

    pub fn is_antichain(&self) -> bool {
        (0..self.len()).all(|p| self.up[p] == 1 << p)
    }

    pub fn is_upward_closed(&self, members: u64) -> bool {
        (0..self.len())
            .filter(|&r| members & (1 << r) != 0)
            .all(|r| self.up[r] & !members == 0)
    }

    pub fn render_set(&self, members: u64) -> String {
        let parts: Vec<&str> = (0..self.len())
            .filter(|&i| members & (1 << i) != 0)
            .map(|i| self.labels[i].as_str())
            .collect();
        format!("[{}]", parts.join(", "))
    }

    fn check_sieve_cap(&self, cap: usize) -> Result<()> {
        if self.len() > cap {
            return Err(Error::CapExceeded {
                what: "sieve enumeration (poset size)",
                size: self.len(),
                cap,
                flag: "--sieve-cap",
            });
        }
        Ok(())
    }
}

/// An upward-closed set of elements above an anchor `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sieve {
    anchor: usize,
    members: u64,
}

impl Sieve {
    pub fn new(poset: &FinitePoset, anchor: usize, members: u64) -> Result<Self> {
        if anchor >= poset.len() {
            return Err(Error::Validation(format!("no poset element #{anchor}")));
        }
        if members & !poset.up_set(anchor) != 0 {
            return Err(Error::Validation(format!(
                "{} contains elements not above {}",
                poset.render_set(members),
                poset.labels[anchor]
            )));
        }
        if !poset.is_upward_closed(members) {
            return Err(Error::Validation(format!(
                "{} is not upward closed",
                poset.render_set(members)
            )));
        }
        Ok(Self { anchor, members })
    }

    pub fn anchor(&self) -> usize {
        self.anchor
    }

    pub fn members(&self) -> u64 {
        self.members
    }

    pub fn is_empty(&self) -> bool {
        self.members == 0
    }

    pub fn contains(&self, element: usize) -> bool {
        self.members & (1 << element) != 0
    }

    /// Renders as `@anchor: [members]`.
    pub fn render(&self, poset: &FinitePoset) -> String {
        format!(
            "@{}: {}",
            poset.labels[self.anchor],
            poset.render_set(self.members)
        )
    }
}

/// Every sieve at `p`: the upper sets contained in `↑(p)`.
pub fn sieves_at(poset: &FinitePoset, p: usize) -> Result<Vec<Sieve>> {
    sieves_at_with_cap(poset, p, SIEVE_CAP)
}

pub fn sieves_at_with_cap(poset: &FinitePoset, p: usize, cap: usize) -> Result<Vec<Sieve>> {
    poset.check_sieve_cap(cap.min(POSET_CAP))?;
    let up = poset.up_set(p);
    let mut out: Vec<Sieve> = Vec::new();
    let mut sub = up;
    loop {
        if poset.is_upward_closed(sub) {
            out.push(Sieve {
                anchor: p,
                members: sub,
            });
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & up;
    }
    out.sort();
    Ok(out)
}

/// Greatest sieve at the anchor: all of `↑(p)`.
pub fn top_sieve(poset: &FinitePoset, p: usize) -> Sieve {
    Sieve {
        anchor: p,
        members: poset.up_set(p),
    }
}

pub fn sieve_meet(a: &Sieve, b: &Sieve) -> Result<Sieve> {
    same_anchor(a, b)?;
    Ok(Sieve {
        anchor: a.anchor,
        members: a.members & b.members,
    })
}

pub fn sieve_join(a: &Sieve, b: &Sieve) -> Result<Sieve> {
    same_anchor(a, b)?;
    Ok(Sieve {
        anchor: a.anchor,
        members: a.members | b.members,
    })
}

/// `a ⇒ b`: elements `q ≥ p` such that every `r ≥ q` in `a` is in `b`.
pub fn sieve_implies(poset: &FinitePoset, a: &Sieve, b: &Sieve) -> Result<Sieve> {
    same_anchor(a, b)?;
    let up = poset.up_set(a.anchor);
    let members = (0..poset.len())
        .filter(|&q| up & (1 << q) != 0)
        .filter(|&q| poset.up_set(q) & a.members & !b.members == 0)
        .fold(0u64, |m, q| m | 1 << q);
    Ok(Sieve {
        anchor: a.anchor,
        members,
    })
}

fn same_anchor(a: &Sieve, b: &Sieve) -> Result<()> {
    if a.anchor == b.anchor {
        Ok(())
    } else {
        Err(Error::Validation(
            "sieves at different anchors cannot be combined".into(),
        ))
    }
}

/// A presheaf on a finite poset: a set per element and, for each `p ≤ q`, a
/// map `X(p) → X(q)` given as fiber indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VaryingSet<T> {
    base: FinitePoset,
    fibers: Vec<Vec<T>>,
    transitions: BTreeMap<(usize, usize), Vec<usize>>,
}

impl<T> VaryingSet<T> {
    /// Checks that a map exists for every comparable pair, `X_pp` is the
    /// identity and `X_pr = X_qr ∘ X_pq` whenever `p ≤ q ≤ r`.
    pub fn new(
        base: FinitePoset,
        fibers: Vec<Vec<T>>,
        transitions: BTreeMap<(usize, usize), Vec<usize>>,
    ) -> Result<Self> {
        let n = base.len();
        if fibers.len() != n {
            return Err(Error::InvalidVaryingSet(format!(
                "{} fibers for {n} poset elements",
                fibers.len()
            )));
        }
        let name = |p: usize| base.labels[p].as_str();
        for p in 0..n {
            for q in 0..n {
                let map = transitions.get(&(p, q));
                if !base.leq(p, q) {
                    if map.is_some() {
                        return Err(Error::InvalidVaryingSet(format!(
                            "map given for incomparable pair ({}, {})",
                            name(p),
                            name(q)
                        )));
                    }
                    continue;
                }
                let map = map.ok_or_else(|| {
                    Error::InvalidVaryingSet(format!("missing map ({}, {})", name(p), name(q)))
                })?;
                if map.len() != fibers[p].len() || map.iter().any(|&y| y >= fibers[q].len()) {
                    return Err(Error::InvalidVaryingSet(format!(
                        "map ({}, {}) is not a function between the fibers",
                        name(p),
                        name(q)
                    )));
                }
                if p == q && map.iter().enumerate().any(|(x, &y)| x != y) {
                    return Err(Error::InvalidVaryingSet(format!(
                        "map ({0}, {0}) is not the identity",
                        name(p)
                    )));
                }
            }
        }
        for p in 0..n {
            for q in (0..n).filter(|&q| base.leq(p, q)) {
                for r in (0..n).filter(|&r| base.leq(q, r)) {
                    let (pq, qr, pr) = (&transitions[&(p, q)], &transitions[&(q, r)], &transitions[&(p, r)]);
                    if pq.iter().zip(pr).any(|(&y, &z)| qr[y] != z) {
                        return Err(Error::InvalidVaryingSet(format!(
                            "composition fails along {} ≤ {} ≤ {}",
                            name(p),
                            name(q),
                            name(r)
                        )));
                    }
                }
            }
        }
        Ok(Self {
            base,
            fibers,
            transitions,
        })
    }

    pub fn base(&self) -> &FinitePoset {
        &self.base
    }

    pub fn fiber(&self, p: usize) -> &[T] {
        &self.fibers[p]
    }

    pub fn transition(&self, p: usize, q: usize) -> Option<&[usize]> {
        self.transitions.get(&(p, q)).map(Vec::as_slice)
    }
}

/// `ΔQ`: the set `Q` at every element, with identity transitions.
pub fn constant_varying_set<T: Clone>(base: &FinitePoset, ambient: Vec<T>) -> Result<VaryingSet<T>> {
    let n = base.len();
    let identity: Vec<usize> = (0..ambient.len()).collect();
    let transitions = (0..n)
        .flat_map(|p| (0..n).map(move |q| (p, q)))
        .filter(|&(p, q)| base.leq(p, q))
        .map(|pq| (pq, identity.clone()))
        .collect();
    VaryingSet::new(base.clone(), vec![ambient; n], transitions)
}

/// The subobject classifier: sieves at each element with
/// `Ω_pq(S) = S ∩ ↑(q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubobjectClassifier {
    base: FinitePoset,
    fibers: Vec<Vec<Sieve>>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FunctorialityReport {
    /// Elements `p` where `Ω_pp` moves some sieve.
    pub identity_failures: Vec<usize>,
    /// Chains `p ≤ q ≤ r` where `Ω_qr ∘ Ω_pq ≠ Ω_pr`.
    pub composition_failures: Vec<(usize, usize, usize)>,
    /// Transitions that leave the sieves at the target.
    pub codomain_failures: Vec<(usize, usize)>,
}

impl FunctorialityReport {
    pub fn holds(&self) -> bool {
        self.identity_failures.is_empty()
            && self.composition_failures.is_empty()
            && self.codomain_failures.is_empty()
    }
}

impl SubobjectClassifier {
    pub fn new(base: &FinitePoset) -> Result<Self> {
        Self::with_cap(base, SIEVE_CAP)
    }

    pub fn with_cap(base: &FinitePoset, cap: usize) -> Result<Self> {
        let fibers = (0..base.len())
            .map(|p| sieves_at_with_cap(base, p, cap))
            .collect::<Result<_>>()?;
        Ok(Self {
            base: base.clone(),
            fibers,
        })
    }

    pub fn base(&self) -> &FinitePoset {
        &self.base
    }

    pub fn fiber(&self, p: usize) -> &[Sieve] {
        &self.fibers[p]
    }

    /// `Ω_pq`.
    pub fn restrict(&self, sieve: &Sieve, q: usize) -> Result<Sieve> {
        if !self.base.leq(sieve.anchor, q) {
            return Err(Error::NotAbove(
                self.base.labels[q].clone(),
                self.base.labels[sieve.anchor].clone(),
            ));
        }
        Ok(Sieve {
            anchor: q,
            members: sieve.members & self.base.up_set(q),
        })
    }

    pub fn check_functoriality(&self) -> FunctorialityReport {
        let n = self.base.len();
        let mut report = FunctorialityReport::default();
        for p in 0..n {
            if self.fibers[p]
                .iter()
                .any(|s| self.restrict(s, p).ok() != Some(*s))
            {
                report.identity_failures.push(p);
            }
            for q in (0..n).filter(|&q| self.base.leq(p, q)) {
                if self.fibers[p].iter().any(|s| {
                    self.restrict(s, q)
                        .map_or(true, |t| self.fibers[q].binary_search(&t).is_err())
                }) {
                    report.codomain_failures.push((p, q));
                }
                for r in (0..n).filter(|&r| self.base.leq(q, r)) {
                    let fails = self.fibers[p].iter().any(|s| {
                        let two_step = self.restrict(s, q).and_then(|t| self.restrict(&t, r));
                        two_step.ok() != self.restrict(s, r).ok()
                    });
                    if fails {
                        report.composition_failures.push((p, q, r));
                    }
                }
            }
        }
        report
    }

    /// The classifier as a [`VaryingSet`], which re-validates the presheaf
    /// axioms through the generic checker.
    pub fn to_varying_set(&self) -> Result<VaryingSet<Sieve>> {
        let n = self.base.len();
        let mut transitions = BTreeMap::new();
        for p in 0..n {
            for q in (0..n).filter(|&q| self.base.leq(p, q)) {
                let map = self.fibers[p]
                    .iter()
                    .map(|s| {
                        let t = self.restrict(s, q)?;
                        self.fibers[q].binary_search(&t).map_err(|_| {
                            Error::Inconsistent("restricted sieve missing from target fiber".into())
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                transitions.insert((p, q), map);
            }
        }
        VaryingSet::new(self.base.clone(), self.fibers.clone(), transitions)
    }
}

/// A candidate subobject of a constant varying set `ΔQ`: a subset of `Q` at
/// each element. It is a subobject when `p ≤ q` implies
/// `selection(p) ⊆ selection(q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubobjectOfConstant<T> {
    base: FinitePoset,
    ambient: Vec<T>,
    selection: Vec<FixedBitSet>,
    check: SubobjectCheck,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubobjectCheck {
    pub holds: bool,
    /// Pairs `p ≤ q` where monotonicity fails.
    pub witnesses: Vec<(usize, usize)>,
}

impl<T> SubobjectOfConstant<T> {
    pub fn new(base: FinitePoset, ambient: Vec<T>, selection: Vec<Vec<usize>>) -> Result<Self> {
        if selection.len() != base.len() {
            return Err(Error::Validation(format!(
                "{} selections for {} poset elements",
                selection.len(),
                base.len()
            )));
        }
        let selection = selection
            .into_iter()
            .map(|picked| {
                let mut set = FixedBitSet::with_capacity(ambient.len());
                for x in picked {
                    if x >= ambient.len() {
                        return Err(Error::Validation(format!(
                            "selected index {x} outside the ambient set"
                        )));
                    }
                    set.insert(x);
                }
                Ok(set)
            })
            .collect::<Result<Vec<_>>>()?;
        let check = monotonicity(&base, &selection);
        Ok(Self {
            base,
            ambient,
            selection,
            check,
        })
    }

    pub fn base(&self) -> &FinitePoset {
        &self.base
    }

    pub fn ambient(&self) -> &[T] {
        &self.ambient
    }

    pub fn selected(&self, p: usize, x: usize) -> bool {
        self.selection[p].contains(x)
    }

    pub fn selection(&self, p: usize) -> impl Iterator<Item = &T> + '_ {
        self.selection[p].ones().map(move |x| &self.ambient[x])
    }

    pub fn is_subobject(&self) -> SubobjectCheck {
        self.check.clone()
    }

    /// `χ_p(x) = {q ≥ p | x ∈ selection(q)}`.
    pub fn characteristic_map(&self, p: usize, x: usize) -> Result<Sieve> {
        if let Some(&(a, b)) = self.check.witnesses.first() {
            return Err(Error::NotASubobject(
                self.base.labels[a].clone(),
                self.base.labels[b].clone(),
            ));
        }
        if p >= self.base.len() || x >= self.ambient.len() {
            return Err(Error::Validation("element or point out of range".into()));
        }
        Ok(self.chi_unchecked(p, x))
    }

    fn chi_unchecked(&self, p: usize, x: usize) -> Sieve {
        let members = (0..self.base.len())
            .filter(|&q| self.base.leq(p, q) && self.selection[q].contains(x))
            .fold(0u64, |m, q| m | 1 << q);
        Sieve {
            anchor: p,
            members,
        }
    }
}

fn monotonicity(base: &FinitePoset, selection: &[FixedBitSet]) -> SubobjectCheck {
    let n = base.len();
    let witnesses: Vec<(usize, usize)> = (0..n)
        .flat_map(|p| (0..n).map(move |q| (p, q)))
        .filter(|&(p, q)| p != q && base.leq(p, q) && !selection[p].is_subset(&selection[q]))
        .collect();
    SubobjectCheck {
        holds: witnesses.is_empty(),
        witnesses,
    }
}

/// The poset of a coevent space under `A* ≤ B* ⇔ A ⊇ B`, labelled by the
/// coevent renderings.
pub fn dual_order_poset(space: &CoeventSpace) -> Result<FinitePoset> {
    let principals: Vec<u32> = space
        .principal_events()?
        .into_iter()
        .map(Event::bits)
        .collect();
    let labels = space.members().iter().map(Coevent::render).collect();
    FinitePoset::from_fn(labels, |p, q| principals[q] & !principals[p] == 0)
}

/// The topos instance over the multiplicative coevents: base poset `MCE`,
/// `vM = ΔEA`, and `vsupp(φ) = supp(φ)`.
#[derive(Debug, Clone)]
pub struct MceInstance {
    space: CoeventSpace,
    poset: FinitePoset,
    vm: VaryingSet<Event>,
    vsupp: SubobjectOfConstant<Event>,
}

impl MceInstance {
    pub fn build(algebra: &EventAlgebra, options: &CoeventOptions) -> Result<Self> {
        if algebra.n() > MCE_INSTANCE_CAP {
            return Err(Error::CapExceeded {
                what: "multiplicative-coevent topos instance (histories)",
                size: algebra.n(),
                cap: MCE_INSTANCE_CAP,
                flag: "(none: hard limit)",
            });
        }
        let space = CoeventSpace::multiplicative(algebra, options);
        let poset = dual_order_poset(&space)?;
        let events: Vec<Event> = algebra.events().collect();
        let vm = constant_varying_set(&poset, events.clone())?;
        let selection = space
            .members()
            .iter()
            .map(|c| c.support().masks().iter().map(|&b| b as usize).collect())
            .collect();
        let vsupp = SubobjectOfConstant::new(poset.clone(), events, selection)?;
        Ok(Self {
            space,
            poset,
            vm,
            vsupp,
        })
    }

    pub fn space(&self) -> &CoeventSpace {
        &self.space
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn vm(&self) -> &VaryingSet<Event> {
        &self.vm
    }

    pub fn vsupp(&self) -> &SubobjectOfConstant<Event> {
        &self.vsupp
    }

    pub fn position(&self, phi: &Coevent) -> Result<usize> {
        if phi.algebra().key() != self.space.algebra().key() {
            return Err(Error::MismatchedSpace);
        }
        self.space.index_of(phi).ok_or(Error::NotInSpace)
    }

    /// `{ψ ≥ φ | A ∈ supp(ψ)}`.
    pub fn chi_direct(&self, phi: &Coevent, a: Event) -> Result<Sieve> {
        let p = self.position(phi)?;
        self.space.algebra().check(a)?;
        self.vsupp.characteristic_map(p, a.bits() as usize)
    }

    /// `τ(A ∧ φ*)`, read as a sieve at `φ`.
    pub fn chi_via_tau(&self, phi: &Coevent, a: Event) -> Result<Sieve> {
        let p = self.position(phi)?;
        let image = tau(&self.space, a.meet(phi.dual()?)?)?;
        let members = image.indices().fold(0u64, |m, i| m | 1 << i);
        Sieve::new(&self.poset, p, members)
    }

    /// `χ^vsupp_φ(A)`, computed both ways; the two must coincide.
    pub fn chi_vsupp(&self, phi: &Coevent, a: Event) -> Result<Sieve> {
        let direct = self.chi_direct(phi, a)?;
        let via_tau = self.chi_via_tau(phi, a)?;
        if direct != via_tau {
            return Err(Error::Inconsistent(format!(
                "chi routes disagree: {} vs {}",
                direct.render(&self.poset),
                via_tau.render(&self.poset)
            )));
        }
        Ok(direct)
    }
}

/// The multiplicative scheme as a base poset. Its members are pairwise
/// incomparable, so every local truth-value set is `{∅, {φ}}`.
#[derive(Debug, Clone)]
pub struct SchemeInstance {
    pub space: CoeventSpace,
    pub poset: FinitePoset,
    pub antichain: bool,
    pub note: String,
}

pub fn build_scheme_instance(m: &Measure) -> Result<SchemeInstance> {
    let space = CoeventSpace::scheme(m);
    let poset = dual_order_poset(&space)?;
    let antichain = poset.is_antichain();
    let note = if antichain {
        format!(
            "scheme of {} coevent(s) is an anti-chain: the classifier is a copy of Z2 at every point",
            space.len()
        )
    } else {
        "scheme is not an anti-chain".to_string()
    };
    Ok(SchemeInstance {
        space,
        poset,
        antichain,
        note,
    })
}
