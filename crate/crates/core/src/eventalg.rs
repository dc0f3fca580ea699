//! Finite sample spaces and their full event algebras.
//!
//! Events are characteristic masks over the fixed label order of a
//! [`SampleSpace`]: bit `i` is set when the `i`-th history belongs to the
//! event. Canonical ordering of event lists is ascending mask value.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest sample space whose full event algebra may be enumerated.
pub const MAX_HISTORIES: usize = 16;

/// Identity of a sample space, derived from its ordered labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpaceKey(u64);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleSpace {
    labels: Vec<String>,
    key: SpaceKey,
}

impl SampleSpace {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvalidSampleSpace(
                "a sample space needs at least one history".into(),
            ));
        }
        if labels.len() > MAX_HISTORIES {
            return Err(Error::CapExceeded {
                what: "sample space size",
                size: labels.len(),
                cap: MAX_HISTORIES,
                flag: "(none: hard limit)",
            });
        }
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty() || label.contains([',', '{', '}', '*', '[', ']']) {
                return Err(Error::InvalidSampleSpace(format!(
                    "label `{label}` is empty or contains a reserved character"
                )));
            }
            if labels[..i].contains(label) {
                return Err(Error::InvalidSampleSpace(format!(
                    "duplicate history label `{label}`"
                )));
            }
        }
        let mut hasher = DefaultHasher::new();
        labels.hash(&mut hasher);
        let key = SpaceKey(hasher.finish());
        Ok(Self { labels, key })
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

    pub fn key(&self) -> SpaceKey {
        self.key
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// A subset of a sample space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Event {
    space: SpaceKey,
    width: u8,
    bits: u32,
}

impl Event {
    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn width(self) -> usize {
        self.width as usize
    }

    pub fn space(self) -> SpaceKey {
        self.space
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn contains_history(self, index: usize) -> bool {
        index < self.width() && self.bits & (1 << index) != 0
    }

    fn full_mask(self) -> u32 {
        full_mask(self.width())
    }

    /// Rebuilds an event of the same space from a raw mask.
    pub(crate) fn with_bits(self, bits: u32) -> Event {
        debug_assert_eq!(bits & !self.full_mask(), 0);
        Event { bits, ..self }
    }

    fn check(self, other: Event) -> Result<()> {
        if self.space == other.space {
            Ok(())
        } else {
            Err(Error::MismatchedSpace)
        }
    }

    pub fn meet(self, other: Event) -> Result<Event> {
        self.check(other)?;
        Ok(self.with_bits(self.bits & other.bits))
    }

    pub fn join(self, other: Event) -> Result<Event> {
        self.check(other)?;
        Ok(self.with_bits(self.bits | other.bits))
    }

    pub fn complement(self) -> Event {
        self.with_bits(!self.bits & self.full_mask())
    }

    /// Symmetric difference, the addition of the Z2-algebra on events.
    pub fn sym_diff(self, other: Event) -> Result<Event> {
        self.check(other)?;
        Ok(self.with_bits(self.bits ^ other.bits))
    }

    /// Boolean implication `¬A ∨ B`.
    pub fn implies(self, other: Event) -> Result<Event> {
        self.check(other)?;
        Ok(self.with_bits((!self.bits | other.bits) & self.full_mask()))
    }

    pub fn is_subset(self, other: Event) -> Result<bool> {
        self.check(other)?;
        Ok(self.bits & !other.bits == 0)
    }

    pub fn is_disjoint(self, other: Event) -> Result<bool> {
        self.check(other)?;
        Ok(self.bits & other.bits == 0)
    }
}

pub(crate) fn full_mask(width: usize) -> u32 {
    if width >= 32 {
        u32::MAX
    } else {
        (1u32 << width) - 1
    }
}

/// The full powerset of a sample space, ordered by inclusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventAlgebra {
    space: Arc<SampleSpace>,
}

impl EventAlgebra {
    pub fn new(space: SampleSpace) -> Self {
        Self {
            space: Arc::new(space),
        }
    }

    pub fn from_labels<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        SampleSpace::new(labels).map(Self::new)
    }

    pub fn space(&self) -> &SampleSpace {
        &self.space
    }

    pub fn key(&self) -> SpaceKey {
        self.space.key()
    }

    /// Number of histories.
    pub fn n(&self) -> usize {
        self.space.len()
    }

    /// Number of events, `2^n`.
    pub fn size(&self) -> usize {
        1usize << self.n()
    }

    pub fn full_mask(&self) -> u32 {
        full_mask(self.n())
    }

    pub fn event(&self, bits: u32) -> Result<Event> {
        if bits & !self.full_mask() != 0 {
            return Err(Error::Validation(format!(
                "mask {bits:#b} has bits outside a sample space of {} histories",
                self.n()
            )));
        }
        Ok(self.event_unchecked(bits))
    }

    pub(crate) fn event_unchecked(&self, bits: u32) -> Event {
        Event {
            space: self.key(),
            width: self.n() as u8,
            bits,
        }
    }

    pub fn empty(&self) -> Event {
        self.event_unchecked(0)
    }

    pub fn full(&self) -> Event {
        self.event_unchecked(self.full_mask())
    }

    pub fn singleton(&self, label: &str) -> Result<Event> {
        let i = self
            .space
            .index_of(label)
            .ok_or_else(|| Error::UnknownHistory(label.to_string()))?;
        Ok(self.event_unchecked(1 << i))
    }

    pub fn event_from_labels<I, S>(&self, labels: I) -> Result<Event>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut bits = 0u32;
        for label in labels {
            let label = label.as_ref();
            let i = self
                .space
                .index_of(label)
                .ok_or_else(|| Error::UnknownHistory(label.to_string()))?;
            bits |= 1 << i;
        }
        Ok(self.event_unchecked(bits))
    }

    /// Parses a comma-separated label list; the empty string (or `{}`) is the
    /// empty event. Surrounding braces are accepted.
    pub fn parse_event(&self, text: &str) -> Result<Event> {
        let text = text.trim();
        let inner = text
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .unwrap_or(text);
        if inner.trim().is_empty() {
            return Ok(self.empty());
        }
        self.event_from_labels(inner.split(',').map(str::trim))
    }

    pub fn contains(&self, event: Event) -> bool {
        event.space == self.key()
    }

    pub(crate) fn check(&self, event: Event) -> Result<()> {
        if self.contains(event) {
            Ok(())
        } else {
            Err(Error::MismatchedSpace)
        }
    }

    /// All events in canonical order.
    pub fn events(&self) -> impl Iterator<Item = Event> + '_ {
        (0..=self.full_mask()).map(move |b| self.event_unchecked(b))
    }

    pub fn up_closure(&self, a: Event) -> Result<EventFamily> {
        self.check(a)?;
        let rest = self.full_mask() & !a.bits;
        let mut members: Vec<u32> = submasks(rest).map(|s| s | a.bits).collect();
        members.sort_unstable();
        Ok(EventFamily::from_sorted(self, members))
    }

    pub fn down_closure(&self, a: Event) -> Result<EventFamily> {
        self.check(a)?;
        let mut members: Vec<u32> = submasks(a.bits).collect();
        members.sort_unstable();
        Ok(EventFamily::from_sorted(self, members))
    }

    /// Returns the principal element when `family` is a (nonempty) filter:
    /// upward closed and closed under intersection.
    pub fn is_filter(&self, family: &EventFamily) -> Result<Option<Event>> {
        if family.space != self.key() {
            return Err(Error::MismatchedSpace);
        }
        Ok(filter_principal(self.n(), &family.members).map(|b| self.event_unchecked(b)))
    }

    pub fn render(&self, event: Event) -> String {
        render_mask(self.space.labels(), event.bits)
    }

    pub fn render_family(&self, family: &EventFamily) -> String {
        let parts: Vec<String> = family
            .members
            .iter()
            .map(|&b| render_mask(self.space.labels(), b))
            .collect();
        format!("[{}]", parts.join(", "))
    }
}

/// Principal element of a sorted, deduplicated family of masks, if the
/// family is a nonempty filter in the powerset of `width` histories.
pub(crate) fn filter_principal(width: usize, sorted_members: &[u32]) -> Option<u32> {
    let first = *sorted_members.first()?;
    let principal = sorted_members.iter().fold(full_mask(width), |acc, &m| acc & m);
    // Intersection closure puts the meet of everything in the family; upward
    // closure then forces exactly the supersets of that meet.
    if principal != first && !sorted_members.contains(&principal) {
        return None;
    }
    let expected = 1usize << (width - principal.count_ones() as usize);
    if sorted_members.len() != expected {
        return None;
    }
    sorted_members
        .iter()
        .all(|&m| m & principal == principal)
        .then_some(principal)
}

pub(crate) fn render_mask(labels: &[String], bits: u32) -> String {
    let parts: Vec<&str> = labels
        .iter()
        .enumerate()
        .filter(|(i, _)| bits & (1 << i) != 0)
        .map(|(_, l)| l.as_str())
        .collect();
    format!("{{{}}}", parts.join(","))
}

/// Every submask of `mask`, in descending numeric order.
pub(crate) fn submasks(mask: u32) -> impl Iterator<Item = u32> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let current = next?;
        next = if current == 0 {
            None
        } else {
            Some((current - 1) & mask)
        };
        Some(current)
    })
}

/// A deduplicated set of events over one sample space, in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EventFamily {
    space: SpaceKey,
    width: u8,
    members: Vec<u32>,
}

impl EventFamily {
    pub fn new<I>(algebra: &EventAlgebra, events: I) -> Result<Self>
    where
        I: IntoIterator<Item = Event>,
    {
        let mut members = Vec::new();
        for e in events {
            algebra.check(e)?;
            members.push(e.bits);
        }
        members.sort_unstable();
        members.dedup();
        Ok(Self::from_sorted(algebra, members))
    }

    pub fn empty(algebra: &EventAlgebra) -> Self {
        Self::from_sorted(algebra, Vec::new())
    }

    pub(crate) fn from_sorted(algebra: &EventAlgebra, members: Vec<u32>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Self {
            space: algebra.key(),
            width: algebra.n() as u8,
            members,
        }
    }

    pub fn space(&self) -> SpaceKey {
        self.space
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn masks(&self) -> &[u32] {
        &self.members
    }

    pub fn contains(&self, event: Event) -> bool {
        event.space == self.space && self.members.binary_search(&event.bits).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Event> + '_ {
        self.members.iter().map(move |&bits| Event {
            space: self.space,
            width: self.width,
            bits,
        })
    }

    pub fn union_of_members(&self) -> u32 {
        self.members.iter().fold(0, |acc, &m| acc | m)
    }
}

impl fmt::Display for SpaceKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x}", self.0)
    }
}
