//! Exact-valued measures on an event algebra.
//!
//! A [`Measure`] is a total table of rationals indexed by event mask. It can
//! be checked against the Kolmogorov sum rule (classical) or the level-2 sum
//! rule (quantum), derived from a decoherence functional, and restricted to
//! the subalgebra generated by a coarse graining.

use crate::error::{Error, Result};
use crate::eventalg::{submasks, Event, EventAlgebra, EventFamily};
pub use crate::rational::{GaussianRational, Rational};

/// Largest sample space for which the level-2 sum rule is checked triple by
/// triple (about `4^n / 6` triples).
pub const LEVEL2_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Measure {
    algebra: EventAlgebra,
    values: Vec<Rational>,
}

impl Measure {
    /// Builds a measure and enforces the structural invariants:
    /// nonnegativity, `m(Ω) = 1` and `m(∅) = 0`.
    pub fn new(algebra: EventAlgebra, values: Vec<Rational>) -> Result<Self> {
        let m = Self::unvalidated(algebra, values)?;
        if let Some(v) = m.structural_violations().into_iter().next() {
            return Err(Error::InvalidMeasure(v.describe(&m.algebra)));
        }
        Ok(m)
    }

    /// Builds a total set function without checking nonnegativity or
    /// normalization; the validators report those instead.
    pub fn unvalidated(algebra: EventAlgebra, values: Vec<Rational>) -> Result<Self> {
        if values.len() != algebra.size() {
            return Err(Error::InvalidMeasure(format!(
                "expected {} event values, got {}",
                algebra.size(),
                values.len()
            )));
        }
        Ok(Self { algebra, values })
    }

    /// A measure given event by event. Every event must appear exactly once.
    pub fn from_table<I>(algebra: EventAlgebra, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Event, Rational)>,
    {
        let mut values: Vec<Option<Rational>> = vec![None; algebra.size()];
        for (event, value) in entries {
            algebra.check(event)?;
            let slot = &mut values[event.bits() as usize];
            if slot.is_some() {
                return Err(Error::InvalidMeasure(format!(
                    "event {} given twice",
                    algebra.render(event)
                )));
            }
            *slot = Some(value);
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(bits, v)| {
                v.ok_or_else(|| {
                    Error::InvalidMeasure(format!(
                        "no value for event {}",
                        algebra.render(algebra.event_unchecked(bits as u32))
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(algebra, values)
    }

    /// The additive (classical) measure with the given weight on each
    /// history, in label order.
    pub fn from_atom_weights(algebra: EventAlgebra, weights: &[Rational]) -> Result<Self> {
        if weights.len() != algebra.n() {
            return Err(Error::InvalidMeasure(format!(
                "expected {} atom weights, got {}",
                algebra.n(),
                weights.len()
            )));
        }
        let mut values = vec![Rational::zero(); algebra.size()];
        for bits in 1..algebra.size() {
            let low = bits.trailing_zeros() as usize;
            values[bits] = &values[bits & (bits - 1)] + &weights[low];
        }
        Self::new(algebra, values)
    }

    /// Point mass at the history with the given index.
    pub fn dirac(algebra: EventAlgebra, history: usize) -> Result<Self> {
        if history >= algebra.n() {
            return Err(Error::UnknownHistory(format!("#{history}")));
        }
        let weights: Vec<Rational> = (0..algebra.n())
            .map(|i| Rational::from_integer((i == history) as i64))
            .collect();
        Self::from_atom_weights(algebra, &weights)
    }

    pub fn algebra(&self) -> &EventAlgebra {
        &self.algebra
    }

    pub fn value(&self, event: Event) -> Result<&Rational> {
        self.algebra.check(event)?;
        Ok(&self.values[event.bits() as usize])
    }

    pub(crate) fn at(&self, bits: u32) -> &Rational {
        &self.values[bits as usize]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// A copy with one value replaced. The result is not revalidated.
    pub fn with_value(&self, event: Event, value: Rational) -> Result<Self> {
        self.algebra.check(event)?;
        let mut values = self.values.clone();
        values[event.bits() as usize] = value;
        Ok(Self {
            algebra: self.algebra.clone(),
            values,
        })
    }

    pub fn structural_violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (bits, v) in self.values.iter().enumerate() {
            if v.is_negative() {
                out.push(Violation::Negative {
                    event: self.algebra.event_unchecked(bits as u32),
                    value: v.clone(),
                });
            }
        }
        if !self.values[0].is_zero() {
            out.push(Violation::EmptyNotNull {
                value: self.values[0].clone(),
            });
        }
        let top = self.at(self.algebra.full_mask());
        if *top != Rational::one() {
            out.push(Violation::Normalization { value: top.clone() });
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SumRule {
    Kolmogorov,
    Level2,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Negative {
        event: Event,
        value: Rational,
    },
    Normalization {
        value: Rational,
    },
    EmptyNotNull {
        value: Rational,
    },
    /// `m(A ⊔ B) ≠ m(A) + m(B)`.
    Additivity {
        a: Event,
        b: Event,
        lhs: Rational,
        rhs: Rational,
    },
    /// `m(A⊔B⊔C) ≠ m(A⊔B) + m(B⊔C) + m(C⊔A) − m(A) − m(B) − m(C)`.
    Level2 {
        a: Event,
        b: Event,
        c: Event,
        lhs: Rational,
        rhs: Rational,
    },
}

impl Violation {
    pub fn describe(&self, algebra: &EventAlgebra) -> String {
        let r = |e: &Event| algebra.render(*e);
        match self {
            Violation::Negative { event, value } => {
                format!("negative value {value} on {}", r(event))
            }
            Violation::Normalization { value } => {
                format!("m(Ω) = {value}, expected 1")
            }
            Violation::EmptyNotNull { value } => format!("m(∅) = {value}, expected 0"),
            Violation::Additivity { a, b, lhs, rhs } => format!(
                "m({} ⊔ {}) = {lhs} but m({}) + m({}) = {rhs}",
                r(a),
                r(b),
                r(a),
                r(b)
            ),
            Violation::Level2 { a, b, c, lhs, rhs } => format!(
                "level-2 rule fails on ({}, {}, {}): {lhs} ≠ {rhs}",
                r(a),
                r(b),
                r(c)
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub rule: SumRule,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// Disjoint pairs failing additivity, in report order.
    pub fn additivity_witnesses(&self) -> impl Iterator<Item = (Event, Event)> + '_ {
        self.violations.iter().filter_map(|v| match v {
            Violation::Additivity { a, b, .. } => Some((*a, *b)),
            _ => None,
        })
    }
}

/// Checks the Kolmogorov sum rule on every unordered disjoint pair
/// `(A, B)` with `A ≤ B` by mask, plus the structural conditions.
pub fn validate_classical(m: &Measure) -> ValidationReport {
    let full = m.algebra.full_mask();
    let mut pairs = Vec::new();
    for a in 0..=full {
        for b in submasks(full & !a) {
            if b < a {
                continue;
            }
            let lhs = m.at(a | b);
            let rhs = m.at(a) + m.at(b);
            if *lhs != rhs {
                pairs.push((a, b, lhs.clone(), rhs));
            }
        }
    }
    pairs.sort_by_key(|p| (p.0, p.1));
    let mut violations = m.structural_violations();
    violations.extend(pairs.into_iter().map(|(a, b, lhs, rhs)| Violation::Additivity {
        a: m.algebra.event_unchecked(a),
        b: m.algebra.event_unchecked(b),
        lhs,
        rhs,
    }));
    ValidationReport {
        rule: SumRule::Kolmogorov,
        violations,
    }
}

/// Checks the level-2 sum rule on every unordered triple of pairwise
/// disjoint events (empty members included), plus the structural
/// conditions.
pub fn validate_quantum(m: &Measure) -> Result<ValidationReport> {
    let n = m.algebra.n();
    if n > LEVEL2_CAP {
        return Err(Error::CapExceeded {
            what: "level-2 sum rule check (histories)",
            size: n,
            cap: LEVEL2_CAP,
            flag: "(none: hard limit)",
        });
    }
    let full = m.algebra.full_mask();
    let mut triples = Vec::new();
    for c in 0..=full {
        for b in submasks(full & !c) {
            if b > c {
                continue;
            }
            for a in submasks(full & !(b | c)) {
                if a > b {
                    continue;
                }
                let lhs = m.at(a | b | c);
                let rhs = &(&(&(m.at(a | b) + m.at(b | c)) + m.at(c | a)) - m.at(a))
                    - &(m.at(b) + m.at(c));
                if *lhs != rhs {
                    triples.push((a, b, c, lhs.clone(), rhs));
                }
            }
        }
    }
    triples.sort_by_key(|t| (t.0, t.1, t.2));
    let mut violations = m.structural_violations();
    violations.extend(triples.into_iter().map(|(a, b, c, lhs, rhs)| Violation::Level2 {
        a: m.algebra.event_unchecked(a),
        b: m.algebra.event_unchecked(b),
        c: m.algebra.event_unchecked(c),
        lhs,
        rhs,
    }));
    Ok(ValidationReport {
        rule: SumRule::Level2,
        violations,
    })
}

/// A Hermitian, normalized decoherence matrix on the histories.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecoherenceSpec {
    algebra: EventAlgebra,
    matrix: Vec<Vec<GaussianRational>>,
}

impl DecoherenceSpec {
    pub fn new(algebra: EventAlgebra, matrix: Vec<Vec<GaussianRational>>) -> Result<Self> {
        let n = algebra.n();
        if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidDecoherence(format!("matrix must be {n}×{n}")));
        }
        for i in 0..n {
            for j in i..n {
                if matrix[i][j] != matrix[j][i].conj() {
                    let labels = algebra.space().labels();
                    return Err(Error::InvalidDecoherence(format!(
                        "not Hermitian at ({}, {})",
                        labels[i], labels[j]
                    )));
                }
            }
        }
        let total = matrix
            .iter()
            .flatten()
            .fold(GaussianRational::zero(), |acc, z| &acc + z);
        if total != GaussianRational::real(Rational::one()) {
            return Err(Error::InvalidDecoherence(format!(
                "entries sum to {total}, expected 1"
            )));
        }
        Ok(Self { algebra, matrix })
    }

    /// The rank-one functional `D(γ, γ') = a_γ · conj(a_γ') / |Σ a|²`.
    pub fn from_amplitudes(algebra: EventAlgebra, amplitudes: &[GaussianRational]) -> Result<Self> {
        if amplitudes.len() != algebra.n() {
            return Err(Error::InvalidDecoherence(format!(
                "expected {} amplitudes, got {}",
                algebra.n(),
                amplitudes.len()
            )));
        }
        let total = amplitudes
            .iter()
            .fold(GaussianRational::zero(), |acc, z| &acc + z);
        let scale = total.norm_sqr().recip().ok_or_else(|| {
            Error::InvalidDecoherence("amplitudes sum to zero; cannot normalize".into())
        })?;
        let matrix = amplitudes
            .iter()
            .map(|x| {
                amplitudes
                    .iter()
                    .map(|y| (x * &y.conj()).scale(&scale))
                    .collect()
            })
            .collect();
        Self::new(algebra, matrix)
    }

    pub fn algebra(&self) -> &EventAlgebra {
        &self.algebra
    }

    pub fn entry(&self, i: usize, j: usize) -> &GaussianRational {
        &self.matrix[i][j]
    }
}

/// `m(A) = Σ_{γ, γ' ∈ A} D(γ, γ')`, returned together with its level-2
/// validation report.
pub fn measure_from_decoherence(d: &DecoherenceSpec) -> Result<(Measure, ValidationReport)> {
    let m = decoherence_set_function(d)?;
    let report = validate_quantum(&m)?;
    Ok((m, report))
}

/// `m(A) = Σ_{γ, γ' ∈ A} D(γ, γ')` without running the sum-rule check.
pub fn decoherence_set_function(d: &DecoherenceSpec) -> Result<Measure> {
    let algebra = d.algebra.clone();
    let mut sums = vec![GaussianRational::zero(); algebra.size()];
    for bits in 1..algebra.size() {
        let k = 31 - (bits as u32).leading_zeros() as usize;
        let rest = bits & !(1 << k);
        let mut acc = &sums[rest] + &d.matrix[k][k];
        for j in (0..k).filter(|j| rest & (1 << j) != 0) {
            acc = &acc + &(&d.matrix[k][j] + &d.matrix[j][k]);
        }
        sums[bits] = acc;
    }
    let mut values = Vec::with_capacity(sums.len());
    for (bits, z) in sums.into_iter().enumerate() {
        if !z.is_real() {
            return Err(Error::NonRealDiagonal(
                algebra.render(algebra.event_unchecked(bits as u32)),
            ));
        }
        values.push(z.re);
    }
    Measure::unvalidated(algebra, values)
}

/// Events of measure exactly zero, in canonical order.
pub fn null_sets(m: &Measure) -> EventFamily {
    let members: Vec<u32> = (0..=m.algebra.full_mask())
        .filter(|&b| m.at(b).is_zero())
        .collect();
    EventFamily::from_sorted(&m.algebra, members)
}

/// Whether the null sets cover the sample space.
pub fn null_cover_exists(m: &Measure) -> bool {
    null_sets(m).union_of_members() == m.algebra.full_mask()
}

/// A partition of the sample space into nonempty blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoarseGraining {
    blocks: EventFamily,
}

impl CoarseGraining {
    pub fn new(algebra: &EventAlgebra, blocks: EventFamily) -> Result<Self> {
        if blocks.space() != algebra.key() {
            return Err(Error::MismatchedSpace);
        }
        let mut seen = 0u32;
        for &b in blocks.masks() {
            if b == 0 {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            if seen & b != 0 {
                return Err(Error::InvalidPartition("blocks overlap".into()));
            }
            seen |= b;
        }
        if seen != algebra.full_mask() {
            return Err(Error::InvalidPartition(
                "blocks do not cover the sample space".into(),
            ));
        }
        Ok(Self { blocks })
    }

    pub fn blocks(&self) -> &EventFamily {
        &self.blocks
    }

    fn union_of(&self, selection: u32) -> u32 {
        self.blocks
            .masks()
            .iter()
            .enumerate()
            .filter(|(i, _)| selection & (1 << i) != 0)
            .fold(0, |acc, (_, &b)| acc | b)
    }
}

/// A measure restricted to the subalgebra generated by a coarse graining.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoarseGrained {
    /// Unions of blocks with their values, in canonical event order.
    pub values: Vec<(Event, Rational)>,
    /// Disjoint pairs of coarse events failing additivity.
    pub violations: Vec<Violation>,
}

impl CoarseGrained {
    pub fn is_decoherent(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn coarse_grain(m: &Measure, partition: &CoarseGraining) -> Result<CoarseGrained> {
    if partition.blocks.space() != m.algebra.key() {
        return Err(Error::MismatchedSpace);
    }
    let k = partition.blocks.len();
    let all = (1u32 << k) - 1;
    let mut values: Vec<(Event, Rational)> = (0..=all)
        .map(|s| {
            let bits = partition.union_of(s);
            (m.algebra.event_unchecked(bits), m.at(bits).clone())
        })
        .collect();
    values.sort_by_key(|(e, _)| e.bits());

    let mut bad = Vec::new();
    for s in 0..=all {
        for t in submasks(all & !s) {
            let (a, b) = (partition.union_of(s), partition.union_of(t));
            if b < a {
                continue;
            }
            let lhs = m.at(a | b);
            let rhs = m.at(a) + m.at(b);
            if *lhs != rhs {
                bad.push((a, b, lhs.clone(), rhs));
            }
        }
    }
    bad.sort_by_key(|p| (p.0, p.1));
    let violations = bad
        .into_iter()
        .map(|(a, b, lhs, rhs)| Violation::Additivity {
            a: m.algebra.event_unchecked(a),
            b: m.algebra.event_unchecked(b),
            lhs,
            rhs,
        })
        .collect();
    Ok(CoarseGrained { values, violations })
}

pub fn is_decoherent(m: &Measure, partition: &CoarseGraining) -> Result<bool> {
    coarse_grain(m, partition).map(|c| c.is_decoherent())
}
