//! Command dispatch over a loaded theory, and the reports it produces.
//!
//! A [`Report`] is plain data: every section holds rendered events and
//! coevents, so the machine form (pretty JSON) parses back into the same
//! value. The text form is derived from the same data.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::beables::{
    and_or_audit, audit_heyting, complete, order_report, render_valuation, tau, CompletionMode,
};
use crate::coevent::{Coevent, CoeventOptions, CoeventSpace, BRUTE_FORCE_MAX_CAP};
use crate::error::{Error, Result};
use crate::eventalg::{Event, EventAlgebra};
use crate::measure::{null_cover_exists, null_sets, validate_classical, validate_quantum, ValidationReport, Violation};
use crate::theory::HistoriesTheory;
use crate::topos::{build_scheme_instance, MceInstance, SubobjectClassifier, SIEVE_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Validate,
    Coevents,
    Tau,
    Orders,
    Complete,
    Audit,
    Topos,
    Report,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Coevents => "coevents",
            Command::Tau => "tau",
            Command::Orders => "orders",
            Command::Complete => "complete",
            Command::Audit => "audit",
            Command::Topos => "topos",
            Command::Report => "report",
        }
    }
}

/// Which coevent space a command works over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetChoice {
    All,
    Classical,
    ClassicalPreclusive,
    Multiplicative,
    Scheme,
}

impl SetChoice {
    pub fn as_str(self) -> &'static str {
        match self {
            SetChoice::All => "all",
            SetChoice::Classical => "classical",
            SetChoice::ClassicalPreclusive => "classical-preclusive",
            SetChoice::Multiplicative => "multiplicative",
            SetChoice::Scheme => "scheme",
        }
    }

    fn build(self, theory: &HistoriesTheory, options: &CoeventOptions) -> Result<CoeventSpace> {
        Ok(match self {
            SetChoice::All => CoeventSpace::all_maps(&theory.algebra, options)?,
            SetChoice::Classical => CoeventSpace::classical(&theory.algebra),
            SetChoice::ClassicalPreclusive => CoeventSpace::classical_preclusive(&theory.measure),
            SetChoice::Multiplicative => CoeventSpace::multiplicative(&theory.algebra, options),
            SetChoice::Scheme => CoeventSpace::scheme(&theory.measure),
        })
    }
}

/// Command-line style flags. `None` means "use the default for the command
/// or the value from the theory file".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOptions {
    pub set: Option<SetChoice>,
    pub event: Option<String>,
    pub other: Option<String>,
    pub context: Option<String>,
    pub mode: CompletionMode,
    pub include_empty_dual: Option<bool>,
    pub cap: Option<usize>,
    pub sieve_cap: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            set: None,
            event: None,
            other: None,
            context: None,
            mode: CompletionMode::Upper,
            include_empty_dual: None,
            cap: None,
            sieve_cap: SIEVE_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub theory: TheorySummary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validate: Option<ValidateSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coevents: Option<CoeventsSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<TauSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orders: Option<OrdersSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complete: Option<CompleteSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub audit: Option<AuditSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub topos: Option<ToposSection>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheorySummary {
    pub sample_space: Vec<String>,
    pub measure_source: String,
    pub include_empty_dual: bool,
    pub brute_force_cap: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventValue {
    pub event: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationEntry {
    pub kind: String,
    pub events: Vec<String>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleCheck {
    pub rule: String,
    pub pass: bool,
    pub violations: Vec<ViolationEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidateSection {
    pub values: Vec<EventValue>,
    pub classical: RuleCheck,
    pub quantum: RuleCheck,
    pub null_sets: Vec<String>,
    pub null_cover: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeventSet {
    pub set: String,
    pub count: usize,
    pub members: Vec<String>,
    pub classical: usize,
    pub multiplicative: usize,
    pub preclusive: usize,
    /// `None` when the dual order is undefined on the set.
    pub antichain: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeventsSection {
    pub sets: Vec<CoeventSet>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauEntry {
    pub event: String,
    pub image: String,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauSection {
    pub set: String,
    pub space_size: usize,
    pub entries: Vec<TauEntry>,
}

pub type Pair = (String, String);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrdersSection {
    pub set: String,
    pub space_size: usize,
    pub tau_injective: bool,
    pub pushforward_well_defined: bool,
    pub orders_agree: Option<bool>,
    pub meet_agree: bool,
    pub join_agree: bool,
    pub join_closed: bool,
    pub injectivity_witnesses: Vec<Pair>,
    pub pushforward_witnesses: Vec<Pair>,
    pub order_witnesses: Vec<Pair>,
    pub meet_witnesses: Vec<Pair>,
    pub join_witnesses: Vec<Pair>,
    pub join_escape_witnesses: Vec<Pair>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompleteSection {
    pub set: String,
    pub mode: String,
    pub space_size: usize,
    pub count: usize,
    pub members: Vec<String>,
    pub upper_closed: Option<bool>,
    /// Heyting laws over all members; only for the upper mode.
    pub heyting_laws_hold: Option<bool>,
    pub heyting_failures: Vec<String>,
    pub boolean: bool,
    pub uncomplemented: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditRow {
    pub phi: String,
    pub a: String,
    pub b: String,
    pub phi_a: bool,
    pub phi_b: bool,
    pub phi_meet: bool,
    pub phi_join: bool,
    pub f_meet: bool,
    pub f_join: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditSection {
    pub set: String,
    pub checked: usize,
    pub and_identity_holds: bool,
    pub or_discrepancy_count: usize,
    /// Every row for a single pair; otherwise only the failing rows.
    pub rows: Vec<AuditRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChiEntry {
    pub context: String,
    pub event: String,
    pub sieve: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToposSection {
    pub base: Vec<String>,
    /// Strict comparabilities `p < q` of the dual order.
    pub order: Vec<Pair>,
    pub vm_fiber_size: usize,
    pub vsupp_is_subobject: bool,
    pub vsupp_witnesses: Vec<Pair>,
    pub sieve_counts: Vec<(String, usize)>,
    pub classifier_functorial: bool,
    pub classifier_failures: Vec<String>,
    pub chi: Vec<ChiEntry>,
    pub scheme_members: Vec<String>,
    pub scheme_antichain: bool,
    pub scheme_note: String,
}

pub fn run(command: Command, theory: &HistoriesTheory, opts: &RunOptions) -> Result<Report> {
    let options = coevent_options(theory, opts)?;
    let mut report = Report {
        command: command.as_str().to_string(),
        theory: TheorySummary {
            sample_space: theory.algebra.space().labels().to_vec(),
            measure_source: theory.source.as_str().to_string(),
            include_empty_dual: options.include_empty_dual,
            brute_force_cap: options.brute_force_cap,
        },
        validate: None,
        coevents: None,
        tau: None,
        orders: None,
        complete: None,
        audit: None,
        topos: None,
    };
    let all = command == Command::Report;
    if all || command == Command::Validate {
        report.validate = Some(validate_section(theory)?);
    }
    if all || command == Command::Coevents {
        report.coevents = Some(coevents_section(theory, &options, opts.set)?);
    }
    if all || command == Command::Tau {
        report.tau = Some(tau_section(theory, &options, opts)?);
    }
    if all || command == Command::Orders {
        report.orders = Some(orders_section(theory, &options, opts)?);
    }
    if all || command == Command::Complete {
        report.complete = Some(complete_section(theory, &options, opts)?);
    }
    if all || command == Command::Audit {
        report.audit = Some(audit_section(theory, &options, opts)?);
    }
    if all || command == Command::Topos {
        report.topos = Some(topos_section(theory, &options, opts)?);
    }
    Ok(report)
}

fn coevent_options(theory: &HistoriesTheory, opts: &RunOptions) -> Result<CoeventOptions> {
    let mut options = theory.options;
    if let Some(flag) = opts.include_empty_dual {
        options.include_empty_dual = flag;
    }
    if let Some(cap) = opts.cap {
        if cap > BRUTE_FORCE_MAX_CAP {
            return Err(Error::Usage(format!(
                "--cap {cap} exceeds the maximum {BRUTE_FORCE_MAX_CAP}"
            )));
        }
        options.brute_force_cap = cap;
    }
    Ok(options)
}

fn flag_event(algebra: &EventAlgebra, flag: &str, text: &str) -> Result<Event> {
    algebra
        .parse_event(text)
        .map_err(|e| Error::Usage(format!("{flag} {text:?}: {e}")))
}

fn violation_entry(algebra: &EventAlgebra, v: &Violation) -> ViolationEntry {
    let r = |e: &Event| algebra.render(*e);
    let (kind, events) = match v {
        Violation::Negative { event, .. } => ("negative", vec![r(event)]),
        Violation::Normalization { .. } => ("normalization", vec![r(&algebra.full())]),
        Violation::EmptyNotNull { .. } => ("empty-not-null", vec![r(&algebra.empty())]),
        Violation::Additivity { a, b, .. } => ("additivity", vec![r(a), r(b)]),
        Violation::Level2 { a, b, c, .. } => ("level-2", vec![r(a), r(b), r(c)]),
    };
    ViolationEntry {
        kind: kind.to_string(),
        events,
        detail: v.describe(algebra),
    }
}

fn rule_check(algebra: &EventAlgebra, rule: &str, report: &ValidationReport) -> RuleCheck {
    RuleCheck {
        rule: rule.to_string(),
        pass: report.is_valid(),
        violations: report
            .violations
            .iter()
            .map(|v| violation_entry(algebra, v))
            .collect(),
    }
}

fn validate_section(theory: &HistoriesTheory) -> Result<ValidateSection> {
    let algebra = &theory.algebra;
    let m = &theory.measure;
    let values = algebra
        .events()
        .map(|e| {
            Ok(EventValue {
                event: algebra.render(e),
                value: m.value(e)?.to_string(),
            })
        })
        .collect::<Result<_>>()?;
    Ok(ValidateSection {
        values,
        classical: rule_check(algebra, "kolmogorov", &validate_classical(m)),
        quantum: rule_check(algebra, "level-2", &validate_quantum(m)?),
        null_sets: null_sets(m).iter().map(|e| algebra.render(e)).collect(),
        null_cover: null_cover_exists(m),
    })
}

fn coevent_set(theory: &HistoriesTheory, space: &CoeventSpace, set: SetChoice) -> Result<CoeventSet> {
    let members = space.members();
    let mut preclusive = 0;
    for c in members {
        preclusive += c.is_preclusive(&theory.measure)? as usize;
    }
    Ok(CoeventSet {
        set: set.as_str().to_string(),
        count: members.len(),
        members: members.iter().map(Coevent::render).collect(),
        classical: members.iter().filter(|c| c.is_classical()).count(),
        multiplicative: members.iter().filter(|c| c.is_multiplicative()).count(),
        preclusive,
        antichain: space.is_antichain().ok(),
    })
}

fn coevents_section(
    theory: &HistoriesTheory,
    options: &CoeventOptions,
    set: Option<SetChoice>,
) -> Result<CoeventsSection> {
    let choices = match set {
        Some(s) => vec![s],
        None => vec![
            SetChoice::Classical,
            SetChoice::ClassicalPreclusive,
            SetChoice::Multiplicative,
            SetChoice::Scheme,
        ],
    };
    let sets = choices
        .into_iter()
        .map(|s| coevent_set(theory, &s.build(theory, options)?, s))
        .collect::<Result<_>>()?;
    Ok(CoeventsSection { sets })
}

fn chosen_space(
    theory: &HistoriesTheory,
    options: &CoeventOptions,
    opts: &RunOptions,
) -> Result<(SetChoice, CoeventSpace)> {
    let set = opts.set.unwrap_or(SetChoice::Multiplicative);
    Ok((set, set.build(theory, options)?))
}

fn tau_section(theory: &HistoriesTheory, options: &CoeventOptions, opts: &RunOptions) -> Result<TauSection> {
    let algebra = &theory.algebra;
    let (set, space) = chosen_space(theory, options, opts)?;
    let events = match &opts.event {
        Some(text) => vec![flag_event(algebra, "--event", text)?],
        None => algebra.events().collect(),
    };
    let entries = events
        .into_iter()
        .map(|a| {
            let image = tau(&space, a)?;
            Ok(TauEntry {
                event: algebra.render(a),
                image: render_valuation(&space, &image),
                size: image.len(),
            })
        })
        .collect::<Result<_>>()?;
    Ok(TauSection {
        set: set.as_str().to_string(),
        space_size: space.len(),
        entries,
    })
}

fn pairs(algebra: &EventAlgebra, list: &[(Event, Event)]) -> Vec<Pair> {
    list.iter()
        .map(|(a, b)| (algebra.render(*a), algebra.render(*b)))
        .collect()
}

fn orders_section(
    theory: &HistoriesTheory,
    options: &CoeventOptions,
    opts: &RunOptions,
) -> Result<OrdersSection> {
    let algebra = &theory.algebra;
    let (set, space) = chosen_space(theory, options, opts)?;
    let r = order_report(&space)?;
    let w = &r.witnesses;
    Ok(OrdersSection {
        set: set.as_str().to_string(),
        space_size: space.len(),
        tau_injective: r.tau_injective,
        pushforward_well_defined: r.pushforward_well_defined,
        orders_agree: r.orders_agree,
        meet_agree: r.meet_agree,
        join_agree: r.join_agree,
        join_closed: r.join_closed,
        injectivity_witnesses: pairs(algebra, &w.injectivity),
        pushforward_witnesses: pairs(algebra, &w.pushforward),
        order_witnesses: pairs(algebra, &w.orders),
        meet_witnesses: pairs(algebra, &w.meet),
        join_witnesses: pairs(algebra, &w.join),
        join_escape_witnesses: pairs(algebra, &w.join_escapes_image),
        notes: r.notes.clone(),
    })
}

fn complete_section(
    theory: &HistoriesTheory,
    options: &CoeventOptions,
    opts: &RunOptions,
) -> Result<CompleteSection> {
    let (set, space) = chosen_space(theory, options, opts)?;
    let completion = complete(&space, opts.mode)?;
    let render = |a| render_valuation(&space, a);
    let (heyting_laws_hold, heyting_failures) =
        if opts.mode == CompletionMode::Upper && completion.upper_closed().is_some() {
            let audit = audit_heyting(&completion)?;
            (Some(audit.laws_hold()), audit.failures)
        } else {
            (None, Vec::new())
        };
    let uncomplemented: Vec<String> = completion
        .members()
        .iter()
        .filter(|a| !completion.contains(&a.complement()))
        .map(render)
        .collect();
    Ok(CompleteSection {
        set: set.as_str().to_string(),
        mode: opts.mode.as_str().to_string(),
        space_size: space.len(),
        count: completion.len(),
        members: completion.members().iter().map(render).collect(),
        upper_closed: completion.upper_closed(),
        heyting_laws_hold,
        heyting_failures,
        boolean: uncomplemented.is_empty(),
        uncomplemented,
    })
}

fn audit_section(theory: &HistoriesTheory, options: &CoeventOptions, opts: &RunOptions) -> Result<AuditSection> {
    let algebra = &theory.algebra;
    let (set, space) = chosen_space(theory, options, opts)?;
    let single = match (&opts.event, &opts.other) {
        (Some(a), Some(b)) => Some((flag_event(algebra, "--event", a)?, flag_event(algebra, "--other", b)?)),
        (None, None) => None,
        _ => {
            return Err(Error::Usage(
                "audit takes both --event and --other, or neither".into(),
            ))
        }
    };
    let event_pairs: Vec<(Event, Event)> = match single {
        Some(p) => vec![p],
        None => {
            let events: Vec<Event> = algebra.events().collect();
            events
                .iter()
                .enumerate()
                .flat_map(|(i, &a)| events[i..].iter().map(move |&b| (a, b)))
                .collect()
        }
    };
    let mut checked = 0;
    let mut and_failures = 0;
    let mut or_discrepancy_count = 0;
    let mut rows = Vec::new();
    for phi in space.members() {
        for &(a, b) in &event_pairs {
            let rec = and_or_audit(&space, phi, a, b)?;
            checked += 1;
            and_failures += !rec.and_identity() as usize;
            or_discrepancy_count += rec.or_discrepancy() as usize;
            if single.is_some() || !rec.and_identity() || rec.or_discrepancy() {
                rows.push(AuditRow {
                    phi: phi.render(),
                    a: algebra.render(a),
                    b: algebra.render(b),
                    phi_a: rec.phi_a,
                    phi_b: rec.phi_b,
                    phi_meet: rec.phi_meet,
                    phi_join: rec.phi_join,
                    f_meet: rec.f_meet,
                    f_join: rec.f_join,
                });
            }
        }
    }
    Ok(AuditSection {
        set: set.as_str().to_string(),
        checked,
        and_identity_holds: and_failures == 0,
        or_discrepancy_count,
        rows,
    })
}

fn topos_section(theory: &HistoriesTheory, options: &CoeventOptions, opts: &RunOptions) -> Result<ToposSection> {
    let algebra = &theory.algebra;
    let inst = MceInstance::build(algebra, options)?;
    let poset = inst.poset();
    let labels = poset.labels();
    let n = poset.len();
    let order = (0..n)
        .flat_map(|p| (0..n).map(move |q| (p, q)))
        .filter(|&(p, q)| p != q && poset.leq(p, q))
        .map(|(p, q)| (labels[p].clone(), labels[q].clone()))
        .collect();
    let sub = inst.vsupp().is_subobject();
    let omega = SubobjectClassifier::with_cap(poset, opts.sieve_cap)?;
    let f = omega.check_functoriality();
    let mut classifier_failures: Vec<String> = Vec::new();
    classifier_failures.extend(
        f.identity_failures
            .iter()
            .map(|&p| format!("identity fails at {}", labels[p])),
    );
    classifier_failures.extend(f.codomain_failures.iter().map(|&(p, q)| {
        format!("restriction {} -> {} leaves the sieves", labels[p], labels[q])
    }));
    classifier_failures.extend(f.composition_failures.iter().map(|&(p, q, r)| {
        format!("composition fails on {} <= {} <= {}", labels[p], labels[q], labels[r])
    }));

    let contexts: Vec<&Coevent> = match &opts.context {
        Some(text) => {
            let a = flag_event(algebra, "--context", text)?;
            let phi = Coevent::dual_of_event(algebra, a, options)
                .map_err(|e| Error::Usage(format!("--context {text:?}: {e}")))?;
            let p = inst.position(&phi)?;
            vec![&inst.space().members()[p]]
        }
        None => inst.space().members().iter().collect(),
    };
    let events: Vec<Event> = match &opts.event {
        Some(text) => vec![flag_event(algebra, "--event", text)?],
        None => algebra.events().collect(),
    };
    let mut chi = Vec::new();
    for phi in contexts {
        for &a in &events {
            chi.push(ChiEntry {
                context: phi.render(),
                event: algebra.render(a),
                sieve: inst.chi_vsupp(phi, a)?.render(poset),
            });
        }
    }

    let scheme = build_scheme_instance(&theory.measure)?;
    Ok(ToposSection {
        base: labels.to_vec(),
        order,
        vm_fiber_size: algebra.size(),
        vsupp_is_subobject: sub.holds,
        vsupp_witnesses: sub
            .witnesses
            .iter()
            .map(|&(p, q)| (labels[p].clone(), labels[q].clone()))
            .collect(),
        sieve_counts: (0..n)
            .map(|p| (labels[p].clone(), omega.fiber(p).len()))
            .collect(),
        classifier_functorial: f.holds(),
        classifier_failures,
        chi,
        scheme_members: scheme.space.members().iter().map(Coevent::render).collect(),
        scheme_antichain: scheme.antichain,
        scheme_note: scheme.note,
    })
}

impl Report {
    /// Pretty JSON with a trailing newline.
    pub fn to_machine(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_machine(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let t = &self.theory;
        let _ = writeln!(
            out,
            "theory: Ω = [{}], measure from {}",
            t.sample_space.join(", "),
            t.measure_source
        );
        let _ = writeln!(
            out,
            "options: include_empty_dual={} brute_force_cap={}",
            t.include_empty_dual, t.brute_force_cap
        );
        if let Some(s) = &self.validate {
            text_validate(&mut out, s);
        }
        if let Some(s) = &self.coevents {
            text_coevents(&mut out, s);
        }
        if let Some(s) = &self.tau {
            text_tau(&mut out, s);
        }
        if let Some(s) = &self.orders {
            text_orders(&mut out, s);
        }
        if let Some(s) = &self.complete {
            text_complete(&mut out, s);
        }
        if let Some(s) = &self.audit {
            text_audit(&mut out, s);
        }
        if let Some(s) = &self.topos {
            text_topos(&mut out, s);
        }
        out
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

fn list(items: &[String]) -> String {
    format!("[{}]", items.join(", "))
}

fn pair_list(out: &mut String, label: &str, items: &[Pair]) {
    if items.is_empty() {
        return;
    }
    let _ = writeln!(out, "  {label} ({}):", items.len());
    for (a, b) in items {
        let _ = writeln!(out, "    ({a}, {b})");
    }
}

fn text_rule(out: &mut String, name: &str, r: &RuleCheck) {
    let _ = writeln!(out, "{name} ({}): {}", r.rule, verdict(r.pass));
    for v in &r.violations {
        let _ = writeln!(out, "  {}: {}", v.kind, v.detail);
    }
}

fn text_validate(out: &mut String, s: &ValidateSection) {
    let _ = writeln!(out, "\n== validate ==");
    let _ = writeln!(out, "measure:");
    for v in &s.values {
        let _ = writeln!(out, "  m({}) = {}", v.event, v.value);
    }
    text_rule(out, "classical", &s.classical);
    text_rule(out, "quantum", &s.quantum);
    let _ = writeln!(out, "null sets: {}", list(&s.null_sets));
    let _ = writeln!(out, "null cover: {}", s.null_cover);
}

fn text_coevents(out: &mut String, s: &CoeventsSection) {
    let _ = writeln!(out, "\n== coevents ==");
    for set in &s.sets {
        let _ = writeln!(out, "{} ({}): {}", set.set, set.count, list(&set.members));
        let antichain = set
            .antichain
            .map_or("n/a".to_string(), |b| b.to_string());
        let _ = writeln!(
            out,
            "  classical={} multiplicative={} preclusive={} antichain={}",
            set.classical, set.multiplicative, set.preclusive, antichain
        );
    }
}

fn text_tau(out: &mut String, s: &TauSection) {
    let _ = writeln!(out, "\n== tau ==");
    let _ = writeln!(out, "V = {} ({} coevents)", s.set, s.space_size);
    for e in &s.entries {
        let _ = writeln!(out, "  tau({}) = {}", e.event, e.image);
    }
}

fn opt_bool(b: Option<bool>) -> String {
    b.map_or("undefined".to_string(), |b| b.to_string())
}

fn text_orders(out: &mut String, s: &OrdersSection) {
    let _ = writeln!(out, "\n== orders ==");
    let _ = writeln!(out, "V = {} ({} coevents)", s.set, s.space_size);
    let _ = writeln!(out, "tau injective: {}", s.tau_injective);
    let _ = writeln!(out, "pushforward well defined: {}", s.pushforward_well_defined);
    let _ = writeln!(out, "orders agree: {}", opt_bool(s.orders_agree));
    let _ = writeln!(out, "meet agree: {}", s.meet_agree);
    let _ = writeln!(out, "join agree: {}", s.join_agree);
    let _ = writeln!(out, "image closed under union: {}", s.join_closed);
    pair_list(out, "injectivity witnesses", &s.injectivity_witnesses);
    pair_list(out, "pushforward witnesses", &s.pushforward_witnesses);
    pair_list(out, "order witnesses", &s.order_witnesses);
    pair_list(out, "meet witnesses", &s.meet_witnesses);
    pair_list(out, "join witnesses", &s.join_witnesses);
    pair_list(out, "union escapes image", &s.join_escape_witnesses);
    for note in &s.notes {
        let _ = writeln!(out, "note: {note}");
    }
}

fn text_complete(out: &mut String, s: &CompleteSection) {
    let _ = writeln!(out, "\n== complete ==");
    let _ = writeln!(
        out,
        "V = {} ({} coevents), mode {}: {} members",
        s.set, s.space_size, s.mode, s.count
    );
    for m in &s.members {
        let _ = writeln!(out, "  {m}");
    }
    let _ = writeln!(out, "upper closed: {}", opt_bool(s.upper_closed));
    if let Some(ok) = s.heyting_laws_hold {
        let _ = writeln!(out, "heyting laws: {}", verdict(ok));
    }
    for f in &s.heyting_failures {
        let _ = writeln!(out, "  {f}");
    }
    let _ = writeln!(out, "boolean: {}", s.boolean);
    if !s.uncomplemented.is_empty() {
        let _ = writeln!(out, "  without complement ({}):", s.uncomplemented.len());
        for m in &s.uncomplemented {
            let _ = writeln!(out, "    {m}");
        }
    }
}

fn bit(b: bool) -> u8 {
    b as u8
}

fn text_audit(out: &mut String, s: &AuditSection) {
    let _ = writeln!(out, "\n== audit ==");
    let _ = writeln!(out, "V = {}, {} checks", s.set, s.checked);
    let _ = writeln!(out, "AND identity: {}", verdict(s.and_identity_holds));
    let _ = writeln!(out, "OR discrepancies: {}", s.or_discrepancy_count);
    for r in &s.rows {
        let _ = writeln!(
            out,
            "  phi={} A={} B={}: phi(A)={} phi(B)={} phi(A∧B)={} phi(A∨B)={} f(τA∩τB)={} f(τA∪τB)={}",
            r.phi,
            r.a,
            r.b,
            bit(r.phi_a),
            bit(r.phi_b),
            bit(r.phi_meet),
            bit(r.phi_join),
            bit(r.f_meet),
            bit(r.f_join)
        );
    }
}

fn text_topos(out: &mut String, s: &ToposSection) {
    let _ = writeln!(out, "\n== topos ==");
    let _ = writeln!(out, "base ({}): {}", s.base.len(), list(&s.base));
    pair_list(out, "strict order", &s.order);
    let _ = writeln!(out, "vM fiber size: {}", s.vm_fiber_size);
    let _ = writeln!(out, "vsupp is a subobject: {}", s.vsupp_is_subobject);
    pair_list(out, "monotonicity failures", &s.vsupp_witnesses);
    let counts: Vec<String> = s
        .sieve_counts
        .iter()
        .map(|(p, k)| format!("{p}:{k}"))
        .collect();
    let _ = writeln!(out, "sieves per element: {}", counts.join(" "));
    let _ = writeln!(out, "classifier functorial: {}", s.classifier_functorial);
    for f in &s.classifier_failures {
        let _ = writeln!(out, "  {f}");
    }
    let _ = writeln!(out, "chi:");
    for c in &s.chi {
        let _ = writeln!(out, "  chi[{}]({}) = {}", c.context, c.event, c.sieve);
    }
    let _ = writeln!(out, "scheme: {}", list(&s.scheme_members));
    let _ = writeln!(out, "  {}", s.scheme_note);
}
