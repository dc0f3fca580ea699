//! Theory files: a sample space, exactly one measure stanza, and options.
//!
//! ```json
//! {
//!   "sample_space": ["1", "2", "3"],
//!   "measure": { "amplitudes": [1, 1, "-1"] },
//!   "options": { "include_empty_dual": false, "brute_force_cap": 3 }
//! }
//! ```
//!
//! Measure stanzas:
//!
//! * `event_table`: object from event (comma-joined labels, `""` for the
//!   empty event) to value; every event must be listed.
//! * `atom_weights`: object from history label to weight (classical).
//! * `amplitudes`: array of one amplitude per history, in label order.
//! * `decoherence`: `n × n` array of arrays.
//!
//! Numbers are integers or strings `"p/q"`; complex entries are objects
//! `{"re": "p/q", "im": "p/q"}`. Floating-point literals are rejected.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use serde_json::Value;

use crate::coevent::{CoeventOptions, BRUTE_FORCE_DEFAULT_CAP, BRUTE_FORCE_MAX_CAP};
use crate::error::{Error, Result};
use crate::eventalg::EventAlgebra;
use crate::measure::{decoherence_set_function, DecoherenceSpec, GaussianRational, Measure, Rational};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TheoryFile {
    sample_space: Vec<String>,
    measure: MeasureStanza,
    #[serde(default)]
    options: OptionsStanza,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum MeasureStanza {
    EventTable(BTreeMap<String, Value>),
    AtomWeights(BTreeMap<String, Value>),
    Amplitudes(Vec<Value>),
    Decoherence(Vec<Vec<Value>>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct OptionsStanza {
    #[serde(default)]
    include_empty_dual: bool,
    #[serde(default = "default_cap")]
    brute_force_cap: usize,
}

impl Default for OptionsStanza {
    fn default() -> Self {
        Self {
            include_empty_dual: false,
            brute_force_cap: BRUTE_FORCE_DEFAULT_CAP,
        }
    }
}

fn default_cap() -> usize {
    BRUTE_FORCE_DEFAULT_CAP
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureSource {
    EventTable,
    AtomWeights,
    Amplitudes,
    Decoherence,
}

impl MeasureSource {
    pub fn as_str(self) -> &'static str {
        match self {
            MeasureSource::EventTable => "event_table",
            MeasureSource::AtomWeights => "atom_weights",
            MeasureSource::Amplitudes => "amplitudes",
            MeasureSource::Decoherence => "decoherence",
        }
    }
}

/// A validated `(Ω, EA, μ)` with its coevent options.
#[derive(Debug, Clone)]
pub struct HistoriesTheory {
    pub algebra: EventAlgebra,
    pub measure: Measure,
    pub source: MeasureSource,
    pub options: CoeventOptions,
}

pub fn load(path: impl AsRef<Path>) -> Result<HistoriesTheory> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        line: 0,
        column: 0,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    parse_theory(&text)
}

pub fn parse_theory(text: &str) -> Result<HistoriesTheory> {
    let file: TheoryFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let invalid = |e: Error| match e {
        Error::Validation(_) | Error::CapExceeded { .. } => e,
        other => Error::Validation(other.to_string()),
    };
    let algebra = EventAlgebra::from_labels(file.sample_space.clone()).map_err(invalid)?;
    if file.options.brute_force_cap > BRUTE_FORCE_MAX_CAP {
        return Err(Error::Validation(format!(
            "brute_force_cap {} exceeds the maximum {BRUTE_FORCE_MAX_CAP}",
            file.options.brute_force_cap
        )));
    }
    let options = CoeventOptions {
        include_empty_dual: file.options.include_empty_dual,
        brute_force_cap: file.options.brute_force_cap,
    };
    let (measure, source) = match file.measure {
        MeasureStanza::EventTable(table) => {
            let entries = table
                .iter()
                .map(|(k, v)| Ok((algebra.parse_event(k)?, real(v, &format!("event_table[{k:?}]"))?)))
                .collect::<Result<Vec<_>>>()
                .map_err(invalid)?;
            let m = Measure::from_table(algebra.clone(), entries).map_err(invalid)?;
            (m, MeasureSource::EventTable)
        }
        MeasureStanza::AtomWeights(weights) => {
            for label in weights.keys() {
                if algebra.space().index_of(label).is_none() {
                    return Err(Error::Validation(format!("unknown history `{label}` in atom_weights")));
                }
            }
            let w = algebra
                .space()
                .labels()
                .iter()
                .map(|label| {
                    let v = weights.get(label).ok_or_else(|| {
                        Error::Validation(format!("atom_weights has no weight for `{label}`"))
                    })?;
                    real(v, &format!("atom_weights[{label:?}]"))
                })
                .collect::<Result<Vec<_>>>()?;
            if w.iter().any(Rational::is_negative) {
                return Err(Error::Validation("atom weights must be nonnegative".into()));
            }
            let m = Measure::from_atom_weights(algebra.clone(), &w).map_err(invalid)?;
            (m, MeasureSource::AtomWeights)
        }
        MeasureStanza::Amplitudes(amps) => {
            let amps = amps
                .iter()
                .enumerate()
                .map(|(i, v)| complex(v, &format!("amplitudes[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            let d = DecoherenceSpec::from_amplitudes(algebra.clone(), &amps).map_err(invalid)?;
            (decohered(d)?, MeasureSource::Amplitudes)
        }
        MeasureStanza::Decoherence(rows) => {
            let matrix = rows
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    row.iter()
                        .enumerate()
                        .map(|(j, v)| complex(v, &format!("decoherence[{i}][{j}]")))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let d = DecoherenceSpec::new(algebra.clone(), matrix).map_err(invalid)?;
            (decohered(d)?, MeasureSource::Decoherence)
        }
    };
    Ok(HistoriesTheory {
        algebra,
        measure,
        source,
        options,
    })
}

fn decohered(d: DecoherenceSpec) -> Result<Measure> {
    let m = decoherence_set_function(&d).map_err(|e| Error::Validation(e.to_string()))?;
    Measure::new(d.algebra().clone(), m.values().to_vec()).map_err(|e| Error::Validation(e.to_string()))
}

fn real(value: &Value, at: &str) -> Result<Rational> {
    match value {
        Value::Number(n) => n
            .as_i64()
            .map(Rational::from_integer)
            .ok_or_else(|| Error::Validation(format!("{at}: only integer or \"p/q\" literals are exact"))),
        Value::String(s) => s
            .parse()
            .map_err(|_| Error::Validation(format!("{at}: `{s}` is not a rational literal"))),
        _ => Err(Error::Validation(format!("{at}: expected a rational"))),
    }
}

fn complex(value: &Value, at: &str) -> Result<GaussianRational> {
    match value {
        Value::Object(map) => {
            if let Some(k) = map.keys().find(|k| *k != "re" && *k != "im") {
                return Err(Error::Validation(format!("{at}: unexpected key `{k}`")));
            }
            let part = |k: &str| {
                map.get(k)
                    .map_or(Ok(Rational::zero()), |v| real(v, &format!("{at}.{k}")))
            };
            Ok(GaussianRational::new(part("re")?, part("im")?))
        }
        other => real(other, at).map(GaussianRational::real),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const COIN: &str = r#"{"sample_space": ["h", "t"], "measure": {"atom_weights": {"h": "1/2", "t": "1/2"}}}"#;
    const T2: &str = r#"{"sample_space": ["1", "2", "3"], "measure": {"amplitudes": [1, 1, "-1"]}}"#;

    #[test]
    fn loads_fixtures() {
        let coin = parse_theory(COIN).unwrap();
        assert_eq!(coin.source, MeasureSource::AtomWeights);
        assert_eq!(coin.options, CoeventOptions::default());

        let t2 = parse_theory(T2).unwrap();
        let e13 = t2.algebra.parse_event("1,3").unwrap();
        assert!(t2.measure.value(e13).unwrap().is_zero());
    }

    #[test]
    fn other_stanzas() {
        let table = r#"{"sample_space": ["h", "t"],
            "measure": {"event_table": {"": 0, "h": "1/3", "t": "2/3", "h,t": 1}},
            "options": {"include_empty_dual": true, "brute_force_cap": 4}}"#;
        let th = parse_theory(table).unwrap();
        assert!(th.options.include_empty_dual);
        assert_eq!(th.options.brute_force_cap, 4);

        let deco = r#"{"sample_space": ["a", "b"], "measure": {"decoherence": [
            ["1/2", {"re": "0", "im": "1/4"}],
            [{"re": "0", "im": "-1/4"}, "1/2"]]}}"#;
        let th = parse_theory(deco).unwrap();
        assert_eq!(th.source, MeasureSource::Decoherence);

        let complex_amps = r#"{"sample_space": ["a", "b"], "measure": {"amplitudes": [{"re": 1}, {"im": 1}]}}"#;
        let th = parse_theory(complex_amps).unwrap();
        let a = th.algebra.parse_event("a").unwrap();
        assert_eq!(th.measure.value(a).unwrap().to_string(), "1/2");
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = parse_theory("{\n  \"sample_space\": [\"h\",\n}").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        let two_measures = r#"{"sample_space": ["h"], "measure": {"amplitudes": [1], "atom_weights": {"h": 1}}}"#;
        assert!(matches!(parse_theory(two_measures), Err(Error::Parse { .. })));
        let unknown = r#"{"sample_space": ["h"], "measure": {"amplitudes": [1]}, "extra": 1}"#;
        assert!(matches!(parse_theory(unknown), Err(Error::Parse { .. })));
    }

    #[test]
    fn validation_errors() {
        let cases = [
            r#"{"sample_space": ["h", "h"], "measure": {"amplitudes": [1, 0]}}"#,
            r#"{"sample_space": ["h", "t"], "measure": {"atom_weights": {"h": "1/2"}}}"#,
            r#"{"sample_space": ["h", "t"], "measure": {"atom_weights": {"h": 0.5, "t": "1/2"}}}"#,
            r#"{"sample_space": ["h", "t"], "measure": {"atom_weights": {"h": "2", "t": "-1"}}}"#,
            r#"{"sample_space": ["h", "t"], "measure": {"event_table": {"": 0, "h": "1/2", "h,t": 1}}}"#,
            r#"{"sample_space": ["h", "t"], "measure": {"event_table": {"": 0, "h": "1/2", "t": "1/2", "h,t": 2}}}"#,
            r#"{"sample_space": ["h", "t"], "measure": {"amplitudes": [1, -1]}}"#,
            r#"{"sample_space": ["h", "t"], "measure": {"amplitudes": [1]}}"#,
            r#"{"sample_space": ["h"], "measure": {"amplitudes": [1]}, "options": {"brute_force_cap": 5}}"#,
        ];
        for case in cases {
            assert!(
                matches!(parse_theory(case), Err(Error::Validation(_))),
                "{case} should fail validation, got {:?}",
                parse_theory(case).map(|_| ())
            );
        }
    }
}
