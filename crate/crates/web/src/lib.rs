//! Browser bindings: three text reports over a theory given as JSON.

use coevents::beables::CompletionMode;
use coevents::report::{run, Command, Report, RunOptions, SetChoice};
use coevents::theory::parse_theory;
use wasm_bindgen::prelude::*;

fn set_choice(name: &str) -> Result<SetChoice, String> {
    Ok(match name {
        "all" => SetChoice::All,
        "classical" => SetChoice::Classical,
        "classical-preclusive" => SetChoice::ClassicalPreclusive,
        "multiplicative" => SetChoice::Multiplicative,
        "scheme" => SetChoice::Scheme,
        other => return Err(format!("unknown coevent set `{other}`")),
    })
}

fn optional(text: &str) -> Option<String> {
    (text != "-").then(|| text.to_string())
}

fn run_all(theory: &str, commands: &[Command], opts: &RunOptions) -> Result<String, String> {
    let theory = parse_theory(theory).map_err(|e| e.to_string())?;
    let mut out = String::new();
    for (i, &command) in commands.iter().enumerate() {
        let report: Report = run(command, &theory, opts).map_err(|e| e.to_string())?;
        let text = report.to_text();
        // The two-line theory header is printed once.
        let body = if i == 0 { &text[..] } else { text.splitn(3, '\n').nth(2).unwrap_or("") };
        out.push_str(body);
    }
    Ok(out)
}

/// Sum rules, null sets and the coevent census.
pub fn analyze_text(theory: &str) -> Result<String, String> {
    run_all(theory, &[Command::Validate, Command::Coevents], &RunOptions::default())
}

/// Order comparison and completion of `τ(EA)` over the chosen coevent set.
pub fn lattice_text(theory: &str, set: &str, boolean: bool) -> Result<String, String> {
    let opts = RunOptions {
        set: Some(set_choice(set)?),
        mode: if boolean {
            CompletionMode::Boolean
        } else {
            CompletionMode::Upper
        },
        ..RunOptions::default()
    };
    run_all(theory, &[Command::Orders, Command::Complete], &opts)
}

/// `χ` of the support subobject; `"-"` leaves the context or event open.
pub fn chi_text(theory: &str, context: &str, event: &str) -> Result<String, String> {
    let opts = RunOptions {
        context: optional(context),
        event: optional(event),
        ..RunOptions::default()
    };
    run_all(theory, &[Command::Topos], &opts)
}

#[wasm_bindgen]
pub fn analyze(theory: &str) -> Result<String, JsError> {
    analyze_text(theory).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn lattice(theory: &str, set: &str, boolean: bool) -> Result<String, JsError> {
    lattice_text(theory, set, boolean).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn chi(theory: &str, context: &str, event: &str) -> Result<String, JsError> {
    chi_text(theory, context, event).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const COIN: &str = r#"{"sample_space": ["h", "t"], "measure": {"atom_weights": {"h": "1/2", "t": "1/2"}}}"#;
    const T2: &str = r#"{"sample_space": ["1", "2", "3"], "measure": {"amplitudes": [1, 1, "-1"]}}"#;

    #[test]
    fn analyze_lists_the_scheme() {
        let out = analyze_text(T2).unwrap();
        assert!(out.contains("scheme (1): [{1,2}*]"));
        assert_eq!(out.matches("theory:").count(), 1);
        assert!(out.contains("== coevents =="));
    }

    #[test]
    fn lattice_reports_join_failure() {
        let out = lattice_text(COIN, "multiplicative", false).unwrap();
        assert!(out.contains("join agree: false"));
        assert!(out.contains("({h}, {t})"));
        assert!(out.contains("boolean: false"));
        assert!(lattice_text(COIN, "multiplicative", true).unwrap().contains("boolean: true"));
        assert!(lattice_text(COIN, "nope", false).is_err());
    }

    #[test]
    fn chi_single_query() {
        let out = chi_text(T2, "1,2", "1").unwrap();
        assert!(out.contains("chi[{1,2}*]({1}) = @{1,2}*: [{1}*]"));
        assert!(chi_text(T2, "-", "-").unwrap().matches("chi[").count() == 56);
        assert!(chi_text("{", "-", "-").unwrap_err().contains("line 1"));
    }
}
