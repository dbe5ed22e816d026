//! Analysis orchestration and deterministic report rendering.
//!
//! [`analyze`] runs the test battery (and optionally the suborbit
//! reduction) on a group and assembles an [`AnalysisReport`]. The two
//! renderers produce byte-identical output for identical inputs: a
//! line-oriented text form and a JSON form. No timestamps, no timings —
//! timing belongs on stderr, behind an explicit flag, in the CLI.

use crate::binarity::{
    run_battery, verify_witness, ArityResult, BatteryOutcome, CountMethod, Test1Outcome,
    Test2Outcome, Test3Outcome, TestSelection, Verdict, VerifyOutcome, WitnessCertificate,
};
use crate::config::Budgets;
use crate::error::Result;
use crate::group::PermGroup;
use crate::reduction::{suborbit_reduction, SuborbitOutcome};
use serde_json::{json, Map, Value};

/// What [`analyze`] should run.
#[derive(Debug, Clone)]
pub struct AnalysisOptions {
    pub selection: TestSelection,
    /// Run the suborbit reduction (Test 4) with base point 0 when the
    /// battery alone is inconclusive.
    pub suborbit: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            selection: TestSelection::default(),
            suborbit: false,
        }
    }
}

/// The result of analyzing one group.
pub struct AnalysisReport {
    pub name: String,
    pub degree: usize,
    pub order: String,
    pub transitive: bool,
    pub battery: BatteryOutcome,
    pub suborbit: Option<SuborbitOutcome>,
    /// Combined verdict of battery and suborbit reduction.
    pub verdict: Verdict,
    /// `"test1"`, `"test2"`, `"test3"`, `"oracle"`, or `"test4"`.
    pub verdict_source: Option<String>,
    /// Verification status of every certificate in the report: the
    /// certificates of the battery plus (if Test 4 fired) of the suborbit
    /// battery. All must verify for a NonBinary verdict.
    pub certificates_verified: usize,
}

/// Runs the configured tests on `g` and assembles the report. Every
/// certificate produced along the way is re-verified; a verification
/// failure is an internal error.
pub fn analyze(
    g: &PermGroup,
    name: &str,
    options: &AnalysisOptions,
    budgets: &Budgets,
) -> Result<AnalysisReport> {
    let battery = run_battery(g, name, &options.selection, budgets)?;
    let mut verdict = battery.verdict;
    let mut verdict_source = battery.verdict_source.map(str::to_string);
    let mut suborbit = None;
    if options.suborbit && verdict == Verdict::Inconclusive && g.is_transitive() && g.degree() > 1
    {
        let out = suborbit_reduction(g, name, 0, budgets)?;
        if out.verdict == Verdict::NonBinary {
            verdict = Verdict::NonBinary;
            verdict_source = Some("test4".to_string());
        }
        suborbit = Some(out);
    }
    let mut certificates: Vec<&WitnessCertificate> = battery.certificates();
    if let Some(out) = &suborbit {
        if let Some(fired) = &out.firing_battery {
            certificates.extend(fired.certificates());
        }
    }
    let mut verified = 0;
    for cert in &certificates {
        match verify_witness(cert) {
            VerifyOutcome::Verified => verified += 1,
            VerifyOutcome::Rejected(reason) => {
                return Err(crate::error::Error::Unsupported(format!(
                    "internal error: produced certificate failed verification: {reason}"
                )))
            }
        }
    }
    Ok(AnalysisReport {
        name: name.to_string(),
        degree: g.degree(),
        order: g.order().to_string(),
        transitive: g.is_transitive(),
        battery,
        suborbit,
        verdict,
        verdict_source,
        certificates_verified: verified,
    })
}

pub fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::NonBinary => "NonBinary",
        Verdict::Binary => "Binary",
        Verdict::Inconclusive => "Inconclusive",
    }
}

fn method_str(m: CountMethod) -> &'static str {
    match m {
        CountMethod::CharacterSum => "character-sum",
        CountMethod::DirectOrbit => "direct-orbit",
    }
}

fn cert_note(cert: Option<&WitnessCertificate>) -> String {
    match cert {
        Some(c) => format!(
            "; witness certificate: {}, |I| = {}",
            match c.kind {
                crate::binarity::WitnessKind::Plain => "plain",
                crate::binarity::WitnessKind::Strong => "strong",
            },
            c.i.len()
        ),
        None => "; witness certificate: omitted (degree above cap)".to_string(),
    }
}

fn test1_line(outcome: &Test1Outcome) -> String {
    match outcome {
        Test1Outcome::NonBinary(e) => format!(
            "NonBinary (ell = {}, r_ell = {} > bound = {} = r2^binom, r2 = {}, method = {})",
            e.ell, e.r_ell, e.bound, e.r2, method_str(e.method)
        ),
        Test1Outcome::Inconclusive { probed } => {
            let parts: Vec<String> = probed
                .iter()
                .map(|p| format!("r_{} = {} <= {}", p.ell, p.r_ell, p.bound))
                .collect();
            format!("Inconclusive ({})", parts.join(", "))
        }
        Test1Outcome::Skipped { reason } => format!("Skipped ({reason})"),
    }
}

fn test2_line(outcome: &Test2Outcome) -> String {
    match outcome {
        Test2Outcome::NonBinary {
            closure_order,
            group_order,
            certificate,
            ..
        } => format!(
            "NonBinary (2-closure order {closure_order} > group order {group_order}{})",
            cert_note(certificate.as_ref())
        ),
        Test2Outcome::Inconclusive { closure_order } => {
            format!("Inconclusive (2-closed, order {closure_order})")
        }
        Test2Outcome::Skipped { reason } => format!("Skipped ({reason})"),
    }
}

fn test3_line(outcome: &Test3Outcome) -> String {
    match outcome {
        Test3Outcome::NonBinary(cert) => {
            format!("NonBinary (triple witness{})", cert_note(Some(cert)))
        }
        Test3Outcome::Inconclusive { triples_checked } => {
            format!("Inconclusive ({triples_checked} triples checked)")
        }
        Test3Outcome::Skipped { reason } => format!("Skipped ({reason})"),
    }
}

fn oracle_line(outcome: &ArityResult) -> String {
    match outcome {
        ArityResult::Exact(k) => format!("arity {k} (exact)"),
        ArityResult::LowerBound(k) => format!("arity >= {k} (budget hit)"),
    }
}

fn suborbit_line(out: &SuborbitOutcome) -> String {
    match &out.firing_suborbit {
        Some(lambda) => {
            let src = out
                .firing_battery
                .as_ref()
                .and_then(|b| b.verdict_source)
                .unwrap_or("?");
            format!(
                "NonBinary (suborbit of size {} is non-binary, source: {src})",
                lambda.len()
            )
        }
        None => {
            let parts: Vec<String> = out
                .per_suborbit
                .iter()
                .map(|s| {
                    format!(
                        "size {} -> {}",
                        s.size,
                        verdict_str(s.verdict)
                    )
                })
                .collect();
            format!("Inconclusive ({})", parts.join(", "))
        }
    }
}

/// Line-oriented plain-text rendering. Deterministic.
pub fn render_text(r: &AnalysisReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("group: {}\n", r.name));
    out.push_str(&format!("degree: {}\n", r.degree));
    out.push_str(&format!("order: {}\n", r.order));
    out.push_str(&format!(
        "transitive: {}\n",
        if r.transitive { "yes" } else { "no" }
    ));
    if let Some(t) = &r.battery.test1 {
        out.push_str(&format!("test1 (character bound): {}\n", test1_line(t)));
    }
    if let Some(t) = &r.battery.test2 {
        out.push_str(&format!("test2 (2-closure): {}\n", test2_line(t)));
    }
    if let Some(t) = &r.battery.test3 {
        out.push_str(&format!("test3 (triple scan): {}\n", test3_line(t)));
    }
    if let Some(t) = &r.battery.oracle {
        out.push_str(&format!("oracle (exact arity): {}\n", oracle_line(t)));
    }
    if let Some(s) = &r.suborbit {
        out.push_str(&format!("test4 (suborbit reduction): {}\n", suborbit_line(s)));
    }
    if r.certificates_verified > 0 {
        out.push_str(&format!(
            "certificates: {} produced, all verified\n",
            r.certificates_verified
        ));
    }
    match &r.verdict_source {
        Some(src) => out.push_str(&format!(
            "verdict: {} (source: {src})\n",
            verdict_str(r.verdict)
        )),
        None => out.push_str(&format!("verdict: {}\n", verdict_str(r.verdict))),
    }
    out
}

fn test1_json(outcome: &Test1Outcome) -> Value {
    match outcome {
        Test1Outcome::NonBinary(e) => json!({
            "outcome": "NonBinary",
            "ell": e.ell,
            "r_ell": e.r_ell.to_string(),
            "r2": e.r2.to_string(),
            "bound": e.bound.to_string(),
            "method": method_str(e.method),
        }),
        Test1Outcome::Inconclusive { probed } => json!({
            "outcome": "Inconclusive",
            "probed": probed.iter().map(|p| json!({
                "ell": p.ell,
                "r_ell": p.r_ell.to_string(),
                "bound": p.bound.to_string(),
            })).collect::<Vec<_>>(),
        }),
        Test1Outcome::Skipped { reason } => json!({
            "outcome": "Skipped",
            "reason": reason,
        }),
    }
}

fn cert_json(cert: &WitnessCertificate) -> Value {
    serde_json::from_str(&crate::format::witness_to_json(cert)).expect("valid JSON")
}

fn test2_json(outcome: &Test2Outcome) -> Value {
    match outcome {
        Test2Outcome::NonBinary {
            closure_order,
            group_order,
            witness_element,
            certificate,
        } => {
            let mut m = Map::new();
            m.insert("outcome".into(), json!("NonBinary"));
            m.insert("closure_order".into(), json!(closure_order.to_string()));
            m.insert("group_order".into(), json!(group_order.to_string()));
            m.insert(
                "witness_element".into(),
                json!(witness_element.images().to_vec()),
            );
            if let Some(c) = certificate {
                m.insert("certificate".into(), cert_json(c));
            }
            Value::Object(m)
        }
        Test2Outcome::Inconclusive { closure_order } => json!({
            "outcome": "Inconclusive",
            "closure_order": closure_order.to_string(),
        }),
        Test2Outcome::Skipped { reason } => json!({
            "outcome": "Skipped",
            "reason": reason,
        }),
    }
}

fn test3_json(outcome: &Test3Outcome) -> Value {
    match outcome {
        Test3Outcome::NonBinary(cert) => json!({
            "outcome": "NonBinary",
            "certificate": cert_json(cert),
        }),
        Test3Outcome::Inconclusive { triples_checked } => json!({
            "outcome": "Inconclusive",
            "triples_checked": triples_checked,
        }),
        Test3Outcome::Skipped { reason } => json!({
            "outcome": "Skipped",
            "reason": reason,
        }),
    }
}

fn oracle_json(outcome: &ArityResult) -> Value {
    match outcome {
        ArityResult::Exact(k) => json!({"outcome": "Exact", "arity": k}),
        ArityResult::LowerBound(k) => json!({"outcome": "LowerBound", "arity_at_least": k}),
    }
}

fn suborbit_json(out: &SuborbitOutcome) -> Value {
    json!({
        "outcome": verdict_str(out.verdict),
        "firing_suborbit": out.firing_suborbit,
        "per_suborbit": out.per_suborbit.iter().map(|s| json!({
            "representative": s.representative,
            "size": s.size,
            "verdict": verdict_str(s.verdict),
            "source": s.verdict_source,
        })).collect::<Vec<_>>(),
    })
}

/// JSON rendering. Deterministic (keys in fixed order, pretty-printed,
/// trailing newline).
pub fn render_json(r: &AnalysisReport) -> String {
    let mut m = Map::new();
    m.insert("group".into(), json!(r.name));
    m.insert("degree".into(), json!(r.degree));
    m.insert("order".into(), json!(r.order));
    m.insert("transitive".into(), json!(r.transitive));
    if let Some(t) = &r.battery.test1 {
        m.insert("test1".into(), test1_json(t));
    }
    if let Some(t) = &r.battery.test2 {
        m.insert("test2".into(), test2_json(t));
    }
    if let Some(t) = &r.battery.test3 {
        m.insert("test3".into(), test3_json(t));
    }
    if let Some(t) = &r.battery.oracle {
        m.insert("oracle".into(), oracle_json(t));
    }
    if let Some(s) = &r.suborbit {
        m.insert("test4".into(), suborbit_json(s));
    }
    m.insert("certificates_verified".into(), json!(r.certificates_verified));
    m.insert("verdict".into(), json!(verdict_str(r.verdict)));
    m.insert("verdict_source".into(), json!(r.verdict_source));
    let mut s = serde_json::to_string_pretty(&Value::Object(m)).expect("valid JSON");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn analyze_a4_reports_nonbinary_with_verified_certificates() {
        let budgets = Budgets::default();
        let a4 = corpus::alternating(4);
        let report = analyze(&a4, "A4", &AnalysisOptions::default(), &budgets).unwrap();
        assert_eq!(report.verdict, Verdict::NonBinary);
        assert!(report.certificates_verified >= 1);
        let text = render_text(&report);
        assert!(text.contains("verdict: NonBinary"));
        assert!(text.contains("test1"));
        // Determinism: rendering twice is byte-identical.
        assert_eq!(text, render_text(&report));
        let j = render_json(&report);
        assert_eq!(j, render_json(&report));
        let parsed: serde_json::Value = serde_json::from_str(&j).unwrap();
        assert_eq!(parsed["verdict"], "NonBinary");
    }

    #[test]
    fn analyze_s5_is_inconclusive_without_oracle() {
        let budgets = Budgets::default();
        let s5 = corpus::symmetric(5);
        let report = analyze(&s5, "S5", &AnalysisOptions::default(), &budgets).unwrap();
        // The oracle (degree 5 ≤ 8) proves binarity.
        assert_eq!(report.verdict, Verdict::Binary);
        assert_eq!(report.verdict_source.as_deref(), Some("oracle"));
        let text = render_text(&report);
        assert!(text.contains("arity 2 (exact)"));
    }

    #[test]
    fn analyze_with_suborbit_reduction() {
        let budgets = Budgets::default();
        let a5 = corpus::alternating(5);
        // Battery on A5 already concludes (it is 2- but not 3-transitive),
        // so force the suborbit path off a group where the battery is
        // inconclusive but the suborbit fires: none in easy reach — instead
        // check that test4 runs and is recorded for a binary-looking group.
        let opts = AnalysisOptions {
            selection: TestSelection {
                test1: false,
                test2: false,
                test3: false,
                oracle: false,
                stop_at_first_nonbinary: false,
            },
            suborbit: true,
        };
        let report = analyze(&a5, "A5", &opts, &budgets).unwrap();
        assert_eq!(report.verdict, Verdict::NonBinary);
        assert_eq!(report.verdict_source.as_deref(), Some("test4"));
        let text = render_text(&report);
        assert!(text.contains("test4"));
    }
}
