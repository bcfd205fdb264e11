use std::fmt::Write;

use crate::report::Report;

fn point(p: &std::collections::BTreeMap<String, f64>) -> String {
    let parts: Vec<String> = p.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Human-readable report. Sample tables are left to the json format.
pub fn render_text(r: &Report) -> String {
    let mut s = String::new();
    let sig: Vec<&str> = r.metric.signature.iter().map(|&e| if e > 0 { "+" } else { "-" }).collect();
    let _ = writeln!(s, "metric: {} [{}] signature ({})", r.metric.file, r.metric.coords.join(", "), sig.join(","));
    for g in &r.metric.g {
        let _ = writeln!(s, "  g[{}] = {}", g.name, g.expr);
    }
    let _ = writeln!(s, "sign convention: {}", r.verdict.sign_convention);
    let names: Vec<String> = r
        .pipelines
        .iter()
        .map(|p| if p.applicable { p.name.clone() } else { format!("{} (not applicable)", p.name) })
        .collect();
    let _ = writeln!(s, "pipelines: {}", names.join(", "));

    if !r.components.is_empty() {
        let _ = writeln!(s, "components:");
    }
    for c in &r.components {
        let values: Vec<&String> = c.symbolic.values().collect();
        let agree = values.windows(2).all(|w| w[0] == w[1]);
        if agree && !values.is_empty() {
            let _ = write!(s, "  {} = {}", c.label, values[0]);
            if c.symbolic.len() > 1 {
                let _ = write!(s, "   [{}]", c.symbolic.keys().cloned().collect::<Vec<_>>().join(", "));
            }
        } else {
            let _ = write!(s, "  {}", c.label);
            for (p, e) in &c.symbolic {
                let _ = write!(s, "\n    {p}: {e}");
            }
        }
        if let Some(st) = &c.status {
            let _ = write!(s, "   ({st})");
        }
        s.push('\n');
    }

    if !r.comparisons.is_empty() {
        let _ = writeln!(s, "comparisons (tol {:e}, {} samples, seed {}):", r.verdict.tol, r.verdict.samples, r.seed);
    }
    for c in &r.comparisons {
        let _ = write!(s, "  {} vs {}: {}", c.left, c.right, c.status);
        if c.status != "not applicable" {
            let _ = write!(s, " ({} components, max residual {:e})", c.components.len(), c.max_residual);
        }
        if let Some(reason) = &c.reason {
            let _ = write!(s, ", {reason}");
        }
        s.push('\n');
        if c.status == "mismatch" {
            for m in c.components.iter().filter(|m| m.agreement == "mismatch") {
                let _ = writeln!(s, "    {} residual {:e}", m.label, m.max_residual);
            }
            if let Some(w) = &c.worst {
                let _ = writeln!(s, "    worst {} at {}: {} vs {}", w.label, point(&w.point), w.left, w.right);
            }
        }
    }

    let _ = write!(s, "verdict: {}", r.verdict.status);
    if let Some(w) = &r.verdict.witness {
        let value = w.value.map_or("non-finite".to_string(), |v| v.to_string());
        let _ = write!(s, ", witness {} = {} (value {value} at {})", w.label, w.expr, point(&w.point));
    }
    if let Some(d) = &r.verdict.detail {
        let _ = write!(s, "\n  {d}");
    }
    s.push('\n');
    s
}
