//! Human-readable rendering of output documents. Not a stable format.

use std::fmt::Write;

use serde_json::Value;

fn as_matrix(v: &Value) -> Option<(usize, Vec<(f64, f64)>)> {
    let n = v.get("n")?.as_u64()? as usize;
    let entries = v.get("entries")?.as_array()?;
    let mut out = Vec::with_capacity(entries.len());
    for e in entries {
        out.push((e.get("re")?.as_f64()?, e.get("im")?.as_f64()?));
    }
    (out.len() == n * n).then_some((n, out))
}

fn fmt_entry(re: f64, im: f64) -> String {
    if im == 0.0 {
        format!("{re:>12.6}")
    } else {
        format!("{:>12}", format!("{re:.4}{im:+.4}i"))
    }
}

fn render_into(out: &mut String, v: &Value, indent: usize) {
    let pad = " ".repeat(indent);
    if let Some((n, entries)) = as_matrix(v) {
        for i in 0..n {
            let row: Vec<String> = (0..n).map(|j| fmt_entry(entries[i * n + j].0, entries[i * n + j].1)).collect();
            let _ = writeln!(out, "{pad}{}", row.join(" "));
        }
        if let Value::Object(map) = v {
            for (k, x) in map.iter().filter(|(k, _)| *k != "n" && *k != "entries") {
                render_field(out, k, x, indent);
            }
        }
        return;
    }
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                render_field(out, k, x, indent);
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                let _ = writeln!(out, "{pad}[{i}]");
                render_into(out, x, indent + 2);
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{other}");
        }
    }
}

fn render_field(out: &mut String, key: &str, v: &Value, indent: usize) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(_) | Value::Array(_) => {
            let _ = writeln!(out, "{pad}{key}:");
            render_into(out, v, indent + 2);
        }
        scalar => {
            let _ = writeln!(out, "{pad}{key}: {scalar}");
        }
    }
}

pub fn render(v: &Value) -> String {
    let mut out = String::new();
    render_into(&mut out, v, 0);
    while out.ends_with('\n') {
        out.pop();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn renders_matrix_rows() {
        let v = json!({"n": 2, "entries": [{"re": 1.0, "im": 0.0}, {"re": 0.0, "im": 0.0},
                                          {"re": 0.0, "im": 0.0}, {"re": 2.0, "im": 0.0}]});
        let s = render(&v);
        assert_eq!(s.lines().count(), 2);
        assert!(s.contains("2.000000"));
    }

    #[test]
    fn renders_scalars_and_nesting() {
        let s = render(&json!({"commutes": true, "report": {"iterations": 3}}));
        assert!(s.contains("commutes: true"));
        assert!(s.contains("  iterations: 3"));
    }
}
