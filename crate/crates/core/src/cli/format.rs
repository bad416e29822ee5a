//! Serialization of reports with a fixed number of significant digits.

use serde_json::Value;

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits, mapping `-0` to `0`.
pub fn round(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return if v == 0.0 { 0.0 } else { v };
    }
    let r: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v).parse().expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Rounds every number in a JSON tree.
pub fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) => {
            if n.is_f64() {
                let r = round(n.as_f64().expect("f64 number"));
                *v = serde_json::Number::from_f64(r).map(Value::Number).unwrap_or(Value::Null);
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

pub fn to_json(mut v: Value) -> String {
    round_value(&mut v);
    let mut s = serde_json::to_string_pretty(&v).expect("json value serializes");
    s.push('\n');
    s
}

/// Plain notation in `[1e-4, 1e15)`, exponent notation outside it.
pub fn format_number(v: f64) -> String {
    let r = round(v);
    let a = r.abs();
    if r == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => match n.as_f64() {
            Some(f) if n.is_f64() => format_number(f),
            _ => n.to_string(),
        },
        Value::String(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Value::String(s) => s.clone(),
        other => {
            let mut o = other.clone();
            round_value(&mut o);
            let s = o.to_string();
            format!("\"{}\"", s.replace('"', "\"\""))
        }
    }
}

/// Header row plus one line per row; `summary` entries follow as `# key=value`.
pub fn to_csv(columns: &[String], rows: &[Vec<Value>], summary: &[(String, Value)]) -> String {
    let mut out = columns.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(csv_cell).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    for (k, v) in summary {
        out.push_str(&format!("# {k}={}\n", csv_cell(v)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn rounding() {
        assert_eq!(round(1.0 / 3.0), 0.333333333333);
        assert_eq!(round(-0.0), 0.0);
        assert_eq!(round(-1e-300 * 1e-300), 0.0);
        assert_eq!(round(123456.7890123456), 123456.789012);
        assert_eq!(round(5.0 / 9.0), 0.555555555556);
    }

    #[test]
    fn json_is_rounded() {
        let s = to_json(json!({"a": 2.0 / 3.0, "b": [1, 0.1 + 0.2]}));
        assert!(s.contains("0.666666666667"));
        assert!(s.contains("0.3\n") || s.contains("0.3,") || s.contains("0.3\r"));
    }

    #[test]
    fn csv_layout() {
        let s = to_csv(&["x".into(), "y".into()], &[vec![json!(0.5), json!(1.0 / 7.0)]], &[("max".into(), json!(0.25))]);
        assert_eq!(s, "x,y\n0.5,0.142857142857\n# max=0.25\n");
        assert_eq!(format_number(9.3844092995e-11), "9.3844092995e-11");
        assert_eq!(format_number(-0.0), "0");
        assert_eq!(to_csv(&["ok".into()], &[vec![json!(true)]], &[]), "ok\ntrue\n");
    }
}
