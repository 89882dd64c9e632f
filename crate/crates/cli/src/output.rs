//! Rendering of reports as JSON, CSV or plain text.

use clap::ValueEnum;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "null".into(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => i.to_string(),
            (_, Some(u)) => u.to_string(),
            _ => gammalab::json::fmt_f64(n.as_f64().unwrap_or(f64::NAN)),
        },
        Value::String(s) => s.clone(),
        other => gammalab::json::to_string(other),
    }
}

fn fields(v: &Value) -> Vec<(String, String)> {
    match v {
        Value::Object(m) => m.iter().map(|(k, v)| (k.clone(), scalar(v))).collect(),
        other => vec![("value".into(), scalar(other))],
    }
}

pub fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => gammalab::json::to_string(v) + "\n",
        Format::Text => fields(v)
            .into_iter()
            .map(|(k, v)| format!("{k}: {v}\n"))
            .collect(),
        Format::Csv => {
            let fs = fields(v);
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(fs.iter().map(|(k, _)| k.as_str()))
                .and_then(|_| w.write_record(fs.iter().map(|(_, v)| v.as_str())))
                .expect("writing CSV to memory does not fail");
            let bytes = w.into_inner().expect("in-memory CSV flush");
            String::from_utf8(bytes).expect("CSV of UTF-8 fields is UTF-8")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn formats() {
        let v = json!({"m": 5, "x": 0.5, "pt": [1.0, -2.0], "ok": true});
        assert_eq!(
            render(&v, Format::Json),
            "{\"m\":5,\"x\":5.0000000000000000e-1,\"pt\":[1.0000000000000000e0,-2.0000000000000000e0],\"ok\":true}\n"
        );
        assert_eq!(
            render(&v, Format::Csv),
            "m,x,pt,ok\n5,5.0000000000000000e-1,\"[1.0000000000000000e0,-2.0000000000000000e0]\",true\n"
        );
        assert!(render(&v, Format::Text).starts_with("m: 5\nx: 5.0000000000000000e-1\n"));
    }
}
