//! CSV and JSON rendering. Everything is assembled in memory so identical
//! inputs give byte-identical output.

use std::fmt::Write as _;

use ptnet::{ComplexMatrix, Cx};
use serde_json::{json, Map, Value};

/// 17 significant digits; negative zero printed as zero.
pub fn num(x: f64) -> String {
    format!("{:.16e}", if x == 0.0 { 0.0 } else { x })
}

pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Self {
            text: header.join(",") + "\n",
        }
    }

    pub fn row(&mut self, fields: &[String]) {
        let _ = writeln!(self.text, "{}", fields.join(","));
    }

    pub fn finish(self) -> String {
        self.text
    }
}

pub fn document(meta: Value, data: Value) -> String {
    let mut doc = Map::new();
    doc.insert("meta".into(), meta);
    doc.insert("data".into(), data);
    let mut text = serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable");
    text.push('\n');
    text
}

pub fn complex_list(values: &[Cx<f64>]) -> Value {
    json!({
        "re": values.iter().map(|z| z.re).collect::<Vec<_>>(),
        "im": values.iter().map(|z| z.im).collect::<Vec<_>>(),
    })
}

pub fn matrix(m: &ComplexMatrix<f64>) -> Value {
    let grid = |f: fn(&Cx<f64>) -> f64| -> Vec<Vec<f64>> {
        (0..m.rows()).map(|r| (0..m.cols()).map(|c| f(&m[(r, c)])).collect()).collect()
    };
    json!({ "re": grid(|z| z.re), "im": grid(|z| z.im) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_and_no_negative_zero() {
        assert_eq!(num(1.0), "1.0000000000000000e0");
        assert_eq!(num(-0.0), "0.0000000000000000e0");
        let x = 0.1 + 0.2;
        assert_eq!(num(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn csv_layout() {
        let mut c = Csv::new(&["a", "b"]);
        c.row(&["1".into(), "2".into()]);
        assert_eq!(c.finish(), "a,b\n1,2\n");
    }
}
