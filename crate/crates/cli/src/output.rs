use homeostasis::IONetwork;
use serde_json::{json, Map, Value};

/// Node names sorted lexicographically.
pub fn names<I: IntoIterator<Item = usize>>(net: &IONetwork, nodes: I) -> Vec<String> {
    net.sorted_names(nodes)
}

pub fn braces(items: &[String]) -> String {
    format!("{{{}}}", items.join(", "))
}

/// Wraps `body` with the schema version and renders it with a trailing newline.
pub fn document(body: Map<String, Value>) -> String {
    let mut doc = body;
    doc.insert("schema".into(), json!(1));
    let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("json values serialize");
    s.push('\n');
    s
}

/// Left-aligned columns separated by two spaces.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: Vec<&str>| {
        let last = cells.len() - 1;
        for (i, cell) in cells.iter().enumerate() {
            out.push_str(cell);
            if i < last {
                out.extend(std::iter::repeat_n(' ', width[i] - cell.chars().count() + 2));
            }
        }
        out.push('\n');
    };
    line(header.to_vec());
    for row in rows {
        line(row.iter().map(String::as_str).collect());
    }
    out
}

pub fn node_map(net: &IONetwork, values: impl Fn(usize) -> f64) -> Value {
    let mut m = Map::new();
    for v in net.sorted(0..net.len()) {
        m.insert(net.name(v).to_string(), json!(values(v)));
    }
    Value::Object(m)
}
