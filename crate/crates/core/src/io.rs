//! Graph files: a line-oriented text format and an equivalent JSON form.
//!
//! ```text
//! # comment
//! vertex <id> m=<float> [c=<float>]
//! edge <id> <id> b=<float>
//! ```
//!
//! Floats are written with the shortest decimal representation that
//! round-trips, so reading back a written graph is bit-exact.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

fn parse_err<T>(line: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        message: message.into(),
    })
}

fn parse_float(line: usize, key: &str, value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .or_else(|_| parse_err(line, format!("invalid number '{value}' for key '{key}'")))
}

/// Splits `key=value` tokens, rejecting keys outside `allowed` and repeats.
fn key_values<'a>(
    line: usize,
    tokens: &[&'a str],
    allowed: &[&str],
) -> Result<HashMap<&'a str, &'a str>> {
    let mut out = HashMap::new();
    for tok in tokens {
        let Some((key, value)) = tok.split_once('=') else {
            return parse_err(line, format!("expected key=value, found '{tok}'"));
        };
        if !allowed.contains(&key) {
            return parse_err(line, format!("unknown key '{key}'"));
        }
        if out.insert(key, value).is_some() {
            return parse_err(line, format!("duplicate key '{key}'"));
        }
    }
    Ok(out)
}

struct PendingEdge {
    line: usize,
    u: String,
    v: String,
    b: f64,
}

fn build(
    vertices: Vec<(String, f64, f64)>,
    edges: Vec<PendingEdge>,
) -> Result<Graph> {
    let mut index = HashMap::new();
    let mut labels = Vec::with_capacity(vertices.len());
    let mut measure = Vec::with_capacity(vertices.len());
    let mut potential = Vec::with_capacity(vertices.len());
    for (id, m, c) in vertices {
        index.insert(id.clone(), labels.len());
        labels.push(id);
        measure.push(m);
        potential.push(c);
    }
    let mut graph = Graph::with_labels(labels, measure);
    graph.set_potential(potential)?;
    let mut seen = std::collections::HashSet::new();
    for e in edges {
        let lookup = |id: &str| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| Error::Parse {
                    line: e.line,
                    message: format!("edge names undeclared vertex '{id}'"),
                })
        };
        let (x, y) = (lookup(&e.u)?, lookup(&e.v)?);
        if !seen.insert((x.min(y), x.max(y))) {
            return parse_err(e.line, format!("duplicate edge {} {}", e.u, e.v));
        }
        graph.set_edge(x, y, e.b)?;
    }
    Ok(graph)
}

pub fn parse_text(src: &str) -> Result<Graph> {
    let mut vertices: Vec<(String, f64, f64)> = Vec::new();
    let mut ids = HashMap::new();
    let mut edges = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens.as_slice() {
            [] => {}
            ["vertex", id, rest @ ..] => {
                let kv = key_values(line, rest, &["m", "c"])?;
                let Some(m) = kv.get("m") else {
                    return parse_err(line, format!("vertex '{id}' lacks m="));
                };
                let m = parse_float(line, "m", m)?;
                let c = match kv.get("c") {
                    Some(c) => parse_float(line, "c", c)?,
                    None => 0.0,
                };
                if ids.insert(id.to_string(), line).is_some() {
                    return parse_err(line, format!("duplicate vertex id '{id}'"));
                }
                vertices.push((id.to_string(), m, c));
            }
            ["edge", u, v, rest @ ..] => {
                let kv = key_values(line, rest, &["b"])?;
                let Some(b) = kv.get("b") else {
                    return parse_err(line, "edge lacks b=");
                };
                edges.push(PendingEdge {
                    line,
                    u: u.to_string(),
                    v: v.to_string(),
                    b: parse_float(line, "b", b)?,
                });
            }
            [keyword, ..] => {
                return parse_err(line, format!("unknown directive '{keyword}'"));
            }
        }
    }
    build(vertices, edges)
}

pub fn write_text(graph: &Graph) -> String {
    let mut out = String::new();
    for (x, label) in graph.labels().iter().enumerate() {
        let _ = write!(out, "vertex {label} m={:?}", graph.measure()[x]);
        let c = graph.potential()[x];
        if c != 0.0 || c.is_sign_negative() {
            let _ = write!(out, " c={c:?}");
        }
        out.push('\n');
    }
    for (x, y, b) in graph.edges() {
        let _ = writeln!(out, "edge {} {} b={b:?}", graph.label(x), graph.label(y));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum VertexId {
    Int(i64),
    Text(String),
}

impl VertexId {
    fn from_label(label: &str) -> Self {
        match label.parse::<i64>() {
            Ok(v) if v.to_string() == label => VertexId::Int(v),
            _ => VertexId::Text(label.to_string()),
        }
    }

    fn into_label(self) -> String {
        match self {
            VertexId::Int(v) => v.to_string(),
            VertexId::Text(s) => s,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonVertex {
    id: VertexId,
    m: f64,
    #[serde(default)]
    c: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonEdge {
    u: VertexId,
    v: VertexId,
    b: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonGraph {
    vertices: Vec<JsonVertex>,
    #[serde(default)]
    edges: Vec<JsonEdge>,
}

pub fn parse_json(src: &str) -> Result<Graph> {
    let doc: JsonGraph = serde_json::from_str(src)?;
    let mut seen = std::collections::HashSet::new();
    let mut vertices = Vec::with_capacity(doc.vertices.len());
    for (i, v) in doc.vertices.into_iter().enumerate() {
        let id = v.id.into_label();
        if !seen.insert(id.clone()) {
            return parse_err(i + 1, format!("duplicate vertex id '{id}'"));
        }
        vertices.push((id, v.m, v.c));
    }
    let edges = doc
        .edges
        .into_iter()
        .enumerate()
        .map(|(i, e)| PendingEdge {
            line: i + 1,
            u: e.u.into_label(),
            v: e.v.into_label(),
            b: e.b,
        })
        .collect();
    build(vertices, edges)
}

pub fn write_json(graph: &Graph) -> String {
    let doc = JsonGraph {
        vertices: graph
            .labels()
            .iter()
            .enumerate()
            .map(|(x, l)| JsonVertex {
                id: VertexId::from_label(l),
                m: graph.measure()[x],
                c: graph.potential()[x],
            })
            .collect(),
        edges: graph
            .edges()
            .map(|(x, y, b)| JsonEdge {
                u: VertexId::from_label(graph.label(x)),
                v: VertexId::from_label(graph.label(y)),
                b,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("graph serializes")
}

fn is_json(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

/// Reads a graph file, choosing the format by extension (`.json` or text).
pub fn load(path: impl AsRef<Path>) -> Result<Graph> {
    let path = path.as_ref();
    let src = std::fs::read_to_string(path)?;
    if is_json(path) {
        parse_json(&src)
    } else {
        parse_text(&src)
    }
}

pub fn save(graph: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let body = if is_json(path) {
        write_json(graph)
    } else {
        write_text(graph)
    };
    std::fs::write(path, body)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::generate_paper_path;

    const SAMPLE: &str = "\
# two vertices
vertex a m=1 c=0.5
vertex b m=2   # trailing comment
edge a b b=3
";

    #[test]
    fn parses_text() {
        let g = parse_text(SAMPLE).unwrap();
        assert_eq!(g.labels(), &["a", "b"]);
        assert_eq!(g.measure(), &[1.0, 2.0]);
        assert_eq!(g.potential(), &[0.5, 0.0]);
        assert_eq!(g.edge_weight(0, 1), 3.0);
    }

    #[test]
    fn text_errors_are_located() {
        let cases = [
            ("vertex a m=1 q=2\n", 1, "unknown key"),
            ("vertex a m=1\nvertex a m=2\n", 2, "duplicate vertex"),
            ("vertex a m=1\nedge a z b=1\n", 2, "undeclared vertex"),
            ("vertex a c=1\n", 1, "lacks m="),
            ("vertex a m=x\n", 1, "invalid number"),
            ("\nnode a\n", 2, "unknown directive"),
            ("vertex a m=1\nvertex b m=1\nedge a b b=1\nedge b a b=2\n", 4, "duplicate edge"),
        ];
        for (src, want_line, want_msg) in cases {
            match parse_text(src) {
                Err(Error::Parse { line, message }) => {
                    assert_eq!(line, want_line, "{src}");
                    assert!(message.contains(want_msg), "{message}");
                }
                other => panic!("{src}: unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn loop_parses_and_fails_validation() {
        let g = parse_text("vertex 0 m=1\nedge 0 0 b=1\n").unwrap();
        assert!(g.validate().to_string().contains("loop at vertex 0"));
    }

    #[test]
    fn json_matches_text() {
        let json = r#"{"vertices":[{"id":"a","m":1,"c":0.5},{"id":"b","m":2}],
                       "edges":[{"u":"a","v":"b","b":3}]}"#;
        assert_eq!(parse_json(json).unwrap(), parse_text(SAMPLE).unwrap());
        let numeric = r#"{"vertices":[{"id":0,"m":1},{"id":1,"m":1}],"edges":[{"u":0,"v":1,"b":1}]}"#;
        let g = parse_json(numeric).unwrap();
        assert_eq!(g.labels(), &["0", "1"]);
        assert!(parse_json(r#"{"vertices":[{"id":0,"m":1,"z":1}]}"#).is_err());
    }

    #[test]
    fn paper_path_round_trips_bit_exactly() {
        let g = generate_paper_path(37).unwrap();
        assert_eq!(parse_text(&write_text(&g)).unwrap(), g);
        assert_eq!(parse_json(&write_json(&g)).unwrap(), g);
    }
}
