//! The `graph-v1` text format.
//!
//! ```text
//! graph-v1
//! nodes <n>
//! node <index> <label>
//! edge <u> <port_u> <v> <port_v>
//! start <index>       (instance files only)
//! treasure <index>    (instance files only)
//! ```
//!
//! Every edge is listed once; `#` starts a comment. The loader enforces
//! all graph invariants and rejects files that break them.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use super::{NodeRecord, PortLabeledGraph};

/// A parsed instance file: the graph plus optional start/treasure markers.
#[derive(Clone, Debug)]
pub struct Instance {
    pub graph: PortLabeledGraph,
    pub start: Option<usize>,
    pub treasure: Option<usize>,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError { line, message: message.into() })
}

/// Canonical serialization of a graph: nodes in index order, each edge
/// once from its lower-indexed endpoint in ascending port order.
pub fn write_graph(graph: &PortLabeledGraph) -> String {
    let mut out = String::from("graph-v1\n");
    let _ = writeln!(out, "nodes {}", graph.node_count());
    for (i, rec) in graph.nodes.iter().enumerate() {
        let _ = writeln!(out, "node {} {}", i, rec.label);
    }
    for (u, rec) in graph.nodes.iter().enumerate() {
        for (p, &(v, q)) in rec.adjacency.iter().enumerate() {
            if u < v {
                let _ = writeln!(out, "edge {u} {p} {v} {q}");
            }
        }
    }
    out
}

/// [`write_graph`] plus the `start`/`treasure` lines.
pub fn write_instance(
    graph: &PortLabeledGraph,
    start: Option<usize>,
    treasure: Option<usize>,
) -> String {
    let mut out = write_graph(graph);
    if let Some(s) = start {
        let _ = writeln!(out, "start {s}");
    }
    if let Some(t) = treasure {
        let _ = writeln!(out, "treasure {t}");
    }
    out
}

/// Parses a graph or instance file, enforcing every invariant. Errors
/// carry the offending line number.
pub fn parse_instance(text: &str) -> Result<Instance, FormatError> {
    let mut n: Option<usize> = None;
    let mut labels: BTreeMap<usize, (u64, usize)> = BTreeMap::new(); // index -> (label, line)
    let mut ports: Vec<BTreeMap<usize, ((usize, usize), usize)>> = Vec::new();
    let mut start = None;
    let mut treasure = None;
    let mut saw_header = false;

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if !saw_header {
            if line != "graph-v1" {
                return err(lineno, format!("expected header 'graph-v1', got '{line}'"));
            }
            saw_header = true;
            continue;
        }
        let mut parts = line.split_whitespace();
        let keyword = parts.next().unwrap();
        let mut next_num = |what: &str| -> Result<usize, FormatError> {
            match parts.next() {
                Some(tok) => tok
                    .parse::<usize>()
                    .map_err(|_| FormatError { line: lineno, message: format!("bad {what} '{tok}'") }),
                None => err(lineno, format!("missing {what}")),
            }
        };
        match keyword {
            "nodes" => {
                let count = next_num("node count")?;
                if n.replace(count).is_some() {
                    return err(lineno, "duplicate 'nodes' line");
                }
                ports = vec![BTreeMap::new(); count];
            }
            "node" => {
                let n = n.ok_or(FormatError {
                    line: lineno,
                    message: "'node' before 'nodes'".into(),
                })?;
                let idx = next_num("node index")?;
                let label = next_num("node label")? as u64;
                if idx >= n {
                    return err(lineno, format!("node index {idx} out of range"));
                }
                if labels.insert(idx, (label, lineno)).is_some() {
                    return err(lineno, format!("duplicate 'node' line for index {idx}"));
                }
            }
            "edge" => {
                let n = n.ok_or(FormatError {
                    line: lineno,
                    message: "'edge' before 'nodes'".into(),
                })?;
                let u = next_num("endpoint")?;
                let pu = next_num("port")?;
                let v = next_num("endpoint")?;
                let pv = next_num("port")?;
                if u >= n || v >= n {
                    return err(lineno, "edge endpoint out of range");
                }
                if ports[u].insert(pu, ((v, pv), lineno)).is_some() {
                    return err(lineno, format!("port {pu} at node {u} already used"));
                }
                if ports[v].insert(pv, ((u, pu), lineno)).is_some() {
                    return err(lineno, format!("port {pv} at node {v} already used"));
                }
            }
            "start" => start = Some(next_num("start index")?),
            "treasure" => treasure = Some(next_num("treasure index")?),
            other => return err(lineno, format!("unknown keyword '{other}'")),
        }
        if parts.next().is_some() {
            return err(lineno, "trailing tokens");
        }
    }

    if !saw_header {
        return err(1, "empty file: expected 'graph-v1' header");
    }
    let n = match n {
        Some(n) => n,
        None => return err(1, "missing 'nodes' line"),
    };

    let mut nodes = Vec::with_capacity(n);
    for (idx, port_map) in ports.iter().enumerate() {
        // ports at each node must be exactly 0..deg-1
        let deg = port_map.len();
        let mut adjacency = Vec::with_capacity(deg);
        for p in 0..deg {
            match port_map.get(&p) {
                Some(&(entry, _)) => adjacency.push(entry),
                None => {
                    let line = port_map.values().map(|&(_, l)| l).max().unwrap_or(1);
                    return err(line, format!("ports at node {idx} are not 0..{}", deg - 1));
                }
            }
        }
        let label = labels.get(&idx).map(|&(l, _)| l).unwrap_or(idx as u64);
        nodes.push(NodeRecord { label, adjacency });
    }

    let graph = PortLabeledGraph { nodes };
    let violations = graph.validate();
    if let Some(v) = violations.first() {
        return err(0, format!("invalid graph: {v}"));
    }
    for (name, idx) in [("start", start), ("treasure", treasure)] {
        if let Some(i) = idx {
            if i >= n {
                return err(0, format!("{name} index {i} out of range"));
            }
        }
    }
    Ok(Instance { graph, start, treasure })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_instance() {
        let g = crate::graph::random_connected_graph(7, 10, 3).unwrap();
        let text = write_instance(&g, Some(0), Some(4));
        let inst = parse_instance(&text).unwrap();
        assert_eq!(inst.graph, g);
        assert_eq!(inst.start, Some(0));
        assert_eq!(inst.treasure, Some(4));
        assert_eq!(write_instance(&inst.graph, inst.start, inst.treasure), text);
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# a comment\ngraph-v1\n\nnodes 2\nnode 0 0\nnode 1 1\nedge 0 0 1 0  # the only edge\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.graph.edge_count(), 1);
    }

    #[test]
    fn rejects_missing_header() {
        let e = parse_instance("nodes 2\n").unwrap_err();
        assert_eq!(e.line, 1);
    }

    #[test]
    fn rejects_duplicate_port_with_line() {
        let text = "graph-v1\nnodes 3\nedge 0 0 1 0\nedge 0 0 2 0\n";
        let e = parse_instance(text).unwrap_err();
        assert_eq!(e.line, 4);
    }

    #[test]
    fn rejects_port_gap() {
        let text = "graph-v1\nnodes 2\nedge 0 1 1 0\n";
        assert!(parse_instance(text).is_err());
    }

    #[test]
    fn rejects_disconnected() {
        let text = "graph-v1\nnodes 4\nedge 0 0 1 0\nedge 2 0 3 0\n";
        let e = parse_instance(text).unwrap_err();
        assert!(e.message.contains("disconnected"));
    }
}
