//! The line-oriented graph format.
//!
//! ```text
//! # comment (also allowed after content on a line)
//! node <label>                  optional
//! edge <label> <label>          link ids 1, 2, … in file order
//! terminals <label> <label> …   exactly once
//! ```
//!
//! Without `node` lines, nodes are declared by their first appearance in an
//! edge. Once any `node` line is present every node must be declared and
//! edges naming other labels are rejected.

use std::collections::HashMap;

use tsig_core::graph::{MAX_LINKS, MAX_NODES};
use tsig_core::{Network, NetworkError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {kind}")]
pub struct GraphFileError {
    /// 1-based; 0 when the problem is the file as a whole.
    pub line: usize,
    pub kind: GraphFileErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphFileErrorKind {
    #[error("malformed line: {0}")]
    Malformed(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("node `{0}` is declared twice")]
    DuplicateNode(String),
    #[error("edge is a self-loop on `{0}`")]
    SelfLoop(String),
    #[error("terminal `{0}` is listed twice")]
    DuplicateTerminal(String),
    #[error("at least two terminals are required, got {0}")]
    TooFewTerminals(usize),
    #[error("missing `terminals` line")]
    MissingTerminals,
    #[error("second `terminals` line")]
    RepeatedTerminals,
    #[error("the terminals are not connected in the intact network")]
    Disconnected,
    #[error("more than {MAX_NODES} nodes")]
    TooManyNodes,
    #[error("more than {MAX_LINKS} links")]
    TooManyLinks,
}

fn fail<T>(line: usize, kind: GraphFileErrorKind) -> Result<T, GraphFileError> {
    Err(GraphFileError { line, kind })
}

/// Parses graph-file text into a validated [`Network`].
pub fn parse_network(text: &str) -> Result<Network, GraphFileError> {
    use GraphFileErrorKind::*;

    let mut declared: Vec<(usize, String)> = Vec::new();
    let mut edges: Vec<(usize, String, String)> = Vec::new();
    let mut terminals: Option<(usize, Vec<String>)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut words = content.split_whitespace();
        let Some(keyword) = words.next() else { continue };
        let args: Vec<&str> = words.collect();
        match (keyword, args.as_slice()) {
            ("node", [label]) => {
                if declared.iter().any(|(_, l)| l == label) {
                    return fail(line, DuplicateNode(label.to_string()));
                }
                declared.push((line, label.to_string()));
            }
            ("edge", [a, b]) => {
                if a == b {
                    return fail(line, SelfLoop(a.to_string()));
                }
                edges.push((line, a.to_string(), b.to_string()));
            }
            ("terminals", labels) => {
                if terminals.is_some() {
                    return fail(line, RepeatedTerminals);
                }
                terminals = Some((line, labels.iter().map(|s| s.to_string()).collect()));
            }
            ("node" | "edge", _) => {
                return fail(line, Malformed(format!("wrong number of labels for `{keyword}`")));
            }
            _ => return fail(line, Malformed(format!("unknown keyword `{keyword}`"))),
        }
    }

    let strict = !declared.is_empty();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    for (line, label) in &declared {
        if labels.len() == MAX_NODES {
            return fail(*line, TooManyNodes);
        }
        index.insert(label.clone(), labels.len());
        labels.push(label.clone());
    }

    let mut links = Vec::with_capacity(edges.len());
    for (line, a, b) in &edges {
        if links.len() == MAX_LINKS {
            return fail(*line, TooManyLinks);
        }
        let mut endpoint = |label: &String| -> Result<usize, GraphFileError> {
            if let Some(&i) = index.get(label) {
                return Ok(i);
            }
            if strict {
                return fail(*line, UnknownNode(label.clone()));
            }
            if labels.len() == MAX_NODES {
                return fail(*line, TooManyNodes);
            }
            index.insert(label.clone(), labels.len());
            labels.push(label.clone());
            Ok(labels.len() - 1)
        };
        let ea = endpoint(a)?;
        let eb = endpoint(b)?;
        links.push((ea, eb));
    }

    let Some((t_line, t_labels)) = terminals else {
        return fail(text.lines().count(), MissingTerminals);
    };
    let mut term = Vec::with_capacity(t_labels.len());
    for label in &t_labels {
        let Some(&i) = index.get(label) else {
            return fail(t_line, UnknownNode(label.clone()));
        };
        if term.contains(&i) {
            return fail(t_line, DuplicateTerminal(label.clone()));
        }
        term.push(i);
    }
    if term.len() < 2 {
        return fail(t_line, TooFewTerminals(term.len()));
    }

    Network::new(labels, links, term).map_err(|e| {
        let kind = match e {
            NetworkError::TerminalsDisconnected => Disconnected,
            NetworkError::TooFewTerminals(n) => TooFewTerminals(n),
            other => Malformed(other.to_string()),
        };
        GraphFileError { line: t_line, kind }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use GraphFileErrorKind::*;

    fn err(text: &str) -> (usize, GraphFileErrorKind) {
        let e = parse_network(text).unwrap_err();
        (e.line, e.kind)
    }

    #[test]
    fn fixtures_parse() {
        let fig1 = parse_network(fixtures::FIGURE1).unwrap();
        assert_eq!((fig1.node_count(), fig1.link_count(), fig1.terminals().len()), (7, 9, 3));
        let fig2 = parse_network(fixtures::FIGURE2).unwrap();
        assert_eq!((fig2.node_count(), fig2.link_count()), (7, 11));
        let eon = parse_network(fixtures::EON_PAR_COP).unwrap();
        assert_eq!((eon.node_count(), eon.link_count()), (11, 26));
        let single = parse_network(fixtures::SINGLE).unwrap();
        assert_eq!(single.link_count(), 1);
        for (name, text) in fixtures::ALL {
            assert!(parse_network(text).is_ok(), "{name}");
        }
    }

    #[test]
    fn links_numbered_in_file_order() {
        let net = parse_network("edge a b\n# x\n\nedge b c  # trailing\nterminals a c\n").unwrap();
        assert_eq!(net.links(), [(0, 1), (1, 2)]);
        assert_eq!(net.label(2), "c");
    }

    #[test]
    fn error_lines() {
        assert_eq!(err("edge a b\nedge a\nterminals a b"), (2, Malformed("wrong number of labels for `edge`".into())));
        assert_eq!(err("edge a b\nlink a b\nterminals a b").0, 2);
        assert_eq!(err("edge a b\nedge c c\nterminals a b"), (2, SelfLoop("c".into())));
        assert_eq!(err("node a\nnode b\nnode a\nedge a b\nterminals a b"), (3, DuplicateNode("a".into())));
        assert_eq!(err("node a\nnode b\nedge a z\nterminals a b"), (3, UnknownNode("z".into())));
        assert_eq!(err("edge a b\nterminals a z"), (2, UnknownNode("z".into())));
        assert_eq!(err("edge a b\nterminals a"), (2, TooFewTerminals(1)));
        assert_eq!(err("edge a b\nterminals a a"), (2, DuplicateTerminal("a".into())));
        assert_eq!(err("edge a b\nedge c d\nterminals a d"), (3, Disconnected));
        assert_eq!(err("edge a b\n"), (1, MissingTerminals));
        assert_eq!(err("edge a b\nterminals a b\nterminals a b"), (3, RepeatedTerminals));
    }

    #[test]
    fn too_many_links() {
        let mut text = String::new();
        for _ in 0..65 {
            text.push_str("edge a b\n");
        }
        text.push_str("terminals a b\n");
        assert_eq!(err(&text), (65, TooManyLinks));
    }
}
