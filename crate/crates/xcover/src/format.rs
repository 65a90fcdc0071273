//! Line-oriented text formats for set systems, graphs and pattern trees.
//!
//! ```text
//! c a comment
//! p setcover 3 3
//! 0 1
//! 1 2
//! 2
//! ```
//!
//! Headers are `p setcover <n> <m>`, `p exactcover <n> <m>`,
//! `p partialcover <n> <m> <p>`, `p digraph <n> <m>`, `p graph <n> <m>` and
//! `p tree <k>`. Tree edge lines are `<parent> <child> [fwd|rev]`.

use std::fmt::Write as _;
use std::path::Path;

use xcover_core::{Digraph, EdgeDir, InstanceError, PatternTree, SetCoverInstance, Variant};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("{0}")]
    Invalid(#[from] InstanceError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Any instance the formats can carry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Sets(SetCoverInstance),
    Graph(Digraph),
    Tree(PatternTree),
}

impl Instance {
    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Sets(s) => match s.variant() {
                Variant::Plain => "setcover",
                Variant::Exact => "exactcover",
                Variant::Partial(_) => "partialcover",
            },
            Instance::Graph(g) if g.is_undirected() => "graph",
            Instance::Graph(_) => "digraph",
            Instance::Tree(_) => "tree",
        }
    }
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, msg: msg.into() }
}

fn number(tok: &str, line: usize) -> Result<usize, FormatError> {
    tok.parse().map_err(|_| syntax(line, format!("expected a non-negative integer, found {tok:?}")))
}

fn is_comment(l: &str) -> bool {
    l == "c" || l.starts_with("c ") || l.starts_with("c\t")
}

/// Non-comment lines with their 1-based line numbers. Blank lines are kept
/// because a set line may be empty.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !is_comment(l))
}

pub fn parse_instance(text: &str) -> Result<Instance, FormatError> {
    let mut lines = content_lines(text).skip_while(|(_, l)| l.is_empty());
    let (hline, header) = lines.next().ok_or_else(|| syntax(1, "missing `p` header"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.first() != Some(&"p") || toks.len() < 2 {
        return Err(syntax(hline, format!("expected `p <kind> ...`, found {header:?}")));
    }
    let args = toks[2..].iter().map(|t| number(t, hline)).collect::<Result<Vec<_>, _>>()?;
    let arity = |want: usize| {
        if args.len() == want {
            Ok(())
        } else {
            Err(syntax(hline, format!("`p {}` takes {want} numbers, found {}", toks[1], args.len())))
        }
    };
    let mut body: Vec<(usize, &str)> = lines.collect();
    let sets_kind = matches!(toks[1], "setcover" | "exactcover" | "partialcover");
    if sets_kind {
        // blank lines are empty sets, except surplus ones at the end
        let want = args.get(1).copied().unwrap_or(0);
        while body.len() > want && body.last().is_some_and(|(_, l)| l.is_empty()) {
            body.pop();
        }
    } else {
        body.retain(|(_, l)| !l.is_empty());
    }
    let count = |want: usize| {
        if body.len() == want {
            Ok(())
        } else {
            let at = body.get(want).map_or(hline, |&(l, _)| l);
            Err(syntax(at, format!("header announces {want} lines, found {}", body.len())))
        }
    };
    match toks[1] {
        kind @ ("setcover" | "exactcover" | "partialcover") => {
            let variant = match kind {
                "setcover" => {
                    arity(2)?;
                    Variant::Plain
                }
                "exactcover" => {
                    arity(2)?;
                    Variant::Exact
                }
                _ => {
                    arity(3)?;
                    Variant::Partial(args[2])
                }
            };
            let (n, m) = (args[0], args[1]);
            count(m)?;
            let mut sets = Vec::with_capacity(m);
            for &(l, text) in &body {
                let set = text.split_whitespace().map(|t| number(t, l)).collect::<Result<Vec<_>, _>>()?;
                if let Some(&e) = set.iter().find(|&&e| e >= n) {
                    return Err(syntax(l, format!("element {e} out of range for n = {n}")));
                }
                sets.push(set);
            }
            Ok(Instance::Sets(SetCoverInstance::new(n, sets, variant)?))
        }
        kind @ ("digraph" | "graph") => {
            arity(2)?;
            let (n, m) = (args[0], args[1]);
            count(m)?;
            let mut edges = Vec::with_capacity(m);
            for &(l, text) in &body {
                let e = text.split_whitespace().map(|t| number(t, l)).collect::<Result<Vec<_>, _>>()?;
                let [u, v] = e[..] else {
                    return Err(syntax(l, "an edge line holds exactly two nodes"));
                };
                if u >= n || v >= n {
                    return Err(syntax(l, format!("edge ({u}, {v}) out of range for n = {n}")));
                }
                edges.push((u, v));
            }
            Ok(Instance::Graph(Digraph::new(n, edges, kind == "graph")?))
        }
        "tree" => {
            arity(1)?;
            let k = args[0];
            count(k.saturating_sub(1))?;
            let mut edges = Vec::with_capacity(k);
            for &(l, text) in &body {
                let toks: Vec<&str> = text.split_whitespace().collect();
                let dir = match toks.get(2) {
                    None => EdgeDir::Undirected,
                    Some(&"fwd") => EdgeDir::Down,
                    Some(&"rev") => EdgeDir::Up,
                    Some(t) => return Err(syntax(l, format!("orientation must be fwd or rev, found {t:?}"))),
                };
                if toks.len() < 2 || toks.len() > 3 {
                    return Err(syntax(l, "a tree edge line is `<parent> <child> [fwd|rev]`"));
                }
                edges.push((number(toks[0], l)?, number(toks[1], l)?, dir));
            }
            Ok(Instance::Tree(PatternTree::from_edges(k, &edges)?))
        }
        other => Err(syntax(hline, format!("unknown instance kind {other:?}"))),
    }
}

pub fn read_instance(path: &Path) -> Result<Instance, FormatError> {
    let text = std::fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_instance(&text)
}

/// Canonical text: no comments, sorted records, single spaces.
pub fn serialize(inst: &Instance) -> String {
    serialize_with_comments(inst, &[])
}

pub fn serialize_with_comments(inst: &Instance, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        for line in c.lines() {
            let _ = writeln!(out, "c {line}");
        }
    }
    match inst {
        Instance::Sets(s) => {
            let _ = match s.variant() {
                Variant::Partial(p) => writeln!(out, "p partialcover {} {} {p}", s.n(), s.m()),
                _ => writeln!(out, "p {} {} {}", inst.kind(), s.n(), s.m()),
            };
            for set in s.sets() {
                out.push_str(&join(set));
                out.push('\n');
            }
        }
        Instance::Graph(g) => {
            let _ = writeln!(out, "p {} {} {}", inst.kind(), g.num_nodes(), g.num_edges());
            for &(u, v) in g.edges() {
                let _ = writeln!(out, "{u} {v}");
            }
        }
        Instance::Tree(t) => {
            let _ = writeln!(out, "p tree {}", t.k());
            for (p, c, d) in t.edges() {
                let _ = match d {
                    EdgeDir::Undirected => writeln!(out, "{p} {c}"),
                    EdgeDir::Down => writeln!(out, "{p} {c} fwd"),
                    EdgeDir::Up => writeln!(out, "{p} {c} rev"),
                };
            }
        }
    }
    out
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_setcover() {
        let inst = parse_instance("c example\np setcover 3 3\n0 1\n1 2\n2\n").unwrap();
        let Instance::Sets(s) = &inst else { panic!() };
        assert_eq!(s.sets(), &[vec![0, 1], vec![1, 2], vec![2]]);
        assert_eq!(serialize(&inst), "p setcover 3 3\n0 1\n1 2\n2\n");
    }

    #[test]
    fn empty_sets_are_blank_lines() {
        let inst = parse_instance("p setcover 2 3\n0 1\n\n1\n\n").unwrap();
        let Instance::Sets(s) = &inst else { panic!() };
        assert_eq!(s.m(), 3);
        assert_eq!(serialize(&inst), "p setcover 2 3\n\n0 1\n1\n");
        let err = parse_instance("p setcover 2 2\n0 1\n").unwrap_err();
        assert!(err.to_string().contains("announces 2"), "{err}");
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_instance("p digraph 3 2\n0 1\nc skipped\n1 x\n").unwrap_err();
        assert_eq!(err.to_string(), "line 4: expected a non-negative integer, found \"x\"");
        let err = parse_instance("p tree 3\n0 1 up\n0 2\n").unwrap_err();
        assert!(err.to_string().starts_with("line 2:"), "{err}");
        let err = parse_instance("p setcover 2 1\n0 5\n").unwrap_err();
        assert!(err.to_string().starts_with("line 2:"), "{err}");
        assert!(parse_instance("p hypergraph 1 1\n").is_err());
        assert!(parse_instance("").is_err());
    }

    #[test]
    fn tree_orientations() {
        let err = parse_instance("p tree 3\n0 1 rev\n0 2\n").unwrap_err();
        assert!(err.to_string().contains("mixes"), "{err}");
        let inst = parse_instance("p tree 3\n0 1 rev\n0 2 fwd\n").unwrap();
        assert_eq!(serialize(&inst), "p tree 3\n0 1 rev\n0 2 fwd\n");
    }
}
