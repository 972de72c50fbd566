//! The CAPSTP instance format.
//!
//! ```text
//! CAPSTP 1
//! SECTION Graph
//! Kind undirected
//! Nodes 3
//! E 1 2 1 1
//! E 1 3 3/2 1
//! SECTION Terminals
//! Root 1
//! T 2
//! T 3
//! EOF
//! ```
//!
//! `A` lines are arcs (kinds `digraph` and `dag`), `E` lines are edges
//! (kind `undirected`). `#` starts a comment that runs to the end of the line.

use std::fmt::Write as _;

use super::tokens;
use crate::error::{Error, Result};
use crate::model::instance::{ensure_valid, Edge, GraphKind, Instance, Length};

/// Canonical text of an instance; [`parse_stp`] inverts it exactly.
pub fn write_stp(inst: &Instance) -> String {
    let mut s = String::new();
    let tag = if inst.kind.is_directed() { 'A' } else { 'E' };
    s.push_str("CAPSTP 1\nSECTION Graph\n");
    let _ = writeln!(s, "Kind {}", inst.kind);
    let _ = writeln!(s, "Nodes {}", inst.n);
    for e in &inst.edges {
        let _ = writeln!(s, "{tag} {} {} {} {}", e.u, e.v, e.length, e.capacity);
    }
    s.push_str("SECTION Terminals\n");
    let _ = writeln!(s, "Root {}", inst.root);
    for t in &inst.terminals {
        let _ = writeln!(s, "T {t}");
    }
    s.push_str("EOF\n");
    s
}

/// Parses and validates. Unreachable terminals are accepted: such an
/// instance is infeasible, not malformed.
pub fn parse_stp(text: &str) -> Result<Instance> {
    let inst = parse_stp_unchecked(text)?;
    ensure_valid(&inst)?;
    Ok(inst)
}

#[derive(PartialEq, Eq, Clone, Copy)]
enum Section {
    Header,
    Top,
    Graph,
    Terminals,
    Done,
}

/// Syntax only; no semantic validation.
pub fn parse_stp_unchecked(text: &str) -> Result<Instance> {
    let mut section = Section::Header;
    let mut kind = None;
    let mut nodes = None;
    let mut root = None;
    let mut edges = Vec::new();
    let mut terminals = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let raw = raw.split('#').next().unwrap_or_default();
        let toks = tokens(raw);
        let Some(&(col, head)) = toks.first() else { continue };
        let err = |c: usize, msg: String| Error::parse(line, c, msg);
        let arity = |n: usize| -> Result<()> {
            if toks.len() != n {
                let c = toks.get(n).map_or(raw.chars().count() + 1, |t| t.0);
                return Err(err(c, format!("`{head}` takes {} field(s), found {}", n - 1, toks.len() - 1)));
            }
            Ok(())
        };
        let int = |i: usize| -> Result<usize> {
            let (c, t) = toks[i];
            t.parse::<usize>().map_err(|_| err(c, format!("expected a nonnegative integer, found `{t}`")))
        };
        match section {
            Section::Header => {
                if head != "CAPSTP" {
                    return Err(err(col, format!("expected header `CAPSTP 1`, found `{head}`")));
                }
                arity(2)?;
                if toks[1].1 != "1" {
                    return Err(err(toks[1].0, format!("unsupported format version `{}`", toks[1].1)));
                }
                section = Section::Top;
            }
            Section::Done => return Err(err(col, "content after `EOF`".into())),
            _ => match head {
                "SECTION" => {
                    arity(2)?;
                    let (c, name) = toks[1];
                    section = match (section, name) {
                        (Section::Top, "Graph") => Section::Graph,
                        (Section::Graph, "Terminals") => Section::Terminals,
                        _ => return Err(err(c, format!("unexpected section `{name}`"))),
                    };
                }
                "EOF" => {
                    arity(1)?;
                    if section != Section::Terminals {
                        return Err(err(col, "`EOF` before the Terminals section".into()));
                    }
                    section = Section::Done;
                }
                "Kind" if section == Section::Graph => {
                    arity(2)?;
                    if kind.is_some() || !edges.is_empty() {
                        return Err(err(col, "`Kind` must appear once, before any edge".into()));
                    }
                    let (c, t) = toks[1];
                    kind = Some(t.parse::<GraphKind>().map_err(|m| err(c, m))?);
                }
                "Nodes" if section == Section::Graph => {
                    arity(2)?;
                    if nodes.is_some() || !edges.is_empty() {
                        return Err(err(col, "`Nodes` must appear once, before any edge".into()));
                    }
                    nodes = Some(int(1)?);
                }
                "A" | "E" if section == Section::Graph => {
                    let k: GraphKind = kind.ok_or_else(|| err(col, "edge before `Kind`".into()))?;
                    if nodes.is_none() {
                        return Err(err(col, "edge before `Nodes`".into()));
                    }
                    let want = if k.is_directed() { "A" } else { "E" };
                    if head != want {
                        return Err(err(col, format!("kind {k} uses `{want}` lines, found `{head}`")));
                    }
                    arity(5)?;
                    let (u, v) = (int(1)?, int(2)?);
                    let (lc, lt) = toks[3];
                    let length: Length = lt
                        .parse()
                        .map_err(|_| err(lc, format!("expected a length `p/q` or integer, found `{lt}`")))?;
                    let (cc, ct) = toks[4];
                    let capacity = ct
                        .parse::<u32>()
                        .map_err(|_| err(cc, format!("expected a capacity, found `{ct}`")))?;
                    edges.push(Edge::new(u, v, length, capacity));
                }
                "Root" if section == Section::Terminals => {
                    arity(2)?;
                    if root.is_some() {
                        return Err(err(col, "`Root` given twice".into()));
                    }
                    root = Some(int(1)?);
                }
                "T" if section == Section::Terminals => {
                    arity(2)?;
                    terminals.push(int(1)?);
                }
                other => return Err(err(col, format!("unexpected `{other}`"))),
            },
        }
    }
    let end = last_line + 1;
    if section != Section::Done {
        return Err(Error::parse(end, 1, "missing `EOF`"));
    }
    let kind = kind.ok_or_else(|| Error::parse(end, 1, "missing `Kind`"))?;
    let n = nodes.ok_or_else(|| Error::parse(end, 1, "missing `Nodes`"))?;
    let root = root.ok_or_else(|| Error::parse(end, 1, "missing `Root`"))?;
    Ok(Instance::new(kind, n, edges, root, terminals))
}
