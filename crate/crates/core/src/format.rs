//! Line-based text format for instances and counterexample bundles.
//!
//! ```text
//! instance <n> <k> <c>
//! cliques <g_0> ... <g_{n-1}>
//! edges <m>
//! <u> <v>            (m lines)
//! pairs
//! <s_i> <t_i>        (k lines)
//! end
//! ```
//!
//! `#` starts a comment line; blank lines are skipped. A bundle is an
//! instance followed by an optional `witness` section holding `path` lines
//! (one per linkage member) and at most one `bset` line, closed by `end`.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::digraph::{
    CliquePartition, Digraph, DiPath, InstanceError, Linkage, ProblemInstance,
};

/// Parser refuses headers promising more vertices than this; everything the
/// toolkit handles is far smaller, and the cap keeps hostile inputs from
/// forcing large allocations.
pub const MAX_VERTEX_COUNT: usize = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("{0}")]
    Semantic(String),
}

impl FormatError {
    fn syntax(line: usize, msg: impl Into<String>) -> Self {
        FormatError::Syntax { line, msg: msg.into() }
    }

    fn semantic(msg: impl Into<String>) -> Self {
        FormatError::Semantic(msg.into())
    }
}

/// Instance plus the optional witness section of a counterexample bundle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bundle {
    pub instance: ProblemInstance,
    pub linkage: Option<Linkage>,
    pub bset: Option<BTreeSet<usize>>,
}

struct Lines<'a> {
    // (1-based line number, significant content) with comments and blanks gone
    items: Vec<(usize, &'a str)>,
    pos: usize,
    eof_line: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let mut items = Vec::new();
        let mut count = 0;
        for (idx, raw) in text.lines().enumerate() {
            count = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            items.push((idx + 1, trimmed));
        }
        Lines { items, pos: 0, eof_line: count + 1 }
    }

    fn next(&mut self, expect: &str) -> Result<(usize, &'a str), FormatError> {
        match self.items.get(self.pos) {
            Some(&(line, content)) => {
                self.pos += 1;
                Ok((line, content))
            }
            None => Err(FormatError::syntax(
                self.eof_line,
                format!("unexpected end of input, expected {expect}"),
            )),
        }
    }

    fn peek(&self) -> Option<(usize, &'a str)> {
        self.items.get(self.pos).copied()
    }

    fn at_end(&self) -> bool {
        self.pos == self.items.len()
    }
}

fn parse_fields(line: usize, content: &str, what: &str) -> Result<Vec<usize>, FormatError> {
    content
        .split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| FormatError::syntax(line, format!("bad {what} token `{tok}`")))
        })
        .collect()
}

fn parse_instance_body(lines: &mut Lines) -> Result<ProblemInstance, FormatError> {
    let (line, content) = lines.next("`instance <n> <k> <c>`")?;
    let mut toks = content.split_whitespace();
    if toks.next() != Some("instance") {
        return Err(FormatError::syntax(line, "expected `instance <n> <k> <c>`"));
    }
    let rest = parse_fields(line, &content["instance".len()..], "header")?;
    let [n, k, c] = rest[..] else {
        return Err(FormatError::syntax(line, "expected exactly three header values"));
    };
    if n > MAX_VERTEX_COUNT {
        return Err(FormatError::semantic(format!(
            "vertex count {n} exceeds supported maximum {MAX_VERTEX_COUNT}"
        )));
    }

    let (line, content) = lines.next("`cliques` line")?;
    let Some(rest) = content.strip_prefix("cliques") else {
        return Err(FormatError::syntax(line, "expected `cliques <g_0> ... <g_{n-1}>`"));
    };
    let assignment = parse_fields(line, rest, "clique id")?;
    if assignment.len() != n {
        return Err(FormatError::syntax(
            line,
            format!("expected {n} clique ids, found {}", assignment.len()),
        ));
    }

    let (line, content) = lines.next("`edges <m>`")?;
    let Some(rest) = content.strip_prefix("edges") else {
        return Err(FormatError::syntax(line, "expected `edges <m>`"));
    };
    let counts = parse_fields(line, rest, "edge count")?;
    let [m] = counts[..] else {
        return Err(FormatError::syntax(line, "expected exactly one edge count"));
    };
    if m > n.saturating_mul(n.saturating_sub(1)) {
        return Err(FormatError::semantic(format!(
            "{m} edges cannot fit in a digraph on {n} vertices"
        )));
    }
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (line, content) = lines.next("an edge line `<u> <v>`")?;
        let pair = parse_fields(line, content, "edge endpoint")?;
        let [u, v] = pair[..] else {
            return Err(FormatError::syntax(line, "expected `<u> <v>`"));
        };
        edges.push((u, v));
    }

    let (line, content) = lines.next("`pairs`")?;
    if content != "pairs" {
        return Err(FormatError::syntax(line, "expected `pairs`"));
    }
    let mut pairs = Vec::with_capacity(k);
    for _ in 0..k {
        let (line, content) = lines.next("a pair line `<s> <t>`")?;
        let pair = parse_fields(line, content, "terminal")?;
        let [s, t] = pair[..] else {
            return Err(FormatError::syntax(line, "expected `<s> <t>`"));
        };
        pairs.push((s, t));
    }

    let (line, content) = lines.next("`end`")?;
    if content != "end" {
        return Err(FormatError::syntax(line, "expected `end`"));
    }

    let digraph = Digraph::new(n, edges).map_err(|e| FormatError::semantic(e.to_string()))?;
    let partition =
        CliquePartition::new(c, assignment).map_err(|e| FormatError::semantic(e.to_string()))?;
    ProblemInstance::new(digraph, partition, pairs).map_err(|e| match e {
        InstanceError::NotSemicomplete(v) => {
            FormatError::semantic(format!("part is not semicomplete: {v}"))
        }
        other => FormatError::semantic(other.to_string()),
    })
}

pub fn parse_instance(text: &str) -> Result<ProblemInstance, FormatError> {
    let mut lines = Lines::new(text);
    let instance = parse_instance_body(&mut lines)?;
    if let Some((line, _)) = lines.peek() {
        return Err(FormatError::syntax(line, "content after final `end`"));
    }
    Ok(instance)
}

pub fn parse_bundle(text: &str) -> Result<Bundle, FormatError> {
    let mut lines = Lines::new(text);
    let instance = parse_instance_body(&mut lines)?;
    if lines.at_end() {
        return Ok(Bundle { instance, linkage: None, bset: None });
    }

    let (line, content) = lines.next("`witness`")?;
    if content != "witness" {
        return Err(FormatError::syntax(line, "expected `witness` or end of input"));
    }
    let mut paths = Vec::new();
    let mut bset: Option<BTreeSet<usize>> = None;
    loop {
        let (line, content) = lines.next("`path`, `bset` or `end`")?;
        if content == "end" {
            break;
        }
        if let Some(rest) = content.strip_prefix("path") {
            let vertices = parse_fields(line, rest, "path vertex")?;
            let path = DiPath::new(vertices)
                .map_err(|e| FormatError::semantic(format!("witness path: {e}")))?;
            paths.push(path);
        } else if let Some(rest) = content.strip_prefix("bset") {
            if bset.is_some() {
                return Err(FormatError::semantic("witness holds two bset lines"));
            }
            bset = Some(parse_fields(line, rest, "bset vertex")?.into_iter().collect());
        } else {
            return Err(FormatError::syntax(line, "expected `path`, `bset` or `end`"));
        }
    }
    if let Some((line, _)) = lines.peek() {
        return Err(FormatError::syntax(line, "content after final `end`"));
    }
    let linkage = if paths.is_empty() { None } else { Some(Linkage::new(paths)) };
    Ok(Bundle { instance, linkage, bset })
}

pub fn serialize_instance(instance: &ProblemInstance) -> String {
    let mut out = String::new();
    push_instance(&mut out, instance);
    out
}

fn push_instance(out: &mut String, instance: &ProblemInstance) {
    use std::fmt::Write;

    let g = instance.digraph();
    let p = instance.partition();
    writeln!(
        out,
        "instance {} {} {}",
        g.vertex_count(),
        instance.pair_count(),
        p.clique_count()
    )
    .unwrap();
    out.push_str("cliques");
    for v in 0..g.vertex_count() {
        write!(out, " {}", p.clique_of(v)).unwrap();
    }
    out.push('\n');
    writeln!(out, "edges {}", g.edge_count()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out.push_str("pairs\n");
    for &(s, t) in instance.pairs() {
        writeln!(out, "{s} {t}").unwrap();
    }
    out.push_str("end\n");
}

pub fn serialize_bundle(
    instance: &ProblemInstance,
    linkage: Option<&Linkage>,
    bset: Option<&BTreeSet<usize>>,
) -> String {
    use std::fmt::Write;

    let mut out = String::new();
    push_instance(&mut out, instance);
    if linkage.is_none() && bset.is_none() {
        return out;
    }
    out.push_str("witness\n");
    if let Some(linkage) = linkage {
        for member in linkage.members() {
            out.push_str("path");
            for &v in member.vertices() {
                write!(out, " {v}").unwrap();
            }
            out.push('\n');
        }
    }
    if let Some(bset) = bset {
        out.push_str("bset");
        for &v in bset {
            write!(out, " {v}").unwrap();
        }
        out.push('\n');
    }
    out.push_str("end\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const T1: &str = "\
instance 3 1 1
cliques 1 1 1
edges 3
0 1
1 2
2 0
pairs
0 2
end
";

    #[test]
    fn parse_t1() {
        let inst = parse_instance(T1).unwrap();
        assert_eq!(inst.digraph().vertex_count(), 3);
        assert_eq!(inst.pairs(), &[(0, 2)]);
        assert_eq!(inst.partition().clique_count(), 1);
    }

    #[test]
    fn serialize_then_parse_is_identity() {
        let inst = parse_instance(T1).unwrap();
        let text = serialize_instance(&inst);
        assert_eq!(parse_instance(&text).unwrap(), inst);
        assert_eq!(text, T1);
    }

    #[test]
    fn comments_and_blanks_are_skipped() {
        let text = format!("# heading\n\n{T1}# trailing comment\n");
        assert!(parse_instance(&text).is_ok());
    }

    #[test]
    fn loop_edge_is_semantic_error() {
        let text = T1.replace("0 1\n", "0 0\n");
        match parse_instance(&text).unwrap_err() {
            FormatError::Semantic(msg) => assert!(msg.contains("loop")),
            other => panic!("expected semantic error, got {other:?}"),
        }
    }

    #[test]
    fn dangling_vertex_is_semantic_error() {
        let text = T1.replace("2 0\n", "2 9\n");
        assert!(matches!(parse_instance(&text).unwrap_err(), FormatError::Semantic(_)));
    }

    #[test]
    fn missing_edge_line_is_syntax_error_with_line_number() {
        let text = "instance 3 1 1\ncliques 1 1 1\nedges 3\n0 1\n1 2\npairs\n";
        match parse_instance(text).unwrap_err() {
            FormatError::Syntax { line, .. } => assert_eq!(line, 6),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn non_semicomplete_part_is_semantic_error() {
        let text = "\
instance 3 1 1
cliques 1 1 1
edges 2
0 1
1 2
pairs
0 2
end
";
        match parse_instance(text).unwrap_err() {
            FormatError::Semantic(msg) => assert!(msg.contains("semicomplete")),
            other => panic!("expected semantic error, got {other:?}"),
        }
    }

    #[test]
    fn trailing_content_rejected() {
        let text = format!("{T1}stray\n");
        assert!(matches!(
            parse_instance(&text).unwrap_err(),
            FormatError::Syntax { line: 10, .. }
        ));
    }

    #[test]
    fn oversized_header_rejected_without_allocation() {
        let text = "instance 99999999999 1 1\n";
        assert!(parse_instance(text).is_err());
    }

    #[test]
    fn bundle_round_trip() {
        let inst = parse_instance(T1).unwrap();
        let linkage = Linkage::new(vec![DiPath::new(vec![0, 1, 2]).unwrap()]);
        let bset: BTreeSet<usize> = [0, 1].into_iter().collect();
        let text = serialize_bundle(&inst, Some(&linkage), Some(&bset));
        let bundle = parse_bundle(&text).unwrap();
        assert_eq!(bundle.instance, inst);
        assert_eq!(bundle.linkage, Some(linkage));
        assert_eq!(bundle.bset, Some(bset));
    }

    #[test]
    fn bundle_without_witness_parses() {
        let bundle = parse_bundle(T1).unwrap();
        assert!(bundle.linkage.is_none() && bundle.bset.is_none());
    }
}
