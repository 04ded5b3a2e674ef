//! Deterministic report text. A report is ordered `key: value` lines, an
//! optional `witness` section of path lines, and an optional `hpath` section
//! of stage lines, each section closed by `end`. Identical run
//! configurations render identical bytes; timings go to stderr only. A flat
//! `key=value` mirror of the same content is rendered for machines.

use std::fmt;
use std::time::Duration;

use linkage_core::{HPath, Linkage};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    CertifiedNo,
    Inconclusive,
    /// Verification run with every selected suite clean.
    Pass,
    /// The run itself uncovered a broken invariant.
    Counterexample,
}

impl Verdict {
    pub fn exit_code(self) -> u8 {
        match self {
            Verdict::Yes | Verdict::Pass => 0,
            Verdict::CertifiedNo => 1,
            Verdict::Inconclusive => 2,
            Verdict::Counterexample => 4,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            Verdict::Yes => "yes",
            Verdict::CertifiedNo => "certified-no",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Pass => "pass",
            Verdict::Counterexample => "counterexample",
        };
        f.write_str(text)
    }
}

/// Assembled output of one command run. Keys keep insertion order so the
/// rendered text is stable.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub keys: Vec<(String, String)>,
    pub verdict: Verdict,
    pub witness: Option<Linkage>,
    pub h_path: Option<HPath>,
    /// Printed to stderr by the driver, never rendered into the report.
    pub timings: Vec<(String, Duration)>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            keys: vec![("command".into(), command.into())],
            verdict: Verdict::Inconclusive,
            witness: None,
            h_path: None,
            timings: Vec::new(),
        }
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl fmt::Display) {
        self.keys.push((key.into(), value.to_string()));
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.keys {
            out.push_str(key);
            out.push_str(": ");
            out.push_str(value);
            out.push('\n');
        }
        out.push_str(&format!("verdict: {}\n", self.verdict));
        if let Some(witness) = &self.witness {
            out.push_str("witness\n");
            for member in witness.members() {
                out.push_str("path");
                for &v in member.vertices() {
                    out.push_str(&format!(" {v}"));
                }
                out.push('\n');
            }
            out.push_str("end\n");
        }
        if let Some(h_path) = &self.h_path {
            out.push_str("hpath\n");
            for line in h_path.dump_lines() {
                out.push_str(&line);
                out.push('\n');
            }
            out.push_str("end\n");
        }
        out
    }

    pub fn render_mirror(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.keys {
            let flat: String = key
                .chars()
                .map(|ch| if ch == ' ' { '.' } else { ch })
                .collect();
            out.push_str(&format!("{flat}={value}\n"));
        }
        out.push_str(&format!("verdict={}\n", self.verdict));
        if let Some(witness) = &self.witness {
            for (i, member) in witness.members().iter().enumerate() {
                let joined: Vec<String> =
                    member.vertices().iter().map(usize::to_string).collect();
                out.push_str(&format!("witness.{i}={}\n", joined.join(" ")));
            }
        }
        if let Some(h_path) = &self.h_path {
            for (i, line) in h_path.dump_lines().iter().enumerate() {
                out.push_str(&format!("hpath.{i}={line}\n"));
            }
        }
        out
    }
}

/// One stage line of a parsed hpath section.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedStage {
    pub stage: usize,
    pub edges: Vec<(usize, usize, usize)>,
    pub d: Vec<usize>,
}

/// Structured view of a report file, sufficient to reload a witness and
/// re-validate it against its instance.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ParsedReport {
    pub keys: Vec<(String, String)>,
    pub witness_paths: Vec<Vec<usize>>,
    pub stages: Vec<ParsedStage>,
}

impl ParsedReport {
    pub fn value(&self, key: &str) -> Option<&str> {
        self.keys
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ReportParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ReportParseError {}

fn err(line: usize, message: impl Into<String>) -> ReportParseError {
    ReportParseError { line, message: message.into() }
}

fn parse_stage_line(line_no: usize, rest: &str) -> Result<ParsedStage, ReportParseError> {
    let mut tokens = rest.split_whitespace();
    let stage = tokens
        .next()
        .ok_or_else(|| err(line_no, "stage line missing index"))?
        .parse::<usize>()
        .map_err(|_| err(line_no, "stage index is not a number"))?;
    if tokens.next() != Some("Y") {
        return Err(err(line_no, "stage line missing Y marker"));
    }
    let rest: Vec<&str> = tokens.collect();
    let d_at = rest
        .iter()
        .position(|&t| t == "D")
        .ok_or_else(|| err(line_no, "stage line missing D marker"))?;
    let (edge_tokens, d_tokens) = rest.split_at(d_at);
    if edge_tokens.len() % 3 != 0 {
        return Err(err(line_no, "edge list is not triples"));
    }
    let mut edges = Vec::new();
    for triple in edge_tokens.chunks(3) {
        let parse = |t: &str| {
            t.parse::<usize>()
                .map_err(|_| err(line_no, "edge token is not a number"))
        };
        edges.push((parse(triple[0])?, parse(triple[1])?, parse(triple[2])?));
    }
    let mut d = Vec::new();
    for token in &d_tokens[1..] {
        d.push(
            token
                .parse::<usize>()
                .map_err(|_| err(line_no, "D token is not a number"))?,
        );
    }
    Ok(ParsedStage { stage, edges, d })
}

/// Parses rendered report text back into its structured parts. Accepts any
/// key order, skips blank lines, and rejects malformed sections; never
/// panics on arbitrary input.
pub fn parse_report(text: &str) -> Result<ParsedReport, ReportParseError> {
    enum Section {
        Top,
        Witness,
        HPath,
    }

    let mut report = ParsedReport::default();
    let mut section = Section::Top;
    let mut seen_witness = false;
    let mut seen_hpath = false;

    for (index, raw) in text.lines().enumerate() {
        let line_no = index + 1;
        let line = raw.trim_end();
        if line.is_empty() {
            continue;
        }
        match section {
            Section::Top => {
                if line == "witness" {
                    if seen_witness {
                        return Err(err(line_no, "duplicate witness section"));
                    }
                    seen_witness = true;
                    section = Section::Witness;
                } else if line == "hpath" {
                    if seen_hpath {
                        return Err(err(line_no, "duplicate hpath section"));
                    }
                    seen_hpath = true;
                    section = Section::HPath;
                } else if let Some((key, value)) = line.split_once(": ") {
                    if key.is_empty() {
                        return Err(err(line_no, "empty key"));
                    }
                    report.keys.push((key.to_string(), value.to_string()));
                } else {
                    return Err(err(line_no, "expected key: value or a section header"));
                }
            }
            Section::Witness => {
                if line == "end" {
                    section = Section::Top;
                } else if let Some(rest) = line.strip_prefix("path ") {
                    let mut vertices = Vec::new();
                    for token in rest.split_whitespace() {
                        vertices.push(
                            token
                                .parse::<usize>()
                                .map_err(|_| err(line_no, "path token is not a number"))?,
                        );
                    }
                    if vertices.is_empty() {
                        return Err(err(line_no, "empty path line"));
                    }
                    report.witness_paths.push(vertices);
                } else {
                    return Err(err(line_no, "expected path line or end"));
                }
            }
            Section::HPath => {
                if line == "end" {
                    section = Section::Top;
                } else if let Some(rest) = line.strip_prefix("stage ") {
                    report.stages.push(parse_stage_line(line_no, rest)?);
                } else {
                    return Err(err(line_no, "expected stage line or end"));
                }
            }
        }
    }
    match section {
        Section::Top => Ok(report),
        Section::Witness | Section::HPath => {
            Err(err(text.lines().count(), "unterminated section"))
        }
    }
}

/// Renders a parsed report back to report text. Inverse of `parse_report`
/// up to blank lines and trailing whitespace.
pub fn render_parsed(report: &ParsedReport) -> String {
    let mut out = String::new();
    for (key, value) in &report.keys {
        out.push_str(&format!("{key}: {value}\n"));
    }
    if !report.witness_paths.is_empty() {
        out.push_str("witness\n");
        for path in &report.witness_paths {
            let joined: Vec<String> = path.iter().map(usize::to_string).collect();
            out.push_str(&format!("path {}\n", joined.join(" ")));
        }
        out.push_str("end\n");
    }
    if !report.stages.is_empty() {
        out.push_str("hpath\n");
        for stage in &report.stages {
            out.push_str(&format!("stage {} Y", stage.stage));
            for (tail, head, colour) in &stage.edges {
                out.push_str(&format!(" {tail} {head} {colour}"));
            }
            out.push_str(" D");
            for v in &stage.d {
                out.push_str(&format!(" {v}"));
            }
            out.push('\n');
        }
        out.push_str("end\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_renders_and_parses_round_trip() {
        let mut report = RunReport::new("solve");
        report.push("input", "t1.inst");
        report.push("mode", "powerset");
        report.verdict = Verdict::Yes;
        let text = report.render();
        let parsed = parse_report(&text).unwrap();
        assert_eq!(parsed.value("command"), Some("solve"));
        assert_eq!(parsed.value("verdict"), Some("yes"));
        assert_eq!(render_parsed(&parsed), text);
    }

    #[test]
    fn witness_and_hpath_sections_round_trip() {
        let text = "command: solve\nverdict: yes\nwitness\npath 0 1 2\nend\nhpath\nstage 0 Y 0 1 1 D 0\nstage 1 Y 1 2 1 D 0 1\nend\n";
        let parsed = parse_report(text).unwrap();
        assert_eq!(parsed.witness_paths, vec![vec![0, 1, 2]]);
        assert_eq!(
            parsed.stages,
            vec![
                ParsedStage { stage: 0, edges: vec![(0, 1, 1)], d: vec![0] },
                ParsedStage { stage: 1, edges: vec![(1, 2, 1)], d: vec![0, 1] },
            ]
        );
        assert_eq!(render_parsed(&parsed), text);
    }

    #[test]
    fn malformed_reports_are_rejected() {
        assert!(parse_report("witness\npath 0 1\n").is_err());
        assert!(parse_report("not a key line\n").is_err());
        assert!(parse_report("witness\npath x\nend\n").is_err());
        assert!(parse_report("hpath\nstage 0 Y 0 1 D 0\nend\n").is_err());
        assert!(parse_report("hpath\nstage 0 Y 0 1 1\nend\n").is_err());
        assert!(parse_report("witness\nend\nwitness\nend\n").is_err());
    }

    #[test]
    fn mirror_flattens_keys_and_sections() {
        let mut report = RunReport::new("verify");
        report.push("suite wiggle", "500 cases, 0 counterexamples");
        report.verdict = Verdict::Pass;
        let mirror = report.render_mirror();
        assert!(mirror.contains("suite.wiggle=500 cases, 0 counterexamples\n"));
        assert!(mirror.ends_with("verdict=pass\n"));
    }
}
