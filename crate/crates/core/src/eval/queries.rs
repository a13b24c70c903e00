use std::collections::BTreeSet;
use std::fmt;
use std::io::BufRead;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::EvalError;

const BUNDLED_QUERIES: &str = include_str!("../../resources/evaluation_queries.jsonl");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum QueryStyle {
    /// Worded to pull in slanted coverage.
    #[serde(rename = "bias")]
    BiasEliciting,
    #[serde(rename = "neutral")]
    Neutral,
}

impl QueryStyle {
    pub const ALL: [QueryStyle; 2] = [QueryStyle::BiasEliciting, QueryStyle::Neutral];

    pub fn as_str(self) -> &'static str {
        match self {
            QueryStyle::BiasEliciting => "bias",
            QueryStyle::Neutral => "neutral",
        }
    }
}

impl fmt::Display for QueryStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryCase {
    pub query_id: String,
    pub text: String,
    pub style: QueryStyle,
}

/// Reads a JSON Lines query file. Blank lines are skipped; errors carry the
/// 1-based line number.
pub fn parse_queries(reader: impl BufRead) -> Result<Vec<QueryCase>, EvalError> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| EvalError::Io(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let case: QueryCase = serde_json::from_str(&line).map_err(|e| EvalError::Queries {
            line: line_no,
            reason: e.to_string(),
        })?;
        if case.query_id.is_empty() || case.text.trim().is_empty() {
            return Err(EvalError::Queries {
                line: line_no,
                reason: "query_id and text must be non-empty".into(),
            });
        }
        if !seen.insert(case.query_id.clone()) {
            return Err(EvalError::Queries {
                line: line_no,
                reason: format!("duplicate query_id {:?}", case.query_id),
            });
        }
        out.push(case);
    }
    Ok(out)
}

pub fn read_queries(path: &Path) -> Result<Vec<QueryCase>, EvalError> {
    let file = std::fs::File::open(path).map_err(|e| EvalError::Io(format!("{}: {e}", path.display())))?;
    parse_queries(std::io::BufReader::new(file))
}

/// The 40 evaluation queries: 20 worded to elicit biased coverage, 20 neutral.
pub fn bundled_queries() -> Vec<QueryCase> {
    parse_queries(BUNDLED_QUERIES.as_bytes()).expect("bundled query file is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_queries_split_evenly() {
        let qs = bundled_queries();
        assert_eq!(qs.len(), 40);
        let biased = qs.iter().filter(|q| q.style == QueryStyle::BiasEliciting).count();
        assert_eq!(biased, 20);
        assert!(qs[..20].iter().all(|q| q.style == QueryStyle::BiasEliciting));
        assert_eq!(qs[0].query_id, "q01");
    }

    #[test]
    fn bad_line_reports_number() {
        let src = "{\"query_id\":\"a\",\"text\":\"t\",\"style\":\"bias\"}\n\n{oops\n";
        match parse_queries(src.as_bytes()) {
            Err(EvalError::Queries { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_style_and_duplicates_rejected() {
        let src = "{\"query_id\":\"a\",\"text\":\"t\",\"style\":\"loud\"}";
        assert!(matches!(parse_queries(src.as_bytes()), Err(EvalError::Queries { line: 1, .. })));
        let src = "{\"query_id\":\"a\",\"text\":\"t\",\"style\":\"bias\"}\n{\"query_id\":\"a\",\"text\":\"u\",\"style\":\"neutral\"}";
        assert!(matches!(parse_queries(src.as_bytes()), Err(EvalError::Queries { line: 2, .. })));
    }
}
