use std::collections::BTreeMap;

use super::StatsError;

/// Human preference and acceptability annotations.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct HumanJudgments {
    /// +1 prefers the first parser's graph, -1 the second, 0 neither.
    pub preferences: BTreeMap<String, i8>,
    /// Keyed by (item id, parser id).
    pub acceptability: BTreeMap<(String, String), bool>,
    pub rationales: BTreeMap<String, String>,
}

/// Data rows of a TSV with a required header; `#` lines and blank lines skipped.
fn rows(text: &str) -> Result<Vec<(usize, Vec<&str>)>, StatsError> {
    let mut out = Vec::new();
    let mut header = false;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        if !header {
            header = true;
            continue;
        }
        out.push((i + 1, line.split('\t').map(str::trim).collect()));
    }
    if !header {
        return Err(StatsError::Annotation {
            line: 1,
            message: "missing header line".into(),
        });
    }
    Ok(out)
}

fn bad(line: usize, message: impl Into<String>) -> StatsError {
    StatsError::Annotation {
        line,
        message: message.into(),
    }
}

/// Parses `id<TAB>label<TAB>rationale?` rows with labels in {-1, 0, 1}.
pub fn parse_preferences(text: &str, into: &mut HumanJudgments) -> Result<(), StatsError> {
    for (line, cols) in rows(text)? {
        if cols.len() < 2 || cols[0].is_empty() {
            return Err(bad(line, "expected id and label"));
        }
        let label: i8 = match cols[1] {
            "1" | "+1" => 1,
            "0" => 0,
            "-1" => -1,
            other => return Err(bad(line, format!("preference label {other:?} not in {{-1, 0, 1}}"))),
        };
        if into.preferences.insert(cols[0].to_string(), label).is_some() {
            return Err(bad(line, format!("duplicate id {:?}", cols[0])));
        }
        if let Some(r) = cols.get(2).filter(|r| !r.is_empty()) {
            into.rationales.insert(cols[0].to_string(), r.to_string());
        }
    }
    Ok(())
}

/// Parses `id<TAB>parser<TAB>label` rows with labels in {0, 1}.
pub fn parse_acceptability(text: &str, into: &mut HumanJudgments) -> Result<(), StatsError> {
    for (line, cols) in rows(text)? {
        if cols.len() < 3 || cols[0].is_empty() || cols[1].is_empty() {
            return Err(bad(line, "expected id, parser and label"));
        }
        let ok = match cols[2] {
            "1" | "+1" => true,
            "0" => false,
            other => return Err(bad(line, format!("acceptability label {other:?} not in {{0, 1}}"))),
        };
        let key = (cols[0].to_string(), cols[1].to_string());
        if into.acceptability.insert(key, ok).is_some() {
            return Err(bad(line, format!("duplicate row for {:?}/{:?}", cols[0], cols[1])));
        }
    }
    Ok(())
}
