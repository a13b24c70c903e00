//! `{slot}` templates checked against a fixed slot set at construction.

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TemplateError {
    #[error("unknown slot {{{0}}}")]
    UnknownSlot(String),
    #[error("unterminated slot starting at byte {0}")]
    Unterminated(usize),
}

#[derive(Debug, Clone, PartialEq)]
enum Segment {
    Text(String),
    Slot(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Template {
    source: String,
    segments: Vec<Segment>,
}

impl Template {
    pub fn parse(source: &str, allowed: &[&str]) -> Result<Self, TemplateError> {
        let mut segments = Vec::new();
        let mut rest = source;
        let mut offset = 0;
        while let Some(open) = rest.find('{') {
            if open > 0 {
                segments.push(Segment::Text(rest[..open].to_string()));
            }
            let close = rest[open..]
                .find('}')
                .ok_or(TemplateError::Unterminated(offset + open))?;
            let name = &rest[open + 1..open + close];
            if !allowed.contains(&name) {
                return Err(TemplateError::UnknownSlot(name.to_string()));
            }
            segments.push(Segment::Slot(name.to_string()));
            offset += open + close + 1;
            rest = &rest[open + close + 1..];
        }
        if !rest.is_empty() {
            segments.push(Segment::Text(rest.to_string()));
        }
        Ok(Self {
            source: source.to_string(),
            segments,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Fills every slot; slots missing from `values` render empty.
    pub fn render(&self, values: &[(&str, &str)]) -> String {
        self.segments
            .iter()
            .map(|s| match s {
                Segment::Text(t) => t.as_str(),
                Segment::Slot(name) => values.iter().find(|(k, _)| k == name).map_or("", |(_, v)| v),
            })
            .collect()
    }
}
