//! Line-oriented `[section]` / `key = value` reader shared by the design,
//! budget, and dataset file formats.
//!
//! The reader is total: it never aborts on the first problem, it collects
//! located errors and returns whatever structure it could recover. `#` starts
//! a comment; blank lines are ignored; keys within one section must be
//! unique.

/// A located problem in a structured text file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TextError {
    /// 1-based line number.
    pub line: usize,
    /// 1-based column number of the offending token start.
    pub column: usize,
    pub message: String,
}

impl std::fmt::Display for TextError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

/// One `key = value` record with its location.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub key: String,
    pub value: String,
    pub line: usize,
}

/// A named section in order of appearance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub name: String,
    pub line: usize,
    pub records: Vec<Record>,
}

/// Parse outcome: recovered sections plus all located errors.
#[derive(Debug, Clone, Default)]
pub struct Parsed {
    pub sections: Vec<Section>,
    pub errors: Vec<TextError>,
}

impl Parsed {
    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&Record> {
        self.section(section)?.records.iter().find(|r| r.key == key)
    }

    pub fn is_clean(&self) -> bool {
        self.errors.is_empty()
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(idx) => &line[..idx],
        None => line,
    }
}

/// Parse `text` into sections. Duplicate section names and duplicate keys
/// within a section are reported as errors; the first occurrence wins.
pub fn parse_sections(text: &str) -> Parsed {
    let mut parsed = Parsed::default();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw_line);
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let column = raw_line.find(trimmed.chars().next().unwrap()).map(|c| c + 1).unwrap_or(1);
        if let Some(rest) = trimmed.strip_prefix('[') {
            match rest.strip_suffix(']') {
                Some(name) if !name.trim().is_empty() => {
                    let name = name.trim().to_string();
                    if parsed.sections.iter().any(|s| s.name == name) {
                        parsed.errors.push(TextError {
                            line: line_no,
                            column,
                            message: format!("duplicate section [{name}]"),
                        });
                    } else {
                        parsed.sections.push(Section { name, line: line_no, records: Vec::new() });
                    }
                }
                _ => parsed.errors.push(TextError {
                    line: line_no,
                    column,
                    message: format!("malformed section header {trimmed:?}"),
                }),
            }
            continue;
        }
        let Some(eq) = trimmed.find('=') else {
            parsed.errors.push(TextError {
                line: line_no,
                column,
                message: format!("expected `key = value`, got {trimmed:?}"),
            });
            continue;
        };
        let key = trimmed[..eq].trim().to_string();
        let value = trimmed[eq + 1..].trim().to_string();
        if key.is_empty() {
            parsed.errors.push(TextError {
                line: line_no,
                column,
                message: "record has an empty key".to_string(),
            });
            continue;
        }
        match parsed.sections.last_mut() {
            None => parsed.errors.push(TextError {
                line: line_no,
                column,
                message: format!("record {key:?} appears before any [section]"),
            }),
            Some(section) => {
                if section.records.iter().any(|r| r.key == key) {
                    parsed.errors.push(TextError {
                        line: line_no,
                        column,
                        message: format!("duplicate key {key:?} in section [{}]", section.name),
                    });
                } else {
                    section.records.push(Record { key, value, line: line_no });
                }
            }
        }
    }
    parsed
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections_and_records() {
        let text = "\n# header comment\n[alpha]\nx = 1 # trailing\ny = two words\n[beta]\nx = 3\n";
        let parsed = parse_sections(text);
        assert!(parsed.is_clean());
        assert_eq!(parsed.sections.len(), 2);
        assert_eq!(parsed.get("alpha", "x").unwrap().value, "1");
        assert_eq!(parsed.get("alpha", "y").unwrap().value, "two words");
        assert_eq!(parsed.get("beta", "x").unwrap().value, "3");
    }

    #[test]
    fn collects_all_errors_with_locations() {
        let text = "orphan = 1\n[ok]\ngood = 2\nbad line\ngood = 3\n[ok]\n";
        let parsed = parse_sections(text);
        assert_eq!(parsed.errors.len(), 4);
        assert_eq!(parsed.errors[0].line, 1);
        assert!(parsed.errors[0].message.contains("before any"));
        assert_eq!(parsed.errors[1].line, 4);
        assert_eq!(parsed.errors[2].line, 5);
        assert!(parsed.errors[2].message.contains("duplicate key"));
        assert_eq!(parsed.errors[3].line, 6);
        assert!(parsed.errors[3].message.contains("duplicate section"));
        // Recovery: the clean records are still there.
        assert_eq!(parsed.get("ok", "good").unwrap().value, "2");
    }

    #[test]
    fn empty_input_is_clean_and_empty() {
        let parsed = parse_sections("");
        assert!(parsed.is_clean());
        assert!(parsed.sections.is_empty());
    }
}
