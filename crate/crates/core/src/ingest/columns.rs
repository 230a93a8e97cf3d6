use csv::StringRecord;

use super::IngestError;

/// Lowercase with everything but ASCII alphanumerics removed, so that
/// "Adj Close", "adj_close" and "ADJ-CLOSE" compare equal.
fn normalize(name: &str) -> String {
    name.chars()
        .filter(char::is_ascii_alphanumeric)
        .map(|c| c.to_ascii_lowercase())
        .collect()
}

/// Header lookup by normalized name.
pub(crate) struct Columns {
    names: Vec<String>,
}

impl Columns {
    pub(crate) fn new(headers: &StringRecord) -> Self {
        Self {
            names: headers.iter().map(normalize).collect(),
        }
    }

    /// Index of the first column matching any alias.
    pub(crate) fn find(&self, aliases: &[&str]) -> Option<usize> {
        aliases
            .iter()
            .find_map(|a| self.names.iter().position(|n| *n == normalize(a)))
    }

    /// Like [`find`](Self::find), but a missing column is a schema error naming `aliases[0]`.
    pub(crate) fn require(&self, aliases: &[&str]) -> Result<usize, IngestError> {
        self.find(aliases).ok_or_else(|| IngestError::Schema {
            column: aliases[0].to_string(),
        })
    }
}

pub(crate) fn line_of(record: &StringRecord) -> u64 {
    record.position().map(|p| p.line()).unwrap_or(0)
}

pub(crate) fn field<'r>(record: &'r StringRecord, idx: usize, line: u64) -> Result<&'r str, IngestError> {
    record
        .get(idx)
        .ok_or_else(|| IngestError::row(line, format!("missing field {}", idx + 1)))
}

pub(crate) fn parse_f64(record: &StringRecord, idx: usize, line: u64, what: &str) -> Result<f64, IngestError> {
    let raw = field(record, idx, line)?.trim();
    let v: f64 = raw
        .parse()
        .map_err(|_| IngestError::row(line, format!("{what}: {raw:?} is not a number")))?;
    if !v.is_finite() {
        return Err(IngestError::row(line, format!("{what}: {raw:?} is not finite")));
    }
    Ok(v)
}

/// Non-negative integer; integral float spellings such as `53868000.0` are accepted.
pub(crate) fn parse_count(raw: &str, line: u64, what: &str) -> Result<u64, IngestError> {
    let raw = raw.trim();
    if let Ok(v) = raw.parse::<u64>() {
        return Ok(v);
    }
    match raw.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.fract() == 0.0 && v < 2f64.powi(63) => Ok(v as u64),
        _ => Err(IngestError::row(
            line,
            format!("{what}: {raw:?} is not a non-negative integer"),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_matching_ignores_case_and_separators() {
        let cols = Columns::new(&StringRecord::from(vec!["", "DATE", "Adj Close", "stock_name"]));
        assert_eq!(cols.find(&["adj_close"]), Some(2));
        assert_eq!(cols.find(&["Stock Name"]), Some(3));
        assert_eq!(cols.find(&["date"]), Some(1));
        assert!(matches!(cols.require(&["volume"]), Err(IngestError::Schema { column }) if column == "volume"));
    }

    #[test]
    fn counts() {
        assert_eq!(parse_count("12", 1, "v").unwrap(), 12);
        assert_eq!(parse_count("53868000.0", 1, "v").unwrap(), 53_868_000);
        assert!(parse_count("-1", 1, "v").is_err());
        assert!(parse_count("1.5", 1, "v").is_err());
    }
}
