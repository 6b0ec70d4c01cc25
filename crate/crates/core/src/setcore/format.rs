//! Family file format.
//!
//! Canonical form is a JSON object `{"n": 5, "sets": [[1,2],[3,4,5]]}` with
//! strictly increasing inner lists over `1..=n` and no repeated lists. The
//! plain-text form has `n=<int>` on the first line followed by one set per
//! line as comma-separated elements; an empty line is the empty set.

use serde::Deserialize;

use super::family::Family;
use super::set::{ElementSet, GroundSet};
use crate::{Error, Result};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFamily {
    n: i64,
    sets: Vec<Vec<i64>>,
}

fn parse_error(record: Option<usize>, message: impl Into<String>) -> Error {
    Error::Parse { record, message: message.into() }
}

fn ground_from(n: i64) -> Result<GroundSet> {
    if n < 1 {
        return Err(parse_error(None, format!("n must be positive, got {n}")));
    }
    GroundSet::new(n as usize)
}

fn set_from_record(ground: GroundSet, record: usize, elems: &[i64], strict_order: bool) -> Result<ElementSet> {
    let mut bits = 0u32;
    let mut prev = 0i64;
    for &e in elems {
        if e < 1 || e as usize > ground.n() {
            return Err(parse_error(
                Some(record),
                format!("element {e} outside 1..={}", ground.n()),
            ));
        }
        if strict_order && e <= prev {
            return Err(parse_error(Some(record), "elements must be strictly increasing"));
        }
        if bits & (1 << (e - 1)) != 0 {
            return Err(parse_error(Some(record), format!("element {e} repeated")));
        }
        bits |= 1 << (e - 1);
        prev = e;
    }
    ground.set_from_mask(bits)
}

fn assemble(ground: GroundSet, sets: Vec<ElementSet>) -> Result<Family> {
    Family::new(ground, sets).map_err(|e| match e {
        Error::DuplicateSet { record, set } => parse_error(Some(record), format!("duplicate set {set}")),
        other => other,
    })
}

/// Parses either the JSON or the plain-text family format.
pub fn parse_family(text: &str) -> Result<Family> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_text(text)
    }
}

fn parse_json(text: &str) -> Result<Family> {
    let raw: RawFamily = serde_json::from_str(text).map_err(|e| parse_error(None, e.to_string()))?;
    let ground = ground_from(raw.n)?;
    let sets = raw
        .sets
        .iter()
        .enumerate()
        .map(|(i, v)| set_from_record(ground, i, v, true))
        .collect::<Result<Vec<_>>>()?;
    assemble(ground, sets)
}

fn parse_text(text: &str) -> Result<Family> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| parse_error(None, "empty input"))?;
    let n = header
        .trim()
        .strip_prefix("n=")
        .and_then(|v| v.trim().parse::<i64>().ok())
        .ok_or_else(|| parse_error(None, format!("expected header `n=<int>`, got `{header}`")))?;
    let ground = ground_from(n)?;
    let mut sets = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line.trim();
        let elems = if line.is_empty() {
            Vec::new()
        } else {
            line.split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<i64>()
                        .map_err(|_| parse_error(Some(i), format!("bad element `{}`", tok.trim())))
                })
                .collect::<Result<Vec<_>>>()?
        };
        sets.push(set_from_record(ground, i, &elems, false)?);
    }
    assemble(ground, sets)
}

/// Canonical JSON serialization; deterministic because families are stored canonically.
pub fn serialize_family(fam: &Family) -> String {
    let sets: Vec<Vec<usize>> = fam.sets().map(|s| s.to_vec()).collect();
    serde_json::json!({ "n": fam.ground().n(), "sets": sets }).to_string()
}

pub fn serialize_family_text(fam: &Family) -> String {
    let mut out = format!("n={}\n", fam.ground().n());
    for s in fam.sets() {
        let line: Vec<String> = s.elements().map(|e| e.to_string()).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_basic() {
        let fam = parse_family(r#"{"n":5,"sets":[[1,2],[3,4,5]]}"#).unwrap();
        assert_eq!(fam.ground().n(), 5);
        assert_eq!(fam.len(), 2);
        assert_eq!(serialize_family(&fam), r#"{"n":5,"sets":[[1,2],[3,4,5]]}"#);
    }

    #[test]
    fn json_duplicate_names_record() {
        let err = parse_family(r#"{"n":5,"sets":[[1,2],[2,1]]}"#).unwrap_err();
        // [2,1] is not increasing, which is caught first
        assert!(matches!(err, Error::Parse { record: Some(1), .. }), "{err}");
        let err = parse_family(r#"{"n":5,"sets":[[1,2],[1,2]]}"#).unwrap_err();
        match err {
            Error::Parse { record, message } => {
                assert_eq!(record, Some(1));
                assert!(message.contains("duplicate"));
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn json_empty_set() {
        let fam = parse_family(r#"{"n":3,"sets":[[]]}"#).unwrap();
        assert_eq!(fam.len(), 1);
        assert!(fam.sets().next().unwrap().is_empty());
    }

    #[test]
    fn json_rejects_out_of_range() {
        assert!(matches!(
            parse_family(r#"{"n":3,"sets":[[1],[4]]}"#),
            Err(Error::Parse { record: Some(1), .. })
        ));
        assert!(parse_family(r#"{"n":0,"sets":[]}"#).is_err());
        assert!(parse_family(r#"{"n":30,"sets":[]}"#).is_err());
        assert!(parse_family(r#"{"n":3,"sets":[[1]],"extra":1}"#).is_err());
        assert!(parse_family(r#"{"n":3,"sets":[[1]"#).is_err());
    }

    #[test]
    fn text_format() {
        let fam = parse_family("n=4\n1,2\n\n3, 4\n").unwrap();
        assert_eq!(fam.len(), 3);
        assert!(fam.contains_mask(0));
        assert_eq!(parse_family(&serialize_family_text(&fam)).unwrap(), fam);
        assert!(parse_family("n=4\n1,1\n").is_err());
        assert!(parse_family("m=4\n").is_err());
        assert!(matches!(parse_family("n=4\n1\nx\n"), Err(Error::Parse { record: Some(1), .. })));
    }
}
