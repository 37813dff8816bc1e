//! Readers for Mulan-style ARFF + XML pairs and plain CSV files, plus a CSV writer.
//!
//! Missing values (`?`) are rejected, as are sparse ARFF rows.

use std::collections::HashSet;
use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use crate::data::{render_value, Attribute, AttributeKind, Dataset, Instance, LabelVector, Value};
use crate::error::{Error, Result};

/// Loads an ARFF file and the Mulan XML file naming its label attributes.
///
/// Label attributes keep their ARFF order; every other attribute becomes a feature.
pub fn load_mulan(arff_path: impl AsRef<Path>, xml_path: impl AsRef<Path>) -> Result<Dataset> {
    let arff_path = arff_path.as_ref();
    let xml_path = xml_path.as_ref();
    let arff = fs::read_to_string(arff_path).map_err(|e| Error::io(arff_path, e))?;
    let xml = fs::read_to_string(xml_path).map_err(|e| Error::io(xml_path, e))?;
    let labels = parse_mulan_xml(&xml)?;
    parse_arff(&arff, &labels)
}

/// Loads an ARFF file without label metadata: every attribute is a feature.
pub fn load_arff_features(arff_path: impl AsRef<Path>) -> Result<Dataset> {
    let arff_path = arff_path.as_ref();
    let arff = fs::read_to_string(arff_path).map_err(|e| Error::io(arff_path, e))?;
    parse_arff(&arff, &[])
}

/// Label names from a Mulan XML document: the `name` attribute of every element
/// that carries one, in document order.
pub fn parse_mulan_xml(text: &str) -> Result<Vec<String>> {
    let doc = roxmltree::Document::parse(text)
        .map_err(|e| Error::parse(e.pos().row as usize, format!("invalid XML: {e}")))?;
    let mut names = Vec::new();
    let mut seen = HashSet::new();
    for node in doc.descendants().filter(|n| n.is_element()) {
        if let Some(name) = node.attribute("name") {
            if !seen.insert(name.to_string()) {
                return Err(Error::Schema(format!("label '{name}' listed twice in XML")));
            }
            names.push(name.to_string());
        }
    }
    Ok(names)
}

struct RawAttribute {
    name: String,
    kind: AttributeKind,
}

/// Parses ARFF text; attributes named in `label_names` become labels.
pub fn parse_arff(text: &str, label_names: &[String]) -> Result<Dataset> {
    let mut attrs: Vec<RawAttribute> = Vec::new();
    let mut rows: Vec<(usize, Vec<String>)> = Vec::new();
    let mut in_data = false;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if in_data {
            if line.starts_with('{') {
                return Err(Error::parse(lineno, "sparse ARFF rows are not supported"));
            }
            let cells = split_arff_row(line).map_err(|m| Error::parse(lineno, m))?;
            rows.push((lineno, cells));
            continue;
        }
        let lower = line.to_ascii_lowercase();
        if lower.starts_with("@relation") {
            continue;
        } else if lower.starts_with("@attribute") {
            let rest = line["@attribute".len()..].trim_start();
            let (name, tail) = take_token(rest).map_err(|m| Error::parse(lineno, m))?;
            let tail = tail.trim();
            let kind = if tail.starts_with('{') {
                let close = tail
                    .rfind('}')
                    .ok_or_else(|| Error::parse(lineno, "unterminated nominal value list"))?;
                let values = split_arff_row(&tail[1..close]).map_err(|m| Error::parse(lineno, m))?;
                let values: Vec<String> = values.into_iter().filter(|v| !v.is_empty()).collect();
                match Attribute::nominal(name.clone(), values) {
                    Ok(a) => a.kind,
                    Err(Error::Schema(msg)) => return Err(Error::parse(lineno, msg)),
                    Err(e) => return Err(e),
                }
            } else {
                match tail.to_ascii_lowercase().as_str() {
                    "numeric" | "real" | "integer" => AttributeKind::Numeric,
                    other => {
                        return Err(Error::parse(
                            lineno,
                            format!("unsupported attribute type '{other}'"),
                        ))
                    }
                }
            };
            attrs.push(RawAttribute { name, kind });
        } else if lower.starts_with("@data") {
            in_data = true;
        } else {
            return Err(Error::parse(lineno, format!("unexpected header line '{line}'")));
        }
    }

    let mut label_pos = Vec::with_capacity(label_names.len());
    for name in label_names {
        let pos = attrs
            .iter()
            .position(|a| &a.name == name)
            .ok_or_else(|| Error::Schema(format!("label '{name}' not found among ARFF attributes")))?;
        label_pos.push(pos);
    }
    label_pos.sort_unstable();
    let is_label: Vec<bool> = (0..attrs.len()).map(|i| label_pos.contains(&i)).collect();

    let schema: Vec<Attribute> = attrs
        .iter()
        .zip(&is_label)
        .filter(|(_, &l)| !l)
        .map(|(a, _)| Attribute {
            name: a.name.clone(),
            kind: a.kind.clone(),
        })
        .collect();
    let ordered_labels: Vec<String> = label_pos.iter().map(|&p| attrs[p].name.clone()).collect();

    let mut instances = Vec::with_capacity(rows.len());
    for (lineno, cells) in rows {
        if cells.len() != attrs.len() {
            return Err(Error::parse(
                lineno,
                format!("{} values, expected {}", cells.len(), attrs.len()),
            ));
        }
        let mut values = Vec::with_capacity(schema.len());
        let mut labels = Vec::with_capacity(ordered_labels.len());
        for (pos, cell) in cells.iter().enumerate() {
            let attr = &attrs[pos];
            if cell == "?" {
                return Err(Error::Value(format!(
                    "line {lineno}: missing value for '{}' is not supported",
                    attr.name
                )));
            }
            if is_label[pos] {
                labels.push(parse_label_cell(cell).ok_or_else(|| {
                    Error::Value(format!(
                        "line {lineno}: label '{}' has non-binary value '{cell}'",
                        attr.name
                    ))
                })?);
            } else {
                values.push(match &attr.kind {
                    AttributeKind::Numeric => {
                        let x: f64 = cell.parse().map_err(|_| {
                            Error::parse(lineno, format!("'{cell}' is not numeric ({})", attr.name))
                        })?;
                        if !x.is_finite() {
                            return Err(Error::parse(lineno, format!("non-finite value '{cell}'")));
                        }
                        Value::Numeric(x)
                    }
                    AttributeKind::Nominal(list) => {
                        let i = list.iter().position(|v| v == cell).ok_or_else(|| {
                            Error::parse(
                                lineno,
                                format!("'{cell}' is not a declared value of '{}'", attr.name),
                            )
                        })?;
                        Value::Nominal(i as u32)
                    }
                });
            }
        }
        instances.push(Instance {
            values,
            labels: LabelVector::new(labels),
        });
    }
    Dataset::new(schema, ordered_labels, instances)
}

fn parse_label_cell(cell: &str) -> Option<bool> {
    match cell.trim() {
        "0" => Some(false),
        "1" => Some(true),
        other => match other.parse::<f64>() {
            Ok(x) if x == 0.0 => Some(false),
            Ok(x) if x == 1.0 => Some(true),
            _ => None,
        },
    }
}

/// Reads one possibly quoted token, returning it and the remaining text.
fn take_token(s: &str) -> std::result::Result<(String, &str), String> {
    let s = s.trim_start();
    let mut chars = s.char_indices();
    match chars.next() {
        None => Err("missing attribute name".into()),
        Some((_, q @ ('\'' | '"'))) => {
            let mut out = String::new();
            let mut escaped = false;
            for (i, c) in chars {
                if escaped {
                    out.push(c);
                    escaped = false;
                } else if c == '\\' {
                    escaped = true;
                } else if c == q {
                    return Ok((out, &s[i + c.len_utf8()..]));
                } else {
                    out.push(c);
                }
            }
            Err("unterminated quoted name".into())
        }
        Some(_) => {
            let end = s
                .find(|c: char| c.is_whitespace() || c == '{')
                .unwrap_or(s.len());
            Ok((s[..end].to_string(), &s[end..]))
        }
    }
}

/// Splits a comma separated ARFF row, honoring single and double quotes.
fn split_arff_row(line: &str) -> std::result::Result<Vec<String>, String> {
    let mut cells = Vec::new();
    let mut cur = String::new();
    let mut quote: Option<char> = None;
    let mut was_quoted = false;
    let mut escaped = false;
    for c in line.chars() {
        if let Some(q) = quote {
            if escaped {
                cur.push(c);
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == q {
                quote = None;
            } else {
                cur.push(c);
            }
            continue;
        }
        match c {
            '\'' | '"' if cur.trim().is_empty() => {
                cur.clear();
                quote = Some(c);
                was_quoted = true;
            }
            ',' => {
                cells.push(finish_cell(&cur, was_quoted));
                cur.clear();
                was_quoted = false;
            }
            _ => cur.push(c),
        }
    }
    if quote.is_some() {
        return Err("unterminated quote".into());
    }
    cells.push(finish_cell(&cur, was_quoted));
    Ok(cells)
}

fn finish_cell(cur: &str, quoted: bool) -> String {
    if quoted {
        cur.trim_end().to_string()
    } else {
        cur.trim().to_string()
    }
}

/// Loads a CSV file whose last `label_count` columns are {0,1} labels.
pub fn load_csv(path: impl AsRef<Path>, label_count: usize) -> Result<Dataset> {
    if label_count == 0 {
        return Err(Error::Config("label count must be positive".into()));
    }
    load_csv_with_labels(path, label_count)
}

/// Like [`load_csv`] but also accepts `label_count == 0` for feature-only files.
pub fn load_csv_with_labels(path: impl AsRef<Path>, label_count: usize) -> Result<Dataset> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv(file, label_count)
}

pub fn read_csv<R: Read>(reader: R, label_count: usize) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(|h| h.trim().to_string()).collect();
    // Equality is allowed: a file may consist of label columns only.
    if label_count > header.len() {
        return Err(Error::Config(format!(
            "label count {label_count} exceeds the {} columns",
            header.len()
        )));
    }
    let feature_count = header.len() - label_count;
    let mut rows: Vec<(usize, Vec<String>)> = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        // header is line 1
        let lineno = rec.position().map(|p| p.line() as usize).unwrap_or(i + 2);
        let cells: Vec<String> = rec.iter().map(|c| c.trim().to_string()).collect();
        if cells.len() != header.len() {
            return Err(Error::parse(
                lineno,
                format!("{} cells, header has {}", cells.len(), header.len()),
            ));
        }
        if let Some(pos) = cells.iter().position(|c| c == "?" || c.is_empty()) {
            return Err(Error::Value(format!(
                "line {lineno}: missing value in column '{}' is not supported",
                header[pos]
            )));
        }
        rows.push((lineno, cells));
    }

    let mut schema = Vec::with_capacity(feature_count);
    for (col, name) in header.iter().take(feature_count).enumerate() {
        let numeric = rows
            .iter()
            .all(|(_, r)| r[col].parse::<f64>().map(f64::is_finite).unwrap_or(false));
        if numeric && !rows.is_empty() {
            schema.push(Attribute::numeric(name.clone()));
        } else {
            let mut values: Vec<String> = Vec::new();
            for (_, r) in &rows {
                if !values.contains(&r[col]) {
                    values.push(r[col].clone());
                }
            }
            if values.is_empty() {
                // no rows: nothing to infer from
                schema.push(Attribute::numeric(name.clone()));
            } else {
                schema.push(Attribute::nominal(name.clone(), values)?);
            }
        }
    }

    let mut instances = Vec::with_capacity(rows.len());
    for (lineno, cells) in &rows {
        let values = schema
            .iter()
            .zip(cells)
            .map(|(attr, cell)| match &attr.kind {
                AttributeKind::Numeric => Value::Numeric(cell.parse().unwrap()),
                AttributeKind::Nominal(_) => Value::Nominal(attr.value_index(cell).unwrap()),
            })
            .collect();
        let mut labels = Vec::with_capacity(label_count);
        for (name, cell) in header[feature_count..].iter().zip(&cells[feature_count..]) {
            labels.push(match cell.as_str() {
                "0" => false,
                "1" => true,
                _ => {
                    return Err(Error::Value(format!(
                        "line {lineno}: label '{name}' has non-binary value '{cell}'"
                    )))
                }
            });
        }
        instances.push(Instance {
            values,
            labels: LabelVector::new(labels),
        });
    }
    Dataset::new(schema, header[feature_count..].to_vec(), instances)
}

/// Writes features then labels, with a header row.
pub fn write_csv<W: Write>(ds: &Dataset, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let header: Vec<&str> = ds
        .schema()
        .iter()
        .map(|a| a.name.as_str())
        .chain(ds.label_names().iter().map(String::as_str))
        .collect();
    w.write_record(&header)?;
    for inst in ds.instances() {
        let mut record: Vec<String> = ds
            .schema()
            .iter()
            .zip(&inst.values)
            .map(|(a, &v)| render_value(a, v))
            .collect();
        record.extend(inst.labels.bits().iter().map(|&b| if b { "1" } else { "0" }.to_string()));
        w.write_record(&record)?;
    }
    w.flush().map_err(|e| Error::io("<csv writer>", e))?;
    Ok(())
}

pub fn save_csv(ds: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv(ds, file)
}

#[cfg(test)]
mod tests {
    use super::*;

    const ARFF: &str = "% comment\n@RELATION toy\n\n@attribute colour {red,'dark blue'}\n@ATTRIBUTE size numeric\n@attribute tag {0,1}\n@data\nred,1.5,1\n'dark blue',2,0\n";

    #[test]
    fn splits_schema_and_labels() {
        let ds = parse_arff(ARFF, &["tag".to_string()]).unwrap();
        assert_eq!(ds.schema().len(), 2);
        assert_eq!(ds.label_count(), 1);
        assert_eq!(ds.len(), 2);
        assert_eq!(ds.instance(1).values[0], Value::Nominal(1));
        assert!(ds.truth(0, 0));
        assert!(!ds.truth(1, 0));
    }

    #[test]
    fn empty_data_section() {
        let text = "@relation r\n@attribute a numeric\n@attribute l {0,1}\n@data\n";
        let ds = parse_arff(text, &["l".to_string()]).unwrap();
        assert_eq!(ds.len(), 0);
        assert_eq!(ds.schema().len(), 1);
    }

    #[test]
    fn arff_errors() {
        let bad_line = "@relation r\n@attribute a numeric\n@attribute l {0,1}\n@data\n1,0\n2\n";
        match parse_arff(bad_line, &["l".to_string()]) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 6),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matches!(
            parse_arff(ARFF, &["nope".to_string()]),
            Err(Error::Schema(_))
        ));
        let nonbinary = "@relation r\n@attribute a numeric\n@attribute l {0,1,2}\n@data\n1,2\n";
        assert!(matches!(
            parse_arff(nonbinary, &["l".to_string()]),
            Err(Error::Value(_))
        ));
        let missing = "@relation r\n@attribute a numeric\n@attribute l {0,1}\n@data\n?,1\n";
        assert!(matches!(
            parse_arff(missing, &["l".to_string()]),
            Err(Error::Value(_))
        ));
    }

    #[test]
    fn mulan_xml_names() {
        let xml = r#"<?xml version="1.0" encoding="utf-8"?>
<labels xmlns="http://mulan.sourceforge.net/labels">
<label name="red"></label><label name="green"></label>
</labels>"#;
        assert_eq!(parse_mulan_xml(xml).unwrap(), vec!["red", "green"]);
    }

    #[test]
    fn csv_schema_inference() {
        let text = "x,c,l1,l2\n1,a,0,1\n2.5,b,1,1\n3,a,0,0\n";
        let ds = read_csv(text.as_bytes(), 2).unwrap();
        assert_eq!(ds.schema().len(), 2);
        assert_eq!(ds.label_count(), 2);
        assert!(ds.schema()[0].is_numeric());
        assert_eq!(
            ds.schema()[1].kind,
            AttributeKind::Nominal(vec!["a".into(), "b".into()])
        );
    }

    #[test]
    fn csv_errors() {
        let text = "x,l\n1,0\n";
        assert!(matches!(read_csv(text.as_bytes(), 3), Err(Error::Config(_))));
        let text = "x,l\n1,2\n";
        assert!(matches!(read_csv(text.as_bytes(), 1), Err(Error::Value(_))));
    }

    #[test]
    fn csv_round_trip() {
        let text = "x,c,l1,l2\n1,\"a, quoted\",0,1\n2.5,b,1,1\n-3,a,0,0\n";
        let ds = read_csv(text.as_bytes(), 2).unwrap();
        let mut buf = Vec::new();
        write_csv(&ds, &mut buf).unwrap();
        let again = read_csv(buf.as_slice(), 2).unwrap();
        assert_eq!(ds, again);
    }
}
