//! The character-table text format: `#` comments, then GROUP, CLASSES,
//! ORDERS, CENTRALIZERS, FLAGS, TORI, UNIPOTENT_ROWS headers and one
//! `ROW <name>: v1 v2 ...` line per irreducible. Values are integers, `.`
//! for zero, or sums of `c*E(n)^k` terms.
//!
//! Tables are verified on load (exact orthogonality against the centralizer
//! orders) and serialize back to the same content up to whitespace.

use crate::chartab::{verify_table, CharacterTable, ClassType};
use crate::cyclotomic::Cyc;
use crate::error::{Error, Result};

pub fn parse_character_table(text: &str) -> Result<CharacterTable> {
    let mut group = String::new();
    let mut class_names: Vec<String> = Vec::new();
    let mut orders: Vec<u64> = Vec::new();
    let mut centralizers: Vec<u128> = Vec::new();
    let mut flags: Vec<ClassType> = Vec::new();
    let mut tori: Vec<Vec<String>> = Vec::new();
    let mut unip_rows: Vec<String> = Vec::new();
    let mut rows: Vec<(String, Vec<Cyc>)> = Vec::new();
    for (ln0, raw) in text.lines().enumerate() {
        let ln = ln0 + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |msg: &str| Error::Parse {
            line: ln,
            msg: msg.into(),
        };
        if let Some(rest) = line.strip_prefix("GROUP ") {
            group = rest.trim().to_string();
        } else if let Some(rest) = line.strip_prefix("CLASSES ") {
            class_names = rest.split_whitespace().map(|s| s.to_string()).collect();
        } else if let Some(rest) = line.strip_prefix("ORDERS ") {
            orders = rest
                .split_whitespace()
                .map(|s| s.parse())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad("bad ORDERS entry"))?;
        } else if let Some(rest) = line.strip_prefix("CENTRALIZERS ") {
            centralizers = rest
                .split_whitespace()
                .map(|s| s.parse())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad("bad CENTRALIZERS entry"))?;
        } else if let Some(rest) = line.strip_prefix("FLAGS ") {
            flags = rest
                .split_whitespace()
                .map(|s| match s {
                    "unit" => Ok(ClassType::Unit),
                    "ss." => Ok(ClassType::Semisimple),
                    "unip." => Ok(ClassType::Unipotent),
                    "reg.ss." => Ok(ClassType::RegularSemisimple),
                    "--" => Ok(ClassType::Other),
                    other => Err(Error::Parse {
                        line: ln,
                        msg: format!("unknown flag `{}`", other),
                    }),
                })
                .collect::<Result<_>>()?;
        } else if let Some(rest) = line.strip_prefix("TORI ") {
            tori = rest
                .split_whitespace()
                .map(|s| {
                    if s == "--" {
                        Vec::new()
                    } else if s == "all" {
                        vec![
                            "empty".into(),
                            "A1".into(),
                            "A1t".into(),
                            "A1xA1t".into(),
                            "A2".into(),
                            "G2".into(),
                        ]
                    } else {
                        s.split(',').map(|t| t.to_string()).collect()
                    }
                })
                .collect();
        } else if let Some(rest) = line.strip_prefix("UNIPOTENT_ROWS ") {
            unip_rows = rest.split_whitespace().map(|s| s.to_string()).collect();
        } else if let Some(rest) = line.strip_prefix("ROW ") {
            let colon = rest.find(':').ok_or_else(|| bad("ROW needs a colon"))?;
            let name = rest[..colon].trim().to_string();
            let mut vals = Vec::new();
            for (col, tok) in rest[colon + 1..].split_whitespace().enumerate() {
                let v = if tok == "." {
                    Cyc::zero(1)
                } else {
                    Cyc::parse(tok).map_err(|msg| Error::Parse {
                        line: ln,
                        msg: format!("column {}: {}", col + 1, msg),
                    })?
                };
                vals.push(v);
            }
            rows.push((name, vals));
        } else {
            return Err(bad("unrecognized line"));
        }
    }
    let k = class_names.len();
    if k == 0 || rows.len() != k || orders.len() != k || centralizers.len() != k {
        return Err(Error::Parse {
            line: 0,
            msg: format!(
                "table shape mismatch: {} classes, {} rows",
                k,
                rows.len()
            ),
        });
    }
    for (name, vals) in &rows {
        if vals.len() != k {
            return Err(Error::Parse {
                line: 0,
                msg: format!("row {} has {} values, expected {}", name, vals.len(), k),
            });
        }
    }
    if flags.len() != k {
        flags = vec![ClassType::Other; k];
    }
    if tori.len() != k {
        tori = vec![Vec::new(); k];
    }
    let group_order = centralizers[0];
    let class_sizes: Vec<u128> = centralizers
        .iter()
        .map(|&c| {
            if group_order % c != 0 {
                0 // caught by verification
            } else {
                group_order / c
            }
        })
        .collect();
    let row_names: Vec<String> = rows.iter().map(|(n, _)| n.clone()).collect();
    let unipotent_rows: Vec<bool> = row_names.iter().map(|n| unip_rows.contains(n)).collect();
    let table = CharacterTable {
        group_order,
        class_names,
        class_orders: orders,
        class_sizes,
        centralizer_orders: centralizers,
        class_type: flags,
        tori,
        row_names,
        rows: rows.into_iter().map(|(_, v)| v).collect(),
        unipotent_rows,
    };
    let _ = group;
    let report = verify_table(&table);
    if !report.ok() {
        return Err(Error::TableVerification(report.violations.join("; ")));
    }
    Ok(table)
}

pub fn serialize_character_table(t: &CharacterTable, group_label: &str) -> String {
    let mut out = String::new();
    out.push_str(&format!("GROUP {}\n", group_label));
    out.push_str(&format!("CLASSES {}\n", t.class_names.join(" ")));
    out.push_str(&format!(
        "ORDERS {}\n",
        t.class_orders
            .iter()
            .map(|o| o.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    ));
    out.push_str(&format!(
        "CENTRALIZERS {}\n",
        t.centralizer_orders
            .iter()
            .map(|o| o.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    ));
    out.push_str(&format!(
        "FLAGS {}\n",
        t.class_type
            .iter()
            .map(|f| match f {
                ClassType::Unit => "unit",
                ClassType::Semisimple => "ss.",
                ClassType::Unipotent => "unip.",
                ClassType::RegularSemisimple => "reg.ss.",
                ClassType::Other => "--",
            })
            .collect::<Vec<_>>()
            .join(" ")
    ));
    out.push_str(&format!(
        "TORI {}\n",
        t.tori
            .iter()
            .map(|ts| {
                if ts.is_empty() {
                    "--".to_string()
                } else if ts.len() == 6 {
                    "all".to_string()
                } else {
                    ts.join(",")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    ));
    let unip: Vec<&String> = t
        .row_names
        .iter()
        .zip(&t.unipotent_rows)
        .filter(|(_, &u)| u)
        .map(|(n, _)| n)
        .collect();
    if !unip.is_empty() {
        out.push_str(&format!(
            "UNIPOTENT_ROWS {}\n",
            unip.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(" ")
        ));
    }
    for (name, row) in t.row_names.iter().zip(&t.rows) {
        let vals: Vec<String> = row
            .iter()
            .map(|v| {
                if v.is_zero() {
                    ".".to_string()
                } else {
                    v.to_e_string()
                }
            })
            .collect();
        out.push_str(&format!("ROW {}: {}\n", name, vals.join(" ")));
    }
    out
}

/// Load the shipped G2(F_3) table (or an override from JETLIE_DATA_DIR).
pub fn load_g2_f3_table() -> Result<CharacterTable> {
    if let Ok(dir) = std::env::var("JETLIE_DATA_DIR") {
        let path = std::path::Path::new(&dir).join("g2f3.ctbl");
        if let Ok(text) = std::fs::read_to_string(&path) {
            return parse_character_table(&text);
        }
    }
    parse_character_table(include_str!("../data/g2f3.ctbl"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::rat_int;

    #[test]
    fn shipped_table_verifies() {
        let t = load_g2_f3_table().unwrap();
        assert_eq!(t.group_order, 4_245_696);
        assert_eq!(t.rows.len(), 23);
        // X23 has degree 832
        let x23 = t.row_index("X23").unwrap();
        assert_eq!(t.rows[x23][0], Cyc::from_int(832));
        // X3 at 9b is (-1+3 sqrt(-3))/2 = 1 + 3 E(3)
        let x3 = t.row_index("X3").unwrap();
        let c9b = t.class_index("9b").unwrap();
        let alpha = Cyc::one().add(&Cyc::root_of_unity(3, 1).scale(&rat_int(3)));
        assert_eq!(t.rows[x3][c9b], alpha);
        // unipotent flags are the shipped ten
        let unip: Vec<&String> = t
            .row_names
            .iter()
            .zip(&t.unipotent_rows)
            .filter(|(_, &u)| u)
            .map(|(n, _)| n)
            .collect();
        assert_eq!(
            unip,
            ["X1", "X2", "X3", "X4", "X5", "X7", "X8", "X9", "X10", "X21"]
        );
    }

    #[test]
    fn round_trip() {
        let t = load_g2_f3_table().unwrap();
        let s = serialize_character_table(&t, "G2(F3)");
        let t2 = parse_character_table(&s).unwrap();
        assert_eq!(t.class_names, t2.class_names);
        assert_eq!(t.centralizer_orders, t2.centralizer_orders);
        for (r1, r2) in t.rows.iter().zip(&t2.rows) {
            assert_eq!(r1, r2);
        }
        assert_eq!(t.unipotent_rows, t2.unipotent_rows);
    }

    #[test]
    fn perturbed_file_fails_verification() {
        let t = load_g2_f3_table().unwrap();
        let mut s = serialize_character_table(&t, "G2(F3)");
        // flip one character value: X1 at the 2a column from 1 to 2
        s = s.replace("ROW X2: 14 -2", "ROW X2: 14 -1");
        assert!(matches!(
            parse_character_table(&s),
            Err(Error::TableVerification(_))
        ));
    }

    #[test]
    fn parse_error_reports_line() {
        let bad = "CLASSES 1a\nORDERS 1\nCENTRALIZERS 6\nROW X1: 1 bogus";
        match parse_character_table(bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("expected parse error, got {:?}", other.map(|_| ())),
        }
    }
}
