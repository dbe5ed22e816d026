//! JSON file formats for groups and witness certificates.
//!
//! Group file: `{"name": string?, "degree": n, "generators": [image-list or
//! cycle-string, …]}`, with optional `labels` and `index` blocks for
//! realized actions. Witness file: `{"group": …, "I": […], "J": […],
//! "pair_transporters": {"u,v": image-list…}, "kind": "plain"|"strong"}`.
//! Serialization is deterministic: pretty-printed JSON with sorted
//! transporter keys and a trailing newline.

use crate::binarity::{WitnessCertificate, WitnessKind};
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::{Permutation, Point};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

/// One generator: either an explicit image table or cycle notation.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GenSpec {
    Images(Vec<Point>),
    Cycles(String),
}

/// The on-disk representation of a permutation group (or realized action).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub degree: usize,
    pub generators: Vec<GenSpec>,
    /// Point labels of a realized action (e.g. coset or tuple labels).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    /// For coset actions, the index |G:H| (equals the degree).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<u64>,
}

/// Rewrites every number in a cycle string from 1-based to 0-based.
fn shift_cycles_to_zero_based(text: &str) -> Result<String> {
    let mut out = String::with_capacity(text.len());
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        if c.is_ascii_digit() {
            let mut num = String::new();
            num.push(c);
            while let Some(&d) = chars.peek() {
                if d.is_ascii_digit() {
                    num.push(d);
                    chars.next();
                } else {
                    break;
                }
            }
            let value: u64 = num
                .parse()
                .map_err(|_| Error::Parse(format!("bad number {num:?} in cycle string")))?;
            if value == 0 {
                return Err(Error::Parse(
                    "point 0 is invalid in 1-based cycle notation".into(),
                ));
            }
            out.push_str(&(value - 1).to_string());
        } else {
            out.push(c);
        }
    }
    Ok(out)
}

impl GroupFile {
    /// Snapshot of a group, generators written as image tables.
    pub fn from_group(name: impl Into<String>, g: &PermGroup) -> GroupFile {
        GroupFile {
            name: Some(name.into()),
            degree: g.degree(),
            generators: g
                .generators()
                .iter()
                .map(|p| GenSpec::Images(p.images().to_vec()))
                .collect(),
            labels: None,
            index: None,
        }
    }

    /// Reconstructs the group. With `one_based`, image lists and cycle
    /// strings are interpreted with points starting at 1.
    pub fn to_group_with(&self, one_based: bool) -> Result<PermGroup> {
        let mut gens = Vec::with_capacity(self.generators.len());
        for spec in &self.generators {
            let p = match spec {
                GenSpec::Images(images) => {
                    let images = if one_based {
                        images
                            .iter()
                            .map(|&i| {
                                i.checked_sub(1).ok_or_else(|| {
                                    Error::Parse("image 0 is invalid in 1-based input".into())
                                })
                            })
                            .collect::<Result<Vec<Point>>>()?
                    } else {
                        images.clone()
                    };
                    Permutation::from_images(images)?
                }
                GenSpec::Cycles(text) => {
                    let text = if one_based {
                        shift_cycles_to_zero_based(text)?
                    } else {
                        text.clone()
                    };
                    Permutation::parse(&text, self.degree)?
                }
            };
            if p.degree() != self.degree {
                return Err(Error::DegreeMismatch {
                    left: p.degree(),
                    right: self.degree,
                });
            }
            gens.push(p);
        }
        PermGroup::new(self.degree, gens)
    }

    pub fn to_group(&self) -> Result<PermGroup> {
        self.to_group_with(false)
    }
}

fn to_pretty_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialization cannot fail");
    s.push('\n');
    s
}

pub fn group_to_json(file: &GroupFile) -> String {
    to_pretty_json(file)
}

pub fn group_from_json(text: &str) -> Result<GroupFile> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid group file: {e}")))
}

pub fn read_group_file(path: &Path) -> Result<GroupFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    group_from_json(&text)
}

pub fn write_group_file(path: &Path, file: &GroupFile) -> Result<()> {
    std::fs::write(path, group_to_json(file))
        .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display())))
}

/// The on-disk representation of a witness certificate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessFile {
    pub group: GroupFile,
    #[serde(rename = "I")]
    pub i: Vec<Point>,
    #[serde(rename = "J")]
    pub j: Vec<Point>,
    /// Keys are `"u,v"` position pairs with `u < v`; values are image
    /// tables of the transporter elements.
    pub pair_transporters: BTreeMap<String, Vec<Point>>,
    /// `"plain"` or `"strong"`.
    pub kind: String,
}

pub fn witness_to_file(cert: &WitnessCertificate) -> WitnessFile {
    WitnessFile {
        group: GroupFile::from_group(cert.group_name.clone(), &cert.group),
        i: cert.i.clone(),
        j: cert.j.clone(),
        pair_transporters: cert
            .pair_transporters
            .iter()
            .map(|(&(u, v), t)| (format!("{u},{v}"), t.images().to_vec()))
            .collect(),
        kind: match cert.kind {
            WitnessKind::Plain => "plain".to_string(),
            WitnessKind::Strong => "strong".to_string(),
        },
    }
}

pub fn witness_from_file(file: &WitnessFile) -> Result<WitnessCertificate> {
    let group = file.group.to_group()?;
    let kind = match file.kind.as_str() {
        "plain" => WitnessKind::Plain,
        "strong" => WitnessKind::Strong,
        other => return Err(Error::Parse(format!("unknown witness kind {other:?}"))),
    };
    let mut pair_transporters = BTreeMap::new();
    for (key, images) in &file.pair_transporters {
        let (u, v) = key
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("bad transporter key {key:?}")))?;
        let u: u32 = u
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad transporter key {key:?}")))?;
        let v: u32 = v
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad transporter key {key:?}")))?;
        pair_transporters.insert((u, v), Permutation::from_images(images.clone())?);
    }
    Ok(WitnessCertificate {
        group_name: file.group.name.clone().unwrap_or_default(),
        group,
        i: file.i.clone(),
        j: file.j.clone(),
        pair_transporters,
        kind,
    })
}

pub fn witness_to_json(cert: &WitnessCertificate) -> String {
    to_pretty_json(&witness_to_file(cert))
}

pub fn witness_from_json(text: &str) -> Result<WitnessCertificate> {
    let file: WitnessFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid witness file: {e}")))?;
    witness_from_file(&file)
}

pub fn read_witness_file(path: &Path) -> Result<WitnessCertificate> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    witness_from_json(&text)
}

pub fn write_witness_file(path: &Path, cert: &WitnessCertificate) -> Result<()> {
    std::fs::write(path, witness_to_json(cert))
        .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binarity::{verify_witness, witness_from_closure, Test2Outcome, VerifyOutcome};
    use crate::config::Budgets;

    #[test]
    fn group_file_roundtrip_both_notations() {
        let json = r#"{
            "name": "A4",
            "degree": 4,
            "generators": ["(0 1 2)", [0, 2, 3, 1]]
        }"#;
        let file = group_from_json(json).unwrap();
        let g = file.to_group().unwrap();
        assert_eq!(g.order_u64(), Some(12));
        // Serialize → parse → same group.
        let again = group_from_json(&group_to_json(&GroupFile::from_group("A4", &g)))
            .unwrap()
            .to_group()
            .unwrap();
        assert!(g.same_group_as(&again));
    }

    #[test]
    fn one_based_input() {
        let file = GroupFile {
            name: None,
            degree: 3,
            generators: vec![
                GenSpec::Cycles("(1 2 3)".into()),
                GenSpec::Images(vec![2, 1, 3]),
            ],
            labels: None,
            index: None,
        };
        let g = file.to_group_with(true).unwrap();
        assert_eq!(g.order_u64(), Some(6)); // ⟨(0 1 2), (0 1)⟩ = S3
        // 1-based input containing a 0 is rejected.
        let bad = GroupFile {
            name: None,
            degree: 3,
            generators: vec![GenSpec::Cycles("(0 1 2)".into())],
            labels: None,
            index: None,
        };
        assert!(bad.to_group_with(true).is_err());
    }

    #[test]
    fn witness_roundtrip_and_tamper_rejection() {
        let budgets = Budgets::default();
        let a4 = PermGroup::from_generator_strings(4, &["(0 1 2)", "(1 2 3)"]).unwrap();
        let Test2Outcome::NonBinary {
            certificate: Some(cert),
            ..
        } = witness_from_closure(&a4, "A4", &budgets).unwrap()
        else {
            panic!("A4 natural must fail the closure test");
        };
        let json = witness_to_json(&cert);
        let parsed = witness_from_json(&json).unwrap();
        assert_eq!(verify_witness(&parsed), VerifyOutcome::Verified);
        assert_eq!(witness_to_json(&parsed), json); // byte-identical
        // Tamper with J in the JSON text.
        let tampered = json.replace("\"J\": [", "\"J\": [9,");
        match witness_from_json(&tampered) {
            Ok(c) => assert!(matches!(verify_witness(&c), VerifyOutcome::Rejected(_))),
            Err(_) => {} // rejected at parse time is fine too
        }
    }

    #[test]
    fn malformed_files_are_parse_errors() {
        assert!(matches!(group_from_json("{"), Err(Error::Parse(_))));
        assert!(matches!(
            group_from_json(r#"{"degree": 3, "generators": ["(0 1 4)"]}"#)
                .unwrap()
                .to_group(),
            Err(_)
        ));
        assert!(matches!(witness_from_json("[]"), Err(Error::Parse(_))));
    }
}
