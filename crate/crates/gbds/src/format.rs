//! Text formats: `.gbds` system files and labeled-graph files.
//!
//! A `.gbds` file is line oriented; `#` starts a comment. Sections open with
//! a header line and run until the next header:
//!
//! ```text
//! ATOMS
//! v1 v2 v3
//! LABELS
//! a b
//! MAP a
//! v2 -> v1
//! IDEAL a
//! v2
//! ```
//!
//! `ATOMS` and `LABELS` come first. Every label needs an `IDEAL` section;
//! `MAP` sections are optional and hold one `from -> to` entry per line.
//!
//! A graph file lists `VERTICES` then `EDGES`, one `source label target`
//! triple per line.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::boolean::{Gbds, SystemError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Invalid { line: usize, source: SystemError },
    #[error(
        "label `{label}` has two edges into `{target}`: from `{first}` (line {first_line}) and from `{second}` (line {second_line})"
    )]
    NotLeftResolving {
        label: String,
        target: String,
        first: String,
        first_line: usize,
        second: String,
        second_line: usize,
    },
}

impl ParseError {
    /// Line the error is attributed to.
    pub fn line(&self) -> usize {
        match self {
            ParseError::Syntax { line, .. } | ParseError::Invalid { line, .. } => *line,
            ParseError::NotLeftResolving { second_line, .. } => *second_line,
        }
    }
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

/// Non-empty lines with comments stripped, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section<'a> {
    None,
    Atoms,
    Labels,
    Map(&'a str),
    Ideal(&'a str),
}

pub fn parse_system(text: &str) -> Result<Gbds, ParseError> {
    let mut section = Section::None;
    let mut atoms: Vec<&str> = Vec::new();
    let mut atom_set: HashSet<&str> = HashSet::new();
    let mut atoms_line = None;
    let mut labels: Vec<&str> = Vec::new();
    let mut labels_line = None;
    let mut maps: Vec<(&str, &str, &str, usize)> = Vec::new();
    let mut mapped: HashSet<(&str, &str)> = HashSet::new();
    let mut ideals: BTreeMap<&str, Vec<&str>> = BTreeMap::new();

    for (line, tokens) in content_lines(text) {
        let header = match tokens.as_slice() {
            ["ATOMS"] => Some(Section::Atoms),
            ["LABELS"] => Some(Section::Labels),
            ["MAP", l] => Some(Section::Map(l)),
            ["IDEAL", l] => Some(Section::Ideal(l)),
            ["MAP" | "IDEAL", ..] => return Err(syntax(line, "expected exactly one label after section keyword")),
            ["ATOMS" | "LABELS", ..] => return Err(syntax(line, "section header takes no arguments")),
            _ => None,
        };
        if let Some(next) = header {
            match next {
                Section::Atoms if atoms_line.is_some() => return Err(syntax(line, "second ATOMS section")),
                Section::Atoms => atoms_line = Some(line),
                Section::Labels if atoms_line.is_none() => return Err(syntax(line, "LABELS before ATOMS")),
                Section::Labels if labels_line.is_some() => return Err(syntax(line, "second LABELS section")),
                Section::Labels => {
                    if atoms.is_empty() {
                        return Err(ParseError::Invalid {
                            line: atoms_line.unwrap_or(line),
                            source: SystemError::EmptyUniverse,
                        });
                    }
                    labels_line = Some(line);
                }
                Section::Map(l) | Section::Ideal(l) => {
                    if labels_line.is_none() {
                        return Err(syntax(line, "MAP and IDEAL sections must follow LABELS"));
                    }
                    if !labels.contains(&l) {
                        return Err(ParseError::Invalid {
                            line,
                            source: SystemError::UnknownLabel(l.to_string()),
                        });
                    }
                    if let Section::Ideal(l) = next {
                        if ideals.insert(l, Vec::new()).is_some() {
                            return Err(syntax(line, format!("second IDEAL section for `{l}`")));
                        }
                    }
                }
                Section::None => unreachable!(),
            }
            section = next;
            continue;
        }
        let known_atom = |a: &str| {
            if atom_set.contains(a) {
                Ok(())
            } else {
                Err(ParseError::Invalid {
                    line,
                    source: SystemError::UnknownAtom(a.to_string()),
                })
            }
        };
        match section {
            Section::None => return Err(syntax(line, "content before the first section header")),
            Section::Atoms => {
                for t in tokens {
                    if !atom_set.insert(t) {
                        return Err(ParseError::Invalid {
                            line,
                            source: SystemError::DuplicateAtom(t.to_string()),
                        });
                    }
                    atoms.push(t);
                }
            }
            Section::Labels => {
                for t in tokens {
                    if labels.contains(&t) {
                        return Err(ParseError::Invalid {
                            line,
                            source: SystemError::DuplicateLabel(t.to_string()),
                        });
                    }
                    labels.push(t);
                }
            }
            Section::Map(l) => {
                let [from, "->", to] = tokens.as_slice() else {
                    return Err(syntax(line, "expected `from -> to`"));
                };
                known_atom(from)?;
                known_atom(to)?;
                if !mapped.insert((l, from)) {
                    return Err(ParseError::Invalid {
                        line,
                        source: SystemError::DoubleMapping {
                            label: l.to_string(),
                            atom: from.to_string(),
                        },
                    });
                }
                maps.push((l, from, to, line));
            }
            Section::Ideal(l) => {
                for t in tokens {
                    known_atom(t)?;
                    ideals.get_mut(l).expect("opened by header").push(t);
                }
            }
        }
    }

    let Some(labels_line) = labels_line else {
        return Err(match atoms_line {
            Some(line) if atoms.is_empty() => ParseError::Invalid {
                line,
                source: SystemError::EmptyUniverse,
            },
            _ => syntax(0, "missing ATOMS or LABELS section"),
        });
    };
    if let Some(l) = labels.iter().find(|l| !ideals.contains_key(*l)) {
        return Err(syntax(labels_line, format!("label `{l}` has no IDEAL section")));
    }
    for (l, from, _, line) in &maps {
        if !ideals[l].contains(from) {
            return Err(ParseError::Invalid {
                line: *line,
                source: SystemError::DomainOutsideIdeal {
                    label: l.to_string(),
                    atom: from.to_string(),
                },
            });
        }
    }

    let mut builder = Gbds::builder().atoms(atoms.iter().copied());
    for l in &labels {
        builder = builder.label(*l);
    }
    for (l, from, to, _) in &maps {
        builder = builder.map(l, from, to);
    }
    for (l, members) in &ideals {
        builder = builder.ideal(l, members.iter().copied());
    }
    builder
        .build()
        .map_err(|source| ParseError::Invalid { line: 0, source })
}

/// Canonical text: atoms and labels in system order, map entries by source atom.
pub fn serialize_system(sys: &Gbds) -> String {
    let mut out = String::from("ATOMS\n");
    let names: Vec<&str> = sys.atoms().map(|a| sys.atom_name(a)).collect();
    let _ = writeln!(out, "{}", names.join(" "));
    out.push_str("LABELS\n");
    let labels: Vec<&str> = sys.labels().map(|l| sys.label_name(l)).collect();
    let _ = writeln!(out, "{}", labels.join(" "));
    for l in sys.labels() {
        let name = sys.label_name(l);
        let entries: Vec<String> = sys
            .atoms()
            .filter_map(|x| {
                sys.image(l, x)
                    .map(|y| format!("{} -> {}", sys.atom_name(x), sys.atom_name(y)))
            })
            .collect();
        if !entries.is_empty() {
            let _ = writeln!(out, "MAP {name}");
            for e in entries {
                let _ = writeln!(out, "{e}");
            }
        }
        let _ = writeln!(out, "IDEAL {name}");
        let members: Vec<&str> = sys.generator(l).atoms().map(|a| sys.atom_name(a)).collect();
        if !members.is_empty() {
            let _ = writeln!(out, "{}", members.join(" "));
        }
    }
    out
}

/// A parsed labeled graph, before conversion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String, String)>,
}

pub fn parse_graph(text: &str) -> Result<(LabeledGraph, Vec<usize>), ParseError> {
    #[derive(PartialEq)]
    enum Part {
        None,
        Vertices,
        Edges,
    }
    let mut part = Part::None;
    let mut graph = LabeledGraph {
        vertices: Vec::new(),
        edges: Vec::new(),
    };
    let mut lines = Vec::new();
    let mut seen = HashSet::new();
    for (line, tokens) in content_lines(text) {
        match tokens.as_slice() {
            ["VERTICES"] if part == Part::None => part = Part::Vertices,
            ["EDGES"] if part == Part::Vertices => part = Part::Edges,
            ["VERTICES" | "EDGES", ..] => return Err(syntax(line, "expected VERTICES then EDGES")),
            _ => match part {
                Part::None => return Err(syntax(line, "content before VERTICES")),
                Part::Vertices => {
                    for t in tokens {
                        if !seen.insert(t.to_string()) {
                            return Err(ParseError::Invalid {
                                line,
                                source: SystemError::DuplicateAtom(t.to_string()),
                            });
                        }
                        graph.vertices.push(t.to_string());
                    }
                }
                Part::Edges => {
                    let [src, label, tgt] = tokens.as_slice() else {
                        return Err(syntax(line, "expected `source label target`"));
                    };
                    for v in [src, tgt] {
                        if !seen.contains(*v) {
                            return Err(ParseError::Invalid {
                                line,
                                source: SystemError::UnknownAtom(v.to_string()),
                            });
                        }
                    }
                    graph.edges.push((src.to_string(), label.to_string(), tgt.to_string()));
                    lines.push(line);
                }
            },
        }
    }
    if graph.vertices.is_empty() {
        return Err(ParseError::Invalid {
            line: 0,
            source: SystemError::EmptyUniverse,
        });
    }
    Ok((graph, lines))
}

/// Imports a labeled graph: an edge `source α target` sets
/// `g_α(target) = source`, and `G_α` collects the targets of `α`-edges.
pub fn import_graph(text: &str) -> Result<Gbds, ParseError> {
    let (graph, lines) = parse_graph(text)?;
    let mut labels: Vec<&str> = Vec::new();
    let mut into: HashMap<(&str, &str), (&str, usize)> = HashMap::new();
    let mut builder = Gbds::builder().atoms(graph.vertices.iter().cloned());
    let mut ideals: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for ((src, label, tgt), line) in graph.edges.iter().zip(&lines) {
        if !labels.contains(&label.as_str()) {
            labels.push(label);
        }
        match into.get(&(label.as_str(), tgt.as_str())) {
            Some((first, first_line)) if *first != src => {
                return Err(ParseError::NotLeftResolving {
                    label: label.clone(),
                    target: tgt.clone(),
                    first: first.to_string(),
                    first_line: *first_line,
                    second: src.clone(),
                    second_line: *line,
                })
            }
            Some(_) => continue,
            None => {
                into.insert((label, tgt), (src, *line));
                ideals.entry(label).or_default().push(tgt);
            }
        }
    }
    for l in &labels {
        builder = builder.label(*l);
    }
    let mut entries: Vec<(&(&str, &str), &(&str, usize))> = into.iter().collect();
    entries.sort_by_key(|(_, (_, line))| *line);
    for ((label, tgt), (src, _)) in entries {
        builder = builder.map(label, tgt, src);
    }
    for (l, members) in &ideals {
        builder = builder.ideal(l, members.iter().copied());
    }
    builder
        .build()
        .map_err(|source| ParseError::Invalid { line: 0, source })
}
