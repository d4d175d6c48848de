//! The edge graph of a system and its boundary paths.
//!
//! An edge is a label together with an atom of its ideal generator; its
//! source `d` is that atom and its range `r` the atom's image, when defined.

use std::fmt::Write as _;

use thiserror::Error;

use crate::boolean::{Atom, Gbds, Label, SetElem, Word};
use crate::filters::{self, show_lasso, Filter, Step};
use crate::lasso::{Continuations, Lasso};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("edge ({label},{atom}) has its atom outside the label's ideal generator")]
    InvalidEdge { label: String, atom: String },
    #[error("edges {index} and {next} do not connect")]
    Disconnected { index: usize, next: usize },
    #[error("the shift is not defined on a vertex")]
    ShiftOfVertex,
    #[error("a path needs at least one edge")]
    EmptyPath,
    #[error(transparent)]
    Filter(#[from] filters::FilterError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub label: Label,
    pub atom: Atom,
}

impl Edge {
    pub fn new(sys: &Gbds, label: Label, atom: Atom) -> Result<Edge, PathError> {
        if !sys.generator(label).contains(atom) {
            return Err(PathError::InvalidEdge {
                label: sys.label_name(label).to_string(),
                atom: sys.atom_name(atom).to_string(),
            });
        }
        Ok(Edge { label, atom })
    }

    pub fn source(&self) -> Atom {
        self.atom
    }

    pub fn range(&self, sys: &Gbds) -> Option<Atom> {
        sys.image(self.label, self.atom)
    }

    pub fn show(&self, sys: &Gbds) -> String {
        format!("({},{})", sys.label_name(self.label), sys.atom_name(self.atom))
    }
}

pub fn edge_d(e: &Edge) -> Atom {
    e.source()
}

pub fn edge_r(sys: &Gbds, e: &Edge) -> Option<Atom> {
    e.range(sys)
}

/// All edges, ordered by label then atom.
pub fn edges(sys: &Gbds) -> Vec<Edge> {
    sys.labels()
        .flat_map(|l| {
            sys.generator(l)
                .atoms()
                .map(move |x| Edge { label: l, atom: x })
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Dimension of the space of functions on the edge set.
pub fn edge_space_dimension(sys: &Gbds) -> usize {
    sys.labels().map(|l| sys.generator(l).len()).sum()
}

/// Vertices receiving no edge.
pub fn singular_vertices(sys: &Gbds) -> SetElem {
    let all = edges(sys);
    SetElem::from_atoms(
        sys.atom_count(),
        sys.atoms()
            .filter(|v| !all.iter().any(|e| e.range(sys) == Some(*v))),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundaryPath {
    Vertex(Atom),
    Path(Lasso<Edge>),
}

impl BoundaryPath {
    /// Validates adjacency `d(eᵢ) = r(eᵢ₊₁)`; does not require the boundary
    /// condition, see [`BoundaryPath::is_boundary`].
    pub fn from_edges(sys: &Gbds, edges: Lasso<Edge>) -> Result<BoundaryPath, PathError> {
        if edges.is_empty() {
            return Err(PathError::EmptyPath);
        }
        for i in 0..edges.span() {
            let e = edges.get(i).expect("within span");
            Edge::new(sys, e.label, e.atom)?;
            if let Some(next) = edges.get(i + 1) {
                if next.range(sys) != Some(e.source()) {
                    return Err(PathError::Disconnected {
                        index: i + 1,
                        next: i + 2,
                    });
                }
            }
        }
        Ok(BoundaryPath::Path(edges))
    }

    pub fn edges(&self) -> Option<&Lasso<Edge>> {
        match self {
            BoundaryPath::Vertex(_) => None,
            BoundaryPath::Path(e) => Some(e),
        }
    }

    pub fn len(&self) -> Option<usize> {
        match self {
            BoundaryPath::Vertex(_) => Some(0),
            BoundaryPath::Path(e) => e.len(),
        }
    }

    pub fn is_vertex(&self) -> bool {
        matches!(self, BoundaryPath::Vertex(_))
    }

    /// `r(μ)`: a vertex path's own vertex, else the first edge's range.
    pub fn range(&self, sys: &Gbds) -> Option<Atom> {
        match self {
            BoundaryPath::Vertex(v) => Some(*v),
            BoundaryPath::Path(e) => e.get(0).and_then(|e| e.range(sys)),
        }
    }

    /// `d(μ)` for finite paths.
    pub fn source(&self) -> Option<Atom> {
        match self {
            BoundaryPath::Vertex(v) => Some(*v),
            BoundaryPath::Path(e) => e.len().and_then(|n| e.get(n - 1)).map(|e| e.source()),
        }
    }

    /// The label word of a finite path.
    pub fn word(&self) -> Option<Word> {
        match self {
            BoundaryPath::Vertex(_) => Some(Word::empty()),
            BoundaryPath::Path(e) => Some(e.take(e.len()?).iter().map(|e| e.label).collect()),
        }
    }

    /// Infinite, or finite with a singular source.
    pub fn is_boundary(&self, sys: &Gbds) -> bool {
        let singular = singular_vertices(sys);
        self.source().is_none_or(|v| singular.contains(v))
    }

    pub fn show(&self, sys: &Gbds) -> String {
        match self {
            BoundaryPath::Vertex(v) => sys.atom_name(*v).to_string(),
            BoundaryPath::Path(e) => show_lasso(e, |e| e.show(sys), true),
        }
    }
}

/// Removes the first edge; a single edge shifts to its source vertex.
pub fn shift(_sys: &Gbds, mu: &BoundaryPath) -> Result<BoundaryPath, PathError> {
    match mu {
        BoundaryPath::Vertex(_) => Err(PathError::ShiftOfVertex),
        BoundaryPath::Path(e) => {
            let first = *e.get(0).expect("nonempty path");
            let rest = e.drop_front(1).expect("nonempty path");
            Ok(if rest.is_empty() {
                BoundaryPath::Vertex(first.source())
            } else {
                BoundaryPath::Path(rest)
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathCylinder {
    pub root: Option<Atom>,
    pub stem: Vec<Edge>,
    pub representative: Option<BoundaryPath>,
}

impl PathCylinder {
    pub fn show(&self, sys: &Gbds) -> String {
        let stem = if self.stem.is_empty() {
            match self.root {
                Some(x) => format!("root {}", sys.atom_name(x)),
                None => "root ∅".to_string(),
            }
        } else {
            self.stem.iter().map(|e| e.show(sys)).collect::<String>()
        };
        match &self.representative {
            Some(r) => format!("{stem} -> {}", r.show(sys)),
            None => format!("{stem} -> extendable"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BoundaryEnumeration {
    pub finite: Vec<BoundaryPath>,
    pub cylinders: Vec<PathCylinder>,
}

impl BoundaryEnumeration {
    pub fn points(&self) -> Vec<BoundaryPath> {
        let mut out = self.finite.clone();
        out.extend(self.cylinders.iter().filter_map(|c| c.representative.clone()));
        out
    }
}

/// Finite boundary paths of length at most `depth` and depth-`depth`
/// cylinders of infinite paths, found by walking the edge graph.
pub fn enumerate_boundary(sys: &Gbds, depth: usize) -> BoundaryEnumeration {
    let all = edges(sys);
    let singular = singular_vertices(sys);
    let into = |v: Atom| -> Vec<Edge> {
        all.iter()
            .filter(|e| e.range(sys) == Some(v))
            .copied()
            .collect()
    };
    let vertices: Vec<Atom> = sys.atoms().collect();
    let cont = Continuations::new(&vertices, |v| {
        into(v).into_iter().map(|e| (e, e.source())).collect()
    });

    let mut finite: Vec<BoundaryPath> = singular.atoms().map(BoundaryPath::Vertex).collect();
    let mut level: Vec<Vec<Edge>> = if depth == 0 {
        Vec::new()
    } else {
        all.iter().map(|e| vec![*e]).collect()
    };
    for n in 1..=depth {
        for p in &level {
            if singular.contains(p.last().expect("nonempty").source()) {
                finite.push(BoundaryPath::Path(Lasso::finite(p.clone())));
            }
        }
        if n < depth {
            level = level
                .iter()
                .flat_map(|p| {
                    into(p.last().expect("nonempty").source())
                        .into_iter()
                        .map(move |e| {
                            let mut q = p.clone();
                            q.push(e);
                            q
                        })
                })
                .collect();
        }
    }

    let mut cylinders = Vec::new();
    if depth == 0 {
        let live: Vec<Edge> = all
            .iter()
            .filter(|e| cont.has_infinite_run(e.source()))
            .copied()
            .collect();
        let mut roots: Vec<Option<Atom>> = live.iter().map(|e| e.range(sys)).collect();
        roots.sort();
        roots.dedup();
        for root in roots {
            let starts: Vec<&Edge> = live.iter().filter(|e| e.range(sys) == root).collect();
            let representative = match starts.as_slice() {
                [only] => cont
                    .unique_run(only.source())
                    .map(|run| BoundaryPath::Path(run.prepend(&[**only]))),
                _ => None,
            };
            cylinders.push(PathCylinder {
                root,
                stem: Vec::new(),
                representative,
            });
        }
    } else {
        for p in level {
            let last = p.last().expect("nonempty").source();
            if !cont.has_infinite_run(last) {
                continue;
            }
            let representative = cont
                .unique_run(last)
                .map(|run| BoundaryPath::Path(run.prepend(&p)));
            cylinders.push(PathCylinder {
                root: p[0].range(sys),
                stem: p,
                representative,
            });
        }
    }
    BoundaryEnumeration { finite, cylinders }
}

fn step_to_edge(s: &Step) -> Edge {
    Edge {
        label: s.label,
        atom: s.atom,
    }
}

fn edge_to_step(e: &Edge) -> Step {
    Step {
        label: e.label,
        atom: e.atom,
    }
}

/// Transcribes a filter as a path: letters become edge labels and
/// trajectory atoms become edge atoms.
pub fn phi(xi: &Filter) -> BoundaryPath {
    match xi {
        Filter::Vertex(x) => BoundaryPath::Vertex(*x),
        Filter::Path(s) => BoundaryPath::Path(s.map(step_to_edge)),
    }
}

/// Rebuilds the filter whose level ultrafilters are the edge atoms.
pub fn phi_inv(sys: &Gbds, mu: &BoundaryPath) -> Result<Filter, PathError> {
    match mu {
        BoundaryPath::Vertex(v) => Ok(Filter::Vertex(*v)),
        BoundaryPath::Path(e) => Ok(Filter::from_steps(sys, e.map(edge_to_step))?),
    }
}

pub fn phi_cylinder(c: &filters::Cylinder) -> PathCylinder {
    PathCylinder {
        root: c.root,
        stem: c.stem.iter().map(step_to_edge).collect(),
        representative: c.representative.as_ref().map(phi),
    }
}

/// The edge graph in DOT: atoms as nodes, one arrow per edge from `d` to
/// `r`, with missing ranges drawn to a sentinel node.
pub fn edge_graph_dot(sys: &Gbds) -> String {
    let mut out = String::from("digraph edges {\n");
    for a in sys.atoms() {
        let shape = if sys.is_sink(a) { "doublecircle" } else { "circle" };
        let _ = writeln!(out, "  \"{}\" [shape={shape}];", sys.atom_name(a));
    }
    let all = edges(sys);
    if all.iter().any(|e| e.range(sys).is_none()) {
        out.push_str("  \"∅\" [shape=point];\n");
    }
    for e in all {
        let r = e.range(sys).map_or("∅", |r| sys.atom_name(r));
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\" [label=\"{}\"];",
            sys.atom_name(e.source()),
            r,
            sys.label_name(e.label)
        );
    }
    out.push_str("}\n");
    out
}
