//! Filters of the idempotent semilattice, presented as a word together with
//! the atom of each level's principal ultrafilter.

use std::fmt::Write as _;

use thiserror::Error;

use crate::boolean::{Atom, Gbds, Label, Word};
use crate::lasso::{Continuations, Lasso};
use crate::semigroup::{self, Triple};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FilterError {
    #[error("word has {letters} letters but {atoms} trajectory atoms were given")]
    LengthMismatch { letters: usize, atoms: usize },
    #[error("position {index}: atom {atom} is not in the ideal generator of the prefix")]
    NotInIdeal { index: usize, atom: String },
    #[error("position {index}: atom {atom} is not the image of the next trajectory atom")]
    Incompatible { index: usize, atom: String },
    #[error("a path filter needs at least one letter")]
    EmptyPath,
    #[error("operation needs a filter of finite type")]
    InfiniteType,
    #[error(transparent)]
    Semigroup(#[from] semigroup::SemigroupError),
}

/// One letter of a filter's word together with its trajectory atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Step {
    pub label: Label,
    pub atom: Atom,
}

/// A filter whose levels are ultrafilters, stored by atoms.
///
/// `Vertex(x)` has the empty word and level-zero atom `x`. `Path` is a
/// nonempty, finite or eventually periodic sequence of steps; its level-zero
/// atom is the image of the first step and may be missing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Filter {
    Vertex(Atom),
    Path(Lasso<Step>),
}

fn check_steps(sys: &Gbds, steps: &Lasso<Step>) -> Result<(), FilterError> {
    if steps.is_empty() {
        return Err(FilterError::EmptyPath);
    }
    let span = steps.span();
    let mut prefix = Word::empty();
    for k in 1..=span {
        let s = steps.get(k - 1).copied().expect("within span");
        prefix = prefix.pushed(s.label);
        if !sys.ideal_gen(&prefix).contains(s.atom) {
            return Err(FilterError::NotInIdeal {
                index: k,
                atom: sys.atom_name(s.atom).to_string(),
            });
        }
    }
    for k in 1..=span {
        let s = steps.get(k - 1).copied().expect("within span");
        if let Some(next) = steps.get(k) {
            if sys.image(next.label, next.atom) != Some(s.atom) {
                return Err(FilterError::Incompatible {
                    index: k,
                    atom: sys.atom_name(s.atom).to_string(),
                });
            }
        }
    }
    Ok(())
}

impl Filter {
    /// The filter of all idempotents `(∅, A, ∅)` with `atom ∈ A`.
    pub fn vertex(atom: Atom) -> Filter {
        Filter::Vertex(atom)
    }

    /// Builds a filter from a word and its trajectory `x₁ … xₙ`. For the
    /// empty word the single given atom is the level-zero atom.
    pub fn from_pair(sys: &Gbds, word: &Word, atoms: &[Atom]) -> Result<Filter, FilterError> {
        if word.is_empty() {
            return match atoms {
                [x] => Ok(Filter::Vertex(*x)),
                _ => Err(FilterError::LengthMismatch {
                    letters: 0,
                    atoms: atoms.len(),
                }),
            };
        }
        if word.len() != atoms.len() {
            return Err(FilterError::LengthMismatch {
                letters: word.len(),
                atoms: atoms.len(),
            });
        }
        let steps = word
            .letters()
            .iter()
            .zip(atoms)
            .map(|(l, a)| Step { label: *l, atom: *a })
            .collect();
        Filter::from_steps(sys, Lasso::finite(steps))
    }

    pub fn from_steps(sys: &Gbds, steps: Lasso<Step>) -> Result<Filter, FilterError> {
        check_steps(sys, &steps)?;
        Ok(Filter::Path(steps))
    }

    /// Builds a filter from names, e.g. `("ab", &["v2", "v3"])`.
    pub fn parse(sys: &Gbds, word: &str, atoms: &[&str]) -> Result<Filter, crate::Error> {
        let word = sys.parse_word(word)?;
        let atoms = atoms
            .iter()
            .map(|a| sys.atom(a))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Filter::from_pair(sys, &word, &atoms)?)
    }

    /// An eventually periodic filter: prefix steps then cycle steps forever.
    pub fn periodic(
        sys: &Gbds,
        prefix: &[(&str, &str)],
        cycle: &[(&str, &str)],
    ) -> Result<Filter, crate::Error> {
        let conv = |items: &[(&str, &str)]| -> Result<Vec<Step>, crate::Error> {
            items
                .iter()
                .map(|(l, a)| {
                    Ok(Step {
                        label: sys.label(l)?,
                        atom: sys.atom(a)?,
                    })
                })
                .collect()
        };
        Ok(Filter::from_steps(sys, Lasso::new(conv(prefix)?, conv(cycle)?))?)
    }

    /// Assembles without validation.
    pub(crate) fn from_steps_unchecked(steps: Lasso<Step>, vertex: Atom) -> Filter {
        if steps.is_empty() {
            Filter::Vertex(vertex)
        } else {
            Filter::Path(steps)
        }
    }

    pub fn steps(&self) -> Option<&Lasso<Step>> {
        match self {
            Filter::Vertex(_) => None,
            Filter::Path(s) => Some(s),
        }
    }

    /// Word length; `None` for infinite type.
    pub fn len(&self) -> Option<usize> {
        match self {
            Filter::Vertex(_) => Some(0),
            Filter::Path(s) => s.len(),
        }
    }

    pub fn is_vertex(&self) -> bool {
        matches!(self, Filter::Vertex(_))
    }

    pub fn is_finite(&self) -> bool {
        self.len().is_some()
    }

    /// True when the word has at least `n` letters.
    pub fn has_len(&self, n: usize) -> bool {
        match self {
            Filter::Vertex(_) => n == 0,
            Filter::Path(s) => s.has_len(n),
        }
    }

    /// The `k`-th letter, one-based.
    pub fn letter(&self, k: usize) -> Option<Label> {
        k.checked_sub(1)
            .and_then(|i| self.steps()?.get(i))
            .map(|s| s.label)
    }

    /// The first `n` letters of the word.
    pub fn word_prefix(&self, n: usize) -> Option<Word> {
        if !self.has_len(n) {
            return None;
        }
        Some(match self {
            Filter::Vertex(_) => Word::empty(),
            Filter::Path(s) => s.take(n).into_iter().map(|s| s.label).collect(),
        })
    }

    /// The whole word, when finite.
    pub fn word(&self) -> Option<Word> {
        self.word_prefix(self.len()?)
    }

    pub fn word_lasso(&self) -> Lasso<Label> {
        match self {
            Filter::Vertex(_) => Lasso::finite(Vec::new()),
            Filter::Path(s) => s.map(|s| s.label),
        }
    }

    pub fn has_prefix(&self, word: &Word) -> bool {
        self.word_prefix(word.len()).as_ref() == Some(word)
    }

    /// The level-zero atom, absent when the first step has no image.
    pub fn base(&self, sys: &Gbds) -> Option<Atom> {
        match self {
            Filter::Vertex(x) => Some(*x),
            Filter::Path(s) => {
                let first = s.get(0).expect("nonempty path");
                sys.image(first.label, first.atom)
            }
        }
    }

    /// The atom of level `k`; level zero is [`Filter::base`].
    pub fn atom_at(&self, sys: &Gbds, k: usize) -> Option<Atom> {
        match k {
            0 => self.base(sys),
            _ => self.steps()?.get(k - 1).map(|s| s.atom),
        }
    }

    /// The atom of the last level, for finite type.
    pub fn last_atom(&self) -> Option<Atom> {
        match self {
            Filter::Vertex(x) => Some(*x),
            Filter::Path(s) => s.len().and_then(|n| s.get(n - 1)).map(|s| s.atom),
        }
    }

    /// Tight iff of infinite type or the last level's atom is a sink.
    pub fn is_tight(&self, sys: &Gbds) -> bool {
        self.last_atom().is_none_or(|x| sys.is_sink(x))
    }

    /// The word and trajectory; for the empty word the trajectory is the
    /// single level-zero atom.
    pub fn to_pair(&self) -> Option<(Word, Vec<Atom>)> {
        match self {
            Filter::Vertex(x) => Some((Word::empty(), vec![*x])),
            Filter::Path(s) => {
                let n = s.len()?;
                let steps = s.take(n);
                Some((
                    steps.iter().map(|s| s.label).collect(),
                    steps.iter().map(|s| s.atom).collect(),
                ))
            }
        }
    }

    /// Membership of an idempotent: its word is a prefix and the level atom
    /// at that length lies in its middle set.
    pub fn member(&self, sys: &Gbds, e: &Triple) -> Result<bool, FilterError> {
        if !e.is_idempotent() {
            return Err(semigroup::SemigroupError::NotIdempotent(e.show(sys)).into());
        }
        let Some((word, mid, _)) = e.parts() else {
            return Ok(false);
        };
        if !self.has_prefix(word) {
            return Ok(false);
        }
        Ok(self.atom_at(sys, word.len()).is_some_and(|x| mid.contains(x)))
    }

    pub fn show(&self, sys: &Gbds) -> String {
        match self {
            Filter::Vertex(x) => format!("(∅;{})", sys.atom_name(*x)),
            Filter::Path(s) => {
                let word = show_lasso(s, |s| sys.label_name(s.label).to_string(), short_labels(sys));
                let atoms = show_lasso(s, |s| sys.atom_name(s.atom).to_string(), false);
                format!("({word};{atoms})")
            }
        }
    }
}

pub(crate) fn short_labels(sys: &Gbds) -> bool {
    sys.labels().all(|l| sys.label_name(l).chars().count() == 1)
}

/// Writes `p₁p₂(c₁c₂)^ω`, with `,` separators unless `tight` is set.
pub(crate) fn show_lasso<T: Clone + Eq>(
    seq: &Lasso<T>,
    name: impl Fn(&T) -> String,
    tight: bool,
) -> String {
    let sep = if tight { "" } else { "," };
    let join = |items: &[T]| items.iter().map(&name).collect::<Vec<_>>().join(sep);
    let mut out = join(seq.prefix());
    if !seq.cycle().is_empty() {
        if !out.is_empty() {
            out.push_str(sep);
        }
        let _ = write!(out, "({})^ω", join(seq.cycle()));
    }
    out
}

/// Depth-`n` cylinder of infinite-type filters: those whose first `n` steps
/// are `stem` (and, when `n = 0`, whose level-zero atom is `root`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cylinder {
    pub root: Option<Atom>,
    pub stem: Vec<Step>,
    /// The only infinite filter in the cylinder, when there is exactly one.
    pub representative: Option<Filter>,
}

impl Cylinder {
    pub fn show(&self, sys: &Gbds) -> String {
        let stem = if self.stem.is_empty() {
            match self.root {
                Some(x) => format!("root {}", sys.atom_name(x)),
                None => "root ∅".to_string(),
            }
        } else {
            Filter::Path(Lasso::finite(self.stem.clone())).show(sys)
        };
        match &self.representative {
            Some(r) => format!("{stem} -> {}", r.show(sys)),
            None => format!("{stem} -> extendable"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TightEnumeration {
    pub finite: Vec<Filter>,
    pub cylinders: Vec<Cylinder>,
}

impl TightEnumeration {
    /// Finite filters followed by cylinder representatives.
    pub fn points(&self) -> Vec<Filter> {
        let mut out = self.finite.clone();
        out.extend(self.cylinders.iter().filter_map(|c| c.representative.clone()));
        out
    }
}

fn extensions(sys: &Gbds, atom: Atom) -> Vec<(Step, Atom)> {
    sys.labels()
        .flat_map(|l| {
            sys.preimage(l, atom)
                .iter()
                .map(move |z| (Step { label: l, atom: *z }, *z))
        })
        .collect()
}

fn first_steps(sys: &Gbds) -> Vec<Step> {
    sys.labels()
        .flat_map(|l| sys.generator(l).atoms().map(move |x| Step { label: l, atom: x }).collect::<Vec<_>>())
        .collect()
}

/// All finite step sequences of length `1..=depth`, grouped by length.
fn stems(sys: &Gbds, depth: usize) -> Vec<Vec<Vec<Step>>> {
    let mut levels: Vec<Vec<Vec<Step>>> = Vec::new();
    if depth == 0 {
        return levels;
    }
    levels.push(first_steps(sys).into_iter().map(|s| vec![s]).collect());
    for _ in 1..depth {
        let next = levels
            .last()
            .expect("nonempty")
            .iter()
            .flat_map(|stem| {
                let last = stem.last().expect("nonempty stem").atom;
                extensions(sys, last).into_iter().map(move |(s, _)| {
                    let mut v = stem.clone();
                    v.push(s);
                    v
                })
            })
            .collect();
        levels.push(next);
    }
    levels
}

/// Every filter of finite type with word length at most `depth`, tight or not.
pub fn all_finite(sys: &Gbds, depth: usize) -> Vec<Filter> {
    let mut out: Vec<Filter> = sys.atoms().map(Filter::Vertex).collect();
    for level in stems(sys, depth) {
        out.extend(level.into_iter().map(|s| Filter::Path(Lasso::finite(s))));
    }
    out
}

/// Tight filters of finite type with word length at most `depth`, plus the
/// depth-`depth` cylinders of infinite-type filters.
pub fn enumerate_tight(sys: &Gbds, depth: usize) -> TightEnumeration {
    let finite = all_finite(sys, depth)
        .into_iter()
        .filter(|f| f.is_tight(sys))
        .collect();
    let atoms: Vec<Atom> = sys.atoms().collect();
    let cont = Continuations::new(&atoms, |x| extensions(sys, x));
    let mut cylinders = Vec::new();
    if depth == 0 {
        let mut roots: Vec<Option<Atom>> = Vec::new();
        for s in first_steps(sys) {
            let root = sys.image(s.label, s.atom);
            if cont.has_infinite_run(s.atom) && !roots.contains(&root) {
                roots.push(root);
            }
        }
        roots.sort();
        for root in roots {
            let live: Vec<Step> = first_steps(sys)
                .into_iter()
                .filter(|s| sys.image(s.label, s.atom) == root && cont.has_infinite_run(s.atom))
                .collect();
            let representative = match live.as_slice() {
                [only] => cont
                    .unique_run(only.atom)
                    .map(|run| Filter::Path(run.prepend(&[*only]))),
                _ => None,
            };
            cylinders.push(Cylinder {
                root,
                stem: Vec::new(),
                representative,
            });
        }
    } else if let Some(level) = stems(sys, depth).pop() {
        for stem in level {
            let last = stem.last().expect("nonempty stem").atom;
            if !cont.has_infinite_run(last) {
                continue;
            }
            let representative = cont
                .unique_run(last)
                .map(|run| Filter::Path(run.prepend(&stem)));
            let root = sys.image(stem[0].label, stem[0].atom);
            cylinders.push(Cylinder {
                root,
                stem,
                representative,
            });
        }
    }
    TightEnumeration { finite, cylinders }
}

/// Tightness decided by covers: for each atomic idempotent of the filter,
/// the one-letter refinement `{(w·β, {y}, w·β) : g_β(y) = x}` is tested with
/// [`semigroup::is_cover`] and, when it is a cover, must meet the filter.
pub fn tight_oracle(sys: &Gbds, xi: &Filter, probe_depth: usize) -> Result<bool, FilterError> {
    let n = xi.len().ok_or(FilterError::InfiniteType)?;
    let word = xi.word().expect("finite");
    for k in 0..=n {
        let Some(x) = xi.atom_at(sys, k) else {
            continue;
        };
        let prefix = word.slice(0, k);
        let e = Triple::raw(prefix.clone(), sys.singleton(x), prefix.clone());
        if !xi.member(sys, &e)? {
            return Ok(false);
        }
        let cover: Vec<Triple> = extensions(sys, x)
            .into_iter()
            .map(|(s, _)| {
                let w = prefix.pushed(s.label);
                Triple::raw(w.clone(), sys.singleton(s.atom), w)
            })
            .collect();
        if semigroup::is_cover(sys, &cover, &e, probe_depth)? {
            let mut met = false;
            for z in &cover {
                met |= xi.member(sys, z)?;
            }
            if !met {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
