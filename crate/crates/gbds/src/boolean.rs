//! Finite Boolean algebras as subset lattices of an atom universe, label
//! actions given by partial atom maps, and the system type itself.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use fixedbitset::FixedBitSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error("the atom universe is empty")]
    EmptyUniverse,
    #[error("duplicate atom `{0}`")]
    DuplicateAtom(String),
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("label `{label}` maps atom `{atom}` twice")]
    DoubleMapping { label: String, atom: String },
    #[error("label `{label}`: atom `{atom}` lies in the domain of the map but not in the ideal generator")]
    DomainOutsideIdeal { label: String, atom: String },
}

/// Position of an atom in its universe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(pub u32);

impl Atom {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Position of a label in the system's label list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(pub u32);

impl Label {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Ordered list of distinct atom names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomUniverse {
    names: Vec<String>,
    index: HashMap<String, Atom>,
}

impl AtomUniverse {
    pub fn new<I, S>(names: I) -> Result<Self, SystemError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out = AtomUniverse {
            names: Vec::new(),
            index: HashMap::new(),
        };
        for name in names {
            let name = name.into();
            if out.index.contains_key(&name) {
                return Err(SystemError::DuplicateAtom(name));
            }
            out.index.insert(name.clone(), Atom(out.names.len() as u32));
            out.names.push(name);
        }
        if out.names.is_empty() {
            return Err(SystemError::EmptyUniverse);
        }
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn atom(&self, name: &str) -> Result<Atom, SystemError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| SystemError::UnknownAtom(name.to_string()))
    }

    pub fn name(&self, atom: Atom) -> &str {
        &self.names[atom.index()]
    }

    pub fn atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        (0..self.names.len() as u32).map(Atom)
    }
}

/// A subset of the atom universe, i.e. an element of the power-set algebra.
#[derive(Clone, PartialEq, Eq)]
pub struct SetElem {
    bits: FixedBitSet,
}

impl SetElem {
    pub fn empty(universe_len: usize) -> Self {
        SetElem {
            bits: FixedBitSet::with_capacity(universe_len),
        }
    }

    pub fn full(universe_len: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe_len);
        bits.insert_range(..);
        SetElem { bits }
    }

    pub fn from_atoms(universe_len: usize, atoms: impl IntoIterator<Item = Atom>) -> Self {
        let mut s = SetElem::empty(universe_len);
        for a in atoms {
            s.insert(a);
        }
        s
    }

    pub fn singleton(universe_len: usize, atom: Atom) -> Self {
        SetElem::from_atoms(universe_len, [atom])
    }

    pub fn universe_len(&self) -> usize {
        self.bits.len()
    }

    pub fn insert(&mut self, atom: Atom) {
        self.bits.insert(atom.index());
    }

    pub fn contains(&self, atom: Atom) -> bool {
        self.bits.contains(atom.index())
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        self.bits.ones().map(|i| Atom(i as u32))
    }

    pub fn union(&self, other: &SetElem) -> SetElem {
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        SetElem { bits }
    }

    pub fn intersection(&self, other: &SetElem) -> SetElem {
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        SetElem { bits }
    }

    pub fn difference(&self, other: &SetElem) -> SetElem {
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        SetElem { bits }
    }

    pub fn is_subset(&self, other: &SetElem) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &SetElem) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    /// All subsets of `self`, smallest first, in a fixed order.
    pub fn subsets(&self) -> Vec<SetElem> {
        let members: Vec<Atom> = self.atoms().collect();
        assert!(members.len() < 32, "subset enumeration over {} atoms", members.len());
        let n = self.universe_len();
        let mut out: Vec<SetElem> = (0u32..(1 << members.len()))
            .map(|mask| {
                SetElem::from_atoms(
                    n,
                    members
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask & (1 << i) != 0)
                        .map(|(_, a)| *a),
                )
            })
            .collect();
        out.sort();
        out
    }

    /// Nonempty subsets of `self`.
    pub fn nonempty_subsets(&self) -> Vec<SetElem> {
        self.subsets().into_iter().filter(|s| !s.is_empty()).collect()
    }
}

impl Hash for SetElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        for a in self.atoms() {
            a.hash(state);
        }
        self.universe_len().hash(state);
    }
}

impl Ord for SetElem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.atoms().cmp(other.atoms()))
    }
}

impl PartialOrd for SetElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for SetElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.atoms().map(|a| a.0)).finish()
    }
}

/// A finite sequence of labels. Ordered shortlex.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Label>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<Label>) -> Self {
        Word(letters)
    }

    pub fn letter(l: Label) -> Self {
        Word(vec![l])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Label] {
        &self.0
    }

    pub fn first(&self) -> Option<Label> {
        self.0.first().copied()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn pushed(&self, l: Label) -> Word {
        let mut v = self.0.clone();
        v.push(l);
        Word(v)
    }

    /// Letters `i+1 ..= j` in one-based terms, i.e. the slice `[i, j)`.
    pub fn slice(&self, i: usize, j: usize) -> Word {
        Word(self.0[i..j].to_vec())
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    /// `Some(rest)` when `self = prefix · rest`.
    pub fn strip_prefix(&self, prefix: &Word) -> Option<Word> {
        self.0.strip_prefix(prefix.0.as_slice()).map(|r| Word(r.to_vec()))
    }
}

impl FromIterator<Label> for Word {
    fn from_iter<T: IntoIterator<Item = Label>>(iter: T) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter().map(|l| l.0)).finish()
    }
}

/// A finite generalized Boolean dynamical system.
///
/// Each label carries a partial atom map `g` whose preimage map is the
/// label's action, and an ideal generator that must contain the map's domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gbds {
    universe: AtomUniverse,
    labels: Vec<String>,
    label_index: HashMap<String, Label>,
    maps: Vec<Vec<Option<Atom>>>,
    ideals: Vec<SetElem>,
    preimages: Vec<Vec<Vec<Atom>>>,
    sinks: SetElem,
}

/// Collects system data by name and validates it in [`GbdsBuilder::build`].
#[derive(Debug, Clone, Default)]
pub struct GbdsBuilder {
    atoms: Vec<String>,
    labels: Vec<String>,
    maps: Vec<(String, String, String)>,
    ideals: Vec<(String, Vec<String>)>,
}

impl GbdsBuilder {
    pub fn atoms<I, S>(mut self, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.atoms.extend(names.into_iter().map(Into::into));
        self
    }

    pub fn label(mut self, name: impl Into<String>) -> Self {
        self.labels.push(name.into());
        self
    }

    /// Records `g_label(from) = to`.
    pub fn map(mut self, label: &str, from: &str, to: &str) -> Self {
        self.maps.push((label.into(), from.into(), to.into()));
        self
    }

    pub fn ideal<I, S>(mut self, label: &str, atoms: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.ideals
            .push((label.into(), atoms.into_iter().map(Into::into).collect()));
        self
    }

    pub fn build(self) -> Result<Gbds, SystemError> {
        let universe = AtomUniverse::new(self.atoms)?;
        let n = universe.len();
        let mut label_index = HashMap::new();
        for (i, l) in self.labels.iter().enumerate() {
            if label_index.insert(l.clone(), Label(i as u32)).is_some() {
                return Err(SystemError::DuplicateLabel(l.clone()));
            }
        }
        let lookup = |name: &str| {
            label_index
                .get(name)
                .copied()
                .ok_or_else(|| SystemError::UnknownLabel(name.to_string()))
        };
        let mut maps = vec![vec![None; n]; self.labels.len()];
        for (l, from, to) in &self.maps {
            let label = lookup(l)?;
            let (x, y) = (universe.atom(from)?, universe.atom(to)?);
            let slot = &mut maps[label.index()][x.index()];
            if slot.is_some() {
                return Err(SystemError::DoubleMapping {
                    label: l.clone(),
                    atom: from.clone(),
                });
            }
            *slot = Some(y);
        }
        let mut ideals = vec![SetElem::empty(n); self.labels.len()];
        for (l, atoms) in &self.ideals {
            let label = lookup(l)?;
            for a in atoms {
                ideals[label.index()].insert(universe.atom(a)?);
            }
        }
        Gbds::from_parts(universe, self.labels, maps, ideals)
    }
}

impl Gbds {
    pub fn builder() -> GbdsBuilder {
        GbdsBuilder::default()
    }

    /// Assembles a system from indexed data, checking `dom(g_α) ⊆ G_α`.
    pub fn from_parts(
        universe: AtomUniverse,
        labels: Vec<String>,
        maps: Vec<Vec<Option<Atom>>>,
        ideals: Vec<SetElem>,
    ) -> Result<Gbds, SystemError> {
        let n = universe.len();
        let mut label_index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if label_index.insert(l.clone(), Label(i as u32)).is_some() {
                return Err(SystemError::DuplicateLabel(l.clone()));
            }
        }
        let mut preimages = vec![vec![Vec::new(); n]; labels.len()];
        for (li, table) in maps.iter().enumerate() {
            for (x, y) in table.iter().enumerate() {
                if let Some(y) = y {
                    if !ideals[li].contains(Atom(x as u32)) {
                        return Err(SystemError::DomainOutsideIdeal {
                            label: labels[li].clone(),
                            atom: universe.name(Atom(x as u32)).to_string(),
                        });
                    }
                    preimages[li][y.index()].push(Atom(x as u32));
                }
            }
        }
        let sinks = SetElem::from_atoms(
            n,
            universe
                .atoms()
                .filter(|x| preimages.iter().all(|p| p[x.index()].is_empty())),
        );
        Ok(Gbds {
            universe,
            labels,
            label_index,
            maps,
            ideals,
            preimages,
            sinks,
        })
    }

    pub fn universe(&self) -> &AtomUniverse {
        &self.universe
    }

    pub fn atom_count(&self) -> usize {
        self.universe.len()
    }

    pub fn atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        self.universe.atoms()
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        (0..self.labels.len() as u32).map(Label)
    }

    pub fn label_count(&self) -> usize {
        self.labels.len()
    }

    pub fn atom(&self, name: &str) -> Result<Atom, SystemError> {
        self.universe.atom(name)
    }

    pub fn atom_name(&self, atom: Atom) -> &str {
        self.universe.name(atom)
    }

    pub fn label(&self, name: &str) -> Result<Label, SystemError> {
        self.label_index
            .get(name)
            .copied()
            .ok_or_else(|| SystemError::UnknownLabel(name.to_string()))
    }

    pub fn label_name(&self, label: Label) -> &str {
        &self.labels[label.index()]
    }

    pub fn empty_set(&self) -> SetElem {
        SetElem::empty(self.atom_count())
    }

    pub fn full_set(&self) -> SetElem {
        SetElem::full(self.atom_count())
    }

    pub fn singleton(&self, atom: Atom) -> SetElem {
        SetElem::singleton(self.atom_count(), atom)
    }

    /// Builds a set from atom names.
    pub fn set(&self, names: &[&str]) -> Result<SetElem, SystemError> {
        let atoms = names
            .iter()
            .map(|n| self.atom(n))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SetElem::from_atoms(self.atom_count(), atoms))
    }

    /// Builds a word from label names.
    pub fn word(&self, names: &[&str]) -> Result<Word, SystemError> {
        names.iter().map(|n| self.label(n)).collect()
    }

    /// Parses a word written either as whitespace or `.` separated label
    /// names, or, when every label is a single character, as a bare string.
    /// `""`, `"∅"` and `"-"` denote the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word, SystemError> {
        let text = text.trim();
        if text.is_empty() || text == "∅" || text == "-" {
            return Ok(Word::empty());
        }
        if text.contains(|c: char| c.is_whitespace() || c == '.') {
            return text
                .split(|c: char| c.is_whitespace() || c == '.')
                .filter(|t| !t.is_empty())
                .map(|t| self.label(t))
                .collect();
        }
        if let Ok(l) = self.label(text) {
            return Ok(Word::letter(l));
        }
        if self.labels.iter().all(|l| l.chars().count() == 1) {
            return text.chars().map(|c| self.label(&c.to_string())).collect();
        }
        Err(SystemError::UnknownLabel(text.to_string()))
    }

    /// `g_label(atom)`, when defined.
    pub fn image(&self, label: Label, atom: Atom) -> Option<Atom> {
        self.maps[label.index()][atom.index()]
    }

    /// Atoms sent to `atom` by `g_label`, in atom order.
    pub fn preimage(&self, label: Label, atom: Atom) -> &[Atom] {
        &self.preimages[label.index()][atom.index()]
    }

    /// The domain of `g_label`.
    pub fn domain(&self, label: Label) -> SetElem {
        SetElem::from_atoms(
            self.atom_count(),
            self.atoms().filter(|x| self.image(label, *x).is_some()),
        )
    }

    /// The ideal generator `G_label`.
    pub fn generator(&self, label: Label) -> &SetElem {
        &self.ideals[label.index()]
    }

    /// `g_{w₁}(g_{w₂}(⋯ g_{wₙ}(atom)))`, applying the last letter first.
    pub fn push_down(&self, word: &Word, atom: Atom) -> Option<Atom> {
        word.letters()
            .iter()
            .rev()
            .try_fold(atom, |x, l| self.image(*l, x))
    }

    /// The action of one label: the preimage of `set` under `g_label`.
    pub fn act(&self, label: Label, set: &SetElem) -> SetElem {
        let mut out = self.empty_set();
        for y in set.atoms() {
            for x in self.preimage(label, y) {
                out.insert(*x);
            }
        }
        out
    }

    /// The action of a word, first letter applied first.
    pub fn act_word(&self, word: &Word, set: &SetElem) -> SetElem {
        word.letters()
            .iter()
            .fold(set.clone(), |acc, l| self.act(*l, &acc))
    }

    /// Generator of the ideal attached to a word; the full set for the empty word.
    pub fn ideal_gen(&self, word: &Word) -> SetElem {
        match word.first() {
            None => self.full_set(),
            Some(first) => {
                self.act_word(&word.slice(1, word.len()), self.generator(first))
            }
        }
    }

    pub fn is_admissible(&self, word: &Word) -> bool {
        !self.ideal_gen(word).is_empty()
    }

    /// Number of labels whose action does not kill `set`.
    pub fn out_degree(&self, set: &SetElem) -> usize {
        self.labels()
            .filter(|l| !self.act(*l, set).is_empty())
            .count()
    }

    /// Labels whose action does not kill `set`.
    pub fn emitters(&self, set: &SetElem) -> Vec<Label> {
        self.labels()
            .filter(|l| !self.act(*l, set).is_empty())
            .collect()
    }

    /// A set is regular iff none of its atoms is a sink.
    pub fn is_regular(&self, set: &SetElem) -> bool {
        set.is_disjoint(&self.sinks)
    }

    /// Atoms outside the image of every label map.
    pub fn sink_atoms(&self) -> &SetElem {
        &self.sinks
    }

    pub fn is_sink(&self, atom: Atom) -> bool {
        self.sinks.contains(atom)
    }

    /// All words of length at most `max_len`, shortlex ordered.
    pub fn words(&self, max_len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        let mut frontier = vec![Word::empty()];
        for _ in 0..max_len {
            let next: Vec<Word> = frontier
                .iter()
                .flat_map(|w| self.labels().map(move |l| w.pushed(l)))
                .collect();
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    /// Words of length at most `max_len` with nonempty ideal generator.
    pub fn admissible_words(&self, max_len: usize) -> Vec<Word> {
        self.words(max_len)
            .into_iter()
            .filter(|w| self.is_admissible(w))
            .collect()
    }

    pub fn show_word(&self, word: &Word) -> String {
        if word.is_empty() {
            return "∅".to_string();
        }
        let short = self.labels.iter().all(|l| l.chars().count() == 1);
        let names: Vec<&str> = word.letters().iter().map(|l| self.label_name(*l)).collect();
        if short {
            names.concat()
        } else {
            names.join(".")
        }
    }

    pub fn show_set(&self, set: &SetElem) -> String {
        let names: Vec<&str> = set.atoms().map(|a| self.atom_name(a)).collect();
        format!("{{{}}}", names.join(","))
    }
}
