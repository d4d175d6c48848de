//! Moving ultrafilters between ideals and cutting or gluing word prefixes of
//! tight filters. Everything reduces to carrying one atom around; the
//! [`oracle`] module redoes the ultrafilter maps on explicit set families.

use thiserror::Error;

use crate::boolean::{Atom, Gbds, Word};
use crate::filters::{Filter, Step};
use crate::lasso::Lasso;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurgeryError {
    #[error("atom {atom} is not in the ideal generator of `{word}`")]
    NotInIdeal { word: String, atom: String },
    #[error("ultrafilter lives over `{found}`, expected `{expected}`")]
    WrongWord { expected: String, found: String },
    #[error("projection to the nonempty word `{0}` came out empty")]
    EmptyProjection(String),
    #[error("`{prefix}` is not a prefix of the filter's word")]
    NotAPrefix { prefix: String },
    #[error("filter cannot take `{prefix}` glued on: its level-zero atom is missing or outside the ideal")]
    NotGluable { prefix: String },
}

/// The principal ultrafilter `{A ∈ I_word : atom ∈ A}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UltraRef {
    pub word: Word,
    pub atom: Atom,
}

impl UltraRef {
    pub fn new(sys: &Gbds, word: Word, atom: Atom) -> Result<UltraRef, SurgeryError> {
        if !sys.ideal_gen(&word).contains(atom) {
            return Err(SurgeryError::NotInIdeal {
                word: sys.show_word(&word),
                atom: sys.atom_name(atom).to_string(),
            });
        }
        Ok(UltraRef { word, atom })
    }

    pub fn parse(sys: &Gbds, word: &str, atom: &str) -> Result<UltraRef, crate::Error> {
        Ok(UltraRef::new(sys, sys.parse_word(word)?, sys.atom(atom)?)?)
    }
}

fn expect_word(sys: &Gbds, f: &UltraRef, expected: &Word) -> Result<(), SurgeryError> {
    if &f.word != expected {
        return Err(SurgeryError::WrongWord {
            expected: sys.show_word(expected),
            found: sys.show_word(&f.word),
        });
    }
    Ok(())
}

/// `{A ∈ I_α : act(β, A) ∈ F}` for `F` over `αβ`: the atom pushed down along
/// `β`. Only an empty `α` can give the empty result `None`.
pub fn project(
    sys: &Gbds,
    alpha: &Word,
    beta: &Word,
    f: &UltraRef,
) -> Result<Option<UltraRef>, SurgeryError> {
    expect_word(sys, f, &alpha.concat(beta))?;
    match sys.push_down(beta, f.atom) {
        Some(x) => Ok(Some(UltraRef {
            word: alpha.clone(),
            atom: x,
        })),
        None if alpha.is_empty() => Ok(None),
        None => Err(SurgeryError::EmptyProjection(sys.show_word(alpha))),
    }
}

/// `F ∩ I_{αβ}` for `F` over `β` meeting `I_{αβ}`.
pub fn lift(sys: &Gbds, alpha: &Word, beta: &Word, f: &UltraRef) -> Result<UltraRef, SurgeryError> {
    expect_word(sys, f, beta)?;
    UltraRef::new(sys, alpha.concat(beta), f.atom)
}

/// The up-closure in `I_β` of `F` over `αβ`.
pub fn lower(sys: &Gbds, alpha: &Word, beta: &Word, f: &UltraRef) -> Result<UltraRef, SurgeryError> {
    expect_word(sys, f, &alpha.concat(beta))?;
    Ok(UltraRef {
        word: beta.clone(),
        atom: f.atom,
    })
}

/// Removes the prefix `alpha` from a tight filter's word; the atom at
/// `|alpha|` becomes the new level-zero atom.
pub fn cut(sys: &Gbds, xi: &Filter, alpha: &Word) -> Result<Filter, SurgeryError> {
    if !xi.has_prefix(alpha) {
        return Err(SurgeryError::NotAPrefix {
            prefix: sys.show_word(alpha),
        });
    }
    if alpha.is_empty() {
        return Ok(xi.clone());
    }
    let steps = xi.steps().expect("nonempty prefix implies a path");
    let vertex = steps.get(alpha.len() - 1).expect("checked length").atom;
    let rest = steps.drop_front(alpha.len()).expect("checked length");
    Ok(Filter::from_steps_unchecked(rest, vertex))
}

/// Whether `glue(xi, alpha)` is defined: the level-zero atom exists and lies
/// in the ideal generator of `alpha`.
pub fn can_glue(sys: &Gbds, xi: &Filter, alpha: &Word) -> bool {
    alpha.is_empty()
        || xi
            .base(sys)
            .is_some_and(|b| sys.ideal_gen(alpha).contains(b))
}

/// Prepends `alpha`, filling the new levels by pushing the old level-zero
/// atom down along `alpha`.
pub fn glue(sys: &Gbds, xi: &Filter, alpha: &Word) -> Result<Filter, SurgeryError> {
    if alpha.is_empty() {
        return Ok(xi.clone());
    }
    if !can_glue(sys, xi, alpha) {
        return Err(SurgeryError::NotGluable {
            prefix: sys.show_word(alpha),
        });
    }
    let mut atom = xi.base(sys).expect("checked by can_glue");
    let mut new_steps = Vec::with_capacity(alpha.len());
    for (i, &label) in alpha.letters().iter().enumerate().rev() {
        new_steps.push(Step { label, atom });
        if i > 0 {
            atom = sys
                .image(label, atom)
                .expect("atom in the ideal generator pushes down");
        }
    }
    new_steps.reverse();
    let steps = match xi {
        Filter::Vertex(_) => Lasso::finite(new_steps),
        Filter::Path(s) => s.prepend(&new_steps),
    };
    Ok(Filter::Path(steps))
}

/// Shift: cut the first letter.
pub fn shift(sys: &Gbds, xi: &Filter) -> Option<Filter> {
    let first = xi.letter(1)?;
    cut(sys, xi, &Word::letter(first)).ok()
}

/// Ultrafilters as explicit families of sets, for checking the atom
/// bookkeeping above on small universes.
pub mod oracle {
    use crate::boolean::{Atom, Gbds, SetElem, Word};

    use super::UltraRef;

    /// Members of the ideal generated by `word`'s generator.
    pub fn ideal(sys: &Gbds, word: &Word) -> Vec<SetElem> {
        sys.ideal_gen(word).subsets()
    }

    pub fn materialize(sys: &Gbds, f: &UltraRef) -> Vec<SetElem> {
        ideal(sys, &f.word)
            .into_iter()
            .filter(|a| a.contains(f.atom))
            .collect()
    }

    /// The atom `x` when `family` is exactly `{A ∈ I_word : x ∈ A}`.
    pub fn principal_atom(sys: &Gbds, word: &Word, family: &[SetElem]) -> Option<Atom> {
        let meet = family
            .iter()
            .fold(sys.full_set(), |acc, a| acc.intersection(a));
        let mut atoms = meet.atoms();
        let x = atoms.next()?;
        if atoms.next().is_some() {
            return None;
        }
        let expected: Vec<SetElem> = ideal(sys, word).into_iter().filter(|a| a.contains(x)).collect();
        let mut got = family.to_vec();
        got.sort();
        (got == expected).then_some(x)
    }

    /// `{A ∈ I_α : act(β, A) ∈ F}`.
    pub fn project(sys: &Gbds, alpha: &Word, beta: &Word, family: &[SetElem]) -> Vec<SetElem> {
        ideal(sys, alpha)
            .into_iter()
            .filter(|a| family.contains(&sys.act_word(beta, a)))
            .collect()
    }

    /// `F ∩ I_{αβ}`.
    pub fn lift(sys: &Gbds, alpha: &Word, beta: &Word, family: &[SetElem]) -> Vec<SetElem> {
        let gen = sys.ideal_gen(&alpha.concat(beta));
        family.iter().filter(|a| a.is_subset(&gen)).cloned().collect()
    }

    /// `{B ∈ I_β : A ⊆ B for some A ∈ F}`.
    pub fn lower(sys: &Gbds, beta: &Word, family: &[SetElem]) -> Vec<SetElem> {
        ideal(sys, beta)
            .into_iter()
            .filter(|b| family.iter().any(|a| a.is_subset(b)))
            .collect()
    }
}
