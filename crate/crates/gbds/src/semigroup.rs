//! The inverse semigroup of a system: triples `(left, mid, right)` plus zero.

use thiserror::Error;

use crate::boolean::{Gbds, SetElem, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemigroupError {
    #[error("the middle set of a nonzero element must be nonempty")]
    EmptyMiddle,
    #[error("middle set {mid} is not contained in the ideal generator {generator} of word `{word}`")]
    OutsideIdeal {
        word: String,
        mid: String,
        generator: String,
    },
    #[error("expected an idempotent, got {0}")]
    NotIdempotent(String),
}

/// An element of the inverse semigroup.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Triple {
    Zero,
    NonZero {
        left: Word,
        right: Word,
        mid: SetElem,
    },
}

impl Triple {
    /// Validates `mid ≠ ∅` and `mid ⊆ ideal_gen(left) ∩ ideal_gen(right)`.
    pub fn new(sys: &Gbds, left: Word, mid: SetElem, right: Word) -> Result<Triple, SemigroupError> {
        if mid.is_empty() {
            return Err(SemigroupError::EmptyMiddle);
        }
        for w in [&left, &right] {
            let generator = sys.ideal_gen(w);
            if !mid.is_subset(&generator) {
                return Err(SemigroupError::OutsideIdeal {
                    word: sys.show_word(w),
                    mid: sys.show_set(&mid),
                    generator: sys.show_set(&generator),
                });
            }
        }
        Ok(Triple::NonZero { left, right, mid })
    }

    pub fn idempotent(sys: &Gbds, word: Word, mid: SetElem) -> Result<Triple, SemigroupError> {
        Triple::new(sys, word.clone(), mid, word)
    }

    /// Builds from names, e.g. `("ab", &["v3"], "b")`.
    pub fn parse(sys: &Gbds, left: &str, mid: &[&str], right: &str) -> Result<Triple, crate::Error> {
        let left = sys.parse_word(left)?;
        let right = sys.parse_word(right)?;
        let mid = sys.set(mid)?;
        Ok(Triple::new(sys, left, mid, right)?)
    }

    /// Assembles without validation; the caller guarantees the invariants.
    pub(crate) fn raw(left: Word, mid: SetElem, right: Word) -> Triple {
        if mid.is_empty() {
            Triple::Zero
        } else {
            Triple::NonZero { left, right, mid }
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Triple::Zero)
    }

    pub fn parts(&self) -> Option<(&Word, &SetElem, &Word)> {
        match self {
            Triple::Zero => None,
            Triple::NonZero { left, right, mid } => Some((left, mid, right)),
        }
    }

    pub fn left(&self) -> Option<&Word> {
        self.parts().map(|p| p.0)
    }

    pub fn mid(&self) -> Option<&SetElem> {
        self.parts().map(|p| p.1)
    }

    pub fn right(&self) -> Option<&Word> {
        self.parts().map(|p| p.2)
    }

    pub fn star(&self) -> Triple {
        match self {
            Triple::Zero => Triple::Zero,
            Triple::NonZero { left, right, mid } => Triple::NonZero {
                left: right.clone(),
                right: left.clone(),
                mid: mid.clone(),
            },
        }
    }

    pub fn is_idempotent(&self) -> bool {
        match self {
            Triple::Zero => true,
            Triple::NonZero { left, right, .. } => left == right,
        }
    }

    /// `|left| − |right|`; zero for the zero element.
    pub fn degree(&self) -> i64 {
        self.parts()
            .map_or(0, |(l, _, r)| l.len() as i64 - r.len() as i64)
    }

    pub fn show(&self, sys: &Gbds) -> String {
        match self.parts() {
            None => "0".to_string(),
            Some((l, m, r)) => format!(
                "({},{},{})",
                sys.show_word(l),
                sys.show_set(m),
                sys.show_word(r)
            ),
        }
    }
}

/// The semigroup product.
pub fn product(sys: &Gbds, s: &Triple, t: &Triple) -> Triple {
    let (Some((alpha, a, beta)), Some((gamma, b, delta))) = (s.parts(), t.parts()) else {
        return Triple::Zero;
    };
    if beta == gamma {
        return Triple::raw(alpha.clone(), a.intersection(b), delta.clone());
    }
    if let Some(ext) = gamma.strip_prefix(beta) {
        let mid = sys.act_word(&ext, a).intersection(b);
        return Triple::raw(alpha.concat(&ext), mid, delta.clone());
    }
    if let Some(ext) = beta.strip_prefix(gamma) {
        let mid = a.intersection(&sys.act_word(&ext, b));
        return Triple::raw(alpha.clone(), mid, delta.concat(&ext));
    }
    Triple::Zero
}

/// Natural order on idempotents: `(α,A,α) ≤ (β,B,β)` iff `α = βα′` and
/// `A ⊆ act(α′, B)`. Zero is below everything.
pub fn leq(sys: &Gbds, p: &Triple, q: &Triple) -> Result<bool, SemigroupError> {
    for e in [p, q] {
        if !e.is_idempotent() {
            return Err(SemigroupError::NotIdempotent(e.show(sys)));
        }
    }
    let Some((alpha, a, _)) = p.parts() else {
        return Ok(true);
    };
    let Some((beta, b, _)) = q.parts() else {
        return Ok(false);
    };
    Ok(match alpha.strip_prefix(beta) {
        Some(ext) => a.is_subset(&sys.act_word(&ext, b)),
        None => false,
    })
}

/// All nonzero elements with both words of length at most `max_word_len`,
/// in canonical order.
pub fn enumerate_elements(sys: &Gbds, max_word_len: usize) -> Vec<Triple> {
    let words: Vec<(Word, SetElem)> = sys
        .admissible_words(max_word_len)
        .into_iter()
        .map(|w| {
            let g = sys.ideal_gen(&w);
            (w, g)
        })
        .collect();
    let mut out = Vec::new();
    for (left, gl) in &words {
        for (right, gr) in &words {
            for mid in gl.intersection(gr).nonempty_subsets() {
                out.push(Triple::raw(left.clone(), mid, right.clone()));
            }
        }
    }
    out.sort();
    out
}

/// Nonzero idempotents with word length at most `max_word_len`.
pub fn enumerate_idempotents(sys: &Gbds, max_word_len: usize) -> Vec<Triple> {
    let mut out: Vec<Triple> = sys
        .admissible_words(max_word_len)
        .into_iter()
        .flat_map(|w| {
            sys.ideal_gen(&w)
                .nonempty_subsets()
                .into_iter()
                .map(move |m| Triple::raw(w.clone(), m, w.clone()))
        })
        .collect();
    out.sort();
    out
}

/// Atomic idempotents `(word·ext, {y}, word·ext)` below `x` with `|ext| ≤ depth`.
pub fn atomic_below(sys: &Gbds, x: &Triple, depth: usize) -> Vec<Triple> {
    let Some((word, mid, _)) = x.parts() else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for ext in sys.words(depth) {
        let full = word.concat(&ext);
        let region = sys.act_word(&ext, mid).intersection(&sys.ideal_gen(&full));
        for y in region.atoms() {
            out.push(Triple::raw(full.clone(), sys.singleton(y), full.clone()));
        }
    }
    out
}

/// Whether `cover` is a cover of the idempotent `x`: every nonzero idempotent
/// below `x` meets some member of `cover`.
///
/// Atomic idempotents are probed to depth `probe_depth` beyond `x`'s word,
/// raised if needed to reach the longest word in `cover`. Past that depth an
/// atomic idempotent lies below its truncation, so the probe is exact.
pub fn is_cover(
    sys: &Gbds,
    cover: &[Triple],
    x: &Triple,
    probe_depth: usize,
) -> Result<bool, SemigroupError> {
    for e in cover.iter().chain([x]) {
        if !e.is_idempotent() {
            return Err(SemigroupError::NotIdempotent(e.show(sys)));
        }
    }
    let Some(base_len) = x.left().map(Word::len) else {
        return Ok(true);
    };
    let needed = cover
        .iter()
        .filter_map(Triple::left)
        .map(|w| w.len().saturating_sub(base_len))
        .max()
        .unwrap_or(0);
    let depth = probe_depth.max(needed);
    Ok(atomic_below(sys, x, depth)
        .iter()
        .all(|q| cover.iter().any(|z| !product(sys, q, z).is_zero())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn t(sys: &Gbds, l: &str, m: &[&str], r: &str) -> Triple {
        Triple::parse(sys, l, m, r).unwrap()
    }

    #[test]
    fn product_matching_words() {
        let sys = fixtures::path3();
        let s = t(&sys, "a", &["v2"], "");
        let p = t(&sys, "", &["v2"], "");
        assert_eq!(product(&sys, &s, &p), s);
    }

    #[test]
    fn product_pushes_middle_along_extension() {
        let sys = fixtures::path3();
        let p = t(&sys, "", &["v1"], "");
        let s = t(&sys, "a", &["v2"], "");
        assert_eq!(product(&sys, &p, &s), s);
        let q = t(&sys, "", &["v2"], "");
        assert_eq!(product(&sys, &q, &s), Triple::Zero);
    }

    #[test]
    fn zero_absorbs() {
        let sys = fixtures::path3();
        let s = t(&sys, "a", &["v2"], "");
        assert!(product(&sys, &s, &Triple::Zero).is_zero());
        assert!(product(&sys, &Triple::Zero, &s).is_zero());
    }

    #[test]
    fn star_swaps_words() {
        let sys = fixtures::path3();
        let s = t(&sys, "a", &["v2"], "");
        assert_eq!(s.star(), t(&sys, "", &["v2"], "a"));
        assert_eq!(Triple::Zero.star(), Triple::Zero);
        let u = t(&sys, "ab", &["v3"], "b");
        assert_eq!(u.star().star(), u);
    }

    #[test]
    fn order_examples() {
        let sys = fixtures::path3();
        let a = t(&sys, "a", &["v2"], "a");
        let top = t(&sys, "", &["v1"], "");
        let ab = t(&sys, "ab", &["v3"], "ab");
        assert!(leq(&sys, &a, &top).unwrap());
        assert!(!leq(&sys, &top, &a).unwrap());
        assert!(leq(&sys, &ab, &a).unwrap());
        let s = t(&sys, "a", &["v2"], "");
        assert!(matches!(
            leq(&sys, &s, &top),
            Err(SemigroupError::NotIdempotent(_))
        ));
    }

    #[test]
    fn invalid_triples_are_rejected() {
        let sys = fixtures::path3();
        let err = Triple::parse(&sys, "a", &["v2"], "b").unwrap_err();
        assert!(matches!(
            err,
            crate::Error::Semigroup(SemigroupError::OutsideIdeal { .. })
        ));
        let err = Triple::parse(&sys, "a", &[], "a").unwrap_err();
        assert!(matches!(err, crate::Error::Semigroup(SemigroupError::EmptyMiddle)));
    }

    #[test]
    fn enumeration_counts() {
        let loop1 = fixtures::loop1();
        assert_eq!(
            enumerate_elements(&loop1, 0),
            vec![t(&loop1, "", &["w"], "")]
        );
        let sys = fixtures::path3();
        let zero_len = enumerate_elements(&sys, 0);
        assert_eq!(zero_len.len(), 7);
        assert!(zero_len.iter().all(Triple::is_idempotent));
        let one = enumerate_elements(&sys, 1);
        let a = sys.parse_word("a").unwrap();
        let b = sys.parse_word("b").unwrap();
        assert!(!one.contains(&Triple::raw(a, sys.set(&["v2"]).unwrap(), b)));
    }

    #[test]
    fn cover_examples() {
        let sys = fixtures::path3();
        let x = t(&sys, "", &["v2"], "");
        assert!(is_cover(&sys, &[t(&sys, "b", &["v3"], "b")], &x, 1).unwrap());
        let sink = t(&sys, "", &["v3"], "");
        assert!(!is_cover(&sys, &[], &sink, 1).unwrap());

        let ghost = fixtures::ghost();
        let x = t(&ghost, "", &["u"], "");
        assert!(is_cover(&ghost, &[t(&ghost, "a", &["v"], "a")], &x, 1).unwrap());
    }

    #[test]
    fn partial_cover_is_not_a_cover() {
        let sys = fixtures::branch();
        let root = t(&sys, "", &["r"], "");
        let only_a = [t(&sys, "a", &["p"], "a")];
        assert!(!is_cover(&sys, &only_a, &root, 1).unwrap());
        let both = [t(&sys, "a", &["p"], "a"), t(&sys, "b", &["q"], "b")];
        assert!(is_cover(&sys, &both, &root, 1).unwrap());
        // Deeper members force a deeper probe.
        let deep = [
            t(&sys, "aa", &["s"], "aa"),
            t(&sys, "ab", &["t"], "ab"),
            t(&sys, "b", &["q"], "b"),
        ];
        assert!(is_cover(&sys, &deep, &root, 0).unwrap());
        assert!(!is_cover(&sys, &deep[1..], &root, 0).unwrap());
    }
}
