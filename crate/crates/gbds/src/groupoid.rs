//! The boundary-path groupoid: triples `(η, k, ξ)` of tight filters with
//! `σ^m(η) = σ^n(ξ)` and `k = m − n`, together with germs of the inverse
//! semigroup and the map sending a germ to its triple.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::boolean::{Atom, Gbds, Word};
use crate::filters::{self, enumerate_tight, Filter, FilterError};
use crate::lasso::Continuations;
use crate::semigroup::{product, Triple};
use crate::surgery::{self, cut, glue, SurgeryError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupoidError {
    #[error("{range} and {domain} have no common tail at degree {degree}")]
    Unrelated {
        range: String,
        degree: i64,
        domain: String,
    },
    #[error("elements are not composable")]
    NotComposable,
    #[error("germ of {element} is not defined at {filter}")]
    NotInDomain { element: String, filter: String },
    #[error("germs sit at different filters")]
    DifferentFilters,
    #[error("the shift is not defined on a filter with empty word")]
    ShiftOfVertex,
    #[error("the boundary path space is infinite")]
    InfiniteBoundary,
    #[error(transparent)]
    Surgery(#[from] SurgeryError),
    #[error(transparent)]
    Filter(#[from] FilterError),
}

/// `σ^m(xi)`, the filter with its first `m` letters cut.
pub fn shift_pow(sys: &Gbds, xi: &Filter, m: usize) -> Option<Filter> {
    let prefix = xi.word_prefix(m)?;
    cut(sys, xi, &prefix).ok()
}

/// The shift on tight filters with nonempty word.
pub fn sigma(sys: &Gbds, xi: &Filter) -> Result<Filter, GroupoidError> {
    surgery::shift(sys, xi).ok_or(GroupoidError::ShiftOfVertex)
}

/// An element `(range, degree, source)`, stored with its shortest stems:
/// `range = glue(tail, left_stem)` and `source = glue(tail, right_stem)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupoidElem {
    source: Filter,
    range: Filter,
    degree: i64,
    left_stem: Word,
    right_stem: Word,
    tail: Filter,
}

fn lasso_bound(xi: &Filter) -> (usize, usize) {
    match xi.steps() {
        None => (0, 1),
        Some(s) => (s.prefix().len(), s.cycle().len().max(1)),
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl GroupoidElem {
    /// Finds the shortest stems presenting `(range, degree, source)`.
    pub fn from_triple(
        sys: &Gbds,
        range: &Filter,
        degree: i64,
        source: &Filter,
    ) -> Result<GroupoidElem, GroupoidError> {
        let (pr, cr) = lasso_bound(range);
        let (ps, cs) = lasso_bound(source);
        let bound = pr + ps + degree.unsigned_abs() as usize + cr / gcd(cr, cs) * cs + 1;
        let start = degree.max(0) as usize;
        for m in start..=bound {
            let n = (m as i64 - degree) as usize;
            let (Some(left), Some(right)) = (range.word_prefix(m), source.word_prefix(n)) else {
                break;
            };
            let tail = cut(sys, range, &left)?;
            if cut(sys, source, &right)? == tail {
                return Ok(GroupoidElem {
                    source: source.clone(),
                    range: range.clone(),
                    degree,
                    left_stem: left,
                    right_stem: right,
                    tail,
                });
            }
        }
        Err(GroupoidError::Unrelated {
            range: range.show(sys),
            degree,
            domain: source.show(sys),
        })
    }

    /// `(glue(tail, left), |left| − |right|, glue(tail, right))`.
    pub fn from_stems(
        sys: &Gbds,
        left: &Word,
        right: &Word,
        tail: &Filter,
    ) -> Result<GroupoidElem, GroupoidError> {
        let range = glue(sys, tail, left)?;
        let source = glue(sys, tail, right)?;
        let degree = left.len() as i64 - right.len() as i64;
        GroupoidElem::from_triple(sys, &range, degree, &source)
    }

    pub fn unit(xi: &Filter) -> GroupoidElem {
        GroupoidElem {
            source: xi.clone(),
            range: xi.clone(),
            degree: 0,
            left_stem: Word::empty(),
            right_stem: Word::empty(),
            tail: xi.clone(),
        }
    }

    pub fn range(&self) -> &Filter {
        &self.range
    }

    pub fn source(&self) -> &Filter {
        &self.source
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn left_stem(&self) -> &Word {
        &self.left_stem
    }

    pub fn right_stem(&self) -> &Word {
        &self.right_stem
    }

    pub fn tail(&self) -> &Filter {
        &self.tail
    }

    pub fn is_unit(&self) -> bool {
        self.degree == 0 && self.source == self.range
    }

    pub fn inverse(&self) -> GroupoidElem {
        GroupoidElem {
            source: self.range.clone(),
            range: self.source.clone(),
            degree: -self.degree,
            left_stem: self.right_stem.clone(),
            right_stem: self.left_stem.clone(),
            tail: self.tail.clone(),
        }
    }

    pub fn show(&self, sys: &Gbds) -> String {
        format!(
            "({}, {}, {}) stems {}|{}",
            self.range.show(sys),
            self.degree,
            self.source.show(sys),
            sys.show_word(&self.left_stem),
            sys.show_word(&self.right_stem)
        )
    }
}

/// `(η, m, ξ)(ξ, n, ρ) = (η, m + n, ρ)`.
pub fn compose(
    sys: &Gbds,
    a: &GroupoidElem,
    b: &GroupoidElem,
) -> Result<GroupoidElem, GroupoidError> {
    if a.source != b.range {
        return Err(GroupoidError::NotComposable);
    }
    GroupoidElem::from_triple(sys, &a.range, a.degree + b.degree, &b.source)
}

/// A semigroup element acting at a tight filter in the domain of `s*s`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Germ {
    s: Triple,
    xi: Filter,
}

impl Germ {
    pub fn new(sys: &Gbds, s: Triple, xi: Filter) -> Result<Germ, GroupoidError> {
        let dom = product(sys, &s.star(), &s);
        if s.is_zero() || !xi.member(sys, &dom)? {
            return Err(GroupoidError::NotInDomain {
                element: s.show(sys),
                filter: xi.show(sys),
            });
        }
        Ok(Germ { s, xi })
    }

    pub fn element(&self) -> &Triple {
        &self.s
    }

    pub fn filter(&self) -> &Filter {
        &self.xi
    }
}

/// Sends the germ of `(β, A, γ)` at `ξ` to `(glue(cut(ξ, γ), β), |β| − |γ|, ξ)`.
pub fn germ_to_gamma(sys: &Gbds, g: &Germ) -> Result<GroupoidElem, GroupoidError> {
    let (beta, _, gamma) = g.s.parts().expect("germs have nonzero elements");
    let tail = cut(sys, &g.xi, gamma)?;
    let range = glue(sys, &tail, beta)?;
    GroupoidElem::from_triple(sys, &range, g.s.degree(), &g.xi)
}

/// Germ equivalence by comparing words: with `γ = νγ′` the germs of
/// `(μ, A, ν)` and `(β, B, γ)` agree iff `β = μγ′`.
pub fn germ_equiv(sys: &Gbds, g1: &Germ, g2: &Germ) -> Result<bool, GroupoidError> {
    let _ = sys;
    if g1.xi != g2.xi {
        return Err(GroupoidError::DifferentFilters);
    }
    let (mu, _, nu) = g1.s.parts().expect("nonzero");
    let (beta, _, gamma) = g2.s.parts().expect("nonzero");
    if let Some(ext) = gamma.strip_prefix(nu) {
        return Ok(*beta == mu.concat(&ext));
    }
    if let Some(ext) = nu.strip_prefix(gamma) {
        return Ok(*mu == beta.concat(&ext));
    }
    Ok(false)
}

/// Germ equivalence by definition: some idempotent `e` containing the
/// filter has `se = te`. Atomic idempotents along the filter are searched up
/// to word length `depth`.
pub fn germ_equiv_by_definition(
    sys: &Gbds,
    g1: &Germ,
    g2: &Germ,
    depth: usize,
) -> Result<bool, GroupoidError> {
    if g1.xi != g2.xi {
        return Err(GroupoidError::DifferentFilters);
    }
    for k in 0..=depth {
        let Some(word) = g1.xi.word_prefix(k) else {
            break;
        };
        let Some(x) = g1.xi.atom_at(sys, k) else {
            continue;
        };
        let e = Triple::raw(word.clone(), sys.singleton(x), word);
        if product(sys, &g1.s, &e) == product(sys, &g2.s, &e) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `[s, t·ξ][t, ξ] = [st, ξ]`, when the first germ sits at the range of the
/// second.
pub fn germ_product(sys: &Gbds, g1: &Germ, g2: &Germ) -> Result<Option<Germ>, GroupoidError> {
    let moved = germ_to_gamma(sys, g2)?;
    if moved.range() != &g1.xi {
        return Ok(None);
    }
    let st = product(sys, &g1.s, &g2.s);
    Ok(Some(Germ::new(sys, st, g2.xi.clone())?))
}

/// Membership in `Z_{s; e₁…eₙ}`: `g` is the germ of `s` at a filter that
/// contains `s*s` and none of the excluded idempotents.
pub fn bisection_membership(
    sys: &Gbds,
    s: &Triple,
    excl: &[Triple],
    g: &GroupoidElem,
) -> Result<bool, GroupoidError> {
    if s.is_zero() {
        return Ok(false);
    }
    let xi = g.source();
    if !xi.member(sys, &product(sys, &s.star(), s))? {
        return Ok(false);
    }
    for e in excl {
        if xi.member(sys, e)? {
            return Ok(false);
        }
    }
    let germ = Germ::new(sys, s.clone(), xi.clone())?;
    Ok(&germ_to_gamma(sys, &germ)? == g)
}

/// Generic Renault–Deaconu relation: `(p, m − n, q)` whenever
/// `shift^m(p) = shift^n(q)` with `m, n ≤ depth`.
pub fn renault_deaconu<P, F>(points: &[P], shift: F, depth: usize) -> BTreeSet<(P, i64, P)>
where
    P: Clone + Ord,
    F: Fn(&P) -> Option<P>,
{
    let orbits: Vec<Vec<P>> = points
        .iter()
        .map(|p| {
            let mut seq = vec![p.clone()];
            while seq.len() <= depth {
                match shift(seq.last().expect("nonempty")) {
                    Some(q) => seq.push(q),
                    None => break,
                }
            }
            seq
        })
        .collect();
    let mut out = BTreeSet::new();
    for (i, oi) in orbits.iter().enumerate() {
        for (j, oj) in orbits.iter().enumerate() {
            for (m, a) in oi.iter().enumerate() {
                for (n, b) in oj.iter().enumerate() {
                    if a == b {
                        out.insert((points[i].clone(), m as i64 - n as i64, points[j].clone()));
                    }
                }
            }
        }
    }
    out
}

/// Elements `(η, m − n, ξ)` with `m, n ≤ depth` among the tight filters
/// enumerated at `depth` (finite ones and cylinder representatives).
pub fn enumerate_gamma(sys: &Gbds, depth: usize) -> Vec<GroupoidElem> {
    let points = enumerate_tight(sys, depth).points();
    renault_deaconu(&points, |xi| surgery::shift(sys, xi), depth)
        .into_iter()
        .map(|(r, k, s)| GroupoidElem::from_triple(sys, &r, k, &s).expect("related by construction"))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// Length of the longest boundary path, `None` when there are infinite ones.
pub fn longest_boundary_len(sys: &Gbds) -> Option<usize> {
    let atoms: Vec<Atom> = sys.atoms().collect();
    let succ = |x: Atom| -> Vec<((), Atom)> {
        sys.labels()
            .flat_map(|l| sys.preimage(l, x).iter().map(|z| ((), *z)).collect::<Vec<_>>())
            .collect()
    };
    let cont = Continuations::new(&atoms, succ);
    if atoms.iter().any(|x| cont.has_infinite_run(*x)) {
        return None;
    }
    // Acyclic: longest chain of preimages from each atom.
    let mut memo: BTreeMap<Atom, usize> = BTreeMap::new();
    fn chain(sys: &Gbds, x: Atom, memo: &mut BTreeMap<Atom, usize>) -> usize {
        if let Some(v) = memo.get(&x) {
            return *v;
        }
        let v = sys
            .labels()
            .flat_map(|l| sys.preimage(l, x).to_vec())
            .map(|z| 1 + chain(sys, z, memo))
            .max()
            .unwrap_or(0);
        memo.insert(x, v);
        v
    }
    Some(
        sys.labels()
            .flat_map(|l| sys.generator(l).atoms().collect::<Vec<_>>())
            .map(|x| 1 + chain(sys, x, &mut memo))
            .max()
            .unwrap_or(0),
    )
}

/// The whole groupoid when the boundary path space is finite.
pub fn finite_gamma(sys: &Gbds) -> Result<Vec<GroupoidElem>, GroupoidError> {
    let depth = longest_boundary_len(sys).ok_or(GroupoidError::InfiniteBoundary)?;
    Ok(enumerate_gamma(sys, depth))
}

/// The unit space of a finite groupoid, i.e. all tight filters.
pub fn finite_units(sys: &Gbds) -> Result<Vec<Filter>, GroupoidError> {
    let depth = longest_boundary_len(sys).ok_or(GroupoidError::InfiniteBoundary)?;
    Ok(enumerate_tight(sys, depth).finite)
}

/// Partitions units into orbits; returned sorted by size, then contents.
pub fn orbits(elems: &[GroupoidElem]) -> Vec<Vec<Filter>> {
    let mut class: BTreeMap<Filter, usize> = BTreeMap::new();
    let mut members: Vec<BTreeSet<Filter>> = Vec::new();
    for g in elems.iter().filter(|g| g.is_unit()) {
        class.insert(g.source().clone(), members.len());
        members.push(BTreeSet::from([g.source().clone()]));
    }
    for g in elems {
        let (a, b) = (class[g.source()], class[g.range()]);
        if a != b {
            let moved = std::mem::take(&mut members[b]);
            for f in &moved {
                class.insert(f.clone(), a);
            }
            members[a].extend(moved);
        }
    }
    let mut out: Vec<Vec<Filter>> = members
        .into_iter()
        .filter(|m| !m.is_empty())
        .map(|m| m.into_iter().collect())
        .collect();
    out.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    out
}

/// DOT rendering: units as nodes, other elements as arrows from source to
/// range labelled by degree.
pub fn groupoid_dot(sys: &Gbds, elems: &[GroupoidElem]) -> String {
    let mut out = String::from("digraph groupoid {\n");
    for g in elems.iter().filter(|g| g.is_unit()) {
        let _ = writeln!(out, "  \"{}\";", g.source().show(sys));
    }
    for g in elems.iter().filter(|g| !g.is_unit()) {
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\" [label=\"{}\"];",
            g.source().show(sys),
            g.range().show(sys),
            g.degree()
        );
    }
    out.push_str("}\n");
    out
}

/// The filter counterpart of a groupoid `V` set: tight filters containing `e`.
pub fn in_cylinder(sys: &Gbds, xi: &Filter, e: &Triple) -> Result<bool, GroupoidError> {
    Ok(xi.member(sys, e)?)
}

pub use filters::TightEnumeration;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn f(sys: &Gbds, w: &str, atoms: &[&str]) -> Filter {
        Filter::parse(sys, w, atoms).unwrap()
    }

    #[test]
    fn composition_example() {
        let sys = fixtures::path3();
        let long = f(&sys, "ab", &["v2", "v3"]);
        let mid = f(&sys, "b", &["v3"]);
        let v = f(&sys, "", &["v3"]);
        let x = GroupoidElem::from_triple(&sys, &long, 1, &mid).unwrap();
        let y = GroupoidElem::from_triple(&sys, &mid, 1, &v).unwrap();
        let xy = compose(&sys, &x, &y).unwrap();
        assert_eq!(xy.degree(), 2);
        assert_eq!(xy.left_stem(), &sys.parse_word("ab").unwrap());
        assert!(xy.right_stem().is_empty());
        assert_eq!(xy.tail(), &v);

        let unit = GroupoidElem::unit(&long);
        assert_eq!(compose(&sys, &unit, &x).unwrap(), x);
        assert_eq!(compose(&sys, &x, &x.inverse()).unwrap(), GroupoidElem::unit(&long));
        assert_eq!(compose(&sys, &y, &x), Err(GroupoidError::NotComposable));
    }

    #[test]
    fn unrelated_triples_are_rejected() {
        let sys = fixtures::path3();
        let v = f(&sys, "", &["v3"]);
        let mid = f(&sys, "b", &["v3"]);
        assert!(GroupoidElem::from_triple(&sys, &v, 0, &mid).is_err());
    }

    #[test]
    fn germ_examples() {
        let sys = fixtures::path3();
        let s = Triple::parse(&sys, "ab", &["v3"], "").unwrap();
        let v = f(&sys, "", &["v3"]);
        let g = germ_to_gamma(&sys, &Germ::new(&sys, s, v.clone()).unwrap()).unwrap();
        assert_eq!(g, GroupoidElem::from_triple(&sys, &f(&sys, "ab", &["v2", "v3"]), 2, &v).unwrap());

        let e = Triple::parse(&sys, "b", &["v3"], "b").unwrap();
        let mid = f(&sys, "b", &["v3"]);
        let g = germ_to_gamma(&sys, &Germ::new(&sys, e, mid.clone()).unwrap()).unwrap();
        assert_eq!(g, GroupoidElem::unit(&mid));

        let loop1 = fixtures::loop1();
        let s = Triple::parse(&loop1, "a", &["w"], "").unwrap();
        let rep = Filter::periodic(&loop1, &[], &[("a", "w")]).unwrap();
        let g = germ_to_gamma(&loop1, &Germ::new(&loop1, s, rep.clone()).unwrap()).unwrap();
        assert_eq!((g.range(), g.degree(), g.source()), (&rep, 1, &rep));
        assert_eq!(g.left_stem(), &loop1.parse_word("a").unwrap());
    }

    #[test]
    fn germ_equivalence_examples() {
        let sys = fixtures::path3();
        let v = f(&sys, "", &["v3"]);
        let s = Triple::parse(&sys, "ab", &["v3"], "").unwrap();
        let g1 = Germ::new(&sys, s.clone(), v.clone()).unwrap();
        assert!(germ_equiv(&sys, &g1, &g1.clone()).unwrap());

        let mid = f(&sys, "b", &["v3"]);
        let a = Germ::new(&sys, Triple::parse(&sys, "a", &["v2"], "").unwrap(), mid.clone()).unwrap();
        let b = Germ::new(&sys, Triple::parse(&sys, "ab", &["v3"], "b").unwrap(), mid.clone()).unwrap();
        assert!(germ_equiv(&sys, &a, &b).unwrap());
        assert!(germ_equiv_by_definition(&sys, &a, &b, 3).unwrap());

        let unit = Germ::new(&sys, Triple::parse(&sys, "b", &["v3"], "b").unwrap(), mid).unwrap();
        assert!(!germ_equiv(&sys, &a, &unit).unwrap());
    }

    #[test]
    fn germ_outside_domain_is_rejected() {
        let sys = fixtures::path3();
        let s = Triple::parse(&sys, "", &["v1"], "").unwrap();
        assert!(Germ::new(&sys, s, f(&sys, "", &["v3"])).is_err());
    }

    #[test]
    fn sigma_examples() {
        let sys = fixtures::path3();
        assert_eq!(
            sigma(&sys, &f(&sys, "ab", &["v2", "v3"])).unwrap(),
            f(&sys, "b", &["v3"])
        );
        assert_eq!(sigma(&sys, &f(&sys, "", &["v3"])), Err(GroupoidError::ShiftOfVertex));
        let ghost = fixtures::ghost();
        assert_eq!(
            sigma(&ghost, &f(&ghost, "aa", &["u", "v"])).unwrap(),
            f(&ghost, "a", &["v"])
        );
        let loop1 = fixtures::loop1();
        let rep = Filter::periodic(&loop1, &[], &[("a", "w")]).unwrap();
        assert_eq!(sigma(&loop1, &rep).unwrap(), rep);
    }

    #[test]
    fn bisection_examples() {
        let sys = fixtures::path3();
        let s = Triple::parse(&sys, "ab", &["v3"], "").unwrap();
        let v = f(&sys, "", &["v3"]);
        let g = GroupoidElem::from_triple(&sys, &f(&sys, "ab", &["v2", "v3"]), 2, &v).unwrap();
        assert!(bisection_membership(&sys, &s, &[], &g).unwrap());

        let all = finite_gamma(&sys).unwrap();
        let dom = product(&sys, &s.star(), &s);
        assert!(all
            .iter()
            .all(|g| !bisection_membership(&sys, &s, &[dom.clone()], g).unwrap()));

        let p = Triple::parse(&sys, "", &["v3"], "").unwrap();
        let inside: Vec<_> = all
            .iter()
            .filter(|g| bisection_membership(&sys, &p, &[], g).unwrap())
            .collect();
        assert_eq!(inside, vec![&GroupoidElem::unit(&v)]);
    }

    #[test]
    fn groupoid_sizes() {
        assert_eq!(finite_gamma(&fixtures::path3()).unwrap().len(), 9);
        assert_eq!(finite_gamma(&fixtures::ghost()).unwrap().len(), 9);
        let loop1 = fixtures::loop1();
        assert_eq!(finite_gamma(&loop1), Err(GroupoidError::InfiniteBoundary));
        let degrees: Vec<i64> = enumerate_gamma(&loop1, 2).iter().map(|g| g.degree()).collect();
        assert_eq!(degrees, vec![-2, -1, 0, 1, 2]);
    }

    #[test]
    fn orbits_of_path3() {
        let sys = fixtures::path3();
        let o = orbits(&finite_gamma(&sys).unwrap());
        assert_eq!(o.iter().map(Vec::len).collect::<Vec<_>>(), vec![3]);
    }

    #[test]
    fn dot_export_lists_units_and_arrows() {
        let sys = fixtures::path3();
        let dot = groupoid_dot(&sys, &finite_gamma(&sys).unwrap());
        assert_eq!(dot.matches(" -> ").count(), 6);
        assert!(dot.contains("\"(∅;v3)\" -> \"(ab;v2,v3)\" [label=\"2\"]"));
    }
}
