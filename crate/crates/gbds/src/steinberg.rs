//! The Steinberg algebra of the groupoid over the rationals, with exact
//! equality through a normal form.
//!
//! Elements are finite combinations of indicators of two kinds of compact
//! open sets: `Cyl(μ, x, ν)`, the bisection of the atomic triple
//! `(μ, {x}, ν)` at a non-sink atom, and `Point(μ, x, ν)`, the single element
//! `(glue(x, μ), |μ| − |ν|, glue(x, ν))` at a sink atom. A cylinder at a sink
//! is a point.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num::{BigRational, One, Zero};
use thiserror::Error;

use crate::boolean::{Atom, Gbds, SetElem, Word};
use crate::checks::Check;
use crate::filters::Filter;
use crate::groupoid::{self, orbits, GroupoidElem, GroupoidError};
use crate::semigroup::{product, Triple};
use crate::surgery::{cut, glue};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SteinbergError {
    #[error("comparison needs depth {required}, got {given}")]
    InsufficientDepth { required: usize, given: usize },
    #[error("set {set} is not inside the ideal generator of `{word}`")]
    OutsideIdeal { word: String, set: String },
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    Cyl { left: Word, atom: Atom, right: Word },
    Point { left: Word, atom: Atom, right: Word },
}

impl Basis {
    /// The cylinder of `(left, {atom}, right)`, a point when `atom` is a sink.
    pub fn cyl(sys: &Gbds, left: Word, atom: Atom, right: Word) -> Basis {
        if sys.is_sink(atom) {
            Basis::Point { left, atom, right }
        } else {
            Basis::Cyl { left, atom, right }
        }
    }

    pub fn parts(&self) -> (&Word, Atom, &Word) {
        match self {
            Basis::Cyl { left, atom, right } | Basis::Point { left, atom, right } => {
                (left, *atom, right)
            }
        }
    }

    pub fn is_point(&self) -> bool {
        matches!(self, Basis::Point { .. })
    }

    pub fn degree(&self) -> i64 {
        let (l, _, r) = self.parts();
        l.len() as i64 - r.len() as i64
    }

    fn min_stem(&self) -> usize {
        let (l, _, r) = self.parts();
        l.len().min(r.len())
    }

    fn swapped(&self) -> Basis {
        let (l, atom, r) = self.parts();
        let (left, right) = (r.clone(), l.clone());
        match self {
            Basis::Cyl { .. } => Basis::Cyl { left, atom, right },
            Basis::Point { .. } => Basis::Point { left, atom, right },
        }
    }

    /// One level finer: the cylinders along every step into `atom`.
    fn refine(&self, sys: &Gbds) -> Vec<Basis> {
        let Basis::Cyl { left, atom, right } = self else {
            return vec![self.clone()];
        };
        sys.labels()
            .flat_map(|l| {
                sys.preimage(l, *atom)
                    .iter()
                    .map(move |y| Basis::cyl(sys, left.pushed(l), *y, right.pushed(l)))
                    .collect::<Vec<_>>()
            })
            .collect()
    }

    pub fn show(&self, sys: &Gbds) -> String {
        let (l, atom, r) = self.parts();
        let tag = if self.is_point() { "P" } else { "C" };
        format!(
            "{tag}({};{};{})",
            sys.show_word(l),
            sys.atom_name(atom),
            sys.show_word(r)
        )
    }

    /// Whether the groupoid element lies in this compact open set.
    pub fn contains(&self, sys: &Gbds, g: &GroupoidElem) -> bool {
        let (left, atom, right) = self.parts();
        if g.degree() != self.degree() {
            return false;
        }
        match self {
            Basis::Point { .. } => {
                let vertex = Filter::vertex(atom);
                match (glue(sys, &vertex, left), glue(sys, &vertex, right)) {
                    (Ok(r), Ok(s)) => g.range() == &r && g.source() == &s,
                    _ => false,
                }
            }
            Basis::Cyl { .. } => {
                let src = g.source();
                if !src.has_prefix(right) || src.atom_at(sys, right.len()) != Some(atom) {
                    return false;
                }
                cut(sys, src, right)
                    .and_then(|tail| glue(sys, &tail, left))
                    .is_ok_and(|r| &r == g.range())
            }
        }
    }
}

fn mul_basis(sys: &Gbds, a: &Basis, b: &Basis) -> Option<Basis> {
    let (mu, x, nu) = a.parts();
    let (gamma, y, delta) = b.parts();
    match (a.is_point(), b.is_point()) {
        (false, false) => {
            let s = Triple::raw(mu.clone(), sys.singleton(x), nu.clone());
            let t = Triple::raw(gamma.clone(), sys.singleton(y), delta.clone());
            let (l, m, r) = product(sys, &s, &t).parts().map(|(l, m, r)| (l.clone(), m.clone(), r.clone()))?;
            let z = m.atoms().next()?;
            Some(Basis::cyl(sys, l, z, r))
        }
        (true, false) => {
            let ext = nu.strip_prefix(gamma)?;
            (sys.push_down(&ext, x) == Some(y)).then(|| Basis::Point {
                left: mu.clone(),
                atom: x,
                right: delta.concat(&ext),
            })
        }
        (false, true) => {
            let ext = gamma.strip_prefix(nu)?;
            (sys.push_down(&ext, y) == Some(x)).then(|| Basis::Point {
                left: mu.concat(&ext),
                atom: y,
                right: delta.clone(),
            })
        }
        (true, true) => (nu == gamma && x == y).then(|| Basis::Point {
            left: mu.clone(),
            atom: x,
            right: delta.clone(),
        }),
    }
}

/// Whether a nonzero element has a single degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grading {
    Zero,
    Homogeneous(i64),
    Mixed,
}

/// A finite rational combination of basis indicators.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Element {
    terms: BTreeMap<Basis, BigRational>,
}

impl Element {
    pub fn zero() -> Element {
        Element::default()
    }

    pub fn basis(b: Basis) -> Element {
        Element::default().with_term(b, BigRational::one())
    }

    fn with_term(mut self, b: Basis, c: BigRational) -> Element {
        self.add_term(b, c);
        self
    }

    fn add_term(&mut self, b: Basis, c: BigRational) {
        let entry = self.terms.entry(b.clone()).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&b);
        }
    }

    /// The indicator of the bisection of a triple.
    pub fn from_triple(sys: &Gbds, s: &Triple) -> Element {
        let mut out = Element::zero();
        if let Some((l, m, r)) = s.parts() {
            for x in m.atoms() {
                out.add_term(Basis::cyl(sys, l.clone(), x, r.clone()), BigRational::one());
            }
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Basis, &BigRational)> {
        self.terms.iter()
    }

    /// Zero as written; use [`Element::normal_form`] to decide equality.
    pub fn is_trivially_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Element) -> Element {
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(b.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Element) -> Element {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, c: &BigRational) -> Element {
        let mut out = Element::zero();
        for (b, d) in &self.terms {
            out.add_term(b.clone(), d * c);
        }
        out
    }

    pub fn mul(&self, sys: &Gbds, other: &Element) -> Element {
        let mut out = Element::zero();
        for (a, c) in &self.terms {
            for (b, d) in &other.terms {
                if let Some(ab) = mul_basis(sys, a, b) {
                    out.add_term(ab, c * d);
                }
            }
        }
        out
    }

    pub fn star(&self) -> Element {
        let mut out = Element::zero();
        for (b, c) in &self.terms {
            out.add_term(b.swapped(), c.clone());
        }
        out
    }

    /// Depth at which the normal form is reached.
    pub fn required_depth(&self) -> usize {
        self.terms.keys().map(Basis::min_stem).max().unwrap_or(0)
    }

    /// Refines every cylinder to minimal stem length `depth`.
    pub fn normal_form_at(&self, sys: &Gbds, depth: usize) -> Result<Element, SteinbergError> {
        let required = self.required_depth();
        if depth < required {
            return Err(SteinbergError::InsufficientDepth {
                required,
                given: depth,
            });
        }
        let mut out = Element::zero();
        let mut work: Vec<(Basis, BigRational)> =
            self.terms.iter().map(|(b, c)| (b.clone(), c.clone())).collect();
        while let Some((b, c)) = work.pop() {
            if b.is_point() || b.min_stem() >= depth {
                out.add_term(b, c);
            } else {
                work.extend(b.refine(sys).into_iter().map(|r| (r, c.clone())));
            }
        }
        Ok(out)
    }

    pub fn normal_form(&self, sys: &Gbds) -> Element {
        self.normal_form_at(sys, self.required_depth())
            .expect("required depth is sufficient")
    }

    pub fn grading(&self, sys: &Gbds) -> Grading {
        let nf = self.normal_form(sys);
        let mut degrees = nf.terms.keys().map(Basis::degree);
        match degrees.next() {
            None => Grading::Zero,
            Some(d) if degrees.all(|e| e == d) => Grading::Homogeneous(d),
            Some(_) => Grading::Mixed,
        }
    }

    /// Value of the function at a groupoid element.
    pub fn evaluate(&self, sys: &Gbds, g: &GroupoidElem) -> BigRational {
        self.terms
            .iter()
            .filter(|(b, _)| b.contains(sys, g))
            .map(|(_, c)| c.clone())
            .fold(BigRational::zero(), |acc, c| acc + c)
    }

    pub fn show(&self, sys: &Gbds) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (b, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                out.push_str(" + ");
            }
            if c.is_one() {
                out.push_str(&b.show(sys));
            } else {
                let _ = write!(out, "{c}·{}", b.show(sys));
            }
        }
        out
    }
}

/// Equality of functions, deciding at the common normal-form depth.
pub fn equal(sys: &Gbds, f: &Element, g: &Element) -> bool {
    let depth = f.required_depth().max(g.required_depth());
    equal_at(sys, f, g, depth).expect("depth is sufficient")
}

/// Equality decided after refining to `depth`.
pub fn equal_at(sys: &Gbds, f: &Element, g: &Element, depth: usize) -> Result<bool, SteinbergError> {
    let diff = f.sub(g);
    Ok(diff.normal_form_at(sys, depth)?.is_trivially_zero())
}

/// `P_A`, the indicator of the units over `A`.
pub fn gen_p(sys: &Gbds, set: &SetElem) -> Element {
    Element::from_triple(sys, &Triple::raw(Word::empty(), set.clone(), Word::empty()))
}

/// `S_{α,B}`, defined when `B` lies in the ideal generator of `α`.
pub fn gen_s(sys: &Gbds, word: &Word, set: &SetElem) -> Result<Element, SteinbergError> {
    if !set.is_subset(&sys.ideal_gen(word)) {
        return Err(SteinbergError::OutsideIdeal {
            word: sys.show_word(word),
            set: sys.show_set(set),
        });
    }
    Ok(Element::from_triple(sys, &Triple::raw(word.clone(), set.clone(), Word::empty())))
}

struct Tally<'a> {
    sys: &'a Gbds,
    check: Check,
}

impl Tally<'_> {
    fn expect(&mut self, lhs: &Element, rhs: &Element, what: impl FnOnce() -> String) {
        let sys = self.sys;
        self.check.record(equal(sys, lhs, rhs), || {
            format!(
                "{}: {} vs {}",
                what(),
                lhs.normal_form(sys).show(sys),
                rhs.normal_form(sys).show(sys)
            )
        });
    }
}

/// Checks the four families of defining relations on the generators.
/// Relation (ii) runs over admissible words up to length `depth`; the others
/// over single labels.
pub fn ck_check(sys: &Gbds, depth: usize) -> Vec<Check> {
    let sets = sys.full_set().subsets();
    let new = |name: &str| Tally {
        sys,
        check: Check::new(name),
    };
    let p = |a: &SetElem| gen_p(sys, a);
    let s = |w: &Word, b: &SetElem| gen_s(sys, w, b).expect("inside ideal");
    let show = |a: &SetElem| sys.show_set(a);

    let mut lattice = new("projections");
    lattice.expect(&p(&sys.empty_set()), &Element::zero(), || "P_∅".to_string());
    for a in &sets {
        for b in &sets {
            let meet = a.intersection(b);
            lattice.expect(&p(&meet), &p(a).mul(sys, &p(b)), || {
                format!("P_{} P_{}", show(a), show(b))
            });
            let join = p(a).add(&p(b)).sub(&p(&meet));
            lattice.expect(&p(&a.union(b)), &join, || {
                format!("P_({} ∪ {})", show(a), show(b))
            });
        }
    }

    let mut commute = new("commutation");
    for w in sys.admissible_words(depth).into_iter().filter(|w| !w.is_empty()) {
        for b in sys.ideal_gen(&w).subsets() {
            for a in &sets {
                let lhs = p(a).mul(sys, &s(&w, &b));
                let rhs = s(&w, &b).mul(sys, &p(&sys.act_word(&w, a)));
                commute.expect(&lhs, &rhs, || {
                    format!("P_{} S_({},{})", show(a), sys.show_word(&w), show(&b))
                });
            }
        }
    }

    let mut orth = new("orthogonality");
    let letters: Vec<Word> = sys.labels().map(Word::letter).collect();
    for w1 in &letters {
        for w2 in &letters {
            for b1 in sys.ideal_gen(w1).subsets() {
                for b2 in sys.ideal_gen(w2).subsets() {
                    let lhs = s(w1, &b1).star().mul(sys, &s(w2, &b2));
                    let rhs = if w1 == w2 {
                        p(&b1.intersection(&b2))
                    } else {
                        Element::zero()
                    };
                    orth.expect(&lhs, &rhs, || {
                        format!(
                            "S*_({},{}) S_({},{})",
                            sys.show_word(w1),
                            show(&b1),
                            sys.show_word(w2),
                            show(&b2)
                        )
                    });
                }
            }
        }
    }

    let mut cuntz = new("cuntz-krieger");
    for a in sets.iter().filter(|a| !a.is_empty() && sys.is_regular(a)) {
        let mut rhs = Element::zero();
        for l in sys.emitters(a) {
            let w = Word::letter(l);
            let b = sys.act(l, a);
            rhs = rhs.add(&s(&w, &b).mul(sys, &s(&w, &b).star()));
        }
        cuntz.expect(&p(a), &rhs, || format!("P_{}", show(a)));
    }

    vec![lattice.check, commute.check, orth.check, cuntz.check]
}

/// Exact rank over the rationals.
pub fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let width = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..rows.len()).find(|r| !rows[*r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let lead = rows[rank][col].clone();
        for r in (rank + 1)..rows.len() {
            if rows[r][col].is_zero() {
                continue;
            }
            let factor = &rows[r][col] / &lead;
            for c in col..width {
                let delta = &rows[rank][c] * &factor;
                rows[r][c] -= delta;
            }
        }
        rank += 1;
    }
    rank
}

/// All atomic triples with both words of length at most `max_len`.
pub fn atomic_triples(sys: &Gbds, max_len: usize) -> Vec<Triple> {
    let words = sys.admissible_words(max_len);
    let mut out = Vec::new();
    for l in &words {
        for r in &words {
            let both = sys.ideal_gen(l).intersection(&sys.ideal_gen(r));
            for x in both.atoms() {
                out.push(Triple::raw(l.clone(), sys.singleton(x), r.clone()));
            }
        }
    }
    out
}

/// The representation on functions over the finite unit space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixRep {
    pub points: Vec<Filter>,
    pub blocks: Vec<usize>,
    pub dimension: usize,
}

impl MatrixRep {
    /// Dimension of the product of full matrix algebras on the blocks.
    pub fn block_dimension(&self) -> usize {
        self.blocks.iter().map(|b| b * b).sum()
    }
}

/// Matrices of atomic bisections acting on the finite boundary, with the
/// exact dimension of their span.
pub fn matrix_rep(sys: &Gbds) -> Result<MatrixRep, SteinbergError> {
    let max_len = groupoid::longest_boundary_len(sys).ok_or(GroupoidError::InfiniteBoundary)?;
    let gamma = groupoid::finite_gamma(sys)?;
    let points = groupoid::finite_units(sys)?;
    let index: BTreeMap<&Filter, usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let n = points.len();
    let rows: Vec<Vec<BigRational>> = atomic_triples(sys, max_len)
        .iter()
        .map(|s| {
            let f = Element::from_triple(sys, s);
            let mut row = vec![BigRational::zero(); n * n];
            for g in &gamma {
                row[index[g.range()] * n + index[g.source()]] += f.evaluate(sys, g);
            }
            row
        })
        .collect();
    let blocks = orbits(&gamma).iter().map(Vec::len).collect();
    Ok(MatrixRep {
        points,
        blocks,
        dimension: rank(rows),
    })
}

/// Dimension of the span of degree-`degree` atomic bisections whose words
/// have length at most `max_stem`.
pub fn homogeneous_dimension(sys: &Gbds, degree: i64, max_stem: usize) -> usize {
    let elems: Vec<Element> = atomic_triples(sys, max_stem)
        .iter()
        .filter(|s| s.degree() == degree)
        .map(|s| Element::from_triple(sys, s))
        .collect();
    let depth = elems.iter().map(Element::required_depth).max().unwrap_or(0);
    let forms: Vec<Element> = elems
        .iter()
        .map(|e| e.normal_form_at(sys, depth).expect("depth is the maximum"))
        .collect();
    let keys: Vec<Basis> = {
        let mut k: Vec<Basis> = forms.iter().flat_map(|f| f.terms.keys().cloned()).collect();
        k.sort();
        k.dedup();
        k
    };
    let rows = forms
        .iter()
        .map(|f| {
            keys.iter()
                .map(|k| f.terms.get(k).cloned().unwrap_or_else(BigRational::zero))
                .collect()
        })
        .collect();
    rank(rows)
}
