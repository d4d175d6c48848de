//! Exhaustive law checks over enumerated elements, shared by the command line.

use std::collections::BTreeSet;

use crate::boolean::{Gbds, Word};
use crate::filters::{all_finite, enumerate_tight, tight_oracle, Filter};
use crate::groupoid::{
    compose, enumerate_gamma, germ_equiv, germ_equiv_by_definition, germ_product, germ_to_gamma,
    renault_deaconu, Germ, GroupoidElem,
};
use crate::paths::{self, enumerate_boundary, phi, phi_cylinder, phi_inv};
use crate::semigroup::{enumerate_elements, enumerate_idempotents, leq, product, Triple};
use crate::surgery::{self, cut, glue, lift, lower, oracle, project, UltraRef};

/// Outcome of one law over many instances; keeps the first failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub checked: usize,
    pub counterexample: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            checked: 0,
            counterexample: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }

    pub fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(what());
        }
    }

    pub fn line(&self) -> String {
        match &self.counterexample {
            None => format!("PASS {} ({} checked)", self.name, self.checked),
            Some(c) => format!("FAIL {}: {}", self.name, c),
        }
    }
}

pub fn semigroup_laws(sys: &Gbds, max_word: usize) -> Vec<Check> {
    let elems = enumerate_elements(sys, max_word);
    let idems = enumerate_idempotents(sys, max_word);
    let show = |t: &Triple| t.show(sys);
    let mut assoc = Check::new("associativity");
    for s in &elems {
        for t in &elems {
            let st = product(sys, s, t);
            for u in &elems {
                let lhs = product(sys, &st, u);
                let rhs = product(sys, s, &product(sys, t, u));
                assoc.record(lhs == rhs, || format!("{} {} {}", show(s), show(t), show(u)));
            }
        }
    }
    let mut regular = Check::new("s s* s = s");
    for s in &elems {
        let sss = product(sys, &product(sys, s, &s.star()), s);
        regular.record(&sss == s, || show(s));
    }
    let mut commute = Check::new("idempotents commute");
    let mut order = Check::new("e <= f iff ef = e");
    for e in &idems {
        for f in &idems {
            let ef = product(sys, e, f);
            commute.record(ef == product(sys, f, e), || format!("{} {}", show(e), show(f)));
            let by_order = leq(sys, e, f).unwrap_or(false);
            order.record(by_order == (ef == *e), || format!("{} {}", show(e), show(f)));
        }
    }
    vec![assoc, regular, commute, order]
}

/// Pair to filter and back, over every filter of finite type to `depth`.
pub fn filter_round_trip(sys: &Gbds, depth: usize) -> Check {
    let mut check = Check::new("pair round trip");
    for xi in all_finite(sys, depth) {
        let (word, atoms) = xi.to_pair().expect("finite type");
        let back = Filter::from_pair(sys, &word, &atoms);
        check.record(back.as_ref() == Ok(&xi), || xi.show(sys));
    }
    check
}

/// The characterization by trajectories against the cover criterion.
pub fn tight_agreement(sys: &Gbds, depth: usize, probe_depth: usize) -> Check {
    let mut check = Check::new("tightness characterizations agree");
    let listed: BTreeSet<Filter> = enumerate_tight(sys, depth).finite.into_iter().collect();
    for xi in all_finite(sys, depth) {
        let by_cover = tight_oracle(sys, &xi, probe_depth);
        check.record(by_cover == Ok(listed.contains(&xi)), || {
            format!("{} listed={} cover={:?}", xi.show(sys), listed.contains(&xi), by_cover)
        });
    }
    check
}

/// Cut/glue inverses and cocycles on points to `depth`, and the atom squares
/// against the set-level oracle for words to `depth`.
pub fn surgery_laws(sys: &Gbds, depth: usize) -> Vec<Check> {
    let points = enumerate_tight(sys, depth).points();
    let words = sys.admissible_words(depth);
    let mut cut_glue = Check::new("cut after glue");
    let mut glue_cut = Check::new("glue after cut");
    let mut cut_cocycle = Check::new("cut cocycle");
    let mut glue_cocycle = Check::new("glue cocycle");
    for xi in &points {
        for a in &words {
            if let Ok(glued) = glue(sys, xi, a) {
                cut_glue.record(cut(sys, &glued, a).as_ref() == Ok(xi), || {
                    format!("{} at {}", xi.show(sys), sys.show_word(a))
                });
            }
            if xi.has_prefix(a) {
                let cutted = cut(sys, xi, a);
                let back = cutted.as_ref().ok().and_then(|c| glue(sys, c, a).ok());
                glue_cut.record(back.as_ref() == Some(xi), || {
                    format!("{} at {}", xi.show(sys), sys.show_word(a))
                });
            }
            for b in &words {
                let ab = a.concat(b);
                if xi.has_prefix(&ab) {
                    let two = cut(sys, xi, a).and_then(|c| cut(sys, &c, b));
                    cut_cocycle.record(two == cut(sys, xi, &ab), || {
                        format!("{} at {}|{}", xi.show(sys), sys.show_word(a), sys.show_word(b))
                    });
                }
                if let Ok(once) = glue(sys, xi, &ab) {
                    let twice = glue(sys, xi, b).and_then(|g| glue(sys, &g, a));
                    glue_cocycle.record(twice.as_ref() == Ok(&once), || {
                        format!("{} at {}|{}", xi.show(sys), sys.show_word(a), sys.show_word(b))
                    });
                }
            }
        }
    }

    let mut lift_square = Check::new("lift/project square");
    let mut lower_square = Check::new("lower/project square");
    let mut inverse = Check::new("lower after lift");
    let mut against_oracle = Check::new("atom maps match set families");
    let all_words = sys.words(depth);
    let show3 = |a: &Word, b: &Word, c: &Word| {
        format!("{}|{}|{}", sys.show_word(a), sys.show_word(b), sys.show_word(c))
    };
    for a in &all_words {
        for b in &all_words {
            let ab = a.concat(b);
            for c in &all_words {
                if ab.len() + c.len() > depth {
                    continue;
                }
                let bc = b.concat(c);
                let abc = ab.concat(c);
                if !sys.is_admissible(&abc) {
                    continue;
                }
                for x in sys.ideal_gen(&bc).atoms() {
                    let ultra = UltraRef { word: bc.clone(), atom: x };
                    if !a.is_empty() && sys.ideal_gen(&abc).contains(x) {
                        let down_then_up = project(sys, b, c, &ultra)
                            .ok()
                            .flatten()
                            .and_then(|f| lift(sys, a, b, &f).ok());
                        let up_then_down = lift(sys, a, &bc, &ultra)
                            .ok()
                            .and_then(|f| project(sys, &ab, c, &f).ok().flatten());
                        lift_square.record(down_then_up == up_then_down && up_then_down.is_some(), || {
                            format!("{} at {}", show3(a, b, c), sys.atom_name(x))
                        });
                    }
                }
                for x in sys.ideal_gen(&abc).atoms() {
                    let ultra = UltraRef { word: abc.clone(), atom: x };
                    let one = project(sys, &ab, c, &ultra)
                        .ok()
                        .flatten()
                        .and_then(|f| lower(sys, a, b, &f).ok());
                    let two = lower(sys, a, &bc, &ultra)
                        .ok()
                        .and_then(|f| project(sys, b, c, &f).ok().flatten());
                    lower_square.record(one == two, || format!("{} at {}", show3(a, b, c), sys.atom_name(x)));
                }
            }
            for x in sys.ideal_gen(b).atoms() {
                let ultra = UltraRef { word: b.clone(), atom: x };
                if let Ok(up) = lift(sys, a, b, &ultra) {
                    inverse.record(lower(sys, a, b, &up).as_ref() == Ok(&ultra), || {
                        format!("{}|{} at {}", sys.show_word(a), sys.show_word(b), sys.atom_name(x))
                    });
                }
            }
            if sys.atom_count() <= 4 && sys.is_admissible(&ab) {
                for x in sys.ideal_gen(&ab).atoms() {
                    let ultra = UltraRef { word: ab.clone(), atom: x };
                    let family = oracle::materialize(sys, &ultra);
                    let p = project(sys, a, b, &ultra).ok().flatten().map(|f| f.atom);
                    let p_set = oracle::principal_atom(sys, a, &oracle::project(sys, a, b, &family));
                    let h = lower(sys, a, b, &ultra).ok().map(|f| f.atom);
                    let h_set = oracle::principal_atom(sys, b, &oracle::lower(sys, b, &family));
                    against_oracle.record(p == p_set && h == h_set, || {
                        format!("{}|{} at {}", sys.show_word(a), sys.show_word(b), sys.atom_name(x))
                    });
                }
            }
        }
    }
    vec![
        cut_glue,
        glue_cut,
        cut_cocycle,
        glue_cocycle,
        lift_square,
        lower_square,
        inverse,
        against_oracle,
    ]
}

/// The transcription between tight filters and boundary paths at `depth`.
pub fn phi_laws(sys: &Gbds, depth: usize) -> Vec<Check> {
    let tight = enumerate_tight(sys, depth);
    let boundary = enumerate_boundary(sys, depth);
    let mut bijection = Check::new(format!("filters to paths at depth {depth}"));
    let images: BTreeSet<_> = tight.finite.iter().map(phi).collect();
    let targets: BTreeSet<_> = boundary.finite.iter().cloned().collect();
    bijection.record(
        images == targets && images.len() == tight.finite.len(),
        || format!("{} filters, {} paths", tight.finite.len(), boundary.finite.len()),
    );
    let cyl_images: BTreeSet<_> = tight.cylinders.iter().map(phi_cylinder).collect();
    let cyl_targets: BTreeSet<_> = boundary.cylinders.iter().cloned().collect();
    bijection.record(cyl_images == cyl_targets, || {
        format!("{} vs {} cylinders", cyl_images.len(), cyl_targets.len())
    });
    for xi in tight.points() {
        bijection.record(phi_inv(sys, &phi(&xi)).as_ref() == Ok(&xi), || xi.show(sys));
    }
    let mut intertwine = Check::new("transcription intertwines shifts");
    for xi in tight.points().iter().filter(|xi| !xi.is_vertex()) {
        let lhs = surgery::shift(sys, xi).map(|s| phi(&s));
        let rhs = paths::shift(sys, &phi(xi)).ok();
        intertwine.record(lhs == rhs, || xi.show(sys));
    }
    vec![bijection, intertwine]
}

/// Germs of elements with words to `depth` at the enumerated points, against
/// the groupoid enumerated at the same depth.
pub fn germ_laws(sys: &Gbds, depth: usize) -> Vec<Check> {
    let points = enumerate_tight(sys, depth).points();
    let point_set: BTreeSet<&Filter> = points.iter().collect();
    let gamma: BTreeSet<GroupoidElem> = enumerate_gamma(sys, depth).into_iter().collect();
    let germs: Vec<Germ> = enumerate_elements(sys, depth)
        .into_iter()
        .flat_map(|s| {
            points
                .iter()
                .filter_map(|xi| Germ::new(sys, s.clone(), xi.clone()).ok())
                .collect::<Vec<_>>()
        })
        .collect();
    let image = |g: &Germ| germ_to_gamma(sys, g).expect("germs map into the groupoid");

    let mut equivalence = Check::new("germ equivalence criteria agree");
    let mut well_defined = Check::new("germ map is injective and well defined");
    let search = 2 * depth + points.iter().filter_map(|p| p.steps()).map(|s| s.span()).max().unwrap_or(0);
    for (i, g) in germs.iter().enumerate() {
        for h in germs[i..].iter().filter(|h| h.filter() == g.filter()) {
            let by_words = germ_equiv(sys, g, h).expect("same filter");
            let by_def = germ_equiv_by_definition(sys, g, h, search).expect("same filter");
            equivalence.record(by_words == by_def, || {
                format!("{} vs {} at {}", g.element().show(sys), h.element().show(sys), g.filter().show(sys))
            });
            well_defined.record(by_words == (image(g) == image(h)), || {
                format!("{} vs {} at {}", g.element().show(sys), h.element().show(sys), g.filter().show(sys))
            });
        }
    }

    let mut onto = Check::new("germ map is onto");
    let reached: BTreeSet<GroupoidElem> = germs
        .iter()
        .map(image)
        .filter(|g| point_set.contains(g.range()))
        .collect();
    onto.record(reached == gamma, || {
        let missing = gamma.difference(&reached).next().or(reached.difference(&gamma).next());
        missing.map_or(String::new(), |g| g.show(sys))
    });

    let mut composition = Check::new("germ map preserves products");
    for t in &germs {
        for s in &germs {
            let st = match germ_product(sys, s, t) {
                Ok(None) => continue,
                Ok(Some(st)) => Ok(image(&st)),
                Err(e) => Err(e),
            };
            let rhs = compose(sys, &image(s), &image(t));
            composition.record(st.is_ok() && rhs == st, || {
                format!("{} after {} at {}", s.element().show(sys), t.element().show(sys), t.filter().show(sys))
            });
        }
    }
    vec![equivalence, well_defined, onto, composition]
}

/// The groupoid carried across the transcription equals the Renault–Deaconu
/// groupoid of the boundary shift.
pub fn transport_law(sys: &Gbds, depth: usize) -> Check {
    let mut check = Check::new("groupoid transported to boundary paths");
    let moved: BTreeSet<_> = enumerate_gamma(sys, depth)
        .iter()
        .map(|g| (phi(g.range()), g.degree(), phi(g.source())))
        .collect();
    let boundary = enumerate_boundary(sys, depth).points();
    let direct = renault_deaconu(&boundary, |mu| paths::shift(sys, mu).ok(), depth);
    check.record(moved == direct, || format!("{} vs {} elements", moved.len(), direct.len()));
    check
}

/// Units, inverses and associativity on a list of groupoid elements.
pub fn groupoid_laws(sys: &Gbds, elems: &[GroupoidElem]) -> Vec<Check> {
    let mut units = Check::new("units act trivially");
    let mut inverses = Check::new("inverses");
    let mut assoc = Check::new("composition is associative");
    for g in elems {
        let left = compose(sys, &GroupoidElem::unit(g.range()), g);
        let right = compose(sys, g, &GroupoidElem::unit(g.source()));
        units.record(left.as_ref() == Ok(g) && right.as_ref() == Ok(g), || g.show(sys));
        let gg = compose(sys, g, &g.inverse());
        let hg = compose(sys, &g.inverse(), g);
        inverses.record(
            gg == Ok(GroupoidElem::unit(g.range())) && hg == Ok(GroupoidElem::unit(g.source())),
            || g.show(sys),
        );
    }
    for a in elems {
        for b in elems.iter().filter(|b| b.range() == a.source()) {
            let Ok(ab) = compose(sys, a, b) else {
                assoc.record(false, || format!("{} {}", a.show(sys), b.show(sys)));
                continue;
            };
            for c in elems.iter().filter(|c| c.range() == b.source()) {
                let lhs = compose(sys, &ab, c);
                let rhs = compose(sys, b, c).and_then(|bc| compose(sys, a, &bc));
                assoc.record(lhs.is_ok() && lhs == rhs, || {
                    format!("{} {} {}", a.show(sys), b.show(sys), c.show(sys))
                });
            }
        }
    }
    vec![units, inverses, assoc]
}
