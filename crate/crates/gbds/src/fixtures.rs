//! Systems shipped with the crate, parsed from the files in `fixtures/`.

use crate::boolean::Gbds;
use crate::format::parse_system;

pub const PATH3_TEXT: &str = include_str!("../fixtures/sys-path3.gbds");
pub const LOOP1_TEXT: &str = include_str!("../fixtures/sys-loop1.gbds");
pub const GHOST_TEXT: &str = include_str!("../fixtures/sys-ghost.gbds");
pub const BRANCH_TEXT: &str = include_str!("../fixtures/sys-branch.gbds");
pub const PATH3_GRAPH: &str = include_str!("../fixtures/path3.graph");
pub const LOOP1_GRAPH: &str = include_str!("../fixtures/loop1.graph");

fn load(text: &str) -> Gbds {
    parse_system(text).expect("shipped fixture parses")
}

/// `v1 ← v2 ← v3` with labels `a`, `b`.
pub fn path3() -> Gbds {
    load(PATH3_TEXT)
}

/// A single atom with a loop.
pub fn loop1() -> Gbds {
    load(LOOP1_TEXT)
}

/// Two atoms, `g_a = {v ↦ u}` and `G_a = {u, v}`.
pub fn ghost() -> Gbds {
    load(GHOST_TEXT)
}

/// Acyclic, with sinks `q`, `s`, `t`.
pub fn branch() -> Gbds {
    load(BRANCH_TEXT)
}

pub fn all() -> Vec<Gbds> {
    vec![path3(), loop1(), ghost(), branch()]
}

/// Fixture names paired with their systems.
pub fn named() -> Vec<(&'static str, Gbds)> {
    vec![
        ("path3", path3()),
        ("loop1", loop1()),
        ("ghost", ghost()),
        ("branch", branch()),
    ]
}
