//! Small worked examples used throughout the tests and documentation.
//!
//! Vertex ids of the Hasse-derived examples follow the canonical member
//! order, matching what [`crate::hasse::build_hasse`] assigns.

use crate::dag::{validate, Dag, RawDag};
use crate::setsys::SetSystem;

/// Rooted tree `ρ(u(a, b), c)`: ρ=0, u=1, a=2, b=3, c=4.
pub fn t3() -> Dag {
    validate(
        &RawDag::new()
            .vertex(0)
            .vertex(1)
            .leaf(2, "a")
            .leaf(3, "b")
            .leaf(4, "c")
            .edge(0, 1)
            .edge(0, 4)
            .edge(1, 2)
            .edge(1, 3),
    )
    .expect("valid fixture")
}

/// Path `r → m → x` plus the shortcut `r → x`: r=0, m=1, x=2.
pub fn s1() -> Dag {
    validate(
        &RawDag::new()
            .vertex(0)
            .vertex(1)
            .leaf(2, "x")
            .edge(0, 1)
            .edge(1, 2)
            .edge(0, 2),
    )
    .expect("valid fixture")
}

/// Hasse diagram of all nonempty subsets of `{a, b, c}`:
/// a=0, b=1, c=2, ab=3, ac=4, bc=5, ρ=abc=6.
pub fn b3() -> Dag {
    validate(
        &RawDag::new()
            .leaf(0, "a")
            .leaf(1, "b")
            .leaf(2, "c")
            .vertex(3)
            .vertex(4)
            .vertex(5)
            .vertex(6)
            .edge(3, 0)
            .edge(3, 1)
            .edge(4, 0)
            .edge(4, 2)
            .edge(5, 1)
            .edge(5, 2)
            .edge(6, 3)
            .edge(6, 4)
            .edge(6, 5),
    )
    .expect("valid fixture")
}

/// Hasse diagram of [`c4`]: a=0, b=1, c=2, d=3, abc=4, bcd=5, abcd=6.
pub fn h4() -> Dag {
    validate(
        &RawDag::new()
            .leaf(0, "a")
            .leaf(1, "b")
            .leaf(2, "c")
            .leaf(3, "d")
            .vertex(4)
            .vertex(5)
            .vertex(6)
            .edge(4, 0)
            .edge(4, 1)
            .edge(4, 2)
            .edge(5, 1)
            .edge(5, 2)
            .edge(5, 3)
            .edge(6, 4)
            .edge(6, 5),
    )
    .expect("valid fixture")
}

/// Galled tree: ρ=0, p=1, q=2, h=3, a=4, b=5, x=6 with
/// ρ→p, ρ→q, p→h, q→h, h→x, p→a, q→b.
pub fn gt() -> Dag {
    validate(
        &RawDag::new()
            .vertex(0)
            .vertex(1)
            .vertex(2)
            .vertex(3)
            .leaf(4, "a")
            .leaf(5, "b")
            .leaf(6, "x")
            .edge(0, 1)
            .edge(0, 2)
            .edge(1, 3)
            .edge(2, 3)
            .edge(3, 6)
            .edge(1, 4)
            .edge(2, 5),
    )
    .expect("valid fixture")
}

/// `{{a,b,c,d}, {a,b,c}, {b,c,d}, {a}, {b}, {c}, {d}}`.
pub fn c4() -> SetSystem {
    SetSystem::new(
        &["a", "b", "c", "d"],
        &[
            &["a", "b", "c", "d"],
            &["a", "b", "c"],
            &["b", "c", "d"],
            &["a"],
            &["b"],
            &["c"],
            &["d"],
        ],
    )
    .expect("valid fixture")
}

/// `{{a,b,c}, {a,b}, {b,c}, {a}, {b}, {c}}`, a galled-tree-like system.
pub fn cg() -> SetSystem {
    SetSystem::new(
        &["a", "b", "c"],
        &[&["a", "b", "c"], &["a", "b"], &["b", "c"], &["a"], &["b"], &["c"]],
    )
    .expect("valid fixture")
}

/// `2^{a,b,c}`.
pub fn pow3() -> SetSystem {
    SetSystem::power_set(&["a", "b", "c"]).expect("valid fixture")
}
