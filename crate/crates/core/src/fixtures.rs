//! Named graphs used throughout the tests, the CLI and the docs.

use crate::graph::PlumbingGraph;

/// E8: central `-2` vertex with legs of lengths 1, 2 and 4, all `-2`.
/// Its link is the Poincaré sphere Σ(2,3,5).
pub fn e8() -> PlumbingGraph {
    PlumbingGraph::from_parts(
        &[
            ("c", -2),
            ("a1", -2),
            ("b1", -2),
            ("b2", -2),
            ("d1", -2),
            ("d2", -2),
            ("d3", -2),
            ("d4", -2),
        ],
        &[
            ("c", "a1"),
            ("c", "b1"),
            ("b1", "b2"),
            ("c", "d1"),
            ("d1", "d2"),
            ("d2", "d3"),
            ("d3", "d4"),
        ],
    )
}

/// Star with `-1` center and leaves `-2`, `-3`, `-7`: the Brieskorn sphere Σ(2,3,7).
pub fn sigma_2_3_7() -> PlumbingGraph {
    PlumbingGraph::from_parts(
        &[("c", -1), ("a2", -2), ("a3", -3), ("a7", -7)],
        &[("c", "a2"), ("c", "a3"), ("c", "a7")],
    )
}

/// Path of `n` vertices of weight `w`, named `p0 .. p{n-1}`.
pub fn path(n: usize, w: i64) -> PlumbingGraph {
    let names: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let vertices: Vec<(&str, i64)> = names.iter().map(|s| (s.as_str(), w)).collect();
    let edges: Vec<(&str, &str)> = names.windows(2).map(|p| (p[0].as_str(), p[1].as_str())).collect();
    PlumbingGraph::from_parts(&vertices, &edges)
}

/// Two stars with `-1` centers and `-2`, `-7` leaves joined by the chain
/// `-4`, `-2`, `-4`. Minimal, negative definite (det 12), not rational, and
/// two bad vertices are needed.
pub fn two_star_chain() -> PlumbingGraph {
    PlumbingGraph::from_parts(
        &[
            ("x", -1),
            ("x2", -2),
            ("x7", -7),
            ("y", -1),
            ("y2", -2),
            ("y7", -7),
            ("k1", -4),
            ("k2", -2),
            ("k3", -4),
        ],
        &[
            ("x", "x2"),
            ("x", "x7"),
            ("y", "y2"),
            ("y", "y7"),
            ("x", "k1"),
            ("k1", "k2"),
            ("k2", "k3"),
            ("k3", "y"),
        ],
    )
}

/// Adjacent nodes `x` (`-1`; leaves `-5`, `-7`) and `y` (`-2`; leaves `-6`,
/// `-6`, `-7`). No vertex separates two node-carrying components, and two bad
/// vertices are needed (det 12).
pub fn adjacent_nodes() -> PlumbingGraph {
    PlumbingGraph::from_parts(
        &[
            ("x", -1),
            ("x5", -5),
            ("x7", -7),
            ("y", -2),
            ("y6a", -6),
            ("y6b", -6),
            ("y7", -7),
        ],
        &[("x", "x5"), ("x", "x7"), ("y", "y6a"), ("y", "y6b"), ("y", "y7"), ("x", "y")],
    )
}
