#![allow(dead_code)]

use upcover::{Edge, Instance};

/// Seven-node binary tree with unit upgrades; the best single facility
/// covers weight 7 from node 0.
pub const SEVEN_NODE_TREE: &str = "\
upmclp 1
# n m p R B integer
7 6 1 2 3 1
0 1
1 1
2 2
3 1
4 2
5 1
6 2
0 1 2 1 1
0 2 2 1 1
1 3 2 1 1
1 4 2 1 1
2 5 2 1 1
2 6 2 1 1
";

pub fn seven_node_tree() -> Instance {
    let edges = [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)]
        .into_iter()
        .map(|(a, b)| Edge::new(a, b, 2.0, 1.0, 1.0))
        .collect();
    Instance {
        weights: vec![1.0, 1.0, 2.0, 1.0, 2.0, 1.0, 2.0],
        edges,
        radius: 2.0,
        budget: 3.0,
        facilities: 1,
        integer: true,
    }
}
