//! Small reference networks used in tests, docs and the CLI.

use crate::network::IONetwork;

/// Six-node network with three appendage components and one structural block.
pub fn e8() -> IONetwork {
    IONetwork::new(
        &["ι", "σ", "τ1", "τ2", "τ3", "o"],
        "ι",
        "o",
        &[
            ("τ1", "ι"),
            ("ι", "σ"),
            ("τ2", "σ"),
            ("σ", "τ1"),
            ("τ3", "τ2"),
            ("o", "τ2"),
            ("o", "τ3"),
            ("ι", "o"),
            ("σ", "o"),
        ],
    )
    .expect("valid fixture")
}

/// ASCII-named copy of [`e8`]: i, s, t1, t2, t3, o.
pub fn e8_ascii() -> IONetwork {
    IONetwork::new(
        &["i", "s", "t1", "t2", "t3", "o"],
        "i",
        "o",
        &[
            ("t1", "i"),
            ("i", "s"),
            ("t2", "s"),
            ("s", "t1"),
            ("t3", "t2"),
            ("o", "t2"),
            ("o", "t3"),
            ("i", "o"),
            ("s", "o"),
        ],
    )
    .expect("valid fixture")
}

/// Single arrow from input to output.
pub fn haldane() -> IONetwork {
    IONetwork::new(&["ι", "o"], "ι", "o", &[("ι", "o")]).expect("valid fixture")
}

/// Two parallel branches ι→a→o and ι→b→o.
pub fn diamond() -> IONetwork {
    IONetwork::new(
        &["ι", "a", "b", "o"],
        "ι",
        "o",
        &[("ι", "a"), ("ι", "b"), ("a", "o"), ("b", "o")],
    )
    .expect("valid fixture")
}

/// ι→s→o with an appendage node t on a 2-cycle through the super-simple node s.
pub fn linked_loop() -> IONetwork {
    IONetwork::new(
        &["ι", "s", "o", "t"],
        "ι",
        "o",
        &[("ι", "s"), ("s", "o"), ("s", "t"), ("t", "s")],
    )
    .expect("valid fixture")
}

/// Diamond ι→{a,b}→o with an appendage node t on a 2-cycle through a.
pub fn linked_diamond() -> IONetwork {
    IONetwork::new(
        &["ι", "a", "b", "o", "t"],
        "ι",
        "o",
        &[("ι", "a"), ("ι", "b"), ("a", "o"), ("b", "o"), ("a", "t"), ("t", "a")],
    )
    .expect("valid fixture")
}

/// Chain ι→s→o where s feeds a super-appendage 2-cycle ta↔tb that returns to o.
pub fn appendage_pair() -> IONetwork {
    IONetwork::new(
        &["ι", "s", "o", "ta", "tb"],
        "ι",
        "o",
        &[
            ("ι", "s"),
            ("s", "o"),
            ("o", "ta"),
            ("ta", "tb"),
            ("tb", "ta"),
            ("tb", "o"),
        ],
    )
    .expect("valid fixture")
}
