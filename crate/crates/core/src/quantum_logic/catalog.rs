//! Small named event algebras used in examples and tests.

use super::{paste_boolean_blocks, OrthomodularPoset, PastingSpec};
use crate::boolean_algebra::FiniteBooleanAlgebra;

/// `2^n` with atoms `a`, `b`, ... (element index = atom mask).
pub fn boolean(n: usize) -> OrthomodularPoset {
    FiniteBooleanAlgebra::standard(n)
        .expect("n ≤ 5")
        .to_event_algebra()
}

/// `MO_n`: `n` blocks `{x, x*}` glued at `0` and `1`, with `x = a, b, c, ...`.
pub fn mo(n: usize) -> OrthomodularPoset {
    let blocks = (0..n)
        .map(|i| {
            let x = ((b'a' + i as u8) as char).to_string();
            vec![x.clone(), format!("{x}*")]
        })
        .collect();
    paste_boolean_blocks(&PastingSpec { blocks }).expect("MO_n pastes for n ≤ 5")
}

/// The six-element algebra `0, a, a*, b, b*, 1`.
pub fn mo2() -> OrthomodularPoset {
    mo(2)
}

/// Blocks `[p,q,r]` and `[r,s,t]` sharing the atom `r` (12 elements).
pub fn shared_atom_pair() -> OrthomodularPoset {
    paste_boolean_blocks(&PastingSpec::new(&[&["p", "q", "r"], &["r", "s", "t"]])).expect("valid pasting")
}

/// Blocks `[p,q,r]` and `[s,t,u]` glued only at `0` and `1` (14 elements).
pub fn disjoint_triples() -> OrthomodularPoset {
    paste_boolean_blocks(&PastingSpec::new(&[&["p", "q", "r"], &["s", "t", "u"]])).expect("valid pasting")
}

/// Three blocks in a chain: `[a,b,c]`, `[c,d,e]`, `[e,f,g]`.
pub fn block_chain() -> OrthomodularPoset {
    paste_boolean_blocks(&PastingSpec::new(&[&["a", "b", "c"], &["c", "d", "e"], &["e", "f", "g"]]))
        .expect("valid pasting")
}
