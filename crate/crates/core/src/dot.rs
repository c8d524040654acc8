//! Graphviz output. Posets are drawn by their cover relation only.

use std::fmt::Write;

use crate::localization::CounitReport;
use crate::presheaf::ElementsCategory;
use crate::quantum_logic::OrthomodularPoset;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Hasse diagram of an event algebra, bottom to top.
pub fn hasse_dot(l: &OrthomodularPoset) -> String {
    let mut out = String::from("digraph hasse {\n  rankdir=BT;\n  node [shape=plaintext];\n");
    for e in l.elements() {
        writeln!(out, "  n{e} [label={}];", quote(l.label(e))).unwrap();
    }
    for (a, b) in l.covers() {
        writeln!(out, "  n{a} -> n{b};").unwrap();
    }
    out.push_str("}\n");
    out
}

/// The category of elements without identity arrows.
pub fn elements_dot(el: &ElementsCategory) -> String {
    let mut out = String::from("digraph elements {\n  node [shape=box];\n");
    for e in 0..el.objects().len() {
        writeln!(out, "  e{e} [label={}];", quote(&el.object_label(e))).unwrap();
    }
    for (i, a) in el.arrows().iter().enumerate() {
        if el.identity(a.target) == i {
            continue;
        }
        writeln!(out, "  e{} -> e{};", a.source, a.target).unwrap();
    }
    out.push_str("}\n");
    out
}

/// Classes of `S ⊗ A` pointing at their images in `L`.
pub fn counit_dot(report: &CounitReport, l: &OrthomodularPoset) -> String {
    let mut out = String::from("digraph counit {\n  rankdir=LR;\n");
    out.push_str("  subgraph cluster_classes {\n    label=\"S ⊗ A\";\n    node [shape=box];\n");
    for (c, class) in report.classes.iter().enumerate() {
        writeln!(out, "    c{c} [label={}];", quote(&format!("[{}]", class.representative))).unwrap();
    }
    out.push_str("  }\n  subgraph cluster_target {\n    label=\"L\";\n    node [shape=plaintext];\n");
    for e in l.elements() {
        writeln!(out, "    l{e} [label={}];", quote(l.label(e))).unwrap();
    }
    out.push_str("  }\n");
    for (c, &e) in report.class_images.iter().enumerate() {
        writeln!(out, "  c{c} -> l{e};").unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum_logic::catalog;

    #[test]
    fn hasse_of_mo2_has_eight_covers() {
        let dot = hasse_dot(&catalog::mo2());
        assert_eq!(dot.matches("->").count(), 8);
        assert!(dot.contains("label=\"a*\""));
    }
}
