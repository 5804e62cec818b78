//! Graphviz output. Orbits are unlabeled circles, as in the usual Bruhat
//! diagram drawings; class data sits in tooltips. Codomain orbits missed by
//! the complexification map are dashed.

use std::collections::BTreeSet;
use std::fmt::Write;

use symk_core::complexify::{ComplexificationReport, IPoset, OrbitDiagram, OrbitNode};
use symk_core::{Error, Result};

use crate::{heading, node_name, Outcome, RunConfig};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Nodes grouped by `dim T⁻`, largest first, so split-type classes sit on top.
fn levels<T: Copy>(poset: &IPoset, items: &[T], class_of: impl Fn(T) -> usize) -> Vec<Vec<T>> {
    let minus: BTreeSet<usize> = poset.nodes.iter().map(|c| c.signature.minus).collect();
    minus
        .into_iter()
        .rev()
        .map(|m| {
            items
                .iter()
                .copied()
                .filter(|&x| poset.nodes[class_of(x)].signature.minus == m)
                .collect()
        })
        .collect()
}

fn rank_same(out: &mut String, indent: &str, names: &[String]) {
    if !names.is_empty() {
        writeln!(out, "{indent}{{ rank=same; {}; }}", names.join("; ")).unwrap();
    }
}

fn tooltip(poset: &IPoset, (class, orbit): OrbitNode) -> String {
    let c = &poset.nodes[class];
    quote(&format!(
        "{} ({},{}) orbit {}",
        c.invariant,
        c.signature.plus,
        c.signature.minus,
        orbit + 1
    ))
}

/// Orbit diagram body; `hollow` nodes are dashed, as are edges touching them.
fn diagram_body(
    out: &mut String,
    indent: &str,
    poset: &IPoset,
    d: &OrbitDiagram,
    prefix: &str,
    hollow: &[OrbitNode],
) {
    for &node in &d.nodes {
        let style = if hollow.contains(&node) {
            ", style=dashed"
        } else {
            ""
        };
        writeln!(
            out,
            "{indent}{} [tooltip={}{style}];",
            node_name(prefix, node),
            tooltip(poset, node)
        )
        .unwrap();
    }
    let more = format!("{prefix}_more");
    if d.ellipsis.is_some() {
        writeln!(out, "{indent}{more} [shape=plaintext, label=\"...\"];").unwrap();
    }
    for level in levels(poset, &d.nodes, |n| n.0) {
        let mut names: Vec<String> = level.iter().map(|&n| node_name(prefix, n)).collect();
        let top_family = d.ellipsis.is_some_and(|s| {
            level
                .first()
                .is_some_and(|n| poset.nodes[n.0].signature == s)
        });
        if top_family {
            names.push(more.clone());
        }
        rank_same(out, indent, &names);
    }
    for &(a, b) in &d.edges {
        let style = if hollow.contains(&a) || hollow.contains(&b) {
            " [style=dashed]"
        } else {
            ""
        };
        writeln!(
            out,
            "{indent}{} -- {}{style};",
            node_name(prefix, a),
            node_name(prefix, b)
        )
        .unwrap();
    }
}

fn graph_open(out: &mut String, name: &str, label: &str) {
    writeln!(out, "graph {name} {{").unwrap();
    writeln!(out, "  label={};", quote(label)).unwrap();
    writeln!(out, "  labelloc=t;").unwrap();
    writeln!(out, "  node [shape=circle, label=\"\", width=0.25];").unwrap();
}

pub fn poset(cfg: &RunConfig, p: &IPoset) -> String {
    let mut out = String::new();
    graph_open(&mut out, "iposet", &heading(cfg));
    for (i, c) in p.nodes.iter().enumerate() {
        let tip = format!(
            "{} ({},{})",
            c.invariant, c.signature.plus, c.signature.minus
        );
        writeln!(out, "  c{} [tooltip={}];", i + 1, quote(&tip)).unwrap();
    }
    if p.open_family.is_some() {
        writeln!(out, "  c_more [shape=plaintext, label=\"...\"];").unwrap();
    }
    let ids: Vec<usize> = (0..p.nodes.len()).collect();
    for level in levels(p, &ids, |i| i) {
        let mut names: Vec<String> = level.iter().map(|i| format!("c{}", i + 1)).collect();
        if p.open_family
            .is_some_and(|s| level.first().is_some_and(|&i| p.nodes[i].signature == s))
        {
            names.push("c_more".into());
        }
        rank_same(&mut out, "  ", &names);
    }
    for (lo, hi) in p.covers() {
        writeln!(out, "  c{} -- c{};", hi + 1, lo + 1).unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn orbit_diagram(cfg: &RunConfig, p: &IPoset, d: &OrbitDiagram) -> String {
    let mut out = String::new();
    graph_open(&mut out, "orbits", &heading(cfg));
    diagram_body(&mut out, "  ", p, d, "c", &[]);
    out.push_str("}\n");
    out
}

/// Domain and codomain side by side, `φ` as dotted edges.
pub fn report(cfg: &RunConfig, r: &ComplexificationReport) -> String {
    let mut out = String::new();
    let verdict = if r.surjective {
        "surjective"
    } else {
        "not surjective"
    };
    graph_open(
        &mut out,
        "complexify",
        &format!("{}: {verdict}", heading(cfg)),
    );
    let (Some(dom), Some(cod)) = (&r.domain, &r.codomain) else {
        out.push_str("}\n");
        return out;
    };
    writeln!(out, "  rankdir=TB;").unwrap();
    writeln!(out, "  subgraph cluster_domain {{").unwrap();
    writeln!(out, "    label={};", quote(&dom.field.to_string())).unwrap();
    diagram_body(&mut out, "    ", &dom.poset, &dom.diagram, "c", &[]);
    writeln!(out, "  }}").unwrap();
    writeln!(out, "  subgraph cluster_codomain {{").unwrap();
    writeln!(out, "    label={};", quote(&cod.field.to_string())).unwrap();
    let hollow = r.cokernel.clone().unwrap_or_default();
    diagram_body(&mut out, "    ", &cod.poset, &cod.diagram, "cbar", &hollow);
    writeln!(out, "  }}").unwrap();
    for &(a, b) in &r.orbit_map {
        writeln!(
            out,
            "  {} -- {} [style=dotted, constraint=false];",
            node_name("c", a),
            node_name("cbar", b)
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn render(cfg: &RunConfig, outcome: &Outcome) -> Result<String> {
    match outcome {
        Outcome::Orbits(_, Some((p, d))) => Ok(orbit_diagram(cfg, p, d)),
        Outcome::Poset(p, _) => Ok(poset(cfg, p)),
        Outcome::Complexify(r) => Ok(report(cfg, r)),
        _ => Err(Error::Unsupported(
            "DOT output is available for orbits, poset and complexify".into(),
        )),
    }
}
