//! Aligned plain-text output.

use std::fmt::Write;

use symk_core::complexify::{ComplexificationReport, IPoset, OrbitDiagram, OrbitNode, Side};
use symk_core::orbits::OrbitCount;
use symk_core::tori::{Classification, Signature};

use crate::{heading, node_name, perm_string, Outcome, RunConfig};

/// Left-aligned columns separated by two spaces.
fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for r in rows {
        let cells: Vec<String> = r
            .iter()
            .enumerate()
            .map(|(c, s)| format!("{s}{}", " ".repeat(widths[c] - s.chars().count())))
            .collect();
        writeln!(out, "{}", cells.join("  ").trim_end()).unwrap();
    }
    out
}

fn sig(s: Signature) -> String {
    format!("({},{})", s.plus, s.minus)
}

fn orbits(cfg: &RunConfig, o: &OrbitCount, weyl: bool) -> String {
    let mut out = format!("{}\n\n", heading(cfg));
    let mut rows = vec![["class", "signature", "|W_G|", "|W_H|", "orbits", "cosets"]
        .map(String::from)
        .to_vec()];
    for (c, q) in &o.per_class {
        let reps: Vec<String> = q.coset_reps.iter().map(|p| perm_string(p)).collect();
        rows.push(vec![
            c.invariant.clone(),
            sig(c.signature),
            q.order_wg.to_string(),
            q.order_wh.to_string(),
            q.quotient.to_string(),
            reps.join(" "),
        ]);
    }
    out.push_str(&table(&rows));
    if let Some(s) = o.classification.open_family {
        writeln!(out, "...    {}  infinitely many further classes", sig(s)).unwrap();
    }
    writeln!(out, "\ntotal: {}", o.total).unwrap();
    if o.is_iwasawa() {
        writeln!(out, "one orbit: G_k = B_k H_k").unwrap();
    }
    if weyl {
        for (c, q) in &o.per_class {
            writeln!(out, "\n{} W_H:", c.invariant).unwrap();
            for (p, cert) in &q.wh {
                let cert = cert
                    .as_ref()
                    .map_or("-".to_string(), |m| m.format(&cfg.field));
                writeln!(out, "  {}  {cert}", perm_string(p)).unwrap();
            }
        }
    }
    out
}

fn tori(cfg: &RunConfig, c: &Classification) -> String {
    let mut out = format!("{}\n\n", heading(cfg));
    let mut rows = vec![["class", "signature", "multiplicity", "frame"]
        .map(String::from)
        .to_vec()];
    for class in &c.classes {
        rows.push(vec![
            class.invariant.clone(),
            sig(class.signature),
            class.multiplicity.to_string(),
            class
                .representative
                .as_ref()
                .map_or("-".into(), |t| t.conjugator().format(&cfg.field)),
        ]);
    }
    out.push_str(&table(&rows));
    writeln!(out, "\nclasses: {}", c.count()).unwrap();
    out
}

fn poset_lines(p: &IPoset, d: &OrbitDiagram, prefix: &str, hollow: &[OrbitNode]) -> Vec<String> {
    let mut minus: Vec<usize> = p.nodes.iter().map(|c| c.signature.minus).collect();
    minus.sort_unstable();
    minus.dedup();
    minus
        .into_iter()
        .rev()
        .map(|m| {
            let mut names: Vec<String> = d
                .nodes
                .iter()
                .filter(|n| p.nodes[n.0].signature.minus == m)
                .map(|&n| {
                    let name = node_name(prefix, n);
                    if hollow.contains(&n) {
                        format!("({name})")
                    } else {
                        name
                    }
                })
                .collect();
            if d.ellipsis.is_some_and(|s| s.minus == m) {
                names.push("...".into());
            }
            format!("dim- {m}: {}", names.join(" "))
        })
        .collect()
}

fn poset(cfg: &RunConfig, p: &IPoset, d: &OrbitDiagram) -> String {
    let mut out = format!("{}\n\n", heading(cfg));
    for (i, c) in p.nodes.iter().enumerate() {
        writeln!(out, "c{}  {}  {}", i + 1, c.invariant, sig(c.signature)).unwrap();
    }
    let covers: Vec<String> = p
        .covers()
        .iter()
        .map(|(a, b)| format!("c{} < c{}", a + 1, b + 1))
        .collect();
    writeln!(
        out,
        "covers: {}",
        if covers.is_empty() {
            "none".into()
        } else {
            covers.join(", ")
        }
    )
    .unwrap();
    writeln!(
        out,
        "\norbit diagram ({} nodes, {} edges):",
        d.nodes.len(),
        d.edges.len()
    )
    .unwrap();
    for line in poset_lines(p, d, "c", &[]) {
        writeln!(out, "  {line}").unwrap();
    }
    out
}

fn side_by_side(dom: &Side, cod: &Side, hollow: &[OrbitNode]) -> String {
    let left = poset_lines(&dom.poset, &dom.diagram, "c", &[]);
    let right = poset_lines(&cod.poset, &cod.diagram, "cbar", hollow);
    let mut rows = vec![vec![
        format!("over {}", dom.field),
        format!("over {}", cod.field),
    ]];
    for i in 0..left.len().max(right.len()) {
        rows.push(vec![
            left.get(i).cloned().unwrap_or_default(),
            right.get(i).cloned().unwrap_or_default(),
        ]);
    }
    table(&rows)
}

fn report(cfg: &RunConfig, r: &ComplexificationReport) -> String {
    let mut out = format!("{}\n\n", heading(cfg));
    writeln!(out, "rank H = {}, k-rank H = {}", r.rank.0, r.rank.1).unwrap();
    if let (Some(dom), Some(cod)) = (&r.domain, &r.codomain) {
        let hollow = r.cokernel.clone().unwrap_or_default();
        out.push('\n');
        out.push_str(&side_by_side(dom, cod, &hollow));
        out.push('\n');
        for &(a, b) in &r.orbit_map {
            writeln!(out, "{} -> {}", node_name("c", a), node_name("cbar", b)).unwrap();
        }
        let fibers: Vec<String> = r
            .fibers
            .iter()
            .map(|&(o, s)| format!("{}:{s}", node_name("cbar", o)))
            .collect();
        writeln!(out, "fibers: {}", fibers.join(" ")).unwrap();
        let cokernel: Vec<String> = hollow.iter().map(|&o| node_name("cbar", o)).collect();
        writeln!(
            out,
            "cokernel: {}",
            if cokernel.is_empty() {
                "empty".into()
            } else {
                cokernel.join(" ")
            }
        )
        .unwrap();
    }
    let by_cokernel = r
        .surjective_by_cokernel
        .map_or("n/a".into(), |b| b.to_string());
    writeln!(out, "surjective by cokernel: {by_cokernel}").unwrap();
    writeln!(out, "surjective by rank: {}", r.surjective_by_rank).unwrap();
    writeln!(out, "surjective: {}", r.surjective).unwrap();
    out
}

pub fn render(cfg: &RunConfig, outcome: &Outcome) -> String {
    match outcome {
        Outcome::Orbits(o, _) => orbits(cfg, o, false),
        Outcome::Weyl(o) => orbits(cfg, o, true),
        Outcome::Tori(c) => tori(cfg, c),
        Outcome::Poset(p, d) => poset(cfg, p, d),
        Outcome::Complexify(r) => report(cfg, r),
        Outcome::Oracle(o) => {
            let vk = o.vk_orbits.map_or("n/a".into(), |v| v.to_string());
            format!(
                "{}\n\nformula        {}\ndouble cosets  {}\nV_k orbits     {vk}\nagree          {}\n",
                heading(cfg),
                o.formula,
                o.double_cosets,
                o.agree()
            )
        }
        Outcome::Ranks { rank, krank } => format!(
            "{}\n\nrank H = {rank}, k-rank H = {krank}\nsurjective: {}\n",
            heading(cfg),
            rank == krank
        ),
    }
}
