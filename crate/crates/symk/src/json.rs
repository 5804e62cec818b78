use serde_json::{json, Map, Value};
use symk_core::complexify::{ComplexificationReport, IPoset, OrbitDiagram, Side};
use symk_core::orbits::OrbitCount;
use symk_core::tori::{decompose, Classification, Signature, TorusClass};
use symk_core::{Count, FieldModel, Matrix};

use crate::{node_name, perm_string, Outcome, RunConfig};

/// Finite counts are numbers; infinity is the string `"inf"`.
pub fn count(c: Count) -> Value {
    match c {
        Count::Finite(v) => json!(v),
        Count::Infinite => json!("inf"),
    }
}

fn signature(s: Signature) -> Value {
    json!([s.plus, s.minus])
}

fn matrix(k: &FieldModel, m: &Matrix) -> Value {
    json!(m.format_rows(k))
}

fn header(cfg: &RunConfig, command: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.insert("group".into(), json!(format!("sl:{}", cfg.n)));
    m.insert("field".into(), json!(cfg.field.to_string()));
    m.insert("involution".into(), json!(cfg.involution.to_string()));
    m
}

fn class_entry(k: &FieldModel, c: &TorusClass) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("invariant".into(), json!(c.invariant));
    m.insert("signature".into(), signature(c.signature));
    m.insert("multiplicity".into(), count(c.multiplicity));
    m.insert(
        "representative".into(),
        c.representative
            .as_ref()
            .map_or(Value::Null, |t| matrix(k, t.conjugator())),
    );
    m
}

fn orbits(cfg: &RunConfig, o: &OrbitCount, weyl: bool) -> Value {
    let k = &cfg.field;
    let mut m = header(cfg, if weyl { "weyl" } else { "orbits" });
    m.insert("total".into(), count(o.total));
    m.insert("iwasawa".into(), json!(o.is_iwasawa()));
    if o.is_iwasawa() {
        m.insert("note".into(), json!("G_k = B_k H_k"));
    }
    let classes: Vec<Value> = o
        .per_class
        .iter()
        .map(|(c, q)| {
            let mut e = class_entry(k, c);
            e.insert("order_wg".into(), json!(q.order_wg));
            e.insert("order_wh".into(), json!(q.order_wh));
            e.insert("quotient".into(), json!(q.quotient));
            e.insert(
                "coset_reps".into(),
                json!(q
                    .coset_reps
                    .iter()
                    .map(|p| perm_string(p))
                    .collect::<Vec<_>>()),
            );
            if weyl {
                let wh: Vec<Value> =
                    q.wh.iter()
                        .map(|(p, cert)| {
                            json!({
                                "perm": perm_string(p),
                                "certificate": cert.as_ref().map_or(Value::Null, |c| matrix(k, c)),
                            })
                        })
                        .collect();
                e.insert("weyl_h".into(), json!(wh));
                e.insert(
                    "coset_matrices".into(),
                    json!(q
                        .coset_matrices
                        .iter()
                        .map(|c| matrix(k, c))
                        .collect::<Vec<_>>()),
                );
            }
            Value::Object(e)
        })
        .collect();
    m.insert("classes".into(), json!(classes));
    m.insert(
        "open_family".into(),
        o.classification.open_family.map_or(Value::Null, signature),
    );
    Value::Object(m)
}

fn tori(cfg: &RunConfig, c: &Classification) -> Value {
    let k = &cfg.field;
    let theta = cfg.involution.to_spec(k, cfg.n).ok();
    let mut m = header(cfg, "tori");
    m.insert("count".into(), count(c.count()));
    let classes: Vec<Value> = c
        .classes
        .iter()
        .map(|class| {
            let mut e = class_entry(k, class);
            if !class.members.is_empty() {
                e.insert("members".into(), json!(class.members.len()));
            }
            if let (Some(t), Some(theta)) = (&class.representative, &theta) {
                if let Ok(d) = decompose(k, t, theta) {
                    e.insert("plus_basis".into(), json!(d.plus_basis));
                    e.insert("minus_basis".into(), json!(d.minus_basis));
                }
            }
            Value::Object(e)
        })
        .collect();
    m.insert("classes".into(), json!(classes));
    m.insert(
        "open_family".into(),
        c.open_family.map_or(Value::Null, signature),
    );
    Value::Object(m)
}

fn poset(p: &IPoset) -> Value {
    let nodes: Vec<Value> = p
        .nodes
        .iter()
        .enumerate()
        .map(|(i, c)| json!({"id": format!("c{}", i + 1), "invariant": c.invariant, "signature": signature(c.signature)}))
        .collect();
    let name = |i: usize| format!("c{}", i + 1);
    let order: Vec<Value> = p
        .order_pairs
        .iter()
        .filter(|(i, j)| i != j)
        .map(|&(i, j)| json!([name(i), name(j)]))
        .collect();
    let covers: Vec<Value> = p
        .covers()
        .into_iter()
        .map(|(i, j)| json!([name(i), name(j)]))
        .collect();
    json!({
        "nodes": nodes,
        "order": order,
        "covers": covers,
        "open_family": p.open_family.map_or(Value::Null, signature),
    })
}

fn diagram(d: &OrbitDiagram, prefix: &str) -> Value {
    json!({
        "nodes": d.nodes.iter().map(|&x| node_name(prefix, x)).collect::<Vec<_>>(),
        "edges": d.edges.iter().map(|&(a, b)| json!([node_name(prefix, a), node_name(prefix, b)])).collect::<Vec<_>>(),
        "ellipsis": d.ellipsis.is_some(),
    })
}

fn side(s: &Side, prefix: &str) -> Value {
    json!({
        "field": s.field.to_string(),
        "total": count(s.orbits.total),
        "poset": poset(&s.poset),
        "diagram": diagram(&s.diagram, prefix),
    })
}

fn report(cfg: &RunConfig, r: &ComplexificationReport) -> Value {
    let mut m = header(cfg, "complexify");
    m.insert("surjective".into(), json!(r.surjective));
    m.insert("rank".into(), json!([r.rank.0, r.rank.1]));
    m.insert("surjective_by_rank".into(), json!(r.surjective_by_rank));
    m.insert(
        "surjective_by_cokernel".into(),
        json!(r.surjective_by_cokernel),
    );
    let class_map: Vec<Value> = match &r.domain {
        Some(d) => r
            .class_map
            .iter()
            .enumerate()
            .map(|(i, &j)| {
                json!({
                    "class": format!("c{}", i + 1),
                    "invariant": d.poset.nodes[i].invariant,
                    "signature": signature(d.poset.nodes[i].signature),
                    "target": format!("cbar{}", j + 1),
                })
            })
            .collect(),
        None => Vec::new(),
    };
    m.insert("class_map".into(), json!(class_map));
    m.insert(
        "orbit_map".into(),
        json!(r
            .orbit_map
            .iter()
            .map(|&(a, b)| json!([node_name("c", a), node_name("cbar", b)]))
            .collect::<Vec<_>>()),
    );
    m.insert(
        "fibers".into(),
        json!(r
            .fibers
            .iter()
            .map(|&(o, s)| json!({"orbit": node_name("cbar", o), "size": count(s)}))
            .collect::<Vec<_>>()),
    );
    m.insert(
        "cokernel".into(),
        r.cokernel.as_ref().map_or(Value::Null, |c| {
            json!(c.iter().map(|&o| node_name("cbar", o)).collect::<Vec<_>>())
        }),
    );
    m.insert(
        "domain".into(),
        r.domain.as_ref().map_or(Value::Null, |s| side(s, "c")),
    );
    m.insert(
        "codomain".into(),
        r.codomain.as_ref().map_or(Value::Null, |s| side(s, "cbar")),
    );
    Value::Object(m)
}

pub fn render(cfg: &RunConfig, outcome: &Outcome) -> Value {
    match outcome {
        Outcome::Orbits(o, _) => orbits(cfg, o, false),
        Outcome::Weyl(o) => orbits(cfg, o, true),
        Outcome::Tori(c) => tori(cfg, c),
        Outcome::Poset(p, d) => {
            let mut m = header(cfg, "poset");
            m.insert("poset".into(), poset(p));
            m.insert("diagram".into(), diagram(d, "c"));
            Value::Object(m)
        }
        Outcome::Complexify(r) => report(cfg, r),
        Outcome::Oracle(o) => {
            let mut m = header(cfg, "oracle");
            m.insert("q".into(), json!(o.q));
            m.insert("formula".into(), json!(o.formula));
            m.insert("double_cosets".into(), json!(o.double_cosets));
            m.insert("vk_orbits".into(), json!(o.vk_orbits));
            m.insert("coset_sizes".into(), json!(o.coset_sizes));
            m.insert("agree".into(), json!(o.agree()));
            Value::Object(m)
        }
        Outcome::Ranks { rank, krank } => {
            let mut m = header(cfg, "ranks");
            m.insert("rank".into(), json!([rank, krank]));
            m.insert("surjective".into(), json!(rank == krank));
            Value::Object(m)
        }
    }
}
