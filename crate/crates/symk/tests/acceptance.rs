//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test -p symk --test acceptance`.

use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symk::{render, Command, Format, Outcome, RunConfig};
use symk_core::complexify::{complexify, poset_and_diagram};
use symk_core::group::{enumerate_group, fixed_group};
use symk_core::orbits::{enumerate_double_cosets, orbit_count, vk_orbits};
use symk_core::roots::{antidiag_fixed_torus, cayley_transform, Root};
use symk_core::tori::{classify_exhaustive, decompose, rank_krank, Signature, Torus};
use symk_core::weyl::weyl_quotient;
use symk_core::{
    Count, FieldModel, GroupElement, InvolutionSpec, Matrix, NamedInvolution, Scalar,
    DEFAULT_BUDGET,
};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn field(s: &str) -> FieldModel {
    s.parse().unwrap()
}

fn named(s: &str) -> NamedInvolution {
    s.parse().unwrap()
}

fn e<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    ensure!(took <= limit, "took {took:?}, limit {limit:?}");
    Ok(())
}

const SPLIT: Signature = Signature { plus: 0, minus: 1 };
const FIXED: Signature = Signature { plus: 1, minus: 0 };

fn criterion_1() -> Check {
    let start = Instant::now();
    let o = e(orbit_count(
        &FieldModel::Real,
        2,
        &named("antidiag"),
        DEFAULT_BUDGET,
    ))?;
    within(start, Duration::from_secs(1))?;
    ensure!(o.total == Count::Finite(4), "total {}", o.total);
    let quotients: Vec<u64> = o.per_class.iter().map(|(_, q)| q.quotient).collect();
    ensure!(quotients == [2, 2], "quotients {quotients:?}");
    Ok("SL(2,R) antidiag: 4 orbits = 2 + 2".into())
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let cfg = RunConfig {
        command: Command::Orbits,
        n: 2,
        field: FieldModel::Real,
        involution: named("symplectic"),
        format: Format::Json,
        budget: DEFAULT_BUDGET,
        out: None,
    };
    let o = e(orbit_count(&cfg.field, 2, &cfg.involution, DEFAULT_BUDGET))?;
    within(start, Duration::from_secs(1))?;
    ensure!(
        o.total == Count::Finite(1) && o.is_iwasawa(),
        "total {}",
        o.total
    );
    let json = e(render(&cfg, &Outcome::Orbits(o.clone(), None)))?;
    ensure!(
        json.contains("\"note\": \"G_k = B_k H_k\""),
        "JSON report lacks the decomposition note"
    );
    let text = e(render(
        &RunConfig {
            format: Format::Text,
            ..cfg
        },
        &Outcome::Orbits(o, None),
    ))?;
    ensure!(
        text.contains("G_k = B_k H_k"),
        "text report lacks the decomposition note"
    );
    Ok("SL(2,R) symplectic: 1 orbit, report notes G_k = B_k H_k".into())
}

fn criterion_3() -> Check {
    let start = Instant::now();
    let k = field("Qp:5");
    let theta = named("antidiag");
    let o = e(orbit_count(&k, 2, &theta, DEFAULT_BUDGET))?;
    let (p, d) = e(poset_and_diagram(&k, 2, &theta, DEFAULT_BUDGET))?;
    within(start, Duration::from_secs(1))?;
    let sigs: Vec<Signature> = o.per_class.iter().map(|(c, _)| c.signature).collect();
    let split = sigs.iter().filter(|&&s| s == SPLIT).count();
    let fixed = sigs.iter().filter(|&&s| s == FIXED).count();
    ensure!(
        (split, fixed) == (4, 1),
        "classes {split} split + {fixed} fixed"
    );
    ensure!(
        p.nodes.len() == 5 && p.covers().len() == 4,
        "I-poset {} nodes, {} covers",
        p.nodes.len(),
        p.covers().len()
    );
    for (lo, hi) in p.covers() {
        ensure!(
            p.nodes[lo].signature == FIXED && p.nodes[hi].signature == SPLIT,
            "cover {lo} < {hi}"
        );
    }
    ensure!(
        d.nodes.len() == 6 && d.edges.len() == 8,
        "diagram {} nodes, {} edges",
        d.nodes.len(),
        d.edges.len()
    );
    ensure!(o.total == Count::Finite(6), "total {}", o.total);
    Ok("SL(2,Q_5): 4 + 1 classes, poset 5/4, diagram 6/8, 6 orbits".into())
}

fn criterion_4() -> Check {
    let start = Instant::now();
    let mut lines = Vec::new();
    for q in [3u32, 5, 7, 11, 13] {
        let k = FieldModel::finite(q).unwrap();
        for name in ["antidiag", "symplectic"] {
            let theta = named(name);
            let spec = e(theta.to_spec(&k, 2))?;
            let formula = e(orbit_count(&k, 2, &theta, DEFAULT_BUDGET))?.total;
            let cosets = e(enumerate_double_cosets(&k, &spec, DEFAULT_BUDGET))?.count() as u64;
            let vk = e(vk_orbits(&k, &spec, DEFAULT_BUDGET))?.len() as u64;
            ensure!(
                formula == Count::Finite(cosets) && cosets == vk,
                "q={q} {name}: formula {formula}, double cosets {cosets}, V_k {vk}"
            );
            lines.push(format!("{q}/{name}={cosets}"));
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("10 instances agree: {}", lines.join(" ")))
}

fn criterion_5() -> Check {
    let mut checked = 0;
    let mut fields: Vec<String> = [
        "R",
        "Q",
        "Cbar",
        "Qp:5",
        "Qp:13",
        "Q(sqrt:-1)",
        "R(sqrt:-1)",
        "Q(sqrt:2)",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    fields.extend([3, 5, 7, 9, 11, 13, 25].iter().map(|q| format!("Fq:{q}")));
    for f in &fields {
        let k = field(f);
        for name in [
            "antidiag",
            "symplectic",
            "transpose-inverse",
            "Lx:m=1,x=2",
            "Lx:m=1,x=3",
            "Lx:m=1,x=-3",
        ] {
            if named(name).to_spec(&k, 2).is_err() {
                continue;
            }
            let r = match complexify(&k, 2, &named(name), DEFAULT_BUDGET) {
                Ok(r) => r,
                Err(symk_core::Error::Unsupported(_)) => continue,
                Err(err) => return Err(format!("{f} {name}: {err}")),
            };
            if let Some(by_cokernel) = r.surjective_by_cokernel {
                ensure!(
                    by_cokernel == r.surjective_by_rank,
                    "{f} {name}: criteria disagree"
                );
                checked += 1;
            }
        }
    }
    for q in [3u32, 5, 7, 11, 13] {
        let k = FieldModel::finite(q).unwrap();
        let r = e(complexify(&k, 2, &named("symplectic"), DEFAULT_BUDGET))?;
        ensure!(
            r.surjective_by_cokernel == Some(q % 4 == 1),
            "q={q}: cokernel verdict {:?}",
            r.surjective_by_cokernel
        );
        ensure!(
            r.surjective == (q % 4 == 1),
            "q={q}: surjective {}",
            r.surjective
        );
    }
    ensure!(
        checked >= 60,
        "only {checked} configurations had both criteria"
    );
    Ok(format!(
        "{checked} configurations agree; symplectic over F_q surjective iff q = 1 mod 4"
    ))
}

fn criterion_6() -> Check {
    let mut count = 0;
    let timed = |k: &FieldModel,
                 n: usize,
                 theta: &NamedInvolution|
     -> Result<(usize, usize, bool), String> {
        let start = Instant::now();
        let rank = e(rank_krank(n, theta, k))?;
        let r = e(complexify(k, n, theta, DEFAULT_BUDGET))?;
        within(start, Duration::from_secs(1))?;
        Ok((rank.0, rank.1, r.surjective))
    };
    for f in ["R", "Q", "Qp:5", "Fq:3", "Fq:7", "Cbar"] {
        let k = field(f);
        for n in 2..=6 {
            for i in 1..=n / 2 {
                let got = timed(&k, n, &NamedInvolution::BlockJ { n, i })?;
                ensure!(got == (n - 1, n - 1, true), "{f} blockJ({n},{i}): {got:?}");
                count += 1;
            }
        }
    }
    for (base, x) in [("R", -1), ("Qp:5", 2), ("Fq:7", 3), ("Fq:11", 2)] {
        let k = field(base);
        let ext = field(&format!("{base}(sqrt:{x})"));
        ensure!(
            !k.is_square(&k.from_int(x)).unwrap(),
            "{x} is a square in {base}"
        );
        for m in 1..=3 {
            let theta = named(&format!("Lx:m={m},x={x}"));
            let got = timed(&k, 2 * m, &theta)?;
            ensure!(
                got == (2 * m - 1, m - 1, false),
                "{base} Lx({m},{x}): {got:?}"
            );
            let got = timed(&ext, 2 * m, &theta)?;
            ensure!(
                got == (2 * m - 1, 2 * m - 1, true),
                "{base}(sqrt:{x}) Lx({m},{x}): {got:?}"
            );
            count += 2;
        }
    }
    for n in 2..=6 {
        let got = timed(&FieldModel::Real, n, &NamedInvolution::TransposeInverse)?;
        ensure!(
            got == (n / 2, 0, false),
            "R transpose-inverse n={n}: {got:?}"
        );
        count += 1;
    }
    Ok(format!("{count} rank ledger entries match"))
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|err| panic!("{}: {err}", path.display()))
}

fn report_dot(
    f: &str,
    inv: &str,
) -> Result<(String, symk_core::complexify::ComplexificationReport), String> {
    let cfg = RunConfig {
        command: Command::Complexify,
        n: 2,
        field: field(f),
        involution: named(inv),
        format: Format::Dot,
        budget: DEFAULT_BUDGET,
        out: None,
    };
    let r = e(complexify(&cfg.field, 2, &cfg.involution, DEFAULT_BUDGET))?;
    let dot = e(render(&cfg, &Outcome::Complexify(Box::new(r.clone()))))?;
    Ok((dot, r))
}

fn criterion_7() -> Check {
    let (dot, r) = report_dot("R", "antidiag")?;
    ensure!(
        dot == golden("complexify_r_antidiag.dot"),
        "R antidiag DOT differs from golden"
    );
    let dom = r.domain.as_ref().ok_or("no domain")?;
    ensure!(
        dom.diagram.nodes.len() == 4 && dom.diagram.edges.len() == 4,
        "R antidiag domain shape"
    );
    let mut fibers: Vec<Count> = r.fibers.iter().map(|f| f.1).collect();
    fibers.sort();
    ensure!(
        fibers == [Count::Finite(1), Count::Finite(1), Count::Finite(2)],
        "fibers {fibers:?}"
    );
    ensure!(!dot.contains("dashed"), "R antidiag has hollow nodes");

    let (dot, r) = report_dot("R", "symplectic")?;
    ensure!(
        dot == golden("complexify_r_symplectic.dot"),
        "R symplectic DOT differs from golden"
    );
    ensure!(
        r.cokernel.as_ref().map(Vec::len) == Some(2),
        "cokernel {:?}",
        r.cokernel
    );
    let hollow = dot
        .lines()
        .filter(|l| l.contains("[tooltip=") && l.contains("style=dashed"))
        .count();
    ensure!(hollow == 2, "{hollow} hollow nodes");
    ensure!(
        r.domain.as_ref().unwrap().diagram.nodes.len() == 1,
        "R symplectic domain shape"
    );

    let (dot, r) = report_dot("Q", "antidiag")?;
    ensure!(
        dot == golden("complexify_q_antidiag.dot"),
        "Q antidiag DOT differs from golden"
    );
    let dom = r.domain.as_ref().unwrap();
    let listed_split = dom
        .poset
        .nodes
        .iter()
        .filter(|c| c.signature == SPLIT)
        .count();
    ensure!(
        listed_split == 4 && dom.diagram.ellipsis == Some(SPLIT),
        "Q truncation {listed_split}"
    );
    ensure!(
        dot.contains("label=\"...\""),
        "Q rendering lacks the ellipsis"
    );
    ensure!(
        r.fibers.iter().any(|f| f.1 == Count::Infinite),
        "Q has no infinite fiber"
    );
    Ok("R antidiag fibers {2,1,1}; R symplectic cokernel 2 hollow; Q truncated with ellipsis; goldens match".into())
}

fn random_rational_sl(k: &FieldModel, n: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let mut x = Matrix::identity(k, n);
    for _ in 0..3 {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let mut el = Matrix::identity(k, n);
        el.set(
            i,
            j,
            Scalar::rat(rng.gen_range(-5..=5), rng.gen_range(1..=4)),
        );
        x = x.mul(k, &el);
    }
    let d = Scalar::rat(rng.gen_range(1..=6), rng.gen_range(1..=6));
    let mut diag = vec![k.one(); n];
    diag[0] = d.clone();
    diag[n - 1] = k.inv(&d).unwrap();
    x.mul(k, &Matrix::diagonal(k, &diag))
}

fn tau_checks(
    k: &FieldModel,
    theta: &InvolutionSpec,
    x: &GroupElement,
    h: &[GroupElement],
) -> Result<(), String> {
    ensure!(&e(theta.apply(k, &e(theta.apply(k, x))?))? == x, "θ² ≠ id");
    let t = e(theta.tau(k, x))?;
    ensure!(e(theta.apply(k, &t))? == t.inverse(k), "θ(τ(x)) ≠ τ(x)⁻¹");
    for hh in h {
        ensure!(e(theta.tau(k, &x.mul(k, hh)))? == t, "τ(xh) ≠ τ(x)");
    }
    Ok(())
}

fn criterion_8() -> Check {
    // Exhaustive over F_3.
    let f3 = FieldModel::finite(3).unwrap();
    let mut exhaustive = 0;
    for (n, names) in [
        (2, vec!["antidiag", "symplectic", "transpose-inverse"]),
        (3, vec!["blockJ:n=3,i=1", "transpose-inverse"]),
    ] {
        let group: Vec<GroupElement> = e(enumerate_group(&f3, n, DEFAULT_BUDGET))?.collect();
        for name in names {
            let theta = e(named(name).to_spec(&f3, n))?;
            let h = e(fixed_group(&f3, &theta, DEFAULT_BUDGET))?;
            for x in &group {
                tau_checks(&f3, &theta, x, &h)?;
                exhaustive += 1;
            }
        }
    }
    // 10³ random samples over Q, with H-elements on the conic a² − c b² = 1.
    let q = FieldModel::Rational;
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    for sample in 0..1000 {
        let name = ["antidiag", "symplectic", "Lx:m=1,x=2", "transpose-inverse"][sample % 4];
        let theta = e(named(name).to_spec(&q, 2))?;
        let x = e(GroupElement::new(&q, random_rational_sl(&q, 2, &mut rng)))?;
        let InvolutionSpec::Inner { m, c, .. } = e(theta.as_inner_rank_one(&q))? else {
            unreachable!()
        };
        let s = Scalar::rat(rng.gen_range(-9..=9), rng.gen_range(1..=5));
        let s2c = q.mul(&c, &q.mul(&s, &s));
        let den = q.sub(&s2c, &q.one());
        let h = if q.is_zero(&den) {
            Vec::new()
        } else {
            let a = q.div(&q.add(&s2c, &q.one()), &den).unwrap();
            let b = q.div(&q.mul(&q.from_int(2), &s), &den).unwrap();
            let hm = Matrix::identity(&q, 2)
                .scale(&q, &a)
                .add(&q, &m.scale(&q, &b));
            vec![e(GroupElement::new(&q, hm))?]
        };
        tau_checks(&q, &theta, &x, &h)?;
        let x3 = e(GroupElement::new(&q, random_rational_sl(&q, 3, &mut rng)))?;
        tau_checks(&q, &e(named("blockJ:n=3,i=1").to_spec(&q, 3))?, &x3, &[])?;
    }
    // dim⁺ + dim⁻ = n − 1 and T⁺ ∩ T⁻ ⊆ 2-torsion, exhaustive over SL(2, F_5).
    let f5 = FieldModel::finite(5).unwrap();
    let units: Vec<Scalar> = f5
        .elements()
        .unwrap()
        .into_iter()
        .filter(|a| !f5.is_zero(a))
        .collect();
    let mut tori = 0;
    for name in ["antidiag", "symplectic", "transpose-inverse"] {
        let theta = e(named(name).to_spec(&f5, 2))?;
        for t in e(classify_exhaustive(&f5, &theta, DEFAULT_BUDGET))?
            .classes
            .iter()
            .flat_map(|c| c.members.iter())
        {
            let d = e(decompose(&f5, t, &theta))?;
            ensure!(
                d.signature.plus + d.signature.minus == 1,
                "signature {:?}",
                d.signature
            );
            let image = |basis: &[Vec<i64>]| -> Vec<Matrix> {
                let mut out = vec![Matrix::identity(&f5, 2)];
                for v in basis {
                    out.extend(units.iter().map(|a| t.element(&f5, v, a).unwrap()));
                }
                out
            };
            let (plus, minus) = (image(&d.plus_basis), image(&d.minus_basis));
            for x in plus.iter().filter(|x| minus.contains(x)) {
                ensure!(
                    x.mul(&f5, x) == Matrix::identity(&f5, 2),
                    "T⁺ ∩ T⁻ has an element of order > 2"
                );
            }
            tori += 1;
        }
    }
    for (n, name) in [
        (3, "blockJ:n=3,i=1"),
        (3, "transpose-inverse"),
        (4, "blockJ:n=4,i=2"),
        (4, "transpose-inverse"),
    ] {
        let d = e(decompose(
            &q,
            &Torus::diagonal(&q, n),
            &e(named(name).to_spec(&q, n))?,
        ))?;
        ensure!(
            d.signature.plus + d.signature.minus == n - 1,
            "{name}: {:?}",
            d.signature
        );
    }
    // Cayley output is θ-split on its generators over every model.
    for f in [
        "R",
        "Q",
        "Qp:5",
        "Fq:5",
        "Fq:9",
        "Cbar",
        "Q(sqrt:-1)",
        "R(sqrt:-1)",
        "Fq:3(sqrt:2)",
    ] {
        let k = field(f);
        let theta = e(named("antidiag").to_spec(&k, 2))?;
        let out = e(cayley_transform(
            &k,
            &e(antidiag_fixed_torus(&k))?,
            Root::new(0, 1).unwrap(),
            &theta,
        ))?;
        for g in out.generators(&k) {
            ensure!(
                theta.apply_matrix(&k, &g) == e(g.inverse(&k))?,
                "{f}: Cayley image not θ-split"
            );
        }
    }
    // Orbit counts are invariant under conjugating θ, over F_5.
    let group: Vec<GroupElement> = e(enumerate_group(&f5, 2, DEFAULT_BUDGET))?.collect();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..20 {
        let theta = e(named(["antidiag", "symplectic"][i % 2]).to_spec(&f5, 2))?;
        let count = |th: &InvolutionSpec| -> Result<u64, String> {
            let cl = e(classify_exhaustive(&f5, th, DEFAULT_BUDGET))?;
            cl.classes
                .iter()
                .map(|c| e(weyl_quotient(&f5, c, th)).map(|q| q.quotient))
                .sum()
        };
        let g = &group[rng.gen_range(0..group.len())];
        let conj = e(theta.conjugate(&f5, g))?;
        let (a, b) = (count(&theta)?, count(&conj)?);
        let c = e(enumerate_double_cosets(&f5, &conj, DEFAULT_BUDGET))?.count() as u64;
        ensure!(a == b && b == c, "conjugator {i}: {a} vs {b} vs {c}");
    }
    Ok(format!("{exhaustive} exhaustive + 1000 random τ checks, {tori} tori over F_5, Cayley on 9 models, 20 conjugators"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("SL(2,R) antidiag orbit count", criterion_1),
        ("SL(2,R) symplectic single orbit", criterion_2),
        ("SL(2,Q_5) classes, poset and diagram", criterion_3),
        ("oracle equivalence over F_q", criterion_4),
        ("surjectivity criteria agree", criterion_5),
        ("rank ledger", criterion_6),
        ("complexification reports", criterion_7),
        ("property suites", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {}: PASS  {name} ({secs:.2}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
