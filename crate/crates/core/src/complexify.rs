//! I-posets, their orbit-diagram expansion, and the generalized
//! complexification map `φ : P_k∖G_k/H_k → P∖G/H`.

use alloc::format;
use alloc::vec::Vec;

use crate::orbits::{orbit_count, OrbitCount};
use crate::tori::{minus_contained, rank_krank, Signature, TorusClass};
use crate::weyl::{coset_index, Perm, WeylQuotient};
use crate::{Count, Error, FieldModel, InvolutionSpec, NamedInvolution, Result};

/// Classes ordered by `[A_i] ≤ [A_j]` iff `A_i⁻ ⊂ A_j⁻` up to `H_k`.
#[derive(Clone, Debug)]
pub struct IPoset {
    pub nodes: Vec<TorusClass>,
    /// The full relation, reflexive pairs included, sorted.
    pub order_pairs: Vec<(usize, usize)>,
    /// Signature of an infinite family of further classes not listed.
    pub open_family: Option<Signature>,
}

impl IPoset {
    pub fn le(&self, i: usize, j: usize) -> bool {
        self.order_pairs.binary_search(&(i, j)).is_ok()
    }

    /// Pairs `i < j` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.nodes.len();
        let mut out = Vec::new();
        for &(i, j) in &self.order_pairs {
            if i == j {
                continue;
            }
            if !(0..n).any(|m| m != i && m != j && self.le(i, m) && self.le(m, j)) {
                out.push((i, j));
            }
        }
        out
    }

    fn validate(&self) -> Result<()> {
        let n = self.nodes.len();
        for i in 0..n {
            if !self.le(i, i) {
                return Err(Error::precondition("I-poset relation is not reflexive"));
            }
        }
        for &(i, j) in &self.order_pairs {
            if i != j && self.le(j, i) {
                return Err(Error::precondition(format!(
                    "classes {} and {} have the same minus-part; the containment order is not antisymmetric",
                    self.nodes[i].invariant, self.nodes[j].invariant
                )));
            }
            if self.nodes[i].signature.minus > self.nodes[j].signature.minus {
                return Err(Error::precondition("I-poset order does not respect dim T⁻"));
            }
            for m in 0..n {
                if self.le(j, m) && !self.le(i, m) {
                    return Err(Error::precondition("I-poset relation is not transitive"));
                }
            }
        }
        Ok(())
    }
}

/// Over a finite field `[A_i] ≤ [A_j]` when some member of class `i` has its
/// minus-part inside that of the representative of `j`. Elsewhere classes
/// carry no member lists and the order is signature dominance.
pub fn build_iposet(
    k: &FieldModel,
    classes: &[TorusClass],
    open_family: Option<Signature>,
    theta: &InvolutionSpec,
) -> Result<IPoset> {
    let n = classes.len();
    let mut pairs = Vec::new();
    let exhaustive = classes
        .iter()
        .all(|c| !c.members.is_empty() && c.representative.is_some());
    for i in 0..n {
        for j in 0..n {
            let le = if i == j {
                true
            } else if exhaustive {
                let target = classes[j].representative.as_ref().expect("checked");
                let mut found = false;
                for t in &classes[i].members {
                    if minus_contained(k, t, target, theta)? {
                        found = true;
                        break;
                    }
                }
                found
            } else {
                classes[i].signature.minus < classes[j].signature.minus
            };
            if le {
                pairs.push((i, j));
            }
        }
    }
    let poset = IPoset {
        nodes: classes.to_vec(),
        order_pairs: pairs,
        open_family,
    };
    poset.validate()?;
    Ok(poset)
}

/// One orbit: class index and orbit index `0..quotient`.
pub type OrbitNode = (usize, usize);

/// The I-poset with every class replaced by its `W_{G_k}(A)/W_{H_k}(A)`
/// orbits; each cover becomes a complete bipartite edge set.
#[derive(Clone, Debug)]
pub struct OrbitDiagram {
    pub nodes: Vec<OrbitNode>,
    pub edges: Vec<(OrbitNode, OrbitNode)>,
    /// Signature of the unlisted infinite family, drawn as an ellipsis.
    pub ellipsis: Option<Signature>,
}

pub fn expand_to_orbit_diagram(poset: &IPoset, quotients: &[u64]) -> Result<OrbitDiagram> {
    if quotients.len() != poset.nodes.len() {
        return Err(Error::DimensionMismatch {
            expected: poset.nodes.len(),
            found: quotients.len(),
        });
    }
    let nodes: Vec<OrbitNode> = quotients
        .iter()
        .enumerate()
        .flat_map(|(c, &q)| (0..q as usize).map(move |o| (c, o)))
        .collect();
    let mut edges = Vec::new();
    for (lo, hi) in poset.covers() {
        for a in 0..quotients[hi] as usize {
            for b in 0..quotients[lo] as usize {
                edges.push(((hi, a), (lo, b)));
            }
        }
    }
    Ok(OrbitDiagram {
        nodes,
        edges,
        ellipsis: poset.open_family,
    })
}

/// One side of `φ`: orbits, poset and diagram over a field.
#[derive(Clone, Debug)]
pub struct Side {
    pub field: FieldModel,
    pub orbits: OrbitCount,
    pub poset: IPoset,
    pub diagram: OrbitDiagram,
}

impl Side {
    fn build(k: &FieldModel, n: usize, theta: &NamedInvolution, budget: u64) -> Result<Side> {
        let orbits = orbit_count(k, n, theta, budget)?;
        let spec = theta.to_spec(k, n)?;
        let classes: Vec<TorusClass> = orbits.per_class.iter().map(|(c, _)| c.clone()).collect();
        let poset = build_iposet(k, &classes, orbits.classification.open_family, &spec)?;
        let quotients: Vec<u64> = orbits.per_class.iter().map(|(_, q)| q.quotient).collect();
        let diagram = expand_to_orbit_diagram(&poset, &quotients)?;
        Ok(Side {
            field: k.clone(),
            orbits,
            poset,
            diagram,
        })
    }

    pub fn quotient(&self, class: usize) -> &WeylQuotient {
        &self.orbits.per_class[class].1
    }
}

/// `φ` at class and orbit level, with both surjectivity criteria.
#[derive(Clone, Debug)]
pub struct ComplexificationReport {
    pub n: usize,
    pub theta: NamedInvolution,
    /// `(rank H, k-rank H)`.
    pub rank: (usize, usize),
    /// Present when both class tables are available (rank one).
    pub domain: Option<Side>,
    pub codomain: Option<Side>,
    /// Codomain class of each domain class, matched by signature.
    pub class_map: Vec<usize>,
    /// `gW_{H_k} ↦ gW_H` for every listed domain orbit.
    pub orbit_map: Vec<(OrbitNode, OrbitNode)>,
    /// Fiber size over every codomain orbit.
    pub fibers: Vec<(OrbitNode, Count)>,
    /// Codomain orbits with empty fiber.
    pub cokernel: Option<Vec<OrbitNode>>,
    pub surjective_by_cokernel: Option<bool>,
    pub surjective_by_rank: bool,
    pub surjective: bool,
}

/// The algebraically closed model standing in for `k̄`.
pub fn closure_model() -> FieldModel {
    FieldModel::AlgClosed
}

/// Builds `φ` for `SL(n)` and checks that the cokernel test and the rank
/// test agree.
///
/// For `n = 2` both class tables are computed; otherwise, or when the
/// `k`-side table is not available, the verdict rests on ranks alone.
pub fn complexify(
    k: &FieldModel,
    n: usize,
    theta: &NamedInvolution,
    budget: u64,
) -> Result<ComplexificationReport> {
    let n = theta.resolve_n(Some(n))?;
    let rank = rank_krank(n, theta, k)?;
    let surjective_by_rank = rank.0 == rank.1;
    let mut report = ComplexificationReport {
        n,
        theta: theta.clone(),
        rank,
        domain: None,
        codomain: None,
        class_map: Vec::new(),
        orbit_map: Vec::new(),
        fibers: Vec::new(),
        cokernel: None,
        surjective_by_cokernel: None,
        surjective_by_rank,
        surjective: surjective_by_rank,
    };
    if n != 2 {
        return Ok(report);
    }
    let domain = match Side::build(k, n, theta, budget) {
        Ok(side) => side,
        Err(Error::Unsupported(_)) => return Ok(report),
        Err(e) => return Err(e),
    };
    let codomain = Side::build(&closure_model(), n, theta, budget)?;

    let cod_classes = &codomain.poset.nodes;
    let match_class = |sig: Signature| -> Result<usize> {
        let hits: Vec<usize> = (0..cod_classes.len())
            .filter(|&j| cod_classes[j].signature == sig)
            .collect();
        match hits.as_slice() {
            [j] => Ok(*j),
            [] => Err(Error::CriteriaDisagree(format!(
                "no codomain class of signature {sig:?}"
            ))),
            _ => Err(Error::unsupported(
                "codomain classes are not separated by signature",
            )),
        }
    };
    let mut class_map = Vec::new();
    let mut orbit_map = Vec::new();
    for (i, (class, q)) in domain.orbits.per_class.iter().enumerate() {
        let j = match_class(class.signature)?;
        class_map.push(j);
        let target = codomain.quotient(j);
        let wh: Vec<Perm> = target.wh.iter().map(|(p, _)| p.clone()).collect();
        for (o, rep) in q.coset_reps.iter().enumerate() {
            orbit_map.push(((i, o), (j, coset_index(rep, &wh, &target.coset_reps))));
        }
    }
    let open_target = domain.poset.open_family.map(match_class).transpose()?;
    let mut fibers = Vec::new();
    for &node in &codomain.diagram.nodes {
        let listed = orbit_map.iter().filter(|(_, t)| *t == node).count() as u64;
        let size = if open_target == Some(node.0) {
            Count::Infinite
        } else {
            Count::Finite(listed)
        };
        fibers.push((node, size));
    }
    let cokernel: Vec<OrbitNode> = fibers
        .iter()
        .filter(|(_, s)| *s == Count::Finite(0))
        .map(|(node, _)| *node)
        .collect();
    let by_cokernel = cokernel.is_empty();

    // The largest θ-fixed part of a domain torus is a maximal k-split torus of H.
    let max_plus = domain
        .poset
        .nodes
        .iter()
        .map(|c| c.signature.plus)
        .max()
        .unwrap_or(0);
    if max_plus != rank.1 {
        return Err(Error::CriteriaDisagree(format!(
            "largest dim T⁺ over {k} is {max_plus} but the k-rank of H is {}",
            rank.1
        )));
    }
    if by_cokernel != surjective_by_rank {
        return Err(Error::CriteriaDisagree(format!(
            "cokernel test says {by_cokernel}, rank test {:?} says {surjective_by_rank}",
            rank
        )));
    }
    report.domain = Some(domain);
    report.codomain = Some(codomain);
    report.class_map = class_map;
    report.orbit_map = orbit_map;
    report.fibers = fibers;
    report.cokernel = Some(cokernel);
    report.surjective_by_cokernel = Some(by_cokernel);
    Ok(report)
}

/// The domain I-poset and orbit diagram alone.
pub fn poset_and_diagram(
    k: &FieldModel,
    n: usize,
    theta: &NamedInvolution,
    budget: u64,
) -> Result<(IPoset, OrbitDiagram)> {
    let side = Side::build(k, theta.resolve_n(Some(n))?, theta, budget)?;
    Ok((side.poset, side.diagram))
}
