//! Orbit counts for `P_k∖G_k/H_k`: the Weyl-quotient formula, the
//! brute-force double-coset oracle, and the `𝒱_k` characterization.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::group::{enumerate_group, fixed_group, sl_order, NamedInvolution};
use crate::tori::{classify_torus_classes, is_theta_stable, Classification, Torus, TorusClass};
use crate::weyl::{weyl_quotient, WeylQuotient};
use crate::{Count, Error, FieldModel, GroupElement, InvolutionSpec, Matrix, Result};

/// Orbit count by the Weyl-quotient formula.
#[derive(Clone, Debug)]
pub struct OrbitCount {
    pub total: Count,
    pub per_class: Vec<(TorusClass, WeylQuotient)>,
    pub classification: Classification,
}

impl OrbitCount {
    /// A single orbit means `G_k = P_k·H_k`.
    pub fn is_iwasawa(&self) -> bool {
        self.total == Count::Finite(1)
    }
}

pub fn orbit_count(
    k: &FieldModel,
    n: usize,
    theta: &NamedInvolution,
    budget: u64,
) -> Result<OrbitCount> {
    let n = theta.resolve_n(Some(n))?;
    let spec = theta.to_spec(k, n)?;
    let classification = classify_torus_classes(k, n, theta, budget)?;
    let mut per_class = Vec::new();
    let mut total = Count::Finite(0);
    for class in &classification.classes {
        let q = weyl_quotient(k, class, &spec)?;
        total = total + Count::Finite(q.quotient);
        per_class.push((class.clone(), q));
    }
    if classification.open_family.is_some() {
        total = Count::Infinite;
    }
    Ok(OrbitCount {
        total,
        per_class,
        classification,
    })
}

/// Partition of `SL(n, 𝔽_q)` into `B_k g H_k` double cosets.
#[derive(Clone, Debug)]
pub struct DoubleCosetTable {
    pub q: u64,
    pub n: usize,
    /// Lexicographically least element of each coset, with the coset size.
    pub cosets: Vec<(GroupElement, u64)>,
    pub group_order: u64,
}

impl DoubleCosetTable {
    pub fn count(&self) -> usize {
        self.cosets.len()
    }
}

/// Generators of the upper-triangular Borel subgroup: simple coroots at a
/// generator of `k*`, and elementary matrices `E_{i,i+1}(b)` for an additive
/// basis `b` of `k` over its prime field.
pub fn borel_generators(k: &FieldModel, n: usize) -> Vec<Matrix> {
    let mut gens = Torus::diagonal(k, n).generators(k);
    let basis = k.additive_basis().unwrap_or_else(|| vec![k.one()]);
    for i in 0..n - 1 {
        for b in &basis {
            let mut e = Matrix::identity(k, n);
            e.set(i, i + 1, b.clone());
            gens.push(e);
        }
    }
    gens
}

/// A small generating set of a finite group given by its elements, chosen
/// greedily in element order.
pub fn generating_set(k: &FieldModel, elements: &[GroupElement]) -> Vec<Matrix> {
    let Some(first) = elements.first() else {
        return Vec::new();
    };
    let n = first.n();
    let mut gens: Vec<Matrix> = Vec::new();
    let mut closure: BTreeMap<Vec<u32>, ()> = BTreeMap::new();
    closure.insert(Matrix::identity(k, n).finite_key(k).expect("finite"), ());
    for g in elements {
        let key = g.matrix().finite_key(k).expect("finite");
        if closure.contains_key(&key) {
            continue;
        }
        gens.push(g.matrix().clone());
        // Recompute the generated subgroup.
        let mut queue: VecDeque<Matrix> = VecDeque::new();
        let id = Matrix::identity(k, n);
        closure.clear();
        closure.insert(id.finite_key(k).unwrap(), ());
        queue.push_back(id);
        while let Some(x) = queue.pop_front() {
            for s in &gens {
                let y = x.mul(k, s);
                let ky = y.finite_key(k).unwrap();
                if closure.insert(ky, ()).is_none() {
                    queue.push_back(y);
                }
            }
        }
        if closure.len() == elements.len() {
            break;
        }
    }
    gens
}

fn encode(key: &[u32], q: u64) -> u64 {
    key.iter().fold(0u64, |acc, &d| acc * q + d as u64)
}

/// Orbits of `left × right` acting by `x ↦ l·x·r` on the elements of
/// `domain` (given in a fixed order). Returns, per orbit, the first element
/// met in domain order and the orbit size.
fn orbits_under(
    k: &FieldModel,
    domain: &[GroupElement],
    left: &[Matrix],
    right: &[Matrix],
) -> Result<Vec<(GroupElement, u64)>> {
    let q = k.order().expect("finite field");
    let index: BTreeMap<u64, usize> = domain
        .iter()
        .enumerate()
        .map(|(i, g)| (encode(&g.matrix().finite_key(k).unwrap(), q), i))
        .collect();
    let mut seen = vec![false; domain.len()];
    let mut out = Vec::new();
    for start in 0..domain.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut size = 1u64;
        let mut queue = VecDeque::from([domain[start].matrix().clone()]);
        while let Some(x) = queue.pop_front() {
            let moves = left
                .iter()
                .map(|l| l.mul(k, &x))
                .chain(right.iter().map(|r| x.mul(k, r)));
            for y in moves {
                let code = encode(&y.finite_key(k).unwrap(), q);
                let j = *index
                    .get(&code)
                    .ok_or_else(|| Error::precondition("action leaves the domain"))?;
                if !seen[j] {
                    seen[j] = true;
                    size += 1;
                    queue.push_back(y);
                }
            }
        }
        out.push((domain[start].clone(), size));
    }
    Ok(out)
}

fn check_key_width(n: usize, q: u64) -> Result<()> {
    if q.checked_pow((n * n) as u32).is_none() {
        return Err(Error::unsupported(format!(
            "SL({n}, {q}) is too large to index"
        )));
    }
    Ok(())
}

/// The `(B_k, H_k)` double cosets of `SL(n, 𝔽_q)`.
pub fn enumerate_double_cosets(
    k: &FieldModel,
    theta: &InvolutionSpec,
    budget: u64,
) -> Result<DoubleCosetTable> {
    let n = theta.n();
    let q = k
        .order()
        .ok_or_else(|| Error::unsupported("double cosets need a finite field"))?;
    check_key_width(n, q)?;
    let group: Vec<GroupElement> = enumerate_group(k, n, budget)?.collect();
    let h: Vec<GroupElement> = group
        .iter()
        .filter(|g| theta.is_fixed(k, g))
        .cloned()
        .collect();
    let h_gens = generating_set(k, &h);
    let cosets = orbits_under(k, &group, &borel_generators(k, n), &h_gens)?;
    Ok(DoubleCosetTable {
        q,
        n,
        cosets,
        group_order: sl_order(n, q) as u64,
    })
}

/// `τ(x)` normalizes `A`.
pub fn vk_membership(
    k: &FieldModel,
    x: &GroupElement,
    a: &Torus,
    theta: &InvolutionSpec,
) -> Result<bool> {
    let t = theta.tau(k, x)?;
    let g = a.conjugator();
    Ok(g.inverse(k)?
        .mul(k, t.matrix())
        .mul(k, g)
        .monomial(k)
        .is_some())
}

/// Orbits of `Z_{G_k}(A) × H_k` on `𝒱_k` for `A` the diagonal torus.
pub fn vk_orbits(
    k: &FieldModel,
    theta: &InvolutionSpec,
    budget: u64,
) -> Result<Vec<(GroupElement, u64)>> {
    let n = theta.n();
    let q = k
        .order()
        .ok_or_else(|| Error::unsupported("V_k orbits need a finite field"))?;
    check_key_width(n, q)?;
    let a = Torus::diagonal(k, n);
    if !is_theta_stable(k, &a, theta) {
        return Err(Error::precondition(
            "the diagonal torus is not θ-stable for this involution",
        ));
    }
    let mut vk = Vec::new();
    for x in enumerate_group(k, n, budget)? {
        if vk_membership(k, &x, &a, theta)? {
            vk.push(x);
        }
    }
    let h = fixed_group(k, theta, budget)?;
    let h_gens = generating_set(k, &h);
    orbits_under(k, &vk, &a.generators(k), &h_gens)
}
