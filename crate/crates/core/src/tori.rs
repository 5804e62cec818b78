//! θ-stable maximal k-split tori of `SL(n)`.
//!
//! A maximal k-split torus is `gDg⁻¹` for `D` the diagonal torus, and is
//! determined by its frame: the set of lines spanned by the columns of `g`.
//! θ-stability and the `T⁺T⁻` signature are read off the relative matrix
//! `m'` (`g⁻¹Mg` for `Int(M)`, `(gᵀsg)⁻¹` for the outer form), which is
//! monomial exactly when the torus is stable.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::group::{fixed_group, NamedInvolution};
use crate::linalg;
use crate::matrix::normalize_line;
use crate::{Count, Error, FieldModel, InvolutionSpec, Matrix, Result, Scalar};

/// `gDg⁻¹` for a determinant-one conjugator `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Torus {
    conjugator: Matrix,
}

impl Torus {
    pub fn diagonal(k: &FieldModel, n: usize) -> Torus {
        Torus {
            conjugator: Matrix::identity(k, n),
        }
    }

    /// The torus diagonal in the basis given by the columns of `g`. The
    /// first column is rescaled so that the conjugator has determinant 1.
    pub fn from_frame(k: &FieldModel, g: &Matrix) -> Result<Torus> {
        let det = g.det(k);
        let det_inv = k.inv(&det).map_err(|_| Error::Singular)?;
        let mut conjugator = g.clone();
        for i in 0..g.n() {
            conjugator.set(i, 0, k.mul(g.get(i, 0), &det_inv));
        }
        Ok(Torus { conjugator })
    }

    pub fn from_columns(k: &FieldModel, cols: &[Vec<Scalar>]) -> Result<Torus> {
        Torus::from_frame(k, &Matrix::from_columns(cols)?)
    }

    pub fn n(&self) -> usize {
        self.conjugator.n()
    }

    pub fn conjugator(&self) -> &Matrix {
        &self.conjugator
    }

    /// Sorted normalized frame lines; equal keys mean equal tori.
    pub fn key(&self, k: &FieldModel) -> Vec<Vec<Scalar>> {
        let mut lines: Vec<Vec<Scalar>> = (0..self.n())
            .map(|j| normalize_line(k, &self.conjugator.column(j)).expect("nonzero column"))
            .collect();
        lines.sort();
        lines
    }

    pub fn same_as(&self, k: &FieldModel, other: &Torus) -> bool {
        self.key(k) == other.key(k)
    }

    /// `hTh⁻¹`.
    pub fn conjugate_by(&self, k: &FieldModel, h: &Matrix) -> Torus {
        Torus::from_frame(k, &h.mul(k, &self.conjugator)).expect("invertible")
    }

    /// The element `g·diag(a^{v_1}, …, a^{v_n})·g⁻¹` for a cocharacter `v`.
    pub fn element(&self, k: &FieldModel, v: &[i64], a: &Scalar) -> Result<Matrix> {
        let diag: Vec<Scalar> = v.iter().map(|&e| k.powi(a, e)).collect::<Result<_>>()?;
        let g = &self.conjugator;
        Ok(g.mul(k, &Matrix::diagonal(k, &diag)).mul(k, &g.inverse(k)?))
    }

    /// Images of the simple coroots `e_i − e_{i+1}` at a generating scalar.
    pub fn generators(&self, k: &FieldModel) -> Vec<Matrix> {
        let n = self.n();
        let a = generating_scalar(k);
        (0..n - 1)
            .map(|i| {
                let mut v = vec![0; n];
                v[i] = 1;
                v[i + 1] = -1;
                self.element(k, &v, &a).expect("nonzero scalar")
            })
            .collect()
    }

    /// Whether `x` lies in the torus (is diagonal in its frame).
    pub fn contains(&self, k: &FieldModel, x: &Matrix) -> bool {
        let g = &self.conjugator;
        let g_inv = g.inverse(k).expect("invertible");
        g_inv.mul(k, x).mul(k, g).is_diagonal(k)
    }
}

/// A scalar generating `k*` for finite fields, and of infinite order otherwise.
pub fn generating_scalar(k: &FieldModel) -> Scalar {
    k.primitive_element().unwrap_or_else(|| k.from_int(2))
}

/// `(dim T⁺, dim T⁻)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    pub plus: usize,
    pub minus: usize,
}

/// The θ-action on a stable torus and its eigenlattices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub signature: Signature,
    /// `σ` with `m' e_j ∝ e_{σ(j)}`.
    pub perm: Vec<usize>,
    /// `+1` for inner, `−1` for outer involutions.
    pub sign: i64,
    /// The relative matrix `m'`.
    pub relative: Matrix,
    /// Primitive integer bases of the `±1` eigenlattices inside the
    /// cocharacter lattice `{v ∈ ℤⁿ : Σv = 0}`.
    pub plus_basis: Vec<Vec<i64>>,
    pub minus_basis: Vec<Vec<i64>>,
}

impl Decomposition {
    /// θ on cocharacters: `w_{σ(j)} = ε v_j`.
    pub fn act(&self, v: &[i64]) -> Vec<i64> {
        let mut w = vec![0; v.len()];
        for (j, &x) in v.iter().enumerate() {
            w[self.perm[j]] = self.sign * x;
        }
        w
    }
}

/// `g⁻¹Mg` for inner θ, `(gᵀsg)⁻¹` for outer θ.
pub fn relative_matrix(k: &FieldModel, t: &Torus, theta: &InvolutionSpec) -> Matrix {
    let g = t.conjugator();
    match theta {
        InvolutionSpec::Inner { m, .. } => g.inverse(k).expect("invertible").mul(k, m).mul(k, g),
        InvolutionSpec::Outer { s, .. } => g
            .transpose()
            .mul(k, s)
            .mul(k, g)
            .inverse(k)
            .expect("invertible"),
    }
}

pub fn is_theta_stable(k: &FieldModel, t: &Torus, theta: &InvolutionSpec) -> bool {
    t.n() == theta.n() && relative_matrix(k, t, theta).monomial(k).is_some()
}

pub fn decompose(k: &FieldModel, t: &Torus, theta: &InvolutionSpec) -> Result<Decomposition> {
    if t.n() != theta.n() {
        return Err(Error::DimensionMismatch {
            expected: theta.n(),
            found: t.n(),
        });
    }
    let relative = relative_matrix(k, t, theta);
    let (perm, _) = relative.monomial(k).ok_or(Error::NotThetaStable)?;
    let n = t.n();
    let sign = theta.lattice_sign();
    let eigenlattice = |lambda: i64| {
        let mut rows: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let a = if perm[j] == i { sign } else { 0 };
                        a - if i == j { lambda } else { 0 }
                    })
                    .collect()
            })
            .collect();
        rows.push(vec![1; n]);
        linalg::nullspace(&rows, n)
    };
    let plus_basis = eigenlattice(1);
    let minus_basis = eigenlattice(-1);
    let signature = Signature {
        plus: plus_basis.len(),
        minus: minus_basis.len(),
    };
    debug_assert_eq!(signature.plus + signature.minus, n - 1);
    Ok(Decomposition {
        signature,
        perm,
        sign,
        relative,
        plus_basis,
        minus_basis,
    })
}

/// θ inverts the whole torus.
pub fn is_theta_k_split(k: &FieldModel, t: &Torus, theta: &InvolutionSpec) -> Result<bool> {
    Ok(decompose(k, t, theta)?.signature.minus == t.n() - 1)
}

/// The coordinates in `to`'s frame of the cocharacter `v` of `from`, if the
/// cocharacter lands in `to`.
///
/// `v` lands in `to` iff each column of `to`'s conjugator lies in a single
/// `v`-weight space of `from`'s frame; that weight is the new coordinate.
pub fn transport_cocharacter(
    k: &FieldModel,
    from: &Torus,
    v: &[i64],
    to: &Torus,
) -> Option<Vec<i64>> {
    let change = from.conjugator().inverse(k).ok()?.mul(k, to.conjugator());
    (0..to.n())
        .map(|l| {
            let mut weights = (0..from.n())
                .filter(|&i| !k.is_zero(change.get(i, l)))
                .map(|i| v[i]);
            let w = weights.next()?;
            weights.all(|x| x == w).then_some(w)
        })
        .collect()
}

fn sublattice_contained(
    k: &FieldModel,
    from: &Torus,
    basis: &[Vec<i64>],
    to: &Torus,
    target: &[Vec<i64>],
) -> bool {
    basis
        .iter()
        .all(|v| match transport_cocharacter(k, from, v, to) {
            Some(w) => linalg::in_span(target, &w),
            None => false,
        })
}

/// `A₁⁻ ⊂ A₂⁻`.
pub fn minus_contained(
    k: &FieldModel,
    a1: &Torus,
    a2: &Torus,
    theta: &InvolutionSpec,
) -> Result<bool> {
    let d1 = decompose(k, a1, theta)?;
    let d2 = decompose(k, a2, theta)?;
    Ok(sublattice_contained(
        k,
        a1,
        &d1.minus_basis,
        a2,
        &d2.minus_basis,
    ))
}

/// `A₁⁻ ⊂ A₂⁻` and `A₂⁺ ⊂ A₁⁺`.
pub fn is_standard_pair(
    k: &FieldModel,
    a1: &Torus,
    a2: &Torus,
    theta: &InvolutionSpec,
) -> Result<bool> {
    let d1 = decompose(k, a1, theta)?;
    let d2 = decompose(k, a2, theta)?;
    Ok(
        sublattice_contained(k, a1, &d1.minus_basis, a2, &d2.minus_basis)
            && sublattice_contained(k, a2, &d2.plus_basis, a1, &d1.plus_basis),
    )
}

/// An `H_k`-conjugacy class of θ-stable maximal k-split tori.
#[derive(Clone, Debug)]
pub struct TorusClass {
    pub signature: Signature,
    /// Square-class datum separating classes of equal signature.
    pub invariant: String,
    pub representative: Option<Torus>,
    /// Number of classes sharing this signature.
    pub multiplicity: Count,
    /// All tori in the class (exhaustive classification only).
    pub members: Vec<Torus>,
    /// Weyl-quotient order recorded by the rank-one table.
    pub quotient_hint: Option<u64>,
}

impl PartialEq for TorusClass {
    fn eq(&self, other: &Self) -> bool {
        self.signature == other.signature && self.invariant == other.invariant
    }
}

/// The listed classes, plus an optional infinite family of further classes
/// of one signature (listed classes then show a truncation of it).
#[derive(Clone, Debug)]
pub struct Classification {
    pub classes: Vec<TorusClass>,
    pub open_family: Option<Signature>,
}

impl Classification {
    pub fn count(&self) -> Count {
        if self.open_family.is_some() {
            Count::Infinite
        } else {
            Count::Finite(self.classes.len() as u64)
        }
    }
}

/// Listed split-type classes when the family is infinite.
pub const TRUNCATION: usize = 4;

/// All `H_k`-classes of θ-stable maximal k-split tori.
///
/// Finite fields are classified exhaustively for any `n`; other fields use
/// the rank-one table and need `n = 2`.
pub fn classify_torus_classes(
    k: &FieldModel,
    n: usize,
    theta: &NamedInvolution,
    budget: u64,
) -> Result<Classification> {
    let n = theta.resolve_n(Some(n))?;
    if k.order().is_some() {
        let spec = theta.to_spec(k, n)?;
        return classify_exhaustive(k, &spec, budget);
    }
    if n != 2 {
        return Err(Error::unsupported(format!(
            "torus classes of SL({n}) over {k} are not tabulated; use a finite field"
        )));
    }
    classify_rank_one(k, &theta.to_spec(k, 2)?)
}

/// Normalized representatives of the projective points of `kⁿ`.
fn projective_points(k: &FieldModel, n: usize) -> Vec<Vec<Scalar>> {
    let q = k.order().expect("finite field");
    let elems = k.elements().expect("finite field");
    let mut out = Vec::new();
    for code in 1..q.pow(n as u32) {
        let mut c = code;
        let mut v = vec![k.zero(); n];
        for x in v.iter_mut().rev() {
            *x = elems[(c % q) as usize].clone();
            c /= q;
        }
        if v.iter()
            .find(|x| !k.is_zero(x))
            .is_some_and(|x| k.is_one(x))
        {
            out.push(v);
        }
    }
    out
}

fn binomial(n: u64, r: u64) -> u128 {
    (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Exhaustive classification over a finite field.
pub fn classify_exhaustive(
    k: &FieldModel,
    theta: &InvolutionSpec,
    budget: u64,
) -> Result<Classification> {
    let n = theta.n();
    let points = projective_points(k, n);
    let frames = binomial(points.len() as u64, n as u64);
    if frames > budget as u128 {
        return Err(Error::BudgetExceeded {
            needed: frames,
            budget,
        });
    }
    let mut stable: Vec<Torus> = Vec::new();
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        let cols: Vec<Vec<Scalar>> = idx.iter().map(|&i| points[i].clone()).collect();
        let g = Matrix::from_columns(&cols)?;
        if !k.is_zero(&g.det(k)) {
            let t = Torus::from_frame(k, &g)?;
            if is_theta_stable(k, &t, theta) {
                stable.push(t);
            }
        }
        // Next n-combination in lexicographic order.
        let Some(pos) = (0..n).rev().find(|&i| idx[i] < points.len() - n + i) else {
            break;
        };
        idx[pos] += 1;
        for i in pos + 1..n {
            idx[i] = idx[i - 1] + 1;
        }
    }
    let h = fixed_group(k, theta, budget)?;
    let index: BTreeMap<Vec<Vec<Scalar>>, usize> = stable
        .iter()
        .enumerate()
        .map(|(i, t)| (t.key(k), i))
        .collect();
    let mut class_of = vec![usize::MAX; stable.len()];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for start in 0..stable.len() {
        if class_of[start] != usize::MAX {
            continue;
        }
        let id = groups.len();
        let mut members = Vec::new();
        for x in &h {
            let image = stable[start].conjugate_by(k, x.matrix());
            let j = index[&image.key(k)];
            if class_of[j] == usize::MAX {
                class_of[j] = id;
                members.push(j);
            }
        }
        members.sort_unstable();
        groups.push(members);
    }
    let mut classes: Vec<(Signature, Vec<Vec<Scalar>>, Vec<usize>)> = groups
        .into_iter()
        .map(|members| {
            let sig = decompose(k, &stable[members[0]], theta)
                .expect("stable")
                .signature;
            let key = members
                .iter()
                .map(|&j| stable[j].key(k))
                .min()
                .expect("nonempty");
            (sig, key, members)
        })
        .collect();
    classes.sort_by(|a, b| b.0.minus.cmp(&a.0.minus).then_with(|| a.1.cmp(&b.1)));
    let mut out: Vec<TorusClass> = classes
        .into_iter()
        .enumerate()
        .map(|(i, (signature, key, members))| {
            let members: Vec<Torus> = members.iter().map(|&j| stable[j].clone()).collect();
            let representative = members.iter().find(|t| t.key(k) == key).cloned();
            TorusClass {
                signature,
                invariant: format!("c{}", i + 1),
                representative,
                multiplicity: Count::Finite(0),
                members,
                quotient_hint: None,
            }
        })
        .collect();
    let sigs: Vec<Signature> = out.iter().map(|c| c.signature).collect();
    for c in out.iter_mut() {
        c.multiplicity = Count::Finite(sigs.iter().filter(|&&s| s == c.signature).count() as u64);
    }
    Ok(Classification {
        classes: out,
        open_family: None,
    })
}

/// Eigenvectors of a non-scalar `2×2` matrix `M` with `M² = r²I`, for the
/// eigenvalues `r` and `−r`.
fn eigenvectors(k: &FieldModel, m: &Matrix, r: &Scalar) -> Result<(Vec<Scalar>, Vec<Scalar>)> {
    let shifted = |s: &Scalar| {
        let mut a = m.clone();
        for i in 0..2 {
            a.set(i, i, k.add(m.get(i, i), s));
        }
        a
    };
    let pick = |a: Matrix| {
        (0..2)
            .map(|j| a.column(j))
            .find(|c| c.iter().any(|x| !k.is_zero(x)))
            .ok_or_else(|| Error::precondition("scalar involution matrix"))
    };
    // Columns of M + rI lie in the r-eigenspace.
    Ok((pick(shifted(r))?, pick(shifted(&k.neg(r)))?))
}

/// Candidate scalars for split-class labels when `k*/(±k*²)` is infinite.
fn global_candidates(k: &FieldModel) -> Vec<Scalar> {
    let mut out: Vec<Scalar> = [1, 2, 3, 5, 7, 11, 13]
        .iter()
        .map(|&v| k.from_int(v))
        .collect();
    if let Some(r) = k.sqrt_generator() {
        out.insert(1, r.clone());
        out.push(k.add(&k.one(), &r));
        out.push(k.add(&k.from_int(2), &r));
    }
    out
}

/// Picks up to `limit` scalars pairwise distinct modulo `±(k*)²`.
fn distinct_mod_plus_minus_squares(
    k: &FieldModel,
    candidates: Vec<Scalar>,
    limit: usize,
) -> Result<Vec<Scalar>> {
    let mut chosen: Vec<Scalar> = Vec::new();
    for c in candidates {
        if chosen.len() == limit {
            break;
        }
        let mut fresh = true;
        for s in &chosen {
            let r = k.div(&c, s)?;
            if k.is_square(&r)? || k.is_square(&k.neg(&r))? {
                fresh = false;
                break;
            }
        }
        if fresh {
            chosen.push(c);
        }
    }
    Ok(chosen)
}

fn class_count_usize(c: Count) -> usize {
    c.finite().map_or(TRUNCATION, |v| v as usize)
}

/// The rank-one table: classes of `SL(2)` for `Int(M)`, `M² = cI`, keyed by
/// the square classes of `c` and `−1`.
///
/// * `c` a square: one fixed-type class with Weyl quotient 2, and
///   `|k*/(±k*²)|` split-type classes, with quotient 1 when `−1` is a square
///   and 2 otherwise.
/// * `c` a nonsquare: no fixed-type class; the split-type classes are
///   indexed by `S/(±S²)` for `S` the norm-one group of `k(√c)`, with
///   quotient 1 exactly when `−c` is a square.
pub fn classify_rank_one(k: &FieldModel, theta: &InvolutionSpec) -> Result<Classification> {
    if theta.n() != 2 {
        return Err(Error::precondition("the rank-one table needs n = 2"));
    }
    let theta = theta.as_inner_rank_one(k)?;
    let InvolutionSpec::Inner { m, c, .. } = &theta else {
        unreachable!()
    };
    let local = k.padic_prime().is_some();
    let minus_one_square = k.minus_one_is_square()?;
    if local && !minus_one_square {
        return Err(Error::unsupported(format!(
            "the SL(2) table over {k} is pinned only when -1 is a square (p = 1 mod 4)"
        )));
    }
    let c_square = k.is_square(c)?;
    let split_sig = Signature { plus: 0, minus: 1 };
    let fixed_sig = Signature { plus: 1, minus: 0 };
    let d = Torus::diagonal(k, 2);
    let d_split = is_theta_k_split(k, &d, &theta).unwrap_or(false);

    let mut classes = Vec::new();
    let (split_count, split_quotient, split_reps): (Count, u64, Vec<(String, Option<Torus>)>) =
        if c_square {
            let total = k.square_class_group_order();
            let split_count = match total {
                Count::Finite(v) if !minus_one_square => Count::Finite(v / 2),
                other => other,
            };
            let quotient = if minus_one_square { 1 } else { 2 };
            let wanted = class_count_usize(split_count);
            let labels: Option<Vec<Scalar>> = match k.square_class_reps() {
                Some(reps) => Some(distinct_mod_plus_minus_squares(k, reps, wanted)?),
                None if total.is_infinite() => Some(distinct_mod_plus_minus_squares(
                    k,
                    global_candidates(k),
                    wanted,
                )?),
                None => None,
            };
            let root = k.sqrt(c);
            // Transport from the antidiagonal model: P maps (1,1), (1,−1) to the
            // eigenvectors of M.
            let transport = match &root {
                Some(r) => {
                    let (vp, vm) = eigenvectors(k, m, r)?;
                    let v = Matrix::from_columns(&[vp, vm])?;
                    let base = Matrix::from_ints(k, 2, &[1, 1, 1, -1])?;
                    Some(v.mul(k, &base.inverse(k)?))
                }
                None => None,
            };
            let fixed_rep = transport.as_ref().map(|p| {
                Torus::from_frame(
                    k,
                    &p.mul(k, &Matrix::from_ints(k, 2, &[1, 1, 1, -1]).unwrap()),
                )
                .unwrap()
            });
            classes.push(TorusClass {
                signature: fixed_sig,
                invariant: "1".to_string(),
                representative: fixed_rep,
                multiplicity: Count::Finite(1),
                members: Vec::new(),
                quotient_hint: Some(2),
            });
            let reps = match labels {
                Some(labels) if labels.len() == wanted => labels
                    .into_iter()
                    .map(|s| {
                        let name = match k.square_class(&s) {
                            Ok(label) if k.square_class_reps().is_some() => label.name,
                            _ => k.format(&s),
                        };
                        let torus = transport
                            .as_ref()
                            .map(|p| antidiag_split_rep(k, &s, p))
                            .transpose()?;
                        Ok((name, torus))
                    })
                    .collect::<Result<Vec<_>>>()?,
                _ => (1..=wanted).map(|i| (format!("c{i}"), None)).collect(),
            };
            (split_count, quotient, reps)
        } else {
            let minus_c_square = k.is_square(&k.neg(c))?;
            let quotient = if minus_c_square { 1 } else { 2 };
            let count = if k == &FieldModel::Real {
                Count::Finite(1)
            } else if k.order().is_some() {
                Count::Finite(if minus_one_square { 1 } else { 2 })
            } else if local {
                return Err(Error::unsupported(format!(
                    "the SL(2) table over {k} does not cover nonsquare c"
                )));
            } else {
                Count::Infinite
            };
            // {e₁, Me₁} is always θ-split when c is a nonsquare.
            let e1 = vec![k.one(), k.zero()];
            let first = Torus::from_columns(k, &[e1.clone(), m.apply(k, &e1)])?;
            let wanted = class_count_usize(count);
            let reps = (1..=wanted)
                .map(|i| (format!("c{i}"), (i == 1).then(|| first.clone())))
                .collect();
            (count, quotient, reps)
        };
    let mut split_reps = split_reps;
    if split_reps.len() == 1 && split_reps[0].1.is_none() && d_split {
        split_reps[0].1 = Some(d);
    }
    for (name, rep) in split_reps.into_iter().rev() {
        classes.insert(
            0,
            TorusClass {
                signature: split_sig,
                invariant: name,
                representative: rep,
                multiplicity: split_count,
                members: Vec::new(),
                quotient_hint: Some(split_quotient),
            },
        );
    }
    Ok(Classification {
        classes,
        open_family: split_count.is_infinite().then_some(split_sig),
    })
}

/// The split torus of `Int([[0,1],[1,0]])` whose class is `s·(±k*²)`,
/// transported by `p`.
///
/// With `x = (s²+1)/2`, `y = (s²−1)/2`, the matrix `[[x,y],[−y,−x]]` is
/// θ-inverted with eigenvalues `±s`; its eigenlines are the frame.
fn antidiag_split_rep(k: &FieldModel, s: &Scalar, p: &Matrix) -> Result<Torus> {
    let two = k.from_int(2);
    let s2 = k.mul(s, s);
    let x = k.div(&k.add(&s2, &k.one()), &two)?;
    let y = k.div(&k.sub(&s2, &k.one()), &two)?;
    let frame = if k.is_zero(&y) {
        Matrix::identity(k, 2)
    } else {
        Matrix::from_columns(&[vec![y.clone(), k.sub(s, &x)], vec![y, k.sub(&k.neg(s), &x)]])?
    };
    Torus::from_frame(k, &p.mul(k, &frame))
}

/// `(rank H, k-rank H)`.
pub fn rank_krank(n: usize, theta: &NamedInvolution, k: &FieldModel) -> Result<(usize, usize)> {
    let n = theta.resolve_n(Some(n))?;
    match theta.inner_matrix(k)? {
        Some(m) => {
            let spec = InvolutionSpec::inner(k, m)?;
            let InvolutionSpec::Inner { c, .. } = &spec else {
                unreachable!()
            };
            if k.is_square(c)? {
                Ok((n - 1, n - 1))
            } else if n % 2 == 0 {
                Ok((n - 1, n / 2 - 1))
            } else {
                Err(Error::precondition(
                    "M² = cI with c a nonsquare forces n even",
                ))
            }
        }
        None => {
            let rank = n / 2;
            let krank = if *k == FieldModel::Real {
                0
            } else if *k == FieldModel::AlgClosed || k.is_real_closed_extension() {
                rank
            } else if k.order().is_some() {
                witt_index_sum_of_squares(k, n)?
            } else {
                return Err(Error::unsupported(format!(
                    "Witt index of the sum of {n} squares over {k} is not computed"
                )));
            };
            Ok((rank, krank))
        }
    }
}

/// Witt index of `x₁² + ⋯ + xₙ²` over a finite field of odd order.
fn witt_index_sum_of_squares(k: &FieldModel, n: usize) -> Result<usize> {
    if n % 2 == 1 {
        return Ok((n - 1) / 2);
    }
    let disc = k.pow(&k.neg(&k.one()), (n / 2) as u64);
    Ok(if k.is_square(&disc)? {
        n / 2
    } else {
        n / 2 - 1
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(k: &FieldModel, s: &str) -> InvolutionSpec {
        s.parse::<NamedInvolution>().unwrap().to_spec(k, 2).unwrap()
    }

    #[test]
    fn diagonal_signatures() {
        let k = FieldModel::Rational;
        let d = Torus::diagonal(&k, 2);
        let anti = spec(&k, "antidiag");
        assert_eq!(
            decompose(&k, &d, &anti).unwrap().signature,
            Signature { plus: 0, minus: 1 }
        );
        let diag =
            InvolutionSpec::inner(&k, Matrix::from_ints(&k, 2, &[1, 0, 0, -1]).unwrap()).unwrap();
        assert_eq!(
            decompose(&k, &d, &diag).unwrap().signature,
            Signature { plus: 1, minus: 0 }
        );
        let h = Torus::from_columns(
            &k,
            &[
                vec![Scalar::int(1), Scalar::int(1)],
                vec![Scalar::int(1), Scalar::int(-1)],
            ],
        )
        .unwrap();
        assert_eq!(
            decompose(&k, &h, &anti).unwrap().signature,
            Signature { plus: 1, minus: 0 }
        );
        assert!(!is_theta_k_split(&k, &h, &anti).unwrap());
        let ti = InvolutionSpec::transpose_inverse(&k, 3);
        assert!(is_theta_k_split(&k, &Torus::diagonal(&k, 3), &ti).unwrap());
    }

    #[test]
    fn unstable_torus_is_rejected() {
        let k = FieldModel::finite(5).unwrap();
        let anti = spec(&k, "antidiag");
        let t =
            Torus::from_columns(&k, &[vec![k.one(), k.zero()], vec![k.one(), k.one()]]).unwrap();
        assert!(!is_theta_stable(&k, &t, &anti));
        assert_eq!(decompose(&k, &t, &anti), Err(Error::NotThetaStable));
    }

    #[test]
    fn rank_one_table_counts() {
        let count = |f: &str, inv: &str| {
            let k: FieldModel = f.parse().unwrap();
            let c = classify_rank_one(&k, &spec(&k, inv)).unwrap();
            let split = c.classes.iter().filter(|c| c.signature.minus == 1).count();
            (split, c.classes.len() - split, c.count())
        };
        assert_eq!(count("R", "antidiag"), (1, 1, Count::Finite(2)));
        assert_eq!(count("R", "symplectic"), (1, 0, Count::Finite(1)));
        assert_eq!(count("Qp:5", "antidiag"), (4, 1, Count::Finite(5)));
        assert_eq!(count("Cbar", "antidiag"), (1, 1, Count::Finite(2)));
        assert_eq!(count("Q", "antidiag"), (4, 1, Count::Infinite));
        let k: FieldModel = "Qp:7".parse().unwrap();
        assert!(matches!(
            classify_rank_one(&k, &spec(&k, "antidiag")),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn padic_labels_and_reps() {
        let k: FieldModel = "Qp:5".parse().unwrap();
        let anti = spec(&k, "antidiag");
        let c = classify_rank_one(&k, &anti).unwrap();
        let labels: Vec<&str> = c.classes.iter().map(|c| c.invariant.as_str()).collect();
        assert_eq!(labels, ["1", "u", "p", "up", "1"]);
        for class in &c.classes {
            let t = class.representative.as_ref().unwrap();
            assert_eq!(decompose(&k, t, &anti).unwrap().signature, class.signature);
        }
    }

    #[test]
    fn ranks() {
        let k = FieldModel::Real;
        assert_eq!(
            rank_krank(5, &NamedInvolution::BlockJ { n: 5, i: 2 }, &k).unwrap(),
            (4, 4)
        );
        let lx = NamedInvolution::Lx {
            m: 2,
            x: num_rational::BigRational::from_integer((-1).into()),
        };
        assert_eq!(rank_krank(4, &lx, &k).unwrap(), (3, 1));
        assert_eq!(
            rank_krank(4, &NamedInvolution::TransposeInverse, &k).unwrap(),
            (2, 0)
        );
        let f5 = FieldModel::finite(5).unwrap();
        assert_eq!(
            rank_krank(4, &NamedInvolution::TransposeInverse, &f5).unwrap(),
            (2, 2)
        );
        let f3 = FieldModel::finite(3).unwrap();
        assert_eq!(
            rank_krank(2, &NamedInvolution::TransposeInverse, &f3).unwrap(),
            (1, 0)
        );
        assert!(rank_krank(3, &NamedInvolution::TransposeInverse, &FieldModel::Rational).is_err());
    }
}
