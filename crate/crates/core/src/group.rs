//! `SL(n)` over a field model, its involutions, `τ`, and finite enumeration.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;

use crate::{Error, FieldModel, Matrix, Result, Scalar};

/// A determinant-one matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(Matrix);

impl GroupElement {
    pub fn new(k: &FieldModel, m: Matrix) -> Result<GroupElement> {
        for x in m.entries() {
            k.check(x)?;
        }
        if !k.is_one(&m.det(k)) {
            return Err(Error::DeterminantNotOne);
        }
        Ok(GroupElement(m))
    }

    pub fn identity(k: &FieldModel, n: usize) -> GroupElement {
        GroupElement(Matrix::identity(k, n))
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn mul(&self, k: &FieldModel, other: &GroupElement) -> GroupElement {
        GroupElement(self.0.mul(k, &other.0))
    }

    pub fn inverse(&self, k: &FieldModel) -> GroupElement {
        GroupElement(self.0.inverse(k).expect("determinant one"))
    }
}

/// A k-involution of `SL(n)`.
///
/// `Inner` is `Int(M)` with `M² = cI`; `Outer` is `x ↦ s⁻¹(xᵀ)⁻¹s` with
/// `sᵀ = ±s`, the transpose-inverse involution being `s = I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InvolutionSpec {
    Inner { m: Matrix, m_inv: Matrix, c: Scalar },
    Outer { s: Matrix, s_inv: Matrix },
}

impl InvolutionSpec {
    pub fn inner(k: &FieldModel, m: Matrix) -> Result<InvolutionSpec> {
        let m_inv = m
            .inverse(k)
            .map_err(|_| Error::NotInvolution("M is singular".into()))?;
        let c = m.mul(k, &m).scalar_value(k).ok_or_else(|| {
            Error::NotInvolution(format!("M² is not scalar for M = {}", m.format(k)))
        })?;
        if m.scalar_value(k).is_some() {
            return Err(Error::NotInvolution(
                "scalar M gives the identity automorphism".into(),
            ));
        }
        Ok(InvolutionSpec::Inner { m, m_inv, c })
    }

    pub fn outer(k: &FieldModel, s: Matrix) -> Result<InvolutionSpec> {
        let s_inv = s
            .inverse(k)
            .map_err(|_| Error::NotInvolution("s is singular".into()))?;
        let t = s.transpose();
        let minus = s.scale(k, &k.neg(&k.one()));
        if t != s && t != minus {
            return Err(Error::NotInvolution(
                "s must be symmetric or antisymmetric".into(),
            ));
        }
        Ok(InvolutionSpec::Outer { s, s_inv })
    }

    pub fn transpose_inverse(k: &FieldModel, n: usize) -> InvolutionSpec {
        let s = Matrix::identity(k, n);
        InvolutionSpec::Outer {
            s_inv: s.clone(),
            s,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            InvolutionSpec::Inner { m, .. } => m.n(),
            InvolutionSpec::Outer { s, .. } => s.n(),
        }
    }

    pub fn is_inner(&self) -> bool {
        matches!(self, InvolutionSpec::Inner { .. })
    }

    /// `+1` for inner involutions, `−1` for outer ones: the sign with which θ
    /// acts on cocharacters of a stable torus after permuting coordinates.
    pub fn lattice_sign(&self) -> i64 {
        if self.is_inner() {
            1
        } else {
            -1
        }
    }

    /// θ applied to any invertible matrix.
    pub fn apply_matrix(&self, k: &FieldModel, x: &Matrix) -> Matrix {
        match self {
            InvolutionSpec::Inner { m, m_inv, .. } => m.mul(k, x).mul(k, m_inv),
            InvolutionSpec::Outer { s, s_inv } => {
                let xt_inv = x.transpose().inverse(k).expect("invertible argument");
                s_inv.mul(k, &xt_inv).mul(k, s)
            }
        }
    }

    fn check_dim(&self, g: &GroupElement) -> Result<()> {
        if g.n() == self.n() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.n(),
                found: g.n(),
            })
        }
    }

    pub fn apply(&self, k: &FieldModel, g: &GroupElement) -> Result<GroupElement> {
        self.check_dim(g)?;
        Ok(GroupElement(self.apply_matrix(k, g.matrix())))
    }

    /// Membership in `H = G^θ`.
    pub fn is_fixed(&self, k: &FieldModel, g: &GroupElement) -> bool {
        g.n() == self.n() && self.apply_matrix(k, g.matrix()) == *g.matrix()
    }

    /// `τ(x) = xθ(x)⁻¹`.
    pub fn tau(&self, k: &FieldModel, x: &GroupElement) -> Result<GroupElement> {
        let t = self.apply(k, x)?;
        Ok(x.mul(k, &t.inverse(k)))
    }

    /// `Int(g)⁻¹ ∘ θ ∘ Int(g)`, whose fixed group is `g⁻¹Hg`.
    pub fn conjugate(&self, k: &FieldModel, g: &GroupElement) -> Result<InvolutionSpec> {
        self.check_dim(g)?;
        let g_inv = g.inverse(k);
        match self {
            InvolutionSpec::Inner { m, c, .. } => {
                let m2 = g_inv.matrix().mul(k, m).mul(k, g.matrix());
                let m2_inv = m2.inverse(k)?;
                Ok(InvolutionSpec::Inner {
                    m: m2,
                    m_inv: m2_inv,
                    c: c.clone(),
                })
            }
            InvolutionSpec::Outer { s, .. } => {
                let s2 = g.matrix().transpose().mul(k, s).mul(k, g.matrix());
                InvolutionSpec::outer(k, s2)
            }
        }
    }

    /// The same automorphism written as `Int(M)` when `n = 2`, using
    /// `(xᵀ)⁻¹ = JxJ⁻¹` for `J = [[0,1],[−1,0]]`.
    pub fn as_inner_rank_one(&self, k: &FieldModel) -> Result<InvolutionSpec> {
        match self {
            InvolutionSpec::Inner { .. } => Ok(self.clone()),
            InvolutionSpec::Outer { s_inv, .. } if self.n() == 2 => {
                let j = Matrix::from_ints(k, 2, &[0, 1, -1, 0])?;
                InvolutionSpec::inner(k, s_inv.mul(k, &j))
            }
            InvolutionSpec::Outer { .. } => Err(Error::unsupported(
                "outer involutions are inner only for n = 2",
            )),
        }
    }
}

/// The involutions named in the worked examples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NamedInvolution {
    /// `Int([[0,1],[1,0]])` on `SL(2)`.
    AntiDiag,
    /// `Int([[0,1],[−1,0]])` on `SL(2)`.
    Symplectic2,
    /// `Int(diag(J_{2i}, I_{n−2i}))` with `J` the reversal matrix.
    BlockJ {
        n: usize,
        i: usize,
    },
    /// `Int(diag(L, …, L))` with `m` blocks `L = [[0,1],[x,0]]`.
    Lx {
        m: usize,
        x: BigRational,
    },
    TransposeInverse,
    /// `Int(M)` for an explicit rational matrix.
    Inner(Vec<Vec<BigRational>>),
}

impl NamedInvolution {
    /// The `n` fixed by the involution's shape, if any.
    pub fn natural_n(&self) -> Option<usize> {
        match self {
            NamedInvolution::AntiDiag | NamedInvolution::Symplectic2 => Some(2),
            NamedInvolution::BlockJ { n, .. } => Some(*n),
            NamedInvolution::Lx { m, .. } => Some(2 * m),
            NamedInvolution::TransposeInverse => None,
            NamedInvolution::Inner(rows) => Some(rows.len()),
        }
    }

    /// Resolves `n`, defaulting to the natural one.
    pub fn resolve_n(&self, n: Option<usize>) -> Result<usize> {
        match (self.natural_n(), n) {
            (Some(a), Some(b)) if a != b => Err(Error::DimensionMismatch {
                expected: a,
                found: b,
            }),
            (Some(a), _) => Ok(a),
            (None, Some(b)) if b >= 2 => Ok(b),
            (None, Some(b)) => Err(Error::precondition(format!("SL({b}) is trivial"))),
            (None, None) => Err(Error::precondition("transpose-inverse needs an explicit n")),
        }
    }

    /// The defining matrix `M` of an inner involution.
    pub fn inner_matrix(&self, k: &FieldModel) -> Result<Option<Matrix>> {
        let m = match self {
            NamedInvolution::AntiDiag => Matrix::from_ints(k, 2, &[0, 1, 1, 0])?,
            NamedInvolution::Symplectic2 => Matrix::from_ints(k, 2, &[0, 1, -1, 0])?,
            NamedInvolution::BlockJ { n, i } => {
                let (n, i) = (*n, *i);
                if i == 0 || 2 * i > n {
                    return Err(Error::precondition(format!(
                        "blockJ needs 1 <= i <= n/2, got n={n}, i={i}"
                    )));
                }
                let mut m = Matrix::zero(k, n);
                for r in 0..2 * i {
                    m.set(r, 2 * i - 1 - r, k.one());
                }
                for r in 2 * i..n {
                    m.set(r, r, k.one());
                }
                m
            }
            NamedInvolution::Lx { m: blocks, x } => {
                let x = k.from_rational(x)?;
                if k.is_zero(&x) {
                    return Err(Error::precondition("Lx needs x nonzero in the field"));
                }
                let mut m = Matrix::zero(k, 2 * blocks);
                for b in 0..*blocks {
                    m.set(2 * b, 2 * b + 1, k.one());
                    m.set(2 * b + 1, 2 * b, x.clone());
                }
                m
            }
            NamedInvolution::TransposeInverse => return Ok(None),
            NamedInvolution::Inner(rows) => {
                let rows = rows
                    .iter()
                    .map(|r| {
                        r.iter()
                            .map(|x| k.from_rational(x))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                Matrix::from_rows(rows)?
            }
        };
        Ok(Some(m))
    }

    pub fn to_spec(&self, k: &FieldModel, n: usize) -> Result<InvolutionSpec> {
        let n = self.resolve_n(Some(n))?;
        match self.inner_matrix(k)? {
            Some(m) => InvolutionSpec::inner(k, m),
            None => Ok(InvolutionSpec::transpose_inverse(k, n)),
        }
    }
}

/// `|SL(n, q)| = q^{n(n−1)/2} ∏_{i=2}^{n} (q^i − 1)`.
pub fn sl_order(n: usize, q: u64) -> u128 {
    let q = q as u128;
    let mut order = q.pow((n * (n - 1) / 2) as u32);
    for i in 2..=n {
        order *= q.pow(i as u32) - 1;
    }
    order
}

fn finite_order(k: &FieldModel) -> Result<u64> {
    k.order()
        .ok_or_else(|| Error::unsupported(format!("enumeration needs a finite field, got {k}")))
}

fn check_budget(needed: u128, budget: u64) -> Result<()> {
    if needed > budget as u128 {
        Err(Error::BudgetExceeded { needed, budget })
    } else {
        Ok(())
    }
}

/// Every element of `SL(n, 𝔽_q)` once, in lexicographic order of the
/// flattened entry indices.
pub fn enumerate_group(k: &FieldModel, n: usize, budget: u64) -> Result<SlEnumerator> {
    let q = finite_order(k)?;
    check_budget(sl_order(n, q), budget)?;
    if n == 0 {
        return Err(Error::precondition("n must be positive"));
    }
    let prefixes = (q as u128).pow((n * (n - 1)) as u32);
    Ok(SlEnumerator {
        k: k.clone(),
        n,
        q,
        elements: k.elements().expect("finite field"),
        next_prefix: 0,
        prefixes: prefixes as u64,
        pending: Vec::new(),
    })
}

/// Iterator returned by [`enumerate_group`].
pub struct SlEnumerator {
    k: FieldModel,
    n: usize,
    q: u64,
    elements: Vec<Scalar>,
    next_prefix: u64,
    prefixes: u64,
    /// Completions of the current prefix, reversed for popping.
    pending: Vec<Matrix>,
}

impl SlEnumerator {
    /// Fills `pending` with all determinant-one completions of one prefix
    /// of `n − 1` rows.
    fn complete(&mut self, prefix: u64) {
        let (k, n, q) = (&self.k, self.n, self.q);
        let mut digits = vec![0u64; n * (n - 1)];
        let mut rest = prefix;
        for d in digits.iter_mut().rev() {
            *d = rest % q;
            rest /= q;
        }
        let mut base = Matrix::zero(k, n);
        for (idx, &d) in digits.iter().enumerate() {
            base.set(idx / n, idx % n, self.elements[d as usize].clone());
        }
        // det is linear in the last row: det = Σ_j cof_j x_j.
        let cof: Vec<Scalar> = (0..n)
            .map(|j| {
                let mut e = base.clone();
                e.set(n - 1, j, k.one());
                e.det(k)
            })
            .collect();
        let Some(pivot) = (0..n).rev().find(|&j| !k.is_zero(&cof[j])) else {
            return;
        };
        let pivot_inv = k.inv(&cof[pivot]).expect("nonzero cofactor");
        let mut found = Vec::new();
        let free = n - 1;
        for code in 0..q.pow(free as u32) {
            let mut c = code;
            let mut row = vec![k.zero(); n];
            let mut acc = k.zero();
            for j in (0..n).rev() {
                if j == pivot {
                    continue;
                }
                row[j] = self.elements[(c % q) as usize].clone();
                c /= q;
                acc = k.add(&acc, &k.mul(&cof[j], &row[j]));
            }
            row[pivot] = k.mul(&k.sub(&k.one(), &acc), &pivot_inv);
            let mut m = base.clone();
            for (j, x) in row.into_iter().enumerate() {
                m.set(n - 1, j, x);
            }
            let key = m.finite_key(k).expect("finite field");
            found.push((key, m));
        }
        found.sort_by(|a, b| a.0.cmp(&b.0));
        self.pending = found.into_iter().rev().map(|(_, m)| m).collect();
    }
}

impl Iterator for SlEnumerator {
    type Item = GroupElement;

    fn next(&mut self) -> Option<GroupElement> {
        loop {
            if let Some(m) = self.pending.pop() {
                return Some(GroupElement(m));
            }
            if self.next_prefix >= self.prefixes {
                return None;
            }
            let p = self.next_prefix;
            self.next_prefix += 1;
            self.complete(p);
        }
    }
}

/// The fixed group `H_k` of a finite field, in enumeration order.
///
/// In rank one `θ = Ad(M)` with `M` non-scalar, so `H` is the determinant-one
/// part of the commutant `{aI + bM}` and only `q²` candidates are tried.
pub fn fixed_group(
    k: &FieldModel,
    theta: &InvolutionSpec,
    budget: u64,
) -> Result<Vec<GroupElement>> {
    if theta.n() != 2 {
        return Ok(enumerate_group(k, theta.n(), budget)?
            .filter(|g| theta.is_fixed(k, g))
            .collect());
    }
    let q = finite_order(k)?;
    check_budget((q as u128).pow(2), budget)?;
    let InvolutionSpec::Inner { m, .. } = theta.as_inner_rank_one(k)? else {
        return Err(Error::precondition("rank-one involution is not inner"));
    };
    let elems = k.elements().expect("finite field");
    let id = Matrix::identity(k, 2);
    let mut out = Vec::new();
    for a in &elems {
        for b in &elems {
            let x = id.scale(k, a).add(k, &m.scale(k, b));
            if k.is_one(&x.det(k)) {
                out.push(GroupElement::new(k, x)?);
            }
        }
    }
    out.sort_by_cached_key(|g| g.matrix().finite_key(k));
    debug_assert!(out.iter().all(|g| theta.is_fixed(k, g)));
    Ok(out)
}
