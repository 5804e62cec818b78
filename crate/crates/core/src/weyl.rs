//! Weyl groups `W_{G_k}(A)` of maximal k-split tori and the quotients by the
//! classes admitting a θ-fixed representative.
//!
//! For split `SL(n)` the Weyl group of `A = gDg⁻¹` is `Sₙ`, realized by
//! `g·w·g⁻¹` with `w` a signed permutation matrix. A Weyl class lies in
//! `W_{H_k}(A)` when `Z_{G_k}(A)·w` meets `H_k`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::tori::{relative_matrix, Signature, Torus, TorusClass};
use crate::{Error, FieldModel, InvolutionSpec, Matrix, Result, Scalar};

/// `π` as a list: `e_j ↦ e_{π[j]}`.
pub type Perm = Vec<usize>;

pub fn compose(a: &[usize], b: &[usize]) -> Perm {
    b.iter().map(|&j| a[j]).collect()
}

pub fn invert(a: &[usize]) -> Perm {
    let mut out = vec![0; a.len()];
    for (j, &i) in a.iter().enumerate() {
        out[i] = j;
    }
    out
}

pub fn identity_perm(n: usize) -> Perm {
    (0..n).collect()
}

/// All permutations of `0..n` in lexicographic order.
pub fn all_perms(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut p = identity_perm(n);
    loop {
        out.push(p.clone());
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
            break;
        };
        let j = (i + 1..n)
            .rev()
            .find(|&j| p[j] > p[i])
            .expect("successor exists");
        p.swap(i, j);
        p[i + 1..].reverse();
    }
    out
}

fn parity(p: &[usize]) -> i64 {
    let mut seen = vec![false; p.len()];
    let mut sign = 1;
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = p[x];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// Permutation matrix of `π` with determinant corrected to 1 by negating the
/// last row moved by `π`.
pub fn signed_permutation(k: &FieldModel, perm: &[usize]) -> Matrix {
    let mut m = Matrix::permutation(k, perm);
    if parity(perm) == -1 {
        let row = (0..perm.len())
            .rev()
            .find(|&i| perm[i] != i)
            .expect("odd permutations move something");
        for j in 0..perm.len() {
            let v = k.neg(m.get(row, j));
            m.set(row, j, v);
        }
    }
    m
}

/// A Weyl group element with its matrix representative `g·w·g⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    pub perm: Perm,
    pub matrix: Matrix,
}

fn check_symbolic(k: &FieldModel, n: usize) -> Result<()> {
    if k.order().is_none() && n != 2 {
        return Err(Error::unsupported(format!(
            "Weyl-class certificates over {k} are only available for n = 2"
        )));
    }
    Ok(())
}

/// `W_{G_k}(A) ≅ Sₙ` with exact representatives.
pub fn weyl_group(k: &FieldModel, a: &Torus) -> Result<Vec<WeylElement>> {
    let n = a.n();
    check_symbolic(k, n)?;
    let g = a.conjugator();
    let g_inv = g.inverse(k)?;
    Ok(all_perms(n)
        .into_iter()
        .map(|perm| {
            let matrix = g.mul(k, &signed_permutation(k, &perm)).mul(k, &g_inv);
            WeylElement { perm, matrix }
        })
        .collect())
}

/// Whether the Weyl class of `perm` has a representative in `H_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Absent,
    /// Present; the certificate is an explicit fixed element when one is
    /// representable in the model.
    Present(Option<Matrix>),
}

impl Membership {
    pub fn is_present(&self) -> bool {
        matches!(self, Membership::Present(_))
    }
}

/// Decides whether `Z_{G_k}(A)·w_π` meets `H_k`.
///
/// Finite fields search the coset exhaustively. For `n = 2` over other
/// fields: with `m' = [[0,α],[β,0]]` the swap class has the fixed element
/// `g·[[0,t],[−1/t,0]]·g⁻¹` iff `t² = −α/β`, and with `m'` diagonal it never
/// does.
pub fn h_membership(
    k: &FieldModel,
    a: &Torus,
    theta: &InvolutionSpec,
    perm: &[usize],
) -> Result<Membership> {
    let n = a.n();
    check_symbolic(k, n)?;
    let g = a.conjugator();
    let g_inv = g.inverse(k)?;
    let w = signed_permutation(k, perm);
    if perm.iter().enumerate().all(|(i, &p)| i == p) {
        return Ok(Membership::Present(Some(Matrix::identity(k, n))));
    }
    if let Some(q) = k.order() {
        let units: Vec<Scalar> = (1..q).map(|i| k.element_at(i)).collect();
        let count = (q - 1).pow((n - 1) as u32);
        for code in 0..count {
            let mut c = code;
            let mut diag = Vec::with_capacity(n);
            let mut prod = k.one();
            for _ in 0..n - 1 {
                let x = units[(c % (q - 1)) as usize].clone();
                c /= q - 1;
                prod = k.mul(&prod, &x);
                diag.push(x);
            }
            diag.push(k.inv(&prod)?);
            let x = g
                .mul(k, &Matrix::diagonal(k, &diag))
                .mul(k, &w)
                .mul(k, &g_inv);
            if theta.apply_matrix(k, &x) == x {
                return Ok(Membership::Present(Some(x)));
            }
        }
        return Ok(Membership::Absent);
    }
    let inner = theta.as_inner_rank_one(k)?;
    let m = relative_matrix(k, a, &inner);
    if m.is_diagonal(k) {
        return Ok(Membership::Absent);
    }
    let (alpha, beta) = (m.get(0, 1), m.get(1, 0));
    let r = k.neg(&k.div(alpha, beta)?);
    if !k.is_square(&r)? {
        return Ok(Membership::Absent);
    }
    let cert = k.sqrt(&r).map(|t| {
        let zt = Matrix::new(
            2,
            vec![
                k.zero(),
                t.clone(),
                k.neg(&k.inv(&t).expect("nonzero")),
                k.zero(),
            ],
        )
        .expect("2x2");
        g.mul(k, &zt).mul(k, &g_inv)
    });
    Ok(Membership::Present(cert))
}

/// `W_{G_k}(A)/W_{H_k}(A)` for one torus class.
#[derive(Clone, Debug)]
pub struct WeylQuotient {
    pub signature: Signature,
    pub invariant: alloc::string::String,
    pub order_wg: u64,
    pub order_wh: u64,
    pub quotient: u64,
    /// Elements of `W_{H_k}(A)` with their fixed certificates.
    pub wh: Vec<(Perm, Option<Matrix>)>,
    /// Least permutation of each left coset `wW_{H_k}(A)`, sorted.
    pub coset_reps: Vec<Perm>,
    /// `g·w·g⁻¹` for each coset representative, when the class has a torus.
    pub coset_matrices: Vec<Matrix>,
}

/// Left cosets of a permutation subgroup, each keyed by its least element.
pub fn left_coset_reps(n: usize, subgroup: &[Perm]) -> Vec<Perm> {
    let mut reps: Vec<Perm> = Vec::new();
    for w in all_perms(n) {
        let rep = subgroup
            .iter()
            .map(|h| compose(&w, h))
            .min()
            .expect("subgroup has the identity");
        if !reps.contains(&rep) {
            reps.push(rep);
        }
    }
    reps.sort();
    reps
}

/// Index of the left coset `wW` among `reps`.
pub fn coset_index(w: &[usize], subgroup: &[Perm], reps: &[Perm]) -> usize {
    let rep = subgroup
        .iter()
        .map(|h| compose(w, h))
        .min()
        .expect("subgroup has the identity");
    reps.iter()
        .position(|r| *r == rep)
        .expect("coset rep present")
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// The Weyl quotient of a classified torus class.
pub fn weyl_quotient(
    k: &FieldModel,
    class: &TorusClass,
    theta: &InvolutionSpec,
) -> Result<WeylQuotient> {
    let n = theta.n();
    let order_wg = factorial(n);
    let (wh, coset_matrices) = match &class.representative {
        Some(a) => {
            let mut wh = Vec::new();
            for perm in all_perms(n) {
                if let Membership::Present(cert) = h_membership(k, a, theta, &perm)? {
                    wh.push((perm, cert));
                }
            }
            (wh, Some(a))
        }
        None => {
            let hint = class.quotient_hint.ok_or_else(|| {
                Error::precondition("torus class has neither representative nor quotient")
            })?;
            let wh = if hint == 1 {
                all_perms(n).into_iter().map(|p| (p, None)).collect()
            } else {
                vec![(identity_perm(n), None)]
            };
            if n != 2 || (hint != 1 && hint != 2) {
                return Err(Error::precondition("quotient hints are rank-one only"));
            }
            (wh, None)
        }
    };
    let subgroup: Vec<Perm> = wh.iter().map(|(p, _)| p.clone()).collect();
    let coset_reps = left_coset_reps(n, &subgroup);
    let coset_matrices = match coset_matrices {
        Some(a) => {
            let g = a.conjugator();
            let g_inv = g.inverse(k)?;
            coset_reps
                .iter()
                .map(|p| g.mul(k, &signed_permutation(k, p)).mul(k, &g_inv))
                .collect()
        }
        None => Vec::new(),
    };
    let order_wh = subgroup.len() as u64;
    Ok(WeylQuotient {
        signature: class.signature,
        invariant: class.invariant.clone(),
        order_wg,
        order_wh,
        quotient: order_wg / order_wh,
        wh,
        coset_reps,
        coset_matrices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::NamedInvolution;

    #[test]
    fn perms_and_signs() {
        assert_eq!(all_perms(3).len(), 6);
        let k = FieldModel::Rational;
        let w = signed_permutation(&k, &[1, 0]);
        assert_eq!(w, Matrix::from_ints(&k, 2, &[0, 1, -1, 0]).unwrap());
        for p in all_perms(4) {
            assert!(k.is_one(&signed_permutation(&k, &p).det(&k)));
        }
    }

    #[test]
    fn real_sl2_weyl_group() {
        let k = FieldModel::Real;
        let w = weyl_group(&k, &Torus::diagonal(&k, 2)).unwrap();
        assert_eq!(w.len(), 2);
        assert_eq!(w[0].matrix, Matrix::identity(&k, 2));
        assert_eq!(
            w[1].matrix,
            Matrix::from_ints(&k, 2, &[0, 1, -1, 0]).unwrap()
        );
        assert!(weyl_group(&k, &Torus::diagonal(&k, 3)).is_err());
    }

    #[test]
    fn gaussian_certificate() {
        let k: FieldModel = "Q(sqrt:-1)".parse().unwrap();
        let anti = NamedInvolution::AntiDiag.to_spec(&k, 2).unwrap();
        let d = Torus::diagonal(&k, 2);
        let Membership::Present(Some(cert)) = h_membership(&k, &d, &anti, &[1, 0]).unwrap() else {
            panic!()
        };
        let i = k.sqrt_generator().unwrap();
        let expected =
            Matrix::from_rows(vec![vec![k.zero(), i.clone()], vec![i, k.zero()]]).unwrap();
        assert_eq!(cert, expected);
        let q = FieldModel::Rational;
        let anti = NamedInvolution::AntiDiag.to_spec(&q, 2).unwrap();
        assert_eq!(
            h_membership(&q, &Torus::diagonal(&q, 2), &anti, &[1, 0]).unwrap(),
            Membership::Absent
        );
    }

    #[test]
    fn cosets() {
        let sub = vec![identity_perm(3), vec![1, 0, 2]];
        let reps = left_coset_reps(3, &sub);
        assert_eq!(reps.len(), 3);
        for w in all_perms(3) {
            let i = coset_index(&w, &sub, &reps);
            assert!(i < 3);
        }
    }
}
