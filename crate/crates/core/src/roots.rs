//! Type-A roots of a θ-stable torus, the Cayley transform and flip chains.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::tori::{decompose, relative_matrix, Decomposition, Signature, Torus};
use crate::{Error, FieldModel, InvolutionSpec, Matrix, Result};

/// `e_i − e_j` on the frame of a torus (0-based indices).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root {
    pub i: usize,
    pub j: usize,
}

impl Root {
    pub fn new(i: usize, j: usize) -> Result<Root> {
        if i == j {
            return Err(Error::precondition("a root needs i != j"));
        }
        Ok(Root { i, j })
    }

    pub fn vector(&self, n: usize) -> Vec<i64> {
        let mut v = vec![0; n];
        v[self.i] = 1;
        v[self.j] = -1;
        v
    }

    fn from_vector(v: &[i64]) -> Option<Root> {
        let i = v.iter().position(|&x| x == 1)?;
        let j = v.iter().position(|&x| x == -1)?;
        let nonzero = v.iter().filter(|&&x| x != 0).count();
        (nonzero == 2).then_some(Root { i, j })
    }
}

impl core::ops::Neg for Root {
    type Output = Root;

    fn neg(self) -> Root {
        Root {
            i: self.j,
            j: self.i,
        }
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}-e{}", self.i + 1, self.j + 1)
    }
}

/// All roots of `SL(n)` in lexicographic order.
pub fn roots(n: usize) -> Vec<Root> {
    (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| Root { i, j }))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RootThetaType {
    /// `θα = −α`.
    Real,
    /// `θα = α`.
    Imaginary,
    Complex,
}

/// θ on characters: `θ(e_a) = ε e_{σ⁻¹(a)}`.
fn act_on_root(d: &Decomposition, alpha: Root) -> Root {
    let inv = crate::weyl::invert(&d.perm);
    let (a, b) = (inv[alpha.i], inv[alpha.j]);
    if d.sign == 1 {
        Root { i: a, j: b }
    } else {
        Root { i: b, j: a }
    }
}

pub fn theta_on_root(
    k: &FieldModel,
    theta: &InvolutionSpec,
    alpha: Root,
    t: &Torus,
) -> Result<Root> {
    check_root(alpha, t.n())?;
    Ok(act_on_root(&decompose(k, t, theta)?, alpha))
}

fn check_root(alpha: Root, n: usize) -> Result<()> {
    if alpha.i >= n || alpha.j >= n || alpha.i == alpha.j {
        return Err(Error::precondition(format!(
            "{alpha} is not a root of SL({n})"
        )));
    }
    Ok(())
}

pub fn root_type(
    k: &FieldModel,
    theta: &InvolutionSpec,
    alpha: Root,
    t: &Torus,
) -> Result<RootThetaType> {
    let image = theta_on_root(k, theta, alpha, t)?;
    Ok(if image == alpha {
        RootThetaType::Imaginary
    } else if image == -alpha {
        RootThetaType::Real
    } else {
        RootThetaType::Complex
    })
}

fn is_root(v: &[i64]) -> bool {
    Root::from_vector(v).is_some()
}

/// `(α, β) = 0` and neither `α + β` nor `α − β` is a root.
pub fn strongly_orthogonal(alpha: Root, beta: Root, n: usize) -> bool {
    let a = alpha.vector(n);
    let b = beta.vector(n);
    let dot: i64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
    let sum: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
    let diff: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
    dot == 0 && !is_root(&sum) && !is_root(&diff)
}

/// θ restricted to the `SL(2)` of the root `α = e_a − e_b`, written as
/// `Int(N)` in the frame coordinates `(a, b)`.
///
/// Needs `θ` to preserve `{a, b}`, i.e. `α` real or imaginary. For outer θ
/// the transpose-inverse on the block is `Int(w)` with `w = [[0,1],[−1,0]]`,
/// so `N = N_block·w`.
pub fn restricted_involution(
    k: &FieldModel,
    theta: &InvolutionSpec,
    alpha: Root,
    t: &Torus,
) -> Result<Matrix> {
    let d = decompose(k, t, theta)?;
    let image = act_on_root(&d, alpha);
    if image != alpha && image != -alpha {
        return Err(Error::unsupported(format!(
            "{alpha} is complex; θ does not preserve its SL(2)"
        )));
    }
    let m = relative_matrix(k, t, theta);
    let (a, b) = (alpha.i, alpha.j);
    let block = Matrix::new(
        2,
        vec![
            m.get(a, a).clone(),
            m.get(a, b).clone(),
            m.get(b, a).clone(),
            m.get(b, b).clone(),
        ],
    )?;
    Ok(if theta.is_inner() {
        block
    } else {
        block.mul(k, &Matrix::from_ints(k, 2, &[0, 1, -1, 0])?)
    })
}

/// `α` is (θ,k)-singular when θ restricted to its `SL(2)` is isomorphic over
/// `k` to `Int([[0,1],[1,0]])`: the restricted `N` is non-scalar with
/// `N² = cI` and `c` a square.
pub fn is_theta_k_singular(
    k: &FieldModel,
    theta: &InvolutionSpec,
    alpha: Root,
    t: &Torus,
) -> Result<bool> {
    let nmat = restricted_involution(k, theta, alpha, t)?;
    if nmat.scalar_value(k).is_some() {
        return Ok(false);
    }
    let c = nmat
        .mul(k, &nmat)
        .scalar_value(k)
        .ok_or_else(|| Error::precondition("restricted involution is not of order two"))?;
    k.is_square(&c)
}

/// `η = [[1,−1/2],[1,1/2]]`, determinant 1.
pub fn cayley_matrix(k: &FieldModel) -> Result<Matrix> {
    let half = k.inv(&k.from_int(2))?;
    Matrix::new(2, vec![k.one(), k.neg(&half), k.one(), half])
}

/// `η` placed on the coordinates `(a, b)`, identity elsewhere.
fn embedded_cayley(k: &FieldModel, n: usize, alpha: Root) -> Result<Matrix> {
    let c = cayley_matrix(k)?;
    let mut m = Matrix::identity(k, n);
    let (a, b) = (alpha.i, alpha.j);
    m.set(a, a, c.get(0, 0).clone());
    m.set(a, b, c.get(0, 1).clone());
    m.set(b, a, c.get(1, 0).clone());
    m.set(b, b, c.get(1, 1).clone());
    Ok(m)
}

/// The Cayley transform of `T` along an imaginary root `α` whose restricted
/// involution is `∝ diag(1,−1)`: the new torus has frame `g·η_{ab}`.
///
/// The output is checked: `α` becomes real, and θ inverts the image of the
/// coroot of `α` exactly.
pub fn cayley_transform(
    k: &FieldModel,
    t: &Torus,
    alpha: Root,
    theta: &InvolutionSpec,
) -> Result<Torus> {
    let n = t.n();
    check_root(alpha, n)?;
    let nmat = restricted_involution(k, theta, alpha, t)?;
    let kind = root_type(k, theta, alpha, t)?;
    let diag_pm = nmat.is_diagonal(k) && k.is_zero(&k.add(nmat.get(0, 0), nmat.get(1, 1)));
    if kind != RootThetaType::Imaginary || !diag_pm {
        return Err(Error::precondition(format!(
            "{alpha} is not a noncompact imaginary root: the rank-one torus is not θ-fixed and split"
        )));
    }
    let g = t.conjugator().mul(k, &embedded_cayley(k, n, alpha)?);
    let out = Torus::from_frame(k, &g)?;
    if root_type(k, theta, alpha, &out)? != RootThetaType::Real {
        return Err(Error::precondition(
            "Cayley image is not θ-split on the root",
        ));
    }
    let a = crate::tori::generating_scalar(k);
    let s = out.element(k, &alpha.vector(n), &a)?;
    let s_inv = s.inverse(k)?;
    if theta.apply_matrix(k, &s) != s_inv {
        return Err(Error::precondition("Cayley image is not inverted by θ"));
    }
    Ok(out)
}

/// Result of successive Cayley transforms.
#[derive(Clone, Debug)]
pub struct FlipChain {
    pub torus: Torus,
    /// Signature before the first flip and after each flip.
    pub signatures: Vec<Signature>,
}

/// Flips `S` along each root of `Ψ` in turn; every flip must raise
/// `dim T⁻` by exactly one.
pub fn flip_chain(
    k: &FieldModel,
    s: &Torus,
    psi: &[Root],
    theta: &InvolutionSpec,
) -> Result<FlipChain> {
    let n = s.n();
    for (x, a) in psi.iter().enumerate() {
        check_root(*a, n)?;
        for b in &psi[x + 1..] {
            if !strongly_orthogonal(*a, *b, n) {
                return Err(Error::precondition(format!(
                    "{a} and {b} are not strongly orthogonal"
                )));
            }
        }
    }
    let mut torus = s.clone();
    let mut signatures = vec![decompose(k, &torus, theta)?.signature];
    for alpha in psi {
        if !is_theta_k_singular(k, theta, *alpha, &torus)? {
            return Err(Error::precondition(format!(
                "{alpha} is not (θ,k)-singular"
            )));
        }
        torus = cayley_transform(k, &torus, *alpha, theta)?;
        let sig = decompose(k, &torus, theta)?.signature;
        let prev = *signatures.last().expect("nonempty");
        if sig.minus != prev.minus + 1 {
            return Err(Error::precondition(format!(
                "flip along {alpha} moved dim T⁻ from {} to {}",
                prev.minus, sig.minus
            )));
        }
        signatures.push(sig);
    }
    Ok(FlipChain { torus, signatures })
}

/// The frame `(1,1), (1,−1)`: the torus of `H` for `Int([[0,1],[1,0]])`.
pub fn antidiag_fixed_torus(k: &FieldModel) -> Result<Torus> {
    Torus::from_columns(k, &[vec![k.one(), k.one()], vec![k.one(), k.neg(&k.one())]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{NamedInvolution, Scalar};

    fn spec(k: &FieldModel, s: &str, n: usize) -> InvolutionSpec {
        s.parse::<NamedInvolution>().unwrap().to_spec(k, n).unwrap()
    }

    #[test]
    fn root_types() {
        let k = FieldModel::Rational;
        let d2 = Torus::diagonal(&k, 2);
        let a = Root::new(0, 1).unwrap();
        assert_eq!(
            theta_on_root(&k, &spec(&k, "antidiag", 2), a, &d2).unwrap(),
            -a
        );
        let diag =
            InvolutionSpec::inner(&k, Matrix::from_ints(&k, 2, &[1, 0, 0, -1]).unwrap()).unwrap();
        assert_eq!(
            root_type(&k, &diag, a, &d2).unwrap(),
            RootThetaType::Imaginary
        );
        let d3 = Torus::diagonal(&k, 3);
        let bj = spec(&k, "blockJ:n=3,i=1", 3);
        assert_eq!(
            root_type(&k, &bj, Root::new(0, 1).unwrap(), &d3).unwrap(),
            RootThetaType::Real
        );
        assert_eq!(
            theta_on_root(&k, &bj, Root::new(0, 2).unwrap(), &d3).unwrap(),
            Root::new(1, 2).unwrap()
        );
        assert_eq!(
            root_type(&k, &bj, Root::new(0, 2).unwrap(), &d3).unwrap(),
            RootThetaType::Complex
        );
    }

    #[test]
    fn orthogonality() {
        assert!(strongly_orthogonal(
            Root::new(0, 1).unwrap(),
            Root::new(2, 3).unwrap(),
            4
        ));
        assert!(!strongly_orthogonal(
            Root::new(0, 1).unwrap(),
            Root::new(1, 2).unwrap(),
            3
        ));
        let a = Root::new(0, 1).unwrap();
        assert!(!strongly_orthogonal(a, -a, 2));
    }

    #[test]
    fn cayley_on_sl2() {
        let k = FieldModel::Real;
        let anti = spec(&k, "antidiag", 2);
        let s = antidiag_fixed_torus(&k).unwrap();
        let out = cayley_transform(&k, &s, Root::new(0, 1).unwrap(), &anti).unwrap();
        assert_eq!(
            decompose(&k, &out, &anti).unwrap().signature,
            Signature { plus: 0, minus: 1 }
        );
        assert_eq!(
            root_type(&k, &anti, Root::new(0, 1).unwrap(), &out).unwrap(),
            RootThetaType::Real
        );
        assert!(
            cayley_transform(&k, &Torus::diagonal(&k, 2), Root::new(0, 1).unwrap(), &anti).is_err()
        );
        assert!(k.is_one(&cayley_matrix(&k).unwrap().det(&k)));
    }

    #[test]
    fn singular_roots() {
        let a = Root::new(0, 1).unwrap();
        let r = FieldModel::Real;
        assert!(
            is_theta_k_singular(&r, &spec(&r, "antidiag", 2), a, &Torus::diagonal(&r, 2)).unwrap()
        );
        assert!(
            !is_theta_k_singular(&r, &spec(&r, "symplectic", 2), a, &Torus::diagonal(&r, 2))
                .unwrap()
        );
        let f5 = FieldModel::finite(5).unwrap();
        assert!(is_theta_k_singular(
            &f5,
            &spec(&f5, "symplectic", 2),
            a,
            &Torus::diagonal(&f5, 2)
        )
        .unwrap());
    }

    #[test]
    fn sl4_flip_chain() {
        let k = FieldModel::Rational;
        let theta = spec(&k, "blockJ:n=4,i=2", 4);
        let v = |x: [i64; 4]| x.iter().map(|&e| Scalar::int(e)).collect::<Vec<_>>();
        let s = Torus::from_columns(
            &k,
            &[
                v([1, 0, 0, 1]),
                v([1, 0, 0, -1]),
                v([0, 1, 1, 0]),
                v([0, 1, -1, 0]),
            ],
        )
        .unwrap();
        let psi = [Root::new(0, 1).unwrap(), Root::new(2, 3).unwrap()];
        let chain = flip_chain(&k, &s, &psi, &theta).unwrap();
        let minus: Vec<usize> = chain.signatures.iter().map(|s| s.minus).collect();
        assert_eq!(minus, [0, 1, 2]);
        assert_eq!(chain.signatures[0], Signature { plus: 3, minus: 0 });
        assert_eq!(chain.signatures[2], Signature { plus: 1, minus: 2 });
        assert_eq!(flip_chain(&k, &s, &[], &theta).unwrap().torus, s);
    }
}
