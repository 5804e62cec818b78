//! Exact scalars and the field models they live in.
//!
//! Every model is backed by exact arithmetic. The characteristic-zero models
//! (`Q`, the real model, the p-adic model and the algebraically closed model)
//! all compute with rationals and differ only in how they decide whether a
//! scalar is a square. Finite fields use residues (with log tables for prime
//! powers) and quadratic extensions carry `a + b√d` pairs over their base.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Count, Error, Result};

/// An exact field element. Which variant is valid depends on the model.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    /// Rational carrier of the characteristic-zero models.
    Rat(BigRational),
    /// Element of a finite field, encoded as the base-p digits of its
    /// polynomial representative.
    Fin(u32),
    /// `a + b√d` over the base of a quadratic extension.
    Quad(Box<(Scalar, Scalar)>),
}

impl Scalar {
    pub fn rat(num: i64, den: i64) -> Scalar {
        Scalar::Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn int(v: i64) -> Scalar {
        Scalar::Rat(BigRational::from_integer(BigInt::from(v)))
    }
}

/// Finite field `GF(q)` for odd `q = p^k`, with exp/log tables.
#[derive(Debug, PartialEq, Eq)]
pub struct GaloisField {
    q: u32,
    p: u32,
    degree: u32,
    /// Low-to-high coefficients of the monic modulus (degree > 1 only).
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

const MAX_FIELD_ORDER: u32 = 1 << 16;

impl GaloisField {
    pub fn new(q: u32) -> Result<GaloisField> {
        if q < 3 || q.is_multiple_of(2) {
            return Err(Error::InvalidField(format!(
                "Fq:{q} needs q an odd prime power"
            )));
        }
        if q >= MAX_FIELD_ORDER {
            return Err(Error::InvalidField(format!(
                "Fq:{q} exceeds the supported order"
            )));
        }
        let p = smallest_prime_factor(q as u64) as u32;
        let mut degree = 0;
        let mut rest = q;
        while rest.is_multiple_of(p) {
            rest /= p;
            degree += 1;
        }
        if rest != 1 {
            return Err(Error::InvalidField(format!("Fq:{q} is not a prime power")));
        }
        let modulus = if degree == 1 {
            Vec::new()
        } else {
            find_irreducible(p, degree)
        };
        let mut field = GaloisField {
            q,
            p,
            degree,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
        };
        let generator = (1..q)
            .find(|&g| field.is_generator(g))
            .expect("the multiplicative group of a finite field is cyclic");
        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut log = vec![0; q as usize];
        let mut acc = 1;
        for i in 0..q - 1 {
            exp.push(acc);
            log[acc as usize] = i;
            acc = field.slow_mul(acc, generator);
        }
        field.exp = exp;
        field.log = log;
        Ok(field)
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// The generator used for the log tables.
    pub fn primitive_element(&self) -> u32 {
        self.exp[1 % self.exp.len()]
    }

    fn digits(&self, mut a: u32) -> Vec<u32> {
        let mut out = vec![0; self.degree as usize];
        for d in out.iter_mut() {
            *d = a % self.p;
            a /= self.p;
        }
        out
    }

    fn from_digits(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        if self.degree == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u32; da.len() + db.len()];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        let rem = poly_rem(&prod, &self.modulus, self.p);
        let mut digits = vec![0; self.degree as usize];
        digits[..rem.len().min(self.degree as usize)]
            .copy_from_slice(&rem[..rem.len().min(self.degree as usize)]);
        self.from_digits(&digits)
    }

    fn slow_pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.slow_mul(acc, base);
            }
            base = self.slow_mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn is_generator(&self, g: u32) -> bool {
        let n = (self.q - 1) as u64;
        prime_factors(n)
            .into_iter()
            .all(|r| self.slow_pow(g, n / r) != 1)
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.degree == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.degree {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.degree == 1 {
            return (self.p - a) % self.p;
        }
        let mut a = a;
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.degree {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let l = (self.log[a as usize] + self.log[b as usize]) % (self.q - 1);
        self.exp[l as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let l = (self.q - 1 - self.log[a as usize]) % (self.q - 1);
        Some(self.exp[l as usize])
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let l = (self.log[a as usize] as u64 * (e % (self.q as u64 - 1))) % (self.q as u64 - 1);
        self.exp[l as usize]
    }

    pub fn sqrt(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return Some(0);
        }
        let l = self.log[a as usize];
        l.is_multiple_of(2).then(|| self.exp[(l / 2) as usize])
    }

    /// Residue of an integer in the prime subfield.
    pub fn from_integer(&self, v: &BigInt) -> u32 {
        v.mod_floor(&BigInt::from(self.p))
            .to_u32()
            .expect("residue fits")
    }

    pub fn format(&self, a: u32) -> String {
        if self.degree == 1 {
            return a.to_string();
        }
        let digits = self.digits(a);
        let mut terms = Vec::new();
        for (i, &c) in digits.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let term = match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "a".to_string(),
                (1, c) => format!("{c}a"),
                (i, 1) => format!("a^{i}"),
                (i, c) => format!("{c}a^{i}"),
            };
            terms.push(term);
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }
}

fn smallest_prime_factor(n: u64) -> u64 {
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return d;
        }
        d += 1;
    }
    n
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2 && smallest_prime_factor(n) == n
}

fn trim(mut poly: Vec<u32>) -> Vec<u32> {
    while poly.last() == Some(&0) {
        poly.pop();
    }
    poly
}

/// Remainder of `num` modulo the monic polynomial given by its low
/// coefficients `monic_low` (the leading 1 is implicit).
fn poly_rem(num: &[u32], monic_low: &[u32], p: u32) -> Vec<u32> {
    let deg = monic_low.len();
    let mut rem = trim(num.to_vec());
    while rem.len() > deg {
        let lead = *rem.last().unwrap();
        let shift = rem.len() - 1 - deg;
        for (i, &c) in monic_low.iter().enumerate() {
            let idx = shift + i;
            rem[idx] = (rem[idx] + p - (lead * c) % p) % p;
        }
        rem.pop();
        rem = trim(rem);
    }
    rem
}

fn find_irreducible(p: u32, degree: u32) -> Vec<u32> {
    let count = p.pow(degree);
    'candidate: for code in 0..count {
        let low: Vec<u32> = {
            let mut c = code;
            (0..degree)
                .map(|_| {
                    let d = c % p;
                    c /= p;
                    d
                })
                .collect()
        };
        if low[0] == 0 {
            continue;
        }
        let mut full = low.clone();
        full.push(1);
        for d in 1..=degree / 2 {
            for g in 0..p.pow(d) {
                let mut c = g;
                let g_low: Vec<u32> = (0..d)
                    .map(|_| {
                        let x = c % p;
                        c /= p;
                        x
                    })
                    .collect();
                if poly_rem(&full, &g_low, p).is_empty() {
                    continue 'candidate;
                }
            }
        }
        return low;
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Canonical representative of a square class, with a display name.
#[derive(Clone, Debug)]
pub struct ClassLabel {
    pub rep: Scalar,
    pub name: String,
}

impl PartialEq for ClassLabel {
    fn eq(&self, other: &Self) -> bool {
        self.rep == other.rep
    }
}

impl Eq for ClassLabel {}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// A base field `k`, modelled by exact arithmetic plus a square-class rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldModel {
    Rational,
    /// ℝ: rational arithmetic, squares are the positive elements.
    Real,
    /// ℚ_p for odd p: rational arithmetic, squares decided by valuation parity
    /// and the residue of the unit part. `nonresidue` is the least positive
    /// quadratic nonresidue mod p.
    Padic {
        p: u32,
        nonresidue: u32,
    },
    Finite(Arc<GaloisField>),
    /// `base(√d)` for a nonsquare `d` of the base.
    QuadExt {
        base: Box<FieldModel>,
        d: Scalar,
    },
    /// k̄: rational arithmetic where every nonzero scalar counts as a square.
    AlgClosed,
}

impl FieldModel {
    pub fn padic(p: u32) -> Result<FieldModel> {
        if p == 2 || !is_prime(p as u64) {
            return Err(Error::InvalidField(format!("Qp:{p} needs p an odd prime")));
        }
        let nonresidue = (2..p)
            .find(|&a| legendre(a as u64, p as u64) == -1)
            .expect("odd primes have nonresidues");
        Ok(FieldModel::Padic { p, nonresidue })
    }

    pub fn finite(q: u32) -> Result<FieldModel> {
        Ok(FieldModel::Finite(Arc::new(GaloisField::new(q)?)))
    }

    /// `base(√d)`; rejects `d` that is already a square in `base`.
    pub fn quad_ext(base: FieldModel, d: Scalar) -> Result<FieldModel> {
        base.check(&d)?;
        if base.is_zero(&d) || base.is_square(&d)? {
            return Err(Error::InvalidField(format!(
                "{} is a square in {base}, no quadratic extension",
                base.format(&d)
            )));
        }
        Ok(FieldModel::QuadExt {
            base: Box::new(base),
            d,
        })
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldModel::Finite(gf) => gf.p as u64,
            FieldModel::QuadExt { base, .. } => base.characteristic(),
            _ => 0,
        }
    }

    /// Number of elements, for finite fields.
    pub fn order(&self) -> Option<u64> {
        match self {
            FieldModel::Finite(gf) => Some(gf.q as u64),
            FieldModel::QuadExt { base, .. } => base.order().map(|q| q * q),
            _ => None,
        }
    }

    fn uses_rationals(&self) -> bool {
        matches!(
            self,
            FieldModel::Rational
                | FieldModel::Real
                | FieldModel::Padic { .. }
                | FieldModel::AlgClosed
        )
    }

    /// Whether `x` has the representation this model computes with.
    pub fn contains(&self, x: &Scalar) -> bool {
        match (self, x) {
            (FieldModel::Finite(gf), Scalar::Fin(v)) => *v < gf.q,
            (FieldModel::QuadExt { base, .. }, Scalar::Quad(pair)) => {
                base.contains(&pair.0) && base.contains(&pair.1)
            }
            (m, Scalar::Rat(_)) => m.uses_rationals(),
            _ => false,
        }
    }

    pub fn check(&self, x: &Scalar) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::ForeignScalar(format!("{x:?} in {self}")))
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldModel::Finite(_) => Scalar::Fin(0),
            FieldModel::QuadExt { base, .. } => quad(base.zero(), base.zero()),
            _ => Scalar::Rat(BigRational::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldModel::Finite(_) => Scalar::Fin(1),
            FieldModel::QuadExt { base, .. } => quad(base.one(), base.zero()),
            _ => Scalar::Rat(BigRational::one()),
        }
    }

    pub fn from_int(&self, v: i64) -> Scalar {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match self {
            FieldModel::Finite(gf) => Scalar::Fin(gf.from_integer(v)),
            FieldModel::QuadExt { base, .. } => quad(base.from_bigint(v), base.zero()),
            _ => Scalar::Rat(BigRational::from_integer(v.clone())),
        }
    }

    /// Image of a rational number; fails when the denominator vanishes in
    /// positive characteristic.
    pub fn from_rational(&self, r: &BigRational) -> Result<Scalar> {
        match self {
            FieldModel::Finite(_) | FieldModel::QuadExt { .. } => {
                let num = self.from_bigint(r.numer());
                let den = self.from_bigint(r.denom());
                self.div(&num, &den)
            }
            _ => Ok(Scalar::Rat(r.clone())),
        }
    }

    /// The adjoined `√d` of a quadratic extension.
    pub fn sqrt_generator(&self) -> Option<Scalar> {
        match self {
            FieldModel::QuadExt { base, .. } => Some(quad(base.zero(), base.one())),
            _ => None,
        }
    }

    pub fn is_zero(&self, x: &Scalar) -> bool {
        match x {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Fin(v) => *v == 0,
            Scalar::Quad(pair) => match self {
                FieldModel::QuadExt { base, .. } => base.is_zero(&pair.0) && base.is_zero(&pair.1),
                _ => false,
            },
        }
    }

    pub fn is_one(&self, x: &Scalar) -> bool {
        *x == self.one()
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldModel::Finite(gf), Scalar::Fin(x), Scalar::Fin(y)) => Scalar::Fin(gf.add(*x, *y)),
            (FieldModel::QuadExt { base, .. }, Scalar::Quad(x), Scalar::Quad(y)) => {
                quad(base.add(&x.0, &y.0), base.add(&x.1, &y.1))
            }
            (_, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            _ => panic!("scalars {a:?} and {b:?} do not belong to {self}"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (FieldModel::Finite(gf), Scalar::Fin(x)) => Scalar::Fin(gf.neg(*x)),
            (FieldModel::QuadExt { base, .. }, Scalar::Quad(x)) => {
                quad(base.neg(&x.0), base.neg(&x.1))
            }
            (_, Scalar::Rat(x)) => Scalar::Rat(-x),
            _ => panic!("scalar {a:?} does not belong to {self}"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldModel::Finite(gf), Scalar::Fin(x), Scalar::Fin(y)) => Scalar::Fin(gf.mul(*x, *y)),
            (FieldModel::QuadExt { base, d }, Scalar::Quad(x), Scalar::Quad(y)) => {
                let re = base.add(&base.mul(&x.0, &y.0), &base.mul(d, &base.mul(&x.1, &y.1)));
                let im = base.add(&base.mul(&x.0, &y.1), &base.mul(&x.1, &y.0));
                quad(re, im)
            }
            (_, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            _ => panic!("scalars {a:?} and {b:?} do not belong to {self}"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        match (self, a) {
            (FieldModel::Finite(gf), Scalar::Fin(x)) => {
                gf.inv(*x).map(Scalar::Fin).ok_or(Error::DivisionByZero)
            }
            (FieldModel::QuadExt { base, .. }, Scalar::Quad(x)) => {
                let n = self.norm(a).expect("quadratic extension");
                let n_inv = base.inv(&n)?;
                Ok(quad(
                    base.mul(&x.0, &n_inv),
                    base.neg(&base.mul(&x.1, &n_inv)),
                ))
            }
            (_, Scalar::Rat(x)) => {
                if x.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(Scalar::Rat(x.recip()))
                }
            }
            _ => Err(Error::ForeignScalar(format!("{a:?} in {self}"))),
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Scalar, mut e: u64) -> Scalar {
        if let (FieldModel::Finite(gf), Scalar::Fin(x)) = (self, a) {
            return Scalar::Fin(gf.pow(*x, e));
        }
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Integer power allowing negative exponents.
    pub fn powi(&self, a: &Scalar, e: i64) -> Result<Scalar> {
        let p = self.pow(a, e.unsigned_abs());
        if e < 0 {
            self.inv(&p)
        } else {
            Ok(p)
        }
    }

    /// `N(a + b√d) = a² − d b²` for a quadratic extension.
    pub fn norm(&self, x: &Scalar) -> Option<Scalar> {
        match (self, x) {
            (FieldModel::QuadExt { base, d }, Scalar::Quad(pair)) => {
                let (a, b) = (&pair.0, &pair.1);
                Some(base.sub(&base.mul(a, a), &base.mul(d, &base.mul(b, b))))
            }
            _ => None,
        }
    }

    /// A square root inside the carrier, when one is representable.
    ///
    /// Models without a complete carrier (real, p-adic, algebraically
    /// closed) only find roots of rational squares; use [`Self::is_square`]
    /// for the membership question.
    pub fn sqrt(&self, x: &Scalar) -> Option<Scalar> {
        if self.is_zero(x) {
            return Some(self.zero());
        }
        match (self, x) {
            (FieldModel::Finite(gf), Scalar::Fin(v)) => gf.sqrt(*v).map(Scalar::Fin),
            (FieldModel::QuadExt { base, d }, Scalar::Quad(pair)) => {
                let (a, b) = (&pair.0, &pair.1);
                let n = self.norm(x)?;
                let s = base.sqrt(&n)?;
                let two = base.from_int(2);
                for s in [s.clone(), base.neg(&s)] {
                    let t = base.div(&base.add(a, &s), &two).ok()?;
                    if !base.is_zero(&t) {
                        if let Some(u) = base.sqrt(&t) {
                            let v = base.div(b, &base.mul(&two, &u)).ok()?;
                            return Some(quad(u, v));
                        }
                    } else if base.is_zero(b) {
                        if let Some(v) = base.div(a, d).ok().and_then(|r| base.sqrt(&r)) {
                            return Some(quad(base.zero(), v));
                        }
                    }
                }
                None
            }
            (_, Scalar::Rat(r)) => {
                if r.is_negative() {
                    return None;
                }
                let num = exact_sqrt(r.numer())?;
                let den = exact_sqrt(r.denom())?;
                Some(Scalar::Rat(BigRational::new(num, den)))
            }
            _ => None,
        }
    }

    /// Whether the model can produce every square root it certifies.
    fn has_complete_sqrt(&self) -> bool {
        match self {
            FieldModel::Rational | FieldModel::Finite(_) => true,
            FieldModel::QuadExt { base, .. } => base.has_complete_sqrt(),
            _ => false,
        }
    }

    pub(crate) fn is_real_closed_extension(&self) -> bool {
        matches!(self, FieldModel::QuadExt { base, .. } if **base == FieldModel::Real)
    }

    /// Whether this is a finite extension of some ℚ_p.
    pub(crate) fn padic_prime(&self) -> Option<u32> {
        match self {
            FieldModel::Padic { p, .. } => Some(*p),
            FieldModel::QuadExt { base, .. } => base.padic_prime(),
            _ => None,
        }
    }

    /// Membership in `(k*)²`.
    pub fn is_square(&self, x: &Scalar) -> Result<bool> {
        self.check(x)?;
        if self.is_zero(x) {
            return Err(Error::ZeroInput);
        }
        match (self, x) {
            (FieldModel::AlgClosed, _) => Ok(true),
            (FieldModel::Real, Scalar::Rat(r)) => Ok(r.is_positive()),
            (FieldModel::Rational, Scalar::Rat(r)) => Ok(r.is_positive()
                && exact_sqrt(r.numer()).is_some()
                && exact_sqrt(r.denom()).is_some()),
            (FieldModel::Padic { p, .. }, Scalar::Rat(r)) => {
                let (v, unit) = padic_split(r, *p);
                Ok(v % 2 == 0 && legendre(unit as u64, *p as u64) == 1)
            }
            (FieldModel::Finite(gf), Scalar::Fin(_)) => {
                // Euler's criterion.
                Ok(self.pow(x, (gf.q as u64 - 1) / 2) == self.one())
            }
            (FieldModel::QuadExt { base, d }, Scalar::Quad(pair)) => {
                let (a, b) = (&pair.0, &pair.1);
                if self.is_real_closed_extension() {
                    return Ok(true);
                }
                if base.order().is_some() {
                    // Over a finite base, x is a square iff its norm is.
                    let n = self.norm(x).expect("quadratic extension");
                    return base.is_square(&n);
                }
                if base.has_complete_sqrt() {
                    let n = self.norm(x).expect("quadratic extension");
                    let Some(s) = base.sqrt(&n) else {
                        return Ok(false);
                    };
                    let two = base.from_int(2);
                    for s in [s.clone(), base.neg(&s)] {
                        let t = base.div(&base.add(a, &s), &two)?;
                        if !base.is_zero(&t) {
                            if base.is_square(&t)? {
                                return Ok(true);
                            }
                        } else if base.is_zero(b) && base.is_square(&base.div(a, d)?)? {
                            return Ok(true);
                        }
                    }
                    return Ok(false);
                }
                if base.is_zero(b) {
                    return Ok(base.is_square(a)? || base.is_square(&base.div(a, d)?)?);
                }
                Err(Error::unsupported(format!(
                    "square test for {} in {self} needs arithmetic beyond the rational carrier",
                    self.format(x)
                )))
            }
            _ => Err(Error::ForeignScalar(format!("{x:?} in {self}"))),
        }
    }

    /// Canonical representative of `x·(k*)²`.
    pub fn square_class(&self, x: &Scalar) -> Result<ClassLabel> {
        self.check(x)?;
        if self.is_zero(x) {
            return Err(Error::ZeroInput);
        }
        let trivial = || ClassLabel {
            rep: self.one(),
            name: "1".to_string(),
        };
        match (self, x) {
            (FieldModel::AlgClosed, _) => Ok(trivial()),
            (FieldModel::Real, Scalar::Rat(r)) => Ok(if r.is_positive() {
                trivial()
            } else {
                ClassLabel {
                    rep: Scalar::int(-1),
                    name: "-1".to_string(),
                }
            }),
            (FieldModel::Rational, Scalar::Rat(r)) => {
                let kernel = squarefree_kernel(&(r.numer() * r.denom()));
                let name = kernel.to_string();
                Ok(ClassLabel {
                    rep: Scalar::Rat(BigRational::from_integer(kernel)),
                    name,
                })
            }
            (FieldModel::Padic { p, nonresidue }, Scalar::Rat(r)) => {
                let (v, unit) = padic_split(r, *p);
                let odd = v.rem_euclid(2) == 1;
                let residue = legendre(unit as u64, *p as u64) == 1;
                let (rep, name) = match (odd, residue) {
                    (false, true) => (1, "1"),
                    (false, false) => (*nonresidue as i64, "u"),
                    (true, true) => (*p as i64, "p"),
                    (true, false) => (*p as i64 * *nonresidue as i64, "up"),
                };
                Ok(ClassLabel {
                    rep: Scalar::int(rep),
                    name: name.to_string(),
                })
            }
            _ if self.order().is_some() => {
                if self.is_square(x)? {
                    return Ok(trivial());
                }
                let rep = self
                    .least_nonsquare()
                    .expect("finite fields of odd order have nonsquares");
                Ok(ClassLabel {
                    name: self.format(&rep),
                    rep,
                })
            }
            _ if self.is_real_closed_extension() => Ok(trivial()),
            _ => {
                if self.is_square(x)? {
                    Ok(trivial())
                } else {
                    Err(Error::unsupported(format!(
                        "square-class labels of {self} are not enumerated"
                    )))
                }
            }
        }
    }

    /// `|k*/(k*)²|`.
    pub fn square_class_group_order(&self) -> Count {
        match self {
            FieldModel::AlgClosed => Count::Finite(1),
            FieldModel::Real => Count::Finite(2),
            FieldModel::Padic { .. } => Count::Finite(4),
            FieldModel::Finite(_) => Count::Finite(2),
            FieldModel::Rational => Count::Infinite,
            FieldModel::QuadExt { .. } => {
                if self.order().is_some() {
                    Count::Finite(2)
                } else if self.is_real_closed_extension() {
                    Count::Finite(1)
                } else if self.padic_prime().is_some() {
                    Count::Finite(4)
                } else {
                    Count::Infinite
                }
            }
        }
    }

    /// Whether −1 is a square.
    pub fn minus_one_is_square(&self) -> Result<bool> {
        self.is_square(&self.neg(&self.one()))
    }

    /// All elements of a finite field in index order.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        let q = self.order()?;
        Some((0..q).map(|i| self.element_at(i)).collect())
    }

    /// Position of a finite-field element in [`Self::elements`].
    pub fn element_index(&self, x: &Scalar) -> Option<u64> {
        match (self, x) {
            (FieldModel::Finite(_), Scalar::Fin(v)) => Some(*v as u64),
            (FieldModel::QuadExt { base, .. }, Scalar::Quad(pair)) => {
                let q = base.order()?;
                Some(base.element_index(&pair.0)? + q * base.element_index(&pair.1)?)
            }
            _ => None,
        }
    }

    /// Inverse of [`Self::element_index`]. Panics for infinite models.
    pub fn element_at(&self, idx: u64) -> Scalar {
        match self {
            FieldModel::Finite(_) => Scalar::Fin(idx as u32),
            FieldModel::QuadExt { base, .. } => {
                let q = base.order().expect("finite base");
                quad(base.element_at(idx % q), base.element_at(idx / q))
            }
            _ => panic!("{self} is not finite"),
        }
    }

    /// A generator of `k*` for finite fields.
    pub fn primitive_element(&self) -> Option<Scalar> {
        match self {
            FieldModel::Finite(gf) => Some(Scalar::Fin(gf.primitive_element())),
            FieldModel::QuadExt { .. } => {
                let q = self.order()?;
                let factors = prime_factors(q - 1);
                (1..q).map(|i| self.element_at(i)).find(|g| {
                    factors
                        .iter()
                        .all(|r| self.pow(g, (q - 1) / r) != self.one())
                })
            }
            _ => None,
        }
    }

    /// A basis of the field over its prime subfield (finite fields only).
    pub fn additive_basis(&self) -> Option<Vec<Scalar>> {
        match self {
            FieldModel::Finite(gf) => {
                Some((0..gf.degree).map(|i| Scalar::Fin(gf.p.pow(i))).collect())
            }
            FieldModel::QuadExt { base, .. } => {
                let inner = base.additive_basis()?;
                let mut out: Vec<Scalar> =
                    inner.iter().map(|b| quad(b.clone(), base.zero())).collect();
                out.extend(inner.iter().map(|b| quad(base.zero(), b.clone())));
                Some(out)
            }
            _ => None,
        }
    }

    /// Canonical representatives of `k*/(k*)²`, when the group is finite and
    /// its labels are enumerated.
    pub fn square_class_reps(&self) -> Option<Vec<Scalar>> {
        match self {
            FieldModel::AlgClosed => Some(vec![self.one()]),
            FieldModel::Real => Some(vec![self.one(), self.from_int(-1)]),
            FieldModel::Padic { p, nonresidue } => {
                let (p, u) = (*p as i64, *nonresidue as i64);
                Some([1, u, p, u * p].iter().map(|&v| self.from_int(v)).collect())
            }
            _ if self.order().is_some() => Some(vec![self.one(), self.least_nonsquare()?]),
            _ if self.is_real_closed_extension() => Some(vec![self.one()]),
            _ => None,
        }
    }

    fn least_nonsquare(&self) -> Option<Scalar> {
        let q = self.order()?;
        (1..q)
            .map(|i| self.element_at(i))
            .find(|x| !self.is_square(x).unwrap_or(true))
    }

    /// Human-readable rendering of a scalar of this model.
    pub fn format(&self, x: &Scalar) -> String {
        match (self, x) {
            (FieldModel::Finite(gf), Scalar::Fin(v)) => gf.format(*v),
            (FieldModel::QuadExt { base, d }, Scalar::Quad(pair)) => {
                let (a, b) = (&pair.0, &pair.1);
                let root = format!("sqrt({})", base.format(d));
                if base.is_zero(b) {
                    base.format(a)
                } else if base.is_zero(a) {
                    if base.is_one(b) {
                        root
                    } else {
                        format!("{}*{root}", base.format(b))
                    }
                } else {
                    format!("{}+{}*{root}", base.format(a), base.format(b))
                }
            }
            (_, Scalar::Rat(r)) => r.to_string(),
            _ => format!("{x:?}"),
        }
    }
}

fn quad(a: Scalar, b: Scalar) -> Scalar {
    Scalar::Quad(Box::new((a, b)))
}

fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Signed squarefree kernel of a nonzero integer.
fn squarefree_kernel(n: &BigInt) -> BigInt {
    let sign = if n.sign() == Sign::Minus {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    let mut rest = n.abs();
    let mut kernel = BigInt::one();
    let mut d = BigInt::from(2u32);
    while &d * &d <= rest {
        let mut exp = 0u32;
        while (&rest % &d).is_zero() {
            rest /= &d;
            exp += 1;
        }
        if exp % 2 == 1 {
            kernel *= &d;
        }
        d += 1u32;
    }
    kernel *= rest;
    sign * kernel
}

/// `(v_p(r), unit part of r reduced mod p)`.
fn padic_split(r: &BigRational, p: u32) -> (i64, u32) {
    let pb = BigInt::from(p);
    let strip = |n: &BigInt| -> (i64, BigInt) {
        let mut n = n.clone();
        let mut v = 0;
        while (&n % &pb).is_zero() {
            n /= &pb;
            v += 1;
        }
        (v, n)
    };
    let (vn, un) = strip(r.numer());
    let (vd, ud) = strip(r.denom());
    let un = un.mod_floor(&pb).to_u64().unwrap();
    let ud = ud.mod_floor(&pb).to_u64().unwrap();
    let ud_inv = mod_pow(ud, p as u64 - 2, p as u64);
    (vn - vd, ((un * ud_inv) % p as u64) as u32)
}

fn mod_pow(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc
}

/// Legendre symbol of `a` modulo the odd prime `p`, by Euler's criterion.
pub fn legendre(a: u64, p: u64) -> i32 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if mod_pow(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fq(q: u32) -> FieldModel {
        FieldModel::finite(q).unwrap()
    }

    #[test]
    fn square_examples() {
        assert!(FieldModel::Rational.is_square(&Scalar::int(4)).unwrap());
        assert!(!FieldModel::Real.is_square(&Scalar::int(-1)).unwrap());
        let f5 = fq(5);
        assert!(!f5.is_square(&f5.from_int(2)).unwrap());
        let q5 = FieldModel::padic(5).unwrap();
        assert!(!q5.is_square(&Scalar::int(5)).unwrap());
        assert!(q5.is_square(&Scalar::int(-1)).unwrap());
        assert!(q5.is_square(&Scalar::rat(4, 25)).unwrap());
    }

    #[test]
    fn zero_and_bad_models_rejected() {
        assert_eq!(
            FieldModel::Rational.is_square(&Scalar::int(0)),
            Err(Error::ZeroInput)
        );
        assert_eq!(
            FieldModel::Real.square_class(&Scalar::int(0)),
            Err(Error::ZeroInput)
        );
        assert!(FieldModel::padic(2).is_err());
        assert!(FieldModel::padic(9).is_err());
        assert!(FieldModel::finite(8).is_err());
        assert!(FieldModel::finite(12).is_err());
        assert!(FieldModel::quad_ext(FieldModel::Rational, Scalar::int(4)).is_err());
        assert!(FieldModel::quad_ext(FieldModel::AlgClosed, Scalar::int(-1)).is_err());
    }

    #[test]
    fn square_class_labels() {
        let c = FieldModel::Rational.square_class(&Scalar::int(18)).unwrap();
        assert_eq!(c.rep, Scalar::int(2));
        let c = FieldModel::Rational
            .square_class(&Scalar::rat(-3, 12))
            .unwrap();
        assert_eq!(c.rep, Scalar::int(-1));
        assert_eq!(
            FieldModel::AlgClosed
                .square_class(&Scalar::int(-7))
                .unwrap()
                .name,
            "1"
        );
        let q5 = FieldModel::padic(5).unwrap();
        let c = q5.square_class(&Scalar::int(10)).unwrap();
        assert_eq!(c.name, "up");
        assert_eq!(c.rep, Scalar::int(10));
        assert_eq!(q5.square_class(&Scalar::rat(3, 5)).unwrap().name, "up");
        assert_eq!(q5.square_class(&Scalar::int(2)).unwrap().name, "u");
    }

    #[test]
    fn group_orders() {
        assert_eq!(
            FieldModel::Real.square_class_group_order(),
            Count::Finite(2)
        );
        assert_eq!(
            FieldModel::padic(5).unwrap().square_class_group_order(),
            Count::Finite(4)
        );
        assert_eq!(
            FieldModel::Rational.square_class_group_order(),
            Count::Infinite
        );
        assert_eq!(fq(7).square_class_group_order(), Count::Finite(2));
        let c = FieldModel::quad_ext(FieldModel::Real, Scalar::int(-1)).unwrap();
        assert_eq!(c.square_class_group_order(), Count::Finite(1));
        let qi = FieldModel::quad_ext(FieldModel::Rational, Scalar::int(-1)).unwrap();
        assert_eq!(qi.square_class_group_order(), Count::Infinite);
    }

    #[test]
    fn prime_power_field_arithmetic() {
        let f9 = fq(9);
        let elems = f9.elements().unwrap();
        assert_eq!(elems.len(), 9);
        for a in &elems {
            for b in &elems {
                let s = f9.add(a, b);
                assert_eq!(f9.sub(&s, b), *a);
            }
            if !f9.is_zero(a) {
                assert_eq!(f9.mul(a, &f9.inv(a).unwrap()), f9.one());
            }
        }
        // F_9 has a square root of -1.
        assert!(f9.minus_one_is_square().unwrap());
        let squares = elems[1..]
            .iter()
            .filter(|x| f9.is_square(x).unwrap())
            .count();
        assert_eq!(squares, 4);
    }

    #[test]
    fn gaussian_rationals() {
        let qi = FieldModel::quad_ext(FieldModel::Rational, Scalar::int(-1)).unwrap();
        let i = qi.sqrt_generator().unwrap();
        assert_eq!(qi.mul(&i, &i), qi.from_int(-1));
        assert!(qi.is_square(&qi.from_int(-1)).unwrap());
        // 2i = (1 + i)²
        let two_i = qi.mul(&qi.from_int(2), &i);
        assert!(qi.is_square(&two_i).unwrap());
        let r = qi.sqrt(&two_i).unwrap();
        assert_eq!(qi.mul(&r, &r), two_i);
        assert!(!qi.is_square(&qi.from_int(3)).unwrap());
        assert!(!qi.is_square(&i).unwrap());
        // -3 = (√-1 · √3)² fails in Q(i) but 3·(-1)... only the norm route decides.
        assert!(!qi.is_square(&qi.from_int(2)).unwrap());
    }

    #[test]
    fn quadratic_extension_of_finite_field() {
        let f3 = fq(3);
        let f9 = FieldModel::quad_ext(f3.clone(), f3.from_int(2)).unwrap();
        assert_eq!(f9.order(), Some(9));
        let elems = f9.elements().unwrap();
        let squares: Vec<_> = elems[1..]
            .iter()
            .filter(|x| f9.is_square(x).unwrap())
            .collect();
        assert_eq!(squares.len(), 4);
        for s in squares {
            let r = f9.sqrt(s).unwrap();
            assert_eq!(f9.mul(&r, &r), *s);
        }
    }
}
