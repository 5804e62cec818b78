//! Text forms of field models and involutions.
//!
//! Fields: `Q`, `R`, `Qp:5`, `Fq:7`, `Cbar`, and `base(sqrt:d)` (nestable).
//! Involutions: `antidiag`, `symplectic`, `blockJ:n=4,i=1`, `Lx:m=2,x=2`,
//! `transpose-inverse`, `inner:[[0,1],[-1,0]]`.
//! Display and parsing round-trip.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::group::NamedInvolution;
use crate::{Error, FieldModel, Result};

fn parse_err(position: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        position,
        message: message.into(),
    }
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(parse_err(self.pos, format!("expected `{token}`")))
        }
    }

    fn skip_ws(&mut self) {
        while self.rest().starts_with(' ') {
            self.pos += 1;
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        let mut len = 0;
        let bytes = self.rest().as_bytes();
        if matches!(bytes.first(), Some(b'-') | Some(b'+')) {
            len += 1;
        }
        while bytes.get(len).is_some_and(u8::is_ascii_digit) {
            len += 1;
        }
        let text = &self.rest()[..len];
        let v = text
            .parse::<BigInt>()
            .map_err(|_| parse_err(start, "expected an integer"))?;
        self.pos += len;
        Ok(v)
    }

    fn unsigned(&mut self) -> Result<u32> {
        let start = self.pos;
        let v = self.integer()?;
        u32::try_from(v).map_err(|_| parse_err(start, "expected a small positive integer"))
    }

    fn rational(&mut self) -> Result<BigRational> {
        let num = self.integer()?;
        if self.eat("/") {
            let at = self.pos;
            let den = self.integer()?;
            if den.is_zero() {
                return Err(parse_err(at, "zero denominator"));
            }
            Ok(BigRational::new(num, den))
        } else {
            Ok(BigRational::from_integer(num))
        }
    }

    fn finish(&self) -> Result<()> {
        if self.rest().is_empty() {
            Ok(())
        } else {
            Err(parse_err(
                self.pos,
                format!("unexpected trailing input `{}`", self.rest()),
            ))
        }
    }
}

fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for FieldModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldModel::Rational => f.write_str("Q"),
            FieldModel::Real => f.write_str("R"),
            FieldModel::Padic { p, .. } => write!(f, "Qp:{p}"),
            FieldModel::Finite(gf) => write!(f, "Fq:{}", gf.order()),
            FieldModel::QuadExt { base, d } => write!(f, "{base}(sqrt:{})", base.format(d)),
            FieldModel::AlgClosed => f.write_str("Cbar"),
        }
    }
}

impl FromStr for FieldModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<FieldModel> {
        let mut cur = Cursor::new(s.trim());
        let mut field = if cur.eat("Qp:") {
            let at = cur.pos;
            FieldModel::padic(cur.unsigned()?).map_err(|e| parse_err(at, e.to_string()))?
        } else if cur.eat("Fq:") {
            let at = cur.pos;
            FieldModel::finite(cur.unsigned()?).map_err(|e| parse_err(at, e.to_string()))?
        } else if cur.eat("Cbar") {
            FieldModel::AlgClosed
        } else if cur.eat("Q") {
            FieldModel::Rational
        } else if cur.eat("R") {
            FieldModel::Real
        } else {
            return Err(parse_err(0, "expected one of Q, R, Qp:<p>, Fq:<q>, Cbar"));
        };
        while cur.eat("(") {
            cur.expect("sqrt:")?;
            let at = cur.pos;
            let d = cur.rational()?;
            cur.expect(")")?;
            let d = field
                .from_rational(&d)
                .map_err(|e| parse_err(at, e.to_string()))?;
            field = FieldModel::quad_ext(field, d).map_err(|e| parse_err(at, e.to_string()))?;
        }
        cur.finish()?;
        Ok(field)
    }
}

impl fmt::Display for NamedInvolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedInvolution::AntiDiag => f.write_str("antidiag"),
            NamedInvolution::Symplectic2 => f.write_str("symplectic"),
            NamedInvolution::BlockJ { n, i } => write!(f, "blockJ:n={n},i={i}"),
            NamedInvolution::Lx { m, x } => write!(f, "Lx:m={m},x={}", format_rational(x)),
            NamedInvolution::TransposeInverse => f.write_str("transpose-inverse"),
            NamedInvolution::Inner(rows) => {
                let rows: Vec<String> = rows
                    .iter()
                    .map(|r| {
                        format!(
                            "[{}]",
                            r.iter().map(format_rational).collect::<Vec<_>>().join(",")
                        )
                    })
                    .collect();
                write!(f, "inner:[{}]", rows.join(","))
            }
        }
    }
}

impl FromStr for NamedInvolution {
    type Err = Error;

    fn from_str(s: &str) -> Result<NamedInvolution> {
        let mut cur = Cursor::new(s.trim());
        let inv = if cur.eat("antidiag") {
            NamedInvolution::AntiDiag
        } else if cur.eat("symplectic") {
            NamedInvolution::Symplectic2
        } else if cur.eat("transpose-inverse") {
            NamedInvolution::TransposeInverse
        } else if cur.eat("blockJ:") {
            cur.expect("n=")?;
            let n = cur.unsigned()? as usize;
            cur.expect(",i=")?;
            let at = cur.pos;
            let i = cur.unsigned()? as usize;
            if i == 0 || 2 * i > n {
                return Err(parse_err(
                    at,
                    format!("blockJ needs 1 <= i <= n/2, got n={n}, i={i}"),
                ));
            }
            NamedInvolution::BlockJ { n, i }
        } else if cur.eat("Lx:") {
            cur.expect("m=")?;
            let at = cur.pos;
            let m = cur.unsigned()? as usize;
            if m == 0 {
                return Err(parse_err(at, "Lx needs m >= 1"));
            }
            cur.expect(",x=")?;
            let at = cur.pos;
            let x = cur.rational()?;
            if x.is_zero() {
                return Err(parse_err(at, "Lx needs x nonzero"));
            }
            NamedInvolution::Lx { m, x }
        } else if cur.eat("inner:") {
            let start = cur.pos;
            let mut rows = Vec::new();
            cur.expect("[")?;
            loop {
                cur.skip_ws();
                cur.expect("[")?;
                let mut row = Vec::new();
                loop {
                    cur.skip_ws();
                    row.push(cur.rational()?);
                    cur.skip_ws();
                    if !cur.eat(",") {
                        break;
                    }
                }
                cur.expect("]")?;
                rows.push(row);
                cur.skip_ws();
                if !cur.eat(",") {
                    break;
                }
            }
            cur.expect("]")?;
            let n = rows.len();
            if rows.iter().any(|r| r.len() != n) {
                return Err(parse_err(start, "inner matrix must be square"));
            }
            NamedInvolution::Inner(rows)
        } else {
            return Err(parse_err(
                0,
                "expected antidiag, symplectic, blockJ:n=N,i=I, Lx:m=M,x=X, transpose-inverse or inner:[[..]]",
            ));
        };
        cur.finish()?;
        Ok(inv)
    }
}
