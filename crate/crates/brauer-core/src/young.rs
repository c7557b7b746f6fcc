//! Exact rational combinatorics on diagrams and lattices.
//!
//! Everything here stays in arbitrary-precision rationals; square roots only
//! appear later, in representation matrix entries. The central object is the
//! polynomial `P_λ(x) = Π_{(i,j) ∈ λ} (x - 1 + d(i,j)) / h(i,j)` whose value
//! at `x = 2n + 1` is the dimension of the `SO(2n+1)` irrep labelled by `λ`.

use std::fmt;
use std::str::FromStr;

use num::{BigInt, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::PermutationLattice;
use crate::shape::Shape;
use crate::Rational;

/// The algebra parameter `x` of `B_f(x)`, an exact rational.
///
/// `B_f(x)` is semisimple when `x` is not an integer or is an integer with
/// `x >= f - 1`; the guard refuses the non-semisimple integer range unless
/// explicitly overridden.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalParam {
    value: Rational,
}

impl RationalParam {
    pub fn new(value: Rational) -> Self {
        Self { value }
    }

    pub fn from_integer(v: i64) -> Self {
        Self::new(Rational::from_integer(BigInt::from(v)))
    }

    pub fn ratio(numer: i64, denom: i64) -> Self {
        Self::new(Rational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    pub fn is_semisimple_for(&self, f: usize) -> bool {
        if !self.value.is_integer() {
            return true;
        }
        self.value >= Rational::from_integer(BigInt::from(f as i64 - 1))
    }

    /// Refuses integer `x < f - 1` unless `allow_nonsemisimple` is set.
    pub fn guard(&self, f: usize, allow_nonsemisimple: bool) -> Result<()> {
        if allow_nonsemisimple || self.is_semisimple_for(f) {
            Ok(())
        } else {
            Err(Error::NonSemisimpleParameter {
                x: self.to_string(),
                bound: f as i64 - 1,
            })
        }
    }
}

impl fmt::Display for RationalParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_rational(&self.value))
    }
}

impl FromStr for RationalParam {
    type Err = Error;

    /// Accepts `"p/q"` or a plain integer string.
    fn from_str(s: &str) -> Result<Self> {
        parse_rational(s).map(Self::new)
    }
}

/// `"p/q"` with positive denominator and coprime parts; just `"p"` for
/// integers.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let err = || Error::Parse {
        what: "rational",
        text: s.to_string(),
    };
    if let Some((n, d)) = t.split_once('/') {
        let numer = n.trim().parse::<BigInt>().map_err(|_| err())?;
        let denom = d.trim().parse::<BigInt>().map_err(|_| err())?;
        if denom.is_zero() {
            return Err(err());
        }
        Ok(Rational::new(numer, denom))
    } else {
        let numer = t.parse::<BigInt>().map_err(|_| err())?;
        Ok(Rational::from_integer(numer))
    }
}

/// Polynomial with exact rational coefficients, ascending degree.
/// The zero polynomial is the empty coefficient list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPolynomial {
    coefficients: Vec<Rational>,
}

impl RationalPolynomial {
    pub fn new(mut coefficients: Vec<Rational>) -> Self {
        while coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        Self { coefficients }
    }

    pub fn zero() -> Self {
        Self { coefficients: Vec::new() }
    }

    pub fn one() -> Self {
        Self {
            coefficients: vec![Rational::one()],
        }
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coefficients.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coefficients.is_empty() || other.coefficients.is_empty() {
            return Self::zero();
        }
        let mut out =
            vec![Rational::zero(); self.coefficients.len() + other.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in other.coefficients.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coefficients.len().max(other.coefficients.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let a = self.coefficients.get(k).cloned().unwrap_or_else(Rational::zero);
            let b = other.coefficients.get(k).cloned().unwrap_or_else(Rational::zero);
            out.push(a - b);
        }
        Self::new(out)
    }

    /// Exact division by `(x - root)`; `None` when the remainder is nonzero.
    pub fn div_exact_by_linear(&self, root: &Rational) -> Option<Self> {
        if self.coefficients.is_empty() {
            return Some(Self::zero());
        }
        let mut quotient = vec![Rational::zero(); self.coefficients.len() - 1];
        let mut carry = Rational::zero();
        for k in (0..self.coefficients.len()).rev() {
            let c = &self.coefficients[k] + &carry * root;
            if k == 0 {
                if !c.is_zero() {
                    return None;
                }
            } else {
                quotient[k - 1] = c.clone();
            }
            carry = c;
        }
        Some(Self::new(quotient))
    }
}

impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coefficients.is_empty() {
            return write!(f, "0");
        }
        for (k, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() && self.coefficients.len() > 1 {
                continue;
            }
            if k < self.coefficients.len() - 1 {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            match k {
                0 => write!(f, "{}", format_rational(&a))?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{}*", format_rational(&a))?;
                    }
                    if k == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

fn check_box(shape: &Shape, i: usize, j: usize) -> Result<()> {
    if shape.contains_box(i, j) {
        Ok(())
    } else {
        Err(Error::BoxOutsideDiagram {
            shape: shape.to_string(),
            row: i,
            col: j,
        })
    }
}

/// Hook length `h(i,j) = λ_i + λ'_j - i - j + 1` of a box (1-based).
pub fn hook(shape: &Shape, i: usize, j: usize) -> Result<i64> {
    check_box(shape, i, j)?;
    Ok(shape.row_len(i) as i64 + shape.col_len(j) as i64 - i as i64 - j as i64 + 1)
}

/// The split content function entering `P_λ`:
/// `d(i,j) = λ_i + λ_j - i - j + 1` for `i <= j`, and
/// `d(i,j) = -λ'_i - λ'_j + i + j - 1` for `i > j`.
pub fn dfun(shape: &Shape, i: usize, j: usize) -> Result<i64> {
    check_box(shape, i, j)?;
    Ok(if i <= j {
        shape.row_len(i) as i64 + shape.row_len(j) as i64 - i as i64 - j as i64 + 1
    } else {
        -(shape.col_len(i) as i64) - shape.col_len(j) as i64 + i as i64 + j as i64 - 1
    })
}

/// `P_λ(x) = Π_{(i,j) ∈ λ} (x - 1 + d(i,j)) / h(i,j)` as an exact
/// polynomial; `P_∅ = 1`.
pub fn p_poly(shape: &Shape) -> RationalPolynomial {
    let mut p = RationalPolynomial::one();
    for i in 1..=shape.num_rows() {
        for j in 1..=shape.row_len(i) as usize {
            let d = dfun(shape, i, j).expect("box inside diagram");
            let h = hook(shape, i, j).expect("box inside diagram");
            let factor = RationalPolynomial::new(vec![
                Rational::new(BigInt::from(d - 1), BigInt::from(h)),
                Rational::new(BigInt::one(), BigInt::from(h)),
            ]);
            p = p.mul(&factor);
        }
    }
    p
}

/// `P_λ` evaluated at a fixed rational parameter.
pub fn p_eval(shape: &Shape, x: &RationalParam) -> Rational {
    p_poly(shape).eval(x.value())
}

fn theta(e: i32) -> i64 {
    i64::from(e > 0)
}

/// `∇_i(w) = (w^t_i - w_i - x) + x θ(w_i)`.
pub fn nabla(w: &PermutationLattice, i: usize, x: &RationalParam) -> Result<Rational> {
    if i == 0 || i > w.order() {
        return Err(Error::IndexOutOfRange {
            index: i,
            order: w.order(),
        });
    }
    let wt = w.transpose();
    let e = w.elements()[i - 1];
    let diff = Rational::from_integer(BigInt::from(wt.elements()[i - 1] as i64 - e as i64));
    Ok(diff + x.value() * Rational::from_integer(BigInt::from(theta(e) - 1)))
}

/// Diamond function `◇_i(u, v) = ∇_{i+1}(u) - ∇_i(v)` on two lattices of the
/// same order and diagram.
pub fn diamond(
    u: &PermutationLattice,
    v: &PermutationLattice,
    i: usize,
    x: &RationalParam,
) -> Result<Rational> {
    if u.order() != v.order() || u.shape() != v.shape() {
        return Err(Error::LatticeMismatch);
    }
    if i == 0 || i + 1 > u.order() {
        return Err(Error::IndexOutOfRange {
            index: i,
            order: u.order(),
        });
    }
    Ok(nabla(u, i + 1, x)? - nabla(v, i, x)?)
}

/// Generalized axial distance between positions `i` and `j`:
/// the signed sum of `◇_h(w, w)` over the positions between them.
pub fn axial_distance(
    w: &PermutationLattice,
    i: usize,
    j: usize,
    x: &RationalParam,
) -> Result<Rational> {
    for k in [i, j] {
        if k == 0 || k > w.order() {
            return Err(Error::IndexOutOfRange {
                index: k,
                order: w.order(),
            });
        }
    }
    let (lo, hi, sign) = if i <= j { (i, j, 1) } else { (j, i, -1) };
    let mut acc = Rational::zero();
    for h in lo..hi {
        acc += diamond(w, w, h, x)?;
    }
    Ok(acc * Rational::from_integer(BigInt::from(sign)))
}
