//! Derived-constant calculators for growth bound propagation.
//!
//! Each calculator evaluates one closed-form recipe for turning known
//! growth constants into new ones: passing through direct products,
//! bounded-to-one projections, finite index supergroups, approximate
//! group size bounds, triple-product lower bounds, growth-rate lower
//! bounds, the quasi-tree displacement-gap constants, and the bounded
//! loxodromic-power rescaling.
//!
//! Values are exact rationals whenever the exponents involved are
//! integers, and floats otherwise.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoundsError {
    #[error("{0}")]
    Domain(String),
    #[error("cannot parse `{0}` as a rational (use p/q or a decimal)")]
    BadRational(String),
}

/// Exact when the defining formula only involves integer powers of the
/// inputs, float otherwise.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(BigRational),
    Approx(f64),
}

impl Scalar {
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Scalar::Approx(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Approx(_) => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) if r.is_integer() => write!(f, "{}", r.to_integer()),
            Scalar::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Approx(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

fn pow_int(base: &BigRational, e: &BigInt) -> BigRational {
    let mut acc = BigRational::one();
    let mut k = e.magnitude().to_u64().expect("moderate exponent");
    while k > 0 {
        acc *= base;
        k -= 1;
    }
    if e.is_negative() {
        acc.recip()
    } else {
        acc
    }
}

/// `base^exp`: exact when `exp` is an integer, float otherwise.
fn pow_scalar(base: &BigRational, exp: &BigRational) -> Scalar {
    if exp.is_integer() {
        Scalar::Exact(pow_int(base, &exp.to_integer()))
    } else {
        Scalar::Approx(
            base.to_f64()
                .unwrap_or(f64::NAN)
                .powf(exp.to_f64().unwrap_or(f64::NAN)),
        )
    }
}

fn require_positive(name: &str, v: &BigRational) -> Result<(), BoundsError> {
    if v.is_positive() {
        Ok(())
    } else {
        Err(BoundsError::Domain(format!("{name} must be positive")))
    }
}

/// A calculator request with its inputs.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundRequest {
    /// Triple-product lower bound `(α^β/8)^{1/3}·s^{1+β/6}` for `|U| = s`.
    Helfgott {
        alpha: BigRational,
        beta: BigRational,
        size: BigRational,
    },
    /// Size bound `k^{⌈2/β⌉−1}/α²` for a k-approximate group with growth.
    ApproxBound {
        k: BigRational,
        alpha: BigRational,
        beta: BigRational,
    },
    /// Growth-rate lower bound `(1+αs)^{β/(⌈1/α⌉+1)}` for `|S| = s`.
    UegRate {
        alpha: BigRational,
        beta: BigRational,
        size: BigRational,
    },
    /// Constants `(α^m, β/m)` for an m-factor direct product.
    Factors {
        alpha: BigRational,
        beta: BigRational,
        m: u32,
    },
    /// Constant `α/k` under a k-to-1 projection.
    BoundedToOne { alpha: BigRational, k: BigRational },
    /// Constants `(α/(2^{m/β}·d), β/m)` with `m = 2d!+1` for an index-d
    /// supergroup.
    Supergroup {
        alpha: BigRational,
        beta: BigRational,
        d: u32,
    },
    /// Quasi-tree displacement-gap constants `α = Δ²/(10⁵²N₀⁶κ₀²)`,
    /// `K = 10¹⁴κ₀`.
    KChoice {
        delta: BigRational,
        kappa0: BigRational,
        n0: BigRational,
    },
    /// Constants `(α, β/k)` when a loxodromic appears in `U^k`.
    ShortLox {
        alpha: BigRational,
        beta: BigRational,
        k: u32,
    },
}

/// Named output scalars of one calculator run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundResult {
    pub kind: &'static str,
    pub values: Vec<(String, Scalar)>,
}

impl BoundResult {
    pub fn get(&self, name: &str) -> Option<&Scalar> {
        self.values.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }
}

fn ceil_ratio(r: &BigRational) -> BigInt {
    r.ceil().to_integer()
}

fn factorial(d: u32) -> BigInt {
    (1..=d).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Evaluates one calculator request.
pub fn bound_calculator(request: &BoundRequest) -> Result<BoundResult, BoundsError> {
    match request {
        BoundRequest::Helfgott { alpha, beta, size } => {
            require_positive("alpha", alpha)?;
            require_positive("beta", beta)?;
            require_positive("size", size)?;
            // (α^β/8)^{1/3} · s^{1+β/6}
            let a = alpha.to_f64().unwrap_or(f64::NAN);
            let b = beta.to_f64().unwrap_or(f64::NAN);
            let s = size.to_f64().unwrap_or(f64::NAN);
            let value = (a.powf(b) / 8.0).powf(1.0 / 3.0) * s.powf(1.0 + b / 6.0);
            Ok(BoundResult {
                kind: "helfgott",
                values: vec![("triple_lower_bound".into(), Scalar::Approx(value))],
            })
        }
        BoundRequest::ApproxBound { k, alpha, beta } => {
            require_positive("k", k)?;
            require_positive("alpha", alpha)?;
            require_positive("beta", beta)?;
            let e = ceil_ratio(&(BigRational::from_integer(BigInt::from(2)) / beta))
                - BigInt::one();
            let num = pow_int(k, &e);
            let den = pow_int(alpha, &BigInt::from(2));
            Ok(BoundResult {
                kind: "approx_bound",
                values: vec![("size_bound".into(), Scalar::Exact(num / den))],
            })
        }
        BoundRequest::UegRate { alpha, beta, size } => {
            require_positive("alpha", alpha)?;
            require_positive("beta", beta)?;
            require_positive("size", size)?;
            let base = BigRational::one() + alpha * size;
            let m = ceil_ratio(&alpha.recip()) + BigInt::one();
            let exp = beta / BigRational::from_integer(m);
            Ok(BoundResult {
                kind: "ueg_rate",
                values: vec![("rate".into(), pow_scalar(&base, &exp))],
            })
        }
        BoundRequest::Factors { alpha, beta, m } => {
            require_positive("alpha", alpha)?;
            require_positive("beta", beta)?;
            if *m == 0 {
                return Err(BoundsError::Domain("m must be at least 1".into()));
            }
            Ok(BoundResult {
                kind: "factors",
                values: vec![
                    (
                        "alpha".into(),
                        Scalar::Exact(pow_int(alpha, &BigInt::from(*m))),
                    ),
                    (
                        "beta".into(),
                        Scalar::Exact(beta / BigRational::from_integer(BigInt::from(*m))),
                    ),
                ],
            })
        }
        BoundRequest::BoundedToOne { alpha, k } => {
            require_positive("alpha", alpha)?;
            require_positive("k", k)?;
            Ok(BoundResult {
                kind: "bounded_to_one",
                values: vec![("alpha".into(), Scalar::Exact(alpha / k))],
            })
        }
        BoundRequest::Supergroup { alpha, beta, d } => {
            require_positive("alpha", alpha)?;
            require_positive("beta", beta)?;
            if *d == 0 || *d > 6 {
                return Err(BoundsError::Domain(
                    "d must be between 1 and 6 (m = 2d!+1 grows factorially)".into(),
                ));
            }
            let m = BigInt::from(2) * factorial(*d) + BigInt::one();
            let m_rat = BigRational::from_integer(m.clone());
            let exp = &m_rat / beta;
            let two = BigRational::from_integer(BigInt::from(2));
            let d_rat = BigRational::from_integer(BigInt::from(*d));
            let new_alpha = match pow_scalar(&two, &exp) {
                Scalar::Exact(p) => Scalar::Exact(alpha / (p * &d_rat)),
                Scalar::Approx(p) => Scalar::Approx(
                    alpha.to_f64().unwrap_or(f64::NAN)
                        / (p * d_rat.to_f64().unwrap_or(f64::NAN)),
                ),
            };
            Ok(BoundResult {
                kind: "supergroup",
                values: vec![
                    ("m".into(), Scalar::Exact(m_rat.clone())),
                    ("alpha".into(), new_alpha),
                    ("beta".into(), Scalar::Exact(beta / &m_rat)),
                ],
            })
        }
        BoundRequest::KChoice { delta, kappa0, n0 } => {
            require_positive("delta", delta)?;
            require_positive("kappa0", kappa0)?;
            if n0 < &BigRational::one() {
                return Err(BoundsError::Domain("n0 must be at least 1".into()));
            }
            if kappa0 < delta {
                return Err(BoundsError::Domain("kappa0 must be at least delta".into()));
            }
            let ten = BigRational::from_integer(BigInt::from(10));
            let alpha = pow_int(delta, &BigInt::from(2))
                / (pow_int(&ten, &BigInt::from(52))
                    * pow_int(n0, &BigInt::from(6))
                    * pow_int(kappa0, &BigInt::from(2)));
            let big_k = pow_int(&ten, &BigInt::from(14)) * kappa0;
            Ok(BoundResult {
                kind: "kchoice",
                values: vec![
                    ("alpha".into(), Scalar::Exact(alpha)),
                    ("K".into(), Scalar::Exact(big_k)),
                ],
            })
        }
        BoundRequest::ShortLox { alpha, beta, k } => {
            require_positive("alpha", alpha)?;
            require_positive("beta", beta)?;
            if *k == 0 {
                return Err(BoundsError::Domain("k must be at least 1".into()));
            }
            Ok(BoundResult {
                kind: "shortlox",
                values: vec![
                    ("alpha".into(), Scalar::Exact(alpha.clone())),
                    (
                        "beta".into(),
                        Scalar::Exact(beta / BigRational::from_integer(BigInt::from(*k))),
                    ),
                ],
            })
        }
    }
}

/// Parses `p/q` or a decimal literal into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational, BoundsError> {
    let s = s.trim();
    let bad = || BoundsError::BadRational(s.to_owned());
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" || int == "+" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| bad())?
        };
        let scale = pow_int(
            &BigRational::from_integer(BigInt::from(10)),
            &BigInt::from(frac.len()),
        );
        let frac_part: BigInt = frac.parse().map_err(|_| bad())?;
        let frac_rat = BigRational::from_integer(frac_part) / scale;
        let magnitude = BigRational::from_integer(int_part.magnitude().clone().into()) + frac_rat;
        return Ok(if negative { -magnitude } else { magnitude });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}
