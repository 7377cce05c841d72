//! Ellis-group calculus for skew products in additive notation.
//!
//! An element is a tuple `(theta_1, ..., theta_{k-1}, u)` of endomorphisms of
//! the base torus and a group element. `T^n` embeds as
//! `(Q_1(n)(), ..., Q_{k-1}(n)(), Q_k(n) gamma_0)`, and elements multiply by
//!
//! ```text
//! phi_i = sum_{j=0}^{i} J(i,j) theta'_{i-j} o theta_j          (theta_0 = id)
//! z     = u' + sum_{j=1}^{k-1} J(k,j) theta'_{k-j}(theta_j(gamma_0)) + u
//! ```

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::dynamics::{Kind, SkewSystem};
use crate::error::{Error, Result};
use crate::qfamily::{JTable, QFamily};
use crate::torus::{check_len, rational_to_int, Frac, TorusCoord};

/// An endomorphism of `T^m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum EndoSymbol {
    /// `x -> c x`.
    Scalar(BigInt),
    /// A limit of powers with no finite description; compared by tag only.
    FormalLimit(String),
}

impl EndoSymbol {
    pub fn scalar(c: impl Into<BigInt>) -> Self {
        EndoSymbol::Scalar(c.into())
    }

    fn as_scalar(&self) -> Option<&BigInt> {
        match self {
            EndoSymbol::Scalar(c) => Some(c),
            EndoSymbol::FormalLimit(_) => None,
        }
    }
}

impl fmt::Display for EndoSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EndoSymbol::Scalar(c) => write!(f, "{c}()"),
            EndoSymbol::FormalLimit(tag) => write!(f, "lim[{tag}]"),
        }
    }
}

/// The group element `c gamma_0 + r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupSymbol {
    pub c: BigInt,
    pub r: Vec<Frac>,
}

impl GroupSymbol {
    pub fn generator_multiple(c: impl Into<BigInt>, m: usize) -> Self {
        GroupSymbol { c: c.into(), r: vec![Frac::zero(); m] }
    }

    fn plus(&self, other: &GroupSymbol) -> GroupSymbol {
        GroupSymbol {
            c: &self.c + &other.c,
            r: self.r.iter().zip(&other.r).map(|(a, b)| a.plus(b)).collect(),
        }
    }
}

impl fmt::Display for GroupSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*gamma0", self.c)?;
        if self.r.iter().any(|x| !x.is_zero()) {
            let parts: Vec<String> = self.r.iter().map(Frac::to_string).collect();
            write!(f, " + ({})", parts.join(","))?;
        }
        Ok(())
    }
}

/// The data of a system needed to multiply its Ellis elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllisContext {
    pub kind: Kind,
    pub k: usize,
    pub m: usize,
    pub jtable: JTable,
    pub qfamily: QFamily,
}

impl EllisContext {
    pub fn from_system(system: &SkewSystem) -> Arc<Self> {
        Arc::new(EllisContext {
            kind: system.kind(),
            k: system.k(),
            m: system.m(),
            jtable: system.jtable().clone(),
            qfamily: system.qfamily().clone(),
        })
    }

    fn q_at(&self, i: usize, n: &BigInt) -> Result<BigInt> {
        let v = self.qfamily.poly(i).eval_int(n);
        rational_to_int(&v).ok_or_else(|| Error::NonIntegral { value: v.to_string() })
    }
}

#[derive(Clone, Debug)]
pub struct EllisElement {
    context: Arc<EllisContext>,
    pub thetas: Vec<EndoSymbol>,
    pub u: GroupSymbol,
}

impl PartialEq for EllisElement {
    fn eq(&self, other: &Self) -> bool {
        same_context(&self.context, &other.context) && self.thetas == other.thetas && self.u == other.u
    }
}

impl Eq for EllisElement {}

fn same_context(a: &Arc<EllisContext>, b: &Arc<EllisContext>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl fmt::Display for EllisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for t in &self.thetas {
            write!(f, "{t}, ")?;
        }
        write!(f, "{})", self.u)
    }
}

/// A product that could not be reduced because an operand holds a formal limit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpaqueProduct {
    pub left: EllisElement,
    pub right: EllisElement,
}

impl EllisElement {
    pub fn new(context: Arc<EllisContext>, thetas: Vec<EndoSymbol>, u: GroupSymbol) -> Result<Self> {
        check_len(context.k - 1, thetas.len())?;
        check_len(context.m, u.r.len())?;
        Ok(EllisElement { context, thetas, u })
    }

    pub fn context(&self) -> &Arc<EllisContext> {
        &self.context
    }

    /// `Theta(T^n)`.
    pub fn embed_power(context: &Arc<EllisContext>, n: &BigInt) -> Result<Self> {
        let k = context.k;
        let thetas = (1..k)
            .map(|i| context.q_at(i, n).map(EndoSymbol::Scalar))
            .collect::<Result<_>>()?;
        let u = GroupSymbol::generator_multiple(context.q_at(k, n)?, context.m);
        Ok(EllisElement { context: context.clone(), thetas, u })
    }

    /// The product `self * rhs`, that is `e' e` with `e' = self`.
    pub fn multiply(&self, rhs: &EllisElement) -> Result<EllisElement> {
        if !same_context(&self.context, &rhs.context) {
            return Err(Error::ContextMismatch);
        }
        let (Some(left), Some(right)) = (self.scalars(), rhs.scalars()) else {
            return Err(Error::FormalComposition(Box::new(OpaqueProduct {
                left: self.clone(),
                right: rhs.clone(),
            })));
        };
        let ctx = &self.context;
        let k = ctx.k;
        let one = BigInt::one();
        let theta = |v: &[BigInt], i: usize| -> BigInt { if i == 0 { one.clone() } else { v[i - 1].clone() } };
        let weighted = |i: usize, range: std::ops::RangeInclusive<usize>| -> Result<BigInt> {
            let sum = range.fold(BigRational::zero(), |acc, j| {
                let prod = theta(&left, i - j) * theta(&right, j);
                acc + ctx.jtable.get(i, j) * BigRational::from_integer(prod)
            });
            rational_to_int(&sum).ok_or_else(|| Error::NonIntegral { value: sum.to_string() })
        };
        let thetas = (1..k)
            .map(|i| weighted(i, 0..=i).map(EndoSymbol::Scalar))
            .collect::<Result<_>>()?;
        let cross = if k >= 2 { weighted(k, 1..=k - 1)? } else { BigInt::zero() };
        let mut u = self.u.plus(&rhs.u);
        u.c += cross;
        Ok(EllisElement { context: ctx.clone(), thetas, u })
    }

    fn scalars(&self) -> Option<Vec<BigInt>> {
        self.thetas.iter().map(|t| t.as_scalar().cloned()).collect()
    }

    /// `{kind, k, thetas, u: {c, r}}`; integers that fit in 64 bits are JSON
    /// numbers, larger ones decimal strings.
    pub fn to_json(&self) -> Value {
        let thetas: Vec<Value> = self
            .thetas
            .iter()
            .map(|t| match t {
                EndoSymbol::Scalar(c) => int_to_json(c),
                EndoSymbol::FormalLimit(tag) => json!({ "formal": tag }),
            })
            .collect();
        let r: Vec<String> = self.u.r.iter().map(Frac::to_string).collect();
        json!({
            "kind": self.context.kind.as_str(),
            "k": self.context.k,
            "thetas": thetas,
            "u": { "c": int_to_json(&self.u.c), "r": r },
        })
    }

    pub fn from_json(context: &Arc<EllisContext>, value: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("ellis element: {what}"));
        if value.get("kind").and_then(Value::as_str) != Some(context.kind.as_str())
            || value.get("k").and_then(Value::as_u64) != Some(context.k as u64)
        {
            return Err(Error::ContextMismatch);
        }
        let thetas = value
            .get("thetas")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing thetas"))?
            .iter()
            .map(|t| match t.get("formal") {
                Some(tag) => tag
                    .as_str()
                    .map(|s| EndoSymbol::FormalLimit(s.to_string()))
                    .ok_or_else(|| bad("formal tag must be a string")),
                None => int_from_json(t).map(EndoSymbol::Scalar),
            })
            .collect::<Result<_>>()?;
        let u = value.get("u").ok_or_else(|| bad("missing u"))?;
        let c = int_from_json(u.get("c").ok_or_else(|| bad("missing u.c"))?)?;
        let r = match u.get("r") {
            None => vec![Frac::zero(); context.m],
            Some(r) => r
                .as_array()
                .ok_or_else(|| bad("u.r must be a list"))?
                .iter()
                .map(|s| {
                    s.as_str()
                        .ok_or_else(|| bad("u.r entries must be strings"))
                        .and_then(crate::descriptor::parse_rational)
                        .map(Frac::new)
                })
                .collect::<Result<_>>()?,
        };
        EllisElement::new(context.clone(), thetas, GroupSymbol { c, r })
    }
}

fn int_to_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

fn int_from_json(v: &Value) -> Result<BigInt> {
    if let Some(i) = v.as_i64() {
        return Ok(BigInt::from(i));
    }
    v.as_str()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Parse(format!("expected an integer, found {v}")))
}

/// Outcome of the centre test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentreMembership {
    pub member: bool,
    /// The `n` with `theta_i = Q_i(n)` for all `i`, when one exists.
    pub witness: Option<BigInt>,
}

/// Decides whether `(theta_1, ..., theta_{k-1})` equals `(Q_1(n), ..., Q_{k-1}(n))`
/// for one integer `n`; `u` is unconstrained.
///
/// `n` is solved from the first `i` with `Q_i(1) != 0`, for which
/// `Q_i(n) = n Q_i(1)`, and the remaining entries are then verified.
pub fn centre_membership(e: &EllisElement) -> CentreMembership {
    let reject = CentreMembership { member: false, witness: None };
    let Some(scalars) = e.scalars() else {
        return reject;
    };
    let ctx = &e.context;
    let pivot = (1..ctx.k).find(|&i| !ctx.qfamily.one_step(i).is_zero());
    let n = match pivot {
        None => BigInt::zero(),
        Some(i) => {
            let ratio = BigRational::from_integer(scalars[i - 1].clone()) / ctx.qfamily.one_step(i);
            match rational_to_int(&ratio) {
                Some(n) => n,
                None => return reject,
            }
        }
    };
    let matches = (1..ctx.k).all(|i| ctx.q_at(i, &n).is_ok_and(|q| q == scalars[i - 1]));
    if matches {
        CentreMembership { member: true, witness: Some(n) }
    } else {
        reject
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureCheck {
    pub product_equal: bool,
    pub witness: Option<BigInt>,
}

impl ClosureCheck {
    pub fn holds(&self, expected: &BigInt) -> bool {
        self.product_equal && self.witness.as_ref() == Some(expected)
    }
}

/// Checks `Theta(T^a) Theta(T^b) = Theta(T^{a+b})` and that the product lies
/// in the centre with witness `a + b`.
pub fn centre_closure_check(context: &Arc<EllisContext>, a: &BigInt, b: &BigInt) -> Result<ClosureCheck> {
    let product = EllisElement::embed_power(context, a)?.multiply(&EllisElement::embed_power(context, b)?)?;
    let sum = a + b;
    let expected = EllisElement::embed_power(context, &sum)?;
    Ok(ClosureCheck {
        product_equal: product == expected,
        witness: centre_membership(&product).witness,
    })
}
