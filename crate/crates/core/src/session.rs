//! Session configuration and expression evaluation.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::analytic::{self, apply_restricted, log1p_series, pow1p_series, AnalyticFunction};
use crate::coeff::{CoeffMode, Tolerance};
use crate::error::{Error, Result};
use crate::exponent::{Bound, Exponent};
use crate::oexp::{olog, oexp};
use crate::parse::{parse_expr, parse_polynomial, parse_series, Expr};
use crate::series::{Context, Series};
use crate::valuation::residue;

/// Names reserved by the expression language.
const BUILTINS: [&str; 18] = [
    "exp", "log", "inv", "root", "e", "sin", "cos", "log1p", "pow1p", "log1p_half", "pow1p_half", "res", "v", "trunc",
    "O", "t", "X", "c",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SessionConfig {
    pub dim: usize,
    pub coeff_mode: CoeffMode,
    /// Cutoff used by infinite expansions unless overridden with `trunc`.
    #[serde(serialize_with = "display")]
    pub default_cutoff: Exponent,
    pub seed: u64,
    /// Largest `n` drawn by the E3 suite.
    pub e3_bound: u32,
    /// User polynomials as `(name, source)` pairs.
    pub polys: Vec<(String, String)>,
}

fn display<S: serde::Serializer, T: fmt::Display>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

impl SessionConfig {
    /// Default cutoff for dimension `d`: `12` when `d = 1`, `[12,0,…,0]`
    /// otherwise.
    pub fn default_order(dim: usize) -> Exponent {
        let mut v = vec![0i64; dim.max(1)];
        v[0] = 12;
        Exponent::from_ints(&v)
    }

    pub fn new(dim: usize, coeff_mode: CoeffMode) -> Self {
        SessionConfig {
            dim,
            coeff_mode,
            default_cutoff: Self::default_order(dim),
            seed: 0,
            e3_bound: 5,
            polys: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::Config("dimension must be at least 1".into()));
        }
        if let CoeffMode::Real(p) = self.coeff_mode {
            if p < 15 {
                return Err(Error::Config(format!("real precision must be at least 15 digits, got {p}")));
            }
        }
        if self.default_cutoff.dim() != self.dim {
            return Err(Error::dim(self.dim, self.default_cutoff.dim()));
        }
        if !self.default_cutoff.is_positive() {
            return Err(Error::Config(format!(
                "default cutoff must be positive, got {}",
                self.default_cutoff
            )));
        }
        Ok(())
    }

    pub fn ctx(&self) -> Context {
        Context::new(self.dim, self.coeff_mode)
    }

    /// Equality threshold in real mode (unused in rational mode).
    pub fn tolerance(&self) -> Tolerance {
        match self.coeff_mode {
            CoeffMode::Real(p) => Tolerance::for_digits(p),
            CoeffMode::Rational => Tolerance::for_digits(50),
        }
    }
}

impl Default for SessionConfig {
    fn default() -> Self {
        SessionConfig::new(1, CoeffMode::Rational)
    }
}

/// Result of evaluating an expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Series(Series),
    /// A valuation `v(x)`.
    Valuation(Bound),
}

impl Value {
    pub fn into_series(self) -> Result<Series> {
        match self {
            Value::Series(s) => Ok(s),
            Value::Valuation(_) => Err(Error::Domain("v(...) is a value-group element, not a series".into())),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Series(s) => write!(f, "{s}"),
            Value::Valuation(b) => write!(f, "{b}"),
        }
    }
}

/// A validated configuration plus its user polynomials.
#[derive(Clone, Debug)]
pub struct Session {
    config: SessionConfig,
    polys: BTreeMap<String, AnalyticFunction>,
}

impl Session {
    pub fn new(config: SessionConfig) -> Result<Self> {
        config.validate()?;
        let mut polys = BTreeMap::new();
        for (name, src) in &config.polys {
            let valid_name = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid_name {
                return Err(Error::Config(format!("invalid polynomial name `{name}`")));
            }
            if BUILTINS.contains(&name.as_str()) {
                return Err(Error::Config(format!("`{name}` is a built-in name")));
            }
            let p = parse_polynomial(src)?;
            polys.insert(name.clone(), AnalyticFunction::polynomial(name, p)?);
        }
        Ok(Session { config, polys })
    }

    pub fn config(&self) -> &SessionConfig {
        &self.config
    }

    pub fn ctx(&self) -> Context {
        self.config.ctx()
    }

    pub fn parse_series(&self, text: &str) -> Result<Series> {
        parse_series(text, self.ctx())
    }

    pub fn parse_expr(&self, text: &str) -> Result<Expr> {
        parse_expr(text, self.ctx())
    }

    pub fn eval_str(&self, text: &str) -> Result<Value> {
        let e = self.parse_expr(text)?;
        self.eval(&e, &self.config.default_cutoff)
    }

    pub fn eval_series(&self, text: &str) -> Result<Series> {
        self.eval_str(text)?.into_series()
    }

    fn series(&self, e: &Expr, target: &Exponent) -> Result<Series> {
        self.eval(e, target)?.into_series()
    }

    /// Evaluate `e`, using `target` as the cutoff of infinite expansions.
    pub fn eval(&self, e: &Expr, target: &Exponent) -> Result<Value> {
        let ctx = self.ctx();
        let s = match e {
            Expr::Const(c) => Series::constant(ctx, c.clone()),
            Expr::Mono(g) => Series::t_pow(ctx, g.clone()),
            Expr::BigO(g) => Series::big_o(ctx, g.clone()),
            Expr::Neg(a) => self.series(a, target)?.neg(),
            Expr::Add(a, b) => self.series(a, target)?.add(&self.series(b, target)?)?,
            Expr::Sub(a, b) => self.series(a, target)?.sub(&self.series(b, target)?)?,
            Expr::Mul(a, b) => self.series(a, target)?.mul(&self.series(b, target)?)?,
            Expr::Div(a, b) => {
                let den = self.series(b, target)?.invert(target)?;
                self.series(a, target)?.mul(&den)?
            }
            Expr::Pow(a, q) => self.series(a, target)?.pow_rational(q, target)?,
            Expr::Trunc(a, w) => self.series(a, w)?.truncate(&Bound::Finite(w.clone())),
            Expr::Call { name, params, args } => return self.call(name, params, args, target),
        };
        Ok(Value::Series(s))
    }

    fn call(&self, name: &str, params: &[BigRational], args: &[Expr], target: &Exponent) -> Result<Value> {
        let vals = args
            .iter()
            .map(|a| self.series(a, target))
            .collect::<Result<Vec<Series>>>()?;
        let unary = |vals: &[Series]| -> Result<Series> {
            if vals.len() != 1 {
                return Err(Error::Arity {
                    name: name.to_string(),
                    expected: 1 + params.len(),
                    found: vals.len() + params.len(),
                });
            }
            Ok(vals[0].clone())
        };
        let s = match name {
            "exp" => oexp(&unary(&vals)?, target)?,
            "log" => olog(&unary(&vals)?, target)?,
            "inv" => unary(&vals)?.invert(target)?,
            "root" => {
                let n = params[0]
                    .to_integer()
                    .to_u32()
                    .filter(|&n| params[0].is_integer() && n >= 1)
                    .ok_or_else(|| Error::Domain(format!("root index must be a positive integer, got {}", params[0])))?;
                unary(&vals)?.nth_root(n, target)?
            }
            "log1p" => log1p_series(&unary(&vals)?, target)?,
            "pow1p" => pow1p_series(&params[0], &unary(&vals)?, target)?,
            "pow1p_half" => apply_restricted(&AnalyticFunction::pow1p_half(params[0].clone()), &[unary(&vals)?], target)?,
            "res" => Series::constant(self.ctx(), residue(&unary(&vals)?)?),
            "v" => return Ok(Value::Valuation(unary(&vals)?.valuation()?)),
            other => {
                let f = match analytic::lookup(other) {
                    Some(f) => f,
                    None => self
                        .polys
                        .get(other)
                        .cloned()
                        .ok_or_else(|| Error::UnknownFunction(other.to_string()))?,
                };
                apply_restricted(&f, &vals, target)?
            }
        };
        Ok(Value::Series(s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rational() -> Session {
        Session::new(SessionConfig::default()).unwrap()
    }

    fn with_order(order: i64) -> Session {
        let mut c = SessionConfig::default();
        c.default_cutoff = Exponent::from_ints(&[order]);
        Session::new(c).unwrap()
    }

    #[test]
    fn exp_of_t() {
        let s = with_order(4);
        assert_eq!(s.eval_str("exp(t)").unwrap().to_string(), "1 + t + 1/2*t^2 + 1/6*t^3 + O(t^4)");
    }

    #[test]
    fn residue_outside_ring() {
        assert_eq!(rational().eval_str("res(t^(-1))"), Err(Error::NotInValuationRing));
    }

    #[test]
    fn arithmetic() {
        let s = rational();
        assert_eq!(s.eval_str("(1+t)*(1-t)").unwrap().to_string(), "1 - t^2");
        assert_eq!(s.eval_str("-t^2*3").unwrap().to_string(), "-3*t^2");
        assert_eq!(s.eval_str("t/t").unwrap().to_string(), "1");
        assert_eq!(s.eval_str("root(2, 4*t^2)").unwrap().to_string(), "2*t");
        assert_eq!(s.eval_str("trunc(1/(1-t), 4)").unwrap().to_string(), "1 + t + t^2 + t^3 + O(t^4)");
        assert_eq!(s.eval_str("(1+t)^(1/2)").unwrap().to_string(), s.eval_str("pow1p(1/2, t)").unwrap().to_string());
        assert_eq!(s.eval_str("v(t^(1/2) + t)").unwrap().to_string(), "1/2");
        assert_eq!(s.eval_str("v(0)").unwrap().to_string(), "+inf");
        assert_eq!(s.eval_str("res(3 + t)").unwrap().to_string(), "3");
        assert_eq!(s.eval_str("e(2)").unwrap().to_string(), "0");
        assert!(matches!(s.eval_str("foo(t)"), Err(Error::UnknownFunction(_))));
        assert!(matches!(s.eval_str("exp(t, t)"), Err(Error::Arity { .. })));
        assert!(matches!(s.eval_str("v(t) + 1"), Err(Error::Domain(_))));
    }

    #[test]
    fn user_polynomials() {
        let mut c = SessionConfig::default();
        c.polys.push(("f".into(), "X1*X2 + X1^2".into()));
        let s = Session::new(c).unwrap();
        assert_eq!(s.eval_str("f(t, 1/2 + t)").unwrap().to_string(), "1/2*t + 2*t^2");
        let mut bad = SessionConfig::default();
        bad.polys.push(("exp".into(), "X1".into()));
        assert!(matches!(Session::new(bad), Err(Error::Config(_))));
    }

    #[test]
    fn config_validation() {
        let mut c = SessionConfig::new(1, CoeffMode::Real(10));
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        c.coeff_mode = CoeffMode::Real(15);
        assert!(c.validate().is_ok());
        c.default_cutoff = Exponent::from_ints(&[0]);
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        let c = SessionConfig::new(2, CoeffMode::Rational);
        assert_eq!(c.default_cutoff, Exponent::from_ints(&[12, 0]));
        assert!(c.validate().is_ok());
    }
}
