//! Affine expressions in named integer symbols, for crossed entries such as
//! `1+v` or `v+w-3`.
//!
//! Every crossed entry produced by the classifiers is the sum of the
//! sources' crossed entries plus a constant that depends only on labels, so
//! a result computed at one value of the symbols lifts to all values.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::pmodule::{parse_spec, Labels, PModuleSpec};
use crate::scalar::Scalar;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Affine<T> {
    constant: T,
    terms: BTreeMap<String, T>,
}

impl<T: Scalar> Affine<T> {
    pub fn constant(c: T) -> Self {
        Affine {
            constant: c,
            terms: BTreeMap::new(),
        }
    }

    pub fn symbol(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(name.to_string(), T::one());
        Affine {
            constant: T::zero(),
            terms,
        }
    }

    pub fn constant_part(&self) -> &T {
        &self.constant
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, name: &str) -> T {
        self.terms.get(name).cloned().unwrap_or_else(T::zero)
    }

    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        self.terms.keys().map(String::as_str)
    }

    /// The expression with its constant removed.
    pub fn symbolic_part(&self) -> Self {
        Affine {
            constant: T::zero(),
            terms: self.terms.clone(),
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut out = Affine::constant(self.constant.clone() * c.clone());
        for (s, v) in &self.terms {
            out.push_term(s, v.clone() * c.clone());
        }
        out
    }

    pub fn eval(&self, values: &BTreeMap<String, T>) -> Option<T> {
        self.terms.iter().try_fold(self.constant.clone(), |acc, (s, c)| {
            values.get(s).map(|v| acc + c.clone() * v.clone())
        })
    }

    fn push_term(&mut self, name: &str, c: T) {
        let entry = self.terms.entry(name.to_string()).or_insert_with(T::zero);
        *entry = entry.clone() + c;
        if self.terms[name].is_zero() {
            self.terms.remove(name);
        }
    }

    /// Parses sums of integers and optionally scaled symbols: `1+v`,
    /// `v+w-3`, `-2v+1`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = Affine::constant(T::zero());
        let chars: Vec<(usize, char)> = text.char_indices().collect();
        let skip_ws = |mut i: usize| {
            while i < chars.len() && chars[i].1.is_whitespace() {
                i += 1;
            }
            i
        };
        let mut i = skip_ws(0);
        if i == chars.len() {
            return Err(Error::parse(0, "empty expression"));
        }
        let mut first = true;
        while i < chars.len() {
            let mut sign = 1;
            if chars[i].1 == '+' || chars[i].1 == '-' {
                if chars[i].1 == '-' {
                    sign = -1;
                }
                i = skip_ws(i + 1);
            } else if !first {
                return Err(Error::parse(chars[i].0, "expected '+' or '-'"));
            }
            first = false;
            let digits_start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[digits_start..i].iter().map(|c| c.1).collect();
            let name_start = i;
            while i < chars.len() && (chars[i].1.is_ascii_alphabetic() || chars[i].1 == '_') {
                i += 1;
            }
            let name: String = chars[name_start..i].iter().map(|c| c.1).collect();
            if digits.is_empty() && name.is_empty() {
                let pos = chars.get(i).map_or(text.len(), |c| c.0);
                return Err(Error::parse(pos, "expected an integer or a symbol"));
            }
            let value = if digits.is_empty() {
                1
            } else {
                digits
                    .parse::<i64>()
                    .map_err(|_| Error::parse(chars[digits_start].0, "integer out of range"))?
            };
            let c = T::from_int(sign * value);
            if name.is_empty() {
                out.constant = out.constant + c;
            } else {
                out.push_term(&name, c);
            }
            i = skip_ws(i);
        }
        Ok(out)
    }
}

impl<T: Scalar> Add for Affine<T> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self.constant = self.constant + rhs.constant;
        for (s, c) in rhs.terms {
            self.push_term(&s, c);
        }
        self
    }
}

impl<T: Scalar> Neg for Affine<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(&-T::one())
    }
}

impl<T: Scalar> Sub for Affine<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: Scalar> fmt::Display for Affine<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (s, c) in &self.terms {
            let negative = *c < T::zero();
            let mag = if negative { -c.clone() } else { c.clone() };
            if negative {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            if !mag.is_one() {
                write!(f, "{mag}")?;
            }
            write!(f, "{s}")?;
            first = false;
        }
        if first {
            return write!(f, "{}", self.constant);
        }
        if self.constant < T::zero() {
            write!(f, "-{}", -self.constant.clone())
        } else if !self.constant.is_zero() {
            write!(f, "+{}", self.constant)
        } else {
            Ok(())
        }
    }
}

/// Solution set of `expr = 0` over the integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Condition<T> {
    Never,
    Always,
    /// `symbol = value`.
    Value(String, T),
    /// A relation among several symbols, `lhs = rhs`.
    Relation(Affine<T>, T),
}

impl<T: Scalar> Condition<T> {
    pub fn solve(expr: &Affine<T>) -> Self {
        if expr.is_constant() {
            return if expr.constant.is_zero() {
                Condition::Always
            } else {
                Condition::Never
            };
        }
        let rhs = -expr.constant.clone();
        if expr.terms.len() == 1 {
            let (s, c) = expr.terms.iter().next().unwrap();
            let value = rhs / c.clone();
            return match value.as_integer() {
                Some(_) => Condition::Value(s.clone(), value),
                None => Condition::Never,
            };
        }
        Condition::Relation(expr.symbolic_part(), rhs)
    }
}

impl<T: Scalar> fmt::Display for Condition<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::Never => write!(f, "never"),
            Condition::Always => write!(f, "always"),
            Condition::Value(s, v) => write!(f, "{s} = {v}"),
            Condition::Relation(lhs, rhs) => write!(f, "{lhs} = {rhs}"),
        }
    }
}

/// A bundle whose crossed entry may involve symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicSpec {
    pub crossed: Affine<Rational>,
    pub labels: Labels,
}

impl SymbolicSpec {
    pub fn from_concrete(p: &PModuleSpec) -> Self {
        SymbolicSpec {
            crossed: Affine::constant(Rational::from_int(p.crossed())),
            labels: p.labels().clone(),
        }
    }

    /// Accepts `x<int> o..` and `x[<expr>] o..`.
    pub fn parse(text: &str) -> Result<Self> {
        let trimmed_start = text.len() - text.trim_start().len();
        let rest = &text[trimmed_start..];
        if let Some(after) = rest.strip_prefix("x[") {
            let close = after
                .find(']')
                .ok_or_else(|| Error::parse(trimmed_start + 1, "unclosed '['"))?;
            let inner_pos = trimmed_start + 2;
            let crossed = Affine::<Rational>::parse(&after[..close])
                .map_err(|e| shift_parse_error(e, inner_pos))?;
            if crossed.constant_part().as_integer().is_none() {
                return Err(Error::parse(inner_pos, "crossed entry must be integral"));
            }
            let tail_pos = inner_pos + close + 1;
            // reuse the concrete parser for the labels
            let placeholder = format!("x0{}", &after[close + 1..]);
            let concrete = parse_spec(&placeholder).map_err(|e| shift_parse_error(e, tail_pos - 2))?;
            return Ok(SymbolicSpec {
                crossed,
                labels: concrete.labels().clone(),
            });
        }
        parse_spec(text).map(|p| Self::from_concrete(&p))
    }

    pub fn rank(&self) -> usize {
        self.labels.rank()
    }

    /// The bundle at symbols = 0.
    pub fn base(&self) -> PModuleSpec {
        let k = self.crossed.constant_part().as_integer().expect("checked at construction");
        PModuleSpec::new(k, self.labels.clone()).expect("labels validated")
    }

    pub fn is_concrete(&self) -> bool {
        self.crossed.is_constant()
    }

    /// Condition on the symbols under which the crossed entry equals `k`.
    pub fn crossed_equals(&self, k: &Rational) -> Condition<Rational> {
        Condition::solve(&(self.crossed.clone() - Affine::constant(*k)))
    }
}

fn shift_parse_error(e: Error, by: usize) -> Error {
    match e {
        Error::Parse { pos, msg } => Error::Parse { pos: pos + by, msg },
        other => other,
    }
}

impl fmt::Display for SymbolicSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.crossed.is_constant() {
            write!(f, "x{}", self.crossed)?;
        } else {
            write!(f, "x[{}]", self.crossed)?;
        }
        for a in self.labels.as_slice() {
            write!(f, " o{a}")?;
        }
        Ok(())
    }
}

/// Lifts a result computed at the sources' base points: the crossed entry
/// moves with the symbolic parts of all sources.
pub fn lift(target: &PModuleSpec, sources: &[&SymbolicSpec]) -> SymbolicSpec {
    let mut crossed = Affine::constant(Rational::from_int(target.crossed()));
    for s in sources {
        crossed = crossed + s.crossed.symbolic_part();
    }
    SymbolicSpec {
        crossed,
        labels: target.labels().clone(),
    }
}
