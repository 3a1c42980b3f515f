//! Finite Abelian groups presented as products of cyclic groups.
//!
//! A group `Z_{d1} x ... x Z_{dk}` is stored exactly as the user gave it. Its
//! elements are encoded as mixed-radix indices with the first factor most
//! significant, so the natural order on [`Element`] is the lexicographic order
//! on coordinate vectors. The canonical invariant-factor chain is available as
//! a separate view and never changes the coordinates.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default cap on the group order.
pub const DEFAULT_MAX_ORDER: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("invalid group spec: factor {0} is smaller than 2")]
    InvalidFactor(u64),
    #[error("group order {order} exceeds the configured maximum {max}")]
    TooLarge { order: u128, max: u64 },
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("element {0} does not belong to this group")]
    NotAnElement(String),
}

/// A group element, identified by its position in the lexicographic
/// enumeration of the group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Element(u32);

impl Element {
    pub const ZERO: Element = Element(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn from_index(index: usize) -> Self {
        Element(index as u32)
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// The list of cyclic orders a group is built from.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSpec {
    pub factors: Vec<u64>,
}

impl GroupSpec {
    pub fn new(factors: Vec<u64>) -> Result<Self, GroupError> {
        if let Some(&bad) = factors.iter().find(|&&d| d < 2) {
            return Err(GroupError::InvalidFactor(bad));
        }
        Ok(GroupSpec { factors })
    }

    pub fn order(&self) -> u128 {
        self.factors.iter().map(|&d| d as u128).product()
    }

    /// Invariant factors `d1 | d2 | ... | dk`, ascending.
    pub fn invariant_factors(&self) -> Vec<u64> {
        invariant_factors(&self.factors)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "Z1");
        }
        let mut first = true;
        for d in &self.factors {
            if !first {
                write!(f, "x")?;
            }
            first = false;
            write!(f, "Z{d}")?;
        }
        Ok(())
    }
}

impl FromStr for GroupSpec {
    type Err = GroupError;

    /// Accepts `Z4xZ2`, `Z2^3`, `z2^2xZ3` or a comma list `4,2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SpecParser::new(s).parse()
    }
}

struct SpecParser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> SpecParser<'a> {
    fn new(s: &'a str) -> Self {
        SpecParser {
            bytes: s.as_bytes(),
            pos: 0,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, GroupError> {
        Err(GroupError::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).map(|b| b.to_ascii_lowercase())
    }

    fn number(&mut self) -> Result<u64, GroupError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        match text.parse::<u64>() {
            Ok(v) => Ok(v),
            Err(_) => {
                self.pos = start;
                self.err("number out of range")
            }
        }
    }

    fn factor(&mut self, factors: &mut Vec<u64>) -> Result<(), GroupError> {
        let start = self.pos;
        let d = self.number()?;
        if d < 2 {
            self.pos = start;
            return self.err(format!("cyclic order {d} is smaller than 2"));
        }
        factors.push(d);
        Ok(())
    }

    fn parse(mut self) -> Result<GroupSpec, GroupError> {
        self.skip_ws();
        let mut factors = Vec::new();
        match self.peek() {
            None => return self.err("empty group spec"),
            Some(b'0'..=b'9') => loop {
                self.factor(&mut factors)?;
                self.skip_ws();
                match self.peek() {
                    None => break,
                    Some(b',') => self.pos += 1,
                    Some(_) => return self.err("expected ',' or end of input"),
                }
            },
            Some(_) => loop {
                self.skip_ws();
                if self.peek() != Some(b'z') {
                    return self.err("expected 'Z'");
                }
                self.pos += 1;
                let start = self.pos;
                let d = self.number()?;
                if d < 2 {
                    self.pos = start;
                    return self.err(format!("cyclic order {d} is smaller than 2"));
                }
                self.skip_ws();
                let mut times = 1;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    let start = self.pos;
                    times = self.number()?;
                    if times == 0 {
                        self.pos = start;
                        return self.err("exponent must be positive");
                    }
                }
                if times > 64 {
                    return self.err("exponent too large");
                }
                factors.extend(std::iter::repeat_n(d, times as usize));
                self.skip_ws();
                match self.peek() {
                    None => break,
                    Some(b'x') | Some(b'*') => self.pos += 1,
                    Some(_) => return self.err("expected 'x' or end of input"),
                }
            },
        }
        Ok(GroupSpec { factors })
    }
}

/// Invariant-factor chain of `Z_{f1} x ... x Z_{fk}`, ascending, each dividing the next.
pub fn invariant_factors(factors: &[u64]) -> Vec<u64> {
    // prime -> list of prime-power exponents
    let mut primary: Vec<(u64, Vec<u32>)> = Vec::new();
    for &d in factors {
        for (p, e) in factorize(d) {
            match primary.iter_mut().find(|(q, _)| *q == p) {
                Some((_, exps)) => exps.push(e),
                None => primary.push((p, vec![e])),
            }
        }
    }
    let len = primary.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
    let mut out = vec![1u64; len];
    for (p, exps) in &mut primary {
        exps.sort_unstable_by(|a, b| b.cmp(a));
        for (i, &e) in exps.iter().enumerate() {
            // largest exponent goes to the last invariant factor
            out[len - 1 - i] *= p.pow(e);
        }
    }
    out
}

fn factorize(mut d: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= d {
        let mut e = 0;
        while d.is_multiple_of(p) {
            d /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if d > 1 {
        out.push((d, 1));
    }
    out
}

/// A finite Abelian group `Z_{d1} x ... x Z_{dk}`.
///
/// Immutable once built; the involution list is computed on first use.
#[derive(Debug, Clone)]
pub struct AbelianGroup {
    spec: GroupSpec,
    factors: Vec<u32>,
    strides: Vec<u32>,
    order: u32,
    neg_table: Vec<u32>,
    involutions: OnceLock<Vec<Element>>,
}

impl PartialEq for AbelianGroup {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl Eq for AbelianGroup {}

impl AbelianGroup {
    pub fn new(factors: &[u64]) -> Result<Self, GroupError> {
        Self::from_spec(&GroupSpec::new(factors.to_vec())?)
    }

    pub fn from_spec(spec: &GroupSpec) -> Result<Self, GroupError> {
        Self::with_max_order(spec, DEFAULT_MAX_ORDER)
    }

    pub fn with_max_order(spec: &GroupSpec, max_order: u64) -> Result<Self, GroupError> {
        if let Some(&bad) = spec.factors.iter().find(|&&d| d < 2) {
            return Err(GroupError::InvalidFactor(bad));
        }
        let order = spec.order();
        let cap = max_order.min(u32::MAX as u64);
        if order > cap as u128 {
            return Err(GroupError::TooLarge { order, max: cap });
        }
        let factors: Vec<u32> = spec.factors.iter().map(|&d| d as u32).collect();
        let mut strides = vec![1u32; factors.len()];
        for i in (0..factors.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * factors[i + 1];
        }
        let mut group = AbelianGroup {
            spec: spec.clone(),
            factors,
            strides,
            order: order as u32,
            neg_table: Vec::new(),
            involutions: OnceLock::new(),
        };
        group.neg_table = (0..group.order)
            .map(|i| group.neg_slow(Element(i)).0)
            .collect();
        Ok(group)
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn order(&self) -> usize {
        self.order as usize
    }

    pub fn factors(&self) -> &[u64] {
        &self.spec.factors
    }

    pub fn invariant_factors(&self) -> Vec<u64> {
        self.spec.invariant_factors()
    }

    /// `(Z_2)^m` for some `m >= 1`.
    pub fn is_elementary_2group(&self) -> bool {
        self.order > 1 && self.factors.iter().all(|&d| d == 2)
    }

    pub fn zero(&self) -> Element {
        Element::ZERO
    }

    pub fn contains(&self, a: Element) -> bool {
        a.0 < self.order
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order).map(Element)
    }

    pub fn coords(&self, a: Element) -> Vec<u64> {
        self.factors
            .iter()
            .zip(&self.strides)
            .map(|(&d, &s)| ((a.0 / s) % d) as u64)
            .collect()
    }

    /// Element with the given coordinates; rejects vectors of the wrong
    /// length or residues out of range.
    pub fn element(&self, coords: &[u64]) -> Result<Element, GroupError> {
        if coords.len() != self.factors.len() {
            return Err(GroupError::NotAnElement(format!("{coords:?}")));
        }
        let mut idx = 0u32;
        for ((&c, &d), &s) in coords.iter().zip(&self.factors).zip(&self.strides) {
            if c >= d as u64 {
                return Err(GroupError::NotAnElement(format!("{coords:?}")));
            }
            idx += c as u32 * s;
        }
        Ok(Element(idx))
    }

    /// Human-readable form: `5` in a cyclic group, `(3,1)` otherwise.
    pub fn format(&self, a: Element) -> String {
        let c = self.coords(a);
        if c.len() == 1 {
            c[0].to_string()
        } else {
            let inner: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            format!("({})", inner.join(","))
        }
    }

    pub fn add(&self, a: Element, b: Element) -> Element {
        debug_assert!(self.contains(a) && self.contains(b));
        if self.factors.len() == 1 {
            let s = a.0 + b.0;
            return Element(if s >= self.order { s - self.order } else { s });
        }
        let mut out = 0;
        for (&d, &s) in self.factors.iter().zip(&self.strides) {
            let x = (a.0 / s) % d + (b.0 / s) % d;
            out += if x >= d { x - d } else { x } * s;
        }
        Element(out)
    }

    pub fn neg(&self, a: Element) -> Element {
        Element(self.neg_table[a.index()])
    }

    fn neg_slow(&self, a: Element) -> Element {
        let mut out = 0;
        for (&d, &s) in self.factors.iter().zip(&self.strides) {
            let x = (a.0 / s) % d;
            out += if x == 0 { 0 } else { d - x } * s;
        }
        Element(out)
    }

    pub fn sub(&self, a: Element, b: Element) -> Element {
        self.add(a, self.neg(b))
    }

    pub fn double(&self, a: Element) -> Element {
        self.add(a, a)
    }

    /// `k·a`, with negative `k` meaning `|k|·(-a)`.
    pub fn scale(&self, k: i64, a: Element) -> Element {
        let mut out = 0;
        for (&d, &s) in self.factors.iter().zip(&self.strides) {
            let x = ((a.0 / s) % d) as i128;
            let v = (x * k as i128).rem_euclid(d as i128) as u32;
            out += v * s;
        }
        Element(out)
    }

    pub fn checked_add(&self, a: Element, b: Element) -> Result<Element, GroupError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add(a, b))
    }

    pub fn checked_neg(&self, a: Element) -> Result<Element, GroupError> {
        self.check(a)?;
        Ok(self.neg(a))
    }

    pub fn checked_scale(&self, k: i64, a: Element) -> Result<Element, GroupError> {
        self.check(a)?;
        Ok(self.scale(k, a))
    }

    fn check(&self, a: Element) -> Result<(), GroupError> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(GroupError::NotAnElement(format!("#{}", a.0)))
        }
    }

    pub fn sum_of<I: IntoIterator<Item = Element>>(&self, items: I) -> Element {
        items
            .into_iter()
            .fold(Element::ZERO, |acc, x| self.add(acc, x))
    }

    pub fn checked_sum_of<I: IntoIterator<Item = Element>>(
        &self,
        items: I,
    ) -> Result<Element, GroupError> {
        items
            .into_iter()
            .try_fold(Element::ZERO, |acc, x| self.checked_add(acc, x))
    }

    pub fn is_involution(&self, a: Element) -> bool {
        !a.is_zero() && self.neg(a) == a
    }

    /// Elements of order exactly 2, ascending.
    pub fn involutions(&self) -> &[Element] {
        self.involutions.get_or_init(|| {
            // an involution has every coordinate in {0, d/2}
            let halves: Vec<Option<u32>> = self
                .factors
                .iter()
                .map(|&d| (d % 2 == 0).then_some(d / 2))
                .collect();
            let mut out = vec![0u32];
            for (i, h) in halves.iter().enumerate() {
                if let Some(h) = h {
                    let s = self.strides[i];
                    let more: Vec<u32> = out.iter().map(|&x| x + h * s).collect();
                    out.extend(more);
                }
            }
            out.sort_unstable();
            out.into_iter().skip(1).map(Element).collect()
        })
    }

    /// Number of even cyclic factors (the 2-rank).
    pub fn two_rank(&self) -> usize {
        self.factors.iter().filter(|&&d| d % 2 == 0).count()
    }

    /// `{ b : 2b = a }`, ascending.
    pub fn half_set(&self, a: Element) -> Vec<Element> {
        let mut out = vec![0u32];
        for (&d, &s) in self.factors.iter().zip(&self.strides) {
            let x = (a.0 / s) % d;
            let roots: Vec<u32> = if d % 2 == 1 {
                vec![(x as u64 * (d as u64).div_ceil(2) % d as u64) as u32]
            } else if x.is_multiple_of(2) {
                vec![x / 2, x / 2 + d / 2]
            } else {
                return Vec::new();
            };
            out = out
                .iter()
                .flat_map(|&acc| roots.iter().map(move |&r| acc + r * s))
                .collect();
        }
        out.sort_unstable();
        out.into_iter().map(Element).collect()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.spec.fmt(f)
    }
}

impl FromStr for AbelianGroup {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AbelianGroup::from_spec(&s.parse()?)
    }
}

/// Every Abelian group of order at most `max_order`, once per isomorphism
/// class, given by its invariant-factor chain. Sorted by order, then factors.
pub fn enumerate_groups(max_order: u64) -> Vec<GroupSpec> {
    // chains d1 | d2 | ... are built ascending, so each class appears once
    fn extend(chain: &mut Vec<u64>, product: u64, max_order: u64, out: &mut Vec<GroupSpec>) {
        if !chain.is_empty() {
            out.push(GroupSpec {
                factors: chain.clone(),
            });
        }
        let step = chain.last().copied().unwrap_or(1);
        let mut next = if step == 1 { 2 } else { step };
        while product * next <= max_order {
            chain.push(next);
            extend(chain, product * next, max_order, out);
            chain.pop();
            next += step;
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), 1, max_order, &mut out);
    out.sort_by(|a, b| {
        a.order()
            .cmp(&b.order())
            .then_with(|| a.factors.cmp(&b.factors))
    });
    out
}
