//! Exact truncated power series.
//!
//! [`TruncSeries`] is univariate in `t`; [`MultiSeries`] is a sparse map from
//! exponent vectors to integers over a named variable list, optionally
//! truncated by total degree or by the degree in one variable. Polynomials
//! are untruncated `MultiSeries` and can be read from text such as
//! `"-t - t^2 + (1 - 4t)F - 3F^2"`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::trees::Colour;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncSeries {
    coeffs: Vec<BigInt>,
}

impl TruncSeries {
    /// The zero series known up to `t^order`.
    pub fn zero(order: usize) -> Self {
        TruncSeries {
            coeffs: vec![BigInt::zero(); order + 1],
        }
    }

    pub fn from_coeffs<I: Into<BigInt>, C: IntoIterator<Item = I>>(order: usize, coeffs: C) -> Self {
        let mut s = Self::zero(order);
        for (n, c) in coeffs.into_iter().enumerate().take(order + 1) {
            s.coeffs[n] = c.into();
        }
        s
    }

    /// The series `t`.
    pub fn t(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = BigInt::one();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &BigInt {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn set(&mut self, n: usize, v: BigInt) {
        self.coeffs[n] = v;
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a - b)
    }

    fn zip(&self, o: &Self, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> Self {
        let order = self.order().min(o.order());
        TruncSeries {
            coeffs: (0..=order).map(|n| f(&self.coeffs[n], &o.coeffs[n])).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let order = self.order().min(o.order());
        let mut out = Self::zero(order);
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    out.coeffs[i + j] += a * b;
                }
            }
        }
        out
    }

    pub fn to_multi(&self, var: &str) -> MultiSeries {
        let mut m = MultiSeries::zero(vec![var.to_string()], Trunc::Var(0, self.order()));
        for (n, c) in self.coeffs.iter().enumerate() {
            m.add_term(vec![n as u32], c.clone());
        }
        m
    }

    /// Coefficients as `u64`, panicking on overflow (test helper).
    pub fn to_u64s(&self) -> Vec<u64> {
        self.coeffs
            .iter()
            .map(|c| u64::try_from(c).expect("coefficient fits in u64"))
            .collect()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Trunc {
    None,
    /// Keep monomials of total degree at most N.
    Total(usize),
    /// Keep monomials whose exponent of variable `idx` is at most N.
    Var(usize, usize),
}

impl Trunc {
    fn keeps(self, e: &[u32]) -> bool {
        match self {
            Trunc::None => true,
            Trunc::Total(n) => e.iter().map(|&x| x as usize).sum::<usize>() <= n,
            Trunc::Var(i, n) => e[i] as usize <= n,
        }
    }

    fn meet(self, o: Trunc) -> Trunc {
        match (self, o) {
            (Trunc::None, x) | (x, Trunc::None) => x,
            (Trunc::Total(a), Trunc::Total(b)) => Trunc::Total(a.min(b)),
            (Trunc::Var(i, a), Trunc::Var(j, b)) if i == j => Trunc::Var(i, a.min(b)),
            (a, b) => panic!("incompatible truncations {a:?} and {b:?}"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiSeries {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, BigInt>,
    trunc: Trunc,
}

impl MultiSeries {
    pub fn zero(vars: Vec<String>, trunc: Trunc) -> Self {
        MultiSeries {
            vars,
            terms: BTreeMap::new(),
            trunc,
        }
    }

    pub fn constant(vars: Vec<String>, c: BigInt) -> Self {
        let mut m = Self::zero(vars, Trunc::None);
        let e = vec![0; m.vars.len()];
        m.add_term(e, c);
        m
    }

    pub fn var(vars: Vec<String>, name: &str) -> Result<Self> {
        let idx = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::Parse(format!("unknown variable `{name}`")))?;
        let mut e = vec![0; vars.len()];
        e[idx] = 1;
        let mut m = Self::zero(vars, Trunc::None);
        m.add_term(e, BigInt::one());
        Ok(m)
    }

    /// Parse a polynomial over `vars`.
    pub fn parse(text: &str, vars: &[&str]) -> Result<Self> {
        PolyParser::new(text, vars.iter().map(|s| s.to_string()).collect()).parse()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn trunc(&self) -> Trunc {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> BigInt {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        assert_eq!(e.len(), self.vars.len());
        if c.is_zero() || !self.trunc.keeps(&e) {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn with_trunc(&self, trunc: Trunc) -> Self {
        let mut m = Self::zero(self.vars.clone(), trunc);
        for (e, c) in &self.terms {
            m.add_term(e.clone(), c.clone());
        }
        m
    }

    fn check_vars(&self, o: &Self) {
        assert_eq!(self.vars, o.vars, "series over different variables");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check_vars(o);
        let mut m = self.with_trunc(self.trunc.meet(o.trunc));
        for (e, c) in &o.terms {
            m.add_term(e.clone(), c.clone());
        }
        m
    }

    pub fn neg(&self) -> Self {
        let mut m = self.clone();
        for c in m.terms.values_mut() {
            *c = -c.clone();
        }
        m
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let mut m = Self::zero(self.vars.clone(), self.trunc);
        for (e, c) in &self.terms {
            m.add_term(e.clone(), c * k);
        }
        m
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check_vars(o);
        let mut m = Self::zero(self.vars.clone(), self.trunc.meet(o.trunc));
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                m.add_term(e, c1 * c2);
            }
        }
        m
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.vars.clone(), BigInt::one()).with_trunc(self.trunc);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Group by the exponent of variable `name`; the returned coefficients
    /// live over the remaining variables.
    pub fn split_var(&self, name: &str) -> Result<BTreeMap<u32, MultiSeries>> {
        let idx = self
            .vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::Parse(format!("unknown variable `{name}`")))?;
        let rest: Vec<String> = self
            .vars
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != idx)
            .map(|(_, v)| v.clone())
            .collect();
        let mut out: BTreeMap<u32, MultiSeries> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut r = e.clone();
            let k = r.remove(idx);
            out.entry(k)
                .or_insert_with(|| MultiSeries::zero(rest.clone(), Trunc::None))
                .add_term(r, c.clone());
        }
        Ok(out)
    }

    /// Substitute `value` for variable `name` and drop it.
    pub fn specialize(&self, name: &str, value: &BigInt) -> Result<Self> {
        let parts = self.split_var(name)?;
        let rest: Vec<String> = self.vars.iter().filter(|v| *v != name).cloned().collect();
        let trunc = self.remap_trunc(name)?;
        let mut out = MultiSeries::zero(rest, trunc);
        for (k, p) in parts {
            let f = num_traits::pow(value.clone(), k as usize);
            for (e, c) in &p.terms {
                out.add_term(e.clone(), c * &f);
            }
        }
        Ok(out)
    }

    /// Identify variables: `from` is replaced by `into` (both must exist).
    pub fn merge_vars(&self, from: &str, into: &str) -> Result<Self> {
        let fi = self.index_of(from)?;
        let ii = self.index_of(into)?;
        let rest: Vec<String> = self.vars.iter().filter(|v| *v != from).cloned().collect();
        let trunc = self.remap_trunc(from)?;
        let mut out = MultiSeries::zero(rest, trunc);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2[ii] += e2[fi];
            e2.remove(fi);
            out.add_term(e2, c.clone());
        }
        Ok(out)
    }

    fn index_of(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::Parse(format!("unknown variable `{name}`")))
    }

    fn remap_trunc(&self, dropped: &str) -> Result<Trunc> {
        let d = self.index_of(dropped)?;
        Ok(match self.trunc {
            Trunc::Var(i, _) if i == d => Trunc::None,
            Trunc::Var(i, n) if i > d => Trunc::Var(i - 1, n),
            t => t,
        })
    }

    /// Substitute univariate series for every variable.
    pub fn substitute(&self, subs: &[TruncSeries]) -> TruncSeries {
        assert_eq!(subs.len(), self.vars.len());
        let order = subs.iter().map(TruncSeries::order).min().unwrap_or(0);
        let mut powers: Vec<Vec<TruncSeries>> = subs
            .iter()
            .map(|s| {
                let mut one = TruncSeries::zero(order);
                one.set(0, BigInt::one());
                vec![one, s.clone()]
            })
            .collect();
        let mut out = TruncSeries::zero(order);
        for (e, c) in &self.terms {
            let mut term = TruncSeries::zero(order);
            term.set(0, c.clone());
            for (v, &k) in e.iter().enumerate() {
                while powers[v].len() <= k as usize {
                    let next = powers[v].last().unwrap().mul(&subs[v]);
                    powers[v].push(next);
                }
                term = term.mul(&powers[v][k as usize]);
            }
            out = out.add(&term);
        }
        out
    }
}

impl fmt::Display for MultiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // by total degree, then lexicographically descending on exponents
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            da.cmp(&db).then_with(|| b.cmp(a))
        });
        for (k, (e, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mono: Vec<String> = e
                .iter()
                .zip(&self.vars)
                .filter(|(&x, _)| x > 0)
                .map(|(&x, v)| if x == 1 { v.clone() } else { format!("{v}^{x}") })
                .collect();
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{abs}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

struct PolyParser {
    toks: Vec<Tok>,
    pos: usize,
    vars: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

impl PolyParser {
    fn new(text: &str, vars: Vec<String>) -> Self {
        let mut toks = Vec::new();
        let cs: Vec<char> = text.chars().collect();
        let mut i = 0;
        while i < cs.len() {
            let c = cs[i];
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let s = i;
                while i < cs.len() && cs[i].is_ascii_digit() {
                    i += 1;
                }
                let n: String = cs[s..i].iter().collect();
                toks.push(Tok::Num(n.parse().expect("digits")));
            } else if let Some(v) = vars
                .iter()
                .filter(|v| cs[i..].starts_with(&v.chars().collect::<Vec<_>>()))
                .max_by_key(|v| v.len())
            {
                // longest known variable first, so `y1y2` reads as `y1 * y2`
                toks.push(Tok::Ident(v.clone()));
                i += v.chars().count();
            } else if c.is_ascii_alphabetic() {
                let s = i;
                while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                    i += 1;
                }
                toks.push(Tok::Ident(cs[s..i].iter().collect()));
            } else {
                toks.push(Tok::Op(c));
                i += 1;
            }
        }
        PolyParser { toks, pos: 0, vars }
    }

    fn parse(mut self) -> Result<MultiSeries> {
        let e = self.expr()?;
        if self.pos != self.toks.len() {
            return Err(Error::Parse(format!("trailing token {:?}", self.toks[self.pos])));
        }
        Ok(e)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn expr(&mut self) -> Result<MultiSeries> {
        let mut acc = match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Op('+')) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Op('-')) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiSeries> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    acc = acc.mul(&self.power()?);
                }
                // implicit product: `4t`, `2(z1 + z2)`, `z1 z2`
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Op('(')) => {
                    acc = acc.mul(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<MultiSeries> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Op('^')) {
            self.pos += 1;
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let k = u32::try_from(&n).map_err(|_| Error::Parse("exponent too large".into()))?;
                    Ok(base.pow(k))
                }
                t => Err(Error::Parse(format!("expected exponent, found {t:?}"))),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<MultiSeries> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(MultiSeries::constant(self.vars.clone(), n))
            }
            Some(Tok::Ident(v)) => {
                self.pos += 1;
                MultiSeries::var(self.vars.clone(), &v)
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.toks.get(self.pos) != Some(&Tok::Op(')')) {
                    return Err(Error::Parse("unbalanced parenthesis".into()));
                }
                self.pos += 1;
                Ok(e)
            }
            t => Err(Error::Parse(format!("unexpected token {t:?}"))),
        }
    }
}

/// Expand `num / den` with `den(0) = ±1`.
pub fn expand_rational(num: &MultiSeries, den: &MultiSeries, trunc: Trunc) -> Result<MultiSeries> {
    let zero = vec![0; den.vars.len()];
    let c0 = den.coeff(&zero);
    if !(c0.is_one() || (-&c0).is_one()) {
        return Err(Error::NotInvertible(c0.to_string()));
    }
    let bound = match trunc {
        Trunc::Total(n) | Trunc::Var(_, n) => n,
        Trunc::None => return Err(Error::InvalidShape("rational expansion needs a truncation".into())),
    };
    // 1/den = c0 * sum_k r^k with r = 1 - c0*den, r(0) = 0
    let one = MultiSeries::constant(den.vars.clone(), BigInt::one());
    let r = one.sub(&den.scale(&c0)).with_trunc(trunc);
    let mut inv = one.with_trunc(trunc);
    let mut rk = inv.clone();
    for _ in 0..bound {
        rk = rk.mul(&r);
        if rk.is_zero() {
            break;
        }
        inv = inv.add(&rk);
    }
    Ok(num.with_trunc(trunc).mul(&inv.scale(&c0)))
}

/// Outcome of checking `P(vars, F) = 0` modulo `t^{N+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquationCheck {
    pub order: usize,
    /// Lowest `t`-degree with a nonzero residual.
    pub first_failure: Option<usize>,
}

impl EquationCheck {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// `p` is a polynomial over the variables of `f` plus `F`; `f` is truncated
/// in `t` (variable `tvar`) at order `n`.
pub fn check_poly_equation(p: &MultiSeries, f: &MultiSeries, tvar: &str, n: usize) -> Result<EquationCheck> {
    let ti = f.index_of(tvar)?;
    let trunc = Trunc::Var(ti, n);
    let f = f.with_trunc(trunc);
    let parts = p.split_var("F")?;
    let mut residual = MultiSeries::zero(f.vars.clone(), trunc);
    for (k, coef) in parts {
        let coef = align_vars(&coef, &f.vars)?.with_trunc(trunc);
        residual = residual.add(&coef.mul(&f.pow(k)));
    }
    let first_failure = residual.terms.keys().map(|e| e[ti] as usize).min();
    Ok(EquationCheck { order: n, first_failure })
}

/// Re-express `p` over `vars` (a superset of the variables actually used).
fn align_vars(p: &MultiSeries, vars: &[String]) -> Result<MultiSeries> {
    let mut out = MultiSeries::zero(vars.to_vec(), Trunc::None);
    for (e, c) in &p.terms {
        let mut e2 = vec![0; vars.len()];
        for (x, v) in e.iter().zip(&p.vars) {
            if *x == 0 {
                continue;
            }
            let j = vars
                .iter()
                .position(|w| w == v)
                .ok_or_else(|| Error::Parse(format!("variable `{v}` not available")))?;
            e2[j] = *x;
        }
        out.add_term(e2, c.clone());
    }
    Ok(out)
}

pub fn colour_vars(k: u8) -> Vec<String> {
    (1..=k).map(|c| format!("z{c}")).collect()
}

/// Coloured Hilbert series: one series per output colour over `z1..zk`,
/// from `(output colour, input colour multiset counts)` records.
pub fn coloured_hilbert<I>(k: u8, items: I, n: usize) -> Vec<MultiSeries>
where
    I: IntoIterator<Item = (Colour, Vec<u32>)>,
{
    let mut out: Vec<MultiSeries> = (0..k).map(|_| MultiSeries::zero(colour_vars(k), Trunc::Total(n))).collect();
    for (c, counts) in items {
        out[c.get() as usize - 1].add_term(counts, BigInt::one());
    }
    out
}

/// Named polynomial equations shipped with the library.
#[derive(Clone, Debug, serde::Deserialize)]
pub struct EquationEntry {
    pub name: String,
    pub vars: Vec<String>,
    pub equation: String,
    #[serde(default)]
    pub anchor: String,
}

impl EquationEntry {
    /// The polynomial over `vars` and `F`.
    pub fn polynomial(&self) -> Result<MultiSeries> {
        let mut all: Vec<&str> = self.vars.iter().map(String::as_str).collect();
        all.push("F");
        MultiSeries::parse(&self.equation, &all)
    }
}

pub fn equation_registry() -> Result<Vec<EquationEntry>> {
    Ok(serde_json::from_str(include_str!("../data/equations.json"))?)
}

pub fn equation(name: &str) -> Result<EquationEntry> {
    equation_registry()?
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownEntry(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn trunc_series_arithmetic() {
        let a = TruncSeries::from_coeffs(4, [1, 1]);
        let sq = a.mul(&a);
        assert_eq!(sq.to_u64s(), vec![1, 2, 1, 0, 0]);
        assert_eq!(sq.sub(&sq), TruncSeries::zero(4));
        let m = a.to_multi("t");
        assert_eq!(m.coeff(&[1]), big(1));
    }

    #[test]
    fn parse_and_print() {
        let p = MultiSeries::parse("(z1 + z2)^2 - 2z1 z2", &["z1", "z2"]).unwrap();
        assert_eq!(p.to_string(), "z1^2 + z2^2");
        let q = MultiSeries::parse("-t - t^2 + (1 - 4*t)*F - 3*F^2", &["t", "F"]).unwrap();
        assert_eq!(q.coeff(&[1, 1]), big(-4));
        assert_eq!(q.coeff(&[0, 2]), big(-3));
        assert!(MultiSeries::parse("x + 1", &["t"]).is_err());
        assert!(MultiSeries::parse("(t + 1", &["t"]).is_err());
        let r = MultiSeries::parse("4y1y2 + y1^2y2", &["y1", "y2"]).unwrap();
        assert_eq!(r.coeff(&[1, 1]), big(4));
        assert_eq!(r.coeff(&[2, 1]), big(1));
    }

    fn binom(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn rational_expansion_matches_word_counts() {
        // z1 z2 / (1 - z1 - z2): coefficient of z1^a z2^b counts words with
        // a ones and b twos whose first letter is 1 and last letter is 2 ..
        // independently, it is binom(a+b-2, a-1).
        let v = ["z1", "z2"];
        let num = MultiSeries::parse("z1*z2", &v).unwrap();
        let den = MultiSeries::parse("1 - z1 - z2", &v).unwrap();
        let s = expand_rational(&num, &den, Trunc::Total(9)).unwrap();
        for a in 1..8u32 {
            for b in 1..(10 - a) {
                let want = binom((a + b - 2) as u64, (a - 1) as u64);
                assert_eq!(s.coeff(&[a, b]), BigInt::from(want), "z1^{a} z2^{b}");
            }
        }
        let zero = MultiSeries::parse("0", &v).unwrap();
        let one = MultiSeries::parse("1", &v).unwrap();
        assert!(expand_rational(&zero, &one, Trunc::Total(5)).unwrap().is_zero());
        let two = MultiSeries::parse("2 - z1", &v).unwrap();
        assert!(matches!(
            expand_rational(&one, &two, Trunc::Total(3)),
            Err(Error::NotInvertible(_))
        ));
    }

    #[test]
    fn equation_check_finds_first_failure() {
        let t = TruncSeries::t(6).to_multi("t");
        let p = MultiSeries::parse("F - t", &["t", "F"]).unwrap();
        assert!(check_poly_equation(&p, &t, "t", 6).unwrap().passed());
        let q = MultiSeries::parse("F - t - t^3", &["t", "F"]).unwrap();
        assert_eq!(check_poly_equation(&q, &t, "t", 6).unwrap().first_failure, Some(3));
    }

    #[test]
    fn catalan_satisfies_quadratic() {
        // t - (1 - t)F + F^2, no: use the plain Catalan equation F = t + F^2
        let mut f = TruncSeries::zero(10);
        for _ in 0..10 {
            f = TruncSeries::t(10).add(&f.mul(&f));
        }
        assert_eq!(&f.to_u64s()[1..7], &[1, 1, 2, 5, 14, 42]);
        let p = MultiSeries::parse("t - F + F^2", &["t", "F"]).unwrap();
        assert!(check_poly_equation(&p, &f.to_multi("t"), "t", 10).unwrap().passed());
    }

    #[test]
    fn substitution_and_specialization() {
        let b = MultiSeries::parse("z1^2 + z1*z2", &["z1", "z2"]).unwrap();
        let t = TruncSeries::t(5);
        let two_t = t.add(&t);
        let s = b.substitute(&[t.clone(), two_t]);
        // t^2 + 2t^2
        assert_eq!(s.to_u64s(), vec![0, 0, 3, 0, 0, 0]);
        let r = MultiSeries::parse("y1*t + y2^2*t^2", &["t", "y1", "y2"]).unwrap();
        let merged = r.merge_vars("y2", "y1").unwrap();
        assert_eq!(merged.to_string(), "t*y1 + t^2*y1^2");
        let at1 = merged.specialize("y1", &big(1)).unwrap();
        assert_eq!(at1.to_string(), "t + t^2");
    }

    #[test]
    fn coloured_hilbert_counts() {
        let items = vec![
            (Colour::ONE, vec![2, 0]),
            (Colour::ONE, vec![2, 0]),
            (Colour::TWO, vec![1, 1]),
        ];
        let b = coloured_hilbert(2, items, 4);
        assert_eq!(b[0].coeff(&[2, 0]), big(2));
        assert_eq!(b[1].coeff(&[1, 1]), big(1));
        assert!(coloured_hilbert(2, Vec::new(), 4).iter().all(MultiSeries::is_zero));
    }

    #[test]
    fn registry_parses() {
        let reg = equation_registry().unwrap();
        assert!(!reg.is_empty());
        for e in reg {
            e.polynomial().unwrap_or_else(|err| panic!("{}: {err}", e.name));
        }
    }
}
