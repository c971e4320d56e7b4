//! Bicoloured noncrossing configurations (BNCs).
//!
//! A BNC of size `n` lives on the vertices `1..=n+1` of a polygon; its edges
//! are the arcs `(i, i+1)` and its base is `(1, n+1)`. Arcs are blue, red or
//! uncoloured, coloured arcs never cross, red arcs are diagonals only.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::series::{MultiSeries, Trunc};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub struct Arc {
    pub i: u8,
    pub j: u8,
}

impl Arc {
    pub fn new(i: u8, j: u8) -> Arc {
        debug_assert!(i < j);
        Arc { i, j }
    }

    /// Strict interleaving; shared endpoints never cross.
    pub fn crosses(self, o: Arc) -> bool {
        (self.i < o.i && o.i < self.j && self.j < o.j) || (o.i < self.i && self.i < o.j && o.j < self.j)
    }

    pub fn is_diagonal(self, n: u8) -> bool {
        self.j != self.i + 1 && !(self.i == 1 && self.j == n + 1)
    }

    /// `self` lies in the closed interval spanned by `o`.
    pub fn inside(self, o: Arc) -> bool {
        o.i <= self.i && self.j <= o.j
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.i, self.j)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ArcColour {
    Blue,
    Red,
    Uncoloured,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    OutOfRange(Arc),
    BlueAndRed(Arc),
    Crossing(Arc, Arc),
    RedNotDiagonal(Arc),
    SizeOneNotBlue,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::OutOfRange(a) => write!(f, "arc {a} out of range"),
            Violation::BlueAndRed(a) => write!(f, "arc {a} is both blue and red"),
            Violation::Crossing(a, b) => write!(f, "arcs {a} and {b} cross"),
            Violation::RedNotDiagonal(a) => write!(f, "red arc {a} is not a diagonal"),
            Violation::SizeOneNotBlue => write!(f, "the size-1 configuration is the single blue arc"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Bnc {
    n: u8,
    blue: Vec<Arc>,
    red: Vec<Arc>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct Stats {
    pub y1: usize,
    pub y2: usize,
    pub areas: usize,
}

/// Largest size accepted by the brute-force enumerator unless raised.
pub const DIRECT_BOUND: usize = 4;

impl Bnc {
    pub fn new(n: u8, mut blue: Vec<Arc>, mut red: Vec<Arc>) -> Result<Bnc> {
        blue.sort();
        blue.dedup();
        red.sort();
        red.dedup();
        let c = Bnc { n, blue, red };
        c.validate().map_err(|v| Error::InvalidBnc(v.to_string()))?;
        Ok(c)
    }

    fn from_sorted(n: u8, blue: Vec<Arc>, red: Vec<Arc>) -> Bnc {
        Bnc { n, blue, red }
    }

    pub fn unit() -> Bnc {
        Bnc::from_sorted(1, vec![Arc::new(1, 2)], Vec::new())
    }

    pub fn size(&self) -> usize {
        self.n as usize
    }

    pub fn blue(&self) -> &[Arc] {
        &self.blue
    }

    pub fn red(&self) -> &[Arc] {
        &self.red
    }

    pub fn base(&self) -> Arc {
        Arc::new(1, self.n + 1)
    }

    pub fn is_based(&self) -> bool {
        self.is_blue(self.base())
    }

    pub fn is_blue(&self, a: Arc) -> bool {
        self.blue.binary_search(&a).is_ok()
    }

    pub fn is_red(&self, a: Arc) -> bool {
        self.red.binary_search(&a).is_ok()
    }

    pub fn colour(&self, a: Arc) -> ArcColour {
        if self.is_blue(a) {
            ArcColour::Blue
        } else if self.is_red(a) {
            ArcColour::Red
        } else {
            ArcColour::Uncoloured
        }
    }

    /// Blue and red diagonals, sorted.
    pub fn coloured_diagonals(&self) -> Vec<(Arc, ArcColour)> {
        let mut v: Vec<(Arc, ArcColour)> = self
            .blue
            .iter()
            .filter(|a| a.is_diagonal(self.n))
            .map(|&a| (a, ArcColour::Blue))
            .chain(self.red.iter().map(|&a| (a, ArcColour::Red)))
            .collect();
        v.sort_by_key(|&(a, _)| a);
        v
    }

    pub fn has_diagonal(&self) -> bool {
        !self.coloured_diagonals().is_empty()
    }

    /// First violated condition, if any.
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        let n = self.n;
        for &a in self.blue.iter().chain(&self.red) {
            if a.i < 1 || a.i >= a.j || a.j > n + 1 {
                return Err(Violation::OutOfRange(a));
            }
        }
        if n == 1 {
            return if self.blue == [Arc::new(1, 2)] && self.red.is_empty() {
                Ok(())
            } else {
                Err(Violation::SizeOneNotBlue)
            };
        }
        if let Some(&a) = self.red.iter().find(|a| self.is_blue(**a)) {
            return Err(Violation::BlueAndRed(a));
        }
        if let Some(&a) = self.red.iter().find(|a| !a.is_diagonal(n)) {
            return Err(Violation::RedNotDiagonal(a));
        }
        let all: Vec<Arc> = self.blue.iter().chain(&self.red).copied().collect();
        for (k, &a) in all.iter().enumerate() {
            for &b in &all[k + 1..] {
                if a.crosses(b) {
                    return Err(Violation::Crossing(a, b));
                }
            }
        }
        Ok(())
    }

    /// Letter `i` is 2 iff edge `(i, i+1)` is blue.
    pub fn border(&self) -> Result<Vec<u8>> {
        if self.n == 1 {
            return Err(Error::SizeOne("border"));
        }
        Ok((1..=self.n)
            .map(|i| if self.is_blue(Arc::new(i, i + 1)) { 2 } else { 1 })
            .collect())
    }

    /// Glue the base of `d` onto edge `i` of `self`.
    pub fn compose(&self, i: usize, d: &Bnc) -> Result<Bnc> {
        let n = self.n as usize;
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange { index: i, arity: n });
        }
        let m = d.n;
        let i = i as u8;
        let shift_c = |v: u8| if v > i { v + m - 1 } else { v };
        let shift_d = |w: u8| w + i - 1;
        let edge = Arc::new(i, i + 1);
        let seam = Arc::new(i, i + m);
        let (mut blue, mut red) = (Vec::new(), Vec::new());
        for &a in &self.blue {
            if a != edge {
                blue.push(Arc::new(shift_c(a.i), shift_c(a.j)));
            }
        }
        for &a in &self.red {
            red.push(Arc::new(shift_c(a.i), shift_c(a.j)));
        }
        let dbase = d.base();
        for &a in &d.blue {
            if a != dbase {
                blue.push(Arc::new(shift_d(a.i), shift_d(a.j)));
            }
        }
        for &a in &d.red {
            red.push(Arc::new(shift_d(a.i), shift_d(a.j)));
        }
        match (self.is_blue(edge), d.is_based()) {
            (true, true) => blue.push(seam),
            (false, false) => red.push(seam),
            _ => {}
        }
        blue.sort();
        red.sort();
        Ok(Bnc::from_sorted(self.n + m - 1, blue, red))
    }

    /// Swap blue and red diagonals, swap blue and uncoloured edges.
    pub fn cpl_prime(&self) -> Bnc {
        if self.n == 1 {
            return self.clone();
        }
        let n = self.n;
        let mut blue: Vec<Arc> = self.red.clone();
        let mut red: Vec<Arc> = self.blue.iter().copied().filter(|a| a.is_diagonal(n)).collect();
        for i in 1..=n {
            let e = Arc::new(i, i + 1);
            if !self.is_blue(e) {
                blue.push(e);
            }
        }
        if !self.is_based() {
            blue.push(self.base());
        }
        blue.sort();
        red.sort();
        Bnc::from_sorted(n, blue, red)
    }

    /// Reflection `v -> n + 2 - v`.
    pub fn ret_prime(&self) -> Bnc {
        let k = self.n + 2;
        let flip = |a: &Arc| Arc::new(k - a.j, k - a.i);
        let mut blue: Vec<Arc> = self.blue.iter().map(flip).collect();
        let mut red: Vec<Arc> = self.red.iter().map(flip).collect();
        blue.sort();
        red.sort();
        Bnc::from_sorted(self.n, blue, red)
    }

    pub fn stats(&self) -> Result<Stats> {
        if self.n == 1 {
            return Err(Error::SizeOne("statistics"));
        }
        let based = usize::from(self.is_based());
        let bd = self.blue.iter().filter(|a| a.is_diagonal(self.n)).count();
        let y1 = bd + based;
        let y2 = self.red.len() + 1 - based;
        Ok(Stats { y1, y2, areas: y1 + y2 })
    }

    /// The sub-configuration on the vertices `p..=q`, renumbered from 1.
    /// The arc `(p, q)` itself becomes the base.
    pub fn restrict(&self, a: Arc) -> Bnc {
        let sh = |b: &Arc| Arc::new(b.i - a.i + 1, b.j - a.i + 1);
        let blue = self.blue.iter().filter(|b| b.inside(a)).map(sh).collect();
        let red: Vec<Arc> = self.red.iter().filter(|b| b.inside(a) && **b != a).map(sh).collect();
        Bnc::from_sorted(a.j - a.i, blue, red)
    }

    /// Regular-polygon drawing: uncoloured arcs are the grey outline, blue
    /// arcs thick, red arcs dotted.
    pub fn to_svg(&self) -> String {
        let k = self.n as usize + 1;
        let r = 100.0f64;
        let (cx, cy) = (120.0, 120.0);
        // base at the bottom, vertices counterclockwise... drawn from left
        let pos = |v: u8| {
            let t = std::f64::consts::PI / 2.0 + std::f64::consts::PI / k as f64
                + 2.0 * std::f64::consts::PI * (v as f64 - 1.0) / k as f64;
            (cx + r * t.cos(), cy + r * t.sin())
        };
        let mut s = String::from(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"240\" height=\"240\" viewBox=\"0 0 240 240\">\n",
        );
        let line = |a: Arc, style: &str| {
            let (x1, y1) = pos(a.i);
            let (x2, y2) = pos(a.j);
            format!("  <line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" {style}/>\n")
        };
        if self.n >= 2 {
            let mut outline: Vec<Arc> = (1..=self.n).map(|i| Arc::new(i, i + 1)).collect();
            outline.push(self.base());
            for a in outline {
                if !self.is_blue(a) {
                    s += &line(a, "stroke=\"#999\" stroke-width=\"1.5\"");
                }
            }
        }
        for &a in &self.blue {
            s += &line(a, "stroke=\"#1f4fd1\" stroke-width=\"5\"");
        }
        for &a in &self.red {
            s += &line(a, "stroke=\"#d11f1f\" stroke-width=\"3\" stroke-dasharray=\"3,5\"");
        }
        for v in 1..=k as u8 {
            let (x, y) = pos(v);
            s += &format!("  <circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"3\" fill=\"black\"/>\n");
        }
        s += "</svg>\n";
        s
    }
}

impl fmt::Display for Bnc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[Arc]| v.iter().map(Arc::to_string).collect::<Vec<_>>().join(",");
        write!(f, "n={};B={};R={}", self.n, list(&self.blue), list(&self.red))
    }
}

impl FromStr for Bnc {
    type Err = Error;

    /// `n=<size>;B=<i-j>,...;R=<i-j>,...`
    fn from_str(s: &str) -> Result<Bnc> {
        let bad = |m: &str| Error::Parse(format!("bad configuration literal `{s}`: {m}"));
        let mut n = None;
        let mut blue = Vec::new();
        let mut red = Vec::new();
        for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, val) = part.split_once('=').ok_or_else(|| bad("missing `=`"))?;
            match key.trim() {
                "n" => n = Some(val.trim().parse::<u8>().map_err(|_| bad("size"))?),
                "B" | "R" => {
                    let list = if key.trim() == "B" { &mut blue } else { &mut red };
                    for a in val.split(',').map(str::trim).filter(|a| !a.is_empty()) {
                        let (i, j) = a.split_once('-').ok_or_else(|| bad("arc"))?;
                        let i: u8 = i.trim().parse().map_err(|_| bad("arc"))?;
                        let j: u8 = j.trim().parse().map_err(|_| bad("arc"))?;
                        if i >= j {
                            return Err(bad("arcs are written i-j with i < j"));
                        }
                        list.push(Arc::new(i, j));
                    }
                }
                _ => return Err(bad("unknown key")),
            }
        }
        let n = n.ok_or_else(|| bad("missing size"))?;
        if n == 0 {
            return Err(bad("size must be positive"));
        }
        Bnc::new(n, blue, red)
    }
}

/// All BNCs of size `n` by filtering the `3^{#arcs}` arc colourings.
pub fn enumerate_direct(n: usize, bound: usize, strategy: Strategy) -> Result<Vec<Bnc>> {
    if n > bound {
        return Err(Error::BoundExceeded { requested: n, limit: bound });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let k = n as u8 + 1;
    let arcs: Vec<Arc> = (1..k).flat_map(|i| (i + 1..=k).map(move |j| Arc::new(i, j))).collect();
    let total = 3usize.pow(arcs.len() as u32);
    let chunk = 3usize.pow(arcs.len().min(6) as u32);
    let found = exec::map_range(strategy, total.div_ceil(chunk), |c| {
        let mut out = Vec::new();
        for code in c * chunk..((c + 1) * chunk).min(total) {
            let (mut blue, mut red) = (Vec::new(), Vec::new());
            let mut x = code;
            for &a in &arcs {
                match x % 3 {
                    1 => blue.push(a),
                    2 => red.push(a),
                    _ => {}
                }
                x /= 3;
            }
            blue.sort();
            red.sort();
            let b = Bnc::from_sorted(n as u8, blue, red);
            if b.validate().is_ok() {
                out.push(b);
            }
        }
        out
    });
    let mut all: Vec<Bnc> = found.into_iter().flatten().collect();
    all.sort();
    Ok(all)
}

/// The eight size-2 BNCs in generator-name order AAA, AAB, ..., BBB.
/// A name reads (first edge, base, second edge), A = blue, B = uncoloured.
pub fn triangle(name: &str) -> Result<Bnc> {
    let b: Vec<bool> = name
        .chars()
        .map(|c| match c {
            'A' => Ok(true),
            'B' => Ok(false),
            _ => Err(Error::UnknownLabel(name.to_string())),
        })
        .collect::<Result<_>>()?;
    if b.len() != 3 {
        return Err(Error::UnknownLabel(name.to_string()));
    }
    let mut blue = Vec::new();
    if b[0] {
        blue.push(Arc::new(1, 2));
    }
    if b[1] {
        blue.push(Arc::new(1, 3));
    }
    if b[2] {
        blue.push(Arc::new(2, 3));
    }
    Bnc::new(2, blue, Vec::new())
}

/// Statistic recorded by [`refined_series`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Statistic {
    /// `y1` per blue diagonal, `y2` per red one; the base counts as a
    /// diagonal of its colour.
    Diagonals,
    /// `y` per area.
    Areas,
}

impl FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Statistic> {
        match s {
            "diagonals" => Ok(Statistic::Diagonals),
            "areas" => Ok(Statistic::Areas),
            _ => Err(Error::Parse(format!("unknown statistic `{s}`"))),
        }
    }
}

/// Sum of `t^size` times the statistic monomial over `items`; the unit
/// contributes a bare `t`.
pub fn refined_series<'a, I: IntoIterator<Item = &'a Bnc>>(items: I, stat: Statistic, order: usize) -> MultiSeries {
    let vars: Vec<String> = match stat {
        Statistic::Diagonals => vec!["t".into(), "y1".into(), "y2".into()],
        Statistic::Areas => vec!["t".into(), "y".into()],
    };
    let mut f = MultiSeries::zero(vars, Trunc::Var(0, order));
    for c in items {
        let n = c.size() as u32;
        let e = match (c.stats(), stat) {
            (Ok(s), Statistic::Diagonals) => vec![n, s.y1 as u32, s.y2 as u32],
            (Ok(s), Statistic::Areas) => vec![n, s.areas as u32],
            (Err(_), Statistic::Diagonals) => vec![n, 0, 0],
            (Err(_), Statistic::Areas) => vec![n, 0],
        };
        f.add_term(e, BigInt::one());
    }
    f
}
