//! Bubbles and the 2-coloured operad they form.
//!
//! A bubble is a diagonal-free BNC of size at least 2, encoded by its output
//! colour (1 when the base is blue) and its border word (letter 1 for an
//! uncoloured edge, 2 for a blue one). Composition substitutes words.
//! [`decompose`] and [`flatten`] pass between BNCs and anticoloured trees of
//! bubbles.

use std::fmt;
use std::str::FromStr;

use crate::envelope::ColouredOperad;
use crate::error::{Error, Result};
use crate::geometry::{Arc, ArcColour, Bnc};
use crate::trees::{Colour, Signature, Tree};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Bubble {
    out: Colour,
    word: Vec<u8>,
}

/// Generator names in lexicographic order. A name reads (first edge, base,
/// second edge) with A = blue and B = uncoloured.
pub const GENERATOR_NAMES: [&str; 8] = ["AAA", "AAB", "ABA", "ABB", "BAA", "BAB", "BBA", "BBB"];

impl Bubble {
    pub fn new(out: Colour, word: Vec<u8>) -> Result<Bubble> {
        if word.len() < 2 {
            return Err(Error::InvalidShape("a bubble has arity at least 2".into()));
        }
        if out.get() > 2 || word.iter().any(|&l| l != 1 && l != 2) {
            return Err(Error::InvalidShape("bubble colours are 1 and 2".into()));
        }
        Ok(Bubble { out, word })
    }

    pub fn generator(name: &str) -> Result<Bubble> {
        let b: Vec<u8> = name
            .bytes()
            .map(|c| match c {
                b'A' => Ok(2),
                b'B' => Ok(1),
                _ => Err(Error::UnknownLabel(name.to_string())),
            })
            .collect::<Result<_>>()?;
        if b.len() != 3 {
            return Err(Error::UnknownLabel(name.to_string()));
        }
        Ok(Bubble {
            out: if b[1] == 2 { Colour::ONE } else { Colour::TWO },
            word: vec![b[0], b[2]],
        })
    }

    pub fn generators() -> Vec<Bubble> {
        GENERATOR_NAMES.iter().map(|n| Bubble::generator(n).unwrap()).collect()
    }

    /// Name of an arity-2 bubble.
    pub fn name(&self) -> Option<String> {
        if self.word.len() != 2 {
            return None;
        }
        let l = |x: u8| if x == 2 { 'A' } else { 'B' };
        let base = if self.out == Colour::ONE { 'A' } else { 'B' };
        Some([l(self.word[0]), base, l(self.word[1])].iter().collect())
    }

    pub fn out(&self) -> Colour {
        self.out
    }

    pub fn is_based(&self) -> bool {
        self.out == Colour::ONE
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn arity(&self) -> usize {
        self.word.len()
    }

    /// Colour of input `i` (1-based).
    pub fn input(&self, i: usize) -> Colour {
        if self.word[i - 1] == 1 {
            Colour::ONE
        } else {
            Colour::TWO
        }
    }

    /// `(#1, #2)` in the border.
    pub fn letter_counts(&self) -> Vec<u32> {
        let ones = self.word.iter().filter(|&&l| l == 1).count() as u32;
        vec![ones, self.word.len() as u32 - ones]
    }

    pub fn compose(&self, i: usize, o: &Bubble) -> Result<Bubble> {
        let arity = self.arity();
        if i == 0 || i > arity {
            return Err(Error::IndexOutOfRange { index: i, arity });
        }
        if self.input(i) != o.out {
            return Err(Error::ColourMismatch {
                index: i,
                expected: self.input(i),
                found: o.out,
            });
        }
        let mut word = Vec::with_capacity(arity + o.arity() - 1);
        word.extend_from_slice(&self.word[..i - 1]);
        word.extend_from_slice(&o.word);
        word.extend_from_slice(&self.word[i..]);
        Ok(Bubble { out: self.out, word })
    }

    pub fn cpl(&self) -> Bubble {
        Bubble {
            out: self.out.swapped(),
            word: self.word.iter().map(|&l| 3 - l).collect(),
        }
    }

    pub fn ret(&self) -> Bubble {
        Bubble {
            out: self.out,
            word: self.word.iter().rev().copied().collect(),
        }
    }

    pub fn to_bnc(&self) -> Bnc {
        let n = self.word.len() as u8;
        let mut blue: Vec<Arc> = (1..=n)
            .filter(|&i| self.word[i as usize - 1] == 2)
            .map(|i| Arc::new(i, i + 1))
            .collect();
        if self.is_based() {
            blue.push(Arc::new(1, n + 1));
        }
        Bnc::new(n, blue, Vec::new()).expect("bubbles are valid configurations")
    }

    pub fn from_bnc(c: &Bnc) -> Result<Bubble> {
        if c.size() == 1 {
            return Err(Error::SizeOne("bubble"));
        }
        if c.has_diagonal() {
            return Err(Error::HasDiagonal);
        }
        Ok(Bubble {
            out: if c.is_based() { Colour::ONE } else { Colour::TWO },
            word: c.border()?,
        })
    }

    /// All `2^n` bubbles of arity `n` with output `out`, in word order.
    pub fn all(out: Colour, n: usize) -> Vec<Bubble> {
        (0..1u64 << n)
            .map(|bits| Bubble {
                out,
                word: (0..n).rev().map(|k| 1 + ((bits >> k) & 1) as u8).collect(),
            })
            .collect()
    }
}

impl fmt::Display for Bubble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b:{}:", self.out)?;
        for l in &self.word {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Bubble {
    type Err = Error;

    /// `b:<out>:<border>` or one of the eight generator names.
    fn from_str(s: &str) -> Result<Bubble> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("b:") {
            let (out, word) = rest
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("bad bubble literal `{s}`")))?;
            let out: u8 = out.parse().map_err(|_| Error::Parse(format!("bad colour in `{s}`")))?;
            let word = word
                .bytes()
                .map(|b| match b {
                    b'1' | b'2' => Ok(b - b'0'),
                    _ => Err(Error::Parse(format!("bad border letter in `{s}`"))),
                })
                .collect::<Result<Vec<u8>>>()?;
            Bubble::new(Colour::new(out)?, word)
        } else {
            Bubble::generator(s)
        }
    }
}

/// The coloured operad of all bubbles.
#[derive(Clone, Copy, Debug, Default)]
pub struct Bulle;

impl Signature<Bubble> for Bulle {
    fn label_arity(&self, x: &Bubble) -> usize {
        x.arity()
    }
    fn label_out(&self, x: &Bubble) -> Colour {
        x.out
    }
    fn label_input(&self, x: &Bubble, i: usize) -> Colour {
        x.input(i)
    }
}

impl ColouredOperad for Bulle {
    type Elem = Bubble;

    fn colours(&self) -> u8 {
        2
    }

    fn compose(&self, x: &Bubble, i: usize, y: &Bubble) -> Option<Bubble> {
        x.compose(i, y).ok()
    }

    fn elements(&self, n: usize) -> Vec<Bubble> {
        if n < 2 {
            return Vec::new();
        }
        let mut v = Bubble::all(Colour::ONE, n);
        v.extend(Bubble::all(Colour::TWO, n));
        v
    }

    fn input_counts(&self, x: &Bubble) -> Vec<u32> {
        x.letter_counts()
    }

    fn name(&self, x: &Bubble) -> String {
        x.to_string()
    }
}

pub type BubbleTree = Tree<Bubble>;

/// Dual tree of a BNC: one node per area, via maximal coloured diagonals.
pub fn decompose(c: &Bnc) -> BubbleTree {
    if c.size() == 1 {
        return Tree::Leaf;
    }
    let n = c.size() as u8;
    let diags = c.coloured_diagonals();
    let mut word = Vec::new();
    let mut children = Vec::new();
    let mut v = 1u8;
    while v <= n {
        // the longest coloured diagonal leaving v is maximal: every vertex
        // strictly inside an earlier maximal diagonal has been skipped
        let best = diags.iter().filter(|(a, _)| a.i == v).max_by_key(|(a, _)| a.j);
        match best {
            Some(&(a, colour)) => {
                word.push(if colour == ArcColour::Blue { 2 } else { 1 });
                children.push(decompose(&c.restrict(a)));
                v = a.j;
            }
            None => {
                word.push(if c.is_blue(Arc::new(v, v + 1)) { 2 } else { 1 });
                children.push(Tree::Leaf);
                v += 1;
            }
        }
    }
    let out = if c.is_based() { Colour::ONE } else { Colour::TWO };
    Tree::Node(Bubble { out, word }, children)
}

/// Evaluate an anticoloured bubble tree with BNC composition.
pub fn flatten(t: &BubbleTree) -> Bnc {
    match t {
        Tree::Leaf => Bnc::unit(),
        Tree::Node(b, cs) => {
            let mut c = b.to_bnc();
            for (j, child) in cs.iter().enumerate().rev() {
                if !child.is_leaf() {
                    c = c.compose(j + 1, &flatten(child)).expect("index within arity");
                }
            }
            c
        }
    }
}

pub fn parse_bubble_tree(s: &str) -> Result<BubbleTree> {
    crate::trees::parse_tree(s, |l| l.parse::<Bubble>())
}

pub fn bubble_tree_literal(t: &BubbleTree) -> String {
    t.write_literal(&|b: &Bubble| b.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::enumerate_direct;
    use crate::exec::Strategy;

    fn b(s: &str) -> Bubble {
        s.parse().unwrap()
    }

    #[test]
    fn generator_decoding() {
        let expect = [
            ("AAA", "b:1:22"),
            ("AAB", "b:1:21"),
            ("BAA", "b:1:12"),
            ("BAB", "b:1:11"),
            ("ABA", "b:2:22"),
            ("ABB", "b:2:21"),
            ("BBA", "b:2:12"),
            ("BBB", "b:2:11"),
        ];
        for (name, lit) in expect {
            assert_eq!(b(name), b(lit));
            assert_eq!(b(lit).name().unwrap(), name);
            // the geometric triangle of the same name has this border
            let tri = crate::geometry::triangle(name).unwrap();
            assert_eq!(Bubble::from_bnc(&tri).unwrap(), b(name));
        }
    }

    #[test]
    fn word_substitution() {
        assert_eq!(b("b:1:22211").compose(3, &b("b:2:2112")).unwrap(), b("b:1:22211211"));
        assert_eq!(b("b:1:12").compose(1, &b("b:1:12")).unwrap(), b("b:1:122"));
        assert_eq!(b("b:1:12").compose(2, &b("b:2:22")).unwrap(), b("b:1:122"));
        assert!(matches!(
            b("AAA").compose(1, &b("AAA")),
            Err(Error::ColourMismatch { .. })
        ));
    }

    #[test]
    fn symmetries() {
        assert_eq!(b("AAA").cpl(), b("BBB"));
        assert_eq!(b("AAB").ret(), b("BAA"));
        for x in Bulle.elements(5) {
            assert_eq!(x.ret().ret(), x);
            assert_eq!(x.cpl().cpl(), x);
            assert_eq!(x.cpl().ret(), x.ret().cpl());
        }
    }

    #[test]
    fn operad_axioms_small() {
        let el: Vec<Bubble> = (2..=3).flat_map(|n| Bulle.elements(n)).collect();
        for x in &el {
            for y in &el {
                for i in 1..=x.arity() {
                    let Some(xy) = Bulle.compose(x, i, y) else { continue };
                    for z in &el {
                        for j in 1..=y.arity() {
                            // sequential: (x o_i y) o_{i+j-1} z = x o_i (y o_j z)
                            if let Some(yz) = Bulle.compose(y, j, z) {
                                assert_eq!(
                                    Bulle.compose(&xy, i + j - 1, z),
                                    Bulle.compose(x, i, &yz)
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn bnc_roundtrip() {
        let bubble: Bnc = "n=6;B=4-5,5-6,1-7".parse().unwrap();
        assert_eq!(Bubble::from_bnc(&bubble).unwrap(), b("b:1:111221"));
        for n in 2..=6 {
            for x in Bulle.elements(n) {
                assert_eq!(Bubble::from_bnc(&x.to_bnc()).unwrap(), x);
            }
        }
        let fig: Bnc = "n=9;B=1-2,2-8,4-6,7-8,9-10;R=2-6,2-10".parse().unwrap();
        assert_eq!(Bubble::from_bnc(&fig), Err(Error::HasDiagonal));
    }

    #[test]
    fn decomposition_roundtrips_on_small_bncs() {
        for n in 1..=4 {
            for c in enumerate_direct(n, 4, Strategy::Parallel).unwrap() {
                let t = decompose(&c);
                assert!(t.is_anticoloured(&Bulle), "{c}");
                assert_eq!(flatten(&t), c);
            }
        }
    }

    #[test]
    fn example_dual_tree() {
        let c: Bnc = "n=11;B=1-2,1-12,2-3,3-4,3-6,3-12,4-5,5-6,7-8,7-12,8-9,9-10,10-11,11-12;R=4-6,7-11"
            .parse()
            .unwrap();
        let t = decompose(&c);
        assert_eq!(t.degree(), 6);
        assert_eq!(t.arity(), 11);
        assert_eq!(
            bubble_tree_literal(&t),
            "b:1:222[*,*,b:1:212[b:1:21[*,b:2:22[*,*]],*,b:1:12[b:2:2222[*,*,*,*],*]]]"
        );
        assert_eq!(flatten(&t), c);
        assert_eq!(parse_bubble_tree(&bubble_tree_literal(&t)).unwrap(), t);
    }

    #[test]
    fn bubble_is_a_corolla() {
        let x = b("b:2:1121");
        assert_eq!(decompose(&x.to_bnc()), Tree::corolla(x, 4));
    }
}
