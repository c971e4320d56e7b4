//! Coloured collections and planar syntax trees.
//!
//! A [`Tree`] is generic over its node labels so the same type carries
//! syntax trees on a [`ColouredCollection`] (labels are [`LabelId`]s) and
//! anticoloured trees on the elements of a coloured operad (labels are the
//! elements themselves). Leaves are units: they carry no colour, the colour
//! is the one demanded by the slot they occupy. Leaf and input indices are
//! 1-based throughout.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{self, Strategy};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Colour(u8);

impl Colour {
    pub const ONE: Colour = Colour(1);
    pub const TWO: Colour = Colour(2);

    pub fn new(value: u8) -> Result<Colour> {
        if value == 0 {
            return Err(Error::InvalidShape("colours start at 1".into()));
        }
        Ok(Colour(value))
    }

    pub fn get(self) -> u8 {
        self.0
    }

    /// Swap 1 and 2; other colours are left alone.
    pub fn swapped(self) -> Colour {
        match self.0 {
            1 => Colour(2),
            2 => Colour(1),
            _ => self,
        }
    }
}

impl fmt::Display for Colour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Shape {
    pub out: Colour,
    pub ins: Vec<Colour>,
}

impl Shape {
    pub fn new(out: Colour, ins: Vec<Colour>) -> Result<Shape> {
        if ins.len() < 2 {
            return Err(Error::InvalidShape(format!(
                "arity {} < 2 (units are implicit)",
                ins.len()
            )));
        }
        Ok(Shape { out, ins })
    }

    pub fn arity(&self) -> usize {
        self.ins.len()
    }
}

/// Colour data of node labels.
pub trait Signature<L> {
    fn label_arity(&self, label: &L) -> usize;
    fn label_out(&self, label: &L) -> Colour;
    /// Colour of input `i` (1-based).
    fn label_input(&self, label: &L, i: usize) -> Colour;
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Tree<L> {
    Leaf,
    Node(L, Vec<Tree<L>>),
}

/// Path from the root: child indices, 0-based.
pub type Path = Vec<usize>;

impl<L: Clone> Tree<L> {
    pub fn corolla(label: L, arity: usize) -> Tree<L> {
        Tree::Node(label, vec![Tree::Leaf; arity])
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Tree::Leaf)
    }

    pub fn label(&self) -> Option<&L> {
        match self {
            Tree::Leaf => None,
            Tree::Node(l, _) => Some(l),
        }
    }

    pub fn children(&self) -> &[Tree<L>] {
        match self {
            Tree::Leaf => &[],
            Tree::Node(_, cs) => cs,
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Tree::Leaf => 1,
            Tree::Node(_, cs) => cs.iter().map(Tree::arity).sum(),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            Tree::Leaf => 0,
            Tree::Node(_, cs) => 1 + cs.iter().map(Tree::degree).sum::<usize>(),
        }
    }

    /// Parent path and local (1-based) child position of leaf `i`.
    pub fn leaf_slot(&self, i: usize) -> Option<(Path, usize)> {
        fn go<L: Clone>(t: &Tree<L>, i: &mut usize, path: &mut Path) -> Option<usize> {
            if let Tree::Node(_, cs) = t {
                for (j, c) in cs.iter().enumerate() {
                    match c {
                        Tree::Leaf => {
                            *i -= 1;
                            if *i == 0 {
                                return Some(j + 1);
                            }
                        }
                        _ => {
                            path.push(j);
                            if let Some(r) = go(c, i, path) {
                                return Some(r);
                            }
                            path.pop();
                        }
                    }
                }
            }
            None
        }
        if i == 0 || i > self.arity() || self.is_leaf() {
            return None;
        }
        let mut k = i;
        let mut path = Vec::new();
        go(self, &mut k, &mut path).map(|j| (path, j))
    }

    pub fn subtree(&self, path: &[usize]) -> Option<&Tree<L>> {
        let mut t = self;
        for &j in path {
            t = t.children().get(j)?;
        }
        Some(t)
    }

    pub fn subtree_mut(&mut self, path: &[usize]) -> Option<&mut Tree<L>> {
        let mut t = self;
        for &j in path {
            t = match t {
                Tree::Leaf => return None,
                Tree::Node(_, cs) => cs.get_mut(j)?,
            };
        }
        Some(t)
    }

    /// Graft `t` on leaf `i` without any colour check.
    pub fn graft_raw(&self, i: usize, t: &Tree<L>) -> Option<Tree<L>> {
        if i == 0 || i > self.arity() {
            return None;
        }
        if self.is_leaf() {
            return Some(t.clone());
        }
        let (path, j) = self.leaf_slot(i)?;
        let mut out = self.clone();
        if let Some(Tree::Node(_, cs)) = out.subtree_mut(&path) {
            cs[j - 1] = t.clone();
        }
        Some(out)
    }

    /// Replace the leaves, left to right, by `subs`.
    pub fn substitute_leaves(&self, subs: &[Tree<L>]) -> Tree<L> {
        fn go<L: Clone>(t: &Tree<L>, subs: &[Tree<L>], k: &mut usize) -> Tree<L> {
            match t {
                Tree::Leaf => {
                    *k += 1;
                    subs[*k - 1].clone()
                }
                Tree::Node(l, cs) => Tree::Node(l.clone(), cs.iter().map(|c| go(c, subs, k)).collect()),
            }
        }
        let mut k = 0;
        go(self, subs, &mut k)
    }

    /// Paths of the internal nodes in preorder.
    pub fn node_paths(&self) -> Vec<Path> {
        fn go<L>(t: &Tree<L>, path: &mut Path, out: &mut Vec<Path>) {
            if let Tree::Node(_, cs) = t {
                out.push(path.clone());
                for (j, c) in cs.iter().enumerate() {
                    path.push(j);
                    go(c, path, out);
                    path.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn map_labels<M, F: FnMut(&L) -> M>(&self, f: &mut F) -> Tree<M> {
        match self {
            Tree::Leaf => Tree::Leaf,
            Tree::Node(l, cs) => {
                let m = f(l);
                Tree::Node(m, cs.iter().map(|c| c.map_labels(f)).collect())
            }
        }
    }

    /// Reverse the order of children at every node.
    pub fn mirror(&self) -> Tree<L> {
        match self {
            Tree::Leaf => Tree::Leaf,
            Tree::Node(l, cs) => Tree::Node(l.clone(), cs.iter().rev().map(Tree::mirror).collect()),
        }
    }

    pub fn labels_preorder(&self) -> Vec<&L> {
        let mut out = Vec::new();
        fn go<'a, L>(t: &'a Tree<L>, out: &mut Vec<&'a L>) {
            if let Tree::Node(l, cs) = t {
                out.push(l);
                cs.iter().for_each(|c| go(c, out));
            }
        }
        go(self, &mut out);
        out
    }

    pub fn out_colour<S: Signature<L> + ?Sized>(&self, sig: &S) -> Option<Colour> {
        self.label().map(|l| sig.label_out(l))
    }

    /// Colour of the input slot carrying leaf `i`.
    pub fn input_colour<S: Signature<L> + ?Sized>(&self, sig: &S, i: usize) -> Option<Colour> {
        let (path, j) = self.leaf_slot(i)?;
        let node = self.subtree(&path)?;
        node.label().map(|l| sig.label_input(l, j))
    }

    fn edges_all<S: Signature<L> + ?Sized>(&self, sig: &S, want_equal: bool) -> bool {
        match self {
            Tree::Leaf => true,
            Tree::Node(l, cs) => {
                cs.len() == sig.label_arity(l)
                    && cs.iter().enumerate().all(|(j, c)| match c {
                        Tree::Leaf => true,
                        Tree::Node(m, _) => {
                            (sig.label_input(l, j + 1) == sig.label_out(m)) == want_equal
                                && c.edges_all(sig, want_equal)
                        }
                    })
            }
        }
    }

    /// Every internal edge satisfies `In_i(parent) = Out(child)`.
    pub fn is_colour_compatible<S: Signature<L> + ?Sized>(&self, sig: &S) -> bool {
        self.edges_all(sig, true)
    }

    /// Every internal edge satisfies `In_i(parent) != Out(child)`.
    pub fn is_anticoloured<S: Signature<L> + ?Sized>(&self, sig: &S) -> bool {
        self.edges_all(sig, false)
    }

    pub fn write_literal<F: Fn(&L) -> String>(&self, name: &F) -> String {
        let mut s = String::new();
        fn go<L, F: Fn(&L) -> String>(t: &Tree<L>, name: &F, s: &mut String) {
            match t {
                Tree::Leaf => s.push('*'),
                Tree::Node(l, cs) => {
                    s.push_str(&name(l));
                    s.push('[');
                    for (j, c) in cs.iter().enumerate() {
                        if j > 0 {
                            s.push(',');
                        }
                        go(c, name, s);
                    }
                    s.push(']');
                }
            }
        }
        go(self, name, &mut s);
        s
    }
}

/// Parse `tree := LABEL "[" child ("," child)* "]" ; child := "*" | tree`.
/// A bare `*` is accepted as the leaf.
pub fn parse_tree<L, F>(input: &str, mut label: F) -> Result<Tree<L>>
where
    F: FnMut(&str) -> Result<L>,
{
    struct P<'a> {
        s: &'a [u8],
        pos: usize,
    }
    impl P<'_> {
        fn skip_ws(&mut self) {
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
        }
        fn peek(&mut self) -> Option<u8> {
            self.skip_ws();
            self.s.get(self.pos).copied()
        }
        fn expect(&mut self, c: u8) -> Result<()> {
            if self.peek() == Some(c) {
                self.pos += 1;
                Ok(())
            } else {
                Err(Error::Parse(format!("expected `{}` at byte {}", c as char, self.pos)))
            }
        }
    }
    fn tree<L, F: FnMut(&str) -> Result<L>>(p: &mut P<'_>, label: &mut F) -> Result<Tree<L>> {
        if p.peek() == Some(b'*') {
            p.pos += 1;
            return Ok(Tree::Leaf);
        }
        let start = p.pos;
        while p.pos < p.s.len()
            && (p.s[p.pos].is_ascii_alphanumeric() || p.s[p.pos] == b'_' || p.s[p.pos] == b':')
        {
            p.pos += 1;
        }
        if start == p.pos {
            return Err(Error::Parse(format!("expected a label at byte {start}")));
        }
        let name = std::str::from_utf8(&p.s[start..p.pos]).expect("ascii");
        let l = label(name)?;
        p.expect(b'[')?;
        let mut cs = vec![tree(p, label)?];
        while p.peek() == Some(b',') {
            p.pos += 1;
            cs.push(tree(p, label)?);
        }
        p.expect(b']')?;
        Ok(Tree::Node(l, cs))
    }
    let mut p = P {
        s: input.as_bytes(),
        pos: 0,
    };
    let t = tree(&mut p, &mut label)?;
    if p.peek().is_some() {
        return Err(Error::Parse(format!("trailing input at byte {}", p.pos)));
    }
    Ok(t)
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct LabelId(pub u16);

pub type SyntaxTree = Tree<LabelId>;

/// A finite graded set of named labels with output and input colours.
#[derive(Clone, Debug)]
pub struct ColouredCollection {
    k: u8,
    names: Vec<String>,
    shapes: Vec<Shape>,
    index: HashMap<String, LabelId>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    Degree(usize),
    Arity(usize),
}

impl ColouredCollection {
    pub fn new(k: u8) -> ColouredCollection {
        ColouredCollection {
            k,
            names: Vec::new(),
            shapes: Vec::new(),
            index: HashMap::new(),
        }
    }

    /// The 2-coloured collection {a, b, c} with a: 1 <- (1,2), b: 2 <- (2,1),
    /// c: 2 <- (2,2,1).
    pub fn example() -> ColouredCollection {
        let c = |v| Colour(v);
        let mut col = ColouredCollection::new(2);
        col.add("a", Shape::new(c(1), vec![c(1), c(2)]).unwrap()).unwrap();
        col.add("b", Shape::new(c(2), vec![c(2), c(1)]).unwrap()).unwrap();
        col.add("c", Shape::new(c(2), vec![c(2), c(2), c(1)]).unwrap()).unwrap();
        col
    }

    pub fn add(&mut self, name: &str, shape: Shape) -> Result<LabelId> {
        if self.index.contains_key(name) {
            return Err(Error::InvalidShape(format!("duplicate label `{name}`")));
        }
        if shape.out.0 > self.k || shape.ins.iter().any(|c| c.0 > self.k) {
            return Err(Error::InvalidShape(format!("colour out of range 1..={} in `{name}`", self.k)));
        }
        let id = LabelId(self.names.len() as u16);
        self.names.push(name.to_string());
        self.shapes.push(shape);
        self.index.insert(name.to_string(), id);
        Ok(id)
    }

    /// Same labels and arities, every colour forgotten to 1.
    pub fn uncoloured(&self) -> ColouredCollection {
        let mut out = ColouredCollection::new(1);
        for (n, s) in self.names.iter().zip(&self.shapes) {
            out.add(n, Shape::new(Colour::ONE, vec![Colour::ONE; s.arity()]).unwrap())
                .unwrap();
        }
        out
    }

    pub fn colours(&self) -> u8 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = LabelId> + '_ {
        (0..self.names.len()).map(|i| LabelId(i as u16))
    }

    pub fn label(&self, name: &str) -> Result<LabelId> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(name.to_string()))
    }

    pub fn name(&self, id: LabelId) -> &str {
        &self.names[id.0 as usize]
    }

    pub fn shape(&self, id: LabelId) -> &Shape {
        &self.shapes[id.0 as usize]
    }

    pub fn corolla(&self, name: &str) -> Result<SyntaxTree> {
        let id = self.label(name)?;
        Ok(Tree::corolla(id, self.shape(id).arity()))
    }

    /// Free coloured operad composition: graft the root of `t` on leaf `i` of `s`.
    pub fn graft(&self, s: &SyntaxTree, i: usize, t: &SyntaxTree) -> Result<SyntaxTree> {
        let arity = s.arity();
        if i == 0 || i > arity {
            return Err(Error::IndexOutOfRange { index: i, arity });
        }
        if let (Some(expected), Some(found)) = (s.input_colour(self, i), t.out_colour(self)) {
            if expected != found {
                return Err(Error::ColourMismatch { index: i, expected, found });
            }
        }
        Ok(s.graft_raw(i, t).expect("index checked"))
    }

    pub fn parse(&self, literal: &str) -> Result<SyntaxTree> {
        let t = parse_tree(literal, |n| self.label(n))?;
        if !t.is_colour_compatible(self) {
            return Err(Error::Parse(format!("`{literal}` is not colour compatible")));
        }
        Ok(t)
    }

    pub fn literal(&self, t: &SyntaxTree) -> String {
        t.write_literal(&|l: &LabelId| self.name(*l).to_string())
    }

    fn name_ranks(&self) -> Vec<u16> {
        let mut order: Vec<usize> = (0..self.names.len()).collect();
        order.sort_by(|&a, &b| self.names[a].cmp(&self.names[b]));
        let mut rank = vec![0u16; self.names.len()];
        for (r, &i) in order.iter().enumerate() {
            rank[i] = r as u16 + 1;
        }
        rank
    }

    /// Canonical sort key: degree, then preorder tokens with `*` before every
    /// label name.
    pub fn canonical_key(&self, t: &SyntaxTree) -> (usize, Vec<u16>) {
        canonical_key_with(t, &self.name_ranks())
    }

    /// All colour-compatible trees with output colour `out` meeting `bound`
    /// exactly, in canonical order.
    pub fn enumerate_trees(&self, out: Colour, bound: Bound) -> Vec<SyntaxTree> {
        self.enumerate_trees_with(out, bound, Strategy::current())
    }

    pub fn enumerate_trees_with(&self, out: Colour, bound: Bound, strategy: Strategy) -> Vec<SyntaxTree> {
        let degrees: Vec<usize> = match bound {
            Bound::Degree(d) => vec![d],
            Bound::Arity(n) => (0..n.max(1)).collect(),
        };
        let mut en = Enumerator::new(self);
        let mut all = Vec::new();
        for d in degrees {
            let trees = en.collect_degree(out, d, strategy);
            all.extend(trees.into_iter().filter(|t| match bound {
                Bound::Arity(n) => t.arity() == n,
                Bound::Degree(_) => true,
            }));
        }
        let rank = self.name_ranks();
        all.sort_by_cached_key(|t| canonical_key_with(t, &rank));
        all
    }

    /// Number of trees of degree `d` and output `out` satisfying `pred`,
    /// streamed without materializing the top level.
    pub fn count_trees_where<F>(&self, out: Colour, d: usize, strategy: Strategy, pred: F) -> usize
    where
        F: Fn(&SyntaxTree) -> bool + Sync + Send,
    {
        let mut en = Enumerator::new(self);
        en.fold_degree(out, d, strategy, 0usize, |acc, t| acc + usize::from(pred(t)), |a, b| a + b)
    }
}

impl ColouredCollection {
    /// Sequentially visit every tree of degree `d` and output `out`, with
    /// memory bounded by the lower levels.
    pub fn for_each_tree<F: FnMut(&SyntaxTree)>(&self, out: Colour, d: usize, mut f: F) {
        if d == 0 {
            f(&Tree::Leaf);
            return;
        }
        let mut en = Enumerator::new(self);
        let (plans, _) = en.work_units(out, d);
        for p in &plans {
            en.for_each_in_plan(p, None, &mut |t| f(&t));
        }
    }

    /// Degrees whose trees can have arity `n`.
    pub fn degrees_for_arity(&self, n: usize) -> std::ops::RangeInclusive<usize> {
        if n <= 1 {
            return 0..=0;
        }
        let lo = self.shapes.iter().map(|s| s.arity() - 1).max().unwrap_or(0);
        let hi = self.shapes.iter().map(|s| s.arity() - 1).min().unwrap_or(0);
        if lo == 0 {
            return 1..=0;
        }
        (n - 1).div_ceil(lo)..=(n - 1) / hi
    }

    pub fn colour_list(&self) -> Vec<Colour> {
        (1..=self.k).map(Colour).collect()
    }
}

impl Signature<LabelId> for ColouredCollection {
    fn label_arity(&self, label: &LabelId) -> usize {
        self.shape(*label).arity()
    }
    fn label_out(&self, label: &LabelId) -> Colour {
        self.shape(*label).out
    }
    fn label_input(&self, label: &LabelId, i: usize) -> Colour {
        self.shape(*label).ins[i - 1]
    }
}

pub(crate) fn canonical_key_with(t: &SyntaxTree, rank: &[u16]) -> (usize, Vec<u16>) {
    let mut toks = Vec::new();
    fn go(t: &SyntaxTree, rank: &[u16], toks: &mut Vec<u16>) {
        match t {
            Tree::Leaf => toks.push(0),
            Tree::Node(l, cs) => {
                toks.push(rank[l.0 as usize]);
                cs.iter().for_each(|c| go(c, rank, toks));
            }
        }
    }
    go(t, rank, &mut toks);
    (t.degree(), toks)
}

/// All compositions of `total` into `parts` nonnegative parts.
pub(crate) fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn go(total: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            cur.push(total);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for first in 0..=total {
            cur.push(first);
            go(total - first, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(total, parts, &mut Vec::new(), &mut out);
    out
}

/// Memoized level-by-level tree generation.
struct Enumerator<'a> {
    col: &'a ColouredCollection,
    memo: HashMap<(Colour, usize), Vec<SyntaxTree>>,
}

/// One root label with a fixed split of the remaining degree among children.
struct Plan {
    label: LabelId,
    parts: Vec<(Colour, usize)>,
}

impl<'a> Enumerator<'a> {
    fn new(col: &'a ColouredCollection) -> Self {
        Enumerator { col, memo: HashMap::new() }
    }

    fn plans(&self, out: Colour, d: usize) -> Vec<Plan> {
        let mut plans = Vec::new();
        for id in self.col.ids() {
            let sh = self.col.shape(id);
            if sh.out != out {
                continue;
            }
            for split in compositions(d - 1, sh.arity()) {
                plans.push(Plan {
                    label: id,
                    parts: sh.ins.iter().copied().zip(split).collect(),
                });
            }
        }
        plans
    }

    fn level(&mut self, c: Colour, d: usize) -> &Vec<SyntaxTree> {
        if !self.memo.contains_key(&(c, d)) {
            let v = if d == 0 {
                vec![Tree::Leaf]
            } else {
                let plans = self.plans(c, d);
                for p in &plans {
                    for &(cc, dd) in &p.parts {
                        self.level(cc, dd);
                    }
                }
                let mut v = Vec::new();
                for p in &plans {
                    self.for_each_in_plan(p, None, &mut |t| v.push(t));
                }
                v
            };
            self.memo.insert((c, d), v);
        }
        &self.memo[&(c, d)]
    }

    /// Visit every tree of a plan; with `first = Some(k)` only those whose
    /// first child is the k-th tree of its level.
    fn for_each_in_plan(&self, p: &Plan, first: Option<usize>, f: &mut dyn FnMut(SyntaxTree)) {
        let lists: Vec<&Vec<SyntaxTree>> = p.parts.iter().map(|k| &self.memo[k]).collect();
        if lists.iter().any(|l| l.is_empty()) {
            return;
        }
        let mut idx = vec![0usize; lists.len()];
        let lo = first.unwrap_or(0);
        let hi = first.map(|k| k + 1).unwrap_or(lists[0].len());
        idx[0] = lo;
        loop {
            let children: Vec<SyntaxTree> = idx.iter().zip(&lists).map(|(&i, l)| l[i].clone()).collect();
            f(Tree::Node(p.label, children));
            // odometer, least significant at the end
            let mut pos = lists.len();
            loop {
                if pos == 0 {
                    return;
                }
                pos -= 1;
                idx[pos] += 1;
                let limit = if pos == 0 { hi } else { lists[pos].len() };
                if idx[pos] < limit {
                    break;
                }
                if pos == 0 {
                    return;
                }
                idx[pos] = 0;
            }
        }
    }

    fn work_units(&mut self, out: Colour, d: usize) -> (Vec<Plan>, Vec<(usize, usize)>) {
        let plans = self.plans(out, d);
        for p in &plans {
            for &(cc, dd) in &p.parts {
                self.level(cc, dd);
            }
        }
        let mut units = Vec::new();
        for (pi, p) in plans.iter().enumerate() {
            let n0 = self.memo[&p.parts[0]].len();
            units.extend((0..n0).map(|k| (pi, k)));
        }
        (plans, units)
    }

    fn collect_degree(&mut self, out: Colour, d: usize, strategy: Strategy) -> Vec<SyntaxTree> {
        if d == 0 {
            return vec![Tree::Leaf];
        }
        let (plans, units) = self.work_units(out, d);
        let this = &*self;
        exec::map(strategy, &units, |&(pi, k)| {
            let mut v = Vec::new();
            this.for_each_in_plan(&plans[pi], Some(k), &mut |t| v.push(t));
            v
        })
        .into_iter()
        .flatten()
        .collect()
    }

    fn fold_degree<A, F, R>(&mut self, out: Colour, d: usize, strategy: Strategy, init: A, f: F, reduce: R) -> A
    where
        A: Send + Clone + Sync,
        F: Fn(A, &SyntaxTree) -> A + Sync + Send,
        R: Fn(A, A) -> A,
    {
        if d == 0 {
            return f(init, &Tree::Leaf);
        }
        let (plans, units) = self.work_units(out, d);
        let this = &*self;
        let parts = exec::map(strategy, &units, |&(pi, k)| {
            let mut acc = Some(init.clone());
            this.for_each_in_plan(&plans[pi], Some(k), &mut |t| {
                let a = acc.take().unwrap();
                acc = Some(f(a, &t));
            });
            acc.unwrap()
        });
        parts.into_iter().fold(init, reduce)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_binary() -> ColouredCollection {
        let mut c = ColouredCollection::new(1);
        let one = Colour::ONE;
        c.add("x", Shape::new(one, vec![one, one]).unwrap()).unwrap();
        c.add("y", Shape::new(one, vec![one, one]).unwrap()).unwrap();
        c
    }

    #[test]
    fn corolla_shapes() {
        let col = ColouredCollection::example();
        let a = col.corolla("a").unwrap();
        assert_eq!((a.arity(), a.degree()), (2, 1));
        assert_eq!(a.out_colour(&col), Some(Colour::ONE));
        let c = col.corolla("c").unwrap();
        assert_eq!(c.input_colour(&col, 3), Some(Colour::ONE));
        assert!(matches!(col.corolla("zz"), Err(Error::UnknownLabel(_))));
    }

    /// The arity-9, degree-7 tree of the example collection.
    fn big_tree(col: &ColouredCollection) -> SyntaxTree {
        col.parse("a[a[a[*,*],*],c[b[*,*],b[*,*],a[*,*]]]").unwrap()
    }

    #[test]
    fn example_tree_statistics() {
        let col = ColouredCollection::example();
        let t = big_tree(&col);
        assert_eq!(t.arity(), 9);
        assert_eq!(t.degree(), 7);
        assert_eq!(t.out_colour(&col), Some(Colour::ONE));
        assert_eq!(t.input_colour(&col, 2), Some(Colour::TWO));
    }

    #[test]
    fn graft_example_composition() {
        let col = ColouredCollection::example();
        let s = big_tree(&col);
        let t = col.parse("c[b[*,*],*,a[*,*]]").unwrap();
        let r = col.graft(&s, 3, &t).unwrap();
        assert_eq!(r.arity(), 13);
        assert_eq!(r.degree(), 10);
        assert!(r.is_colour_compatible(&col));
        assert_eq!(
            col.literal(&r),
            "a[a[a[*,*],c[b[*,*],*,a[*,*]]],c[b[*,*],b[*,*],a[*,*]]]"
        );
    }

    #[test]
    fn graft_errors_and_units() {
        let col = ColouredCollection::example();
        let a = col.corolla("a").unwrap();
        let b = col.corolla("b").unwrap();
        // In_1(a) = 1, Out(b) = 2
        assert!(matches!(col.graft(&a, 1, &b), Err(Error::ColourMismatch { .. })));
        assert!(matches!(col.graft(&a, 3, &a), Err(Error::IndexOutOfRange { .. })));
        assert_eq!(col.graft(&a, 2, &Tree::Leaf).unwrap(), a);
        assert_eq!(col.graft(&Tree::Leaf, 1, &b).unwrap(), b);
    }

    #[test]
    fn operad_axioms_exhaustive_small() {
        // (S o_i T) o_j U against the re-indexed alternatives, all trees of
        // degree <= 2 (both colours) over the example collection.
        let col = ColouredCollection::example();
        let mut trees = Vec::new();
        for c in [Colour::ONE, Colour::TWO] {
            for d in 0..=2 {
                trees.extend(col.enumerate_trees(c, Bound::Degree(d)));
            }
        }
        let trees: Vec<_> = trees.into_iter().filter(|t| !t.is_leaf()).collect();
        let mut checked = 0;
        for s in &trees {
            for t in &trees {
                for i in 1..=s.arity() {
                    let Ok(st) = col.graft(s, i, t) else { continue };
                    for u in &trees {
                        for j in 1..=st.arity() {
                            let Ok(lhs) = col.graft(&st, j, u) else { continue };
                            let (m, n) = (s.arity(), t.arity());
                            let rhs = if j < i {
                                // parallel, u to the left
                                col.graft(&col.graft(s, j, u).unwrap(), i + u.arity() - 1, t).unwrap()
                            } else if j < i + n {
                                // sequential
                                col.graft(s, i, &col.graft(t, j - i + 1, u).unwrap()).unwrap()
                            } else {
                                // parallel, u to the right
                                col.graft(&col.graft(s, j - n + 1, u).unwrap(), i, t).unwrap()
                            };
                            assert_eq!(lhs, rhs);
                            assert_eq!(lhs.arity(), m + n + u.arity() - 2);
                            checked += 1;
                        }
                    }
                }
            }
        }
        assert!(checked > 1000);
    }

    #[test]
    fn enumeration_counts() {
        let col = two_binary();
        assert_eq!(col.enumerate_trees(Colour::ONE, Bound::Degree(0)), vec![Tree::Leaf]);
        assert_eq!(col.enumerate_trees(Colour::ONE, Bound::Degree(3)).len(), 5 * 8);
        // Catalan(6) * 2^6
        let all = col.enumerate_trees(Colour::ONE, Bound::Degree(6));
        assert_eq!(all.len(), 132 * 64);
        let set: std::collections::HashSet<_> = all.iter().collect();
        assert_eq!(set.len(), all.len());
        assert_eq!(all, col.enumerate_trees_with(Colour::ONE, Bound::Degree(6), Strategy::Sequential));
        assert_eq!(col.enumerate_trees(Colour::ONE, Bound::Arity(7)).len(), 132 * 64);
        assert_eq!(
            col.count_trees_where(Colour::ONE, 6, Strategy::Parallel, |_| true),
            132 * 64
        );
    }

    #[test]
    fn enumeration_is_canonical() {
        let col = ColouredCollection::example();
        let ts = col.enumerate_trees(Colour::TWO, Bound::Degree(3));
        let keys: Vec<_> = ts.iter().map(|t| col.canonical_key(t)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert!(ts.iter().all(|t| t.is_colour_compatible(&col) && t.degree() == 3));
    }

    #[test]
    fn literal_roundtrip_and_errors() {
        let col = ColouredCollection::example();
        let t = big_tree(&col);
        assert_eq!(col.parse(&col.literal(&t)).unwrap(), t);
        assert!(col.parse("a[*]").is_err());
        assert!(col.parse("a[*,*").is_err());
        assert!(col.parse("a[b[*,*],*]").is_err());
        assert_eq!(col.parse("*").unwrap(), Tree::Leaf);
    }

    #[test]
    fn leaf_slots() {
        let col = ColouredCollection::example();
        let t = big_tree(&col);
        assert_eq!(t.leaf_slot(1), Some((vec![0, 0], 1)));
        assert_eq!(t.leaf_slot(3), Some((vec![0], 2)));
        assert_eq!(t.leaf_slot(9), Some((vec![1, 2], 2)));
        assert_eq!(t.leaf_slot(10), None);
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(3, 2).len(), 4);
        assert_eq!(compositions(0, 3), vec![vec![0, 0, 0]]);
        assert_eq!(compositions(2, 3).len(), 6);
    }
}
