//! Rewrite systems on syntax trees: matching, normal forms, bounded
//! termination checks, the termination measure for the bubble orientation,
//! and the verifier for oriented presentations.

use std::collections::HashMap;
use std::fmt::Debug;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Strategy;
use crate::trees::{Colour, ColouredCollection, LabelId, Path, Signature, SyntaxTree, Tree};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lhs: SyntaxTree,
    pub rhs: SyntaxTree,
}

impl Rule {
    pub fn new(lhs: SyntaxTree, rhs: SyntaxTree) -> Result<Rule> {
        if lhs.arity() != rhs.arity() {
            return Err(Error::InvalidShape(format!(
                "rule sides have arities {} and {}",
                lhs.arity(),
                rhs.arity()
            )));
        }
        if lhs.is_leaf() {
            return Err(Error::InvalidShape("a rule source must have a node".into()));
        }
        Ok(Rule { lhs, rhs })
    }
}

#[derive(Clone, Debug)]
pub struct RewriteSystem {
    collection: ColouredCollection,
    rules: Vec<Rule>,
    by_root: HashMap<LabelId, Vec<usize>>,
}

/// Does `pattern` match `t` at its root? Pattern leaves match anything.
fn matches_at(pattern: &SyntaxTree, t: &SyntaxTree) -> bool {
    match (pattern, t) {
        (Tree::Leaf, _) => true,
        (Tree::Node(l, ps), Tree::Node(m, cs)) => {
            l == m && ps.len() == cs.len() && ps.iter().zip(cs).all(|(p, c)| matches_at(p, c))
        }
        _ => false,
    }
}

/// Subtrees of `t` sitting under the leaves of `pattern`, left to right.
fn bindings(pattern: &SyntaxTree, t: &SyntaxTree, out: &mut Vec<SyntaxTree>) {
    match pattern {
        Tree::Leaf => out.push(t.clone()),
        Tree::Node(_, ps) => {
            for (p, c) in ps.iter().zip(t.children()) {
                bindings(p, c, out);
            }
        }
    }
}

/// Root positions of every occurrence of `pattern` in `t`, preorder.
pub fn find_occurrences(pattern: &SyntaxTree, t: &SyntaxTree) -> Vec<Path> {
    if pattern.is_leaf() {
        return Vec::new();
    }
    t.node_paths()
        .into_iter()
        .filter(|p| matches_at(pattern, t.subtree(p).unwrap()))
        .collect()
}

impl RewriteSystem {
    pub fn new(collection: ColouredCollection, rules: Vec<Rule>) -> Result<Self> {
        let mut by_root: HashMap<LabelId, Vec<usize>> = HashMap::new();
        for (k, r) in rules.iter().enumerate() {
            if !r.lhs.is_colour_compatible(&collection) || !r.rhs.is_colour_compatible(&collection) {
                return Err(Error::InvalidShape(format!("rule {k} is not colour compatible")));
            }
            if r.lhs.out_colour(&collection) != r.rhs.out_colour(&collection) && !r.rhs.is_leaf() {
                return Err(Error::InvalidShape(format!("rule {k} changes the output colour")));
            }
            by_root.entry(*r.lhs.label().unwrap()).or_default().push(k);
        }
        Ok(RewriteSystem {
            collection,
            rules,
            by_root,
        })
    }

    /// Parse `src -> tgt` pairs over `collection`.
    pub fn from_literals(collection: ColouredCollection, pairs: &[(String, String)]) -> Result<Self> {
        let rules = pairs
            .iter()
            .map(|(l, r)| Rule::new(collection.parse(l)?, collection.parse(r)?))
            .collect::<Result<Vec<_>>>()?;
        Self::new(collection, rules)
    }

    pub fn collection(&self) -> &ColouredCollection {
        &self.collection
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    fn rules_at<'a>(&'a self, t: &'a SyntaxTree) -> impl Iterator<Item = &'a Rule> + 'a {
        t.label()
            .and_then(|l| self.by_root.get(l))
            .into_iter()
            .flatten()
            .map(|&k| &self.rules[k])
            .filter(move |r| matches_at(&r.lhs, t))
    }

    fn apply(rule: &Rule, t: &SyntaxTree) -> SyntaxTree {
        let mut subs = Vec::with_capacity(rule.lhs.arity());
        bindings(&rule.lhs, t, &mut subs);
        rule.rhs.substitute_leaves(&subs)
    }

    pub fn is_reducible(&self, t: &SyntaxTree) -> bool {
        match t {
            Tree::Leaf => false,
            Tree::Node(_, cs) => self.rules_at(t).next().is_some() || cs.iter().any(|c| self.is_reducible(c)),
        }
    }

    /// Every tree reachable in one rewrite.
    pub fn rewrite_step(&self, t: &SyntaxTree) -> Vec<SyntaxTree> {
        let mut out = Vec::new();
        for p in t.node_paths() {
            let sub = t.subtree(&p).unwrap();
            for r in self.rules_at(sub) {
                let mut u = t.clone();
                *u.subtree_mut(&p).unwrap() = Self::apply(r, sub);
                out.push(u);
            }
        }
        out
    }

    /// Leftmost-outermost rewrite: first node in preorder, first rule.
    pub fn rewrite_once(&self, t: &SyntaxTree) -> Option<SyntaxTree> {
        for p in t.node_paths() {
            let sub = t.subtree(&p).unwrap();
            if let Some(r) = self.rules_at(sub).next() {
                let mut u = t.clone();
                *u.subtree_mut(&p).unwrap() = Self::apply(r, sub);
                return Some(u);
            }
        }
        None
    }

    pub fn rewrite_to_nf(&self, t: &SyntaxTree, fuel: usize) -> Result<SyntaxTree> {
        let mut seen = std::collections::HashSet::new();
        let mut cur = t.clone();
        for _ in 0..fuel {
            if !seen.insert(cur.clone()) {
                return Err(Error::NonTerminating(format!("cycle through {}", self.collection.literal(&cur))));
            }
            match self.rewrite_once(&cur) {
                Some(next) => cur = next,
                None => return Ok(cur),
            }
        }
        Err(Error::NonTerminating(format!("fuel exhausted at {}", self.collection.literal(&cur))))
    }

    /// Number of irreducible trees of arity `n` and output `out`.
    pub fn count_normal_forms(&self, n: usize, out: Colour, strategy: Strategy) -> usize {
        let col = &self.collection;
        col.degrees_for_arity(n)
            .map(|d| col.count_trees_where(out, d, strategy, |t| t.arity() == n && !self.is_reducible(t)))
            .sum()
    }

    /// Exhaustive cycle search in the rewriting graph on trees of arity `n`.
    pub fn check_termination(&self, n: usize) -> Result<usize> {
        let col = &self.collection;
        let mut state: HashMap<u128, bool> = HashMap::new(); // false: on stack, true: done
        let mut failure: Option<Error> = None;
        for out in col.colour_list() {
            for d in col.degrees_for_arity(n) {
                col.for_each_tree(out, d, |t| {
                    if failure.is_some() || t.arity() != n {
                        return;
                    }
                    if let Err(e) = self.dfs(t, &mut state) {
                        failure = Some(e);
                    }
                });
            }
        }
        match failure {
            Some(e) => Err(e),
            None => Ok(state.len()),
        }
    }

    fn dfs(&self, root: &SyntaxTree, state: &mut HashMap<u128, bool>) -> Result<()> {
        let key = encode(root)?;
        if state.contains_key(&key) {
            return Ok(());
        }
        struct Frame {
            key: u128,
            succ: Vec<SyntaxTree>,
            next: usize,
        }
        state.insert(key, false);
        let mut stack = vec![Frame {
            key,
            succ: self.rewrite_step(root),
            next: 0,
        }];
        while let Some(top) = stack.last_mut() {
            if top.next == top.succ.len() {
                state.insert(top.key, true);
                stack.pop();
                continue;
            }
            let u = top.succ[top.next].clone();
            top.next += 1;
            let k = encode(&u)?;
            match state.get(&k) {
                Some(true) => {}
                Some(false) => {
                    return Err(Error::NonTerminating(format!(
                        "cycle through {}",
                        self.collection.literal(&u)
                    )))
                }
                None => {
                    state.insert(k, false);
                    let succ = self.rewrite_step(&u);
                    stack.push(Frame { key: k, succ, next: 0 });
                }
            }
        }
        Ok(())
    }
}

/// Preorder tokens packed 4 bits each (0 = leaf, 1 + label id).
fn encode(t: &SyntaxTree) -> Result<u128> {
    fn go(t: &SyntaxTree, acc: &mut u128, len: &mut usize) -> Result<()> {
        if *len >= 32 {
            return Err(Error::BoundExceeded { requested: *len + 1, limit: 32 });
        }
        *len += 1;
        match t {
            Tree::Leaf => *acc <<= 4,
            Tree::Node(l, cs) => {
                if l.0 >= 15 {
                    return Err(Error::BoundExceeded {
                        requested: l.0 as usize + 1,
                        limit: 15,
                    });
                }
                *acc = (*acc << 4) | (l.0 as u128 + 1);
                for c in cs {
                    go(c, acc, len)?;
                }
            }
        }
        Ok(())
    }
    let mut acc = 0u128;
    let mut len = 0;
    go(t, &mut acc, &mut len)?;
    // the length disambiguates leading leaves
    Ok(acc | ((len as u128) << 123))
}

/// The lexicographic termination measure `(a, b)`: `a` sums, over nodes,
/// the internal nodes of the right subtree; `b` counts nodes whose left
/// child is internal with a different first input colour.
pub fn psi<S: Signature<LabelId>>(sig: &S, t: &SyntaxTree) -> Result<(usize, usize)> {
    measure(sig, t, false)
}

/// [`psi`] with each first-input mismatch weighted by the depth of the
/// child. A rewrite between left combs moves a mismatch one level up (or
/// removes it), which leaves `b` unchanged but lowers this weight.
pub fn psi_weighted<S: Signature<LabelId>>(sig: &S, t: &SyntaxTree) -> Result<(usize, usize)> {
    measure(sig, t, true)
}

fn measure<S: Signature<LabelId>>(sig: &S, t: &SyntaxTree, weighted: bool) -> Result<(usize, usize)> {
    fn go<S: Signature<LabelId>>(
        sig: &S,
        t: &SyntaxTree,
        depth: usize,
        weighted: bool,
        acc: &mut (usize, usize),
    ) -> Result<()> {
        let Tree::Node(x, cs) = t else { return Ok(()) };
        if cs.len() != 2 {
            return Err(Error::NonBinary);
        }
        acc.0 += cs[1].degree();
        if let Tree::Node(y, _) = &cs[0] {
            if sig.label_input(x, 1) != sig.label_input(y, 1) {
                acc.1 += if weighted { depth + 1 } else { 1 };
            }
        }
        go(sig, &cs[0], depth + 1, weighted, acc)?;
        go(sig, &cs[1], depth + 1, weighted, acc)
    }
    let mut acc = (0, 0);
    go(sig, t, 0, weighted, &mut acc)?;
    Ok(acc)
}

/// A reference model against which a presentation is checked.
pub trait Interpretation: Sync {
    type Value: Eq + Debug;

    fn eval(&self, t: &SyntaxTree) -> Result<Self::Value>;

    /// Number of elements of arity `n` and output colour `c` in the
    /// generated suboperad (uncoloured models use colour 1).
    fn dimension(&self, n: usize, c: Colour) -> usize;
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CountRow {
    pub arity: usize,
    pub colour: u8,
    pub normal_forms: usize,
    pub expected: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrientationReport {
    pub sound: bool,
    pub unsound_witness: Option<String>,
    pub terminating: bool,
    pub termination_witness: Option<String>,
    /// `None` when no measure is registered for the system.
    pub psi: Option<MeasureReport>,
    pub counts: Vec<CountRow>,
}

impl OrientationReport {
    pub fn passed(&self) -> bool {
        self.sound
            && self.terminating
            && self.psi.as_ref().map_or(true, MeasureReport::passed)
            && self.counts.iter().all(|r| r.normal_forms == r.expected)
    }
}

/// Options of [`verify_good_orientation`].
#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub max_arity: usize,
    /// Degree bound of the exhaustive measure check, when registered.
    pub psi_degree: Option<usize>,
    pub strategy: Strategy,
}

/// Soundness, bounded termination and normal-form counts.
pub fn verify_good_orientation<I: Interpretation>(
    system: &RewriteSystem,
    model: &I,
    opts: VerifyOptions,
) -> Result<OrientationReport> {
    let col = system.collection();
    let mut unsound_witness = None;
    for r in system.rules() {
        if model.eval(&r.lhs)? != model.eval(&r.rhs)? {
            unsound_witness = Some(format!("{} -> {}", col.literal(&r.lhs), col.literal(&r.rhs)));
            break;
        }
    }
    let mut termination_witness = None;
    for n in 2..=opts.max_arity {
        if let Err(e) = system.check_termination(n) {
            termination_witness = Some(e.to_string());
            break;
        }
    }
    let psi = opts.psi_degree.map(|d| check_psi(system, d)).transpose()?;
    let mut counts = Vec::new();
    for n in 1..=opts.max_arity {
        for c in col.colour_list() {
            let nf = if n == 1 {
                // the unit has every colour; count it once
                usize::from(c == Colour::ONE)
            } else {
                system.count_normal_forms(n, c, opts.strategy)
            };
            let expected = if n == 1 { nf } else { model.dimension(n, c) };
            counts.push(CountRow {
                arity: n,
                colour: c.get(),
                normal_forms: nf,
                expected,
            });
        }
    }
    Ok(OrientationReport {
        sound: unsound_witness.is_none(),
        unsound_witness,
        terminating: termination_witness.is_none(),
        termination_witness,
        psi,
        counts,
    })
}

/// Behaviour of [`psi`] and [`psi_weighted`] over all single rewrites on
/// trees of bounded degree.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct MeasureReport {
    pub degree: usize,
    pub rewrites: usize,
    /// Rewrites leaving [`psi`] unchanged.
    pub ties: usize,
    /// Rewrites increasing [`psi`].
    pub increases: usize,
    pub tie_witness: Option<String>,
    /// Every rewrite strictly decreases [`psi_weighted`].
    pub weighted_strict: bool,
}

impl MeasureReport {
    pub fn strict(&self) -> bool {
        self.ties == 0 && self.increases == 0
    }

    /// The weighted measure certifies termination and the plain one never
    /// increases.
    pub fn passed(&self) -> bool {
        self.increases == 0 && self.weighted_strict
    }
}

pub fn check_psi(system: &RewriteSystem, d: usize) -> Result<MeasureReport> {
    let col = system.collection();
    let mut r = MeasureReport {
        degree: d,
        rewrites: 0,
        ties: 0,
        increases: 0,
        tie_witness: None,
        weighted_strict: true,
    };
    let mut err = None;
    for out in col.colour_list() {
        for k in 1..=d {
            col.for_each_tree(out, k, |t| {
                if err.is_some() {
                    return;
                }
                let (Ok(before), Ok(wbefore)) = (psi(col, t), psi_weighted(col, t)) else {
                    err = Some(Error::NonBinary);
                    return;
                };
                for u in system.rewrite_step(t) {
                    r.rewrites += 1;
                    let after = psi(col, &u).expect("rules preserve binarity");
                    match after.cmp(&before) {
                        std::cmp::Ordering::Less => {}
                        std::cmp::Ordering::Equal => {
                            r.ties += 1;
                            r.tie_witness
                                .get_or_insert_with(|| format!("{} -> {}", col.literal(t), col.literal(&u)));
                        }
                        std::cmp::Ordering::Greater => r.increases += 1,
                    }
                    if psi_weighted(col, &u).expect("binary") >= wbefore {
                        r.weighted_strict = false;
                    }
                }
            });
        }
    }
    match err {
        Some(e) => Err(e),
        None => Ok(r),
    }
}
