//! The enveloping operad of a coloured operad, realised on anticoloured
//! trees: planar trees labelled by nontrivial elements in which no parent
//! input colour matches the output colour of the child plugged into it.
//!
//! Models are given by composition tables ([`ColouredOperad`]); reduction
//! merges a colour-matching parent/child pair into their composite.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Debug;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::exec::Strategy;
use crate::presentations::closure_with;
use crate::series::{coloured_hilbert, MultiSeries, TruncSeries};
use crate::trees::{compositions, Colour, Signature, Tree};

/// A coloured operad presented by its (finite per arity) nontrivial
/// elements and a partial composition.
pub trait ColouredOperad: Signature<Self::Elem> + Sync {
    type Elem: Clone + Eq + Hash + Ord + Debug + Send + Sync;

    fn colours(&self) -> u8;

    /// `x o_i y`, defined iff `Out(y) = In_i(x)`.
    fn compose(&self, x: &Self::Elem, i: usize, y: &Self::Elem) -> Option<Self::Elem>;

    /// Nontrivial elements of arity `n` (empty for `n < 2`).
    fn elements(&self, n: usize) -> Vec<Self::Elem>;

    /// Largest arity for which [`ColouredOperad::elements`] is complete.
    fn max_arity(&self) -> Option<usize> {
        None
    }

    /// Number of inputs of each colour.
    fn input_counts(&self, x: &Self::Elem) -> Vec<u32> {
        let mut v = vec![0; self.colours() as usize];
        for i in 1..=self.label_arity(x) {
            v[self.label_input(x, i).get() as usize - 1] += 1;
        }
        v
    }

    fn name(&self, x: &Self::Elem) -> String;
}

pub type AntiTree<E> = Tree<E>;

/// One-coloured operad with a single element `beta_n` in each arity `n >= 2`:
/// output 1, first input 1, other inputs 2, so that only
/// `beta_n o_1 beta_m = beta_{n+m-1}` is defined.
#[derive(Clone, Copy, Debug, Default)]
pub struct Fas;

impl Signature<usize> for Fas {
    fn label_arity(&self, x: &usize) -> usize {
        *x
    }
    fn label_out(&self, _: &usize) -> Colour {
        Colour::ONE
    }
    fn label_input(&self, _: &usize, i: usize) -> Colour {
        if i == 1 {
            Colour::ONE
        } else {
            Colour::TWO
        }
    }
}

impl ColouredOperad for Fas {
    type Elem = usize;

    fn colours(&self) -> u8 {
        2
    }

    fn compose(&self, x: &usize, i: usize, y: &usize) -> Option<usize> {
        (i == 1).then_some(x + y - 1)
    }

    fn elements(&self, n: usize) -> Vec<usize> {
        if n >= 2 {
            vec![n]
        } else {
            Vec::new()
        }
    }

    fn name(&self, x: &usize) -> String {
        format!("beta{x}")
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Alpha;

/// A single binary element with output 1 and inputs (2, 2): nothing composes.
#[derive(Clone, Copy, Debug, Default)]
pub struct Alpha2;

impl Signature<Alpha> for Alpha2 {
    fn label_arity(&self, _: &Alpha) -> usize {
        2
    }
    fn label_out(&self, _: &Alpha) -> Colour {
        Colour::ONE
    }
    fn label_input(&self, _: &Alpha, _: usize) -> Colour {
        Colour::TWO
    }
}

impl ColouredOperad for Alpha2 {
    type Elem = Alpha;

    fn colours(&self) -> u8 {
        2
    }

    fn compose(&self, _: &Alpha, _: usize, _: &Alpha) -> Option<Alpha> {
        None
    }

    fn elements(&self, n: usize) -> Vec<Alpha> {
        if n == 2 {
            vec![Alpha]
        } else {
            Vec::new()
        }
    }

    fn name(&self, _: &Alpha) -> String {
        "alpha".into()
    }
}

/// The suboperad of `M` generated by some elements, materialised up to a
/// fixed arity.
#[derive(Clone, Debug)]
pub struct SubOperad<M: ColouredOperad> {
    parent: M,
    levels: Vec<Vec<M::Elem>>,
}

impl<M: ColouredOperad + Clone> SubOperad<M> {
    pub fn generate(parent: M, gens: &[M::Elem], max_arity: usize, strategy: Strategy) -> Self {
        let levels = closure_with(
            gens,
            max_arity,
            strategy,
            |x| parent.label_arity(x),
            |x, i, y| parent.compose(x, i, y),
        );
        SubOperad { parent, levels }
    }

    pub fn parent(&self) -> &M {
        &self.parent
    }

    pub fn contains(&self, x: &M::Elem) -> bool {
        self.levels
            .get(self.parent.label_arity(x))
            .is_some_and(|l| l.binary_search(x).is_ok())
    }

    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }
}

impl<M: ColouredOperad> Signature<M::Elem> for SubOperad<M> {
    fn label_arity(&self, x: &M::Elem) -> usize {
        self.parent.label_arity(x)
    }
    fn label_out(&self, x: &M::Elem) -> Colour {
        self.parent.label_out(x)
    }
    fn label_input(&self, x: &M::Elem, i: usize) -> Colour {
        self.parent.label_input(x, i)
    }
}

impl<M: ColouredOperad> ColouredOperad for SubOperad<M> {
    type Elem = M::Elem;

    fn colours(&self) -> u8 {
        self.parent.colours()
    }

    fn compose(&self, x: &M::Elem, i: usize, y: &M::Elem) -> Option<M::Elem> {
        self.parent.compose(x, i, y)
    }

    fn elements(&self, n: usize) -> Vec<M::Elem> {
        self.levels.get(n).cloned().unwrap_or_default()
    }

    fn max_arity(&self) -> Option<usize> {
        Some(self.levels.len().saturating_sub(1))
    }

    fn input_counts(&self, x: &M::Elem) -> Vec<u32> {
        self.parent.input_counts(x)
    }

    fn name(&self, x: &M::Elem) -> String {
        self.parent.name(x)
    }
}

/// Merge node `node` with its child at 0-based position `j`, if colours match.
fn merge_child<M: ColouredOperad>(model: &M, node: &Tree<M::Elem>, j: usize) -> Option<Tree<M::Elem>> {
    let Tree::Node(x, cs) = node else { return None };
    let Tree::Node(y, ds) = cs.get(j)? else { return None };
    if model.label_input(x, j + 1) != model.label_out(y) {
        return None;
    }
    let z = model
        .compose(x, j + 1, y)
        .unwrap_or_else(|| panic!("model composition undefined on matching colours"));
    let mut children = Vec::with_capacity(cs.len() + ds.len() - 1);
    children.extend_from_slice(&cs[..j]);
    children.extend_from_slice(ds);
    children.extend_from_slice(&cs[j + 1..]);
    Some(Tree::Node(z, children))
}

/// Paths (to the child node) of all reducible edges.
pub fn reducible_edges<M: ColouredOperad>(model: &M, t: &Tree<M::Elem>) -> Vec<Vec<usize>> {
    t.node_paths()
        .into_iter()
        .filter(|p| !p.is_empty())
        .filter(|p| {
            let parent = t.subtree(&p[..p.len() - 1]).unwrap();
            let child = t.subtree(p).unwrap();
            model.label_input(parent.label().unwrap(), p[p.len() - 1] + 1) == model.label_out(child.label().unwrap())
        })
        .collect()
}

/// Contract the edge above the node at `path`.
pub fn reduce_edge<M: ColouredOperad>(model: &M, t: &Tree<M::Elem>, path: &[usize]) -> Result<Tree<M::Elem>> {
    let (&j, parent_path) = path
        .split_last()
        .ok_or_else(|| Error::NotReducible("the root has no parent edge".into()))?;
    let parent = t
        .subtree(parent_path)
        .ok_or_else(|| Error::NotReducible(format!("no node at {path:?}")))?;
    let merged = merge_child(model, parent, j)
        .ok_or_else(|| Error::NotReducible(format!("edge above {path:?} joins different colours")))?;
    let mut out = t.clone();
    *out.subtree_mut(parent_path).unwrap() = merged;
    Ok(out)
}

/// Leftmost-innermost reduction to the anticoloured normal form.
pub fn normalize<M: ColouredOperad>(model: &M, t: &Tree<M::Elem>) -> Tree<M::Elem> {
    match t {
        Tree::Leaf => Tree::Leaf,
        Tree::Node(x, cs) => {
            let mut cur = Tree::Node(x.clone(), cs.iter().map(|c| normalize(model, c)).collect());
            loop {
                let k = cur.children().len();
                match (0..k).find_map(|j| merge_child(model, &cur, j)) {
                    Some(next) => cur = next,
                    None => return cur,
                }
            }
        }
    }
}

/// Every normal form reachable by some reduction sequence.
pub fn all_normal_forms<M: ColouredOperad>(model: &M, t: &Tree<M::Elem>) -> BTreeSet<Tree<M::Elem>> {
    let mut seen = BTreeSet::new();
    let mut nfs = BTreeSet::new();
    let mut stack = vec![t.clone()];
    while let Some(u) = stack.pop() {
        if !seen.insert(u.clone()) {
            continue;
        }
        let edges = reducible_edges(model, &u);
        if edges.is_empty() {
            nfs.insert(u);
            continue;
        }
        for p in edges {
            stack.push(reduce_edge(model, &u, &p).expect("edge is reducible"));
        }
    }
    nfs
}

/// Composition in the enveloping operad.
pub fn compose_anti<M: ColouredOperad>(
    model: &M,
    s: &Tree<M::Elem>,
    i: usize,
    t: &Tree<M::Elem>,
) -> Result<Tree<M::Elem>> {
    let arity = s.arity();
    if i == 0 || i > arity {
        return Err(Error::IndexOutOfRange { index: i, arity });
    }
    if t.is_leaf() {
        return Ok(s.clone());
    }
    if s.is_leaf() {
        return Ok(t.clone());
    }
    let (path, j) = s.leaf_slot(i).expect("index checked");
    let mut out = s.clone();
    let node = out.subtree_mut(&path).unwrap();
    let Tree::Node(_, cs) = node else { unreachable!() };
    cs[j - 1] = t.clone();
    if let Some(merged) = merge_child(model, node, j - 1) {
        *node = merged;
    }
    Ok(out)
}

fn anti_key<E: Clone>(t: &Tree<E>) -> (usize, Vec<Option<E>>) {
    fn go<E: Clone>(t: &Tree<E>, out: &mut Vec<Option<E>>) {
        match t {
            Tree::Leaf => out.push(None),
            Tree::Node(l, cs) => {
                out.push(Some(l.clone()));
                cs.iter().for_each(|c| go(c, out));
            }
        }
    }
    let mut v = Vec::new();
    go(t, &mut v);
    (t.degree(), v)
}

/// All anticoloured trees of arity `n` (optionally with a fixed output
/// colour), in canonical order: degree, then preorder with leaves first.
pub fn enumerate_anti<M: ColouredOperad>(model: &M, n: usize, out: Option<Colour>) -> Vec<Tree<M::Elem>> {
    if n == 1 {
        return vec![Tree::Leaf];
    }
    let mut memo: HashMap<(usize, Colour), Vec<Tree<M::Elem>>> = HashMap::new();
    let colours: Vec<Colour> = (1..=model.colours()).map(|c| Colour::new(c).unwrap()).collect();
    for m in 2..=n {
        for &c in &colours {
            let mut level = Vec::new();
            for k in 2..=m {
                for x in model.elements(k).into_iter().filter(|x| model.label_out(x) == c) {
                    for split in compositions(m - k, k) {
                        // each part carries one extra leaf: child arity = part + 1
                        let options: Vec<Vec<Tree<M::Elem>>> = split
                            .iter()
                            .enumerate()
                            .map(|(idx, &p)| {
                                let a = p + 1;
                                if a == 1 {
                                    return vec![Tree::Leaf];
                                }
                                let forbidden = model.label_input(&x, idx + 1);
                                colours
                                    .iter()
                                    .filter(|&&d| d != forbidden)
                                    .flat_map(|&d| memo.get(&(a, d)).cloned().unwrap_or_default())
                                    .collect()
                            })
                            .collect();
                        product(&options, &mut |cs| level.push(Tree::Node(x.clone(), cs)));
                    }
                }
            }
            memo.insert((m, c), level);
        }
    }
    let mut all: Vec<Tree<M::Elem>> = colours
        .iter()
        .filter(|&&c| out.map_or(true, |o| o == c))
        .flat_map(|&c| memo.remove(&(n, c)).unwrap_or_default())
        .collect();
    all.sort_by_cached_key(anti_key);
    all
}

fn product<T: Clone>(options: &[Vec<T>], f: &mut dyn FnMut(Vec<T>)) {
    if options.iter().any(Vec::is_empty) {
        return;
    }
    let mut idx = vec![0usize; options.len()];
    loop {
        f(idx.iter().zip(options).map(|(&i, o)| o[i].clone()).collect());
        let mut p = options.len();
        loop {
            if p == 0 {
                return;
            }
            p -= 1;
            idx[p] += 1;
            if idx[p] < options[p].len() {
                break;
            }
            idx[p] = 0;
        }
    }
}

/// Hilbert series of the enveloping operad and its per-root-colour parts.
#[derive(Clone, Debug)]
pub struct EnvelopeSeries {
    pub total: TruncSeries,
    pub by_colour: Vec<TruncSeries>,
}

/// Coloured Hilbert series of a model up to arity `n`.
pub fn model_hilbert<M: ColouredOperad>(model: &M, n: usize) -> Vec<MultiSeries> {
    let items = (2..=n).flat_map(|k| {
        model
            .elements(k)
            .into_iter()
            .map(|x| (model.label_out(&x), model.input_counts(&x)))
            .collect::<Vec<_>>()
    });
    coloured_hilbert(model.colours(), items, n)
}

/// Solve `F = t + sum_c F_c`, `F_c = B_c(F - F_1, ..., F - F_k)` to order `n`.
pub fn dims_via_series<M: ColouredOperad>(model: &M, n: usize) -> Result<EnvelopeSeries> {
    if let Some(max) = model.max_arity() {
        if n > max {
            return Err(Error::BoundExceeded { requested: n, limit: max });
        }
    }
    let b = model_hilbert(model, n);
    Ok(envelope_from_hilbert(&b, n))
}

/// The fixpoint recursion on given coloured series.
pub fn envelope_from_hilbert(b: &[MultiSeries], n: usize) -> EnvelopeSeries {
    let k = b.len();
    let t = TruncSeries::t(n);
    let mut parts = vec![TruncSeries::zero(n); k];
    // coefficient m of F_c only depends on coefficients < m of the F_d
    for _ in 0..n {
        let total = parts.iter().fold(t.clone(), |acc, p| acc.add(p));
        let subs: Vec<TruncSeries> = parts.iter().map(|p| total.sub(p)).collect();
        parts = b.iter().map(|bc| bc.substitute(&subs)).collect();
    }
    let total = parts.iter().fold(t, |acc, p| acc.add(p));
    EnvelopeSeries { total, by_colour: parts }
}

/// Check that `phi` is a morphism (or antimorphism) on all compositions
/// landing in arity at most `bound`.
pub fn check_morphism<S, T, F>(src: &S, tgt: &T, phi: &F, bound: usize, anti: bool) -> Result<()>
where
    S: ColouredOperad,
    T: ColouredOperad,
    F: Fn(&S::Elem) -> T::Elem,
{
    let kind = if anti { "antimorphism" } else { "morphism" };
    for a in 2..=bound {
        for x in src.elements(a) {
            let px = phi(&x);
            if tgt.label_arity(&px) != a {
                return Err(Error::MorphismCheck {
                    kind,
                    witness: format!("{} changes arity", src.name(&x)),
                });
            }
            for b in 2..=bound + 1 - a {
                for y in src.elements(b) {
                    let py = phi(&y);
                    for i in 1..=a {
                        let j = if anti { a - i + 1 } else { i };
                        let lhs = src.compose(&x, i, &y).map(|z| phi(&z));
                        let rhs = tgt.compose(&px, j, &py);
                        if lhs != rhs {
                            return Err(Error::MorphismCheck {
                                kind,
                                witness: format!("{} o_{i} {}", src.name(&x), src.name(&y)),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// The map induced on enveloping operads: relabel, mirror for
/// antimorphisms, then renormalise in the target.
pub fn lift_morphism<'a, S, T, F>(tgt: &'a T, phi: F, anti: bool) -> impl Fn(&Tree<S::Elem>) -> Tree<T::Elem> + 'a
where
    S: ColouredOperad,
    T: ColouredOperad,
    F: Fn(&S::Elem) -> T::Elem + 'a,
{
    move |t| {
        let relabelled = t.map_labels(&mut |x| phi(x));
        let shaped = if anti { relabelled.mirror() } else { relabelled };
        normalize(tgt, &shaped)
    }
}
