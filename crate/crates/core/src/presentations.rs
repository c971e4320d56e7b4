//! Registry of presentations and generator orbits, closures, the symmetry
//! search over the eight generators, and relation discovery.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::bubbles::{Bubble, Bulle, GENERATOR_NAMES};
use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::geometry::{refined_series, Bnc, Statistic};
use crate::rewrite::{
    verify_good_orientation, Interpretation, OrientationReport, RewriteSystem, Rule, VerifyOptions,
};
use crate::series::{expand_rational, MultiSeries, Trunc};
use crate::trees::{Bound, Colour, ColouredCollection, Shape, SyntaxTree, Tree};

/// Elements generated by `gens`, graded by arity `0..=max_n`, each level
/// sorted. Level `n` collects `x o_i g` for generators `g` and elements `x`
/// of arity `n - |g| + 1`.
pub fn closure_with<T, A, C>(gens: &[T], max_n: usize, strategy: Strategy, arity: A, compose: C) -> Vec<Vec<T>>
where
    T: Clone + Eq + Hash + Ord + Send + Sync,
    A: Fn(&T) -> usize + Sync + Send,
    C: Fn(&T, usize, &T) -> Option<T> + Sync + Send,
{
    let mut levels: Vec<Vec<T>> = vec![Vec::new(); max_n + 1];
    for n in 2..=max_n {
        let mut set: HashSet<T> = gens.iter().filter(|g| arity(g) == n).cloned().collect();
        for g in gens {
            let a = arity(g);
            if a < 2 || a > n || n + 1 - a < 2 {
                continue;
            }
            let found = exec::map(strategy, &levels[n + 1 - a], |x| {
                (1..=arity(x)).filter_map(|i| compose(x, i, g)).collect::<Vec<T>>()
            });
            set.extend(found.into_iter().flatten());
        }
        let mut level: Vec<T> = set.into_iter().collect();
        level.sort();
        levels[n] = level;
    }
    levels
}

pub fn bulle_closure(gens: &[Bubble], max_n: usize, strategy: Strategy) -> Vec<Vec<Bubble>> {
    closure_with(gens, max_n, strategy, Bubble::arity, |x, i, y| x.compose(i, y).ok())
}

pub fn cncb_closure(gens: &[Bnc], max_n: usize, strategy: Strategy) -> Vec<Vec<Bnc>> {
    closure_with(gens, max_n, strategy, Bnc::size, |x, i, y| x.compose(i, y).ok())
}

/// All BNCs of sizes `0..=max_n`, generated from the eight triangles.
pub fn cncb_elements(max_n: usize, strategy: Strategy) -> Vec<Vec<Bnc>> {
    let gens: Vec<Bnc> = Bubble::generators().iter().map(Bubble::to_bnc).collect();
    let mut levels = cncb_closure(&gens, max_n, strategy);
    if max_n >= 1 {
        levels[1].push(Bnc::unit());
    }
    levels
}

pub fn refined_cncb(max_n: usize, stat: Statistic, strategy: Strategy) -> MultiSeries {
    let levels = cncb_elements(max_n, strategy);
    refined_series(levels.iter().flatten(), stat, max_n)
}

/// Generators from a comma-separated list of names or bubble literals.
pub fn parse_generators(list: &str) -> Result<Vec<Bubble>> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect()
}

fn label_of(b: &Bubble) -> String {
    b.name().unwrap_or_else(|| b.to_string())
}

/// A coloured collection with one label per generator, labels in input order.
pub fn generator_collection(gens: &[Bubble]) -> Result<ColouredCollection> {
    let mut col = ColouredCollection::new(2);
    for g in gens {
        let ins = (1..=g.arity()).map(|i| g.input(i)).collect();
        col.add(&label_of(g), Shape::new(g.out(), ins)?)?;
    }
    Ok(col)
}

/// Value of a coloured tree over `gens` in the operad of bubbles.
pub fn eval_bulle(gens: &[Bubble], t: &SyntaxTree) -> Result<Option<Bubble>> {
    fn go(gens: &[Bubble], t: &SyntaxTree) -> Result<Bubble> {
        let Tree::Node(l, cs) = t else { unreachable!() };
        let mut acc = gens[l.0 as usize].clone();
        for (j, c) in cs.iter().enumerate().rev() {
            if !c.is_leaf() {
                acc = acc.compose(j + 1, &go(gens, c)?)?;
            }
        }
        Ok(acc)
    }
    if t.is_leaf() {
        return Ok(None);
    }
    go(gens, t).map(Some)
}

/// Value of an (uncoloured) tree over `gens` in the operad of BNCs.
pub fn eval_cncb(gens: &[Bnc], t: &SyntaxTree) -> Bnc {
    match t {
        Tree::Leaf => Bnc::unit(),
        Tree::Node(l, cs) => {
            let mut acc = gens[l.0 as usize].clone();
            for (j, c) in cs.iter().enumerate().rev() {
                if !c.is_leaf() {
                    acc = acc.compose(j + 1, &eval_cncb(gens, c)).expect("index within arity");
                }
            }
            acc
        }
    }
}

/// Bubble-operad interpretation with the dimensions of the generated suboperad.
pub struct BulleModel {
    gens: Vec<Bubble>,
    counts: HashMap<(usize, Colour), usize>,
}

impl BulleModel {
    pub fn new(gens: &[Bubble], max_n: usize, strategy: Strategy) -> Self {
        let mut counts = HashMap::new();
        for (n, level) in bulle_closure(gens, max_n, strategy).iter().enumerate() {
            for b in level {
                *counts.entry((n, b.out())).or_insert(0) += 1;
            }
        }
        BulleModel {
            gens: gens.to_vec(),
            counts,
        }
    }
}

impl Interpretation for BulleModel {
    type Value = Option<Bubble>;

    fn eval(&self, t: &SyntaxTree) -> Result<Option<Bubble>> {
        eval_bulle(&self.gens, t)
    }

    fn dimension(&self, n: usize, c: Colour) -> usize {
        self.counts.get(&(n, c)).copied().unwrap_or(0)
    }
}

/// BNC interpretation with the dimensions of the generated suboperad.
pub struct CncbModel {
    gens: Vec<Bnc>,
    dims: Vec<usize>,
}

impl CncbModel {
    pub fn new(gens: &[Bubble], max_n: usize, strategy: Strategy) -> Self {
        let gens: Vec<Bnc> = gens.iter().map(Bubble::to_bnc).collect();
        let dims = cncb_closure(&gens, max_n, strategy).iter().map(Vec::len).collect();
        CncbModel { gens, dims }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
}

impl Interpretation for CncbModel {
    type Value = Bnc;

    fn eval(&self, t: &SyntaxTree) -> Result<Bnc> {
        Ok(eval_cncb(&self.gens, t))
    }

    fn dimension(&self, n: usize, _: Colour) -> usize {
        self.dims.get(n).copied().unwrap_or(0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Bulle,
    CncbClosure,
}

#[derive(Clone, Debug, Deserialize)]
struct PresentationFile {
    name: String,
    generators: BTreeMap<String, String>,
    #[serde(default)]
    relations: Vec<Vec<String>>,
    #[serde(default)]
    orientation: Vec<String>,
    model: ModelKind,
}

/// A presentation by generators, relation families and an optional
/// orientation of the relations.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub name: String,
    pub generators: Vec<Bubble>,
    pub relations: Vec<Vec<String>>,
    pub orientation: Vec<(String, String)>,
    pub model: ModelKind,
}

const BUILTINS: [(&str, &str); 12] = [
    ("bulle", include_str!("../data/presentations/bulle.json")),
    ("cncb", include_str!("../data/presentations/cncb.json")),
    ("aaa-bbb", include_str!("../data/presentations/aaa_bbb.json")),
    ("aaa-abb", include_str!("../data/presentations/aaa_abb.json")),
    ("aab-abb", include_str!("../data/presentations/aab_abb.json")),
    ("aab-bba", include_str!("../data/presentations/aab_bba.json")),
    ("aaa-bab", include_str!("../data/presentations/aaa_bab.json")),
    ("aab-baa", include_str!("../data/presentations/aab_baa.json")),
    ("aab-bab", include_str!("../data/presentations/aab_bab.json")),
    ("aaa-aba", include_str!("../data/presentations/aaa_aba.json")),
    ("baa-aba", include_str!("../data/presentations/baa_aba.json")),
    ("bab-aba", include_str!("../data/presentations/bab_aba.json")),
];

pub fn builtin_names() -> Vec<&'static str> {
    BUILTINS.iter().map(|(n, _)| *n).collect()
}

impl Presentation {
    pub fn from_json(text: &str) -> Result<Presentation> {
        let f: PresentationFile = serde_json::from_str(text)?;
        // generator order: the canonical name order, literals last
        let mut gens: Vec<(String, Bubble)> = f
            .generators
            .iter()
            .map(|(k, v)| {
                let b: Bubble = v.parse()?;
                if let Some(n) = b.name() {
                    if &n != k {
                        return Err(Error::Parse(format!("generator `{k}` is bound to {b}, which is {n}")));
                    }
                }
                Ok((k.clone(), b))
            })
            .collect::<Result<_>>()?;
        gens.sort_by_key(|(k, _)| GENERATOR_NAMES.iter().position(|n| n == k).unwrap_or(usize::MAX));
        let orientation = f
            .orientation
            .iter()
            .map(|s| {
                s.split_once("->")
                    .map(|(a, b)| (a.trim().to_string(), b.trim().to_string()))
                    .ok_or_else(|| Error::Parse(format!("orientation entry `{s}` lacks `->`")))
            })
            .collect::<Result<_>>()?;
        let p = Presentation {
            name: f.name,
            generators: gens.into_iter().map(|(_, b)| b).collect(),
            relations: f.relations,
            orientation,
            model: f.model,
        };
        // fail early on malformed trees
        p.coloured_system()?;
        p.lifted_system()?;
        p.relation_trees(&p.uncoloured_collection()?)?;
        Ok(p)
    }

    pub fn builtin(name: &str) -> Result<Presentation> {
        let text = BUILTINS
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, t)| *t)
            .ok_or_else(|| Error::UnknownEntry(name.to_string()))?;
        Presentation::from_json(text)
    }

    /// A built-in name or a path to a presentation file.
    pub fn load(name_or_path: &str) -> Result<Presentation> {
        if builtin_names().contains(&name_or_path) {
            return Presentation::builtin(name_or_path);
        }
        let text = std::fs::read_to_string(name_or_path)?;
        Presentation::from_json(&text)
    }

    pub fn collection(&self) -> Result<ColouredCollection> {
        generator_collection(&self.generators)
    }

    pub fn uncoloured_collection(&self) -> Result<ColouredCollection> {
        Ok(self.collection()?.uncoloured())
    }

    /// The orientation on coloured trees; `None` when relations are
    /// read in the operad of BNCs only.
    pub fn coloured_system(&self) -> Result<Option<RewriteSystem>> {
        match self.model {
            ModelKind::Bulle => Ok(Some(RewriteSystem::from_literals(self.collection()?, &self.orientation)?)),
            ModelKind::CncbClosure => Ok(None),
        }
    }

    /// The same orientation on uncoloured trees.
    pub fn lifted_system(&self) -> Result<RewriteSystem> {
        RewriteSystem::from_literals(self.uncoloured_collection()?, &self.orientation)
    }

    pub fn relation_trees(&self, col: &ColouredCollection) -> Result<Vec<Vec<SyntaxTree>>> {
        self.relations
            .iter()
            .map(|fam| fam.iter().map(|s| col.parse(s)).collect())
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PresentationReport {
    pub name: String,
    pub relations_sound: bool,
    pub relation_witness: Option<String>,
    /// Orientation checked on coloured trees against the bubble closure.
    pub coloured: Option<OrientationReport>,
    /// Orientation checked on uncoloured trees against the BNC closure.
    pub lifted: Option<OrientationReport>,
    pub lifted_max_arity: usize,
}

impl PresentationReport {
    pub fn passed(&self) -> bool {
        self.relations_sound
            && self.coloured.as_ref().map_or(true, OrientationReport::passed)
            && self.lifted.as_ref().map_or(true, OrientationReport::passed)
    }
}

/// Uncoloured trees over `g` binary generators of arity at most `n`
/// exceed `budget`: the largest arity kept for exhaustive uncoloured checks.
pub fn lifted_arity_cap(generators: usize, max_arity: usize, budget: u64) -> usize {
    let mut cat = 1u64; // Catalan(d)
    let mut n = 1;
    for d in 1..max_arity as u64 {
        cat = cat * 2 * (2 * d - 1) / (d + 1);
        let trees = cat.saturating_mul((generators as u64).saturating_pow(d as u32));
        if trees > budget {
            break;
        }
        n = d as usize + 1;
    }
    n.max(2).min(max_arity)
}

pub const LIFTED_BUDGET: u64 = 200_000;

pub fn verify_presentation(p: &Presentation, max_arity: usize, strategy: Strategy) -> Result<PresentationReport> {
    let relations_ok = |witness: &mut Option<String>, col: &ColouredCollection, eq: &dyn Fn(&SyntaxTree, &SyntaxTree) -> Result<bool>| -> Result<()> {
        for fam in p.relation_trees(col)? {
            for t in &fam[1..] {
                if !eq(&fam[0], t)? {
                    *witness = Some(format!("{} = {}", col.literal(&fam[0]), col.literal(t)));
                    return Ok(());
                }
            }
        }
        Ok(())
    };
    let mut relation_witness = None;
    let gens_bnc: Vec<Bnc> = p.generators.iter().map(Bubble::to_bnc).collect();
    match p.model {
        ModelKind::Bulle => {
            let col = p.collection()?;
            relations_ok(&mut relation_witness, &col, &|a, b| {
                Ok(eval_bulle(&p.generators, a)? == eval_bulle(&p.generators, b)?)
            })?;
        }
        ModelKind::CncbClosure => {
            let col = p.uncoloured_collection()?;
            relations_ok(&mut relation_witness, &col, &|a, b| {
                Ok(eval_cncb(&gens_bnc, a) == eval_cncb(&gens_bnc, b))
            })?;
        }
    }
    let psi_degree = (p.name == "bulle").then_some(4);
    let mut coloured = None;
    let mut lifted = None;
    let lifted_max = lifted_arity_cap(p.generators.len(), max_arity, LIFTED_BUDGET);
    if !p.orientation.is_empty() {
        if let Some(sys) = p.coloured_system()? {
            let model = BulleModel::new(&p.generators, max_arity, strategy);
            let opts = VerifyOptions {
                max_arity,
                psi_degree,
                strategy,
            };
            coloured = Some(verify_good_orientation(&sys, &model, opts)?);
        }
        let model = CncbModel::new(&p.generators, lifted_max, strategy);
        let opts = VerifyOptions {
            max_arity: lifted_max,
            psi_degree: None,
            strategy,
        };
        lifted = Some(verify_good_orientation(&p.lifted_system()?, &model, opts)?);
    }
    Ok(PresentationReport {
        name: p.name.clone(),
        relations_sound: relation_witness.is_none(),
        relation_witness,
        coloured,
        lifted,
        lifted_max_arity: lifted_max,
    })
}

/// Normal-form counts at arity `n` over all `2^r` orientations of the
/// two-member relation families, on uncoloured trees.
#[derive(Clone, Debug, Serialize)]
pub struct OrientationScan {
    pub arity: usize,
    /// Normal-form count per orientation mask (bit `k` reverses family `k`).
    pub counts: Vec<usize>,
    /// Whether the rewrite graph on arity-`n` trees is acyclic, per mask.
    pub terminating: Vec<bool>,
    pub min: usize,
    /// Least count among terminating orientations.
    pub min_terminating: Option<usize>,
    pub dimension: usize,
}

pub fn orientation_scan(p: &Presentation, n: usize, strategy: Strategy) -> Result<OrientationScan> {
    let col = p.uncoloured_collection()?;
    let fams = p.relation_trees(&col)?;
    if fams.iter().any(|f| f.len() != 2) {
        return Err(Error::InvalidShape("scan needs two-member relation families".into()));
    }
    if fams.len() > 16 {
        return Err(Error::BoundExceeded { requested: fams.len(), limit: 16 });
    }
    let trees: Vec<SyntaxTree> = col
        .degrees_for_arity(n)
        .flat_map(|d| col.enumerate_trees_with(Colour::ONE, Bound::Degree(d), strategy))
        .filter(|t| t.arity() == n)
        .collect();
    let masks = 1usize << fams.len();
    let results = exec::map_range(strategy, masks, |mask| {
        let rules: Vec<Rule> = fams
            .iter()
            .enumerate()
            .map(|(k, f)| {
                let (a, b) = if mask >> k & 1 == 0 { (0, 1) } else { (1, 0) };
                Rule::new(f[a].clone(), f[b].clone()).expect("same arity")
            })
            .collect();
        let sys = RewriteSystem::new(col.clone(), rules).expect("uncoloured rules");
        let nf = trees.iter().filter(|t| !sys.is_reducible(t)).count();
        (nf, sys.check_termination(n).is_ok())
    });
    let (counts, terminating): (Vec<usize>, Vec<bool>) = results.into_iter().unzip();
    let dimension = CncbModel::new(&p.generators, n, strategy).dimension(n, Colour::ONE);
    let min_terminating = counts.iter().zip(&terminating).filter(|(_, &t)| t).map(|(&c, _)| c).min();
    Ok(OrientationScan {
        arity: n,
        min: counts.iter().copied().min().unwrap_or(0),
        counts,
        terminating,
        min_terminating,
        dimension,
    })
}

/// The four symmetries of the bubble operad.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Symmetry {
    Id,
    Cpl,
    Ret,
    RetCpl,
}

impl Symmetry {
    pub const ALL: [Symmetry; 4] = [Symmetry::Id, Symmetry::Cpl, Symmetry::Ret, Symmetry::RetCpl];

    pub fn apply(self, b: &Bubble) -> Bubble {
        match self {
            Symmetry::Id => b.clone(),
            Symmetry::Cpl => b.cpl(),
            Symmetry::Ret => b.ret(),
            Symmetry::RetCpl => b.cpl().ret(),
        }
    }

    pub fn apply_bnc(self, c: &Bnc) -> Bnc {
        match self {
            Symmetry::Id => c.clone(),
            Symmetry::Cpl => c.cpl_prime(),
            Symmetry::Ret => c.ret_prime(),
            Symmetry::RetCpl => c.cpl_prime().ret_prime(),
        }
    }

    pub fn is_anti(self) -> bool {
        matches!(self, Symmetry::Ret | Symmetry::RetCpl)
    }

    /// `self` after `o`.
    pub fn then(self, o: Symmetry) -> Symmetry {
        let bits = |s: Symmetry| match s {
            Symmetry::Id => 0u8,
            Symmetry::Cpl => 1,
            Symmetry::Ret => 2,
            Symmetry::RetCpl => 3,
        };
        match bits(self) ^ bits(o) {
            0 => Symmetry::Id,
            1 => Symmetry::Cpl,
            2 => Symmetry::Ret,
            _ => Symmetry::RetCpl,
        }
    }
}

fn gen_index(b: &Bubble) -> usize {
    let n = b.name().expect("arity-2 bubble");
    GENERATOR_NAMES.iter().position(|g| *g == n).unwrap()
}

/// Subsets of the eight generators as bit masks over [`GENERATOR_NAMES`].
pub fn mask_names(mask: u8) -> Vec<String> {
    (0..8).filter(|k| mask >> k & 1 == 1).map(|k| GENERATOR_NAMES[k].to_string()).collect()
}

pub fn mask_of(names: &[String]) -> Result<u8> {
    names.iter().try_fold(0u8, |m, n| {
        let k = GENERATOR_NAMES
            .iter()
            .position(|g| g == n)
            .ok_or_else(|| Error::UnknownLabel(n.clone()))?;
        Ok(m | 1 << k)
    })
}

pub fn image_mask(s: Symmetry, mask: u8) -> u8 {
    let gens = Bubble::generators();
    (0..8)
        .filter(|k| mask >> k & 1 == 1)
        .fold(0u8, |m, k| m | 1 << gen_index(&s.apply(&gens[k])))
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Orbit {
    pub representative: Vec<String>,
    pub members: Vec<Vec<String>>,
}

/// Partition subsets (masks) into orbits under the four symmetries; each
/// orbit lists members and representative as sorted name lists, the
/// representative being the lexicographically least member.
pub fn orbit_partition(masks: &[u8]) -> Vec<Orbit> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for &m in masks {
        if seen.contains(&m) {
            continue;
        }
        let mut members: Vec<Vec<String>> = Symmetry::ALL
            .iter()
            .map(|&s| image_mask(s, m))
            .collect::<std::collections::BTreeSet<u8>>()
            .into_iter()
            .map(|x| {
                seen.insert(x);
                mask_names(x)
            })
            .collect();
        members.sort();
        out.push(Orbit {
            representative: members[0].clone(),
            members,
        });
    }
    out.sort_by(|a, b| {
        (a.representative.len(), &a.representative).cmp(&(b.representative.len(), &b.representative))
    });
    out
}

pub fn subsets_of_size(k: usize) -> Vec<u8> {
    (0..=255u8).filter(|m| m.count_ones() as usize == k).collect()
}

pub fn all_subsets() -> Vec<u8> {
    (0..=255u8).collect()
}

/// Bijections of the generators compatible with all arity-3 compositions.
#[derive(Clone, Debug, Serialize)]
pub struct SymmetrySearch {
    pub tested: usize,
    /// Images of GENERATOR_NAMES, one list per surviving bijection.
    pub morphisms: Vec<Vec<String>>,
    pub antimorphisms: Vec<Vec<String>>,
}

/// Try all `8!` bijections. A survivor must send defined compositions to
/// defined ones, undefined to undefined, and respect every equality
/// between arity-3 compositions (with positions mirrored for antimorphisms).
pub fn search_symmetries(strategy: Strategy) -> SymmetrySearch {
    let gens = Bubble::generators();
    // table[g][i][h]: value of g o_{i+1} h
    let table: Vec<Vec<Vec<Option<Bubble>>>> = gens
        .iter()
        .map(|g| (1..=2).map(|i| gens.iter().map(|h| g.compose(i, h).ok()).collect()).collect())
        .collect();
    let mut classes: HashMap<Bubble, Vec<(usize, usize, usize)>> = HashMap::new();
    for g in 0..8 {
        for i in 0..2 {
            for h in 0..8 {
                if let Some(v) = &table[g][i][h] {
                    classes.entry(v.clone()).or_default().push((g, i, h));
                }
            }
        }
    }
    let classes: Vec<Vec<(usize, usize, usize)>> = classes.into_values().collect();
    let perms = permutations(8);
    let check = |p: &[usize], anti: bool| -> bool {
        let pos = |i: usize| if anti { 1 - i } else { i };
        for g in 0..8 {
            for i in 0..2 {
                for h in 0..8 {
                    if table[g][i][h].is_some() != table[p[g]][pos(i)][p[h]].is_some() {
                        return false;
                    }
                }
            }
        }
        classes.iter().all(|cls| {
            let (g, i, h) = cls[0];
            let v = &table[p[g]][pos(i)][p[h]];
            cls.iter().all(|&(g2, i2, h2)| &table[p[g2]][pos(i2)][p[h2]] == v)
        })
    };
    let results = exec::map(strategy, &perms, |p| (check(p, false), check(p, true)));
    let names = |p: &[usize]| p.iter().map(|&k| GENERATOR_NAMES[k].to_string()).collect::<Vec<_>>();
    let mut morphisms = Vec::new();
    let mut antimorphisms = Vec::new();
    for (p, (m, a)) in perms.iter().zip(results) {
        if m {
            morphisms.push(names(p));
        }
        if a {
            antimorphisms.push(names(p));
        }
    }
    SymmetrySearch {
        tested: perms.len(),
        morphisms,
        antimorphisms,
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for k in 0..used.len() {
            if !used[k] {
                used[k] = true;
                cur.push(k);
                go(cur, used, out);
                cur.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// The generator permutation realised by a symmetry.
pub fn symmetry_permutation(s: Symmetry) -> Vec<String> {
    Bubble::generators()
        .iter()
        .map(|g| s.apply(g).name().unwrap())
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeRelations {
    pub degree: usize,
    pub trees: usize,
    /// Kernel classes with at least two trees.
    pub kernel_classes: usize,
    /// Kernel classes not already connected by lower-degree relations.
    pub new_classes: usize,
    /// Relations adopted at this degree (`m - 1` per class split into `m`
    /// congruence classes).
    pub adopted: Vec<(String, String)>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Nontrivial relations among uncoloured trees over `gens`, degree by
/// degree, evaluated in the operad of BNCs. Degree-`d` trees are grouped by
/// value; the congruence generated by relations adopted at lower degrees is
/// computed by union-find (substituting any occurrence of either side of an
/// adopted relation by the other); a kernel class is new when it contains
/// more than one congruence class.
pub fn discover_relations(gens: &[Bubble], max_degree: usize, strategy: Strategy) -> Result<Vec<DegreeRelations>> {
    discover_relations_in(RelationModel::Cncb, gens, max_degree, strategy)
}

/// Where [`discover_relations_in`] reads trees and evaluates them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationModel {
    /// All uncoloured trees, valued in the operad of BNCs.
    Cncb,
    /// Colour-compatible trees only, valued in the operad of bubbles.
    Bulle,
}

pub fn discover_relations_in(
    model: RelationModel,
    gens: &[Bubble],
    max_degree: usize,
    strategy: Strategy,
) -> Result<Vec<DegreeRelations>> {
    let coloured = generator_collection(gens)?;
    let col = match model {
        RelationModel::Cncb => coloured.uncoloured(),
        RelationModel::Bulle => coloured,
    };
    let bncs: Vec<Bnc> = gens.iter().map(Bubble::to_bnc).collect();
    let mut adopted: Vec<(SyntaxTree, SyntaxTree)> = Vec::new();
    let mut out = Vec::new();
    for d in 1..=max_degree {
        let trees: Vec<SyntaxTree> = col
            .colour_list()
            .into_iter()
            .flat_map(|c| col.enumerate_trees_with(c, Bound::Degree(d), strategy))
            .collect();
        let values = exec::map(strategy, &trees, |t| match model {
            RelationModel::Cncb => eval_cncb(&bncs, t),
            RelationModel::Bulle => eval_bulle(gens, t)
                .expect("colour-compatible tree")
                .expect("internal node")
                .to_bnc(),
        });
        let index: HashMap<&SyntaxTree, usize> = trees.iter().enumerate().map(|(k, t)| (t, k)).collect();
        let mut uf = UnionFind((0..trees.len()).collect());
        let moves = exec::map(strategy, &trees, |t| {
            let mut v = Vec::new();
            for (l, r) in &adopted {
                for (a, b) in [(l, r), (r, l)] {
                    for p in crate::rewrite::find_occurrences(a, t) {
                        let rule = Rule { lhs: a.clone(), rhs: b.clone() };
                        let mut u = t.clone();
                        let sub = t.subtree(&p).unwrap();
                        *u.subtree_mut(&p).unwrap() = apply_rule(&rule, sub);
                        v.push(u);
                    }
                }
            }
            v
        });
        for (k, succ) in moves.iter().enumerate() {
            for u in succ {
                let j = *index.get(u).expect("relations preserve degree");
                uf.union(k, j);
            }
        }
        let mut kernel: BTreeMap<&Bnc, Vec<usize>> = BTreeMap::new();
        for (k, v) in values.iter().enumerate() {
            kernel.entry(v).or_default().push(k);
        }
        let mut kernel_classes = 0;
        let mut new_classes = 0;
        let mut adopted_here = Vec::new();
        for members in kernel.values() {
            if members.len() < 2 {
                continue;
            }
            kernel_classes += 1;
            // congruence-class representatives in order of first appearance
            let mut reps: Vec<usize> = Vec::new();
            let mut roots = HashSet::new();
            for &k in members {
                if roots.insert(uf.find(k)) {
                    reps.push(k);
                }
            }
            if reps.len() > 1 {
                new_classes += 1;
                for &r in &reps[1..] {
                    adopted_here.push((trees[reps[0]].clone(), trees[r].clone()));
                }
            }
        }
        out.push(DegreeRelations {
            degree: d,
            trees: trees.len(),
            kernel_classes,
            new_classes,
            adopted: adopted_here
                .iter()
                .map(|(a, b)| (col.literal(a), col.literal(b)))
                .collect(),
        });
        adopted.extend(adopted_here);
    }
    Ok(out)
}

fn apply_rule(rule: &Rule, t: &SyntaxTree) -> SyntaxTree {
    fn bind(p: &SyntaxTree, t: &SyntaxTree, out: &mut Vec<SyntaxTree>) {
        match p {
            Tree::Leaf => out.push(t.clone()),
            Tree::Node(_, ps) => ps.iter().zip(t.children()).for_each(|(p, c)| bind(p, c, out)),
        }
    }
    let mut subs = Vec::new();
    bind(&rule.lhs, t, &mut subs);
    rule.rhs.substitute_leaves(&subs)
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct RationalForm {
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct ColouredForms {
    pub based: RationalForm,
    pub nonbased: RationalForm,
}

/// Data attached to one orbit of generator pairs.
#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct OrbitRecord {
    pub index: usize,
    pub representative: Vec<String>,
    pub members: Vec<Vec<String>>,
    pub presentation: Option<String>,
    pub series: ColouredForms,
    pub equation: String,
    /// Dimensions from arity 1.
    pub dimensions: Vec<u64>,
    /// Based and nonbased bubble counts from arity 2.
    pub based: Vec<u64>,
    pub nonbased: Vec<u64>,
    pub algebra: Option<String>,
    #[serde(default)]
    pub anchor: String,
}

impl OrbitRecord {
    pub fn generators(&self) -> Vec<Bubble> {
        self.representative.iter().map(|n| Bubble::generator(n).unwrap()).collect()
    }

    /// Does `b` belong to the suboperad of bubbles generated by this orbit's
    /// representative?
    pub fn characterization(&self, b: &Bubble) -> bool {
        characterize(self.index, b)
    }

    pub fn closed_forms(&self, n: usize) -> Result<[MultiSeries; 2]> {
        let v = ["z1", "z2"];
        let e = |f: &RationalForm| -> Result<MultiSeries> {
            expand_rational(&MultiSeries::parse(&f.num, &v)?, &MultiSeries::parse(&f.den, &v)?, Trunc::Total(n))
        };
        Ok([e(&self.series.based)?, e(&self.series.nonbased)?])
    }
}

pub fn orbit_registry() -> Result<Vec<OrbitRecord>> {
    Ok(serde_json::from_str(include_str!("../data/orbits.json"))?)
}

pub fn orbit_record(index: usize) -> Result<OrbitRecord> {
    orbit_registry()?
        .into_iter()
        .find(|r| r.index == index)
        .ok_or_else(|| Error::UnknownEntry(format!("orbit {index}")))
}

/// Border characterizations of the suboperads generated by each orbit
/// representative.
fn characterize(orbit: usize, b: &Bubble) -> bool {
    let w = b.word();
    let n = w.len();
    let based = b.is_based();
    let ones = w.iter().filter(|&&l| l == 1).count();
    let twos = n - ones;
    let all = |l: u8| w.iter().all(|&x| x == l);
    match orbit {
        1 => based && w[..n - 1].iter().all(|&l| l == 2),
        2 => {
            let pair = w.windows(2).any(|p| p[0] == p[1]);
            let cnt = if based { twos } else { ones } as i64;
            pair && (cnt - (1 - n as i64)).rem_euclid(3) == 0
        }
        3 => w[0] == 2 && (ones + n + usize::from(!based)) % 2 == 0,
        4 => w[0] == 2 && w[n - 1] == 1,
        5 => {
            if based {
                w[n - 2] == 2 && w[n - 1] == 1
            } else {
                w[n - 2] == 1 && w[n - 1] == 2
            }
        }
        6 => based && w.split(|&l| l == 1).all(|run| run.len() % 2 == 0),
        7 => based && ones == 1,
        8 => based && w[n - 1] == 1,
        9 => all(2),
        10 => {
            if based {
                w[n - 1] == 1 && w[..n - 1].iter().all(|&l| l == 2)
            } else {
                all(2)
            }
        }
        11 => {
            if based {
                all(1)
            } else {
                all(2)
            }
        }
        _ => false,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CharacterizationReport {
    pub orbit: usize,
    pub max_arity: usize,
    pub matches: bool,
    pub witness: Option<String>,
    pub series_match: bool,
    pub based: Vec<usize>,
    pub nonbased: Vec<usize>,
}

impl CharacterizationReport {
    pub fn passed(&self) -> bool {
        self.matches && self.series_match
    }
}

/// Closure versus border predicate, and closure versus the closed-form
/// coloured series, coefficient-wise.
pub fn verify_characterization(rec: &OrbitRecord, n: usize, strategy: Strategy) -> Result<CharacterizationReport> {
    let levels = bulle_closure(&rec.generators(), n, strategy);
    let mut witness = None;
    let mut based = Vec::new();
    let mut nonbased = Vec::new();
    for k in 2..=n {
        for c in [Colour::ONE, Colour::TWO] {
            let got: Vec<&Bubble> = levels[k].iter().filter(|b| b.out() == c).collect();
            let want: Vec<Bubble> = Bubble::all(c, k).into_iter().filter(|b| rec.characterization(b)).collect();
            if witness.is_none() {
                let gs: HashSet<&Bubble> = got.iter().copied().collect();
                let ws: HashSet<&Bubble> = want.iter().collect();
                if let Some(x) = gs.symmetric_difference(&ws).min() {
                    witness = Some(x.to_string());
                }
            }
            if c == Colour::ONE {
                based.push(got.len());
            } else {
                nonbased.push(got.len());
            }
        }
    }
    let model = crate::envelope::SubOperad::generate(Bulle, &rec.generators(), n, strategy);
    let hilbert = crate::envelope::model_hilbert(&model, n);
    let forms = rec.closed_forms(n)?;
    // the closed forms count from arity 2; drop any lower-degree terms
    let trim = |m: &MultiSeries| {
        let mut out = MultiSeries::zero(m.vars().to_vec(), Trunc::Total(n));
        for (e, c) in m.terms() {
            if e.iter().sum::<u32>() >= 2 {
                out.add_term(e.clone(), c.clone());
            }
        }
        out
    };
    let series_match = trim(&forms[0]) == hilbert[0] && trim(&forms[1]) == hilbert[1];
    Ok(CharacterizationReport {
        orbit: rec.index,
        max_arity: n,
        matches: witness.is_none(),
        witness,
        series_match,
        based,
        nonbased,
    })
}
