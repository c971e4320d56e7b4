use std::sync::OnceLock;

use bnc_core::bubbles::{decompose, flatten, Bubble, Bulle};
use bnc_core::envelope::{compose_anti, normalize};
use bnc_core::exec::Strategy as Exec;
use bnc_core::geometry::Bnc;
use bnc_core::presentations::{bulle_closure, cncb_closure, cncb_elements, eval_bulle, Presentation};
use bnc_core::series::{expand_rational, MultiSeries, Trunc};
use bnc_core::trees::{Bound, Colour, Tree};
use proptest::prelude::*;

fn small_bncs() -> &'static [Vec<Bnc>] {
    static CELL: OnceLock<Vec<Vec<Bnc>>> = OnceLock::new();
    CELL.get_or_init(|| cncb_elements(4, Exec::Parallel))
}

fn bnc(max: usize) -> impl Strategy<Value = Bnc> {
    (1..=max, any::<prop::sample::Index>()).prop_map(|(n, i)| i.get(&small_bncs()[n]).clone())
}

fn bubble() -> impl Strategy<Value = Bubble> {
    (2usize..7, 0u8..2, any::<u64>()).prop_map(|(n, c, bits)| {
        let word = (0..n).map(|k| 1 + (bits >> k & 1) as u8).collect();
        Bubble::new(if c == 0 { Colour::ONE } else { Colour::TWO }, word).unwrap()
    })
}

proptest! {
    #[test]
    fn composition_is_associative(x in bnc(4), y in bnc(3), z in bnc(3), i in 0usize..4, j in 0usize..3) {
        let i = i % x.size() + 1;
        let j = j % y.size() + 1;
        let lhs = x.compose(i, &y).unwrap().compose(i + j - 1, &z).unwrap();
        let rhs = x.compose(i, &y.compose(j, &z).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn disjoint_compositions_commute(x in bnc(4), y in bnc(3), z in bnc(3), i in 0usize..4, j in 0usize..4) {
        prop_assume!(x.size() >= 2);
        let (i, j) = (i % x.size() + 1, j % x.size() + 1);
        prop_assume!(i < j);
        let lhs = x.compose(i, &y).unwrap().compose(j + y.size() - 1, &z).unwrap();
        let rhs = x.compose(j, &z).unwrap().compose(i, &y).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn unit_is_neutral(x in bnc(4), i in 0usize..4) {
        let i = i % x.size() + 1;
        prop_assert_eq!(&x.compose(i, &Bnc::unit()).unwrap(), &x);
        prop_assert_eq!(&Bnc::unit().compose(1, &x).unwrap(), &x);
    }

    #[test]
    fn symmetries_are_involutive_and_respect_composition(x in bnc(4), y in bnc(3), i in 0usize..4) {
        let i = i % x.size() + 1;
        prop_assert_eq!(&x.cpl_prime().cpl_prime(), &x);
        prop_assert_eq!(&x.ret_prime().ret_prime(), &x);
        let z = x.compose(i, &y).unwrap();
        prop_assert_eq!(z.cpl_prime(), x.cpl_prime().compose(i, &y.cpl_prime()).unwrap());
        prop_assert_eq!(z.ret_prime(), x.ret_prime().compose(x.size() - i + 1, &y.ret_prime()).unwrap());
    }

    #[test]
    fn decomposition_roundtrips_on_composites(x in bnc(4), y in bnc(4), i in 0usize..4) {
        let i = i % x.size() + 1;
        let z = x.compose(i, &y).unwrap();
        let t = decompose(&z);
        prop_assert_eq!(&flatten(&t), &z);
        prop_assert!(t.is_leaf() || t.is_anticoloured(&Bulle));
        let glued = normalize(&Bulle, &compose_anti(&Bulle, &decompose(&x), i, &decompose(&y)).unwrap());
        prop_assert_eq!(glued, t.clone());
        if let Ok(s) = z.stats() {
            prop_assert_eq!(s.areas, t.degree());
            prop_assert_eq!(s.y1 + s.y2, s.areas);
        }
    }

    #[test]
    fn bubble_symmetries(a in bubble(), b in bubble(), i in 0usize..7) {
        let i = i % a.arity() + 1;
        prop_assert_eq!(&a.cpl().cpl(), &a);
        prop_assert_eq!(&a.ret().ret(), &a);
        if let Ok(c) = a.compose(i, &b) {
            prop_assert_eq!(c.arity(), a.arity() + b.arity() - 1);
            prop_assert_eq!(c.cpl(), a.cpl().compose(i, &b.cpl()).unwrap());
            prop_assert_eq!(c.ret(), a.ret().compose(a.arity() - i + 1, &b.ret()).unwrap());
        } else {
            prop_assert_ne!(a.input(i), b.out());
        }
    }

    #[test]
    fn bubbles_roundtrip_through_bncs(a in bubble()) {
        let c = a.to_bnc();
        prop_assert!(!c.has_diagonal());
        prop_assert_eq!(Bubble::from_bnc(&c).unwrap(), a.clone());
        prop_assert_eq!(a.to_string().parse::<Bubble>().unwrap(), a);
    }

    #[test]
    fn literals_roundtrip(x in bnc(4)) {
        prop_assert_eq!(x.to_string().parse::<Bnc>().unwrap(), x);
    }

    #[test]
    fn rational_expansion_inverts_multiplication(num in prop::collection::vec(-3i64..4, 1..5), den in prop::collection::vec(-3i64..4, 0..4)) {
        let vars = ["z1", "z2"];
        let poly = |cs: &[i64], lead: i64| {
            let mut s = format!("{lead}");
            for (k, c) in cs.iter().enumerate() {
                s.push_str(&format!(" + ({c})z1^{}z2^{}", k % 2 + 1, k / 2));
            }
            MultiSeries::parse(&s, &vars).unwrap()
        };
        let n = poly(&num[1..], num[0]);
        let d = poly(&den, 1);
        let e = expand_rational(&n, &d, Trunc::Total(6)).unwrap();
        prop_assert_eq!(e.mul(&d).with_trunc(Trunc::Total(6)), n.with_trunc(Trunc::Total(6)));
    }
}

#[test]
fn strategies_give_identical_closures() {
    let gens: Vec<Bnc> = ["AAA", "BAB", "BBA"]
        .iter()
        .map(|g| Bubble::generator(g).unwrap().to_bnc())
        .collect();
    assert_eq!(
        cncb_closure(&gens, 6, Exec::Sequential),
        cncb_closure(&gens, 6, Exec::Parallel)
    );
    let b = Bubble::generators();
    assert_eq!(bulle_closure(&b, 6, Exec::Sequential), bulle_closure(&b, 6, Exec::Parallel));
}

/// Normal forms of the bubble presentation are left combs whose nodes share
/// their first input colour, and rewriting preserves the value.
#[test]
fn bubble_normal_forms_are_uniform_left_combs() {
    let p = Presentation::builtin("bulle").unwrap();
    let sys = p.coloured_system().unwrap().unwrap();
    let col = sys.collection();
    for out in [Colour::ONE, Colour::TWO] {
        for t in col.enumerate_trees(out, Bound::Degree(3)) {
            let nf = sys.rewrite_to_nf(&t, 1000).unwrap();
            assert_eq!(eval_bulle(&p.generators, &nf).unwrap(), eval_bulle(&p.generators, &t).unwrap());
            let mut node = &nf;
            let mut first = None;
            while let Tree::Node(l, cs) = node {
                assert!(cs[1].is_leaf(), "not a left comb: {}", col.literal(&nf));
                let c = col.shape(*l).ins[0];
                assert_eq!(*first.get_or_insert(c), c);
                node = &cs[0];
            }
        }
    }
}
