use std::path::PathBuf;
use std::process::ExitCode;

use bnc_core::bubbles::{bubble_tree_literal, decompose, Bubble, Bulle};
use bnc_core::envelope::{dims_via_series, ColouredOperad, Fas, SubOperad};
use bnc_core::exec::{self, Strategy};
use bnc_core::geometry::{enumerate_direct, Bnc, Statistic, DIRECT_BOUND};
use bnc_core::presentations::{
    all_subsets, bulle_closure, cncb_closure, cncb_elements, discover_relations_in, orbit_partition, orbit_record,
    orientation_scan, parse_generators, refined_cncb, search_symmetries, subsets_of_size, verify_presentation,
    Presentation, RelationModel,
};
use bnc_core::series::{check_poly_equation, equation, equation_registry, MultiSeries};
use bnc_core::trees::Colour;
use bnc_core::Error;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

const CNCB_LIMIT: usize = 6;
const CLOSURE_LIMIT: usize = 9;
const BULLE_LIMIT: usize = 16;
const SERIES_LIMIT: usize = 30;

#[derive(Parser)]
#[command(name = "bnc", version, about = "Enumerate, verify and explore operads of bicoloured noncrossing configurations")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads; 1 runs sequentially.
    #[arg(long, global = true, env = "BNC_JOBS")]
    jobs: Option<usize>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum OperadArg {
    Cncb,
    Bulle,
    Fas,
}

#[derive(Clone, Copy, ValueEnum)]
enum StatArg {
    Diagonals,
    Areas,
}

impl From<StatArg> for Statistic {
    fn from(s: StatArg) -> Statistic {
        match s {
            StatArg::Diagonals => Statistic::Diagonals,
            StatArg::Areas => Statistic::Areas,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Dimensions of an operad by arity.
    Enum {
        #[arg(long, value_enum)]
        operad: OperadArg,
        #[arg(long, default_value_t = 6)]
        max_arity: usize,
        /// Refined series of BNCs by a statistic.
        #[arg(long, value_enum)]
        stats: Option<StatArg>,
        /// Cross-check BNC counts against brute-force enumeration.
        #[arg(long)]
        oracle: bool,
    },
    /// Dimensions of the suboperad generated by some bubbles.
    Suboperad {
        /// Comma-separated generator names or bubble literals.
        #[arg(long)]
        gens: String,
        #[arg(long, default_value_t = 7)]
        max_arity: usize,
        /// Based and nonbased bubble counts instead.
        #[arg(long)]
        coloured: bool,
    },
    /// Check a presentation and its orientation.
    Verify {
        /// Built-in name or path to a presentation file.
        #[arg(long)]
        presentation: String,
        #[arg(long, default_value_t = 7)]
        max_arity: usize,
        /// Also count normal forms at the top arity for every orientation.
        #[arg(long)]
        scan: bool,
    },
    /// Check a registered Hilbert-series equation.
    Series {
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 10)]
        order: usize,
    },
    /// Orbits of generator subsets under the symmetries.
    Orbits {
        /// Subset size, or `all`.
        #[arg(long, default_value = "2")]
        size: String,
    },
    /// Search all bijections of the generators for (anti)morphisms.
    Symmetries,
    /// Nontrivial relations by degree.
    Relations {
        #[arg(long)]
        gens: String,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        /// Colour-compatible trees valued in bubbles.
        #[arg(long)]
        coloured: bool,
    },
    /// Draw a BNC as SVG.
    Render {
        #[arg(long)]
        bnc: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// A command's outcome: its report and whether every check passed.
struct Report {
    value: Value,
    text: String,
    ok: bool,
}

fn row<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn bounded(n: usize, limit: usize) -> Result<usize, Error> {
    if n > limit {
        Err(Error::BoundExceeded { requested: n, limit })
    } else {
        Ok(n)
    }
}

fn cmd_enum(op: OperadArg, n: usize, stats: Option<StatArg>, oracle: bool, s: Strategy) -> Result<Report, Error> {
    match op {
        OperadArg::Cncb => {
            let n = bounded(n, CNCB_LIMIT)?;
            let levels = cncb_elements(n, s);
            let dims: Vec<usize> = levels.iter().skip(1).map(Vec::len).collect();
            let mut text = format!("cncb: {}\n", row(&dims));
            let mut value = json!({"operad": "cncb", "dimensions": dims});
            let mut ok = true;
            if oracle {
                let mut agree = Vec::new();
                for k in 1..=n.min(DIRECT_BOUND) {
                    let mut direct = enumerate_direct(k, DIRECT_BOUND, s)?;
                    direct.sort();
                    agree.push(direct == levels[k]);
                }
                ok = agree.iter().all(|&a| a);
                text.push_str(&format!(
                    "oracle to size {}: {}\n",
                    agree.len(),
                    if ok { "agrees" } else { "DIFFERS" }
                ));
                value["oracle"] = json!(agree);
            }
            if let Some(st) = stats {
                let f = refined_series(n, st.into(), s);
                text.push_str(&format!("series: {f}\n"));
                value["series"] = json!(f.to_string());
            }
            Ok(Report { value, text, ok })
        }
        OperadArg::Bulle => {
            let n = bounded(n, BULLE_LIMIT)?;
            let (based, nonbased) = coloured_counts(&Bulle, n);
            let text = format!("bulle based: {}\nbulle nonbased: {}\n", row(&based), row(&nonbased));
            Ok(Report {
                value: json!({"operad": "bulle", "from_arity": 2, "based": based, "nonbased": nonbased}),
                text,
                ok: true,
            })
        }
        OperadArg::Fas => {
            let n = bounded(n, SERIES_LIMIT)?;
            let (c1, c2) = coloured_counts(&Fas, n);
            let env = dims_via_series(&Fas, n)?.total.to_u64s()[1..].to_vec();
            let text = format!("fas colour 1: {}\nfas colour 2: {}\nenvelope: {}\n", row(&c1), row(&c2), row(&env));
            Ok(Report {
                value: json!({"operad": "fas", "from_arity": 2, "colour1": c1, "colour2": c2, "envelope": env}),
                text,
                ok: true,
            })
        }
    }
}

fn refined_series(n: usize, st: Statistic, s: Strategy) -> MultiSeries {
    refined_cncb(n, st, s)
}

fn coloured_counts<M: ColouredOperad>(m: &M, n: usize) -> (Vec<usize>, Vec<usize>) {
    let per = |c: Colour| (2..=n).map(|k| m.elements(k).iter().filter(|x| m.label_out(x) == c).count()).collect();
    (per(Colour::ONE), per(Colour::TWO))
}

fn cmd_suboperad(gens: &str, n: usize, coloured: bool, s: Strategy) -> Result<Report, Error> {
    let n = bounded(n, CLOSURE_LIMIT)?;
    let gens = parse_generators(gens)?;
    if gens.is_empty() {
        return Err(Error::Parse("no generators".into()));
    }
    let names: Vec<String> = gens.iter().map(|g| g.name().unwrap_or_else(|| g.to_string())).collect();
    if coloured {
        let levels = bulle_closure(&gens, n, s);
        let count = |c: Colour| -> Vec<usize> {
            (2..=n).map(|k| levels[k].iter().filter(|b| b.out() == c).count()).collect()
        };
        let (b, nb) = (count(Colour::ONE), count(Colour::TWO));
        Ok(Report {
            text: format!("based: {}\nnonbased: {}\n", row(&b), row(&nb)),
            value: json!({"generators": names, "from_arity": 2, "based": b, "nonbased": nb}),
            ok: true,
        })
    } else {
        let g: Vec<Bnc> = gens.iter().map(Bubble::to_bnc).collect();
        let mut dims: Vec<usize> = cncb_closure(&g, n, s).iter().skip(1).map(Vec::len).collect();
        if let Some(first) = dims.first_mut() {
            *first = 1;
        }
        Ok(Report {
            text: format!("{}\n", row(&dims)),
            value: json!({"generators": names, "dimensions": dims}),
            ok: true,
        })
    }
}

fn cmd_verify(name: &str, n: usize, scan: bool, s: Strategy) -> Result<Report, Error> {
    let p = Presentation::load(name)?;
    let r = verify_presentation(&p, n, s)?;
    let ok = r.passed();
    let mut text = format!("presentation {}: {}\n", r.name, if ok { "pass" } else { "FAIL" });
    text.push_str(&format!(
        "  relations sound: {}{}\n",
        r.relations_sound,
        r.relation_witness.as_ref().map(|w| format!(" ({w})")).unwrap_or_default()
    ));
    for (label, rep) in [("coloured", &r.coloured), ("lifted", &r.lifted)] {
        let Some(rep) = rep else { continue };
        text.push_str(&format!(
            "  {label}: rules sound {}, terminating {}",
            rep.sound, rep.terminating
        ));
        if let Some(m) = &rep.psi {
            text.push_str(&format!(
                ", psi ties {}/{} increases {} weighted strict {}",
                m.ties, m.rewrites, m.increases, m.weighted_strict
            ));
        }
        text.push('\n');
        for c in &rep.counts {
            let mark = if c.normal_forms == c.expected { "" } else { "  <-- mismatch" };
            text.push_str(&format!(
                "    arity {} colour {}: {} normal forms, {} expected{mark}\n",
                c.arity, c.colour, c.normal_forms, c.expected
            ));
        }
    }
    let mut value = serde_json::to_value(&r)?;
    if scan {
        let sc = orientation_scan(&p, n, s)?;
        let good = sc.counts.iter().zip(&sc.terminating).filter(|(&c, &t)| t && c == sc.dimension).count();
        text.push_str(&format!(
            "  scan at arity {}: {} orientations, {} terminating, least count {} among them, dimension {}, {} good\n",
            sc.arity,
            sc.counts.len(),
            sc.terminating.iter().filter(|&&t| t).count(),
            sc.min_terminating.map_or("-".to_string(), |m| m.to_string()),
            sc.dimension,
            good
        ));
        value["scan"] = serde_json::to_value(&sc)?;
    }
    Ok(Report { value, text, ok })
}

fn cmd_series(target: &str, order: usize, s: Strategy) -> Result<Report, Error> {
    let entry = equation(target).map_err(|_| {
        let names: Vec<String> = equation_registry().map(|r| r.into_iter().map(|e| e.name).collect()).unwrap_or_default();
        Error::UnknownEntry(format!("{target} (known: {})", names.join(", ")))
    })?;
    let f: MultiSeries = match target {
        "cncb" => dims_via_series(&Bulle, bounded(order, SERIES_LIMIT)?)?.total.to_multi("t"),
        "cncb-diagonals" => refined_series(bounded(order, CNCB_LIMIT)?, Statistic::Diagonals, s),
        "cncb-areas" => refined_series(bounded(order, CNCB_LIMIT)?, Statistic::Areas, s),
        t => {
            let idx: usize = t
                .strip_prefix("orbit-")
                .and_then(|i| i.parse().ok())
                .ok_or_else(|| Error::UnknownEntry(t.to_string()))?;
            let rec = orbit_record(idx)?;
            let order = bounded(order, CLOSURE_LIMIT + 1)?;
            let sub = SubOperad::generate(Bulle, &rec.generators(), order, s);
            dims_via_series(&sub, order)?.total.to_multi("t")
        }
    };
    let check = check_poly_equation(&entry.polynomial()?, &f, "t", order)?;
    let ok = check.passed();
    let text = format!(
        "{}: F = {f}\nequation {} = 0 {} through t^{order}\n",
        entry.name,
        entry.equation,
        if ok { "holds" } else { "FAILS" }
    );
    Ok(Report {
        value: json!({
            "target": entry.name,
            "equation": entry.equation,
            "order": order,
            "series": f.to_string(),
            "holds": ok,
            "first_failure": check.first_failure,
        }),
        text,
        ok,
    })
}

fn cmd_orbits(size: &str) -> Result<Report, Error> {
    let masks = if size == "all" {
        all_subsets()
    } else {
        let k: usize = size.parse().map_err(|_| Error::Parse(format!("size `{size}`")))?;
        bounded(k, 8)?;
        subsets_of_size(k)
    };
    let orbits = orbit_partition(&masks);
    let mut text = format!("{} subsets, {} orbits\n", masks.len(), orbits.len());
    for o in &orbits {
        let m: Vec<String> = o.members.iter().map(|x| format!("{{{}}}", x.join(","))).collect();
        text.push_str(&format!("  {}\n", m.join(" ")));
    }
    Ok(Report {
        value: json!({"subsets": masks.len(), "orbits": orbits.len(), "partition": orbits}),
        text,
        ok: true,
    })
}

fn cmd_symmetries(s: Strategy) -> Report {
    let r = search_symmetries(s);
    let mut text = format!("{} bijections tested\n", r.tested);
    for (label, list) in [("morphism", &r.morphisms), ("antimorphism", &r.antimorphisms)] {
        for p in list {
            text.push_str(&format!("  {label}: {}\n", p.join(" ")));
        }
    }
    Report {
        ok: r.morphisms.len() == 2 && r.antimorphisms.len() == 2,
        value: serde_json::to_value(&r).expect("serialisable"),
        text,
    }
}

fn cmd_relations(gens: &str, d: usize, coloured: bool, s: Strategy) -> Result<Report, Error> {
    let gens = parse_generators(gens)?;
    let d = bounded(d, 7)?;
    let model = if coloured { RelationModel::Bulle } else { RelationModel::Cncb };
    let r = discover_relations_in(model, &gens, d, s)?;
    let mut text = String::new();
    for x in &r {
        text.push_str(&format!(
            "degree {}: {} trees, {} kernel classes, {} new\n",
            x.degree, x.trees, x.kernel_classes, x.new_classes
        ));
        for (a, b) in &x.adopted {
            text.push_str(&format!("  {a} = {b}\n"));
        }
    }
    Ok(Report {
        value: serde_json::to_value(&r)?,
        text,
        ok: true,
    })
}

fn cmd_render(lit: &str, out: Option<&PathBuf>) -> Result<Report, Error> {
    let c: Bnc = lit.parse()?;
    let svg = c.to_svg();
    let tree = bubble_tree_literal(&decompose(&c));
    let text = match out {
        Some(p) => {
            std::fs::write(p, &svg)?;
            format!("wrote {}\ndecomposition: {tree}\n", p.display())
        }
        None => svg.clone(),
    };
    Ok(Report {
        value: json!({"bnc": c.to_string(), "decomposition": tree, "svg": if out.is_none() { Some(svg) } else { None }}),
        text,
        ok: true,
    })
}

fn run(cli: &Cli) -> Result<Report, Error> {
    let strategy = match cli.jobs {
        Some(1) => Strategy::Sequential,
        Some(j) => {
            exec::init_jobs(j);
            Strategy::Parallel
        }
        None => Strategy::Parallel,
    };
    Strategy::set_default(strategy);
    match &cli.cmd {
        Cmd::Enum {
            operad,
            max_arity,
            stats,
            oracle,
        } => cmd_enum(*operad, *max_arity, *stats, *oracle, strategy),
        Cmd::Suboperad {
            gens,
            max_arity,
            coloured,
        } => cmd_suboperad(gens, *max_arity, *coloured, strategy),
        Cmd::Verify {
            presentation,
            max_arity,
            scan,
        } => cmd_verify(presentation, *max_arity, *scan, strategy),
        Cmd::Series { target, order } => cmd_series(target, *order, strategy),
        Cmd::Orbits { size } => cmd_orbits(size),
        Cmd::Symmetries => Ok(cmd_symmetries(strategy)),
        Cmd::Relations {
            gens,
            max_degree,
            coloured,
        } => cmd_relations(gens, *max_degree, *coloured, strategy),
        Cmd::Render { bnc, output } => cmd_render(bnc, output.as_ref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(r) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&json!({"ok": r.ok, "report": r.value})).unwrap());
            } else {
                print!("{}", r.text);
            }
            if r.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            if cli.json {
                println!("{}", json!({"ok": false, "error": e.to_string()}));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(2)
        }
    }
}
