use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use monoclone::check::{run_battery, run_selected, Outcome, PROPERTIES};
use monoclone::export::{
    clone_from_json, clone_json, hasse_dot, hasse_json, linear_clone_json, minorset_json, semiaffine_dot,
    semiaffine_json,
};
use monoclone::lattice::{
    ascending_chain, atoms, coatom_clone, coatoms, divisor_interval, enumerate_lattice, enumeration_cap,
    idempotent_interval, single_generator, CoatomDescriptor, HasseDiagram,
};
use monoclone::minorset::{minor_m, phi_minor};
use monoclone::semiaffine::{enumerate_semiaffine_lattice, fiber, linear_closure, phi_affine, LinearClone};
use monoclone::{
    generate, generated_subset, join, meet, member_query, parse_linear_forms, parse_monomial, parse_monomial_list,
    CapPolicy, Confidence, Error, FieldParam, Monomial, MonomialClone,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "monoclone", version, about = "Monomial clones over finite fields")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Per-residue count cap, overriding the per-command default.
    #[arg(long, env = "MONOCLONE_CAP", global = true)]
    cap: Option<u32>,
    /// Stabilization rounds for closures and membership; 0 skips the stability check.
    #[arg(long, global = true)]
    rounds: Option<u32>,
    /// Exit with status 2 when an answer depends on an unstable cap.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Verb {
    /// Generate a clone and list its members.
    Closure {
        #[arg(long)]
        q: u64,
        /// Comma-separated generators, or @file holding a JSON clone dump.
        gens: String,
    },
    /// Decide whether a monomial lies in a generated clone.
    Member {
        #[arg(long)]
        q: u64,
        target: String,
        #[arg(long = "in")]
        within: String,
    },
    /// Compare two generated clones by inclusion.
    Compare {
        #[arg(long)]
        q: u64,
        a: String,
        b: String,
    },
    Join {
        #[arg(long)]
        q: u64,
        a: String,
        b: String,
    },
    Meet {
        #[arg(long)]
        q: u64,
        a: String,
        b: String,
    },
    /// Enumerate the lattice from principal clones of bounded width.
    Lattice {
        #[arg(long)]
        q: u64,
        /// Seed width bound; defaults to q.
        #[arg(long)]
        width: Option<u32>,
    },
    Atoms {
        #[arg(long)]
        q: u64,
    },
    Coatoms {
        #[arg(long)]
        q: u64,
    },
    /// Inclusions among ⟨x1⋯x_{1+a}⟩ for the divisors a of q-1.
    Interval {
        #[arg(long)]
        q: u64,
    },
    /// A strictly ascending chain of the given length.
    Chain {
        #[arg(long)]
        q: u64,
        length: u32,
    },
    /// The interval of idempotent clones.
    Idempotent {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        width: Option<u32>,
    },
    /// One idempotent monomial generating the same clone as two.
    SingleGen {
        #[arg(long)]
        q: u64,
        m1: String,
        m2: String,
    },
    /// The linear clone a generated clone maps to.
    Phi {
        #[arg(long)]
        q: u64,
        gens: String,
    },
    SemiaffineLattice {
        #[arg(long)]
        modulus: u32,
    },
    /// Enumerated clones mapping onto the linear clone generated by the given forms.
    Fiber {
        #[arg(long)]
        q: u64,
        /// Comma-separated forms such as `y1 + 2*y2`; `0` for the constant.
        forms: String,
    },
    /// The count-vector image of a generated clone, or one of its residue slices.
    Minorset {
        #[arg(long)]
        q: u64,
        gens: String,
        /// Residue offset b as comma-separated coordinates.
        #[arg(long)]
        offset: Option<String>,
    },
    /// Run the property battery.
    Check {
        #[arg(long)]
        q: u64,
        /// Comma-separated property names; all by default.
        #[arg(long)]
        only: Option<String>,
    },
}

struct Out {
    text: String,
    json: Value,
    dot: Option<String>,
    confidence: Confidence,
}

impl Out {
    fn exact(text: String, json: Value) -> Self {
        Out { text, json, dot: None, confidence: Confidence::Exact }
    }
}

enum Failure {
    Domain(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let body = match cli.format {
                Format::Text => out.text,
                Format::Json => serde_json::to_string_pretty(&out.json).expect("serializable") + "\n",
                Format::Dot => match out.dot {
                    Some(d) => d,
                    None => {
                        eprintln!("error: this command has no DOT rendering");
                        return ExitCode::from(1);
                    }
                },
            };
            print!("{body}");
            if cli.strict && out.confidence == Confidence::CapLimited {
                eprintln!("error: answer is cap-limited (not stable under cap growth)");
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn field(q: u64) -> Result<FieldParam, Failure> {
    Ok(FieldParam::new(q)?)
}

/// Generators from text, or from the generators of a JSON dump when given `@path`.
fn generators(src: &str, fp: &FieldParam) -> Result<Vec<Monomial>, Failure> {
    if let Some(path) = src.strip_prefix('@') {
        let data = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))?;
        let v: Value = serde_json::from_str(&data).map_err(|e| Error::Json(format!("{path}: {e}")))?;
        let c = clone_from_json(&v)?;
        if c.fp != *fp {
            return Err(Error::FieldMismatch(fp.q, c.fp.q).into());
        }
        return Ok(c.generators);
    }
    Ok(parse_monomial_list(src, fp)?)
}

fn cap_for(cli: &Cli, fp: &FieldParam, ms: &[Monomial]) -> CapPolicy {
    let cap = match cli.cap {
        Some(c) => {
            let mut cap = CapPolicy::per_residue(fp, c);
            let default = CapPolicy::default_for(fp, ms);
            cap.width_cap = default.width_cap.map(|w| w.max(c));
            cap
        }
        None => CapPolicy::default_for(fp, ms),
    };
    match cli.rounds {
        Some(r) => cap.with_rounds(r),
        None => cap,
    }
}

fn names(ms: &[Monomial]) -> String {
    ms.iter().map(Monomial::to_string).collect::<Vec<_>>().join(", ")
}

fn clone_text(c: &MonomialClone) -> String {
    let mut s = format!(
        "<{}> over F_{}: {} members, per-residue cap {}{}, {}\n",
        names(&c.generators),
        c.fp.q,
        c.len(),
        c.cap.per_residue_cap,
        c.cap.width_cap.map(|w| format!(", width cap {w}")).unwrap_or_default(),
        if c.stable { "stable" } else { "cap-limited" }
    );
    for m in c.members() {
        s.push_str(&format!("  {m}\n"));
    }
    s
}

fn clone_out(c: MonomialClone) -> Out {
    Out { text: clone_text(&c), json: clone_json(&c), dot: None, confidence: c.confidence() }
}

fn hasse_text(d: &HasseDiagram) -> String {
    let mut s = format!(
        "F_{}: {} clones, {} covering pairs{}\n",
        d.fp.q,
        d.len(),
        d.edges.len(),
        if d.partial { " (partial: the lattice is infinite)" } else { "" }
    );
    for (i, l) in d.labels.iter().enumerate() {
        s.push_str(&format!("  {i}: <{}>\n", names(l)));
    }
    for (a, b) in &d.edges {
        s.push_str(&format!("  {a} < {b}\n"));
    }
    if let Some(w) = &d.chain_witness {
        s.push_str(&format!("  ascending chain: {}\n", w.iter().map(|m| format!("<{m}>")).collect::<Vec<_>>().join(" < ")));
    }
    s
}

fn hasse_out(d: HasseDiagram) -> Out {
    let confidence = Confidence::from_stable(d.stable());
    Out { text: hasse_text(&d), json: hasse_json(&d), dot: Some(hasse_dot(&d)), confidence }
}

fn linear_text(lc: &LinearClone) -> String {
    let gens: Vec<String> = lc.generators.iter().map(|f| f.to_string()).collect();
    let mut s = format!("<{}> over Z_{}: {} forms (coefficient cap {})\n", gens.join(", "), lc.n, lc.len(), lc.cap);
    for f in lc.members() {
        s.push_str(&format!("  {f}\n"));
    }
    s
}

fn run(cli: &Cli) -> Result<Out, Failure> {
    Ok(match &cli.verb {
        Verb::Closure { q, gens } => {
            let fp = field(*q)?;
            let g = generators(gens, &fp)?;
            clone_out(generate(&g, &fp, &cap_for(cli, &fp, &g))?)
        }
        Verb::Member { q, target, within } => {
            let fp = field(*q)?;
            let t = parse_monomial(target, &fp)?;
            let g = generators(within, &fp)?;
            let mut all = g.clone();
            all.push(t.clone());
            let r = member_query(&t, &g, &fp, &cap_for(cli, &fp, &all))?;
            Out {
                text: format!("{}\n", r.member),
                json: json!({ "member": r.member, "confidence": r.confidence }),
                dot: None,
                confidence: r.confidence,
            }
        }
        Verb::Compare { q, a, b } => {
            let fp = field(*q)?;
            let (ga, gb) = (generators(a, &fp)?, generators(b, &fp)?);
            let all: Vec<Monomial> = ga.iter().chain(&gb).cloned().collect();
            let cap = cap_for(cli, &fp, &all);
            let ab = generated_subset(&ga, &gb, &fp, &cap)?;
            let ba = generated_subset(&gb, &ga, &fp, &cap)?;
            let verdict = match (ab.member, ba.member) {
                (true, true) => "equal",
                (true, false) => "subset",
                (false, true) => "superset",
                (false, false) => "incomparable",
            };
            let confidence = ab.confidence.and(ba.confidence);
            Out {
                text: format!("{verdict}\n"),
                json: json!({ "relation": verdict, "a_in_b": ab.member, "b_in_a": ba.member, "confidence": confidence }),
                dot: None,
                confidence,
            }
        }
        Verb::Join { q, a, b } | Verb::Meet { q, a, b } => {
            let fp = field(*q)?;
            let (ga, gb) = (generators(a, &fp)?, generators(b, &fp)?);
            let all: Vec<Monomial> = ga.iter().chain(&gb).cloned().collect();
            let cap = cap_for(cli, &fp, &all);
            let (ca, cb) = (generate(&ga, &fp, &cap)?, generate(&gb, &fp, &cap)?);
            if matches!(cli.verb, Verb::Join { .. }) {
                clone_out(join(&ca, &cb)?)
            } else {
                clone_out(meet(&ca, &cb)?)
            }
        }
        Verb::Lattice { q, width } => {
            let fp = field(*q)?;
            let w = width.unwrap_or(fp.q);
            let cap = cli.cap.map(|c| {
                let d = enumeration_cap(&fp, w);
                CapPolicy { per_residue_cap: c.max(2 * fp.n()), ..d }
            });
            hasse_out(enumerate_lattice(&fp, w, cap)?)
        }
        Verb::Atoms { q } => {
            let fp = field(*q)?;
            let cs = atoms(&fp)?;
            let text: String = cs.iter().map(|c| format!("<{}>\n", names(&c.generators))).collect();
            let json = Value::Array(cs.iter().map(clone_json).collect());
            Out::exact(text, json)
        }
        Verb::Coatoms { q } => {
            let fp = field(*q)?;
            let ds = coatoms(&fp)?;
            let mut text = String::new();
            for d in &ds {
                text.push_str(&match d {
                    CoatomDescriptor::Interval { prime } => {
                        format!("<{}>\n", Monomial::all_ones(1 + prime, &fp))
                    }
                    CoatomDescriptor::Kd { indices, t } => format!("K_D with D = {indices:?}, T = {t}\n"),
                });
            }
            let mut json = serde_json::to_value(&ds).expect("serializable");
            if cli.cap.is_some() {
                let cap = cap_for(cli, &fp, &[Monomial::all_ones(2, &fp)]);
                let cs = ds.iter().map(|d| coatom_clone(d, &fp, &cap)).collect::<Result<Vec<_>, _>>()?;
                json = json!({ "descriptors": json, "clones": cs.iter().map(clone_json).collect::<Vec<_>>() });
            }
            Out::exact(text, json)
        }
        Verb::Interval { q } => {
            let fp = field(*q)?;
            let d = divisor_interval(&fp)?;
            let mut text = format!("C(a) = <x1...x_(1+a)> for a | {}\n", fp.n());
            for (i, a) in d.divisors.iter().enumerate() {
                for (j, b) in d.divisors.iter().enumerate() {
                    if i != j && d.included[i][j].member {
                        text.push_str(&format!("  C({a}) <= C({b})\n"));
                    }
                }
            }
            text.push_str(&format!("inclusion matches divisibility: {}\n", d.anti_isomorphic()));
            let json = json!({
                "q": fp.q,
                "divisors": d.divisors,
                "generators": d.generators.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
                "included": d.included.iter().map(|row| row.iter().map(|m| m.member).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "anti_isomorphic": d.anti_isomorphic(),
            });
            Out { text, json, dot: None, confidence: d.confidence() }
        }
        Verb::Chain { q, length } => {
            let fp = field(*q)?;
            let c = ascending_chain(&fp, *length)?;
            let mut text = String::new();
            for (i, cl) in c.clones.iter().enumerate() {
                text.push_str(&format!("<{}>", names(&cl.generators)));
                if let Some(&s) = c.strict.get(i) {
                    text.push_str(if s { " < " } else { " <=? " });
                }
            }
            text.push('\n');
            let json = json!({
                "q": fp.q,
                "generators": c.clones.iter().map(|cl| cl.generators[0].to_string()).collect::<Vec<_>>(),
                "strict": c.strict,
            });
            let confidence = c.clones.iter().fold(Confidence::Exact, |a, cl| a.and(cl.confidence()));
            Out { text, json, dot: None, confidence }
        }
        Verb::Idempotent { q, width } => {
            let fp = field(*q)?;
            hasse_out(idempotent_interval(&fp, width.unwrap_or(fp.q), None)?)
        }
        Verb::SingleGen { q, m1, m2 } => {
            let fp = field(*q)?;
            let m = single_generator(&parse_monomial(m1, &fp)?, &parse_monomial(m2, &fp)?, &fp)?;
            Out::exact(format!("{m}\n"), monoclone::export::monomial_json(&m, &fp))
        }
        Verb::Phi { q, gens } => {
            let fp = field(*q)?;
            let g = generators(gens, &fp)?;
            let c = generate(&g, &fp, &cap_for(cli, &fp, &g))?;
            let lc = phi_affine(&c);
            Out { text: linear_text(&lc), json: linear_clone_json(&lc), dot: None, confidence: c.confidence() }
        }
        Verb::SemiaffineLattice { modulus } => {
            if *modulus == 0 {
                return Err(Failure::Usage("modulus must be positive".into()));
            }
            let d = enumerate_semiaffine_lattice(*modulus, cli.cap);
            let mut text = format!("Z_{}: {} clones, {} covering pairs\n", d.n, d.len(), d.edges.len());
            for (i, l) in d.labels.iter().enumerate() {
                let ls: Vec<String> = l.iter().map(|f| f.to_string()).collect();
                text.push_str(&format!("  {i}: <{}>\n", ls.join(", ")));
            }
            for (a, b) in &d.edges {
                text.push_str(&format!("  {a} < {b}\n"));
            }
            Out { text, json: semiaffine_json(&d), dot: Some(semiaffine_dot(&d)), confidence: Confidence::Exact }
        }
        Verb::Fiber { q, forms } => {
            let fp = field(*q)?;
            let fs = parse_linear_forms(forms, fp.n())?;
            let lc = linear_closure(&fs, fp.n(), None);
            let d = enumerate_lattice(&fp, fp.q, None)?;
            let ids = fiber(&lc, &d);
            let text: String = ids.iter().map(|&i| format!("<{}>\n", names(&d.labels[i]))).collect();
            let json = json!({
                "q": fp.q,
                "modulus": fp.n(),
                "linear_clone": linear_clone_json(&lc),
                "fiber": ids.iter().map(|&i| clone_json(&d.nodes[i])).collect::<Vec<_>>(),
            });
            Out { text, json, dot: None, confidence: Confidence::from_stable(d.stable()) }
        }
        Verb::Minorset { q, gens, offset } => {
            let fp = field(*q)?;
            let g = generators(gens, &fp)?;
            let c = generate(&g, &fp, &cap_for(cli, &fp, &g))?;
            let s = phi_minor(&c);
            match offset {
                Some(b) => {
                    let b: Vec<u32> = b
                        .split(',')
                        .map(|x| x.trim().parse().map_err(|_| Failure::Usage(format!("bad offset coordinate {x:?}"))))
                        .collect::<Result<_, _>>()?;
                    let m = minor_m(&b, &s)?;
                    let text: String = m.iter().map(|p| format!("{p:?}\n")).collect();
                    Out { text, json: json!({ "offset": b, "points": m }), dot: None, confidence: c.confidence() }
                }
                None => {
                    let text: String = s.points.iter().map(|p| format!("{p:?}\n")).collect();
                    Out { text, json: minorset_json(&s), dot: None, confidence: c.confidence() }
                }
            }
        }
        Verb::Check { q, only } => {
            let fp = field(*q)?;
            let results = match only {
                Some(list) => {
                    let mut picked = Vec::new();
                    for name in list.split(',').map(str::trim) {
                        match PROPERTIES.iter().find(|p| **p == name) {
                            Some(p) => picked.push(*p),
                            None => return Err(Failure::Usage(format!("unknown property {name:?}"))),
                        }
                    }
                    run_selected(&fp, &picked)
                }
                None => run_battery(&fp),
            };
            let text: String = results.iter().map(|r| format!("{r}\n")).collect();
            let json = serde_json::to_value(&results).expect("serializable");
            if results.iter().any(|r| r.outcome == Outcome::Fail) {
                print!("{text}");
                return Err(Failure::Usage("property battery reported failures".into()));
            }
            Out::exact(text, json)
        }
    })
}
