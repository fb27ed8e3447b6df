//! `omkit`: command-line front end for sign-vector systems and periodic
//! arrangements.
//!
//! Exit status: 0 on success, 1 when a check fails (witnesses are printed),
//! 2 on malformed input or any other error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use omkit_core::action::{
    arithmetic_tutte_from_matrix, certify_action, gsemimatroid_table, parse_gamma,
    toric_face_census, GSemimatroidTable, TranslationAction,
};
use omkit_core::axioms::classify;
use omkit_core::frames::{BasisFrame, IndexPoint};
use omkit_core::minors::minor;
use omkit_core::polynomial::Poly2;
use omkit_core::poset::{covector_poset, flats_poset, thinness, tope_poset, RankedPoset, Thinness};
use omkit_core::rational::{parse_q, q, Q};
use omkit_core::realize::{
    parse_arrangement, parse_window, Arrangement, PeriodicArrangement, DEFAULT_SEED,
};
use omkit_core::semimatroid::{
    all_hold, cryptomorphism_roundtrip, underlying_semimatroid, RuleReport, SetSemilattice,
};
use omkit_core::topegraph::TopeGraph;
use omkit_core::{SignSystem, SignVector};

#[derive(Parser)]
#[command(
    name = "omkit",
    version,
    about = "Exact tools for sign-vector systems and periodic arrangements"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for generic-point choices during realization.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Source {
    /// Sign system, arrangement, character matrix or orbit table (JSON).
    #[arg(long)]
    input: PathBuf,
    /// Window `lo,hi;lo,hi` for periodic arrangements.
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PosetKind {
    Covector,
    Flats,
    Topes,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a system against every axiom.
    Check {
        #[command(flatten)]
        src: Source,
    },
    /// Covectors of an arrangement.
    Realize {
        #[command(flatten)]
        src: Source,
    },
    /// Delete and contract elements.
    Minor {
        #[command(flatten)]
        src: Source,
        #[arg(long, value_delimiter = ',')]
        delete: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        contract: Vec<String>,
    },
    /// Covector, flat or tope poset with Euler characteristic and thinness.
    Poset {
        #[command(flatten)]
        src: Source,
        #[arg(long, value_enum, default_value_t = PosetKind::Covector)]
        kind: PosetKind,
        /// Base tope for `--kind topes`.
        #[arg(long, allow_hyphen_values = true)]
        base: Option<String>,
        /// Print Graphviz instead of the report.
        #[arg(long)]
        dot: bool,
    },
    /// Flats and the characteristic polynomial.
    Flats {
        #[command(flatten)]
        src: Source,
    },
    /// Tope graph, partial-cube test and convex balls.
    TopeGraph {
        #[command(flatten)]
        src: Source,
        #[arg(long, allow_hyphen_values = true)]
        base: Option<String>,
        #[arg(long, default_value_t = 0)]
        radius: usize,
        #[arg(long)]
        dot: bool,
    },
    /// Underlying semimatroid and its rank and lattice axioms.
    Semimatroid {
        #[command(flatten)]
        src: Source,
    },
    /// Basis-frame isomorphism on a periodic window.
    Frames {
        #[command(flatten)]
        src: Source,
        /// One orbit name per basis family (default: greedy).
        #[arg(long, value_delimiter = ',')]
        basis: Vec<String>,
        /// Index point such as `1/2,1/2` whose fiber to report.
        #[arg(long, allow_hyphen_values = true)]
        fiber: Option<String>,
    },
    /// Tutte polynomial of a translation action or an orbit table.
    Tutte {
        #[command(flatten)]
        src: Source,
        /// Generators of the acting lattice, `1,0;0,2` (default: all translations).
        #[arg(long, allow_hyphen_values = true)]
        gamma: Option<String>,
    },
    /// Chambers of the toric quotient.
    ToricCount {
        #[command(flatten)]
        src: Source,
        #[arg(long, allow_hyphen_values = true)]
        gamma: Option<String>,
        /// Compare with T(1,0) and the characteristic polynomial identity.
        #[arg(long)]
        verify: bool,
    },
}

struct Report {
    text: String,
    json: Value,
    ok: bool,
}

enum Loaded {
    System(SignSystem),
    Arrangement(Arrangement),
    Characters(Vec<Vec<i64>>),
    Table(GSemimatroidTable),
}

fn load(path: &Path) -> anyhow::Result<Loaded> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let v: Value =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let has = |k: &str| v.get(k).is_some();
    Ok(if has("ground") {
        Loaded::System(SignSystem::from_json(&text)?)
    } else if has("ground_orbits") {
        Loaded::Table(GSemimatroidTable::from_json(&text)?)
    } else if has("characters") {
        let m: Vec<Vec<i64>> = serde_json::from_value(v["characters"].clone())
            .context("\"characters\" must be a matrix of integers")?;
        Loaded::Characters(m)
    } else if has("dim") {
        Loaded::Arrangement(parse_arrangement(&text)?)
    } else {
        bail!(
            "{}: expected a sign system, arrangement, character matrix or orbit table",
            path.display()
        )
    })
}

fn periodic_of(l: Loaded) -> anyhow::Result<(PeriodicArrangement, Option<Vec<Vec<i64>>>)> {
    match l {
        Loaded::Arrangement(Arrangement::Periodic(p)) => Ok((p, None)),
        Loaded::Characters(m) => Ok((PeriodicArrangement::from_characters(&m)?, Some(m))),
        _ => bail!("expected a periodic arrangement or a character matrix"),
    }
}

fn load_system(src: &Source, seed: u64) -> anyhow::Result<SignSystem> {
    let window = src.window.as_deref().map(parse_window).transpose()?;
    match load(&src.input)? {
        Loaded::System(s) => Ok(s),
        Loaded::Arrangement(Arrangement::Finite(a)) => Ok(a.covectors(seed)?),
        Loaded::Arrangement(Arrangement::Periodic(p)) => {
            let w = window.ok_or_else(|| anyhow!("periodic input needs --window"))?;
            Ok(p.window_restrict(&w)?.0.covectors(seed)?)
        }
        Loaded::Characters(m) => {
            let w = window.ok_or_else(|| anyhow!("periodic input needs --window"))?;
            let p = PeriodicArrangement::from_characters(&m)?;
            Ok(p.window_restrict(&w)?.0.covectors(seed)?)
        }
        Loaded::Table(_) => bail!("an orbit table has no covectors"),
    }
}

fn action_of(p: PeriodicArrangement, gamma: Option<&str>) -> anyhow::Result<TranslationAction> {
    Ok(match gamma {
        Some(g) => TranslationAction::new(p, &parse_gamma(g)?)?,
        None => TranslationAction::full(p),
    })
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn poly_t(p: &Poly2) -> String {
    p.display_with("t", "s")
}

fn rules_text(out: &mut String, rules: &[RuleReport]) {
    for r in rules {
        let _ = write!(out, "{:<12} {}", r.rule, yes(r.holds));
        if let Some(w) = &r.witness {
            let _ = write!(out, "  {w}");
        }
        out.push('\n');
    }
}

fn system_text(s: &SignSystem) -> String {
    let mut out = format!("ground: {}\n", s.ground().names().join(","));
    for x in s.iter() {
        let _ = writeln!(out, "{x}");
    }
    out
}

fn check(s: &SignSystem) -> Report {
    let c = classify(s);
    let mut text = String::from("axiom   holds  witness\n");
    for r in &c.reports {
        let mut line = format!("{:<7} {:<6}", r.axiom.name(), yes(r.holds));
        if let Some(w) = r.to_json(s).get("witness") {
            let _ = write!(line, " {w}");
        }
        if let Some(m) = r.metric {
            let _ = write!(line, " max={m}");
        }
        let _ = writeln!(text, "{}", line.trim_end());
    }
    let _ = writeln!(text, "COM: {}", yes(c.com));
    let _ = writeln!(text, "AOM: {}, OM: {}", yes(c.is_aom()), yes(c.om));
    if c.aom_original != c.aom_simplified {
        let _ = writeln!(
            text,
            "axiom systems disagree: original {}, simplified {}",
            yes(c.aom_original),
            yes(c.aom_simplified)
        );
    }
    Report {
        text,
        json: c.to_json(s),
        ok: c.is_aom(),
    }
}

fn realize(s: &SignSystem) -> Report {
    let by_zero = |k: usize| s.iter().filter(|x| x.zero_set().count() == k).count();
    let text = format!(
        "covectors={} topes={}\n{}",
        s.len(),
        by_zero(0),
        system_text(s)
    );
    Report {
        text,
        json: s.to_json_value(),
        ok: true,
    }
}

fn poset_report(p: &RankedPoset, dual_too: bool) -> (String, Value) {
    let th = |p: &RankedPoset| match thinness(p).class {
        Thinness::Thin => "thin",
        Thinness::Subthin => "subthin",
        Thinness::Neither => "neither",
    };
    let mut text = format!(
        "elements={} length={} graded={}\nrank counts: {:?}\nreduced Euler characteristic: {}\nthinness: {}\n",
        p.len(),
        p.length(),
        yes(p.is_graded()),
        p.rank_counts(),
        p.reduced_euler_characteristic(),
        th(p),
    );
    let mut json = json!({
        "poset": p.to_json(),
        "reduced_euler_characteristic": p.reduced_euler_characteristic(),
        "thinness": th(p),
    });
    if dual_too {
        let d = p.dual();
        let _ = writeln!(text, "thinness of dual: {}", th(&d));
        json["dual_thinness"] = json!(th(&d));
    }
    (text, json)
}

fn run(cli: &Cli) -> anyhow::Result<Report> {
    let seed = cli.seed;
    match &cli.command {
        Command::Check { src } => Ok(check(&load_system(src, seed)?)),
        Command::Realize { src } => Ok(realize(&load_system(src, seed)?)),
        Command::Minor {
            src,
            delete,
            contract,
        } => {
            let s = load_system(src, seed)?;
            let g = s.ground();
            let m = minor(&s, &g.set_of(delete)?, &g.set_of(contract)?)?;
            Ok(Report {
                text: system_text(&m),
                json: m.to_json_value(),
                ok: true,
            })
        }
        Command::Poset {
            src,
            kind,
            base,
            dot,
        } => {
            let s = load_system(src, seed)?;
            let p = match kind {
                PosetKind::Covector => covector_poset(&s),
                PosetKind::Flats => flats_poset(&s),
                PosetKind::Topes => {
                    let b = match base {
                        Some(b) => SignVector::parse(b)?,
                        None => s
                            .topes()
                            .first()
                            .cloned()
                            .ok_or_else(|| anyhow!("no topes"))?,
                    };
                    tope_poset(&s, &b)?
                }
            };
            if *dot {
                return Ok(Report {
                    text: p.to_dot(),
                    json: json!(p.to_dot()),
                    ok: true,
                });
            }
            let (text, json) = poset_report(&p, *kind == PosetKind::Covector);
            Ok(Report {
                text,
                json,
                ok: true,
            })
        }
        Command::Flats { src } => {
            let s = load_system(src, seed)?;
            let p = flats_poset(&s);
            let chi = p.characteristic_polynomial()?;
            let mut text = format!(
                "flats={} rank={}\nchi(t) = {}\n",
                p.len(),
                p.length(),
                poly_t(&chi)
            );
            for l in p.labels() {
                let _ = writeln!(text, "{l}");
            }
            Ok(Report {
                text,
                json: json!({"poset": p.to_json(), "characteristic_polynomial": poly_t(&chi)}),
                ok: true,
            })
        }
        Command::TopeGraph {
            src,
            base,
            radius,
            dot,
        } => {
            let s = load_system(src, seed)?;
            let g = TopeGraph::new(&s)?;
            if *dot {
                return Ok(Report {
                    text: g.to_dot(),
                    json: json!(g.to_dot()),
                    ok: true,
                });
            }
            let violation = g.partial_cube_violation();
            let mut text = format!(
                "topes={} edges={} diameter={}\npartial cube: {}\n",
                g.len(),
                g.edge_count(),
                g.diameter(),
                yes(violation.is_none())
            );
            if let Some((i, j)) = violation {
                let _ = writeln!(text, "witness: {} {}", g.topes()[i], g.topes()[j]);
            }
            let mut json = g.to_json();
            json["partial_cube"] = json!(violation.is_none());
            if let Some(b) = base {
                let seq = g.convex_ball_sequence(&SignVector::parse(b)?, *radius)?;
                let sizes: Vec<usize> = seq.iter().map(Vec::len).collect();
                let _ = writeln!(text, "convex balls around {b}: {sizes:?}");
                json["convex_balls"] = json!(seq
                    .iter()
                    .map(|v| v
                        .iter()
                        .map(|&i| g.topes()[i].to_string())
                        .collect::<Vec<_>>())
                    .collect::<Vec<_>>());
            }
            Ok(Report {
                text,
                json,
                ok: violation.is_none(),
            })
        }
        Command::Semimatroid { src } => {
            let s = load_system(src, seed)?;
            let sm = underlying_semimatroid(&s)?;
            let rules = sm.check();
            let lattice = SetSemilattice::new(s.ground(), omkit_core::poset::flats(&s))?;
            let gsl = lattice.check();
            let (_, same) =
                cryptomorphism_roundtrip(s.ground().clone(), &omkit_core::poset::flats(&s))?;
            let mut text = format!("rank={} facets={}\n", sm.rank(), sm.facets().len());
            rules_text(&mut text, &rules);
            rules_text(&mut text, &gsl);
            let _ = writeln!(text, "round trip: {}", yes(same));
            let ok = all_hold(&rules) && all_hold(&gsl) && same;
            Ok(Report {
                text,
                json: json!({
                    "semimatroid": sm.to_json(),
                    "rules": rules.iter().chain(&gsl).map(RuleReport::to_json).collect::<Vec<_>>(),
                    "round_trip": same,
                }),
                ok,
            })
        }
        Command::Frames { src, basis, fiber } => {
            let w = src
                .window
                .as_deref()
                .map(parse_window)
                .transpose()?
                .ok_or_else(|| anyhow!("frames needs --window"))?;
            let (p, _) = periodic_of(load(&src.input)?)?;
            let f = if basis.is_empty() {
                BasisFrame::greedy(&p, &w, seed)?
            } else {
                let idx: Vec<usize> = basis
                    .iter()
                    .map(|n| {
                        p.reps()
                            .iter()
                            .position(|h| &h.name == n)
                            .ok_or_else(|| anyhow!("unknown orbit {n:?}"))
                    })
                    .collect::<anyhow::Result<_>>()?;
                BasisFrame::new(&p, &idx, &w, seed)?
            };
            let cert = f.check_isomorphism()?;
            let mut text = format!(
                "families: {}\ninterior points: {}\nisomorphism: {}\n",
                cert.families.join(","),
                cert.table.len(),
                yes(cert.holds())
            );
            if let Some(e) = &cert.failure {
                let _ = writeln!(text, "witness: {e}");
            }
            let mut json = cert.to_json();
            if let Some(spec) = fiber {
                let coords: Vec<Q> = spec
                    .split(',')
                    .map(|x| parse_q(x.trim()))
                    .collect::<Result<_, _>>()?;
                let y = f.x_of_index(&IndexPoint(coords))?;
                let fib = f.fiber(&y)?;
                let _ = writeln!(
                    text,
                    "fiber over {y}: size={} length={} rank={}",
                    fib.members.len(),
                    fib.length,
                    fib.rank
                );
                json["fiber"] = json!({
                    "frame_covector": y.to_string(),
                    "members": fib.members.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "length": fib.length,
                    "rank": fib.rank,
                });
            }
            Ok(Report {
                text,
                json,
                ok: cert.holds(),
            })
        }
        Command::Tutte { src, gamma } => {
            let loaded = load(&src.input)?;
            let (table, chars) = match loaded {
                Loaded::Table(t) => (t, None),
                other => {
                    let (p, chars) = periodic_of(other)?;
                    (gsemimatroid_table(&action_of(p, gamma.as_deref())?)?, chars)
                }
            };
            let t = table.tutte_polynomial();
            let mut text = format!("T(x,y) = {}\nT(1,0) = {}\n", t, t.eval(1, 0));
            let mut json = json!({
                "polynomial": t.to_string(),
                "T(1,0)": t.eval(1, 0),
                "table": table.to_json(),
            });
            let mut ok = true;
            if let (Some(m), None) = (chars, gamma) {
                let a = arithmetic_tutte_from_matrix(&m)?;
                ok = a == t;
                let _ = writeln!(
                    text,
                    "arithmetic Tutte from matrix: {a} ({})",
                    if ok { "MATCH" } else { "MISMATCH" }
                );
                json["arithmetic"] = json!(a.to_string());
            }
            Ok(Report { text, json, ok })
        }
        Command::ToricCount { src, gamma, verify } => {
            let (p, _) = periodic_of(load(&src.input)?)?;
            let a = action_of(p, gamma.as_deref())?;
            let census = toric_face_census(&a, seed)?;
            let chambers = census.chambers();
            let cells: Vec<String> = census
                .by_dim
                .iter()
                .map(|(k, c)| format!("{k}:{c}"))
                .collect();
            let mut json = census.to_json();
            let mut ok = census.euler() == 0;
            let mut text = format!("chambers={chambers}");
            if *verify {
                let t = gsemimatroid_table(&a)?.tutte_polynomial();
                let t10 = t.eval(1, 0);
                let matched = t10 == chambers as i64;
                let _ = write!(
                    text,
                    ", T(1,0)={t10}, {}",
                    if matched { "MATCH" } else { "MISMATCH" }
                );
                let chi = omkit_core::action::verify_characteristic_identity(&a, seed)?;
                let certs = certify_action(&a, &double(&a.fundamental_box()), seed)?;
                json["T(1,0)"] = json!(t10);
                json["match"] = json!(matched);
                json["characteristic_identity"] = json!(chi.holds());
                json["certificates"] =
                    json!(certs.iter().map(RuleReport::to_json).collect::<Vec<_>>());
                text.push('\n');
                let _ = write!(
                    text,
                    "chi(t) = {}, identity: {}",
                    poly_t(&chi.chi),
                    yes(chi.holds())
                );
                for r in &certs {
                    let _ = write!(text, ", {}: {}", r.rule, yes(r.holds));
                }
                ok &= matched && chi.holds() && all_hold(&certs);
            }
            let _ = write!(
                text,
                "\ncells by dimension: {}, euler={}\n",
                cells.join(" "),
                census.euler()
            );
            Ok(Report { text, json, ok })
        }
    }
}

/// Widens a box about its centre to three times its size, padded by one.
fn double(w: &[(Q, Q)]) -> Vec<(Q, Q)> {
    w.iter()
        .map(|(lo, hi)| {
            let pad = hi - lo + q(1);
            (lo - &pad, hi + &pad)
        })
        .collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(r) => {
            match cli.format {
                Format::Text => print!("{}", r.text),
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&r.json).expect("serializable")
                ),
            }
            if r.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
