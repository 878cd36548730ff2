//! Command-line front end. Exit codes: 0 success, 1 domain error (single
//! line on stderr), 2 usage error (from the argument parser).

use crate::analysis::{
    analyze, automorphisms, check_polytopality, classify, symmetry_type_graph,
};
use crate::constructions::{
    self, alternating_report, build_alternating, build_family1, build_family2,
    build_higher_rank, catalog, catalog_manifest, chiral_from_maniplex, chiral_polytope,
    regular_from_maniplex, regular_polytope, regular_polytope_schlafli, ChiralGroup,
};
use crate::group::presentation::Presentation;
use crate::io::{parse_premaniplex, parse_voltage, serialize_premaniplex};
use crate::premaniplex::{Flag, Premaniplex};
use clap::{Parser, Subcommand};
use std::collections::BTreeMap;
use std::error::Error;
use std::path::{Path, PathBuf};

const DEFAULT_MAX_COSETS: usize = 10_000_000;

#[derive(Parser)]
#[command(name = "maniforge", version, about = "Flag-graph toolkit for maniplexes and polytopes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a polytope flag graph from a group presentation.
    Build {
        #[command(subcommand)]
        kind: BuildCmd,
    },
    /// Run one of the family constructions.
    Construct {
        #[command(subcommand)]
        kind: ConstructCmd,
    },
    /// Full JSON analysis report of a flag graph.
    Analyze {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Symmetry type graph of a flag graph, as .mpx text.
    Stg {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check the strong path-intersection (polytopality) property.
    CheckPolytope { input: PathBuf },
    /// Petrie polygon lengths and simplicity.
    Petrie { input: PathBuf },
    /// Apply one or more operators (dual, petrial, opposite, identity,
    /// family1:n, family1_prime:n, family2:k, family2_prime:k) in order.
    Operate {
        #[arg(long = "op", required = true)]
        ops: Vec<String>,
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check whether a base automorphism lifts to the derived graph of a
    /// voltage premaniplex.
    LiftCheck {
        input: PathBuf,
        /// Image of every base flag under the automorphism, space- or
        /// comma-separated.
        #[arg(long)]
        automorphism: String,
    },
    /// Test two flag graphs for color-respecting isomorphism.
    Isomorphic { a: PathBuf, b: PathBuf },
    /// Bundled catalog operations.
    Catalog {
        #[command(subcommand)]
        kind: CatalogCmd,
    },
}

#[derive(Subcommand)]
enum BuildCmd {
    /// Regular polytope: from a Schläfli symbol or a reflection-group
    /// presentation file.
    Regular {
        #[arg(long, value_delimiter = ',')]
        schlafli: Option<Vec<usize>>,
        #[arg(long)]
        presentation: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Chiral polytope from a rotation-group presentation file.
    Chiral {
        #[arg(long)]
        presentation: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Family-1 construction over a regular polytope.
    Family1 {
        #[arg(long)]
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Family-2 construction over a chiral polytope of odd rank.
    Family2 {
        #[arg(long)]
        input: PathBuf,
        /// Optional rotation-group presentation; avoids the automorphism
        /// search on the input flag graph.
        #[arg(long)]
        group: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Alternating semiregular construction over a chiral polytope.
    Alternating {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        group: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Rank-raising construction over a regular maniplex with isomorphic
    /// facets.
    HigherRank {
        #[arg(long)]
        input: PathBuf,
        /// Presentation of the regular polytope whose generators label the
        /// new color, one generator per facet of the input.
        #[arg(long)]
        group: PathBuf,
        /// Central involution of the facet group, as a word in r0, r1, ...
        #[arg(long)]
        sigma: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    /// Rebuild every manifest entry and check its recorded invariants.
    Verify,
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", single_line(&e.to_string()));
            1
        }
    }
}

fn single_line(s: &str) -> String {
    s.replace('\n', " | ")
}

fn max_cosets() -> usize {
    std::env::var("MANIFORGE_MAX_COSETS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_COSETS)
}

fn read_mpx(path: &Path) -> Result<Premaniplex, Box<dyn Error>> {
    let text = std::fs::read_to_string(path)?;
    Ok(parse_premaniplex(&text)?.premaniplex())
}

fn read_presentation(path: &Path) -> Result<Presentation, Box<dyn Error>> {
    let text = std::fs::read_to_string(path)?;
    Ok(Presentation::parse(&text)?)
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<(), Box<dyn Error>> {
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn chiral_input(
    input: &Path,
    group: &Option<PathBuf>,
) -> Result<(Premaniplex, ChiralGroup), Box<dyn Error>> {
    let pm = read_mpx(input)?;
    let cg = match group {
        Some(path) => {
            let pres = read_presentation(path)?;
            let (cover, cg) = chiral_polytope(&pres, max_cosets())?;
            let total = cover.total_premaniplex();
            if total.flag_count() != pm.flag_count() {
                return Err(format!(
                    "presentation yields {} flags but input has {}",
                    total.flag_count(),
                    pm.flag_count()
                )
                .into());
            }
            cg
        }
        None => chiral_from_maniplex(&pm)?,
    };
    Ok((pm, cg))
}

fn dispatch(cmd: Cmd) -> Result<i32, Box<dyn Error>> {
    match cmd {
        Cmd::Build { kind } => match kind {
            BuildCmd::Regular {
                schlafli,
                presentation,
                output,
            } => {
                let p = match (schlafli, presentation) {
                    (Some(sym), None) => regular_polytope_schlafli(&sym, max_cosets())?,
                    (None, Some(path)) => {
                        regular_polytope(&read_presentation(&path)?, max_cosets())?
                    }
                    _ => {
                        return Err("give exactly one of --schlafli or --presentation".into());
                    }
                };
                emit(&output, &serialize_premaniplex(p.premaniplex()))?;
                Ok(0)
            }
            BuildCmd::Chiral {
                presentation,
                output,
            } => {
                let pres = read_presentation(&presentation)?;
                let (cover, _cg) = chiral_polytope(&pres, max_cosets())?;
                emit(&output, &serialize_premaniplex(cover.total_premaniplex()))?;
                Ok(0)
            }
        },
        Cmd::Construct { kind } => match kind {
            ConstructCmd::Family1 { input, output } => {
                let pm = read_mpx(&input)?;
                let p = regular_from_maniplex(&pm)?;
                let (cover, pre) = build_family1(&p)?;
                for w in &pre.warnings {
                    eprintln!("warning: {w}");
                }
                emit(&output, &serialize_premaniplex(cover.total_premaniplex()))?;
                Ok(0)
            }
            ConstructCmd::Family2 {
                input,
                group,
                output,
            } => {
                let (pm, cg) = chiral_input(&input, &group)?;
                let (cover, pre) = build_family2(&pm, &cg)?;
                for w in &pre.warnings {
                    eprintln!("warning: {w}");
                }
                emit(&output, &serialize_premaniplex(cover.total_premaniplex()))?;
                Ok(0)
            }
            ConstructCmd::Alternating {
                input,
                group,
                output,
            } => {
                let (pm, cg) = chiral_input(&input, &group)?;
                let cover = build_alternating(&cg)?;
                let aut = automorphisms(&pm);
                let duality = crate::analysis::self_duality(&pm, &aut);
                let report = alternating_report(&cover, duality)?;
                eprintln!("{}", serde_json::to_string(&report)?);
                emit(&output, &serialize_premaniplex(cover.total_premaniplex()))?;
                Ok(0)
            }
            ConstructCmd::HigherRank {
                input,
                group,
                sigma,
                output,
            } => {
                let m = read_mpx(&input)?;
                let p = regular_polytope(&read_presentation(&group)?, max_cosets())?;
                let cover = build_higher_rank(&m, &sigma, &p)?;
                emit(&output, &serialize_premaniplex(cover.total_premaniplex()))?;
                Ok(0)
            }
        },
        Cmd::Analyze { input, output } => {
            let pm = read_mpx(&input)?;
            let report = analyze(&pm)?;
            let mut json = serde_json::to_string_pretty(&report)?;
            json.push('\n');
            emit(&output, &json)?;
            Ok(0)
        }
        Cmd::Stg { input, output } => {
            let pm = read_mpx(&input)?;
            let aut = automorphisms(&pm);
            let stg = symmetry_type_graph(&pm, &aut)?;
            emit(&output, &serialize_premaniplex(&stg.premaniplex))?;
            Ok(0)
        }
        Cmd::CheckPolytope { input } => {
            let pm = read_mpx(&input)?;
            let report = check_polytopality(&pm);
            if report.is_polytope {
                println!("polytope: true");
            } else if let Some((a, b, (k, m))) = report.witness {
                println!("polytope: false (flags {a} {b} share faces of ranks {k}..{m} in different sections)");
            } else {
                println!("polytope: false");
            }
            Ok(0)
        }
        Cmd::Petrie { input } => {
            let pm = read_mpx(&input)?;
            let report = pm.petrie_polygons();
            let mut lengths: BTreeMap<u32, u32> = BTreeMap::new();
            for &l in &report.lengths {
                *lengths.entry(l).or_insert(0) += 1;
            }
            let json = serde_json::json!({
                "lengths": lengths,
                "all_simple": report.all_simple(),
            });
            println!("{}", serde_json::to_string_pretty(&json)?);
            Ok(0)
        }
        Cmd::Operate { ops, input, output } => {
            let mut pm = read_mpx(&input)?;
            for spec in &ops {
                let (name, param) = match spec.split_once(':') {
                    Some((n, p)) => {
                        let k: usize = p
                            .parse()
                            .map_err(|_| format!("bad operator parameter in `{spec}`"))?;
                        (n, Some(k))
                    }
                    None => (spec.as_str(), None),
                };
                // Rank-preserving one-vertex operators default to the
                // current rank.
                let param = match (name, param) {
                    ("dual" | "identity", None) => Some(pm.rank()),
                    _ => param,
                };
                let op = crate::operators::builtin_operator(name, param)?;
                let product = crate::operators::operator_apply(&pm, &op)?;
                if product.disconnected {
                    eprintln!("warning: operator `{spec}` product was disconnected; using the component of the base flag");
                }
                pm = product.result.premaniplex();
            }
            emit(&output, &serialize_premaniplex(&pm))?;
            Ok(0)
        }
        Cmd::LiftCheck {
            input,
            automorphism,
        } => {
            let text = std::fs::read_to_string(&input)?;
            let v = parse_voltage(&text)?;
            let tau: Vec<Flag> = automorphism
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<Flag>())
                .collect::<Result<_, _>>()
                .map_err(|_| "automorphism must be a list of flag numbers")?;
            if tau.len() != v.base().flag_count() {
                return Err(format!(
                    "automorphism lists {} flags, base has {}",
                    tau.len(),
                    v.base().flag_count()
                )
                .into());
            }
            println!("lifts: {}", v.lift_check(&tau)?);
            Ok(0)
        }
        Cmd::Isomorphic { a, b } => {
            let pa = read_mpx(&a)?;
            let pb = read_mpx(&b)?;
            println!("{}", pa.is_isomorphic(&pb));
            Ok(0)
        }
        Cmd::Catalog { kind } => match kind {
            CatalogCmd::Verify => {
                let manifest = catalog_manifest();
                let mut failures = 0;
                for entry in &manifest.entries {
                    match verify_entry(entry) {
                        Ok(()) => println!("PASS {}", entry.name),
                        Err(msg) => {
                            println!("FAIL {}: {}", entry.name, single_line(&msg));
                            failures += 1;
                        }
                    }
                }
                if failures > 0 {
                    Err(format!("{failures} catalog entries failed").into())
                } else {
                    Ok(0)
                }
            }
        },
    }
}

fn verify_entry(entry: &constructions::CatalogEntry) -> Result<(), String> {
    let built = catalog(&entry.name).map_err(|e| e.to_string())?;
    let pm = built.as_premaniplex();
    if pm.flag_count() != entry.flags {
        return Err(format!("expected {} flags, got {}", entry.flags, pm.flag_count()));
    }
    if pm.rank() != entry.rank {
        return Err(format!("expected rank {}, got {}", entry.rank, pm.rank()));
    }
    if let Some(expected) = &entry.classification {
        let aut = automorphisms(pm);
        let got = classify(pm, &aut).label();
        if &got != expected {
            return Err(format!("expected classification {expected}, got {got}"));
        }
    }
    if let Some(expected) = entry.polytope {
        let got = check_polytopality(pm).is_polytope;
        if got != expected {
            return Err(format!("expected polytope={expected}, got {got}"));
        }
    }
    if entry.orientable.is_some() || entry.genus.is_some() {
        let report = pm.orientability().map_err(|e| e.to_string())?;
        if let Some(expected) = entry.orientable {
            if report.orientable != expected {
                return Err(format!(
                    "expected orientable={expected}, got {}",
                    report.orientable
                ));
            }
        }
        if let Some(expected) = entry.genus {
            if report.genus != Some(expected) {
                return Err(format!("expected genus {expected}, got {:?}", report.genus));
            }
        }
    }
    Ok(())
}
