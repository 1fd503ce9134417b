//! `pcodes`: command-line front end for the perfect-codes toolkit.
//!
//! Exit status is 0 on success, 1 when an analytical check comes out
//! negative (codes not equivalent, no embedding, ...) and 2 on usage or
//! input errors.

mod out;

use std::io::{BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use out::{Format, Table};
use perfect_codes::canonical::{are_equivalent, are_isomorphic, automorphism_group, orbit_notation};
use perfect_codes::designs::{all_sts, design_isomorphism_classes, maximum_independent_set, st_set, systematic_coordinates};
use perfect_codes::io::{parse_label_map, parse_mpc, parse_pcc, parse_run, run_companion, write_mpc, write_pcc, RunState};
use perfect_codes::linalg::{hamming_code, kernel, rank};
use perfect_codes::mixed::{
    disjoint_kernel_triples, f8_codes_from_all_partitions, f8_codes_from_partitions, mixed_classes,
    mixed_is_perfect, quaternary_compress, MixedCode,
};
use perfect_codes::profiles::{clp, embed_search, enumerate_perfect_codes, EmbedOutcome};
use perfect_codes::report::{report, Catalog};
use perfect_codes::switching::{minimal_i_components, switch, switching_class_bfs, BfsOptions, SwitchingClassRun};
use perfect_codes::transforms::oa_perfect_correspondence;
use perfect_codes::{BinaryCode, Word};

#[derive(Parser)]
#[command(name = "pcodes", version, about = "Structural analysis of binary 1-perfect codes")]
struct Cli {
    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value = "tsv")]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a code as PCC1 text.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Size, distance and linearity invariants of every code in a catalog.
    Invariants { file: String },
    /// Decide whether the first codes of two files are equivalent.
    Equiv {
        a: String,
        b: String,
        /// Coordinate permutations only.
        #[arg(long)]
        isomorphism: bool,
    },
    /// Automorphism group, symmetry group and orbits.
    Aut { file: String },
    /// Steiner triple systems of all translates by codewords.
    Sts {
        file: String,
        /// `<digest> <label>` lines naming STS classes.
        #[arg(long)]
        labels: Option<PathBuf>,
    },
    /// The distance-3 support hypergraph and its independence number.
    StSet { file: String },
    /// Search for a systematic coordinate set.
    Systematic { file: String },
    /// Minimal i-components at one coordinate.
    Components {
        file: String,
        #[arg(long)]
        coord: usize,
        /// Write the components as a PCC1 catalog to stdout instead.
        #[arg(long)]
        emit: bool,
    },
    /// Switch one minimal i-component and print the new code.
    Switch {
        file: String,
        #[arg(long)]
        coord: usize,
        /// 1-based index into the component list.
        #[arg(long)]
        component: usize,
    },
    /// Breadth-first exploration of the switching class up to equivalence.
    ClassBfs {
        file: String,
        /// Run state file to continue from; updated in place.
        #[arg(long)]
        resume: Option<PathBuf>,
        /// Run state file to write (defaults to the resume file).
        #[arg(long)]
        state: Option<PathBuf>,
        #[arg(long)]
        max_codes: Option<usize>,
        #[arg(long)]
        max_depth: Option<usize>,
    },
    /// Cardinality-length profile, comma separated.
    Clp { file: String },
    /// Orthogonal-array strength and its agreement with perfectness.
    OaCheck { file: String },
    /// Embed the first code of `sub` into the first code of `host`.
    Embed {
        sub: String,
        host: String,
        #[arg(long, default_value_t = 1_000_000_000)]
        budget: u64,
    },
    /// All 1-perfect codes of length 3 or 7.
    EnumeratePerfect {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        count_only: bool,
    },
    /// Mixed-alphabet codes.
    Mixed {
        #[command(subcommand)]
        action: MixedAction,
    },
    /// Aggregate report over a catalog.
    CatalogStats {
        file: PathBuf,
        #[arg(long)]
        table: String,
        #[arg(long)]
        labels: Option<PathBuf>,
        /// Neither read nor write the invariant cache.
        #[arg(long)]
        no_cache: bool,
    },
}

#[derive(Subcommand)]
enum GenKind {
    Hamming {
        #[arg(long)]
        m: usize,
    },
}

#[derive(Subcommand)]
enum MixedAction {
    /// Quaternary compressions along disjoint weight-3 kernel words.
    Compress {
        file: String,
        #[arg(long)]
        t: usize,
        /// Emit all compressions as MPC1 instead of class counts.
        #[arg(long)]
        emit: bool,
    },
    /// Codes over F8^1 F2^8 from partitions of F2^7.
    F8Enumerate {
        /// Enumerate every choice of the part through zero.
        #[arg(long)]
        all: bool,
        /// Emit one representative per class as MPC1.
        #[arg(long)]
        emit: bool,
    },
    /// Check perfectness of every code in an MPC1 file.
    Verify { file: String },
}

enum Outcome {
    Done,
    Negative,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Negative) => ExitCode::from(1),
        Err(e) if broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read_input(path: &str) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    if path == "-" {
        std::io::stdin().read_to_end(&mut buf)?;
    } else {
        buf = std::fs::read(path).with_context(|| format!("reading {path}"))?;
    }
    Ok(buf)
}

fn read_codes(path: &str) -> Result<Vec<BinaryCode>> {
    let bytes = read_input(path)?;
    parse_pcc(&bytes[..]).with_context(|| format!("parsing {path}"))
}

fn read_code(path: &str) -> Result<BinaryCode> {
    Ok(read_codes(path)?.remove(0))
}

fn print(s: &str) -> Result<()> {
    print_bytes(s.as_bytes())
}

fn print_bytes(b: &[u8]) -> Result<()> {
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    lock.write_all(b)?;
    lock.flush()?;
    Ok(())
}

/// A reader that closed stdout early (`| head`) is not an error.
fn broken_pipe(e: &anyhow::Error) -> bool {
    e.chain()
        .filter_map(|c| c.downcast_ref::<std::io::Error>())
        .any(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
}

fn emit_pcc(codes: &[BinaryCode]) -> Result<()> {
    let mut buf = Vec::new();
    write_pcc(codes, &mut buf)?;
    print_bytes(&buf)
}

fn emit_mpc(codes: &[MixedCode]) -> Result<()> {
    let mut buf = Vec::new();
    write_mpc(codes, &mut buf)?;
    print_bytes(&buf)
}

fn counts(v: &[u64]) -> Value {
    json!(v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "))
}

fn run(cli: &Cli) -> Result<Outcome> {
    let fmt = cli.format;
    match &cli.command {
        Command::Gen {
            kind: GenKind::Hamming { m },
        } => {
            emit_pcc(&[hamming_code(*m)?])?;
        }
        Command::Invariants { file } => {
            let mut t = Table::new(&[
                "index",
                "n",
                "size",
                "min_distance",
                "perfect",
                "extended_perfect",
                "rank",
                "kernel_size",
                "codeword_distribution",
                "noncodeword_distribution",
            ]);
            for (i, c) in read_codes(file)?.iter().enumerate() {
                let n = c.n();
                let first = Word::new(c.words()[0], n)?;
                let outside = (0..1u32 << n).find(|&x| !c.contains_bits(x));
                let outside = match outside {
                    Some(x) => counts(&c.distance_distribution(Word::new(x, n)?)?.counts),
                    None => Value::Null,
                };
                let dmin = if c.len() > 1 { json!(c.min_distance()?) } else { Value::Null };
                t.push(vec![
                    json!(i + 1),
                    json!(n),
                    json!(c.len()),
                    dmin,
                    json!(c.is_perfect()),
                    json!(c.is_extended_perfect()),
                    json!(rank(c)?),
                    json!(kernel(c)?.size()),
                    counts(&c.distance_distribution(first)?.counts),
                    outside,
                ]);
            }
            print(&t.render(fmt))?;
        }
        Command::Equiv { a, b, isomorphism } => {
            let (ca, cb) = (read_code(a)?, read_code(b)?);
            let same = if *isomorphism {
                are_isomorphic(&ca, &cb)?
            } else {
                are_equivalent(&ca, &cb)?
            };
            let mut t = Table::new(&["relation", "holds"]);
            t.push(vec![
                json!(if *isomorphism { "isomorphic" } else { "equivalent" }),
                json!(same),
            ]);
            print(&t.render(fmt))?;
            if !same {
                return Ok(Outcome::Negative);
            }
        }
        Command::Aut { file } => {
            let mut t = Table::new(&[
                "index",
                "aut_order",
                "sym_order",
                "codeword_orbits",
                "coordinate_orbits",
                "fixed_coordinates",
            ]);
            for (i, c) in read_codes(file)?.iter().enumerate() {
                let r = automorphism_group(c)?;
                t.push(vec![
                    json!(i + 1),
                    json!(r.order.to_string()),
                    json!(r.symmetry_order.to_string()),
                    json!(r.codeword_orbits()),
                    json!(orbit_notation(&r.coordinate_orbit_sizes)),
                    json!(r.fixed_coordinates),
                ]);
            }
            print(&t.render(fmt))?;
        }
        Command::Sts { file, labels } => {
            let c = read_code(file)?;
            let map = match labels {
                Some(p) => Some(parse_label_map(BufReader::new(std::fs::File::open(p)?))?),
                None => None,
            };
            let systems = all_sts(&c)?;
            let all_steiner = systems.iter().all(|d| d.is_steiner(2));
            let classes = design_isomorphism_classes(&systems)?;
            let mut t = Table::new(&["class", "label", "translates", "steiner", "homogeneous"]);
            for (k, members) in classes.iter().enumerate() {
                let digest = systems[members[0]].canonical_form().digest();
                let label = map
                    .as_ref()
                    .and_then(|m| m.get(&digest).cloned())
                    .unwrap_or(digest);
                t.push(vec![
                    json!(k + 1),
                    json!(label),
                    json!(members.len()),
                    json!(all_steiner),
                    json!(classes.len() == 1),
                ]);
            }
            print(&t.render(fmt))?;
        }
        Command::StSet { file } => {
            let c = read_code(file)?;
            let h = st_set(&c)?;
            let ind = maximum_independent_set(&h);
            let mut t = Table::new(&["st_size", "alpha", "independent_set"]);
            t.push(vec![json!(h.len()), json!(ind.len()), json!(ind)]);
            print(&t.render(fmt))?;
        }
        Command::Systematic { file } => {
            let c = read_code(file)?;
            let found = systematic_coordinates(&c)?;
            let mut t = Table::new(&["systematic", "coordinates"]);
            t.push(vec![
                json!(found.is_some()),
                found.as_ref().map_or(Value::Null, |v| json!(v)),
            ]);
            print(&t.render(fmt))?;
            if found.is_none() {
                return Ok(Outcome::Negative);
            }
        }
        Command::Components { file, coord, emit } => {
            let c = read_code(file)?;
            let p = minimal_i_components(&c, *coord)?;
            if *emit {
                emit_pcc(&p.components)?;
            } else {
                let mut t = Table::new(&["coord", "count", "sizes"]);
                t.push(vec![json!(coord), json!(p.components.len()), json!(p.size_notation())]);
                print(&t.render(fmt))?;
            }
        }
        Command::Switch {
            file,
            coord,
            component,
        } => {
            let c = read_code(file)?;
            let p = minimal_i_components(&c, *coord)?;
            let d = component
                .checked_sub(1)
                .and_then(|k| p.components.get(k))
                .ok_or_else(|| {
                    anyhow!(
                        "component {component} out of range 1..={}",
                        p.components.len()
                    )
                })?;
            emit_pcc(&[switch(&c, *coord, d)?])?;
        }
        Command::ClassBfs {
            file,
            resume,
            state,
            max_codes,
            max_depth,
        } => {
            return class_bfs(
                fmt,
                file,
                resume.as_deref(),
                state.as_deref().or(resume.as_deref()),
                *max_codes,
                *max_depth,
            );
        }
        Command::Clp { file } => {
            let mut t = Table::new(&["index", "profile"]);
            for (i, c) in read_codes(file)?.iter().enumerate() {
                t.push(vec![json!(i + 1), json!(clp(c)?.row())]);
            }
            print(&t.render(fmt))?;
        }
        Command::OaCheck { file } => {
            let mut negative = false;
            let mut t = Table::new(&[
                "index",
                "strength",
                "required",
                "lambda",
                "oa",
                "perfect",
                "agrees",
                "transform",
            ]);
            for (i, c) in read_codes(file)?.iter().enumerate() {
                let v = oa_perfect_correspondence(c)?;
                negative |= !v.agrees();
                t.push(vec![
                    json!(i + 1),
                    json!(v.strength),
                    json!(v.required_strength),
                    json!(v.lambda),
                    json!(v.oa_side),
                    json!(v.perfect_side),
                    json!(v.agrees()),
                    json!(v.transform.to_string()),
                ]);
            }
            print(&t.render(fmt))?;
            if negative {
                return Ok(Outcome::Negative);
            }
        }
        Command::Embed { sub, host, budget } => {
            let (a, c) = (read_code(sub)?, read_code(host)?);
            let res = embed_search(&a, &c, *budget)?;
            let mut t = Table::new(&["result", "coordinates", "translation"]);
            let outcome = match &res {
                EmbedOutcome::Found(e) => {
                    t.push(vec![
                        json!("found"),
                        json!(e.coords),
                        json!(perfect_codes::word::render_bits(e.translation, c.n())),
                    ]);
                    Outcome::Done
                }
                EmbedOutcome::NotFound => {
                    t.push(vec![json!("none"), Value::Null, Value::Null]);
                    Outcome::Negative
                }
                EmbedOutcome::BudgetExhausted => {
                    t.push(vec![json!("budget-exhausted"), Value::Null, Value::Null]);
                    Outcome::Negative
                }
            };
            print(&t.render(fmt))?;
            return Ok(outcome);
        }
        Command::EnumeratePerfect { n, count_only } => {
            let codes = enumerate_perfect_codes(*n)?;
            if *count_only {
                let mut t = Table::new(&["n", "codes", "through_zero"]);
                let zero = codes.iter().filter(|c| c.contains_bits(0)).count();
                t.push(vec![json!(n), json!(codes.len()), json!(zero)]);
                print(&t.render(fmt))?;
            } else {
                emit_pcc(&codes)?;
            }
        }
        Command::Mixed { action } => return mixed(fmt, action),
        Command::CatalogStats {
            file,
            table,
            labels,
            no_cache,
        } => {
            let table: perfect_codes::report::Table = table.parse()?;
            let mut cat = if *no_cache {
                Catalog::from_bytes(&std::fs::read(file).with_context(|| format!("reading {}", file.display()))?)?
            } else {
                Catalog::load(file)?
            };
            if table.uses_cache() {
                let computed = cat.ensure_invariants()?;
                if computed > 0 && !*no_cache {
                    cat.save_cache()?;
                }
            }
            let map = match labels {
                Some(p) => Some(parse_label_map(BufReader::new(std::fs::File::open(p)?))?),
                None => None,
            };
            let r = report(&cat, table, map.as_ref())?;
            match fmt {
                Format::Tsv => print(&r.to_tsv())?,
                Format::Json => print(&format!("{}\n", serde_json::to_string_pretty(&r.to_json())?))?,
            }
        }
    }
    Ok(Outcome::Done)
}

fn class_bfs(
    fmt: Format,
    file: &str,
    resume: Option<&Path>,
    state: Option<&Path>,
    max_codes: Option<usize>,
    max_depth: Option<usize>,
) -> Result<Outcome> {
    let seed = read_code(file)?;
    let previous = match resume {
        Some(p) => {
            let st = parse_run(BufReader::new(
                std::fs::File::open(p).with_context(|| format!("opening {}", p.display()))?,
            ))?;
            let comp = run_companion(p);
            let codes = parse_pcc(BufReader::new(
                std::fs::File::open(&comp).with_context(|| format!("opening {}", comp.display()))?,
            ))?;
            Some(SwitchingClassRun::resume(codes, &st.digests, st.expanded)?)
        }
        None => None,
    };
    let opts = BfsOptions {
        max_codes,
        max_depth,
        ..Default::default()
    };
    let mut save_err: Option<anyhow::Error> = None;
    let mut checkpoint = |r: &SwitchingClassRun| {
        eprintln!("classes {} expanded {}", r.len(), r.expanded);
        if let Some(p) = state {
            if let Err(e) = save_run(p, r) {
                save_err.get_or_insert(e);
            }
        }
    };
    let run = switching_class_bfs(&seed, &opts, previous, &mut checkpoint)?;
    if let Some(e) = save_err {
        return Err(e);
    }
    if let Some(p) = state {
        save_run(p, &run)?;
    }
    let mut t = Table::new(&["classes", "expanded", "complete", "max_codes_hit", "max_depth_hit"]);
    t.push(vec![
        json!(run.len()),
        json!(run.expanded),
        json!(run.is_complete()),
        json!(run.max_codes_hit),
        json!(run.max_depth_hit),
    ]);
    print(&t.render(fmt))?;
    Ok(Outcome::Done)
}

fn save_run(path: &Path, r: &SwitchingClassRun) -> Result<()> {
    let st = RunState {
        digests: r.digests.clone(),
        expanded: r.expanded,
    };
    // the companion goes first so a state file never names missing codes
    let comp = run_companion(path);
    let mut buf = Vec::new();
    write_pcc(&r.codes, &mut buf)?;
    std::fs::write(&comp, buf).with_context(|| format!("writing {}", comp.display()))?;
    let mut buf = Vec::new();
    perfect_codes::io::write_run(&st, &mut buf)?;
    std::fs::write(path, buf).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn mixed(fmt: Format, action: &MixedAction) -> Result<Outcome> {
    match action {
        MixedAction::Compress { file, t, emit } => {
            let c = read_code(file)?;
            let sets = disjoint_kernel_triples(&c, *t)?;
            if sets.is_empty() {
                bail!("no {t} disjoint weight-3 kernel words");
            }
            let codes: Vec<MixedCode> = sets
                .iter()
                .map(|s| quaternary_compress(&c, s))
                .collect::<perfect_codes::Result<_>>()?;
            if *emit {
                emit_mpc(&codes)?;
            } else {
                let mut tab = Table::new(&["class", "alphabet", "size", "aut_order", "compressions"]);
                for (k, cl) in mixed_classes(&codes)?.iter().enumerate() {
                    tab.push(vec![
                        json!(k + 1),
                        json!(cl.representative.alphabet().notation()),
                        json!(cl.representative.len()),
                        json!(cl.aut_order.to_string()),
                        json!(cl.multiplicity),
                    ]);
                }
                print(&tab.render(fmt))?;
            }
        }
        MixedAction::F8Enumerate { all, emit } => {
            let codes = if *all {
                f8_codes_from_all_partitions()?
            } else {
                f8_codes_from_partitions()?
            };
            let classes = mixed_classes(&codes)?;
            if *emit {
                let reps: Vec<MixedCode> = classes.iter().map(|c| c.representative.clone()).collect();
                emit_mpc(&reps)?;
            } else {
                let mut tab = Table::new(&["class", "aut_order", "partitions"]);
                for (k, cl) in classes.iter().enumerate() {
                    tab.push(vec![json!(k + 1), json!(cl.aut_order.to_string()), json!(cl.multiplicity)]);
                }
                print(&tab.render(fmt))?;
            }
        }
        MixedAction::Verify { file } => {
            let bytes = read_input(file)?;
            let codes = parse_mpc(&bytes[..])?;
            let mut tab = Table::new(&["index", "alphabet", "size", "perfect", "pair_constraint"]);
            let mut negative = false;
            for (i, m) in codes.iter().enumerate() {
                let ok = mixed_is_perfect(m);
                negative |= !ok;
                tab.push(vec![
                    json!(i + 1),
                    json!(m.alphabet().notation()),
                    json!(m.len()),
                    json!(ok),
                    json!(m.alphabet().satisfies_pair_constraint()),
                ]);
            }
            print(&tab.render(fmt))?;
            if negative {
                return Ok(Outcome::Negative);
            }
        }
    }
    Ok(Outcome::Done)
}
