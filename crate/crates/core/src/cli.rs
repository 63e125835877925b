//! Command-line front end: each subcommand prints one JSON [`Report`] on
//! stdout and a short summary on stderr.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 for
//! unusable input (bad flags, malformed JSON, cap exceeded).

use std::collections::{BTreeMap, VecDeque};
use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::abdual::AbGroup;
use crate::catalog;
use crate::charorbit::{character_orbits, orbit_and_stabilizer, reconstruct_split_extension, DualAction};
use crate::error::{Error, Result};
use crate::findex::{core_quotient, low_index_subgroups, Presentation};
use crate::fingrp::{FiniteGroup, GroupJson, DEFAULT_CAP};
use crate::heisen::{char_orbit_data, h_level, heisenberg, ideals, reconstruct, FiniteRing};
use crate::lamptower::lamp_tower;
use crate::report::{Check, Report};
use crate::verify;
use crate::wreath::{abelianization_quotient, rf_map_verdict, separating_character, wreath_product, LampConfig, RfMapFlags};
use crate::IntMatrix;

#[derive(Parser, Debug)]
#[command(name = "profinite", version, about = "Finite truncations of profinite completions of group extensions")]
struct Cli {
    /// Spaces of JSON indentation; 0 prints compact JSON.
    #[arg(long, global = true, default_value_t = 2)]
    json_indent: usize,
    /// Largest group order for which a multiplication table is built.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Characters, double duality and annihilators of a finite abelian group.
    Dual {
        /// Cyclic orders, e.g. `2,4`.
        #[arg(long, value_delimiter = ',', required = true)]
        factors: Vec<u64>,
        /// Subgroup generators as `;`-separated coordinate vectors, e.g. `1,0;0,2`.
        /// Without it every subgroup is listed.
        #[arg(long)]
        subgroup: Option<String>,
    },
    /// Orbits and stabilizers of characters under an action.
    Orbit {
        /// `{"H": group, "N": {"factors": [...]}, "mats": {"h": [[...]]}}`, inline or `@path`.
        #[arg(long)]
        action: String,
    },
    /// Rebuild a catalog split extension from its character data.
    Reconstruct {
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(catalog::SPLIT_EXTENSIONS))]
        group: String,
    },
    /// Wreath product of two finite groups and its abelianized quotient.
    Wreath {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        top: String,
    },
    /// MAP and RF verdict for a wreath product from hypotheses on its factors.
    RfMap(FlagArgs),
    /// Periodic character separating a lamp configuration from zero.
    Separate {
        /// `{"support": [[k, value], ...], "n0": n}`, inline or `@path`.
        #[arg(long, alias = "f")]
        lamps: String,
    },
    /// Finite levels of the lamplighter tower and the maps between them.
    LampTower {
        #[arg(long)]
        n0: u64,
        #[arg(long)]
        max_m: usize,
        #[arg(long, value_enum, default_value_t = Emit::Levels)]
        emit: Emit,
    },
    /// Heisenberg group over a finite ring.
    Heisenberg {
        /// Ring moduli, e.g. `4` or `2x2`.
        #[arg(long)]
        ring: String,
        #[arg(long, value_enum, default_value_t = HeisReport::Orbits)]
        report: HeisReport,
    },
    /// Subgroups of small index of a finitely presented group.
    LowIndex {
        /// Generators, then relators: `a,b;abAB`.
        #[arg(long)]
        pres: String,
        #[arg(long = "max")]
        max_index: usize,
        /// Also build the quotient by the intersection of all subgroups of index at most this.
        #[arg(long)]
        core: Option<usize>,
    },
    /// Run the acceptance suite.
    VerifyAll,
}

#[derive(Args, Debug)]
struct FlagArgs {
    #[arg(long)]
    lambda_map: bool,
    #[arg(long)]
    lambda_rf: bool,
    #[arg(long)]
    lambda_abelian: bool,
    #[arg(long)]
    lambda_trivial: bool,
    #[arg(long)]
    h_finite: bool,
    #[arg(long)]
    h_rf: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Emit {
    Levels,
    Maps,
    Checks,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum HeisReport {
    Orbits,
    Levels,
    Recon,
}

/// Parses `args` (program name first), writes the report, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli.command, cli.cap) {
        Ok(report) => {
            let _ = writeln!(out, "{}", report.to_json(cli.json_indent));
            let _ = write!(err, "{}", report.summary());
            if report.passed() {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn read_arg(s: &str) -> Result<String> {
    match s.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}"))),
        None => Ok(s.to_string()),
    }
}

/// A catalog name or an inline `{"label", "order", "table"}` object.
fn group_ref(v: &Value, cap: usize) -> Result<FiniteGroup> {
    match v {
        Value::String(name) => catalog::by_name(name, cap),
        Value::Object(_) => FiniteGroup::from_json(&serde_json::from_value::<GroupJson>(v.clone())?),
        _ => Err(Error::Parse(format!("group reference {v} is neither a name nor a table"))),
    }
}

fn group_arg(s: &str, cap: usize) -> Result<FiniteGroup> {
    let text = read_arg(s)?;
    if text.trim_start().starts_with('{') {
        group_ref(&serde_json::from_str(&text)?, cap)
    } else {
        group_ref(&Value::String(text.trim().to_string()), cap)
    }
}

fn execute(cmd: &Command, cap: usize) -> Result<Report> {
    match cmd {
        Command::Dual { factors, subgroup } => dual(factors, subgroup.as_deref()),
        Command::Orbit { action } => orbit(action, cap),
        Command::Reconstruct { group } => reconstruct_cmd(group),
        Command::Wreath { lambda, top } => wreath(lambda, top, cap),
        Command::RfMap(flags) => rf_map(flags),
        Command::Separate { lamps } => separate(lamps),
        Command::LampTower { n0, max_m, emit } => lamp(*n0, *max_m, *emit, cap),
        Command::Heisenberg { ring, report } => heis(ring, *report, cap),
        Command::LowIndex { pres, max_index, core } => low_index(pres, *max_index, *core, cap),
        Command::VerifyAll => Ok(Report {
            command: "verify-all".into(),
            inputs: json!({ "cap": cap }),
            results: json!({}),
            checks: verify::all(cap),
        }),
    }
}

fn parse_vector(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad coordinate {t:?}"))))
        .collect()
}

fn dual(factors: &[u64], subgroup: Option<&str>) -> Result<Report> {
    let a = AbGroup::from_cyclic_orders(factors)?;
    let ev = a.evaluation_map()?;
    let mut distinct: Vec<usize> = ev.iter().map(|c| c.index()).collect();
    distinct.sort_unstable();
    distinct.dedup();
    let mut checks = vec![Check::new(
        "double-dual",
        distinct.len() == a.order(),
        format!("evaluation map hits {} of {} characters of the dual", distinct.len(), a.order()),
    )];
    let subs = match subgroup {
        Some(spec) => {
            let gens = spec
                .split(';')
                .map(|g| {
                    let v = parse_vector(g)?;
                    if v.len() != a.rank() {
                        return Err(Error::Parse(format!("generator {g:?} needs {} coordinates in {a}", a.rank())));
                    }
                    Ok(a.reduce(&v))
                })
                .collect::<Result<Vec<_>>>()?;
            vec![a.generate(&gens)?]
        }
        None => a.subgroups(),
    };
    let mut rows = Vec::new();
    let mut all_ok = true;
    for s in &subs {
        let ann = a.annihilator(s)?;
        all_ok &= s.len() * ann.len() == a.order();
        rows.push(json!({ "size": s.len(), "elements": s.elements(), "annihilator_size": ann.len(), "annihilator": ann.elements() }));
    }
    checks.push(Check::new("annihilator-sizes", all_ok, format!("|S|·|Ann S| = {} for {} subgroups", a.order(), subs.len())));
    Ok(Report {
        command: "dual".into(),
        inputs: json!({ "factors": factors }),
        results: json!({ "group": a.to_string(), "invariant_factors": a.factors(), "order": a.order(), "subgroups": rows }),
        checks,
    })
}

/// Matrices given on some elements of `H` are extended multiplicatively to all of it.
fn action_from_json(v: &Value, cap: usize) -> Result<DualAction> {
    let h = group_ref(v.get("H").ok_or_else(|| Error::Parse("action needs \"H\"".into()))?, cap)?;
    let factors: Vec<u64> = serde_json::from_value(
        v.pointer("/N/factors").cloned().ok_or_else(|| Error::Parse("action needs \"N\": {\"factors\"}".into()))?,
    )?;
    let n = AbGroup::new(factors)?;
    let given: BTreeMap<String, Vec<Vec<i64>>> =
        serde_json::from_value(v.get("mats").cloned().unwrap_or_else(|| json!({})))?;
    let mut mats: Vec<Option<IntMatrix>> = vec![None; h.order()];
    mats[h.identity()] = Some(IntMatrix::identity(n.rank()));
    let mut gens = Vec::new();
    for (key, rows) in &given {
        let idx: usize = key.parse().map_err(|_| Error::Parse(format!("bad element index {key:?}")))?;
        h.check_index(idx)?;
        let m = IntMatrix::from_rows(rows.clone());
        if m.rows() != n.rank() || m.cols() != n.rank() {
            return Err(Error::Parse(format!("matrix for {idx} must be {0}x{0}", n.rank())));
        }
        gens.push((idx, m.clone()));
        mats[idx] = Some(m);
    }
    let mut queue: VecDeque<usize> = (0..h.order()).filter(|&x| mats[x].is_some()).collect();
    while let Some(x) = queue.pop_front() {
        for (g, mg) in &gens {
            let y = h.mul(*g, x);
            if mats[y].is_none() {
                mats[y] = Some(mg * mats[x].as_ref().expect("visited"));
                queue.push_back(y);
            }
        }
    }
    let mats = mats
        .into_iter()
        .enumerate()
        .map(|(x, m)| m.ok_or_else(|| Error::Parse(format!("element {x} of H is not reached by the given matrices"))))
        .collect::<Result<Vec<_>>>()?;
    DualAction::new(&h, &n, mats)
}

fn orbit(action: &str, cap: usize) -> Result<Report> {
    let raw: Value = serde_json::from_str(&read_arg(action)?)?;
    let act = action_from_json(&raw, cap)?;
    let n = act.module();
    let h_order = act.acting_group().order();
    let orbits = character_orbits(&act);
    let mut rows = Vec::new();
    let mut os_ok = true;
    for orb in &orbits {
        let (o, stab) = orbit_and_stabilizer(&act, &orb[0])?;
        os_ok &= o.len() * stab.len() == h_order;
        rows.push(json!({
            "characters": orb.iter().map(|c| c.exps()).collect::<Vec<_>>(),
            "stabilizer": stab.elements(),
        }));
    }
    let covered: usize = orbits.iter().map(Vec::len).sum();
    let mut seen: Vec<usize> = orbits.iter().flatten().map(|c| c.index()).collect();
    seen.sort_unstable();
    seen.dedup();
    let checks = vec![
        Check::new("orbit-stabilizer", os_ok, format!("|orbit|·|stabilizer| = {h_order} on every orbit")),
        Check::new(
            "orbits-partition",
            covered == n.order() && seen.len() == n.order(),
            format!("{} orbits cover {covered} of {} characters", orbits.len(), n.order()),
        ),
    ];
    Ok(Report {
        command: "orbit".into(),
        inputs: raw,
        results: json!({ "H": act.acting_group().label(), "N": n.factors(), "orbits": rows }),
        checks,
    })
}

fn reconstruct_cmd(name: &str) -> Result<Report> {
    let ext = catalog::split_extension(name)?;
    let r = reconstruct_split_extension(&ext.group, &ext.normal, &ext.complement)?;
    let checks = vec![Check::new(
        "witness-isomorphism",
        r.witness.is_isomorphism(),
        format!("B ⋊ H → {name}, order {}", ext.group.order()),
    )];
    Ok(Report {
        command: "reconstruct".into(),
        inputs: json!({ "group": name }),
        results: json!({
            "order": ext.group.order(),
            "module": r.module.factors(),
            "normal": ext.normal.elements(),
            "complement": ext.complement.elements(),
            "witness": r.witness.images(),
        }),
        checks,
    })
}

fn wreath(lambda: &str, top: &str, cap: usize) -> Result<Report> {
    let (l, h) = (group_arg(lambda, cap)?, group_arg(top, cap)?);
    let w = wreath_product(&l, &h, cap)?;
    let (ab, q) = abelianization_quotient(&w, cap)?;
    let derived = l.derived_subgroup().len();
    let expected_kernel = derived.pow(h.order() as u32);
    let translation_ok = w.base.elements().iter().all(|&x| {
        let (f, _) = w.decode(x);
        h.elements().all(|a| w.carrier.conj(w.encode(&vec![0; h.order()], a), x) == w.encode(&w.shift(a, &f), 0))
    });
    let order = w.carrier.order();
    let checks = vec![
        Check::new("order", order == l.order().pow(h.order() as u32) * h.order(), format!("{order}")),
        Check::new("base-normal", w.base.is_normal(), format!("base of order {}", w.base.len())),
        Check::new("left-translation", translation_ok, "conjugation by the top group shifts coordinates"),
        Check::new(
            "abelianization-kernel",
            q.is_surjective() && q.kernel().len() == expected_kernel,
            format!("kernel order {} = {derived}^{}", q.kernel().len(), h.order()),
        ),
    ];
    Ok(Report {
        command: "wreath".into(),
        inputs: json!({ "lambda": lambda, "top": top }),
        results: json!({
            "order": order,
            "base_order": w.base.len(),
            "lambda_abelianization_order": ab.lambda.order(),
            "quotient_order": ab.carrier.order(),
            "kernel_order": q.kernel().len(),
        }),
        checks,
    })
}

fn rf_map(a: &FlagArgs) -> Result<Report> {
    let flags = RfMapFlags {
        lambda_map: a.lambda_map,
        lambda_rf: a.lambda_rf,
        lambda_abelian: a.lambda_abelian,
        lambda_trivial: a.lambda_trivial,
        h_finite: a.h_finite,
        h_rf: a.h_rf,
    };
    let v = rf_map_verdict(&flags)?;
    Ok(Report {
        command: "rf-map".into(),
        inputs: serde_json::to_value(flags)?,
        results: serde_json::to_value(v)?,
        checks: Vec::new(),
    })
}

fn separate(lamps: &str) -> Result<Report> {
    let text = read_arg(lamps)?;
    let f = LampConfig::from_json(&text)?;
    let s = separating_character(&f);
    let m = s.period as i64;
    let mut residues: Vec<i64> = f.support().keys().map(|k| k.rem_euclid(m)).collect();
    residues.sort_unstable();
    residues.dedup();
    let checks = vec![
        Check::new("distinct-residues", residues.len() == f.support().len(), format!("period {m}")),
        Check::new("nonzero-pairing", !s.value.is_zero() && f.pair_periodic(&s.phi) == s.value, format!("value {}", s.value)),
    ];
    Ok(Report {
        command: "separate".into(),
        inputs: serde_json::from_str(&text)?,
        results: serde_json::to_value(&s)?,
        checks,
    })
}

fn lamp(n0: u64, max_m: usize, emit: Emit, cap: usize) -> Result<Report> {
    let tower = lamp_tower(n0, max_m, cap)?;
    let mut checks = Vec::new();
    for (&m, level) in &tower.levels {
        let lamps = n0.pow(m as u32) as usize;
        checks.push(Check::new(
            format!("level-{m}"),
            level.group().order() == lamps * m && level.characters.order() == lamps,
            format!("order {}, {} characters", level.group().order(), level.characters.order()),
        ));
    }
    let mut maps = Vec::new();
    for (&(m1, m2), map) in &tower.maps {
        let hom = &map.group_proj;
        let kernel = hom.kernel().len();
        let expected = n0.pow(m1 as u32) as usize * m1 / (n0.pow(m2 as u32) as usize * m2);
        checks.push(Check::new(
            format!("map-{m1}-{m2}"),
            hom.is_surjective() && kernel == expected,
            format!("onto, kernel order {kernel}"),
        ));
        maps.push(json!({ "from": m1, "to": m2, "kernel_order": kernel }));
    }
    let coherence = tower.coherence_checks();
    checks.push(Check::new(
        "coherence",
        coherence.iter().all(|c| c.pass),
        format!("{} divisibility chains", coherence.len()),
    ));
    let mut results = json!({
        "n0": n0,
        "periods": tower.levels.keys().collect::<Vec<_>>(),
        "level_orders": tower.levels.values().map(|l| l.group().order()).collect::<Vec<_>>(),
        "skipped": tower.skipped,
    });
    match emit {
        Emit::Levels => {
            results["levels"] = tower
                .levels
                .iter()
                .map(|(m, l)| json!({ "m": m, "order": l.group().order(), "characters": l.characters.order() }))
                .collect();
        }
        Emit::Maps => results["maps"] = Value::Array(maps),
        Emit::Checks => results["coherence"] = serde_json::to_value(&coherence)?,
    }
    Ok(Report { command: "lamp-tower".into(), inputs: json!({ "n0": n0, "max_m": max_m, "cap": cap }), results, checks })
}

fn heis(ring: &str, report: HeisReport, cap: usize) -> Result<Report> {
    let r: FiniteRing = ring.parse()?;
    let h = heisenberg(&r, cap)?;
    let all = ideals(&r);
    let mut checks = vec![
        Check::new("order", h.group.order() == r.order().pow(3), format!("{}", h.group.order())),
        Check::new("center", h.group.center().len() >= r.order(), format!("center of order {}", h.group.center().len())),
    ];
    let mut results = json!({
        "ring": r.to_string(),
        "order": h.group.order(),
        "center_order": h.group.center().len(),
        "ideals": all.iter().map(|i| i.elements()).collect::<Vec<_>>(),
    });
    match report {
        HeisReport::Orbits => {
            let mut rows = Vec::new();
            let mut ok = true;
            for beta in 0..r.order() {
                for psi in 0..r.order() {
                    let d = char_orbit_data(&h, beta, psi);
                    ok &= d.consistent();
                    rows.push(serde_json::to_value(&d)?);
                }
            }
            checks.push(Check::new("orbit-formulas", ok, format!("{} character pairs", rows.len())));
            results["orbits"] = Value::Array(rows);
        }
        HeisReport::Levels => {
            let mut rows = Vec::new();
            let mut ok = true;
            for ideal in &all {
                let level = h_level(&h, ideal, cap)?;
                let kernel = level.kernel_triples();
                ok &= kernel == ideal.elements().iter().map(|&c| (0, 0, c)).collect::<Vec<_>>();
                rows.push(json!({ "ideal": ideal.elements(), "order": level.group.order(), "kernel_size": kernel.len() }));
            }
            checks.push(Check::new("level-kernels", ok, format!("{} ideals", all.len())));
            results["levels"] = Value::Array(rows);
        }
        HeisReport::Recon => {
            let rec = reconstruct(&h)?;
            checks.push(Check::new("reconstruction", rec.witness.is_isomorphism(), "B ⋊ H → H(R)"));
            results["reconstruction"] = json!({ "module": rec.module.factors(), "isomorphic": rec.witness.is_isomorphism() });
        }
    }
    Ok(Report { command: "heisenberg".into(), inputs: json!({ "ring": ring, "cap": cap }), results, checks })
}

fn low_index(pres: &str, max_index: usize, core: Option<usize>, cap: usize) -> Result<Report> {
    let p: Presentation = pres.parse()?;
    let recs = low_index_subgroups(&p, max_index)?;
    let counts: Vec<usize> = (1..=max_index).map(|k| recs.iter().filter(|r| r.index == k).count()).collect();
    let invalid = recs.iter().filter(|r| r.validate(&p).is_err() || !r.is_standard()).count();
    let mut checks = vec![Check::new("coset-tables", invalid == 0, format!("{} tables, {invalid} invalid", recs.len()))];
    let mut results = json!({ "presentation": p.to_string(), "counts": counts, "subgroups": recs });
    if let Some(n) = core {
        let q = core_quotient(&p, n, cap)?;
        checks.push(Check::new("core-quotient", true, format!("order {}", q.group.order())));
        results["core_quotient"] = json!({
            "index_bound": n,
            "order": q.group.order(),
            "abelian": q.group.is_abelian(),
            "generator_orders": q.generator_images.iter().map(|&g| q.group.element_order(g)).collect::<Vec<_>>(),
        });
    }
    Ok(Report { command: "low-index".into(), inputs: json!({ "pres": pres, "max": max_index }), results, checks })
}
