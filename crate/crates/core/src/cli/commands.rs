//! The verbs behind the command line.

use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Value};

use super::catalog::CATALOG;
use super::report::{columns, complex, pair, set, Outcome, Report};
use super::CliError;
use crate::chartab::{check_orthogonality, C64};
use crate::group::{is_isomorphic, FiniteGroup};
use crate::narygroup::{
    check_associativity, check_dornte, check_unique_solvability, CheckMode, PolyadicGroup, Storage, ValidationPolicy,
};
use crate::polyrep::{
    lift_representation, min_pairwise_gap, orthogonality_report, restrict_representation, restricted_characters,
    sorted_value_vectors, value_set_distance, verify_nary_homomorphism, CoverCharacters, CoverRepresentation,
    PolyadicCharacter, PolyadicRepresentation, DEFAULT_KERNEL_CHOICES, ROUND_TRIP_TOL,
};
use crate::postcover::{
    anchor_independence, build_post_cover, cover_identity, derived_cover_structure, inverse_by_formula,
    verify_coset_theorem_with, PostCover,
};

/// Regular representations are only round-tripped on covers up to this order.
pub const REGULAR_ROUND_TRIP_MAX: usize = 64;
const CORRESPONDENCE_GAP: f64 = 1e-4;
const ANCHOR_INVARIANCE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub seed: u64,
    pub sample: Option<usize>,
}

impl Options {
    fn mode(&self, g: &PolyadicGroup) -> CheckMode {
        match self.sample {
            Some(count) => CheckMode::Sampled { count, seed: self.seed },
            None => ValidationPolicy::default().mode_for(g.arity(), g.order()),
        }
    }
}

fn c64_json(z: C64) -> Value {
    json!([z.re, z.im])
}

fn storage_text(g: &PolyadicGroup) -> String {
    match g.storage() {
        Storage::FullTable(_) => "full table".to_string(),
        Storage::BDerived { base, b } => format!("b-derived from {} with b = {b}", base.label()),
    }
}

fn header(report: &mut Report, g: &PolyadicGroup) {
    report.line(format!("group: {}", g.label()));
    report.line(format!("arity: {}", g.arity()));
    report.line(format!("order: {}", g.order()));
    report.line(format!("storage: {}", storage_text(g)));
    report.field("group", g.label());
    report.field("arity", g.arity());
    report.field("order", g.order());
}

/// Axioms and skew identities. Returns whether all passed.
fn axiom_checks(report: &mut Report, g: &PolyadicGroup, opts: &Options) -> bool {
    let mode = opts.mode(g);
    let solvability = check_unique_solvability(g, mode);
    report.axiom("unique-solvability", &solvability);
    let associativity = check_associativity(g, mode);
    report.axiom("associativity", &associativity);
    let dornte = check_dornte(g);
    report.axiom("skew-identities", &dornte);
    solvability.passed && associativity.passed && dornte.passed
}

fn check_anchor(g: &PolyadicGroup, anchor: usize) -> Result<(), CliError> {
    if anchor >= g.order() {
        return Err(CliError::Usage(format!("anchor {anchor} out of range for order {}", g.order())));
    }
    Ok(())
}

pub fn validate(g: &PolyadicGroup, opts: &Options) -> Outcome {
    let mut report = Report::new();
    header(&mut report, g);
    if axiom_checks(&mut report, g, opts) {
        if let Ok(skews) = g.skews() {
            let map: Vec<String> = skews.iter().enumerate().map(|(x, s)| format!("{x}->{s}")).collect();
            report.line(format!("skew: {}", map.join(" ")));
            report.field("skews", skews);
        }
        let identity = g.find_nary_identity();
        report.line(match identity {
            Some(e) => format!("n-ary identity: {e}"),
            None => "n-ary identity: none".to_string(),
        });
        report.field("nary_identity", identity);
    }
    report.finish()
}

pub fn cover(
    g: &PolyadicGroup,
    anchor: Option<usize>,
    all_anchors: bool,
    dump: Option<&Path>,
    opts: &Options,
) -> Result<Outcome, CliError> {
    let mut report = Report::new();
    header(&mut report, g);
    if !axiom_checks(&mut report, g, opts) {
        return Ok(report.finish());
    }
    let anchors: Vec<usize> = if all_anchors {
        (0..g.order()).collect()
    } else {
        let a = anchor.unwrap_or(0);
        check_anchor(g, a)?;
        vec![a]
    };
    let mut dumps = Vec::new();
    let mut summaries = Vec::new();
    for &a in &anchors {
        let pc = match build_post_cover(g, a) {
            Ok(pc) => pc,
            Err(e) => {
                report.fail(&format!("cover a={a}"), &e.to_string());
                continue;
            }
        };
        summaries.push(cover_section(&mut report, &pc, opts));
        dumps.push(cover_dump(&pc));
    }
    report.field("covers", summaries);
    if anchors.len() > 1 {
        let a0 = anchors[0];
        for &b in &anchors[1..] {
            match anchor_independence(g, a0, b) {
                Ok(Some(_)) => report.check(&format!("anchor-isomorphism {a0}~{b}"), true, "isomorphism found", &[], Value::Null),
                Ok(None) => report.fail(&format!("anchor-isomorphism {a0}~{b}"), "covers are not isomorphic"),
                Err(e) => report.fail(&format!("anchor-isomorphism {a0}~{b}"), &e.to_string()),
            }
        }
    }
    if let Storage::BDerived { base, b } = g.storage() {
        if *b == base.identity() && g.arity() >= 3 {
            let name = format!("derived-cover-structure {} x Z{}", base.label(), g.arity() - 1);
            match derived_cover_structure(base, g.arity()) {
                Ok(_) => report.check(&name, true, "(x,i) -> (x,i+1) is an isomorphism", &[], Value::Null),
                Err(e) => report.fail(&name, &e.to_string()),
            }
        }
    }
    if let Some(path) = dump {
        let doc = json!({ "group": g.label(), "arity": g.arity(), "covers": dumps });
        let text = serde_json::to_string_pretty(&doc).expect("dump serialises");
        std::fs::write(path, text + "\n").map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
        report.line(format!("dump: {}", path.display()));
    }
    Ok(report.finish())
}

fn cover_section(report: &mut Report, pc: &PostCover, opts: &Options) -> Value {
    let a = pc.anchor();
    let n = pc.arity();
    let cg = pc.group();
    report.line(format!("anchor {a} (skew {}):", pc.anchor_skew()));
    report.line(format!("  cover order: {}", pc.order()));
    let identity = cover_identity(pc).ok();
    if let Some(e) = identity {
        report.line(format!("  identity: {}", pair(e)));
    }
    let h: Vec<String> = pc.h().iter().map(|&u| pair(pc.pair(u))).collect();
    report.line(format!("  H: {{{}}}", h.join(", ")));
    let coset = verify_coset_theorem_with(pc, opts.mode(pc.base()));
    report.line(format!("  H index: {}", coset.h_index));
    let quotient = if coset.quotient_cyclic { format!("Z{}", pc.levels()) } else { "not cyclic".to_string() };
    report.line(format!("  quotient: {quotient}"));
    let shape = if cg.is_cyclic() {
        "cyclic"
    } else if cg.is_abelian() {
        "abelian"
    } else {
        "non-abelian"
    };
    let profile = cg.order_profile();
    let profile_text: Vec<String> = profile.iter().map(usize::to_string).collect();
    report.line(format!("  cover type: {shape}, exponent {}, element orders {}", cg.exponent(), profile_text.join(" ")));

    let detail = format!("index {}, {} tuples", coset.h_index, coset.tuples_checked);
    report.check(
        &format!("coset-theorem a={a}"),
        coset.passed(),
        &detail,
        &coset.witnesses,
        serde_json::to_value(&coset).expect("serialisable report"),
    );

    let mut bad = Vec::new();
    for u in 0..pc.order() {
        let (x, i) = pc.pair(u);
        let expected = pc.pair(cg.inverse(u));
        match inverse_by_formula(pc, x, i) {
            Ok(got) if got == expected => {}
            Ok(got) => bad.push(format!("{} -> {} but table gives {}", pair((x, i)), pair(got), pair(expected))),
            Err(e) => bad.push(format!("{}: {e}", pair((x, i)))),
        }
    }
    let agree = pc.order() - bad.len();
    report.check(
        &format!("inverse-formula a={a}"),
        bad.is_empty(),
        &format!("{agree}/{} elements agree", pc.order()),
        &bad,
        json!({ "agree": agree, "total": pc.order() }),
    );

    if n == 2 {
        report.line("  note: n = 2, the cover is isomorphic to the input group");
        let iso = g_binary(pc).and_then(|base| is_isomorphic(cg, &base).ok().flatten());
        report.check(&format!("binary-cover a={a}"), iso.is_some(), "isomorphism to the input group", &[], Value::Null);
    }
    json!({
        "anchor": a,
        "anchor_skew": pc.anchor_skew(),
        "order": pc.order(),
        "identity": identity,
        "h": pc.h().iter().map(|&u| pc.pair(u)).collect::<Vec<_>>(),
        "h_index": coset.h_index,
        "quotient_cyclic": coset.quotient_cyclic,
        "cyclic": cg.is_cyclic(),
        "abelian": cg.is_abelian(),
        "exponent": cg.exponent(),
        "order_profile": profile,
    })
}

fn g_binary(pc: &PostCover) -> Option<FiniteGroup> {
    pc.base().as_binary_group()
}

fn cover_dump(pc: &PostCover) -> Value {
    json!({
        "anchor": pc.anchor(),
        "order": pc.order(),
        "identity": cover_identity(pc).ok(),
        "elements": (0..pc.order()).map(|u| pc.pair(u)).collect::<Vec<_>>(),
        "table": pc.group().table(),
    })
}

fn characters_at(g: &PolyadicGroup, a: usize, seed: u64) -> Result<(Arc<CoverCharacters>, Vec<PolyadicCharacter>), String> {
    let context = Arc::new(CoverCharacters::new(g, a, seed).map_err(|e| e.to_string())?);
    let chars = restricted_characters(context.clone());
    Ok((context, chars))
}

pub fn chartab(g: &PolyadicGroup, anchor: usize, opts: &Options) -> Result<Outcome, CliError> {
    check_anchor(g, anchor)?;
    let mut report = Report::new();
    header(&mut report, g);
    if !axiom_checks(&mut report, g, opts) {
        return Ok(report.finish());
    }
    report.line(format!("anchor: {anchor}"));
    report.field("anchor", anchor);
    report.field("seed", opts.seed);
    let (context, chars) = match characters_at(g, anchor, opts.seed) {
        Ok(v) => v,
        Err(e) => {
            report.fail("character-table", &e);
            return Ok(report.finish());
        }
    };
    let pc = &context.cover;
    let t = &context.table;
    report.line(format!("cover order: {}", pc.order()));
    report.line(format!("classes: {}", t.classes.count()));

    let mut rows = vec![{
        let mut r = vec!["class".to_string()];
        r.extend(t.classes.representatives.iter().map(|&u| pair(pc.pair(u))));
        r
    }];
    rows.push({
        let mut r = vec!["size".to_string()];
        r.extend(t.classes.sizes.iter().map(usize::to_string));
        r
    });
    for (k, row) in t.values.iter().enumerate() {
        let mut r = vec![format!("chi{k}")];
        r.extend(row.iter().map(|&z| complex(z)));
        rows.push(r);
    }
    let degrees: Vec<String> = t.degrees.iter().map(usize::to_string).collect();
    report.line(format!("degrees: {}", degrees.join(" ")));
    report.line("character table of the cover:");
    for l in columns(&rows) {
        report.line(l);
    }

    report.line("polyadic characters (values at x = 0..m-1):");
    let mut rows = vec![{
        let mut r = vec!["".to_string(), "deg".to_string()];
        r.extend((0..g.order()).map(|x| x.to_string()));
        r.push("kernel".to_string());
        r
    }];
    for c in &chars {
        let mut r = vec![format!("chi{}", c.source), c.degree.to_string()];
        r.extend(c.values.iter().map(|&z| complex(z)));
        r.push(set(&c.kernel));
        rows.push(r);
    }
    for l in columns(&rows) {
        report.line(l);
    }

    let sum: usize = t.degrees.iter().map(|d| d * d).sum();
    report.check(
        "degree-sum",
        sum == pc.order(),
        &format!("sum of squares {sum}, cover order {}", pc.order()),
        &[],
        Value::Null,
    );
    let dev = check_orthogonality(t);
    report.check(
        "table-orthogonality",
        dev.row <= crate::chartab::ORTHOGONALITY_TOL && dev.column <= crate::chartab::ORTHOGONALITY_TOL,
        "",
        &[],
        json!({ "row": dev.row, "column": dev.column }),
    );
    report.field(
        "classes",
        t.classes
            .representatives
            .iter()
            .zip(&t.classes.sizes)
            .map(|(&u, &s)| json!({ "representative": pc.pair(u), "size": s }))
            .collect::<Vec<_>>(),
    );
    report.field("degrees", &t.degrees);
    report.field(
        "values",
        t.values.iter().map(|row| row.iter().map(|&z| c64_json(z)).collect::<Vec<_>>()).collect::<Vec<_>>(),
    );
    report.field("polyadic_characters", chars.iter().map(character_json).collect::<Vec<_>>());
    Ok(report.finish())
}

fn character_json(c: &PolyadicCharacter) -> Value {
    json!({
        "source": c.source,
        "degree": c.degree,
        "values": c.values.iter().map(|&z| c64_json(z)).collect::<Vec<_>>(),
        "kernel": c.kernel,
    })
}

pub fn verify_theorems(g: &PolyadicGroup, anchor: usize, opts: &Options) -> Result<Outcome, CliError> {
    check_anchor(g, anchor)?;
    let mut report = Report::new();
    header(&mut report, g);
    if !axiom_checks(&mut report, g, opts) {
        return Ok(report.finish());
    }
    report.line(format!("anchor: {anchor}"));
    report.line(format!("seed: {}", opts.seed));
    report.field("anchor", anchor);
    report.field("seed", opts.seed);
    let (context, chars) = match characters_at(g, anchor, opts.seed) {
        Ok(v) => v,
        Err(e) => {
            report.fail("character-table", &e);
            return Ok(report.finish());
        }
    };
    let pc = &context.cover;
    let n = g.arity();
    let target = (n - 1) * g.order();

    let degrees: Vec<usize> = chars.iter().map(|c| c.degree).collect();
    let sum: usize = degrees.iter().map(|d| d * d).sum();
    let all_divide = degrees.iter().all(|&d| target.is_multiple_of(d));
    report.check(
        "degree-sum",
        sum == target,
        &format!("sum of squares {sum}, (n-1)|G| = {} * {} = {target}", n - 1, g.order()),
        &[],
        json!({ "degrees": degrees, "sum_of_squares": sum, "target": target }),
    );
    let bad: Vec<String> = degrees.iter().filter(|&&d| !target.is_multiple_of(d)).map(|d| format!("{d} does not divide {target}")).collect();
    report.check("degree-divisibility", all_divide, &format!("every degree divides {target}"), &bad, Value::Null);

    let gap = min_pairwise_gap(&chars);
    let classes = context.table.classes.count();
    let gap_text = if gap.is_finite() { format!("{gap:.6}") } else { "none".to_string() };
    report.check(
        "correspondence",
        chars.len() == classes && gap > CORRESPONDENCE_GAP,
        &format!("{} characters, {classes} classes, min gap {gap_text}", chars.len()),
        &[],
        json!({ "characters": chars.len(), "classes": classes, "min_gap": if gap.is_finite() { Some(gap) } else { None } }),
    );

    orthogonality_section(&mut report, &chars, anchor);
    round_trip_section(&mut report, g, pc, &chars, anchor, opts);
    anchor_section(&mut report, g, anchor, &chars, opts);
    Ok(report.finish())
}

fn orthogonality_section(report: &mut Report, chars: &[PolyadicCharacter], anchor: usize) {
    let orth = match orthogonality_report(chars, anchor, DEFAULT_KERNEL_CHOICES) {
        Ok(o) => o,
        Err(e) => {
            report.fail("orthogonality", &e.to_string());
            return;
        }
    };
    let usable: Vec<usize> = chars.iter().filter(|c| !c.kernel.is_empty()).map(|c| c.source).collect();
    let inapplicable: Vec<String> = orth.inapplicable.iter().map(|s| format!("chi{s}")).collect();
    report.line(format!(
        "orthogonality: {} characters with kernels, inapplicable (empty kernel): {}",
        usable.len(),
        if inapplicable.is_empty() { "none".to_string() } else { inapplicable.join(" ") }
    ));
    if !usable.is_empty() {
        let mut rows = vec![{
            let mut r = vec!["".to_string()];
            r.extend(usable.iter().map(|s| format!("chi{s}")));
            r
        }];
        for &chi in &usable {
            let mut r = vec![format!("chi{chi}")];
            for &psi in &usable {
                let e = orth.entries.iter().find(|e| e.chi == chi && e.psi == psi).expect("entry per pair");
                r.push(complex(e.values[0]));
            }
            rows.push(r);
        }
        for l in columns(&rows) {
            report.line(l);
        }
    }
    let witnesses: Vec<String> = orth
        .entries
        .iter()
        .filter(|e| e.max_deviation > crate::polyrep::ORTHOGONALITY_TOL || e.choice_spread > crate::polyrep::CHOICE_SPREAD_TOL)
        .map(|e| format!("chi{} psi{}: deviation {:.3e}, spread {:.3e}", e.chi, e.psi, e.max_deviation, e.choice_spread))
        .collect();
    let choices: usize = orth.entries.iter().map(|e| e.choices.len()).sum();
    report.check(
        "orthogonality",
        orth.passed(),
        &format!(
            "{} pairs, {choices} kernel choices, max deviation {:.2e}, max choice spread {:.2e}",
            orth.entries.len(),
            orth.max_deviation,
            orth.max_choice_spread
        ),
        &witnesses,
        json!({
            "pairs": orth.entries.len(),
            "choices": choices,
            "inapplicable": orth.inapplicable,
            "max_deviation": orth.max_deviation,
            "max_choice_spread": orth.max_choice_spread,
        }),
    );
}

fn round_trip_section(
    report: &mut Report,
    g: &PolyadicGroup,
    pc: &PostCover,
    chars: &[PolyadicCharacter],
    anchor: usize,
    opts: &Options,
) {
    let mut failures = Vec::new();
    let mut linear = 0;
    let mut worst = 0.0f64;
    for c in chars.iter().filter(|c| c.degree == 1) {
        linear += 1;
        let outcome = PolyadicRepresentation::from_linear_character(c).map_err(|e| e.to_string()).and_then(|rep| {
            let hom = verify_nary_homomorphism(&rep, opts.mode(g));
            if !hom.passed {
                return Err(format!("{} violation(s)", hom.violations.len()));
            }
            let lifted = lift_representation(&rep, anchor).map_err(|e| e.to_string())?;
            let back = restrict_representation(&lifted).map_err(|e| e.to_string())?;
            Ok(crate::polyrep::representation_distance(&rep, &back))
        });
        match outcome {
            Ok(d) if d <= ROUND_TRIP_TOL => worst = worst.max(d),
            Ok(d) => failures.push(format!("chi{}: distance {d:.3e}", c.source)),
            Err(e) => failures.push(format!("chi{}: {e}", c.source)),
        }
    }
    report.check(
        "round-trip linear",
        failures.is_empty(),
        &format!("{linear} linear characters, max distance {worst:.2e}"),
        &failures,
        json!({ "linear": linear, "max_distance": worst }),
    );

    if pc.order() > REGULAR_ROUND_TRIP_MAX {
        report.line(format!("round-trip regular: skipped, cover order {} > {REGULAR_ROUND_TRIP_MAX}", pc.order()));
        return;
    }
    let gamma = CoverRepresentation::regular(pc.clone());
    let outcome = restrict_representation(&gamma).map_err(|e| e.to_string()).and_then(|rep| {
        let lifted = lift_representation(&rep, anchor).map_err(|e| e.to_string())?;
        Ok(lifted.distance(&gamma))
    });
    match outcome {
        Ok(d) => report.check(
            "round-trip regular",
            d <= ROUND_TRIP_TOL,
            &format!("dimension {}, distance {d:.2e}", gamma.dimension),
            &[],
            json!({ "dimension": gamma.dimension, "distance": d }),
        ),
        Err(e) => report.fail("round-trip regular", &e),
    }
}

fn anchor_section(report: &mut Report, g: &PolyadicGroup, anchor: usize, chars: &[PolyadicCharacter], opts: &Options) {
    let reference = sorted_value_vectors(chars);
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for b in (0..g.order()).filter(|&b| b != anchor) {
        match characters_at(g, b, opts.seed) {
            Ok((_, other)) => {
                let d = value_set_distance(&reference, &sorted_value_vectors(&other));
                if d > ANCHOR_INVARIANCE_TOL {
                    failures.push(format!("anchor {b}: distance {d:.3e}"));
                } else {
                    worst = worst.max(d);
                }
            }
            Err(e) => failures.push(format!("anchor {b}: {e}")),
        }
        match anchor_independence(g, anchor, b) {
            Ok(Some(_)) => {}
            Ok(None) => failures.push(format!("anchor {b}: covers not isomorphic")),
            Err(e) => failures.push(format!("anchor {b}: {e}")),
        }
    }
    report.check(
        "anchor-invariance",
        failures.is_empty(),
        &format!("{} anchors, max distance {worst:.2e}", g.order()),
        &failures,
        json!({ "anchors": g.order(), "max_distance": worst }),
    );
}

pub fn catalog() -> Outcome {
    let mut report = Report::new();
    let rows: Vec<Vec<String>> = CATALOG
        .iter()
        .map(|b| {
            let g = (b.build)();
            vec![b.name.to_string(), format!("n={}", g.arity()), format!("m={}", g.order()), b.description.to_string()]
        })
        .collect();
    let width = CATALOG.iter().map(|b| b.name.len()).max().unwrap_or(0);
    for r in &rows {
        report.line(format!("{:<width$}  {}  {:<5}  {}", r[0], r[1], r[2], r[3]));
    }
    report.field(
        "builtins",
        CATALOG
            .iter()
            .map(|b| {
                let g = (b.build)();
                json!({ "name": b.name, "arity": g.arity(), "order": g.order(), "description": b.description })
            })
            .collect::<Vec<_>>(),
    );
    report.finish()
}
