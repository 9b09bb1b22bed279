//! Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero if any fails.

use std::process::{Command, ExitCode, Output};

use polyadic::chartab::{character_table_seeded, check_orthogonality, table_distance, C64};
use polyadic::cli::catalog::{builtin, CATALOG};
use polyadic::group::{is_isomorphic, quotient_group, FiniteGroup};
use polyadic::narygroup::{check_associativity, check_dornte, check_unique_solvability, nary_from_table, Storage};
use polyadic::polyrep::{
    degree_theorem_check, irreducible_polyadic_characters, lift_representation, min_pairwise_gap, orthogonality_report,
    representation_distance, restrict_representation, sorted_value_vectors, value_set_distance,
    verify_nary_homomorphism, CoverRepresentation, Matrix, PolyadicRepresentation,
};
use polyadic::postcover::{derived_cover_structure, inverse_by_formula, verify_coset_theorem};
use polyadic::{build_post_cover, cyclic_group, symmetric_group, CheckMode, PolyadicGroup};

const SEEDS: [u64; 3] = [1, 0xdead_beef, 20_261_015];

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn corpus() -> Vec<PolyadicGroup> {
    CATALOG.iter().map(|b| (b.build)()).collect()
}

fn named(name: &str) -> PolyadicGroup {
    (builtin(name).expect("catalog entry").build)()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn axioms() -> Verdict {
    let mut groups = 0;
    for g in corpus().iter().filter(|g| matches!(g.storage(), Storage::BDerived { .. })) {
        let a = check_associativity(g, CheckMode::Full);
        let s = check_unique_solvability(g, CheckMode::Full);
        ensure(a.passed && a.violations.is_empty(), || format!("{}: associativity {:?}", g.label(), a.violations.first()))?;
        ensure(s.passed && s.violations.is_empty(), || format!("{}: solvability {:?}", g.label(), s.violations.first()))?;
        groups += 1;
    }
    let (mut detected, mut total) = (0, 0);
    for name in ["der3_b1_z2", "der3_z2"] {
        let g = named(name);
        let table = g.to_table();
        for idx in 0..table.len() {
            for v in (0..g.order()).filter(|&v| v != table[idx]) {
                let mut corrupt = table.clone();
                corrupt[idx] = v;
                total += 1;
                detected += usize::from(nary_from_table(g.arity(), g.order(), corrupt, "mutant").is_err());
            }
        }
    }
    ensure(detected == total, || format!("mutations detected {detected}/{total}"))?;
    Ok(format!("{groups} b-derived groups, full mode, 0 violations; mutations detected {detected}/{total}"))
}

fn skew_identities() -> Verdict {
    let mut checked = 0;
    for g in corpus() {
        let r = check_dornte(&g);
        ensure(r.passed, || format!("{}: {:?}", g.label(), r.violations.first()))?;
        checked += r.checked_count;
    }
    Ok(format!("{} groups, {checked} instances", CATALOG.len()))
}

fn coset_theorem() -> Verdict {
    let mut covers = 0;
    for g in corpus() {
        let s = g.arity() - 1;
        for a in 0..g.order() {
            let pc = build_post_cover(&g, a).map_err(|e| format!("{} a={a}: {e}", g.label()))?;
            let r = verify_coset_theorem(&pc);
            ensure(r.passed(), || format!("{} a={a}: {:?}", g.label(), r))?;
            ensure(r.h_index == s, || format!("{} a={a}: index {}", g.label(), r.h_index))?;
            let (q, _) = quotient_group(pc.group(), pc.h()).map_err(|e| e.to_string())?;
            let iso = is_isomorphic(&q, &cyclic_group(s)).map_err(|e| e.to_string())?;
            ensure(iso.is_some(), || format!("{} a={a}: quotient not Z{s}", g.label()))?;
            covers += 1;
        }
    }
    Ok(format!("{covers} covers, index n-1, quotient isomorphic to Z(n-1)"))
}

/// `G` sits in `Z4` as the odd residues via `x -> 2x + 1`, so `(x, i)`, the
/// formal product `x a^i`, maps to `2x + 1 + i(2a + 1)`.
fn z4_image(x: usize, i: usize, a: usize) -> usize {
    (2 * x + 1 + i * (2 * a + 1)) % 4
}

fn ternary_z2_cover() -> Verdict {
    let g = named("der3_b1_z2");
    for a in 0..2 {
        let pc = build_post_cover(&g, a).map_err(|e| e.to_string())?;
        let cg = pc.group();
        let mut profile = cg.order_profile();
        profile.sort();
        ensure(cg.order() == 4 && cg.is_cyclic() && profile == [1, 2, 4, 4], || format!("a={a}: profile {profile:?}"))?;
        let image: Vec<usize> = (0..4).map(|u| {
            let (x, i) = pc.pair(u);
            z4_image(x, i, a)
        }).collect();
        for u in 0..4 {
            for v in 0..4 {
                let expected = (image[u] + image[v]) % 4;
                ensure(image[cg.mul(u, v)] == expected, || {
                    format!("a={a}: {:?}*{:?} -> {:?}", pc.pair(u), pc.pair(v), pc.pair(cg.mul(u, v)))
                })?;
            }
        }
    }
    Ok("cyclic of order 4, profile [1, 2, 4, 4], products match the Z4 oracle at both anchors".into())
}

fn derived_covers() -> Verdict {
    let bases: Vec<FiniteGroup> =
        vec![cyclic_group(1), cyclic_group(2), cyclic_group(4), symmetric_group(3).map_err(|e| e.to_string())?];
    let mut count = 0;
    for base in &bases {
        for n in [3, 4] {
            let hom = derived_cover_structure(base, n).map_err(|e| format!("{} n={n}: {e}", base.label()))?;
            ensure(hom.bijective, || format!("{} n={n}: not bijective", base.label()))?;
            count += 1;
        }
    }
    Ok(format!("{count} (A, n) cases, explicit map is a bijective homomorphism"))
}

fn inverse_formula() -> Verdict {
    let (mut agree, mut total) = (0, 0);
    for g in corpus() {
        for a in 0..g.order() {
            let pc = build_post_cover(&g, a).map_err(|e| e.to_string())?;
            for u in 0..pc.order() {
                let (x, i) = pc.pair(u);
                total += 1;
                if inverse_by_formula(&pc, x, i).ok() == Some(pc.pair(pc.group().inverse(u))) {
                    agree += 1;
                }
            }
        }
    }
    ensure(agree == total, || format!("{agree}/{total} agree"))?;
    Ok(format!("{agree}/{total} cover elements agree with the table inverse"))
}

fn character_engine() -> Verdict {
    let (mut worst_orth, mut worst_seed) = (0.0f64, 0.0f64);
    let mut covers = 0;
    for g in corpus() {
        for a in 0..g.order() {
            let pc = build_post_cover(&g, a).map_err(|e| e.to_string())?;
            let tables = SEEDS
                .iter()
                .map(|&s| character_table_seeded(pc.group(), s))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| e.to_string())?;
            for t in &tables {
                let sum: usize = t.degrees.iter().map(|d| d * d).sum();
                ensure(sum == pc.order(), || format!("{} a={a}: sum {sum} != {}", g.label(), pc.order()))?;
                let dev = check_orthogonality(t);
                worst_orth = worst_orth.max(dev.row).max(dev.column);
                worst_seed = worst_seed.max(table_distance(&tables[0], t));
            }
            covers += 1;
        }
    }
    ensure(worst_orth <= 1e-8, || format!("orthogonality deviation {worst_orth:e}"))?;
    ensure(worst_seed <= 1e-8, || format!("seed dependence {worst_seed:e}"))?;
    Ok(format!("{covers} covers x {} seeds, orthogonality {worst_orth:.1e}, seed spread {worst_seed:.1e}", SEEDS.len()))
}

fn correspondence() -> Verdict {
    let (mut gap, mut spread) = (f64::INFINITY, 0.0f64);
    for g in corpus() {
        let reference = irreducible_polyadic_characters(&g, 0, SEEDS[0]).map_err(|e| e.to_string())?;
        let sorted = sorted_value_vectors(&reference);
        for a in 0..g.order() {
            let chars = irreducible_polyadic_characters(&g, a, SEEDS[1]).map_err(|e| e.to_string())?;
            if chars.len() > 1 {
                gap = gap.min(min_pairwise_gap(&chars));
            }
            spread = spread.max(value_set_distance(&sorted, &sorted_value_vectors(&chars)));
        }
    }
    ensure(gap > 1e-4, || format!("min gap {gap:e}"))?;
    ensure(spread <= 1e-8, || format!("anchor spread {spread:e}"))?;
    Ok(format!("min pairwise gap {gap:.3}, anchor spread {spread:.1e}"))
}

fn degree_theorem() -> Verdict {
    let mut seen = Vec::new();
    for g in corpus() {
        let target = (g.arity() - 1) * g.order();
        for a in 0..g.order() {
            let r = degree_theorem_check(&g, a).map_err(|e| e.to_string())?;
            ensure(r.passed && r.sum_of_squares == target && r.all_divide, || format!("{} a={a}: {r:?}", g.label()))?;
            ensure(r.degrees.iter().all(|&d| target % d == 0), || format!("{} a={a}: {:?}", g.label(), r.degrees))?;
        }
        seen.push(format!("{}={}", g.label(), target));
    }
    for (name, expected) in [("der3_b1_z2", 4), ("der3_s3", 12), ("der4_z3", 9)] {
        let g = named(name);
        let r = degree_theorem_check(&g, 0).map_err(|e| e.to_string())?;
        ensure(r.sum_of_squares == expected, || format!("{name}: {}", r.sum_of_squares))?;
    }
    Ok(format!("sum d^2 = (n-1)|G| on {} groups", seen.len()))
}

fn orthogonality() -> Verdict {
    let (mut pairs, mut dev, mut spread) = (0, 0.0f64, 0.0f64);
    for g in corpus() {
        for a in 0..g.order() {
            let chars = irreducible_polyadic_characters(&g, a, SEEDS[0]).map_err(|e| e.to_string())?;
            let r = orthogonality_report(&chars, a, 4).map_err(|e| e.to_string())?;
            ensure(r.passed(), || format!("{} a={a}: dev {:e} spread {:e}", g.label(), r.max_deviation, r.max_choice_spread))?;
            pairs += r.entries.len();
            dev = dev.max(r.max_deviation);
            spread = spread.max(r.max_choice_spread);
        }
    }
    ensure(dev <= 1e-6 && spread <= 1e-8, || format!("dev {dev:e} spread {spread:e}"))?;
    Ok(format!("{pairs} character pairs, max deviation {dev:.1e}, choice spread {spread:.1e}"))
}

fn linear_representations(g: &PolyadicGroup) -> Result<Vec<PolyadicRepresentation>, String> {
    let chars = irreducible_polyadic_characters(g, 0, SEEDS[0]).map_err(|e| e.to_string())?;
    chars
        .iter()
        .filter(|c| c.degree == 1)
        .map(|c| PolyadicRepresentation::from_linear_character(c).map_err(|e| e.to_string()))
        .collect()
}

/// `I + U` with `U` strictly upper triangular: invertible with determinant 1.
fn change_of_basis(d: usize) -> Matrix {
    Matrix::from_fn(d, d, |r, c| match r.cmp(&c) {
        std::cmp::Ordering::Equal => C64::new(1.0, 0.0),
        std::cmp::Ordering::Less => C64::new(0.25 * ((r + 2 * c) % 3) as f64, 0.125 * ((r * c) % 2) as f64),
        std::cmp::Ordering::Greater => C64::new(0.0, 0.0),
    })
}

fn round_trips() -> Verdict {
    let g = named("der3_b1_z2");
    let reps = linear_representations(&g)?;
    let mut worst = 0.0f64;
    for rep in &reps {
        for a in 0..g.order() {
            let lifted = lift_representation(rep, a).map_err(|e| e.to_string())?;
            let back = restrict_representation(&lifted).map_err(|e| e.to_string())?;
            worst = worst.max(representation_distance(rep, &back));
        }
    }
    let h = named("der3_z2");
    let mut regular_cases = 0;
    for a in 0..h.order() {
        let pc = build_post_cover(&h, a).map_err(|e| e.to_string())?;
        let regular = CoverRepresentation::regular(pc.clone());
        let p = change_of_basis(regular.dimension);
        let p_inv = p.clone().try_inverse().ok_or("singular change of basis")?;
        let conjugated =
            CoverRepresentation::new(pc, regular.matrices.iter().map(|m| &p * m * &p_inv).collect()).map_err(|e| e.to_string())?;
        for gamma in [regular, conjugated] {
            let restricted = restrict_representation(&gamma).map_err(|e| e.to_string())?;
            let again = lift_representation(&restricted, a).map_err(|e| e.to_string())?;
            worst = worst.max(again.distance(&gamma));
            regular_cases += 1;
        }
    }
    ensure(worst <= 1e-10, || format!("distance {worst:e}"))?;
    Ok(format!("{} linear reps x 2 anchors, {regular_cases} regular-derived reps, max distance {worst:.1e}", reps.len()))
}

fn skew_power() -> Verdict {
    let mut reps = Vec::new();
    for g in corpus() {
        reps.extend(linear_representations(&g)?);
        for a in 0..g.order() {
            let pc = build_post_cover(&g, a).map_err(|e| e.to_string())?;
            reps.push(restrict_representation(&CoverRepresentation::regular(pc)).map_err(|e| e.to_string())?);
        }
    }
    let mut worst = 0.0f64;
    for rep in &reps {
        let g = &rep.group;
        let r = verify_nary_homomorphism(rep, CheckMode::Full);
        ensure(r.passed, || format!("{}: {:?}", g.label(), r.violations.first()))?;
        let n = g.arity();
        for a in 0..g.order() {
            let skew = g.skew(a).map_err(|e| e.to_string())?;
            let power = (0..n - 2).fold(Matrix::identity(rep.dimension, rep.dimension), |acc, _| acc * rep.matrix(a));
            let product = power * rep.matrix(skew);
            let identity = Matrix::identity(rep.dimension, rep.dimension);
            worst = worst.max((product - identity).iter().map(|z| z.norm()).fold(0.0, f64::max));
        }
    }
    ensure(worst <= 1e-10, || format!("deviation {worst:e}"))?;
    Ok(format!("{} representations, every a, max deviation {worst:.1e}", reps.len()))
}

fn run_cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyadic")).args(args).output().expect("binary runs")
}

fn cli_determinism() -> Verdict {
    let mut runs = 0;
    let mut invocations: Vec<Vec<String>> = vec![vec!["catalog".into()]];
    for b in CATALOG {
        for verb in [&["validate"][..], &["cover", "--all-anchors"], &["chartab"], &["verify-theorems"]] {
            let mut args: Vec<String> = verb.iter().map(|s| s.to_string()).collect();
            args.extend(["--builtin".into(), b.name.into(), "--seed".into(), "42".into()]);
            invocations.push(args);
        }
    }
    for args in &invocations {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let first = run_cli(&args);
        let second = run_cli(&args);
        ensure(first.stdout == second.stdout, || format!("{args:?}: output differs"))?;
        ensure(first.status.code() == Some(0), || format!("{args:?}: exit {:?}", first.status.code()))?;
        runs += 1;
    }
    let dir = std::env::temp_dir().join(format!("polyadic-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let corrupt = dir.join("corrupt.json");
    let malformed = dir.join("malformed.json");
    let mut table = named("der3_b1_z2").to_table();
    table[5] ^= 1;
    std::fs::write(&corrupt, serde_json::json!({"kind": "nary_table", "arity": 3, "order": 2, "table": table}).to_string())
        .map_err(|e| e.to_string())?;
    std::fs::write(&malformed, "{\"kind\": \"cayley\", \"order\": ").map_err(|e| e.to_string())?;
    let fixtures = [
        (vec!["validate", "--builtin", "der3_b1_z2"], 0),
        (vec!["validate", corrupt.to_str().unwrap()], 1),
        (vec!["validate", malformed.to_str().unwrap()], 2),
    ];
    for (args, expected) in &fixtures {
        let code = run_cli(args).status.code();
        ensure(code == Some(*expected), || format!("{args:?}: exit {code:?}, expected {expected}"))?;
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!("{runs} commands byte-identical across two runs; exit codes 0/1/2 on fixtures"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("axioms and mutation detection", axioms),
        ("skew identities", skew_identities),
        ("coset theorem", coset_theorem),
        ("ternary Z2 cover structure", ternary_z2_cover),
        ("derived cover structure", derived_covers),
        ("inverse formula", inverse_formula),
        ("character engine", character_engine),
        ("correspondence", correspondence),
        ("degree theorem", degree_theorem),
        ("orthogonality theorem", orthogonality),
        ("representation round trips", round_trips),
        ("skew image power", skew_power),
        ("CLI determinism and exit codes", cli_determinism),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
