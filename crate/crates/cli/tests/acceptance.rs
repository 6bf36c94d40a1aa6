//! Acceptance criteria 1-9. Runs every criterion, prints one line each and
//! exits non-zero if any fails.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use dglp::atiyah::{atiyah_cocycle, class_equal, leibniz_on_cohomology};
use dglp::cochain::{d_ce, d_internal, d_tot, total_degree_range, Cochain, CochainBasis, Key};
use dglp::cohomology::total_cohomology;
use dglp::exterior::Wedge;
use dglp::kapranov::Kapranov;
use dglp::lie::{adjoint_action, LieAlgebra};
use dglp::lie_pair::{builtin_sl2, splitting_homotopy, LiePair};
use dglp::linalg::{kernel, parse_scalar, solve_matrix, ComplementRule, Matrix, Scalar};
use dglp::lp::{
    abelian_extension_equiv, from_invariant_pairing, killing_form, lift_lp, lp_homotopic, LPModule,
    OrdinaryLP,
};
use dglp::module::DgGModule;
use dglp::random::{
    random_alpha2, random_degree2_module, random_lie_algebra, random_module, random_ordinary_lp,
    random_resolution, random_solvable_pair, random_splitting, rng,
};
use dglp_cli::commands::{self, Options, Source};
use dglp_cli::problem::Problem;
use num_traits::Zero;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn sl2_pair() -> LiePair {
    builtin_sl2().0
}

fn sl2_pair_alt() -> LiePair {
    sl2_pair()
        .with_splitting(&Matrix::from_ints(&[&[1], &[0], &[1]]))
        .unwrap()
}

fn killing() -> LPModule {
    let sl2 = LieAlgebra::sl2();
    from_invariant_pairing(&sl2, &killing_form(&sl2)).unwrap()
}

fn lift_fixture() -> LPModule {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/lift_nonabelian2.json");
    let out = commands::lift(&Source::File(path), &Options::default())
        .output
        .unwrap();
    Problem::from_file(&out).unwrap().lp.unwrap()
}

fn random_lift(seed: u64, rule: ComplementRule) -> (OrdinaryLP, DgGModule, Matrix, LPModule) {
    let mut r = rng(seed);
    let lie = random_lie_algebra(&mut r, 3);
    let ord = random_ordinary_lp(&mut r, &lie);
    let (v, iso) = random_resolution(&mut r, &ord);
    let lp = lift_lp(&ord, &v, &iso, rule).unwrap();
    (ord, v, iso, lp)
}

/// Desk-scale random lifts: seeds whose resolution has at most 8 basis
/// vectors, taken in order before any check runs.
fn random_lifts(count: usize) -> Vec<(u64, LPModule)> {
    (0..)
        .map(|s| (s, random_lift(s, ComplementRule::Pivot).3))
        .filter(|(_, lp)| lp.module().total_dim() <= 8)
        .take(count)
        .collect()
}

fn random_pairs(count: u64) -> Vec<(LiePair, LiePair)> {
    (0..count)
        .map(|s| {
            let mut r = rng(1000 + s);
            let p = random_solvable_pair(&mut r);
            (random_splitting(&mut r, &p), random_splitting(&mut r, &p))
        })
        .collect()
}

/// Genuine dg LP fixtures: the sl2 pair with both splittings, the lift
/// fixture, random lifts and random Lie pairs.
fn lp_fixtures() -> Vec<(String, LPModule)> {
    let mut out = vec![
        ("sl2 pair".to_string(), sl2_pair().lp_module()),
        (
            "sl2 pair, second splitting".to_string(),
            sl2_pair_alt().lp_module(),
        ),
        ("lift fixture".to_string(), lift_fixture()),
    ];
    for (s, lp) in random_lifts(6) {
        out.push((format!("random lift {s}"), lp));
    }
    for (i, (p, _)) in random_pairs(4).into_iter().enumerate() {
        out.push((format!("random pair {i}"), p.lp_module()));
    }
    out
}

fn all_fixtures() -> Vec<(String, LPModule)> {
    let mut v = lp_fixtures();
    v.insert(1, ("sl2 Killing example".to_string(), killing()));
    v
}

/// `"2 e^∨⊗e - h + b"` as a map from term to coefficient.
fn terms(expr: &str) -> BTreeMap<String, Scalar> {
    let mut out = BTreeMap::new();
    let expr = expr.trim();
    if expr == "0" {
        return out;
    }
    let expr = expr.replace(" - ", " + -");
    for t in expr.split(" + ") {
        let (neg, t) = t.strip_prefix('-').map_or((false, t), |r| (true, r));
        let (c, body) = match t.split_once(' ') {
            Some((c, b)) if parse_scalar(c).is_some() => (parse_scalar(c).unwrap(), b),
            _ => (Scalar::from_integer(1.into()), t),
        };
        out.insert(body.to_string(), if neg { -c } else { c });
    }
    out
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_dglp"))
        .args(["brackets", "--builtin", "sl2-pair", "--max-arity", "4"])
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    let mut sections: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
    let mut current = String::new();
    for line in text.lines() {
        if let Some(t) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            current = t.to_string();
        } else if let Some((l, v)) = line.split_once(" = ") {
            sections
                .entry(current.clone())
                .or_default()
                .insert(l.to_string(), v.to_string());
        }
    }
    let get = |s: &str, l: &str| {
        sections
            .get(s)
            .and_then(|m| m.get(l))
            .cloned()
            .unwrap_or_else(|| "0".into())
    };
    let expected_d = [
        ("d_tot on forms", "d(h^∨)", "0"),
        ("d_tot on forms", "d(e^∨)", "-2 h^∨∧e^∨"),
        ("R1", "R1(h)", "-2 e^∨⊗e"),
        ("R1", "R1(e)", "2 h^∨⊗e"),
        ("R1", "R1(f)", "-2 h^∨⊗f + e^∨⊗h + b"),
        ("R1", "R1(b)", "-2 h^∨⊗b"),
    ];
    let expected_r2 = [
        ("h, e", "-2 e"),
        ("h, f", "2 f"),
        ("e, f", "-h"),
        ("f, e", "0"),
        ("h, b", "2 b"),
        ("e, b", "0"),
        ("b, h", "0"),
        ("b, e", "-2 e^∨⊗e"),
        ("b, f", "2 e^∨⊗f"),
        ("b, b", "2 e^∨⊗b"),
    ];
    let expected_r3 = [("e, b, e", "2 e"), ("e, b, f", "-2 f")];
    let mut bad = Vec::new();
    for (s, l, v) in expected_d {
        if terms(&get(s, l)) != terms(v) {
            bad.push(format!("{l} = {} (expected {v})", get(s, l)));
        }
    }
    for (args, v) in expected_r2 {
        let l = format!("R2({args})");
        if terms(&get("R2", &l)) != terms(v) {
            bad.push(format!("{l} = {} (expected {v})", get("R2", &l)));
        }
    }
    for (args, v) in expected_r3 {
        let l = format!("R3({args})");
        if terms(&get("R3", &l)) != terms(v) {
            bad.push(format!("{l} = {} (expected {v})", get("R3", &l)));
        }
    }
    for (l, v) in sections.get("R3").into_iter().flatten() {
        if !expected_r3.iter().any(|(a, _)| *l == format!("R3({a})")) {
            bad.push(format!("{l} = {v} (expected 0)"));
        }
    }
    if let Some(r4) = sections.get("R4").filter(|m| !m.is_empty()) {
        bad.push(format!("R4 has {} nonzero entries", r4.len()));
    }
    if !out.status.success() {
        bad.push(format!("exit status {}", out.status));
    }
    if elapsed.as_secs_f64() >= 1.0 {
        bad.push(format!("took {elapsed:?}"));
    }
    if bad.is_empty() {
        Ok(format!(
            "6 differentials, 10 R2, R3, R4 match in {elapsed:.2?}"
        ))
    } else {
        Err(bad.join("; "))
    }
}

fn check_complex(v: &DgGModule) -> Result<usize, String> {
    let mut n_checked = 0;
    for n in total_degree_range(v) {
        let basis = CochainBasis::new(v, n);
        for i in 0..basis.len() {
            let c = basis.element(i);
            let ce = d_ce(v, &c);
            let int = d_internal(v, &c);
            if !d_ce(v, &ce).is_zero() {
                return Err(format!("d_ce^2 != 0 in total degree {n}"));
            }
            if !d_internal(v, &int).is_zero() {
                return Err(format!("d_internal^2 != 0 in total degree {n}"));
            }
            if !d_ce(v, &int).add(&d_internal(v, &ce)).is_zero() {
                return Err(format!(
                    "d_ce and d_internal do not anticommute in total degree {n}"
                ));
            }
            if !d_tot(v, &d_tot(v, &c)).is_zero() {
                return Err(format!("d_tot^2 != 0 in total degree {n}"));
            }
            n_checked += 1;
        }
    }
    Ok(n_checked)
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut modules = vec![
        ("sl2 pair module".to_string(), sl2_pair().module()),
        ("sl2 Killing module".to_string(), killing().module().clone()),
    ];
    let mut dims = [0usize; 4];
    for s in 0..24 {
        let mut r = rng(200 + s);
        let lie = random_lie_algebra(&mut r, 3);
        dims[lie.dim()] += 1;
        modules.push((format!("random module {s}"), random_module(&mut r, &lie)));
    }
    let mut total = 0;
    for (name, v) in &modules {
        total += check_complex(v).map_err(|e| format!("{name}: {e}"))?;
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs() >= 10 {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!(
        "{} modules (random over dims 1/2/3: {}/{}/{}), {total} basis cochains, {elapsed:.2?}",
        modules.len(),
        dims[1],
        dims[2],
        dims[3]
    ))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut fixtures = vec![
        ("sl2 pair".to_string(), sl2_pair().lp_module()),
        ("sl2 Killing example".to_string(), killing()),
    ];
    for (s, lp) in random_lifts(6) {
        fixtures.push((format!("random lift {s}"), lp));
    }
    for (i, (p, _)) in random_pairs(4).into_iter().enumerate() {
        fixtures.push((format!("random pair {i}"), p.lp_module()));
    }
    let mut bad = Vec::new();
    for (seed, (name, lp)) in fixtures.iter().enumerate() {
        let k = Kapranov::from_lp(lp);
        if let Err(c) = k.check_generators(4) {
            bad.push(format!("{name}: generator tuple fails at n = {}", c.n));
            continue;
        }
        if let Err(c) = k.check_tuples(&k.random_tuples(seed as u64, 100, 4)) {
            bad.push(format!(
                "{name}: random tuple {} fails at n = {}",
                c.tuple_index, c.n
            ));
        }
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs() >= 60 {
        bad.push(format!("took {elapsed:?}"));
    }
    if bad.is_empty() {
        Ok(format!(
            "{} LP modules, n = 1..4, {elapsed:.2?}",
            fixtures.len()
        ))
    } else {
        Err(bad.join("; "))
    }
}

fn criterion_4() -> Outcome {
    let fixtures = all_fixtures();
    for (name, lp) in &fixtures {
        if let Err(m) = Kapranov::from_lp(lp).recursion_check(5) {
            return Err(format!("{name}: disagreement on tuple {:?}", m.tuple));
        }
    }
    Ok(format!("{} fixtures, arities 2..5", fixtures.len()))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let n = 12;
    for s in 0..n {
        let (ord, v, iso, a) = random_lift(s, ComplementRule::Pivot);
        let b = lift_lp(&ord, &v, &iso, ComplementRule::ReversePivot)
            .map_err(|e| format!("seed {s}: {e}"))?;
        a.verify().map_err(|e| format!("seed {s}: {e}"))?;
        b.verify().map_err(|e| format!("seed {s}: {e}"))?;
        let coords = solve_matrix(&kernel(&v.diff(0)).basis_matrix(), &iso)
            .ok_or("inclusion misses ker d_0")?;
        if a.h0().mul(&coords) != *ord.x() || b.h0().mul(&coords) != *ord.x() {
            return Err(format!("seed {s}: H^0 does not restrict to X"));
        }
        let h = lp_homotopic(&a, &b)
            .ok_or_else(|| format!("seed {s}: no homotopy between complement rules"))?;
        h.verify(&a.as_weak_morphism(), &b.as_weak_morphism())
            .map_err(|e| format!("seed {s}: {e}"))?;
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs() >= 30 {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("{n} instances, {elapsed:.2?}"))
}

fn criterion_6() -> Outcome {
    let mut checked = 0;
    let mut open = Vec::new();
    for (name, lp) in all_fixtures() {
        for (wname, w) in [
            ("V", lp.module().clone()),
            ("g", DgGModule::adjoint(lp.lie())),
        ] {
            if atiyah_cocycle(&lp, &w).check_cocycle().is_err() {
                open.push(format!("{name} (W = {wname})"));
            }
            checked += 1;
        }
    }
    if !open.is_empty() {
        return Err(format!("cocycle not closed for {}", open.join(", ")));
    }
    let (a, b) = (sl2_pair().lp_module(), sl2_pair_alt().lp_module());
    let at = atiyah_cocycle(&a, a.module());
    let at2 = atiyah_cocycle(&b, a.module());
    let prim = class_equal(&at, &at2).ok_or("two splittings give different classes")?;
    if d_tot(&at.hom_module(), &prim) != at2.sub(&at) || at.perturb(&prim) != at2 {
        return Err("primitive does not relate the two cocycles".into());
    }
    let mut ordinary = vec![OrdinaryLP::new(
        &LieAlgebra::sl2(),
        adjoint_action(&LieAlgebra::sl2()),
        Matrix::identity(3),
    )
    .unwrap()];
    for s in 0..5 {
        let mut r = rng(600 + s);
        let lie = random_lie_algebra(&mut r, 3);
        ordinary.push(random_ordinary_lp(&mut r, &lie));
    }
    for ord in &ordinary {
        let lp = ord.as_lp_module();
        let at = atiyah_cocycle(&lp, lp.module());
        let dim = ord.action().dim_space();
        for a in 0..dim {
            let xg = ord.x().column(a);
            let act = ord.action().rho_of(&xg);
            for b in 0..dim {
                let expected: Cochain = (0..dim)
                    .filter(|&c| !act[(c, b)].is_zero())
                    .map(|c| (Key::new(Wedge::EMPTY, 0, c), -act[(c, b)].clone()))
                    .collect();
                if at.entry(a, b) != expected {
                    return Err(format!("ordinary LP entry ({a}, {b}) is not -X(g)▷g'"));
                }
            }
        }
    }
    Ok(format!(
        "{checked} cocycles closed, splittings class-equal, {} ordinary LPs match -X(g)▷g'",
        ordinary.len()
    ))
}

fn criterion_7() -> Outcome {
    let mut pairs = vec![(sl2_pair(), sl2_pair_alt())];
    pairs.extend(random_pairs(6));
    for (i, (p, q)) in pairs.iter().enumerate() {
        let h = splitting_homotopy(p, q).map_err(|e| format!("pair {i}: {e}"))?;
        let (a, b) = (p.lp_module(), q.lp_module());
        h.verify(&a.as_weak_morphism(), &b.as_weak_morphism())
            .map_err(|e| format!("pair {i}: analytic witness fails: {e}"))?;
        lp_homotopic(&a, &b).ok_or_else(|| format!("pair {i}: linear search found no homotopy"))?;
    }
    Ok(format!("{} pairs", pairs.len()))
}

fn criterion_8() -> Outcome {
    let (mut yes, mut no) = (0, 0);
    for s in 0..60u64 {
        let mut r = rng(800 + s);
        let lie = if s % 2 == 0 {
            LieAlgebra::sl2()
        } else {
            LieAlgebra::nonabelian2()
        };
        let v2 = random_degree2_module(&mut r, &lie);
        let a2 = random_alpha2(&mut r, &lie, &v2, s % 3 == 0);
        let (lp, cocycle) = abelian_extension_equiv(&lie, &v2, &a2);
        if lp != cocycle {
            return Err(format!("seed {s}: LP flag {lp}, cocycle flag {cocycle}"));
        }
        if lp {
            yes += 1;
        } else {
            no += 1;
        }
    }
    Ok(format!("60 cases agree ({yes} LP, {no} not)"))
}

fn criterion_9() -> Outcome {
    let mut checked = 0;
    let mut skipped = 0;
    for (name, lp) in lp_fixtures() {
        if total_cohomology(lp.module()).total_dim() > 12 {
            skipped += 1;
            continue;
        }
        let br =
            leibniz_on_cohomology(&lp).map_err(|_| format!("{name}: bracket does not descend"))?;
        br.check_leibniz(&br)
            .map_err(|e| format!("{name}: fails on {:?} {:?} {:?}", e.a, e.b, e.c))?;
        checked += 1;
    }
    Ok(format!(
        "{checked} fixtures ({skipped} above the size bound)"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("sl2 golden reproduction", criterion_1),
        ("complex axioms", criterion_2),
        ("generalized Jacobi identities", criterion_3),
        ("recursion equals closed form", criterion_4),
        ("lifting", criterion_5),
        ("Atiyah cocycle", criterion_6),
        ("splitting independence", criterion_7),
        ("degree-2 equivalence", criterion_8),
        ("Leibniz bracket on cohomology", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = f();
        let t = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {}: PASS {name} ({t:.2}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({t:.2}s): {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
