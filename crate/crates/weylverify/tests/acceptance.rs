//! Acceptance suite. Runs without the libtest harness so every criterion
//! prints exactly one PASS/FAIL line; exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_integer::Integer;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRng, TestRunner};
use weylverify::catalog::{self, FamilyInstance, TorusChoice};
use weylverify::engine::{self, Status};
use weylverify::intlattice::{self, IntMatrix, IntegerLattice};
use weylverify::rootdata::{self, GroupFactor, GroupSpec, SimpleRootId, Weight};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn alpha(spec: &GroupSpec, factor: usize, position: usize) -> Weight {
    rootdata::simple_root(spec, SimpleRootId { factor, position }).unwrap()
}

fn string(spec: &GroupSpec, factor: usize, from: usize, to: usize) -> Weight {
    (from..=to).fold(Weight::zero(spec.basis_dim()), |acc, i| &acc + &alpha(spec, factor, i))
}

fn root_lattice(spec: &GroupSpec) -> IntegerLattice {
    let roots: Vec<Weight> =
        rootdata::simple_root_ids(spec).into_iter().map(|id| rootdata::simple_root(spec, id).unwrap()).collect();
    IntegerLattice::from_weights(spec.basis_dim(), &roots)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Runs the pipeline and checks PASS, the final set and d_W.
fn check_instance(
    inst: &FamilyInstance,
    expected: &BTreeSet<Weight>,
    d_w: i64,
) -> Result<engine::VerificationReport, String> {
    let r = engine::verify_instance(inst).map_err(|e| format!("{inst}: {e}"))?;
    ensure(r.status == Status::Pass, || format!("{inst}: status {} {:?}", r.status, r.failures))?;
    let got: BTreeSet<Weight> = r.final_set.iter().cloned().collect();
    ensure(got == *expected, || format!("{inst}: final {got:?} != {expected:?}"))?;
    ensure(r.d_w == d_w && r.final_set.len() as i64 == d_w, || format!("{inst}: d_W {} != {d_w}", r.d_w))?;
    Ok(r)
}

fn two_gl(m: usize, n: usize) -> GroupSpec {
    GroupSpec::new(vec![GroupFactor::gl(m), GroupFactor::gl(n)]).unwrap()
}

fn gl(n: usize) -> GroupSpec {
    GroupSpec::new(vec![GroupFactor::gl(n)]).unwrap()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for m in 2..=8 {
        let g = two_gl(m, m);
        let expected = (1..m).map(|i| &alpha(&g, 0, i) + &alpha(&g, 1, i)).collect();
        check_instance(&FamilyInstance::full(1, m, m), &expected, m as i64 - 1)?;
        count += 1;
    }
    for n in 2..=8 {
        for m in 1..n {
            let inst = FamilyInstance::new(1, m, n, TorusChoice::Derived);
            let case = catalog::resolve(&inst).map_err(|e| e.to_string())?;
            let (derived, _) = case.group.derived();
            let e: Vec<Weight> =
                case.basic_weights.iter().map(|w| rootdata::restrict_to_derived(&case.group, w)).collect();
            let sat = intlattice::is_saturated_criterion(&e, &derived).map_err(|e| e.to_string())?;
            ensure(sat, || format!("{inst}: derived monoid not saturated"))?;
            count += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), || format!("runtime {elapsed:?} exceeds 1 s"))?;
    Ok(format!("{count} checks in {elapsed:?}"))
}

fn criterion_2() -> Outcome {
    for n in 1..=10 {
        let g = gl(n);
        let expected = (1..n).map(|i| &alpha(&g, 0, i) * 2).collect();
        check_instance(&FamilyInstance::single(2, n, TorusChoice::Full), &expected, n as i64 - 1)?;
    }
    for n in 1..=6 {
        let case = catalog::resolve(&FamilyInstance::single(2, n, TorusChoice::Full)).unwrap();
        let g = &case.group;
        let delta = IntegerLattice::from_weights(g.basis_dim(), &case.basic_weights);
        let both = intlattice::intersect(&delta, &root_lattice(g)).map_err(|e| e.to_string())?;
        let doubled: Vec<Weight> = (1..n).map(|i| &alpha(g, 0, i) * 2).collect();
        let target = IntegerLattice::from_weights(g.basis_dim(), &doubled);
        ensure(intlattice::lattice_equal(&both, &target), || {
            format!("n={n}: weight lattice meets root lattice wrongly")
        })?;
    }
    Ok("n = 1..10 pipeline, n = 1..6 lattice".into())
}

fn family3_set(g: &GroupSpec, n: usize) -> Vec<Weight> {
    (1..=n - 3).step_by(2).map(|i| &(&alpha(g, 0, i) + &(&alpha(g, 0, i + 1) * 2)) + &alpha(g, 0, i + 2)).collect()
}

fn criterion_3() -> Outcome {
    for n in (4..=12).step_by(2) {
        let g = gl(n);
        let expected = family3_set(&g, n).into_iter().collect();
        check_instance(&FamilyInstance::single(3, n, TorusChoice::Full), &expected, n as i64 / 2 - 1)?;
    }
    for n in (4..=8).step_by(2) {
        let case = catalog::resolve(&FamilyInstance::single(3, n, TorusChoice::Full)).unwrap();
        let g = &case.group;
        let (derived, _) = g.derived();
        let restrict = |w: &Weight| rootdata::restrict_to_derived(g, w);
        let image: Vec<Weight> = case.basic_weights.iter().map(restrict).collect();
        let delta = IntegerLattice::from_weights(derived.basis_dim(), &image);
        let both = intlattice::intersect(&delta, &root_lattice(&derived)).map_err(|e| e.to_string())?;
        let claimed: Vec<Weight> = family3_set(g, n).iter().map(restrict).collect();
        let target = IntegerLattice::from_weights(derived.basis_dim(), &claimed);
        ensure(intlattice::lattice_equal(&both, &target), || format!("n={n}: lattice basis differs"))?;
    }
    Ok("even n = 4..12 pipeline, n = 4..8 lattice".into())
}

fn consecutive_pairs(g: &GroupSpec, upto: usize) -> BTreeSet<Weight> {
    (1..=upto).map(|i| &alpha(g, 0, i) + &alpha(g, 0, i + 1)).collect()
}

fn criterion_4() -> Outcome {
    let mut traces = 0;
    let (mut negative, mut nonnegative) = (0, 0);
    for n in 4..=9 {
        let g5 = GroupSpec::new(vec![GroupFactor::gl(n), GroupFactor::torus()]).unwrap();
        check_instance(&FamilyInstance::single(4, n, TorusChoice::Full), &consecutive_pairs(&g5, n - 2), n as i64 - 2)?;

        let expected = if n % 2 == 0 {
            consecutive_pairs(&g5, n - 2)
        } else {
            let mut s = consecutive_pairs(&g5, n - 3);
            s.insert(alpha(&g5, 0, n - 1));
            s
        };
        for torus in catalog::torus_options(5, 0, n, &(-3..=3).collect::<Vec<_>>()).unwrap() {
            let r = check_instance(&FamilyInstance::single(5, n, torus), &expected, n as i64 - 2)?;
            for t in &r.exclusions {
                ensure(t.es == [true; 4], || format!("family 5 n={n} {torus}: trace {:?}", t.es))?;
                traces += 1;
                match torus {
                    TorusChoice::Param(a) if a < 0 => negative += 1,
                    TorusChoice::Param(_) => nonnegative += 1,
                    _ => {}
                }
            }
        }
    }
    ensure(negative > 0 && nonnegative > 0, || "both parameter signs must be exercised".into())?;
    Ok(format!("{traces} exclusion traces, {negative} with a < 0, {nonnegative} with a >= 0"))
}

fn family6_expected(m: usize, n: usize) -> BTreeSet<Weight> {
    let g = two_gl(m, n);
    let (k, l) = ((m + 1).min(n), m.min(n));
    let mut s: BTreeSet<Weight> = (1..l).map(|i| alpha(&g, 0, i)).collect();
    s.extend((1..k).map(|j| alpha(&g, 1, j)));
    s
}

fn family7_expected(m: usize, n: usize) -> BTreeSet<Weight> {
    let g = two_gl(m, n);
    let (k, l) = (m.min(n - 1), m.min(n));
    let mut s: BTreeSet<Weight> = (1..l).map(|i| alpha(&g, 0, i)).collect();
    s.extend((1..k).map(|j| alpha(&g, 1, j)));
    s.insert(string(&g, 1, k, n - 1));
    s
}

/// Kernels `c·x + d·y` on the central pair with `|c|, |d| ≤ 3`, primitive,
/// keeping the module spherical: the parametric weight lies in the weight
/// group exactly for the catalogued kernel shapes.
fn equivalence_sweep(family: u8, m: usize, n: usize) -> Result<usize, String> {
    let base = catalog::resolve(&FamilyInstance::new(family, m, n, TorusChoice::Full)).map_err(|e| e.to_string())?;
    let (x, y) = catalog::central_pair(family, m, n).ok_or("no central pair")?;
    let beta = catalog::parametric_weight(family, m, n).ok_or("no parametric weight")?;
    let mut checked = 0;
    for c in -3i64..=3 {
        for d in -3i64..=3 {
            if c.gcd(&d) != 1 {
                continue;
            }
            let mut case = base.clone();
            case.kernel_chars = vec![&(&x * c) + &(&y * d)];
            let q = case.quotient();
            if !engine::is_spherical_restriction(&case.basic_weights, &q) {
                continue;
            }
            let inside = q.image_lattice(&case.basic_weights).contains(&q.image(&beta));
            let shape = catalog::kernel_has_parametric_form(family, m, n, c, d);
            ensure(inside == shape, || {
                format!("family {family} m={m} n={n} kernel ({c},{d}): member {inside}, shape {shape}")
            })?;
            checked += 1;
        }
    }
    Ok(checked)
}

fn criterion_5() -> Outcome {
    let params: Vec<i64> = (-3..=3).collect();
    let mut instances = 0;
    let mut kernels = 0;
    for family in [6u8, 7] {
        for m in 1..=6 {
            for n in 2..=6 {
                let (expected, d_w) = if family == 6 {
                    (family6_expected(m, n), ((m + 1).min(n) + m.min(n)) as i64 - 2)
                } else {
                    (family7_expected(m, n), (m.min(n - 1) + m.min(n)) as i64 - 1)
                };
                for torus in catalog::torus_options(family, m, n, &params).unwrap() {
                    let r = check_instance(&FamilyInstance::new(family, m, n, torus), &expected, d_w)?;
                    ensure(r.exclusions.iter().all(|t| t.excluded()), || {
                        format!("family {family} m={m} n={n} {torus}: exclusion failed")
                    })?;
                    instances += 1;
                }
                if catalog::has_parametric_torus(family, m, n) {
                    kernels += equivalence_sweep(family, m, n)?;
                }
            }
        }
    }
    for n in (5..=9).step_by(2) {
        kernels += equivalence_sweep(5, 0, n)?;
    }
    Ok(format!("{instances} instances, {kernels} kernels in the equivalence sweep"))
}

fn criterion_6() -> Outcome {
    let mut count = 0;
    for m in 2..=5 {
        for n in m..=5 {
            let g = GroupSpec::new(vec![GroupFactor::gl(m), GroupFactor::sl(2), GroupFactor::gl(n)]).unwrap();
            let expected = [alpha(&g, 0, 1), alpha(&g, 1, 1), alpha(&g, 2, 1)].into_iter().collect();
            for torus in catalog::torus_options(8, m, n, &[]).unwrap() {
                check_instance(&FamilyInstance::new(8, m, n, torus), &expected, 3)?;
                count += 1;
            }
            ensure(engine::noomone_check(m, n), || format!("m={m} n={n}: single fundamental weight in mixed lattice"))?;
        }
    }
    Ok(format!("{count} instances"))
}

fn criterion_7() -> Outcome {
    let mut total = 0;
    let mut check = |family: u8, m: usize, n: usize, param: i64| -> Result<(), String> {
        for id in catalog::expansion_identities(family, m, n, param).map_err(|e| e.to_string())? {
            let ok = engine::verify_identity(&id.lhs, &id.rhs).map_err(|e| e.to_string())?;
            ensure(ok, || format!("family {family} m={m} n={n} param={param}: {}", id.label))?;
            total += 1;
        }
        Ok(())
    };
    for n in 4..=9 {
        for a in -3..=3 {
            check(5, 0, n, a)?;
        }
    }
    for family in [6u8, 7] {
        for m in 1..=6 {
            for n in 2..=6 {
                for p in -3..=3 {
                    check(family, m, n, p)?;
                }
            }
        }
    }
    ensure(total > 0, || "no identities generated".into())?;
    Ok(format!("{total} identities, zero failures"))
}

/// Pads a weight of one group into the product with another.
fn embed(w: &Weight, before: usize, after: usize) -> Weight {
    let mut c = vec![0; before];
    c.extend_from_slice(w.coeffs());
    c.extend(std::iter::repeat_n(0, after));
    Weight::new(c)
}

fn criterion_8() -> Outcome {
    // Cartan matrix for every GL(k), SL(k) with k <= 8
    for k in 2..=8 {
        for g in [gl(k), GroupSpec::new(vec![GroupFactor::sl(k)]).unwrap()] {
            for i in 1..k {
                for j in 1..k {
                    let expected = match i.abs_diff(j) {
                        0 => 2,
                        1 => -1,
                        _ => 0,
                    };
                    let got =
                        rootdata::simple_coroot_pairing(&g, &alpha(&g, 0, i), SimpleRootId { factor: 0, position: j });
                    ensure(got == expected, || format!("{g}: <α_{i}, α_{j}^∨> = {got}"))?;
                }
            }
        }
    }

    // HNF idempotence and membership against enumeration, 500 random cases each
    let config = Config { cases: 500, failure_persistence: None, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(config.clone(), TestRng::deterministic_rng(config.rng_algorithm));
    let gens = (1usize..=6, 1usize..=3).prop_flat_map(|(d, k)| {
        (
            Just(d),
            prop::collection::vec(prop::collection::vec(-3i64..=3, d), k),
            prop::collection::vec(-4i64..=4, k),
            prop::collection::vec(-2i64..=2, d),
        )
    });
    runner
        .run(&gens, |(d, gens, coeffs, noise)| {
            let m = IntMatrix::from_columns(d, &gens);
            let h = intlattice::hnf(&m);
            prop_assert_eq!(intlattice::hnf(&h), h);
            let lattice = IntegerLattice::from_vectors(d, &gens);
            for target in [coeffs.clone(), vec![]] {
                let v: Vec<i64> = if target.is_empty() {
                    noise.clone()
                } else {
                    (0..d).map(|r| gens.iter().zip(&target).map(|(g, c)| g[r] * c).sum()).collect()
                };
                let witness = intlattice::member(&intlattice::to_big(&v), &lattice).unwrap();
                let boxed = box_member(&gens, &v, 4);
                if let Some(w) = &witness {
                    prop_assert_eq!(m.mul_vec(w), intlattice::to_big(&v));
                }
                if boxed {
                    prop_assert!(witness.is_some());
                }
                if !target.is_empty() {
                    prop_assert!(boxed && witness.is_some());
                }
            }
            Ok(())
        })
        .map_err(|e| format!("random lattice case: {e}"))?;

    // saturation criterion against brute force on catalog data of rank <= 4
    let families: Vec<u8> = (1..=8).collect();
    let mut compared = 0;
    for inst in catalog::enumerate_instances(&families, 6, &[]).unwrap() {
        let case = catalog::resolve(&inst).unwrap();
        let (spec, e) = match inst.torus {
            TorusChoice::Full => (case.group.clone(), case.basic_weights.clone()),
            TorusChoice::Derived => {
                let (d, _) = case.group.derived();
                (d, case.basic_weights.iter().map(|w| rootdata::restrict_to_derived(&case.group, w)).collect())
            }
            TorusChoice::Param(_) => continue,
        };
        if e.len() > 4 {
            continue;
        }
        let Ok(criterion) = intlattice::is_saturated_criterion(&e, &spec) else { continue };
        let brute = intlattice::is_saturated_bruteforce(&e, &spec, 4);
        ensure(criterion == brute, || format!("{inst}: criterion {criterion}, brute force {brute}"))?;
        compared += 1;
    }
    ensure(compared > 0, || "no catalog data of rank <= 4".into())?;

    // d_W additivity over products of two catalog modules
    let small = catalog::enumerate_instances(&families, 3, &[]).unwrap();
    let small: Vec<_> =
        small.into_iter().filter(|i| i.torus == TorusChoice::Full).map(|i| catalog::resolve(&i).unwrap()).collect();
    let mut products = 0;
    for a in &small {
        for b in &small {
            let (da, db) = (a.group.basis_dim(), b.group.basis_dim());
            let mut factors = a.group.factors().to_vec();
            factors.extend_from_slice(b.group.factors());
            let product = GroupSpec::new(factors).unwrap();
            let mut e: Vec<Weight> = a.basic_weights.iter().map(|w| embed(w, 0, db)).collect();
            e.extend(b.basic_weights.iter().map(|w| embed(w, da, 0)));
            let whole = engine::dw_camus(&e, product.basis_dim(), a.summands + b.summands);
            let parts =
                engine::dw_camus(&a.basic_weights, da, a.summands) + engine::dw_camus(&b.basic_weights, db, b.summands);
            ensure(whole == parts, || format!("{} x {}: {whole} != {parts}", a.instance, b.instance))?;
            products += 1;
        }
    }
    Ok(format!("500 random lattices, {compared} saturation comparisons, {products} products"))
}

fn box_member(gens: &[Vec<i64>], v: &[i64], bound: i64) -> bool {
    let mut coeffs = vec![-bound; gens.len()];
    loop {
        if (0..v.len()).all(|r| gens.iter().zip(&coeffs).map(|(g, c)| g[r] * c).sum::<i64>() == v[r]) {
            return true;
        }
        let mut pos = 0;
        loop {
            if pos == coeffs.len() {
                return false;
            }
            if coeffs[pos] < bound {
                coeffs[pos] += 1;
                break;
            }
            coeffs[pos] = -bound;
            pos += 1;
        }
    }
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("family 1 square sets and rectangular saturation", criterion_1),
        ("family 2 doubled roots and lattice intersection", criterion_2),
        ("family 3 even n sets and lattice basis", criterion_3),
        ("families 4 and 5 with parameter sweep", criterion_4),
        ("families 6 and 7 with kernel equivalence", criterion_5),
        ("family 8 and mixed generator lattice", criterion_6),
        ("expansion identities", criterion_7),
        ("property suite", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
