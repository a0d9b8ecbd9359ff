//! End-to-end acceptance suite. Every criterion prints one PASS line; all
//! comparisons are exact (the arithmetic is exact, so there are no
//! tolerances). Criteria share one full verification run, seeded with 42.

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use exact_linalg::{Mat, Scalar};
use isolab::cartan::{find_css, CartanSubspace};
use isolab::contraction::{degenerate_module, max_nilradical_orbit_dim, Variant};
use isolab::invol::{
    build_dyad, inner_involution, quaternionic, classify_involution, LittleIdx, QuasiMaximal,
};
use isolab::lie::{classify_element, is_regular, make_sl, Element};
use isolab::sample::rng_for;
use isolab::scenario::report::{Conclusion, Report};
use isolab::scenario::{builtin, emit_all, run, run_all, RunOptions, Suite};

struct Fixture {
    reports: Vec<Report>,
    json: String,
    elapsed: Duration,
}

static FIXTURE: OnceLock<Fixture> = OnceLock::new();

fn fixture() -> &'static Fixture {
    FIXTURE.get_or_init(|| {
        let opts = RunOptions {
            seed: 42,
            suite: Suite::All,
            max_rep_dim: 16,
        };
        let t0 = Instant::now();
        let reports = run_all(&opts).expect("full verification run succeeds");
        let elapsed = t0.elapsed();
        let json = emit_all(&reports, "json");
        Fixture {
            reports,
            json,
            elapsed,
        }
    })
}

fn report(name: &str) -> &'static Report {
    fixture()
        .reports
        .iter()
        .find(|r| r.scenario == name)
        .unwrap_or_else(|| panic!("scenario {name} missing from the run"))
}

fn theorem<'r>(r: &'r Report, name: &str) -> &'r isolab::scenario::report::TheoremCheck {
    r.theorems
        .iter()
        .find(|t| t.name == name)
        .unwrap_or_else(|| panic!("{}: theorem row {name} missing", r.scenario))
}

fn expectation_ok(r: &Report, name: &str) {
    let e = r
        .expectations
        .iter()
        .find(|e| e.name == name)
        .unwrap_or_else(|| panic!("{}: expectation {name} missing", r.scenario));
    assert!(
        e.ok,
        "{}: expectation {} wanted {} got {}",
        r.scenario, e.name, e.expected, e.actual
    );
}

fn diag(entries: &[i64]) -> Mat {
    let n = entries.len();
    Mat::from_fn(n, n, |r, c| {
        if r == c {
            Scalar::from_int(entries[r])
        } else {
            Scalar::zero()
        }
    })
}

#[test]
fn criterion_01_split_orthogonal_tables() {
    // The four block choices reproduce the closed-form Cartan dimensions,
    // and the odd unequal case has no coincidences; each table alone stays
    // under the 60-second target.
    for name in ["so2n-3-1", "so2n-3-3", "so2n-2-2", "so2n-2-4"] {
        let sc = builtin::get(name).unwrap();
        let opts = RunOptions {
            seed: 42,
            suite: Suite::Css,
            max_rep_dim: 16,
        };
        let t0 = Instant::now();
        let rep = run(&sc, &opts).expect("css run succeeds");
        let took = t0.elapsed();
        assert!(rep.all_expectations_ok(), "{name}: table mismatch");
        assert!(took < Duration::from_secs(60), "{name}: took {:?}", took);
        if name == "so2n-3-1" {
            let table = rep.rank_table.as_ref().unwrap();
            assert!(table.entries.iter().all(|e| !e.coincide));
        }
    }
    println!("[acceptance] criterion 1 (split orthogonal Cartan tables): PASS");
}

#[test]
fn criterion_02_maximal_rank_coincidences() {
    for name in ["maxrank-sl3", "maxrank-sl4", "maxrank-so8"] {
        let r = report(name);
        let t = theorem(r, "maximal-rank-coincidence-sigma1");
        assert_eq!(t.conclusion, Conclusion::Pass, "{name}");
        let table = r.rank_table.as_ref().unwrap();
        let e1 = table
            .entries
            .iter()
            .find(|e| e.alpha == "11" && e.big == "*1")
            .unwrap();
        let e2 = table
            .entries
            .iter()
            .find(|e| e.alpha == "10" && e.big == "*,1-*")
            .unwrap();
        assert!(e1.coincide && e2.coincide, "{name}");
    }
    println!("[acceptance] criterion 2 (maximal-rank coincidence theorem): PASS");
}

#[test]
fn criterion_03_dyad_coincidences_and_identities() {
    // constructed conjugate pairs: both embeddings of c11 coincide, and the
    // order-4 identities hold as exact matrix equations
    for name in ["dyad-sl2", "dyad-sl3", "dyad-so8"] {
        let r = report(name);
        let t = theorem(r, "dyad-coincidence");
        assert_eq!(t.conclusion, Conclusion::Pass, "{name}");
        let table = r.rank_table.as_ref().unwrap();
        for big in ["1*", "*1"] {
            let e = table
                .entries
                .iter()
                .find(|e| e.alpha == "11" && e.big == big)
                .unwrap();
            assert!(e.coincide, "{name}: c11 in {big}");
        }
    }
    // direct identity check on a fresh construction
    let g = make_sl(2).unwrap();
    let i = Scalar::i_unit().unwrap();
    let s = Mat::from_rows(vec![
        vec![i.clone(), Scalar::zero()],
        vec![Scalar::zero(), i.neg()],
    ]);
    let sigma1 = inner_involution(&g, &s).unwrap();
    let mut m = Mat::zero(2, 2);
    m.set(0, 1, Scalar::one());
    m.set(1, 0, Scalar::one());
    let t = Element::from_matrix(&g, &m).unwrap();
    let dyad = build_dyad(&sigma1, &t).unwrap();
    let phi4 = dyad
        .phi
        .compose(&dyad.phi)
        .unwrap()
        .compose(&dyad.phi)
        .unwrap()
        .compose(&dyad.phi)
        .unwrap();
    assert!(phi4.is_identity());
    let prod = sigma1.compose(&dyad.sigma2).unwrap();
    let phi2 = dyad.phi.compose(&dyad.phi).unwrap();
    assert!(prod.same_map(&phi2));
    println!("[acceptance] criterion 3 (dyad coincidence theorem and order-4 identities): PASS");
}

#[test]
fn criterion_04_quasi_maximal_arithmetic() {
    // alternating-sign witnesses so that the triangular slice carries the
    // regular nilpotent
    for (n, pattern) in [(3usize, vec![1i64, -1, 1]), (4, vec![1, -1, 1, -1])] {
        let g = make_sl(n).unwrap();
        let sigma = inner_involution(&g, &diag(&pattern)).unwrap();
        let mut rng = rng_for(42, &format!("acceptance/quasimax/{n}"));
        let cls = classify_involution(&sigma, &mut rng);
        let QuasiMaximal::Certified {
            regular_semisimple,
            regular_nilpotent,
        } = &cls.quasi_maximal
        else {
            panic!("sl({n}) balanced involution must certify quasi-maximal");
        };
        assert!(classify_element(regular_semisimple).semisimple);
        assert!(is_regular(regular_semisimple));
        // a regular semisimple element is found iff a regular nilpotent is
        let e = regular_nilpotent
            .as_ref()
            .expect("regular nilpotent must be found");
        assert!(classify_element(e).nilpotent);
        assert!(is_regular(e));
        // dimension identity and quotient dimension
        assert_eq!(
            cls.dim_fixed as i64 - cls.dim_odd as i64,
            g.k0() as i64 - g.k1() as i64,
            "sl({n})"
        );
        let g1 = sigma.eigenspace(1);
        let css = find_css(&g, &g1, &mut rng).unwrap();
        assert_eq!(css.dim(), g.k1(), "sl({n})");
    }
    println!("[acceptance] criterion 4 (quasi-maximal dimension identities): PASS");
}

#[test]
fn criterion_05_contraction_and_module_laws() {
    // z2_contract verifies Jacobi on every basis triple at construction and
    // degenerate_module verifies the module law; the pipeline runs both for
    // every scenario, so a pass row certifies the whole family.
    for r in &fixture().reports {
        assert_eq!(
            theorem(r, "contraction-jacobi").conclusion,
            Conclusion::Pass,
            "{}",
            r.scenario
        );
        assert_eq!(
            theorem(r, "module-law").conclusion,
            Conclusion::Pass,
            "{}",
            r.scenario
        );
    }
    println!("[acceptance] criterion 5 (contraction Jacobi and module laws): PASS");
}

#[test]
fn criterion_06_orbit_witness_iff_coincidence() {
    // every scenario checks max nilradical orbit dimension against the
    // coincidence flag; spot-check the extreme cases directly
    for r in &fixture().reports {
        assert_eq!(
            theorem(r, "orbit-witness-iff-coincidence").conclusion,
            Conclusion::Pass,
            "{}",
            r.scenario
        );
    }
    let triad = report("triad-sl2");
    assert!(triad.modules.iter().all(|m| m.witness_found));
    let so8 = report("so2n-3-1");
    assert!(so8.modules.iter().all(|m| !m.witness_found));
    // strictly below the target in the no-coincidence case
    let sc = builtin::get("so2n-3-1").unwrap();
    let opts = RunOptions {
        seed: 7,
        suite: Suite::Decompose,
        max_rep_dim: 16,
    };
    let built = isolab::scenario::build(&sc, &opts).unwrap();
    let q = quaternionic(&built.sigma1, &built.sigma2).unwrap();
    let mut rng = rng_for(7, "acceptance/orbits");
    for alpha in LittleIdx::ALL {
        for gamma in LittleIdx::ALL {
            if alpha == gamma {
                continue;
            }
            let m = degenerate_module(&q, alpha, gamma, Variant::A).unwrap();
            let css: CartanSubspace = find_css(q.algebra(), m.g_alpha(), &mut rng).unwrap();
            let orbit = max_nilradical_orbit_dim(&m, &css, &mut rng, 10);
            assert!(
                orbit.max_orbit_dim < orbit.target_dim,
                "{:?}->{:?}",
                alpha,
                gamma
            );
        }
    }
    println!("[acceptance] criterion 6 (nilradical orbit reach iff coincidence): PASS");
}

#[test]
fn criterion_07_generic_stabilizers() {
    // closed form and both transcendence-degree formulas for all six modules
    // of every scenario (the run errors out on any mismatch, the pass row
    // records it), plus resampling stability
    for r in &fixture().reports {
        assert_eq!(
            theorem(r, "generic-stabilizer-closed-form").conclusion,
            Conclusion::Pass,
            "{}",
            r.scenario
        );
        assert_eq!(r.modules.len(), 6, "{}", r.scenario);
        assert!(r.modules.iter().all(|m| m.agree), "{}", r.scenario);
    }
    // 10 independent resamples give constant dimensions, for every scenario
    for sc in builtin::all() {
        let opts = RunOptions {
            seed: 42,
            suite: Suite::Decompose,
            max_rep_dim: 16,
        };
        let built = isolab::scenario::build(&sc, &opts).unwrap();
        let q = quaternionic(&built.sigma1, &built.sigma2).unwrap();
        let mut rng0 = rng_for(1000, &format!("acceptance/stab/{}", sc.name));
        let m = degenerate_module(&q, LittleIdx::I10, LittleIdx::I11, Variant::A).unwrap();
        let big = find_css(
            q.algebra(),
            &m.g_alpha().sum(m.g_gamma()).unwrap(),
            &mut rng0,
        )
        .unwrap();
        let mut dims = Vec::new();
        for k in 0..10u64 {
            let mut rng = rng_for(2000 + k, &format!("acceptance/stab/{}", sc.name));
            let data =
                isolab::contraction::generic_stabilizer(&q, &m, big.dim(), &mut rng).unwrap();
            dims.push((
                data.report.stabilizer_dim,
                data.report.trdeg_a,
                data.report.trdeg_b,
            ));
        }
        assert!(
            dims.iter().all(|d| *d == dims[0]),
            "{}: resample dims varied: {:?}",
            sc.name,
            dims
        );
    }
    println!("[acceptance] criterion 7 (generic stabilizer closed form and stability): PASS");
}

#[test]
fn criterion_08_contracted_invariants() {
    // top components invariant for variant A, bottom for variant B, on
    // >= 20 exact points per family and permutation, in every scenario
    for r in &fixture().reports {
        assert_eq!(
            theorem(r, "contracted-invariants").conclusion,
            Conclusion::Pass,
            "{}",
            r.scenario
        );
        assert!(
            !r.invariant_degrees.is_empty(),
            "{}: no invariant families",
            r.scenario
        );
    }
    println!("[acceptance] criterion 8 (contracted invariant components): PASS");
}

#[test]
fn criterion_09_orthogonal_degeneration_family() {
    let gh62 = report("gh-6-2");
    expectation_ok(gh62, "trdeg");
    expectation_ok(gh62, "invariant_degrees");
    assert_eq!(gh62.invariant_degrees["g1*"], vec![2, 4, 6]);
    assert_eq!(
        gh62.modules.iter().find(|m| m.perm == "10,01,11").unwrap().trdeg_a,
        3
    );

    let gh32 = report("gh-3-2");
    let t32 = gh32.rank_table.as_ref().unwrap();
    assert!(
        t32.entries
            .iter()
            .find(|e| e.alpha == "10" && e.big == "1*")
            .unwrap()
            .coincide
    );

    let gh52 = report("gh-5-2");
    let t52 = gh52.rank_table.as_ref().unwrap();
    // the flag must equal the closed-form criterion n-p <= p, which fails
    // for (n, p) = (5, 2)
    assert!(
        !t52.entries
            .iter()
            .find(|e| e.alpha == "11" && e.big == "1*")
            .unwrap()
            .coincide
    );
    expectation_ok(gh52, "invariant_degrees");
    println!("[acceptance] criterion 9 (orthogonal degeneration family): PASS");
}

#[test]
fn criterion_10_canonical_pairs() {
    let r = report("canonical-sl4");
    expectation_ok(r, "dim_g00");
    expectation_ok(r, "dim_g11");
    assert_eq!(
        theorem(r, "canonical-pair-dimension-pattern").conclusion,
        Conclusion::Pass
    );
    assert_eq!(
        theorem(r, "canonical-little-maximal-rank").conclusion,
        Conclusion::Pass
    );
    assert_eq!(
        theorem(r, "canonical-quasi-maximal-dimensions").conclusion,
        Conclusion::Pass
    );
    // odd-degree invariants vanish on the saturation and their differentials
    // are independent at the supplied regular nilpotent
    expectation_ok(r, "vanishing_degrees");
    // the top component of a vanishing invariant sits in bidegree (n-1, 1)
    let v = r.vanishing.as_ref().unwrap();
    let entry = v.entries.iter().find(|e| e.vanishes_on_x).unwrap();
    assert_eq!(entry.top_bidegree, Some(entry.degree - 1));
    assert_eq!(r.gradient_independence_at_seed, Some(true));
    assert_eq!(
        theorem(r, "odd-degree-gradient-independence").conclusion,
        Conclusion::Pass
    );
    let r3 = report("canonical-sl3");
    expectation_ok(r3, "dim_g00");
    expectation_ok(r3, "dim_g11");
    println!("[acceptance] criterion 10 (canonical commuting pairs): PASS");
}

#[test]
fn criterion_11_determinism_and_runtime() {
    let first = fixture();
    assert!(
        first.elapsed < Duration::from_secs(900),
        "full suite took {:?}",
        first.elapsed
    );
    let opts = RunOptions {
        seed: 42,
        suite: Suite::All,
        max_rep_dim: 16,
    };
    let again = run_all(&opts).expect("second full run succeeds");
    let json = emit_all(&again, "json");
    assert_eq!(first.json, json, "outputs differ between identical runs");
    println!(
        "[acceptance] criterion 11 (byte-identical reruns, full suite in {:?}): PASS",
        first.elapsed
    );
}
