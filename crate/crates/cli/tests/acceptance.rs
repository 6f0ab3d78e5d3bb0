//! The acceptance gate. One test per criterion; each prints a PASS line
//! when it holds (visible with `cargo test --test acceptance -- --nocapture`).
//! Every check is exact: no tolerances anywhere.

mod common;

use std::fs;
use std::path::Path;
use std::time::Instant;

use common::{golden_dir, normalize, run, CASES};
use exform::algebra::{Monomial, Polynomial, RationalFunction};
use exform::closure::{homotopy_operator, is_closed};
use exform::dsl::{parse, render_document, render_form};
use exform::evolutionary::{
    evolutionary_differential, FactorSearch, StructureCoefficients,
};
use exform::forms::{DifferentialForm, ParamMap, Variables};
use exform::metric::{basis_monomials, codifferential, hodge_star, DiagonalMetric};
use exform::physics::{
    classification_table, maxwell_check, poincare_cartan_check, thermo_demo_default,
    DimensionPolicy, Interaction,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const NAMES: [&str; 5] = ["x1", "x2", "x3", "x4", "x5"];

fn space(dim: usize) -> Variables {
    Variables::from_names(&NAMES[..dim]).unwrap()
}

fn random_coefficient(rng: &mut StdRng) -> BigRational {
    let num = loop {
        let n = rng.gen_range(-5i64..=5);
        if n != 0 {
            break n;
        }
    };
    BigRational::new(BigInt::from(num), BigInt::from(rng.gen_range(1i64..=3)))
}

/// A polynomial over `vars` of total degree at most `budget`.
fn random_polynomial(rng: &mut StdRng, vars: &[&str], budget: u32) -> Polynomial {
    let terms = rng.gen_range(1..=3usize);
    Polynomial::from_terms((0..terms).map(|_| {
        let mut remaining = budget;
        let exponents: Vec<(String, u32)> = vars
            .iter()
            .map(|v| {
                let e = rng.gen_range(0..=remaining.min(2));
                remaining -= e;
                (v.to_string(), e)
            })
            .collect();
        (Monomial::from_exponents(exponents), random_coefficient(rng))
    }))
}

/// A form of the given degree with polynomial coefficients of total degree
/// at most four, one or two terms.
fn random_form(rng: &mut StdRng, dim: usize, degree: usize) -> DifferentialForm {
    let basis = basis_monomials(dim, degree);
    let count = rng.gen_range(1..=2usize);
    let terms = (0..count)
        .map(|_| {
            let indices = &basis[rng.gen_range(0..basis.len())];
            let coefficient =
                RationalFunction::from(random_polynomial(rng, &NAMES[..dim], 4));
            (indices.iter().collect(), coefficient)
        })
        .collect();
    DifferentialForm::from_terms(space(dim), degree, terms).unwrap()
}

/// A polynomial map from a small source space into `dim`-space.
fn random_map(rng: &mut StdRng, dim: usize) -> ParamMap {
    const SOURCE: [&str; 3] = ["s1", "s2", "s3"];
    let arity = rng.gen_range(1..=3usize);
    let source = Variables::from_names(&SOURCE[..arity]).unwrap();
    let components = (0..dim)
        .map(|_| RationalFunction::from(random_polynomial(rng, &SOURCE[..arity], 2)))
        .collect();
    ParamMap::new(source, components).unwrap()
}

fn minkowski(n: usize) -> DiagonalMetric {
    let mut signature = vec![1i8];
    signature.extend(std::iter::repeat(-1).take(n - 1));
    DiagonalMetric::new(signature).unwrap()
}

#[test]
fn acceptance_01_exterior_calculus_laws() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xE1);
    for _ in 0..100 {
        let dim = rng.gen_range(2..=5usize);
        let p = rng.gen_range(0..=dim);
        let q = rng.gen_range(0..=dim);
        let a = random_form(&mut rng, dim, p);
        let b = random_form(&mut rng, dim, q);

        assert!(
            a.exterior_derivative().exterior_derivative().is_zero(),
            "d(d a) must vanish"
        );

        let lhs = a.wedge(&b).unwrap().exterior_derivative();
        let da_b = a.exterior_derivative().wedge(&b).unwrap();
        let a_db = a.wedge(&b.exterior_derivative()).unwrap();
        let rhs = if p % 2 == 0 {
            da_b.add(&a_db).unwrap()
        } else {
            da_b.sub(&a_db).unwrap()
        };
        assert_eq!(lhs, rhs, "graded Leibniz rule");

        let ab = a.wedge(&b).unwrap();
        let mut ba = b.wedge(&a).unwrap();
        if (p * q) % 2 == 1 {
            ba = ba.negate();
        }
        assert_eq!(ab, ba, "graded commutativity");

        let phi = random_map(&mut rng, dim);
        let pulled_product = a.wedge(&b).unwrap().pullback(&phi).unwrap();
        let product_of_pulled = a
            .pullback(&phi)
            .unwrap()
            .wedge(&b.pullback(&phi).unwrap())
            .unwrap();
        assert_eq!(pulled_product, product_of_pulled, "pullback of a wedge");
        assert_eq!(
            a.exterior_derivative().pullback(&phi).unwrap(),
            a.pullback(&phi).unwrap().exterior_derivative(),
            "pullback commutes with d"
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 30, "took {elapsed:?}");
    println!(
        "[acceptance] criterion 1 (exterior-calculus laws on 100 random forms, dims 2-5): PASS in {elapsed:?}"
    );
}

#[test]
fn acceptance_02_homotopy_identity() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xE2);
    for _ in 0..100 {
        let dim = rng.gen_range(2..=5usize);
        let degree = rng.gen_range(1..=dim);
        let w = random_form(&mut rng, dim, degree);
        let k_w = homotopy_operator(&w).unwrap();
        let k_dw = homotopy_operator(&w.exterior_derivative()).unwrap();
        assert_eq!(
            k_w.exterior_derivative().add(&k_dw).unwrap(),
            w,
            "d(Kw) + K(dw) = w"
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 30, "took {elapsed:?}");
    println!(
        "[acceptance] criterion 2 (homotopy identity on 100 random polynomial forms): PASS in {elapsed:?}"
    );
}

#[test]
fn acceptance_03_hodge_sign_law_and_codifferential() {
    // The sign law, exhaustively on every basis monomial for n <= 5 under
    // the Euclidean and the (+,-,...,-) signatures.
    let mut checked = 0usize;
    for n in 1..=5usize {
        let mut metrics = vec![DiagonalMetric::euclidean(n)];
        if n >= 2 {
            metrics.push(minkowski(n));
        }
        for g in &metrics {
            let sign_product = i64::from(g.sign_product());
            for p in 0..=n {
                for indices in basis_monomials(n, p) {
                    let w = DifferentialForm::from_terms(
                        space(n),
                        p,
                        vec![(indices.iter().collect(), RationalFunction::one())],
                    )
                    .unwrap();
                    let twice = hodge_star(&hodge_star(&w, g).unwrap(), g).unwrap();
                    let sign = if (p * (n - p)) % 2 == 0 { 1 } else { -1 };
                    let expected = if sign * sign_product >= 0 {
                        w
                    } else {
                        w.negate()
                    };
                    assert_eq!(twice, expected, "** sign law at n={n}, p={p}");
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 100, "the enumeration must be exhaustive");

    let mut rng = StdRng::seed_from_u64(0xE3);
    for i in 0..100 {
        let dim = rng.gen_range(2..=5usize);
        let degree = rng.gen_range(2..=dim);
        let g = if i % 2 == 0 {
            DiagonalMetric::euclidean(dim)
        } else {
            minkowski(dim)
        };
        let w = random_form(&mut rng, dim, degree);
        let twice = codifferential(&codifferential(&w, &g).unwrap(), &g).unwrap();
        assert!(twice.is_zero(), "delta(delta w) must vanish");
    }
    println!(
        "[acceptance] criterion 3 (Hodge ** sign law exhaustive to n=5, delta^2 = 0 on 100 forms): PASS"
    );
}

#[test]
fn acceptance_04_maxwell_plane_waves() {
    let vars = Variables::from_names(&["x0", "x1", "x2", "x3"]).unwrap();
    let eta = DiagonalMetric::new(vec![1, -1, -1, -1]).unwrap();
    let u = &RationalFunction::variable("x0") - &RationalFunction::variable("x3");
    let mut rng = StdRng::seed_from_u64(0xE4);
    for _ in 0..10 {
        // A polynomial wave profile of degree at most five in u = x0 - x3.
        let mut profile = RationalFunction::zero();
        for k in 0..=rng.gen_range(0..=5i64) {
            if rng.gen_bool(0.6) {
                let c = RationalFunction::constant(random_coefficient(&mut rng));
                profile = &profile + &(&c * &u.pow(k).unwrap());
            }
        }
        if profile.is_zero() {
            profile = u.clone();
        }
        let wave = DifferentialForm::from_terms(
            vars.clone(),
            2,
            vec![(vec![0, 1], profile.clone()), (vec![1, 3], profile.clone())],
        )
        .unwrap();
        let report = maxwell_check(&wave, &eta).unwrap();
        assert!(
            report.homogeneous && report.source_free && report.satisfied,
            "plane waves solve both field equations"
        );

        let perturbation = DifferentialForm::from_terms(
            vars.clone(),
            2,
            vec![(vec![0, 1], RationalFunction::variable("x1"))],
        )
        .unwrap();
        let broken = maxwell_check(&wave.add(&perturbation).unwrap(), &eta).unwrap();
        assert!(broken.homogeneous, "the perturbation is still closed");
        assert!(!broken.source_free && !broken.satisfied);
        assert!(
            !broken.source_residual.is_zero(),
            "the failure must carry a nonzero residual"
        );
    }
    println!(
        "[acceptance] criterion 4 (Maxwell plane waves pass, perturbation fails with residual): PASS"
    );
}

#[test]
fn acceptance_05_thermodynamic_integrating_factor() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xE5);
    let tv = Variables::from_names(&["T", "V"]).unwrap();
    let inv_t = RationalFunction::one()
        .divide(&RationalFunction::variable("T"))
        .unwrap();
    for _ in 0..20 {
        let c_v = BigRational::new(
            BigInt::from(rng.gen_range(1i64..=9)),
            BigInt::from(rng.gen_range(1i64..=9)),
        );
        let r = BigRational::new(
            BigInt::from(rng.gen_range(1i64..=9)),
            BigInt::from(rng.gen_range(1i64..=9)),
        );
        let report = thermo_demo_default(&c_v, &r).unwrap();
        assert!(!report.closed, "heat is not a state function");

        let r_over_v = RationalFunction::constant(r.clone())
            .divide(&RationalFunction::variable("V"))
            .unwrap();
        let expected =
            DifferentialForm::from_terms(tv.clone(), 2, vec![(vec![0, 1], r_over_v)]).unwrap();
        assert!(!expected.is_zero());
        assert_eq!(report.heat_form.exterior_derivative(), expected);

        let FactorSearch::Found(mu) = &report.factor else {
            panic!("the integrating factor must be found");
        };
        assert_eq!(mu, &inv_t, "the factor is 1/T");
        assert!(
            report.heat_form.scale(mu).exterior_derivative().is_zero(),
            "d(mu w) = 0 exactly"
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 10, "took {elapsed:?}");
    println!(
        "[acceptance] criterion 5 (20 random ideal gases, integrating factor 1/T): PASS in {elapsed:?}"
    );
}

#[test]
fn acceptance_06_commutator_iff_closed() {
    let mut rng = StdRng::seed_from_u64(0xE6);
    for i in 0..200 {
        let dim = rng.gen_range(2..=4usize);
        let w = if i % 2 == 0 {
            random_form(&mut rng, dim, 1)
        } else {
            // Exact by construction, so the commutator must vanish.
            random_form(&mut rng, dim, 0).exterior_derivative()
        };
        let k = w.commutator().unwrap();
        assert_eq!(k.is_zero(), is_closed(&w).0, "K = 0 iff dw = 0");
    }

    let xy = Variables::from_names(&["x", "y"]).unwrap();
    let minus_y = &RationalFunction::zero() - &RationalFunction::variable("y");
    let omega = DifferentialForm::from_terms(
        xy,
        1,
        vec![(vec![0], minus_y), (vec![1], RationalFunction::variable("x"))],
    )
    .unwrap();
    let k = omega.commutator().unwrap();
    assert_eq!(k.entry(0, 1), &RationalFunction::from_integer(2));
    println!(
        "[acceptance] criterion 6 (commutator vanishes iff closed, 200 forms; K_xy = 2 example): PASS"
    );
}

#[test]
fn acceptance_07_evolutionary_differential() {
    let mut rng = StdRng::seed_from_u64(0xE7);
    for _ in 0..100 {
        let dim = rng.gen_range(2..=4usize);
        let degree = rng.gen_range(0..=dim);
        let w = random_form(&mut rng, dim, degree);
        let flat = StructureCoefficients::new(space(dim));
        assert_eq!(
            evolutionary_differential(&w, &flat).unwrap(),
            w.exterior_derivative(),
            "zero torsion reduces the evolutionary differential to d"
        );
    }

    let vars = space(3);
    let dx1 = DifferentialForm::from_terms(
        vars.clone(),
        1,
        vec![(vec![0], RationalFunction::one())],
    )
    .unwrap();
    let t1 = DifferentialForm::from_terms(
        vars.clone(),
        2,
        vec![(vec![1, 2], RationalFunction::one())],
    )
    .unwrap();
    let mut torsion = StructureCoefficients::new(vars);
    torsion.set("x1", t1.clone()).unwrap();
    assert_eq!(evolutionary_differential(&dx1, &torsion).unwrap(), t1);
    println!(
        "[acceptance] criterion 7 (evolutionary differential: flat reduction on 100 forms, torsion example): PASS"
    );
}

#[test]
fn acceptance_08_classification_table() {
    let table = classification_table(DimensionPolicy::MatchDegree);
    assert!(!table.rows.is_empty());
    for row in &table.rows {
        assert_eq!(
            row.interaction,
            Interaction::from_closure_degree(row.closure_degree).unwrap()
        );
        assert_eq!(
            row.pseudostructure_dimension,
            row.space_dimension + 1 - row.closure_degree
        );
        assert_eq!(row.parameter_count, row.space_dimension + 1);
    }
    assert_eq!(table.metric_dimensions, [1, 2, 3, 4]);
    println!(
        "[acceptance] criterion 8 (classification table formulas and the N row 1 2 3 4): PASS"
    );
}

#[test]
fn acceptance_09_poincare_cartan_invariance() {
    let mut rng = StdRng::seed_from_u64(0xE9);
    for i in 0..50 {
        let names: &[&str] = if i % 2 == 0 {
            &["t", "q1", "p1"]
        } else {
            &["t", "q1", "q2", "p1", "p2"]
        };
        let vars = Variables::from_names(names).unwrap();
        let h = RationalFunction::from(random_polynomial(&mut rng, names, 4));
        let report = poincare_cartan_check(vars, &h).unwrap();
        assert!(report.residual.is_zero(), "the contraction residual vanishes");
        assert!(report.invariant);
    }
    println!(
        "[acceptance] criterion 9 (action form invariant for 50 random Hamiltonians): PASS"
    );
}

#[test]
fn acceptance_10_dsl_round_trip() {
    let corpus = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/corpus");
    let mut files: Vec<_> = fs::read_dir(&corpus)
        .expect("the corpus directory exists")
        .map(|entry| entry.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "form"))
        .collect();
    files.sort();
    assert!(files.len() >= 30, "found only {} fixtures", files.len());
    for path in &files {
        let text = fs::read_to_string(path).unwrap();
        let parsed = parse(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let rendered = render_document(&parsed.document);
        let reparsed = parse(&rendered).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(parsed.document, reparsed.document, "{}", path.display());
    }

    let mut rng = StdRng::seed_from_u64(0xEA);
    for _ in 0..200 {
        let dim = rng.gen_range(1..=4usize);
        let degree = rng.gen_range(0..=dim);
        let w = random_form(&mut rng, dim, degree);
        let source = format!("vars({});\n{}", w.variables(), render_form("w", &w));
        let parsed = parse(&source).unwrap_or_else(|e| panic!("{e}\n{source}"));
        assert_eq!(parsed.document.form("w"), Some(&w), "{source}");
    }

    let malformed = [
        "form w : 1 = dx;",
        "vars(x);\nform w : 1 = ;",
        "vars(x;",
        "vars(x, y);\nform w : 1 = x dy",
        "vars(x, y);\nform w : 1 = 2 3 dx;",
    ];
    for bad in malformed {
        let err = parse(bad).unwrap_err();
        assert!(err.line >= 1 && err.col >= 1, "{bad:?}");
        assert!(
            err.to_string().starts_with(&format!("{}:{}:", err.line, err.col)),
            "errors must lead with line:column, got {err}"
        );
    }
    println!(
        "[acceptance] criterion 10 (DSL round trip on {} fixtures and 200 random forms): PASS",
        files.len()
    );
}

#[test]
fn acceptance_11_cli_determinism() {
    for (name, args) in CASES {
        let out = run(args);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{name}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let normalized = normalize(&out.stdout);
        let golden = fs::read_to_string(golden_dir().join(name))
            .unwrap_or_else(|_| panic!("missing golden {name}"));
        assert_eq!(normalized, golden, "golden drift for {name}");
        let again = normalize(&run(args).stdout);
        assert_eq!(normalized, again, "nondeterminism in {name}");
    }
    println!(
        "[acceptance] criterion 11 (byte-identical golden reports for all {} subcommand cases): PASS",
        CASES.len()
    );
}
