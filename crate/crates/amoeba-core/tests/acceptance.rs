//! Acceptance suite: every criterion runs at its stated tolerance and
//! prints one pass line. Frozen counts come from an independent
//! companion-matrix eigenvalue implementation of the raster pipeline.

use amoeba_core::analysis::{self, Verdict};
use amoeba_core::bench;
use amoeba_core::fixtures;
use amoeba_core::membership::{self, MembershipStatus};
use amoeba_core::newton;
use amoeba_core::parse;
use amoeba_core::poly::{ExponentVector, LaurentPolynomial, LogPoint};
use amoeba_core::raster::{self, CellState, GridRootParams, PixelRasterParams, Raster};
use amoeba_core::spine;
use amoeba_core::tropical::{self, Rect};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pass(id: &str, detail: impl AsRef<str>) {
    println!("[{id}] PASS - {}", detail.as_ref());
}

fn pixel_raster(p: &LaurentPolynomial, res: usize, prune: bool) -> Raster {
    raster::pixel_membership_raster(
        p,
        tropical::select_domain(p),
        res,
        res,
        &PixelRasterParams {
            prune,
            ..PixelRasterParams::default()
        },
    )
    .expect("raster")
}

/// Criterion 1: trinomial solidity for n = 1..20 at 256^2.
#[test]
fn acceptance_01_trinomial_solidity() {
    for n in 1..=20u32 {
        let p = fixtures::trinomial(n);
        let r = pixel_raster(&p, 256, true);
        let (report, _) = analysis::analyze(&p, &r, 200).expect("analyze");
        assert_eq!(report.count, 3, "n={n}: {} components", report.count);
        assert_eq!(report.verdict, Verdict::Solid, "n={n}");
    }
    pass("AC01", "z1^n+z2^n+1 for n=1..20 at 256^2: exactly 3 components, solid");
}

/// Criterion 2: component counts sit between the vertex count and the
/// lattice point count on the whole corpus.
#[test]
fn acceptance_02_bound_sandwich() {
    let mut corpus: Vec<(String, LaurentPolynomial, usize)> = vec![
        ("p1".into(), fixtures::p1(), 256),
        ("p1_sparse".into(), fixtures::p1_sparse(), 256),
        ("p2".into(), fixtures::p2(), 256),
    ];
    for n in 1..=20u32 {
        corpus.push((format!("trinomial-{n}"), fixtures::trinomial(n), 128));
    }
    for (i, p) in bench::random_corpus(42, 20).into_iter().enumerate() {
        corpus.push((format!("random-{i}"), p, 256));
    }
    for (name, p, res) in &corpus {
        let nd = newton::newton_polytope(p).expect("hull");
        let (lo, hi) = newton::component_bounds(&nd);
        let r = pixel_raster(p, *res, true);
        let comps = analysis::label_components(&r).expect("labeling");
        assert!(
            comps.len() >= lo && comps.len() <= hi,
            "{name}: {} components outside [{lo}, {hi}]",
            comps.len()
        );
    }
    pass(
        "AC02",
        format!("{} fixtures: component count within [vertices, lattice points]", corpus.len()),
    );
}

/// Criterion 3: the maximally sparse octagon polynomial at 512^2.
#[test]
fn acceptance_03_p1_sparse_regression() {
    let p = fixtures::p1_sparse();
    let r = pixel_raster(&p, 512, true);
    let (report, _) = analysis::analyze(&p, &r, 200).expect("analyze");
    assert_eq!(report.count, 8);
    assert_eq!(report.verdict, Verdict::Solid);
    pass("AC03", "p1_sparse at 512^2: 8 components, solid");
}

/// Criterion 4: the dense octagon polynomial reproduces the frozen
/// regression count with distinct lattice orders.
#[test]
fn acceptance_04_p2_regression() {
    let p = fixtures::p2();
    let r = pixel_raster(&p, 512, true);
    let (report, comps) = analysis::analyze(&p, &r, 200).expect("analyze");
    assert_eq!(report.count, 14);
    let nd = newton::newton_polytope(&p).expect("hull");
    assert_eq!(nd.lattice_count(), 14);
    let mut orders: Vec<Vec<i64>> = Vec::new();
    for c in &comps {
        let o = c.order.clone().expect("order computed");
        assert!(nd.contains_lattice_point(&o), "order {o:?} outside hull");
        let key = o.0.clone();
        assert!(!orders.contains(&key), "duplicate order {key:?}");
        orders.push(key);
    }
    pass("AC04", "p2 at 512^2: 14 components, orders distinct lattice points");
}

/// Criterion 5: order quadrature values and convergence for the line.
#[test]
fn acceptance_05_order_quadrature() {
    let p = fixtures::trinomial(1);
    let cases = [
        ([-5.0, -5.0], [0i64, 0]),
        ([5.0, 0.0], [1, 0]),
        ([0.0, 5.0], [0, 1]),
    ];
    for (u, expect) in cases {
        let (o, r200) = analysis::order_vector(&p, &LogPoint::new(u.to_vec()), 200).unwrap();
        assert_eq!(o.as_slice(), &expect, "at {u:?}");
        assert!(r200 < 1e-3, "residual {r200:.2e} at {u:?}");
        let (o2, r400) = analysis::order_vector(&p, &LogPoint::new(u.to_vec()), 400).unwrap();
        assert_eq!(o2.as_slice(), &expect);
        // spectral convergence bottoms out at machine precision
        assert!(r400 < r200 || r400 < 1e-12, "r200={r200:.2e} r400={r400:.2e}");
    }
    pass("AC05", "orders (0,0),(1,0),(0,1) at q=200, residual < 1e-3, improving at q=400");
}

/// Criterion 6: Ronkin coefficients against closed forms.
#[test]
fn acceptance_06_ronkin_coefficients() {
    let binomial = LaurentPolynomial::from_terms(
        1,
        &[
            (&[1], amoeba_core::C64::new(1.0, 0.0)),
            (&[0], amoeba_core::C64::new(2.0, 0.0)),
        ],
    )
    .unwrap();
    let a = analysis::ronkin_coefficient(
        &binomial,
        &ExponentVector::new(vec![0]),
        &LogPoint::new(vec![-3.0]),
        200,
    )
    .unwrap();
    assert!((a - 2.0f64.ln()).abs() < 1e-6, "a = {a}");

    let p = fixtures::trinomial(1);
    let a = analysis::ronkin_coefficient(
        &p,
        &ExponentVector::new(vec![0, 0]),
        &LogPoint::new(vec![-8.0, -8.0]),
        200,
    )
    .unwrap();
    assert!(a.abs() < 1e-4, "a = {a}");
    pass("AC06", "ronkin: z1+2 gives ln 2 within 1e-6, line constant term 0 within 1e-4");
}

fn spine_containment(p: &LaurentPolynomial, name: &str) -> f64 {
    let window = tropical::select_domain(p);
    let r = raster::pixel_membership_raster(
        p,
        window,
        512,
        512,
        &PixelRasterParams {
            prune: true,
            ..PixelRasterParams::default()
        },
    )
    .expect("raster");
    let (report, _) = analysis::analyze(p, &r, 200).expect("analyze");
    assert!(!report.artifact_suspect, "{name} analysis artifact-suspect");
    let sp = spine::build_spine(&report, window).expect("spine");
    let samples = sp.sample_points(0.01, window);
    assert!(!samples.is_empty());
    let mut hits = 0usize;
    for s in &samples {
        let (c, rr) = r.pixel_of(*s).expect("sample inside window");
        let mut found = false;
        'outer: for dc in -1i64..=1 {
            for dr in -1i64..=1 {
                let (nc, nr) = (c as i64 + dc, rr as i64 + dr);
                if nc >= 0
                    && nr >= 0
                    && (nc as usize) < r.width
                    && (nr as usize) < r.height
                    && r.get(nc as usize, nr as usize) == CellState::Amoeba
                {
                    found = true;
                    break 'outer;
                }
            }
        }
        if found {
            hits += 1;
        }
    }
    hits as f64 / samples.len() as f64
}

/// Criterion 7: spine containment for the line and p1, spine vertex of the
/// line within 0.02 of the origin.
#[test]
fn acceptance_07_spine_containment() {
    let p = fixtures::trinomial(1);
    let window = tropical::select_domain(&p);
    let r = pixel_raster(&p, 512, true);
    let (report, _) = analysis::analyze(&p, &r, 200).expect("analyze");
    let sp = spine::build_spine(&report, window).expect("spine");
    assert_eq!(sp.vertex_count(), 1);
    let v = sp.curve.vertices[0];
    assert!(
        v[0].hypot(v[1]) < 0.02,
        "spine vertex at ({}, {})",
        v[0],
        v[1]
    );

    let ratio_line = spine_containment(&fixtures::trinomial(1), "line");
    assert!(ratio_line >= 0.99, "line containment ratio {ratio_line}");
    let ratio_p1 = spine_containment(&fixtures::p1(), "p1");
    assert!(ratio_p1 >= 0.99, "p1 containment ratio {ratio_p1}");
    pass(
        "AC07",
        format!("spine containment: line {ratio_line:.4}, p1 {ratio_p1:.4}; vertex within 0.02"),
    );
}

/// Criterion 8: certificate soundness over 1000 seeded pairs.
#[test]
fn acceptance_08_certificate_soundness() {
    let polys = bench::random_corpus(2024, 40);
    let mut rng = ChaCha8Rng::seed_from_u64(777);
    let mut pairs = 0usize;
    let mut lopsided_count = 0usize;
    for p in &polys {
        let d = tropical::prune_distance(p);
        let pieces = tropical::archimedean_tropicalization(p);
        let window = tropical::select_domain(p);
        for _ in 0..25 {
            let x = [
                rng.gen_range(window.x0 * 1.5..window.x1 * 1.5),
                rng.gen_range(window.y0 * 1.5..window.y1 * 1.5),
            ];
            pairs += 1;
            let point = LogPoint::new(x.to_vec());
            let certified = membership::lopsided(p, &point);
            if tropical::max_gap(&pieces, &x) > d {
                assert!(
                    certified.is_some(),
                    "gap above ln(k-1) but no lopsided certificate at {x:?}"
                );
            }
            if certified.is_some() {
                lopsided_count += 1;
                let v = membership::fiber_membership(p, &point, 64, 1e-3).expect("fiber");
                assert_eq!(
                    v.status,
                    MembershipStatus::ProbablyOutside,
                    "lopsided point {x:?} not outside"
                );
            }
        }
    }
    assert_eq!(pairs, 1000);
    assert!(lopsided_count > 300, "corpus too easy: {lopsided_count}");
    pass(
        "AC08",
        format!("1000 pairs, {lopsided_count} certificates, zero violations"),
    );
}

/// Criterion 9: pruning never changes a pixel.
#[test]
fn acceptance_09_pruning_equivalence() {
    let corpus: Vec<(&str, LaurentPolynomial)> = vec![
        ("trinomial-1", fixtures::trinomial(1)),
        ("trinomial-7", fixtures::trinomial(7)),
        ("p1", fixtures::p1()),
        ("p1_sparse", fixtures::p1_sparse()),
        ("p2", fixtures::p2()),
    ];
    for (name, p) in &corpus {
        let plain = pixel_raster(p, 256, false);
        let pruned = pixel_raster(p, 256, true);
        assert_eq!(plain.ppm_bytes(), pruned.ppm_bytes(), "{name}");
        assert!(pruned.provenance.pruned_pixels > 0, "{name} pruned nothing");
    }
    pass("AC09", "pruned and unpruned 256^2 rasters bit-identical on 5 fixtures");
}

/// Criterion 10: fiber-sampling hits land inside the 1-pixel dilation of
/// the membership raster.
#[test]
fn acceptance_10_algorithm_cross_validation() {
    let corpus: Vec<(&str, LaurentPolynomial)> = vec![
        ("trinomial-1", fixtures::trinomial(1)),
        ("p1_sparse", fixtures::p1_sparse()),
        ("p2", fixtures::p2()),
    ];
    for (name, p) in &corpus {
        let domain = tropical::select_domain(p);
        let pixel = pixel_raster(p, 256, true);
        let (grid, _) = raster::grid_root_raster(
            p,
            domain,
            GridRootParams {
                moduli: 500,
                angles: 500,
                width: 256,
                height: 256,
            },
        )
        .expect("grid raster");
        for row in 0..256 {
            for col in 0..256 {
                if grid.get(col, row) != CellState::Amoeba {
                    continue;
                }
                let mut covered = false;
                'outer: for dc in -1i64..=1 {
                    for dr in -1i64..=1 {
                        let (nc, nr) = (col as i64 + dc, row as i64 + dr);
                        if nc >= 0
                            && nr >= 0
                            && (nc as usize) < 256
                            && (nr as usize) < 256
                            && pixel.get(nc as usize, nr as usize) == CellState::Amoeba
                        {
                            covered = true;
                            break 'outer;
                        }
                    }
                }
                assert!(covered, "{name}: grid hit at ({col},{row}) uncovered");
            }
        }
    }
    pass("AC10", "grid-root hits within 1-pixel dilation of membership rasters");
}

/// Criterion 11: bit-identical rasters for any thread count.
#[test]
fn acceptance_11_raster_determinism() {
    let p = fixtures::p2();
    let domain = tropical::select_domain(&p);
    let params = PixelRasterParams {
        prune: true,
        ..PixelRasterParams::default()
    };
    let runs: Vec<Vec<u8>> = [1usize, 2, 8]
        .iter()
        .map(|&threads| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .expect("pool");
            pool.install(|| {
                raster::pixel_membership_raster(&p, domain, 128, 128, &params)
                    .expect("raster")
                    .ppm_bytes()
            })
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    assert_eq!(runs[1], runs[2]);

    let grids: Vec<Vec<u8>> = [1usize, 8]
        .iter()
        .map(|&threads| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .expect("pool");
            pool.install(|| {
                raster::grid_root_raster(
                    &p,
                    domain,
                    GridRootParams {
                        moduli: 100,
                        angles: 100,
                        width: 128,
                        height: 128,
                    },
                )
                .expect("grid")
                .0
                .ppm_bytes()
            })
        })
        .collect();
    assert_eq!(grids[0], grids[1]);
    pass("AC11", "pixel and grid rasters bit-identical across 1, 2 and 8 threads");
}

/// Criterion 12: the coamoeba of the line contains the exact cyclotomic
/// argument pair and avoids the origin.
#[test]
fn acceptance_12_coamoeba_exactness() {
    let p = fixtures::trinomial(1);
    let cloud = raster::coamoeba_cloud(&p, 101, 120, Rect::new(-2.0, 2.0, -2.0, 2.0))
        .expect("coamoeba");
    let t = 2.0 * std::f64::consts::PI / 3.0;
    let hit = cloud
        .points
        .iter()
        .any(|q| (q[0] - t).abs() < 1e-9 && (q[1] + t).abs() < 1e-9);
    assert!(hit, "missing (2pi/3, -2pi/3)");
    for q in &cloud.points {
        assert!(q[0].hypot(q[1]) >= 0.1, "point {q:?} near the origin");
    }
    pass("AC12", "coamoeba contains (2pi/3, -2pi/3) within 1e-9, empty near origin");
}

/// Criterion 13: parser round-trip identity over the corpus.
#[test]
fn acceptance_13_parser_roundtrip() {
    let corpus: Vec<(String, LaurentPolynomial)> = vec![
        (fixtures::p1_expression().to_string(), fixtures::p1()),
        (
            fixtures::p1_sparse_expression().to_string(),
            fixtures::p1_sparse(),
        ),
        (fixtures::p2_expression().to_string(), fixtures::p2()),
        ("z1^7 + z2^7 + 1".to_string(), fixtures::trinomial(7)),
        (
            "z1^(-2)*z2 + (0.5,-1.25)*z1 - 3".to_string(),
            parse::parse("z1^(-2)*z2 + (0.5,-1.25)*z1 - 3").unwrap().poly,
        ),
    ];
    for (text, expect) in &corpus {
        let parsed = parse::parse(text).expect("parse").poly;
        assert_eq!(&parsed, expect, "{text}");
        let reparsed = parse::parse(&parsed.to_string()).expect("reparse").poly;
        assert_eq!(parsed, reparsed, "{text}");
    }
    pass("AC13", "verbatim fixture expressions parse and round-trip exactly");
}

/// Criterion 14: doubling the pixel count at most 2.5x-es the median
/// pixel-raster time.
#[test]
fn acceptance_14_scaling_sanity() {
    for n in [5u32, 10] {
        let p = fixtures::trinomial(n);
        let domain = tropical::select_domain(&p);
        let params = PixelRasterParams {
            prune: true,
            ..PixelRasterParams::default()
        };
        let time = |w: usize, h: usize| -> f64 {
            let mut t = Vec::new();
            for _ in 0..3 {
                let start = std::time::Instant::now();
                let r = raster::pixel_membership_raster(&p, domain, w, h, &params).unwrap();
                assert!(!r.has_untested());
                t.push(start.elapsed().as_secs_f64());
            }
            t.sort_by(|a, b| a.partial_cmp(b).unwrap());
            t[1]
        };
        let base = time(256, 256);
        let doubled = time(512, 256);
        let ratio = doubled / base;
        assert!(
            ratio <= 2.5,
            "n={n}: doubling pixels scaled time by {ratio:.2}"
        );
        pass(
            "AC14",
            format!("n={n}: 2x pixels -> {ratio:.2}x median time (<= 2.5)"),
        );
    }
}
