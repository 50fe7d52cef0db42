//! Benchmark harness: timed pipeline sweeps over three polynomial families
//! (trinomials, dense simplex-supported, random supports) with CSV and SVG
//! scatter reporting.

use crate::analysis;
use crate::fixtures;
use crate::poly::{C64, ExponentVector, LaurentPolynomial};
use crate::raster::{PixelRasterParams, pixel_membership_raster};
use crate::svg::SvgCanvas;
use crate::tropical::{self, Rect};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum BenchError {
    #[error("degree-10 triangle has {available} lattice points, cannot sample {requested}")]
    InsufficientSupport { requested: usize, available: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BenchFamily {
    Trinomial,
    Dense,
    Random,
}

impl BenchFamily {
    fn label(&self) -> &'static str {
        match self {
            BenchFamily::Trinomial => "trinomial",
            BenchFamily::Dense => "dense",
            BenchFamily::Random => "random",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BenchStatus {
    Correct,
    ArtifactSuspect,
    Failed,
}

impl BenchStatus {
    fn label(&self) -> &'static str {
        match self {
            BenchStatus::Correct => "correct",
            BenchStatus::ArtifactSuspect => "artifact-suspect",
            BenchStatus::Failed => "failed",
        }
    }
}

/// One benchmark run: family parameter, median wall time, component count
/// against the expected one, artifact metric and the derived status.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub family: BenchFamily,
    pub n: u32,
    pub ms: f64,
    pub count: Option<usize>,
    pub expected: Option<usize>,
    pub metric: Option<f64>,
    pub status: BenchStatus,
    pub cause: Option<String>,
}

impl BenchRecord {
    /// Equality on everything except the wall-time field.
    pub fn same_outcome(&self, other: &BenchRecord) -> bool {
        self.family == other.family
            && self.n == other.n
            && self.count == other.count
            && self.expected == other.expected
            && self.metric == other.metric
            && self.status == other.status
            && self.cause == other.cause
    }
}

const METRIC_THRESHOLD: f64 = 0.05;

struct PipelineOutcome {
    count: usize,
    metric: f64,
    in_bounds: bool,
    ms: f64,
}

/// Domain selection, pruned pixel raster, full analysis; timed end to end
/// without file output.
fn timed_pipeline(
    p: &LaurentPolynomial,
    resolution: usize,
    quadrature: usize,
) -> Result<PipelineOutcome, String> {
    let start = std::time::Instant::now();
    let domain = tropical::select_domain(p);
    let raster = pixel_membership_raster(
        p,
        domain,
        resolution,
        resolution,
        &PixelRasterParams {
            prune: true,
            ..PixelRasterParams::default()
        },
    )
    .map_err(|e| e.to_string())?;
    let (report, _) = analysis::analyze(p, &raster, quadrature).map_err(|e| e.to_string())?;
    let ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(PipelineOutcome {
        count: report.count,
        metric: report.artifact_metric,
        in_bounds: report.count >= report.bounds[0] && report.count <= report.bounds[1],
        ms,
    })
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs[xs.len() / 2]
}

fn run_record(
    family: BenchFamily,
    n: u32,
    p: &LaurentPolynomial,
    expected: Option<usize>,
    resolution: usize,
    repeats: usize,
) -> BenchRecord {
    let repeats = repeats.max(1);
    let mut times = Vec::with_capacity(repeats);
    let mut last: Option<PipelineOutcome> = None;
    for _ in 0..repeats {
        match timed_pipeline(p, resolution, 200) {
            Ok(out) => {
                times.push(out.ms);
                last = Some(out);
            }
            Err(cause) => {
                return BenchRecord {
                    family,
                    n,
                    ms: 0.0,
                    count: None,
                    expected,
                    metric: None,
                    status: BenchStatus::Failed,
                    cause: Some(cause),
                };
            }
        }
    }
    let out = last.expect("at least one repeat ran");
    let count_ok = match expected {
        Some(e) => out.count == e,
        None => out.in_bounds,
    };
    let status = if count_ok && out.metric <= METRIC_THRESHOLD {
        BenchStatus::Correct
    } else {
        BenchStatus::ArtifactSuspect
    };
    BenchRecord {
        family,
        n,
        ms: median(times),
        count: Some(out.count),
        expected,
        metric: Some(out.metric),
        status,
        cause: None,
    }
}

/// z1^n + z2^n + 1 for n = 1..n_max; solid amoebas with exactly three
/// complement components.
pub fn bench_trinomial(n_max: u32, resolution: usize, repeats: usize) -> Vec<BenchRecord> {
    (1..=n_max)
        .map(|n| {
            let p = fixtures::trinomial(n);
            run_record(
                BenchFamily::Trinomial,
                n,
                &p,
                Some(3),
                resolution,
                repeats,
            )
        })
        .collect()
}

/// Dense family supported on every lattice point of the degree-n simplex.
/// Heights follow the strictly concave function e2(barycentric)/n, so each
/// lattice point carries its own dominance region: coefficient 20^h, 1 at
/// the vertices.
pub fn dense_polynomial(n: u32) -> LaurentPolynomial {
    let deg = n as i64;
    let mut terms = Vec::new();
    for i in 0..=deg {
        for j in 0..=(deg - i) {
            let k = deg - i - j;
            let h = (i * j + j * k + k * i) as f64 / deg as f64;
            terms.push((
                ExponentVector::new(vec![i, j]),
                C64::new(20.0f64.powf(h), 0.0),
            ));
        }
    }
    LaurentPolynomial::new(2, terms).expect("dense family is well formed")
}

/// Expected component count of the dense family: every lattice point of
/// the simplex opens a component when the picture resolves them all.
pub fn dense_expected(n: u32) -> usize {
    ((n + 1) * (n + 2) / 2) as usize
}

pub fn bench_dense(n_max: u32, resolution: usize, repeats: usize) -> Vec<BenchRecord> {
    (1..=n_max)
        .map(|n| {
            let p = dense_polynomial(n);
            run_record(
                BenchFamily::Dense,
                n,
                &p,
                Some(dense_expected(n)),
                resolution,
                repeats,
            )
        })
        .collect()
}

const RANDOM_DEGREE: i64 = 10;

/// Support sampled without replacement from the degree-10 triangle,
/// coefficients uniform integers in [1, 5].
pub fn random_polynomial(
    monomials: usize,
    rng: &mut ChaCha8Rng,
) -> Result<LaurentPolynomial, BenchError> {
    let mut pool: Vec<(i64, i64)> = Vec::new();
    for i in 0..=RANDOM_DEGREE {
        for j in 0..=(RANDOM_DEGREE - i) {
            pool.push((i, j));
        }
    }
    if monomials > pool.len() || monomials < 2 {
        return Err(BenchError::InsufficientSupport {
            requested: monomials,
            available: pool.len(),
        });
    }
    // partial Fisher-Yates keeps the draw order deterministic
    let len = pool.len();
    for i in 0..monomials {
        let j = rng.gen_range(i..len);
        pool.swap(i, j);
    }
    let terms: Vec<(ExponentVector, C64)> = pool[..monomials]
        .iter()
        .map(|&(i, j)| {
            let c = rng.gen_range(1..=5) as f64;
            (ExponentVector::new(vec![i, j]), C64::new(c, 0.0))
        })
        .collect();
    Ok(LaurentPolynomial::new(2, terms).expect("sampled support is distinct"))
}

/// Deterministic corpus of random-family polynomials, monomial counts
/// cycling over 5, 8, ..., 62.
pub fn random_corpus(seed: u64, count: usize) -> Vec<LaurentPolynomial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            random_polynomial(5 + 3 * (i % 20), &mut rng).expect("sizes stay within the pool")
        })
        .collect()
}

/// Random-coefficient sweep over monomial counts 5, 10, ..., count_max.
/// Expected counts are unknown; status uses the polytope bounds.
pub fn bench_random(
    count_max: usize,
    seed: u64,
    resolution: usize,
    repeats: usize,
) -> Vec<BenchRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut k = 5usize;
    while k <= count_max {
        match random_polynomial(k, &mut rng) {
            Ok(p) => out.push(run_record(
                BenchFamily::Random,
                k as u32,
                &p,
                None,
                resolution,
                repeats,
            )),
            Err(e) => out.push(BenchRecord {
                family: BenchFamily::Random,
                n: k as u32,
                ms: 0.0,
                count: None,
                expected: None,
                metric: None,
                status: BenchStatus::Failed,
                cause: Some(e.to_string()),
            }),
        }
        k += 5;
    }
    out
}

/// CSV table: family,n,ms,count,expected,metric,status.
pub fn write_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from("family,n,ms,count,expected,metric,status\n");
    for r in records {
        let opt = |v: Option<usize>| v.map_or(String::new(), |x| x.to_string());
        let met = r.metric.map_or(String::new(), |m| format!("{m:.4}"));
        out.push_str(&format!(
            "{},{},{:.3},{},{},{},{}\n",
            r.family.label(),
            r.n,
            r.ms,
            opt(r.count),
            opt(r.expected),
            met,
            r.status.label()
        ));
    }
    out
}

/// Scatter of wall time against the family parameter; records that are not
/// fully correct draw with half-size markers.
pub fn write_svg_scatter(records: &[BenchRecord], px_w: u32, px_h: u32) -> String {
    if records.is_empty() {
        return SvgCanvas::new(px_w, px_h, Rect::new(0.0, 1.0, 0.0, 1.0)).finish();
    }
    let n_max = records.iter().map(|r| r.n).max().unwrap() as f64;
    let ms_max = records.iter().map(|r| r.ms).fold(0.0, f64::max).max(1.0);
    let world = Rect::new(0.0, n_max * 1.05 + 1.0, -0.05 * ms_max, ms_max * 1.1);
    let mut canvas = SvgCanvas::new(px_w, px_h, world);
    canvas.line([0.0, 0.0], [world.x1, 0.0], "gray", 1.0);
    canvas.line([0.0, 0.0], [0.0, world.y1], "gray", 1.0);
    canvas.text([world.x1 * 0.85, ms_max * 0.02], 10.0, "n");
    canvas.text([0.5, ms_max * 1.02], 10.0, "ms");
    for r in records {
        let color = match r.family {
            BenchFamily::Trinomial => "black",
            BenchFamily::Dense => "#1f77b4",
            BenchFamily::Random => "#d62728",
        };
        let radius = if r.status == BenchStatus::Correct {
            4.0
        } else {
            2.0
        };
        canvas.circle([r.n as f64, r.ms], radius, color);
    }
    canvas.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_family_shapes() {
        let p1 = dense_polynomial(1);
        assert_eq!(p1.term_count(), 3);
        assert_eq!(dense_expected(1), 3);
        let p2 = dense_polynomial(2);
        assert_eq!(p2.term_count(), 6);
        // vertices stay at coefficient 1, mid-edges are boosted
        for (e, c) in p2.terms() {
            let on_vertex = matches!(e.as_slice(), [0, 0] | [2, 0] | [0, 2]);
            if on_vertex {
                assert_eq!(c.re, 1.0);
            } else {
                assert!(c.re > 1.0);
            }
        }
    }

    #[test]
    fn random_generator_is_reproducible() {
        let a = random_corpus(42, 5);
        let b = random_corpus(42, 5);
        assert_eq!(a, b);
        let c = random_corpus(43, 5);
        assert_ne!(a, c);
    }

    #[test]
    fn random_generator_rejects_oversized_requests() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(
            random_polynomial(67, &mut rng),
            Err(BenchError::InsufficientSupport {
                requested: 67,
                available: 66
            })
        );
    }

    #[test]
    fn trinomial_sweep_records() {
        let records = bench_trinomial(3, 64, 1);
        assert_eq!(records.len(), 3);
        for r in &records {
            assert_eq!(r.expected, Some(3));
            assert_eq!(r.count, Some(3), "n={}", r.n);
            assert_eq!(r.status, BenchStatus::Correct);
        }
    }

    #[test]
    fn sweep_outcomes_are_deterministic() {
        let a = bench_random(15, 42, 48, 1);
        let b = bench_random(15, 42, 48, 1);
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert!(x.same_outcome(y));
        }
    }

    #[test]
    fn csv_and_svg_contracts() {
        let empty = write_csv(&[]);
        assert_eq!(empty, "family,n,ms,count,expected,metric,status\n");
        let svg = write_svg_scatter(&[], 300, 200);
        assert!(svg.starts_with("<svg") && !svg.contains("circle"));

        let records = vec![
            BenchRecord {
                family: BenchFamily::Trinomial,
                n: 2,
                ms: 12.5,
                count: Some(3),
                expected: Some(3),
                metric: Some(0.001),
                status: BenchStatus::Correct,
                cause: None,
            },
            BenchRecord {
                family: BenchFamily::Trinomial,
                n: 3,
                ms: 13.0,
                count: Some(2),
                expected: Some(3),
                metric: Some(0.2),
                status: BenchStatus::ArtifactSuspect,
                cause: None,
            },
        ];
        let csv = write_csv(&records);
        assert!(csv.contains("trinomial,2,12.500,3,3,0.0010,correct"));
        let svg = write_svg_scatter(&records, 300, 200);
        assert!(svg.contains(r#"r="4""#) && svg.contains(r#"r="2""#));
    }
}
