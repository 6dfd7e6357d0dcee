//! Instance generators behind `cdut gen`.

use std::fmt::Write as _;
use std::fs;

use cdut::decision::{check_separation, PlantedSpec};
use cdut::gadgets::combine_gadgets;
use cdut::{gadget_a, gadget_b, BitVector, Metric, PointSet};
use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::args::{Expectation, GenArgs, Generator};
use crate::instance::write_instance;
use crate::record::join;
use crate::{CliError, Output};

/// Generated pair plus `key=value` metadata for the sidecar file.
#[derive(Debug, Clone, PartialEq)]
pub struct Generated {
    pub a: PointSet,
    pub b: PointSet,
    pub meta: Vec<(String, String)>,
}

pub(crate) fn generator_name(g: Generator) -> String {
    g.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
}

/// Rounds to a multiple of 2^-10 so sums and differences of moderate
/// coordinates stay exact.
fn dyadic(x: f64) -> f64 {
    (x * 1024.0).round() / 1024.0
}

fn uniform(rng: &mut ChaCha8Rng, n: usize, dim: usize, half: f64) -> Vec<f64> {
    (0..n * dim).map(|_| rng.random_range(-half..=half)).collect()
}

fn points(dim: usize, coords: Vec<f64>) -> Result<PointSet, CliError> {
    Ok(PointSet::new(dim, coords)?)
}

fn parse_bits(raw: &[String], what: &str) -> Result<Vec<BitVector>, CliError> {
    raw.iter()
        .map(|s| {
            s.parse::<BitVector>()
                .map_err(|e| CliError::Invalid(format!("--{what} {s}: {e}")))
        })
        .collect()
}

pub fn build(args: &GenArgs) -> Result<Generated, CliError> {
    if args.dim == 0 {
        return Err(CliError::Invalid("--dim must be positive".into()));
    }
    let (n, dim) = (args.n, args.dim);
    let m = args.m.unwrap_or(n);
    if !(args.scale.is_finite() && args.scale > 0.0) {
        return Err(CliError::Invalid("--scale must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut meta = vec![
        ("generator".to_string(), generator_name(args.generator)),
        ("seed".to_string(), args.seed.to_string()),
    ];
    let (a, b) = match args.generator {
        Generator::Uniform => {
            let a = points(dim, uniform(&mut rng, m, dim, args.scale))?;
            let b = points(dim, uniform(&mut rng, n, dim, args.scale))?;
            (a, b)
        }
        Generator::Clustered => {
            if args.clusters == 0 {
                return Err(CliError::Invalid("--clusters must be positive".into()));
            }
            let centers = uniform(&mut rng, args.clusters, dim, args.scale);
            let spread = Normal::new(0.0, args.scale / 20.0)
                .map_err(|e| CliError::Invalid(format!("cluster spread: {e}")))?;
            let mut draw = |count: usize| -> Vec<f64> {
                (0..count)
                    .flat_map(|_| {
                        let k = rng.random_range(0..args.clusters);
                        let center = &centers[k * dim..(k + 1) * dim];
                        center.iter().map(|c| c + spread.sample(&mut rng)).collect::<Vec<_>>()
                    })
                    .collect()
            };
            let a = draw(m);
            let b = draw(n);
            (points(dim, a)?, points(dim, b)?)
        }
        Generator::TranslatedCopy => {
            if args.m.is_some_and(|m| m != n) {
                return Err(CliError::Invalid("translated-copy uses --n for both sets".into()));
            }
            let b: Vec<f64> = uniform(&mut rng, n, dim, args.scale).into_iter().map(dyadic).collect();
            let shift: Vec<f64> = (0..dim)
                .map(|_| dyadic(rng.random_range(-args.scale / 5.0..=args.scale / 5.0)))
                .collect();
            let a: Vec<f64> = b
                .chunks(dim)
                .flat_map(|p| {
                    p.iter()
                        .zip(&shift)
                        .map(|(x, s)| {
                            let noise = if args.noise > 0.0 {
                                rng.random_range(-args.noise..=args.noise)
                            } else {
                                0.0
                            };
                            x - s + noise
                        })
                        .collect::<Vec<_>>()
                })
                .collect();
            meta.push(("shift".into(), join(&shift)));
            meta.push(("noise".into(), args.noise.to_string()));
            (points(dim, a)?, points(dim, b)?)
        }
        Generator::OvGadget => {
            let (xs, ys) = (parse_bits(&args.x, "x")?, parse_bits(&args.y, "y")?);
            if xs.len() != 1 || ys.len() != 1 {
                return Err(CliError::Invalid("ov-gadget takes exactly one --x and one --y".into()));
            }
            if xs[0].len() != ys[0].len() {
                return Err(CliError::Invalid("--x and --y must have the same length".into()));
            }
            meta.push(("x".into(), args.x[0].clone()));
            meta.push(("y".into(), args.y[0].clone()));
            meta.push(("orthogonal".into(), xs[0].is_orthogonal(&ys[0]).to_string()));
            (gadget_a(&xs[0]), gadget_b(&ys[0]))
        }
        Generator::CombinedGadget => {
            let (xs, ys) = (parse_bits(&args.x, "x")?, parse_bits(&args.y, "y")?);
            if xs.is_empty() || xs.len() != ys.len() {
                return Err(CliError::Invalid(
                    "combined-gadget needs matching, nonempty lists of --x and --y".into(),
                ));
            }
            let pairs: Vec<(PointSet, PointSet)> =
                xs.iter().zip(&ys).map(|(x, y)| (gadget_a(x), gadget_b(y))).collect();
            meta.push(("pairs".into(), pairs.len().to_string()));
            combine_gadgets(&pairs, args.metric.unwrap_or_default())?
        }
        Generator::SeparatedPlanted => {
            let spec = PlantedSpec {
                m,
                n,
                dim,
                radius: args.radius,
                epsilon: args.epsilon,
                c: args.c,
            };
            let inst = match args.answer {
                Expectation::Yes => spec.yes(args.seed)?,
                Expectation::No => spec.no(args.seed)?,
            };
            let cert = check_separation(&inst.b, spec.c, spec.radius, m)?;
            meta.push(("shift".into(), join(&inst.shift)));
            meta.push(("radius".into(), spec.radius.to_string()));
            meta.push(("epsilon".into(), spec.epsilon.to_string()));
            meta.push(("c".into(), spec.c.to_string()));
            meta.push(("expect".into(), if inst.expect_yes { "yes" } else { "no" }.into()));
            meta.push(("separation_holds".into(), cert.holds.to_string()));
            (inst.a, inst.b)
        }
    };
    Ok(Generated { a, b, meta })
}

pub fn generate(args: &GenArgs) -> Result<Output, CliError> {
    let generated = build(args)?;
    fs::create_dir_all(&args.out).map_err(|source| CliError::Io {
        path: args.out.clone(),
        source,
    })?;
    let metric: Option<Metric> = args.metric;
    write_instance(&args.out.join("a.txt"), &generated.a, metric)?;
    write_instance(&args.out.join("b.txt"), &generated.b, metric)?;
    let mut meta = String::new();
    for (k, v) in &generated.meta {
        let _ = writeln!(meta, "{k}={v}");
    }
    let path = args.out.join("meta.txt");
    fs::write(&path, &meta).map_err(|source| CliError::Io { path, source })?;
    Ok(Output::ok(format!(
        "wrote {} (|A| = {}, |B| = {}, d = {})\n",
        args.out.display(),
        generated.a.len(),
        generated.b.len(),
        generated.a.dim()
    )))
}
