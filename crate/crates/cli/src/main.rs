//! `sbo` — command-line front end for the symmetry-breaking-operator
//! toolkit. Emits JSON Lines verification records on stdout (or `--out`)
//! and a human summary on stderr.
//!
//! Exit codes: 0 = all checks passed, 1 = a numerical check failed (the
//! failing residual is in the report), 2 = usage error.

use std::collections::BTreeMap;
use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use sbo_core::intertwine::{
    boundary_operator, intertwining_residual_with, knapp_stein_ktype_check,
};
use sbo_core::kernel::{check_condition_d, kernel_eval, params_to_induction, KernelParams};
use sbo_core::linalg::RMat;
use sbo_core::orbits::{classify_gl, classify_rank1, enumerate_gl, nsigma_orbit_count, NsigmaOrbits};
use sbo_core::rng::Rng;
use sbo_core::sphere::{quad_rule, sphere_dim, SphereFunction};
use sbo_core::{GroupDescriptor, Mat, Weight};

#[derive(Parser)]
#[command(name = "sbo", version, about = "Verification tool for symmetry-breaking kernels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    /// RNG seed for all sampled quantities (reports are deterministic per
    /// (configuration, seed); defaults to 0)
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Quadrature order for commands that integrate over the boundary sphere
    #[arg(long, global = true, default_value_t = 20)]
    order: usize,
    /// Tolerance override KEY=VALUE (repeatable); unknown keys are rejected
    #[arg(long = "tol", global = true, value_name = "KEY=VAL")]
    tol: Vec<String>,
    /// Write the JSON Lines report to a file instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<String>,
    /// Suppress the human-readable summary on stderr
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check the structural conditions of a catalogue descriptor
    CheckConditions { descriptor: String },
    /// Evaluate the two-parameter kernel on seeded random group elements
    EvalKernel {
        descriptor: String,
        /// Kernel exponent alpha: comma-separated coordinates, each RE or RE:IM
        #[arg(long, default_value = "1.0")]
        alpha: String,
        /// Kernel exponent beta: same format as alpha
        #[arg(long, default_value = "1.0")]
        beta: String,
        /// Number of sample pairs
        #[arg(long, default_value_t = 5)]
        samples: usize,
    },
    /// Report whether the kernel's domain is non-empty for a descriptor
    CheckDomain { descriptor: String },
    /// Orbit classification: rank-one representative labels, or a subspace
    /// quadruple for the block pair
    Orbits {
        descriptor: String,
        /// CSV file with row-major spanning vectors of a subspace
        #[arg(long, value_name = "FILE.csv")]
        subspace: Option<String>,
    },
    /// Enumerate block-pair orbit quadruples for a given size parameter
    EnumerateGl { n: usize },
    /// Measure the intertwining residual of the boundary operator
    VerifyIntertwiner {
        descriptor: String,
        #[arg(long, default_value = "1.0")]
        alpha: String,
        #[arg(long, default_value = "1.0")]
        beta: String,
        /// Boundary function preset: const | coord:i | harmonic:l:m |
        /// gauss[:c0,c1,...]
        #[arg(long, default_value = "gauss")]
        function: String,
    },
    /// Classical one-parameter operator: eigenvalue on a harmonic degree
    KnappStein {
        descriptor: String,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        /// Harmonic degree
        #[arg(long, default_value_t = 0)]
        degree: usize,
    },
    /// Map kernel exponents to induction parameters and round-trip them
    Params {
        descriptor: String,
        #[arg(long, default_value = "1.0")]
        alpha: String,
        #[arg(long, default_value = "1.0")]
        beta: String,
    },
}

/// One JSON Lines record.
#[derive(Serialize)]
struct Record {
    command: String,
    descriptor: String,
    inputs: BTreeMap<String, Value>,
    outputs: BTreeMap<String, Value>,
    residuals: BTreeMap<String, f64>,
    tolerances: BTreeMap<String, f64>,
    pass: bool,
}

struct Reporter {
    records: Vec<Record>,
    human: bool,
    t0: Instant,
}

impl Reporter {
    fn push(&mut self, r: Record) {
        if self.human {
            eprintln!(
                "{} {}: {}",
                if r.pass { "ok  " } else { "FAIL" },
                r.command,
                r.descriptor
            );
        }
        self.records.push(r);
    }

    fn finish(self, out: &Option<String>) -> std::io::Result<bool> {
        let all_pass = self.records.iter().all(|r| r.pass);
        let mut body = String::new();
        for r in &self.records {
            body.push_str(&serde_json::to_string(r).expect("serializable record"));
            body.push('\n');
        }
        match out {
            Some(path) => std::fs::write(path, body)?,
            None => std::io::stdout().write_all(body.as_bytes())?,
        }
        if self.human {
            eprintln!(
                "{} record(s), {} — wall time {:.3} s",
                self.records.len(),
                if all_pass { "all passed" } else { "FAILURES" },
                self.t0.elapsed().as_secs_f64()
            );
        }
        Ok(all_pass)
    }
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {}", msg);
    ExitCode::from(2)
}

/// Tolerance table for a command: defaults for the known keys, with
/// command-line overrides applied. Unknown keys are a usage error.
fn tolerances(
    defaults: &[(&str, f64)],
    overrides: &[String],
) -> Result<BTreeMap<String, f64>, String> {
    let mut table: BTreeMap<String, f64> =
        defaults.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    for kv in overrides {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| format!("malformed --tol '{}', expected KEY=VAL", kv))?;
        if !table.contains_key(k) {
            let known: Vec<&str> = defaults.iter().map(|(k, _)| *k).collect();
            return Err(format!(
                "unknown tolerance key '{}' (known: {})",
                k,
                known.join(", ")
            ));
        }
        let val: f64 = v.parse().map_err(|_| format!("bad tolerance value '{}'", v))?;
        table.insert(k.to_string(), val);
    }
    Ok(table)
}

/// Parse a weight: comma-separated coordinates, each RE or RE:IM.
fn parse_weight(s: &str) -> Result<Weight, String> {
    let mut coords = Vec::new();
    for part in s.split(',') {
        let c = match part.split_once(':') {
            Some((re, im)) => Complex64::new(
                re.trim().parse().map_err(|_| format!("bad coordinate '{}'", part))?,
                im.trim().parse().map_err(|_| format!("bad coordinate '{}'", part))?,
            ),
            None => Complex64::new(
                part.trim().parse().map_err(|_| format!("bad coordinate '{}'", part))?,
                0.0,
            ),
        };
        coords.push(c);
    }
    Ok(Weight(coords))
}

fn weight_json(w: &Weight) -> Value {
    Value::Array(w.0.iter().map(|c| json!([c.re, c.im])).collect())
}

fn parse_descriptor(id: &str) -> Result<GroupDescriptor, String> {
    GroupDescriptor::from_id(id).map_err(|e| format!("bad descriptor '{}': {:?}", id, e))
}

/// Resize a weight to the a-dimension of the descriptor by repeating a
/// single given coordinate, so scalar inputs work for every catalogue kind.
fn fit_weight(w: Weight, dim: usize) -> Result<Weight, String> {
    if w.0.len() == dim {
        Ok(w)
    } else if w.0.len() == 1 {
        Ok(Weight(vec![w.0[0]; dim]))
    } else {
        Err(format!("weight has {} coordinates, descriptor needs {}", w.0.len(), dim))
    }
}

fn parse_function(spec: &str, coords: usize) -> Result<SphereFunction, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        ["const"] => Ok(SphereFunction::Const),
        ["coord", i] => Ok(SphereFunction::Coord(
            i.parse().map_err(|_| format!("bad coordinate index '{}'", i))?,
        )),
        ["harmonic", l, m] => Ok(SphereFunction::Harmonic {
            l: l.parse().map_err(|_| format!("bad degree '{}'", l))?,
            m: m.parse().map_err(|_| format!("bad order '{}'", m))?,
        }),
        ["gauss"] => {
            let mut center = vec![0.0; coords];
            center[0] = 0.4;
            center[coords - 1] = -0.7;
            Ok(SphereFunction::Gaussian { center, width: 1.4 })
        }
        ["gauss", cs] => {
            let center: Result<Vec<f64>, _> = cs.split(',').map(|c| c.trim().parse()).collect();
            let center = center.map_err(|_| format!("bad gauss center '{}'", cs))?;
            if center.len() != coords {
                return Err(format!(
                    "gauss center has {} coordinates, the sphere needs {}",
                    center.len(),
                    coords
                ));
            }
            Ok(SphereFunction::Gaussian { center, width: 1.4 })
        }
        _ => Err(format!(
            "unknown function preset '{}' (const | coord:i | harmonic:l:m | gauss[:c0,...])",
            spec
        )),
    }
}

fn read_subspace_csv(path: &str) -> Result<Vec<Vec<f64>>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {}", path, e))?;
    let mut rows = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row: Result<Vec<f64>, _> = line.split(',').map(|c| c.trim().parse()).collect();
        let row = row.map_err(|_| format!("{}:{}: malformed number", path, ln + 1))?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(format!("{}: no data rows", path));
    }
    let w = rows[0].len();
    if rows.iter().any(|r| r.len() != w) {
        return Err(format!("{}: ragged rows", path));
    }
    Ok(rows)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut rep = Reporter {
        records: Vec::new(),
        human: !cli.common.json,
        t0: Instant::now(),
    };
    let res = run(&cli.command, &cli.common, &mut rep);
    match res {
        Err(msg) => usage_error(&msg),
        Ok(()) => match rep.finish(&cli.common.out) {
            Err(e) => usage_error(&format!("cannot write report: {}", e)),
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::from(1),
        },
    }
}

fn run(cmd: &Command, common: &Common, rep: &mut Reporter) -> Result<(), String> {
    match cmd {
        Command::CheckConditions { descriptor } => {
            let d = parse_descriptor(descriptor)?;
            let tols = tolerances(&[("witness", 1e-9)], &common.tol)?;
            let g = d.check_condition_g();
            let h = d.check_condition_h();
            let sw = d.check_sigma_w0();
            let dd = check_condition_d(&d);
            let pass = g.holds && h.holds && sw.holds && dd.holds == dd.analytic;
            rep.push(Record {
                command: "check-conditions".into(),
                descriptor: descriptor.clone(),
                inputs: BTreeMap::new(),
                outputs: [
                    ("G".to_string(), json!(g.holds)),
                    ("H".to_string(), json!(h.holds)),
                    ("D".to_string(), json!(dd.analytic)),
                    ("sigma_w0".to_string(), json!(sw.holds)),
                ]
                .into(),
                residuals: [
                    ("G_witness".to_string(), g.witness),
                    ("H_witness".to_string(), h.witness),
                    ("sigma_w0_witness".to_string(), sw.witness),
                ]
                .into(),
                tolerances: tols,
                pass,
            });
        }
        Command::EvalKernel { descriptor, alpha, beta, samples } => {
            let d = parse_descriptor(descriptor)?;
            let tols = tolerances(&[("invariance", 1e-9)], &common.tol)?;
            let p = KernelParams {
                alpha: fit_weight(parse_weight(alpha)?, d.a_dim())?,
                beta: fit_weight(parse_weight(beta)?, d.a_dim())?,
            };
            let mut rng = Rng::seeded(common.seed);
            let mut values = Vec::new();
            let mut max_res = 0.0_f64;
            let mut in_domain = 0usize;
            for _ in 0..*samples {
                let g = d.random_element(sbo_core::groups::Scope::G, &mut rng).mat;
                let h = d.random_element(sbo_core::groups::Scope::H, &mut rng).mat;
                match kernel_eval(&d, &g, &h, &p) {
                    Ok(v) => {
                        in_domain += 1;
                        // spot check of invariance under the diagonal action
                        let hp = d.random_element(sbo_core::groups::Scope::H, &mut rng).mat;
                        if let Ok(v2) = kernel_eval(&d, &hp.matmul(&g), &hp.matmul(&h), &p) {
                            max_res = max_res.max((v - v2).norm() / v.norm().max(1e-12));
                        }
                        values.push(json!([v.re, v.im]));
                    }
                    Err(_) => values.push(Value::Null),
                }
            }
            let pass = in_domain > 0 && max_res < tols["invariance"];
            rep.push(Record {
                command: "eval-kernel".into(),
                descriptor: descriptor.clone(),
                inputs: [
                    ("alpha".to_string(), weight_json(&p.alpha)),
                    ("beta".to_string(), weight_json(&p.beta)),
                    ("samples".to_string(), json!(samples)),
                    ("seed".to_string(), json!(common.seed)),
                ]
                .into(),
                outputs: [
                    ("values".to_string(), Value::Array(values)),
                    ("in_domain".to_string(), json!(in_domain)),
                    ("convergent_regime".to_string(), json!(p.convergent(&d))),
                ]
                .into(),
                residuals: [("invariance".to_string(), max_res)].into(),
                tolerances: tols,
                pass,
            });
        }
        Command::CheckDomain { descriptor } => {
            let d = parse_descriptor(descriptor)?;
            let tols = tolerances(&[], &common.tol)?;
            let c = check_condition_d(&d);
            rep.push(Record {
                command: "check-domain".into(),
                descriptor: descriptor.clone(),
                inputs: BTreeMap::new(),
                outputs: [
                    ("D".to_string(), json!(c.analytic)),
                    ("empirical".to_string(), json!(c.holds)),
                ]
                .into(),
                residuals: BTreeMap::new(),
                tolerances: tols,
                // a negative answer is a valid answer; the check fails only
                // if the empirical probe disagrees with the closed form
                pass: c.holds == c.analytic,
            });
        }
        Command::Orbits { descriptor, subspace } => {
            let d = parse_descriptor(descriptor)?;
            let tols = tolerances(&[], &common.tol)?;
            if let Some(path) = subspace {
                let rows = read_subspace_csv(path)?;
                let dim = rows[0].len();
                if dim % 4 != 0 {
                    return Err(format!(
                        "spanning vectors have length {}, expected a multiple of 4",
                        dim
                    ));
                }
                let n = dim / 4;
                let mut span = RMat::zeros(dim, rows.len());
                for (j, row) in rows.iter().enumerate() {
                    for (i, v) in row.iter().enumerate() {
                        span.set(i, j, *v);
                    }
                }
                let c = classify_gl(n, &span)
                    .map_err(|e| format!("subspace classification failed: {:?}", e))?;
                let open = (c.k, c.l1, c.l2, c.m) == (2 * n, 0, n, n);
                rep.push(Record {
                    command: "orbits".into(),
                    descriptor: descriptor.clone(),
                    inputs: [
                        ("subspace".to_string(), json!(path)),
                        ("n".to_string(), json!(n)),
                    ]
                    .into(),
                    outputs: [
                        ("k".to_string(), json!(c.k)),
                        ("l1".to_string(), json!(c.l1)),
                        ("l2".to_string(), json!(c.l2)),
                        ("m".to_string(), json!(c.m)),
                        ("open".to_string(), json!(open)),
                    ]
                    .into(),
                    residuals: [("spectral_gap_inv".to_string(), 1.0 / c.spectral_gap)].into(),
                    tolerances: tols,
                    pass: true,
                });
                return Ok(());
            }
            let mut rng = Rng::seeded(common.seed);
            let count = nsigma_orbit_count(&d, &mut rng)
                .map_err(|e| format!("orbit count unavailable: {:?}", e))?;
            let (kind, count_val) = match count {
                NsigmaOrbits::Count(c) => ("count", c),
                NsigmaOrbits::Strata(c) => ("strata", c),
            };
            let mut outputs: BTreeMap<String, Value> = [
                ("nsigma_orbits".to_string(), json!(count_val)),
                ("nsigma_kind".to_string(), json!(kind)),
            ]
            .into();
            let mut pass = true;
            if matches!(d.kind, sbo_core::groups::Kind::Rank1 { .. }) {
                let idm = Mat::identity(d.field, d.ambient);
                let n0 = d.basis_n_minus_sigma[0]
                    .nil_exp()
                    .map_err(|e| format!("{:?}", e))?;
                let mut labels = Vec::new();
                for rep_mat in [idm.clone(), d.w0_mat.clone(), n0.matmul(&d.w0_mat)] {
                    let label = classify_rank1(&d, &rep_mat, &idm)
                        .map_err(|e| format!("classification failed: {:?}", e))?;
                    labels.push(json!(format!("{:?}", label)));
                }
                pass = labels.len() == 3;
                outputs.insert("representative_labels".to_string(), Value::Array(labels));
            }
            rep.push(Record {
                command: "orbits".into(),
                descriptor: descriptor.clone(),
                inputs: [("seed".to_string(), json!(common.seed))].into(),
                outputs,
                residuals: BTreeMap::new(),
                tolerances: tols,
                pass,
            });
        }
        Command::EnumerateGl { n } => {
            if *n == 0 {
                return Err("n must be positive".into());
            }
            let tols = tolerances(&[], &common.tol)?;
            for o in enumerate_gl(*n) {
                let open = (o.k, o.l1, o.l2, o.m) == (2 * n, 0, *n, *n);
                let c = classify_gl(*n, &o.representative())
                    .map_err(|e| format!("representative failed to classify: {:?}", e))?;
                let round_trip = (c.k, c.l1, c.l2, c.m) == (o.k, o.l1, o.l2, o.m);
                rep.push(Record {
                    command: "enumerate-gl".into(),
                    descriptor: format!("gl4R:gl2C:{}", n),
                    inputs: [("n".to_string(), json!(n))].into(),
                    outputs: [
                        ("k".to_string(), json!(o.k)),
                        ("l1".to_string(), json!(o.l1)),
                        ("l2".to_string(), json!(o.l2)),
                        ("m".to_string(), json!(o.m)),
                        ("open".to_string(), json!(open)),
                        ("round_trip".to_string(), json!(round_trip)),
                    ]
                    .into(),
                    residuals: BTreeMap::new(),
                    tolerances: tols.clone(),
                    pass: round_trip,
                });
            }
        }
        Command::VerifyIntertwiner { descriptor, alpha, beta, function } => {
            let d = parse_descriptor(descriptor)?;
            let default_tol = match common.order {
                o if o >= 40 => 1e-5,
                o if o >= 30 => 1e-4,
                o if o >= 20 => 1e-3,
                _ => 1e-2,
            };
            let tols = tolerances(&[("intertwining", default_tol)], &common.tol)?;
            let sd = sphere_dim(&d).map_err(|e| format!("{:?}", e))?;
            let p = KernelParams {
                alpha: fit_weight(parse_weight(alpha)?, d.a_dim())?,
                beta: fit_weight(parse_weight(beta)?, d.a_dim())?,
            };
            let f = parse_function(function, sd + 1)?;
            let rule = quad_rule(sd, common.order, common.seed ^ 0x9e37_79b9)
                .map_err(|e| format!("{:?}", e))?;
            let op = boundary_operator(&d, &rule, &p).map_err(|e| format!("{:?}", e))?;
            let r = intertwining_residual_with(&d, &op, &f, common.seed)
                .map_err(|e| format!("{:?}", e))?;
            let pass = r < tols["intertwining"];
            rep.push(Record {
                command: "verify-intertwiner".into(),
                descriptor: descriptor.clone(),
                inputs: [
                    ("alpha".to_string(), weight_json(&p.alpha)),
                    ("beta".to_string(), weight_json(&p.beta)),
                    ("function".to_string(), json!(function)),
                    ("order".to_string(), json!(common.order)),
                    ("seed".to_string(), json!(common.seed)),
                ]
                .into(),
                outputs: [
                    ("nodes".to_string(), json!(op.node_count())),
                    ("convergent_regime".to_string(), json!(p.convergent(&d))),
                ]
                .into(),
                residuals: [("intertwining".to_string(), r)].into(),
                tolerances: tols,
                pass,
            });
        }
        Command::KnappStein { descriptor, alpha, degree } => {
            let d = parse_descriptor(descriptor)?;
            let tols = tolerances(&[("eigenvalue", 1e-7), ("spread", 1e-7)], &common.tol)?;
            let sd = sphere_dim(&d).map_err(|e| format!("{:?}", e))?;
            let rule = quad_rule(sd, common.order, common.seed ^ 0x9e37_79b9)
                .map_err(|e| format!("{:?}", e))?;
            let r = knapp_stein_ktype_check(&d, &rule, *alpha, *degree, 0.0)
                .map_err(|e| format!("{:?}", e))?;
            let err = (r.eigenvalue - r.oracle).abs();
            let pass = err < tols["eigenvalue"] && r.spread < tols["spread"];
            rep.push(Record {
                command: "knapp-stein".into(),
                descriptor: descriptor.clone(),
                inputs: [
                    ("alpha".to_string(), json!(alpha)),
                    ("degree".to_string(), json!(degree)),
                    ("order".to_string(), json!(common.order)),
                    ("seed".to_string(), json!(common.seed)),
                ]
                .into(),
                outputs: [
                    ("eigenvalue".to_string(), json!(r.eigenvalue)),
                    ("oracle".to_string(), json!(r.oracle)),
                ]
                .into(),
                residuals: [
                    ("eigenvalue".to_string(), err),
                    ("spread".to_string(), r.spread),
                ]
                .into(),
                tolerances: tols,
                pass,
            });
        }
        Command::Params { descriptor, alpha, beta } => {
            let d = parse_descriptor(descriptor)?;
            let tols = tolerances(&[("roundtrip", 1e-12)], &common.tol)?;
            let p = KernelParams {
                alpha: fit_weight(parse_weight(alpha)?, d.a_dim())?,
                beta: fit_weight(parse_weight(beta)?, d.a_dim())?,
            };
            let i = params_to_induction(&d, &p);
            // round trip where the inverse is available
            let mut roundtrip = 0.0_f64;
            let mut invertible = false;
            if let Ok(p2) = sbo_core::kernel::induction_to_params(&d, &i) {
                invertible = true;
                let i2 = params_to_induction(&d, &p2);
                roundtrip = i.nu.distance(&i2.nu).max(i.nu_prime.distance(&i2.nu_prime));
            }
            let pass = !invertible || roundtrip < tols["roundtrip"];
            rep.push(Record {
                command: "params".into(),
                descriptor: descriptor.clone(),
                inputs: [
                    ("alpha".to_string(), weight_json(&p.alpha)),
                    ("beta".to_string(), weight_json(&p.beta)),
                ]
                .into(),
                outputs: [
                    ("nu".to_string(), weight_json(&i.nu)),
                    ("nu_prime".to_string(), weight_json(&i.nu_prime)),
                    ("invertible".to_string(), json!(invertible)),
                ]
                .into(),
                residuals: [("roundtrip".to_string(), roundtrip)].into(),
                tolerances: tols,
                pass,
            });
        }
    }
    Ok(())
}
