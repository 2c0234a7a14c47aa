//! The `compare` command: both estimators, sequential scheme, one CSV row
//! per instance, seed and method.

use std::time::Duration;

use dagrel_core::json::format_f64;
use dagrel_core::{
    direct_estimate, generate_del, generate_tc, path_mc_estimate, preprocess, DelParams, Error,
    EstimateResult, Method, RandomStream, ReliabilityNetwork, RunOptions, StoppingScheme, TcParams,
};

use crate::args::CompareArgs;
use crate::commands::{accuracy, influence, load_graph, print_line};
use crate::{CmdResult, Failure};

pub const HEADER: &str = "instance_id,n,m,w_omega,method,estimate,samples_used,elapsed_ms,seed,status";

struct Instance {
    id: String,
    net: Result<ReliabilityNetwork, String>,
}

fn list(key: &str, raw: &str) -> Result<Vec<f64>, Failure> {
    raw.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Failure::usage(format!("sweep key {key}: bad number {v:?}")))
        })
        .collect()
}

/// Expands `family:key=v1,v2:key=v` into one instance per combination.
fn expand_sweep(spec: &str) -> Result<Vec<Instance>, Failure> {
    let mut parts = spec.split(':');
    let family = parts.next().unwrap_or_default();
    let mut keys: Vec<(String, Vec<f64>)> = Vec::new();
    for part in parts {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Failure::usage(format!("sweep part {part:?} is not key=values")))?;
        keys.push((k.to_string(), list(k, v)?));
    }
    let allowed: &[&str] = match family {
        "tc" => &["n", "alpha", "degree", "gen-seed"],
        "del" => &["n", "q", "gen-seed"],
        _ => return Err(Failure::usage(format!("unknown sweep family {family:?}"))),
    };
    if let Some((k, _)) = keys.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
        return Err(Failure::usage(format!("unknown {family} sweep key {k:?}")));
    }
    let get = |k: &str, default: Option<f64>| -> Result<Vec<f64>, Failure> {
        match keys.iter().find(|(key, _)| key == k) {
            Some((_, v)) => Ok(v.clone()),
            None => default
                .map(|d| vec![d])
                .ok_or_else(|| Failure::usage(format!("{family} sweep needs {k}="))),
        }
    };
    let mut out = Vec::new();
    let ns = get("n", None)?;
    let seeds = get("gen-seed", Some(1.0))?;
    match family {
        "tc" => {
            for &n in &ns {
                for &alpha in &get("alpha", None)? {
                    for &degree in &get("degree", Some(10.0))? {
                        for &seed in &seeds {
                            let p = TcParams {
                                n: n as usize,
                                alpha,
                                target_degree: degree,
                                seed: seed as u64,
                            };
                            out.push(Instance {
                                id: format!("tc-n{n}-alpha{alpha}-degree{degree}-seed{seed}"),
                                net: generate_tc(&p).map_err(|e| e.to_string()),
                            });
                        }
                    }
                }
            }
        }
        _ => {
            for &n in &ns {
                for &q in &get("q", None)? {
                    for &seed in &seeds {
                        let p = DelParams {
                            n: n as usize,
                            q_bar: q,
                            seed: seed as u64,
                        };
                        out.push(Instance {
                            id: format!("del-n{n}-q{q}-seed{seed}"),
                            net: generate_del(&p).map_err(|e| e.to_string()),
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

struct Row<'a> {
    id: &'a str,
    n: Option<usize>,
    m: Option<usize>,
    w_omega: Option<f64>,
    method: Method,
    estimate: Option<f64>,
    samples_used: Option<u64>,
    elapsed_ms: Option<f64>,
    seed: u64,
    status: &'a str,
}

impl Row<'_> {
    fn to_csv(&self) -> String {
        let f = |v: Option<f64>| v.map(format_f64).unwrap_or_default();
        let u = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
        [
            self.id.to_string(),
            u(self.n.map(|x| x as u64)),
            u(self.m.map(|x| x as u64)),
            f(self.w_omega),
            self.method.as_str().to_string(),
            f(self.estimate),
            u(self.samples_used),
            f(self.elapsed_ms),
            self.seed.to_string(),
            self.status.to_string(),
        ]
        .join(",")
    }
}

pub fn run(args: CompareArgs) -> CmdResult {
    let acc = accuracy(args.accuracy.eps, args.accuracy.delta)?;
    if args.graphs.is_empty() && args.sweep.is_empty() {
        return Err(Failure::usage("give graph files and/or --sweep"));
    }
    let mut instances = Vec::new();
    for path in &args.graphs {
        instances.push(Instance {
            id: path.display().to_string(),
            net: load_graph(path).map_err(|f| format!("{:#}", f.error)),
        });
    }
    for spec in &args.sweep {
        instances.extend(expand_sweep(spec)?);
    }
    let methods = [Method::Direct, Method::path(influence(args.influence))];
    let scheme = StoppingScheme::SequentialAa(acc);
    let options = RunOptions {
        workers: 1,
        max_samples: args.max_samples,
    };

    print_line(HEADER)?;
    for inst in &instances {
        let net = match &inst.net {
            Ok(net) => net,
            Err(msg) => {
                log::warn!("{}: {msg}", inst.id);
                for &seed in &args.seeds {
                    for &method in &methods {
                        print_line(&failed_row(&inst.id, None, method, seed, "error"))?;
                    }
                }
                continue;
            }
        };
        let pre = preprocess(net);
        for &seed in &args.seeds {
            for &method in &methods {
                let base = Row {
                    id: &inst.id,
                    n: Some(net.vertex_count()),
                    m: Some(net.edge_count()),
                    w_omega: Some(pre.as_ref().map_or(0.0, |p| p.w_omega())),
                    method,
                    estimate: None,
                    samples_used: None,
                    elapsed_ms: None,
                    seed,
                    status: "ok",
                };
                let pre = match &pre {
                    Ok(pre) => pre,
                    Err(Error::ZeroReliability) => {
                        let r = EstimateResult::zero_reliability(method, &scheme, seed);
                        print_line(&finished(base, &r, args.timing, "zero_reliability").to_csv())?;
                        continue;
                    }
                    Err(e) => {
                        log::warn!("{}: {e}", inst.id);
                        print_line(&Row { status: "error", ..base }.to_csv())?;
                        continue;
                    }
                };
                let rng = RandomStream::new(seed);
                let outcome = match method {
                    Method::Direct => direct_estimate(pre, &scheme, &rng, &options),
                    Method::PathPsi => path_mc_estimate(
                        pre,
                        dagrel_core::Influence::Psi,
                        &scheme,
                        &rng,
                        &options,
                    ),
                    Method::PathXi => {
                        path_mc_estimate(pre, dagrel_core::Influence::Xi, &scheme, &rng, &options)
                    }
                };
                let row = match outcome {
                    Ok(r) => finished(base, &r, args.timing, "ok"),
                    Err(Error::StreamExhausted(used)) => Row {
                        samples_used: Some(used),
                        status: "budget_exceeded",
                        ..base
                    },
                    Err(e) => {
                        log::warn!("{} seed {seed} {method}: {e}", inst.id);
                        Row { status: "error", ..base }
                    }
                };
                print_line(&row.to_csv())?;
            }
        }
    }
    Ok(())
}

fn finished<'a>(base: Row<'a>, r: &EstimateResult, timing: bool, status: &'a str) -> Row<'a> {
    let elapsed = if timing { r.elapsed } else { Duration::ZERO };
    Row {
        estimate: Some(r.estimate),
        samples_used: Some(r.samples_used),
        elapsed_ms: Some(elapsed.as_secs_f64() * 1e3),
        status,
        ..base
    }
}

fn failed_row(id: &str, n: Option<usize>, method: Method, seed: u64, status: &str) -> String {
    Row {
        id,
        n,
        m: None,
        w_omega: None,
        method,
        estimate: None,
        samples_used: None,
        elapsed_ms: None,
        seed,
        status,
    }
    .to_csv()
}
