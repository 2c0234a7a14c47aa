use std::fs;
use std::io::{BufReader, Write};
use std::path::Path;
use std::time::Duration;

use anyhow::Context;
use dagrel_core::bounds::{build_bound_report, karp_luby_bound, MuMode};
use dagrel_core::estimators::{fixed_sample_count_direct, fixed_sample_count_pathmc};
use dagrel_core::json::JsonObject;
use dagrel_core::oracle::exact_summary;
use dagrel_core::{
    direct_estimate, generate_del, generate_tc, path_mc_estimate, preprocess, Accuracy, DelParams,
    Error, EstimateResult, Influence, Method, PreparedNetwork, RandomStream, ReliabilityNetwork,
    RunOptions, StoppingScheme, TcParams,
};

use crate::args::{
    BoundSource, BoundsArgs, EstimateArgs, ExactArgs, Family, GenerateArgs, InfluenceArg,
    MethodArg, MuArg, SchemeArg,
};
use crate::{CmdResult, Failure, EXIT_LIMIT};

pub fn load_graph(path: &Path) -> Result<ReliabilityNetwork, Failure> {
    let file = fs::File::open(path)
        .with_context(|| format!("cannot open {}", path.display()))
        .map_err(Failure::input)?;
    ReliabilityNetwork::read_from(BufReader::new(file)).map_err(|e| Failure {
        code: crate::EXIT_INPUT,
        error: anyhow::Error::new(e).context(format!("{}", path.display())),
    })
}

pub fn print_line(line: &str) -> CmdResult {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{line}").map_err(Failure::input)
}

pub fn accuracy(eps: f64, delta: f64) -> Result<Accuracy, Failure> {
    Ok(Accuracy::new(eps, delta)?)
}

pub fn influence(arg: InfluenceArg) -> Influence {
    match arg {
        InfluenceArg::Psi => Influence::Psi,
        InfluenceArg::Xi => Influence::Xi,
    }
}

pub fn generate(args: GenerateArgs) -> CmdResult {
    let (net, comments, seed, out) = match args.family {
        Family::Del { n, q, seed, out } => {
            let params = DelParams { n, q_bar: q, seed };
            (generate_del(&params)?, params.describe(), seed, out)
        }
        Family::Tc {
            n,
            alpha,
            degree,
            seed,
            out,
        } => {
            let params = TcParams {
                n,
                alpha,
                target_degree: degree,
                seed,
            };
            (generate_tc(&params)?, params.describe(), seed, out)
        }
    };
    fs::write(&out, net.to_dag_string(&comments))
        .with_context(|| format!("cannot write {}", out.display()))
        .map_err(Failure::input)?;
    print_line(
        &JsonObject::new()
            .u64("n", net.vertex_count() as u64)
            .u64("m", net.edge_count() as u64)
            .u64("seed", seed)
            .finish(),
    )
}

fn limit(msg: String) -> Failure {
    Failure {
        code: EXIT_LIMIT,
        error: anyhow::anyhow!(msg),
    }
}

/// Fixed-N sample count for `method` from the chosen bound source.
fn fixed_samples(
    pre: &PreparedNetwork,
    method: MethodArg,
    source: BoundSource,
    acc: Accuracy,
) -> Result<u64, Failure> {
    let (eps, delta) = (acc.epsilon, acc.delta);
    if method == MethodArg::Direct {
        return match source {
            BoundSource::RelLb(lb) => Ok(fixed_sample_count_direct(eps, delta, lb)?),
            _ => Err(Failure::usage(
                "direct fixed-N needs a reliability lower bound: --bound rel-lb:VALUE",
            )),
        };
    }
    let ratio = match source {
        BoundSource::Karp => karp_luby_bound(pre.base()),
        BoundSource::Improved => {
            let report = build_bound_report(pre, eps, delta, None, MuMode::Exact)?;
            if report.improved_bound.is_none() {
                return Err(Failure::usage(
                    "the improved bound needs a uniform edge probability; use karp or given:VALUE",
                ));
            }
            report.best_ratio_bound()
        }
        BoundSource::Given(r) => r,
        BoundSource::RelLb(lb) => {
            if !(lb > 0.0 && lb <= 1.0) {
                return Err(Failure::usage(format!("rel-lb must lie in (0,1], got {lb}")));
            }
            (pre.w_omega() / lb).max(1.0)
        }
    };
    if !ratio.is_finite() {
        return Err(limit(format!("ratio bound {ratio} gives no finite sample count")));
    }
    fixed_sample_count_pathmc(eps, delta, ratio).map_err(|e| match e {
        Error::InvalidParameter(msg) if ratio >= 1.0 => limit(msg),
        e => e.into(),
    })
}

pub fn estimate(args: EstimateArgs) -> CmdResult {
    let acc = accuracy(args.accuracy.eps, args.accuracy.delta)?;
    if args.workers == 0 {
        return Err(Failure::usage("--workers must be at least 1"));
    }
    let source = match (args.scheme, args.bound) {
        (SchemeArg::Fixed, None) => {
            return Err(Failure::usage("--scheme fixed requires --bound"));
        }
        (_, b) => b,
    };
    let method = match args.method {
        MethodArg::Direct => Method::Direct,
        MethodArg::Pathmc => Method::path(influence(args.influence)),
    };
    let net = load_graph(&args.graph)?;
    let pre = match preprocess(&net) {
        Ok(pre) => pre,
        Err(Error::ZeroReliability) => {
            let scheme = match args.scheme {
                SchemeArg::Aa => StoppingScheme::SequentialAa(acc),
                SchemeArg::Fixed => StoppingScheme::FixedN {
                    samples: 0,
                    accuracy: acc,
                },
            };
            let result = EstimateResult::zero_reliability(method, &scheme, args.seed);
            return print_line(&result.to_json());
        }
        Err(e) => return Err(e.into()),
    };
    let scheme = match args.scheme {
        SchemeArg::Aa => StoppingScheme::SequentialAa(acc),
        SchemeArg::Fixed => {
            let source = source.expect("checked above");
            StoppingScheme::fixed(fixed_samples(&pre, args.method, source, acc)?, acc)?
        }
    };
    let options = RunOptions {
        workers: args.workers,
        max_samples: args.max_samples,
    };
    let rng = RandomStream::new(args.seed);
    let mut result = match method {
        Method::Direct => direct_estimate(&pre, &scheme, &rng, &options)?,
        Method::PathPsi => path_mc_estimate(&pre, Influence::Psi, &scheme, &rng, &options)?,
        Method::PathXi => path_mc_estimate(&pre, Influence::Xi, &scheme, &rng, &options)?,
    };
    if !args.timing {
        result.elapsed = Duration::ZERO;
    }
    print_line(&result.to_json())
}

pub fn bounds(args: BoundsArgs) -> CmdResult {
    let acc = accuracy(args.accuracy.eps, args.accuracy.delta)?;
    let net = load_graph(&args.graph)?;
    let pre = match preprocess(&net) {
        Ok(pre) => pre,
        Err(Error::ZeroReliability) => {
            return Err(Failure::input(anyhow::anyhow!(
                "no s-t path: the reliability is zero and no ratio bound exists"
            )))
        }
        Err(e) => return Err(e.into()),
    };
    let mu = match args.mu {
        MuArg::Simple => MuMode::Simple,
        MuArg::Exact => MuMode::Exact,
    };
    let report = build_bound_report(&pre, acc.epsilon, acc.delta, args.rel_lb, mu)?;
    print_line(&report.to_json())
}

pub fn exact(args: ExactArgs) -> CmdResult {
    let net = load_graph(&args.graph)?;
    let summary = exact_summary(&net)?;
    print_line(&summary.to_json())
}
