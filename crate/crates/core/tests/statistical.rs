//! Seeded statistical checks of the samplers against exact distributions.

mod common;

use std::collections::HashMap;

use common::{rel_err, small_tc};
use dagrel_core::estimators::{fixed_sample_count_direct, fixed_sample_count_pathmc};
use dagrel_core::oracle::{enumerate_paths, exact_sample_space_weight};
use dagrel_core::{
    direct_estimate, exact_reliability, fixtures, path_mc_estimate, preprocess, Accuracy,
    Influence, RandomStream, ReliabilityNetwork, RunOptions, Sampler, StoppingScheme,
};
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn state_weight(net: &ReliabilityNetwork, mask: u64) -> f64 {
    (0..net.edge_count())
        .map(|e| if mask >> e & 1 == 1 { net.q()[e] } else { net.p(e) })
        .product()
}

/// Intact edges whose tail is reachable from s within `a`.
fn restrict(net: &ReliabilityNetwork, a: u64) -> u64 {
    let order = net.topological_order().unwrap();
    let mut reach = vec![false; net.vertex_count()];
    reach[net.s()] = true;
    let mut kept = 0;
    for v in order {
        if !reach[v] {
            continue;
        }
        for (id, e) in net.edges().iter().enumerate() {
            if e.tail == v && a >> id & 1 == 1 {
                kept |= 1 << id;
                reach[e.head] = true;
            }
        }
    }
    kept
}

/// Exact law of `(γ, revealed intact edges)` under the normalised Ω measure.
fn joint_law(net: &ReliabilityNetwork) -> HashMap<(u64, u64), f64> {
    let paths = enumerate_paths(net).unwrap();
    let w_omega = exact_sample_space_weight(net).unwrap();
    let mut law = HashMap::new();
    for a in 0..1u64 << net.edge_count() {
        let w = state_weight(net, a);
        let r = restrict(net, a);
        for &g in paths.iter().filter(|&&g| g & !a == 0) {
            *law.entry((g, r)).or_insert(0.0) += w / w_omega;
        }
    }
    law
}

fn chi_square_p(net: &ReliabilityNetwork, draws: u64, seed: u64) -> f64 {
    let law = joint_law(net);
    let pre = preprocess(net).unwrap();
    assert_eq!(pre.edge_count(), net.edge_count(), "fixture must not be pruned");
    let mut sampler = Sampler::new(&pre);
    let mut rng = RandomStream::new(seed);
    let mut seen: HashMap<(u64, u64), u64> = HashMap::new();
    for _ in 0..draws {
        let s = sampler.draw_sample(&mut rng);
        let g = s.path.edges.iter().fold(0u64, |m, &e| m | 1 << e);
        let a = s.state.iter().fold(0u64, |m, e| m | 1 << e);
        assert!(law.contains_key(&(g, a)), "outcome outside the support");
        *seen.entry((g, a)).or_insert(0) += 1;
    }
    // bins with expected count below 5 are pooled
    let (mut stat, mut bins) = (0.0, 0);
    let (mut pool_obs, mut pool_exp) = (0.0, 0.0);
    for (key, &p) in &law {
        let expected = p * draws as f64;
        let observed = *seen.get(key).unwrap_or(&0) as f64;
        if expected < 5.0 {
            pool_obs += observed;
            pool_exp += expected;
        } else {
            stat += (observed - expected).powi(2) / expected;
            bins += 1;
        }
    }
    if pool_exp > 0.0 {
        stat += (pool_obs - pool_exp).powi(2) / pool_exp;
        bins += 1;
    }
    assert!(bins >= 2);
    1.0 - ChiSquared::new((bins - 1) as f64).unwrap().cdf(stat)
}

#[test]
fn joint_distribution_matches_oracle() {
    let mut nets = vec![
        fixtures::g3(0.5),
        fixtures::g4(0.5),
        fixtures::g4(0.9),
        fixtures::diamond_chain(2, 0.6),
    ];
    nets.extend(
        small_tc(40, 5)
            .into_iter()
            .map(|(_, n)| n)
            .filter(|n| n.edge_count() <= 12 && enumerate_paths(n).unwrap().len() >= 3)
            .take(2),
    );
    for (i, net) in nets.iter().enumerate() {
        let p = chi_square_p(net, 100_000, 40 + i as u64);
        assert!(p > 1e-3, "instance {i}: p = {p}");
    }
}

#[test]
fn xi_mean_is_reliability_ratio() {
    let net = fixtures::g4(0.7);
    let pre = preprocess(&net).unwrap();
    let r = exact_reliability(&net).unwrap() / exact_sample_space_weight(&net).unwrap();
    let mut sampler = Sampler::new(&pre);
    let mut rng = RandomStream::new(8);
    let n = 200_000;
    let mean = (0..n).map(|_| sampler.draw_influence(&mut rng, Influence::Xi)).sum::<f64>() / n as f64;
    let se = (r * (1.0 - r) / n as f64).sqrt();
    assert!((mean - r).abs() < 4.0 * se, "{mean} vs {r}");
}

#[test]
fn fixed_n_coverage_on_diamond() {
    let (eps, delta, runs) = (0.1, 0.05, 500u64);
    let net = fixtures::g3(0.5);
    let pre = preprocess(&net).unwrap();
    let rel = 0.4375;
    let acc = Accuracy::new(eps, delta).unwrap();
    let direct = StoppingScheme::fixed(fixed_sample_count_direct(eps, delta, rel).unwrap(), acc).unwrap();
    let path = StoppingScheme::fixed(fixed_sample_count_pathmc(eps, delta, 16.0 / 9.0).unwrap(), acc).unwrap();
    let opts = RunOptions::default();
    let (mut ok_direct, mut ok_path) = (0, 0);
    for r in 0..runs {
        let rng = RandomStream::new(r);
        ok_direct += (rel_err(direct_estimate(&pre, &direct, &rng, &opts).unwrap().estimate, rel) <= eps) as u32;
        ok_path += (rel_err(
            path_mc_estimate(&pre, Influence::Psi, &path, &rng, &opts).unwrap().estimate,
            rel,
        ) <= eps) as u32;
    }
    let threshold = (1.0 - delta - 3.0 * (delta * (1.0 - delta) / runs as f64).sqrt()) * runs as f64;
    assert!(ok_direct as f64 >= threshold, "direct {ok_direct}/{runs}");
    assert!(ok_path as f64 >= threshold, "path {ok_path}/{runs}");
}

#[test]
fn worker_counts_agree_in_distribution() {
    let net = fixtures::g4(0.5);
    let pre = preprocess(&net).unwrap();
    let truth = exact_reliability(&net).unwrap();
    let acc = Accuracy::new(0.05, 0.01).unwrap();
    let scheme = StoppingScheme::fixed(400_000, acc).unwrap();
    for workers in [1, 2, 3] {
        let opts = RunOptions { workers, max_samples: None };
        let est = path_mc_estimate(&pre, Influence::Psi, &scheme, &RandomStream::new(4), &opts)
            .unwrap()
            .estimate;
        assert!(rel_err(est, truth) < 0.01, "{workers} workers: {est} vs {truth}");
    }
}
