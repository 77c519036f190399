mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use netsym_core::graphs::connected_graphs;
use netsym_core::network::{agrees_with_base, equal_marginals, standard_inflation, InflationKind, Network, NodeCopy};
use netsym_core::nogo::{observation1_scan, DEFAULT_SCAN_CAP};
use netsym_core::states::DenseState;
use netsym_core::witness::{cluster_square_tau_witness, cluster_square_witness, ghz_triangle_witness, Witness};

fn parties(net: &Network) -> Vec<Vec<usize>> {
    net.sources().iter().map(|s| s.parties.clone()).collect()
}

fn never_violated(net: &Network, witnesses: &[Witness], seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = net.num_nodes();
    let p = parties(net);
    let states: Vec<CMat> = p.iter().map(|roles| random_density(roles.len(), rng.random_range(1..=2), &mut rng)).collect();
    let unitaries: Vec<CMat> = (0..n)
        .map(|v| {
            let width = p.iter().filter(|r| r.contains(&v)).count();
            random_unitary(1 << width, &mut rng)
        })
        .collect();
    let rho = local_channel_network_state(n, &p, &states, &unitaries);
    assert!((rho.trace().re - 1.0).abs() < 1e-9);
    let s = DenseState::from_density(vec![2; n], rho.clone()).unwrap();
    for w in witnesses {
        let r = w.evaluate(&s).unwrap();
        let oracle = witness_lhs(w, &|q| expectation(&rho, q));
        assert!((r.lhs - oracle).abs() < 1e-9, "{}: core {} oracle {}", w.name, r.lhs, oracle);
        assert!(!r.violated, "{} violated: {}", w.name, r.lhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn triangle_with_local_channels(seed in any::<u64>()) {
        never_violated(&Network::triangle(), &[ghz_triangle_witness()], seed);
    }

    #[test]
    fn square_with_local_channels(seed in any::<u64>()) {
        never_violated(&Network::square(), &[cluster_square_witness(), cluster_square_tau_witness()], seed);
    }
}

#[test]
fn oracle_detects_unequal_marginals() {
    // in the rewired triangle, A and C of the first copy share no source copy
    let infl = standard_inflation(&Network::triangle(), InflationKind::Gamma).unwrap();
    let set = [NodeCopy::new(0, 0), NodeCopy::new(2, 0)];
    assert!(!agrees_with_base(&infl, &set).unwrap());
    let reported = equal_marginals(&infl).unwrap();
    assert!(reported.iter().all(|m| !set.iter().all(|x| m.inflation_subset.contains(x))));
    let wiring: Vec<Vec<Vec<(usize, usize)>>> =
        infl.wiring().iter().map(|per| per.iter().map(|e| e.iter().map(|nc| (nc.node, nc.copy)).collect()).collect()).collect();
    let base: Vec<Vec<Vec<(usize, usize)>>> = parties(infl.base()).iter().map(|r| vec![r.iter().map(|&v| (v, 0)).collect()]).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let states: Vec<CMat> = (0..3).map(|_| random_density(2, 1, &mut rng)).collect();
    let lhs = wired_marginal(&wiring, &states, &[(0, 0), (2, 0)]);
    let rhs = wired_marginal(&base, &states, &[(0, 0), (2, 0)]);
    assert!(max_abs_diff(&lhs, &rhs) > 1e-3);
}

#[test]
fn certificates_survive_relabeling() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for g in connected_graphs(6).unwrap().iter().step_by(7) {
        let mut perm: Vec<usize> = (0..6).collect();
        for i in (1..6).rev() {
            perm.swap(i, rng.random_range(0..=i));
        }
        let h = g.permuted(&perm);
        let cert = observation1_scan(&h, DEFAULT_SCAN_CAP).unwrap();
        let cert = cert.certificate().expect("certificate");
        cert.verify(&h).unwrap();
        let t = cert.transformed(&h).unwrap();
        let v = graph_state_vector(6, &t.edges());
        let lhs = witness_lhs(&cert.witness, &|q| (v.adjoint() * pauli_dense(q) * &v)[(0, 0)].re);
        assert!((lhs - 2.0).abs() < 1e-9);
    }
}
