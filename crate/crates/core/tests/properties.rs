//! Cross-module invariants on randomized inputs.

use complexity_core::*;
use proptest::prelude::*;

fn prob_vector(n: usize) -> impl Strategy<Value = ProbVector> {
    let shape = SystemShape::new(n).unwrap();
    prop::collection::vec(1e-3..1.0f64, shape.num_states()).prop_map(move |raw| {
        let total: f64 = raw.iter().sum();
        ProbVector::new(shape, raw.into_iter().map(|v| v / total).collect()).unwrap()
    })
}

fn kernel(n: usize) -> impl Strategy<Value = StochMatrix> {
    let shape = SystemShape::new(n).unwrap();
    let states = shape.num_states();
    prop::collection::vec(1e-3..1.0f64, states * states).prop_map(move |raw| {
        let mut data = raw;
        for row in data.chunks_mut(states) {
            let total: f64 = row.iter().sum();
            for v in row {
                *v /= total;
            }
        }
        StochMatrix::from_rows(shape, data).unwrap()
    })
}

fn weight_matrix(n: usize) -> impl Strategy<Value = WeightMatrix> {
    let shape = SystemShape::new(n).unwrap();
    prop::collection::vec(-1.0..1.0f64, n * n)
        .prop_map(move |w| WeightMatrix::new(shape, w).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn gibbs_inequality(p in prob_vector(2), a in kernel(2), b in kernel(2)) {
        let d = kl_matrices(&p, &a, &b).unwrap();
        prop_assert!(d >= -1e-12);
        prop_assert_eq!(kl_matrices(&p, &a, &a).unwrap(), 0.0);
    }

    #[test]
    fn kl_zero_implies_rows_agree_on_support(p in prob_vector(2), a in kernel(2)) {
        // perturb one supported row: the divergence must move off zero
        let mut data = Vec::new();
        for x in 0..4 {
            data.extend_from_slice(a.row(x));
        }
        data[0] += 0.2;
        data[1] -= 0.2 * data[1] / (1.0 - a.row(0)[0]);
        let total: f64 = data[..4].iter().sum();
        for v in &mut data[..4] {
            *v /= total;
        }
        let b = StochMatrix::from_rows(a.shape(), data).unwrap();
        let d = kl_matrices(&p, &a, &b).unwrap();
        prop_assert!(d > 1e-6, "perturbed kernel at divergence {d}");
    }

    #[test]
    fn entropy_is_concave(p1 in prob_vector(3), p2 in prob_vector(3), lambda in 0.0..1.0f64) {
        let mixed = ProbVector::mix(&[p1.clone(), p2.clone()], &[lambda, 1.0 - lambda]).unwrap();
        prop_assert!(
            mixed.entropy() >= lambda * p1.entropy() + (1.0 - lambda) * p2.entropy() - 1e-12
        );
    }

    #[test]
    fn boltzmann_rows_are_positive_distributions(
        w in weight_matrix(3),
        beta in 0.0..3.0f64,
    ) {
        let k = BoltzmannMachine::new(w, beta).unwrap().transition_matrix();
        prop_assert!(k.is_strictly_positive());
        for x in 0..8 {
            let mass: f64 = k.row(x).iter().sum();
            prop_assert!((mass - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn stationary_point_is_start_independent(
        w in weight_matrix(2),
        beta in 0.1..2.0f64,
        start in prob_vector(2),
    ) {
        let k = BoltzmannMachine::new(w, beta).unwrap().transition_matrix();
        let tol = 1e-10;
        let p = stationary_distribution(&k, tol, 1_000_000).unwrap();
        // independent route: plain power iteration from an arbitrary start
        let mut q = start.probs().to_vec();
        for _ in 0..200_000 {
            let mut next = vec![0.0; 4];
            for (x, &qx) in q.iter().enumerate() {
                for (acc, &kv) in next.iter_mut().zip(k.row(x)) {
                    *acc += qx * kv;
                }
            }
            let moved: f64 = next
                .iter()
                .zip(&q)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            q = next;
            if moved < 1e-14 {
                break;
            }
        }
        for x in 0..4 {
            prop_assert!((p.get(x) - q[x]).abs() < 10.0 * tol);
        }
    }

    #[test]
    fn deterministic_map_is_the_cold_limit(w in weight_matrix(3)) {
        let map = w.deterministic_map();
        let hot = BoltzmannMachine::new(w.clone(), 50.0).unwrap().transition_matrix();
        for x in 0..8usize {
            let near_tie = w.local_fields(x).iter().any(|h| h.abs() < 1e-6);
            if near_tie {
                continue;
            }
            let argmax = hot
                .row(x)
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                .unwrap()
                .0;
            prop_assert_eq!(argmax, map.next(x));
        }
    }

    #[test]
    fn attractor_basins_partition_the_state_space(w in weight_matrix(3)) {
        let map = w.deterministic_map();
        let attractors = map.attractors();
        prop_assert_eq!(attractors.basin_sizes().iter().sum::<usize>(), 8);
        let mut seen = [false; 8];
        for cycle in attractors.cycles() {
            for (i, &s) in cycle.iter().enumerate() {
                prop_assert!(!seen[s], "state in two cycles");
                seen[s] = true;
                // applying the map walks the cycle and returns to the start
                prop_assert_eq!(map.next(s), cycle[(i + 1) % cycle.len()]);
            }
        }
    }

    #[test]
    fn vertex_mixes_stay_stationary(w in weight_matrix(3), raw in prop::collection::vec(1e-3..1.0f64, 8)) {
        let map = w.deterministic_map();
        let kernel = map.to_stoch_matrix();
        let vertices = map.attractors().stationary_vertices();
        let lambda: Vec<f64> = {
            let cut = &raw[..vertices.len()];
            let total: f64 = cut.iter().sum();
            cut.iter().map(|v| v / total).collect()
        };
        let p = ProbVector::mix(&vertices, &lambda).unwrap();
        let mut image = [0.0f64; 8];
        for (x, &mass) in p.probs().iter().enumerate() {
            if mass > 0.0 {
                for (acc, &kv) in image.iter_mut().zip(kernel.row(x)) {
                    *acc += mass * kv;
                }
            }
        }
        for x in 0..8 {
            prop_assert!((image[x] - p.get(x)).abs() < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn node_projection_recovers_the_entropic_form(p in prob_vector(3), k in kernel(3)) {
        let r = project(&p, &k, SplitManifold::NodeWise, 1e-10, 200_000).unwrap();
        let flow = total_information_flow(&JointDist::from_pair(&p, &k));
        prop_assert!((r.divergence_bits - flow).abs() < 1e-6);
    }

    #[test]
    fn output_projection_recovers_mutual_information(p in prob_vector(3), k in kernel(3)) {
        let r = project(&p, &k, SplitManifold::Output, 1e-10, 200_000).unwrap();
        let i = mutual_information(&JointDist::from_pair(&p, &k));
        prop_assert!((r.divergence_bits - i).abs() < 1e-6);
    }

    #[test]
    fn phi_never_exceeds_either_parent_divergence(p in prob_vector(2), k in kernel(2)) {
        let d1 = project(&p, &k, SplitManifold::NodeWise, 1e-9, 200_000).unwrap().divergence_bits;
        let d2 = project(&p, &k, SplitManifold::Output, 1e-9, 200_000).unwrap().divergence_bits;
        let d3 = project(&p, &k, SplitManifold::NodeWiseOutput, 1e-9, 200_000).unwrap().divergence_bits;
        prop_assert!(d3 >= -1e-12);
        prop_assert!(d3 <= d1 + 1e-6);
        prop_assert!(d3 <= d2 + 1e-6);
    }

    #[test]
    fn projected_rows_stay_normalized(p in prob_vector(2), k in kernel(2)) {
        let r = project(&p, &k, SplitManifold::NodeWiseOutput, 1e-9, 200_000).unwrap();
        for x in 0..4 {
            let mass: f64 = r.q.row(x).iter().sum();
            prop_assert!((mass - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn capacity_stays_within_the_node_budget(w in weight_matrix(3)) {
        let map = w.deterministic_map();
        let kernel = map.to_stoch_matrix();
        let vertices = map.attractors().stationary_vertices();
        let r = complexity_capacity(&kernel, &vertices, 1e-6, 2_000_000).unwrap();
        prop_assert!(r.capacity_bits >= -1e-9);
        prop_assert!(r.capacity_bits <= 3.0 + 1e-9);
        let mass: f64 = r.vertex_weights.iter().sum();
        prop_assert!((mass - 1.0).abs() < 1e-10);
    }

    #[test]
    fn csv_roundtrips(p in prob_vector(2), k in kernel(2)) {
        let p2 = ProbVector::from_csv_str(&p.to_csv_string()).unwrap();
        for x in 0..4 {
            prop_assert!((p.get(x) - p2.get(x)).abs() < 1e-15);
        }
        let k2 = StochMatrix::from_csv_str(&k.to_csv_string()).unwrap();
        for x in 0..4 {
            for y in 0..4 {
                prop_assert!((k.get(x, y) - k2.get(x, y)).abs() < 1e-15);
            }
        }
    }
}
