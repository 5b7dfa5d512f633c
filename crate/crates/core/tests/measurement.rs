use cqpointer::analytic::initial_quantum_density;
use cqpointer::measurement::{decompose_pointer_mixture, sample_measurement};
use cqpointer::PhysicalParams;
use statrs::distribution::{ChiSquared, ContinuousCDF};

#[test]
fn sampled_labels_follow_prior() {
    let p = PhysicalParams::default();
    let mix = decompose_pointer_mixture(&p, 2.0).unwrap();
    let prior = initial_quantum_density(&p);
    let n = 100_000;
    let labels = mix.sample_labels(n, 99);

    // Equal-width bins over ±4σ of each packet; the gap between packets is one bin.
    let edges: Vec<f64> = {
        let mut e = Vec::new();
        for centre in [-p.q0, p.q0] {
            let lo = centre - 4.0 * p.sigma_q;
            e.extend((0..=40).map(|i| lo + i as f64 * 0.2 * p.sigma_q));
        }
        e
    };
    let mut stat = 0.0;
    let mut cells = 0;
    for w in edges.windows(2) {
        let expected = n as f64 * (prior.cdf(w[1]) - prior.cdf(w[0]));
        if expected < 5.0 {
            continue;
        }
        let observed = labels.iter().filter(|q| **q >= w[0] && **q < w[1]).count() as f64;
        stat += (observed - expected).powi(2) / expected;
        cells += 1;
    }
    let dist = ChiSquared::new((cells - 1) as f64).unwrap();
    let p_value = 1.0 - dist.cdf(stat);
    assert!(p_value > 0.01, "chi2 {stat:.1} on {cells} cells, p = {p_value:.4}");
}

#[test]
fn first_sample_of_a_seed_matches_measurement_draw() {
    let p = PhysicalParams::default();
    let mix = decompose_pointer_mixture(&p, 2.0).unwrap();
    let (q, state) = sample_measurement(&mix, 42).unwrap();
    assert_eq!(mix.sample_labels(1, 42)[0], q);
    assert_eq!(state.position(2.0), p.lambda * q * 2.0);
}
