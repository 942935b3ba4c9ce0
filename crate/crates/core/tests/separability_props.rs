use lpbounds::mub::MubFamily;
use lpbounds::quantum::{m_infinity, random_density_with, seeded_rng, State};
use lpbounds::separability::{
    correlation_observables, max_entangled_state, random_separable_with, separability_statistic,
    statistic_for_observables, CorrelationObservable, Verdict,
};
use proptest::prelude::*;

fn dims() -> impl Strategy<Value = usize> {
    prop_oneof![Just(2usize), Just(3usize)]
}

/// `p |Phi><Phi| + (1 - p) 1/D^2`
fn isotropic(d: usize, p: f64) -> State {
    let phi = max_entangled_state(d).unwrap();
    let mixed = State::maximally_mixed(d * d);
    State::mixture(&[(p, &phi), (1.0 - p, &mixed)]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn per_basis_convexity(d in dims(), seed in any::<u64>(), n in 2..5usize) {
        let f = MubFamily::for_dim(d).unwrap();
        let mut rng = seeded_rng(seed, 0);
        let parts: Vec<State> = (0..n).map(|k| random_density_with(d * d, 1 + k % (d * d), &mut rng).unwrap()).collect();
        let w = lpbounds::quantum::random_simplex_weights(n, &mut rng);
        let mix = State::mixture(&w.iter().copied().zip(&parts).collect::<Vec<_>>()).unwrap();
        let r_mix = separability_statistic(&mix, &f).unwrap();
        let reports: Vec<_> = parts.iter().map(|s| separability_statistic(s, &f).unwrap()).collect();
        for i in 0..=d {
            let bound: f64 = w.iter().zip(&reports).map(|(wk, r)| wk * r.per_basis_m_inf[i]).sum();
            prop_assert!(r_mix.per_basis_m_inf[i] <= bound + 1e-9);
        }
    }

    #[test]
    fn verdict_invariant_under_relabeling(d in dims(), seed in any::<u64>(), shift in 0..5usize, entangled in any::<bool>()) {
        let f = MubFamily::for_dim(d).unwrap();
        let obs = correlation_observables(&f).unwrap();
        let rho = if entangled {
            isotropic(d, 0.5 + (seed % 1000) as f64 / 2000.0)
        } else {
            random_separable_with(d, 3, &mut seeded_rng(seed, 0)).unwrap()
        };
        // the same cyclic relabeling applied to every observable, plus a reversal
        let relabeled: Vec<CorrelationObservable> = obs
            .iter()
            .map(|o| {
                let mut elements = o.elements.clone();
                elements.rotate_left(shift % d);
                elements.reverse();
                CorrelationObservable { elements, ..o.clone() }
            })
            .collect();
        let a = statistic_for_observables(&rho, &obs).unwrap();
        let b = statistic_for_observables(&rho, &relabeled).unwrap();
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert!((a.lhs - b.lhs).abs() <= 1e-12);
    }

    #[test]
    fn product_majorization(d in dims(), seed in any::<u64>()) {
        let f = MubFamily::for_dim(d).unwrap();
        let obs = correlation_observables(&f).unwrap();
        let mut rng = seeded_rng(seed, 0);
        let ra = 1 + (seed as usize) % d;
        let rb = 1 + (seed as usize / 7) % d;
        let a = random_density_with(d, ra, &mut rng).unwrap();
        let b = random_density_with(d, rb, &mut rng).unwrap();
        let ab = a.tensor(&b);
        for (i, o) in obs.iter().enumerate() {
            let joint = o.m_infinity(&ab).unwrap();
            let ma = m_infinity(&f.pvm(i).unwrap(), &a).unwrap();
            let mb = m_infinity(&f.conj_pvm(i).unwrap(), &b).unwrap();
            prop_assert!(joint <= ma.min(mb) + 1e-9);
        }
    }

    #[test]
    fn separable_states_are_never_flagged(d in dims(), seed in any::<u64>(), terms in 1..6usize) {
        let f = MubFamily::for_dim(d).unwrap();
        let rho = random_separable_with(d, terms, &mut seeded_rng(seed, 0)).unwrap();
        let r = separability_statistic(&rho, &f).unwrap();
        prop_assert_eq!(r.verdict, Verdict::Inconclusive);
        prop_assert!(r.lhs <= r.rhs + 1e-9);
    }
}

#[test]
fn isotropic_family_closed_form() {
    for d in [2usize, 3, 5] {
        let f = MubFamily::for_dim(d).unwrap();
        let rhs = 1.0 + ((d + 1) as f64).sqrt();
        // every basis sees p + (1 - p)/D on the correlated outcome
        let threshold = (rhs / (d + 1) as f64 - 1.0 / d as f64) / (1.0 - 1.0 / d as f64);
        for k in 0..=20 {
            let p = k as f64 / 20.0;
            let r = separability_statistic(&isotropic(d, p), &f).unwrap();
            let expected = (d + 1) as f64 * (p + (1.0 - p) / d as f64);
            assert!((r.lhs - expected).abs() <= 1e-9, "D = {d}, p = {p}: {} vs {expected}", r.lhs);
            if (p - threshold).abs() > 1e-6 {
                let want = if p > threshold { Verdict::EntangledDetected } else { Verdict::Inconclusive };
                assert_eq!(r.verdict, want, "D = {d}, p = {p}");
            }
        }
    }
}

#[test]
fn maximally_entangled_saturates_every_basis() {
    for d in [2usize, 3, 5] {
        let r = separability_statistic(&max_entangled_state(d).unwrap(), &MubFamily::for_dim(d).unwrap()).unwrap();
        assert_eq!(r.per_basis_m_inf.len(), d + 1);
        for m in &r.per_basis_m_inf {
            assert!((m - 1.0).abs() <= 1e-9);
        }
        assert!((r.lhs - (d + 1) as f64).abs() <= 1e-9);
    }
}

#[test]
fn observables_are_projective() {
    for d in [2usize, 3, 5] {
        for o in correlation_observables(&MubFamily::for_dim(d).unwrap()).unwrap() {
            assert_eq!(o.elements.len(), d);
            assert!(o.pvm_residual() <= 1e-9);
        }
    }
}
