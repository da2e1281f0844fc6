use powertail::diversity::*;
use powertail::models::{ChannelModel, LogNormal, Nakagami, Rayleigh, Rician, TwoWave, Weibull};
use powertail::montecarlo::{estimate_tail, SampleSpec, StreamSpec};
use powertail::specfun::ln_gamma;
use powertail::Error;
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// `Pr(Erlang(M) < p) = e^{−p} Σ_{k≥M} p^k/k!`, summed upward so no
/// cancellation occurs.
fn erlang_cdf(m: u32, p: f64) -> f64 {
    let mut term = (-p).exp();
    for k in 1..=m {
        term *= p / k as f64;
    }
    let mut sum = 0.0;
    let mut k = m;
    while term > 1e-30 * sum || sum == 0.0 {
        sum += term;
        k += 1;
        term *= p / k as f64;
    }
    sum
}

fn rayleigh() -> ChannelModel {
    Rayleigh::new(1.0).into()
}

fn mixed_power_law_set() -> BranchSet {
    BranchSet::new(vec![
        Rayleigh::new(1.0).into(),
        Nakagami::new(2.0, 2.0).into(),
        Rician::new(5.0, 0.5).into(),
        Weibull::new(1.5, 1.0).into(),
    ])
    .unwrap()
}

#[test]
fn selection_combining_values() {
    let set = BranchSet::iid(rayleigh(), 2).unwrap();
    let p: f64 = 1e-3;
    let branch = p - p * p / 2.0 + p * p * p / 6.0 - p.powi(4) / 24.0;
    let sc = sc_outage(&set, p).unwrap().prob();
    assert!(rel(sc, branch * branch) < 1e-12);
    assert!((sc - 9.99000e-7).abs() < 1e-11);

    let single = BranchSet::iid(rayleigh(), 1).unwrap();
    assert_eq!(sc_outage(&single, 0.3).unwrap().prob(), rayleigh().cdf(0.3).unwrap());

    let tw: ChannelModel = TwoWave::new(1.0, 0.5).into();
    let with_floor = BranchSet::new(vec![rayleigh(), tw]).unwrap();
    assert_eq!(sc_outage(&with_floor, 0.2).unwrap().prob(), 0.0);
}

#[test]
fn selection_combining_below_underflow() {
    let p = -(-1e-9f64).ln_1p();
    let set = BranchSet::iid(rayleigh(), 8).unwrap();
    let v = sc_outage(&set, p).unwrap();
    assert!((v.log10() + 72.0).abs() < 1e-9);
    let deep = BranchSet::iid(rayleigh(), 40).unwrap();
    let v = sc_outage(&deep, 1e-9).unwrap();
    assert_eq!(v.prob(), 0.0);
    assert!((v.log10() + 360.0).abs() < 1e-6);
}

#[test]
fn mrc_offset_values() {
    let o = mrc_offset(&[0.3, 1.7, 2.2]).unwrap();
    let oracle = (ln_gamma(1.3) + ln_gamma(2.7) + ln_gamma(3.2) - ln_gamma(5.2)).exp();
    assert!(rel(o, oracle) < 1e-14);
    assert!(matches!(mrc_offset(&[1.0, -0.5]), Err(Error::Domain { .. })));
    assert!(mrc_offset(&[]).is_err());
}

#[test]
fn mrc_rayleigh_against_erlang() {
    let laws = BranchSet::iid(rayleigh(), 4).unwrap().power_laws().unwrap();
    let v = mrc_outage_powerlaw(&laws, 1e-2).unwrap().prob();
    assert!(rel(v, 1e-8 / 24.0) < 1e-13);
    assert!((v - 4.16667e-10).abs() < 1e-15);
    // Leading correction of the Erlang CDF is (1 − 4p/5).
    let e = erlang_cdf(4, 1e-2);
    assert!((v / e - 1.0 - 0.8e-2).abs() < 1e-4);
    assert!(rel(v, e) < 1e-2);
    assert!(rel(mrc_outage_powerlaw(&laws, 1e-4).unwrap().prob(), erlang_cdf(4, 1e-4)) < 1e-4);
}

#[test]
fn single_branch_mrc() {
    let m: ChannelModel = Nakagami::new(2.0, 1.0).into();
    let law = m.power_law().unwrap();
    let v = mrc_outage_powerlaw(&[law], 1e-3).unwrap().prob();
    assert!(rel(v, m.tail_approx(1e-3).unwrap()) < 1e-14);
    let set = BranchSet::iid(m, 1).unwrap();
    assert_eq!(mrc_outage_generic(&set, 1e-3).unwrap().prob(), m.cdf(1e-3).unwrap());
}

#[test]
fn equal_slope_form() {
    let set = BranchSet::new(vec![
        Rayleigh::new(1.0).into(),
        Rician::new(3.0, 2.0).into(),
        Rician::new(10.0, 0.3).into(),
        Weibull::new(1.0, 5.0).into(),
    ])
    .unwrap();
    let laws = set.power_laws().unwrap();
    for p in [1e-6, 1e-3, 0.1] {
        let a = mrc_outage_powerlaw(&laws, p).unwrap();
        let b = mrc_outage_equal_slope(&laws, p).unwrap();
        assert!(rel(a.prob(), b.prob()) < 1e-12);
    }
    assert!(mrc_outage_equal_slope(&mixed_power_law_set().power_laws().unwrap(), 0.1).is_err());
}

#[test]
fn heuristic_offset_band() {
    // dB shift of the outage curve is 10 log10(ratio)/(Mβ).
    let gap = |m: usize, beta: f64| {
        let exact = mrc_offset(&vec![beta; m]).unwrap();
        (10.0 * (mrc_heuristic_offset(m, beta) / exact).log10() / (m as f64 * beta)).abs()
    };
    assert!((mrc_offset(&[2.0, 2.0]).unwrap() - 1.0 / 6.0).abs() < 1e-15);
    assert!(gap(2, 2.0) < 1.0);
    for i in 0..=30 {
        let beta = 0.5 + 1.5 * i as f64 / 30.0;
        assert!(gap(4, beta) <= 1.0, "M=4 β={beta}: {}", gap(4, beta));
        assert!(gap(8, beta) <= 1.5, "M=8 β={beta}: {}", gap(8, beta));
    }
}

#[test]
fn generic_converges_to_power_law() {
    let set = mixed_power_law_set();
    let laws = set.power_laws().unwrap();
    let generic = mrc_outage_generic(&set, 1e-8).unwrap().prob();
    let law = mrc_outage_powerlaw(&laws, 1e-8).unwrap().prob();
    assert!(rel(generic, law) < 1e-3, "{generic} vs {law}");
}

#[test]
fn phi_needs_every_branch() {
    let set = BranchSet::new(vec![rayleigh(), LogNormal::new(6.0, 0.0).into(), rayleigh()]).unwrap();
    match mrc_phi_at(&set, 1e-3) {
        Err(Error::MissingBranchBound { branch, model }) => {
            assert_eq!(branch, 1);
            assert_eq!(model, "LogNormal");
        }
        other => panic!("unexpected {other:?}"),
    }
    let ok = mrc_phi_at(&mixed_power_law_set(), 1e-3).unwrap();
    assert!(ok.exact >= ok.bernoulli && ok.bernoulli > 0.0);
}

#[test]
fn correlated_branches_are_rejected() {
    let json = r#"{"branches":[{"model":"Rayleigh","params":{"A":1}},{"model":"Rayleigh","params":{"A":1}}],
        "scheme":"MRC","correlation":[[1,0.5],[0.5,1]]}"#;
    assert!(serde_json::from_str::<DiversityConfig>(json).is_err());
}

#[test]
fn reference_simulation() {
    let stream = StreamSpec::new(2_000_000, 11);
    let th = [0.05, 0.1, 0.2, 0.4];

    let single = BranchSet::iid(rayleigh(), 1).unwrap();
    let a = simulate_reference(&single, DiversityScheme::SelectionCombining, &stream, &th).unwrap();
    let b = estimate_tail(&SampleSpec { model: rayleigh(), stream }, &th).unwrap();
    assert_eq!(a, b);

    let set = BranchSet::new(vec![rayleigh(), Nakagami::new(2.0, 1.5).into()]).unwrap();
    let sc = simulate_reference(&set, DiversityScheme::SelectionCombining, &stream, &th).unwrap();
    let mrc = simulate_reference(&set, DiversityScheme::MaximumRatioCombining, &stream, &th).unwrap();
    for i in 0..th.len() {
        assert!(mrc.counts[i] <= sc.counts[i]);
        let exact = sc_outage(&set, th[i]).unwrap().prob();
        let sigma = (exact * (1.0 - exact) / stream.n as f64).sqrt();
        assert!((sc.eps_hat[i] - exact).abs() < 4.0 * sigma, "SC at {}", th[i]);
    }
}

#[test]
fn mrc_simulation_matches_erlang() {
    let p = (24.0f64 * 1e-4).powf(0.25);
    let set = BranchSet::iid(rayleigh(), 4).unwrap();
    let stream = StreamSpec::new(10_000_000, 3);
    let t = simulate_reference(&set, DiversityScheme::MaximumRatioCombining, &stream, &[p]).unwrap();
    let exact = erlang_cdf(4, p);
    let sigma = (exact / stream.n as f64).sqrt();
    assert!((t.eps_hat[0] - exact).abs() < 3.0 * sigma, "{} vs {exact}", t.eps_hat[0]);
}

fn branch_strategy() -> impl Strategy<Value = ChannelModel> {
    prop_oneof![
        (0.1f64..10.0).prop_map(|a| Rayleigh::new(a).into()),
        (0.5f64..5.0, 0.1f64..10.0).prop_map(|(m, a)| Nakagami::new(m, a).into()),
        (0.0f64..20.0, 0.1f64..10.0).prop_map(|(k, a)| Rician::new(k, a).into()),
        (0.5f64..3.0, 0.1f64..10.0).prop_map(|(b, a)| Weibull::new(b, a).into()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ordering_and_permutation(branches in prop::collection::vec(branch_strategy(), 1..6), lp in -8.0f64..-1.0) {
        let p = 10f64.powf(lp);
        let set = BranchSet::new(branches.clone()).unwrap();
        let sc = sc_outage(&set, p).unwrap();
        let gen = mrc_outage_generic(&set, p).unwrap();
        let laws = set.power_laws().unwrap();
        let law = mrc_outage_powerlaw(&laws, p).unwrap();
        prop_assert!(gen.ln() <= sc.ln() + 1e-12);
        let sc_law: f64 = laws.iter().map(|l| l.ln_eval(p)).sum();
        prop_assert!(law.ln() <= sc_law + 1e-12);

        let mut rev = branches;
        rev.reverse();
        let set_rev = BranchSet::new(rev).unwrap();
        prop_assert!((sc_outage(&set_rev, p).unwrap().ln() - sc.ln()).abs() < 1e-12 * sc.ln().abs().max(1.0));
        prop_assert!((mrc_outage_generic(&set_rev, p).unwrap().ln() - gen.ln()).abs() < 1e-12 * gen.ln().abs().max(1.0));
        let law_rev = mrc_outage_powerlaw(&set_rev.power_laws().unwrap(), p).unwrap();
        prop_assert!((law_rev.ln() - law.ln()).abs() < 1e-12 * law.ln().abs().max(1.0));
    }

    #[test]
    fn offset_is_at_most_one(betas in prop::collection::vec(0.05f64..5.0, 1..9)) {
        let o = mrc_offset(&betas).unwrap();
        if betas.len() == 1 {
            prop_assert_eq!(o, 1.0);
        } else {
            prop_assert!(o < 1.0 && o > 0.0);
        }
    }
}
