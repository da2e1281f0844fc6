use powertail::models::*;
use powertail::montecarlo::*;

fn rayleigh() -> ChannelModel {
    Rayleigh::new(1.0).into()
}

/// Every model family with a finite-variance power.
fn catalog() -> Vec<ChannelModel> {
    vec![
        TwoWave::new(1.0, 0.6).into(),
        ThreeWave::new(1.0, 0.7914, 0.2126).into(),
        Rayleigh::new(1.0).into(),
        Rician::new(5.0, 1.0).into(),
        Twdp::new(10.0, 0.8, 1.0).into(),
        Weibull::new(0.7, 1.0).into(),
        Nakagami::new(1.7, 2.0).into(),
        KappaMu::new(3.9, 2.0, 1.0).into(),
        KappaMu::new(1.5, 1.3, 1.0).into(),
        KappaMuM::new(3.0, 1.5, 2.5, 1.0).into(),
        KappaMuAlpha::new(2.0, 1.0, 3.5, 1.0).into(),
        Suzuki::with_mean_power(4.0, 1.0).into(),
        LogNormal::with_mean_power(4.0, 1.0).into(),
        CascadedRayleigh::new(0.4, 1.0).into(),
        CascadedRayleigh::new(1.0, 1.0).into(),
    ]
}

#[test]
fn rayleigh_count_at_minus_30_db() {
    let spec = SampleSpec::new(rayleigh(), 10_000_000, 2024);
    let t = estimate_tail(&spec, &[1e-3]).unwrap();
    let expected = 1e7 * -(-1e-3f64).exp_m1();
    assert!((t.counts[0] as f64 - expected).abs() <= 300.0, "{}", t.counts[0]);
    assert_eq!(t, estimate_tail(&spec, &[1e-3]).unwrap());
}

#[test]
fn worker_count_does_not_matter() {
    let spec = SampleSpec::new(KappaMuM::new(3.0, 1.5, 2.5, 1.0).into(), 300_000, 5).with_chunk(10_000);
    let th = [1e-3, 1e-2, 0.1, 1.0];
    let run = |workers: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .unwrap()
            .install(|| (estimate_tail(&spec, &th).unwrap(), sample_mean(&spec).unwrap()))
    };
    let one = run(1);
    assert_eq!(one, run(3));
    assert_eq!(one, run(8));
}

#[test]
fn sample_means_match_model() {
    for model in catalog() {
        let m = sample_mean(&SampleSpec::new(model, 10_000_000, 77)).unwrap();
        let a = model.mean_power();
        assert!((m.mean - a).abs() <= 5.0 * m.std_error, "{}: {} vs {a} (se {})", model.name(), m.mean, m.std_error);
    }
}

fn ks_statistic(mut xs: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

fn draws(model: &ChannelModel, n: usize, seed: u64) -> Vec<f64> {
    let s = PowerSampler::new(model);
    let mut rng = substream(seed, 0, 0);
    (0..n).map(|_| s.sample(&mut rng)).collect()
}

// Asymptotic Kolmogorov critical value for p = 0.01.
const KS_01: f64 = 1.6276;

#[test]
fn kolmogorov_smirnov() {
    let n = 1_000_000;
    let rayleigh_cdf = |p: f64| -(-p).exp_m1();
    for (model, seed) in [(Weibull::new(1.0, 1.0).into(), 1), (Nakagami::new(1.0, 1.0).into(), 2), (rayleigh(), 3)] {
        let d = ks_statistic(draws(&model, n, seed), rayleigh_cdf);
        assert!(d * (n as f64).sqrt() < KS_01, "{model:?}: D = {d}");
    }
    let w: ChannelModel = Weibull::new(2.0, 1.0).into();
    let d = ks_statistic(draws(&w, n, 4), |p| w.cdf(p).unwrap());
    assert!(d * (n as f64).sqrt() < KS_01);
}

#[test]
fn cascaded_power_correlation() {
    for g in [0.0, 0.3, 0.8] {
        let mut rng = substream(9, 0, 0);
        let n = 10_000_000;
        let (mut s1, mut s2, mut s11, mut s22, mut s12) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for _ in 0..n {
            let (a, b) = cascaded_links(f64::sqrt(g), &mut rng);
            s1 += a;
            s2 += b;
            s11 += a * a;
            s22 += b * b;
            s12 += a * b;
        }
        let nf = n as f64;
        let cov = s12 / nf - s1 * s2 / (nf * nf);
        let corr = cov / ((s11 / nf - (s1 / nf).powi(2)) * (s22 / nf - (s2 / nf).powi(2))).sqrt();
        assert!((corr - g).abs() < 0.01, "Γ={g}: {corr}");
    }
}

#[test]
fn two_wave_construction() {
    let m: ChannelModel = TwoWave::new(1.0, 1.0).into();
    let xs = draws(&m, 200_000, 6);
    assert!(xs.iter().all(|&p| (0.0..=4.0 + 1e-12).contains(&p)));
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    assert!((mean - 2.0).abs() < 0.02);
}

#[test]
fn agreement_at_moderate_levels() {
    let n = 2_000_000;
    for model in catalog() {
        let a = model.mean_power();
        let th: Vec<f64> = (0..12).map(|i| a * 10f64.powf(-2.0 + 0.2 * i as f64)).collect();
        let t = estimate_tail(&SampleSpec::new(model, n, 31), &th).unwrap();
        for (i, &p) in th.iter().enumerate() {
            let exact = model.cdf(p).unwrap();
            if exact * n as f64 >= 100.0 && exact < 0.99 {
                let sigma = (exact * (1.0 - exact) / n as f64).sqrt();
                assert!((t.eps_hat[i] - exact).abs() <= 4.5 * sigma, "{} at {p}: {} vs {exact}", model.name(), t.eps_hat[i]);
            }
        }
    }
}

#[test]
fn rayleigh_slope() {
    let th: Vec<f64> = (0..=10).map(|i| 10f64.powf(-4.0 + 0.2 * i as f64)).collect();
    let t = estimate_tail(&SampleSpec::new(rayleigh(), 10_000_000, 8), &th).unwrap();
    let fit = fit_loglog_slope(&t, SlopeWindow::Threshold(1e-4, 1e-2)).unwrap();
    assert!((fit.slope - 1.0).abs() < 0.05 && fit.stderr < 0.05, "{fit:?}");
    assert_eq!(fit.points, 11);
    let err = fit_loglog_slope(&t, SlopeWindow::Threshold(1e-9, 1e-7)).unwrap_err();
    assert!(matches!(err, powertail::Error::InsufficientData(_)));
}

#[test]
fn outputs() {
    let t = estimate_tail(&SampleSpec::new(rayleigh(), 1000, 1), &[0.1, 1.0]).unwrap();
    let csv = t.to_csv(1.0);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("threshold_dB,count,n,eps_hat,ci95"));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[0].parse::<f64>().unwrap(), -10.0);
    assert_eq!(first[1].parse::<u64>().unwrap(), t.counts[0]);
    let back: EmpiricalTail = serde_json::from_str(&t.to_json()).unwrap();
    assert_eq!(back, t);
}
