//! Histogram densities and parametric fits of delay samples.
//!
//! Goodness of fit is the sum of squared residuals between the
//! density-normalized histogram and the fitted pdf at bin centers, with a
//! fixed bin count so that values are comparable between runs.

use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta, Continuous, Gamma, LogNormal, Normal};
use statrs::function::gamma::digamma;

use crate::error::{Error, Result};

pub const DEFAULT_BINS: usize = 50;
pub const MIN_FIT_SAMPLES: usize = 30;

/// Beta support padding as a fraction of the sample range on each side.
const BETA_PAD: f64 = 0.01;

const NEWTON_MAX_ITER: usize = 50;
const NEWTON_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bin_edges: Vec<f64>,
    pub densities: Vec<f64>,
}

impl Histogram {
    pub fn centers(&self) -> impl Iterator<Item = f64> + '_ {
        self.bin_edges.windows(2).map(|w| 0.5 * (w[0] + w[1]))
    }

    pub fn integral(&self) -> f64 {
        self.bin_edges
            .windows(2)
            .zip(&self.densities)
            .map(|(w, d)| (w[1] - w[0]) * d)
            .sum()
    }
}

/// Uniform bins over `[min, max]`, normalized to unit area. The maximum
/// falls in the last bin.
pub fn make_histogram(samples: &[f64], bins: usize) -> Result<Histogram> {
    if bins < 2 {
        return Err(Error::InvalidConfig(format!("need at least 2 bins, got {bins}")));
    }
    if samples.len() < 2 {
        return Err(Error::InsufficientSamples {
            needed: 2,
            got: samples.len(),
        });
    }
    if let Some(&bad) = samples.iter().find(|x| !x.is_finite()) {
        return Err(Error::DomainError {
            family: "histogram",
            value: bad,
        });
    }
    let (min, max) = samples
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    if min == max {
        return Err(Error::DegenerateSamples);
    }
    let width = (max - min) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &x in samples {
        let k = (((x - min) / width) as usize).min(bins - 1);
        counts[k] += 1;
    }
    let bin_edges: Vec<f64> = (0..=bins)
        .map(|k| if k == bins { max } else { min + k as f64 * width })
        .collect();
    let n = samples.len() as f64;
    let densities = counts
        .iter()
        .zip(bin_edges.windows(2))
        .map(|(&c, w)| c as f64 / (n * (w[1] - w[0])))
        .collect();
    Ok(Histogram {
        bin_edges,
        densities,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    Normal,
    LogNormal,
    Beta,
    Gamma,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Normal, Family::LogNormal, Family::Beta, Family::Gamma];

    pub fn name(self) -> &'static str {
        match self {
            Family::Normal => "Normal",
            Family::LogNormal => "LogNormal",
            Family::Beta => "Beta",
            Family::Gamma => "Gamma",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "normal" => Ok(Family::Normal),
            "lognormal" | "log-normal" => Ok(Family::LogNormal),
            "beta" => Ok(Family::Beta),
            "gamma" => Ok(Family::Gamma),
            _ => Err(Error::InvalidConfig(format!("unknown family `{s}`"))),
        }
    }
}

/// Fitted parameters. Beta carries the support it was mapped onto.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params")]
pub enum Fitted {
    Normal { mean: f64, std_dev: f64 },
    LogNormal { mu: f64, sigma: f64 },
    Beta { alpha: f64, beta: f64, lower: f64, upper: f64 },
    Gamma { shape: f64, scale: f64 },
}

impl Fitted {
    pub fn family(&self) -> Family {
        match self {
            Fitted::Normal { .. } => Family::Normal,
            Fitted::LogNormal { .. } => Family::LogNormal,
            Fitted::Beta { .. } => Family::Beta,
            Fitted::Gamma { .. } => Family::Gamma,
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        let val = match *self {
            Fitted::Normal { mean, std_dev } => Normal::new(mean, std_dev).ok().map(|d| d.pdf(x)),
            Fitted::LogNormal { mu, sigma } => {
                if x <= 0.0 {
                    return 0.0;
                }
                LogNormal::new(mu, sigma).ok().map(|d| d.pdf(x))
            }
            Fitted::Beta {
                alpha,
                beta,
                lower,
                upper,
            } => {
                let y = (x - lower) / (upper - lower);
                if !(0.0..=1.0).contains(&y) {
                    return 0.0;
                }
                Beta::new(alpha, beta).ok().map(|d| d.pdf(y) / (upper - lower))
            }
            Fitted::Gamma { shape, scale } => {
                if x <= 0.0 {
                    return 0.0;
                }
                Gamma::new(shape, 1.0 / scale).ok().map(|d| d.pdf(x))
            }
        };
        val.unwrap_or(f64::NAN)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    #[serde(flatten)]
    pub fitted: Fitted,
    pub ssr: f64,
    pub bins: usize,
}

impl FitResult {
    pub fn family(&self) -> Family {
        self.fitted.family()
    }

    /// `(bin center, empirical density, fitted density)` per bin.
    pub fn curve(&self, hist: &Histogram) -> Vec<(f64, f64, f64)> {
        hist.centers()
            .zip(&hist.densities)
            .map(|(c, &d)| (c, d, self.fitted.pdf(c)))
            .collect()
    }
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Population (maximum-likelihood) variance.
fn variance(xs: &[f64], m: f64) -> f64 {
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64
}

fn require_positive(xs: &[f64], family: &'static str) -> Result<()> {
    match xs.iter().find(|&&x| !(x > 0.0)) {
        Some(&value) => Err(Error::DomainError { family, value }),
        None => Ok(()),
    }
}

fn require_nondegenerate(var: f64) -> Result<()> {
    if var > 0.0 {
        Ok(())
    } else {
        Err(Error::DegenerateSamples)
    }
}

pub fn normal_mle(xs: &[f64]) -> Result<Fitted> {
    if xs.is_empty() {
        return Err(Error::InsufficientSamples { needed: 1, got: 0 });
    }
    let m = mean(xs);
    let v = variance(xs, m);
    require_nondegenerate(v)?;
    Ok(Fitted::Normal {
        mean: m,
        std_dev: v.sqrt(),
    })
}

pub fn lognormal_mle(xs: &[f64]) -> Result<Fitted> {
    require_positive(xs, "LogNormal")?;
    let logs: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let mu = mean(&logs);
    let v = variance(&logs, mu);
    require_nondegenerate(v)?;
    Ok(Fitted::LogNormal { mu, sigma: v.sqrt() })
}

/// Method-of-moments start, then Newton on `ln k - digamma(k) = ln(mean) - mean(ln x)`.
pub fn gamma_mle(xs: &[f64]) -> Result<Fitted> {
    require_positive(xs, "Gamma")?;
    let m = mean(xs);
    let v = variance(xs, m);
    require_nondegenerate(v)?;
    let s = m.ln() - xs.iter().map(|x| x.ln()).sum::<f64>() / xs.len() as f64;
    if !(s > 0.0) {
        return Err(Error::DegenerateSamples);
    }

    let mut k = m * m / v;
    for _ in 0..NEWTON_MAX_ITER {
        let f = k.ln() - digamma(k) - s;
        let df = 1.0 / k - trigamma(k);
        let mut step = f / df;
        while k - step <= 0.0 {
            step *= 0.5;
        }
        k -= step;
        if step.abs() <= NEWTON_TOL * k.max(1.0) {
            return Ok(Fitted::Gamma {
                shape: k,
                scale: m / k,
            });
        }
    }
    Err(Error::NonConvergence("gamma shape estimate"))
}

/// Moments fit on samples mapped affinely onto the unit interval over the
/// sample range widened by 1% on each side.
pub fn beta_moments(xs: &[f64]) -> Result<Fitted> {
    if xs.len() < 2 {
        return Err(Error::InsufficientSamples {
            needed: 2,
            got: xs.len(),
        });
    }
    let (min, max) = xs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    let range = max - min;
    if !(range > 0.0) {
        return Err(Error::DegenerateSamples);
    }
    let lower = min - BETA_PAD * range;
    let upper = max + BETA_PAD * range;
    let ys: Vec<f64> = xs.iter().map(|x| (x - lower) / (upper - lower)).collect();
    let m = mean(&ys);
    let v = variance(&ys, m);
    let common = m * (1.0 - m) / v - 1.0;
    if !(common > 0.0) {
        return Err(Error::DegenerateSamples);
    }
    Ok(Fitted::Beta {
        alpha: m * common,
        beta: (1.0 - m) * common,
        lower,
        upper,
    })
}

/// Trigamma by upward recurrence and the asymptotic series.
pub fn trigamma(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < 20.0 {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    acc + inv
        + inv2 / 2.0
        + inv * inv2 * (1.0 / 6.0 - inv2 * (1.0 / 30.0 - inv2 * (1.0 / 42.0 - inv2 / 30.0)))
}

pub fn ssr(hist: &Histogram, fitted: &Fitted) -> f64 {
    hist.centers()
        .zip(&hist.densities)
        .map(|(c, d)| {
            let r = d - fitted.pdf(c);
            r * r
        })
        .sum()
}

pub fn fit_with_bins(samples: &[f64], family: Family, bins: usize) -> Result<FitResult> {
    if samples.len() < MIN_FIT_SAMPLES {
        return Err(Error::InsufficientSamples {
            needed: MIN_FIT_SAMPLES,
            got: samples.len(),
        });
    }
    let fitted = match family {
        Family::Normal => normal_mle(samples)?,
        Family::LogNormal => lognormal_mle(samples)?,
        Family::Beta => beta_moments(samples)?,
        Family::Gamma => gamma_mle(samples)?,
    };
    let hist = make_histogram(samples, bins)?;
    Ok(FitResult {
        ssr: ssr(&hist, &fitted),
        fitted,
        bins,
    })
}

pub fn fit(samples: &[f64], family: Family) -> Result<FitResult> {
    fit_with_bins(samples, family, DEFAULT_BINS)
}

/// Fits every family and returns the candidates in the order given along with
/// the index of the smallest SSR (earliest family on ties).
pub fn fit_all(samples: &[f64], families: &[Family], bins: usize) -> Result<(Vec<FitResult>, usize)> {
    if families.is_empty() {
        return Err(Error::InvalidConfig("no families to fit".to_string()));
    }
    let fits = families
        .iter()
        .map(|&f| fit_with_bins(samples, f, bins))
        .collect::<Result<Vec<_>>>()?;
    let best = (0..fits.len())
        .min_by(|&a, &b| {
            fits[a]
                .ssr
                .total_cmp(&fits[b].ssr)
                .then(fits[a].family().cmp(&fits[b].family()))
        })
        .expect("non-empty");
    Ok((fits, best))
}

pub fn select_best(samples: &[f64], families: &[Family]) -> Result<FitResult> {
    let (fits, best) = fit_all(samples, families, DEFAULT_BINS)?;
    Ok(fits[best].clone())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub bin_center: f64,
    pub empirical: f64,
    pub fitted: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSummary {
    pub count: usize,
    pub mean: f64,
    pub std_dev: f64,
    pub min: f64,
    pub max: f64,
}

impl SampleSummary {
    /// Summary with the sample (n - 1) standard deviation.
    pub fn of(xs: &[f64]) -> Self {
        let n = xs.len();
        let m = if n == 0 { f64::NAN } else { mean(xs) };
        let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
        Self {
            count: n,
            mean: m,
            std_dev: if n > 1 { (ss / (n - 1) as f64).sqrt() } else { 0.0 },
            min: xs.iter().copied().fold(f64::INFINITY, f64::min),
            max: xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

/// Plot-ready fit report: every candidate plus the winner's curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    /// Summary of every input sample, zeros included.
    pub summary: SampleSummary,
    /// Samples left out of the fits because they were not strictly positive.
    pub excluded_nonpositive: usize,
    pub bins: usize,
    pub best: FitResult,
    pub candidates: Vec<FitResult>,
    pub curve: Vec<CurvePoint>,
}

/// Fits every family in `families` to the strictly positive samples and
/// keeps the one with the smallest SSR. Undelayed samples (exact zeros) sit
/// outside the LogNormal and Gamma supports, so they are counted and dropped
/// for every family alike.
pub fn fit_report(samples: &[f64], families: &[Family], bins: usize) -> Result<FitReport> {
    let summary = SampleSummary::of(samples);
    let positive: Vec<f64> = samples.iter().copied().filter(|&x| x > 0.0).collect();
    let excluded_nonpositive = samples.len() - positive.len();
    let samples = &positive[..];
    let (candidates, best) = fit_all(samples, families, bins)?;
    let hist = make_histogram(samples, bins)?;
    let best = candidates[best].clone();
    let curve = best
        .curve(&hist)
        .into_iter()
        .map(|(bin_center, empirical, fitted)| CurvePoint {
            bin_center,
            empirical,
            fitted,
        })
        .collect();
    Ok(FitReport {
        summary,
        excluded_nonpositive,
        bins,
        best,
        candidates,
        curve,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Gamma as GammaDist, Normal as NormalDist};

    fn gamma_draws(shape: f64, scale: f64, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = GammaDist::new(shape, scale).unwrap();
        (0..n).map(|_| d.sample(&mut rng)).collect()
    }

    #[test]
    fn report_drops_zero_delays() {
        let mut xs = gamma_draws(4.0, 1.0, 2_000, 5);
        xs.extend([0.0; 300]);
        let r = fit_report(&xs, &Family::ALL, DEFAULT_BINS).unwrap();
        assert_eq!(r.excluded_nonpositive, 300);
        assert_eq!(r.summary.count, 2_300);
        assert_eq!(r.curve.len(), DEFAULT_BINS);
        assert!(r.curve[0].bin_center > 0.0);
    }

    #[test]
    fn histogram_two_equal_bins() {
        let h = make_histogram(&[1.0, 1.0, 3.0, 3.0], 2).unwrap();
        assert_eq!(h.bin_edges, vec![1.0, 2.0, 3.0]);
        assert_eq!(h.densities, vec![0.5, 0.5]);
    }

    #[test]
    fn histogram_constant_samples() {
        assert_eq!(make_histogram(&[2.0; 10], 5), Err(Error::DegenerateSamples));
    }

    #[test]
    fn histogram_unit_area() {
        let xs = gamma_draws(9.0, 2.0, 100_000, 11);
        let h = make_histogram(&xs, 50).unwrap();
        assert!((h.integral() - 1.0).abs() < 1e-9);
        assert!(h.densities.iter().all(|&d| d >= 0.0));
    }

    #[test]
    fn normal_closed_form() {
        match normal_mle(&[-1.0, 0.0, 1.0]).unwrap() {
            Fitted::Normal { mean, std_dev } => {
                assert_eq!(mean, 0.0);
                assert!((std_dev * std_dev - 2.0 / 3.0).abs() < 1e-15);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn trigamma_values() {
        // trigamma(1) = pi^2 / 6, trigamma(1/2) = pi^2 / 2.
        let pi2 = std::f64::consts::PI.powi(2);
        assert!((trigamma(1.0) - pi2 / 6.0).abs() < 1e-12);
        assert!((trigamma(0.5) - pi2 / 2.0).abs() < 1e-12);
        // Finite-difference check against digamma.
        for x in [0.3, 2.0, 7.5, 40.0] {
            let e = 1e-5;
            let fd = (digamma(x + e) - digamma(x - e)) / (2.0 * e);
            assert!((trigamma(x) - fd).abs() < 1e-6 * fd.max(1.0), "{x}");
        }
    }

    #[test]
    fn gamma_recovers_parameters() {
        let xs = gamma_draws(9.0, 2.0, 100_000, 2024);
        match fit(&xs, Family::Gamma).unwrap().fitted {
            Fitted::Gamma { shape, scale } => {
                assert!((shape - 9.0).abs() < 0.3, "{shape}");
                assert!((scale - 2.0).abs() < 0.1, "{scale}");
            }
            other => panic!("{other:?}"),
        }
        for (k, seed) in [(2.0, 1), (20.0, 2)] {
            let xs = gamma_draws(k, 1.5, 100_000, seed);
            let Fitted::Gamma { shape, scale } = gamma_mle(&xs).unwrap() else {
                unreachable!()
            };
            assert!((shape / k - 1.0).abs() < 0.05);
            assert!((scale / 1.5 - 1.0).abs() < 0.05);
        }
    }

    #[test]
    fn domain_errors() {
        let mut xs = gamma_draws(3.0, 1.0, 100, 1);
        xs[17] = -0.5;
        assert!(matches!(fit(&xs, Family::Gamma), Err(Error::DomainError { .. })));
        assert!(matches!(fit(&xs, Family::LogNormal), Err(Error::DomainError { .. })));
        assert!(fit(&xs, Family::Normal).is_ok());
        assert!(matches!(
            fit(&xs[..10], Family::Normal),
            Err(Error::InsufficientSamples { .. })
        ));
    }

    #[test]
    fn beta_support_and_density() {
        let xs = gamma_draws(5.0, 1.0, 10_000, 8);
        let f = fit(&xs, Family::Beta).unwrap();
        let Fitted::Beta { lower, upper, alpha, beta } = f.fitted else {
            unreachable!()
        };
        let (min, max) = (
            xs.iter().copied().fold(f64::INFINITY, f64::min),
            xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        );
        assert!(lower < min && upper > max);
        assert!(alpha > 0.0 && beta > 0.0);
        // Fitted pdf integrates to one over its support.
        let n = 20_000;
        let w = (upper - lower) / n as f64;
        let area: f64 = (0..n).map(|i| f.fitted.pdf(lower + (i as f64 + 0.5) * w) * w).sum();
        assert!((area - 1.0).abs() < 1e-3, "{area}");
    }

    #[test]
    fn select_best_is_argmin() {
        let xs = gamma_draws(4.0, 3.0, 20_000, 5);
        let (fits, best) = fit_all(&xs, &Family::ALL, DEFAULT_BINS).unwrap();
        assert!(fits.iter().all(|f| fits[best].ssr <= f.ssr));
        assert!(matches!(fits[best].family(), Family::Gamma | Family::LogNormal));
    }

    #[test]
    fn normal_data_selects_normal() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let d = NormalDist::new(25.0, 5.0).unwrap();
        let xs: Vec<f64> = (0..100_000).map(|_| d.sample(&mut rng)).collect();
        let best = select_best(&xs, &Family::ALL).unwrap();
        assert_eq!(best.family(), Family::Normal);
    }
}
