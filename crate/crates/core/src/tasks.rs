//! Finite binary classification tasks p(c, x), datasets drawn from them, and
//! the class-average embedded densities ρ_{θ|c}.

use std::io::{self, Write};

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::embedding::{Embedding, ThetaVector};
use crate::error::{Error, Result};
use crate::qmath::{CMatrix, DensityMatrix};
use crate::scalar::Real;

const NORMALIZATION_TOL: f64 = 1e-12;

pub(crate) fn check_class(c: usize) -> Result<()> {
    if c > 1 {
        return Err(Error::InvalidClass(c));
    }
    Ok(())
}

/// Joint distribution over a class label c ∈ {0, 1} and a finite feature set.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteTask<R> {
    features: Vec<R>,
    prior: [R; 2],
    cond: [Vec<R>; 2],
}

impl<R: Real> DiscreteTask<R> {
    /// `cond[c][i] = p(xᵢ | c)`. Features must be strictly increasing and each
    /// distribution normalized to within 1e-12.
    pub fn new(features: Vec<R>, prior: [R; 2], cond: [Vec<R>; 2]) -> Result<Self> {
        if features.is_empty() {
            return Err(Error::InvalidTask("no feature values".into()));
        }
        if features.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidTask("features must be strictly increasing".into()));
        }
        let tol = R::lit(NORMALIZATION_TOL).max(R::epsilon() * R::lit(64.0));
        let check = |name: &str, p: &[R]| -> Result<()> {
            if p.iter().any(|&v| !(v >= R::zero()) || !v.is_finite()) {
                return Err(Error::InvalidTask(format!("{name} has negative or non-finite entries")));
            }
            let s: R = p.iter().copied().sum();
            if (s - R::one()).abs() > tol {
                return Err(Error::InvalidTask(format!("{name} sums to {s}, not 1")));
            }
            Ok(())
        };
        check("prior", &prior)?;
        for (c, row) in cond.iter().enumerate() {
            if row.len() != features.len() {
                return Err(Error::InvalidTask(format!(
                    "cond[{c}] has {} entries for {} features",
                    row.len(),
                    features.len()
                )));
            }
            check(&format!("cond[{c}]"), row)?;
        }
        Ok(Self { features, prior, cond })
    }

    pub fn features(&self) -> &[R] {
        &self.features
    }

    pub fn num_bins(&self) -> usize {
        self.features.len()
    }

    pub fn prior(&self) -> [R; 2] {
        self.prior
    }

    /// p(· | c).
    pub fn cond(&self, c: usize) -> &[R] {
        &self.cond[c]
    }

    /// p(x) = Σ_c p(c) p(x | c).
    pub fn marginal(&self) -> Vec<R> {
        (0..self.features.len())
            .map(|i| self.prior[0] * self.cond[0][i] + self.prior[1] * self.cond[1][i])
            .collect()
    }

    /// The empirical measure of `data` as a task on this task's features.
    /// An unobserved class gets prior 0 and a uniform (irrelevant) conditional.
    pub fn empirical(&self, data: &Dataset) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let b = self.num_bins();
        let n = R::from_usize(data.len()).unwrap();
        let counts = data.class_counts();
        let mut cond = [vec![R::zero(); b], vec![R::zero(); b]];
        for &(c, i) in data.samples() {
            cond[c][i] = cond[c][i] + R::one();
        }
        for c in 0..2 {
            if counts[c] == 0 {
                cond[c] = vec![R::one() / R::from_usize(b).unwrap(); b];
            } else {
                let k = R::from_usize(counts[c]).unwrap();
                cond[c].iter_mut().for_each(|v| *v = *v / k);
            }
        }
        let prior = [R::from_usize(counts[0]).unwrap() / n, R::from_usize(counts[1]).unwrap() / n];
        Self::new(self.features.clone(), prior, cond)
    }

    /// Same task with every feature value shifted by `delta`.
    pub fn shifted(&self, delta: R) -> Self {
        Self {
            features: self.features.iter().map(|&f| f + delta).collect(),
            prior: self.prior,
            cond: self.cond.clone(),
        }
    }
}

/// Two-class Gaussian feature model with shared variance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianTaskSpec {
    pub mu0: f64,
    pub mu1: f64,
    pub sigma2: f64,
    #[serde(default = "GaussianTaskSpec::default_prior0")]
    pub prior0: f64,
    #[serde(default = "GaussianTaskSpec::default_bins")]
    pub bins: usize,
    #[serde(default = "GaussianTaskSpec::default_span")]
    pub span_sigmas: f64,
}

impl GaussianTaskSpec {
    pub const DEFAULT_BINS: usize = 100;
    pub const DEFAULT_SPAN_SIGMAS: f64 = 4.0;

    fn default_prior0() -> f64 {
        0.5
    }
    fn default_bins() -> usize {
        Self::DEFAULT_BINS
    }
    fn default_span() -> f64 {
        Self::DEFAULT_SPAN_SIGMAS
    }

    /// Equiprobable classes, default binning.
    pub fn new(mu0: f64, mu1: f64, sigma2: f64) -> Self {
        Self { mu0, mu1, sigma2, prior0: 0.5, bins: Self::DEFAULT_BINS, span_sigmas: Self::DEFAULT_SPAN_SIGMAS }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma2 > 0.0) || !self.sigma2.is_finite() {
            return Err(Error::DegenerateSpec(format!("sigma2 must be > 0, got {}", self.sigma2)));
        }
        if !(0.0..=1.0).contains(&self.prior0) {
            return Err(Error::DegenerateSpec(format!("prior0 must be in [0, 1], got {}", self.prior0)));
        }
        if self.bins < 2 {
            return Err(Error::DegenerateSpec(format!("bins must be >= 2, got {}", self.bins)));
        }
        if !(self.span_sigmas >= 0.0) || !self.mu0.is_finite() || !self.mu1.is_finite() {
            return Err(Error::DegenerateSpec("means and span must be finite, span >= 0".into()));
        }
        Ok(())
    }

    /// `[min μ − kσ, max μ + kσ]`.
    pub fn span(&self) -> (f64, f64) {
        let half = self.span_sigmas * self.sigma2.sqrt();
        (self.mu0.min(self.mu1) - half, self.mu0.max(self.mu1) + half)
    }

    pub fn shifted(&self, delta: f64) -> Self {
        Self { mu0: self.mu0 + delta, mu1: self.mu1 + delta, ..*self }
    }
}

/// `bins` centers spread uniformly over `[lo, hi]` (endpoints included).
pub fn bin_centers<R: Real>(lo: f64, hi: f64, bins: usize) -> Result<Vec<R>> {
    if !(hi > lo) {
        return Err(Error::DegenerateSpec(format!("zero-width span [{lo}, {hi}]")));
    }
    if bins < 2 {
        return Err(Error::DegenerateSpec(format!("bins must be >= 2, got {bins}")));
    }
    let step = (hi - lo) / (bins - 1) as f64;
    Ok((0..bins).map(|i| R::lit(lo + step * i as f64)).collect())
}

/// Quantizes `spec` onto its own span.
pub fn quantize_gaussian_task<R: Real>(spec: &GaussianTaskSpec) -> Result<DiscreteTask<R>> {
    spec.validate()?;
    let (lo, hi) = spec.span();
    quantize_on(spec, &bin_centers(lo, hi, spec.bins)?)
}

/// Quantizes `spec` onto the given bin centers: p(xᵢ | c) ∝ N(xᵢ | μ_c, σ²).
pub fn quantize_on<R: Real>(spec: &GaussianTaskSpec, centers: &[R]) -> Result<DiscreteTask<R>> {
    spec.validate()?;
    let row = |mu: f64| -> Result<Vec<R>> {
        let w: Vec<f64> = centers
            .iter()
            .map(|&x| {
                let d = x.as_f64() - mu;
                (-d * d / (2.0 * spec.sigma2)).exp()
            })
            .collect();
        let total: f64 = w.iter().sum();
        if !(total > 0.0) {
            return Err(Error::DegenerateSpec(format!("no probability mass near mean {mu}")));
        }
        Ok(w.into_iter().map(|v| R::lit(v / total)).collect())
    };
    DiscreteTask::new(
        centers.to_vec(),
        [R::lit(spec.prior0), R::lit(1.0 - spec.prior0)],
        [row(spec.mu0)?, row(spec.mu1)?],
    )
}

/// Quantizes two specs on one shared bin set covering both spans.
pub fn quantize_pair<R: Real>(
    source: &GaussianTaskSpec,
    target: &GaussianTaskSpec,
) -> Result<(DiscreteTask<R>, DiscreteTask<R>)> {
    let centers = covering_bin_centers(&[*source, *target])?;
    Ok((quantize_on(source, &centers)?, quantize_on(target, &centers)?))
}

/// One bin set spanning every spec, with the largest requested bin count.
pub fn covering_bin_centers<R: Real>(specs: &[GaussianTaskSpec]) -> Result<Vec<R>> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut bins = 0;
    for spec in specs {
        spec.validate()?;
        let (a, b) = spec.span();
        lo = lo.min(a);
        hi = hi.max(b);
        bins = bins.max(spec.bins);
    }
    bin_centers(lo, hi, bins)
}

/// Labeled samples `(class, bin index)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    samples: Vec<(usize, usize)>,
    seed: u64,
}

impl Dataset {
    /// Builds a dataset from explicit samples; `bins` bounds the bin indices.
    pub fn from_samples(samples: Vec<(usize, usize)>, bins: usize) -> Result<Self> {
        for &(c, i) in &samples {
            check_class(c)?;
            if i >= bins {
                return Err(Error::InvalidArgument(format!("bin index {i} out of range (bins = {bins})")));
            }
        }
        Ok(Self { samples, seed: 0 })
    }

    pub fn samples(&self) -> &[(usize, usize)] {
        &self.samples
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn class_counts(&self) -> [usize; 2] {
        let mut counts = [0usize; 2];
        for &(c, _) in &self.samples {
            counts[c] += 1;
        }
        counts
    }

    /// Per-class histogram over `bins` feature bins.
    pub fn histogram(&self, bins: usize) -> [Vec<usize>; 2] {
        let mut h = [vec![0usize; bins], vec![0usize; bins]];
        for &(c, i) in &self.samples {
            h[c][i] += 1;
        }
        h
    }

    /// CSV dump with columns `index,label,x_value,bin_index`.
    pub fn write_csv<R: Real, W: Write>(&self, task: &DiscreteTask<R>, mut out: W) -> io::Result<()> {
        writeln!(out, "index,label,x_value,bin_index")?;
        for (j, &(c, i)) in self.samples.iter().enumerate() {
            writeln!(out, "{j},{c},{},{i}", task.features()[i])?;
        }
        Ok(())
    }
}

/// `n` i.i.d. draws: c ~ prior, then x ~ p(· | c).
pub fn sample_dataset<R: Real>(task: &DiscreteTask<R>, n: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_with(task, n, &mut rng, seed)
}

pub(crate) fn sample_with<R: Real, G: Rng + ?Sized>(task: &DiscreteTask<R>, n: usize, rng: &mut G, seed: u64) -> Dataset {
    if n == 0 {
        return Dataset { samples: Vec::new(), seed };
    }
    let p1 = task.prior[1].as_f64().clamp(0.0, 1.0);
    let rows: Vec<Option<WeightedIndex<f64>>> = task
        .cond
        .iter()
        .map(|row| WeightedIndex::new(row.iter().map(|v| v.as_f64())).ok())
        .collect();
    let samples = (0..n)
        .map(|_| {
            let c = usize::from(rng.random_bool(p1));
            let i = rows[c].as_ref().expect("normalized conditional").sample(rng);
            (c, i)
        })
        .collect();
    Dataset { samples, seed }
}

/// ρ_{θ|c} = Σᵢ p(xᵢ | c) ρ_θ(xᵢ).
pub fn class_average_density<R: Real, E: Embedding<R> + ?Sized>(
    task: &DiscreteTask<R>,
    embedding: &E,
    theta: &ThetaVector<R>,
    c: usize,
) -> Result<DensityMatrix<R>> {
    check_class(c)?;
    let mut acc = CMatrix::zeros(embedding.dim());
    for (&x, &w) in task.features.iter().zip(&task.cond[c]) {
        if w != R::zero() {
            acc.add_scaled(embedding.embed(theta, x)?.matrix(), w);
        }
    }
    DensityMatrix::new(acc)
}

/// Empirical class weight N_c/N and class-average density Σ_{j: c_j = c} ρ_θ(x_j)/N_c.
/// An empty class yields weight 0 and the zero matrix.
pub fn empirical_class_density<R: Real, E: Embedding<R> + ?Sized>(
    data: &Dataset,
    features: &[R],
    embedding: &E,
    theta: &ThetaVector<R>,
    c: usize,
) -> Result<(R, CMatrix<R>)> {
    check_class(c)?;
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let hist = data.histogram(features.len());
    let nc: usize = hist[c].iter().sum();
    if nc == 0 {
        return Ok((R::zero(), CMatrix::zeros(embedding.dim())));
    }
    let inv = R::one() / R::from_usize(nc).unwrap();
    let mut acc = CMatrix::zeros(embedding.dim());
    for (i, &k) in hist[c].iter().enumerate() {
        if k > 0 {
            acc.add_scaled(embedding.embed(theta, features[i])?.matrix(), R::from_usize(k).unwrap() * inv);
        }
    }
    Ok((R::from_usize(nc).unwrap() / R::from_usize(data.len()).unwrap(), acc))
}

/// ½ Σ |pᵢ − qᵢ|.
pub fn tv_distance<R: Real>(p: &[R], q: &[R]) -> Result<R> {
    if p.len() != q.len() {
        return Err(Error::DimMismatch { left: p.len(), right: q.len() });
    }
    Ok(p.iter().zip(q).map(|(&a, &b)| (a - b).abs()).sum::<R>() * R::lit(0.5))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::{EmbeddingAnsatz, TableEmbedding};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn fig2_source() -> GaussianTaskSpec {
        GaussianTaskSpec::new(1.0, -1.0, 0.11)
    }

    #[test]
    fn symmetric_spec_gives_identical_rows() {
        let t = quantize_gaussian_task::<f64>(&GaussianTaskSpec::new(0.0, 0.0, 1.0)).unwrap();
        assert_eq!(t.cond(0), t.cond(1));
    }

    #[test]
    fn fig2_source_task_layout() {
        let t = quantize_gaussian_task::<f64>(&fig2_source()).unwrap();
        assert_eq!(t.num_bins(), 100);
        let half = 4.0 * 0.11f64.sqrt();
        assert_abs_diff_eq!(t.features()[0], -1.0 - half, epsilon = 1e-12);
        assert_abs_diff_eq!(t.features()[99], 1.0 + half, epsilon = 1e-12);
        for c in 0..2 {
            assert_abs_diff_eq!(t.cond(c).iter().sum::<f64>(), 1.0, epsilon = 1e-12);
        }
        // class 0 mass sits near +1, class 1 near -1
        let mean = |c: usize| t.features().iter().zip(t.cond(c)).map(|(x, p)| x * p).sum::<f64>();
        assert_abs_diff_eq!(mean(0), 1.0, epsilon = 1e-3);
        assert_abs_diff_eq!(mean(1), -1.0, epsilon = 1e-3);
    }

    #[test]
    fn degenerate_specs_are_rejected() {
        let mut s = fig2_source();
        s.sigma2 = 0.0;
        assert!(matches!(quantize_gaussian_task::<f64>(&s), Err(Error::DegenerateSpec(_))));
        let mut s = GaussianTaskSpec::new(0.0, 0.0, 1.0);
        s.span_sigmas = 0.0;
        assert!(matches!(quantize_gaussian_task::<f64>(&s), Err(Error::DegenerateSpec(_))));
    }

    #[test]
    fn shared_bins_cover_both_tasks() {
        let (s, t) = quantize_pair::<f64>(&fig2_source(), &GaussianTaskSpec::new(1.5, -0.5, 0.11)).unwrap();
        assert_eq!(s.features(), t.features());
        assert!(s.features()[99] >= 1.5 + 4.0 * 0.11f64.sqrt() - 1e-12);
    }

    #[test]
    fn sampling_basics() {
        let t = quantize_gaussian_task::<f64>(&fig2_source()).unwrap();
        assert!(sample_dataset(&t, 0, 1).is_empty());

        let deterministic = DiscreteTask::new(t.features().to_vec(), [1.0, 0.0], [t.cond(0).to_vec(), t.cond(1).to_vec()]).unwrap();
        let d = sample_dataset(&deterministic, 500, 9);
        assert!(d.samples().iter().all(|&(c, _)| c == 0));

        assert_eq!(sample_dataset(&t, 64, 42), sample_dataset(&t, 64, 42));
        assert_ne!(sample_dataset(&t, 64, 42), sample_dataset(&t, 64, 43));
    }

    #[test]
    fn law_of_large_numbers_on_prior() {
        let t = quantize_gaussian_task::<f64>(&fig2_source()).unwrap();
        let d = sample_dataset(&t, 100_000, 2024);
        let frac0 = d.class_counts()[0] as f64 / d.len() as f64;
        assert!((frac0 - 0.5).abs() < 0.01, "{frac0}");
    }

    #[test]
    fn class_average_examples() {
        let a = EmbeddingAnsatz::rx_rot_rx();
        let theta = ThetaVector::new([0.3, 1.2, 2.0]);
        let features = vec![-0.5, 0.25, 1.0];
        let point = DiscreteTask::new(features.clone(), [0.5, 0.5], [vec![0.0, 1.0, 0.0], vec![1.0 / 3.0; 3]]).unwrap();
        let rho = class_average_density(&point, &a, &theta, 0).unwrap();
        let direct = a.embed(&theta, 0.25).unwrap();
        assert!(rho.matrix().max_abs_diff(direct.matrix()) < 1e-14);

        let table = TableEmbedding::new(vec![0.0, 1.0], vec![DensityMatrix::basis(2, 0), DensityMatrix::basis(2, 1)]).unwrap();
        let uniform = DiscreteTask::new(vec![0.0, 1.0], [0.5, 0.5], [vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        let rho = class_average_density(&uniform, &table, &ThetaVector::zeros(0), 1).unwrap();
        assert!(rho.matrix().max_abs_diff(DensityMatrix::maximally_mixed(2).matrix()) < 1e-15);

        assert_eq!(class_average_density(&uniform, &table, &ThetaVector::zeros(0), 2).unwrap_err(), Error::InvalidClass(2));
    }

    #[test]
    fn class_average_matches_monte_carlo() {
        let t = quantize_gaussian_task::<f64>(&fig2_source()).unwrap();
        let a = EmbeddingAnsatz::rx_rot_rx();
        let theta = ThetaVector::zeros(3);
        let exact = class_average_density(&t, &a, &theta, 0).unwrap();

        // sampling oracle: average embeddings of 10^6 class-0 draws
        let class0 = DiscreteTask::new(t.features().to_vec(), [1.0, 0.0], [t.cond(0).to_vec(), t.cond(1).to_vec()]).unwrap();
        let data = sample_dataset(&class0, 1_000_000, 77);
        let hist = data.histogram(t.num_bins());
        let mut mc = CMatrix::zeros(2);
        for (i, &k) in hist[0].iter().enumerate() {
            if k > 0 {
                mc.add_scaled(a.embed(&theta, t.features()[i]).unwrap().matrix(), k as f64 / 1e6);
            }
        }
        assert!(mc.max_abs_diff(exact.matrix()) < 1e-3);
    }

    #[test]
    fn empirical_density_weights() {
        let a = EmbeddingAnsatz::rx_rot_rx();
        let theta = ThetaVector::new([0.1, 0.2, 0.3]);
        let features = vec![0.0, 0.5, 1.0];
        let single = Dataset::from_samples(vec![(1, 2)], 3).unwrap();
        let (w1, m1) = empirical_class_density(&single, &features, &a, &theta, 1).unwrap();
        assert_eq!(w1, 1.0);
        assert!(m1.max_abs_diff(a.embed(&theta, 1.0).unwrap().matrix()) < 1e-15);
        let (w0, m0) = empirical_class_density(&single, &features, &a, &theta, 0).unwrap();
        assert_eq!(w0, 0.0);
        assert_eq!(m0.max_abs(), 0.0);

        let balanced = Dataset::from_samples(vec![(0, 0), (1, 1)], 3).unwrap();
        let w: Vec<f64> = (0..2).map(|c| empirical_class_density(&balanced, &features, &a, &theta, c).unwrap().0).collect();
        assert_eq!(w, vec![0.5, 0.5]);

        let empty = Dataset::from_samples(vec![], 3).unwrap();
        assert_eq!(empirical_class_density(&empty, &features, &a, &theta, 0).unwrap_err(), Error::EmptyDataset);
    }

    #[test]
    fn tv_examples() {
        assert_eq!(tv_distance(&[0.2, 0.8], &[0.2, 0.8]).unwrap(), 0.0);
        assert_eq!(tv_distance(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 1.0);
        assert_abs_diff_eq!(tv_distance(&[0.7, 0.3], &[0.5, 0.5]).unwrap(), 0.2, epsilon = 1e-15);
        assert!(matches!(tv_distance(&[1.0], &[0.5, 0.5]), Err(Error::DimMismatch { .. })));
    }

    #[test]
    fn dataset_csv_dump() {
        let d = Dataset::from_samples(vec![(0, 1), (1, 0)], 2).unwrap();
        let task = DiscreteTask::new(vec![-1.0, 0.5], [0.5, 0.5], [vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        let mut buf = Vec::new();
        d.write_csv(&task, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "index,label,x_value,bin_index\n0,0,0.5,1\n1,1,-1,0\n");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn quantization_is_translation_covariant(
            mu0 in -3.0f64..3.0, mu1 in -3.0f64..3.0, sigma2 in 0.05f64..2.0, delta in -2.0f64..2.0
        ) {
            let spec = GaussianTaskSpec::new(mu0, mu1, sigma2);
            let a = quantize_gaussian_task::<f64>(&spec).unwrap();
            let b = quantize_gaussian_task::<f64>(&spec.shifted(delta)).unwrap();
            for (x, y) in a.features().iter().zip(b.features()) {
                prop_assert!((x + delta - y).abs() <= 1e-12);
            }
            for c in 0..2 {
                for (p, q) in a.cond(c).iter().zip(b.cond(c)) {
                    prop_assert!((p - q).abs() <= 1e-12);
                }
            }
        }

        #[test]
        fn class_average_is_a_state(t1 in 0.0f64..6.3, t2 in 0.0f64..6.3, t3 in 0.0f64..6.3, mu in -2.0f64..2.0) {
            let t = quantize_gaussian_task::<f64>(&GaussianTaskSpec::new(mu, -mu, 0.4)).unwrap();
            let a = EmbeddingAnsatz::rx_rot_rx();
            let theta = ThetaVector::new([t1, t2, t3]);
            for c in 0..2 {
                let rho = class_average_density(&t, &a, &theta, c).unwrap();
                prop_assert!((rho.matrix().trace_re() - 1.0).abs() <= 1e-12);
                let eig = crate::qmath::hermitian_eigenvalues(rho.matrix()).unwrap();
                prop_assert!(eig.iter().all(|&l| (-1e-12..=1.0 + 1e-12).contains(&l)));
            }
            // empirical task of a dataset reproduces its own histogram
            let d = sample_dataset(&t, 40, (t1 * 1e6) as u64);
            let emp = t.empirical(&d).unwrap();
            let counts = d.class_counts();
            prop_assert!((emp.prior()[0] - counts[0] as f64 / 40.0).abs() <= 1e-15);
        }
    }
}
