//! Stationary Gaussian noise with a prescribed two-sided power spectral
//! density, spectral differentiation, and periodogram re-estimation.
//!
//! Fourier conventions, in one place because the 2 pi factor is the classic
//! silent bug: the continuous pair is F[omega] = integral dt F(t) e^{i omega t},
//! the autocorrelation maps to the PSD through the same kernel, and the
//! variance of a process is (1/2pi) integral C[omega] d omega. On the
//! discrete grid (n samples, step dt) the bin frequencies are
//! omega_k = 2 pi k / (n dt) with k interpreted symmetrically around zero,
//! and a periodogram estimates the two-sided density as |X_k|^2 dt / n, which
//! makes the white-noise level sigma^2 dt and satisfies Parseval exactly.
//!
//! Synthesis is frequency-domain coloring: each resolved bin receives an
//! independent circular complex Gaussian coefficient with mean square
//! n C_hh[omega_k] / dt, and one inverse transform produces the complex
//! circular polarization h(t). This realizes h = (h_A - i h_B)/sqrt(2) with
//! h_A, h_B independent real processes of PSD C_hh each: the even symmetry
//! of C_hh makes real and imaginary parts independent with the correct
//! levels, so the PSD of h itself is C_hh.

use std::cell::RefCell;
use std::io::Write;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;

use crate::background::GwSpectrum;
use crate::error::{Error, Result};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn fft_in_place(buf: &mut [Complex64], inverse: bool) {
    PLANNER.with(|p| {
        let fft = if inverse {
            p.borrow_mut().plan_fft_inverse(buf.len())
        } else {
            p.borrow_mut().plan_fft_forward(buf.len())
        };
        fft.process(buf);
    });
}

/// Uniform sampling grid: `n` samples (power of two, at least 16) spaced `dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingGrid {
    n: usize,
    dt: f64,
}

impl SamplingGrid {
    pub fn new(n: usize, dt: f64) -> Result<Self> {
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::invalid("n", "a power of two not below 16", n as f64));
        }
        if dt <= 0.0 || !dt.is_finite() {
            return Err(Error::invalid("dt", "strictly positive and finite", dt));
        }
        Ok(SamplingGrid { n, dt })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn duration(&self) -> f64 {
        self.n as f64 * self.dt
    }

    /// Frequency resolution 2 pi / duration [rad/s].
    pub fn delta_omega(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.duration()
    }

    /// Nyquist angular frequency pi / dt [rad/s].
    pub fn nyquist(&self) -> f64 {
        std::f64::consts::PI / self.dt
    }

    /// Signed bin frequency for index k in 0..n.
    pub fn omega_at(&self, k: usize) -> f64 {
        let k = k % self.n;
        let signed = if k <= self.n / 2 {
            k as f64
        } else {
            k as f64 - self.n as f64
        };
        signed * self.delta_omega()
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|i| i as f64 * self.dt)
    }
}

/// Seed of one realization: a root seed plus a stream index, mapped onto the
/// counter-based generator so that ensemble members are independent and
/// reproducible regardless of execution order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RealizationSeed {
    pub root: u64,
    pub stream: u64,
}

impl RealizationSeed {
    pub fn new(root: u64) -> Self {
        RealizationSeed { root, stream: 0 }
    }

    /// Stream `i` derived from the same root.
    pub fn derive(root: u64, i: u64) -> Self {
        RealizationSeed { root, stream: i }
    }

    fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.root);
        rng.set_stream(self.stream);
        rng
    }
}

/// One sampled complex metric-perturbation series h(t).
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseRealization {
    samples: Vec<Complex64>,
    grid: SamplingGrid,
    seed: RealizationSeed,
}

impl NoiseRealization {
    /// Wrap an externally built series (tests, tools).
    pub fn from_samples(grid: SamplingGrid, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.n() {
            return Err(Error::GridMismatch {
                expected_n: grid.n(),
                expected_dt: grid.dt(),
                got_n: samples.len(),
                got_dt: grid.dt(),
            });
        }
        Ok(NoiseRealization {
            samples,
            grid,
            seed: RealizationSeed::new(0),
        })
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn grid(&self) -> SamplingGrid {
        self.grid
    }

    pub fn seed(&self) -> RealizationSeed {
        self.seed
    }

    /// Dump as text CSV `t,h_re,h_im` with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "t,h_re,h_im")?;
        for (t, s) in self.grid.times().zip(&self.samples) {
            writeln!(out, "{:.16e},{:.16e},{:.16e}", t, s.re, s.im)?;
        }
        Ok(())
    }
}

/// Draw one realization of h(t) with two-sided PSD `spectrum` on `grid`.
///
/// Deterministic in (spectrum, grid, seed). Errors when the grid cannot
/// resolve the spectrum's support.
pub fn synthesize(
    spectrum: &GwSpectrum,
    grid: SamplingGrid,
    seed: RealizationSeed,
) -> Result<NoiseRealization> {
    if let Some(top) = spectrum.support_max() {
        if top > grid.nyquist() {
            return Err(Error::GridTooCoarse {
                nyquist: grid.nyquist(),
                required: top,
            });
        }
    }
    let n = grid.n();
    let mut rng = seed.rng();
    let mut bins = vec![Complex64::new(0.0, 0.0); n];
    // Scale so that E|X_k|^2 = n S(omega_k) / dt; the inverse transform
    // below carries the 1/n.
    for (k, bin) in bins.iter_mut().enumerate() {
        let target = spectrum.synthesis_level(grid.omega_at(k))?;
        if target > 0.0 {
            let sigma = (0.5 * n as f64 * target / grid.dt()).sqrt();
            let g1: f64 = standard_normal(&mut rng);
            let g2: f64 = standard_normal(&mut rng);
            *bin = Complex64::new(sigma * g1, sigma * g2);
        }
    }
    fft_in_place(&mut bins, true);
    let scale = 1.0 / n as f64;
    for b in bins.iter_mut() {
        *b *= scale;
    }
    Ok(NoiseRealization {
        samples: bins,
        grid,
        seed,
    })
}

/// Box-Muller standard normal from the counter-based generator. Two uniform
/// draws per call keeps the consumption pattern fixed and reproducible.
fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    loop {
        let u1: f64 = rng.gen::<f64>();
        let u2: f64 = rng.gen::<f64>();
        if u1 > 0.0 {
            let r = (-2.0 * u1.ln()).sqrt();
            return r * (2.0 * std::f64::consts::PI * u2).cos();
        }
    }
}

/// Series whose Fourier coefficients are those of the input multiplied by
/// -omega_k^2: the exact second derivative of a band-limited series.
pub fn second_derivative(realization: &NoiseRealization) -> NoiseRealization {
    let n = realization.grid.n();
    let mut bins = realization.samples.clone();
    fft_in_place(&mut bins, false);
    for (k, bin) in bins.iter_mut().enumerate() {
        let w = realization.grid.omega_at(k);
        *bin *= -w * w;
    }
    fft_in_place(&mut bins, true);
    let scale = 1.0 / n as f64;
    for b in bins.iter_mut() {
        *b *= scale;
    }
    NoiseRealization {
        samples: bins,
        grid: realization.grid,
        seed: realization.seed,
    }
}

/// Two-sided averaged-periodogram PSD estimate, frequencies ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedPsd {
    pub omega: Vec<f64>,
    pub psd: Vec<f64>,
}

impl TabulatedPsd {
    /// Mean estimate over bins with omega in [lo, hi].
    pub fn band_average(&self, lo: f64, hi: f64) -> Result<f64> {
        let mut sum = 0.0;
        let mut count = 0usize;
        for (w, p) in self.omega.iter().zip(&self.psd) {
            if *w >= lo && *w <= hi {
                sum += p;
                count += 1;
            }
        }
        if count == 0 {
            return Err(Error::invalid("band", "containing at least one bin", lo));
        }
        Ok(sum / count as f64)
    }
}

/// Averaged periodogram over `segment_count` non-overlapping, mean-removed,
/// rectangular segments. Normalized so that the integral of the estimate
/// over omega/(2 pi) equals the series variance.
pub fn estimate_psd(series: &[Complex64], dt: f64, segment_count: usize) -> Result<TabulatedPsd> {
    if segment_count == 0 {
        return Err(Error::invalid("segment_count", "at least 1", 0.0));
    }
    let seg_len = series.len() / segment_count;
    if seg_len < 2 {
        return Err(Error::SegmentTooLong {
            segments: segment_count,
            len: series.len(),
        });
    }
    let mut acc = vec![0.0f64; seg_len];
    let mut buf = vec![Complex64::new(0.0, 0.0); seg_len];
    for s in 0..segment_count {
        let segment = &series[s * seg_len..(s + 1) * seg_len];
        let mean = segment.iter().sum::<Complex64>() / seg_len as f64;
        for (b, x) in buf.iter_mut().zip(segment) {
            *b = x - mean;
        }
        fft_in_place(&mut buf, false);
        for (a, b) in acc.iter_mut().zip(&buf) {
            *a += b.norm_sqr();
        }
    }
    let scale = dt / (seg_len as f64 * segment_count as f64);
    // fftshift to ascending frequency order.
    let half = seg_len / 2;
    let mut omega = Vec::with_capacity(seg_len);
    let mut psd = Vec::with_capacity(seg_len);
    let d_omega = 2.0 * std::f64::consts::PI / (seg_len as f64 * dt);
    for j in 0..seg_len {
        let signed = j as isize - half as isize;
        let k = ((signed + seg_len as isize) % seg_len as isize) as usize;
        omega.push(signed as f64 * d_omega);
        psd.push(acc[k] * scale);
    }
    Ok(TabulatedPsd { omega, psd })
}

/// Sample excess kurtosis, the Gaussianity figure used by the validation
/// suite (zero for a normal population).
pub fn excess_kurtosis(samples: &[f64]) -> f64 {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let m2 = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let m4 = samples.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;
    m4 / (m2 * m2) - 3.0
}
