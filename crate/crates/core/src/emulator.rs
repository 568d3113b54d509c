//! Photon-counting emulation of a time-multiplexed fiber-loop measurement
//! of the walk.
//!
//! Lattice positions map to photon arrival-time bins: every step adds the
//! short-loop delay, and every rightward move trades it for the long-loop
//! delay. Each step a fixed fraction of the circulating light is coupled
//! out and projected in either the HV basis or the diagonal (D/A) basis;
//! detected photon numbers per time bin are Poisson. Reconstruction turns
//! a set of counts tables back into the reduced coin state, entanglement
//! entropy, and IPR, with errors estimated by resampling over independent
//! seeds.

use alloc::{collections::BTreeMap, vec, vec::Vec};
use core::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};
use crate::observables::{self, PositionDistribution, ReducedDensityMatrix};
use crate::walk::{self, WalkParams};

/// Expected-count level below which a bin is recorded as zero without
/// consulting the RNG.
const NEGLIGIBLE_EXPECTATION: f64 = 1e-12;

/// Fewest recorded photons accepted for a reconstruction.
pub const MIN_RECONSTRUCTION_COUNTS: u64 = 100;

/// Loop calibration: per-round-trip survival by polarization, the loss
/// dial, the out-coupled fraction, injected photon number, and delays.
///
/// The total per-step V survival is `survival_v_base * exp(-2 gamma)`; the
/// `exp(-2 gamma)` part is what the walk's loss operator models, so `gamma`
/// here must equal the walk's loss parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopConfig {
    pub survival_h: f64,
    pub survival_v_base: f64,
    pub gamma: f64,
    pub outcoupling: f64,
    pub n0: f64,
    pub long_delay_ns: f64,
    pub short_delay_ns: f64,
    pub rep_rate_khz: f64,
}

impl Default for LoopConfig {
    fn default() -> Self {
        LoopConfig {
            survival_h: 0.58,
            survival_v_base: 0.58,
            gamma: 0.0,
            outcoupling: 0.10,
            n0: 1.0e6,
            long_delay_ns: 155.0,
            short_delay_ns: 150.0,
            rep_rate_khz: 125.0,
        }
    }
}

impl LoopConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, p) in [
            ("survival_h", self.survival_h),
            ("survival_v_base", self.survival_v_base),
            ("outcoupling", self.outcoupling),
        ] {
            if !p.is_finite() || p <= 0.0 || p > 1.0 {
                return Err(Error::Domain {
                    name,
                    value: p,
                    range: "(0, 1]",
                });
            }
        }
        if !self.gamma.is_finite() || self.gamma < 0.0 {
            return Err(Error::Domain {
                name: "gamma",
                value: self.gamma,
                range: "[0, inf)",
            });
        }
        if !self.n0.is_finite() || self.n0 < 1.0 {
            return Err(Error::Domain {
                name: "n0",
                value: self.n0,
                range: "[1, inf)",
            });
        }
        if !(self.long_delay_ns > self.short_delay_ns) || self.short_delay_ns <= 0.0 {
            return Err(Error::Domain {
                name: "long_delay_ns",
                value: self.long_delay_ns,
                range: "(short_delay_ns, inf)",
            });
        }
        if !self.rep_rate_khz.is_finite() || self.rep_rate_khz <= 0.0 {
            return Err(Error::Domain {
                name: "rep_rate_khz",
                value: self.rep_rate_khz,
                range: "(0, inf)",
            });
        }
        Ok(())
    }

    /// Pulse period in nanoseconds.
    pub fn pulse_period_ns(&self) -> f64 {
        1.0e6 / self.rep_rate_khz
    }
}

/// Projection basis of a measurement run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Basis {
    Hv,
    /// Diagonal/antidiagonal basis `(|H> +- |V>) / sqrt(2)`.
    Da,
}

impl Basis {
    pub fn label(&self) -> &'static str {
        match self {
            Basis::Hv => "HV",
            Basis::Da => "DA",
        }
    }

    pub fn outcomes(&self) -> [Outcome; 2] {
        match self {
            Basis::Hv => [Outcome::H, Outcome::V],
            Basis::Da => [Outcome::D, Outcome::A],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Outcome {
    H,
    V,
    D,
    A,
}

impl Outcome {
    pub fn label(&self) -> &'static str {
        match self {
            Outcome::H => "H",
            Outcome::V => "V",
            Outcome::D => "D",
            Outcome::A => "A",
        }
    }
}

/// Photon counts per (position, outcome) for one measurement run. Only
/// parity-allowed positions appear; zero-count bins are kept so the table
/// shape is fixed by the step count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountsTable {
    pub step: usize,
    pub basis: Basis,
    pub counts: BTreeMap<(i32, Outcome), u64>,
    pub seed: u64,
}

impl CountsTable {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn count(&self, position: i32, outcome: Outcome) -> u64 {
        self.counts.get(&(position, outcome)).copied().unwrap_or(0)
    }
}

/// Arrival time (ns) of the bin encoding `position` after `step` steps:
/// every step takes at least the short delay, and each of the
/// `(step + position) / 2` rightward moves adds the long/short difference.
/// Injective over valid (position, step) pairs within one pulse period.
pub fn time_bin_of(position: i32, step: usize, cfg: &LoopConfig) -> Result<f64> {
    let t = step as i64;
    let x = position as i64;
    if x.abs() > t || (t + x) % 2 != 0 {
        return Err(Error::ParityViolation { position, step });
    }
    let n_long = ((t + x) / 2) as f64;
    Ok(step as f64 * cfg.short_delay_ns + n_long * (cfg.long_delay_ns - cfg.short_delay_ns))
}

/// Simulate one measurement run: evolve the exact state, project it in the
/// requested basis, scale by the per-trip survivals and out-coupling, and
/// draw a Poisson count per (site, outcome). Reproducible from the seed.
pub fn simulate_counts(
    params: &WalkParams,
    cfg: &LoopConfig,
    basis: Basis,
    seed: u64,
) -> Result<CountsTable> {
    params.validate()?;
    cfg.validate()?;
    if (cfg.gamma - params.gamma).abs() > 1e-12 {
        return Err(Error::LossMismatch {
            walk_gamma: params.gamma,
            loop_gamma: cfg.gamma,
        });
    }
    let state = walk::evolve(params)?;
    let t = params.steps;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = BTreeMap::new();
    for k in 0..=t {
        let x = 2 * k as i32 - t as i32; // parity-allowed sites, ascending
        let a = state.amp_h(x);
        let b = state.amp_v(x);
        // raw (unnormalized) projection probabilities; the state's own
        // attenuation under loss is already inside the amplitudes
        let [(o1, p1), (o2, p2)] = match basis {
            Basis::Hv => [(Outcome::H, a.norm_sqr()), (Outcome::V, b.norm_sqr())],
            Basis::Da => [
                (Outcome::D, ((a + b) * FRAC_1_SQRT_2).norm_sqr()),
                (Outcome::A, ((a - b) * FRAC_1_SQRT_2).norm_sqr()),
            ],
        };
        // each rightward move is one long-loop trip, each leftward move one
        // short-loop trip, independent of the path taken
        let n_long = (t as i32 + x) / 2;
        let n_short = t as i32 - n_long;
        let trip_survival = cfg.survival_h.powi(n_long) * cfg.survival_v_base.powi(n_short);
        let scale = cfg.n0 * cfg.outcoupling * trip_survival;
        counts.insert((x, o1), draw_poisson(&mut rng, scale * p1));
        counts.insert((x, o2), draw_poisson(&mut rng, scale * p2));
    }
    Ok(CountsTable {
        step: t,
        basis,
        counts,
        seed,
    })
}

fn draw_poisson(rng: &mut ChaCha8Rng, expectation: f64) -> u64 {
    if expectation < NEGLIGIBLE_EXPECTATION {
        return 0;
    }
    let poisson = Poisson::new(expectation).expect("expectation is positive and finite");
    poisson.sample(rng) as u64
}

/// Mix a master seed with a run index into an independent table seed
/// (SplitMix64 finalizer).
pub fn derive_table_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// How to complete Im(chi), which projections in the HV and D/A bases alone
/// cannot determine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChiCompletion {
    /// Assume Im(chi) = 0; exact for walks whose amplitudes stay real
    /// (initial-state angle zero).
    ZeroIm,
    /// Adopt the given exact value, emulating a calibrated setup.
    OracleIm(f64),
}

/// Reconstructed coin state and scalar estimates with 1-sigma errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TomographyResult {
    pub rho_est: ReducedDensityMatrix,
    pub s_e_est: f64,
    pub s_e_err: f64,
    pub ipr_est: f64,
    pub ipr_err: f64,
    pub n_repeats: usize,
}

/// Reconstruct the coin state from paired HV/DA counts tables.
///
/// The i-th HV table is paired with the i-th DA table; each pair yields one
/// estimate of the density matrix, the entropy, and the IPR. The reported
/// estimates are the means over pairs and the errors the standard error of
/// those means (zero when only one pair is supplied). `rho_est` comes from
/// the counts pooled across all pairs, projected onto the physical set.
pub fn reconstruct(tables: &[CountsTable], completion: ChiCompletion) -> Result<TomographyResult> {
    let hv: Vec<&CountsTable> = tables.iter().filter(|t| t.basis == Basis::Hv).collect();
    let da: Vec<&CountsTable> = tables.iter().filter(|t| t.basis == Basis::Da).collect();
    if hv.is_empty() || da.is_empty() {
        return Err(Error::TableMismatch("need at least one HV and one DA table"));
    }
    if hv.len() != da.len() {
        return Err(Error::TableMismatch("need equally many HV and DA tables"));
    }
    let step = hv[0].step;
    if tables.iter().any(|t| t.step != step) {
        return Err(Error::TableMismatch("tables span different step counts"));
    }
    let total: u64 = tables.iter().map(CountsTable::total).sum();
    if total < MIN_RECONSTRUCTION_COUNTS {
        return Err(Error::InsufficientCounts {
            total,
            required: MIN_RECONSTRUCTION_COUNTS,
        });
    }

    let mut s_e_samples = Vec::with_capacity(hv.len());
    let mut ipr_samples = Vec::with_capacity(hv.len());
    for (h, d) in hv.iter().zip(da.iter()) {
        let rho = rho_from_totals(basis_totals(h)?, basis_totals(d)?, completion);
        s_e_samples.push(observables::entanglement_entropy(&rho)?.s_e);
        ipr_samples.push(empirical_ipr(h));
    }

    let pooled_hv = pool_totals(&hv)?;
    let pooled_da = pool_totals(&da)?;
    let rho_est = rho_from_totals(pooled_hv, pooled_da, completion);
    rho_est.validate()?;

    let (s_e_est, s_e_err) = mean_and_standard_error(&s_e_samples);
    let (ipr_est, ipr_err) = mean_and_standard_error(&ipr_samples);
    Ok(TomographyResult {
        rho_est,
        s_e_est,
        s_e_err,
        ipr_est,
        ipr_err,
        n_repeats: hv.len(),
    })
}

/// Per-outcome totals of one table, as (first, second) of its basis.
fn basis_totals(table: &CountsTable) -> Result<(u64, u64)> {
    let [o1, o2] = table.basis.outcomes();
    let mut n1 = 0;
    let mut n2 = 0;
    for (&(_, outcome), &c) in &table.counts {
        if outcome == o1 {
            n1 += c;
        } else if outcome == o2 {
            n2 += c;
        }
    }
    if n1 + n2 == 0 {
        return Err(Error::EmptyTable);
    }
    Ok((n1, n2))
}

fn pool_totals(tables: &[&CountsTable]) -> Result<(u64, u64)> {
    let mut acc = (0u64, 0u64);
    for t in tables {
        let (n1, n2) = basis_totals(t)?;
        acc.0 += n1;
        acc.1 += n2;
    }
    Ok(acc)
}

/// Diagonal entries from HV frequencies, Re(chi) from the D/A imbalance
/// `(p_D - p_A) / 2`, Im(chi) from the completion rule; projected onto the
/// physical set.
fn rho_from_totals(
    hv: (u64, u64),
    da: (u64, u64),
    completion: ChiCompletion,
) -> ReducedDensityMatrix {
    let n_hv = (hv.0 + hv.1) as f64;
    let alpha = hv.0 as f64 / n_hv;
    let beta = hv.1 as f64 / n_hv;
    let n_da = (da.0 + da.1) as f64;
    let re_chi = (da.0 as f64 - da.1 as f64) / (2.0 * n_da);
    let im_chi = match completion {
        ChiCompletion::ZeroIm => 0.0,
        ChiCompletion::OracleIm(im) => im,
    };
    project_to_physical(alpha, beta, C64::new(re_chi, im_chi))
}

/// Nearest unit-trace positive-semidefinite matrix: clamp negative
/// eigenvalues at zero and renormalize the trace.
pub fn project_to_physical(alpha: f64, beta: f64, chi: C64) -> ReducedDensityMatrix {
    let trace = alpha + beta;
    let half_gap = 0.5 * ((alpha - beta) * (alpha - beta) + 4.0 * chi.norm_sqr()).sqrt();
    let lambda1 = (0.5 * trace + half_gap).max(0.0);
    let lambda2 = (0.5 * trace - half_gap).max(0.0);
    let sum = lambda1 + lambda2;
    if sum <= 0.0 || half_gap == 0.0 {
        // no usable eigenstructure: the maximally mixed coin state
        return ReducedDensityMatrix {
            alpha: 0.5,
            beta: 0.5,
            chi: C64::ZERO,
        };
    }
    // eigenvector for lambda1 of [[alpha, chi], [conj(chi), beta]]
    let (v0, v1) = if chi.norm_sqr() > 0.0 {
        (chi, C64::new(0.5 * trace + half_gap - alpha, 0.0))
    } else if alpha >= beta {
        (C64::new(1.0, 0.0), C64::ZERO)
    } else {
        (C64::ZERO, C64::new(1.0, 0.0))
    };
    let norm = (v0.norm_sqr() + v1.norm_sqr()).sqrt();
    let (v0, v1) = (v0 / norm, v1 / norm);
    // the second eigenvector is the orthogonal complement
    let (w0, w1) = (-v1.conj(), v0.conj());
    let l1 = lambda1 / sum;
    let l2 = lambda2 / sum;
    ReducedDensityMatrix {
        alpha: l1 * v0.norm_sqr() + l2 * w0.norm_sqr(),
        beta: l1 * v1.norm_sqr() + l2 * w1.norm_sqr(),
        chi: l1 * v0 * v1.conj() + l2 * w0 * w1.conj(),
    }
}

/// IPR of the empirical per-site frequencies of an HV table.
fn empirical_ipr(table: &CountsTable) -> f64 {
    let mut per_site: BTreeMap<i32, u64> = BTreeMap::new();
    for (&(x, _), &c) in &table.counts {
        *per_site.entry(x).or_insert(0) += c;
    }
    let total: u64 = per_site.values().sum();
    if total == 0 {
        return 0.0;
    }
    let total = total as f64;
    per_site
        .values()
        .map(|&c| {
            let p = c as f64 / total;
            p * p
        })
        .sum()
}

fn mean_and_standard_error(samples: &[f64]) -> (f64, f64) {
    let n = samples.len();
    let mean = samples.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Empirical per-site, per-polarization frequencies of an HV table,
/// normalized to one.
pub fn distribution_from_counts(table: &CountsTable) -> Result<PositionDistribution> {
    if table.basis != Basis::Hv {
        return Err(Error::BasisMismatch);
    }
    let total = table.total();
    if total == 0 {
        return Err(Error::EmptyTable);
    }
    let total = total as f64;
    let t = table.step;
    let n = 2 * t + 1;
    let mut p_h = vec![0.0; n];
    let mut p_v = vec![0.0; n];
    for (&(x, outcome), &c) in &table.counts {
        let i = (x + t as i32) as usize;
        match outcome {
            Outcome::H => p_h[i] += c as f64 / total,
            Outcome::V => p_v[i] += c as f64 / total,
            _ => return Err(Error::BasisMismatch),
        }
    }
    Ok(PositionDistribution::new(t, -(t as i32), p_h, p_v))
}
