//! Rejection samplers over arch volumes, cone bases and the lateral surface.
//!
//! Every sampler draws `n` proposals from a simple domain of known measure
//! (spherical shell, sphere, or the triangulated faces through the vertex)
//! and keeps the ones that land in the region. An accepted point carries the
//! weight `measure / n`, so weighted sums are unbiased integrals and the
//! accepted fraction times the measure estimates the region's measure.
//!
//! Proposals are generated in shards of [`SHARD_SIZE`]. Shard `k` draws from
//! a ChaCha8 generator seeded with `seed + k` on a stream that depends on the
//! region, and shard results are combined in shard order, so the output does
//! not depend on how shards are scheduled.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use super::containment::Solid;
use super::regions::{ArchRegion, ConeRegion};
use crate::par;
use crate::Vec3;

pub const SHARD_SIZE: usize = 1 << 16;

/// Samplers refuse regions accepting fewer than this fraction of proposals.
pub const MIN_ACCEPTANCE: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SamplingError {
    #[error("at least one sample is required")]
    NoSamples,
    #[error(
        "acceptance ratio {ratio:.3e} ({accepted}/{proposals}) is below {MIN_ACCEPTANCE:e}; \
         the region is too thin, use a smaller shell"
    )]
    LowAcceptance {
        ratio: f64,
        accepted: usize,
        proposals: usize,
    },
    #[error("fan triangulation of face {face} folds over; lateral sampling needs a star-shaped face")]
    InvalidFan { face: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionTag {
    ArchVolume,
    Base,
    Lateral,
}

impl RegionTag {
    pub(crate) fn stream(self) -> u64 {
        match self {
            RegionTag::ArchVolume => 1,
            RegionTag::Base => 2,
            RegionTag::Lateral => 3,
        }
    }
}

/// Generator for shard `shard` of a run with root `seed`.
pub fn shard_rng(seed: u64, shard: usize, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(shard as u64));
    rng.set_stream(stream);
    rng
}

/// A Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Default)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Self { value, stderr: 0.0 }
    }

    pub fn scale(self, c: f64) -> Estimate {
        Estimate {
            value: c * self.value,
            stderr: c.abs() * self.stderr,
        }
    }
}

/// Sum of independent estimates.
impl std::ops::Add for Estimate {
    type Output = Estimate;

    fn add(self, other: Estimate) -> Estimate {
        Estimate {
            value: self.value + other.value,
            stderr: self.stderr.hypot(other.stderr),
        }
    }
}

/// Running first and second moments of one integrand.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Moments {
    pub sum: f64,
    pub sum_sq: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.sum += x;
        self.sum_sq += x * x;
    }

    fn merge(&mut self, other: &Moments) {
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
    }
}

/// Totals of a streamed run: per-integrand moments over all proposals
/// (rejected proposals contribute zero).
#[derive(Debug, Clone, PartialEq)]
pub struct StreamTotals {
    pub proposals: usize,
    pub accepted: usize,
    /// Measure of the proposal domain.
    pub measure: f64,
    pub moments: Vec<Moments>,
}

impl StreamTotals {
    pub fn acceptance(&self) -> f64 {
        self.accepted as f64 / self.proposals as f64
    }

    /// Estimate of the integral of integrand `k` over the region.
    pub fn integral(&self, k: usize) -> Estimate {
        let n = self.proposals as f64;
        let m = &self.moments[k];
        let mean = m.sum / n;
        let var = if self.proposals > 1 {
            ((m.sum_sq / n - mean * mean) * n / (n - 1.0)).max(0.0)
        } else {
            0.0
        };
        Estimate {
            value: self.measure * mean,
            stderr: self.measure * (var / n).sqrt(),
        }
    }

    /// Estimate of the region's measure.
    pub fn region_measure(&self) -> Estimate {
        let n = self.proposals as f64;
        let p = self.acceptance();
        Estimate {
            value: self.measure * p,
            stderr: self.measure * (p * (1.0 - p) / n).sqrt(),
        }
    }
}

/// An accepted sample point.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Proposal {
    pub point: Vec3,
    pub face: Option<usize>,
}

pub(crate) trait Proposer: Sync {
    fn tag(&self) -> RegionTag;
    fn measure(&self) -> f64;
    fn propose(&self, rng: &mut ChaCha8Rng) -> Option<Proposal>;
}

fn unit_vector(rng: &mut ChaCha8Rng) -> Vec3 {
    let z: f64 = rng.random::<f64>() * 2.0 - 1.0;
    let phi: f64 = rng.random::<f64>() * std::f64::consts::TAU;
    let s = (1.0 - z * z).max(0.0).sqrt();
    Vec3::new(s * phi.cos(), s * phi.sin(), z)
}

struct ShellProposer {
    center: Vec3,
    inner3: f64,
    outer3: f64,
    volume: f64,
    solid: Solid,
}

impl Proposer for ShellProposer {
    fn tag(&self) -> RegionTag {
        RegionTag::ArchVolume
    }

    fn measure(&self) -> f64 {
        self.volume
    }

    fn propose(&self, rng: &mut ChaCha8Rng) -> Option<Proposal> {
        let u: f64 = rng.random();
        let r = (self.inner3 + u * (self.outer3 - self.inner3)).cbrt();
        let x = self.center + unit_vector(rng) * r;
        self.solid.is_inside(&x).then_some(Proposal { point: x, face: None })
    }
}

struct SphereProposer {
    center: Vec3,
    radius: f64,
    solid: Solid,
}

impl Proposer for SphereProposer {
    fn tag(&self) -> RegionTag {
        RegionTag::Base
    }

    fn measure(&self) -> f64 {
        4.0 * std::f64::consts::PI * self.radius * self.radius
    }

    fn propose(&self, rng: &mut ChaCha8Rng) -> Option<Proposal> {
        let x = self.center + unit_vector(rng) * self.radius;
        self.solid.is_inside(&x).then_some(Proposal { point: x, face: None })
    }
}

struct LateralProposer {
    center: Vec3,
    inner: f64,
    outer: f64,
    triangles: Vec<([Vec3; 3], usize)>,
    cumulative: Vec<f64>,
    area: f64,
}

impl LateralProposer {
    fn new(arch: &ArchRegion<'_>) -> Result<Self, SamplingError> {
        let s = arch.surface();
        let mut triangles = Vec::new();
        for f in s.faces_around_vertex(arch.vertex()) {
            if !s.fan_is_valid(f, 0) {
                return Err(SamplingError::InvalidFan { face: f });
            }
            for t in s.fan_triangles(f) {
                triangles.push((t.map(|i| s.vertex(i)), f));
            }
        }
        let mut cumulative = Vec::with_capacity(triangles.len());
        let mut area = 0.0;
        for ([a, b, c], _) in &triangles {
            area += 0.5 * (b - a).cross(&(c - a)).norm();
            cumulative.push(area);
        }
        Ok(Self {
            center: arch.apex(),
            inner: arch.inner_radius(),
            outer: arch.outer_radius(),
            triangles,
            cumulative,
            area,
        })
    }
}

impl Proposer for LateralProposer {
    fn tag(&self) -> RegionTag {
        RegionTag::Lateral
    }

    fn measure(&self) -> f64 {
        self.area
    }

    fn propose(&self, rng: &mut ChaCha8Rng) -> Option<Proposal> {
        let pick = rng.random::<f64>() * self.area;
        let k = self
            .cumulative
            .partition_point(|&c| c <= pick)
            .min(self.triangles.len() - 1);
        let ([a, b, c], face) = self.triangles[k];
        let s = rng.random::<f64>().sqrt();
        let t: f64 = rng.random();
        let x = a * (1.0 - s) + b * (s * (1.0 - t)) + c * (s * t);
        let d = (x - self.center).norm();
        (d >= self.inner && d <= self.outer).then_some(Proposal {
            point: x,
            face: Some(face),
        })
    }
}

pub(super) fn check_acceptance(proposals: usize, accepted: usize) -> Result<(), SamplingError> {
    let ratio = accepted as f64 / proposals as f64;
    if ratio < MIN_ACCEPTANCE {
        return Err(SamplingError::LowAcceptance {
            ratio,
            accepted,
            proposals,
        });
    }
    Ok(())
}

/// Streams `n` proposals, evaluating `integrands` (writing `width` values)
/// at every accepted point, and returns the accumulated moments.
pub(crate) fn stream<P, F>(
    proposer: &P,
    n: usize,
    seed: u64,
    stream_id: u64,
    width: usize,
    integrands: F,
) -> Result<StreamTotals, SamplingError>
where
    P: Proposer,
    F: Fn(&Proposal, &mut [f64]) + Sync + Send,
{
    if n == 0 {
        return Err(SamplingError::NoSamples);
    }
    let shards = n.div_ceil(SHARD_SIZE);
    let parts = par::map_range(shards, |k| {
        let mut rng = shard_rng(seed, k, stream_id);
        let count = SHARD_SIZE.min(n - k * SHARD_SIZE);
        let mut moments = vec![Moments::default(); width];
        let mut vals = vec![0.0; width];
        let mut accepted = 0;
        for _ in 0..count {
            if let Some(p) = proposer.propose(&mut rng) {
                accepted += 1;
                vals.iter_mut().for_each(|v| *v = 0.0);
                integrands(&p, &mut vals);
                for (m, &v) in moments.iter_mut().zip(&vals) {
                    m.push(v);
                }
            }
        }
        (accepted, moments)
    });
    let mut totals = StreamTotals {
        proposals: n,
        accepted: 0,
        measure: proposer.measure(),
        moments: vec![Moments::default(); width],
    };
    for (acc, moments) in &parts {
        totals.accepted += acc;
        for (t, m) in totals.moments.iter_mut().zip(moments) {
            t.merge(m);
        }
    }
    check_acceptance(n, totals.accepted)?;
    Ok(totals)
}

/// Materialized sample of a region.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleBatch {
    pub region: RegionTag,
    pub points: Vec<Vec3>,
    /// Source face of each point (lateral batches only, otherwise empty).
    pub faces: Vec<usize>,
    pub weights: Vec<f64>,
    pub rng_seed: u64,
    pub proposals: usize,
    /// Estimate of the region's measure (volume or area).
    pub measure: Estimate,
}

impl SampleBatch {
    /// Weighted sum of `f` over the batch.
    pub fn integrate(&self, f: impl Fn(&Vec3) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(p, w)| w * f(p)).sum()
    }
}

fn collect<P: Proposer>(proposer: &P, n: usize, seed: u64) -> Result<SampleBatch, SamplingError> {
    if n == 0 {
        return Err(SamplingError::NoSamples);
    }
    let stream_id = proposer.tag().stream();
    let shards = n.div_ceil(SHARD_SIZE);
    let parts = par::map_range(shards, |k| {
        let mut rng = shard_rng(seed, k, stream_id);
        let count = SHARD_SIZE.min(n - k * SHARD_SIZE);
        (0..count)
            .filter_map(|_| proposer.propose(&mut rng))
            .collect::<Vec<_>>()
    });
    let accepted: Vec<Proposal> = parts.into_iter().flatten().collect();
    check_acceptance(n, accepted.len())?;
    let measure = proposer.measure();
    let p = accepted.len() as f64 / n as f64;
    Ok(SampleBatch {
        region: proposer.tag(),
        points: accepted.iter().map(|a| a.point).collect(),
        faces: accepted.iter().filter_map(|a| a.face).collect(),
        weights: vec![measure / n as f64; accepted.len()],
        rng_seed: seed,
        proposals: n,
        measure: Estimate {
            value: measure * p,
            stderr: measure * (p * (1.0 - p) / n as f64).sqrt(),
        },
    })
}

fn shell(arch: &ArchRegion<'_>) -> ShellProposer {
    ShellProposer {
        center: arch.apex(),
        inner3: arch.inner_radius().powi(3),
        outer3: arch.outer_radius().powi(3),
        volume: arch.shell_volume(),
        solid: Solid::new(arch.surface()),
    }
}

fn sphere(cone: &ConeRegion<'_>) -> SphereProposer {
    SphereProposer {
        center: cone.apex(),
        radius: cone.radius(),
        solid: Solid::new(cone.surface()),
    }
}

/// Uniform points in the arch volume, from `n` shell proposals.
pub fn sample_arch(arch: &ArchRegion<'_>, n: usize, seed: u64) -> Result<SampleBatch, SamplingError> {
    collect(&shell(arch), n, seed)
}

/// Uniform points on the base `B(v, r)` of a cone, from `n` sphere proposals.
pub fn sample_base(cone: &ConeRegion<'_>, n: usize, seed: u64) -> Result<SampleBatch, SamplingError> {
    collect(&sphere(cone), n, seed)
}

/// Uniform points on the lateral boundary of the arch (the faces through
/// its vertex, clipped to the shell), from `n` area-weighted proposals.
pub fn sample_lateral(arch: &ArchRegion<'_>, n: usize, seed: u64) -> Result<SampleBatch, SamplingError> {
    collect(&LateralProposer::new(arch)?, n, seed)
}

pub(crate) fn stream_arch<F>(
    arch: &ArchRegion<'_>,
    n: usize,
    seed: u64,
    width: usize,
    f: F,
) -> Result<StreamTotals, SamplingError>
where
    F: Fn(&Proposal, &mut [f64]) + Sync + Send,
{
    stream(&shell(arch), n, seed, RegionTag::ArchVolume.stream(), width, f)
}

/// `stream_offset` separates the inner and outer base of one arch.
pub(crate) fn stream_base<F>(
    cone: &ConeRegion<'_>,
    n: usize,
    seed: u64,
    stream_offset: u64,
    width: usize,
    f: F,
) -> Result<StreamTotals, SamplingError>
where
    F: Fn(&Proposal, &mut [f64]) + Sync + Send,
{
    let id = RegionTag::Base.stream() + 16 * stream_offset;
    stream(&sphere(cone), n, seed, id, width, f)
}

pub(crate) fn stream_lateral<F>(
    arch: &ArchRegion<'_>,
    n: usize,
    seed: u64,
    width: usize,
    f: F,
) -> Result<StreamTotals, SamplingError>
where
    F: Fn(&Proposal, &mut [f64]) + Sync + Send,
{
    stream(
        &LateralProposer::new(arch)?,
        n,
        seed,
        RegionTag::Lateral.stream(),
        width,
        f,
    )
}
