//! Chart-point evaluation, sampling grids and seeded random tensors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::adnum::Jet2;
use crate::error::Result;
use crate::geom::{build_frame, cubic_form_raw, FrameData, FundamentalData};
use crate::tensor::{packed_len3, SymTensor3, Tensor3};
use crate::zoo::{Axis, Immersion, ImmersionFamily};

/// Everything computed at one chart point.
#[derive(Debug, Clone)]
pub struct PointData {
    pub point: Vec<f64>,
    pub jet: Jet2,
    pub frame: FrameData,
    pub sigma_raw: Tensor3,
    pub fund: FundamentalData,
}

pub fn evaluate(family: &dyn Immersion, u: &[f64]) -> Result<PointData> {
    let jet = family.eval(u)?;
    let frame = build_frame(&jet)?;
    let sigma_raw = cubic_form_raw(&jet, &frame);
    let fund = crate::geom::fundamental_forms(&jet, &frame)?;
    Ok(PointData {
        point: u.to_vec(),
        jet,
        frame,
        sigma_raw,
        fund,
    })
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Tensor-product grid with `per_axis` samples per axis. When the full product
/// exceeds `max_points`, a seeded subset of `max_points` lattice points is
/// drawn instead (always including the first lattice point), in lattice order.
pub fn chart_grid(axes: &[Axis], per_axis: usize, max_points: usize, seed: u64) -> Vec<Vec<f64>> {
    let d = axes.len();
    let ticks: Vec<Vec<f64>> = axes.iter().map(|a| a.samples(per_axis)).collect();
    let total = ticks.iter().map(Vec::len).try_fold(1usize, |acc, l| acc.checked_mul(l));
    let point_at = |mut idx: usize| -> Vec<f64> {
        let mut p = vec![0.0; d];
        for a in (0..d).rev() {
            let l = ticks[a].len();
            p[a] = ticks[a][idx % l];
            idx /= l;
        }
        p
    };
    match total {
        Some(t) if t <= max_points => (0..t).map(point_at).collect(),
        _ => {
            let mut r = rng(seed);
            let mut picks: Vec<Vec<usize>> = (0..max_points.max(1))
                .map(|k| {
                    ticks
                        .iter()
                        .map(|tk| if k == 0 { 0 } else { r.random_range(0..tk.len()) })
                        .collect()
                })
                .collect();
            picks.sort();
            picks.dedup();
            picks
                .into_iter()
                .map(|ix| ix.iter().enumerate().map(|(a, i)| ticks[a][*i]).collect())
                .collect()
        }
    }
}

/// [`chart_grid`] over the family's axes, without points where the chart is
/// too distorted (see [`ImmersionFamily::well_conditioned`]).
pub fn family_grid(family: &ImmersionFamily, per_axis: usize, max_points: usize, seed: u64) -> Vec<Vec<f64>> {
    chart_grid(&family.axes(), per_axis, max_points, seed)
        .into_iter()
        .filter(|u| family.well_conditioned(u))
        .collect()
}

/// `count` uniform random well-conditioned chart points, by rejection.
pub fn random_family_points<R: Rng>(family: &ImmersionFamily, count: usize, rng: &mut R) -> Vec<Vec<f64>> {
    let axes = family.axes();
    let mut out = Vec::with_capacity(count);
    // the accepted fraction is bounded below for the built-in charts
    for _ in 0..count.saturating_mul(1000) {
        if out.len() == count {
            break;
        }
        let u: Vec<f64> = axes.iter().map(|a| rng.random_range(a.lo..a.hi)).collect();
        if family.well_conditioned(&u) {
            out.push(u);
        }
    }
    out
}

/// Uniform random points inside the chart box.
pub fn random_chart_points<R: Rng>(axes: &[Axis], count: usize, rng: &mut R) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| axes.iter().map(|a| rng.random_range(a.lo..a.hi)).collect())
        .collect()
}

/// Symmetric 3-tensor with independent standard normal entries.
pub fn random_symmetric<R: Rng>(n: usize, rng: &mut R) -> SymTensor3 {
    let entries = (0..packed_len3(n)).map(|_| rng.sample(StandardNormal)).collect();
    SymTensor3::from_packed(n, entries).expect("packed length")
}

/// Symmetric 3-tensor with vanishing traces.
pub fn random_traceless<R: Rng>(n: usize, rng: &mut R) -> SymTensor3 {
    random_symmetric(n, rng).traceless()
}

pub fn random_covector<R: Rng>(n: usize, scale: f64, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| scale * rng.sample::<f64, _>(StandardNormal)).collect()
}
