use serde::Serialize;

use super::dataset::{SweepDataset, SweepPoint};
use crate::error::{invalid, Error, Result};

/// Grid points of the coarse ν scan that brackets the golden-section search.
const COARSE_SCAN: usize = 25;
const GOLDEN_TOL: f64 = 1e-7;

/// A data point in collapse coordinates x = η^{1/ν}·r, y = (n/η)·η^{−slope},
/// with r = (R − Rc)/Rc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CollapsedPoint {
    pub eta: f64,
    pub coupling: f64,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CollapseResult {
    pub nu: f64,
    pub collapse_cost: f64,
    /// Spread max(y) − min(y) of the collapsed data at `nu`.
    pub y_range: f64,
}

impl CollapseResult {
    /// `collapse_cost` divided by the squared spread of y.
    pub fn relative_cost(&self) -> f64 {
        self.collapse_cost / (self.y_range * self.y_range)
    }
}

pub fn collapsed_points(data: &SweepDataset, rc: f64, slope: f64, nu: f64) -> Vec<CollapsedPoint> {
    data.points()
        .into_iter()
        .map(|p| CollapsedPoint {
            eta: p.eta,
            coupling: p.coupling,
            x: p.eta.powf(1.0 / nu) * (p.coupling - rc) / rc,
            y: p.n_over_eta * p.eta.powf(-slope),
        })
        .collect()
}

/// Least-squares monotone fit (pool adjacent violators) of `y`, assumed
/// sorted by abscissa. Non-decreasing when `increasing`, else non-increasing.
pub fn isotonic_fit(y: &[f64], increasing: bool) -> Vec<f64> {
    let sign = if increasing { 1.0 } else { -1.0 };
    // blocks of (mean, weight)
    let mut blocks: Vec<(f64, usize)> = Vec::with_capacity(y.len());
    for &v in y {
        blocks.push((sign * v, 1));
        while blocks.len() > 1 {
            let (m2, w2) = blocks[blocks.len() - 1];
            let (m1, w1) = blocks[blocks.len() - 2];
            if m1 <= m2 {
                break;
            }
            blocks.truncate(blocks.len() - 2);
            blocks.push(((m1 * w1 as f64 + m2 * w2 as f64) / (w1 + w2) as f64, w1 + w2));
        }
    }
    blocks
        .into_iter()
        .flat_map(|(m, w)| std::iter::repeat(sign * m).take(w))
        .collect()
}

/// Monotone piecewise-linear curve through pooled points.
struct Reference {
    x: Vec<f64>,
    y: Vec<f64>,
}

impl Reference {
    fn new(mut pts: Vec<(f64, f64)>, increasing: bool) -> Self {
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
        let fitted = isotonic_fit(&ys, increasing);
        let mut x: Vec<f64> = Vec::with_capacity(pts.len());
        let mut y: Vec<f64> = Vec::with_capacity(pts.len());
        let mut count = 0usize;
        for (p, f) in pts.iter().zip(fitted) {
            if x.last() == Some(&p.0) {
                // equal abscissae share one node at their mean
                count += 1;
                let last = y.last_mut().expect("node exists");
                *last += (f - *last) / count as f64;
            } else {
                x.push(p.0);
                y.push(f);
                count = 1;
            }
        }
        Self { x, y }
    }

    fn eval(&self, t: f64) -> Option<f64> {
        let (lo, hi) = (*self.x.first()?, *self.x.last()?);
        if t < lo || t > hi {
            return None;
        }
        if self.x.len() == 1 {
            return Some(self.y[0]);
        }
        let j = self.x.partition_point(|&v| v <= t).clamp(1, self.x.len() - 1);
        let (x0, x1) = (self.x[j - 1], self.x[j]);
        let w = (t - x0) / (x1 - x0);
        Some(self.y[j - 1] + w * (self.y[j] - self.y[j - 1]))
    }
}

/// Prepared dataset for repeated cost evaluations.
struct Curves {
    /// Per η: (ln η, list of (r, y)).
    curves: Vec<(f64, Vec<(f64, f64)>)>,
    increasing: bool,
}

impl Curves {
    fn new(data: &SweepDataset, rc: f64, slope: f64) -> Result<Self> {
        if !(rc > 0.0 && rc.is_finite()) {
            return Err(invalid("rc", format!("must be positive and finite, got {rc}")));
        }
        if !slope.is_finite() {
            return Err(invalid("slope", format!("must be finite, got {slope}")));
        }
        if data.etas().len() < 2 {
            return Err(Error::InsufficientData(format!(
                "collapse needs at least 2 eta values, got {}",
                data.etas().len()
            )));
        }
        let rs: Vec<f64> = data.couplings().iter().map(|c| (c - rc) / rc).collect();
        if rs.len() < 2 || rs.iter().all(|&r| r == 0.0) {
            return Err(Error::DegenerateRange("reduced couplings span no interval".into()));
        }
        let curves: Vec<(f64, Vec<(f64, f64)>)> = data
            .etas()
            .iter()
            .enumerate()
            .map(|(ie, &eta)| {
                let scale = eta.powf(-slope);
                let pts = rs.iter().enumerate().map(|(ir, &r)| (r, data.value(ir, ie) * scale)).collect();
                (eta.ln(), pts)
            })
            .collect();
        // orientation from the pooled trend of y against r
        let (mut sr, mut sy, mut sry, mut n) = (0.0, 0.0, 0.0, 0.0);
        for (_, pts) in &curves {
            for &(r, y) in pts {
                sr += r;
                sy += y;
                sry += r * y;
                n += 1.0;
            }
        }
        let increasing = n * sry - sr * sy >= 0.0;
        Ok(Self { curves, increasing })
    }

    fn scaled(&self, nu: f64) -> Vec<Vec<(f64, f64)>> {
        self.curves
            .iter()
            .map(|(ln_eta, pts)| {
                let s = (ln_eta / nu).exp();
                pts.iter().map(|&(r, y)| (s * r, y)).collect()
            })
            .collect()
    }

    /// Mean squared vertical distance of every point from the monotone
    /// interpolant of the other curves, over points inside that curve's
    /// x-range. Infinite when no curve overlaps another.
    fn cost(&self, nu: f64) -> f64 {
        let scaled = self.scaled(nu);
        let mut sum = 0.0;
        let mut count = 0usize;
        for (i, own) in scaled.iter().enumerate() {
            let others: Vec<(f64, f64)> = scaled
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .flat_map(|(_, c)| c.iter().copied())
                .collect();
            let reference = Reference::new(others, self.increasing);
            for &(x, y) in own {
                if let Some(f) = reference.eval(x) {
                    sum += (y - f) * (y - f);
                    count += 1;
                }
            }
        }
        if count == 0 {
            f64::INFINITY
        } else {
            sum / count as f64
        }
    }

    fn y_range(&self) -> f64 {
        let ys = self.curves.iter().flat_map(|(_, c)| c.iter().map(|p| p.1));
        let (lo, hi) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), y| (lo.min(y), hi.max(y)));
        hi - lo
    }
}

/// Collapse cost at a fixed ν; see [`collapse_nu`].
pub fn collapse_cost(data: &SweepDataset, rc: f64, slope: f64, nu: f64) -> Result<f64> {
    if !(nu > 0.0 && nu.is_finite()) {
        return Err(invalid("nu", format!("must be positive and finite, got {nu}")));
    }
    Ok(Curves::new(data, rc, slope)?.cost(nu))
}

pub(super) fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Correlation-length exponent ν that best collapses the data.
///
/// Points are mapped to x = η^{1/ν}·(R − Rc)/Rc and y = (n/η)·η^{−slope}.
/// The cost of a candidate ν is the mean squared vertical deviation of each
/// η-curve from the monotone piecewise-linear interpolant of the pooled
/// points of all other curves. A uniform scan over `nu_range` brackets the
/// minimum, which is then polished by golden-section search.
pub fn collapse_nu(data: &SweepDataset, rc: f64, slope: f64, nu_range: (f64, f64)) -> Result<CollapseResult> {
    let (lo, hi) = nu_range;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(invalid("nu_range", format!("need 0 < lo < hi, got ({lo}, {hi})")));
    }
    let curves = Curves::new(data, rc, slope)?;
    let grid: Vec<f64> = (0..COARSE_SCAN)
        .map(|k| lo + (hi - lo) * k as f64 / (COARSE_SCAN - 1) as f64)
        .collect();
    let costs: Vec<f64> = grid.iter().map(|&nu| curves.cost(nu)).collect();
    let k = (0..grid.len())
        .min_by(|&a, &b| costs[a].total_cmp(&costs[b]))
        .expect("non-empty scan");
    if !costs[k].is_finite() {
        return Err(Error::DegenerateRange("no two eta curves overlap for any nu in range".into()));
    }
    let a = grid[k.saturating_sub(1)];
    let b = grid[(k + 1).min(grid.len() - 1)];
    let nu = golden_section(|nu| curves.cost(nu), a, b, GOLDEN_TOL);
    let (nu, cost) = if curves.cost(nu) <= costs[k] {
        (nu, curves.cost(nu))
    } else {
        (grid[k], costs[k])
    };
    Ok(CollapseResult {
        nu,
        collapse_cost: cost,
        y_range: curves.y_range(),
    })
}

/// Parameters of an exactly scaling synthetic dataset
/// n/η = η^{−κ/ν}·g(η^{1/ν}·(R − Rc)/Rc).
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub rc: f64,
    pub kappa_over_nu: f64,
    pub nu: f64,
    pub etas: Vec<f64>,
    pub couplings: Vec<f64>,
}

/// Smooth, positive, increasing profile ½(x + √(x² + 1)) that is linear on
/// the ordered side and decays like 1/(4|x|) on the disordered side.
pub fn smooth_profile(x: f64) -> f64 {
    0.5 * (x + x.hypot(1.0))
}

/// Points (η, R, n/η) of the synthetic law, ordered by η then R.
pub fn synthetic_points(spec: &SyntheticSpec, profile: impl Fn(f64) -> f64) -> Vec<SweepPoint> {
    let mut out = Vec::with_capacity(spec.etas.len() * spec.couplings.len());
    for &eta in &spec.etas {
        for &coupling in &spec.couplings {
            let r = (coupling - spec.rc) / spec.rc;
            out.push(SweepPoint {
                eta,
                coupling,
                n_over_eta: eta.powf(-spec.kappa_over_nu) * profile(eta.powf(1.0 / spec.nu) * r),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isotonic_fit_pools_violators() {
        assert_eq!(isotonic_fit(&[1.0, 3.0, 2.0, 4.0], true), vec![1.0, 2.5, 2.5, 4.0]);
        assert_eq!(isotonic_fit(&[1.0, 3.0, 2.0], false), vec![2.0, 2.0, 2.0]);
        let sorted = [0.0, 0.5, 0.5, 2.0];
        assert_eq!(isotonic_fit(&sorted, true), sorted.to_vec());
    }

    #[test]
    fn reference_interpolates_and_merges_ties() {
        let r = Reference::new(vec![(0.0, 0.0), (1.0, 1.0), (1.0, 3.0), (2.0, 4.0)], true);
        assert_eq!(r.x, vec![0.0, 1.0, 2.0]);
        assert_eq!(r.y, vec![0.0, 2.0, 4.0]);
        assert_eq!(r.eval(0.5), Some(1.0));
        assert_eq!(r.eval(2.0), Some(4.0));
        assert_eq!(r.eval(2.5), None);
    }

    #[test]
    fn golden_section_finds_a_parabola_minimum() {
        let x = golden_section(|x| (x - 1.3).powi(2), 0.0, 3.0, 1e-9);
        assert!((x - 1.3).abs() < 1e-8);
    }
}
