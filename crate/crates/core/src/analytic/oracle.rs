use crate::error::{invalid, Error, Result};
use crate::model::{surface_unchecked, EnergySurfacePoint, ModelParams};

/// Exhaustive minimization of the η→∞ energy surface over the square grid
/// `{i·step : |i·step| ≤ half_width}²`, followed by one separable parabolic
/// refinement around the best grid point. The grid contains the origin.
///
/// This is a brute-force check on the closed-form phase table; it does not
/// use any of the analytic solutions.
pub fn grid_minimize_surface(params: &ModelParams, half_width: f64, step: f64) -> Result<EnergySurfacePoint> {
    params.require_degenerate()?;
    if !(step > 0.0 && step.is_finite()) {
        return Err(invalid("step", "must be positive and finite"));
    }
    if !(half_width >= 0.0 && half_width.is_finite()) {
        return Err(invalid("half_width", "must be non-negative and finite"));
    }
    let k = (half_width / step).floor() as i64;
    if k < 1 {
        return Err(Error::EmptyGrid(format!(
            "half_width {half_width} holds no neighbours at step {step}"
        )));
    }
    let at = |i: i64| i as f64 * step;
    let e = |y1: f64, y2: f64| surface_unchecked(params, y1, y2);

    let (mut bi, mut bj, mut best) = (0i64, 0i64, f64::INFINITY);
    for i in -k..=k {
        let y1 = at(i);
        for j in -k..=k {
            let v = e(y1, at(j));
            if v < best {
                best = v;
                bi = i;
                bj = j;
            }
        }
    }

    // vertex of the parabola through three equally spaced samples
    let vertex = |fm: f64, f0: f64, fp: f64| -> f64 {
        let curv = fm - 2.0 * f0 + fp;
        if curv > 0.0 {
            (0.5 * (fm - fp) / curv).clamp(-1.0, 1.0)
        } else {
            0.0
        }
    };
    let (y1, y2) = (at(bi), at(bj));
    let mut point = EnergySurfacePoint { y1, y2, energy: best };
    if bi.abs() < k && bj.abs() < k {
        let d1 = vertex(e(y1 - step, y2), best, e(y1 + step, y2));
        let d2 = vertex(e(y1, y2 - step), best, e(y1, y2 + step));
        let (r1, r2) = (y1 + d1 * step, y2 + d2 * step);
        let refined = e(r1, r2);
        if refined < best {
            point = EnergySurfacePoint {
                y1: r1,
                y2: r2,
                energy: refined,
            };
        }
    }
    Ok(point)
}
