//! Hopf–Lax values `ω(t, z) = max_y { −(z − y)²/t + g(y) }` for sampled `g`.

use crate::error::{Error, Result};

/// Values of `g` on an increasing grid, interpolated linearly.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    grid: Vec<f64>,
    values: Vec<f64>,
}

impl SampledFunction {
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.len() < 3 || grid.len() != values.len() {
            return Err(Error::Argument(
                "need at least three samples with matching grid".into(),
            ));
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Argument("grid must increase and values must be finite".into()));
        }
        Ok(Self { grid, values })
    }

    /// `points` equispaced samples of `f` on `[lo, hi]`.
    pub fn uniform(lo: f64, hi: f64, points: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if points < 3 || !(hi > lo) {
            return Err(Error::Argument(format!("bad sampling [{lo}, {hi}] with {points} points")));
        }
        let h = (hi - lo) / (points - 1) as f64;
        let grid: Vec<f64> = (0..points)
            .map(|k| if k + 1 == points { hi } else { lo + h * k as f64 })
            .collect();
        let values = grid.iter().map(|&y| f(y)).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// How the maximum over `y` is resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HopfLaxMethod {
    /// Exact maximum over the piecewise-linear interpolant. Order preserving.
    #[default]
    PiecewiseLinear,
    /// Best node, refined with the quadratic through it and its neighbours.
    QuadraticRefinement,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopfLaxValue {
    pub value: f64,
    pub maximizer: f64,
    /// The maximizer sits on an end of the grid; the window may be too small.
    pub at_boundary: bool,
}

pub fn hopflax_solve(g: &SampledFunction, t: f64, z: f64) -> Result<HopfLaxValue> {
    hopflax_solve_with(g, t, z, HopfLaxMethod::default())
}

pub fn hopflax_solve_with(
    g: &SampledFunction,
    t: f64,
    z: f64,
    method: HopfLaxMethod,
) -> Result<HopfLaxValue> {
    if !(t > 0.0) || !t.is_finite() || !z.is_finite() {
        return Err(Error::Argument(format!("need t > 0 and finite z, got t = {t}, z = {z}")));
    }
    let (ys, gs) = (&g.grid, &g.values);
    let objective = |y: f64, gy: f64| -(z - y) * (z - y) / t + gy;
    let (mut best, mut arg) = (f64::NEG_INFINITY, ys[0]);
    let mut best_node = 0;
    for (i, (&y, &gy)) in ys.iter().zip(gs).enumerate() {
        let v = objective(y, gy);
        if v > best {
            best = v;
            arg = y;
            best_node = i;
        }
    }
    match method {
        HopfLaxMethod::PiecewiseLinear => {
            for i in 0..ys.len() - 1 {
                let (a, b) = (ys[i], ys[i + 1]);
                let slope = (gs[i + 1] - gs[i]) / (b - a);
                let y = (z + 0.5 * slope * t).clamp(a, b);
                if y > a && y < b {
                    let v = objective(y, gs[i] + slope * (y - a));
                    if v > best {
                        best = v;
                        arg = y;
                    }
                }
            }
        }
        HopfLaxMethod::QuadraticRefinement => {
            if best_node > 0 && best_node + 1 < ys.len() {
                let (y0, y1, y2) = (ys[best_node - 1], ys[best_node], ys[best_node + 1]);
                let (g0, g1, g2) = (gs[best_node - 1], gs[best_node], gs[best_node + 1]);
                // q(y) = g1 + c1 (y − y1) + c2 (y − y1)²
                let d01 = (g1 - g0) / (y1 - y0);
                let d12 = (g2 - g1) / (y2 - y1);
                let c2 = (d12 - d01) / (y2 - y0);
                let c1 = d01 + c2 * (y1 - y0);
                // objective curvature −1/t + c2 must be negative for an interior vertex
                let curv = c2 - 1.0 / t;
                if curv < 0.0 {
                    let y = ((z - y1) / t + 0.5 * c1) / (-curv) + y1;
                    let y = y.clamp(y0, y2);
                    let d = y - y1;
                    let v = objective(y, g1 + c1 * d + c2 * d * d);
                    if v > best {
                        best = v;
                        arg = y;
                    }
                }
            }
        }
    }
    let (lo, hi) = (ys[0], ys[ys.len() - 1]);
    let tol = 1e-12 * (hi - lo);
    Ok(HopfLaxValue {
        value: best,
        maximizer: arg,
        at_boundary: arg - lo <= tol || hi - arg <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::Sampler;

    #[test]
    fn zero_datum() {
        let g = SampledFunction::uniform(-2.0, 2.0, 101, |_| 0.0).unwrap();
        for z in [-1.0, 0.0, 0.3, 1.5] {
            let w = hopflax_solve(&g, 0.5, z).unwrap();
            assert!(w.value.abs() < 1e-15);
            assert!(!w.at_boundary);
        }
    }

    #[test]
    fn quadratic_envelope() {
        // max_y −(z−y)²/t + c y² = c z² / (1 − c t) for c t < 1
        let (c, t) = (0.5, 0.8);
        let g = SampledFunction::uniform(-4.0, 4.0, 1001, |y| c * y * y).unwrap();
        let h = 8.0 / 1000.0;
        for k in 0..21 {
            let z = -1.0 + 0.1 * k as f64;
            let exact = c * z * z / (1.0 - c * t);
            let q = hopflax_solve_with(&g, t, z, HopfLaxMethod::QuadraticRefinement).unwrap();
            assert!((q.value - exact).abs() < 1e-8, "z = {z}");
            let p = hopflax_solve(&g, t, z).unwrap();
            assert!(p.value >= exact - 1e-12 && p.value <= exact + c * h * h / 4.0 + 1e-12);
        }
    }

    #[test]
    fn boundary_maximizer_is_flagged() {
        let g = SampledFunction::uniform(-1.0, 1.0, 51, |y| 10.0 * y).unwrap();
        assert!(hopflax_solve(&g, 1.0, 0.0).unwrap().at_boundary);
    }

    #[test]
    fn order_preserving() {
        let mut s = Sampler::new(21);
        let grid_pts = 201;
        for _ in 0..5 {
            let a: Vec<f64> = (0..5).map(|_| s.symmetric_unit(1.0)).collect();
            let bump: Vec<f64> = (0..grid_pts).map(|_| s.uniform(0.0, 0.1)).collect();
            let g1 = SampledFunction::uniform(-3.0, 3.0, grid_pts, |y| {
                a.iter().enumerate().map(|(k, c)| c * (k as f64 * y).sin()).sum::<f64>() - 0.1 * y * y
            })
            .unwrap();
            let v2 = g1.values().iter().zip(&bump).map(|(x, b)| x + b).collect();
            let g2 = SampledFunction::new(g1.grid().to_vec(), v2).unwrap();
            for &z in g1.grid().iter().step_by(10) {
                let w1 = hopflax_solve(&g1, 0.7, z).unwrap().value;
                let w2 = hopflax_solve(&g2, 0.7, z).unwrap().value;
                assert!(w1 <= w2 + 1e-12);
            }
        }
    }

    #[test]
    fn rejects_nonpositive_time() {
        let g = SampledFunction::uniform(-1.0, 1.0, 11, |y| y).unwrap();
        assert!(hopflax_solve(&g, 0.0, 0.0).is_err());
    }
}
