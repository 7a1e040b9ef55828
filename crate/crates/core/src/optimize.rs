//! Derivative-free minimisation: Nelder-Mead simplex refinement seeded from
//! a set of candidate points.

use alloc::vec::Vec;

use crate::math::sqrt;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    /// Edge length of the initial simplex along each axis.
    pub initial_step: f64,
    /// Stop once every vertex lies within this distance of the best one.
    pub diameter_tolerance: f64,
    pub max_evaluations: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self { initial_step: 0.1, diameter_tolerance: 1e-8, max_evaluations: 5_000 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub point: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Minimises `f` starting from an axis-aligned simplex around `start`.
pub fn nelder_mead<F>(mut f: F, start: &[f64], options: &NelderMeadOptions) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    let n = start.len();
    let mut evaluations = 0usize;
    let mut eval = |x: &[f64], count: &mut usize| {
        *count += 1;
        let v = f(x);
        if v.is_nan() { f64::INFINITY } else { v }
    };

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(start.to_vec());
    for i in 0..n {
        let mut v = start.to_vec();
        v[i] += options.initial_step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|x| eval(x, &mut evaluations)).collect();

    let mut converged = n == 0;
    while !converged && evaluations < options.max_evaluations {
        // Stable sort keeps the earlier vertex first among equal values.
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        if diameter(&simplex) < options.diameter_tolerance {
            converged = true;
            break;
        }

        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|v| v[j]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();
        let along = |t: f64| -> Vec<f64> {
            centroid.iter().zip(&worst).map(|(c, w)| c + t * (c - w)).collect()
        };

        let reflected = along(REFLECT);
        let f_reflected = eval(&reflected, &mut evaluations);
        if f_reflected < values[0] {
            let expanded = along(EXPAND);
            let f_expanded = eval(&expanded, &mut evaluations);
            if f_expanded < f_reflected {
                simplex[n] = expanded;
                values[n] = f_expanded;
            } else {
                simplex[n] = reflected;
                values[n] = f_reflected;
            }
            continue;
        }
        if f_reflected < values[n - 1] {
            simplex[n] = reflected;
            values[n] = f_reflected;
            continue;
        }
        let (contracted, f_contracted) = if f_reflected < values[n] {
            let p = along(CONTRACT * REFLECT);
            let v = eval(&p, &mut evaluations);
            (p, v)
        } else {
            let p = along(-CONTRACT);
            let v = eval(&p, &mut evaluations);
            (p, v)
        };
        if f_contracted < values[n].min(f_reflected) {
            simplex[n] = contracted;
            values[n] = f_contracted;
            continue;
        }
        let best = simplex[0].clone();
        for i in 1..=n {
            for (x, b) in simplex[i].iter_mut().zip(&best) {
                *x = b + SHRINK * (*x - b);
            }
            values[i] = eval(&simplex[i], &mut evaluations);
        }
    }

    let best = (0..=n).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap_or(0);
    Minimum { point: simplex[best].clone(), value: values[best], evaluations, converged }
}

fn diameter(simplex: &[Vec<f64>]) -> f64 {
    let best = &simplex[0];
    simplex[1..]
        .iter()
        .map(|v| sqrt(v.iter().zip(best).map(|(a, b)| (a - b) * (a - b)).sum()))
        .fold(0.0, f64::max)
}

/// Evaluates `f` at every candidate, refines the `n_refine` best (lowest
/// index wins ties) with Nelder-Mead, and returns the overall best point.
pub fn scan_and_refine<F>(mut f: F, candidates: &[Vec<f64>], n_refine: usize, options: &NelderMeadOptions) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    assert!(!candidates.is_empty(), "need at least one candidate point");
    let scored: Vec<f64> = candidates.iter().map(|c| f(c)).collect();
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&a, &b| scored[a].total_cmp(&scored[b]));

    let first = order[0];
    let mut best = Minimum {
        point: candidates[first].clone(),
        value: scored[first],
        evaluations: candidates.len(),
        converged: false,
    };
    for &idx in order.iter().take(n_refine) {
        let refined = nelder_mead(&mut f, &candidates[idx], options);
        best.evaluations += refined.evaluations;
        if refined.value < best.value {
            best = Minimum { evaluations: best.evaluations, ..refined };
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn quadratic_bowl() {
        let f = |x: &[f64]| (x[0] - 1.0).powi(2) + 10.0 * (x[1] + 2.0).powi(2);
        let m = nelder_mead(f, &[0.0, 0.0], &NelderMeadOptions::default());
        assert!(m.converged);
        assert!((m.point[0] - 1.0).abs() < 1e-7 && (m.point[1] + 2.0).abs() < 1e-7);
        assert!(m.value < 1e-14);
    }

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let opts = NelderMeadOptions { max_evaluations: 20_000, ..Default::default() };
        let m = nelder_mead(f, &[-1.2, 1.0], &opts);
        assert!((m.point[0] - 1.0).abs() < 1e-6, "{:?}", m);
    }

    #[test]
    fn respects_evaluation_budget() {
        let opts = NelderMeadOptions { max_evaluations: 10, ..Default::default() };
        let m = nelder_mead(|x: &[f64]| x[0].abs(), &[5.0], &opts);
        assert!(m.evaluations <= 12);
        assert!(!m.converged);
    }

    #[test]
    fn scan_picks_global_basin() {
        // Two wells; the deeper one is at x = 3.
        let f = |x: &[f64]| ((x[0] + 1.0).powi(2) - 0.5).min((x[0] - 3.0).powi(2) - 1.0);
        let cands: Vec<Vec<f64>> = (0..9).map(|i| vec![-4.0 + i as f64]).collect();
        let m = scan_and_refine(f, &cands, 1, &NelderMeadOptions::default());
        assert!((m.point[0] - 3.0).abs() < 1e-6);
        assert!((m.value + 1.0).abs() < 1e-12);
    }
}
