//! Nelder-Mead simplex minimisation with box projection and restarts.

use rand::Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct NelderMead {
    pub max_iter: usize,
    /// Convergence when the simplex spread in objective value falls below
    /// `f_tol * (1 + |f_best|)`.
    pub f_tol: f64,
    pub restarts: usize,
}

impl Default for NelderMead {
    fn default() -> Self {
        NelderMead {
            max_iter: 5000,
            f_tol: 1e-10,
            restarts: 5,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
}

impl NelderMead {
    /// Minimises `f` from `x0`. `project` maps any point into the feasible
    /// box; every trial vertex is projected before evaluation. Restarts
    /// rebuild the simplex around the incumbent with randomly perturbed steps
    /// and stop once a restart no longer improves the objective.
    pub fn minimize<F, P, R>(
        &self,
        f: F,
        project: P,
        x0: &[f64],
        step: &[f64],
        rng: &mut R,
    ) -> Result<Minimum>
    where
        F: Fn(&[f64]) -> f64,
        P: Fn(&mut [f64]),
        R: Rng + ?Sized,
    {
        let mut best = self.run(&f, &project, x0, step)?;
        let mut total_iter = best.0.iterations;
        let mut converged = best.1;
        for _ in 0..self.restarts {
            let jitter: Vec<f64> = step
                .iter()
                .map(|s| s * rng.random_range(0.5..1.5))
                .collect();
            let (cand, ok) = self.run(&f, &project, &best.0.x, &jitter)?;
            total_iter += cand.iterations;
            let improved = best.0.f - cand.f > self.f_tol * (1.0 + best.0.f.abs());
            if cand.f < best.0.f {
                converged = ok;
                best.0 = cand;
            } else {
                converged |= ok;
            }
            if !improved {
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence {
                iterations: total_iter,
                objective: best.0.f,
                last: best.0.x,
            });
        }
        best.0.iterations = total_iter;
        Ok(best.0)
    }

    fn run<F, P>(&self, f: &F, project: &P, x0: &[f64], step: &[f64]) -> Result<(Minimum, bool)>
    where
        F: Fn(&[f64]) -> f64,
        P: Fn(&mut [f64]),
    {
        let n = x0.len();
        let eval = |x: &mut Vec<f64>| {
            project(x);
            let v = f(x);
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        };
        if n == 0 {
            let mut x = Vec::new();
            let v = eval(&mut x);
            return Ok((Minimum { x, f: v, iterations: 0 }, true));
        }

        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        let mut start = x0.to_vec();
        let f0 = eval(&mut start);
        simplex.push((start.clone(), f0));
        for i in 0..n {
            let mut v = start.clone();
            v[i] += if step[i] != 0.0 { step[i] } else { 1e-3 };
            let mut fv = eval(&mut v);
            if v[i] == start[i] {
                // projection undid the step; try the other direction
                v[i] = start[i] - step[i];
                fv = eval(&mut v);
            }
            simplex.push((v, fv));
        }
        if simplex.iter().all(|(_, v)| v.is_infinite()) {
            return Err(Error::numerical("objective is not finite at the starting simplex"));
        }

        let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
        let mut iterations = 0;
        let mut converged = false;
        while iterations < self.max_iter {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let f_best = simplex[0].1;
            let f_worst = simplex[n].1;
            if (f_worst - f_best).abs() <= self.f_tol * (1.0 + f_best.abs()) {
                converged = true;
                break;
            }
            iterations += 1;

            let mut centroid = vec![0.0; n];
            for (v, _) in &simplex[..n] {
                for (c, x) in centroid.iter_mut().zip(v) {
                    *c += x / n as f64;
                }
            }
            let along = |t: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(&simplex[n].0)
                    .map(|(c, w)| c + t * (c - w))
                    .collect()
            };

            let mut xr = along(alpha);
            let fr = eval(&mut xr);
            if fr < simplex[0].1 {
                let mut xe = along(gamma);
                let fe = eval(&mut xe);
                simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            } else if fr < simplex[n - 1].1 {
                simplex[n] = (xr, fr);
            } else {
                let (mut xc, fc) = if fr < simplex[n].1 {
                    let mut xc = along(alpha * rho);
                    let fc = eval(&mut xc);
                    (xc, fc)
                } else {
                    let mut xc = along(-rho);
                    let fc = eval(&mut xc);
                    (xc, fc)
                };
                if fc < simplex[n].1.min(fr) {
                    simplex[n] = (std::mem::take(&mut xc), fc);
                } else {
                    let best = simplex[0].0.clone();
                    for (v, fv) in simplex.iter_mut().skip(1) {
                        for (x, b) in v.iter_mut().zip(&best) {
                            *x = b + sigma * (*x - b);
                        }
                        *fv = eval(v);
                    }
                }
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (x, fx) = simplex.swap_remove(0);
        Ok((Minimum { x, f: fx, iterations }, converged))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let nm = NelderMead::default();
        let min = nm
            .minimize(f, |_| {}, &[-1.2, 1.0], &[0.5, 0.5], &mut rng_from_seed(1))
            .unwrap();
        assert!((min.x[0] - 1.0).abs() < 1e-3 && (min.x[1] - 1.0).abs() < 1e-3, "{:?}", min.x);
    }

    #[test]
    fn respects_projection() {
        // unconstrained minimum at 3, box [0, 1]
        let f = |x: &[f64]| (x[0] - 3.0).powi(2);
        let project = |x: &mut [f64]| x[0] = x[0].clamp(0.0, 1.0);
        let min = NelderMead::default()
            .minimize(f, project, &[0.2], &[0.1], &mut rng_from_seed(2))
            .unwrap();
        assert!((min.x[0] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn reports_non_convergence() {
        let nm = NelderMead {
            max_iter: 3,
            restarts: 0,
            ..NelderMead::default()
        };
        let f = |x: &[f64]| (x[0] - 100.0).powi(2) + x[1].powi(2);
        match nm.minimize(f, |_| {}, &[0.0, 5.0], &[0.1, 0.1], &mut rng_from_seed(3)) {
            Err(Error::NoConvergence { last, .. }) => assert_eq!(last.len(), 2),
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }
}
