/// Simplex settings. Coefficients are the standard reflection (1),
/// expansion (2), contraction (0.5) and shrink (0.5).
#[derive(Clone, Debug, PartialEq)]
pub struct NelderMeadOptions {
    pub max_iterations: usize,
    /// Converged when the spread of simplex values is below
    /// `f_tol · (1 + |f_best|)` and every vertex lies within `x_tol` of the best.
    pub f_tol: f64,
    pub x_tol: f64,
    /// Offset of the initial vertices from the start point along each axis.
    pub initial_step: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            max_iterations: 5000,
            f_tol: 1e-12,
            x_tol: 1e-9,
            initial_step: 0.1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub fx: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Best objective value after each iteration.
    pub trace: Vec<f64>,
}

const ALPHA: f64 = 1.0;
const GAMMA: f64 = 2.0;
const RHO: f64 = 0.5;
const SIGMA: f64 = 0.5;

/// Derivative-free minimization of `f` from `x0`.
///
/// Non-finite objective values are treated as `+∞`, so the simplex backs
/// away from them.
pub fn nelder_mead<F>(mut f: F, x0: &[f64], opts: &NelderMeadOptions) -> NelderMeadResult
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let mut eval = |x: &[f64]| {
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };
    if n == 0 {
        let fx = eval(x0);
        return NelderMeadResult {
            x: Vec::new(),
            fx,
            iterations: 0,
            converged: true,
            trace: Vec::new(),
        };
    }

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += opts.initial_step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| eval(v)).collect();
    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    while iterations < opts.max_iterations {
        // order vertices by value; index order breaks ties so runs are deterministic
        let mut idx: Vec<usize> = (0..=n).collect();
        idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
        simplex = idx.iter().map(|&i| simplex[i].clone()).collect();
        values = idx.iter().map(|&i| values[i]).collect();

        let best = values[0];
        let worst = values[n];
        let spread = worst - best;
        let size = simplex[1..]
            .iter()
            .flat_map(|v| v.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if spread.is_finite() && spread <= opts.f_tol * (1.0 + best.abs()) && size <= opts.x_tol {
            converged = true;
            break;
        }
        iterations += 1;

        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|v| v[j]).sum::<f64>() / n as f64)
            .collect();
        let toward = |coef: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[n])
                .map(|(c, w)| c + coef * (c - w))
                .collect()
        };

        let xr = toward(ALPHA);
        let fr = eval(&xr);
        if fr < values[0] {
            let xe = toward(GAMMA);
            let fe = eval(&xe);
            if fe < fr {
                simplex[n] = xe;
                values[n] = fe;
            } else {
                simplex[n] = xr;
                values[n] = fr;
            }
        } else if fr < values[n - 1] {
            simplex[n] = xr;
            values[n] = fr;
        } else {
            let (xc, fc) = if fr < values[n] {
                let xc = toward(ALPHA * RHO);
                let fc = eval(&xc);
                (xc, fc)
            } else {
                let xc = toward(-RHO);
                let fc = eval(&xc);
                (xc, fc)
            };
            if fc < values[n].min(fr) {
                simplex[n] = xc;
                values[n] = fc;
            } else {
                let best_v = simplex[0].clone();
                for i in 1..=n {
                    simplex[i] = best_v
                        .iter()
                        .zip(&simplex[i])
                        .map(|(b, v)| b + SIGMA * (v - b))
                        .collect();
                    values[i] = eval(&simplex[i]);
                }
            }
        }
        trace.push(values.iter().copied().fold(f64::INFINITY, f64::min));
    }

    let (bi, _) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1).then(a.0.cmp(&b.0)))
        .expect("simplex is non-empty");
    NelderMeadResult {
        x: simplex[bi].clone(),
        fx: values[bi],
        iterations,
        converged,
        trace,
    }
}
