//! Nelder-Mead downhill simplex with dimension-adaptive coefficients
//! (Gao & Han), so the 12- and 16-parameter complex searches don't stall.

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    /// Edge length of the initial right-angled simplex.
    pub initial_step: f64,
    /// Converged once every vertex is within this distance of the best one,
    /// or once the vertex values agree to rounding (no further progress possible).
    pub tol: f64,
    pub max_evals: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            initial_step: 0.1,
            tol: 1e-9,
            max_evals: 20_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimplexOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Minimizes `f` starting from `x0`.
pub fn minimize<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    opts: &SimplexOptions,
) -> SimplexOutcome {
    let n = x0.len();
    assert!(n >= 1, "simplex needs at least one parameter");
    let nf = n as f64;
    let (reflect, expand) = (1.0, 1.0 + 2.0 / nf);
    let (contract, shrink) = (0.75 - 0.5 / nf, 1.0 - 1.0 / nf);

    let mut evals = 0;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    pts.push(x0.to_vec());
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += opts.initial_step;
        pts.push(p);
    }
    let mut vals: Vec<f64> = pts.iter().map(|p| eval(p, &mut evals)).collect();

    let mut converged = false;
    loop {
        // sort ascending by value; stable so ties keep vertex order
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        pts = order.iter().map(|&i| pts[i].clone()).collect();
        vals = order.iter().map(|&i| vals[i]).collect();

        let diameter = pts[1..]
            .iter()
            .map(|p| dist(p, &pts[0]))
            .fold(0.0, f64::max);
        let spread = vals[n] - vals[0];
        let flat = spread <= 4.0 * f64::EPSILON * vals[0].abs().max(vals[n].abs());
        if diameter < opts.tol || (flat && diameter < opts.tol.sqrt()) {
            converged = true;
            break;
        }
        if evals >= opts.max_evals {
            break;
        }

        let mut centroid = vec![0.0; n];
        for p in &pts[..n] {
            for (c, x) in centroid.iter_mut().zip(p) {
                *c += x / nf;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&pts[n])
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let xr = along(reflect);
        let fr = eval(&xr, &mut evals);
        if fr < vals[0] {
            let xe = along(reflect * expand);
            let fe = eval(&xe, &mut evals);
            if fe < fr {
                pts[n] = xe;
                vals[n] = fe;
            } else {
                pts[n] = xr;
                vals[n] = fr;
            }
            continue;
        }
        if fr < vals[n - 1] {
            pts[n] = xr;
            vals[n] = fr;
            continue;
        }
        // outside contraction if the reflection beat the worst vertex, inside otherwise
        let (t, threshold) = if fr < vals[n] {
            (reflect * contract, fr)
        } else {
            (-contract, vals[n])
        };
        let xc = along(t);
        let fc = eval(&xc, &mut evals);
        if fc <= threshold {
            pts[n] = xc;
            vals[n] = fc;
            continue;
        }
        let best = pts[0].clone();
        for i in 1..=n {
            for (x, b) in pts[i].iter_mut().zip(&best) {
                *x = b + shrink * (*x - b);
            }
            vals[i] = eval(&pts[i], &mut evals);
        }
    }

    SimplexOutcome {
        x: pts.swap_remove(0),
        value: vals[0],
        evaluations: evals,
        converged,
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt()
}
