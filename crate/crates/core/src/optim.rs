//! Derivative-free local minimisers used to refine grid candidates.

/// Golden-section search for a minimum of `f` on `[lo, hi]`.
///
/// Returns `(x, f(x))` once the bracket is narrower than `tol`.
pub fn golden_section(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    // keep the best point seen at the end of the bracket
    [(x, fx), (c, fc), (d, fd)]
        .into_iter()
        .min_by(|p, q| p.1.total_cmp(&q.1))
        .unwrap()
}

/// Nelder–Mead simplex minimisation in `D` dimensions.
///
/// Stops when the simplex diameter drops below `xtol` or after `max_iter`
/// iterations. Returns the best vertex and its value.
pub fn nelder_mead<const D: usize>(
    mut f: impl FnMut(&[f64; D]) -> f64,
    start: [f64; D],
    step: f64,
    xtol: f64,
    max_iter: usize,
) -> ([f64; D], f64) {
    let mut simplex: Vec<([f64; D], f64)> = Vec::with_capacity(D + 1);
    simplex.push((start, f(&start)));
    for k in 0..D {
        let mut v = start;
        v[k] += step;
        let fv = f(&v);
        simplex.push((v, fv));
    }

    for _ in 0..max_iter {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let diameter = simplex[1..]
            .iter()
            .map(|(v, _)| {
                v.iter()
                    .zip(simplex[0].0.iter())
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if diameter < xtol {
            break;
        }

        let mut centroid = [0.0; D];
        for (v, _) in &simplex[..D] {
            for k in 0..D {
                centroid[k] += v[k] / D as f64;
            }
        }
        let worst = simplex[D];
        let along = |t: f64| {
            let mut p = [0.0; D];
            for k in 0..D {
                p[k] = centroid[k] + t * (worst.0[k] - centroid[k]);
            }
            p
        };

        let reflected = along(-1.0);
        let fr = f(&reflected);
        if fr < simplex[0].1 {
            let expanded = along(-2.0);
            let fe = f(&expanded);
            simplex[D] = if fe < fr {
                (expanded, fe)
            } else {
                (reflected, fr)
            };
            continue;
        }
        if fr < simplex[D - 1].1 {
            simplex[D] = (reflected, fr);
            continue;
        }
        let contracted = if fr < worst.1 {
            along(-0.5)
        } else {
            along(0.5)
        };
        let fc = f(&contracted);
        if fc < worst.1.min(fr) {
            simplex[D] = (contracted, fc);
            continue;
        }
        // shrink towards the best vertex
        let best = simplex[0].0;
        for entry in simplex.iter_mut().skip(1) {
            for k in 0..D {
                entry.0[k] = best[k] + 0.5 * (entry.0[k] - best[k]);
            }
            entry.1 = f(&entry.0);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    simplex[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_kink_minimum() {
        let (x, fx) = golden_section(|x| (x - 0.3).abs(), -1.0, 1.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-11);
        assert!(fx < 1e-11);
    }

    #[test]
    fn nelder_mead_finds_cone_apex() {
        let target = [0.4, -1.2, 2.0];
        let f = |p: &[f64; 3]| {
            p.iter()
                .zip(target)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt()
        };
        let (x, fx) = nelder_mead(f, [0.45, -1.15, 2.05], 0.05, 1e-11, 5000);
        assert!(fx < 1e-9, "{fx}");
        for (a, b) in x.iter().zip(target) {
            assert!((a - b).abs() < 1e-9);
        }
    }
}
