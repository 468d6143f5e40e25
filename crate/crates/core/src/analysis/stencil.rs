//! Five-point finite-difference derivatives on arbitrary grids.
//!
//! Weights come from Fornberg's recursion over the five grid points nearest to each
//! target, so uniform interiors get the classical fourth-order central stencil and the
//! two points at each end get one-sided fourth-order stencils.

use crate::error::{Error, Result};

const WIDTH: usize = 5;

/// First-derivative weights at `x0` for nodes `x` (Fornberg 1988).
pub fn fornberg_weights(x0: f64, x: &[f64]) -> Vec<f64> {
    let n = x.len();
    // c[j][k]: weight of node j for derivative order k
    let mut c = vec![[0.0f64; 2]; n];
    let mut c1 = 1.0;
    let mut c4 = x[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(1);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - x0;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.iter().map(|w| w[1]).collect()
}

/// `dy/dx` at every node; `x` strictly increasing with at least five points.
pub fn derivative(x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    let n = x.len();
    if n < WIDTH {
        return Err(Error::InsufficientPoints {
            needed: WIDTH,
            got: n,
        });
    }
    if y.len() != n {
        return Err(Error::InvalidParameter(format!(
            "x and y lengths differ ({n} vs {})",
            y.len()
        )));
    }
    if x.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter(
            "abscissae must be strictly increasing".into(),
        ));
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let start = i.saturating_sub(WIDTH / 2).min(n - WIDTH);
        let nodes = &x[start..start + WIDTH];
        let w = fornberg_weights(x[i], nodes);
        // weights sum to zero, so differencing against y[i] keeps constants exact
        let mut acc = 0.0;
        for (wk, yk) in w.iter().zip(&y[start..start + WIDTH]) {
            acc += wk * (yk - y[i]);
        }
        out.push(acc);
    }
    Ok(out)
}

/// Derivative over the subset of nodes where `keep` is set; other nodes get NaN.
pub fn masked_derivative(x: &[f64], y: &[f64], keep: &[bool]) -> Result<Vec<f64>> {
    let idx: Vec<usize> = (0..x.len()).filter(|&i| keep[i]).collect();
    let xs: Vec<f64> = idx.iter().map(|&i| x[i]).collect();
    let ys: Vec<f64> = idx.iter().map(|&i| y[i]).collect();
    let d = derivative(&xs, &ys)?;
    let mut out = vec![f64::NAN; x.len()];
    for (k, &i) in idx.iter().enumerate() {
        out[i] = d[k];
    }
    Ok(out)
}

/// [`masked_derivative`] for functions of `|x|` sampled from `x = 0`: the first kept
/// points are mirrored to negative `x`, so the origin gets a central stencil and a
/// derivative that vanishes by symmetry.
pub fn even_masked_derivative(x: &[f64], y: &[f64], keep: &[bool]) -> Result<Vec<f64>> {
    let idx: Vec<usize> = (0..x.len()).filter(|&i| keep[i]).collect();
    if idx.first().is_none_or(|&i| x[i] != 0.0) {
        return masked_derivative(x, y, keep);
    }
    let mirrored: Vec<usize> = idx[1..].iter().copied().take(WIDTH / 2).collect();
    let mut xs: Vec<f64> = mirrored.iter().rev().map(|&i| -x[i]).collect();
    let mut ys: Vec<f64> = mirrored.iter().rev().map(|&i| y[i]).collect();
    let offset = xs.len();
    xs.extend(idx.iter().map(|&i| x[i]));
    ys.extend(idx.iter().map(|&i| y[i]));
    let d = derivative(&xs, &ys)?;
    let mut out = vec![f64::NAN; x.len()];
    for (k, &i) in idx.iter().enumerate() {
        out[i] = d[offset + k];
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn classical_central_weights() {
        let w = fornberg_weights(0.0, &[-2.0, -1.0, 0.0, 1.0, 2.0]);
        let want = [1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0];
        for (a, b) in w.iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
        let w = fornberg_weights(0.0, &[0.0, 1.0, 2.0, 3.0, 4.0]);
        let want = [-25.0 / 12.0, 4.0, -3.0, 4.0 / 3.0, -1.0 / 4.0];
        for (a, b) in w.iter().zip(want) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn quadratic_on_uniform_grid() {
        let alpha = 0.37;
        let x: Vec<f64> = (0..200).map(|i| i as f64 * 0.15).collect();
        let y: Vec<f64> = x.iter().map(|q| alpha * q * q).collect();
        let d = derivative(&x, &y).unwrap();
        for i in 2..198 {
            let want = 2.0 * alpha * x[i];
            assert!((d[i] - want).abs() <= 1e-10 * want.abs(), "{i}");
        }
    }

    #[test]
    fn cubic_relative_accuracy() {
        let x: Vec<f64> = (0..200).map(|i| 1.0 + i as f64 * 0.1).collect();
        let y: Vec<f64> = x
            .iter()
            .map(|t| 0.5 * t * t * t - t * t + 4.0 * t)
            .collect();
        let d = derivative(&x, &y).unwrap();
        for (t, v) in x.iter().zip(&d) {
            let want = 1.5 * t * t - 2.0 * t + 4.0;
            assert!((v - want).abs() <= 1e-9 * want.abs());
        }
    }

    #[test]
    fn too_few_points() {
        assert!(matches!(
            derivative(&[0.0, 1.0, 2.0, 3.0], &[0.0; 4]),
            Err(Error::InsufficientPoints { needed: 5, got: 4 })
        ));
    }

    #[test]
    fn masked_nodes_are_skipped() {
        let x: Vec<f64> = (0..12).map(|i| i as f64).collect();
        let mut y: Vec<f64> = x.iter().map(|v| 3.0 * v).collect();
        y[5] = 1e9;
        let mut keep = vec![true; 12];
        keep[5] = false;
        let d = masked_derivative(&x, &y, &keep).unwrap();
        assert!(d[5].is_nan());
        for (i, v) in d.iter().enumerate() {
            if i != 5 {
                assert!((v - 3.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn even_extension_centres_the_origin() {
        let x: Vec<f64> = (0..30).map(|i| i as f64 * 0.1).collect();
        let y: Vec<f64> = x.iter().map(|t| (1.0 + t * t).sqrt()).collect();
        let keep = vec![true; x.len()];
        let d = even_masked_derivative(&x, &y, &keep).unwrap();
        assert!(d[0].abs() < 1e-15);
        let one_sided = masked_derivative(&x, &y, &keep).unwrap();
        let exact = |t: f64| t / (1.0 + t * t).sqrt();
        assert!((d[1] - exact(0.1)).abs() < (one_sided[1] - exact(0.1)).abs());
        let c = even_masked_derivative(&x, &vec![2.5; 30], &keep).unwrap();
        assert!(c.iter().all(|v| *v == 0.0));
    }

    proptest! {
        #[test]
        fn cubics_are_exact(a in -2.0f64..2.0, b in -2.0f64..2.0, c in -2.0f64..2.0, d0 in -2.0f64..2.0,
                            h in 0.01f64..0.5, n in 5usize..60) {
            let x: Vec<f64> = (0..n).map(|i| i as f64 * h).collect();
            let y: Vec<f64> = x.iter().map(|t| ((a * t + b) * t + c) * t + d0).collect();
            let d = derivative(&x, &y).unwrap();
            let scale = x.iter().map(|t| (3.0 * a * t * t).abs() + (2.0 * b * t).abs() + c.abs()).fold(0.0, f64::max)
                + y.iter().fold(0.0f64, |m, v| m.max(v.abs())) / h;
            for (t, v) in x.iter().zip(&d) {
                let want = (3.0 * a * t + 2.0 * b) * t + c;
                prop_assert!((v - want).abs() <= 1e-12 * scale.max(1.0));
            }
        }

        #[test]
        fn quartics_exact_on_nonuniform_grids(steps in prop::collection::vec(0.05f64..1.0, 4..30)) {
            let mut x = vec![0.0];
            for s in steps { let last = *x.last().unwrap(); x.push(last + s); }
            let y: Vec<f64> = x.iter().map(|t| t.powi(4) - 2.0 * t).collect();
            let d = derivative(&x, &y).unwrap();
            let scale = x.last().unwrap().powi(4);
            for (t, v) in x.iter().zip(&d) {
                let want = 4.0 * t.powi(3) - 2.0;
                prop_assert!((v - want).abs() <= 1e-8 * scale.max(1.0));
            }
        }
    }
}
