//! Gauss-Hermite nodes and weights.
//!
//! Nodes are the roots of the order-n Hermite polynomial; weights are
//! normalized so that `sum_j w_j f(mu + sqrt(N0) t_j)` approximates
//! `E[f(Y)]` for `Y ~ Normal(mu, N0/2)` per dimension.

/// Orthonormal Hermite value and derivative at `t` for degree `n`, plus the
/// Christoffel sum `sum_{k<n} p_k(t)^2` used for the weights.
fn hermite_eval(n: usize, t: f64) -> (f64, f64, f64) {
    let mut p_prev = 0.0f64;
    let mut p = std::f64::consts::PI.powf(-0.25);
    let mut christoffel = p * p;
    for j in 0..n {
        let next = t * (2.0 / (j as f64 + 1.0)).sqrt() * p
            - (j as f64 / (j as f64 + 1.0)).sqrt() * p_prev;
        p_prev = p;
        p = next;
        if j + 1 < n {
            christoffel += p * p;
        }
    }
    let dp = (2.0 * n as f64).sqrt() * p_prev;
    (p, dp, christoffel)
}

/// Nodes (ascending) and weights of the order-`n` rule, weights summing to 1.
pub(crate) fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "quadrature order must be positive");
    let m = n.div_ceil(2);
    let mut roots = vec![0.0f64; m]; // descending positive half
    for i in 0..m {
        // Asymptotic spacing estimates for the descending roots.
        let mut z = match i {
            0 => {
                let a = 2.0 * n as f64 + 1.0;
                a.sqrt() - 1.85575 * a.powf(-1.0 / 6.0)
            }
            1 => roots[0] - 1.14 * (n as f64).powf(0.426) / roots[0],
            2 => 1.86 * roots[1] - 0.86 * roots[0],
            3 => 1.91 * roots[2] - 0.91 * roots[1],
            _ => 2.0 * roots[i - 1] - roots[i - 2],
        };
        let mut converged = false;
        for _ in 0..200 {
            let (p, dp, _) = hermite_eval(n, z);
            let dz = p / dp;
            z -= dz;
            if dz.abs() <= 1e-15 * z.abs().max(1.0) {
                converged = true;
                break;
            }
        }
        assert!(converged, "Hermite root iteration failed at n={n}, i={i}");
        roots[i] = if z.abs() < 1e-13 { 0.0 } else { z };
    }
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        // Fill ascending: -z_0, ..., -z_{m-1}[, z_{m-1}, ...] mirrored.
        let t = if i < m { -roots[i] } else { roots[n - 1 - i] };
        let (_, _, christoffel) = hermite_eval(n, t);
        nodes.push(t);
        weights.push(1.0 / christoffel);
    }
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_orders_match_known_rules() {
        // n = 2: nodes +/- 1/sqrt(2), equal weights.
        let (t, w) = gauss_hermite(2);
        assert!((t[0] + 0.5f64.sqrt()).abs() < 1e-14);
        assert!((t[1] - 0.5f64.sqrt()).abs() < 1e-14);
        assert!((w[0] - 0.5).abs() < 1e-14);
        // n = 3: nodes 0, +/- sqrt(3/2); raw weights sqrt(pi)*(2/3, 1/6, 1/6).
        let (t, w) = gauss_hermite(3);
        assert!((t[0] + 1.5f64.sqrt()).abs() < 1e-13);
        assert_eq!(t[1], 0.0);
        assert!((w[1] - 2.0 / 3.0).abs() < 1e-14);
        assert!((w[0] - 1.0 / 6.0).abs() < 1e-14);
    }

    #[test]
    fn moments_are_exact_across_orders() {
        for n in [4usize, 8, 16, 20, 24, 32, 40, 48, 64, 96] {
            let (t, w) = gauss_hermite(n);
            assert_eq!(t.len(), n);
            assert!(t.windows(2).all(|p| p[0] < p[1]), "nodes sorted, n={n}");
            // Normalized moments of e^{-t^2}/sqrt(pi): 1, 1/2, 3/4, 15/8.
            for (power, expect) in [(0u32, 1.0), (2, 0.5), (4, 0.75), (6, 1.875)] {
                let got: f64 = t.iter().zip(&w).map(|(x, wi)| wi * x.powi(power as i32)).sum();
                assert!(
                    (got - expect).abs() < 1e-12 * expect.max(1.0),
                    "n={n} moment {power}: {got} vs {expect}"
                );
            }
            let odd: f64 = t.iter().zip(&w).map(|(x, wi)| wi * x.powi(3)).sum();
            assert!(odd.abs() < 1e-13);
        }
    }

    #[test]
    fn integrates_gaussian_tilt_exactly() {
        // integral e^{-t^2} e^{at} dt = sqrt(pi) e^{a^2/4}.
        let (t, w) = gauss_hermite(40);
        let a = 1.3f64;
        let got: f64 = t.iter().zip(&w).map(|(x, wi)| wi * (a * x).exp()).sum();
        let expect = (a * a / 4.0).exp();
        assert!((got - expect).abs() < 1e-13 * expect);
    }

    #[test]
    fn polynomial_of_degree_2n_minus_1_is_exact() {
        let n = 9;
        let (t, w) = gauss_hermite(n);
        // f(t) = t^{2n-2} has normalized moment (2n-3)!! / 2^{n-1}.
        let k = n - 1;
        let mut expect = 1.0;
        for j in 1..=k {
            expect *= (2 * j - 1) as f64 / 2.0;
        }
        let got: f64 = t
            .iter()
            .zip(&w)
            .map(|(x, wi)| wi * x.powi(2 * k as i32))
            .sum();
        assert!((got - expect).abs() < 1e-11 * expect);
    }
}
