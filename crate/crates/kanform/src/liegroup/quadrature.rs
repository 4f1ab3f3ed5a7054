//! Gauss–Legendre rules and collapsed product rules on simplices.

/// Nodes and weights on `[0, 1]`, exact for polynomials of degree `2n - 1`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        // Newton on P_n from the Chebyshev-like initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push(((1.0 - x) / 2.0, w / 2.0));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

/// A quadrature rule on `Δ_q = {t_1, ..., t_q ≥ 0, Σ t ≤ 1}`; points carry
/// the `q` free coordinates, and `t_0 = 1 - Σ t`.
#[derive(Clone, Debug)]
pub struct SimplexRule {
    pub q: usize,
    pub points: Vec<(Vec<f64>, f64)>,
}

impl SimplexRule {
    /// Collapsed (Duffy) product of `n`-point Gauss–Legendre rules; exact for
    /// polynomials of degree `2n - q` in `t`.
    pub fn collapsed(q: usize, n: usize) -> Self {
        if q == 0 {
            return SimplexRule { q, points: vec![(Vec::new(), 1.0)] };
        }
        let gl = gauss_legendre(n);
        let mut points = Vec::new();
        let mut idx = vec![0usize; q];
        loop {
            let mut t = Vec::with_capacity(q);
            let mut rem = 1.0;
            let mut w = 1.0;
            // t_d = u_d Π_{e<d} (1 - u_e), Jacobian Π_d Π_{e<d} (1 - u_e)
            for &i in &idx {
                let (u, wu) = gl[i];
                t.push(rem * u);
                w *= wu * rem;
                rem *= 1.0 - u;
            }
            points.push((t, w));
            // odometer
            let mut d = 0;
            loop {
                if d == q {
                    return SimplexRule { q, points };
                }
                idx[d] += 1;
                if idx[d] < n {
                    break;
                }
                idx[d] = 0;
                d += 1;
            }
        }
    }

    /// A rule exact for polynomials of degree `deg`.
    pub fn exact_for(q: usize, deg: usize) -> Self {
        Self::collapsed(q, (deg + q) / 2 + 1)
    }

    pub fn integrate(&self, f: impl Fn(&[f64]) -> f64) -> f64 {
        self.points.iter().map(|(t, w)| w * f(t)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_exactness() {
        let r = gauss_legendre(4);
        for k in 0..8 {
            let s: f64 = r.iter().map(|(x, w)| w * x.powi(k)).sum();
            assert!((s - 1.0 / (k as f64 + 1.0)).abs() < 1e-15);
        }
        let r = gauss_legendre(30);
        let s: f64 = r.iter().map(|(x, w)| w * (10.0 * x).sin()).sum();
        assert!((s - (1.0 - 10f64.cos()) / 10.0).abs() < 1e-14);
    }

    #[test]
    fn simplex_monomials() {
        // ∫_{Δ_q} t_1^a t_2^b ... = a! b! ... / (q + Σ)!
        let fact = |n: usize| (1..=n).map(|k| k as f64).product::<f64>();
        for q in 1..=3 {
            let rule = SimplexRule::exact_for(q, 6);
            let expo = [2usize, 1, 3];
            let v = rule.integrate(|t| {
                let mut p: f64 = (0..q).map(|i| t[i].powi(expo[i] as i32)).product();
                let t0 = 1.0 - t.iter().sum::<f64>();
                p *= t0;
                p
            });
            let num: f64 = (0..q).map(|i| fact(expo[i])).product();
            let deg: usize = expo[..q].iter().sum::<usize>() + 1;
            assert!((v - num / fact(q + deg)).abs() < 1e-15, "q={q}");
        }
    }
}
