//! Associated Laguerre polynomials and the displacement matrix elements
//! `D_mn = <m|D(g)|n>` between Fock states.

use libm::lgamma;

/// `L_m^α(x)` by the ascending three-term recurrence in degree.
pub fn laguerre_assoc(m: usize, alpha: usize, x: f64) -> f64 {
    laguerre_general(m, alpha as f64, x)
}

/// The same recurrence for any real order, including negative integers.
pub fn laguerre_general(m: usize, a: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if m == 0 {
        return prev;
    }
    let mut cur = 1.0 + a - x;
    for k in 1..m {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + a - x) * cur - (kf + a) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `ln n!`.
pub fn ln_factorial(n: usize) -> f64 {
    lgamma(n as f64 + 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DMatrixElement {
    pub m: usize,
    pub n: usize,
    pub g: f64,
    pub value: f64,
}

/// `D_mn = (-g)^{n-m} sqrt(m!/n!) L_m^{n-m}(g^2)` for `n >= m`, and
/// `(-1)^{n-m} D_nm` below the diagonal.
pub fn d_element(m: usize, n: usize, g: f64) -> DMatrixElement {
    let value = if n >= m {
        upper_d(m, n, g)
    } else {
        let sign = if (m - n) % 2 == 0 { 1.0 } else { -1.0 };
        sign * upper_d(n, m, g)
    };
    DMatrixElement { m, n, g, value }
}

fn upper_d(m: usize, n: usize, g: f64) -> f64 {
    let k = n - m;
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let log_mag = k as f64 * g.ln() + 0.5 * (ln_factorial(m) - ln_factorial(n));
    sign * log_mag.exp() * laguerre_assoc(m, k, g * g)
}
