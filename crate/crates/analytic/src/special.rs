//! Riemann zeta with derivative, and the upper incomplete gamma function
//! for arbitrary real order.

use statrs::function::gamma::{gamma, gamma_ui};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// B_2, B_4, …, B_20.
const BERNOULLI: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// `(ζ(s), ζ'(s))` by Euler–Maclaurin with ten explicit terms and ten
/// Bernoulli corrections. `s = 1` is a pole and returns `None`.
pub fn riemann_zeta_with_derivative(s: f64) -> Option<(f64, f64)> {
    if s == 1.0 {
        return None;
    }
    if s == 0.0 {
        // ζ(0) = −½, ζ'(0) = −½ log 2π; returned exactly so that
        // alternating sums of them cancel without rounding.
        return Some((-0.5, -0.5 * (2.0 * std::f64::consts::PI).ln()));
    }
    const N: usize = 10;
    let nf = N as f64;
    let ln_n = nf.ln();
    let mut z = 0.0;
    let mut dz = 0.0;
    for n in 1..N {
        let t = (n as f64).powf(-s);
        z += t;
        dz -= (n as f64).ln() * t;
    }
    let tail = nf.powf(1.0 - s) / (s - 1.0);
    z += tail;
    dz += -ln_n * tail - tail / (s - 1.0);
    let half = 0.5 * nf.powf(-s);
    z += half;
    dz -= ln_n * half;
    // k-th correction: B_{2k}/(2k)! · s(s+1)…(s+2k−2) · N^{−s−2k+1}
    let mut poly = s; // s(s+1)…(s+2k−2)
    let mut dpoly = 1.0;
    let mut fact = 2.0; // (2k)!
    for (k, b) in BERNOULLI.iter().enumerate() {
        let k = k + 1;
        if k > 1 {
            for j in [2 * k - 3, 2 * k - 2] {
                let f = s + j as f64;
                dpoly = dpoly * f + poly;
                poly *= f;
            }
            fact *= ((2 * k - 1) * (2 * k)) as f64;
        }
        let pw = nf.powf(-s - (2 * k) as f64 + 1.0);
        let c = b / fact;
        z += c * poly * pw;
        dz += c * pw * (dpoly - ln_n * poly);
    }
    Some((z, dz))
}

pub fn riemann_zeta(s: f64) -> Option<f64> {
    riemann_zeta_with_derivative(s).map(|(z, _)| z)
}

/// Upper incomplete gamma `Γ(a, x) = ∫_x^∞ t^{a−1} e^{−t} dt` for any real
/// `a` and `x > 0`.
pub fn upper_gamma(a: f64, x: f64) -> f64 {
    assert!(x > 0.0, "upper_gamma needs x > 0, got {x}");
    if x >= 1.0 && x >= a {
        return upper_gamma_cf(a, x);
    }
    if a > 0.0 {
        return if x > 30.0 { upper_gamma_cf(a, x) } else { gamma_ui(a, x) };
    }
    // a ≤ 0 and x < 1: recur down from a positive order, or from E₁.
    let (mut order, mut value) = if a == a.floor() {
        (0.0, exp_integral_e1(x))
    } else {
        let start = a + (-a).ceil();
        (start, gamma_ui(start, x))
    };
    // Γ(b, x) = (Γ(b+1, x) − x^b e^{−x}) / b
    while order > a + 0.5 {
        let b = order - 1.0;
        value = (value - x.powf(b) * (-x).exp()) / b;
        order = b;
    }
    value
}

/// Lentz continued fraction; valid for `x > 0`, fast once `x ≳ a`.
fn upper_gamma_cf(a: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x + a * x.ln()).exp() * h
}

/// `E₁(x) = Γ(0, x)`.
pub fn exp_integral_e1(x: f64) -> f64 {
    if x >= 1.0 {
        return upper_gamma_cf(0.0, x);
    }
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..60 {
        term *= -x / k as f64;
        sum += term / k as f64;
    }
    -EULER_GAMMA - x.ln() - sum
}

/// Gamma function, re-exported so callers need not depend on statrs.
pub fn gamma_fn(x: f64) -> f64 {
    gamma(x)
}

pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

/// `(2k−1)!! = 1·3·…·(2k−1)`, with `(−1)!! = 1`.
pub fn double_factorial_odd(k: usize) -> f64 {
    (1..=k).map(|j| (2 * j - 1) as f64).product()
}
