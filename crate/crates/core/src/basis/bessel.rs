//! Integer-order Bessel functions of the first kind.
//!
//! Evaluated through the integral representation
//! `J_n(x) = (1/π) ∫₀^π cos(nθ − x sinθ) dθ`
//! with the trapezoidal rule. For this integrand the trapezoidal error is a
//! sum of Bessel functions of order ≥ 2m − n (m = node count), which decays
//! superexponentially once 2m − n comfortably exceeds |x|; picking
//! m ≳ |n| + |x| + 50 delivers machine precision without the catastrophic
//! cancellation the plain power series suffers from at large |x|.

/// J_n(x) for any integer order (uses J_{−n} = (−1)ⁿ J_n).
pub fn bessel_j(n: i32, x: f64) -> f64 {
    let (order, sign) = if n < 0 {
        (-n as u32, if n % 2 == 0 { 1.0 } else { -1.0 })
    } else {
        (n as u32, 1.0)
    };
    sign * bessel_j_nonneg(order, x)
}

/// `[J_0(x), J_1(x), …, J_{l_max}(x)]` in a single pass over the θ grid.
pub fn bessel_j_array(l_max: u32, x: f64) -> Vec<f64> {
    let m = node_count(l_max, x);
    let h = std::f64::consts::PI / m as f64;
    let mut out = vec![0.0f64; l_max as usize + 1];
    // trapezoid endpoints: θ=0 gives cos(0)=1 for every order; θ=π gives
    // cos(nπ) = (−1)ⁿ.
    for (l, acc) in out.iter_mut().enumerate() {
        let endpoint = if l % 2 == 0 { 1.0 } else { -1.0 };
        *acc = 0.5 * (1.0 + endpoint);
    }
    for k in 1..m {
        let theta = k as f64 * h;
        let xs = x * theta.sin();
        for (l, acc) in out.iter_mut().enumerate() {
            *acc += (l as f64 * theta - xs).cos();
        }
    }
    for acc in &mut out {
        *acc /= m as f64;
    }
    out
}

fn bessel_j_nonneg(n: u32, x: f64) -> f64 {
    let m = node_count(n, x);
    let h = std::f64::consts::PI / m as f64;
    let endpoint = if n % 2 == 0 { 1.0 } else { -1.0 };
    let mut acc = 0.5 * (1.0 + endpoint);
    for k in 1..m {
        let theta = k as f64 * h;
        acc += (n as f64 * theta - x * theta.sin()).cos();
    }
    acc / m as f64
}

fn node_count(n: u32, x: f64) -> usize {
    let needed = n as f64 + x.abs() + 50.0;
    (needed.ceil() as usize).max(64)
}
