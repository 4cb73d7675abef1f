//! Modified Bessel functions `I_0, I_1, K_0, K_1` of real positive argument.
//!
//! Ascending series for `x <= 2`. Above that, `K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt`
//! by the trapezoid rule, which converges geometrically in the step for this integrand.

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SWITCH: f64 = 2.0;

pub fn bessel_i0(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..500 {
        term *= q / (k * k) as f64;
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum
}

pub fn bessel_i1(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 0.5 * x;
    let mut sum = term;
    for k in 1..500 {
        term *= q / (k * (k + 1)) as f64;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

pub fn bessel_k0(x: f64) -> f64 {
    assert!(x > 0.0, "K0 needs a positive argument");
    if x > SWITCH {
        return k_integral(x, 0.0);
    }
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut harmonic = 0.0;
    let mut tail = 0.0;
    for k in 1..60 {
        term *= q / (k * k) as f64;
        harmonic += 1.0 / k as f64;
        tail += harmonic * term;
    }
    -((0.5 * x).ln() + EULER_GAMMA) * bessel_i0(x) + tail
}

pub fn bessel_k1(x: f64) -> f64 {
    assert!(x > 0.0, "K1 needs a positive argument");
    if x > SWITCH {
        return k_integral(x, 1.0);
    }
    let q = 0.25 * x * x;
    // psi(k + 1) + psi(k + 2) = -2 gamma + H_k + H_{k+1}.
    let mut term = 1.0;
    let mut hk = 0.0;
    let mut sum = 0.0;
    for k in 0..60 {
        if k > 0 {
            term *= q / (k * (k + 1)) as f64;
            hk += 1.0 / k as f64;
        }
        let psi = -2.0 * EULER_GAMMA + 2.0 * hk + 1.0 / (k + 1) as f64;
        sum += psi * term;
    }
    1.0 / x + bessel_i1(x) * (0.5 * x).ln() - 0.25 * x * sum
}

fn k_integral(x: f64, nu: f64) -> f64 {
    let h = 0.0625;
    let mut sum = 0.5 * (-x).exp();
    let mut k = 1;
    loop {
        let t = h * k as f64;
        let v = (-x * t.cosh()).exp() * (nu * t).cosh();
        sum += v;
        if v < 1e-18 * sum {
            break;
        }
        k += 1;
    }
    h * sum
}

/// `K_0^{(p)}(x)` for `p = 0..=order`, from the Taylor recurrence of `x y'' + y' - x y = 0`.
pub fn bessel_k0_derivatives(x: f64, order: usize) -> Vec<f64> {
    let mut c = vec![bessel_k0(x), -bessel_k1(x)];
    for i in 0..order.saturating_sub(1) {
        let prev = if i == 0 { 0.0 } else { c[i - 1] };
        let fi = (i + 1) as f64;
        let next = (x * c[i] + prev - fi * fi * c[i + 1]) / (x * fi * (fi + 1.0));
        c.push(next);
    }
    c.truncate(order + 1);
    let mut factorial = 1.0;
    for (p, v) in c.iter_mut().enumerate() {
        if p > 0 {
            factorial *= p as f64;
        }
        *v *= factorial;
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn reference_values() {
        // Standard tabulated values.
        assert_relative_eq!(bessel_k0(0.1), 2.427_069_024_702_017, epsilon = 1e-14);
        assert_relative_eq!(bessel_k0(1.0), 0.421_024_438_240_708_3, epsilon = 1e-14);
        assert_relative_eq!(bessel_k0(2.0), 0.113_893_872_749_533_4, epsilon = 1e-14);
        assert_relative_eq!(
            bessel_k0(5.0),
            3.691_098_334_042_594e-3,
            max_relative = 1e-13
        );
        assert_relative_eq!(bessel_k1(1.0), 0.601_907_230_197_234_6, epsilon = 1e-14);
        assert_relative_eq!(
            bessel_k1(3.0),
            0.040_156_431_128_194_18,
            max_relative = 1e-13
        );
        assert_relative_eq!(bessel_i0(1.0), 1.266_065_877_752_008_4, epsilon = 1e-14);
        assert_relative_eq!(bessel_i1(1.0), 0.565_159_103_992_485, epsilon = 1e-14);
    }

    #[test]
    fn switchover_is_continuous() {
        let below = 2.0 - 1e-12;
        assert_relative_eq!(
            bessel_k0(below),
            k_integral(below, 0.0),
            max_relative = 1e-13
        );
        assert_relative_eq!(
            bessel_k1(below),
            k_integral(below, 1.0),
            max_relative = 1e-13
        );
    }

    /// `K_0''(x) = int_0^inf cosh^2 t exp(-x cosh t) dt`.
    fn k0_second(x: f64) -> f64 {
        let h = 0.01;
        let mut sum = 0.5 * (-x).exp();
        for k in 1.. {
            let t = h * k as f64;
            let v = t.cosh().powi(2) * (-x * t.cosh()).exp();
            sum += v;
            if v < 1e-18 * sum {
                break;
            }
        }
        h * sum
    }

    #[test]
    fn ode_residual() {
        // x^2 y'' + x y' - x^2 y = 0 with y' = -K1.
        for x in [0.05, 0.3, 1.0, 1.9, 2.1, 4.0, 9.0] {
            let d2 = k0_second(x);
            let res = x * x * d2 - x * bessel_k1(x) - x * x * bessel_k0(x);
            let scale = x * x * d2 + x * bessel_k1(x);
            assert!(res.abs() < 1e-10 * scale, "x = {x}: {res}");
        }
    }

    #[test]
    fn derivative_recurrence() {
        for x in [0.4, 1.5, 3.0] {
            let d = bessel_k0_derivatives(x, 4);
            let h = 1e-4;
            let fd = |p: usize| {
                (bessel_k0_derivatives(x + h, p)[p] - bessel_k0_derivatives(x - h, p)[p])
                    / (2.0 * h)
            };
            for p in 0..4 {
                assert_relative_eq!(d[p + 1], fd(p), max_relative = 1e-5);
            }
        }
    }
}
