//! Bessel functions of integer order for the Chebyshev propagator.

/// `J_0(x) .. J_n(x)` for `x >= 0` by Miller's downward recurrence,
/// normalized with `J_0 + 2 sum J_{2m} = 1`.
pub(crate) fn bessel_j_sequence(n: usize, x: f64) -> Vec<f64> {
    if x == 0.0 {
        let mut v = vec![0.0; n + 1];
        v[0] = 1.0;
        return v;
    }
    let start = n.max(x as usize) + 40 + (x.sqrt() * 10.0) as usize;
    let start = start + (start & 1);
    let mut out = vec![0.0; n + 1];
    let (mut jp1, mut j) = (0.0_f64, 1e-300_f64);
    let mut norm = 0.0;
    for m in (0..=start).rev() {
        if m <= n {
            out[m] = j;
        }
        if m % 2 == 0 {
            norm += if m == 0 { j } else { 2.0 * j };
        }
        if m == 0 {
            break;
        }
        let jm1 = 2.0 * m as f64 / x * j - jp1;
        jp1 = j;
        j = jm1;
        if j.abs() > 1e250 {
            // Rescale to avoid overflow.
            j *= 1e-250;
            jp1 *= 1e-250;
            norm *= 1e-250;
            for v in out.iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    for v in out.iter_mut() {
        *v /= norm;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        let j = bessel_j_sequence(5, 1.0);
        assert!((j[0] - 0.765_197_686_557_966_6).abs() < 1e-15);
        assert!((j[1] - 0.440_050_585_744_933_5).abs() < 1e-15);
        assert!((j[5] - 2.497_577_302_112_344e-4).abs() < 1e-17);
        let j = bessel_j_sequence(40, 20.0);
        assert!((j[0] - 0.167_024_664_340_583_2).abs() < 1e-14);
        assert!((j[20] - 0.164_747_773_775_326_6).abs() < 1e-14);
    }
}
