use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::sync::OnceLock;

use super::zeta::zeta_even;
use crate::lattice::reduce_angle;

const TERMS: usize = 40;

/// `ζ(2k) / (k (2k+1) (2π)^{2k})`, k = 1..TERMS.
fn coefficients() -> &'static [f64; TERMS] {
    static C: OnceLock<[f64; TERMS]> = OnceLock::new();
    C.get_or_init(|| {
        let mut c = [0.0; TERMS];
        for (i, slot) in c.iter_mut().enumerate() {
            let k = i + 1;
            *slot = zeta_even(k) / (k as f64 * (2 * k + 1) as f64 * TAU.powi(2 * k as i32));
        }
        c
    })
}

/// Small-angle series, `0 < θ ≤ 3π/4`.
fn series(theta: f64) -> f64 {
    let t2 = theta * theta;
    let mut pow = t2;
    let mut tail = 0.0;
    for c in coefficients() {
        let term = c * pow;
        tail += term;
        if term < 1e-18 * tail {
            break;
        }
        pow *= t2;
    }
    theta - theta * theta.ln() + theta * tail
}

/// Clausen's function `Cl₂(θ) = Σ_{k≥1} sin(kθ)/k²`.
pub fn clausen_cl2(theta: f64) -> f64 {
    let r = reduce_angle(theta);
    let t = r.abs();
    let v = if t == 0.0 {
        0.0
    } else if t <= 0.75 * PI {
        series(t)
    } else {
        // duplication: both halves land back in the series range
        let h = 0.5 * t;
        2.0 * series(h) - 2.0 * series(PI - h)
    };
    debug_assert!(t <= PI + FRAC_PI_2);
    if r < 0.0 {
        -v
    } else {
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::CATALAN;
    use proptest::prelude::*;

    /// Σ sin(kθ)/k² summed directly with an averaged tail, for an independent check.
    fn direct(theta: f64) -> f64 {
        let n = 400_000;
        let mut s = 0.0;
        for k in (1..=n).rev() {
            let k = k as f64;
            s += (k * theta).sin() / (k * k);
        }
        s
    }

    #[test]
    fn trivial_points() {
        assert_eq!(clausen_cl2(0.0), 0.0);
        assert_eq!(clausen_cl2(PI), 0.0);
        assert!((clausen_cl2(FRAC_PI_2) - CATALAN).abs() < 1e-15);
        assert!((clausen_cl2(-FRAC_PI_2) + CATALAN).abs() < 1e-15);
    }

    #[test]
    fn against_direct_sum() {
        // the direct tail is O(1/(n²θ)), so keep θ away from 0
        for &t in &[0.3, 1.0, 2.0, 2.5, 3.0, 4.0, 5.5] {
            assert!((clausen_cl2(t) - direct(t)).abs() < 1e-10, "θ = {t}");
        }
    }

    #[test]
    fn maximum_at_pi_over_three() {
        // Cl₂ peaks at π/3 with value 1.0149416064096536...
        assert!((clausen_cl2(PI / 3.0) - 1.014_941_606_409_653_6).abs() < 1e-15);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn odd(theta in -50.0..50.0f64) {
            prop_assert_eq!(clausen_cl2(-theta), -clausen_cl2(theta));
        }
    }

    proptest! {
        #[test]
        fn duplication(theta in 1e-6..(PI - 1e-6)) {
            let lhs = clausen_cl2(2.0 * theta);
            let rhs = 2.0 * clausen_cl2(theta) - 2.0 * clausen_cl2(PI - theta);
            prop_assert!((lhs - rhs).abs() < 1e-13);
        }

        #[test]
        fn periodic(theta in -10.0..10.0f64) {
            prop_assert!((clausen_cl2(theta + TAU) - clausen_cl2(theta)).abs() < 1e-14);
        }
    }
}
