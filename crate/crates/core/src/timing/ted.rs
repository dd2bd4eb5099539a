//! Zero-crossing timing error detector.

/// `e = x_mid * (prev - curr) / 2`.
///
/// Zero without a symbol transition. With a `+1 -> -1` transition a positive
/// midpoint means the crossing has not happened yet, i.e. sampling is early.
pub fn zc_ted(midpoint: f64, prev_decision: i8, curr_decision: i8) -> f64 {
    midpoint * f64::from(prev_decision - curr_decision) / 2.0
}

/// Hard decision for binary PAM; zero maps to +1.
pub fn decide(x: f64) -> i8 {
    if x < 0.0 {
        -1
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_transition_no_error() {
        assert_eq!(zc_ted(0.8, 1, 1), 0.0);
        assert_eq!(zc_ted(-0.8, -1, -1), 0.0);
    }

    #[test]
    fn locked_midpoint_gives_zero() {
        assert_eq!(zc_ted(0.0, 1, -1), 0.0);
    }

    #[test]
    fn direct_formula() {
        assert_eq!(zc_ted(0.3, 1, -1), 0.3);
        assert_eq!(zc_ted(0.3, -1, 1), -0.3);
    }

    #[test]
    fn decisions() {
        assert_eq!(decide(0.2), 1);
        assert_eq!(decide(-0.2), -1);
        assert_eq!(decide(0.0), 1);
    }
}
