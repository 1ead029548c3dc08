use crate::dyadic::Dyadic;
use crate::formats::{decode, encode_dyadic, Class, FormatSpec, UnpackedReal};

/// Number of correct bits of `result` (a pattern of `fmt`) against `exact`.
///
/// The correctly rounded result scores the format's fraction precision (52
/// for binary64), which is also the cap for everything else. Otherwise the
/// score is `-log2(|v - exact| / |exact|)`, floored at 0 and kept strictly
/// below the cap; for `exact == 0`
/// it is the cap for a zero result and 0 for anything else. NaN, NaR and
/// infinite results score 0.
pub fn correct_bits(result: u128, fmt: FormatSpec, exact: &Dyadic) -> f64 {
    let cap = f64::from(fmt.fraction_bits());
    let Ok(v) = decode(result, fmt) else {
        return 0.0;
    };
    if !v.is_finite() {
        return 0.0;
    }
    if result == encode_dyadic(exact, fmt) {
        return cap;
    }
    let v = v.to_dyadic().expect("finite");
    if exact.is_zero() {
        return if v.is_zero() { cap } else { 0.0 };
    }
    let err = &v - exact;
    if err.is_zero() {
        return cap;
    }
    let rel_log2 = err.log2_abs() - exact.log2_abs();
    // only the correctly rounded result may reach the cap
    (-rel_log2).clamp(0.0, cap.next_down())
}

/// `Σ|x[i] y[i]| / |Σ x[i] y[i]|`; infinite when the exact dot is zero but
/// some product is not, 1 for an all-zero input.
pub fn condition_number(x: &[UnpackedReal], y: &[UnpackedReal], exact: &Dyadic) -> f64 {
    let abs_x: Vec<UnpackedReal> = x.iter().map(abs).collect();
    let abs_y: Vec<UnpackedReal> = y.iter().map(abs).collect();
    let Ok(abs_sum) = super::exact_dot(&abs_x, &abs_y) else {
        return f64::NAN;
    };
    if abs_sum.is_zero() {
        return 1.0;
    }
    if exact.is_zero() {
        return f64::INFINITY;
    }
    (abs_sum.log2_abs() - exact.log2_abs()).exp2()
}

fn abs(v: &UnpackedReal) -> UnpackedReal {
    let mut a = v.clone();
    if a.class != Class::Nan {
        a.negative = false;
    }
    a
}

/// Median of a sample (mean of the middle pair for even sizes); NaN if empty.
pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        (v[mid - 1] + v[mid]) / 2.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(v: f64) -> Dyadic {
        Dyadic::from_f64(v).unwrap()
    }

    fn b64(v: f64) -> u128 {
        u128::from(v.to_bits())
    }

    #[test]
    fn correctly_rounded_scores_the_cap() {
        let exact = &d(1.0) + &Dyadic::pow2(-60);
        assert_eq!(correct_bits(b64(1.0), FormatSpec::BINARY64, &exact), 52.0);
        assert_eq!(correct_bits(0x3F80_0000, FormatSpec::BINARY32, &exact), 23.0);
        assert_eq!(correct_bits(0x4000, FormatSpec::POSIT16_1, &exact), 12.0);
    }

    #[test]
    fn relative_error_definition() {
        let exact = d(3.0);
        assert_eq!(correct_bits(b64(6.0), FormatSpec::BINARY64, &exact), 0.0);
        let v = 3.0 * (1.0 + 2f64.powi(-10));
        assert_eq!(correct_bits(b64(v), FormatSpec::BINARY64, &exact), 10.0);
        assert_eq!(correct_bits(b64(-3.0), FormatSpec::BINARY64, &exact), 0.0);
    }

    #[test]
    fn one_ulp_off_is_capped() {
        // 1 ulp away near the top of a binade is a relative error below 2^-52
        let exact = d(1.9999999999999998);
        let off = b64(1.9999999999999996);
        let bits = correct_bits(off, FormatSpec::BINARY64, &exact);
        assert!(bits > 51.0 && bits <= 52.0, "{bits}");
    }

    #[test]
    fn zero_and_special_results() {
        let zero = Dyadic::zero();
        assert_eq!(correct_bits(0, FormatSpec::BINARY64, &zero), 52.0);
        assert_eq!(correct_bits(b64(-0.0), FormatSpec::BINARY64, &zero), 52.0);
        assert_eq!(correct_bits(b64(1e-300), FormatSpec::BINARY64, &zero), 0.0);
        assert_eq!(correct_bits(b64(f64::NAN), FormatSpec::BINARY64, &d(1.0)), 0.0);
        assert_eq!(correct_bits(b64(f64::INFINITY), FormatSpec::BINARY64, &d(1.0)), 0.0);
        assert_eq!(correct_bits(0x8000, FormatSpec::POSIT16_1, &d(1.0)), 0.0);
    }

    #[test]
    fn antitone_in_error() {
        let exact = d(1.0);
        let scores: Vec<f64> =
            (1..=52).map(|k| correct_bits(b64(1.0 + 2f64.powi(-k)), FormatSpec::BINARY64, &exact)).collect();
        for (k, &s) in (1..=51).zip(&scores) {
            assert_eq!(s, f64::from(k));
        }
        // one ulp off is not correctly rounded
        assert!(scores[51] < 52.0 && scores[51] > 51.99);
    }

    #[test]
    fn condition_of_simple_vectors() {
        let f = FormatSpec::BINARY64;
        let x: Vec<UnpackedReal> = [1.0, 1.0].iter().map(|&v| decode(b64(v), f).unwrap()).collect();
        let y: Vec<UnpackedReal> = [1.0, -0.5].iter().map(|&v| decode(b64(v), f).unwrap()).collect();
        let exact = super::super::exact_dot(&x, &y).unwrap();
        assert!((condition_number(&x, &y, &exact) - 3.0).abs() < 1e-12);
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        assert!(median(&[]).is_nan());
    }
}
