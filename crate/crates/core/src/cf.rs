//! Certified continued-fraction constructions from digit streams.
//!
//! Pipeline: a digit stream defines theta = sum_r digit_r / 10^r in [0, 1].
//! [`ThetaEnclosure`] tracks the rational interval [S/10^D, (S+1)/10^D]
//! pinned down by the first D digits; the closed upper end is deliberate —
//! nothing about the unseen tail is assumed. [`floor_n_theta`] refines until
//! floor(n*theta) is the same at both ends (so the value is certain), and
//! [`abd_quotients`] turns those floors into partial quotients
//! d_n = 1 + (floor(n*theta) mod k), each in 1..=k. When theta is
//! irrational the resulting continued fraction converges to a transcendental
//! value; [`alpha_decimals`] renders that value to a requested number of
//! decimal places with a certificate, refusing (rather than rounding
//! hopefully) when the supplied quotients cannot support the precision.
//!
//! If n*theta is an exact integer — theta rational, as with a constant
//! stream — no amount of refinement separates the interval ends, and
//! [`floor_n_theta`] reports the precision ceiling instead of guessing.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::streams::DigitStream;
use crate::{Error, Limits, Result};

/// Anything that can hand out the 1-indexed decimal digits defining theta.
pub trait DigitSource {
    fn digit(&mut self, r: u64) -> Result<u8>;
}

impl DigitSource for DigitStream {
    fn digit(&mut self, r: u64) -> Result<u8> {
        DigitStream::digit(self, r)
    }
}

/// How aggressively [`floor_n_theta`] refines between ambiguity checks.
/// Results never depend on the step; only the work done does.
#[derive(Debug, Clone, Copy)]
pub struct RefineSchedule {
    /// Extra digits pulled per refinement round (>= 1).
    pub step: usize,
}

impl Default for RefineSchedule {
    fn default() -> Self {
        RefineSchedule { step: 4 }
    }
}

/// The interval [S/10^D, (S+1)/10^D] containing theta after D digits.
#[derive(Debug)]
pub struct ThetaEnclosure<S: DigitSource> {
    source: S,
    numerator: BigUint,
    digits: usize,
}

impl<S: DigitSource> ThetaEnclosure<S> {
    pub fn new(source: S) -> ThetaEnclosure<S> {
        ThetaEnclosure {
            source,
            numerator: BigUint::zero(),
            digits: 0,
        }
    }

    /// Digits consumed so far (the D in [S/10^D, (S+1)/10^D]).
    pub fn digits_consumed(&self) -> usize {
        self.digits
    }

    /// Numerator S of the lower bound S/10^D.
    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    /// Consume digits until D >= d.
    pub fn refine_to(&mut self, d: usize) -> Result<()> {
        while self.digits < d {
            let digit = self.source.digit(self.digits as u64 + 1)?;
            debug_assert!(digit <= 9);
            self.numerator = &self.numerator * 10u32 + digit;
            self.digits += 1;
        }
        Ok(())
    }
}

fn digits10(n: u64) -> usize {
    n.to_string().len()
}

/// Certified floor(n*theta) and the enclosure depth that decided it.
///
/// Sound because theta lies in the closed interval: the floor is reported
/// only when both interval ends agree, so any tail of further digits yields
/// the same value. Refinement past `limits.precision_ceiling` digits is an
/// error, which is exactly what happens when n*theta is an integer (e.g.
/// theta = 1/3 from `const:3` at n = 3).
pub fn floor_n_theta<S: DigitSource>(
    enc: &mut ThetaEnclosure<S>,
    n: u64,
    schedule: &RefineSchedule,
    limits: &Limits,
) -> Result<(u64, usize)> {
    if n < 1 {
        return Err(Error::Usage("floor(n*theta) needs n >= 1".into()));
    }
    let step = schedule.step.max(1);
    let mut target = enc.digits.max(digits10(n) + step);
    loop {
        if target > limits.precision_ceiling {
            return Err(Error::PrecisionCeiling(format!(
                "floor({n}*theta) still ambiguous at {} digits (ceiling {}); \
                 theta may be rational with n*theta an integer",
                enc.digits, limits.precision_ceiling
            )));
        }
        enc.refine_to(target)?;
        let scale = BigUint::from(10u32).pow(enc.digits as u32);
        let ns = &enc.numerator * n;
        let lo = &ns / &scale;
        let hi = (&ns + n) / &scale;
        if lo == hi {
            let value = lo
                .to_u64()
                .ok_or_else(|| Error::Resource(format!("floor({n}*theta) does not fit in u64")))?;
            return Ok((value, enc.digits));
        }
        target = enc.digits + step;
    }
}

/// The first `count` partial quotients d_n = 1 + (floor(n*theta) mod k),
/// each in 1..=k.
pub fn abd_quotients<S: DigitSource>(
    enc: &mut ThetaEnclosure<S>,
    k: u64,
    count: usize,
    schedule: &RefineSchedule,
    limits: &Limits,
) -> Result<Vec<u64>> {
    if k < 2 {
        return Err(Error::Usage(format!("k must be >= 2, got {k}")));
    }
    if k > limits.max_cf_k {
        return Err(Error::Resource(format!(
            "k = {k} exceeds the configured bound {}",
            limits.max_cf_k
        )));
    }
    let mut out = Vec::with_capacity(count);
    for n in 1..=count as u64 {
        let (floor, _) = floor_n_theta(enc, n, schedule, limits)?;
        out.push(1 + (floor % k));
    }
    Ok(out)
}

/// A continued fraction [0; d_1, d_2, ...] with precomputed convergents.
#[derive(Debug, Clone)]
pub struct ContinuedFraction {
    quotients: Vec<u64>,
    // p[0] and q[0] hold the (-1)-indexed seeds, p[i+1] the i-th convergent
    // numerator: p_i = d_i * p_{i-1} + p_{i-2} from (p_-1, p_0) = (1, 0),
    // (q_-1, q_0) = (0, 1).
    p: Vec<BigInt>,
    q: Vec<BigInt>,
}

impl ContinuedFraction {
    pub fn from_quotients(quotients: Vec<u64>) -> Result<ContinuedFraction> {
        if quotients.iter().any(|&d| d < 1) {
            return Err(Error::Usage("partial quotients must be >= 1".into()));
        }
        let mut p = vec![BigInt::one(), BigInt::zero()];
        let mut q = vec![BigInt::zero(), BigInt::one()];
        for (i, &d) in quotients.iter().enumerate() {
            let pi = &p[i + 1] * d + &p[i];
            let qi = &q[i + 1] * d + &q[i];
            p.push(pi);
            q.push(qi);
        }
        Ok(ContinuedFraction { quotients, p, q })
    }

    pub fn quotients(&self) -> &[u64] {
        &self.quotients
    }

    pub fn len(&self) -> usize {
        self.quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotients.is_empty()
    }

    /// The i-th convergent p_i/q_i, 1-indexed up to `len()`.
    pub fn convergent(&self, i: usize) -> (&BigInt, &BigInt) {
        assert!(i >= 1 && i <= self.len(), "convergent index out of range");
        (&self.p[i + 1], &self.q[i + 1])
    }

    /// Check p_i q_{i-1} - p_{i-1} q_i = (-1)^{i-1} for every i, the exact
    /// invariant that makes consecutive convergents bracket the limit.
    pub fn determinant_holds(&self) -> bool {
        (1..=self.len()).all(|i| {
            let det = &self.p[i + 1] * &self.q[i] - &self.p[i] * &self.q[i + 1];
            if i % 2 == 1 {
                det == BigInt::one()
            } else {
                det == -BigInt::one()
            }
        })
    }

    /// Exact value of the finite continued fraction as a reduced fraction
    /// (its last convergent).
    pub fn value(&self) -> (BigUint, BigUint) {
        let last = self.p.len() - 1;
        (
            self.p[last]
                .to_biguint()
                .expect("convergents are nonnegative"),
            self.q[last]
                .to_biguint()
                .expect("denominators are positive"),
        )
    }
}

/// Certificate accompanying a certified decimal expansion: the bracketing
/// convergents' index and denominators, and the proven error exponent.
#[derive(Debug, Clone, Serialize)]
pub struct DecimalCertificate {
    /// Index of the last convergent used.
    pub n: usize,
    /// The expansion differs from the true value by less than
    /// 10^-(bound_exponent).
    pub bound_exponent: usize,
    pub q_n: String,
    pub q_next: String,
}

fn quotients_needed_estimate(digits: usize) -> usize {
    // Worst case (all quotients 1) the denominators grow like Fibonacci,
    // so q_{n-1} q_n > 10^(digits+2) needs about (digits+2) * 2.4 terms.
    (digits + 2) * 12 / 5 + 3
}

/// Decimal expansion of the value of an infinite continued fraction whose
/// first `len` quotients are given, certified to `digits` places: the last
/// two convergents bracket the true value within 10^-(digits+2), and their
/// truncations agree, so truncation of the true value equals both.
///
/// Fails with [`Error::ExtendQuotients`] when the supplied quotients cannot
/// support the requested precision (bracket too wide, or a decimal boundary
/// inside it); the caller should regenerate with more quotients.
pub fn alpha_decimals(
    cf: &ContinuedFraction,
    digits: usize,
) -> Result<(String, DecimalCertificate)> {
    if digits < 1 {
        return Err(Error::Usage("digits must be >= 1".into()));
    }
    let extend = |required: usize| Error::ExtendQuotients {
        required,
        have: cf.len(),
        digits,
    };
    if cf.len() < 2 {
        return Err(extend(quotients_needed_estimate(digits)));
    }
    let n = cf.len();
    let (pa, qa) = cf.convergent(n - 1);
    let (pb, qb) = cf.convergent(n);
    let bound_exponent = digits + 2;
    let threshold = BigInt::from(10u32).pow(bound_exponent as u32);
    if qa * qb <= threshold {
        return Err(extend(quotients_needed_estimate(digits)));
    }
    let scale = BigInt::from(10u32).pow(digits as u32);
    let ta = (pa * &scale) / qa;
    let tb = (pb * &scale) / qb;
    if ta != tb {
        // The bracket straddles a multiple of 10^-digits; more quotients
        // shrink it off the boundary (the limit is irrational).
        return Err(extend(quotients_needed_estimate(digits).max(n + 8)));
    }
    debug_assert!(!ta.is_negative() && ta < scale);
    let body = format!("{:0>width$}", ta.to_string(), width = digits);
    let certificate = DecimalCertificate {
        n,
        bound_exponent,
        q_n: qa.to_string(),
        q_next: qb.to_string(),
    };
    Ok((format!("0.{body}"), certificate))
}

/// Exact truncated decimal expansion of a *finite* continued fraction's
/// rational value (no bracketing involved).
pub fn exact_decimals(cf: &ContinuedFraction, digits: usize) -> String {
    let (p, q) = cf.value();
    let int_part = &p / &q;
    let rem = &p % &q;
    let scale = BigUint::from(10u32).pow(digits as u32);
    let frac = (rem * scale) / &q;
    format!("{int_part}.{:0>width$}", frac.to_string(), width = digits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::streams::StreamSpec;
    use proptest::prelude::*;

    /// Finite digit list padded with zeros: theta = S/10^len exactly.
    struct FixedDigits(Vec<u8>);

    impl DigitSource for FixedDigits {
        fn digit(&mut self, r: u64) -> Result<u8> {
            Ok(self.0.get((r - 1) as usize).copied().unwrap_or(0))
        }
    }

    /// The same digit forever: theta = d/9.
    struct RepeatDigit(u8);

    impl DigitSource for RepeatDigit {
        fn digit(&mut self, _r: u64) -> Result<u8> {
            Ok(self.0)
        }
    }

    fn tau5_stream() -> DigitStream {
        let spec: StreamSpec = "tau%5".parse().unwrap();
        DigitStream::new(spec, &Limits::default()).unwrap()
    }

    #[test]
    fn floor_examples_for_theta_point_one() {
        let limits = Limits::default();
        let schedule = RefineSchedule::default();
        let mut enc = ThetaEnclosure::new(FixedDigits(vec![1]));
        assert_eq!(floor_n_theta(&mut enc, 7, &schedule, &limits).unwrap().0, 0);
        assert_eq!(
            floor_n_theta(&mut enc, 10, &schedule, &limits).unwrap().0,
            1
        );
        assert_eq!(
            floor_n_theta(&mut enc, 25, &schedule, &limits).unwrap().0,
            2
        );
    }

    #[test]
    fn floor_examples_for_tau_stream() {
        // tau mod 5 starts 1, 1, 2, 3, 0, so theta = 0.11230...
        let limits = Limits::default();
        let schedule = RefineSchedule::default();
        let mut enc = ThetaEnclosure::new(tau5_stream());
        assert_eq!(floor_n_theta(&mut enc, 1, &schedule, &limits).unwrap().0, 0);
        assert_eq!(floor_n_theta(&mut enc, 9, &schedule, &limits).unwrap().0, 1);
    }

    #[test]
    fn repeated_digit_hits_precision_ceiling() {
        // theta = 3/9 = 1/3 and n = 3: n*theta = 1 exactly, forever
        // ambiguous between 0.999... and 1.000...
        let limits = Limits {
            precision_ceiling: 200,
            ..Limits::default()
        };
        let schedule = RefineSchedule::default();
        let mut enc = ThetaEnclosure::new(RepeatDigit(3));
        assert_eq!(floor_n_theta(&mut enc, 2, &schedule, &limits).unwrap().0, 0);
        assert!(matches!(
            floor_n_theta(&mut enc, 3, &schedule, &limits),
            Err(Error::PrecisionCeiling(_))
        ));
    }

    #[test]
    fn quotients_are_bounded_and_match_expectation() {
        let limits = Limits::default();
        let schedule = RefineSchedule::default();
        let mut enc = ThetaEnclosure::new(tau5_stream());
        let qs = abd_quotients(&mut enc, 2, 50, &schedule, &limits).unwrap();
        assert_eq!(qs.len(), 50);
        assert!(qs.iter().all(|&d| (1..=2).contains(&d)));
        // floor(9 * 0.11230...) = 1, so d_9 = 1 + (1 mod 2) = 2.
        assert_eq!(qs[8], 2);
    }

    #[test]
    fn quotients_do_not_depend_on_the_refinement_schedule() {
        let limits = Limits::default();
        let fine = RefineSchedule { step: 1 };
        let coarse = RefineSchedule { step: 4 };
        let mut enc1 = ThetaEnclosure::new(tau5_stream());
        let mut enc2 = ThetaEnclosure::new(tau5_stream());
        assert_eq!(
            abd_quotients(&mut enc1, 3, 40, &fine, &limits).unwrap(),
            abd_quotients(&mut enc2, 3, 40, &coarse, &limits).unwrap()
        );
    }

    #[test]
    fn k_is_validated() {
        let limits = Limits::default();
        let schedule = RefineSchedule::default();
        let mut enc = ThetaEnclosure::new(tau5_stream());
        assert!(matches!(
            abd_quotients(&mut enc, 1, 5, &schedule, &limits),
            Err(Error::Usage(_))
        ));
        assert!(matches!(
            abd_quotients(&mut enc, 1000, 5, &schedule, &limits),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn convergents_and_determinant() {
        let cf = ContinuedFraction::from_quotients(vec![2, 2, 2, 2, 2]).unwrap();
        // [0; 2, 2, ...] converges to sqrt(2) - 1: 1/2, 2/5, 5/12, 12/29, ...
        let (p, q) = cf.convergent(3);
        assert_eq!((p.to_string(), q.to_string()), ("5".into(), "12".into()));
        assert!(cf.determinant_holds());
        assert!(ContinuedFraction::from_quotients(vec![1, 0, 2]).is_err());
    }

    #[test]
    fn exact_decimals_of_tiny_fractions() {
        let one = ContinuedFraction::from_quotients(vec![1]).unwrap();
        assert_eq!(one.value(), (BigUint::one(), BigUint::one()));
        assert_eq!(exact_decimals(&one, 3), "1.000");
        let two_thirds = ContinuedFraction::from_quotients(vec![1, 2]).unwrap();
        assert_eq!(exact_decimals(&two_thirds, 3), "0.666");
    }

    #[test]
    fn short_fractions_demand_more_quotients() {
        let cf = ContinuedFraction::from_quotients(vec![1, 2]).unwrap();
        match alpha_decimals(&cf, 30) {
            Err(Error::ExtendQuotients {
                required,
                have,
                digits,
            }) => {
                assert!(required > have);
                assert_eq!(have, 2);
                assert_eq!(digits, 30);
            }
            other => panic!("expected ExtendQuotients, got {other:?}"),
        }
    }

    #[test]
    fn certified_decimals_match_known_limit() {
        // [0; 1, 2, 1, 2, ...] converges to sqrt(3) - 1 = 0.7320508075688772...
        let quotients: Vec<u64> = (0..60).map(|i| if i % 2 == 0 { 1 } else { 2 }).collect();
        let cf = ContinuedFraction::from_quotients(quotients).unwrap();
        let (s, cert) = alpha_decimals(&cf, 12).unwrap();
        assert_eq!(s, "0.732050807568");
        assert_eq!(cert.bound_exponent, 14);
        assert_eq!(cert.n, 60);
        // The certificate's denominators must multiply past the bound.
        let qn: BigUint = cert.q_n.parse().unwrap();
        let qn1: BigUint = cert.q_next.parse().unwrap();
        assert!(qn * qn1 > BigUint::from(10u32).pow(14));
    }

    #[test]
    fn certified_prefix_is_stable_under_more_quotients() {
        let mk = |len: usize| {
            let qs: Vec<u64> = (0..len).map(|i| 1 + ((i * i + 1) % 3) as u64).collect();
            ContinuedFraction::from_quotients(qs).unwrap()
        };
        let (short, _) = alpha_decimals(&mk(80), 15).unwrap();
        let (long, _) = alpha_decimals(&mk(200), 15).unwrap();
        assert_eq!(short, long);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn floor_is_exact_for_terminating_theta(
            ds in proptest::collection::vec(0u8..10, 1..12),
            n in 1u64..1000
        ) {
            let limits = Limits::default();
            let schedule = RefineSchedule { step: 3 };
            let len = ds.len();
            let s0: u64 = ds.iter().fold(0u64, |acc, &d| acc * 10 + d as u64);
            let mut enc = ThetaEnclosure::new(FixedDigits(ds));
            let (got, _) = floor_n_theta(&mut enc, n, &schedule, &limits).unwrap();
            let expect = n * s0 / 10u64.pow(len as u32);
            prop_assert_eq!(got, expect);
        }

        #[test]
        fn determinant_identity_always_holds(
            qs in proptest::collection::vec(1u64..10, 1..40)
        ) {
            let cf = ContinuedFraction::from_quotients(qs).unwrap();
            prop_assert!(cf.determinant_holds());
        }
    }
}
