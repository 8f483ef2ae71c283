//! Truncated integer power-series arithmetic and exact q-expansions.
//!
//! The discriminant cusp form expands as
//! `q * prod_{n>=1} (1 - q^n)^24 = q - 24q^2 + 252q^3 - 1472q^4 + ...`,
//! whose coefficients are the Ramanujan tau numbers (OEIS A000594). The
//! Euler factor `prod (1 - q^n)` is generated sparsely via the pentagonal
//! number theorem, then raised to the 24th power by binary exponentiation,
//! so the setup costs a handful of dense convolutions instead of N of them.
//!
//! Convolution is exact throughout. A guarded i128 fast path handles the
//! common case (coefficient magnitudes small enough that no accumulated sum
//! can overflow); anything larger falls back to arbitrary precision. FFT
//! multiplication is deliberately out of scope: at desk scale (N up to
//! ~10^5) schoolbook convolution is fast enough, and exactness is paramount.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{mod_eval, FactoredInteger, ModFn, ModulusContext, SpfSieve};
use crate::{Error, Limits, Result};

/// An integer power series truncated at q^(N+1): coefficients of q^0..q^N.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedIntSeries {
    coeffs: Vec<BigInt>,
}

impl TruncatedIntSeries {
    /// Wrap explicit coefficients; the truncation order is `len - 1`.
    pub fn new(coeffs: Vec<BigInt>) -> TruncatedIntSeries {
        assert!(!coeffs.is_empty(), "a series has at least the q^0 term");
        TruncatedIntSeries { coeffs }
    }

    pub fn zero(order: usize) -> TruncatedIntSeries {
        TruncatedIntSeries {
            coeffs: vec![BigInt::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> TruncatedIntSeries {
        let mut s = TruncatedIntSeries::zero(order);
        s.coeffs[0] = BigInt::one();
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> &BigInt {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }
}

/// Sum of two series of equal truncation order.
pub fn series_add(a: &TruncatedIntSeries, b: &TruncatedIntSeries) -> Result<TruncatedIntSeries> {
    check_orders(a, b)?;
    Ok(TruncatedIntSeries {
        coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
    })
}

/// Product truncated at the common order.
pub fn series_mul(a: &TruncatedIntSeries, b: &TruncatedIntSeries) -> Result<TruncatedIntSeries> {
    check_orders(a, b)?;
    let n = a.order();
    if let Some(coeffs) = mul_i128(&a.coeffs, &b.coeffs, n) {
        return Ok(TruncatedIntSeries { coeffs });
    }
    Ok(TruncatedIntSeries {
        coeffs: mul_big(&a.coeffs, &b.coeffs, n),
    })
}

/// e-th power by binary exponentiation; agrees with repeated `series_mul`.
pub fn series_pow(a: &TruncatedIntSeries, e: u32) -> TruncatedIntSeries {
    assert!(e >= 1, "series_pow requires a positive exponent");
    let mut base = a.clone();
    let mut exp = e;
    let mut acc: Option<TruncatedIntSeries> = None;
    loop {
        if exp & 1 == 1 {
            acc = Some(match acc {
                None => base.clone(),
                Some(acc) => series_mul(&acc, &base).expect("orders match"),
            });
        }
        exp >>= 1;
        if exp == 0 {
            break;
        }
        base = series_mul(&base, &base).expect("orders match");
    }
    acc.expect("e >= 1")
}

fn check_orders(a: &TruncatedIntSeries, b: &TruncatedIntSeries) -> Result<()> {
    if a.order() != b.order() {
        return Err(Error::Usage(format!(
            "truncation orders differ: {} vs {}",
            a.order(),
            b.order()
        )));
    }
    Ok(())
}

/// Exact schoolbook convolution in arbitrary precision, skipping zero terms
/// of the sparser operand.
fn mul_big(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let (outer, inner) = if count_nonzero(a) <= count_nonzero(b) {
        (a, b)
    } else {
        (b, a)
    };
    let mut out = vec![BigInt::zero(); n + 1];
    for (i, ai) in outer.iter().enumerate().take(n + 1) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in inner.iter().enumerate().take(n + 1 - i) {
            if bj.is_zero() {
                continue;
            }
            out[i + j] += ai * bj;
        }
    }
    out
}

fn count_nonzero(a: &[BigInt]) -> usize {
    a.iter().filter(|c| !c.is_zero()).count()
}

/// i128 convolution, attempted only when a conservative bound shows no
/// accumulated sum can overflow: (n+1) * max|a| * max|b| must stay below
/// 2^126. Returns None when the bound fails, forcing the exact big-integer
/// path. The bound is checked in arbitrary precision, so the fast path is
/// exactness-preserving by construction.
fn mul_i128(a: &[BigInt], b: &[BigInt], n: usize) -> Option<Vec<BigInt>> {
    let max_a = a.iter().map(|c| c.abs()).max()?;
    let max_b = b.iter().map(|c| c.abs()).max()?;
    let bound = max_a * max_b * BigInt::from(n as u64 + 1);
    if bound >= (BigInt::one() << 126) {
        return None;
    }
    let to_small = |v: &[BigInt]| -> Option<Vec<i128>> { v.iter().map(|c| c.to_i128()).collect() };
    let aa = to_small(a)?;
    let bb = to_small(b)?;
    let (outer, inner) =
        if aa.iter().filter(|&&c| c != 0).count() <= bb.iter().filter(|&&c| c != 0).count() {
            (&aa, &bb)
        } else {
            (&bb, &aa)
        };
    let mut out = vec![0i128; n + 1];
    for (i, &ai) in outer.iter().enumerate().take(n + 1) {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in inner.iter().enumerate().take(n + 1 - i) {
            out[i + j] += ai * bj;
        }
    }
    Some(out.into_iter().map(BigInt::from).collect())
}

/// The Euler factor prod_{n>=1} (1 - q^n) truncated at the given order,
/// generated sparsely: by the pentagonal number theorem the expansion is
/// sum_{k in Z} (-1)^k q^(k(3k-1)/2), so only O(sqrt(order)) terms are set.
pub fn euler_product(order: usize) -> TruncatedIntSeries {
    let mut s = TruncatedIntSeries::zero(order);
    s.coeffs[0] = BigInt::one();
    let mut k = 1u64;
    loop {
        let g1 = k * (3 * k - 1) / 2;
        let g2 = k * (3 * k + 1) / 2;
        if g1 as usize > order {
            break;
        }
        let sign = if k % 2 == 1 { -1 } else { 1 };
        s.coeffs[g1 as usize] += sign;
        if g2 as usize <= order {
            s.coeffs[g2 as usize] += sign;
        }
        k += 1;
    }
    s
}

/// Exact tau(1..n): coefficients of the discriminant form's q-expansion,
/// q * (Euler factor)^24. Budgeted by `limits.series_limit`.
pub fn delta_expansion(n: usize, limits: &Limits) -> Result<Vec<BigInt>> {
    if n < 1 {
        return Err(Error::Usage("delta_expansion requires n >= 1".into()));
    }
    if n > limits.series_limit {
        return Err(Error::Resource(format!(
            "expansion order {n} exceeds the series budget {}",
            limits.series_limit
        )));
    }
    // tau(i) is the coefficient of q^(i-1) in (prod (1-q^k))^24.
    let f = euler_product(n - 1);
    let f24 = series_pow(&f, 24);
    Ok(f24.coeffs)
}

/// (scalar, sigma order) pairs for the supported normalized Eisenstein
/// weights: E_4 = 1 + 240 sum sigma_3(n) q^n, E_6 = 1 - 504 sum sigma_5,
/// E_8 = 1 + 480 sum sigma_7, E_10 = 1 - 264 sum sigma_9, and
/// E_14 = 1 - 24 sum sigma_13.
const EISENSTEIN_TABLE: [(u32, i64, u32); 5] = [
    (4, 240, 3),
    (6, -504, 5),
    (8, 480, 7),
    (10, -264, 9),
    (14, -24, 13),
];

/// The scalar multiplying sigma_{w-1}(n) in the weight-w expansion.
pub fn eisenstein_scalar(weight: u32) -> Result<i64> {
    EISENSTEIN_TABLE
        .iter()
        .find(|&&(w, _, _)| w == weight)
        .map(|&(_, c, _)| c)
        .ok_or_else(|| Error::Domain(format!("unsupported Eisenstein weight {weight}")))
}

/// The sigma order w-1 used by the weight-w expansion.
pub fn eisenstein_sigma_order(weight: u32) -> Result<u32> {
    EISENSTEIN_TABLE
        .iter()
        .find(|&&(w, _, _)| w == weight)
        .map(|&(_, _, k)| k)
        .ok_or_else(|| Error::Domain(format!("unsupported Eisenstein weight {weight}")))
}

/// n-th Fourier coefficient (n >= 1) of the normalized Eisenstein series of
/// the given weight. Weight 12 is the discriminant form's territory, and
/// other weights are not supported.
pub fn eisenstein_coeff(weight: u32, n: u64) -> Result<BigInt> {
    assert!(n >= 1, "eisenstein_coeff requires n >= 1");
    let c = eisenstein_scalar(weight)?;
    let k = eisenstein_sigma_order(weight)?;
    Ok(BigInt::from(c) * BigInt::from(crate::arith::sigma_k(n, k)))
}

/// One congruence family checked by [`verify_tau_congruences`].
#[derive(Debug, Clone, Serialize)]
pub struct CongruenceCheck {
    pub modulus: u64,
    pub description: String,
    pub checked: u64,
    pub violations: Vec<CongruenceViolation>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CongruenceViolation {
    pub n: u64,
    pub tau_residue: u64,
    pub expected: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CongruenceReport {
    pub n_max: u64,
    pub checks: Vec<CongruenceCheck>,
}

impl CongruenceReport {
    pub fn total_violations(&self) -> usize {
        self.checks.iter().map(|c| c.violations.len()).sum()
    }
}

/// Check tau(n) against its classical congruences for all n <= n_max:
/// n*sigma_1(n) mod 5, n*sigma_3(n) mod 7, sigma_1(n) mod 8 for odd n,
/// n^2*sigma_1(n) mod 9, and sigma_11(n) mod 691. The left side comes from
/// the exact expansion, the right side from the divisor-sum formulas, so the
/// two sides are computed independently.
pub fn verify_tau_congruences(n_max: u64, limits: &Limits) -> Result<CongruenceReport> {
    let taus = delta_expansion(n_max as usize, limits)?;
    let sieve = SpfSieve::new(n_max as usize);
    let mut checks: Vec<CongruenceCheck> = crate::error::TAU_MODULI
        .iter()
        .map(|&m| CongruenceCheck {
            modulus: m,
            description: match m {
                5 => "tau(n) = n*sigma_1(n) (mod 5)",
                7 => "tau(n) = n*sigma_3(n) (mod 7)",
                8 => "tau(n) = sigma_1(n) (mod 8), odd n",
                9 => "tau(n) = n^2*sigma_1(n) (mod 9)",
                _ => "tau(n) = sigma_11(n) (mod 691)",
            }
            .to_string(),
            checked: 0,
            violations: Vec::new(),
        })
        .collect();
    for n in 1..=n_max {
        let x = FactoredInteger::from_trusted_u64_factors(n, sieve.factor(n));
        for check in checks.iter_mut() {
            let m = check.modulus;
            if m == 8 && n % 2 == 0 {
                continue;
            }
            let ctx = ModulusContext::new(m)?;
            let expected = mod_eval(ModFn::TauMod, &x, &ctx)?;
            let mut t = &taus[(n - 1) as usize] % m;
            if t.is_negative() {
                t += BigInt::from(m);
            }
            let tau_residue = t.to_u64().expect("residue fits u64");
            check.checked += 1;
            if tau_residue != expected {
                check.violations.push(CongruenceViolation {
                    n,
                    tau_residue,
                    expected,
                });
            }
        }
    }
    Ok(CongruenceReport { n_max, checks })
}
