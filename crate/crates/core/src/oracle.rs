//! Independent brute-force reference implementations, used only by tests.
//!
//! These recompute the subset-counting functions and divisor sums from their
//! definitions (full subset enumeration, trial division), sharing no code
//! with the formula-based implementations in [`crate::arith`], so the two
//! layers can be checked against each other.

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::{Error, Result};

const SUBSET_BUDGET: u64 = 22;

/// gcd table over subsets of {1..n}: entry `mask` holds gcd of the selected
/// elements, with gcd(empty) = 0. Built by peeling the lowest set bit, so
/// each entry costs one gcd.
fn subset_gcds(n: u64) -> Vec<u32> {
    let n = n as usize;
    let mut gcds = vec![0u32; 1 << n];
    for mask in 1usize..(1 << n) {
        let low = mask.trailing_zeros();
        let rest = mask & (mask - 1);
        gcds[mask] = gcd_u32(gcds[rest], low + 1);
    }
    gcds
}

fn gcd_u32(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd_u32(b, a % b)
    }
}

/// Count of nonempty subsets A of {1..n} with gcd(A) = 1, by enumeration.
pub fn brute_g(n: u64) -> Result<u64> {
    if !(1..=SUBSET_BUDGET).contains(&n) {
        return Err(Error::Usage(format!(
            "brute_g enumerates 2^n subsets and accepts 1 <= n <= {SUBSET_BUDGET}, got {n}"
        )));
    }
    Ok(subset_gcds(n).iter().skip(1).filter(|&&g| g == 1).count() as u64)
}

/// Count of nonempty subsets A of {1..n} with gcd(A) coprime to n, by
/// enumeration. Starts at n = 2: at n = 1 the count (1) differs from the
/// inversion formula's value (2), and the formula is what the library
/// implements.
pub fn brute_nathanson_phi(n: u64) -> Result<u64> {
    if !(2..=SUBSET_BUDGET).contains(&n) {
        return Err(Error::Usage(format!(
            "brute_nathanson_phi accepts 2 <= n <= {SUBSET_BUDGET}, got {n}"
        )));
    }
    Ok(subset_gcds(n)
        .iter()
        .skip(1)
        .filter(|&&g| gcd_u32(g, n as u32) == 1)
        .count() as u64)
}

/// sigma_k by trial division.
pub fn brute_divisor_sum(n: u64, k: u32) -> BigUint {
    assert!((1..=1_000_000).contains(&n));
    let mut acc = BigUint::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            acc += BigUint::from(d).pow(k);
            if d != n / d {
                acc += BigUint::from(n / d).pow(k);
            }
        }
        d += 1;
    }
    acc
}

/// Dirichlet convolution (f * g)(n) = sum over d | n of f(d) g(n/d),
/// evaluated by divisor enumeration.
pub fn brute_convolution(f: &dyn Fn(u64) -> BigInt, g: &dyn Fn(u64) -> BigInt, n: u64) -> BigInt {
    assert!((1..=1_000_000).contains(&n));
    let mut acc = BigInt::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            acc += f(d) * g(n / d);
            if d != n / d {
                acc += f(n / d) * g(d);
            }
        }
        d += 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith;
    use num_traits::ToPrimitive;

    #[test]
    fn subset_counts_small() {
        assert_eq!(brute_g(1).unwrap(), 1);
        assert_eq!(brute_g(2).unwrap(), 2);
        assert_eq!(brute_g(4).unwrap(), 11);
        assert_eq!(brute_nathanson_phi(2).unwrap(), 2);
        assert_eq!(brute_nathanson_phi(3).unwrap(), 6);
        assert_eq!(brute_nathanson_phi(4).unwrap(), 12);
        assert!(brute_g(0).is_err());
        assert!(brute_g(23).is_err());
        assert!(brute_nathanson_phi(1).is_err());
    }

    #[test]
    fn difference_identity_fully_brute() {
        // 2 * (g(n+1) - g(n)) = Phi(n+1), with both sides enumerated.
        for n in 2..=17u64 {
            let lhs = 2 * (brute_g(n + 1).unwrap() - brute_g(n).unwrap());
            assert_eq!(lhs, brute_nathanson_phi(n + 1).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn agrees_with_formula_layer() {
        for n in 2..=18u64 {
            assert_eq!(
                arith::nathanson_phi(n).to_u64().unwrap(),
                brute_nathanson_phi(n).unwrap(),
                "phi at {n}"
            );
            assert_eq!(
                arith::nathanson_g(n).to_u64().unwrap(),
                brute_g(n).unwrap(),
                "g at {n}"
            );
        }
    }

    #[test]
    fn divisor_sum_examples() {
        assert_eq!(brute_divisor_sum(1, 3), BigUint::from(1u32));
        assert_eq!(brute_divisor_sum(12, 1), BigUint::from(28u32));
        for n in 1..200u64 {
            assert_eq!(brute_divisor_sum(n, 2), arith::sigma_k(n, 2), "n = {n}");
        }
    }

    #[test]
    fn convolution_matches_closed_form() {
        let sigma = |n: u64| BigInt::from(arith::sigma_k(n, 1));
        let phi = |n: u64| BigInt::from(arith::euler_phi(n));
        // sigma(1)phi(4) + sigma(2)phi(2) + sigma(4)phi(1) = 2 + 3 + 7.
        assert_eq!(brute_convolution(&sigma, &phi, 4), BigInt::from(12));
        for n in 1..300u64 {
            assert_eq!(
                brute_convolution(&sigma, &phi, n),
                BigInt::from(arith::sigma_conv_phi(n)),
                "n = {n}"
            );
        }
    }
}
