//! Primality testing and small-integer factorization.
//!
//! Below 2^64 the Miller-Rabin test with the twelve-prime base set
//! {2, 3, ..., 37} is deterministic. Above 2^64 we fall back to strong
//! probable-prime rounds with bases drawn from a ChaCha stream seeded by the
//! candidate itself, so results are reproducible run to run; callers receive
//! a [`Certainty`] flag distinguishing the two regimes.

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// How a primality verdict was certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certainty {
    /// Deterministic Miller-Rabin base set, valid for all inputs below 2^64.
    Deterministic,
    /// Strong probable prime after the recorded number of rounds.
    Probabilistic { rounds: u32 },
}

const SMALL_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality test for `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &SMALL_PRIMES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Primality test for arbitrary-precision integers.
///
/// Inputs below 2^64 get the deterministic verdict; larger inputs run
/// `rounds` strong probable-prime rounds with reproducible bases.
pub fn is_prime(n: &BigUint, rounds: u32) -> Option<Certainty> {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small).then_some(Certainty::Deterministic);
    }
    let two = BigUint::from(2u32);
    if n.is_even() {
        return None;
    }
    for &p in &SMALL_PRIMES[1..] {
        if (n % p).is_zero() {
            return None;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;

    // Seed from the candidate so reruns test the same bases.
    let mut seed = [0u8; 32];
    for (i, byte) in n.to_bytes_le().iter().enumerate() {
        seed[i % 32] ^= *byte;
    }
    let mut rng = ChaCha8Rng::from_seed(seed);

    'rounds: for _ in 0..rounds {
        let a = rng.gen_biguint_range(&two, &n_minus_1);
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'rounds;
            }
        }
        return None;
    }
    Some(Certainty::Probabilistic { rounds })
}

/// Factor a `u64` completely, returning (prime, exponent) pairs with primes
/// strictly increasing. Uses trial division by the small primes, then
/// Brent's variant of Pollard rho on what remains.
pub fn factor_u64(n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "factor_u64 requires n >= 1");
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut rest = n;
    for &p in &SMALL_PRIMES {
        if p * p > rest {
            break;
        }
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    }
    let mut stack = Vec::new();
    if rest > 1 {
        stack.push(rest);
    }
    while let Some(m) = stack.pop() {
        if is_prime_u64(m) {
            match factors.iter_mut().find(|(p, _)| *p == m) {
                Some((_, e)) => *e += 1,
                None => factors.push((m, 1)),
            }
            continue;
        }
        let d = pollard_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
    factors.sort_unstable_by_key(|&(p, _)| p);
    factors
}

/// Brent-cycle Pollard rho; returns a nontrivial divisor of composite `n`.
fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        let mut count = 0u32;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u64(x.abs_diff(y), n);
            count += 1;
            if count > 1 << 20 {
                break;
            }
        }
        if d != n && d != 1 {
            return d;
        }
        c += 1;
    }
}

pub(crate) fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

/// Iterator over primes `p >= start` with `p = class (mod modulus)`.
///
/// Existence for gcd(class, modulus) = 1 is Dirichlet's theorem; callers
/// bound the number of candidates they will inspect.
pub struct PrimesInClass {
    next: u64,
    modulus: u64,
}

impl PrimesInClass {
    pub fn new(class: u64, modulus: u64, start: u64) -> Self {
        assert!(modulus >= 1 && class < modulus);
        // Smallest value >= max(start, 2) congruent to class.
        let start = start.max(2);
        let rem = start % modulus;
        let next = if rem <= class {
            start + (class - rem)
        } else {
            start + modulus - (rem - class)
        };
        PrimesInClass { next, modulus }
    }
}

impl Iterator for PrimesInClass {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        loop {
            let candidate = self.next;
            self.next = self.next.checked_add(self.modulus)?;
            if is_prime_u64(candidate) {
                return Some(candidate);
            }
        }
    }
}
