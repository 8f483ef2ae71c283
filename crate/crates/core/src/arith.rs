//! Exact and modular evaluation of multiplicative (and near-multiplicative)
//! arithmetic functions, plus sieve-based bulk evaluation over ranges.
//!
//! The exact layer returns arbitrary-precision values: `sigma_k`, Euler's
//! totient, Jordan's totient `J_k` (odd k >= 3), the unitary totient,
//! the Dirichlet convolution sigma * phi, and the two subset-counting
//! functions `nathanson_phi` (OEIS A027375 for n >= 2) and `nathanson_g`
//! (OEIS A085945).
//!
//! The modular layer (`mod_eval`) evaluates residues at integers of *known*
//! factorization, using multiplicativity across coprime prime powers and
//! modular exponentiation. This is what makes residue checks possible at
//! integers far too large for exact evaluation, e.g. products of two large
//! primes produced by Dirichlet-progression searches.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::primality::{factor_u64, is_prime, Certainty};
use crate::{Error, Limits, Result};

// ---------------------------------------------------------------------------
// Small modular helpers (u64 residues, u128 intermediates).
// ---------------------------------------------------------------------------

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
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

fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    let (a, b) = (a % m, b % m);
    if a >= b {
        a - b
    } else {
        a + m - b
    }
}

/// `2^exp mod m` for an arbitrary-precision exponent.
fn two_pow_mod(exp: &BigUint, m: u64) -> u64 {
    BigUint::from(2u32)
        .modpow(exp, &BigUint::from(m))
        .to_u64()
        .expect("residue fits u64")
}

// ---------------------------------------------------------------------------
// Exact single-value evaluation.
// ---------------------------------------------------------------------------

/// Möbius function: 0 if `n` has a squared prime factor, otherwise
/// (-1)^(number of prime factors).
pub fn mobius(n: u64) -> i32 {
    assert!(n >= 1, "mobius requires n >= 1");
    let factors = factor_u64(n);
    if factors.iter().any(|&(_, e)| e > 1) {
        0
    } else if factors.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Generalized sum of divisors: sigma_k(n) = sum of d^k over d | n.
pub fn sigma_k(n: u64, k: u32) -> BigUint {
    assert!(n >= 1, "sigma_k requires n >= 1");
    let mut acc = BigUint::one();
    for (p, e) in factor_u64(n) {
        let pk = BigUint::from(p).pow(k);
        let mut local = BigUint::one();
        let mut power = BigUint::one();
        for _ in 0..e {
            power *= &pk;
            local += &power;
        }
        acc *= local;
    }
    acc
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    assert!(n >= 1, "euler_phi requires n >= 1");
    let mut acc = 1u64;
    for (p, e) in factor_u64(n) {
        acc *= p.pow(e - 1) * (p - 1);
    }
    acc
}

/// Jordan's totient J_k(n) = n^k * prod_{p|n} (1 - p^(-k)), supported for
/// odd k >= 3 only; other orders are outside this library's scope and are
/// rejected.
pub fn jordan_totient(k: u32, n: u64) -> Result<BigUint> {
    if k < 3 || k % 2 == 0 {
        return Err(Error::Domain(format!(
            "jordan_totient requires odd k >= 3, got k = {k}"
        )));
    }
    assert!(n >= 1, "jordan_totient requires n >= 1");
    let mut acc = BigUint::one();
    for (p, e) in factor_u64(n) {
        let pk = BigUint::from(p).pow(k);
        acc *= pk.pow(e - 1) * (&pk - 1u32);
    }
    Ok(acc)
}

/// Unitary totient: prod over maximal prime powers p^a || n of (p^a - 1).
pub fn unitary_phi(n: u64) -> u64 {
    assert!(n >= 1, "unitary_phi requires n >= 1");
    factor_u64(n)
        .into_iter()
        .map(|(p, e)| p.pow(e) - 1)
        .product()
}

/// Dirichlet convolution (sigma * phi)(n) = sum_{d|n} sigma(d) * phi(n/d).
/// Multiplicative; at a prime, sigma*phi(p) = (p+1) + (p-1) = 2p.
pub fn sigma_conv_phi(n: u64) -> BigUint {
    assert!(n >= 1, "sigma_conv_phi requires n >= 1");
    let mut acc = BigUint::one();
    for (p, e) in factor_u64(n) {
        // Local factor: sum_{i=0}^{e} sigma(p^i) * phi(p^(e-i)).
        let pb = BigUint::from(p);
        let mut local = BigUint::zero();
        for i in 0..=e {
            let mut sigma_pi = BigUint::one();
            let mut power = BigUint::one();
            for _ in 0..i {
                power *= &pb;
                sigma_pi += &power;
            }
            let phi_rest = if e - i == 0 {
                BigUint::one()
            } else {
                pb.pow(e - i - 1) * (&pb - 1u32)
            };
            local += sigma_pi * phi_rest;
        }
        acc *= local;
    }
    acc
}

/// Möbius-inversion subset counter: sum_{d|n} mu(d) * 2^(n/d).
///
/// For n >= 2 this counts the nonempty subsets A of {1..n} with gcd(A)
/// coprime to n; at a prime it equals 2^p - 2. The formula gives 2 at n = 1
/// (the subset count there is 1); this library follows the formula, and the
/// brute-force cross-checks start at n = 2.
pub fn nathanson_phi(n: u64) -> BigUint {
    assert!(n >= 1, "nathanson_phi requires n >= 1");
    let primes: Vec<u64> = factor_u64(n).into_iter().map(|(p, _)| p).collect();
    let mut acc = BigInt::zero();
    for mask in 0u32..(1 << primes.len()) {
        let mut d = 1u64;
        for (i, &p) in primes.iter().enumerate() {
            if mask >> i & 1 == 1 {
                d *= p;
            }
        }
        let term = BigInt::one() << (n / d) as usize;
        if mask.count_ones() % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc.to_biguint().expect("subset count is non-negative")
}

/// Count of relatively prime nonempty subsets of {1..n}, by the inversion
/// formula g(n) = sum_{d=1}^{n} mu(d) * (2^floor(n/d) - 1).
pub fn nathanson_g(n: u64) -> BigUint {
    assert!(n >= 1, "nathanson_g requires n >= 1");
    let mu = mobius_sieve(n as usize);
    let mut acc = BigInt::zero();
    for d in 1..=n {
        let m = mu[d as usize];
        if m == 0 {
            continue;
        }
        let term = (BigInt::one() << (n / d) as usize) - 1;
        if m > 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc.to_biguint().expect("subset count is non-negative")
}

// ---------------------------------------------------------------------------
// Sieves.
// ---------------------------------------------------------------------------

/// Smallest-prime-factor sieve; `spf[n]` is the least prime dividing n
/// (spf[1] = 1). Supports fast factorization of every n up to the limit.
pub struct SpfSieve {
    spf: Vec<u32>,
}

impl SpfSieve {
    pub fn new(limit: usize) -> SpfSieve {
        let mut spf: Vec<u32> = (0..=limit as u32).collect();
        let mut i = 2usize;
        while i * i <= limit {
            if spf[i] == i as u32 {
                let mut j = i * i;
                while j <= limit {
                    if spf[j] == j as u32 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
            i += 1;
        }
        SpfSieve { spf }
    }

    pub fn limit(&self) -> usize {
        self.spf.len() - 1
    }

    pub fn factor(&self, n: u64) -> Vec<(u64, u32)> {
        assert!(n >= 1 && (n as usize) < self.spf.len());
        let mut out: Vec<(u64, u32)> = Vec::new();
        let mut rest = n as usize;
        while rest > 1 {
            let p = self.spf[rest] as usize;
            let mut e = 0u32;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            out.push((p as u64, e));
        }
        out
    }
}

/// Möbius values for 0..=limit via the smallest-prime-factor sieve.
pub fn mobius_sieve(limit: usize) -> Vec<i8> {
    let sieve = SpfSieve::new(limit.max(1));
    let mut mu = vec![0i8; limit + 1];
    if limit >= 1 {
        mu[1] = 1;
    }
    for n in 2..=limit {
        let p = sieve.spf[n] as usize;
        let rest = n / p;
        mu[n] = if rest % p == 0 { 0 } else { -mu[rest] };
    }
    mu
}

// ---------------------------------------------------------------------------
// Integers of known factorization + modular evaluation.
// ---------------------------------------------------------------------------

/// A positive integer carrying its complete prime factorization, with primes
/// strictly increasing. Construction validates primality; factors above 2^64
/// are certified probabilistically and the weakest certainty is recorded.
#[derive(Debug, Clone)]
pub struct FactoredInteger {
    n: BigUint,
    factors: Vec<(BigUint, u32)>,
    certainty: Certainty,
}

impl FactoredInteger {
    pub fn from_u64(n: u64) -> FactoredInteger {
        assert!(n >= 1, "FactoredInteger requires n >= 1");
        let factors = factor_u64(n)
            .into_iter()
            .map(|(p, e)| (BigUint::from(p), e))
            .collect();
        FactoredInteger {
            n: BigUint::from(n),
            factors,
            certainty: Certainty::Deterministic,
        }
    }

    /// Build from explicit (prime, exponent) pairs, validating primality of
    /// every base and the strictly-increasing order.
    pub fn from_parts(factors: Vec<(BigUint, u32)>, mr_rounds: u32) -> Result<FactoredInteger> {
        if factors.is_empty() {
            return Ok(FactoredInteger {
                n: BigUint::one(),
                factors,
                certainty: Certainty::Deterministic,
            });
        }
        let mut certainty = Certainty::Deterministic;
        let mut n = BigUint::one();
        for (i, (p, e)) in factors.iter().enumerate() {
            if *e < 1 {
                return Err(Error::Domain("exponents must be >= 1".into()));
            }
            if i > 0 && factors[i - 1].0 >= *p {
                return Err(Error::Domain("primes must be strictly increasing".into()));
            }
            match is_prime(p, mr_rounds) {
                None => {
                    return Err(Error::Domain(format!("{p} is not prime")));
                }
                Some(Certainty::Probabilistic { rounds }) => {
                    certainty = Certainty::Probabilistic { rounds };
                }
                Some(Certainty::Deterministic) => {}
            }
            n *= p.pow(*e);
        }
        Ok(FactoredInteger {
            n,
            factors,
            certainty,
        })
    }

    /// Crate-internal: wrap sieve output, whose bases are prime by
    /// construction, without re-running primality tests.
    pub(crate) fn from_trusted_u64_factors(n: u64, factors: Vec<(u64, u32)>) -> FactoredInteger {
        FactoredInteger {
            n: BigUint::from(n),
            factors: factors
                .into_iter()
                .map(|(p, e)| (BigUint::from(p), e))
                .collect(),
            certainty: Certainty::Deterministic,
        }
    }

    pub fn n(&self) -> &BigUint {
        &self.n
    }

    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    pub fn certainty(&self) -> Certainty {
        self.certainty
    }

    fn n_mod(&self, m: u64) -> u64 {
        (self.n() % m).to_u64().expect("residue fits u64")
    }

    fn is_even(&self) -> bool {
        self.factors
            .first()
            .map_or(false, |(p, _)| p == &BigUint::from(2u32))
    }
}

/// A residue modulus m >= 2, optionally carrying the progression modulus
/// K(m) used by divisibility-criterion witness searches (e.g. phi(m), or m
/// itself).
#[derive(Debug, Clone)]
pub struct ModulusContext {
    pub m: u64,
    pub k_of_m: Option<u64>,
}

impl ModulusContext {
    pub fn new(m: u64) -> Result<ModulusContext> {
        if m < 2 {
            return Err(Error::Domain(format!("modulus must be >= 2, got {m}")));
        }
        Ok(ModulusContext { m, k_of_m: None })
    }

    pub fn with_k(m: u64, k_of_m: u64) -> Result<ModulusContext> {
        let mut ctx = ModulusContext::new(m)?;
        if k_of_m < 1 {
            return Err(Error::Domain("K(m) must be >= 1".into()));
        }
        ctx.k_of_m = Some(k_of_m);
        Ok(ctx)
    }
}

/// Function tags understood by [`mod_eval`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModFn {
    SigmaK(u32),
    EulerPhi,
    Jordan(u32),
    UnitaryPhi,
    SigmaConvPhi,
    NathansonPhi,
    HalfNathansonPhi,
    /// Ramanujan tau via its classical congruences; moduli restricted to
    /// [`crate::error::TAU_MODULI`], and m = 8 further requires odd n.
    TauMod,
}

fn sigma_k_mod(x: &FactoredInteger, k: u32, m: u64) -> u64 {
    let mut acc = 1 % m;
    for (p, e) in x.factors() {
        let pm = (p % m).to_u64().expect("residue fits u64");
        let pk = pow_mod(pm, k as u64, m);
        let mut local = 1 % m;
        let mut power = 1 % m;
        for _ in 0..*e {
            power = mul_mod(power, pk, m);
            local = add_mod(local, power, m);
        }
        acc = mul_mod(acc, local, m);
    }
    acc
}

fn nathanson_phi_mod(x: &FactoredInteger, m: u64) -> u64 {
    // Sum of mu(d) * 2^(n/d) over the squarefree divisors d of n; the
    // exponent n/d is kept at full size and fed to modular exponentiation.
    let primes: Vec<&BigUint> = x.factors().iter().map(|(p, _)| p).collect();
    let mut acc = 0u64;
    for mask in 0u32..(1 << primes.len()) {
        let mut d = BigUint::one();
        for (i, p) in primes.iter().enumerate() {
            if mask >> i & 1 == 1 {
                d *= *p;
            }
        }
        let term = two_pow_mod(&(x.n() / d), m);
        acc = if mask.count_ones() % 2 == 0 {
            add_mod(acc, term, m)
        } else {
            sub_mod(acc, term, m)
        };
    }
    acc
}

/// Residue of f(n) modulo ctx.m at an integer of known factorization.
///
/// Multiplicative tags use the local-factor product; `nathanson_phi` uses
/// modular exponentiation with full-size exponents; `half_nathanson_phi`
/// evaluates the full function modulo 2m and halves the (provably even for
/// n >= 2) representative. `tau_mod` is congruence-backed and is therefore
/// restricted to the five classical moduli.
pub fn mod_eval(f: ModFn, x: &FactoredInteger, ctx: &ModulusContext) -> Result<u64> {
    let m = ctx.m;
    match f {
        ModFn::SigmaK(k) => Ok(sigma_k_mod(x, k, m)),
        ModFn::EulerPhi => {
            let mut acc = 1 % m;
            for (p, e) in x.factors() {
                let pm = (p % m).to_u64().expect("residue fits u64");
                let local = mul_mod(pow_mod(pm, (*e - 1) as u64, m), sub_mod(pm, 1, m), m);
                acc = mul_mod(acc, local, m);
            }
            Ok(acc)
        }
        ModFn::Jordan(v) => {
            if v < 3 || v % 2 == 0 {
                return Err(Error::Domain(format!(
                    "jordan totient requires odd order >= 3, got {v}"
                )));
            }
            let mut acc = 1 % m;
            for (p, e) in x.factors() {
                let pm = (p % m).to_u64().expect("residue fits u64");
                let pv = pow_mod(pm, v as u64, m);
                let local = mul_mod(pow_mod(pv, (*e - 1) as u64, m), sub_mod(pv, 1, m), m);
                acc = mul_mod(acc, local, m);
            }
            Ok(acc)
        }
        ModFn::UnitaryPhi => {
            let mut acc = 1 % m;
            for (p, e) in x.factors() {
                let pm = (p % m).to_u64().expect("residue fits u64");
                let local = sub_mod(pow_mod(pm, *e as u64, m), 1, m);
                acc = mul_mod(acc, local, m);
            }
            Ok(acc)
        }
        ModFn::SigmaConvPhi => {
            let mut acc = 1 % m;
            for (p, e) in x.factors() {
                let pm = (p % m).to_u64().expect("residue fits u64");
                let mut local = 0u64;
                for i in 0..=*e {
                    // sigma(p^i) mod m
                    let mut sig = 1 % m;
                    let mut power = 1 % m;
                    for _ in 0..i {
                        power = mul_mod(power, pm, m);
                        sig = add_mod(sig, power, m);
                    }
                    // phi(p^(e-i)) mod m
                    let phi = if *e - i == 0 {
                        1 % m
                    } else {
                        mul_mod(pow_mod(pm, (*e - i - 1) as u64, m), sub_mod(pm, 1, m), m)
                    };
                    local = add_mod(local, mul_mod(sig, phi, m), m);
                }
                acc = mul_mod(acc, local, m);
            }
            Ok(acc)
        }
        ModFn::NathansonPhi => Ok(nathanson_phi_mod(x, m)),
        ModFn::HalfNathansonPhi => {
            if x.n() == &BigUint::one() {
                // Formula value 2 at n = 1, so the halved stream starts at 1.
                return Ok(1 % m);
            }
            let lifted = m
                .checked_mul(2)
                .ok_or_else(|| Error::Domain("modulus too large for the half-value lift".into()))?;
            let r = nathanson_phi_mod(x, lifted);
            debug_assert_eq!(r % 2, 0, "subset count is even for n >= 2");
            Ok((r / 2) % m)
        }
        ModFn::TauMod => {
            if !crate::error::TAU_MODULI.contains(&m) {
                return Err(Error::UnsupportedCongruence { m });
            }
            if m == 8 && x.is_even() {
                return Err(Error::Domain(
                    "the mod-8 congruence for tau applies to odd n only".into(),
                ));
            }
            let nm = x.n_mod(m);
            Ok(match m {
                5 => mul_mod(nm, sigma_k_mod(x, 1, 5), 5),
                7 => mul_mod(nm, sigma_k_mod(x, 3, 7), 7),
                8 => sigma_k_mod(x, 1, 8),
                9 => mul_mod(mul_mod(nm, nm, 9), sigma_k_mod(x, 1, 9), 9),
                691 => sigma_k_mod(x, 11, 691),
                _ => unreachable!(),
            })
        }
    }
}

// ---------------------------------------------------------------------------
// Bulk evaluation.
// ---------------------------------------------------------------------------

/// Function tags for exact bulk/range evaluation and the CLI `fn` command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueFn {
    Mobius,
    Sigma(u32),
    EulerPhi,
    Jordan(u32),
    UnitaryPhi,
    SigmaConvPhi,
    NathansonPhi,
    NathansonG,
    Tau,
    Eisenstein(u32),
}

/// Output of [`sieve_range`]: exact values, or residues when a modulus
/// context is supplied.
#[derive(Debug, Clone)]
pub enum RangeOutput {
    Exact(Vec<BigInt>),
    Residues(Vec<u64>),
}

/// Bulk evaluation of f over [lo, hi], elementwise equal to the single-value
/// operations. With a modulus context the fast residue path is used (no
/// exact big integers); without one, exact values are returned.
///
/// Budgets: hi is capped by `limits.sieve_limit` for sieve-backed functions
/// and by `limits.series_limit` for expansion-backed ones (tau, and the
/// exact subset counters whose values grow like 2^n).
pub fn sieve_range(
    f: ValueFn,
    lo: u64,
    hi: u64,
    ctx: Option<&ModulusContext>,
    limits: &Limits,
) -> Result<RangeOutput> {
    if lo < 1 || lo > hi {
        return Err(Error::Usage(format!("invalid range [{lo}, {hi}]")));
    }
    if hi > limits.sieve_limit {
        return Err(Error::Resource(format!(
            "range end {hi} exceeds the sieve budget {}",
            limits.sieve_limit
        )));
    }
    match ctx {
        Some(ctx) => Ok(RangeOutput::Residues(residues_range(
            f, lo, hi, ctx, limits,
        )?)),
        None => Ok(RangeOutput::Exact(exact_range(f, lo, hi, limits)?)),
    }
}

fn exact_range(f: ValueFn, lo: u64, hi: u64, limits: &Limits) -> Result<Vec<BigInt>> {
    let needs_series_budget = matches!(
        f,
        ValueFn::Tau | ValueFn::NathansonPhi | ValueFn::NathansonG
    );
    if needs_series_budget && hi as usize > limits.series_limit {
        return Err(Error::Resource(format!(
            "range end {hi} exceeds the expansion budget {}",
            limits.series_limit
        )));
    }
    let mut out = Vec::with_capacity((hi - lo + 1) as usize);
    match f {
        ValueFn::Tau => {
            let taus = crate::qseries::delta_expansion(hi as usize, limits)?;
            for n in lo..=hi {
                out.push(taus[(n - 1) as usize].clone());
            }
        }
        ValueFn::NathansonG => {
            // Incremental: g(n) - g(n-1) = nathanson_phi(n)/2 for n >= 2,
            // which follows from the inversion formulas (the d-th term of g
            // changes exactly when d | n). Avoids re-summing per n.
            let mut g = BigInt::one(); // g(1)
            for n in 2..lo {
                g += BigInt::from(nathanson_phi(n)) >> 1;
            }
            for n in lo..=hi {
                if n >= 2 {
                    g += BigInt::from(nathanson_phi(n)) >> 1;
                }
                out.push(g.clone());
            }
        }
        _ => {
            for n in lo..=hi {
                out.push(match f {
                    ValueFn::Mobius => BigInt::from(mobius(n)),
                    ValueFn::Sigma(k) => BigInt::from(sigma_k(n, k)),
                    ValueFn::EulerPhi => BigInt::from(euler_phi(n)),
                    ValueFn::Jordan(v) => BigInt::from(jordan_totient(v, n)?),
                    ValueFn::UnitaryPhi => BigInt::from(unitary_phi(n)),
                    ValueFn::SigmaConvPhi => BigInt::from(sigma_conv_phi(n)),
                    ValueFn::NathansonPhi => BigInt::from(nathanson_phi(n)),
                    ValueFn::Eisenstein(w) => crate::qseries::eisenstein_coeff(w, n)?,
                    ValueFn::Tau | ValueFn::NathansonG => unreachable!(),
                });
            }
        }
    }
    Ok(out)
}

fn residues_range(
    f: ValueFn,
    lo: u64,
    hi: u64,
    ctx: &ModulusContext,
    limits: &Limits,
) -> Result<Vec<u64>> {
    let m = ctx.m;
    let sieve = SpfSieve::new(hi as usize);
    let factored = |n: u64| FactoredInteger::from_trusted_u64_factors(n, sieve.factor(n));
    let map_mod = |tag: ModFn| -> Result<Vec<u64>> {
        (lo..=hi)
            .map(|n| mod_eval(tag, &factored(n), ctx))
            .collect()
    };
    match f {
        ValueFn::Mobius => Ok((lo..=hi)
            .map(|n| match mobius_for(&sieve, n) {
                -1 => m - 1,
                0 => 0,
                _ => 1 % m,
            })
            .collect()),
        ValueFn::Sigma(k) => map_mod(ModFn::SigmaK(k)),
        ValueFn::EulerPhi => map_mod(ModFn::EulerPhi),
        ValueFn::Jordan(v) => map_mod(ModFn::Jordan(v)),
        ValueFn::UnitaryPhi => map_mod(ModFn::UnitaryPhi),
        ValueFn::SigmaConvPhi => map_mod(ModFn::SigmaConvPhi),
        ValueFn::NathansonPhi => map_mod(ModFn::NathansonPhi),
        ValueFn::NathansonG => {
            // Running sum of halved nathanson_phi increments, mod m.
            if hi as usize > limits.series_limit {
                return Err(Error::Resource(format!(
                    "range end {hi} exceeds the expansion budget {}",
                    limits.series_limit
                )));
            }
            let mut out = Vec::with_capacity((hi - lo + 1) as usize);
            let mut g = 1 % m;
            if lo == 1 {
                out.push(g);
            }
            for n in 2..=hi {
                let inc = mod_eval(ModFn::HalfNathansonPhi, &factored(n), ctx)?;
                g = add_mod(g, inc, m);
                if n >= lo {
                    out.push(g);
                }
            }
            Ok(out)
        }
        ValueFn::Tau => {
            // Exact expansion reduced per element: valid for every modulus,
            // unlike the congruence-backed path.
            if hi as usize > limits.series_limit {
                return Err(Error::Resource(format!(
                    "range end {hi} exceeds the expansion budget {}",
                    limits.series_limit
                )));
            }
            let taus = crate::qseries::delta_expansion(hi as usize, limits)?;
            Ok((lo..=hi)
                .map(|n| {
                    let mut r = &taus[(n - 1) as usize] % m;
                    if r.is_negative() {
                        r += BigInt::from(m);
                    }
                    r.to_u64().expect("residue fits u64")
                })
                .collect())
        }
        ValueFn::Eisenstein(w) => {
            let k = crate::qseries::eisenstein_sigma_order(w)?;
            let c = crate::qseries::eisenstein_scalar(w)?;
            let c_mod = c.rem_euclid(m as i64) as u64;
            let sig = map_mod(ModFn::SigmaK(k))?;
            Ok(sig.into_iter().map(|s| mul_mod(c_mod, s, m)).collect())
        }
    }
}

fn mobius_for(sieve: &SpfSieve, n: u64) -> i64 {
    let mut rest = n as usize;
    let mut count = 0i64;
    while rest > 1 {
        let p = sieve.spf[rest] as usize;
        rest /= p;
        if rest % p == 0 {
            return 0;
        }
        count += 1;
    }
    if count % 2 == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::ToBigInt;
    use proptest::prelude::*;

    fn limits() -> Limits {
        Limits::default()
    }

    #[test]
    fn mobius_small_values() {
        assert_eq!(mobius(1), 1);
        assert_eq!(mobius(4), 0);
        assert_eq!(mobius(6), 1);
        assert_eq!(mobius(30), -1);
    }

    #[test]
    fn sigma_values() {
        assert_eq!(sigma_k(1, 7), BigUint::one());
        assert_eq!(sigma_k(6, 1), BigUint::from(12u32));
        assert_eq!(sigma_k(2, 11), BigUint::from(2049u32));
        assert_eq!(sigma_k(12, 1), BigUint::from(28u32));
        assert_eq!(sigma_k(6, 0), BigUint::from(4u32)); // divisor count
    }

    #[test]
    fn totient_family_values() {
        assert_eq!(euler_phi(10), 4);
        assert_eq!(euler_phi(1), 1);
        assert_eq!(jordan_totient(3, 2).unwrap(), BigUint::from(7u32));
        assert_eq!(unitary_phi(12), 6);
        assert_eq!(sigma_conv_phi(3), BigUint::from(6u32));
        assert_eq!(sigma_conv_phi(4), BigUint::from(12u32));
        assert!(matches!(jordan_totient(1, 5), Err(Error::Domain(_))));
        assert!(matches!(jordan_totient(4, 5), Err(Error::Domain(_))));
    }

    #[test]
    fn subset_counters() {
        assert_eq!(nathanson_phi(1), BigUint::from(2u32));
        assert_eq!(nathanson_phi(2), BigUint::from(2u32));
        assert_eq!(nathanson_phi(4), BigUint::from(12u32));
        assert_eq!(nathanson_phi(7), BigUint::from(126u32));
        assert_eq!(nathanson_g(1), BigUint::one());
        assert_eq!(nathanson_g(3), BigUint::from(5u32));
        assert_eq!(nathanson_g(4), BigUint::from(11u32));
    }

    #[test]
    fn half_increment_identity_small() {
        // 2 * (g(n+1) - g(n)) = nathanson_phi(n+1)
        for n in 1..200u64 {
            let lhs = (nathanson_g(n + 1) - nathanson_g(n)) * 2u32;
            assert_eq!(lhs, nathanson_phi(n + 1), "n = {n}");
        }
    }

    #[test]
    fn mod_eval_matches_exact() {
        let ms = [3u64, 5, 7, 8, 9, 10, 691];
        for n in 1..=400u64 {
            let x = FactoredInteger::from_u64(n);
            for &m in &ms {
                let ctx = ModulusContext::new(m).unwrap();
                assert_eq!(
                    mod_eval(ModFn::SigmaK(3), &x, &ctx).unwrap(),
                    (sigma_k(n, 3) % m).to_u64().unwrap()
                );
                assert_eq!(
                    mod_eval(ModFn::EulerPhi, &x, &ctx).unwrap(),
                    euler_phi(n) % m
                );
                assert_eq!(
                    mod_eval(ModFn::Jordan(3), &x, &ctx).unwrap(),
                    (jordan_totient(3, n).unwrap() % m).to_u64().unwrap()
                );
                assert_eq!(
                    mod_eval(ModFn::UnitaryPhi, &x, &ctx).unwrap(),
                    unitary_phi(n) % m
                );
                assert_eq!(
                    mod_eval(ModFn::SigmaConvPhi, &x, &ctx).unwrap(),
                    (sigma_conv_phi(n) % m).to_u64().unwrap()
                );
                assert_eq!(
                    mod_eval(ModFn::NathansonPhi, &x, &ctx).unwrap(),
                    (nathanson_phi(n) % m).to_u64().unwrap()
                );
                if n >= 2 {
                    let half: BigUint = nathanson_phi(n) >> 1u32;
                    assert_eq!(
                        mod_eval(ModFn::HalfNathansonPhi, &x, &ctx).unwrap(),
                        (half % m).to_u64().unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn mod_eval_examples() {
        let ctx3 = ModulusContext::new(3).unwrap();
        let x14 = FactoredInteger::from_u64(14);
        assert_eq!(mod_eval(ModFn::EulerPhi, &x14, &ctx3).unwrap(), 0);

        let ctx5 = ModulusContext::new(5).unwrap();
        let x2 = FactoredInteger::from_u64(2);
        assert_eq!(mod_eval(ModFn::TauMod, &x2, &ctx5).unwrap(), 1); // tau(2) = -24

        let x3 = FactoredInteger::from_u64(3);
        assert_eq!(mod_eval(ModFn::HalfNathansonPhi, &x3, &ctx5).unwrap(), 3);
    }

    #[test]
    fn tau_mod_guardrails() {
        let x = FactoredInteger::from_u64(6);
        let ctx = ModulusContext::new(11).unwrap();
        assert!(matches!(
            mod_eval(ModFn::TauMod, &x, &ctx),
            Err(Error::UnsupportedCongruence { m: 11 })
        ));
        let ctx8 = ModulusContext::new(8).unwrap();
        assert!(matches!(
            mod_eval(ModFn::TauMod, &x, &ctx8),
            Err(Error::Domain(_))
        ));
        let x9 = FactoredInteger::from_u64(9);
        assert!(mod_eval(ModFn::TauMod, &x9, &ctx8).is_ok());
    }

    #[test]
    fn factored_integer_validation() {
        let good = FactoredInteger::from_parts(
            vec![(BigUint::from(2u32), 1), (BigUint::from(7u32), 2)],
            64,
        )
        .unwrap();
        assert_eq!(good.n(), &BigUint::from(98u32));
        assert!(FactoredInteger::from_parts(vec![(BigUint::from(6u32), 1)], 64).is_err());
        assert!(FactoredInteger::from_parts(
            vec![(BigUint::from(7u32), 1), (BigUint::from(2u32), 1)],
            64
        )
        .is_err());
    }

    #[test]
    fn sieve_range_examples() {
        let lim = limits();
        match sieve_range(ValueFn::EulerPhi, 1, 5, None, &lim).unwrap() {
            RangeOutput::Exact(v) => assert_eq!(
                v,
                [1, 1, 2, 2, 4]
                    .iter()
                    .map(|&x| BigInt::from(x))
                    .collect::<Vec<_>>()
            ),
            _ => panic!("expected exact values"),
        }
        match sieve_range(ValueFn::Sigma(1), 1, 1, None, &lim).unwrap() {
            RangeOutput::Exact(v) => assert_eq!(v, vec![BigInt::one()]),
            _ => panic!("expected exact values"),
        }
        let ctx = ModulusContext::new(5).unwrap();
        match sieve_range(ValueFn::NathansonPhi, 2, 4, Some(&ctx), &lim).unwrap() {
            RangeOutput::Residues(v) => assert_eq!(v, vec![2, 1, 2]),
            _ => panic!("expected residues"),
        }
    }

    #[test]
    fn range_budget_is_enforced() {
        let mut lim = limits();
        lim.sieve_limit = 100;
        assert!(matches!(
            sieve_range(ValueFn::EulerPhi, 1, 101, None, &lim),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn g_range_matches_direct_formula() {
        let lim = limits();
        match sieve_range(ValueFn::NathansonG, 5, 40, None, &lim).unwrap() {
            RangeOutput::Exact(v) => {
                for (i, n) in (5u64..=40).enumerate() {
                    assert_eq!(v[i], nathanson_g(n).to_bigint().unwrap(), "n = {n}");
                }
            }
            _ => panic!("expected exact values"),
        }
        let ctx = ModulusContext::new(7).unwrap();
        match sieve_range(ValueFn::NathansonG, 3, 50, Some(&ctx), &lim).unwrap() {
            RangeOutput::Residues(v) => {
                for (i, n) in (3u64..=50).enumerate() {
                    assert_eq!(v[i], (nathanson_g(n) % 7u32).to_u64().unwrap(), "n = {n}");
                }
            }
            _ => panic!("expected residues"),
        }
    }

    proptest! {
        #[test]
        fn multiplicative_on_coprime_pairs(a in 1u64..1000, b in 1u64..1000) {
            prop_assume!(num_integer::gcd(a, b) == 1);
            prop_assert_eq!(sigma_k(a * b, 2), sigma_k(a, 2) * sigma_k(b, 2));
            prop_assert_eq!(euler_phi(a * b), euler_phi(a) * euler_phi(b));
            prop_assert_eq!(
                jordan_totient(3, a * b).unwrap(),
                jordan_totient(3, a).unwrap() * jordan_totient(3, b).unwrap()
            );
            prop_assert_eq!(
                BigUint::from(unitary_phi(a * b)),
                BigUint::from(unitary_phi(a)) * unitary_phi(b)
            );
            prop_assert_eq!(sigma_conv_phi(a * b), sigma_conv_phi(a) * sigma_conv_phi(b));
        }

        #[test]
        fn mobius_sieve_matches_pointwise(n in 1usize..2000) {
            let mu = mobius_sieve(n);
            prop_assert_eq!(mu[n] as i32, mobius(n as u64));
        }
    }
}
