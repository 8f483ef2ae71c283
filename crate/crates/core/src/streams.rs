//! Named residue and digit streams over the crate's arithmetic functions.
//!
//! A stream is specified by a compact grammar:
//!
//! ```text
//! tau%5                  tau(n) mod 5
//! eis14%7                n-th Eisenstein coefficient of weight 14, mod 7
//! phi%5*2                (2 * phi(n)) mod 5        (scale must be a unit)
//! nathanson_phi%7>dec    (Phi(n) mod 7) mod 10     (nested decimal digit)
//! half_phi%9>dec         ((Phi(n)/2) mod 9) mod 10
//! nathanson_g%5>dec      (g(n) mod 5) mod 10
//! jordan3%8              J_3(n) mod 8
//! const:3                the constant digit 3      (synthetic, for tests)
//! ```
//!
//! Two validation levels gate what a spec may be used for. [`validate_scan`]
//! is structural: any well-formed spec can be materialized and scanned for
//! periodicity, including pairs carrying no non-periodicity claim (empirical
//! probing). [`validate_digits`] is strict: it admits only the constructions
//! whose digit sequences feed the transcendence machinery in [`crate::cf`] —
//! direct residues need m <= 10 inside each source's certified modulus
//! range, and the nested subset-counter forms need odd m >= 5 with
//! m != 3 (mod 10).

use std::fmt;
use std::str::FromStr;

use crate::arith::{
    mod_eval, mul_mod, sieve_range, FactoredInteger, ModFn, ModulusContext, RangeOutput, SpfSieve,
    ValueFn,
};
use crate::error::TAU_MODULI;
use crate::qseries::{eisenstein_scalar, eisenstein_sigma_order};
use crate::{Error, Limits, Result};

/// Which arithmetic function drives the stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Source {
    Tau,
    Eisenstein(u32),
    NathansonPhi,
    NathansonG,
    EulerPhi,
    Sigma,
    SigmaConvPhi,
    Jordan(u32),
    UnitaryPhi,
    /// Constant digit stream; useful as a known-periodic control and to
    /// exercise precision ceilings (theta = d/9 makes floor(n*theta)
    /// undecidable from digits alone at n = 9/gcd(d,9), e.g. `const:3`).
    Const(u8),
}

impl Source {
    fn token(&self) -> String {
        match self {
            Source::Tau => "tau".into(),
            Source::Eisenstein(w) => format!("eis{w}"),
            Source::NathansonPhi => "nathanson_phi".into(),
            Source::NathansonG => "nathanson_g".into(),
            Source::EulerPhi => "phi".into(),
            Source::Sigma => "sigma".into(),
            Source::SigmaConvPhi => "sigma_conv_phi".into(),
            Source::Jordan(v) => format!("jordan{v}"),
            Source::UnitaryPhi => "unitary_phi".into(),
            Source::Const(d) => format!("const:{d}"),
        }
    }
}

/// How residues become emitted values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Emit f(n) mod m itself.
    Direct,
    /// Emit (f(n) mod m) mod 10 — the nested decimal digit.
    NestedMod10,
    /// Emit ((f(n)/2) mod m) mod 10; only the even-valued subset counter
    /// supports the exact halving.
    HalfThenNested,
}

/// A parsed stream specification. `scale` multiplies residues by a unit
/// lambda mod m before any nesting.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StreamSpec {
    pub source: Source,
    pub m: u64,
    pub variant: Variant,
    pub scale: Option<u64>,
}

impl fmt::Display for StreamSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Source::Const(d) = self.source {
            return write!(f, "const:{d}");
        }
        let token = match self.variant {
            Variant::HalfThenNested => "half_phi".to_string(),
            _ => self.source.token(),
        };
        write!(f, "{token}%{}", self.m)?;
        if self.variant != Variant::Direct {
            write!(f, ">dec")?;
        }
        if let Some(lambda) = self.scale {
            write!(f, "*{lambda}")?;
        }
        Ok(())
    }
}

impl FromStr for StreamSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<StreamSpec> {
        let usage = |msg: String| Error::Usage(msg);
        if let Some(rest) = s.strip_prefix("const:") {
            let d: u8 = rest
                .parse()
                .map_err(|_| usage(format!("bad constant digit in '{s}'")))?;
            if d > 9 {
                return Err(usage(format!("constant digit must be 0..9, got {d}")));
            }
            return Ok(StreamSpec {
                source: Source::Const(d),
                m: 10,
                variant: Variant::Direct,
                scale: None,
            });
        }
        let (body, scale) = match s.rsplit_once('*') {
            Some((head, tail)) => {
                let lambda: u64 = tail
                    .parse()
                    .map_err(|_| usage(format!("bad scale factor in '{s}'")))?;
                (head, Some(lambda))
            }
            None => (s, None),
        };
        let (body, nested) = match body.strip_suffix(">dec") {
            Some(head) => (head, true),
            None => (body, false),
        };
        let (token, m_str) = body
            .split_once('%')
            .ok_or_else(|| usage(format!("missing modulus in '{s}' (expected source%m)")))?;
        let m: u64 = m_str
            .parse()
            .map_err(|_| usage(format!("bad modulus in '{s}'")))?;
        let (source, variant) = match token {
            "tau" => (Source::Tau, Variant::Direct),
            "nathanson_phi" => (Source::NathansonPhi, Variant::Direct),
            "half_phi" => {
                if !nested {
                    return Err(usage(format!(
                        "'{s}': half_phi emits nested digits; write half_phi%{m}>dec"
                    )));
                }
                (Source::NathansonPhi, Variant::HalfThenNested)
            }
            "nathanson_g" => (Source::NathansonG, Variant::Direct),
            "phi" => (Source::EulerPhi, Variant::Direct),
            "sigma" => (Source::Sigma, Variant::Direct),
            "sigma_conv_phi" => (Source::SigmaConvPhi, Variant::Direct),
            "unitary_phi" => (Source::UnitaryPhi, Variant::Direct),
            _ => {
                if let Some(w) = token.strip_prefix("eis") {
                    let w: u32 = w
                        .parse()
                        .map_err(|_| usage(format!("bad Eisenstein weight in '{s}'")))?;
                    (Source::Eisenstein(w), Variant::Direct)
                } else if let Some(v) = token.strip_prefix("jordan") {
                    let v: u32 = v
                        .parse()
                        .map_err(|_| usage(format!("bad Jordan order in '{s}'")))?;
                    (Source::Jordan(v), Variant::Direct)
                } else {
                    return Err(usage(format!("unknown stream source '{token}'")));
                }
            }
        };
        let variant = if variant == Variant::HalfThenNested {
            variant
        } else if nested {
            Variant::NestedMod10
        } else {
            Variant::Direct
        };
        Ok(StreamSpec {
            source,
            m,
            variant,
            scale,
        })
    }
}

/// Structural validation: the spec names a computable sequence. Makes no
/// claim about non-periodicity or digit suitability.
pub fn validate_scan(spec: &StreamSpec) -> Result<()> {
    if let Source::Const(d) = spec.source {
        if d > 9 {
            return Err(Error::Domain(format!(
                "constant digit must be 0..9, got {d}"
            )));
        }
        if spec.scale.is_some() {
            return Err(Error::Domain("constant streams take no scale".into()));
        }
        return Ok(());
    }
    if spec.m < 2 {
        return Err(Error::Domain(format!(
            "modulus must be >= 2, got {}",
            spec.m
        )));
    }
    match spec.source {
        Source::Jordan(v) if v < 3 || v % 2 == 0 => {
            return Err(Error::Domain(format!(
                "jordan totient requires odd order >= 3, got {v}"
            )));
        }
        Source::Eisenstein(w) => {
            eisenstein_scalar(w)?;
        }
        _ => {}
    }
    match spec.variant {
        Variant::Direct => {}
        Variant::NestedMod10 => {
            if !matches!(spec.source, Source::NathansonPhi | Source::NathansonG) {
                return Err(Error::Domain(
                    "nested decimal digits are defined for the subset counters only".into(),
                ));
            }
        }
        Variant::HalfThenNested => {
            if spec.source != Source::NathansonPhi {
                return Err(Error::Domain(
                    "halving is defined for the even-valued subset counter only".into(),
                ));
            }
        }
    }
    if let Some(lambda) = spec.scale {
        if lambda == 0 || num_integer::gcd(lambda, spec.m) != 1 {
            return Err(Error::Domain(format!(
                "scale {lambda} is not a unit mod {}",
                spec.m
            )));
        }
    }
    Ok(())
}

/// Strict validation for digit extraction: only constructions whose digit
/// sequences are certified non-periodic (hence define irrational theta) are
/// admitted, plus the synthetic constant source for tests and demos.
pub fn validate_digits(spec: &StreamSpec) -> Result<()> {
    validate_scan(spec)?;
    let m = spec.m;
    let reject = |msg: String| -> Result<()> { Err(Error::Domain(msg)) };
    match spec.variant {
        Variant::NestedMod10 | Variant::HalfThenNested => {
            if m < 5 || m % 2 == 0 || m % 10 == 3 {
                return reject(format!(
                    "nested digits require odd m >= 5 with m != 3 (mod 10), got {m}"
                ));
            }
            Ok(())
        }
        Variant::Direct => match spec.source {
            Source::Const(_) => Ok(()),
            Source::Tau => {
                if TAU_MODULI.contains(&m) && m <= 10 {
                    Ok(())
                } else {
                    reject(format!("digit moduli for tau are 5, 7, 8, 9; got {m}"))
                }
            }
            Source::Eisenstein(w) => {
                let c = eisenstein_scalar(w)?;
                let order = eisenstein_sigma_order(w)?;
                let unit = num_integer::gcd(c.unsigned_abs() % m, m) == 1;
                let distinct = (crate::arith::pow_mod(2, order as u64, m) + 1) % m != 0;
                if (3..=10).contains(&m) && unit && distinct {
                    Ok(())
                } else {
                    reject(format!(
                        "weight-{w} digits require 3 <= m <= 10 with the scalar a unit \
                         mod m and m not dividing 2^{order} + 1; got {m}"
                    ))
                }
            }
            Source::EulerPhi | Source::Jordan(_) | Source::UnitaryPhi => {
                if (3..=10).contains(&m) {
                    Ok(())
                } else {
                    reject(format!("digit moduli for totients are 3..=10; got {m}"))
                }
            }
            Source::Sigma | Source::SigmaConvPhi => {
                if (7..=10).contains(&m) {
                    Ok(())
                } else {
                    reject(format!("digit moduli for divisor sums are 7..=10; got {m}"))
                }
            }
            Source::NathansonPhi | Source::NathansonG => reject(
                "direct subset-counter residues are not digit-certified; use the >dec form".into(),
            ),
        },
    }
}

fn expansion_backed(source: Source) -> bool {
    matches!(source, Source::Tau | Source::NathansonG)
}

fn generation_budget(spec: &StreamSpec, limits: &Limits) -> usize {
    let sieve = usize::try_from(limits.sieve_limit).unwrap_or(usize::MAX);
    if expansion_backed(spec.source) {
        sieve.min(limits.series_limit)
    } else {
        sieve
    }
}

/// Compute residues (after scaling, before nesting) for n = 1..=len.
fn generate(spec: &StreamSpec, len: usize, limits: &Limits) -> Result<Vec<u64>> {
    let mut residues = match spec.source {
        Source::Const(d) => vec![u64::from(d); len],
        Source::NathansonPhi if spec.variant == Variant::HalfThenNested => {
            if len as u64 > limits.sieve_limit {
                return Err(Error::Resource(format!(
                    "prefix length {len} exceeds the sieve budget {}",
                    limits.sieve_limit
                )));
            }
            let ctx = ModulusContext::new(spec.m)?;
            let sieve = SpfSieve::new(len);
            (1..=len as u64)
                .map(|n| {
                    let x = FactoredInteger::from_trusted_u64_factors(n, sieve.factor(n));
                    mod_eval(ModFn::HalfNathansonPhi, &x, &ctx)
                })
                .collect::<Result<Vec<u64>>>()?
        }
        _ => {
            let value_fn = match spec.source {
                Source::Tau => ValueFn::Tau,
                Source::Eisenstein(w) => ValueFn::Eisenstein(w),
                Source::NathansonPhi => ValueFn::NathansonPhi,
                Source::NathansonG => ValueFn::NathansonG,
                Source::EulerPhi => ValueFn::EulerPhi,
                Source::Sigma => ValueFn::Sigma(1),
                Source::SigmaConvPhi => ValueFn::SigmaConvPhi,
                Source::Jordan(v) => ValueFn::Jordan(v),
                Source::UnitaryPhi => ValueFn::UnitaryPhi,
                Source::Const(_) => unreachable!("handled above"),
            };
            let ctx = ModulusContext::new(spec.m)?;
            match sieve_range(value_fn, 1, len as u64, Some(&ctx), limits)? {
                RangeOutput::Residues(r) => r,
                RangeOutput::Exact(_) => unreachable!("modulus context forces residues"),
            }
        }
    };
    if let Some(lambda) = spec.scale {
        let lm = lambda % spec.m;
        for r in residues.iter_mut() {
            *r = mul_mod(lm, *r, spec.m);
        }
    }
    Ok(residues)
}

fn emit(variant: Variant, residue: u64) -> u64 {
    match variant {
        Variant::Direct => residue,
        Variant::NestedMod10 | Variant::HalfThenNested => residue % 10,
    }
}

/// Memoized residue prefix for one spec. Extension recomputes the whole
/// prefix at (at least) double the previous size from the same pure
/// generator, so values are independent of the access pattern.
#[derive(Debug)]
pub struct ResidueStream {
    spec: StreamSpec,
    limits: Limits,
    cache: Vec<u64>,
}

impl ResidueStream {
    pub fn new(spec: StreamSpec, limits: &Limits) -> Result<ResidueStream> {
        validate_scan(&spec)?;
        Ok(ResidueStream {
            spec,
            limits: limits.clone(),
            cache: Vec::new(),
        })
    }

    pub fn spec(&self) -> &StreamSpec {
        &self.spec
    }

    fn ensure(&mut self, len: usize) -> Result<()> {
        if self.cache.len() >= len {
            return Ok(());
        }
        let mut target = len.max(self.cache.len() * 2).max(64);
        // Round to block multiples so repeated small extensions of a large
        // prefix do not degenerate, but never let rounding alone blow the
        // generation budget when the request itself is within it.
        if target > self.limits.block_size {
            target = target.div_ceil(self.limits.block_size) * self.limits.block_size;
        }
        target = target
            .min(generation_budget(&self.spec, &self.limits))
            .max(len);
        self.cache = generate(&self.spec, target, &self.limits)?;
        Ok(())
    }

    /// Residue at 1-indexed position r (scaled, before nesting).
    pub fn residue(&mut self, r: u64) -> Result<u64> {
        if r < 1 {
            return Err(Error::Usage("stream positions are 1-indexed".into()));
        }
        self.ensure(r as usize)?;
        Ok(self.cache[(r - 1) as usize])
    }

    /// The first `len` residues.
    pub fn prefix(&mut self, len: usize) -> Result<&[u64]> {
        self.ensure(len)?;
        Ok(&self.cache[..len])
    }
}

/// The sequence of emitted values (residues for direct streams, decimal
/// digits for nested ones) for n = 1..=len, as scanned for periodicity.
pub fn scan_sequence(spec: &StreamSpec, len: usize, limits: &Limits) -> Result<Vec<u64>> {
    let mut stream = ResidueStream::new(spec.clone(), limits)?;
    let variant = stream.spec().variant;
    Ok(stream
        .prefix(len)?
        .iter()
        .map(|&r| emit(variant, r))
        .collect())
}

/// A digit-emitting stream: like [`ResidueStream`] but gated by
/// [`validate_digits`], with every emitted value guaranteed in 0..=9.
#[derive(Debug)]
pub struct DigitStream {
    inner: ResidueStream,
}

impl DigitStream {
    pub fn new(spec: StreamSpec, limits: &Limits) -> Result<DigitStream> {
        validate_digits(&spec)?;
        Ok(DigitStream {
            inner: ResidueStream::new(spec, limits)?,
        })
    }

    pub fn spec(&self) -> &StreamSpec {
        &self.inner.spec
    }

    /// Decimal digit at 1-indexed position r.
    pub fn digit(&mut self, r: u64) -> Result<u8> {
        let variant = self.inner.spec.variant;
        let value = emit(variant, self.inner.residue(r)?);
        debug_assert!(value <= 9, "digit validation guarantees single digits");
        Ok(value as u8)
    }

    /// The first `len` digits.
    pub fn digits_prefix(&mut self, len: usize) -> Result<Vec<u8>> {
        let variant = self.inner.spec.variant;
        Ok(self
            .inner
            .prefix(len)?
            .iter()
            .map(|&r| emit(variant, r) as u8)
            .collect())
    }
}

/// One-shot digit lookup.
pub fn digit_at(spec: &StreamSpec, r: u64, limits: &Limits) -> Result<u8> {
    DigitStream::new(spec.clone(), limits)?.digit(r)
}

/// The same stream with residues multiplied by the unit lambda mod m.
/// Composes with an existing scale multiplicatively.
pub fn scaled_stream(base: &StreamSpec, lambda: u64, limits: &Limits) -> Result<DigitStream> {
    let mut spec = base.clone();
    spec.scale = Some(match spec.scale {
        Some(prev) => mul_mod(prev % spec.m, lambda % spec.m, spec.m),
        None => lambda,
    });
    DigitStream::new(spec, limits)
}

fn parse_all(specs: &[String]) -> Vec<StreamSpec> {
    specs
        .iter()
        .map(|s| s.parse().expect("built-in matrix specs parse"))
        .collect()
}

/// Every (function, modulus) pair whose residue sequence the library claims
/// non-periodic: the acceptance scan certifies `no_period_up_to` for each.
pub fn scan_matrix() -> Vec<StreamSpec> {
    let mut specs: Vec<String> = Vec::new();
    for m in TAU_MODULI {
        specs.push(format!("tau%{m}"));
    }
    for (w, ms) in [
        (4u32, vec![7u64]),
        (6, vec![5]),
        (8, vec![7]),
        (10, vec![5, 7]),
        (14, vec![5, 7]),
    ] {
        for m in ms {
            specs.push(format!("eis{w}%{m}"));
        }
    }
    for m in [5, 7, 9] {
        specs.push(format!("nathanson_phi%{m}"));
    }
    for m in [5, 7, 9] {
        specs.push(format!("nathanson_g%{m}"));
    }
    for m in 3..=10 {
        specs.push(format!("phi%{m}"));
    }
    for m in 7..=10 {
        specs.push(format!("sigma%{m}"));
    }
    for m in 7..=10 {
        specs.push(format!("sigma_conv_phi%{m}"));
    }
    for m in 3..=10 {
        specs.push(format!("jordan3%{m}"));
    }
    for m in 3..=10 {
        specs.push(format!("unitary_phi%{m}"));
    }
    parse_all(&specs)
}

/// Every digit construction the library certifies for transcendence use:
/// each passes [`validate_digits`] and feeds the continued-fraction layer.
pub fn digit_matrix() -> Vec<StreamSpec> {
    let mut specs: Vec<String> = Vec::new();
    for m in [5, 7, 8, 9] {
        specs.push(format!("tau%{m}"));
    }
    for (w, ms) in [
        (4u32, vec![7u64]),
        (6, vec![5]),
        (8, vec![7]),
        (10, vec![5, 7]),
        (14, vec![5, 7]),
    ] {
        for m in ms {
            specs.push(format!("eis{w}%{m}"));
        }
    }
    for m in [5, 7, 9, 11, 15] {
        specs.push(format!("nathanson_phi%{m}>dec"));
        specs.push(format!("half_phi%{m}>dec"));
        specs.push(format!("nathanson_g%{m}>dec"));
    }
    for m in 3..=10 {
        specs.push(format!("phi%{m}"));
    }
    for m in 7..=10 {
        specs.push(format!("sigma%{m}"));
    }
    for m in 7..=10 {
        specs.push(format!("sigma_conv_phi%{m}"));
    }
    for m in 3..=10 {
        specs.push(format!("jordan3%{m}"));
    }
    for m in 3..=10 {
        specs.push(format!("unitary_phi%{m}"));
    }
    parse_all(&specs)
}
