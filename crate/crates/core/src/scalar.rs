//! Exact coefficient fields.
//!
//! Everything downstream (polynomials, forms, echelon bases) is generic over
//! [`Field`]. Two families implement it: the prime fields [`Fp`] (modulus fixed
//! at compile time) and the rationals [`Rational`].
//!
//! The prime is a const parameter, so a prime chosen at run time has to come
//! from [`PRIME_POOL`]; [`with_field`] dispatches a [`FieldTask`] to the right
//! monomorphization.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rationals, always stored as a reduced fraction.
pub type Rational = BigRational;

/// A field whose arithmetic is exact.
pub trait Field:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Eq
    + Hash
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Multiplicative inverse, `None` for zero.
    fn inverse(&self) -> Option<Self>;

    fn from_i64(v: i64) -> Self;

    fn kind() -> FieldKind;

    /// Appends a little-endian encoding to `out`.
    fn encode_le(&self, out: &mut Vec<u8>);

    /// Reads one value written by [`Field::encode_le`], advancing `buf`.
    fn decode_le(buf: &mut &[u8]) -> Option<Self>;
}

/// Which field a computation ran over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "field", rename_all = "lowercase")]
pub enum FieldKind {
    Prime { p: u32 },
    Rational,
}

impl FieldKind {
    /// Short tag used in cache file names.
    pub fn tag(&self) -> String {
        match self {
            FieldKind::Prime { p } => format!("p{p}"),
            FieldKind::Rational => "q".to_string(),
        }
    }
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Prime { p } => write!(f, "F_{p}"),
            FieldKind::Rational => write!(f, "Q"),
        }
    }
}

/// Default modulus, the Mersenne prime 2^31 - 1.
pub const DEFAULT_PRIME: u32 = 2_147_483_647;

/// The 31-bit primes available at run time, largest first.
pub const PRIME_POOL: [u32; 16] = [
    2_147_483_647,
    2_147_483_629,
    2_147_483_587,
    2_147_483_579,
    2_147_483_563,
    2_147_483_549,
    2_147_483_543,
    2_147_483_497,
    2_147_483_489,
    2_147_483_477,
    2_147_483_423,
    2_147_483_399,
    2_147_483_353,
    2_147_483_323,
    2_147_483_269,
    2_147_483_249,
];

/// Draws two distinct primes from [`PRIME_POOL`].
pub fn random_prime_pair<R: Rng + ?Sized>(rng: &mut R) -> (u32, u32) {
    let picked: Vec<u32> = PRIME_POOL.choose_multiple(rng, 2).copied().collect();
    (picked[0], picked[1])
}

/// Residues modulo the prime `P`, with `P < 2^32`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fp<const P: u32>(u32);

/// The default prime field.
pub type Fp31 = Fp<DEFAULT_PRIME>;

impl<const P: u32> Fp<P> {
    pub const MODULUS: u32 = P;

    pub fn new(v: u64) -> Self {
        Fp((v % P as u64) as u32)
    }

    pub fn value(self) -> u32 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp(1 % P);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl<const P: u32> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // print the symmetric representative so small negatives read naturally
        if self.0 > P / 2 {
            write!(f, "-{}", P - self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl<const P: u32> Add for Fp<P> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        let s = self.0 as u64 + rhs.0 as u64;
        Fp(if s >= P as u64 { s - P as u64 } else { s } as u32)
    }
}

impl<const P: u32> Sub for Fp<P> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        if self.0 >= rhs.0 {
            Fp(self.0 - rhs.0)
        } else {
            Fp((self.0 as u64 + P as u64 - rhs.0 as u64) as u32)
        }
    }
}

impl<const P: u32> Mul for Fp<P> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        Fp(((self.0 as u64 * rhs.0 as u64) % P as u64) as u32)
    }
}

impl<const P: u32> Neg for Fp<P> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        if self.0 == 0 {
            self
        } else {
            Fp(P - self.0)
        }
    }
}

impl<const P: u32> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u32> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

impl<const P: u32> Field for Fp<P> {
    fn inverse(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(P as u64 - 2))
        }
    }

    fn from_i64(v: i64) -> Self {
        Fp(v.rem_euclid(P as i64) as u32)
    }

    fn kind() -> FieldKind {
        FieldKind::Prime { p: P }
    }

    fn encode_le(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.0.to_le_bytes());
    }

    fn decode_le(buf: &mut &[u8]) -> Option<Self> {
        let v = u32::from_le_bytes(take(buf, 4)?.try_into().ok()?);
        (v < P).then_some(Fp(v))
    }
}

impl Field for Rational {
    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn kind() -> FieldKind {
        FieldKind::Rational
    }

    fn encode_le(&self, out: &mut Vec<u8>) {
        for part in [self.numer(), self.denom()] {
            let bytes = part.to_signed_bytes_le();
            out.extend_from_slice(&(bytes.len() as u32).to_le_bytes());
            out.extend_from_slice(&bytes);
        }
    }

    fn decode_le(buf: &mut &[u8]) -> Option<Self> {
        let mut read = || {
            let len = u32::from_le_bytes(take(buf, 4)?.try_into().ok()?) as usize;
            Some(BigInt::from_signed_bytes_le(take(buf, len)?))
        };
        let numer = read()?;
        let denom = read()?;
        if !denom.is_positive() {
            return None;
        }
        Some(Rational::new(numer, denom))
    }
}

fn take<'a>(buf: &mut &'a [u8], len: usize) -> Option<&'a [u8]> {
    if buf.len() < len {
        return None;
    }
    let (head, tail) = buf.split_at(len);
    *buf = tail;
    Some(head)
}

/// A computation that can run over any [`Field`].
pub trait FieldTask {
    type Output;
    fn run<F: Field>(self) -> Self::Output;
}

macro_rules! dispatch_pool {
    ($p:expr, $task:expr, [$($prime:literal),*]) => {
        match $p {
            $($prime => Ok($task.run::<Fp<$prime>>()),)*
            other => Err(Error::UnsupportedPrime(other)),
        }
    };
}

/// Runs `task` over the field described by `kind`.
pub fn with_field<T: FieldTask>(kind: FieldKind, task: T) -> Result<T::Output> {
    match kind {
        FieldKind::Rational => Ok(task.run::<Rational>()),
        FieldKind::Prime { p } => dispatch_pool!(
            p,
            task,
            [
                2147483647, 2147483629, 2147483587, 2147483579, 2147483563, 2147483549, 2147483543, 2147483497,
                2147483489, 2147483477, 2147483423, 2147483399, 2147483353, 2147483323, 2147483269, 2147483249
            ]
        ),
    }
}
