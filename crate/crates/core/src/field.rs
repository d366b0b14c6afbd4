//! Exact ground fields: the prime fields GF(p) and the rationals.
//!
//! Everything downstream is generic over [`Field`]. A field chooses its own
//! row storage through [`Field::Row`]; GF(2) packs rows into machine words,
//! every other field stores dense coefficient vectors. All arithmetic is
//! exact — there is no floating point anywhere in this crate.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Runtime description of a ground field, as it appears in presentations
/// and reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldDescriptor {
    /// GF(p) for a prime p.
    Prime(u64),
    /// The rational numbers.
    Rationals,
}

impl FieldDescriptor {
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldDescriptor::Prime(p) => *p,
            FieldDescriptor::Rationals => 0,
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Prime(p) => write!(f, "GF({p})"),
            FieldDescriptor::Rationals => write!(f, "QQ"),
        }
    }
}

/// An exact field scalar.
///
/// The supertraits come from `num-traits` plus the usual operator traits;
/// `inv` is the only genuinely new operation. `Row` is the storage used by
/// [`crate::linalg::Matrix`] rows and by ambient tensor vectors.
pub trait Field:
    Clone
    + PartialEq
    + Eq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    type Row: Row<Self>;

    /// Field characteristic; 0 for the rationals.
    const CHARACTERISTIC: u64;

    fn descriptor() -> FieldDescriptor;

    /// Multiplicative inverse; `None` exactly for zero.
    fn inv(&self) -> Option<Self>;

    /// Image of an integer under the canonical ring map Z -> k.
    fn from_integer(n: i64) -> Self;

    /// num/den as a field element; `None` when den maps to zero.
    fn from_fraction(num: i64, den: i64) -> Option<Self> {
        Self::from_integer(den).inv().map(|d| Self::from_integer(num) * d)
    }

    /// Canonical report rendering: the residue for GF(p), `num/den` for
    /// the rationals.
    fn report_repr(&self) -> String {
        self.to_string()
    }
}

/// Row storage abstraction: a fixed-length coefficient vector supporting the
/// operations Gaussian elimination needs. The GF(2) implementation packs 64
/// entries per word, which is what makes the ~20k x 841 eliminations of the
/// larger examples cheap.
pub trait Row<F>: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    fn zeros(len: usize) -> Self;
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
    fn get(&self, i: usize) -> F;
    fn set(&mut self, i: usize, value: F);
    /// `self[i] += value`.
    fn add_at(&mut self, i: usize, value: &F);
    fn is_zero(&self) -> bool;
    /// Index of the first nonzero entry.
    fn leading(&self) -> Option<usize>;
    /// `self += c * other`.
    fn axpy(&mut self, c: &F, other: &Self);
    fn scale(&mut self, c: &F);
    fn dot(&self, other: &Self) -> F;
    fn for_nonzero(&self, f: impl FnMut(usize, F));
    fn support(&self) -> Vec<usize> {
        let mut s = Vec::new();
        self.for_nonzero(|i, _| s.push(i));
        s
    }
    fn from_slice(entries: &[F]) -> Self;
    fn to_vec(&self) -> Vec<F>;
}

// ---------------------------------------------------------------------------
// Dense rows (any field)
// ---------------------------------------------------------------------------

#[derive(Clone, PartialEq, Debug)]
pub struct DenseRow<F>(pub Vec<F>);

impl<F: Field> Row<F> for DenseRow<F> {
    fn zeros(len: usize) -> Self {
        DenseRow(vec![F::zero(); len])
    }
    fn len(&self) -> usize {
        self.0.len()
    }
    fn get(&self, i: usize) -> F {
        self.0[i].clone()
    }
    fn set(&mut self, i: usize, value: F) {
        self.0[i] = value;
    }
    fn add_at(&mut self, i: usize, value: &F) {
        self.0[i] = self.0[i].clone() + value.clone();
    }
    fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }
    fn leading(&self) -> Option<usize> {
        self.0.iter().position(|x| !x.is_zero())
    }
    fn axpy(&mut self, c: &F, other: &Self) {
        if c.is_zero() {
            return;
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            if !b.is_zero() {
                *a = a.clone() + c.clone() * b.clone();
            }
        }
    }
    fn scale(&mut self, c: &F) {
        for a in &mut self.0 {
            if !a.is_zero() {
                *a = a.clone() * c.clone();
            }
        }
    }
    fn dot(&self, other: &Self) -> F {
        let mut acc = F::zero();
        for (a, b) in self.0.iter().zip(&other.0) {
            if !a.is_zero() && !b.is_zero() {
                acc = acc + a.clone() * b.clone();
            }
        }
        acc
    }
    fn for_nonzero(&self, mut f: impl FnMut(usize, F)) {
        for (i, x) in self.0.iter().enumerate() {
            if !x.is_zero() {
                f(i, x.clone());
            }
        }
    }
    fn from_slice(entries: &[F]) -> Self {
        DenseRow(entries.to_vec())
    }
    fn to_vec(&self) -> Vec<F> {
        self.0.clone()
    }
}

// ---------------------------------------------------------------------------
// Packed GF(2) rows
// ---------------------------------------------------------------------------

/// Bit-packed GF(2) row: 64 entries per word, trailing bits kept zero.
#[derive(Clone, PartialEq, Debug)]
pub struct BitRow {
    len: usize,
    words: Vec<u64>,
}

impl BitRow {
    #[inline]
    fn word_count(len: usize) -> usize {
        len.div_ceil(64)
    }
    #[inline]
    pub fn bit(&self, i: usize) -> bool {
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }
    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }
}

impl Row<Gf<2>> for BitRow {
    fn zeros(len: usize) -> Self {
        BitRow { len, words: vec![0; Self::word_count(len)] }
    }
    fn len(&self) -> usize {
        self.len
    }
    fn get(&self, i: usize) -> Gf<2> {
        debug_assert!(i < self.len);
        Gf(u64::from(self.bit(i)))
    }
    fn set(&mut self, i: usize, value: Gf<2>) {
        debug_assert!(i < self.len);
        let (w, b) = (i / 64, i % 64);
        self.words[w] = (self.words[w] & !(1 << b)) | (value.0 << b);
    }
    fn add_at(&mut self, i: usize, value: &Gf<2>) {
        if value.0 == 1 {
            self.flip(i);
        }
    }
    fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }
    fn leading(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }
    fn axpy(&mut self, c: &Gf<2>, other: &Self) {
        if c.0 == 0 {
            return;
        }
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }
    fn scale(&mut self, c: &Gf<2>) {
        if c.0 == 0 {
            self.words.fill(0);
        }
    }
    fn dot(&self, other: &Self) -> Gf<2> {
        let mut parity = 0u32;
        for (a, b) in self.words.iter().zip(&other.words) {
            parity ^= (a & b).count_ones() & 1;
        }
        Gf(u64::from(parity & 1))
    }
    fn for_nonzero(&self, mut f: impl FnMut(usize, Gf<2>)) {
        for (k, &word) in self.words.iter().enumerate() {
            let mut w = word;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                f(k * 64 + b, Gf(1));
                w &= w - 1;
            }
        }
    }
    fn from_slice(entries: &[Gf<2>]) -> Self {
        let mut row = Self::zeros(entries.len());
        for (i, e) in entries.iter().enumerate() {
            if e.0 == 1 {
                row.flip(i);
            }
        }
        row
    }
    fn to_vec(&self) -> Vec<Gf<2>> {
        (0..self.len).map(|i| self.get(i)).collect()
    }
}

// ---------------------------------------------------------------------------
// GF(p)
// ---------------------------------------------------------------------------

/// Element of the prime field GF(P). The value is always reduced mod P.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Gf<const P: u64>(pub u64);

impl<const P: u64> Gf<P> {
    pub fn new(v: u64) -> Self {
        Gf(v % P)
    }
}

impl<const P: u64> fmt::Debug for Gf<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> fmt::Display for Gf<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Gf<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Gf((self.0 + rhs.0) % P)
    }
}

impl<const P: u64> Sub for Gf<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Gf((self.0 + P - rhs.0) % P)
    }
}

impl<const P: u64> Mul for Gf<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Gf((self.0 * rhs.0) % P)
    }
}

impl<const P: u64> Neg for Gf<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Gf((P - self.0) % P)
    }
}

impl<const P: u64> Zero for Gf<P> {
    fn zero() -> Self {
        Gf(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Gf<P> {
    fn one() -> Self {
        Gf(1 % P)
    }
}

fn gf_inv(a: u64, p: u64) -> Option<u64> {
    if a == 0 {
        return None;
    }
    // extended Euclid on (a, p)
    let (mut r0, mut r1) = (a as i128, p as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1, "p must be prime");
    Some(s0.rem_euclid(p as i128) as u64)
}

fn gf_from_integer(n: i64, p: u64) -> u64 {
    n.rem_euclid(p as i64) as u64
}

macro_rules! impl_prime_field {
    ($p:literal, dense) => {
        impl Field for Gf<$p> {
            type Row = DenseRow<Gf<$p>>;
            const CHARACTERISTIC: u64 = $p;
            fn descriptor() -> FieldDescriptor {
                FieldDescriptor::Prime($p)
            }
            fn inv(&self) -> Option<Self> {
                gf_inv(self.0, $p).map(Gf)
            }
            fn from_integer(n: i64) -> Self {
                Gf(gf_from_integer(n, $p))
            }
        }
    };
}

impl Field for Gf<2> {
    type Row = BitRow;
    const CHARACTERISTIC: u64 = 2;
    fn descriptor() -> FieldDescriptor {
        FieldDescriptor::Prime(2)
    }
    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(*self)
        }
    }
    fn from_integer(n: i64) -> Self {
        Gf(n.rem_euclid(2) as u64)
    }
}

impl_prime_field!(3, dense);
impl_prime_field!(5, dense);
impl_prime_field!(7, dense);
impl_prime_field!(11, dense);
impl_prime_field!(13, dense);

// ---------------------------------------------------------------------------
// Rationals
// ---------------------------------------------------------------------------

impl Field for BigRational {
    type Row = DenseRow<BigRational>;
    const CHARACTERISTIC: u64 = 0;
    fn descriptor() -> FieldDescriptor {
        FieldDescriptor::Rationals
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_integer(n: i64) -> Self {
        BigRational::from_integer(n.into())
    }
    fn report_repr(&self) -> String {
        rational_repr(self)
    }
}

/// Canonical `num/den` rendering used by reports; the denominator is always
/// positive and printed even when it is 1.
pub fn rational_repr(x: &BigRational) -> String {
    let (num, den) = (x.numer(), x.denom());
    if den.is_negative() {
        format!("{}/{}", -num, -den)
    } else {
        format!("{num}/{den}")
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    type F2 = Gf<2>;
    type F7 = Gf<7>;

    #[test]
    fn prime_field_arithmetic() {
        assert_eq!(F7::new(3) + F7::new(5), F7::new(1));
        assert_eq!(F7::new(3) * F7::new(5), F7::new(1));
        assert_eq!(-F7::new(3), F7::new(4));
        assert_eq!(F7::new(3).inv(), Some(F7::new(5)));
        assert_eq!(F7::new(0).inv(), None);
        assert_eq!(F7::from_integer(-1), F7::new(6));
        for a in 1..7 {
            let x = F7::new(a);
            assert_eq!(x * x.inv().unwrap(), F7::new(1));
        }
    }

    #[test]
    fn fraction_literals() {
        assert_eq!(F7::from_fraction(1, 2), Some(F7::new(4)));
        assert_eq!(F2::from_fraction(1, 2), None);
        let q = BigRational::from_fraction(-3, 6).unwrap();
        assert_eq!(rational_repr(&q), "-1/2");
        assert_eq!(rational_repr(&BigRational::from_integer(5.into())), "5/1");
    }

    #[test]
    fn bitrow_ops() {
        let mut r = BitRow::zeros(130);
        r.set(0, Gf(1));
        r.set(64, Gf(1));
        r.set(129, Gf(1));
        assert_eq!(r.leading(), Some(0));
        assert_eq!(r.support(), vec![0, 64, 129]);
        let mut s = BitRow::zeros(130);
        s.set(64, Gf(1));
        s.set(100, Gf(1));
        assert_eq!(r.dot(&s), Gf(1));
        r.axpy(&Gf(1), &s);
        assert_eq!(r.support(), vec![0, 100, 129]);
        r.scale(&Gf(0));
        assert!(r.is_zero());
    }

    #[test]
    fn dense_row_matches_bitrow_on_gf2_ops() {
        // same sequence of operations through both storages
        let a = [1u64, 0, 1, 1, 0, 0, 1].map(Gf::<2>);
        let b = [0u64, 1, 1, 0, 1, 0, 1].map(Gf::<2>);
        let (mut pa, pb) = (BitRow::from_slice(&a), BitRow::from_slice(&b));
        let (mut da, db) = (DenseRow(a.to_vec()), DenseRow(b.to_vec()));
        assert_eq!(pa.dot(&pb), da.dot(&db));
        pa.axpy(&Gf(1), &pb);
        da.axpy(&Gf(1), &db);
        assert_eq!(pa.to_vec(), da.to_vec());
        assert_eq!(pa.leading(), da.leading());
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }
}
