//! Ring and field abstractions.
//!
//! Rings are passed around as explicit context objects (the modulus of a
//! finite field is only known at runtime), and elements are plain values.
//! Every algorithm in the crate that does not need division is written
//! against [`Ring`]; elimination-based routines require [`Field`].

use std::fmt::Debug;
use std::marker::PhantomData;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

/// A commutative ring with identity.
pub trait Ring: Clone + Debug {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// Image of an integer under the structure map `Z -> R`.
    fn from_i64(&self, n: i64) -> Self::Elem {
        let mut acc = self.zero();
        let mut base = self.one();
        let mut m = n.unsigned_abs();
        while m > 0 {
            if m & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            m >>= 1;
        }
        if n < 0 {
            self.neg(&acc)
        } else {
            acc
        }
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn sum<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    fn product<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items.into_iter().fold(self.one(), |acc, x| self.mul(&acc, x))
    }
}

/// A ring in which every non-zero element is invertible.
pub trait Field: Ring {
    /// `None` exactly for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }
}

/// Rings of characteristic `p` carrying the absolute Frobenius `x -> x^p`.
///
/// `frobenius(x, a)` is `x^(p^a)`. On perfect rings `a` may be negative.
pub trait Frobenius: Ring {
    fn characteristic(&self) -> u64;

    fn frobenius(&self, a: &Self::Elem, times: i64) -> Self::Elem;
}

/// The integers, over any signed `num` integer type.
#[derive(Clone, Debug, Default)]
pub struct Integers<T>(PhantomData<T>);

impl<T> Integers<T> {
    pub fn new() -> Self {
        Integers(PhantomData)
    }
}

impl<T> Ring for Integers<T>
where
    T: Integer + Signed + Clone + Debug,
{
    type Elem = T;

    fn zero(&self) -> T {
        T::zero()
    }
    fn one(&self) -> T {
        T::one()
    }
    fn add(&self, a: &T, b: &T) -> T {
        a.clone() + b.clone()
    }
    fn neg(&self, a: &T) -> T {
        -a.clone()
    }
    fn mul(&self, a: &T, b: &T) -> T {
        a.clone() * b.clone()
    }
    fn is_zero(&self, a: &T) -> bool {
        a.is_zero()
    }
}

/// The rationals as fractions over a signed `num` integer type.
#[derive(Clone, Debug, Default)]
pub struct Rationals<T>(PhantomData<T>);

impl<T> Rationals<T> {
    pub fn new() -> Self {
        Rationals(PhantomData)
    }
}

impl<T> Ring for Rationals<T>
where
    T: Integer + Signed + Clone + Debug,
{
    type Elem = Ratio<T>;

    fn zero(&self) -> Ratio<T> {
        Ratio::zero()
    }
    fn one(&self) -> Ratio<T> {
        Ratio::one()
    }
    fn add(&self, a: &Ratio<T>, b: &Ratio<T>) -> Ratio<T> {
        a.clone() + b.clone()
    }
    fn neg(&self, a: &Ratio<T>) -> Ratio<T> {
        -a.clone()
    }
    fn mul(&self, a: &Ratio<T>, b: &Ratio<T>) -> Ratio<T> {
        a.clone() * b.clone()
    }
    fn is_zero(&self, a: &Ratio<T>) -> bool {
        a.is_zero()
    }
}

impl<T> Field for Rationals<T>
where
    T: Integer + Signed + Clone + Debug,
{
    fn inv(&self, a: &Ratio<T>) -> Option<Ratio<T>> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn integer_pow_and_from_i64() {
        let z = Integers::<i64>::new();
        assert_eq!(z.pow(&3, 5), 243);
        assert_eq!(z.from_i64(-17), -17);
        assert_eq!(z.pow(&-2, 0), 1);
    }

    #[test]
    fn rational_inverse() {
        let q = Rationals::<BigInt>::new();
        let a = Ratio::new(BigInt::from(3), BigInt::from(-4));
        let ai = q.inv(&a).unwrap();
        assert!(q.is_one(&q.mul(&a, &ai)));
        assert!(q.inv(&q.zero()).is_none());
    }
}
