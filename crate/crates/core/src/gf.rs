//! Finite fields `F_{p^k}` with table-driven arithmetic.
//!
//! An element is encoded as the integer `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`
//! where `c_0 + c_1 x + ... + c_{k-1} x^{k-1}` is its residue modulo the
//! defining polynomial. Multiplication goes through discrete log tables, so
//! the field order is capped at [`MAX_ORDER`].

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{Field, Frobenius, Ring};

pub const MAX_ORDER: u64 = 1 << 16;

/// Default irreducible moduli `[c_0, ..., c_{k-1}, 1]` for `p <= 13`, `k <= 4`.
/// All of them are primitive (Conway polynomials).
const DEFAULT_MODULI: &[(u32, &[u32])] = &[
    (2, &[1, 1]),
    (2, &[1, 1, 1]),
    (2, &[1, 1, 0, 1]),
    (2, &[1, 1, 0, 0, 1]),
    (3, &[1, 1]),
    (3, &[2, 2, 1]),
    (3, &[1, 2, 0, 1]),
    (3, &[2, 0, 0, 2, 1]),
    (5, &[3, 1]),
    (5, &[2, 4, 1]),
    (5, &[3, 3, 0, 1]),
    (5, &[2, 1, 4, 0, 1]),
    (7, &[4, 1]),
    (7, &[3, 6, 1]),
    (7, &[4, 0, 6, 1]),
    (7, &[3, 4, 5, 0, 1]),
    (11, &[9, 1]),
    (11, &[2, 7, 1]),
    (11, &[9, 2, 0, 1]),
    (11, &[2, 10, 8, 0, 1]),
    (13, &[11, 1]),
    (13, &[2, 12, 1]),
    (13, &[11, 2, 0, 1]),
    (13, &[2, 12, 3, 0, 1]),
];

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Element of a [`Gf`]. Only meaningful together with its field.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GfElem(pub(crate) u32);

impl GfElem {
    pub fn code(self) -> u32 {
        self.0
    }
}

impl fmt::Debug for GfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

struct Tables {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    /// exp[i] = g^i for 0 <= i < q - 1, for a fixed generator g.
    exp: Vec<u32>,
    /// log[x] for x != 0.
    log: Vec<u32>,
}

/// The finite field `F_p[x] / (modulus)`.
#[derive(Clone)]
pub struct Gf {
    t: Arc<Tables>,
}

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}; {:?})", self.t.p, self.t.k, self.t.modulus)
    }
}

impl PartialEq for Gf {
    fn eq(&self, other: &Self) -> bool {
        self.t.p == other.t.p && self.t.modulus == other.t.modulus
    }
}

impl Eq for Gf {}

// Polynomials over F_p, low degree first.
fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = mod_inv(m[dm], p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = (*r.last().unwrap() as u64 * lead_inv as u64 % p as u64) as u32;
        for (i, &mi) in m.iter().enumerate() {
            let sub = (c as u64 * mi as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn mod_inv(a: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

/// Checks irreducibility of a monic polynomial by trial division by every
/// monic polynomial of degree `1..=deg/2`. Returns a factor when reducible.
fn find_factor(m: &[u32], p: u32) -> Option<Vec<u32>> {
    let k = m.len() - 1;
    for d in 1..=k / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut f = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                f.push((c % p as u64) as u32);
                c /= p as u64;
            }
            f.push(1);
            if poly_rem(m, &f, p).is_empty() {
                return Some(f);
            }
        }
    }
    None
}

impl Gf {
    /// `F_p` itself.
    pub fn prime(p: u64) -> Result<Gf> {
        Gf::new(p, 1)
    }

    /// `F_{p^k}` with the default modulus: the built-in table when available,
    /// otherwise the lexicographically first monic irreducible polynomial.
    pub fn new(p: u64, k: u32) -> Result<Gf> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::InvalidModulus("extension degree must be >= 1".into()));
        }
        check_size(p, k)?;
        let modulus = default_modulus(p as u32, k);
        Gf::with_modulus(p, &modulus)
    }

    /// `F_p[x]/(modulus)`; `modulus` is `[c_0, ..., c_{k-1}, 1]`.
    pub fn with_modulus(p: u64, modulus: &[u32]) -> Result<Gf> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if modulus.len() < 2 {
            return Err(Error::InvalidModulus("degree must be >= 1".into()));
        }
        if *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidModulus("modulus must be monic".into()));
        }
        if modulus.iter().any(|&c| c as u64 >= p) {
            return Err(Error::InvalidModulus(format!(
                "coefficients must lie in [0, {p})"
            )));
        }
        let k = (modulus.len() - 1) as u32;
        check_size(p, k)?;
        let p32 = p as u32;
        if let Some(factor) = find_factor(modulus, p32) {
            return Err(Error::ReducibleModulus { p, factor });
        }
        Ok(Gf {
            t: Arc::new(build_tables(p32, modulus.to_vec())),
        })
    }

    pub fn p(&self) -> u64 {
        self.t.p as u64
    }

    pub fn degree(&self) -> u32 {
        self.t.k
    }

    pub fn order(&self) -> u64 {
        self.t.q as u64
    }

    pub fn modulus(&self) -> &[u32] {
        &self.t.modulus
    }

    /// The prime subfield, with the same `p`.
    pub fn prime_subfield(&self) -> Gf {
        if self.t.k == 1 {
            self.clone()
        } else {
            Gf::prime(self.p()).expect("p already validated")
        }
    }

    /// The multiplicative generator used by the log tables.
    pub fn generator(&self) -> GfElem {
        GfElem(self.t.exp[if self.t.q > 2 { 1 } else { 0 }])
    }

    /// The class of `x` (the root of the modulus).
    pub fn root(&self) -> GfElem {
        self.from_coeffs(&[0, 1])
    }

    pub fn elements(&self) -> impl Iterator<Item = GfElem> {
        (0..self.t.q).map(GfElem)
    }

    pub fn from_code(&self, code: u32) -> Option<GfElem> {
        (code < self.t.q).then_some(GfElem(code))
    }

    /// Element with coefficient vector `[c_0, c_1, ...]` (reduced modulo the
    /// modulus and modulo `p`).
    pub fn from_coeffs(&self, coeffs: &[u32]) -> GfElem {
        let p = self.t.p;
        let reduced: Vec<u32> = coeffs.iter().map(|&c| c % p).collect();
        let r = poly_rem(&reduced, &self.t.modulus, p);
        let mut code = 0u32;
        for &c in r.iter().rev() {
            code = code * p + c;
        }
        GfElem(code)
    }

    /// Coefficient vector of length `k`.
    pub fn coeffs(&self, a: GfElem) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.t.k as usize);
        let mut c = a.0;
        for _ in 0..self.t.k {
            out.push(c % self.t.p);
            c /= self.t.p;
        }
        out
    }

    /// Multiplicative order of a non-zero element.
    pub fn multiplicative_order(&self, a: GfElem) -> Option<u64> {
        if a.0 == 0 {
            return None;
        }
        let n = (self.t.q - 1) as u64;
        let l = self.t.log[a.0 as usize] as u64;
        Some(n / num_integer::gcd(n, l))
    }
}

fn check_size(p: u64, k: u32) -> Result<()> {
    let q = (p as u128).checked_pow(k);
    match q {
        Some(q) if q <= MAX_ORDER as u128 => Ok(()),
        _ => Err(Error::FieldTooLarge {
            p,
            k,
            limit: MAX_ORDER,
        }),
    }
}

fn default_modulus(p: u32, k: u32) -> Vec<u32> {
    if let Some((_, m)) = DEFAULT_MODULI
        .iter()
        .find(|(pp, m)| *pp == p && m.len() == k as usize + 1)
    {
        return m.to_vec();
    }
    if k == 1 {
        return vec![0, 1];
    }
    let count = (p as u64).pow(k);
    for code in 0..count {
        let mut m = Vec::with_capacity(k as usize + 1);
        let mut c = code;
        for _ in 0..k {
            m.push((c % p as u64) as u32);
            c /= p as u64;
        }
        m.push(1);
        if find_factor(&m, p).is_none() {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn build_tables(p: u32, modulus: Vec<u32>) -> Tables {
    let k = (modulus.len() - 1) as u32;
    let q = p.pow(k);
    let encode = |poly: &[u32]| -> u32 {
        let mut code = 0u32;
        for &c in poly.iter().rev() {
            code = code * p + c;
        }
        code
    };
    let decode = |mut code: u32| -> Vec<u32> {
        let mut v = Vec::with_capacity(k as usize);
        for _ in 0..k {
            v.push(code % p);
            code /= p;
        }
        v
    };
    let mulmod = |a: u32, b: u32| -> u32 {
        let (pa, pb) = (decode(a), decode(b));
        let mut prod = vec![0u32; 2 * k as usize];
        for (i, &x) in pa.iter().enumerate() {
            for (j, &y) in pb.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
            }
        }
        encode(&poly_rem(&prod, &modulus, p))
    };
    // Search a generator: the first element whose powers exhaust F_q^*.
    let mut exp = Vec::new();
    let mut log = vec![0u32; q as usize];
    for g in 1..q {
        exp.clear();
        let mut x = 1u32;
        let mut ok = true;
        for i in 0..(q - 1) {
            if i > 0 && x == 1 {
                ok = false;
                break;
            }
            exp.push(x);
            x = mulmod(x, g);
        }
        if ok && x == 1 {
            break;
        }
    }
    for (i, &x) in exp.iter().enumerate() {
        log[x as usize] = i as u32;
    }
    Tables {
        p,
        k,
        q,
        modulus,
        exp,
        log,
    }
}

impl Ring for Gf {
    type Elem = GfElem;

    fn zero(&self) -> GfElem {
        GfElem(0)
    }

    fn one(&self) -> GfElem {
        GfElem(1)
    }

    fn add(&self, a: &GfElem, b: &GfElem) -> GfElem {
        let p = self.t.p;
        if self.t.k == 1 {
            return GfElem((a.0 + b.0) % p);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.t.k {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place *= p;
        }
        GfElem(out)
    }

    fn neg(&self, a: &GfElem) -> GfElem {
        let p = self.t.p;
        if self.t.k == 1 {
            return GfElem((p - a.0) % p);
        }
        let mut x = a.0;
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.t.k {
            out += ((p - x % p) % p) * place;
            x /= p;
            place *= p;
        }
        GfElem(out)
    }

    fn mul(&self, a: &GfElem, b: &GfElem) -> GfElem {
        if a.0 == 0 || b.0 == 0 {
            return GfElem(0);
        }
        let n = self.t.q - 1;
        let l = (self.t.log[a.0 as usize] as u64 + self.t.log[b.0 as usize] as u64) % n as u64;
        GfElem(self.t.exp[l as usize])
    }

    fn is_zero(&self, a: &GfElem) -> bool {
        a.0 == 0
    }

    fn from_i64(&self, n: i64) -> GfElem {
        GfElem(n.rem_euclid(self.t.p as i64) as u32)
    }

    fn pow(&self, a: &GfElem, e: u64) -> GfElem {
        if e == 0 {
            return GfElem(1);
        }
        if a.0 == 0 {
            return GfElem(0);
        }
        let n = (self.t.q - 1) as u64;
        let l = (self.t.log[a.0 as usize] as u64 * (e % n)) % n;
        GfElem(self.t.exp[l as usize])
    }
}

impl Field for Gf {
    fn inv(&self, a: &GfElem) -> Option<GfElem> {
        if a.0 == 0 {
            return None;
        }
        let n = self.t.q - 1;
        let l = self.t.log[a.0 as usize];
        Some(GfElem(self.t.exp[((n - l) % n) as usize]))
    }
}

impl Frobenius for Gf {
    fn characteristic(&self) -> u64 {
        self.t.p as u64
    }

    fn frobenius(&self, a: &GfElem, times: i64) -> GfElem {
        let k = self.t.k as i64;
        let t = times.rem_euclid(k) as u32;
        if t == 0 || a.0 == 0 {
            return *a;
        }
        self.pow(a, (self.t.p as u64).pow(t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(Gf::prime(4), Err(Error::NotPrime(4)));
        assert!(matches!(
            Gf::with_modulus(2, &[1, 0, 1]),
            Err(Error::ReducibleModulus { .. })
        ));
        assert!(matches!(Gf::new(2, 17), Err(Error::FieldTooLarge { .. })));
        assert!(matches!(
            Gf::with_modulus(3, &[1, 1, 2]),
            Err(Error::InvalidModulus(_))
        ));
    }

    #[test]
    fn every_default_modulus_is_primitive() {
        for (p, m) in DEFAULT_MODULI {
            let f = Gf::with_modulus(*p as u64, m).unwrap();
            if f.degree() > 1 {
                assert_eq!(f.multiplicative_order(f.root()), Some(f.order() - 1));
            }
        }
    }

    #[test]
    fn f9_generator_cubed_by_repeated_multiplication() {
        let f = Gf::new(3, 2).unwrap();
        let g = f.root();
        let cube = f.mul(&f.mul(&g, &g), &g);
        assert_eq!(f.frobenius(&g, 1), cube);
        // g^2 = -2g - 2 = g + 1 in F_3[x]/(x^2+2x+2); g^3 = g^2 + g = 2g + 1.
        assert_eq!(f.coeffs(cube), vec![1, 2]);
    }

    #[test]
    fn fermat_and_full_tower() {
        let f = Gf::new(5, 3).unwrap();
        let fp = Gf::prime(5).unwrap();
        for x in fp.elements() {
            assert_eq!(fp.frobenius(&x, 1), x);
        }
        for x in f.elements() {
            assert_eq!(f.frobenius(&x, 3), x);
            assert_eq!(f.frobenius(&f.frobenius(&x, -1), 1), x);
        }
    }

    #[test]
    fn non_default_modulus_finds_generator() {
        // x^2 + 1 is irreducible over F_3 but x has order 4, not 8.
        let f = Gf::with_modulus(3, &[1, 0, 1]).unwrap();
        assert_eq!(f.multiplicative_order(f.root()), Some(4));
        assert_eq!(f.multiplicative_order(f.generator()), Some(8));
        let x = f.root();
        assert_eq!(f.mul(&x, &x), f.from_i64(-1));
    }

    #[test]
    fn coefficient_round_trip() {
        let f = Gf::new(7, 2).unwrap();
        for x in f.elements() {
            assert_eq!(f.from_coeffs(&f.coeffs(x)), x);
        }
    }
}
