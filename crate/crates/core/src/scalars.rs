//! Exact coefficient fields: the rationals and prime fields `F_p` with `p < 2^31`.
//!
//! Rationals keep a machine-word fast path and spill to arbitrary precision on
//! overflow, so long Gröbner runs never lose exactness.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// The coefficient field of a ring: characteristic zero or a prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    Prime(u32),
}

impl Field {
    /// `F_p`, checking that `p` is a prime below `2^31`.
    pub fn prime(p: u64) -> Result<Field> {
        if p >= (1 << 31) || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field::Prime(p as u32))
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> FieldElem {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldElem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> FieldElem {
        match *self {
            Field::Rational => FieldElem::Q(Rat::from_i64(n)),
            Field::Prime(p) => FieldElem::Fp(n.rem_euclid(p as i64) as u32, p),
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> FieldElem {
        match *self {
            Field::Rational => FieldElem::Q(Rat::from_big(BigRational::from_integer(n.clone()))),
            Field::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(p)).to_u32().unwrap();
                FieldElem::Fp(r, p)
            }
        }
    }

    /// `num / den` in this field.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<FieldElem> {
        let d = self.from_bigint(den);
        self.from_bigint(num).div(&d)
    }

    pub fn from_usize(&self, n: usize) -> FieldElem {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn name(&self) -> String {
        match self {
            Field::Rational => "QQ".to_string(),
            Field::Prime(p) => format!("GF({p})"),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.name())
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A rational number in lowest terms. `Small` is used whenever both parts fit
/// in an `i64`, which makes structural equality canonical.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Rat {
    Small(i64, i64),
    Big(Box<BigRational>),
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rat {
    pub fn from_i64(n: i64) -> Rat {
        if n == i64::MIN {
            return Rat::Big(Box::new(BigRational::from_integer(BigInt::from(n))));
        }
        Rat::Small(n, 1)
    }

    fn from_i128(n: i128, d: i128) -> Rat {
        debug_assert!(d != 0);
        let (mut n, mut d) = if d < 0 { (-n, -d) } else { (n, d) };
        let g = gcd_u128(n.unsigned_abs(), d as u128) as i128;
        if g > 1 {
            n /= g;
            d /= g;
        }
        if n == 0 {
            return Rat::Small(0, 1);
        }
        let lim = i64::MAX as i128;
        if n.abs() <= lim && d <= lim {
            Rat::Small(n as i64, d as i64)
        } else {
            Rat::Big(Box::new(BigRational::new_raw(BigInt::from(n), BigInt::from(d))))
        }
    }

    pub fn from_big(b: BigRational) -> Rat {
        // BigRational is kept reduced with positive denominator
        match (b.numer().to_i64(), b.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN && d != i64::MIN => Rat::Small(n, d),
            _ => Rat::Big(Box::new(b)),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rat::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rat::Big(b) => (**b).clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rat::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Rat::Small(1, 1))
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Rat::Small(n, _) => BigInt::from(*n),
            Rat::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Rat::Small(_, d) => BigInt::from(*d),
            Rat::Big(b) => b.denom().clone(),
        }
    }

    fn add(&self, o: &Rat) -> Rat {
        if let (Rat::Small(a, b), Rat::Small(c, d)) = (self, o) {
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            if b == d {
                return Rat::from_i128(a + c, b);
            }
            if let (Some(x), Some(y), Some(z)) =
                (a.checked_mul(d), c.checked_mul(b), b.checked_mul(d))
            {
                if let Some(s) = x.checked_add(y) {
                    return Rat::from_i128(s, z);
                }
            }
        }
        Rat::from_big(self.to_big() + o.to_big())
    }

    fn neg(&self) -> Rat {
        match self {
            Rat::Small(n, d) => Rat::Small(-n, *d),
            Rat::Big(b) => Rat::from_big(-(**b).clone()),
        }
    }

    fn mul(&self, o: &Rat) -> Rat {
        if let (Rat::Small(a, b), Rat::Small(c, d)) = (self, o) {
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            // products of two i64 always fit in i128
            return Rat::from_i128(a * c, b * d);
        }
        Rat::from_big(self.to_big() * o.to_big())
    }

    fn inv(&self) -> Option<Rat> {
        match self {
            Rat::Small(0, _) => None,
            Rat::Small(n, d) => Some(Rat::from_i128(*d as i128, *n as i128)),
            Rat::Big(b) => Some(Rat::from_big(b.recip())),
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rat::Small(n, 1) => write!(f, "{n}"),
            Rat::Small(n, d) => write!(f, "{n}/{d}"),
            Rat::Big(b) => {
                if b.denom().is_one() {
                    write!(f, "{}", b.numer())
                } else {
                    write!(f, "{}/{}", b.numer(), b.denom())
                }
            }
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An element of a [`Field`]. Prime-field elements carry their modulus.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum FieldElem {
    Q(Rat),
    Fp(u32, u32),
}

impl FieldElem {
    pub fn field(&self) -> Field {
        match self {
            FieldElem::Q(_) => Field::Rational,
            FieldElem::Fp(_, p) => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Q(r) => r.is_zero(),
            FieldElem::Fp(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElem::Q(r) => r.is_one(),
            FieldElem::Fp(v, _) => *v == 1,
        }
    }

    /// Multiplicative inverse; `DivisionByZero` for zero.
    pub fn inv(&self) -> Result<FieldElem> {
        match self {
            FieldElem::Q(r) => r.inv().map(FieldElem::Q).ok_or(Error::DivisionByZero),
            FieldElem::Fp(0, _) => Err(Error::DivisionByZero),
            FieldElem::Fp(v, p) => Ok(FieldElem::Fp(pow_mod(*v as u64, *p as u64 - 2, *p as u64) as u32, *p)),
        }
    }

    pub fn div(&self, o: &FieldElem) -> Result<FieldElem> {
        Ok(self * &o.inv()?)
    }

    pub fn pow(&self, mut e: u64) -> FieldElem {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// A square root in the same field, if one exists.
    pub fn sqrt(&self) -> Option<FieldElem> {
        match self {
            FieldElem::Q(r) => {
                if r.numer().is_negative() {
                    return None;
                }
                let (n, d) = (r.numer(), r.denom());
                let (sn, sd) = (n.sqrt(), d.sqrt());
                if &sn * &sn == n && &sd * &sd == d {
                    Some(FieldElem::Q(Rat::from_big(BigRational::new(sn, sd))))
                } else {
                    None
                }
            }
            FieldElem::Fp(v, p) => sqrt_mod(*v as u64, *p as u64).map(|s| FieldElem::Fp(s as u32, *p)),
        }
    }

    /// Integer representative when the element is an integer (always true in `F_p`).
    pub fn to_bigint(&self) -> Option<BigInt> {
        match self {
            FieldElem::Q(r) => r.denom().is_one().then(|| r.numer()),
            FieldElem::Fp(v, _) => Some(BigInt::from(*v)),
        }
    }

    /// Negative rationals print with a leading minus; used by the printer.
    pub fn is_negative(&self) -> bool {
        match self {
            FieldElem::Q(Rat::Small(n, _)) => *n < 0,
            FieldElem::Q(Rat::Big(b)) => b.is_negative(),
            FieldElem::Fp(..) => false,
        }
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

// Tonelli-Shanks
fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 || p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = tt * tt % p;
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = b * b % p;
        t = t * c % p;
        r = r * b % p;
    }
    Some(r)
}

fn mismatch(a: &FieldElem, b: &FieldElem) -> ! {
    panic!("coefficient field mismatch: {} vs {}", a.field(), b.field())
}

impl Add for &FieldElem {
    type Output = FieldElem;
    fn add(self, o: &FieldElem) -> FieldElem {
        match (self, o) {
            (FieldElem::Q(a), FieldElem::Q(b)) => FieldElem::Q(a.add(b)),
            (FieldElem::Fp(a, p), FieldElem::Fp(b, q)) if p == q => {
                FieldElem::Fp(((*a as u64 + *b as u64) % *p as u64) as u32, *p)
            }
            _ => mismatch(self, o),
        }
    }
}

impl Sub for &FieldElem {
    type Output = FieldElem;
    fn sub(self, o: &FieldElem) -> FieldElem {
        self + &(-o)
    }
}

impl Mul for &FieldElem {
    type Output = FieldElem;
    fn mul(self, o: &FieldElem) -> FieldElem {
        match (self, o) {
            (FieldElem::Q(a), FieldElem::Q(b)) => FieldElem::Q(a.mul(b)),
            (FieldElem::Fp(a, p), FieldElem::Fp(b, q)) if p == q => {
                FieldElem::Fp(((*a as u64 * *b as u64) % *p as u64) as u32, *p)
            }
            _ => mismatch(self, o),
        }
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        match self {
            FieldElem::Q(a) => FieldElem::Q(a.neg()),
            FieldElem::Fp(0, p) => FieldElem::Fp(0, *p),
            FieldElem::Fp(a, p) => FieldElem::Fp(p - a, *p),
        }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for FieldElem {
            type Output = FieldElem;
            fn $m(self, o: FieldElem) -> FieldElem { (&self).$m(&o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Q(r) => write!(f, "{r}"),
            FieldElem::Fp(v, _) => write!(f, "{v}"),
        }
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Q(r) => write!(f, "{r}"),
            FieldElem::Fp(v, p) => write!(f, "{v} mod {p}"),
        }
    }
}
