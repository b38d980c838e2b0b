//! Exact arithmetic in the cyclotomic field `Q(ζ)`, `ζ = e^{2πi/120}`, and the
//! small dense linear algebra the geometry needs on top of it.
//!
//! Elements are stored in the power basis `ζ^0 .. ζ^31` reduced modulo the
//! 120th cyclotomic polynomial, with one common denominator. Values whose
//! numerators and denominator fit in an `i64` use a fixed-size array and
//! `i128` intermediates; anything larger falls back to `BigInt`. The two
//! representations never describe the same value, so derived equality and
//! hashing are exact.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Order of the root of unity generating the field.
pub const CONDUCTOR: usize = 120;
/// Degree of the field over `Q`, i.e. `φ(120)`.
pub const DEGREE: usize = 32;

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("expected a 2x2 matrix of determinant 1")]
    NotSpecialLinear,
    #[error("trace {0} is not 2cos(2πk/120) for any k; element lies outside the supported groups")]
    NoRootOfUnity(String),
}

struct Tables {
    /// Lower-order terms of the cyclotomic polynomial: `x^32 = -Σ c·x^j`.
    modulus: Vec<(usize, i64)>,
    /// `ζ^k` in the power basis for `k = 0..120`.
    powers: Vec<[i64; DEGREE]>,
    /// Units `u` whose Galois automorphisms `ζ ↦ ζ^u` build the norm in five
    /// quadratic steps.
    norm_tower: Vec<usize>,
}

fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let phi = cyclotomic_polynomial(CONDUCTOR);
        assert_eq!(phi.len(), DEGREE + 1);
        let modulus: Vec<(usize, i64)> = phi[..DEGREE]
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(j, c)| (j, *c))
            .collect();

        let mut powers = Vec::with_capacity(CONDUCTOR);
        let mut cur = [0i64; DEGREE];
        cur[0] = 1;
        for _ in 0..CONDUCTOR {
            powers.push(cur);
            let top = cur[DEGREE - 1];
            let mut next = [0i64; DEGREE];
            next[1..].copy_from_slice(&cur[..DEGREE - 1]);
            if top != 0 {
                for &(j, c) in &modulus {
                    next[j] -= top * c;
                }
            }
            cur = next;
        }
        assert_eq!(cur, powers[0], "ζ^120 must reduce to 1");

        let units: Vec<usize> = (1..CONDUCTOR).filter(|u| u.gcd(&CONDUCTOR) == 1).collect();
        let mut subgroup = vec![1usize];
        let mut norm_tower = Vec::new();
        while subgroup.len() < units.len() {
            let u = *units
                .iter()
                .find(|&&u| !subgroup.contains(&u) && subgroup.contains(&(u * u % CONDUCTOR)))
                .expect("unit group of Z/120 is a 2-group");
            let coset: Vec<usize> = subgroup.iter().map(|h| h * u % CONDUCTOR).collect();
            subgroup.extend(coset);
            norm_tower.push(u);
        }

        Tables { modulus, powers, norm_tower }
    })
}

/// Integer coefficients of the `n`-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_polynomial(n: usize) -> Vec<i64> {
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut poly = vec![0i64; n + 1];
    poly[0] = -1;
    poly[n] = 1;
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        poly = divide_monic(&poly, &cyclotomic_polynomial(d));
    }
    poly
}

fn divide_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0i64; num.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        for (j, d) in den.iter().enumerate() {
            rem[k + j] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|c| *c == 0));
    quot
}

// Small stays inline on purpose: boxing it would put an allocation on every field operation.
#[allow(clippy::large_enum_variant)]
#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small { num: [i64; DEGREE], den: i64 },
    Big { num: Box<[BigInt]>, den: BigInt },
}

/// An element of `Q(ζ₁₂₀)` in canonical reduced form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycNum(Repr);

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn fits_i64(v: i128) -> bool {
    v > i64::MIN as i128 && v <= i64::MAX as i128
}

impl CycNum {
    pub fn zero() -> Self {
        CycNum(Repr::Small { num: [0; DEGREE], den: 1 })
    }

    pub fn one() -> Self {
        Self::from_i64(1)
    }

    pub fn from_i64(v: i64) -> Self {
        Self::from_fraction(v, 1)
    }

    pub fn from_fraction(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let mut n = [0i128; DEGREE];
        n[0] = num as i128;
        Self::from_i128(n, den as i128)
    }

    pub fn from_rational(r: &Rational) -> Self {
        let mut num = vec![BigInt::zero(); DEGREE];
        num[0] = r.numer().clone();
        Self::from_big(num, r.denom().clone())
    }

    /// `ζ^k` for any integer `k`.
    pub fn zeta_pow(k: i64) -> Self {
        let row = tables().powers[k.rem_euclid(CONDUCTOR as i64) as usize];
        CycNum(Repr::Small { num: row, den: 1 })
    }

    /// `i = ζ^30`.
    pub fn imag_unit() -> Self {
        Self::zeta_pow(30)
    }

    /// `√2 = γ + γ⁻¹` with `γ = ζ^15`.
    pub fn sqrt2() -> Self {
        &Self::zeta_pow(15) + &Self::zeta_pow(-15)
    }

    /// `√5 = 1 + 2(ε + ε⁻¹)` with `ε = ζ^24`.
    pub fn sqrt5() -> Self {
        let eps = &Self::zeta_pow(24) + &Self::zeta_pow(-24);
        &Self::one() + &(&eps + &eps)
    }

    /// The golden ratio `(1 + √5)/2`.
    pub fn golden_ratio() -> Self {
        &(&Self::one() + &Self::sqrt5()) * &Self::from_fraction(1, 2)
    }

    fn from_i128(mut num: [i128; DEGREE], mut den: i128) -> Self {
        debug_assert!(den != 0);
        if num.iter().all(|c| *c == 0) {
            return Self::zero();
        }
        if den == i128::MIN || num.contains(&i128::MIN) {
            return Self::from_big(
                num.iter().map(|&c| BigInt::from(c)).collect(),
                BigInt::from(den),
            );
        }
        let mut g = den.unsigned_abs();
        for c in &num {
            if g == 1 {
                break;
            }
            g = gcd_u128(g, c.unsigned_abs());
        }
        let g = g as i128;
        let sign = if den < 0 { -1 } else { 1 };
        if g != 1 || sign < 0 {
            let f = g * sign;
            for c in num.iter_mut() {
                *c /= f;
            }
            den /= f;
        }
        if fits_i64(den) && num.iter().all(|&c| fits_i64(c)) {
            let mut small = [0i64; DEGREE];
            for (s, c) in small.iter_mut().zip(num.iter()) {
                *s = *c as i64;
            }
            CycNum(Repr::Small { num: small, den: den as i64 })
        } else {
            CycNum(Repr::Big {
                num: num.iter().map(|&c| BigInt::from(c)).collect(),
                den: BigInt::from(den),
            })
        }
    }

    fn from_big(mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        debug_assert_eq!(num.len(), DEGREE);
        assert!(!den.is_zero(), "zero denominator");
        if num.iter().all(Zero::is_zero) {
            return Self::zero();
        }
        let mut g = den.abs();
        for c in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if den.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for c in num.iter_mut() {
                *c = &*c / &g;
            }
            den = &den / &g;
        }
        let small = den.to_i64().filter(|&d| d != i64::MIN).and_then(|d| {
            let mut out = [0i64; DEGREE];
            for (o, c) in out.iter_mut().zip(num.iter()) {
                *o = c.to_i64().filter(|&v| v != i64::MIN)?;
            }
            Some((out, d))
        });
        match small {
            Some((num, den)) => CycNum(Repr::Small { num, den }),
            None => CycNum(Repr::Big { num: num.into_boxed_slice(), den }),
        }
    }

    fn to_big(&self) -> (Vec<BigInt>, BigInt) {
        match &self.0 {
            Repr::Small { num, den } => {
                (num.iter().map(|&c| BigInt::from(c)).collect(), BigInt::from(*den))
            }
            Repr::Big { num, den } => (num.to_vec(), den.clone()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Small { num, .. } => num.iter().all(|c| *c == 0),
            Repr::Big { .. } => false,
        }
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// Coefficient of `ζ^k` in the canonical power basis, `0 ≤ k < 32`.
    pub fn coeff(&self, k: usize) -> Rational {
        assert!(k < DEGREE);
        match &self.0 {
            Repr::Small { num, den } => Rational::new(num[k].into(), (*den).into()),
            Repr::Big { num, den } => Rational::new(num[k].clone(), den.clone()),
        }
    }

    pub fn coeffs(&self) -> Vec<Rational> {
        (0..DEGREE).map(|k| self.coeff(k)).collect()
    }

    /// `Some(q)` when the element is the rational number `q`.
    pub fn to_rational(&self) -> Option<Rational> {
        let only_constant = match &self.0 {
            Repr::Small { num, .. } => num[1..].iter().all(|c| *c == 0),
            Repr::Big { num, .. } => num[1..].iter().all(Zero::is_zero),
        };
        only_constant.then(|| self.coeff(0))
    }

    /// Sign of the first nonzero numerator coefficient; used to pick a
    /// representative of `{x, -x}`.
    pub fn leading_sign(&self) -> Ordering {
        match &self.0 {
            Repr::Small { num, .. } => {
                num.iter().find(|c| **c != 0).map_or(Ordering::Equal, |c| c.cmp(&0))
            }
            Repr::Big { num, .. } => num
                .iter()
                .find(|c| !c.is_zero())
                .map_or(Ordering::Equal, |c| c.sign().cmp(&num_bigint::Sign::NoSign)),
        }
    }

    /// The Galois automorphism `ζ ↦ ζ^u` for `u` prime to 120.
    pub fn galois(&self, u: usize) -> Self {
        assert_eq!(u.gcd(&CONDUCTOR), 1, "not a unit modulo 120");
        let t = tables();
        match &self.0 {
            Repr::Small { num, den } => {
                let mut out = [0i128; DEGREE];
                for (k, &c) in num.iter().enumerate().filter(|(_, c)| **c != 0) {
                    let row = &t.powers[k * u % CONDUCTOR];
                    for (o, &r) in out.iter_mut().zip(row.iter()) {
                        *o += c as i128 * r as i128;
                    }
                }
                Self::from_i128(out, *den as i128)
            }
            Repr::Big { num, den } => {
                let mut out = vec![BigInt::zero(); DEGREE];
                for (k, c) in num.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                    let row = &t.powers[k * u % CONDUCTOR];
                    for (o, &r) in out.iter_mut().zip(row.iter()) {
                        if r != 0 {
                            *o += c * r;
                        }
                    }
                }
                Self::from_big(out, den.clone())
            }
        }
    }

    /// Complex conjugation `ζ ↦ ζ⁻¹`.
    pub fn conj(&self) -> Self {
        self.galois(CONDUCTOR - 1)
    }

    /// Multiplicative inverse via the field norm: `a⁻¹ = (Π_{σ≠1} σ(a)) / N(a)`.
    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if let Some(q) = self.to_rational() {
            return Ok(Self::from_rational(&q.recip()));
        }
        let mut partial = self.clone();
        let mut cofactor = Self::one();
        for &u in &tables().norm_tower {
            let image = partial.galois(u);
            cofactor = &cofactor * &image;
            partial = &partial * &image;
        }
        let norm = partial.to_rational().expect("field norm is rational");
        Ok(&cofactor * &Self::from_rational(&norm.recip()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, FieldError> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    fn add_impl(&self, rhs: &Self) -> Self {
        if let (Repr::Small { num: a, den: da }, Repr::Small { num: b, den: db }) = (&self.0, &rhs.0)
        {
            let mut out = [0i128; DEGREE];
            if da == db {
                for (o, (x, y)) in out.iter_mut().zip(a.iter().zip(b.iter())) {
                    *o = *x as i128 + *y as i128;
                }
                return Self::from_i128(out, *da as i128);
            }
            let (da, db) = (*da as i128, *db as i128);
            for (o, (x, y)) in out.iter_mut().zip(a.iter().zip(b.iter())) {
                *o = *x as i128 * db + *y as i128 * da;
            }
            return Self::from_i128(out, da * db);
        }
        let (a, da) = self.to_big();
        let (b, db) = rhs.to_big();
        let out = a.iter().zip(b.iter()).map(|(x, y)| x * &db + y * &da).collect();
        Self::from_big(out, da * db)
    }

    fn mul_impl(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        if let (Repr::Small { num: a, den: da }, Repr::Small { num: b, den: db }) = (&self.0, &rhs.0)
        {
            if let Some(raw) = small_product(a, b) {
                return Self::from_i128(raw, *da as i128 * *db as i128);
            }
        }
        let (a, da) = self.to_big();
        let (b, db) = rhs.to_big();
        let mut raw = vec![BigInt::zero(); 2 * DEGREE - 1];
        let bn: Vec<(usize, &BigInt)> = b.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        for (i, x) in a.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for &(j, y) in &bn {
                raw[i + j] += x * y;
            }
        }
        let modulus = &tables().modulus;
        for k in (DEGREE..2 * DEGREE - 1).rev() {
            let top = std::mem::take(&mut raw[k]);
            if top.is_zero() {
                continue;
            }
            for &(j, c) in modulus {
                raw[k - DEGREE + j] -= &top * c;
            }
        }
        raw.truncate(DEGREE);
        Self::from_big(raw, da * db)
    }
}

/// Convolution and reduction with overflow detection; `None` sends the caller
/// to the big-integer path.
fn small_product(a: &[i64; DEGREE], b: &[i64; DEGREE]) -> Option<[i128; DEGREE]> {
    let mut raw = [0i128; 2 * DEGREE - 1];
    let mut bn = [(0usize, 0i128); DEGREE];
    let mut nb = 0;
    for (j, &y) in b.iter().enumerate() {
        if y != 0 {
            bn[nb] = (j, y as i128);
            nb += 1;
        }
    }
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        let x = x as i128;
        for &(j, y) in &bn[..nb] {
            raw[i + j] = raw[i + j].checked_add(x * y)?;
        }
    }
    let modulus = &tables().modulus;
    for k in (DEGREE..2 * DEGREE - 1).rev() {
        let top = raw[k];
        if top == 0 {
            continue;
        }
        for &(j, c) in modulus {
            let idx = k - DEGREE + j;
            raw[idx] = raw[idx].checked_sub(top.checked_mul(c as i128)?)?;
        }
    }
    let mut out = [0i128; DEGREE];
    out.copy_from_slice(&raw[..DEGREE]);
    Some(out)
}

impl Default for CycNum {
    fn default() -> Self {
        Self::zero()
    }
}

impl Ord for CycNum {
    /// Lexicographic on the rational coefficients `c_0, c_1, ...`.
    fn cmp(&self, other: &Self) -> Ordering {
        if let (Repr::Small { num: a, den: da }, Repr::Small { num: b, den: db }) =
            (&self.0, &other.0)
        {
            for (x, y) in a.iter().zip(b.iter()) {
                let ord = (*x as i128 * *db as i128).cmp(&(*y as i128 * *da as i128));
                if ord != Ordering::Equal {
                    return ord;
                }
            }
            return Ordering::Equal;
        }
        let (a, da) = self.to_big();
        let (b, db) = other.to_big();
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| (x * &db).cmp(&(y * &da)))
            .find(|o| *o != Ordering::Equal)
            .unwrap_or(Ordering::Equal)
    }
}

impl PartialOrd for CycNum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs().into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => write!(f, "ζ^{k}")?,
                (_, false) => write!(f, "{mag}·ζ^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a> Add<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn add(self, rhs: &CycNum) -> CycNum {
        self.add_impl(rhs)
    }
}

impl<'a> Sub<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn sub(self, rhs: &CycNum) -> CycNum {
        self.add_impl(&-rhs)
    }
}

impl<'a> Mul<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn mul(self, rhs: &CycNum) -> CycNum {
        self.mul_impl(rhs)
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        match &self.0 {
            Repr::Small { num, den } => {
                let mut n = *num;
                n.iter_mut().for_each(|c| *c = -*c);
                CycNum(Repr::Small { num: n, den: *den })
            }
            Repr::Big { num, den } => CycNum(Repr::Big {
                num: num.iter().map(|c| -c).collect(),
                den: den.clone(),
            }),
        }
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $method(self, rhs: CycNum) -> CycNum {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a CycNum> for CycNum {
            type Output = CycNum;
            fn $method(self, rhs: &CycNum) -> CycNum {
                (&self).$method(rhs)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

/// Dot product without conjugation.
pub fn dot(a: &[CycNum], b: &[CycNum]) -> CycNum {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(CycNum::zero(), |acc, (x, y)| {
        if x.is_zero() || y.is_zero() {
            acc
        } else {
            &acc + &(x * y)
        }
    })
}

/// A dense rectangular matrix over the cyclotomic field.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CycMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<CycNum>,
}

impl CycMatrix {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> CycNum) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        CycMatrix { rows, cols, entries }
    }

    pub fn from_rows(rows: Vec<Vec<CycNum>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        assert!(r > 0 && c > 0, "empty matrix");
        CycMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { CycNum::one() } else { CycNum::zero() })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| CycNum::zero())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &CycNum {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[CycNum] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<CycNum> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[CycNum] {
        &self.entries
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, rhs: &CycMatrix) -> CycMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        Self::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = CycNum::zero();
            for k in 0..self.cols {
                let (a, b) = (self.get(i, k), rhs.get(k, j));
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &(a * b);
                }
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[CycNum]) -> Vec<CycNum> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn add(&self, rhs: &CycMatrix) -> CycMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + rhs.get(i, j))
    }

    pub fn sub(&self, rhs: &CycMatrix) -> CycMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) - rhs.get(i, j))
    }

    pub fn scale(&self, s: &CycNum) -> CycMatrix {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) * s)
    }

    pub fn neg(&self) -> CycMatrix {
        Self::from_fn(self.rows, self.cols, |i, j| -self.get(i, j))
    }

    pub fn trace(&self) -> CycNum {
        assert_eq!(self.rows, self.cols);
        (0..self.rows).fold(CycNum::zero(), |acc, i| &acc + self.get(i, i))
    }

    /// Determinant of a 2x2 matrix.
    pub fn det2(&self) -> CycNum {
        assert!(self.rows == 2 && self.cols == 2);
        &(self.get(0, 0) * self.get(1, 1)) - &(self.get(0, 1) * self.get(1, 0))
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    /// Basis of the right kernel.
    pub fn kernel(&self) -> Vec<Vec<CycNum>> {
        solve_kernel(self)
    }
}

/// Basis of the right kernel by division-free Gauss–Jordan elimination.
///
/// Every pivot row is combined as `p·r_k − a·r_p`, so no field inversion is
/// needed; kernel vectors come out scaled by products of pivots.
pub fn solve_kernel(m: &CycMatrix) -> Vec<Vec<CycNum>> {
    let (rows, cols) = (m.rows, m.cols);
    let mut a: Vec<Vec<CycNum>> = (0..rows).map(|i| m.row(i).to_vec()).collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pivot_row = a[r].clone();
        let pv = pivot_row[c].clone();
        for (k, row) in a.iter_mut().enumerate() {
            if k == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                *x = &(&pv * &*x) - &(&f * y);
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    let pivots: Vec<CycNum> = pivot_cols.iter().enumerate().map(|(i, &c)| a[i][c].clone()).collect();
    let full = pivots.iter().fold(CycNum::one(), |acc, p| &acc * p);
    let free: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![CycNum::zero(); cols];
            v[f] = full.clone();
            for (i, &c) in pivot_cols.iter().enumerate() {
                if a[i][f].is_zero() {
                    continue;
                }
                let others = pivots
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .fold(CycNum::one(), |acc, (_, p)| &acc * p);
                v[c] = -&(&a[i][f] * &others);
            }
            v
        })
        .collect()
}

fn trace_table() -> &'static HashMap<CycNum, u32> {
    static TRACES: OnceLock<HashMap<CycNum, u32>> = OnceLock::new();
    TRACES.get_or_init(|| {
        (0..=(CONDUCTOR as u32 / 2))
            .map(|k| (&CycNum::zeta_pow(k as i64) + &CycNum::zeta_pow(-(k as i64)), k))
            .collect()
    })
}

/// For `m ∈ SL(2)` of finite order dividing 120, the `k ∈ [0, 60]` with
/// eigenvalues `ζ^{±k}`.
pub fn root_of_unity_exponent(m: &CycMatrix) -> Result<u32, FieldError> {
    if m.rows != 2 || m.cols != 2 || !m.det2().is_one() {
        return Err(FieldError::NotSpecialLinear);
    }
    let t = m.trace();
    let k = *trace_table().get(&t).ok_or_else(|| FieldError::NoRootOfUnity(t.to_string()))?;
    let lambda = CycNum::zeta_pow(k as i64);
    // λ² − tλ + 1 = 0
    debug_assert!((&(&(&lambda * &lambda) - &(&t * &lambda)) + &CycNum::one()).is_zero());
    Ok(k)
}

/// The eigenvalue pair `(ζ^k, ζ^{-k})` of a finite-order element of `SL(2)`.
pub fn eigenvalues_finite_order(m: &CycMatrix) -> Result<(CycNum, CycNum), FieldError> {
    let k = root_of_unity_exponent(m)? as i64;
    Ok((CycNum::zeta_pow(k), CycNum::zeta_pow(-k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(k: i64) -> CycNum {
        CycNum::zeta_pow(k)
    }

    #[test]
    fn modulus_is_sparse_cyclotomic() {
        let phi = cyclotomic_polynomial(120);
        let mut expected = vec![0i64; 33];
        for (j, c) in [(32, 1), (28, 1), (20, -1), (16, -1), (12, -1), (4, 1), (0, 1)] {
            expected[j] = c;
        }
        assert_eq!(phi, expected);
        assert_eq!(cyclotomic_polynomial(15), vec![1, -1, 0, 1, -1, 1, 0, -1, 1]);
    }

    #[test]
    fn roots_of_unity() {
        assert!((&z(40) * &z(80)).is_one());
        assert_eq!(&z(40) + &z(80), CycNum::from_i64(-1));
        let r2 = &z(15) + &z(-15);
        assert_eq!(&r2 * &r2, CycNum::from_i64(2));
        let i = CycNum::imag_unit();
        assert_eq!(&i * &i, CycNum::from_i64(-1));
        let r5 = CycNum::sqrt5();
        assert_eq!(&r5 * &r5, CycNum::from_i64(5));
        let phi = CycNum::golden_ratio();
        assert_eq!(&(&phi * &phi) - &phi, CycNum::one());
        assert!(z(120).is_one());
        assert_eq!(z(60), CycNum::from_i64(-1));
    }

    #[test]
    fn inverse_and_division() {
        assert_eq!(CycNum::zero().inv(), Err(FieldError::DivisionByZero));
        let a = &(&CycNum::from_i64(3) + &z(7)) - &CycNum::from_fraction(5, 2);
        let b = a.inv().unwrap();
        assert!((&a * &b).is_one());
        assert_eq!(CycNum::from_fraction(2, 3).inv().unwrap(), CycNum::from_fraction(3, 2));
        assert_eq!(z(11).inv().unwrap(), z(-11));
    }

    #[test]
    fn big_path_round_trips() {
        let x = &CycNum::from_i64(i64::MAX) + &z(3);
        let y = &x * &x;
        let back = y.checked_div(&x).unwrap();
        assert_eq!(back, x);
        let small_again = &y - &y;
        assert!(small_again.is_zero());
        assert_eq!(&(&x - &z(3)) - &CycNum::from_i64(i64::MAX), CycNum::zero());
    }

    #[test]
    fn kernel_examples() {
        assert!(CycMatrix::identity(2).kernel().is_empty());
        assert_eq!(CycMatrix::zeros(2, 2).kernel().len(), 2);
        // companion-style element of order 5 with eigenvalue ε = ζ^24
        let eps = z(24);
        let m = CycMatrix::from_rows(vec![
            vec![CycNum::zero(), CycNum::from_i64(-1)],
            vec![CycNum::one(), &eps + &z(-24)],
        ]);
        let shifted = m.sub(&CycMatrix::identity(2).scale(&eps));
        let ker = shifted.kernel();
        assert_eq!(ker.len(), 1);
        let mv = m.mul_vec(&ker[0]);
        let ev: Vec<CycNum> = ker[0].iter().map(|x| x * &eps).collect();
        assert_eq!(mv, ev);
    }

    #[test]
    fn eigenvalues() {
        let (a, b) = eigenvalues_finite_order(&CycMatrix::identity(2)).unwrap();
        assert!(a.is_one() && b.is_one());
        let i = CycNum::imag_unit();
        let q = CycMatrix::from_rows(vec![
            vec![CycNum::zero(), CycNum::one()],
            vec![CycNum::from_i64(-1), CycNum::zero()],
        ]);
        let (a, b) = eigenvalues_finite_order(&q).unwrap();
        assert_eq!((a, b), (i.clone(), -&i));
        let bad = CycMatrix::from_rows(vec![
            vec![CycNum::from_i64(2), CycNum::zero()],
            vec![CycNum::zero(), CycNum::from_fraction(1, 2)],
        ]);
        assert!(matches!(root_of_unity_exponent(&bad), Err(FieldError::NoRootOfUnity(_))));
        let not_sl = CycMatrix::identity(2).scale(&CycNum::from_i64(2));
        assert_eq!(root_of_unity_exponent(&not_sl), Err(FieldError::NotSpecialLinear));
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(CycNum::from_fraction(-3, 4).to_string(), "-3/4");
        assert_eq!(CycNum::imag_unit().to_string(), "ζ^30");
        let x = &CycNum::from_i64(1) - &(&z(2) * &CycNum::from_i64(2));
        assert_eq!(x.to_string(), "1 - 2·ζ^2");
    }

    fn arb_cyc() -> impl Strategy<Value = CycNum> {
        prop::collection::vec((0i64..120, -6i64..7, 1i64..5), 0..5).prop_map(|terms| {
            terms.into_iter().fold(CycNum::zero(), |acc, (k, n, d)| {
                &acc + &(&z(k) * &CycNum::from_fraction(n, d))
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn field_axioms(a in arb_cyc(), b in arb_cyc(), c in arb_cyc()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn conjugation_is_an_involutive_automorphism(a in arb_cyc(), b in arb_cyc()) {
            prop_assert_eq!(a.conj().conj(), a.clone());
            prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        }

        #[test]
        fn canonical_form_is_path_independent(a in arb_cyc(), b in arb_cyc()) {
            // (a + b)² expanded two ways
            let s = &a + &b;
            let lhs = &s * &s;
            let two = CycNum::from_i64(2);
            let rhs = &(&(&a * &a) + &(&two * &(&a * &b))) + &(&b * &b);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn kernel_vectors_are_annihilated(entries in prop::collection::vec(arb_cyc(), 12)) {
            let mut it = entries.into_iter();
            let m = CycMatrix::from_fn(3, 4, |_, _| it.next().unwrap());
            for v in m.kernel() {
                prop_assert!(m.mul_vec(&v).iter().all(CycNum::is_zero));
                prop_assert!(v.iter().any(|x| !x.is_zero()));
            }
        }
    }
}
