//! Finite fields GF(p^k).
//!
//! Elements are stored as their index `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`
//! where `c_i` are the coefficients of the representing polynomial modulo the
//! field's defining polynomial. Multiplication goes through log/exp tables
//! built from a primitive element; addition is digit-wise mod p.

use super::GeometryError;

/// Largest field order supported (tables are `O(q)`).
pub const MAX_FIELD_ORDER: u64 = 1 << 22;

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElem(u32);

impl FieldElem {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug)]
pub struct FiniteField {
    p: u32,
    k: u32,
    q: u32,
    /// Monic modulus, low coefficients first, leading 1 omitted.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

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

/// `(p, k)` with `q = p^k`, or `None` when `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Dense polynomial helpers over GF(p); coefficient vectors, low degree first.

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let lead_inv = inv_mod(*b.last().expect("nonzero divisor"), p);
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let coef = (*r.last().unwrap() as u64 * lead_inv as u64 % p as u64) as u32;
        for (i, &bc) in b.iter().enumerate() {
            let sub = (coef as u64 * bc as u64 % p as u64) as u32;
            r[i + shift] = (r[i + shift] + p - sub) % p;
        }
        r = trim(r);
    }
    r
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // p is prime: a^(p-2)
    let mut base = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

/// Irreducibility by trial division by every monic polynomial of degree
/// `1..=deg/2`.
fn is_irreducible(full: &[u32], p: u32) -> bool {
    let deg = full.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut div = digits(idx, p, d);
            div.push(1);
            if poly_rem(full, &div, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn digits(mut idx: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0u32; len];
    for d in out.iter_mut() {
        *d = (idx % p as u64) as u32;
        idx /= p as u64;
    }
    out
}

impl FiniteField {
    /// GF(p^k) with the lexicographically smallest monic irreducible modulus,
    /// comparing coefficients from the constant term upward.
    pub fn new(p: u64, k: u32) -> Result<Self, GeometryError> {
        if !is_prime(p) {
            return Err(GeometryError::NotPrime(p));
        }
        if k == 0 {
            return Err(GeometryError::InvalidParameters("extension degree must be >= 1".into()));
        }
        let q = p.checked_pow(k).filter(|&q| q <= MAX_FIELD_ORDER).ok_or(
            GeometryError::FieldTooLarge {
                p,
                k,
                max: MAX_FIELD_ORDER,
            },
        )?;
        let p32 = p as u32;
        let k_us = k as usize;

        let modulus = if k == 1 {
            vec![0]
        } else {
            // Lexicographic with c_0 most significant: enumerate c_0 slowest.
            let mut found = None;
            'outer: for idx in 0..q {
                let mut tail = digits(idx, p32, k_us);
                tail.reverse();
                let mut full = tail.clone();
                full.push(1);
                if is_irreducible(&full, p32) {
                    found = Some(tail);
                    break 'outer;
                }
            }
            found.expect("an irreducible polynomial of every degree exists")
        };

        let mut field = FiniteField {
            p: p32,
            k,
            q: q as u32,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
        };
        field.build_tables();
        Ok(field)
    }

    fn build_tables(&mut self) {
        let q = self.q as u64;
        let order = q - 1;
        let factors = prime_factors(order);
        let generator = (1..q)
            .map(|g| g as u32)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&r| self.pow_slow(g, order / r) != 1)
            })
            .expect("multiplicative group is cyclic");
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..order {
            exp.push(x);
            log[x as usize] = i as u32;
            x = self.mul_slow(x, generator);
        }
        self.exp = exp;
        self.log = log;
    }

    pub fn characteristic(&self) -> u64 {
        self.p as u64
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u64 {
        self.q as u64
    }

    /// Monic modulus coefficients `c_0..c_{k-1}` (leading 1 implicit).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(0)
    }

    pub fn one(&self) -> FieldElem {
        FieldElem(1)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q).map(FieldElem)
    }

    pub fn elem(&self, index: usize) -> FieldElem {
        assert!(index < self.q as usize, "element index out of range");
        FieldElem(index as u32)
    }

    /// Embeds a prime-field integer.
    pub fn from_int(&self, v: u64) -> FieldElem {
        FieldElem((v % self.p as u64) as u32)
    }

    pub fn coeffs(&self, e: FieldElem) -> Vec<u32> {
        digits(e.0 as u64, self.p, self.k as usize)
    }

    pub fn from_coeffs(&self, c: &[u32]) -> FieldElem {
        assert_eq!(c.len(), self.k as usize, "coefficient vector has wrong length");
        let mut idx = 0u64;
        for &d in c.iter().rev() {
            idx = idx * self.p as u64 + (d % self.p) as u64;
        }
        FieldElem(idx as u32)
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.k == 1 {
            return FieldElem((a.0 + b.0) % self.p);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.k {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        FieldElem(out)
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        let mut x = a.0;
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.k {
            out += ((self.p - x % self.p) % self.p) * place;
            x /= self.p;
            place *= self.p;
        }
        FieldElem(out)
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem(0);
        }
        let order = self.q as usize - 1;
        let s = self.log[a.0 as usize] as usize + self.log[b.0 as usize] as usize;
        FieldElem(self.exp[s % order])
    }

    /// `None` for zero.
    pub fn inv(&self, a: FieldElem) -> Option<FieldElem> {
        if a.0 == 0 {
            return None;
        }
        let order = self.q as usize - 1;
        let l = self.log[a.0 as usize] as usize;
        Some(FieldElem(self.exp[(order - l) % order]))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Option<FieldElem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: FieldElem, e: u64) -> FieldElem {
        if e == 0 {
            return FieldElem(1);
        }
        if a.0 == 0 {
            return FieldElem(0);
        }
        let order = self.q as u64 - 1;
        let l = self.log[a.0 as usize] as u64;
        FieldElem(self.exp[((l * (e % order)) % order) as usize])
    }

    /// x -> x^p.
    pub fn frobenius(&self, a: FieldElem) -> FieldElem {
        self.pow(a, self.p as u64)
    }

    /// Table-free multiplication by polynomial product and reduction. Kept
    /// public so tests can check the tables against it.
    pub fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let k = self.k as usize;
        let p = self.p;
        let da = digits(a as u64, p, k);
        let db = digits(b as u64, p, k);
        let mut prod = vec![0u32; 2 * k];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
            }
        }
        let mut m = self.modulus.clone();
        m.push(1);
        let r = poly_rem(&prod, &m, p);
        let mut idx = 0u64;
        for &d in r.iter().rev() {
            idx = idx * p as u64 + d as u64;
        }
        idx as u32
    }

    pub fn pow_slow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(49), Some((7, 2)));
        assert_eq!(prime_power(81), Some((3, 4)));
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_power(12), None);
    }

    #[test]
    fn non_prime_rejected() {
        assert!(matches!(FiniteField::new(6, 1), Err(GeometryError::NotPrime(6))));
        assert!(matches!(FiniteField::new(1, 1), Err(GeometryError::NotPrime(1))));
    }

    #[test]
    fn prime_field() {
        let f = FiniteField::new(7, 1).unwrap();
        assert_eq!(f.order(), 7);
        let three = f.from_int(3);
        let five = f.from_int(5);
        assert_eq!(f.mul(three, five), f.from_int(1));
        assert_eq!(f.add(three, five), f.from_int(1));
        assert_eq!(f.inv(three), Some(five));
    }

    #[test]
    fn smallest_moduli() {
        // x^2 + 1 is irreducible over GF(7) (-1 is a non-residue) and nothing
        // with constant term 0 is, so it is lexicographically first.
        assert_eq!(FiniteField::new(7, 2).unwrap().modulus(), &[1, 0]);
        // Over GF(2): x^2 + x + 1.
        assert_eq!(FiniteField::new(2, 2).unwrap().modulus(), &[1, 1]);
        // Over GF(3), degree 2: x^2 + 1.
        assert_eq!(FiniteField::new(3, 2).unwrap().modulus(), &[1, 0]);
    }

    /// Every nonzero x satisfies x^(q-1) = 1, computed by repeated polynomial
    /// multiplication without the log tables.
    fn fermat_by_brute_force(p: u64, k: u32) {
        let f = FiniteField::new(p, k).unwrap();
        let q = f.order() as u32;
        for x in 1..q {
            let mut acc = 1u32;
            for _ in 0..q - 1 {
                acc = f.mul_slow(acc, x);
            }
            assert_eq!(acc, 1, "x = {x} in GF({p}^{k})");
        }
    }

    #[test]
    fn fermat_gf49() {
        fermat_by_brute_force(7, 2);
    }

    #[test]
    fn fermat_gf81() {
        fermat_by_brute_force(3, 4);
    }

    #[test]
    fn tables_match_polynomial_arithmetic() {
        for (p, k) in [(2u64, 3u32), (3, 2), (7, 2), (3, 4), (5, 2)] {
            let f = FiniteField::new(p, k).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.mul(a, b).0, f.mul_slow(a.0, b.0));
                }
            }
        }
    }

    #[test]
    fn field_axioms_and_frobenius() {
        for (p, k) in [(2u64, 2u32), (3, 2), (2, 3), (3, 4), (7, 2)] {
            let f = FiniteField::new(p, k).unwrap();
            let els: Vec<_> = f.elements().collect();
            let mut images: Vec<_> = els.iter().map(|&a| f.frobenius(a)).collect();
            images.sort();
            assert_eq!(images, els, "Frobenius is a bijection");
            for &a in &els {
                assert_eq!(f.add(a, f.neg(a)), f.zero());
                if a != f.zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
                }
                for &b in &els {
                    assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
                    assert_eq!(f.frobenius(f.mul(a, b)), f.mul(f.frobenius(a), f.frobenius(b)));
                }
            }
            // additive group has exponent p
            for &a in &els {
                let mut s = f.zero();
                for _ in 0..p {
                    s = f.add(s, a);
                }
                assert_eq!(s, f.zero());
            }
        }
    }

    #[test]
    fn coeffs_roundtrip() {
        let f = FiniteField::new(3, 4).unwrap();
        for a in f.elements() {
            assert_eq!(f.from_coeffs(&f.coeffs(a)), a);
            assert_eq!(f.coeffs(a).len(), 4);
        }
    }
}
