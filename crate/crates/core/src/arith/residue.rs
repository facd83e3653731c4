use std::fmt;

use super::ArithError;

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Inverse of `a` modulo `m` by the extended Euclidean algorithm.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// Largest exponent `n` with `p^n < 2^63`.
pub fn max_precision(p: u64) -> u32 {
    let mut n = 0;
    let mut m: u128 = 1;
    while m * (p as u128) < (1u128 << 63) {
        m *= p as u128;
        n += 1;
    }
    n
}

/// An element of `Z/p^n`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct ResidueElement {
    p: u64,
    n: u32,
    m: u64,
    v: u64,
}

impl ResidueElement {
    pub fn modulus_for(p: u64, n: u32) -> Result<u64, ArithError> {
        if n > max_precision(p) {
            return Err(ArithError::PrecisionTooLarge { p, n });
        }
        Ok(p.pow(n))
    }

    pub fn new(p: u64, n: u32, v: u64) -> Result<Self, ArithError> {
        let m = Self::modulus_for(p, n)?;
        Ok(ResidueElement { p, n, m, v: v % m })
    }

    pub fn from_i64(p: u64, n: u32, v: i64) -> Result<Self, ArithError> {
        let m = Self::modulus_for(p, n)?;
        Ok(ResidueElement {
            p,
            n,
            m,
            v: v.rem_euclid(m as i64) as u64,
        })
    }

    pub fn value(&self) -> u64 {
        self.v
    }
    pub fn precision(&self) -> u32 {
        self.n
    }
    pub fn prime(&self) -> u64 {
        self.p
    }
    pub fn modulus(&self) -> u64 {
        self.m
    }

    fn with(&self, v: u64) -> Self {
        ResidueElement { v, ..*self }
    }

    pub fn add(&self, o: &Self) -> Self {
        debug_assert_eq!(self.m, o.m);
        self.with(((self.v as u128 + o.v as u128) % self.m as u128) as u64)
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.with(((self.v as u128 + self.m as u128 - o.v as u128) % self.m as u128) as u64)
    }
    pub fn neg(&self) -> Self {
        self.with((self.m - self.v) % self.m)
    }
    pub fn mul(&self, o: &Self) -> Self {
        self.with(mul_mod(self.v, o.v, self.m))
    }
    pub fn pow(&self, e: u64) -> Self {
        self.with(pow_mod(self.v, e, self.m))
    }
    pub fn inv(&self) -> Option<Self> {
        inv_mod(self.v, self.m).map(|v| self.with(v))
    }
    pub fn is_unit(&self) -> bool {
        self.v % self.p != 0
    }

    /// Valuation, capped at the precision for zero.
    pub fn valuation(&self) -> u32 {
        if self.v == 0 {
            return self.n;
        }
        let mut k = 0;
        let mut v = self.v;
        while v % self.p == 0 {
            v /= self.p;
            k += 1;
        }
        k
    }
}

impl fmt::Display for ResidueElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}^{}", self.v, self.p, self.n)
    }
}

/// Teichmüller lift of a nonzero residue `t` of `F_p` to `Z/p^n`, by Newton
/// iteration on `x^(p-1) = 1`.
pub fn teichmuller(p: u64, t: u64, n: u32) -> Result<ResidueElement, ArithError> {
    if t % p == 0 {
        return Err(ArithError::ZeroInput);
    }
    let m = ResidueElement::modulus_for(p, n)?;
    let one = ResidueElement::new(p, n, 1)?;
    let e = ResidueElement::new(p, n, (p - 1) % m)?;
    let mut x = ResidueElement::new(p, n, t % p)?;
    // Each step doubles the number of correct digits.
    let mut correct = 1;
    while correct < n {
        let xe = x.pow(p - 1);
        let f = xe.sub(&one);
        let fp = e.mul(&x.pow(p - 2));
        let step = f.mul(&fp.inv().ok_or(ArithError::NotInvertible)?);
        x = x.sub(&step);
        correct *= 2;
    }
    Ok(x)
}

/// An element `a + b*w` of `Z/p^n[w]/(w^2 - u)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct QuadResidue {
    pub a: u64,
    pub b: u64,
    pub u: u64,
    pub m: u64,
}

impl QuadResidue {
    pub fn new(a: u64, b: u64, u: u64, m: u64) -> Self {
        QuadResidue {
            a: a % m,
            b: b % m,
            u: u % m,
            m,
        }
    }
    pub fn one(u: u64, m: u64) -> Self {
        Self::new(1, 0, u, m)
    }
    pub fn add(&self, o: &Self) -> Self {
        Self::new(
            ((self.a as u128 + o.a as u128) % self.m as u128) as u64,
            ((self.b as u128 + o.b as u128) % self.m as u128) as u64,
            self.u,
            self.m,
        )
    }
    pub fn neg(&self) -> Self {
        Self::new(
            (self.m - self.a) % self.m,
            (self.m - self.b) % self.m,
            self.u,
            self.m,
        )
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    pub fn mul(&self, o: &Self) -> Self {
        let m = self.m;
        let aa = mul_mod(self.a, o.a, m);
        let bb = mul_mod(mul_mod(self.b, o.b, m), self.u, m);
        let ab = mul_mod(self.a, o.b, m);
        let ba = mul_mod(self.b, o.a, m);
        Self::new(
            ((aa as u128 + bb as u128) % m as u128) as u64,
            ((ab as u128 + ba as u128) % m as u128) as u64,
            self.u,
            m,
        )
    }
    pub fn conj(&self) -> Self {
        Self::new(self.a, (self.m - self.b) % self.m, self.u, self.m)
    }
    /// `x * conj(x)`, an element of the base ring.
    pub fn norm(&self) -> u64 {
        let m = self.m;
        let a2 = mul_mod(self.a, self.a, m);
        let b2u = mul_mod(mul_mod(self.b, self.b, m), self.u, m);
        ((a2 as u128 + m as u128 - b2u as u128) % m as u128) as u64
    }
    pub fn inv(&self) -> Option<Self> {
        let ni = inv_mod(self.norm(), self.m)?;
        let c = self.conj();
        Some(Self::new(
            mul_mod(c.a, ni, self.m),
            mul_mod(c.b, ni, self.m),
            self.u,
            self.m,
        ))
    }
    pub fn pow(&self, mut e: u64) -> Self {
        let mut r = Self::one(self.u, self.m);
        let mut b = *self;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        r
    }
    pub fn is_one(&self) -> bool {
        self.a == 1 % self.m && self.b == 0
    }
    /// Whether `x ≡ 1 mod p^c`.
    pub fn is_one_mod(&self, p: u64, c: u32) -> bool {
        let pc = p.pow(c);
        (self.a + self.m - 1) % pc == 0 && self.b % pc == 0
    }
}

/// Teichmüller lift of a nonzero element of `F_{p^2} = F_p[w]/(w^2-u)` to
/// `Z/p^n[w]`, by Newton iteration on `x^(q-1) = 1` with `q = p^2`.
pub fn teichmuller_quad(p: u64, u: u64, t: (u64, u64), n: u32) -> Result<QuadResidue, ArithError> {
    if t.0 % p == 0 && t.1 % p == 0 {
        return Err(ArithError::ZeroInput);
    }
    let m = ResidueElement::modulus_for(p, n)?;
    let q = p * p;
    let mut x = QuadResidue::new(t.0 % p, t.1 % p, u, m);
    let one = QuadResidue::one(u, m);
    let e = QuadResidue::new((q - 1) % m, 0, u, m);
    let mut correct = 1;
    while correct < n {
        let f = x.pow(q - 1).sub(&one);
        let fp = e.mul(&x.pow(q - 2));
        x = x.sub(&f.mul(&fp.inv().ok_or(ArithError::NotInvertible)?));
        correct *= 2;
    }
    Ok(x)
}

/// Smallest positive non-residue modulo an odd prime `p`.
pub fn non_residue(p: u64) -> u64 {
    (2..p)
        .find(|&a| pow_mod(a, (p - 1) / 2, p) == p - 1)
        .expect("odd prime")
}

/// A generator of `(Z/p^2)^*` for odd `p`, hence a topological generator of `Z_p^*`.
pub fn primitive_root_p2(p: u64) -> u64 {
    let m = p * p;
    let order = p * (p - 1);
    let mut factors = vec![];
    let mut r = order;
    let mut d = 2;
    while d * d <= r {
        if r % d == 0 {
            factors.push(d);
            while r % d == 0 {
                r /= d;
            }
        }
        d += 1;
    }
    if r > 1 {
        factors.push(r);
    }
    (2..m)
        .find(|&g| g % p != 0 && factors.iter().all(|&f| pow_mod(g, order / f, m) != 1))
        .expect("cyclic group")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn teichmuller_examples() {
        assert_eq!(teichmuller(3, 2, 2).unwrap().value(), 8);
        assert_eq!(teichmuller(5, 2, 2).unwrap().value(), 7);
        assert_eq!(teichmuller(3, 1, 4).unwrap().value(), 1);
        assert!(matches!(teichmuller(3, 0, 2), Err(ArithError::ZeroInput)));
    }

    #[test]
    fn teichmuller_is_root_of_unity() {
        for p in [3u64, 5, 7] {
            for t in 1..p {
                let w = teichmuller(p, t, 10).unwrap();
                assert_eq!(w.pow(p - 1).value(), 1);
                assert_eq!(w.value() % p, t);
            }
        }
    }

    #[test]
    fn quad_teichmuller_order() {
        let u = non_residue(3);
        let w = teichmuller_quad(3, u, (1, 1), 6).unwrap();
        assert!(w.pow(8).is_one());
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root_p2(3), 2);
        assert_eq!(primitive_root_p2(5), 2);
        assert_eq!(non_residue(3), 2);
        assert_eq!(non_residue(5), 2);
    }

    #[test]
    fn precision_limits() {
        assert_eq!(max_precision(3), 39);
        assert_eq!(max_precision(2), 62);
        assert_eq!(max_precision(5), 27);
    }
}
