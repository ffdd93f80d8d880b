//! Small finite fields GF(p^k) backed by dense operation tables.
//!
//! Elements are integer codes `0..q` where the code `c_0 + c_1 p + ... +
//! c_{k-1} p^{k-1}` stands for the polynomial `c_0 + c_1 x + ...` reduced
//! modulo a fixed monic irreducible of degree `k`.

use crate::error::{Error, Result};

/// Largest field order supported.
pub const MAX_ORDER: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    p: u32,
    k: u32,
    q: u32,
    /// Monic modulus, coefficients from `x^0` up to `x^k`.
    modulus: Vec<u32>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn digits(mut m: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for c in out.iter_mut() {
        *c = m % p;
        m /= p;
    }
    out
}

/// Remainder of `num` modulo a monic `den` over GF(p); coefficients low to high.
fn poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    while r.len() > dd {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dd;
        if lead != 0 {
            for (i, &c) in den.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p * p - lead * c) % p;
            }
        }
        r.pop();
    }
    r
}

/// Monic polynomial of degree `deg` with lower coefficients given by the digits of `m`.
fn monic(m: u32, p: u32, deg: usize) -> Vec<u32> {
    let mut c = digits(m, p, deg);
    c.push(1);
    c
}

fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let k = poly.len() - 1;
    for d in 1..=k / 2 {
        for m in 0..p.pow(d as u32) {
            let f = monic(m, p, d);
            if poly_rem(poly, &f, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl Field {
    /// Builds GF(p^k) with the lexicographically least monic irreducible
    /// modulus (coefficients compared from `x^{k-1}` down to `x^0`).
    pub fn new(p: u32, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if !(1..=4).contains(&k) {
            return Err(Error::InvalidField(format!("degree {k} not in 1..=4")));
        }
        let q = p.pow(k);
        if q > MAX_ORDER {
            return Err(Error::InvalidField(format!("order {q} exceeds {MAX_ORDER}")));
        }
        let modulus = (0..q)
            .map(|m| monic(m, p, k as usize))
            .find(|f| is_irreducible(f, p))
            .expect("an irreducible polynomial exists for every degree");

        let qs = q as usize;
        let mut add = vec![0; qs * qs];
        let mut mul = vec![0; qs * qs];
        let encode = |c: &[u32]| c.iter().rev().fold(0, |acc, &d| acc * p + d);
        for x in 0..q {
            let cx = digits(x, p, k as usize);
            for y in 0..q {
                let cy = digits(y, p, k as usize);
                let sum: Vec<u32> = cx.iter().zip(&cy).map(|(a, b)| (a + b) % p).collect();
                add[(x * q + y) as usize] = encode(&sum);
                let mut prod = vec![0; 2 * k as usize - 1];
                for (i, a) in cx.iter().enumerate() {
                    for (j, b) in cy.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + a * b) % p;
                    }
                }
                let rem = poly_rem(&prod, &modulus, p);
                mul[(x * q + y) as usize] = encode(&rem);
            }
        }
        let neg = (0..q)
            .map(|x| (0..q).find(|&y| add[(x * q + y) as usize] == 0).unwrap())
            .collect();
        let inv = (0..q)
            .map(|x| {
                (1..q)
                    .find(|&y| mul[(x * q + y) as usize] == 1)
                    .unwrap_or(0)
            })
            .collect();
        Ok(Self {
            p,
            k,
            q,
            modulus,
            add,
            mul,
            neg,
            inv,
        })
    }

    /// Builds the field of order `q`, which must be a prime power.
    pub fn with_order(q: u32) -> Result<Self> {
        for p in 2..=q {
            if q.is_multiple_of(p) {
                let mut k = 0;
                let mut m = q;
                while m.is_multiple_of(p) {
                    m /= p;
                    k += 1;
                }
                if m != 1 {
                    return Err(Error::InvalidField(format!("{q} is not a prime power")));
                }
                return Self::new(p, k);
            }
        }
        Err(Error::InvalidField(format!("{q} is not a prime power")))
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, x: u32, y: u32) -> u32 {
        self.add[(x * self.q + y) as usize]
    }

    #[inline]
    pub fn mul(&self, x: u32, y: u32) -> u32 {
        self.mul[(x * self.q + y) as usize]
    }

    #[inline]
    pub fn neg(&self, x: u32) -> u32 {
        self.neg[x as usize]
    }

    #[inline]
    pub fn sub(&self, x: u32, y: u32) -> u32 {
        self.add(x, self.neg(y))
    }

    pub fn inv(&self, x: u32) -> Result<u32> {
        if x == 0 {
            Err(Error::NotInvertible(0))
        } else {
            Ok(self.inv[x as usize])
        }
    }

    pub fn pow(&self, x: u32, e: u32) -> u32 {
        (0..e).fold(1, |acc, _| self.mul(acc, x))
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }

    pub fn dot(&self, a: &[u32], b: &[u32]) -> u32 {
        a.iter()
            .zip(b)
            .fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    /// Base-`q` positional code of a coordinate vector, most significant first.
    pub fn encode(&self, coords: &[u32]) -> usize {
        coords
            .iter()
            .fold(0usize, |acc, &c| acc * self.q as usize + c as usize)
    }

    pub fn decode(&self, mut code: usize, n: usize) -> Vec<u32> {
        let q = self.q as usize;
        let mut out = vec![0; n];
        for c in out.iter_mut().rev() {
            *c = (code % q) as u32;
            code /= q;
        }
        out
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, x: u32) -> Option<u32> {
        if x == 0 {
            return None;
        }
        let mut acc = x;
        let mut ord = 1;
        while acc != 1 {
            acc = self.mul(acc, x);
            ord += 1;
        }
        Some(ord)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_fields() -> Vec<Field> {
        [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (2, 3), (3, 2), (2, 4), (13, 1)]
            .iter()
            .map(|&(p, k)| Field::new(p, k).unwrap())
            .collect()
    }

    #[test]
    fn gf2_and_gf5() {
        let f = Field::new(2, 1).unwrap();
        assert_eq!(f.order(), 2);
        assert_eq!(f.add(1, 1), 0);
        let f5 = Field::new(5, 1).unwrap();
        assert_eq!(f5.mul(3, 4), 2);
        assert_eq!(f5.inv(2).unwrap(), 3);
    }

    #[test]
    fn gf4_modulus_is_unique_quadratic() {
        // Monic quadratics over GF(2): x^2, x^2+1, x^2+x, x^2+x+1; only the last has no root.
        let roots = |c0: u32, c1: u32| (0..2).any(|x| (x * x + c1 * x + c0).is_multiple_of(2));
        let irreducible: Vec<_> = (0..4).filter(|m| !roots(m % 2, m / 2)).collect();
        assert_eq!(irreducible, vec![3]);
        let f = Field::new(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        // x * x = x + 1, codes: x = 2, x + 1 = 3
        assert_eq!(f.mul(2, 2), 3);
    }

    #[test]
    fn lex_least_moduli() {
        assert_eq!(Field::new(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(Field::new(2, 4).unwrap().modulus(), &[1, 1, 0, 0, 1]);
        assert_eq!(Field::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Field::new(4, 1).is_err());
        assert!(Field::new(2, 5).is_err());
        assert!(Field::new(2, 0).is_err());
        assert!(Field::new(5, 3).is_err());
        assert!(Field::with_order(6).is_err());
        assert_eq!(Field::new(2, 2).unwrap().inv(0), Err(Error::NotInvertible(0)));
    }

    #[test]
    fn axioms_exhaustive() {
        for f in small_fields().into_iter().filter(|f| f.order() <= 16) {
            let q = f.order();
            for a in 0..q {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                for b in 0..q {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in 0..q {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn multiplicative_group_is_cyclic() {
        for f in small_fields() {
            let q = f.order();
            assert!(
                (1..q).any(|x| f.multiplicative_order(x) == Some(q - 1)),
                "no generator in GF({q})"
            );
        }
    }

    #[test]
    fn frobenius_is_automorphism() {
        for f in small_fields().into_iter().filter(|f| f.order() <= 16) {
            let p = f.characteristic();
            let frob = |x| f.pow(x, p);
            let mut image: Vec<_> = f.elements().map(frob).collect();
            image.sort();
            assert_eq!(image, f.elements().collect::<Vec<_>>());
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(frob(f.add(a, b)), f.add(frob(a), frob(b)));
                    assert_eq!(frob(f.mul(a, b)), f.mul(frob(a), frob(b)));
                }
            }
        }
    }

    #[test]
    fn positional_encoding_round_trips() {
        let f = Field::new(2, 2).unwrap();
        for code in 0..64 {
            let v = f.decode(code, 3);
            assert_eq!(f.encode(&v), code);
        }
        assert_eq!(f.decode(1, 2), vec![0, 1]);
    }
}
