//! Arithmetic in F_q and in the quadratic extension F_{q^2} = F_q[x]/(f),
//! with f the lexicographically first monic irreducible quadratic
//! (coefficients ordered (x-coefficient, constant)). Enough field theory for
//! norm graphs; no external algebra dependency.

use super::ConstructError;
use crate::constructions::primes::is_prime;

/// An element u + v·x of F_{q^2}, coefficients reduced mod q.
pub type Fq2 = (u64, u64);

/// The quadratic extension field F_{q^2} for a prime q.
#[derive(Debug, Clone, Copy)]
pub struct QuadraticField {
    pub q: u64,
    /// modulus x^2 + f1·x + f0
    pub f1: u64,
    pub f0: u64,
}

impl QuadraticField {
    pub fn new(q: u64) -> Result<Self, ConstructError> {
        if !is_prime(q) {
            return Err(ConstructError::NotPrime(q));
        }
        for f1 in 0..q {
            for f0 in 0..q {
                let has_root = (0..q).any(|x| (x * x + f1 * x + f0) % q == 0);
                if !has_root {
                    return Ok(QuadraticField { q, f1, f0 });
                }
            }
        }
        unreachable!("every prime field admits an irreducible quadratic");
    }

    pub fn add(&self, a: Fq2, b: Fq2) -> Fq2 {
        ((a.0 + b.0) % self.q, (a.1 + b.1) % self.q)
    }

    pub fn sub(&self, a: Fq2, b: Fq2) -> Fq2 {
        (
            (a.0 + self.q - b.0) % self.q,
            (a.1 + self.q - b.1) % self.q,
        )
    }

    pub fn mul(&self, a: Fq2, b: Fq2) -> Fq2 {
        let q = self.q;
        // (u1 + v1 x)(u2 + v2 x), with x^2 = -f1 x - f0
        let uu = a.0 * b.0 % q;
        let vv = a.1 * b.1 % q;
        let cross = (a.0 * b.1 + a.1 * b.0) % q;
        let c0 = (uu + vv * (q - self.f0)) % q;
        let c1 = (cross + vv * (q - self.f1)) % q;
        (c0, c1)
    }

    pub fn pow(&self, mut base: Fq2, mut e: u64) -> Fq2 {
        let mut acc: Fq2 = (1, 0);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// The field norm N(x) = x^(q+1), always an element of the base field.
    pub fn norm(&self, a: Fq2) -> u64 {
        let n = self.pow(a, self.q + 1);
        debug_assert_eq!(n.1, 0, "norm must land in the base field");
        n.0
    }

    /// All q^2 elements in the fixed enumeration order (u major, v minor).
    pub fn elements(&self) -> impl Iterator<Item = Fq2> + '_ {
        (0..self.q).flat_map(move |u| (0..self.q).map(move |v| (u, v)))
    }

    /// Index of an element in the [`Self::elements`] order.
    pub fn index_of(&self, a: Fq2) -> usize {
        (a.0 * self.q + a.1) as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modulus_is_lexicographically_first() {
        // q=3: x^2 + 1 (x^2 is reducible, -1 is not a square mod 3)
        let f = QuadraticField::new(3).unwrap();
        assert_eq!((f.f1, f.f0), (0, 1));
        // q=5: x^2 + 2 (x^2, x^2+1 = (x+2)(x+3) reducible)
        let f = QuadraticField::new(5).unwrap();
        assert_eq!((f.f1, f.f0), (0, 2));
    }

    #[test]
    fn rejects_composite_order() {
        assert!(matches!(QuadraticField::new(4), Err(ConstructError::NotPrime(4))));
    }

    #[test]
    fn norm_is_multiplicative_and_surjective() {
        for q in [3u64, 5, 7] {
            let f = QuadraticField::new(q).unwrap();
            let els: Vec<Fq2> = f.elements().collect();
            for &a in &els[..els.len().min(12)] {
                for &b in &els[..els.len().min(12)] {
                    assert_eq!(
                        f.norm(f.mul(a, b)),
                        f.norm(a) * f.norm(b) % q,
                        "norm multiplicative at q={q}"
                    );
                }
            }
            // each nonzero norm value is hit exactly (q^2-1)/(q-1) = q+1 times
            let mut counts = vec![0usize; q as usize];
            for &a in &els {
                counts[f.norm(a) as usize] += 1;
            }
            assert_eq!(counts[0], 1);
            for &c in &counts[1..] {
                assert_eq!(c, (q + 1) as usize);
            }
        }
    }
}
