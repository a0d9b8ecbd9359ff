//! A minimal ring abstraction so that matrix algorithms (characteristic
//! polynomial, pfaffian) can run both over the field and over dual numbers,
//! which provide exact directional derivatives in one evaluation.

use crate::Scalar;

pub trait RingElem: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn is_zero(&self) -> bool;
    fn from_scalar(s: &Scalar) -> Self;
    /// Exact division by a nonzero integer (valid in characteristic 0).
    fn div_int(&self, k: i64) -> Self;
    /// Multiplicative inverse when one exists.
    fn try_inv(&self) -> Option<Self>;
}

impl RingElem for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn add(&self, o: &Self) -> Self {
        Scalar::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Scalar::sub(self, o)
    }
    fn neg(&self) -> Self {
        Scalar::neg(self)
    }
    fn mul(&self, o: &Self) -> Self {
        Scalar::mul(self, o)
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn from_scalar(s: &Scalar) -> Self {
        s.clone()
    }
    fn div_int(&self, k: i64) -> Self {
        Scalar::div_int(self, k)
    }
    fn try_inv(&self) -> Option<Self> {
        Scalar::inv(self)
    }
}

/// val + eps*der with eps^2 = 0.
#[derive(Clone, PartialEq, Debug)]
pub struct Dual {
    pub val: Scalar,
    pub der: Scalar,
}

impl Dual {
    pub fn constant(s: &Scalar) -> Dual {
        Dual {
            val: s.clone(),
            der: Scalar::zero(),
        }
    }

    pub fn variable(val: &Scalar, der: &Scalar) -> Dual {
        Dual {
            val: val.clone(),
            der: der.clone(),
        }
    }
}

impl RingElem for Dual {
    fn zero() -> Self {
        Dual::constant(&Scalar::zero())
    }
    fn one() -> Self {
        Dual::constant(&Scalar::one())
    }
    fn add(&self, o: &Self) -> Self {
        Dual {
            val: self.val.add(&o.val),
            der: self.der.add(&o.der),
        }
    }
    fn sub(&self, o: &Self) -> Self {
        Dual {
            val: self.val.sub(&o.val),
            der: self.der.sub(&o.der),
        }
    }
    fn neg(&self) -> Self {
        Dual {
            val: self.val.neg(),
            der: self.der.neg(),
        }
    }
    fn mul(&self, o: &Self) -> Self {
        Dual {
            val: self.val.mul(&o.val),
            der: self.val.mul(&o.der).add(&self.der.mul(&o.val)),
        }
    }
    fn is_zero(&self) -> bool {
        self.val.is_zero() && self.der.is_zero()
    }
    fn from_scalar(s: &Scalar) -> Self {
        Dual::constant(s)
    }
    fn div_int(&self, k: i64) -> Self {
        Dual {
            val: self.val.div_int(k),
            der: self.der.div_int(k),
        }
    }
    fn try_inv(&self) -> Option<Self> {
        // (a + eps b)^-1 = a^-1 - eps a^-2 b, needs a invertible.
        let ai = self.val.inv()?;
        let der = ai.mul(&self.der).mul(&ai).neg();
        Some(Dual { val: ai, der })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_product_rule() {
        // d/dt (3 + t)(5 + 2t) at t=0 is 3*2 + 1*5 = 11.
        let a = Dual::variable(&Scalar::from_int(3), &Scalar::from_int(1));
        let b = Dual::variable(&Scalar::from_int(5), &Scalar::from_int(2));
        let p = a.mul(&b);
        assert_eq!(p.val, Scalar::from_int(15));
        assert_eq!(p.der, Scalar::from_int(11));
    }

    #[test]
    fn dual_inverse() {
        let a = Dual::variable(&Scalar::from_int(2), &Scalar::from_int(3));
        let inv = a.try_inv().unwrap();
        let prod = a.mul(&inv);
        assert!(prod.val.is_one() && prod.der.is_zero());
        let sing = Dual::variable(&Scalar::zero(), &Scalar::one());
        assert!(sing.try_inv().is_none());
    }
}
