//! Coefficient fields the Gröbner engine runs over.
//!
//! Rational-coefficient ideals (all generated systems) run over bare
//! `BigRational`; gaussian coefficients use [`Scalar`].

use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::{One, Zero};

use iwc_core::{FieldMode, Scalar};

pub trait Coeff: Clone + PartialEq + Debug {
    fn is_zero(&self) -> bool;
    fn one_like(&self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Self;
    fn from_scalar(s: &Scalar) -> Self;
    fn to_scalar(&self, mode: FieldMode) -> Scalar;
}

impl Coeff for BigRational {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        self.recip()
    }
    fn from_scalar(s: &Scalar) -> Self {
        s.as_rational().expect("real coefficient").clone()
    }
    fn to_scalar(&self, mode: FieldMode) -> Scalar {
        Scalar::from_rational(mode, self.clone())
    }
}

impl Coeff for Scalar {
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn one_like(&self) -> Self {
        Scalar::one(self.mode())
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        Scalar::inv(self).expect("nonzero")
    }
    fn from_scalar(s: &Scalar) -> Self {
        s.clone()
    }
    fn to_scalar(&self, mode: FieldMode) -> Scalar {
        self.with_mode(mode).expect("coefficient fits the field")
    }
}
