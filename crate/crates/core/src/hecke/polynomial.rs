//! Hecke polynomials `det(X - q^<rho,mu> r_mu(g))` pulled back through Satake.

use num_bigint::BigInt;
use serde::Serialize;

use crate::arith::LaurentHalfQ;

use super::satake::{HeckeElement, Satake, WeylInvariantPoly};
use super::weights::{dimension, exterior_powers, weight_multiplicities, Weights};
use super::HeckeError;

/// `X^k + A_(k-1) X^(k-1) + ... + A_0`, stored as `A_0..A_k`.
#[derive(Clone, Debug, Serialize)]
pub struct HeckePolynomial {
    pub q: u64,
    pub mu: Vec<i64>,
    pub coeffs: Vec<HeckeElement>,
    /// Satake images of the coefficients.
    pub images: Vec<WeylInvariantPoly>,
}

impl HeckePolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn render(&self) -> String {
        let k = self.degree();
        let mut parts = vec![];
        for i in (0..=k).rev() {
            let c = &self.coeffs[i];
            if c.is_empty() {
                continue;
            }
            let x = match i {
                0 => String::new(),
                1 => " X".into(),
                _ => format!(" X^{}", i),
            };
            let body = if i == k {
                "1".to_string()
            } else {
                format!("[{}]", c.render("T"))
            };
            parts.push(format!("{}{}", body, x));
        }
        parts.join(" + ")
    }
}

/// Orbit-sum expansion of a Weyl invariant weight multiset.
pub fn character(q: u64, rs: &super::weyl::RootSystem, w: &Weights) -> WeylInvariantPoly {
    let mut out = WeylInvariantPoly::zero(q);
    for (k, &m) in w {
        if rs.is_dominant(k) {
            out.add_term(k, LaurentHalfQ::constant(q, m as i64));
        }
    }
    out
}

/// Satake images `(-1)^i q^(i <rho,mu>) chi(Lambda^i V_mu)` of `A_(k-i)`,
/// listed as `A_0..A_k`.
pub fn coefficient_images(sat: &Satake, mu: &[i64]) -> Result<Vec<WeylInvariantPoly>, HeckeError> {
    let q = sat.q;
    let w = weight_multiplicities(&sat.rs, mu)?;
    let k = dimension(&w) as usize;
    let layers = exterior_powers(&w);
    let d2 = sat.rs.pairing_2rho(mu);
    let mut images = vec![WeylInvariantPoly::zero(q); k + 1];
    for (i, layer) in layers.iter().enumerate() {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        let scale = LaurentHalfQ::monomial_big(q, i as i64 * d2, BigInt::from(sign));
        images[k - i] = character(q, &sat.rs, layer).scale(&scale);
    }
    Ok(images)
}

pub fn hecke_polynomial(sat: &mut Satake, mu: &[i64]) -> Result<HeckePolynomial, HeckeError> {
    let images = coefficient_images(sat, mu)?;
    let coeffs = images
        .iter()
        .map(|f| sat.invert(f))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(HeckePolynomial {
        q: sat.q,
        mu: mu.to_vec(),
        coeffs,
        images,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Descriptor;
    use crate::hecke::SatakeMethod;

    #[test]
    fn gl2_quadratic() {
        for q in [2u64, 3] {
            let mut s = Satake::new(Descriptor::gl(2, q), SatakeMethod::Count, 10_000);
            let h = hecke_polynomial(&mut s, &[1, 0]).unwrap();
            assert_eq!(h.degree(), 2);
            assert_eq!(h.coeffs[2], HeckeElement::basis(q, &[0, 0]));
            assert_eq!(
                h.coeffs[1],
                HeckeElement::term(&[1, 0], LaurentHalfQ::constant(q, -1))
            );
            assert_eq!(
                h.coeffs[0],
                HeckeElement::term(&[1, 1], LaurentHalfQ::constant(q, q as i64))
            );
        }
    }

    #[test]
    fn gl1_linear() {
        let mut s = Satake::new(Descriptor::gl(1, 5), SatakeMethod::Count, 100);
        let h = hecke_polynomial(&mut s, &[1]).unwrap();
        assert_eq!(
            h.coeffs,
            vec![
                HeckeElement::term(&[1], LaurentHalfQ::constant(5, -1)),
                HeckeElement::basis(5, &[0])
            ]
        );
    }

    #[test]
    fn so3_minuscule_shape() {
        // X^2 - T_mu X + q.
        let q = 3;
        let mut s = Satake::new(
            Descriptor::so_odd_standard(3, q),
            SatakeMethod::Count,
            10_000,
        );
        let h = hecke_polynomial(&mut s, &[1, 0, -1]).unwrap();
        assert_eq!(
            h.coeffs[1],
            HeckeElement::term(&[1, 0, -1], LaurentHalfQ::constant(q, -1))
        );
        assert_eq!(
            h.coeffs[0],
            HeckeElement::term(&[0, 0, 0], LaurentHalfQ::constant(q, q as i64))
        );
    }

    #[test]
    fn so5_strict_round_trip() {
        let q = 3;
        let mut s = Satake::new(
            Descriptor::so_odd_standard(5, q),
            SatakeMethod::Macdonald,
            0,
        );
        let h = hecke_polynomial(&mut s, &[2, 1, 0, -1, -2]).unwrap();
        assert_eq!(h.degree(), 16);
        for (a, img) in h.coeffs.iter().zip(&h.images) {
            assert_eq!(&s.transform_element(a).unwrap(), img);
        }
    }

    #[test]
    fn minuscule_coefficients_are_integral_in_q_inverse() {
        for (g, mu) in [
            (Descriptor::gl(3, 2), vec![1, 0, 0]),
            (Descriptor::so_odd_standard(5, 3), vec![1, 0, 0, 0, -1]),
            (Descriptor::so_odd_standard(3, 5), vec![1, 0, -1]),
        ] {
            let mut s = Satake::new(g, SatakeMethod::Macdonald, 0);
            let h = hecke_polynomial(&mut s, &mu).unwrap();
            for c in &h.coeffs {
                for (_, v) in c.iter() {
                    assert!(v.has_integer_exponents(), "{}", v);
                }
            }
        }
    }
}
