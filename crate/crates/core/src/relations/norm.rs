//! `sum_i A_i Tr_(H_m/H_(m+i))(x_(m+i)) = 0`, checked as
//! `Hep_mu(U_mu)(x_m) = 0` and tied to the traces by the comparison at
//! depth one, then weighted by `c(m, i)`.

use serde::Serialize;

use crate::arith::PMat;
use crate::cosets::{CosetVector, HeckeDecomposer};
use crate::groups::Scenario;
use crate::hecke::{
    apply_hep, hecke_polynomial, seed_certificate, ConstantTermCertificate, HeckePolynomial,
    Satake, SatakeMethod,
};

use super::{closed_cmi, comparison_check, ComparisonReport, RelationError};

#[derive(Clone, Debug, Serialize)]
pub struct NormReport {
    pub m: i64,
    pub mu: Vec<i64>,
    pub polynomial: String,
    pub degree: usize,
    /// `direct` expands `Hep(U)(x_m)`; `certificate` uses the constant-term
    /// certificate with `tau^m` as probe.
    pub mode: String,
    pub power_supports: Vec<usize>,
    pub residual_terms: Option<usize>,
    pub certificate: Option<ConstantTermCertificate>,
    pub relation_zero: bool,
    pub comparison: Option<ComparisonReport>,
    /// `c(m, i)` for `i = 0..=deg`, where a closed form is known and fits
    /// in 128 bits.
    pub weights: Vec<Option<u128>>,
}

impl NormReport {
    pub fn holds(&self) -> bool {
        self.relation_zero && self.comparison.as_ref().map_or(true, |c| c.holds())
    }
}

fn tau_m(s: &Scenario, m: i64) -> PMat {
    s.g.cocharacter_element(s.ring(), &s.mu.iter().map(|x| m * x).collect::<Vec<_>>())
}

/// Expected support sizes `q^(i <mu, 2 rho>)` of `U^i(x_m)`.
fn expansion_size(s: &Scenario, hep: &HeckePolynomial) -> u128 {
    let d = s.g.pairing_2rho(&s.mu) as u32;
    (0..=hep.degree() as u32)
        .map(|i| (s.p as u128).saturating_pow(i * d))
        .fold(0u128, |a, b| a.saturating_add(b))
}

pub fn norm_relation_check(
    s: &Scenario,
    m: i64,
    budget: usize,
) -> Result<NormReport, RelationError> {
    let mut sat = Satake::new(s.g.clone(), SatakeMethod::Macdonald, budget);
    let hep = hecke_polynomial(&mut sat, &s.mu)?;
    let start = tau_m(s, m);
    let (mode, power_supports, residual_terms, certificate, relation_zero) =
        if expansion_size(s, &hep) <= budget as u128 {
            let mut dec = HeckeDecomposer::new(s.g.clone(), budget);
            let (v, sizes) = apply_hep(&mut dec, &hep, &CosetVector::unit(&start)?)?;
            ("direct", sizes, Some(v.len()), None, v.is_zero())
        } else {
            let probes = vec![(format!("tau^{}", m), start)];
            let cert = seed_certificate(&mut sat, &hep, &probes, budget)?;
            let ok = cert.holds();
            ("certificate", vec![], None, Some(cert), ok)
        };
    let comparison = if m >= 1
        && (s.p as u128).pow(s.g.pairing_2rho(&s.mu) as u32) <= budget as u128
        && s.is_spherical()
    {
        Some(comparison_check(s, m, 1, budget)?)
    } else {
        None
    };
    let weights = (0..=hep.degree() as i64)
        .map(|i| if i == 0 { Some(1) } else { closed_cmi(s, m, i) })
        .collect();
    Ok(NormReport {
        m,
        mu: s.mu.clone(),
        polynomial: hep.render(),
        degree: hep.degree(),
        mode: mode.to_string(),
        power_supports,
        residual_terms,
        certificate,
        relation_zero,
        comparison,
        weights,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl2_expands_to_zero() {
        let s = Scenario::build("gl2", None, None).unwrap();
        let r = norm_relation_check(&s, 1, 100_000).unwrap();
        assert_eq!(r.mode, "direct");
        assert_eq!(r.residual_terms, Some(0));
        assert!(r.holds());
    }

    #[test]
    fn so3_with_comparison() {
        let s = Scenario::build("so3-u1", None, None).unwrap();
        let r = norm_relation_check(&s, 1, 100_000).unwrap();
        assert!(r.holds(), "{:?}", r);
        assert!(r.comparison.is_some());
        assert_eq!(r.weights, vec![Some(1), Some(1), Some(1)]);
    }

    #[test]
    fn so5_uses_the_certificate() {
        let s = Scenario::build("so5-u2", None, None).unwrap();
        let r = norm_relation_check(&s, 1, 100_000).unwrap();
        assert_eq!(r.mode, "certificate");
        assert!(r.holds(), "{:?}", r);
        assert_eq!(r.weights[1], Some(729));
    }
}
