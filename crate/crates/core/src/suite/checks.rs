use std::time::Instant;

use num_rational::Rational64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{ExactScalar, LaurentHalfQ, Matrix, PMat};
use crate::cosets::{CosetError, HeckeDecomposer};
use crate::filtrations::{
    counterexample_search, diagonal_swap_transfer, family_check, lattice_action, property_a_check,
    reduction, same_lattice, scalar_product, scalar_product_graded, scalar_product_split,
    DiagonalBase, Filtration, FiltrationError, Fp, MainExample, PairModel, SplitFiltration,
};
use crate::groups::{Descriptor, GroupError, Scenario};
use crate::hecke::{
    box_cocharacters, default_probes, hecke_polynomial, seed_certificate, seed_direct,
    HeckeElement, HeckeError, HeckePolynomial, Satake, SatakeMethod,
};
use crate::relations::{
    c_mi, comparison_check, conductor_within, divisibility_check, level_count, norm_relation_check,
    ordinary_chain_check, ordinary_quadratic, stabilizer_check, symmetric_pair_check, tame_lift,
    RelationError,
};

use super::{Check, Config, Record, SuiteError};

/// How a computation ended short of a verdict.
pub(crate) enum Failure {
    Inconclusive(String),
    Falsified(String),
}

impl From<RelationError> for Failure {
    fn from(e: RelationError) -> Self {
        match e {
            RelationError::StabilizerNotDividing(_) | RelationError::Inconsistent(_) => {
                Failure::Falsified(e.to_string())
            }
            e => Failure::Inconclusive(e.to_string()),
        }
    }
}

impl From<HeckeError> for Failure {
    fn from(e: HeckeError) -> Self {
        Failure::Inconclusive(e.to_string())
    }
}

impl From<CosetError> for Failure {
    fn from(e: CosetError) -> Self {
        Failure::Inconclusive(e.to_string())
    }
}

impl From<FiltrationError> for Failure {
    fn from(e: FiltrationError) -> Self {
        Failure::Inconclusive(e.to_string())
    }
}

fn guarded(rec: Record, f: impl FnOnce(Record) -> Result<Record, Failure>) -> Record {
    let start = Instant::now();
    let fallback = rec.clone();
    let out = match f(rec) {
        Ok(r) => r,
        Err(Failure::Inconclusive(why)) => fallback.inconclusive(why),
        Err(Failure::Falsified(w)) => fallback.decide(false, || w),
    };
    out.timed(start)
}

/// Positive-family models addressable by name.
pub const FAMILIES: &[&str] = &["gl2-sp4", "so3-gl3", "so2so3-so5", "so3so3-so6"];

pub fn family(name: &str, p: u64) -> Option<PairModel> {
    match name {
        "gl2-sp4" => Some(PairModel::gl2_in_sp4(p)),
        "so3-gl3" => Some(PairModel::so3_in_gl3(p)),
        "so2so3-so5" => Some(PairModel::so2_so3_in_so5(p)),
        "so3so3-so6" => Some(PairModel::so3_so3_in_so6(p)),
        _ => None,
    }
}

pub(crate) fn scenario(cfg: &Config, default: &str) -> Result<Scenario, SuiteError> {
    let name = cfg.scenario.as_deref().unwrap_or(default);
    Scenario::build(name, cfg.prime()?, cfg.mu.clone()).map_err(|e| match e {
        GroupError::UnknownScenario(n) => SuiteError::UnknownScenario(n),
        e => SuiteError::Config(format!("scenario {}: {}", name, e)),
    })
}

fn tag(s: &Scenario) -> String {
    format!("{} q={} mu={:?}", s.name(), s.p, s.mu)
}

/// `sum_i q^(i <mu, 2 rho>)`, the number of cosets in a direct expansion.
fn expansion_size(g: &Descriptor, mu: &[i64], hep: &HeckePolynomial) -> u128 {
    let d = g.pairing_2rho(mu) as u32;
    (0..=hep.degree() as u32)
        .map(|i| (g.p as u128).saturating_pow(i * d))
        .fold(0u128, |a, b| a.saturating_add(b))
}

#[derive(Serialize)]
struct SeedCounts<'a> {
    polynomial: String,
    degree: usize,
    mode: &'a str,
    expansion_size: String,
    probes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    direct: Option<Vec<crate::hecke::ProbeResult>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<crate::hecke::ConstantTermCertificate>,
}

pub fn seed_check(cfg: &Config) -> Result<Vec<Record>, SuiteError> {
    let s = scenario(cfg, "gl2")?;
    let budget = cfg.budget();
    let rec = Record::new(
        format!("seed-check {}", tag(&s)),
        Check::SeedCheck.anchor(),
        Some(s.name()),
    );
    Ok(vec![guarded(rec, |rec| {
        let mut sat = Satake::new(s.g.clone(), SatakeMethod::Macdonald, budget);
        let hep = hecke_polynomial(&mut sat, &s.mu)?;
        let probes = default_probes(&s.g);
        let size = expansion_size(&s.g, &s.mu, &hep);
        let mut counts = SeedCounts {
            polynomial: hep.render(),
            degree: hep.degree(),
            mode: "direct",
            expansion_size: size.to_string(),
            probes: probes.iter().map(|(n, _)| n.clone()).collect(),
            direct: None,
            certificate: None,
        };
        if size.saturating_mul(probes.len() as u128) <= budget as u128 {
            let mut dec = HeckeDecomposer::new(s.g.clone(), budget);
            let res = seed_direct(&mut dec, &hep, &probes)?;
            let bad = res.iter().find(|r| !r.zero).map(|r| {
                format!(
                    "probe {}: Hep(U)(1_bK) has {} nonzero cosets",
                    r.probe, r.residual_terms
                )
            });
            counts.direct = Some(res);
            Ok(rec.counts(&counts).decide(bad.is_none(), || bad.unwrap()))
        } else {
            let cert = seed_certificate(&mut sat, &hep, &probes, budget)?;
            let ok = cert.holds();
            let w = format!(
                "certificate: constant term zero {}, Iwahori invariant {}, triangular {}, equivariant {}",
                cert.constant_term_zero, cert.iwahori_invariant, cert.triangular, cert.equivariant
            );
            counts.mode = "certificate";
            counts.certificate = Some(cert);
            Ok(rec.counts(&counts).decide(ok, || w))
        }
    })])
}

#[derive(Serialize)]
struct HeckePolyCounts {
    polynomial: String,
    degree: usize,
    round_trip: bool,
    /// Point-count and closed-form Satake routes give the same polynomial.
    methods_agree: Option<bool>,
    /// `X^2 - T_(1,0) X + q T_(1,1)` for `GL(2)`, `mu = (1, 0)`.
    expected_form: Option<bool>,
}

fn gl2_expected(q: u64) -> Vec<HeckeElement> {
    vec![
        HeckeElement::term(&[1, 1], LaurentHalfQ::constant(q, q as i64)),
        HeckeElement::term(&[1, 0], LaurentHalfQ::constant(q, -1)),
        HeckeElement::basis(q, &[0, 0]),
    ]
}

pub fn hecke_poly(cfg: &Config) -> Result<Vec<Record>, SuiteError> {
    let s = scenario(cfg, "gl2")?;
    let budget = cfg.budget();
    let rec = Record::new(
        format!("hecke-poly {}", tag(&s)),
        Check::HeckePoly.anchor(),
        Some(s.name()),
    );
    Ok(vec![guarded(rec, |rec| {
        let mut sat = Satake::new(s.g.clone(), SatakeMethod::Macdonald, budget);
        let hep = hecke_polynomial(&mut sat, &s.mu)?;
        let mut round_trip = true;
        for (a, img) in hep.coeffs.iter().zip(&hep.images) {
            round_trip &= &sat.transform_element(a)? == img;
        }
        let mut counted = Satake::new(s.g.clone(), SatakeMethod::Count, budget.min(200_000));
        let methods_agree = match hecke_polynomial(&mut counted, &s.mu) {
            Ok(h) => Some(h.coeffs == hep.coeffs),
            Err(e) => {
                log::info!("point-count route unavailable: {}", e);
                None
            }
        };
        let is_gl2 =
            s.g.dim == 2 && s.info.kind == crate::groups::ScenarioKind::Torus && s.mu == [1, 0];
        let expected_form = is_gl2.then(|| hep.coeffs == gl2_expected(s.p));
        let counts = HeckePolyCounts {
            polynomial: hep.render(),
            degree: hep.degree(),
            round_trip,
            methods_agree,
            expected_form,
        };
        let ok = round_trip && methods_agree != Some(false) && expected_form != Some(false);
        let w = format!(
            "{} (round trip {}, routes agree {:?}, expected form {:?})",
            counts.polynomial, round_trip, methods_agree, expected_form
        );
        Ok(rec.counts(&counts).decide(ok, || w))
    })])
}

#[derive(Serialize)]
struct SatakeCounts {
    lambdas: Vec<Vec<i64>>,
    round_trips: usize,
    counted: usize,
    count_agrees: usize,
}

pub fn satake(cfg: &Config) -> Result<Vec<Record>, SuiteError> {
    let s = scenario(cfg, "gl2")?;
    let budget = cfg.budget().min(200_000);
    let rec = Record::new(
        format!("satake {} q={}", s.name(), s.p),
        Check::Satake.anchor(),
        Some(s.name()),
    );
    Ok(vec![guarded(rec, |rec| {
        let mut sat = Satake::new(s.g.clone(), SatakeMethod::Count, budget);
        let lambdas: Vec<Vec<i64>> = box_cocharacters(&s.g, 2)
            .into_iter()
            .filter(|l| s.g.is_dominant(l))
            .collect();
        let mut c = SatakeCounts {
            lambdas: vec![],
            round_trips: 0,
            counted: 0,
            count_agrees: 0,
        };
        let mut witness = None;
        for l in lambdas.iter().take(40) {
            let f = sat.transform_with(l, SatakeMethod::Macdonald)?;
            if sat.invert(&f)? == HeckeElement::basis(s.p, l) {
                c.round_trips += 1;
            } else {
                witness.get_or_insert_with(|| format!("Sat^-1(Sat(T_{:?})) != T_{:?}", l, l));
            }
            match sat.transform_with(l, SatakeMethod::Count) {
                Ok(g) => {
                    c.counted += 1;
                    if g == f {
                        c.count_agrees += 1;
                    } else {
                        witness.get_or_insert_with(|| {
                            format!("point count and closed form differ at {:?}", l)
                        });
                    }
                }
                Err(e) => log::debug!("no point count for {:?}: {}", l, e),
            }
            c.lambdas.push(l.clone());
        }
        Ok(rec
            .counts(&c)
            .decide(witness.is_none(), || witness.unwrap()))
    })])
}

pub fn tame(cfg: &Config) -> Result<Vec<Record>, SuiteError> {
    let s = scenario(cfg, "gl2")?;
    if s.tame_mu.is_none() {
        return Err(SuiteError::Config(format!(
            "scenario: {} has no split place, so no tame relation",
            s.name()
        )));
    }
    let budget = cfg.budget();
    let seed = cfg.seed();
    let div = Record::new(
        format!("tame-divisibility {} q={}", s.name(), s.p),
        "tame-divisibility",
        Some(s.name()),
    );
    let div = guarded(div, |rec| {
        // Probes must commute with mu(F_q^*): the unit coset and tau.
        let tau =
            s.g.cocharacter_element(s.ring(), s.tame_mu.as_ref().expect("checked above"));
        let probes = vec![
            ("1".to_string(), PMat::identity(s.ring(), s.g.dim)),
            ("tau".to_string(), tau),
        ];
        let r = divisibility_check(&s, &probes, budget, seed)?;
        let w = r
            .probes
            .iter()
            .find(|p| !(p.invariant && p.divisible))
            .map(|p| {
                format!(
                    "probe {}: invariant {}, divisible by q-1 {}",
                    p.probe, p.invariant, p.divisible
                )
            })
            .or_else(|| {
                r.free_action
                    .iter()
                    .find(|f| !f.free)
                    .map(|f| format!("mu(F_q^*) does not act freely on I_{}", f.i))
            })
            .unwrap_or_default();
        Ok(rec.counts(&r).decide(r.holds(), || w))
    });
    let lift = Record::new(
        format!("tame-lift {} q={}", s.name(), s.p),
        "tame-lift",
        Some(s.name()),
    );
    let lift = guarded(lift, |rec| {
        let t = tame_lift(&s, budget)?;
        let q1 = (s.p - 1) as usize;
        let ok = t.trace_matches && t.stabilizers.iter().all(|x| q1 % x == 0);
        let w = format!(
            "trace identity {}, stabilizers {:?}",
            t.trace_matches, t.stabilizers
        );
        Ok(rec.counts(&t).decide(ok, || w))
    });
    Ok(vec![div, lift])
}

pub fn norm(cfg: &Config) -> Result<Vec<Record>, SuiteError> {
    let s = scenario(cfg, "so3-u1")?;
    let m = cfg.m.unwrap_or(1);
    let budget = cfg.budget();
    let rec = Record::new(
        format!("norm {} m={}", tag(&s), m),
        Check::Norm.anchor(),
        Some(s.name()),
    );
    Ok(vec![guarded(rec, |rec| {
        let r = norm_relation_check(&s, m, budget)?;
        let w = format!(
            "Hep(U)(x_m) zero {} ({} mode), comparison {:?}",
            r.relation_zero,
            r.mode,
            r.comparison.as_ref().map(|c| c.holds())
        );
        Ok(rec.counts(&r).decide(r.holds(), || w))
    })])
}

pub fn comparison(cfg: &Config) -> Result<Vec<Record>, SuiteError> {
    let s = scenario(cfg, "so5-u2")?;
    let (m, i) = (cfg.m.unwrap_or(1), cfg.i.unwrap_or(1));
    let budget = cfg.budget();
    let rec = Record::new(
        format!("comparison {} m={} i={}", tag(&s), m, i),
        Check::Comparison.anchor(),
        Some(s.name()),
    );
    let cmp = guarded(rec, |rec| {
        let r = comparison_check(&s, m, i, budget)?;
        let w = format!(
            "{} classes ({} distinct, expected {}), lifts in level {}, trace identity {}",
            r.classes, r.distinct, r.expected, r.lifts_in_level, r.trace_identity
        );
        Ok(rec.counts(&r).decide(r.holds(), || w))
    });
    let lvl = Record::new(
        format!("level-index {} m={} i={}", tag(&s), m, i),
        "level-index",
        Some(s.name()),
    );
    let lvl = guarded(lvl, |rec| {
        let r = level_count(&s.g, &s.mu, m, i, budget)?;
        let w = format!(
            "|N_m/N_(m+i)|: transversal {:?}, orbit {:?}, expected {}",
            r.transversal_distinct, r.orbit, r.expected
        );
        Ok(rec.counts(&r).decide(r.holds, || w))
    });
    Ok(vec![cmp, lvl])
}

pub fn cmi(cfg: &Config) -> Result<Vec<Record>, SuiteError> {
    let s = scenario(cfg, "so5-u2")?;
    let (m, i) = (cfg.m.unwrap_or(1), cfg.i.unwrap_or(1));
    let budget = cfg.budget();
    let rec = Record::new(
        format!("cmi {} m={} i={}", tag(&s), m, i),
        Check::Cmi.anchor(),
        Some(s.name()),
    );
    Ok(vec![guarded(rec, |mut rec| {
        let r = c_mi(&s, m, i, budget)?;
        let show = |v: Option<u128>| v.map_or("n/a".to_string(), |x| x.to_string());
        rec.message = Some(format!(
            "bruteforce {} = closed form {}",
            show(r.bruteforce),
            show(r.closed_form)
        ));
        let w = format!(
            "bruteforce {}, closed form {}, fibers {}..{} over {} of {} classes",
            show(r.bruteforce),
            show(r.closed_form),
            r.min_fiber,
            r.max_fiber,
            r.fibers,
            r.expected_fibers
        );
        let ok = r.holds();
        if !ok {
            rec.message = None;
        }
        Ok(rec.counts(&r).decide(ok, || w))
    })])
}

pub fn conductor(cfg: &Config) -> Result<Vec<Record>, SuiteError> {
    let s = scenario(cfg, "so5-u2")?;
    let m = cfg.m.unwrap_or(1);
    let max_depth = cfg.precision.map_or(4, |p| p - m);
    let budget = cfg.budget();
    let rec = Record::new(
        format!("conductor {} m={}", tag(&s), m),
        Check::Conductor.anchor(),
        Some(s.name()),
    );
    Ok(vec![guarded(rec, |mut rec| {
        let r = conductor_within(&s, m, budget, max_depth)?;
        rec.message = Some(format!("con({}) = {}", m, r.conductor));
        let w = format!(
            "con({}) = {}, closed form {:?}, con(m) >= m {}, witness {:?}",
            m, r.conductor, r.closed_form, r.lower_bound_holds, r.witness
        );
        Ok(rec.counts(&r).decide(r.holds(), || w))
    })])
}

pub fn stabilizer(cfg: &Config) -> Result<Vec<Record>, SuiteError> {
    let s = scenario(cfg, "so5-u2")?;
    let m = cfg.m.unwrap_or(1);
    let (samples, seed) = (cfg.samples(), cfg.seed());
    let rec = Record::new(
        format!("stabilizer {} m={}", tag(&s), m),
        Check::Stabilizer.anchor(),
        Some(s.name()),
    );
    Ok(vec![guarded(rec, |mut rec| {
        let r = stabilizer_check(&s, m, samples, seed)?;
        rec.message = Some(if r.exhaustive() {
            format!(
                "lattice certificate (rank {}) plus {} samples",
                r.lattice_rank, r.samples
            )
        } else {
            format!("{} samples, {} in the conjugate", r.samples, r.hits)
        });
        let w = format!(
            "{} violations, e.g. {}",
            r.violations,
            r.witness.clone().unwrap_or_default()
        );
        Ok(rec.counts(&r).decide(r.holds(), || w))
    })])
}

pub fn symmetric_pair(cfg: &Config) -> Result<Vec<Record>, SuiteError> {
    let s = scenario(cfg, "gl3-so3-theta")?;
    let m = cfg.m.unwrap_or(1);
    let (samples, seed) = (cfg.samples().min(2_000), cfg.seed());
    let rec = Record::new(
        format!("symmetric-pair {} m={}", tag(&s), m),
        Check::SymmetricPair.anchor(),
        Some(s.name()),
    );
    Ok(vec![guarded(rec, |rec| {
        let r = symmetric_pair_check(&s, m, samples, seed)?;
        let w = format!(
            "{} of {} samples fail to factorize, e.g. {}",
            r.failures,
            r.samples,
            r.witness.clone().unwrap_or_default()
        );
        Ok(rec.counts(&r).decide(r.holds(), || w))
    })])
}

pub fn ordinary_chain(cfg: &Config) -> Result<Vec<Record>, SuiteError> {
    let q = cfg.prime()?.unwrap_or(3);
    let modulus = cfg.modulus.unwrap_or(super::config::DEFAULT_MODULUS);
    let length = cfg.length.unwrap_or(super::config::DEFAULT_CHAIN_LENGTH);
    let towers = cfg.towers.unwrap_or(super::config::DEFAULT_TOWERS);
    // Unit root 2, second root 5q.
    let (b, c) = (2, 5);
    let pol = ordinary_quadratic(q, b, c, modulus);
    let rec = Record::new(
        format!(
            "ordinary-chain q={} mod {} length {} towers {}",
            q, modulus, length, towers
        ),
        Check::OrdinaryChain.anchor(),
        None,
    );
    let seed = cfg.seed();
    Ok(vec![guarded(rec, |rec| {
        let r = ordinary_chain_check(&pol, b, length, modulus, towers, seed)?;
        let w = format!(
            "{} of {} compatibilities fail, zero chain vanishes {}",
            r.failures, r.compatibilities_checked, r.zero_chain_vanishes
        );
        Ok(rec.counts(&r).decide(r.holds(), || w))
    })])
}

fn random_gl(k: &Fp, n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<u64>> {
    loop {
        let m: Vec<Vec<u64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(0..k.p)).collect())
            .collect();
        if k.det(&m) != 0 {
            return m;
        }
    }
}

#[derive(Default, Serialize)]
struct FiltrationCounts {
    p: u64,
    dim: usize,
    pairs: usize,
    symmetric: usize,
    formulas_agree: usize,
    invariant: usize,
    positive: usize,
    lattice_cases: usize,
    lattice_ok: usize,
}

pub fn filtration(cfg: &Config) -> Result<Vec<Record>, SuiteError> {
    let p = cfg.prime()?.unwrap_or(3);
    let dim = cfg.length.unwrap_or(3);
    let bound = cfg.breaks.unwrap_or(3);
    let pairs = cfg.samples().min(2_000);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed());
    let rec = Record::new(
        format!("filtration p={} dim={} breaks<={}", p, dim, bound),
        Check::Filtration.anchor(),
        None,
    );
    Ok(vec![guarded(rec, |rec| {
        let k = Fp::new(p);
        let mut c = FiltrationCounts {
            p,
            dim,
            ..Default::default()
        };
        let mut witness = None;
        let draw = |rng: &mut ChaCha8Rng| {
            let l: Vec<i64> = (0..dim).map(|_| rng.gen_range(-bound..=bound)).collect();
            let g = random_gl(&k, dim, rng);
            (l.clone(), Filtration::from_cocharacter(k, &l).act(&g))
        };
        for _ in 0..pairs {
            let (la, a) = draw(&mut rng);
            let (_, b) = draw(&mut rng);
            let g = random_gl(&k, dim, &mut rng);
            c.pairs += 1;
            let v = scalar_product(&a, &b)?;
            if scalar_product(&b, &a)? == v {
                c.symmetric += 1;
            } else {
                witness.get_or_insert_with(|| format!("<{}, {}> is not symmetric", a, b));
            }
            if scalar_product_graded(&a, &b)? == v && scalar_product_split(&a, &b)? == v {
                c.formulas_agree += 1;
            } else {
                witness.get_or_insert_with(|| format!("formulas disagree on <{}, {}>", a, b));
            }
            if scalar_product(&a.act(&g), &b.act(&g))? == v {
                c.invariant += 1;
            } else {
                witness.get_or_insert_with(|| format!("<{}, {}> is not invariant", a, b));
            }
            let norm: i64 = la.iter().map(|x| x * x).sum();
            let aa = scalar_product(&a, &a)?;
            if aa == Rational64::from_integer(norm) && (aa > Rational64::zero()) == (norm > 0) {
                c.positive += 1;
            } else {
                witness.get_or_insert_with(|| format!("<F, F> = {} for F = {}", aa, a));
            }
        }
        // Lattice action and reduction on split cocharacter filtrations.
        let one = ExactScalar::one(p);
        let std = Matrix::identity(dim, &one);
        for _ in 0..pairs.min(200) {
            let l: Vec<i64> = (0..dim).map(|_| rng.gen_range(-bound..=bound)).collect();
            let f = SplitFiltration::from_cocharacter(&l, p);
            let t = Matrix::diagonal(
                &l.iter()
                    .map(|&x| ExactScalar::p_power(p, -x))
                    .collect::<Vec<_>>(),
            );
            c.lattice_cases += 1;
            let ok = same_lattice(&lattice_action(&std, &f)?, &t)
                && reduction(&f, &std)? == Filtration::from_cocharacter(k, &l);
            if ok {
                c.lattice_ok += 1;
            } else {
                witness
                    .get_or_insert_with(|| format!("lattice action or reduction of Fil({:?})", l));
            }
        }
        Ok(rec
            .counts(&c)
            .decide(witness.is_none(), || witness.unwrap()))
    })])
}

pub fn property_a(cfg: &Config) -> Result<Vec<Record>, SuiteError> {
    let bound = cfg.breaks.unwrap_or(super::config::DEFAULT_BREAKS);
    let name = cfg.scenario.as_deref().unwrap_or("so5-u2");
    let p = cfg.prime()?;
    if let Some(model) = family(name, p.unwrap_or(3)) {
        let rec = Record::new(
            format!("property-a {} p={} breaks<={}", name, model.k.p, bound),
            Check::PropertyA.anchor(),
            Some(name),
        );
        let seed = cfg.seed();
        return Ok(vec![guarded(rec, |mut rec| {
            let r = family_check(&model, bound, seed)?;
            rec.message = Some(format!(
                "max product {} over {} filtrations",
                r.max_value, r.filtrations
            ));
            let w = format!(
                "<F, F_zeta> = {} at {} ({} positive); |H(k)| {} vs {}",
                r.max_value,
                r.argmax.as_deref().unwrap_or("-"),
                r.positive,
                r.h_order,
                r.expected_order
            );
            Ok(rec.counts(&r).decide(r.holds(), || w))
        })]);
    }
    let s = scenario(cfg, "so5-u2")?;
    let ex = MainExample::from_scenario(&s)
        .map_err(|e| SuiteError::Config(format!("scenario: {}", e)))?;
    let max_len = cfg.length.unwrap_or(ex.n);
    let rec = Record::new(
        format!(
            "property-a {} breaks<={} length<={}",
            tag(&s),
            bound,
            max_len
        ),
        Check::PropertyA.anchor(),
        Some(s.name()),
    );
    Ok(vec![guarded(rec, |mut rec| {
        let r = property_a_check(&ex, bound, max_len)?;
        rec.message = Some(format!(
            "max product {} over {} filtrations",
            r.max_value, r.filtrations
        ));
        let w = format!(
            "<F, F_zeta> = {} at {} ({} positive), degrees nonpositive {}, involution shift {}",
            r.max_value,
            r.argmax.as_deref().unwrap_or("-"),
            r.positive,
            r.degrees_nonpositive,
            r.shift_ok
        );
        Ok(rec.counts(&r).decide(r.holds(), || w))
    })])
}

pub fn counterexample(cfg: &Config) -> Result<Vec<Record>, SuiteError> {
    let p = cfg.prime()?.unwrap_or(3);
    let n_max = cfg.precision.unwrap_or(16);
    let rec = Record::new(
        format!("counterexample SL(2) diagonal p={}", p),
        Check::Counterexample.anchor(),
        None,
    );
    let search = guarded(rec, |mut rec| {
        let r = counterexample_search(p, DiagonalBase::Sl(2), &[1, -1], &[-1, 1], n_max)?;
        let n = r.witness_n;
        let closed = Rational64::from_integer(2 * n * n - 2 * n);
        let ok = r.consistent()
            && r.mu2_antidominant
            && r.witness_value.parse::<Rational64>().ok() == Some(closed);
        rec.message = Some(format!(
            "N = {} gives <F_N, F_mu_N> = {}",
            n, r.witness_value
        ));
        rec.witnesses
            .push(format!("N = {}: value {} > 0", n, r.witness_value));
        let w = format!("direct and closed-form values disagree up to N = {}", n);
        Ok(rec.counts(&r).decide(ok, || w))
    });
    let rec = Record::new(
        format!("involution-transfer GL(2) diagonal p={}", p),
        "involution-transfer",
        None,
    );
    let seed = cfg.seed();
    let transfer = guarded(rec, |rec| {
        let r = diagonal_swap_transfer(p, &[2, -1], 2, 200, seed)?;
        let w = format!(
            "max <F, F_zeta> = {}, inequality {}",
            r.max_value, r.inequality_ok
        );
        Ok(rec.counts(&r).decide(r.holds(), || w))
    });
    Ok(vec![search, transfer])
}
