use std::collections::{HashMap, HashSet, VecDeque};

use num_rational::BigRational;

use crate::arith::{PMat, PRing};
use crate::groups::Descriptor;

use super::key::canonicalize;
use super::{CosetError, CosetVector};

/// Representatives `prod R_alpha(x_alpha)` of `N(O) / tau^i N(O) tau^-i`,
/// `x_alpha` ranging over `O / p^(i <alpha, mu>)`.
pub fn n_quotient(g: &Descriptor, ring: PRing, mu: &[i64], i: i64) -> Vec<PMat> {
    let mut reps = vec![PMat::identity(ring, g.dim)];
    for root in &g.positive {
        let k = i * root.pairing(mu);
        if k <= 0 {
            continue;
        }
        let size = ring.p.pow(k as u32);
        let mut next = Vec::with_capacity(reps.len() * size as usize);
        let elems: Vec<PMat> = (0..size)
            .map(|x| g.root_group_element(ring, root, x))
            .collect();
        for r in &reps {
            for e in &elems {
                next.push(r.mul(e));
            }
        }
        reps = next;
    }
    reps
}

fn is_upper_triangular(b: &PMat) -> bool {
    (0..b.n).all(|r| (0..r).all(|c| b.entry_val(r, c).is_none()))
}

/// `U_mu(1_(bK)) = sum_z 1_(b z tau K)` extended linearly; every stored
/// representative must lie in `B(F)`.
pub fn u_operator(g: &Descriptor, mu: &[i64], v: &CosetVector) -> Result<CosetVector, CosetError> {
    let ring = g.ring();
    let tau = g.cocharacter_element(ring, mu);
    let zt: Vec<PMat> = n_quotient(g, ring, mu, 1)
        .iter()
        .map(|z| z.mul(&tau))
        .collect();
    let mut out = CosetVector::zero();
    for (_, c, b) in v.iter() {
        if !is_upper_triangular(b) {
            return Err(CosetError::NotTriangular);
        }
        for x in &zt {
            out.add_term(&b.try_mul(x)?, c.clone())?;
        }
    }
    Ok(out)
}

/// Left cosets in `K lambda(p) K`, by closure of `lambda(p) K` under the
/// generators of `K`.
pub fn double_coset(
    g: &Descriptor,
    lambda: &[i64],
    budget: usize,
) -> Result<Vec<PMat>, CosetError> {
    let ring = g.ring();
    let gens = g.k_generators(ring);
    closure(&gens, g.cocharacter_element(ring, lambda), budget)
}

/// The orbit of `nu(p) K` under the Iwahori subgroup of the upper Borel.
pub fn iwahori_orbit(g: &Descriptor, nu: &[i64], budget: usize) -> Result<Vec<PMat>, CosetError> {
    let ring = g.ring();
    closure(
        &iwahori_generators(g, ring),
        g.cocharacter_element(ring, nu),
        budget,
    )
}

/// Generators of the Iwahori subgroup: `N(O)`, `T(O)` and `N-bar(pO)`.
pub fn iwahori_generators(g: &Descriptor, ring: PRing) -> Vec<PMat> {
    let mut gens: Vec<PMat> = g
        .positive
        .iter()
        .map(|r| g.root_group_element(ring, r, 1))
        .collect();
    gens.extend(
        g.negative
            .iter()
            .map(|r| g.root_group_element(ring, r, ring.p)),
    );
    gens.extend(
        g.k_generators(ring)
            .into_iter()
            .filter(|k| (0..k.n).all(|r| (0..k.n).all(|c| r == c || k.get(r, c) == 0))),
    );
    gens
}

/// Orbit of `start K` under the semigroup generated by `gens`, one
/// representative per coset.
pub fn closure(gens: &[PMat], start: PMat, budget: usize) -> Result<Vec<PMat>, CosetError> {
    let mut seen = HashSet::new();
    seen.insert(canonicalize(&start)?);
    let mut reps = vec![start.clone()];
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for k in gens {
            let y = k.try_mul(&x)?;
            if seen.insert(canonicalize(&y)?) {
                if reps.len() >= budget {
                    return Err(CosetError::Budget(budget));
                }
                reps.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(reps)
}

/// Cache of double coset decompositions for one descriptor.
#[derive(Debug)]
pub struct HeckeDecomposer {
    pub g: Descriptor,
    pub budget: usize,
    cache: HashMap<Vec<i64>, Vec<PMat>>,
}

impl HeckeDecomposer {
    pub fn new(g: Descriptor, budget: usize) -> Self {
        HeckeDecomposer {
            g,
            budget,
            cache: HashMap::new(),
        }
    }

    pub fn reps(&mut self, lambda: &[i64]) -> Result<&[PMat], CosetError> {
        if !self.cache.contains_key(lambda) {
            let r = double_coset(&self.g, lambda, self.budget)?;
            self.cache.insert(lambda.to_vec(), r);
        }
        Ok(&self.cache[lambda])
    }

    /// Right action of `sum_lambda c_lambda T_lambda`.
    pub fn act(
        &mut self,
        terms: &[(Vec<i64>, BigRational)],
        v: &CosetVector,
    ) -> Result<CosetVector, CosetError> {
        for (l, _) in terms {
            self.reps(l)?;
        }
        let parts: Vec<(BigRational, &[PMat])> = terms
            .iter()
            .map(|(l, c)| (c.clone(), self.cache[l].as_slice()))
            .collect();
        Ok(v.right_act(&parts)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn gl2_double_coset_has_q_plus_one_cosets() {
        for p in [2, 3, 5] {
            let g = Descriptor::gl(2, p);
            assert_eq!(double_coset(&g, &[1, 0], 1000).unwrap().len() as u64, p + 1);
        }
    }

    #[test]
    fn u_operator_on_origin_gl2() {
        let g = Descriptor::gl(2, 2);
        let r = g.ring();
        let v = CosetVector::unit(&PMat::identity(r, 2)).unwrap();
        let u = u_operator(&g, &[1, 0], &v).unwrap();
        let mut want = CosetVector::unit(&PMat::diag_p_powers(r, &[1, 0])).unwrap();
        want.add_term(&PMat::from_i64(r, 2, &[2, 1, 0, 1]), BigRational::one())
            .unwrap();
        assert_eq!(u, want);
        assert!(u_operator(&g, &[1, 0], &CosetVector::zero())
            .unwrap()
            .is_zero());
    }

    #[test]
    fn u_powers_match_u_of_multiple() {
        let g = Descriptor::gl(3, 2);
        let r = g.ring();
        let v = CosetVector::unit(&PMat::identity(r, 3)).unwrap();
        let u2 = u_operator(&g, &[1, 0, 0], &u_operator(&g, &[1, 0, 0], &v).unwrap()).unwrap();
        let direct = u_operator(&g, &[2, 0, 0], &v).unwrap();
        assert_eq!(u2, direct);
    }

    #[test]
    fn so5_minuscule_double_coset() {
        let g = Descriptor::so_odd_standard(5, 3);
        // (q^4 - 1) / (q - 1) isotropic lines.
        assert_eq!(
            double_coset(&g, &[1, 0, 0, 0, -1], 10_000).unwrap().len(),
            40
        );
    }
}
