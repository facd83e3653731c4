use num_rational::Rational64;
use proptest::prelude::*;
use tamenorm::filtrations::{
    scalar_product, scalar_product_graded, scalar_product_split, Filtration, Fp,
};

const P: u64 = 3;
const N: usize = 3;

fn matrix(entries: &[u64]) -> Vec<Vec<u64>> {
    entries.chunks(N).map(|r| r.to_vec()).collect()
}

fn invertible() -> impl Strategy<Value = Vec<Vec<u64>>> {
    prop::collection::vec(0..P, N * N)
        .prop_map(|e| matrix(&e))
        .prop_filter("invertible", |m| Fp::new(P).det(m) != 0)
}

fn filtration() -> impl Strategy<Value = Filtration> {
    (prop::collection::vec(-3i64..=3, N), invertible())
        .prop_map(|(l, g)| Filtration::from_cocharacter(Fp::new(P), &l).act(&g))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn symmetric(a in filtration(), b in filtration()) {
        prop_assert_eq!(scalar_product(&a, &b).unwrap(), scalar_product(&b, &a).unwrap());
    }

    #[test]
    fn formulas_agree(a in filtration(), b in filtration()) {
        let v = scalar_product(&a, &b).unwrap();
        prop_assert_eq!(scalar_product_graded(&a, &b).unwrap(), v);
        prop_assert_eq!(scalar_product_split(&a, &b).unwrap(), v);
    }

    #[test]
    fn invariant(a in filtration(), b in filtration(), g in invertible()) {
        prop_assert_eq!(scalar_product(&a.act(&g), &b.act(&g)).unwrap(), scalar_product(&a, &b).unwrap());
    }

    #[test]
    fn positive_on_cocharacters(l in prop::collection::vec(-4i64..=4, 1..6)) {
        let f = Filtration::from_cocharacter(Fp::new(P), &l);
        let norm: i64 = l.iter().map(|x| x * x).sum();
        let v = scalar_product(&f, &f).unwrap();
        prop_assert_eq!(v, Rational64::from_integer(norm));
        prop_assert_eq!(v > Rational64::from_integer(0), l.iter().any(|&x| x != 0));
    }

    #[test]
    fn diagonal_products_are_dot_products(a in prop::collection::vec(-4i64..=4, N), b in prop::collection::vec(-4i64..=4, N)) {
        let k = Fp::new(P);
        let dot: i64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
        prop_assert_eq!(scalar_product(&Filtration::from_cocharacter(k, &a), &Filtration::from_cocharacter(k, &b)).unwrap(), Rational64::from_integer(dot));
    }

    #[test]
    fn degree_is_trace(l in prop::collection::vec(-4i64..=4, N), g in invertible()) {
        let f = Filtration::from_cocharacter(Fp::new(P), &l).act(&g);
        prop_assert_eq!(f.degree(), Rational64::from_integer(l.iter().sum()));
    }
}
