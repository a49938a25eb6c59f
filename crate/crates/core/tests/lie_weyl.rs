use proptest::prelude::*;
use toda_core::lie::pair;
use toda_core::weyl::{
    chamber_point, dual_action, enumerate, mass_root_coords, mass_vector,
    mass_vector_from_root_coords, DEFAULT_GROUP_CAP,
};
use toda_core::{
    CartanData, Coweight, GammaVector, LieType, Rational, Scalar, Weight, WeylElement,
};

fn q(p: i64, d: i64) -> Rational {
    Rational::new(p.into(), d.into())
}

fn data(name: &str) -> CartanData {
    CartanData::new(name.parse::<LieType>().unwrap()).unwrap()
}

const TYPES: &[&str] = &[
    "A1", "A2", "A3", "A5", "A8", "B2", "B3", "B5", "C2", "C3", "C5", "D4", "D5", "D7", "E6", "E7",
    "E8", "F4", "G2",
];

/// Simple roots in the standard Euclidean realization.
fn euclidean_simple_roots(name: &str) -> Vec<Vec<f64>> {
    let lt: LieType = name.parse().unwrap();
    let n = lt.rank();
    let unit = |dim: usize, i: usize| {
        let mut v = vec![0.0; dim];
        v[i] = 1.0;
        v
    };
    let diff = |dim: usize, i: usize, j: usize| {
        let mut v = unit(dim, i);
        v[j] -= 1.0;
        v
    };
    match name.chars().next().unwrap() {
        'A' => (0..n).map(|i| diff(n + 1, i, i + 1)).collect(),
        'B' => (0..n)
            .map(|i| {
                if i + 1 < n {
                    diff(n, i, i + 1)
                } else {
                    unit(n, n - 1)
                }
            })
            .collect(),
        'C' => (0..n)
            .map(|i| {
                if i + 1 < n {
                    diff(n, i, i + 1)
                } else {
                    unit(n, n - 1).iter().map(|x| 2.0 * x).collect()
                }
            })
            .collect(),
        'D' => (0..n)
            .map(|i| {
                if i + 1 < n {
                    diff(n, i, i + 1)
                } else {
                    let mut v = unit(n, n - 2);
                    v[n - 1] = 1.0;
                    v
                }
            })
            .collect(),
        'G' => vec![vec![1.0, -1.0, 0.0], vec![-2.0, 1.0, 1.0]],
        'F' => vec![
            vec![0.0, 1.0, -1.0, 0.0],
            vec![0.0, 0.0, 1.0, -1.0],
            vec![0.0, 0.0, 0.0, 1.0],
            vec![0.5, -0.5, -0.5, -0.5],
        ],
        'E' => {
            let mut roots = vec![
                vec![0.5, -0.5, -0.5, -0.5, -0.5, -0.5, -0.5, 0.5],
                vec![1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            ];
            for k in 0..6 {
                roots.push(diff(8, k + 1, k));
            }
            roots.truncate(n);
            roots
        }
        _ => unreachable!(),
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn reflect(v: &[f64], a: &[f64]) -> Vec<f64> {
    let c = 2.0 * dot(v, a) / dot(a, a);
    v.iter().zip(a).map(|(x, y)| x - c * y).collect()
}

#[test]
fn cartan_matrices_match_euclidean_realization() {
    for name in TYPES {
        let d = data(name);
        let roots = euclidean_simple_roots(name);
        for i in 0..d.rank() {
            for j in 0..d.rank() {
                let expected = 2.0 * dot(&roots[i], &roots[j]) / dot(&roots[j], &roots[j]);
                assert_eq!(
                    d.cartan()[(i, j)] as f64,
                    expected,
                    "{name} a_{}{}",
                    i + 1,
                    j + 1
                );
            }
        }
    }
}

#[test]
fn root_counts_match_euclidean_orbits() {
    for name in TYPES.iter().filter(|n| **n != "E8") {
        let simple = euclidean_simple_roots(name);
        let key = |v: &[f64]| {
            v.iter()
                .map(|x| (x * 2.0).round() as i64)
                .collect::<Vec<_>>()
        };
        let mut seen: std::collections::BTreeSet<Vec<i64>> =
            simple.iter().map(|r| key(r)).collect();
        let mut frontier = simple.clone();
        while let Some(v) = frontier.pop() {
            for a in &simple {
                let w = reflect(&v, a);
                if seen.insert(key(&w)) {
                    frontier.push(w);
                }
            }
        }
        let d = data(name);
        assert_eq!(seen.len(), 2 * d.positive_roots().len(), "{name}");
        assert!(d.positive_roots().iter().all(|r| r.iter().all(|&m| m >= 0)));
    }
    assert_eq!(data("E8").positive_roots().len(), 120);
}

#[test]
fn cartan_data_invariants() {
    for name in TYPES {
        let d = data(name);
        let n = d.rank();
        let a = d.cartan().to_scalar::<Rational>();
        assert_eq!(a.mul(d.inverse()), toda_core::Matrix::identity(n), "{name}");
        for i in 0..n {
            assert_eq!(d.cartan()[(i, i)], 2);
            for j in 0..n {
                if i != j {
                    assert!(d.cartan()[(i, j)] <= 0);
                    assert_eq!(d.cartan()[(i, j)] == 0, d.cartan()[(j, i)] == 0);
                }
            }
            let mut simple = vec![0; n];
            simple[i] = 1;
            assert!(d.positive_roots().contains(&simple));
        }
        assert!(d.cartan().determinant_int() > 0);
    }
}

#[test]
fn weyl_group_orders_and_longest_element() {
    for (name, order) in [
        ("A1", 2),
        ("A2", 6),
        ("A3", 24),
        ("B2", 8),
        ("B3", 48),
        ("C3", 48),
        ("G2", 12),
        ("D4", 192),
        ("F4", 1152),
    ] {
        let d = data(name);
        let g = enumerate(&d, DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(g.len(), order, "{name}");
        let max_len = g
            .elements()
            .iter()
            .map(WeylElement::word_len)
            .max()
            .unwrap();
        assert_eq!(max_len, d.positive_roots().len());
        assert_eq!(
            g.elements()
                .iter()
                .filter(|e| e.word_len() == max_len)
                .count(),
            1
        );
        let kappa = g.longest();
        assert!(kappa.compose(kappa).is_identity());
        for e in g.elements() {
            assert_eq!(e.inversion_count(&d), e.word_len(), "{name} {e}");
        }
    }
}

#[test]
fn mass_vectors_are_nonnegative_and_dominated() {
    for name in ["A1", "A2", "A3", "B2", "B3", "C3", "G2"] {
        let d = data(name);
        let n = d.rank();
        let g = enumerate(&d, DEFAULT_GROUP_CAP).unwrap();
        let gamma = GammaVector::new((0..n).map(|i| q(i as i64 * 2 - 1, 3)).collect()).unwrap();
        let w0 = d.w0_from_gammas(&gamma).unwrap();
        let top = mass_vector(&d, g.longest(), &w0).unwrap();
        for e in g.elements() {
            let m = mass_root_coords(&d, e).unwrap();
            assert!(m.iter().all(|&x| x >= 0));
            let v = mass_vector(&d, e, &w0).unwrap();
            assert_eq!(v, mass_vector_from_root_coords(&d, e, &gamma.mu()).unwrap());
            assert!(v.iter().zip(&top).all(|(a, b)| a <= b));
            assert_eq!(e.is_identity(), v.iter().all(|x| *x == q(0, 1)));
        }
    }
}

#[test]
fn longest_element_mass_is_twice_rho_pairing_for_zero_gamma() {
    // kappa omega_i = -omega_{i*}, so sigma_i = <omega_i + omega_{i*}, w0>.
    let d = data("A3");
    let g = enumerate(&d, DEFAULT_GROUP_CAP).unwrap();
    let w0 = d
        .w0_from_gammas(&GammaVector::<Rational>::zeros(3))
        .unwrap();
    assert_eq!(
        mass_vector(&d, g.longest(), &w0).unwrap(),
        vec![q(3, 1), q(4, 1), q(3, 1)]
    );
}

fn rational() -> impl Strategy<Value = Rational> {
    (-30i64..30, 1i64..8).prop_map(|(p, d)| q(p, d))
}

fn vector(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(rational(), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn weight_root_coordinates_round_trip(name in prop::sample::select(vec!["A3", "B3", "C3", "D4", "G2", "F4"]), seed in vector(4)) {
        let d = data(name);
        let beta = Weight::new(seed[..d.rank()].to_vec());
        let m = d.weight_to_root_coords(&beta).unwrap();
        prop_assert_eq!(d.root_coords_to_weight(&m).unwrap(), beta);
    }
}

proptest! {
    #[test]
    fn pairing_is_bilinear(b1 in vector(3), b2 in vector(3), h in vector(3), s in rational()) {
        let (w1, w2, hw) = (Weight::new(b1), Weight::new(b2), Coweight::new(h));
        let lhs = pair(&w1.scale(&s).add(&w2), &hw).unwrap();
        let rhs = s.clone() * pair(&w1, &hw).unwrap() + pair(&w2, &hw).unwrap();
        prop_assert_eq!(lhs, rhs);
        let h2 = hw.scale(&s);
        prop_assert_eq!(pair(&w1, &h2).unwrap(), s * pair(&w1, &hw).unwrap());
    }

    #[test]
    fn dual_action_preserves_pairing(name in prop::sample::select(vec!["A3", "B3", "C3", "G2"]), idx in 0usize..48, b in vector(3), h in vector(3)) {
        let d = data(name);
        let n = d.rank();
        let g = enumerate(&d, DEFAULT_GROUP_CAP).unwrap();
        let tau = &g.elements()[idx % g.len()];
        let beta = Weight::new(b[..n].to_vec());
        let hw = Coweight::new(h[..n].to_vec());
        let lhs = pair(&tau.apply(&beta), &dual_action(&d, tau, &hw).unwrap()).unwrap();
        prop_assert_eq!(lhs, pair(&beta, &hw).unwrap());
    }

    #[test]
    fn w0_reproduces_mu(name in prop::sample::select(vec!["A2", "B3", "C3", "G2", "F4"]), g in vector(4)) {
        let d = data(name);
        let n = d.rank();
        let gammas: Vec<Rational> = g[..n].iter().map(|x| x.clone() * q(1, 40) + q(1, 2)).collect();
        let gamma = GammaVector::new(gammas).unwrap();
        let w0 = d.w0_from_gammas(&gamma).unwrap();
        for (i, mu) in gamma.mu().iter().enumerate() {
            prop_assert_eq!(&pair(&d.simple_root(i).unwrap(), &w0).unwrap(), mu);
        }
        let upper = d.gamma_upper(&gamma).unwrap();
        for (i, value) in upper.iter().enumerate() {
            let expected = Rational::sum_all((0..n).map(|j| d.inverse()[(i, j)].clone() * gamma.gammas()[j].clone()));
            prop_assert_eq!(value, &expected);
        }
    }

    #[test]
    fn chamber_points_lie_in_the_image_chamber(idx in 0usize..12, c1 in 1i64..9, c2 in 1i64..9) {
        let d = data("G2");
        let g = enumerate(&d, DEFAULT_GROUP_CAP).unwrap();
        let tau = &g.elements()[idx];
        let h = chamber_point(&d, tau, &[q(c1, 1), q(c2, 2)]).unwrap();
        let back = dual_action(&d, &tau.inverse(&d), &h).unwrap();
        prop_assert_eq!(d.coweight_to_e_coords(&back).unwrap(), vec![q(c1, 1), q(c2, 2)]);
    }
}

#[test]
fn inputs_are_validated() {
    assert!("A0".parse::<LieType>().is_err());
    assert!("B1".parse::<LieType>().is_err());
    assert!("D3".parse::<LieType>().is_err());
    assert!("E9".parse::<LieType>().is_err());
    assert!("X2".parse::<LieType>().is_err());
    assert!(GammaVector::new(vec![q(-1, 1)]).is_err());
    let d = data("A2");
    let g = enumerate(&d, DEFAULT_GROUP_CAP).unwrap();
    assert!(chamber_point(&d, g.longest(), &[q(1, 1), q(0, 1)]).is_err());
    assert!(WeylElement::parse(&d, "s0").is_err());
    assert!(WeylElement::parse(&d, "s1 x").is_err());
    assert!(enumerate(&data("E8"), 1000).is_err());
}
