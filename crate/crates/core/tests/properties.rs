use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quiver_stability::algebra::AlgebraSpec;
use quiver_stability::catalog::builtin;
use quiver_stability::field::Matrix;
use quiver_stability::phase::{seesaw_holds, PhaseValue};
use quiver_stability::rational::{pair, q, qi, Q};
use quiver_stability::rep::{enumerate_submodules, is_isomorphic, quotient_by, Representation};
use quiver_stability::stability::{hn_filtration, is_semistable, king_semistable, StabilityFunction};
use quiver_stability::torsion::{
    chain_of_torsion_classes, is_torsion_class, torsion_class_at, torsion_free_at, verify_mgs, StabilityProfile,
};
use quiver_stability::universe::ModuleUniverse;
use quiver_stability::wallchamber::{induced_stability, stability_space, validate_red_path, RedPath};

fn algebra(id: &str) -> Arc<AlgebraSpec> {
    Arc::new(builtin(id, None).unwrap())
}

fn random_rep(alg: &Arc<AlgebraSpec>, dims: &[usize], seed: u64) -> Representation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = alg.field.p();
    let matrices = alg
        .arrows()
        .iter()
        .map(|a| {
            let (r, c) = (dims[a.target], dims[a.source]);
            Matrix::from_vec(r, c, (0..r * c).map(|_| rng.gen_range(0..p)).collect())
        })
        .collect();
    Representation::new(alg.clone(), dims.to_vec(), matrices).unwrap()
}

fn random_invertible(n: usize, p: u32, rng: &mut ChaCha8Rng) -> Matrix {
    let f = quiver_stability::field::PrimeField::new(p).unwrap();
    loop {
        let m = Matrix::from_vec(n, n, (0..n * n).map(|_| rng.gen_range(0..p)).collect());
        if m.is_invertible(f) {
            return m;
        }
    }
}

fn rep_strategy() -> impl Strategy<Value = Representation> {
    (prop_oneof![Just("A2"), Just("A3"), Just("kronecker")], any::<u64>(), proptest::collection::vec(0usize..3, 3))
        .prop_map(|(id, seed, d)| {
            let alg = algebra(id);
            let n = alg.vertex_count();
            let dims: Vec<usize> = d[..n].iter().map(|&x| x.min(2)).collect();
            random_rep(&alg, &dims, seed)
        })
        .prop_filter("nonzero", |m| !m.is_zero())
}

fn small_q() -> impl Strategy<Value = Q> {
    (-4i64..=4, 1i64..=3).prop_map(|(n, d)| q(n, d))
}

fn path_strategy(n: usize) -> impl Strategy<Value = RedPath> {
    proptest::collection::vec(proptest::collection::vec(-3i64..=3, n), 1..3).prop_map(move |mids| {
        let mut vertices = vec![vec![qi(1); n]];
        vertices.extend(mids.into_iter().map(|v| v.into_iter().map(qi).collect()));
        vertices.push(vec![qi(-1); n]);
        RedPath::through(vertices).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn submodule_and_quotient_dims_add_up(m in rep_strategy()) {
        for sub in enumerate_submodules(&m).unwrap() {
            let (quo, proj) = quotient_by(&m, &sub).unwrap();
            let total: Vec<usize> = sub.dims().iter().zip(quo.dims()).map(|(a, b)| a + b).collect();
            prop_assert_eq!(&total, m.dims());
            prop_assert!(proj.is_epimorphism());
        }
    }

    #[test]
    fn base_change_gives_isomorphic_module(m in rep_strategy(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = m.field().p();
        let g: Vec<Matrix> = m.dims().iter().map(|&d| random_invertible(d, p, &mut rng)).collect();
        let n = m.base_change(&g).unwrap();
        prop_assert!(is_isomorphic(&m, &n).unwrap());
        prop_assert!(is_isomorphic(&n, &m).unwrap());
        let (a, b) = (stability_space(&m).unwrap(), stability_space(&n).unwrap());
        prop_assert!(a.same_set(&b).unwrap());
    }

    #[test]
    fn slope_satisfies_seesaw(m in rep_strategy(), num in proptest::collection::vec(small_q(), 3), den in proptest::collection::vec(1i64..4, 3)) {
        let n = m.dims().len();
        let sf = StabilityFunction::slope(num[..n].to_vec(), den[..n].iter().map(|&d| qi(d)).collect()).unwrap();
        let pm = sf.phase(&m).unwrap();
        for sub in enumerate_submodules(&m).unwrap() {
            if sub.is_zero() || sub.is_whole() {
                continue;
            }
            let (quo, _) = quotient_by(&m, &sub).unwrap();
            prop_assert!(seesaw_holds(sf.phase(&sub.representation()).unwrap(), pm, sf.phase(&quo).unwrap()));
        }
    }

    #[test]
    fn hn_phases_strictly_decrease(m in rep_strategy(), a in proptest::collection::vec(small_q(), 3)) {
        let n = m.dims().len();
        let sf = StabilityFunction::linear_charge(a[..n].to_vec(), vec![qi(1); n]).unwrap();
        let hn = hn_filtration(&sf, &m).unwrap();
        prop_assert!(hn.phases.windows(2).all(|w| w[0] > w[1]));
        let dims: usize = hn.factors.iter().map(|f| f.total_dim()).sum();
        prop_assert_eq!(dims, m.total_dim());
        for f in &hn.factors {
            prop_assert!(is_semistable(&sf, f).unwrap());
        }
    }

    #[test]
    fn phase_text_roundtrip(v in small_q(), tag in small_q(), inf in any::<bool>()) {
        let p = if inf { PhaseValue { level: PhaseValue::infinity().level, tag } } else { PhaseValue::tagged(v, tag) };
        prop_assert_eq!(p.to_string().parse::<PhaseValue>().unwrap(), p);
    }

    #[test]
    fn path_text_roundtrip(p in path_strategy(3)) {
        prop_assert_eq!(RedPath::parse(&p.to_text()).unwrap(), p);
    }

    #[test]
    fn darkside_signs(p in path_strategy(3)) {
        let u = ModuleUniverse::new(algebra("A3"), &[1, 1, 1]).unwrap();
        let report = validate_red_path(&p, &u).unwrap();
        let mut samples: Vec<Q> = p.breakpoints().iter().map(|(t, _)| *t).collect();
        samples.extend(p.breakpoints().windows(2).map(|w| (w[0].0 + w[1].0) / qi(2)));
        for &(c, tm) in &report.phases {
            for &t in &samples {
                let v = pair(&p.gamma(t), u.class(c).dims());
                let expected = if t < tm { v > qi(0) } else if t > tm { v < qi(0) } else { v == qi(0) };
                prop_assert!(expected);
            }
        }
    }

    #[test]
    fn path_semistability_matches_king(p in path_strategy(3)) {
        let u = ModuleUniverse::new(algebra("A3"), &[1, 1, 1]).unwrap();
        prop_assume!(validate_red_path(&p, &u).unwrap().valid);
        let sf = induced_stability(&p, &u).unwrap();
        for c in u.classes() {
            let t = p.crossing_time(c.dims()).unwrap();
            prop_assert_eq!(
                is_semistable(&sf, &c.rep).unwrap(),
                king_semistable(&p.gamma(t), &c.rep).unwrap().is_semistable()
            );
        }
    }

    #[test]
    fn maximal_paths_have_distinct_stable_times(p in path_strategy(3)) {
        let u = ModuleUniverse::new(algebra("A3"), &[1, 1, 1]).unwrap();
        prop_assume!(validate_red_path(&p, &u).unwrap().valid);
        let sf = induced_stability(&p, &u).unwrap();
        let prof = StabilityProfile::compute(&sf, &u).unwrap();
        let times: Vec<PhaseValue> =
            (0..u.indecomposables().len()).filter(|&i| prof.stable[i]).map(|i| prof.phase_of_indecomposable(&u, i)).collect();
        let distinct = times.iter().collect::<std::collections::BTreeSet<_>>().len() == times.len();
        let chain = chain_of_torsion_classes(&sf, &u).unwrap();
        prop_assert_eq!(verify_mgs(&chain, &sf, &u).unwrap().verdict, distinct);
    }

    #[test]
    fn torsion_classes_are_closed_and_monotone(a in proptest::collection::vec(small_q(), 3), b in proptest::collection::vec(1i64..4, 3)) {
        let u = ModuleUniverse::new(algebra("A3"), &[1, 1, 1]).unwrap();
        let sf = StabilityFunction::linear_charge(a, b.into_iter().map(qi).collect()).unwrap();
        let attained = StabilityProfile::compute(&sf, &u).unwrap().attained();
        let ts: Vec<_> = attained.iter().map(|&p| torsion_class_at(&sf, p, &u).unwrap()).collect();
        let fs: Vec<_> = attained.iter().map(|&p| torsion_free_at(&sf, p, &u).unwrap()).collect();
        for i in 0..attained.len() {
            prop_assert!(is_torsion_class(&ts[i], &u).unwrap());
            if i + 1 < attained.len() {
                prop_assert!(ts[i + 1].is_subset(&ts[i]));
                prop_assert!(fs[i].is_subset(&fs[i + 1]));
            }
        }
    }
}

/// Cone membership and King's test agree on random rational vectors, with a fixed seed.
#[test]
fn cone_membership_matches_king() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for (id, bound) in [("A2", vec![1, 1]), ("A3", vec![1, 1, 1]), ("kronecker", vec![2, 2])] {
        let u = ModuleUniverse::new(algebra(id), &bound).unwrap();
        for m in u.indecomposables() {
            let cone = stability_space(&m.rep).unwrap();
            let gens = cone.generators().unwrap();
            for k in 0..1000 {
                // half the samples are drawn from the cone's span so that membership is not always trivial
                let theta: Vec<Q> = if k % 2 == 0 || gens.is_empty() {
                    (0..bound.len()).map(|_| q(rng.gen_range(-4..=4), rng.gen_range(1..=3))).collect()
                } else {
                    let mut v = vec![qi(0); bound.len()];
                    for g in &gens {
                        let c = q(rng.gen_range(-2..=3), rng.gen_range(1..=2));
                        for (x, y) in v.iter_mut().zip(g) {
                            *x += c * qi(*y);
                        }
                    }
                    v
                };
                assert_eq!(cone.contains(&theta), king_semistable(&theta, &m.rep).unwrap().is_semistable());
            }
        }
    }
}
