use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rapprox::approx::{empirical_alpha, enumerate_p1, p1_shell, Frontier};
use rapprox::arith::{big, bigs, Q};
use rapprox::cones::{is_dual_pair, Cone};
use rapprox::nslattice::{preset, DivisorClass, FiberTree, NSLattice};
use rapprox::predictor::{evaluate, predict_alpha, PointContext};
use rapprox::projective::{distance, normalize, ProjPoint};
use rapprox::ratcurves::{named, ParamCurve};
use rapprox::suite::random_fiber_tree;
use rapprox::surfaces::{cox_height, cox_monomials, HirzebruchPoint, LinearSystem};

fn coords(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-60i64..=60, n).prop_filter("nonzero", |v| v.iter().any(|&x| x != 0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn normalize_is_scale_invariant(v in coords(3), k in prop::sample::select(vec![-7i64, -2, -1, 2, 3, 11])) {
        let p = ProjPoint::from_i64(&v).unwrap();
        let w: Vec<i64> = v.iter().map(|x| x * k).collect();
        prop_assert_eq!(&p, &ProjPoint::from_i64(&w).unwrap());
        prop_assert_eq!(&normalize(p.coords()).unwrap(), &p);
        prop_assert!(p.height() >= BigInt::one());
    }

    #[test]
    fn distance_is_symmetric_and_bounded(a in coords(3), b in coords(3)) {
        let (p, q) = (ProjPoint::from_i64(&a).unwrap(), ProjPoint::from_i64(&b).unwrap());
        let d = distance(&p, &q).unwrap();
        prop_assert_eq!(&d, &distance(&q, &p).unwrap());
        // |x_i y_j - x_j y_i| <= 2 H(x) H(y); the bound 1 fails, see below.
        prop_assert!(!d.is_negative() && d <= Q::from_integer(big(2)));
        prop_assert_eq!(d.is_zero(), p == q);
        // dist(p, q) H(p) H(q) is the largest 2x2 minor, an integer >= 1 off the diagonal.
        let scaled = &d * Q::from_integer(p.height() * q.height());
        prop_assert!(scaled.is_integer());
        if p != q {
            prop_assert!(scaled >= Q::one());
        }
    }

    #[test]
    fn shells_partition_enumeration(b in 1i64..40) {
        let all = enumerate_p1(b);
        prop_assert!(all.iter().all(|p| p.height() <= big(b)));
        let from_shells: usize = (1..=b).map(|h| p1_shell(h).len()).sum();
        prop_assert_eq!(all.len(), from_shells);
    }

    #[test]
    fn frontier_is_idempotent_and_order_free(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = ProjPoint::from_i64(&[3, 7]).unwrap();
        let mut stream: Vec<(ProjPoint, Q, BigInt)> = enumerate_p1(25)
            .into_iter()
            .filter(|q| *q != p)
            .map(|q| {
                let d = distance(&p, &q).unwrap();
                let h = q.height();
                (q, d, h)
            })
            .collect();
        let once = empirical_alpha(stream.clone(), 25).unwrap();
        let mut doubled = stream.clone();
        doubled.extend(stream.clone());
        prop_assert_eq!(&empirical_alpha(doubled, 25).unwrap().records, &once.records);
        use rand::seq::SliceRandom;
        stream.shuffle(&mut rng);
        let shuffled = empirical_alpha(stream.clone(), 25).unwrap();
        let key = |e: &rapprox::approx::ApproxEstimate| e.records.iter().map(|r| (r.height.clone(), r.distance.clone())).collect::<Vec<_>>();
        prop_assert_eq!(key(&shuffled), key(&once));
        let mut f = Frontier::new();
        for (q, d, h) in stream {
            f.insert(q, d, h);
        }
        let mut g = f.clone();
        g.merge(f.clone());
        prop_assert_eq!(g, f);
    }

    #[test]
    fn fiber_trees_satisfy_the_lemmas(seed in any::<u64>(), m in 2usize..=8, extra in 1i64..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = m as i64 + extra;
        let t = random_fiber_tree(&mut rng, n, m).unwrap();
        let lat = t.lattice().unwrap();
        let f = t.fiber_vector().unwrap();
        // F is a fibre class: F.F = 0, F.E_i = 0, F.S = 1.
        prop_assert!(lat.pair(&f, &f).is_zero());
        for i in 0..t.len() {
            let mut e = vec![BigInt::zero(); t.len() + 1];
            e[i + 1] = BigInt::one();
            prop_assert!(lat.pair(&f, &e).is_zero());
        }
        let mut s = vec![BigInt::zero(); t.len() + 1];
        s[0] = BigInt::one();
        prop_assert_eq!(lat.pair(&f, &s), BigInt::one());
        for i in 0..t.len() {
            for j in 0..t.len() {
                if i != j && t.succeq(i, j) {
                    prop_assert!(t.verify_multiplegens(i, j).unwrap().holds, "({}, {})", i, j);
                }
            }
        }
        for k in t.contractible() {
            prop_assert!(t.verify_inductive_step(k).unwrap());
        }
        let back = FiberTree::from_json(&t.to_json()).unwrap();
        prop_assert_eq!(back.compute_fiber_class().unwrap(), t.compute_fiber_class().unwrap());
    }

    #[test]
    fn cox_sections_and_heights(n in 0u32..4, a in 0i64..8, b in 0i64..4, x in coords(2), y in coords(2)) {
        let mons = cox_monomials(n, a, b);
        let expect: i64 = (0..=b).map(|l| (a - n as i64 * l + 1).max(0)).sum();
        prop_assert_eq!(mons.len() as i64, expect);
        let g = |v: &[i64]| v.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
        let (gx, gy) = (g(&x), g(&y));
        let xs = [x[0] / gx, x[1] / gx];
        let ys = [y[0] / gy, y[1] / gy];
        let p = HirzebruchPoint::from_i64(n, xs, ys).unwrap();
        // (x, y) and (-x, (-1)^n y2) are the same point.
        let sign = if n % 2 == 1 { -1 } else { 1 };
        let p2 = HirzebruchPoint::from_i64(n, [-xs[0], -xs[1]], [ys[0], sign * ys[1]]).unwrap();
        prop_assert_eq!(&p, &p2);
        if !mons.is_empty() && a >= n as i64 * b {
            let h = cox_height(&p, a, b).unwrap();
            prop_assert!(h >= BigInt::one());
            prop_assert_eq!(h, cox_height(&p2, a, b).unwrap());
        }
    }

    #[test]
    fn linear_system_dimension(a in 1usize..5, pts in prop::collection::vec(coords(3), 0..6)) {
        let mut base: Vec<ProjPoint> = pts.iter().map(|v| ProjPoint::from_i64(v).unwrap()).collect();
        base.sort();
        base.dedup();
        let full = (a + 1) * (a + 2) / 2;
        let sys = LinearSystem::new(a, base.iter().map(|p| (p.clone(), 1)).collect()).unwrap();
        prop_assert!(sys.dimension() >= full.saturating_sub(base.len()));
        // At most a + 1 distinct points always impose independent conditions.
        if base.len() <= a + 1 {
            prop_assert_eq!(sys.dimension(), full - base.len());
        }
        for form in &sys.basis {
            for p in &base {
                prop_assert!(sys.eval_form(form, p).is_zero());
            }
        }
    }

    #[test]
    fn best_sequences_stay_on_the_curve(j in 1usize..30, s in 1i64..9, t in -9i64..9) {
        let t0 = ProjPoint::from_i64(&[s, t]).unwrap();
        let params = ParamCurve::best_sequence_parameters(&t0, j);
        prop_assert_eq!(params.len(), j);
        for c in [named::cuspidal_cubic(), named::twisted_cubic(), named::conic()] {
            let image = c.best_sequence(&t0, j);
            for (u, q) in params.iter().zip(&image) {
                prop_assert_eq!(&c.evaluate(u), q);
            }
            let a1 = c.alpha_along(&t0, 1);
            prop_assert_eq!(c.alpha_along(&t0, 3), a1 * Q::from_integer(big(3)));
        }
    }
}

#[test]
fn sup_norm_distance_can_exceed_one() {
    let p = ProjPoint::from_i64(&[0, 12, 11]).unwrap();
    let q = ProjPoint::from_i64(&[0, 1, -1]).unwrap();
    assert_eq!(distance(&p, &q).unwrap(), Q::new(big(23), big(12)));
    // The factor 2 is attained on P^1.
    let a = ProjPoint::from_i64(&[1, 1]).unwrap();
    let b = ProjPoint::from_i64(&[1, -1]).unwrap();
    assert_eq!(distance(&a, &b).unwrap(), Q::from_integer(big(2)));
}

fn random_cone(rank_gens: &[Vec<i64>]) -> Cone {
    let lat = Arc::new(NSLattice::from_i64(&["A", "B", "C"], &[&[1, 0, 0], &[0, -1, 0], &[0, 0, -1]]).unwrap());
    Cone::new(lat, rank_gens.iter().map(|g| bigs(g)).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dual_of_dual(gens in prop::collection::vec(prop::collection::vec(-4i64..=4, 3), 3..7)) {
        let c = random_cone(&gens);
        prop_assume!(c.is_full_dimensional());
        let d = c.dual().unwrap();
        prop_assume!(d.is_full_dimensional());
        let dd = d.dual().unwrap();
        prop_assert!(dd.same_cone(&c));
        prop_assert!(is_dual_pair(&c, &d).unwrap());
        prop_assert!(is_dual_pair(&d, &c).unwrap());
        for g in c.generators() {
            prop_assert!(c.contains_vec(g).unwrap());
            for h in d.generators() {
                prop_assert!(!c.lattice().pair(g, h).is_negative());
            }
        }
    }

    #[test]
    fn predictor_scaling_and_convexity(w1 in prop::collection::vec(1u32..6, 10), w2 in prop::collection::vec(1u32..6, 10), k in 1i64..5) {
        let p = preset("blowup_p2:4").unwrap();
        let curves = ["E1", "E2", "E3", "E4", "L-E1-E2", "L-E1-E3", "L-E1-E4", "L-E2-E3", "L-E2-E4", "L-E3-E4"];
        let catalog: Vec<(&str, &str, u32)> = curves.iter().map(|c| (*c, *c, 1)).collect();
        let ctx = PointContext::from_preset(&p, &catalog).unwrap();
        let nef = Cone::new(p.lattice.clone(), p.nef_vectors()).unwrap();
        let combo = |w: &[u32]| {
            let mut s = vec![BigInt::zero(); p.lattice.rank()];
            for (g, &c) in nef.generators().iter().zip(w.iter().cycle()) {
                for (a, x) in s.iter_mut().zip(g) {
                    *a += x * BigInt::from(c);
                }
            }
            DivisorClass::new(p.lattice.clone(), s).unwrap()
        };
        let (d1, d2) = (combo(&w1), combo(&w2));
        let r1 = predict_alpha(&ctx, &d1).unwrap();
        let r2 = predict_alpha(&ctx, &d2).unwrap();
        // alpha(kD) = k alpha(D) with the same winners.
        let kd = DivisorClass::new_q(p.lattice.clone(), d1.coeffs.iter().map(|c| c * Q::from_integer(big(k))).collect()).unwrap();
        let rk = predict_alpha(&ctx, &kd).unwrap();
        prop_assert_eq!(&rk.alpha, &(&r1.alpha * Q::from_integer(big(k))));
        prop_assert_eq!(&rk.winners, &r1.winners);
        // A curve winning at both D1 and D2 wins at D1 + D2, and alpha is superadditive.
        let sum = DivisorClass::new_q(p.lattice.clone(), d1.coeffs.iter().zip(&d2.coeffs).map(|(a, b)| a + b).collect()).unwrap();
        let rs = evaluate(&ctx, &sum).unwrap();
        prop_assert!(rs.alpha >= &r1.alpha + &r2.alpha);
        for w in r1.winners.iter().filter(|w| r2.winners.contains(w)) {
            prop_assert!(rs.winners.contains(w));
        }
    }
}
