use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use polemono_core::linalg::sample_primes;
use polemono_core::{
    parse, rank_exact, rank_mod_p, run, HomogPoly, Mode, Monomial, RunConfig, SparseMatrix, Var,
};

fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Dense Bareiss elimination with row pivoting.
fn bareiss_rank(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let n = a.len();
    let m = a.first().map_or(0, |r| r.len());
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..m {
        let Some(p) = (rank..n).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..n {
            for j in col + 1..m {
                let v = &a[rank][col] * &a[i][j] - &a[i][col] * &a[rank][j];
                a[i][j] = v / &prev;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
        if rank == n {
            break;
        }
    }
    rank
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..9, 1usize..9).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(prop_oneof![3 => Just(0i64), 2 => -4i64..=4], c), r)
    })
}

fn homog_poly(d: u32) -> impl Strategy<Value = HomogPoly> {
    let n = ((d + 1) * (d + 2) / 2) as usize;
    prop::collection::vec(-5i64..=5, n).prop_map(move |cs| {
        let mut terms = Vec::new();
        let mut it = cs.into_iter();
        for a in 0..=d {
            for b in 0..=d - a {
                terms.push((Monomial::new(a, b, d - a - b), q(it.next().unwrap())));
            }
        }
        HomogPoly::from_terms(d, terms).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_rank_matches_bareiss(rows in small_matrix()) {
        let m = SparseMatrix::from_dense_i64(&rows);
        prop_assert_eq!(rank_exact(&m), bareiss_rank(&rows));
    }

    #[test]
    fn modular_rank_matches_bareiss(rows in small_matrix()) {
        let m = SparseMatrix::from_dense_i64(&rows);
        let p = sample_primes(11, 1)[0];
        prop_assert_eq!(rank_mod_p(&m, p).unwrap(), bareiss_rank(&rows));
    }

    #[test]
    fn rank_invariant_under_permutation_and_scaling(
        rows in small_matrix(),
        seed in any::<u64>(),
        scale in prop_oneof![-7i64..=-1, 1i64..=7],
    ) {
        let n = rows.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let permuted: Vec<Vec<i64>> = perm
            .iter()
            .enumerate()
            .map(|(k, &i)| rows[i].iter().map(|v| if k == 0 { v * scale } else { *v }).collect())
            .collect();
        let a = SparseMatrix::from_dense_i64(&rows);
        let b = SparseMatrix::from_dense_i64(&permuted);
        prop_assert_eq!(rank_exact(&a), rank_exact(&b));
        prop_assert_eq!(rank_exact(&a), rank_exact(&a.transpose()));
        let p = sample_primes(5, 1)[0];
        prop_assert_eq!(rank_mod_p(&a, p).unwrap(), rank_mod_p(&b, p).unwrap());
    }

    #[test]
    fn euler_relation(f in homog_poly(4), pt in prop::array::uniform3(-6i64..=6)) {
        // x f_x + y f_y + z f_z = d f
        let p = [&q(pt[0]), &q(pt[1]), &q(pt[2])];
        let lhs: BigRational = Var::ALL
            .iter()
            .zip(p.iter())
            .map(|(v, x)| f.partial(*v).eval(p) * *x)
            .fold(BigRational::zero(), |a, b| a + b);
        prop_assert_eq!(lhs, f.eval(p) * q(4));
    }

    #[test]
    fn partials_commute(f in homog_poly(5)) {
        for a in Var::ALL {
            for b in Var::ALL {
                prop_assert_eq!(f.partial(a).partial(b), f.partial(b).partial(a));
            }
        }
    }

    #[test]
    fn printed_polynomials_reparse(f in homog_poly(3)) {
        prop_assume!(!f.is_zero());
        prop_assert_eq!(parse(&f.to_string()).unwrap(), f);
    }
}

#[test]
fn bareiss_oracle_sanity() {
    assert_eq!(bareiss_rank(&[vec![1, 2], vec![2, 4]]), 1);
    assert_eq!(bareiss_rank(&[vec![0, 1], vec![1, 0], vec![1, 1]]), 2);
}

#[test]
fn first_cycle_only_agrees_on_h1() {
    for text in [
        "(x^2+y^2)^4+(y^4+z^4)^2",
        "x^4*y^2+y^6-3*x*y^4*z+3*x^2*y^2*z^2-x^3*z^3",
        "x^5+x*y^3*z+y^4*z",
    ] {
        let full = run(text, &RunConfig { mode: Mode::Full, ..RunConfig::default() }).unwrap();
        let fco = run(text, &RunConfig { mode: Mode::FirstCycleOnly, ..RunConfig::default() }).unwrap();
        assert_eq!(full.spectral.grp_h1, fco.spectral.grp_h1, "{text}");
        assert_eq!(full.invariants.sp_p1, fco.invariants.sp_p1, "{text}");
        if full.mu() == full.tau() {
            assert_eq!(full.spectral.grp_h2, fco.spectral.grp_h2, "{text}");
        }
    }
}

#[test]
fn auto_mode_picks_by_mu_tau() {
    let wh = run("(x^2+y^2)^4+(y^4+z^4)^2", &RunConfig::default()).unwrap();
    assert_eq!(wh.mode_used, Mode::FirstCycleOnly);
    assert!(wh.spectral.wh_shortcut_used);
    let nwh = run("x^5+y^4*z+x^4*y", &RunConfig::default()).unwrap();
    assert_eq!(nwh.mode_used, Mode::Full);
}

#[test]
fn exact_backend_on_a_quintic() {
    let cfg = RunConfig { mode: Mode::Full, exact: true, ..RunConfig::default() };
    let e = run("x^5+y^4*z+x^3*y^2", &cfg).unwrap();
    let m = run("x^5+y^4*z+x^3*y^2", &RunConfig { mode: Mode::Full, ..RunConfig::default() }).unwrap();
    assert_eq!(e.first, m.first);
    assert_eq!(e.second, m.second);
    assert_eq!(e.spectral, m.spectral);
}

#[test]
fn json_shape() {
    let r = run("x^5+y^4*z+x^4*y", &RunConfig::default()).unwrap();
    let v = r.to_json();
    assert_eq!(v["schema"], "polemono/1");
    for key in ["eps_prime", "theta", "eps", "E2", "E3", "grP_H1", "grP_H2", "certificate_per_k", "q0_observed", "all_certified"] {
        assert!(v["spectral"].get(key).is_some(), "missing spectral.{key}");
    }
    for key in ["m", "m_smooth", "syz", "tau", "ct", "st", "mdr"] {
        assert!(v["hilbert"].get(key).is_some(), "missing hilbert.{key}");
    }
    for key in ["h1_eigenspaces", "delta1", "delta2", "sp_P0", "sp_P1", "bs_roots_certified", "status"] {
        assert!(v["invariants"].get(key).is_some(), "missing invariants.{key}");
    }
    assert_eq!(v["spectral"]["E3"]["row2"]["1,2"], 1);
    assert_eq!(v["invariants"]["status"], "certified-euler");
    assert_eq!(v["spectral"]["q0_observed"], 9);
}
