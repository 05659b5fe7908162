//! Independent brute-force oracles for the enumerators and the divisor
//! formulas. Nothing here goes through the library's own canonicalization.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use fcone_core::kmaps::beta_degrees;
use fcone_core::logfano::certificate_is_valid;
use fcone_core::{
    canonical_class, enumerate_four_partitions, enumerate_shapes, f_positivity, f_values,
    generate_constraints, phi_divisor_map, pullback_alpha, BoundaryCombo, KDivisor, LinearForm,
    MDivisor, Multiplier, Rational, Relation, Sense, Subset, Verdict,
};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn r(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn stirling2(n: usize, k: usize) -> u64 {
    let mut t = vec![vec![0u64; k + 1]; n + 1];
    t[0][0] = 1;
    for i in 1..=n {
        for j in 1..=k.min(i) {
            t[i][j] = j as u64 * t[i - 1][j] + t[i - 1][j - 1];
        }
    }
    t[n][k]
}

/// Set partition as sorted block masks.
fn brute_partitions(m: usize) -> BTreeSet<Vec<u32>> {
    let mut out = BTreeSet::new();
    for code in 0..4usize.pow(m as u32) {
        let mut blocks = [0u32; 4];
        let mut c = code;
        for i in 0..m {
            blocks[c % 4] |= 1 << i;
            c /= 4;
        }
        if blocks.iter().all(|&b| b != 0) {
            let mut v = blocks.to_vec();
            v.sort_unstable();
            out.insert(v);
        }
    }
    out
}

fn lib_partition_masks(m: usize) -> Vec<Vec<u32>> {
    enumerate_four_partitions(m)
        .unwrap()
        .map(|p| {
            let mut v: Vec<u32> = p.parts().iter().map(|s| s.mask()).collect();
            v.sort_unstable();
            v
        })
        .collect()
}

#[test]
fn partitions_match_brute_force_and_stirling() {
    for m in 4..=8 {
        let brute = brute_partitions(m);
        let lib = lib_partition_masks(m);
        let lib_set: BTreeSet<_> = lib.iter().cloned().collect();
        assert_eq!(lib.len(), lib_set.len(), "duplicates for m={m}");
        assert_eq!(lib_set, brute, "m={m}");
        assert_eq!(lib.len() as u64, stirling2(m, 4), "m={m}");
    }
    assert_eq!(stirling2(5, 4), 10);
    assert_eq!(stirling2(6, 4), 65);
    assert_eq!(stirling2(7, 4), 350);
}

fn apply(p: &[u32], perm: &[usize]) -> Vec<u32> {
    let mut v: Vec<u32> = p
        .iter()
        .map(|&b| {
            (0..perm.len())
                .filter(|i| b & (1 << i) != 0)
                .fold(0u32, |acc, i| acc | 1 << perm[i])
        })
        .collect();
    v.sort_unstable();
    v
}

/// Orbit sizes under the group generated by the given (0-based) transpositions.
fn orbit_sizes(m: usize, swaps: &[(usize, usize)]) -> Vec<usize> {
    let all: Vec<Vec<u32>> = brute_partitions(m).into_iter().collect();
    let index: HashMap<&Vec<u32>, usize> = all.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut seen = vec![false; all.len()];
    let mut sizes = Vec::new();
    for start in 0..all.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut size = 0;
        while let Some(k) = stack.pop() {
            size += 1;
            for &(a, b) in swaps {
                let mut perm: Vec<usize> = (0..m).collect();
                perm.swap(a, b);
                let j = index[&apply(&all[k], &perm)];
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        sizes.push(size);
    }
    sizes.sort_unstable();
    sizes
}

#[test]
fn shapes_are_orbits() {
    for m in 5..=7 {
        let fixing_last: Vec<_> = (0..m - 2).map(|i| (i, i + 1)).collect();
        let mut lib: Vec<usize> = enumerate_shapes(m, Some(m))
            .unwrap()
            .iter()
            .map(|c| c.orbit_size)
            .collect();
        lib.sort_unstable();
        assert_eq!(lib, orbit_sizes(m, &fixing_last), "special, m={m}");

        let all_swaps: Vec<_> = (0..m - 1).map(|i| (i, i + 1)).collect();
        let mut lib: Vec<usize> = enumerate_shapes(m, None)
            .unwrap()
            .iter()
            .map(|c| c.orbit_size)
            .collect();
        lib.sort_unstable();
        assert_eq!(lib, orbit_sizes(m, &all_swaps), "plain, m={m}");
    }
}

/// Oracle divisor: coefficient per subset mask, identified with its complement
/// by storing under the mask that does not contain the top label.
struct Oracle {
    m: usize,
    c: HashMap<u32, Rational>,
}

impl Oracle {
    fn key(&self, mask: u32) -> u32 {
        let full = (1u32 << self.m) - 1;
        if mask & (1 << (self.m - 1)) != 0 {
            full & !mask
        } else {
            mask
        }
    }
    fn add(&mut self, mask: u32, v: Rational) {
        let k = self.key(mask);
        *self.c.entry(k).or_insert_with(Rational::zero) += v;
    }
    fn get(&self, mask: u32) -> Rational {
        self.c
            .get(&self.key(mask))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }
    fn f(&self, blocks: &[u32]) -> Rational {
        let i = blocks[0];
        let mut v = Rational::zero();
        for &o in &blocks[1..] {
            v += self.get(i | o);
        }
        for &b in blocks {
            v -= self.get(b);
        }
        v
    }
}

#[test]
fn f_values_match_oracle_on_random_divisors() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..30 {
        let m = 5 + trial % 3;
        let full = (1u32 << m) - 1;
        let mut lib = MDivisor::zero(m).unwrap();
        let mut oracle = Oracle {
            m,
            c: HashMap::new(),
        };
        for _ in 0..12 {
            let mask = rng.gen_range(1..full);
            let v = r(rng.gen_range(-5..=5), rng.gen_range(1..=4));
            lib.add_term(Subset::from_mask(m, mask).unwrap(), v.clone())
                .unwrap();
            oracle.add(mask, v);
        }
        for fv in f_values(&lib).unwrap() {
            let blocks: Vec<u32> = fv.partition.parts().iter().map(|s| s.mask()).collect();
            assert_eq!(fv.value, oracle.f(&blocks), "m={m} {}", fv.partition);
        }
    }
}

/// `α*K_n` written out from the closed formula, on the oracle's keys.
fn alpha_k_closed_form(n: usize) -> Oracle {
    let m = n + 1;
    let mut o = Oracle {
        m,
        c: HashMap::new(),
    };
    o.add(1 << n, r(n as i64 - 2, 1));
    for mask in 1u32..(1 << n) {
        let s = mask.count_ones() as usize;
        if (3..=n - 1).contains(&s) {
            o.add(mask, r(s as i64 - 2, 1));
        }
    }
    o
}

#[test]
fn alpha_canonical_matches_closed_formula() {
    for n in 3..=7 {
        let lib = pullback_alpha(&canonical_class(n).unwrap()).unwrap();
        let oracle = alpha_k_closed_form(n);
        let m = n + 1;
        for mask in 1u32..((1 << m) - 1) {
            let s = Subset::from_mask(m, mask).unwrap();
            assert_eq!(lib.coeff(s).unwrap(), oracle.get(mask), "n={n} S={s}");
        }
    }
}

#[test]
fn beta_degree_of_canonical_class() {
    for n in 3..=8 {
        for b in beta_degrees(&canonical_class(n).unwrap()).unwrap() {
            assert_eq!(b.degree, r(3 - 2 * n as i64, 1), "n={n} i={}", b.i);
        }
    }
    // K_2 = -2L has no boundary part, so the degree is -2 rather than -1.
    for b in beta_degrees(&canonical_class(2).unwrap()).unwrap() {
        assert_eq!(b.degree, r(-2, 1));
    }
}

#[test]
fn alpha_k4_first_violation() {
    let h = pullback_alpha(&canonical_class(4).unwrap()).unwrap();
    let d = f_positivity(&h, Sense::StrictlyNegative).unwrap();
    match d.verdict {
        Verdict::NotPositive { witness, value } => {
            assert_eq!(witness.to_string(), "{1,2}|{3}|{4}|{5}");
            assert_eq!(value, Rational::zero());
        }
        other => panic!("expected a violation, got {other:?}"),
    }
    let oracle = alpha_k_closed_form(4);
    let values: Vec<Rational> = brute_partitions(5).iter().map(|p| oracle.f(p)).collect();
    assert_eq!(values.iter().max().unwrap(), &Rational::zero());
}

fn form(constant: i64, terms: &[(usize, i64)], relation: Relation) -> LinearForm {
    LinearForm::from_terms(
        r(constant, 1),
        terms.iter().map(|&(s, c)| (s, r(c, 1))),
        relation,
    )
}

#[test]
fn hand_certificate_for_n6() {
    let lt = Relation::StrictlyNegative;
    let le = Relation::NonPositive;
    let system = vec![
        form(-1, &[(2, 3), (3, -1)], lt),
        form(0, &[(3, 2), (4, -1)], lt),
        form(2, &[(4, 3), (2, -3), (6, -1)], lt),
        form(0, &[(4, -1)], le),
        form(-1, &[(6, 1)], le),
    ];
    let mult = |form, k| Multiplier {
        form,
        lambda: r(k, 1),
    };
    let cert = vec![mult(0, 2), mult(1, 1), mult(2, 2), mult(3, 5), mult(4, 2)];
    assert!(certificate_is_valid(&system, &cert));

    let generated: Vec<LinearForm> = generate_constraints(6, true)
        .unwrap()
        .into_iter()
        .map(|g| g.form)
        .collect();
    for f in &system[..3] {
        assert!(generated.contains(f), "missing {f}");
    }
}

/// Coefficients of `α*(K_6 + Σ a_s B[s])` by the case list on M̄0,7.
fn table_coeff(s: Subset, a: &BTreeMap<usize, Rational>) -> Rational {
    let has7 = s.contains(7);
    match (s.len(), has7) {
        (1, true) => r(4, 1) + &a[&6],
        (1, false) => Rational::zero(),
        (2, true) => r(3, 1) + &a[&5],
        (2, false) => a[&2].clone(),
        (3, true) => r(2, 1) + &a[&4],
        (3, false) => Rational::one() + &a[&3],
        _ => unreachable!(),
    }
}

#[test]
fn n6_coefficient_table_at_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let mut a = BTreeMap::new();
        let mut combo = BoundaryCombo::new(6);
        for s in 2..=6 {
            let v = r(rng.gen_range(-20..=20), rng.gen_range(1..=9));
            combo.set(s, v.clone()).unwrap();
            a.insert(s, v);
        }
        let h = pullback_alpha(&KDivisor::from_combo(&combo, true).unwrap()).unwrap();
        for k in 1..=3 {
            for s in Subset::all_of_size(7, k) {
                assert_eq!(h.coeff(s).unwrap(), table_coeff(s, &a), "S={s}");
            }
        }
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn strata_cover_b_keys() {
    for n in 2..=8 {
        let corr = phi_divisor_map(n).unwrap();
        let expected: usize = (2..=n).map(|s| binomial(n, s)).sum();
        assert_eq!(corr.pairs.len(), expected, "n={n}");
        assert!(corr.covers_all_b_keys());
        assert!(corr.sources_distinct());
    }
}
