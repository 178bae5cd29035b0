//! Consistent semidirect data over small finite groups, for randomized checks.

use super::asp::SemidirectData;
use crate::rewriting::GroupDescriptor;
use crate::words::FreeWord;
use num_integer::Integer;
use rand::Rng;

fn pow(i: u32, e: i64) -> FreeWord {
    FreeWord::from_powers(&[(i, e)])
}

fn order_in_cyclic(v: i64, k: i64) -> i64 {
    k / v.rem_euclid(k).gcd(&k)
}

fn pow_mod(mut b: i64, mut e: i64, m: i64) -> i64 {
    let mut r = 1 % m;
    b = b.rem_euclid(m);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// `Z/m` acting on `Z/k` by `b ↦ b^u`, with `N = <a^d>` and `ψ(a^d) = b^v`.
pub fn cyclic_on_cyclic<R: Rng>(rng: &mut R) -> SemidirectData {
    loop {
        let m = rng.gen_range(1..=8i64);
        let k = rng.gen_range(1..=12i64);
        let u = rng.gen_range(0..k);
        let d = rng.gen_range(1..=m);
        let v = rng.gen_range(0..k);
        let unit = u.gcd(&k) == 1 || k == 1;
        let acts = pow_mod(u, m, k) == 1 % k;
        let divides = m % d == 0;
        let iso = order_in_cyclic(v, k) == m / d;
        let fixed = (v * u - v).rem_euclid(k) == 0;
        let central = pow_mod(u, d, k) == 1 % k;
        if unit && acts && divides && iso && fixed && central {
            let (n_gens, psi) = if d == m { (vec![], vec![]) } else { (vec![pow(0, d)], vec![pow(0, v)]) };
            return SemidirectData {
                a: GroupDescriptor::finite_cyclic("a", m),
                b: GroupDescriptor::finite_cyclic("b", k),
                action: vec![vec![pow(0, u)]],
                action_inv: None,
                n_gens,
                psi,
            };
        }
    }
}

/// `S_3` acting on `Z/k` through the sign, with `N` trivial or `A_3 = <r>`.
pub fn symmetric_on_cyclic<R: Rng>(rng: &mut R) -> SemidirectData {
    let k = rng.gen_range(1..=12i64);
    let (n_gens, psi) = if k % 3 == 0 && rng.gen_bool(0.5) {
        let v = if rng.gen_bool(0.5) { k / 3 } else { 2 * k / 3 };
        (vec![FreeWord::gen(1)], vec![pow(0, v)])
    } else {
        (vec![], vec![])
    };
    SemidirectData {
        a: GroupDescriptor::symmetric3("s", "r"),
        b: GroupDescriptor::finite_cyclic("b", k),
        action: vec![vec![pow(0, -1)], vec![pow(0, 1)]],
        action_inv: None,
        n_gens,
        psi,
    }
}

/// `S_3` acting on a copy of itself by conjugation, `ψ` the identity on
/// `N ∈ {1, A_3, S_3}`.
pub fn symmetric_by_conjugation<R: Rng>(rng: &mut R) -> SemidirectData {
    let n_gens = match rng.gen_range(0..3) {
        0 => vec![],
        1 => vec![FreeWord::gen(1)],
        _ => vec![FreeWord::gen(0), FreeWord::gen(1)],
    };
    let action =
        (0..2u32).map(|a| (0..2u32).map(|b| FreeWord::gen(b).conjugate_by(&FreeWord::gen(a))).collect()).collect();
    SemidirectData {
        a: GroupDescriptor::symmetric3("s", "r"),
        b: GroupDescriptor::symmetric3("u", "v"),
        action,
        action_inv: None,
        psi: n_gens.clone(),
        n_gens,
    }
}

pub fn random_finite<R: Rng>(rng: &mut R) -> SemidirectData {
    match rng.gen_range(0..3) {
        0 => cyclic_on_cyclic(rng),
        1 => symmetric_on_cyclic(rng),
        _ => symmetric_by_conjugation(rng),
    }
}

/// `Z = <a>` acting trivially on `Z = <b>`, `N = <a^2>`, `ψ(a^2) = b`.
pub fn integers_over_even() -> SemidirectData {
    SemidirectData {
        a: GroupDescriptor::cyclic("a"),
        b: GroupDescriptor::cyclic("b"),
        action: vec![vec![FreeWord::gen(0)]],
        action_inv: None,
        n_gens: vec![pow(0, 2)],
        psi: vec![FreeWord::gen(0)],
    }
}

/// `Z/2` acting trivially on `S_3` with `ψ(a) = s`; `b^{n^φ} = b^{n^ψ}` fails.
pub fn inconsistent_symmetric() -> SemidirectData {
    SemidirectData {
        a: GroupDescriptor::finite_cyclic("a", 2),
        b: GroupDescriptor::symmetric3("s", "r"),
        action: vec![vec![FreeWord::gen(0), FreeWord::gen(1)]],
        action_inv: None,
        n_gens: vec![FreeWord::gen(0)],
        psi: vec![FreeWord::gen(0)],
    }
}
