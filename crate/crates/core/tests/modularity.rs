//! The modular law in the lattice of good representatives.
//!
//! `a ∨ (b ∧ c) ≤ (a ∨ b) ∧ c` always holds for `a ≤ c`, and so does equality
//! when `b ∩ c` is already a good representative. Equality in general fails:
//! when `b ∩ c` only touches the state space outside the ball, `b ∧ c` drops
//! to `𝟎` while `(a ∨ b) ∩ c` can still contain states.

use density_lattice::harness::{bloch_state, modular_counterexample, random_element};
use density_lattice::herm::{pauli, HermOp, SpaceShape};
use density_lattice::lattice::{Lattice, LatticeElement};
use density_lattice::random::mix64;
use density_lattice::subspace::HermSubspace;

fn triple(lat: &Lattice, n: usize, seed: u64) -> (LatticeElement, LatticeElement, LatticeElement) {
    let k = |s: u64| 1 + (mix64(s, 0xA5) % 3) as usize;
    let a = random_element(n, k(mix64(seed, 1)), mix64(seed, 1)).unwrap();
    let d = random_element(n, k(mix64(seed, 2)), mix64(seed, 2)).unwrap();
    let b = random_element(n, k(mix64(seed, 3)) + 1, mix64(seed, 3)).unwrap();
    let c = lat.join(&a, &d).unwrap();
    (a, b, c)
}

#[test]
fn chord_counterexample() {
    let lat = Lattice::default();
    let (a, b, c) = modular_counterexample(&lat).unwrap();
    assert!(lat.leq(&a, &c).unwrap());
    assert_eq!((a.dim(), b.dim(), c.dim()), (1, 2, 3));
    assert!(lat.meet(&b, &c).unwrap().is_zero());
    // The raw intersection is one-dimensional but holds no state.
    assert_eq!(b.rep().intersect(c.rep(), &lat.tol).unwrap().dim(), 1);

    let r = lat.check_modular(&a, &b, &c).unwrap();
    assert!(!r.holds);
    assert!(lat.eq(&r.lhs, &a).unwrap());
    let chord = HermSubspace::span(2, &[HermOp::identity(2), pauli::x()], &lat.tol).unwrap();
    let expected = lat.element(chord, SpaceShape::simple(2)).unwrap();
    assert!(lat.eq(&r.rhs, &expected).unwrap());
}

#[test]
fn chord_counterexample_line_misses_the_ball() {
    // ρ(0,0,0.5) + t(ρ(0.3,0,0.4) − ρ(0,0,0.5)) reaches z = 0 at t = 5, Bloch x = 1.5.
    let p = bloch_state(0.0, 0.0, 0.5).unwrap().into_op();
    let q = bloch_state(0.3, 0.0, 0.4).unwrap().into_op();
    let hit = &p + &(&q - &p).scale(5.0);
    assert!(hit.min_eigenvalue() < -0.2);
}

#[test]
fn inequality_holds_on_random_triples() {
    let lat = Lattice::default();
    for n in [2, 3] {
        for t in 0..60 {
            let (a, b, c) = triple(&lat, n, mix64(17, t));
            let r = lat.check_modular(&a, &b, &c).unwrap();
            assert!(lat.leq(&r.lhs, &r.rhs).unwrap(), "n={n} trial {t}");
        }
    }
}

#[test]
fn law_holds_when_intersection_is_good() {
    let lat = Lattice::default();
    let mut covered = 0;
    for n in [2, 3] {
        for t in 0..60 {
            let (a, b, c) = triple(&lat, n, mix64(23, t));
            if lat.is_good(&b.rep().intersect(c.rep(), &lat.tol).unwrap()).unwrap() {
                covered += 1;
                assert!(lat.check_modular(&a, &b, &c).unwrap().holds, "n={n} trial {t}");
            }
        }
    }
    assert!(covered > 60);
}

/// The unconditional law, kept as a record; it fails on a few percent of
/// random triples for the reason shown by `chord_counterexample`.
#[test]
#[ignore = "the modular law does not hold in general; see chord_counterexample"]
fn law_holds_on_random_triples() {
    let lat = Lattice::default();
    for n in [2, 3] {
        for t in 0..200 {
            let (a, b, c) = triple(&lat, n, mix64(0, t));
            assert!(lat.check_modular(&a, &b, &c).unwrap().holds, "n={n} trial {t}");
        }
    }
}
