//! Combinatorial maps as flag systems `(F; λ, ρ, τ)`.
//!
//! A valid map consists of three fixed-point-free involutions of the flag
//! set with `λτ = τλ` and `⟨λ, ρ, τ⟩` transitive. Orbits of `⟨ρ,τ⟩`,
//! `⟨λ,τ⟩` and `⟨ρ,λ⟩` are the vertices, edges and faces; the even-word
//! subgroup `⟨ρτ, τλ⟩` is transitive exactly on the nonorientable maps.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::perm::Perm;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FlagMapError {
    /// The three involutions must share one degree.
    DegreeMismatch,
    /// `which` is not an involution or has a fixed point.
    FixedPoint { which: &'static str },
    /// `λτ ≠ τλ`.
    Commutation,
    /// `⟨λ, ρ, τ⟩` does not act transitively on the flags.
    NotTransitive,
}

impl fmt::Display for FlagMapError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlagMapError::DegreeMismatch => write!(f, "involutions have mismatched degrees"),
            FlagMapError::FixedPoint { which } => {
                write!(f, "{which} is not a fixed-point-free involution")
            }
            FlagMapError::Commutation => write!(f, "lambda and tau do not commute"),
            FlagMapError::NotTransitive => write!(f, "flag action is not transitive"),
        }
    }
}

impl core::error::Error for FlagMapError {}

/// A validated combinatorial map.
#[derive(Clone, PartialEq, Eq)]
pub struct FlagMap {
    lambda: Perm,
    rho: Perm,
    tau: Perm,
}

impl fmt::Debug for FlagMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FlagMap({} flags)", self.flag_count())
    }
}

/// Orbit-derived counts and surface data of a map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapInvariants {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler_characteristic: i64,
    pub orientable: bool,
    /// Genus when orientable, crosscap number otherwise.
    pub genus_or_crosscaps: u64,
    pub valency: usize,
    pub covalency: usize,
}

impl FlagMap {
    /// Validates the map axioms and wraps the three involutions.
    pub fn new(lambda: Perm, rho: Perm, tau: Perm) -> Result<FlagMap, FlagMapError> {
        let n = lambda.degree();
        if rho.degree() != n || tau.degree() != n {
            return Err(FlagMapError::DegreeMismatch);
        }
        for (p, which) in [(&lambda, "lambda"), (&rho, "rho"), (&tau, "tau")] {
            for i in 0..n {
                let j = p.apply(i);
                if j == i || p.apply(j) != i {
                    return Err(FlagMapError::FixedPoint { which });
                }
            }
        }
        let lt = lambda.compose(&tau).expect("equal degrees");
        let tl = tau.compose(&lambda).expect("equal degrees");
        if lt != tl {
            return Err(FlagMapError::Commutation);
        }
        let map = FlagMap { lambda, rho, tau };
        if orbit_count(n, &[&map.lambda, &map.rho, &map.tau]) != 1 {
            return Err(FlagMapError::NotTransitive);
        }
        Ok(map)
    }

    pub fn flag_count(&self) -> usize {
        self.lambda.degree()
    }

    pub fn lambda(&self) -> &Perm {
        &self.lambda
    }

    pub fn rho(&self) -> &Perm {
        &self.rho
    }

    pub fn tau(&self) -> &Perm {
        &self.tau
    }

    /// True iff the even-word subgroup `⟨ρτ, τλ⟩` has two flag orbits.
    /// (On a valid map the count is 1, nonorientable, or 2.)
    pub fn is_orientable(&self) -> bool {
        let rt = self.rho.compose(&self.tau).expect("equal degrees");
        let tl = self.tau.compose(&self.lambda).expect("equal degrees");
        let orbits = orbit_count(self.flag_count(), &[&rt, &tl]);
        debug_assert!(orbits == 1 || orbits == 2);
        orbits >= 2
    }

    /// True iff some map automorphism carries flag 0 to every flag:
    /// each target is tried by propagating the correspondence through
    /// `λ, ρ, τ` from the root.
    pub fn is_regular(&self) -> bool {
        (0..self.flag_count()).all(|target| self.extend_correspondence(self, target).is_some())
    }

    /// True iff a bijection of flag sets commuting with all three
    /// involutions exists. Anchoring flag 0 of `self` against every flag of
    /// `other` is exhaustive because the flag action is transitive.
    pub fn isomorphic(&self, other: &FlagMap) -> bool {
        if self.flag_count() != other.flag_count() {
            return false;
        }
        (0..other.flag_count()).any(|anchor| self.extend_correspondence(other, anchor).is_some())
    }

    /// Extends `0 ↦ anchor` to a full equivariant bijection, or reports the
    /// contradiction that makes one impossible.
    fn extend_correspondence(&self, other: &FlagMap, anchor: usize) -> Option<Vec<u32>> {
        const UNSET: u32 = u32::MAX;
        let n = self.flag_count();
        let mut phi = vec![UNSET; n];
        let mut hit = vec![false; n];
        let mut stack = vec![0usize];
        phi[0] = anchor as u32;
        hit[anchor] = true;
        while let Some(f) = stack.pop() {
            let img = phi[f] as usize;
            for (g1, g2) in [
                (&self.lambda, &other.lambda),
                (&self.rho, &other.rho),
                (&self.tau, &other.tau),
            ] {
                let x = g1.apply(f);
                let y = g2.apply(img) as u32;
                if phi[x] == UNSET {
                    if hit[y as usize] {
                        return None; // not injective
                    }
                    phi[x] = y;
                    hit[y as usize] = true;
                    stack.push(x);
                } else if phi[x] != y {
                    return None;
                }
            }
        }
        // transitivity of the flag action makes the propagation total
        debug_assert!(phi.iter().all(|&v| v != UNSET));
        Some(phi)
    }

    /// Orbit counts, Euler characteristic and surface type.
    ///
    /// Valency and covalency are half the orbit size of the root flag's
    /// vertex and face; on the regular maps built here all vertex orbits
    /// (and all face orbits) have one size, which `debug_assert`s below
    /// keep checked rather than assumed.
    pub fn invariants(&self) -> MapInvariants {
        let n = self.flag_count();
        let vertex_orbits = orbit_sizes(n, &[&self.rho, &self.tau]);
        let edge_orbits = orbit_sizes(n, &[&self.lambda, &self.tau]);
        let face_orbits = orbit_sizes(n, &[&self.rho, &self.lambda]);
        let vertices = vertex_orbits.len();
        let edges = edge_orbits.len();
        let faces = face_orbits.len();
        let euler_characteristic = vertices as i64 - edges as i64 + faces as i64;
        let orientable = self.is_orientable();
        let genus_or_crosscaps = if orientable {
            debug_assert!(euler_characteristic % 2 == 0);
            ((2 - euler_characteristic) / 2) as u64
        } else {
            (2 - euler_characteristic) as u64
        };
        debug_assert!(edge_orbits.iter().all(|&(_, s)| s == 4));
        MapInvariants {
            vertices,
            edges,
            faces,
            euler_characteristic,
            orientable,
            genus_or_crosscaps,
            valency: orbit_size_of(n, &[&self.rho, &self.tau], 0) / 2,
            covalency: orbit_size_of(n, &[&self.rho, &self.lambda], 0) / 2,
        }
    }
}

/// Number of orbits of the group generated by `gens` on `0..n`.
///
/// Forward closure suffices: a finite set closed under bijections is closed
/// under their inverses.
pub(crate) fn orbit_count(n: usize, gens: &[&Perm]) -> usize {
    orbit_sizes(n, gens).len()
}

/// `(representative, size)` per orbit, representatives ascending.
pub(crate) fn orbit_sizes(n: usize, gens: &[&Perm]) -> Vec<(usize, usize)> {
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        stack.push(start);
        let mut size = 0;
        while let Some(f) = stack.pop() {
            size += 1;
            for g in gens {
                let x = g.apply(f);
                if !seen[x] {
                    seen[x] = true;
                    stack.push(x);
                }
            }
        }
        out.push((start, size));
    }
    out
}

fn orbit_size_of(n: usize, gens: &[&Perm], point: usize) -> usize {
    let mut seen = vec![false; n];
    let mut stack = vec![point];
    seen[point] = true;
    let mut size = 0;
    while let Some(f) = stack.pop() {
        size += 1;
        for g in gens {
            let x = g.apply(f);
            if !seen[x] {
                seen[x] = true;
                stack.push(x);
            }
        }
    }
    size
}

/// The unique nonorientable regular embedding of the 4-cycle `K_{2,2}`,
/// on the projective plane, as an explicit 16-flag map.
///
/// Model: an octagon with antipodal boundary identification. Flag `2i` is
/// (corner `i`, side `i`), flag `2i+1` is (corner `i`, side `i−1`); `ρ`
/// swaps the two sides at a corner, `λ` swaps the two corners of a side,
/// `τ` is the antipodal shift.
pub fn projective_k22_map() -> FlagMap {
    let mut lambda = vec![0u32; 16];
    let mut rho = vec![0u32; 16];
    let mut tau = vec![0u32; 16];
    for i in 0..8u32 {
        let a = 2 * i;
        let b = (2 * i + 3) % 16;
        lambda[a as usize] = b;
        lambda[b as usize] = a;
        rho[(2 * i) as usize] = 2 * i + 1;
        rho[(2 * i + 1) as usize] = 2 * i;
    }
    for f in 0..16u32 {
        tau[f as usize] = (f + 8) % 16;
    }
    FlagMap::new(
        Perm::from_image(lambda).expect("bijection"),
        Perm::from_image(rho).expect("bijection"),
        Perm::from_image(tau).expect("bijection"),
    )
    .expect("valid by construction")
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Flag system of an orientable map given by a rotation system.
    ///
    /// Darts come in reversal pairs; `rotations` lists the counterclockwise
    /// dart cycle at each vertex. Flags are darts × {0, 1}.
    pub(super) fn from_rotation_system(rotations: &[Vec<usize>], reversal: &[usize]) -> FlagMap {
        let nd = reversal.len();
        let mut sigma = vec![0usize; nd];
        for cyc in rotations {
            for (i, &d) in cyc.iter().enumerate() {
                sigma[d] = cyc[(i + 1) % cyc.len()];
            }
        }
        let mut sigma_inv = vec![0usize; nd];
        for d in 0..nd {
            sigma_inv[sigma[d]] = d;
        }
        let nf = 2 * nd;
        let mut lambda = vec![0u32; nf];
        let mut rho = vec![0u32; nf];
        let mut tau = vec![0u32; nf];
        for d in 0..nd {
            tau[2 * d] = (2 * d + 1) as u32;
            tau[2 * d + 1] = (2 * d) as u32;
            lambda[2 * d] = (2 * reversal[d] + 1) as u32;
            lambda[2 * d + 1] = (2 * reversal[d]) as u32;
            rho[2 * d] = (2 * sigma[d] + 1) as u32;
            rho[2 * d + 1] = (2 * sigma_inv[d]) as u32;
        }
        FlagMap::new(
            Perm::from_image(lambda).unwrap(),
            Perm::from_image(rho).unwrap(),
            Perm::from_image(tau).unwrap(),
        )
        .unwrap()
    }

    /// 4-cycle on the sphere: regular, orientable, genus 0.
    fn c4_sphere() -> FlagMap {
        let reversal = vec![1, 0, 3, 2, 5, 4, 7, 6];
        let rotations = vec![vec![0, 7], vec![2, 1], vec![4, 3], vec![6, 5]];
        from_rotation_system(&rotations, &reversal)
    }

    /// Theta graph with one strand subdivided: valid but not regular
    /// (vertex valencies 3, 3, 2).
    fn subdivided_theta() -> FlagMap {
        let reversal = vec![1, 0, 3, 2, 5, 4, 7, 6];
        let rotations = vec![vec![0, 2, 4], vec![1, 7, 3], vec![5, 6]];
        from_rotation_system(&rotations, &reversal)
    }

    #[test]
    fn validate_rejects_fixed_points() {
        let lambda = Perm::from_image(vec![0, 2, 1, 3]).unwrap(); // fixes 0 and 3
        let rho = Perm::from_image(vec![1, 0, 3, 2]).unwrap();
        let tau = Perm::from_image(vec![3, 2, 1, 0]).unwrap();
        assert_eq!(
            FlagMap::new(lambda, rho, tau),
            Err(FlagMapError::FixedPoint { which: "lambda" })
        );
    }

    #[test]
    fn validate_rejects_intransitive_systems() {
        // two disjoint 4-flag blocks
        let lambda = Perm::from_image(vec![1, 0, 3, 2, 5, 4, 7, 6]).unwrap();
        let rho = Perm::from_image(vec![2, 3, 0, 1, 6, 7, 4, 5]).unwrap();
        let tau = Perm::from_image(vec![3, 2, 1, 0, 7, 6, 5, 4]).unwrap();
        assert_eq!(
            FlagMap::new(lambda, rho, tau),
            Err(FlagMapError::NotTransitive)
        );
    }

    #[test]
    fn validate_rejects_noncommuting_lambda_tau() {
        // rho does not commute with tau at a valency-3 vertex, so passing it
        // in the lambda slot must fail the commutation axiom
        let m = subdivided_theta();
        assert_eq!(
            FlagMap::new(m.rho().clone(), m.lambda().clone(), m.tau().clone()),
            Err(FlagMapError::Commutation)
        );
    }

    #[test]
    fn c4_sphere_is_a_regular_orientable_map() {
        let m = c4_sphere();
        let inv = m.invariants();
        assert_eq!((inv.vertices, inv.edges, inv.faces), (4, 4, 2));
        assert_eq!(inv.euler_characteristic, 2);
        assert!(inv.orientable);
        assert_eq!(inv.genus_or_crosscaps, 0);
        assert_eq!(inv.valency, 2);
        assert_eq!(inv.covalency, 4);
        assert!(m.is_regular());
    }

    #[test]
    fn subdivided_theta_is_valid_but_irregular() {
        let m = subdivided_theta();
        let inv = m.invariants();
        assert_eq!((inv.vertices, inv.edges, inv.faces), (3, 4, 3));
        assert_eq!(inv.euler_characteristic, 2);
        assert!(inv.orientable);
        assert!(!m.is_regular());
    }

    #[test]
    fn projective_k22_map_invariants() {
        let m = projective_k22_map();
        assert_eq!(m.flag_count(), 16);
        let inv = m.invariants();
        assert_eq!((inv.vertices, inv.edges, inv.faces), (4, 4, 1));
        assert_eq!(inv.euler_characteristic, 1);
        assert!(!inv.orientable);
        assert_eq!(inv.genus_or_crosscaps, 1);
        assert_eq!(inv.valency, 2);
        assert_eq!(inv.covalency, 8);
        assert!(m.is_regular());
        assert!(!m.is_orientable());
    }

    #[test]
    fn isomorphism_is_reflexive_and_respects_flag_count() {
        let m = projective_k22_map();
        assert!(m.isomorphic(&m));
        assert!(!m.isomorphic(&c4_sphere()));

        let c4 = c4_sphere();
        assert!(c4.isomorphic(&c4));
        assert!(!c4.isomorphic(&subdivided_theta())); // same flag count, 16
    }

    /// Conjugating all three involutions by a relabeling permutation moves
    /// the root flag; verdicts must not change and the relabeled map must be
    /// isomorphic to the original.
    #[test]
    fn verdicts_are_root_independent() {
        let sigma =
            Perm::from_image(vec![5, 9, 14, 3, 0, 7, 11, 2, 8, 15, 1, 6, 13, 4, 10, 12]).unwrap();
        let sigma_inv = sigma.inverse();
        let relabel = |p: &Perm| sigma.compose(p).unwrap().compose(&sigma_inv).unwrap();
        let tau2 =
            Perm::from_image(vec![3, 6, 12, 0, 9, 1, 15, 10, 4, 13, 2, 8, 5, 14, 7, 11]).unwrap();
        let tau2_inv = tau2.inverse();
        let relabel2 = |p: &Perm| tau2.compose(p).unwrap().compose(&tau2_inv).unwrap();
        for m in [projective_k22_map(), subdivided_theta()] {
            let moved = FlagMap::new(relabel(m.lambda()), relabel(m.rho()), relabel(m.tau()))
                .expect("relabeling preserves validity");
            assert_eq!(m.is_regular(), moved.is_regular());
            assert_eq!(m.is_orientable(), moved.is_orientable());
            // symmetric and (through a second relabeling) transitive
            let moved2 =
                FlagMap::new(relabel2(m.lambda()), relabel2(m.rho()), relabel2(m.tau())).unwrap();
            assert!(m.isomorphic(&moved));
            assert!(moved.isomorphic(&m));
            assert!(moved.isomorphic(&moved2));
            assert!(m.isomorphic(&moved2));
            let (a, b) = (m.invariants(), moved.invariants());
            assert_eq!(
                (a.vertices, a.edges, a.faces),
                (b.vertices, b.edges, b.faces)
            );
            assert_eq!(a.euler_characteristic, b.euler_characteristic);
            if m.is_regular() {
                // valency/covalency are root-orbit sizes; only homogeneous
                // (in particular regular) maps pin them globally
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn orbit_partitions_cover_all_flags() {
        for m in [c4_sphere(), subdivided_theta(), projective_k22_map()] {
            let n = m.flag_count();
            for gens in [
                [m.rho(), m.tau()],
                [m.lambda(), m.tau()],
                [m.rho(), m.lambda()],
            ] {
                let total: usize = orbit_sizes(n, &gens).iter().map(|&(_, s)| s).sum();
                assert_eq!(total, n);
            }
            // every edge orbit has exactly 4 flags
            assert!(orbit_sizes(n, &[m.lambda(), m.tau()])
                .iter()
                .all(|&(_, s)| s == 4));
        }
    }
}
