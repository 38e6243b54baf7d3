//! The `K_{n,n}` normal form and the delta-bar membership calculus.
//!
//! Vertices of `K_{n,n}` are `[n] ∪ [n]′` with `i′` encoded as `n + i`.
//! Every regular embedding arises, up to isomorphism, from the normal-form
//! triple `(ell, r_delta, t)` of involutory graph automorphisms fixed by a
//! single involution `delta` of `[n]` with `delta(0) = 0`:
//!
//! - `ell` pairs `i ↔ (−i)′` (root-edge flip),
//! - `r_delta` acts as `delta` on `[n]` and as `j′ ↦ (1−j)′` on `[n]′`,
//! - `t` negates within each part.
//!
//! The working object is `delta_bar = r_delta ∘ t` restricted to `[n]`,
//! i.e. `delta_bar(k) = delta(−k)`: it fixes 0 and satisfies the skew
//! condition `delta_bar⁻¹(−k) = −delta_bar(k)` (equivalent to `delta` being
//! an involution). Together with the local rotation `R = r_delta ∘ t` and
//! the edge reversal `L = t ∘ ell` on all `2n` vertices, membership of
//! `delta_bar` in the nonorientable family is decided by two independent
//! routes kept as executable redundancy:
//!
//! 1. group route: `⟨R, L⟩` has exactly `4n²` elements and contains `t`;
//! 2. star route: for every shift `i` either the direct or the reflected
//!    translation identities admit witnesses `a(i), b(i)`, with the
//!    reflected form occurring at least once.
//!
//! The constructive family `delta_bar_{n,x}` (fix 0, negate evens, shift
//! odds by `x`) realizes every member exactly when `x² ≡ 2 (mod n)`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::flagmap::{FlagMap, FlagMapError};
use crate::numthy;
use crate::perm::{ClosureStatus, GroupClosure, Perm};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KnnError {
    Domain(&'static str),
    /// Which normal-form admissibility condition failed.
    NotAdmissible(AdmissibilityFailure),
    /// `⟨ell, r, t⟩` exceeded the `4n² + 1` element cap.
    Overflow {
        cap: usize,
    },
    /// Reduction mod `m` is not well defined: the witnesses are congruent
    /// mod `m` but their images are not.
    Congruence {
        k1: usize,
        k2: usize,
        modulus: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdmissibilityFailure {
    /// `|⟨ell, r, t⟩| ≠ 4n²`.
    GroupOrder { found: usize, expected: usize },
    /// The generated group does not act transitively on the `2n²` arcs.
    ArcOrbit { found: usize, expected: usize },
    /// `⟨r, t⟩` is not dihedral of order `2n` with `⟨rt⟩` regular on the
    /// arcs at the root vertex, or the vertex stabilizer exceeds it.
    VertexStabilizer(&'static str),
    /// The stabilizer of the root edge is not the Klein group `⟨ell, t⟩`.
    EdgeStabilizer(&'static str),
}

impl fmt::Display for KnnError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KnnError::Domain(msg) => write!(f, "domain error: {msg}"),
            KnnError::NotAdmissible(which) => write!(f, "triple not admissible: {which:?}"),
            KnnError::Overflow { cap } => write!(f, "group closure exceeded cap {cap}"),
            KnnError::Congruence { k1, k2, modulus } => write!(
                f,
                "reduction mod {modulus} ill-defined at {k1} ≡ {k2} (mod {modulus})"
            ),
        }
    }
}

impl core::error::Error for KnnError {}

impl From<FlagMapError> for KnnError {
    fn from(_: FlagMapError) -> KnnError {
        KnnError::Domain("derived involutions do not form a valid flag map")
    }
}

/// `k ↦ −k (mod n)`.
pub fn negation(n: usize) -> Perm {
    Perm::from_fn(n, |k| (n - k) % n).expect("bijection")
}

/// The normal-form `t` on `2n` points: negation within each part.
pub fn normal_t(n: usize) -> Perm {
    Perm::from_fn(2 * n, |v| {
        if v < n {
            (n - v) % n
        } else {
            n + (2 * n - v) % n
        }
    })
    .expect("bijection")
}

/// The normal-form triple `(ell, r_delta, t)` on the `2n` vertices,
/// with root vertex `0` and root edge `(0, 0′)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triple {
    n: usize,
    ell: Perm,
    r: Perm,
    t: Perm,
}

impl Triple {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ell(&self) -> &Perm {
        &self.ell
    }

    pub fn r(&self) -> &Perm {
        &self.r
    }

    pub fn t(&self) -> &Perm {
        &self.t
    }
}

/// Builds the normal-form triple for an involution `delta` fixing 0.
pub fn canonical_triple(n: usize, delta: &Perm) -> Result<Triple, KnnError> {
    if n < 2 {
        return Err(KnnError::Domain("n must be at least 2"));
    }
    if delta.degree() != n {
        return Err(KnnError::Domain("delta must act on [n]"));
    }
    if delta.apply(0) != 0 {
        return Err(KnnError::Domain("delta must fix 0"));
    }
    if (0..n).any(|k| delta.apply(delta.apply(k)) != k) {
        return Err(KnnError::Domain("delta must be an involution"));
    }
    let ell = Perm::from_fn(2 * n, |v| {
        if v < n {
            n + (n - v) % n // i ↦ (−i)′
        } else {
            (2 * n - v) % n // i′ ↦ −i
        }
    })
    .expect("bijection");
    let r = Perm::from_fn(2 * n, |v| {
        if v < n {
            delta.apply(v)
        } else {
            n + (n + 1 - (v - n)) % n // j′ ↦ (1−j)′
        }
    })
    .expect("bijection");
    let t = normal_t(n);
    debug_assert_eq!(
        ell.compose(&t).unwrap(),
        t.compose(&ell).unwrap(),
        "ell and t commute in the normal form"
    );
    Ok(Triple { n, ell, r, t })
}

/// A permutation of `[n]` fixing 0 and satisfying the skew condition
/// `perm⁻¹(−k) = −perm(k)`; carries its cached order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DeltaBar {
    perm: Perm,
    order: u64,
}

impl DeltaBar {
    /// Validates the two defining invariants and caches the order.
    pub fn new(perm: Perm) -> Result<DeltaBar, KnnError> {
        let n = perm.degree();
        if n < 2 {
            return Err(KnnError::Domain("delta_bar needs n >= 2"));
        }
        if perm.apply(0) != 0 {
            return Err(KnnError::Domain("delta_bar must fix 0"));
        }
        let inv = perm.inverse();
        for k in 0..n {
            if inv.apply((n - k) % n) != (n - perm.apply(k)) % n {
                return Err(KnnError::Domain("skew condition violated"));
            }
        }
        let order = perm.order();
        Ok(DeltaBar { perm, order })
    }

    pub fn identity(n: usize) -> DeltaBar {
        DeltaBar::new(Perm::identity(n)).expect("identity satisfies the invariants")
    }

    /// Transcribes an involution `delta` fixing 0 into its delta-bar:
    /// `delta_bar(k) = delta(−k)`.
    pub fn from_delta(delta: &Perm) -> Result<DeltaBar, KnnError> {
        let n = delta.degree();
        if n < 2 {
            return Err(KnnError::Domain("delta must act on at least 2 points"));
        }
        if delta.apply(0) != 0 {
            return Err(KnnError::Domain("delta must fix 0"));
        }
        if (0..n).any(|k| delta.apply(delta.apply(k)) != k) {
            return Err(KnnError::Domain("delta must be an involution"));
        }
        let perm = delta.compose(&negation(n)).expect("equal degrees");
        let order = perm.order();
        debug_assert!(DeltaBar::new(perm.clone()).is_ok());
        Ok(DeltaBar { perm, order })
    }

    /// The inverse transcription: `delta(k) = delta_bar(−k)`, always an
    /// involution fixing 0.
    pub fn to_delta(&self) -> Perm {
        self.perm
            .compose(&negation(self.n()))
            .expect("equal degrees")
    }

    pub fn n(&self) -> usize {
        self.perm.degree()
    }

    pub fn perm(&self) -> &Perm {
        &self.perm
    }

    /// Order of the cyclic group generated by the permutation.
    pub fn order_d(&self) -> u64 {
        self.order
    }

    /// `delta_bar^e(k)` for any integer exponent, without materializing the
    /// power: iterates |e| steps (exponents used here are < n).
    pub fn pow_point(&self, e: i64, k: usize) -> usize {
        let mut x = k;
        if e >= 0 {
            for _ in 0..e {
                x = self.perm.apply(x);
            }
        } else {
            let inv = self.perm.inverse();
            for _ in 0..(-e) {
                x = inv.apply(x);
            }
        }
        x
    }

    /// The local rotation `R` (acts as the permutation on `[n]`, as the
    /// `+1`-cycle on `[n]′`) and the part swap `L = (0 0′)(1 1′)⋯`.
    pub fn rotation_pair(&self) -> (Perm, Perm) {
        rotation_pair(&self.perm)
    }

    /// Group route: `⟨R, L⟩` closes at exactly `4n²` elements and contains
    /// the normal-form `t`.
    pub fn in_mnon_by_group(&self) -> bool {
        self.in_mnon_by_group_with_cap(4 * self.n() * self.n() + 1)
    }

    /// Group route with an explicit element cap (membership requires the
    /// closure to complete, so a cap below `4n²` can only reject).
    pub fn in_mnon_by_group_with_cap(&self, cap: usize) -> bool {
        let n = self.n();
        let (r, l) = self.rotation_pair();
        let closure = GroupClosure::close(&[r, l], cap);
        closure.status() == ClosureStatus::Complete
            && closure.len() == 4 * n * n
            && closure.contains(&normal_t(n))
    }

    /// One witness per shift `i`: `a = delta_bar(i)` is forced; the only
    /// viable `b` is `delta_bar^i(1)` for the direct identities and
    /// `−delta_bar^i(1)` for the reflected ones. Records the first
    /// variant whose identities hold for every `k`, or `Fail`.
    pub fn star_witnesses(&self) -> Vec<StarWitness> {
        let n = self.n();
        let powers = self.power_table();
        let inv = self.perm.inverse();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.perm.apply(i);
            let b1 = powers[i].apply(1);
            let b2 = (n - b1) % n;
            // b = delta_bar^{−a}(1), the value forced by setting k = 0
            let mut forced = 1usize;
            for _ in 0..a {
                forced = inv.apply(forced);
            }
            let (variant, b) = if star_relation_holds(&powers, &self.perm, i, a, b1, false) {
                debug_assert_eq!(b1, forced);
                (StarVariant::Star1, b1)
            } else if star_relation_holds(&powers, &self.perm, i, a, b2, true) {
                debug_assert_eq!(b2, forced);
                (StarVariant::Star2, b2)
            } else {
                (StarVariant::Fail, b1)
            };
            out.push(StarWitness { i, a, b, variant });
        }
        out
    }

    /// Star route: every shift has a witness and at least one is reflected.
    pub fn in_mnon_by_star(&self) -> bool {
        let ws = self.star_witnesses();
        ws.iter().all(|w| w.variant != StarVariant::Fail)
            && ws.iter().any(|w| w.variant == StarVariant::Star2)
    }

    /// `delta_bar^j` for `j ∈ 0..n` (all exponents the star identities use).
    fn power_table(&self) -> Vec<Perm> {
        let n = self.n();
        let mut powers = Vec::with_capacity(n);
        powers.push(Perm::identity(n));
        for j in 1..n {
            powers.push(self.perm.compose(&powers[j - 1]).expect("equal degrees"));
        }
        powers
    }

    /// The heavy route end to end: normal-form triple, derived map.
    pub fn derive_map(&self) -> Result<FlagMap, KnnError> {
        derived_map(&canonical_triple(self.n(), &self.to_delta())?)
    }

    /// Projection to `[m]` for `m | n`, defined by `k ↦ perm(k) mod m`.
    ///
    /// Well-definedness (congruent points have congruent images) is checked
    /// pair-by-pair, not assumed; the result is re-validated as a DeltaBar.
    pub fn reduction(&self, m: usize) -> Result<DeltaBar, KnnError> {
        let n = self.n();
        if m < 2 {
            return Err(KnnError::Domain("reduction modulus must be at least 2"));
        }
        if !n.is_multiple_of(m) {
            return Err(KnnError::Domain("reduction modulus must divide n"));
        }
        for k in m..n {
            let k0 = k % m;
            if self.perm.apply(k) % m != self.perm.apply(k0) % m {
                return Err(KnnError::Congruence {
                    k1: k,
                    k2: k0,
                    modulus: m,
                });
            }
        }
        let image: Vec<u32> = (0..m).map(|k| (self.perm.apply(k) % m) as u32).collect();
        let perm = Perm::from_image(image)
            .map_err(|_| KnnError::Domain("reduction is not a bijection"))?;
        DeltaBar::new(perm)
    }
}

/// `R` and `L` on `2n` points from any permutation of `[n]`.
///
/// Permutations outside the skew family (the linear orientable-side family
/// below) get the same transcription, so this is a free function.
pub fn rotation_pair(perm_on_n: &Perm) -> (Perm, Perm) {
    let n = perm_on_n.degree();
    let r = Perm::from_fn(2 * n, |v| {
        if v < n {
            perm_on_n.apply(v)
        } else {
            n + (v - n + 1) % n
        }
    })
    .expect("bijection");
    let l = Perm::from_fn(2 * n, |v| (v + n) % (2 * n)).expect("bijection");
    (r, l)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarVariant {
    /// Direct identities: `d(k+i) = d^b(k) + a` and `d^i(k)+1 = d^a(k+b)`.
    Star1,
    /// Reflected identities: `d(k+i) = d^b(−k) + a` and `d^i(k)+1 = d^a(−k+b)`.
    Star2,
    /// Neither variant holds for any admissible `(a, b)`.
    Fail,
}

/// Witness for one shift `i`; on `Fail`, `b` is the rejected direct
/// candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StarWitness {
    pub i: usize,
    pub a: usize,
    pub b: usize,
    pub variant: StarVariant,
}

/// Checks the two translation identities for every `k`, in the direct
/// (`reflected = false`) or reflected form.
pub fn star_relation_holds(
    powers: &[Perm],
    perm: &Perm,
    i: usize,
    a: usize,
    b: usize,
    reflected: bool,
) -> bool {
    let n = perm.degree();
    let pb = &powers[b];
    let pa = &powers[a];
    let pi = &powers[i];
    for k in 0..n {
        let kk = if reflected { (n - k) % n } else { k };
        if perm.apply((k + i) % n) != (pb.apply(kk) + a) % n {
            return false;
        }
        if (pi.apply(k) + 1) % n != pa.apply((kk + b) % n) {
            return false;
        }
    }
    true
}

/// The constructive family: fixes 0, negates even residues, shifts odd
/// residues by `x`. Preconditions: `n`, `x` even, `gcd(n, x) = 2`,
/// `n > x > 3`. (`x² ≡ 2 (mod n)` is deliberately *not* required here; the
/// membership routes reject non-solutions.)
pub fn deltabar_nx(n: usize, x: usize) -> Result<DeltaBar, KnnError> {
    if !n.is_multiple_of(2) || !x.is_multiple_of(2) {
        return Err(KnnError::Domain("n and x must be even"));
    }
    if !(3 < x && x < n) {
        return Err(KnnError::Domain("x must satisfy n > x > 3"));
    }
    if gcd(n as u64, x as u64) != 2 {
        return Err(KnnError::Domain("gcd(n, x) must be 2"));
    }
    let perm = Perm::from_fn(n, |k| if k % 2 == 0 { (n - k) % n } else { (k + x) % n })
        .expect("bijection");
    DeltaBar::new(perm)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// All members of the constructive family for this `n`, ordered by `x`:
/// `delta_bar_{n,x}` for even `x` with `n > x > 3` and `x² ≡ 2 (mod n)`.
/// Empty for odd `n`, for `n ≡ 0 (mod 4)` and for `n = 2`.
pub fn enumerate_nnon(n: usize) -> Vec<DeltaBar> {
    if !n.is_multiple_of(2) || n.is_multiple_of(4) || n == 2 {
        return Vec::new();
    }
    numthy::solve_x2_eq_2(n as u64)
        .solutions
        .iter()
        .map(|&x| x as usize)
        .filter(|&x| x > 3 && x < n && x % 2 == 0)
        .map(|x| deltabar_nx(n, x).expect("solutions satisfy the construction preconditions"))
        .collect()
}

/// Recovers `x` when the permutation is exactly `delta_bar_{n,x}`.
pub fn nx_parameter(db: &DeltaBar) -> Option<usize> {
    let n = db.n();
    if n < 6 || !n.is_multiple_of(2) {
        return None;
    }
    let x = (db.perm().apply(1) + n - 1) % n;
    match deltabar_nx(n, x) {
        Ok(candidate) if &candidate == db => Some(x),
        _ => None,
    }
}

/// The linear orientable-side family `k ↦ k(1 + r·d)`, valid when the
/// multiplicative order of `1 + r·d` mod `n` is exactly `d`. Its `⟨R, L⟩`
/// closes at `2n²` elements, giving the index-2 oracle for orientability.
/// Returned as a bare permutation: for most parameters it does not satisfy
/// the skew condition, so it is not a `DeltaBar`.
pub fn linear_rotation_family(n: usize, d: usize, r: usize) -> Result<Perm, KnnError> {
    if n < 3 {
        return Err(KnnError::Domain("n must be at least 3"));
    }
    if d == 0 || !n.is_multiple_of(d) {
        return Err(KnnError::Domain("d must divide n"));
    }
    let u = (1 + r * d) % n;
    if gcd(u as u64, n as u64) != 1 {
        return Err(KnnError::Domain("1 + r·d must be a unit mod n"));
    }
    let mut pow = u;
    let mut ord = 1usize;
    while pow != 1 {
        pow = pow * u % n;
        ord += 1;
    }
    if ord != d {
        return Err(KnnError::Domain("order of 1 + r·d mod n is not d"));
    }
    Ok(Perm::from_fn(n, |k| k * u % n).expect("units give bijections"))
}

/// Derives the flag map of an admissible triple: flags are the `4n²`
/// elements of `Γ = ⟨ell, r, t⟩` in breadth-first discovery order
/// (identity first, generator order `ell, r, t`), and the three involutions
/// are the right translations.
///
/// Admissibility is checked directly, each condition separately, so a
/// failure names what broke: transitivity on the `2n²` arcs; vertex
/// stabilizer `⟨r, t⟩` dihedral of order `2n` with `⟨rt⟩` regular on the
/// root's arcs; edge stabilizer the Klein group `⟨ell, t⟩`.
pub fn derived_map(triple: &Triple) -> Result<FlagMap, KnnError> {
    let n = triple.n;
    let expected = 4 * n * n;
    let cap = expected + 1;
    let gens = [triple.ell.clone(), triple.r.clone(), triple.t.clone()];
    let closure = GroupClosure::close(&gens, cap);
    if closure.status() == ClosureStatus::Overflow {
        return Err(KnnError::Overflow { cap });
    }
    if closure.len() != expected {
        return Err(KnnError::NotAdmissible(AdmissibilityFailure::GroupOrder {
            found: closure.len(),
            expected,
        }));
    }

    // transitivity on arcs: orbit of (0, 0′) under the three generators
    let arc_orbit = arc_orbit_size(n, &gens);
    if arc_orbit != 2 * n * n {
        return Err(KnnError::NotAdmissible(AdmissibilityFailure::ArcOrbit {
            found: arc_orbit,
            expected: 2 * n * n,
        }));
    }

    // vertex stabilizer: ⟨r, t⟩ ≅ D_n, ⟨rt⟩ regular on the arcs at 0
    let rt_group = GroupClosure::close(&[triple.r.clone(), triple.t.clone()], 2 * n + 1);
    if rt_group.status() != ClosureStatus::Complete || rt_group.len() != 2 * n {
        return Err(KnnError::NotAdmissible(
            AdmissibilityFailure::VertexStabilizer("⟨r, t⟩ does not have order 2n"),
        ));
    }
    let rt = triple.r.compose(&triple.t).expect("equal degrees");
    if rt.order() != n as u64 {
        return Err(KnnError::NotAdmissible(
            AdmissibilityFailure::VertexStabilizer("rt does not have order n"),
        ));
    }
    if rt.apply(0) != 0 || rt.orbit(n).len() != n {
        return Err(KnnError::NotAdmissible(
            AdmissibilityFailure::VertexStabilizer("⟨rt⟩ is not regular on the root's arcs"),
        ));
    }
    let fixing_root = closure
        .iter_images()
        .filter(|img| img[0] == 0)
        .collect::<Vec<_>>();
    if fixing_root.len() != 2 * n
        || fixing_root
            .iter()
            .any(|img| rt_group.index_of_image(img).is_none())
    {
        return Err(KnnError::NotAdmissible(
            AdmissibilityFailure::VertexStabilizer("vertex stabilizer exceeds ⟨r, t⟩"),
        ));
    }

    // edge stabilizer: the Klein group {id, ell, t, ell∘t}
    let ell_t = triple.ell.compose(&triple.t).expect("equal degrees");
    let klein = [
        Perm::identity(2 * n),
        triple.ell.clone(),
        triple.t.clone(),
        ell_t,
    ];
    if klein[1] == klein[2] || klein[1].is_identity() || klein[2].is_identity() {
        return Err(KnnError::NotAdmissible(
            AdmissibilityFailure::EdgeStabilizer("⟨ell, t⟩ is not the Klein four-group"),
        ));
    }
    let fixing_edge: Vec<_> = closure
        .iter_images()
        .filter(|img| (img[0] == 0 && img[n] == n as u32) || (img[0] == n as u32 && img[n] == 0))
        .collect();
    if fixing_edge.len() != 4
        || fixing_edge
            .iter()
            .any(|img| klein.iter().all(|k| k.image() != *img))
    {
        return Err(KnnError::NotAdmissible(
            AdmissibilityFailure::EdgeStabilizer("edge stabilizer is not ⟨ell, t⟩"),
        ));
    }

    // right translations on the indexed group elements
    let count = closure.len();
    let mut lambda = vec![0u32; count];
    let mut rho = vec![0u32; count];
    let mut tau = vec![0u32; count];
    let degree = 2 * n;
    let mut buf = vec![0u32; degree];
    for idx in 0..count {
        let g = closure.element_image(idx);
        for (dst, gen) in [
            (&mut lambda, &triple.ell),
            (&mut rho, &triple.r),
            (&mut tau, &triple.t),
        ] {
            for i in 0..degree {
                buf[i] = g[gen.apply(i)];
            }
            dst[idx] = closure
                .index_of_image(&buf)
                .expect("closure is complete, translates stay inside")
                as u32;
        }
    }
    Ok(FlagMap::new(
        Perm::from_image(lambda).expect("right translations are bijections"),
        Perm::from_image(rho).expect("right translations are bijections"),
        Perm::from_image(tau).expect("right translations are bijections"),
    )?)
}

/// Size of the orbit of the root arc `(0, 0′)` under the given generators
/// acting coordinatewise on ordered vertex pairs.
fn arc_orbit_size(n: usize, gens: &[Perm]) -> usize {
    let verts = 2 * n;
    let mut seen = vec![false; verts * verts];
    let root = n; // (0, n)
    seen[root] = true;
    let mut stack = vec![(0u32, n as u32)];
    let mut size = 0usize;
    while let Some((u, v)) = stack.pop() {
        size += 1;
        for g in gens {
            let nu = g.apply(u as usize) as u32;
            let nv = g.apply(v as usize) as u32;
            let id = nu as usize * verts + nv as usize;
            if !seen[id] {
                seen[id] = true;
                stack.push((nu, nv));
            }
        }
    }
    size
}
