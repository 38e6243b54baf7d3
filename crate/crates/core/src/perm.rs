//! Permutations of `{0, …, m−1}` and capped breadth-first group closure.
//!
//! Composition convention, fixed once for the whole crate:
//! `p.compose(q)` applies `q` first, i.e. the result maps `i` to `p(q(i))`.
//! Every product written elsewhere (`R = r∘t`, `L = t∘ell`, words in the
//! generated groups) is transcribed under this single convention.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use hashbrown::hash_table::HashTable;
use hashbrown::DefaultHashBuilder;

/// A bijection of `{0, …, m−1}`, stored as its image array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    image: Box<[u32]>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PermError {
    /// The image array is not a bijection of `{0, …, m−1}`.
    NotBijective { degree: usize },
    /// Two operands act on different numbers of points.
    DegreeMismatch { left: usize, right: usize },
}

impl fmt::Display for PermError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PermError::NotBijective { degree } => {
                write!(f, "image array is not a bijection of 0..{degree}")
            }
            PermError::DegreeMismatch { left, right } => {
                write!(f, "degree mismatch: {left} vs {right}")
            }
        }
    }
}

impl core::error::Error for PermError {}

impl fmt::Debug for Perm {
    /// Cycle notation, e.g. `(0 3)(1 2)`; fixed points suppressed.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        let nontrivial: Vec<_> = cycles.iter().filter(|c| c.len() > 1).collect();
        if nontrivial.is_empty() {
            return write!(f, "id[{}]", self.degree());
        }
        for c in nontrivial {
            write!(f, "(")?;
            for (k, pt) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{pt}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        Perm {
            image: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from its image array, validating bijectivity.
    pub fn from_image(image: Vec<u32>) -> Result<Perm, PermError> {
        let degree = image.len();
        let mut seen = vec![false; degree];
        for &v in &image {
            if (v as usize) >= degree || seen[v as usize] {
                return Err(PermError::NotBijective { degree });
            }
            seen[v as usize] = true;
        }
        Ok(Perm {
            image: image.into_boxed_slice(),
        })
    }

    /// Builds a permutation of `0..degree` from a point map.
    pub fn from_fn(degree: usize, f: impl Fn(usize) -> usize) -> Result<Perm, PermError> {
        Perm::from_image((0..degree).map(|i| f(i) as u32).collect())
    }

    /// Transposition `(a b)` on `0..degree`.
    pub fn transposition(degree: usize, a: usize, b: usize) -> Perm {
        let mut image: Vec<u32> = (0..degree as u32).collect();
        image.swap(a, b);
        Perm {
            image: image.into_boxed_slice(),
        }
    }

    pub fn degree(&self) -> usize {
        self.image.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.image[i] as usize
    }

    pub fn image(&self) -> &[u32] {
        &self.image
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| i as u32 == v)
    }

    /// `self ∘ q`: the result maps `i` to `self(q(i))` (applies `q` first).
    pub fn compose(&self, q: &Perm) -> Result<Perm, PermError> {
        if self.degree() != q.degree() {
            return Err(PermError::DegreeMismatch {
                left: self.degree(),
                right: q.degree(),
            });
        }
        Ok(Perm {
            image: q.image.iter().map(|&i| self.image[i as usize]).collect(),
        })
    }

    pub fn inverse(&self) -> Perm {
        let mut image = vec![0u32; self.degree()];
        for (i, &v) in self.image.iter().enumerate() {
            image[v as usize] = i as u32;
        }
        Perm {
            image: image.into_boxed_slice(),
        }
    }

    /// `self^k` for any integer exponent (negative powers use the inverse).
    pub fn pow(&self, k: i64) -> Perm {
        let mut base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Perm::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = base.compose(&acc).expect("equal degrees");
            }
            base = base.compose(&base).expect("equal degrees");
            e >>= 1;
        }
        acc
    }

    /// Least `k ≥ 1` with `self^k = id`; the lcm of the cycle lengths.
    pub fn order(&self) -> u64 {
        let mut acc: u64 = 1;
        let mut seen = vec![false; self.degree()];
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len: u64 = 0;
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                k = self.apply(k);
                len += 1;
            }
            acc = lcm(acc, len);
        }
        acc
    }

    /// The forward orbit `k, p(k), p²(k), …` up to the first repetition.
    pub fn orbit(&self, k: usize) -> Vec<usize> {
        let mut out = vec![k];
        let mut j = self.apply(k);
        while j != k {
            out.push(j);
            j = self.apply(j);
        }
        out
    }

    /// Cycle decomposition; cycles are listed by their smallest point, fixed
    /// points included as singletons.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                cyc.push(k);
                k = self.apply(k);
            }
            out.push(cyc);
        }
        out
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosureStatus {
    /// The element list is closed under right-multiplication by every
    /// generator.
    Complete,
    /// Enumeration stopped the moment the element count exceeded the cap;
    /// the list holds `cap + 1` elements of a strictly larger group.
    Overflow,
}

/// Elements of `⟨generators⟩` discovered breadth-first from the identity by
/// right-multiplication, capped at `cap` elements.
///
/// Element storage is a flat arena keyed by the full image array; indices are
/// discovery order with the identity at 0, which downstream code relies on
/// for deterministic flag labelling.
pub struct GroupClosure {
    degree: usize,
    generators: Vec<Perm>,
    arena: Vec<u32>,
    table: HashTable<u32>,
    hasher: DefaultHashBuilder,
    status: ClosureStatus,
}

impl GroupClosure {
    /// Breadth-first closure of the group generated by `generators`.
    ///
    /// All generators must share one degree and the list must be non-empty;
    /// `cap ≥ 1`. Overflow is a status, not an error.
    pub fn close(generators: &[Perm], cap: usize) -> GroupClosure {
        assert!(
            !generators.is_empty(),
            "closure needs at least one generator"
        );
        assert!(cap >= 1, "cap must be at least 1");
        let degree = generators[0].degree();
        assert!(degree >= 1, "closure needs degree >= 1");
        assert!(
            generators.iter().all(|g| g.degree() == degree),
            "generators must share one degree"
        );

        let mut closure = GroupClosure {
            degree,
            generators: generators.to_vec(),
            arena: Vec::with_capacity(degree * (cap + 1).min(1 << 20)),
            table: HashTable::with_capacity((cap + 1).min(1 << 20)),
            hasher: DefaultHashBuilder::default(),
            status: ClosureStatus::Complete,
        };

        let identity: Vec<u32> = (0..degree as u32).collect();
        closure.insert_hashed(&identity, closure.hash_of(&identity));

        let mut buf = vec![0u32; degree];
        let mut next = 0usize;
        'bfs: while next < closure.len() {
            for g in generators {
                // right multiplication: element ∘ generator (apply g first)
                let base = next * degree;
                for (dst, &src) in buf.iter_mut().zip(g.image()) {
                    *dst = closure.arena[base + src as usize];
                }
                let hash = closure.hash_of(&buf);
                if closure.find_hashed(&buf, hash).is_none() {
                    closure.insert_hashed(&buf, hash);
                    if closure.len() > cap {
                        closure.status = ClosureStatus::Overflow;
                        break 'bfs;
                    }
                }
            }
            next += 1;
        }
        closure
    }

    fn hash_of(&self, image: &[u32]) -> u64 {
        use core::hash::BuildHasher;
        self.hasher.hash_one(image)
    }

    fn find_hashed(&self, image: &[u32], hash: u64) -> Option<usize> {
        self.table
            .find(hash, |&j| {
                &self.arena[j as usize * self.degree..(j as usize + 1) * self.degree] == image
            })
            .map(|&j| j as usize)
    }

    fn insert_hashed(&mut self, image: &[u32], hash: u64) {
        let idx = self.len() as u32;
        self.arena.extend_from_slice(image);
        let arena = &self.arena;
        let degree = self.degree;
        let hasher = &self.hasher;
        self.table.insert_unique(hash, idx, |&j| {
            use core::hash::BuildHasher;
            hasher.hash_one(&arena[j as usize * degree..(j as usize + 1) * degree])
        });
    }

    pub fn status(&self) -> ClosureStatus {
        self.status
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.arena.len() / self.degree.max(1)
    }

    pub fn is_empty(&self) -> bool {
        self.arena.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Image array of the element at `index` (discovery order, identity at 0).
    pub fn element_image(&self, index: usize) -> &[u32] {
        &self.arena[index * self.degree..(index + 1) * self.degree]
    }

    pub fn element(&self, index: usize) -> Perm {
        Perm {
            image: self.element_image(index).into(),
        }
    }

    pub fn iter_images(&self) -> impl Iterator<Item = &[u32]> {
        self.arena.chunks_exact(self.degree)
    }

    pub fn index_of_image(&self, image: &[u32]) -> Option<usize> {
        self.find_hashed(image, self.hash_of(image))
    }

    pub fn contains(&self, p: &Perm) -> bool {
        p.degree() == self.degree && self.index_of_image(p.image()).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn compose_applies_right_factor_first() {
        // p = (0 1), q = (1 2): p(q(0)) = p(0) = 1, p(q(1)) = p(2) = 2,
        // p(q(2)) = p(1) = 0, so p∘q = (0 1 2) with image [1, 2, 0]
        let p = Perm::transposition(3, 0, 1);
        let q = Perm::transposition(3, 1, 2);
        let r = p.compose(&q).unwrap();
        assert_eq!(r.image(), &[1, 2, 0]);

        let id = Perm::identity(5);
        let s = Perm::from_image(vec![4, 2, 0, 3, 1]).unwrap();
        assert_eq!(id.compose(&s).unwrap(), s);
        assert_eq!(s.compose(&s.inverse()).unwrap(), Perm::identity(5));
        assert_eq!(s.inverse().compose(&s).unwrap(), Perm::identity(5));
    }

    #[test]
    fn compose_degree_mismatch() {
        let p = Perm::identity(3);
        let q = Perm::identity(4);
        assert_eq!(
            p.compose(&q),
            Err(PermError::DegreeMismatch { left: 3, right: 4 })
        );
    }

    #[test]
    fn from_image_rejects_non_bijections() {
        assert!(Perm::from_image(vec![0, 0, 1]).is_err());
        assert!(Perm::from_image(vec![0, 3]).is_err());
        assert!(Perm::from_image(vec![]).is_ok());
    }

    #[test]
    fn order_and_orbit() {
        assert_eq!(Perm::identity(7).order(), 1);
        assert_eq!(Perm::identity(5).orbit(3), vec![3]);

        // (0 1)(2 3 4): order lcm(2, 3) = 6
        let p = Perm::from_image(vec![1, 0, 3, 4, 2]).unwrap();
        assert_eq!(p.order(), 6);
        assert_eq!(p.orbit(2), vec![2, 3, 4]);
    }

    #[test]
    fn pow_matches_iterated_composition() {
        let p = Perm::from_image(vec![1, 2, 3, 4, 0]).unwrap();
        assert_eq!(p.pow(0), Perm::identity(5));
        assert_eq!(p.pow(1), p);
        assert_eq!(p.pow(2), p.compose(&p).unwrap());
        assert_eq!(p.pow(-1), p.inverse());
        assert_eq!(p.pow(7), p.pow(2)); // order 5
    }

    #[test]
    fn closure_of_a_transposition() {
        let g = Perm::transposition(2, 0, 1);
        let c = GroupClosure::close(&[g], 10);
        assert_eq!(c.status(), ClosureStatus::Complete);
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn closure_s3_and_d4_from_standard_generators() {
        // S_3 = <(0 1), (0 1 2)>
        let a = Perm::transposition(3, 0, 1);
        let b = Perm::from_image(vec![1, 2, 0]).unwrap();
        let s3 = GroupClosure::close(&[a, b], 10);
        assert_eq!(s3.status(), ClosureStatus::Complete);
        assert_eq!(s3.len(), 6);

        // D_4 = <(0 1 2 3), (0 2)>
        let r = Perm::from_image(vec![1, 2, 3, 0]).unwrap();
        let f = Perm::transposition(4, 0, 2);
        let d4 = GroupClosure::close(&[r.clone(), f.clone()], 100);
        assert_eq!(d4.status(), ClosureStatus::Complete);
        assert_eq!(d4.len(), 8);

        // generator listing order must not change the element count
        let d4r = GroupClosure::close(&[f, r], 100);
        assert_eq!(d4r.len(), 8);
    }

    #[test]
    fn closure_overflow_keeps_cap_plus_one() {
        let r = Perm::from_image(vec![1, 2, 3, 0]).unwrap();
        let f = Perm::transposition(4, 0, 2);
        let c = GroupClosure::close(&[r, f], 5);
        assert_eq!(c.status(), ClosureStatus::Overflow);
        assert_eq!(c.len(), 6);
    }

    #[test]
    fn closure_indexing_starts_at_identity() {
        let g = Perm::transposition(4, 1, 2);
        let c = GroupClosure::close(core::slice::from_ref(&g), 4);
        assert!(c.element(0).is_identity());
        assert_eq!(c.index_of_image(g.image()), Some(1));
        assert!(c.contains(&g));
        assert!(!c.contains(&Perm::transposition(4, 0, 1)));
    }
}
