use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{mat_vec, solve_unique, transpose, Matrix};
use crate::rational::{zeros, LinearForm, RationalVector, Q};

use super::RootDatum;

/// A standard parabolic, stored as the set `Δ^P` of simple roots in its
/// Levi factor. `P_0` is the empty set and `G` is all of `Δ`, so
/// `P ⊆ Q` exactly when `Δ^P ⊆ Δ^Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Parabolic {
    mask: u64,
    rank: u8,
}

impl Parabolic {
    pub fn minimal(rank: usize) -> Self {
        Parabolic {
            mask: 0,
            rank: rank as u8,
        }
    }

    pub fn group(rank: usize) -> Self {
        Parabolic {
            mask: full(rank),
            rank: rank as u8,
        }
    }

    pub fn from_levi(rank: usize, levi: &[usize]) -> Result<Self> {
        let mut mask = 0;
        for &i in levi {
            if i >= rank {
                return Err(Error::InvalidArgument(format!(
                    "simple root index {} out of range for rank {rank}",
                    i + 1
                )));
            }
            mask |= 1 << i;
        }
        Ok(Parabolic { mask, rank: rank as u8 })
    }

    pub fn from_mask(rank: usize, mask: u64) -> Self {
        Parabolic {
            mask: mask & full(rank),
            rank: rank as u8,
        }
    }

    /// Parses `""`, `"a1"`, `"a1,a3"` or `"1 3"` (1-based Levi roots).
    pub fn parse(rank: usize, s: &str) -> Result<Self> {
        let mut levi = Vec::new();
        for tok in s.split([',', ' ', ';']).filter(|t| !t.trim().is_empty()) {
            let t = tok.trim().trim_start_matches(['a', 'A', 'α']);
            let i: usize = t
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad simple root {tok:?}")))?;
            if i == 0 {
                return Err(Error::InvalidArgument("simple roots are numbered from 1".into()));
            }
            levi.push(i - 1);
        }
        Self::from_levi(rank, &levi)
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn rank(&self) -> usize {
        self.rank as usize
    }

    pub fn in_levi(&self, i: usize) -> bool {
        self.mask >> i & 1 == 1
    }

    /// `Δ^P`.
    pub fn levi(&self) -> Vec<usize> {
        (0..self.rank()).filter(|&i| self.in_levi(i)).collect()
    }

    /// Indices of `Δ_P`: simple roots outside the Levi.
    pub fn complement(&self) -> Vec<usize> {
        (0..self.rank()).filter(|&i| !self.in_levi(i)).collect()
    }

    pub fn levi_size(&self) -> usize {
        self.mask.count_ones() as usize
    }

    /// `dim 𝔞_P`.
    pub fn dim_a(&self) -> usize {
        self.rank() - self.levi_size()
    }

    pub fn contained_in(&self, other: &Parabolic) -> bool {
        self.mask & !other.mask == 0
    }

    /// Indices of `Δ_P^Q` (roots in `Δ^Q \ Δ^P`).
    pub fn between(&self, q: &Parabolic) -> Vec<usize> {
        (0..self.rank()).filter(|&i| q.in_levi(i) && !self.in_levi(i)).collect()
    }

    /// Every `R` with `self ⊆ R ⊆ q`, in increasing mask order.
    pub fn interval(&self, q: &Parabolic) -> Vec<Parabolic> {
        let free = q.mask & !self.mask;
        let mut out = Vec::new();
        let mut sub = 0u64;
        loop {
            out.push(Parabolic {
                mask: self.mask | sub,
                rank: self.rank,
            });
            if sub == free {
                break;
            }
            sub = (sub.wrapping_sub(free)) & free;
        }
        out.sort();
        out
    }

    pub fn all(rank: usize) -> Vec<Parabolic> {
        (0..=full(rank))
            .map(|m| Parabolic {
                mask: m,
                rank: rank as u8,
            })
            .collect()
    }

    /// Label like `a1,a3`; empty for `P_0`.
    pub fn label(&self) -> String {
        let parts: Vec<String> = self.levi().iter().map(|i| format!("a{}", i + 1)).collect();
        parts.join(",")
    }
}

fn full(rank: usize) -> u64 {
    if rank >= 64 {
        u64::MAX
    } else {
        (1u64 << rank) - 1
    }
}

pub(crate) fn require_contained(p: &Parabolic, q: &Parabolic) -> Result<()> {
    if p.contained_in(q) {
        Ok(())
    } else {
        Err(Error::NotContained)
    }
}

impl RootDatum {
    /// Coroot coordinates `c` of `X^P = Σ_{j ∈ Δ^P} c_j α_j^∨`, indexed like `Δ^P`.
    pub fn levi_coroot_coords(&self, x: &RationalVector, p: &Parabolic) -> Vec<Q> {
        let levi = p.levi();
        if levi.is_empty() {
            return Vec::new();
        }
        let a = self.cartan_matrix();
        let sub: Matrix = levi
            .iter()
            .map(|&i| levi.iter().map(|&j| a[i][j].clone()).collect())
            .collect();
        let rhs: Vec<Q> = levi.iter().map(|&i| self.simple_root(i).eval(x)).collect();
        solve_unique(&sub, &rhs, levi.len()).expect("Levi Cartan block is invertible")
    }

    /// `X^P`, the component in `𝔞^P = span{α^∨ : α ∈ Δ^P}`.
    pub fn upper(&self, x: &RationalVector, p: &Parabolic) -> RationalVector {
        let c = self.levi_coroot_coords(x, p);
        let mut out = zeros(self.rank());
        for (k, &j) in p.levi().iter().enumerate() {
            out[j] = c[k].clone();
        }
        RationalVector(out)
    }

    /// `X_P`, the component in `𝔞_P`.
    pub fn lower(&self, x: &RationalVector, p: &Parabolic) -> RationalVector {
        x - &self.upper(x, p)
    }

    /// `X_P^Q = X_P − X_Q`.
    pub fn project(&self, x: &RationalVector, p: &Parabolic, q: &Parabolic) -> Result<RationalVector> {
        require_contained(p, q)?;
        self.check_vector(x)?;
        Ok(&self.lower(x, p) - &self.lower(x, q))
    }

    /// Matrix of `X ↦ X_P^Q` in coroot coordinates.
    pub fn projection_matrix(&self, p: &Parabolic, q: &Parabolic) -> Matrix {
        let n = self.rank();
        let cols: Matrix = (0..n)
            .map(|j| self.project(&self.coroot(j), p, q).expect("P ⊆ Q").0)
            .collect();
        transpose(&cols)
    }

    /// `λ ∘ proj_{𝔞_P^Q}`, the orthogonal projection of a form to `(𝔞_P^Q)*`.
    pub fn project_form(&self, f: &LinearForm, p: &Parabolic, q: &Parabolic) -> Result<LinearForm> {
        require_contained(p, q)?;
        let m = self.projection_matrix(p, q);
        Ok(LinearForm(mat_vec(&transpose(&m), f)))
    }

    /// Coordinates of `Y_R^Q` against the basis `{(β^∨)_R : β ∈ Δ^Q \ Δ^R}`,
    /// i.e. the values `ϖ̂_β(Y)` for `β ∈ Δ̂_R^Q`.
    pub fn hat_coords(&self, y: &RationalVector, r: &Parabolic, q: &Parabolic) -> Vec<(usize, Q)> {
        let c = self.levi_coroot_coords(y, q);
        q.levi().into_iter().zip(c).filter(|(j, _)| !r.in_levi(*j)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};
    use crate::rootspace::build_root_datum;

    #[test]
    fn interval_and_order() {
        let p = Parabolic::minimal(3);
        let g = Parabolic::group(3);
        assert_eq!(p.interval(&g).len(), 8);
        let a1 = Parabolic::parse(3, "a1").unwrap();
        assert!(p.contained_in(&a1) && a1.contained_in(&g) && !g.contained_in(&a1));
        assert_eq!(a1.dim_a(), 2);
        assert_eq!(a1.interval(&Parabolic::parse(3, "a1,a3").unwrap()).len(), 2);
        assert!(Parabolic::parse(3, "a4").is_err());
    }

    #[test]
    fn decomposition_reconstructs() {
        let d = build_root_datum("A", 3).unwrap();
        let x = RationalVector(vec![q(3), qf(-1, 2), q(5)]);
        let p = Parabolic::parse(3, "a2").unwrap();
        let qq = Parabolic::parse(3, "a1,a2").unwrap();
        let xpq = d.project(&x, &p, &qq).unwrap();
        let sum = &(&xpq + &d.upper(&x, &p)) + &d.lower(&x, &qq);
        assert_eq!(sum, x);
        // idempotent
        assert_eq!(d.project(&xpq, &p, &qq).unwrap(), xpq);
        // P = Q = G gives 0
        let g = Parabolic::group(3);
        assert!(d.project(&x, &g, &g).unwrap().is_zero());
        assert!(d.project(&x, &qq, &p).is_err());
    }

    #[test]
    fn sl5_projection() {
        let d = build_root_datum("A", 4).unwrap();
        let f = d.form_from_roots(&[q(-1), q(1), q(0), q(0)]);
        let qq = Parabolic::parse(4, "a3,a4").unwrap();
        let g = Parabolic::group(4);
        let fq = d.project_form(&f, &qq, &g).unwrap();
        assert_eq!(d.root_coords(&fq), vec![q(-1), q(1), qf(2, 3), qf(1, 3)]);
    }
}
