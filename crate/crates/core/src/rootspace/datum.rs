use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{inverse, mat_vec, transpose, Matrix};
use crate::rational::{dot, q, zeros, LinearForm, RationalVector, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CartanKind {
    A,
    B,
    C,
    D,
}

impl CartanKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(CartanKind::A),
            "B" | "b" => Ok(CartanKind::B),
            "C" | "c" => Ok(CartanKind::C),
            "D" | "d" => Ok(CartanKind::D),
            other => Err(Error::InvalidArgument(format!("unknown Cartan type {other:?}"))),
        }
    }

    pub fn letter(self) -> char {
        match self {
            CartanKind::A => 'A',
            CartanKind::B => 'B',
            CartanKind::C => 'C',
            CartanKind::D => 'D',
        }
    }

    fn min_rank(self) -> usize {
        match self {
            CartanKind::A => 1,
            CartanKind::B | CartanKind::C => 2,
            CartanKind::D => 4,
        }
    }

    /// Symmetric matrix of root inner products `(α_i, α_j)`, Bourbaki numbering.
    fn root_gram(self, n: usize) -> Matrix {
        let mut g: Matrix = (0..n).map(|_| zeros(n)).collect();
        for i in 0..n {
            g[i][i] = q(2);
        }
        let link = |g: &mut Matrix, i: usize, j: usize, v: Q| {
            g[i][j] = v.clone();
            g[j][i] = v;
        };
        match self {
            CartanKind::A => {
                for i in 1..n {
                    link(&mut g, i - 1, i, q(-1));
                }
            }
            CartanKind::B => {
                for i in 1..n {
                    link(&mut g, i - 1, i, q(-1));
                }
                g[n - 1][n - 1] = q(1);
            }
            CartanKind::C => {
                for i in 1..n - 1 {
                    link(&mut g, i - 1, i, q(-1));
                }
                link(&mut g, n - 2, n - 1, q(-2));
                g[n - 1][n - 1] = q(4);
            }
            CartanKind::D => {
                for i in 1..n - 1 {
                    link(&mut g, i - 1, i, q(-1));
                }
                link(&mut g, n - 3, n - 1, q(-1));
            }
        }
        g
    }
}

/// Root datum of a split semisimple group with `𝔞_G = 0`.
///
/// Vectors of 𝔞 use simple-coroot coordinates and forms use
/// fundamental-weight coordinates, so `ϖ_i` is the i-th unit form and
/// `α_i` is the i-th row of the Cartan matrix `A_ij = α_i(α_j^∨)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RootDatum {
    components: Vec<(CartanKind, usize)>,
    root_gram: Matrix,
    cartan: Matrix,
    cartan_t_inv: Matrix,
    gram: Matrix,
    form_gram: Matrix,
}

impl RootDatum {
    pub fn new(kind: CartanKind, rank: usize) -> Result<Self> {
        Self::from_components(&[(kind, rank)])
    }

    /// Reducible datum: orthogonal sum of the given simple components.
    pub fn from_components(components: &[(CartanKind, usize)]) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidArgument("empty root datum".into()));
        }
        for &(k, r) in components {
            if r < k.min_rank() {
                return Err(Error::InvalidArgument(format!(
                    "{}{} is not a valid Cartan type (rank must be at least {})",
                    k.letter(),
                    r,
                    k.min_rank()
                )));
            }
        }
        let n: usize = components.iter().map(|c| c.1).sum();
        if n > 63 {
            return Err(Error::InvalidArgument("rank above 63 unsupported".into()));
        }
        let mut root_gram: Matrix = (0..n).map(|_| zeros(n)).collect();
        let mut off = 0;
        for &(k, r) in components {
            let g = k.root_gram(r);
            for i in 0..r {
                for j in 0..r {
                    root_gram[off + i][off + j] = g[i][j].clone();
                }
            }
            off += r;
        }
        let cartan: Matrix = (0..n)
            .map(|i| (0..n).map(|j| q(2) * &root_gram[i][j] / &root_gram[j][j]).collect())
            .collect();
        let gram: Matrix = (0..n)
            .map(|i| (0..n).map(|j| q(2) * &cartan[i][j] / &root_gram[i][i]).collect())
            .collect();
        let form_gram = inverse(&gram).ok_or_else(|| Error::Internal("singular form".into()))?;
        let cartan_t_inv = inverse(&transpose(&cartan)).ok_or_else(|| Error::Internal("singular Cartan".into()))?;
        Ok(RootDatum {
            components: components.to_vec(),
            root_gram,
            cartan,
            cartan_t_inv,
            gram,
            form_gram,
        })
    }

    /// Parses labels such as `A2`, `B3` or `A1xA1`.
    pub fn parse(label: &str) -> Result<Self> {
        let mut comps = Vec::new();
        for part in label.split(['x', 'X', '*']) {
            let part = part.trim();
            let mut chars = part.chars();
            let kind = CartanKind::parse(&chars.next().map(String::from).unwrap_or_default())?;
            let rank: usize = chars
                .as_str()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad rank in {part:?}")))?;
            comps.push((kind, rank));
        }
        Self::from_components(&comps)
    }

    pub fn label(&self) -> String {
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|(k, r)| format!("{}{}", k.letter(), r))
            .collect();
        parts.join("x")
    }

    pub fn components(&self) -> &[(CartanKind, usize)] {
        &self.components
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn cartan_matrix(&self) -> &Matrix {
        &self.cartan
    }

    /// Gram matrix of the invariant form in coroot coordinates.
    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    /// Gram matrix of the dual form in weight coordinates.
    pub fn form_gram(&self) -> &Matrix {
        &self.form_gram
    }

    pub fn root_length2(&self, i: usize) -> &Q {
        &self.root_gram[i][i]
    }

    pub fn simple_root(&self, i: usize) -> LinearForm {
        LinearForm(self.cartan[i].clone())
    }

    pub fn simple_roots(&self) -> Vec<LinearForm> {
        (0..self.rank()).map(|i| self.simple_root(i)).collect()
    }

    pub fn fundamental_weight(&self, i: usize) -> LinearForm {
        LinearForm(crate::rational::unit(self.rank(), i))
    }

    pub fn fundamental_weights(&self) -> Vec<LinearForm> {
        (0..self.rank()).map(|i| self.fundamental_weight(i)).collect()
    }

    pub fn coroot(&self, i: usize) -> RationalVector {
        RationalVector(crate::rational::unit(self.rank(), i))
    }

    /// `Σ a_i α_i` as a form.
    pub fn form_from_roots(&self, a: &[Q]) -> LinearForm {
        LinearForm(crate::linalg::vec_mat(a, &self.cartan))
    }

    /// Coordinates of a form in the simple-root basis.
    pub fn root_coords(&self, f: &LinearForm) -> Vec<Q> {
        mat_vec(&self.cartan_t_inv, f)
    }

    pub fn inner(&self, x: &RationalVector, y: &RationalVector) -> Q {
        dot(x, &mat_vec(&self.gram, y))
    }

    pub fn norm2(&self, x: &RationalVector) -> Q {
        self.inner(x, x)
    }

    pub fn form_inner(&self, a: &LinearForm, b: &LinearForm) -> Q {
        dot(a, &mat_vec(&self.form_gram, b))
    }

    pub fn form_norm2(&self, a: &LinearForm) -> Q {
        self.form_inner(a, a)
    }

    /// The vector `v` with `(v, ·) = f`.
    pub fn vector_of(&self, f: &LinearForm) -> RationalVector {
        RationalVector(mat_vec(&self.form_gram, f))
    }

    /// The form `(v, ·)`.
    pub fn form_of(&self, v: &RationalVector) -> LinearForm {
        LinearForm(mat_vec(&self.gram, v))
    }

    /// Simple reflection `s_i` acting on forms.
    pub fn reflect_form(&self, f: &LinearForm, i: usize) -> LinearForm {
        let c = f[i].clone();
        if c.is_zero() {
            return f.clone();
        }
        LinearForm(f.iter().zip(&self.cartan[i]).map(|(x, a)| x - &c * a).collect())
    }

    /// Simple reflection `s_i` acting on vectors.
    pub fn reflect_vector(&self, x: &RationalVector, i: usize) -> RationalVector {
        let c = self.simple_root(i).eval(x);
        let mut out = x.clone();
        out.0[i] -= c;
        out
    }

    /// Whether `x` lies in the open positive chamber.
    pub fn is_regular_dominant(&self, x: &RationalVector) -> bool {
        (0..self.rank()).all(|i| self.simple_root(i).eval(x) > Q::zero())
    }

    /// The vector with `α_i(x) = targets[i]`.
    pub fn vector_with_root_values(&self, targets: &[Q]) -> RationalVector {
        let inv = inverse(&self.cartan).expect("Cartan matrix is invertible");
        RationalVector(mat_vec(&inv, targets))
    }

    pub fn check_vector(&self, x: &RationalVector) -> Result<()> {
        crate::error::check_dim(self.rank(), x.dim())
    }

    /// Dual-basis pairing `⟨ϖ_i, α_j^∨⟩`.
    pub fn pairing(&self, f: &LinearForm, j: usize) -> Q {
        f.eval(&self.coroot(j))
    }

    pub fn identity_check(&self) -> bool {
        let n = self.rank();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let p = self.pairing(&self.fundamental_weight(i), j);
                if i == j {
                    p.is_one()
                } else {
                    p.is_zero()
                }
            })
        })
    }
}

/// `build_root_datum(type, rank)`.
pub fn build_root_datum(kind: &str, rank: usize) -> Result<RootDatum> {
    if rank == 0 {
        return Err(Error::InvalidArgument("rank must be at least 1".into()));
    }
    RootDatum::new(CartanKind::parse(kind)?, rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;

    #[test]
    fn rank_one() {
        let d = build_root_datum("A", 1).unwrap();
        assert_eq!(d.simple_root(0).0, vec![q(2)]);
        // ϖ_1 = α_1 / 2
        assert_eq!(d.root_coords(&d.fundamental_weight(0)), vec![qf(1, 2)]);
        assert!(d.identity_check());
    }

    #[test]
    fn cartan_integers() {
        let a2 = build_root_datum("A", 2).unwrap();
        assert_eq!(a2.cartan_matrix()[0][1], q(-1));
        let b3 = build_root_datum("B", 3).unwrap();
        assert_eq!(b3.cartan_matrix()[1][2], q(-2));
        assert_eq!(b3.cartan_matrix()[2][1], q(-1));
        let c3 = build_root_datum("C", 3).unwrap();
        assert_eq!(c3.cartan_matrix()[1][2], q(-1));
        assert_eq!(c3.cartan_matrix()[2][1], q(-2));
        let d4 = build_root_datum("D", 4).unwrap();
        assert_eq!(d4.cartan_matrix()[1][3], q(-1));
        assert_eq!(d4.cartan_matrix()[2][3], q(0));
        for d in [a2, b3, c3, d4] {
            assert!(d.identity_check());
        }
    }

    #[test]
    fn rejects_bad_types() {
        assert!(build_root_datum("A", 0).is_err());
        assert!(build_root_datum("D", 2).is_err());
        assert!(build_root_datum("E", 6).is_err());
        assert!(RootDatum::parse("A1xA1").is_ok());
        assert_eq!(RootDatum::parse("A1xA2").unwrap().label(), "A1xA2");
    }

    #[test]
    fn form_and_vector_agree() {
        let d = build_root_datum("B", 2).unwrap();
        let x = RationalVector::from_ints(&[3, -1]);
        let y = RationalVector::from_ints(&[1, 2]);
        assert_eq!(d.form_of(&x).eval(&y), d.inner(&x, &y));
        let f = d.form_of(&x);
        assert_eq!(d.vector_of(&f), x);
        assert_eq!(d.form_norm2(&f), d.norm2(&x));
        // α(α^∨) = 2
        for i in 0..2 {
            assert_eq!(d.simple_root(i).eval(&d.coroot(i)), q(2));
        }
    }
}
