//! Total cohomology `H_tot(g, V)` of `(Omega_g(V), d_tot)`.

use crate::cochain::{d_tot_matrix, total_degree_range, Cochain, CochainBasis};
use crate::linalg::{image, kernel, solve, split, ComplementRule, Matrix, Scalar, Subspace};
use crate::module::DgGModule;

/// Cohomology in one total degree with chosen representatives.
#[derive(Clone, Debug)]
pub struct DegreeCohomology {
    pub degree: i32,
    pub basis: CochainBasis,
    pub representatives: Vec<Cochain>,
    cycles: Subspace,
    /// From cycle coordinates to cohomology coordinates.
    projection: Matrix,
}

impl DegreeCohomology {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    pub fn cycles_dim(&self) -> usize {
        self.cycles.dim()
    }

    /// Class of a closed cochain in the representative basis; `None` if the
    /// cochain is not closed (or not of this degree).
    pub fn project(&self, c: &Cochain) -> Option<Vec<Scalar>> {
        if c.iter().any(|(k, _)| self.basis.index_of(k).is_none()) {
            return None;
        }
        let z = self.cycles.coordinates(&self.basis.to_vec(c))?;
        Some(self.projection.apply(&z))
    }

    /// Cochain `sum_i x_i rep_i`.
    pub fn combine(&self, x: &[Scalar]) -> Cochain {
        let mut out = Cochain::zero();
        for (r, xi) in self.representatives.iter().zip(x) {
            out.add_assign_scaled(r, xi);
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct TotalCohomology {
    pub degrees: Vec<DegreeCohomology>,
}

impl TotalCohomology {
    pub fn get(&self, n: i32) -> Option<&DegreeCohomology> {
        self.degrees.iter().find(|d| d.degree == n)
    }

    pub fn dims(&self) -> Vec<(i32, usize)> {
        self.degrees.iter().map(|d| (d.degree, d.dim())).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.degrees.iter().map(|d| d.dim()).sum()
    }
}

/// Representatives span the pivot complement of the boundaries inside the
/// cycles (in cycle coordinates).
pub fn total_cohomology(v: &DgGModule) -> TotalCohomology {
    let range = total_degree_range(v);
    let mut degrees = Vec::new();
    for n in range {
        let basis = CochainBasis::new(v, n);
        let dn = d_tot_matrix(v, n);
        let dprev = d_tot_matrix(v, n - 1);
        let cycles = kernel(&dn);
        let boundaries = image(&dprev);
        let zb = cycles.basis_matrix();
        let in_cycles: Vec<Vec<Scalar>> = boundaries
            .basis()
            .iter()
            .map(|b| solve(&zb, b).expect("boundaries are cycles"))
            .collect();
        let bsub = Subspace::new(cycles.dim(), in_cycles);
        let sp = split(&bsub, ComplementRule::Pivot);
        let rep_coords = zb.mul(&sp.comp_incl);
        let representatives = (0..rep_coords.cols())
            .map(|i| basis.from_vec(&rep_coords.column(i)))
            .collect();
        degrees.push(DegreeCohomology {
            degree: n,
            basis,
            representatives,
            cycles,
            projection: sp.comp_proj,
        });
    }
    TotalCohomology { degrees }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::d_tot;
    use crate::exterior::binomial;
    use crate::lie::LieAlgebra;

    #[test]
    fn abelian_trivial_binomials() {
        let l = LieAlgebra::abelian(3);
        let v = DgGModule::trivial(&l, 1, 0);
        let h = total_cohomology(&v);
        for n in 0..=3 {
            assert_eq!(h.get(n).unwrap().dim(), binomial(3, n as usize));
        }
    }

    #[test]
    fn representatives_are_closed_and_project_to_unit_vectors() {
        let l = LieAlgebra::sl2();
        let v = DgGModule::adjoint(&l);
        let h = total_cohomology(&v);
        for d in &h.degrees {
            for (i, r) in d.representatives.iter().enumerate() {
                assert!(d_tot(&v, r).is_zero());
                let p = d.project(r).unwrap();
                for (j, x) in p.iter().enumerate() {
                    assert_eq!(*x, crate::linalg::int((i == j) as i64));
                }
            }
        }
        // Whitehead: H(sl2, sl2) = 0
        assert_eq!(h.total_dim(), 0);
    }
}
