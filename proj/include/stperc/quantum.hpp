#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "stperc/graph.hpp"

namespace stperc {

// Basis convention: product sigma^z basis indexed by bit strings; bit x = 1
// means spin +1 at site x, sites ordered by graph vertex index.
inline int spin_value(uint64_t basis_index, uint32_t site) {
    return (basis_index >> site) & 1 ? +1 : -1;
}

// Real symmetric density matrix with validated state invariants: symmetry
// within 1e-12, trace within 1e-10 of 1, and for dimensions up to 1024 the
// eigenvalues checked against -1e-10 (larger matrices come from constructions
// that are positive semidefinite by design).
class DensityOperator {
  public:
    explicit DensityOperator(Eigen::MatrixXd matrix);

    uint32_t sites() const { return sites_; }
    uint64_t dimension() const { return static_cast<uint64_t>(matrix_.rows()); }
    const Eigen::MatrixXd& matrix() const { return matrix_; }

  private:
    Eigen::MatrixXd matrix_;
    uint32_t sites_ = 0;
};

// Transverse-field Ising Hamiltonian
//   H = -(lambda/2) sum_{<x,y>} Z_x Z_y - delta sum_x X_x
// as a dense real symmetric matrix. Capacity: up to 12 sites.
Eigen::MatrixXd ising_hamiltonian(const Graph& graph, double lambda, double delta);

// exp(-beta H) / tr exp(-beta H) via eigendecomposition.
DensityOperator gibbs_density(const Eigen::MatrixXd& hamiltonian, double beta);

// Partial trace onto the sites listed in `keep` (sorted ascending).
DensityOperator reduced_density(const DensityOperator& rho, const std::vector<uint32_t>& keep);

// Von Neumann entropy in bits; eigenvalues below 1e-14 count as zero and an
// eigenvalue below -1e-8 raises NotAState.
double entanglement_entropy(const DensityOperator& rho);

struct GroundState {
    double energy = 0.0;
    double gap = 0.0;  // distance to the next eigenvalue (Ritz estimate)
    Eigen::VectorXd vector;
    bool degenerate = false;  // gap below 1e-10
};

// Lowest eigenpair: dense for up to 10 sites, Lanczos with full
// reorthogonalization above that. Capacity: 16 sites.
GroundState ground_state(const Graph& graph, double lambda, double delta);

// Reduced density matrix of the ground state on `keep`, formed directly from
// the eigenvector so no full-dimension density matrix is materialized. Sets
// *degenerate (if given) when the ground gap is below 1e-10.
DensityOperator ground_state_reduced_density(const Graph& graph, double lambda, double delta,
                                             const std::vector<uint32_t>& keep,
                                             bool* degenerate = nullptr);

// Largest absolute eigenvalue of a symmetric matrix.
double spectral_norm(const Eigen::MatrixXd& symmetric);

}  // namespace stperc
