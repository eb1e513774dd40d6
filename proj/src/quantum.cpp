#include "stperc/quantum.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "stperc/errors.hpp"
#include "stperc/rng.hpp"

namespace stperc {

namespace {

constexpr uint32_t kDenseSiteCap = 12;
constexpr uint32_t kGroundSiteCap = 16;

uint32_t sites_of_dimension(uint64_t dim, const char* who) {
    if (dim == 0) throw InvalidParameter(std::string(who) + ": empty matrix");
    uint32_t sites = 0;
    while ((uint64_t{1} << sites) < dim) ++sites;
    if ((uint64_t{1} << sites) != dim)
        throw InvalidParameter(std::string(who) + ": dimension is not a power of two");
    return sites;
}

void require_symmetric(const Eigen::MatrixXd& m, const char* who) {
    if (m.rows() != m.cols()) throw InvalidParameter(std::string(who) + ": matrix not square");
    const double dev = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (dev > 1e-12)
        throw InvalidParameter(std::string(who) + ": matrix not symmetric (deviation " +
                               std::to_string(dev) + ")");
}

// Diagonal of the coupling part: -(lambda/2) sum over edges of Z_x Z_y.
std::vector<double> coupling_diagonal(const Graph& graph, double lambda) {
    const uint32_t n = graph.vertex_count();
    const uint64_t dim = uint64_t{1} << n;
    std::vector<double> diag(dim, 0.0);
    for (uint64_t e = 0; e < graph.edge_count(); ++e) {
        const auto [x, y] = graph.edge_endpoints(e);
        for (uint64_t s = 0; s < dim; ++s)
            diag[s] -= 0.5 * lambda * spin_value(s, x) * spin_value(s, y);
    }
    return diag;
}

}  // namespace

DensityOperator::DensityOperator(Eigen::MatrixXd matrix) : matrix_(std::move(matrix)) {
    require_symmetric(matrix_, "density operator");
    sites_ = sites_of_dimension(static_cast<uint64_t>(matrix_.rows()), "density operator");
    const double tr = matrix_.trace();
    if (std::fabs(tr - 1.0) > 1e-10)
        throw NotAState("density operator: trace " + std::to_string(tr) + " is not 1");
    if (matrix_.rows() <= 1024) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(matrix_,
                                                          Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-10)
            throw NotAState("density operator: negative eigenvalue " +
                            std::to_string(es.eigenvalues().minCoeff()));
    }
}

Eigen::MatrixXd ising_hamiltonian(const Graph& graph, double lambda, double delta) {
    if (!(lambda >= 0.0) || !(delta >= 0.0))
        throw InvalidParameter("hamiltonian: lambda and delta must be non-negative");
    const uint32_t n = graph.vertex_count();
    if (n > kDenseSiteCap)
        throw CapacityError("hamiltonian: dense form limited to " +
                            std::to_string(kDenseSiteCap) + " sites");
    const uint64_t dim = uint64_t{1} << n;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    const std::vector<double> diag = coupling_diagonal(graph, lambda);
    for (uint64_t s = 0; s < dim; ++s) {
        h(s, s) = diag[s];
        for (uint32_t x = 0; x < n; ++x) h(s ^ (uint64_t{1} << x), s) -= delta;
    }
    return h;
}

DensityOperator gibbs_density(const Eigen::MatrixXd& hamiltonian, double beta) {
    require_symmetric(hamiltonian, "gibbs");
    if (!(beta > 0.0)) throw InvalidParameter("gibbs: beta must be positive");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hamiltonian);
    if (es.info() != Eigen::Success) throw NumericError("gibbs: eigendecomposition failed");
    const Eigen::VectorXd& ev = es.eigenvalues();
    // Shift by the ground energy so the largest weight is exactly 1.
    Eigen::VectorXd w = (-(beta) * (ev.array() - ev.minCoeff())).exp();
    w /= w.sum();
    Eigen::MatrixXd rho =
        es.eigenvectors() * w.asDiagonal() * es.eigenvectors().transpose();
    // Symmetrize away round-off before validation.
    rho = 0.5 * (rho + rho.transpose());
    return DensityOperator(std::move(rho));
}

namespace {

// Expands the bits of `packed` into the positions listed in `where`.
uint64_t scatter_bits(uint64_t packed, const std::vector<uint32_t>& where) {
    uint64_t out = 0;
    for (size_t i = 0; i < where.size(); ++i)
        if ((packed >> i) & 1) out |= uint64_t{1} << where[i];
    return out;
}

std::vector<uint32_t> complement_sites(uint32_t sites, const std::vector<uint32_t>& keep) {
    std::vector<uint32_t> rest;
    size_t j = 0;
    for (uint32_t s = 0; s < sites; ++s) {
        if (j < keep.size() && keep[j] == s)
            ++j;
        else
            rest.push_back(s);
    }
    return rest;
}

void check_keep_list(uint32_t sites, const std::vector<uint32_t>& keep) {
    if (keep.empty()) throw InvalidParameter("reduced_density: empty site list");
    for (size_t i = 0; i < keep.size(); ++i) {
        if (keep[i] >= sites) throw InvalidParameter("reduced_density: site out of range");
        if (i > 0 && keep[i] <= keep[i - 1])
            throw InvalidParameter("reduced_density: sites must be sorted and distinct");
    }
}

}  // namespace

DensityOperator reduced_density(const DensityOperator& rho, const std::vector<uint32_t>& keep) {
    const uint32_t n = rho.sites();
    check_keep_list(n, keep);
    const std::vector<uint32_t> rest = complement_sites(n, keep);
    const uint64_t dim_keep = uint64_t{1} << keep.size();
    const uint64_t dim_rest = uint64_t{1} << rest.size();

    std::vector<uint64_t> keep_mask(dim_keep), rest_mask(dim_rest);
    for (uint64_t w = 0; w < dim_keep; ++w) keep_mask[w] = scatter_bits(w, keep);
    for (uint64_t a = 0; a < dim_rest; ++a) rest_mask[a] = scatter_bits(a, rest);

    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim_keep, dim_keep);
    const Eigen::MatrixXd& m = rho.matrix();
    for (uint64_t w = 0; w < dim_keep; ++w)
        for (uint64_t v = 0; v < dim_keep; ++v) {
            double sum = 0.0;
            for (uint64_t a = 0; a < dim_rest; ++a)
                sum += m(keep_mask[w] | rest_mask[a], keep_mask[v] | rest_mask[a]);
            out(w, v) = sum;
        }
    return DensityOperator(std::move(out));
}

double entanglement_entropy(const DensityOperator& rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rho.matrix(), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericError("entropy: eigendecomposition failed");
    double s = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double p = es.eigenvalues()[i];
        if (p < -1e-8)
            throw NotAState("entropy: eigenvalue " + std::to_string(p) + " below -1e-8");
        if (p < 1e-14) continue;
        s -= p * std::log2(p);
    }
    return s < 0.0 ? 0.0 : s;
}

namespace {

struct HamiltonianAction {
    const std::vector<double>& diag;
    double delta;
    uint32_t n;

    void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
        const uint64_t dim = uint64_t{1} << n;
        for (uint64_t s = 0; s < dim; ++s) y[s] = diag[s] * x[s];
        for (uint32_t b = 0; b < n; ++b) {
            const uint64_t mask = uint64_t{1} << b;
            for (uint64_t s = 0; s < dim; ++s) y[s] -= delta * x[s ^ mask];
        }
    }
};

GroundState lanczos_ground(const Graph& graph, double lambda, double delta) {
    const uint32_t n = graph.vertex_count();
    const uint64_t dim = uint64_t{1} << n;
    const std::vector<double> diag = coupling_diagonal(graph, lambda);
    const HamiltonianAction action{diag, delta, n};

    // Deterministic start vector.
    RngStream stream(0x5eedf00du, StreamPurpose::Generic, n, 0);
    Eigen::VectorXd v = Eigen::VectorXd::NullaryExpr(
        dim, [&](Eigen::Index) { return stream.next_gaussian(); });
    v.normalize();

    const int max_iter = 400;
    std::vector<Eigen::VectorXd> basis;
    std::vector<double> alpha, beta;
    basis.push_back(v);
    Eigen::VectorXd w(dim);

    double theta0 = 0.0, theta1 = 0.0, prev_theta0 = 1e300;
    Eigen::VectorXd ritz;
    int m = 0;
    for (int j = 0; j < max_iter; ++j) {
        action.apply(basis[j], w);
        if (j > 0) w -= beta[j - 1] * basis[j - 1];
        alpha.push_back(basis[j].dot(w));
        w -= alpha[j] * basis[j];
        // Full reorthogonalization, two passes.
        for (int pass = 0; pass < 2; ++pass)
            for (const Eigen::VectorXd& u : basis) w -= u.dot(w) * u;
        const double b = w.norm();
        m = j + 1;

        // Ritz values of the tridiagonal section.
        Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            tri(i, i) = alpha[i];
            if (i + 1 < m) tri(i, i + 1) = tri(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tes(tri);
        theta0 = tes.eigenvalues()[0];
        theta1 = m > 1 ? tes.eigenvalues()[1] : theta0;
        ritz = tes.eigenvectors().col(0);

        const double scale = std::max(1.0, std::fabs(theta0));
        const double residual = b * std::fabs(ritz[m - 1]);
        const bool stable = std::fabs(theta0 - prev_theta0) < 1e-13 * scale;
        prev_theta0 = theta0;
        if (b < 1e-13 * scale) break;                      // invariant subspace
        if (m >= 8 && stable && residual < 1e-10 * scale) break;
        if (j + 1 == max_iter)
            throw NumericError("ground_state: Lanczos did not converge");
        beta.push_back(b);
        basis.push_back(w / b);
    }

    GroundState gs;
    gs.energy = theta0;
    gs.gap = theta1 - theta0;
    gs.degenerate = gs.gap < 1e-10;
    gs.vector = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i < m; ++i) gs.vector += ritz[i] * basis[i];
    gs.vector.normalize();
    return gs;
}

}  // namespace

GroundState ground_state(const Graph& graph, double lambda, double delta) {
    if (!(lambda >= 0.0) || !(delta >= 0.0))
        throw InvalidParameter("ground_state: lambda and delta must be non-negative");
    const uint32_t n = graph.vertex_count();
    if (n > kGroundSiteCap)
        throw CapacityError("ground_state: limited to " + std::to_string(kGroundSiteCap) +
                            " sites");
    if (n <= 10) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ising_hamiltonian(graph, lambda, delta));
        if (es.info() != Eigen::Success)
            throw NumericError("ground_state: eigendecomposition failed");
        GroundState gs;
        gs.energy = es.eigenvalues()[0];
        gs.gap = es.eigenvalues().size() > 1 ? es.eigenvalues()[1] - gs.energy : 0.0;
        gs.degenerate = gs.gap < 1e-10;
        gs.vector = es.eigenvectors().col(0);
        return gs;
    }
    return lanczos_ground(graph, lambda, delta);
}

DensityOperator ground_state_reduced_density(const Graph& graph, double lambda, double delta,
                                             const std::vector<uint32_t>& keep,
                                             bool* degenerate) {
    const uint32_t n = graph.vertex_count();
    check_keep_list(n, keep);
    const GroundState gs = ground_state(graph, lambda, delta);
    if (degenerate) *degenerate = gs.degenerate;

    const std::vector<uint32_t> rest = complement_sites(n, keep);
    const uint64_t dim_keep = uint64_t{1} << keep.size();
    const uint64_t dim_rest = uint64_t{1} << rest.size();
    std::vector<uint64_t> keep_mask(dim_keep), rest_mask(dim_rest);
    for (uint64_t w = 0; w < dim_keep; ++w) keep_mask[w] = scatter_bits(w, keep);
    for (uint64_t a = 0; a < dim_rest; ++a) rest_mask[a] = scatter_bits(a, rest);

    // rho_W[w,v] = sum_a psi[w|a] psi[v|a], straight from the pure state.
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim_keep, dim_keep);
    Eigen::VectorXd col(dim_keep);
    for (uint64_t a = 0; a < dim_rest; ++a) {
        for (uint64_t w = 0; w < dim_keep; ++w) col[w] = gs.vector[keep_mask[w] | rest_mask[a]];
        out.selfadjointView<Eigen::Lower>().rankUpdate(col);
    }
    Eigen::MatrixXd full = out.selfadjointView<Eigen::Lower>();
    return DensityOperator(std::move(full));
}

double spectral_norm(const Eigen::MatrixXd& symmetric) {
    require_symmetric(symmetric, "spectral_norm");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetric, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw NumericError("spectral_norm: eigendecomposition failed");
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace stperc
