#include "ia/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace ia {

namespace {

// Jacobi is the more accurate choice for the small matrices that dominate
// here; blocks beyond ~64 switch to the divide-and-conquer kernel.
struct Svd {
    Eigen::VectorXd sigma;
    CMat U; // thin or full per flags
    CMat V;
};

Svd svd_of(const CMat& m, unsigned flags) {
    Svd out;
    if (std::max(m.rows(), m.cols()) <= 64) {
        Eigen::JacobiSVD<CMat> svd(m, flags);
        out.sigma = svd.singularValues();
        if (flags & (Eigen::ComputeThinU | Eigen::ComputeFullU)) out.U = svd.matrixU();
        if (flags & (Eigen::ComputeThinV | Eigen::ComputeFullV)) out.V = svd.matrixV();
    } else {
        Eigen::BDCSVD<CMat> svd(m, flags);
        out.sigma = svd.singularValues();
        if (flags & (Eigen::ComputeThinU | Eigen::ComputeFullU)) out.U = svd.matrixU();
        if (flags & (Eigen::ComputeThinV | Eigen::ComputeFullV)) out.V = svd.matrixV();
    }
    return out;
}

Eigen::Index count_above(const Eigen::VectorXd& sigma, double rtol) {
    if (sigma.size() == 0) return 0;
    const double cutoff = rtol * sigma(0);
    Eigen::Index r = 0;
    while (r < sigma.size() && sigma(r) > cutoff && sigma(r) > 0.0) ++r;
    return r;
}

void require_finite(const CMat& m, const char* what) {
    if (!m.allFinite())
        throw std::invalid_argument(std::string(what) + ": non-finite entries");
}

} // namespace

void ToleranceConfig::validate() const {
    if (!(rank_rtol > 0.0 && rank_rtol < 1e-3))
        throw std::invalid_argument("rank_rtol must lie in (0, 1e-3)");
    if (!(residual_tol > 0.0 && residual_tol < 1e-3))
        throw std::invalid_argument("residual_tol must lie in (0, 1e-3)");
}

Subspace::Subspace(Eigen::Index ambient, CMat basis)
    : ambient_(ambient), basis_(std::move(basis)) {
    if (ambient_ < 0 || basis_.rows() != ambient_ || basis_.cols() > ambient_)
        throw std::invalid_argument("subspace: basis shape inconsistent with ambient dimension");
    if (basis_.cols() > 0) {
        const CMat gram = basis_.adjoint() * basis_;
        const double err =
            (gram - CMat::Identity(basis_.cols(), basis_.cols())).cwiseAbs().maxCoeff();
        if (err > 1e-10)
            throw std::invalid_argument("subspace: basis columns not orthonormal");
    }
}

Subspace Subspace::from_span(const CMat& span, const ToleranceConfig& tol) {
    require_finite(span, "from_span");
    if (span.rows() == 0 || span.cols() == 0) return zero(span.rows());
    Svd svd = svd_of(span, Eigen::ComputeThinU);
    const Eigen::Index r = count_above(svd.sigma, tol.rank_rtol);
    CMat basis = svd.U.leftCols(r);
    canonicalize_phase(basis);
    return Subspace(span.rows(), std::move(basis));
}

Subspace Subspace::zero(Eigen::Index ambient) {
    return Subspace(ambient, CMat(ambient, 0));
}

CMat Subspace::projector() const { return basis_ * basis_.adjoint(); }

Eigen::Index rank(const CMat& m, const ToleranceConfig& tol) {
    require_finite(m, "rank");
    if (m.rows() == 0 || m.cols() == 0) return 0;
    Svd svd = svd_of(m, 0);
    return count_above(svd.sigma, tol.rank_rtol);
}

Subspace kernel_basis(const CMat& m, const ToleranceConfig& tol) {
    require_finite(m, "kernel_basis");
    const Eigen::Index n = m.cols();
    if (m.rows() == 0 || n == 0)
        return Subspace(n, CMat::Identity(n, n)); // kernel of an empty map is everything
    Svd svd = svd_of(m, Eigen::ComputeFullV);
    const Eigen::Index r = count_above(svd.sigma, tol.rank_rtol);
    CMat basis = svd.V.rightCols(n - r);
    canonicalize_phase(basis);
    return Subspace(n, std::move(basis));
}

Subspace orth_complement(const Subspace& s) {
    if (s.dim() == 0)
        return Subspace(s.ambient(), CMat::Identity(s.ambient(), s.ambient()));
    return kernel_basis(s.basis().adjoint());
}

Eigen::Index projection_rank(const Subspace& target, const Subspace& source,
                             const ToleranceConfig& tol) {
    if (target.ambient() != source.ambient())
        throw std::invalid_argument("projection_rank: ambient dimensions differ");
    return rank(target.basis().adjoint() * source.basis(), tol);
}

std::vector<Eigenpair> eigenpairs(const CMat& m) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("eigenpairs: matrix must be square");
    require_finite(m, "eigenpairs");
    Eigen::ComplexEigenSolver<CMat> solver(m, /*computeEigenvectors=*/true);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigenpairs: eigensolver failed to converge");

    std::vector<Eigenpair> pairs(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index k = 0; k < m.rows(); ++k) {
        pairs[static_cast<std::size_t>(k)].value = solver.eigenvalues()(k);
        CVec v = solver.eigenvectors().col(k);
        v.normalize();
        CMat col = v;
        canonicalize_phase(col);
        pairs[static_cast<std::size_t>(k)].vector = col.col(0);
    }
    std::stable_sort(pairs.begin(), pairs.end(), [](const Eigenpair& a, const Eigenpair& b) {
        const double ma = std::abs(a.value), mb = std::abs(b.value);
        if (ma != mb) return ma > mb;
        if (a.value.real() != b.value.real()) return a.value.real() > b.value.real();
        return a.value.imag() > b.value.imag();
    });
    return pairs;
}

double subspace_distance(const Subspace& a, const Subspace& b) {
    if (a.ambient() != b.ambient())
        throw std::invalid_argument("subspace_distance: ambient dimensions differ");
    if (a.dim() != b.dim())
        throw std::invalid_argument("subspace_distance: subspace dimensions differ");
    return (a.projector() - b.projector()).norm();
}

void canonicalize_phase(CMat& m) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            const Complex e = m(r, c);
            if (std::abs(e) > 1e-10) {
                m.col(c) *= std::conj(e) / std::abs(e);
                break;
            }
        }
    }
}

Subspace subspace_sum(const std::vector<Subspace>& parts, Eigen::Index ambient,
                      const ToleranceConfig& tol) {
    Eigen::Index cols = 0;
    for (const Subspace& p : parts) {
        if (p.ambient() != ambient)
            throw std::invalid_argument("subspace_sum: ambient dimensions differ");
        cols += p.dim();
    }
    CMat stacked(ambient, cols);
    Eigen::Index at = 0;
    for (const Subspace& p : parts) {
        stacked.middleCols(at, p.dim()) = p.basis();
        at += p.dim();
    }
    return Subspace::from_span(stacked, tol);
}

} // namespace ia
