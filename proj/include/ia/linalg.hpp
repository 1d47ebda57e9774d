#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <vector>

/// Tolerance-aware dense complex linear algebra: numeric rank, null spaces,
/// orthogonal complements, projections and eigenpairs, with a canonical
/// ordering/phase convention so that downstream constructions are
/// reproducible run to run.
namespace ia {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

/// Thrown when sampled channels fail a generic-position prediction
/// (repeated eigenvalues, unexpected kernel dimension, rank deficiency).
struct degeneracy_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ToleranceConfig {
    double rank_rtol = 1e-9;    ///< relative singular-value cutoff for rank decisions
    double residual_tol = 1e-8; ///< bound on orthogonality / alignment residuals

    /// Both tolerances must lie in (0, 1e-3).
    void validate() const;
};

/// A linear subspace of complex coordinate space: ambient dimension plus an
/// orthonormal basis stored column-wise (ambient x dim).
class Subspace {
public:
    Subspace() = default;

    /// Wraps an existing orthonormal basis. Throws std::invalid_argument if
    /// the columns are not orthonormal within 1e-10 or dim > ambient.
    Subspace(Eigen::Index ambient, CMat basis);

    /// Orthonormalizes the column span of `span` (SVD based, canonical
    /// ordering and phase). Rank-deficient spans yield the smaller true
    /// dimension.
    static Subspace from_span(const CMat& span, const ToleranceConfig& tol = {});

    /// The zero subspace of the given ambient space.
    static Subspace zero(Eigen::Index ambient);

    Eigen::Index ambient() const { return ambient_; }
    Eigen::Index dim() const { return basis_.cols(); }
    const CMat& basis() const { return basis_; }

    /// Orthogonal projector basis * basis^H (ambient x ambient).
    CMat projector() const;

private:
    Eigen::Index ambient_ = 0;
    CMat basis_; // ambient x dim, orthonormal columns
};

struct Eigenpair {
    Complex value;
    CVec vector; // unit norm, canonical phase
};

/// Number of singular values above rank_rtol * sigma_max. Empty shapes have
/// rank 0 ("full rank" for a 0 x M matrix is vacuously true since
/// min(0, M) = 0).
Eigen::Index rank(const CMat& m, const ToleranceConfig& tol = {});

/// Orthonormal basis of the right null space, dimension cols - rank(m).
/// Canonical order: trailing right singular vectors in SVD order, each with
/// canonical phase.
Subspace kernel_basis(const CMat& m, const ToleranceConfig& tol = {});

/// Orthogonal complement within the ambient space; dims sum to the ambient
/// dimension.
Subspace orth_complement(const Subspace& s);

/// dim of the projection of `source` onto `target`, i.e.
/// rank(target^H * source). Throws on ambient mismatch.
Eigen::Index projection_rank(const Subspace& target, const Subspace& source,
                             const ToleranceConfig& tol = {});

/// All eigenpairs of a square matrix, eigenvectors unit-normalized with the
/// first nonzero component made real-positive, sorted by descending |value|
/// with ties broken by descending real then imaginary part.
std::vector<Eigenpair> eigenpairs(const CMat& m);

/// Frobenius norm of the difference of orthogonal projectors; 0 iff the
/// subspaces coincide. Requires equal ambient dimension and equal dimension.
double subspace_distance(const Subspace& a, const Subspace& b);

/// Multiplies each column by a unit scalar so its first component of
/// magnitude > 1e-10 becomes real-positive.
void canonicalize_phase(CMat& m);

/// Span of the union of the given subspaces (orthonormalized).
Subspace subspace_sum(const std::vector<Subspace>& parts, Eigen::Index ambient,
                      const ToleranceConfig& tol = {});

} // namespace ia
