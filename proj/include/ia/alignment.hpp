#pragma once

#include "ia/channel.hpp"
#include "ia/linalg.hpp"

#include <optional>
#include <vector>

namespace ia {

/// The rN x (r+1)M block-bidiagonal matrix whose kernel elements are the
/// alignment paths of length r+1 starting at transmitter `start`+1: block
/// row k (1-based) holds Hplus(start+k-1) at block column k and
/// Hminus(start+k-1) at block column k+1, user indices modulo 3.
struct AlignmentMatrix {
    int r = 0;
    int start = 1;
    CMat matrix;
};

/// A chain of r+1 transmit vectors (at transmitters start+1 .. start+r+1)
/// whose images coincide, up to sign, at the r intermediate receivers.
struct AlignmentPath {
    int start = 1;
    std::vector<CVec> vectors;

    bool is_zero(double tol = 0.0) const;
};

/// Witness that some r violates the feasibility inequality: the block
/// matrix A_r is full rank, so interference cannot be compressed enough and
/// (2r+1) d > max(rN, (r+1)M).
struct ConverseCertificate {
    int r = 0;
    Eigen::Index rank_Ar = 0;     ///< numeric rank, equals min(rN, (r+1)M)
    Eigen::Index full_rank = 0;   ///< min(rN, (r+1)M)
    long long lhs = 0;            ///< (2r+1) d
    long long rhs = 0;            ///< max(rN, (r+1)M)
    double sigma_ratio = 0.0;     ///< sigma_min / sigma_max of A_r
};

/// Assembles the block matrix; r = 0 yields the 0 x M matrix.
AlignmentMatrix build_alignment_matrix(const ChannelSet& ch, int r, int start);

/// Kernel of the alignment matrix. For generic channels its dimension is
/// max(0, (r+1)M - rN); any other dimension throws degeneracy_error.
Subspace kernel_of_alignment_matrix(const ChannelSet& ch, int r, int start,
                                    const ToleranceConfig& tol = {});

/// Splits each kernel basis vector into r+1 blocks of length M, one path
/// per basis vector. Throws if the ambient dimension is not a multiple
/// of M.
std::vector<AlignmentPath> to_paths(const Subspace& kernel, int M, int start);

/// Max over consecutive pairs of |Hplus(j) x_k + Hminus(j) x_{k+1}| /
/// (|x_k| + |x_{k+1}|); a valid path stays below residual_tol. An all-zero
/// path returns 0 by convention.
double path_residual(const ChannelSet& ch, const AlignmentPath& p);

/// Lemma-1 style exact certificate: builds the alignment matrix from the
/// 0/1 specialized channels and row-reduces it modulo the prime 2^31 - 1.
/// Full rank mod p lower-bounds the rank over the rationals, so a true
/// result certifies full rank for generic channels. Requires N >= M >= 1.
bool exact_rank_specialized(int M, int N, int r);

/// Rank of an integer matrix by Gaussian elimination mod 2^31 - 1.
int rank_mod_prime(std::vector<std::vector<std::uint64_t>> m);

/// Searches r = 0 .. M+N+2d for a violated inequality; on the first hit
/// verifies numerically that A_r is full rank and returns the certificate,
/// or std::nullopt when all inequalities hold. Requires N >= M (dualize
/// first otherwise); rank-deficient A_r on generic channels throws
/// degeneracy_error.
std::optional<ConverseCertificate> converse_certificate(
    const ChannelSet& ch, int d, const ToleranceConfig& tol = {});

} // namespace ia
