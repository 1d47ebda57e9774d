#include "ia/alignment.hpp"

#include "ia/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ia {

namespace {

constexpr std::uint64_t kPrime = 2147483647ull; // 2^31 - 1, Mersenne prime

std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp) {
    std::uint64_t acc = 1;
    base %= kPrime;
    while (exp > 0) {
        if (exp & 1) acc = acc * base % kPrime;
        base = base * base % kPrime;
        exp >>= 1;
    }
    return acc;
}

std::uint64_t mod_inv(std::uint64_t a) { return mod_pow(a, kPrime - 2); }

} // namespace

bool AlignmentPath::is_zero(double tol) const {
    for (const CVec& v : vectors)
        if (v.norm() > tol) return false;
    return true;
}

AlignmentMatrix build_alignment_matrix(const ChannelSet& ch, int r, int start) {
    if (r < 0) throw std::invalid_argument("alignment matrix needs r >= 0");
    if (start < 1 || start > 3) throw std::invalid_argument("start must be in {1,2,3}");
    const int M = ch.M(), N = ch.N();

    AlignmentMatrix out;
    out.r = r;
    out.start = start;
    out.matrix = CMat::Zero(static_cast<Eigen::Index>(r) * N,
                            static_cast<Eigen::Index>(r + 1) * M);
    for (int k = 0; k < r; ++k) {
        const int rx = wrap_user(start + k);
        out.matrix.block(static_cast<Eigen::Index>(k) * N, static_cast<Eigen::Index>(k) * M,
                         N, M) = ch.Hplus(rx);
        out.matrix.block(static_cast<Eigen::Index>(k) * N,
                         static_cast<Eigen::Index>(k + 1) * M, N, M) = ch.Hminus(rx);
    }
    return out;
}

Subspace kernel_of_alignment_matrix(const ChannelSet& ch, int r, int start,
                                    const ToleranceConfig& tol) {
    const AlignmentMatrix a = build_alignment_matrix(ch, r, start);
    Subspace k = kernel_basis(a.matrix, tol);
    const Eigen::Index expected =
        std::max<Eigen::Index>(0, static_cast<Eigen::Index>(r + 1) * ch.M() -
                                      static_cast<Eigen::Index>(r) * ch.N());
    if (k.dim() != expected) {
        std::ostringstream msg;
        msg << "kernel of alignment matrix (r=" << r << ", start=" << start << ") has dimension "
            << k.dim() << ", generic channels predict " << expected;
        throw degeneracy_error(msg.str());
    }
    return k;
}

std::vector<AlignmentPath> to_paths(const Subspace& kernel, int M, int start) {
    if (M < 1 || kernel.ambient() % M != 0)
        throw std::invalid_argument("kernel ambient dimension is not a multiple of M");
    const Eigen::Index blocks = kernel.ambient() / M;
    std::vector<AlignmentPath> paths;
    paths.reserve(static_cast<std::size_t>(kernel.dim()));
    for (Eigen::Index c = 0; c < kernel.dim(); ++c) {
        AlignmentPath p;
        p.start = start;
        p.vectors.reserve(static_cast<std::size_t>(blocks));
        for (Eigen::Index b = 0; b < blocks; ++b)
            p.vectors.push_back(kernel.basis().col(c).segment(b * M, M));
        paths.push_back(std::move(p));
    }
    return paths;
}

double path_residual(const ChannelSet& ch, const AlignmentPath& p) {
    for (const CVec& v : p.vectors)
        if (v.size() != ch.M())
            throw std::invalid_argument("path vectors must live in C^M");
    double worst = 0.0;
    for (std::size_t k = 0; k + 1 < p.vectors.size(); ++k) {
        const int rx = wrap_user(p.start + static_cast<int>(k));
        const CVec& a = p.vectors[k];
        const CVec& b = p.vectors[k + 1];
        const double scale = a.norm() + b.norm();
        if (scale == 0.0) continue; // degenerate all-zero pair
        const double res = (ch.Hplus(rx) * a + ch.Hminus(rx) * b).norm() / scale;
        worst = std::max(worst, res);
    }
    return worst;
}

int rank_mod_prime(std::vector<std::vector<std::uint64_t>> m) {
    const std::size_t rows = m.size();
    const std::size_t cols = rows == 0 ? 0 : m[0].size();
    for (auto& row : m)
        for (auto& e : row) e %= kPrime;

    int rank = 0;
    std::size_t pivot_row = 0;
    for (std::size_t col = 0; col < cols && pivot_row < rows; ++col) {
        std::size_t pivot = pivot_row;
        while (pivot < rows && m[pivot][col] == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[pivot], m[pivot_row]);
        const std::uint64_t inv = mod_inv(m[pivot_row][col]);
        for (std::size_t c = col; c < cols; ++c) m[pivot_row][c] = m[pivot_row][c] * inv % kPrime;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == pivot_row || m[r][col] == 0) continue;
            const std::uint64_t factor = m[r][col];
            for (std::size_t c = col; c < cols; ++c) {
                std::uint64_t sub = factor * m[pivot_row][c] % kPrime;
                m[r][c] = (m[r][c] + kPrime - sub) % kPrime;
            }
        }
        ++pivot_row;
        ++rank;
    }
    return rank;
}

bool exact_rank_specialized(int M, int N, int r) {
    if (M < 1 || N < M) throw std::invalid_argument("exact rank test requires N >= M >= 1");
    if (r < 0) throw std::invalid_argument("exact rank test requires r >= 0");
    if (r == 0) return true; // the 0 x M matrix trivially has full rank

    const AlignmentMatrix a = build_alignment_matrix(specialized_channels(M, N), r, 1);
    std::vector<std::vector<std::uint64_t>> m(
        static_cast<std::size_t>(a.matrix.rows()),
        std::vector<std::uint64_t>(static_cast<std::size_t>(a.matrix.cols()), 0));
    for (Eigen::Index i = 0; i < a.matrix.rows(); ++i)
        for (Eigen::Index j = 0; j < a.matrix.cols(); ++j)
            m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                a.matrix(i, j).real() > 0.5 ? 1 : 0;

    const long long full = std::min<long long>(static_cast<long long>(r) * N,
                                               static_cast<long long>(r + 1) * M);
    return rank_mod_prime(std::move(m)) == full;
}

std::optional<ConverseCertificate> converse_certificate(const ChannelSet& ch, int d,
                                                        const ToleranceConfig& tol) {
    const int M = ch.M(), N = ch.N();
    if (N < M)
        throw std::invalid_argument("converse_certificate requires N >= M (dualize first)");
    const FeasibilityVerdict verdict = is_feasible(M, N, d);
    if (verdict.feasible) return std::nullopt;

    ConverseCertificate cert;
    cert.r = *verdict.violated_r;
    cert.lhs = static_cast<long long>(2 * cert.r + 1) * d;
    cert.rhs = std::max(static_cast<long long>(cert.r) * N,
                        static_cast<long long>(cert.r + 1) * M);
    cert.full_rank = std::min(static_cast<Eigen::Index>(cert.r) * N,
                              static_cast<Eigen::Index>(cert.r + 1) * M);
    if (cert.r == 0) {
        // A_0 is the 0 x M matrix; the r = 0 inequality is just d <= M.
        cert.rank_Ar = 0;
        cert.sigma_ratio = std::numeric_limits<double>::infinity();
        return cert;
    }

    const AlignmentMatrix a = build_alignment_matrix(ch, cert.r, 1);
    Eigen::BDCSVD<CMat> svd(a.matrix);
    const auto& sigma = svd.singularValues();
    cert.rank_Ar = 0;
    for (Eigen::Index k = 0; k < sigma.size(); ++k)
        if (sigma(k) > tol.rank_rtol * sigma(0)) ++cert.rank_Ar;
    cert.sigma_ratio = sigma(sigma.size() - 1) / sigma(0);
    if (cert.rank_Ar != cert.full_rank) {
        std::ostringstream msg;
        msg << "alignment matrix A_" << cert.r << " is rank deficient (" << cert.rank_Ar
            << " of " << cert.full_rank << "); channels are not in generic position";
        throw degeneracy_error(msg.str());
    }
    return cert;
}

} // namespace ia
