#include "ia/verifier.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <sstream>

namespace ia {

namespace {

void check_shape(const Subspace& s, Eigen::Index ambient, const char* role, int index) {
    if (s.ambient() != ambient) {
        std::ostringstream msg;
        msg << role << "_" << index << " lives in C^" << s.ambient() << ", expected C^"
            << ambient;
        throw std::invalid_argument(msg.str());
    }
}

} // namespace

VerifyReport verify(const ChannelSet& ch, const AlignmentSolution& sol, int d,
                    const ToleranceConfig& tol) {
    tol.validate();
    if (d < 1) throw std::invalid_argument("verify requires d >= 1");
    for (int k = 1; k <= 3; ++k) {
        check_shape(sol.U[static_cast<std::size_t>(k - 1)], ch.M(), "U", k);
        check_shape(sol.V[static_cast<std::size_t>(k - 1)], ch.N(), "V", k);
    }

    VerifyReport report;
    for (int k = 0; k < 3; ++k) {
        report.dim_U[static_cast<std::size_t>(k)] =
            static_cast<int>(sol.U[static_cast<std::size_t>(k)].dim());
        report.dim_V[static_cast<std::size_t>(k)] =
            static_cast<int>(sol.V[static_cast<std::size_t>(k)].dim());
    }

    // Cross-pair orthogonality |V_i^H H(i,j) U_j|_F; bases are orthonormal,
    // so the residuals are scale-free.
    int slot = 0;
    for (int i = 1; i <= 3; ++i) {
        for (int j = 1; j <= 3; ++j) {
            if (i == j) continue;
            const double res = (sol.V[static_cast<std::size_t>(i - 1)].basis().adjoint() *
                                ch.H(i, j) * sol.U[static_cast<std::size_t>(j - 1)].basis())
                                   .norm();
            report.residuals[static_cast<std::size_t>(slot++)] = res;
            report.max_residual = std::max(report.max_residual, res);
        }
    }

    report.interference_dim = interference_profile(ch, sol.U, tol);

    for (int i = 1; i <= 3; ++i) {
        const Subspace desired = Subspace::from_span(
            ch.H(i, i) * sol.U[static_cast<std::size_t>(i - 1)].basis(), tol);
        report.decodability_rank[static_cast<std::size_t>(i - 1)] = static_cast<int>(
            projection_rank(sol.V[static_cast<std::size_t>(i - 1)], desired, tol));
    }

    report.pass = report.max_residual <= tol.residual_tol;
    for (int k = 0; k < 3; ++k) {
        report.pass = report.pass && report.dim_U[static_cast<std::size_t>(k)] == d &&
                      report.dim_V[static_cast<std::size_t>(k)] == d &&
                      report.decodability_rank[static_cast<std::size_t>(k)] == d;
    }
    return report;
}

std::array<int, 3> interference_profile(const ChannelSet& ch,
                                        const std::array<Subspace, 3>& U,
                                        const ToleranceConfig& tol) {
    for (int k = 1; k <= 3; ++k)
        check_shape(U[static_cast<std::size_t>(k - 1)], ch.M(), "U", k);
    std::array<int, 3> dims{};
    for (int i = 1; i <= 3; ++i) {
        const Subspace& next = U[static_cast<std::size_t>(next_user(i) - 1)];
        const Subspace& prev = U[static_cast<std::size_t>(prev_user(i) - 1)];
        CMat images(ch.N(), next.dim() + prev.dim());
        images << ch.Hplus(i) * next.basis(), ch.Hminus(i) * prev.basis();
        dims[static_cast<std::size_t>(i - 1)] = static_cast<int>(rank(images, tol));
    }
    return dims;
}

std::string VerifyReport::to_json() const {
    nlohmann::json root;
    root["pass"] = pass;
    root["max_residual"] = max_residual;
    nlohmann::json pairs = nlohmann::json::array();
    int slot = 0;
    for (int i = 1; i <= 3; ++i) {
        for (int j = 1; j <= 3; ++j) {
            if (i == j) continue;
            pairs.push_back({{"rx", i},
                             {"tx", j},
                             {"residual", residuals[static_cast<std::size_t>(slot++)]}});
        }
    }
    root["residuals"] = std::move(pairs);
    root["dim_U"] = dim_U;
    root["dim_V"] = dim_V;
    root["interference_dim"] = interference_dim;
    root["decodability_rank"] = decodability_rank;
    return root.dump();
}

} // namespace ia
