#include "ia/constructor.hpp"

#include "ia/feasibility.hpp"
#include "ia/verifier.hpp"
#include "json_util.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

namespace ia {

namespace {

using nlohmann::json;

// Block t (1-based) of a stack of path vectors: rows [(t-1)M, tM).
CMat block_of(const CMat& stacked, int t, int M) {
    return stacked.middleRows(static_cast<Eigen::Index>(t - 1) * M, M);
}

// Orthonormalizes the concatenation of raw spanning pieces and checks that
// they are linearly independent (rank equals the total column count).
Subspace assemble_transmit_space(const std::vector<CMat>& pieces, int M, int d, int j,
                                 const ToleranceConfig& tol) {
    Eigen::Index cols = 0;
    for (const CMat& p : pieces) cols += p.cols();
    CMat stacked(M, cols);
    Eigen::Index at = 0;
    for (const CMat& p : pieces) {
        stacked.middleCols(at, p.cols()) = p;
        at += p.cols();
    }
    Subspace U = Subspace::from_span(stacked, tol);
    if (U.dim() != cols || cols != d) {
        std::ostringstream msg;
        msg << "transmit space U_" << j << " spans " << U.dim() << " of " << cols
            << " contributed dimensions (need " << d << "); channels look degenerate";
        throw degeneracy_error(msg.str());
    }
    return U;
}

// V_j = orthogonal complement of the interference image at receiver j,
// truncated to its first d canonical directions. Everything the two
// interfering transmit spaces can produce at receiver j is annihilated.
Subspace receive_space(const ChannelSet& ch, const std::array<Subspace, 3>& U, int j, int d,
                       const ToleranceConfig& tol, int* pretrunc_dim) {
    const int N = ch.N();
    CMat images(N, U[static_cast<std::size_t>(next_user(j) - 1)].dim() +
                       U[static_cast<std::size_t>(prev_user(j) - 1)].dim());
    images << ch.Hplus(j) * U[static_cast<std::size_t>(next_user(j) - 1)].basis(),
        ch.Hminus(j) * U[static_cast<std::size_t>(prev_user(j) - 1)].basis();
    const Subspace interference = Subspace::from_span(images, tol);
    Subspace comp = orth_complement(interference);
    if (pretrunc_dim) *pretrunc_dim = static_cast<int>(comp.dim());
    if (comp.dim() < d) {
        std::ostringstream msg;
        msg << "receive space V_" << j << " has only " << comp.dim() << " dimensions (need "
            << d << "); interference failed to align";
        throw degeneracy_error(msg.str());
    }
    return Subspace(comp.ambient(), comp.basis().leftCols(d));
}

void fill_receive_spaces(const ChannelSet& ch, AlignmentSolution& sol, int d,
                         const ToleranceConfig& tol) {
    for (int j = 1; j <= 3; ++j) {
        int pre = 0;
        sol.V[static_cast<std::size_t>(j - 1)] = receive_space(ch, sol.U, j, d, tol, &pre);
        sol.inventory.V_pretrunc[static_cast<std::size_t>(j - 1)] = pre;
    }
}

// The appendix parameter: the unique r with rN < (r+1)M and
// (r+1)N >= (r+2)M. Requires N > M.
int path_parameter(int M, int N) {
    const int r = (N - 1) / (N - M) - 1;
    if (!(static_cast<long long>(r) * N < static_cast<long long>(r + 1) * M &&
          static_cast<long long>(r + 1) * N >= static_cast<long long>(r + 2) * M))
        throw std::logic_error("path parameter inconsistency");
    return r;
}

void refuse_if_infeasible(const ChannelSet& ch, int d, const ToleranceConfig& tol) {
    const int M = ch.M(), N = ch.N();
    if (is_feasible(M, N, d).feasible) return;
    const auto cert = N >= M ? converse_certificate(ch, d, tol)
                             : converse_certificate(transpose_dual(ch), d, tol);
    std::ostringstream msg;
    msg << "alignment infeasible for (M=" << M << ", N=" << N << ", d=" << d
        << "): at r=" << cert->r << ", (2r+1)d = " << cert->lhs << " > " << cert->rhs
        << " = max(rN, (r+1)M) and A_r has full rank " << cert->rank_Ar;
    throw infeasible_error(msg.str(), *cert);
}

CMat solve_square(const CMat& a, const CMat& rhs, const char* name,
                  const ToleranceConfig& tol) {
    if (rank(a, tol) != a.rows()) {
        std::ostringstream msg;
        msg << "channel " << name << " is numerically singular";
        throw degeneracy_error(msg.str());
    }
    return a.partialPivLu().solve(rhs);
}

} // namespace

std::string to_string(Variant v) {
    switch (v) {
    case Variant::eigen: return "eigen";
    case Variant::critical: return "critical";
    case Variant::general_case1: return "general-case1";
    case Variant::general_case2: return "general-case2";
    }
    return "unknown";
}

Variant variant_from_string(const std::string& s) {
    if (s == "eigen") return Variant::eigen;
    if (s == "critical") return Variant::critical;
    if (s == "general-case1") return Variant::general_case1;
    if (s == "general-case2") return Variant::general_case2;
    throw std::runtime_error("unknown construction variant \"" + s + "\"");
}

AlignmentSolution construct(const ChannelSet& ch, int d, const ToleranceConfig& tol) {
    tol.validate();
    if (d < 1) throw std::invalid_argument("construct requires d >= 1");
    refuse_if_infeasible(ch, d, tol);

    AlignmentSolution sol;
    if (ch.M() == ch.N()) {
        std::vector<int> selection(static_cast<std::size_t>(d));
        std::iota(selection.begin(), selection.end(), 1);
        sol = construct_eigen(ch, d, selection, tol);
    } else if (ch.M() > ch.N()) {
        // Reciprocal system: solve with the roles of the two sides swapped.
        AlignmentSolution dual = construct(transpose_dual(ch), d, tol);
        sol = dual;
        sol.U = dual.V;
        sol.V = dual.U;
    } else {
        sol = construct_general(ch, d, tol);
    }

    const VerifyReport report = verify(ch, sol, d, tol);
    if (!report.pass) {
        std::ostringstream msg;
        msg << "constructed solution failed self-verification (max residual "
            << report.max_residual << "); channels look degenerate";
        throw degeneracy_error(msg.str());
    }
    return sol;
}

AlignmentSolution construct_eigen(const ChannelSet& ch, int d,
                                  const std::vector<int>& selection,
                                  const ToleranceConfig& tol) {
    const int M = ch.M(), N = ch.N();
    if (M != N) throw std::invalid_argument("eigen construction requires M == N");
    if (N < 2 * d) throw std::invalid_argument("eigen construction requires M = N >= 2d");
    if (static_cast<int>(selection.size()) != d)
        throw std::invalid_argument("eigen construction needs exactly d selected eigenvectors");
    for (int s : selection)
        if (s < 1 || s > M)
            throw std::invalid_argument("eigenvector selection index out of range");
    {
        std::vector<int> sorted = selection;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw std::invalid_argument("eigenvector selection indices must be distinct");
    }

    // Cycle matrix B = H12 H32^-1 H31 H21^-1 H23 H13^-1 at receiver 1. Its
    // invariant subspaces are exactly the interference spans that come back
    // to themselves after one trip around the triangle.
    CMat T = solve_square(ch.H(1, 3), CMat::Identity(M, M), "H(1,3)", tol);
    T = ch.H(2, 3) * T;
    T = solve_square(ch.H(2, 1), T, "H(2,1)", tol);
    T = ch.H(3, 1) * T;
    T = solve_square(ch.H(3, 2), T, "H(3,2)", tol);
    const CMat B = ch.H(1, 2) * T;

    const std::vector<Eigenpair> pairs = eigenpairs(B);
    double max_mag = 0.0;
    for (const Eigenpair& p : pairs) max_mag = std::max(max_mag, std::abs(p.value));
    for (std::size_t a = 0; a < pairs.size(); ++a)
        for (std::size_t b = a + 1; b < pairs.size(); ++b)
            if (std::abs(pairs[a].value - pairs[b].value) <= tol.residual_tol * max_mag)
                throw degeneracy_error("cycle matrix has (numerically) repeated eigenvalues");

    CMat selected(M, d);
    for (int k = 0; k < d; ++k)
        selected.col(k) = pairs[static_cast<std::size_t>(selection[static_cast<std::size_t>(k)] - 1)].vector;
    const Subspace aligned = Subspace::from_span(selected, tol);
    if (aligned.dim() != d)
        throw degeneracy_error("selected eigenvectors are not linearly independent");

    // The aligned interference at receiver 1 is B-invariant; pull it back
    // around the cycle to get the transmit spaces.
    AlignmentSolution sol;
    sol.variant = Variant::eigen;
    sol.inventory.selection = selection;
    Subspace& U1 = sol.U[0];
    Subspace& U2 = sol.U[1];
    Subspace& U3 = sol.U[2];
    U3 = Subspace::from_span(solve_square(ch.H(1, 3), aligned.basis(), "H(1,3)", tol), tol);
    U1 = Subspace::from_span(solve_square(ch.H(2, 1), ch.H(2, 3) * U3.basis(), "H(2,1)", tol),
                             tol);
    U2 = Subspace::from_span(solve_square(ch.H(3, 2), ch.H(3, 1) * U1.basis(), "H(3,2)", tol),
                             tol);
    for (int j = 1; j <= 3; ++j)
        if (sol.U[static_cast<std::size_t>(j - 1)].dim() != d)
            throw degeneracy_error("transmit space lost dimensions along the cycle");

    fill_receive_spaces(ch, sol, d, tol);
    return sol;
}

AlignmentSolution construct_critical(const ChannelSet& ch, int d, const ToleranceConfig& tol) {
    const int M = ch.M(), N = ch.N();
    if (N < M) throw std::invalid_argument("critical construction requires N >= M");
    if (M + N != 4 * d) throw std::invalid_argument("critical construction requires M + N = 4d");
    const int gap = 2 * d - M;
    if (gap <= 0 || d % gap != 0)
        throw std::invalid_argument("critical construction requires 2d - M > 0 dividing d");

    const int r = d / gap - 1;
    const int per_kernel = d / (r + 1); // = (r+1)M - rN

    std::array<Subspace, 3> kernels;
    for (int i = 1; i <= 3; ++i)
        kernels[static_cast<std::size_t>(i - 1)] = kernel_of_alignment_matrix(ch, r, i, tol);

    AlignmentSolution sol;
    sol.variant = Variant::critical;
    sol.r = r;
    sol.inventory.W_dim = per_kernel;
    for (int j = 1; j <= 3; ++j) {
        std::vector<CMat> pieces;
        for (int t = 1; t <= r + 1; ++t) {
            const int i = wrap_user(j - t);
            pieces.push_back(block_of(kernels[static_cast<std::size_t>(i - 1)].basis(), t, M));
        }
        sol.U[static_cast<std::size_t>(j - 1)] = assemble_transmit_space(pieces, M, d, j, tol);
    }
    fill_receive_spaces(ch, sol, d, tol);
    return sol;
}

AlignmentSolution construct_general(const ChannelSet& ch, int d, const ToleranceConfig& tol) {
    const int M = ch.M(), N = ch.N();
    if (N <= M)
        throw std::invalid_argument("general construction requires N > M (use the eigen "
                                    "construction on the diagonal)");
    refuse_if_infeasible(ch, d, tol);

    const int r = path_parameter(M, N);
    const int kernel_dim = (r + 1) * M - r * N; // dim ker A_r, generic channels

    std::array<Subspace, 3> kernels;
    for (int i = 1; i <= 3; ++i)
        kernels[static_cast<std::size_t>(i - 1)] = kernel_of_alignment_matrix(ch, r, i, tol);

    AlignmentSolution sol;
    sol.r = r;

    if (d <= (r + 1) * kernel_dim) {
        // Case 1: paths of length r+1 suffice. Take floor(d/(r+1))
        // directions from each kernel plus one extra line from d' of them.
        const int q = d / (r + 1);
        const int d_rem = d - (r + 1) * q;
        sol.variant = Variant::general_case1;
        sol.inventory.W_dim = q;
        sol.inventory.w_dim = d_rem > 0 ? 1 : 0;

        for (int j = 1; j <= 3; ++j) {
            std::vector<CMat> pieces;
            for (int t = 1; t <= r + 1; ++t) {
                const int i = wrap_user(j - t);
                if (q > 0)
                    pieces.push_back(
                        block_of(kernels[static_cast<std::size_t>(i - 1)].basis().leftCols(q), t, M));
            }
            for (int t = 1; t <= d_rem; ++t) {
                const int i = wrap_user(j - t);
                pieces.push_back(
                    block_of(kernels[static_cast<std::size_t>(i - 1)].basis().col(q), t, M));
            }
            sol.U[static_cast<std::size_t>(j - 1)] = assemble_transmit_space(pieces, M, d, j, tol);
        }
    } else {
        // Case 2: the kernels of A_r are exhausted; shorter paths from
        // ker A_{r-1}, taken outside the projection of ker A_r, fill the
        // remaining dimensions.
        const int d_rem = d - (r + 1) * kernel_dim;
        const int x_dim = d_rem / r;
        const int d_rem2 = d_rem - r * x_dim;
        sol.variant = Variant::general_case2;
        sol.inventory.W_dim = kernel_dim;
        sol.inventory.X_dim = x_dim;
        sol.inventory.w_dim = d_rem2 > 0 ? 1 : 0;

        std::array<CMat, 3> shorter; // bases inside ker A_{r-1}, orthogonal to pi(ker A_r)
        const int need = x_dim + (d_rem2 > 0 ? 1 : 0);
        for (int i = 1; i <= 3; ++i) {
            const Subspace shorter_kernel = kernel_of_alignment_matrix(ch, r - 1, i, tol);
            // pi drops the last block of coordinates; pi(ker A_r) lies
            // inside ker A_{r-1}.
            const CMat projected =
                kernels[static_cast<std::size_t>(i - 1)].basis().topRows(
                    static_cast<Eigen::Index>(r) * M);
            if (r >= 2) {
                const CMat check = build_alignment_matrix(ch, r - 1, i).matrix * projected;
                if (check.norm() > tol.residual_tol *
                                       std::max(1.0, build_alignment_matrix(ch, r - 1, i).matrix.norm()))
                    throw degeneracy_error("projected kernel does not satisfy the shorter "
                                           "alignment equations");
            }
            const CMat coords = shorter_kernel.basis().adjoint() * projected;
            const Subspace inside = kernel_basis(coords.adjoint(), tol);
            if (inside.dim() < need)
                throw degeneracy_error("not enough directions in ker A_{r-1} outside the "
                                       "projection of ker A_r");
            shorter[static_cast<std::size_t>(i - 1)] =
                shorter_kernel.basis() * inside.basis().leftCols(need);
        }

        for (int j = 1; j <= 3; ++j) {
            std::vector<CMat> pieces;
            for (int t = 1; t <= r + 1; ++t) {
                const int i = wrap_user(j - t);
                pieces.push_back(block_of(kernels[static_cast<std::size_t>(i - 1)].basis(), t, M));
            }
            for (int t = 1; t <= r; ++t) {
                const int i = wrap_user(j - t);
                if (x_dim > 0)
                    pieces.push_back(block_of(
                        shorter[static_cast<std::size_t>(i - 1)].leftCols(x_dim), t, M));
            }
            for (int t = 1; t <= d_rem2; ++t) {
                const int i = wrap_user(j - t);
                pieces.push_back(
                    block_of(shorter[static_cast<std::size_t>(i - 1)].col(x_dim), t, M));
            }
            sol.U[static_cast<std::size_t>(j - 1)] = assemble_transmit_space(pieces, M, d, j, tol);
        }
    }

    fill_receive_spaces(ch, sol, d, tol);
    return sol;
}

std::string solution_to_json(const AlignmentSolution& sol) {
    json root;
    root["M"] = sol.U[0].ambient();
    root["N"] = sol.V[0].ambient();
    root["d"] = sol.U[0].dim();
    root["variant"] = to_string(sol.variant);
    if (sol.r >= 0) root["r"] = sol.r;
    if (sol.seed) root["seed"] = *sol.seed;
    json inv;
    inv["W"] = sol.inventory.W_dim;
    inv["X"] = sol.inventory.X_dim;
    inv["w"] = sol.inventory.w_dim;
    inv["V_pretrunc"] = sol.inventory.V_pretrunc;
    if (!sol.inventory.selection.empty()) inv["selection"] = sol.inventory.selection;
    root["inventory"] = std::move(inv);
    json us = json::array(), vs = json::array();
    for (int k = 0; k < 3; ++k) {
        us.push_back(detail::matrix_to_json(sol.U[static_cast<std::size_t>(k)].basis()));
        vs.push_back(detail::matrix_to_json(sol.V[static_cast<std::size_t>(k)].basis()));
    }
    root["U"] = std::move(us);
    root["V"] = std::move(vs);
    return root.dump();
}

AlignmentSolution solution_from_json(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("solution file: invalid JSON: ") + e.what());
    }
    for (const char* key : {"M", "N", "d", "variant", "U", "V"})
        if (!root.contains(key))
            throw std::runtime_error(std::string("solution file: missing key \"") + key + "\"");
    const Eigen::Index M = root["M"].get<Eigen::Index>();
    const Eigen::Index N = root["N"].get<Eigen::Index>();
    const Eigen::Index d = root["d"].get<Eigen::Index>();
    if (M < 1 || N < 1 || d < 1)
        throw std::runtime_error("solution file: M, N, d must be >= 1");

    AlignmentSolution sol;
    sol.variant = variant_from_string(root["variant"].get<std::string>());
    if (root.contains("r")) sol.r = root["r"].get<int>();
    if (root.contains("seed")) sol.seed = root["seed"].get<std::uint64_t>();
    if (root.contains("inventory")) {
        const json& inv = root["inventory"];
        sol.inventory.W_dim = inv.value("W", 0);
        sol.inventory.X_dim = inv.value("X", 0);
        sol.inventory.w_dim = inv.value("w", 0);
        if (inv.contains("V_pretrunc"))
            for (int k = 0; k < 3; ++k)
                sol.inventory.V_pretrunc[static_cast<std::size_t>(k)] =
                    inv["V_pretrunc"][static_cast<std::size_t>(k)].get<int>();
        if (inv.contains("selection"))
            sol.inventory.selection = inv["selection"].get<std::vector<int>>();
    }

    const json& us = root["U"];
    const json& vs = root["V"];
    if (!us.is_array() || us.size() != 3 || !vs.is_array() || vs.size() != 3)
        throw std::runtime_error("solution file: \"U\" and \"V\" must hold three matrices");
    try {
        // Orthonormalize rather than trust the file: a malformed basis is a
        // verification failure, not a parse error.
        for (int k = 0; k < 3; ++k) {
            sol.U[static_cast<std::size_t>(k)] = Subspace::from_span(detail::matrix_from_json(
                us[static_cast<std::size_t>(k)], M, d, "U_" + std::to_string(k + 1)));
            sol.V[static_cast<std::size_t>(k)] = Subspace::from_span(detail::matrix_from_json(
                vs[static_cast<std::size_t>(k)], N, d, "V_" + std::to_string(k + 1)));
        }
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(std::string("solution file: ") + e.what());
    }
    return sol;
}

void write_solution(const AlignmentSolution& sol, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << solution_to_json(sol) << '\n';
}

AlignmentSolution read_solution(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return solution_from_json(buf.str());
}

} // namespace ia
