#pragma once

#include "ia/alignment.hpp"
#include "ia/channel.hpp"
#include "ia/linalg.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ia {

enum class Variant {
    eigen,         ///< invariant-subspace construction on the diagonal M == N
    critical,      ///< forced kernel construction on the line M + N = 4d
    general_case1, ///< kernels of A_r only (paths of maximum length r+1)
    general_case2, ///< kernels of A_r plus kernels of A_{r-1}
};

std::string to_string(Variant v);
Variant variant_from_string(const std::string& s);

/// Bookkeeping about which subspaces fed each transmit space.
struct SolutionInventory {
    int W_dim = 0; ///< per-kernel dimension taken from ker A_r
    int X_dim = 0; ///< per-kernel dimension taken from ker A_{r-1} (case 2)
    int w_dim = 0; ///< 1 when a remainder line was used, else 0
    std::array<int, 3> V_pretrunc{0, 0, 0}; ///< dim of each V_j before truncation
    std::vector<int> selection;             ///< eigen variant: chosen eigenvector indices (1-based)
};

struct AlignmentSolution {
    std::array<Subspace, 3> U; ///< transmit subspaces in C^M, dim d
    std::array<Subspace, 3> V; ///< receive subspaces in C^N, dim d
    Variant variant = Variant::general_case1;
    int r = -1; ///< path parameter used (kernel variants; -1 for eigen)
    std::optional<std::uint64_t> seed; ///< channel seed, when generated
    SolutionInventory inventory;
};

/// Thrown when construction is refused because the parameters are
/// infeasible; carries the rank certificate for the violated inequality.
struct infeasible_error : std::runtime_error {
    infeasible_error(const std::string& msg, ConverseCertificate cert)
        : std::runtime_error(msg), certificate(cert) {}
    ConverseCertificate certificate;
};

/// Constructs an explicit alignment solution for any feasible (M, N, d):
/// M == N dispatches to the eigenvector construction, M > N constructs on
/// the reciprocal dual and swaps U and V, otherwise the general kernel
/// construction applies (it subsumes the critical line). The result is
/// checked against the verifier before returning. Infeasible parameters
/// throw infeasible_error with a certificate; non-generic channels throw
/// degeneracy_error.
AlignmentSolution construct(const ChannelSet& ch, int d,
                            const ToleranceConfig& tol = {});

/// Invariant-subspace construction for M == N >= 2d: the cycle matrix
/// B = H12 H32^-1 H31 H21^-1 H23 H13^-1 generically has M distinct
/// eigenvectors; the span of the selected d of them is the aligned
/// interference at receiver 1, the transmit spaces are its preimages along
/// the cycle and each V_i annihilates the interference at receiver i.
/// `selection` holds d distinct 1-based indices into the canonical
/// eigenpair ordering; there is one solution per d-subset.
AlignmentSolution construct_eigen(const ChannelSet& ch, int d,
                                  const std::vector<int>& selection,
                                  const ToleranceConfig& tol = {});

/// Forced construction at critical points (N >= M, M + N = 4d, 2d - M > 0
/// and (2d - M) | d): r = d/(2d-M) - 1, the kernels of the shifted
/// alignment matrices have dimension d/(r+1) each and their block
/// projections assemble the transmit spaces exactly.
AlignmentSolution construct_critical(const ChannelSet& ch, int d,
                                     const ToleranceConfig& tol = {});

/// Appendix construction for N > M: r is the unique integer with
/// rN < (r+1)M and (r+1)N >= (r+2)M. Case 1 (d <= (r+1)[(r+1)M - rN])
/// takes floor(d/(r+1)) directions per kernel of A_r plus, when the
/// division leaves a remainder d', one extra line from d' of the kernels.
/// Case 2 takes the whole kernels of A_r and tops up with directions from
/// ker A_{r-1} outside the projection of ker A_r.
AlignmentSolution construct_general(const ChannelSet& ch, int d,
                                    const ToleranceConfig& tol = {});

/// Solution JSON: {"M":, "N":, "d":, "variant":, "U": [...], "V": [...]}
/// plus metadata ("r", "seed", "inventory") in the same complex-matrix
/// encoding as channel files.
void write_solution(const AlignmentSolution& sol, const std::string& path);
AlignmentSolution read_solution(const std::string& path);
std::string solution_to_json(const AlignmentSolution& sol);
AlignmentSolution solution_from_json(const std::string& text);

} // namespace ia
