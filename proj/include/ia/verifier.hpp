#pragma once

#include "ia/channel.hpp"
#include "ia/constructor.hpp"
#include "ia/linalg.hpp"

#include <array>
#include <string>

namespace ia {

/// Independent check of a proposed solution: orthogonality of every cross
/// pair V_i^H H(i,j) U_j, subspace dimensions, per-receiver interference
/// dimension and decodability of the desired signal through V_i.
struct VerifyReport {
    bool pass = false;
    /// Residuals |V_i^H H(i,j) U_j|_F for (i,j) in lexicographic order
    /// (1,2),(1,3),(2,1),(2,3),(3,1),(3,2); bases are orthonormalized
    /// first, so the values are scale-free.
    std::array<double, 6> residuals{};
    std::array<int, 3> dim_U{};
    std::array<int, 3> dim_V{};
    /// dim(Hplus(i) U_{i+1} + Hminus(i) U_{i-1}) per receiver.
    std::array<int, 3> interference_dim{};
    /// dim(Proj_{V_i} H(i,i) U_i) per receiver.
    std::array<int, 3> decodability_rank{};
    double max_residual = 0.0;

    std::string to_json() const;
};

/// pass iff all six residuals <= residual_tol, all six dims == d and every
/// decodability rank == d. Uses only (ch, sol, d), no constructor state, so
/// it serves as the acceptance oracle. Throws on shape mismatches, naming
/// the offending subspace.
VerifyReport verify(const ChannelSet& ch, const AlignmentSolution& sol, int d,
                    const ToleranceConfig& tol = {});

/// Dimension of the summed interference image at each receiver for the
/// given transmit subspaces.
std::array<int, 3> interference_profile(const ChannelSet& ch,
                                        const std::array<Subspace, 3>& U,
                                        const ToleranceConfig& tol = {});

} // namespace ia
