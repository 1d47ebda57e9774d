#pragma once

#include "ia/linalg.hpp"

#include <array>
#include <cstdint>
#include <string>

namespace ia {

/// Symmetric system parameters: M transmit antennas, N receive antennas and
/// d desired transmit dimensions per user.
struct SystemParams {
    int M = 0;
    int N = 0;
    int d = 0;

    /// Requires M, N, d >= 1 and d <= min(M, N).
    void validate() const;
};

/// User index arithmetic modulo 3, staying in {1, 2, 3}.
inline int next_user(int i) { return i % 3 + 1; }
inline int prev_user(int i) { return (i + 1) % 3 + 1; }
/// Reduces an arbitrary (possibly large) 1-based index to {1, 2, 3}.
inline int wrap_user(int i) { return (i - 1 + 3 * 1024) % 3 + 1; }

/// The nine channel matrices of a 3-user system. H(i, j) is the N x M
/// channel from transmitter j to receiver i, users indexed 1..3.
class ChannelSet {
public:
    ChannelSet(int M, int N);

    int M() const { return M_; }
    int N() const { return N_; }

    const CMat& H(int i, int j) const;
    CMat& H(int i, int j);

    /// H(i, i+1), the "clockwise" cross channel seen by receiver i.
    const CMat& Hplus(int i) const { return H(i, next_user(i)); }
    /// H(i, i-1), the "counter-clockwise" cross channel.
    const CMat& Hminus(int i) const { return H(i, prev_user(i)); }

    bool operator==(const ChannelSet& other) const;

private:
    int M_, N_;
    std::array<CMat, 9> h_;
};

/// Draws nine N x M matrices with i.i.d. standard complex Gaussian entries
/// from a counter-based generator keyed by (seed, i, j): each matrix has its
/// own stream, so the result does not depend on generation order.
ChannelSet generate_channels(int M, int N, std::uint64_t seed);

/// The 0/1-valued specialization used by the exact rank test: all clockwise
/// channels become B = [I_M; 0], all counter-clockwise channels become
/// C = [0; I_M] (zero blocks of size (N-M) x M). Direct channels are set to
/// B as well. Requires N >= M.
ChannelSet specialized_channels(int M, int N);

/// The reciprocal system: M' = N, N' = M and H'(j, i) = H(i, j)^H. A
/// verified solution (U, V) of the original maps to the verified solution
/// (V, U) of the dual; applying the dual twice returns the original.
ChannelSet transpose_dual(const ChannelSet& ch);

/// JSON serialization: {"M":, "N":, "K": 3, "H": {"H_i_j": [[[re, im], ...]
/// row-major]}}. Round-trips exactly.
void write_channels(const ChannelSet& ch, const std::string& path);
ChannelSet read_channels(const std::string& path);

std::string channels_to_json(const ChannelSet& ch);
ChannelSet channels_from_json(const std::string& text);

} // namespace ia
