#pragma once

#include <optional>
#include <string>
#include <vector>

/// Closed-form feasibility of vector-space alignment for the symmetric
/// 3-user M x N channel with d streams per user: feasible iff
/// (2r+1) d <= max(rN, (r+1)M) for every integer r >= 0 (stated for N >= M;
/// the M > N case follows by swapping).
namespace ia {

struct FeasibilityVerdict {
    bool feasible = false;
    /// Smallest r violating the inequality, absent iff feasible.
    std::optional<int> violated_r;
    /// All r in the checked range where the inequality is tight.
    std::vector<int> binding_r;
};

struct RegionCell {
    int M = 0;
    int N = 0;
    bool feasible = false;
    /// Maximum alignment path length, 0 meaning unbounded (M == N).
    int path_label = 0;
};

/// Evaluates the feasibility inequalities for r = 0 .. M+N+2d after
/// normalizing to N >= M. The bound generously covers both regimes: for
/// N > 2d the slack is eventually increasing in r, otherwise a violation
/// occurs at small r.
FeasibilityVerdict is_feasible(int M, int N, int d);

/// The necessary condition obtained by counting equations against free
/// parameters: 4d <= M + N. Weaker than is_feasible (e.g. (4, 8, 3)).
bool equation_count_bound(int M, int N, int d);

/// Marker returned by max_path_length on the diagonal M == N, where
/// arbitrarily long alignment paths exist.
inline constexpr int kUnboundedPath = 0;

/// Maximum alignment path length r*+1, where r* is the unique integer with
/// r*N < (r*+1)M and (r*+1)N >= (r*+2)M (after normalizing to N >= M).
/// Returns kUnboundedPath when M == N.
int max_path_length(int M, int N);

/// Closed form on the critical line M + N = 4d (N >= M after
/// normalization): feasible iff N = M = 2d or (2d - M) divides d.
/// Throws std::invalid_argument when M + N != 4d.
bool critical_feasible(int M, int N, int d);

/// One cell per (M, N) with d <= M <= M_max, d <= N <= N_max, row-major
/// (M outer, N inner).
std::vector<RegionCell> region_sweep(int d, int M_max, int N_max);

/// CSV rows "M,N,d,feasible,path_label" (path_label "inf" on the diagonal).
std::string region_to_csv(const std::vector<RegionCell>& cells, int d);

/// Unit-square grid, white = feasible, gray (#cccccc) = infeasible, each
/// cell annotated with its path label.
std::string region_to_svg(const std::vector<RegionCell>& cells, int d);

} // namespace ia
