#include "ia/feasibility.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace ia {

namespace {

void require_positive(int M, int N, int d) {
    if (M < 1 || N < 1 || d < 1)
        throw std::invalid_argument("M, N, d must be >= 1");
}

// (2r+1) d <= max(rN, (r+1)M), evaluated in 64-bit to keep large sweeps safe.
bool holds_at(long long r, long long M, long long N, long long d) {
    return (2 * r + 1) * d <= std::max(r * N, (r + 1) * M);
}

bool tight_at(long long r, long long M, long long N, long long d) {
    return (2 * r + 1) * d == std::max(r * N, (r + 1) * M);
}

} // namespace

FeasibilityVerdict is_feasible(int M, int N, int d) {
    require_positive(M, N, d);
    if (N < M) std::swap(M, N); // the criterion is symmetric with M and N switched

    FeasibilityVerdict verdict;
    verdict.feasible = true;
    const int r_max = M + N + 2 * d;
    for (int r = 0; r <= r_max; ++r) {
        if (!holds_at(r, M, N, d)) {
            if (verdict.feasible) {
                verdict.feasible = false;
                verdict.violated_r = r;
            }
        } else if (tight_at(r, M, N, d)) {
            verdict.binding_r.push_back(r);
        }
    }
    return verdict;
}

bool equation_count_bound(int M, int N, int d) {
    if (d > std::min(M, N))
        throw std::invalid_argument("equation_count_bound requires d <= min(M, N)");
    return 4 * d <= M + N;
}

int max_path_length(int M, int N) {
    if (M < 1 || N < 1) throw std::invalid_argument("M, N must be >= 1");
    if (N < M) std::swap(M, N);
    if (N == M) return kUnboundedPath;
    // Unique r with rN < (r+1)M and (r+1)N >= (r+2)M, i.e.
    // r < M/(N-M) <= r+1.
    const int r = (N - 1) / (N - M) - 1;
    return r + 1;
}

bool critical_feasible(int M, int N, int d) {
    require_positive(M, N, d);
    if (N < M) std::swap(M, N);
    if (M + N != 4 * d)
        throw std::invalid_argument("critical_feasible requires M + N = 4d");
    if (M == N) return true; // then M = N = 2d
    const int gap = 2 * d - M; // = N - 2d > 0 off the diagonal
    return d % gap == 0;
}

std::vector<RegionCell> region_sweep(int d, int M_max, int N_max) {
    if (d < 1) throw std::invalid_argument("d must be >= 1");
    if (M_max < d || N_max < d) throw std::invalid_argument("sweep bounds must be >= d");
    std::vector<RegionCell> cells;
    cells.reserve(static_cast<std::size_t>(M_max - d + 1) *
                  static_cast<std::size_t>(N_max - d + 1));
    for (int M = d; M <= M_max; ++M) {
        for (int N = d; N <= N_max; ++N) {
            RegionCell cell;
            cell.M = M;
            cell.N = N;
            cell.feasible = is_feasible(M, N, d).feasible;
            cell.path_label = max_path_length(M, N);
            cells.push_back(cell);
        }
    }
    return cells;
}

std::string region_to_csv(const std::vector<RegionCell>& cells, int d) {
    std::ostringstream out;
    out << "M,N,d,feasible,path_label\n";
    for (const RegionCell& cell : cells) {
        out << cell.M << ',' << cell.N << ',' << d << ','
            << (cell.feasible ? "true" : "false") << ',';
        if (cell.path_label == kUnboundedPath)
            out << "inf";
        else
            out << cell.path_label;
        out << '\n';
    }
    return out.str();
}

std::string region_to_svg(const std::vector<RegionCell>& cells, int d) {
    int M_max = d, N_max = d;
    for (const RegionCell& cell : cells) {
        M_max = std::max(M_max, cell.M);
        N_max = std::max(N_max, cell.N);
    }
    const int side = 28, margin = 30;
    const int width = margin + (M_max - d + 1) * side + 10;
    const int height = margin + (N_max - d + 1) * side + 10;

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" font-family=\"monospace\" font-size=\"11\">\n";
    for (const RegionCell& cell : cells) {
        const int x = margin + (cell.M - d) * side;
        const int y = 10 + (N_max - cell.N) * side;
        out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << side << "\" height=\""
            << side << "\" fill=\"" << (cell.feasible ? "#ffffff" : "#cccccc")
            << "\" stroke=\"#666666\"/>\n";
        out << "<text x=\"" << x + side / 2 << "\" y=\"" << y + side / 2 + 4
            << "\" text-anchor=\"middle\">";
        if (cell.path_label == kUnboundedPath)
            out << "inf";
        else
            out << cell.path_label;
        out << "</text>\n";
    }
    // axis labels
    for (int M = d; M <= M_max; ++M)
        out << "<text x=\"" << margin + (M - d) * side + side / 2 << "\" y=\"" << height - 6
            << "\" text-anchor=\"middle\">" << M << "</text>\n";
    for (int N = d; N <= N_max; ++N)
        out << "<text x=\"" << margin - 6 << "\" y=\"" << 10 + (N_max - N) * side + side / 2 + 4
            << "\" text-anchor=\"end\">" << N << "</text>\n";
    out << "<text x=\"" << width - 10 << "\" y=\"" << height - 6
        << "\" text-anchor=\"end\">M</text>\n";
    out << "<text x=\"" << margin - 6 << "\" y=\"8\" text-anchor=\"end\">N</text>\n";
    out << "</svg>\n";
    return out.str();
}

} // namespace ia
