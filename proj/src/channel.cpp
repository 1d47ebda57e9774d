#include "ia/channel.hpp"

#include "json_util.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace ia {

namespace {

using json = nlohmann::json;

// Stateless counter-based stream: a SplitMix64-style finalizer applied to
// (seed, stream, counter). Per-matrix streams make the draw order
// irrelevant.
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t counter_draw(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    std::uint64_t z = mix64(seed + kGolden * (stream + 1));
    return mix64(z + kGolden * (counter + 1));
}

// Strictly inside (0, 1): 53 significant bits shifted off the half-open ends.
double to_unit_open(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

std::string key_of(int i, int j) {
    return "H_" + std::to_string(i) + "_" + std::to_string(j);
}

} // namespace

void SystemParams::validate() const {
    if (M < 1 || N < 1 || d < 1)
        throw std::invalid_argument("system parameters must satisfy M, N, d >= 1");
    if (d > std::min(M, N))
        throw std::invalid_argument("system parameters must satisfy d <= min(M, N)");
}

ChannelSet::ChannelSet(int M, int N) : M_(M), N_(N) {
    if (M < 1 || N < 1) throw std::invalid_argument("channel set needs M, N >= 1");
    for (auto& h : h_) h = CMat::Zero(N, M);
}

const CMat& ChannelSet::H(int i, int j) const {
    if (i < 1 || i > 3 || j < 1 || j > 3)
        throw std::invalid_argument("channel index out of range");
    return h_[static_cast<std::size_t>((i - 1) * 3 + (j - 1))];
}

CMat& ChannelSet::H(int i, int j) {
    return const_cast<CMat&>(static_cast<const ChannelSet&>(*this).H(i, j));
}

bool ChannelSet::operator==(const ChannelSet& other) const {
    if (M_ != other.M_ || N_ != other.N_) return false;
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j)
            if (H(i, j) != other.H(i, j)) return false;
    return true;
}

ChannelSet generate_channels(int M, int N, std::uint64_t seed) {
    ChannelSet ch(M, N);
    for (int i = 1; i <= 3; ++i) {
        for (int j = 1; j <= 3; ++j) {
            const std::uint64_t stream = static_cast<std::uint64_t>((i - 1) * 3 + (j - 1));
            CMat& m = ch.H(i, j);
            std::uint64_t counter = 0;
            for (int r = 0; r < N; ++r) {
                for (int c = 0; c < M; ++c) {
                    const double u1 = to_unit_open(counter_draw(seed, stream, counter++));
                    const double u2 = to_unit_open(counter_draw(seed, stream, counter++));
                    // Unit-variance complex Gaussian, (x + iy)/sqrt(2) in
                    // amplitude-phase form.
                    const double radius = std::sqrt(-std::log(u1));
                    const double angle = 2.0 * std::numbers::pi * u2;
                    m(r, c) = Complex(radius * std::cos(angle), radius * std::sin(angle));
                }
            }
        }
    }
    return ch;
}

ChannelSet specialized_channels(int M, int N) {
    if (N < M) throw std::invalid_argument("specialized_channels requires N >= M");
    CMat B = CMat::Zero(N, M);
    B.topRows(M) = CMat::Identity(M, M);
    CMat C = CMat::Zero(N, M);
    C.bottomRows(M) = CMat::Identity(M, M);

    ChannelSet ch(M, N);
    for (int i = 1; i <= 3; ++i) {
        ch.H(i, next_user(i)) = B;
        ch.H(i, prev_user(i)) = C;
        ch.H(i, i) = B;
    }
    return ch;
}

ChannelSet transpose_dual(const ChannelSet& ch) {
    ChannelSet dual(ch.N(), ch.M());
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j)
            dual.H(j, i) = ch.H(i, j).adjoint();
    return dual;
}

std::string channels_to_json(const ChannelSet& ch) {
    json root;
    root["M"] = ch.M();
    root["N"] = ch.N();
    root["K"] = 3;
    json h;
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j)
            h[key_of(i, j)] = detail::matrix_to_json(ch.H(i, j));
    root["H"] = std::move(h);
    return root.dump();
}

ChannelSet channels_from_json(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("channel file: invalid JSON: ") + e.what());
    }
    for (const char* key : {"M", "N", "K", "H"})
        if (!root.contains(key))
            throw std::runtime_error(std::string("channel file: missing key \"") + key + "\"");
    if (!root["M"].is_number_integer() || !root["N"].is_number_integer())
        throw std::runtime_error("channel file: \"M\" and \"N\" must be integers");
    if (root["K"].get<int>() != 3)
        throw std::runtime_error("channel file: key \"K\" must be 3");
    const int M = root["M"].get<int>();
    const int N = root["N"].get<int>();
    if (M < 1 || N < 1) throw std::runtime_error("channel file: M and N must be >= 1");

    ChannelSet ch(M, N);
    const json& h = root["H"];
    for (int i = 1; i <= 3; ++i) {
        for (int j = 1; j <= 3; ++j) {
            const std::string key = key_of(i, j);
            if (!h.contains(key))
                throw std::runtime_error("channel file: missing key \"" + key + "\"");
            try {
                ch.H(i, j) = detail::matrix_from_json(h[key], N, M, key);
            } catch (const std::runtime_error& e) {
                throw std::runtime_error(std::string("channel file: ") + e.what());
            }
        }
    }
    return ch;
}

void write_channels(const ChannelSet& ch, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << channels_to_json(ch) << '\n';
}

ChannelSet read_channels(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return channels_from_json(buf.str());
}

} // namespace ia
