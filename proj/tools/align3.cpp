// Command-line front end: feasibility verdicts, channel generation, explicit
// constructions, verification, converse certificates, region sweeps and the
// exact rank self-test. Exit codes: 0 success / feasible / pass, 1 negative
// outcome (infeasible, failed verification, degenerate channels), 2 usage or
// file errors.

#include "ia/alignment.hpp"
#include "ia/channel.hpp"
#include "ia/constructor.hpp"
#include "ia/feasibility.hpp"
#include "ia/verifier.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

struct Options {
    int M = 0, N = 0, d = 0;
    std::uint64_t seed = 1;
    int m_max = 12, n_max = 12, r_max = 6, seeds = 3;
    std::string channels_path, solution_path, out_path;
    std::string format = "csv";
    double tol = 1e-8;
    bool as_json = false;
    std::vector<int> selection;
};

ia::ToleranceConfig tolerances(const Options& opt) {
    ia::ToleranceConfig tol;
    tol.residual_tol = opt.tol;
    tol.validate();
    return tol;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << text;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

json certificate_json(const ia::ConverseCertificate& cert) {
    return json{{"r", cert.r},
                {"rank_Ar", cert.rank_Ar},
                {"full_rank", cert.full_rank},
                {"lhs", cert.lhs},
                {"rhs", cert.rhs},
                {"sigma_ratio", cert.sigma_ratio}};
}

std::string certificate_text(const ia::ConverseCertificate& cert) {
    std::ostringstream out;
    out << "certificate: r=" << cert.r << " rank(A_r)=" << cert.rank_Ar << "/"
        << cert.full_rank << " inequality (2r+1)d=" << cert.lhs << " > " << cert.rhs
        << "=max(rN,(r+1)M)";
    return out.str();
}

int run_feas(const Options& opt) {
    const ia::FeasibilityVerdict verdict = ia::is_feasible(opt.M, opt.N, opt.d);
    if (opt.as_json) {
        json root{{"M", opt.M}, {"N", opt.N}, {"d", opt.d}, {"feasible", verdict.feasible}};
        if (verdict.violated_r) root["violated_r"] = *verdict.violated_r;
        root["binding_r"] = verdict.binding_r;
        std::cout << root.dump() << '\n';
    } else if (verdict.feasible) {
        std::cout << "feasible";
        if (!verdict.binding_r.empty()) {
            std::cout << " (binding r:";
            for (int r : verdict.binding_r) std::cout << ' ' << r;
            std::cout << ")";
        }
        std::cout << '\n';
    } else {
        std::cout << "infeasible (r=" << *verdict.violated_r << ")\n";
    }
    return verdict.feasible ? 0 : 1;
}

int run_gen(const Options& opt) {
    const ia::ChannelSet ch = ia::generate_channels(opt.M, opt.N, opt.seed);
    write_text(opt.out_path, ia::channels_to_json(ch) + "\n");
    return 0;
}

int run_construct(const Options& opt) {
    const ia::ToleranceConfig tol = tolerances(opt);
    std::optional<ia::ChannelSet> ch;
    std::optional<std::uint64_t> embedded_seed;
    if (!opt.channels_path.empty()) {
        ch = ia::read_channels(opt.channels_path);
    } else {
        ch = ia::generate_channels(opt.M, opt.N, opt.seed);
        embedded_seed = opt.seed;
    }

    ia::AlignmentSolution sol;
    if (!opt.selection.empty()) {
        sol = ia::construct_eigen(*ch, opt.d, opt.selection, tol);
        const ia::VerifyReport report = ia::verify(*ch, sol, opt.d, tol);
        if (!report.pass) throw ia::degeneracy_error("constructed solution failed verification");
    } else {
        sol = ia::construct(*ch, opt.d, tol);
    }
    sol.seed = embedded_seed;

    std::cout << "variant=" << ia::to_string(sol.variant);
    if (sol.r >= 0) std::cout << " r=" << sol.r;
    std::cout << '\n';
    if (!opt.out_path.empty()) ia::write_solution(sol, opt.out_path);
    return 0;
}

int run_verify(const Options& opt) {
    const ia::ToleranceConfig tol = tolerances(opt);
    const std::string text = slurp(opt.solution_path);
    const ia::AlignmentSolution sol = ia::solution_from_json(text);
    const json meta = json::parse(text);

    int d = opt.d > 0 ? opt.d : meta["d"].get<int>();
    std::optional<ia::ChannelSet> ch;
    if (!opt.channels_path.empty()) {
        ch = ia::read_channels(opt.channels_path);
    } else if (sol.seed) {
        ch = ia::generate_channels(meta["M"].get<int>(), meta["N"].get<int>(), *sol.seed);
    } else {
        throw std::runtime_error("no --channels given and the solution embeds no seed");
    }

    const ia::VerifyReport report = ia::verify(*ch, sol, d, tol);
    std::cout << report.to_json() << '\n';
    return report.pass ? 0 : 1;
}

int run_certify(const Options& opt) {
    const ia::ToleranceConfig tol = tolerances(opt);
    ia::ChannelSet ch = opt.channels_path.empty()
                            ? ia::generate_channels(opt.M, opt.N, opt.seed)
                            : ia::read_channels(opt.channels_path);
    if (ch.M() > ch.N()) ch = ia::transpose_dual(ch);
    const auto cert = ia::converse_certificate(ch, opt.d, tol);
    if (!cert) {
        if (opt.as_json)
            std::cout << json{{"feasible", true}}.dump() << '\n';
        else
            std::cout << "feasible; no converse certificate exists\n";
        return 1;
    }
    if (opt.as_json)
        std::cout << certificate_json(*cert).dump() << '\n';
    else
        std::cout << certificate_text(*cert) << '\n';
    return 0;
}

int run_region(const Options& opt) {
    const auto cells = ia::region_sweep(opt.d, opt.m_max, opt.n_max);
    write_text(opt.out_path, opt.format == "csv" ? ia::region_to_csv(cells, opt.d)
                                                 : ia::region_to_svg(cells, opt.d));
    return 0;
}

int run_selftest(const Options& opt) {
    const ia::ToleranceConfig tol = tolerances(opt);
    int skipped = 0;
    bool all_ok = true;
    std::cout << "  M   N  r<=  exact  numeric\n";
    for (int M = 1; M <= opt.m_max; ++M) {
        for (int N = 1; N <= opt.n_max; ++N) {
            if (M > N) {
                ++skipped;
                continue;
            }
            bool exact_ok = true, numeric_ok = true;
            for (int r = 0; r <= opt.r_max && exact_ok; ++r)
                exact_ok = ia::exact_rank_specialized(M, N, r);
            for (int s = 1; s <= opt.seeds && numeric_ok; ++s) {
                const ia::ChannelSet ch =
                    ia::generate_channels(M, N, static_cast<std::uint64_t>(s));
                for (int r = 0; r <= opt.r_max && numeric_ok; ++r) {
                    const ia::AlignmentMatrix a = ia::build_alignment_matrix(ch, r, 1);
                    const Eigen::Index want =
                        std::min<Eigen::Index>(static_cast<Eigen::Index>(r) * N,
                                               static_cast<Eigen::Index>(r + 1) * M);
                    numeric_ok = ia::rank(a.matrix, tol) == want;
                    if (numeric_ok) {
                        const Eigen::Index kernel_want = std::max<Eigen::Index>(
                            0, static_cast<Eigen::Index>(r + 1) * M -
                                   static_cast<Eigen::Index>(r) * N);
                        numeric_ok = ia::kernel_basis(a.matrix, tol).dim() == kernel_want;
                    }
                }
            }
            std::printf("%3d %3d  %3d  %5s  %7s\n", M, N, opt.r_max,
                        exact_ok ? "ok" : "FAIL", numeric_ok ? "ok" : "FAIL");
            if (!exact_ok || !numeric_ok) {
                all_ok = false;
                std::printf("    -> failure at (M=%d, N=%d)\n", M, N);
            }
        }
    }
    if (skipped > 0)
        std::cout << "skipped " << skipped << " pairs with M > N (full rank is stated for N >= M)\n";
    std::cout << (all_ok ? "selftest: all checks passed\n" : "selftest: FAILURES above\n");
    return all_ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"3-user MxN MIMO interference alignment: feasibility, constructions, "
                 "certificates"};
    app.require_subcommand(1);
    Options opt;

    const auto tol_check = CLI::Range(1e-300, 1e-3).description("in (0, 1e-3)");

    CLI::App* feas = app.add_subcommand("feas", "closed-form feasibility verdict");
    feas->add_option("--M", opt.M, "transmit antennas")->required()->check(CLI::PositiveNumber);
    feas->add_option("--N", opt.N, "receive antennas")->required()->check(CLI::PositiveNumber);
    feas->add_option("--d", opt.d, "streams per user")->required()->check(CLI::PositiveNumber);
    feas->add_flag("--json", opt.as_json, "emit JSON verdict");

    CLI::App* gen = app.add_subcommand("gen", "generate a random channel file");
    gen->add_option("--M", opt.M)->required()->check(CLI::PositiveNumber);
    gen->add_option("--N", opt.N)->required()->check(CLI::PositiveNumber);
    gen->add_option("--seed", opt.seed, "RNG seed");
    gen->add_option("--out", opt.out_path, "output path (stdout if omitted)");

    CLI::App* construct = app.add_subcommand("construct", "build an explicit aligned solution");
    construct->add_option("--M", opt.M)->check(CLI::PositiveNumber);
    construct->add_option("--N", opt.N)->check(CLI::PositiveNumber);
    construct->add_option("--d", opt.d)->required()->check(CLI::PositiveNumber);
    construct->add_option("--seed", opt.seed, "RNG seed (used when --channels is absent)");
    construct->add_option("--channels", opt.channels_path, "channel file to load");
    construct->add_option("--select", opt.selection,
                          "eigen variant: 1-based eigenvector indices (comma separated)")
        ->delimiter(',');
    construct->add_option("--out", opt.out_path, "solution file to write");
    construct->add_option("--tol", opt.tol, "residual tolerance")->check(tol_check);

    CLI::App* verify = app.add_subcommand("verify", "verify a solution file");
    verify->add_option("--channels", opt.channels_path,
                       "channel file (regenerated from the embedded seed if omitted)");
    verify->add_option("--solution", opt.solution_path)->required();
    verify->add_option("--d", opt.d, "expected streams (defaults to the solution's d)")
        ->check(CLI::PositiveNumber);
    verify->add_option("--tol", opt.tol, "residual tolerance")->check(tol_check);

    CLI::App* certify = app.add_subcommand("certify", "emit a converse rank certificate");
    certify->add_option("--M", opt.M)->check(CLI::PositiveNumber);
    certify->add_option("--N", opt.N)->check(CLI::PositiveNumber);
    certify->add_option("--d", opt.d)->required()->check(CLI::PositiveNumber);
    certify->add_option("--seed", opt.seed, "RNG seed (used when --channels is absent)");
    certify->add_option("--channels", opt.channels_path, "channel file to load");
    certify->add_option("--tol", opt.tol, "residual tolerance")->check(tol_check);
    certify->add_flag("--json", opt.as_json, "emit JSON certificate");

    CLI::App* region = app.add_subcommand("region", "sweep the (M, N) plane for fixed d");
    region->add_option("--d", opt.d)->required()->check(CLI::PositiveNumber);
    region->add_option("--m-max", opt.m_max)->required()->check(CLI::PositiveNumber);
    region->add_option("--n-max", opt.n_max)->required()->check(CLI::PositiveNumber);
    region->add_option("--format", opt.format)->check(CLI::IsMember({"csv", "svg"}));
    region->add_option("--out", opt.out_path, "output path (stdout if omitted)");

    CLI::App* selftest = app.add_subcommand("selftest", "exact and numeric full-rank checks");
    selftest->add_option("--m-max", opt.m_max)->check(CLI::PositiveNumber);
    selftest->add_option("--n-max", opt.n_max)->check(CLI::PositiveNumber);
    selftest->add_option("--r-max", opt.r_max)->check(CLI::NonNegativeNumber);
    selftest->add_option("--seeds", opt.seeds)->check(CLI::PositiveNumber);
    selftest->add_option("--tol", opt.tol, "rank tolerance")->check(tol_check);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    }

    try {
        if (feas->parsed()) return run_feas(opt);
        if (gen->parsed()) return run_gen(opt);
        if (construct->parsed()) {
            if (opt.channels_path.empty() && (opt.M < 1 || opt.N < 1))
                throw std::invalid_argument("construct needs --M and --N (or --channels)");
            return run_construct(opt);
        }
        if (verify->parsed()) return run_verify(opt);
        if (certify->parsed()) {
            if (opt.channels_path.empty() && (opt.M < 1 || opt.N < 1))
                throw std::invalid_argument("certify needs --M and --N (or --channels)");
            return run_certify(opt);
        }
        if (region->parsed()) return run_region(opt);
        if (selftest->parsed()) return run_selftest(opt);
    } catch (const ia::infeasible_error& e) {
        std::cerr << e.what() << '\n' << certificate_text(e.certificate) << '\n';
        return 1;
    } catch (const ia::degeneracy_error& e) {
        std::cerr << "degenerate channels: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return 2;
    }
    return 2;
}
