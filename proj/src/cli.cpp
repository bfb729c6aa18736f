#include "compound/cli.hpp"

#include "compound/exterior.hpp"
#include "compound/matrix_io.hpp"
#include "compound/recovery.hpp"
#include "compound/testkit.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>

namespace compound::cli {

int exit_code(ErrorTag tag) noexcept {
    switch (tag) {
    case ErrorTag::not_compound_decomposable:
    case ErrorTag::verification_failed:
    case ErrorTag::inconsistent_compound_values:
    case ErrorTag::singular_input:
        return 1;
    case ErrorTag::preprocessing_failed:
    case ErrorTag::decomposition_failed:
    case ErrorTag::ordering_failed:
    case ErrorTag::alignment_failed:
    case ErrorTag::sign_failed:
    case ErrorTag::rank_deficient_system:
        return 2;
    case ErrorTag::invalid_argument:
    case ErrorTag::degenerate_input:
    case ErrorTag::unsupported:
    case ErrorTag::io_error:
        return 3;
    }
    return 3;
}

namespace {

std::uint64_t default_seed() {
    if (const char* env = std::getenv("COMPOUND_KIT_SEED"); env != nullptr && *env != '\0') {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            fail(ErrorTag::invalid_argument, "COMPOUND_KIT_SEED is not an unsigned integer");
        }
    }
    return TolerancePolicy{}.rng_seed;
}

void emit_matrix(const std::optional<std::string>& path, const Matrix& x, std::ostream& out) {
    if (path) {
        io::write_matrix(*path, x);
    } else {
        out << io::to_csv(x);
    }
}

// "fam.csv" -> "fam.U.csv"; "fam" -> "fam.U"
std::string factor_path(const std::string& base, const std::string& tag) {
    const std::filesystem::path p(base);
    if (p.has_extension()) {
        std::filesystem::path q = p;
        q.replace_extension("." + tag + p.extension().string());
        return q.string();
    }
    return base + "." + tag;
}

nlohmann::json report_json(const RecoveryResult& res, std::uint64_t seed) {
    nlohmann::json j;
    j["outcome"] = outcome_tag(res.outcome);
    const auto* unique = std::get_if<UniqueUpToSign>(&res.outcome);
    j["sign_ambiguous"] = unique != nullptr && unique->sign_ambiguous;
    j["residual"] = res.report.reconstruction_residual;
    j["inferred_r"] = res.report.inferred_r;
    j["resamples"] = res.report.resample_count;
    j["preprocessing_used"] = res.report.preprocessing_used;
    j["singular_value_residual"] = res.report.singular_value_residual;
    j["sign_fallback_used"] = res.report.sign_fallback_used;
    j["seed"] = seed;
    switch (res.outcome.index()) {
    case 1: j["family"] = "U*S*T*V^T with det(T)=1"; break;
    case 2: j["family"] = "all B with rank(B) < k"; break;
    default: j["family"] = nullptr; break;
    }
    nlohmann::json timings = nlohmann::json::object();
    for (const auto& [stage, ms] : res.report.stage_timings_ms) timings[stage] = ms;
    j["timings_ms"] = timings;
    return j;
}

int cmd_inverse(const std::string& in, int n, int m, int k, std::uint64_t seed, bool canonical,
                const std::optional<std::string>& out_path, const std::optional<std::string>& report_path,
                std::ostream& out) {
    const Matrix mat = io::parse_matrix(in);
    TolerancePolicy policy;
    policy.rng_seed = seed;
    policy.canonical_sign = canonical;
    const RecoveryResult res = inverse_compound(mat, n, m, k, policy);

    if (const auto* u = std::get_if<UniqueUpToSign>(&res.outcome)) {
        emit_matrix(out_path, u->a, out);
    } else if (const auto* fam = std::get_if<RankOneFamily>(&res.outcome)) {
        if (out_path) {
            io::write_matrix(factor_path(*out_path, "U"), fam->u);
            io::write_matrix(factor_path(*out_path, "S"), fam->sigma);
            io::write_matrix(factor_path(*out_path, "V"), fam->v);
        } else {
            out << "# U\n" << io::to_csv(fam->u) << "# S\n" << io::to_csv(fam->sigma) << "# V\n" << io::to_csv(fam->v);
        }
    } else {
        emit_matrix(out_path, Matrix::Zero(n, m), out);
    }

    if (report_path) {
        std::ofstream rep(*report_path);
        require(static_cast<bool>(rep), ErrorTag::io_error, "cannot write '" + *report_path + "'");
        rep << report_json(res, seed).dump(2) << '\n';
    }
    return 0;
}

int cmd_fixtures(const std::optional<std::string>& export_dir, std::ostream& out) {
    if (export_dir) {
        std::filesystem::create_directories(*export_dir);
        for (const auto& f : testkit::worked_examples()) {
            for (const auto& [name, mat] : f.matrices) {
                const std::string stem = f.name.substr(0, f.name.find('_'));
                io::write_matrix((std::filesystem::path(*export_dir) / (stem + "_" + name + ".csv")).string(), mat);
            }
        }
    }
    const auto checks = testkit::run_fixture_checks();
    std::size_t width = 0;
    for (const auto& c : checks) width = std::max(width, c.fixture.size() + c.check.size() + 3);
    int failed = 0;
    for (const auto& c : checks) {
        out << (c.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(static_cast<int>(width))
            << (c.fixture + " : " + c.check) << "  " << c.detail << '\n';
        failed += c.passed ? 0 : 1;
    }
    out << checks.size() - static_cast<std::size_t>(failed) << "/" << checks.size() << " fixture checks passed\n";
    return failed == 0 ? 0 : 1;
}

int cmd_bench(int min_n, int max_n, int k, int reps, std::uint64_t seed, const std::optional<std::string>& csv,
              std::ostream& out) {
    const auto samples = bench(min_n, max_n, k, reps, seed);
    out << std::setw(4) << "n" << std::setw(4) << "k" << std::setw(14) << "median_ms\n";
    for (int n = min_n; n <= max_n; n += 2) {
        std::vector<double> totals;
        for (const auto& s : samples)
            if (s.n == n && s.stage == "total") totals.push_back(s.ms);
        if (totals.empty()) continue;
        std::sort(totals.begin(), totals.end());
        out << std::setw(4) << n << std::setw(4) << k << std::setw(13) << std::fixed << std::setprecision(3)
            << totals[totals.size() / 2] << '\n';
    }
    if (csv) {
        std::ofstream f(*csv);
        require(static_cast<bool>(f), ErrorTag::io_error, "cannot write '" + *csv + "'");
        f << "n,k,rep,stage,ms\n";
        for (const auto& s : samples) f << s.n << ',' << s.k << ',' << s.rep << ',' << s.stage << ',' << s.ms << '\n';
    }
    return 0;
}

} // namespace

std::vector<BenchSample> bench(int min_n, int max_n, int k, int reps, std::uint64_t seed) {
    require(k >= 1 && min_n > k && max_n >= min_n && reps >= 1, ErrorTag::invalid_argument,
            "bench: requires k >= 1, min_n > k, max_n >= min_n and reps >= 1");
    std::vector<BenchSample> samples;
    TolerancePolicy policy;
    policy.rng_seed = seed;
    for (int n = min_n; n <= max_n; n += 2) {
        for (int rep = 0; rep < reps; ++rep) {
            const Matrix a = testkit::random_rank_r(n, n, n, seed + static_cast<std::uint64_t>(1000 * n + rep));
            const Matrix mat = compound(a, k);
            const auto t0 = std::chrono::steady_clock::now();
            const auto res = inverse_compound(mat, n, n, k, policy);
            const double total = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
            samples.push_back({n, k, rep, "total", total});
            for (const auto& [stage, ms] : res.report.stage_timings_ms) samples.push_back({n, k, rep, stage, ms});
        }
    }
    return samples;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"compound-kit: multiplicative compound matrices and their inverses", "compound-kit"};
    app.require_subcommand(1);

    std::string in, a_path, m_path;
    std::optional<std::string> out_path, report_path, csv_path, export_dir;
    int n = 0, m = 0, k = 0, max_n = 12, min_n = 0, reps = 3;
    std::optional<std::uint64_t> seed;
    bool canonical = false, via_compound = false;

    auto* compound_cmd = app.add_subcommand("compound", "write C_k(X)");
    compound_cmd->add_option("--in", in, "input matrix (CSV or JSON)")->required();
    compound_cmd->add_option("--k", k, "compound order")->required();
    compound_cmd->add_option("--out", out_path, "output file (default: stdout)");

    auto* inverse_cmd = app.add_subcommand("inverse", "recover A with C_k(A) = M");
    inverse_cmd->add_option("--in", in, "compound matrix M")->required();
    inverse_cmd->add_option("--n", n, "rows of A")->required();
    inverse_cmd->add_option("--m", m, "columns of A")->required();
    inverse_cmd->add_option("--k", k, "compound order")->required();
    inverse_cmd->add_option("--seed", seed, "preprocessing seed (default: $COMPOUND_KIT_SEED)");
    inverse_cmd->add_flag("--canonical-sign", canonical, "make the first non-negligible entry positive (even k)");
    inverse_cmd->add_option("--out", out_path, "output file; families write .U/.S/.V factor files");
    inverse_cmd->add_option("--json-report", report_path, "write the recovery report as JSON");

    auto* verify_cmd = app.add_subcommand("verify", "relative residual ||C_k(A) - M|| / ||M||");
    verify_cmd->add_option("--a", a_path, "candidate A")->required();
    verify_cmd->add_option("--m", m_path, "compound matrix M")->required();
    verify_cmd->add_option("--k", k, "compound order")->required();

    auto* adj_cmd = app.add_subcommand("adjugate", "adjugate of a square matrix");
    adj_cmd->add_option("--in", in, "square matrix")->required();
    adj_cmd->add_flag("--via-compound", via_compound, "use S P C_{n-1}(A)^T P S");
    adj_cmd->add_option("--out", out_path, "output file (default: stdout)");

    auto* fixtures_cmd = app.add_subcommand("fixtures", "check the worked examples");
    fixtures_cmd->add_option("--export", export_dir, "also write every fixture matrix as CSV into this directory");

    auto* bench_cmd = app.add_subcommand("bench", "stage timings of the recovery pipeline");
    bench_cmd->add_option("--max-n", max_n, "largest n")->required();
    bench_cmd->add_option("--min-n", min_n, "smallest n (default 2k+2)");
    bench_cmd->add_option("--k", k, "compound order")->required();
    bench_cmd->add_option("--reps", reps, "repetitions per size")->required();
    bench_cmd->add_option("--seed", seed, "matrix seed");
    bench_cmd->add_option("--csv", csv_path, "write per-stage samples as CSV");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 3;
    }

    try {
        if (compound_cmd->parsed()) {
            emit_matrix(out_path, compound(io::parse_matrix(in), k), out);
            return 0;
        }
        if (inverse_cmd->parsed())
            return cmd_inverse(in, n, m, k, seed.value_or(default_seed()), canonical, out_path, report_path, out);
        if (verify_cmd->parsed()) {
            const double residual = compound_residual(io::parse_matrix(a_path), io::parse_matrix(m_path), k);
            out << "residual " << std::setprecision(17) << residual << '\n';
            return residual <= TolerancePolicy{}.residual_rtol ? 0 : 1;
        }
        if (adj_cmd->parsed()) {
            const Matrix x = io::parse_matrix(in);
            emit_matrix(out_path, via_compound ? adjugate_via_compound(x) : adjugate(x), out);
            return 0;
        }
        if (fixtures_cmd->parsed()) return cmd_fixtures(export_dir, out);
        if (bench_cmd->parsed())
            return cmd_bench(min_n > 0 ? min_n : 2 * k + 2, max_n, k, reps, seed.value_or(default_seed()), csv_path, out);
    } catch (const Error& e) {
        err << "error: " << to_string(e.tag()) << ": " << e.what() << '\n';
        return exit_code(e.tag());
    } catch (const std::exception& e) {
        err << "error: io-error: " << e.what() << '\n';
        return 3;
    }
    return 3;
}

} // namespace compound::cli
