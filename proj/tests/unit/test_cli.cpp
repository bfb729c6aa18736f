#include "compound/cli.hpp"
#include "compound/exterior.hpp"
#include "compound/matrix_io.hpp"
#include "compound/testkit.hpp"

#include "support.hpp"

#include <json.hpp>

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace compound {
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("compound-cli-" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

void write_text(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

const std::string fixtures = COMPOUND_FIXTURE_DIR;

} // namespace

TEST_CASE("parse csv and json") {
    Matrix want(2, 2);
    want << 1, 2, 3, 4;
    CHECK(io::parse_csv("1,2\n3,4") == want);
    CHECK(io::parse_csv(" 1 , 2\r\n\n3,4\n") == want);
    CHECK(io::parse_json(R"({"rows":2,"cols":2,"data":[1,2,3,4]})") == want);
    CHECK(io::parse_csv("-1.5e3,+2") == (Matrix(1, 2) << -1500, 2).finished());

    auto message = [](auto&& f) {
        try {
            f();
        } catch (const Error& e) {
            CHECK(e.tag() == ErrorTag::io_error);
            return std::string(e.what());
        }
        FAIL("no error");
        return std::string();
    };
    CHECK(message([] { io::parse_csv("1,2\n3"); }).find("line 2") != std::string::npos);
    CHECK(message([] { io::parse_csv("1,2\n3,x"); }).find("line 2, column 2") != std::string::npos);
    CHECK(message([] { io::parse_csv("1,nan"); }).find("column 2") != std::string::npos);
    CHECK(message([] { io::parse_csv("1,inf"); }).find("column 2") != std::string::npos);
    CHECK(message([] { io::parse_csv("1,,2"); }).find("column 2") != std::string::npos);
    message([] { io::parse_csv(""); });
    message([] { io::parse_json(R"({"rows":2,"cols":2,"data":[1,2,3]})"); });
    message([] { io::parse_json(R"({"rows":1,"cols":1,"data":["a"]})"); });
    message([] { io::parse_json("{"); });
    message([] { io::parse_matrix("/nonexistent/file.csv"); });
}

TEST_CASE("serialization round trip is bit exact") {
    TempDir tmp;
    std::mt19937_64 rng(1);
    const Matrix x = support::gaussian(5, 7, rng) * 1e-3;
    CHECK(io::parse_csv(io::to_csv(x)) == x);
    CHECK(io::parse_json(io::to_json(x)) == x);
    io::write_matrix(tmp.file("x.csv"), x);
    io::write_matrix(tmp.file("x.json"), x);
    CHECK(io::parse_matrix(tmp.file("x.csv")) == x);
    CHECK(io::parse_matrix(tmp.file("x.json")) == x);
    CHECK(read_text(tmp.file("x.json")).front() == '{');
}

TEST_CASE("exit code contract") {
    using T = ErrorTag;
    CHECK(cli::exit_code(T::not_compound_decomposable) == 1);
    CHECK(cli::exit_code(T::verification_failed) == 1);
    CHECK(cli::exit_code(T::inconsistent_compound_values) == 1);
    CHECK(cli::exit_code(T::singular_input) == 1);
    CHECK(cli::exit_code(T::preprocessing_failed) == 2);
    CHECK(cli::exit_code(T::decomposition_failed) == 2);
    CHECK(cli::exit_code(T::ordering_failed) == 2);
    CHECK(cli::exit_code(T::alignment_failed) == 2);
    CHECK(cli::exit_code(T::sign_failed) == 2);
    CHECK(cli::exit_code(T::rank_deficient_system) == 2);
    CHECK(cli::exit_code(T::invalid_argument) == 3);
    CHECK(cli::exit_code(T::degenerate_input) == 3);
    CHECK(cli::exit_code(T::unsupported) == 3);
    CHECK(cli::exit_code(T::io_error) == 3);
}

TEST_CASE("cli compound") {
    TempDir tmp;
    io::write_matrix(tmp.file("i4.csv"), Matrix::Identity(4, 4));
    const auto r = run({"compound", "--in", tmp.file("i4.csv"), "--k", "2"});
    CHECK(r.code == 0);
    CHECK(io::parse_csv(r.out) == Matrix::Identity(6, 6));
    CHECK(run({"compound", "--in", tmp.file("i4.csv"), "--k", "2", "--out", tmp.file("c.json")}).code == 0);
    CHECK(io::parse_matrix(tmp.file("c.json")) == Matrix::Identity(6, 6));

    const auto bad = run({"compound", "--in", tmp.file("i4.csv"), "--k", "5"});
    CHECK(bad.code == 3);
    CHECK(bad.err.rfind("error: invalid-argument:", 0) == 0);
}

TEST_CASE("cli inverse and verify") {
    TempDir tmp;
    const auto r = run({"inverse", "--in", fixtures + "/example3_M.csv", "--n", "4", "--m", "4", "--k", "2", "--out",
                        tmp.file("a.csv"), "--json-report", tmp.file("r.json")});
    REQUIRE(r.code == 0);
    const Matrix a = io::parse_matrix(tmp.file("a.csv"));
    const Matrix want = io::parse_matrix(fixtures + "/example3_A.csv");
    CHECK(testkit::signed_relative_error(a, want) < 1e-12);

    const auto rep = nlohmann::json::parse(read_text(tmp.file("r.json")));
    CHECK(rep["outcome"] == "unique");
    CHECK(rep["sign_ambiguous"] == true);
    CHECK(rep["inferred_r"] == 3);
    CHECK(rep["resamples"] == 0);
    CHECK(rep["residual"].get<double>() <= 1e-8);
    CHECK(rep["timings_ms"].is_object());
    CHECK(rep["timings_ms"].contains("wedge_decompose"));

    const auto v = run({"verify", "--a", tmp.file("a.csv"), "--m", fixtures + "/example3_M.csv", "--k", "2"});
    CHECK(v.code == 0);
    CHECK(v.out.rfind("residual ", 0) == 0);

    io::write_matrix(tmp.file("a2.csv"), 2.0 * want);
    CHECK(run({"verify", "--a", tmp.file("a2.csv"), "--m", fixtures + "/example3_M.csv", "--k", "2"}).code == 1);
}

TEST_CASE("cli inverse families and failures") {
    TempDir tmp;
    const auto f = run({"inverse", "--in", fixtures + "/rank2_C2.csv", "--n", "3", "--m", "3", "--k", "2", "--out",
                        tmp.file("fam.csv"), "--json-report", tmp.file("r.json")});
    REQUIRE(f.code == 0);
    const Matrix u = io::parse_matrix(tmp.file("fam.U.csv"));
    const Matrix s = io::parse_matrix(tmp.file("fam.S.csv"));
    const Matrix v = io::parse_matrix(tmp.file("fam.V.csv"));
    CHECK(support::rel(compound(Matrix(u * s * v.transpose()), 2), io::parse_matrix(fixtures + "/rank2_C2.csv")) < 1e-12);
    const auto rep = nlohmann::json::parse(read_text(tmp.file("r.json")));
    CHECK(rep["outcome"] == "rank_one_family");
    CHECK(rep["family"].is_string());

    io::write_matrix(tmp.file("zero.csv"), Matrix::Zero(6, 6));
    const auto z = run({"inverse", "--in", tmp.file("zero.csv"), "--n", "4", "--m", "4", "--k", "2", "--json-report",
                        tmp.file("z.json")});
    CHECK(z.code == 0);
    CHECK(nlohmann::json::parse(read_text(tmp.file("z.json")))["outcome"] == "rank_deficient");

    std::mt19937_64 rng(3);
    io::write_matrix(tmp.file("r2.csv"), Matrix(support::gaussian(6, 2, rng) * support::gaussian(2, 6, rng)));
    const auto nd = run({"inverse", "--in", tmp.file("r2.csv"), "--n", "4", "--m", "4", "--k", "2"});
    CHECK(nd.code == 1);
    CHECK(nd.err.rfind("error: not-compound-decomposable:", 0) == 0);

    io::write_matrix(tmp.file("g.csv"), support::gaussian(6, 6, rng));
    const auto g = run({"inverse", "--in", tmp.file("g.csv"), "--n", "4", "--m", "4", "--k", "2"});
    CHECK((g.code == 1 || g.code == 2));

    CHECK(run({"inverse", "--in", tmp.file("missing.csv"), "--n", "4", "--m", "4", "--k", "2"}).code == 3);
    CHECK(run({"inverse", "--in", tmp.file("g.csv"), "--n", "4", "--k", "2"}).code == 3);
    CHECK(run({"inverse", "--in", tmp.file("g.csv"), "--n", "x", "--m", "4", "--k", "2"}).code == 3);
    CHECK(run({}).code == 3);
    CHECK(run({"nonsense"}).code == 3);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("cli seed determinism") {
    TempDir tmp;
    io::write_matrix(tmp.file("i6.csv"), Matrix::Identity(6, 6));
    auto once = [&](const std::string& seed) {
        return run({"inverse", "--in", tmp.file("i6.csv"), "--n", "4", "--m", "4", "--k", "2", "--seed", seed}).out;
    };
    CHECK(once("42") == once("42"));
    CHECK(once("42") != once("43"));

    ::setenv("COMPOUND_KIT_SEED", "42", 1);
    CHECK(run({"inverse", "--in", tmp.file("i6.csv"), "--n", "4", "--m", "4", "--k", "2"}).out == once("42"));
    ::setenv("COMPOUND_KIT_SEED", "bogus", 1);
    CHECK(run({"inverse", "--in", tmp.file("i6.csv"), "--n", "4", "--m", "4", "--k", "2"}).code == 3);
    ::unsetenv("COMPOUND_KIT_SEED");
}

TEST_CASE("cli adjugate, fixtures, bench") {
    TempDir tmp;
    const Matrix a = io::parse_matrix(fixtures + "/example3_A.csv");
    const auto c = run({"adjugate", "--in", fixtures + "/example3_A.csv"});
    const auto v = run({"adjugate", "--in", fixtures + "/example3_A.csv", "--via-compound"});
    CHECK(c.code == 0);
    CHECK(v.code == 0);
    CHECK(support::rel(io::parse_csv(c.out), adjugate(a)) < 1e-14);
    CHECK(support::rel(io::parse_csv(v.out), adjugate(a)) < 1e-12);
    CHECK(run({"adjugate", "--in", fixtures + "/rank2_C2.csv", "--out", tmp.file("x.csv")}).code == 0);
    CHECK(run({"adjugate", "--in", fixtures + "/log_y.csv"}).code == 3);

    const auto f = run({"fixtures", "--export", tmp.file("fx")});
    CHECK(f.code == 0);
    CHECK(f.out.find("FAIL") == std::string::npos);
    CHECK(io::parse_matrix(tmp.file("fx/example3_M.csv")) == io::parse_matrix(fixtures + "/example3_M.csv"));

    const auto b = run({"bench", "--max-n", "6", "--k", "2", "--reps", "1", "--csv", tmp.file("b.csv")});
    CHECK(b.code == 0);
    CHECK(read_text(tmp.file("b.csv")).rfind("n,k,rep,stage,ms\n", 0) == 0);
    CHECK(run({"bench", "--max-n", "2", "--k", "2", "--reps", "1"}).code == 3);

    const auto samples = cli::bench(4, 6, 2, 1, 5);
    CHECK(std::count_if(samples.begin(), samples.end(), [](const auto& s) { return s.stage == "total"; }) == 2);
}
} // namespace compound
