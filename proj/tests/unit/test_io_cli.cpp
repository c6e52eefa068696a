#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "generators.hpp"
#include "palinverse/cli.hpp"
#include "palinverse/error.hpp"
#include "palinverse/io.hpp"

using namespace palinverse;

namespace {

const std::string kFixtures = PALINVERSE_FIXTURES;

std::string fixture(const std::string& name) { return kFixtures + "/" + name; }

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

io::Json error_of(const Run& r) {
    CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
    return io::Json::parse(r.err);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("palinverse_test_" + name)).string();
}

}  // namespace

TEST_CASE("complex literals") {
    CHECK(io::parse_complex("3") == Complex(3, 0));
    CHECK(io::parse_complex(" -2.5i ") == Complex(0, -2.5));
    CHECK(io::parse_complex("1e-3-4i") == Complex(1e-3, -4));
    CHECK(io::parse_complex("-1.5E+2+0.25j") == Complex(-150, 0.25));
    CHECK(io::parse_complex("i") == Complex(0, 1));
    CHECK(io::parse_complex("-i") == Complex(0, -1));
    CHECK(io::parse_complex("2+i") == Complex(2, 1));
    CHECK(io::parse_complex_list("4.2361,0.2361") == std::vector<Complex>{4.2361, 0.2361});
    CHECK_THROWS_AS(io::parse_complex("abc"), Error);
    CHECK_THROWS_AS(io::parse_complex(""), Error);
    CHECK_THROWS_AS(io::parse_complex("1+2"), Error);
}

TEST_CASE("complex formatting round trips bit-exactly") {
    std::mt19937_64 rng(81);
    std::normal_distribution<double> g;
    std::uniform_int_distribution<int> ex(-30, 30);
    for (int i = 0; i < 2000; ++i) {
        const Complex z(g(rng) * std::pow(10.0, ex(rng)), (i % 5 == 0 ? 0.0 : g(rng) * std::pow(10.0, ex(rng))));
        CHECK(io::parse_complex(io::format_complex(z)) == z);
        CHECK(std::stod(io::format_double(z.real())) == z.real());
    }
}

TEST_CASE("fixture files re-serialize byte for byte") {
    for (const auto& entry : std::filesystem::directory_iterator(kFixtures)) {
        if (entry.path().extension() != ".json") continue;
        const std::string text = slurp(entry.path().string());
        CHECK(io::to_text(io::parse_text(text)) == text);
    }
}

TEST_CASE("system files round trip") {
    std::mt19937_64 rng(82);
    for (auto cls : testgen::kClasses) {
        auto sys = testgen::random_system(cls, 4, rng);
        const std::string text = io::to_text(io::system_to_json(sys));
        PalindromicSystem back = io::system_from_json(io::parse_text(text));
        CHECK(back.a1() == sys.a1());
        CHECK(back.a0() == sys.a0());
        CHECK(back.cls() == sys.cls());
        CHECK(io::to_text(io::system_to_json(back)) == text);
    }
}

TEST_CASE("malformed files are parse errors") {
    const std::string bad = temp_path("bad.json");
    std::ofstream(bad) << "{\"format\": \"palinverse-v1\", \"A1\": [[1,";
    Run r = run({"eig", "--system", bad});
    CHECK(r.code == 2);
    CHECK(error_of(r)["error"] == "parse");

    std::ofstream(bad) << R"({"format":"palinverse-v1","class":{"star":"Q","epsilon":1},"A1":[[1]],"A0":[[0]]})";
    CHECK(error_of(run({"eig", "--system", bad}))["error"] == "parse");
}

TEST_CASE("solve reports residuals of the fixture pairs") {
    for (const char* code : {"tp", "ta", "hp", "ha"}) {
        CAPTURE(code);
        Run r = run({"solve", "--pairs", fixture(std::string("example1_") + code + "_pairs.json"), "--seed", "3",
                     "--json"});
        REQUIRE(r.code == 0);
        io::Json doc = io::Json::parse(r.out);
        CHECK(doc["report"]["k"] == 4);
        CHECK(doc["report"]["pair_residual_abs"].get<double>() <= 1e-12);
        CHECK(doc["report"]["symmetry_defect"].get<double>() <= 1e-12);
        PalindromicSystem sys = io::system_from_json(doc["system"]);
        CHECK(sys.n() == 4);
    }
}

TEST_CASE("solve writes the system file") {
    const std::string out = temp_path("solved.json");
    Run r = run({"solve", "--pairs", fixture("example1_ha_pairs.json"), "--out", out, "--report"});
    CHECK(r.code == 0);
    CHECK(r.out.find("pair_residual_rel: ") != std::string::npos);
    PalindromicSystem sys = io::system_from_json(io::read_file(out));
    CHECK(sys.cls() == SymmetryClass::from_code("ha"));
}

TEST_CASE("solve reports the parity obstruction") {
    const std::string pairs = temp_path("parity.json");
    Matrix x(2, 3), t = Matrix::Zero(3, 3);
    x << 1, 2, 0, 0, 1, 3;
    t(0, 0) = 2;
    t(1, 1) = 0.5;
    t(2, 2) = 1;
    io::write_file(pairs, io::pair_to_json(x, t));
    Run r = run({"solve", "--class", "tp", "--pairs", pairs});
    CHECK(r.code == 2);
    io::Json e = error_of(r);
    CHECK(e["error"] == "infeasible");
    CHECK(e["detail"].get<std::string>().rfind("parity", 0) == 0);

    CHECK(error_of(run({"solve", "--pairs", pairs}))["error"] == "usage");
}

TEST_CASE("update on the fixture systems") {
    Run r = run({"update", "--system", fixture("example2_ta_system.json"), "--replace", "4.2361,0.2361", "--with",
                 "4,0.25", "--json"});
    REQUIRE(r.code == 0);
    io::Json rep = io::Json::parse(r.out)["report"];
    CHECK(rep["new_pair_residual_rel"].get<double>() <= 1e-9);
    CHECK(rep["kept_pair_residual_rel"].get<double>() <= 1e-9);
    CHECK(rep["symmetry_defect"].get<double>() <= 1e-9);

    Run miss = run({"update", "--system", fixture("example2_ta_system.json"), "--replace", "9", "--with", "4"});
    CHECK(miss.code == 2);
    CHECK(error_of(miss)["error"] == "target not found");

    Run half = run({"update", "--system", fixture("example2_ta_system.json"), "--replace", "4.2361", "--with", "4"});
    CHECK(half.code == 2);
    CHECK(error_of(half)["error"] == "pairing not closed");
}

TEST_CASE("eig lists pairs") {
    Run r = run({"eig", "--system", fixture("example2_hp_system.json"), "--json"});
    REQUIRE(r.code == 0);
    io::Json e = io::Json::parse(r.out);
    std::vector<Complex> vals;
    for (const auto& z : e["eigenvalues"]) vals.push_back(io::complex_from_json(z));
    bool found = false;
    for (const auto& p : e["pairs"]) {
        const Complex a = vals[p[0].get<size_t>()], b = vals[p[1].get<size_t>()];
        if ((std::abs(a - Complex(0.8745, 0.6115)) < 1e-4 && std::abs(b - Complex(0.7680, 0.5371)) < 1e-4) ||
            (std::abs(b - Complex(0.8745, 0.6115)) < 1e-4 && std::abs(a - Complex(0.7680, 0.5371)) < 1e-4))
            found = true;
    }
    CHECK(found);

    Run s = run({"eig", "--system", fixture("scalar_ta_system.json"), "--json"});
    CHECK(s.code == 0);
    io::Json se = io::Json::parse(s.out);
    REQUIRE(se["eigenvalues"].size() == 2);
    Complex a = io::complex_from_json(se["eigenvalues"][0]), b = io::complex_from_json(se["eigenvalues"][1]);
    CHECK(std::abs(a * b + 1.0) < 1e-14);
    CHECK(std::abs(a + b) < 1e-14);
    CHECK(run({"eig", "--system", fixture("scalar_ta_system.json")}).out.rfind("self-paired", 0) == 0);
}

TEST_CASE("verify rejects a broken symmetry") {
    io::Json j = io::read_file(fixture("example2_tp_system.json"));
    j["A0"][0][1] = io::Json::array({7.0, 0.0});
    const std::string path = temp_path("broken.json");
    io::write_file(path, j);
    Run r = run({"verify", "--system", path});
    CHECK(r.code == 2);
    io::Json e = error_of(r);
    CHECK(e["error"] == "symmetry violation");
    CHECK(e["detail"] == "A0 symmetry violation");

    Run ok = run({"verify", "--system", fixture("example2_tp_system.json")});
    CHECK(ok.code == 0);
}

TEST_CASE("verify checks a pair against a system") {
    const std::string sys = temp_path("verify_sys.json");
    CHECK(run({"solve", "--pairs", fixture("example1_tp_pairs.json"), "--out", sys, "--report"}).code == 0);
    CHECK(run({"verify", "--system", sys, "--pairs", fixture("example1_tp_pairs.json")}).code == 0);
    Run wrong = run({"verify", "--system", sys, "--pairs", fixture("example1_hp_pairs.json")});
    CHECK(wrong.code == 2);
    CHECK(error_of(wrong)["error"] == "residual too large");
}

TEST_CASE("analyze a full pair") {
    Run full = run({"eig", "--system", fixture("example2_hp_system.json"), "--json"});
    io::Json e = io::Json::parse(full.out);
    Matrix x = io::matrix_from_json(e["vectors"], "X"), t = Matrix::Zero(6, 6);
    for (Index i = 0; i < 6; ++i) t(i, i) = io::complex_from_json(e["eigenvalues"][size_t(i)]);
    const std::string pairs = temp_path("full_pairs.json");
    io::write_file(pairs, io::pair_to_json(x, t, SymmetryClass::from_code("hp")));
    Run r = run({"analyze", "--pairs", pairs, "--json", "--draws", "10"});
    REQUIRE(r.code == 0);
    io::Json rep = io::Json::parse(r.out);
    CHECK(rep["dimension_real"] == 1);
    CHECK(rep["zeta_cardinality_observed"] == 1);

    CHECK(error_of(run({"analyze", "--pairs", fixture("example1_hp_pairs.json")}))["error"] == "dimension mismatch");
}

TEST_CASE("commands are deterministic and honour the seed variable") {
    const std::vector<std::string> args{"update", "--system", fixture("example2_hp_system.json"), "--replace",
                                        "0.8745+0.6115i,0.7680+0.5371i", "--with", "1+1i,0.5+0.5i", "--json"};
    Run a = run(args), b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);

    setenv("PALINVERSE_SEED", "17", 1);
    Run env = run(args);
    unsetenv("PALINVERSE_SEED");
    std::vector<std::string> seeded = args;
    seeded.insert(seeded.end(), {"--seed", "17"});
    CHECK(env.out == run(seeded).out);

    setenv("PALINVERSE_SEED", "x", 1);
    Run bad = run(args);
    unsetenv("PALINVERSE_SEED");
    CHECK(bad.code == 2);
    CHECK(error_of(bad)["error"] == "usage");
}

TEST_CASE("usage errors") {
    CHECK(error_of(run({}))["error"] == "usage");
    CHECK(error_of(run({"solve"}))["error"] == "usage");
    CHECK(error_of(run({"eig", "--system", fixture("scalar_ta_system.json"), "--bogus"}))["error"] == "usage");
    Run help = run({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("solve") != std::string::npos);
}
