#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "impob/cli.hpp"

using namespace impob;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string data_file(const char* name) {
    return (fs::path(IMPOB_DATA_DIR) / name).string();
}

std::string temp_path(const char* stem) {
    return (fs::temp_directory_path() / (std::string("impob_cli_") + stem)).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

} // namespace

TEST_CASE("check reports observable systems with exit 0 and JSON on stdout") {
    const CliResult r = run_cli({"check", data_file("shift2_x1.json")});
    CHECK(r.code == cli::exit_ok);
    const json doc = json::parse(r.out);
    CHECK(doc["verdict"] == true);
    CHECK(doc["strategy"] == "all");
    CHECK(doc["witness"].is_null());
    CHECK(doc["rank_E"] == 1);
    CHECK(doc["rank_table"].size() == 2);
    CHECK(doc["rank_table"][0] ==
          json({{"r", 0}, {"rank", 3}, {"required", 3}, {"holds", true}}));
    CHECK(doc["det_pencil"] == json::parse(R"(["1"])"));
}

TEST_CASE("check reports unobservable systems with exit 1 and a witness") {
    const CliResult r = run_cli({"check", data_file("shift2_x2.json")});
    CHECK(r.code == cli::exit_negative);
    const json doc = json::parse(r.out);
    CHECK(doc["verdict"] == false);
    CHECK(doc["witness"]["order"] == 0);
    CHECK(doc["witness"]["v"] == json::parse(R"(["0","-1"])"));
    CHECK(doc["witness"]["coeffs_alternating"] == json::parse(R"([["1","0"]])"));
}

TEST_CASE("check strategies shape the rank table") {
    const CliResult first = run_cli({"check", data_file("shift2_x2.json"), "--strategy", "first"});
    CHECK(first.code == cli::exit_negative);
    CHECK(json::parse(first.out)["rank_table"].size() == 1);
    CHECK(json::parse(first.out)["strategy"] == "first");

    const CliResult single = run_cli({"check", data_file("shift3_x3.json"), "--strategy", "r=1"});
    CHECK(single.code == cli::exit_negative);
    const json doc = json::parse(single.out);
    REQUIRE(doc["rank_table"].size() == 1);
    CHECK(doc["rank_table"][0] ==
          json({{"r", 1}, {"rank", 6}, {"required", 8}, {"holds", false}}));
    CHECK(doc["witness"]["order"] == 1);
    CHECK(doc["witness"]["v"] == json::parse(R"(["0","0","1"])"));

    const CliResult bogus = run_cli({"check", data_file("shift2_x1.json"), "--strategy", "bogus"});
    CHECK(bogus.code == cli::exit_error);
    CHECK(contains(bogus.err, "error:"));
}

TEST_CASE("check --out writes a deterministic report file plus a summary") {
    const std::string out_a = temp_path("report_a.json");
    const std::string out_b = temp_path("report_b.json");
    std::remove(out_a.c_str());
    std::remove(out_b.c_str());

    const CliResult a = run_cli({"check", data_file("shift2_x2.json"), "--out", out_a});
    CHECK(a.code == cli::exit_negative);
    CHECK(contains(a.out, "NOT impulse observable"));
    CHECK(contains(a.out, "<- fails"));
    CHECK(contains(a.out, "report written to"));
    CHECK(contains(a.out, "order 0 unobservable impulse"));

    const CliResult b = run_cli({"check", data_file("shift2_x2.json"), "--out", out_b});
    CHECK(b.code == cli::exit_negative);
    CHECK(slurp(out_a) == slurp(out_b));

    const ReportDocument doc = report_document_from_json(json::parse(slurp(out_a)));
    CHECK_FALSE(doc.verdict);
    REQUIRE(doc.witness.has_value());
    CHECK(doc.witness->order() == 0);
    std::remove(out_a.c_str());
    std::remove(out_b.c_str());
}

TEST_CASE("check --compare-float annotates agreeing SVD ranks") {
    const CliResult r = run_cli({"check", data_file("shift3_x3.json"), "--compare-float"});
    CHECK(r.code == cli::exit_negative);
    const json doc = json::parse(r.out);
    REQUIRE(doc.contains("float_ranks"));
    CHECK(doc["float_ranks"].size() == 3);
    for (const json& row : doc["float_ranks"]) {
        CHECK(row["agree"] == true);
        CHECK(row["exact"] == row["float"]);
    }
}

TEST_CASE("check accepts rational entries and rejects irregular pencils") {
    const CliResult ok = run_cli({"check", data_file("mixed_rational.json")});
    CHECK(ok.code == cli::exit_ok);

    const CliResult irr = run_cli({"check", data_file("irregular.json")});
    CHECK(irr.code == cli::exit_error);
    CHECK(contains(irr.err, "error:"));

    const CliResult missing = run_cli({"check", temp_path("no_such_file.json")});
    CHECK(missing.code == cli::exit_error);
    CHECK(contains(missing.err, "error:"));
}

TEST_CASE("float entries need --approx-ingest") {
    const std::string path = temp_path("float_system.json");
    {
        std::ofstream out(path);
        out << R"({"E": [[0.5, 0], [0, 0]], "A": [[1, 0], [0, 1]], "C": [[1, 0]]})";
    }
    const CliResult refused = run_cli({"check", path});
    CHECK(refused.code == cli::exit_error);
    CHECK(contains(refused.err, "approx-ingest"));

    const CliResult taken = run_cli({"check", path, "--approx-ingest"});
    CHECK(taken.code == cli::exit_ok);
    // 0.5 must have been ingested exactly, not re-rounded: rank(E) = 1.
    CHECK(json::parse(taken.out)["rank_E"] == 1);
    std::remove(path.c_str());
}

TEST_CASE("witness prints the impulse chain or reports the search depth") {
    const CliResult found = run_cli({"witness", data_file("shift2_x2.json")});
    CHECK(found.code == cli::exit_ok);
    CHECK(contains(found.out, "order 0 unobservable impulse"));
    CHECK(contains(found.out, "v  = (0, -1)"));
    CHECK(contains(found.out, "p0 = (1, 0)"));

    const CliResult none = run_cli({"witness", data_file("shift2_x1.json")});
    CHECK(none.code == cli::exit_negative);
    CHECK(contains(none.out, "no unobservable impulse up to order 1"));

    // Depth is clamped to n.
    const CliResult deep = run_cli({"witness", data_file("shift2_x1.json"), "--max-order", "5"});
    CHECK(deep.code == cli::exit_negative);
    CHECK(contains(deep.out, "up to order 2"));

    const CliResult shallow =
        run_cli({"witness", data_file("shift3_x3.json"), "--max-order", "0"});
    CHECK(shallow.code == cli::exit_ok);
    CHECK(contains(shallow.out, "order 0 unobservable impulse"));
}

TEST_CASE("solve prints the split solution and extracts witnesses") {
    const CliResult r = run_cli({"solve", data_file("shift2_x2.json"), "--w", "0,1"});
    CHECK(r.code == cli::exit_ok);
    CHECK(contains(r.out, "w = (0, 1)"));
    CHECK(contains(r.out, "denominator (monic): 1"));
    CHECK(contains(r.out, "X_P = (-1, 0)"));
    CHECK(contains(r.out, "impulse order: 0"));
    CHECK(contains(r.out, "q = (0, 0)"));
    CHECK(contains(r.out, "C X(s) = 0"));
    CHECK(contains(r.out, "witness extracted from (w - q, X_P):"));
    CHECK(contains(r.out, "v  = (0, 1)"));

    // Same excitation, but the output watches the impulsive state.
    const CliResult seen = run_cli({"solve", data_file("shift2_x1.json"), "--w", "0,1"});
    CHECK(seen.code == cli::exit_ok);
    CHECK(contains(seen.out, "C X(s) != 0"));
    CHECK(contains(seen.out, "no witness: the output sees this solution"));

    const CliResult standard = run_cli({"solve", data_file("standard.json"), "--w", "1,0"});
    CHECK(standard.code == cli::exit_ok);
    CHECK(contains(standard.out, "impulse order: none (X_P = 0)"));

    const CliResult wrong = run_cli({"solve", data_file("shift2_x1.json"), "--w", "1"});
    CHECK(wrong.code == cli::exit_error);
    const CliResult bad = run_cli({"solve", data_file("shift2_x1.json"), "--w", "1,,2"});
    CHECK(bad.code == cli::exit_error);
}

TEST_CASE("gen writes a system file and a canonical sidecar that rebuilds it") {
    const std::string out_a = temp_path("gen_a.json");
    const std::string out_b = temp_path("gen_b.json");
    for (const std::string& p : {out_a, out_b, out_a + ".canonical.json", out_b + ".canonical.json"})
        std::remove(p.c_str());

    const CliResult a = run_cli({"gen", "--seed", "7", "--n1", "1", "--n2", "2", "--m", "1",
                                 "--out", out_a});
    REQUIRE(a.code == cli::exit_ok);
    REQUIRE(fs::exists(out_a));
    REQUIRE(fs::exists(out_a + ".canonical.json"));

    const SystemFile f = system_file_from_json(json::parse(slurp(out_a)));
    CHECK(f.name == "gen-seed7-n1+2-m1");
    CHECK(f.E.rows() == 3);
    CHECK(f.C.rows() == 1);

    // The sidecar carries the exact decomposition: reassembling it must give
    // back the very matrices in the system file.
    const json canon = json::parse(slurp(out_a + ".canonical.json"));
    WeierstrassData wd;
    wd.n1 = canon["n1"].get<std::size_t>();
    wd.n2 = canon["n2"].get<std::size_t>();
    wd.m = canon["m"].get<std::size_t>();
    wd.A1 = matrix_from_json(canon["A1"], wd.n1);
    wd.N = matrix_from_json(canon["N"], wd.n2);
    wd.C1 = matrix_from_json(canon["C1"], wd.n1);
    wd.C2 = matrix_from_json(canon["C2"], wd.n2);
    wd.T = matrix_from_json(canon["T"], wd.n1 + wd.n2);
    wd.S = matrix_from_json(canon["S"], wd.n1 + wd.n2);
    wd.h = canon["h"].get<std::size_t>();
    const DescriptorSystem rebuilt = assemble(wd);
    CHECK(rebuilt.E() == f.E);
    CHECK(rebuilt.A() == f.A);
    CHECK(rebuilt.C() == f.C);
    CHECK(wd.h == nilpotency_index(wd.N));

    const CliResult b = run_cli({"gen", "--seed", "7", "--n1", "1", "--n2", "2", "--m", "1",
                                 "--out", out_b});
    REQUIRE(b.code == cli::exit_ok);
    CHECK(slurp(out_a) == slurp(out_b));

    const CliResult degenerate = run_cli({"gen", "--seed", "1", "--n1", "0", "--n2", "0", "--m",
                                          "1", "--out", temp_path("gen_zero.json")});
    CHECK(degenerate.code == cli::exit_error);

    for (const std::string& p : {out_a, out_b, out_a + ".canonical.json", out_b + ".canonical.json"})
        std::remove(p.c_str());
}

TEST_CASE("selftest passes on a small budget and honors failure injection") {
    std::remove(temp_path("unused_artifact.json").c_str());
    const CliResult ok = run_cli({"selftest", "--trials", "40", "--max-n", "3", "--seed", "123",
                                  "--artifact", temp_path("unused_artifact.json")});
    CHECK(ok.code == cli::exit_ok);
    CHECK(contains(ok.out, "selftest: PASS"));
    CHECK(contains(ok.out, "order-equivalence"));
    CHECK(contains(ok.out, "fixed-instances"));
    CHECK(contains(ok.out, "float-vs-exact rank agreement"));
    CHECK_FALSE(fs::exists(temp_path("unused_artifact.json")));

    const std::string artifact = temp_path("artifact.json");
    std::remove(artifact.c_str());
    const CliResult fail = run_cli({"selftest", "--inject-failure", "--artifact", artifact});
    CHECK(fail.code == cli::exit_negative);
    CHECK(contains(fail.out, "selftest: FAIL"));
    CHECK(contains(fail.out, "counterexample written to"));
    REQUIRE(fs::exists(artifact));
    const json ce = json::parse(slurp(artifact));
    CHECK(ce["suite"] == "injected-failure");
    CHECK(ce.contains("E"));
    std::remove(artifact.c_str());
}

TEST_CASE("usage errors and help stay on the documented exit codes") {
    const CliResult help = run_cli({"--help"});
    CHECK(help.code == cli::exit_ok);
    CHECK(contains(help.out, "impob"));

    CHECK(run_cli({}).code == cli::exit_error);
    CHECK(run_cli({"frobnicate"}).code == cli::exit_error);
    CHECK(run_cli({"check"}).code == cli::exit_error);
    CHECK(run_cli({"gen", "--seed", "1"}).code == cli::exit_error);
}

TEST_CASE("vector formatting helpers round trip") {
    using cli::detail_cli::format_vector;
    using cli::detail_cli::parse_vector_csv;
    CHECK(format_vector({Rational(0), rational(-1, 2)}) == "(0, -1/2)");
    CHECK(parse_vector_csv("1/2, -3 ,4") == RationalVector{rational(1, 2), Rational(-3), Rational(4)});
    CHECK_THROWS_AS(parse_vector_csv(""), parse_error);
    CHECK_THROWS_AS(parse_vector_csv("1, ,2"), parse_error);
    CHECK_THROWS_AS(parse_vector_csv("1,x"), parse_error);
}
