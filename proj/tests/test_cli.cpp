#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tracelab/cli.hpp"

namespace fs = std::filesystem;

namespace {

std::string fixture(const std::string& rel) {
    return std::string(TRACELAB_FIXTURE_DIR) + "/" + rel;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = tracelab::cli::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

// A scratch directory removed at the end of the test case.
struct TempDir {
    fs::path path;
    TempDir() {
        std::mt19937_64 rng(std::random_device{}());
        path = fs::temp_directory_path() /
               ("tracelab-test-" + std::to_string(rng()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("run replays the imperative listing", "[cli]") {
    CliResult r = run({"run", "--lang", "imp", "--program",
                       fixture("programs/largest_odd_divisor.imp"), "--input", "x=12"});
    CHECK(r.code == 0);
    CHECK(r.out == read_file(fixture("golden/imp_while_x12.txt")));
}

TEST_CASE("run replays the square example", "[cli]") {
    CliResult r = run({"run", "--lang", "lam", "--program",
                       fixture("programs/square_plus_one.lam")});
    CHECK(r.code == 0);
    CHECK(r.out == read_file(fixture("golden/lam_square7.txt")));
}

TEST_CASE("run prints equation terms", "[cli]") {
    CliResult r = run({"run", "--lang", "eqn", "--program",
                       fixture("programs/largest_odd_divisor.eqn"), "--input", "12"});
    CHECK(r.code == 0);
    CHECK(r.out == read_file(fixture("golden/eqn_f12_terms.txt")));
}

TEST_CASE("exit codes partition the failure modes", "[cli]") {
    TempDir tmp;

    // 1: parse error
    std::ofstream(tmp.file("bad.imp")) << "while even(x) x := 1\n";
    CliResult parse_fail =
        run({"run", "--lang", "imp", "--program", tmp.file("bad.imp")});
    CHECK(parse_fail.code == 1);
    CHECK(parse_fail.err.find("error") != std::string::npos);

    // 1: unreadable file
    CHECK(run({"run", "--lang", "imp", "--program", tmp.file("missing.imp")}).code == 1);

    // 2: stuck configuration
    std::ofstream(tmp.file("stuck.imp")) << "x := y + 1\n";
    CHECK(run({"run", "--lang", "imp", "--program", tmp.file("stuck.imp")}).code == 2);

    // 3: limit exceeded
    std::ofstream(tmp.file("loop.imp")) << "while 0 <= x do x := x + 1\n";
    CHECK(run({"run", "--lang", "imp", "--program", tmp.file("loop.imp"), "--input",
               "x=0", "--max-steps", "40"})
              .code == 3);

    // 6: nondeterministic program in a single-run command
    CHECK(run({"run", "--lang", "imp", "--program",
               fixture("programs/largest_odd_divisor_nondet.imp"), "--input", "x=12"})
              .code == 6);
}

TEST_CASE("enumerate writes canonical trace files", "[cli]") {
    TempDir tmp;
    CliResult full = run({"enumerate", "--lang", "imp", "--program",
                          fixture("programs/largest_odd_divisor.imp"), "--inputs",
                          "x=7,8,12", "--keep", "x", "--out", tmp.file("full.traces")});
    REQUIRE(full.code == 0);
    CHECK(read_file(tmp.file("full.traces")) ==
          read_file(fixture("golden/odd_divisor_full.traces")));

    CliResult compact = run({"enumerate", "--lang", "imp", "--program",
                             fixture("programs/largest_odd_divisor.imp"), "--inputs",
                             "x=7,8,12", "--keep", "x", "--dedup", "--out",
                             tmp.file("compact.traces")});
    REQUIRE(compact.code == 0);
    CHECK(read_file(tmp.file("compact.traces")) ==
          read_file(fixture("golden/odd_divisor_dedup.traces")));

    // Byte-identical on a second run.
    CliResult again = run({"enumerate", "--lang", "imp", "--program",
                           fixture("programs/largest_odd_divisor.imp"), "--inputs",
                           "x=7,8,12", "--keep", "x", "--out", tmp.file("again.traces")});
    REQUIRE(again.code == 0);
    CHECK(read_file(tmp.file("again.traces")) == read_file(tmp.file("full.traces")));
}

TEST_CASE("enumerate expands nondeterministic choices", "[cli]") {
    TempDir tmp;
    CliResult r = run({"enumerate", "--lang", "imp", "--program",
                       fixture("programs/largest_odd_divisor_nondet.imp"), "--input",
                       "x=8", "--keep", "x", "--dedup", "--out",
                       tmp.file("nondet8.traces")});
    REQUIRE(r.code == 0);
    CHECK(read_file(tmp.file("nondet8.traces")) ==
          read_file(fixture("golden/odd_divisor_nondet8_dedup.traces")));
}

TEST_CASE("speedup compares trace files", "[cli]") {
    TempDir tmp;
    REQUIRE(run({"enumerate", "--lang", "imp", "--program",
                 fixture("programs/largest_odd_divisor.imp"), "--inputs", "x=7,8,12",
                 "--keep", "x", "--out", tmp.file("full.traces")})
                .code == 0);
    REQUIRE(run({"enumerate", "--lang", "imp", "--program",
                 fixture("programs/largest_odd_divisor.imp"), "--inputs", "x=7,8,12",
                 "--keep", "x", "--dedup", "--out", tmp.file("compact.traces")})
                .code == 0);

    CliResult k3 = run({"speedup", tmp.file("compact.traces"), tmp.file("full.traces")});
    CHECK(k3.code == 0);
    CHECK(k3.out == "k=3\n");

    CliResult self = run({"speedup", tmp.file("full.traces"), tmp.file("full.traces")});
    CHECK(self.code == 0);
    CHECK(self.out == "k=0\n");

    CliResult swapped =
        run({"speedup", tmp.file("full.traces"), tmp.file("compact.traces")});
    CHECK(swapped.code == 4);
    CHECK(swapped.out == "not-a-speedup\n");

    CHECK(run({"speedup", tmp.file("nope.traces"), tmp.file("full.traces")}).code == 1);
}

TEST_CASE("equal compares trace files exactly", "[cli]") {
    TempDir tmp;
    REQUIRE(run({"enumerate", "--lang", "eqn", "--program",
                 fixture("programs/bool_id_cases.eqn"), "--inputs", "true,false",
                 "--out", tmp.file("cases.traces")})
                .code == 0);
    REQUIRE(run({"enumerate", "--lang", "eqn", "--program",
                 fixture("programs/bool_id_var.eqn"), "--inputs", "true,false", "--out",
                 tmp.file("var.traces")})
                .code == 0);

    CliResult same = run({"equal", tmp.file("cases.traces"), tmp.file("var.traces")});
    CHECK(same.code == 0);
    CHECK(same.out == "equal\n");
    CHECK(read_file(tmp.file("cases.traces")) ==
          "<fun>(false)|false\n<fun>(true)|true\n");

    CliResult diff =
        run({"equal", tmp.file("cases.traces"), fixture("traces/growing_states.traces")});
    CHECK(diff.code == 5);
    CHECK(diff.out == "different\n");
}

TEST_CASE("compare runs two programs over shared inputs", "[cli]") {
    CliResult cross = run({"compare", "--lang", "eqn", "--program",
                           fixture("programs/largest_odd_divisor.eqn"), "--lang2",
                           "lam", "--program2",
                           fixture("programs/largest_odd_divisor.lam"), "--inputs",
                           "1..20"});
    CHECK(cross.code == 0);
    CHECK(cross.out == "equal\n");

    CliResult booleans = run({"compare", "--lang", "eqn", "--program",
                              fixture("programs/bool_id_cases.eqn"), "--lang2", "eqn",
                              "--program2", fixture("programs/bool_id_var.eqn"),
                              "--inputs", "true,false"});
    CHECK(booleans.code == 0);
    CHECK(booleans.out == "equal\n");

    CliResult nondet = run({"compare", "--lang", "imp", "--program",
                            fixture("programs/largest_odd_divisor.imp"), "--lang2",
                            "imp", "--program2",
                            fixture("programs/largest_odd_divisor_nondet.imp"),
                            "--keep", "x", "--keep2", "x", "--dedup", "--inputs",
                            "x=7,8,12"});
    CHECK(nondet.code == 5);
    CHECK(nondet.out == "different\n");

    CHECK(run({"compare", "--lang", "imp", "--program",
               fixture("programs/largest_odd_divisor.imp"), "--lang2", "eqn",
               "--program2", fixture("programs/largest_odd_divisor.eqn"), "--inputs",
               "x=1..5"})
              .code == 1);
}

TEST_CASE("input specifications", "[cli]") {
    TempDir tmp;
    // Ranges and lists are equivalent ways to spell the same inputs.
    REQUIRE(run({"enumerate", "--lang", "eqn", "--program",
                 fixture("programs/largest_odd_divisor.eqn"), "--inputs", "1..6",
                 "--out", tmp.file("range.traces")})
                .code == 0);
    REQUIRE(run({"enumerate", "--lang", "eqn", "--program",
                 fixture("programs/largest_odd_divisor.eqn"), "--inputs",
                 "1,2,3,4,5,6", "--out", tmp.file("list.traces")})
                .code == 0);
    CHECK(read_file(tmp.file("range.traces")) == read_file(tmp.file("list.traces")));

    CHECK(run({"enumerate", "--lang", "eqn", "--program",
               fixture("programs/largest_odd_divisor.eqn"), "--inputs", "5..1", "--out",
               tmp.file("bad.traces")})
              .code == 1);
    CHECK(run({"enumerate", "--lang", "imp", "--program",
               fixture("programs/largest_odd_divisor.imp"), "--inputs", "7,8", "--out",
               tmp.file("bad.traces")})
              .code == 1);
}

TEST_CASE("entry selection for equation programs", "[cli]") {
    TempDir tmp;
    std::ofstream(tmp.file("double.eqn")) << "double(x) = *(x,2)\n";
    CliResult r = run({"run", "--lang", "eqn", "--program", tmp.file("double.eqn"),
                       "--entry", "double", "--input", "21"});
    CHECK(r.code == 0);
    CHECK(r.out == "double(21)\n*(21,2)\n42\n");
    CHECK(run({"run", "--lang", "eqn", "--program", tmp.file("double.eqn"), "--input",
               "21"})
              .code == 1);  // default entry f is not defined
}

TEST_CASE("max-seqs caps enumeration", "[cli]") {
    TempDir tmp;
    CHECK(run({"enumerate", "--lang", "imp", "--program",
               fixture("programs/largest_odd_divisor_nondet.imp"), "--input", "x=8",
               "--keep", "x", "--max-seqs", "3", "--out", tmp.file("capped.traces")})
              .code == 3);
    CHECK_FALSE(fs::exists(tmp.file("capped.traces")));
}
