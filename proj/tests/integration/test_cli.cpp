#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "reluriesz/coeff_io.hpp"
#include "reluriesz/network.hpp"
#include "rrnet/cli.hpp"

namespace fs = std::filesystem;
using namespace reluriesz;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = rrnet::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("rrnet_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    write_text_file(path(name), text);
    return path(name);
  }

  fs::path dir_;
};

std::string golden(const std::string& name) { return read_text_file(fs::path(RELURIESZ_GOLDEN_DIR) / name); }

// Header row of a CSV document: the first line not starting with '#'.
std::string header_of(const std::string& csv) {
  std::istringstream is(csv);
  std::string line;
  while (std::getline(is, line))
    if (line.empty() || line[0] != '#') return line + "\n";
  return {};
}

std::size_t data_rows(const std::string& csv) {
  std::istringstream is(csv);
  std::string line;
  std::size_t n = 0;
  while (std::getline(is, line))
    if (!line.empty() && line[0] != '#') ++n;
  return n - 1;
}

const char* kRiesz = R"({"dim": 2, "alpha0": 0.25, "terms": [{"k": [1, 0], "c": 1.0, "s": 0.0}, {"k": [1, -1], "c": -0.5, "s": 0.75}]})";

}  // namespace

TEST_F(Cli, MobiusAndLatticeCount) {
  EXPECT_EQ(run({"mobius", "12"}).out, "0\n");
  EXPECT_EQ(run({"mobius", "30"}).out, "-1\n");
  const auto r = run({"lattice", "count", "--t", "1", "--d", "4"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "9\n");
  EXPECT_EQ(run({"mobius", "0"}).code, rrnet::kValidation);
}

TEST_F(Cli, LatticeBoundsAndEnum) {
  const auto r = run({"lattice", "bounds", "--t", "2", "--d", "3"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, golden("lattice_bounds_t2_d3.csv"));
  const auto e = run({"lattice", "enum", "--t", "1", "--d", "2"});
  EXPECT_EQ(e.out, "k1,k2\n-1,0\n0,-1\n0,0\n0,1\n1,0\n");
  const auto h = run({"lattice", "enum", "--t", "1", "--d", "2", "--half"});
  EXPECT_EQ(h.out, "k1,k2\n0,1\n1,0\n");
}

TEST_F(Cli, BasisEval) {
  EXPECT_EQ(run({"basis", "eval", "--kind", "cos", "--k", "1,0", "--x", "0.5,0.3"}).out, "-1\n");
  EXPECT_EQ(run({"basis", "eval", "--kind", "sin", "--k", "1", "--x", "0.25"}).out, "1\n");
  EXPECT_EQ(run({"basis", "eval", "--kind", "const", "--x", "0.1"}).out, "1\n");
  EXPECT_EQ(run({"basis", "eval", "--kind", "cos", "--k", "0,1", "--x", "0.1"}).code, rrnet::kValidation);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, rrnet::kValidation);
  EXPECT_EQ(run({"nonsense"}).code, rrnet::kValidation);
  EXPECT_EQ(run({"lattice", "count", "--t", "1"}).code, rrnet::kValidation);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(Cli, TransformRoundTrip) {
  const auto in = write("f.json", R"({"dim": 1, "a0": 0.5, "terms": [{"k": [1], "c": 1.0, "s": 0.0}]})");
  const auto r = run({"transform", "--dir", "f2r", "--trunc", "5", "--in", in, "--out", path("g.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto g = parse_riesz_coeffs(read_text_file(path("g.json")));
  EXPECT_EQ(g.constant, 0.5);
  // Odd multiples 1, 3, ..., 11; mu(9) = 0 drops one.
  EXPECT_EQ(g.terms.size(), 5u);
  EXPECT_NE(r.err.find("tail bound"), std::string::npos);
  EXPECT_EQ(run({"transform", "--dir", "r2f", "--in", in}).code, rrnet::kValidation);
}

TEST_F(Cli, Gram) {
  const auto r = run({"gram", "--radius", "1", "--dim", "1", "--normalized", "--out", path("g.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_text_file(path("g.csv")), golden("gram_r1_d1_normalized.csv"));
  EXPECT_NE(r.out.find("\"lambda_min\""), std::string::npos);
}

TEST_F(Cli, NetBuildEvalCheckExport) {
  const auto in = write("g.json", kRiesz);
  for (const char* arch : {"stacked", "inline"}) {
    const auto b = run({"net", "build", "--arch", arch, "--in", in, "--out", path("net.json")});
    ASSERT_EQ(b.code, 0) << b.err;
    const auto e = run({"net", "eval", "--net", path("net.json"), "--x", "0.5,0.25"});
    ASSERT_EQ(e.code, 0);
    const auto g = parse_riesz_coeffs(kRiesz);
    const std::vector<double> x{0.5, 0.25};
    EXPECT_NEAR(std::stod(e.out), evaluate(g, x), 1e-12);
    const auto c = run({"net", "check", "--net", path("net.json")});
    EXPECT_EQ(c.code, 0) << c.out << c.err;
    EXPECT_NE(c.out.find("\"exact_ok\": true"), std::string::npos);
  }
  const auto x = run({"net", "export", "--net", path("net.json")});
  EXPECT_EQ(x.code, 0);
  EXPECT_EQ(x.out.substr(0, x.out.find('\n') + 1), "layer,row,col,kind,value\n");
}

TEST_F(Cli, NetCheckRejectsCorruptedWeights) {
  const auto in = write("g.json", kRiesz);
  ASSERT_EQ(run({"net", "build", "--in", in, "--out", path("net.json")}).code, 0);
  auto text = read_text_file(path("net.json"));
  // The first hidden weight of a stacked net is a generator weight; scale it far beyond 8 max|coefficient|.
  const auto pos = text.find("\"weights\":[[");
  ASSERT_NE(pos, std::string::npos);
  text.insert(pos + 12, "100");
  write_text_file(path("bad.json"), text);
  const auto r = run({"net", "check", "--net", path("bad.json")});
  EXPECT_EQ(r.code, rrnet::kAuditFailure);
  EXPECT_NE(r.err.find("max |weight| exceeds"), std::string::npos) << r.err;
}

TEST_F(Cli, NetCheckMalformedFile) {
  const auto bad = write("bad.json", R"({"format_version": 1, "dim_in": 1, "layers": [)");
  EXPECT_EQ(run({"net", "check", "--net", bad}).code, rrnet::kValidation);
}

TEST_F(Cli, ApproxReports) {
  const auto in = write("g.json", kRiesz);
  const auto r = run({"approx", "sobolev", "--s", "0.5", "--eps", "0.5", "--arch", "inline", "--in", in, "--out",
                      path("net.json"), "--report", path("rep.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rep = read_text_file(path("rep.json"));
  for (const char* key : {"\"width\"", "\"depth\"", "\"params_total\"", "\"error_l2_exact\"", "\"error_bound_certified\""})
    EXPECT_NE(rep.find(key), std::string::npos) << key;
  EXPECT_EQ(deserialize(read_text_file(path("net.json"))).width(), 5);
  const auto b = run({"approx", "barron", "--s", "0.5", "--eps", "0.1", "--in", in});
  EXPECT_EQ(b.code, 0) << b.err;
  EXPECT_NE(b.out.find("\"sigma_n\""), std::string::npos);
  EXPECT_EQ(run({"approx", "sobolev", "--s", "1.5", "--eps", "0.5", "--in", in}).code, rrnet::kValidation);
}

TEST_F(Cli, RecoverSingleRun) {
  const auto in = write("g.json", kRiesz);
  const auto r = run({"recover", "--method", "ls", "--radius", "1.5", "--n-samples", "40", "--seed", "3", "--truth", in,
                      "--out", path("rec.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\"residual_rms\""), std::string::npos);
  const auto rec = parse_riesz_coeffs(read_text_file(path("rec.json")));
  EXPECT_NEAR(rec.constant, 0.25, 1e-10);
  const auto bp = run({"recover", "--method", "bp", "--radius", "1.5", "--n-samples", "20", "--delta", "1e-6", "--truth", in});
  EXPECT_EQ(bp.code, 0) << bp.err;
  EXPECT_EQ(run({"recover", "--method", "ls", "--radius", "3", "--n-samples", "4", "--truth", in}).code, rrnet::kValidation);
}

TEST_F(Cli, ExperimentValidation) {
  const auto empty = write("c.json", R"({"kind": "rates_sobolev", "dims": [], "s": [0.5], "radii": [2]})");
  const auto r = run({"experiment", "run", "--config", empty});
  EXPECT_EQ(r.code, rrnet::kValidation);
  EXPECT_NE(r.err.find("$.dims"), std::string::npos);
  const auto bad_s = write("s.json", R"({"kind": "rates_sobolev", "dims": [1], "s": [1.5], "radii": [2]})");
  EXPECT_NE(run({"experiment", "run", "--config", bad_s}).err.find("$.s"), std::string::npos);
  const auto bad_kind = write("k.json", R"({"kind": "nope"})");
  EXPECT_NE(run({"experiment", "run", "--config", bad_kind}).err.find("$.kind"), std::string::npos);
  const auto gram = write("g.json", R"({"kind": "gram_check", "dims": [1], "radii": [2]})");
  EXPECT_EQ(run({"experiment", "rates", "--config", gram}).code, rrnet::kValidation);
}

TEST_F(Cli, ExperimentOneCellAndDeterminism) {
  const auto cfg = write("c.json", R"({"kind": "rates_sobolev", "dims": [2], "s": [0.5], "radii": [2], "seeds": [7],
    "support_radius": 4, "mobius_truncation": 5})");
  const auto a = run({"experiment", "run", "--config", cfg, "--out", path("a.csv")});
  ASSERT_EQ(a.code, 0) << a.err;
  const auto b = run({"experiment", "run", "--config", cfg, "--out", path("b.csv"), "--threads", "3"});
  ASSERT_EQ(b.code, 0) << b.err;
  const auto csv = read_text_file(path("a.csv"));
  EXPECT_EQ(csv, read_text_file(path("b.csv")));
  EXPECT_EQ(data_rows(csv), 1u);
  EXPECT_EQ(header_of(csv), golden("rates_sobolev.header"));
  EXPECT_EQ(csv.rfind("# tool: rrnet ", 0), 0u);
  EXPECT_NE(csv.find("# generator: splitmix64/v1"), std::string::npos);
  EXPECT_NE(csv.find("# config_fnv1a64: "), std::string::npos);
}

TEST_F(Cli, ExperimentConfigDirectory) {
  write("rel.json", R"({"kind": "lattice_bounds", "dims": [2], "radii": [1]})");
  ::setenv("RRNET_CONFIG_DIR", dir_.c_str(), 1);
  const auto r = run({"experiment", "run", "--config", "rel.json"});
  ::unsetenv("RRNET_CONFIG_DIR");
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("1,2,5,"), std::string::npos);
}

TEST_F(Cli, ExperimentHeadersAndRows) {
  struct Case {
    const char* golden;
    const char* config;
    std::size_t rows;
  };
  const Case cases[] = {
      {"rates_barron.header", R"({"kind": "rates_barron", "dims": [1, 2], "s": [0.5], "n_terms": [1, 4], "support_radius": 4})", 4},
      {"gram_check.header", R"({"kind": "gram_check", "dims": [1, 2], "radii": [2]})", 2},
      {"lattice_bounds.header", R"({"kind": "lattice_bounds", "dims": [2, 3], "radii": [1, 2, 3]})", 6},
      {"recovery_sweep.header",
       R"({"kind": "recovery_sweep", "method": ["ls", "bp"], "dims": [1], "s": [0.5], "radii": [3], "n_samples": [30], "seeds": [0, 1], "support_radius": 3, "n_mc": 200})",
       4},
  };
  for (const auto& c : cases) {
    const auto cfg = write("c.json", c.config);
    const auto r = run({"experiment", "run", "--config", cfg});
    ASSERT_EQ(r.code, 0) << c.golden << r.err;
    EXPECT_EQ(header_of(r.out), golden(c.golden)) << c.golden;
    EXPECT_EQ(data_rows(r.out), c.rows) << c.golden;
  }
}

TEST_F(Cli, FailedCellIsRecorded) {
  // N < n makes least squares fail for the second radius only.
  const auto cfg = write("c.json", R"({"kind": "recovery_sweep", "dims": [1], "s": [0.5], "radii": [1, 20], "n_samples": [10],
    "support_radius": 3, "n_mc": 100})");
  const auto r = run({"experiment", "run", "--config", cfg});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(data_rows(r.out), 2u);
  EXPECT_NE(r.out.find("least squares needs at least"), std::string::npos);
  // Batch mode through recover.
  const auto b = run({"recover", "--config", cfg});
  EXPECT_EQ(b.out, r.out);
}
