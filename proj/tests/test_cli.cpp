#include "persmode/cli.hpp"
#include "persmode/io.hpp"
#include "persmode/reference_densities.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

namespace persmode {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("persmode_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "persmode");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    out_.str("");
    err_.str("");
    return cli::run_cli(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST(Io, DoubleFormatting) {
  for (double v : {0.0, 0.1, 1.0 / 3.0, 2.5e-300, 123456789.125}) EXPECT_EQ(io::parse_double(io::format_double(v)), v);
  EXPECT_EQ(io::format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_THROW(io::parse_double("1.5x"), std::invalid_argument);
  EXPECT_THROW(io::parse_double(""), std::invalid_argument);
}

TEST(Io, DiagramCsvRoundTripIsBitExact) {
  testing::Rng rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = testing::random_real_field(rng, GridSpec(2, 5), 3.0);
    const auto d = superlevel_diagram(f);
    std::stringstream s;
    io::write_diagram_csv(s, d);
    const auto back = io::read_diagram_csv(s);
    EXPECT_EQ(back.points, d.points);
  }
}

TEST(Io, SamplesCsvRoundTrip) {
  const PointSet x = sample(DensitySpec::example2_2(), 50, 3);
  std::stringstream s;
  io::write_samples_csv(s, x);
  EXPECT_TRUE(io::read_samples_csv(s) == x);
}

TEST(Io, MalformedInputsAreRejected) {
  std::istringstream ragged("0.1,0.2\n0.3\n");
  EXPECT_THROW(io::read_samples_csv(ragged), std::invalid_argument);
  std::istringstream junk("0.1,abc\n");
  EXPECT_THROW(io::read_samples_csv(junk), std::invalid_argument);
  std::istringstream empty("");
  EXPECT_THROW(io::read_samples_csv(empty), std::invalid_argument);
  std::istringstream header("b,d\n");
  EXPECT_THROW(io::read_diagram_csv(header), std::invalid_argument);
  std::istringstream bad_flag("birth,death,essential,birth_cell\n1,0,7,0\n");
  EXPECT_THROW(io::read_diagram_csv(bad_flag), std::invalid_argument);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run({}), cli::kUsageError);
  EXPECT_EQ(run({"frobnicate"}), cli::kUsageError);
  EXPECT_EQ(run({"--help"}), cli::kSuccess);
  EXPECT_EQ(run({"sample", "--density", "example1", "--n", "10"}), cli::kUsageError);
  EXPECT_EQ(run({"sample", "--density", "nope", "--n", "10", "--out", path("x.csv")}), cli::kUsageError);
  EXPECT_EQ(run({"estimate", "--out", path("e.json")}), cli::kUsageError);
  EXPECT_EQ(run({"estimate", "--in", path("missing.csv"), "--out", path("e.json")}), cli::kRuntimeError);
  EXPECT_FALSE(err_.str().empty());
  io::write_file(path("bad.csv"), "0.1,zzz\n");
  EXPECT_EQ(run({"diagram", "--in", path("bad.csv"), "--out", path("d.csv")}), cli::kRuntimeError);
  EXPECT_EQ(run({"estimate", "--density", "example1", "--n", "100", "--mu", "2", "--out", path("e.json")}),
            cli::kUsageError);
}

TEST_F(CliTest, PipelineAndIdentityBottleneck) {
  ASSERT_EQ(run({"sample", "--density", "example2_2", "--n", "3000", "--seed", "7", "--out", path("s.csv")}), 0);
  ASSERT_EQ(run({"diagram", "--in", path("s.csv"), "--alpha", "0.5", "--mu", "0.5", "--h-const", "0.25", "--out",
                 path("d.csv")}),
            0);
  ASSERT_EQ(run({"bottleneck", "--a", path("d.csv"), "--b", path("d.csv")}), 0);
  EXPECT_EQ(out_.str(), "0\n");
  ASSERT_EQ(run({"estimate", "--in", path("s.csv"), "--alpha", "0.5", "--mu", "0.5", "--h", "0.05", "--out",
                 path("e.json")}),
            0);
  const auto j = nlohmann::json::parse(io::read_file(path("e.json")));
  EXPECT_EQ(j["schema_version"], io::kSchemaVersion);
  EXPECT_EQ(j["cells_per_axis"], 20);
  EXPECT_EQ(j["threshold_rule"], "adaptive");
  EXPECT_EQ(j["k_hat"].get<std::size_t>(), j["modes"].size());
  ASSERT_EQ(run({"estimate", "--in", path("s.csv"), "--l", "5", "--out", path("k.json")}), 0);
  EXPECT_EQ(nlohmann::json::parse(io::read_file(path("k.json")))["threshold_rule"], "known_l");
}

TEST_F(CliTest, OracleAndPlot) {
  ASSERT_EQ(run({"oracle", "--density", "example2_2", "--fine-m", "128", "--out", path("o.csv")}), 0);
  EXPECT_TRUE(fs::exists(path("o.csv.modes.csv")));
  EXPECT_EQ(io::read_file(path("o.csv.modes.csv")).substr(0, 11), "x0,x1,value");
  ASSERT_EQ(run({"sample", "--density", "example2_2", "--n", "2000", "--out", path("s.csv")}), 0);
  ASSERT_EQ(run({"estimate", "--in", path("s.csv"), "--alpha", "0.5", "--mu", "0.5", "--out", path("e.json")}), 0);
  ASSERT_EQ(run({"diagram", "--in", path("s.csv"), "--mu", "0.5", "--out", path("d.csv")}), 0);
  ASSERT_EQ(run({"plot", "--in", path("d.csv"), "--in", path("o.csv"), "--out", path("d.svg")}), 0);
  ASSERT_EQ(run({"plot", "--in", path("e.json"), "--samples", path("s.csv"), "--out", path("m.svg")}), 0);
  for (const char* f : {"d.svg", "m.svg"}) {
    const std::string svg = io::read_file(path(f));
    EXPECT_EQ(svg.rfind("<svg", 0), 0u) << f;
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
  }
}

TEST_F(CliTest, SweepThreadsAgree) {
  const std::vector<std::string> base{"sweep", "--density", "example1", "--n-list", "500,1000", "--trials", "3",
                                      "--seed", "4", "--fine-m", "1024"};
  auto with = [&](std::vector<std::string> extra) {
    auto args = base;
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
  };
  ASSERT_EQ(run(with({"--threads", "1", "--out", path("a.csv")})), 0);
  ASSERT_EQ(run(with({"--threads", "3", "--out", path("b.csv")})), 0);
  EXPECT_EQ(io::read_file(path("a.csv")), io::read_file(path("b.csv")));
  EXPECT_EQ(io::read_file(path("a.csv.summary.json")), io::read_file(path("b.csv.summary.json")));
  ASSERT_EQ(run(with({"--with-timing", "--out", path("t.csv")})), 0);
  EXPECT_NE(io::read_file(path("t.csv")).find("wall_seconds"), std::string::npos);
  EXPECT_EQ(run({"sweep", "--density", "example1", "--n-list", "10,x", "--out", path("c.csv")}), cli::kUsageError);
}

}  // namespace
}  // namespace persmode
