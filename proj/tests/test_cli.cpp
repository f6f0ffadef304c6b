#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <regex>
#include <string>

#include "veinid/dataset.hpp"
#include "veinid/pnm.hpp"
#include "veinid/template_io.hpp"

using namespace veinid;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("veinid_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  CliResult run(const std::string& args) const {
    const auto out = path("stdout.txt");
    const auto err = path("stderr.txt");
    const std::string cmd = std::string(VEINID_CLI_PATH) + " " + args + " >" + out + " 2>" + err;
    const int status = std::system(cmd.c_str());
    CliResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = detail::read_text_file(out);
    r.err = detail::read_text_file(err);
    return r;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, PipelineOnSyntheticImage) {
  write_dataset(path("ds"), 42, 1, 1);
  const auto r = run("pipeline --input " + path("ds/id0_s0.ppm") + " --output " + path("a.vtpl"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto t = read_vtpl(path("a.vtpl"));
  EXPECT_GE(t.size(), 1u);
  EXPECT_EQ(t.source_id, path("ds/id0_s0.ppm"));
}

TEST_F(Cli, TruncatedImageIsAnInputError) {
  write_dataset(path("ds"), 42, 1, 1);
  auto bytes = detail::read_text_file(path("ds/id0_s0.ppm"));
  bytes.resize(bytes.size() / 2);
  detail::write_text_file(path("cut.ppm"), bytes);
  const auto r = run("pipeline --input " + path("cut.ppm") + " --output " + path("x.vtpl"));
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(r.err.empty());
  EXPECT_FALSE(fs::exists(path("x.vtpl")));
}

TEST_F(Cli, BlackImageIsDegenerate) {
  pnm::write_ppm(path("black.ppm"), ColorImage(160, 120));
  const auto r = run("pipeline --input " + path("black.ppm") + " --output " + path("x.vtpl"));
  EXPECT_EQ(r.code, 3) << r.err;
  EXPECT_NE(r.err.find("error:"), std::string::npos);
}

TEST_F(Cli, MatchDecisions) {
  write_dataset(path("ds"), 42, 2, 1);
  ASSERT_EQ(run("pipeline --input " + path("ds/id0_s0.ppm") + " --output " + path("a.vtpl")).code, 0);
  ASSERT_EQ(run("pipeline --input " + path("ds/id1_s0.ppm") + " --output " + path("b.vtpl")).code, 0);

  auto r = run("match --probe " + path("a.vtpl") + " --gallery " + path("a.vtpl"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "V=100.0000 decision=accept\n");

  r = run("match --probe " + path("a.vtpl") + " --gallery " + path("b.vtpl"));
  EXPECT_EQ(r.code, 1) << r.out;
  EXPECT_TRUE(std::regex_match(r.out, std::regex(R"(V=\d+\.\d{4} decision=reject\n)"))) << r.out;

  // Accepting everything turns the impostor into an accept.
  r = run("match --probe " + path("a.vtpl") + " --gallery " + path("b.vtpl") +
          " --t1 1000 --t2 180 --threshold 0");
  EXPECT_EQ(r.code, 0) << r.out;

  r = run("match --probe " + path("missing.vtpl") + " --gallery " + path("a.vtpl"));
  EXPECT_EQ(r.code, 2);
}

TEST_F(Cli, SynthLayoutAndDeterminism) {
  auto r = run("synth --seed 42 --identities 2 --samples 2 --outdir " + path("one"));
  ASSERT_EQ(r.code, 0) << r.err;
  ASSERT_EQ(run("synth --seed 42 --identities 2 --samples 2 --outdir " + path("two")).code, 0);
  int files = 0;
  for (const auto& e : fs::directory_iterator(path("one"))) {
    ++files;
    const auto name = e.path().filename().string();
    EXPECT_TRUE(std::regex_match(name, std::regex(R"(id[01]_s[01]\.(ppm|gt))"))) << name;
    EXPECT_EQ(detail::read_text_file(e.path().string()),
              detail::read_text_file((fs::path(path("two")) / name).string()));
  }
  EXPECT_EQ(files, 8);
}

TEST_F(Cli, SynthRejectsBadCounts) {
  const auto r = run("synth --identities 0 --outdir " + path("none"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("--identities"), std::string::npos);  // usage text
  EXPECT_EQ(run("synth --samples -1 --outdir " + path("none")).code, 2);
  EXPECT_EQ(run("synth --outdir").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
}

TEST_F(Cli, EvalSmallDataset) {
  ASSERT_EQ(run("synth --seed 7 --identities 3 --samples 2 --outdir " + path("ds")).code, 0);
  auto r = run("eval --dataset " + path("ds") + " --csv " + path("a.csv"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(std::regex_match(
      r.out, std::regex(R"(best_T=\d+ accuracy=\d+\.\d{4} far=\d+\.\d{4} frr=\d+\.\d{4}\n)")))
      << r.out;
  const auto csv = detail::read_text_file(path("a.csv"));
  EXPECT_EQ(detail::split_lines(csv).size(), 102u);
  EXPECT_EQ(csv.rfind("threshold,far,frr,gar,accuracy\n0,", 0), 0u);

  ASSERT_EQ(run("eval --dataset " + path("ds") + " --csv " + path("b.csv")).code, 0);
  EXPECT_EQ(detail::read_text_file(path("b.csv")), csv);
}

TEST_F(Cli, EvalWithConfig) {
  ASSERT_EQ(run("synth --seed 7 --identities 2 --samples 2 --outdir " + path("ds")).code, 0);
  detail::write_text_file(path("ok.cfg"), "# tighter matching\nt1 = 6\n");
  EXPECT_EQ(run("eval --dataset " + path("ds") + " --config " + path("ok.cfg") + " --csv " + path("a.csv")).code, 0);
  detail::write_text_file(path("bad.cfg"), "t9 = 6\n");
  const auto r = run("eval --dataset " + path("ds") + " --config " + path("bad.cfg"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("t9"), std::string::npos);
}

TEST_F(Cli, EvalNeedsEnoughData) {
  ASSERT_EQ(run("synth --seed 7 --identities 1 --samples 1 --outdir " + path("ds")).code, 0);
  EXPECT_EQ(run("eval --dataset " + path("ds") + " --csv " + path("a.csv")).code, 3);
  EXPECT_EQ(run("eval --dataset " + path("nowhere") + " --csv " + path("a.csv")).code, 2);
}
