#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cliquefactor/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "cliquefactor");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cliquefactor::cli::dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("cliquefactor-cli-" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, ExitCodes) {
  const auto complete = write("complete.json", run({"gen", "--mode", "complete", "-n", "3"}).out);
  const auto extremal = write("extremal.json", run({"gen", "--mode", "extremal", "-n", "3"}).out);
  EXPECT_EQ(run({"lp", complete}).code, 0);
  EXPECT_EQ(run({"lp", extremal}).code, 1);
  EXPECT_EQ(run({"exact", complete}).code, 0);
  EXPECT_EQ(run({"exact", extremal}).code, 1);
  EXPECT_EQ(run({"check", complete}).code, 0);
  EXPECT_EQ(run({"lp", path("missing.json")}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"lp"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(Cli, ParseErrorsNameTheLine) {
  const auto bad = write("bad.txt", "3 2 2 2 2\nc0.v0 c1.v0\nc0.v0 c0.v1\n");
  const auto r = run({"check", bad});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
}

TEST_F(Cli, ConfigKeysAreChecked) {
  const auto inst = write("c.json", run({"gen", "-n", "3"}).out);
  const auto unknown = write("unknown.json", "{\"cliqueCap\": 10, \"typo\": 1}");
  EXPECT_EQ(run({"lp", inst, "--config", unknown}).code, 2);
  const auto wrong = write("wrong.json", "{\"cliqueCap\": \"many\"}");
  EXPECT_EQ(run({"lp", inst, "--config", wrong}).code, 2);
  const auto fine = write("fine.json", "{\"cliqueCap\": 1000}");
  EXPECT_EQ(run({"lp", inst, "--config", fine}).code, 0);
}

TEST_F(Cli, ArtifactsAndRunRecord) {
  const auto out = path("gen-out");
  ASSERT_EQ(run({"gen", "--mode", "codegree", "-n", "12", "--target", "9", "--seed", "4", "--out", out}).code, 0);
  EXPECT_TRUE(fs::exists(fs::path(out) / "instance.json"));
  const auto record = slurp(fs::path(out) / "runrecord.json");
  EXPECT_NE(record.find("\"subcommand\": \"gen\""), std::string::npos);
  EXPECT_NE(record.find("\"instanceHash\""), std::string::npos);
  EXPECT_EQ(record.find("wallClockMs"), std::string::npos);
  const auto timed = path("timed");
  ASSERT_EQ(run({"lp", (fs::path(out) / "instance.json").string(), "--timing", "--out", timed}).code, 0);
  EXPECT_NE(slurp(fs::path(timed) / "runrecord.json").find("wallClockMs"), std::string::npos);
}

TEST_F(Cli, EveryWorkflowIsDeterministic) {
  const auto host = write("host.json", run({"gen", "--mode", "codegree", "-n", "12", "--target", "10", "--seed", "1"}).out);
  const auto general = write("general.json", run({"gen", "--mode", "general", "-n", "12", "-k", "3", "--edge-prob", "0.6"}).out);
  const auto scan_cfg = write("scan.json", "{\"nValues\": [3, 6], \"deltaFractions\": [0.67], \"samples\": 2}");
  const std::vector<std::vector<std::string>> commands = {
      {"gen", "--mode", "random", "-n", "4", "--seed", "3"},
      {"check", host},
      {"lp", host},
      {"exact", host, "--mode", "count"},
      {"absorb", host, "--leftover-capacity", "3", "--seed", "5"},
      {"approx", host, "--seed", "5"},
      {"partition", general, "-t", "3", "--seed", "5"},
      {"pipeline", host, "--seed", "5"},
      {"scan", "--config", scan_cfg, "--seed", "5"},
  };
  for (std::size_t i = 0; i < commands.size(); ++i) {
    std::string first;
    for (int rep = 0; rep < 2; ++rep) {
      auto args = commands[i];
      const auto out = path("det-" + std::to_string(i) + "-" + std::to_string(rep));
      args.push_back("--out");
      args.push_back(out);
      const auto r = run(args);
      ASSERT_NE(r.code, 2) << commands[i][0] << ": " << r.err;
      std::string all;
      for (const auto& name : {"instance.json", "result.json", "scan.csv", "runrecord.json"}) {
        const auto file = fs::path(out) / name;
        if (fs::exists(file)) all += std::string(name) + "\n" + slurp(file);
      }
      // The run record names its own directory; compare with that masked.
      const auto pos = all.find(out);
      if (pos != std::string::npos) all.replace(pos, out.size(), "<out>");
      if (rep == 0) {
        first = all;
      } else {
        EXPECT_EQ(all, first) << commands[i][0];
      }
    }
  }
}
