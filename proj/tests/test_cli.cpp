#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(CUBECOVER_CLI) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  while (std::size_t got = std::fread(buf.data(), 1, buf.size(), p)) r.out.append(buf.data(), got);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

bool has(const Run& r, const std::string& text) { return r.out.find(text) != std::string::npos; }

const std::string kBundledCover = std::string(CUBECOVER_DATA_DIR) + "/f6_k20_cover49.txt";

std::filesystem::path temp_file(const std::string& name, const std::string& contents) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << contents;
  return path;
}

}  // namespace

TEST(Cli, Weight) {
  auto r = run("weight --n 6 --coeffs 1,1,1,0,-1,-1");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has(r, "weight=1")) << r.out;
  EXPECT_TRUE(has(r, "covered_points=20")) << r.out;
  auto half = run("weight --n 2 --coeffs 1/2,1/2");
  EXPECT_EQ(half.code, 0);
  EXPECT_TRUE(has(half, "weight=1/2")) << half.out;
}

TEST(Cli, Oracle) {
  auto r = run("oracle --n 3 --coeffs 2,1,1");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has(r, "gbr=(4,2,0)")) << r.out;
  EXPECT_TRUE(has(r, "MATCH")) << r.out;
  EXPECT_FALSE(has(r, "MISMATCH")) << r.out;
  EXPECT_EQ(run("oracle --n 11 --coeffs 1,1,1,1,1,1,1,1,1,1,1").code, 3);
}

TEST(Cli, Enumerate) {
  auto r = run("enumerate --n 4 --kind maximal");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has(r, "count=95")) << r.out;
  auto w = run("enumerate --n 5 --kind weight1");
  EXPECT_TRUE(has(w, "count=126")) << w.out;
  EXPECT_EQ(run("enumerate --n 6 --kind maximal").code, 3);
}

TEST(Cli, Bounds) {
  auto r = run("bounds --n 5 --k 67");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has(r, "final_lower=154")) << r.out;
  auto j = run("bounds --n 6 --k 20 --json");
  EXPECT_EQ(j.code, 0);
  EXPECT_TRUE(has(j, "\"lp_bound\"")) << j.out;
}

TEST(Cli, Solve) {
  auto r = run("solve --n 3 --k 1 --space maximal");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has(r, "objective=3")) << r.out;
  EXPECT_TRUE(has(r, "status=Optimal")) << r.out;
  auto j = run("solve --n 3 --k 1 --space maximal --json");
  EXPECT_EQ(j.code, 0);
  EXPECT_TRUE(has(j, "\"objective\":3")) << j.out;
  EXPECT_TRUE(has(j, "\"status\":\"Optimal\"")) << j.out;
  EXPECT_TRUE(has(j, "\"time_ms\":null")) << j.out;
  auto b = run("solve --n 4 --k 3 --space maximal --budget-nodes 2");
  EXPECT_EQ(b.code, 4) << b.out;
}

TEST(Cli, SolveIsDeterministic) {
  auto a = run("solve --n 3 --k 3 --space maximal");
  auto b = run("solve --n 3 --k 3 --space maximal");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, SolveWritesVerifiableWitness) {
  auto path = std::filesystem::temp_directory_path() / "cubecover_cli_witness.txt";
  auto r = run("solve --n 3 --k 2 --space maximal --out " + path.string());
  ASSERT_EQ(r.code, 0) << r.out;
  auto v = run("verify --n 3 --k 2 --cover " + path.string());
  EXPECT_EQ(v.code, 0) << v.out;
  EXPECT_TRUE(has(v, "PASS"));
  std::filesystem::remove(path);
}

TEST(Cli, VerifyBundledCover) {
  auto r = run("verify --n 6 --k 20 --cover " + kBundledCover + " --accounting");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has(r, "PASS")) << r.out;
  EXPECT_TRUE(has(r, "planes=49")) << r.out;
  EXPECT_TRUE(has(r, "coverage[20]=63")) << r.out;
  auto fail = run("verify --n 6 --k 21 --cover " + kBundledCover);
  EXPECT_EQ(fail.code, 1);
  EXPECT_TRUE(has(fail, "FAIL")) << fail.out;
}

TEST(Cli, ParseErrors) {
  EXPECT_EQ(run("weight --n 3 --coeffs 1,1").code, 2);
  EXPECT_EQ(run("weight --n 2 --coeffs 1,q").code, 2);
  EXPECT_EQ(run("nonsense").code, 2);
  auto bad = temp_file("cubecover_cli_bad.txt", "1 1\n1 x\n");
  auto r = run("verify --n 2 --k 1 --cover " + bad.string());
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(has(r, "line 2")) << r.out;
  std::filesystem::remove(bad);
}

TEST(Cli, Table1) {
  auto r = run("table --which table1 --max-n 4");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has(r, "table1=MATCH")) << r.out;
}

TEST(Cli, CompositionTable) {
  auto r = run("table --which thm14 --n 6 --k 20,40,60");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has(r, "n=6 k=20 lower=49 upper=49 status=exact f=49")) << r.out;
  EXPECT_TRUE(has(r, "n=6 k=40 lower=98 upper=98 status=exact f=98")) << r.out;
  EXPECT_TRUE(has(r, "n=6 k=60 lower=147 upper=147 status=exact f=147")) << r.out;
}
