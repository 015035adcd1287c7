#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "looplie/json_io.hpp"

namespace fs = std::filesystem;
using looplie::io::Json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(LOOPLIE_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("looplie_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write(const std::string& name, const std::string& text) {
  const auto path = scratch() / name;
  std::ofstream(path) << text;
  return path.string();
}

const char* kDiagonalTorus = R"({"group": {"kind": "GL_R", "n": 2}, "genus": 1,
  "images": {"a1": [[2, 0], [0, 0.5]], "b1": [[3, 0], [0, 0.333333333333333333]]}})";

}  // namespace

TEST_CASE("bracket on the torus") {
  const auto in = write("torus.json", R"({"genus": 1, "curves": {"a": "a1", "b": "b1", "a2": "a1 a1"}})");
  auto r = run("bracket " + in + " --gamma a --lambda b --seed 1");
  CHECK(r.code == 0);
  CHECK(r.out == "[{\"coef\":\"1\",\"word\":\"a1 b1\"}]\n");
  r = run("bracket " + in + " --gamma a --lambda a2");
  CHECK(r.code == 0);
  CHECK(r.out == "[]\n");
  r = run("bracket " + in + " --unoriented");
  CHECK(r.code == 0);
  const auto j = Json::parse(r.out);
  REQUIRE(j.size() == 2);
  CHECK(j[0]["coef"] == "1/2");
  CHECK(j[1]["coef"] == "-1/2");
}

TEST_CASE("bracket schema errors exit 2") {
  CHECK(run("bracket " + write("bad1.json", "{not json")).code == 2);
  CHECK(run("bracket " + write("bad2.json", R"({"genus": 1, "curves": {"x": "a3", "y": "a1"}})")).code == 2);
  CHECK(run("bracket " + write("bad3.json", R"({"genus": 1, "curves": {"x": "a1"}})")).code == 2);
  CHECK(run("bracket /nonexistent/file.json").code == 2);
  CHECK(run("bracket").code == 2);
}

TEST_CASE("holonomy of the diagonal torus representation") {
  const auto rep = write("diag.json", kDiagonalTorus);
  auto r = run("holonomy --rep " + rep + " --word \"a1 b1\"");
  CHECK(r.code == 0);
  auto j = Json::parse(r.out);
  CHECK(j["trace"].get<double>() == doctest::Approx(6.1666667).epsilon(1e-8));
  r = run("holonomy --rep " + rep);
  j = Json::parse(r.out);
  CHECK(j["trace"].get<double>() == 2.0);
  CHECK(j["word"] == "");
}

TEST_CASE("perturbed holonomy reports the series diagnostics") {
  const auto rep = write("diag2.json", kDiagonalTorus);
  const auto pert = write("pert.json", R"({"a1": [[0.01, 0.02], [-0.03, 0.0]], "b1": [[0.0, -0.01], [0.02, 0.01]]})");
  const auto r = run("holonomy --rep " + rep + " --word \"a1 b1 A1\" --perturbation " + pert);
  CHECK(r.code == 0);
  const auto j = Json::parse(r.out);
  CHECK(j["remainder_bound"].get<double>() <= 1e-9);
  CHECK(j["rk4_delta"].get<double>() <= 1e-6);
  CHECK(j["series_order"] == 12);
}

TEST_CASE("relator violation exits 4") {
  const auto rep = write("nc.json", R"({"group": {"kind": "GL_R", "n": 2}, "genus": 1,
    "images": {"a1": [[1, 1], [0, 1]], "b1": [[1, 0], [1, 0.999]]}})");
  CHECK(run("holonomy --rep " + rep + " --word a1").code == 4);
}

TEST_CASE("sample-rep output feeds holonomy") {
  const auto r = run("sample-rep --group GL_R:2 --genus 2 --seed 5");
  REQUIRE(r.code == 0);
  const auto j = Json::parse(r.out);
  CHECK(j["relator_residual"].get<double>() <= 1e-9);
  const auto rep = write("sampled.json", r.out);
  const auto h = run("holonomy --rep " + rep + " --word \"A1 B1 a1 b1 A2 B2 a2 b2\"");
  CHECK(h.code == 0);
  CHECK(Json::parse(h.out)["trace"].get<double>() == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(run("sample-rep --group GL_R:2 --genus 2 --seed 5").out == r.out);
}

TEST_CASE("verify suites and exit codes") {
  auto r = run("verify variation --seed 1 --trials 50");
  CHECK(r.code == 0);
  const auto last = r.out.substr(r.out.rfind('\n', r.out.size() - 2) + 1);
  const auto summary = Json::parse(last);
  CHECK(summary["pass"] == true);
  CHECK(summary["max_residual"].get<double>() <= 1e-5);

  r = run("verify chen --trials 1");
  CHECK(r.code == 0);
  CHECK(Json::parse(r.out.substr(0, r.out.find('\n')))["error"].get<double>() < 1e-12);

  CHECK(run("verify goldman-gl --genus 1 --trials 10").code == 0);
  CHECK(run("verify nonsense").code == 2);
  CHECK(run("verify variation --trials 3 --tol 0").code == 1);
}

TEST_CASE("verify output is byte-identical across runs and worker counts") {
  const auto a = run("verify jacobi --seed 9 --trials 6");
  const auto b = run("verify jacobi --seed 9 --trials 6 --parallel 3");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const auto c = run("--seed 10 verify jacobi --trials 6");
  CHECK(c.out != a.out);
}

TEST_CASE("--out writes the report to a file") {
  const auto path = (scratch() / "report.jsonl").string();
  const auto r = run("verify dgla --trials 2 --out " + path);
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(text == run("verify dgla --trials 2").out);
}

TEST_CASE("dgla-check on the toy instance and on a file") {
  auto r = run("dgla-check --group O_pq:3,0 --genus 2");
  CHECK(r.code == 0);
  CHECK(Json::parse(r.out)["pass"] == true);
  const auto bad = write("bad_dgla.json", R"({"d0": 1, "d1": 1,
    "differential": [[0, 0], [0, 0]], "bracket": [[[0, 0], [0, 0]], [[0, 0], [0, 0]]],
    "pairing": [[1, 0], [0, 1]]})");
  // ω symmetric on the odd part violates graded symmetry.
  CHECK(run("dgla-check " + bad).code == 1);
  CHECK(run("dgla-check " + write("bad_dgla2.json", R"({"d0": 1})")).code == 2);
}
