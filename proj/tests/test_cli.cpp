#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "support.hpp"

using affdim::testing::parse_report;
using affdim::testing::run_command;

namespace {

const std::string kCli = AFFDIM_CLI_PATH;

affdim::testing::CommandResult cli(const std::string& args) { return run_command(kCli + " " + args + " 2>/dev/null"); }

std::vector<std::vector<std::string>> table(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, '\t')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("analyze sec44") {
  const auto r = cli("analyze --example sec44");
  CHECK(r.exit_code == 0);
  const auto rep = parse_report(r.out);
  REQUIRE(rep.count("measure"));
  CHECK(rep.at("measure").at("fired_theorem") == "T4.5-app");
  CHECK(std::stod(rep.at("measure").at("certified_value")) == doctest::Approx(1.4273).epsilon(5e-4));
}

TEST_CASE("analyze phi-c at c = 0.4 quotes the closed form") {
  const auto r = cli("analyze --example phi-c --param c=0.4 --no-attractor");
  CHECK(r.exit_code == 2);
  const auto rep = parse_report(r.out);
  REQUIRE(rep.count("closed form"));
  CHECK(rep.at("closed form").at("expression") == "2 + log 2c/log 3");
  CHECK(std::stod(rep.at("closed form").at("value")) == doctest::Approx(2.0 + std::log(0.8) / std::log(3.0)));
}

TEST_CASE("input errors exit with 1") {
  const std::string path = "cli_bad_config.txt";
  {
    std::ofstream f(path);
    f << "[maps]\n1/2 0 0 1/2 0 0\n1/2 0 0 x 0 0\n";
  }
  const auto r = run_command(kCli + " analyze --config " + path + " 2>&1");
  CHECK(r.exit_code == 1);
  CHECK(r.out.find("line 3") != std::string::npos);
  CHECK(cli("analyze").exit_code == 1);
  CHECK(cli("analyze --example nope").exit_code == 1);
  CHECK(cli("analyze --example sec44 --param c=1").exit_code == 1);
}

TEST_CASE("pressure table") {
  const auto r = cli("pressure --example sec44 --n 2,4,8");
  CHECK(r.exit_code == 0);
  const auto t = table(r.out);
  REQUIRE(t.size() == 4);
  CHECK(t[0] == std::vector<std::string>{"n", "root"});
  const double r2 = std::stod(t[1][1]), r4 = std::stod(t[2][1]), r8 = std::stod(t[3][1]);
  CHECK(r2 >= r4);
  CHECK(r4 >= r8);
  CHECK(r8 > 1.4273);
  CHECK(r8 < 1.45);
}

TEST_CASE("hochman rows for the binary IFS") {
  const auto r = cli("hochman --maps \"1/2,0;1/2,1/2\" --n 1..6");
  CHECK(r.exit_code == 0);
  const auto t = table(r.out);
  REQUIRE(t.size() == 7);
  for (int n = 1; n <= 6; ++n) CHECK(t[static_cast<std::size_t>(n)][1] == "1/" + std::to_string(1 << n));
  CHECK(r.out.find("# verdict: TrendBounded") != std::string::npos);
}

TEST_CASE("ssc on the worked example") {
  const auto r = cli("ssc --example sec44");
  CHECK(r.exit_code == 0);
  const auto rep = parse_report(r.out);
  CHECK(rep.at("").at("holds") == "true");
  CHECK(std::stod(rep.at("").at("kappa")) > 0.0);
  CHECK(std::stod(rep.at("").at("margin")) > 0.0);
  CHECK(cli("ssc --example phi-c").exit_code == 2);
}

TEST_CASE("lyapunov and boxdim tables") {
  const auto l = table(cli("lyapunov --example sec44").out);
  REQUIRE(l.size() == 2);
  CHECK(l[0][0] == "chi_s");
  CHECK(std::stod(l[1][0]) == doctest::Approx(std::log(1.5)));
  const auto b = cli("boxdim --example sec44 --points 20000 --kmin 2 --kmax 6");
  CHECK(b.exit_code == 0);
  CHECK(table(b.out).size() == 6);
  CHECK(b.out.find("# slope: ") != std::string::npos);
}

TEST_CASE("directions table") {
  const auto r = cli("directions --example sec44 --count 50 --depth 200");
  CHECK(r.exit_code == 0);
  CHECK(table(r.out).size() == 51);
  CHECK(r.out.find("# backward non-overlapping: holds") != std::string::npos);
}

TEST_CASE("seeded commands are reproducible") {
  const auto a = cli("lyapunov --example hl-demo --n 200 --trials 50 --seed 9");
  const auto b = cli("lyapunov --example hl-demo --n 200 --trials 50 --seed 9");
  const auto c = cli("lyapunov --example hl-demo --n 200 --trials 50 --seed 10");
  CHECK(a.out == b.out);
  CHECK(a.out != c.out);
}

TEST_CASE("render writes a P6 file") {
  const std::string path = "cli_render.ppm";
  const auto r = cli("render --example phi-c --width 64 --height 64 --depth 3 --out " + path);
  CHECK(r.exit_code == 0);
  std::ifstream f(path, std::ios::binary);
  std::string head(15, '\0');
  f.read(head.data(), 15);
  CHECK(head.rfind("P6\n64 64\n255\n", 0) == 0);
  CHECK(cli("render --example phi-c --depth 12 --out " + path).exit_code == 1);
  CHECK(cli("render --example phi-c").exit_code == 1);
}
