#include "support.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <sstream>
#include <sys/wait.h>

namespace affdim::testing {

IfsSystem random_triangular(Gen& g, TriangularSplit kind) {
  const auto n = static_cast<std::size_t>(g.integer(2, 3));
  std::vector<AffineMap> maps;
  for (std::size_t i = 0; i < n; ++i) {
    double big = g.uniform(0.3, 0.7);
    double small = big * g.uniform(0.3, 0.8);
    const double b = g.uniform(-0.25, 0.25);
    double a = big, c = small;
    if (kind == TriangularSplit::CDominant) std::swap(a, c);
    a *= g.sign();
    c *= g.sign();
    maps.push_back({{a, 0.0, b, c}, {g.uniform(0.0, 0.5), g.uniform(0.0, 0.5)}});
  }
  return IfsSystem(maps, "random triangular");
}

BernoulliWeights random_weights(Gen& g, std::size_t n) {
  std::vector<double> m(n);
  for (auto& x : m) x = g.uniform(0.2, 1.0);
  return BernoulliWeights::from_masses(m);
}

LineIfs random_rational_line_ifs(Gen& g) {
  static const std::array<Rational, 6> ratios{Rational(1, 2), Rational(-1, 2), Rational(1, 3),
                                              Rational(2, 3), Rational(1, 4), Rational(-1, 3)};
  const auto n = static_cast<std::size_t>(g.integer(2, 3));
  std::vector<ExactLineMap> maps;
  for (std::size_t i = 0; i < n; ++i) {
    const Rational beta = ratios[static_cast<std::size_t>(g.integer(0, 2 + static_cast<long long>(i)))];
    const Rational gamma(g.integer(-12, 12), g.integer(1, 7));
    maps.push_back({beta, gamma});
  }
  return LineIfs(maps);
}

IfsSystem random_grid_system(Gen& g) {
  const auto n = static_cast<std::size_t>(g.integer(2, 4));
  std::vector<int> cells{0, 1, 2, 3, 4, 5, 6, 7, 8};
  std::vector<ExactAffine> maps;
  for (std::size_t i = 0; i < n; ++i) {
    const auto pick = static_cast<std::size_t>(g.integer(0, static_cast<long long>(cells.size() - i - 1)));
    std::swap(cells[pick], cells[cells.size() - 1 - i]);
    const int cell = cells[cells.size() - 1 - i];
    // |a11| + |a12| and |a21| + |a22| stay below 1/4 < 1/3
    std::array<Rational, 4> a;
    for (auto& x : a) x = Rational(g.integer(-5, 5), 40);
    if (a[0] == 0) a[0] = Rational(1, 8);
    if (a[3] == 0) a[3] = Rational(-1, 8);
    if (a[0] * a[3] - a[1] * a[2] == 0) a[1] = 0, a[2] = 0;
    // image of the unit square spans [lo, lo + width] in each coordinate
    const Rational lo_x = std::min<Rational>(a[0], 0) + std::min<Rational>(a[1], 0);
    const Rational lo_y = std::min<Rational>(a[2], 0) + std::min<Rational>(a[3], 0);
    const Rational w_x = abs(a[0]) + abs(a[1]), w_y = abs(a[2]) + abs(a[3]);
    const Rational cx = Rational(2 * (cell % 3) + 1, 6), cy = Rational(2 * (cell / 3) + 1, 6);
    maps.push_back({a, {cx - w_x / 2 - lo_x, cy - w_y / 2 - lo_y}});
  }
  return IfsSystem(maps, "random grid");
}

std::vector<Polygon> cylinders(const IfsSystem& sys, const Polygon& o, int depth) {
  std::vector<AffineMap> level{AffineMap{Mat2::identity(), {}}};
  for (int d = 0; d < depth; ++d) {
    std::vector<AffineMap> next;
    for (const auto& f : level)
      for (const auto& g : sys.maps()) next.push_back(compose(f, g));
    level = std::move(next);
  }
  std::vector<Polygon> out;
  for (const auto& f : level) out.push_back(image(f, o));
  return out;
}

CommandResult run_command(const std::string& command) {
  CommandResult r;
  const auto t0 = std::chrono::steady_clock::now();
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::map<std::string, std::map<std::string, std::string>> parse_report(const std::string& text) {
  std::map<std::string, std::map<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line, section;
  while (std::getline(in, line)) {
    if (line.size() > 2 && line.front() == '[' && line.back() == ']') {
      section = line.substr(1, line.size() - 2);
      continue;
    }
    const auto colon = line.find(": ");
    if (colon == std::string::npos) continue;
    std::string key = line.substr(0, colon), value = line.substr(colon + 2);
    // "quantity: name = value" is keyed by its name
    const auto eq = value.find(" = ");
    if (key == "quantity" && eq != std::string::npos) {
      key = "quantity:" + value.substr(0, eq);
      value = value.substr(eq + 3);
    }
    out[section].emplace(key, value);
  }
  return out;
}

}  // namespace affdim::testing
