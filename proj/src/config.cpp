#include "affdim/config.hpp"

#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "affdim/error.hpp"
#include "affdim/rational.hpp"

namespace affdim {

using boost::multiprecision::cpp_int;

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

Rational parse_decimal(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (const auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view ex = s.substr(e + 1);
    s = s.substr(0, e);
    bool eneg = false;
    if (!ex.empty() && (ex.front() == '+' || ex.front() == '-')) {
      eneg = ex.front() == '-';
      ex.remove_prefix(1);
    }
    if (!all_digits(ex) || ex.size() > 6) throw Error(ErrorCode::ParseError, "bad exponent in '" + std::string(text) + "'");
    exponent = std::stol(std::string(ex));
    if (eneg) exponent = -exponent;
  }
  std::string digits;
  std::string_view whole = s, frac;
  if (const auto dot = s.find('.'); dot != std::string_view::npos) {
    whole = s.substr(0, dot);
    frac = s.substr(dot + 1);
  }
  if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)))
    throw Error(ErrorCode::ParseError, "not a number: '" + std::string(text) + "'");
  digits.append(whole);
  digits.append(frac);
  exponent -= static_cast<long>(frac.size());
  cpp_int mantissa(digits);
  Rational r(mantissa);
  const cpp_int scale = boost::multiprecision::pow(cpp_int(10), static_cast<unsigned>(std::labs(exponent)));
  r = exponent >= 0 ? r * Rational(scale) : r / Rational(scale);
  return negative ? Rational(-r) : r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) throw Error(ErrorCode::ParseError, "empty number");
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const Rational p = parse_decimal(trim(s.substr(0, slash)));
    const Rational q = parse_decimal(trim(s.substr(slash + 1)));
    if (q == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + std::string(s) + "'");
    return p / q;
  }
  return parse_decimal(s);
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

std::string to_string(const Rational& r) {
  const cpp_int num = boost::multiprecision::numerator(r);
  const cpp_int den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

namespace {

struct Line {
  int number;
  std::string_view text;
};

[[noreturn]] void fail(int line, const std::string& what) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

std::vector<std::string_view> fields(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (std::isspace(static_cast<unsigned char>(s[i])) || s[i] == ',')) ++i;
    const std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) && s[i] != ',') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

std::vector<Rational> numbers(const Line& line, std::string_view body) {
  std::vector<Rational> out;
  for (auto f : fields(body)) {
    try {
      out.push_back(parse_rational(f));
    } catch (const Error& e) {
      fail(line.number, e.what());
    }
  }
  return out;
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

SystemConfig parse_system(std::string_view text) {
  std::vector<Line> lines;
  {
    int number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t end = std::min(text.find('\n', pos), text.size());
      std::string_view raw = text.substr(pos, end - pos);
      ++number;
      if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
      raw = trim(raw);
      if (!raw.empty()) lines.push_back({number, raw});
      if (end == text.size()) break;
      pos = end + 1;
    }
  }

  std::string label;
  std::vector<ExactAffine> maps;
  std::optional<std::vector<Rational>> weights;
  std::vector<std::array<Rational, 2>> vertices;
  std::vector<ProjArc> forward, backward;
  std::optional<SubsystemSpec> subsystem;
  int weights_line = 0, polygon_line = 0, subsystem_line = 0;

  std::string section;
  for (const auto& line : lines) {
    const std::string_view t = line.text;
    if (t.front() == '[') {
      if (t.back() != ']') fail(line.number, "unterminated section header");
      section = std::string(trim(t.substr(1, t.size() - 2)));
      static const std::vector<std::string> known = {"maps", "weights", "polygon", "forward_cone", "backward_cone",
                                                     "subsystem"};
      if (std::find(known.begin(), known.end(), section) == known.end()) fail(line.number, "unknown section [" + section + "]");
      if (section == "subsystem" && !subsystem) {
        subsystem.emplace();
        subsystem_line = line.number;
      }
      continue;
    }
    const auto eq = t.find('=');
    if (section.empty() || section == "subsystem") {
      if (eq == std::string_view::npos) fail(line.number, "expected key = value");
      const std::string key(trim(t.substr(0, eq)));
      const std::string_view value = trim(t.substr(eq + 1));
      if (section.empty()) {
        if (key != "label") fail(line.number, "unknown key '" + key + "'");
        label = std::string(value);
        continue;
      }
      const auto vals = numbers(line, value);
      for (const auto& v : vals)
        if (denominator(v) != 1 || v < 1) fail(line.number, "'" + key + "' takes positive integers");
      if (key == "exclude") {
        for (const auto& v : vals) subsystem->exclude.push_back(static_cast<std::size_t>(v.convert_to<long>()) - 1);
      } else if (key == "depths") {
        for (const auto& v : vals) subsystem->depths.push_back(static_cast<int>(v.convert_to<long>()));
      } else {
        fail(line.number, "unknown key '" + key + "'");
      }
      continue;
    }
    if (section == "maps") {
      const auto v = numbers(line, t);
      if (v.size() != 6) fail(line.number, "map row needs 6 numbers, got " + std::to_string(v.size()));
      maps.push_back({{v[0], v[1], v[2], v[3]}, {v[4], v[5]}});
    } else if (section == "weights") {
      if (weights) fail(line.number, "weights given twice");
      weights = numbers(line, t);
      weights_line = line.number;
    } else if (section == "polygon") {
      const auto v = numbers(line, t);
      if (v.size() != 2) fail(line.number, "polygon vertex needs 2 numbers");
      if (polygon_line == 0) polygon_line = line.number;
      vertices.push_back({v[0], v[1]});
    } else {
      const auto v = numbers(line, t);
      if (v.size() != 2) fail(line.number, "cone arc needs start and end angles");
      try {
        const ProjArc arc(ProjPoint(to_double(v[0])), ProjPoint(to_double(v[1])));
        (section == "forward_cone" ? forward : backward).push_back(arc);
      } catch (const Error& e) {
        fail(line.number, e.what());
      }
    }
  }

  if (maps.size() < 2) throw Error(ErrorCode::ParseError, "need at least 2 maps, got " + std::to_string(maps.size()));
  SystemConfig cfg;
  try {
    cfg.system = IfsSystem(std::move(maps), label);
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, std::string("invalid maps: ") + e.what());
  }
  if (weights) {
    if (weights->size() != cfg.system.size())
      fail(weights_line, "expected " + std::to_string(cfg.system.size()) + " weights, got " + std::to_string(weights->size()));
    Rational sum = 0;
    std::vector<double> p;
    for (const auto& w : *weights) {
      if (w <= 0) fail(weights_line, "weights must be positive");
      sum += w;
      p.push_back(to_double(w));
    }
    if (abs(sum - 1) > Rational(1, 1000000000000LL)) fail(weights_line, "weights must sum to one");
    cfg.weights = BernoulliWeights(std::move(p));
    cfg.exact_weights = std::move(weights);
  }
  if (!vertices.empty()) {
    Polygon poly(std::move(vertices));
    try {
      poly.validate();
    } catch (const Error& e) {
      fail(polygon_line, e.what());
    }
    cfg.polygon = std::move(poly);
  }
  try {
    if (!forward.empty()) cfg.forward_cone = Multicone(forward);
    if (!backward.empty()) cfg.backward_cone = Multicone(backward);
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (subsystem) {
    for (std::size_t e : subsystem->exclude)
      if (e >= cfg.system.size()) fail(subsystem_line, "excluded symbol out of range");
    cfg.subsystem = std::move(subsystem);
  }
  return cfg;
}

std::string serialize_system(const SystemConfig& cfg) {
  std::ostringstream os;
  if (!cfg.system.label().empty()) os << "label = " << cfg.system.label() << "\n";
  os << "[maps]\n";
  if (cfg.system.has_exact()) {
    for (const auto& f : *cfg.system.exact())
      os << to_string(f.a[0]) << " " << to_string(f.a[1]) << " " << to_string(f.a[2]) << " " << to_string(f.a[3]) << " "
         << to_string(f.t[0]) << " " << to_string(f.t[1]) << "\n";
  } else {
    for (const auto& f : cfg.system.maps())
      os << fmt_double(f.linear.a11) << " " << fmt_double(f.linear.a12) << " " << fmt_double(f.linear.a21) << " "
         << fmt_double(f.linear.a22) << " " << fmt_double(f.translation.x) << " " << fmt_double(f.translation.y) << "\n";
  }
  if (cfg.exact_weights) {
    os << "[weights]\n";
    for (std::size_t i = 0; i < cfg.exact_weights->size(); ++i) os << (i ? " " : "") << to_string((*cfg.exact_weights)[i]);
    os << "\n";
  } else if (cfg.weights) {
    os << "[weights]\n";
    for (std::size_t i = 0; i < cfg.weights->size(); ++i) os << (i ? " " : "") << fmt_double((*cfg.weights)[i]);
    os << "\n";
  }
  if (cfg.polygon) {
    os << "[polygon]\n";
    if (cfg.polygon->exact) {
      for (const auto& v : *cfg.polygon->exact) os << to_string(v[0]) << " " << to_string(v[1]) << "\n";
    } else {
      for (const auto& v : cfg.polygon->vertices) os << fmt_double(v.x) << " " << fmt_double(v.y) << "\n";
    }
  }
  auto cones = [&](const char* name, const std::optional<Multicone>& m) {
    if (!m) return;
    os << "[" << name << "]\n";
    for (const auto& a : m->arcs()) os << fmt_double(a.start().theta()) << " " << fmt_double(a.end().theta()) << "\n";
  };
  cones("forward_cone", cfg.forward_cone);
  cones("backward_cone", cfg.backward_cone);
  if (cfg.subsystem) {
    os << "[subsystem]\nexclude =";
    for (std::size_t e : cfg.subsystem->exclude) os << " " << e + 1;
    os << "\ndepths =";
    for (int d : cfg.subsystem->depths) os << " " << d;
    os << "\n";
  }
  return os.str();
}

SystemConfig load_system_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_system(buf.str());
}

std::vector<std::string> example_names() { return {"sec44", "phi-c", "hl-demo"}; }

IfsSystem phi_c_system(const Rational& c) {
  if (!(c > 0 && c < Rational(1, 2))) throw Error(ErrorCode::InvalidArgument, "phi-c needs 0 < c < 1/2");
  const Rational third(1, 3), half(1, 2), zero(0), one(1);
  auto map = [&](Rational b, Rational t1, Rational t2) { return ExactAffine{{third, zero, b, c}, {t1, t2}}; };
  return IfsSystem(std::vector<ExactAffine>{
                       map(zero, third, zero),
                       map(zero, third, one - c),
                       map(half - c, zero, half),
                       map(half - c, 2 * third, zero),
                       map(c - half, zero, half - c),
                       map(c - half, 2 * third, one - c),
                   },
                   "phi-c c=" + to_string(c));
}

namespace {

std::vector<Rational> uniform_rational(std::size_t n) { return std::vector<Rational>(n, Rational(1, static_cast<long>(n))); }

void attach_uniform(SystemConfig& cfg) {
  cfg.exact_weights = uniform_rational(cfg.system.size());
  cfg.weights = BernoulliWeights::uniform(cfg.system.size());
}

std::string param_or(const ParamMap& params, const std::string& key, const std::string& fallback) {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void reject_unknown(const ParamMap& params, const std::vector<std::string>& allowed) {
  for (const auto& [k, v] : params)
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      throw Error(ErrorCode::InvalidArgument, "unknown parameter '" + k + "'");
}

}  // namespace

SystemConfig builtin_example(const std::string& name, const ParamMap& params) {
  SystemConfig cfg;
  const Rational zero(0);
  if (name == "sec44") {
    reject_unknown(params, {});
    const Rational a(16, 81), c(2, 3);
    cfg.system = IfsSystem(std::vector<ExactAffine>{
                               {{a, zero, Rational(-2, 3), c}, {Rational(19, 54), Rational(47, 100)}},
                               {{a, zero, zero, c}, {Rational(1235, 2187), Rational(3, 10)}},
                               {{a, zero, Rational(2, 3), c}, {Rational(1721, 2187), Rational(-38, 81)}},
                           },
                           "sec44");
    // The parallelogram listed counterclockwise.
    cfg.polygon = Polygon(std::vector<std::array<Rational, 2>>{{zero, zero},
                                                               {Rational(19, 27), Rational(-1)},
                                                               {Rational(38, 27), zero},
                                                               {Rational(19, 27), Rational(1)}});
    attach_uniform(cfg);
    return cfg;
  }
  if (name == "phi-c") {
    reject_unknown(params, {"c"});
    const Rational c = parse_rational(param_or(params, "c", "1/4"));
    cfg.system = phi_c_system(c);
    cfg.polygon = unit_square();
    cfg.subsystem = SubsystemSpec{{3, 5}, {1, 2, 3}};
    attach_uniform(cfg);
    return cfg;
  }
  if (name == "hl-demo") {
    reject_unknown(params, {});
    // Positive matrices scaled until 1-bunched; the inverse images of the
    // second quadrant, in x/y slopes, are [1/8, 2] and [4, 8].
    cfg.system = IfsSystem(std::vector<ExactAffine>{
                               {{Rational(1, 5), Rational(1, 40), Rational(1, 40), Rational(1, 20)},
                                {Rational(1, 10), Rational(1, 10)}},
                               {{Rational(1, 200), Rational(1, 50), Rational(1, 200), Rational(1, 25)},
                                {Rational(7, 10), Rational(7, 10)}},
                           },
                           "hl-demo");
    cfg.polygon = unit_square();
    attach_uniform(cfg);
    return cfg;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown example '" + name + "'");
}

}  // namespace affdim
