#include "affdim/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace affdim {

namespace {

class Block {
 public:
  explicit Block(std::ostringstream& os, const std::string& name) : os_(os) { os_ << "[" << name << "]\n"; }
  ~Block() { os_ << "\n"; }
  void kv(const std::string& k, const std::string& v) { os_ << k << ": " << v << "\n"; }
  void kv(const std::string& k, double v) { kv(k, format_number(v)); }
  void kv(const std::string& k, bool v) { kv(k, std::string(v ? "true" : "false")); }
  void kv(const std::string& k, const char* v) { kv(k, std::string(v)); }

 private:
  std::ostringstream& os_;
};

std::string join_weights(const BernoulliWeights& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? " " : "") + format_number(w[i]);
  return s;
}

std::string rate_string(double r) {
  if (std::isinf(r)) return r > 0 ? "inf" : "-inf";
  return format_number(r);
}

void emit_dimension(Block& b, const DimensionReport& d) {
  b.kv("fired_theorem", std::string(to_string(d.fired)));
  b.kv("certified", d.certified());
  if (d.certified_value) b.kv("certified_value", *d.certified_value);
  b.kv("interval", "[" + format_number(d.lower) + ", " + format_number(d.upper) + "]");
  for (const auto& h : d.hypotheses)
    b.kv("hypothesis", h.name + " | " + std::string(to_string(h.status)) + (h.detail.empty() ? "" : " | " + h.detail));
  for (const auto& q : d.quantities) b.kv("quantity", q.name + " = " + format_number(q.value));
  for (const auto& a : d.assumptions) b.kv("assumption", a);
}

nlohmann::ordered_json number_json(double x) {
  if (std::isfinite(x)) return x;
  return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

nlohmann::ordered_json dimension_json(const DimensionReport& d) {
  nlohmann::ordered_json j;
  j["fired_theorem"] = std::string(to_string(d.fired));
  j["certified_value"] = d.certified_value ? nlohmann::ordered_json(*d.certified_value) : nlohmann::ordered_json();
  j["interval"] = {number_json(d.lower), number_json(d.upper)};
  j["hypotheses"] = nlohmann::ordered_json::array();
  for (const auto& h : d.hypotheses)
    j["hypotheses"].push_back({{"name", h.name}, {"status", std::string(to_string(h.status))}, {"detail", h.detail}});
  j["quantities"] = nlohmann::ordered_json::object();
  for (const auto& q : d.quantities) j["quantities"][q.name] = number_json(q.value);
  j["assumptions"] = d.assumptions;
  return j;
}

}  // namespace

std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

std::string Table::str() const {
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "\t" : "") << cells[i];
    os << "\n";
  };
  line(header);
  for (const auto& r : rows) line(r);
  return os.str();
}

std::string format_analysis(const AnalysisResult& r, const BernoulliWeights& weights) {
  std::ostringstream os;
  {
    Block b(os, "system");
    b.kv("label", r.label);
    b.kv("weights", join_weights(weights));
  }
  {
    Block b(os, "exponents");
    b.kv("entropy", r.exponents.entropy);
    b.kv("chi_s", r.exponents.chi_s);
    b.kv("chi_ss", r.exponents.chi_ss);
    b.kv("stderr_s", r.exponents.stderr_s);
    b.kv("stderr_ss", r.exponents.stderr_ss);
    b.kv("exact", r.exponents_exact);
    b.kv("dim_lyap", r.dim_lyap);
  }
  {
    Block b(os, "pressure");
    b.kv("upper_bound", r.pressure_upper);
    if (r.roots) {
      b.kv("method", "closed-form");
      b.kv("s1", r.roots->s1);
      b.kv("s2", r.roots->s2);
    }
    if (r.root_estimate) {
      b.kv("method", "finite-n");
      for (const auto& row : r.root_estimate->history)
        b.kv("root_n" + std::to_string(row.n), row.root);
      b.kv("converged", r.root_estimate->converged);
      if (r.root_estimate->extrapolated) b.kv("extrapolated_root", *r.root_estimate->extrapolated);
    }
  }
  {
    Block b(os, "splitting");
    b.kv("verdict", std::string(to_string(r.split.verdict)));
    b.kv("method", std::string(to_string(r.split.method)));
    b.kv("triangular", std::string(to_string(r.split.triangular)));
    if (!r.split.note.empty()) b.kv("note", r.split.note);
  }
  {
    Block b(os, "ssc");
    b.kv("checked", r.ssc.checked);
    b.kv("holds", r.ssc.holds);
    b.kv("refined", r.ssc.refined);
    b.kv("exact", r.ssc.exact);
    if (r.ssc.holds) {
      b.kv("kappa", r.ssc.kappa);
      b.kv("margin", r.ssc.margin);
    } else {
      b.kv("witness", r.ssc.witness);
    }
  }
  if (r.backward) {
    Block b(os, "backward");
    b.kv("holds", r.backward->holds);
    if (r.backward->holds) {
      b.kv("margin", r.backward->margin);
      for (const auto& a : r.backward->cone.arcs())
        b.kv("arc", format_number(a.start().theta()) + " " + format_number(a.end().theta()));
    } else {
      b.kv("witness", r.backward->witness);
    }
  }
  if (r.hochman) {
    Block b(os, "hochman");
    b.kv("ifs", r.hochman_ifs);
    b.kv("verdict", std::string(to_string(r.hochman->verdict)));
    b.kv("rate_bound", r.hochman->rate_bound);
    for (const auto& row : r.hochman->rows)
      b.kv("delta_n" + std::to_string(row.n), row.delta.to_string() + " rate " + rate_string(row.rate));
  }
  {
    Block b(os, "measure");
    emit_dimension(b, r.measure);
  }
  if (r.attractor) {
    const auto& a = *r.attractor;
    Block b(os, "attractor");
    b.kv("fired_theorem", std::string(to_string(a.fired)));
    b.kv("certified", a.certified_value.has_value());
    if (a.certified_value) b.kv("certified_value", *a.certified_value);
    b.kv("interval", "[" + format_number(a.lower) + ", " + format_number(a.upper) + "]");
    b.kv("weights", a.weights_label);
    for (const auto& h : a.hypotheses)
      b.kv("hypothesis", h.name + " | " + std::string(to_string(h.status)) + (h.detail.empty() ? "" : " | " + h.detail));
    if (a.subsystem_limit) b.kv("subsystem_limit", *a.subsystem_limit);
  }
  if (r.attractor)
    for (const auto& row : r.attractor->subsystem_rows) {
      Block b(os, "subsystem depth=" + std::to_string(row.depth));
      b.kv("maps", std::to_string(row.maps));
      b.kv("ssc", row.ssc_holds);
      emit_dimension(b, row.report);
    }
  os << "exit: " << r.exit_code() << "\n";
  return os.str();
}

nlohmann::ordered_json analysis_json(const AnalysisResult& r, const BernoulliWeights& weights) {
  nlohmann::ordered_json j;
  j["label"] = r.label;
  j["weights"] = weights.p();
  j["exponents"] = {{"entropy", r.exponents.entropy},   {"chi_s", r.exponents.chi_s},
                    {"chi_ss", r.exponents.chi_ss},     {"stderr_s", r.exponents.stderr_s},
                    {"stderr_ss", r.exponents.stderr_ss}, {"exact", r.exponents_exact}};
  j["dim_lyap"] = r.dim_lyap;
  j["pressure_upper"] = r.pressure_upper;
  if (r.roots) j["triangular_roots"] = {{"s1", r.roots->s1}, {"s2", r.roots->s2}};
  j["splitting"] = {{"verdict", std::string(to_string(r.split.verdict))},
                    {"method", std::string(to_string(r.split.method))},
                    {"triangular", std::string(to_string(r.split.triangular))}};
  j["ssc"] = {{"holds", r.ssc.holds}, {"refined", r.ssc.refined}, {"kappa", r.ssc.kappa}, {"margin", r.ssc.margin}};
  if (r.hochman) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : r.hochman->rows)
      rows.push_back({{"n", row.n}, {"delta", row.delta.to_string()}, {"rate", number_json(row.rate)}});
    j["hochman"] = {{"ifs", r.hochman_ifs}, {"verdict", std::string(to_string(r.hochman->verdict))}, {"rows", rows}};
  }
  j["measure"] = dimension_json(r.measure);
  if (r.attractor) {
    const auto& a = *r.attractor;
    nlohmann::ordered_json aj;
    aj["fired_theorem"] = std::string(to_string(a.fired));
    aj["certified_value"] = a.certified_value ? nlohmann::ordered_json(*a.certified_value) : nlohmann::ordered_json();
    aj["interval"] = {number_json(a.lower), number_json(a.upper)};
    aj["weights"] = a.weights_label;
    aj["subsystem_rows"] = nlohmann::ordered_json::array();
    for (const auto& row : a.subsystem_rows)
      aj["subsystem_rows"].push_back({{"depth", row.depth}, {"maps", row.maps}, {"ssc", row.ssc_holds},
                                      {"report", dimension_json(row.report)}});
    j["attractor"] = aj;
  }
  j["exit_code"] = r.exit_code();
  return j;
}

}  // namespace affdim
