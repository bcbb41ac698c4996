#pragma once

// Text and JSON emission of analysis results and tab-delimited tables.

#include <string>
#include <vector>

#include <json.hpp>

#include "affdim/dimension.hpp"

namespace affdim {

/// Shortest round-trip decimal ("%.17g" trimmed to 15 digits when exact).
std::string format_number(double x);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
  std::string str() const;  ///< tab-delimited, header first
};

/// key: value blocks, one section per component.
std::string format_analysis(const AnalysisResult& r, const BernoulliWeights& weights);

nlohmann::ordered_json analysis_json(const AnalysisResult& r, const BernoulliWeights& weights);

}  // namespace affdim
