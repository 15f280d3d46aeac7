#pragma once

// CSV emission and parsing. Probabilities are printed with 12 significant
// digits so a written distribution reads back well inside fit tolerance.

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qwalk/config.hpp"
#include "qwalk/distribution.hpp"

namespace qwalk {

inline std::string format_sig(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

// Long format, one row per (step, position): step,position,probability.
inline void write_run_csv(std::ostream& out, const Json& envelope) {
  out << "step,position,probability\n";
  for (const Json& row : envelope["per_step"]) {
    const Json& dist = row["distribution"];
    const Json& positions = dist["positions"];
    const Json& probabilities = dist["probabilities"];
    for (std::size_t i = 0; i < positions.size(); ++i) {
      out << row["step"].get<int>() << ',' << positions[i].get<int>() << ','
          << format_sig(probabilities[i].get<double>()) << '\n';
    }
  }
}

// Combined sweep output, final distributions only: q,position,probability.
inline void write_sweep_csv(std::ostream& out, const Json& envelopes) {
  out << "q,position,probability\n";
  for (const Json& env : envelopes) {
    const std::string q = format_sig(env["summary"]["q"].get<double>());
    const Json& dist = env["summary"]["final_distribution"];
    const Json& positions = dist["positions"];
    const Json& probabilities = dist["probabilities"];
    for (std::size_t i = 0; i < positions.size(); ++i) {
      out << q << ',' << positions[i].get<int>() << ','
          << format_sig(probabilities[i].get<double>()) << '\n';
    }
  }
}

namespace detail {

inline std::string strip_csv_line(std::string line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
    line.pop_back();
  }
  std::size_t start = 0;
  while (start < line.size() && line[start] == ' ') ++start;
  return line.substr(start);
}

}  // namespace detail

// Reads a measured distribution: a position,probability header followed by
// one row per position. Rows may arrive in any order; duplicates are
// malformed. No normalization is applied here.
inline Distribution parse_distribution_csv(std::istream& in) {
  std::string line;
  bool saw_header = false;
  std::vector<std::pair<int, double>> rows;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    line = detail::strip_csv_line(line);
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != "position,probability") {
        throw std::invalid_argument(
            "measured csv must start with a position,probability header");
      }
      saw_header = true;
      continue;
    }
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::invalid_argument("measured csv line " + std::to_string(line_number) +
                                  ": expected position,probability");
    }
    try {
      std::size_t used = 0;
      const std::string pos_text = line.substr(0, comma);
      const int position = std::stoi(pos_text, &used);
      if (used != pos_text.size()) throw std::invalid_argument("trailing text");
      const std::string prob_text = line.substr(comma + 1);
      const double probability = std::stod(prob_text, &used);
      if (used != prob_text.size()) throw std::invalid_argument("trailing text");
      if (!(probability >= 0.0)) throw std::invalid_argument("negative probability");
      rows.emplace_back(position, probability);
    } catch (const std::exception&) {
      throw std::invalid_argument("measured csv line " + std::to_string(line_number) +
                                  ": expected position,probability");
    }
  }
  if (!saw_header) {
    throw std::invalid_argument("measured csv is empty");
  }
  std::sort(rows.begin(), rows.end());
  Distribution d;
  for (const auto& [position, probability] : rows) {
    if (!d.support.empty() && d.support.back() == position) {
      throw std::invalid_argument("measured csv repeats position " +
                                  std::to_string(position));
    }
    d.support.push_back(position);
    d.probabilities.push_back(probability);
  }
  return d;
}

}  // namespace qwalk
