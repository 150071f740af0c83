// Copyright 2026 The Polir Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "polir/evaluation.h"

#include <algorithm>
#include <cstdio>

#include "polir/error.h"
#include "polir/io.h"

namespace polir {

const bool *GoldLabels::find(const std::string &doc_id, const std::string &agenda) const {
  auto it = labels.find({doc_id, agenda});
  return it == labels.end() ? nullptr : &it->second;
}

GoldLabels parse_gold(const std::string &text, const std::string &source) {
  GoldLabels gold;
  gold.source = source;
  auto rows = io::parse_csv(text);
  for (size_t r = 0; r < rows.size(); ++r) {
    const auto &row = rows[r];
    if (r == 0 && !row.empty() && io::trim(row[0]) == "doc_id") continue;
    std::string where = "gold labels line " + std::to_string(r + 1);
    if (row.size() < 3) throw Error(ErrorCode::kParse, where + ": expected doc_id,agenda,present");
    std::string present = io::trim(row[2]);
    if (present != "0" && present != "1") throw Error(ErrorCode::kParse, where + ": present must be 0 or 1");
    gold.set(io::trim(row[0]), io::trim(row[1]), present == "1");
  }
  return gold;
}

GoldLabels read_gold(const std::string &path) { return parse_gold(io::read_file(path), path); }

MetricRow compute_row(const std::string &agenda, const std::string &country, const Confusion &c) {
  MetricRow r;
  r.agenda = agenda;
  r.country = country;
  r.counts = c;
  auto ratio = [](long num, long den, bool *undefined) {
    if (den == 0) {
      *undefined = true;
      return 0.0;
    }
    return static_cast<double>(num) / static_cast<double>(den);
  };
  bool acc_undefined = false;
  r.accuracy = ratio(c.tp + c.tn, c.total(), &acc_undefined);
  r.precision = ratio(c.tp, c.tp + c.fp, &r.precision_undefined);
  r.recall = ratio(c.tp, c.tp + c.fn, &r.recall_undefined);
  if (r.precision + r.recall > 0.0) {
    r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
  } else {
    r.f1 = 0.0;
    r.f1_undefined = true;
  }
  return r;
}

namespace {

MacroAverage average(const std::vector<const MetricRow *> &rows, const std::string &country) {
  MacroAverage m;
  m.country = country;
  m.agenda_count = rows.size();
  if (rows.empty()) return m;
  for (const auto *r : rows) {
    m.accuracy += r->accuracy;
    m.precision += r->precision;
    m.recall += r->recall;
    m.f1 += r->f1;
  }
  double n = static_cast<double>(rows.size());
  m.accuracy /= n;
  m.precision /= n;
  m.recall /= n;
  m.f1 /= n;
  return m;
}

std::string flags(const MetricRow &r) {
  std::string f;
  if (r.precision_undefined) f += "precision_undefined;";
  if (r.recall_undefined) f += "recall_undefined;";
  if (r.f1_undefined) f += "f1_undefined;";
  if (!f.empty()) f.pop_back();
  return f;
}

}  // namespace

MetricsReport score(const std::vector<DocLabel> &predictions, const GoldLabels &gold,
                    const std::map<std::string, std::string> &country_of) {
  MetricsReport report;
  std::map<std::string, Confusion> by_agenda;
  std::map<std::pair<std::string, std::string>, Confusion> by_country;
  std::map<std::pair<std::string, std::string>, bool> seen;
  long matched = 0;
  for (const auto &p : predictions) {
    const bool *truth = gold.find(p.doc_id, p.label);
    if (!truth) {
      ++report.unlabeled_predictions;
      continue;
    }
    if (!seen.emplace(std::make_pair(p.doc_id, p.label), p.predicted).second) {
      throw Error(ErrorCode::kValidation, "duplicate prediction for document '" + p.doc_id + "', agenda '" + p.label + "'");
    }
    ++matched;
    auto bump = [&](Confusion &c) {
      if (p.predicted && *truth) ++c.tp;
      else if (p.predicted) ++c.fp;
      else if (*truth) ++c.fn;
      else ++c.tn;
    };
    bump(by_agenda[p.label]);
    auto cit = country_of.find(p.doc_id);
    if (cit != country_of.end()) bump(by_country[{cit->second, p.label}]);
  }
  if (matched == 0) throw Error(ErrorCode::kValidation, "no prediction has a gold label");
  for (const auto &[key, v] : gold.labels) {
    if (!seen.count(key)) ++report.unpredicted_gold;
  }

  for (const auto &[agenda, c] : by_agenda) report.rows.push_back(compute_row(agenda, "", c));
  for (const auto &[key, c] : by_country) report.country_rows.push_back(compute_row(key.second, key.first, c));

  std::vector<const MetricRow *> all;
  for (const auto &r : report.rows) all.push_back(&r);
  report.macro = average(all, "");
  std::map<std::string, std::vector<const MetricRow *>> per_country;
  for (const auto &r : report.country_rows) per_country[r.country].push_back(&r);
  for (const auto &[country, rows] : per_country) report.country_macro.push_back(average(rows, country));
  return report;
}

const MetricRow *MetricsReport::row(const std::string &agenda) const {
  for (const auto &r : rows) {
    if (r.agenda == agenda) return &r;
  }
  return nullptr;
}

std::string MetricsReport::to_csv() const {
  std::string out = io::csv_line({"scope", "country", "agenda", "tp", "fp", "fn", "tn", "accuracy", "precision",
                                  "recall", "f1", "flags"});
  auto emit = [&](const char *scope, const MetricRow &r) {
    out += io::csv_line({scope, r.country, r.agenda, std::to_string(r.counts.tp), std::to_string(r.counts.fp),
                         std::to_string(r.counts.fn), std::to_string(r.counts.tn), io::format_fixed(r.accuracy, 6),
                         io::format_fixed(r.precision, 6), io::format_fixed(r.recall, 6), io::format_fixed(r.f1, 6),
                         flags(r)});
  };
  auto emit_macro = [&](const MacroAverage &m) {
    out += io::csv_line({"macro", m.country, "", "", "", "", "", io::format_fixed(m.accuracy, 6),
                         io::format_fixed(m.precision, 6), io::format_fixed(m.recall, 6), io::format_fixed(m.f1, 6), ""});
  };
  for (const auto &r : rows) emit("agenda", r);
  emit_macro(macro);
  for (const auto &r : country_rows) emit("country", r);
  for (const auto &m : country_macro) emit_macro(m);
  return out;
}

std::string MetricsReport::to_table() const {
  size_t width = 7;
  for (const auto &r : rows) width = std::max(width, r.agenda.size());
  for (const auto &m : country_macro) width = std::max(width, m.country.size() + 10);  // "Average (...)"
  char buf[512];
  std::string out;
  auto line = [&](const std::string &name, double a, double p, double r, double f) {
    std::snprintf(buf, sizeof(buf), "%-*s  %8.2f  %9.2f  %6.2f  %5.2f\n", static_cast<int>(width), name.c_str(), a, p, r, f);
    out += buf;
  };
  std::snprintf(buf, sizeof(buf), "%-*s  %8s  %9s  %6s  %5s\n", static_cast<int>(width), "Agenda", "Accuracy",
                "Precision", "Recall", "F1");
  out += buf;
  std::string rule(width + 40, '-');
  out += rule + "\n";
  for (const auto &r : rows) line(r.agenda, r.accuracy, r.precision, r.recall, r.f1);
  out += rule + "\n";
  line("Average", macro.accuracy, macro.precision, macro.recall, macro.f1);
  if (!country_macro.empty()) {
    out += "\n";
    for (const auto &m : country_macro) line("Average (" + m.country + ")", m.accuracy, m.precision, m.recall, m.f1);
  }
  if (unlabeled_predictions) out += "\nwarning: " + std::to_string(unlabeled_predictions) + " predictions had no gold label\n";
  return out;
}

}  // namespace polir
