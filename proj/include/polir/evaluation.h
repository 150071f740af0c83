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

#ifndef POLIR_EVALUATION_H_
#define POLIR_EVALUATION_H_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "polir/retrieval.h"

namespace polir {

// Expert labels: (doc_id, agenda) -> present.
struct GoldLabels {
  std::map<std::pair<std::string, std::string>, bool> labels;
  std::string source;

  void set(const std::string &doc_id, const std::string &agenda, bool present) { labels[{doc_id, agenda}] = present; }
  const bool *find(const std::string &doc_id, const std::string &agenda) const;
};

// CSV with header doc_id,agenda,present (present is 0 or 1).
GoldLabels read_gold(const std::string &path);
GoldLabels parse_gold(const std::string &text, const std::string &source = {});

struct Confusion {
  long tp = 0, fp = 0, fn = 0, tn = 0;
  long total() const { return tp + fp + fn + tn; }
};

// Metrics of one confusion matrix. A zero denominator yields 0 and sets the
// matching flag.
struct MetricRow {
  std::string agenda;
  std::string country;  // empty: all countries
  Confusion counts;
  double accuracy = 0.0, precision = 0.0, recall = 0.0, f1 = 0.0;
  bool precision_undefined = false, recall_undefined = false, f1_undefined = false;
};

MetricRow compute_row(const std::string &agenda, const std::string &country, const Confusion &c);

// Unweighted means over agenda rows.
struct MacroAverage {
  std::string country;  // empty: all countries
  double accuracy = 0.0, precision = 0.0, recall = 0.0, f1 = 0.0;
  size_t agenda_count = 0;
};

struct MetricsReport {
  std::vector<MetricRow> rows;          // one per agenda, sorted by agenda
  std::vector<MetricRow> country_rows;  // one per (country, agenda)
  MacroAverage macro;
  std::vector<MacroAverage> country_macro;
  long unlabeled_predictions = 0;  // predictions without a gold label, excluded
  long unpredicted_gold = 0;       // gold labels without a prediction

  const MetricRow *row(const std::string &agenda) const;
  std::string to_csv() const;
  // Fixed-width table: agenda, accuracy, precision, recall, F1, then the
  // average row; per-country averages follow.
  std::string to_table() const;
};

// `country_of` maps doc_id to country for the per-country breakdown; may be
// empty. Throws kValidation when no prediction has a gold label.
MetricsReport score(const std::vector<DocLabel> &predictions, const GoldLabels &gold,
                    const std::map<std::string, std::string> &country_of = {});

}  // namespace polir

#endif  // POLIR_EVALUATION_H_
