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
#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "test_util.h"

namespace polir {
namespace {

using testing::Gen;

struct Case {
  Confusion c;
  double accuracy, precision, recall, f1;
  bool p_undef, r_undef, f_undef;
};

// Hand-computed expectations.
const std::vector<Case> kCases = {
    {{3, 1, 1, 5}, 0.8, 0.75, 0.75, 0.75, false, false, false},
    {{4, 0, 0, 6}, 1.0, 1.0, 1.0, 1.0, false, false, false},
    {{0, 3, 2, 0}, 0.0, 0.0, 0.0, 0.0, false, false, true},
    {{0, 0, 4, 6}, 0.6, 0.0, 0.0, 0.0, true, false, true},
    {{0, 0, 0, 10}, 1.0, 0.0, 0.0, 0.0, true, true, true},
    {{9, 0, 1, 0}, 0.9, 1.0, 0.9, 18.0 / 19.0, false, false, false},
    {{5, 5, 0, 0}, 0.5, 0.5, 1.0, 2.0 / 3.0, false, false, false},
    {{1, 0, 3, 6}, 0.7, 1.0, 0.25, 0.4, false, false, false},
    {{2, 6, 2, 10}, 0.6, 0.25, 0.5, 1.0 / 3.0, false, false, false},
    {{7, 2, 3, 8}, 0.75, 7.0 / 9.0, 0.7, 14.0 / 19.0, false, false, false},
};

// Predictions and gold labels realizing a confusion matrix for one agenda.
void realize(const Confusion &c, const std::string &agenda, std::vector<DocLabel> *pred, GoldLabels *gold,
             const std::string &prefix = "d") {
  int n = 0;
  auto add = [&](long count, bool p, bool g) {
    for (long i = 0; i < count; ++i) {
      std::string id = prefix + std::to_string(n++);
      DocLabel l;
      l.doc_id = id;
      l.label = agenda;
      l.predicted = p;
      pred->push_back(l);
      gold->set(id, agenda, g);
    }
  };
  add(c.tp, true, true);
  add(c.fp, true, false);
  add(c.fn, false, true);
  add(c.tn, false, false);
}

bool identity_holds(const MetricRow &r) {
  if (r.precision + r.recall == 0.0) return r.f1 == 0.0;
  return std::abs(r.f1 - 2 * r.precision * r.recall / (r.precision + r.recall)) <= 1e-12;
}

TEST_CASE("ten constructed confusion cases match hand computation") {
  for (const auto &k : kCases) {
    std::vector<DocLabel> pred;
    GoldLabels gold;
    realize(k.c, "a", &pred, &gold);
    auto report = score(pred, gold);
    REQUIRE(report.rows.size() == 1);
    const auto &r = report.rows[0];
    CAPTURE(k.c.tp);
    CAPTURE(k.c.fp);
    CHECK(r.counts.tp == k.c.tp);
    CHECK(r.counts.fp == k.c.fp);
    CHECK(r.counts.fn == k.c.fn);
    CHECK(r.counts.tn == k.c.tn);
    CHECK(r.counts.total() == static_cast<long>(pred.size()));
    CHECK(r.accuracy == doctest::Approx(k.accuracy).epsilon(1e-12));
    CHECK(r.precision == doctest::Approx(k.precision).epsilon(1e-12));
    CHECK(r.recall == doctest::Approx(k.recall).epsilon(1e-12));
    CHECK(r.f1 == doctest::Approx(k.f1).epsilon(1e-12));
    CHECK(r.precision_undefined == k.p_undef);
    CHECK(r.recall_undefined == k.r_undef);
    CHECK(r.f1_undefined == k.f_undef);
    CHECK(identity_holds(r));
  }
}

TEST_CASE("macro average is the unweighted mean over agenda") {
  std::vector<DocLabel> pred;
  GoldLabels gold;
  realize(kCases[0].c, "a", &pred, &gold, "x");
  realize(kCases[6].c, "b", &pred, &gold, "y");
  auto report = score(pred, gold);
  REQUIRE(report.rows.size() == 2);
  CHECK(report.macro.agenda_count == 2);
  CHECK(report.macro.f1 == doctest::Approx((0.75 + 2.0 / 3.0) / 2).epsilon(1e-12));
  CHECK(report.macro.precision == doctest::Approx((0.75 + 0.5) / 2).epsilon(1e-12));
  CHECK(report.macro.accuracy == doctest::Approx((0.8 + 0.5) / 2).epsilon(1e-12));
}

TEST_CASE("metric rows stay consistent on random label sets") {
  Gen g(55);
  const std::vector<std::string> agenda = {"a", "b", "c"};
  const std::vector<std::string> countries = {"KE", "UG", "RW"};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<DocLabel> pred;
    GoldLabels gold;
    std::map<std::string, std::string> country_of;
    int docs = g.integer(1, 30);
    for (int d = 0; d < docs; ++d) {
      std::string id = "doc" + std::to_string(d);
      country_of[id] = g.pick(countries);
      for (const auto &a : agenda) {
        DocLabel l;
        l.doc_id = id;
        l.label = a;
        l.predicted = g.coin();
        pred.push_back(l);
        gold.set(id, a, g.coin());
      }
    }
    auto report = score(pred, gold, country_of);
    for (const auto *rows : {&report.rows, &report.country_rows}) {
      for (const auto &r : *rows) {
        CHECK(identity_holds(r));
        for (double m : {r.accuracy, r.precision, r.recall, r.f1}) {
          CHECK(m >= 0.0);
          CHECK(m <= 1.0);
        }
      }
    }
    for (const auto &r : report.rows) CHECK(r.counts.total() == docs);

    // Permuting predictions leaves the report unchanged.
    auto shuffled = pred;
    std::shuffle(shuffled.begin(), shuffled.end(), g.engine());
    CHECK(score(shuffled, gold, country_of).to_csv() == report.to_csv());

    // Flipping every prediction swaps TP with FN and FP with TN; flipping
    // every gold label swaps TP with FP and FN with TN.
    auto flipped = pred;
    for (auto &l : flipped) l.predicted = !l.predicted;
    auto fr = score(flipped, gold);
    GoldLabels inverted = gold;
    for (auto &[k, v] : inverted.labels) v = !v;
    auto gr = score(pred, inverted);
    for (size_t i = 0; i < report.rows.size(); ++i) {
      const auto &c = report.rows[i].counts;
      CHECK(fr.rows[i].counts.tp == c.fn);
      CHECK(fr.rows[i].counts.fn == c.tp);
      CHECK(fr.rows[i].counts.fp == c.tn);
      CHECK(fr.rows[i].counts.tn == c.fp);
      CHECK(gr.rows[i].counts.tp == c.fp);
      CHECK(gr.rows[i].counts.fp == c.tp);
      CHECK(gr.rows[i].counts.fn == c.tn);
      CHECK(gr.rows[i].counts.tn == c.fn);
    }
  }
}

TEST_CASE("per-country rows partition the agenda rows") {
  std::vector<DocLabel> pred;
  GoldLabels gold;
  realize({2, 1, 1, 2}, "a", &pred, &gold);
  std::map<std::string, std::string> country_of = {{"d0", "KE"}, {"d1", "KE"}, {"d2", "UG"},
                                                   {"d3", "UG"}, {"d4", "UG"}, {"d5", "KE"}};
  auto report = score(pred, gold, country_of);
  REQUIRE(report.country_rows.size() == 2);
  Confusion sum;
  for (const auto &r : report.country_rows) {
    sum.tp += r.counts.tp;
    sum.fp += r.counts.fp;
    sum.fn += r.counts.fn;
    sum.tn += r.counts.tn;
  }
  CHECK(sum.tp == 2);
  CHECK(sum.total() == 6);
  CHECK(report.country_macro.size() == 2);
}

TEST_CASE("unmatched labels are counted, not scored") {
  std::vector<DocLabel> pred;
  GoldLabels gold;
  realize({1, 0, 0, 1}, "a", &pred, &gold);
  pred.push_back({"extra", "a", true, 0.9, "", 0});
  gold.set("lonely", "a", true);
  auto report = score(pred, gold);
  CHECK(report.unlabeled_predictions == 1);
  CHECK(report.unpredicted_gold == 1);
  CHECK(report.rows[0].counts.total() == 2);
  CHECK(report.to_table().find("warning") != std::string::npos);
}

TEST_CASE("scoring errors") {
  GoldLabels gold;
  gold.set("d1", "a", true);
  CHECK_ERROR_CODE(score({{"d2", "a", true, 0, "", 0}}, gold), ErrorCode::kValidation);
  CHECK_ERROR_CODE(score({{"d1", "a", true, 0, "", 0}, {"d1", "a", false, 0, "", 0}}, gold), ErrorCode::kValidation);
}

TEST_CASE("gold CSV parsing") {
  auto gold = parse_gold("doc_id,agenda,present\nd1,forest,1\nd2,forest,0\n");
  REQUIRE(gold.labels.size() == 2);
  CHECK(*gold.find("d1", "forest"));
  CHECK_FALSE(*gold.find("d2", "forest"));
  CHECK(gold.find("d3", "forest") == nullptr);
  CHECK_ERROR_CODE(parse_gold("doc_id,agenda,present\nd1,forest,yes\n"), ErrorCode::kParse);
  CHECK_ERROR_CODE(parse_gold("d1,forest\n"), ErrorCode::kParse);
  CHECK_ERROR_CODE(read_gold("/nonexistent/gold.csv"), ErrorCode::kMissingInput);
}

TEST_CASE("table and CSV layouts") {
  std::vector<DocLabel> pred;
  GoldLabels gold;
  realize(kCases[0].c, "Forest restoration", &pred, &gold);
  auto report = score(pred, gold);
  auto table = report.to_table();
  CHECK(table.find("Forest restoration") != std::string::npos);
  CHECK(table.find("Average") != std::string::npos);
  CHECK(table.find("0.75") != std::string::npos);
  auto csv = report.to_csv();
  CHECK(csv.rfind("scope,country,agenda,tp,fp,fn,tn,accuracy,precision,recall,f1,flags\n", 0) == 0);
  CHECK(csv.find("agenda,,Forest restoration,3,1,1,5,0.800000,0.750000,0.750000,0.750000,") != std::string::npos);
}

}  // namespace
}  // namespace polir
