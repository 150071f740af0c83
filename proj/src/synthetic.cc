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

#include "polir/synthetic.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "json.hpp"
#include "polir/corpus.h"
#include "polir/error.h"
#include "polir/io.h"
#include "polir/skipgram.h"

namespace polir {
namespace {

const std::vector<std::string> kGeneric = {
    "government", "national",   "strategy",  "implementation", "framework",  "plan",      "ministry",
    "policy",     "objective",  "support",   "ensure",         "develop",    "sector",    "programme",
    "activities", "resources",  "management", "institutional", "capacity",   "level",     "measures",
    "priority",   "goals",      "coordination", "monitoring",  "evaluation", "review",    "district",
    "regional",   "federal",    "authority", "public",         "private",    "partners",  "promote",
    "establish",  "strengthen", "improve",   "sustainable",    "development"};

const std::vector<std::string> kStop = {"the", "of", "and", "to", "in", "for", "with", "on", "by",
                                        "will", "be", "is", "are", "a", "this", "that", "as", "at"};

const std::vector<std::string> kCountries = {"Kenya", "Uganda", "Ethiopia"};
const std::vector<std::string> kSectors = {"forestry", "agriculture", "environment", "land", "water"};

template <typename T>
const T &pick(Rng &rng, const std::vector<T> &v) {
  return v[rng.below(v.size())];
}

struct Mix {
  double topic = 0.0;
  double generic = 0.0;  // the rest are stop words
};

// Swaps two adjacent interior letters, e.g. "forest" -> "forset".
std::string misspell(const std::string &word, Rng &rng) {
  if (word.size() < 5) return word;
  std::string out = word;
  size_t i = 1 + rng.below(word.size() - 3);
  std::swap(out[i], out[i + 1]);
  return out;
}

std::string sentence(Rng &rng, const SyntheticAgenda *agenda, const Mix &mix, double typo_rate,
                     const std::set<std::string> &known) {
  int length = 9 + static_cast<int>(rng.below(6));
  std::vector<std::string> words;
  for (int i = 0; i < length; ++i) {
    double r = rng.uniform();
    if (agenda != nullptr && r < mix.topic) {
      std::string w = pick(rng, agenda->words);
      if (typo_rate > 0 && w.find(' ') == std::string::npos && rng.uniform() < typo_rate) {
        std::string bad = misspell(w, rng);
        if (!known.count(bad)) w = bad;
      }
      words.push_back(w);
    } else if (r < mix.topic + mix.generic) {
      words.push_back(pick(rng, kGeneric));
    } else {
      words.push_back(pick(rng, kStop));
    }
  }
  std::string s;
  for (const auto &w : words) s += (s.empty() ? "" : " ") + w;
  s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

std::string paragraph(Rng &rng, const SyntheticAgenda *agenda, const Mix &mix, int sentences, double typo_rate,
                      const std::set<std::string> &known, bool cite) {
  std::string out;
  for (int i = 0; i < sentences; ++i) {
    if (!out.empty()) out += " ";
    out += sentence(rng, agenda, mix, typo_rate, known);
    if (cite && rng.uniform() < 0.3) out += " [" + std::to_string(1 + rng.below(40)) + "]";
    out += ".";
  }
  return out;
}

std::string header_line(Rng &rng, int section) {
  static const std::vector<std::string> heads = {"GENERAL PROVISIONS", "STRATEGIC PRIORITIES", "IMPLEMENTATION ARRANGEMENTS",
                                                 "POLICY STATEMENTS", "INSTITUTIONAL FRAMEWORK"};
  return "SECTION " + std::to_string(section) + " " + pick(rng, heads);
}

std::set<std::string> all_known_words() {
  std::set<std::string> known(kGeneric.begin(), kGeneric.end());
  known.insert(kStop.begin(), kStop.end());
  for (const auto &a : synthetic_agenda()) {
    for (const auto &w : a.words) {
      for (const auto &part : io::split(w, ' ')) known.insert(part);
    }
  }
  return known;
}

}  // namespace

const std::vector<SyntheticAgenda> &synthetic_agenda() {
  static const std::vector<SyntheticAgenda> agenda = {
      {"forest_cover",
       {"forest", "tree", "canopy", "woodland", "reforestation", "seedling", "timber", "nursery", "agroforestry",
        "mangrove"},
       {"forest", "tree", "reforestation"}},
      {"water_management",
       {"river", "watershed", "wetland", "irrigation", "catchment", "groundwater", "riparian", "spring", "aquifer",
        "drainage"},
       {"watershed", "wetland", "irrigation"}},
      {"soil_health",
       {"soil", "erosion", "terrace", "fertility", "compost", "gully", "mulch", "topsoil", "sediment", "degradation"},
       {"soil", "erosion", "terrace"}},
      {"land_tenure",
       {"land tenure", "title", "ownership", "registry", "customary", "boundary", "cadastre", "lease", "inheritance",
        "deed"},
       {"land_tenure", "ownership", "customary"}},
      {"participation",
       {"community", "participation", "village", "stakeholder", "consultation", "cooperative", "women", "youth",
        "involvement", "grassroots"},
       {"community", "participation", "stakeholder"}},
      {"finance",
       {"finance", "budget", "investment", "credit", "fund", "subsidy", "loan", "revenue", "incentive", "payment"},
       {"finance", "investment", "credit"}},
  };
  return agenda;
}

SyntheticFixture write_synthetic_fixture(const std::string &dir, const SyntheticConfig &config) {
  if (config.documents < 4 || config.background_documents < 1 || config.background_paragraphs < 1) {
    throw Error(ErrorCode::kConfig, "synthetic fixture needs at least 4 documents and a background corpus");
  }
  if (config.agenda_rate <= 0.0 || config.agenda_rate >= 1.0) {
    throw Error(ErrorCode::kConfig, "synthetic agenda_rate must lie in (0, 1)");
  }
  const auto &agenda = synthetic_agenda();
  const auto known = all_known_words();
  Rng rng(config.seed);
  io::ensure_dir(dir);
  SyntheticFixture fx;

  // Background corpus: topical and generic paragraphs, one file per document.
  fx.background_dir = io::join_path(dir, "background");
  io::ensure_dir(fx.background_dir);
  const Mix background_topical{0.45, 0.35};
  const Mix generic_only{0.0, 0.7};
  for (int d = 0; d < config.background_documents; ++d) {
    std::string text;
    for (int p = 0; p < config.background_paragraphs; ++p) {
      bool topical = rng.uniform() < 0.7;
      const SyntheticAgenda *a = topical ? &pick(rng, agenda) : nullptr;
      if (!text.empty()) text += "\n\n";
      text += paragraph(rng, a, topical ? background_topical : generic_only, 4, 0.0, known, false);
    }
    char name[32];
    std::snprintf(name, sizeof(name), "bg_%04d.txt", d + 1);
    io::write_file(io::join_path(fx.background_dir, name), text + "\n");
  }

  // Gold assignment, redrawn until every agenda has two positives and two negatives.
  std::vector<std::vector<bool>> covers;
  for (;;) {
    covers.assign(config.documents, std::vector<bool>(agenda.size(), false));
    std::vector<int> positives(agenda.size(), 0);
    for (auto &row : covers) {
      for (size_t a = 0; a < agenda.size(); ++a) {
        row[a] = rng.uniform() < config.agenda_rate;
        positives[a] += row[a];
      }
    }
    bool ok = std::all_of(positives.begin(), positives.end(),
                          [&](int p) { return p >= 2 && p <= config.documents - 2; });
    if (ok) break;
  }

  // Study documents.
  std::string study_dir = io::join_path(dir, "study");
  io::ensure_dir(study_dir);
  std::vector<ManifestEntry> manifest;
  std::string gold = io::csv_line({"doc_id", "agenda", "present"});
  const Mix planted{0.5, 0.3};
  const Mix boilerplate{0.0, 0.7};
  for (int d = 0; d < config.documents; ++d) {
    char id[16];
    std::snprintf(id, sizeof(id), "doc%02d", d + 1);
    std::vector<std::string> paras;
    for (size_t a = 0; a < agenda.size(); ++a) {
      gold += io::csv_line({id, agenda[a].label, covers[d][a] ? "1" : "0"});
      ++fx.gold_labels;
      if (!covers[d][a]) continue;
      ++fx.gold_positives;
      int planted_count = 1 + static_cast<int>(rng.below(2));
      for (int k = 0; k < planted_count; ++k) {
        paras.push_back(paragraph(rng, &agenda[a], planted, 3 + static_cast<int>(rng.below(3)), config.typo_rate,
                                  known, true));
      }
    }
    int filler = 4 + static_cast<int>(rng.below(5));
    for (int k = 0; k < filler; ++k) {
      paras.push_back(paragraph(rng, nullptr, boilerplate, 3 + static_cast<int>(rng.below(3)), 0.0, known, true));
    }
    for (size_t i = paras.size(); i > 1; --i) std::swap(paras[i - 1], paras[rng.below(i)]);

    std::string text;
    int page = 0;
    for (size_t start = 0; start < paras.size(); start += 3) {
      ++page;
      if (page > 1) text += "\f";
      text += header_line(rng, page) + "\n\n";
      for (size_t i = start; i < std::min(paras.size(), start + 3); ++i) text += paras[i] + "\n\n";
      text += std::to_string(page) + "\n";
    }
    std::string file = std::string(id) + ".txt";
    io::write_file(io::join_path(study_dir, file), text);
    const std::string &sector = kSectors[d % kSectors.size()];
    std::string title = "National " + std::string(1, static_cast<char>(std::toupper(sector[0]))) + sector.substr(1) +
                        " Strategy " + std::to_string(2010 + d % 12);
    manifest.push_back({{id, kCountries[d % kCountries.size()], sector, title}, "study/" + file});
  }
  fx.manifest = io::join_path(dir, "manifest.csv");
  write_manifest(fx.manifest, manifest);
  fx.gold = io::join_path(dir, "gold.csv");
  io::write_file(fx.gold, gold);

  for (const auto &a : agenda) {
    AgendaQuery q;
    q.label = a.label;
    q.terms = a.query_terms;
    q.threshold = kDefaultThreshold;
    q.notes = "synthetic agenda";
    fx.query_list.push_back(q);
  }
  fx.queries = io::join_path(dir, "queries.csv");
  write_queries(fx.queries, fx.query_list);

  nlohmann::ordered_json cfg = {
      {"paths",
       {{"background_dir", "background"},
        {"manifest", "manifest.csv"},
        {"queries", "queries.csv"},
        {"gold", "gold.csv"},
        {"out", "out"}}},
      {"seed", 7},
      {"train",
       {{"dim", 48}, {"window", 5}, {"negatives", 5}, {"min_count", 5}, {"epochs", 5}, {"learning_rate", 0.025}}},
      {"phrases", {{"min_pair_count", 15}, {"score_threshold", 0.1}, {"passes", 2}}},
      {"segment", {{"min_paragraph_tokens", 8}}},
  };
  fx.config = io::join_path(dir, "pipeline.json");
  io::write_file(fx.config, cfg.dump(2) + "\n");
  return fx;
}

FamilyCorpus two_family_corpus(uint64_t seed, int occurrences) {
  if (occurrences < 1) throw Error(ErrorCode::kConfig, "two_family_corpus needs a positive occurrence count");
  // "_" marks the slot filled by a family member.
  const std::vector<std::vector<std::vector<std::string>>> templates = {
      {{"the", "_", "grows", "beside", "the", "quiet", "valley", "stream"},
       {"tall", "_", "branches", "shade", "the", "valley", "floor"},
       {"a", "young", "_", "sapling", "needs", "moist", "valley", "soil"}},
      {{"the", "_", "ore", "was", "smelted", "in", "the", "furnace"},
       {"refined", "_", "alloy", "leaves", "the", "furnace", "hot"},
       {"miners", "extract", "_", "from", "deep", "furnace", "ore"}},
  };
  const std::vector<std::vector<std::string>> filler = {
      {"the", "_", "played", "a", "slow", "melody", "tonight"},
      {"sailors", "rested", "near", "the", "_", "at", "dusk"},
      {"fresh", "_", "seasoned", "the", "evening", "soup"}};
  FamilyCorpus out;
  out.partners = {{"alder", "birch"}, {"birch", "alder"}, {"cobalt", "nickel"}, {"nickel", "cobalt"}};
  out.unrelated = {"violin", "harbor", "pepper"};
  const std::vector<std::vector<std::string>> families = {{"alder", "birch"}, {"cobalt", "nickel"}};
  Rng rng(seed);
  auto fill = [&](const std::vector<std::string> &t, const std::string &token) {
    TokenStream s;
    for (const auto &w : t) s.push_back(w == "_" ? token : w);
    return s;
  };
  for (int i = 0; i < occurrences; ++i) {
    for (size_t f = 0; f < families.size(); ++f) {
      for (const auto &member : families[f]) out.streams.push_back(fill(pick(rng, templates[f]), member));
    }
    for (size_t u = 0; u < out.unrelated.size(); ++u) {
      out.streams.push_back(fill(filler[u], out.unrelated[u]));
    }
  }
  for (size_t i = out.streams.size(); i > 1; --i) std::swap(out.streams[i - 1], out.streams[rng.below(i)]);
  return out;
}

}  // namespace polir
