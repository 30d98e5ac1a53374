#include "topiclabel/metrics_coherence.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace topiclabel {

long long CooccurrenceStats::pair_count(const std::string& a, const std::string& b) const {
  auto key = a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
  auto it = cooccurrence.find(key);
  return it == cooccurrence.end() ? 0 : it->second;
}

CooccurrenceStats build_cooccurrence(const Corpus& corpus, int window_size) {
  if (window_size < 2) {
    throw std::invalid_argument("build_cooccurrence: window_size must be >= 2");
  }
  if (corpus.documents.empty()) {
    throw std::invalid_argument("build_cooccurrence: empty corpus");
  }

  CooccurrenceStats stats;
  stats.window_size = window_size;

  for (const auto& doc : corpus.documents) {
    const auto& toks = doc.tokens;
    const std::size_t w = static_cast<std::size_t>(window_size);
    const std::size_t num_windows = toks.size() <= w ? 1 : toks.size() - w + 1;
    for (std::size_t start = 0; start < num_windows; ++start) {
      const std::size_t end = std::min(start + w, toks.size());
      std::set<std::string> present(toks.begin() + start, toks.begin() + end);
      ++stats.total_windows;
      for (auto it = present.begin(); it != present.end(); ++it) {
        ++stats.occurrence[*it];
        for (auto jt = std::next(it); jt != present.end(); ++jt) {
          ++stats.cooccurrence[{*it, *jt}];  // set iteration keeps *it < *jt
        }
      }
    }
  }
  return stats;
}

double npmi_pair(const CooccurrenceStats& stats, const std::string& a, const std::string& b) {
  auto occ_a = stats.occurrence.find(a);
  if (occ_a == stats.occurrence.end()) {
    throw std::invalid_argument("npmi_pair: unknown token \"" + a + "\"");
  }
  auto occ_b = stats.occurrence.find(b);
  if (occ_b == stats.occurrence.end()) {
    throw std::invalid_argument("npmi_pair: unknown token \"" + b + "\"");
  }
  const long long cooc = stats.pair_count(a, b);
  if (cooc == 0) return -1.0;

  const double total = static_cast<double>(stats.total_windows);
  const double p_ab = static_cast<double>(cooc) / total;
  if (cooc == stats.total_windows) return 1.0;  // -log p(a,b) = 0

  const double p_a = static_cast<double>(occ_a->second) / total;
  const double p_b = static_cast<double>(occ_b->second) / total;
  return std::log(p_ab / (p_a * p_b)) / -std::log(p_ab);
}

double topic_npmi(const CooccurrenceStats& stats, const std::vector<std::string>& words,
                  std::vector<std::string>* warnings) {
  if (words.size() < 2) {
    throw std::invalid_argument("topic_npmi: need at least 2 words");
  }
  std::vector<std::string> known;
  std::set<std::string> seen;
  for (const auto& w : words) {
    if (!seen.insert(w).second) continue;
    if (stats.occurrence.count(w)) {
      known.push_back(w);
    } else if (warnings) {
      warnings->push_back("topic_npmi: skipping out-of-vocabulary word \"" + w + "\"");
    }
  }
  if (known.size() < 2) {
    throw std::invalid_argument("topic_npmi: fewer than 2 in-vocabulary words");
  }
  double sum = 0.0;
  long long pairs = 0;
  for (std::size_t i = 0; i < known.size(); ++i) {
    for (std::size_t j = i + 1; j < known.size(); ++j) {
      sum += npmi_pair(stats, known[i], known[j]);
      ++pairs;
    }
  }
  return sum / static_cast<double>(pairs);
}

double diversity(const std::map<int, std::vector<std::string>>& top_words_per_topic) {
  if (top_words_per_topic.empty()) {
    throw std::invalid_argument("diversity: no topics");
  }
  const std::size_t m = top_words_per_topic.begin()->second.size();
  if (m == 0) throw std::invalid_argument("diversity: empty word list");
  std::set<std::string> distinct;
  for (const auto& [topic, words] : top_words_per_topic) {
    if (words.size() != m) {
      throw std::invalid_argument("diversity: topic " + std::to_string(topic) + " has " +
                                  std::to_string(words.size()) + " words, expected " +
                                  std::to_string(m));
    }
    distinct.insert(words.begin(), words.end());
  }
  return static_cast<double>(distinct.size()) /
         static_cast<double>(top_words_per_topic.size() * m);
}

}  // namespace topiclabel
