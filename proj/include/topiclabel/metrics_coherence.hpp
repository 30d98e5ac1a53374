#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "topiclabel/corpus.hpp"

namespace topiclabel {

/// Boolean-presence window counts over a reference corpus. Probabilities are
/// counts / total_windows. Immutable after build_cooccurrence.
struct CooccurrenceStats {
  int window_size = 0;
  long long total_windows = 0;
  std::map<std::string, long long> occurrence;
  // Key is the lexicographically ordered pair; symmetric by construction.
  std::map<std::pair<std::string, std::string>, long long> cooccurrence;

  long long pair_count(const std::string& a, const std::string& b) const;
};

/// Sliding windows of `window_size` tokens, stride 1, within each document
/// independently; a document shorter than the window contributes one window
/// (the whole document). A token counts at most once per window.
/// Throws std::invalid_argument for window_size < 2 or an empty corpus.
CooccurrenceStats build_cooccurrence(const Corpus& corpus, int window_size);

/// NPMI in [-1, 1]: log(p(a,b)/(p(a)p(b))) / -log p(a,b), with the analytic
/// limits -1 when the pair never co-occurs and +1 when it co-occurs in every
/// window. Throws std::invalid_argument naming any token absent from stats.
double npmi_pair(const CooccurrenceStats& stats, const std::string& a, const std::string& b);

/// Mean npmi_pair over all unordered pairs of the given words. Words missing
/// from the stats are skipped (a note per skip is appended to *warnings when
/// given); fewer than two known words is an error.
double topic_npmi(const CooccurrenceStats& stats, const std::vector<std::string>& words,
                  std::vector<std::string>* warnings = nullptr);

/// Distinct words across all lists / (k * M). Every list must have the same
/// length M. Throws std::invalid_argument on a length mismatch or no topics.
double diversity(const std::map<int, std::vector<std::string>>& top_words_per_topic);

}  // namespace topiclabel
