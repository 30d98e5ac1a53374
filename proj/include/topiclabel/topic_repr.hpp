#pragma once

#include <map>
#include <string>
#include <vector>

#include "topiclabel/backends.hpp"
#include "topiclabel/corpus.hpp"

namespace topiclabel {

/// Top-N vocabulary tokens of one topic under class-based TF-IDF. Words are
/// distinct, scores non-increasing; the list is shorter than N only when the
/// topic's vocabulary runs out.
struct TopicWordList {
  int topic_id = 0;
  std::vector<std::string> words;
  std::vector<double> scores;
};

/// Class-based TF-IDF with the topic's concatenated documents as one
/// pseudo-document: weight(t) = tf(t, topic) * log(1 + k / topic_count(t)),
/// topic_count(t) = number of topics whose pseudo-document contains t.
/// Ties break lexicographically. Throws std::invalid_argument for an empty
/// topic or n < 1.
TopicWordList top_words(const Corpus& corpus, const std::map<std::string, int>& assignments,
                        int topic_id, int n);

struct LabelParams {
  int topic_id = 0;
  TopicWordList word_list;  // precomputed for this topic
  int num_beams = 5;
  int max_input_tokens = 4096;
};

/// One summary label per backend (source = backend id) plus one word_list
/// label rendered as space-joined top words, in that backend order with the
/// word list last. A backend that fails yields a failed label with empty
/// text; only all summarizers failing aborts, with per-backend causes.
std::vector<TopicLabel> label_topic(const std::vector<Document>& cluster_docs,
                                    const std::vector<SummarizerBackend*>& backends,
                                    const LabelParams& params);

}  // namespace topiclabel
