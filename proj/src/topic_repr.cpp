#include "topiclabel/topic_repr.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "topiclabel/errors.hpp"

namespace topiclabel {

TopicWordList top_words(const Corpus& corpus, const std::map<std::string, int>& assignments,
                        int topic_id, int n) {
  if (n < 1) throw std::invalid_argument("top_words: n must be >= 1");

  int num_topics = 0;
  for (const auto& [id, topic] : assignments) num_topics = std::max(num_topics, topic + 1);

  // Pseudo-document term frequencies per topic, vocabulary tokens only.
  std::map<std::string, long long> topic_tf;
  std::map<std::string, std::set<int>> topics_containing;
  bool topic_seen = false;
  for (const auto& doc : corpus.documents) {
    auto it = assignments.find(doc.id);
    if (it == assignments.end()) continue;
    const int topic = it->second;
    if (topic == topic_id) topic_seen = true;
    for (const auto& tok : doc.tokens) {
      if (!corpus.vocabulary.count(tok)) continue;
      topics_containing[tok].insert(topic);
      if (topic == topic_id) ++topic_tf[tok];
    }
  }
  if (!topic_seen) {
    throw std::invalid_argument("top_words: topic " + std::to_string(topic_id) +
                                " has no documents");
  }

  std::vector<std::pair<std::string, double>> weighted;
  weighted.reserve(topic_tf.size());
  for (const auto& [tok, tf] : topic_tf) {
    const double topic_count = static_cast<double>(topics_containing[tok].size());
    const double weight =
        static_cast<double>(tf) * std::log(1.0 + static_cast<double>(num_topics) / topic_count);
    weighted.emplace_back(tok, weight);
  }
  std::sort(weighted.begin(), weighted.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  TopicWordList list;
  list.topic_id = topic_id;
  const std::size_t take = std::min(static_cast<std::size_t>(n), weighted.size());
  for (std::size_t i = 0; i < take; ++i) {
    list.words.push_back(weighted[i].first);
    list.scores.push_back(weighted[i].second);
  }
  return list;
}

std::vector<TopicLabel> label_topic(const std::vector<Document>& cluster_docs,
                                    const std::vector<SummarizerBackend*>& backends,
                                    const LabelParams& params) {
  if (cluster_docs.empty()) throw std::invalid_argument("label_topic: empty cluster");

  SummarizationRequest request;
  request.documents.reserve(cluster_docs.size());
  for (const auto& doc : cluster_docs) request.documents.push_back(doc.text);
  request.num_beams = params.num_beams;
  request.max_input_tokens = params.max_input_tokens;

  std::vector<TopicLabel> labels;
  std::vector<std::string> failures;
  for (auto* backend : backends) {
    TopicLabel label;
    label.topic_id = params.topic_id;
    label.kind = LabelKind::summary;
    label.source = backend->id();
    try {
      label.text = backend->summarize(request);
    } catch (const std::exception& e) {
      label.text.clear();
      label.failed = true;
      failures.push_back(backend->id() + ": " + e.what());
    }
    labels.push_back(std::move(label));
  }
  if (!backends.empty() && failures.size() == backends.size()) {
    std::string causes;
    for (const auto& f : failures) causes += "\n  " + f;
    throw BackendError("label_topic: all summarizer backends failed for topic " +
                       std::to_string(params.topic_id) + causes);
  }

  TopicLabel words;
  words.topic_id = params.topic_id;
  words.kind = LabelKind::word_list;
  words.source = "word_list";
  for (std::size_t i = 0; i < params.word_list.words.size(); ++i) {
    if (i) words.text += ' ';
    words.text += params.word_list.words[i];
  }
  labels.push_back(std::move(words));
  return labels;
}

}  // namespace topiclabel
