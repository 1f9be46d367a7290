#include "stancegraph/stance.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

namespace stancegraph {

namespace {

// Frozen marker lists. Multiword entries are matched as phrases before the
// remaining text is tokenized, so "not true" never double-counts "true".
const std::vector<std::string> kOpposeMarkers = {"false",      "fake", "debunked", "hoax",
                                                 "misleading", "not true", "lie",  "wrong"};
const std::vector<std::string> kSupportMarkers = {"agree",   "true",      "exactly", "correct",
                                                  "support", "well said", "right"};

std::string lowercase(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

// Counts phrase occurrences on word boundaries and blanks them out in place.
int consume_phrase(std::string& text, const std::string& phrase) {
  int count = 0;
  size_t pos = 0;
  while ((pos = text.find(phrase, pos)) != std::string::npos) {
    bool left_ok = pos == 0 || !is_word_char(text[pos - 1]);
    size_t end = pos + phrase.size();
    bool right_ok = end >= text.size() || !is_word_char(text[end]);
    if (left_ok && right_ok) {
      ++count;
      std::fill(text.begin() + pos, text.begin() + end, ' ');
      pos = end;
    } else {
      pos += 1;
    }
  }
  return count;
}

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char c : text) {
    if (is_word_char(c)) {
      cur.push_back(c);
    } else if (!cur.empty()) {
      tokens.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(cur);
  return tokens;
}

std::string collapse_spaces(const std::string& s) {
  std::string out;
  bool in_space = true;  // also trims leading whitespace
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!in_space) out.push_back(' ');
      in_space = true;
    } else {
      out.push_back(c);
      in_space = false;
    }
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

}  // namespace

std::string rephrase_topic(const std::string& topic, const std::string& context) {
  std::string t = collapse_spaces(topic);
  if (t.empty()) throw Error(Errc::EmptyTopic, "topic must be non-empty");
  std::string c = collapse_spaces(context);
  std::string sentence = "The topic of this sentence is about " + t;
  if (!c.empty()) sentence += " " + c;
  return sentence + ".";
}

StanceScore lexicon_classify(const std::string& /*source_text*/,
                             const std::string& response_text) {
  std::string text = lowercase(response_text);
  int oppose = 0;
  int support = 0;
  for (const auto& m : kOpposeMarkers) {
    if (m.find(' ') != std::string::npos) oppose += consume_phrase(text, m);
  }
  for (const auto& m : kSupportMarkers) {
    if (m.find(' ') != std::string::npos) support += consume_phrase(text, m);
  }
  for (const std::string& tok : tokenize(text)) {
    if (std::find(kOpposeMarkers.begin(), kOpposeMarkers.end(), tok) != kOpposeMarkers.end()) {
      ++oppose;
    } else if (std::find(kSupportMarkers.begin(), kSupportMarkers.end(), tok) !=
               kSupportMarkers.end()) {
      ++support;
    }
  }
  if (support > oppose) return {1.0, 0.0, 0.0};
  if (oppose > support) return {0.0, 1.0, 0.0};
  return {0.0, 0.0, 1.0};
}

Stance argmax_stance(const StanceScore& score) {
  if (score.support >= score.oppose && score.support >= score.neutral) return Stance::Support;
  if (score.oppose >= score.neutral) return Stance::Oppose;
  return Stance::Neutral;
}

HeteroGraph label_graph_stances(const HeteroGraph& g, const StanceProvider& provider,
                                const LabelConfig& config) {
  HeteroGraph out;
  for (const auto& [id, rec] : g.nodes()) out.add_node(rec);
  for (Edge e : g.edges()) {
    if (is_interaction(e.kind) && !e.stance.has_value()) {
      const auto& post = std::get<PostAttrs>(g.node(e.dst).attrs);
      if (e.kind == EdgeKind::Retweets && post.text.empty()) {
        e.stance = config.bare_reshare_stance == BareReshareStance::Support ? Stance::Support
                                                                            : Stance::Neutral;
      } else {
        std::string source;
        if (post.claim_id && !collapse_spaces(*post.claim_id).empty()) {
          source = rephrase_topic(*post.claim_id, "");
        }
        e.stance = argmax_stance(provider.classify(source, post.text));
      }
    }
    out.add_edge(std::move(e));
  }
  out.freeze();
  return out;
}

}  // namespace stancegraph
