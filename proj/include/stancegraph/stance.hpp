#pragma once

#include <memory>
#include <string>

#include "stancegraph/graph.hpp"

namespace stancegraph {

// Probability-style stance score; components sum to 1 within 1e-9.
struct StanceScore {
  double support = 0.0;
  double oppose = 0.0;
  double neutral = 0.0;
};

// Pluggable classifier boundary. Implementations must be deterministic for
// fixed inputs and safe for concurrent read-only use.
class StanceProvider {
 public:
  virtual ~StanceProvider() = default;
  virtual StanceScore classify(const std::string& source_text,
                               const std::string& response_text) const = 0;
};

// "The topic of this sentence is about {topic} {context}." with single-space
// normalization; an empty context drops the trailing clause.
std::string rephrase_topic(const std::string& topic, const std::string& context);

// Deterministic marker-count classifier; the desk-scale stand-in for a
// fine-tuned model. Counts fixed support/opposition markers in response_text
// (multiword markers matched as phrases first) and returns a one-hot score.
StanceScore lexicon_classify(const std::string& source_text, const std::string& response_text);

class LexiconProvider final : public StanceProvider {
 public:
  StanceScore classify(const std::string& source_text,
                       const std::string& response_text) const override {
    return lexicon_classify(source_text, response_text);
  }
};

// Argmax with fixed tie-break Support > Oppose > Neutral.
Stance argmax_stance(const StanceScore& score);

enum class BareReshareStance { Neutral, Support };

struct LabelConfig {
  // Bare reshares (a retweet of a post with no text) carry no utterance of
  // their own; they are treated as implicit agreement by default.
  BareReshareStance bare_reshare_stance = BareReshareStance::Support;
};

// Returns a copy of g where every unlabeled user->post interaction edge
// carries a stance. Already-labeled edges are left untouched; nothing else
// about the graph changes. The copy is frozen.
//
// Text pair fed to the provider per edge u -> p:
//   source_text   = topic sentence from p's claim_id when present, else ""
//   response_text = p's text (the utterance content the interaction carries)
// A Retweets edge whose post has no text is a bare reshare and is labeled
// from LabelConfig without consulting the provider.
HeteroGraph label_graph_stances(const HeteroGraph& g, const StanceProvider& provider,
                                const LabelConfig& config = {});

}  // namespace stancegraph
