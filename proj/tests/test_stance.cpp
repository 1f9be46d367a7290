#include <doctest.h>

#include "stancegraph/stance.hpp"
#include "test_support.hpp"

using namespace stancegraph;
using namespace testsupport;

namespace {

// Independent marker-count oracle over the frozen lists.
Stance oracle_lexicon(std::string text) {
  for (char& c : text) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  auto count_phrase = [&](const std::string& phrase) {
    int n = 0;
    size_t pos = 0;
    while ((pos = text.find(phrase, pos)) != std::string::npos) {
      ++n;
      for (size_t k = 0; k < phrase.size(); ++k) text[pos + k] = '#';
      pos += phrase.size();
    }
    return n;
  };
  int o = count_phrase("not true");
  int s = count_phrase("well said");
  std::string word;
  std::vector<std::string> words;
  for (char c : text + " ") {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      word.push_back(c);
    } else if (!word.empty()) {
      words.push_back(word);
      word.clear();
    }
  }
  for (const auto& w : words) {
    if (w == "false" || w == "fake" || w == "debunked" || w == "hoax" || w == "misleading" ||
        w == "lie" || w == "wrong") {
      ++o;
    }
    if (w == "agree" || w == "true" || w == "exactly" || w == "correct" || w == "support" ||
        w == "right") {
      ++s;
    }
  }
  if (s > o) return Stance::Support;
  if (o > s) return Stance::Oppose;
  return Stance::Neutral;
}

struct FixedProvider final : StanceProvider {
  StanceScore score;
  StanceScore classify(const std::string&, const std::string&) const override { return score; }
};

}  // namespace

TEST_CASE("rephrase_topic builds the template sentence") {
  CHECK(rephrase_topic("Trump", "during the presidential election") ==
        "The topic of this sentence is about Trump during the presidential election.");
  CHECK(rephrase_topic("vaccines", "") == "The topic of this sentence is about vaccines.");
  CHECK(rephrase_topic("  AI  ", "in 2024") == "The topic of this sentence is about AI in 2024.");
  CHECK_THROWS_AS(rephrase_topic("", "ctx"), Error);
  CHECK_THROWS_AS(rephrase_topic("   ", "ctx"), Error);
}

TEST_CASE("lexicon_classify matches the marker-count oracle") {
  auto one_hot = [](const StanceScore& s) {
    return argmax_stance(s);
  };
  CHECK(one_hot(lexicon_classify("", "This is false and was debunked.")) == Stance::Oppose);
  CHECK(one_hot(lexicon_classify("", "I agree, this is exactly right.")) == Stance::Support);
  CHECK(one_hot(lexicon_classify("", "Interesting.")) == Stance::Neutral);

  // multiword precedence: "not true" must not count "true"
  CHECK(one_hot(lexicon_classify("", "that is not true")) == Stance::Oppose);
  CHECK(one_hot(lexicon_classify("", "well said, friend")) == Stance::Support);

  const char* samples[] = {
      "Totally agree, well said and exactly right",
      "this hoax is fake and misleading",
      "not true, not true, but you are right twice over: right",
      "TRUE facts support this",
      "nothing to see here",
      "wrong wrong wrong but correct correct correct",
      "the claim was debunked; I agree it is false",
  };
  for (const char* s : samples) {
    CAPTURE(s);
    CHECK(argmax_stance(lexicon_classify("src ignored", s)) == oracle_lexicon(s));
  }
}

TEST_CASE("lexicon scores are one-hot and pure") {
  StanceScore a = lexicon_classify("x", "I agree");
  StanceScore b = lexicon_classify("x", "I agree");
  CHECK(a.support == b.support);
  CHECK(a.oppose == b.oppose);
  CHECK(a.neutral == b.neutral);
  CHECK(a.support + a.oppose + a.neutral == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("argmax tie-break is Support > Oppose > Neutral") {
  CHECK(argmax_stance({0.4, 0.4, 0.2}) == Stance::Support);
  CHECK(argmax_stance({0.2, 0.4, 0.4}) == Stance::Oppose);
  CHECK(argmax_stance({1.0 / 3, 1.0 / 3, 1.0 / 3}) == Stance::Support);
  CHECK(argmax_stance({0.1, 0.2, 0.7}) == Stance::Neutral);
}

TEST_CASE("label_graph_stances labels unlabeled interactions only") {
  HeteroGraph g;
  g.add_node(user_node("u1"));
  g.add_node(user_node("u2"));
  g.add_node(post_node("p_oppose", "this was debunked as false", true, 1));
  g.add_node(post_node("p_plain", "weather update", false, 2));
  g.add_edge({"u1", "p_oppose", EdgeKind::Retweets, std::nullopt, 10});
  g.add_edge({"u2", "p_plain", EdgeKind::Replies, std::nullopt, 11});
  g.add_edge({"u2", "p_oppose", EdgeKind::Quotes, Stance::Support, 12});  // pre-labeled
  g.freeze();

  LexiconProvider lexicon;
  HeteroGraph labeled = label_graph_stances(g, lexicon);

  CHECK(labeled.edges()[0].stance == Stance::Oppose);   // post text triggers oppose markers
  CHECK(labeled.edges()[1].stance == Stance::Neutral);  // no markers
  CHECK(labeled.edges()[2].stance == Stance::Support);  // untouched

  SUBCASE("node set, kinds and timestamps are unchanged") {
    CHECK(labeled.node_count() == g.node_count());
    REQUIRE(labeled.edge_count() == g.edge_count());
    for (size_t i = 0; i < g.edge_count(); ++i) {
      CHECK(labeled.edges()[i].src == g.edges()[i].src);
      CHECK(labeled.edges()[i].dst == g.edges()[i].dst);
      CHECK(labeled.edges()[i].kind == g.edges()[i].kind);
      CHECK(labeled.edges()[i].ts == g.edges()[i].ts);
    }
  }

  SUBCASE("a provider that would flip a pre-labeled edge does not") {
    FixedProvider always_oppose;
    always_oppose.score = {0.0, 1.0, 0.0};
    HeteroGraph relabeled = label_graph_stances(g, always_oppose);
    CHECK(relabeled.edges()[2].stance == Stance::Support);
  }
}

TEST_CASE("bare reshares follow the configured stance") {
  HeteroGraph g;
  g.add_node(user_node("u1"));
  g.add_node(post_node("p_bare", "", true, 1));  // textless reshare target
  g.add_edge({"u1", "p_bare", EdgeKind::Retweets, std::nullopt, 5});
  g.freeze();

  LexiconProvider lexicon;
  HeteroGraph default_labeled = label_graph_stances(g, lexicon);
  CHECK(default_labeled.edges()[0].stance == Stance::Support);  // implicit agreement

  LabelConfig cfg;
  cfg.bare_reshare_stance = BareReshareStance::Neutral;
  HeteroGraph neutral_labeled = label_graph_stances(g, lexicon, cfg);
  CHECK(neutral_labeled.edges()[0].stance == Stance::Neutral);
}

TEST_CASE("graph with zero interaction edges is unchanged") {
  HeteroGraph g;
  g.add_node(user_node("u1"));
  g.add_node(user_node("u2"));
  g.add_edge({"u1", "u2", EdgeKind::Follows, std::nullopt, std::nullopt});
  g.freeze();
  LexiconProvider lexicon;
  HeteroGraph labeled = label_graph_stances(g, lexicon);
  CHECK(graph_equal(g, labeled));
}
