#include <gtest/gtest.h>

#include <algorithm>

#include "dgb/chart.hpp"
#include "dgb/oracle.hpp"
#include "fixture.hpp"

using namespace dgb;

namespace {

const Engine& engine() {
  static const Engine e(test::german());
  return e;
}

bool generated(const std::vector<Linearization>& lins, const std::string& sentence) {
  auto want = tokenize(sentence);
  return std::any_of(lins.begin(), lins.end(), [&](const Linearization& l) { return l.words == want; });
}

}  // namespace

TEST(Oracle, ExampleTreeLinearizations) {
  auto a = engine().analyses(std::string_view(test::kExample1));
  ASSERT_EQ(a.size(), 1u);
  auto lins = enumerate_linearizations(a[0].deps, test::german());
  EXPECT_TRUE(generated(lins, "den Mann hat der Junge gesehen ."));
  EXPECT_TRUE(generated(lins, "der Junge hat den Mann gesehen ."));
  EXPECT_FALSE(generated(lins, "der Junge den Mann hat gesehen ."));
  for (const auto& l : lins) {
    EXPECT_TRUE(check_order(l.witness, a[0].deps, test::german()).empty());
    // Every generated string is accepted by the parser with this very tree.
    bool same_tree = false;
    for (const auto& b : engine().analyses(std::span<const std::string>(l.words)))
      same_tree = same_tree || b.deps.triples(test::german(), true) == a[0].deps.triples(test::german(), true);
    EXPECT_TRUE(same_tree) << testing::PrintToString(l.words);
  }
}

TEST(Oracle, BoundIsEnforced) {
  auto a = engine().analyses(std::string_view(test::kExample1));
  ASSERT_EQ(a.size(), 1u);
  EXPECT_THROW(enumerate_linearizations(a[0].deps, test::german(), 3), OracleBoundError);
}

TEST(Oracle, SingleWordTree) {
  Grammar g = load_grammar(R"(root: N
classes: N
deps: SPEC
domains:
  N = [* @self *]
lexicon:
  Kim N : lexeme kim ; valency opt SPEC N
)");
  std::vector<std::string> w{"Kim"};
  auto trees = dependency_trees(w, g);
  ASSERT_EQ(trees.size(), 1u);
  auto lins = enumerate_linearizations(trees[0], g);
  ASSERT_EQ(lins.size(), 1u);
  EXPECT_EQ(lins[0].words, w);

  Engine e(g);
  auto report = cross_validate(w, e);
  EXPECT_TRUE(report.ok()) << report.summary();
  EXPECT_EQ(report.parser_accepted, (std::vector<std::vector<std::string>>{w}));
  EXPECT_EQ(report.oracle_generated, report.parser_accepted);
}

TEST(Oracle, NoTreeMeansBothSidesEmpty) {
  std::vector<std::string> w{"den", "der", "."};
  EXPECT_TRUE(dependency_trees(w, test::german()).empty());
  auto report = cross_validate(w, engine());
  EXPECT_EQ(report.permutations, 6u);
  EXPECT_TRUE(report.parser_accepted.empty());
  EXPECT_TRUE(report.oracle_generated.empty());
  EXPECT_TRUE(report.ok());
}

TEST(Oracle, DependencyTreesRespectCase) {
  auto trees = dependency_trees(tokenize(test::kExample1), test::german());
  // Word order plays no role, so each determiner may go with either noun;
  // case still forces der onto the subject and den onto the object.
  ASSERT_EQ(trees.size(), 2u);
  for (const auto& t : trees) {
    for (const auto& w : t.words) {
      if (w.label != "SPEC") continue;
      const std::string& noun_label = t.words[w.head].label;
      EXPECT_EQ(noun_label, w.surface == "der" ? "SUBJ" : "OBJ");
    }
  }
}

// Exhaustive agreement between parser and oracle over every multiset of up to
// kMaxBag fixture words (11 distinct surfaces).
constexpr size_t kMaxBag = 5;
constexpr size_t kMultisets = 11 + 66 + 286 + 1001 + 3003;

TEST(CrossValidation, SmallMultisetsAgree) {
  std::vector<std::string> vocab;
  for (const auto& e : test::german().lexicon)
    if (std::find(vocab.begin(), vocab.end(), e.surface) == vocab.end()) vocab.push_back(e.surface);
  std::sort(vocab.begin(), vocab.end());
  size_t multisets = 0, nonempty = 0;
  std::vector<std::string> bag;
  std::function<void(size_t)> rec = [&](size_t from) {
    if (!bag.empty()) {
      auto report = cross_validate(bag, engine());
      ++multisets;
      nonempty += !report.parser_accepted.empty();
      EXPECT_TRUE(report.ok()) << testing::PrintToString(bag) << "\n" << report.summary();
    }
    if (bag.size() == kMaxBag) return;
    for (size_t i = from; i < vocab.size(); ++i) {
      bag.push_back(vocab[i]);
      rec(i);
      bag.pop_back();
    }
  };
  rec(0);
  EXPECT_EQ(multisets, kMultisets);
  EXPECT_GT(nonempty, 0u);
}

TEST(CrossValidation, ExamplePermutations) {
  auto report = cross_validate(tokenize(test::kExample1), engine());
  EXPECT_EQ(report.permutations, 5040u);
  EXPECT_TRUE(report.ok()) << report.summary();
  EXPECT_EQ(report.parser_accepted.size(), 40u);
}
