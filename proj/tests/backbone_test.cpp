#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <set>

#include "dgb/backbone.hpp"
#include "dgb/chart.hpp"
#include "fixture.hpp"

using namespace dgb;

namespace {

const BackboneRule* rule(const BackboneRuleSet& rs, const std::string& lhs) {
  auto rules = rs.rules_for(lhs);
  return rules.size() == 1 ? rules[0] : nullptr;
}

std::string line(const BackboneRuleSet& rs, const std::string& prefix) {
  std::string dump = dump_backbone(rs);
  auto at = dump.find("\n" + prefix);
  if (at == std::string::npos) return {};
  auto end = dump.find('\n', at + 1);
  return dump.substr(at + 1, end - at - 1);
}

std::set<std::string> alternatives(const RhsItem& item) {
  std::set<std::string> out;
  for (const auto& a : item.alternatives) out.insert(domain_category_name(a.word_class));
  return out;
}

Category cat(const std::string& n, CategoryKind k = CategoryKind::Domain) { return {n, k}; }

RhsItem item(const std::string& n, CategoryKind k = CategoryKind::Domain) { return {cat(n, k), Repetition::One, {}, {}, -1}; }

}  // namespace

TEST(CompileDomains, NounDeterminerAndFiniteVerbRules) {
  auto rs = compile_domains(test::german());
  EXPECT_EQ(line(rs, "domN "), "domN --> DOMAIN* N DOMAIN*.");
  EXPECT_EQ(line(rs, "domD "), "domD --> D.");
  EXPECT_EQ(line(rs, "domVfin "), "domVfin = domINITIAL domMIDDLE domFINAL.");
  EXPECT_EQ(line(rs, "domINITIAL "), "domINITIAL --> DOMAIN.");
  EXPECT_EQ(line(rs, "domMIDDLE "), "domMIDDLE --> DOMAIN* Vfin DOMAIN*.");
  EXPECT_EQ(line(rs, "domFINAL "), "domFINAL --> (DOMAIN).");
}

TEST(CompileDomains, RulesAreAnnotated) {
  auto rs = compile_domains(test::german());
  const BackboneRule* middle = rule(rs, "domMIDDLE");
  ASSERT_NE(middle, nullptr);
  ASSERT_EQ(middle->rhs.size(), 3u);
  EXPECT_EQ(middle->rhs[1].annotations, (std::vector<Annotation>{{Annotation::Kind::Head, ""}}));
  EXPECT_EQ(middle->rhs[0].repetition, Repetition::Star);
  auto& mod = middle->rhs[0].annotations;
  EXPECT_NE(std::find(mod.begin(), mod.end(), Annotation{Annotation::Kind::Modifier, ""}), mod.end());
  EXPECT_NE(std::find(mod.begin(), mod.end(), Annotation{Annotation::Kind::Field, "middle"}), mod.end());
  EXPECT_TRUE(rs.modifier_path.matches(std::vector<std::string>{"VPART", "VPART", "OBJ"}));
  EXPECT_FALSE(rs.modifier_path.matches(std::vector<std::string>{"VPART", "SUBJ"}));
}

TEST(CompileDomains, EveryRuleHasSingleLeftHandSide) {
  auto rs = expand_metacategories(compile_domains(test::german()));
  for (const auto& r : rs.rules) EXPECT_FALSE(r.lhs.name.empty());
  EXPECT_TRUE(rs.metacategories.empty());
}

TEST(ExpandMetacategories, SlotCategoriesBecomeSiblings) {
  auto rs = expand_metacategories(compile_domains(test::german()));
  auto roots = rs.rules_for("ROOT");
  auto it = std::find_if(roots.begin(), roots.end(), [](const BackboneRule* r) { return r->rhs.size() == 3; });
  ASSERT_NE(it, roots.end());
  const auto& rhs = (*it)->rhs;
  EXPECT_EQ(rhs[0].category.name, "domINITIAL");
  EXPECT_EQ(rhs[1].category.name, "domMIDDLE");
  EXPECT_EQ(rhs[2].category.name, "domFINAL");
  EXPECT_GE(rhs[0].group, 0);
  EXPECT_EQ(rhs[0].group, rhs[1].group);
  EXPECT_EQ(rhs[1].group, rhs[2].group);
  for (const auto& r : rs.rules)
    for (const auto& i : r.rhs) EXPECT_NE(i.category.name, "domVfin") << r.lhs.name;
}

TEST(ExpandMetacategories, AliasOfAliasIsFlattened) {
  BackboneRuleSet rs;
  rs.metacategories = {{cat("domA", CategoryKind::Meta), {cat("domB", CategoryKind::Meta), cat("domZ", CategoryKind::Slot)}},
                       {cat("domB", CategoryKind::Meta), {cat("domX", CategoryKind::Slot), cat("domY", CategoryKind::Slot)}}};
  rs.rules = {{kRoot, {item("domA", CategoryKind::Meta)}}};
  auto out = expand_metacategories(rs);
  ASSERT_EQ(out.rules.size(), 1u);
  std::vector<std::string> names;
  for (const auto& i : out.rules[0].rhs) names.push_back(i.category.name);
  EXPECT_EQ(names, (std::vector<std::string>{"domX", "domY", "domZ"}));
}

TEST(ExpandMetacategories, CycleIsAnError) {
  BackboneRuleSet rs;
  rs.metacategories = {{cat("domA", CategoryKind::Meta), {cat("domB", CategoryKind::Meta)}},
                       {cat("domB", CategoryKind::Meta), {cat("domA", CategoryKind::Meta)}}};
  rs.rules = {{kRoot, {item("domA", CategoryKind::Meta)}}};
  EXPECT_THROW(expand_metacategories(rs), BackboneError);

  BackboneRuleSet self;
  self.metacategories = {{cat("domA", CategoryKind::Meta), {cat("domA", CategoryKind::Meta)}}};
  self.rules = {{kRoot, {item("domA", CategoryKind::Meta)}}};
  EXPECT_THROW(expand_metacategories(self), BackboneError);
}

TEST(Specialize, NounDomainNarrowsToFiniteVerbAndDeterminer) {
  auto rs = specialize_domain_union(compile_domains(test::german()), test::german());
  const BackboneRule* n = rule(rs, "domN");
  ASSERT_NE(n, nullptr);
  ASSERT_EQ(n->rhs.size(), 3u);
  EXPECT_EQ(alternatives(n->rhs[0]), (std::set<std::string>{"domD", "domVfin"}));
  EXPECT_EQ(alternatives(n->rhs[2]), (std::set<std::string>{"domD", "domVfin"}));
  EXPECT_EQ(line(rs, "domFINAL "), "domFINAL --> ({domVfin}).");
}

TEST(Specialize, PlaceableClassesFollowFloatPaths) {
  const auto& g = test::german();
  const auto& initial = g.domain("Vfin")->slots[0];
  auto cls = placeable_classes(g, "Vfin", initial);
  std::sort(cls.begin(), cls.end());
  // N via SUBJ or a floated OBJ, Vpp via VPART; the relative clause is barred by its field.
  EXPECT_EQ(cls, (std::vector<std::string>{"N", "Vpp"}));
  auto fin = placeable_classes(g, "Vfin", g.domain("Vfin")->slots[2]);
  EXPECT_EQ(fin, std::vector<std::string>{"Vfin"});
}

TEST(Specialize, FullyConnectedGrammarIsNotNarrowed) {
  Grammar g = load_grammar(R"(root: A
classes: A B
deps: X Y
domains:
  A = [* @self *]
  B = [* @self]
lexicon:
  a A : lexeme a ; valency opt X A ; valency opt Y B
  b B : lexeme b ; valency opt X A ; valency opt Y B
)");
  auto rs = compile_domains(g);
  auto sp = specialize_domain_union(rs, g);
  for (const auto& r : sp.rules) {
    for (const auto& i : r.rhs) {
      if (i.category.kind == CategoryKind::Union) {
        EXPECT_EQ(alternatives(i), (std::set<std::string>{"domA", "domB"}));
      }
    }
  }
  EXPECT_EQ(sp.rules.size(), rs.rules.size());
}

TEST(Specialize, EmptyLexiconDropsRulesNeedingDomains) {
  Grammar g = test::german();
  g.lexicon.clear();
  auto sp = specialize_domain_union(compile_domains(g), g);
  for (const auto& r : sp.rules)
    for (const auto& i : r.rhs)
      if (i.category.kind == CategoryKind::Union) {
        EXPECT_TRUE(i.alternatives.empty());
        EXPECT_NE(i.repetition, Repetition::One) << r.lhs.name;
      }
  EXPECT_TRUE(sp.rules_for("domINITIAL").empty());
  EXPECT_TRUE(sp.rules_for("domI").empty());
}

// The narrowed backbone must accept exactly the same sentences as the full one
// once the functional constraints are applied: every word sequence of up to
// three fixture words, plus all permutations of the example sentence.
TEST(Specialize, PreservesLanguage) {
  Engine full(test::german(), {.max_unpack = 1000, .specialize = false});
  Engine narrow(test::german(), {.max_unpack = 1000, .specialize = true});
  std::vector<std::string> vocab;
  for (const auto& e : test::german().lexicon)
    if (std::find(vocab.begin(), vocab.end(), e.surface) == vocab.end()) vocab.push_back(e.surface);

  size_t checked = 0, accepted = 0;
  std::vector<std::string> seq;
  std::function<void(size_t)> rec = [&](size_t len) {
    if (!seq.empty()) {
      bool a = full.accepts(seq), b = narrow.accepts(seq);
      ++checked;
      accepted += b;
      EXPECT_EQ(a, b) << testing::PrintToString(seq);
    }
    if (seq.size() == len) return;
    for (const auto& w : vocab) {
      seq.push_back(w);
      rec(len);
      seq.pop_back();
    }
  };
  rec(3);
  EXPECT_EQ(checked, vocab.size() + vocab.size() * vocab.size() + vocab.size() * vocab.size() * vocab.size());
  EXPECT_GT(accepted, 0u);

  auto tokens = full.tokens(test::kExample1);
  std::sort(tokens.begin(), tokens.end());
  int perms = 0;
  do {
    if (++perms % 7) continue;  // every seventh permutation keeps the run short
    EXPECT_EQ(full.accepts(tokens), narrow.accepts(tokens)) << testing::PrintToString(tokens);
  } while (std::next_permutation(tokens.begin(), tokens.end()));
}
