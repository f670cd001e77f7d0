#include <gtest/gtest.h>

#include <algorithm>

#include "dgb/grammar.hpp"
#include "fixture.hpp"

using namespace dgb;

namespace {

const char* kTiny = R"(root: V
classes: V N
deps: SUBJ
domains:
  V = [* @self *]
  N = [@self]
lexicon:
  sleeps V : lexeme sleep ; valency req SUBJ N
  Kim N : lexeme kim
)";

size_t count(const std::vector<SchemaConstraint>& b, SchemaConstraint::Kind k) {
  return static_cast<size_t>(std::count_if(b.begin(), b.end(), [&](const auto& c) { return c.kind == k; }));
}

}  // namespace

TEST(Grammar, FixtureInventories) {
  const auto& g = test::german();
  std::vector<std::string> classes = g.classes, deps = g.deps;
  std::sort(classes.begin(), classes.end());
  std::sort(deps.begin(), deps.end());
  EXPECT_EQ(classes, (std::vector<std::string>{"D", "I", "N", "Vfin", "Vpp"}));
  EXPECT_EQ(deps, (std::vector<std::string>{"OBJ", "PROPO", "RELA", "SPEC", "SUBJ", "VPART"}));
  EXPECT_TRUE(validate_grammar(g).empty());
}

TEST(Grammar, FixtureFiniteVerbDomains) {
  const DomainSpec* d = test::german().domain("Vfin");
  ASSERT_NE(d, nullptr);
  ASSERT_EQ(d->slots.size(), 3u);
  EXPECT_EQ(d->slots[0].name, "INITIAL");
  EXPECT_EQ(d->slots[0].cardinality, Cardinality::ExactlyOne);
  EXPECT_EQ(d->slots[0].field, "initial");
  EXPECT_EQ(d->self_slot(), 1);
  EXPECT_EQ(d->slots[1].before, Cardinality::ZeroOrMore);
  EXPECT_EQ(d->slots[1].after, Cardinality::ZeroOrMore);
  EXPECT_EQ(d->slots[2].cardinality, Cardinality::AtMostOne);
  EXPECT_EQ(d->slots[2].accepts, std::vector<std::string>{"RELA"});
}

TEST(Grammar, FixtureTemplatesExpand) {
  const LexicalEntry* hat = test::german().entry("hat", "Vfin");
  ASSERT_NE(hat, nullptr);
  EXPECT_EQ(hat->lexeme, "haben");
  ASSERT_EQ(hat->valency.size(), 2u);
  EXPECT_EQ(hat->valency[0], (ValencySlot{Optionality::Req, "SUBJ", "N"}));
  EXPECT_EQ(hat->valency[1], (ValencySlot{Optionality::Req, "VPART", "Vpp"}));
  ASSERT_EQ(hat->features.size(), 1u);
  EXPECT_EQ(hat->features[0].str(), "SUBJ CASE = nom");

  const LexicalEntry* mann = test::german().entry("Mann", "N");
  ASSERT_NE(mann, nullptr);
  ASSERT_NE(mann->slot("RELA"), nullptr);
  EXPECT_EQ(mann->slot("RELA")->optionality, Optionality::Opt);
}

TEST(Grammar, FixturePathsAndPredicates) {
  const auto& g = test::german();
  const ModifierPathSpec* obj = g.path_spec("OBJ");
  ASSERT_NE(obj, nullptr);
  EXPECT_TRUE(obj->float_path.matches(std::vector<std::string>{"VPART", "VPART"}));
  const ModifierPathSpec* rela = g.path_spec("RELA");
  ASSERT_NE(rela, nullptr);
  EXPECT_EQ(rela->target_field, "final");
  EXPECT_TRUE(g.path_spec("SUBJ")->float_path.is_epsilon());
  EXPECT_EQ(g.predicates_for("Vfin").size(), 3u);
}

TEST(Grammar, EmptySectionsAreValid) {
  Grammar g = load_grammar("classes:\ndeps:\nlexicon:\n");
  EXPECT_TRUE(g.classes.empty());
  EXPECT_TRUE(g.deps.empty());
  EXPECT_TRUE(g.lexicon.empty());
  EXPECT_TRUE(validate_grammar(g).empty());
}

TEST(Grammar, UndeclaredClassNamesClassAndLine) {
  std::string text = std::string(kTiny) + "  Bob X : lexeme bob\n";
  try {
    load_grammar(text);
    FAIL() << "expected GrammarError";
  } catch (const GrammarError& e) {
    EXPECT_NE(std::string(e.what()).find("'X'"), std::string::npos) << e.what();
    EXPECT_EQ(e.loc().line, 10);
  }
}

TEST(Grammar, TwoSelfSlotsIsOneViolation) {
  Grammar g = load_grammar(kTiny);
  g.domains[0].slots = {g.domains[0].slots[0], g.domains[0].slots[0]};
  g.domains[0].slots[0].name = "A";
  g.domains[0].slots[1].name = "B";
  auto report = validate_grammar(g);
  ASSERT_EQ(report.diagnostics.size(), 1u);
  EXPECT_TRUE(report.has_errors());
  EXPECT_NE(report.diagnostics[0].message.find("@self"), std::string::npos);
}

TEST(Grammar, DuplicatePredicateWarnsAndDeduplicates) {
  std::string text = R"(root: V
classes: V N
deps: OBJ VPART
domains:
  V = [* @self *]
  N = [@self]
predicates:
  V OBJ < VPART
  V OBJ < VPART
)";
  std::vector<Diagnostic> warnings;
  Grammar g = load_grammar(text, &warnings);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_EQ(warnings[0].severity, Diagnostic::Severity::Warning);
  EXPECT_EQ(warnings[0].loc.line, 9);
  EXPECT_EQ(g.predicates.size(), 1u);
  EXPECT_TRUE(validate_grammar(g).empty());
}

TEST(Grammar, SyntaxErrorCarriesLocation) {
  try {
    load_grammar("classes: V\ndomains:\n  V = [* @self\n");
    FAIL() << "expected GrammarError";
  } catch (const GrammarError& e) {
    EXPECT_EQ(e.loc().line, 3);
  }
}

TEST(Grammar, MissingRootClassIsAnError) {
  Grammar g = load_grammar(kTiny);
  g.root_classes.clear();
  EXPECT_TRUE(validate_grammar(g).has_errors());
}

TEST(Grammar, SerializationRoundTrips) {
  const auto& g = test::german();
  std::string text = serialize_grammar(g);
  Grammar back = load_grammar(text);
  EXPECT_EQ(back, g);
  EXPECT_EQ(serialize_grammar(back), text);

  Grammar tiny = load_grammar(kTiny);
  EXPECT_EQ(load_grammar(serialize_grammar(tiny)), tiny);
}

TEST(ExpandValency, RequiredSlotIsOneBranch) {
  auto schemata = expand_valency(*test::german().entry("lacht", "Vfin"));
  ASSERT_EQ(schemata.size(), 1u);
  EXPECT_EQ(schemata[0].dep, "SUBJ");
  ASSERT_EQ(schemata[0].branches.size(), 1u);
  const auto& b = schemata[0].branches[0];
  EXPECT_EQ(count(b, SchemaConstraint::Kind::Defining), 1u);
  EXPECT_EQ(count(b, SchemaConstraint::Kind::Existential), 1u);
  for (const auto& c : b) {
    if (c.kind == SchemaConstraint::Kind::Defining) {
      EXPECT_EQ(c.path, (std::vector<std::string>{"SUBJ", "CLASS"}));
      EXPECT_EQ(c.value, "N");
    } else {
      EXPECT_EQ(c.path, (std::vector<std::string>{"SUBJ", "LEXEME"}));
    }
  }
}

TEST(ExpandValency, OptionalSlotHasForbiddingBranch) {
  auto schemata = expand_valency(*test::german().entry("Mann", "N"));
  auto it = std::find_if(schemata.begin(), schemata.end(), [](const auto& s) { return s.dep == "RELA"; });
  ASSERT_NE(it, schemata.end());
  ASSERT_EQ(it->branches.size(), 2u);
  int forbidding = 0;
  for (const auto& b : it->branches)
    if (b.size() == 1 && b[0].kind == SchemaConstraint::Kind::Negative && b[0].path == std::vector<std::string>{"RELA"})
      ++forbidding;
  EXPECT_EQ(forbidding, 1);
}

TEST(ExpandValency, EmptyValencyIsEmpty) {
  EXPECT_TRUE(expand_valency(*test::german().entry("den", "D")).empty());
}
