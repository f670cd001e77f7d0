#include <gtest/gtest.h>

#include <algorithm>

#include "dgb/chart.hpp"
#include "dgb/order.hpp"
#include "domain_edit.hpp"
#include "fixture.hpp"

using namespace dgb;
using test::find_domain;
using test::move_domain;

namespace {

const Engine& engine() {
  static const Engine e(test::german());
  return e;
}

Analysis only_analysis(const char* sentence) {
  auto r = engine().analyses(std::string_view(sentence));
  if (r.size() != 1) throw std::runtime_error(std::string("expected one analysis of ") + sentence);
  return r[0];
}

std::vector<ViolationCode> codes(const std::vector<Violation>& v) {
  std::vector<ViolationCode> out;
  for (const auto& x : v) out.push_back(x.code);
  return out;
}

const char* kExampleShape =
    "domI[domINITIAL:initial[domN[domD[0] 1]] domMIDDLE:middle[2 domN[domD[3] 4] domVpp[5]] domFINAL:final[] 6]";

}  // namespace

TEST(DomainStructure, ExampleTree) {
  auto a = only_analysis(test::kExample1);
  const auto& dt = a.domains;
  EXPECT_EQ(dt.shape(), kExampleShape);
  EXPECT_EQ(dt.render(a.tokens), test::read_golden("example1.domains.txt"));

  int initial = find_domain(dt, "domINITIAL", 2);
  int middle = find_domain(dt, "domMIDDLE", 2);
  int final_ = find_domain(dt, "domFINAL", 2);
  ASSERT_GE(initial, 0);
  ASSERT_GE(middle, 0);
  ASSERT_GE(final_, 0);
  // d2 holds hat and the domains of Junge and gesehen; Mann's domain sits in d1.
  EXPECT_EQ(dt.member_domain(2), middle);
  EXPECT_EQ(dt.element_words(middle), (std::vector<int>{2, 4, 5}));
  EXPECT_EQ(dt.element_words(initial), (std::vector<int>{1}));
  EXPECT_TRUE(dt.domains[final_].elements.empty());
  EXPECT_EQ(dt.words_in_order(), (std::vector<int>{0, 1, 2, 3, 4, 5, 6}));
}

TEST(DomainStructure, DeterminerDomainIsLeafWithMember) {
  auto a = only_analysis(test::kExample1);
  int d = a.domains.member_domain(0);
  ASSERT_GE(d, 0);
  const auto& dom = a.domains.domains[d];
  EXPECT_EQ(dom.category, "domD");
  EXPECT_EQ(dom.member, 0);
  EXPECT_EQ(dom.elements, (std::vector<DomainElement>{{true, 0}}));
}

TEST(DomainStructure, SingleWordSentence) {
  Grammar g = load_grammar(R"(root: N
classes: N
deps: SPEC
domains:
  N = [* @self *]
lexicon:
  Kim N : lexeme kim ; valency opt SPEC N
)");
  auto r = analyses("Kim", g);
  ASSERT_EQ(r.size(), 1u);
  ASSERT_EQ(r[0].domains.domains.size(), 1u);
  EXPECT_EQ(r[0].domains.domains[0].member, 0);
  EXPECT_EQ(r[0].deps.words.size(), 1u);
  EXPECT_EQ(r[0].deps.root, 0);
}

TEST(DependencyTree, ExampleTree) {
  auto a = only_analysis(test::kExample1);
  const auto& d = a.deps;
  ASSERT_TRUE(d.is_tree());
  auto edge = [&](int w) { return std::make_pair(d.words[w].head, d.words[w].label); };
  EXPECT_EQ(edge(4), std::make_pair(2, std::string("SUBJ")));
  EXPECT_EQ(edge(5), std::make_pair(2, std::string("VPART")));
  EXPECT_EQ(edge(1), std::make_pair(5, std::string("OBJ")));
  EXPECT_EQ(edge(0), std::make_pair(1, std::string("SPEC")));
  EXPECT_EQ(edge(3), std::make_pair(4, std::string("SPEC")));
  EXPECT_EQ(d.words[1].lexeme, "mann");
  EXPECT_EQ(d.render(), test::read_golden("example1.triples.txt"));
  EXPECT_EQ(DepTree::parse(d.render()).render(), d.render());
}

TEST(DependencyTree, TwoAuxiliaryChain) {
  auto a = only_analysis(test::kTwoAux);
  const auto& d = a.deps;
  // den Mann will der Junge gesehen haben .
  EXPECT_EQ(d.words[6].head, 2);
  EXPECT_EQ(d.words[6].label, "VPART");
  EXPECT_EQ(d.words[5].head, 6);
  EXPECT_EQ(d.words[5].label, "VPART");
  EXPECT_EQ(d.words[1].head, 5);
  EXPECT_EQ(d.words[1].label, "OBJ");
}

TEST(Precedence, ExampleSatisfiesAllPredicates) {
  auto a = only_analysis(test::kExample1);
  EXPECT_TRUE(check_precedence(a.domains, a.deps, test::german()).empty());
  EXPECT_TRUE(check_order(a.domains, a.deps, test::german()).empty());
}

TEST(Precedence, ParticipleBeforeSubjectViolatesDependencyOrder) {
  auto a = only_analysis(test::kExample1);
  DomainTree dt = a.domains;
  int middle = find_domain(dt, "domMIDDLE", 2);
  int vpp = dt.member_domain(5);
  move_domain(dt, vpp, middle, 1);  // hat gesehen der Junge
  auto v = check_precedence(dt, a.deps, test::german());
  ASSERT_EQ(codes(v), std::vector<ViolationCode>{ViolationCode::PredDepOrder});
  EXPECT_EQ(v[0].word, 2);
}

TEST(Precedence, FiniteVerbNotFirstInItsDomain) {
  auto a = only_analysis(test::kExample1);
  DomainTree dt = a.domains;
  int middle = find_domain(dt, "domMIDDLE", 2);
  int subj = dt.member_domain(4);
  move_domain(dt, subj, middle, 0);  // der Junge hat gesehen
  auto v = check_precedence(dt, a.deps, test::german());
  EXPECT_EQ(codes(v), std::vector<ViolationCode>{ViolationCode::PredSelfFirst});
}

TEST(Precedence, LoneWordSatisfiesSelfPredicates) {
  Grammar g = load_grammar(R"(root: V
classes: V
deps: X
domains:
  V = [* @self *]
predicates:
  V selfFirst
  V selfLast
lexicon:
  go V : lexeme go
)");
  auto r = analyses("go", g);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_TRUE(check_precedence(r[0].domains, r[0].deps, g).empty());
}

TEST(FloatLicensing, ObjectFloatsIntoFiniteVerbDomain) {
  auto a = only_analysis(test::kExample1);
  // Mann (OBJ of gesehen) sits in hat's initial field; hat to gesehen is VPART.
  EXPECT_EQ(a.domains.domains[a.domains.domains[a.domains.member_domain(1)].parent].category, "domINITIAL");
  EXPECT_TRUE(check_float_licensing(a.domains, a.deps, test::german()).empty());
}

TEST(FloatLicensing, SubjectOutsideItsHeadDomainIsRejected) {
  auto all = engine().analyses(std::string_view("den Mann hat der Junge gesehen welcher lacht ."));
  auto it = std::find_if(all.begin(), all.end(), [](const Analysis& x) { return x.deps.words[7].head == 1; });
  ASSERT_NE(it, all.end());
  const Analysis& a = *it;
  DomainTree dt = a.domains;
  // Lift welcher (SUBJ of lacht) out of the relative clause into hat's initial field.
  int welcher = dt.member_domain(6);
  int initial = find_domain(dt, "domINITIAL", 2);
  ASSERT_GE(initial, 0);
  move_domain(dt, welcher, initial, 0);
  auto v = check_order(dt, a.deps, test::german());
  ASSERT_EQ(codes(v), std::vector<ViolationCode>{ViolationCode::FloatPath});
  EXPECT_EQ(v[0].word, 6);
  EXPECT_EQ(code_name(v[0].code), "FLOAT_PATH");
}

TEST(FloatLicensing, RelativeClauseInMiddleFieldIsRejected) {
  Engine full(test::german(), {.max_unpack = 1000, .specialize = false});
  auto tokens = full.tokens("der Junge hat den Mann welcher lacht gesehen .");
  bool seen = false;
  for (const auto& c : full.candidates(tokens)) {
    // Only candidates whose relative clause is an element of hat's middle field.
    int clause = c.domains.member_domain(6);
    int outer = clause >= 0 ? c.domains.domains[clause].parent : -1;
    if (outer < 0 || c.domains.domains[outer].owner != 2) continue;
    if (c.domains.domains[outer].field != "middle") continue;
    if (c.deps.words[6].label != "RELA") continue;
    bool clause_flagged = std::any_of(c.violations.begin(), c.violations.end(), [](const Violation& v) {
      return v.code == ViolationCode::FieldMismatch && v.word == 6;
    });
    EXPECT_TRUE(clause_flagged) << render_bracketed(c.c_tree, c.tokens);
    if (c.violations.size() == 1) {
      seen = true;
      EXPECT_EQ(code_name(c.violations[0].code), "FIELD_MISMATCH");
    }
  }
  EXPECT_TRUE(seen);
}
