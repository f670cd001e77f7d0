#include <gtest/gtest.h>

#include "dgb/regpath.hpp"

using dgb::RegPath;

namespace {

bool m(const RegPath& r, std::vector<std::string> p) { return r.matches(p); }

}  // namespace

TEST(RegPath, StarThenAtom) {
  auto r = RegPath::parse("VPART* OBJ");
  EXPECT_TRUE(m(r, {"OBJ"}));
  EXPECT_TRUE(m(r, {"VPART", "OBJ"}));
  EXPECT_TRUE(m(r, {"VPART", "VPART", "OBJ"}));
  EXPECT_FALSE(m(r, {"VPART"}));
  EXPECT_FALSE(m(r, {"SUBJ", "OBJ"}));
  EXPECT_FALSE(m(r, {}));
}

TEST(RegPath, AlternationUnderStar) {
  auto r = RegPath::parse("{SUBJ|OBJ|VPART}* RELA");
  EXPECT_TRUE(m(r, {"RELA"}));
  EXPECT_TRUE(m(r, {"VPART", "OBJ", "RELA"}));
  EXPECT_FALSE(m(r, {"SPEC", "RELA"}));
}

TEST(RegPath, OptionalFactor) {
  auto r = RegPath::parse("(VPART) OBJ");
  EXPECT_TRUE(m(r, {"OBJ"}));
  EXPECT_TRUE(m(r, {"VPART", "OBJ"}));
  EXPECT_FALSE(m(r, {"VPART", "VPART", "OBJ"}));
}

TEST(RegPath, EmptyTextIsEpsilon) {
  auto r = RegPath::parse("");
  EXPECT_TRUE(r.is_epsilon());
  EXPECT_TRUE(m(r, {}));
  EXPECT_FALSE(m(r, {"SUBJ"}));
}

TEST(RegPath, RoundTripsThroughText) {
  for (const char* s : {"SUBJ", "VPART* OBJ", "{SUBJ|OBJ|VPART}* RELA", "(VPART) OBJ"}) {
    auto r = RegPath::parse(s);
    EXPECT_EQ(RegPath::parse(r.str()), r) << s;
  }
}

TEST(RegPath, Symbols) {
  auto syms = RegPath::parse("{SUBJ|OBJ}* RELA").symbols();
  EXPECT_EQ(syms.size(), 3u);
}

TEST(RegPath, IncrementalSimulationAgreesWithMatches) {
  auto r = RegPath::parse("VPART* OBJ");
  auto s = r.start();
  EXPECT_FALSE(r.accepting(s));
  s = r.step(s, "VPART");
  EXPECT_FALSE(r.accepting(s));
  s = r.step(s, "OBJ");
  EXPECT_TRUE(r.accepting(s));
  EXPECT_TRUE(r.step(s, "OBJ").empty());
}

TEST(RegPath, SyntaxErrorsThrow) {
  EXPECT_THROW(RegPath::parse("{SUBJ|OBJ"), std::invalid_argument);
  EXPECT_THROW(RegPath::parse("(SUBJ"), std::invalid_argument);
  EXPECT_THROW(RegPath::parse("*"), std::invalid_argument);
}
