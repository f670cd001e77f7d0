#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "dgb/grammar.hpp"

namespace dgb::test {

inline std::string grammar_path(const std::string& name = "german.dg") {
  return std::string(DGB_GRAMMAR_DIR) + "/" + name;
}

inline const Grammar& german() {
  static const Grammar g = load_grammar_file(grammar_path());
  return g;
}

inline std::string read_golden(const std::string& name) {
  std::ifstream in(std::string(DGB_GOLDEN_DIR) + "/" + name);
  if (!in) throw std::runtime_error("missing golden file " + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline constexpr const char* kExample1 = "den Mann hat der Junge gesehen .";
inline constexpr const char* kTwoAux = "den Mann will der Junge gesehen haben .";

}  // namespace dgb::test
