#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dgb/chart.hpp"
#include "dgb/grammar.hpp"
#include "dgb/order.hpp"

namespace dgb {

class OracleBoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Linearization {
  std::vector<int> order;  // word indices of the dependency tree
  std::vector<std::string> words;
  DomainTree witness;
};

// Every surface order licensed for `dep`, built directly from domain
// specifications, float paths and precedence predicates. Sorted by surface
// string, one witness per string.
std::vector<Linearization> enumerate_linearizations(const DepTree& dep, const Grammar& g, size_t bound = 8);

// Dependency trees over `words` that satisfy valencies and lexical feature
// equations. Word order plays no role.
std::vector<DepTree> dependency_trees(std::span<const std::string> words, const Grammar& g, size_t bound = 8);

struct CrossReport {
  size_t permutations = 0;
  std::vector<std::vector<std::string>> parser_accepted;
  std::vector<std::vector<std::string>> oracle_generated;
  std::vector<std::vector<std::string>> only_parser;
  std::vector<std::vector<std::string>> only_oracle;

  bool ok() const { return only_parser.empty() && only_oracle.empty(); }
  std::string summary() const;
};

CrossReport cross_validate(std::span<const std::string> words, const Engine& engine, size_t bound = 8);

}  // namespace dgb
