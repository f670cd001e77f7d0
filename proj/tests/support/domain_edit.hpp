#pragma once

#include <algorithm>
#include <string>

#include "dgb/order.hpp"

namespace dgb::test {

inline int find_domain(const DomainTree& dt, const std::string& category, int owner) {
  for (size_t i = 0; i < dt.domains.size(); ++i)
    if (dt.domains[i].category == category && dt.domains[i].owner == owner) return static_cast<int>(i);
  return -1;
}

// Moves child domain `d` to position `pos` of domain `to`.
inline void move_domain(DomainTree& dt, int d, int to, size_t pos) {
  auto& from = dt.domains[dt.domains[d].parent].elements;
  from.erase(std::find(from.begin(), from.end(), DomainElement{false, d}));
  auto& dest = dt.domains[to].elements;
  dest.insert(dest.begin() + static_cast<long>(std::min(pos, dest.size())), DomainElement{false, d});
  dt.domains[d].parent = to;
}

}  // namespace dgb::test
