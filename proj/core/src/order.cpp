#include "dgb/order.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dgb {

int DomainTree::member_domain(int word) const {
  for (size_t i = 0; i < domains.size(); ++i)
    if (domains[i].member == word) return static_cast<int>(i);
  return -1;
}

std::vector<int> DomainTree::element_words(int domain) const {
  std::vector<int> out;
  for (const auto& e : domains.at(domain).elements) {
    if (e.is_word) {
      out.push_back(e.index);
    } else if (domains[e.index].member >= 0) {
      out.push_back(domains[e.index].member);
    } else {
      auto sub = element_words(e.index);
      out.insert(out.end(), sub.begin(), sub.end());
    }
  }
  return out;
}

std::vector<int> DomainTree::top_domains() const {
  std::vector<int> out;
  for (size_t i = 0; i < domains.size(); ++i)
    if (domains[i].parent < 0) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<int> DomainTree::words_in_order() const {
  std::vector<int> out;
  std::function<void(int)> walk = [&](int d) {
    for (const auto& e : domains[d].elements) {
      if (e.is_word)
        out.push_back(e.index);
      else
        walk(e.index);
    }
  };
  for (int d : top_domains()) walk(d);
  return out;
}

std::string DomainTree::shape() const {
  std::function<std::string(int)> walk = [&](int d) {
    const Domain& dom = domains[d];
    std::string s = dom.category;
    if (dom.field) s += ":" + *dom.field;
    s += "[";
    for (size_t i = 0; i < dom.elements.size(); ++i) {
      if (i) s += ' ';
      const auto& e = dom.elements[i];
      s += e.is_word ? std::to_string(e.index) : walk(e.index);
    }
    return s + "]";
  };
  std::string s;
  for (int d : top_domains()) s += walk(d);
  return s;
}

std::string DomainTree::render(const std::vector<std::string>& tokens) const {
  std::ostringstream out;
  std::function<void(int, int)> walk = [&](int d, int depth) {
    const Domain& dom = domains[d];
    out << std::string(2 * depth, ' ') << 'd' << d + 1 << ' ' << dom.category;
    if (dom.field) out << " field=" << *dom.field;
    out << '\n';
    for (const auto& e : dom.elements) {
      if (e.is_word)
        out << std::string(2 * depth + 2, ' ') << tokens.at(e.index) << '\n';
      else
        walk(e.index, depth + 1);
    }
  };
  for (int d : top_domains()) walk(d, 0);
  return out.str();
}

nlohmann::json DomainTree::to_json(const std::vector<std::string>& tokens) const {
  auto arr = nlohmann::json::array();
  for (size_t i = 0; i < domains.size(); ++i) {
    const Domain& d = domains[i];
    auto elements = nlohmann::json::array();
    for (const auto& e : d.elements)
      elements.push_back(e.is_word ? nlohmann::json{{"word", e.index}} : nlohmann::json{{"domain", e.index}});
    nlohmann::json j{{"id", i},         {"category", d.category}, {"class", d.word_class}, {"slot", d.slot},
                     {"parent", d.parent}, {"owner", d.owner},      {"member", d.member},    {"span", {d.begin, d.end}},
                     {"elements", elements}};
    j["field"] = d.field ? nlohmann::json(*d.field) : nlohmann::json(nullptr);
    if (d.member >= 0 && d.member < static_cast<int>(tokens.size())) j["member_surface"] = tokens[d.member];
    arr.push_back(std::move(j));
  }
  return arr;
}

// ---------------------------------------------------------------------------

std::vector<int> DepTree::children(int w) const {
  std::vector<int> out;
  for (size_t i = 0; i < words.size(); ++i)
    if (words[i].head == w) out.push_back(static_cast<int>(i));
  return out;
}

std::optional<std::vector<std::string>> DepTree::path(int ancestor, int w) const {
  std::vector<std::string> labels;
  for (size_t steps = 0; steps <= words.size(); ++steps) {
    if (w == ancestor) {
      std::reverse(labels.begin(), labels.end());
      return labels;
    }
    if (w < 0 || words[w].head < 0) return std::nullopt;
    labels.push_back(words[w].label);
    w = words[w].head;
  }
  return std::nullopt;
}

bool DepTree::is_tree() const {
  int roots = 0;
  for (size_t i = 0; i < words.size(); ++i) {
    int h = words[i].head;
    if (h < 0) {
      ++roots;
      if (static_cast<int>(i) != root) return false;
    } else if (h >= static_cast<int>(words.size())) {
      return false;
    }
  }
  if (roots != 1) return false;
  for (size_t i = 0; i < words.size(); ++i)
    if (!path(root, static_cast<int>(i))) return false;
  return true;
}

std::vector<std::tuple<std::string, std::string, std::string>> DepTree::triples(const Grammar& g,
                                                                              bool with_punct) const {
  std::vector<std::tuple<std::string, std::string, std::string>> out;
  for (const auto& w : words) {
    if (w.head < 0) continue;
    const auto& h = words[w.head];
    if (!with_punct && (g.is_punct(w.word_class) || g.is_punct(h.word_class))) continue;
    out.emplace_back(h.surface, w.label, w.surface);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string DepTree::render() const {
  std::ostringstream out;
  for (size_t i = 0; i < words.size(); ++i) {
    const auto& w = words[i];
    out << i + 1 << ' ' << w.surface << ' ' << w.word_class << ' ' << w.head + 1 << ' '
        << (w.head < 0 ? "ROOT" : w.label) << '\n';
  }
  return out.str();
}

DepTree DepTree::parse(std::string_view text) {
  DepTree t;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> f;
    for (std::string w; ls >> w;) f.push_back(w);
    if (f.empty()) continue;
    if (f.size() != 5)
      throw std::invalid_argument("line " + std::to_string(number) + ": expected 'id surface class head label'");
    int id = 0, head = 0;
    try {
      id = std::stoi(f[0]);
      head = std::stoi(f[3]);
    } catch (const std::exception&) {
      throw std::invalid_argument("line " + std::to_string(number) + ": id and head must be integers");
    }
    if (id != static_cast<int>(t.words.size()) + 1)
      throw std::invalid_argument("line " + std::to_string(number) + ": ids must be consecutive from 1");
    DepWord w{f[1], f[2], {}, head - 1, head == 0 ? std::string() : f[4]};
    if (head == 0) t.root = id - 1;
    t.words.push_back(std::move(w));
  }
  for (const auto& w : t.words)
    if (w.head >= static_cast<int>(t.words.size()) || w.head < -1) throw std::invalid_argument("head id out of range");
  if (!t.is_tree()) throw std::invalid_argument("dependency triples do not form a tree");
  return t;
}

nlohmann::json DepTree::to_json() const {
  auto arr = nlohmann::json::array();
  for (size_t i = 0; i < words.size(); ++i) {
    const auto& w = words[i];
    arr.push_back({{"id", i + 1},
                   {"surface", w.surface},
                   {"class", w.word_class},
                   {"lexeme", w.lexeme},
                   {"head", w.head + 1},
                   {"label", w.head < 0 ? "ROOT" : w.label}});
  }
  return arr;
}

// ---------------------------------------------------------------------------

std::string_view code_name(ViolationCode c) {
  switch (c) {
    case ViolationCode::PredSelfFirst: return "PRED_SELF_FIRST";
    case ViolationCode::PredSelfLast: return "PRED_SELF_LAST";
    case ViolationCode::PredDepOrder: return "PRED_DEP_ORDER";
    case ViolationCode::FloatPath: return "FLOAT_PATH";
    case ViolationCode::FieldMismatch: return "FIELD_MISMATCH";
  }
  return "?";
}

namespace {

struct SlotInfo {
  std::string word_class;
  int slot;
};

std::map<std::string, SlotInfo> slot_categories(const Grammar& g) {
  std::map<std::string, SlotInfo> out;
  for (const auto& spec : g.domains) {
    if (spec.slots.size() == 1) {
      out["dom" + spec.word_class] = {spec.word_class, 0};
      continue;
    }
    for (size_t i = 0; i < spec.slots.size(); ++i)
      out["dom" + spec.slots[i].name] = {spec.word_class, static_cast<int>(i)};
  }
  return out;
}

}  // namespace

DomainTree extract_domain_structure(const CNode& c, const Grammar& g) {
  auto slots = slot_categories(g);
  DomainTree dt;
  std::function<void(const CNode&, int)> walk = [&](const CNode& n, int current) {
    if (n.is_preterminal()) {
      if (current >= 0) {
        dt.domains[current].member = n.token;
        dt.domains[current].owner = n.token;
        dt.domains[current].elements.push_back({true, n.token});
      }
      return;
    }
    std::map<int, std::vector<int>> groups;
    for (const auto& child : n.children) {
      auto kind = child.category.kind;
      if (kind != CategoryKind::Domain && kind != CategoryKind::Slot) {
        walk(child, current);
        continue;
      }
      Domain d;
      d.category = child.category.name;
      if (auto it = slots.find(d.category); it != slots.end()) {
        d.word_class = it->second.word_class;
        d.slot = it->second.slot;
        if (const DomainSpec* spec = g.domain(d.word_class)) d.field = spec->slots.at(d.slot).field;
      }
      d.parent = current;
      d.begin = child.begin;
      d.end = child.end;
      int index = static_cast<int>(dt.domains.size());
      dt.domains.push_back(std::move(d));
      if (current >= 0) dt.domains[current].elements.push_back({false, index});
      if (child.group >= 0) groups[child.group].push_back(index);
      walk(child, index);
    }
    for (const auto& [group, members] : groups) {
      int owner = -1;
      for (int d : members)
        if (dt.domains[d].member >= 0) owner = dt.domains[d].member;
      for (int d : members) dt.domains[d].owner = owner;
    }
  };
  CNode top{kRoot, c.begin, c.end, {c}, {}, -1, -1};
  walk(top, -1);
  return dt;
}

DepTree derive_dependency_tree(const FStructure& f, const Grammar& g, std::span<const std::string> tokens) {
  DepTree t;
  t.words.resize(tokens.size());
  for (size_t i = 0; i < tokens.size(); ++i) t.words[i].surface = tokens[i];
  const std::vector<std::string> lexeme_path{"LEXEME"};
  const std::vector<std::string> class_path{"CLASS"};
  auto instance = [&](FStructure::NodeId n) -> int {
    auto l = f.get(n, lexeme_path);
    if (!l || !f.is_atom(*l)) return -1;
    return f.atom(*l)->instance;
  };
  std::set<FStructure::NodeId> seen;
  std::vector<FStructure::NodeId> todo{f.root()};
  t.root = instance(f.root());
  while (!todo.empty()) {
    auto n = f.find(todo.back());
    todo.pop_back();
    if (!seen.insert(n).second || f.is_atom(n)) continue;
    int w = instance(n);
    if (w >= 0 && w < static_cast<int>(tokens.size())) {
      t.words[w].lexeme = f.atom(*f.get(n, lexeme_path))->text;
      if (auto c = f.get(n, class_path); c && f.is_atom(*c)) t.words[w].word_class = f.atom(*c)->text;
    }
    for (const auto& [attr, v] : f.arcs(n)) {
      if (g.has_dep(attr)) {
        int m = instance(v);
        if (m < 0 || w < 0) throw std::logic_error("dependency " + attr + " without a word");
        if (m >= static_cast<int>(tokens.size())) throw std::logic_error("word instance out of range");
        if (t.words[m].head >= 0 && (t.words[m].head != w || t.words[m].label != attr))
          throw std::logic_error("word '" + tokens[m] + "' has two heads");
        t.words[m].head = w;
        t.words[m].label = attr;
      }
      todo.push_back(v);
    }
  }
  return t;
}

std::vector<Violation> check_precedence(const DomainTree& dt, const DepTree& dep, const Grammar& g) {
  std::vector<Violation> out;
  for (size_t w = 0; w < dep.words.size(); ++w) {
    auto preds = g.predicates_for(dep.words[w].word_class);
    if (preds.empty()) continue;
    int d = dt.member_domain(static_cast<int>(w));
    if (d < 0) continue;
    auto elems = dt.element_words(d);
    auto label = [&](int e) -> const std::string& { return dep.words[e].label; };
    const std::string& who = dep.words[w].surface;
    for (const auto* p : preds) {
      switch (p->kind) {
        case PredicateKind::SelfFirst:
          if (!elems.empty() && elems.front() != static_cast<int>(w))
            out.push_back({ViolationCode::PredSelfFirst, static_cast<int>(w),
                           "'" + dep.words[elems.front()].surface + "' precedes '" + who + "' in its domain"});
          break;
        case PredicateKind::SelfLast:
          if (!elems.empty() && elems.back() != static_cast<int>(w))
            out.push_back({ViolationCode::PredSelfLast, static_cast<int>(w),
                           "'" + dep.words[elems.back()].surface + "' follows '" + who + "' in its domain"});
          break;
        case PredicateKind::DepBeforeDep: {
          bool seen_right = false;
          for (int e : elems) {
            if (e == static_cast<int>(w)) continue;
            if (label(e) == *p->right) seen_right = true;
            if (label(e) == *p->left && seen_right) {
              out.push_back({ViolationCode::PredDepOrder, static_cast<int>(w),
                             *p->right + " precedes " + *p->left + " in the domain of '" + who + "'"});
              break;
            }
          }
          break;
        }
      }
    }
  }
  return out;
}

std::vector<Violation> check_float_licensing(const DomainTree& dt, const DepTree& dep, const Grammar& g) {
  std::vector<Violation> out;
  for (size_t i = 0; i < dep.words.size(); ++i) {
    int m = static_cast<int>(i);
    const DepWord& w = dep.words[i];
    int own = dt.member_domain(m);
    if (own < 0) {
      out.push_back({ViolationCode::FloatPath, m, "'" + w.surface + "' is not placed in any domain"});
      continue;
    }
    int placed = dt.domains[own].parent;
    if (w.head < 0) {
      if (placed >= 0)
        out.push_back({ViolationCode::FloatPath, m, "root word '" + w.surface + "' is placed inside another domain"});
      continue;
    }
    if (placed < 0) {
      out.push_back({ViolationCode::FloatPath, m, "'" + w.surface + "' has no positional head"});
      continue;
    }
    const Domain& slot_domain = dt.domains[placed];
    int positional = slot_domain.owner;
    const ModifierPathSpec* spec = g.path_spec(w.label);
    auto path = positional >= 0 ? dep.path(positional, w.head) : std::nullopt;
    if (!spec || !path || !spec->float_path.matches(*path)) {
      std::string where = positional >= 0 ? "'" + dep.words[positional].surface + "'" : "an unowned domain";
      out.push_back({ViolationCode::FloatPath, m,
                     "'" + w.surface + "' (" + w.label + " of '" + dep.words[w.head].surface + "') may not float to " +
                         where});
      continue;
    }
    const DomainSpec* owner_spec = g.domain(slot_domain.word_class);
    if (!owner_spec) continue;
    const DomainSlotSpec& slot = owner_spec->slots.at(slot_domain.slot);
    if (spec->target_field && slot.field && *slot.field != *spec->target_field)
      out.push_back({ViolationCode::FieldMismatch, m,
                     w.label + " '" + w.surface + "' placed in field " + *slot.field + ", requires " +
                         *spec->target_field});
    else if (!slot.accepts.empty() && std::find(slot.accepts.begin(), slot.accepts.end(), w.label) == slot.accepts.end())
      out.push_back({ViolationCode::FieldMismatch, m,
                     w.label + " '" + w.surface + "' not admitted in field " + slot.field.value_or(slot.name)});
  }
  return out;
}

std::vector<Violation> check_order(const DomainTree& dt, const DepTree& dep, const Grammar& g) {
  auto out = check_precedence(dt, dep, g);
  auto f = check_float_licensing(dt, dep, g);
  out.insert(out.end(), f.begin(), f.end());
  return out;
}

}  // namespace dgb
