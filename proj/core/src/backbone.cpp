#include "dgb/backbone.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace dgb {

std::string domain_category_name(const std::string& word_class) { return "dom" + word_class; }

std::vector<const BackboneRule*> BackboneRuleSet::rules_for(const std::string& lhs) const {
  std::vector<const BackboneRule*> out;
  for (const auto& r : rules)
    if (r.lhs.name == lhs) out.push_back(&r);
  return out;
}

RegPath modifier_path(const Grammar& g) {
  std::vector<RegPath> alts;
  for (const auto& p : g.paths) alts.push_back(RegPath::concat({p.float_path, RegPath::atom(p.dep)}));
  if (alts.empty()) return RegPath::epsilon();
  return RegPath::alt(std::move(alts));
}

namespace {

RhsItem domain_item(Repetition rep, const std::vector<UnionAlt>& alts, const std::optional<std::string>& field) {
  RhsItem item{kDomainUnion, rep, {{Annotation::Kind::Modifier, {}}}, alts, -1};
  if (field) item.annotations.push_back({Annotation::Kind::Field, *field});
  return item;
}

// DOMAIN repetitions realizing a cardinality; nullopt yields nothing.
void push_domains(std::vector<RhsItem>& rhs, std::optional<Cardinality> c, const std::vector<UnionAlt>& alts,
                  const std::optional<std::string>& field) {
  if (!c) return;
  switch (*c) {
    case Cardinality::ZeroOrMore: rhs.push_back(domain_item(Repetition::Star, alts, field)); break;
    case Cardinality::AtMostOne: rhs.push_back(domain_item(Repetition::Optional, alts, field)); break;
    case Cardinality::ExactlyOne: rhs.push_back(domain_item(Repetition::One, alts, field)); break;
    case Cardinality::AtLeastOne:
      rhs.push_back(domain_item(Repetition::One, alts, field));
      rhs.push_back(domain_item(Repetition::Star, alts, field));
      break;
  }
}

}  // namespace

BackboneRuleSet compile_domains(const Grammar& g) {
  BackboneRuleSet rs;
  rs.modifier_path = modifier_path(g);
  for (const auto& c : g.classes) {
    const DomainSpec* spec = g.domain(c);
    bool meta = spec && spec->slots.size() > 1;
    rs.domain_union.push_back({c, {{domain_category_name(c), meta ? CategoryKind::Meta : CategoryKind::Domain}}});
  }
  for (const auto& c : g.classes) {
    const DomainSpec* spec = g.domain(c);
    if (!spec) throw BackboneError("class '" + c + "' has no domain specification");
    bool meta = spec->slots.size() > 1;
    if (meta) {
      MetaDefinition def{{domain_category_name(c), CategoryKind::Meta}, {}};
      for (const auto& s : spec->slots) def.expansion.push_back({"dom" + s.name, CategoryKind::Slot});
      rs.metacategories.push_back(std::move(def));
    }
    for (size_t i = 0; i < spec->slots.size(); ++i) {
      const auto& slot = spec->slots[i];
      Category lhs = meta ? Category{"dom" + slot.name, CategoryKind::Slot}
                          : Category{domain_category_name(c), CategoryKind::Domain};
      rs.slots[lhs.name] = {c, static_cast<int>(i)};
      BackboneRule rule{lhs, {}};
      if (slot.holds_self) {
        push_domains(rule.rhs, slot.before, rs.domain_union, slot.field);
        rule.rhs.push_back({{c, CategoryKind::Preterminal}, Repetition::One, {{Annotation::Kind::Head, {}}}, {}, -1});
        push_domains(rule.rhs, slot.after, rs.domain_union, slot.field);
      } else {
        push_domains(rule.rhs, slot.cardinality, rs.domain_union, slot.field);
      }
      rs.rules.push_back(std::move(rule));
    }
  }
  std::vector<BackboneRule> start;
  for (const auto& r : g.root_classes) {
    const DomainSpec* spec = g.domain(r);
    bool meta = spec && spec->slots.size() > 1;
    start.push_back({kRoot,
                     {{{domain_category_name(r), meta ? CategoryKind::Meta : CategoryKind::Domain}, Repetition::One, {}, {}, -1}}});
  }
  rs.rules.insert(rs.rules.begin(), start.begin(), start.end());
  return rs;
}

BackboneRuleSet expand_metacategories(const BackboneRuleSet& rs) {
  std::map<std::string, const MetaDefinition*> defs;
  for (const auto& m : rs.metacategories) defs[m.name.name] = &m;

  std::map<std::string, std::vector<Category>> flat;
  std::set<std::string> active;
  std::function<const std::vector<Category>&(const std::string&)> flatten =
      [&](const std::string& name) -> const std::vector<Category>& {
    if (auto it = flat.find(name); it != flat.end()) return it->second;
    if (!active.insert(name).second) throw BackboneError("cyclic metacategory definition involving '" + name + "'");
    std::vector<Category> out;
    for (const auto& c : defs.at(name)->expansion) {
      if (c.kind == CategoryKind::Meta) {
        if (!defs.count(c.name)) throw BackboneError("undefined metacategory '" + c.name + "'");
        const auto& sub = flatten(c.name);
        out.insert(out.end(), sub.begin(), sub.end());
      } else {
        out.push_back(c);
      }
    }
    active.erase(name);
    return flat[name] = std::move(out);
  };
  auto expand_seq = [&](const std::vector<Category>& seq) {
    std::vector<Category> out;
    for (const auto& c : seq) {
      if (c.kind != CategoryKind::Meta) {
        out.push_back(c);
        continue;
      }
      if (!defs.count(c.name)) throw BackboneError("undefined metacategory '" + c.name + "'");
      const auto& sub = flatten(c.name);
      out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
  };
  for (const auto& [name, def] : defs) flatten(name);

  BackboneRuleSet out = rs;
  out.metacategories.clear();
  auto expand_alts = [&](std::vector<UnionAlt>& alts) {
    for (auto& a : alts) a.seq = expand_seq(a.seq);
  };
  expand_alts(out.domain_union);
  int next_group = 0;
  for (auto& rule : out.rules) {
    std::vector<RhsItem> rhs;
    for (auto& item : rule.rhs) {
      expand_alts(item.alternatives);
      if (item.category.kind != CategoryKind::Meta) {
        rhs.push_back(std::move(item));
        continue;
      }
      if (item.repetition != Repetition::One)
        throw BackboneError("metacategory '" + item.category.name + "' under repetition cannot be spliced");
      int group = next_group++;
      for (const auto& c : expand_seq({item.category})) rhs.push_back({c, Repetition::One, item.annotations, {}, group});
    }
    rule.rhs = std::move(rhs);
  }
  return out;
}

std::vector<std::string> placeable_classes(const Grammar& g, const std::string& owner_class,
                                           const DomainSlotSpec& slot) {
  // class -> (dep, modifier class) edges from the lexicon
  std::map<std::string, std::set<std::pair<std::string, std::string>>> edges;
  for (const auto& e : g.lexicon)
    for (const auto& v : e.valency) edges[e.word_class].insert({v.dep, v.mod_class});

  std::set<std::string> found;
  for (const auto& spec : g.paths) {
    if (!slot.accepts.empty() && std::find(slot.accepts.begin(), slot.accepts.end(), spec.dep) == slot.accepts.end())
      continue;
    if (spec.target_field && slot.field && *spec.target_field != *slot.field) continue;
    const RegPath& r = spec.float_path;
    std::set<std::pair<std::string, RegPath::StateSet>> seen;
    std::vector<std::pair<std::string, RegPath::StateSet>> todo{{owner_class, r.start()}};
    while (!todo.empty()) {
      auto [cls, states] = todo.back();
      todo.pop_back();
      if (!seen.insert({cls, states}).second) continue;
      for (const auto& [dep, mod] : edges[cls]) {
        if (dep == spec.dep && r.accepting(states)) found.insert(mod);
        auto next = r.step(states, dep);
        if (!next.empty()) todo.push_back({mod, next});
      }
    }
  }
  std::vector<std::string> out;
  for (const auto& c : g.classes)
    if (found.count(c)) out.push_back(c);
  return out;
}

BackboneRuleSet specialize_domain_union(const BackboneRuleSet& rs, const Grammar& g) {
  BackboneRuleSet out = rs;
  for (auto& rule : out.rules) {
    auto slot_it = rs.slots.find(rule.lhs.name);
    if (slot_it == rs.slots.end()) continue;
    const auto& [cls, index] = slot_it->second;
    auto allowed = placeable_classes(g, cls, g.domain(cls)->slots[index]);
    for (auto& item : rule.rhs)
      std::erase_if(item.alternatives, [&](const UnionAlt& a) {
        return std::find(allowed.begin(), allowed.end(), a.word_class) == allowed.end();
      });
  }

  // Productivity fixpoint. A preterminal is productive iff some word has its class.
  std::set<std::string> productive;
  for (const auto& e : g.lexicon) productive.insert(e.word_class);
  std::map<std::string, std::vector<Category>> metas;
  for (const auto& m : out.metacategories) metas[m.name.name] = m.expansion;

  std::function<bool(const Category&)> cat_ok = [&](const Category& c) {
    if (c.kind == CategoryKind::Meta) {
      auto it = metas.find(c.name);
      return it != metas.end() && std::all_of(it->second.begin(), it->second.end(), cat_ok);
    }
    return productive.count(c.name) > 0;
  };
  auto alt_ok = [&](const UnionAlt& a) { return std::all_of(a.seq.begin(), a.seq.end(), cat_ok); };
  auto item_ok = [&](const RhsItem& item) {
    if (item.repetition != Repetition::One) return true;
    if (item.category.kind == CategoryKind::Union)
      return std::any_of(item.alternatives.begin(), item.alternatives.end(), alt_ok);
    return cat_ok(item.category);
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& rule : out.rules)
      if (!productive.count(rule.lhs.name) && std::all_of(rule.rhs.begin(), rule.rhs.end(), item_ok)) {
        productive.insert(rule.lhs.name);
        changed = true;
      }
  }
  std::erase_if(out.rules, [&](const BackboneRule& r) {
    return !std::all_of(r.rhs.begin(), r.rhs.end(), item_ok);
  });
  for (auto& rule : out.rules) {
    for (auto& item : rule.rhs) std::erase_if(item.alternatives, [&](const UnionAlt& a) { return !alt_ok(a); });
    std::erase_if(rule.rhs, [](const RhsItem& item) {
      return item.category.kind == CategoryKind::Union && item.alternatives.empty();
    });
  }
  return out;
}

namespace {

std::string seq_str(const std::vector<Category>& seq) {
  std::string s;
  for (const auto& c : seq) {
    if (!s.empty()) s += ' ';
    s += c.name;
  }
  return s;
}

std::string item_str(const RhsItem& item, const std::vector<UnionAlt>& full_union) {
  std::string core;
  if (item.category.kind == CategoryKind::Union && item.alternatives != full_union) {
    core = "{";
    for (size_t i = 0; i < item.alternatives.size(); ++i) {
      if (i) core += " | ";
      core += seq_str(item.alternatives[i].seq);
    }
    core += "}";
  } else {
    core = item.category.name;
  }
  switch (item.repetition) {
    case Repetition::One: return core;
    case Repetition::Optional: return "(" + core + ")";
    case Repetition::Star: return core + "*";
  }
  return core;
}

std::string annotation_str(const Annotation& a) {
  switch (a.kind) {
    case Annotation::Kind::Head: return "@(HEAD)";
    case Annotation::Kind::Modifier: return "@(MODIFIER)";
    case Annotation::Kind::Field: return "(! FIELD) = " + a.field;
  }
  return {};
}

std::string modifier_body(const RegPath& r) {
  if (r.op() != RegPath::Op::Alt) return r.str();
  std::string s = "{";
  for (size_t i = 0; i < r.parts().size(); ++i) {
    if (i) s += " | ";
    s += r.parts()[i].str();
  }
  return s + "}";
}

}  // namespace

std::string dump_backbone(const BackboneRuleSet& rs) {
  std::ostringstream out;
  out << "# order domain rules\n";
  std::set<std::string> metas_done;
  auto meta_for = [&](const std::string& slot_cat) -> const MetaDefinition* {
    for (const auto& m : rs.metacategories)
      for (const auto& c : m.expansion)
        if (c.name == slot_cat) return &m;
    return nullptr;
  };
  for (const auto& rule : rs.rules) {
    if (const MetaDefinition* m = meta_for(rule.lhs.name); m && metas_done.insert(m->name.name).second)
      out << m->name.name << " = " << seq_str(m->expansion) << ".\n";
    out << rule.lhs.name << " -->";
    if (rule.rhs.empty()) out << " e";
    for (const auto& item : rule.rhs) out << ' ' << item_str(item, rs.domain_union);
    out << ".\n";
  }
  out << "DOMAIN = {";
  for (size_t i = 0; i < rs.domain_union.size(); ++i) {
    if (i) out << " | ";
    out << seq_str(rs.domain_union[i].seq);
  }
  out << "}.\n";

  out << "\n# annotated rules\n";
  out << "HEAD = ! = ^.\n";
  out << "MODIFIER = ! = (^ " << modifier_body(rs.modifier_path) << ").\n";
  for (const auto& rule : rs.rules) {
    out << rule.lhs.name << " -->";
    bool first = true;
    for (const auto& item : rule.rhs) {
      out << (first ? " " : "; ") << item_str(item, rs.domain_union);
      first = false;
      if (!item.annotations.empty()) {
        out << ':';
        for (const auto& a : item.annotations) out << ' ' << annotation_str(a);
      }
    }
    out << ".\n";
  }
  return out.str();
}

}  // namespace dgb
