#include "dgb/oracle.hpp"

#include <algorithm>
#include <functional>
#include <future>
#include <map>
#include <set>
#include <sstream>
#include <thread>

namespace dgb {

namespace {

struct Place {
  int head;
  int slot;
  friend auto operator<=>(const Place&, const Place&) = default;
};

std::string slot_category(const DomainSpec& spec, int slot) {
  return spec.slots.size() == 1 ? "dom" + spec.word_class : "dom" + spec.slots[slot].name;
}

class Linearizer {
 public:
  Linearizer(const DepTree& dep, const Grammar& g) : dep_(dep), g_(g), n_(static_cast<int>(dep.words.size())) {}

  std::vector<Linearization> run() {
    specs_.resize(n_);
    for (int w = 0; w < n_; ++w) {
      specs_[w] = g_.domain(dep_.words[w].word_class);
      if (!specs_[w]) return {};
    }
    const auto& roots = g_.root_classes;
    if (dep_.root < 0 || std::find(roots.begin(), roots.end(), dep_.words[dep_.root].word_class) == roots.end())
      return {};
    options_.resize(n_);
    for (int w = 0; w < n_; ++w) {
      if (w == dep_.root) continue;
      const DepWord& word = dep_.words[w];
      const ModifierPathSpec* spec = g_.path_spec(word.label);
      if (!spec) return {};
      for (int a = word.head; a >= 0; a = dep_.words[a].head) {
        auto p = dep_.path(a, word.head);
        if (!p || !spec->float_path.matches(*p)) continue;
        for (size_t s = 0; s < specs_[a]->slots.size(); ++s) options_[w].push_back({a, static_cast<int>(s)});
      }
      if (options_[w].empty()) return {};
    }
    place_.assign(n_, {-1, -1});
    choose(0);
    std::vector<Linearization> out;
    for (auto& [key, lin] : found_) out.push_back(std::move(lin));
    return out;
  }

 private:
  void choose(int w) {
    if (w == n_) {
      order_buckets();
      return;
    }
    if (w == dep_.root) {
      choose(w + 1);
      return;
    }
    for (const auto& p : options_[w]) {
      place_[w] = p;
      choose(w + 1);
    }
  }

  // Admissible element sequences for every (word, slot) bucket.
  void order_buckets() {
    std::map<Place, std::vector<int>> buckets;
    for (int w = 0; w < n_; ++w)
      if (w != dep_.root) buckets[place_[w]].push_back(w);
    std::vector<Place> keys;
    std::vector<std::vector<std::vector<int>>> seqs;
    for (int a = 0; a < n_; ++a) {
      for (size_t s = 0; s < specs_[a]->slots.size(); ++s) {
        const DomainSlotSpec& slot = specs_[a]->slots[s];
        Place key{a, static_cast<int>(s)};
        std::vector<int> items = buckets.count(key) ? buckets[key] : std::vector<int>{};
        int count = static_cast<int>(items.size());
        std::vector<std::vector<int>> options;
        std::sort(items.begin(), items.end());
        if (!slot.holds_self) {
          if (!cardinality_admits(slot.cardinality, count)) return;
          do options.push_back(items);
          while (std::next_permutation(items.begin(), items.end()));
        } else {
          std::vector<int> cuts;
          for (int k = 0; k <= count; ++k)
            if (slot.admits(k, count - k)) cuts.push_back(k);
          if (cuts.empty()) return;
          do {
            for (int k : cuts) {
              std::vector<int> seq(items.begin(), items.begin() + k);
              seq.push_back(a);
              seq.insert(seq.end(), items.begin() + k, items.end());
              options.push_back(std::move(seq));
            }
          } while (std::next_permutation(items.begin(), items.end()));
        }
        keys.push_back(key);
        seqs.push_back(std::move(options));
      }
    }
    std::map<Place, const std::vector<int>*> chosen;
    std::function<void(size_t)> product = [&](size_t i) {
      if (i == keys.size()) {
        emit(chosen);
        return;
      }
      for (const auto& seq : seqs[i]) {
        chosen[keys[i]] = &seq;
        product(i + 1);
      }
    };
    product(0);
  }

  void emit(const std::map<Place, const std::vector<int>*>& chosen) {
    DomainTree dt;
    std::vector<int> order;
    std::function<void(int, int)> build = [&](int w, int parent) {
      const DomainSpec& spec = *specs_[w];
      for (size_t s = 0; s < spec.slots.size(); ++s) {
        const DomainSlotSpec& slot = spec.slots[s];
        Domain d;
        d.category = slot_category(spec, static_cast<int>(s));
        d.word_class = spec.word_class;
        d.slot = static_cast<int>(s);
        d.field = slot.field;
        d.owner = w;
        d.member = slot.holds_self ? w : -1;
        d.parent = parent;
        d.begin = static_cast<int>(order.size());
        int index = static_cast<int>(dt.domains.size());
        dt.domains.push_back(std::move(d));
        if (parent >= 0) dt.domains[parent].elements.push_back({false, index});
        for (int item : *chosen.at({w, static_cast<int>(s)})) {
          if (item == w) {
            dt.domains[index].elements.push_back({true, w});
            order.push_back(w);
          } else {
            build(item, index);
          }
        }
        dt.domains[index].end = static_cast<int>(order.size());
      }
    };
    build(dep_.root, -1);
    std::vector<std::string> words;
    for (int w : order) words.push_back(dep_.words[w].surface);
    if (found_.count(words)) return;
    if (!check_order(dt, dep_, g_).empty()) return;
    found_.emplace(words, Linearization{order, words, std::move(dt)});
  }

  const DepTree& dep_;
  const Grammar& g_;
  int n_;
  std::vector<const DomainSpec*> specs_;
  std::vector<std::vector<Place>> options_;
  std::vector<Place> place_;
  std::map<std::vector<std::string>, Linearization> found_;
};

// Union-find over (word, attribute path) cells: the feature equations of
// each word, with dependency prefixes resolved through the tree.
class FeatureCheck {
 public:
  FeatureCheck(const DepTree& t, const std::vector<const LexicalEntry*>& entries, const Grammar& g)
      : t_(t), entries_(entries), g_(g) {}

  bool ok() {
    int n = static_cast<int>(t_.words.size());
    for (int w = 0; w < n; ++w)
      if (!set_atom(cell(w, {"CLASS"}), t_.words[w].word_class)) return false;
    for (int w = 0; w < n; ++w) {
      for (const auto& eq : entries_[w]->features) {
        auto lhs = resolve(w, eq.lhs);
        if (!lhs) return false;
        if (const auto* atom = std::get_if<std::string>(&eq.rhs)) {
          if (!set_atom(*lhs, *atom)) return false;
        } else {
          auto rhs = resolve(w, std::get<std::vector<std::string>>(eq.rhs));
          if (!rhs || !unite(*lhs, *rhs)) return false;
        }
      }
    }
    return close();
  }

 private:
  using Key = std::pair<int, std::vector<std::string>>;

  int cell(int w, std::vector<std::string> path) {
    Key k{w, path};
    if (auto it = ids_.find(k); it != ids_.end()) return it->second;
    for (size_t len = 1; len < path.size(); ++len) cell(w, {path.begin(), path.begin() + static_cast<long>(len)});
    int id = static_cast<int>(keys_.size());
    ids_.emplace(k, id);
    keys_.push_back(std::move(k));
    parent_.push_back(id);
    atom_.emplace_back();
    return id;
  }
  int find(int c) {
    while (parent_[c] != c) c = parent_[c] = parent_[parent_[c]];
    return c;
  }
  bool set_atom(int c, const std::string& v) {
    c = find(c);
    if (atom_[c] && *atom_[c] != v) return false;
    atom_[c] = v;
    return true;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return true;
    if (keys_[a].second.empty() || keys_[b].second.empty()) return false;  // two distinct words
    if (atom_[a] && atom_[b] && *atom_[a] != *atom_[b]) return false;
    parent_[b] = a;
    if (!atom_[a]) atom_[a] = atom_[b];
    return true;
  }
  std::optional<int> resolve(int w, const std::vector<std::string>& path) {
    size_t i = 0;
    for (; i < path.size() && g_.has_dep(path[i]); ++i) {
      int next = -1;
      for (size_t c = 0; c < t_.words.size(); ++c)
        if (t_.words[c].head == w && t_.words[c].label == path[i]) next = static_cast<int>(c);
      if (next < 0) return std::nullopt;
      w = next;
    }
    std::vector<std::string> rest(path.begin() + static_cast<long>(i), path.end());
    for (const auto& a : rest)
      if (g_.has_dep(a)) return std::nullopt;
    if (rest.empty()) return cell(w, {});
    return cell(w, rest);
  }

  // Merged complex values share all their extensions.
  bool close() {
    for (int round = 0; round < 64; ++round) {
      bool changed = false;
      size_t count = keys_.size();
      for (size_t x = 0; x < count; ++x) {
        auto [w, p] = keys_[x];
        for (size_t len = 1; len < p.size(); ++len) {
          int prefix = ids_.at({w, {p.begin(), p.begin() + static_cast<long>(len)}});
          std::vector<std::string> suffix(p.begin() + static_cast<long>(len), p.end());
          for (size_t y = 0; y < count; ++y) {
            if (find(static_cast<int>(y)) != find(prefix) || static_cast<int>(y) == prefix) continue;
            auto q = keys_[y].second;
            q.insert(q.end(), suffix.begin(), suffix.end());
            size_t before = keys_.size();
            int other = cell(keys_[y].first, q);
            if (keys_.size() != before || find(other) != find(static_cast<int>(x))) changed = true;
            if (!unite(static_cast<int>(x), other)) return false;
          }
        }
      }
      if (!changed) {
        // An atom may not also have attributes.
        for (size_t x = 0; x < keys_.size(); ++x) {
          const auto& [w, p] = keys_[x];
          for (size_t len = 1; len < p.size(); ++len)
            if (atom_[find(ids_.at({w, {p.begin(), p.begin() + static_cast<long>(len)}}))]) return false;
        }
        return true;
      }
    }
    return false;
  }

  const DepTree& t_;
  const std::vector<const LexicalEntry*>& entries_;
  const Grammar& g_;
  std::map<Key, int> ids_;
  std::vector<Key> keys_;
  std::vector<int> parent_;
  std::vector<std::optional<std::string>> atom_;
};

}  // namespace

std::vector<Linearization> enumerate_linearizations(const DepTree& dep, const Grammar& g, size_t bound) {
  if (dep.words.size() > bound)
    throw OracleBoundError("dependency tree has " + std::to_string(dep.words.size()) + " words, bound is " +
                           std::to_string(bound));
  if (dep.words.empty() || !dep.is_tree()) return {};
  return Linearizer(dep, g).run();
}

std::vector<DepTree> dependency_trees(std::span<const std::string> words, const Grammar& g, size_t bound) {
  if (words.size() > bound)
    throw OracleBoundError(std::to_string(words.size()) + " words exceed the bound of " + std::to_string(bound));
  int n = static_cast<int>(words.size());
  std::vector<std::vector<const LexicalEntry*>> choices;
  for (const auto& w : words) {
    choices.push_back(g.entries(w));
    if (choices.back().empty()) return {};
  }
  std::map<std::string, DepTree> out;
  std::vector<const LexicalEntry*> entry(n);
  std::vector<int> head(n, -1), slot(n, -1);

  auto finish = [&] {
    int root = -1;
    for (int w = 0; w < n; ++w)
      if (head[w] < 0) root = w;
    // Acyclic: every word reaches the root.
    for (int w = 0; w < n; ++w) {
      int x = w;
      for (int steps = 0; x >= 0 && x != root && steps <= n; ++steps) x = head[x];
      if (x != root) return;
    }
    for (int h = 0; h < n; ++h)
      for (size_t s = 0; s < entry[h]->valency.size(); ++s) {
        if (entry[h]->valency[s].optionality != Optionality::Req) continue;
        bool filled = false;
        for (int w = 0; w < n; ++w) filled |= head[w] == h && slot[w] == static_cast<int>(s);
        if (!filled) return;
      }
    DepTree t;
    t.root = root;
    for (int w = 0; w < n; ++w)
      t.words.push_back({words[w], entry[w]->word_class, entry[w]->lexeme, head[w],
                         head[w] < 0 ? std::string() : entry[head[w]]->valency[slot[w]].dep});
    if (!FeatureCheck(t, entry, g).ok()) return;
    std::string key = t.render();
    for (const auto& w : t.words) key += w.lexeme + ' ';
    out.emplace(std::move(key), std::move(t));
  };

  std::function<void(int, bool)> assign = [&](int w, bool root_used) {
    if (w == n) {
      if (root_used) finish();
      return;
    }
    const auto& roots = g.root_classes;
    if (!root_used && std::find(roots.begin(), roots.end(), entry[w]->word_class) != roots.end()) {
      head[w] = -1;
      slot[w] = -1;
      assign(w + 1, true);
    }
    for (int h = 0; h < n; ++h) {
      if (h == w) continue;
      for (size_t s = 0; s < entry[h]->valency.size(); ++s) {
        if (entry[h]->valency[s].mod_class != entry[w]->word_class) continue;
        bool taken = false;
        for (int v = 0; v < w; ++v) taken |= head[v] == h && slot[v] == static_cast<int>(s);
        if (taken) continue;
        head[w] = h;
        slot[w] = static_cast<int>(s);
        assign(w + 1, root_used);
      }
    }
    head[w] = -1;
    slot[w] = -1;
  };

  std::function<void(int)> pick = [&](int w) {
    if (w == n) {
      assign(0, false);
      return;
    }
    for (const auto* e : choices[w]) {
      entry[w] = e;
      pick(w + 1);
    }
  };
  pick(0);

  std::vector<DepTree> trees;
  for (auto& [k, t] : out) trees.push_back(std::move(t));
  return trees;
}

std::string CrossReport::summary() const {
  std::ostringstream out;
  out << "permutations " << permutations << "\n";
  out << "parser " << parser_accepted.size() << "\n";
  out << "oracle " << oracle_generated.size() << "\n";
  auto list = [&](const char* tag, const std::vector<std::vector<std::string>>& v) {
    out << tag << ' ' << v.size() << "\n";
    for (const auto& s : v) {
      out << "  ";
      for (size_t i = 0; i < s.size(); ++i) out << (i ? " " : "") << s[i];
      out << "\n";
    }
  };
  list("only-parser", only_parser);
  list("only-oracle", only_oracle);
  return out.str();
}

CrossReport cross_validate(std::span<const std::string> words, const Engine& engine, size_t bound) {
  if (words.size() > bound)
    throw OracleBoundError(std::to_string(words.size()) + " words exceed the bound of " + std::to_string(bound));
  CrossReport r;
  const Grammar& g = engine.grammar();

  std::set<std::vector<std::string>> generated;
  for (const auto& t : dependency_trees(words, g, bound))
    for (auto& lin : enumerate_linearizations(t, g, bound)) generated.insert(std::move(lin.words));

  std::vector<std::vector<std::string>> perms;
  std::vector<std::string> w(words.begin(), words.end());
  std::sort(w.begin(), w.end());
  if (!w.empty()) do
      perms.push_back(w);
    while (std::next_permutation(w.begin(), w.end()));
  r.permutations = perms.size();

  size_t workers = std::clamp<size_t>(std::thread::hardware_concurrency(), 1, 16);
  std::vector<char> accepted(perms.size(), 0);
  std::vector<std::future<void>> jobs;
  for (size_t k = 0; k < workers; ++k)
    jobs.push_back(std::async(std::launch::async, [&, k] {
      for (size_t i = k; i < perms.size(); i += workers) accepted[i] = engine.accepts(perms[i]) ? 1 : 0;
    }));
  for (auto& j : jobs) j.get();

  std::set<std::vector<std::string>> parsed;
  for (size_t i = 0; i < perms.size(); ++i)
    if (accepted[i]) parsed.insert(perms[i]);

  r.parser_accepted.assign(parsed.begin(), parsed.end());
  r.oracle_generated.assign(generated.begin(), generated.end());
  std::set_difference(parsed.begin(), parsed.end(), generated.begin(), generated.end(),
                      std::back_inserter(r.only_parser));
  std::set_difference(generated.begin(), generated.end(), parsed.begin(), parsed.end(),
                      std::back_inserter(r.only_oracle));
  return r;
}

}  // namespace dgb
