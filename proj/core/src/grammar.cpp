#include "dgb/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace dgb {

bool is_reserved_attribute(std::string_view name) {
  return name == kClassAttr || name == kLexemeAttr || name == kFieldAttr;
}

GrammarError::GrammarError(const std::string& message, SourceLoc loc)
    : std::runtime_error("line " + std::to_string(loc.line) + ", column " + std::to_string(loc.column) +
                         ": " + message),
      loc_(loc) {}

char cardinality_symbol(Cardinality c) {
  switch (c) {
    case Cardinality::ZeroOrMore: return '*';
    case Cardinality::AtMostOne: return '?';
    case Cardinality::AtLeastOne: return '+';
    case Cardinality::ExactlyOne: return '!';
  }
  return '*';
}

std::optional<Cardinality> cardinality_from_symbol(char c) {
  switch (c) {
    case '*': return Cardinality::ZeroOrMore;
    case '?': return Cardinality::AtMostOne;
    case '+': return Cardinality::AtLeastOne;
    case '!': return Cardinality::ExactlyOne;
    default: return std::nullopt;
  }
}

bool cardinality_admits(std::optional<Cardinality> c, int count) {
  if (!c) return count == 0;
  switch (*c) {
    case Cardinality::ZeroOrMore: return true;
    case Cardinality::AtMostOne: return count <= 1;
    case Cardinality::AtLeastOne: return count >= 1;
    case Cardinality::ExactlyOne: return count == 1;
  }
  return false;
}

bool DomainSlotSpec::admits(int before_count, int after_count) const {
  if (holds_self) return cardinality_admits(before, before_count) && cardinality_admits(after, after_count);
  return after_count == 0 && cardinality_admits(cardinality, before_count);
}

int DomainSpec::self_slot() const {
  for (size_t i = 0; i < slots.size(); ++i)
    if (slots[i].holds_self) return static_cast<int>(i);
  return -1;
}

std::string PrecedencePredicate::str() const {
  switch (kind) {
    case PredicateKind::SelfFirst: return holder + " selfFirst";
    case PredicateKind::SelfLast: return holder + " selfLast";
    case PredicateKind::DepBeforeDep: return holder + " " + left.value_or("?") + " < " + right.value_or("?");
  }
  return holder;
}

namespace {

std::string join(const std::vector<std::string>& v, const char* sep = " ") {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += v[i];
  }
  return out;
}

}  // namespace

std::string FeatureEquation::str() const {
  std::string out = join(lhs) + " = ";
  if (const auto* atom = std::get_if<std::string>(&rhs))
    out += *atom;
  else
    out += join(std::get<std::vector<std::string>>(rhs));
  return out;
}

const ValencySlot* LexicalEntry::slot(std::string_view dep) const {
  for (const auto& s : valency)
    if (s.dep == dep) return &s;
  return nullptr;
}

bool Grammar::has_class(std::string_view c) const {
  return std::find(classes.begin(), classes.end(), c) != classes.end();
}

bool Grammar::has_dep(std::string_view d) const { return std::find(deps.begin(), deps.end(), d) != deps.end(); }

bool Grammar::is_punct(std::string_view c) const {
  return std::find(punct_classes.begin(), punct_classes.end(), c) != punct_classes.end();
}

const DomainSpec* Grammar::domain(std::string_view word_class) const {
  for (const auto& d : domains)
    if (d.word_class == word_class) return &d;
  return nullptr;
}

const ModifierPathSpec* Grammar::path_spec(std::string_view dep) const {
  for (const auto& p : paths)
    if (p.dep == dep) return &p;
  return nullptr;
}

std::vector<const PrecedencePredicate*> Grammar::predicates_for(std::string_view word_class) const {
  std::vector<const PrecedencePredicate*> out;
  for (const auto& p : predicates)
    if (p.holder == word_class) out.push_back(&p);
  return out;
}

std::vector<const LexicalEntry*> Grammar::entries(std::string_view surface) const {
  std::vector<const LexicalEntry*> out;
  for (const auto& e : lexicon)
    if (e.surface == surface) out.push_back(&e);
  return out;
}

const LexicalEntry* Grammar::entry(std::string_view surface, std::string_view word_class) const {
  for (const auto& e : lexicon)
    if (e.surface == surface && e.word_class == word_class) return &e;
  return nullptr;
}

std::string Diagnostic::str() const {
  return std::string(severity == Severity::Error ? "error" : "warning") + ": line " + std::to_string(loc.line) +
         ": " + message;
}

bool ValidationReport::has_errors() const {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Diagnostic::Severity::Error; });
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Line {
  std::string text;
  int number = 0;
};

struct Template {
  std::vector<std::string> params;
  std::string body;
  SourceLoc loc;
};

const std::set<std::string, std::less<>> kSections = {"root",  "punct", "classes",   "deps",   "domains",
                                                      "predicates", "paths", "templates", "lexicon"};

std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

int column_of(const Line& line, std::string_view needle) {
  auto pos = line.text.find(needle);
  return pos == std::string::npos ? 1 : static_cast<int>(pos) + 1;
}

class Loader {
 public:
  explicit Loader(std::string_view text) { split(text); }

  Grammar run() {
    for (const auto& l : section("root")) {
      auto w = words(l.text);
      if (w.empty()) throw GrammarError("root expects at least one class", {l.number, 1});
      g_.root_classes.insert(g_.root_classes.end(), w.begin(), w.end());
      root_loc_ = {l.number, 1};
    }
    for (const auto& l : section("punct"))
      for (auto& w : words(l.text)) g_.punct_classes.push_back(w);
    for (const auto& l : section("classes"))
      for (auto& w : words(l.text)) {
        g_.classes.push_back(w);
        class_locs_.push_back({l.number, column_of(l, w)});
      }
    for (const auto& l : section("deps"))
      for (auto& w : words(l.text)) {
        g_.deps.push_back(w);
        dep_locs_.push_back({l.number, column_of(l, w)});
      }
    for (const auto& l : section("domains")) g_.domains.push_back(parse_domain(l));
    for (const auto& l : section("predicates")) g_.predicates.push_back(parse_predicate(l));
    for (const auto& l : section("paths")) g_.paths.push_back(parse_path(l));
    for (const auto& l : section("templates")) parse_template(l);
    for (const auto& l : section("lexicon")) g_.lexicon.push_back(parse_entry(l));
    // A dependency without a path line attaches continuously.
    for (size_t i = 0; i < g_.deps.size(); ++i) {
      const auto& d = g_.deps[i];
      if (!std::any_of(g_.paths.begin(), g_.paths.end(), [&](const auto& p) { return p.dep == d; }))
        g_.paths.push_back({d, RegPath::epsilon(), std::nullopt, dep_locs_[i]});
    }
    return std::move(g_);
  }

  SourceLoc root_loc() const { return root_loc_; }
  const std::vector<SourceLoc>& class_locs() const { return class_locs_; }
  const std::vector<SourceLoc>& dep_locs() const { return dep_locs_; }

 private:
  void split(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string raw;
    int number = 0;
    std::string current;
    while (std::getline(in, raw)) {
      ++number;
      if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      if (!raw.empty() && raw.back() == '\r') raw.pop_back();
      if (trim(raw).empty()) continue;
      if (!std::isspace(static_cast<unsigned char>(raw.front()))) {
        auto colon = raw.find(':');
        if (colon != std::string::npos) {
          std::string head = raw.substr(0, colon);
          if (kSections.count(head)) {
            if (seen_.count(head)) throw GrammarError("duplicate section '" + head + "'", {number, 1});
            seen_.insert(head);
            current = head;
            sections_[current];
            std::string rest = raw.substr(colon + 1);
            if (!trim(rest).empty()) sections_[current].push_back({rest, number});
            continue;
          }
        }
      }
      if (current.empty()) throw GrammarError("content outside of any section", {number, 1});
      sections_[current].push_back({raw, number});
    }
  }

  const std::vector<Line>& section(const std::string& name) {
    static const std::vector<Line> none;
    auto it = sections_.find(name);
    return it == sections_.end() ? none : it->second;
  }

  // Vfin = INITIAL[!]:initial MIDDLE[* @self *]:middle FINAL[?]:final{RELA}
  DomainSpec parse_domain(const Line& l) {
    const std::string& s = l.text;
    auto eq = s.find('=');
    if (eq == std::string::npos) throw GrammarError("expected '=' in domain specification", {l.number, 1});
    DomainSpec spec;
    spec.word_class = trim(s.substr(0, eq));
    spec.loc = {l.number, column_of(l, spec.word_class)};
    if (spec.word_class.empty() || words(spec.word_class).size() != 1)
      throw GrammarError("expected a single word class before '='", {l.number, 1});
    size_t i = eq + 1;
    auto skip = [&] {
      while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    };
    auto ident = [&] {
      size_t b = i;
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' || s[i] == '-')) ++i;
      return s.substr(b, i - b);
    };
    for (;;) {
      skip();
      if (i >= s.size()) break;
      DomainSlotSpec slot;
      slot.loc = {l.number, static_cast<int>(i) + 1};
      slot.name = ident();
      if (i >= s.size() || s[i] != '[')
        throw GrammarError("expected '[' in slot specification", {l.number, static_cast<int>(i) + 1});
      auto close = s.find(']', i);
      if (close == std::string::npos) throw GrammarError("unterminated '['", {l.number, static_cast<int>(i) + 1});
      auto inner = words(s.substr(i + 1, close - i - 1));
      auto card = [&](const std::string& w) {
        if (w.size() != 1 || !cardinality_from_symbol(w[0]))
          throw GrammarError("bad cardinality '" + w + "'", {l.number, static_cast<int>(i) + 1});
        return *cardinality_from_symbol(w[0]);
      };
      auto self = std::find(inner.begin(), inner.end(), "@self");
      if (self != inner.end()) {
        slot.holds_self = true;
        auto nb = self - inner.begin();
        auto na = inner.end() - self - 1;
        if (nb > 1 || na > 1) throw GrammarError("at most one cardinality on each side of @self", slot.loc);
        if (nb == 1) slot.before = card(inner.front());
        if (na == 1) slot.after = card(inner.back());
      } else {
        if (inner.size() != 1) throw GrammarError("slot needs exactly one cardinality", slot.loc);
        slot.cardinality = card(inner.front());
      }
      i = close + 1;
      if (i < s.size() && s[i] == ':') {
        ++i;
        slot.field = ident();
        if (slot.field->empty()) throw GrammarError("expected field label after ':'", {l.number, static_cast<int>(i) + 1});
      }
      if (i < s.size() && s[i] == '{') {
        auto end = s.find('}', i);
        if (end == std::string::npos) throw GrammarError("unterminated '{'", {l.number, static_cast<int>(i) + 1});
        std::string list = s.substr(i + 1, end - i - 1);
        std::replace(list.begin(), list.end(), '|', ' ');
        slot.accepts = words(list);
        i = end + 1;
      }
      if (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])))
        throw GrammarError("unexpected character in slot specification", {l.number, static_cast<int>(i) + 1});
      spec.slots.push_back(std::move(slot));
    }
    if (spec.slots.size() == 1 && spec.slots.front().name.empty()) spec.slots.front().name = spec.word_class;
    for (const auto& slot : spec.slots)
      if (slot.name.empty()) throw GrammarError("slots of a multi-slot domain need names", slot.loc);
    return spec;
  }

  PrecedencePredicate parse_predicate(const Line& l) {
    auto w = words(l.text);
    PrecedencePredicate p;
    p.loc = {l.number, column_of(l, w.empty() ? "" : w.front())};
    if (w.size() == 2 && w[1] == "selfFirst") {
      p.holder = w[0];
      p.kind = PredicateKind::SelfFirst;
    } else if (w.size() == 2 && w[1] == "selfLast") {
      p.holder = w[0];
      p.kind = PredicateKind::SelfLast;
    } else if (w.size() == 4 && w[2] == "<") {
      p.holder = w[0];
      p.kind = PredicateKind::DepBeforeDep;
      p.left = w[1];
      p.right = w[3];
    } else {
      throw GrammarError("expected '<class> selfFirst', '<class> selfLast' or '<class> <dep> < <dep>'", p.loc);
    }
    return p;
  }

  // OBJ VPART*      RELA {SUBJ|OBJ|VPART}* => final
  ModifierPathSpec parse_path(const Line& l) {
    std::string s = trim(l.text);
    ModifierPathSpec spec;
    auto first = words(s).front();
    spec.dep = first;
    spec.loc = {l.number, column_of(l, first)};
    std::string rest = s.substr(first.size());
    if (auto arrow = rest.find("=>"); arrow != std::string::npos) {
      auto target = words(rest.substr(arrow + 2));
      if (target.size() != 1) throw GrammarError("expected one field label after '=>'", spec.loc);
      spec.target_field = target.front();
      rest = rest.substr(0, arrow);
    }
    try {
      spec.float_path = RegPath::parse(rest);
    } catch (const std::invalid_argument& e) {
      throw GrammarError(e.what(), spec.loc);
    }
    return spec;
  }

  // VALENCY(_o _d _c) = valency _o _d _c
  void parse_template(const Line& l) {
    std::string s = trim(l.text);
    auto open = s.find('(');
    auto close = s.find(')');
    auto eq = s.find('=', close == std::string::npos ? 0 : close);
    SourceLoc loc{l.number, column_of(l, s.substr(0, 1))};
    if (open == std::string::npos || close == std::string::npos || eq == std::string::npos || close < open)
      throw GrammarError("expected 'NAME(_params) = body'", loc);
    std::string name = trim(s.substr(0, open));
    if (templates_.count(name)) throw GrammarError("duplicate template '" + name + "'", loc);
    Template t;
    t.params = words(s.substr(open + 1, close - open - 1));
    t.body = trim(s.substr(eq + 1));
    t.loc = loc;
    templates_[name] = std::move(t);
  }

  std::string expand(const std::string& text, SourceLoc loc, int depth = 0) {
    if (depth > 32) throw GrammarError("template expansion too deep", loc);
    std::string out;
    size_t i = 0;
    while (i < text.size()) {
      auto at = text.find("@(", i);
      if (at == std::string::npos) {
        out += text.substr(i);
        break;
      }
      out += text.substr(i, at - i);
      auto close = text.find(')', at);
      if (close == std::string::npos) throw GrammarError("unterminated template invocation", loc);
      auto args = words(text.substr(at + 2, close - at - 2));
      if (args.empty()) throw GrammarError("empty template invocation", loc);
      auto it = templates_.find(args.front());
      if (it == templates_.end()) throw GrammarError("undeclared template '" + args.front() + "'", loc);
      const Template& t = it->second;
      if (args.size() - 1 != t.params.size())
        throw GrammarError("template '" + args.front() + "' expects " + std::to_string(t.params.size()) +
                               " arguments",
                           loc);
      std::vector<std::string> body;
      for (auto& w : words(t.body)) {
        // Parameters are substituted as whole words, also when glued to ';'.
        std::string suffix;
        while (!w.empty() && w.back() == ';') {
          suffix += ';';
          w.pop_back();
        }
        auto p = std::find(t.params.begin(), t.params.end(), w);
        if (p != t.params.end()) w = args[1 + (p - t.params.begin())];
        body.push_back(w + suffix);
      }
      out += expand(join(body), loc, depth + 1);
      i = close + 1;
    }
    return out;
  }

  std::vector<std::string> path_words(const std::string& s) { return words(s); }

  // hat Vfin : lexeme hat ; @(VALENCY req SUBJ N) ; SUBJ CASE = nom
  LexicalEntry parse_entry(const Line& l) {
    std::string s = trim(l.text);
    auto colon = s.find(" :");
    SourceLoc loc{l.number, column_of(l, s.substr(0, 1))};
    if (colon == std::string::npos) throw GrammarError("expected '<surface> <class> : items'", loc);
    auto head = words(s.substr(0, colon));
    if (head.size() != 2) throw GrammarError("expected '<surface> <class>' before ':'", loc);
    LexicalEntry e;
    e.surface = head[0];
    e.word_class = head[1];
    e.loc = loc;
    std::string body = expand(s.substr(colon + 2), loc);
    std::string item;
    std::istringstream in(body);
    while (std::getline(in, item, ';')) {
      auto w = words(item);
      if (w.empty()) continue;
      if (w[0] == "lexeme") {
        if (w.size() != 2) throw GrammarError("expected 'lexeme <name>'", loc);
        if (!e.lexeme.empty()) throw GrammarError("duplicate lexeme for '" + e.surface + "'", loc);
        e.lexeme = w[1];
      } else if (w[0] == "valency") {
        if (w.size() != 4 || (w[1] != "opt" && w[1] != "req"))
          throw GrammarError("expected 'valency opt|req <dep> <class>'", loc);
        e.valency.push_back({w[1] == "opt" ? Optionality::Opt : Optionality::Req, w[2], w[3]});
      } else {
        auto eq = std::find(w.begin(), w.end(), "=");
        if (eq == w.end() || eq == w.begin() || eq + 1 == w.end())
          throw GrammarError("unrecognized lexical item '" + trim(item) + "'", loc);
        FeatureEquation f;
        f.lhs.assign(w.begin(), eq);
        std::vector<std::string> rhs(eq + 1, w.end());
        // A single word on the right is an atom; a path needs a dependency prefix.
        if (rhs.size() == 1)
          f.rhs = rhs[0];
        else
          f.rhs = rhs;
        e.features.push_back(std::move(f));
      }
    }
    return e;
  }

  std::map<std::string, std::vector<Line>> sections_;
  std::set<std::string> seen_;
  std::map<std::string, Template> templates_;
  Grammar g_;
  SourceLoc root_loc_;
  std::vector<SourceLoc> class_locs_;
  std::vector<SourceLoc> dep_locs_;
};

}  // namespace

Grammar load_grammar(std::string_view text, std::vector<Diagnostic>* warnings) {
  Loader loader(text);
  Grammar g = loader.run();
  ValidationReport report = validate_grammar(g);
  for (const auto& d : report.diagnostics) {
    if (d.severity == Diagnostic::Severity::Error) throw GrammarError(d.message, d.loc);
  }
  if (warnings)
    for (const auto& d : report.diagnostics) warnings->push_back(d);
  std::vector<PrecedencePredicate> unique;
  for (auto& p : g.predicates)
    if (std::find(unique.begin(), unique.end(), p) == unique.end()) unique.push_back(std::move(p));
  g.predicates = std::move(unique);
  return g;
}

Grammar load_grammar_file(const std::string& path, std::vector<Diagnostic>* warnings) {
  std::ifstream in(path);
  if (!in) throw GrammarError("cannot read grammar file '" + path + "'", {0, 0});
  std::stringstream buf;
  buf << in.rdbuf();
  return load_grammar(buf.str(), warnings);
}

// ---------------------------------------------------------------------------
// Validation

ValidationReport validate_grammar(const Grammar& g) {
  ValidationReport r;
  auto error = [&](std::string msg, SourceLoc loc) {
    r.diagnostics.push_back({Diagnostic::Severity::Error, std::move(msg), loc});
  };
  auto warn = [&](std::string msg, SourceLoc loc) {
    r.diagnostics.push_back({Diagnostic::Severity::Warning, std::move(msg), loc});
  };
  auto need_class = [&](const std::string& c, SourceLoc loc) {
    if (!g.has_class(c)) error("undeclared class '" + c + "'", loc);
  };
  auto need_dep = [&](const std::string& d, SourceLoc loc) {
    if (!g.has_dep(d)) error("undeclared dependency '" + d + "'", loc);
  };

  std::set<std::string> seen;
  for (const auto& c : g.classes) {
    if (c.empty()) error("empty class name", {});
    if (!seen.insert(c).second) error("duplicate class '" + c + "'", {});
  }
  seen.clear();
  for (const auto& d : g.deps) {
    if (d.empty()) error("empty dependency name", {});
    if (is_reserved_attribute(d)) error("dependency name '" + d + "' is reserved", {});
    if (!seen.insert(d).second) error("duplicate dependency '" + d + "'", {});
  }
  seen.clear();
  for (const auto& r : g.root_classes) {
    need_class(r, {});
    if (!seen.insert(r).second) error("duplicate root class '" + r + "'", {});
  }
  if (g.root_classes.empty() && !g.classes.empty()) error("missing root class", {});
  for (const auto& p : g.punct_classes) need_class(p, {});

  // Domain specifications.
  std::map<std::string, std::string> slot_categories;  // category -> owning class
  for (const auto& c : g.classes) slot_categories["dom" + c] = c;
  std::set<std::string> specced;
  for (const auto& d : g.domains) {
    need_class(d.word_class, d.loc);
    if (!specced.insert(d.word_class).second) error("duplicate domain specification for '" + d.word_class + "'", d.loc);
    if (d.slots.empty()) error("domain specification for '" + d.word_class + "' has no slots", d.loc);
    int selves = 0;
    std::set<std::string> names;
    for (const auto& s : d.slots) {
      selves += s.holds_self;
      if (!names.insert(s.name).second) error("duplicate slot name '" + s.name + "'", s.loc);
      for (const auto& a : s.accepts) need_dep(a, s.loc);
      if (d.slots.size() > 1) {
        auto [it, fresh] = slot_categories.emplace("dom" + s.name, d.word_class);
        if (!fresh) error("slot category 'dom" + s.name + "' clashes with one of class '" + it->second + "'", s.loc);
      }
    }
    if (selves != 1)
      error("domain of '" + d.word_class + "' must have exactly one @self slot, found " + std::to_string(selves), d.loc);
  }
  for (const auto& c : g.classes)
    if (!specced.count(c)) error("class '" + c + "' has no domain specification", {});

  // Precedence predicates.
  for (size_t i = 0; i < g.predicates.size(); ++i) {
    const auto& p = g.predicates[i];
    need_class(p.holder, p.loc);
    if (p.kind == PredicateKind::DepBeforeDep) {
      if (!p.left || !p.right) error("dependency predicate needs two dependencies", p.loc);
      if (p.left) need_dep(*p.left, p.loc);
      if (p.right) need_dep(*p.right, p.loc);
    } else if (p.left || p.right) {
      error("self predicate takes no dependencies", p.loc);
    }
    for (size_t j = 0; j < i; ++j)
      if (g.predicates[j] == p) {
        warn("duplicate predicate '" + p.str() + "' ignored", p.loc);
        break;
      }
  }

  // Modifier paths.
  std::set<std::string> pathed;
  for (const auto& p : g.paths) {
    need_dep(p.dep, p.loc);
    if (!pathed.insert(p.dep).second) error("duplicate path specification for '" + p.dep + "'", p.loc);
    for (const auto& s : p.float_path.symbols()) need_dep(s, p.loc);
  }
  for (const auto& d : g.deps)
    if (!pathed.count(d)) error("dependency '" + d + "' has no path specification", {});

  // Lexicon.
  std::set<std::pair<std::string, std::string>> keys;
  for (const auto& e : g.lexicon) {
    if (e.surface.empty()) error("empty surface form", e.loc);
    need_class(e.word_class, e.loc);
    if (e.lexeme.empty()) error("entry '" + e.surface + "' has no lexeme", e.loc);
    if (!keys.emplace(e.surface, e.word_class).second)
      error("duplicate lexical entry '" + e.surface + " " + e.word_class + "'", e.loc);
    std::set<std::string> slot_deps;
    for (const auto& v : e.valency) {
      need_dep(v.dep, e.loc);
      need_class(v.mod_class, e.loc);
      if (!slot_deps.insert(v.dep).second) error("duplicate valency slot '" + v.dep + "'", e.loc);
    }
    auto check_path = [&](const std::vector<std::string>& path) {
      if (path.empty()) return error("empty feature path", e.loc);
      for (size_t i = 0; i + 1 < path.size(); ++i) need_dep(path[i], e.loc);
      const auto& attr = path.back();
      if (attr == kLexemeAttr || attr == kFieldAttr || g.has_dep(attr))
        error("feature path must end in an atom-valued feature, got '" + attr + "'", e.loc);
    };
    for (const auto& f : e.features) {
      check_path(f.lhs);
      if (const auto* p = std::get_if<std::vector<std::string>>(&f.rhs)) {
        if (p->size() < 2) error("path on the right of '=' needs a dependency prefix", e.loc);
        check_path(*p);
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Serialization

std::string serialize_grammar(const Grammar& g) {
  std::ostringstream out;
  out << "root: " << join(g.root_classes) << "\n";
  out << "punct: " << join(g.punct_classes) << "\n";
  out << "classes: " << join(g.classes) << "\n";
  out << "deps: " << join(g.deps) << "\n";
  out << "\ndomains:\n";
  for (const auto& d : g.domains) {
    out << "  " << d.word_class << " =";
    for (const auto& s : d.slots) {
      out << ' ';
      if (d.slots.size() > 1 || s.name != d.word_class) out << s.name;
      out << '[';
      if (s.holds_self) {
        if (s.before) out << cardinality_symbol(*s.before) << ' ';
        out << "@self";
        if (s.after) out << ' ' << cardinality_symbol(*s.after);
      } else {
        out << cardinality_symbol(s.cardinality);
      }
      out << ']';
      if (s.field) out << ':' << *s.field;
      if (!s.accepts.empty()) out << '{' << join(s.accepts, "|") << '}';
    }
    out << "\n";
  }
  out << "\npredicates:\n";
  for (const auto& p : g.predicates) out << "  " << p.str() << "\n";
  out << "\npaths:\n";
  for (const auto& p : g.paths) {
    out << "  " << p.dep;
    if (!p.float_path.is_epsilon()) out << ' ' << p.float_path.str();
    if (p.target_field) out << " => " << *p.target_field;
    out << "\n";
  }
  out << "\nlexicon:\n";
  for (const auto& e : g.lexicon) {
    out << "  " << e.surface << ' ' << e.word_class << " : lexeme " << e.lexeme;
    for (const auto& v : e.valency)
      out << " ; valency " << (v.optionality == Optionality::Opt ? "opt" : "req") << ' ' << v.dep << ' '
          << v.mod_class;
    for (const auto& f : e.features) out << " ; " << f.str();
    out << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Valency expansion

std::string SchemaConstraint::str() const {
  std::string p = "(^ " + join(path) + ")";
  switch (kind) {
    case Kind::Defining: return p + " = " + value;
    case Kind::Existential: return p;
    case Kind::Negative: return "~" + p;
  }
  return p;
}

std::vector<ValencySchema> expand_valency(const LexicalEntry& entry) {
  std::vector<ValencySchema> out;
  for (const auto& slot : entry.valency) {
    ValencySchema schema{slot.dep, {}};
    if (slot.optionality == Optionality::Opt)
      schema.branches.push_back({{SchemaConstraint::Kind::Negative, {slot.dep}, {}}});
    schema.branches.push_back({
        {SchemaConstraint::Kind::Defining, {slot.dep, std::string(kClassAttr)}, slot.mod_class},
        {SchemaConstraint::Kind::Existential, {slot.dep, std::string(kLexemeAttr)}, {}},
    });
    out.push_back(std::move(schema));
  }
  return out;
}

}  // namespace dgb
