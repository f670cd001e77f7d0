#include <future>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dgb/backbone.hpp"
#include "dgb/chart.hpp"
#include "dgb/grammar.hpp"
#include "dgb/oracle.hpp"
#include "dgb/output.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kNoParse = 1;
constexpr int kError = 2;

struct Config {
  std::string grammar_path;
  std::string format = "structured-all";
  size_t max_unpack = 1000;
  size_t oracle_bound = 8;
  bool batch = false;
  unsigned jobs = 1;
  bool no_specialize = false;
  bool specialized = false;
  std::vector<std::string> sentence;
};

std::string read_all(std::istream& in) {
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

dgb::Grammar load(const Config& cfg) {
  std::vector<dgb::Diagnostic> warnings;
  auto g = dgb::load_grammar_file(cfg.grammar_path, &warnings);
  for (const auto& w : warnings) std::cerr << cfg.grammar_path << ": " << w.str() << "\n";
  auto report = dgb::validate_grammar(g);
  if (report.has_errors()) {
    for (const auto& d : report.diagnostics) std::cerr << cfg.grammar_path << ": " << d.str() << "\n";
    throw std::runtime_error("grammar has errors");
  }
  return g;
}

struct SentenceResult {
  std::string out;
  std::string err;
  int status = kOk;
};

SentenceResult parse_one(const dgb::Engine& engine, const std::string& line, dgb::OutputFormat fmt) {
  SentenceResult r;
  try {
    auto tokens = engine.tokens(line);
    auto analyses = engine.analyses(std::span<const std::string>(tokens));
    r.out = dgb::render_result(tokens, analyses, fmt);
    if (analyses.empty()) r.status = kNoParse;
  } catch (const dgb::UnknownWordError& e) {
    r.err = e.what();
    r.status = kError;
  }
  return r;
}

std::string prefix_lines(const std::string& text, size_t number) {
  std::ostringstream out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out << number << '\t' << l << '\n';
  return out.str();
}

int run_parse(const Config& cfg) {
  auto fmt = dgb::parse_output_format(cfg.format);
  if (!fmt) {
    std::cerr << "unknown format '" << cfg.format << "'\n";
    return kError;
  }
  dgb::Engine engine(load(cfg), {cfg.max_unpack, !cfg.no_specialize});
  if (!cfg.batch) {
    std::string text;
    if (!cfg.sentence.empty()) {
      for (const auto& w : cfg.sentence) text += w + " ";
    } else {
      text = read_all(std::cin);
    }
    auto r = parse_one(engine, text, *fmt);
    std::cout << r.out;
    if (!r.err.empty()) std::cerr << "error: " << r.err << "\n";
    return r.status;
  }

  std::vector<std::string> lines;
  for (std::string l; std::getline(std::cin, l);) lines.push_back(l);
  std::vector<SentenceResult> results(lines.size());
  unsigned jobs = std::max(1u, cfg.jobs);
  std::vector<std::future<void>> workers;
  for (unsigned k = 0; k < jobs; ++k)
    workers.push_back(std::async(std::launch::async, [&, k] {
      for (size_t i = k; i < lines.size(); i += jobs)
        if (!dgb::tokenize(lines[i]).empty()) results[i] = parse_one(engine, lines[i], *fmt);
    }));
  for (auto& w : workers) w.get();
  int status = kOk;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (dgb::tokenize(lines[i]).empty()) continue;
    std::cout << prefix_lines(results[i].out, i + 1);
    if (!results[i].err.empty()) std::cerr << "line " << i + 1 << ": " << results[i].err << "\n";
    status = std::max(status, results[i].status);
  }
  return status;
}

int run_check(const Config& cfg) {
  std::vector<dgb::Diagnostic> warnings;
  auto g = dgb::load_grammar_file(cfg.grammar_path, &warnings);
  auto report = dgb::validate_grammar(g);
  for (const auto& w : warnings) std::cout << w.str() << "\n";
  for (const auto& d : report.diagnostics) std::cout << d.str() << "\n";
  if (report.has_errors()) return kError;
  std::cout << "ok: " << g.classes.size() << " classes, " << g.deps.size() << " dependencies, " << g.lexicon.size()
            << " lexical entries\n";
  return kOk;
}

int run_gen(const Config& cfg) {
  auto g = load(cfg);
  dgb::DepTree tree = dgb::DepTree::parse(read_all(std::cin));
  for (auto& w : tree.words) {
    const dgb::LexicalEntry* e = g.entry(w.surface, w.word_class);
    if (!e) {
      std::cerr << "error: no lexical entry for '" << w.surface << "' of class " << w.word_class << "\n";
      return kError;
    }
    w.lexeme = e->lexeme;
  }
  auto lins = dgb::enumerate_linearizations(tree, g, cfg.oracle_bound);
  std::cout << "linearizations: " << lins.size() << "\n";
  for (const auto& l : lins) {
    for (size_t i = 0; i < l.words.size(); ++i) std::cout << (i ? " " : "") << l.words[i];
    std::cout << "\n";
  }
  return lins.empty() ? kNoParse : kOk;
}

int run_xcheck(const Config& cfg) {
  dgb::Engine engine(load(cfg), {cfg.max_unpack, !cfg.no_specialize});
  std::vector<std::string> words = cfg.sentence;
  if (words.empty()) words = dgb::tokenize(read_all(std::cin));
  for (size_t i = 0; i < words.size(); ++i)
    if (engine.grammar().entries(words[i]).empty()) throw dgb::UnknownWordError(words[i], static_cast<int>(i) + 1);
  auto report = dgb::cross_validate(words, engine, cfg.oracle_bound);
  std::cout << report.summary();
  std::cout << (report.ok() ? "agree\n" : "DISAGREE\n");
  return report.ok() ? kOk : kNoParse;
}

int run_dump_backbone(const Config& cfg) {
  auto g = load(cfg);
  auto rs = dgb::compile_domains(g);
  if (cfg.specialized) rs = dgb::specialize_domain_union(rs, g);
  std::cout << dgb::dump_backbone(rs);
  return kOk;
}

int run_dump_grammar(const Config& cfg) {
  std::cout << dgb::serialize_grammar(load(cfg));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Word order domain grammars on a context-free backbone"};
  app.require_subcommand(1);
  Config cfg;

  auto grammar_opt = [&](CLI::App* sub) {
    sub->add_option("-g,--grammar", cfg.grammar_path, "grammar file")->required()->check(CLI::ExistingFile);
  };
  auto caps = [&](CLI::App* sub) {
    sub->add_option("--max-unpack", cfg.max_unpack, "maximum c-structures unpacked per sentence")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--no-specialize", cfg.no_specialize, "keep the full DOMAIN union in every slot");
  };

  auto* parse = app.add_subcommand("parse", "analyse sentences (stdin or arguments)");
  grammar_opt(parse);
  caps(parse);
  parse->add_option("--format", cfg.format, "bracketed-c, avm, dep-triples, domain-tree or structured-all")
      ->check(CLI::IsMember({"bracketed-c", "avm", "dep-triples", "domain-tree", "structured-all"}));
  parse->add_flag("--batch", cfg.batch, "one sentence per input line, output lines prefixed with the line number");
  parse->add_option("-j,--jobs", cfg.jobs, "parallel sentences in batch mode")->check(CLI::PositiveNumber);
  parse->add_option("sentence", cfg.sentence, "sentence tokens");

  auto* check = app.add_subcommand("check", "validate a grammar");
  grammar_opt(check);

  auto* gen = app.add_subcommand("gen", "linearize a dependency tree read as 'id surface class head label' lines");
  grammar_opt(gen);
  gen->add_option("--oracle-bound", cfg.oracle_bound, "maximum words")->check(CLI::PositiveNumber);

  auto* xcheck = app.add_subcommand("xcheck", "compare parser and oracle over all permutations of a word multiset");
  grammar_opt(xcheck);
  caps(xcheck);
  xcheck->add_option("--oracle-bound", cfg.oracle_bound, "maximum words")->check(CLI::PositiveNumber);
  xcheck->add_option("words", cfg.sentence, "words");

  auto* dump_bb = app.add_subcommand("dump-backbone", "print the compiled context-free backbone");
  grammar_opt(dump_bb);
  dump_bb->add_flag("--specialized", cfg.specialized, "narrow DOMAIN to placeable classes");

  auto* dump_g = app.add_subcommand("dump-grammar", "print the grammar in normalized form");
  grammar_opt(dump_g);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kError;
  }

  try {
    if (parse->parsed()) return run_parse(cfg);
    if (check->parsed()) return run_check(cfg);
    if (gen->parsed()) return run_gen(cfg);
    if (xcheck->parsed()) return run_xcheck(cfg);
    if (dump_bb->parsed()) return run_dump_backbone(cfg);
    if (dump_g->parsed()) return run_dump_grammar(cfg);
  } catch (const dgb::GrammarError& e) {
    std::cerr << cfg.grammar_path << ": " << e.what() << "\n";
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
