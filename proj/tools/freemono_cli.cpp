// freemono: command-line front end.
//
// Exit status: 0 YES (or success), 1 NO (or corpus mismatch), 2 usage or
// parse error.

#include <chrono>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "freemono/corpus.hpp"
#include "freemono/decider.hpp"
#include "freemono/stallings.hpp"
#include "freemono/subgroup_search.hpp"
#include "freemono/text.hpp"
#include "freemono/topograph.hpp"
#include "freemono/whitehead.hpp"

namespace {

using freemono::Word;
using json = nlohmann::ordered_json;

constexpr int kYes = 0;
constexpr int kNo = 1;
constexpr int kUsage = 2;

struct Config {
  int rank = 2;
  std::string u, v;
  std::string strategy = "testsub";
  bool witness = false;
  std::string format = "text";
  std::size_t bound = 3;
  int g = 1;
  std::string corpus;
};

bool structured(const Config& c) { return c.format == "json"; }

freemono::Strategy strategy_of(const Config& c) {
  return c.strategy == "exhaustive" ? freemono::Strategy::kExhaustive
                                    : freemono::Strategy::kTestSub;
}

json words_json(const std::vector<Word>& ws) {
  json a = json::array();
  for (const Word& w : ws) a.push_back(freemono::to_string(w));
  return a;
}

void print_witness(const std::vector<Word>& images) {
  for (std::size_t i = 0; i < images.size(); ++i) {
    std::cout << "f(x" << i + 1 << ")=" << freemono::to_string(images[i]) << "\n";
  }
}

json verdict_json(const freemono::Verdict& r) {
  json out;
  out["answer"] = r.yes ? "YES" : "NO";
  out["witness"] = r.witness ? words_json(r.witness->images) : json(nullptr);
  json trace;
  trace["route"] = r.trace.route;
  trace["candidates"] = r.trace.candidates;
  trace["whitehead_calls"] = r.trace.whitehead_calls;
  if (r.trace.accepted) {
    trace["accepted"] = {{"basis", words_json(r.trace.accepted->basis)},
                         {"expressions", words_json(r.trace.accepted->expressions)}};
  } else {
    trace["accepted"] = nullptr;
  }
  trace["certificate"] = r.trace.certificate ? json(r.trace.certificate->serialize()) : json(nullptr);
  json graphs = json::array();
  for (const auto& gc : r.trace.per_graph) {
    graphs.push_back({{"g", gc.g}, {"graph", gc.graph}, {"readings", gc.readings},
                      {"candidates", gc.candidates}});
  }
  trace["per_graph"] = std::move(graphs);
  out["trace"] = std::move(trace);
  out["timings"] = {{"candidate_generation", r.trace.candidate_seconds},
                    {"whitehead", r.trace.whitehead_seconds}};
  return out;
}

int report_verdict(const Config& c, const freemono::Verdict& r) {
  if (structured(c)) {
    std::cout << verdict_json(r).dump(2) << "\n";
  } else {
    std::cout << (r.yes ? "YES" : "NO") << "\n";
    if (r.yes && c.witness && r.witness) print_witness(r.witness->images);
  }
  return r.yes ? kYes : kNo;
}

int cmd_decide(const Config& c, bool multi) {
  std::vector<Word> us, vs;
  if (multi) {
    us = freemono::parse_tuple(c.u, c.rank);
    vs = freemono::parse_tuple(c.v, c.rank);
    if (us.size() != vs.size()) throw freemono::ParseError("tuple arities differ");
  } else {
    us = {freemono::parse_word(c.u, c.rank)};
    vs = {freemono::parse_word(c.v, c.rank)};
  }
  freemono::Decider d(c.rank);
  return report_verdict(c, d.decide_multi(us, vs, strategy_of(c)));
}

int cmd_oracle(const Config& c) {
  auto us = freemono::parse_tuple(c.u, c.rank);
  auto vs = freemono::parse_tuple(c.v, c.rank);
  if (us.size() != vs.size()) throw freemono::ParseError("tuple arities differ");
  auto t0 = std::chrono::steady_clock::now();
  auto w = freemono::oracle(us, vs, c.rank, c.bound);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (structured(c)) {
    json out;
    out["answer"] = w ? "YES" : "NO";
    out["witness"] = w ? words_json(w->images) : json(nullptr);
    out["trace"] = {{"route", "oracle"}, {"bound", c.bound}};
    out["timings"] = {{"oracle", secs}};
    std::cout << out.dump(2) << "\n";
  } else {
    // NO here only means "none up to the bound".
    std::cout << (w ? "YES" : "NO") << "\n";
    if (w && c.witness) print_witness(w->images);
  }
  return w ? kYes : kNo;
}

int cmd_stallings(const Config& c) {
  auto gens = freemono::parse_tuple(c.u, c.rank);
  auto g = freemono::build_core_graph(gens, c.rank);
  std::optional<Word> expr;
  bool member = false;
  if (!c.v.empty()) {
    expr = freemono::member(g, freemono::parse_word(c.v, c.rank));
    member = expr.has_value();
  }
  if (structured(c)) {
    json out;
    out["rank"] = g.rank();
    out["vertices"] = g.vertex_count();
    out["edges"] = g.edge_count();
    out["basis"] = words_json(g.spanning_tree_basis());
    if (!c.v.empty()) {
      out["member"] = member;
      out["expression"] = expr ? json(freemono::to_string(*expr)) : json(nullptr);
    }
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << g.dump();
    if (!c.v.empty()) {
      std::cout << (member ? "member " + freemono::to_string(*expr) : std::string("not a member"))
                << "\n";
    }
  }
  return c.v.empty() || member ? kYes : kNo;
}

int cmd_whitehead(const Config& c) {
  freemono::Whitehead wh(c.rank);
  auto us = freemono::parse_tuple(c.u, c.rank);
  if (c.v.empty()) {
    auto m = wh.minimize(us);
    if (structured(c)) {
      json steps = json::array();
      for (const auto& a : m.steps) steps.push_back(a.to_string());
      std::cout << json{{"minimal", words_json(m.words)}, {"steps", steps}}.dump(2) << "\n";
    } else {
      std::cout << freemono::format_tuple(m.words) << "\n";
      for (const auto& a : m.steps) std::cout << "  " << a.to_string() << "\n";
    }
    return kYes;
  }
  auto vs = freemono::parse_tuple(c.v, c.rank);
  if (us.size() != vs.size()) throw freemono::ParseError("tuple arities differ");
  auto cert = wh.equivalent(us, vs);
  if (structured(c)) {
    json out;
    out["answer"] = cert ? "YES" : "NO";
    out["certificate"] = cert ? json(cert->serialize()) : json(nullptr);
    out["images"] = cert ? words_json(cert->generator_images()) : json(nullptr);
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << (cert ? "YES" : "NO") << "\n";
    if (cert && c.witness) print_witness(cert->generator_images());
  }
  return cert ? kYes : kNo;
}

int cmd_topo(const Config& c) {
  if (c.g < 1) throw freemono::ParseError("-g must be at least 1");
  auto graphs = freemono::enumerate_topographs(c.g);
  if (structured(c)) {
    json out = json::array();
    for (const auto& t : graphs) {
      json arcs = json::array();
      for (const auto& a : t.arcs()) arcs.push_back({a.source, a.target});
      out.push_back({{"vertices", t.vertex_count()}, {"arcs", arcs}});
    }
    std::cout << json{{"g", c.g}, {"count", graphs.size()}, {"graphs", out}}.dump(2) << "\n";
  } else {
    std::cout << graphs.size() << " graphs\n";
    for (std::size_t i = 0; i < graphs.size(); ++i) {
      std::cout << "graph " << i << " " << graphs[i].to_string();
    }
  }
  return kYes;
}

int cmd_candidates(const Config& c) {
  auto vs = freemono::parse_tuple(c.v, c.rank);
  freemono::Decider d(c.rank);
  const auto& set = d.candidates(vs, strategy_of(c));
  if (structured(c)) {
    json out = json::array();
    for (const auto& t : set.candidates) {
      out.push_back({{"basis", words_json(t.basis)}, {"expressions", words_json(t.expressions)},
                     {"full_use", t.uses_every_generator}});
    }
    std::cout << json{{"count", set.candidates.size()}, {"candidates", out}}.dump(2) << "\n";
  } else {
    for (const auto& t : set.candidates) std::cout << freemono::to_string(t) << "\n";
  }
  return kYes;
}

int cmd_corpus(const Config& c) {
  auto rep = freemono::run_corpus(c.corpus, strategy_of(c));
  if (structured(c)) {
    json entries = json::array();
    for (const auto& e : rep.entries) {
      entries.push_back({{"line", e.line}, {"rank", e.record.rank},
                         {"u", freemono::format_tuple(e.record.us)},
                         {"v", freemono::format_tuple(e.record.vs)},
                         {"answer", e.answer ? "YES" : "NO"},
                         {"expected", e.record.expected ? json(*e.record.expected ? "YES" : "NO")
                                                        : json(nullptr)},
                         {"mismatch", e.mismatch}});
    }
    json errors = json::array();
    for (const auto& e : rep.errors) errors.push_back({{"line", e.line}, {"message", e.message}});
    std::cout << json{{"entries", entries},
                      {"errors", errors},
                      {"summary",
                       {{"records", rep.entries.size()},
                        {"yes", rep.yes_count()},
                        {"mismatches", rep.mismatches()},
                        {"malformed", rep.errors.size()}}}}
                     .dump(2)
              << "\n";
  } else {
    for (const auto& e : rep.entries) {
      std::cout << e.line << "\t" << e.record.rank << "\t" << freemono::format_tuple(e.record.us)
                << "\t" << freemono::format_tuple(e.record.vs) << "\t"
                << (e.answer ? "YES" : "NO") << (e.mismatch ? "\tMISMATCH" : "") << "\n";
    }
    for (const auto& e : rep.errors) {
      std::cerr << "line " << e.line << ": " << e.message << "\n";
    }
    std::cout << "records " << rep.entries.size() << " yes " << rep.yes_count() << " mismatches "
              << rep.mismatches() << " malformed " << rep.errors.size() << "\n";
  }
  return rep.mismatches() ? kNo : kYes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monomorphisms of free groups: decide whether some injective f: F_n -> F_n "
               "sends u to v.\nWords use a,b,c,... for x1,x2,x3,..., uppercase for inverses, "
               "1 for the identity."};
  app.require_subcommand(1);
  Config c;

  auto add_common = [&](CLI::App* s) {
    s->add_option("-n,--rank", c.rank, "rank of the free group")->check(CLI::Range(1, 26));
    s->add_option("--format", c.format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
  };
  auto add_strategy = [&](CLI::App* s) {
    s->add_option("--strategy", c.strategy, "candidate generation (default testsub)")
        ->check(CLI::IsMember({"exhaustive", "testsub"}));
  };

  auto* decide = app.add_subcommand("decide", "is there a monomorphism with f(u) = v");
  add_common(decide);
  add_strategy(decide);
  decide->add_option("-u", c.u, "source word")->required();
  decide->add_option("-v", c.v, "target word")->required();
  decide->add_flag("--witness", c.witness, "print f(x_i) on YES");

  auto* multi = app.add_subcommand("decide-multi", "tuple version, coordinates separated by ';'");
  add_common(multi);
  add_strategy(multi);
  multi->add_option("-u", c.u, "source tuple, e.g. a;b")->required();
  multi->add_option("-v", c.v, "target tuple")->required();
  multi->add_flag("--witness", c.witness, "print f(x_i) on YES");

  auto* stall = app.add_subcommand("stallings", "core graph of <u_1,...>; membership of -v");
  add_common(stall);
  stall->add_option("-u", c.u, "generators separated by ';'")->required();
  stall->add_option("-v", c.v, "word to test for membership");

  auto* white = app.add_subcommand("whitehead", "minimize -u, or test -u ~ -v under Aut(F_n)");
  add_common(white);
  white->add_option("-u", c.u, "word or ';' tuple")->required();
  white->add_option("-v", c.v, "word or ';' tuple");
  white->add_flag("--witness", c.witness, "print the automorphism on YES");

  auto* topo = app.add_subcommand("topo", "list the basepointed graphs of rank g");
  topo->add_option("-g", c.g, "rank g")->required()->check(CLI::Range(1, 4));
  topo->add_option("--format", c.format, "output format")->check(CLI::IsMember({"text", "json"}));

  auto* cands = app.add_subcommand("candidates", "test subgroups for target -v");
  add_common(cands);
  add_strategy(cands);
  cands->add_option("-v", c.v, "target word or ';' tuple")->required();

  auto* orc = app.add_subcommand("oracle", "brute force over images of length <= bound");
  add_common(orc);
  orc->add_option("-u", c.u, "source word or ';' tuple")->required();
  orc->add_option("-v", c.v, "target word or ';' tuple")->required();
  orc->add_option("--bound", c.bound, "maximal image length")->check(CLI::Range(0, 8));
  orc->add_flag("--witness", c.witness, "print f(x_i) on YES");

  auto* corp = app.add_subcommand("corpus", "run a corpus file (n TAB u TAB v [TAB YES|NO])");
  corp->add_option("--corpus,path", c.corpus, "corpus path")->required();
  corp->add_option("--format", c.format, "output format")->check(CLI::IsMember({"text", "json"}));
  add_strategy(corp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*decide) return cmd_decide(c, false);
    if (*multi) return cmd_decide(c, true);
    if (*stall) return cmd_stallings(c);
    if (*white) return cmd_whitehead(c);
    if (*topo) return cmd_topo(c);
    if (*cands) return cmd_candidates(c);
    if (*orc) return cmd_oracle(c);
    if (*corp) return cmd_corpus(c);
  } catch (const freemono::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
