#include "ordkit/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ordkit/acceptance.hpp"
#include "ordkit/braid.hpp"
#include "ordkit/errors.hpp"
#include "ordkit/orders.hpp"
#include "ordkit/orderspace.hpp"
#include "ordkit/realization.hpp"

namespace ordkit::cli {

namespace {

using json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// key = value lines; '#' starts a comment.
std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    out[key] = value;
  }
  return out;
}

std::size_t positive_env(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) return 0;
  char* end = nullptr;
  const unsigned long long x = std::strtoull(v, &end, 10);
  if (*end != '\0' || x == 0) throw UsageError(std::string(name) + " must be a positive integer");
  return static_cast<std::size_t>(x);
}

// Options of every subcommand, filled in by CLI11.
struct Opts {
  std::string format{"json"};
  std::string config;

  std::string order, element, element_b, group, a, b, f, g, out_path, table, filter, fault, expect;
  std::string mode{"left"};
  std::string which{"dehornoy"};
  std::string reference, fix_order;
  std::vector<std::string> fix;
  std::size_t count{200};
  std::size_t budget{kDefaultCrossingBudget};
  std::size_t node_budget{200000};
  std::size_t region_cap{1500};
  std::int64_t pmax{100};
  int max_radius{5};
  int radius{3};
  int depth{6};
  int fix_radius{-1};
  int conj_radius{4};
  int target{2};
  int table_radius{-1};
  int strands{3};
  int samples_radius{3};
  int nmax{20};
  std::string check;
};

class Reporter {
 public:
  Reporter(std::ostream& out, std::string format) : out_(out), format_(std::move(format)) {}

  /// Writes a report. `rows` (with `columns`) is the CSV series when the
  /// command has one.
  void emit(json report, const std::vector<std::string>& columns = {},
            const std::vector<std::vector<std::string>>& rows = {}) {
    if (format_ == "json") {
      json full;
      full["schema_version"] = kSchemaVersion;
      for (auto& [k, v] : report.items()) full[k] = v;
      out_ << full.dump() << "\n";
    } else if (format_ == "csv") {
      if (columns.empty()) {
        // scalar fields as one header row and one value row
        std::string head, vals;
        for (auto& [k, v] : report.items()) {
          if (v.is_structured()) continue;
          head += (head.empty() ? "" : ",") + k;
          vals += (vals.empty() ? "" : ",") + scalar(v);
        }
        out_ << head << "\n" << vals << "\n";
      } else {
        for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
        out_ << "\n";
        for (const auto& r : rows) {
          for (std::size_t i = 0; i < r.size(); ++i) out_ << (i ? "," : "") << r[i];
          out_ << "\n";
        }
      }
    } else {
      for (auto& [k, v] : report.items()) out_ << k << ": " << (v.is_structured() ? v.dump() : scalar(v)) << "\n";
    }
  }

 private:
  static std::string scalar(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

  std::ostream& out_;
  std::string format_;
};

Element parse_in(const Group& G, const std::string& text, const char* what) {
  if (text.empty()) throw UsageError(std::string("missing ") + what);
  return G.parse(text);
}

BraidWord braid_in(const Group& G, const std::string& text, const char* what) {
  if (G.family() != Family::kBraid) throw UsageError("expected a braid group");
  return std::get<BraidWord>(parse_in(G, text, what));
}

Ordering order_in(const std::string& spec, const char* what = "--order") {
  if (spec.empty()) throw UsageError(std::string("missing ") + what);
  return parse_order_spec(spec);
}

std::string sign_text(int s) { return s > 0 ? "+" : s < 0 ? "-" : "0"; }

int check_expect(const std::string& expect, const std::string& actual) {
  if (expect.empty() || expect == actual) return kOk;
  return kNegative;
}

// ---------------------------------------------------------------------------

int cmd_braid_sign(const Opts& o, Reporter& rep) {
  Ordering ord = order_in(o.order);
  if (ord.group().family() != Family::kBraid) throw UsageError("braid sign needs a braid order");
  Element e = parse_in(ord.group(), o.element, "--element");
  json r;
  r["order"] = ord.description();
  r["element"] = ord.group().format(e);
  r["sign"] = sign_text(ord.evaluate(e));
  rep.emit(r);
  return check_expect(o.expect, r["sign"].get<std::string>());
}

int cmd_braid_equal(const Opts& o, Reporter& rep) {
  Group G = parse_group(o.group);
  BraidWord x = braid_in(G, o.element, "--a"), y = braid_in(G, o.element_b, "--b");
  const bool eq = braid::braid_equal(x, y);
  json r;
  r["group"] = G.name();
  r["equal"] = eq;
  rep.emit(r);
  return check_expect(o.expect, eq ? "true" : "false");
}

int cmd_braid_reduce(const Opts& o, Reporter& rep) {
  Group G = parse_group(o.group);
  BraidWord w = braid_in(G, o.element, "--element");
  auto s = braid::dehornoy_sign(w);
  json r;
  r["group"] = G.name();
  r["reduced"] = G.format(s.reduced);
  r["sign"] = sign_text(static_cast<int>(s.value));
  if (s.witness_index) r["index"] = *s.witness_index;
  rep.emit(r);
  return kOk;
}

int cmd_braid_rewrite(const Opts& o, Reporter& rep) {
  Group G = parse_group(o.group.empty() ? "b3" : o.group);
  BraidWord w = braid_in(G, o.element, "--element");
  auto u = braid::dd_cone_rewrite(w);
  const auto cone = braid::dd_cone(G.rank());
  std::string text;
  for (int i : u) text += (text.empty() ? "u" : " u") + std::to_string(i);
  json r;
  r["element"] = G.format(w);
  r["cone_word"] = text;
  r["verified"] = braid::braid_equal(braid::cone_word_to_braid(cone, u), w);
  rep.emit(r);
  return kOk;
}

int cmd_order_sign(const Opts& o, Reporter& rep) {
  Ordering ord = order_in(o.order);
  Element e = parse_in(ord.group(), o.element, "--element");
  json r;
  r["order"] = ord.description();
  r["element"] = ord.group().format(e);
  r["sign"] = sign_char(ord.sign(e)) == '+' ? "+" : "-";
  rep.emit(r);
  return check_expect(o.expect, r["sign"].get<std::string>());
}

int cmd_order_compare(const Opts& o, Reporter& rep) {
  Ordering ord = order_in(o.order);
  Element x = parse_in(ord.group(), o.element, "--g");
  Element y = parse_in(ord.group(), o.element_b, "--h");
  json r;
  r["order"] = ord.description();
  r["comparison"] = to_string(ord.compare(x, y));
  rep.emit(r);
  return check_expect(o.expect, r["comparison"].get<std::string>());
}

int cmd_order_check(const Opts& o, Reporter& rep) {
  Ordering ord = order_in(o.order);
  const Group& G = ord.group();
  std::vector<Element> samples = ball(G, o.samples_radius);
  json r;
  r["order"] = ord.description();
  r["check"] = o.check;
  r["samples"] = samples.size();
  std::string verdict = "pass";
  if (o.check == "conrad") {
    if (auto w = conrad_check(ord, samples)) {
      verdict = "witness";
      r["f"] = G.format(w->f);
      r["g"] = G.format(w->g);
    }
  } else if (o.check == "recurrence") {
    if (auto s = right_recurrence_check(ord, samples, o.nmax)) {
      verdict = "suspect";
      r["f"] = G.format(s->f);
      r["g"] = G.format(s->g);
      r["nmax"] = s->nmax;
    }
  } else if (o.check == "bi") {
    if (auto w = find_bi_invariance_violation(ord, samples)) verdict = "witness";
  } else {
    throw UsageError("unknown check '" + o.check + "' (conrad, recurrence, bi)");
  }
  r["result"] = verdict;
  rep.emit(r);
  return check_expect(o.expect, verdict);
}

int cmd_realize(const Opts& o, Reporter& rep) {
  Ordering ord = order_in(o.order);
  if (o.count == 0) throw UsageError("--count must be positive");
  Realization real = build_realization(ord, o.count);
  const Group& G = ord.group();
  json table;
  table["schema_version"] = kSchemaVersion;
  table["order"] = ord.description();
  json en = json::array();
  json t = json::object();
  for (std::size_t i = 0; i < real.size(); ++i) {
    const std::string name = G.format(real.element(i));
    en.push_back(name);
    t[name] = format_rational(real.t(i));
  }
  table["enumeration"] = en;
  table["t"] = t;
  json r;
  r["order"] = ord.description();
  r["count"] = real.size();
  auto problem = verify_realization(real);
  r["verified"] = !problem.has_value();
  if (problem) r["problem"] = *problem;
  if (!o.out_path.empty()) {
    std::ofstream f(o.out_path);
    if (!f) throw UsageError("cannot write '" + o.out_path + "'");
    f << table.dump(1) << "\n";
    r["out"] = o.out_path;
    rep.emit(r);
  } else {
    for (auto& [k, v] : r.items()) table[k] = v;
    table.erase("schema_version");
    rep.emit(table);
  }
  return problem ? kNegative : kOk;
}

Realization load_table(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read table '" + path + "'");
  json j;
  try {
    j = json::parse(f);
  } catch (const json::exception& e) {
    throw ParseError(std::string("table: ") + e.what());
  }
  if (!j.contains("order") || !j.contains("enumeration") || !j.contains("t")) {
    throw ParseError("table: needs order, enumeration and t");
  }
  Ordering ord = parse_order_spec(j["order"].get<std::string>());
  std::vector<Element> en;
  std::vector<Rational> t;
  for (const auto& name : j["enumeration"]) {
    const std::string s = name.get<std::string>();
    en.push_back(ord.group().parse(s));
    if (!j["t"].contains(s)) throw ParseError("table: no t value for '" + s + "'");
    t.push_back(parse_rational(j["t"][s].get<std::string>()));
  }
  return Realization(ord, std::move(en), std::move(t));
}

int cmd_crossings(const Opts& o, Reporter& rep) {
  Realization real = o.table.empty() ? build_realization(order_in(o.order), o.count) : load_table(o.table);
  if (auto problem = verify_realization(real)) throw DomainError("table fails verification: " + *problem);
  CrossingSearch s = detect_crossing(real, o.budget);
  const Group& G = real.group();
  json r;
  r["order"] = real.source().description();
  r["count"] = real.size();
  r["pairs_examined"] = s.pairs_examined;
  std::string verdict = s.witness ? "witness" : s.budget_exhausted ? "budget-exhausted" : "none";
  r["result"] = verdict;
  if (s.witness) {
    const auto& w = *s.witness;
    r["kind"] = to_string(w.kind);
    r["f"] = G.format(w.f);
    r["g"] = G.format(w.g);
    r["a_rank"] = w.a_rank;
    r["b_rank"] = w.b_rank;
    r["a_interval"] = {format_rational(w.a_low), format_rational(w.a_high)};
    r["b_interval"] = {format_rational(w.b_low), format_rational(w.b_high)};
    if (w.kind == CrossingKind::kCrossed) r["moves_b"] = w.moves_b;
    r["rechecked"] = recheck_crossing(real, w);
  }
  rep.emit(r);
  if (!o.expect.empty()) return check_expect(o.expect, verdict);
  return s.budget_exhausted && !s.witness ? kResource : kOk;
}

int cmd_holder(const Opts& o, Reporter& rep) {
  Ordering ord = order_in(o.order);
  Element f = parse_in(ord.group(), o.f, "--f");
  Element g = parse_in(ord.group(), o.g, "--g");
  if (o.pmax <= 0) throw UsageError("--pmax must be positive");
  HolderResult h = holder_embedding(ord, f, g, o.pmax);
  json r;
  r["order"] = ord.description();
  r["f"] = ord.group().format(f);
  r["g"] = ord.group().format(g);
  r["pmax"] = o.pmax;
  r["bracket_width"] = format_rational(h.bracket_width);
  r["ratio"] = format_rational(h.ratios.back());
  json series = json::array();
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < h.q.size(); ++i) {
    const std::string p = std::to_string(i + 1);
    rows.push_back({p, std::to_string(h.q[i]), format_rational(h.ratios[i])});
    series.push_back({{"p", i + 1}, {"q", h.q[i]}, {"ratio", format_rational(h.ratios[i])}});
  }
  r["series"] = series;
  rep.emit(r, {"p", "q", "ratio"}, rows);
  return kOk;
}

int cmd_space_distance(const Opts& o, Reporter& rep) {
  Ordering x = order_in(o.a, "--a"), y = order_in(o.b, "--b");
  Distance d = order_distance(x, y, o.max_radius);
  json r;
  r["n_prime"] = d.n_prime;
  r["distance"] = d.text();
  if (d.discriminator) r["discriminator"] = x.group().format(*d.discriminator);
  rep.emit(r);
  return kOk;
}

std::vector<std::pair<Element, Sign>> fixed_signs(const Group& G, const Opts& o) {
  std::vector<std::pair<Element, Sign>> out;
  for (const auto& item : o.fix) {
    const auto colon = item.rfind(':');
    if (colon == std::string::npos) throw UsageError("--fix expects word:+ or word:-");
    const std::string s = item.substr(colon + 1);
    if (s != "+" && s != "-") throw UsageError("--fix expects word:+ or word:-");
    out.emplace_back(G.parse(item.substr(0, colon)), s == "+" ? Sign::kPositive : Sign::kNegative);
  }
  if (!o.fix_order.empty()) {
    Ordering ord = order_in(o.fix_order, "--fix-order");
    if (!(ord.group() == G)) throw UsageError("--fix-order lives on another group");
    BallRestriction b = restrict_to_ball(ord, o.fix_radius < 0 ? o.radius - 1 : o.fix_radius);
    for (std::size_t i = 0; i < b.elements.size(); ++i) out.emplace_back(b.elements[i], b.signs[i]);
  }
  return out;
}

json restriction_json(const BallRestriction& b) {
  json t = json::object();
  for (std::size_t i = 0; i < b.elements.size(); ++i) t[b.group.format(b.elements[i])] = sign_char(b.signs[i]) == '+' ? "+" : "-";
  return t;
}

json certificate_json(const Group& G, const Certificate& c) {
  json steps = json::array();
  for (const auto& s : c.steps) {
    json j;
    j["rule"] = to_string(s.rule);
    if (s.x >= 0) {
      j["x"] = s.x;
      j["y"] = s.y;
    }
    j["result"] = G.format(s.result);
    steps.push_back(j);
  }
  json r;
  r["steps"] = steps;
  r["clash"] = c.clash_b < 0 ? json{c.clash_a} : json{c.clash_a, c.clash_b};
  r["replays"] = replay_certificate(G, c);
  return r;
}

int cmd_space_extend_count(const Opts& o, Reporter& rep) {
  Group G = parse_group(o.group);
  SearchOptions so;
  so.mode = parse_closure_mode(o.mode);
  so.depth = o.depth;
  so.node_budget = o.node_budget;
  so.region_cap = o.region_cap;
  SearchVerdict v = consistent_extensions(G, o.radius, fixed_signs(G, o), so);
  json r;
  r["group"] = G.name();
  r["radius"] = o.radius;
  r["mode"] = to_string(so.mode);
  r["depth"] = so.depth;
  r["status"] = to_string(v.status);
  r["count"] = v.assignments.size();
  r["eliminated"] = v.eliminated;
  r["nodes"] = v.nodes;
  r["region_radius"] = v.region_radius;
  r["region_size"] = v.region_size;
  if (!v.reason.empty()) r["reason"] = v.reason;
  json a = json::array();
  for (std::size_t i = 0; i < v.assignments.size(); ++i) a.push_back(restriction_json(v.restriction(i)));
  r["assignments"] = a;
  json c = json::array();
  for (const auto& cert : v.certificates) c.push_back(certificate_json(G, cert));
  r["certificates"] = c;
  rep.emit(r);
  if (v.status == SearchStatus::kUnknown) return kResource;
  return check_expect(o.expect, std::to_string(v.assignments.size()));
}

int cmd_space_probe(const Opts& o, Reporter& rep) {
  Ordering ord = order_in(o.order);
  ProbeOptions po;
  po.depth = o.depth;
  po.search.node_budget = o.node_budget;
  po.search.region_cap = o.region_cap;
  ProbeResult p = isolated_probe(ord, o.radius, po);
  const Group& G = ord.group();
  json r;
  r["order"] = ord.description();
  r["radius"] = o.radius;
  r["result"] = to_string(p.kind);
  if (!p.method.empty()) r["method"] = p.method;
  if (p.alternative) r["alternative"] = p.alternative->description();
  if (p.discriminator) r["discriminator"] = G.format(*p.discriminator);
  if (p.table) r["table"] = restriction_json(*p.table);
  if (!p.note.empty()) r["note"] = p.note;
  rep.emit(r);
  return check_expect(o.expect, to_string(p.kind));
}

int cmd_space_converge(const Opts& o, Reporter& rep) {
  Ordering ord = order_in(o.order);
  Ordering ref = o.reference.empty() ? ord : order_in(o.reference, "--reference");
  ConvergenceReport c = conjugate_convergence(ord, ref, o.conj_radius, o.target, o.table_radius);
  const Group& G = ord.group();
  json r;
  r["order"] = ord.description();
  r["reference"] = ref.description();
  r["conjugator_radius"] = o.conj_radius;
  r["target"] = o.target;
  r["table_radius"] = c.table_radius;
  r["reached_target"] = c.reached_target;
  r["fixed_point"] = c.fixed_point;
  r["conjugators_examined"] = c.conjugators_examined;
  json steps = json::array();
  std::vector<std::vector<std::string>> rows;
  for (const auto& s : c.steps) {
    steps.push_back({{"m", s.m},
                     {"conjugator", G.format(s.conjugator)},
                     {"agreement_radius", s.agreement_radius},
                     {"discriminator", G.format(s.discriminator)}});
    rows.push_back({std::to_string(s.m), std::to_string(s.agreement_radius), G.format(s.conjugator),
                    G.format(s.discriminator)});
  }
  r["steps"] = steps;
  rep.emit(r, {"m", "agreement_radius", "conjugator", "discriminator"}, rows);
  if (!o.expect.empty()) return check_expect(o.expect, c.fixed_point ? "fixed-point" : c.reached_target ? "reached" : "not-reached");
  return kOk;
}

int cmd_space_soul(const Opts& o, Reporter& rep) {
  if (o.strands < 2 || o.strands > 5) throw UsageError("--strands must be in 2..5");
  SoulResult s = conradian_soul_braid(o.strands, o.which, o.samples_radius);
  Group G = Group::braid(o.strands);
  json r;
  r["order"] = s.order;
  r["j"] = s.j;
  std::string soul = s.j >= o.strands ? "id" : "<s" + std::to_string(s.j) + (s.j < o.strands - 1 ? "..s" + std::to_string(o.strands - 1) : "") + ">";
  r["soul"] = soul;
  json levels = json::array();
  for (const auto& l : s.levels) levels.push_back({{"j", l.j}, {"conradian_on_samples", l.conradian_on_samples}, {"samples", l.samples}});
  r["levels"] = levels;
  if (s.witness) {
    r["witness_kind"] = s.witness_kind;
    r["f"] = G.format(s.witness->f);
    r["g"] = G.format(s.witness->g);
    if (!s.pattern.empty()) r["pattern"] = format_pattern(s.pattern);
    r["value"] = G.format(s.witness_value);
  }
  rep.emit(r);
  return check_expect(o.expect, std::to_string(s.j));
}

int cmd_selftest(const Opts& o, std::ostream& out) {
  if (!o.fault.empty()) {
    if (o.fault != "handle-reduction") throw UsageError("unknown fault '" + o.fault + "' (handle-reduction)");
    braid::fault::inject_handle_reduction_fault(true);
  }
  auto results = run_acceptance(o.filter, &out);
  braid::fault::inject_handle_reduction_fault(false);
  std::size_t failed = 0;
  for (const auto& r : results) failed += r.pass ? 0 : 1;
  out << results.size() - failed << "/" << results.size() << " criteria passed\n";
  if (results.empty()) throw UsageError("filter '" + o.filter + "' selects no criterion");
  return failed ? kNegative : kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Opts o;
  std::map<std::string, std::string> config;
  std::set<std::string> config_used;
  try {
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
      if (args[i] == "--config") config = read_config(args[i + 1]);
    }
    for (const auto& a : args) {
      if (a.rfind("--config=", 0) == 0) config = read_config(a.substr(9));
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  CLI::App app{"ordkit: orderings of groups at desk scale", "ordkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", o.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--config", o.config, "key = value file of option defaults");

  std::vector<CLI::Option*> from_config;
  // Adds an option whose default may come from the config file.
  auto opt = [&](CLI::App* sub, const std::string& name, auto& var, const std::string& help) {
    CLI::Option* op = sub->add_option("--" + name, var, help);
    if (auto it = config.find(name); it != config.end()) {
      op->default_val(it->second);
      config_used.insert(name);
      from_config.push_back(op);
    }
    return op;
  };

  auto* braid_cmd = app.add_subcommand("braid", "braid words")->require_subcommand(1);
  auto* b_sign = braid_cmd->add_subcommand("sign", "sign of a braid under a braid order");
  opt(b_sign, "order", o.order, "dehornoy:bN or dd:bN")->required();
  opt(b_sign, "element", o.element, "braid word, e.g. \"s1^-1 s2^4\"")->required();
  opt(b_sign, "expect", o.expect, "exit 1 unless the sign is this");
  auto* b_equal = braid_cmd->add_subcommand("equal", "word problem");
  opt(b_equal, "group", o.group, "bN")->required();
  opt(b_equal, "a", o.element, "first word")->required();
  opt(b_equal, "b", o.element_b, "second word")->required();
  opt(b_equal, "expect", o.expect, "true or false");
  auto* b_reduce = braid_cmd->add_subcommand("reduce", "handle reduction");
  opt(b_reduce, "group", o.group, "bN")->required();
  opt(b_reduce, "element", o.element, "braid word")->required();
  auto* b_rewrite = braid_cmd->add_subcommand("rewrite", "DD-positive B3 braid as a positive word in u1, u2");
  opt(b_rewrite, "group", o.group, "b3");
  opt(b_rewrite, "element", o.element, "braid word")->required();

  auto* order_cmd = app.add_subcommand("order", "evaluate orderings")->require_subcommand(1);
  auto* o_sign = order_cmd->add_subcommand("sign", "sign of an element");
  opt(o_sign, "order", o.order, "order spec")->required();
  opt(o_sign, "element", o.element, "element")->required();
  opt(o_sign, "expect", o.expect, "+ or -");
  auto* o_cmp = order_cmd->add_subcommand("compare", "compare two elements");
  o_cmp->set_help_flag("--help", "Print this help message and exit");
  opt(o_cmp, "order", o.order, "order spec")->required();
  opt(o_cmp, "g", o.element, "left element")->required();
  opt(o_cmp, "h", o.element_b, "right element")->required();
  opt(o_cmp, "expect", o.expect, "<, = or >");
  auto* o_check = order_cmd->add_subcommand("check", "sampled property checks");
  opt(o_check, "order", o.order, "order spec")->required();
  opt(o_check, "check", o.check, "conrad, recurrence or bi")->required();
  opt(o_check, "samples-radius", o.samples_radius, "sample ball radius");
  opt(o_check, "nmax", o.nmax, "recurrence exponent bound");
  opt(o_check, "expect", o.expect, "pass, witness or suspect");

  auto* realize = app.add_subcommand("realize", "dynamical realization table");
  opt(realize, "order", o.order, "order spec")->required();
  opt(realize, "count", o.count, "number of elements");
  opt(realize, "out", o.out_path, "write the table here");

  auto* crossings = app.add_subcommand("crossings", "crossing detection on a realization");
  opt(crossings, "table", o.table, "table written by realize");
  opt(crossings, "order", o.order, "build a table for this order instead");
  opt(crossings, "count", o.count, "elements when building from --order");
  opt(crossings, "budget", o.budget, "pair budget");
  opt(crossings, "expect", o.expect, "witness or none");

  auto* holder = app.add_subcommand("holder", "rational brackets g^p against powers of f");
  opt(holder, "order", o.order, "order spec")->required();
  opt(holder, "f", o.f, "positive element")->required();
  opt(holder, "g", o.g, "element")->required();
  opt(holder, "pmax", o.pmax, "largest p");

  auto* space = app.add_subcommand("space", "the space of orderings")->require_subcommand(1);
  auto* s_dist = space->add_subcommand("distance", "ball-restriction distance");
  opt(s_dist, "a", o.a, "first order")->required();
  opt(s_dist, "b", o.b, "second order")->required();
  opt(s_dist, "max-radius", o.max_radius, "largest radius compared");
  auto* s_ext = space->add_subcommand("extend-count", "consistent sign tables on a ball");
  opt(s_ext, "group", o.group, "group name")->required();
  opt(s_ext, "radius", o.radius, "ball radius");
  opt(s_ext, "mode", o.mode, "left, bi or conrad");
  opt(s_ext, "depth", o.depth, "saturation rounds");
  opt(s_ext, "fix", o.fix, "word:+ or word:- (repeatable)");
  opt(s_ext, "fix-order", o.fix_order, "fix the signs of this order on a smaller ball");
  opt(s_ext, "fix-radius", o.fix_radius, "radius fixed by --fix-order (default radius - 1)");
  opt(s_ext, "node-budget", o.node_budget, "search nodes");
  opt(s_ext, "region-cap", o.region_cap, "closure region size cap");
  opt(s_ext, "expect", o.expect, "expected count");
  auto* s_probe = space->add_subcommand("probe", "look for a different order agreeing on a ball");
  opt(s_probe, "order", o.order, "order spec")->required();
  opt(s_probe, "radius", o.radius, "ball radius");
  opt(s_probe, "depth", o.depth, "saturation rounds");
  opt(s_probe, "node-budget", o.node_budget, "search nodes");
  opt(s_probe, "region-cap", o.region_cap, "closure region size cap");
  opt(s_probe, "expect", o.expect, "realized, unrealized or none-within-budget");
  auto* s_conv = space->add_subcommand("converge", "conjugates approaching an order");
  opt(s_conv, "order", o.order, "order spec")->required();
  opt(s_conv, "reference", o.reference, "target order (default: --order)");
  opt(s_conv, "conjugator-radius", o.conj_radius, "conjugator word length bound");
  opt(s_conv, "target", o.target, "agreement radius target");
  opt(s_conv, "table-radius", o.table_radius, "discriminator search radius (default target + 2)");
  opt(s_conv, "expect", o.expect, "reached, not-reached or fixed-point");
  auto* s_soul = space->add_subcommand("soul", "Conradian soul of a braid order");
  opt(s_soul, "strands", o.strands, "2..5");
  opt(s_soul, "which", o.which, "dehornoy or dd");
  opt(s_soul, "samples-radius", o.samples_radius, "sample ball radius per level");
  opt(s_soul, "expect", o.expect, "expected j");

  auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");
  opt(selftest, "filter", o.filter, "criterion ids or name fragments, comma separated");
  opt(selftest, "inject-fault", o.fault, "handle-reduction");

  for (const auto& [k, v] : config) {
    if (!config_used.count(k) && k != "format") {
      err << "error: unknown config key '" << k << "'\n";
      return kUsage;
    }
  }
  if (config.count("format")) o.format = config["format"];
  for (auto* op : from_config) op->required(false);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (const auto cap = positive_env("ORDKIT_STEP_CAP")) braid::set_default_step_cap(cap);
    positive_env("ORDKIT_THREADS");  // validated; every search runs on one thread
    if (o.format != "json" && o.format != "csv" && o.format != "text") throw UsageError("bad --format");
    Reporter rep(out, o.format);
    if (b_sign->parsed()) return cmd_braid_sign(o, rep);
    if (b_equal->parsed()) return cmd_braid_equal(o, rep);
    if (b_reduce->parsed()) return cmd_braid_reduce(o, rep);
    if (b_rewrite->parsed()) return cmd_braid_rewrite(o, rep);
    if (o_sign->parsed()) return cmd_order_sign(o, rep);
    if (o_cmp->parsed()) return cmd_order_compare(o, rep);
    if (o_check->parsed()) return cmd_order_check(o, rep);
    if (realize->parsed()) return cmd_realize(o, rep);
    if (crossings->parsed()) {
      if (o.table.empty() && o.order.empty()) throw UsageError("crossings needs --table or --order");
      return cmd_crossings(o, rep);
    }
    if (holder->parsed()) return cmd_holder(o, rep);
    if (s_dist->parsed()) return cmd_space_distance(o, rep);
    if (s_ext->parsed()) return cmd_space_extend_count(o, rep);
    if (s_probe->parsed()) return cmd_space_probe(o, rep);
    if (s_conv->parsed()) return cmd_space_converge(o, rep);
    if (s_soul->parsed()) return cmd_space_soul(o, rep);
    if (selftest->parsed()) return cmd_selftest(o, out);
    throw UsageError("no command");
  } catch (const ResourceError& e) {
    err << "resource cap exceeded: " << e.what() << "\n";
    return kResource;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace ordkit::cli
