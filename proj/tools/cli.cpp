#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <CLI11.hpp>

#include "costshare/combinatorics.hpp"
#include "costshare/equilibrium.hpp"
#include "costshare/generators.hpp"
#include "costshare/hypercube.hpp"
#include "costshare/io.hpp"
#include "costshare/lower_bounds.hpp"
#include "costshare/outerplanar.hpp"
#include "costshare/poa.hpp"
#include "costshare/stochastic.hpp"

namespace costshare::cli {

namespace {

namespace fs = std::filesystem;

// Relative output paths resolve against $COSTSHARE_OUTPUT_DIR when it is set.
fs::path output_path(const std::string& path) {
  const fs::path p(path);
  if (p.is_absolute()) return p;
  if (const char* dir = std::getenv("COSTSHARE_OUTPUT_DIR"); dir && *dir) return fs::path(dir) / p;
  return p;
}

void emit(std::ostream& out, const std::string& path, const std::string& text) {
  if (path.empty()) {
    out << text;
  } else {
    write_text_file(output_path(path), text);
  }
}

std::string dump(const Json& json) { return json.dump(2) + "\n"; }

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

// tour | shapley | lex | order:FILE | file:FILE
GwspProtocol make_protocol(const Graph& graph, const std::string& spec) {
  if (spec == "tour") return tour_protocol(graph);
  if (spec == "shapley") return GwspProtocol::shapley(graph);
  if (spec == "lex") {
    std::vector<Vertex> order = graph.non_root_vertices();
    std::sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return graph.lex_less(a, b); });
    return GwspProtocol::ordered(graph, std::move(order));
  }
  const auto colon = spec.find(':');
  require(colon != std::string::npos, "unknown protocol '" + spec + "'");
  const std::string kind = spec.substr(0, colon);
  require(kind == "order" || kind == "file", "unknown protocol kind '" + kind + "'");
  GwspProtocol protocol = parse_protocol(graph, read_json_file(spec.substr(colon + 1)));
  require(kind != "order" || protocol.is_ordered(), "protocol file is not an ordered protocol");
  return protocol;
}

// Carries a protocol over to a normalized graph: every added vertex joins the
// part of the vertex it copies, with the same weight, right after it.
GwspProtocol extend_protocol(const Graph& original, const GwspProtocol& protocol, const Graph& normalized) {
  std::vector<std::vector<Vertex>> parts(protocol.parts().size());
  std::vector<double> weights(normalized.num_vertices(), 1.0);
  std::vector<std::vector<Vertex>> copies(original.num_vertices());
  for (Vertex v = 0; v < normalized.num_vertices(); ++v) {
    std::string id = normalized.id(v);
    while (!original.find(id) && !id.empty() && id.back() == '\'') id.pop_back();
    if (original.find(id) && original.at(id) != v && id != normalized.id(v)) copies[original.at(id)].push_back(v);
  }
  for (std::size_t p = 0; p < parts.size(); ++p) {
    for (Vertex v : protocol.parts()[p]) {
      const Vertex nv = normalized.at(original.id(v));
      parts[p].push_back(nv);
      weights[nv] = protocol.weight(v);
      for (Vertex c : copies[v]) {
        parts[p].push_back(c);
        weights[c] = protocol.weight(v);
      }
    }
  }
  return GwspProtocol(normalized, std::move(parts), std::move(weights));
}

Json profile_to_json(const Graph& graph, const StrategyProfile& profile) {
  Json out = Json::object();
  for (const auto& [player, path] : profile.paths) {
    Json ids = Json::array();
    for (Vertex v : path) ids.push_back(graph.id(v));
    out[graph.id(player)] = std::move(ids);
  }
  return out;
}

std::string instance_name(const std::string& path) { return fs::path(path).stem().string(); }

struct Options {
  std::string out;
  std::string format = "csv";
  std::uint64_t seed = 1;

  // gen
  std::size_t n = 0;
  std::size_t r = 1;
  std::size_t k = 0;
  std::size_t copies = 1;
  double edge_prob = 0.3;
  bool with_probs = false;
  std::string root_cost = "2k";
  std::string host = "path";
  std::string protocol_out;

  // poa / ne / stochastic
  std::string instance;
  std::string protocol = "tour";
  bool adversarial = false;
  bool stochastic = false;
  std::size_t mc = 0;
  std::size_t subset_cap = 16;
  std::size_t terminal_cap = kDefaultTerminalCap;
  std::string players;
  std::string method = "worst";
  std::string mode = "rand";
  std::size_t samples = 0;
  bool black_box = false;
  std::string order;
  bool exact = false;

  // zigzag / lemmas
  std::string labeling = "random";
  std::size_t budget = kDefaultZigZagBudget;
  std::string cert;
  std::size_t m = 1;
  std::size_t trials = 100;
};

int gen_command(const std::string& which, const Options& o, std::ostream& out) {
  Rng rng(o.seed);
  if (which == "cycle") {
    emit(out, o.out, dump(instance_to_json(random_cycle(o.n, rng))));
  } else if (which == "outerplanar") {
    emit(out, o.out, dump(instance_to_json(random_maximal_outerplanar(o.n, rng))));
  } else if (which == "random-graph") {
    const Graph graph = random_connected_graph(o.n, o.edge_prob, rng);
    if (o.with_probs) {
      const ActivationModel model = random_activation_model(graph, rng);
      emit(out, o.out, dump(instance_to_json(graph, &model)));
    } else {
      emit(out, o.out, dump(instance_to_json(graph)));
    }
  } else if (which == "qtilde") {
    require(o.root_cost == "2k" || o.root_cost == "2^k", "--root-cost must be 2k or 2^k");
    require(o.host == "path" || o.host == "hypercube", "--host must be path or hypercube");
    QtildeParams params;
    params.r = o.r;
    params.k = o.k;
    params.n = o.n;
    params.root_cost = o.root_cost == "2k" ? RootCostPolicy::kTwoK : RootCostPolicy::kTwoPowK;
    params.host = o.host == "path" ? QtildeHost::kPath : QtildeHost::kHypercube;
    const QtildeInstance inst = build_qtilde(params);
    emit(out, o.out, dump(instance_to_json(inst.graph)));
    if (!o.protocol_out.empty()) {
      write_text_file(output_path(o.protocol_out), dump(protocol_to_json(inst.graph, qtilde_protocol(inst))));
    }
  } else if (which == "qstar") {
    QstarParams params;
    params.r = o.r;
    params.n = o.n;
    params.copies = o.copies;
    params.k = o.k;
    emit(out, o.out, dump(instance_to_json(build_qstar(params).graph)));
  }
  return kExitOk;
}

PoaOptions poa_options(const Options& o) {
  require(o.subset_cap > 0 && o.terminal_cap > 0, "caps must be positive");
  PoaOptions options;
  options.subset_cap = o.subset_cap;
  options.terminal_cap = o.terminal_cap;
  options.worst_ne.seed = o.seed;
  return options;
}

std::string report_csv(const std::string& name, std::size_t k, const std::string& protocol, const PoaReport& report,
                       std::uint64_t seed) {
  PoaTable table;
  table.rows.push_back({name, k, protocol, report.ne_cost, report.opt_cost, report.ratio, report.exact_opt,
                        report.exact_ne, seed});
  return table.to_csv();
}

int poa_command(const Options& o, std::ostream& out) {
  require(o.adversarial != o.stochastic, "choose exactly one of --adversarial and --stochastic");
  require(o.format == "csv" || o.format == "json", "--format must be csv or json");
  const Instance inst = parse_instance(read_json_file(o.instance));
  const Graph& graph = inst.graph;
  const GwspProtocol protocol = make_protocol(graph, o.protocol);
  const PoaOptions options = poa_options(o);
  PoaReport report;
  std::size_t k = 0;
  if (o.adversarial) {
    report = adversarial_poa(graph, protocol, options);
    k = report.witness.size();
  } else {
    require(inst.model.has_value(), "stochastic evaluation needs \"probs\" in the instance");
    report = o.mc ? stochastic_poa(graph, protocol, *inst.model, MonteCarlo{o.mc, o.seed}, options)
                  : stochastic_poa(graph, protocol, *inst.model, options);
    k = graph.num_vertices() - 1;
  }
  if (o.format == "json") {
    emit(out, o.out, dump(report_to_json(graph, report)));
  } else {
    emit(out, o.out, report_csv(instance_name(o.instance), k, o.protocol, report, o.seed));
  }
  return kExitOk;
}

int ne_command(const Options& o, std::ostream& out) {
  const Instance inst = parse_instance(read_json_file(o.instance));
  const std::vector<std::string> requested = split_list(o.players);
  require(!requested.empty(), "--players needs at least one vertex");
  const NormalizedGame game = normalize_players(inst.graph, requested);
  const Graph& graph = game.graph;
  const GwspProtocol protocol =
      extend_protocol(inst.graph, make_protocol(inst.graph, o.protocol), graph);

  Json result{{"players", Json::array()}, {"method", o.method}};
  for (Vertex v : game.players.players()) result["players"].push_back(graph.id(v));
  if (graph.num_vertices() != inst.graph.num_vertices()) result["instance"] = instance_to_json(graph);

  auto describe = [&](const StrategyProfile& profile) {
    const NashReport nash = is_nash(graph, protocol, profile);
    return Json{{"profile", profile_to_json(graph, profile)},
                {"social_cost", social_cost(graph, profile)},
                {"is_nash", nash.is_nash}};
  };
  if (o.method == "greedy") {
    require(protocol.is_ordered(), "greedy outcomes need an ordered protocol");
    result.update(describe(greedy_ordered_outcome(graph, protocol, game.players)));
  } else if (o.method == "brd") {
    result.update(describe(run_brd(graph, protocol, game.players, shortest_paths_profile(graph, game.players),
                                   Schedule::kRoundRobin)));
  } else if (o.method == "enumerate") {
    Json all = Json::array();
    for (const StrategyProfile& p : enumerate_equilibria(graph, protocol, game.players)) all.push_back(describe(p));
    result["equilibria"] = std::move(all);
  } else if (o.method == "worst") {
    WorstNeOptions options;
    options.seed = o.seed;
    const WorstNe worst = worst_ne_cost(graph, protocol, game.players, options);
    result["worst_ne_cost"] = worst.cost;
    result["exact"] = worst.exact;
  } else {
    fail(ErrorKind::kValidation, "--method must be greedy, brd, enumerate or worst");
  }
  emit(out, o.out, dump(result));
  return kExitOk;
}

Labeling load_labeling(const Options& o) {
  if (o.labeling == "random") {
    Rng rng(o.seed);
    return Labeling::random(o.n, rng);
  }
  const Json json = read_json_file(o.labeling);
  require(json.is_array(), "labeling file must hold an array of labels indexed by vertex");
  return Labeling(json.get<std::vector<std::uint32_t>>());
}

int zigzag_find(const Options& o, std::ostream& out) {
  const Hypercube cube(o.n);
  const Labeling labeling = load_labeling(o);
  require(labeling.labels().size() == cube.size(), "labeling size does not match 2^n");
  emit(out, o.out, dump(certificate_to_json(find_zigzag(cube, labeling, o.r, o.budget))));
  return kExitOk;
}

int zigzag_verify(const Options& o, std::ostream& out) {
  const ZigZagCertificate cert = parse_certificate(read_json_file(o.cert));
  const ZigZagCheck check = verify_certificate(cert);
  if (!check.ok()) {
    std::string why;
    if (!check.length_ok) why += " length";
    if (!check.zigzag) why += " zigzag";
    if (!check.distance_preserving) why += " distance";
    fail(ErrorKind::kValidation, "INVALID certificate, failed checks:" + why);
  }
  emit(out, o.out, "VALID\n");
  return kExitOk;
}

int stochastic_order(const Options& o, std::ostream& out) {
  const Instance inst = parse_instance(read_json_file(o.instance));
  require(inst.model.has_value(), "stochastic ordering needs \"probs\" in the instance");
  const Graph& graph = inst.graph;
  const ActivationModel& model = *inst.model;
  if (o.mode == "rand") {
    UniversalOrder order;
    if (o.black_box) {
      // The sampler is the only channel to the distribution.
      const ActivationSampler sampler = [&](Rng& rng) { return sample_activation(graph, model, rng); };
      order = xi_rand(graph, sampler, o.seed);
    } else {
      order = xi_rand(graph, model, o.seed);
    }
    emit(out, o.out, dump(order_to_json(graph, order)));
  } else if (o.mode == "derand") {
    EstimatorMode mode;
    if (o.samples) mode.monte_carlo = CommonSamples{o.samples, o.seed};
    const Derandomized d = derandomize(graph, model, mode);
    Json json = order_to_json(graph, d.order);
    json["trace"] = d.trace;
    emit(out, o.out, dump(json));
  } else {
    fail(ErrorKind::kValidation, "--mode must be rand or derand");
  }
  return kExitOk;
}

int stochastic_eval(const Options& o, std::ostream& out) {
  require(o.exact != (o.mc > 0), "choose exactly one of --exact and --mc N");
  const Instance inst = parse_instance(read_json_file(o.instance));
  require(inst.model.has_value(), "stochastic evaluation needs \"probs\" in the instance");
  const GwspProtocol protocol = parse_protocol(inst.graph, read_json_file(o.order));
  const PoaOptions options = poa_options(o);
  const PoaReport report = o.exact ? stochastic_poa(inst.graph, protocol, *inst.model, options)
                                   : stochastic_poa(inst.graph, protocol, *inst.model, MonteCarlo{o.mc, o.seed}, options);
  emit(out, o.out,
       report_csv(instance_name(o.instance), inst.graph.num_vertices() - 1, instance_name(o.order), report, o.seed));
  return kExitOk;
}

int lemmas_command(const std::string& which, const Options& o, std::ostream& out) {
  Rng rng(o.seed);
  Json result{{"lemma", which}};
  if (which == "one-connection") {
    const CommonNeighborReport report = verify_common_neighbor(o.m);
    result["m"] = o.m;
    result["first_pairs"] = report.first_pairs;
    result["second_pairs"] = report.second_pairs;
    result["violations"] = report.violations;
    result["ok"] = report.ok();
  } else if (which == "rainbow") {
    // Parts of size s r^2 over colors used at most r times each.
    const std::size_t parts = std::max<std::size_t>(o.m, 1), s = 1, r = 2;
    std::size_t passed = 0;
    for (std::size_t t = 0; t < o.trials; ++t) {
      std::vector<std::uint64_t> colors;
      for (std::size_t c = 0; c < parts * s * r; ++c) colors.insert(colors.end(), r, c);
      rng.shuffle(colors);
      std::vector<std::vector<ColoredElement>> instance(parts);
      for (std::size_t i = 0; i < colors.size(); ++i) {
        instance[i / (s * r * r)].push_back({static_cast<std::int64_t>(i), colors[i]});
      }
      if (is_rainbow_transversal(instance, rainbow_transversal(instance, s, r), s)) ++passed;
    }
    result["trials"] = o.trials;
    result["passed"] = passed;
    result["ok"] = passed == o.trials;
  } else if (which == "nonconsecutive") {
    std::size_t passed = 0;
    for (std::size_t t = 0; t < o.trials; ++t) {
      std::vector<std::int64_t> values(o.m * o.m);
      for (std::size_t i = 0; i < values.size(); ++i) values[i] = static_cast<std::int64_t>(i + 1);
      rng.shuffle(values);
      std::vector<std::vector<std::int64_t>> parts(o.m);
      for (std::size_t i = 0; i < values.size(); ++i) parts[i / o.m].push_back(values[i]);
      if (is_nonconsecutive_transversal(parts, nonconsecutive_transversal(parts))) ++passed;
    }
    result["m"] = o.m;
    result["trials"] = o.trials;
    result["passed"] = passed;
    result["ok"] = passed == o.trials;
  }
  emit(out, o.out, dump(result));
  return result.value("ok", false) ? kExitOk : kExitSolver;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Multicast cost-sharing workbench", "costshare"};
  app.require_subcommand(1);

  auto add_out = [&](CLI::App* cmd) { cmd->add_option("--out", o.out, "Output file (default: stdout)"); };
  auto add_seed = [&](CLI::App* cmd, bool required) {
    auto* opt = cmd->add_option("--seed", o.seed, "Random seed");
    if (required) opt->required();
  };

  auto* gen = app.add_subcommand("gen", "Generate an instance");
  gen->require_subcommand(1);
  auto* gen_cycle = gen->add_subcommand("cycle", "Random cycle");
  auto* gen_outer = gen->add_subcommand("outerplanar", "Random maximal outerplanar graph");
  auto* gen_random = gen->add_subcommand("random-graph", "Random connected graph");
  auto* gen_qtilde = gen->add_subcommand("qtilde", "Zig-zag lower-bound instance for ordered protocols");
  auto* gen_qstar = gen->add_subcommand("qstar", "Lower-bound instance for weighted protocols");
  for (auto* cmd : {gen_cycle, gen_outer, gen_random}) {
    cmd->add_option("--n", o.n, "Number of vertices")->required();
    add_seed(cmd, true);
    add_out(cmd);
  }
  gen_random->add_option("--p", o.edge_prob, "Extra edge probability");
  gen_random->add_flag("--probs", o.with_probs, "Attach random activation probabilities");
  gen_qtilde->add_option("--r", o.r, "Zig-zag depth")->required();
  gen_qtilde->add_option("--k", o.k, "Player count parameter (default 2^r+1)");
  gen_qtilde->add_option("--root-cost", o.root_cost, "2k or 2^k");
  gen_qtilde->add_option("--host", o.host, "path or hypercube");
  gen_qtilde->add_option("--n", o.n, "Hypercube host dimension (default 2^r)");
  gen_qtilde->add_option("--protocol-out", o.protocol_out, "Also write the zig-zag ordered protocol");
  add_out(gen_qtilde);
  gen_qstar->add_option("--k", o.k, "Player count k")->required();
  gen_qstar->add_option("--n", o.n, "Hypercube dimension")->required();
  gen_qstar->add_option("--M", o.copies, "Players per hypercube vertex")->required();
  gen_qstar->add_option("--r", o.r, "Shortcut depth");
  add_out(gen_qstar);

  auto* poa = app.add_subcommand("poa", "Price of anarchy of a protocol on an instance");
  poa->add_option("--instance", o.instance, "Instance JSON")->required();
  poa->add_option("--protocol", o.protocol, "tour | shapley | lex | order:FILE | file:FILE");
  poa->add_flag("--adversarial", o.adversarial, "Maximum over activation sets");
  poa->add_flag("--stochastic", o.stochastic, "Expectation under the instance probabilities");
  poa->add_option("--mc", o.mc, "Monte-Carlo samples (stochastic mode)");
  poa->add_option("--subset-cap", o.subset_cap, "Cap on non-root vertices for enumeration");
  poa->add_option("--terminal-cap", o.terminal_cap, "Cap on exact Steiner terminals");
  poa->add_option("--format", o.format, "csv or json");
  add_seed(poa, false);
  add_out(poa);

  auto* ne = app.add_subcommand("ne", "Compute an equilibrium");
  ne->add_option("--instance", o.instance, "Instance JSON")->required();
  ne->add_option("--protocol", o.protocol, "tour | shapley | lex | order:FILE | file:FILE");
  ne->add_option("--players", o.players, "Comma-separated player vertices (repeats allowed)")->required();
  ne->add_option("--method", o.method, "greedy | brd | enumerate | worst");
  add_seed(ne, false);
  add_out(ne);

  auto* zigzag = app.add_subcommand("zigzag", "Zig-zag path search and verification");
  zigzag->require_subcommand(1);
  auto* zz_find = zigzag->add_subcommand("find", "Search a labeled hypercube for a zig-zag path");
  zz_find->add_option("--n", o.n, "Hypercube dimension")->required();
  zz_find->add_option("--r", o.r, "Zig-zag depth")->required();
  zz_find->add_option("--labeling", o.labeling, "random or a JSON file of labels indexed by vertex");
  zz_find->add_option("--budget", o.budget, "Expansion budget");
  add_seed(zz_find, false);
  add_out(zz_find);
  auto* zz_verify = zigzag->add_subcommand("verify", "Check a certificate");
  zz_verify->add_option("--cert", o.cert, "Certificate JSON")->required();
  add_out(zz_verify);

  auto* stoch = app.add_subcommand("stochastic", "Stochastic ordering protocols");
  stoch->require_subcommand(1);
  auto* st_order = stoch->add_subcommand("order", "Build a universal order");
  st_order->add_option("--instance", o.instance, "Instance JSON with probs")->required();
  st_order->add_option("--mode", o.mode, "rand or derand");
  st_order->add_option("--samples", o.samples, "Monte-Carlo samples for derand (0: exact)");
  st_order->add_flag("--black-box", o.black_box, "Touch the distribution only through sampling");
  add_seed(st_order, true);
  add_out(st_order);
  auto* st_eval = stoch->add_subcommand("eval", "Stochastic PoA of an order");
  st_eval->add_option("--instance", o.instance, "Instance JSON with probs")->required();
  st_eval->add_option("--order", o.order, "Order JSON")->required();
  st_eval->add_flag("--exact", o.exact, "Exact enumeration");
  st_eval->add_option("--mc", o.mc, "Monte-Carlo samples");
  add_seed(st_eval, false);
  add_out(st_eval);

  auto* lemmas = app.add_subcommand("lemmas", "Exhaustive and randomized lemma checks");
  lemmas->require_subcommand(1);
  auto* lm_one = lemmas->add_subcommand("one-connection", "Unique common neighbors in G_m");
  auto* lm_rainbow = lemmas->add_subcommand("rainbow", "Rainbow transversals on random instances");
  auto* lm_noncons = lemmas->add_subcommand("nonconsecutive", "Gap-2 transversals on random partitions");
  for (auto* cmd : {lm_one, lm_rainbow, lm_noncons}) {
    cmd->add_option("--m", o.m, "Size parameter");
    add_out(cmd);
  }
  for (auto* cmd : {lm_rainbow, lm_noncons}) {
    cmd->add_option("--trials", o.trials, "Random instances");
    add_seed(cmd, true);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << Json{{"error", "Validation"}, {"message", e.what()}}.dump() << "\n";
    return kExitValidation;
  }

  try {
    for (auto* cmd : {gen_cycle, gen_outer, gen_random, gen_qtilde, gen_qstar}) {
      if (cmd->parsed()) return gen_command(cmd->get_name(), o, out);
    }
    if (poa->parsed()) {
      require(o.mc == 0 || poa->count("--seed") > 0, "Monte-Carlo evaluation needs --seed");
      return poa_command(o, out);
    }
    if (ne->parsed()) return ne_command(o, out);
    if (zz_find->parsed()) {
      require(o.labeling != "random" || zz_find->count("--seed") > 0, "a random labeling needs --seed");
      return zigzag_find(o, out);
    }
    if (zz_verify->parsed()) return zigzag_verify(o, out);
    if (st_order->parsed()) return stochastic_order(o, out);
    if (st_eval->parsed()) {
      require(o.mc == 0 || st_eval->count("--seed") > 0, "Monte-Carlo evaluation needs --seed");
      return stochastic_eval(o, out);
    }
    for (auto* cmd : {lm_one, lm_rainbow, lm_noncons}) {
      if (cmd->parsed()) return lemmas_command(cmd->get_name(), o, out);
    }
  } catch (const Error& e) {
    err << error_to_json(e).dump() << "\n";
    return e.is_validation() ? kExitValidation : kExitSolver;
  } catch (const std::exception& e) {
    err << Json{{"error", "Internal"}, {"message", e.what()}}.dump() << "\n";
    return kExitSolver;
  }
  return kExitValidation;
}

}  // namespace costshare::cli
