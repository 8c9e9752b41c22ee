// mlsabre: command-line front end for multilevel layout synthesis.
//
//   mlsabre compile --device eagle127 in.qasm
//   mlsabre route --trials 2500 --device eagle127 in.qasm
//   mlsabre bench queko --device grid:7x15 --depths 10,20 --per-depth 10
//
// Exit codes: 0 success, 1 verification failure, 2 usage or I/O error,
// 3 infeasible instance.

#include <openssl/evp.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mlsabre/mlsabre.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerify = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;

/// Usage and I/O problems, reported with exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct VerifyFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + p.string() + "'");
  out << text;
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::ostringstream os;
  for (unsigned i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return os.str();
}

struct Device {
  mlsabre::CouplingGraph graph;
  std::string text;  // canonical serialization, hashed into records
};

/// Preset name, device file, or a file relative to MLSABRE_DEVICE_DIR.
Device load_device(const std::string& spec, std::vector<std::string>& warnings) {
  Device d;
  if (mlsabre::preset_device(spec, d.graph)) {
    d.text = mlsabre::serialize_device(d.graph);
    return d;
  }
  fs::path p(spec);
  if (!fs::exists(p)) {
    if (const char* dir = std::getenv("MLSABRE_DEVICE_DIR"); dir && p.is_relative()) {
      const fs::path alt = fs::path(dir) / p;
      if (fs::exists(alt)) p = alt;
    }
  }
  if (!fs::exists(p)) throw UsageError("unknown device '" + spec + "'");
  d.graph = mlsabre::parse_device(read_file(p), &warnings);
  d.text = mlsabre::serialize_device(d.graph);
  return d;
}

mlsabre::SwapModel parse_swap_model(const std::string& s) {
  if (s == "unit") return mlsabre::SwapModel::Unit;
  if (s == "cx3") return mlsabre::SwapModel::Cx3;
  throw UsageError("swap model must be unit or cx3");
}

std::vector<int> parse_int_list(const std::string& s, const char* what) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw UsageError(std::string("bad ") + what + " list '" + s + "'");
    }
  }
  if (out.empty()) throw UsageError(std::string("empty ") + what + " list");
  return out;
}

json mapping_json(const mlsabre::Mapping& m) { return json(m.forward()); }

/// Swaps keyed by the original gate scheduled just before them (-1 first).
json inserted_swaps_json(const mlsabre::CompiledCircuit& cc) {
  json out = json::array();
  int last = -1;
  for (const auto& e : cc.schedule) {
    if (e.is_swap()) {
      out.push_back({{"after_gate", last}, {"edge", {e.edge.u, e.edge.v}}});
    } else {
      last = e.gate;
    }
  }
  return out;
}

/// Rebuilds the schedule stored by inserted_swaps_json and a gate order.
std::vector<mlsabre::ScheduleEntry> schedule_from_json(const json& rec) {
  std::multimap<int, mlsabre::Edge> after;
  for (const auto& s : rec.at("inserted_swaps")) {
    after.emplace(s.at("after_gate").get<int>(), mlsabre::Edge{s.at("edge").at(0).get<int>(), s.at("edge").at(1).get<int>()});
  }
  std::vector<mlsabre::ScheduleEntry> out;
  auto flush = [&](int gate) {
    auto [lo, hi] = after.equal_range(gate);
    for (auto it = lo; it != hi; ++it) out.push_back({-1, it->second});
  };
  flush(-1);
  for (const auto& g : rec.at("gate_order")) {
    out.push_back({g.get<int>(), {}});
    flush(g.get<int>());
  }
  return out;
}

struct CommonOptions {
  std::string device = "eagle127";
  std::string input;
  std::string output;
  std::string record;
  std::string swap_model = "unit";
  std::uint64_t seed = 0;
  int jobs = 1;
  bool reproducible = false;
};

struct MlOptions {
  int cycles = 10;
  int coarsest_trials = 500;
  int interpolations = 100;
  int random_trials = 1;
};

struct RouterOptions {
  int extended_set = 20;
  double extended_weight = 0.5;
  double decay = 0.001;
  int decay_reset = 5;
};

void add_common(CLI::App* app, CommonOptions& o, bool with_input = true) {
  app->add_option("--device", o.device, "Preset (eagle127, willow105, grid:RxC, heavyhex:RxC) or device file");
  if (with_input) app->add_option("input", o.input, "OpenQASM 2.0 input")->required();
  app->add_option("--seed", o.seed, "Master seed");
  app->add_option("--jobs", o.jobs, "Worker threads for trials")->check(CLI::PositiveNumber);
  app->add_option("--swap-model", o.swap_model, "Depth accounting for swaps: unit or cx3");
  app->add_flag("--reproducible", o.reproducible, "Report runtime_ms as 0 so records are byte-stable");
}

void add_router(CLI::App* app, RouterOptions& r) {
  app->add_option("--extended-set", r.extended_set, "Lookahead gate count");
  app->add_option("--extended-weight", r.extended_weight, "Lookahead weight in [0,1]");
  app->add_option("--decay", r.decay, "Decay increment per swap");
  app->add_option("--decay-reset", r.decay_reset, "Swaps between decay resets");
}

void add_ml(CLI::App* app, MlOptions& m) {
  app->add_option("--cycles", m.cycles, "Multilevel V-cycles");
  app->add_option("--coarsest-trials", m.coarsest_trials, "Random trials at the coarsest level");
  app->add_option("--interpolations", m.interpolations, "Optimal interpolations passed to refinement");
  app->add_option("--random-trials", m.random_trials, "Random trials per refinement level");
}

mlsabre::RouterConfig router_config(const RouterOptions& r, std::uint64_t seed) {
  mlsabre::RouterConfig cfg;
  cfg.extended_set_size = r.extended_set;
  cfg.extended_weight = r.extended_weight;
  cfg.decay_increment = r.decay;
  cfg.decay_reset_interval = r.decay_reset;
  cfg.seed = seed;
  cfg.validate();
  return cfg;
}

mlsabre::MlConfig ml_config(const MlOptions& m, const RouterOptions& r, const CommonOptions& o) {
  mlsabre::MlConfig cfg;
  cfg.cycles = m.cycles;
  cfg.coarsest_trials = m.coarsest_trials;
  cfg.interpolations = m.interpolations;
  cfg.random_trials_per_level = m.random_trials;
  cfg.seed = o.seed;
  cfg.jobs = o.jobs;
  cfg.router = router_config(r, o.seed);
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

json router_json(const mlsabre::RouterConfig& r) {
  return {{"extended_set_size", r.extended_set_size},
          {"extended_weight", r.extended_weight},
          {"decay_increment", r.decay_increment},
          {"decay_reset_interval", r.decay_reset_interval}};
}

struct Outcome {
  mlsabre::CompiledCircuit compiled;
  std::vector<mlsabre::CycleTrace> trace;
  std::vector<std::string> warnings;
  long long runtime_ms = 0;
};

json trace_json(const std::vector<mlsabre::CycleTrace>& trace) {
  json out = json::array();
  for (const auto& t : trace) {
    out.push_back({{"cycle", t.cycle},
                   {"swaps", t.swaps},
                   {"depth", t.depth},
                   {"best_swaps", t.best_swaps},
                   {"restarted", t.restarted}});
  }
  return out;
}

json run_record(const json& config, const std::string& circuit_sha, const std::string& device_sha, const Outcome& o,
                std::uint64_t seed, bool reproducible) {
  json rec;
  rec["config"] = config;
  rec["input_sha"] = {{"circuit", circuit_sha}, {"device", device_sha}};
  rec["swaps"] = o.compiled.swap_count;
  rec["depth_unit"] = o.compiled.depth_unit;
  rec["depth_cx3"] = o.compiled.depth_cx3;
  rec["initial_mapping"] = mapping_json(o.compiled.initial_mapping);
  rec["final_mapping"] = mapping_json(o.compiled.final_mapping);
  rec["gate_order"] = o.compiled.gate_order();
  rec["inserted_swaps"] = inserted_swaps_json(o.compiled);
  rec["trace"] = trace_json(o.trace);
  rec["warnings"] = o.warnings;
  rec["runtime_ms"] = reproducible ? 0 : o.runtime_ms;
  rec["seed"] = seed;
  return rec;
}

template <typename F>
Outcome timed(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o = f();
  o.runtime_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  return o;
}

void check_valid(const mlsabre::CompiledCircuit& cc, const mlsabre::Circuit& c, const mlsabre::CouplingGraph& g) {
  const auto rep = mlsabre::verify(cc, c, g);
  if (!rep.valid) {
    throw VerifyFailure("internal error: output failed verification (" + rep.violations.front().reason + ")");
  }
}

void emit(const CommonOptions& o, const json& rec, const mlsabre::CompiledCircuit& cc, const mlsabre::Circuit& c) {
  const std::string text = rec.dump(2) + "\n";
  if (!o.output.empty()) write_file(o.output, mlsabre::compiled_qasm(cc, c, parse_swap_model(o.swap_model)));
  if (o.record.empty()) {
    std::cout << text;
  } else {
    write_file(o.record, text);
  }
}

struct Input {
  mlsabre::Circuit circuit;
  std::string text;
  Device device;
  std::vector<std::string> warnings;
};

Input load_input(const CommonOptions& o) {
  Input in;
  in.text = read_file(o.input);
  in.device = load_device(o.device, in.warnings);
  try {
    in.circuit = mlsabre::parse_qasm(in.text);
  } catch (const mlsabre::ParseError& e) {
    throw mlsabre::ParseError(e.line(), e.column(), o.input + ": " + e.detail());
  }
  parse_swap_model(o.swap_model);
  return in;
}

int cmd_compile(const CommonOptions& o, const MlOptions& m, const RouterOptions& r) {
  const Input in = load_input(o);
  const auto cfg = ml_config(m, r, o);
  Outcome out = timed([&] {
    auto res = mlsabre::ml_sabre(in.circuit, in.device.graph, cfg);
    return Outcome{std::move(res.compiled), std::move(res.trace), std::move(res.warnings), 0};
  });
  out.warnings.insert(out.warnings.begin(), in.warnings.begin(), in.warnings.end());
  check_valid(out.compiled, in.circuit, in.device.graph);
  const json config = {{"tool", "ml-sabre"},
                       {"device", o.device},
                       {"cycles", cfg.cycles},
                       {"coarsest_trials", cfg.coarsest_trials},
                       {"interpolations", cfg.interpolations},
                       {"random_trials_per_level", cfg.random_trials_per_level},
                       {"router", router_json(cfg.router)},
                       {"swap_model", o.swap_model},
                       {"jobs", o.jobs}};
  emit(o, run_record(config, sha256_hex(in.text), sha256_hex(in.device.text), out, o.seed, o.reproducible),
       out.compiled, in.circuit);
  return kExitOk;
}

int cmd_route(const CommonOptions& o, int trials, const RouterOptions& r) {
  if (trials < 1) throw UsageError("--trials must be at least 1");
  const Input in = load_input(o);
  const auto cfg = router_config(r, o.seed);
  Outcome out = timed([&] {
    auto res = mlsabre::route_best_of(in.circuit, in.device.graph, {}, trials, cfg, o.jobs);
    return Outcome{std::move(res.compiled), {}, {}, 0};
  });
  out.warnings = in.warnings;
  out.trace.push_back({0, out.compiled.swap_count, out.compiled.depth_unit, out.compiled.swap_count, false});
  check_valid(out.compiled, in.circuit, in.device.graph);
  const json config = {{"tool", "sabre"},
                       {"device", o.device},
                       {"trials", trials},
                       {"router", router_json(cfg)},
                       {"swap_model", o.swap_model},
                       {"jobs", o.jobs}};
  emit(o, run_record(config, sha256_hex(in.text), sha256_hex(in.device.text), out, o.seed, o.reproducible),
       out.compiled, in.circuit);
  return kExitOk;
}

const char* kind_name(mlsabre::StructureClass::Kind k) {
  switch (k) {
    case mlsabre::StructureClass::Kind::Line:
      return "line";
    case mlsabre::StructureClass::Kind::StarLike:
      return "star";
    case mlsabre::StructureClass::Kind::General:
      break;
  }
  return "general";
}

int cmd_embed(const CommonOptions& o) {
  Input in = load_input(o);
  const auto cls = mlsabre::classify_interaction_graph(mlsabre::interaction_graph(in.circuit));
  const auto f = mlsabre::initial_embedding(in.circuit, in.device.graph, &in.warnings);
  json rec = {{"structure", kind_name(cls.kind)},
              {"center", cls.center},
              {"mapping", mapping_json(f)},
              {"embeddable", mlsabre::is_embeddable(in.circuit, in.device.graph, f)},
              {"warnings", in.warnings}};
  const std::string text = rec.dump(2) + "\n";
  if (o.record.empty()) {
    std::cout << text;
  } else {
    write_file(o.record, text);
  }
  return kExitOk;
}

int cmd_oracle(const CommonOptions& o, int max_physical, int max_gates) {
  const Input in = load_input(o);
  int opt = 0;
  try {
    opt = mlsabre::oracle_optimal_swaps(in.circuit, in.device.graph, {max_physical, max_gates});
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  json rec = {{"optimal_swaps", opt}, {"input_sha", sha256_hex(in.text)}};
  std::cout << rec.dump(2) << "\n";
  return kExitOk;
}

int cmd_verify(const CommonOptions& o, const std::string& record_path) {
  const Input in = load_input(o);
  json rec;
  try {
    rec = json::parse(read_file(record_path));
    mlsabre::CompiledCircuit cc;
    const int np = in.device.graph.num_physical();
    cc.initial_mapping = mlsabre::Mapping(rec.at("initial_mapping").get<std::vector<int>>(), np);
    cc.final_mapping = mlsabre::Mapping(rec.at("final_mapping").get<std::vector<int>>(), np);
    cc.schedule = schedule_from_json(rec);
    const auto rep = mlsabre::verify(cc, in.circuit, in.device.graph);
    json violations = json::array();
    for (const auto& v : rep.violations) violations.push_back({{"gate", v.gate}, {"reason", v.reason}});
    const bool metrics_match = rep.swap_count == rec.at("swaps").get<int>() &&
                               rep.depth_unit == rec.at("depth_unit").get<int>() &&
                               rep.depth_cx3 == rec.at("depth_cx3").get<int>();
    json out = {{"valid", rep.valid},
                {"metrics_match", metrics_match},
                {"swaps", rep.swap_count},
                {"depth_unit", rep.depth_unit},
                {"depth_cx3", rep.depth_cx3},
                {"violations", violations}};
    std::cout << out.dump(2) << "\n";
    return rep.valid && metrics_match ? kExitOk : kExitVerify;
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed record: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("malformed record: ") + e.what());
  }
}

json witness_json(const mlsabre::KnownOptBenchmark& b) {
  json w;
  w["initial_mapping"] = mapping_json(b.witness.initial_mapping);
  w["final_mapping"] = mapping_json(b.witness.final_mapping);
  w["gate_order"] = b.witness.gate_order();
  w["inserted_swaps"] = inserted_swaps_json(b.witness);
  w["swaps"] = b.witness.swap_count;
  w["depth_unit"] = b.witness.depth_unit;
  w["depth_cx3"] = b.witness.depth_cx3;
  return w;
}

struct GenOptions {
  std::string family;
  std::string device = "grid:7x15";
  int value = 10;
  double density = 0.5;
  int max_gates = 4000;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  std::string name;
};

mlsabre::KnownOptBenchmark generate(const std::string& family, const mlsabre::CouplingGraph& g, int value,
                                    double density, int max_gates, std::uint64_t seed) {
  try {
    if (family == "queko") return mlsabre::gen_queko(g, value, density, seed);
    if (family == "qubikos") return mlsabre::gen_qubikos(g, value, max_gates, seed);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  throw UsageError("family must be queko or qubikos");
}

void write_benchmark(const fs::path& dir, const std::string& stem, const std::string& device_spec,
                     const mlsabre::KnownOptBenchmark& b) {
  write_file(dir / (stem + ".qasm"), mlsabre::serialize_qasm(b.circuit));
  write_file(dir / (stem + ".device"), mlsabre::serialize_device(b.device));
  json side = {{"metric", b.metric == mlsabre::Metric::Depth ? "depth" : "swaps"},
               {"known_value", b.known_value},
               {"device", device_spec},
               {"witness", witness_json(b)}};
  if (b.chain_qubit >= 0) side["chain_qubit"] = b.chain_qubit;
  write_file(dir / (stem + ".json"), side.dump(2) + "\n");
}

int cmd_gen(const GenOptions& o) {
  std::vector<std::string> warnings;
  const Device d = load_device(o.device, warnings);
  const auto b = generate(o.family, d.graph, o.value, o.density, o.max_gates, o.seed);
  const std::string stem = o.name.empty() ? o.family + "_" + std::to_string(o.value) + "_s" + std::to_string(o.seed) : o.name;
  write_benchmark(o.out_dir, stem, o.device, b);
  std::cout << (fs::path(o.out_dir) / stem).string() << "\n";
  return kExitOk;
}

struct BenchOptions {
  std::string family;
  std::string values;
  int per_value = 10;
  std::string tool = "both";
  int sabre_trials = 2500;
  double density = 0.5;
  int max_gates = 4000;
  std::string out_dir = "bench_out";
};

std::string fixed(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << v;
  return os.str();
}

int cmd_bench(const BenchOptions& b, const CommonOptions& o, const MlOptions& m, const RouterOptions& r) {
  if (b.family != "queko" && b.family != "qubikos") throw UsageError("family must be queko or qubikos");
  if (b.tool != "ml" && b.tool != "sabre" && b.tool != "both") throw UsageError("--tool must be ml, sabre or both");
  if (b.per_value < 1 || b.sabre_trials < 1) throw UsageError("counts must be positive");
  std::vector<std::string> warnings;
  const Device d = load_device(o.device, warnings);
  const auto values = parse_int_list(b.values, b.family == "queko" ? "depth" : "swap");
  const auto ml_cfg = ml_config(m, r, o);
  const auto rt_cfg = router_config(r, o.seed);
  std::vector<std::string> tools;
  if (b.tool != "sabre") tools.push_back("ml-sabre");
  if (b.tool != "ml") tools.push_back("sabre");

  const fs::path dir(b.out_dir);
  json rows = json::array();
  std::ostringstream csv;
  csv << "family,value,tool,instances,mean_ratio,mean_metric\n";
  for (int value : values) {
    std::map<std::string, std::vector<mlsabre::GapRatio>> ratios;
    std::map<std::string, double> metric_sum;
    for (int i = 0; i < b.per_value; ++i) {
      const std::uint64_t inst_seed = mlsabre::mix_seed(o.seed, {static_cast<std::uint64_t>(value), static_cast<std::uint64_t>(i)});
      const auto bm = generate(b.family, d.graph, value, b.density, b.max_gates, inst_seed);
      const std::string stem = b.family + "_" + std::to_string(value) + "_" + std::to_string(i);
      write_benchmark(dir / "instances", stem, o.device, bm);
      const std::string circuit_text = mlsabre::serialize_qasm(bm.circuit);
      for (const auto& tool : tools) {
        Outcome out = timed([&] {
          if (tool == "ml-sabre") {
            auto res = mlsabre::ml_sabre(bm.circuit, bm.device, ml_cfg);
            return Outcome{std::move(res.compiled), std::move(res.trace), std::move(res.warnings), 0};
          }
          auto res = mlsabre::route_best_of(bm.circuit, bm.device, {}, b.sabre_trials, rt_cfg, o.jobs);
          return Outcome{std::move(res.compiled), {}, {}, 0};
        });
        check_valid(out.compiled, bm.circuit, bm.device);
        const int metric = bm.metric == mlsabre::Metric::Depth ? out.compiled.depth_unit : out.compiled.swap_count;
        ratios[tool].push_back(mlsabre::gap_ratio(metric, bm.known_value));
        metric_sum[tool] += metric;
        json config = {{"tool", tool}, {"device", o.device}, {"family", b.family}, {"value", value}, {"instance", i}};
        if (tool == "ml-sabre") {
          config["cycles"] = ml_cfg.cycles;
          config["coarsest_trials"] = ml_cfg.coarsest_trials;
          config["interpolations"] = ml_cfg.interpolations;
          config["random_trials_per_level"] = ml_cfg.random_trials_per_level;
        } else {
          config["trials"] = b.sabre_trials;
        }
        json rec = run_record(config, sha256_hex(circuit_text), sha256_hex(d.text), out, inst_seed, o.reproducible);
        rec["known_value"] = bm.known_value;
        rec["ratio"] = mlsabre::gap_ratio(metric, bm.known_value).str();
        write_file(dir / "records" / (stem + "_" + tool + ".json"), rec.dump(2) + "\n");
      }
    }
    for (const auto& tool : tools) {
      const double mean = mlsabre::mean_ratio(ratios[tool]);
      const double mean_metric = metric_sum[tool] / b.per_value;
      rows.push_back({{"family", b.family},
                      {"value", value},
                      {"tool", tool},
                      {"instances", b.per_value},
                      {"mean_ratio", fixed(mean)},
                      {"mean_metric", fixed(mean_metric)}});
      csv << b.family << ',' << value << ',' << tool << ',' << b.per_value << ',' << fixed(mean) << ','
          << fixed(mean_metric) << '\n';
    }
  }
  const json summary = {{"device", o.device},
                        {"device_sha", sha256_hex(d.text)},
                        {"seed", o.seed},
                        {"metric", b.family == "queko" ? "depth" : "swaps"},
                        {"rows", rows}};
  write_file(dir / "summary.json", summary.dump(2) + "\n");
  write_file(dir / "summary.csv", csv.str());
  std::cout << csv.str();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multilevel qubit layout synthesis"};
  app.require_subcommand(1);

  CommonOptions compile_o, route_o, embed_o, oracle_o, verify_o, bench_o;
  MlOptions compile_m, bench_m;
  bench_m.random_trials = 100;
  RouterOptions compile_r, route_r, bench_r;
  int route_trials = 2500;
  int oracle_phys = 7;
  int oracle_gates = 15;
  std::string verify_record;
  GenOptions gen_o;
  BenchOptions bench_b;

  auto* compile = app.add_subcommand("compile", "Multilevel compile of a QASM circuit");
  add_common(compile, compile_o);
  add_ml(compile, compile_m);
  add_router(compile, compile_r);
  compile->add_option("-o,--output", compile_o.output, "Compiled QASM output");
  compile->add_option("--record", compile_o.record, "RunRecord JSON (default: stdout)");

  auto* route = app.add_subcommand("route", "Baseline best-of-N routing");
  add_common(route, route_o);
  add_router(route, route_r);
  route->add_option("--trials", route_trials, "Random initial mappings");
  route->add_option("-o,--output", route_o.output, "Compiled QASM output");
  route->add_option("--record", route_o.record, "RunRecord JSON (default: stdout)");

  auto* embed = app.add_subcommand("embed", "Classify the circuit and print the initial embedding");
  add_common(embed, embed_o);
  embed->add_option("--record", embed_o.record, "JSON output (default: stdout)");

  auto* oracle = app.add_subcommand("oracle", "Exact minimum swap count for tiny instances");
  add_common(oracle, oracle_o);
  oracle->add_option("--max-physical", oracle_phys, "Physical qubit limit (at most 8)");
  oracle->add_option("--max-gates", oracle_gates, "Two-qubit gate limit (at most 31)");

  auto* verify = app.add_subcommand("verify", "Replay a RunRecord against its circuit and device");
  add_common(verify, verify_o);
  verify->add_option("--record", verify_record, "RunRecord JSON to check")->required();

  auto* gen = app.add_subcommand("gen", "Write one known-optimal benchmark (qasm, device, json)");
  gen->add_option("family", gen_o.family, "queko or qubikos")->required();
  gen->add_option("--device", gen_o.device, "Device preset or file");
  gen->add_option("--value", gen_o.value, "Optimal depth (queko) or witness swaps (qubikos)");
  gen->add_option("--density", gen_o.density, "Two-qubit gate density per layer (queko)");
  gen->add_option("--max-gates", gen_o.max_gates, "Two-qubit gate budget (qubikos)");
  gen->add_option("--seed", gen_o.seed, "Generator seed");
  gen->add_option("--out-dir", gen_o.out_dir, "Output directory");
  gen->add_option("--name", gen_o.name, "File stem");

  auto* bench = app.add_subcommand("bench", "Generate a batch and report mean optimality gaps");
  bench->add_option("family", bench_b.family, "queko or qubikos")->required();
  add_common(bench, bench_o, false);
  add_ml(bench, bench_m);
  add_router(bench, bench_r);
  bench->add_option("--depths,--swaps", bench_b.values, "Comma-separated optimal values")->required();
  bench->add_option("--per-depth,--per-value", bench_b.per_value, "Instances per value");
  bench->add_option("--tool", bench_b.tool, "ml, sabre or both");
  bench->add_option("--trials", bench_b.sabre_trials, "Baseline random trials");
  bench->add_option("--density", bench_b.density, "Queko layer density");
  bench->add_option("--max-gates", bench_b.max_gates, "Qubikos two-qubit gate budget");
  bench->add_option("--out-dir", bench_b.out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*compile) return cmd_compile(compile_o, compile_m, compile_r);
    if (*route) return cmd_route(route_o, route_trials, route_r);
    if (*embed) return cmd_embed(embed_o);
    if (*oracle) return cmd_oracle(oracle_o, oracle_phys, oracle_gates);
    if (*verify) return cmd_verify(verify_o, verify_record);
    if (*gen) return cmd_gen(gen_o);
    if (*bench) return cmd_bench(bench_b, bench_o, bench_m, bench_r);
  } catch (const VerifyFailure& e) {
    std::cerr << "mlsabre: " << e.what() << "\n";
    return kExitVerify;
  } catch (const mlsabre::InfeasibleError& e) {
    std::cerr << "mlsabre: infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const mlsabre::ParseError& e) {
    std::cerr << "mlsabre: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "mlsabre: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "mlsabre: " << e.what() << "\n";
    return kExitUsage;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "mlsabre: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
