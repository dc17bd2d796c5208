#include "qgossip/config.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <sstream>

namespace qgossip {

std::string_view to_string(TopologyKind k) {
  switch (k) {
    case TopologyKind::complete: return "complete";
    case TopologyKind::ring: return "ring";
    case TopologyKind::rgg: return "rgg";
  }
  return "unknown";
}

std::string_view to_string(ValueMode m) { return m == ValueMode::real ? "real" : "quantized"; }

std::string_view to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

std::vector<double> read_init_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("--init", "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  for (char& c : text)
    if (c == ',' || c == ';') c = ' ';
  std::istringstream tokens(text);
  std::vector<double> values;
  std::string token;
  while (tokens >> token) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) throw UsageError("--init", "bad value '" + token + "' in " + path.string());
    values.push_back(v);
  }
  if (values.empty()) throw UsageError("--init", path.string() + " holds no values");
  return values;
}

void validate(const ExperimentConfig& cfg) {
  const auto& t = cfg.topology;
  if (t.n < 2) throw UsageError("--nodes", "need at least 2 nodes, got " + std::to_string(t.n));
  if (t.kind == TopologyKind::ring && t.n < 3)
    throw UsageError("--nodes", "ring needs at least 3 nodes, got " + std::to_string(t.n));
  if (!(t.box_side > 0.0)) throw UsageError("--box", "must be positive");
  if (!(t.radius > 0.0)) throw UsageError("--radius", "must be positive");
  if (t.max_attempts < 1) throw UsageError("--max-attempts", "must be >= 1");
  if (cfg.bits < 1 || cfg.bits > Quantizer::max_bits)
    throw UsageError("--bits", "must lie in [1, " + std::to_string(Quantizer::max_bits) + "]");
  if (!(cfg.range_max > cfg.range_min)) throw UsageError("--range-max", "must exceed --range-min");
  if (cfg.tolerance && !(*cfg.tolerance > 0.0)) throw UsageError("--tol", "must be positive");
  if (cfg.tolerance && cfg.mode == ValueMode::quantized)
    throw UsageError("--tol", "only applies to --mode real");
  if (cfg.max_iterations < 1) throw UsageError("--max-iters", "must be >= 1");
  if (cfg.trials < 1) throw UsageError("--trials", "must be >= 1");
  if (cfg.record_every < 1) throw UsageError("--record-every", "must be >= 1");
  if (cfg.threads < 1) throw UsageError("--threads", "must be >= 1");
  if (cfg.init_values) {
    if (cfg.init_values->size() != t.n)
      throw UsageError("--init", "has " + std::to_string(cfg.init_values->size()) + " values for " +
                                     std::to_string(t.n) + " nodes");
    if (cfg.mode == ValueMode::quantized)
      for (double v : *cfg.init_values)
        if (!(v >= cfg.range_min && v <= cfg.range_max))
          throw UsageError("--init", "value " + format_double(v) + " lies outside the quantizer range");
  }
  for (std::size_t n : cfg.node_counts) {
    if (n < 2 || (t.kind == TopologyKind::ring && n < 3))
      throw UsageError("--node-counts", "entry " + std::to_string(n) + " too small for the topology");
  }
  if (!cfg.node_counts.empty() && cfg.init_values)
    throw UsageError("--init", "explicit values cannot be combined with --node-counts");
}

ExperimentConfig parse_config(std::span<const std::string> args, const std::optional<std::filesystem::path>& file) {
  ExperimentConfig cfg;
  std::string topology = "complete";
  std::string mode = "quantized";
  std::string init = "uniform";
  std::string format = "csv";
  std::string out;
  double tol = 0.0;

  CLI::App app{"Quantized pairwise gossip simulator", "qgossip"};
  app.set_config("--config", file ? file->string() : std::string{}, "flat key = value config file", file.has_value());
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.allow_extras(false);

  app.add_option("--topology", topology, "complete | ring | rgg")->capture_default_str();
  app.add_option("--nodes", cfg.topology.n, "vertex count")->capture_default_str();
  app.add_option("--box", cfg.topology.box_side, "rgg box side (m)")->capture_default_str();
  app.add_option("--radius", cfg.topology.radius, "rgg connection radius (m)")->capture_default_str();
  app.add_option("--max-attempts", cfg.topology.max_attempts, "rgg resampling cap")->capture_default_str();
  app.add_option("--bits", cfg.bits, "quantizer bit depth")->capture_default_str();
  app.add_option("--range-min", cfg.range_min, "quantizer range minimum")->capture_default_str();
  app.add_option("--range-max", cfg.range_max, "quantizer range maximum")->capture_default_str();
  app.add_option("--mode", mode, "real | quantized")->capture_default_str();
  app.add_option("--tol", tol, "real-mode consensus tolerance (default: quantizer step)");
  app.add_flag("--swap,!--no-swap", cfg.swap_enabled, "swap values on adjacent quantization levels");
  app.add_option("--init", init, "uniform | file:<path>")->capture_default_str();
  app.add_option("--seed", cfg.seed, "base random seed")->capture_default_str();
  app.add_option("--max-iters", cfg.max_iterations, "iteration cap")->capture_default_str();
  app.add_option("--trials", cfg.trials, "trial count")->capture_default_str();
  app.add_option("--record-every", cfg.record_every, "metrics recording stride")->capture_default_str();
  app.add_flag("--full-state", cfg.full_state, "also record node values");
  app.add_flag("--run-to-cap", cfg.run_to_cap, "keep gossiping after consensus until --max-iters");
  app.add_option("--out", out, "output directory");
  app.add_option("--format", format, "csv | json")->capture_default_str();
  app.add_option("--node-counts", cfg.node_counts, "sweep node counts, comma separated")->delimiter(',');
  app.add_option("--threads", cfg.threads, "worker threads per batch")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError("", e.what());
  }

  auto given = [&](const char* name) { return app.count(name) > 0; };

  if (topology == "complete") cfg.topology.kind = TopologyKind::complete;
  else if (topology == "ring") cfg.topology.kind = TopologyKind::ring;
  else if (topology == "rgg") cfg.topology.kind = TopologyKind::rgg;
  else throw UsageError("--topology", "unknown topology '" + topology + "'");

  if (cfg.topology.kind != TopologyKind::rgg)
    for (const char* key : {"--box", "--radius", "--max-attempts"})
      if (given(key)) throw UsageError(key, "only applies to --topology rgg");

  if (mode == "real") cfg.mode = ValueMode::real;
  else if (mode == "quantized") cfg.mode = ValueMode::quantized;
  else throw UsageError("--mode", "unknown mode '" + mode + "'");

  if (given("--tol")) cfg.tolerance = tol;

  if (format == "csv") cfg.format = OutputFormat::csv;
  else if (format == "json") cfg.format = OutputFormat::json;
  else throw UsageError("--format", "unknown format '" + format + "'");

  cfg.init_spec = init;
  if (init.rfind("file:", 0) == 0) cfg.init_values = read_init_file(init.substr(5));
  else if (init != "uniform") throw UsageError("--init", "expected 'uniform' or 'file:<path>'");

  cfg.out_dir = out;
  validate(cfg);
  return cfg;
}

Json to_json(const ExperimentConfig& cfg) {
  Json topo{{"kind", to_string(cfg.topology.kind)}, {"n", cfg.topology.n}};
  if (cfg.topology.kind == TopologyKind::rgg) {
    topo["box_side"] = cfg.topology.box_side;
    topo["radius"] = cfg.topology.radius;
    topo["max_attempts"] = cfg.topology.max_attempts;
  }
  Json j;
  j["topology"] = std::move(topo);
  j["mode"] = to_string(cfg.mode);
  j["bits"] = cfg.bits;
  j["range_min"] = cfg.range_min;
  j["range_max"] = cfg.range_max;
  j["tolerance"] = cfg.tolerance ? Json(*cfg.tolerance) : Json(nullptr);
  j["swap"] = cfg.swap_enabled;
  j["init"] = cfg.init_spec;
  j["init_values"] = cfg.init_values ? Json(*cfg.init_values) : Json(nullptr);
  j["seed"] = cfg.seed;
  j["max_iterations"] = cfg.max_iterations;
  j["trials"] = cfg.trials;
  j["record_every"] = cfg.record_every;
  j["full_state"] = cfg.full_state;
  j["run_to_cap"] = cfg.run_to_cap;
  j["format"] = to_string(cfg.format);
  if (!cfg.node_counts.empty()) j["node_counts"] = cfg.node_counts;
  return j;
}

}  // namespace qgossip
