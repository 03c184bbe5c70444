#include "nagmcmc/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace nagmcmc {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& out) {
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end && *end == '\0' && !s.empty() && std::isfinite(out);
}

bool parse_u64(const std::string& s, std::uint64_t& out) {
  char* end = nullptr;
  out = std::strtoull(s.c_str(), &end, 10);
  return end && *end == '\0' && !s.empty();
}

bool parse_int(const std::string& s, int& out) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  out = static_cast<int>(v);
  return end && *end == '\0' && !s.empty();
}

bool parse_bool(const std::string& s, bool& out) {
  if (s == "1" || s == "true" || s == "on") {
    out = true;
    return true;
  }
  if (s == "0" || s == "false" || s == "off") {
    out = false;
    return true;
  }
  return false;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

void collect_sampler_violations(const SamplerParams& p, const std::string& prefix,
                                std::vector<std::string>& out) {
  if (p.num_samplers < 1) out.push_back(prefix + "samplers: P must be >= 1");
  if (p.num_iterations < 1) out.push_back(prefix + "iters: S must be >= 1");
  if (p.gd_per_walk < 1) out.push_back(prefix + "ng: must be >= 1");
  if (!(p.momentum >= 0.0 && p.momentum <= 1.0))
    out.push_back(prefix + "rho: momentum must be in [0, 1]");
  if (!(p.es_eta > 0.0)) out.push_back(prefix + "eta: must be > 0");
}

}  // namespace

KvMap parse_kv_text(const std::string& text) {
  KvMap kv;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

KvMap parse_kv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_kv_text(ss.str());
}

DetectorSpec parse_detector_spec(const std::string& text) {
  DetectorSpec spec;
  std::string name = trim(text);
  std::string args;
  const auto lb = name.find('[');
  if (lb != std::string::npos) {
    if (name.back() != ']')
      throw ConfigError("detector spec: missing ']' in '" + text + "'");
    args = name.substr(lb + 1, name.size() - lb - 2);
    name = trim(name.substr(0, lb));
  }
  spec.algo = algorithm_from_string(name);

  if (args.empty()) return spec;
  for (const std::string& item : split(args, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw ConfigError("detector spec: expected key=value in '" + item + "'");
    const std::string key = trim(item.substr(0, eq));
    const std::string val = trim(item.substr(eq + 1));
    bool ok = true;
    if (key == "nmse") {
      ok = parse_double(val, spec.nmse);
    } else if (spec.algo != Algorithm::nag_mcmc) {
      throw ConfigError("detector spec: key '" + key + "' not valid for " + name);
    } else if (key == "samplers") {
      ok = parse_int(val, spec.params.num_samplers);
    } else if (key == "iters") {
      ok = parse_int(val, spec.params.num_iterations);
    } else if (key == "ng") {
      ok = parse_int(val, spec.params.gd_per_walk);
    } else if (key == "rho") {
      ok = parse_double(val, spec.params.momentum);
    } else if (key == "beta") {
      ok = parse_double(val, spec.params.beta);
    } else if (key == "eta") {
      ok = parse_double(val, spec.params.es_eta);
    } else if (key == "sa") {
      ok = parse_bool(val, spec.params.sample_augmentation);
    } else if (key == "es") {
      ok = parse_bool(val, spec.params.early_stopping);
    } else if (key == "carry") {
      ok = parse_bool(val, spec.params.carry_momentum);
    } else if (key == "temper") {
      ok = parse_bool(val, spec.params.acceptance_temperature);
    } else if (key == "init") {
      if (val == "random")
        spec.params.init = InitMode::random_constellation;
      else if (val == "mmse")
        spec.params.init = InitMode::mmse;
      else
        ok = false;
    } else {
      throw ConfigError("detector spec: unknown key '" + key + "'");
    }
    if (!ok) throw ConfigError("detector spec: bad value for '" + key + "'");
  }
  return spec;
}

std::string detector_spec_to_string(const DetectorSpec& spec) {
  const DetectorSpec defaults;
  std::string args;
  const auto add = [&args](const std::string& kv) {
    if (!args.empty()) args += ",";
    args += kv;
  };
  if (spec.algo == Algorithm::nag_mcmc) {
    const SamplerParams& p = spec.params;
    const SamplerParams d;
    if (p.num_samplers != d.num_samplers)
      add("samplers=" + std::to_string(p.num_samplers));
    if (p.num_iterations != d.num_iterations)
      add("iters=" + std::to_string(p.num_iterations));
    if (p.gd_per_walk != d.gd_per_walk) add("ng=" + std::to_string(p.gd_per_walk));
    if (p.momentum != d.momentum) add("rho=" + fmt_double(p.momentum));
    if (p.beta != d.beta) add("beta=" + fmt_double(p.beta));
    if (p.es_eta != d.es_eta) add("eta=" + fmt_double(p.es_eta));
    if (p.sample_augmentation) add("sa=1");
    if (p.early_stopping) add("es=1");
    if (p.init == InitMode::mmse) add("init=mmse");
    if (!p.carry_momentum) add("carry=0");
    if (p.acceptance_temperature) add("temper=1");
  }
  if (spec.nmse != 0.0) add("nmse=" + fmt_double(spec.nmse));
  std::string out = to_string(spec.algo);
  if (!args.empty()) out += "[" + args + "]";
  return out;
}

void apply_kv(SimConfig& cfg, const KvMap& kv, std::vector<std::string>& errors) {
  for (const auto& [key, val] : kv) {
    bool ok = true;
    if (key == "nrx") {
      std::uint64_t v;
      ok = parse_u64(val, v) && v >= 1;
      if (ok) cfg.n_rx = v;
    } else if (key == "ntx") {
      std::uint64_t v;
      ok = parse_u64(val, v) && v >= 1;
      if (ok) cfg.n_tx = v;
    } else if (key == "mod") {
      ok = parse_int(val, cfg.mod_order);
    } else if (key == "snr") {
      std::vector<double> grid;
      for (const auto& item : split(val, ',')) {
        double v;
        if (!parse_double(trim(item), v)) {
          ok = false;
          break;
        }
        grid.push_back(v);
      }
      if (ok) cfg.snr_grid_db = std::move(grid);
    } else if (key == "detectors") {
      std::vector<DetectorSpec> specs;
      try {
        for (const auto& item : split(val, ';'))
          specs.push_back(parse_detector_spec(trim(item)));
        cfg.detectors = std::move(specs);
      } catch (const ConfigError& e) {
        errors.insert(errors.end(), e.violations().begin(), e.violations().end());
        continue;
      }
    } else if (key == "max_bits") {
      ok = parse_u64(val, cfg.max_bits);
    } else if (key == "min_bits") {
      ok = parse_u64(val, cfg.min_bits);
    } else if (key == "min_errors") {
      ok = parse_u64(val, cfg.min_bit_errors);
    } else if (key == "batch_trials") {
      ok = parse_u64(val, cfg.batch_trials);
    } else if (key == "seed") {
      ok = parse_u64(val, cfg.seed);
    } else if (key == "workers") {
      ok = parse_int(val, cfg.workers);
    } else if (key == "out") {
      cfg.out_dir = val;
    } else if (key == "format") {
      cfg.format = val;
    } else if (key == "smax") {
      ok = parse_int(val, cfg.convergence_smax);
    } else if (key == "gd_trace_iters") {
      ok = parse_int(val, cfg.gd_trace_iters);
    } else if (key == "gd_trace_instances") {
      ok = parse_int(val, cfg.gd_trace_instances);
    } else if (key == "llr_trials") {
      ok = parse_int(val, cfg.llr_trials);
    } else if (key == "trace_out") {
      cfg.trace_path = val;
    } else if (key == "channel_dump") {
      cfg.channel_dump_path = val;
    } else {
      errors.push_back("unknown config key: " + key);
      continue;
    }
    if (!ok) errors.push_back("bad value for '" + key + "': " + val);
  }
}

KvMap config_to_kv(const SimConfig& cfg) {
  KvMap kv;
  kv["nrx"] = std::to_string(cfg.n_rx);
  kv["ntx"] = std::to_string(cfg.n_tx);
  kv["mod"] = std::to_string(cfg.mod_order);
  std::string snr;
  for (std::size_t i = 0; i < cfg.snr_grid_db.size(); ++i) {
    if (i) snr += ",";
    snr += fmt_double(cfg.snr_grid_db[i]);
  }
  kv["snr"] = snr;
  std::string dets;
  for (std::size_t i = 0; i < cfg.detectors.size(); ++i) {
    if (i) dets += ";";
    dets += detector_spec_to_string(cfg.detectors[i]);
  }
  kv["detectors"] = dets;
  kv["max_bits"] = std::to_string(cfg.max_bits);
  kv["min_bits"] = std::to_string(cfg.min_bits);
  kv["min_errors"] = std::to_string(cfg.min_bit_errors);
  kv["batch_trials"] = std::to_string(cfg.batch_trials);
  kv["seed"] = std::to_string(cfg.seed);
  kv["workers"] = std::to_string(cfg.workers);
  kv["out"] = cfg.out_dir;
  kv["format"] = cfg.format;
  kv["smax"] = std::to_string(cfg.convergence_smax);
  kv["gd_trace_iters"] = std::to_string(cfg.gd_trace_iters);
  kv["gd_trace_instances"] = std::to_string(cfg.gd_trace_instances);
  kv["llr_trials"] = std::to_string(cfg.llr_trials);
  if (!cfg.trace_path.empty()) kv["trace_out"] = cfg.trace_path;
  if (!cfg.channel_dump_path.empty()) kv["channel_dump"] = cfg.channel_dump_path;
  return kv;
}

SimConfig config_from_kv(const KvMap& kv) {
  SimConfig cfg;
  std::vector<std::string> errors;
  apply_kv(cfg, kv, errors);
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return cfg;
}

std::vector<std::string> preset_names() {
  return {"table1",   "fig2-gd-trace",   "fig3-ablation",
          "fig5-ber", "fig6-convergence", "fig10-nmse"};
}

std::string preset_subcommand(const std::string& name) {
  if (name == "fig2-gd-trace") return "trace-gd";
  if (name == "fig6-convergence") return "convergence";
  return "ber-sweep";
}

SimConfig preset_config(const std::string& name) {
  SimConfig cfg;
  cfg.n_rx = 8;
  cfg.n_tx = 8;
  cfg.mod_order = 16;

  const auto nag = [](int s, int ng, bool sa, bool es) {
    DetectorSpec d;
    d.algo = Algorithm::nag_mcmc;
    d.params.num_samplers = 16;
    d.params.num_iterations = s;
    d.params.gd_per_walk = ng;
    d.params.sample_augmentation = sa;
    d.params.early_stopping = es;
    return d;
  };

  if (name == "table1") {
    // Average executed iterations at 25 dB for S in {6, 8, 10, 12};
    // fixed budget of 1e5 channel realizations.
    cfg.snr_grid_db = {25.0};
    cfg.detectors = {nag(6, 8, true, true), nag(8, 8, true, true),
                     nag(10, 8, true, true), nag(12, 8, true, true)};
    cfg.min_bit_errors = 0;
    cfg.min_bits = 3'200'000;
    cfg.max_bits = 3'200'000;
  } else if (name == "fig2-gd-trace") {
    cfg.snr_grid_db = {20.0};
    cfg.gd_trace_iters = 30;
    cfg.gd_trace_instances = 1000;
  } else if (name == "fig3-ablation") {
    // One GD per walk vs eight, equal total GD count.
    cfg.snr_grid_db = {16.0, 18.0, 20.0, 22.0, 24.0};
    cfg.detectors = {nag(16, 8, false, false), nag(128, 1, false, false)};
    cfg.max_bits = 10'000'000;
  } else if (name == "fig5-ber") {
    cfg.snr_grid_db = {14.0, 16.0, 18.0, 20.0, 22.0, 24.0, 26.0};
    cfg.detectors = {nag(8, 8, false, false), nag(8, 8, true, false),
                     nag(8, 8, true, true)};
    DetectorSpec mmse;
    mmse.algo = Algorithm::mmse;
    cfg.detectors.push_back(mmse);
    cfg.max_bits = 2'000'000;
  } else if (name == "fig6-convergence") {
    cfg.snr_grid_db = {25.0};
    cfg.convergence_smax = 60;
    cfg.detectors = {nag(60, 8, false, false), nag(60, 8, true, false)};
    cfg.max_bits = 2'000'000;
  } else if (name == "fig10-nmse") {
    cfg.snr_grid_db = {20.0};
    cfg.detectors.clear();
    for (double nmse : {0.0, 0.001, 0.01, 0.05}) {
      DetectorSpec d = nag(8, 8, true, true);
      d.nmse = nmse;
      cfg.detectors.push_back(d);
      DetectorSpec mmse;
      mmse.algo = Algorithm::mmse;
      mmse.nmse = nmse;
      cfg.detectors.push_back(mmse);
    }
    cfg.min_bit_errors = 0;
    cfg.min_bits = 2'000'000;
    cfg.max_bits = 2'000'000;
  } else {
    throw ConfigError("unknown preset: " + name);
  }
  return cfg;
}

void validate_config(const SimConfig& cfg, const std::string& subcommand) {
  std::vector<std::string> bad;
  if (cfg.n_rx < 1) bad.push_back("nrx: must be >= 1");
  if (cfg.n_tx < 1) bad.push_back("ntx: must be >= 1");
  if (cfg.mod_order != 4 && cfg.mod_order != 16 && cfg.mod_order != 64)
    bad.push_back("mod: unsupported QAM order " + std::to_string(cfg.mod_order) +
                  " (supported: 4, 16, 64)");
  if (cfg.snr_grid_db.empty()) bad.push_back("snr: grid must be nonempty");
  for (double v : cfg.snr_grid_db)
    if (!std::isfinite(v)) bad.push_back("snr: entries must be finite");
  if (cfg.detectors.empty()) bad.push_back("detectors: need at least one");
  if (cfg.max_bits == 0) bad.push_back("max_bits: must be positive");
  if (cfg.batch_trials == 0) bad.push_back("batch_trials: must be positive");
  if (cfg.format != "csv" && cfg.format != "json" && cfg.format != "both")
    bad.push_back("format: must be csv, json, or both");

  int bits_per_symbol = 0;
  for (int m = cfg.mod_order; m > 1; m /= 2) ++bits_per_symbol;

  for (std::size_t i = 0; i < cfg.detectors.size(); ++i) {
    const DetectorSpec& d = cfg.detectors[i];
    const std::string prefix = "detector " + std::to_string(i) + " (" +
                               to_string(d.algo) + "): ";
    if (!(d.nmse >= 0.0 && d.nmse < 1.0))
      bad.push_back(prefix + "nmse must be in [0, 1)");
    if (d.algo == Algorithm::nag_mcmc) {
      collect_sampler_violations(d.params, prefix, bad);
      if (cfg.n_tx > cfg.n_rx)
        bad.push_back(prefix + "requires N_t <= N_r (full column rank)");
    }
    if (d.algo == Algorithm::zf && cfg.n_tx > cfg.n_rx)
      bad.push_back(prefix + "requires N_t <= N_r (full column rank)");
    if (d.algo == Algorithm::ml_exhaustive) {
      const double cand = std::pow(static_cast<double>(cfg.mod_order),
                                   static_cast<double>(cfg.n_tx));
      if (cand > static_cast<double>(kMlCandidateCap))
        bad.push_back(prefix + "M^N_t exceeds the 2^24 exhaustive-search cap");
    }
  }

  if (subcommand == "convergence") {
    if (cfg.convergence_smax < 1) bad.push_back("smax: must be >= 1");
    for (const auto& d : cfg.detectors)
      if (d.algo != Algorithm::nag_mcmc)
        bad.push_back("convergence: all detectors must be nag-mcmc");
  } else if (subcommand == "trace-gd") {
    if (cfg.gd_trace_iters < 1) bad.push_back("gd_trace_iters: must be >= 1");
    if (cfg.gd_trace_instances < 1) bad.push_back("gd_trace_instances: must be >= 1");
  } else if (subcommand == "llr-dump") {
    if (cfg.llr_trials < 1) bad.push_back("llr_trials: must be >= 1");
    bool has_nag = false;
    for (const auto& d : cfg.detectors)
      if (d.algo == Algorithm::nag_mcmc) has_nag = true;
    if (!has_nag) bad.push_back("llr-dump: requires a nag-mcmc detector");
  }

  if (!bad.empty()) throw ConfigError(std::move(bad));
}

}  // namespace nagmcmc
