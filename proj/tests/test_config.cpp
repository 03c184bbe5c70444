#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "nagmcmc/config.hpp"
#include "nagmcmc/report_io.hpp"

using namespace nagmcmc;

TEST_CASE("kv text parsing: comments, whitespace, malformed lines") {
  const KvMap kv = parse_kv_text("# comment\n  ntx = 8 \nsnr= 10,12.5 # inline\n\n");
  CHECK(kv.at("ntx") == "8");
  CHECK(kv.at("snr") == "10,12.5");
  CHECK_THROWS_AS(parse_kv_text("just a line\n"), ConfigError);
}

TEST_CASE("detector spec strings round-trip") {
  for (const char* s :
       {"mmse", "zf", "ml", "nag-mcmc",
        "nag-mcmc[samplers=8,iters=12,ng=4,sa=1,es=1]",
        "nag-mcmc[rho=0.5,beta=2,eta=1.2,init=mmse,carry=0,temper=1]",
        "mmse[nmse=0.01]"}) {
    const DetectorSpec spec = parse_detector_spec(s);
    CHECK(detector_spec_to_string(spec) == s);
  }
  CHECK_THROWS_AS(parse_detector_spec("kbest"), UnknownAlgorithm);
  CHECK_THROWS_AS(parse_detector_spec("nag-mcmc[foo=1]"), ConfigError);
  CHECK_THROWS_AS(parse_detector_spec("mmse[iters=8]"), ConfigError);
  CHECK_THROWS_AS(parse_detector_spec("nag-mcmc[iters=x]"), ConfigError);
}

TEST_CASE("config kv round trip") {
  SimConfig cfg = preset_config("fig5-ber");
  cfg.seed = 99;
  cfg.trace_path = "t.csv";
  const KvMap kv = config_to_kv(cfg);
  const SimConfig back = config_from_kv(kv);
  CHECK(config_to_kv(back) == kv);
}

TEST_CASE("unknown keys and bad values are all reported") {
  SimConfig cfg;
  std::vector<std::string> errors;
  apply_kv(cfg,
           {{"ntx", "0"}, {"mod", "banana"}, {"mystery", "1"}, {"snr", "a,b"}},
           errors);
  CHECK(errors.size() == 4);
}

TEST_CASE("validation collects every violation") {
  SimConfig cfg;
  cfg.mod_order = 32;
  cfg.snr_grid_db.clear();
  cfg.n_tx = 9;  // > n_rx with a nag detector
  cfg.format = "xml";
  try {
    validate_config(cfg, "ber-sweep");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.violations().size() >= 4);
  }

  // ml beyond the exhaustive cap
  SimConfig big;
  big.detectors[0].algo = Algorithm::ml_exhaustive;
  big.n_rx = big.n_tx = 8;
  big.mod_order = 16;
  CHECK_THROWS_AS(validate_config(big, "ber-sweep"), ConfigError);
}

TEST_CASE("presets: table1 expands to its documented parameters") {
  const SimConfig cfg = preset_config("table1");
  CHECK(cfg.n_rx == 8);
  CHECK(cfg.n_tx == 8);
  CHECK(cfg.mod_order == 16);
  REQUIRE(cfg.snr_grid_db.size() == 1);
  CHECK(cfg.snr_grid_db[0] == 25.0);
  REQUIRE(cfg.detectors.size() == 4);
  const int expected_s[] = {6, 8, 10, 12};
  for (int i = 0; i < 4; ++i) {
    const auto& d = cfg.detectors[i];
    CHECK(d.algo == Algorithm::nag_mcmc);
    CHECK(d.params.num_samplers == 16);
    CHECK(d.params.gd_per_walk == 8);
    CHECK(d.params.num_iterations == expected_s[i]);
    CHECK(d.params.sample_augmentation);
    CHECK(d.params.early_stopping);
  }
  CHECK_NOTHROW(validate_config(cfg, "ber-sweep"));

  for (const auto& name : preset_names()) {
    const SimConfig p = preset_config(name);
    CHECK_NOTHROW(validate_config(p, preset_subcommand(name)));
  }
  CHECK_THROWS_AS(preset_config("table9"), ConfigError);
}

TEST_CASE("report emission: frozen header, determinism, json round trip") {
  SimReport rep;
  rep.seed = 5;
  rep.build_id = "test";
  SimConfig cfg = preset_config("fig5-ber");
  rep.config_echo = config_to_kv(cfg);
  ReportRow row;
  row.snr_db = 20.0;
  row.detector = "mmse";
  row.ber = 1.234567e-4;
  row.ser = 4e-4;
  row.bits = 1000000;
  row.errors = 123;
  row.mean_sa = 0.0;
  row.mults_runtime = 1680;
  row.mults_closed_form = 1680;
  rep.rows.push_back(row);

  const std::string csv = report_csv(rep);
  CHECK(csv.rfind("snr_db,detector,ber,ser,bits,errors,mean_sa,mults_runtime,"
                  "mults_closed_form\n",
                  0) == 0);
  CHECK(csv.find("20,mmse,0.000123457,0.0004,1000000,123,0,1680,1680\n") !=
        std::string::npos);
  CHECK(report_csv(rep) == csv);

  const std::string json = report_json(rep);
  CHECK(report_json(rep) == json);

  // config echo parses and validates back to the same kv map
  const auto parsed = nlohmann::json::parse(json);
  KvMap echo;
  for (const auto& [k, v] : parsed.at("config").items())
    echo[k] = v.get<std::string>();
  const SimConfig back = config_from_kv(echo);
  CHECK(config_to_kv(back) == rep.config_echo);
  CHECK_NOTHROW(validate_config(back, "ber-sweep"));

  // emit twice: byte-identical files
  const auto dir = std::filesystem::temp_directory_path() / "nagmcmc_cfg_test";
  std::filesystem::remove_all(dir);
  const auto paths1 = emit_report(rep, "both", dir.string());
  std::string first;
  {
    std::ifstream in(paths1[0], std::ios::binary);
    first.assign(std::istreambuf_iterator<char>(in), {});
  }
  emit_report(rep, "both", dir.string());
  std::string second;
  {
    std::ifstream in(paths1[0], std::ios::binary);
    second.assign(std::istreambuf_iterator<char>(in), {});
  }
  CHECK(first == second);
  CHECK(paths1.size() == 2);
  std::filesystem::remove_all(dir);
}

#ifdef NAGMCMC_TOOL_PATH
namespace {
int run_tool(const std::string& args) {
  const std::string cmd = std::string(NAGMCMC_TOOL_PATH) + " " + args +
                          " >/dev/null 2>/dev/null";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}
}  // namespace

TEST_CASE("cli exit codes: 0 ok, 2 validation, 3 runtime") {
  const auto dir = std::filesystem::temp_directory_path() / "nagmcmc_cli_test";
  std::filesystem::remove_all(dir);
  CHECK(run_tool("complexity --out " + (dir / "ok").string()) == 0);
  CHECK(run_tool("ber-sweep --mod 32") == 2);
  CHECK(run_tool("ber-sweep --nonsense-flag 1") == 2);
  CHECK(run_tool("ber-sweep --ntx 9 --nrx 8") == 2);
  CHECK(run_tool("ber-sweep --preset fig2-gd-trace") == 2);
  CHECK(run_tool("ber-sweep --config /nonexistent/path.cfg") == 2);
  // runtime failure: output directory collides with an existing file
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "blocked") << "x";
  CHECK(run_tool("ber-sweep --ntx 2 --nrx 2 --mod 4 --samplers 2 --iters 2 "
                 "--max-bits 400 --min-bits 400 --min-errors 0 --snr 10 --out " +
                 (dir / "blocked").string()) == 3);
  std::filesystem::remove_all(dir);
}
#endif
