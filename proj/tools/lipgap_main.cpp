// lipgap command line: one subcommand per scenario kind, plus run/batch/csv.
#include <CLI11.hpp>

#include <algorithm>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "lipgap/harness.hpp"
#include "lipgap/parallel.hpp"

namespace fs = std::filesystem;
using namespace lipgap;

namespace {

struct KindFlags {
  std::map<std::string, std::string> inputs;  // input name -> path
  std::string k;
  std::string depths;
  std::vector<std::string> params;
  std::string expect_verdict;
  long long seed = 0;
  std::string out;
};

// values that parse as JSON stay JSON, anything else is a string
Json param_value(const std::string& v) {
  try {
    return Json::parse(v);
  } catch (const Json::parse_error&) {
    return Json(v);
  }
}

int emit(const Certificate& cert, const std::string& out) {
  std::string text = certificate_text(cert.doc);
  if (out.empty() || out == "-") std::cout << text;
  else write_atomic(out, text);
  if (cert.exit_code != kExitOk && cert.doc.contains("error"))
    std::cerr << "lipgap: " << cert.doc["error"]["kind"].get<std::string>() << ": "
              << cert.doc["error"]["message"].get<std::string>() << "\n";
  else if (cert.exit_code == kExitFalsified)
    std::cerr << "lipgap: falsified: " << cert.doc.value("falsified", "") << "\n";
  return cert.exit_code;
}

Certificate run_guarded(const std::function<Scenario()>& load) {
  try {
    return run_scenario(load());
  } catch (const Error& e) {
    Certificate c;
    c.doc = Json{{"schema_version", kSchemaVersion}, {"tool", "lipgap"}, {"tool_version", kToolVersion},
                 {"status", "error"}, {"error", {{"kind", error_kind_name(e.kind())}, {"message", e.what()}}}};
    c.exit_code = exit_code_for(e.kind());
    return c;
  }
}

Scenario scenario_from_flags(const std::string& kind, const KindFlags& f) {
  Json doc{{"kind", kind}, {"inputs", Json::object()}, {"params", Json::object()}, {"seed", f.seed}};
  for (const auto& [name, path] : f.inputs)
    if (!path.empty()) doc["inputs"][name] = path;
  if (!f.k.empty()) doc["params"]["K"] = f.k;
  if (!f.depths.empty()) {
    auto comma = f.depths.find(',');
    try {
      if (comma == std::string::npos) {
        doc["params"]["depth"] = std::stoi(f.depths);
      } else {
        doc["params"]["depth_domain"] = std::stoi(f.depths.substr(0, comma));
        doc["params"]["depth_codomain"] = std::stoi(f.depths.substr(comma + 1));
      }
    } catch (const std::logic_error&) {
      fail(ErrorKind::Parse, "--depths expects m or m,m'");
    }
  }
  for (const auto& kv : f.params) {
    auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) fail(ErrorKind::Parse, "--param expects key=value, got '" + kv + "'");
    doc["params"][kv.substr(0, eq)] = param_value(kv.substr(eq + 1));
  }
  if (!f.expect_verdict.empty()) doc["expect"] = Json{{"verdict", f.expect_verdict}};
  return load_scenario(doc, fs::current_path());
}

void add_kind(CLI::App& app, const std::string& kind, const std::string& help,
              const std::vector<std::string>& input_names, std::map<std::string, KindFlags>& flags, int& rc) {
  auto* sub = app.add_subcommand(kind, help);
  KindFlags& f = flags[kind];
  for (const auto& name : input_names) sub->add_option("--" + name, f.inputs[name], name + " file (JSON, or CSV for metric spaces)");
  sub->add_option("--k", f.k, "Lipschitz constant as p/q");
  sub->add_option("--depths", f.depths, "depth m, or domain and codomain depths m,m'");
  sub->add_option("--param", f.params, "extra parameter key=value (value parsed as JSON when possible)");
  sub->add_option("--expect", f.expect_verdict, "expected verdict; a mismatch exits with 4");
  sub->add_option("--seed", f.seed, "seed for randomized checks");
  sub->add_option("-o,--out", f.out, "certificate output file (default stdout)");
  sub->callback([&, kind] {
    const KindFlags& k = flags.at(kind);
    rc = emit(run_guarded([&] { return scenario_from_flags(kind, k); }), k.out);
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lipgap: exact fat Cantor gap structures, Lipschitz map decisions and extension checks"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  int rc = kExitOk;
  std::map<std::string, KindFlags> flags;

  add_kind(app, "build-gaps", "build a gap structure", {"gamma"}, flags, rc);
  add_kind(app, "decide-lip", "decide a monotone K-Lipschitz map between two structures", {"domain", "codomain"}, flags, rc);
  add_kind(app, "make-adversary", "construct the gamma* prefix defeating a family", {"family"}, flags, rc);
  add_kind(app, "verify-adversary", "check every family member against a gamma* prefix", {"prefix", "family"}, flags, rc);
  add_kind(app, "cube-defeat", "defeat witness for a family of vertex-cube sheets", {"family"}, flags, rc);
  add_kind(app, "cube-check", "check a candidate retraction against a witness", {"witness", "retraction"}, flags, rc);
  add_kind(app, "glue-dist", "distance in a glued space", {"space"}, flags, rc);
  add_kind(app, "collapse", "collapse map of a finite table", {"space", "table"}, flags, rc);
  add_kind(app, "net", "finite net and local-map audit", {"space"}, flags, rc);
  add_kind(app, "chain", "separated chain and its audit", {"space"}, flags, rc);
  add_kind(app, "extend", "finite extension operator and its checks", {"space", "chain", "function"}, flags, rc);

  std::string run_file, run_out;
  auto* run = app.add_subcommand("run", "run one scenario file");
  run->add_option("scenario", run_file, "scenario JSON")->required();
  run->add_option("-o,--out", run_out, "certificate output file (default stdout)");
  run->callback([&] { rc = emit(run_guarded([&] { return load_scenario_file(run_file); }), run_out); });

  std::vector<std::string> batch_files;
  std::string out_dir = ".";
  auto* batch = app.add_subcommand("batch", "run scenario files concurrently, one certificate each");
  batch->add_option("scenarios", batch_files, "scenario JSON files")->required();
  batch->add_option("--out-dir", out_dir, "directory for <stem>.json certificates");
  batch->callback([&] {
    fs::create_directories(out_dir);
    auto codes = parallel_map<int>(batch_files.size(), default_parallelism(), [&](std::size_t i) {
      Certificate c = run_guarded([&] { return load_scenario_file(batch_files[i]); });
      write_atomic(fs::path(out_dir) / (fs::path(batch_files[i]).stem().string() + ".json"), certificate_text(c.doc));
      return c.exit_code;
    });
    for (std::size_t i = 0; i < codes.size(); ++i) std::cout << batch_files[i] << " " << codes[i] << "\n";
    rc = codes.empty() ? 0 : *std::max_element(codes.begin(), codes.end());
  });

  std::string csv_cert, csv_sel, csv_out;
  auto* csv = app.add_subcommand("csv", "extract a plot-ready series from a certificate");
  csv->add_option("certificate", csv_cert, "certificate JSON")->required();
  csv->add_option("--select", csv_sel, "blocking-chain | breakpoints | defeat-grid | gaps")->required();
  csv->add_option("-o,--out", csv_out, "CSV output file (default stdout)");
  csv->callback([&] {
    try {
      auto text = emit_csv(Json::parse(read_text(csv_cert)), csv_sel);
      if (csv_out.empty()) std::cout << text;
      else write_atomic(csv_out, text);
    } catch (const Error& e) {
      std::cerr << "lipgap: " << e.what() << "\n";
      rc = exit_code_for(e.kind());
    } catch (const Json::exception& e) {
      std::cerr << "lipgap: " << e.what() << "\n";
      rc = kExitInput;
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "lipgap: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return rc;
}
