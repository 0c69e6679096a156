// Command-line front end over the C API.
#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "cdle.h"

namespace {

struct Env {
  cdle_env* p;
  ~Env() { cdle_env_free(p); }
};

std::vector<std::string> roots_from(const std::vector<std::string>& cli) {
  std::vector<std::string> roots = cli;
  if (const char* e = std::getenv("CDLE_PATH")) {
    std::stringstream ss(e);
    std::string item;
    while (std::getline(ss, item, ':'))
      if (!item.empty()) roots.push_back(item);
  }
  if (roots.empty()) roots.push_back(".");
  return roots;
}

int report(cdle_env* env, int status, bool json) {
  if (status == CDLE_OK) return 0;
  if (json)
    std::cout << cdle_last_error_json(env);
  else
    std::cerr << cdle_last_error(env) << "\n";
  return status == CDLE_BAD_ARGUMENT ? 2 : status;
}

int take_string(cdle_env* env, int status, char* s, bool json, const char* key) {
  if (s) {
    if (json)
      std::cout << nlohmann::json{{key, s}}.dump() << "\n";
    else
      std::cout << s << "\n";
    cdle_string_free(s);
  }
  return report(env, status, json);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CDLE kernel: type checker and evaluator"};
  app.require_subcommand(1);
  std::vector<std::string> paths;
  std::uint64_t fuel = 1'000'000;
  int bohm_depth = 8;
  bool json = false;
  app.add_option("--path", paths, "module search root (repeatable)");
  app.add_option("--fuel", fuel, "β-step budget per conversion or evaluation");
  app.add_option("--bohm-depth", bohm_depth, "depth bound for Böhm separation");
  app.add_flag("--json", json, "machine-readable output (JSON lines)");

  std::vector<std::string> files;
  auto* check = app.add_subcommand("check", "elaborate and check source files");
  check->add_option("files", files, "files to check")->required();

  std::string def;
  auto* type = app.add_subcommand("type", "print the classifier of module::name");
  type->add_option("def", def)->required();
  auto* erase = app.add_subcommand("erase", "print the erasure of module::name");
  erase->add_option("def", def)->required();

  bool whnf = false, full = false, cbv = false;
  auto* normalize = app.add_subcommand("normalize", "reduce the erasure of module::name");
  normalize->add_option("def", def)->required();
  auto* w = normalize->add_flag("--whnf", whnf, "weak head normal form (call-by-name)");
  normalize->add_flag("--full", full, "βη-normal form")->excludes(w);
  normalize->add_flag("--cbv", cbv, "call-by-value evaluation");

  auto* steps = app.add_subcommand("steps", "count β-steps evaluating module::name");
  steps->add_option("def", def)->required();
  steps->add_flag("--cbv", cbv, "call-by-value instead of call-by-name to WHNF");

  auto* size = app.add_subcommand("size", "node count of the β-normal erasure of module::name");
  size->add_option("def", def)->required();

  std::string manifest;
  auto* corpus = app.add_subcommand("corpus", "check every file of the corpus manifest");
  corpus->add_option("--manifest", manifest, "manifest file (default: manifest.tsv in the first root having one)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  std::vector<std::string> roots = roots_from(paths);
  std::vector<const char*> croots;
  for (auto& r : roots) croots.push_back(r.c_str());
  Env env{cdle_env_new(croots.data(), croots.size(), fuel, bohm_depth)};
  if (!env.p) {
    std::cerr << "failed to create environment\n";
    return 4;
  }

  if (*check) {
    int worst = 0;
    for (const auto& f : files) {
      int st = cdle_check_file(env.p, f.c_str());
      if (st == CDLE_OK) {
        if (json)
          std::cout << nlohmann::json{{"file", f}, {"ok", true}}.dump() << "\n";
        else
          std::cout << "ok " << f << "\n";
      }
      int rc = report(env.p, st, json);
      if (rc > worst) worst = rc;
    }
    return worst;
  }
  if (*type) {
    char* s = nullptr;
    int st = cdle_type_of(env.p, def.c_str(), &s);
    return take_string(env.p, st, s, json, "type");
  }
  if (*erase) {
    char* s = nullptr;
    int st = cdle_erase(env.p, def.c_str(), &s);
    return take_string(env.p, st, s, json, "erased");
  }
  if (*normalize) {
    char* s = nullptr;
    std::uint64_t n = 0;
    cdle_reduction mode = cbv ? CDLE_CBV : whnf ? CDLE_WHNF : CDLE_FULL;
    int st = cdle_normalize(env.p, def.c_str(), mode, &s, &n);
    return take_string(env.p, st, s, json, "term");
  }
  if (*steps) {
    std::uint64_t n = 0;
    int st = cdle_steps(env.p, def.c_str(), cbv ? CDLE_CBV : CDLE_WHNF, &n);
    if (st == CDLE_OK) {
      if (json)
        std::cout << "{\"steps\": " << n << ", \"strategy\": \"" << (cbv ? "CBV" : "CBN-WHNF") << "\"}\n";
      else
        std::cout << n << "\n";
    }
    return report(env.p, st, json);
  }
  if (*size) {
    std::uint64_t n = 0;
    int st = cdle_size(env.p, def.c_str(), &n);
    if (st == CDLE_OK) {
      if (json)
        std::cout << "{\"size\": " << n << "}\n";
      else
        std::cout << n << "\n";
    }
    return report(env.p, st, json);
  }
  if (*corpus) {
    if (manifest.empty()) {
      for (const auto& r : roots) {
        auto p = std::filesystem::path(r) / "manifest.tsv";
        if (std::filesystem::exists(p)) {
          manifest = p.string();
          break;
        }
      }
      if (manifest.empty()) {
        std::cerr << "no manifest.tsv found in the search roots\n";
        return 2;
      }
    }
    char* s = nullptr;
    int st = cdle_corpus(env.p, manifest.c_str(), json, &s);
    if (s) {
      std::cout << s;
      cdle_string_free(s);
    }
    if (st != CDLE_OK && st != CDLE_TYPE_ERROR) return report(env.p, st, json);
    return st;
  }
  return 4;
}
