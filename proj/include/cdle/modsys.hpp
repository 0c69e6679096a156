#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdle/check.hpp"
#include "cdle/syntax.hpp"

namespace cdle {

// Unknown module, import cycle, unreadable file.
struct ResolveError : std::runtime_error {
  Span span;
  std::string file;
  ResolveError(const std::string& msg, Span s, std::string f)
      : std::runtime_error(msg), span(s), file(std::move(f)) {}
};

// A module failed to check; one entry per failing definition.
struct CheckFailure : std::runtime_error {
  std::vector<TypeError> errors;
  explicit CheckFailure(std::vector<TypeError> errs);
};

struct ModuleParam {
  std::string name;
  NodeP classifier;  // kind for type parameters
  bool erased = false;
  bool type_param = false;
};

struct ElabModule {
  std::string path;
  std::string file;
  std::vector<ModuleParam> params;
  std::vector<std::pair<std::string, std::string>> exports;  // surface name, global name
  std::vector<std::string> imports;
  std::size_t checked_defs = 0;  // including anonymous ones
};

std::string global_name(const std::string& module, const std::string& name);

// Search roots: `--path` entries first, then `CDLE_PATH`; the current
// directory when both are empty.
std::vector<std::string> search_roots(const std::vector<std::string>& cli_paths);

class ModuleEnv {
 public:
  explicit ModuleEnv(std::vector<std::string> roots, CheckOptions opts = {});

  const ElabModule& load(const std::string& module_path);
  const ElabModule& load_file(const std::string& file);
  const ElabModule& elaborate(const SurfaceModule& m, const std::string& file);

  const ElabModule* find(const std::string& module_path) const;
  const GlobalEnv& globals() const { return globals_; }
  const GlobalDef* definition(const std::string& qualified) const;  // "a/b::name"
  const std::vector<std::string>& roots() const { return roots_; }
  const CheckOptions& options() const { return opts_; }
  const std::vector<std::string>& order() const { return order_; }

 private:
  std::string locate(const std::string& module_path, const Span& at, const std::string& from) const;

  std::vector<std::string> roots_;
  CheckOptions opts_;
  GlobalEnv globals_;
  std::map<std::string, ElabModule> modules_;
  std::vector<std::string> order_;
  std::set<std::string> in_progress_;
};

}  // namespace cdle
