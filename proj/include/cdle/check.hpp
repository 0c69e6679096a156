#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "cdle/ast.hpp"
#include "cdle/bohm.hpp"
#include "cdle/pure.hpp"
#include "cdle/reduce.hpp"

namespace cdle {

// A checked, transparent top-level definition. Names are global
// (`module/path::name`); definitions of parametrized modules are stored
// abstracted over the module's parameters.
struct GlobalDef {
  std::string name;
  std::string module;
  NodeP classifier;  // a kind for type-level definitions, otherwise a type
  NodeP body;
  bool type_level = false;
  PureP erased;  // term-level only
};

class GlobalEnv {
 public:
  const GlobalDef* find(const std::string& name) const;
  void add(GlobalDef d);
  const Defs& pure() const { return pure_; }
  std::size_t size() const { return defs_.size(); }

 private:
  std::unordered_map<std::string, GlobalDef> defs_;
  Defs pure_;
};

struct CheckOptions {
  std::uint64_t fuel = kDefaultFuel;
  int bohm_depth = kDefaultBohmDepth;
  std::uint64_t bohm_node_fuel = kDefaultBohmNodeFuel;
};

struct TypeError : std::runtime_error {
  Span span;
  std::string judgment;  // "synth", "check", "kinding", "kind", "module"
  std::string rule;
  std::string expected;
  std::string found;
  std::string detail;
  std::string file;
  std::string definition;
  TypeError(std::string rule_, std::string judgment_, const std::string& msg, Span s)
      : std::runtime_error(msg), span(s), judgment(std::move(judgment_)), rule(std::move(rule_)) {}
};

// Raised when conversion runs out of fuel; it is reported as a type error
// whose detail reads "conversion fuel exhausted".
struct ConversionFuel : std::runtime_error {
  ConversionFuel() : std::runtime_error("conversion fuel exhausted") {}
};

struct CtxEntry {
  std::string name;
  NodeP classifier;
  bool type_var = false;
};

class Context {
 public:
  explicit Context(const GlobalEnv& env);

  const GlobalEnv& env() const { return *env_; }
  const Defs& defs() const { return locals_; }

  void push(const std::string& name, NodeP classifier, bool type_var);
  void push_let(const std::string& name, NodeP type, PureP value);
  void pop();
  const CtxEntry* lookup(const std::string& name) const;
  bool declared(const std::string& name) const;  // in Γ or a global
  std::size_t depth() const { return entries_.size(); }
  const std::vector<CtxEntry>& entries() const { return entries_; }

 private:
  const GlobalEnv* env_;
  std::vector<CtxEntry> entries_;
  std::vector<bool> is_let_;
  std::unordered_map<std::string, std::vector<std::size_t>> index_;
  Defs locals_;
};

class Checker {
 public:
  Checker(Context& ctx, CheckOptions opts = {}) : ctx_(ctx), opts_(opts) {}

  // kinds and types
  void check_kind_wf(const NodeP& k);
  NodeP synth_kind(const NodeP& t);
  void check_kind_of(const NodeP& t, const NodeP& k);
  void check_type_star(const NodeP& t, const char* rule);

  // terms
  NodeP synth(const NodeP& t);
  void check(const NodeP& t, const NodeP& ty);

  // conversion
  NodeP type_whnf(const NodeP& t);
  bool convert(const NodeP& a, const NodeP& b);  // types or kinds
  bool convert_kinds(const NodeP& a, const NodeP& b);
  bool terms_equal(const NodeP& a, const NodeP& b);  // βη modulo erasure

  std::uint64_t conversion_steps() const { return conv_steps_; }

 private:
  Context& ctx_;
  CheckOptions opts_;
  std::uint64_t conv_steps_ = 0;

  bool conv_t(const NodeP& a, const NodeP& b);
  bool conv_binder(const NodeP& a, const NodeP& b);
  bool spine_shortcut(const NodeP& a, const NodeP& b, bool& decided);
  std::string bind(const std::string& x, const NodeP& classifier, bool type_var, NodeP& scope);
  void require_scoped(const NodeP& t, const char* rule, const char* what);
  void require_conv(const NodeP& expected, const NodeP& found, const char* rule, const NodeP& at,
                    const char* judgment);
  [[noreturn]] void fail(const char* rule, const char* judgment, const std::string& msg, const NodeP& at,
                         const NodeP& expected = nullptr, const NodeP& found = nullptr,
                         const std::string& detail = "");
  NodeP synth_whnf(const NodeP& t);
};

}  // namespace cdle
