#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "cdle/corpus.hpp"
#include "cdle/modsys.hpp"
#include "cdle/syntax.hpp"

namespace cdle::test {

inline std::string corpus_dir() { return CDLE_CORPUS_DIR; }

inline std::string read_text(const std::string& file) {
  std::ifstream in(file);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string corpus_source(const std::string& module) { return read_text(corpus_dir() + "/" + module + ".ced"); }

inline ModuleEnv corpus_env() { return ModuleEnv({corpus_dir()}); }

// Elaborates `source` against the corpus; returns "" on success, otherwise
// the rule name of the first reported error (or the error category).
inline std::string check_source(ModuleEnv& env, const std::string& source) {
  try {
    env.elaborate(parse_module(source, ""), "<test>");
    return "";
  } catch (const CheckFailure& f) {
    return f.errors.empty() ? "?" : f.errors.front().rule;
  } catch (const TypeError& e) {
    return e.rule;
  } catch (const ParseError& e) {
    return e.category;
  } catch (const ResolveError&) {
    return "resolve";
  }
}

inline std::string replace_once(std::string s, const std::string& from, const std::string& to) {
  auto at = s.find(from);
  if (at == std::string::npos) throw std::runtime_error("mutation anchor not found: " + from);
  return s.replace(at, from.size(), to);
}

// Classifier of a corpus definition addressed as "module::name".
inline NodeP classifier_of(ModuleEnv& env, const std::string& qualified) {
  env.load(qualified.substr(0, qualified.rfind("::")));
  const GlobalDef* d = env.definition(qualified);
  if (!d) throw std::runtime_error("no definition " + qualified);
  return d->classifier;
}

inline PureP erased_of(ModuleEnv& env, const std::string& qualified) {
  env.load(qualified.substr(0, qualified.rfind("::")));
  const GlobalDef* d = env.definition(qualified);
  if (!d) throw std::runtime_error("no definition " + qualified);
  return d->erased;
}

}  // namespace cdle::test
