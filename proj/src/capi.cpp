#include "cdle.h"

#include <cstring>
#include <json.hpp>
#include <sstream>

#include "cdle/corpus.hpp"

using nlohmann::json;

struct cdle_env {
  cdle::ModuleEnv modules;
  std::string error;
  std::string error_json;
  cdle_env(std::vector<std::string> roots, cdle::CheckOptions opts) : modules(std::move(roots), opts) {}
};

namespace {

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p) std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

json span_json(const cdle::Span& s) { return {{"line", s.line}, {"col", s.col}, {"begin", s.begin}, {"end", s.end}}; }

json type_error_json(const cdle::TypeError& e) {
  return {{"kind", "type"},         {"file", e.file},         {"span", span_json(e.span)},
          {"rule", e.rule},         {"judgment", e.judgment}, {"definition", e.definition},
          {"expected", e.expected}, {"found", e.found},       {"message", e.what()},
          {"detail", e.detail}};
}

bool fuel_error(const cdle::TypeError& e) { return e.detail == "conversion fuel exhausted"; }

cdle_status record(cdle_env* env, const std::exception& ex) {
  env->error = cdle::describe_error(ex);
  std::ostringstream js;
  cdle_status st = CDLE_INTERNAL;
  if (auto* f = dynamic_cast<const cdle::CheckFailure*>(&ex)) {
    st = CDLE_TYPE_ERROR;
    for (const auto& e : f->errors) {
      js << type_error_json(e).dump() << "\n";
      if (fuel_error(e)) st = CDLE_FUEL_EXHAUSTED;
    }
  } else if (auto* t = dynamic_cast<const cdle::TypeError*>(&ex)) {
    js << type_error_json(*t).dump() << "\n";
    st = fuel_error(*t) ? CDLE_FUEL_EXHAUSTED : CDLE_TYPE_ERROR;
  } else if (auto* p = dynamic_cast<const cdle::ParseError*>(&ex)) {
    js << json{{"kind", p->category}, {"span", span_json(p->span)}, {"message", p->what()}}.dump() << "\n";
    st = CDLE_PARSE_ERROR;
  } else if (auto* r = dynamic_cast<const cdle::ResolveError*>(&ex)) {
    js << json{{"kind", "resolve"}, {"file", r->file}, {"span", span_json(r->span)}, {"message", r->what()}}.dump()
       << "\n";
    st = CDLE_PARSE_ERROR;
  } else if (dynamic_cast<const cdle::ConversionFuel*>(&ex)) {
    js << json{{"kind", "fuel"}, {"message", ex.what()}}.dump() << "\n";
    st = CDLE_FUEL_EXHAUSTED;
  } else {
    js << json{{"kind", "internal"}, {"message", ex.what()}}.dump() << "\n";
  }
  env->error_json = js.str();
  return st;
}

template <class F>
cdle_status guarded(cdle_env* env, F f) {
  if (!env) return CDLE_BAD_ARGUMENT;
  env->error.clear();
  env->error_json.clear();
  try {
    return f();
  } catch (const std::exception& ex) {
    return record(env, ex);
  }
}

const cdle::GlobalDef& lookup_def(cdle_env* env, const char* def) {
  std::string q = def ? def : "";
  auto sep = q.rfind("::");
  if (sep == std::string::npos || sep == 0) throw cdle::ResolveError("expected module::name, got " + q, {}, "");
  env->modules.load(q.substr(0, sep));
  const cdle::GlobalDef* d = env->modules.definition(q);
  if (!d) throw cdle::ResolveError("no definition " + q, {}, "");
  return *d;
}

cdle::PureP erased_of(const cdle::GlobalDef& d) {
  if (d.type_level) throw cdle::ResolveError(d.name + " is a type definition", {}, "");
  return d.erased;
}

cdle::Strategy strategy_of(cdle_reduction mode) {
  switch (mode) {
    case CDLE_WHNF: return cdle::Strategy::CbnWhnf;
    case CDLE_FULL: return cdle::Strategy::CbnFull;
    case CDLE_CBV: return cdle::Strategy::Cbv;
  }
  return cdle::Strategy::CbnWhnf;
}

}  // namespace

extern "C" {

cdle_env* cdle_env_new(const char* const* roots, size_t n_roots, uint64_t fuel, int bohm_depth) {
  try {
    std::vector<std::string> rs;
    for (size_t i = 0; i < n_roots; ++i)
      if (roots && roots[i]) rs.emplace_back(roots[i]);
    if (rs.empty()) rs.emplace_back(".");
    cdle::CheckOptions opts;
    if (fuel) opts.fuel = fuel;
    if (bohm_depth >= 0) opts.bohm_depth = bohm_depth;
    return new cdle_env(std::move(rs), opts);
  } catch (...) {
    return nullptr;
  }
}

void cdle_env_free(cdle_env* env) { delete env; }

const char* cdle_last_error(const cdle_env* env) { return env ? env->error.c_str() : ""; }
const char* cdle_last_error_json(const cdle_env* env) { return env ? env->error_json.c_str() : ""; }

cdle_status cdle_check_file(cdle_env* env, const char* file) {
  return guarded(env, [&] {
    if (!file) return CDLE_BAD_ARGUMENT;
    env->modules.load_file(file);
    return CDLE_OK;
  });
}

cdle_status cdle_load_module(cdle_env* env, const char* module_path) {
  return guarded(env, [&] {
    if (!module_path) return CDLE_BAD_ARGUMENT;
    env->modules.load(module_path);
    return CDLE_OK;
  });
}

cdle_status cdle_type_of(cdle_env* env, const char* def, char** out) {
  return guarded(env, [&] {
    if (!out) return CDLE_BAD_ARGUMENT;
    *out = dup(cdle::print(lookup_def(env, def).classifier));
    return CDLE_OK;
  });
}

cdle_status cdle_erase(cdle_env* env, const char* def, char** out) {
  return guarded(env, [&] {
    if (!out) return CDLE_BAD_ARGUMENT;
    *out = dup(cdle::print_pure(erased_of(lookup_def(env, def))));
    return CDLE_OK;
  });
}

cdle_status cdle_normalize(cdle_env* env, const char* def, cdle_reduction mode, char** out, uint64_t* steps) {
  return guarded(env, [&] {
    if (!out) return CDLE_BAD_ARGUMENT;
    cdle::PureP t = erased_of(lookup_def(env, def));
    const auto& defs = env->modules.globals().pure();
    std::uint64_t fuel = env->modules.options().fuel;
    cdle::PureP result;
    std::uint64_t n = 0;
    bool exhausted = false;
    if (mode == CDLE_FULL) {
      cdle::Reduced r = cdle::normalize_beta_eta(t, defs, fuel);
      result = r.term;
      n = r.steps;
      exhausted = r.exhausted;
    } else {
      cdle::EvalTrace tr = cdle::eval_count_steps(t, defs, strategy_of(mode), fuel);
      result = tr.result;
      n = tr.steps;
      exhausted = tr.exhausted;
    }
    if (steps) *steps = n;
    *out = dup(cdle::print_pure(result));
    if (exhausted) {
      env->error = "fuel exhausted after " + std::to_string(n) + " steps";
      env->error_json = json{{"kind", "fuel"}, {"message", env->error}}.dump() + "\n";
      return CDLE_FUEL_EXHAUSTED;
    }
    return CDLE_OK;
  });
}

cdle_status cdle_steps(cdle_env* env, const char* def, cdle_reduction mode, uint64_t* steps) {
  return guarded(env, [&] {
    if (!steps) return CDLE_BAD_ARGUMENT;
    cdle::PureP t = erased_of(lookup_def(env, def));
    cdle::EvalTrace tr =
        cdle::eval_count_steps(t, env->modules.globals().pure(), strategy_of(mode), env->modules.options().fuel);
    *steps = tr.steps;
    if (tr.exhausted) {
      env->error = "fuel exhausted after " + std::to_string(tr.steps) + " steps";
      env->error_json = json{{"kind", "fuel"}, {"message", env->error}}.dump() + "\n";
      return CDLE_FUEL_EXHAUSTED;
    }
    return CDLE_OK;
  });
}

cdle_status cdle_size(cdle_env* env, const char* def, uint64_t* size) {
  return guarded(env, [&] {
    if (!size) return CDLE_BAD_ARGUMENT;
    cdle::PureP t = erased_of(lookup_def(env, def));
    cdle::EvalTrace tr = cdle::eval_count_steps(t, env->modules.globals().pure(), cdle::Strategy::CbnFull,
                                                env->modules.options().fuel);
    if (tr.exhausted) {
      env->error = "fuel exhausted after " + std::to_string(tr.steps) + " steps";
      env->error_json = json{{"kind", "fuel"}, {"message", env->error}}.dump() + "\n";
      return CDLE_FUEL_EXHAUSTED;
    }
    *size = cdle::pure_size(tr.result);
    return CDLE_OK;
  });
}

cdle_status cdle_corpus(cdle_env* env, const char* manifest, int json_out, char** report) {
  return guarded(env, [&] {
    if (!manifest || !report) return CDLE_BAD_ARGUMENT;
    auto entries = cdle::read_manifest(manifest);
    cdle::CorpusReport rep = cdle::verify_corpus(entries, env->modules);
    std::ostringstream o;
    if (json_out) {
      for (const auto& f : rep.files)
        o << json{{"file", f.path}, {"figure", f.figure}, {"ok", f.ok}, {"seconds", f.seconds}, {"message", f.message}}
                 .dump()
          << "\n";
      for (const auto& b : rep.betas)
        o << json{{"module", b.module}, {"beta", b.name},   {"checked", b.checked},
                  {"confirmed", b.confirmed}, {"steps", b.steps}, {"message", b.message}}
                 .dump()
          << "\n";
    } else {
      std::size_t good = 0;
      for (const auto& f : rep.files) {
        good += f.ok;
        o << (f.ok ? "ok   " : "FAIL ") << f.path << "  (" << f.figure << ")  " << f.seconds << "s\n";
        if (!f.ok) o << "  " << f.message << "\n";
      }
      for (const auto& b : rep.betas)
        o << (b.checked && b.confirmed ? "ok   " : "FAIL ") << "β " << b.module << "::" << b.name << "  " << b.steps
          << " steps" << (b.message.empty() ? "" : "  " + b.message) << "\n";
      o << good << "/" << rep.files.size() << " files accepted in " << rep.seconds << "s\n";
    }
    *report = dup(o.str());
    if (rep.ok()) return CDLE_OK;
    std::ostringstream err;
    for (const auto& f : rep.files)
      if (!f.ok) err << f.path << ": " << f.message << "\n";
    env->error = err.str();
    return CDLE_TYPE_ERROR;
  });
}

void cdle_string_free(char* s) { std::free(s); }

}  // extern "C"
