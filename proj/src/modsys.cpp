#include "cdle/modsys.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace cdle {

namespace fs = std::filesystem;

CheckFailure::CheckFailure(std::vector<TypeError> errs)
    : std::runtime_error(errs.empty() ? "check failed" : errs.front().what()), errors(std::move(errs)) {}

std::string global_name(const std::string& module, const std::string& name) { return module + "::" + name; }

std::vector<std::string> search_roots(const std::vector<std::string>& cli_paths) {
  std::vector<std::string> roots = cli_paths;
  if (const char* env = std::getenv("CDLE_PATH")) {
    std::stringstream ss(env);
    std::string item;
    while (std::getline(ss, item, ':'))
      if (!item.empty()) roots.push_back(item);
  }
  if (roots.empty()) roots.push_back(".");
  return roots;
}

namespace {

std::string read_file(const std::string& file, const Span& at, const std::string& from) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ResolveError("cannot read " + file, at, from);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TypeError type_error(const char* rule, const std::string& msg, Span s) { return TypeError(rule, "module", msg, s); }

// Replaces surface names by globals (through the import and sibling tables)
// while leaving binder-bound names and module parameters alone.
class Resolver {
 public:
  Resolver(const std::map<std::string, NodeP>& table, const std::set<std::string>& params)
      : table_(table), params_(params) {}

  NodeP operator()(const NodeP& n) { return go(n); }

 private:
  const std::map<std::string, NodeP>& table_;
  const std::set<std::string>& params_;
  std::unordered_map<std::string, int> bound_;

  NodeP go(const NodeP& n) {
    if (!n) return n;
    switch (n->tag) {
      case Tag::Var: {
        auto b = bound_.find(n->name);
        if (b != bound_.end() && b->second > 0) return n;
        if (params_.count(n->name)) return n;
        auto it = table_.find(n->name);
        if (it == table_.end()) throw type_error("unbound", "unbound name " + n->name, n->span);
        const NodeP& e = it->second;
        return mk(e->tag, e->name, e->a, e->b, e->c, n->span);
      }
      case Tag::Star:
        return n;
      case Tag::Let: {
        NodeP a = go(n->a), b = go(n->b);
        auto [x, c] = under(n->name, n->c);
        return mk(n->tag, x, a, b, c, n->span);
      }
      default:
        break;
    }
    if (binds(n->tag)) {
      NodeP a = go(n->a);
      auto [x, b] = under(n->name, n->b);
      NodeP c = go(n->c);
      return mk(n->tag, x, a, b, c, n->span);
    }
    return mk(n->tag, n->name, go(n->a), go(n->b), go(n->c), n->span);
  }

  std::pair<std::string, NodeP> under(const std::string& x, const NodeP& body) {
    std::string name = x;
    NodeP b = body;
    if (!is_anonymous(x) && params_.count(x)) {
      name = fresh_name(x);
      b = substitute1(body, x, mk_var(name));
    }
    ++bound_[name];
    NodeP r;
    try {
      r = go(b);
    } catch (...) {
      --bound_[name];
      throw;
    }
    --bound_[name];
    return {name, r};
  }
};

NodeP expansion(const std::string& global, bool type_level, const std::vector<ModuleParam>& params) {
  NodeP e = mk_var(global);
  for (const auto& p : params) {
    NodeP v = mk_var(p.name);
    if (type_level)
      e = p.type_param ? mk_tappt(e, v) : mk_tapp(e, v);
    else
      e = p.type_param ? mk_appt(e, v) : p.erased ? mk_appe(e, v) : mk_app(e, v);
  }
  return e;
}

}  // namespace

ModuleEnv::ModuleEnv(std::vector<std::string> roots, CheckOptions opts) : roots_(std::move(roots)), opts_(opts) {}

const ElabModule* ModuleEnv::find(const std::string& module_path) const {
  auto it = modules_.find(module_path);
  return it == modules_.end() ? nullptr : &it->second;
}

const GlobalDef* ModuleEnv::definition(const std::string& qualified) const { return globals_.find(qualified); }

std::string ModuleEnv::locate(const std::string& module_path, const Span& at, const std::string& from) const {
  for (const auto& root : roots_) {
    fs::path p = fs::path(root) / (module_path + ".ced");
    std::error_code ec;
    if (fs::is_regular_file(p, ec)) return p.string();
  }
  throw ResolveError("unknown module " + module_path, at, from);
}

const ElabModule& ModuleEnv::load(const std::string& module_path) {
  if (const ElabModule* m = find(module_path)) return *m;
  if (in_progress_.count(module_path)) throw ResolveError("import cycle through " + module_path, {}, module_path);
  std::string file = locate(module_path, {}, "");
  SurfaceModule m = parse_module(read_file(file, {}, ""), module_path);
  return elaborate(m, file);
}

const ElabModule& ModuleEnv::load_file(const std::string& file) {
  SurfaceModule m = parse_module(read_file(file, {}, file), "");
  std::string stem = fs::path(file).lexically_normal().replace_extension().generic_string();
  if (stem.size() < m.path.size() || stem.compare(stem.size() - m.path.size(), m.path.size(), m.path) != 0 ||
      (stem.size() > m.path.size() && stem[stem.size() - m.path.size() - 1] != '/'))
    throw ParseError("path", "file " + file + " does not match module " + m.path, {});
  if (const ElabModule* e = find(m.path)) return *e;
  return elaborate(m, file);
}

const ElabModule& ModuleEnv::elaborate(const SurfaceModule& m, const std::string& file) {
  if (const ElabModule* e = find(m.path)) return *e;
  if (in_progress_.count(m.path)) throw ResolveError("import cycle through " + m.path, {}, file);
  in_progress_.insert(m.path);
  struct Done {
    std::set<std::string>& s;
    std::string p;
    ~Done() { s.erase(p); }
  } done{in_progress_, m.path};

  ElabModule em;
  em.path = m.path;
  em.file = file;
  std::map<std::string, NodeP> table;
  std::set<std::string> param_names;
  Context ctx(globals_);
  std::vector<TypeError> errors;

  auto fatal = [&](TypeError e, const std::string& def) {
    e.file = file;
    e.definition = def;
    errors.push_back(std::move(e));
    throw CheckFailure(std::move(errors));
  };

  auto do_params = [&] {
    for (const auto& p : m.params) {
      ModuleParam mp;
      mp.name = p.name;
      mp.erased = p.erased;
      try {
        mp.classifier = Resolver(table, param_names)(p.classifier);
        Checker ck(ctx, opts_);
        mp.type_param = is_kind(mp.classifier);
        if (mp.type_param)
          ck.check_kind_wf(mp.classifier);
        else
          ck.check_type_star(mp.classifier, "param");
      } catch (TypeError& e) {
        fatal(e, p.name);
      }
      ctx.push(mp.name, mp.classifier, mp.type_param);
      param_names.insert(mp.name);
      em.params.push_back(mp);
    }
  };

  auto do_import = [&](const Import& im) {
    const ElabModule& target = load(im.path);
    em.imports.push_back(target.path);
    if (im.args.size() > target.params.size())
      fatal(type_error("import-arity",
                       "module " + target.path + " takes " + std::to_string(target.params.size()) +
                           " parameters but " + std::to_string(im.args.size()) + " arguments were given",
                       im.span),
            im.path);
    Subst prior;
    std::vector<ImportArg> args;
    for (std::size_t i = 0; i < im.args.size(); ++i) {
      const ModuleParam& q = target.params[i];
      const ImportArg& a = im.args[i];
      NodeP value;
      try {
        value = Resolver(table, param_names)(a.value);
      } catch (TypeError& e) {
        fatal(e, im.path);
      }
      Span at = a.value->span;
      if (q.type_param != (a.kind == ArgKind::Type))
        fatal(type_error("import-arg", "argument " + std::to_string(i + 1) + " to " + target.path +
                                           (q.type_param ? " must be a type" : " must be a term"), at),
              im.path);
      if (!q.type_param && q.erased != (a.kind == ArgKind::Erased))
        fatal(type_error("import-erasure", "argument " + std::to_string(i + 1) + " to " + target.path +
                                               (q.erased ? " must be erased (-)" : " must not be erased"), at),
              im.path);
      NodeP cls = substitute(q.classifier, prior);
      try {
        Checker ck(ctx, opts_);
        if (q.type_param) {
          NodeP k = ck.synth_kind(value);
          if (!ck.convert_kinds(cls, k)) {
            TypeError e("import-arg", "module", "argument kind mismatch for parameter " + q.name, at);
            e.expected = print(cls);
            e.found = print(k);
            fatal(e, im.path);
          }
        } else {
          ck.check(value, cls);
        }
      } catch (TypeError& e) {
        if (e.rule == "import-arg") throw;
        TypeError w("import-arg", "module", std::string("argument for parameter ") + q.name + ": " + e.what(), at);
        w.expected = e.expected;
        w.found = e.found;
        w.detail = e.rule;
        fatal(w, im.path);
      } catch (ConversionFuel&) {
        TypeError w("import-arg", "module", "conversion fuel exhausted", at);
        w.detail = "conversion fuel exhausted";
        fatal(w, im.path);
      }
      prior[q.name] = value;
      args.push_back({a.kind, value});
    }
    for (const auto& [name, global] : target.exports) {
      const GlobalDef* d = globals_.find(global);
      NodeP e = mk_var(global);
      for (const auto& a : args) {
        if (d->type_level)
          e = a.kind == ArgKind::Type ? mk_tappt(e, a.value) : mk_tapp(e, a.value);
        else
          e = a.kind == ArgKind::Type ? mk_appt(e, a.value) : a.kind == ArgKind::Erased ? mk_appe(e, a.value)
                                                                                     : mk_app(e, a.value);
      }
      table[im.alias ? *im.alias + "." + name : name] = e;
    }
  };

  auto do_decl = [&](const Decl& d) {
    ++em.checked_defs;
    NodeP cls, body;
    try {
      Resolver r(table, param_names);
      cls = r(d.classifier);
      body = r(d.body);
    } catch (TypeError& e) {
      e.file = file;
      e.definition = d.name;
      errors.push_back(e);
      return;
    }
    try {
      Checker ck(ctx, opts_);
      if (d.type_level) {
        ck.check_kind_wf(cls);
        ck.check_kind_of(body, cls);
      } else {
        ck.check_type_star(cls, "decl");
        ck.check(body, cls);
        std::set<std::string> fv = free_vars(erase(body));
        for (const auto& p : em.params)
          if ((p.erased || p.type_param) && fv.count(p.name))
            throw TypeError("erased-param", "module",
                            "erased parameter " + p.name + " occurs in the erasure of " + d.name, d.span);
      }
    } catch (TypeError& e) {
      e.file = file;
      e.definition = d.name;
      errors.push_back(e);
    }
    if (is_anonymous(d.name)) return;
    GlobalDef g;
    g.name = global_name(m.path, d.name);
    g.module = m.path;
    g.type_level = d.type_level;
    g.classifier = cls;
    g.body = body;
    for (auto it = em.params.rbegin(); it != em.params.rend(); ++it) {
      const ModuleParam& p = *it;
      if (d.type_level) {
        g.classifier = mk_binder(Tag::Pi, p.name, p.classifier, g.classifier);
        g.body = mk_binder(Tag::TLam, p.name, p.classifier, g.body);
      } else if (p.type_param || p.erased) {
        g.classifier = mk_binder(Tag::All, p.name, p.classifier, g.classifier);
        g.body = mk_lame(p.name, p.classifier, g.body);
      } else {
        g.classifier = mk_binder(Tag::Pi, p.name, p.classifier, g.classifier);
        g.body = mk_lam(p.name, p.classifier, g.body);
      }
    }
    if (!d.type_level) g.erased = erase(g.body);
    std::string gname = g.name;
    globals_.add(std::move(g));
    table[d.name] = expansion(gname, d.type_level, em.params);
    em.exports.emplace_back(d.name, gname);
  };

  for (std::size_t i = 0; i <= m.items.size(); ++i) {
    if (i == m.header_index) do_params();
    if (i == m.items.size()) break;
    if (auto* im = std::get_if<Import>(&m.items[i]))
      do_import(*im);
    else
      do_decl(std::get<Decl>(m.items[i]));
  }
  if (!errors.empty()) throw CheckFailure(std::move(errors));
  order_.push_back(m.path);
  return modules_.emplace(m.path, std::move(em)).first->second;
}

}  // namespace cdle
