#include "cdle/corpus.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

namespace cdle {

std::vector<ManifestEntry> read_manifest(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ResolveError("cannot read manifest " + file, {}, file);
  std::vector<ManifestEntry> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, '\t')) cols.push_back(c);
    if (cols.empty() || cols[0].empty()) continue;
    ManifestEntry e;
    e.path = cols[0];
    if (cols.size() > 1) e.figure = cols[1];
    if (cols.size() > 2) {
      std::stringstream bs(cols[2]);
      while (std::getline(bs, c, ','))
        if (!c.empty()) e.beta_proofs.push_back(c);
    }
    out.push_back(std::move(e));
  }
  return out;
}

bool CorpusReport::ok() const {
  for (const auto& f : files)
    if (!f.ok) return false;
  for (const auto& b : betas)
    if (!b.checked || !b.confirmed) return false;
  return true;
}

std::string describe_error(const std::exception& e) {
  std::ostringstream o;
  auto where = [&](const std::string& file, const Span& s) {
    if (!file.empty()) o << file << ":";
    if (s.line) o << s.line << ":" << s.col << ": ";
  };
  if (auto* f = dynamic_cast<const CheckFailure*>(&e)) {
    for (std::size_t i = 0; i < f->errors.size(); ++i) {
      if (i) o << "\n";
      o << describe_error(f->errors[i]);
    }
  } else if (auto* t = dynamic_cast<const TypeError*>(&e)) {
    where(t->file, t->span);
    o << "[" << t->rule << "]";
    if (!t->definition.empty()) o << " in " << t->definition;
    o << ": " << t->what();
    if (!t->expected.empty()) o << "\n  expected: " << t->expected;
    if (!t->found.empty()) o << "\n  found:    " << t->found;
  } else if (auto* p = dynamic_cast<const ParseError*>(&e)) {
    where("", p->span);
    o << p->category << " error: " << p->what();
  } else if (auto* r = dynamic_cast<const ResolveError*>(&e)) {
    where(r->file, r->span);
    o << "resolve error: " << r->what();
  } else {
    o << e.what();
  }
  return o.str();
}

NodeP equation_of(const NodeP& classifier, const ModuleEnv& env) {
  Context ctx(env.globals());
  Checker ck(ctx, env.options());
  NodeP t = classifier;
  for (int guard = 0; guard < 10'000; ++guard) {
    t = ck.type_whnf(t);
    if (t->tag == Tag::Eq) return t;
    if (t->tag == Tag::All || t->tag == Tag::Pi)
      t = t->b;
    else
      return nullptr;
  }
  return nullptr;
}

BetaVerdict confirm_beta(const ModuleEnv& env, const std::string& module, const std::string& name,
                         std::uint64_t fuel) {
  BetaVerdict v;
  v.module = module;
  v.name = name;
  v.checked = env.find(module) != nullptr;
  const GlobalDef* d = env.definition(global_name(module, name));
  if (!d) {
    v.message = "no definition " + global_name(module, name);
    return v;
  }
  NodeP eq;
  try {
    eq = equation_of(d->classifier, env);
  } catch (ConversionFuel&) {
  }
  if (!eq) {
    v.message = "classifier is not an equation";
    return v;
  }
  Verdict r = beta_eta_equal(erase(eq->a), erase(eq->b), env.globals().pure(), fuel, &v.steps);
  v.confirmed = r == Verdict::Equal;
  if (r == Verdict::FuelExhausted) v.message = "fuel exhausted";
  if (r == Verdict::NotEqual) v.message = "sides are not βη-equal";
  return v;
}

CorpusReport verify_corpus(const std::vector<ManifestEntry>& manifest, ModuleEnv& env) {
  using clock = std::chrono::steady_clock;
  CorpusReport rep;
  auto start = clock::now();
  for (const auto& e : manifest) {
    FileVerdict f;
    f.path = e.path;
    f.figure = e.figure;
    auto t0 = clock::now();
    try {
      env.load(e.path);
      f.ok = true;
    } catch (const std::exception& ex) {
      f.message = describe_error(ex);
    }
    f.seconds = std::chrono::duration<double>(clock::now() - t0).count();
    rep.files.push_back(f);
    for (const auto& b : e.beta_proofs) rep.betas.push_back(confirm_beta(env, e.path, b));
  }
  rep.seconds = std::chrono::duration<double>(clock::now() - start).count();
  return rep;
}

}  // namespace cdle
