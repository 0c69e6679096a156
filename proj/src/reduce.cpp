#include "cdle/reduce.hpp"

#include <vector>

namespace cdle {

void Defs::define(const std::string& name, PureP body) {
  std::lock_guard<std::mutex> g(mu_);
  nf_cache_.erase(name);
  bodies_[name] = std::move(body);
}

void Defs::undefine(const std::string& name) {
  std::lock_guard<std::mutex> g(mu_);
  nf_cache_.erase(name);
  bodies_.erase(name);
}

const Defs* Defs::owner(const std::string& name) const {
  for (const Defs* d = this; d; d = d->parent_)
    if (d->bodies_.count(name)) return d;
  return nullptr;
}

const PureP* Defs::lookup(const std::string& name) const {
  for (const Defs* d = this; d; d = d->parent_) {
    auto it = d->bodies_.find(name);
    if (it != d->bodies_.end()) return &it->second;
  }
  return nullptr;
}

std::optional<PureP> Defs::cached_nf(const std::string& name) const {
  const Defs* d = owner(name);
  if (!d) return std::nullopt;
  std::lock_guard<std::mutex> g(d->mu_);
  auto it = d->nf_cache_.find(name);
  if (it == d->nf_cache_.end()) return std::nullopt;
  return it->second;
}

void Defs::store_nf(const std::string& name, PureP nf) const {
  const Defs* d = owner(name);
  if (!d) return;
  std::lock_guard<std::mutex> g(d->mu_);
  d->nf_cache_.emplace(name, std::move(nf));
}

namespace {

void spend(Fuel& fuel) {
  if (fuel.used >= fuel.limit) throw OutOfFuel(nullptr);
  ++fuel.used;
}

PureP rebuild(PureP head, const std::vector<PureP>& rev_args) {
  for (auto it = rev_args.rbegin(); it != rev_args.rend(); ++it) head = p_app(head, *it);
  return head;
}

PureP def_nf(const std::string& name, const PureP& body, const Defs& defs, Fuel& fuel);

// Head reduction to weak head normal form. With `memo`, definitions unfold to
// their memoized normal forms instead of their raw bodies.
PureP whnf_go(PureP t, const Defs& defs, Fuel& fuel, bool memo) {
  std::vector<PureP> args;  // reversed: back() is the first argument
  for (;;) {
    while (t->tag == PTag::App) {
      args.push_back(t->a);
      t = t->f;
    }
    if (t->tag == PTag::Lam && !args.empty()) {
      try {
        spend(fuel);
      } catch (OutOfFuel&) {
        throw OutOfFuel(rebuild(t, args));
      }
      t = instantiate(t->f, args.back());
      args.pop_back();
      continue;
    }
    if (t->tag == PTag::FVar) {
      if (const PureP* body = defs.lookup(t->name)) {
        t = memo ? def_nf(t->name, *body, defs, fuel) : *body;
        continue;
      }
    }
    return rebuild(t, args);
  }
}

PureP nf_go(const PureP& t, const Defs& defs, Fuel& fuel, bool memo) {
  PureP w = whnf_go(t, defs, fuel, memo);
  if (w->tag == PTag::Lam) {
    PureP b = nf_go(w->f, defs, fuel, memo);
    return b == w->f ? w : p_lam(w->name, b);
  }
  std::vector<PureP> args;
  PureP h = w;
  while (h->tag == PTag::App) {
    args.push_back(h->a);
    h = h->f;
  }
  for (auto& a : args) a = nf_go(a, defs, fuel, memo);
  return rebuild(h, args);
}

PureP def_nf(const std::string& name, const PureP& body, const Defs& defs, Fuel& fuel) {
  if (auto c = defs.cached_nf(name)) return *c;
  PureP n = nf_go(body, defs, fuel, true);
  defs.store_nf(name, n);
  return n;
}

}  // namespace

bool has_index(const PureP& t, int k) {
  if (t->loose <= k) return false;
  switch (t->tag) {
    case PTag::BVar: return t->index == k;
    case PTag::FVar: return false;
    case PTag::Lam: return has_index(t->f, k + 1);
    case PTag::App: return has_index(t->f, k) || has_index(t->a, k);
  }
  return false;
}

PureP eta_contract(const PureP& t) {
  switch (t->tag) {
    case PTag::BVar:
    case PTag::FVar:
      return t;
    case PTag::App: {
      auto f = eta_contract(t->f), a = eta_contract(t->a);
      return f == t->f && a == t->a ? t : p_app(f, a);
    }
    case PTag::Lam: {
      PureP b = eta_contract(t->f);
      if (b->tag == PTag::App && b->a->tag == PTag::BVar && b->a->index == 0 && !has_index(b->f, 0))
        return shift(b->f, -1);
      return b == t->f ? t : p_lam(t->name, b);
    }
  }
  return t;
}

PureP whnf_raw(const PureP& t, const Defs& defs, Fuel& fuel) { return whnf_go(t, defs, fuel, false); }

PureP nf_raw(const PureP& t, const Defs& defs, Fuel& fuel, bool memo) {
  try {
    return nf_go(t, defs, fuel, memo);
  } catch (OutOfFuel& e) {
    if (!e.partial) throw OutOfFuel(t);
    throw;
  }
}

Reduced whnf_cbn(const PureP& t, const Defs& defs, std::uint64_t fuel_limit) {
  Fuel fuel{fuel_limit, 0};
  try {
    PureP r = whnf_go(t, defs, fuel, false);
    return {r, fuel.used, false};
  } catch (OutOfFuel& e) {
    return {e.partial ? e.partial : t, fuel.used, true};
  }
}

Reduced normalize_beta_eta(const PureP& t, const Defs& defs, std::uint64_t fuel_limit) {
  Fuel fuel{fuel_limit, 0};
  try {
    PureP r = eta_contract(nf_go(t, defs, fuel, false));
    return {r, fuel.used, false};
  } catch (OutOfFuel& e) {
    return {e.partial ? e.partial : t, fuel.used, true};
  }
}

Verdict beta_eta_equal(const PureP& x, const PureP& y, const Defs& defs, std::uint64_t fuel_limit,
                       std::uint64_t* steps) {
  if (steps) *steps = 0;
  if (pure_equal(x, y)) return Verdict::Equal;
  Fuel fuel{fuel_limit, 0};
  // Cheap attempt with definitions left folded: equal folded normal forms
  // imply equal unfolded ones.
  {
    static const Defs opaque;
    Fuel quick{std::min<std::uint64_t>(fuel_limit, 20'000), 0};
    try {
      PureP a = eta_contract(nf_go(x, opaque, quick, false));
      PureP b = eta_contract(nf_go(y, opaque, quick, false));
      fuel.used += quick.used;
      if (pure_equal(a, b)) {
        if (steps) *steps = fuel.used;
        return Verdict::Equal;
      }
    } catch (OutOfFuel&) {
      fuel.used += quick.used;
    }
  }
  try {
    PureP a = eta_contract(nf_go(x, defs, fuel, true));
    PureP b = eta_contract(nf_go(y, defs, fuel, true));
    if (steps) *steps = fuel.used;
    return pure_equal(a, b) ? Verdict::Equal : Verdict::NotEqual;
  } catch (OutOfFuel&) {
    if (steps) *steps = fuel.used;
    return Verdict::FuelExhausted;
  }
}

namespace {

PureP cbv_eval(PureP t, const Defs& defs, Fuel& fuel) {
  for (;;) {
    switch (t->tag) {
      case PTag::Lam:
      case PTag::BVar:
        return t;
      case PTag::FVar: {
        const PureP* body = defs.lookup(t->name);
        if (!body) return t;
        t = *body;
        continue;
      }
      case PTag::App: {
        PureP f = cbv_eval(t->f, defs, fuel);
        PureP a = cbv_eval(t->a, defs, fuel);
        if (f->tag != PTag::Lam) return p_app(f, a);
        try {
          spend(fuel);
        } catch (OutOfFuel&) {
          throw OutOfFuel(p_app(f, a));
        }
        t = instantiate(f->f, a);
        continue;
      }
    }
  }
}

}  // namespace

EvalTrace eval_count_steps(const PureP& t, const Defs& defs, Strategy s, std::uint64_t fuel_limit) {
  Fuel fuel{fuel_limit, 0};
  EvalTrace tr;
  tr.strategy = s;
  try {
    switch (s) {
      case Strategy::CbnWhnf: tr.result = whnf_go(t, defs, fuel, false); break;
      case Strategy::CbnFull: tr.result = nf_go(t, defs, fuel, false); break;
      case Strategy::Cbv: tr.result = cbv_eval(t, defs, fuel); break;
    }
  } catch (OutOfFuel& e) {
    tr.exhausted = true;
    tr.result = e.partial ? e.partial : t;
  }
  tr.steps = fuel.used;
  return tr;
}

const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::CbnWhnf: return "CBN-WHNF";
    case Strategy::CbnFull: return "CBN-full";
    case Strategy::Cbv: return "CBV";
  }
  return "?";
}

}  // namespace cdle
