#include "cdle/bohm.hpp"

namespace cdle {

BohmNode bohm_node(const PureP& t, const Defs& defs, std::uint64_t fuel_limit) {
  BohmNode n;
  Fuel fuel{fuel_limit, 0};
  PureP cur = t;
  try {
    for (;;) {
      cur = whnf_raw(cur, defs, fuel);
      if (cur->tag != PTag::Lam) break;
      ++n.binders;
      cur = cur->f;
    }
  } catch (OutOfFuel&) {
    n.divergent = true;
    return n;
  }
  std::vector<PureP> rev;
  while (cur->tag == PTag::App) {
    rev.push_back(cur->a);
    cur = cur->f;
  }
  n.children.assign(rev.rbegin(), rev.rend());
  if (cur->tag == PTag::BVar) {
    n.head.bound = true;
    n.head.index = cur->index;
  } else {
    n.head.bound = false;
    n.head.name = cur->name;
  }
  // Trim η-tails: λ..x. h a1 .. ak x with x free nowhere else.
  while (n.binders > 0 && !n.children.empty()) {
    const PureP& last = n.children.back();
    if (last->tag != PTag::BVar || last->index != 0) break;
    if (n.head.bound && n.head.index == 0) break;
    bool used = false;
    for (std::size_t i = 0; i + 1 < n.children.size(); ++i)
      if (has_index(n.children[i], 0)) used = true;
    if (used) break;
    n.children.pop_back();
    for (auto& c : n.children) c = shift(c, -1);
    if (n.head.bound) --n.head.index;
    --n.binders;
  }
  return n;
}

namespace {

void eta_expand(BohmNode& n, int target) {
  int d = target - n.binders;
  if (d <= 0) return;
  for (auto& c : n.children) c = shift(c, d);
  if (n.head.bound) n.head.index += d;
  for (int i = d - 1; i >= 0; --i) n.children.push_back(p_bvar(i));
  n.binders = target;
}

BohmResult compare(const PureP& a, const PureP& b, const Defs& defs, int depth, int level,
                   std::uint64_t fuel) {
  BohmNode x = bohm_node(a, defs, fuel);
  BohmNode y = bohm_node(b, defs, fuel);
  if (x.divergent || y.divergent) return {};
  // A free head could be instantiated to anything, so it separates nothing.
  if (!x.head.bound || !y.head.bound) return {};
  int binders = std::max(x.binders, y.binders);
  eta_expand(x, binders);
  eta_expand(y, binders);
  if (x.head.bound && y.head.bound && x.head.index != y.head.index) return {true, level};
  if (x.children.size() != y.children.size()) return {true, level};
  if (level >= depth) return {};
  for (std::size_t i = 0; i < x.children.size(); ++i) {
    BohmResult r = compare(x.children[i], y.children[i], defs, depth, level + 1, fuel);
    if (r.separable) return r;
  }
  return {};
}

}  // namespace

BohmResult bohm_separable(const PureP& t1, const PureP& t2, const Defs& defs, int depth,
                          std::uint64_t node_fuel) {
  return compare(t1, t2, defs, depth, 0, node_fuel);
}

}  // namespace cdle
