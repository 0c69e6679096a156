#pragma once

#include <cstdint>
#include <vector>

#include "cdle/pure.hpp"
#include "cdle/reduce.hpp"

namespace cdle {

constexpr int kDefaultBohmDepth = 8;
constexpr std::uint64_t kDefaultBohmNodeFuel = 10'000;

struct BohmHead {
  bool bound = true;
  int index = 0;     // de Bruijn index under the node's binders
  std::string name;  // free head
};

struct BohmNode {
  int binders = 0;
  BohmHead head;
  std::vector<PureP> children;  // unexpanded subtrees
  bool divergent = false;
};

// Head-normalizes `t` into one Böhm-tree node, with trailing η-redex
// arguments trimmed.
BohmNode bohm_node(const PureP& t, const Defs& defs, std::uint64_t fuel);

struct BohmResult {
  bool separable = false;
  int depth = -1;  // depth of the first differing node when separable
};

BohmResult bohm_separable(const PureP& t1, const PureP& t2, const Defs& defs,
                          int depth = kDefaultBohmDepth,
                          std::uint64_t node_fuel = kDefaultBohmNodeFuel);

}  // namespace cdle
