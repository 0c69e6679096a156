#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "cdle/pure.hpp"

namespace cdle {

constexpr std::uint64_t kDefaultFuel = 1'000'000;

// Erased bodies of transparent definitions, keyed by global name. Bodies are
// unfolded lazily in head position. Normal forms computed during conversion
// are memoized; the cache is safe for concurrent use.
class Defs {
 public:
  Defs() = default;
  explicit Defs(const Defs* parent) : parent_(parent) {}
  Defs(const Defs&) = delete;
  Defs& operator=(const Defs&) = delete;

  void define(const std::string& name, PureP body);
  void undefine(const std::string& name);
  const PureP* lookup(const std::string& name) const;
  bool contains(const std::string& name) const { return lookup(name) != nullptr; }
  std::size_t size() const { return bodies_.size(); }
  template <class F>
  void for_each(F f) const {
    for (auto& [k, v] : bodies_) f(k, v);
  }

  std::optional<PureP> cached_nf(const std::string& name) const;
  void store_nf(const std::string& name, PureP nf) const;

 private:
  const Defs* owner(const std::string& name) const;

  const Defs* parent_ = nullptr;
  std::unordered_map<std::string, PureP> bodies_;
  mutable std::mutex mu_;
  mutable std::unordered_map<std::string, PureP> nf_cache_;
};

struct Fuel {
  std::uint64_t limit = kDefaultFuel;
  std::uint64_t used = 0;
};

struct OutOfFuel : std::runtime_error {
  PureP partial;
  explicit OutOfFuel(PureP p) : std::runtime_error("fuel exhausted"), partial(std::move(p)) {}
};

// Low-level engines; they throw OutOfFuel.
PureP whnf_raw(const PureP& t, const Defs& defs, Fuel& fuel);
PureP nf_raw(const PureP& t, const Defs& defs, Fuel& fuel, bool memo);
PureP eta_contract(const PureP& t);
bool has_index(const PureP& t, int k);

struct Reduced {
  PureP term;  // result, or the partially reduced term when exhausted
  std::uint64_t steps = 0;
  bool exhausted = false;
};

Reduced whnf_cbn(const PureP& t, const Defs& defs, std::uint64_t fuel = kDefaultFuel);
Reduced normalize_beta_eta(const PureP& t, const Defs& defs, std::uint64_t fuel = kDefaultFuel);

enum class Verdict : std::uint8_t { Equal, NotEqual, FuelExhausted };
Verdict beta_eta_equal(const PureP& x, const PureP& y, const Defs& defs,
                       std::uint64_t fuel = kDefaultFuel, std::uint64_t* steps = nullptr);

enum class Strategy : std::uint8_t { CbnWhnf, CbnFull, Cbv };

struct EvalTrace {
  std::uint64_t steps = 0;
  PureP result;
  Strategy strategy = Strategy::CbnWhnf;
  bool exhausted = false;
};

EvalTrace eval_count_steps(const PureP& t, const Defs& defs, Strategy s,
                           std::uint64_t fuel = kDefaultFuel);

const char* strategy_name(Strategy s);

}  // namespace cdle
