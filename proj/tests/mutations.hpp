#pragma once

#include <string>
#include <vector>

#include "support.hpp"

namespace cdle::test {

// A single textual edit of a corpus module and the rule it must trip.
struct Mutation {
  const char* name;
  const char* module;
  const char* anchor;
  const char* replacement;
  const char* rule;
};

inline const std::vector<Mutation>& corpus_mutations() {
  static const std::vector<Mutation> all = {
      {"intrCast binds its erased proof relevantly", "cast", "Λ t. Λ t'.", "Λ t. λ t'.", "lam-intro"},
      {"recLB binds its erased cast relevantly", "recType", "= Λ X. Λ c. intrCast", "= Λ X. λ c. intrCast",
       "lam-intro"},
      {"recLB uses its erased cast relevantly", "recType", "-(λ x. x ·X -c)", "-(λ x. x ·X c)", "app"},
      {"erased binder leaks into the erasure", "cast", "Λ c. eqView ·(S ➔ T) -β{ λ x. x } -c .",
       "Λ c. ρ (eqView ·(S ➔ T) -β{ λ x. x } -c) @x.{ x ≃ c } - β{ c } .", "implicit-intro"},
      {"β on unequal sides", "recType", "{ roll   ≃ λ x. x }", "{ roll   ≃ λ x. λ y. x }", "beta"},
      {"ρ with the wrong guide", "cast", "@x.{ x ≃ c2 }", "@x.{ c2 ≃ x }", "rho"},
      {"intersection components with different erasures", "view", ", β{ t1 } ]", ", β{ λ q. q } ]",
       "pair-intro"},
      {"unit components with different erasures", "utils", "[ Λ X. λ x. x , β ]",
       "[ Λ X. λ x. x , β{ λ a. λ b. a } ]", "pair-intro"},
      {"φ with a mismatched untyped term", "view", "φ v.2 - v.1 { t }", "φ v.2 - v.1 { λ q. q }", "phi"},
      {"δ on a provable equation", "signatures/itree", "- δ - pf .", "- δ - (χ { λ x. x ≃ λ x. x } - β) .",
       "delta"},
      {"import with too many arguments", "scott/generic/props", "import data-char/case ·F ·D inD .",
       "import data-char/case ·F ·D inD inD .", "import-arity"},
      {"erased module argument passed relevantly", "scott/generic/props", "import scott/generic/encoding ·F -mono .",
       "import scott/generic/encoding ·F mono .", "import-erasure"},
      {"erased module parameter used relevantly", "scott/generic/encoding", "monoDF ◂ Mono ·DF",
       "leak ◂ Mono ·F = mono .\n\nmonoDF ◂ Mono ·DF", "erased-param"},
      {"erased argument where a relevant one is expected", "recType",
       "elimCast ·Y ·X -(u ·X -c) y", "elimCast ·Y ·X -(u ·X -c) -y", "implicit-elim"},
      {"type argument to a relevant arrow", "recType", "elimCast ·Rec ·(F ·Rec) -(recUnroll -m)",
       "elimCast ·Rec ·(F ·Rec) ·Rec -(recUnroll -m)", "type-app"},
      {"reference to an undefined name", "cast", "= Λ S. intrCast ·S ·S", "= Λ S. intrCastt ·S ·S", "unbound"},
  };
  return all;
}

inline std::string mutated_source(const Mutation& m) {
  return replace_once(corpus_source(m.module), m.anchor, m.replacement);
}

// Rule reported for the mutated module, or "" when it is accepted.
inline std::string run_mutation(const Mutation& m) {
  ModuleEnv env = corpus_env();
  return check_source(env, mutated_source(m));
}

}  // namespace cdle::test
