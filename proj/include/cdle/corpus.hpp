#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cdle/modsys.hpp"

namespace cdle {

// One manifest line: `path <TAB> figure-ref [<TAB> beta-proof,beta-proof,...]`.
struct ManifestEntry {
  std::string path;
  std::string figure;
  std::vector<std::string> beta_proofs;
};

std::vector<ManifestEntry> read_manifest(const std::string& file);

struct FileVerdict {
  std::string path;
  std::string figure;
  bool ok = false;
  std::string message;
  double seconds = 0;
};

// A definition whose proof is β: `checked` when its module was accepted,
// `confirmed` when the erased sides of its equation are βη-equal when
// compared directly, without the checker.
struct BetaVerdict {
  std::string module;
  std::string name;
  bool checked = false;
  bool confirmed = false;
  std::uint64_t steps = 0;
  std::string message;
};

struct CorpusReport {
  std::vector<FileVerdict> files;
  std::vector<BetaVerdict> betas;
  double seconds = 0;
  bool ok() const;
};

// Finds the equation at the end of a classifier, looking through leading
// ∀/Π binders and definitions.
NodeP equation_of(const NodeP& classifier, const ModuleEnv& env);

BetaVerdict confirm_beta(const ModuleEnv& env, const std::string& module, const std::string& name,
                         std::uint64_t fuel = kDefaultFuel);

CorpusReport verify_corpus(const std::vector<ManifestEntry>& manifest, ModuleEnv& env);

std::string describe_error(const std::exception& e);

}  // namespace cdle
