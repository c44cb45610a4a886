#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "saturn/fol/problem.hpp"

namespace saturn::harness {

enum class Family { ChainResolution, MarkerPredicate, PigeonholeSmall, RandomCnf };

std::string_view family_name(Family f);
/// Throws std::invalid_argument on unknown names.
Family parse_family(std::string_view name);

struct GeneratedProblem {
  std::string name;
  std::string tptp;
  /// Marker family only: names of the clauses of the minimal proof.
  std::vector<std::string> proof_clauses;
};

/// {p1, ~p1 | p2, ..., ~p(n-1) | pn, ~pn} with the last clause as conjecture.
std::string chain_problem_text(std::size_t n);

/// Deterministic problem set; throws std::invalid_argument for size 0.
std::vector<GeneratedProblem> generate_family(Family f, std::size_t size, std::uint64_t seed);

struct Corpus {
  std::string name;
  std::string split;
  std::vector<std::filesystem::path> files;
  /// Problem name -> clause names of the oracle-minimal proof.
  std::map<std::string, std::vector<std::string>> proof_clauses;
};

/// Writes one `.p` file per problem plus `manifest.json` into `dir`.
Corpus write_corpus(const std::filesystem::path& dir, const std::string& name, Family f,
                    const std::vector<GeneratedProblem>& problems, std::uint64_t seed);

/// Accepts a manifest file, a directory holding `manifest.json`, a directory
/// of `.p` files or a single problem file. Throws std::runtime_error when a
/// file is missing or two problems share a name.
Corpus load_corpus(const std::filesystem::path& path);

std::vector<fol::Problem> load_problems(const Corpus& c);

/// Problem names listed by a corpus manifest (or found in a directory).
std::vector<std::string> problem_names(const Corpus& c);

}  // namespace saturn::harness
