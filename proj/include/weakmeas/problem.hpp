#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "weakmeas/hilbert.hpp"
#include "weakmeas/measurement.hpp"
#include "weakmeas/tolerances.hpp"

namespace weakmeas {

/// Input validation failure; each message is prefixed with the offending field path.
class InputError : public std::runtime_error {
 public:
  explicit InputError(std::vector<std::string> messages);

  const std::vector<std::string>& messages() const noexcept { return messages_; }

 private:
  std::vector<std::string> messages_;
};

struct EigenBasisChoice {};
struct ShuntedBasisChoice {};
struct RealRandomBasisChoice {
  std::uint64_t seed = 0;
};
using BasisChoice =
    std::variant<EigenBasisChoice, ShuntedBasisChoice, RealRandomBasisChoice, FinalBasis>;

/// A deserialized and validated problem description.
///
/// Document layout (complex numbers are [re, im] pairs):
///   dim          integer >= 2
///   observable   dim x dim matrix of pairs
///   state        dim pairs
///   model        optional {weights, correlations, labels?}; defaults to the binary +/- model
///   basis        "eigen" | "shunted" | {"real-random": seed} | list of dim vectors
///   epsilon, samples, seed   required only by `simulate`
struct ProblemSpec {
  std::size_t dim = 0;
  Observable observable;
  State state;
  MeasurementModel model;
  BasisChoice basis;
  std::optional<double> epsilon;
  std::optional<std::int64_t> samples;
  std::optional<std::uint64_t> seed;
  /// "sha256:<hex>" of the raw input text.
  std::string digest;
};

/// Parses and validates a problem document. Throws InputError listing every violation.
ProblemSpec parse_problem(std::string_view text, const Tolerances& tol = kDefaultTolerances);

/// Materializes the requested final basis. Construction errors become InputError on "basis".
FinalBasis resolve_basis(const ProblemSpec& problem, const Tolerances& tol = kDefaultTolerances);

std::string sha256_digest(std::string_view text);

}  // namespace weakmeas
