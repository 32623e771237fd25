#include "weakmeas/problem.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <openssl/evp.h>

#include "json.hpp"
#include "weakmeas/analysis.hpp"
#include "weakmeas/error.hpp"

namespace weakmeas {
namespace {

using nlohmann::json;

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += "\n";
    out += p;
  }
  return out;
}

class Collector {
 public:
  void add(const std::string& path, const std::string& message) {
    messages_.push_back(path + ": " + message);
  }
  bool empty() const { return messages_.empty(); }
  [[noreturn]] void raise() { throw InputError(std::move(messages_)); }
  void raise_if_any() {
    if (!empty()) raise();
  }

 private:
  std::vector<std::string> messages_;
};

std::optional<Complex> read_complex(const json& node, const std::string& path, Collector& errors) {
  if (!node.is_array() || node.size() != 2 || !node[0].is_number() || !node[1].is_number()) {
    errors.add(path, "expected [re, im] pair of numbers");
    return std::nullopt;
  }
  const Complex z(node[0].get<double>(), node[1].get<double>());
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    errors.add(path, "non-finite value");
    return std::nullopt;
  }
  return z;
}

std::optional<Vector> read_vector(const json& node, std::size_t dim, const std::string& path,
                                  Collector& errors) {
  if (!node.is_array() || node.size() != dim) {
    errors.add(path, "expected a list of " + std::to_string(dim) + " [re, im] pairs");
    return std::nullopt;
  }
  Vector v(static_cast<Eigen::Index>(dim));
  bool ok = true;
  for (std::size_t i = 0; i < dim; ++i) {
    const auto z = read_complex(node[i], path + "[" + std::to_string(i) + "]", errors);
    if (z) {
      v(static_cast<Eigen::Index>(i)) = *z;
    } else {
      ok = false;
    }
  }
  if (!ok) return std::nullopt;
  return v;
}

std::optional<std::vector<double>> read_reals(const json& node, const std::string& path,
                                              Collector& errors) {
  if (!node.is_array()) {
    errors.add(path, "expected a list of numbers");
    return std::nullopt;
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    if (!node[i].is_number() || !std::isfinite(node[i].get<double>())) {
      errors.add(path + "[" + std::to_string(i) + "]", "expected a finite number");
      return std::nullopt;
    }
    out.push_back(node[i].get<double>());
  }
  return out;
}

std::optional<std::uint64_t> read_seed(const json& node, const std::string& path,
                                       Collector& errors) {
  if (!node.is_number_unsigned() && !(node.is_number_integer() && node.get<std::int64_t>() >= 0)) {
    errors.add(path, "expected a non-negative integer seed");
    return std::nullopt;
  }
  return node.get<std::uint64_t>();
}

}  // namespace

InputError::InputError(std::vector<std::string> messages)
    : std::runtime_error(join(messages)), messages_(std::move(messages)) {}

std::string sha256_digest(std::string_view text) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 digest failed");
  }
  std::string hex = "sha256:";
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

ProblemSpec parse_problem(std::string_view text, const Tolerances& tol) {
  Collector errors;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    errors.add("document", std::string("parse error: ") + e.what());
    errors.raise();
  }
  if (!doc.is_object()) {
    errors.add("document", "expected an object");
    errors.raise();
  }

  std::size_t dim = 0;
  if (!doc.contains("dim") || !doc["dim"].is_number_integer() || doc["dim"].get<std::int64_t>() < 2) {
    errors.add("dim", "expected an integer >= 2");
    errors.raise();
  }
  dim = doc["dim"].get<std::size_t>();

  std::optional<Observable> observable;
  if (!doc.contains("observable") || !doc["observable"].is_array() ||
      doc["observable"].size() != dim) {
    errors.add("observable", "expected " + std::to_string(dim) + " rows");
  } else {
    Matrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    bool ok = true;
    for (std::size_t r = 0; r < dim; ++r) {
      const auto row = read_vector(doc["observable"][r], dim,
                                   "observable[" + std::to_string(r) + "]", errors);
      if (row) {
        m.row(static_cast<Eigen::Index>(r)) = row->transpose();
      } else {
        ok = false;
      }
    }
    if (ok) {
      try {
        observable = Observable::from_matrix(m, tol);
      } catch (const Error& e) {
        errors.add("observable", e.what());
      }
    }
  }

  std::optional<State> state;
  if (!doc.contains("state")) {
    errors.add("state", "missing");
  } else if (auto v = read_vector(doc["state"], dim, "state", errors)) {
    try {
      state = State::from_amplitudes(*v, tol);
    } catch (const Error& e) {
      errors.add("state", e.what());
    }
  }

  std::optional<MeasurementModel> model;
  if (!doc.contains("model") || doc["model"].is_null()) {
    model = MeasurementModel::binary();
  } else if (!doc["model"].is_object()) {
    errors.add("model", "expected an object with weights and correlations");
  } else {
    const json& node = doc["model"];
    auto weights = node.contains("weights") ? read_reals(node["weights"], "model.weights", errors)
                                            : std::nullopt;
    auto kappas = node.contains("correlations")
                      ? read_reals(node["correlations"], "model.correlations", errors)
                      : std::nullopt;
    if (!node.contains("weights")) errors.add("model.weights", "missing");
    if (!node.contains("correlations")) errors.add("model.correlations", "missing");
    std::vector<std::string> labels;
    if (node.contains("labels")) {
      if (!node["labels"].is_array()) {
        errors.add("model.labels", "expected a list of strings");
      } else {
        for (const auto& l : node["labels"]) {
          if (l.is_string()) {
            labels.push_back(l.get<std::string>());
          } else {
            errors.add("model.labels", "expected a list of strings");
            break;
          }
        }
      }
    }
    if (weights && kappas) {
      try {
        MeasurementModel candidate = labels.empty()
                                         ? MeasurementModel(*weights, *kappas)
                                         : MeasurementModel(labels, *weights, *kappas);
        const ModelValidation v = validate_model(candidate, tol);
        if (v.ok()) {
          model = std::move(candidate);
        } else {
          errors.add("model", "invariants violated: " + v.describe_failures());
        }
      } catch (const Error& e) {
        errors.add("model", e.what());
      }
    }
  }

  BasisChoice basis = EigenBasisChoice{};
  if (!doc.contains("basis")) {
    errors.add("basis", "missing");
  } else {
    const json& node = doc["basis"];
    if (node.is_string() && node.get<std::string>() == "eigen") {
      basis = EigenBasisChoice{};
    } else if (node.is_string() && node.get<std::string>() == "shunted") {
      basis = ShuntedBasisChoice{};
    } else if (node.is_object() && node.size() == 1 && node.contains("real-random")) {
      if (auto seed = read_seed(node["real-random"], "basis.real-random", errors)) {
        basis = RealRandomBasisChoice{*seed};
      }
    } else if (node.is_array()) {
      if (node.size() != dim) {
        errors.add("basis", "expected " + std::to_string(dim) + " vectors");
      } else {
        std::vector<State> vectors;
        for (std::size_t k = 0; k < dim; ++k) {
          const std::string path = "basis[" + std::to_string(k) + "]";
          if (auto v = read_vector(node[k], dim, path, errors)) {
            try {
              vectors.push_back(State::from_amplitudes(*v, tol));
            } catch (const Error& e) {
              errors.add(path, e.what());
            }
          }
        }
        if (vectors.size() == dim) {
          try {
            basis = FinalBasis::from_states(std::move(vectors), {}, tol);
          } catch (const Error& e) {
            errors.add("basis", e.what());
          }
        }
      }
    } else {
      errors.add("basis", R"(expected "eigen", "shunted", {"real-random": seed} or a vector list)");
    }
  }

  std::optional<double> epsilon;
  if (doc.contains("epsilon")) {
    if (!doc["epsilon"].is_number() || !std::isfinite(doc["epsilon"].get<double>())) {
      errors.add("epsilon", "expected a finite number");
    } else {
      epsilon = doc["epsilon"].get<double>();
    }
  }
  std::optional<std::int64_t> samples;
  if (doc.contains("samples")) {
    if (!doc["samples"].is_number_integer()) {
      errors.add("samples", "expected an integer");
    } else if (doc["samples"].get<std::int64_t>() < 1) {
      errors.add("samples", "samples must be >= 1");
    } else {
      samples = doc["samples"].get<std::int64_t>();
    }
  }
  std::optional<std::uint64_t> seed;
  if (doc.contains("seed")) seed = read_seed(doc["seed"], "seed", errors);

  errors.raise_if_any();
  return ProblemSpec{dim,     std::move(*observable), std::move(*state), std::move(*model),
                     std::move(basis), epsilon, samples, seed, sha256_digest(text)};
}

FinalBasis resolve_basis(const ProblemSpec& problem, const Tolerances& tol) {
  try {
    return std::visit(
        [&](const auto& choice) -> FinalBasis {
          using T = std::decay_t<decltype(choice)>;
          if constexpr (std::is_same_v<T, EigenBasisChoice>) {
            return eigenbasis_strategy(problem.observable);
          } else if constexpr (std::is_same_v<T, ShuntedBasisChoice>) {
            return shunted_basis(problem.observable, problem.state, tol);
          } else if constexpr (std::is_same_v<T, RealRandomBasisChoice>) {
            return real_random_basis(problem.observable, problem.state, choice.seed, tol);
          } else {
            return choice;
          }
        },
        problem.basis);
  } catch (const Error& e) {
    throw InputError({"basis: " + std::string(e.what())});
  }
}

}  // namespace weakmeas
