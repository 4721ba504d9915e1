#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "colorquant/cartan.hpp"

namespace cq {

// Input rejected before any computation. path is the JSON-pointer style
// location of the first offending node.
class SpecError : public Error {
 public:
  SpecError(std::string path, const std::string& message)
      : Error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct SpecOptions {
  std::uint32_t lambda_order = 2;
  std::uint32_t word_bound = 2;
  std::uint32_t degree_bound = 4;
};

struct BasisEntrySpec {
  std::string name;
  GroupElement degree;
};

struct BracketTermSpec {
  std::uint32_t k = 0;
  Scalar coeff;
};

// Ordered pair (i, j); entries are stored exactly as written, so a file can
// declare both orders and the checks see whatever it declared.
struct BracketEntrySpec {
  std::uint32_t i = 0;
  std::uint32_t j = 0;
  std::vector<BracketTermSpec> terms;
};

struct CobracketTermSpec {
  std::uint32_t j = 0;
  std::uint32_t k = 0;
  Scalar coeff;
};

struct CobracketEntrySpec {
  std::uint32_t i = 0;
  std::vector<CobracketTermSpec> terms;
};

// One tensor term: slot labels (basis names) and the series coefficients
// lambda^0, lambda^1, ...
struct TensorTermSpec {
  std::vector<std::string> indices;
  std::vector<Scalar> coeff;
};

struct AlgebraSpec {
  std::uint32_t conductor = 1;
  std::optional<GradingGroup> group;
  std::optional<std::vector<std::vector<Scalar>>> epsilon;
  std::optional<std::vector<BasisEntrySpec>> basis;
  std::vector<BracketEntrySpec> bracket;
  bool has_cobracket = false;
  std::vector<CobracketEntrySpec> cobracket;
  std::optional<std::vector<TensorTermSpec>> rmatrix;
  std::optional<CartanData> cartan;
  std::vector<std::vector<Scalar>> cartan_eps_consts;  // empty when absent
  SpecOptions options;
};

// Parses and shape-checks a spec document: unknown keys are rejected, all
// numerics are strings holding exact scalars, cross-section shapes (matrix
// sizes, index ranges, degree lengths) must line up, and a Cartan section
// must satisfy the rank cap and symmetrizability up front. Axioms that the
// verification pipelines own (factor antisymmetry, Jacobi, cocycle, ...) are
// not evaluated here.
AlgebraSpec parse_spec_text(const std::string& text);
AlgebraSpec load_spec_file(const std::string& path);

}  // namespace cq
