#pragma once

// An Expression compiled to a flat instruction list and evaluated over a batch
// of points at once (one lane per quadrature node or sample), with a reverse
// sweep for gradients. All arithmetic goes through the SIMD kernel table.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pcopt/expr.hpp"

namespace pcopt {

class Tape {
 public:
  /// inputs names the batch columns in the order they are passed to
  /// forward(); every identifier of e must be among them.
  Tape(const Expression& e, std::vector<std::string> inputs);

  std::size_t num_inputs() const noexcept { return inputs_.size(); }
  const std::vector<std::string>& inputs() const noexcept { return inputs_; }
  std::size_t num_slots() const noexcept { return ops_.size(); }

  /// Scratch space for one evaluation; reuse across calls to avoid
  /// reallocation. Not shareable between threads.
  struct Workspace {
    std::size_t lanes = 0;
    std::vector<double> values;
    std::vector<double> adjoints;
    std::vector<double> scratch;
  };

  /// Evaluate at `lanes` points. columns[i] points at `lanes` values of input i.
  /// Returns the output lane values (valid until the workspace is reused).
  /// Throws NumericError on division by zero or a non-finite result.
  std::span<const double> forward(std::span<const double* const> columns, std::size_t lanes,
                                  Workspace& ws) const;

  /// After forward(): accumulate seed[l] * d(output)/d(input i) at lane l into
  /// input_adjoints[i][l] for every input i whose pointer is non-null.
  void reverse(std::span<const double> seed, std::span<double* const> input_adjoints, Workspace& ws) const;

 private:
  enum class Op { input, constant, add, sub, mul, div, neg, pow };
  struct Instr {
    Op op;
    std::size_t a = 0;  // operand slot, or input index for Op::input
    std::size_t b = 0;
    double value = 0.0;
    unsigned exponent = 0;
  };

  std::size_t emit(const Expression& e);

  std::vector<std::string> inputs_;
  std::vector<Instr> ops_;
};

}  // namespace pcopt
