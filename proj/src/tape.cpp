#include "pcopt/tape.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "pcopt/error.hpp"
#include "pcopt/simd.hpp"

namespace pcopt {

Tape::Tape(const Expression& e, std::vector<std::string> inputs) : inputs_(std::move(inputs)) {
  for (const auto& name : e.identifiers()) {
    if (std::find(inputs_.begin(), inputs_.end(), name) == inputs_.end()) {
      throw InputError("undeclared identifier '" + name + "'");
    }
  }
  emit(e);
}

std::size_t Tape::emit(const Expression& e) {
  Instr ins{};
  switch (e.kind()) {
    case ExprKind::constant:
      ins.op = Op::constant;
      ins.value = e.value();
      break;
    case ExprKind::variable:
      ins.op = Op::input;
      ins.a = static_cast<std::size_t>(std::find(inputs_.begin(), inputs_.end(), e.name()) - inputs_.begin());
      break;
    case ExprKind::negate:
      ins.op = Op::neg;
      ins.a = emit(e.lhs());
      break;
    case ExprKind::power:
      ins.op = Op::pow;
      ins.a = emit(e.lhs());
      ins.exponent = e.exponent();
      break;
    default:
      ins.op = e.kind() == ExprKind::add        ? Op::add
               : e.kind() == ExprKind::subtract ? Op::sub
               : e.kind() == ExprKind::multiply ? Op::mul
                                                : Op::div;
      ins.a = emit(e.lhs());
      ins.b = emit(e.rhs());
      break;
  }
  ops_.push_back(ins);
  return ops_.size() - 1;
}

std::span<const double> Tape::forward(std::span<const double* const> columns, std::size_t lanes,
                                      Workspace& ws) const {
  if (columns.size() != inputs_.size()) throw InputError("Tape::forward: wrong number of input columns");
  const auto& K = simd::kernels();
  const std::size_t n = lanes;
  ws.lanes = n;
  ws.values.resize(ops_.size() * n);
  double* v = ws.values.data();
  for (std::size_t s = 0; s < ops_.size(); ++s) {
    const Instr& ins = ops_[s];
    double* out = v + s * n;
    const double* a = v + ins.a * n;
    const double* b = v + ins.b * n;
    switch (ins.op) {
      case Op::input:
        if (n != 0) std::memcpy(out, columns[ins.a], n * sizeof(double));
        break;
      case Op::constant:
        K.fill(ins.value, out, n);
        break;
      case Op::add:
        K.add(a, b, out, n);
        break;
      case Op::sub:
        K.sub(a, b, out, n);
        break;
      case Op::mul:
        K.mul(a, b, out, n);
        break;
      case Op::div:
        for (std::size_t l = 0; l < n; ++l) {
          if (b[l] == 0.0) throw NumericError("division by zero");
        }
        K.div(a, b, out, n);
        break;
      case Op::neg:
        K.neg(a, out, n);
        break;
      case Op::pow:
        K.powi(a, ins.exponent, out, n);
        break;
    }
  }
  const double* result = v + (ops_.size() - 1) * n;
  for (std::size_t l = 0; l < n; ++l) {
    if (!std::isfinite(result[l])) throw NumericError("expression is not finite at point " + std::to_string(l));
  }
  return {result, n};
}

void Tape::reverse(std::span<const double> seed, std::span<double* const> input_adjoints, Workspace& ws) const {
  const std::size_t n = ws.lanes;
  if (seed.size() != n) throw InputError("Tape::reverse: seed length mismatch");
  if (input_adjoints.size() != inputs_.size()) throw InputError("Tape::reverse: wrong number of adjoint columns");
  const auto& K = simd::kernels();
  ws.adjoints.assign(ops_.size() * n, 0.0);
  ws.scratch.resize(n);
  double* adj = ws.adjoints.data();
  const double* v = ws.values.data();
  double* tmp = ws.scratch.data();
  if (n != 0) std::memcpy(adj + (ops_.size() - 1) * n, seed.data(), n * sizeof(double));

  for (std::size_t s = ops_.size(); s-- > 0;) {
    const Instr& ins = ops_[s];
    const double* g = adj + s * n;
    double* ga = adj + ins.a * n;
    double* gb = adj + ins.b * n;
    const double* a = v + ins.a * n;
    const double* b = v + ins.b * n;
    switch (ins.op) {
      case Op::input:
        if (input_adjoints[ins.a] != nullptr) K.acc(g, input_adjoints[ins.a], n);
        break;
      case Op::constant:
        break;
      case Op::add:
        K.acc(g, ga, n);
        K.acc(g, gb, n);
        break;
      case Op::sub:
        K.acc(g, ga, n);
        K.dec(g, gb, n);
        break;
      case Op::mul:
        K.mul_acc(g, b, ga, n);
        K.mul_acc(g, a, gb, n);
        break;
      case Op::div:
        // d(a/b)/db = -(a/b)/b
        K.div_acc(g, b, ga, n);
        K.mul(g, v + s * n, tmp, n);
        K.div(tmp, b, tmp, n);
        K.dec(tmp, gb, n);
        break;
      case Op::neg:
        K.dec(g, ga, n);
        break;
      case Op::pow:
        if (ins.exponent == 0) break;
        K.powi(a, ins.exponent - 1, tmp, n);
        K.scale(static_cast<double>(ins.exponent), tmp, tmp, n);
        K.mul_acc(g, tmp, ga, n);
        break;
    }
  }
}

}  // namespace pcopt
