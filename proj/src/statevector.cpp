#include "qlue/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qlue/error.hpp"

namespace qlue::qc {

std::int64_t Register::raw(Basis b) const noexcept {
  const std::uint64_t v = bits(b);
  if (is_signed && width > 0 && (v >> (width - 1)) != 0) {
    return static_cast<std::int64_t>(v) - (std::int64_t{1} << width);
  }
  return static_cast<std::int64_t>(v);
}

double Register::value(Basis b) const noexcept { return std::ldexp(static_cast<double>(raw(b)), -frac_bits); }

Basis Register::with(Basis b, std::int64_t raw_value) const noexcept {
  const Basis low = (Basis{1} << width) - 1;
  return (b & ~mask()) | ((static_cast<Basis>(raw_value) & low) << offset);
}

std::uint64_t Register::encode(double v) const noexcept {
  const auto raw_value = static_cast<std::int64_t>(std::nearbyint(std::ldexp(v, frac_bits)));
  return static_cast<std::uint64_t>(raw_value) & ((Basis{1} << width) - 1);
}

StateVector::StateVector(unsigned n_qubits) : n_(n_qubits) {
  if (n_qubits == 0 || n_qubits > kMaxQubits) {
    throw Error(ErrorCode::InvalidInput, "qubit count must lie in [1, 22], got " + std::to_string(n_qubits));
  }
  amps_.assign(std::size_t{1} << n_qubits, Amplitude{0.0, 0.0});
  amps_[0] = 1.0;
}

void StateVector::set_basis(Basis b) {
  if (b >= dim()) throw Error(ErrorCode::IndexOutOfRange, "basis state out of range");
  std::fill(amps_.begin(), amps_.end(), Amplitude{});
  amps_[b] = 1.0;
}

void StateVector::set_superposition(std::span<const Basis> states) {
  if (states.empty()) throw Error(ErrorCode::InvalidInput, "empty superposition");
  std::fill(amps_.begin(), amps_.end(), Amplitude{});
  const double a = 1.0 / std::sqrt(static_cast<double>(states.size()));
  for (Basis b : states) {
    if (b >= dim()) throw Error(ErrorCode::IndexOutOfRange, "basis state out of range");
    amps_[b] += a;
  }
}

double StateVector::norm() const noexcept {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

std::vector<double> StateVector::probabilities() const {
  std::vector<double> p(amps_.size());
  for (std::size_t i = 0; i < amps_.size(); ++i) p[i] = std::norm(amps_[i]);
  return p;
}

void StateVector::after_gate() {
  ++gates_;
  if (check_norm_ && std::fabs(norm() - 1.0) > 1e-12) {
    throw Error(ErrorCode::ContractViolation, "state norm drifted after gate " + std::to_string(gates_));
  }
}

void StateVector::x(unsigned q) {
  const Basis bit = Basis{1} << q;
  for (Basis b = 0; b < dim(); ++b) {
    if ((b & bit) == 0) std::swap(amps_[b], amps_[b | bit]);
  }
  after_gate();
}

void StateVector::z(unsigned q) {
  const Basis bit = Basis{1} << q;
  for (Basis b = 0; b < dim(); ++b) {
    if (b & bit) amps_[b] = -amps_[b];
  }
  after_gate();
}

void StateVector::mcz(std::span<const unsigned> qubits) {
  Basis controls = 0;
  for (unsigned q : qubits) controls |= Basis{1} << q;
  for (Basis b = 0; b < dim(); ++b) {
    if ((b & controls) == controls) amps_[b] = -amps_[b];
  }
  after_gate();
}

void StateVector::phase_flip(const std::function<bool(Basis)>& marked) {
  for (Basis b = 0; b < dim(); ++b) {
    if (amps_[b] != Amplitude{} && marked(b)) amps_[b] = -amps_[b];
  }
  after_gate();
}

void StateVector::permute(const std::function<Basis(Basis)>& f) {
  scratch_.assign(amps_.size(), Amplitude{});
  std::vector<std::uint8_t> written(amps_.size(), 0);
  for (Basis b = 0; b < dim(); ++b) {
    if (amps_[b] == Amplitude{}) continue;
    const Basis target = f(b);
    if (target >= dim() || written[target]) {
      throw Error(ErrorCode::ContractViolation, "basis map is not injective on the state's support");
    }
    written[target] = 1;
    scratch_[target] = amps_[b];
  }
  amps_.swap(scratch_);
  after_gate();
}

void StateVector::reflect_about_uniform(unsigned offset, unsigned width, std::uint64_t domain_size) {
  const std::uint64_t full = std::uint64_t{1} << width;
  const Basis reg_mask = (full - 1) << offset;
  for (Basis rest = 0; rest < dim(); ++rest) {
    if (rest & reg_mask) continue;
    Amplitude sum{};
    for (std::uint64_t v = 0; v < domain_size; ++v) sum += amps_[rest | (v << offset)];
    const Amplitude twice_mean = 2.0 * sum / static_cast<double>(domain_size);
    for (std::uint64_t v = 0; v < full; ++v) {
      auto& a = amps_[rest | (v << offset)];
      a = v < domain_size ? twice_mean - a : -a;
    }
  }
  after_gate();
}

void apply_diffusion(StateVector& state, const Register& search, std::uint64_t domain_size) {
  const std::uint64_t full = std::uint64_t{1} << search.width;
  const std::uint64_t m = domain_size == 0 ? full : domain_size;
  if (m > full) throw Error(ErrorCode::InvalidInput, "diffusion domain exceeds register size");
  state.reflect_about_uniform(search.offset, search.width, m);
}

namespace {

void require_zero(const StateVector& state, const Register& dst) {
  const auto amps = state.amplitudes();
  for (Basis b = 0; b < state.dim(); ++b) {
    if (amps[b] != Amplitude{} && dst.bits(b) != 0) {
      throw Error(ErrorCode::ContractViolation, "destination register is not |0>");
    }
  }
}

void require_disjoint(const Register& a, const Register& b) {
  if ((a.mask() & b.mask()) != 0) throw Error(ErrorCode::InvalidInput, "registers overlap");
}

std::int64_t product_raw(const Register& a, const Register& b, const Register& dst, Basis s) {
  const int shift = a.frac_bits + b.frac_bits - dst.frac_bits;
  if (shift < 0) throw Error(ErrorCode::InvalidInput, "destination has more fractional bits than the product");
  return (a.raw(s) * b.raw(s)) >> shift;
}

}  // namespace

void apply_add(StateVector& state, const Register& a, const Register& b, const Register& dst) {
  if (a.frac_bits != dst.frac_bits || b.frac_bits != dst.frac_bits) {
    throw Error(ErrorCode::InvalidInput, "add operands must share fractional bits");
  }
  require_disjoint(a, dst);
  require_disjoint(b, dst);
  require_zero(state, dst);
  state.permute([&](Basis s) { return dst.with(s, static_cast<std::int64_t>(dst.bits(s)) ^ (a.raw(s) + b.raw(s))); });
}

void apply_mul(StateVector& state, const Register& a, const Register& b, const Register& dst) {
  require_disjoint(a, dst);
  require_disjoint(b, dst);
  require_zero(state, dst);
  state.permute(
      [&](Basis s) { return dst.with(s, static_cast<std::int64_t>(dst.bits(s)) ^ product_raw(a, b, dst, s)); });
}

void apply_negate(StateVector& state, const Register& reg) {
  state.permute([&](Basis s) { return reg.with(s, -reg.raw(s)); });
}

void apply_add_in_place(StateVector& state, const Register& target, const Register& src, int sign) {
  require_disjoint(target, src);
  state.permute([&](Basis s) { return target.with(s, target.raw(s) + sign * src.raw(s)); });
}

void apply_mul_add_in_place(StateVector& state, const Register& target, const Register& a, const Register& b,
                            int sign) {
  require_disjoint(target, a);
  require_disjoint(target, b);
  state.permute([&](Basis s) { return target.with(s, target.raw(s) + sign * product_raw(a, b, target, s)); });
}

void apply_less_than(StateVector& state, const Register& src, double threshold, unsigned flag_qubit) {
  const Basis flag = Basis{1} << flag_qubit;
  if (src.mask() & flag) throw Error(ErrorCode::InvalidInput, "flag qubit overlaps the compared register");
  state.permute([&](Basis s) { return src.value(s) < threshold ? s ^ flag : s; });
}

DistanceOracleLayout DistanceOracleLayout::make(unsigned dims, unsigned coord_bits) {
  if (dims == 0 || coord_bits == 0) throw Error(ErrorCode::InvalidInput, "empty oracle layout");
  DistanceOracleLayout layout;
  unsigned next = 0;
  for (unsigned k = 0; k < dims; ++k) {
    layout.candidate.push_back(Register{next, coord_bits + 1, true, 0});
    next += coord_bits + 1;
  }
  for (unsigned k = 0; k < dims; ++k) {
    layout.base.push_back(Register{next, coord_bits, false, 0});
    next += coord_bits;
  }
  const std::uint64_t max_coord = (std::uint64_t{1} << coord_bits) - 1;
  const std::uint64_t max_sum = dims * max_coord * max_coord;
  unsigned acc_bits = 1;
  while ((std::uint64_t{1} << acc_bits) <= max_sum) ++acc_bits;
  layout.accumulator = Register{next, acc_bits, false, 0};
  next += acc_bits;
  layout.sign_qubit = next;
  if (layout.n_qubits() > kMaxQubits) {
    throw Error(ErrorCode::InvalidInput, "distance oracle needs " + std::to_string(layout.n_qubits()) + " qubits");
  }
  return layout;
}

void distance_oracle(StateVector& state, const DistanceOracleLayout& layout, double d_c) {
  const std::size_t dims = layout.candidate.size();
  const double threshold = d_c * d_c;
  // Differences x_i - x_j overwrite the candidate registers.
  for (std::size_t k = 0; k < dims; ++k) apply_add_in_place(state, layout.candidate[k], layout.base[k], -1);
  for (std::size_t k = 0; k < dims; ++k) {
    apply_mul_add_in_place(state, layout.accumulator, layout.candidate[k], layout.candidate[k], +1);
  }
  apply_less_than(state, layout.accumulator, threshold, layout.sign_qubit);
  state.z(layout.sign_qubit);
  // Uncompute in reverse.
  apply_less_than(state, layout.accumulator, threshold, layout.sign_qubit);
  for (std::size_t k = dims; k-- > 0;) {
    apply_mul_add_in_place(state, layout.accumulator, layout.candidate[k], layout.candidate[k], -1);
  }
  for (std::size_t k = dims; k-- > 0;) apply_add_in_place(state, layout.candidate[k], layout.base[k], +1);
}

void membership_oracle(StateVector& state, const Register& index, std::span<const std::uint64_t> members) {
  std::vector<unsigned> qubits(index.width);
  for (unsigned q = 0; q < index.width; ++q) qubits[q] = index.offset + q;
  for (std::uint64_t m : members) {
    if (m >> index.width) throw Error(ErrorCode::IndexOutOfRange, "member index exceeds register width");
    for (unsigned q = 0; q < index.width; ++q) {
      if (((m >> q) & 1) == 0) state.x(qubits[q]);
    }
    state.mcz(qubits);
    for (unsigned q = 0; q < index.width; ++q) {
      if (((m >> q) & 1) == 0) state.x(qubits[q]);
    }
  }
}

std::vector<double> grover_statevector(std::uint64_t domain_size, std::span<const std::uint64_t> marked,
                                       unsigned iterations) {
  if (domain_size == 0) throw Error(ErrorCode::EmptyDomain, "Grover search over an empty domain");
  unsigned n = 1;
  while ((std::uint64_t{1} << n) < domain_size) ++n;
  StateVector state(n);
  std::vector<Basis> uniform(domain_size);
  for (std::uint64_t i = 0; i < domain_size; ++i) uniform[i] = i;
  state.set_superposition(uniform);

  std::vector<std::uint8_t> is_marked(state.dim(), 0);
  for (std::uint64_t m : marked) {
    if (m >= domain_size) throw Error(ErrorCode::IndexOutOfRange, "marked item outside the domain");
    is_marked[m] = 1;
  }
  const Register search{0, n, false, 0};
  for (unsigned r = 0; r < iterations; ++r) {
    state.phase_flip([&](Basis b) { return is_marked[b] != 0; });
    apply_diffusion(state, search, domain_size);
  }
  return state.probabilities();
}

double grover_success_probability(std::uint64_t domain_size, std::span<const std::uint64_t> marked,
                                  unsigned iterations) {
  const auto p = grover_statevector(domain_size, marked, iterations);
  double s = 0.0;
  std::vector<std::uint64_t> sorted(marked.begin(), marked.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (std::uint64_t m : sorted) s += p[m];
  return s;
}

}  // namespace qlue::qc
