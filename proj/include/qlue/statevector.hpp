#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace qlue::qc {

using Amplitude = std::complex<double>;
using Basis = std::uint64_t;

inline constexpr unsigned kMaxQubits = 22;

/// Contiguous block of qubits read as a fixed-point number: `width` bits,
/// `frac_bits` of them fractional, two's complement when `is_signed`.
struct Register {
  unsigned offset = 0;
  unsigned width = 0;
  bool is_signed = false;
  int frac_bits = 0;

  Basis mask() const noexcept { return ((Basis{1} << width) - 1) << offset; }
  /// Raw bit pattern held by this register in basis state `b`.
  std::uint64_t bits(Basis b) const noexcept { return (b >> offset) & ((Basis{1} << width) - 1); }
  /// Signed raw integer (value * 2^frac_bits).
  std::int64_t raw(Basis b) const noexcept;
  double value(Basis b) const noexcept;
  /// `b` with this register's bits replaced by the low `width` bits of `raw`.
  Basis with(Basis b, std::int64_t raw) const noexcept;
  /// Encodes a real value (rounded to nearest) into `width` bits.
  std::uint64_t encode(double v) const noexcept;
};

/// Dense amplitude vector over n <= 22 qubits; qubit q is bit q of the basis index.
class StateVector {
 public:
  explicit StateVector(unsigned n_qubits);

  unsigned n_qubits() const noexcept { return n_; }
  std::size_t dim() const noexcept { return amps_.size(); }
  std::span<const Amplitude> amplitudes() const noexcept { return amps_; }
  std::span<Amplitude> amplitudes() noexcept { return amps_; }
  Amplitude operator[](Basis b) const { return amps_[b]; }

  void set_basis(Basis b);
  /// Equal-weight superposition over the given basis states.
  void set_superposition(std::span<const Basis> states);

  double norm() const noexcept;
  std::vector<double> probabilities() const;

  /// When enabled every operation verifies the 2-norm stays 1 within 1e-12.
  void set_norm_check(bool on) noexcept { check_norm_ = on; }

  void x(unsigned q);
  void z(unsigned q);
  /// Phase -1 on basis states where every listed qubit is 1.
  void mcz(std::span<const unsigned> qubits);
  /// Phase -1 wherever `marked(b)` holds.
  void phase_flip(const std::function<bool(Basis)>& marked);

  /// b -> f(b) on the support of the state. Throws ContractViolation if two
  /// populated basis states collide.
  void permute(const std::function<Basis(Basis)>& f);

  /// 2|psi><psi| - I on qubits [offset, offset + width), |psi> uniform over
  /// the first `domain_size` values.
  void reflect_about_uniform(unsigned offset, unsigned width, std::uint64_t domain_size);

  std::size_t gates_applied() const noexcept { return gates_; }

 private:
  void after_gate();

  unsigned n_;
  std::vector<Amplitude> amps_;
  std::vector<Amplitude> scratch_;
  bool check_norm_ = false;
  std::size_t gates_ = 0;
};

/// Reflection 2|psi><psi| - I on `search`, where |psi> is uniform over the
/// first `domain_size` register values (0 selects the full register).
void apply_diffusion(StateVector& state, const Register& search, std::uint64_t domain_size = 0);

/// dst ^= a + b (fixed point, wrapping to dst width). dst must hold |0>.
void apply_add(StateVector& state, const Register& a, const Register& b, const Register& dst);
/// dst ^= a * b (fixed point, wrapping to dst width). dst must hold |0>.
void apply_mul(StateVector& state, const Register& a, const Register& b, const Register& dst);

/// F gate: two's-complement negation of a signed register.
void apply_negate(StateVector& state, const Register& reg);
/// target <- target + sign * src (mod 2^width), in place.
void apply_add_in_place(StateVector& state, const Register& target, const Register& src, int sign = +1);
/// target <- target + sign * a * b (mod 2^width), in place; target must differ from a, b.
void apply_mul_add_in_place(StateVector& state, const Register& target, const Register& a, const Register& b,
                            int sign = +1);
/// flag ^= [value(src) < threshold].
void apply_less_than(StateVector& state, const Register& src, double threshold, unsigned flag_qubit);

/// Qubit layout of the distance-threshold oracle for two points.
struct DistanceOracleLayout {
  std::vector<Register> candidate;  // signed, coord_bits + 1 wide; overwritten then restored
  std::vector<Register> base;       // unsigned, coord_bits wide
  Register accumulator;             // sum of squared differences
  unsigned sign_qubit = 0;

  unsigned n_qubits() const noexcept { return sign_qubit + 1; }

  /// Packs registers for `dims` coordinates of `coord_bits` bits each.
  static DistanceOracleLayout make(unsigned dims, unsigned coord_bits);
};

/// Phase -1 exactly on basis states whose candidate/base pair satisfies
/// |x_i - x_j|^2 < d_c^2; all work registers are returned to |0>.
void distance_oracle(StateVector& state, const DistanceOracleLayout& layout, double d_c);

/// Phase -1 exactly on index values in `members`, built from X and C^nZ gates.
void membership_oracle(StateVector& state, const Register& index, std::span<const std::uint64_t> members);

/// Measurement distribution after `iterations` oracle+diffusion rounds over a
/// uniform superposition of `domain_size` items (padded to a power of two).
std::vector<double> grover_statevector(std::uint64_t domain_size, std::span<const std::uint64_t> marked,
                                       unsigned iterations);

/// Probability mass on `marked` from grover_statevector.
double grover_success_probability(std::uint64_t domain_size, std::span<const std::uint64_t> marked,
                                  unsigned iterations);

}  // namespace qlue::qc
