#include <doctest.h>

#include <cmath>
#include <vector>

#include "qlue/error.hpp"
#include "qlue/statevector.hpp"

using namespace qlue;
using namespace qlue::qc;

namespace {

double closed_form(std::uint64_t m, std::uint64_t k, unsigned r) {
  const double theta = std::asin(std::sqrt(static_cast<double>(k) / static_cast<double>(m)));
  const double s = std::sin((2.0 * r + 1.0) * theta);
  return s * s;
}

// Uniform superposition over every (a, b) pair with dst = 0.
StateVector all_pairs(const Register& a, const Register& b, unsigned n) {
  StateVector s(n);
  std::vector<Basis> states;
  for (std::uint64_t x = 0; x < (1u << a.width); ++x) {
    for (std::uint64_t y = 0; y < (1u << b.width); ++y) states.push_back(b.with(a.with(0, x), y));
  }
  s.set_superposition(states);
  return s;
}

std::int64_t wrap(std::int64_t v, unsigned width, bool is_signed) {
  const std::int64_t mod = std::int64_t{1} << width;
  v = ((v % mod) + mod) % mod;
  if (is_signed && v >= mod / 2) v -= mod;
  return v;
}

}  // namespace

TEST_CASE("register encoding") {
  Register r{2, 4, true, 1};
  const Basis b = r.with(0, r.encode(-1.5));
  CHECK(r.raw(b) == -3);
  CHECK(r.value(b) == -1.5);
  CHECK(r.bits(b) == 13);
  Register u{0, 3, false, 0};
  CHECK(u.raw(u.with(0, 7)) == 7);
}

TEST_CASE("qubit limits") {
  CHECK_THROWS_AS(StateVector(0), Error);
  CHECK_THROWS_AS(StateVector(23), Error);
  StateVector s(3);
  CHECK_THROWS_AS(s.set_basis(8), Error);
}

TEST_CASE("diffusion is the reflection about the uniform state") {
  StateVector s(3);
  s.set_basis(5);
  apply_diffusion(s, Register{0, 3, false, 0});
  for (Basis b = 0; b < 8; ++b) CHECK(s[b].real() == doctest::Approx(b == 5 ? 2.0 / 8 - 1 : 2.0 / 8));
  // Uniform state is a fixed point.
  std::vector<Basis> all{0, 1, 2, 3, 4, 5, 6, 7};
  s.set_superposition(all);
  apply_diffusion(s, Register{0, 3, false, 0});
  for (Basis b = 0; b < 8; ++b) CHECK(s[b].real() == doctest::Approx(1.0 / std::sqrt(8.0)));
  // Restricted domain leaves states outside it negated.
  s.set_basis(6);
  apply_diffusion(s, Register{0, 3, false, 0}, 5);
  CHECK(s[6].real() == doctest::Approx(-1.0));
}

TEST_CASE("single-qubit and multi-controlled gates") {
  StateVector s(3);
  s.set_basis(0);
  s.x(1);
  CHECK(std::abs(s[2] - Amplitude(1.0)) < 1e-15);
  s.x(0);
  std::vector<unsigned> q{0, 1};
  s.mcz(q);
  CHECK(std::abs(s[3] + Amplitude(1.0)) < 1e-15);
  s.z(0);
  CHECK(std::abs(s[3] - Amplitude(1.0)) < 1e-15);
}

TEST_CASE("add and mul are exact for every input up to five bits") {
  for (unsigned w = 1; w <= 5; ++w) {
    for (bool sgn : {false, true}) {
      const Register a{0, w, sgn, 0};
      const Register b{w, w, sgn, 0};
      const Register sum{2 * w, w + 1, sgn, 0};
      auto s = all_pairs(a, b, 3 * w + 1);
      apply_add(s, a, b, sum);
      std::size_t populated = 0;
      for (Basis x = 0; x < s.dim(); ++x) {
        if (std::abs(s[x]) < 1e-12) continue;
        ++populated;
        CHECK(sum.raw(x) == wrap(a.raw(x) + b.raw(x), w + 1, sgn));
      }
      CHECK(populated == (std::size_t{1} << (2 * w)));

      const Register prod{2 * w, 2 * w, sgn, 0};
      auto p = all_pairs(a, b, 4 * w);
      apply_mul(p, a, b, prod);
      for (Basis x = 0; x < p.dim(); ++x) {
        if (std::abs(p[x]) < 1e-12) continue;
        CHECK(prod.raw(x) == wrap(a.raw(x) * b.raw(x), 2 * w, sgn));
      }
    }
  }
}

TEST_CASE("add into a non-zero destination violates the contract") {
  StateVector s(6);
  const Register a{0, 2, false, 0}, b{2, 2, false, 0}, dst{4, 2, false, 0};
  s.set_basis(dst.with(0, 1));
  CHECK_THROWS_AS(apply_add(s, a, b, dst), Error);
}

TEST_CASE("negate, in-place add and less-than") {
  const Register r{0, 4, true, 0};
  const Register src{4, 3, false, 0};
  for (std::int64_t v = -8; v < 8; ++v) {
    for (std::int64_t u = 0; u < 8; ++u) {
      StateVector s(8);
      s.set_basis(src.with(r.with(0, v), u));
      apply_negate(s, r);
      apply_add_in_place(s, r, src, -1);
      apply_less_than(s, r, 0.5, 7);
      Basis where = 0;
      for (Basis x = 0; x < s.dim(); ++x) {
        if (std::abs(s[x]) > 0.5) where = x;
      }
      const std::int64_t expect = wrap(-v - u, 4, true);
      CHECK(r.raw(where) == expect);
      CHECK(src.raw(where) == u);
      CHECK(((where >> 7) & 1) == (expect < 0.5 ? 1u : 0u));
    }
  }
}

TEST_CASE("distance oracle layout fits the simulator") {
  const auto layout = DistanceOracleLayout::make(2, 3);
  CHECK(layout.n_qubits() == 22);
  CHECK_THROWS_AS(DistanceOracleLayout::make(3, 3), Error);
}

TEST_CASE("distance oracle marks close pairs in one dimension") {
  const auto layout = DistanceOracleLayout::make(1, 3);
  std::vector<Basis> inputs;
  for (std::int64_t x = 0; x < 8; ++x) {
    for (std::int64_t y = 0; y < 8; ++y) inputs.push_back(layout.base[0].with(layout.candidate[0].with(0, x), y));
  }
  StateVector s(layout.n_qubits());
  s.set_superposition(inputs);
  distance_oracle(s, layout, 2.5);
  const double amp = 1.0 / 8.0;
  for (Basis b : inputs) {
    const auto d = layout.candidate[0].raw(b) - layout.base[0].raw(b);
    CHECK(s[b].real() == doctest::Approx(d * d < 6.25 ? -amp : amp));
  }
  double leak = 0.0;
  for (Basis b = 0; b < s.dim(); ++b) leak += std::norm(s[b]);
  CHECK(leak == doctest::Approx(1.0));
}

TEST_CASE("membership oracle flips exactly the members") {
  const Register idx{0, 3, false, 0};
  std::vector<std::uint64_t> members{1, 4, 6};
  StateVector s(3);
  std::vector<Basis> all{0, 1, 2, 3, 4, 5, 6, 7};
  s.set_superposition(all);
  membership_oracle(s, idx, members);
  for (Basis b = 0; b < 8; ++b) {
    const bool member = b == 1 || b == 4 || b == 6;
    CHECK(s[b].real() == doctest::Approx(member ? -1.0 / std::sqrt(8.0) : 1.0 / std::sqrt(8.0)));
  }
  std::vector<std::uint64_t> bad{8};
  CHECK_THROWS_AS(membership_oracle(s, idx, bad), Error);
}

TEST_CASE("statevector Grover matches the closed form") {
  std::vector<std::uint64_t> one{3};
  CHECK(grover_success_probability(8, one, 2) == doctest::Approx(0.9453).epsilon(1e-4));
  CHECK(grover_success_probability(16, one, 3) == doctest::Approx(0.9613).epsilon(1e-4));
  for (std::uint64_t m : {2u, 6u, 12u, 32u}) {
    for (std::uint64_t k = 0; k <= m; k += std::max<std::uint64_t>(1, m / 4)) {
      std::vector<std::uint64_t> marked;
      for (std::uint64_t i = 0; i < k; ++i) marked.push_back(i);
      for (unsigned r = 0; r <= 6; ++r) {
        CHECK(std::abs(grover_success_probability(m, marked, r) - closed_form(m, k, r)) < 1e-9);
      }
    }
  }
  CHECK_THROWS_AS(grover_statevector(0, one, 1), Error);
  CHECK_THROWS_AS(grover_statevector(3, one, 1), Error);
}
