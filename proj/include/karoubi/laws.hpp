#pragma once

#include <string>
#include <vector>

#include "karoubi/theory.hpp"

namespace karoubi {

struct LawCheck {
  std::string law;
  bool pass = false;
  double max_residual = 0.0;
  int samples = 0;
};

struct LawReport {
  std::string theory;
  std::vector<LawCheck> checks;
  bool all_pass() const;
};

// Samples seeded random morphisms and verifies the algebraic laws the theory
// claims: category laws, the commutative-monoid structure of homsets,
// bilinearity of composition (and tensor) over sums, zero absorption,
// discard multiplicativity, tensor interchange, and adjoint involutivity
// where an adjoint exists. Failures land in the report, never as exceptions.
LawReport check_theory_laws(const std::shared_ptr<const Theory>& theory, std::uint64_t seed,
                            int samples, Tolerance tol, int size_cap = 3);

}  // namespace karoubi
