#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "lpcond/pmf.hpp"

namespace lpcond {

// Law of d_{l,l-1}, the total displacement of l-1 balls hashed uniformly into
// l circular urns. Computed from the parking-function decomposition on the
// position of the last empty urn: with f_n the probability generating
// function for n balls in n+1 urns,
//
//   f_{n+1}(z) = sum_k w_{n,k} f_k(z) f_{n-k}(z) u_k(z),
//   w_{n,k} = C(n,k) (k+1)^k (n-k+1)^{n-k-1} / (n+2)^n,
//
// where u_k is the generating function of the uniform law on {0..k}. The law
// of d_{l,l-1} is f_{l-1}. All routines below evaluate this recursion in a
// different algebra.

/// Largest l for which the full law is materialized.
inline constexpr std::int64_t kMaxFullDisplacementLaw = 64;

/// Full law of d_{l,l-1}, 1 <= l <= kMaxFullDisplacementLaw. Cached.
Pmf displacement_law(std::int64_t l);

/// Dense probabilities P(d_{l,l-1} = j) for j < cap, one row per l in
/// [0, max_l] (row 0 is empty). Rows are shorter than cap when the support
/// ends earlier.
std::vector<std::vector<double>> displacement_low_laws(std::int64_t max_l, std::size_t cap);

/// E exp(i t d_{l,l-1}) for l in [0, max_l] (entry 0 is unused and set to 1).
std::vector<std::complex<double>> displacement_cfs(std::int64_t max_l, double t);

struct RawMoments {
  double m1 = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;
};

/// First three raw moments of d_{l,l-1} for l in [0, max_l]. Cached.
std::vector<RawMoments> displacement_moments(std::int64_t max_l);

/// E|d_{l,l-1} - c|^3 from raw moments plus the low coefficients below c.
/// `low` must hold P(d = j) for every j < c, or the whole law.
double displacement_abs_central3(const RawMoments& mom, const std::vector<double>& low, double c);

}  // namespace lpcond
