#include "wgqed/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace wgqed {

namespace {
constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;
}

DickePair dicke_from_bare(const AmplitudePair& pair) {
  return {(pair.B1 + pair.B2) * kInvSqrt2, (pair.B1 - pair.B2) * kInvSqrt2};
}

AmplitudePair bare_from_dicke(const DickePair& pair) {
  return {(pair.Cs + pair.Ca) * kInvSqrt2, (pair.Cs - pair.Ca) * kInvSqrt2};
}

double concurrence(const AmplitudePair& pair) {
  return std::max(0.0, 2.0 * std::abs(pair.B1 * std::conj(pair.B2)));
}

double population(const AmplitudePair& pair) {
  return std::norm(pair.B1) + std::norm(pair.B2);
}

}  // namespace wgqed
