#pragma once

#include <complex>

namespace wgqed {

/// Rotating-frame amplitudes of |e g> and |g e>.
struct AmplitudePair {
  std::complex<double> B1;
  std::complex<double> B2;
};

/// Amplitudes of (|e g> +- |g e>) / sqrt 2.
struct DickePair {
  std::complex<double> Cs;
  std::complex<double> Ca;
};

DickePair dicke_from_bare(const AmplitudePair& pair);
AmplitudePair bare_from_dicke(const DickePair& pair);

/// max(0, 2 |B1 B2*|), the concurrence of the single-excitation X state.
double concurrence(const AmplitudePair& pair);

/// Probability that one of the emitters is excited, |B1|^2 + |B2|^2.
double population(const AmplitudePair& pair);

}  // namespace wgqed
