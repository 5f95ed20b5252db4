#pragma once

#include <string>

#include "truncmom/common.hpp"

namespace truncmom {

// The triple (beta, N, M) identifying a truncated ensemble: the top-left
// M x M block of a Haar matrix from O(N) (beta=1), U(N) (beta=2) or
// Sp(2N) (beta=4).
struct EnsembleSpec {
  int beta;     // Dyson index, one of {1, 2, 4}
  int n_total;  // N, size of the Haar matrix (quaternionic size for beta=4)
  int m_trunc;  // M, size of the principal sub-block, 1 <= M <= N

  EnsembleSpec(int beta_, int n_total_, int m_trunc_)
      : beta(beta_), n_total(n_total_), m_trunc(m_trunc_) {
    if (beta != 1 && beta != 2 && beta != 4)
      throw invalid_parameter("EnsembleSpec: beta must be 1, 2 or 4");
    if (n_total < 1)
      throw invalid_parameter("EnsembleSpec: N must be positive");
    if (m_trunc < 1 || m_trunc > n_total)
      throw invalid_parameter("EnsembleSpec: M must satisfy 1 <= M <= N");
  }

  int kappa() const { return n_total - m_trunc; }
  double mu() const { return static_cast<double>(m_trunc) / n_total; }
  double alpha() const { return 2.0 / beta; }
  double beta_prime() const { return 4.0 / beta; }

  // Size of the complex matrix representation: 2N for beta=4, else N.
  int rep_dim() const { return beta == 4 ? 2 * n_total : n_total; }
  int trunc_rep_dim() const { return beta == 4 ? 2 * m_trunc : m_trunc; }

  std::string label() const {
    return "beta=" + std::to_string(beta) + ",N=" + std::to_string(n_total) +
           ",M=" + std::to_string(m_trunc);
  }
};

}  // namespace truncmom
