#pragma once

// Finitely generated modules over the group ring of the cyclic group of odd
// prime order p, presented as free Z-lattices with an order-p automorphism.

#include "tatekit/intmat.hpp"

namespace tatekit {

void check_odd_prime(long p);

struct PiModule {
  long p = 3;
  int rank = 0;
  IntMatrix action;  // matrix of the chosen generator g; action^p = id

  bool operator==(const PiModule& o) const = default;
};

// The trivial module Z^k, the free module Z[pi]^k (block cyclic permutation
// action), and the norm quotient Z[pi]/N (companion matrix of 1+x+...+x^{p-1}).
PiModule trivial_module(long p, int k);
PiModule regular_module(long p, int k);
PiModule norm_quotient_module(long p);

void validate_module(const PiModule& M);

// Kronecker-product module structures. Tensor carries the diagonal action;
// hom carries conjugation, with hom matrices vectorized column-major so that
// vec(A X B) = kron(B^T, A) vec(X).
PiModule tensor_module(const PiModule& M, const PiModule& N);
PiModule hom_module(const PiModule& M, const PiModule& N);

IntMatrix action_inverse(const PiModule& M);
IntMatrix norm_matrix(const PiModule& M);  // sum of action^i over i < p

// Basis of the fixed sublattice (columns).
IntMatrix fixed_sublattice(const PiModule& M);

// Equivariance of f: M -> N, i.e. f * g_M = g_N * f.
bool is_equivariant(const PiModule& src, const PiModule& tgt, const IntMatrix& f);

// vec/unvec for hom_module coordinates: F is rank_N x rank_M.
std::vector<Int> vec_hom(const IntMatrix& F);
IntMatrix unvec_hom(const std::vector<Int>& v, int rank_tgt, int rank_src);

}  // namespace tatekit
