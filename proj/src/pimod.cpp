#include "tatekit/pimod.hpp"

namespace tatekit {

void check_odd_prime(long p) {
  check(p > 2, Errc::invalid_input, "p must be an odd prime (p > 2)");
  for (long d = 2; d * d <= p; ++d)
    check(p % d != 0, Errc::invalid_input, "p must be prime");
}

PiModule trivial_module(long p, int k) {
  check_odd_prime(p);
  return PiModule{p, k, IntMatrix::identity(k)};
}

PiModule regular_module(long p, int k) {
  check_odd_prime(p);
  int n = int(p) * k;
  IntMatrix A(n, n);
  for (int b = 0; b < k; ++b)
    for (int j = 0; j < p; ++j) A.at(b * p + (j + 1) % p, b * p + j) = 1;
  return PiModule{p, n, A};
}

PiModule norm_quotient_module(long p) {
  check_odd_prime(p);
  int n = int(p) - 1;
  IntMatrix A(n, n);
  for (int j = 0; j + 1 < n; ++j) A.at(j + 1, j) = 1;
  for (int i = 0; i < n; ++i) A.at(i, n - 1) = -1;
  return PiModule{p, n, A};
}

void validate_module(const PiModule& M) {
  check_odd_prime(M.p);
  check(M.action.rows == M.rank && M.action.cols == M.rank, Errc::shape_mismatch,
        "action shape");
  check(mat_pow(M.action, M.p) == IntMatrix::identity(M.rank), Errc::invalid_input,
        "action^p != identity");
}

PiModule tensor_module(const PiModule& M, const PiModule& N) {
  check(M.p == N.p, Errc::prime_mismatch, "tensor_module: prime mismatch");
  return PiModule{M.p, M.rank * N.rank, kron(M.action, N.action)};
}

PiModule hom_module(const PiModule& M, const PiModule& N) {
  check(M.p == N.p, Errc::prime_mismatch, "hom_module: prime mismatch");
  return PiModule{M.p, M.rank * N.rank,
                  kron(transpose(action_inverse(M)), N.action)};
}

IntMatrix action_inverse(const PiModule& M) {
  return mat_pow(M.action, M.p - 1);
}

IntMatrix norm_matrix(const PiModule& M) {
  IntMatrix N = IntMatrix::identity(M.rank);
  IntMatrix g = IntMatrix::identity(M.rank);
  for (long i = 1; i < M.p; ++i) {
    g = g * M.action;
    N = N + g;
  }
  return N;
}

IntMatrix fixed_sublattice(const PiModule& M) {
  return kernel_basis(M.action - IntMatrix::identity(M.rank));
}

bool is_equivariant(const PiModule& src, const PiModule& tgt, const IntMatrix& f) {
  return f * src.action == tgt.action * f;
}

std::vector<Int> vec_hom(const IntMatrix& F) {
  std::vector<Int> v(size_t(F.rows) * F.cols);
  for (int j = 0; j < F.cols; ++j)
    for (int i = 0; i < F.rows; ++i) v[size_t(j) * F.rows + i] = F.at(i, j);
  return v;
}

IntMatrix unvec_hom(const std::vector<Int>& v, int rank_tgt, int rank_src) {
  check(int(v.size()) == rank_tgt * rank_src, Errc::shape_mismatch, "unvec_hom size");
  IntMatrix F(rank_tgt, rank_src);
  for (int j = 0; j < rank_src; ++j)
    for (int i = 0; i < rank_tgt; ++i) F.at(i, j) = v[size_t(j) * rank_tgt + i];
  return F;
}

}  // namespace tatekit
