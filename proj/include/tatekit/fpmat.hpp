#pragma once

// Dense linear algebra over the prime field F_p, p a small odd prime.

#include <vector>

#include "tatekit/intmat.hpp"

namespace tatekit {

struct FpMatrix {
  long p = 3;
  int rows = 0;
  int cols = 0;
  std::vector<long> a;  // row-major, entries in [0, p)

  FpMatrix() = default;
  FpMatrix(long p_, int r, int c) : p(p_), rows(r), cols(c), a(size_t(r) * c, 0) {}

  long& at(int i, int j) { return a[size_t(i) * cols + j]; }
  long at(int i, int j) const { return a[size_t(i) * cols + j]; }

  static FpMatrix identity(long p, int n);
  static FpMatrix from_int(const IntMatrix& M, long p);
  bool is_zero() const;
  bool operator==(const FpMatrix& o) const = default;
};

FpMatrix operator*(const FpMatrix& A, const FpMatrix& B);
FpMatrix operator+(const FpMatrix& A, const FpMatrix& B);
FpMatrix operator-(const FpMatrix& A, const FpMatrix& B);
FpMatrix fp_scale(long c, const FpMatrix& A);

long fp_inv(long x, long p);
int rank(const FpMatrix& A);
FpMatrix kernel(const FpMatrix& A);        // columns span ker
FpMatrix row_space_basis(const FpMatrix& A);
// One solution X of A X = B, if any.
bool fp_solve(const FpMatrix& A, const FpMatrix& B, FpMatrix& X);
FpMatrix fp_inverse(const FpMatrix& A);    // throws if singular

std::vector<long> fp_apply(const FpMatrix& A, const std::vector<long>& v);

}  // namespace tatekit
