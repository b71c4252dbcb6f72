#include "tatekit/fpmat.hpp"

namespace tatekit {

FpMatrix FpMatrix::identity(long p, int n) {
  FpMatrix I(p, n, n);
  for (int i = 0; i < n; ++i) I.at(i, i) = 1;
  return I;
}

FpMatrix FpMatrix::from_int(const IntMatrix& M, long p) {
  FpMatrix F(p, M.rows, M.cols);
  Int pz(p);
  for (int i = 0; i < M.rows; ++i)
    for (int j = 0; j < M.cols; ++j) {
      Int r;
      mpz_fdiv_r(r.get_mpz_t(), M.at(i, j).get_mpz_t(), pz.get_mpz_t());
      F.at(i, j) = r.get_si();
    }
  return F;
}

bool FpMatrix::is_zero() const {
  for (long x : a)
    if (x) return false;
  return true;
}

FpMatrix operator*(const FpMatrix& A, const FpMatrix& B) {
  check(A.cols == B.rows && A.p == B.p, Errc::shape_mismatch, "fp product shape");
  FpMatrix C(A.p, A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int k = 0; k < A.cols; ++k) {
      long aik = A.at(i, k);
      if (!aik) continue;
      for (int j = 0; j < B.cols; ++j)
        C.at(i, j) = (C.at(i, j) + aik * B.at(k, j)) % A.p;
    }
  return C;
}

FpMatrix operator+(const FpMatrix& A, const FpMatrix& B) {
  check(A.rows == B.rows && A.cols == B.cols && A.p == B.p, Errc::shape_mismatch,
        "fp sum shape");
  FpMatrix C = A;
  for (size_t i = 0; i < C.a.size(); ++i) C.a[i] = (C.a[i] + B.a[i]) % A.p;
  return C;
}

FpMatrix operator-(const FpMatrix& A, const FpMatrix& B) {
  check(A.rows == B.rows && A.cols == B.cols && A.p == B.p, Errc::shape_mismatch,
        "fp diff shape");
  FpMatrix C = A;
  for (size_t i = 0; i < C.a.size(); ++i) C.a[i] = ((C.a[i] - B.a[i]) % A.p + A.p) % A.p;
  return C;
}

FpMatrix fp_scale(long c, const FpMatrix& A) {
  FpMatrix C = A;
  c = ((c % A.p) + A.p) % A.p;
  for (long& x : C.a) x = (x * c) % A.p;
  return C;
}

long fp_inv(long x, long p) {
  x = ((x % p) + p) % p;
  check(x != 0, Errc::internal_check, "fp_inv of zero");
  long r = 1, b = x, e = p - 2;
  while (e) {
    if (e & 1) r = (r * b) % p;
    b = (b * b) % p;
    e >>= 1;
  }
  return r;
}

namespace {

// Row echelon; returns pivot columns. M mutated in place.
std::vector<int> echelon(FpMatrix& M) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < M.cols && row < M.rows; ++col) {
    int piv = -1;
    for (int i = row; i < M.rows; ++i)
      if (M.at(i, col)) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    for (int c = 0; c < M.cols; ++c) std::swap(M.at(row, c), M.at(piv, c));
    long inv = fp_inv(M.at(row, col), M.p);
    for (int c = 0; c < M.cols; ++c) M.at(row, c) = (M.at(row, c) * inv) % M.p;
    for (int i = 0; i < M.rows; ++i) {
      if (i == row) continue;
      long f = M.at(i, col);
      if (!f) continue;
      for (int c = 0; c < M.cols; ++c)
        M.at(i, c) = ((M.at(i, c) - f * M.at(row, c)) % M.p + M.p) % M.p;
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

int rank(const FpMatrix& A) {
  FpMatrix M = A;
  return int(echelon(M).size());
}

FpMatrix kernel(const FpMatrix& A) {
  FpMatrix M = A;
  std::vector<int> pivots = echelon(M);
  std::vector<bool> is_pivot(A.cols, false);
  for (int c : pivots) is_pivot[c] = true;
  FpMatrix K(A.p, A.cols, A.cols - int(pivots.size()));
  int kcol = 0;
  for (int free = 0; free < A.cols; ++free) {
    if (is_pivot[free]) continue;
    K.at(free, kcol) = 1;
    for (size_t r = 0; r < pivots.size(); ++r)
      K.at(pivots[r], kcol) = (A.p - M.at(int(r), free)) % A.p;
    ++kcol;
  }
  return K;
}

FpMatrix row_space_basis(const FpMatrix& A) {
  FpMatrix M = A;
  int rk = int(echelon(M).size());
  FpMatrix B(A.p, rk, A.cols);
  for (int i = 0; i < rk; ++i)
    for (int j = 0; j < A.cols; ++j) B.at(i, j) = M.at(i, j);
  return B;
}

bool fp_solve(const FpMatrix& A, const FpMatrix& B, FpMatrix& X) {
  check(A.rows == B.rows && A.p == B.p, Errc::shape_mismatch, "fp_solve shape");
  FpMatrix M(A.p, A.rows, A.cols + B.cols);
  for (int i = 0; i < A.rows; ++i) {
    for (int j = 0; j < A.cols; ++j) M.at(i, j) = A.at(i, j);
    for (int j = 0; j < B.cols; ++j) M.at(i, A.cols + j) = B.at(i, j);
  }
  std::vector<int> pivots = echelon(M);
  for (int c : pivots)
    if (c >= A.cols) return false;  // inconsistent
  X = FpMatrix(A.p, A.cols, B.cols);
  for (size_t r = 0; r < pivots.size(); ++r)
    for (int j = 0; j < B.cols; ++j) X.at(pivots[r], j) = M.at(int(r), A.cols + j);
  return true;
}

FpMatrix fp_inverse(const FpMatrix& A) {
  check(A.rows == A.cols, Errc::shape_mismatch, "fp_inverse square");
  FpMatrix X;
  bool ok = fp_solve(A, FpMatrix::identity(A.p, A.rows), X);
  check(ok && rank(A) == A.rows, Errc::internal_check, "fp_inverse singular");
  return X;
}

std::vector<long> fp_apply(const FpMatrix& A, const std::vector<long>& v) {
  check(int(v.size()) == A.cols, Errc::shape_mismatch, "fp_apply shape");
  std::vector<long> w(A.rows, 0);
  for (int i = 0; i < A.rows; ++i) {
    long s = 0;
    for (int j = 0; j < A.cols; ++j) s = (s + A.at(i, j) * v[j]) % A.p;
    w[i] = s;
  }
  return w;
}

}  // namespace tatekit
