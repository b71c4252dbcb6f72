#include "tatekit/intmat.hpp"

#include <algorithm>
#include <sstream>

namespace tatekit {

IntMatrix IntMatrix::identity(int n) {
  IntMatrix I(n, n);
  for (int i = 0; i < n; ++i) I.at(i, i) = 1;
  return I;
}

bool IntMatrix::is_zero() const {
  for (const Int& x : a)
    if (x != 0) return false;
  return true;
}

IntMatrix operator*(const IntMatrix& A, const IntMatrix& B) {
  check(A.cols == B.rows, Errc::shape_mismatch, "matrix product shape");
  IntMatrix C(A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int k = 0; k < A.cols; ++k) {
      const Int& aik = A.at(i, k);
      if (aik == 0) continue;
      for (int j = 0; j < B.cols; ++j) {
        const Int& bkj = B.at(k, j);
        if (bkj != 0) C.at(i, j) += aik * bkj;
      }
    }
  return C;
}

IntMatrix operator+(const IntMatrix& A, const IntMatrix& B) {
  check(A.rows == B.rows && A.cols == B.cols, Errc::shape_mismatch, "matrix sum shape");
  IntMatrix C = A;
  for (size_t i = 0; i < C.a.size(); ++i) C.a[i] += B.a[i];
  return C;
}

IntMatrix operator-(const IntMatrix& A, const IntMatrix& B) {
  check(A.rows == B.rows && A.cols == B.cols, Errc::shape_mismatch, "matrix diff shape");
  IntMatrix C = A;
  for (size_t i = 0; i < C.a.size(); ++i) C.a[i] -= B.a[i];
  return C;
}

IntMatrix operator-(const IntMatrix& A) {
  IntMatrix C = A;
  for (Int& x : C.a) x = -x;
  return C;
}

IntMatrix operator*(const Int& c, const IntMatrix& A) {
  IntMatrix C = A;
  for (Int& x : C.a) x *= c;
  return C;
}

IntMatrix transpose(const IntMatrix& A) {
  IntMatrix T(A.cols, A.rows);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) T.at(j, i) = A.at(i, j);
  return T;
}

IntMatrix kron(const IntMatrix& A, const IntMatrix& B) {
  IntMatrix K(A.rows * B.rows, A.cols * B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) {
      const Int& aij = A.at(i, j);
      if (aij == 0) continue;
      for (int r = 0; r < B.rows; ++r)
        for (int s = 0; s < B.cols; ++s)
          K.at(i * B.rows + r, j * B.cols + s) = aij * B.at(r, s);
    }
  return K;
}

IntMatrix hstack(const IntMatrix& A, const IntMatrix& B) {
  check(A.rows == B.rows, Errc::shape_mismatch, "hstack rows");
  IntMatrix C(A.rows, A.cols + B.cols);
  for (int i = 0; i < A.rows; ++i) {
    for (int j = 0; j < A.cols; ++j) C.at(i, j) = A.at(i, j);
    for (int j = 0; j < B.cols; ++j) C.at(i, A.cols + j) = B.at(i, j);
  }
  return C;
}

IntMatrix mat_pow(const IntMatrix& A, unsigned long e) {
  check(A.rows == A.cols, Errc::shape_mismatch, "mat_pow square");
  IntMatrix R = IntMatrix::identity(A.rows);
  IntMatrix B = A;
  while (e) {
    if (e & 1) R = R * B;
    e >>= 1;
    if (e) B = B * B;
  }
  return R;
}

IntMatrix mod_reduce(const IntMatrix& A, const Int& p) {
  IntMatrix C = A;
  for (Int& x : C.a) {
    mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t());
  }
  return C;
}

std::vector<Int> mat_apply(const IntMatrix& A, const std::vector<Int>& v) {
  check(int(v.size()) == A.cols, Errc::shape_mismatch, "apply shape");
  std::vector<Int> w(A.rows);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j)
      if (A.at(i, j) != 0 && v[j] != 0) w[i] += A.at(i, j) * v[j];
  return w;
}

std::string to_string(const IntMatrix& A) {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < A.rows; ++i) {
    os << (i ? ", [" : "[");
    for (int j = 0; j < A.cols; ++j) os << (j ? "," : "") << A.at(i, j).get_str();
    os << "]";
  }
  os << "]";
  return os.str();
}

namespace {

void swap_rows(IntMatrix& M, int i, int j) {
  if (i == j) return;
  for (int c = 0; c < M.cols; ++c) std::swap(M.at(i, c), M.at(j, c));
}

void swap_cols(IntMatrix& M, int i, int j) {
  if (i == j) return;
  for (int r = 0; r < M.rows; ++r) std::swap(M.at(r, i), M.at(r, j));
}

// row[i] += f * row[j]
void add_row(IntMatrix& M, int i, int j, const Int& f) {
  for (int c = 0; c < M.cols; ++c) M.at(i, c) += f * M.at(j, c);
}

void add_col(IntMatrix& M, int i, int j, const Int& f) {
  for (int r = 0; r < M.rows; ++r) M.at(r, i) += f * M.at(r, j);
}

// Smallest nonzero |entry| in D[t:, t:], ties broken by (row, col).
bool find_pivot(const IntMatrix& D, int t, int& pi, int& pj) {
  bool found = false;
  Int best;
  for (int i = t; i < D.rows; ++i)
    for (int j = t; j < D.cols; ++j) {
      const Int& x = D.at(i, j);
      if (x == 0) continue;
      Int ax = abs(x);
      if (!found || ax < best) {
        found = true;
        best = ax;
        pi = i;
        pj = j;
      }
    }
  return found;
}

bool cross_cleared(const IntMatrix& D, int t) {
  for (int i = t + 1; i < D.rows; ++i)
    if (D.at(i, t) != 0) return false;
  for (int j = t + 1; j < D.cols; ++j)
    if (D.at(t, j) != 0) return false;
  return true;
}

}  // namespace

SNFResult snf(const IntMatrix& A) {
  SNFResult r;
  r.D = A;
  r.U = IntMatrix::identity(A.rows);
  r.V = IntMatrix::identity(A.cols);
  IntMatrix& D = r.D;
  const int nmin = std::min(A.rows, A.cols);

  for (int t = 0; t < nmin; ++t) {
    for (;;) {
      int pi, pj;
      if (!find_pivot(D, t, pi, pj)) break;
      swap_rows(D, t, pi);
      swap_rows(r.U, t, pi);
      swap_cols(D, t, pj);
      swap_cols(r.V, t, pj);

      for (int i = t + 1; i < D.rows; ++i) {
        if (D.at(i, t) == 0) continue;
        Int q;
        mpz_tdiv_q(q.get_mpz_t(), D.at(i, t).get_mpz_t(), D.at(t, t).get_mpz_t());
        if (q != 0) {
          add_row(D, i, t, -q);
          add_row(r.U, i, t, -q);
        }
      }
      for (int j = t + 1; j < D.cols; ++j) {
        if (D.at(t, j) == 0) continue;
        Int q;
        mpz_tdiv_q(q.get_mpz_t(), D.at(t, j).get_mpz_t(), D.at(t, t).get_mpz_t());
        if (q != 0) {
          add_col(D, j, t, -q);
          add_col(r.V, j, t, -q);
        }
      }
      if (!cross_cleared(D, t)) continue;

      // Pivot is lone; enforce that it divides the rest of the submatrix.
      bool divides = true;
      int bi = -1, bj = -1;
      for (int i = t + 1; i < D.rows && divides; ++i)
        for (int j = t + 1; j < D.cols; ++j) {
          if (D.at(i, j) % D.at(t, t) != 0) {
            divides = false;
            bi = i;
            bj = j;
            break;
          }
        }
      if (divides) break;
      add_row(D, t, bi, 1);
      add_row(r.U, t, bi, 1);
      (void)bj;
    }
    if (D.at(t, t) < 0) {
      for (int c = 0; c < D.cols; ++c) D.at(t, c) = -D.at(t, c);
      for (int c = 0; c < r.U.cols; ++c) r.U.at(t, c) = -r.U.at(t, c);
    }
    if (D.at(t, t) != 0) r.rank = t + 1;
  }
  return r;
}

IntMatrix kernel_basis(const IntMatrix& A) {
  if (A.rows == 0) return IntMatrix::identity(A.cols);
  SNFResult r = snf(A);
  IntMatrix K(A.cols, A.cols - r.rank);
  for (int i = 0; i < A.cols; ++i)
    for (int j = 0; j < A.cols - r.rank; ++j) K.at(i, j) = r.V.at(i, r.rank + j);
  return K;
}

std::optional<IntMatrix> solve(const IntMatrix& A, const IntMatrix& B) {
  check(A.rows == B.rows, Errc::shape_mismatch, "solve shape");
  SNFResult r = snf(A);
  IntMatrix UB = r.U * B;
  IntMatrix Y(A.cols, B.cols);
  const int nmin = std::min(A.rows, A.cols);
  for (int i = 0; i < A.rows; ++i) {
    if (i < nmin && r.D.at(i, i) != 0) {
      for (int j = 0; j < B.cols; ++j) {
        Int q, rem;
        mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), UB.at(i, j).get_mpz_t(),
                    r.D.at(i, i).get_mpz_t());
        if (rem != 0) return std::nullopt;
        Y.at(i, j) = q;
      }
    } else {
      for (int j = 0; j < B.cols; ++j)
        if (UB.at(i, j) != 0) return std::nullopt;
    }
  }
  return r.V * Y;
}

std::vector<std::pair<Int, int>> factorize(Int n) {
  std::vector<std::pair<Int, int>> out;
  if (n < 0) n = -n;
  if (n <= 1) return out;
  Int d = 2;
  while (d * d <= n) {
    if (n % d == 0) {
      int e = 0;
      while (n % d == 0) {
        n /= d;
        ++e;
      }
      out.emplace_back(d, e);
    }
    d += (d == 2) ? 1 : 2;
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

int AbelianInvariants::p_local_dim_if_elementary() const {
  check(free_rank == 0, Errc::internal_check, "expected finite p-group");
  for (int e : p_exponents)
    check(e == 1, Errc::internal_check, "expected elementary abelian p-group");
  return int(p_exponents.size());
}

namespace {

AbelianInvariants invariants_from_factors(const std::vector<Int>& factors,
                                          int free_rank, const Int& p) {
  AbelianInvariants inv;
  inv.free_rank = free_rank;
  for (const Int& d : factors) {
    if (d == 0 || d == 1) continue;
    for (auto& [q, e] : factorize(d)) {
      Int qe;
      mpz_pow_ui(qe.get_mpz_t(), q.get_mpz_t(), e);
      inv.torsion.push_back(qe);
      if (q == p) inv.p_exponents.push_back(e);
    }
  }
  std::sort(inv.torsion.begin(), inv.torsion.end());
  std::sort(inv.p_exponents.begin(), inv.p_exponents.end());
  return inv;
}

}  // namespace

SubquotientClasses subquotient_classes(const IntMatrix& d_in,
                                       const IntMatrix& d_out, const Int& p) {
  const int n = d_out.cols;
  check(d_in.rows == n || d_in.cols == 0, Errc::shape_mismatch,
        "subquotient: ambient rank mismatch");
  IntMatrix din = d_in.cols == 0 ? IntMatrix::zero(n, 0) : d_in;
  check((d_out * din).is_zero(), Errc::composition_nonzero,
        "subquotient: d_out * d_in != 0");

  SubquotientClasses sc;
  sc.kernel = kernel_basis(d_out);
  auto X = solve(sc.kernel, din);
  check(X.has_value(), Errc::internal_check,
        "subquotient: image not contained in kernel lattice");
  sc.rel = snf(*X);
  const int k = sc.kernel.cols;
  sc.factors.assign(k, Int(0));
  std::vector<Int> tors;
  for (int i = 0; i < sc.rel.rank; ++i) {
    sc.factors[i] = sc.rel.D.at(i, i);
    tors.push_back(sc.factors[i]);
  }
  sc.inv = invariants_from_factors(tors, k - sc.rel.rank, p);
  return sc;
}

std::vector<Int> SubquotientClasses::class_of(const std::vector<Int>& ambient) const {
  IntMatrix b(int(ambient.size()), 1);
  for (size_t i = 0; i < ambient.size(); ++i) b.at(int(i), 0) = ambient[i];
  auto y = solve(kernel, b);
  check(y.has_value(), Errc::internal_check, "class_of: vector not a cycle");
  IntMatrix z = rel.U * *y;
  std::vector<Int> out(size_t(kernel.cols));
  for (int i = 0; i < kernel.cols; ++i) {
    out[i] = z.at(i, 0);
    if (factors[i] > 1) mpz_fdiv_r(out[i].get_mpz_t(), out[i].get_mpz_t(), factors[i].get_mpz_t());
    else if (factors[i] == 1) out[i] = 0;
  }
  return out;
}

std::vector<Int> SubquotientClasses::representative(int i) const {
  IntMatrix e(kernel.cols, 1);
  e.at(i, 0) = 1;
  auto y = solve(rel.U, e);
  check(y.has_value(), Errc::internal_check, "representative: U not unimodular?");
  IntMatrix v = kernel * *y;
  std::vector<Int> out(size_t(kernel.rows));
  for (int r = 0; r < kernel.rows; ++r) out[r] = v.at(r, 0);
  return out;
}

AbelianInvariants subquotient(const IntMatrix& d_in, const IntMatrix& d_out,
                              const Int& p) {
  return subquotient_classes(d_in, d_out, p).inv;
}

int fp_rank(const IntMatrix& A, const Int& p) {
  IntMatrix M = mod_reduce(A, p);
  int rank = 0;
  int row = 0;
  for (int col = 0; col < M.cols && row < M.rows; ++col) {
    int piv = -1;
    for (int i = row; i < M.rows; ++i)
      if (M.at(i, col) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    for (int c = 0; c < M.cols; ++c) std::swap(M.at(row, c), M.at(piv, c));
    Int inv;
    int ok = mpz_invert(inv.get_mpz_t(), M.at(row, col).get_mpz_t(), p.get_mpz_t());
    check(ok != 0, Errc::invalid_input, "fp_rank: p not prime?");
    for (int c = 0; c < M.cols; ++c)
      M.at(row, c) = (M.at(row, c) * inv) % p;
    for (int i = 0; i < M.rows; ++i) {
      if (i == row || M.at(i, col) == 0) continue;
      Int f = M.at(i, col);
      for (int c = 0; c < M.cols; ++c) {
        M.at(i, c) -= f * M.at(row, c);
        mpz_fdiv_r(M.at(i, c).get_mpz_t(), M.at(i, c).get_mpz_t(), p.get_mpz_t());
      }
    }
    ++row;
    ++rank;
  }
  return rank;
}

}  // namespace tatekit
