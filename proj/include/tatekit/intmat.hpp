#pragma once

// Exact integer linear algebra: arbitrary-precision matrices, Smith normal
// form, integer kernels and linear solves, and invariants of finitely
// generated abelian groups presented as subquotients of lattices.

#include <gmpxx.h>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tatekit {

using Int = mpz_class;

enum class Errc {
  composition_nonzero,
  prime_mismatch,
  shape_mismatch,
  not_up_set,
  not_down_set,
  unknown_stratum,
  not_regular,
  not_tate_parity,
  not_normal,
  negative_extensions,
  stabilization_failure,
  pairing_not_divisible,
  invalid_input,
  internal_check,
};

struct Error : std::runtime_error {
  Errc code;
  Error(Errc c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

inline void check(bool ok, Errc c, const std::string& msg) {
  if (!ok) throw Error(c, msg);
}

// Dense row-major integer matrix. Zero-sized dimensions are allowed so that
// empty complexes and empty kernels need no special cases.
struct IntMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<Int> a;

  IntMatrix() = default;
  IntMatrix(int r, int c) : rows(r), cols(c), a(size_t(r) * size_t(c)) {}

  Int& at(int i, int j) { return a[size_t(i) * cols + j]; }
  const Int& at(int i, int j) const { return a[size_t(i) * cols + j]; }

  static IntMatrix zero(int r, int c) { return IntMatrix(r, c); }
  static IntMatrix identity(int n);

  bool is_zero() const;
  bool operator==(const IntMatrix& o) const = default;
};

IntMatrix operator*(const IntMatrix& A, const IntMatrix& B);
IntMatrix operator+(const IntMatrix& A, const IntMatrix& B);
IntMatrix operator-(const IntMatrix& A, const IntMatrix& B);
IntMatrix operator-(const IntMatrix& A);
IntMatrix operator*(const Int& c, const IntMatrix& A);
IntMatrix transpose(const IntMatrix& A);
IntMatrix kron(const IntMatrix& A, const IntMatrix& B);
IntMatrix hstack(const IntMatrix& A, const IntMatrix& B);
IntMatrix mat_pow(const IntMatrix& A, unsigned long e);
IntMatrix mod_reduce(const IntMatrix& A, const Int& p);
std::vector<Int> mat_apply(const IntMatrix& A, const std::vector<Int>& v);
std::string to_string(const IntMatrix& A);

// D = U*A*V with U, V unimodular and D diagonal with d1 | d2 | ... .
struct SNFResult {
  IntMatrix D, U, V;
  int rank = 0;
};

SNFResult snf(const IntMatrix& A);

// Invariants of a finitely generated abelian group: free rank plus torsion
// as a multiset of prime powers. The p-primary view (free rank and exponents
// of p in the invariant factors) is what "Z_p-module" statements read off.
struct AbelianInvariants {
  int free_rank = 0;
  std::vector<Int> torsion;    // prime powers, sorted
  std::vector<int> p_exponents;  // exponents of p per invariant factor, sorted

  bool p_trivial() const { return free_rank == 0 && p_exponents.empty(); }
  int p_local_dim_if_elementary() const;  // asserts all exponents are 1
  bool operator==(const AbelianInvariants& o) const = default;
};

// Invariants of ker(d_out)/im(d_in) inside Z^n, where d_in: Z^a -> Z^n and
// d_out: Z^n -> Z^b. Requires d_out * d_in = 0.
AbelianInvariants subquotient(const IntMatrix& d_in, const IntMatrix& d_out,
                              const Int& p);

int fp_rank(const IntMatrix& A, const Int& p);

// Columns form a basis of the full kernel lattice {x : Ax = 0}.
IntMatrix kernel_basis(const IntMatrix& A);

// Integer solution X of A X = B, if one exists.
std::optional<IntMatrix> solve(const IntMatrix& A, const IntMatrix& B);

// Subquotient ker(d_out)/im(d_in) together with coordinates: maps ambient
// vectors to class coordinates and hands out representative cocycles. Used
// wherever cohomology classes need to be compared or pushed forward.
struct SubquotientClasses {
  IntMatrix kernel;  // n x k, basis of ker(d_out)
  SNFResult rel;     // SNF of the relation matrix expressing im(d_in) in kernel coordinates
  std::vector<Int> factors;  // invariant factors per kernel coordinate (0 = free)
  AbelianInvariants inv;

  // Class coordinates (length k) of an ambient cycle, reduced mod factors.
  std::vector<Int> class_of(const std::vector<Int>& ambient) const;
  // Ambient representative of the i-th coordinate class.
  std::vector<Int> representative(int i) const;
  int order() const { return kernel.cols; }
};

SubquotientClasses subquotient_classes(const IntMatrix& d_in,
                                       const IntMatrix& d_out, const Int& p);

std::vector<std::pair<Int, int>> factorize(Int n);

}  // namespace tatekit
