#include "tatekit/homcx.hpp"

#include <algorithm>

namespace tatekit {

int PiComplex::rank_at(int n) const {
  auto it = terms.find(n);
  return it == terms.end() ? 0 : it->second.rank;
}

IntMatrix PiComplex::action_at(int n) const {
  auto it = terms.find(n);
  return it == terms.end() ? IntMatrix() : it->second.action;
}

IntMatrix PiComplex::diff_matrix(int n) const {
  auto it = diffs.find(n);
  if (it != diffs.end()) return it->second;
  return IntMatrix::zero(rank_at(n + 1), rank_at(n));
}

void PiComplex::set_term(int n, PiModule m) {
  if (m.rank > 0) terms[n] = std::move(m);
}

void PiComplex::set_diff(int n, IntMatrix d) {
  if (d.rows > 0 && d.cols > 0 && !d.is_zero()) diffs[n] = std::move(d);
}

IntMatrix PiChainMap::comp_at(const PiComplex& src, const PiComplex& tgt,
                              int n) const {
  auto it = comps.find(n);
  if (it != comps.end()) return it->second;
  return IntMatrix::zero(tgt.rank_at(n + shift), src.rank_at(n));
}

void validate_complex(const PiComplex& C) {
  check_odd_prime(C.p);
  for (auto& [n, m] : C.terms) {
    check(m.p == C.p, Errc::prime_mismatch, "term prime mismatch");
    validate_module(m);
  }
  for (auto& [n, d] : C.diffs) {
    check(d.rows == C.rank_at(n + 1) && d.cols == C.rank_at(n),
          Errc::shape_mismatch, "differential shape at degree " + std::to_string(n));
    check(d * C.action_at(n) == C.action_at(n + 1) * d, Errc::invalid_input,
          "differential not equivariant at degree " + std::to_string(n));
  }
  for (auto& [n, d] : C.diffs) {
    if (C.rank_at(n + 2) == 0) continue;
    check((C.diff_matrix(n + 1) * d).is_zero(), Errc::invalid_input,
          "d^2 != 0 at degree " + std::to_string(n));
  }
}

void validate_chain_map(const PiComplex& src, const PiComplex& tgt,
                        const PiChainMap& f) {
  check(src.p == tgt.p, Errc::prime_mismatch, "chain map prime mismatch");
  int sgn = (f.shift % 2 == 0) ? 1 : -1;
  for (int n = src.bot() - 1; n <= src.top() + 1; ++n) {
    IntMatrix fn = f.comp_at(src, tgt, n);
    check(fn.rows == tgt.rank_at(n + f.shift) && fn.cols == src.rank_at(n),
          Errc::shape_mismatch, "chain map component shape");
    if (src.rank_at(n) == 0) continue;
    check(fn * src.action_at(n) == tgt.action_at(n + f.shift) * fn,
          Errc::invalid_input, "chain map not equivariant");
    IntMatrix lhs = tgt.diff_matrix(n + f.shift) * fn;
    IntMatrix rhs = f.comp_at(src, tgt, n + 1) * src.diff_matrix(n);
    check(lhs == (sgn == 1 ? rhs : -rhs), Errc::invalid_input,
          "chain map does not commute with differentials");
  }
}

PiComplex std_window(WindowKind kind, long p, int lo, int hi) {
  check(lo <= hi, Errc::invalid_input, "std_window: lo > hi");
  PiComplex C;
  C.p = p;
  PiModule R = regular_module(p, 1);
  IntMatrix one_minus_g = IntMatrix::identity(R.rank) - R.action;
  IntMatrix N = norm_matrix(R);
  for (int n = lo; n <= hi; ++n) C.set_term(n, R);
  for (int n = lo; n < hi; ++n) {
    bool even = ((n % 2) + 2) % 2 == 0;
    bool use_one_minus_g = (kind == WindowKind::frak_p) ? !even : even;
    C.set_diff(n, use_one_minus_g ? one_minus_g : N);
  }
  return C;
}

PiComplex shift_complex(const PiComplex& C, int n) {
  PiComplex S;
  S.p = C.p;
  for (auto& [k, m] : C.terms) S.terms[k - n] = m;
  int sgn = (n % 2 == 0) ? 1 : -1;
  for (auto& [k, d] : C.diffs) S.diffs[k - n] = sgn == 1 ? d : -d;
  return S;
}

namespace {

// Assembles a block matrix given row/column segment sizes.
struct Blocks {
  std::vector<int> rsz, csz, roff, coff;
  IntMatrix M;
  Blocks(std::vector<int> r, std::vector<int> c) : rsz(std::move(r)), csz(std::move(c)) {
    int R = 0, Cc = 0;
    for (int s : rsz) {
      roff.push_back(R);
      R += s;
    }
    for (int s : csz) {
      coff.push_back(Cc);
      Cc += s;
    }
    M = IntMatrix::zero(R, Cc);
  }
  void set(int bi, int bj, const IntMatrix& B) {
    check(B.rows == rsz[bi] && B.cols == csz[bj], Errc::shape_mismatch, "block shape");
    for (int i = 0; i < B.rows; ++i)
      for (int j = 0; j < B.cols; ++j) M.at(roff[bi] + i, coff[bj] + j) = B.at(i, j);
  }
};

IntMatrix block_diag(const IntMatrix& A, const IntMatrix& B) {
  Blocks b({A.rows, B.rows}, {A.cols, B.cols});
  b.set(0, 0, A);
  b.set(1, 1, B);
  return b.M;
}

}  // namespace

PiComplex direct_sum(const PiComplex& C, const PiComplex& D) {
  check(C.p == D.p, Errc::prime_mismatch, "direct_sum prime mismatch");
  PiComplex S;
  S.p = C.p;
  int lo = std::min(C.bot(), D.bot()), hi = std::max(C.top(), D.top());
  if (C.empty() && D.empty()) return S;
  if (C.empty()) return D;
  if (D.empty()) return C;
  for (int n = lo; n <= hi; ++n) {
    int r = C.rank_at(n) + D.rank_at(n);
    if (r == 0) continue;
    S.set_term(n, PiModule{S.p, r, block_diag(C.action_at(n), D.action_at(n))});
  }
  for (int n = lo; n < hi; ++n) {
    if (S.rank_at(n) == 0 || S.rank_at(n + 1) == 0) continue;
    Blocks b({C.rank_at(n + 1), D.rank_at(n + 1)}, {C.rank_at(n), D.rank_at(n)});
    b.set(0, 0, C.diff_matrix(n));
    b.set(1, 1, D.diff_matrix(n));
    S.set_diff(n, b.M);
  }
  return S;
}

PiComplex cone(const PiComplex& C, const PiComplex& D, const PiChainMap& f) {
  check(f.shift == 0, Errc::invalid_input, "cone expects a shift-0 chain map");
  check(C.p == D.p, Errc::prime_mismatch, "cone prime mismatch");
  PiComplex K;
  K.p = C.p;
  int lo = std::min(C.bot() - 1, D.bot()), hi = std::max(C.top() - 1, D.top());
  for (int n = lo; n <= hi; ++n) {
    int r = C.rank_at(n + 1) + D.rank_at(n);
    if (r == 0) continue;
    K.set_term(n, PiModule{K.p, r, block_diag(C.action_at(n + 1), D.action_at(n))});
  }
  for (int n = lo; n < hi; ++n) {
    if (K.rank_at(n) == 0 || K.rank_at(n + 1) == 0) continue;
    Blocks b({C.rank_at(n + 2), D.rank_at(n + 1)}, {C.rank_at(n + 1), D.rank_at(n)});
    b.set(0, 0, -C.diff_matrix(n + 1));
    b.set(1, 0, f.comp_at(C, D, n + 1));
    b.set(1, 1, D.diff_matrix(n));
    K.set_diff(n, b.M);
  }
  return K;
}

PiComplex fiber(const PiComplex& A, const PiComplex& B, const PiChainMap& f) {
  check(f.shift == 0, Errc::invalid_input, "fiber expects a shift-0 chain map");
  check(A.p == B.p, Errc::prime_mismatch, "fiber prime mismatch");
  PiComplex F;
  F.p = A.p;
  int lo = std::min(A.bot(), B.bot() + 1), hi = std::max(A.top(), B.top() + 1);
  if (A.empty() && B.empty()) return F;
  for (int n = lo; n <= hi; ++n) {
    int r = A.rank_at(n) + B.rank_at(n - 1);
    if (r == 0) continue;
    F.set_term(n, PiModule{F.p, r, block_diag(A.action_at(n), B.action_at(n - 1))});
  }
  for (int n = lo; n < hi; ++n) {
    if (F.rank_at(n) == 0 || F.rank_at(n + 1) == 0) continue;
    Blocks b({A.rank_at(n + 1), B.rank_at(n)}, {A.rank_at(n), B.rank_at(n - 1)});
    b.set(0, 0, A.diff_matrix(n));
    b.set(1, 0, -f.comp_at(A, B, n));
    b.set(1, 1, -B.diff_matrix(n - 1));
    F.set_diff(n, b.M);
  }
  return F;
}

TensorComplex tensor_complex(const PiComplex& C, const PiComplex& D) {
  check(C.p == D.p, Errc::prime_mismatch, "tensor prime mismatch");
  TensorComplex T;
  T.cx.p = C.p;
  if (C.empty() || D.empty()) return T;
  int lo = C.bot() + D.bot(), hi = C.top() + D.top();
  auto summands = [&](int n) {
    std::vector<int> as;
    for (auto& [a, m] : C.terms)
      if (D.rank_at(n - a) > 0) as.push_back(a);
    return as;
  };
  for (int n = lo; n <= hi; ++n) {
    auto as = summands(n);
    if (as.empty()) continue;
    int off = 0, total = 0;
    IntMatrix act;
    std::vector<std::pair<int, int>> lay;
    for (int a : as) {
      int sz = C.rank_at(a) * D.rank_at(n - a);
      lay.emplace_back(a, off);
      off += sz;
      total += sz;
    }
    std::vector<int> sizes;
    for (int a : as) sizes.push_back(C.rank_at(a) * D.rank_at(n - a));
    Blocks b(sizes, sizes);
    for (size_t i = 0; i < as.size(); ++i)
      b.set(int(i), int(i), kron(C.action_at(as[i]), D.action_at(n - as[i])));
    T.cx.set_term(n, PiModule{T.cx.p, total, b.M});
    T.layout[n] = lay;
    (void)act;
  }
  for (int n = lo; n < hi; ++n) {
    auto src = summands(n), tgt = summands(n + 1);
    if (src.empty() || tgt.empty()) continue;
    std::vector<int> rsz, csz;
    for (int a : tgt) rsz.push_back(C.rank_at(a) * D.rank_at(n + 1 - a));
    for (int a : src) csz.push_back(C.rank_at(a) * D.rank_at(n - a));
    Blocks b(rsz, csz);
    for (size_t j = 0; j < src.size(); ++j) {
      int a = src[j];
      // d_C (x) id into summand a+1
      auto it = std::find(tgt.begin(), tgt.end(), a + 1);
      if (it != tgt.end() && C.rank_at(a + 1) > 0)
        b.set(int(it - tgt.begin()), int(j),
              kron(C.diff_matrix(a), IntMatrix::identity(D.rank_at(n - a))));
      // (-1)^a id (x) d_D into summand a
      it = std::find(tgt.begin(), tgt.end(), a);
      if (it != tgt.end() && D.rank_at(n + 1 - a) > 0) {
        IntMatrix blk = kron(IntMatrix::identity(C.rank_at(a)), D.diff_matrix(n - a));
        b.set(int(it - tgt.begin()), int(j), (a % 2 == 0) ? blk : -blk);
      }
    }
    T.cx.set_diff(n, b.M);
  }
  return T;
}

HomComplex hom_complex(const PiComplex& C, const PiComplex& D) {
  check(C.p == D.p, Errc::prime_mismatch, "hom prime mismatch");
  HomComplex H;
  H.cx.p = C.p;
  if (C.empty() || D.empty()) return H;
  int lo = D.bot() - C.top(), hi = D.top() - C.bot();
  auto summands = [&](int n) {
    std::vector<int> as;
    for (auto& [a, m] : C.terms)
      if (D.rank_at(a + n) > 0) as.push_back(a);
    return as;
  };
  for (int n = lo; n <= hi; ++n) {
    auto as = summands(n);
    if (as.empty()) continue;
    std::vector<int> sizes;
    std::vector<std::pair<int, int>> lay;
    int off = 0, total = 0;
    for (int a : as) {
      int sz = C.rank_at(a) * D.rank_at(a + n);
      sizes.push_back(sz);
      lay.emplace_back(a, off);
      off += sz;
      total += sz;
    }
    Blocks b(sizes, sizes);
    for (size_t i = 0; i < as.size(); ++i) {
      int a = as[i];
      b.set(int(i), int(i),
            hom_module(C.terms.at(a), D.terms.at(a + n)).action);
    }
    H.cx.set_term(n, PiModule{H.cx.p, total, b.M});
    H.layout[n] = lay;
  }
  for (int n = lo; n < hi; ++n) {
    auto src = summands(n), tgt = summands(n + 1);
    if (src.empty() || tgt.empty()) continue;
    std::vector<int> rsz, csz;
    for (int a : tgt) rsz.push_back(C.rank_at(a) * D.rank_at(a + n + 1));
    for (int a : src) csz.push_back(C.rank_at(a) * D.rank_at(a + n));
    Blocks b(rsz, csz);
    int sgn = (n % 2 == 0) ? 1 : -1;
    for (size_t j = 0; j < src.size(); ++j) {
      int a = src[j];
      // postcompose d_D, same tag a
      auto it = std::find(tgt.begin(), tgt.end(), a);
      if (it != tgt.end() && D.rank_at(a + n + 1) > 0)
        b.set(int(it - tgt.begin()), int(j),
              kron(IntMatrix::identity(C.rank_at(a)), D.diff_matrix(a + n)));
      // -(-1)^n precompose d_C^{a-1}: phi_a o d lands in tag a-1
      it = std::find(tgt.begin(), tgt.end(), a - 1);
      if (it != tgt.end() && C.rank_at(a - 1) > 0) {
        IntMatrix blk = kron(transpose(C.diff_matrix(a - 1)),
                             IntMatrix::identity(D.rank_at(a + n)));
        b.set(int(it - tgt.begin()), int(j), sgn == 1 ? -blk : blk);
      }
    }
    H.cx.set_diff(n, b.M);
  }
  return H;
}

FixedComplex fixed_subcomplex(const PiComplex& C) {
  FixedComplex F;
  F.cx.p = C.p;
  for (auto& [n, m] : C.terms) {
    IntMatrix K = fixed_sublattice(m);
    F.embed[n] = K;
    if (K.cols > 0) F.cx.set_term(n, trivial_module(C.p, K.cols));
  }
  for (auto& [n, d] : C.diffs) {
    auto s = F.embed.find(n);
    auto t = F.embed.find(n + 1);
    if (s == F.embed.end() || t == F.embed.end()) continue;
    if (s->second.cols == 0 || t->second.cols == 0) continue;
    auto X = solve(t->second, d * s->second);
    check(X.has_value(), Errc::internal_check, "fixed subcomplex restriction");
    F.cx.set_diff(n, *X);
  }
  return F;
}

std::map<int, AbelianInvariants> cohomology(const PiComplex& C) {
  std::map<int, AbelianInvariants> H;
  for (int n = C.bot(); n <= C.top(); ++n) {
    if (C.rank_at(n) == 0) continue;
    H[n] = subquotient(C.diff_matrix(n - 1), C.diff_matrix(n), Int(C.p));
  }
  return H;
}

std::map<int, AbelianInvariants> invariant_cohomology(const PiComplex& C) {
  return cohomology(fixed_subcomplex(C).cx);
}

FpComplex modular_reduce(const PiComplex& C) {
  FpComplex F;
  F.p = C.p;
  for (auto& [n, m] : C.terms) F.dims[n] = m.rank;
  for (auto& [n, d] : C.diffs) {
    FpMatrix fd = FpMatrix::from_int(d, C.p);
    if (!fd.is_zero()) F.diffs[n] = fd;
  }
  return F;
}

PiComplex forget_action(const PiComplex& C) {
  PiComplex F = C;
  for (auto& [n, m] : F.terms) m.action = IntMatrix::identity(m.rank);
  return F;
}

bool has_trivial_action(const PiComplex& C) {
  for (auto& [n, m] : C.terms)
    if (!(m.action == IntMatrix::identity(m.rank))) return false;
  return true;
}

int FpComplex::dim_at(int n) const {
  auto it = dims.find(n);
  return it == dims.end() ? 0 : it->second;
}

FpMatrix FpComplex::diff_matrix(int n) const {
  auto it = diffs.find(n);
  if (it != diffs.end()) return it->second;
  return FpMatrix(p, dim_at(n + 1), dim_at(n));
}

FpComplex fp_shift(const FpComplex& C, int n) {
  FpComplex S;
  S.p = C.p;
  for (auto& [k, d] : C.dims) S.dims[k - n] = d;
  for (auto& [k, d] : C.diffs) S.diffs[k - n] = (n % 2 == 0) ? d : fp_scale(-1, d);
  return S;
}

FpComplex fp_hom_complex(const FpComplex& X, const FpComplex& Y) {
  check(X.p == Y.p, Errc::prime_mismatch, "fp hom prime mismatch");
  FpComplex H;
  H.p = X.p;
  if (X.dims.empty() || Y.dims.empty()) return H;
  int lo = Y.bot() - X.top(), hi = Y.top() - X.bot();
  auto summands = [&](int n) {
    std::vector<int> as;
    for (auto& [a, d] : X.dims)
      if (Y.dim_at(a + n) > 0) as.push_back(a);
    return as;
  };
  for (int n = lo; n <= hi; ++n) {
    int total = 0;
    for (int a : summands(n)) total += X.dim_at(a) * Y.dim_at(a + n);
    if (total) H.dims[n] = total;
  }
  for (int n = lo; n < hi; ++n) {
    auto src = summands(n), tgt = summands(n + 1);
    if (src.empty() || tgt.empty()) continue;
    FpMatrix M(H.p, H.dim_at(n + 1), H.dim_at(n));
    long sgn = (((n % 2) + 2) % 2 == 0) ? H.p - 1 : 1;  // -(-1)^n
    auto offset = [&](const std::vector<int>& as, int deg, int a_want) {
      int off = 0;
      for (int a : as) {
        if (a == a_want) return off;
        off += X.dim_at(a) * Y.dim_at(a + deg);
      }
      return -1;
    };
    for (int a : src) {
      int co = offset(src, n, a);
      int dx = X.dim_at(a);
      // postcompose d_Y
      int ro = offset(tgt, n + 1, a);
      if (ro >= 0 && Y.dim_at(a + n + 1) > 0) {
        FpMatrix dY = Y.diff_matrix(a + n);
        for (int u = 0; u < dx; ++u)
          for (int r = 0; r < dY.rows; ++r)
            for (int c = 0; c < dY.cols; ++c)
              M.at(ro + u * dY.rows + r, co + u * dY.cols + c) = dY.at(r, c);
      }
      // -(-1)^n precompose d_X^{a-1}
      ro = offset(tgt, n + 1, a - 1);
      if (ro >= 0 && X.dim_at(a - 1) > 0) {
        FpMatrix dX = X.diff_matrix(a - 1);
        int dy = Y.dim_at(a + n);
        for (int u = 0; u < dX.rows; ++u)      // source column block index
          for (int v = 0; v < dX.cols; ++v)    // target column block index
            if (dX.at(u, v)) {
              long val = (sgn * dX.at(u, v)) % H.p;
              for (int w = 0; w < dy; ++w)
                M.at(ro + v * dy + w, co + u * dy + w) =
                    (M.at(ro + v * dy + w, co + u * dy + w) + val) % H.p;
            }
      }
    }
    if (!M.is_zero()) H.diffs[n] = M;
  }
  return H;
}

std::map<int, int> fp_cohomology_dims(const FpComplex& C) {
  std::map<int, int> H;
  for (int n = C.bot(); n <= C.top(); ++n) {
    int d = C.dim_at(n);
    if (d == 0) continue;
    int r_out = rank(C.diff_matrix(n));
    int r_in = rank(C.diff_matrix(n - 1));
    int h = d - r_out - r_in;
    if (h) H[n] = h;
  }
  return H;
}

FpQuotient fp_quotient(const FpMatrix& d_in, const FpMatrix& d_out) {
  FpQuotient Q;
  Q.p = d_out.p;
  Q.ker = kernel(d_out);
  FpMatrix Y;
  bool ok = fp_solve(Q.ker, d_in, Y);
  check(ok, Errc::internal_check, "fp_quotient: image not in kernel");
  // Row-reduce the relations (as rows) to get a canonical reduction.
  FpMatrix R(Q.p, Y.cols, Y.rows);
  for (int i = 0; i < Y.rows; ++i)
    for (int j = 0; j < Y.cols; ++j) R.at(j, i) = Y.at(i, j);
  FpMatrix RR = row_space_basis(R);
  Q.rel_rref = RR;
  Q.rel_pivots.clear();
  for (int i = 0; i < RR.rows; ++i)
    for (int j = 0; j < RR.cols; ++j)
      if (RR.at(i, j)) {
        Q.rel_pivots.push_back(j);
        break;
      }
  Q.dim = Q.ker.cols - RR.rows;
  return Q;
}

std::vector<long> FpQuotient::class_of(const std::vector<long>& ambient) const {
  FpMatrix b(p, int(ambient.size()), 1);
  for (size_t i = 0; i < ambient.size(); ++i) b.at(int(i), 0) = ((ambient[i] % p) + p) % p;
  FpMatrix y;
  bool ok = fp_solve(ker, b, y);
  check(ok, Errc::internal_check, "fp class_of: not a cycle");
  std::vector<long> v(size_t(ker.cols));
  for (int i = 0; i < ker.cols; ++i) v[i] = y.at(i, 0);
  for (int r = 0; r < rel_rref.rows; ++r) {
    int pc = rel_pivots[r];
    long f = v[pc];
    if (!f) continue;
    for (int j = 0; j < rel_rref.cols; ++j)
      v[j] = ((v[j] - f * rel_rref.at(r, j)) % p + p) % p;
  }
  std::vector<long> out;
  std::vector<bool> is_piv(ker.cols, false);
  for (int c : rel_pivots) is_piv[c] = true;
  for (int j = 0; j < ker.cols; ++j)
    if (!is_piv[j]) out.push_back(v[j]);
  return out;
}

std::vector<long> FpQuotient::representative(int i) const {
  std::vector<bool> is_piv(ker.cols, false);
  for (int c : rel_pivots) is_piv[c] = true;
  int seen = 0, coord = -1;
  for (int j = 0; j < ker.cols; ++j) {
    if (is_piv[j]) continue;
    if (seen++ == i) {
      coord = j;
      break;
    }
  }
  check(coord >= 0, Errc::internal_check, "fp representative index");
  std::vector<long> out(size_t(ker.rows), 0);
  for (int r = 0; r < ker.rows; ++r) out[r] = ker.at(r, coord);
  return out;
}

}  // namespace tatekit
