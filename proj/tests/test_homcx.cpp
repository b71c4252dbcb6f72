#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gen.hpp"
#include "tatekit/homcx.hpp"

using namespace tatekit;

namespace {

PiComplex single(long p, PiModule m, int deg = 0) {
  PiComplex C;
  C.p = p;
  C.set_term(deg, std::move(m));
  return C;
}

// cone(c * id) on trivial(1): the two-term complex Z --c--> Z in degrees -1, 0.
PiComplex cone_of_scalar(long p, long c) {
  PiComplex T = single(p, trivial_module(p, 1));
  PiChainMap f;
  f.shift = 0;
  IntMatrix m(1, 1);
  m.at(0, 0) = c;
  f.comps[0] = m;
  return cone(T, T, f);
}

bool is_zero_inv(const AbelianInvariants& a) {
  return a.free_rank == 0 && a.torsion.empty();
}

// Group cohomology of Z/p with trivial Z coefficients via the inhomogeneous
// bar complex: C^n = maps from (Z/p)^n to Z. Independent of the library's
// periodic windows.
std::map<int, AbelianInvariants> bar_cohomology(long p, int top) {
  auto card = [&](int n) {
    long c = 1;
    for (int i = 0; i < n; ++i) c *= p;
    return c;
  };
  auto index = [&](const std::vector<long>& tuple) {
    long idx = 0;
    for (long g : tuple) idx = idx * p + g;
    return idx;
  };
  std::map<int, IntMatrix> d;
  for (int n = 0; n <= top; ++n) {
    IntMatrix M(int(card(n + 1)), int(card(n)));
    std::vector<long> t(n + 1, 0);
    long rows = card(n + 1);
    for (long r = 0; r < rows; ++r) {
      long tmp = r;
      for (int i = n; i >= 0; --i) {
        t[i] = tmp % p;
        tmp /= p;
      }
      // (d phi)(g1..g_{n+1}) = phi(g2..) + sum (-1)^i phi(..g_i g_{i+1}..)
      //                        + (-1)^{n+1} phi(g1..gn)
      std::vector<long> s(t.begin() + 1, t.end());
      M.at(int(r), int(index(s))) += 1;
      for (int i = 1; i <= n; ++i) {
        std::vector<long> u;
        for (int j = 0; j < i - 1; ++j) u.push_back(t[j]);
        u.push_back((t[i - 1] + t[i]) % p);
        for (int j = i + 1; j <= n; ++j) u.push_back(t[j]);
        M.at(int(r), int(index(u))) += (i % 2 == 0) ? 1 : -1;
      }
      std::vector<long> w(t.begin(), t.end() - 1);
      M.at(int(r), int(index(w))) += (n % 2 == 0) ? -1 : 1;
    }
    d[n] = std::move(M);
  }
  std::map<int, AbelianInvariants> H;
  for (int n = 0; n <= top; ++n) {
    IntMatrix din = n == 0 ? IntMatrix::zero(int(card(0)), 0) : d[n - 1];
    H[n] = subquotient(din, d[n], Int(p));
  }
  return H;
}

}  // namespace

TEST_CASE("std windows") {
  auto R = regular_module(3, 1);
  IntMatrix omg = IntMatrix::identity(3) - R.action;
  IntMatrix N = norm_matrix(R);

  auto t = std_window(WindowKind::t, 3, 0, 1);
  validate_complex(t);
  CHECK(t.diff_matrix(0) == omg);

  auto i = std_window(WindowKind::i, 3, 0, 2);
  validate_complex(i);
  CHECK(i.diff_matrix(0) == omg);
  CHECK(i.diff_matrix(1) == N);

  auto one = std_window(WindowKind::frak_p, 3, 0, 0);
  CHECK(one.rank_at(0) == 3);
  CHECK(one.diffs.empty());

  auto fp = std_window(WindowKind::frak_p, 3, -3, 0);
  validate_complex(fp);
  CHECK(fp.diff_matrix(-1) == omg);
  CHECK(fp.diff_matrix(-2) == N);
  CHECK(fp.diff_matrix(-3) == omg);
}

TEST_CASE("frak_p window is a resolution of Z under the augmentation") {
  auto fp = std_window(WindowKind::frak_p, 3, -6, 0);
  auto H = cohomology(fp);
  for (int n = -5; n < 0; ++n) CHECK(is_zero_inv(H[n]));
  CHECK(H[0].free_rank == 1);  // coker(1-g) = Z
  CHECK(H[0].torsion.empty());
}

TEST_CASE("cohomology examples") {
  auto T = single(3, trivial_module(3, 1));
  auto H = cohomology(T);
  CHECK(H[0].free_rank == 1);
  CHECK(H[0].torsion.empty());

  // cone(p . id) on trivial(1): Z/p in the degree carrying the target
  auto K = cone_of_scalar(3, 3);
  validate_complex(K);
  auto HK = cohomology(K);
  CHECK(is_zero_inv(HK[-1]));
  CHECK(HK[0].free_rank == 0);
  REQUIRE(HK[0].torsion.size() == 1);
  CHECK(HK[0].torsion[0] == 3);
}

TEST_CASE("invariant cohomology of the weakly injective window is group cohomology") {
  auto oracle = bar_cohomology(3, 4);
  auto iw = std_window(WindowKind::i, 3, 0, 4);
  auto H = invariant_cohomology(iw);
  CHECK(H[0] == oracle[0]);  // Z
  CHECK(is_zero_inv(H[1]));
  CHECK(H[2] == oracle[2]);  // Z/3
  CHECK(is_zero_inv(H[3]));
  CHECK(H[4] == oracle[4]);  // Z/3
  CHECK(oracle[1].free_rank == 0);
  CHECK(oracle[1].torsion.empty());
  REQUIRE(oracle[2].torsion.size() == 1);
  CHECK(oracle[2].torsion[0] == 3);
}

TEST_CASE("t window acyclic in interior degrees") {
  auto t = std_window(WindowKind::t, 3, 0, 5);
  auto H = cohomology(t);
  for (int n = 1; n < 5; ++n) CHECK(is_zero_inv(H[n]));
}

TEST_CASE("shift and cone") {
  gen::Rng rng(7);
  auto C = gen::random_complex(rng, 3, 4, 2);
  auto S0 = shift_complex(C, 0);
  CHECK(S0.terms == C.terms);
  CHECK(S0.diffs == C.diffs);
  auto S2 = shift_complex(shift_complex(C, 1), -1);
  CHECK(S2.terms == C.terms);
  CHECK(S2.diffs == C.diffs);

  // cone of the identity is acyclic
  auto T = single(3, norm_quotient_module(3));
  PiChainMap id;
  id.shift = 0;
  id.comps[0] = IntMatrix::identity(2);
  auto K = cone(T, T, id);
  validate_complex(K);
  for (auto& [n, inv] : cohomology(K)) CHECK(is_zero_inv(inv));
}

TEST_CASE("tensor and hom units") {
  gen::Rng rng(11);
  auto C = gen::random_complex(rng, 3, 3, 2);
  auto unit = single(3, trivial_module(3, 1));

  auto TC = tensor_complex(C, unit);
  validate_complex(TC.cx);
  for (auto& [n, m] : C.terms) {
    CHECK(TC.cx.rank_at(n) == m.rank);
    CHECK(TC.cx.action_at(n) == m.action);
  }
  for (auto& [n, d] : C.diffs) CHECK(TC.cx.diff_matrix(n) == d);

  auto HU = hom_complex(unit, C);
  validate_complex(HU.cx);
  for (auto& [n, m] : C.terms) CHECK(HU.cx.rank_at(n) == m.rank);
  for (auto& [n, d] : C.diffs) CHECK(HU.cx.diff_matrix(n) == d);

  // hom(trivial deg 0, trivial deg 0) = trivial deg 0
  auto HT = hom_complex(unit, unit);
  CHECK(HT.cx.rank_at(0) == 1);
  CHECK(HT.cx.terms.size() == 1);
}

TEST_CASE("hom complex of cone(p) with itself") {
  auto K = cone_of_scalar(3, 3);
  auto H = hom_complex(K, K);
  validate_complex(H.cx);
  CHECK(H.cx.bot() == -1);
  CHECK(H.cx.top() == 1);
  CHECK(H.cx.rank_at(-1) == 1);
  CHECK(H.cx.rank_at(0) == 2);
  CHECK(H.cx.rank_at(1) == 1);
}

TEST_CASE("hom complex H0 of fixed subcomplex counts equivariant homotopy classes") {
  // Hom(Z, Z) over the point: classes of chain maps Z -> Z are Z
  auto unit = single(3, trivial_module(3, 1));
  auto H = hom_complex(unit, unit);
  auto inv = invariant_cohomology(H.cx);
  CHECK(inv[0].free_rank == 1);

  // Hom(Z[pi], Z[pi]): equivariant maps = Z[pi], no homotopies
  auto R = single(3, regular_module(3, 1));
  auto HR = hom_complex(R, R);
  auto invR = invariant_cohomology(HR.cx);
  CHECK(invR[0].free_rank == 3);
}

TEST_CASE("validated constructions keep d^2 = 0 on random data") {
  gen::Rng rng(23);
  for (int t = 0; t < 20; ++t) {
    long p = (t % 2 == 0) ? 3 : 5;
    auto C = gen::random_complex(rng, p, 4, 2);
    auto D = gen::random_complex(rng, p, 4, 2);
    auto f = gen::random_chain_map(rng, C, D);
    auto K = cone(C, D, f);
    validate_complex(K);
    auto Fb = fiber(C, D, f);
    validate_complex(Fb);
    auto T = tensor_complex(C, D);
    validate_complex(T.cx);
    auto H = hom_complex(C, D);
    validate_complex(H.cx);
    // modular reduction keeps d^2 = 0
    auto FC = modular_reduce(T.cx);
    for (int n = FC.bot(); n + 2 <= FC.top(); ++n)
      CHECK((FC.diff_matrix(n + 1) * FC.diff_matrix(n)).is_zero());
  }
}

TEST_CASE("cone long exact sequence over F_p") {
  gen::Rng rng(31);
  for (int t = 0; t < 10; ++t) {
    long p = (t % 2 == 0) ? 3 : 5;
    auto C = gen::random_complex(rng, p, 3, 2);
    auto D = gen::random_complex(rng, p, 3, 2);
    auto f = gen::random_chain_map(rng, C, D);
    auto K = cone(C, D, f);

    auto Cp = modular_reduce(C);
    auto Dp = modular_reduce(D);
    auto Kp = modular_reduce(K);

    // FpQuotient per degree per complex
    auto quot = [&](const FpComplex& X, int n) {
      return fp_quotient(X.diff_matrix(n - 1), X.diff_matrix(n));
    };
    // induced map on H^n by a degreewise matrix map
    auto induced = [&](const FpComplex& X, const FpComplex& Y,
                       const std::function<FpMatrix(int)>& comp, int n) {
      FpQuotient qx = quot(X, n), qy = quot(Y, n);
      FpMatrix M(X.p, qy.dim, qx.dim);
      for (int i = 0; i < qx.dim; ++i) {
        auto rep = qx.representative(i);
        auto img = fp_apply(comp(n), rep);
        auto cls = qy.class_of(img);
        for (int j = 0; j < qy.dim; ++j) M.at(j, i) = cls[j];
      }
      return M;
    };
    auto incl = [&](int n) {  // D^n -> K^n
      FpMatrix M(p, Kp.dim_at(n), Dp.dim_at(n));
      int off = C.rank_at(n + 1);
      for (int i = 0; i < Dp.dim_at(n); ++i) M.at(off + i, i) = 1;
      return M;
    };
    auto proj = [&](int n) {  // K^n -> C^{n+1}
      FpMatrix M(p, Cp.dim_at(n + 1), Kp.dim_at(n));
      for (int i = 0; i < Cp.dim_at(n + 1); ++i) M.at(i, i) = 1;
      return M;
    };
    auto fmat = [&](int n) { return FpMatrix::from_int(f.comp_at(C, D, n), p); };

    int lo = std::min({C.bot(), D.bot(), K.bot()}) - 1;
    int hi = std::max({C.top(), D.top(), K.top()}) + 1;
    for (int n = lo; n <= hi; ++n) {
      // H^n C -> H^n D -> H^n K -> H^{n+1} C, with connecting map = projection
      FpMatrix a = induced(Cp, Dp, fmat, n);
      FpMatrix b = induced(Dp, Kp, incl, n);
      // proj: K^n -> C^{n+1} induces H^n K -> H^{n+1} C
      FpQuotient qk = quot(Kp, n), qc1 = quot(Cp, n + 1);
      FpMatrix c(p, qc1.dim, qk.dim);
      for (int i = 0; i < qk.dim; ++i) {
        auto rep = qk.representative(i);
        auto img = fp_apply(proj(n), rep);
        auto cls = qc1.class_of(img);
        for (int j = 0; j < qc1.dim; ++j) c.at(j, i) = cls[j];
      }
      FpMatrix a1 = induced(Cp, Dp, fmat, n + 1);
      // exactness at H^n D and H^n K and H^{n+1} C
      CHECK((b * a).is_zero());
      CHECK(rank(a) + rank(b) == quot(Dp, n).dim);
      CHECK((c * b).is_zero());
      CHECK(rank(b) + rank(c) == qk.dim);
      CHECK((a1 * c).is_zero());
      CHECK(rank(c) + rank(a1) == qc1.dim);
    }
  }
}

TEST_CASE("tensor-hom adjunction at equivariant homotopy classes") {
  gen::Rng rng(41);
  for (int t = 0; t < 6; ++t) {
    auto C = gen::random_complex(rng, 3, 2, 1);
    auto D = gen::random_complex(rng, 3, 2, 1);
    auto E = gen::random_complex(rng, 3, 2, 1);
    auto lhs = invariant_cohomology(hom_complex(tensor_complex(C, D).cx, E).cx);
    auto rhs = invariant_cohomology(hom_complex(C, hom_complex(D, E).cx).cx);
    CHECK(lhs[0] == rhs[0]);
  }
}

TEST_CASE("modular reduction and forget_action") {
  auto T = single(3, trivial_module(3, 1));
  auto F = modular_reduce(T);
  CHECK(F.dim_at(0) == 1);
  CHECK(F.p == 3);

  auto t = std_window(WindowKind::t, 3, 0, 3);
  auto Ft = modular_reduce(t);
  for (int n = 0; n + 2 <= 3; ++n)
    CHECK((Ft.diff_matrix(n + 1) * Ft.diff_matrix(n)).is_zero());

  auto R = single(3, regular_module(3, 1));
  auto FA = forget_action(R);
  CHECK(FA.rank_at(0) == 3);
  CHECK(has_trivial_action(FA));
  CHECK_FALSE(has_trivial_action(R));
}

TEST_CASE("fp hom complex computes derived homs over F_p") {
  // X = Y = F_p in degree 0: Hom(X, Y[n]) = F_p for n = 0, else 0
  FpComplex X;
  X.p = 3;
  X.dims[0] = 1;
  auto H = fp_hom_complex(X, X);
  auto dims = fp_cohomology_dims(H);
  CHECK(dims[0] == 1);
  CHECK(dims.size() == 1);

  // X = [F_p -> F_p] zero differential (reduction of cone(p)):
  // End in D(F_p) has dim 2 in degree 0
  FpComplex Y;
  Y.p = 3;
  Y.dims[-1] = 1;
  Y.dims[0] = 1;
  auto H2 = fp_hom_complex(Y, Y);
  auto dims2 = fp_cohomology_dims(H2);
  CHECK(dims2[0] == 2);
  CHECK(dims2[-1] == 1);
  CHECK(dims2[1] == 1);
}

TEST_CASE("fp hom complex d^2 = 0 and matches integral reduction on random pairs") {
  gen::Rng rng(53);
  for (int t = 0; t < 8; ++t) {
    auto C = gen::random_complex(rng, 3, 3, 2);
    auto D = gen::random_complex(rng, 3, 3, 2);
    auto H = fp_hom_complex(modular_reduce(C), modular_reduce(D));
    for (int n = H.bot(); n + 2 <= H.top(); ++n)
      CHECK((H.diff_matrix(n + 1) * H.diff_matrix(n)).is_zero());
    // reduction of the integral hom complex has the same cohomology dims
    auto HZ = modular_reduce(hom_complex(C, D).cx);
    CHECK(fp_cohomology_dims(H) == fp_cohomology_dims(HZ));
  }
}
