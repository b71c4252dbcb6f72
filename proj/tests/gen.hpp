#pragma once

// Deterministic random generators for modules, complexes and chain maps,
// shared by the test and acceptance suites.

#include <random>

#include "tatekit/homcx.hpp"

namespace tatekit::gen {

using Rng = std::mt19937;

inline int uniform(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// Random pi-module: a direct sum of standard building blocks, optionally
// conjugated by a small unimodular change of basis.
inline PiModule random_module(Rng& rng, long p, int max_rank) {
  std::vector<PiModule> parts;
  int rank = 0;
  int guard = 0;
  while (rank < max_rank && guard++ < 8) {
    int pick = uniform(rng, 0, 3);
    PiModule m;
    if (pick == 0) m = trivial_module(p, 1);
    else if (pick == 1 && rank + int(p) <= max_rank) m = regular_module(p, 1);
    else if (pick == 2 && rank + int(p) - 1 <= max_rank) m = norm_quotient_module(p);
    else m = trivial_module(p, 1);
    if (rank + m.rank > max_rank) break;
    rank += m.rank;
    parts.push_back(std::move(m));
    if (uniform(rng, 0, 1)) break;
  }
  if (parts.empty()) parts.push_back(trivial_module(p, 1));
  PiModule M = parts[0];
  for (size_t i = 1; i < parts.size(); ++i) {
    PiModule S{p, M.rank + parts[i].rank, IntMatrix::zero(M.rank + parts[i].rank, M.rank + parts[i].rank)};
    for (int r = 0; r < M.rank; ++r)
      for (int c = 0; c < M.rank; ++c) S.action.at(r, c) = M.action.at(r, c);
    for (int r = 0; r < parts[i].rank; ++r)
      for (int c = 0; c < parts[i].rank; ++c)
        S.action.at(M.rank + r, M.rank + c) = parts[i].action.at(r, c);
    M = std::move(S);
  }
  // occasional unimodular conjugation to leave the standard bases
  if (M.rank > 1 && uniform(rng, 0, 2) == 0) {
    IntMatrix S = IntMatrix::identity(M.rank);
    for (int k = 0; k < 2; ++k) {
      int i = uniform(rng, 0, M.rank - 1), j = uniform(rng, 0, M.rank - 1);
      if (i == j) continue;
      Int f(uniform(rng, -1, 1));
      if (f == 0) continue;
      for (int c = 0; c < M.rank; ++c) S.at(i, c) += f * S.at(j, c);
    }
    // S^-1 action S
    auto Sinv = solve(S, IntMatrix::identity(M.rank));
    M.action = *Sinv * M.action * S;
  }
  return M;
}

// Random equivariant map src -> tgt: small integer combination of a basis of
// the fixed sublattice of the hom module.
inline IntMatrix random_equivariant(Rng& rng, const PiModule& src, const PiModule& tgt) {
  IntMatrix basis = fixed_sublattice(hom_module(src, tgt));
  std::vector<Int> v(size_t(src.rank) * tgt.rank, Int(0));
  for (int c = 0; c < basis.cols; ++c) {
    int f = uniform(rng, -1, 1);
    if (!f) continue;
    for (int r = 0; r < basis.rows; ++r) v[r] += f * basis.at(r, c);
  }
  return unvec_hom(v, tgt.rank, src.rank);
}

// Random bounded complex with terms of rank <= max_rank and support inside
// [lo, lo + amplitude]: a sum of shifted modules and shifted two-term pieces.
inline PiComplex random_complex(Rng& rng, long p, int max_rank, int amplitude, int lo = 0) {
  PiComplex C;
  C.p = p;
  int pieces = uniform(rng, 1, 2);
  for (int k = 0; k < pieces; ++k) {
    PiComplex piece;
    piece.p = p;
    if (uniform(rng, 0, 1) == 0 || amplitude == 0) {
      int d = lo + uniform(rng, 0, amplitude);
      piece.set_term(d, random_module(rng, p, max_rank));
    } else {
      int d = lo + uniform(rng, 0, amplitude - 1);
      PiModule A = random_module(rng, p, max_rank);
      PiModule B = random_module(rng, p, max_rank);
      piece.set_term(d, A);
      piece.set_term(d + 1, B);
      piece.set_diff(d, random_equivariant(rng, A, B));
    }
    C = direct_sum(C, piece);
  }
  validate_complex(C);
  return C;
}

// Random chain map C -> D: random cocycle of the fixed subcomplex of the
// hom complex in degree 0.
inline PiChainMap random_chain_map(Rng& rng, const PiComplex& C, const PiComplex& D) {
  HomComplex H = hom_complex(C, D);
  PiChainMap f;
  f.shift = 0;
  if (H.cx.rank_at(0) == 0) return f;
  FixedComplex F = fixed_subcomplex(H.cx);
  if (F.cx.rank_at(0) == 0) return f;
  IntMatrix K = kernel_basis(F.cx.diff_matrix(0));
  if (K.cols == 0) return f;
  std::vector<Int> v(size_t(F.cx.rank_at(0)), Int(0));
  for (int c = 0; c < K.cols; ++c) {
    int fac = uniform(rng, -1, 1);
    if (!fac) continue;
    for (int r = 0; r < K.rows; ++r) v[r] += fac * K.at(r, c);
  }
  // push to ambient hom coordinates
  const IntMatrix& E = F.embed.at(0);
  std::vector<Int> amb(size_t(H.cx.rank_at(0)), Int(0));
  for (int r = 0; r < E.rows; ++r)
    for (int c = 0; c < E.cols; ++c)
      if (E.at(r, c) != 0 && v[c] != 0) amb[r] += E.at(r, c) * v[c];
  // split into components by layout
  for (auto& [a, off] : H.layout.at(0)) {
    int rs = C.rank_at(a), rt = D.rank_at(a);
    std::vector<Int> blk(amb.begin() + off, amb.begin() + off + size_t(rs) * rt);
    IntMatrix comp = unvec_hom(blk, rt, rs);
    if (!comp.is_zero()) f.comps[a] = comp;
  }
  validate_chain_map(C, D, f);
  return f;
}

}  // namespace tatekit::gen
