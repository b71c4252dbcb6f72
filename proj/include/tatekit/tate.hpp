#pragma once

// Tate cohomology over a point and the stable (Verdier-quotient) category
// machinery: the 2-periodic invariant totalization, perfectness and
// classification, stable homs computed by two independent routes, and
// composition of stable morphisms through a projective window resolution.
//
// Throughout, the invariant subcomplex of C (x) t is handled in "slice"
// coordinates: the fixed lattice of M (x) Z[pi] (diagonal action) is the
// image of w |-> sum_j g^j w (x) g^j, so each summand contributes a copy of
// the underlying lattice of C^a and the periodic differentials become
// I - g^{-1} and the norm, with Koszul signs.

#include "tatekit/homcx.hpp"

namespace tatekit {

struct TateSide {
  int read_degree = 0;
  SubquotientClasses classes;
  std::vector<int> ppos;  // coordinates carrying the factor p
  int dim = 0;
};

struct TateVS {
  long p = 3;
  int t0 = 0, t1 = 0;
  std::vector<std::pair<int, int>> layout;  // (tag a, offset); same in all degrees
  int total_rank = 0;
  TateSide even, odd;
  const TateSide& side(int parity) const { return parity % 2 == 0 ? even : odd; }
};

TateVS tate_cohomology(const PiComplex& C);
// Honest finite-window computation (width >= 3) reading at the first interior
// even/odd degrees; used to verify window independence and the --window flag.
TateVS tate_cohomology_window(const PiComplex& C, int lo, int hi);

// F_p coordinates of an ambient cycle in a parity side, and representatives.
std::vector<long> tate_side_class(const TateSide& S, long p,
                                  const std::vector<Int>& ambient);
std::vector<Int> tate_side_representative(const TateSide& S, int i);

bool is_perfect(const PiComplex& C);

struct Classification {
  int k0 = 0, k1 = 0, k_class = 0;
};
Classification classify(const PiComplex& C);

// Induced map on Tate classes of a shift-0 chain map (parity preserved).
FpMatrix tate_induced(const PiComplex& C, const TateVS& tc, const PiComplex& D,
                      const TateVS& td, const PiChainMap& f, int parity);

// Classes of T^parity(C[1]) rewritten in T^{parity+1}(C): the totalizations
// agree verbatim after re-tagging, so this is class bookkeeping only.
FpMatrix tate_shift_reinterpret(const PiComplex& shifted, const TateVS& ts,
                                const PiComplex& orig, const TateVS& to,
                                int parity);

// Whether every induced action of the generator on cohomology is trivial
// (used by parity checks for orbit-triviality hypotheses).
bool action_trivial_on_cohomology(const PiComplex& C);

// ---------------------------------------------------------------------------
// Projective window resolutions P_C = sigma^{>= -depth} Tot(C (x) frak_p).

struct Resolution {
  long p = 3;
  PiComplex base;
  int depth = 0;
  bool has(int k, int a) const {
    return base.rank_at(a) > 0 && k - a >= -depth && k - a <= 0;
  }
  std::vector<int> tags(int k) const {
    std::vector<int> out;
    for (auto& [a, m] : base.terms)
      if (has(k, a)) out.push_back(a);
    return out;
  }
};

// A chain map P_C -> T[shift] stored by slices: the fixed maps out of the
// free summand C^a (x) Z[pi] of P^k are determined by their restriction to
// C^a (x) e, a plain matrix rank T^{k+shift} x rank C^a.
struct ResMap {
  int shift = 0;
  std::map<std::pair<int, int>, IntMatrix> slices;  // key (k, a)
  IntMatrix slice_at(const Resolution& R, const PiComplex& T, int k, int a) const;
};

// A window [mlo, mhi] of the fixed hom complex Hom(P_C, T[shift]).
struct ResHom {
  long p = 3;
  int shift = 0;
  struct Block {
    int k, a, offset, rows, cols;
  };
  std::map<int, std::vector<Block>> blocks;
  std::map<int, int> dims;
  std::map<int, IntMatrix> diffs;
  int dim_at(int m) const {
    auto it = dims.find(m);
    return it == dims.end() ? 0 : it->second;
  }
  IntMatrix diff_matrix(int m) const;
};

ResHom res_hom(const Resolution& R, const PiComplex& T, int shift, int mlo = -1,
               int mhi = 1);

std::vector<Int> res_map_vec(const ResHom& H, const Resolution& R,
                             const PiComplex& T, const ResMap& f);
ResMap res_map_from_vec(const ResHom& H, const std::vector<Int>& v);
bool res_map_is_cocycle(const ResHom& H, const Resolution& R, const PiComplex& T,
                        const ResMap& f);

struct StableClasses {
  ResHom hom;
  SubquotientClasses classes;
  bool elementary = false;  // all invariant factors p, no free part
  int dim = 0;
};
StableClasses stable_classes(const Resolution& R, const PiComplex& T, int shift);

// q[2n] o iota^n: the identity morphism pushed to stable level n.
ResMap identity_res_map(const Resolution& R, int even_shift);
// f[2] o iota: the colimit structure map raising the level by one.
ResMap bump_res_map(const ResMap& f);

// Comultiplication on the projective window, solved degree by degree and
// cached per (p, depth). comp[K] holds Delta(e) in degree -K as p x p
// coefficient matrices (j1, j2) per slot split s1 + s2 = K.
struct Diagonal {
  long p = 3;
  int depth = 0;
  std::vector<std::vector<IntMatrix>> comp;
};
const Diagonal& diagonal(long p, int depth);

// g o f through the diagonal: f: P_C -> D[f.shift], g: P_D -> E[g.shift],
// result: P_C -> E[f.shift + g.shift] with slices down to slot -out_depth.
ResMap compose_res_maps(const Resolution& RC, const PiComplex& D, const ResMap& f,
                        const Resolution& RD, const PiComplex& E, const ResMap& g,
                        int out_depth);

// Bilinear chain pairing X (x) Y -> Z by degree blocks; block (ax, ay) maps
// kron(x, y) coordinates to Z^{ax+ay}.
struct Pairing {
  std::map<std::pair<int, int>, IntMatrix> blocks;
  IntMatrix block_at(const PiComplex& X, const PiComplex& Y, const PiComplex& Z,
                     int ax, int ay) const;
};
bool pairing_is_chain(const PiComplex& X, const PiComplex& Y, const PiComplex& Z,
                      const Pairing& m);
// Composition pairing hom(D,E) (x) hom(C,D) -> hom(C,E).
Pairing composition_pairing(const PiComplex& C, const PiComplex& D,
                            const PiComplex& E, const HomComplex& hDE,
                            const HomComplex& hCD, const HomComplex& hCE);
// Evaluation pairing hom(A,B) (x) A -> B.
Pairing evaluation_pairing(const PiComplex& A, const PiComplex& B,
                           const HomComplex& hAB);

// m o (u (x) v) o Delta over the point: u: pw -> X[u.shift], v: pw -> Y[v.shift].
ResMap pair_res_maps(const Resolution& Rpt, const PiComplex& X, const ResMap& u,
                     const PiComplex& Y, const ResMap& v, const PiComplex& Z,
                     const Pairing& m, int out_depth);

// ---------------------------------------------------------------------------
// Stable homs with the two mandated routes.

struct StableHom {
  long p = 3;
  PiComplex src, tgt;
  int dim0 = 0, dim1 = 0;
  int level = 0;  // even reps target tgt[2*level], odd reps tgt[2*level+1]
  int depth = 0;
  StableClasses even, odd;
  std::vector<ResMap> reps0, reps1;
};

// Both routes executed; throws StabilizationFailure if the hom-complex Tate
// dimensions and the stabilized chain-map counts disagree, or if the colimit
// structure maps fail to be isomorphisms over three consecutive levels.
StableHom stable_hom(const PiComplex& C, const PiComplex& D, int min_level = -1);

// Pairwise composites of the representatives of g and f, expressed as a
// StableHom from src(f) to tgt(g) at the combined level. reps are ordered
// (g_i, f_j) with even-even and odd-odd composites in reps0, mixed in reps1.
StableHom compose(const StableHom& g, const StableHom& f);

// Class coordinates of a representative in the basis of a stable hom space;
// the rep is bumped with the structure map until its level matches.
std::vector<long> stable_class_coords(const StableHom& space, const ResMap& rep);

// Identity element of End(C) at the space's level.
ResMap stable_identity_rep(const StableHom& end_space);

// ---------------------------------------------------------------------------
// Bridge between stable representatives over the point and Tate classes.

struct PointModel {
  long p = 3;
  int depth = 0;
  Resolution R;           // resolution of the trivial rank-1 complex
  PiComplex pw;           // the same window as a complex
  TateVS pw_tvs;
  std::vector<Int> gen;   // normalized generator cocycle of T^0(pw)
};
PointModel point_model(long p, int depth);

// Tate class of a stable representative u: pw -> X[u.shift].
std::vector<long> tate_class_of_res_map(const PointModel& PM, const PiComplex& X,
                                        const TateVS& xt, const ResMap& u);

struct StableTateBridge {
  StableClasses sc;
  FpMatrix to_tate, from_tate;  // mutually inverse
};
StableTateBridge stable_tate_bridge(const PointModel& PM, const PiComplex& X,
                                    const TateVS& xt, int shift);
// Stable representative of a Tate class through the bridge.
ResMap res_map_of_tate_class(const PointModel& PM, const PiComplex& X,
                             const StableTateBridge& B,
                             const std::vector<long>& cls);

}  // namespace tatekit
