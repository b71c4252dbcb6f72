#pragma once

// Bounded cochain complexes of pi-modules: the periodic standard complexes,
// shift/cone/fiber/sum, tensor and hom complexes with Koszul signs, modular
// reduction, and cohomology read off degreewise by exact subquotients.

#include <functional>

#include "tatekit/fpmat.hpp"
#include "tatekit/pimod.hpp"

namespace tatekit {

struct PiComplex {
  long p = 3;
  std::map<int, PiModule> terms;     // only nonzero ranks stored
  std::map<int, IntMatrix> diffs;    // d^n : C^n -> C^{n+1}

  bool empty() const { return terms.empty(); }
  int bot() const { return terms.empty() ? 0 : terms.begin()->first; }
  int top() const { return terms.empty() ? -1 : terms.rbegin()->first; }
  int rank_at(int n) const;
  IntMatrix action_at(int n) const;       // identity of size 0 if absent
  IntMatrix diff_matrix(int n) const;     // rank(n+1) x rank(n), zero if absent
  void set_term(int n, PiModule m);       // drops rank-0 terms
  void set_diff(int n, IntMatrix d);      // drops empty/zero matrices
  bool operator==(const PiComplex& o) const = default;
};

// f : C -> D[shift]; components f^n : C^n -> D^{n+shift} with
// d_D f = (-1)^shift f d_C.
struct PiChainMap {
  int shift = 0;
  std::map<int, IntMatrix> comps;
  IntMatrix comp_at(const PiComplex& src, const PiComplex& tgt, int n) const;
};

void validate_complex(const PiComplex& C);
void validate_chain_map(const PiComplex& src, const PiComplex& tgt,
                        const PiChainMap& f);

enum class WindowKind { i, t, frak_p };

// Windows of the periodic standard complexes: terms are the rank-one free
// module, differentials alternate 1-g and the norm N. For kinds i and t the
// even-degree differential is 1-g; the mirrored projective window frak_p has
// 1-g in odd degrees so that its degree-0 augmentation is a resolution.
PiComplex std_window(WindowKind kind, long p, int lo, int hi);

PiComplex shift_complex(const PiComplex& C, int n);
PiComplex direct_sum(const PiComplex& C, const PiComplex& D);
// cone(f)^n = C^{n+1} (+) D^n with differential [[-d_C, 0], [f, d_D]].
PiComplex cone(const PiComplex& C, const PiComplex& D, const PiChainMap& f);
// fiber(f)^n = A^n (+) B^{n-1} = cone(f)[-1].
PiComplex fiber(const PiComplex& A, const PiComplex& B, const PiChainMap& f);

// Per-degree summand layout of a total complex: (tag, offset) pairs in order.
using Layout = std::map<int, std::vector<std::pair<int, int>>>;

struct TensorComplex {
  PiComplex cx;
  Layout layout;  // tag = degree a of the first factor
};
TensorComplex tensor_complex(const PiComplex& C, const PiComplex& D);

struct HomComplex {
  PiComplex cx;
  Layout layout;  // in degree n, tag a = hom_module(C^a, D^{a+n})
};
// E^n = (+)_a Hom(C^a, D^{a+n}), differential d_D o phi - (-1)^n phi o d_C,
// conjugation action. H^0 of the fixed subcomplex is the group of equivariant
// chain maps modulo equivariant homotopy.
HomComplex hom_complex(const PiComplex& C, const PiComplex& D);

struct FixedComplex {
  PiComplex cx;                     // trivial action
  std::map<int, IntMatrix> embed;   // fixed basis -> ambient, per degree
};
FixedComplex fixed_subcomplex(const PiComplex& C);

std::map<int, AbelianInvariants> cohomology(const PiComplex& C);
// Cohomology of the pi-fixed subcomplex; on termwise weakly injective
// complexes this computes the derived invariants.
std::map<int, AbelianInvariants> invariant_cohomology(const PiComplex& C);

struct FpComplex {
  long p = 3;
  std::map<int, int> dims;
  std::map<int, FpMatrix> diffs;
  int dim_at(int n) const;
  FpMatrix diff_matrix(int n) const;
  int bot() const { return dims.empty() ? 0 : dims.begin()->first; }
  int top() const { return dims.empty() ? -1 : dims.rbegin()->first; }
};

FpComplex modular_reduce(const PiComplex& C);
PiComplex forget_action(const PiComplex& C);
bool has_trivial_action(const PiComplex& C);

FpComplex fp_shift(const FpComplex& C, int n);
FpComplex fp_hom_complex(const FpComplex& X, const FpComplex& Y);
std::map<int, int> fp_cohomology_dims(const FpComplex& C);

// ker(d_out)/im(d_in) over F_p with canonical class coordinates.
struct FpQuotient {
  long p = 3;
  FpMatrix ker;       // ambient x k
  FpMatrix rel_rref;  // relations, row-reduced, in kernel coordinates
  std::vector<int> rel_pivots;
  int dim = 0;
  std::vector<long> class_of(const std::vector<long>& ambient) const;
  std::vector<long> representative(int i) const;  // ambient rep of basis class i
};
FpQuotient fp_quotient(const FpMatrix& d_in, const FpMatrix& d_out);

}  // namespace tatekit
