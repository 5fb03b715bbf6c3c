#pragma once

// Ordered-tree combinatorics and exact evaluation of the tree-indexed
// multilinear operators arising from iterated normal form reductions of
// KdV, on truncated frequency lattices.
//
// An ordered tree of J generations is a binary tree that remembers the
// order its terminal nodes were expanded (the chronicle).  Each non-root
// expansion step j contributes a generation triple
// (xi^{(j)}, xi1^{(j)}, xi2^{(j)}), a resonance mu_j = -3 xi xi1 xi2 and
// the partial sum mu~_j.  The operators N0/N1/N2/E_delta weigh the leaf
// coefficients with phases e^{i t mu~}, derivative factors prod xi^{(k)},
// modulation denominators prod mu~_k, and indicator sets splitting nearly
// resonant from highly non-resonant interactions.
//
// Lattice convention: leaf and internal frequencies range over the input
// field's full stored band (that is what makes the identities exact for
// band-limited Galerkin trajectories); params.lattice_cut restricts the
// output frequencies only.

#include <cstdint>
#include <optional>
#include <vector>

#include "ilw/evolve.hpp"
#include "ilw/spectral.hpp"

namespace ilw {

/// Estimated work exceeds the desk-scale budget.
class CostGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OrderedTree {
  int generations = 0;          // J
  std::vector<int> chronicle;   // entry j-2: terminal of T_{j-1} expanded, planar order
  std::vector<int> parent;      // -1 for the root
  std::vector<int> left, right; // -1 for terminal nodes
  std::vector<int> gen_root;    // gen_root[k-1] = node expanded at generation k
  std::vector<int> leaves;      // terminal nodes of T_J, left to right

  int nodes() const { return 2 * generations + 1; }
  bool is_terminal(int a) const { return left[a] < 0; }
  int sibling(int a) const;
  /// Generation in which a non-terminal node became a parent.
  int generation_of(int a) const;
};

OrderedTree build_tree(int generations, const std::vector<int>& chronicle);

/// All J! ordered trees of J generations, chronicle-lexicographic order.
/// Guarded at J <= 6.
std::vector<OrderedTree> enumerate_trees(int generations);

struct NfParams {
  Real k_threshold = 1;  // K >= 1 in the (3K)^4 first-generation cut
  Real delta = 0;        // required by the E_delta error operator
  int lattice_cut = 8;   // output frequencies restricted to |xi| <= cut
  int max_gen = 3;       // Jmax; hard cap 4

  void validate() const {
    if (!(k_threshold >= 1)) throw ConfigError("NfParams: K must be >= 1");
    if (lattice_cut < 1) throw ConfigError("NfParams: latticeCut must be positive");
    if (max_gen < 1 || max_gen > 4) throw ConfigError("NfParams: maxGen must be in [1, 4]");
  }
};

/// Frequencies assigned to every node of a tree, with the derived
/// generation data.  build() returns nullopt when any node frequency is
/// zero or leaves the band.
struct IndexAssignment {
  const OrderedTree* tree = nullptr;
  std::vector<long> freq;        // per node
  std::vector<Real> mu;          // mu_k, k = 1..J (index k-1)
  std::vector<Real> mu_tilde;    // partial sums

  static std::optional<IndexAssignment> build(const OrderedTree& tree,
                                              const std::vector<long>& leaf_freqs, long band);
};

enum class SetSide { Near, NonResonant };  // A_j vs A_j^c

/// Membership of generation j in the nearly resonant set A_j:
/// j = 1 compares |mu~_1| against (3K)^4, j >= 2 compares |mu~_j| against
/// (j+2)^4 |mu~_{j-1}|.
SetSide set_membership(const IndexAssignment& assignment, int j, const NfParams& params);

/// The KdV bilinear operator N^(1)(t)(u)(xi) =
/// sum_{xi = xi1 + xi2, xi xi1 xi2 != 0} e^{i t Xi_KdV} i xi u^(xi1) u^(xi2) / sqrt(2pi),
/// by direct lattice summation over the stored band.
SpectralField eval_bilinear(Real t, const SpectralField& u);

enum class MultiKind { N0, N1, N2, Edelta };

/// Exact summation of the generation-j operator over all trees in T(j)
/// and all in-band index assignments.
SpectralField eval_multilinear(MultiKind kind, int j, Real t, const SpectralField& u,
                               const NfParams& params);

/// Residual of the first differentiation-by-parts identity
/// N2^(1)(w)(t) = d/dt N0^(1)(w)(t) + N^(2)(w)(t) along a KdV trajectory,
/// with the time derivative by centered differencing of N0^(1) at the
/// snapshot spacing.
Real verify_step1(const Trajectory& traj, const NfParams& params, Real t);

/// Residual of the J-step normal form reconstruction: evaluates initial
/// data + boundary terms + trapezoid time integrals against w^(t) on
/// |xi| <= lattice_cut.
Real reconstruct(const Trajectory& traj, int generations, const NfParams& params, Real t);

struct BoundsReport {
  int j = 0;
  Real k_threshold = 1;
  Real theta = 0.3;
  long tree_count = 0;
  std::vector<Real> n0_ratio;  // ||N0^(j)(u)|| / K^{-4 j theta}, per sample
  std::vector<Real> n1_ratio;  // ||N1^(j)(u)|| / K^{6 - 4 j theta}
  std::vector<Real> n2_sup;    // sup_xi |N~2^(j)(u)(xi)|

  Real max_n0() const;
  Real max_n1() const;
  Real max_n2() const;
};

/// Empirical operator sizes over random mean-zero unit-norm fields;
/// a measurement, not a pass/fail check.
BoundsReport measure_bounds(int j, const NfParams& params, int samples, std::uint64_t seed = 7);

}  // namespace ilw
