#include "ilw/normalform.hpp"

#include <cassert>
#include <cmath>

#include "ilw/profiles.hpp"
#include "ilw/symbols.hpp"

namespace ilw {

int OrderedTree::sibling(int a) const {
  const int p = parent[a];
  if (p < 0) throw std::domain_error("sibling: root has no sibling");
  return left[p] == a ? right[p] : left[p];
}

int OrderedTree::generation_of(int a) const {
  for (int k = 0; k < generations; ++k) {
    if (gen_root[k] == a) return k + 1;
  }
  throw std::domain_error("generation_of: node is terminal");
}

OrderedTree build_tree(int generations, const std::vector<int>& chronicle) {
  if (generations < 1) throw ConfigError("build_tree: need at least one generation");
  if (int(chronicle.size()) != generations - 1) throw ConfigError("build_tree: chronicle length mismatch");
  OrderedTree t;
  t.generations = generations;
  t.chronicle = chronicle;
  t.parent.assign(t.nodes(), -1);
  t.left.assign(t.nodes(), -1);
  t.right.assign(t.nodes(), -1);
  int next = 1;
  std::vector<int> terminals{0};
  for (int j = 1; j <= generations; ++j) {
    const int pick = (j == 1) ? 0 : chronicle[j - 2];
    if (pick < 0 || pick >= int(terminals.size())) throw ConfigError("build_tree: chronicle entry out of range");
    const int a = terminals[pick];
    const int c1 = next++, c2 = next++;
    t.left[a] = c1;
    t.right[a] = c2;
    t.parent[c1] = a;
    t.parent[c2] = a;
    t.gen_root.push_back(a);
    terminals[pick] = c1;
    terminals.insert(terminals.begin() + pick + 1, c2);
  }
  t.leaves = terminals;
  return t;
}

std::vector<OrderedTree> enumerate_trees(int generations) {
  if (generations < 1) throw ConfigError("enumerate_trees: need at least one generation");
  if (generations > 6) throw CostGuardError("enumerate_trees: J > 6 exceeds the desk-scale budget");
  std::vector<std::vector<int>> chronicles{{}};
  for (int j = 2; j <= generations; ++j) {
    std::vector<std::vector<int>> grown;
    grown.reserve(chronicles.size() * j);
    for (const auto& c : chronicles) {
      for (int pick = 0; pick < j; ++pick) {
        auto ext = c;
        ext.push_back(pick);
        grown.push_back(std::move(ext));
      }
    }
    chronicles = std::move(grown);
  }
  std::vector<OrderedTree> out;
  out.reserve(chronicles.size());
  for (const auto& c : chronicles) out.push_back(build_tree(generations, c));
  return out;
}

std::optional<IndexAssignment> IndexAssignment::build(const OrderedTree& tree,
                                                      const std::vector<long>& leaf_freqs,
                                                      long band) {
  if (leaf_freqs.size() != tree.leaves.size()) throw ConfigError("IndexAssignment: leaf count mismatch");
  IndexAssignment a;
  a.tree = &tree;
  a.freq.assign(tree.nodes(), 0);
  for (size_t i = 0; i < leaf_freqs.size(); ++i) a.freq[tree.leaves[i]] = leaf_freqs[i];
  // children always carry larger ids than their parent, so a descending
  // sweep sees both children before the parent
  for (int id = tree.nodes() - 1; id >= 0; --id) {
    if (!tree.is_terminal(id)) a.freq[id] = a.freq[tree.left[id]] + a.freq[tree.right[id]];
  }
  for (int id = 0; id < tree.nodes(); ++id) {
    if (a.freq[id] == 0 || std::abs(a.freq[id]) > band) return std::nullopt;
  }
  a.mu.resize(tree.generations);
  a.mu_tilde.resize(tree.generations);
  Real acc = 0;
  for (int k = 1; k <= tree.generations; ++k) {
    const int g = tree.gen_root[k - 1];
    a.mu[k - 1] = -3.0 * Real(a.freq[g]) * Real(a.freq[tree.left[g]]) * Real(a.freq[tree.right[g]]);
    acc += a.mu[k - 1];
    a.mu_tilde[k - 1] = acc;
  }
  return a;
}

SetSide set_membership(const IndexAssignment& assignment, int j, const NfParams& params) {
  params.validate();
  if (j < 1 || j > assignment.tree->generations) throw std::domain_error("set_membership: bad generation");
  if (j == 1) {
    const Real gate = std::pow(3 * params.k_threshold, 4);
    return std::abs(assignment.mu_tilde[0]) <= gate ? SetSide::Near : SetSide::NonResonant;
  }
  const Real gate = std::pow(Real(j + 2), 4) * std::abs(assignment.mu_tilde[j - 2]);
  return std::abs(assignment.mu_tilde[j - 1]) <= gate ? SetSide::Near : SetSide::NonResonant;
}

SpectralField eval_bilinear(Real t, const SpectralField& u) {
  const int band = u.grid().band();
  SpectralField out(u.grid());
  for (int xi = -band; xi <= band; ++xi) {
    if (xi == 0) continue;
    Complex acc(0, 0);
    for (int xi1 = -band; xi1 <= band; ++xi1) {
      const int xi2 = xi - xi1;
      if (xi1 == 0 || xi2 == 0 || xi2 < -band || xi2 > band) continue;
      const Real phase = t * (-3.0 * Real(xi) * Real(xi1) * Real(xi2));
      acc += Complex(std::cos(phase), std::sin(phase)) * u.coeff(xi1) * u.coeff(xi2);
    }
    out.set_coeff(xi, Complex(0, Real(xi)) * acc / kSqrtTwoPi);
  }
  out.set_mean_zero();
  return out;
}

namespace {

// Recursive exact summation over index assignments of one tree.
class TreeSummer {
 public:
  TreeSummer(const OrderedTree& tree, MultiKind kind, int j, Real t, const SpectralField& u,
             const NfParams& params)
      : tree_(tree), kind_(kind), j_(j), t_(t), u_(u), params_(params) {
    band_ = u.grid().band();
    out_ = VectorXcd::Zero(2 * band_ + 1);
    freq_.assign(tree.nodes(), 0);
    children_seen_.assign(tree.nodes(), 0);
    touched_.resize(tree.leaves.size());
    support_.reserve(2 * band_);
    for (int xi = -band_; xi <= band_; ++xi) {
      if (xi != 0 && u.coeff(xi) != Complex(0, 0)) support_.push_back(xi);
    }
    gate1_ = std::pow(3 * params.k_threshold, 4);
  }

  void run() { descend(0, Complex(1, 0)); }

  // accumulated output over the band, index xi + band
  const VectorXcd& accumulated() const { return out_; }

 private:
  // Set freq of `node` and complete any ancestors whose two children are
  // now known.  Ancestors whose child count was bumped are pushed onto
  // `touched` so the caller can unwind.  Returns false when a completed
  // node falls outside the admissible band (prune).
  bool settle(int node, long value, std::vector<int>& touched) {
    freq_[node] = value;
    int cur = node;
    while (tree_.parent[cur] >= 0) {
      const int p = tree_.parent[cur];
      touched.push_back(p);
      if (++children_seen_[p] < 2) return true;
      const long sum = freq_[tree_.left[p]] + freq_[tree_.right[p]];
      if (sum == 0 || std::abs(sum) > band_) return false;
      freq_[p] = sum;
      cur = p;
    }
    return true;
  }

  void descend(int leaf_pos, Complex partial) {
    if (leaf_pos == int(tree_.leaves.size())) {
      emit(partial);
      return;
    }
    const int node = tree_.leaves[leaf_pos];
    std::vector<int>& touched = touched_[leaf_pos];
    for (const int xi : support_) {
      touched.clear();
      if (settle(node, xi, touched)) descend(leaf_pos + 1, partial * u_.coeff(xi));
      for (const int p : touched) --children_seen_[p];
    }
  }

  void emit(const Complex& leaf_product) {
    // generation data
    Real mu_tilde[5];
    Real mu_last = 0;
    Real acc = 0;
    Real xi_prod = 1;
    for (int k = 1; k <= j_; ++k) {
      const int g = tree_.gen_root[k - 1];
      const Real mu = -3.0 * Real(freq_[g]) * Real(freq_[tree_.left[g]]) * Real(freq_[tree_.right[g]]);
      acc += mu;
      mu_tilde[k - 1] = acc;
      xi_prod *= Real(freq_[g]);
      if (k == j_) mu_last = mu;
    }

    const auto nonres = [&](int k) {
      if (k == 1) return std::abs(mu_tilde[0]) > gate1_;
      return std::abs(mu_tilde[k - 1]) > std::pow(Real(k + 2), 4) * std::abs(mu_tilde[k - 2]);
    };

    int need_nonres = 0;  // generations 1..need_nonres must be non-resonant
    bool need_near_last = false;
    switch (kind_) {
      case MultiKind::N0:
      case MultiKind::N2:
        need_nonres = j_;
        break;
      case MultiKind::N1:
        need_nonres = j_ - 1;
        need_near_last = true;
        break;
      case MultiKind::Edelta:
        need_nonres = j_ - 1;
        break;
    }
    for (int k = 1; k <= need_nonres; ++k) {
      if (!nonres(k)) return;
    }
    if (need_near_last && j_ >= 1 && nonres(j_)) return;

    Real denom = 1;
    const int denom_gens = (kind_ == MultiKind::N0) ? j_ : j_ - 1;
    for (int k = 1; k <= denom_gens; ++k) {
      assert(mu_tilde[k - 1] != 0);
      denom *= mu_tilde[k - 1];
    }

    Complex w;
    if (kind_ == MultiKind::Edelta) {
      const int g = tree_.gen_root[j_ - 1];
      const Complex phi = phi_delta(t_, Real(freq_[g]), Real(freq_[tree_.left[g]]),
                                    Real(freq_[tree_.right[g]]), params_.delta);
      const Real ph = (j_ >= 2) ? t_ * mu_tilde[j_ - 2] : 0;
      w = phi * Complex(0, 1) * Complex(std::cos(ph), std::sin(ph));
    } else {
      const Real ph = t_ * mu_tilde[j_ - 1];
      w = Complex(std::cos(ph), std::sin(ph));
      if (kind_ != MultiKind::N0) w *= Complex(0, 1);
    }
    (void)mu_last;

    const Real sign = (j_ % 2 == 1) ? 1 : -1;  // (-1)^{j-1}
    const Complex term = sign * norm_factor() * w * (xi_prod / denom) * leaf_product;
    out_[int(freq_[0]) + band_] += term;
  }

  Real norm_factor() const { return std::pow(kTwoPi, -0.5 * j_); }

  const OrderedTree& tree_;
  MultiKind kind_;
  int j_;
  Real t_;
  const SpectralField& u_;
  const NfParams& params_;
  int band_ = 0;
  Real gate1_ = 81;
  VectorXcd out_;
  std::vector<long> freq_;
  std::vector<int> children_seen_;
  std::vector<int> support_;
  std::vector<std::vector<int>> touched_;
};

}  // namespace

SpectralField eval_multilinear(MultiKind kind, int j, Real t, const SpectralField& u,
                               const NfParams& params) {
  params.validate();
  if (j < 1 || j > params.max_gen) throw ConfigError("eval_multilinear: generation outside [1, maxGen]");
  if (kind == MultiKind::Edelta && !(params.delta > 0)) {
    throw ConfigError("eval_multilinear: E_delta requires params.delta");
  }
  if (!u.mean_zero()) throw ConfigError("eval_multilinear: input must be mean-zero");

  const int band = u.grid().band();
  Real estimate = 1;
  for (int k = 1; k <= j; ++k) estimate *= k;
  estimate *= std::pow(Real(2 * band), Real(j + 1));
  if (estimate > 1e9) {
    throw CostGuardError("eval_multilinear: estimated term count " + std::to_string(estimate) +
                         " exceeds 1e9");
  }

  VectorXcd acc = VectorXcd::Zero(2 * band + 1);
  for (const OrderedTree& tree : enumerate_trees(j)) {
    TreeSummer summer(tree, kind, j, t, u, params);
    summer.run();
    acc += summer.accumulated();
  }
  const int cut = std::min(params.lattice_cut, band);
  SpectralField out(u.grid());
  for (int xi = -cut; xi <= cut; ++xi) {
    if (xi != 0) out.set_coeff(xi, acc[xi + band]);
  }
  out.set_mean_zero();
  return out;
}

namespace {

Real banded_l2(const SpectralField& f, int cut) {
  Real acc = 0;
  for (int xi = -cut; xi <= cut; ++xi) acc += std::norm(f.coeff(xi));
  return std::sqrt(acc);
}

void require_kdv(const Trajectory& traj, const char* who) {
  if (traj.problem.symbol.kind != SymbolKind::KdV) {
    throw ConfigError(std::string(who) + ": trajectory must be a KdV flow");
  }
}

}  // namespace

Real verify_step1(const Trajectory& traj, const NfParams& params, Real t) {
  params.validate();
  require_kdv(traj, "verify_step1");
  const int idx = traj.index_at(t);
  if (idx == 0 || idx + 1 >= traj.snapshots()) {
    throw std::domain_error("verify_step1: t must be an interior snapshot");
  }
  const Real h = traj.snapshot_spacing();
  const SpectralField w_minus = traj.interaction_state(idx - 1);
  const SpectralField w_mid = traj.interaction_state(idx);
  const SpectralField w_plus = traj.interaction_state(idx + 1);
  const Real t_minus = traj.times[idx - 1], t_plus = traj.times[idx + 1];

  const SpectralField n2 = eval_multilinear(MultiKind::N2, 1, t, w_mid, params);
  const SpectralField b_plus = eval_multilinear(MultiKind::N0, 1, t_plus, w_plus, params);
  const SpectralField b_minus = eval_multilinear(MultiKind::N0, 1, t_minus, w_minus, params);
  const SpectralField dd = (1 / (2 * h)) * (b_plus - b_minus);
  const SpectralField gen2 = eval_multilinear(MultiKind::N1, 2, t, w_mid, params) +
                             eval_multilinear(MultiKind::N2, 2, t, w_mid, params);
  const SpectralField residual = n2 - dd - gen2;
  return banded_l2(residual, std::min(params.lattice_cut, residual.grid().band()));
}

Real reconstruct(const Trajectory& traj, int generations, const NfParams& params, Real t) {
  params.validate();
  require_kdv(traj, "reconstruct");
  if (generations < 1 || generations > params.max_gen) {
    throw ConfigError("reconstruct: J outside [1, maxGen]");
  }
  const int idx = traj.index_at(t);
  const int cut = std::min(params.lattice_cut, traj.problem.initial.grid().band());

  std::vector<SpectralField> w;
  w.reserve(idx + 1);
  for (int k = 0; k <= idx; ++k) w.push_back(traj.interaction_state(k));

  // right-hand side accumulator starts from the initial data
  SpectralField rhs = w[0];

  if (idx > 0) {
    const Real h = traj.snapshot_spacing();
    // boundary terms sum_{j<=J-1} N0^(j) |_0^t
    for (int j = 1; j <= generations - 1; ++j) {
      rhs += eval_multilinear(MultiKind::N0, j, traj.times[idx], w[idx], params) -
             eval_multilinear(MultiKind::N0, j, traj.times[0], w[0], params);
    }
    // trapezoid time integrals of sum_{j<=J} N1^(j) + N2^(J)
    for (int k = 0; k <= idx; ++k) {
      SpectralField integrand(w[k].grid());
      for (int j = 1; j <= generations; ++j) {
        integrand += eval_multilinear(MultiKind::N1, j, traj.times[k], w[k], params);
      }
      integrand += eval_multilinear(MultiKind::N2, generations, traj.times[k], w[k], params);
      const Real weight = (k == 0 || k == idx) ? h / 2 : h;
      rhs += weight * integrand;
    }
  }

  const SpectralField residual = rhs - w[idx];
  return banded_l2(residual, cut);
}

Real BoundsReport::max_n0() const {
  Real m = 0;
  for (Real v : n0_ratio) m = std::max(m, v);
  return m;
}
Real BoundsReport::max_n1() const {
  Real m = 0;
  for (Real v : n1_ratio) m = std::max(m, v);
  return m;
}
Real BoundsReport::max_n2() const {
  Real m = 0;
  for (Real v : n2_sup) m = std::max(m, v);
  return m;
}

BoundsReport measure_bounds(int j, const NfParams& params, int samples, std::uint64_t seed) {
  params.validate();
  if (j < 1 || j > params.max_gen) throw ConfigError("measure_bounds: generation outside [1, maxGen]");
  constexpr Real kReportTheta = 0.3;

  BoundsReport report;
  report.j = j;
  report.k_threshold = params.k_threshold;
  report.theta = kReportTheta;
  report.tree_count = 1;
  for (int k = 2; k <= j; ++k) report.tree_count *= k;

  const int cut = params.lattice_cut;
  const int modes = std::max(4 * cut, 8);
  const Grid grid(modes);
  const Real n0_scale = std::pow(params.k_threshold, -4.0 * j * kReportTheta);
  const Real n1_scale = std::pow(params.k_threshold, 6.0 - 4.0 * j * kReportTheta);

  for (int s = 0; s < samples; ++s) {
    const SpectralField u = make_random_band_limited(grid, cut, seed + std::uint64_t(s));
    const SpectralField n0 = eval_multilinear(MultiKind::N0, j, 0, u, params);
    const SpectralField n1 = eval_multilinear(MultiKind::N1, j, 0, u, params);
    const SpectralField n2 = eval_multilinear(MultiKind::N2, j, 0, u, params);
    report.n0_ratio.push_back(banded_l2(n0, cut) / n0_scale);
    report.n1_ratio.push_back(banded_l2(n1, cut) / n1_scale);
    Real sup = 0;
    for (int xi = -cut; xi <= cut; ++xi) {
      if (xi == 0) continue;
      sup = std::max(sup, std::abs(n2.coeff(xi)) / std::abs(Real(xi)));
    }
    report.n2_sup.push_back(sup);
  }
  return report;
}

}  // namespace ilw
