#include "msfa/identification.hpp"

#include <algorithm>
#include <numeric>

namespace msfa {

ParameterDraw apply_state_permutation(const ParameterDraw& draw,
                                      const std::vector<int>& perm) {
  const int H = draw.regime.n_states();
  if (static_cast<int>(perm.size()) != H)
    throw DimensionError("apply_state_permutation: permutation size mismatch");

  ParameterDraw out = draw;
  for (int j = 0; j < H; ++j) {
    out.regime.mu[j] = draw.regime.mu[perm[j]];
    out.regime.phi.row(j) = draw.regime.phi.row(perm[j]);
    out.regime.sigma2[j] = draw.regime.sigma2[perm[j]];
  }

  std::vector<int> inv(H);
  for (int j = 0; j < H; ++j) inv[perm[j]] = j;
  for (auto& s : out.states.states) s = inv[s - 1] + 1;

  if (draw.tvtp.n_states() == H) {
    for (int j = 0; j < H; ++j) {
      for (int k = 0; k < H; ++k) out.tvtp.gamma(j, k) = draw.tvtp.gamma(perm[j], perm[k]);
      out.tvtp.beta.row(j) = draw.tvtp.beta.row(perm[j]);
    }
    // restore the baseline-zero normalization; a softmax shift per source,
    // so transition probabilities are untouched
    const int b = draw.tvtp.h0 - 1;
    const Eigen::RowVectorXd gshift = out.tvtp.gamma.row(b);
    const Eigen::RowVectorXd bshift = out.tvtp.beta.row(b);
    out.tvtp.gamma.rowwise() -= gshift;
    out.tvtp.beta.rowwise() -= bshift;
    out.tvtp.gamma.row(b).setZero();
    out.tvtp.beta.row(b).setZero();
  }

  if (static_cast<int>(draw.slope_scales.size()) == H)
    for (int j = 0; j < H; ++j) out.slope_scales[j] = draw.slope_scales[perm[j]];

  return out;
}

ParameterDraw enforce_identification(const ParameterDraw& draw, const OrderingRule& rule) {
  const int H = draw.regime.n_states();
  if (H <= 1) return draw;

  const VectorXd& key = rule.block == OrderingRule::Block::mean
                            ? draw.regime.mu
                            : draw.regime.sigma2;
  if (rule.block == OrderingRule::Block::mean && !draw.regime.flags.mean)
    throw ParameterError("enforce_identification: ordering block is not state-dependent");
  if (rule.block == OrderingRule::Block::variance && !draw.regime.flags.var)
    throw ParameterError("enforce_identification: ordering block is not state-dependent");

  for (int i = 0; i < H; ++i)
    for (int j = i + 1; j < H; ++j)
      if (key[i] == key[j])
        throw NumericalError("enforce_identification: tied ordering block (degenerate fit)");

  std::vector<int> perm(H);
  std::iota(perm.begin(), perm.end(), 0);
  const bool desc = rule.direction == OrderingRule::Direction::decreasing;
  std::sort(perm.begin(), perm.end(), [&](int a, int b) {
    return desc ? key[a] > key[b] : key[a] < key[b];
  });

  bool identity = true;
  for (int j = 0; j < H; ++j) identity = identity && perm[j] == j;
  if (identity) return draw;
  return apply_state_permutation(draw, perm);
}

}  // namespace msfa
