#pragma once

#include <vector>

#include "msfa/normal_gamma.hpp"
#include "msfa/tvtp.hpp"
#include "msfa/types.hpp"

namespace msfa {

/// Which state-indexed block is constrained to be strictly ordered, and in
/// which direction across state indices.
struct OrderingRule {
  enum class Block { mean, variance };
  enum class Direction { increasing, decreasing };
  Block block = Block::mean;
  Direction direction = Direction::decreasing;
};

/// Everything that carries a state index and must be relabeled together.
struct ParameterDraw {
  RegimeParams regime;
  TvtpCoefficients tvtp;
  StateSequence states;
  std::vector<NormalGammaState> slope_scales;  // one per state when present
};

/// Relabel states so that new state j takes the parameters of old state
/// perm[j] (0-based). The logit coefficients are permuted on both indices and
/// then re-expressed against the fixed baseline by softmax shift, which
/// leaves every transition matrix unchanged.
ParameterDraw apply_state_permutation(const ParameterDraw& draw,
                                      const std::vector<int>& perm);

/// Return the draw unchanged if the ordered block satisfies the rule,
/// otherwise the consistently relabeled draw that does. Exact ties signal a
/// degenerate fit and are rejected.
ParameterDraw enforce_identification(const ParameterDraw& draw, const OrderingRule& rule);

}  // namespace msfa
