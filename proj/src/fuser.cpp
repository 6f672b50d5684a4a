#include "mpf/fuser.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mpf/errors.hpp"
#include "mpf/seeding.hpp"

namespace mpf {

void validate(const Belief& b) {
  if (!(b.b_l >= 0.0) || !(b.b_r >= 0.0) || std::abs(b.b_l + b.b_r - 1.0) > 1e-12)
    throw ValidationError("belief must lie on the simplex");
}

void validate(const FuserConfig& cfg) {
  if (!(cfg.eta > 0.0 && cfg.eta <= 1.0)) throw ValidationError("eta must lie in (0, 1]");
  if (!(cfg.gamma >= 0.0 && cfg.gamma <= 1.0)) throw ValidationError("gamma must lie in [0, 1]");
  if (!(cfg.lambda > 0.0)) throw ValidationError("lambda must be positive");
  validate(cfg.b0);
}

double perf_metric(std::span<const AgentState> one_step_preds, const AgentState& observed, double lambda) {
  if (one_step_preds.empty()) throw ValidationError("performance metric needs at least one prediction");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : one_step_preds) best = std::min(best, distance(p.position(), observed.position()));
  // Keep the likelihood strictly positive even for absurd misses.
  return std::max(std::exp(-lambda * best), std::numeric_limits<double>::min());
}

double likelihood_ratio(double gamma_l, double gamma_r, const Belief& b) { return (gamma_l * b.b_l) / (gamma_r * b.b_r); }

Belief belief_update(const Belief& b, double alpha, const FuserConfig& cfg) {
  (void)b;  // the previous belief enters only through alpha
  if (!std::isfinite(alpha) || !(alpha > 0.0)) throw ValidationError("likelihood ratio must be finite and positive");
  // a / (1 + a) with a = alpha^eta, as a logistic in log space.
  const double z = cfg.eta * std::log(alpha);
  const double p_l = z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
  const double p_r = z >= 0.0 ? std::exp(-z) / (1.0 + std::exp(-z)) : 1.0 / (1.0 + std::exp(z));
  return Belief{(1.0 - cfg.gamma) * p_l + cfg.gamma * cfg.b0.b_l, (1.0 - cfg.gamma) * p_r + cfg.gamma * cfg.b0.b_r};
}

std::pair<int, int> belief_sample_counts(const Belief& b, int n, std::uint64_t seed) {
  Rng rng(seed);
  int n_l = 0;
  for (int i = 0; i < n; ++i)
    if (uniform01(rng) < b.b_l) ++n_l;
  return {n_l, n - n_l};
}

TrajectorySamples fuse(const TrajectorySamples& learned, const TrajectorySamples& rule, int n_l, int n_r) {
  if (n_l < 0 || n_r < 0 || static_cast<std::size_t>(n_l) > learned.size() ||
      static_cast<std::size_t>(n_r) > rule.size())
    throw ValidationError("fuse: requested more samples than available");
  TrajectorySamples out;
  out.source_label = "mpf";
  out.samples.reserve(n_l + n_r);
  out.samples.insert(out.samples.end(), learned.samples.begin(), learned.samples.begin() + n_l);
  out.samples.insert(out.samples.end(), rule.samples.begin(), rule.samples.begin() + n_r);
  return out;
}

EpisodeFuser::EpisodeFuser(FuserConfig cfg) : cfg_(cfg), belief_(cfg.b0) { validate(cfg_); }

void EpisodeFuser::reset() {
  belief_ = cfg_.b0;
  learned_history_.clear();
  rule_history_.clear();
}

std::optional<double> EpisodeFuser::observe(const AgentState& current) {
  if (learned_history_.empty() || rule_history_.empty()) return std::nullopt;
  const double g_l = perf_metric(learned_history_, current, cfg_.lambda);
  const double g_r = perf_metric(rule_history_, current, cfg_.lambda);
  const double alpha = likelihood_ratio(g_l, g_r, belief_);
  belief_ = belief_update(belief_, alpha, cfg_);
  return alpha;
}

void EpisodeFuser::remember(const TrajectorySamples& learned, const TrajectorySamples& rule) {
  learned_history_.clear();
  rule_history_.clear();
  for (const auto& s : learned.samples) learned_history_.push_back(s.states.front());
  for (const auto& s : rule.samples) rule_history_.push_back(s.states.front());
}

}  // namespace mpf
