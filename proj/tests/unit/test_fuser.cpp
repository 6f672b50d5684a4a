#include <cmath>
#include <random>

#include "doctest.h"
#include "mpf/errors.hpp"
#include "mpf/fuser.hpp"

using namespace mpf;
using doctest::Approx;

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Textbook form of the mixing update, independent of the production code.
Belief reference_update(const Belief& b, double alpha, double eta, double gamma, const Belief& b0) {
  (void)b;
  const double a = std::pow(alpha, eta);
  return {(1 - gamma) * a / (1 + a) + gamma * b0.b_l, (1 - gamma) / (1 + a) + gamma * b0.b_r};
}

}  // namespace

TEST_CASE("performance metric") {
  const std::vector<AgentState> preds{{3, 4, 0, 0, 1}, {1, 0, 0, 0, 1}, {0, 2, 0, 0, 1}};
  CHECK(perf_metric(preds, {1, 0, 0, 0, 1}, 1.0) == 1.0);
  CHECK(perf_metric(preds, {2, 0, 0, 0, 1}, 1.0) == Approx(std::exp(-1.0)));
  CHECK(perf_metric(preds, {-2, 2, 0, 0, 1}, 1.0) == Approx(std::exp(-2.0)));
  // Far misses stay strictly positive.
  CHECK(perf_metric(preds, {1e6, 0, 0, 0, 1}, 1.0) > 0.0);
}

TEST_CASE("likelihood ratio") {
  CHECK(likelihood_ratio(0.3, 0.3, {0.5, 0.5}) == Approx(1.0));
  CHECK(likelihood_ratio(std::exp(-1.0), std::exp(-2.0), {0.5, 0.5}) == Approx(std::exp(1.0)));
  CHECK(likelihood_ratio(std::exp(-2.0), std::exp(-1.0), {0.5, 0.5}) == Approx(std::exp(-1.0)));
  CHECK(likelihood_ratio(1.0, 1.0, {0.8, 0.2}) == Approx(4.0));
}

TEST_CASE("belief update direct evaluations") {
  FuserConfig cfg;
  for (double eta : {0.1, 0.5, 1.0})
    for (double gamma : {0.0, 0.02, 0.5}) {
      cfg.eta = eta;
      cfg.gamma = gamma;
      const Belief b = belief_update({0.5, 0.5}, 1.0, cfg);
      CHECK(b.b_l == Approx(0.5));
      CHECK(b.b_r == Approx(0.5));
    }

  cfg = FuserConfig{};
  const Belief worked = belief_update({0.5, 0.5}, std::exp(1.0), cfg);
  const double expected = 0.98 * sigmoid(0.1) + 0.01;
  CHECK(worked.b_l == Approx(expected).epsilon(1e-12));
  CHECK(worked.b_r == Approx(1.0 - expected).epsilon(1e-12));

  cfg.gamma = 1.0;
  cfg.b0 = {0.3, 0.7};
  const Belief pinned = belief_update({0.9, 0.1}, 1e30, cfg);
  CHECK(pinned.b_l == Approx(0.3));
  CHECK(pinned.b_r == Approx(0.7));
}

TEST_CASE("belief update matches the reference formula and its invariants") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Belief b{0.5, 0.5};
  for (int k = 0; k < 10000; ++k) {
    FuserConfig cfg;
    cfg.eta = 0.05 + 0.95 * u(rng);
    cfg.gamma = 0.001 + 0.3 * u(rng);
    cfg.b0 = {0.2 + 0.6 * u(rng), 0.0};
    cfg.b0.b_r = 1.0 - cfg.b0.b_l;
    const double alpha = std::exp(30.0 * (u(rng) - 0.5));
    const Belief next = belief_update(b, alpha, cfg);
    const Belief ref = reference_update(b, alpha, cfg.eta, cfg.gamma, cfg.b0);
    CHECK(std::abs(next.b_l - ref.b_l) < 1e-12);
    CHECK(std::abs(next.b_l + next.b_r - 1.0) < 1e-12);
    CHECK(next.b_l > 0.0);
    CHECK(next.b_r > 0.0);
    const double floor = cfg.gamma * std::min(cfg.b0.b_l, cfg.b0.b_r);
    CHECK(next.b_l >= floor - 1e-15);
    CHECK(next.b_l <= 1.0 - floor + 1e-15);
    b = next;
  }
}

TEST_CASE("belief update is strictly increasing in alpha") {
  const FuserConfig cfg;
  double last = 0.0;
  for (double la = -20.0; la <= 20.0; la += 0.5) {
    const double now = belief_update({0.6, 0.4}, std::exp(la), cfg).b_l;
    CHECK(now > last);
    last = now;
  }
}

TEST_CASE("belief update rejects bad ratios and configs") {
  const FuserConfig cfg;
  CHECK_THROWS_AS(belief_update({0.5, 0.5}, std::nan(""), cfg), ValidationError);
  CHECK_THROWS_AS(belief_update({0.5, 0.5}, INFINITY, cfg), ValidationError);
  CHECK_THROWS_AS(belief_update({0.5, 0.5}, 0.0, cfg), ValidationError);
  FuserConfig bad;
  bad.eta = 0.0;
  CHECK_THROWS_AS(validate(bad), ValidationError);
  bad = FuserConfig{};
  bad.b0 = {0.7, 0.7};
  CHECK_THROWS_AS(validate(bad), ValidationError);
  bad = FuserConfig{};
  bad.lambda = -1.0;
  CHECK_THROWS_AS(validate(bad), ValidationError);
}

TEST_CASE("damped fixed point") {
  FuserConfig cfg;
  cfg.gamma = 0.0;
  for (double eta : {0.1, 0.3, 0.6}) {
    cfg.eta = eta;
    const double g = std::exp(1.0);
    const double r_star = std::pow(g, eta / (1.0 - eta));
    Belief b = cfg.b0;
    int k = 0;
    while (std::abs(b.b_l / b.b_r - r_star) > 1e-9 && k < 200) {
      b = belief_update(b, likelihood_ratio(g, 1.0, b), cfg);
      ++k;
    }
    CHECK(k < 200);
  }
}

TEST_CASE("belief sampler") {
  CHECK(belief_sample_counts({1.0, 0.0}, 20, 4) == std::pair{20, 0});
  CHECK(belief_sample_counts({0.0, 1.0}, 20, 4) == std::pair{0, 20});
  CHECK(belief_sample_counts({0.3, 0.7}, 20, 4) == belief_sample_counts({0.3, 0.7}, 20, 4));

  const int reps = 10000;
  double total = 0.0;
  for (int r = 0; r < reps; ++r) {
    const auto [nl, nr] = belief_sample_counts({0.5, 0.5}, 20, 1000 + r);
    CHECK(nl + nr == 20);
    total += nl;
  }
  const double sd_of_mean = std::sqrt(20 * 0.25) / std::sqrt(static_cast<double>(reps));
  CHECK(std::abs(total / reps - 10.0) <= 3.0 * sd_of_mean);
}

TEST_CASE("fuse keeps prefixes in order") {
  auto make = [](const std::string& label, int n, double base) {
    TrajectorySamples s;
    s.source_label = label;
    for (int i = 0; i < n; ++i) s.samples.push_back(Trajectory{{{base + i, 0, 0, 0, 1}}, 0.5});
    return s;
  };
  const auto l = make("l", 20, 0.0), r = make("r", 20, 100.0);
  auto f = fuse(l, r, 12, 8);
  REQUIRE(f.size() == 20);
  for (int i = 0; i < 12; ++i) CHECK(f.samples[i].states[0].x == i);
  for (int i = 0; i < 8; ++i) CHECK(f.samples[12 + i].states[0].x == 100.0 + i);
  CHECK(fuse(l, r, 20, 0).samples == l.samples);
  CHECK(fuse(l, r, 0, 20).samples == r.samples);
  CHECK_THROWS_AS(fuse(l, r, 21, 0), ValidationError);
}

TEST_CASE("episode fuser follows the one-step protocol") {
  EpisodeFuser fuser(FuserConfig{});
  CHECK_FALSE(fuser.observe({0, 0, 0, 0, 1}).has_value());
  CHECK(fuser.belief() == Belief{0.5, 0.5});

  TrajectorySamples l{{Trajectory{{{1, 0, 0, 0, 2}}, 0.5}}, "l"};
  TrajectorySamples r{{Trajectory{{{2, 0, 0, 0, 2}}, 0.5}}, "r"};
  fuser.remember(l, r);
  const auto alpha = fuser.observe({1, 0, 0, 0, 2});
  REQUIRE(alpha.has_value());
  CHECK(*alpha == Approx(std::exp(1.0)));
  CHECK(fuser.belief().b_l == Approx(0.98 * sigmoid(0.1) + 0.01));

  fuser.reset();
  CHECK(fuser.belief() == Belief{0.5, 0.5});
  CHECK_FALSE(fuser.observe({1, 0, 0, 0, 3}).has_value());
}

TEST_CASE("prior mixing improves tracking of a switching process") {
  // Two-state process: the better predictor alternates with per-step
  // probability gamma. Evidence is a noisy log-likelihood ratio. Accuracy is
  // the fraction of steps whose argmax belief names the better predictor.
  // Runs with eta = 1: at eta = 0.1 the damped update forgets within a few
  // steps whether or not gamma mixes in b0, so both variants score the same.
  const double gamma = 0.02;
  const int steps = 2000, seeds = 100;
  int better = 0;
  for (int seed = 0; seed < seeds; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> noise(0.0, 1.0);
    FuserConfig with, without;
    with.eta = without.eta = 1.0;
    with.gamma = gamma;
    without.gamma = 0.0;
    Belief bw = with.b0, bo = without.b0;
    bool learned_better = true;
    int hit_w = 0, hit_o = 0;
    for (int t = 0; t < steps; ++t) {
      if (u(rng) < gamma) learned_better = !learned_better;
      const double llr = (learned_better ? 0.5 : -0.5) + noise(rng);
      const double gl = std::exp(std::min(llr, 0.0)), gr = std::exp(std::min(-llr, 0.0));
      bw = belief_update(bw, likelihood_ratio(gl, gr, bw), with);
      bo = belief_update(bo, likelihood_ratio(gl, gr, bo), without);
      hit_w += (bw.b_l > 0.5) == learned_better;
      hit_o += (bo.b_l > 0.5) == learned_better;
    }
    better += hit_w > hit_o;
  }
  CHECK(better >= 90);
}
