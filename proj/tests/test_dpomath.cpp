// Copyright 2026 The salvkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>
#include <cstring>

#include "salvkit/dpomath.hpp"
#include "salvkit/diagnostics.hpp"
#include "salvkit/prng.hpp"

using namespace salv;

namespace {

// Random batch with log-probs in [-5, -0.01] so finite-difference probes
// stay in the legal domain.
DpoBatch random_batch(Xoshiro256ss& rng, int w_len, int l_len, double beta) {
  auto fill = [&](std::vector<double>& v, int len) {
    v.resize(len);
    for (double& x : v) x = -0.01 - 4.99 * rng.next_unit();
  };
  DpoBatch b;
  b.beta = beta;
  fill(b.w_policy_logps, w_len);
  fill(b.w_ref_logps, w_len);
  fill(b.l_policy_logps, l_len);
  fill(b.l_ref_logps, l_len);
  b.w_mask.resize(w_len);
  b.l_mask.resize(l_len);
  for (int i = 0; i < w_len; ++i) b.w_mask[i] = rng.next_below(2) == 0;
  for (int i = 0; i < l_len; ++i) b.l_mask[i] = rng.next_below(2) == 0;
  b.w_mask[rng.next_below(w_len)] = true;  // masks may not be empty
  b.l_mask[rng.next_below(l_len)] = true;
  return b;
}

}  // namespace

TEST_CASE("masked_logratio basics") {
  CHECK(masked_logratio({-1, -2, -3}, {-1, -2, -3}, {true, true, true}) == 0.0);

  // policy - reference = [0.1, 0.2, 0.3], mask keeps the outer two.
  double v = masked_logratio({-0.9, -0.8, -0.7}, {-1.0, -1.0, -1.0},
                             {true, false, true});
  CHECK(v == doctest::Approx(0.4).epsilon(1e-12));

  CHECK_THROWS_AS(masked_logratio({-1}, {-1, -2}, {true}), Error);
  CHECK_THROWS_AS(masked_logratio({-1}, {-1}, {false}), Error);
  try {
    masked_logratio({-1}, {-1}, {false});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptyMask);
  }
}

TEST_CASE("masked_logratio matches a per-position loop on random cases") {
  Xoshiro256ss rng(808);
  for (int trial = 0; trial < 50; ++trial) {
    DpoBatch b = random_batch(rng, 50, 50, 0.1);
    double naive = 0;
    for (int i = 0; i < 50; ++i) {
      if (b.w_mask[i]) naive += b.w_policy_logps[i] - b.w_ref_logps[i];
    }
    double got = masked_logratio(b.w_policy_logps, b.w_ref_logps, b.w_mask);
    CHECK(std::abs(got - naive) <= 1e-12);
  }
}

TEST_CASE("identical policy and reference give loss ln 2") {
  DpoBatch b;
  b.w_policy_logps = b.w_ref_logps = {-1.5, -0.25, -3.0};
  b.l_policy_logps = b.l_ref_logps = {-2.0, -0.5};
  b.w_mask = {true, true, false};
  b.l_mask = {false, true};
  b.beta = 0.1;
  DpoResult r = dpo_loss(b);
  CHECK(r.margin == 0.0);
  CHECK(std::abs(r.loss - std::log(2.0)) <= 1e-12);
}

TEST_CASE("worked margin example") {
  // masked ratios +2 and -3 under beta = 0.1 give margin 0.5.
  DpoBatch b;
  b.w_policy_logps = {-1.0};
  b.w_ref_logps = {-3.0};
  b.l_policy_logps = {-4.0};
  b.l_ref_logps = {-1.0};
  b.w_mask = {true};
  b.l_mask = {true};
  b.beta = 0.1;
  DpoResult r = dpo_loss(b);
  CHECK(r.margin == doctest::Approx(0.5).epsilon(1e-12));
  // High-precision value of -ln sigmoid(0.5).
  long double sigma = 1.0L / (1.0L + std::exp(-0.5L));
  CHECK(std::abs(r.loss - static_cast<double>(-std::log(sigma))) <= 1e-12);
  CHECK(r.loss == doctest::Approx(0.474076984).epsilon(1e-9));
}

TEST_CASE("extreme margins stay finite") {
  DpoBatch b;
  b.w_policy_logps = {-0.0001};
  b.w_ref_logps = {-5000.0};
  b.l_policy_logps = {-5000.0};
  b.l_ref_logps = {-0.0001};
  b.w_mask = {true};
  b.l_mask = {true};
  b.beta = 0.1;
  DpoResult pos = dpo_loss(b);  // margin ~ +1000
  CHECK(std::isfinite(pos.loss));
  CHECK(pos.loss >= 0.0);
  CHECK(pos.loss <= 1e-100);

  std::swap(b.w_policy_logps, b.w_ref_logps);
  std::swap(b.l_policy_logps, b.l_ref_logps);
  DpoResult neg = dpo_loss(b);  // margin ~ -1000
  CHECK(std::isfinite(neg.loss));
  CHECK(neg.loss == doctest::Approx(-neg.margin).epsilon(1e-9));
}

TEST_CASE("gradients: masking, signs, magnitude at zero margin") {
  DpoBatch b;
  b.w_policy_logps = {-1, -1, -1};
  b.w_ref_logps = {-1, -1, -1};
  b.l_policy_logps = {-2, -2};
  b.l_ref_logps = {-2, -2};
  b.w_mask = {true, false, true};
  b.l_mask = {true, false};
  b.beta = 0.1;
  DpoGradients g = dpo_grad(b);
  CHECK(g.d_w_policy[0] == doctest::Approx(-0.05).epsilon(1e-12));
  CHECK(g.d_w_policy[1] == 0.0);
  CHECK(g.d_w_policy[2] == doctest::Approx(-0.05).epsilon(1e-12));
  CHECK(g.d_l_policy[0] == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(g.d_l_policy[1] == 0.0);
}

TEST_CASE("analytic gradients match central finite differences") {
  Xoshiro256ss rng(4242);
  for (double beta : {0.05, 0.1, 0.5}) {
    for (int trial = 0; trial < 10; ++trial) {
      DpoBatch b = random_batch(rng, 10 + static_cast<int>(rng.next_below(90)),
                                10 + static_cast<int>(rng.next_below(90)), beta);
      CHECK(dpo_grad_fd_error(b) <= 1e-6);
    }
  }
}

TEST_CASE("mask locality is bit-exact") {
  Xoshiro256ss rng(31337);
  DpoBatch b = random_batch(rng, 40, 40, 0.1);
  DpoResult r0 = dpo_loss(b);
  DpoGradients g0 = dpo_grad(b);

  DpoBatch perturbed = b;
  bool touched = false;
  for (int i = 0; i < 40; ++i) {
    if (!perturbed.w_mask[i]) {
      perturbed.w_policy_logps[i] -= 1.25;
      touched = true;
    }
    if (!perturbed.l_mask[i]) {
      perturbed.l_policy_logps[i] -= 0.75;
      touched = true;
    }
  }
  REQUIRE(touched);
  DpoResult r1 = dpo_loss(perturbed);
  DpoGradients g1 = dpo_grad(perturbed);
  CHECK(std::memcmp(&r0.loss, &r1.loss, sizeof(double)) == 0);
  CHECK(std::memcmp(&r0.margin, &r1.margin, sizeof(double)) == 0);
  CHECK(g0.d_w_policy == g1.d_w_policy);
  CHECK(g0.d_l_policy == g1.d_l_policy);
}

TEST_CASE("gradients scale as beta times sigmoid of the beta-free margin") {
  Xoshiro256ss rng(99);
  DpoBatch base = random_batch(rng, 30, 30, 1.0);
  double m0 = masked_logratio(base.w_policy_logps, base.w_ref_logps, base.w_mask) -
              masked_logratio(base.l_policy_logps, base.l_ref_logps, base.l_mask);
  for (double beta : {0.05, 0.1, 0.5, 1.0, 2.0}) {
    DpoBatch b = base;
    b.beta = beta;
    DpoGradients g = dpo_grad(b);
    double expected = -beta * stable_sigmoid(-beta * m0);
    for (std::size_t i = 0; i < b.w_mask.size(); ++i) {
      if (b.w_mask[i]) CHECK(std::abs(g.d_w_policy[i] - expected) <= 1e-12);
    }
  }
}

TEST_CASE("loss is convex and decreasing in the margin") {
  std::vector<double> losses;
  for (double m = -30.0; m <= 30.0; m += 0.25) {
    losses.push_back(stable_softplus(-m));
  }
  for (std::size_t i = 1; i < losses.size(); ++i) {
    CHECK(losses[i] <= losses[i - 1] + 1e-15);
  }
  for (std::size_t i = 1; i + 1 < losses.size(); ++i) {
    CHECK(losses[i + 1] - 2 * losses[i] + losses[i - 1] >= -1e-12);
  }
}

TEST_CASE("pass@k basics and the subset-enumeration oracle") {
  CHECK(pass_at_k({20, 20, 1}) == 1.0);
  CHECK(pass_at_k({2, 1, 1}) == doctest::Approx(0.5).epsilon(1e-12));

  // All C(5,3) subsets of 5 attempts with 2 correct: 9 of 10 contain one.
  int n = 5, c = 2, k = 3, hits = 0, total = 0;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      for (int d = b + 1; d < n; ++d) {
        ++total;
        if (a < c || b < c || d < c) ++hits;
      }
    }
  }
  CHECK(total == 10);
  CHECK(hits == 9);
  CHECK(pass_at_k({5, 2, 3}) == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("pass@k edge behavior and domain checks") {
  CHECK(pass_at_k({7, 5, 3}) == 1.0);  // n - c < k, exactly one
  CHECK(pass_at_k({50, 0, 10}) == 0.0);
  CHECK_THROWS_AS(pass_at_k({5, 6, 1}), Error);
  CHECK_THROWS_AS(pass_at_k({5, 2, 0}), Error);
  CHECK_THROWS_AS(pass_at_k({5, 2, 6}), Error);
  CHECK_THROWS_AS(pass_at_k({0, 0, 1}), Error);
}

TEST_CASE("pass@k monotonicity, bounds, and the k=1 identity") {
  for (int n : {1, 3, 10, 37}) {
    for (int c = 0; c <= n; ++c) {
      double prev_k = -1;
      for (int k = 1; k <= n; ++k) {
        double v = pass_at_k({n, c, k});
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        CHECK(v >= prev_k - 1e-15);
        prev_k = v;
        if (c > 0) {
          CHECK(pass_at_k({n, c, k}) >= pass_at_k({n, c - 1, k}) - 1e-15);
        }
      }
      CHECK(std::abs(pass_at_k({n, c, 1}) -
                     static_cast<double>(c) / static_cast<double>(n)) <= 1e-12);
    }
  }
}
