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

#include "salvkit/dpomath.hpp"

#include <algorithm>
#include <cmath>

#include "salvkit/diagnostics.hpp"

namespace salv {

double stable_softplus(double x) {
  // log(1 + e^x) without overflow on either tail.
  if (x > 0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

double stable_sigmoid(double x) {
  if (x >= 0) {
    double z = std::exp(-x);
    return 1.0 / (1.0 + z);
  }
  double z = std::exp(x);
  return z / (1.0 + z);
}

namespace {

void check_batch(const DpoBatch& b) {
  if (b.w_policy_logps.size() != b.w_ref_logps.size() ||
      b.w_policy_logps.size() != b.w_mask.size() ||
      b.l_policy_logps.size() != b.l_ref_logps.size() ||
      b.l_policy_logps.size() != b.l_mask.size()) {
    throw Error(ErrorKind::LengthMismatch,
                "batch lists and masks have mismatched lengths");
  }
  if (b.beta <= 0) {
    throw Error(ErrorKind::DomainError, "beta must be positive");
  }
}

}  // namespace

double masked_logratio(const std::vector<double>& policy,
                       const std::vector<double>& reference,
                       const std::vector<bool>& mask) {
  if (policy.size() != reference.size() || policy.size() != mask.size()) {
    throw Error(ErrorKind::LengthMismatch,
                "log-probability lists and mask have mismatched lengths");
  }
  bool any = false;
  double sum = 0.0;
  for (std::size_t i = 0; i < policy.size(); ++i) {
    if (!mask[i]) continue;
    any = true;
    sum += policy[i] - reference[i];
  }
  if (!any) {
    throw Error(ErrorKind::EmptyMask, "mask selects no tokens");
  }
  return sum;
}

DpoResult dpo_loss(const DpoBatch& batch) {
  check_batch(batch);
  double w = masked_logratio(batch.w_policy_logps, batch.w_ref_logps, batch.w_mask);
  double l = masked_logratio(batch.l_policy_logps, batch.l_ref_logps, batch.l_mask);
  DpoResult out;
  out.margin = batch.beta * w - batch.beta * l;
  out.loss = stable_softplus(-out.margin);
  return out;
}

DpoGradients dpo_grad(const DpoBatch& batch) {
  DpoResult r = dpo_loss(batch);
  double coeff = batch.beta * stable_sigmoid(-r.margin);
  DpoGradients g;
  g.d_w_policy.assign(batch.w_policy_logps.size(), 0.0);
  g.d_l_policy.assign(batch.l_policy_logps.size(), 0.0);
  for (std::size_t i = 0; i < batch.w_mask.size(); ++i) {
    if (batch.w_mask[i]) g.d_w_policy[i] = -coeff;
  }
  for (std::size_t i = 0; i < batch.l_mask.size(); ++i) {
    if (batch.l_mask[i]) g.d_l_policy[i] = coeff;
  }
  return g;
}

double dpo_grad_fd_error(const DpoBatch& batch, double h) {
  DpoGradients g = dpo_grad(batch);
  DpoBatch work = batch;
  double worst = 0.0;
  auto probe = [&](std::vector<double>& list, std::size_t i, double analytic) {
    double saved = list[i];
    list[i] = saved + h;
    double up = dpo_loss(work).loss;
    list[i] = saved - h;
    double down = dpo_loss(work).loss;
    list[i] = saved;
    double fd = (up - down) / (2 * h);
    double scale = std::max({std::abs(analytic), std::abs(fd), 1e-12});
    worst = std::max(worst, std::abs(fd - analytic) / scale);
  };
  for (std::size_t i = 0; i < work.w_policy_logps.size(); ++i) {
    probe(work.w_policy_logps, i, g.d_w_policy[i]);
  }
  for (std::size_t i = 0; i < work.l_policy_logps.size(); ++i) {
    probe(work.l_policy_logps, i, g.d_l_policy[i]);
  }
  return worst;
}

double pass_at_k(const PassAtKInput& in) {
  if (in.n < 1 || in.c < 0 || in.c > in.n || in.k < 1 || in.k > in.n) {
    throw Error(ErrorKind::DomainError,
                "pass@k requires 0 <= c <= n and 1 <= k <= n");
  }
  if (in.n - in.c < in.k) return 1.0;
  double prod = 1.0;
  for (int i = 0; i < in.k; ++i) {
    prod *= static_cast<double>(in.n - in.c - i) / static_cast<double>(in.n - i);
  }
  return 1.0 - prod;
}

}  // namespace salv
