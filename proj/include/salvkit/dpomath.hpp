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

#ifndef SALVKIT_DPOMATH_HPP
#define SALVKIT_DPOMATH_HPP

#include <cstdint>
#include <vector>

namespace salv {

// Per-token log-probabilities for one preference pair under the policy and
// reference models, with boolean masks selecting the contrast-signal
// segments. The kernel owns no model: callers supply the numbers.
struct DpoBatch {
  std::vector<double> w_policy_logps;
  std::vector<double> w_ref_logps;
  std::vector<double> l_policy_logps;
  std::vector<double> l_ref_logps;
  std::vector<bool> w_mask;
  std::vector<bool> l_mask;
  double beta = 0.1;
};

// Sum over masked positions of policy[t] - reference[t]. Throws
// Error(LengthMismatch) / Error(EmptyMask).
double masked_logratio(const std::vector<double>& policy,
                       const std::vector<double>& reference,
                       const std::vector<bool>& mask);

struct DpoResult {
  double loss = 0.0;
  double margin = 0.0;
};

// margin = beta * masked_logratio(w) - beta * masked_logratio(l),
// loss = -log sigmoid(margin), computed as softplus(-margin) so margins of
// hundreds stay finite. Single-pair value; batch folding is the caller's.
DpoResult dpo_loss(const DpoBatch& batch);

struct DpoGradients {
  std::vector<double> d_w_policy;
  std::vector<double> d_l_policy;
};

// Analytic gradient of the loss with respect to the policy log-probs:
//   d/dw[t] = -beta * sigmoid(-margin) on masked positions, else 0;
//   d/dl[t] = +beta * sigmoid(-margin) on masked positions, else 0.
DpoGradients dpo_grad(const DpoBatch& batch);

// Largest relative error between the analytic gradient and central finite
// differences with step h over the masked positions.
double dpo_grad_fd_error(const DpoBatch& batch, double h = 1e-6);

struct PassAtKInput {
  int n = 0;  // attempts
  int c = 0;  // correct attempts
  int k = 0;  // sample size
};

// 1 - C(n-c, k) / C(n, k), evaluated by the stable product
// prod_{i<k} (n-c-i)/(n-i); exactly 1 when n-c < k. Throws
// Error(DomainError) unless 0 <= c <= n and 1 <= k <= n.
double pass_at_k(const PassAtKInput& in);

double stable_softplus(double x);
double stable_sigmoid(double x);

}  // namespace salv

#endif  // SALVKIT_DPOMATH_HPP
