// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#include "biaslens/recsys/pf.h"

#include <algorithm>
#include <cmath>

#include "biaslens/stats.h"

namespace biaslens::recsys {

PfModel::PfModel(std::size_t n_users, std::size_t n_items, std::size_t factors, PfPriors p)
    : priors(p),
      theta_shape(Mat::Constant(n_users, factors, p.a)),
      theta_rate(Mat::Constant(n_users, factors, 1.0)),
      xi_shape(Vec::Constant(n_users, p.a_prime + factors * p.a)),
      xi_rate(Vec::Constant(n_users, p.a_prime / p.b_prime)),
      beta_shape(Mat::Constant(n_items, factors, p.c)),
      beta_rate(Mat::Constant(n_items, factors, 1.0)),
      eta_shape(Vec::Constant(n_items, p.c_prime + factors * p.c)),
      eta_rate(Vec::Constant(n_items, p.c_prime / p.d_prime)) {}

namespace {

void floor_at(Mat& m) { m = m.cwiseMax(kPfFloor); }
void floor_at(Vec& v) { v = v.cwiseMax(kPfFloor); }

Mat expected(const Mat& shape, const Mat& rate) { return shape.cwiseQuotient(rate); }

Mat expected_log(const Mat& shape, const Mat& rate) {
  Mat out(shape.rows(), shape.cols());
  for (Eigen::Index k = 0; k < shape.size(); ++k) {
    out.data()[k] = stats::digamma(shape.data()[k]) - std::log(rate.data()[k]);
  }
  return out;
}

double gamma_entropy(double shape, double rate) {
  return shape - std::log(rate) + std::lgamma(shape) + (1.0 - shape) * stats::digamma(shape);
}

}  // namespace

void PfModel::init(SeededRng& rng) {
  const auto k = theta_shape.cols();
  for (Eigen::Index n = 0; n < theta_shape.size(); ++n) {
    theta_shape.data()[n] = priors.a + 0.1 * rng.gamma(0.3, 1.0);
    theta_rate.data()[n] = priors.a_prime / priors.b_prime + 0.1 * rng.gamma(0.3, 1.0);
  }
  for (Eigen::Index n = 0; n < beta_shape.size(); ++n) {
    beta_shape.data()[n] = priors.c + 0.1 * rng.gamma(0.3, 1.0);
    beta_rate.data()[n] = priors.c_prime / priors.d_prime + 0.1 * rng.gamma(0.3, 1.0);
  }
  xi_shape.setConstant(priors.a_prime + k * priors.a);
  xi_rate = (priors.a_prime / priors.b_prime + expected(theta_shape, theta_rate).rowwise().sum().array())
                .matrix();
  eta_shape.setConstant(priors.c_prime + k * priors.c);
  eta_rate = (priors.c_prime / priors.d_prime + expected(beta_shape, beta_rate).rowwise().sum().array())
                 .matrix();
}

double PfModel::score(Index user, Index item) const {
  double s = 0.0;
  for (Eigen::Index k = 0; k < theta_shape.cols(); ++k) {
    s += (theta_shape(user, k) / theta_rate(user, k)) * (beta_shape(item, k) / beta_rate(item, k));
  }
  return s;
}

std::vector<ParamBlock> PfModel::parameters() const {
  return {to_block("theta_shape", theta_shape), to_block("theta_rate", theta_rate),
          to_block("xi_shape", xi_shape),       to_block("xi_rate", xi_rate),
          to_block("beta_shape", beta_shape),   to_block("beta_rate", beta_rate),
          to_block("eta_shape", eta_shape),     to_block("eta_rate", eta_rate)};
}

void PfModel::load_parameters(const std::vector<ParamBlock>& blocks) {
  from_block(blocks, "theta_shape", theta_shape);
  from_block(blocks, "theta_rate", theta_rate);
  from_block(blocks, "xi_shape", xi_shape);
  from_block(blocks, "xi_rate", xi_rate);
  from_block(blocks, "beta_shape", beta_shape);
  from_block(blocks, "beta_rate", beta_rate);
  from_block(blocks, "eta_shape", eta_shape);
  from_block(blocks, "eta_rate", eta_rate);
}

double pf_cavi_step(PfModel& m, const InteractionMatrix& train) {
  const PfPriors& p = m.priors;
  const Eigen::Index k = m.theta_shape.cols();
  const Mat elog_theta = expected_log(m.theta_shape, m.theta_rate);
  const Mat elog_beta = expected_log(m.beta_shape, m.beta_rate);

  // Responsibilities phi_ui ~ exp(E[log theta_u] + E[log beta_i]), folded
  // straight into the shape statistics.
  Mat theta_shape = Mat::Constant(m.theta_shape.rows(), k, p.a);
  Mat beta_shape = Mat::Constant(m.beta_shape.rows(), k, p.c);
  Eigen::RowVectorXd phi(k);
  for (Index u = 0; u < train.n_users(); ++u) {
    for (const Cell& c : train.row(u)) {
      phi = elog_theta.row(u) + elog_beta.row(c.index);
      phi = (phi.array() - phi.maxCoeff()).exp().matrix();
      phi /= phi.sum();
      theta_shape.row(u) += c.rating * phi;
      beta_shape.row(c.index) += c.rating * phi;
    }
  }

  // Users: factors, then activity.
  const Eigen::RowVectorXd beta_sum = expected(m.beta_shape, m.beta_rate).colwise().sum();
  m.theta_shape = theta_shape;
  const Vec e_xi = m.xi_shape.cwiseQuotient(m.xi_rate);
  m.theta_rate = (beta_sum.replicate(m.theta_rate.rows(), 1).colwise() + e_xi);
  floor_at(m.theta_shape);
  floor_at(m.theta_rate);
  const Mat e_theta = expected(m.theta_shape, m.theta_rate);
  m.xi_shape.setConstant(p.a_prime + k * p.a);
  m.xi_rate = (p.a_prime / p.b_prime + e_theta.rowwise().sum().array()).matrix();
  floor_at(m.xi_rate);

  // Items: factors, then popularity.
  const Eigen::RowVectorXd theta_sum = e_theta.colwise().sum();
  m.beta_shape = beta_shape;
  const Vec e_eta = m.eta_shape.cwiseQuotient(m.eta_rate);
  m.beta_rate = (theta_sum.replicate(m.beta_rate.rows(), 1).colwise() + e_eta);
  floor_at(m.beta_shape);
  floor_at(m.beta_rate);
  m.eta_shape.setConstant(p.c_prime + k * p.c);
  m.eta_rate = (p.c_prime / p.d_prime + expected(m.beta_shape, m.beta_rate).rowwise().sum().array())
                   .matrix();
  floor_at(m.eta_rate);

  return pf_elbo(m, train);
}

double pf_elbo(const PfModel& m, const InteractionMatrix& train) {
  const PfPriors& p = m.priors;
  const Eigen::Index k = m.theta_shape.cols();
  const Mat elog_theta = expected_log(m.theta_shape, m.theta_rate);
  const Mat elog_beta = expected_log(m.beta_shape, m.beta_rate);
  const Mat e_theta = expected(m.theta_shape, m.theta_rate);
  const Mat e_beta = expected(m.beta_shape, m.beta_rate);

  double elbo = 0.0;
  Eigen::RowVectorXd v(k);
  for (Index u = 0; u < train.n_users(); ++u) {
    for (const Cell& c : train.row(u)) {
      v = elog_theta.row(u) + elog_beta.row(c.index);
      const double mx = v.maxCoeff();
      const double lse = mx + std::log((v.array() - mx).exp().sum());
      elbo += c.rating * lse - std::lgamma(c.rating + 1.0);
    }
  }
  elbo -= e_theta.colwise().sum().dot(e_beta.colwise().sum());

  // Hierarchical Gamma priors and variational entropies, one side at a time.
  auto side = [&](const Mat& shape, const Mat& rate, const Mat& elog, const Mat& e,
                  const Vec& h_shape, const Vec& h_rate, double s, double s_prime,
                  double mean_prime) {
    double total = 0.0;
    const double prior_rate = s_prime / mean_prime;
    for (Eigen::Index r = 0; r < shape.rows(); ++r) {
      const double e_h = h_shape[r] / h_rate[r];
      const double elog_h = stats::digamma(h_shape[r]) - std::log(h_rate[r]);
      for (Eigen::Index j = 0; j < k; ++j) {
        total += s * elog_h - std::lgamma(s) + (s - 1.0) * elog(r, j) - e_h * e(r, j);
        total += gamma_entropy(shape(r, j), rate(r, j));
      }
      total += s_prime * std::log(prior_rate) - std::lgamma(s_prime) + (s_prime - 1.0) * elog_h -
               prior_rate * e_h;
      total += gamma_entropy(h_shape[r], h_rate[r]);
    }
    return total;
  };
  elbo += side(m.theta_shape, m.theta_rate, elog_theta, e_theta, m.xi_shape, m.xi_rate, p.a,
               p.a_prime, p.b_prime);
  elbo += side(m.beta_shape, m.beta_rate, elog_beta, e_beta, m.eta_shape, m.eta_rate, p.c,
               p.c_prime, p.d_prime);
  return elbo;
}

}  // namespace biaslens::recsys
