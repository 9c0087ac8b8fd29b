#include "dine/retrofit.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "dine/random.hpp"

namespace dine {

ForwardResult forward(const AutoencoderParams& params,
                      const Eigen::MatrixXd& x) {
  if (params.w0.cols() != x.rows() || params.w0.rows() != params.b0.size() ||
      params.w1.cols() != params.w0.rows() ||
      params.w1.rows() != params.b1.size() || params.w1.rows() != x.rows())
    throw std::invalid_argument("autoencoder parameter shapes do not match");

  ForwardResult r;
  Eigen::MatrixXd z = (params.w0 * x).colwise() + params.b0;
  r.hidden = (1.0 + (-z.array()).exp()).inverse().matrix();
  r.recon = (params.w1 * r.hidden).colwise() + params.b1;
  return r;
}

double loss_ac(const Eigen::MatrixXd& x, const Eigen::MatrixXd& recon) {
  if (x.rows() != recon.rows() || x.cols() != recon.cols())
    throw std::invalid_argument("shape mismatch");
  return (recon - x).squaredNorm() / static_cast<double>(x.cols());
}

Eigen::MatrixXd partition_matrix(const Eigen::MatrixXd& hidden) {
  const Eigen::VectorXd row_sums = hidden.rowwise().sum();
  return (row_sums.asDiagonal() * hidden) / static_cast<double>(hidden.rows());
}

namespace {

struct OrthTerms {
  Eigen::MatrixXd gram;       // P P^T
  Eigen::MatrixXd deviation;  // gram/|gram|_F - I/sqrt(K)
  double gram_norm = 0.0;
  double loss = 0.0;
};

OrthTerms orth_terms(const Eigen::MatrixXd& p) {
  OrthTerms t;
  const int k = static_cast<int>(p.rows());
  t.gram = p * p.transpose();
  t.gram_norm = t.gram.norm();
  const Eigen::MatrixXd target =
      Eigen::MatrixXd::Identity(k, k) / std::sqrt(static_cast<double>(k));
  if (t.gram_norm > 0.0)
    t.deviation = t.gram / t.gram_norm - target;
  else
    t.deviation = -target;
  t.loss = t.deviation.squaredNorm() / static_cast<double>(k * k);
  return t;
}

}  // namespace

double loss_orth(const Eigen::MatrixXd& p) { return orth_terms(p).loss; }

namespace {

Eigen::MatrixXd orth_grad_from(const OrthTerms& t, const Eigen::MatrixXd& p) {
  const int k = static_cast<int>(p.rows());
  if (t.gram_norm == 0.0) return Eigen::MatrixXd::Zero(p.rows(), p.cols());
  // d loss / d gram, through the Frobenius normalization.
  const double inner = (t.deviation.array() * t.gram.array()).sum();
  const Eigen::MatrixXd g_gram =
      (2.0 / static_cast<double>(k * k)) *
      (t.deviation / t.gram_norm -
       (inner / (t.gram_norm * t.gram_norm * t.gram_norm)) * t.gram);
  // gram is symmetric in P: d/dP = (G + G^T) P = 2 G P.
  return 2.0 * g_gram * p;
}

}  // namespace

Eigen::MatrixXd loss_orth_grad(const Eigen::MatrixXd& p) {
  return orth_grad_from(orth_terms(p), p);
}

double loss_size(const Eigen::MatrixXd& hidden) {
  const int k = static_cast<int>(hidden.rows());
  const Eigen::VectorXd row_sums = hidden.rowwise().sum();
  const Eigen::VectorXd sizes =
      row_sums.array().square() / static_cast<double>(k);
  const double total = sizes.sum();
  if (!(total > 0.0)) throw std::invalid_argument("all mask sizes are zero");
  double entropy_sum = 0.0;
  for (int d = 0; d < k; ++d) {
    const double p = sizes[d] / total;
    if (p > 0.0) entropy_sum += p * std::log(p);
  }
  return std::log(static_cast<double>(k)) + entropy_sum;
}

std::pair<LossBreakdown, Gradients> loss_and_gradients(
    const AutoencoderParams& params, const Eigen::MatrixXd& x, bool use_orth,
    bool use_size) {
  const ForwardResult fwd = forward(params, x);
  const Eigen::MatrixXd& h = fwd.hidden;
  const double k = static_cast<double>(h.rows());
  const double num_nodes = static_cast<double>(x.cols());

  LossBreakdown loss;
  loss.l_ac = loss_ac(x, fwd.recon);

  // Reconstruction path.
  const Eigen::MatrixXd g_recon = (2.0 / num_nodes) * (fwd.recon - x);
  Gradients grads;
  grads.w1 = g_recon * h.transpose();
  grads.b1 = g_recon.rowwise().sum();
  Eigen::MatrixXd g_hidden = params.w1.transpose() * g_recon;

  // Both regularizers reach H through its row sums.
  const Eigen::VectorXd row_sums = h.rowwise().sum();
  const Eigen::MatrixXd p = partition_matrix(h);
  const OrthTerms orth = orth_terms(p);
  loss.l_orth = orth.loss;
  loss.l_size = loss_size(h);

  if (use_orth) {
    const Eigen::MatrixXd g_p = orth_grad_from(orth, p);
    // P_{d,v} = r_d h_{d,v} / K:
    // dL/dh_{d,v} = (r_d G_{d,v} + <G_{d,:}, h_{d,:}>) / K.
    const Eigen::VectorXd row_dots = (g_p.array() * h.array()).rowwise().sum();
    g_hidden.noalias() +=
        (((g_p.array().colwise() * row_sums.array()).colwise() +
          row_dots.array()) /
         k)
            .matrix();
  }

  if (use_size) {
    const Eigen::VectorXd sizes = row_sums.array().square() / k;
    const double total = sizes.sum();
    const Eigen::ArrayXd probs = sizes.array() / total;
    const double mean_log = (probs * probs.log()).sum();
    // d(size loss)/ds_d = (log p_d - sum_q p_q log p_q) / total,
    // ds_d/dh_{d,v} = 2 r_d / K, constant across the row.
    const Eigen::VectorXd g_rows =
        (((probs.log() - mean_log) / total) *
         (2.0 * row_sums.array() / k))
            .matrix();
    g_hidden.colwise() += g_rows;
  }

  // Sigmoid backprop into the encoder.
  const Eigen::MatrixXd g_z =
      (g_hidden.array() * h.array() * (1.0 - h.array())).matrix();
  grads.w0 = g_z * x.transpose();
  grads.b0 = g_z.rowwise().sum();

  loss.total = loss.l_ac + (use_orth ? loss.l_orth : 0.0) +
               (use_size ? loss.l_size : 0.0);
  return {loss, std::move(grads)};
}

AutoencoderParams init_params(int input_dim, int hidden_dim,
                              std::uint64_t seed) {
  if (hidden_dim < 2)
    throw std::invalid_argument("hidden dim must be >= 2");
  if (input_dim < 1) throw std::invalid_argument("input dim must be >= 1");

  const double bound = std::sqrt(6.0 / (input_dim + hidden_dim));
  Rng rng(derive_seed(seed, "retrofit-init"));
  auto fill = [&](Eigen::MatrixXd& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      for (Eigen::Index i = 0; i < m.rows(); ++i)
        m(i, j) = (2.0 * rng.uniform() - 1.0) * bound;
  };
  AutoencoderParams params;
  params.w0.resize(hidden_dim, input_dim);
  params.w1.resize(input_dim, hidden_dim);
  fill(params.w0);
  fill(params.w1);
  params.b0 = Eigen::VectorXd::Zero(hidden_dim);
  params.b1 = Eigen::VectorXd::Zero(input_dim);
  return params;
}

namespace {

// Adam state per parameter block.
struct AdamState {
  Eigen::MatrixXd m, v;
  explicit AdamState(Eigen::Index rows, Eigen::Index cols)
      : m(Eigen::MatrixXd::Zero(rows, cols)),
        v(Eigen::MatrixXd::Zero(rows, cols)) {}

  void step(Eigen::Ref<Eigen::MatrixXd> param, const Eigen::MatrixXd& grad,
            double lr, int t) {
    constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    m = beta1 * m + (1.0 - beta1) * grad;
    v = beta2 * v.array().matrix() +
        (1.0 - beta2) * grad.array().square().matrix();
    const double bc1 = 1.0 - std::pow(beta1, t);
    const double bc2 = 1.0 - std::pow(beta2, t);
    param.array() -=
        lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + eps);
  }
};

}  // namespace

RetrofitResult train_retrofit(const EmbeddingMatrix& x,
                              const RetrofitConfig& cfg) {
  if (cfg.hidden_dim < 2)
    throw std::invalid_argument("hidden dim must be >= 2");
  if (cfg.iterations < 0)
    throw std::invalid_argument("iteration count must be >= 0");
  if (!(cfg.learning_rate > 0.0))
    throw std::invalid_argument("learning rate must be positive");

  AutoencoderParams params = init_params(x.dim(), cfg.hidden_dim, cfg.seed);

  // Train on X / sqrt(D): the per-node reconstruction error then carries a
  // per-entry scale, keeping the regularizers effective at any input
  // dimensionality. Downstream consumers only ever see the hidden matrix,
  // which is invariant to this rescaling of the reconstruction target.
  const Eigen::MatrixXd input =
      x.values / std::sqrt(static_cast<double>(x.dim()));

  AdamState s_w0(params.w0.rows(), params.w0.cols());
  AdamState s_b0(params.b0.size(), 1);
  AdamState s_w1(params.w1.rows(), params.w1.cols());
  AdamState s_b1(params.b1.size(), 1);

  RetrofitResult result;
  result.trace.reserve(cfg.iterations + 1);

  auto [loss, grads] =
      loss_and_gradients(params, input, cfg.use_orth, cfg.use_size);
  result.trace.push_back(loss);

  for (int iter = 1; iter <= cfg.iterations; ++iter) {
    if (cfg.optimizer == Optimizer::adam) {
      s_w0.step(params.w0, grads.w0, cfg.learning_rate, iter);
      s_b0.step(params.b0, grads.b0, cfg.learning_rate, iter);
      s_w1.step(params.w1, grads.w1, cfg.learning_rate, iter);
      s_b1.step(params.b1, grads.b1, cfg.learning_rate, iter);
    } else {
      params.w0 -= cfg.learning_rate * grads.w0;
      params.b0 -= cfg.learning_rate * grads.b0;
      params.w1 -= cfg.learning_rate * grads.w1;
      params.b1 -= cfg.learning_rate * grads.b1;
    }
    try {
      std::tie(loss, grads) =
          loss_and_gradients(params, input, cfg.use_orth, cfg.use_size);
    } catch (const std::invalid_argument& e) {
      // e.g. the hidden layer saturated to exact zeros
      throw std::runtime_error("retrofit diverged at iteration " +
                               std::to_string(iter) + " (" + e.what() + ")");
    }
    if (!std::isfinite(loss.total))
      throw std::runtime_error("retrofit diverged at iteration " +
                               std::to_string(iter) + " (loss not finite)");
    result.trace.push_back(loss);
  }

  result.params = std::move(params);
  result.hidden.values = forward(result.params, input).hidden;
  result.hidden.ids = x.ids;
  return result;
}

void save_loss_trace(const std::vector<LossBreakdown>& trace,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write loss trace: " + path);
  out << "iter,l_ac,l_orth,l_size,total\n";
  char buf[160];
  for (std::size_t i = 0; i < trace.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,%.17g\n", i,
                  trace[i].l_ac, trace[i].l_orth, trace[i].l_size,
                  trace[i].total);
    out << buf;
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

MaskResidualStats mask_residuals(const Eigen::MatrixXd& hidden,
                                 const std::vector<Edge>& pairs) {
  const int k = static_cast<int>(hidden.rows());
  if (k < 2) throw std::invalid_argument("need at least 2 dimensions");

  MaskResidualStats stats;
  stats.max_abs_residual = Eigen::VectorXd::Zero(k);
  stats.mean_abs_residual = Eigen::VectorXd::Zero(k);
  if (pairs.empty()) return stats;

  const double denom = static_cast<double>(k) * (k - 1);
  double sum_all = 0.0;
  for (const auto& [u, v] : pairs) {
    const double dot = hidden.col(u).dot(hidden.col(v));
    for (int d = 0; d < k; ++d) {
      const double prod = hidden(d, u) * hidden(d, v);
      const double mu = (k * prod - dot) / denom;
      const double residual = mu - prod / k;
      const double closed_form = -(dot - prod) / denom;
      stats.max_identity_error = std::max(
          stats.max_identity_error, std::abs(residual - closed_form));
      const double mag = std::abs(residual);
      stats.max_abs_residual[d] = std::max(stats.max_abs_residual[d], mag);
      stats.mean_abs_residual[d] += mag;
      sum_all += mag;
    }
  }
  stats.mean_abs_residual /= static_cast<double>(pairs.size());
  stats.overall_max = stats.max_abs_residual.maxCoeff();
  stats.overall_mean = sum_all / (static_cast<double>(pairs.size()) * k);
  return stats;
}

}  // namespace dine
