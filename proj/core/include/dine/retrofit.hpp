#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "dine/embedding.hpp"
#include "dine/graph.hpp"

namespace dine {

// Single-layer sigmoid autoencoder parameters (D input, K hidden).
struct AutoencoderParams {
  Eigen::MatrixXd w0;  // K x D
  Eigen::VectorXd b0;  // K
  Eigen::MatrixXd w1;  // D x K
  Eigen::VectorXd b1;  // D
};

enum class Optimizer { sgd, adam };

struct RetrofitConfig {
  int hidden_dim = 128;
  int iterations = 2000;
  double learning_rate = 0.1;
  Optimizer optimizer = Optimizer::adam;
  bool use_orth = true;
  bool use_size = true;
  std::uint64_t seed = 0;
};

struct LossBreakdown {
  double l_ac = 0.0;
  double l_orth = 0.0;
  double l_size = 0.0;
  double total = 0.0;  // l_ac plus the enabled regularizers
};

struct ForwardResult {
  Eigen::MatrixXd hidden;  // K x V, entries in (0,1)
  Eigen::MatrixXd recon;   // D x V
};

// hidden = sigmoid(w0 x + b0), recon = w1 hidden + b1.
ForwardResult forward(const AutoencoderParams& params,
                      const Eigen::MatrixXd& x);

// Mean squared reconstruction error, (1/|V|) sum_v ||x_v - recon_v||^2.
double loss_ac(const Eigen::MatrixXd& x, const Eigen::MatrixXd& recon);

// Per-dimension node scores P_{d,v} = h_d(v) * (sum_u h_d(u)) / K, the
// row-sum factorization of summing each rank-one mask h_d h_d^T / K over
// one endpoint.
Eigen::MatrixXd partition_matrix(const Eigen::MatrixXd& hidden);

// MSE between P P^T / ||P P^T||_F and I_K / sqrt(K), mean over the K^2
// entries. A zero P P^T compares the zero matrix against the target.
double loss_orth(const Eigen::MatrixXd& p);

// Gradient of loss_orth with respect to P. Exposed so the stationarity of
// the orthogonality term at P P^T = c I can be checked directly.
Eigen::MatrixXd loss_orth_grad(const Eigen::MatrixXd& p);

// log K + sum_d p_d log p_d over normalized mask sizes
// s_d = (sum_u h_d(u))^2 / K; zero at equal sizes, log K when one
// dimension holds all mass. Throws when every s_d is zero.
double loss_size(const Eigen::MatrixXd& hidden);

struct Gradients {
  Eigen::MatrixXd w0;
  Eigen::VectorXd b0;
  Eigen::MatrixXd w1;
  Eigen::VectorXd b1;
};

// Analytic gradients of the configured total loss, composed through the
// sigmoid hidden layer and the row-sum factorizations. The breakdown always
// reports all three terms; only the enabled ones enter total.
std::pair<LossBreakdown, Gradients> loss_and_gradients(
    const AutoencoderParams& params, const Eigen::MatrixXd& x, bool use_orth,
    bool use_size);

// Seeded uniform init in +-sqrt(6/(D+K)) for the weights, zero biases.
AutoencoderParams init_params(int input_dim, int hidden_dim,
                              std::uint64_t seed);

struct RetrofitResult {
  AutoencoderParams params;
  EmbeddingMatrix hidden;           // the retrofitted K-dim embedding
  std::vector<LossBreakdown> trace;  // iterations + 1 entries
};

// Full-batch optimization of the combined loss; deterministic per seed.
// Throws (with the failing iteration) if the loss turns non-finite.
RetrofitResult train_retrofit(const EmbeddingMatrix& x,
                              const RetrofitConfig& cfg);

// CSV "iter,l_ac,l_orth,l_size,total".
void save_loss_trace(const std::vector<LossBreakdown>& trace,
                     const std::string& path);

// Residuals of approximating the marginal utility of hypercube vectors by
// the rank-one mask term u_d v_d / K. Checks the exact identity
// residual = -(S - u_d v_d) / (K (K-1)) and the |residual| <= 1/K bound.
struct MaskResidualStats {
  Eigen::VectorXd max_abs_residual;   // per dimension
  Eigen::VectorXd mean_abs_residual;  // per dimension
  double overall_max = 0.0;
  double overall_mean = 0.0;
  double max_identity_error = 0.0;  // residual vs closed form
};

MaskResidualStats mask_residuals(const Eigen::MatrixXd& hidden,
                                 const std::vector<Edge>& pairs);

}  // namespace dine
