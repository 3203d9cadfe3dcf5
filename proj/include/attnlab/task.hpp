#pragma once

#include <Eigen/Dense>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "attnlab/config.hpp"
#include "attnlab/rng.hpp"

namespace attnlab {

// Haar-ish random orthogonal matrix: QR of a Gaussian with the R-diagonal
// sign fix so the result does not depend on Eigen's internal sign choices.
inline Eigen::MatrixXd random_orthogonal(int n, std::uint64_t seed) {
  CounterRng rng(seed, 0x0a7f);
  Eigen::MatrixXd g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = rng.next_normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  return q;
}

// Multi-task ICL problem instance: I tasks of dimensions d_i (sum = d),
// signal strengths lambda_i, label noise sigma^2, and the fixed rotations
// (Phi, Psi) of the coefficient decomposition. I = d_y is enforced.
struct TaskSpec {
  int task_count = 0;                // I (= d_y)
  std::vector<int> dims;             // d_i
  std::vector<double> signals;       // lambda_i >= 0
  double noise_var = 0.0;            // sigma^2
  Eigen::MatrixXd phi_rot;           // d x d orthogonal
  Eigen::MatrixXd psi_rot;           // d_y x d_y orthogonal

  int dim() const { return std::accumulate(dims.begin(), dims.end(), 0); }
  int label_dim() const { return task_count; }

  // index of the first coordinate of task i's block J_i
  int block_start(int i) const {
    return std::accumulate(dims.begin(), dims.begin() + i, 0);
  }

  double snr(int i) const {
    if (noise_var <= 0.0) return std::numeric_limits<double>::infinity();
    return signals[i] * dims[i] / (dim() * noise_var);
  }

  // phi_i = 1 + 1/SNR_i, with the sigma^2 = 0 convention phi_i = 1
  double phi(int i) const {
    if (noise_var <= 0.0 || signals[i] <= 0.0) return 1.0;
    return 1.0 + 1.0 / snr(i);
  }

  void validate() const {
    if (task_count <= 0) throw std::invalid_argument("TaskSpec: task count must be positive");
    if ((int)dims.size() != task_count || (int)signals.size() != task_count)
      throw std::invalid_argument("TaskSpec: dims/signals length must equal task count");
    for (int di : dims)
      if (di <= 0) throw std::invalid_argument("TaskSpec: task dimensions must be positive");
    for (double l : signals)
      if (l < 0) throw std::invalid_argument("TaskSpec: signal strengths must be >= 0");
    if (noise_var < 0) throw std::invalid_argument("TaskSpec: noise_var must be >= 0");
    int d = dim();
    if (phi_rot.rows() != d || phi_rot.cols() != d)
      throw std::invalid_argument("TaskSpec: phi_rot must be d x d");
    if (psi_rot.rows() != task_count || psi_rot.cols() != task_count)
      throw std::invalid_argument("TaskSpec: psi_rot must be d_y x d_y");
    double e1 = (phi_rot.transpose() * phi_rot - Eigen::MatrixXd::Identity(d, d)).norm();
    double e2 = (psi_rot.transpose() * psi_rot -
                 Eigen::MatrixXd::Identity(task_count, task_count)).norm();
    if (e1 > 1e-8 || e2 > 1e-8)
      throw std::invalid_argument("TaskSpec: rotations are not orthogonal");
  }

  static TaskSpec homogeneous(int tasks, int dim_per_task, double lambda, double noise,
                              int rot_seed = -1) {
    TaskSpec s;
    s.task_count = tasks;
    s.dims.assign(tasks, dim_per_task);
    s.signals.assign(tasks, lambda);
    s.noise_var = noise;
    int d = tasks * dim_per_task;
    if (rot_seed >= 0) {
      s.phi_rot = random_orthogonal(d, (std::uint64_t)rot_seed);
      s.psi_rot = random_orthogonal(tasks, (std::uint64_t)rot_seed + 1);
    } else {
      s.phi_rot = Eigen::MatrixXd::Identity(d, d);
      s.psi_rot = Eigen::MatrixXd::Identity(tasks, tasks);
    }
    return s;
  }
};

// One ICL context: Y = G^T X + eps exactly, y_q = G^T q exactly.
struct ContextSample {
  Eigen::MatrixXd X;    // d x L
  Eigen::MatrixXd Y;    // d_y x L
  Eigen::VectorXd q;    // d
  Eigen::VectorXd y_q;  // d_y
  Eigen::MatrixXd G;    // d x d_y
  Eigen::MatrixXd eps;  // d_y x L
};

// G = d^{-1/2} Phi blockdiag(g_1..g_I) Psi^T, g_i ~ N(0, lambda_i I_{d_i}).
// Gaussian g keeps the MMSE oracle's posterior mean exactly ridge regression.
inline Eigen::MatrixXd sample_coefficient(const TaskSpec& spec, CounterRng& rng) {
  int d = spec.dim(), dy = spec.label_dim();
  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(d, dy);
  for (int i = 0; i < spec.task_count; ++i) {
    double sd = std::sqrt(spec.signals[i]);
    int off = spec.block_start(i);
    for (int j = 0; j < spec.dims[i]; ++j) block(off + j, i) = sd * rng.next_normal();
  }
  double scale = 1.0 / std::sqrt((double)d);
  return scale * spec.phi_rot * block * spec.psi_rot.transpose();
}

inline ContextSample sample_context(const TaskSpec& spec, int L, CounterRng& rng) {
  if (L < 1) throw std::invalid_argument("sample_context: L must be >= 1");
  int d = spec.dim(), dy = spec.label_dim();
  ContextSample ctx;
  ctx.G = sample_coefficient(spec, rng);
  ctx.X.resize(d, L);
  for (int l = 0; l < L; ++l)
    for (int i = 0; i < d; ++i) ctx.X(i, l) = rng.next_normal();
  ctx.q.resize(d);
  for (int i = 0; i < d; ++i) ctx.q(i) = rng.next_normal();
  if (spec.noise_var > 0) {
    double sd = std::sqrt(spec.noise_var);
    ctx.eps.resize(dy, L);
    for (int l = 0; l < L; ++l)
      for (int i = 0; i < dy; ++i) ctx.eps(i, l) = sd * rng.next_normal();
  } else {
    ctx.eps = Eigen::MatrixXd::Zero(dy, L);
  }
  ctx.Y = ctx.G.transpose() * ctx.X + ctx.eps;
  ctx.y_q = ctx.G.transpose() * ctx.q;
  return ctx;
}

// closed form E||y_q||^2 = sum_i lambda_i d_i / d
inline double target_energy(const TaskSpec& spec) {
  double s = 0;
  for (int i = 0; i < spec.task_count; ++i) s += spec.signals[i] * spec.dims[i];
  return s / spec.dim();
}

// --- config-file (de)serialization -----------------------------------------
// keys: I, dims, signals, noise_var, rotation = identity | random:<seed>

inline TaskSpec task_spec_from_config(const Config& cfg, const std::string& prefix = "") {
  TaskSpec s;
  s.task_count = cfg.get<int>(prefix + "I");
  s.dims = cfg.get_list<int>(prefix + "dims");
  s.signals = cfg.get_list<double>(prefix + "signals");
  s.noise_var = cfg.get<double>(prefix + "noise_var");
  std::string rot = cfg.get_or<std::string>(prefix + "rotation", "identity");
  int d = std::accumulate(s.dims.begin(), s.dims.end(), 0);
  if (rot == "identity") {
    s.phi_rot = Eigen::MatrixXd::Identity(d, d);
    s.psi_rot = Eigen::MatrixXd::Identity(s.task_count, s.task_count);
  } else if (rot.rfind("random:", 0) == 0) {
    std::uint64_t seed = std::stoull(rot.substr(7));
    s.phi_rot = random_orthogonal(d, seed);
    s.psi_rot = random_orthogonal(s.task_count, seed + 1);
  } else {
    throw ConfigError(prefix + "rotation",
                      "rotation must be 'identity' or 'random:<seed>', got '" + rot + "'");
  }
  s.validate();
  return s;
}

inline std::string task_spec_to_config(const TaskSpec& spec, const std::string& rotation_tag) {
  std::ostringstream out;
  out << "I = " << spec.task_count << "\n";
  out << "dims = ";
  for (int i = 0; i < spec.task_count; ++i) out << (i ? "," : "") << spec.dims[i];
  out << "\nsignals = ";
  for (int i = 0; i < spec.task_count; ++i) out << (i ? "," : "") << spec.signals[i];
  out << "\nnoise_var = " << spec.noise_var << "\n";
  out << "rotation = " << rotation_tag << "\n";
  return out.str();
}

}  // namespace attnlab
