#include "seqvqe/noise.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numeric>

namespace seqvqe {

namespace {

using cd = std::complex<double>;

// Fixed-step RK4 for rho' = -i[H, rho] + sum_k gamma_k D[L_k](rho).
struct LindbladSystem {
  Eigen::MatrixXcd hamiltonian;
  std::vector<std::pair<double, Eigen::MatrixXcd>> collapse;

  Eigen::MatrixXcd derivative(const Eigen::MatrixXcd& rho) const {
    Eigen::MatrixXcd d = cd(0, -1) * (hamiltonian * rho - rho * hamiltonian);
    for (const auto& [gamma, op] : collapse) {
      const Eigen::MatrixXcd op_dag_op = op.adjoint() * op;
      d += gamma * (op * rho * op.adjoint() -
                    0.5 * (op_dag_op * rho + rho * op_dag_op));
    }
    return d;
  }

  // Integrates from rho over [0, t_end], sampling the observable every
  // `stride` steps into (times, values).
  void integrate(Eigen::MatrixXcd rho, double t_end, double dt, int stride,
                 const std::function<double(const Eigen::MatrixXcd&)>& observe,
                 std::vector<double>& times, std::vector<double>& values) const {
    const long steps = static_cast<long>(std::ceil(t_end / dt));
    for (long k = 0; k < steps; ++k) {
      if (k % stride == 0) {
        times.push_back(k * dt);
        values.push_back(observe(rho));
      }
      const Eigen::MatrixXcd k1 = derivative(rho);
      const Eigen::MatrixXcd k2 = derivative(rho + 0.5 * dt * k1);
      const Eigen::MatrixXcd k3 = derivative(rho + 0.5 * dt * k2);
      const Eigen::MatrixXcd k4 = derivative(rho + dt * k3);
      rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    times.push_back(steps * dt);
    values.push_back(observe(rho));
  }
};

// Least-squares slope of log(values) over the window [lo, hi]; throws when
// the samples are not exponential to within residual_tol.
double fit_decay_rate(const std::vector<double>& times,
                      const std::vector<double>& values, double lo, double hi,
                      double residual_tol) {
  std::vector<double> t, y;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < lo || times[i] > hi) continue;
    if (values[i] <= 0.0)
      throw FitQualityError("fit_decay_rate: non-positive observable");
    t.push_back(times[i]);
    y.push_back(std::log(values[i]));
  }
  if (t.size() < 8)
    throw FitQualityError("fit_decay_rate: too few samples in the window");
  const double n = static_cast<double>(t.size());
  const double mean_t = std::accumulate(t.begin(), t.end(), 0.0) / n;
  const double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    sxx += (t[i] - mean_t) * (t[i] - mean_t);
    sxy += (t[i] - mean_t) * (y[i] - mean_y);
  }
  const double slope = sxy / sxx;
  const double intercept = mean_y - slope * mean_t;
  double rss = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double r = y[i] - slope * t[i] - intercept;
    rss += r * r;
  }
  if (std::sqrt(rss / n) > residual_tol)
    throw FitQualityError("fit_decay_rate: residual above threshold");
  return -slope;
}

std::vector<Eigen::MatrixXcd> pauli_basis(long dim) {
  Eigen::Matrix2cd one = Eigen::Matrix2cd::Identity();
  Eigen::Matrix2cd x, y, z;
  x << 0, 1, 1, 0;
  y << 0, cd(0, -1), cd(0, 1), 0;
  z << 1, 0, 0, -1;
  std::vector<Eigen::Matrix2cd> single = {one, x, y, z};

  std::vector<Eigen::MatrixXcd> basis = {Eigen::MatrixXcd::Identity(1, 1)};
  for (long d = 1; d < dim; d *= 2) {
    std::vector<Eigen::MatrixXcd> grown;
    grown.reserve(basis.size() * 4);
    for (const auto& left : basis) {
      for (const auto& right : single) {
        Eigen::MatrixXcd k(left.rows() * 2, left.cols() * 2);
        for (int r = 0; r < left.rows(); ++r)
          for (int c = 0; c < left.cols(); ++c)
            k.block(r * 2, c * 2, 2, 2) = left(r, c) * right;
        grown.push_back(std::move(k));
      }
    }
    basis = std::move(grown);
  }
  return basis;
}

}  // namespace

void DecoherenceRates::validate() const {
  if (t1_q <= 0 || t2star_q <= 0 || t1_s <= 0 || t2star_s <= 0)
    throw std::invalid_argument("DecoherenceRates: times must be positive");
  if (t2star_q > 2.0 * t1_q + 1e-15)
    throw std::invalid_argument("DecoherenceRates: transmon T2* > 2 T1");
  if (t2star_s > 2.0 * t1_s + 1e-12)
    throw std::invalid_argument("DecoherenceRates: storage T2* > 2 T1");
  if (thermal_q < 0.0 || thermal_q > 0.5)
    throw std::invalid_argument("DecoherenceRates: thermal population not in [0, 0.5]");
}

double DecoherenceRates::dephasing_rate_q() const {
  return 1.0 / t2star_q - 0.5 / t1_q;
}

double DecoherenceRates::dephasing_rate_s() const {
  return 1.0 / t2star_s - 0.5 / t1_s;
}

void NoiseModel::validate() const {
  rates.validate();
  if (scale < 0.0) throw std::invalid_argument("NoiseModel: scale must be >= 0");
  if (damping_ratio < 0.0 || dephasing_ratio < 0.0)
    throw std::invalid_argument("NoiseModel: ratios must be >= 0");
}

double KrausChannel::completeness_defect() const {
  if (operators.empty()) return 1.0;
  Eigen::MatrixXcd sum =
      Eigen::MatrixXcd::Zero(operators.front().cols(), operators.front().cols());
  for (const auto& k : operators) sum += k.adjoint() * k;
  sum -= Eigen::MatrixXcd::Identity(sum.rows(), sum.cols());
  return sum.cwiseAbs().maxCoeff();
}

Eigen::MatrixXcd KrausChannel::apply(const Eigen::MatrixXcd& rho) const {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
  for (const auto& k : operators) out += k * rho * k.adjoint();
  return out;
}

KrausChannel unitary_channel(const Eigen::MatrixXcd& u) { return {{u}}; }

KrausChannel compose(const KrausChannel& second, const KrausChannel& first) {
  KrausChannel out;
  out.operators.reserve(second.operators.size() * first.operators.size());
  for (const auto& a : second.operators)
    for (const auto& b : first.operators) out.operators.push_back(a * b);
  return out;
}

KrausChannel tensor(const KrausChannel& s_part, const KrausChannel& q_part) {
  KrausChannel out;
  out.operators.reserve(s_part.operators.size() * q_part.operators.size());
  for (const auto& a : s_part.operators) {
    for (const auto& b : q_part.operators) {
      Eigen::MatrixXcd k(a.rows() * b.rows(), a.cols() * b.cols());
      for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < a.cols(); ++c)
          k.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
      out.operators.push_back(std::move(k));
    }
  }
  return out;
}

KrausChannel amplitude_damping(double t, double t1) {
  if (t < 0.0) throw std::domain_error("amplitude_damping: negative duration");
  if (t1 <= 0.0) throw std::invalid_argument("amplitude_damping: T1 <= 0");
  const double p = 1.0 - std::exp(-t / t1);
  Eigen::MatrixXcd k0 = Eigen::MatrixXcd::Identity(2, 2);
  k0(1, 1) = std::sqrt(1.0 - p);
  Eigen::MatrixXcd k1 = Eigen::MatrixXcd::Zero(2, 2);
  k1(0, 1) = std::sqrt(p);
  return {{k0, k1}};
}

KrausChannel pure_dephasing(double t, double t1, double t2star) {
  if (t < 0.0) throw std::domain_error("pure_dephasing: negative duration");
  if (t1 <= 0.0 || t2star <= 0.0)
    throw std::invalid_argument("pure_dephasing: times must be positive");
  if (t2star > 2.0 * t1 + 1e-15)
    throw std::invalid_argument("pure_dephasing: T2* > 2 T1");
  const double rate = 1.0 / t2star - 0.5 / t1;
  // Off-diagonals shrink by exp(-rate*t) = sqrt(1-q).
  const double q = 1.0 - std::exp(-2.0 * rate * t);
  Eigen::MatrixXcd k0 = Eigen::MatrixXcd::Identity(2, 2);
  k0(1, 1) = std::sqrt(1.0 - q);
  Eigen::MatrixXcd k1 = Eigen::MatrixXcd::Zero(2, 2);
  k1(1, 1) = std::sqrt(q);
  return {{k0, k1}};
}

KrausChannel gate_noise_channel(const GateEvent& event,
                                const NoiseModel& model) {
  const Eigen::Matrix4cd u = event_unitary(event);
  if (model.noiseless() || event.duration == 0.0) return {{u}};
  model.validate();

  const double t = event.duration;
  const double c1 = model.damping_scale();
  const double cphi = model.dephasing_scale();
  const auto& r = model.rates;

  // Scaled rates enter as an effective shorter T1 / faster dephasing.
  KrausChannel q_noise = amplitude_damping(c1 * t, r.t1_q);
  {
    const double rate = cphi * r.dephasing_rate_q();
    const double q = 1.0 - std::exp(-2.0 * rate * t);
    Eigen::MatrixXcd k0 = Eigen::MatrixXcd::Identity(2, 2);
    k0(1, 1) = std::sqrt(1.0 - q);
    Eigen::MatrixXcd k1 = Eigen::MatrixXcd::Zero(2, 2);
    k1(1, 1) = std::sqrt(q);
    q_noise = compose(KrausChannel{{k0, k1}}, q_noise);
  }
  KrausChannel s_noise = compose(pure_dephasing(t, r.t1_s, r.t2star_s),
                                 amplitude_damping(t, r.t1_s));
  return compose(tensor(s_noise, q_noise), unitary_channel(u));
}

InjectedRate injected_rate(const InjectionConfig& cfg) {
  if (cfg.omega_ef < 0.0 || cfg.omega_f0g1 <= 0.0 || cfg.gamma_r <= 0.0)
    throw std::invalid_argument("injected_rate: non-positive parameters");
  InjectedRate out;
  const double ratio = cfg.omega_ef / cfg.omega_f0g1;
  out.rate = ratio * ratio * cfg.gamma_r;
  out.markovian = cfg.omega_ef < cfg.omega_f0g1 && cfg.omega_f0g1 < cfg.gamma_r;
  return out;
}

double drive_for_scale(double c_target, const DecoherenceRates& rates,
                       const InjectionConfig& cfg) {
  if (c_target < 1.0)
    throw std::domain_error("drive_for_scale: injection only adds noise (c >= 1)");
  rates.validate();
  if (cfg.omega_f0g1 <= 0.0 || cfg.gamma_r <= 0.0)
    throw std::invalid_argument("drive_for_scale: pump parameters must be positive");
  const double added = (c_target - 1.0) / rates.t1_q;
  return cfg.omega_f0g1 * std::sqrt(added / cfg.gamma_r);
}

TransientRates simulate_transient_decay(const TransientLevelConfig& cfg) {
  if (cfg.omega <= 0.0 || cfg.gamma <= 0.0)
    throw std::invalid_argument("simulate_transient_decay: omega, gamma > 0 required");
  const double dt =
      cfg.dt > 0.0 ? cfg.dt : std::min(1.0 / cfg.gamma, 1.0 / cfg.omega) / 50.0;

  // Levels: 0 = g, 1 = e, 2 = transient.
  LindbladSystem sys;
  sys.hamiltonian = Eigen::MatrixXcd::Zero(3, 3);
  sys.hamiltonian(1, 2) = cfg.omega;
  sys.hamiltonian(2, 1) = cfg.omega;
  Eigen::MatrixXcd decay = Eigen::MatrixXcd::Zero(3, 3);
  decay(0, 2) = 1.0;
  sys.collapse = {{cfg.gamma, decay}};

  const double g1_expected =
      4.0 * cfg.omega * cfg.omega * cfg.gamma /
      (4.0 * cfg.omega * cfg.omega + cfg.gamma * cfg.gamma);
  const double g2_expected = 2.0 * cfg.omega * cfg.omega / cfg.gamma;

  TransientRates out;
  {
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(3, 3);
    rho(1, 1) = 1.0;
    const double t_end = cfg.window_high / g1_expected * 1.05;
    const int stride = std::max(1L, static_cast<long>(t_end / dt) / 4000);
    std::vector<double> times, values;
    sys.integrate(rho, t_end, dt, stride,
                  [](const Eigen::MatrixXcd& r) { return r(1, 1).real(); },
                  times, values);
    out.gamma1 =
        fit_decay_rate(times, values, cfg.window_low / g1_expected,
                       cfg.window_high / g1_expected, cfg.residual_tol);
  }
  {
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(3, 3);
    rho(0, 0) = rho(1, 1) = 0.5;
    rho(0, 1) = rho(1, 0) = 0.5;
    const double t_end = cfg.window_high / g2_expected * 1.05;
    const int stride = std::max(1L, static_cast<long>(t_end / dt) / 4000);
    std::vector<double> times, values;
    sys.integrate(rho, t_end, dt, stride,
                  [](const Eigen::MatrixXcd& r) { return std::abs(r(0, 1)); },
                  times, values);
    out.gamma2 =
        fit_decay_rate(times, values, cfg.window_low / g2_expected,
                       cfg.window_high / g2_expected, cfg.residual_tol);
  }
  return out;
}

double cascade_damping_rate(const InjectionConfig& cfg) {
  const InjectedRate expected = injected_rate(cfg);

  // Levels: 0 = g0, 1 = e0, 2 = f0, 3 = g1.
  LindbladSystem sys;
  sys.hamiltonian = Eigen::MatrixXcd::Zero(4, 4);
  sys.hamiltonian(1, 2) = cfg.omega_ef;
  sys.hamiltonian(2, 1) = cfg.omega_ef;
  sys.hamiltonian(2, 3) = cfg.omega_f0g1;
  sys.hamiltonian(3, 2) = cfg.omega_f0g1;
  Eigen::MatrixXcd decay = Eigen::MatrixXcd::Zero(4, 4);
  decay(0, 3) = 1.0;
  sys.collapse = {{cfg.gamma_r, decay}};

  const double dt = std::min({1.0 / cfg.gamma_r, 1.0 / cfg.omega_f0g1,
                              1.0 / cfg.omega_ef}) /
                    50.0;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(4, 4);
  rho(1, 1) = 1.0;
  const double t_end = 3.0 / expected.rate * 1.05;
  const int stride = std::max(1L, static_cast<long>(t_end / dt) / 4000);
  std::vector<double> times, values;
  sys.integrate(rho, t_end, dt, stride,
                [](const Eigen::MatrixXcd& r) { return r(1, 1).real(); },
                times, values);
  return fit_decay_rate(times, values, 0.5 / expected.rate,
                        3.0 / expected.rate, 0.05);
}

Eigen::MatrixXd pauli_transfer_matrix(const KrausChannel& channel) {
  const long dim = channel.dim();
  if (dim < 2 || (dim & (dim - 1)) != 0)
    throw std::invalid_argument("pauli_transfer_matrix: dimension must be 2^n");
  const auto basis = pauli_basis(dim);
  const long n = static_cast<long>(basis.size());
  Eigen::MatrixXd r(n, n);
  for (long j = 0; j < n; ++j) {
    const Eigen::MatrixXcd mapped = channel.apply(basis[j]);
    for (long i = 0; i < n; ++i)
      r(i, j) = (basis[i] * mapped).trace().real() / static_cast<double>(dim);
  }
  return r;
}

double pauli_transfer_fidelity(const KrausChannel& actual,
                               const Eigen::MatrixXcd& ideal_unitary) {
  if (actual.dim() != ideal_unitary.rows())
    throw std::invalid_argument("pauli_transfer_fidelity: dimension mismatch");
  const Eigen::MatrixXd r_actual = pauli_transfer_matrix(actual);
  const Eigen::MatrixXd r_ideal =
      pauli_transfer_matrix(unitary_channel(ideal_unitary));
  const double d = static_cast<double>(ideal_unitary.rows());
  return (r_ideal.transpose() * r_actual).trace() / (d * d);
}

}  // namespace seqvqe
