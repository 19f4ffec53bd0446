#include "sync/sim.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

namespace synckit {

Vector closed_loop_field(const Vector& x, const Plant& p, const Gain& k,
                         const Laplacian& L) {
  const Eigen::Index n = p.n();
  const Eigen::Index N = L.L.rows();
  if (x.size() != n * N)
    throw DimensionMismatch("closed_loop_field: state must have dimension n*N");

  // dx_i = A x_i - B * sum_j L_ij (K x_j), assembled blockwise.
  Matrix Kx(k.K.rows(), N);
  for (Eigen::Index j = 0; j < N; ++j) Kx.col(j) = k.K * x.segment(j * n, n);
  const Matrix coupled = Kx * L.L.transpose();  // column i = sum_j L_ij K x_j
  Vector dx(n * N);
  for (Eigen::Index i = 0; i < N; ++i)
    dx.segment(i * n, n) = p.A * x.segment(i * n, n) - p.B * coupled.col(i);
  return dx;
}

double dist_to_sync(const Vector& x, Eigen::Index N, Eigen::Index n) {
  if (x.size() != n * N)
    throw DimensionMismatch("dist_to_sync: state must have dimension n*N");
  Vector mean = Vector::Zero(n);
  for (Eigen::Index i = 0; i < N; ++i) mean += x.segment(i * n, n);
  mean /= static_cast<double>(N);
  double sq = 0.0;
  for (Eigen::Index i = 0; i < N; ++i)
    sq += (x.segment(i * n, n) - mean).squaredNorm();
  return std::sqrt(sq);
}

Trajectory integrate(const Vector& x0, const Plant& p, const Gain& k, const Laplacian& L,
                     double horizon, double step) {
  if (step <= 0.0 || horizon < step)
    throw std::invalid_argument("integrate: require step > 0 and horizon >= step");
  const Eigen::Index N = L.L.rows();
  const Eigen::Index n = p.n();

  Trajectory traj;
  Vector x = x0;
  double t = 0.0;
  const auto steps = static_cast<std::size_t>(std::llround(horizon / step));
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  traj.distances.reserve(steps + 1);

  auto record = [&]() {
    traj.times.push_back(t);
    traj.states.push_back(x);
    traj.distances.push_back(dist_to_sync(x, N, n));
  };
  record();
  for (std::size_t i = 0; i < steps; ++i) {
    const Vector k1 = closed_loop_field(x, p, k, L);
    const Vector k2 = closed_loop_field(x + 0.5 * step * k1, p, k, L);
    const Vector k3 = closed_loop_field(x + 0.5 * step * k2, p, k, L);
    const Vector k4 = closed_loop_field(x + step * k3, p, k, L);
    x += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t = step * static_cast<double>(i + 1);
    if (!x.allFinite())
      throw NonFiniteState("integrate: state blew up at t = " + std::to_string(t));
    record();
  }
  return traj;
}

DecayFit fit_decay(const Trajectory& traj, double window_fraction) {
  if (traj.times.size() < 2 || window_fraction <= 0.0 || window_fraction > 1.0)
    throw DegenerateWindow("fit_decay: need >= 2 samples and window in (0, 1]");
  const std::size_t total = traj.times.size();
  const std::size_t start =
      total - std::max<std::size_t>(2, static_cast<std::size_t>(
                                           std::ceil(window_fraction * total)));

  // Line fit of log(dist) against t over the tail window. Samples at or
  // below the floor are numerical noise, not decay, and are excluded.
  constexpr double kFloor = 1e-14;
  double st = 0, sl = 0, stt = 0, stl = 0;
  std::size_t count = 0;
  for (std::size_t i = start; i < total; ++i) {
    if (traj.distances[i] <= kFloor) continue;
    const double t = traj.times[i];
    const double l = std::log(traj.distances[i]);
    st += t;
    sl += l;
    stt += t * t;
    stl += t * l;
    ++count;
  }
  if (count < 2)
    throw DegenerateWindow("fit_decay: window fully below the distance floor");
  const double denom = count * stt - st * st;
  if (denom <= 0.0) throw DegenerateWindow("fit_decay: window has no time extent");
  const double slope = (count * stl - st * sl) / denom;
  const double intercept = (sl - slope * st) / count;

  DecayFit fit;
  fit.rate = -slope;
  fit.window_start = traj.times[start];
  fit.window_end = traj.times.back();
  const double d0 = std::max(traj.distances.front(), 1e-14);
  fit.overshoot = std::exp(intercept) / d0;
  double rss = 0.0;
  for (std::size_t i = start; i < total; ++i) {
    if (traj.distances[i] <= kFloor) continue;
    const double pred = intercept + slope * traj.times[i];
    const double l = std::log(traj.distances[i]);
    rss += (l - pred) * (l - pred);
  }
  fit.residual = std::sqrt(rss / count);
  return fit;
}

Vector random_initial_state(Eigen::Index dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector x(dim);
  for (Eigen::Index i = 0; i < dim; ++i) x(i) = normal(rng);
  return x;
}

void trajectory_to_csv(const Trajectory& traj, const std::string& path, bool with_states) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("trajectory_to_csv: cannot open " + path);
  out << "t,dist";
  if (with_states && !traj.states.empty())
    for (Eigen::Index i = 0; i < traj.states.front().size(); ++i) out << ",x" << i + 1;
  out << "\n";
  char buf[32];
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.12g", traj.times[i]);
    out << buf;
    std::snprintf(buf, sizeof(buf), "%.12g", traj.distances[i]);
    out << ',' << buf;
    if (with_states)
      for (Eigen::Index j = 0; j < traj.states[i].size(); ++j) {
        std::snprintf(buf, sizeof(buf), "%.12g", traj.states[i](j));
        out << ',' << buf;
      }
    out << "\n";
  }
}

}  // namespace synckit
