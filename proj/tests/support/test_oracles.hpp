// Reference computations used only by the tests. Each one is deliberately done a
// different way from the library: sorting instead of bisection, enumeration instead
// of closed forms, grids instead of first-order solvers.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace testsupport {

using Vec = std::vector<double>;

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(gen); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen); }
  std::size_t index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(gen);
  }
  Vec uniform_vec(std::size_t n, double a, double b) {
    Vec v(n);
    for (auto& x : v) x = uniform(a, b);
    return v;
  }
  Vec normal_vec(std::size_t n, double s = 1.0) {
    Vec v(n);
    for (auto& x : v) x = s * normal();
    return v;
  }
  Vec simplex_point(std::size_t n) {
    Vec v(n);
    double s = 0.0;
    for (auto& x : v) s += (x = -std::log(uniform(1e-12, 1.0)));
    for (auto& x : v) x /= s;
    return v;
  }
  // Uniform direction scaled by radius * U.
  Vec ball_point(const Vec& center, double radius) {
    Vec d = normal_vec(center.size());
    double nd = 0.0;
    for (double x : d) nd += x * x;
    nd = std::sqrt(nd);
    const double r = radius * uniform(0.0, 1.0);
    Vec out(center.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = center[i] + r * d[i] / nd;
    return out;
  }
};

inline double pnorm(const Vec& v, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
  double s = 0.0;
  for (double x : v) s += std::pow(std::abs(x), p);
  return std::pow(s, 1.0 / p);
}

inline double dotp(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Vec fd_gradient(const std::function<double(const Vec&)>& f, Vec x, double h = 1e-6) {
  Vec g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    x[i] = xi + h;
    const double fp = f(x);
    x[i] = xi - h;
    const double fm = f(x);
    x[i] = xi;
    g[i] = (fp - fm) / (2 * h);
  }
  return g;
}

// Shifted-entropy projection from the gradient target g by scanning support sizes
// in order of decreasing g.
inline Vec sorted_entropy_projection(double theta, const Vec& g) {
  const std::size_t n = g.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return g[a] > g[b]; });
  const double gmax = g[order[0]];
  double z = 0.0;  // sum over the support of e^{g_i - gmax}
  for (std::size_t m = 1; m <= n; ++m) {
    z += std::exp(g[order[m - 1]] - gmax);
    // e^{g_i - 1 - lambda} = e^{g_i - gmax} * s with s = (1 + m theta) / z
    const double s = (1.0 + m * theta) / z;
    const bool last_in = std::exp(g[order[m - 1]] - gmax) * s > theta;
    const bool next_out = m == n || std::exp(g[order[m]] - gmax) * s <= theta;
    if (last_in && next_out) {
      Vec x(n, 0.0);
      for (std::size_t j = 0; j < m; ++j) x[order[j]] = std::exp(g[order[j]] - gmax) * s - theta;
      return x;
    }
  }
  return {};
}

inline Vec ball_projection(const Vec& k, double D, const Vec& y) {
  Vec d(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) d[i] = y[i] - k[i];
  const double r = pnorm(d, 2.0);
  if (r <= D) return y;
  Vec x(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) x[i] = k[i] + D * d[i] / r;
  return x;
}

// For R = ||x||_p^2 / 2 the mirror image of y has dual norm ||y||_p and Holder is tight
// along y, so the Bregman projection onto the origin ball is radial scaling.
inline Vec pball_origin_projection(const Vec& y, double p, double D) {
  const double r = pnorm(y, p);
  if (r <= D) return y;
  Vec x(y);
  for (auto& v : x) v *= D / r;
  return x;
}

inline Vec column_sums(const std::vector<Vec>& costs, std::size_t n) {
  Vec s(n, 0.0);
  for (const auto& c : costs)
    for (std::size_t i = 0; i < n; ++i) s[i] += c[i];
  return s;
}

inline double best_expert_value(const std::vector<Vec>& costs, std::size_t n) {
  const Vec s = column_sums(costs, n);
  return *std::min_element(s.begin(), s.end());
}

// Dense sweep over the boundary circle of a 2-D ball (linear objective, so the
// minimum is on the boundary), refined by golden section around the best angle.
inline double circle_min(const Vec& C, const Vec& k, double D, int samples = 20000) {
  auto f = [&](double a) { return C[0] * (k[0] + D * std::cos(a)) + C[1] * (k[1] + D * std::sin(a)); };
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) best = std::min(best, f(2 * M_PI * i / samples));
  return best;
}

// All points of the n-simplex (n <= 3) whose coordinates are multiples of 1/m, stored
// as integer counts.
inline std::vector<std::vector<int>> simplex_grid(std::size_t n, int m) {
  std::vector<std::vector<int>> pts;
  if (n == 1) return {{m}};
  if (n == 2) {
    for (int a = 0; a <= m; ++a) pts.push_back({a, m - a});
    return pts;
  }
  for (int a = 0; a <= m; ++a)
    for (int b = 0; a + b <= m; ++b) pts.push_back({a, b, m - a - b});
  return pts;
}

inline int half_l1_units(const std::vector<int>& u, const std::vector<int>& v) {
  int s = 0;
  for (std::size_t i = 0; i < u.size(); ++i) s += std::max(0, u[i] - v[i]);
  return s;
}

inline double grid_cost(const Vec& c, const std::vector<int>& u, int m) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += c[i] * u[i] / m;
  return s;
}

// min sum_t c_t.u_{t-1} over simplex grid paths u_0..u_{T-1} with half-l1 drift <= L.
inline double grid_simplex_drift(const std::vector<Vec>& costs, std::size_t n, double L, int m) {
  const auto pts = simplex_grid(n, m);
  const std::size_t P = pts.size();
  const int B = static_cast<int>(std::floor(L * m + 1e-9));
  const double inf = std::numeric_limits<double>::infinity();
  // V[p][b]: best cost with path ending at p having used b drift units.
  std::vector<std::vector<double>> V(P, std::vector<double>(B + 1, inf));
  for (std::size_t p = 0; p < P; ++p) V[p][0] = grid_cost(costs[0], pts[p], m);
  for (std::size_t t = 1; t < costs.size(); ++t) {
    std::vector<std::vector<double>> W(P, std::vector<double>(B + 1, inf));
    for (std::size_t q = 0; q < P; ++q) {
      const double cq = grid_cost(costs[t], pts[q], m);
      for (std::size_t p = 0; p < P; ++p) {
        const int d = half_l1_units(pts[q], pts[p]);
        if (d > B) continue;
        for (int b = 0; b + d <= B; ++b) {
          if (V[p][b] < inf) W[q][b + d] = std::min(W[q][b + d], V[p][b] + cq);
        }
      }
    }
    V.swap(W);
  }
  double best = inf;
  for (const auto& row : V)
    for (double v : row) best = std::min(best, v);
  return best;
}

// min sum_t c_t.x_t + alpha * sum_t (half l1 of x_t - x_{t-1}) over grid paths, x_0 free.
inline double grid_simplex_onela(const std::vector<Vec>& costs, std::size_t n, double alpha, int m) {
  const auto pts = simplex_grid(n, m);
  const std::size_t P = pts.size();
  std::vector<double> V(P, 0.0);
  for (const auto& c : costs) {
    std::vector<double> W(P);
    for (std::size_t q = 0; q < P; ++q) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t p = 0; p < P; ++p) {
        best = std::min(best, V[p] + alpha * half_l1_units(pts[q], pts[p]) / m);
      }
      W[q] = best + grid_cost(c, pts[q], m);
    }
    V.swap(W);
  }
  return *std::min_element(V.begin(), V.end());
}

// Square lattice inside the 2-D ball plus points on its boundary circle.
inline std::vector<Vec> disc_grid(const Vec& k, double D, double h, int circle) {
  std::vector<Vec> pts;
  const int r = static_cast<int>(std::ceil(D / h));
  for (int i = -r; i <= r; ++i)
    for (int j = -r; j <= r; ++j) {
      const double a = i * h, b = j * h;
      if (a * a + b * b < D * D) pts.push_back({k[0] + a, k[1] + b});
    }
  for (int i = 0; i < circle; ++i) {
    const double a = 2 * M_PI * i / circle;
    pts.push_back({k[0] + D * std::cos(a), k[1] + D * std::sin(a)});
  }
  return pts;
}

// DP over the disc grid of sum_t cost_t(point) + weight * l2 movement. With `onela`
// the starting point is free and unpaid; otherwise the first point pays costs[0].
inline double disc_path_dp(const std::vector<Vec>& costs, const std::vector<Vec>& pts, double weight,
                           bool onela) {
  const std::size_t P = pts.size();
  std::vector<std::vector<double>> dist(P, std::vector<double>(P));
  for (std::size_t p = 0; p < P; ++p)
    for (std::size_t q = 0; q < P; ++q) dist[p][q] = std::hypot(pts[p][0] - pts[q][0], pts[p][1] - pts[q][1]);
  std::vector<double> V(P, 0.0);
  std::size_t start = 0;
  if (!onela) {
    for (std::size_t p = 0; p < P; ++p) V[p] = dotp(costs[0], pts[p]);
    start = 1;
  }
  for (std::size_t t = start; t < costs.size(); ++t) {
    std::vector<double> W(P);
    for (std::size_t q = 0; q < P; ++q) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t p = 0; p < P; ++p) best = std::min(best, V[p] + weight * dist[p][q]);
      W[q] = best + dotp(costs[t], pts[q]);
    }
    V.swap(W);
  }
  return *std::min_element(V.begin(), V.end());
}

inline double grid_ball_onela(const std::vector<Vec>& costs, const Vec& k, double D, double h = 0.1,
                              int circle = 180) {
  return disc_path_dp(costs, disc_grid(k, D, h, circle), 1.0, true);
}

// max over mu of the grid Lagrangian min_u sum c.u + mu (drift - L); concave in mu.
inline double grid_ball_drift(const std::vector<Vec>& costs, const Vec& k, double D, double L,
                              double h = 0.1, int circle = 180) {
  const auto pts = disc_grid(k, D, h, circle);
  auto g = [&](double mu) { return disc_path_dp(costs, pts, mu, false) - mu * L; };
  double hi = 1.0;
  for (const auto& c : costs) hi += pnorm(c, 2.0);
  double lo = 0.0;
  const double phi = (std::sqrt(5.0) - 1) / 2;
  double a = hi - phi * (hi - lo), b = lo + phi * (hi - lo);
  double ga = g(a), gb = g(b);
  for (int it = 0; it < 40; ++it) {
    if (ga < gb) {
      lo = a;
      a = b;
      ga = gb;
      b = lo + phi * (hi - lo);
      gb = g(b);
    } else {
      hi = b;
      b = a;
      gb = ga;
      a = hi - phi * (hi - lo);
      ga = g(a);
    }
  }
  return std::max({ga, gb, g(0.0)});
}

}  // namespace testsupport
