#include "driftbench/oracles.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "driftbench/errors.hpp"

namespace driftbench {

namespace {

constexpr std::size_t kMaxDpCells = 400'000'000;
constexpr std::size_t kCheckEvery = 32;

void require_costs(const std::vector<Vector>& costs, std::size_t n, const char* who) {
  for (std::size_t t = 0; t < costs.size(); ++t) {
    if (costs[t].size() != n) {
      throw InvalidInput(std::string(who) + ": cost " + std::to_string(t + 1) + " has wrong dimension");
    }
    require_finite(costs[t], who);
  }
}

bool is_l2_ball(const Body& body) {
  return body.kind() == Body::Kind::PBall && !body.ball_norm().is_infinite() &&
         body.ball_norm().p() == 2.0;
}

bool all_zero(const std::vector<Vector>& costs) {
  for (const auto& c : costs) {
    for (double v : c) {
      if (v != 0.0) return false;
    }
  }
  return true;
}

double normal(std::mt19937_64& rng) {
  double u1 = unit_uniform(rng());
  while (u1 <= 0.0) u1 = unit_uniform(rng());
  const double u2 = unit_uniform(rng());
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Vector vertex(std::size_t n, std::size_t i) {
  Vector e(n, 0.0);
  e[i] = 1.0;
  return e;
}

// Minimiser of w.u over the ball {||u - k||_p <= D}: k - D * (unit vector dual to w).
Vector ball_argmin(const Body& body, const Vector& w) {
  const std::size_t n = w.size();
  const Vector& k = body.center();
  const double D = body.radius();
  const NormSpec& p = body.ball_norm();
  Vector u = k;
  const NormSpec q = p.dual();
  const double wq = norm(w, q);
  if (wq == 0.0) return u;
  if (p.is_infinite()) {
    for (std::size_t i = 0; i < n; ++i) u[i] -= D * (w[i] > 0 ? 1.0 : (w[i] < 0 ? -1.0 : 0.0));
    return u;
  }
  if (p.p() == 1.0) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (std::abs(w[i]) > std::abs(w[best])) best = i;
    }
    u[best] -= D * (w[best] > 0 ? 1.0 : -1.0);
    return u;
  }
  const double qe = q.p();
  for (std::size_t i = 0; i < n; ++i) {
    const double mag = std::pow(std::abs(w[i]) / wq, qe - 1.0);
    u[i] -= D * (w[i] >= 0 ? mag : -mag);
  }
  return u;
}

double ball_min_value(const Body& body, const Vector& w) {
  return dot(w, body.center()) - body.radius() * norm(w, body.ball_norm().dual());
}

// Projection onto {sum_t ||z_t||_2 <= L} by shrinking every block with one threshold.
void project_group_budget(std::vector<Vector>& z, double L) {
  std::vector<double> r(z.size());
  double total = 0.0;
  for (std::size_t t = 0; t < z.size(); ++t) {
    r[t] = norm(z[t], NormSpec::of(2.0));
    total += r[t];
  }
  if (total <= L) return;
  std::vector<double> sorted = r;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double mu = 0.0;
  double acc = 0.0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    acc += sorted[j];
    const double cand = (acc - L) / static_cast<double>(j + 1);
    if (j + 1 == sorted.size() || cand >= sorted[j + 1]) {
      mu = cand;
      break;
    }
  }
  for (std::size_t t = 0; t < z.size(); ++t) {
    const double s = r[t] > mu ? 1.0 - mu / r[t] : 0.0;
    for (double& v : z[t]) v *= s;
  }
}

void project_l2(Vector& v, const Vector& center, double radius) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) d2 += (v[i] - center[i]) * (v[i] - center[i]);
  const double d = std::sqrt(d2);
  if (d <= radius) return;
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = center[i] + (v[i] - center[i]) * (radius / d);
}

// Chambolle-Pock iteration for min_X sum_t w_t.x_t + g(K X) with x_t in an l2 ball and
// (K X)_t = x_{first+t} - x_{first+t-1}; the caller supplies the dual prox and the two
// objective evaluations. Restarts to the running average whenever the average has halved
// the gap seen at the previous restart.
struct Pdhg {
  const Body& body;
  std::vector<Vector> lin;  // linear cost per primal block
  std::size_t blocks;       // primal blocks; dual blocks = blocks - 1
  std::function<void(std::vector<Vector>&, double)> dual_prox;
  std::function<double(const std::vector<Vector>&)> primal_value;
  std::function<double(const std::vector<Vector>&)> dual_value;

  struct Out {
    std::vector<Vector> x;
    double ub = std::numeric_limits<double>::infinity();
    double lb = -std::numeric_limits<double>::infinity();
    std::size_t iterations = 0;
  };

  // (K^T y)_t = y_t - y_{t+1}, where dual block j couples primal j+1 and j.
  Vector kty(const std::vector<Vector>& y, std::size_t t) const {
    Vector v(body.dimension(), 0.0);
    if (t >= 1) v = y[t - 1];
    if (t < y.size()) {
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= y[t][i];
    }
    return v;
  }

  Out solve(const SolverOptions& opts) const {
    const std::size_t n = body.dimension();
    const double step = 0.49;
    std::vector<Vector> x(blocks, body.center());
    std::vector<Vector> y(blocks > 0 ? blocks - 1 : 0, Vector(n, 0.0));
    std::vector<Vector> xs = x, ys = y;
    std::size_t avg_count = 0;
    double restart_gap = std::numeric_limits<double>::infinity();
    Out out;
    out.x = x;
    auto consider = [&](const std::vector<Vector>& px, const std::vector<Vector>& dy) {
      const double p = primal_value(px);
      if (p < out.ub) {
        out.ub = p;
        out.x = px;
      }
      out.lb = std::max(out.lb, dual_value(dy));
      return p - dual_value(dy);
    };
    consider(x, y);
    std::vector<Vector> xn(blocks), xbar(blocks), v(y.size());
    for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
      for (std::size_t t = 0; t < blocks; ++t) {
        xn[t].resize(n);
        for (std::size_t i = 0; i < n; ++i) {
          const double g = (t >= 1 ? y[t - 1][i] : 0.0) - (t < y.size() ? y[t][i] : 0.0);
          xn[t][i] = x[t][i] - step * (lin[t][i] + g);
        }
        project_l2(xn[t], body.center(), body.radius());
        xbar[t].resize(n);
        for (std::size_t i = 0; i < n; ++i) xbar[t][i] = 2.0 * xn[t][i] - x[t][i];
      }
      for (std::size_t j = 0; j < y.size(); ++j) {
        v[j].resize(n);
        for (std::size_t i = 0; i < n; ++i) v[j][i] = y[j][i] + step * (xbar[j + 1][i] - xbar[j][i]);
      }
      dual_prox(v, step);
      std::swap(y, v);
      std::swap(x, xn);
      ++avg_count;
      for (std::size_t t = 0; t < blocks; ++t) {
        for (std::size_t i = 0; i < n; ++i) xs[t][i] += x[t][i];
      }
      for (std::size_t j = 0; j < y.size(); ++j) {
        for (std::size_t i = 0; i < n; ++i) ys[j][i] += y[j][i];
      }
      out.iterations = it;
      if (it % kCheckEvery != 0 && it != opts.max_iterations) continue;
      std::vector<Vector> xa = xs, ya = ys;
      for (auto& b : xa) {
        for (double& val : b) val /= static_cast<double>(avg_count + 1);
      }
      for (auto& b : ya) {
        for (double& val : b) val /= static_cast<double>(avg_count + 1);
      }
      consider(x, y);
      const double gap_avg = consider(xa, ya);
      if (out.ub - out.lb <= opts.relative_tolerance * std::max(1.0, std::abs(out.ub))) break;
      if (gap_avg < 0.5 * restart_gap) {
        restart_gap = gap_avg;
        x = xa;
        y = ya;
        xs = x;
        ys = y;
        avg_count = 0;
      }
    }
    return out;
  }
};

}  // namespace

double unit_uniform(std::uint64_t word) {
  return static_cast<double>(word >> 11) * 0x1.0p-53;
}

std::string to_string(CostModel::Kind k) {
  switch (k) {
    case CostModel::Kind::UniformRandom: return "uniform";
    case CostModel::Kind::BestExpertSwitcher: return "switcher";
    case CostModel::Kind::SingleSpike: return "spike";
    case CostModel::Kind::AdversarialRadial: return "radial";
    case CostModel::Kind::FileReplay: return "file";
  }
  return "?";
}

CostModel::Kind cost_kind_from_string(const std::string& s) {
  if (s == "uniform") return CostModel::Kind::UniformRandom;
  if (s == "switcher") return CostModel::Kind::BestExpertSwitcher;
  if (s == "spike") return CostModel::Kind::SingleSpike;
  if (s == "radial") return CostModel::Kind::AdversarialRadial;
  if (s == "file") return CostModel::Kind::FileReplay;
  throw InvalidInput("unknown cost model: " + s);
}

std::vector<Vector> parse_cost_stream(std::istream& in, const std::string& source) {
  std::vector<Vector> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string tok;
    Vector row;
    while (ss >> tok) {
      double v = 0.0;
      const char* end = tok.data() + tok.size();
      auto [ptr, ec] = std::from_chars(tok.data(), end, v);
      if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
        throw InvalidInput(source + ":" + std::to_string(lineno) + ": bad number '" + tok + "'");
      }
      row.push_back(v);
    }
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InvalidInput(source + ":" + std::to_string(lineno) + ": expected " +
                         std::to_string(rows.front().size()) + " entries, got " +
                         std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<Vector> read_cost_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open cost file " + path);
  return parse_cost_stream(in, path);
}

std::vector<Vector> gen_costs(const CostModel& m, std::size_t T, std::size_t n) {
  if (n == 0) throw InvalidInput("gen_costs: dimension must be >= 1");
  std::mt19937_64 rng(m.seed);
  std::vector<Vector> out(T, Vector(n, 0.0));
  auto clamp = [&](double v) { return m.nonneg ? std::max(0.0, v) : v; };
  switch (m.kind) {
    case CostModel::Kind::UniformRandom: {
      const double lo = clamp(m.low);
      if (!(m.high >= lo)) throw InvalidInput("gen_costs: need high >= low");
      for (auto& c : out) {
        for (double& v : c) v = lo + (m.high - lo) * unit_uniform(rng());
      }
      break;
    }
    case CostModel::Kind::BestExpertSwitcher: {
      if (m.period == 0) throw InvalidInput("gen_costs: period must be >= 1");
      for (std::size_t t = 0; t < T; ++t) {
        const std::size_t cheap = (t / m.period) % n;
        for (std::size_t i = 0; i < n; ++i) out[t][i] = clamp(i == cheap ? m.low : m.high);
      }
      break;
    }
    case CostModel::Kind::SingleSpike:
      if (m.spike_round == 0) throw InvalidInput("gen_costs: spike round is 1-based");
      if (m.spike_round <= T) {
        for (double& v : out[m.spike_round - 1]) v = clamp(m.magnitude);
      }
      break;
    case CostModel::Kind::AdversarialRadial: {
      if (m.period == 0) throw InvalidInput("gen_costs: period must be >= 1");
      for (std::size_t t = 0; t < T; ++t) {
        Vector d(n);
        for (double& v : d) v = normal(rng);
        if (m.nonneg) {
          for (double& v : d) v = std::abs(v);
        }
        const double len = norm(d, NormSpec::of(2.0));
        const double sign = (!m.nonneg && (t / m.period) % 2 == 1) ? -1.0 : 1.0;
        for (std::size_t i = 0; i < n; ++i) out[t][i] = len > 0 ? sign * m.magnitude * d[i] / len : 0.0;
      }
      break;
    }
    case CostModel::Kind::FileReplay: {
      std::vector<Vector> rows = read_cost_file(m.path);
      if (rows.size() < T) {
        throw InvalidInput("gen_costs: " + m.path + " has " + std::to_string(rows.size()) +
                           " rounds, need " + std::to_string(T));
      }
      for (std::size_t t = 0; t < T; ++t) {
        if (rows[t].size() != n) {
          throw InvalidInput("gen_costs: " + m.path + " has dimension " +
                             std::to_string(rows[t].size()) + ", need " + std::to_string(n));
        }
        for (double v : rows[t]) {
          if (m.nonneg && v < 0.0) {
            throw InvalidInput("gen_costs: " + m.path + " round " + std::to_string(t + 1) +
                               " has a negative entry");
          }
        }
        out[t] = rows[t];
      }
      break;
    }
  }
  return out;
}

FixedOpt offline_fixed_opt(const std::vector<Vector>& costs, const Body& body) {
  const std::size_t n = body.dimension();
  require_costs(costs, n, "offline_fixed_opt");
  Vector total(n, 0.0);
  for (const auto& c : costs) {
    for (std::size_t i = 0; i < n; ++i) total[i] += c[i];
  }
  FixedOpt out;
  if (body.kind() == Body::Kind::Simplex) {
    const std::size_t best = static_cast<std::size_t>(std::min_element(total.begin(), total.end()) - total.begin());
    out.u = vertex(n, best);
    out.value = total[best];
    return out;
  }
  out.u = ball_argmin(body, total);
  out.value = ball_min_value(body, total);
  return out;
}

ComparatorPath make_path(const Body& body, std::vector<Vector> u) {
  ComparatorPath p;
  for (std::size_t t = 1; t < u.size(); ++t) {
    const Vector d = subtract(u[t], u[t - 1]);
    p.drift_l1 += norm(d, NormSpec::of(1.0));
    if (body.kind() == Body::Kind::PBall) p.drift_lp += norm(d, body.ball_norm());
  }
  if (body.kind() == Body::Kind::Simplex) p.drift_lp = 0.5 * p.drift_l1;
  p.u = std::move(u);
  return p;
}

namespace {

double path_cost(const std::vector<Vector>& costs, const std::vector<Vector>& u) {
  double s = 0.0;
  for (std::size_t t = 0; t < costs.size(); ++t) s += dot(costs[t], u[t]);
  return s;
}

OracleResult simplex_drifting(const std::vector<Vector>& costs, std::size_t n, double L) {
  const std::size_t T = costs.size();
  // Switches used by the per-round best path; more budget than this never helps.
  std::size_t free_switches = 0;
  {
    std::size_t prev = 0;
    for (std::size_t t = 0; t < T; ++t) {
      std::size_t best = static_cast<std::size_t>(std::min_element(costs[t].begin(), costs[t].end()) - costs[t].begin());
      if (t > 0 && costs[t][prev] == costs[t][best]) best = prev;
      if (t > 0 && best != prev) ++free_switches;
      prev = best;
    }
  }
  const std::size_t K = free_switches;
  if (T * (K + 1) * n > kMaxDpCells) throw InvalidInput("offline_drifting_opt: instance too large");

  // dp[k*n + j]: cheapest prefix ending at expert j using at most k switches.
  std::vector<double> dp((K + 1) * n), next((K + 1) * n);
  std::vector<bool> stay(T * (K + 1) * n, true);
  std::vector<std::uint32_t> from(T * (K + 1), 0);
  for (std::size_t k = 0; k <= K; ++k) {
    for (std::size_t j = 0; j < n; ++j) dp[k * n + j] = costs[0][j];
  }
  for (std::size_t s = 1; s < T; ++s) {
    for (std::size_t k = 0; k <= K; ++k) {
      double best = std::numeric_limits<double>::infinity();
      std::uint32_t arg = 0;
      if (k >= 1) {
        for (std::size_t i = 0; i < n; ++i) {
          if (dp[(k - 1) * n + i] < best) {
            best = dp[(k - 1) * n + i];
            arg = static_cast<std::uint32_t>(i);
          }
        }
      }
      from[s * (K + 1) + k] = arg;
      for (std::size_t j = 0; j < n; ++j) {
        const double keep = dp[k * n + j];
        const bool st = keep <= best;
        stay[(s * (K + 1) + k) * n + j] = st;
        next[k * n + j] = costs[s][j] + (st ? keep : best);
      }
    }
    std::swap(dp, next);
  }
  std::vector<double> f(K + 1);
  std::vector<std::size_t> end(K + 1);
  for (std::size_t k = 0; k <= K; ++k) {
    const auto it = std::min_element(dp.begin() + static_cast<long>(k * n), dp.begin() + static_cast<long>((k + 1) * n));
    f[k] = *it;
    end[k] = static_cast<std::size_t>(it - (dp.begin() + static_cast<long>(k * n)));
  }
  auto reconstruct = [&](std::size_t k) {
    std::vector<Vector> u(T);
    std::size_t j = end[k];
    for (std::size_t s = T; s-- > 0;) {
      u[s] = vertex(n, j);
      if (s == 0) break;
      if (!stay[(s * (K + 1) + k) * n + j]) {
        j = from[s * (K + 1) + k];
        --k;
      }
    }
    return u;
  };

  // Lower convex envelope of (k, f(k)) evaluated at L.
  std::vector<std::size_t> hull;
  for (std::size_t k = 0; k <= K; ++k) {
    while (hull.size() >= 2) {
      const std::size_t a = hull[hull.size() - 2], b = hull.back();
      const double cross = (f[b] - f[a]) * static_cast<double>(k - a) - (f[k] - f[a]) * static_cast<double>(b - a);
      if (cross >= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(k);
  }
  OracleResult out;
  out.method = "exact-dp";
  if (L >= static_cast<double>(K)) {
    out.path = make_path(Body::simplex(n), reconstruct(K));
    out.value = f[K];
  } else {
    std::size_t s1 = 0, s2 = 0;
    for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
      if (static_cast<double>(hull[h]) <= L && L <= static_cast<double>(hull[h + 1])) {
        s1 = hull[h];
        s2 = hull[h + 1];
        break;
      }
    }
    const double w = (L - static_cast<double>(s1)) / static_cast<double>(s2 - s1);
    std::vector<Vector> p1 = reconstruct(s1);
    if (w <= 0.0) {
      out.path = make_path(Body::simplex(n), std::move(p1));
      out.value = f[s1];
    } else {
      const std::vector<Vector> p2 = reconstruct(s2);
      for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t i = 0; i < n; ++i) p1[t][i] = (1.0 - w) * p1[t][i] + w * p2[t][i];
      }
      out.path = make_path(Body::simplex(n), std::move(p1));
      out.value = (1.0 - w) * f[s1] + w * f[s2];
    }
  }
  out.lower_bound = out.value;
  return out;
}

OracleResult ball_drifting(const std::vector<Vector>& costs, const Body& body, double L,
                           const SolverOptions& opts) {
  const std::size_t T = costs.size();
  const FixedOpt fixed = offline_fixed_opt(costs, body);
  const std::vector<Vector> anchor(T, fixed.u);
  const NormSpec l2 = NormSpec::of(2.0);

  Pdhg solver{body, costs, T, {}, {}, {}};
  solver.dual_prox = [L](std::vector<Vector>& v, double sigma) {
    // prox of sigma * L * max_t ||y_t|| via Moreau: v - sigma * P_S(v / sigma).
    std::vector<Vector> z = v;
    for (auto& b : z) {
      for (double& x : b) x /= sigma;
    }
    project_group_budget(z, L);
    for (std::size_t j = 0; j < v.size(); ++j) {
      for (std::size_t i = 0; i < v[j].size(); ++i) v[j][i] -= sigma * z[j][i];
    }
  };
  solver.primal_value = [&](const std::vector<Vector>& u) {
    double drift = 0.0;
    for (std::size_t t = 1; t < T; ++t) drift += norm(subtract(u[t], u[t - 1]), l2);
    const double s = drift > L ? L / drift : 1.0;
    return (1.0 - s) * fixed.value + s * path_cost(costs, u);
  };
  solver.dual_value = [&](const std::vector<Vector>& y) {
    double v = 0.0, ymax = 0.0;
    for (std::size_t t = 0; t < T; ++t) v += ball_min_value(body, add(costs[t], solver.kty(y, t)));
    for (const auto& b : y) ymax = std::max(ymax, norm(b, l2));
    return v - L * ymax;
  };
  const Pdhg::Out r = solver.solve(opts);

  std::vector<Vector> u = r.x;
  double drift = 0.0;
  for (std::size_t t = 1; t < T; ++t) drift += norm(subtract(u[t], u[t - 1]), l2);
  if (drift > L) {
    const double s = L / drift;
    for (std::size_t t = 0; t < T; ++t) u[t] = axpy(anchor[t], s, subtract(u[t], anchor[t]));
  }
  OracleResult out;
  out.method = "pdhg";
  out.path = make_path(body, std::move(u));
  out.value = path_cost(costs, out.path.u);
  out.lower_bound = std::min(r.lb, out.value);
  out.iterations = r.iterations;
  out.residual = out.value - out.lower_bound;
  out.converged = out.residual <= opts.relative_tolerance * std::max(1.0, std::abs(out.value));
  return out;
}

}  // namespace

OracleResult offline_drifting_opt(const std::vector<Vector>& costs, const Body& body, double L,
                                  const SolverOptions& opts) {
  const std::size_t n = body.dimension();
  require_costs(costs, n, "offline_drifting_opt");
  if (!(L >= 0.0) || !std::isfinite(L)) throw InvalidInput("offline_drifting_opt: L must be >= 0");
  const std::size_t T = costs.size();
  OracleResult out;
  if (T == 0) {
    out.method = "empty";
    return out;
  }
  if (L == 0.0 || T == 1) {
    const FixedOpt f = offline_fixed_opt(costs, body);
    out.method = "fixed";
    out.path = make_path(body, std::vector<Vector>(T, f.u));
    out.value = out.lower_bound = f.value;
    return out;
  }
  if (body.kind() == Body::Kind::Simplex) return simplex_drifting(costs, n, L);
  if (!is_l2_ball(body)) throw InvalidInput("offline_drifting_opt: only the simplex and 2-balls are supported");
  if (L >= 2.0 * body.radius() * static_cast<double>(T - 1)) {
    // Any path fits the budget: pick the best point every round.
    std::vector<Vector> u(T);
    double v = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
      u[t] = ball_argmin(body, costs[t]);
      v += ball_min_value(body, costs[t]);
    }
    out.method = "per-round";
    out.path = make_path(body, std::move(u));
    out.value = out.lower_bound = v;
    return out;
  }
  return ball_drifting(costs, body, L, opts);
}

OracleResult offline_onela_opt(const std::vector<Vector>& costs, const Body& body,
                               const NormSpec& movement_norm, double alpha,
                               const SolverOptions& opts) {
  const std::size_t n = body.dimension();
  require_costs(costs, n, "offline_onela_opt");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw InvalidInput("offline_onela_opt: alpha must be >= 0");
  for (const auto& c : costs) {
    for (double v : c) {
      if (v < 0.0) throw InvalidInput("offline_onela_opt: costs must be nonnegative");
    }
  }
  const std::size_t T = costs.size();
  OracleResult out;
  if (all_zero(costs)) {
    out.method = "zero";
    out.path = make_path(body, std::vector<Vector>(T + 1, body.default_point()));
    return out;
  }
  if (body.kind() == Body::Kind::Simplex) {
    if (movement_norm != NormSpec::of(1.0)) {
      throw InvalidInput("offline_onela_opt: the simplex uses l1 movement");
    }
    // V_t(j) = c_{j,t} + min(V_{t-1}(j), min_i V_{t-1}(i) + alpha); integral paths are optimal.
    std::vector<double> V(n, 0.0), W(n);
    std::vector<bool> stay(T * n, true);
    std::vector<std::size_t> from(T, 0);
    for (std::size_t t = 1; t <= T; ++t) {
      const std::size_t arg = static_cast<std::size_t>(std::min_element(V.begin(), V.end()) - V.begin());
      from[t - 1] = arg;
      for (std::size_t j = 0; j < n; ++j) {
        const bool st = V[j] <= V[arg] + alpha;
        stay[(t - 1) * n + j] = st;
        W[j] = costs[t - 1][j] + (st ? V[j] : V[arg] + alpha);
      }
      std::swap(V, W);
    }
    std::size_t j = static_cast<std::size_t>(std::min_element(V.begin(), V.end()) - V.begin());
    out.value = out.lower_bound = V[j];
    std::vector<Vector> x(T + 1);
    for (std::size_t t = T; t >= 1; --t) {
      x[t] = vertex(n, j);
      if (!stay[(t - 1) * n + j]) j = from[t - 1];
    }
    x[0] = vertex(n, j);
    out.method = "exact-dp";
    out.path = make_path(body, std::move(x));
    return out;
  }
  if (!is_l2_ball(body) || movement_norm != NormSpec::of(2.0)) {
    throw InvalidInput("offline_onela_opt: only 2-balls with l2 movement are supported");
  }
  const NormSpec l2 = NormSpec::of(2.0);
  std::vector<Vector> lin(T + 1, Vector(n, 0.0));
  for (std::size_t t = 1; t <= T; ++t) lin[t] = costs[t - 1];
  Pdhg solver{body, lin, T + 1, {}, {}, {}};
  solver.dual_prox = [alpha](std::vector<Vector>& v, double) {
    for (auto& b : v) project_l2(b, Vector(b.size(), 0.0), alpha);
  };
  auto primal = [&](const std::vector<Vector>& x) {
    double v = 0.0;
    for (std::size_t t = 1; t <= T; ++t) v += dot(costs[t - 1], x[t]) + alpha * norm(subtract(x[t], x[t - 1]), l2);
    return v;
  };
  solver.primal_value = primal;
  solver.dual_value = [&](const std::vector<Vector>& y) {
    double v = 0.0;
    for (std::size_t t = 0; t <= T; ++t) v += ball_min_value(body, add(lin[t], solver.kty(y, t)));
    return v;
  };
  const Pdhg::Out r = solver.solve(opts);
  out.method = "pdhg";
  out.path = make_path(body, r.x);
  out.value = primal(out.path.u);
  out.lower_bound = std::min(r.lb, out.value);
  out.iterations = r.iterations;
  out.residual = out.value - out.lower_bound;
  out.converged = out.residual <= opts.relative_tolerance * std::max(1.0, std::abs(out.value));
  return out;
}

std::string to_string(ComparatorKind k) {
  switch (k) {
    case ComparatorKind::Constant: return "constant";
    case ComparatorKind::KSwitch: return "kswitch";
    case ComparatorKind::Geodesic: return "geodesic";
  }
  return "?";
}

ComparatorKind comparator_kind_from_string(const std::string& s) {
  if (s == "constant") return ComparatorKind::Constant;
  if (s == "kswitch") return ComparatorKind::KSwitch;
  if (s == "geodesic") return ComparatorKind::Geodesic;
  throw InvalidInput("unknown comparator kind: " + s);
}

ComparatorPath gen_comparator_path(const ComparatorSpec& spec, const Body& body, double L,
                                   std::size_t T, std::uint64_t seed) {
  if (!(L >= 0.0) || !std::isfinite(L)) throw InvalidInput("gen_comparator_path: L must be >= 0");
  std::mt19937_64 rng(seed);
  const std::size_t n = body.dimension();
  switch (spec.kind) {
    case ComparatorKind::Constant:
      return make_path(body, std::vector<Vector>(T, body.default_point()));
    case ComparatorKind::KSwitch: {
      if (body.kind() != Body::Kind::Simplex) throw InvalidInput("gen_comparator_path: kswitch needs the simplex");
      const std::size_t k = spec.switches;
      if (static_cast<double>(k) > L + 1e-12) {
        throw InvalidInput("gen_comparator_path: drift " + std::to_string(L) + " too small for " +
                           std::to_string(k) + " switches");
      }
      if (k > 0 && (n < 2 || k + 1 > T)) throw InvalidInput("gen_comparator_path: too many switches");
      std::size_t cur = static_cast<std::size_t>(rng() % n);
      std::vector<Vector> u;
      std::size_t next_switch = 0;
      for (std::size_t t = 0; t < T; ++t) {
        if (next_switch < k && t == (next_switch + 1) * T / (k + 1)) {
          cur = (cur + 1 + static_cast<std::size_t>(rng() % (n - 1))) % n;
          ++next_switch;
        }
        u.push_back(vertex(n, cur));
      }
      return make_path(body, std::move(u));
    }
    case ComparatorKind::Geodesic: {
      if (body.kind() != Body::Kind::PBall) throw InvalidInput("gen_comparator_path: geodesic needs a ball");
      if (T <= 1 || L == 0.0) return make_path(body, std::vector<Vector>(T, body.center()));
      const double step = L / static_cast<double>(T - 1);
      if (step > 2.0 * body.radius()) {
        throw InvalidInput("gen_comparator_path: step L/(T-1) exceeds the diameter");
      }
      Vector d(n);
      double len = 0.0;
      while (len == 0.0) {
        for (double& v : d) v = normal(rng);
        len = norm(d, body.ball_norm());
      }
      for (double& v : d) v /= len;
      std::vector<Vector> u(T);
      for (std::size_t t = 0; t < T; ++t) u[t] = axpy(body.center(), (t % 2 == 0 ? -0.5 : 0.5) * step, d);
      return make_path(body, std::move(u));
    }
  }
  throw InternalError("gen_comparator_path: unreachable");
}

}  // namespace driftbench
