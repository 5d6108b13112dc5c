#ifndef TNB_PG_COMBINE_HPP_
#define TNB_PG_COMBINE_HPP_

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tnb/error.hpp"

namespace tnb::pg {

enum class Combiner { plain, wsr, tnb, tnb_noproj };

inline std::string to_string(Combiner c) {
  switch (c) {
    case Combiner::plain: return "plain";
    case Combiner::wsr: return "wsr";
    case Combiner::tnb: return "tnb";
    case Combiner::tnb_noproj: return "tnb_noproj";
  }
  return "?";
}

inline Combiner combiner_from_string(std::string_view s) {
  if (s == "plain" || s == "ppo") return Combiner::plain;
  if (s == "wsr") return Combiner::wsr;
  if (s == "tnb") return Combiner::tnb;
  if (s == "tnb_noproj") return Combiner::tnb_noproj;
  throw ConfigError("unknown combiner '" + std::string(s) + "' (expected plain, wsr, tnb or tnb_noproj)");
}

// Which rule produced g_final.
enum class Branch { bisector, projection };

struct GradientPair {
  std::vector<double> g_task;
  std::vector<double> g_novel;
  std::vector<double> g_final;
  Branch branch = Branch::projection;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

namespace detail {

// Binary exponent e with max|a| < 2^e, or 0 for an all-zero vector. Scaling by
// 2^-e is exact, so the scaled geometry below matches the unscaled one bit for
// bit wherever the unscaled one does not overflow or underflow.
inline int scale_exponent(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  if (m == 0.0 || !std::isfinite(m)) return 0;
  int e = 0;
  std::frexp(m, &e);
  return e;
}

inline std::vector<double> scaled(std::span<const double> a, int e) {
  std::vector<double> out(a.begin(), a.end());
  for (double& v : out) v = std::ldexp(v, e);
  return out;
}

}  // namespace detail

inline double norm(std::span<const double> a) {
  const int e = detail::scale_exponent(a);
  if (e == 0) return std::sqrt(dot(a, a));
  const std::vector<double> s = detail::scaled(a, -e);
  return std::ldexp(std::sqrt(dot(s, s)), e);
}

namespace detail {

inline void check_lengths(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DimensionError("gradient lengths differ: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
}

// d = normalize(a/|a| + b/|b|); returns (((a + b) / 2) . d) d.
// Callers guarantee both inputs are non-zero and not exactly opposite.
inline std::vector<double> bisector(std::span<const double> a, std::span<const double> b) {
  const double na = norm(a);
  const double nb = norm(b);
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] / na + b[i] / nb;
  const double nd = norm(d);
  double magnitude = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d[i] /= nd;
    magnitude += 0.5 * (a[i] + b[i]) * d[i];
  }
  for (double& v : d) v *= magnitude;
  return d;
}

}  // namespace detail

namespace detail {

inline std::vector<double> project_out_unscaled(std::span<const double> g_task, std::span<const double> g_novel) {
  std::vector<double> out(g_task.begin(), g_task.end());
  const double nn = dot(g_novel, g_novel);
  if (nn == 0.0) return out;
  const double c = dot(g_task, g_novel) / nn;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= c * g_novel[i];
  return out;
}

inline std::vector<double> combine_tnb_unscaled(std::span<const double> g_task, std::span<const double> g_novel,
                                                Branch* branch) {
  if (dot(g_task, g_novel) > 0.0) {
    if (branch) *branch = Branch::bisector;
    return bisector(g_task, g_novel);
  }
  if (branch) *branch = Branch::projection;
  return project_out_unscaled(g_task, g_novel);
}

// Both rules are homogeneous of degree one, so f(a, b) = 2^e f(2^-e a, 2^-e b).
// Bringing the larger input into [0.5, 1) keeps squared norms finite for any
// finite gradients.
template <class F>
std::vector<double> with_common_scale(std::span<const double> a, std::span<const double> b, F&& f) {
  const int e = std::max(scale_exponent(a), scale_exponent(b));
  if (e == 0) return f(a, b);
  std::vector<double> out = f(scaled(a, -e), scaled(b, -e));
  for (double& v : out) v = std::ldexp(v, e);
  return out;
}

}  // namespace detail

// g_task - (g_task . g_novel / |g_novel|^2) g_novel; g_task itself when g_novel is zero.
inline std::vector<double> project_out(std::span<const double> g_task, std::span<const double> g_novel) {
  detail::check_lengths(g_task, g_novel);
  return detail::with_common_scale(g_task, g_novel, [](std::span<const double> t, std::span<const double> n) {
    return detail::project_out_unscaled(t, n);
  });
}

// Bisector when the two gradients agree (strictly positive dot product),
// projection of g_task onto the hyperplane orthogonal to g_novel otherwise.
inline std::vector<double> combine_tnb(std::span<const double> g_task, std::span<const double> g_novel,
                                       Branch* branch = nullptr) {
  detail::check_lengths(g_task, g_novel);
  return detail::with_common_scale(g_task, g_novel, [branch](std::span<const double> t, std::span<const double> n) {
    return detail::combine_tnb_unscaled(t, n, branch);
  });
}

// Ablation that always takes the bisector. A zero input yields the other
// gradient; exactly opposite directions have no bisector and yield zero.
inline std::vector<double> combine_tnb_noproj(std::span<const double> g_task, std::span<const double> g_novel) {
  detail::check_lengths(g_task, g_novel);
  const double nt = norm(g_task);
  const double nv = norm(g_novel);
  if (nt == 0.0) return {g_novel.begin(), g_novel.end()};
  if (nv == 0.0) return {g_task.begin(), g_task.end()};
  double sum_norm = 0.0;
  for (std::size_t i = 0; i < g_task.size(); ++i) {
    const double v = g_task[i] / nt + g_novel[i] / nv;
    sum_norm += v * v;
  }
  if (sum_norm == 0.0) return std::vector<double>(g_task.size(), 0.0);
  return detail::with_common_scale(g_task, g_novel, [](std::span<const double> t, std::span<const double> n) {
    return detail::bisector(t, n);
  });
}

// r_task + weight * r_novel, step by step.
inline std::vector<double> combine_wsr(std::span<const double> task_rewards, std::span<const double> novelty_rewards,
                                       double weight) {
  detail::check_lengths(task_rewards, novelty_rewards);
  if (weight < 0.0 || !std::isfinite(weight)) throw ConfigError("wsr weight must be finite and non-negative");
  std::vector<double> out(task_rewards.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = task_rewards[i] + weight * novelty_rewards[i];
  return out;
}

}  // namespace tnb::pg

#endif  // TNB_PG_COMBINE_HPP_
