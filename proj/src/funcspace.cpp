#include "hbundle/funcspace.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "hbundle/errors.hpp"
#include "hbundle/random.hpp"

namespace hbundle {

namespace {

std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void require_same_domain(const RankFrequencyFunction& f, const RankFrequencyFunction& g) {
  if (f.support_start() != g.support_start() || f.support_end() != g.support_end()) {
    throw DomainMismatch("functions have different supports [" + fmt_num(f.support_start()) +
                         ", " + fmt_num(f.support_end()) + "] and [" +
                         fmt_num(g.support_start()) + ", " + fmt_num(g.support_end()) + "]");
  }
}

void require_prefix(const RankFrequencyFunction& f, double a_cut) {
  if (!(a_cut > f.support_start() && a_cut < f.support_end())) {
    throw BadPrefix("prefix bound " + fmt_num(a_cut) + " is not inside ]" +
                    fmt_num(f.support_start()) + ", " + fmt_num(f.support_end()) + "[");
  }
}

// Abscissae of the merged breakpoint set inside [a, a_cut], plus a_cut.
std::vector<double> prefix_abscissae(const RankFrequencyFunction& f,
                                     const RankFrequencyFunction& g, double a_cut) {
  auto xs = merged_abscissae(f, g);
  std::erase_if(xs, [&](double x) { return x > a_cut; });
  if (xs.empty() || xs.back() != a_cut) xs.push_back(a_cut);
  return xs;
}

}  // namespace

RankFrequencyFunction::RankFrequencyFunction(std::vector<Breakpoint> points)
    : points_(std::move(points)) {
  if (points_.size() < 2) throw InvalidFunction("need at least two breakpoints");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& p = points_[i];
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw InvalidFunction("breakpoint " + std::to_string(i) + " is not finite");
    }
    if (p.y < 0.0) throw InvalidFunction("breakpoint " + std::to_string(i) + " is negative");
    if (i == 0) continue;
    if (!(p.x > points_[i - 1].x)) {
      throw InvalidFunction("abscissae must be strictly increasing at breakpoint " +
                            std::to_string(i));
    }
    if (p.y > points_[i - 1].y) {
      throw InvalidFunction("function must be non-increasing at breakpoint " +
                            std::to_string(i));
    }
  }
  if (points_.front().x < 0.0) throw InvalidFunction("support must start at a >= 0");
}

RankFrequencyFunction RankFrequencyFunction::line(double a, double y_a, double s, double y_s) {
  return RankFrequencyFunction({{a, y_a}, {s, y_s}});
}

RankFrequencyFunction RankFrequencyFunction::constant(double value, double a, double s) {
  return RankFrequencyFunction({{a, value}, {s, value}});
}

std::size_t RankFrequencyFunction::segment_index(double x) const {
  const auto it = std::upper_bound(points_.begin(), points_.end(), x,
                                   [](double v, const Breakpoint& p) { return v < p.x; });
  if (it == points_.begin()) return 0;
  const auto idx = static_cast<std::size_t>(it - points_.begin()) - 1;
  return std::min(idx, segment_count() - 1);
}

double RankFrequencyFunction::slope(std::size_t segment) const {
  const auto& p = points_[segment];
  const auto& q = points_[segment + 1];
  return (q.y - p.y) / (q.x - p.x);
}

double eval(const RankFrequencyFunction& f, double x) {
  if (!f.contains(x)) {
    throw DomainError("x = " + fmt_num(x) + " outside [" + fmt_num(f.support_start()) + ", " +
                      fmt_num(f.support_end()) + "]");
  }
  const auto pts = f.breakpoints();
  const auto i = f.segment_index(x);
  const auto& p = pts[i];
  const auto& q = pts[i + 1];
  if (x == p.x) return p.y;
  if (x == q.x) return q.y;
  const double t = (x - p.x) / (q.x - p.x);
  return p.y + (q.y - p.y) * t;
}

double integral(const RankFrequencyFunction& f, double lower, double upper) {
  if (!(lower <= upper) || !f.contains(lower) || !f.contains(upper)) {
    throw DomainError("integration bounds [" + fmt_num(lower) + ", " + fmt_num(upper) +
                      "] not inside the support");
  }
  if (lower == upper) return 0.0;
  const auto pts = f.breakpoints();
  double total = 0.0;
  for (std::size_t i = f.segment_index(lower); i < f.segment_count() && pts[i].x < upper; ++i) {
    const double u = std::max(lower, pts[i].x);
    const double v = std::min(upper, pts[i + 1].x);
    if (v > u) total += 0.5 * (v - u) * (eval(f, u) + eval(f, v));
  }
  return total;
}

RankFrequencyFunction from_citation_counts(std::span<const double> counts, bool* resorted) {
  if (counts.empty()) throw EmptyInput("citation count list is empty");
  std::vector<double> c(counts.begin(), counts.end());
  for (double v : c) {
    if (!std::isfinite(v) || v < 0.0) throw InvalidFunction("citation counts must be >= 0");
  }
  const bool sorted = std::is_sorted(c.begin(), c.end(), std::greater<>());
  if (!sorted) std::sort(c.begin(), c.end(), std::greater<>());
  if (resorted != nullptr) *resorted = !sorted;

  std::vector<Breakpoint> pts;
  pts.reserve(c.size() + 2);
  pts.push_back({0.0, c.front()});
  for (std::size_t i = 0; i < c.size(); ++i) {
    pts.push_back({static_cast<double>(i + 1), c[i]});
  }
  pts.push_back({static_cast<double>(c.size() + 1), 0.0});
  return RankFrequencyFunction(std::move(pts));
}

std::vector<double> merged_abscissae(const RankFrequencyFunction& f,
                                     const RankFrequencyFunction& g) {
  std::vector<double> xs;
  xs.reserve(f.breakpoints().size() + g.breakpoints().size());
  for (const auto& p : f.breakpoints()) xs.push_back(p.x);
  for (const auto& p : g.breakpoints()) xs.push_back(p.x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

bool leq(const RankFrequencyFunction& f, const RankFrequencyFunction& g) {
  require_same_domain(f, g);
  const auto xs = merged_abscissae(f, g);
  return std::all_of(xs.begin(), xs.end(), [&](double x) { return eval(f, x) <= eval(g, x); });
}

bool lt_on_prefix(const RankFrequencyFunction& f, const RankFrequencyFunction& g,
                  double a_cut) {
  require_same_domain(f, g);
  require_prefix(f, a_cut);
  const auto xs = prefix_abscissae(f, g, a_cut);
  return std::all_of(xs.begin(), xs.end(), [&](double x) {
    return eval(g, x) - eval(f, x) > kStrictnessTolerance;
  });
}

bool eq_on_prefix(const RankFrequencyFunction& f, const RankFrequencyFunction& g,
                  double a_cut) {
  require_same_domain(f, g);
  require_prefix(f, a_cut);
  const auto xs = prefix_abscissae(f, g, a_cut);
  return std::all_of(xs.begin(), xs.end(), [&](double x) { return eval(g, x) == eval(f, x); });
}

bool holds(const FunctionOrdering& ordering, const RankFrequencyFunction& f,
           const RankFrequencyFunction& g) {
  switch (ordering.relation) {
    case FunctionOrdering::Relation::Leq:
      return leq(f, g);
    case FunctionOrdering::Relation::StrictOnPrefix:
      return lt_on_prefix(f, g, ordering.prefix);
    case FunctionOrdering::Relation::EqualOnPrefix:
      return eq_on_prefix(f, g, ordering.prefix);
  }
  return false;
}

RankFrequencyFunction perturb(const RankFrequencyFunction& f, PerturbMode mode,
                              double epsilon) {
  if (!std::isfinite(epsilon)) throw WouldViolateInvariants("perturbation must be finite");
  std::vector<Breakpoint> pts(f.breakpoints().begin(), f.breakpoints().end());
  if (mode == PerturbMode::Multiplicative) {
    if (!(epsilon > -1.0)) {
      throw WouldViolateInvariants("multiplicative perturbation needs epsilon > -1");
    }
    for (auto& p : pts) p.y *= (1.0 + epsilon);
  } else {
    for (auto& p : pts) {
      p.y += epsilon;
      if (p.y < 0.0) {
        throw WouldViolateInvariants("additive perturbation would make f negative at x = " +
                                     fmt_num(p.x));
      }
    }
  }
  return RankFrequencyFunction(std::move(pts));
}

RankFrequencyFunction random_function(std::uint64_t seed, const RandomFunctionParams& params) {
  Rng rng(seed);
  const std::size_t max_n = std::max<std::size_t>(2, params.max_breakpoints);
  const auto n = static_cast<std::size_t>(rng.uniform_int(2, max_n));
  const double a = params.support_start;
  const double length = rng.uniform(params.s_min, params.s_max);

  std::vector<double> xs{a, a + length};
  while (xs.size() < n) {
    const double x = a + rng.uniform(0.0, length);
    if (std::find(xs.begin(), xs.end(), x) == xs.end() && x > a) xs.push_back(x);
  }
  std::sort(xs.begin(), xs.end());

  std::vector<double> ys(n);
  // Positive draws: the open lower end keeps f(S) > 0 unless pinned below.
  for (auto& y : ys) y = params.y_max * (1.0 - rng.uniform(0.0, 1.0));
  std::sort(ys.begin(), ys.end(), std::greater<>());
  if (params.vanish_at_end) ys.back() = 0.0;

  std::vector<Breakpoint> pts(n);
  for (std::size_t i = 0; i < n; ++i) pts[i] = {xs[i], ys[i]};
  return RankFrequencyFunction(std::move(pts));
}

std::string digest(const RankFrequencyFunction& f) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& p : f.breakpoints()) {
    mix(p.x);
    mix(p.y);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace hbundle
