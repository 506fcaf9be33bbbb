#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>

#include "laplace/matrix.hpp"
#include "laplace/reverse_cholesky.hpp"

namespace laplace {

namespace detail {

// Nearest value with `digits` significant decimal digits, ties to even.
// Round-trips through a correctly rounded decimal conversion, which is
// exactly the fixed-width-table model wanted here.
inline double round_decimal(double x, int digits) {
  if (x == 0.0) return 0.0;
  if (!std::isfinite(x)) return x;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*e", digits - 1, x);
  return std::strtod(buf, nullptr);
}

}  // namespace detail

/// round_sig(x, d): x rounded to d significant decimal digits (2..15),
/// half to even; round_sig(0, d) = 0.
inline double round_sig(double x, int digits) {
  detail::require(digits >= 2 && digits <= 15, "round_sig: digits must be in 2..15");
  return detail::round_decimal(x, digits);
}

/// A value constrained to carry no more than `digits` significant decimal
/// digits.
struct RoundedScalar {
  double value = 0.0;
  int digits = 0;

  static RoundedScalar of(double x, int digits) { return {round_sig(x, digits), digits}; }
};

/// Count of agreeing leading significant decimal digits, 0..15 (15 also
/// covers exact equality). Sign disagreement counts as 0.
inline int agreeing_digits(double a, double b) {
  if (a == b) return 15;
  if (!std::isfinite(a) || !std::isfinite(b)) return 0;
  int agree = 0;
  for (int k = 1; k <= 15; ++k) {
    if (detail::round_decimal(a, k) != detail::round_decimal(b, k)) break;
    agree = k;
  }
  return agree;
}

struct ReplayEntryDiff {
  double replayed = 0.0;
  double reference = 0.0;
  int agree = 0;
};

struct ReplayStepDiff {
  std::size_t size = 0;
  std::vector<ReplayEntryDiff> lower;  // packed, size*(size+1)/2
  std::vector<ReplayEntryDiff> rhs;

  const ReplayEntryDiff& lower_at(std::size_t i, std::size_t j) const {
    detail::require(j <= i && i < size, "ReplayStepDiff: need j <= i < size");
    return lower[NormalSystem::packed_index(i, j)];
  }
};

/// Per-snapshot, per-entry digit agreement between a rounded replay and a
/// reference run.
struct DigitDiffReport {
  int digits = 0;
  std::vector<ReplayStepDiff> steps;  // sizes n, n-1, ..., 1

  int min_agreement() const {
    int best = 15;
    for (const auto& s : steps) {
      for (const auto& e : s.lower) best = std::min(best, e.agree);
      for (const auto& e : s.rhs) best = std::min(best, e.agree);
    }
    return best;
  }

  /// Entry positions whose agreement falls below `threshold` digits.
  /// j == size marks a right-hand-side entry.
  struct Flag {
    std::size_t size, i, j;
  };
  std::vector<Flag> flagged(int threshold) const {
    std::vector<Flag> out;
    for (const auto& s : steps) {
      for (std::size_t i = 0; i < s.size; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
          if (s.lower_at(i, j).agree < threshold) out.push_back({s.size, i, j});
        }
        if (s.rhs[i].agree < threshold) out.push_back({s.size, i, s.size});
      }
    }
    return out;
  }
};

struct ReplayResult {
  ReverseCholesky factors;  // the rounded run, snapshots included
  DigitDiffReport vs_full;
  std::optional<DigitDiffReport> vs_reference;
};

namespace detail {

inline DigitDiffReport diff_snapshots(int digits, const std::vector<EliminationStep>& replay,
                                      const std::vector<EliminationStep>& reference) {
  DigitDiffReport report;
  report.digits = digits;
  for (const auto& rstep : replay) {
    for (const auto& ref : reference) {
      if (ref.size != rstep.size) continue;
      ReplayStepDiff d;
      d.size = rstep.size;
      d.lower.resize(rstep.lower.size());
      for (std::size_t k = 0; k < rstep.lower.size(); ++k) {
        d.lower[k] = {rstep.lower[k], ref.lower[k],
                      agreeing_digits(rstep.lower[k], ref.lower[k])};
      }
      d.rhs.resize(rstep.rhs.size());
      for (std::size_t k = 0; k < rstep.rhs.size(); ++k) {
        d.rhs[k] = {rstep.rhs[k], ref.rhs[k], agreeing_digits(rstep.rhs[k], ref.rhs[k])};
      }
      report.steps.push_back(std::move(d));
      break;
    }
  }
  return report;
}

}  // namespace detail

/// Re-runs the elimination with every binary operation result rounded to
/// `digits` significant decimal digits (a human working term by term on
/// fixed-width tables). Inputs pass through unrounded; they are copies, not
/// arithmetic. Diffs the rounded snapshots against the full-precision run
/// and, when given, against reference snapshots such as historical printed
/// values.
inline ReplayResult replay_factor(const NormalSystem& s, int digits,
                                  const std::vector<EliminationStep>* reference = nullptr) {
  detail::require(digits >= 2 && digits <= 15, "replay_factor: digits must be in 2..15");
  const std::size_t n = s.size();

  ReplayResult out;
  out.factors.n = n;
  out.factors.m = s.packed();
  out.factors.reduced_rhs = s.rhs;

  auto& f = out.factors;
  auto at = [&f](std::size_t i, std::size_t j) -> double& {
    return f.m[NormalSystem::packed_index(i, j)];
  };
  auto rnd = [digits](double v) { return detail::round_decimal(v, digits); };
  auto snap = [&](std::size_t size) {
    EliminationStep step;
    step.size = size;
    step.lower.assign(f.m.begin(), f.m.begin() + static_cast<std::ptrdiff_t>(size * (size + 1) / 2));
    step.rhs.assign(f.reduced_rhs.begin(), f.reduced_rhs.begin() + static_cast<std::ptrdiff_t>(size));
    f.snapshots.push_back(std::move(step));
  };
  snap(n);

  for (std::size_t kk = n; kk-- > 1;) {
    const double piv = at(kk, kk);
    if (!(piv > 0.0)) {
      throw std::domain_error("replay_factor: pivot for variable " + std::to_string(kk + 1) +
                              " is not positive (" + std::to_string(piv) + ") at " +
                              std::to_string(digits) + " digits");
    }
    for (std::size_t i = 0; i < kk; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        double t = rnd(at(kk, i) * at(kk, j));
        t = rnd(t / piv);
        at(i, j) = rnd(at(i, j) - t);
      }
    }
    for (std::size_t i = 0; i < kk; ++i) {
      double t = rnd(at(kk, i) * f.reduced_rhs[kk]);
      t = rnd(t / piv);
      f.reduced_rhs[i] = rnd(f.reduced_rhs[i] - t);
    }
    snap(kk);
  }
  if (!(at(0, 0) > 0.0)) {
    throw std::domain_error("replay_factor: pivot for variable 1 is not positive (" +
                            std::to_string(at(0, 0)) + ") at " + std::to_string(digits) +
                            " digits");
  }

  const ReverseCholesky exact = factor(s, true);
  out.vs_full = detail::diff_snapshots(digits, f.snapshots, exact.snapshots);
  if (reference != nullptr) {
    out.vs_reference = detail::diff_snapshots(digits, f.snapshots, *reference);
  }
  return out;
}

}  // namespace laplace
