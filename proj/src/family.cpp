#include "feketelab/family.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "feketelab/analytic.hpp"
#include "feketelab/character.hpp"
#include "feketelab/errors.hpp"
#include "feketelab/fekete.hpp"
#include "feketelab/random_model.hpp"

namespace feketelab::family {

using character::QuadraticCharacter;

namespace {

constexpr double kSixOverPiSq = 6.0 / (std::numbers::pi * std::numbers::pi);

FamilyRecord make_record(std::int64_t D, const ScanConfig& cfg, std::span<const analytic::SmoothedKernel> kernels) {
  const QuadraticCharacter chr(D);
  const std::uint64_t q = chr.modulus();
  FamilyRecord rec;
  rec.D = D;

  const auto sums = character::partial_sums(chr, q - 1);
  rec.sign_changes_full = character::sign_changes(sums, character::SignVariant::deleted_zeros).count;
  rec.sign_changes_window = character::sign_changes_in_window(q, sums, cfg.alpha_sum_window).count;
  rec.all_partial_sums_nonneg = *std::min_element(sums.begin(), sums.end()) >= 0;

  if (fekete::descartes_upper_bound(chr) > 0) {
    const double top = 1.0 - cfg.h_min_factor / static_cast<double>(q);
    auto zs = fekete::log_gap_grid(0.0, top, cfg.grid_points);
    const auto win = fekete::localized_window(q, cfg.alpha_zero_window);
    const double wlo = win.lo, whi = std::min(win.hi, top);
    if (wlo < whi) {
      const auto extra = fekete::log_gap_grid(wlo, whi, std::max<std::uint64_t>(2, cfg.window_points));
      zs.insert(zs.end(), extra.begin(), extra.end());
      std::sort(zs.begin(), zs.end());
      zs.erase(std::unique(zs.begin(), zs.end()), zs.end());
    }
    const auto rep = fekete::count_zeros_on_grid(chr, zs, cfg.refine_tol);
    rec.n_zeros_grid = rep.count;
    for (const auto& b : rep.brackets) {
      if (b.lo >= wlo && b.hi <= whi) ++rec.n_zeros_window;
    }
  }

  for (const auto& k : kernels) rec.log_l_at.emplace_back(k.s(), k.evaluate(chr));
  return rec;
}

double window_sum(std::int64_t D, const arith::PrimeTable& primes, const Window& w) {
  const auto [first, last] = primes.open_range(w.u, w.v);
  double sum = 0;
  for (std::size_t i = first; i < last; ++i) {
    const auto p = primes[i];
    const int c = arith::kronecker(D, static_cast<std::int64_t>(p));
    if (c == 0) continue;
    const double lp = std::log(static_cast<double>(p));
    sum += c * lp * std::exp(-w.s * lp);
  }
  return sum;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  if (x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

double radical_inverse(std::uint64_t i, std::uint64_t base) {
  double f = 1, r = 0;
  while (i > 0) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

// Empirical quantile of sorted data at level t in [0, 1].
double quantile(const std::vector<double>& sorted, double t) {
  const double pos = t * static_cast<double>(sorted.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  const std::size_t j = std::min(i + 1, sorted.size() - 1);
  return sorted[i] + (pos - static_cast<double>(i)) * (sorted[j] - sorted[i]);
}

}  // namespace

std::uint64_t scan_family(std::uint64_t x, arith::Sign sign, const ScanConfig& config, const RecordSink& sink,
                          const ProgressHook& progress) {
  if (x < 8) throw DomainError("scan_family: x must be at least 8");
  if (config.grid_points < 2) throw DomainError("scan_family: grid_points must be at least 2");
  if (!(config.h_min_factor > 0)) throw DomainError("scan_family: h_min_factor must be positive");
  if (config.block == 0) throw DomainError("scan_family: block must be positive");
  const auto values = arith::fundamental_values(x, sign);
  std::vector<analytic::SmoothedKernel> kernels;
  for (double s : config.log_l_s) kernels.emplace_back(analytic::SmoothedKind::log_l, s, config.log_l_y);

  const std::uint64_t total = values.size();
  std::vector<FamilyRecord> block;
  for (std::uint64_t start = 0; start < total; start += config.block) {
    const std::uint64_t end = std::min(total, start + config.block);
    block.assign(end - start, FamilyRecord{});
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t i = static_cast<std::int64_t>(start); i < static_cast<std::int64_t>(end); ++i) {
      block[static_cast<std::size_t>(i) - start] = make_record(values[i], config, kernels);
    }
    for (const auto& r : block) sink(r);
    if (progress) progress(end, total);
  }
  return total;
}

std::vector<FamilyRecord> scan_family(std::uint64_t x, arith::Sign sign, const ScanConfig& config) {
  std::vector<FamilyRecord> out;
  scan_family(x, sign, config, [&](const FamilyRecord& r) { out.push_back(r); });
  return out;
}

FamilySummary summarize(std::span<const FamilyRecord> records, double x) {
  if (!(x > 16)) throw DomainError("summarize: x must exceed 16");
  FamilySummary f;
  const double l2 = std::log(std::log(x));
  const double l3 = std::log(l2);
  f.scale_log3 = l2 / l3;
  f.scale_log4 = l2 / std::log(l3);
  f.count = records.size();
  if (records.empty()) return f;
  for (const auto& r : records) {
    f.mean_zeros += static_cast<double>(r.n_zeros_grid);
    f.mean_window_zeros += static_cast<double>(r.n_zeros_window);
    f.mean_sign_changes += static_cast<double>(r.sign_changes_full);
    f.mean_window_sign_changes += static_cast<double>(r.sign_changes_window);
    f.fraction_no_zeros += r.n_zeros_grid == 0 ? 1 : 0;
    f.fraction_nonneg += r.all_partial_sums_nonneg ? 1 : 0;
  }
  const double n = static_cast<double>(f.count);
  for (double* v : {&f.mean_zeros, &f.mean_window_zeros, &f.mean_sign_changes, &f.mean_window_sign_changes,
                    &f.fraction_no_zeros, &f.fraction_nonneg}) {
    *v /= n;
  }
  return f;
}

std::vector<OrthogonalityRow> orthogonality_check(std::uint64_t x, std::span<const std::uint64_t> n_set) {
  if (n_set.empty()) throw DomainError("orthogonality_check: empty n set");
  const auto values = arith::fundamental_values(x, arith::Sign::both);
  std::vector<OrthogonalityRow> rows;
  for (std::uint64_t n : n_set) {
    if (n == 0) throw DomainError("orthogonality_check: n must be positive");
    OrthogonalityRow row;
    row.n = n;
    std::int64_t sum = 0;
#pragma omp parallel for reduction(+ : sum) schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(values.size()); ++i) {
      sum += arith::kronecker(values[i], static_cast<std::int64_t>(n));
    }
    row.sum = sum;
    const auto m = static_cast<std::uint64_t>(std::llround(std::sqrt(static_cast<double>(n))));
    row.square = m * m == n;
    if (row.square) {
      double prod = 1;
      std::uint64_t r = m;
      for (std::uint64_t p = 2; p * p <= r; ++p) {
        if (r % p) continue;
        prod *= static_cast<double>(p) / static_cast<double>(p + 1);
        while (r % p == 0) r /= p;
      }
      if (r > 1) prod *= static_cast<double>(r) / static_cast<double>(r + 1);
      row.main_term = kSixOverPiSq * static_cast<double>(x) * prod;
      row.deviation = static_cast<double>(sum) / row.main_term - 1;
    } else {
      const double nd = static_cast<double>(n);
      row.bound_ratio = std::abs(static_cast<double>(sum)) /
                        (std::sqrt(static_cast<double>(x)) * std::pow(nd, 0.25) * std::log(nd));
    }
    rows.push_back(row);
  }
  return rows;
}

JutilaReport jutila_check(std::uint64_t x, std::span<const std::uint64_t> N_set) {
  if (N_set.empty()) throw DomainError("jutila_check: empty N set");
  for (auto N : N_set) {
    if (N < 1) throw DomainError("jutila_check: N must be at least 1");
  }
  const auto values = arith::fundamental_values(x, arith::Sign::both);
  std::vector<std::uint64_t> sorted(N_set.begin(), N_set.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  const std::uint64_t n_max = sorted.back();
  std::vector<unsigned long long> moments(sorted.size(), 0);
#pragma omp parallel
  {
    std::vector<unsigned long long> local(sorted.size(), 0);
#pragma omp for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(values.size()); ++i) {
      std::int64_t S = 0;
      std::size_t k = 0;
      for (std::uint64_t n = 1; n <= n_max; ++n) {
        S += arith::kronecker(values[i], static_cast<std::int64_t>(n));
        while (k < sorted.size() && sorted[k] == n) {
          local[k] += static_cast<unsigned long long>(S * S);
          ++k;
        }
      }
    }
#pragma omp critical
    for (std::size_t k = 0; k < sorted.size(); ++k) moments[k] += local[k];
  }
  JutilaReport rep;
  rep.x = x;
  rep.family_size = values.size();
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    const double m = static_cast<double>(moments[k]);
    rep.rows.push_back({sorted[k], m, m / (static_cast<double>(x) * static_cast<double>(sorted[k]))});
  }
  return rep;
}

std::vector<std::vector<double>> model_vectors(std::span<const Window> windows, std::uint64_t trials,
                                               std::uint64_t seed) {
  double top = 2;
  for (const auto& w : windows) {
    if (!(w.u >= 2 && w.u < w.v)) throw DomainError("model_vectors: need 2 <= u < v");
    top = std::max(top, w.v);
  }
  const arith::PrimeTable primes(static_cast<std::uint64_t>(std::ceil(top)));
  std::vector<std::vector<double>> out(trials, std::vector<double>(windows.size()));
#pragma omp parallel for schedule(static)
  for (std::int64_t t = 0; t < static_cast<std::int64_t>(trials); ++t) {
    const auto ts = random_model::trial_seed(seed, static_cast<std::uint64_t>(t));
    for (std::size_t j = 0; j < windows.size(); ++j) {
      out[t][j] = random_model::window_value(ts, primes, windows[j].s, windows[j].u, windows[j].v);
    }
  }
  return out;
}

double box_discrepancy(std::span<const std::vector<double>> a, std::span<const std::vector<double>> b,
                       std::uint64_t boxes, std::uint64_t* boxes_tested) {
  if (a.empty() || b.empty()) throw DomainError("box_discrepancy: empty sample");
  const std::size_t J = a.front().size();
  if (J == 0 || J > 8) throw DomainError("box_discrepancy: dimension must lie in [1, 8]");
  constexpr double kInf = std::numeric_limits<double>::infinity();

  std::vector<std::vector<double>> pooled(J);
  for (std::size_t j = 0; j < J; ++j) {
    for (const auto& r : a) pooled[j].push_back(r[j]);
    for (const auto& r : b) pooled[j].push_back(r[j]);
    std::sort(pooled[j].begin(), pooled[j].end());
  }
  using Box = std::vector<std::pair<double, double>>;  // (lo, hi]
  std::vector<Box> family;
  family.emplace_back(J, std::make_pair(-kInf, kInf));
  for (std::size_t j = 0; j < J; ++j) {
    for (int k = 1; k <= 9; ++k) {
      Box box(J, {-kInf, kInf});
      box[j].second = quantile(pooled[j], k / 10.0);
      family.push_back(box);
    }
  }
  static constexpr std::uint64_t kBases[16] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
  for (std::uint64_t i = 1; i <= boxes; ++i) {
    Box box(J);
    for (std::size_t j = 0; j < J; ++j) {
      double l = radical_inverse(i, kBases[2 * j]);
      double h = radical_inverse(i, kBases[2 * j + 1]);
      if (l > h) std::swap(l, h);
      box[j].first = l < 0.05 ? -kInf : quantile(pooled[j], l);
      box[j].second = h > 0.95 ? kInf : quantile(pooled[j], h);
    }
    family.push_back(box);
  }
  if (boxes_tested) *boxes_tested = family.size();

  auto mass = [&](std::span<const std::vector<double>> pts, const Box& box) {
    std::uint64_t c = 0;
    for (const auto& p : pts) {
      bool in = true;
      for (std::size_t j = 0; j < J && in; ++j) in = p[j] > box[j].first && p[j] <= box[j].second;
      c += in;
    }
    return static_cast<double>(c) / static_cast<double>(pts.size());
  };
  std::vector<double> diff(family.size());
  if (J == 1) {
    std::vector<double> sa, sb;
    for (const auto& r : a) sa.push_back(r[0]);
    for (const auto& r : b) sb.push_back(r[0]);
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    auto m1 = [](const std::vector<double>& s, double lo, double hi) {
      const auto first = std::upper_bound(s.begin(), s.end(), lo);
      const auto last = std::upper_bound(s.begin(), s.end(), hi);
      return static_cast<double>(last - first) / static_cast<double>(s.size());
    };
    for (std::size_t k = 0; k < family.size(); ++k) {
      diff[k] = std::abs(m1(sa, family[k][0].first, family[k][0].second) -
                         m1(sb, family[k][0].first, family[k][0].second));
    }
  } else {
#pragma omp parallel for schedule(dynamic, 4)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(family.size()); ++k) {
      diff[k] = std::abs(mass(a, family[k]) - mass(b, family[k]));
    }
  }
  return *std::max_element(diff.begin(), diff.end());
}

DiscrepancyReport empirical_discrepancy(std::uint64_t x, std::span<const Window> windows, std::uint64_t model_trials,
                                        std::uint64_t boxes, std::uint64_t seed) {
  if (windows.empty()) throw DomainError("empirical_discrepancy: no windows");
  if (boxes < 100) throw DomainError("empirical_discrepancy: boxes must be at least 100");
  if (model_trials < 2) throw DomainError("empirical_discrepancy: model_trials must be at least 2");
  double top = 2;
  for (const auto& w : windows) {
    if (!(w.u >= 2 && w.u < w.v)) throw DomainError("empirical_discrepancy: need 2 <= u < v");
    if (!(w.s > 0.5 && w.s <= 1)) throw DomainError("empirical_discrepancy: s must lie in (1/2, 1]");
    top = std::max(top, w.v);
  }
  const arith::PrimeTable primes(static_cast<std::uint64_t>(std::ceil(top)));
  const auto values = arith::fundamental_values(x, arith::Sign::both);
  std::vector<std::vector<double>> fam(values.size(), std::vector<double>(windows.size()));
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(values.size()); ++i) {
    for (std::size_t j = 0; j < windows.size(); ++j) fam[i][j] = window_sum(values[i], primes, windows[j]);
  }
  const auto model = model_vectors(windows, model_trials, seed);

  DiscrepancyReport rep;
  rep.windows.assign(windows.begin(), windows.end());
  rep.family_size = values.size();
  rep.model_trials = model_trials;
  rep.sup_abs_difference = box_discrepancy(fam, model, boxes, &rep.boxes_tested);
  rep.paper_scale = static_cast<double>(windows.size()) / std::pow(std::log(static_cast<double>(x)), 0.1);
  rep.full_box_difference = 0;
  for (std::size_t j = 0; j + 1 < windows.size(); ++j) {
    double ma = 0, mb = 0;
    for (const auto& r : fam) {
      ma += r[j];
      mb += r[j + 1];
    }
    ma /= static_cast<double>(fam.size());
    mb /= static_cast<double>(fam.size());
    double sab = 0, saa = 0, sbb = 0;
    for (const auto& r : fam) {
      sab += (r[j] - ma) * (r[j + 1] - mb);
      saa += (r[j] - ma) * (r[j] - ma);
      sbb += (r[j + 1] - mb) * (r[j + 1] - mb);
    }
    rep.family_correlation.push_back(sab / std::sqrt(saa * sbb));
  }
  return rep;
}

std::vector<ThreePoint> three_point_values(std::uint64_t x, double eps) {
  if (x < 8) throw DomainError("three_point_values: x must be at least 8");
  const auto values = arith::fundamental_values(x, arith::Sign::positive);
  const double xd = static_cast<double>(x);
  const double z1 = std::exp(-std::pow(xd, -0.25 + eps));
  const double z2 = std::exp(-std::pow(xd, -0.5));
  const double T = std::pow(xd, 0.25);
  std::vector<ThreePoint> out(values.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(values.size()); ++i) {
    const QuadraticCharacter chr(values[i]);
    ThreePoint& tp = out[i];
    tp.D = values[i];
    tp.f1 = fekete::eval_truncated(chr, z1, 1e-15).value;
    tp.f2 = fekete::eval_truncated(chr, z2, 1e-15).value;
    if (T >= 1 && T <= static_cast<double>(chr.modulus())) {
      tp.f3 = fekete::eval_poisson_dual(chr, T, 1e-9).value;
      tp.f3_dual = true;
    } else {
      tp.f3 = fekete::eval_direct(chr, std::exp(-T / static_cast<double>(chr.modulus()))).value;
    }
  }
  return out;
}

MixedMoments mixed_moments(std::span<const std::uint64_t> x_ladder, double eps) {
  if (x_ladder.empty()) throw DomainError("mixed_moments: empty ladder");
  if (!(eps > 0 && eps < 0.25)) throw DomainError("mixed_moments: eps must lie in (0, 1/4)");
  MixedMoments mm;
  mm.eps = eps;
  mm.target_S1 = 1.75 - eps / 2;
  std::vector<double> lx1, ls1, lx2, ls2;
  for (std::uint64_t x : x_ladder) {
    if (x < 1000) throw DomainError("mixed_moments: x must be at least 1000");
    const auto tp = three_point_values(x, eps);
    MomentRow row;
    row.x = x;
    row.family_size = tp.size();
    for (const auto& t : tp) {
      const double prod = t.f1 * t.f2 * t.f3;
      row.S1 += prod;
      row.S2 += prod * prod;
      row.mean_f1 += t.f1;
      row.mean_f2 += t.f2;
      row.mean_f3 += t.f3;
    }
    const double n = static_cast<double>(tp.size());
    row.mean_f1 /= n;
    row.mean_f2 /= n;
    row.mean_f3 /= n;
    row.cauchy_schwarz = row.S2 >= row.S1 * row.S1 / n;
    mm.rows.push_back(row);
    if (row.S1 > 0) {
      lx1.push_back(std::log(static_cast<double>(x)));
      ls1.push_back(std::log(row.S1));
    }
    if (row.S2 > 0) {
      lx2.push_back(std::log(static_cast<double>(x)));
      ls2.push_back(std::log(row.S2));
    }
  }
  mm.slope_S1 = least_squares_slope(lx1, ls1);
  mm.slope_S2 = least_squares_slope(lx2, ls2);
  return mm;
}

FilterResult min_three_point_filter(std::uint64_t x, double threshold, double eps) {
  if (!(threshold > 0)) throw DomainError("min_three_point_filter: threshold must be positive");
  const auto tp = three_point_values(x, eps);
  FilterResult r;
  r.family_size = tp.size();
  for (const auto& t : tp) {
    if (std::min({std::abs(t.f1), std::abs(t.f2), std::abs(t.f3)}) >= threshold) ++r.passing;
  }
  return r;
}

TruncationAudit truncation_audit(std::uint64_t x, double s, double u, double v, double y, double g) {
  const analytic::SmoothedKernel kernel(analytic::SmoothedKind::l_prime_over_l, s, y);
  if (!(u >= 2 && u < v)) throw DomainError("truncation_audit: need 2 <= u < v");
  const arith::PrimeTable primes(static_cast<std::uint64_t>(std::ceil(v)));
  const auto values = arith::fundamental_values(x, arith::Sign::both);
  std::vector<double> diff(values.size());
  const Window w{s, u, v};
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(values.size()); ++i) {
    const QuadraticCharacter chr(values[i]);
    diff[i] = std::abs(kernel.evaluate(chr) + window_sum(values[i], primes, w));
  }
  TruncationAudit a;
  a.family_size = values.size();
  double sum = 0;
  std::uint64_t above = 0;
  for (double d : diff) {
    sum += d;
    above += d > g;
  }
  a.mean_abs_diff = sum / static_cast<double>(diff.size());
  a.fraction_above_g = static_cast<double>(above) / static_cast<double>(diff.size());
  std::sort(diff.begin(), diff.end());
  a.median_abs_diff = quantile(diff, 0.5);
  a.q90_abs_diff = quantile(diff, 0.9);
  return a;
}

}  // namespace feketelab::family
