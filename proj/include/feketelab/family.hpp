#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "feketelab/arith.hpp"

namespace feketelab::family {

struct FamilyRecord {
  std::int64_t D = 0;
  std::uint64_t n_zeros_grid = 0;
  std::uint64_t n_zeros_window = 0;
  std::uint64_t sign_changes_full = 0;
  std::uint64_t sign_changes_window = 0;
  bool all_partial_sums_nonneg = false;
  std::vector<std::pair<double, double>> log_l_at;  // (s, smoothed log L(s))

  friend bool operator==(const FamilyRecord&, const FamilyRecord&) = default;
};

struct ScanConfig {
  // zeros of F_D are sought on [0, 1 - h_min_factor/|D|] with a grid uniform in -log(1 - z)
  std::uint64_t grid_points = 96;
  double h_min_factor = 0.125;
  double refine_tol = 1.0;               // >= 1 means brackets are not bisected
  double alpha_zero_window = 0.04;     // localized zero window
  std::uint64_t window_points = 16;    // extra grid points inside it
  double alpha_sum_window = 0.04;      // partial-sum window
  std::vector<double> log_l_s = {0.55, 0.75};
  double log_l_y = 1000;
  std::uint64_t block = 10000;         // discriminants per checkpoint
};

using RecordSink = std::function<void(const FamilyRecord&)>;
using ProgressHook = std::function<void(std::uint64_t done, std::uint64_t total)>;

// One record per fundamental discriminant 1 < |D| <= x of the given sign,
// in enumeration order. Blocks are computed in parallel and delivered to
// the sink in order, so output does not depend on the thread count.
std::uint64_t scan_family(std::uint64_t x, arith::Sign sign, const ScanConfig& config, const RecordSink& sink,
                          const ProgressHook& progress = {});
std::vector<FamilyRecord> scan_family(std::uint64_t x, arith::Sign sign, const ScanConfig& config = {});

struct FamilySummary {
  std::uint64_t count = 0;
  double mean_zeros = 0;              // N_D from the grid
  double mean_window_zeros = 0;
  double mean_sign_changes = 0;       // S^- of S(N), N < |D|
  double mean_window_sign_changes = 0;
  double fraction_no_zeros = 0;
  double fraction_nonneg = 0;
  // log_2 x / log_4 x and log_2 x / log_3 x (iterated logs) at the family
  // bound x. log_4 x is negative for x < e^{e^e} ~ 3.8e6, which makes the first
  // scale negative at desk scale.
  double scale_log4 = 0;
  double scale_log3 = 0;
};

FamilySummary summarize(std::span<const FamilyRecord> records, double x);

struct OrthogonalityRow {
  std::uint64_t n = 0;
  bool square = false;
  std::int64_t sum = 0;
  double main_term = 0;     // squares: (6/pi^2) x prod_{p | m} p/(p+1)
  double deviation = 0;     // squares: sum / main_term - 1
  double bound_ratio = 0;   // non-squares: |sum| / (x^{1/2} n^{1/4} log n)
};
// Sums of chi_D(n) over all fundamental discriminants |D| <= x.
std::vector<OrthogonalityRow> orthogonality_check(std::uint64_t x, std::span<const std::uint64_t> n_set);

struct JutilaRow {
  std::uint64_t N = 0;
  double moment = 0;  // sum_D |S_D(N)|^2
  double ratio = 0;   // moment / (x N)
};
struct JutilaReport {
  std::uint64_t x = 0;
  std::uint64_t family_size = 0;
  std::vector<JutilaRow> rows;
};
JutilaReport jutila_check(std::uint64_t x, std::span<const std::uint64_t> N_set);

struct Window {
  double s = 0;
  double u = 0;
  double v = 0;
};

struct DiscrepancyReport {
  std::vector<Window> windows;
  std::uint64_t family_size = 0;
  std::uint64_t model_trials = 0;
  std::uint64_t boxes_tested = 0;
  double sup_abs_difference = 0;
  double paper_scale = 0;             // J / (log x)^{1/10}
  double full_box_difference = 0;     // box = R^J
  std::vector<double> family_correlation;  // adjacent coordinates (J >= 2)
};

// Sup of |P_family(box) - P_model(box)| over the tested box family.
DiscrepancyReport empirical_discrepancy(std::uint64_t x, std::span<const Window> windows, std::uint64_t model_trials,
                                        std::uint64_t boxes, std::uint64_t seed);

// Same sup for two arbitrary samples (rows are points in R^J).
double box_discrepancy(std::span<const std::vector<double>> a, std::span<const std::vector<double>> b,
                       std::uint64_t boxes, std::uint64_t* boxes_tested = nullptr);

// Model vectors (L_{u_j, v_j}(s_j, X))_j for trials independent draws.
std::vector<std::vector<double>> model_vectors(std::span<const Window> windows, std::uint64_t trials,
                                               std::uint64_t seed);

struct ThreePoint {
  std::int64_t D = 0;
  double f1 = 0, f2 = 0, f3 = 0;
  bool f3_dual = false;  // evaluated through the Poisson dual
};

// F_D at exp(-x^{-1/4+eps}), exp(-x^{-1/2}), exp(-x^{1/4}/D) for D in F+(x).
std::vector<ThreePoint> three_point_values(std::uint64_t x, double eps);

struct MomentRow {
  std::uint64_t x = 0;
  std::uint64_t family_size = 0;
  double S1 = 0;
  double S2 = 0;
  double mean_f1 = 0, mean_f2 = 0, mean_f3 = 0;
  bool cauchy_schwarz = false;  // S2 >= S1^2 / |F+|
};

struct MixedMoments {
  double eps = 0.05;
  std::vector<MomentRow> rows;
  double slope_S1 = 0;  // least squares slope of log S1 against log x
  double slope_S2 = 0;
  double target_S1 = 0;  // 7/4 - eps/2
  double target_S2 = 2.5;
};

MixedMoments mixed_moments(std::span<const std::uint64_t> x_ladder, double eps = 0.05);

struct FilterResult {
  std::uint64_t passing = 0;
  std::uint64_t family_size = 0;
};
// D in F+(x) with min(|F_D(z_1)|, |F_D(z_2)|, |F_D(z_3)|) >= threshold.
FilterResult min_three_point_filter(std::uint64_t x, double threshold, double eps = 0.05);

struct TruncationAudit {
  std::uint64_t family_size = 0;
  double mean_abs_diff = 0;
  double median_abs_diff = 0;
  double q90_abs_diff = 0;
  double fraction_above_g = 0;
};
// |smoothed L'/L(s) - window surrogate| over F(x).
TruncationAudit truncation_audit(std::uint64_t x, double s, double u, double v, double y, double g);

}  // namespace feketelab::family
