#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "feketelab/arith.hpp"
#include "feketelab/character.hpp"

namespace feketelab::random_model {

// Counter-based generator: every (seed, stream, counter) triple maps to an
// independent 64-bit word through SplitMix64 finalizers, so draws never
// depend on evaluation order or thread count.
std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);
// Uniform double in [0, 1) with 53 random bits.
double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);
// Seed of trial i derived from a master seed.
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial);

// X(p) in {-1, 0, 1}: P(+-1) = p / (2(p+1)) each, P(0) = 1/(p+1).
int model_value(std::uint64_t seed, std::uint64_t p);
// Rademacher X(p) in {-1, +1}.
int rademacher_value(std::uint64_t seed, std::uint64_t p);

struct ModelSample {
  std::uint64_t seed = 0;
  std::uint64_t limit = 0;
  std::shared_ptr<const arith::PrimeTable> primes;
  std::vector<std::int8_t> prime_values;  // aligned with primes->primes()

  int at_prime(std::uint64_t p) const;
  // Multiplicative extension X(n) = prod X(p)^a.
  int at(std::uint64_t n) const;
};

struct RademacherSample {
  std::uint64_t seed = 0;
  std::uint64_t limit = 0;
  std::shared_ptr<const arith::PrimeTable> primes;
  std::vector<std::int8_t> prime_values;

  int at_prime(std::uint64_t p) const;
  // Multiplicative on squarefree n, 0 otherwise.
  int at(std::uint64_t n) const;
};

ModelSample sample_model(std::uint64_t seed, std::uint64_t limit);
ModelSample sample_model(std::uint64_t seed, std::shared_ptr<const arith::PrimeTable> primes);
RademacherSample sample_rademacher(std::uint64_t seed, std::uint64_t limit);
RademacherSample sample_rademacher(std::uint64_t seed, std::shared_ptr<const arith::PrimeTable> primes);

// sum_{u < p < v} X(p) log p / p^s; v <= sample.limit.
double window_value(const ModelSample& sample, double s, double u, double v);
// Same sum drawn straight from the generator, without a materialized sample.
double window_value(std::uint64_t seed, const arith::PrimeTable& primes, double s, double u, double v);

// sum_{u < p < v} (log p)^2 p / (p^{2s} (p+1)).
double window_variance(const arith::PrimeTable& primes, double s, double u, double v);

// S^- of the partial sums sum_{n <= y} f(n), y = 1..x_max.
character::SignChangeReport rademacher_partial_sums(const RademacherSample& sample, std::uint64_t x_max);
std::vector<std::int64_t> rademacher_sums(const RademacherSample& sample, std::uint64_t x_max);

struct BamoResult {
  double delta = 0;
  std::uint64_t R = 0;
  std::uint64_t trials = 0;
  double threshold = 0;  // delta R / 5
  std::uint64_t hits = 0;
  double probability = 0;
  double std_error = 0;
};

// Fraction of trials with S^-(Z_1..Z_R) <= delta R / 5, where
// P(Z > 0) = P(Z < 0) = delta. Requires 0 <= delta <= 1/2, R >= 5.
BamoResult bamo_check(double delta, std::uint64_t R, std::uint64_t trials, std::uint64_t seed);
// The same probability by enumerating all 3^R sign patterns (R <= 12).
double bamo_exact(double delta, std::uint64_t R);

struct SimWindow {
  double s = 0;
  double u = 0;
  double v = 0;
  bool clipped = false;
  bool degenerate = false;
};

// s_r = 1/2 + M^{-3r}, (u_r, v_r) = (e^{M^{3r-1}}, e^{M^{3r+1}}) for r = 1..R,
// clipped to [2, limit] with the flags set.
std::vector<SimWindow> paper_windows(double M, std::uint64_t R, std::uint64_t limit);

struct SimWindowStats {
  SimWindow window;
  double sigma = 0;          // from the variance formula
  double empirical_sd = 0;
  double p_plus = 0;         // P(Y_r = +1)
  double p_minus = 0;        // P(Y_r = -1)
  double p_abs_above4 = 0;   // P(|value / sigma| > 4)
};

struct PointsSimulation {
  double kappa = 4;  // Y_r = sign(value) when |value| > kappa sigma_r
  std::uint64_t trials = 0;
  std::vector<SimWindowStats> windows;
  std::vector<std::uint64_t> sminus_histogram;  // index = S^- of (Y_r)
  double lag1_correlation = 0;                  // averaged over adjacent window pairs
  double lag1_correlation_se = 0;
};

PointsSimulation sign_change_points_simulation(std::span<const SimWindow> windows, std::uint64_t trials,
                                               std::uint64_t seed, double kappa = 4.0);

}  // namespace feketelab::random_model
