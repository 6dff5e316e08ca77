#include "feketelab/random_model.hpp"

#include <algorithm>
#include <cmath>

#include "feketelab/errors.hpp"

namespace feketelab::random_model {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;
constexpr std::uint64_t kTrialStream = 0xd1b54a32d192ed03ull;
constexpr std::uint64_t kBamoStream = 0x8cb92ba72f3d8dd7ull;

std::uint64_t mix(std::uint64_t z) {
  z += kGolden;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::size_t prime_index(const arith::PrimeTable& t, std::uint64_t p) {
  const auto ps = t.primes();
  const auto it = std::lower_bound(ps.begin(), ps.end(), p);
  if (it == ps.end() || *it != p) throw DomainError("random model: " + std::to_string(p) + " is not a tabulated prime");
  return static_cast<std::size_t>(it - ps.begin());
}

template <typename Draw>
std::vector<std::int8_t> draw_all(const arith::PrimeTable& t, std::uint64_t seed, Draw draw) {
  std::vector<std::int8_t> v(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) v[i] = static_cast<std::int8_t>(draw(seed, t[i]));
  return v;
}

// Exponents of n over the tabulated primes; returns false if a prime factor
// exceeds the table.
template <typename F>
bool factor_with(const arith::PrimeTable& t, std::uint64_t n, F on_factor) {
  for (std::size_t i = 0; i < t.size() && n > 1; ++i) {
    const auto p = t[i];
    if (p * p > n) break;
    unsigned k = 0;
    while (n % p == 0) {
      n /= p;
      ++k;
    }
    if (k) on_factor(i, k);
  }
  if (n > 1) {
    if (n > t.limit()) return false;
    on_factor(prime_index(t, n), 1u);
  }
  return true;
}

void check_window_args(double u, double v, std::uint64_t limit) {
  if (!(u >= 2 && u < v)) throw DomainError("window_value: need 2 <= u < v");
  if (v > static_cast<double>(limit)) throw DomainError("window_value: window exceeds the sample limit");
}

}  // namespace

std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  return mix(mix(mix(seed) ^ stream) ^ counter);
}

double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  return static_cast<double>(counter_hash(seed, stream, counter) >> 11) * 0x1.0p-53;
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) {
  return counter_hash(master, kTrialStream, trial);
}

int model_value(std::uint64_t seed, std::uint64_t p) {
  const double u = counter_uniform(seed, p, 0);
  const double pd = static_cast<double>(p);
  const double p0 = 1.0 / (pd + 1);
  if (u < p0) return 0;
  return u < p0 + pd / (2 * (pd + 1)) ? 1 : -1;
}

int rademacher_value(std::uint64_t seed, std::uint64_t p) {
  return (counter_hash(seed, p, 1) >> 63) ? 1 : -1;
}

int ModelSample::at_prime(std::uint64_t p) const { return prime_values[prime_index(*primes, p)]; }

int ModelSample::at(std::uint64_t n) const {
  if (n == 0) throw DomainError("ModelSample::at: n must be positive");
  if (n > limit) throw DomainError("ModelSample::at: n exceeds the sample limit");
  int v = 1;
  factor_with(*primes, n, [&](std::size_t i, unsigned k) {
    const int x = prime_values[i];
    v *= (k % 2 == 1) ? x : x * x;
  });
  return v;
}

int RademacherSample::at_prime(std::uint64_t p) const { return prime_values[prime_index(*primes, p)]; }

int RademacherSample::at(std::uint64_t n) const {
  if (n == 0) throw DomainError("RademacherSample::at: n must be positive");
  if (n > limit) throw DomainError("RademacherSample::at: n exceeds the sample limit");
  int v = 1;
  factor_with(*primes, n, [&](std::size_t i, unsigned k) { v *= k == 1 ? prime_values[i] : 0; });
  return v;
}

ModelSample sample_model(std::uint64_t seed, std::shared_ptr<const arith::PrimeTable> primes) {
  ModelSample s;
  s.seed = seed;
  s.limit = primes->limit();
  s.prime_values = draw_all(*primes, seed, model_value);
  s.primes = std::move(primes);
  return s;
}

ModelSample sample_model(std::uint64_t seed, std::uint64_t limit) {
  if (limit < 2) throw DomainError("sample_model: limit must be at least 2");
  return sample_model(seed, std::make_shared<const arith::PrimeTable>(limit));
}

RademacherSample sample_rademacher(std::uint64_t seed, std::shared_ptr<const arith::PrimeTable> primes) {
  RademacherSample s;
  s.seed = seed;
  s.limit = primes->limit();
  s.prime_values = draw_all(*primes, seed, rademacher_value);
  s.primes = std::move(primes);
  return s;
}

RademacherSample sample_rademacher(std::uint64_t seed, std::uint64_t limit) {
  if (limit < 2) throw DomainError("sample_rademacher: limit must be at least 2");
  return sample_rademacher(seed, std::make_shared<const arith::PrimeTable>(limit));
}

double window_value(const ModelSample& sample, double s, double u, double v) {
  check_window_args(u, v, sample.limit);
  const auto [first, last] = sample.primes->open_range(u, v);
  double sum = 0;
  for (std::size_t i = first; i < last; ++i) {
    const int x = sample.prime_values[i];
    if (x == 0) continue;
    const double lp = std::log(static_cast<double>((*sample.primes)[i]));
    sum += x * lp * std::exp(-s * lp);
  }
  return sum;
}

double window_value(std::uint64_t seed, const arith::PrimeTable& primes, double s, double u, double v) {
  check_window_args(u, v, primes.limit());
  const auto [first, last] = primes.open_range(u, v);
  double sum = 0;
  for (std::size_t i = first; i < last; ++i) {
    const auto p = primes[i];
    const int x = model_value(seed, p);
    if (x == 0) continue;
    const double lp = std::log(static_cast<double>(p));
    sum += x * lp * std::exp(-s * lp);
  }
  return sum;
}

double window_variance(const arith::PrimeTable& primes, double s, double u, double v) {
  const auto [first, last] = primes.open_range(u, v);
  double sum = 0;
  for (std::size_t i = first; i < last; ++i) {
    const double p = static_cast<double>(primes[i]);
    const double lp = std::log(p);
    sum += lp * lp * p * std::exp(-2 * s * lp) / (p + 1);
  }
  return sum;
}

std::vector<std::int64_t> rademacher_sums(const RademacherSample& sample, std::uint64_t x_max) {
  if (x_max < 1) throw DomainError("rademacher_sums: x_max must be positive");
  if (x_max > sample.limit) throw DomainError("rademacher_sums: x_max exceeds the sample limit");
  if (x_max > 0xffffffffull) throw ResourceError("rademacher_sums: x_max too large");
  const arith::FactorTable spf(static_cast<std::uint32_t>(x_max));
  std::vector<std::int8_t> f(x_max + 1, 0);
  f[1] = 1;
  const auto& primes = *sample.primes;
  for (std::size_t i = 0; i < primes.size() && primes[i] <= x_max; ++i) f[primes[i]] = sample.prime_values[i];
  for (std::uint32_t n = 4; n <= x_max; ++n) {
    const std::uint32_t p = spf.smallest_factor(n);
    if (p == n) continue;
    const std::uint32_t m = n / p;
    f[n] = spf.smallest_factor(m) == p ? 0 : static_cast<std::int8_t>(f[m] * f[p]);
  }
  std::vector<std::int64_t> sums(x_max);
  std::int64_t acc = 0;
  for (std::uint64_t n = 1; n <= x_max; ++n) {
    acc += f[n];
    sums[n - 1] = acc;
  }
  return sums;
}

character::SignChangeReport rademacher_partial_sums(const RademacherSample& sample, std::uint64_t x_max) {
  const auto sums = rademacher_sums(sample, x_max);
  return character::sign_changes(sums, character::SignVariant::deleted_zeros);
}

namespace {

std::uint64_t sminus_of(std::span<const int> z) {
  int last = 0;
  std::uint64_t c = 0;
  for (int v : z) {
    if (v == 0) continue;
    if (last != 0 && v != last) ++c;
    last = v;
  }
  return c;
}

void check_bamo(double delta, std::uint64_t R) {
  if (!(delta >= 0 && delta <= 0.5)) throw DomainError("bamo: delta must lie in [0, 1/2]");
  if (R < 5) throw DomainError("bamo: R must be at least 5");
}

}  // namespace

BamoResult bamo_check(double delta, std::uint64_t R, std::uint64_t trials, std::uint64_t seed) {
  check_bamo(delta, R);
  if (trials == 0) throw DomainError("bamo_check: trials must be positive");
  BamoResult res;
  res.delta = delta;
  res.R = R;
  res.trials = trials;
  res.threshold = delta * static_cast<double>(R) / 5;
  std::vector<std::uint8_t> hit(trials, 0);
#pragma omp parallel for schedule(static)
  for (std::int64_t t = 0; t < static_cast<std::int64_t>(trials); ++t) {
    const std::uint64_t ts = trial_seed(seed, static_cast<std::uint64_t>(t));
    std::vector<int> z(R);
    for (std::uint64_t j = 0; j < R; ++j) {
      const double u = counter_uniform(ts, kBamoStream, j);
      z[j] = u < delta ? 1 : (u < 2 * delta ? -1 : 0);
    }
    hit[t] = static_cast<double>(sminus_of(z)) <= res.threshold;
  }
  for (auto h : hit) res.hits += h;
  res.probability = static_cast<double>(res.hits) / static_cast<double>(trials);
  res.std_error = std::sqrt(res.probability * (1 - res.probability) / static_cast<double>(trials));
  return res;
}

double bamo_exact(double delta, std::uint64_t R) {
  check_bamo(delta, R);
  if (R > 12) throw CapabilityError("bamo_exact: enumeration limited to R <= 12");
  const double threshold = delta * static_cast<double>(R) / 5;
  std::uint64_t patterns = 1;
  for (std::uint64_t j = 0; j < R; ++j) patterns *= 3;
  std::vector<int> z(R);
  double total = 0;
  for (std::uint64_t code = 0; code < patterns; ++code) {
    std::uint64_t c = code;
    double prob = 1;
    for (std::uint64_t j = 0; j < R; ++j) {
      const int digit = static_cast<int>(c % 3);
      c /= 3;
      z[j] = digit - 1;
      prob *= digit == 1 ? 1 - 2 * delta : delta;
    }
    if (prob > 0 && static_cast<double>(sminus_of(z)) <= threshold) total += prob;
  }
  return total;
}

std::vector<SimWindow> paper_windows(double M, std::uint64_t R, std::uint64_t limit) {
  if (!(M >= 3)) throw DomainError("paper_windows: M must be at least 3");
  if (R < 2) throw DomainError("paper_windows: R must be at least 2");
  const double log_limit = std::log(static_cast<double>(limit));
  std::vector<SimWindow> out;
  for (std::uint64_t r = 1; r <= R; ++r) {
    const double e = 3.0 * static_cast<double>(r);
    SimWindow w;
    w.s = 0.5 + std::pow(M, -e);
    const double lu = std::pow(M, e - 1), lv = std::pow(M, e + 1);
    w.u = lu >= log_limit ? static_cast<double>(limit) : std::max(2.0, std::exp(lu));
    w.v = lv >= log_limit ? static_cast<double>(limit) : std::exp(lv);
    w.clipped = lu >= log_limit || lv >= log_limit;
    w.degenerate = !(w.u < w.v);
    out.push_back(w);
  }
  return out;
}

PointsSimulation sign_change_points_simulation(std::span<const SimWindow> windows, std::uint64_t trials,
                                               std::uint64_t seed, double kappa) {
  if (windows.empty()) throw DomainError("points simulation: no windows");
  if (trials < 2) throw DomainError("points simulation: need at least 2 trials");
  if (!(kappa > 0)) throw DomainError("points simulation: kappa must be positive");
  double top = 2;
  for (const auto& w : windows) {
    if (!w.degenerate && !(w.u >= 2 && w.u < w.v)) throw DomainError("points simulation: bad window");
    if (!w.degenerate) top = std::max(top, w.v);
  }
  const arith::PrimeTable primes(static_cast<std::uint64_t>(std::ceil(top)));
  const std::size_t W = windows.size();
  PointsSimulation out;
  out.kappa = kappa;
  out.trials = trials;
  std::vector<double> sigma(W, 0);
  for (std::size_t r = 0; r < W; ++r) {
    if (!windows[r].degenerate) sigma[r] = std::sqrt(window_variance(primes, windows[r].s, windows[r].u, windows[r].v));
  }
  // normalized values, trial-major
  std::vector<double> z(trials * W, 0.0);
#pragma omp parallel for schedule(static)
  for (std::int64_t t = 0; t < static_cast<std::int64_t>(trials); ++t) {
    const std::uint64_t ts = trial_seed(seed, static_cast<std::uint64_t>(t));
    for (std::size_t r = 0; r < W; ++r) {
      if (windows[r].degenerate || sigma[r] == 0) continue;
      z[t * W + r] = window_value(ts, primes, windows[r].s, windows[r].u, windows[r].v) / sigma[r];
    }
  }
  const double n = static_cast<double>(trials);
  out.windows.resize(W);
  std::vector<double> mean(W, 0), sd(W, 0);
  for (std::size_t r = 0; r < W; ++r) {
    auto& st = out.windows[r];
    st.window = windows[r];
    st.sigma = sigma[r];
    double m = 0, m2 = 0;
    std::uint64_t plus = 0, minus = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
      const double v = z[t * W + r];
      m += v;
      m2 += v * v;
      plus += v > kappa;
      minus += v < -kappa;
    }
    mean[r] = m / n;
    sd[r] = std::sqrt(std::max(0.0, m2 / n - mean[r] * mean[r]));
    st.empirical_sd = sd[r] * sigma[r];
    st.p_plus = static_cast<double>(plus) / n;
    st.p_minus = static_cast<double>(minus) / n;
    std::uint64_t above4 = 0;
    for (std::uint64_t t = 0; t < trials; ++t) above4 += std::abs(z[t * W + r]) > 4;
    st.p_abs_above4 = static_cast<double>(above4) / n;
  }
  std::vector<int> y(W);
  for (std::uint64_t t = 0; t < trials; ++t) {
    for (std::size_t r = 0; r < W; ++r) {
      const double v = z[t * W + r];
      y[r] = v > kappa ? 1 : (v < -kappa ? -1 : 0);
    }
    const auto c = sminus_of(y);
    if (out.sminus_histogram.size() <= c) out.sminus_histogram.resize(c + 1, 0);
    ++out.sminus_histogram[c];
  }
  double corr_sum = 0;
  int pairs = 0;
  for (std::size_t r = 0; r + 1 < W; ++r) {
    if (sd[r] == 0 || sd[r + 1] == 0) continue;
    double cov = 0;
    for (std::uint64_t t = 0; t < trials; ++t) cov += (z[t * W + r] - mean[r]) * (z[t * W + r + 1] - mean[r + 1]);
    corr_sum += cov / n / (sd[r] * sd[r + 1]);
    ++pairs;
  }
  if (pairs > 0) {
    out.lag1_correlation = corr_sum / pairs;
    out.lag1_correlation_se = 1.0 / std::sqrt(n * pairs);
  }
  return out;
}

}  // namespace feketelab::random_model
