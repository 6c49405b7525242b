#include "mgsizer/scenarios.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <string>

#include "mgsizer/csv.hpp"
#include "mgsizer/errors.hpp"
#include "mgsizer/rng.hpp"

namespace mgsizer {
namespace {

double squared_distance(const Profile& a, const Profile& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = a[i] - b[i];
    d += x * x;
  }
  return d;
}

std::size_t nearest(const Profile& x, const std::vector<Profile>& centroids, double* dist) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < centroids.size(); ++j) {
    const double d = squared_distance(x, centroids[j]);
    if (d < best_d) {
      best_d = d;
      best = j;
    }
  }
  if (dist) *dist = best_d;
  return best;
}

std::vector<Profile> seed_plus_plus(std::span<const Profile> samples, std::size_t k, Rng& rng) {
  const std::size_t n = samples.size();
  std::vector<Profile> centroids;
  centroids.reserve(k);
  std::vector<bool> chosen(n, false);
  const auto first = static_cast<std::size_t>(rng.below(n));
  centroids.push_back(samples[first]);
  chosen[first] = true;
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(samples[i], centroids[0]);
  while (centroids.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += chosen[i] ? 0.0 : d2[i];
    std::size_t pick = n;
    if (total > 0.0) {
      double r = rng.uniform() * total;
      for (std::size_t i = 0; i < n; ++i) {
        if (chosen[i] || d2[i] <= 0.0) continue;
        r -= d2[i];
        pick = i;
        if (r < 0.0) break;
      }
    }
    if (pick == n) {  // all remaining samples coincide with a centroid
      for (std::size_t i = 0; i < n; ++i)
        if (!chosen[i]) {
          pick = i;
          break;
        }
    }
    chosen[pick] = true;
    centroids.push_back(samples[pick]);
    for (std::size_t i = 0; i < n; ++i)
      d2[i] = std::min(d2[i], squared_distance(samples[i], centroids.back()));
  }
  return centroids;
}

TruncatedNormalDist tn(double mean, double sd, double lower, double upper) {
  return TruncatedNormalDist{mean, sd, lower, upper};
}

void validate_template(const std::vector<TruncatedNormalDist>& v, const char* name) {
  if (v.size() != kHoursPerDay)
    throw ConfigError(std::string("scenarios: ") + name + " needs 24 hourly entries");
  for (const auto& d : v) {
    if (!(d.mean >= 0.0) || !(d.sd >= 0.0) || !(d.lower <= d.upper))
      throw ConfigError(std::string("scenarios: ") + name +
                        " entries need mean >= 0, sd >= 0, lower <= upper");
  }
}

MarginalScenarios reduce(const std::vector<Profile>& samples, std::size_t k, std::uint64_t seed) {
  auto c = kmeans_reduce(samples, k, seed);
  return MarginalScenarios{std::move(c.centroids), std::move(c.probabilities)};
}

}  // namespace

double marginal_quantile(const MarginalSpec& spec, double u) {
  if (const auto* uni = std::get_if<UniformDist>(&spec)) {
    return uni->lower + u * (uni->upper - uni->lower);
  }
  const auto& d = std::get<TruncatedNormalDist>(spec);
  if (d.sd <= 0.0) return std::clamp(d.mean, d.lower, d.upper);
  const boost::math::normal_distribution<double> std_normal(0.0, 1.0);
  const double a = std::isfinite(d.lower) ? boost::math::cdf(std_normal, (d.lower - d.mean) / d.sd)
                                          : (d.lower > 0 ? 1.0 : 0.0);
  const double b = std::isfinite(d.upper) ? boost::math::cdf(std_normal, (d.upper - d.mean) / d.sd)
                                          : (d.upper > 0 ? 1.0 : 0.0);
  const double p = a + u * (b - a);
  if (p <= 0.0) return d.lower;
  if (p >= 1.0) return d.upper;
  const double x = d.mean + d.sd * boost::math::quantile(std_normal, p);
  return std::clamp(x, d.lower, d.upper);
}

std::vector<std::vector<double>> lhs_sample(std::span<const MarginalSpec> dims, std::size_t n,
                                            std::uint64_t seed) {
  if (n == 0) throw ConfigError("lhs_sample: n must be >= 1");
  Rng rng(seed);
  std::vector<std::vector<double>> out(n, std::vector<double>(dims.size()));
  std::vector<std::size_t> strata(n);
  for (std::size_t d = 0; d < dims.size(); ++d) {
    std::iota(strata.begin(), strata.end(), std::size_t{0});
    rng.shuffle(std::span<std::size_t>(strata));
    for (std::size_t i = 0; i < n; ++i) {
      const double u = (static_cast<double>(strata[i]) + rng.uniform()) / static_cast<double>(n);
      out[i][d] = marginal_quantile(dims[d], std::min(u, std::nextafter(1.0, 0.0)));
    }
  }
  return out;
}

Clustering kmeans_reduce(std::span<const Profile> samples, std::size_t k, std::uint64_t seed,
                         int max_iterations) {
  const std::size_t n = samples.size();
  if (n == 0) throw ConfigError("kmeans_reduce: no samples");
  if (k == 0 || k > n) throw ConfigError("kmeans_reduce: require 1 <= k <= sample count");
  Rng rng(seed);
  std::vector<Profile> centroids = seed_plus_plus(samples, k, rng);
  const std::size_t dim = samples[0].size();

  Clustering result;
  std::vector<std::size_t> assign(n, k);
  std::vector<double> dist(n);
  for (int it = 0; it < max_iterations; ++it) {
    bool changed = false;
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = nearest(samples[i], centroids, &dist[i]);
      if (j != assign[i]) {
        assign[i] = j;
        changed = true;
      }
      sse += dist[i];
    }
    result.sse_history.push_back(sse);
    result.iterations = it + 1;
    if (!changed) break;

    std::vector<Profile> sums(k, Profile(dim, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      ++counts[assign[i]];
      for (std::size_t h = 0; h < dim; ++h) sums[assign[i]][h] += samples[i][h];
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (counts[j] == 0) {
        // Empty cluster: move it onto the sample farthest from its centroid.
        std::size_t far = 0;
        for (std::size_t i = 1; i < n; ++i)
          if (dist[i] > dist[far]) far = i;
        centroids[j] = samples[far];
        dist[far] = 0.0;
        continue;
      }
      for (std::size_t h = 0; h < dim; ++h)
        centroids[j][h] = sums[j][h] / static_cast<double>(counts[j]);
    }
  }

  std::vector<std::size_t> counts(k, 0);
  for (std::size_t i = 0; i < n; ++i) ++counts[assign[i]];

  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> totals(k);
  for (std::size_t j = 0; j < k; ++j)
    totals[j] = std::accumulate(centroids[j].begin(), centroids[j].end(), 0.0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return totals[a] < totals[b]; });
  std::vector<std::size_t> remap(k);
  for (std::size_t r = 0; r < k; ++r) {
    remap[order[r]] = r;
    result.centroids.push_back(centroids[order[r]]);
    result.probabilities.push_back(static_cast<double>(counts[order[r]]) /
                                   static_cast<double>(n));
  }
  result.assignment.resize(n);
  for (std::size_t i = 0; i < n; ++i) result.assignment[i] = remap[assign[i]];
  return result;
}

double ScenarioSet::probability_sum() const {
  double s = 0.0;
  for (const auto& sc : scenarios) s += sc.probability;
  return s;
}

void ScenarioSet::validate() const {
  if (scenarios.empty()) throw ConfigError("scenario set is empty");
  const std::size_t h = horizon();
  if (h == 0) throw ConfigError("scenario profiles are empty");
  for (const auto& sc : scenarios) {
    if (sc.wt.size() != h || sc.pv.size() != h || sc.load.size() != h)
      throw ConfigError("scenario profiles must share one horizon length");
    if (!(sc.probability > 0.0 && sc.probability <= 1.0))
      throw ConfigError("scenario probability must lie in (0, 1]");
    for (const Profile* p : {&sc.wt, &sc.pv, &sc.load})
      for (double v : *p)
        if (!(v >= 0.0) || !std::isfinite(v))
          throw ConfigError("scenario profile values must be finite and >= 0");
  }
  if (std::abs(probability_sum() - 1.0) > 1e-9)
    throw ConfigError("scenario probabilities must sum to 1");
}

ScenarioSet build_scenario_set(const MarginalScenarios& wt, const MarginalScenarios& pv,
                               const MarginalScenarios& load) {
  ScenarioSet set;
  for (std::size_t a = 0; a < wt.profiles.size(); ++a)
    for (std::size_t b = 0; b < pv.profiles.size(); ++b)
      for (std::size_t c = 0; c < load.profiles.size(); ++c)
        set.scenarios.push_back(Scenario{wt.profiles[a], pv.profiles[b], load.profiles[c],
                                         wt.probabilities[a] * pv.probabilities[b] *
                                             load.probabilities[c]});
  return set;
}

ScenarioSet subsample(const ScenarioSet& set, std::size_t m, std::uint64_t seed) {
  if (m == 0 || m > set.size()) throw ConfigError("subsample: require 1 <= m <= set size");
  std::vector<std::size_t> idx(set.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(seed);
  // Partial Fisher-Yates: the first m slots are a uniform draw.
  for (std::size_t i = 0; i < m; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(set.size() - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(m);
  std::sort(idx.begin(), idx.end());
  ScenarioSet out;
  out.seed = seed;
  double total = 0.0;
  for (auto i : idx) total += set.scenarios[i].probability;
  for (auto i : idx) {
    out.scenarios.push_back(set.scenarios[i]);
    out.scenarios.back().probability /= total;
  }
  return out;
}

ScenarioPipelineSettings ScenarioPipelineSettings::defaults() {
  constexpr double inf = std::numeric_limits<double>::infinity();
  constexpr double pi = std::numbers::pi;
  ScenarioPipelineSettings s;
  for (std::size_t h = 0; h < kHoursPerDay; ++h) {
    const double x = static_cast<double>(h);
    // Wind: mild diurnal swing, windier in the small hours.
    s.wind_speed.push_back(tn(7.5 + 1.5 * std::cos(2.0 * pi * (x - 3.0) / 24.0), 2.5, 0.0, 30.0));
    // Irradiance: half-sine over 06:00-18:00, dark otherwise.
    const double g = (x > 6.0 && x < 18.0) ? 0.9 * std::sin(pi * (x - 6.0) / 12.0) : 0.0;
    s.irradiance.push_back(tn(g, 0.25 * g, 0.0, 1.2));
    s.temperature.push_back(tn(290.0 + 5.0 * std::sin(2.0 * pi * (x - 9.0) / 24.0), 2.0, 250.0, 330.0));
    // Load: morning and evening peaks over a base level.
    const double l = 2000.0 + 1000.0 * std::exp(-std::pow((x - 8.0) / 2.0, 2)) +
                     1400.0 * std::exp(-std::pow((x - 19.0) / 2.5, 2));
    s.load.push_back(tn(l, 0.1 * l, 0.0, inf));
  }
  return s;
}

void ScenarioPipelineSettings::validate() const {
  if (samples == 0) throw ConfigError("scenarios: samples must be >= 1");
  if (clusters == 0 || clusters > samples)
    throw ConfigError("scenarios: require 1 <= clusters <= samples");
  validate_template(wind_speed, "wind_speed");
  validate_template(irradiance, "irradiance");
  validate_template(temperature, "temperature");
  validate_template(load, "load");
}

ScenarioPipelineOutput generate_scenarios(const ScenarioPipelineSettings& s, const WtParams& wt,
                                          const PvParams& pv, std::uint64_t seed) {
  s.validate();
  const std::size_t H = kHoursPerDay;

  std::vector<MarginalSpec> wind_dims(s.wind_speed.begin(), s.wind_speed.end());
  const auto wind = lhs_sample(wind_dims, s.samples, derive_seed(seed, 1));
  std::vector<Profile> wt_samples(s.samples, Profile(H));
  for (std::size_t i = 0; i < s.samples; ++i)
    for (std::size_t h = 0; h < H; ++h) wt_samples[i][h] = wt_power(wind[i][h], wt);

  std::vector<MarginalSpec> pv_dims(s.irradiance.begin(), s.irradiance.end());
  pv_dims.insert(pv_dims.end(), s.temperature.begin(), s.temperature.end());
  const auto weather = lhs_sample(pv_dims, s.samples, derive_seed(seed, 2));
  std::vector<Profile> pv_samples(s.samples, Profile(H));
  for (std::size_t i = 0; i < s.samples; ++i)
    for (std::size_t h = 0; h < H; ++h)
      pv_samples[i][h] = pv_power(weather[i][h], weather[i][H + h], pv);

  std::vector<MarginalSpec> load_dims(s.load.begin(), s.load.end());
  const auto load_samples = lhs_sample(load_dims, s.samples, derive_seed(seed, 3));

  ScenarioPipelineOutput out;
  out.wt = reduce(wt_samples, s.clusters, derive_seed(seed, 4));
  out.pv = reduce(pv_samples, s.clusters, derive_seed(seed, 5));
  out.load = reduce(load_samples, s.clusters, derive_seed(seed, 6));
  out.full = build_scenario_set(out.wt, out.pv, out.load);
  out.full.seed = seed;
  return out;
}

void write_scenarios_csv(std::ostream& out, const ScenarioSet& set) {
  const std::size_t H = set.horizon();
  auto header = [&](const char* prefix) {
    for (std::size_t h = 0; h < H; ++h) {
      out << prefix << (h < 10 ? "0" : "") << h << ',';
    }
  };
  header("wt_");
  header("pv_");
  header("load_");
  out << "probability\n";
  for (const auto& sc : set.scenarios) {
    for (const Profile* p : {&sc.wt, &sc.pv, &sc.load})
      for (double v : *p) out << csv::format(v) << ',';
    out << csv::format(sc.probability) << '\n';
  }
}

ScenarioSet read_scenarios_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("scenario csv: missing header");
  const auto cols = csv::split(line);
  if (cols.empty() || cols.back() != "probability" || (cols.size() - 1) % 3 != 0)
    throw ConfigError("scenario csv: header must be 3*H profile columns then probability");
  const std::size_t H = (cols.size() - 1) / 3;
  for (std::size_t h = 0; h < H; ++h) {
    if (cols[h].rfind("wt_", 0) != 0 || cols[H + h].rfind("pv_", 0) != 0 ||
        cols[2 * H + h].rfind("load_", 0) != 0)
      throw ConfigError("scenario csv: unexpected column order in header");
  }
  ScenarioSet set;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto f = csv::split(line);
    if (f.size() != cols.size()) throw ConfigError("scenario csv: ragged row");
    Scenario sc;
    try {
      for (std::size_t h = 0; h < H; ++h) {
        sc.wt.push_back(csv::parse_double(f[h]));
        sc.pv.push_back(csv::parse_double(f[H + h]));
        sc.load.push_back(csv::parse_double(f[2 * H + h]));
      }
      sc.probability = csv::parse_double(f.back());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("scenario csv: ") + e.what());
    }
    set.scenarios.push_back(std::move(sc));
  }
  set.validate();
  return set;
}

}  // namespace mgsizer
