#include "mgsizer/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <type_traits>

#include "mgsizer/errors.hpp"

namespace mgsizer {
namespace {

using nlohmann::json;

// One visitor drives both directions so the reader and the echo can never
// disagree about key names.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  template <class T>
  void operator()(const char* key, T& value) {
    seen_.insert(key);
    if (auto it = j_.find(key); it != j_.end()) read(*it, value, path_ + "." + key);
  }
  template <class F>
  void block(const char* key, F&& fn) {
    seen_.insert(key);
    if (auto it = j_.find(key); it != j_.end()) {
      Reader sub(*it, path_ + "." + key);
      fn(sub);
      sub.finish();
    }
  }
  // Declares a key handled by the caller through raw().
  void mark(const char* key) { seen_.insert(key); }
  // Rejects keys nobody asked for.
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(path_ + ": unknown key '" + it.key() + "'");
  }
  const json& raw() const { return j_; }
  const std::string& path() const { return path_; }

 private:
  static void read(const json& v, double& out, const std::string& where) {
    if (v.is_null()) {  // null spells +inf (uncapped limits)
      out = std::numeric_limits<double>::infinity();
      return;
    }
    if (!v.is_number()) throw ConfigError(where + ": expected a number");
    out = v.get<double>();
  }
  static void read(const json& v, int& out, const std::string& where) {
    if (!v.is_number_integer()) throw ConfigError(where + ": expected an integer");
    out = v.get<int>();
  }
  static void read(const json& v, std::uint64_t& out, const std::string& where) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
      throw ConfigError(where + ": expected a non-negative integer");
    out = v.get<std::uint64_t>();
  }
  static_assert(std::is_same_v<std::size_t, std::uint64_t>, "size_t fields read as uint64");
  static void read(const json& v, unsigned& out, const std::string& where) {
    std::uint64_t tmp = 0;
    read(v, tmp, where);
    out = static_cast<unsigned>(tmp);
  }
  static void read(const json& v, std::string& out, const std::string& where) {
    if (!v.is_string()) throw ConfigError(where + ": expected a string");
    out = v.get<std::string>();
  }
  template <class T>
  static void read(const json& v, std::vector<T>& out, const std::string& where) {
    if (!v.is_array()) throw ConfigError(where + ": expected an array");
    out.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      T item{};
      read(v[i], item, where + "[" + std::to_string(i) + "]");
      out.push_back(item);
    }
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

class Writer {
 public:
  template <class T>
  void operator()(const char* key, const T& value) {
    j_[key] = write(value);
  }
  template <class F>
  void block(const char* key, F&& fn) {
    Writer sub;
    fn(sub);
    j_[key] = std::move(sub.j_);
  }
  json take() { return std::move(j_); }

 private:
  static json write(double v) { return std::isinf(v) && v > 0 ? json(nullptr) : json(v); }
  template <class T>
  static json write(const T& v) {
    return json(v);
  }

  json j_ = json::object();
};

template <class Io, class P>
void wt_fields(Io& io, P& p) {
  io("v_cut_in", p.v_cut_in);
  io("v_cut_out", p.v_cut_out);
  io("v_rated", p.v_rated);
  io("p_rated", p.p_rated);
  io("unit_cost", p.unit_cost);
  io("om_cost_per_hour", p.om_cost_per_hour);
}

template <class Io, class P>
void pv_fields(Io& io, P& p) {
  io("p_rated", p.p_rated);
  io("g_stc", p.g_stc);
  io("t_stc", p.t_stc);
  io("k_p", p.k_p);
  io("unit_cost", p.unit_cost);
  io("om_cost_per_hour", p.om_cost_per_hour);
}

template <class Io, class P>
void dg_fields(Io& io, P& p) {
  io("p_rated", p.p_rated);
  io("p_min", p.p_min);
  io("ramp_up", p.ramp_up);
  io("ramp_down", p.ramp_down);
  io("startup_ramp", p.startup_ramp);
  io("shutdown_ramp", p.shutdown_ramp);
  io("unit_cost", p.unit_cost);
  io("om_cost_per_hour", p.om_cost_per_hour);
  io("fuel_rate", p.fuel_rate);
  io("co2_rate", p.co2_rate);
  io("diesel_price", p.diesel_price);
}

template <class Io, class P>
void bess_fields(Io& io, P& p) {
  io("e_nominal", p.e_nominal);
  io("e_min", p.e_min);
  io("p_ch_max", p.p_ch_max);
  io("p_dc_max", p.p_dc_max);
  io("eta_ch", p.eta_ch);
  io("eta_dc", p.eta_dc);
  io("voltage", p.voltage);
  io("unit_cost", p.unit_cost);
  io("kappa", p.kappa);
  io("e_a", p.e_a);
  io("gas_const", p.gas_const);
  io("z_exp", p.z_exp);
  io("q_max_loss", p.q_max_loss);
  io("temp_env", p.temp_env);
  io("initial_fraction", p.initial_fraction);
}

template <class Io, class P>
void bounds_fields(Io& io, P& b) {
  io("max_wt", b.max_wt);
  io("max_pv", b.max_pv);
  io("max_dg", b.max_dg);
  io("max_es", b.max_es);
  io("lpsp_max", b.lpsp_max);
}

template <class Io, class P>
void ga_fields(Io& io, P& g) {
  io("pop_size", g.pop_size);
  io("max_iter", g.max_iter);
  io("p_c0", g.p_c0);
  io("p_m0", g.p_m0);
  io("alpha", g.alpha);
  io("beta", g.beta);
  io("groups", g.groups);
  io("elite_fraction", g.elite_fraction);
  io("penalty_factor", g.penalty_factor);
  io("threads", g.threads);
}

std::string_view lps_name(LpsBasis b) { return b == LpsBasis::local ? "local" : "delivered"; }

LpsBasis parse_lps(const std::string& s) {
  if (s == "local") return LpsBasis::local;
  if (s == "delivered") return LpsBasis::delivered;
  throw ConfigError("grid.lps_basis: expected 'local' or 'delivered', got '" + s + "'");
}

std::string_view group_fitness_name(GroupFitness g) {
  switch (g) {
    case GroupFitness::sum: return "sum";
    case GroupFitness::max: return "max";
    case GroupFitness::mean: break;
  }
  return "mean";
}

GroupFitness parse_group_fitness(const std::string& s) {
  if (s == "mean") return GroupFitness::mean;
  if (s == "sum") return GroupFitness::sum;
  if (s == "max") return GroupFitness::max;
  throw ConfigError("ga.group_fitness: expected 'mean', 'sum' or 'max', got '" + s + "'");
}

// Prices: a number (flat), an array of hourly prices, or one such array per
// scenario.
std::vector<std::vector<double>> read_prices(const json& v, const std::string& where) {
  auto row = [&](const json& r, const std::string& w) {
    if (r.is_number()) return std::vector<double>{r.get<double>()};
    std::vector<double> out;
    if (!r.is_array() || r.empty()) throw ConfigError(w + ": expected a number or an array");
    for (const auto& x : r) {
      if (!x.is_number()) throw ConfigError(w + ": prices must be numbers");
      out.push_back(x.get<double>());
    }
    return out;
  };
  if (v.is_array() && !v.empty() && v.front().is_array()) {
    std::vector<std::vector<double>> table;
    for (std::size_t i = 0; i < v.size(); ++i)
      table.push_back(row(v[i], where + "[" + std::to_string(i) + "]"));
    return table;
  }
  return {row(v, where)};
}

json write_prices(const std::vector<std::vector<double>>& t) {
  if (t.size() == 1) return t.front().size() == 1 ? json(t.front().front()) : json(t.front());
  return json(t);
}

json write_template(const std::vector<TruncatedNormalDist>& hours) {
  json arr = json::array();
  for (const auto& d : hours) {
    Writer w;
    w("mean", d.mean);
    w("sd", d.sd);
    w("lower", d.lower);
    w("upper", d.upper);
    arr.push_back(w.take());
  }
  return arr;
}

std::vector<TruncatedNormalDist> read_template(const json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError(where + ": expected an array of hourly distributions");
  std::vector<TruncatedNormalDist> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    TruncatedNormalDist d;
    Reader r(v[i], where + "[" + std::to_string(i) + "]");
    r("mean", d.mean);
    r("sd", d.sd);
    r("lower", d.lower);
    r("upper", d.upper);
    r.finish();
    out.push_back(d);
  }
  return out;
}

const char* const kTemplateKeys[] = {"wind_speed", "irradiance", "temperature", "load"};

template <class P>
auto& template_ref(P& p, int i) {
  switch (i) {
    case 0: return p.wind_speed;
    case 1: return p.irradiance;
    case 2: return p.temperature;
    default: return p.load;
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  if (schema_version != kSchemaVersion)
    throw ConfigError("schema_version: expected " + std::to_string(kSchemaVersion) + ", got " +
                      std::to_string(schema_version));
  model.validate();
  ga.validate();
  scenarios.pipeline.validate();
  GenomeLayout::for_bounds(model.bounds);
  if (scenarios.subsample_sizes.empty())
    throw ConfigError("scenarios.subsample_sizes: need at least one size");
  for (std::size_t m : scenarios.subsample_sizes)
    if (m == 0) throw ConfigError("scenarios.subsample_sizes: sizes must be >= 1");
  if (repetitions < 1) throw ConfigError("compare.repetitions must be >= 1");
  if (!(metrics.worst.cost_star > 0.0) || !(metrics.worst.pec_star > 0.0))
    throw ConfigError("metrics: worst-case point must be positive");
  if (!(metrics.cost_gap > 0.0) || !(metrics.pec_gap > 0.0))
    throw ConfigError("metrics: diverse-count gaps must be positive");
  // Tariff rows: per-scenario shapes are checked against the set in use.
  const std::size_t rows = std::max(model.tariff.buy.size(), model.tariff.sell.size());
  model.tariff.validate(rows, kHoursPerDay);
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  Reader root(j, "config");
  root("schema_version", c.schema_version);
  root("seed", c.seed);
  root("output_dir", c.output_dir);
  root.block("devices", [&](Reader& d) {
    d.block("wt", [&](Reader& r) { wt_fields(r, c.model.system.wt); });
    d.block("pv", [&](Reader& r) { pv_fields(r, c.model.system.pv); });
    d.block("dg", [&](Reader& r) { dg_fields(r, c.model.system.dg); });
    d.block("bess", [&](Reader& r) { bess_fields(r, c.model.system.bess); });
  });
  root.block("bounds", [&](Reader& r) { bounds_fields(r, c.model.bounds); });
  root.block("grid", [&](Reader& r) {
    r("import_cap", c.model.system.grid.import_cap);
    r("export_cap", c.model.system.grid.export_cap);
    std::string basis(lps_name(c.model.system.grid.lps_basis));
    r("lps_basis", basis);
    c.model.system.grid.lps_basis = parse_lps(basis);
  });
  root.block("tariff", [&](Reader& r) {
    r.mark("buy");
    r.mark("sell");
    if (auto it = r.raw().find("buy"); it != r.raw().end())
      c.model.tariff.buy = read_prices(*it, r.path() + ".buy");
    if (auto it = r.raw().find("sell"); it != r.raw().end())
      c.model.tariff.sell = read_prices(*it, r.path() + ".sell");
  });
  root.block("objectives", [&](Reader& r) {
    r("dt", c.model.system.dt);
    r("periods_per_year", c.model.periods_per_year);
    r("dg_violation_weight", c.model.dg_violation_weight);
  });
  root.block("ga", [&](Reader& r) {
    ga_fields(r, c.ga);
    std::string gf(group_fitness_name(c.ga.group_fitness));
    r("group_fitness", gf);
    c.ga.group_fitness = parse_group_fitness(gf);
    std::string algo(to_string(c.algorithm));
    r("algorithm", algo);
    c.algorithm = parse_algorithm(algo);
  });
  root.block("scenarios", [&](Reader& r) {
    r("samples", c.scenarios.pipeline.samples);
    r("clusters", c.scenarios.pipeline.clusters);
    r("subsample_sizes", c.scenarios.subsample_sizes);
    r("active", c.scenarios.active);
    r("file", c.scenarios.file);
    r.block("templates", [&](Reader& t) {
      for (int i = 0; i < 4; ++i) {
        t.mark(kTemplateKeys[i]);
        if (auto it = t.raw().find(kTemplateKeys[i]); it != t.raw().end())
          template_ref(c.scenarios.pipeline, i) =
              read_template(*it, t.path() + "." + kTemplateKeys[i]);
      }
    });
  });
  root.block("metrics", [&](Reader& r) {
    r("worst_cost", c.metrics.worst.cost_star);
    r("worst_pec", c.metrics.worst.pec_star);
    r("cost_gap", c.metrics.cost_gap);
    r("pec_gap", c.metrics.pec_gap);
  });
  root.block("compare", [&](Reader& r) { r("repetitions", c.repetitions); });
  root.finish();

  c.ga.reference = c.metrics.worst;
  c.ga.seed = c.seed;
  c.validate();
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  Writer root;
  auto& m = c.model;
  root("schema_version", c.schema_version);
  root("seed", c.seed);
  root("output_dir", c.output_dir);
  root.block("devices", [&](Writer& d) {
    d.block("wt", [&](Writer& w) { wt_fields(w, m.system.wt); });
    d.block("pv", [&](Writer& w) { pv_fields(w, m.system.pv); });
    d.block("dg", [&](Writer& w) { dg_fields(w, m.system.dg); });
    d.block("bess", [&](Writer& w) { bess_fields(w, m.system.bess); });
  });
  root.block("bounds", [&](Writer& w) { bounds_fields(w, m.bounds); });
  root.block("grid", [&](Writer& w) {
    w("import_cap", m.system.grid.import_cap);
    w("export_cap", m.system.grid.export_cap);
    w("lps_basis", std::string(lps_name(m.system.grid.lps_basis)));
  });
  json tariff = json::object();
  tariff["buy"] = write_prices(m.tariff.buy);
  tariff["sell"] = write_prices(m.tariff.sell);
  root("tariff", tariff);
  root.block("objectives", [&](Writer& w) {
    w("dt", m.system.dt);
    w("periods_per_year", m.periods_per_year);
    w("dg_violation_weight", m.dg_violation_weight);
  });
  root.block("ga", [&](Writer& w) {
    ga_fields(w, c.ga);
    w("group_fitness", std::string(group_fitness_name(c.ga.group_fitness)));
    w("algorithm", std::string(to_string(c.algorithm)));
  });
  json sc = json::object();
  sc["samples"] = c.scenarios.pipeline.samples;
  sc["clusters"] = c.scenarios.pipeline.clusters;
  sc["subsample_sizes"] = c.scenarios.subsample_sizes;
  sc["active"] = c.scenarios.active;
  sc["file"] = c.scenarios.file;
  json templates = json::object();
  for (int i = 0; i < 4; ++i)
    templates[kTemplateKeys[i]] =
        write_template(template_ref(c.scenarios.pipeline, i));
  sc["templates"] = std::move(templates);
  root("scenarios", sc);
  root.block("metrics", [&](Writer& w) {
    w("worst_cost", c.metrics.worst.cost_star);
    w("worst_pec", c.metrics.worst.pec_star);
    w("cost_gap", c.metrics.cost_gap);
    w("pec_gap", c.metrics.pec_gap);
  });
  root.block("compare", [&](Writer& w) { w("repetitions", c.repetitions); });
  return root.take();
}

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what());
  }
  return config_from_json(j);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace mgsizer
