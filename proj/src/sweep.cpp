#include "relaycast/sweep.hpp"

#include <exception>

#include "relaycast/errors.hpp"
#include "relaycast/kernels.hpp"
#include "relaycast/rng.hpp"

namespace relaycast {

std::uint64_t sweep_seed(std::uint64_t base_seed, std::size_t point_id, std::size_t seeds,
                         std::size_t replicate) {
  return base_seed ^ mix64(static_cast<std::uint64_t>(point_id) * seeds + replicate);
}

SweepSpec parse_sweep_spec(const json& doc) {
  if (!doc.is_object()) throw ConfigError("sweep spec must be a JSON object");
  SweepSpec spec;
  for (const auto& item : doc.items()) {
    const std::string& key = item.key();
    if (key != "base" && key != "axes" && key != "seeds" && key != "cap") {
      throw ConfigError("unknown sweep key '" + key + "'");
    }
  }
  if (!doc.contains("base")) throw ConfigError("sweep spec needs a 'base' run config");
  spec.base = doc.at("base");
  parse_run_config(spec.base);  // fail early on a bad template
  if (doc.contains("axes")) {
    if (!doc.at("axes").is_array()) throw ConfigError("sweep axes must be an array");
    for (const auto& a : doc.at("axes")) {
      if (!a.is_object() || !a.contains("path") || !a.contains("values") || a.size() != 2 ||
          !a.at("path").is_string() || !a.at("values").is_array() || a.at("values").empty()) {
        throw ConfigError("each sweep axis is {\"path\": string, \"values\": non-empty array}");
      }
      spec.axes.push_back({a.at("path").get<std::string>(), a.at("values").get<std::vector<json>>()});
    }
  }
  if (doc.contains("seeds")) {
    if (!doc.at("seeds").is_number_integer() || doc.at("seeds").get<std::int64_t>() <= 0) {
      throw ConfigError("sweep seeds must be a positive integer");
    }
    spec.seeds = doc.at("seeds").get<std::size_t>();
  }
  if (doc.contains("cap")) {
    if (!doc.at("cap").is_number_integer() || doc.at("cap").get<std::int64_t>() < 0) throw ConfigError("sweep cap must be a non-negative integer");
    spec.cap = doc.at("cap").get<std::size_t>();
  }
  return spec;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, RunCache* cache) {
  std::size_t points = 1;
  for (const auto& a : spec.axes) {
    if (a.values.empty()) throw ConfigError("sweep axis '" + a.path + "' has no values");
    points *= a.values.size();
    if (points > spec.cap) throw ConfigError("sweep grid exceeds the cap of " + std::to_string(spec.cap));
  }
  if (spec.seeds == 0) throw ConfigError("sweep needs at least one seed");
  if (points * spec.seeds > spec.cap) {
    throw ConfigError("sweep has " + std::to_string(points) + " points x " + std::to_string(spec.seeds) +
                      " seeds, above the cap of " + std::to_string(spec.cap));
  }
  const std::uint64_t base_seed =
      spec.base.contains("system") && spec.base.at("system").contains("seed")
          ? spec.base.at("system").at("seed").get<std::uint64_t>()
          : 0;

  // Materialize every run's config serially, then execute in parallel.
  const std::size_t total = points * spec.seeds;
  std::vector<SweepRow> rows(total);
  std::vector<json> docs(total);
  for (std::size_t p = 0; p < points; ++p) {
    json doc = spec.base;
    std::vector<json> values;
    std::size_t rest = p;
    std::vector<std::size_t> idx(spec.axes.size());
    for (std::size_t a = spec.axes.size(); a-- > 0;) {
      idx[a] = rest % spec.axes[a].values.size();
      rest /= spec.axes[a].values.size();
    }
    for (std::size_t a = 0; a < spec.axes.size(); ++a) {
      values.push_back(spec.axes[a].values[idx[a]]);
      set_path(doc, spec.axes[a].path, values.back());
    }
    for (std::size_t r = 0; r < spec.seeds; ++r) {
      const std::size_t run_id = p * spec.seeds + r;
      SweepRow& row = rows[run_id];
      row.point_id = p;
      row.replicate = r;
      row.seed = sweep_seed(base_seed, p, spec.seeds, r);
      row.values = values;
      docs[run_id] = doc;
      set_path(docs[run_id], "system.seed", row.seed);
    }
  }

  RunCache local;
  RunCache* shared = cache ? cache : &local;
  const auto n_runs = static_cast<std::int64_t>(total);
#pragma omp parallel for schedule(dynamic, 1) num_threads(worker_count())
  for (std::int64_t k = 0; k < n_runs; ++k) {
    SweepRow& row = rows[static_cast<std::size_t>(k)];
    try {
      const RunResult res = execute(parse_run_config(docs[static_cast<std::size_t>(k)]), shared);
      row.report = res.report;
      row.passed = res.passed();
    } catch (const std::exception& e) {
      row.error = e.what();
      row.passed = false;
    }
  }
  return rows;
}

std::string sweep_csv(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  auto cell = [](const json& v) {
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    if (s.find_first_of(",\"\n") != std::string::npos) {
      std::string q = "\"";
      for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
      }
      return q + "\"";
    }
    return s;
  };
  std::string out = "point_id,seed";
  for (const auto& a : spec.axes) out += "," + a.path;
  out += ",heaviside,dirac,unforgeability,poor_fraction,measured_kH,measured_kdelta,passed,error\n";
  for (const SweepRow& row : rows) {
    out += std::to_string(row.point_id) + "," + std::to_string(row.seed);
    for (const json& v : row.values) out += "," + cell(v);
    const PropertyReport& r = row.report;
    if (row.error.empty()) {
      out += "," + (to_string(r.heaviside_branch) + ":" + (r.heaviside_pass ? "pass" : "fail"));
      out += std::string(",") + (r.dirac_pass ? "pass" : "fail");
      out += std::string(",") + (r.unforgeability_pass ? "pass" : "fail");
      out += "," + format_double(r.poor_fraction);
      out += "," + (r.measured_kH ? std::to_string(*r.measured_kH) : std::string());
      out += "," + std::to_string(r.measured_kdelta);
      out += std::string(",") + (row.passed ? "1" : "0") + ",\n";
    } else {
      out += ",,,,,,,0," + cell(json(row.error)) + "\n";
    }
  }
  return out;
}

}  // namespace relaycast
