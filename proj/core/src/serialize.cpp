#include "tcpp/serialize.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "json_detail.hpp"
#include "tcpp/error.hpp"

namespace tcpp::io {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  char* ptr = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17).ptr;
  return std::string(buf, ptr);
}

void write_pmf_csv(std::ostream& out, const PmfTable& table) {
  out << "k,value,stderr\n";
  for (int k = 0; k <= table.kmax; ++k) {
    out << k << ',' << format_double(table.values[k]) << ',';
    if (!table.stderrs.empty()) out << format_double(table.stderrs[k]);
    out << '\n';
  }
}

std::string pmf_json(const PmfTable& table, const PmfOptions& opts) {
  json j{{"spec", detail::spec_json(table.spec)},
         {"t", table.t},
         {"lambda", table.lambda},
         {"method", table.method},
         {"kmax", table.kmax},
         {"tail_bound", table.tail_bound},
         {"total", table.total()},
         {"values", table.values}};
  if (table.method == "mc") {
    j["stderr"] = table.stderrs;
    j["seed"] = table.seed;
    j["count"] = table.count;
  } else {
    j["tolerances"] = {{"refine_tol", opts.refine_tol},
                       {"tail_tol", opts.tail_tol},
                       {"kmax_cap", opts.kmax_cap},
                       {"mixing_step", opts.mixing.step},
                       {"prune", opts.mixing.prune}};
  }
  return j.dump(2);
}

namespace {

json levels_json(const std::vector<verify::LevelResidual>& levels) {
  json a = json::array();
  for (const auto& l : levels) {
    a.push_back({{"h", l.h}, {"max_residual", l.max_residual}, {"l2_residual", l.l2_residual}});
  }
  return a;
}

const json& member(const json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("campaign: missing '") + key + "'");
  return j.at(key);
}

double number(const json& j, const char* key) {
  const json& v = member(j, key);
  if (!v.is_number()) throw InputError(std::string("campaign: '") + key + "' must be a number");
  return v.get<double>();
}

int integer(const json& j, const char* key) {
  const json& v = member(j, key);
  if (!v.is_number_integer()) {
    throw InputError(std::string("campaign: '") + key + "' must be an integer");
  }
  return v.get<int>();
}

void only_keys(const json& j, std::initializer_list<const char*> keys, const char* what) {
  for (const auto& [k, v] : j.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) throw InputError(std::string("campaign: unknown key '") + k + "' in " + what);
  }
}

}  // namespace

std::string report_json(const verify::ResidualReport& r) {
  json j{{"equation_id", r.variant},
         {"form", r.form},
         {"params", r.params},
         {"grid",
          {{"t_min", r.grid.t_min},
           {"t_max", r.grid.t_max},
           {"points", r.grid.points},
           {"refinement_levels", r.grid.refinement_levels}}},
         {"k_range", r.k_range},
         {"levels", levels_json(r.levels)},
         {"scale", r.scale},
         {"estimated_order", r.estimated_order},
         {"expected_band", {r.band_lo, r.band_hi}},
         {"pass", r.pass},
         {"floor_limited", r.floor_limited}};
  if (r.alternative_form) {
    j["alternative"] = {{"form", *r.alternative_form},
                        {"levels", levels_json(r.alternative_levels)}};
  }
  return j.dump(2);
}

Campaign parse_campaign(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("campaign: ") + e.what());
  }
  Campaign campaign;
  const json* list = &root;
  if (root.is_object()) {
    only_keys(root, {"requests", "out_dir"}, "campaign");
    list = &member(root, "requests");
    if (root.contains("out_dir")) {
      if (!root.at("out_dir").is_string()) throw InputError("campaign: 'out_dir' must be a string");
      campaign.out_dir = root.at("out_dir").get<std::string>();
    }
  }
  if (!list->is_array()) throw InputError("campaign: expected a JSON array of requests");
  if (list->empty()) throw InputError("campaign: no requests");
  std::vector<VerifyRequest>& out = campaign.requests;
  for (const auto& item : *list) {
    if (!item.is_object()) throw InputError("campaign: every request must be an object");
    only_keys(item, {"equation_id", "params", "grid", "k_range"}, "request");
    const json& id = member(item, "equation_id");
    if (!id.is_string()) throw InputError("campaign: 'equation_id' must be a string");
    VerifyRequest req;
    req.equation_id = id.get<std::string>();
    const auto parsed = verify::parse_equation_id(req.equation_id);
    req.grid = verify::equation_info(parsed.first).grid;
    if (item.contains("params")) {
      const json& p = item.at("params");
      if (!p.is_object()) throw InputError("campaign: 'params' must be an object");
      for (const auto& [k, v] : p.items()) {
        if (!v.is_number()) throw InputError("campaign: parameter '" + k + "' must be a number");
        req.params[k] = v.get<double>();
      }
    }
    if (item.contains("grid")) {
      const json& g = item.at("grid");
      if (!g.is_object()) throw InputError("campaign: 'grid' must be an object");
      only_keys(g, {"t_min", "t_max", "points", "refinement_levels"}, "grid");
      if (g.contains("t_min")) req.grid.t_min = number(g, "t_min");
      if (g.contains("t_max")) req.grid.t_max = number(g, "t_max");
      if (g.contains("points")) req.grid.points = integer(g, "points");
      if (g.contains("refinement_levels")) {
        req.grid.refinement_levels = integer(g, "refinement_levels");
      }
    }
    if (item.contains("k_range")) {
      const json& k = item.at("k_range");
      if (!k.is_array()) throw InputError("campaign: 'k_range' must be an array");
      for (const auto& v : k) {
        if (!v.is_number_integer() || v.get<int>() < 0) {
          throw InputError("campaign: k_range entries must be nonnegative integers");
        }
        req.k_range.push_back(v.get<int>());
      }
    }
    out.push_back(std::move(req));
  }
  return campaign;
}

void write_summary_csv(std::ostream& out, const std::vector<verify::ResidualReport>& reports) {
  out << "equation_id,finest_residual,order,pass\n";
  for (const auto& r : reports) {
    out << r.variant << ',' << format_double(r.levels.back().max_residual) << ','
        << format_double(r.estimated_order) << ',' << (r.pass ? "true" : "false") << '\n';
  }
}

}  // namespace tcpp::io
