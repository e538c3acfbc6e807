#include "fr3share/io.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fr3share/errors.hpp"

namespace fr3share {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

// Reads known keys from one JSON object and rejects anything else.
class Block {
 public:
  Block(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) config_error(path_ + " must be an object");
  }

  template <typename T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    const json& v = j_.at(key);
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number()) throw std::runtime_error("expected a number");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer() || (std::is_unsigned_v<T> && v.get<long long>() < 0))
          throw std::runtime_error("expected a non-negative integer");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw std::runtime_error("expected a string");
      }
      out = v.get<T>();
    } catch (const std::exception& e) {
      config_error(path_ + "." + key + ": " + e.what());
    }
  }

  template <typename T>
  void read_list(const char* key, std::vector<T>& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    const json& v = j_.at(key);
    if (!v.is_array()) config_error(path_ + "." + key + ": expected an array");
    std::vector<T> tmp;
    for (const auto& x : v) {
      if (!x.is_number() || (std::is_integral_v<T> && !x.is_number_unsigned()))
        config_error(path_ + "." + key + ": unexpected element type");
      tmp.push_back(x.get<T>());
    }
    out = std::move(tmp);
  }

  const json* child(const char* key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  std::string path(const char* key) const { return path_ + "." + key; }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) config_error("unknown key " + path_ + "." + it.key());
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

const char* pattern_name(ElementPattern p) { return p == ElementPattern::Isotropic ? "isotropic" : "3gpp-38.901"; }

ElementPattern pattern_from(const std::string& s, const std::string& where) {
  if (s == "isotropic") return ElementPattern::Isotropic;
  if (s == "3gpp-38.901") return ElementPattern::Tr38901;
  config_error(where + ": unknown element pattern '" + s + "'");
}

void read_array(const json& j, const std::string& path, ArrayGeometry& g) {
  Block b(j, path);
  b.read("n_az", g.n_az);
  b.read("n_el", g.n_el);
  b.read("spacing_wavelengths", g.spacing);
  b.read("boresight_azimuth_deg", g.boresight_azimuth_deg);
  b.read("downtilt_deg", g.downtilt_deg);
  std::string pattern = pattern_name(g.pattern);
  b.read("element_pattern", pattern);
  g.pattern = pattern_from(pattern, b.path("element_pattern"));
  b.read("element_gain_dbi", g.element_gain_dbi);
  b.finish();
}

json array_json(const ArrayGeometry& g) {
  return {{"n_az", g.n_az},
          {"n_el", g.n_el},
          {"spacing_wavelengths", g.spacing},
          {"boresight_azimuth_deg", g.boresight_azimuth_deg},
          {"downtilt_deg", g.downtilt_deg},
          {"element_pattern", pattern_name(g.pattern)},
          {"element_gain_dbi", g.element_gain_dbi}};
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string num(double v) { return fmt::format("{:.12g}", v); }

}  // namespace

ScenarioConfig config_from_json_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    config_error(std::string("malformed JSON: ") + e.what());
  }

  ScenarioConfig cfg;
  Block top(root, "config");
  top.read("seed", cfg.seed);
  std::string mode = to_string(cfg.mode);
  top.read("mode", mode);
  cfg.mode = mode_from_string(mode);
  top.read_list("lambda_list", cfg.lambda_list);
  top.read("epsilon", cfg.epsilon);
  top.read("n_slots", cfg.n_slots);
  top.read("n_ue", cfg.n_ue);
  top.read("repeats", cfg.repeats);
  top.read("output_dir", cfg.output_dir);

  if (const json* c = top.child("constellation")) {
    Block b(*c, "config.constellation");
    b.read("n_sat", cfg.constellation.n_sat);
    b.read("altitude_m", cfg.constellation.base.altitude_m);
    b.read("inclination_deg", cfg.constellation.base.inclination_deg);
    b.read("raan_deg", cfg.constellation.base.raan_deg);
    b.read("arg_perigee_deg", cfg.constellation.base.arg_perigee_deg);
    b.read("true_anomaly_deg", cfg.constellation.base.true_anomaly_deg);
    b.read("delta_inclination_deg", cfg.constellation.delta_inclination_deg);
    b.read("elevation_mask_deg", cfg.constellation.elevation_mask_deg);
    b.read("slot_duration_s", cfg.constellation.slot_duration_s);
    b.finish();
  }
  if (const json* c = top.child("cell")) {
    Block b(*c, "config.cell");
    b.read("latitude_deg", cfg.cell.site.latitude_deg);
    b.read("longitude_deg", cfg.cell.site.longitude_deg);
    b.read("gnb_height_m", cfg.cell.site.height_m);
    b.read("ue_height_m", cfg.cell.ue_height_m);
    b.read("ue_min_distance_m", cfg.cell.ue_min_distance_m);
    b.read("cell_radius_m", cfg.cell.cell_radius_m);
    b.read("sector_deg", cfg.cell.sector_deg);
    b.finish();
  }
  if (const json* c = top.child("arrays")) {
    Block b(*c, "config.arrays");
    b.read("carrier_hz", cfg.arrays.carrier_hz);
    if (const json* g = b.child("gnb")) read_array(*g, b.path("gnb"), cfg.arrays.gnb);
    if (const json* g = b.child("ue")) read_array(*g, b.path("ue"), cfg.arrays.ue);
    std::string model = cfg.arrays.satellite_model == SatelliteModel::Steering ? "steering" : "channel";
    b.read("satellite_model", model);
    if (model == "steering") {
      cfg.arrays.satellite_model = SatelliteModel::Steering;
    } else if (model == "channel") {
      cfg.arrays.satellite_model = SatelliteModel::Channel;
    } else {
      config_error("config.arrays.satellite_model must be 'steering' or 'channel'");
    }
    b.finish();
  }
  if (const json* c = top.child("power_control")) {
    Block b(*c, "config.power_control");
    auto& p = cfg.power;
    b.read("bandwidth_hz", p.bandwidth_hz);
    b.read("interference_dbm", p.interference_dbm);
    b.read("alpha", p.alpha);
    b.read("m_exp", p.m_exp);
    b.read("inr_max_db", p.inr_max_db);
    b.read("p_min_dbm", p.p_min_dbm);
    b.read("p_max_dbm", p.p_max_dbm);
    b.read("g_over_t_db", p.g_over_t_db);
    b.read("atmospheric_loss_db", p.atmospheric_loss_db);
    std::string policy = cfg.infeasible_policy == InfeasiblePolicy::Fallback ? "fallback" : "error";
    b.read("infeasible_policy", policy);
    if (policy == "fallback") {
      cfg.infeasible_policy = InfeasiblePolicy::Fallback;
    } else if (policy == "error") {
      cfg.infeasible_policy = InfeasiblePolicy::Error;
    } else {
      config_error("config.power_control.infeasible_policy must be 'fallback' or 'error'");
    }
    b.finish();
  }
  if (const json* c = top.child("sweep")) {
    Block b(*c, "config.sweep");
    b.read_list("array_sizes", cfg.sweep.array_sizes);
    b.read_list("n_sat_values", cfg.sweep.n_sat_values);
    b.read_list("epsilon_values", cfg.sweep.epsilon_values);
    b.finish();
  }
  top.finish();
  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json_text(ss.str());
}

std::string config_to_json(const ScenarioConfig& cfg) {
  const auto& c = cfg.constellation;
  const auto& p = cfg.power;
  json j = {
      {"seed", cfg.seed},
      {"mode", to_string(cfg.mode)},
      {"lambda_list", cfg.lambda_list},
      {"epsilon", cfg.epsilon},
      {"n_slots", cfg.n_slots},
      {"n_ue", cfg.n_ue},
      {"repeats", cfg.repeats},
      {"output_dir", cfg.output_dir},
      {"constellation",
       {{"n_sat", c.n_sat},
        {"altitude_m", c.base.altitude_m},
        {"inclination_deg", c.base.inclination_deg},
        {"raan_deg", c.base.raan_deg},
        {"arg_perigee_deg", c.base.arg_perigee_deg},
        {"true_anomaly_deg", c.base.true_anomaly_deg},
        {"delta_inclination_deg", c.delta_inclination_deg},
        {"elevation_mask_deg", c.elevation_mask_deg},
        {"slot_duration_s", c.slot_duration_s}}},
      {"cell",
       {{"latitude_deg", cfg.cell.site.latitude_deg},
        {"longitude_deg", cfg.cell.site.longitude_deg},
        {"gnb_height_m", cfg.cell.site.height_m},
        {"ue_height_m", cfg.cell.ue_height_m},
        {"ue_min_distance_m", cfg.cell.ue_min_distance_m},
        {"cell_radius_m", cfg.cell.cell_radius_m},
        {"sector_deg", cfg.cell.sector_deg}}},
      {"arrays",
       {{"carrier_hz", cfg.arrays.carrier_hz},
        {"gnb", array_json(cfg.arrays.gnb)},
        {"ue", array_json(cfg.arrays.ue)},
        {"satellite_model", cfg.arrays.satellite_model == SatelliteModel::Steering ? "steering" : "channel"}}},
      {"power_control",
       {{"bandwidth_hz", p.bandwidth_hz},
        {"interference_dbm", p.interference_dbm},
        {"alpha", p.alpha},
        {"m_exp", p.m_exp},
        {"inr_max_db", p.inr_max_db},
        {"p_min_dbm", p.p_min_dbm},
        {"p_max_dbm", p.p_max_dbm},
        {"g_over_t_db", p.g_over_t_db},
        {"atmospheric_loss_db", p.atmospheric_loss_db},
        {"infeasible_policy", cfg.infeasible_policy == InfeasiblePolicy::Fallback ? "fallback" : "error"}}},
      {"sweep",
       {{"array_sizes", cfg.sweep.array_sizes},
        {"n_sat_values", cfg.sweep.n_sat_values},
        {"epsilon_values", cfg.sweep.epsilon_values}}},
  };
  return j.dump(2);
}

std::string config_hash(const ScenarioConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : config_to_json(cfg)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

std::string records_csv(const std::vector<SlotRecord>& records) {
  std::string out = "slot,ue_id,lambda,p_dbm,gain_db,drss_db,inr_worst_db,flags\n";
  for (const auto& r : records) {
    out += fmt::format("{},{},{},{},{},{},{},{}\n", r.slot, r.ue_id, num(r.lambda), num(r.p_selected_dbm),
                       num(r.beamformed_gain_db), num(r.rss_degradation_db), num(r.inr_worst_db()), r.flags());
  }
  return out;
}

std::string summary_json(const RunSummary& s) {
  json j = {
      {"per_ue_mean_degradation_db", s.per_ue_mean_degradation_db},
      {"jfi", s.jfi},
      {"jfi_all_zero", s.jfi_all_zero},
      {"worst_case_rss_db", s.worst_case_rss_db},
      {"rss_std_db", s.rss_std_db},
      {"mean_degradation_db", s.mean_degradation_db},
      {"inr_percentiles_db",
       {{"p5", number_or_null(s.inr_p5_db)},
        {"p25", number_or_null(s.inr_p25_db)},
        {"p50", number_or_null(s.inr_median_db)},
        {"p75", number_or_null(s.inr_p75_db)},
        {"p95", number_or_null(s.inr_p95_db)}}},
      {"inr_worst_db", s.inr_worst_db},
      {"power_decrease_percent", s.power_decrease_percent},
      {"energy_saved_percent", s.energy_saved_percent},
      {"mean_power_dbm", s.mean_power_dbm},
      {"n_records", s.n_records},
      {"n_infeasible", s.n_infeasible},
      {"n_degenerate", s.n_degenerate},
  };
  return j.dump(2);
}

std::string states_csv(const std::vector<std::vector<SatelliteState>>& states) {
  std::string out = "slot,sat_id,elev_deg,az_deg,range_m\n";
  for (const auto& slot : states)
    for (const auto& s : slot)
      out += fmt::format("{},{},{},{},{}\n", s.slot_index, s.sat_id, num(s.elevation_deg), num(s.azimuth_deg),
                         num(s.range_m));
  return out;
}

std::string gain_map_csv(const GainMap& map) {
  std::string out = "theta_deg,phi_deg,gain_db\n";
  for (std::size_t z = 0; z < map.zeniths_deg.size(); ++z)
    for (std::size_t a = 0; a < map.azimuths_deg.size(); ++a)
      out += fmt::format("{},{},{}\n", num(map.azimuths_deg[a]), num(map.zeniths_deg[z]), num(map.at(z, a)));
  return out;
}

std::string utility_curve_csv(const std::vector<UtilityPoint>& curve) {
  std::string out = "p_dbm,utility,feasible_flag\n";
  for (const auto& pt : curve) out += fmt::format("{},{},{}\n", num(pt.p_dbm), num(pt.utility), pt.feasible ? 1 : 0);
  return out;
}

std::string channel_set_json(const ChannelSet& cs) {
  auto entries = [](const ComplexMatrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
      json row = json::array();
      for (std::size_t c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
      rows.push_back(row);
    }
    return rows;
  };
  json ter = json::array();
  for (std::size_t k = 0; k < cs.h_ter.size(); ++k) {
    if (cs.h_ter[k].empty()) continue;
    ter.push_back({{"ue_id", k}, {"path_gain_db", cs.ter_path_gain_db[k]}, {"h", entries(cs.h_ter[k])}});
  }
  json sat = json::array();
  for (std::size_t j = 0; j < cs.h_sat.size(); ++j)
    sat.push_back({{"sat_id", cs.sat_ids[j]}, {"path_gain_db", cs.sat_path_gain_db[j]}, {"h", entries(cs.h_sat[j])}});
  return json{{"slot", cs.slot_index}, {"terrestrial", ter}, {"satellites", sat}}.dump(2);
}

std::string manifest_json(const RunManifest& m) {
  return json{{"config_hash", m.config_hash},
              {"seed", m.seed},
              {"tool_version", m.tool_version},
              {"mode", m.mode},
              {"outputs", m.outputs},
              {"wall_clock_s", m.wall_clock_s},
              {"threads", m.threads}}
      .dump(2);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ConfigError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::ConfigError, "failed writing " + path.string());
}

}  // namespace fr3share
