#include "rtdqs/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace rtdqs {

using nlohmann::json;

const char* to_string(NodeClass c) { return c == NodeClass::LMH ? "LMH" : "SMH"; }
const char* to_string(TxnClass c) { return c == TxnClass::Firm ? "firm" : "soft"; }

const NodeSpec* Scenario::find_node(NodeId id) const {
  auto it = std::find_if(nodes.begin(), nodes.end(), [id](const NodeSpec& n) { return n.id == id; });
  return it == nodes.end() ? nullptr : &*it;
}

std::size_t Scenario::provider_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const NodeSpec& n) { return n.node_class == NodeClass::LMH; }));
}

double Scenario::density() const {
  if (nodes.empty()) return 0.0;
  return 100.0 * static_cast<double>(provider_count()) / static_cast<double>(nodes.size());
}

namespace {

std::string join(const std::vector<std::string>& v, const char* sep) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? sep : "") << v[i];
  return os.str();
}

const std::set<std::string> kTopKeys = {"area", "sim_duration", "seed", "radio", "qos", "weights",
                                        "service", "nodes", "multicast_groups", "traffic"};
const std::set<std::string> kAreaKeys = {"width", "height"};
const std::set<std::string> kRadioKeys = {"range", "bandwidth", "tx_power", "rx_power", "queue_capacity"};
const std::set<std::string> kQosKeys = {"mr_threshold", "ate_threshold",   "overshoot_threshold",
                                        "settling_time", "mr_window",      "mr_sample_period"};
const std::set<std::string> kWeightKeys = {"alpha_route", "beta_route", "gamma_route",
                                           "alpha_ss",    "n_firm",     "n_soft"};
const std::set<std::string> kServiceKeys = {"mean_service_time", "collection_window", "reselect_interval",
                                            "soft_patience_factor", "discovery_ttl"};
const std::set<std::string> kNodeKeys = {"id",       "class",    "initial_energy", "max_speed",
                                         "pause_time", "position", "background_load"};
const std::set<std::string> kPulseKeys = {"start", "stop", "rate", "txn_class", "deadline"};
const std::set<std::string> kTrafficKeys = {"source",    "destination_group", "rate",       "packet_size",
                                            "txn_class", "deadline",          "start_time", "stop_time"};

void collect_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& prefix,
                     std::vector<std::string>& out) {
  if (!obj.is_object()) return;
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) out.push_back(prefix + it.key());
}

void fill(json& obj, const char* key, const json& value) {
  if (!obj.contains(key)) obj[key] = value;
}

TxnClass declared_class(const json& t) {
  if (t.contains("txn_class") && t["txn_class"].is_string() && t["txn_class"] == "soft") return TxnClass::Soft;
  return TxnClass::Firm;
}

// Typed field access that names the offending field on failure.
template <typename T>
T field(const json& obj, const char* key, const std::string& path) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ScenarioValidationError({path + key + " has wrong type or is missing"});
  }
}

TxnClass parse_txn_class(const json& v, const std::string& path) {
  if (v == "firm") return TxnClass::Firm;
  if (v == "soft") return TxnClass::Soft;
  throw ScenarioValidationError({path + " must be \"firm\" or \"soft\""});
}

std::string group_key(const json& v, const std::string& path) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw ScenarioValidationError({path + " must be a group id"});
}

}  // namespace

ScenarioValidationError::ScenarioValidationError(std::vector<std::string> violations)
    : std::runtime_error("scenario validation failed: " + join(violations, "; ")),
      m_violations(std::move(violations)) {}

json with_defaults(const json& doc) {
  const Scenario d;
  json out = doc.is_object() ? doc : json::object();
  fill(out, "area", json::object());
  fill(out["area"], "width", d.area_width);
  fill(out["area"], "height", d.area_height);
  fill(out, "sim_duration", d.sim_duration);
  fill(out, "seed", d.seed);

  fill(out, "radio", json::object());
  auto& r = out["radio"];
  fill(r, "range", d.radio.range);
  fill(r, "bandwidth", d.radio.bandwidth);
  fill(r, "tx_power", d.radio.tx_power);
  fill(r, "rx_power", d.radio.rx_power);
  fill(r, "queue_capacity", d.radio.queue_capacity);

  fill(out, "qos", json::object());
  auto& q = out["qos"];
  fill(q, "mr_threshold", d.qos.mr_threshold);
  fill(q, "ate_threshold", d.qos.ate_threshold);
  fill(q, "overshoot_threshold", d.qos.overshoot_threshold);
  fill(q, "settling_time", d.qos.settling_time);
  fill(q, "mr_window", d.qos.mr_window);
  fill(q, "mr_sample_period", d.qos.mr_sample_period);

  // alpha_ss stays absent unless given: absence selects per-class weighting.
  fill(out, "weights", json::object());
  auto& w = out["weights"];
  fill(w, "alpha_route", d.weights.alpha_route);
  fill(w, "beta_route", d.weights.beta_route);
  fill(w, "gamma_route", d.weights.gamma_route);
  fill(w, "n_firm", d.weights.n_firm);
  fill(w, "n_soft", d.weights.n_soft);

  fill(out, "service", json::object());
  auto& sv = out["service"];
  fill(sv, "mean_service_time", d.service.mean_service_time);
  fill(sv, "collection_window", d.service.collection_window);
  fill(sv, "reselect_interval", d.service.reselect_interval);
  fill(sv, "soft_patience_factor", d.service.soft_patience_factor);
  fill(sv, "discovery_ttl", d.service.discovery_ttl);

  fill(out, "nodes", json::array());
  for (auto& n : out["nodes"]) {
    if (!n.is_object()) continue;
    const bool lmh = n.contains("class") && n["class"] == "LMH";
    fill(n, "class", "SMH");
    fill(n, "initial_energy", lmh ? 100.0 : 50.0);
    fill(n, "max_speed", lmh ? 20.0 : 2.0);
    fill(n, "pause_time", lmh ? 0.0 : 10.0);
    fill(n, "position", "random");
    fill(n, "background_load", json::array());
    for (auto& p : n["background_load"]) {
      if (!p.is_object()) continue;
      const LoadPulse dp;
      fill(p, "start", dp.start);
      fill(p, "stop", out["sim_duration"]);
      fill(p, "rate", dp.rate);
      fill(p, "txn_class", to_string(dp.txn_class));
      fill(p, "deadline", dp.deadline);
    }
  }

  fill(out, "multicast_groups", json::object());
  fill(out, "traffic", json::array());
  for (auto& t : out["traffic"]) {
    if (!t.is_object()) continue;
    const TxnClass cls = declared_class(t);
    fill(t, "rate", 5.0);
    fill(t, "packet_size", 512);
    fill(t, "txn_class", to_string(cls));
    fill(t, "deadline", cls == TxnClass::Firm ? 15.0 : 25.0);
    fill(t, "start_time", 0.0);
    fill(t, "stop_time", out["sim_duration"]);
  }
  return out;
}

std::vector<std::string> unknown_keys(const json& doc) {
  std::vector<std::string> out;
  if (!doc.is_object()) return out;
  collect_unknown(doc, kTopKeys, "", out);
  if (doc.contains("area")) collect_unknown(doc["area"], kAreaKeys, "area.", out);
  if (doc.contains("radio")) collect_unknown(doc["radio"], kRadioKeys, "radio.", out);
  if (doc.contains("qos")) collect_unknown(doc["qos"], kQosKeys, "qos.", out);
  if (doc.contains("weights")) collect_unknown(doc["weights"], kWeightKeys, "weights.", out);
  if (doc.contains("service")) collect_unknown(doc["service"], kServiceKeys, "service.", out);
  if (doc.contains("nodes") && doc["nodes"].is_array()) {
    for (std::size_t i = 0; i < doc["nodes"].size(); ++i) {
      const auto& n = doc["nodes"][i];
      const std::string p = "nodes[" + std::to_string(i) + "].";
      collect_unknown(n, kNodeKeys, p, out);
      if (n.is_object() && n.contains("background_load") && n["background_load"].is_array())
        for (std::size_t j = 0; j < n["background_load"].size(); ++j)
          collect_unknown(n["background_load"][j], kPulseKeys, p + "background_load[" + std::to_string(j) + "].",
                          out);
    }
  }
  if (doc.contains("traffic") && doc["traffic"].is_array())
    for (std::size_t i = 0; i < doc["traffic"].size(); ++i)
      collect_unknown(doc["traffic"][i], kTrafficKeys, "traffic[" + std::to_string(i) + "].", out);
  return out;
}

Scenario scenario_from_json(const json& raw) {
  if (!raw.is_object()) throw ScenarioValidationError({"document must be a JSON object"});
  if (auto unknown = unknown_keys(raw); !unknown.empty()) {
    for (auto& k : unknown) k = "unknown key " + k;
    throw ScenarioValidationError(unknown);
  }
  const json doc = with_defaults(raw);
  Scenario s;
  s.area_width = field<double>(doc["area"], "width", "area.");
  s.area_height = field<double>(doc["area"], "height", "area.");
  s.sim_duration = field<double>(doc, "sim_duration", "");
  s.seed = field<std::uint64_t>(doc, "seed", "");

  const auto& r = doc["radio"];
  s.radio.range = field<double>(r, "range", "radio.");
  s.radio.bandwidth = field<double>(r, "bandwidth", "radio.");
  s.radio.tx_power = field<double>(r, "tx_power", "radio.");
  s.radio.rx_power = field<double>(r, "rx_power", "radio.");
  s.radio.queue_capacity = field<std::uint32_t>(r, "queue_capacity", "radio.");

  const auto& q = doc["qos"];
  s.qos.mr_threshold = field<double>(q, "mr_threshold", "qos.");
  s.qos.ate_threshold = field<double>(q, "ate_threshold", "qos.");
  s.qos.overshoot_threshold = field<double>(q, "overshoot_threshold", "qos.");
  s.qos.settling_time = field<double>(q, "settling_time", "qos.");
  s.qos.mr_window = field<double>(q, "mr_window", "qos.");
  s.qos.mr_sample_period = field<double>(q, "mr_sample_period", "qos.");

  const auto& w = doc["weights"];
  s.weights.alpha_route = field<double>(w, "alpha_route", "weights.");
  s.weights.beta_route = field<double>(w, "beta_route", "weights.");
  s.weights.gamma_route = field<double>(w, "gamma_route", "weights.");
  if (w.contains("alpha_ss") && !w["alpha_ss"].is_null()) s.weights.alpha_ss = field<double>(w, "alpha_ss", "weights.");
  s.weights.n_firm = field<double>(w, "n_firm", "weights.");
  s.weights.n_soft = field<double>(w, "n_soft", "weights.");

  const auto& sv = doc["service"];
  s.service.mean_service_time = field<double>(sv, "mean_service_time", "service.");
  s.service.collection_window = field<double>(sv, "collection_window", "service.");
  s.service.reselect_interval = field<double>(sv, "reselect_interval", "service.");
  s.service.soft_patience_factor = field<double>(sv, "soft_patience_factor", "service.");
  s.service.discovery_ttl = field<std::uint32_t>(sv, "discovery_ttl", "service.");

  if (!doc["nodes"].is_array()) throw ScenarioValidationError({"nodes must be an array"});
  for (std::size_t i = 0; i < doc["nodes"].size(); ++i) {
    const auto& n = doc["nodes"][i];
    const std::string p = "nodes[" + std::to_string(i) + "].";
    NodeSpec ns;
    ns.id = field<NodeId>(n, "id", p);
    const auto cls = field<std::string>(n, "class", p);
    if (cls == "SMH") ns.node_class = NodeClass::SMH;
    else if (cls == "LMH") ns.node_class = NodeClass::LMH;
    else throw ScenarioValidationError({p + "class must be \"SMH\" or \"LMH\""});
    ns.initial_energy = field<double>(n, "initial_energy", p);
    ns.max_speed = field<double>(n, "max_speed", p);
    ns.pause_time = field<double>(n, "pause_time", p);
    const auto& pos = n["position"];
    if (pos.is_array() && pos.size() == 2 && pos[0].is_number() && pos[1].is_number()) {
      ns.position = Position{pos[0].get<double>(), pos[1].get<double>()};
    } else if (pos.is_object()) {
      ns.position = Position{field<double>(pos, "x", p + "position."), field<double>(pos, "y", p + "position.")};
    } else if (pos != "random") {
      throw ScenarioValidationError({p + "position must be [x, y] or \"random\""});
    }
    for (std::size_t j = 0; j < n["background_load"].size(); ++j) {
      const auto& pl = n["background_load"][j];
      const std::string pp = p + "background_load[" + std::to_string(j) + "].";
      LoadPulse lp;
      lp.start = field<double>(pl, "start", pp);
      lp.stop = field<double>(pl, "stop", pp);
      lp.rate = field<double>(pl, "rate", pp);
      lp.txn_class = parse_txn_class(pl["txn_class"], pp + "txn_class");
      lp.deadline = field<double>(pl, "deadline", pp);
      ns.background_load.push_back(lp);
    }
    s.nodes.push_back(std::move(ns));
  }

  if (!doc["multicast_groups"].is_object()) throw ScenarioValidationError({"multicast_groups must be an object"});
  for (auto it = doc["multicast_groups"].begin(); it != doc["multicast_groups"].end(); ++it)
    s.multicast_groups[it.key()] = field<std::vector<NodeId>>(doc["multicast_groups"], it.key().c_str(),
                                                              "multicast_groups.");

  if (!doc["traffic"].is_array()) throw ScenarioValidationError({"traffic must be an array"});
  for (std::size_t i = 0; i < doc["traffic"].size(); ++i) {
    const auto& t = doc["traffic"][i];
    const std::string p = "traffic[" + std::to_string(i) + "].";
    TrafficSpec ts;
    ts.source = field<NodeId>(t, "source", p);
    if (!t.contains("destination_group")) throw ScenarioValidationError({p + "destination_group is missing"});
    ts.destination_group = group_key(t["destination_group"], p + "destination_group");
    ts.rate = field<double>(t, "rate", p);
    ts.packet_size = field<std::uint32_t>(t, "packet_size", p);
    ts.txn_class = parse_txn_class(t["txn_class"], p + "txn_class");
    ts.deadline = field<double>(t, "deadline", p);
    ts.start_time = field<double>(t, "start_time", p);
    ts.stop_time = field<double>(t, "stop_time", p);
    s.traffic.push_back(std::move(ts));
  }
  return s;
}

json scenario_to_json(const Scenario& s) {
  json doc;
  doc["area"] = {{"width", s.area_width}, {"height", s.area_height}};
  doc["sim_duration"] = s.sim_duration;
  doc["seed"] = s.seed;
  doc["radio"] = {{"range", s.radio.range},       {"bandwidth", s.radio.bandwidth},
                  {"tx_power", s.radio.tx_power}, {"rx_power", s.radio.rx_power},
                  {"queue_capacity", s.radio.queue_capacity}};
  doc["qos"] = {{"mr_threshold", s.qos.mr_threshold},   {"ate_threshold", s.qos.ate_threshold},
                {"overshoot_threshold", s.qos.overshoot_threshold},
                {"settling_time", s.qos.settling_time}, {"mr_window", s.qos.mr_window},
                {"mr_sample_period", s.qos.mr_sample_period}};
  doc["weights"] = {{"alpha_route", s.weights.alpha_route}, {"beta_route", s.weights.beta_route},
                    {"gamma_route", s.weights.gamma_route}, {"n_firm", s.weights.n_firm},
                    {"n_soft", s.weights.n_soft}};
  if (s.weights.alpha_ss) doc["weights"]["alpha_ss"] = *s.weights.alpha_ss;
  doc["service"] = {{"mean_service_time", s.service.mean_service_time},
                    {"collection_window", s.service.collection_window},
                    {"reselect_interval", s.service.reselect_interval},
                    {"soft_patience_factor", s.service.soft_patience_factor},
                    {"discovery_ttl", s.service.discovery_ttl}};
  doc["nodes"] = json::array();
  for (const auto& n : s.nodes) {
    json jn = {{"id", n.id},
               {"class", to_string(n.node_class)},
               {"initial_energy", n.initial_energy},
               {"max_speed", n.max_speed},
               {"pause_time", n.pause_time}};
    jn["position"] = n.position ? json::array({n.position->x, n.position->y}) : json("random");
    jn["background_load"] = json::array();
    for (const auto& p : n.background_load)
      jn["background_load"].push_back({{"start", p.start},
                                       {"stop", p.stop},
                                       {"rate", p.rate},
                                       {"txn_class", to_string(p.txn_class)},
                                       {"deadline", p.deadline}});
    doc["nodes"].push_back(std::move(jn));
  }
  doc["multicast_groups"] = json::object();
  for (const auto& [gid, members] : s.multicast_groups) doc["multicast_groups"][gid] = members;
  doc["traffic"] = json::array();
  for (const auto& t : s.traffic)
    doc["traffic"].push_back({{"source", t.source},
                              {"destination_group", t.destination_group},
                              {"rate", t.rate},
                              {"packet_size", t.packet_size},
                              {"txn_class", to_string(t.txn_class)},
                              {"deadline", t.deadline},
                              {"start_time", t.start_time},
                              {"stop_time", t.stop_time}});
  return doc;
}

Scenario parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioParseError(std::string("malformed scenario document: ") + e.what());
  }
  Scenario s = scenario_from_json(doc);
  if (auto v = validate(s); !v.empty()) throw ScenarioValidationError(std::move(v));
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioParseError("cannot read scenario file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::vector<std::string> validate(const Scenario& s) {
  std::vector<std::string> v;
  auto finite_pos = [](double x) { return std::isfinite(x) && x > 0.0; };
  auto finite_nonneg = [](double x) { return std::isfinite(x) && x >= 0.0; };

  if (!finite_pos(s.area_width)) v.push_back("area.width must be positive");
  if (!finite_pos(s.area_height)) v.push_back("area.height must be positive");
  if (!finite_pos(s.sim_duration)) v.push_back("sim_duration must be positive");

  if (!finite_pos(s.radio.range)) v.push_back("radio.range must be positive");
  if (!finite_pos(s.radio.bandwidth)) v.push_back("radio.bandwidth must be positive");
  if (!finite_nonneg(s.radio.tx_power)) v.push_back("radio.tx_power must be >= 0");
  if (!finite_nonneg(s.radio.rx_power)) v.push_back("radio.rx_power must be >= 0");
  if (s.radio.queue_capacity == 0) v.push_back("radio.queue_capacity must be positive");

  const auto& q = s.qos;
  for (auto [val, name] : {std::pair{q.mr_threshold, "qos.mr_threshold"}, {q.ate_threshold, "qos.ate_threshold"},
                           {q.overshoot_threshold, "qos.overshoot_threshold"}})
    if (!(val >= 0.0 && val <= 100.0)) v.push_back(std::string(name) + " must be in [0,100]");
  if (!finite_nonneg(q.settling_time)) v.push_back("qos.settling_time must be >= 0");
  if (!finite_pos(q.mr_window)) v.push_back("qos.mr_window must be positive");
  if (!finite_pos(q.mr_sample_period)) v.push_back("qos.mr_sample_period must be positive");

  const auto& w = s.weights;
  for (auto [val, name] : {std::pair{w.alpha_route, "weights.alpha_route"}, {w.beta_route, "weights.beta_route"},
                           {w.gamma_route, "weights.gamma_route"}, {w.n_firm, "weights.n_firm"},
                           {w.n_soft, "weights.n_soft"}})
    if (!finite_nonneg(val)) v.push_back(std::string(name) + " must be >= 0");
  if (!(w.alpha_route + w.beta_route + w.gamma_route > 0.0))
    v.push_back("weights.alpha_route + beta_route + gamma_route must be positive");
  if (w.alpha_ss && !(*w.alpha_ss >= 0.0 && *w.alpha_ss <= 1.0)) v.push_back("weights.alpha_ss must be in [0,1]");

  const auto& sv = s.service;
  if (!finite_pos(sv.mean_service_time)) v.push_back("service.mean_service_time must be positive");
  if (!finite_pos(sv.collection_window)) v.push_back("service.collection_window must be positive");
  if (!finite_pos(sv.reselect_interval)) v.push_back("service.reselect_interval must be positive");
  if (!(sv.soft_patience_factor >= 1.0)) v.push_back("service.soft_patience_factor must be >= 1");
  if (sv.discovery_ttl == 0) v.push_back("service.discovery_ttl must be positive");

  std::set<NodeId> ids;
  for (std::size_t i = 0; i < s.nodes.size(); ++i) {
    const auto& n = s.nodes[i];
    const std::string p = "nodes[" + std::to_string(i) + "].";
    if (!ids.insert(n.id).second) v.push_back(p + "id duplicate node id " + std::to_string(n.id));
    if (!finite_pos(n.initial_energy)) v.push_back(p + "initial_energy must be positive");
    if (!finite_nonneg(n.max_speed)) v.push_back(p + "max_speed must be >= 0");
    if (!finite_nonneg(n.pause_time)) v.push_back(p + "pause_time must be >= 0");
    if (n.position && !(n.position->x >= 0.0 && n.position->x <= s.area_width && n.position->y >= 0.0 &&
                        n.position->y <= s.area_height))
      v.push_back(p + "position outside area");
    if (!n.background_load.empty() && n.node_class != NodeClass::LMH)
      v.push_back(p + "background_load only allowed on LMH nodes");
    for (std::size_t j = 0; j < n.background_load.size(); ++j) {
      const auto& pl = n.background_load[j];
      const std::string pp = p + "background_load[" + std::to_string(j) + "].";
      if (!finite_nonneg(pl.rate)) v.push_back(pp + "rate must be >= 0");
      if (!finite_pos(pl.deadline)) v.push_back(pp + "deadline must be positive");
      if (!(finite_nonneg(pl.start) && pl.stop >= pl.start)) v.push_back(pp + "stop must be >= start >= 0");
    }
  }

  for (const auto& [gid, members] : s.multicast_groups)
    for (NodeId m : members)
      if (!ids.count(m)) v.push_back("multicast_groups." + gid + " unknown node " + std::to_string(m));

  for (std::size_t i = 0; i < s.traffic.size(); ++i) {
    const auto& t = s.traffic[i];
    const std::string p = "traffic[" + std::to_string(i) + "].";
    if (!ids.count(t.source)) v.push_back(p + "source unknown node");
    if (!s.multicast_groups.count(t.destination_group)) v.push_back(p + "destination_group unknown group");
    if (!finite_pos(t.rate)) v.push_back(p + "rate must be positive");
    if (t.packet_size == 0) v.push_back(p + "packet_size must be positive");
    if (!finite_pos(t.deadline)) v.push_back(p + "deadline must be positive");
    if (!(finite_nonneg(t.start_time) && t.stop_time >= t.start_time)) v.push_back(p + "stop_time must be >= start_time >= 0");
  }
  return v;
}

Scenario baseline_scenario() {
  Scenario s;
  // Providers are listed first so that density variants keep a stable prefix.
  constexpr int kProviders = 8;
  constexpr int kNodes = 20;
  for (int i = 1; i <= kNodes; ++i) {
    NodeSpec n;
    n.id = static_cast<NodeId>(i);
    if (i <= kProviders) {
      n.node_class = NodeClass::LMH;
      n.initial_energy = 100.0;
      n.max_speed = 20.0;
      n.pause_time = 0.0;
      // Busy spells of 100 s every 400 s. Phases follow a van der Corput sequence so any
      // prefix of the providers covers the cycle evenly.
      constexpr double kPhase[kProviders] = {0.0, 0.5, 0.25, 0.75, 0.125, 0.625, 0.375, 0.875};
      constexpr double kCycle = 400.0, kBusy = 100.0;
      for (double t = kPhase[i - 1] * kCycle - kCycle; t < s.sim_duration; t += kCycle) {
        const double start = std::max(0.0, t), stop = std::min(t + kBusy, s.sim_duration);
        if (stop > start) n.background_load.push_back(LoadPulse{start, stop, 12.0, TxnClass::Soft, 2.0});
      }
    }
    s.nodes.push_back(std::move(n));
  }
  std::vector<NodeId> group;
  for (int i = 1; i <= kProviders; ++i) group.push_back(static_cast<NodeId>(i));
  s.multicast_groups["1"] = group;
  s.service.mean_service_time = 0.1;
  s.service.soft_patience_factor = 1.0;
  s.weights.n_firm = 1.0 / 60.0;

  TrafficSpec t;
  t.source = 20;
  t.destination_group = "1";
  t.start_time = 10.0;
  t.stop_time = s.sim_duration;
  s.traffic.push_back(t);
  return s;
}

}  // namespace rtdqs
