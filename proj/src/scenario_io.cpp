#include "hotspot/scenario_io.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

#include "hotspot/error.hpp"

namespace hotspot {

namespace {

// A YAML node plus the dotted path used in error messages.
struct Field {
  YAML::Node node;
  std::string path;

  [[noreturn]] void fail(const std::string& what) const {
    std::string where;
    if (node.IsDefined() && node.Mark().line >= 0) {
      where = "line " + std::to_string(node.Mark().line + 1) + ": ";
    }
    throw ParseError(where + "field '" + path + "': " + what);
  }

  std::string child_path(const std::string& key) const {
    return path.empty() ? key : path + "." + key;
  }

  Field at(std::size_t i) const { return Field{node[i], path + "[" + std::to_string(i) + "]"}; }

  bool has(const std::string& key) const { return node.IsMap() && node[key].IsDefined(); }

  Field get(const std::string& key) const {
    if (!node.IsMap()) fail("expected a mapping");
    YAML::Node child = node[key];
    if (!child.IsDefined() || child.IsNull()) {
      // Point at the parent, which is where the key is missing.
      std::string where;
      if (node.Mark().line >= 0) where = "line " + std::to_string(node.Mark().line + 1) + ": ";
      throw ParseError(where + "missing " + key + " (in '" + (path.empty() ? "<root>" : path) +
                       "')");
    }
    return Field{child, child_path(key)};
  }

  void only_keys(std::initializer_list<std::string_view> allowed) const {
    if (!node.IsMap()) fail("expected a mapping");
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        Field{kv.first, child_path(key)}.fail("unknown key");
      }
    }
  }

  std::string scalar() const {
    if (!node.IsScalar()) fail("expected a scalar");
    return node.Scalar();
  }

  std::int64_t fixed(int scale) const {
    try {
      return parse_fixed(scalar(), scale);
    } catch (const ParseError& e) {
      fail(e.what());
    }
  }

  std::int64_t integer() const { return fixed(0); }

  bool boolean() const {
    const std::string s = scalar();
    if (s == "true") return true;
    if (s == "false") return false;
    fail("expected true or false");
  }

  void require_sequence() const {
    if (!node.IsSequence()) fail("expected a list");
  }
};

WnicModel parse_model(const Field& f, const std::filesystem::path& base_dir);

WnicModel parse_model_body(const Field& f) {
  f.only_keys({"kind", "states", "transitions", "active_throughput_bps", "sleep_state",
               "idle_state"});
  WnicModel m;
  m.kind = InterfaceKind::from_label(f.get("kind").scalar());
  const Field states = f.get("states");
  states.require_sequence();
  for (std::size_t i = 0; i < states.node.size(); ++i) {
    const Field s = states.at(i);
    s.only_keys({"name", "power_mw", "can_transfer"});
    PowerState st;
    st.name = s.get("name").scalar();
    st.power = Milliwatts{s.get("power_mw").integer()};
    st.can_transfer = s.has("can_transfer") && s.get("can_transfer").boolean();
    m.states.push_back(std::move(st));
  }
  if (f.has("transitions")) {
    const Field tr = f.get("transitions");
    tr.require_sequence();
    for (std::size_t i = 0; i < tr.node.size(); ++i) {
      const Field t = tr.at(i);
      t.only_keys({"from", "to", "latency_us", "energy_mj"});
      StatePair pair{t.get("from").scalar(), t.get("to").scalar()};
      TransitionCost cost{Micros{t.get("latency_us").integer()},
                          Nanojoules{t.get("energy_mj").fixed(6)}};
      if (!m.transitions.emplace(pair, cost).second) t.fail("duplicate transition");
    }
  }
  m.active_throughput = BitRate{f.get("active_throughput_bps").integer()};
  m.sleep_state = f.get("sleep_state").scalar();
  m.idle_state = f.get("idle_state").scalar();

  const auto violations = validate_model(m);
  if (!violations.empty()) {
    std::string msg = violations.front();
    for (std::size_t i = 1; i < violations.size(); ++i) msg += "; " + violations[i];
    throw ValidationError("field '" + f.path + "': " + msg);
  }
  return m;
}

YAML::Node load_yaml_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return YAML::Load(buf.str());
  } catch (const YAML::Exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

WnicModel parse_model(const Field& f, const std::filesystem::path& base_dir) {
  if (f.has("file")) {
    f.only_keys({"file"});
    const std::filesystem::path file = base_dir / f.get("file").scalar();
    try {
      return parse_model_file(file);
    } catch (const Error& e) {
      f.fail(e.what());
    }
  }
  return parse_model_body(f);
}

Scenario parse_root(const YAML::Node& root, const std::filesystem::path& base_dir) {
  const Field top{root, ""};
  if (!root.IsDefined() || root.IsNull()) throw ParseError("missing horizon_us (empty scenario)");
  top.only_keys({"horizon_us", "capacity_bps", "models", "clients", "streams", "links",
                 "scheduler", "policy"});

  Scenario sc;
  sc.horizon = Micros{top.get("horizon_us").integer()};
  sc.capacity = BitRate{top.get("capacity_bps").integer()};

  if (top.has("models")) {
    const Field models = top.get("models");
    if (!models.node.IsMap()) models.fail("expected a mapping of model name to model");
    for (const auto& kv : models.node) {
      const auto name = kv.first.as<std::string>();
      sc.models.emplace(name, parse_model(Field{kv.second, models.child_path(name)}, base_dir));
    }
  }

  if (top.has("clients")) {
    const Field clients = top.get("clients");
    clients.require_sequence();
    for (std::size_t i = 0; i < clients.node.size(); ++i) {
      const Field c = clients.at(i);
      c.only_keys({"id", "models", "battery_level"});
      ClientConfig cfg;
      cfg.id = c.get("id").scalar();
      const Field ms = c.get("models");
      ms.require_sequence();
      for (std::size_t j = 0; j < ms.node.size(); ++j) {
        const Field m = ms.at(j);
        const std::string name = m.scalar();
        if (!sc.models.contains(name)) m.fail("unknown model '" + name + "'");
        cfg.models.push_back(name);
      }
      if (c.has("battery_level")) cfg.battery_level = Ratio{c.get("battery_level").fixed(6)};
      sc.clients.push_back(std::move(cfg));
    }
  }

  std::set<ClientId> client_ids;
  for (const auto& c : sc.clients) client_ids.insert(c.id);
  auto client_ref = [&](const Field& f) {
    const std::string id = f.scalar();
    if (!client_ids.contains(id)) f.fail("unknown client '" + id + "'");
    return id;
  };

  if (top.has("streams")) {
    const Field streams = top.get("streams");
    streams.require_sequence();
    for (std::size_t i = 0; i < streams.node.size(); ++i) {
      const Field s = streams.at(i);
      s.only_keys({"client", "bitrate_bps", "start_us", "duration_us", "prebuffer_bytes",
                   "buffer_capacity_bytes", "max_startup_latency_us"});
      StreamSpec st;
      st.client = client_ref(s.get("client"));
      st.bitrate = BitRate{s.get("bitrate_bps").integer()};
      st.start = s.has("start_us") ? Micros{s.get("start_us").integer()} : Micros{0};
      st.duration = Micros{s.get("duration_us").integer()};
      st.prebuffer = s.get("prebuffer_bytes").integer();
      st.buffer_capacity = s.get("buffer_capacity_bytes").integer();
      st.max_startup_latency = Micros{s.get("max_startup_latency_us").integer()};
      sc.streams.push_back(std::move(st));
    }
  }

  if (top.has("links")) {
    const Field links = top.get("links");
    links.require_sequence();
    for (std::size_t i = 0; i < links.node.size(); ++i) {
      const Field l = links.at(i);
      l.only_keys({"client", "interface", "steps"});
      LinkTrace tr;
      tr.client = client_ref(l.get("client"));
      tr.interface = InterfaceKind::from_label(l.get("interface").scalar());
      const Field steps = l.get("steps");
      steps.require_sequence();
      for (std::size_t j = 0; j < steps.node.size(); ++j) {
        const Field s = steps.at(j);
        s.only_keys({"t_us", "throughput_bps", "quality"});
        tr.steps.push_back(LinkStep{Micros{s.get("t_us").integer()},
                                    BitRate{s.get("throughput_bps").integer()},
                                    Ratio{s.get("quality").fixed(6)}});
      }
      sc.links.push_back(std::move(tr));
    }
  }

  if (top.has("scheduler")) {
    const Field s = top.get("scheduler");
    s.only_keys({"algorithm", "weights", "burst_bytes"});
    if (s.has("algorithm")) {
      try {
        sc.scheduler.kind = scheduler_kind_from_string(s.get("algorithm").scalar());
      } catch (const ParseError& e) {
        s.get("algorithm").fail(e.what());
      }
    }
    if (s.has("weights")) {
      const Field w = s.get("weights");
      if (!w.node.IsMap()) w.fail("expected a mapping of client to weight");
      for (const auto& kv : w.node) {
        const Field key{kv.first, w.child_path(kv.first.Scalar())};
        const ClientId id = client_ref(key);
        sc.scheduler.weights[id] = Ratio{Field{kv.second, key.path}.fixed(6)};
      }
    }
    if (s.has("burst_bytes")) sc.scheduler.burst_bytes = s.get("burst_bytes").integer();
  }

  if (top.has("policy")) {
    const Field p = top.get("policy");
    p.only_keys({"quality_floor", "hysteresis_margin", "min_dwell_us", "preference"});
    if (p.has("quality_floor")) sc.policy.quality_floor = Ratio{p.get("quality_floor").fixed(6)};
    if (p.has("hysteresis_margin")) {
      sc.policy.hysteresis_margin = Ratio{p.get("hysteresis_margin").fixed(6)};
    }
    if (p.has("min_dwell_us")) sc.policy.min_dwell = Micros{p.get("min_dwell_us").integer()};
    if (p.has("preference")) {
      const Field pref = p.get("preference");
      pref.require_sequence();
      for (std::size_t i = 0; i < pref.node.size(); ++i) {
        sc.policy.preference.push_back(InterfaceKind::from_label(pref.at(i).scalar()));
      }
    }
  }

  validate_scenario(sc);
  return sc;
}

void emit_model(YAML::Emitter& out, const WnicModel& m) {
  out << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << m.kind.label();
  out << YAML::Key << "active_throughput_bps" << YAML::Value << m.active_throughput.count();
  out << YAML::Key << "sleep_state" << YAML::Value << m.sleep_state;
  out << YAML::Key << "idle_state" << YAML::Value << m.idle_state;
  out << YAML::Key << "states" << YAML::Value << YAML::BeginSeq;
  for (const auto& s : m.states) {
    out << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << s.name;
    out << YAML::Key << "power_mw" << YAML::Value << s.power.count();
    if (s.can_transfer) out << YAML::Key << "can_transfer" << YAML::Value << true;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::Key << "transitions" << YAML::Value << YAML::BeginSeq;
  for (const auto& [pair, cost] : m.transitions) {
    out << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "from" << YAML::Value << pair.first;
    out << YAML::Key << "to" << YAML::Value << pair.second;
    out << YAML::Key << "latency_us" << YAML::Value << cost.latency.count();
    out << YAML::Key << "energy_mj" << YAML::Value << format_fixed(cost.energy.count(), 6);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::EndMap;
}

}  // namespace

Scenario parse_scenario_text(std::string_view text, const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ParseError(std::string("syntax error: ") + e.what());
  }
  return parse_root(root, base_dir);
}

Scenario parse_scenario(const std::filesystem::path& path) {
  const YAML::Node root = load_yaml_file(path);
  try {
    return parse_root(root, path.parent_path());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

WnicModel parse_model_file(const std::filesystem::path& path) {
  const YAML::Node root = load_yaml_file(path);
  try {
    return parse_model_body(Field{root, ""});
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string serialize_scenario(const Scenario& sc) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "horizon_us" << YAML::Value << sc.horizon.count();
  out << YAML::Key << "capacity_bps" << YAML::Value << sc.capacity.count();

  out << YAML::Key << "models" << YAML::Value << YAML::BeginMap;
  for (const auto& [name, m] : sc.models) {
    out << YAML::Key << name << YAML::Value;
    emit_model(out, m);
  }
  out << YAML::EndMap;

  out << YAML::Key << "clients" << YAML::Value << YAML::BeginSeq;
  for (const auto& c : sc.clients) {
    out << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "id" << YAML::Value << c.id;
    out << YAML::Key << "models" << YAML::Value << YAML::Flow << c.models;
    out << YAML::Key << "battery_level" << YAML::Value << format_fixed(c.battery_level.count(), 6);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::Key << "streams" << YAML::Value << YAML::BeginSeq;
  for (const auto& s : sc.streams) {
    out << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "client" << YAML::Value << s.client;
    out << YAML::Key << "bitrate_bps" << YAML::Value << s.bitrate.count();
    out << YAML::Key << "start_us" << YAML::Value << s.start.count();
    out << YAML::Key << "duration_us" << YAML::Value << s.duration.count();
    out << YAML::Key << "prebuffer_bytes" << YAML::Value << s.prebuffer;
    out << YAML::Key << "buffer_capacity_bytes" << YAML::Value << s.buffer_capacity;
    out << YAML::Key << "max_startup_latency_us" << YAML::Value << s.max_startup_latency.count();
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::Key << "links" << YAML::Value << YAML::BeginSeq;
  for (const auto& l : sc.links) {
    out << YAML::BeginMap;
    out << YAML::Key << "client" << YAML::Value << l.client;
    out << YAML::Key << "interface" << YAML::Value << l.interface.label();
    out << YAML::Key << "steps" << YAML::Value << YAML::BeginSeq;
    for (const auto& st : l.steps) {
      out << YAML::Flow << YAML::BeginMap;
      out << YAML::Key << "t_us" << YAML::Value << st.start.count();
      out << YAML::Key << "throughput_bps" << YAML::Value << st.throughput.count();
      out << YAML::Key << "quality" << YAML::Value << format_fixed(st.quality.count(), 6);
      out << YAML::EndMap;
    }
    out << YAML::EndSeq;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::Key << "scheduler" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "algorithm" << YAML::Value << to_string(sc.scheduler.kind);
  if (!sc.scheduler.weights.empty()) {
    out << YAML::Key << "weights" << YAML::Value << YAML::BeginMap;
    for (const auto& [client, w] : sc.scheduler.weights) {
      out << YAML::Key << client << YAML::Value << format_fixed(w.count(), 6);
    }
    out << YAML::EndMap;
  }
  if (sc.scheduler.burst_bytes) {
    out << YAML::Key << "burst_bytes" << YAML::Value << *sc.scheduler.burst_bytes;
  }
  out << YAML::EndMap;

  out << YAML::Key << "policy" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "quality_floor" << YAML::Value << format_fixed(sc.policy.quality_floor.count(), 6);
  out << YAML::Key << "hysteresis_margin" << YAML::Value
      << format_fixed(sc.policy.hysteresis_margin.count(), 6);
  out << YAML::Key << "min_dwell_us" << YAML::Value << sc.policy.min_dwell.count();
  if (!sc.policy.preference.empty()) {
    out << YAML::Key << "preference" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (const auto& k : sc.policy.preference) out << k.label();
    out << YAML::EndSeq;
  }
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace hotspot
