#include "config.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace lcs::cli {

namespace {

// Leaf schema: {"$type": ..., "$default": ..., "$required": bool, "$enum": [...], "$min": x,
// "$max": x, "$len": n, "$min_items": n, "$items": schema}. Anything else is a nested object.
json leaf(const char* type, json def) { return json{{"$type", type}, {"$default", std::move(def)}}; }
json required(const char* type) { return json{{"$type", type}, {"$required", true}}; }
json num(double d) { return leaf("number", d); }
json positive(double d) {
  json j = num(d);
  j["$exclusive_min"] = 0.0;
  return j;
}
json integer(int d, int lo) {
  json j = leaf("integer", d);
  j["$min"] = lo;
  return j;
}
json vec(json def, int len = -1) {
  json j = leaf("array", std::move(def));
  j["$items"] = json{{"$type", "number"}};
  if (len >= 0) j["$len"] = len;
  return j;
}
json choice(std::vector<std::string> opts, const std::string& def) {
  json j = leaf("string", def);
  j["$enum"] = opts;
  return j;
}

json output_schema(const std::string& sub) {
  return json{{"dir", leaf("string", "out")}, {"prefix", leaf("string", sub)}};
}

json hamiltonian_schema() {
  return json{
      {"family", choice({"contact_bump", "translation", "radial", "zero", "wobble", "lee"}, "contact_bump")},
      {"amplitude", num(0.25)},
      {"center", vec({0.0, 0.0}, 2)},
      {"radius", positive(0.8)},
      {"z_window", num(0.0)},
      {"z_center", num(0.0)},
      {"phase", num(0.0)},
      {"velocity", num(0.7)},
      {"half_width", positive(0.7)},
      {"profile", json{{"A", num(2.3)}, {"a", num(0.02)}, {"b", positive(2.45)}, {"delta", positive(0.05)}}},
  };
}

json integrator_schema(double step) { return json{{"step", positive(step)}, {"richardson", leaf("boolean", false)}}; }

json map_schema() {
  return json{{"route", choice({"contact", "lcs"}, "contact")},
              {"periodic_z", leaf("boolean", true)},
              {"support", json{{"lo", vec(json::array())}, {"hi", vec(json::array())}}},
              {"bound", positive(0.5)}};
}

json grid_schema(json base) {
  json b = vec(std::move(base));
  b["$items"] = json{{"$type", "integer"}, {"$min", 2}};
  return json{{"base_res", b}, {"fibre_res", integer(9, 3)}};
}

std::string type_name(const json& v) {
  if (v.is_boolean()) return "boolean";
  if (v.is_number_integer() || v.is_number_unsigned()) return "integer";
  if (v.is_number()) return "number";
  if (v.is_string()) return "string";
  if (v.is_array()) return "array";
  if (v.is_object()) return "object";
  return "null";
}

bool type_ok(const std::string& want, const json& v) {
  if (want == "number") return v.is_number();
  if (want == "integer") return v.is_number_integer() || v.is_number_unsigned();
  return type_name(v) == want;
}

struct Validator {
  const Config& cfg;

  json leaf_value(const json& schema, const json* value, const std::string& ptr, const std::string& parent) {
    if (!value) {
      if (schema.value("$required", false))
        cfg.fail(parent, "missing required key '" + ptr.substr(ptr.rfind('/') + 1) + "'");
      return schema.contains("$default") ? schema["$default"] : json();
    }
    const std::string want = schema["$type"];
    if (!type_ok(want, *value)) cfg.fail(ptr, "expected " + want + ", got " + type_name(*value));
    if (schema.contains("$enum")) {
      bool hit = false;
      for (const auto& e : schema["$enum"]) hit = hit || e == *value;
      if (!hit) cfg.fail(ptr, "value " + value->dump() + " not one of " + schema["$enum"].dump());
    }
    if (value->is_number()) {
      double x = value->get<double>();
      if (schema.contains("$min") && x < schema["$min"].get<double>())
        cfg.fail(ptr, "value " + value->dump() + " below minimum " + schema["$min"].dump());
      if (schema.contains("$max") && x > schema["$max"].get<double>())
        cfg.fail(ptr, "value " + value->dump() + " above maximum " + schema["$max"].dump());
      if (schema.contains("$exclusive_min") && x <= schema["$exclusive_min"].get<double>())
        cfg.fail(ptr, "value must be > " + schema["$exclusive_min"].dump());
    }
    if (value->is_array()) {
      if (schema.contains("$len") && value->size() != schema["$len"].get<std::size_t>())
        cfg.fail(ptr, "expected " + schema["$len"].dump() + " entries, got " + std::to_string(value->size()));
      if (schema.contains("$min_items") && value->size() < schema["$min_items"].get<std::size_t>())
        cfg.fail(ptr, "expected at least " + schema["$min_items"].dump() + " entries");
      if (schema.contains("$items")) {
        json out = json::array();
        for (std::size_t i = 0; i < value->size(); ++i)
          out.push_back(walk(schema["$items"], &(*value)[i], ptr + "/" + std::to_string(i), ptr));
        return out;
      }
    }
    return *value;
  }

  json walk(const json& schema, const json* value, const std::string& ptr, const std::string& parent) {
    if (schema.contains("$type")) return leaf_value(schema, value, ptr, parent);
    if (value && !value->is_object()) cfg.fail(ptr, "expected object, got " + type_name(*value));
    if (value)
      for (auto it = value->begin(); it != value->end(); ++it)
        if (!schema.contains(it.key())) cfg.fail(ptr + "/" + it.key(), "unknown key '" + it.key() + "'");
    json out = json::object();
    for (auto it = schema.begin(); it != schema.end(); ++it) {
      const json* sub = value && value->contains(it.key()) ? &(*value)[it.key()] : nullptr;
      out[it.key()] = walk(it.value(), sub, ptr + "/" + it.key(), ptr);
    }
    return out;
  }
};

}  // namespace

int Config::line_of(const std::string& pointer) const {
  std::string p = pointer;
  for (;;) {
    auto it = lines.find(p);
    if (it != lines.end()) return it->second;
    if (p.empty()) return 1;
    p = p.substr(0, p.rfind('/'));
  }
}

void Config::fail(const std::string& pointer, const std::string& msg) const {
  throw ConfigError(path, line_of(pointer), (pointer.empty() ? std::string("/") : pointer) + ": " + msg);
}

std::map<std::string, int> key_lines(const std::string& text) {
  struct Frame {
    bool obj;
    std::string key;
    int index = 0;
    bool expect_key = true;
    bool recorded = false;
  };
  std::map<std::string, int> out;
  std::vector<Frame> st;
  int line = 1;
  auto prefix = [&](std::size_t upto) {
    std::string p;
    for (std::size_t i = 0; i < upto; ++i) p += "/" + (st[i].obj ? st[i].key : std::to_string(st[i].index));
    return p;
  };
  auto element_start = [&] {
    if (!st.empty() && !st.back().obj && !st.back().recorded) {
      out.emplace(prefix(st.size()), line);
      st.back().recorded = true;
    }
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    switch (c) {
      case '{':
      case '[':
        element_start();
        st.push_back(Frame{c == '{', "", 0, true, false});
        break;
      case '}':
      case ']':
        if (!st.empty()) st.pop_back();
        break;
      case ',':
        if (!st.empty()) {
          if (st.back().obj)
            st.back().expect_key = true;
          else {
            ++st.back().index;
            st.back().recorded = false;
          }
        }
        break;
      case ':':
        if (!st.empty()) st.back().expect_key = false;
        break;
      case '"': {
        std::string s;
        for (++i; i < text.size() && text[i] != '"'; ++i) {
          if (text[i] == '\\' && i + 1 < text.size()) ++i;
          s += text[i];
        }
        if (!st.empty() && st.back().obj && st.back().expect_key) {
          st.back().key = s;
          out.emplace(prefix(st.size()), line);
        } else {
          element_start();
        }
        break;
      }
      default:
        element_start();
    }
  }
  return out;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << v;
  return os.str();
}

json schema_for(const std::string& sub) {
  json s{{"seed", integer(0, 0)}, {"threads", integer(0, 0)}, {"output", output_schema(sub)}};
  if (sub == "flow") {
    s["model"] = json{{"name", choice({"s1xr3", "s1xr2xs1", "tstar_twisted"}, "s1xr3")}};
    s["hamiltonian"] = hamiltonian_schema();
    s["integrator"] = integrator_schema(1e-2);
    json seeds = required("array");
    seeds["$min_items"] = 1;
    seeds["$items"] = vec(json::array());
    seeds["$items"].erase("$default");
    s["seeds"] = seeds;
    s["t_final"] = num(1.0);
    s["record_every"] = integer(10, 1);
  } else if (sub == "chords") {
    s["seed"] = required("integer");
    s["problem"] = choice({"torus_morse", "lifted", "contact"}, "torus_morse");
    s["torus"] = json{{"a", num(1.0)}, {"b", num(0.7)}, {"beta", vec({1.0, 0.0}, 2)}};
    s["hamiltonian"] = hamiltonian_schema();
    s["hamiltonian"]["amplitude"] = num(0.8);
    s["integrator"] = integrator_schema(1e-2);
    json g = vec(json::array());
    g["$items"] = json{{"$type", "integer"}, {"$min", 1}};
    json q = g;
    q["$items"]["$min"] = 0;
    s["search"] = json{{"grid", g},
                       {"quotient", q},
                       {"newton_tol", positive(1e-10)},
                       {"dedup_radius", positive(1e-4)},
                       {"action_tol", positive(1e-5)},
                       {"jitter", num(0.1)}};
  } else if (sub == "genfun" || sub == "spectral") {
    if (sub == "genfun") s["seed"] = required("integer");
    s["hamiltonian"] = hamiltonian_schema();
    s["integrator"] = integrator_schema(2e-2);
    s["map"] = map_schema();
    if (sub == "genfun")
      s["search"] = json{{"base_samples", integer(5, 2)},
                         {"fibre_seeds", integer(3, 1)},
                         {"newton_tol", positive(1e-9)},
                         {"dedup", positive(1e-5)}};
    else
      s["grid"] = grid_schema(json::array());
  } else if (sub == "metric") {
    json bump{{"amplitude", required("number")}, {"center", vec({0.0, 0.0}, 2)}, {"radius", positive(0.8)}};
    json maps = required("array");
    maps["$min_items"] = 2;
    maps["$items"] = bump;
    s["maps"] = maps;
    s["integrator"] = integrator_schema(2e-2);
    s["map"] = map_schema();
    s["map"].erase("route");
    s["map"].erase("periodic_z");
    s["grid"] = grid_schema({13, 13, 2});
  } else if (sub == "capacity") {
    json area = required("number");
    area["$exclusive_min"] = 0.0;
    s["ball"] = json{{"area", area}, {"center", vec({0.0, 0.0}, 2)}};
    s["family"] = json{{"kind", choice({"radial", "identity"}, "radial")}, {"members", integer(3, 1)}};
    s["grid"] = grid_schema({32});
  } else if (sub == "nonsqueeze") {
    json pairs = required("array");
    pairs["$min_items"] = 1;
    pairs["$items"] = vec(json::array(), 2);
    pairs["$items"].erase("$default");
    s["pairs"] = pairs;
    s["by"] = choice({"radius", "area"}, "radius");
  } else if (sub == "verify") {
    json c = leaf("array", {1, 2, 3, 4, 5, 6, 7, 8, 9});
    c["$items"] = json{{"$type", "integer"}, {"$min", 1}, {"$max", 9}};
    s["criteria"] = c;
  } else {
    throw std::invalid_argument("unknown subcommand '" + sub + "'");
  }
  return s;
}

Config load_config(const std::string& path, const std::string& sub, const json& overrides) {
  Config cfg;
  cfg.path = path;
  cfg.subcommand = sub;
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "cannot open config");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  json raw;
  try {
    raw = json::parse(text);
  } catch (const json::parse_error& e) {
    int line = 1;
    for (std::size_t i = 0; i < std::min<std::size_t>(e.byte, text.size()); ++i) line += text[i] == '\n';
    throw ConfigError(path, line, std::string("parse error: ") + e.what());
  }
  cfg.lines = key_lines(text);
  Validator v{cfg};
  cfg.resolved = v.walk(schema_for(sub), &raw, "", "");
  for (auto it = overrides.begin(); it != overrides.end(); ++it) cfg.resolved[json::json_pointer(it.key())] = it.value();
  // where artifacts go and how many workers run do not change them
  json hashed = cfg.resolved;
  hashed.erase("output");
  hashed.erase("threads");
  cfg.hash = hex64(fnv1a(hashed.dump()));
  return cfg;
}

}  // namespace lcs::cli
