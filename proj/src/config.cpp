#include "tokdis/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <limits>

#include "tokdis/errors.hpp"

namespace tokdis {

using nlohmann::json;

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "n",       "k",         "b",         "c",         "T",          "delta",       "p_kprime",
      "epsilon", "alpha",     "q_initial", "initial",   "protocol",   "adversary",   "seed",
      "reps",    "max_rounds", "termination", "local_view", "emit_trace"};
  return keys;
}

namespace {

std::uint64_t as_unsigned(const std::string& key, const json& v) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  if (v.is_number_integer()) throw ConfigError(key, "must be non-negative, got " + v.dump());
  throw ConfigError(key, "expected an integer, got " + v.dump());
}

std::size_t as_size(const std::string& key, const json& v) {
  const auto x = as_unsigned(key, v);
  if (x > std::numeric_limits<std::uint32_t>::max()) throw ConfigError(key, "value too large");
  return static_cast<std::size_t>(x);
}

double as_double(const std::string& key, const json& v) {
  if (!v.is_number()) throw ConfigError(key, "expected a number, got " + v.dump());
  return v.get<double>();
}

std::string as_string(const std::string& key, const json& v) {
  if (!v.is_string()) throw ConfigError(key, "expected a string, got " + v.dump());
  return v.get<std::string>();
}

bool as_bool(const std::string& key, const json& v) {
  if (!v.is_boolean()) throw ConfigError(key, "expected true or false, got " + v.dump());
  return v.get<bool>();
}

bool is_explicit_initial(const json& v) {
  return v.is_array() && std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_array(); });
}

}  // namespace

void apply_key(RunConfig& c, const std::string& key, const json& v) {
  if (key == "n") c.n = as_size(key, v);
  else if (key == "k") c.k = as_size(key, v);
  else if (key == "b") c.b = as_size(key, v);
  else if (key == "c") c.c = as_size(key, v);
  else if (key == "T") c.T = as_size(key, v);
  else if (key == "delta") c.delta = as_double(key, v);
  else if (key == "p_kprime") c.p_kprime = v.is_null() ? std::nullopt : std::optional<double>(as_double(key, v));
  else if (key == "epsilon") c.epsilon = as_double(key, v);
  else if (key == "alpha") c.alpha = as_double(key, v);
  else if (key == "q_initial") c.initial.q = as_double(key, v);
  else if (key == "initial") {
    if (is_explicit_initial(v)) {
      c.initial.kind = InitialKind::explicit_sets;
      c.initial.sets.clear();
      for (const json& set : v) {
        std::vector<TokenId> tokens;
        for (const json& t : set) tokens.push_back(static_cast<TokenId>(as_size(key, t)));
        c.initial.sets.push_back(std::move(tokens));
      }
    } else {
      const std::string kind = as_string(key, v);
      if (kind == "bernoulli") c.initial.kind = InitialKind::bernoulli;
      else if (kind == "single-source") c.initial.kind = InitialKind::single_source;
      else throw ConfigError(key, "expected bernoulli, single-source or a list of per-node token lists");
    }
  } else if (key == "protocol") {
    c.protocol = as_string(key, v);
    parse_protocol(c.protocol);
  } else if (key == "adversary") {
    c.adversary = as_string(key, v);
    parse_adversary(c.adversary);
  } else if (key == "seed") c.seed = as_unsigned(key, v);
  else if (key == "max_rounds") c.max_rounds = as_size(key, v);
  else if (key == "termination") {
    const std::string t = as_string(key, v);
    if (t == "full") c.termination = Termination::full;
    else if (t == "partial") c.termination = Termination::partial;
    else if (t == "fec") c.termination = Termination::fec;
    else throw ConfigError(key, "expected full, partial or fec");
  } else if (key == "local_view") c.local_view = as_bool(key, v);
  else if (key == "emit_trace") c.emit_trace = as_bool(key, v);
  else throw ConfigError(key, "unknown key");
}

void merge_config(ConfigDocument& into, const json& doc) {
  if (!doc.is_object()) throw ConfigError("config", "expected a JSON object");
  for (const auto& [key, value] : doc.items()) {
    const auto& keys = config_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw ConfigError(key, "unknown key");
    std::erase_if(into.axes, [&](const SweepAxis& a) { return a.key == key; });
    if (key == "reps") {
      into.reps = as_size(key, value);
      if (into.reps < 1) throw ConfigError(key, "must be >= 1");
      continue;
    }
    if (value.is_array() && !(key == "initial" && is_explicit_initial(value))) {
      if (value.empty()) throw ConfigError(key, "sweep axis has no values");
      if (key == "emit_trace") throw ConfigError(key, "cannot be swept");
      SweepAxis axis{key, {}};
      for (const json& x : value) {
        RunConfig probe = into.base;
        apply_key(probe, key, x);
        axis.values.push_back(x);
      }
      into.axes.push_back(std::move(axis));
      continue;
    }
    apply_key(into.base, key, value);
  }
  const auto& keys = config_keys();
  std::sort(into.axes.begin(), into.axes.end(), [&](const SweepAxis& a, const SweepAxis& b) {
    return std::find(keys.begin(), keys.end(), a.key) < std::find(keys.begin(), keys.end(), b.key);
  });
}

ConfigDocument parse_config(const json& doc) {
  ConfigDocument out;
  merge_config(out, doc);
  return out;
}

ConfigDocument load_config_file(const std::filesystem::path& path) {
  std::filesystem::path resolved = path;
  if (!std::filesystem::exists(resolved) && path.is_relative()) {
    if (const char* dir = std::getenv("TOKDIS_CONFIG_DIR")) resolved = std::filesystem::path(dir) / path;
  }
  std::ifstream in(resolved);
  if (!in) throw ConfigError("config", "cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

std::vector<RunConfig> expand(const ConfigDocument& doc) {
  std::vector<RunConfig> points{doc.base};
  for (const SweepAxis& axis : doc.axes) {
    std::vector<RunConfig> next;
    next.reserve(points.size() * axis.values.size());
    for (const RunConfig& p : points)
      for (const json& v : axis.values) {
        RunConfig q = p;
        apply_key(q, axis.key, v);
        next.push_back(std::move(q));
      }
    points = std::move(next);
  }
  for (const RunConfig& p : points) validate(p);
  return points;
}

json to_json(const RunConfig& c) {
  json j;
  j["n"] = c.n;
  j["k"] = c.k;
  j["b"] = c.b;
  j["c"] = c.c;
  j["T"] = c.T;
  j["delta"] = c.delta;
  j["p_kprime"] = c.p_kprime ? json(*c.p_kprime) : json(nullptr);
  j["epsilon"] = c.epsilon;
  j["alpha"] = c.alpha;
  j["q_initial"] = c.initial.q;
  switch (c.initial.kind) {
    case InitialKind::bernoulli: j["initial"] = "bernoulli"; break;
    case InitialKind::single_source: j["initial"] = "single-source"; break;
    case InitialKind::explicit_sets: j["initial"] = c.initial.sets; break;
  }
  j["protocol"] = c.protocol;
  j["adversary"] = c.adversary;
  j["seed"] = c.seed;
  j["max_rounds"] = c.max_rounds;
  switch (c.termination) {
    case Termination::full: j["termination"] = "full"; break;
    case Termination::partial: j["termination"] = "partial"; break;
    case Termination::fec: j["termination"] = "fec"; break;
  }
  j["local_view"] = c.local_view;
  j["emit_trace"] = c.emit_trace;
  return j;
}

}  // namespace tokdis
