#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <unistd.h>

#include "fockshift/cli.hpp"

namespace fockshift::cli {

namespace {

std::string key_path(const std::string& path, const std::string& key) { return path + "[\"" + key + "\"]"; }
std::string field_path(const std::string& path, const std::string& key) { return path + "." + key; }

const Json& require(const Json& doc, const std::string& key, const std::string& path) {
  if (!doc.contains(key)) throw ConfigError(field_path(path, key), "missing required field");
  return doc.at(key);
}

int as_int(const Json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
  return v.get<int>();
}

double as_number(const Json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(path, "expected a finite number");
  return x;
}

double as_weight(const Json& v, const std::string& path) {
  const double x = as_number(v, path);
  if (!(x > 0.0)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    throw ConfigError(path, std::string("weights are assumed strictly positive, got ") + buf);
  }
  return x;
}

std::vector<double> as_weight_list(const Json& v, int n, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "expected an array of " + std::to_string(n) + " weights");
  if (static_cast<int>(v.size()) != n) {
    throw ConfigError(path, "expected " + std::to_string(n) + " entries, got " + std::to_string(v.size()));
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_weight(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

WeightTable as_table(const Json& v, int n, const std::string& path) {
  if (!v.is_object()) throw ConfigError(path, "expected an object with \"i:w\" keys");
  WeightTable out;
  for (const auto& [key, value] : v.items()) {
    const std::string where = key_path(path, key);
    const auto colon = key.find(':');
    if (colon == std::string::npos) throw ConfigError(where, "key must look like \"i:w\"");
    int letter = 0;
    try {
      std::size_t used = 0;
      letter = std::stoi(key.substr(0, colon), &used);
      if (used != colon) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ConfigError(where, "letter before ':' must be an integer");
    }
    if (letter < 1 || letter > n) throw ConfigError(where, "letter outside 1.." + std::to_string(n));
    Word w;
    try {
      w = Word::parse(key.substr(colon + 1), n);
    } catch (const DomainError& e) {
      throw ConfigError(where, e.what());
    }
    out[{letter, w}] = as_weight(value, where);
  }
  return out;
}

void reject_unknown(const Json& doc, const std::set<std::string>& allowed, const std::string& path) {
  for (const auto& [key, value] : doc.items()) {
    if (!allowed.count(key)) throw ConfigError(field_path(path, key), "unknown field");
  }
}

const std::set<std::string> kRunFields = {"depth", "tolerance", "epsilon", "grid"};

std::set<std::string> family_fields(const std::string& family) {
  if (family == "constant") return {"value"};
  if (family == "scaled") return {"scales"};
  if (family == "finite_perturbation") return {"cutoff", "table", "tail"};
  if (family == "periodic") return {"period", "remainders"};
  if (family == "two_letter_m") return {"m", "c"};
  return {};
}

WeightSystem build_weights(const Json& doc, const std::string& path) {
  if (!doc.is_object()) throw ConfigError(path, "expected an object");
  const int n = as_int(require(doc, "n", path), field_path(path, "n"));
  if (n < 1 || n > kMaxAlphabet) throw ConfigError(field_path(path, "n"), "alphabet size outside 1..255");
  const auto& fam = require(doc, "family", path);
  if (!fam.is_string()) throw ConfigError(field_path(path, "family"), "expected a string");
  const auto family = fam.get<std::string>();
  try {
    if (family == "constant") {
      return WeightSystem::constant(n, as_weight(require(doc, "value", path), field_path(path, "value")));
    }
    if (family == "scaled") {
      return WeightSystem::scaled(as_weight_list(require(doc, "scales", path), n, field_path(path, "scales")));
    }
    if (family == "finite_perturbation") {
      const int cutoff = as_int(require(doc, "cutoff", path), field_path(path, "cutoff"));
      if (cutoff < 0) throw ConfigError(field_path(path, "cutoff"), "must be nonnegative");
      auto table = as_table(require(doc, "table", path), n, field_path(path, "table"));
      for (const auto& [key, value] : table) {
        if (static_cast<int>(key.second.length()) > cutoff) {
          throw ConfigError(key_path(field_path(path, "table"), std::to_string(key.first) + ":" + key.second.str(n)),
                            "word longer than the cutoff");
        }
      }
      return WeightSystem::finite_perturbation(n, cutoff, std::move(table),
                                               as_weight_list(require(doc, "tail", path), n, field_path(path, "tail")));
    }
    if (family == "periodic") {
      const int period = as_int(require(doc, "period", path), field_path(path, "period"));
      if (period < 1) throw ConfigError(field_path(path, "period"), "must be at least 1");
      return WeightSystem::periodic(n, period,
                                    as_table(require(doc, "remainders", path), n, field_path(path, "remainders")));
    }
    if (family == "two_letter_m") {
      if (n != 2) throw ConfigError(field_path(path, "n"), "two_letter_m needs n = 2");
      return WeightSystem::two_letter_m(as_weight(require(doc, "m", path), field_path(path, "m")),
                                        as_weight(require(doc, "c", path), field_path(path, "c")));
    }
  } catch (const DomainError& e) {
    throw ConfigError(path, e.what());
  }
  throw ConfigError(field_path(path, "family"),
                    "unknown family \"" + family + "\" (constant, scaled, finite_perturbation, periodic, two_letter_m)");
}

}  // namespace

WeightSystem parse_weights(const Json& doc) {
  if (!doc.is_object()) throw ConfigError("$", "expected an object");
  std::set<std::string> allowed = {"n", "family"};
  if (doc.contains("family") && doc.at("family").is_string()) {
    for (const auto& f : family_fields(doc.at("family").get<std::string>())) allowed.insert(f);
  }
  reject_unknown(doc, allowed, "$");
  return build_weights(doc, "$");
}

RunConfig parse_config(const Json& doc) {
  if (!doc.is_object()) throw ConfigError("$", "expected an object");
  RunConfig config;
  Json weights = Json::object();
  std::set<std::string> allowed = kRunFields;
  allowed.insert("n");
  allowed.insert("family");
  if (doc.contains("family") && doc.at("family").is_string()) {
    for (const auto& f : family_fields(doc.at("family").get<std::string>())) allowed.insert(f);
  }
  reject_unknown(doc, allowed, "$");
  for (const auto& [key, value] : doc.items()) {
    if (!kRunFields.count(key)) weights[key] = value;
  }
  config.weights = build_weights(weights, "$");
  config.weights_doc = weights;
  if (doc.contains("depth")) {
    config.depth = as_int(doc.at("depth"), "$.depth");
    if (config.depth < 1) throw ConfigError("$.depth", "must be at least 1");
  }
  if (doc.contains("tolerance")) {
    config.tolerance = as_number(doc.at("tolerance"), "$.tolerance");
    if (!(config.tolerance > 0.0)) throw ConfigError("$.tolerance", "must be positive");
  }
  if (doc.contains("epsilon")) {
    config.epsilon = as_number(doc.at("epsilon"), "$.epsilon");
    if (!(config.epsilon > 0.0 && config.epsilon < 1.0)) throw ConfigError("$.epsilon", "must lie in (0, 1)");
  }
  if (doc.contains("grid")) {
    if (!doc.at("grid").is_string()) throw ConfigError("$.grid", "expected a string lo:hi:step");
    try {
      config.grid = GridSpec::parse(doc.at("grid").get<std::string>());
    } catch (const DomainError& e) {
      throw ConfigError("$.grid", e.what());
    }
  }
  return config;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open file");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path, std::string("malformed JSON: ") + e.what());
  }
}

RunConfig load_config(const std::string& path) {
  const auto doc = read_json_file(path);
  try {
    return parse_config(doc);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ":" + e.path(), std::string(e.what()).substr(e.path().size() + 2));
  }
}

std::vector<cplx> parse_lambda(std::string_view text) {
  std::vector<cplx> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string token(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    const char* s = token.c_str();
    char* end = nullptr;
    errno = 0;
    const double first = std::strtod(s, &end);
    if (end == s || errno == ERANGE) throw DomainError("bad complex literal \"" + token + "\"");
    cplx value;
    if (*end == '\0') {
      value = first;
    } else if (*end == 'i' && end[1] == '\0') {
      value = cplx(0.0, first);
    } else if (*end == '+' || *end == '-') {
      const char* rest = end;
      const double second = std::strtod(rest, &end);
      if (end == rest || *end != 'i' || end[1] != '\0') throw DomainError("bad complex literal \"" + token + "\"");
      value = cplx(first, second);
    } else {
      throw DomainError("bad complex literal \"" + token + "\"");
    }
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
      throw DomainError("complex literal \"" + token + "\" is not finite");
    }
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

CoeffMap parse_coeff_map(const Json& doc, int n, const std::string& path) {
  if (!doc.is_object()) throw ConfigError(path, "expected an object of \"w\": [re, im]");
  CoeffMap out;
  for (const auto& [key, value] : doc.items()) {
    const std::string where = key_path(path, key);
    Word w;
    try {
      w = Word::parse(key, n);
    } catch (const DomainError& e) {
      throw ConfigError(where, e.what());
    }
    if (!value.is_array() || value.size() != 2) throw ConfigError(where, "expected [re, im]");
    out[w] = cplx(as_number(value[0], where + "[0]"), as_number(value[1], where + "[1]"));
  }
  return out;
}

FourierElement parse_fourier(const Json& doc, int n) {
  if (!doc.is_object()) throw ConfigError("$", "expected an object");
  reject_unknown(doc, {"coeffs"}, "$");
  FourierElement a;
  a.n = n;
  a.coeffs = parse_coeff_map(require(doc, "coeffs", "$"), n, "$.coeffs");
  return a;
}

Json config_echo(const RunConfig& config) {
  Json out = Json::object();
  out["weights"] = config.weights_doc ? *config.weights_doc : Json(nullptr);
  out["depth"] = config.depth;
  out["tolerance"] = config.tolerance;
  out["epsilon"] = config.epsilon;
  if (config.grid) {
    out["grid"] = {{"lo", config.grid->lo}, {"hi", config.grid->hi}, {"step", config.grid->step}};
  }
  if (!config.lambdas.empty()) {
    Json list = Json::array();
    for (const auto& lambda : config.lambdas) {
      Json tuple = Json::array();
      for (const cplx& x : lambda) tuple.push_back({x.real(), x.imag()});
      list.push_back(tuple);
    }
    out["lambda"] = list;
  }
  if (config.coeffs_doc) out["coeffs"] = *config.coeffs_doc;
  if (!config.k.empty()) out["k"] = config.k;
  out["mode"] = config.mode;
  out["assumed"] = config.assumed;
  out["seed"] = kSeed;
  return out;
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename into " + path + ": " + ec.message());
  }
}

}  // namespace fockshift::cli
