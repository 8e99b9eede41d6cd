#pragma once

// Instance JSON files:
//   {"c": ["2","1"], "mu": ["1/2","1/2"], "order": 40, "domain": "rational"}
// with optional "precision_bits" (float domain) and "label".

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include <negser/instance.hpp>
#include <negser/series.hpp>

namespace negser {

/// File could not be read or written.
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A validated instance plus its run settings. Values are kept exact; float
/// runs widen them at `precision_bits`.
struct InstanceSpec {
  ExactInstance instance;
  std::size_t order = default_order;
  Domain domain = Domain::exact;
  long precision_bits = default_precision_bits;
};

namespace detail {
inline std::vector<Rational> parse_number_array(const nlohmann::json& j, const char* field, bool allow_decimal) {
  if (!j.contains(field) || !j.at(field).is_array())
    throw instance_error(InstanceErrc::schema, 0, std::string("field '") + field + "' must be an array");
  std::vector<Rational> out;
  std::size_t index = 0;
  for (const auto& v : j.at(field)) {
    ++index;
    std::string text;
    if (v.is_string()) {
      text = v.get<std::string>();
    } else if (v.is_number_integer()) {
      text = std::to_string(v.get<long long>());
    } else {
      throw instance_error(InstanceErrc::schema, index,
                           std::string(field) + "[" + std::to_string(index) + "] must be a rational string");
    }
    try {
      out.push_back(parse_number(text, allow_decimal));
    } catch (const parse_error& e) {
      throw instance_error(InstanceErrc::malformed_rational, index,
                           std::string(field) + "_" + std::to_string(index) + ": " + e.what());
    }
  }
  return out;
}
} // namespace detail

inline InstanceSpec parse_instance_json(const nlohmann::json& j) {
  if (!j.is_object()) throw instance_error(InstanceErrc::schema, 0, "instance must be a JSON object");
  InstanceSpec spec{ExactInstance::make({Rational(1)}, {Rational(1, 2)})};
  if (j.contains("domain")) {
    const auto d = j.at("domain").get<std::string>();
    if (d == "rational")
      spec.domain = Domain::exact;
    else if (d == "float")
      spec.domain = Domain::floating;
    else
      throw instance_error(InstanceErrc::schema, 0, "domain must be \"rational\" or \"float\", got \"" + d + "\"");
  }
  if (j.contains("order")) {
    if (!j.at("order").is_number_integer() || j.at("order").get<long long>() < 1)
      throw instance_error(InstanceErrc::schema, 0, "order must be an integer >= 1");
    spec.order = j.at("order").get<std::size_t>();
  }
  if (j.contains("precision_bits")) {
    if (!j.at("precision_bits").is_number_integer() || j.at("precision_bits").get<long long>() < 53)
      throw instance_error(InstanceErrc::schema, 0, "precision_bits must be an integer >= 53");
    spec.precision_bits = j.at("precision_bits").get<long>();
  }
  const bool floating = spec.domain == Domain::floating;
  auto c = detail::parse_number_array(j, "c", floating);
  auto mu = detail::parse_number_array(j, "mu", floating);
  std::string label = j.contains("label") ? j.at("label").get<std::string>() : std::string{};
  spec.instance = ExactInstance::make(std::move(c), std::move(mu), std::move(label));
  if (floating) {
    for (std::size_t k = 2; k <= spec.instance.size(); ++k)
      if (spec.instance.c_at(k - 1) - spec.instance.c_at(k) < float_min_gap)
        throw instance_error(InstanceErrc::gap_too_small, k,
                             "float instance: c_" + std::to_string(k - 1) + " - c_" + std::to_string(k) +
                                 " is below the minimum gap 1e-12");
  }
  return spec;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot write " + path.string());
  out << content;
  if (!out) throw io_error("write failed for " + path.string());
}

inline InstanceSpec parse_instance_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw instance_error(InstanceErrc::schema, 0, std::string("invalid JSON: ") + e.what());
  }
  try {
    return parse_instance_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw instance_error(InstanceErrc::schema, 0, e.what());
  }
}

inline InstanceSpec parse_instance_file(const std::filesystem::path& path) {
  return parse_instance_text(read_file(path));
}

inline nlohmann::json instance_to_json(const ExactInstance& inst, std::size_t order, Domain domain,
                                       std::optional<long> precision_bits = std::nullopt) {
  nlohmann::json j;
  j["c"] = nlohmann::json::array();
  j["mu"] = nlohmann::json::array();
  for (const auto& x : inst.c()) j["c"].push_back(to_string(x));
  for (const auto& x : inst.mu()) j["mu"].push_back(to_string(x));
  j["order"] = order;
  j["domain"] = std::string(to_string(domain));
  if (precision_bits) j["precision_bits"] = *precision_bits;
  if (!inst.label().empty()) j["label"] = inst.label();
  return j;
}

/// JSON array of coefficient strings, index = power of t.
template <Field T>
nlohmann::json series_to_json(const TruncatedSeries<T>& s) {
  return nlohmann::json(to_strings(s));
}

} // namespace negser
