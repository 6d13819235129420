#include "reluriesz/coeff_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "reluriesz/errors.hpp"

namespace reluriesz {

namespace {

using nlohmann::json;

json terms_json(const CoeffSeries& c) {
  json terms = json::array();
  for (const auto& [k, cp] : c.terms) {
    json k_arr = json::array();
    for (auto v : k.entries()) k_arr.push_back(v);
    terms.push_back({{"k", std::move(k_arr)}, {"c", cp.c}, {"s", cp.s}});
  }
  return terms;
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(path + ": missing field '" + key + "'");
  return *it;
}

double require_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ParseError(path + ": expected a number");
  return v.get<double>();
}

template <class Coeffs>
Coeffs parse_series(const json& doc, const std::string& constant_key) {
  const json& dim_v = require(doc, "dim", "$");
  if (!dim_v.is_number_integer() || dim_v.get<std::int64_t>() < 1) throw ParseError("$.dim: expected a positive integer");
  Coeffs out(static_cast<int>(dim_v.get<std::int64_t>()), require_number(require(doc, constant_key, "$"), "$." + constant_key));
  const json& terms = require(doc, "terms", "$");
  if (!terms.is_array()) throw ParseError("$.terms: expected an array");
  std::set<MultiIndex> seen;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string path = "$.terms[" + std::to_string(i) + "]";
    const json& t = terms[i];
    if (!t.is_object()) throw ParseError(path + ": expected an object");
    const json& k_v = require(t, "k", path);
    if (!k_v.is_array() || k_v.empty()) throw ParseError(path + ".k: expected a nonempty integer array");
    std::vector<std::int64_t> k;
    for (std::size_t j = 0; j < k_v.size(); ++j) {
      if (!k_v[j].is_number_integer()) throw ParseError(path + ".k[" + std::to_string(j) + "]: expected an integer");
      k.push_back(k_v[j].get<std::int64_t>());
    }
    MultiIndex idx(std::move(k));
    if (!seen.insert(idx).second) throw ParseError(path + ".k: duplicate index " + idx.to_string());
    const double c = t.contains("c") ? require_number(t["c"], path + ".c") : 0.0;
    const double s = t.contains("s") ? require_number(t["s"], path + ".s") : 0.0;
    out.add(idx, c, s);
  }
  out.validate();
  return out;
}

json parse_document(const std::string& text) {
  try {
    json doc = json::parse(text);
    if (!doc.is_object()) throw ParseError("$: expected a JSON object");
    return doc;
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

std::string to_json(const FourierCoeffs& f) {
  json doc = {{"dim", f.dim}, {"a0", f.constant}, {"terms", terms_json(f)}};
  return doc.dump(2) + "\n";
}

std::string to_json(const RieszCoeffs& g) {
  json doc = {{"dim", g.dim}, {"alpha0", g.constant}, {"terms", terms_json(g)}};
  return doc.dump(2) + "\n";
}

AnyCoeffs parse_coeffs(const std::string& text) {
  const json doc = parse_document(text);
  const bool fourier = doc.contains("a0");
  const bool riesz = doc.contains("alpha0");
  if (fourier == riesz) throw ParseError("$: exactly one of 'a0' (Fourier) or 'alpha0' (generator) is required");
  if (fourier) return parse_series<FourierCoeffs>(doc, "a0");
  return parse_series<RieszCoeffs>(doc, "alpha0");
}

FourierCoeffs parse_fourier_coeffs(const std::string& text) {
  auto any = parse_coeffs(text);
  if (auto* f = std::get_if<FourierCoeffs>(&any)) return *f;
  throw ParseError("$: expected Fourier coefficients ('a0'), found generator coefficients");
}

RieszCoeffs parse_riesz_coeffs(const std::string& text) {
  auto any = parse_coeffs(text);
  if (auto* g = std::get_if<RieszCoeffs>(&any)) return *g;
  throw ParseError("$: expected generator coefficients ('alpha0'), found Fourier coefficients");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path.string() + "' for reading");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw UsageError("failed writing '" + path.string() + "'");
}

AnyCoeffs read_coeffs_file(const std::filesystem::path& path) {
  try {
    return parse_coeffs(read_text_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace reluriesz
