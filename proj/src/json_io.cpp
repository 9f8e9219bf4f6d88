#include "permsolve/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>

namespace permsolve {

namespace {

void dump_into(const Json& j, std::string& out, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        dump_into(it.value(), out, indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::none_of(j.begin(), j.end(), [](const Json& e) { return e.is_structured(); });
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat && indent >= 0 ? ", " : ",";
        first = false;
        if (!flat) newline(depth + 1);
        dump_into(e, out, indent, depth + 1);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) throw ContractError("non-finite number cannot be written as JSON");
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      // Keep a float marker so -0.0 and integral values read back as doubles.
      if (std::strpbrk(buf, ".eE") == nullptr) out += ".0";
      return;
    }
    default:
      out += j.dump();
  }
}

template <typename T>
T get_field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("field \"") + key + "\": " + e.what());
  }
}

}  // namespace

std::string dump_json(const Json& j, int indent) {
  std::string out;
  dump_into(j, out, indent, 0);
  return out;
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

Json to_json(const FilterMatrix& m) {
  Json filters = Json::array();
  for (Index r = 0; r < m.filter_count(); ++r) {
    Json f = Json::array();
    for (Index t = 0; t < m.filter_length(); ++t) {
      const Complex z = m.data()(r, t);
      f.push_back(Json::array({z.real(), z.imag()}));
    }
    filters.push_back(std::move(f));
  }
  Json j;
  j["M"] = m.channels();
  j["N"] = m.sources();
  j["L"] = m.filter_length();
  j["filters"] = std::move(filters);
  return j;
}

FilterMatrix filter_matrix_from_json(const Json& j) {
  const auto M = get_field<Index>(j, "M");
  const auto N = get_field<Index>(j, "N");
  const auto L = get_field<Index>(j, "L");
  if (M < 1 || N < 1 || L < 1) throw DimensionError("M, N, L must all be >= 1");
  if (!j.contains("filters") || !j.at("filters").is_array()) throw ParseError("field \"filters\" must be an array");
  const Json& filters = j.at("filters");
  if (static_cast<Index>(filters.size()) != M * N)
    throw DimensionError("expected M*N = " + std::to_string(M * N) + " filters, found " +
                         std::to_string(filters.size()));
  FilterMatrix::Storage data(M * N, L);
  for (Index r = 0; r < M * N; ++r) {
    const Json& f = filters[static_cast<std::size_t>(r)];
    if (!f.is_array() || static_cast<Index>(f.size()) != L)
      throw DimensionError("filter " + std::to_string(r) + " (row " + std::to_string(r / N) + ", col " +
                           std::to_string(r % N) + ") does not have L = " + std::to_string(L) + " entries");
    for (Index t = 0; t < L; ++t) {
      const Json& z = f[static_cast<std::size_t>(t)];
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number())
        throw ParseError("filter " + std::to_string(r) + " entry " + std::to_string(t) + " is not a [re, im] pair");
      const double re = z[0].get<double>();
      const double im = z[1].get<double>();
      if (!std::isfinite(re) || !std::isfinite(im)) throw ParseError("non-finite filter entry");
      data(r, t) = Complex(re, im);
    }
  }
  return FilterMatrix(M, N, std::move(data));
}

Json to_json(const PermutationSequence& s) {
  Json perms = Json::array();
  for (const auto& p : s.perms()) perms.push_back(p.image());
  Json j;
  j["L"] = s.length();
  j["N"] = s.num_sources();
  j["perms"] = std::move(perms);
  return j;
}

PermutationSequence permutation_sequence_from_json(const Json& j) {
  const auto L = get_field<Index>(j, "L");
  const auto N = get_field<int>(j, "N");
  const auto raw = get_field<std::vector<std::vector<int>>>(j, "perms");
  if (static_cast<Index>(raw.size()) != L)
    throw DimensionError("expected L = " + std::to_string(L) + " permutations, found " + std::to_string(raw.size()));
  std::vector<Permutation> perms;
  perms.reserve(raw.size());
  for (std::size_t w = 0; w < raw.size(); ++w) {
    if (static_cast<int>(raw[w].size()) != N)
      throw DimensionError("permutation " + std::to_string(w) + " does not have N = " + std::to_string(N) + " entries");
    if (!Permutation::is_bijection(raw[w]))
      throw DomainError("permutation " + std::to_string(w) + " is not a bijection on {0..N-1}");
    perms.emplace_back(raw[w]);
  }
  return PermutationSequence(N, std::move(perms));
}

std::string serialize(const PermutationSequence& s) { return dump_json(to_json(s)); }

PermutationSequence deserialize_sequence(std::string_view document) {
  return permutation_sequence_from_json(parse_json(document));
}

}  // namespace permsolve
