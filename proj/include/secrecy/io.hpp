#pragma once

// JSON files for channels, states and codes. Complex entries are [re, im]
// pairs; a bare number is read as a real entry.

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "secrecy/codes.hpp"

namespace secrecy {

using Json = nlohmann::json;

namespace io_detail {

inline std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline Json parse_text(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::string msg = e.what();
    // drop the library's own prefix
    if (auto p = msg.find("parse error"); p != std::string::npos) msg = msg.substr(p);
    throw ParseError(origin + ": " + line_column(text, e.byte) + ": " + msg);
  }
}

inline const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + ": missing field \"" + key + "\"");
  return *it;
}

inline std::size_t positive(const Json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() <= 0) throw ParseError(where + ": expected a positive integer");
  return j.get<std::size_t>();
}

inline double number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + ": expected a number");
  return j.get<double>();
}

inline Complex complex_entry(const Json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw ParseError(where + ": expected a number or [re, im]");
}

inline ComplexMatrix matrix(const Json& j, std::size_t dim, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of rows");
  if (j.size() != dim)
    throw ParseError(where + ": expected " + std::to_string(dim) + " rows, found " + std::to_string(j.size()));
  ComplexMatrix m(dim, dim);
  for (std::size_t r = 0; r < dim; ++r) {
    const std::string wr = where + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != dim)
      throw ParseError(wr + ": expected a row of " + std::to_string(dim) + " entries");
    for (std::size_t c = 0; c < dim; ++c) m(r, c) = complex_entry(j[r][c], wr + "[" + std::to_string(c) + "]");
  }
  return m;
}

inline Json matrix_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

inline RealMatrix real_matrix(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ParseError(where + ": expected a nonempty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  RealMatrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const std::string wr = where + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != cols || cols == 0)
      throw ParseError(wr + ": rows must have equal nonzero length");
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = number(j[r][c], wr + "[" + std::to_string(c) + "]");
  }
  return m;
}

}  // namespace io_detail

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(path + ": cannot write file");
  out << text;
  if (!out) throw Error(path + ": write failed");
}

// ---------------------------------------------------------------------------
// Channels

/// Parses and validates a channel; `origin` prefixes diagnostics.
inline CqqWiretapChannel parse_channel(const std::string& text, const std::string& origin = "<channel>") {
  using namespace io_detail;
  Json j = parse_text(text, origin);
  CqqWiretapChannel w;
  const Json& name = field(j, "name", origin);
  if (!name.is_string()) throw ParseError(origin + ": \"name\" must be a string");
  w.name = name.get<std::string>();
  const std::size_t k = positive(field(j, "alphabet", origin), origin + ": alphabet");
  w.dim_b = positive(field(j, "dim_b", origin), origin + ": dim_b");
  w.dim_e = positive(field(j, "dim_e", origin), origin + ": dim_e");
  const Json& states = field(j, "states", origin);
  if (!states.is_array()) throw ParseError(origin + ": \"states\" must be an array");
  if (states.size() != k)
    throw ParseError(origin + ": alphabet is " + std::to_string(k) + " but " + std::to_string(states.size()) +
                     " states are given");
  for (std::size_t x = 0; x < k; ++x) {
    const std::string where = origin + ": states[" + std::to_string(x) + "]";
    w.states.push_back(matrix(field(states[x], "matrix", where), w.dim_b * w.dim_e, where + ".matrix"));
  }
  require_valid(w);
  return w;
}

inline CqqWiretapChannel read_channel(const std::string& path) { return parse_channel(read_file(path), path); }

inline Json channel_json(const CqqWiretapChannel& w) {
  Json states = Json::array();
  for (const auto& m : w.states) states.push_back({{"matrix", io_detail::matrix_json(m)}});
  return {{"name", w.name}, {"alphabet", w.alphabet()}, {"dim_b", w.dim_b}, {"dim_e", w.dim_e}, {"states", states}};
}

// ---------------------------------------------------------------------------
// States

inline DensityOperator parse_state(const std::string& text, const std::string& origin = "<state>") {
  using namespace io_detail;
  Json j = parse_text(text, origin);
  const Json& dj = field(j, "dims", origin);
  if (!dj.is_array() || dj.empty()) throw ParseError(origin + ": \"dims\" must be a nonempty array");
  Dims dims;
  for (std::size_t i = 0; i < dj.size(); ++i) dims.push_back(positive(dj[i], origin + ": dims[" + std::to_string(i) + "]"));
  ComplexMatrix m = matrix(field(j, "matrix", origin), product(dims), origin + ": matrix");
  try {
    return DensityOperator(m, dims);
  } catch (const ValidationError& e) {
    throw ValidationError(origin + ": " + e.what());
  }
}

inline DensityOperator read_state(const std::string& path) { return parse_state(read_file(path), path); }

inline Json state_json(const DensityOperator& rho) {
  return {{"dims", rho.dims()}, {"matrix", io_detail::matrix_json(rho.matrix())}};
}

// ---------------------------------------------------------------------------
// Codes

/// Parses a code; shapes are checked against the channel by validate_code.
inline WiretapCode parse_code(const std::string& text, const std::string& origin = "<code>") {
  using namespace io_detail;
  Json j = parse_text(text, origin);
  WiretapCode c;
  c.m = positive(field(j, "m", origin), origin + ": m");
  c.n = positive(field(j, "n", origin), origin + ": n");
  c.encoder = real_matrix(field(j, "encoder", origin), origin + ": encoder");
  auto it = j.find("decoder");
  if (it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw ParseError(origin + ": \"decoder\" must be an array or null");
    std::vector<ComplexMatrix> povm;
    for (std::size_t u = 0; u < it->size(); ++u) {
      const std::string where = origin + ": decoder[" + std::to_string(u) + "]";
      const Json& mj = field((*it)[u], "matrix", where);
      povm.push_back(matrix(mj, mj.is_array() ? mj.size() : 0, where + ".matrix"));
    }
    c.decoder = std::move(povm);
  }
  return c;
}

inline WiretapCode read_code(const std::string& path) { return parse_code(read_file(path), path); }

inline Json code_json(const WiretapCode& c) {
  Json enc = Json::array();
  for (Eigen::Index u = 0; u < c.encoder.rows(); ++u) {
    Json row = Json::array();
    for (Eigen::Index x = 0; x < c.encoder.cols(); ++x) row.push_back(c.encoder(u, x));
    enc.push_back(row);
  }
  Json dec = nullptr;
  if (c.decoder) {
    dec = Json::array();
    for (const auto& d : *c.decoder) dec.push_back({{"matrix", io_detail::matrix_json(d)}});
  }
  return {{"m", c.m}, {"n", c.n}, {"encoder", enc}, {"decoder", dec}};
}

}  // namespace secrecy
