#pragma once

#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "muw/common.hpp"
#include "muw/operator.hpp"
#include "muw/space.hpp"

namespace muw {

// File formats for endomorphisms. JSON:
//   {"space":{"factors":[{"dim":d,"conjugate":false},...]},"data":[[re,im],...]}
// with data row-major. Binary: magic "MUOP", version u16, factor table,
// little-endian f64 interleaved re/im, row-major. Both round-trip bit-exactly.

inline nlohmann::ordered_json space_to_json(const Space& s) {
  nlohmann::ordered_json factors = nlohmann::ordered_json::array();
  for (const auto& f : s.factors()) {
    nlohmann::ordered_json jf;
    jf["dim"] = f.dim;
    jf["conjugate"] = f.conjugate;
    factors.push_back(jf);
  }
  nlohmann::ordered_json out;
  out["factors"] = factors;
  return out;
}

inline Space space_from_json(const nlohmann::json& j) {
  if (!j.contains("factors") || !j["factors"].is_array())
    throw ParseError("space: missing factors array");
  std::vector<Factor> fs;
  for (const auto& jf : j["factors"]) {
    Factor f;
    if (!jf.contains("dim") || !jf["dim"].is_number_integer())
      throw ParseError("space factor: missing integer dim");
    f.dim = jf["dim"].get<int>();
    if (f.dim < 1) throw ParseError("space factor: dim must be >= 1");
    f.conjugate = jf.value("conjugate", false);
    fs.push_back(f);
  }
  return Space(std::move(fs));
}

inline nlohmann::ordered_json operator_to_json(const Operator& op) {
  if (!op.is_endo()) throw ShapeError("serialization: operator must be an endomorphism");
  nlohmann::ordered_json out;
  out["space"] = space_to_json(op.domain());
  nlohmann::ordered_json data = nlohmann::ordered_json::array();
  const Mat& m = op.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      data.push_back(nlohmann::ordered_json::array({m(i, j).real(), m(i, j).imag()}));
  out["data"] = std::move(data);
  return out;
}

inline Operator operator_from_json(const nlohmann::json& j) {
  if (!j.contains("space")) throw ParseError("operator: missing space");
  const Space s = space_from_json(j["space"]);
  if (!j.contains("data") || !j["data"].is_array()) throw ParseError("operator: missing data array");
  const long d = s.dim();
  const auto& data = j["data"];
  if (static_cast<long>(data.size()) != d * d)
    throw ParseError("operator: data has " + std::to_string(data.size()) + " entries, expected " +
                     std::to_string(d * d));
  Mat m(d, d);
  long idx = 0;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j2 = 0; j2 < d; ++j2) {
      const auto& e = data[static_cast<std::size_t>(idx++)];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw ParseError("operator: data entries must be [re, im] pairs");
      m(i, j2) = cd(e[0].get<double>(), e[1].get<double>());
    }
  return Operator::on(s, std::move(m));
}

namespace detail {

template <typename T>
void put_raw(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

template <typename T>
T get_raw(const std::string& in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) throw ParseError("binary operator: truncated file");
  T v;
  std::memcpy(&v, in.data() + pos, sizeof(T));
  pos += sizeof(T);
  return v;
}

}  // namespace detail

inline std::string operator_to_binary(const Operator& op) {
  if (!op.is_endo()) throw ShapeError("serialization: operator must be an endomorphism");
  std::string out = "MUOP";
  detail::put_raw<std::uint16_t>(out, 1);  // version
  detail::put_raw<std::uint16_t>(out, 0);  // reserved
  detail::put_raw<std::uint32_t>(out, static_cast<std::uint32_t>(op.domain().factor_count()));
  for (const auto& f : op.domain().factors()) {
    detail::put_raw<std::uint32_t>(out, static_cast<std::uint32_t>(f.dim));
    detail::put_raw<std::uint8_t>(out, f.conjugate ? 1 : 0);
  }
  const Mat& m = op.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      detail::put_raw<double>(out, m(i, j).real());
      detail::put_raw<double>(out, m(i, j).imag());
    }
  return out;
}

inline Operator operator_from_binary(const std::string& in) {
  if (in.size() < 8 || in.compare(0, 4, "MUOP") != 0)
    throw ParseError("binary operator: bad magic");
  std::size_t pos = 4;
  const auto version = detail::get_raw<std::uint16_t>(in, pos);
  if (version != 1) throw ParseError("binary operator: unsupported version");
  detail::get_raw<std::uint16_t>(in, pos);
  const auto nf = detail::get_raw<std::uint32_t>(in, pos);
  if (nf > 64) throw ParseError("binary operator: implausible factor count");
  std::vector<Factor> fs;
  for (std::uint32_t i = 0; i < nf; ++i) {
    Factor f;
    f.dim = static_cast<int>(detail::get_raw<std::uint32_t>(in, pos));
    if (f.dim < 1) throw ParseError("binary operator: factor dim must be >= 1");
    f.conjugate = detail::get_raw<std::uint8_t>(in, pos) != 0;
    fs.push_back(f);
  }
  const Space s{std::vector<Factor>(fs)};
  const long d = s.dim();
  if (in.size() - pos != static_cast<std::size_t>(d) * static_cast<std::size_t>(d) * 16)
    throw ParseError("binary operator: payload size mismatch");
  Mat m(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      const double re = detail::get_raw<double>(in, pos);
      const double im = detail::get_raw<double>(in, pos);
      m(i, j) = cd(re, im);
    }
  return Operator::on(s, std::move(m));
}

inline void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot open for writing: " + path);
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw ParseError("write failed: " + path);
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot open: " + path);
  std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return bytes;
}

inline void save_operator(const Operator& op, const std::string& path, const std::string& format) {
  if (format == "json")
    write_file(path, operator_to_json(op).dump(2) + "\n");
  else if (format == "bin")
    write_file(path, operator_to_binary(op));
  else
    throw ParameterError("unknown format: " + format);
}

inline Operator load_operator(const std::string& path) {
  const std::string bytes = read_file(path);
  if (bytes.size() >= 4 && bytes.compare(0, 4, "MUOP") == 0) return operator_from_binary(bytes);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return operator_from_json(j);
}

}  // namespace muw
