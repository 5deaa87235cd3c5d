// SPDX-License-Identifier: Apache-2.0

#include "perispec/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "perispec/errors.hpp"

namespace perispec {

void JsonValue::push_back(JsonValue v) {
  if (!std::holds_alternative<Array>(v_)) throw InputError("JsonValue: push_back on non-array");
  std::get<Array>(v_).push_back(std::move(v));
}

void JsonValue::set(const std::string& key, JsonValue v) {
  if (!std::holds_alternative<Object>(v_)) throw InputError("JsonValue: set on non-object");
  std::get<Object>(v_).emplace_back(key, std::move(v));
}

std::string JsonValue::format_double(double d) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", d);
  return buf;
}

void JsonValue::dump_to(std::string& out) const {
  struct Visitor {
    std::string& out;
    void operator()(std::nullptr_t) const { out += "null"; }
    void operator()(bool b) const { out += b ? "true" : "false"; }
    void operator()(long i) const { out += std::to_string(i); }
    void operator()(double d) const { out += format_double(d); }
    void operator()(const std::string& s) const {
      out += '"';
      for (char c : s) {
        switch (c) {
          case '"': out += "\\\""; break;
          case '\\': out += "\\\\"; break;
          case '\n': out += "\\n"; break;
          case '\t': out += "\\t"; break;
          default: out += c;
        }
      }
      out += '"';
    }
    void operator()(const Array& a) const {
      out += '[';
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (i) out += ',';
        a[i].dump_to(out);
      }
      out += ']';
    }
    void operator()(const Object& o) const {
      out += '{';
      for (std::size_t i = 0; i < o.size(); ++i) {
        if (i) out += ',';
        out += '"' + o[i].first + "\":";
        o[i].second.dump_to(out);
      }
      out += '}';
    }
  };
  std::visit(Visitor{out}, v_);
}

std::string JsonValue::dump() const {
  std::string s;
  dump_to(s);
  return s;
}

JsonValue to_json(const std::vector<double>& v) {
  JsonValue a = JsonValue::array();
  for (double x : v) a.push_back(x);
  return a;
}

JsonValue to_json(const Matrix& m) {
  JsonValue rows = JsonValue::array();
  for (int i = 0; i < m.rows(); ++i) {
    JsonValue row = JsonValue::array();
    for (int j = 0; j < m.cols(); ++j) {
      JsonValue pair = JsonValue::array();
      pair.push_back(m(i, j).real());
      pair.push_back(m(i, j).imag());
      row.push_back(std::move(pair));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

using nlohmann::json;

json parse_or_throw(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw InputError("malformed JSON input");
  return j;
}

std::vector<double> real_list(const json& j, const std::string& key) {
  if (!j.contains(key) || !j[key].is_array()) throw InputError("missing array field '" + key + "'");
  std::vector<double> out;
  for (const auto& v : j[key]) {
    if (!v.is_number()) throw InputError("field '" + key + "' must contain numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::complex<double> complex_entry(const json& v) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  throw InputError("complex entries must be numbers or [re, im] pairs");
}

std::vector<std::complex<double>> complex_list(const json& j, const std::string& key) {
  if (!j.contains(key) || !j[key].is_array()) throw InputError("missing array field '" + key + "'");
  std::vector<std::complex<double>> out;
  for (const auto& v : j[key]) out.push_back(complex_entry(v));
  return out;
}

PeriodicJacobi periodic_jacobi_from(const json& j) {
  PeriodicJacobi p(real_list(j, "a"), real_list(j, "b"));
  if (j.contains("p") && j["p"].get<int>() != p.period())
    throw InputError("PeriodicJacobi: field 'p' disagrees with array lengths");
  return p;
}

}  // namespace

PeriodicJacobi parse_periodic_jacobi(const std::string& text) {
  return periodic_jacobi_from(parse_or_throw(text));
}

PeriodicVerblunsky parse_periodic_verblunsky(const std::string& text) {
  json j = parse_or_throw(text);
  PeriodicVerblunsky v(complex_list(j, "alpha"));
  if (j.contains("p") && j["p"].get<int>() != v.period())
    throw InputError("PeriodicVerblunsky: field 'p' disagrees with array length");
  return v;
}

JacobiSeq parse_jacobi_seq(const std::string& text) {
  json j = parse_or_throw(text);
  JacobiSeq s;
  s.a = real_list(j, "a");
  s.b = real_list(j, "b");
  if (j.contains("sided")) s.two_sided = j["sided"] == "two";
  s.offset = j.contains("offset") ? j["offset"].get<long>() : (s.two_sided ? 0 : 1);
  s.validate();
  return s;
}

VerblunskySeq parse_verblunsky_seq(const std::string& text) {
  json j = parse_or_throw(text);
  VerblunskySeq s;
  s.alpha = complex_list(j, "alpha");
  if (j.contains("sided")) s.two_sided = j["sided"] == "two";
  s.offset = j.contains("offset") ? j["offset"].get<long>() : 0;
  s.validate();
  return s;
}

BlockJacobi parse_block_jacobi(const std::string& text) {
  json j = parse_or_throw(text);
  BlockJacobi b;
  if (!j.contains("l") || !j["l"].is_number_integer())
    throw InputError("BlockJacobi: missing integer field 'l'");
  b.l = j["l"].get<int>();
  b.free_tail = !j.contains("tail") || j["tail"] == "free";
  if (!j.contains("blocks") || !j["blocks"].is_array())
    throw InputError("BlockJacobi: missing array field 'blocks'");
  auto read_matrix = [&](const json& m) {
    if (!m.is_array() || static_cast<int>(m.size()) != b.l)
      throw InputError("BlockJacobi: block must be an l x l matrix");
    Matrix out(b.l, b.l);
    for (int i = 0; i < b.l; ++i) {
      if (!m[i].is_array() || static_cast<int>(m[i].size()) != b.l)
        throw InputError("BlockJacobi: block must be an l x l matrix");
      for (int k = 0; k < b.l; ++k) out(i, k) = complex_entry(m[i][k]);
    }
    return out;
  };
  for (const auto& blk : j["blocks"]) {
    if (blk.contains("B")) b.B.push_back(read_matrix(blk["B"]));
    if (blk.contains("A")) b.A.push_back(read_matrix(blk["A"]));
  }
  b.validate();
  return b;
}

TorusSample parse_torus_sample(const std::string& text) {
  json j = parse_or_throw(text);
  TorusSample s;
  if (j.is_array()) {
    for (const auto& pt : j) s.points.push_back(periodic_jacobi_from(pt));
    if (s.points.empty()) throw InputError("TorusSample: empty sample");
    s.reference = s.points.front();
    return s;
  }
  if (j.contains("reference")) s.reference = periodic_jacobi_from(j["reference"]);
  if (!j.contains("points") || !j["points"].is_array())
    throw InputError("TorusSample: missing array field 'points'");
  for (const auto& pt : j["points"]) s.points.push_back(periodic_jacobi_from(pt));
  if (j.contains("times"))
    for (const auto& t : j["times"]) s.times.push_back(t.get<double>());
  if (s.points.empty()) throw InputError("TorusSample: empty sample");
  return s;
}

JsonValue to_json(const PeriodicJacobi& j) {
  JsonValue o = JsonValue::object();
  o.set("p", static_cast<long>(j.period()));
  o.set("a", to_json(j.a));
  o.set("b", to_json(j.b));
  return o;
}

JsonValue to_json(const PeriodicVerblunsky& v) {
  JsonValue o = JsonValue::object();
  o.set("p", static_cast<long>(v.period()));
  JsonValue arr = JsonValue::array();
  for (const auto& a : v.alpha) {
    JsonValue pair = JsonValue::array();
    pair.push_back(a.real());
    pair.push_back(a.imag());
    arr.push_back(std::move(pair));
  }
  o.set("alpha", std::move(arr));
  return o;
}

JsonValue to_json(const TorusSample& s) {
  JsonValue o = JsonValue::object();
  o.set("reference", to_json(s.reference));
  JsonValue pts = JsonValue::array();
  for (const auto& p : s.points) pts.push_back(to_json(p));
  o.set("points", std::move(pts));
  o.set("times", to_json(s.times));
  return o;
}

JsonValue to_json(const BlockJacobi& j) {
  JsonValue o = JsonValue::object();
  o.set("l", static_cast<long>(j.l));
  JsonValue blocks = JsonValue::array();
  const int n = std::max<int>(j.stored_blocks(), static_cast<int>(j.A.size()));
  for (int k = 1; k <= n; ++k) {
    JsonValue blk = JsonValue::object();
    if (k <= j.stored_blocks()) blk.set("B", to_json(j.B[k - 1]));
    if (k <= static_cast<int>(j.A.size())) blk.set("A", to_json(j.A[k - 1]));
    blocks.push_back(std::move(blk));
  }
  o.set("blocks", std::move(blocks));
  o.set("tail", j.free_tail ? "free" : "none");
  return o;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace perispec
