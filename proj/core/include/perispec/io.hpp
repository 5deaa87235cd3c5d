// SPDX-License-Identifier: Apache-2.0

#ifndef PERISPEC_IO_HPP
#define PERISPEC_IO_HPP

#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "perispec/blockjacobi.hpp"
#include "perispec/cmv.hpp"
#include "perispec/jacobi.hpp"
#include "perispec/torus.hpp"

namespace perispec {

/// Minimal JSON value for output: byte-deterministic serialization with
/// doubles printed at 17 significant digits.
class JsonValue {
 public:
  using Array = std::vector<JsonValue>;
  // insertion-ordered object
  using Object = std::vector<std::pair<std::string, JsonValue>>;

  JsonValue() : v_(nullptr) {}
  JsonValue(std::nullptr_t) : v_(nullptr) {}
  JsonValue(bool b) : v_(b) {}
  JsonValue(int i) : v_(static_cast<long>(i)) {}
  JsonValue(long i) : v_(i) {}
  JsonValue(double d) : v_(d) {}
  JsonValue(const char* s) : v_(std::string(s)) {}
  JsonValue(std::string s) : v_(std::move(s)) {}
  JsonValue(Array a) : v_(std::move(a)) {}
  JsonValue(Object o) : v_(std::move(o)) {}

  static JsonValue array(Array a = {}) { return JsonValue(std::move(a)); }
  static JsonValue object(Object o = {}) { return JsonValue(std::move(o)); }

  void push_back(JsonValue v);
  void set(const std::string& key, JsonValue v);

  std::string dump() const;

  /// %.17g rendering used for all doubles.
  static std::string format_double(double d);

 private:
  std::variant<std::nullptr_t, bool, long, double, std::string, Array, Object> v_;
  void dump_to(std::string& out) const;
};

JsonValue to_json(const std::vector<double>& v);
JsonValue to_json(const Matrix& m);  // [[re,im], ...] rows

/// Parsers for the on-disk formats (throw InputError on malformed data):
///   PeriodicJacobi      {"p":int,"a":[...],"b":[...]}
///   PeriodicVerblunsky  {"p":int,"alpha":[[re,im],...]}
///   JacobiSeq           {"offset":int,"a":[...],"b":[...],"sided":"one"|"two"}
///   VerblunskySeq       {"offset":int,"alpha":[[re,im],...],"sided":"one"|"two"}
///   BlockJacobi         {"l":int,"blocks":[{"A":[[...]],"B":[[...]]}],"tail":"free"|"none"}
///   TorusSample         [PeriodicJacobi, ...] or {"reference":...,"points":[...]}
PeriodicJacobi parse_periodic_jacobi(const std::string& text);
PeriodicVerblunsky parse_periodic_verblunsky(const std::string& text);
JacobiSeq parse_jacobi_seq(const std::string& text);
VerblunskySeq parse_verblunsky_seq(const std::string& text);
BlockJacobi parse_block_jacobi(const std::string& text);
TorusSample parse_torus_sample(const std::string& text);

JsonValue to_json(const PeriodicJacobi& j);
JsonValue to_json(const PeriodicVerblunsky& v);
JsonValue to_json(const TorusSample& s);
JsonValue to_json(const BlockJacobi& j);

std::string read_file(const std::string& path);

}  // namespace perispec

#endif
