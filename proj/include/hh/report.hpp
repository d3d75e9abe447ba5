#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "hh/solutions.hpp"

namespace hh {

// Minimal ordered JSON value with deterministic serialization: keys keep
// insertion order and every number is rendered as %.16e scientific, so a
// given report is byte-identical across runs.
class Json {
 public:
  static Json null();
  static Json boolean(bool b);
  static Json number(double v);
  static Json integer(long long v);
  static Json string(std::string s);
  static Json array();
  static Json object();

  Json& push(Json v);                         // arrays
  Json& set(const std::string& key, Json v);  // objects

  std::string dump() const;  // two-space indent, trailing newline

 private:
  enum class Type { null_t, bool_t, num_t, int_t, str_t, arr_t, obj_t };
  Type type_ = Type::null_t;
  bool b_ = false;
  double num_ = 0.0;
  long long int_ = 0;
  std::string str_;
  std::vector<Json> arr_;
  std::vector<std::pair<std::string, Json>> obj_;

  void write(std::string& out, int depth) const;
};

Json json_point(const Point& p);
Json json_params(const Params& p);
Json json_checks(const std::vector<Check>& checks);

// {schema, command, family, params, points_evaluated, checks, pass [, kappa]}
Json verify_report(const VerifyResult& r, const std::string& command);

// Family files: JSON with expression-grammar payloads.
//   {"id": ..., "formalism": "W|Sigma|U", "payload": {...}, "params": {...},
//    "box": [[lo,hi] x4], "expected": {...}}
Instantiation load_family_file(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace hh
