#pragma once

#include <cstddef>
#include <initializer_list>
#include <map>
#include <string>
#include <string_view>

#include "json.hpp"

namespace uavlab {

/// Maps JSON-pointer paths ("/faults/0/mode") to the 1-based line where the
/// member or element begins, so errors found after parsing can name a line.
class JsonLineIndex {
 public:
  explicit JsonLineIndex(std::string_view text);
  std::size_t line_of(const std::string& pointer) const;

 private:
  std::map<std::string, std::size_t> lines_;
};

/// Parses `text`, converting syntax errors into ParseError with a line.
nlohmann::json parse_json_text(const std::string& text, const std::string& source);

/// Read-only view of one JSON node that reports problems as ParseError
/// carrying the line and field path.
class JsonNode {
 public:
  JsonNode(const nlohmann::json& value, std::string path, const JsonLineIndex& index)
      : value_(&value), path_(std::move(path)), index_(&index) {}

  const nlohmann::json& value() const { return *value_; }
  const std::string& path() const { return path_; }

  bool has(const std::string& key) const;
  JsonNode at(const std::string& key) const;
  JsonNode element(std::size_t i) const;
  std::size_t size() const;
  bool is_array() const { return value_->is_array(); }
  bool is_object() const { return value_->is_object(); }
  bool is_null() const { return value_->is_null(); }

  double number(const std::string& key, double fallback) const;
  double number() const;
  long long integer(const std::string& key, long long fallback) const;
  std::string string(const std::string& key, const std::string& fallback) const;
  std::string string() const;
  bool boolean(const std::string& key, bool fallback) const;

  /// Rejects members not in `allowed`.
  void only(std::initializer_list<std::string_view> allowed) const;
  void expect_object() const;
  void expect_array() const;

  [[noreturn]] void fail(const std::string& message) const;
  [[noreturn]] void fail_member(const std::string& key, const std::string& message) const;

 private:
  const nlohmann::json* value_;
  std::string path_;
  const JsonLineIndex* index_;
};

}  // namespace uavlab
