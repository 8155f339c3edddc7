#include "json_reader.hpp"

#include <algorithm>
#include <vector>

#include "uavlab/common/error.hpp"

namespace uavlab {

JsonLineIndex::JsonLineIndex(std::string_view text) {
  struct Container {
    bool array = false;
    std::string path;
    std::size_t index = 0;
    std::string key;
  };
  std::vector<Container> stack;
  std::size_t line = 1;
  bool expect_value = true;

  auto value_path = [&]() -> std::string {
    if (stack.empty()) return "";
    const Container& c = stack.back();
    return c.path + "/" + (c.array ? std::to_string(c.index) : c.key);
  };
  auto note_array_element = [&]() {
    if (!stack.empty() && stack.back().array && expect_value) lines_.emplace(value_path(), line);
  };

  lines_.emplace("", 1);
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    switch (ch) {
      case '\n':
        ++line;
        break;
      case '{':
      case '[': {
        note_array_element();
        Container c;
        c.array = ch == '[';
        c.path = value_path();
        stack.push_back(c);
        expect_value = true;
        break;
      }
      case '}':
      case ']':
        if (!stack.empty()) stack.pop_back();
        expect_value = false;
        break;
      case ',':
        if (!stack.empty() && stack.back().array) ++stack.back().index;
        expect_value = true;
        break;
      case ':':
        expect_value = true;
        break;
      case '"': {
        const std::size_t start_line = line;
        std::string s;
        for (++i; i < text.size() && text[i] != '"'; ++i) {
          if (text[i] == '\\' && i + 1 < text.size()) ++i;
          if (text[i] == '\n') ++line;
          s += text[i];
        }
        std::size_t j = i + 1;
        while (j < text.size() && (text[j] == ' ' || text[j] == '\t' || text[j] == '\r' || text[j] == '\n')) {
          if (text[j] == '\n') ++line;
          ++j;
        }
        if (j < text.size() && text[j] == ':' && !stack.empty() && !stack.back().array) {
          stack.back().key = s;
          lines_.emplace(value_path(), start_line);
          i = j;
          expect_value = true;
        } else {
          const std::size_t saved = line;
          line = start_line;
          note_array_element();
          line = saved;
          i = j - 1;
          expect_value = false;
        }
        break;
      }
      case ' ':
      case '\t':
      case '\r':
        break;
      default:
        note_array_element();
        expect_value = false;
        break;
    }
  }
}

std::size_t JsonLineIndex::line_of(const std::string& pointer) const {
  std::string p = pointer;
  while (true) {
    const auto it = lines_.find(p);
    if (it != lines_.end()) return it->second;
    const auto slash = p.rfind('/');
    if (slash == std::string::npos) return 0;
    p.resize(slash);
  }
}

nlohmann::json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t end = std::min<std::size_t>(e.byte, text.size());
    const std::size_t line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + end, '\n'));
    throw ParseError(source + ":" + std::to_string(line) + ": invalid JSON: " + e.what(), line, "");
  }
}

void JsonNode::fail(const std::string& message) const {
  const std::size_t line = index_->line_of(path_);
  throw ParseError("line " + std::to_string(line) + ", field '" + (path_.empty() ? "/" : path_) + "': " + message,
                   line, path_);
}

void JsonNode::fail_member(const std::string& key, const std::string& message) const {
  JsonNode(*value_, path_ + "/" + key, *index_).fail(message);
}

void JsonNode::expect_object() const {
  if (!value_->is_object()) fail("expected an object");
}

void JsonNode::expect_array() const {
  if (!value_->is_array()) fail("expected an array");
}

bool JsonNode::has(const std::string& key) const { return value_->is_object() && value_->contains(key); }

JsonNode JsonNode::at(const std::string& key) const {
  expect_object();
  if (!value_->contains(key)) fail("missing member '" + key + "'");
  return {(*value_)[key], path_ + "/" + key, *index_};
}

JsonNode JsonNode::element(std::size_t i) const {
  expect_array();
  return {(*value_)[i], path_ + "/" + std::to_string(i), *index_};
}

std::size_t JsonNode::size() const { return value_->size(); }

double JsonNode::number() const {
  if (!value_->is_number()) fail("expected a number");
  return value_->get<double>();
}

std::string JsonNode::string() const {
  if (!value_->is_string()) fail("expected a string");
  return value_->get<std::string>();
}

double JsonNode::number(const std::string& key, double fallback) const {
  if (!has(key)) return fallback;
  return at(key).number();
}

long long JsonNode::integer(const std::string& key, long long fallback) const {
  if (!has(key)) return fallback;
  const JsonNode n = at(key);
  if (!n.value().is_number_integer()) n.fail("expected an integer");
  return n.value().get<long long>();
}

std::string JsonNode::string(const std::string& key, const std::string& fallback) const {
  if (!has(key)) return fallback;
  return at(key).string();
}

bool JsonNode::boolean(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const JsonNode n = at(key);
  if (!n.value().is_boolean()) n.fail("expected true or false");
  return n.value().get<bool>();
}

void JsonNode::only(std::initializer_list<std::string_view> allowed) const {
  expect_object();
  for (const auto& [key, _] : value_->items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail_member(key, "unknown member");
    }
  }
}

}  // namespace uavlab
