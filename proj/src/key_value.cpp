#include "ssc/key_value.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

#include "ssc/errors.hpp"

namespace ssc {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, std::size_t line, const std::string& text,
                            const char* expected) {
  throw ConfigError("line " + std::to_string(line) + ": key '" + key + "' expects " + expected +
                    ", got '" + text + "'");
}

}  // namespace

KeyValues KeyValues::parse(const std::string& text) {
  KeyValues kv;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (!kv.values_.emplace(key, Value{value, line_no}).second) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }
  return kv;
}

const KeyValues::Value* KeyValues::find(const std::string& key) const {
  const auto it = values_.find(key);
  return it == values_.end() ? nullptr : &it->second;
}

void KeyValues::take(const std::string& key, std::string& out) {
  if (const Value* v = find(key)) {
    out = v->text;
    values_.erase(key);
  }
}

void KeyValues::take(const std::string& key, double& out) {
  if (const Value* v = find(key)) {
    const char* first = v->text.data();
    const char* last = first + v->text.size();
    double parsed = 0.0;
    const auto res = std::from_chars(first, last, parsed);
    if (res.ec != std::errc() || res.ptr != last) bad_value(key, v->line, v->text, "a number");
    out = parsed;
    values_.erase(key);
  }
}

void KeyValues::take(const std::string& key, std::size_t& out) {
  if (const Value* v = find(key)) {
    const char* first = v->text.data();
    const char* last = first + v->text.size();
    std::size_t parsed = 0;
    const auto res = std::from_chars(first, last, parsed);
    if (res.ec != std::errc() || res.ptr != last) {
      bad_value(key, v->line, v->text, "a non-negative integer");
    }
    out = parsed;
    values_.erase(key);
  }
}

void KeyValues::take_u64(const std::string& key, std::uint64_t& out) {
  if (const Value* v = find(key)) {
    const char* first = v->text.data();
    const char* last = first + v->text.size();
    std::uint64_t parsed = 0;
    const auto res = std::from_chars(first, last, parsed);
    if (res.ec != std::errc() || res.ptr != last) {
      bad_value(key, v->line, v->text, "a non-negative integer");
    }
    out = parsed;
    values_.erase(key);
  }
}

void KeyValues::take(const std::string& key, bool& out) {
  if (const Value* v = find(key)) {
    if (v->text == "true" || v->text == "1") {
      out = true;
    } else if (v->text == "false" || v->text == "0") {
      out = false;
    } else {
      bad_value(key, v->line, v->text, "true or false");
    }
    values_.erase(key);
  }
}

void KeyValues::take(const std::string& key, std::vector<std::size_t>& out) {
  if (const Value* v = find(key)) {
    std::vector<std::size_t> parsed;
    std::istringstream items(v->text);
    std::string item;
    while (std::getline(items, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      std::size_t n = 0;
      const auto res = std::from_chars(item.data(), item.data() + item.size(), n);
      if (res.ec != std::errc() || res.ptr != item.data() + item.size()) {
        bad_value(key, v->line, v->text, "a comma-separated list of integers");
      }
      parsed.push_back(n);
    }
    out = std::move(parsed);
    values_.erase(key);
  }
}

void KeyValues::expect_empty() const {
  if (!values_.empty()) {
    const auto& [key, value] = *values_.begin();
    throw ConfigError("line " + std::to_string(value.line) + ": unknown key '" + key + "'");
  }
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_list(const std::vector<std::size_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(v[i]);
  }
  return out;
}

}  // namespace ssc
