#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "fogplace/model.hpp"
#include "json.hpp"

namespace fogplace {

/// Malformed document: bad JSON, wrong types, missing or unknown fields.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The file could not be opened, read or written.
class FileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::ordered_json instance_to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::ordered_json& doc);

nlohmann::ordered_json placement_to_json(const Placement& p);
Placement placement_from_json(const nlohmann::ordered_json& doc);

/// Two-space indented JSON followed by a newline. Doubles are printed with
/// round-trip precision, so write -> read is lossless.
std::string dump_document(const nlohmann::ordered_json& doc);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);
nlohmann::ordered_json parse_document(const std::string& text);

Instance read_instance(const std::filesystem::path& path);
void write_instance(const std::filesystem::path& path, const Instance& inst);

namespace json_detail {

/// Wraps a JSON object and records which keys were consumed, so that finish()
/// can reject anything left over.
class ObjectReader {
 public:
  ObjectReader(const nlohmann::ordered_json& obj, std::string path);

  bool has(const std::string& key) const;
  const nlohmann::ordered_json& at(const std::string& key);
  const nlohmann::ordered_json* find(const std::string& key);

  double number(const std::string& key);
  double number_or(const std::string& key, double fallback);
  std::string string(const std::string& key);
  bool boolean_or(const std::string& key, bool fallback);
  std::int64_t integer(const std::string& key);

  std::string child(const std::string& key) const { return path_ + "." + key; }
  void finish() const;

 private:
  const nlohmann::ordered_json& obj_;
  std::string path_;
  std::vector<std::string> used_;
};

double as_number(const nlohmann::ordered_json& value, const std::string& path);
std::int64_t as_integer(const nlohmann::ordered_json& value, const std::string& path);
const nlohmann::ordered_json& as_array(const nlohmann::ordered_json& value, const std::string& path);

}  // namespace json_detail

}  // namespace fogplace
