#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "sinrsched/model.hpp"

namespace sinrsched {

inline constexpr int kInstanceFormatVersion = 1;

// Instance file layout (JSON, UTF-8):
//   version: 1
//   metric:  {"type":"euclidean","dim":m} or
//            {"type":"matrix","n":k,"d":[strict upper triangle, row-major]}
//   points:  [[x0,...], ...]              (euclidean only)
//   params:  {"alpha":..,"beta":..,"noise":..}
//   links:   [{"s":point,"r":point,"w":weight}, ...]
nlohmann::json InstanceToJson(const Instance& inst);
Instance InstanceFromJson(const nlohmann::json& j);

std::string DumpInstance(const Instance& inst);
Instance ParseInstance(const std::string& text);

void SaveInstance(const Instance& inst, const std::string& path);
Instance LoadInstance(const std::string& path);

}  // namespace sinrsched
