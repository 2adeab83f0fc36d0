#include "rsd/errors.hpp"
#include "rsd/solver.hpp"

#include <cmath>
#include <limits>

#include <json.hpp>

namespace rsd {

namespace {

using nlohmann::json;

RowSense parse_sense(const std::string& s) {
  if (s == "le" || s == "<=") return RowSense::le;
  if (s == "eq" || s == "=") return RowSense::eq;
  if (s == "ge" || s == ">=") return RowSense::ge;
  throw DomainError("unknown LP row sense '" + s + "'");
}

const char* sense_name(RowSense s) {
  switch (s) {
    case RowSense::le:
      return "le";
    case RowSense::eq:
      return "eq";
    case RowSense::ge:
      return "ge";
  }
  return "le";
}

Vector to_vector(const json& arr, const char* what) {
  if (!arr.is_array()) throw DomainError(std::string("LP field '") + what + "' must be an array");
  Vector v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) v(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
  return v;
}

}  // namespace

LinearProgram lp_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DomainError(std::string("malformed LP JSON: ") + e.what());
  }
  try {
    LinearProgram lp;
    lp.objective = to_vector(doc.at("objective"), "objective");
    const auto n = lp.objective.size();
    const json& rows = doc.value("rows", json::array());
    lp.A = Matrix(static_cast<Eigen::Index>(rows.size()), n);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const Vector r = to_vector(rows[i], "rows");
      if (r.size() != n) throw DomainError("LP row " + std::to_string(i) + " has the wrong length");
      lp.A.row(static_cast<Eigen::Index>(i)) = r.transpose();
    }
    lp.rhs = to_vector(doc.value("rhs", json::array()), "rhs");
    for (const auto& s : doc.value("sense", json::array())) lp.sense.push_back(parse_sense(s.get<std::string>()));
    lp.lower.assign(static_cast<std::size_t>(n), 0.0);
    if (doc.contains("lower")) {
      const json& lo = doc["lower"];
      if (!lo.is_array() || static_cast<Eigen::Index>(lo.size()) != n) {
        throw DomainError("LP field 'lower' must have one entry per variable");
      }
      for (std::size_t j = 0; j < lo.size(); ++j) {
        lp.lower[j] = lo[j].is_null() ? -std::numeric_limits<double>::infinity() : lo[j].get<double>();
      }
    }
    if (doc.contains("upper")) {
      const json& up = doc["upper"];
      if (!up.is_array() || static_cast<Eigen::Index>(up.size()) != n) {
        throw DomainError("LP field 'upper' must have one entry per variable");
      }
      for (const auto& u : up) {
        lp.upper.push_back(u.is_null() ? std::nullopt : std::optional<double>(u.get<double>()));
      }
    }
    lp.validate();
    return lp;
  } catch (const json::exception& e) {
    throw DomainError(std::string("invalid LP JSON: ") + e.what());
  }
}

std::string lp_to_json(const LinearProgram& lp) {
  lp.validate();
  json doc;
  doc["objective"] = std::vector<double>(lp.objective.data(), lp.objective.data() + lp.objective.size());
  json rows = json::array();
  for (Eigen::Index i = 0; i < lp.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index j = 0; j < lp.variables(); ++j) r.push_back(lp.A(i, j));
    rows.push_back(r);
  }
  doc["rows"] = rows;
  doc["rhs"] = std::vector<double>(lp.rhs.data(), lp.rhs.data() + lp.rhs.size());
  json sense = json::array();
  for (RowSense s : lp.sense) sense.push_back(sense_name(s));
  doc["sense"] = sense;
  json lower = json::array();
  for (double l : lp.lower) lower.push_back(std::isinf(l) ? json(nullptr) : json(l));
  doc["lower"] = lower;
  if (!lp.upper.empty()) {
    json upper = json::array();
    for (const auto& u : lp.upper) upper.push_back(u ? json(*u) : json(nullptr));
    doc["upper"] = upper;
  }
  return doc.dump(2);
}

}  // namespace rsd
