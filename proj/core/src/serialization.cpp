// SPDX-License-Identifier: MIT
#include "sharpweights/serialization.hpp"

#include <fstream>

#include "sharpweights/error.hpp"

namespace sharpweights {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw InvalidArgument(std::string("JSON object lacks field '") + key + "'");
  }
  return j.at(key);
}

std::vector<double> doubles(const Json& j, const char* what) {
  if (!j.is_array()) throw InvalidArgument(std::string(what) + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) throw InvalidArgument(std::string(what) + " must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

Json to_json(const Interval& iv) { return Json::array({iv.a(), iv.b()}); }

Interval interval_from_json(const Json& j) {
  const auto v = doubles(j, "interval");
  if (v.size() != 2) throw InvalidArgument("interval must have two entries");
  return {v[0], v[1]};
}

Json to_json(const StepFunction& f) {
  Json j;
  j["breakpoints"] = std::vector<double>(f.breakpoints().begin(), f.breakpoints().end());
  j["values"] = std::vector<double>(f.values().begin(), f.values().end());
  j["outside"] = f.outside_value();
  j["period"] = f.period() ? Json(*f.period()) : Json(nullptr);
  return j;
}

StepFunction step_function_from_json(const Json& j) {
  auto bp = doubles(field(j, "breakpoints"), "breakpoints");
  auto vals = doubles(field(j, "values"), "values");
  const bool periodic = j.contains("period") && !j.at("period").is_null();
  if (periodic) {
    auto f = StepFunction::periodic(std::move(bp), std::move(vals));
    if (*f.period() != j.at("period").get<double>()) {
      throw InvalidArgument("period does not match the breakpoint span");
    }
    return f;
  }
  const double outside = j.contains("outside") ? j.at("outside").get<double>() : 0.0;
  return {std::move(bp), std::move(vals), outside};
}

Json to_json(const MatrixWeight& w) {
  Json j;
  j["base"] = to_json(w.base());
  j["depth"] = w.depth();
  j["n"] = w.n();
  Json pieces = Json::array();
  for (const auto& m : w.pieces()) {
    std::vector<double> row;
    row.reserve(static_cast<std::size_t>(m.size()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    }
    pieces.push_back(std::move(row));
  }
  j["pieces"] = std::move(pieces);
  return j;
}

MatrixWeight matrix_weight_from_json(const Json& j) {
  const Interval base = interval_from_json(field(j, "base"));
  const int depth = field(j, "depth").get<int>();
  const int n = field(j, "n").get<int>();
  if (n < 1 || n > kMaxMatrixDimension) throw InvalidArgument("matrix weight: bad dimension");
  std::vector<Matrix> pieces;
  for (const auto& row : field(j, "pieces")) {
    const auto v = doubles(row, "piece");
    if (v.size() != static_cast<std::size_t>(n * n)) {
      throw InvalidArgument("matrix weight piece has the wrong number of entries");
    }
    Matrix m(n, n);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) m(r, c) = v[static_cast<std::size_t>(r * n + c)];
    }
    pieces.push_back(std::move(m));
  }
  return {base, depth, std::move(pieces)};
}

Json to_json(const VectorField& f) {
  Json j;
  j["n"] = f.empty() ? 0 : f.front().size();
  Json rows = Json::array();
  for (const auto& v : f) rows.push_back(std::vector<double>(v.data(), v.data() + v.size()));
  j["values"] = std::move(rows);
  return j;
}

VectorField vector_field_from_json(const Json& j) {
  const int n = field(j, "n").get<int>();
  VectorField out;
  for (const auto& row : field(j, "values")) {
    const auto v = doubles(row, "vector");
    if (v.size() != static_cast<std::size_t>(n)) throw InvalidArgument("vector has the wrong size");
    out.push_back(Eigen::Map<const Vector>(v.data(), n));
  }
  return out;
}

Json to_json(const DyadicLattice& lattice) {
  Json j;
  j["id"] = lattice.id();
  j["shift"] = std::vector<int>(lattice.shift().begin(), lattice.shift().end());
  j["base_scale"] = lattice.base_scale();
  j["origin"] = lattice.origin();
  j["generation_cap"] = lattice.generation_cap();
  return j;
}

DyadicLattice lattice_from_json(const Json& j) {
  return {field(j, "id").get<int>(), field(j, "shift").get<std::vector<int>>(),
          field(j, "base_scale").get<double>(), field(j, "origin").get<double>(),
          j.value("generation_cap", DyadicLattice::kDefaultGenerationCap)};
}

Json to_json(const SparseFamily& family) {
  Json j;
  j["lattice"] = to_json(family.lattice());
  Json ids = Json::array();
  for (const auto& c : family.cubes()) ids.push_back(c.id());
  j["cubes"] = std::move(ids);
  j["eta"] = family.eta();
  j["measured_eta"] = family.measured_eta();
  return j;
}

SparseFamily sparse_family_from_json(const Json& j) {
  std::vector<DyadicCube> cubes;
  for (const auto& s : field(j, "cubes")) cubes.push_back(DyadicCube::parse(s.get<std::string>()));
  return {lattice_from_json(field(j, "lattice")), std::move(cubes), field(j, "eta").get<double>()};
}

std::vector<Interval> intervals_from_json(const Json& j) {
  if (!j.is_array()) throw InvalidArgument("interval list must be an array");
  std::vector<Interval> out;
  for (const auto& iv : j) out.push_back(interval_from_json(iv));
  return out;
}

Json to_json(const ApReport& r) {
  return {{"value", r.value},
          {"argmax", to_json(r.argmax)},
          {"stage_one_value", r.stage_one_value},
          {"refinement_residual", r.refinement_residual},
          {"candidates_examined", r.candidates_examined}};
}

Json to_json(const DualityReport& r) {
  return {{"sigma_ap", r.sigma_ap},
          {"w_ap_power", r.w_ap_power},
          {"max_discrepancy", r.max_discrepancy},
          {"worst", to_json(r.worst)},
          {"candidates", r.candidates}};
}

Json to_json(const WeakNormReport& r) {
  return {{"value", r.value}, {"level", r.level}, {"level_grid_size", r.level_grid_size}};
}

Json to_json(const DualHardyReport& r) {
  return {{"value", r.value},
          {"integral", r.integral},
          {"error_estimate", r.error_estimate},
          {"cells", r.cells},
          {"flagged", r.flagged}};
}

Json to_json(const ReducingOperator& r) {
  std::vector<double> a;
  for (Eigen::Index i = 0; i < r.a.rows(); ++i) {
    for (Eigen::Index k = 0; k < r.a.cols(); ++k) a.push_back(r.a(i, k));
  }
  return {{"a", a},         {"cube", to_json(r.cube)},     {"p", r.p},
          {"c_low", r.c_low}, {"c_high", r.c_high},       {"directions", r.directions},
          {"exact", r.exact}};
}

Json to_json(const DominationReport& r) {
  return {{"exponents", r.exponents},
          {"max_ratio", r.max_ratio},
          {"violations", r.violations},
          {"samples", r.samples},
          {"max_stopping_fraction", r.max_stopping_fraction}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace sharpweights
