#pragma once

#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include <json.hpp>

#include "hough/errors.hpp"
#include "hough/family.hpp"

namespace hough {

namespace detail {

using json = nlohmann::json;

inline json bigint_to_json(const BigInt& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
    return json(v.convert_to<std::int64_t>());
  return json(v.str());
}

inline BigInt bigint_from_json(const json& j) {
  if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return BigInt(j.get<std::string>());
    } catch (const std::exception&) {
      throw argument_error("bad integer string '" + j.get<std::string>() + "'");
    }
  }
  throw argument_error("expected integer, got " + j.dump());
}

inline json coord_to_json(const GaussianRational& c) {
  return json::array({to_string(c.re), to_string(c.im)});
}

inline json coord_to_json(const std::complex<double>& c) {
  return json::array({c.real(), c.imag()});
}

}  // namespace detail

/// Structured JSON form of a family. Coefficients are stored as integer
/// numerator/denominator pairs so rationals round-trip bit-exactly; exact
/// base-point coordinates are "p/q" strings, approximate ones are numbers.
inline nlohmann::json family_to_json(const FamilyDefinition& fam) {
  using detail::json;
  json j;
  j["name"] = fam.name();
  j["t"] = fam.t();
  j["d"] = fam.d();
  j["param_names"] = fam.param_names();
  json terms = json::array();
  for (const auto& term : fam.terms()) {
    json poly = json::array();
    for (const auto& [ij, c] : term.poly.terms())
      poly.push_back({{"i", ij.first},
                      {"j", ij.second},
                      {"num", detail::bigint_to_json(numerator_of(c))},
                      {"den", detail::bigint_to_json(denominator_of(c))}});
    terms.push_back({{"mono", term.mono.exponents}, {"poly", poly}});
  }
  j["terms"] = terms;
  json bases = json::array();
  for (const auto& q : fam.base_points()) {
    json coords = json::array();
    if (q.has_exact())
      for (const auto& c : *q.exact()) coords.push_back(detail::coord_to_json(c));
    else
      for (const auto& c : q.coords()) coords.push_back(detail::coord_to_json(c));
    bases.push_back({{"coords", coords}});
  }
  j["base_points"] = bases;
  json grid = json::array();
  for (const auto& ax : fam.param_region())
    grid.push_back({{"min", ax.min}, {"max", ax.max}, {"delta", ax.delta}});
  j["grid"] = grid;
  json window = {{"sampler", fam.window().sampler},
                 {"range", json::array({fam.window().range.lo, fam.window().range.hi})}};
  if (fam.window().bbox) {
    const auto& b = *fam.window().bbox;
    window["bbox"] = json::array({json::array({b.x_range.lo, b.x_range.hi}),
                                  json::array({b.y_range.lo, b.y_range.hi})});
  } else {
    window["bbox"] = nullptr;
  }
  j["window"] = window;
  j["solve_for_last"] = fam.solve_for_last();
  if (fam.reference_params())
    j["reference_params"] = fam.reference_params()->coords;
  else
    j["reference_params"] = nullptr;
  return j;
}

inline FamilyDefinition family_from_json(const nlohmann::json& j) {
  using detail::json;
  try {
    FamilyData data;
    data.name = j.at("name").get<std::string>();
    data.t = j.at("t").get<int>();
    data.d = j.at("d").get<int>();
    if (j.contains("param_names")) data.param_names = j["param_names"].get<std::vector<std::string>>();
    for (const auto& term : j.at("terms")) {
      FamilyTerm ft;
      ft.mono = MonomialExp(term.at("mono").get<std::vector<int>>());
      for (const auto& c : term.at("poly"))
        ft.poly.add_term(c.at("i").get<int>(), c.at("j").get<int>(),
                         make_rational(detail::bigint_from_json(c.at("num")),
                                       detail::bigint_from_json(c.at("den"))));
      data.terms.push_back(std::move(ft));
    }
    for (const auto& bp : j.value("base_points", json::array())) {
      const auto& coords = bp.at("coords");
      if (coords.size() != 3) throw argument_error("base point needs three coordinates");
      bool exact = true;
      for (const auto& c : coords)
        if (!c.at(0).is_string() || !c.at(1).is_string()) exact = false;
      if (exact) {
        std::array<GaussianRational, 3> g;
        for (std::size_t k = 0; k < 3; ++k)
          g[k] = {parse_rational(coords[k][0].get<std::string>()),
                  parse_rational(coords[k][1].get<std::string>())};
        data.base_points.emplace_back(g[0], g[1], g[2]);
      } else {
        std::array<std::complex<double>, 3> c;
        for (std::size_t k = 0; k < 3; ++k)
          c[k] = {coords[k][0].get<double>(), coords[k][1].get<double>()};
        data.base_points.emplace_back(c[0], c[1], c[2]);
      }
    }
    for (const auto& ax : j.value("grid", json::array()))
      data.param_region.push_back(
          {ax.at("min").get<double>(), ax.at("max").get<double>(), ax.at("delta").get<double>()});
    if (j.contains("window")) {
      const auto& w = j["window"];
      data.window.sampler = w.value("sampler", std::string("scan"));
      if (w.contains("range"))
        data.window.range = {w["range"].at(0).get<double>(), w["range"].at(1).get<double>()};
      if (w.contains("bbox") && !w["bbox"].is_null()) {
        const auto& b = w["bbox"];
        data.window.bbox = Window({b.at(0).at(0).get<double>(), b.at(0).at(1).get<double>()},
                                  {b.at(1).at(0).get<double>(), b.at(1).at(1).get<double>()});
      }
    }
    data.solve_for_last = j.value("solve_for_last", false);
    if (j.contains("reference_params") && !j["reference_params"].is_null())
      data.reference_params = ParamPoint(j["reference_params"].get<std::vector<double>>());
    return FamilyDefinition(std::move(data));
  } catch (const json::exception& e) {
    throw argument_error(std::string("malformed family JSON: ") + e.what());
  }
}

inline FamilyDefinition load_family_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw argument_error("cannot open family file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw argument_error("cannot parse '" + path + "': " + e.what());
  }
  return family_from_json(j);
}

}  // namespace hough
